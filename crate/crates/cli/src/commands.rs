use serde_json::{json, Value};

use m0n_core::census::CensusError;
use m0n_core::intersect::{
    intersection_matrix, matrix_rank, minus_k_closed, minus_k_expanded, pair_divisor_curve, picard_rank,
    virtual_dimension,
};
use m0n_core::limit;
use m0n_core::literal::{
    format_blocks, format_tree, parse_distinguished, parse_label_subset, parse_tree, parse_two_partition_in,
    LiteralError,
};
use m0n_core::mask::{self, Mask};
use m0n_core::trees::{diagnose, make_tree};
use m0n_core::{run_census, LabelSet, PartitionError, Rational, StableTree, TreeError};

use crate::{Format, MatrixAction, Route, TreeAction};

pub const USAGE: u8 = 2;
pub const INVALID: u8 = 3;
pub const INTERNAL: u8 = 4;

pub struct Output {
    pub text: String,
    pub code: u8,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, code: 0 }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
    /// Written to the output even though the command failed.
    pub payload: Option<String>,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: USAGE,
            message: message.into(),
            payload: None,
        }
    }

    fn invalid(message: impl Into<String>) -> Self {
        CliError {
            code: INVALID,
            message: message.into(),
            payload: None,
        }
    }
}

fn partition_code(e: &PartitionError) -> u8 {
    match e {
        PartitionError::TooFewLabels { .. } | PartitionError::TooManyLabels(..) | PartitionError::AboveBound { .. } => {
            USAGE
        }
        _ => INVALID,
    }
}

impl From<PartitionError> for CliError {
    fn from(e: PartitionError) -> Self {
        CliError {
            code: partition_code(&e),
            message: e.to_string(),
            payload: None,
        }
    }
}

impl From<LiteralError> for CliError {
    fn from(e: LiteralError) -> Self {
        match e {
            LiteralError::Partition(p) => p.into(),
            other => CliError::usage(other.to_string()),
        }
    }
}

impl From<TreeError> for CliError {
    fn from(e: TreeError) -> Self {
        match e {
            TreeError::Partition(p) => p.into(),
            other => CliError::invalid(other.to_string()),
        }
    }
}

impl From<CensusError> for CliError {
    fn from(e: CensusError) -> Self {
        match e {
            CensusError::OutOfBounds { .. } => CliError::usage(e.to_string()),
            CensusError::Tree(t) => t.into(),
            CensusError::Partition(p) => p.into(),
        }
    }
}

fn envelope(command: &str, parameters: Value, result: Value) -> String {
    let v = json!({
        "command": command,
        "parameters": parameters,
        "result": result,
        "version": env!("CARGO_PKG_VERSION"),
    });
    let mut s = serde_json::to_string_pretty(&v).expect("json values always serialize");
    s.push('\n');
    s
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("core types serialize")
}

fn standard(n: usize, min: usize) -> Result<LabelSet, CliError> {
    let max = limit::max_n();
    if n < min || n > max {
        return Err(CliError::usage(format!("n must satisfy {min} <= n <= {max}, got {n}")));
    }
    Ok(LabelSet::standard(n)?)
}

pub fn census(n: usize, format: Format) -> Result<Output, CliError> {
    let s = standard(n, 4)?;
    let report = run_census(&s)?;
    let text = match format {
        Format::Json => envelope("census", json!({ "n": n }), to_value(&report)),
        Format::Tsv => report.to_tsv(),
        Format::Table => report.to_table(),
    };
    Ok(Output::ok(text))
}

pub fn pair(sigma: &str, pi: &str) -> Result<Output, CliError> {
    let (s, pi) = parse_distinguished(pi)?;
    let sigma = parse_two_partition_in(sigma, &s)?;
    let value = pair_divisor_curve(&sigma, &pi)?;
    let classification = if pi.in_p_set(&sigma) {
        "P-member"
    } else if pi.in_n_set(&sigma) {
        "N-member"
    } else {
        "neither"
    };
    let result = json!({
        "pairing": value,
        "classification": classification,
        "shape": pi.shape().to_string(),
    });
    let params = json!({
        "sigma": format_blocks(&s, &sigma.parts()),
        "pi": format_blocks(&s, pi.blocks()),
        "n": s.len(),
    });
    Ok(Output::ok(envelope("pair", params, result)))
}

pub fn minus_k(pi: &str, route: Route) -> Result<Output, CliError> {
    let (s, pi) = parse_distinguished(pi)?;
    let closed = minus_k_closed(&pi);
    let mut result = serde_json::Map::new();
    let mut code = 0;
    if route != Route::Expanded {
        result.insert("closed".into(), json!(closed));
    }
    if route != Route::Closed {
        let expanded = minus_k_expanded(&pi)?;
        result.insert("expanded".into(), json!(expanded.to_string()));
        if route == Route::Both {
            let equal = expanded == Rational::integer(closed);
            result.insert("equal".into(), json!(equal));
            if !equal {
                code = INTERNAL;
            }
        }
    }
    let params = json!({
        "pi": format_blocks(&s, pi.blocks()),
        "n": s.len(),
        "route": match route {
            Route::Closed => "closed",
            Route::Expanded => "expanded",
            Route::Both => "both",
        },
    });
    let text = envelope("minus-k", params, Value::Object(result));
    if code != 0 {
        return Err(CliError {
            code,
            message: "closed and expanded anticanonical degrees disagree".into(),
            payload: Some(text),
        });
    }
    Ok(Output::ok(text))
}

pub fn matrix(n: usize, action: MatrixAction, format: Format) -> Result<Output, CliError> {
    let s = standard(n, 5)?;
    let m = intersection_matrix(&s)?;
    let (rows, cols) = m.dims();
    match action {
        MatrixAction::Emit => match format {
            Format::Json => Ok(Output::ok(envelope(
                "matrix",
                json!({ "n": n, "action": "emit" }),
                to_value(&m),
            ))),
            Format::Tsv => Ok(Output::ok(m.to_tsv())),
            Format::Table => Err(CliError::usage("matrix emit supports json and tsv")),
        },
        MatrixAction::Rank => {
            let rank = matrix_rank(&m) as u64;
            let picard = picard_rank(n)?;
            let result = json!({
                "rows": rows,
                "columns": cols,
                "rank": rank,
                "picard_rank": picard,
                "verdict": if rank == picard { "equal" } else { "unequal" },
            });
            let text = envelope("matrix", json!({ "n": n, "action": "rank" }), result);
            if rank != picard {
                return Err(CliError {
                    code: INTERNAL,
                    message: format!("rank {rank} differs from Picard rank {picard}"),
                    payload: Some(text),
                });
            }
            Ok(Output::ok(text))
        }
    }
}

pub fn picard(n: usize) -> Result<Output, CliError> {
    standard(n, 3)?;
    let r = picard_rank(n)?;
    Ok(Output::ok(envelope("picard", json!({ "n": n }), json!({ "picard_rank": r }))))
}

pub fn vdim(genus: u32, sigma_size: u32, target_dim: u32, minus_k: i64) -> Output {
    let d = virtual_dimension(genus, sigma_size, target_dim, minus_k);
    let params = json!({
        "genus": genus,
        "sigma_size": sigma_size,
        "target_dim": target_dim,
        "minus_k": minus_k,
    });
    Output::ok(envelope("vdim", params, json!({ "virtual_dimension": d })))
}

/// A dual graph as typed by the user, before canonicalization.
struct RawTree {
    labels: LabelSet,
    tails: Vec<Mask>,
    edges: Vec<(usize, usize)>,
}

fn parse_json_tree(text: &str) -> Result<RawTree, CliError> {
    let v: Value = serde_json::from_str(text).map_err(|e| CliError::usage(format!("tree json: {e}")))?;
    let bad = || CliError::usage("tree json must look like {\"vertices\": [[1,2],[3]], \"edges\": [[0,1]]}");
    let vertices = v.get("vertices").and_then(Value::as_array).ok_or_else(bad)?;
    let edges = v.get("edges").and_then(Value::as_array).ok_or_else(bad)?;
    let mut tails = Vec::with_capacity(vertices.len());
    let mut n = 0;
    for vertex in vertices {
        let mut m: Mask = 0;
        for l in vertex.as_array().ok_or_else(bad)? {
            let l = l.as_u64().filter(|&l| l >= 1 && l as usize <= mask::MAX_LABELS).ok_or_else(bad)? as usize;
            n = n.max(l);
            m |= mask::bit(l);
        }
        tails.push(m);
    }
    let mut es = Vec::with_capacity(edges.len());
    for e in edges {
        let pair = e.as_array().filter(|p| p.len() == 2).ok_or_else(bad)?;
        let a = pair[0].as_u64().ok_or_else(bad)? as usize;
        let b = pair[1].as_u64().ok_or_else(bad)? as usize;
        es.push((a, b));
    }
    Ok(RawTree {
        labels: LabelSet::standard(n)?,
        tails,
        edges: es,
    })
}

fn parse_raw_tree(text: &str) -> Result<RawTree, CliError> {
    if text.trim_start().starts_with('{') {
        return parse_json_tree(text);
    }
    let lit = parse_tree(text)?;
    Ok(RawTree {
        labels: lit.labels,
        tails: lit.vertex_tails,
        edges: lit.edges,
    })
}

/// Labels on the `b` side of the input edge `a-b`.
fn input_edge_side(raw: &RawTree, a: usize, b: usize) -> Mask {
    let v = raw.tails.len();
    let mut seen = vec![false; v];
    seen[a] = true;
    seen[b] = true;
    let mut stack = vec![b];
    let mut side = 0;
    while let Some(x) = stack.pop() {
        side |= raw.tails[x];
        for &(p, q) in &raw.edges {
            let next = if p == x {
                q
            } else if q == x {
                p
            } else {
                continue;
            };
            if !seen[next] {
                seen[next] = true;
                stack.push(next);
            }
        }
    }
    side
}

fn locate_edge(raw: &RawTree, tree: &StableTree, spec: &str) -> Result<usize, CliError> {
    let (a, b) = match spec.split_once('-') {
        Some((a, b)) => {
            let parse = |x: &str| x.trim().parse::<usize>().map_err(|_| CliError::usage(format!("bad edge {spec:?}")));
            let (a, b) = (parse(a)?, parse(b)?);
            if !raw.edges.iter().any(|&e| e == (a, b) || e == (b, a)) {
                return Err(CliError::invalid(format!("no edge {a}-{b} in the tree")));
            }
            (a, b)
        }
        None => {
            let k: usize = spec
                .trim()
                .parse()
                .map_err(|_| CliError::usage(format!("bad edge {spec:?}")))?;
            *raw
                .edges
                .get(k)
                .ok_or_else(|| CliError::invalid(format!("edge index {k} out of range")))?
        }
    };
    let side = input_edge_side(raw, a, b);
    (0..tree.codimension())
        .find(|&e| tree.edge_cut(e).map(|c| c.has_part(side)).unwrap_or(false))
        .ok_or_else(|| CliError::invalid(format!("edge {a}-{b} not found after canonicalization")))
}

fn tree_value(s: &LabelSet, t: &StableTree) -> Value {
    json!({
        "literal": format_tree(s, t),
        "json": to_value(t),
        "codimension": t.codimension(),
    })
}

pub fn tree(action: TreeAction, text: &str, edge: Option<&str>, forget_set: Option<&str>) -> Result<Output, CliError> {
    let raw = parse_raw_tree(text)?;
    let s = &raw.labels;
    let mut params = json!({ "tree": text.trim() });
    let action_name = match action {
        TreeAction::Validate => "validate",
        TreeAction::Signature => "signature",
        TreeAction::Contract => "contract",
        TreeAction::Forget => "forget",
        TreeAction::Pi => "pi",
        TreeAction::TypeKey => "type-key",
    };
    params["action"] = json!(action_name);

    let violations = diagnose(s.len(), &raw.tails, &raw.edges);
    if !violations.is_empty() {
        let result = json!({ "valid": false, "violations": to_value(&violations) });
        let message = violations.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ");
        return Err(CliError {
            code: INVALID,
            message: format!("invalid tree: {message}"),
            payload: (action == TreeAction::Validate).then(|| envelope("tree", params, result)),
        });
    }
    let t = make_tree(&raw.tails, &raw.edges, s)?;

    let result = match action {
        TreeAction::Validate => {
            let mut v = tree_value(s, &t);
            v["valid"] = json!(true);
            v
        }
        TreeAction::Signature => {
            let parts: Vec<String> = t.signature().parts().iter().map(|p| format_blocks(s, &p.parts())).collect();
            json!({ "signature": to_value(t.signature()), "literal": parts })
        }
        TreeAction::Contract => {
            let spec = edge.ok_or_else(|| CliError::usage("contract needs --edge"))?;
            params["edge"] = json!(spec);
            let e = locate_edge(&raw, &t, spec)?;
            tree_value(s, &t.contract_edge(e)?)
        }
        TreeAction::Forget => {
            let lit = forget_set.ok_or_else(|| CliError::usage("forget needs --forget-set"))?;
            params["forget_set"] = json!(lit);
            let q = parse_label_subset(lit, s)?;
            let remaining = s.without(q)?;
            let forgotten = t.forget_and_stabilize(q)?;
            let mut v = tree_value(&remaining, &forgotten);
            v["labels"] = json!(remaining.tokens());
            v
        }
        TreeAction::Pi => {
            let pi = t.pi()?;
            json!({
                "pi": format_blocks(s, pi.blocks()),
                "shape": pi.shape().to_string(),
                "exceptional_vertex": t.exceptional_vertex()?,
                "minus_k": minus_k_closed(&pi),
            })
        }
        TreeAction::TypeKey => json!({ "type_key": t.unlabeled_type_key() }),
    };
    Ok(Output::ok(envelope("tree", params, result)))
}
