//! Stable `S`-labeled dual trees.
//!
//! A labeled stable tree is determined by the set of 2-partitions obtained by
//! cutting each of its edges, so [`StableTree`] keeps that
//! [`PartitionSetSignature`] as its identity and rebuilds a canonical
//! vertex/edge layout from it: vertices in preorder from the vertex carrying
//! label 1, children ordered by their smallest label, and edge `k` joining
//! vertex `k + 1` to its parent.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::mask::{self, Mask, MAX_LABELS};
use crate::partitions::{
    enumerate_distinguished, enumerate_stable_two_partitions, DistinguishedPartition, LabelSet,
    PartitionError, TwoPartition,
};

/// One violated invariant of a proposed dual graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    NotATree { reason: String },
    UnstableVertex { vertex: usize, flags: usize },
    LabelCoverage {
        missing: Vec<usize>,
        duplicated: Vec<usize>,
        unknown: Vec<usize>,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotATree { reason } => write!(f, "not a tree: {reason}"),
            Violation::UnstableVertex { vertex, flags } => {
                write!(f, "unstable vertex {vertex}: {flags} flags")
            }
            Violation::LabelCoverage {
                missing,
                duplicated,
                unknown,
            } => write!(
                f,
                "label coverage: missing {missing:?}, duplicated {duplicated:?}, unknown {unknown:?}"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("invalid tree: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("incompatible set: {0} and {1} cross")]
    Incompatible(TwoPartition, TwoPartition),
    #[error("partition {0} occurs twice")]
    Duplicate(TwoPartition),
    #[error("unknown edge {0}")]
    UnknownEdge(usize),
    #[error("not a curve tree: {0}")]
    NotCurveTree(String),
    #[error("codimension {codim} out of range 0..={max}")]
    CodimOutOfRange { codim: usize, max: usize },
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

impl TreeError {
    pub fn violations(&self) -> &[Violation] {
        match self {
            TreeError::Invalid(v) => v,
            _ => &[],
        }
    }
}

/// The edge cuts of a stable tree: pairwise distinct, pairwise compatible
/// stable 2-partitions, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartitionSetSignature {
    n: u8,
    parts: Vec<TwoPartition>,
}

impl PartitionSetSignature {
    pub fn new(n: usize, mut parts: Vec<TwoPartition>) -> Result<Self, TreeError> {
        if n > MAX_LABELS {
            return Err(PartitionError::TooManyLabels(n).into());
        }
        for p in &parts {
            if p.n() != n {
                return Err(PartitionError::LabelSetMismatch(n, p.n()).into());
            }
        }
        parts.sort();
        if let Some(w) = parts.windows(2).find(|w| w[0] == w[1]) {
            return Err(TreeError::Duplicate(w[0]));
        }
        for (i, a) in parts.iter().enumerate() {
            for b in &parts[i + 1..] {
                if !a.compatible_unchecked(b) {
                    return Err(TreeError::Incompatible(*a, *b));
                }
            }
        }
        Ok(Self { n: n as u8, parts })
    }

    pub fn empty(n: usize) -> Self {
        Self {
            n: n as u8,
            parts: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn parts(&self) -> &[TwoPartition] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn contains(&self, sigma: &TwoPartition) -> bool {
        self.parts.binary_search(sigma).is_ok()
    }

    fn without(&self, sigma: &TwoPartition) -> Self {
        Self {
            n: self.n,
            parts: self.parts.iter().filter(|p| *p != sigma).copied().collect(),
        }
    }
}

impl Serialize for PartitionSetSignature {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.parts.serialize(serializer)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Vertex {
    /// Labels of the tails at this vertex.
    pub tails: Mask,
    /// Labels reachable from this vertex away from the root (all labels for
    /// the root).
    pub clade: Mask,
}

/// A stable `S`-labeled tree: every label is a tail of exactly one vertex and
/// every vertex carries at least three flags.
#[derive(Debug, Clone)]
pub struct StableTree {
    signature: PartitionSetSignature,
    vertices: Vec<Vertex>,
    /// `edges[k] = (parent, k + 1)`.
    edges: Vec<(usize, usize)>,
}

impl PartialEq for StableTree {
    fn eq(&self, other: &Self) -> bool {
        self.signature == other.signature
    }
}

impl Eq for StableTree {}

impl std::hash::Hash for StableTree {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.signature.hash(state)
    }
}

impl PartialOrd for StableTree {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for StableTree {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.signature.cmp(&other.signature)
    }
}

/// Check a proposed dual graph against every tree invariant, reporting all
/// violations rather than the first.
pub fn diagnose(n: usize, vertex_tails: &[Mask], edges: &[(usize, usize)]) -> Vec<Violation> {
    let mut out = Vec::new();
    let v = vertex_tails.len();
    if v == 0 {
        out.push(Violation::NotATree {
            reason: "no vertices".into(),
        });
        return out;
    }

    let mut degree = vec![0usize; v];
    let mut uf: Vec<usize> = (0..v).collect();
    fn find(uf: &mut [usize], mut x: usize) -> usize {
        while uf[x] != x {
            uf[x] = uf[uf[x]];
            x = uf[x];
        }
        x
    }
    let mut structural = Vec::new();
    for &(a, b) in edges {
        if a >= v || b >= v {
            structural.push(format!("edge {a}-{b} names a missing vertex"));
            continue;
        }
        if a == b {
            structural.push(format!("loop at vertex {a}"));
            continue;
        }
        degree[a] += 1;
        degree[b] += 1;
        let (ra, rb) = (find(&mut uf, a), find(&mut uf, b));
        if ra == rb {
            structural.push(format!("edge {a}-{b} closes a cycle"));
        } else {
            uf[ra] = rb;
        }
    }
    let root = find(&mut uf, 0);
    if (1..v).any(|i| find(&mut uf, i) != root) {
        structural.push("graph is disconnected".into());
    }
    if edges.len() + 1 != v && structural.is_empty() {
        structural.push(format!("{} edges on {v} vertices", edges.len()));
    }
    out.extend(structural.into_iter().map(|reason| Violation::NotATree { reason }));

    let full = if n <= MAX_LABELS { mask::full(n) } else { Mask::MAX };
    let mut seen: Mask = 0;
    let mut duplicated: Mask = 0;
    let mut unknown: Mask = 0;
    for &t in vertex_tails {
        duplicated |= seen & t;
        seen |= t;
        unknown |= t & !full;
    }
    let missing = full & !seen;
    if missing | duplicated | unknown != 0 {
        out.push(Violation::LabelCoverage {
            missing: mask::labels(missing).collect(),
            duplicated: mask::labels(duplicated).collect(),
            unknown: mask::labels(unknown).collect(),
        });
    }

    for (i, &t) in vertex_tails.iter().enumerate() {
        let flags = mask::size(t) + degree[i];
        if flags < 3 {
            out.push(Violation::UnstableVertex { vertex: i, flags });
        }
    }
    out
}

/// Validate a dual graph given by per-vertex tail sets and vertex-index
/// edges, and bring it to canonical form.
pub fn make_tree(
    vertex_tails: &[Mask],
    edges: &[(usize, usize)],
    s: &LabelSet,
) -> Result<StableTree, TreeError> {
    build(s.len(), vertex_tails, edges)
}

fn build(n: usize, vertex_tails: &[Mask], edges: &[(usize, usize)]) -> Result<StableTree, TreeError> {
    let violations = diagnose(n, vertex_tails, edges);
    if !violations.is_empty() {
        return Err(TreeError::Invalid(violations));
    }
    let v = vertex_tails.len();
    let mut adj = vec![Vec::new(); v];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    // subtree label sets, rooted at vertex 0
    let mut order = Vec::with_capacity(v);
    let mut parent = vec![usize::MAX; v];
    let mut stack = vec![0];
    parent[0] = 0;
    while let Some(x) = stack.pop() {
        order.push(x);
        for &y in &adj[x] {
            if parent[y] == usize::MAX {
                parent[y] = x;
                stack.push(y);
            }
        }
    }
    let mut below = vertex_tails.to_vec();
    for &x in order.iter().rev().filter(|&&x| x != 0) {
        below[parent[x]] |= below[x];
    }
    let parts = order
        .iter()
        .filter(|&&x| x != 0)
        .map(|&x| TwoPartition::new(n, below[x]))
        .collect::<Result<Vec<_>, _>>()?;
    tree_from_signature(&PartitionSetSignature::new(n, parts)?)
}

/// The unique stable tree whose edge cuts are exactly `sig`.
///
/// The sides not containing label 1 form a laminar family; each becomes a
/// vertex whose parent is the smallest strictly larger member (or the root).
pub fn tree_from_signature(sig: &PartitionSetSignature) -> Result<StableTree, TreeError> {
    let n = sig.n();
    if n < 3 {
        return Err(PartitionError::TooFewLabels { n, min: 3 }.into());
    }
    let full = mask::full(n);
    let clades: Vec<Mask> = sig.parts.iter().map(TwoPartition::part_b).collect();
    let k = clades.len();
    // node k is the root
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); k + 1];
    for (i, &c) in clades.iter().enumerate() {
        let parent = clades
            .iter()
            .enumerate()
            .filter(|&(j, &d)| j != i && c != d && mask::is_subset(c, d))
            .min_by_key(|&(_, &d)| mask::size(d))
            .map(|(j, _)| j)
            .unwrap_or(k);
        children[parent].push(i);
    }
    let clade_of = |i: usize| if i == k { full } else { clades[i] };
    for ch in children.iter_mut() {
        ch.sort_by_key(|&i| clades[i].trailing_zeros());
    }

    let mut vertices = Vec::with_capacity(k + 1);
    let mut edges = Vec::with_capacity(k);
    // (node, parent vertex index)
    let mut stack = vec![(k, usize::MAX)];
    while let Some((node, parent)) = stack.pop() {
        let idx = vertices.len();
        let clade = clade_of(node);
        let tails = children[node].iter().fold(clade, |t, &c| t & !clades[c]);
        vertices.push(Vertex { tails, clade });
        if parent != usize::MAX {
            edges.push((parent, idx));
        }
        for &c in children[node].iter().rev() {
            stack.push((c, idx));
        }
    }

    let tree = StableTree {
        signature: sig.clone(),
        vertices,
        edges,
    };
    debug_assert!((0..tree.vertices.len()).all(|v| tree.flags(v) >= 3));
    Ok(tree)
}

impl StableTree {
    /// The one-vertex tree carrying all of `1..=n`.
    pub fn star(n: usize) -> Result<Self, TreeError> {
        tree_from_signature(&PartitionSetSignature::empty(n))
    }

    pub fn from_signature(sig: &PartitionSetSignature) -> Result<Self, TreeError> {
        tree_from_signature(sig)
    }

    pub fn n(&self) -> usize {
        self.signature.n()
    }

    /// Codimension of the stratum: the number of edges.
    pub fn codimension(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    /// Tails plus incident edges.
    pub fn flags(&self, v: usize) -> usize {
        mask::size(self.vertices[v].tails) + self.degree(v)
    }

    /// The vertex carrying the tail `label`.
    pub fn vertex_of_label(&self, label: usize) -> Option<usize> {
        self.vertices.iter().position(|v| v.tails & mask::bit(label) != 0)
    }

    pub fn edge_between(&self, a: usize, b: usize) -> Option<usize> {
        self.edges
            .iter()
            .position(|&(x, y)| (x, y) == (a, b) || (x, y) == (b, a))
    }

    pub fn signature(&self) -> &PartitionSetSignature {
        &self.signature
    }

    /// The 2-partition of `S` obtained by cutting edge `e`.
    pub fn edge_cut(&self, e: usize) -> Result<TwoPartition, TreeError> {
        let &(_, child) = self.edges.get(e).ok_or(TreeError::UnknownEdge(e))?;
        Ok(TwoPartition::new(self.n(), self.vertices[child].clade)
            .expect("edge cuts of a stable tree are stable"))
    }

    /// Merge the endpoints of edge `e`.
    pub fn contract_edge(&self, e: usize) -> Result<StableTree, TreeError> {
        let cut = self.edge_cut(e)?;
        tree_from_signature(&self.signature.without(&cut))
    }

    /// Drop the tails labeled by `q` and contract the components that become
    /// unstable. Surviving labels are renumbered onto `1..=n - |q|` in order.
    pub fn forget_and_stabilize(&self, q: Mask) -> Result<StableTree, TreeError> {
        let n = self.n();
        let full = mask::full(n);
        let q = q & full;
        let keep = full & !q;
        let m = mask::size(keep);
        if m < 3 {
            return Err(PartitionError::TooFewLabels { n: m, min: 3 }.into());
        }

        let v = self.vertices.len();
        let mut tails: Vec<Mask> = self.vertices.iter().map(|x| x.tails & keep).collect();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); v];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut alive = vec![true; v];
        let mut queue: VecDeque<usize> = (0..v).collect();
        while let Some(x) = queue.pop_front() {
            if !alive[x] || mask::size(tails[x]) + adj[x].len() >= 3 {
                continue;
            }
            let nbrs = std::mem::take(&mut adj[x]);
            for &y in &nbrs {
                adj[y].retain(|&z| z != x);
            }
            alive[x] = false;
            match (nbrs.as_slice(), mask::size(tails[x])) {
                // smooth a bare bivalent vertex
                (&[a, b], 0) => {
                    adj[a].push(b);
                    adj[b].push(a);
                }
                // a leaf with one tail hands it over
                (&[a], _) => {
                    tails[a] |= tails[x];
                    queue.push_back(a);
                }
                // only possible with fewer than three labels left
                _ => unreachable!("isolated unstable vertex with {m} labels"),
            }
            tails[x] = 0;
        }

        let index: Vec<usize> = alive
            .iter()
            .scan(0, |next, &a| {
                let i = *next;
                if a {
                    *next += 1;
                }
                Some(i)
            })
            .collect();
        let new_tails: Vec<Mask> = (0..v)
            .filter(|&x| alive[x])
            .map(|x| mask::compress(tails[x], keep))
            .collect();
        let mut new_edges = Vec::new();
        for x in (0..v).filter(|&x| alive[x]) {
            for &y in adj[x].iter().filter(|&&y| y > x) {
                new_edges.push((index[x], index[y]));
            }
        }
        build(m, &new_tails, &new_edges)
    }

    /// The unique 4-flag vertex of a boundary-curve tree.
    pub fn exceptional_vertex(&self) -> Result<usize, TreeError> {
        let n = self.n();
        if n < 4 || self.codimension() != n - 4 {
            return Err(TreeError::NotCurveTree(format!(
                "{} edges, expected n - 4 = {}",
                self.codimension(),
                n.saturating_sub(4)
            )));
        }
        let mut found = None;
        for v in 0..self.vertices.len() {
            match self.flags(v) {
                3 => {}
                4 if found.is_none() => found = Some(v),
                f => {
                    return Err(TreeError::NotCurveTree(format!(
                        "vertex {v} has {f} flags"
                    )))
                }
            }
        }
        found.ok_or_else(|| TreeError::NotCurveTree("no 4-flag vertex".into()))
    }

    /// `Π(τ)`: the labels of the four branches at the exceptional vertex.
    pub fn pi(&self) -> Result<DistinguishedPartition, TreeError> {
        let v0 = self.exceptional_vertex()?;
        let full = mask::full(self.n());
        let mut blocks: Vec<Mask> = mask::labels(self.vertices[v0].tails).map(mask::bit).collect();
        for &(p, c) in &self.edges {
            if p == v0 {
                blocks.push(self.vertices[c].clade);
            } else if c == v0 {
                blocks.push(full & !self.vertices[v0].clade);
            }
        }
        Ok(DistinguishedPartition::from_blocks(self.n(), &blocks)?)
    }

    /// Canonical encoding of the tree with tails replaced by per-vertex tail
    /// counts. Equal keys exactly when a relabeling maps one tree onto the
    /// other.
    pub fn unlabeled_type_key(&self) -> String {
        let v = self.vertices.len();
        let mut adj = vec![Vec::new(); v];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let encode = |root: usize| encode_rooted(&adj, &self.vertices, root, usize::MAX);
        if let Ok(v0) = self.exceptional_vertex() {
            return encode(v0);
        }
        centroids(&adj)
            .into_iter()
            .map(encode)
            .min()
            .expect("a tree has a centroid")
    }
}

fn encode_rooted(adj: &[Vec<usize>], vertices: &[Vertex], v: usize, parent: usize) -> String {
    let mut kids: Vec<String> = adj[v]
        .iter()
        .filter(|&&w| w != parent)
        .map(|&w| encode_rooted(adj, vertices, w, v))
        .collect();
    kids.sort();
    format!("{}[{}]", mask::size(vertices[v].tails), kids.join(","))
}

/// One or two vertices minimizing the largest remaining component.
fn centroids(adj: &[Vec<usize>]) -> Vec<usize> {
    let v = adj.len();
    let mut parent = vec![usize::MAX; v];
    let mut order = Vec::with_capacity(v);
    let mut stack = vec![0];
    parent[0] = 0;
    while let Some(x) = stack.pop() {
        order.push(x);
        for &y in &adj[x] {
            if parent[y] == usize::MAX {
                parent[y] = x;
                stack.push(y);
            }
        }
    }
    let mut size = vec![1usize; v];
    for &x in order.iter().rev().filter(|&&x| x != 0) {
        size[parent[x]] += size[x];
    }
    let worst: Vec<usize> = (0..v)
        .map(|x| {
            adj[x]
                .iter()
                .filter(|&&y| y != 0 && parent[y] == x)
                .map(|&y| size[y])
                .fold(v - size[x], usize::max)
        })
        .collect();
    let best = *worst.iter().min().expect("nonempty tree");
    (0..v).filter(|&x| worst[x] == best).collect()
}

#[derive(Serialize, Deserialize)]
struct TreeRepr {
    vertices: Vec<Vec<u32>>,
    edges: Vec<[usize; 2]>,
}

impl Serialize for StableTree {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        TreeRepr {
            vertices: self
                .vertices
                .iter()
                .map(|v| mask::labels(v.tails).map(|l| l as u32).collect())
                .collect(),
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for StableTree {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = TreeRepr::deserialize(deserializer)?;
        let n = repr.vertices.iter().flatten().copied().max().unwrap_or(0) as usize;
        if n > MAX_LABELS {
            return Err(D::Error::custom(PartitionError::TooManyLabels(n)));
        }
        let mut tails = Vec::with_capacity(repr.vertices.len());
        for v in &repr.vertices {
            if v.contains(&0) {
                return Err(D::Error::custom("labels start at 1"));
            }
            tails.push(mask::from_labels(v.iter().map(|&l| l as usize)));
        }
        let edges: Vec<(usize, usize)> = repr.edges.iter().map(|&[a, b]| (a, b)).collect();
        build(n, &tails, &edges).map_err(D::Error::custom)
    }
}

/// All stable trees on `s` with exactly `codim` edges, built from compatible
/// sets of stable 2-partitions.
pub fn enumerate_trees(s: &LabelSet, codim: usize) -> Result<Vec<StableTree>, TreeError> {
    let n = s.len();
    if n < 3 {
        return Err(PartitionError::TooFewLabels { n, min: 3 }.into());
    }
    if codim > n - 3 {
        return Err(TreeError::CodimOutOfRange { codim, max: n - 3 });
    }
    if n == 3 {
        return Ok(vec![StableTree::star(3)?]);
    }
    let parts = enumerate_stable_two_partitions(s)?;
    let k = parts.len();
    let compat: Vec<Vec<bool>> = parts
        .iter()
        .map(|a| parts.iter().map(|b| a.compatible_unchecked(b)).collect())
        .collect();

    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::with_capacity(codim);
    fn extend(
        start: usize,
        codim: usize,
        k: usize,
        compat: &[Vec<bool>],
        chosen: &mut Vec<usize>,
        emit: &mut dyn FnMut(&[usize]),
    ) {
        if chosen.len() == codim {
            emit(chosen);
            return;
        }
        for i in start..k {
            if chosen.iter().all(|&j| compat[i][j]) {
                chosen.push(i);
                extend(i + 1, codim, k, compat, chosen, emit);
                chosen.pop();
            }
        }
    }
    let mut failure = None;
    extend(0, codim, k, &compat, &mut chosen, &mut |idx| {
        let sig = PartitionSetSignature {
            n: n as u8,
            parts: idx.iter().map(|&i| parts[i]).collect(),
        };
        match tree_from_signature(&sig) {
            Ok(t) => out.push(t),
            Err(e) => failure = Some(e),
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Sets of internal clades of every rooted binary tree with leaf set
/// `block`, including `block` itself when it has two or more labels.
fn rooted_binary_clades(block: Mask) -> Vec<Vec<Mask>> {
    if mask::size(block) <= 1 {
        return vec![Vec::new()];
    }
    let low = block & block.wrapping_neg();
    let rest = block ^ low;
    let mut out = Vec::new();
    // left side: the lowest label plus a proper subset of the rest
    let mut sub = rest;
    loop {
        let left = low | sub;
        let right = block ^ left;
        if right != 0 {
            let ls = rooted_binary_clades(left);
            let rs = rooted_binary_clades(right);
            for l in &ls {
                for r in &rs {
                    let mut clades = Vec::with_capacity(l.len() + r.len() + 1);
                    clades.push(block);
                    clades.extend_from_slice(l);
                    clades.extend_from_slice(r);
                    out.push(clades);
                }
            }
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & rest;
    }
    out
}

/// The boundary-curve trees whose class is `pi`: a trivalent subtree hangs
/// off the exceptional vertex for every block with two or more labels.
pub fn curve_trees_of_class(pi: &DistinguishedPartition) -> Vec<StableTree> {
    let n = pi.n();
    let mut signatures: Vec<Vec<Mask>> = vec![Vec::new()];
    for &block in pi.blocks() {
        let options = rooted_binary_clades(block);
        signatures = signatures
            .into_iter()
            .flat_map(|acc| {
                options.iter().map(move |o| {
                    let mut next = acc.clone();
                    next.extend_from_slice(o);
                    next
                })
            })
            .collect();
    }
    signatures
        .into_iter()
        .map(|clades| {
            let parts = clades
                .into_iter()
                .map(|c| TwoPartition::new(n, c).expect("clades inside a block are stable cuts"))
                .collect();
            let sig = PartitionSetSignature::new(n, parts).expect("clades are laminar");
            tree_from_signature(&sig).expect("signature of a stable tree")
        })
        .collect()
}

/// All boundary-curve trees (exactly `n - 4` edges) on `s`, grouped by their
/// class in the order of [`enumerate_distinguished`].
pub fn enumerate_curve_trees(s: &LabelSet) -> Result<Vec<StableTree>, TreeError> {
    let classes = enumerate_distinguished(s)?;
    Ok(classes.iter().flat_map(curve_trees_of_class).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mask::from_labels;

    fn m(labels: &[usize]) -> Mask {
        from_labels(labels.iter().copied())
    }

    fn tree(n: usize, tails: &[&[usize]], edges: &[(usize, usize)]) -> Result<StableTree, TreeError> {
        let tails: Vec<Mask> = tails.iter().map(|t| m(t)).collect();
        make_tree(&tails, edges, &LabelSet::standard(n).unwrap())
    }

    fn tp(n: usize, labels: &[usize]) -> TwoPartition {
        TwoPartition::new(n, m(labels)).unwrap()
    }

    #[test]
    fn make_tree_examples() {
        let star = tree(5, &[&[1, 2, 3, 4, 5]], &[]).unwrap();
        assert_eq!(star.codimension(), 0);
        let div = tree(5, &[&[1, 2], &[3, 4, 5]], &[(0, 1)]).unwrap();
        assert_eq!(div.codimension(), 1);
        let err = tree(5, &[&[1], &[2, 3, 4, 5]], &[(0, 1)]).unwrap_err();
        assert_eq!(
            err.violations(),
            &[Violation::UnstableVertex { vertex: 0, flags: 2 }]
        );
    }

    #[test]
    fn make_tree_reports_every_violation() {
        // cycle on three vertices, label 5 missing, label 1 twice
        let err = tree(5, &[&[1], &[1, 2], &[3, 4]], &[(0, 1), (1, 2), (2, 0)]).unwrap_err();
        let v = err.violations();
        assert!(v.iter().any(|x| matches!(x, Violation::NotATree { .. })));
        assert!(v.iter().any(|x| matches!(
            x,
            Violation::LabelCoverage { missing, duplicated, .. } if missing == &[5] && duplicated == &[1]
        )));
        let disconnected = tree(6, &[&[1, 2, 3], &[4, 5, 6]], &[]).unwrap_err();
        assert!(matches!(disconnected.violations()[0], Violation::NotATree { .. }));
    }

    #[test]
    fn edge_cut_examples() {
        let div = tree(5, &[&[1, 2], &[3, 4, 5]], &[(0, 1)]).unwrap();
        assert_eq!(div.edge_cut(0).unwrap(), tp(5, &[1, 2]));
        assert!(matches!(div.edge_cut(1), Err(TreeError::UnknownEdge(1))));

        // 3•-•1-•2
        let chain = tree(6, &[&[1, 2, 3], &[4], &[5, 6]], &[(0, 1), (1, 2)]).unwrap();
        let (a, b) = (chain.vertex_of_label(4).unwrap(), chain.vertex_of_label(5).unwrap());
        let cut = chain.edge_cut(chain.edge_between(a, b).unwrap()).unwrap();
        assert_eq!(cut, tp(6, &[1, 2, 3, 4]));
        assert_eq!(cut.min_part_size(), 2);

        let cuts: Vec<_> = (0..2).map(|e| chain.edge_cut(e).unwrap()).collect();
        assert_ne!(cuts[0], cuts[1]);
        assert!(cuts[0].compatible(&cuts[1]).unwrap());
    }

    #[test]
    fn signature_examples() {
        assert!(StableTree::star(5).unwrap().signature().is_empty());
        let div = tree(5, &[&[1, 2], &[3, 4, 5]], &[(0, 1)]).unwrap();
        assert_eq!(div.signature().parts(), &[tp(5, &[1, 2])]);
    }

    #[test]
    fn tree_from_signature_examples() {
        let star = tree_from_signature(&PartitionSetSignature::empty(6)).unwrap();
        assert_eq!(star.vertices().len(), 1);

        let sig = PartitionSetSignature::new(6, vec![tp(6, &[1, 2]), tp(6, &[1, 2, 3, 4])]).unwrap();
        let chain = tree_from_signature(&sig).unwrap();
        let counts: Vec<usize> = chain.vertices().iter().map(|v| mask::size(v.tails)).collect();
        assert_eq!(counts, vec![2, 2, 2]);
        assert_eq!(chain.edges(), &[(0, 1), (1, 2)]);
        assert_eq!(chain.vertices()[1].tails, m(&[3, 4]));

        let crossing = PartitionSetSignature::new(5, vec![tp(5, &[1, 2]), tp(5, &[2, 3])]);
        assert!(matches!(crossing, Err(TreeError::Incompatible(..))));
    }

    #[test]
    fn contract_examples() {
        let div = tree(5, &[&[1, 2], &[3, 4, 5]], &[(0, 1)]).unwrap();
        assert_eq!(div.contract_edge(0).unwrap(), StableTree::star(5).unwrap());

        let chain = tree(6, &[&[1, 2, 3], &[4], &[5, 6]], &[(0, 1), (1, 2)]).unwrap();
        let e = chain
            .edge_between(chain.vertex_of_label(1).unwrap(), chain.vertex_of_label(4).unwrap())
            .unwrap();
        let merged = chain.contract_edge(e).unwrap();
        assert_eq!(merged, tree(6, &[&[1, 2, 3, 4], &[5, 6]], &[(0, 1)]).unwrap());

        let mut t = chain;
        while t.codimension() > 0 {
            t = t.contract_edge(0).unwrap();
        }
        assert_eq!(t, StableTree::star(6).unwrap());
    }

    #[test]
    fn forget_examples() {
        let star = StableTree::star(5).unwrap();
        assert_eq!(star.forget_and_stabilize(m(&[1])).unwrap(), StableTree::star(4).unwrap());

        let div = tree(5, &[&[1, 2], &[3, 4, 5]], &[(0, 1)]).unwrap();
        assert_eq!(div.forget_and_stabilize(m(&[1])).unwrap(), StableTree::star(4).unwrap());

        let chain = tree(6, &[&[1, 2], &[3, 4], &[5, 6]], &[(0, 1), (1, 2)]).unwrap();
        let forgotten = chain.forget_and_stabilize(m(&[3, 4])).unwrap();
        assert_eq!(forgotten, tree(4, &[&[1, 2], &[3, 4]], &[(0, 1)]).unwrap());

        assert!(star.forget_and_stabilize(m(&[1, 2, 3])).is_err());
        assert_eq!(chain.forget_and_stabilize(0).unwrap(), chain);
    }

    #[test]
    fn exceptional_vertex_examples() {
        let a = tree(6, &[&[1, 2, 3], &[4], &[5, 6]], &[(0, 1), (1, 2)]).unwrap();
        let v0 = a.exceptional_vertex().unwrap();
        assert_eq!(a.vertices()[v0].tails, m(&[1, 2, 3]));

        let b = tree(6, &[&[1, 2], &[3, 4], &[5, 6]], &[(0, 1), (1, 2)]).unwrap();
        let v0 = b.exceptional_vertex().unwrap();
        assert_eq!(b.vertices()[v0].tails, m(&[3, 4]));

        assert_eq!(StableTree::star(4).unwrap().exceptional_vertex().unwrap(), 0);
        assert!(StableTree::star(5).unwrap().exceptional_vertex().is_err());
    }

    #[test]
    fn pi_examples() {
        let a = tree(6, &[&[1, 2, 3], &[4], &[5, 6]], &[(0, 1), (1, 2)]).unwrap();
        let expected = DistinguishedPartition::from_blocks(6, &[m(&[1]), m(&[2]), m(&[3]), m(&[4, 5, 6])]).unwrap();
        assert_eq!(a.pi().unwrap(), expected);

        let b = tree(6, &[&[1, 2], &[3, 4], &[5, 6]], &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(b.pi().unwrap().shape().0, [2, 2, 1, 1]);

        // type D: 2•-1•< with two •2 leaves
        let d = tree(7, &[&[1, 2], &[3], &[4, 5], &[6, 7]], &[(0, 1), (1, 2), (1, 3)]).unwrap();
        assert_eq!(d.pi().unwrap().shape().0, [2, 2, 2, 1]);
    }

    #[test]
    fn curve_tree_counts() {
        for (n, expected) in [(4, 1), (5, 10), (6, 105), (7, 1260)] {
            let trees = enumerate_curve_trees(&LabelSet::standard(n).unwrap()).unwrap();
            assert_eq!(trees.len(), expected, "n = {n}");
        }
    }

    #[test]
    fn stratum_counts() {
        let s = LabelSet::standard(5).unwrap();
        assert_eq!(enumerate_trees(&s, 0).unwrap().len(), 1);
        assert_eq!(enumerate_trees(&s, 1).unwrap().len(), 10);
        assert_eq!(enumerate_trees(&s, 2).unwrap().len(), 15);
        assert!(matches!(
            enumerate_trees(&s, 3),
            Err(TreeError::CodimOutOfRange { codim: 3, max: 2 })
        ));
    }

    #[test]
    fn type_keys_at_six() {
        let trees = enumerate_curve_trees(&LabelSet::standard(6).unwrap()).unwrap();
        let mut keys = std::collections::BTreeMap::new();
        for t in &trees {
            *keys.entry(t.unlabeled_type_key()).or_insert(0) += 1;
        }
        let mut counts: Vec<usize> = keys.values().copied().collect();
        counts.sort();
        assert_eq!(counts, vec![45, 60]);
    }

    #[test]
    fn bicentroid_tie_is_broken() {
        // 2•-•2 has two centroids
        let t = tree(4, &[&[1, 2], &[3, 4]], &[(0, 1)]).unwrap();
        let u = tree(4, &[&[1, 3], &[2, 4]], &[(0, 1)]).unwrap();
        assert_eq!(t.unlabeled_type_key(), u.unlabeled_type_key());
        assert_eq!(t.unlabeled_type_key(), "2[2[]]");
    }

    #[test]
    fn serde_roundtrip() {
        let t = tree(6, &[&[1, 2, 3], &[4], &[5, 6]], &[(0, 1), (1, 2)]).unwrap();
        let json = serde_json::to_string(&t).unwrap();
        assert_eq!(json, r#"{"vertices":[[1,2,3],[4],[5,6]],"edges":[[0,1],[1,2]]}"#);
        let back: StableTree = serde_json::from_str(&json).unwrap();
        assert_eq!(back, t);
        assert!(serde_json::from_str::<StableTree>(r#"{"vertices":[[1],[2,3,4,5]],"edges":[[0,1]]}"#).is_err());
    }
}
