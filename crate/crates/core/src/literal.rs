//! Compact text forms for partitions and trees.
//!
//! A partition literal lists blocks separated by `|`. Labels inside a block
//! are juxtaposed single characters (`12|345`, `abc|d|ef`) or, when the
//! literal contains a comma, comma-separated tokens (`1,2|3,10,11`).
//!
//! A tree literal lists vertex tails in brackets separated by `;`, then `/`
//! and the edges as vertex-index pairs: `[abc];[d];[ef]/0-1,1-2`. The edge
//! part may be omitted for a one-vertex tree.
//!
//! Tokens are normalized onto `1..=n` by [`LabelSet`] order.

use thiserror::Error;

use crate::mask::{self, Mask};
use crate::partitions::{DistinguishedPartition, LabelSet, PartitionError, TwoPartition};
use crate::trees::StableTree;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiteralError {
    #[error("empty literal")]
    Empty,
    #[error("bad token {token:?}: {reason}")]
    BadToken { token: String, reason: String },
    #[error("label {0:?} appears more than once")]
    Repeated(String),
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

fn bad(token: &str, reason: impl Into<String>) -> LiteralError {
    LiteralError::BadToken {
        token: token.to_string(),
        reason: reason.into(),
    }
}

fn split_labels(block: &str, commas: bool) -> Result<Vec<String>, LiteralError> {
    if commas {
        let block = block.trim();
        if block.is_empty() {
            return Ok(Vec::new());
        }
        block
            .split(',')
            .map(|t| {
                let t = t.trim();
                if t.is_empty() {
                    Err(bad(block, "empty label between commas"))
                } else if !t.chars().all(|c| c.is_alphanumeric() || c == '_') {
                    Err(bad(t, "labels are alphanumeric"))
                } else {
                    Ok(t.to_string())
                }
            })
            .collect()
    } else {
        block
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| {
                if c.is_alphanumeric() || c == '_' {
                    Ok(c.to_string())
                } else {
                    Err(bad(&c.to_string(), "labels are alphanumeric"))
                }
            })
            .collect()
    }
}

fn collect_label_set(blocks: &[Vec<String>]) -> Result<LabelSet, LiteralError> {
    let mut all: Vec<&String> = blocks.iter().flatten().collect();
    all.sort();
    if let Some(w) = all.windows(2).find(|w| w[0] == w[1]) {
        return Err(LiteralError::Repeated(w[0].clone()));
    }
    Ok(LabelSet::from_tokens(all.into_iter().cloned())?)
}

fn to_masks(blocks: &[Vec<String>], s: &LabelSet) -> Result<Vec<Mask>, LiteralError> {
    let mut seen: Mask = 0;
    let mut out = Vec::with_capacity(blocks.len());
    for block in blocks {
        let mut m: Mask = 0;
        for token in block {
            let bit = mask::bit(s.label_of(token)?);
            if seen & bit != 0 {
                return Err(LiteralError::Repeated(token.clone()));
            }
            seen |= bit;
            m |= bit;
        }
        out.push(m);
    }
    Ok(out)
}

fn tokenize_blocks(lit: &str) -> Result<Vec<Vec<String>>, LiteralError> {
    let lit = lit.trim();
    if lit.is_empty() {
        return Err(LiteralError::Empty);
    }
    let commas = lit.contains(',');
    lit.split('|')
        .map(|b| {
            let labels = split_labels(b, commas)?;
            if labels.is_empty() {
                Err(bad(lit, "empty block"))
            } else {
                Ok(labels)
            }
        })
        .collect()
}

/// Parse a partition literal, inferring the label set from its tokens.
pub fn parse_blocks(lit: &str) -> Result<(LabelSet, Vec<Mask>), LiteralError> {
    let blocks = tokenize_blocks(lit)?;
    let s = collect_label_set(&blocks)?;
    let masks = to_masks(&blocks, &s)?;
    Ok((s, masks))
}

/// Parse a partition literal over a known label set. The blocks must cover
/// the set.
pub fn parse_blocks_in(lit: &str, s: &LabelSet) -> Result<Vec<Mask>, LiteralError> {
    let blocks = tokenize_blocks(lit)?;
    let masks = to_masks(&blocks, s)?;
    let covered = masks.iter().fold(0, |a, &b| a | b);
    if covered != s.full_mask() {
        let missing: Vec<&str> = mask::labels(s.full_mask() & !covered).map(|l| s.token(l)).collect();
        return Err(PartitionError::NotAPartition(format!("missing labels {missing:?}")).into());
    }
    Ok(masks)
}

pub fn parse_two_partition(lit: &str) -> Result<(LabelSet, TwoPartition), LiteralError> {
    let (s, masks) = parse_blocks(lit)?;
    let sigma = two_partition_from(&s, &masks)?;
    Ok((s, sigma))
}

pub fn parse_two_partition_in(lit: &str, s: &LabelSet) -> Result<TwoPartition, LiteralError> {
    let masks = parse_blocks_in(lit, s)?;
    two_partition_from(s, &masks)
}

fn two_partition_from(s: &LabelSet, masks: &[Mask]) -> Result<TwoPartition, LiteralError> {
    if masks.len() != 2 {
        return Err(PartitionError::NotAPartition(format!("expected 2 parts, got {}", masks.len())).into());
    }
    Ok(TwoPartition::new(s.len(), masks[0])?)
}

pub fn parse_distinguished(lit: &str) -> Result<(LabelSet, DistinguishedPartition), LiteralError> {
    let (s, masks) = parse_blocks(lit)?;
    let pi = DistinguishedPartition::from_blocks(s.len(), &masks)?;
    Ok((s, pi))
}

pub fn parse_distinguished_in(lit: &str, s: &LabelSet) -> Result<DistinguishedPartition, LiteralError> {
    let masks = parse_blocks_in(lit, s)?;
    Ok(DistinguishedPartition::from_blocks(s.len(), &masks)?)
}

/// A subset of labels, written like a single block (`13`, `a,c`). Empty
/// input is the empty set.
pub fn parse_label_subset(lit: &str, s: &LabelSet) -> Result<Mask, LiteralError> {
    let labels = split_labels(lit, lit.contains(','))?;
    let masks = to_masks(&[labels], s)?;
    Ok(masks[0])
}

/// A tree literal before validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeLiteral {
    pub labels: LabelSet,
    pub vertex_tails: Vec<Mask>,
    pub edges: Vec<(usize, usize)>,
}

pub fn parse_tree(lit: &str) -> Result<TreeLiteral, LiteralError> {
    let lit = lit.trim();
    if lit.is_empty() {
        return Err(LiteralError::Empty);
    }
    let (vertex_part, edge_part) = match lit.split_once('/') {
        Some((v, e)) => (v, e),
        None => (lit, ""),
    };
    let commas = vertex_part.contains(',');
    let mut vertices = Vec::new();
    for chunk in vertex_part.split(';') {
        let chunk = chunk.trim();
        let inner = chunk
            .strip_prefix('[')
            .and_then(|c| c.strip_suffix(']'))
            .ok_or_else(|| bad(chunk, "vertex tails must be written in brackets"))?;
        vertices.push(split_labels(inner, commas)?);
    }
    let mut edges = Vec::new();
    for token in edge_part.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
        let (a, b) = token
            .split_once('-')
            .ok_or_else(|| bad(token, "edges are written as i-j"))?;
        let parse = |x: &str| x.trim().parse::<usize>().map_err(|_| bad(token, "vertex index is not a number"));
        edges.push((parse(a)?, parse(b)?));
    }
    let labels = collect_label_set(&vertices)?;
    let vertex_tails = to_masks(&vertices, &labels)?;
    Ok(TreeLiteral {
        labels,
        vertex_tails,
        edges,
    })
}

fn write_labels(out: &mut String, s: &LabelSet, m: Mask, sep: &str) {
    let tokens: Vec<&str> = mask::labels(m).map(|l| s.token(l)).collect();
    out.push_str(&tokens.join(sep));
}

fn separator(s: &LabelSet) -> &'static str {
    if s.single_char() {
        ""
    } else {
        ","
    }
}

/// Partition literal for `blocks` using the tokens of `s`.
pub fn format_blocks(s: &LabelSet, blocks: &[Mask]) -> String {
    let sep = separator(s);
    let mut out = String::new();
    for (i, &b) in blocks.iter().enumerate() {
        if i > 0 {
            out.push('|');
        }
        write_labels(&mut out, s, b, sep);
    }
    out
}

pub fn format_tree(s: &LabelSet, t: &StableTree) -> String {
    let sep = separator(s);
    let mut out = String::new();
    for (i, v) in t.vertices().iter().enumerate() {
        if i > 0 {
            out.push(';');
        }
        out.push('[');
        write_labels(&mut out, s, v.tails, sep);
        out.push(']');
    }
    if !t.edges().is_empty() {
        out.push('/');
        let edges: Vec<String> = t.edges().iter().map(|(a, b)| format!("{a}-{b}")).collect();
        out.push_str(&edges.join(","));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::make_tree;

    #[test]
    fn juxtaposed_and_comma_literals() {
        let (s, sigma) = parse_two_partition("456|123").unwrap();
        assert_eq!(s.len(), 6);
        assert_eq!(sigma.part_a(), 0b000111);

        let (s, pi) = parse_distinguished("1,2|3|4,10|11").unwrap();
        assert_eq!(s.tokens(), ["1", "2", "3", "4", "10", "11"]);
        assert_eq!(pi.shape().0, [2, 2, 1, 1]);
        assert_eq!(format_blocks(&s, pi.blocks()), "1,2|3|4,10|11");

        let (s, pi) = parse_distinguished("abc|d|e|f").unwrap();
        assert_eq!(format_blocks(&s, pi.blocks()), "abc|d|e|f");
    }

    #[test]
    fn parse_errors_name_the_token() {
        assert_eq!(
            parse_two_partition("12|3$4").unwrap_err(),
            LiteralError::BadToken {
                token: "$".into(),
                reason: "labels are alphanumeric".into()
            }
        );
        assert_eq!(parse_two_partition("12|23").unwrap_err(), LiteralError::Repeated("2".into()));
        assert!(matches!(parse_two_partition("12||34"), Err(LiteralError::BadToken { .. })));
        assert_eq!(parse_two_partition("  ").unwrap_err(), LiteralError::Empty);
        assert!(matches!(
            parse_two_partition("1|2345"),
            Err(LiteralError::Partition(PartitionError::Unstable(1, 4)))
        ));
    }

    #[test]
    fn blocks_over_a_known_set() {
        let (s, _) = parse_distinguished("1|2|3|456").unwrap();
        let sigma = parse_two_partition_in("1456|23", &s).unwrap();
        assert_eq!(sigma.part_a(), 0b111001);
        assert!(parse_two_partition_in("14|23", &s).is_err());
        assert!(matches!(parse_two_partition_in("1456|27", &s), Err(LiteralError::Partition(PartitionError::UnknownLabel(_)))));
        assert_eq!(parse_label_subset("", &s).unwrap(), 0);
        assert_eq!(parse_label_subset("2,3", &s).unwrap(), 0b110);
    }

    #[test]
    fn tree_literals() {
        let t = parse_tree("[abc];[d];[ef]/0-1,1-2").unwrap();
        assert_eq!(t.labels.tokens(), ["a", "b", "c", "d", "e", "f"]);
        assert_eq!(t.vertex_tails, vec![0b000111, 0b001000, 0b110000]);
        assert_eq!(t.edges, vec![(0, 1), (1, 2)]);
        let tree = make_tree(&t.vertex_tails, &t.edges, &t.labels).unwrap();
        assert_eq!(format_tree(&t.labels, &tree), "[abc];[d];[ef]/0-1,1-2");

        let star = parse_tree("[12345]").unwrap();
        assert!(star.edges.is_empty());
        let center = parse_tree("[1,2,3];[];[4,5];[6,7]/0-1 1-2 1-3").unwrap();
        assert_eq!(center.vertex_tails[1], 0);
        assert!(matches!(parse_tree("[12];34/0-1"), Err(LiteralError::BadToken { .. })));
        assert!(matches!(parse_tree("[12];[345]/0:1"), Err(LiteralError::BadToken { .. })));
    }
}
