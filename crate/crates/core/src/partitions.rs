//! Label sets, stable 2-partitions (boundary divisors) and distinguished
//! 4-block partitions (boundary curve classes), with the derived sets
//! `P(Π)` and `N(Π)`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::limit;
use crate::mask::{self, Mask, MAX_LABELS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("need at least {min} labels, got {n}")]
    TooFewLabels { n: usize, min: usize },
    #[error("{0} labels exceed the limit of 64")]
    TooManyLabels(usize),
    #[error("enumeration over {n} labels exceeds the configured bound {max}")]
    AboveBound { n: usize, max: usize },
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("label sets differ ({0} vs {1} labels)")]
    LabelSetMismatch(usize, usize),
    #[error("2-partition is not stable: parts of sizes {0} and {1}")]
    Unstable(usize, usize),
    #[error("blocks do not partition the label set: {0}")]
    NotAPartition(String),
    #[error("a distinguished partition has 4 blocks, got {0}")]
    WrongBlockCount(usize),
    #[error("not a P-set: {0}")]
    NotPSet(String),
}

/// The label set `S`. Tokens are kept in canonical order; token `i` is the
/// internal label `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabelSet {
    tokens: Vec<String>,
}

impl LabelSet {
    /// The labels `1..=n`.
    pub fn standard(n: usize) -> Result<Self, PartitionError> {
        Self::check_size(n)?;
        Ok(Self {
            tokens: (1..=n).map(|i| i.to_string()).collect(),
        })
    }

    /// Build from arbitrary tokens. Tokens are sorted numerically when every
    /// token is an unsigned integer and lexicographically otherwise.
    pub fn from_tokens<I, T>(tokens: I) -> Result<Self, PartitionError>
    where
        I: IntoIterator<Item = T>,
        T: Into<String>,
    {
        let mut tokens: Vec<String> = tokens.into_iter().map(Into::into).collect();
        Self::check_size(tokens.len())?;
        let numeric: Option<Vec<u64>> = tokens.iter().map(|t| t.parse().ok()).collect();
        match numeric {
            Some(values) => {
                let mut pairs: Vec<(u64, String)> = values.into_iter().zip(tokens).collect();
                pairs.sort();
                tokens = pairs.into_iter().map(|(_, t)| t).collect();
            }
            None => tokens.sort(),
        }
        if let Some(w) = tokens.windows(2).find(|w| w[0] == w[1]) {
            return Err(PartitionError::DuplicateLabel(w[0].clone()));
        }
        Ok(Self { tokens })
    }

    fn check_size(n: usize) -> Result<(), PartitionError> {
        if n < 3 {
            Err(PartitionError::TooFewLabels { n, min: 3 })
        } else if n > MAX_LABELS {
            Err(PartitionError::TooManyLabels(n))
        } else {
            Ok(())
        }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn full_mask(&self) -> Mask {
        mask::full(self.len())
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    /// Token of the internal label `label` (1-based).
    pub fn token(&self, label: usize) -> &str {
        &self.tokens[label - 1]
    }

    /// Internal label of `token`.
    pub fn label_of(&self, token: &str) -> Result<usize, PartitionError> {
        self.tokens
            .iter()
            .position(|t| t == token)
            .map(|i| i + 1)
            .ok_or_else(|| PartitionError::UnknownLabel(token.to_string()))
    }

    /// True when every token is a single character, so labels can be written
    /// by juxtaposition.
    pub fn single_char(&self) -> bool {
        self.tokens.iter().all(|t| t.chars().count() == 1)
    }

    /// The label set with the labels of `removed` dropped. Fails if fewer
    /// than three labels remain.
    pub fn without(&self, removed: Mask) -> Result<Self, PartitionError> {
        let tokens: Vec<String> = (1..=self.len())
            .filter(|&l| removed & mask::bit(l) == 0)
            .map(|l| self.tokens[l - 1].clone())
            .collect();
        Self::check_size(tokens.len())?;
        Ok(Self { tokens })
    }

    pub(crate) fn require_at_least(&self, min: usize) -> Result<(), PartitionError> {
        if self.len() < min {
            return Err(PartitionError::TooFewLabels { n: self.len(), min });
        }
        Ok(())
    }

    pub(crate) fn require_within_bound(&self) -> Result<(), PartitionError> {
        let max = limit::max_n();
        if self.len() > max {
            return Err(PartitionError::AboveBound { n: self.len(), max });
        }
        Ok(())
    }
}

fn check_same_n(a: usize, b: usize) -> Result<(), PartitionError> {
    if a == b {
        Ok(())
    } else {
        Err(PartitionError::LabelSetMismatch(a, b))
    }
}

fn mask_to_vec(m: Mask) -> Vec<u32> {
    mask::labels(m).map(|l| l as u32).collect()
}

/// Read a list of label arrays (1-based) into masks, inferring `n` from the
/// union, which must be exactly `1..=n` without repetition.
fn masks_from_arrays(blocks: &[Vec<u32>]) -> Result<(usize, Vec<Mask>), PartitionError> {
    let mut union: Mask = 0;
    let mut masks = Vec::with_capacity(blocks.len());
    for block in blocks {
        let mut m: Mask = 0;
        for &l in block {
            let l = l as usize;
            if l == 0 || l > MAX_LABELS {
                return Err(PartitionError::UnknownLabel(l.to_string()));
            }
            if (m | union) & mask::bit(l) != 0 {
                return Err(PartitionError::DuplicateLabel(l.to_string()));
            }
            m |= mask::bit(l);
        }
        union |= m;
        masks.push(m);
    }
    let n = mask::size(union);
    if union != mask::full(n) {
        return Err(PartitionError::NotAPartition(format!(
            "labels {:?} are not 1..={n}",
            mask_to_vec(union)
        )));
    }
    Ok((n, masks))
}

/// A stable unordered 2-partition `{S1, S2}` of the labels `1..=n`, i.e. a
/// boundary divisor. The part containing label 1 is `part_a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<u32>>", into = "Vec<Vec<u32>>")]
pub struct TwoPartition {
    n: u8,
    part_a: Mask,
}

impl TwoPartition {
    /// The partition `{part, S \ part}`; either side may be given.
    pub fn new(n: usize, part: Mask) -> Result<Self, PartitionError> {
        if !(1..=MAX_LABELS).contains(&n) {
            return Err(PartitionError::TooManyLabels(n));
        }
        let full = mask::full(n);
        if !mask::is_subset(part, full) {
            return Err(PartitionError::NotAPartition(format!(
                "labels outside 1..={n}"
            )));
        }
        let part_a = if part & 1 != 0 { part } else { full ^ part };
        let (a, b) = (mask::size(part_a), n - mask::size(part_a));
        if a < 2 || b < 2 {
            return Err(PartitionError::Unstable(a.min(b), a.max(b)));
        }
        Ok(Self { n: n as u8, part_a })
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn part_a(&self) -> Mask {
        self.part_a
    }

    pub fn part_b(&self) -> Mask {
        mask::full(self.n()) ^ self.part_a
    }

    pub fn parts(&self) -> [Mask; 2] {
        [self.part_a, self.part_b()]
    }

    /// `|S1| * |S2|`.
    pub fn c_weight(&self) -> u64 {
        let a = mask::size(self.part_a) as u64;
        a * (self.n as u64 - a)
    }

    /// Size of the smaller part.
    pub fn min_part_size(&self) -> usize {
        let a = mask::size(self.part_a);
        a.min(self.n() - a)
    }

    pub fn has_part(&self, m: Mask) -> bool {
        m == self.part_a || m == self.part_b()
    }

    /// Non-crossing test: some part of `self` lies inside some part of
    /// `other`. Symmetric and reflexive.
    pub fn compatible(&self, other: &TwoPartition) -> Result<bool, PartitionError> {
        check_same_n(self.n(), other.n())?;
        Ok(self.compatible_unchecked(other))
    }

    pub(crate) fn compatible_unchecked(&self, other: &TwoPartition) -> bool {
        let [a, b] = self.parts();
        let [c, d] = other.parts();
        a & c == 0 || a & d == 0 || b & c == 0 || b & d == 0
    }
}

impl TryFrom<Vec<Vec<u32>>> for TwoPartition {
    type Error = PartitionError;

    fn try_from(parts: Vec<Vec<u32>>) -> Result<Self, Self::Error> {
        if parts.len() != 2 {
            return Err(PartitionError::NotAPartition(format!(
                "expected 2 parts, got {}",
                parts.len()
            )));
        }
        let (n, masks) = masks_from_arrays(&parts)?;
        if masks.iter().any(|&m| m == 0) {
            return Err(PartitionError::NotAPartition("empty part".into()));
        }
        TwoPartition::new(n, masks[0])
    }
}

impl From<TwoPartition> for Vec<Vec<u32>> {
    fn from(p: TwoPartition) -> Self {
        vec![mask_to_vec(p.part_a), mask_to_vec(p.part_b())]
    }
}

impl fmt::Display for TwoPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_blocks(f, &self.parts())
    }
}

fn write_blocks(f: &mut fmt::Formatter<'_>, blocks: &[Mask]) -> fmt::Result {
    let n: usize = blocks.iter().map(|&b| mask::size(b)).sum();
    let sep = if n > 9 { "," } else { "" };
    for (i, &b) in blocks.iter().enumerate() {
        if i > 0 {
            f.write_str("|")?;
        }
        let labels: Vec<String> = mask::labels(b).map(|l| l.to_string()).collect();
        f.write_str(&labels.join(sep))?;
    }
    Ok(())
}

/// All stable 2-partitions of `s`, ordered by the bitmask of the part
/// containing label 1. There are `2^(n-1) - 1 - n` of them.
pub fn enumerate_stable_two_partitions(s: &LabelSet) -> Result<Vec<TwoPartition>, PartitionError> {
    s.require_at_least(4)?;
    s.require_within_bound()?;
    let n = s.len();
    let full = s.full_mask();
    let mut out = Vec::with_capacity((1usize << (n - 1)) - 1 - n);
    // part_a = {1} ∪ rest, rest ranging over subsets of {2..n}
    for rest in 0..(1u64 << (n - 1)) {
        let part_a = 1 | (rest << 1);
        let a = mask::size(part_a);
        if a >= 2 && n - a >= 2 {
            debug_assert!(mask::is_subset(part_a, full));
            out.push(TwoPartition { n: n as u8, part_a });
        }
    }
    Ok(out)
}

/// The block-size multiset of a distinguished partition, sorted descending.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Shape(pub [usize; 4]);

impl Shape {
    pub fn from_sizes(mut sizes: [usize; 4]) -> Self {
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        Shape(sizes)
    }

    /// Number of blocks of size at least 2.
    pub fn non_singletons(&self) -> usize {
        self.0.iter().filter(|&&b| b >= 2).count()
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "({a},{b},{c},{d})")
    }
}

/// A partition of `1..=n` into exactly four nonempty blocks, indexing the
/// class of a boundary curve. Blocks are ordered by their minimal label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<u32>>", into = "Vec<Vec<u32>>")]
pub struct DistinguishedPartition {
    n: u8,
    blocks: [Mask; 4],
}

impl DistinguishedPartition {
    pub fn from_blocks(n: usize, blocks: &[Mask]) -> Result<Self, PartitionError> {
        if !(1..=MAX_LABELS).contains(&n) {
            return Err(PartitionError::TooManyLabels(n));
        }
        if blocks.len() != 4 {
            return Err(PartitionError::WrongBlockCount(blocks.len()));
        }
        let mut union: Mask = 0;
        for &b in blocks {
            if b == 0 {
                return Err(PartitionError::NotAPartition("empty block".into()));
            }
            if b & union != 0 {
                return Err(PartitionError::NotAPartition("overlapping blocks".into()));
            }
            union |= b;
        }
        if union != mask::full(n) {
            return Err(PartitionError::NotAPartition(format!(
                "blocks do not cover 1..={n}"
            )));
        }
        let mut sorted = [blocks[0], blocks[1], blocks[2], blocks[3]];
        sorted.sort_unstable_by_key(|&b| b.trailing_zeros());
        Ok(Self {
            n: n as u8,
            blocks: sorted,
        })
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn blocks(&self) -> &[Mask; 4] {
        &self.blocks
    }

    pub fn shape(&self) -> Shape {
        Shape::from_sizes(self.blocks.map(mask::size))
    }

    /// Block index of every label, `1..=n` in order (a restricted growth
    /// string).
    pub fn block_indices(&self) -> Vec<u8> {
        (1..=self.n())
            .map(|l| {
                self.blocks
                    .iter()
                    .position(|&b| b & mask::bit(l) != 0)
                    .expect("blocks cover S") as u8
            })
            .collect()
    }

    /// The three stable 2-partitions each of whose parts is a union of two
    /// blocks, sorted.
    pub fn p_set(&self) -> [TwoPartition; 3] {
        let [b0, b1, b2, b3] = self.blocks;
        let n = self.n();
        let mut out = [b0 | b1, b0 | b2, b0 | b3].map(|m| {
            TwoPartition::new(n, m).expect("a union of two blocks and its complement have >= 2 labels")
        });
        out.sort();
        out
    }

    /// The stable 2-partitions one part of which is a block. Empty for
    /// `n = 4`, where no block can be a stable part.
    pub fn n_set(&self) -> Vec<TwoPartition> {
        if self.n() < 5 {
            return Vec::new();
        }
        let mut out: Vec<TwoPartition> = self
            .blocks
            .iter()
            .filter(|&&b| mask::size(b) >= 2)
            .map(|&b| TwoPartition::new(self.n(), b).expect("complement of a block has >= 3 labels"))
            .collect();
        out.sort();
        out
    }

    pub fn in_p_set(&self, sigma: &TwoPartition) -> bool {
        // a part of σ is a union of exactly two blocks
        let a = sigma.part_a();
        let inside = self.blocks.iter().filter(|&&b| b & a == b).count();
        let touched = self.blocks.iter().filter(|&&b| b & a != 0).count();
        inside == 2 && touched == 2
    }

    pub fn in_n_set(&self, sigma: &TwoPartition) -> bool {
        self.n() >= 5 && self.blocks.iter().any(|&b| sigma.has_part(b))
    }
}

impl PartialOrd for DistinguishedPartition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DistinguishedPartition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.block_indices().cmp(&other.block_indices()))
    }
}

impl TryFrom<Vec<Vec<u32>>> for DistinguishedPartition {
    type Error = PartitionError;

    fn try_from(blocks: Vec<Vec<u32>>) -> Result<Self, Self::Error> {
        let (n, masks) = masks_from_arrays(&blocks)?;
        DistinguishedPartition::from_blocks(n, &masks)
    }
}

impl From<DistinguishedPartition> for Vec<Vec<u32>> {
    fn from(p: DistinguishedPartition) -> Self {
        p.blocks.iter().map(|&b| mask_to_vec(b)).collect()
    }
}

impl fmt::Display for DistinguishedPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_blocks(f, &self.blocks)
    }
}

/// Recover `Π` from `P(Π)`: its blocks are the nonempty pairwise
/// intersections of parts of distinct members.
pub fn reconstruct_from_p(p: &[TwoPartition]) -> Result<DistinguishedPartition, PartitionError> {
    if p.len() != 3 {
        return Err(PartitionError::NotPSet(format!("expected 3 partitions, got {}", p.len())));
    }
    let n = p[0].n();
    for sigma in &p[1..] {
        check_same_n(n, sigma.n())?;
    }
    let mut blocks: Vec<Mask> = Vec::new();
    for i in 0..3 {
        for j in (i + 1)..3 {
            for x in p[i].parts() {
                for y in p[j].parts() {
                    let m = x & y;
                    if m != 0 && !blocks.contains(&m) {
                        blocks.push(m);
                    }
                }
            }
        }
    }
    if blocks.len() != 4 {
        return Err(PartitionError::NotPSet(format!(
            "pairwise intersections give {} distinct blocks",
            blocks.len()
        )));
    }
    let pi = DistinguishedPartition::from_blocks(n, &blocks)
        .map_err(|e| PartitionError::NotPSet(e.to_string()))?;
    let mut given = p.to_vec();
    given.sort();
    if given != pi.p_set() {
        return Err(PartitionError::NotPSet(
            "intersections do not reproduce the given partitions".into(),
        ));
    }
    Ok(pi)
}

/// All partitions of `s` into exactly four nonempty blocks, in increasing
/// order of their block-index strings. There are `S(n, 4)` of them.
pub fn enumerate_distinguished(s: &LabelSet) -> Result<Vec<DistinguishedPartition>, PartitionError> {
    s.require_at_least(4)?;
    s.require_within_bound()?;
    let n = s.len();
    let mut out = Vec::new();
    let mut blocks = [0 as Mask; 4];
    rgs(n, 0, 0, &mut blocks, &mut out);
    Ok(out)
}

fn rgs(n: usize, label: usize, used: usize, blocks: &mut [Mask; 4], out: &mut Vec<DistinguishedPartition>) {
    if label == n {
        if used == 4 {
            out.push(DistinguishedPartition {
                n: n as u8,
                blocks: *blocks,
            });
        }
        return;
    }
    // labels still to place must be able to open the missing blocks
    if n - label < 4 - used {
        return;
    }
    let top = if used < 4 { used } else { 3 };
    for b in 0..=top {
        blocks[b] |= 1 << label;
        rgs(n, label + 1, used.max(b + 1), blocks, out);
        blocks[b] &= !(1 << label);
    }
}
