//! Intersection numbers between boundary divisors and boundary curves, the
//! anticanonical degree of boundary curve classes, and the Picard rank.
//!
//! All arithmetic is exact. Fractions appear only in the expansion of `-K`
//! over boundary divisors, whose coefficients have denominator `n - 1`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use crate::partitions::{
    enumerate_distinguished, enumerate_stable_two_partitions, DistinguishedPartition, LabelSet,
    PartitionError, TwoPartition,
};
use crate::rational::Rational;
use crate::trees::{StableTree, TreeError};

fn require_n(n: usize, min: usize) -> Result<(), PartitionError> {
    if n < min {
        Err(PartitionError::TooFewLabels { n, min })
    } else {
        Ok(())
    }
}

/// `(D_σ, β(Π))`: `+1` on `P(Π)`, `-1` on `N(Π)`, `0` otherwise.
pub fn pair_divisor_curve(sigma: &TwoPartition, pi: &DistinguishedPartition) -> Result<i64, PartitionError> {
    if sigma.n() != pi.n() {
        return Err(PartitionError::LabelSetMismatch(sigma.n(), pi.n()));
    }
    require_n(pi.n(), 5)?;
    Ok(if pi.in_p_set(sigma) {
        1
    } else if pi.in_n_set(sigma) {
        -1
    } else {
        0
    })
}

/// `(D_σ, C_τ)` read off the dual tree itself rather than its class:
/// `+1` when `σ` can be added to the edge cuts of `τ` (the new edge
/// necessarily splits the exceptional vertex), `-1` when `σ` cuts an edge at
/// the exceptional vertex, `0` when it cuts any other edge or crosses a cut.
pub fn pair_divisor_tree(sigma: &TwoPartition, tree: &StableTree) -> Result<i64, TreeError> {
    if sigma.n() != tree.n() {
        return Err(PartitionError::LabelSetMismatch(sigma.n(), tree.n()).into());
    }
    require_n(tree.n(), 5)?;
    let v0 = tree.exceptional_vertex()?;
    for (e, &(a, b)) in tree.edges().iter().enumerate() {
        if tree.edge_cut(e)? == *sigma {
            return Ok(if a == v0 || b == v0 { -1 } else { 0 });
        }
    }
    let crosses = tree
        .signature()
        .parts()
        .iter()
        .any(|cut| !sigma.compatible(cut).expect("same label set"));
    Ok(if crosses { 0 } else { 1 })
}

/// `(-K, β(Π)) = 2 - |N(Π)|`. For `n = 4` this is 2.
pub fn minus_k_closed(pi: &DistinguishedPartition) -> i64 {
    2 - pi.n_set().len() as i64
}

/// Coefficient of `D_σ` in `-K`: `2 - j(n-j)/(n-1)` where `j` is a part size.
pub fn minus_k_coefficient(sigma: &TwoPartition) -> Rational {
    let n = sigma.n() as i64;
    Rational::integer(2) - Rational::new(sigma.c_weight() as i64, n - 1)
}

/// The full expansion of `-K` over the boundary divisors of `s`.
pub fn minus_k_divisor_coefficients(s: &LabelSet) -> Result<BTreeMap<TwoPartition, Rational>, PartitionError> {
    Ok(enumerate_stable_two_partitions(s)?
        .into_iter()
        .map(|sigma| {
            let c = minus_k_coefficient(&sigma);
            (sigma, c)
        })
        .collect())
}

/// `(-K, β(Π))` by the expanded formula
/// `2(|P| - |N|) - Σ_P c(σ)/(n-1) + Σ_N c(σ)/(n-1)`.
pub fn minus_k_expanded(pi: &DistinguishedPartition) -> Result<Rational, PartitionError> {
    require_n(pi.n(), 5)?;
    let denom = pi.n() as i64 - 1;
    let p = pi.p_set();
    let nset = pi.n_set();
    let head = Rational::integer(2 * (p.len() as i64 - nset.len() as i64));
    let p_sum: Rational = p.iter().map(|s| Rational::new(s.c_weight() as i64, denom)).sum();
    let n_sum: Rational = nset.iter().map(|s| Rational::new(s.c_weight() as i64, denom)).sum();
    Ok(head - p_sum + n_sum)
}

/// [`minus_k_expanded`] for the class of a boundary-curve tree.
pub fn minus_k_expanded_tree(tree: &StableTree) -> Result<Rational, TreeError> {
    Ok(minus_k_expanded(&tree.pi()?)?)
}

/// `(-K, β(Π))` by pairing every coefficient of the divisor expansion with
/// the divisor-curve table.
pub fn minus_k_via_divisors(pi: &DistinguishedPartition) -> Result<Rational, PartitionError> {
    require_n(pi.n(), 5)?;
    let s = LabelSet::standard(pi.n())?;
    let mut total = Rational::zero();
    for sigma in enumerate_stable_two_partitions(&s)? {
        let d = pair_divisor_curve(&sigma, pi)?;
        if d != 0 {
            total = total + minus_k_coefficient(&sigma) * Rational::integer(d);
        }
    }
    Ok(total)
}

/// `(K + B, β(Π))` where `B` is the sum of all boundary divisors.
pub fn k_plus_b_pairing(pi: &DistinguishedPartition) -> Result<i64, PartitionError> {
    require_n(pi.n(), 5)?;
    let s = LabelSet::standard(pi.n())?;
    let mut b = 0;
    for sigma in enumerate_stable_two_partitions(&s)? {
        b += pair_divisor_curve(&sigma, pi)?;
    }
    Ok(b - minus_k_closed(pi))
}

/// Rank of the divisor class group: `2^(n-1) - n(n-1)/2 - 1`.
pub fn picard_rank(n: usize) -> Result<u64, PartitionError> {
    require_n(n, 4)?;
    if n > 64 {
        return Err(PartitionError::TooManyLabels(n));
    }
    let n = n as u64;
    Ok((1u64 << (n - 1)) - n * (n - 1) / 2 - 1)
}

/// Expected dimension of a space of stable maps:
/// `(-K, β) + |Σ| + (dim W - 3)(1 - g)`.
pub fn virtual_dimension(genus: u32, sigma_size: u32, target_dim: u32, minus_k_beta: i64) -> i64 {
    minus_k_beta + sigma_size as i64 + (target_dim as i64 - 3) * (1 - genus as i64)
}

/// The table `(D_σ, β(Π))` over all stable 2-partitions (rows) and all
/// distinguished partitions (columns), both in enumeration order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntersectionMatrix {
    pub rows: Vec<TwoPartition>,
    pub columns: Vec<DistinguishedPartition>,
    pub entries: Vec<Vec<i8>>,
}

impl IntersectionMatrix {
    pub fn entry(&self, row: usize, col: usize) -> i8 {
        self.entries[row][col]
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows.len(), self.columns.len())
    }

    /// Tab-separated table: header row of `Π:shape` keys, then one row per
    /// 2-partition.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("sigma");
        for pi in &self.columns {
            let shape = pi.shape().0.map(|b| b.to_string()).join(",");
            write!(out, "\t{pi}:{shape}").unwrap();
        }
        out.push('\n');
        for (sigma, row) in self.rows.iter().zip(&self.entries) {
            out.push_str(&sigma.to_string());
            for v in row {
                write!(out, "\t{v}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}

pub fn intersection_matrix(s: &LabelSet) -> Result<IntersectionMatrix, PartitionError> {
    s.require_at_least(5)?;
    let rows = enumerate_stable_two_partitions(s)?;
    let columns = enumerate_distinguished(s)?;
    let mut entries = vec![vec![0i8; columns.len()]; rows.len()];
    let index: BTreeMap<TwoPartition, usize> = rows.iter().enumerate().map(|(i, r)| (*r, i)).collect();
    for (j, pi) in columns.iter().enumerate() {
        for sigma in pi.p_set() {
            entries[index[&sigma]][j] = 1;
        }
        for sigma in pi.n_set() {
            entries[index[&sigma]][j] = -1;
        }
    }
    Ok(IntersectionMatrix { rows, columns, entries })
}

pub fn matrix_rank(m: &IntersectionMatrix) -> usize {
    let rows: Vec<Vec<i64>> = m
        .entries
        .iter()
        .map(|r| r.iter().map(|&v| v as i64).collect())
        .collect();
    integer_rank(&rows)
}

/// Rank over the rationals by fraction-free (Bareiss) elimination, taking
/// the first nonzero pivot in each column.
pub fn integer_rank(rows: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    let height = a.len();
    let width = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::from(1);
    for col in 0..width {
        if rank == height {
            break;
        }
        let Some(p) = (rank..height).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let (top, bottom) = a.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        let pivot = &pivot_row[col];
        for row in bottom.iter_mut() {
            let factor = std::mem::take(&mut row[col]);
            for j in (col + 1)..width {
                let num = pivot * &row[j] - &factor * &pivot_row[j];
                let (q, r) = num.div_rem(&prev);
                debug_assert!(r.is_zero(), "Bareiss division is exact");
                row[j] = q;
            }
        }
        prev = pivot.clone();
        rank += 1;
    }
    rank
}
