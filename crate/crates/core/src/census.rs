//! Census of boundary curves: every one-dimensional boundary stratum,
//! grouped by unlabeled combinatorial type and by Chow class.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::intersect::minus_k_closed;
use crate::limit;
use crate::mask::{self, Mask};
use crate::partitions::{enumerate_distinguished, DistinguishedPartition, LabelSet, PartitionError, Shape};
use crate::trees::{curve_trees_of_class, make_tree, StableTree, TreeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CensusError {
    #[error("census needs {min} <= n <= {max}, got n = {n}")]
    OutOfBounds { n: usize, min: usize, max: usize },
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

#[derive(Debug, Clone, Default)]
pub struct CensusOptions {
    /// Keep the member trees of every class when the total number of curves
    /// is at most this many.
    pub retain_members: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct TypeRecord {
    pub key: String,
    /// Conventional letter for the four types at `n = 7`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub representative: StableTree,
    pub shape: Shape,
    pub curve_count: u64,
    /// Number of distinct classes met by curves of this type.
    pub class_count: u64,
    pub minus_k: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TypeShare {
    pub key: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub curves_per_class: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassRecord {
    pub shape: Shape,
    pub representative: DistinguishedPartition,
    pub class_count: u64,
    pub curves_per_class: u64,
    pub breakdown: Vec<TypeShare>,
    pub curve_count: u64,
    pub minus_k: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Totals {
    pub curves: u64,
    pub classes: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassMembers {
    pub pi: DistinguishedPartition,
    pub trees: Vec<StableTree>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CensusReport {
    pub n: usize,
    pub types: Vec<TypeRecord>,
    pub classes: Vec<ClassRecord>,
    pub totals: Totals,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub members: Vec<ClassMembers>,
}

pub fn run_census(s: &LabelSet) -> Result<CensusReport, CensusError> {
    run_census_with(s, &CensusOptions::default())
}

pub fn run_census_with(s: &LabelSet, options: &CensusOptions) -> Result<CensusReport, CensusError> {
    let n = s.len();
    let max = limit::max_n();
    if n < 4 || n > max {
        return Err(CensusError::OutOfBounds { n, min: 4, max });
    }
    let names = type_names(n);

    struct TypeAcc {
        representative: StableTree,
        shape: Shape,
        curves: u64,
        classes: u64,
        minus_k: i64,
    }
    struct ShapeAcc {
        representative: DistinguishedPartition,
        classes: u64,
        curves: u64,
        per_type: BTreeMap<String, u64>,
        minus_k: i64,
    }
    let mut types: BTreeMap<String, TypeAcc> = BTreeMap::new();
    let mut shapes: BTreeMap<Shape, ShapeAcc> = BTreeMap::new();
    let mut members = Vec::new();
    let mut total: u64 = 0;

    for pi in enumerate_distinguished(s)? {
        let trees = curve_trees_of_class(&pi);
        let minus_k = minus_k_closed(&pi);
        let shape = pi.shape();
        let entry = shapes.entry(shape).or_insert_with(|| ShapeAcc {
            representative: pi,
            classes: 0,
            curves: 0,
            per_type: BTreeMap::new(),
            minus_k,
        });
        entry.classes += 1;
        entry.curves += trees.len() as u64;
        let mut seen = BTreeSet::new();
        for tree in &trees {
            let key = tree.unlabeled_type_key();
            *entry.per_type.entry(key.clone()).or_insert(0) += 1;
            let t = types.entry(key.clone()).or_insert_with(|| TypeAcc {
                representative: tree.clone(),
                shape,
                curves: 0,
                classes: 0,
                minus_k,
            });
            t.curves += 1;
            if seen.insert(key) {
                t.classes += 1;
            }
        }
        total += trees.len() as u64;
        members.push(ClassMembers { pi, trees });
    }
    if total > options.retain_members as u64 {
        members.clear();
    }

    let mut type_records: Vec<TypeRecord> = types
        .into_iter()
        .map(|(key, t)| TypeRecord {
            name: names.get(&key).cloned(),
            key,
            representative: t.representative,
            shape: t.shape,
            curve_count: t.curves,
            class_count: t.classes,
            minus_k: t.minus_k,
        })
        .collect();
    type_records.sort_by(|a, b| b.curve_count.cmp(&a.curve_count).then_with(|| a.key.cmp(&b.key)));

    let class_records: Vec<ClassRecord> = shapes
        .into_iter()
        .rev()
        .map(|(shape, acc)| ClassRecord {
            shape,
            representative: acc.representative,
            class_count: acc.classes,
            curves_per_class: acc.curves / acc.classes,
            breakdown: acc
                .per_type
                .into_iter()
                .map(|(key, curves)| TypeShare {
                    name: names.get(&key).cloned(),
                    key,
                    curves_per_class: curves / acc.classes,
                })
                .collect(),
            curve_count: acc.curves,
            minus_k: acc.minus_k,
        })
        .collect();
    let classes = class_records.iter().map(|c| c.class_count).sum();

    Ok(CensusReport {
        n,
        types: type_records,
        classes: class_records,
        totals: Totals { curves: total, classes },
        members,
    })
}

/// Letters A-D for the four curve types at `n = 7`, keyed by type key.
fn type_names(n: usize) -> BTreeMap<String, String> {
    if n != 7 {
        return BTreeMap::new();
    }
    let s = LabelSet::standard(7).expect("7 labels");
    let m = |l: &[usize]| mask::from_labels(l.iter().copied());
    let chain = [(0, 1), (1, 2), (2, 3)];
    let fork = [(0, 1), (1, 2), (1, 3)];
    let reps: [(&str, [Mask; 4], [(usize, usize); 3]); 4] = [
        // 3•-•1-•1-•2
        ("A", [m(&[1, 2, 3]), m(&[4]), m(&[5]), m(&[6, 7])], chain),
        // 2•-•2-•1-•2
        ("B", [m(&[1, 2]), m(&[3, 4]), m(&[5]), m(&[6, 7])], chain),
        // 3•-• forking into two •2
        ("C", [m(&[1, 2, 3]), 0, m(&[4, 5]), m(&[6, 7])], fork),
        // 2•-1• forking into two •2
        ("D", [m(&[1, 2]), m(&[3]), m(&[4, 5]), m(&[6, 7])], fork),
    ];
    reps.iter()
        .map(|(name, tails, edges)| {
            let t = make_tree(tails, edges, &s).expect("representative trees are stable");
            (t.unlabeled_type_key(), name.to_string())
        })
        .collect()
}

/// Number of boundary curves in the class of `pi`: the product over blocks
/// of size `b >= 2` of `(2b - 3)!!`, the count of trivalent trees on `b + 1`
/// labeled leaves.
pub fn class_size_oracle(pi: &DistinguishedPartition) -> u64 {
    pi.blocks()
        .iter()
        .map(|&b| mask::size(b) as u64)
        .filter(|&b| b >= 2)
        .map(|b| (1..=(2 * b - 3)).step_by(2).product::<u64>())
        .product()
}

/// Number of distinguished partitions of `s` of each shape, by the
/// multinomial count `n! / (Π b_i! · Π m_j!)` with `m_j` the multiplicities of
/// equal block sizes.
pub fn classes_by_shape(s: &LabelSet) -> Result<BTreeMap<Shape, u128>, PartitionError> {
    s.require_at_least(4)?;
    let n = s.len();
    let mut out = BTreeMap::new();
    for a in 1..=n - 3 {
        for b in 1..=a.min(n - a - 2) {
            for c in 1..=b.min(n - a - b - 1) {
                let d = n - a - b - c;
                if d < 1 || d > c {
                    continue;
                }
                let sizes = [a, b, c, d];
                let mut count: u128 = 1;
                let mut left = n as u128;
                for &k in &sizes {
                    count *= binomial(left, k as u128);
                    left -= k as u128;
                }
                let mut i = 0;
                while i < 4 {
                    let j = (i..4).take_while(|&j| sizes[j] == sizes[i]).count();
                    count /= (1..=j as u128).product::<u128>();
                    i += j;
                }
                out.insert(Shape(sizes), count);
            }
        }
    }
    Ok(out)
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

impl CensusReport {
    pub fn type_count(&self) -> usize {
        self.types.len()
    }

    /// Tab-separated summary: one row per type, then one row per class shape.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("section\tname\tshape\tcurves\tclasses\tminus_k\n");
        for t in &self.types {
            writeln!(
                out,
                "type\t{}\t{}\t{}\t{}\t{}",
                t.name.as_deref().unwrap_or(&t.key),
                t.shape,
                t.curve_count,
                t.class_count,
                t.minus_k
            )
            .unwrap();
        }
        for c in &self.classes {
            writeln!(
                out,
                "class\t{}\t{}\t{}\t{}\t{}",
                c.representative, c.shape, c.curve_count, c.class_count, c.minus_k
            )
            .unwrap();
        }
        out
    }

    /// Aligned human-readable table.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        writeln!(out, "boundary curves of M_0,{}", self.n).unwrap();
        writeln!(out).unwrap();
        writeln!(out, "{:<4} {:<28} {:<12} {:>8} {:>8} {:>4}", "type", "key", "shape", "curves", "classes", "-K").unwrap();
        for t in &self.types {
            writeln!(
                out,
                "{:<4} {:<28} {:<12} {:>8} {:>8} {:>4}",
                t.name.as_deref().unwrap_or("-"),
                t.key,
                t.shape.to_string(),
                t.curve_count,
                t.class_count,
                t.minus_k
            )
            .unwrap();
        }
        writeln!(out).unwrap();
        writeln!(out, "{:<12} {:>8} {:>10} {:>8} {:>4}", "shape", "classes", "per class", "curves", "-K").unwrap();
        for c in &self.classes {
            writeln!(
                out,
                "{:<12} {:>8} {:>10} {:>8} {:>4}",
                c.shape.to_string(),
                c.class_count,
                c.curves_per_class,
                c.curve_count,
                c.minus_k
            )
            .unwrap();
        }
        writeln!(out).unwrap();
        writeln!(out, "total: {} curves in {} classes", self.totals.curves, self.totals.classes).unwrap();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(n: usize) -> CensusReport {
        run_census(&LabelSet::standard(n).unwrap()).unwrap()
    }

    #[test]
    fn census_five() {
        let r = report(5);
        assert_eq!(r.totals, Totals { curves: 10, classes: 10 });
        assert_eq!(r.classes.len(), 1);
        assert_eq!(r.classes[0].shape, Shape([2, 1, 1, 1]));
        assert_eq!(r.type_count(), 1);
    }

    #[test]
    fn census_six() {
        let r = report(6);
        let types: Vec<(u64, i64)> = r.types.iter().map(|t| (t.curve_count, t.minus_k)).collect();
        assert_eq!(types, vec![(60, 1), (45, 0)]);
        let classes: Vec<(Shape, u64)> = r.classes.iter().map(|c| (c.shape, c.class_count)).collect();
        assert_eq!(classes, vec![(Shape([3, 1, 1, 1]), 20), (Shape([2, 2, 1, 1]), 45)]);
    }

    #[test]
    fn census_seven_names() {
        let r = report(7);
        let named: BTreeMap<String, (u64, i64)> = r
            .types
            .iter()
            .map(|t| (t.name.clone().unwrap(), (t.curve_count, t.minus_k)))
            .collect();
        assert_eq!(named["A"], (420, 1));
        assert_eq!(named["B"], (630, 0));
        assert_eq!(named["C"], (105, 1));
        assert_eq!(named["D"], (105, -1));
        let first = &r.classes[0];
        assert_eq!(first.shape, Shape([4, 1, 1, 1]));
        assert_eq!(first.curves_per_class, 15);
        let shares: Vec<(String, u64)> = first
            .breakdown
            .iter()
            .map(|s| (s.name.clone().unwrap(), s.curves_per_class))
            .collect();
        assert!(shares.contains(&("A".into(), 12)) && shares.contains(&("C".into(), 3)));
    }

    #[test]
    fn census_bounds() {
        let s = LabelSet::standard(3).unwrap();
        assert!(matches!(run_census(&s), Err(CensusError::OutOfBounds { n: 3, .. })));
    }

    #[test]
    fn retained_members() {
        let s = LabelSet::standard(5).unwrap();
        let r = run_census_with(&s, &CensusOptions { retain_members: 100 }).unwrap();
        assert_eq!(r.members.len(), 10);
        assert!(run_census(&s).unwrap().members.is_empty());
    }

    #[test]
    fn oracle_examples() {
        let m = |l: &[usize]| mask::from_labels(l.iter().copied());
        let a = DistinguishedPartition::from_blocks(6, &[m(&[1, 2, 3]), m(&[4]), m(&[5]), m(&[6])]).unwrap();
        assert_eq!(class_size_oracle(&a), 3);
        let b = DistinguishedPartition::from_blocks(6, &[m(&[1, 2]), m(&[3, 4]), m(&[5]), m(&[6])]).unwrap();
        assert_eq!(class_size_oracle(&b), 1);
        let c = DistinguishedPartition::from_blocks(7, &[m(&[1, 2, 3, 4]), m(&[5]), m(&[6]), m(&[7])]).unwrap();
        assert_eq!(class_size_oracle(&c), 15);
    }

    #[test]
    fn shape_counts() {
        let by = |n| classes_by_shape(&LabelSet::standard(n).unwrap()).unwrap();
        assert_eq!(by(5).into_iter().collect::<Vec<_>>(), vec![(Shape([2, 1, 1, 1]), 10)]);
        let six = by(6);
        assert_eq!(six[&Shape([3, 1, 1, 1])], 20);
        assert_eq!(six[&Shape([2, 2, 1, 1])], 45);
        let seven = by(7);
        assert_eq!(seven[&Shape([4, 1, 1, 1])], 35);
        assert_eq!(seven[&Shape([3, 2, 1, 1])], 210);
        assert_eq!(seven[&Shape([2, 2, 2, 1])], 105);
        assert_eq!(by(4).values().sum::<u128>(), 1);
    }
}
