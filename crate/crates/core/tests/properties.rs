//! Exhaustive and randomized checks of the structural invariants.

use std::collections::{BTreeMap, BTreeSet};

use m0n_core::census::class_size_oracle;
use m0n_core::intersect::{
    intersection_matrix, k_plus_b_pairing, matrix_rank, minus_k_closed, minus_k_expanded,
    minus_k_via_divisors, pair_divisor_curve, pair_divisor_tree, picard_rank,
};
use m0n_core::mask::{self, Mask};
use m0n_core::partitions::{
    enumerate_distinguished, enumerate_stable_two_partitions, reconstruct_from_p,
};
use m0n_core::trees::{enumerate_curve_trees, enumerate_trees, make_tree, tree_from_signature, PartitionSetSignature};
use m0n_core::{DistinguishedPartition, LabelSet, Rational, StableTree, TwoPartition};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn labels(n: usize) -> LabelSet {
    LabelSet::standard(n).unwrap()
}

#[test]
fn p_and_n_sets_for_all_partitions() {
    for n in 5..=8 {
        for pi in enumerate_distinguished(&labels(n)).unwrap() {
            let p = pi.p_set();
            let nset = pi.n_set();
            assert_eq!(p.len(), 3);
            assert_eq!(nset.len(), pi.shape().non_singletons());
            assert!((1..=4).contains(&nset.len()));
            assert!(nset.iter().all(|s| !p.contains(s)));
            for (i, a) in p.iter().enumerate() {
                for b in &p[i + 1..] {
                    assert!(!a.compatible(b).unwrap(), "{pi}: P members {a} and {b} are compatible");
                }
                for b in &nset {
                    assert!(a.compatible(b).unwrap());
                }
            }
            assert_eq!(reconstruct_from_p(&p).unwrap(), pi);
        }
    }
}

#[test]
fn reconstruction_rejects_non_p_triples() {
    // every triple of stable 2-partitions at n = 5 either is some P(Π) or is rejected
    let s = labels(5);
    let all = enumerate_stable_two_partitions(&s).unwrap();
    let p_sets: BTreeSet<Vec<TwoPartition>> = enumerate_distinguished(&s)
        .unwrap()
        .iter()
        .map(|pi| pi.p_set().to_vec())
        .collect();
    for i in 0..all.len() {
        for j in i + 1..all.len() {
            for k in j + 1..all.len() {
                let triple = vec![all[i], all[j], all[k]];
                assert_eq!(reconstruct_from_p(&triple).is_ok(), p_sets.contains(&triple));
            }
        }
    }
}

#[test]
fn signature_roundtrip_all_strata() {
    for n in 4..=7 {
        let s = labels(n);
        for codim in 0..=n - 3 {
            for t in enumerate_trees(&s, codim).unwrap() {
                assert_eq!(t.codimension(), codim);
                let again = tree_from_signature(t.signature()).unwrap();
                assert_eq!(again.signature(), t.signature());
                // rebuilding from the vertex layout gives the same layout
                let tails: Vec<Mask> = t.vertices().iter().map(|v| v.tails).collect();
                let rebuilt = make_tree(&tails, t.edges(), &s).unwrap();
                assert_eq!(rebuilt.vertices(), t.vertices());
                assert_eq!(rebuilt.edges(), t.edges());
                for v in 0..t.vertices().len() {
                    assert!(t.flags(v) >= 3);
                }
            }
        }
    }
}

/// Brute-force count of compatible k-subsets of stable 2-partitions.
fn brute_compatible_subsets(n: usize, k: usize) -> usize {
    let parts = enumerate_stable_two_partitions(&labels(n)).unwrap();
    fn go(parts: &[TwoPartition], start: usize, chosen: &mut Vec<TwoPartition>, k: usize) -> usize {
        if chosen.len() == k {
            return 1;
        }
        let mut total = 0;
        for i in start..parts.len() {
            if chosen.iter().all(|c| c.compatible(&parts[i]).unwrap()) {
                chosen.push(parts[i]);
                total += go(parts, i + 1, chosen, k);
                chosen.pop();
            }
        }
        total
    }
    go(&parts, 0, &mut Vec::new(), k)
}

#[test]
fn stratum_counts_match_brute_force() {
    assert_eq!(brute_compatible_subsets(5, 2), 15);
    for n in 5..=6 {
        for codim in 0..=n - 3 {
            assert_eq!(
                enumerate_trees(&labels(n), codim).unwrap().len(),
                brute_compatible_subsets(n, codim)
            );
        }
    }
    // maximal strata are the trivalent trees: (2n-5)!!
    assert_eq!(enumerate_trees(&labels(7), 4).unwrap().len(), 945);
}

#[test]
fn curve_tree_routes_agree() {
    for n in 4..=7 {
        let s = labels(n);
        let grouped: BTreeSet<StableTree> = enumerate_curve_trees(&s).unwrap().into_iter().collect();
        let direct: BTreeSet<StableTree> = enumerate_trees(&s, n - 4).unwrap().into_iter().collect();
        assert_eq!(grouped, direct, "n = {n}");
        assert_eq!(grouped.len(), enumerate_curve_trees(&s).unwrap().len());
    }
}

#[test]
fn curve_tree_structure() {
    for n in 5..=7 {
        for t in enumerate_curve_trees(&labels(n)).unwrap() {
            assert_eq!(t.codimension(), n - 4);
            let v0 = t.exceptional_vertex().unwrap();
            let flag_counts: Vec<usize> = (0..t.vertices().len()).map(|v| t.flags(v)).collect();
            assert_eq!(flag_counts.iter().filter(|&&f| f == 4).count(), 1);
            assert!(flag_counts.iter().all(|&f| f == 3 || f == 4));

            let pi = t.pi().unwrap();
            let at_v0: BTreeSet<TwoPartition> = t
                .edges()
                .iter()
                .enumerate()
                .filter(|(_, &(a, b))| a == v0 || b == v0)
                .map(|(e, _)| t.edge_cut(e).unwrap())
                .collect();
            let nset: BTreeSet<TwoPartition> = pi.n_set().into_iter().collect();
            assert_eq!(nset, at_v0);
        }
    }
}

#[test]
fn class_sizes_match_enumeration() {
    for n in 4..=8 {
        let s = labels(n);
        let mut by_class: BTreeMap<DistinguishedPartition, u64> = BTreeMap::new();
        for t in enumerate_curve_trees(&s).unwrap() {
            *by_class.entry(t.pi().unwrap()).or_default() += 1;
        }
        let classes = enumerate_distinguished(&s).unwrap();
        assert_eq!(by_class.len(), classes.len());
        for pi in &classes {
            assert_eq!(by_class[pi], class_size_oracle(pi), "{pi}");
        }
    }
}

#[test]
fn contraction_drops_one_cut() {
    for t in enumerate_trees(&labels(6), 2).unwrap() {
        for e in 0..t.codimension() {
            let c = t.contract_edge(e).unwrap();
            assert_eq!(c.codimension(), t.codimension() - 1);
            let cut = t.edge_cut(e).unwrap();
            let expected: Vec<TwoPartition> = t.signature().parts().iter().filter(|&&p| p != cut).copied().collect();
            assert_eq!(c.signature().parts(), expected.as_slice());
            // the merged vertex carries the tails of both endpoints
            let (a, b) = t.edges()[e];
            let merged = t.vertices()[a].tails | t.vertices()[b].tails;
            assert!(c.vertices().iter().any(|v| v.tails == merged));
        }
    }
}

/// Forget by restricting edge cuts: keep the cuts that stay stable on
/// `S \ q`, renumbered.
fn forget_by_cuts(t: &StableTree, q: Mask) -> StableTree {
    let n = t.n();
    let keep = mask::full(n) & !q;
    let m = mask::size(keep);
    let parts: BTreeSet<TwoPartition> = t
        .signature()
        .parts()
        .iter()
        .filter_map(|p| TwoPartition::new(m, mask::compress(p.part_a() & keep, keep)).ok())
        .collect();
    tree_from_signature(&PartitionSetSignature::new(m, parts.into_iter().collect()).unwrap()).unwrap()
}

/// Forget the labels of `q` one at a time in the given order, tracking the
/// renumbering.
fn forget_sequentially(t: &StableTree, order: &[usize]) -> StableTree {
    let mut current = t.clone();
    let mut alive: Vec<usize> = (1..=t.n()).collect();
    for &label in order {
        let pos = alive.iter().position(|&l| l == label).unwrap();
        current = current.forget_and_stabilize(mask::bit(pos + 1)).unwrap();
        alive.remove(pos);
    }
    current
}

#[test]
fn forget_is_order_independent() {
    for n in 4..=6 {
        let s = labels(n);
        for codim in 0..=n - 3 {
            for t in enumerate_trees(&s, codim).unwrap() {
                assert_eq!(t.forget_and_stabilize(0).unwrap(), t);
                for q in 1..mask::full(n) {
                    if n - mask::size(q) < 3 {
                        continue;
                    }
                    let at_once = t.forget_and_stabilize(q).unwrap();
                    assert_eq!(at_once, forget_by_cuts(&t, q));
                    let mut order: Vec<usize> = mask::labels(q).collect();
                    assert_eq!(forget_sequentially(&t, &order), at_once);
                    order.reverse();
                    assert_eq!(forget_sequentially(&t, &order), at_once);
                }
            }
        }
    }
}

#[test]
fn pairing_depends_only_on_class() {
    for n in 5..=7 {
        let s = labels(n);
        let divisors = enumerate_stable_two_partitions(&s).unwrap();
        let mut vectors: BTreeMap<DistinguishedPartition, Vec<i64>> = BTreeMap::new();
        for t in enumerate_curve_trees(&s).unwrap() {
            let pi = t.pi().unwrap();
            let v: Vec<i64> = divisors.iter().map(|d| pair_divisor_tree(d, &t).unwrap()).collect();
            let by_class: Vec<i64> = divisors.iter().map(|d| pair_divisor_curve(d, &pi).unwrap()).collect();
            assert_eq!(v, by_class, "tree and class pairings differ for {pi}");
            if let Some(prev) = vectors.insert(pi, v.clone()) {
                assert_eq!(prev, v);
            }
        }
        // distinct classes have distinct pairing vectors
        let distinct: BTreeSet<&Vec<i64>> = vectors.values().collect();
        assert_eq!(distinct.len(), vectors.len());
    }
}

#[test]
fn anticanonical_routes_agree() {
    for n in 5..=8 {
        for pi in enumerate_distinguished(&labels(n)).unwrap() {
            let closed = Rational::integer(minus_k_closed(&pi));
            let expanded = minus_k_expanded(&pi).unwrap();
            assert!(expanded.is_integer());
            assert_eq!(expanded, closed, "{pi}");
            if n <= 7 {
                assert_eq!(minus_k_via_divisors(&pi).unwrap(), closed);
            }
            assert_eq!(k_plus_b_pairing(&pi).unwrap(), 1);
        }
    }
}

/// Rank by Gaussian elimination over the rationals.
fn rational_rank(rows: &[Vec<i8>]) -> usize {
    let mut a: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect())
        .collect();
    let (h, w) = (a.len(), a.first().map_or(0, Vec::len));
    let mut rank = 0;
    for col in 0..w {
        let Some(p) = (rank..h).find(|&i| !a[i][col].is_zero()) else { continue };
        a.swap(rank, p);
        let inv = BigRational::one() / a[rank][col].clone();
        for i in 0..h {
            if i != rank && !a[i][col].is_zero() {
                let f = a[i][col].clone() * inv.clone();
                for j in col..w {
                    let d = f.clone() * a[rank][j].clone();
                    a[i][j] = a[i][j].clone() - d;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[test]
fn matrix_rank_matches_rational_elimination() {
    for n in 5..=6 {
        let m = intersection_matrix(&labels(n)).unwrap();
        let r = matrix_rank(&m);
        assert_eq!(r, rational_rank(&m.entries));
        assert_eq!(r as u64, picard_rank(n).unwrap());
    }
}

fn permute_tree(t: &StableTree, perm: &[usize]) -> StableTree {
    let tails: Vec<Mask> = t
        .vertices()
        .iter()
        .map(|v| mask::labels(v.tails).fold(0, |m, l| m | mask::bit(perm[l - 1])))
        .collect();
    make_tree(&tails, t.edges(), &labels(t.n())).unwrap()
}

proptest! {
    #[test]
    fn type_key_is_relabeling_invariant(
        codim in 0usize..=4,
        pick in any::<prop::sample::Index>(),
        perm in Just((1..=7).collect::<Vec<usize>>()).prop_shuffle(),
    ) {
        let trees = enumerate_trees(&labels(7), codim).unwrap();
        let t = &trees[pick.index(trees.len())];
        let u = permute_tree(t, &perm);
        prop_assert_eq!(t.unlabeled_type_key(), u.unlabeled_type_key());
    }

    #[test]
    fn compatibility_is_symmetric(a in 0u64..(1 << 7), b in 0u64..(1 << 7)) {
        if let (Ok(x), Ok(y)) = (TwoPartition::new(8, a), TwoPartition::new(8, b)) {
            prop_assert_eq!(x.compatible(&y).unwrap(), y.compatible(&x).unwrap());
            prop_assert!(x.compatible(&x).unwrap());
        }
    }

    #[test]
    fn partition_json_roundtrip(pick in any::<prop::sample::Index>()) {
        let all = enumerate_distinguished(&labels(7)).unwrap();
        let pi = all[pick.index(all.len())];
        let json = serde_json::to_string(&pi).unwrap();
        prop_assert_eq!(serde_json::from_str::<DistinguishedPartition>(&json).unwrap(), pi);
    }
}

#[test]
fn type_keys_separate_orbits() {
    // keys at n = 6 codim 2: the 105 curve trees plus, for contrast, none of
    // the other strata collide with them
    let s = labels(6);
    let keys: BTreeSet<String> = enumerate_curve_trees(&s).unwrap().iter().map(StableTree::unlabeled_type_key).collect();
    assert_eq!(keys.len(), 2);
    let divisor_keys: BTreeSet<String> = enumerate_trees(&s, 1).unwrap().iter().map(StableTree::unlabeled_type_key).collect();
    // 2+4 and 3+3 splits
    assert_eq!(divisor_keys.len(), 2);
    assert!(keys.is_disjoint(&divisor_keys));
}
