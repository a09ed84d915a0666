mod common;

use common::{random_connected, tss};
use fixedbitset::FixedBitSet;
use graphboost::cache::{PatternCache, PatternNode};
use graphboost::enumerate::EnumBudget;
use graphboost::graph::LabeledGraph;
use graphboost::split::{find_best_split, partition_stats, SearchConfig};
use graphboost::tss::{lower_bound, TssStats};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Best TSS(D1') + TSS(D0 ∪ (D1 \ D1')) over every subset D1' of D1.
fn brute_bound(d1: &[f64], d0: &[f64]) -> f64 {
    let mut best = f64::INFINITY;
    for mask in 0u32..(1 << d1.len()) {
        let mut keep = Vec::new();
        let mut rest = d0.to_vec();
        for (i, &r) in d1.iter().enumerate() {
            if mask >> i & 1 == 1 {
                keep.push(r);
            } else {
                rest.push(r);
            }
        }
        best = best.min(tss(&keep) + tss(&rest));
    }
    best
}

fn sorted_desc(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

#[test]
fn bound_equals_subset_minimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..500 {
        let n1 = rng.gen_range(0..=12);
        let n0 = rng.gen_range(0..=8);
        // mix of continuous and tied values
        let draw = |rng: &mut ChaCha8Rng| {
            if rng.gen_bool(0.3) {
                rng.gen_range(-2..=2) as f64
            } else {
                rng.gen_range(-3.0..3.0)
            }
        };
        let d1: Vec<f64> = (0..n1).map(|_| draw(&mut rng)).collect();
        let d0: Vec<f64> = (0..n0).map(|_| draw(&mut rng)).collect();
        let got = lower_bound(&sorted_desc(&d1), TssStats::from_values(d0.iter().copied()));
        let want = brute_bound(&d1, &d0);
        assert!((got - want).abs() <= 1e-9, "bound {got} vs brute {want} for {d1:?} / {d0:?}");
    }
}

proptest! {
    #[test]
    fn bound_never_exceeds_current_split(d1 in prop::collection::vec(-5.0f64..5.0, 0..10), d0 in prop::collection::vec(-5.0f64..5.0, 0..10)) {
        let b = lower_bound(&sorted_desc(&d1), TssStats::from_values(d0.iter().copied()));
        prop_assert!(b <= tss(&d1) + tss(&d0) + 1e-9);
        prop_assert!(b >= -1e-12);
    }
}

fn random_instance(rng: &mut ChaCha8Rng) -> (Vec<LabeledGraph>, Vec<f64>) {
    let n = rng.gen_range(3..=10);
    let graphs: Vec<LabeledGraph> = (0..n)
        .map(|_| {
            let nodes = rng.gen_range(2..=6);
            let extra = rng.gen_range(0..3);
            random_connected(rng, nodes, extra, 3, 2)
        })
        .collect();
    let residuals = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
    (graphs, residuals)
}

/// Walks the whole cache tree checking every child against its parent's bound.
fn check_trace(cache: &PatternCache<'_>, node: &PatternNode, ids: &[usize], res: &[f64], checked: &mut usize) {
    let (inside, outside) = partition_stats(ids, res, node.graph_ids());
    let d1: Vec<f64> =
        sorted_desc(&ids.iter().filter(|&&i| node.graph_ids().contains(i)).map(|&i| res[i]).collect::<Vec<_>>());
    let bound = lower_bound(&d1, outside);
    assert_eq!(d1.len(), inside.n);
    for child in cache.children(node) {
        let (ci, co) = partition_stats(ids, res, child.graph_ids());
        assert!(ci.tss() + co.tss() >= bound - 1e-9, "child objective below parent bound");
        *checked += 1;
        check_trace(cache, child, ids, res, checked);
    }
}

#[test]
fn bound_holds_along_traces() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checked = 0;
    for _ in 0..30 {
        let (graphs, res) = random_instance(&mut rng);
        let cache = PatternCache::new(&graphs, 1);
        let ids: Vec<usize> = (0..graphs.len()).filter(|_| rng.gen_bool(0.8)).collect();
        for root in cache.roots() {
            check_trace(&cache, root, &ids, &res, &mut checked);
        }
    }
    assert!(checked > 500, "only {checked} parent/child pairs");
}

#[test]
fn pruned_search_matches_exhaustive() {
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    for case in 0..50 {
        let (graphs, res) = random_instance(&mut rng);
        let max_edges = [Some(2), Some(4), None][case % 3];
        let cache = PatternCache::new(&graphs, 1);
        let ids: Vec<usize> = (0..graphs.len()).collect();
        let pruned = SearchConfig { budget: EnumBudget::new(max_edges, 1), min_leaf: 1, prune: true };
        let full = SearchConfig { prune: false, ..pruned };
        let (a, sa) = find_best_split(&ids, &res, &pruned, &cache);
        let (b, sb) = find_best_split(&ids, &res, &full, &cache);
        assert_eq!(a.as_ref().map(|c| c.objective), b.as_ref().map(|c| c.objective), "case {case}");
        assert_eq!(a.map(|c| c.pattern), b.map(|c| c.pattern), "case {case}");
        assert!(sa.visited <= sb.visited);

        // a fresh cache gives the same answer as a warm one
        let cold = PatternCache::new(&graphs, 1);
        let (c, sc) = find_best_split(&ids, &res, &pruned, &cold);
        let (a, sa) = find_best_split(&ids, &res, &pruned, &cache);
        assert_eq!(a, c);
        assert_eq!(sa, sc);
    }
}

#[test]
fn objective_never_exceeds_node_tss() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..50 {
        let (graphs, res) = random_instance(&mut rng);
        let cache = PatternCache::new(&graphs, 1);
        let ids: Vec<usize> = (0..graphs.len()).collect();
        let (best, _) = find_best_split(&ids, &res, &SearchConfig::default(), &cache);
        let node = tss(&res);
        if let Some(best) = best {
            assert!(best.objective <= node + 1e-12);
            assert!(best.is_valid());
            let mut members = FixedBitSet::with_capacity(graphs.len());
            best.left_ids.iter().for_each(|&i| members.insert(i));
            let (i, o) = partition_stats(&ids, &res, &members);
            assert_eq!(i.tss() + o.tss(), best.objective);
        }
    }
}
