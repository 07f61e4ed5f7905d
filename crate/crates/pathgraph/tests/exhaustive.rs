//! Exhaustive small-scale checks: every possible path on a tree, every
//! query pair, both representations against the oracle. Small trees of
//! varied shape flush out case-analysis gaps that random instances hit
//! only occasionally.

use pathgraph::blob;
use pathgraph::oracle::{self, gen_instance};
use pathgraph::treeprep::{prepare, PathSet, RawCliqueTree};
use pathgraph::{LevelStructure, SuccinctPathGraph};

/// All endpoint pairs (l <= r by original label) — every path the tree
/// supports, singletons included, so the instance is a valid clique
/// tree and every geometric configuration occurs.
fn all_paths(m: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for l in 1..=m {
        for r in l..=m {
            out.push((l, r));
        }
    }
    out
}

fn check_instance(tree: &RawCliqueTree, paths: &[(u32, u32)], label: &str) {
    let oracle_graph = oracle::build_oracle(tree, paths);
    let pt = prepare(tree).unwrap();
    let ps = PathSet::from_original(&pt, paths).unwrap();
    let succ = SuccinctPathGraph::build(pt.clone(), &ps).unwrap();
    let level = LevelStructure::build(pt, &ps).unwrap();
    let n = paths.len() as u64;
    let mut scratch = level.new_scratch();
    for i in 1..=n {
        let ii = succ.input_of(i) as usize;
        let expect = &oracle_graph.adj[ii];
        let mut got_s: Vec<u32> = succ.neighbourhood(i).iter().map(|&q| succ.input_of(q)).collect();
        got_s.sort_unstable();
        assert_eq!(&got_s, expect, "{label}: succinct neighbourhood of input {ii}");
        let mut got_l: Vec<u32> = level
            .neighbourhood_with(i, &mut scratch)
            .0
            .iter()
            .map(|&q| level.input_of(q))
            .collect();
        got_l.sort_unstable();
        assert_eq!(&got_l, expect, "{label}: level neighbourhood of input {ii}");
        assert_eq!(succ.degree(i), expect.len() as u64, "{label}");
        assert_eq!(level.degree(i), expect.len() as u64, "{label}");
        assert_eq!(succ.degree_counting(i).0, succ.degree_enumerating(i), "{label}");
        for j in 1..=n {
            let expect_adj = i == j || oracle_graph.adjacent(ii, succ.input_of(j) as usize);
            assert_eq!(succ.adjacency(i, j), expect_adj, "{label}: succinct adjacency ({i},{j})");
            assert_eq!(level.adjacency(i, j), expect_adj, "{label}: level adjacency ({i},{j})");
        }
    }
}

#[test]
fn every_path_on_fixed_shapes() {
    // Chain, star, broom, binary-ish and two-level bushes.
    let shapes: Vec<(&str, Vec<u32>)> = vec![
        ("chain-8", vec![0, 1, 2, 3, 4, 5, 6, 7]),
        ("star-8", vec![0, 1, 1, 1, 1, 1, 1, 1]),
        ("broom", vec![0, 1, 2, 3, 4, 4, 4, 4]),
        ("binary-7", vec![0, 1, 1, 2, 2, 3, 3]),
        ("bush", vec![0, 1, 1, 2, 2, 2, 3, 3, 5, 5]),
        ("double-broom", vec![0, 1, 1, 2, 2, 3, 3, 6, 6, 7, 7]),
    ];
    for (label, parents) in shapes {
        let tree = RawCliqueTree::new(parents).unwrap();
        let paths = all_paths(tree.node_count());
        check_instance(&tree, &paths, label);
    }
}

#[test]
fn every_path_on_random_trees() {
    for m in 2..=14u32 {
        for seed in 0..6u64 {
            let tree = gen_instance(m, m, seed ^ (u64::from(m) << 8)).unwrap().tree;
            let paths = all_paths(m);
            check_instance(&tree, &paths, &format!("random m={m} seed={seed}"));
        }
    }
}

/// Complete binary tree: every root-to-leaf walk crosses the maximum
/// number of light edges, driving the sub-path count toward its bound.
/// All tree paths exist; adjacency is sampled, list queries exhaustive.
#[test]
fn every_path_on_complete_binary_tree() {
    let depth = 6u32;
    let m = (1u32 << depth) - 1;
    let parents: Vec<u32> = (1..=m).map(|v| v / 2).collect();
    let tree = RawCliqueTree::new(parents).unwrap();
    let paths = all_paths(m);
    let oracle_graph = oracle::build_oracle(&tree, &paths);
    let pt = prepare(&tree).unwrap();
    let ps = PathSet::from_original(&pt, &paths).unwrap();
    let succ = SuccinctPathGraph::build(pt.clone(), &ps).unwrap();
    let level = LevelStructure::build(pt, &ps).unwrap();
    let n = paths.len() as u64;
    let k_bound = 2 * pathgraph::treeprep::ceil_log2(n) as usize + 1;
    let mut max_k = 0usize;
    let mut scratch = level.new_scratch();
    for i in 1..=n {
        let ii = succ.input_of(i) as usize;
        let expect = &oracle_graph.adj[ii];
        let mut got: Vec<u32> = succ.neighbourhood(i).iter().map(|&q| succ.input_of(q)).collect();
        got.sort_unstable();
        assert_eq!(&got, expect, "succinct neighbourhood, input {ii}");
        let mut got: Vec<u32> = level
            .neighbourhood_with(i, &mut scratch)
            .0
            .iter()
            .map(|&q| level.input_of(q))
            .collect();
        got.sort_unstable();
        assert_eq!(&got, expect, "level neighbourhood, input {ii}");
        assert_eq!(succ.degree(i), expect.len() as u64);
        assert_eq!(level.degree(i), expect.len() as u64);
        let (l, r) = succ.pathep(i);
        let dec = succ.prepared_tree().compute_pi(l, r);
        assert!(dec.k() <= k_bound);
        max_k = max_k.max(dec.k());
    }
    // Deepest split: right-spine descents on both sides of the root;
    // the step from the root to its left child stays heavy.
    assert_eq!(max_k, 2 * depth as usize - 2, "expected maximal sub-path count");
    let mut rng = oracle::Rng::new(61);
    for _ in 0..60_000 {
        let i = u64::from(rng.below(n as u32));
        let j = u64::from(rng.below(n as u32));
        let expect = i == j
            || oracle_graph.adjacent(succ.input_of(i) as usize, succ.input_of(j) as usize);
        assert_eq!(succ.adjacency(i, j), expect);
        assert_eq!(level.adjacency(i, j), expect);
    }
}

#[test]
fn singleton_instance() {
    let tree = RawCliqueTree::new(vec![0]).unwrap();
    check_instance(&tree, &[(1, 1)], "single node, single path");
}

/// Larger randomized sweep, off by default; run with
/// `cargo test --release -- --ignored`.
#[test]
#[ignore = "heavy: run in release"]
fn large_randomized_sweep() {
    for (m, n, seed) in [(2000u32, 4000u32, 1u64), (3000, 3000, 2), (500, 5000, 3)] {
        let inst = gen_instance(m, n, seed).unwrap();
        let oracle_graph = oracle::build_oracle(&inst.tree, &inst.paths);
        let pt = prepare(&inst.tree).unwrap();
        let ps = PathSet::from_original(&pt, &inst.paths).unwrap();
        let succ = SuccinctPathGraph::build(pt.clone(), &ps).unwrap();
        let level = LevelStructure::build(pt, &ps).unwrap();
        let mut scratch = level.new_scratch();
        for i in 1..=u64::from(n) {
            let ii = succ.input_of(i) as usize;
            let expect = &oracle_graph.adj[ii];
            let mut got: Vec<u32> = succ.neighbourhood(i).iter().map(|&q| succ.input_of(q)).collect();
            got.sort_unstable();
            assert_eq!(&got, expect, "m={m} n={n} seed={seed}");
            let mut got: Vec<u32> = level
                .neighbourhood_with(i, &mut scratch)
                .0
                .iter()
                .map(|&q| level.input_of(q))
                .collect();
            got.sort_unstable();
            assert_eq!(&got, expect);
            assert_eq!(succ.degree(i), expect.len() as u64);
            assert_eq!(level.degree(i), expect.len() as u64);
        }
        let mut rng = oracle::Rng::new(seed);
        for _ in 0..200_000 {
            let i = u64::from(rng.below(n));
            let j = u64::from(rng.below(n));
            let expect = i == j
                || oracle_graph.adjacent(succ.input_of(i) as usize, succ.input_of(j) as usize);
            assert_eq!(succ.adjacency(i, j), expect);
            assert_eq!(level.adjacency(i, j), expect);
        }
    }
}

/// Structures are immutable after build: shared references answer
/// queries from many threads at once.
#[test]
fn concurrent_readers() {
    fn is_sync<T: Sync>(_: &T) {}
    let inst = gen_instance(60, 100, 5).unwrap();
    let pt = prepare(&inst.tree).unwrap();
    let ps = PathSet::from_original(&pt, &inst.paths).unwrap();
    let succ = SuccinctPathGraph::build(pt.clone(), &ps).unwrap();
    let level = LevelStructure::build(pt, &ps).unwrap();
    is_sync(&succ);
    is_sync(&level);
    let n = ps.len() as u64;
    std::thread::scope(|scope| {
        for t in 0..4u64 {
            let (succ, level) = (&succ, &level);
            scope.spawn(move || {
                let mut scratch = level.new_scratch();
                for i in 1..=n {
                    let j = (i + t) % n + 1;
                    assert_eq!(succ.adjacency(i, j), level.adjacency(i, j));
                    assert_eq!(
                        succ.neighbourhood(i),
                        level.neighbourhood_with(i, &mut scratch).0
                    );
                }
            });
        }
    });
}

/// Byte-level corruption of a serialized blob must never panic the
/// loader: every flip either fails cleanly or decodes to some graph.
#[test]
fn corrupted_blobs_never_panic_the_loader() {
    let inst = gen_instance(24, 40, 99).unwrap();
    let pt = prepare(&inst.tree).unwrap();
    let ps = PathSet::from_original(&pt, &inst.paths).unwrap();
    let succ = SuccinctPathGraph::build(pt.clone(), &ps).unwrap();
    let level = LevelStructure::build(pt, &ps).unwrap();
    for blob_bytes in [blob::save_succinct(&succ), blob::save_level(&level)] {
        // Truncations at a spread of lengths.
        for cut in (0..blob_bytes.len()).step_by(blob_bytes.len() / 64 + 1) {
            let t = blob_bytes[..cut].to_vec();
            let r = std::panic::catch_unwind(|| blob::load_any(&t).is_err());
            assert!(r.is_ok(), "loader panicked on truncation at {cut}");
            assert!(r.unwrap(), "truncation at {cut} decoded successfully");
        }
        // Single-byte flips at a spread of offsets.
        for pos in (0..blob_bytes.len()).step_by(blob_bytes.len() / 512 + 1) {
            for bit in [0x01u8, 0x80] {
                let mut t = blob_bytes.clone();
                t[pos] ^= bit;
                let r = std::panic::catch_unwind(|| {
                    let _ = blob::load_any(&t);
                });
                assert!(r.is_ok(), "loader panicked on flip at byte {pos}");
            }
        }
    }
}
