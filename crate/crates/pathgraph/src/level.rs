//! Level-decomposed representation.
//!
//! Each heavy path induces an interval graph: a path meeting it does so
//! in a contiguous run of pre-order labels. Heavy paths sitting on the
//! same level of the heavy path tree have disjoint label ranges, so each
//! level's graphs merge into one interval graph per level, at most
//! `ceil(log2 n)` of them, with at most two vertices per path per level.
//!
//! Lookup tables glue the levels together: per-path level spans route an
//! adjacency query to the lowest level both paths occupy (if they meet
//! anywhere they meet there); per-level vertex labels and their inverse
//! map between paths and interval-graph vertices; per-node lists of
//! paths topping out at that node plus per-light-edge path lists, keyed
//! by the next light edge below, drive the linear-time neighbourhood
//! walk; degrees are precomputed outright.

use crate::interval::IntervalGraph;
use crate::treeprep::{PathSet, PreparedTree};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct LevelStructure {
    pub(crate) pt: PreparedTree,
    /// Sorted-order path endpoints in pre-order labels.
    pub(crate) endpoints: Vec<(u32, u32)>,
    pub(crate) input_of_sorted: Vec<u32>,
    pub(crate) sorted_of_input: Vec<u32>,
    /// Level count.
    pub(crate) k_levels: u32,
    /// Per path: lowest and highest level its heavy paths occupy.
    pub(crate) span: Vec<(u32, u32)>,
    /// Per path and level: up to two vertex labels in that level's
    /// interval graph, heavy-path order, 0 = absent. Row-major n x K.
    pub(crate) pit: Vec<[u32; 2]>,
    /// Per level: vertex label -> path index (1-based), slot 0 unused.
    pub(crate) label_to_path: Vec<Vec<u32>>,
    /// Per level: the interval graph over that level's vertex labels.
    pub(crate) graphs: Vec<IntervalGraph>,
    /// Per node: paths whose two endpoints meet at that node.
    pub(crate) lca_paths: Vec<Vec<u32>>,
    /// Per heavy path `c` (non-root): paths through the light edge from
    /// `c`'s parent heavy path, grouped by the next light edge below
    /// (child heavy path id, 0 = none below).
    pub(crate) light_slots: Vec<Vec<(u32, Vec<u32>)>>,
    /// Per path: degree, precomputed.
    pub(crate) deg: Vec<u32>,
}

/// Instrumentation for one adjacency call.
#[derive(Debug, Default, Clone, Copy)]
pub struct LevelAdjStats {
    pub ig_probes: u64,
    pub array_reads: u64,
}

/// Instrumentation for one neighbourhood call: walk steps plus every
/// candidate path index pulled from a list.
#[derive(Debug, Default, Clone, Copy)]
pub struct LevelNbrStats {
    pub candidate_touches: u64,
}

/// Reusable dedup scratch: a mark array reset by bumping an epoch.
#[derive(Debug, Clone)]
pub struct NbrScratch {
    marks: Vec<u32>,
    epoch: u32,
}

impl NbrScratch {
    fn begin(&mut self) -> u32 {
        self.epoch += 1;
        if self.epoch == u32::MAX {
            self.marks.fill(0);
            self.epoch = 1;
        }
        self.epoch
    }
}

impl LevelStructure {
    pub fn build(pt: PreparedTree, paths: &PathSet) -> Result<Self> {
        let n = paths.len();
        if n == 0 {
            return Err(Error::Invalid("at least one path is required".into()));
        }
        let m = pt.node_count() as usize;
        let k_levels = pt.level_count();
        let kl = k_levels as usize;
        let mut span = vec![(0u32, 0u32); n];
        let mut pit = vec![[0u32, 0u32]; n * kl];
        let mut per_level_intervals: Vec<Vec<(u32, u32)>> = vec![Vec::new(); kl];
        let mut label_to_path: Vec<Vec<u32>> = vec![vec![0]; kl];
        let mut lca_paths: Vec<Vec<u32>> = vec![Vec::new(); m + 1];
        let hp_count = pt.heavy_paths.len();
        let mut light_slots: Vec<Vec<(u32, Vec<u32>)>> = vec![Vec::new(); hp_count + 1];
        for (idx, &(l, r)) in paths.endpoints.iter().enumerate() {
            let i = idx as u32 + 1;
            let dec = pt.compute_pi(u64::from(l), u64::from(r));
            lca_paths[dec.pi[0].0 as usize].push(i);
            let mut lo = u32::MAX;
            let mut hi = 0u32;
            for &(a, b) in &dec.pi {
                let hp = pt.hp_of_node[a as usize];
                let level = pt.hp_level[hp as usize];
                lo = lo.min(level);
                hi = hi.max(level);
                let label = label_to_path[level as usize - 1].len() as u32;
                let rec = &mut pit[idx * kl + level as usize - 1];
                if rec[0] == 0 {
                    rec[0] = label;
                } else {
                    debug_assert_eq!(rec[1], 0, "more than two heavy paths on one level");
                    rec[1] = label;
                }
                label_to_path[level as usize - 1].push(i);
                per_level_intervals[level as usize - 1].push((a, b));
            }
            span[idx] = (lo, hi);
            // Light-edge slot lists: per branch, edges top-down, each
            // keyed by the next light edge below on the same branch.
            let z = dec.succ12.unwrap_or(dec.k());
            let mut chain = |seq: &[usize]| {
                for w in 0..seq.len().saturating_sub(1) {
                    let child_hp = pt.hp_of_node[dec.pi[seq[w + 1]].0 as usize];
                    let below_hp = if w + 2 < seq.len() {
                        pt.hp_of_node[dec.pi[seq[w + 2]].0 as usize]
                    } else {
                        0
                    };
                    let slots = &mut light_slots[child_hp as usize];
                    match slots.iter_mut().find(|(d, _)| *d == below_hp) {
                        Some((_, list)) => list.push(i),
                        None => slots.push((below_hp, vec![i])),
                    }
                }
            };
            let left: Vec<usize> = (0..z).collect();
            chain(&left);
            if z < dec.k() {
                let mut right: Vec<usize> = vec![0];
                right.extend(z..dec.k());
                chain(&right);
            }
        }
        for level in 0..kl {
            let labels = label_to_path[level].len() - 1;
            if labels > 2 * n {
                return Err(Error::Invalid(format!(
                    "level {} holds {} vertices for {} paths",
                    level + 1,
                    labels,
                    n
                )));
            }
        }
        let graphs = per_level_intervals
            .into_iter()
            .map(|iv| IntervalGraph::build(&iv))
            .collect::<Result<Vec<_>>>()?;
        let mut ls = LevelStructure {
            pt,
            endpoints: paths.endpoints.clone(),
            input_of_sorted: paths.input_of_sorted.clone(),
            sorted_of_input: paths.sorted_of_input.clone(),
            k_levels,
            span,
            pit,
            label_to_path,
            graphs,
            lca_paths,
            light_slots,
            deg: Vec::new(),
        };
        let mut scratch = ls.new_scratch();
        let deg: Vec<u32> = (1..=n as u64)
            .map(|i| ls.neighbourhood_with(i, &mut scratch).0.len() as u32)
            .collect();
        ls.deg = deg;
        Ok(ls)
    }

    pub fn path_count_total(&self) -> u32 {
        self.endpoints.len() as u32
    }

    pub fn node_count(&self) -> u64 {
        self.pt.node_count()
    }

    pub fn level_count(&self) -> u32 {
        self.k_levels
    }

    pub fn prepared_tree(&self) -> &PreparedTree {
        &self.pt
    }

    pub fn input_of(&self, sorted: u64) -> u32 {
        self.input_of_sorted[sorted as usize - 1]
    }

    pub fn sorted_of(&self, input: u32) -> u64 {
        u64::from(self.sorted_of_input[input as usize]) + 1
    }

    fn check_path(&self, i: u64) {
        assert!(
            i >= 1 && i <= u64::from(self.path_count_total()),
            "path index {i} out of range"
        );
    }

    /// Vertex labels of path `i` at `level`, heavy-path order; 0 = none.
    pub fn vertices_at(&self, i: u64, level: u32) -> [u32; 2] {
        self.pit[(i as usize - 1) * self.k_levels as usize + level as usize - 1]
    }

    /// Lowest level shared by the level spans of `i` and `j`, or 0 when
    /// the spans are disjoint.
    pub fn min_common_level(&self, i: u64, j: u64) -> u32 {
        self.check_path(i);
        self.check_path(j);
        let (ai, bi) = self.span[i as usize - 1];
        let (aj, bj) = self.span[j as usize - 1];
        if bi < aj || bj < ai {
            0
        } else if aj <= ai {
            ai
        } else {
            aj
        }
    }

    /// True iff paths `i` and `j` (sorted indices) share a tree node:
    /// at most four interval probes on the lowest common level.
    pub fn adjacency(&self, i: u64, j: u64) -> bool {
        self.adjacency_instr(i, j).0
    }

    pub fn adjacency_instr(&self, i: u64, j: u64) -> (bool, LevelAdjStats) {
        let mut stats = LevelAdjStats {
            ig_probes: 0,
            array_reads: 2,
        };
        let level = self.min_common_level(i, j);
        if level == 0 {
            return (false, stats);
        }
        let vi = self.vertices_at(i, level);
        let vj = self.vertices_at(j, level);
        stats.array_reads += 2;
        let g = &self.graphs[level as usize - 1];
        for &a in vi.iter().filter(|&&a| a != 0) {
            for &b in vj.iter().filter(|&&b| b != 0) {
                stats.ig_probes += 1;
                if g.adjacent(a, b) {
                    return (true, stats);
                }
            }
        }
        (false, stats)
    }

    /// Paths through the light edge between heavy paths `w1` (parent)
    /// and `w2`, excluding those continuing through the light edge from
    /// `w2` down to `w3`.
    pub fn distinct_paths(&self, w1: u32, w2: u32, w3: Option<u32>) -> Vec<u32> {
        let mut out = Vec::new();
        let mut stats = LevelNbrStats::default();
        self.distinct_paths_into(w1, w2, w3, &mut out, &mut stats);
        out
    }

    fn distinct_paths_into(
        &self,
        w1: u32,
        w2: u32,
        w3: Option<u32>,
        out: &mut Vec<u32>,
        stats: &mut LevelNbrStats,
    ) {
        assert!(
            w2 >= 1
                && (w2 as usize) <= self.pt.heavy_paths.len()
                && self.pt.hpt.parent_of(w2) == w1,
            "{{{w1},{w2}}} is not a light edge of the heavy path tree"
        );
        if let Some(w3) = w3 {
            assert!(
                self.pt.hpt.parent_of(w3) == w2,
                "{{{w2},{w3}}} is not a light edge of the heavy path tree"
            );
        }
        for (slot, list) in &self.light_slots[w2 as usize] {
            if w3 == Some(*slot) {
                continue;
            }
            stats.candidate_touches += list.len() as u64;
            out.extend_from_slice(list);
        }
    }

    pub fn new_scratch(&self) -> NbrScratch {
        NbrScratch {
            marks: vec![0; self.endpoints.len() + 1],
            epoch: 0,
        }
    }

    /// Sorted indices of all paths meeting path `i`, self excluded,
    /// ascending.
    pub fn neighbourhood(&self, i: u64) -> Vec<u64> {
        let mut scratch = self.new_scratch();
        self.neighbourhood_with(i, &mut scratch).0
    }

    pub fn neighbourhood_instr(&self, i: u64) -> (Vec<u64>, LevelNbrStats) {
        let mut scratch = self.new_scratch();
        self.neighbourhood_with(i, &mut scratch)
    }

    /// Neighbourhood with caller-owned dedup scratch. Candidates come
    /// from three sources: paths topping out on each walked node,
    /// interval-graph neighbours on the level of the walk's top, and
    /// per-light-edge lists chained so consecutive edges of one branch
    /// skip already-listed paths; the residual constant-factor overlap
    /// is removed by the mark array.
    pub fn neighbourhood_with(
        &self,
        i: u64,
        scratch: &mut NbrScratch,
    ) -> (Vec<u64>, LevelNbrStats) {
        self.check_path(i);
        let mut stats = LevelNbrStats::default();
        let mut candidates: Vec<u32> = Vec::new();
        let (l, r) = self.endpoints[i as usize - 1];
        let (l, r) = (u64::from(l), u64::from(r));
        let p = self.pt.lca(l, r);
        let mut light_edges: Vec<(u32, u32)> = Vec::new();
        let walk = |from: u64,
                    edges: &mut Vec<(u32, u32)>,
                    cand: &mut Vec<u32>,
                    st: &mut LevelNbrStats| {
            let mut x = from;
            while x != p {
                st.candidate_touches += 1;
                st.candidate_touches += self.lca_paths[x as usize].len() as u64;
                cand.extend_from_slice(&self.lca_paths[x as usize]);
                let c = self.pt.parent0(x);
                let (hx, hc) = (
                    self.pt.hp_of_node[x as usize],
                    self.pt.hp_of_node[c as usize],
                );
                if hx != hc {
                    edges.push((hc, hx));
                }
                x = c;
            }
        };
        walk(l, &mut light_edges, &mut candidates, &mut stats);
        let split = light_edges.len();
        walk(r, &mut light_edges, &mut candidates, &mut stats);
        // Interval-graph neighbours at the level of the walk's top node.
        let top_hp = self.pt.hp_of_node[p as usize];
        let top_level = self.pt.hp_level[top_hp as usize];
        let v = self.vertices_at(i, top_level);
        debug_assert_eq!(v[1], 0, "a path has one vertex on its top level");
        let g = &self.graphs[top_level as usize - 1];
        for u in g.neighbourhood(v[0]) {
            stats.candidate_touches += 1;
            candidates.push(self.label_to_path[top_level as usize - 1][u as usize]);
        }
        // Light edges bottom-up per branch; each edge excludes the slot
        // of the previously handled edge when that edge hangs below it.
        let mut prev: Option<u32> = None;
        for (idx, &(w1, w2)) in light_edges.iter().enumerate() {
            if idx == split {
                prev = None;
            }
            let exclude = prev.filter(|&d| self.pt.hpt.parent_of(d) == w2);
            self.distinct_paths_into(w1, w2, exclude, &mut candidates, &mut stats);
            prev = Some(w2);
        }
        let epoch = scratch.begin();
        let mut out: Vec<u64> = Vec::new();
        for q in candidates {
            if u64::from(q) != i && scratch.marks[q as usize] != epoch {
                scratch.marks[q as usize] = epoch;
                out.push(u64::from(q));
            }
        }
        out.sort_unstable();
        (out, stats)
    }

    /// Precomputed degree of path `i`.
    pub fn degree(&self, i: u64) -> u64 {
        self.check_path(i);
        u64::from(self.deg[i as usize - 1])
    }

    pub fn space_report(&self) -> LevelSpaceReport {
        let list_bits =
            |lists: &[Vec<u32>]| -> u64 { lists.iter().map(|l| 64 + 32 * l.len() as u64).sum() };
        let n = self.endpoints.len() as u64;
        let kl = u64::from(self.k_levels);
        let slot_bits: u64 = self
            .light_slots
            .iter()
            .flat_map(|s| s.iter())
            .map(|(_, l)| 96 + 32 * l.len() as u64)
            .sum();
        LevelSpaceReport {
            n,
            m: self.pt.node_count(),
            k_levels: self.k_levels,
            tree_bits: self.pt.bp.core_bits()
                + self.pt.bp.dir_bits()
                + 32 * (self.pt.hp_of_node.len() as u64
                    + self.pt.hp_level.len() as u64
                    + self.pt.heavy_paths.len() as u64 * 2
                    + self.pt.hpt.parents().len() as u64),
            pit_bits: 64 * n * kl,
            inverse_bits: list_bits(&self.label_to_path),
            graph_bits: self.graphs.iter().map(|g| g.bits()).sum(),
            array_bits: 64 * n            // endpoints
                + 64 * n                  // spans
                + 32 * n                  // degrees
                + list_bits(&self.lca_paths)
                + slot_bits,
            aux_perm_bits: 64 * n,
        }
    }
}

/// Bit counts for the level structure, by component group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelSpaceReport {
    pub n: u64,
    pub m: u64,
    pub k_levels: u32,
    pub tree_bits: u64,
    pub pit_bits: u64,
    pub inverse_bits: u64,
    pub graph_bits: u64,
    pub array_bits: u64,
    pub aux_perm_bits: u64,
}

impl LevelSpaceReport {
    pub fn total_bits(&self) -> u64 {
        self.tree_bits + self.pit_bits + self.inverse_bits + self.graph_bits + self.array_bits
    }

    /// Total bits over `n * ceil(log2 n)^2`.
    pub fn ratio(&self) -> f64 {
        let lg = u64::from(crate::treeprep::ceil_log2(self.n)).max(1);
        self.total_bits() as f64 / (self.n * lg * lg) as f64
    }
}

impl std::fmt::Display for LevelSpaceReport {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            out,
            "level structure: n = {}, tree nodes = {}, levels = {}",
            self.n, self.m, self.k_levels
        )?;
        writeln!(out, "  tree + heavy paths {:>12} bits", self.tree_bits)?;
        writeln!(out, "  level labels       {:>12} bits", self.pit_bits)?;
        writeln!(out, "  label inverse      {:>12} bits", self.inverse_bits)?;
        writeln!(out, "  interval graphs    {:>12} bits", self.graph_bits)?;
        writeln!(out, "  arrays             {:>12} bits", self.array_bits)?;
        writeln!(
            out,
            "  total              {:>12} bits  ({:.3} x n ceil(log2 n)^2)",
            self.total_bits(),
            self.ratio()
        )?;
        writeln!(out, "  aux: input permutation {} bits", self.aux_perm_bits)
    }
}
