//! Queryable interval graph.
//!
//! Vertices are closed integer intervals; two vertices are adjacent when
//! their intervals overlap. Adjacency is two comparisons on the endpoint
//! arrays. Neighbour enumeration splits `N(u)` into two disjoint sets:
//! intervals starting inside `(s_u, e_u]`, a contiguous run of the
//! start-sorted order, and intervals containing the point `s_u`, served
//! by a centered segment split (stab) tree in `O(log q)` plus constant
//! work per neighbour. The stab tree is what catches intervals that
//! strictly contain `u`, which no pair of endpoint sweeps can see.

use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct IntervalGraph {
    start: Vec<u32>,
    end: Vec<u32>,
    /// Vertex ids (0-based) ordered by (start, id).
    by_start: Vec<u32>,
    stab: StabTree,
}

/// Instrumentation for one neighbourhood call: every array/tree lookup
/// counts as a probe.
#[derive(Debug, Default, Clone, Copy)]
pub struct IgStats {
    pub probes: u64,
}

#[derive(Debug, Clone)]
struct StabNode {
    center: u32,
    /// Vertices covering `center`, ascending start.
    by_start: Vec<u32>,
    /// The same vertices, descending end.
    by_end_desc: Vec<u32>,
    left: u32,
    right: u32,
}

const NIL: u32 = u32::MAX;

#[derive(Debug, Clone, Default)]
struct StabTree {
    nodes: Vec<StabNode>,
    root: u32,
}

impl StabTree {
    fn build(start: &[u32], end: &[u32]) -> Self {
        let mut tree = StabTree {
            nodes: Vec::new(),
            root: NIL,
        };
        let ids: Vec<u32> = (0..start.len() as u32).collect();
        tree.root = tree.build_rec(ids, start, end);
        tree
    }

    fn build_rec(&mut self, ids: Vec<u32>, start: &[u32], end: &[u32]) -> u32 {
        if ids.is_empty() {
            return NIL;
        }
        let mut coords: Vec<u32> = ids
            .iter()
            .flat_map(|&v| [start[v as usize], end[v as usize]])
            .collect();
        coords.sort_unstable();
        let center = coords[coords.len() / 2];
        let mut covering = Vec::new();
        let mut left_ids = Vec::new();
        let mut right_ids = Vec::new();
        for v in ids {
            let (s, e) = (start[v as usize], end[v as usize]);
            if e < center {
                left_ids.push(v);
            } else if s > center {
                right_ids.push(v);
            } else {
                covering.push(v);
            }
        }
        let mut by_start = covering.clone();
        by_start.sort_unstable_by_key(|&v| (start[v as usize], v));
        let mut by_end_desc = covering;
        by_end_desc.sort_unstable_by_key(|&v| (std::cmp::Reverse(end[v as usize]), v));
        let slot = self.nodes.len() as u32;
        self.nodes.push(StabNode {
            center,
            by_start,
            by_end_desc,
            left: NIL,
            right: NIL,
        });
        let left = self.build_rec(left_ids, start, end);
        let right = self.build_rec(right_ids, start, end);
        self.nodes[slot as usize].left = left;
        self.nodes[slot as usize].right = right;
        slot
    }

    /// All vertices whose interval contains `p`.
    fn stab(&self, p: u32, start: &[u32], end: &[u32], out: &mut Vec<u32>, stats: &mut IgStats) {
        let mut at = self.root;
        while at != NIL {
            stats.probes += 1;
            let node = &self.nodes[at as usize];
            if p < node.center {
                for &v in &node.by_start {
                    stats.probes += 1;
                    if start[v as usize] > p {
                        break;
                    }
                    out.push(v);
                }
                at = node.left;
            } else if p > node.center {
                for &v in &node.by_end_desc {
                    stats.probes += 1;
                    if end[v as usize] < p {
                        break;
                    }
                    out.push(v);
                }
                at = node.right;
            } else {
                for &v in &node.by_start {
                    stats.probes += 1;
                    out.push(v);
                }
                break;
            }
        }
    }

    fn word_bits(&self) -> u64 {
        // center + child links + two list slots per stored vertex.
        self.nodes
            .iter()
            .map(|n| 32 * (3 + n.by_start.len() as u64 + n.by_end_desc.len() as u64))
            .sum()
    }
}

impl IntervalGraph {
    /// Builds from per-vertex closed intervals `[s, e]`, `1 <= s <= e`.
    pub fn build(intervals: &[(u32, u32)]) -> Result<Self> {
        for &(s, e) in intervals {
            if s == 0 || s > e {
                return Err(Error::Invalid(format!("malformed interval [{s}, {e}]")));
            }
        }
        let start: Vec<u32> = intervals.iter().map(|&(s, _)| s).collect();
        let end: Vec<u32> = intervals.iter().map(|&(_, e)| e).collect();
        let mut by_start: Vec<u32> = (0..start.len() as u32).collect();
        by_start.sort_unstable_by_key(|&v| (start[v as usize], v));
        let stab = StabTree::build(&start, &end);
        Ok(IntervalGraph {
            start,
            end,
            by_start,
            stab,
        })
    }

    pub fn vertex_count(&self) -> u32 {
        self.start.len() as u32
    }

    /// Interval of vertex `u` (1-based).
    pub fn interval(&self, u: u32) -> (u32, u32) {
        self.check(u);
        (self.start[u as usize - 1], self.end[u as usize - 1])
    }

    fn check(&self, u: u32) {
        assert!(
            u >= 1 && u <= self.vertex_count(),
            "vertex {u} out of range"
        );
    }

    /// Closed-interval overlap test.
    pub fn adjacent(&self, u: u32, v: u32) -> bool {
        self.check(u);
        self.check(v);
        let (ui, vi) = (u as usize - 1, v as usize - 1);
        self.start[ui] <= self.end[vi] && self.start[vi] <= self.end[ui]
    }

    /// All vertices overlapping `u`, self excluded, enumeration order.
    pub fn neighbourhood(&self, u: u32) -> Vec<u32> {
        self.neighbourhood_instr(u).0
    }

    pub fn neighbourhood_instr(&self, u: u32) -> (Vec<u32>, IgStats) {
        self.check(u);
        let uid = u - 1;
        let (su, eu) = (self.start[uid as usize], self.end[uid as usize]);
        let mut stats = IgStats::default();
        let mut out = Vec::new();
        // Intervals containing the start of u (includes u itself).
        self.stab
            .stab(su, &self.start, &self.end, &mut out, &mut stats);
        // Intervals starting inside (s_u, e_u]: a contiguous start-run.
        let lo = self
            .by_start
            .partition_point(|&v| (self.start[v as usize], v) < (su + 1, 0));
        stats.probes += 2 * u64::from(crate::treeprep::ceil_log2(self.by_start.len() as u64 + 1));
        for &v in &self.by_start[lo..] {
            stats.probes += 1;
            if self.start[v as usize] > eu {
                break;
            }
            out.push(v);
        }
        out.retain(|&v| v != uid);
        let out: Vec<u32> = out.into_iter().map(|v| v + 1).collect();
        (out, stats)
    }

    /// Memory footprint of the query structures, in bits.
    pub fn bits(&self) -> u64 {
        32 * (self.start.len() as u64 * 2 + self.by_start.len() as u64) + self.stab.word_bits()
    }
}
