//! The wavelet-tree-backed compressed representation.
//!
//! Paths are renumbered by sorted starting node. Components:
//!
//! * the parenthesis tree of the prepared clique tree,
//! * `F`/`J`: the sorted starting and ending nodes as non-decreasing
//!   sequences,
//! * `S`: a wavelet tree over the alias permutation pairing each path
//!   with the slot of its ending node in `J`,
//! * `D`: one bit per path flagging degrees above `ceil(log2 n)`, which
//!   picks between counting and enumerating when answering degree.
//!
//! Adjacency decomposes one path into heavy sub-paths and tests, per
//! sub-path, in which of the four surrounding ranges the other path
//! starts. Neighbourhood turns the same case analysis into orthogonal
//! range searches: one rectangle for paths starting left of the first
//! sub-path, one per sub-path for starts on it, and one per child branch
//! hanging off it whose paths must climb out of their subtree (their
//! ending node exceeds the branch's rightmost leaf). The rectangles
//! capture pairwise disjoint path sets, so nothing is reported twice.

use crate::bitseq::{BitBuilder, BitVector, NonDecSeq};
use crate::treeprep::{ceil_log2, HeavySubPathDecomposition, PathSet, PreparedTree};
use crate::wavelet::{WaveletTree, WtStats};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct SuccinctPathGraph {
    pub(crate) pt: PreparedTree,
    pub(crate) f: NonDecSeq,
    pub(crate) j: NonDecSeq,
    pub(crate) s: WaveletTree,
    pub(crate) d: BitVector,
    pub(crate) d_threshold: u64,
    pub(crate) input_of_sorted: Vec<u32>,
    pub(crate) sorted_of_input: Vec<u32>,
    pub(crate) n: u32,
}

/// One orthogonal range query in node-label space; `y = None` leaves the
/// ending node unconstrained.
#[derive(Debug, Clone, Copy)]
struct Rect {
    x: (u64, u64),
    y: Option<(u64, u64)>,
}

/// Instrumentation for one adjacency call.
#[derive(Debug, Default, Clone, Copy)]
pub struct AdjStats {
    pub check_alpha_calls: u64,
}

/// Instrumentation for one neighbourhood/degree call.
#[derive(Debug, Default, Clone, Copy)]
pub struct NbrStats {
    /// Rectangles actually issued to the wavelet tree.
    pub rectangles: u64,
    /// Total hits across rectangles before self-removal; with disjoint
    /// rectangles this equals the neighbour count plus one (the path
    /// itself).
    pub reported_total: u64,
    pub wt: WtStats,
}

impl SuccinctPathGraph {
    pub fn build(pt: PreparedTree, paths: &PathSet) -> Result<Self> {
        let n = paths.len();
        if n == 0 {
            return Err(Error::Invalid("at least one path is required".into()));
        }
        let m = pt.node_count() as u32;
        for &(l, r) in &paths.endpoints {
            if l < 1 || r > m {
                return Err(Error::EndpointOutOfRange(r.max(l), m));
            }
        }
        let starts: Vec<u32> = paths.endpoints.iter().map(|&(l, _)| l).collect();
        let mut by_end: Vec<(u32, u32)> = paths
            .endpoints
            .iter()
            .enumerate()
            .map(|(i, &(_, r))| (r, i as u32))
            .collect();
        by_end.sort_unstable();
        let ends: Vec<u32> = by_end.iter().map(|&(r, _)| r).collect();
        let mut alias = vec![0u32; n];
        for (slot, &(_, path)) in by_end.iter().enumerate() {
            alias[path as usize] = slot as u32 + 1;
        }
        let f = NonDecSeq::new(&starts);
        let j = NonDecSeq::new(&ends);
        let s = WaveletTree::from_permutation(&alias);
        let d_threshold = u64::from(ceil_log2(n as u64));
        let mut g = SuccinctPathGraph {
            pt,
            f,
            j,
            s,
            d: BitVector::from_bools(&vec![false; n]),
            d_threshold,
            input_of_sorted: paths.input_of_sorted.clone(),
            sorted_of_input: paths.sorted_of_input.clone(),
            n: n as u32,
        };
        // Degree flags come from the counting-mode degree query itself.
        let mut flags = BitBuilder::with_capacity(n as u64);
        for i in 1..=n as u64 {
            flags.push(g.degree_counting(i).0 > d_threshold);
        }
        g.d = flags.finish();
        Ok(g)
    }

    pub fn path_count_total(&self) -> u32 {
        self.n
    }

    pub fn node_count(&self) -> u64 {
        self.pt.node_count()
    }

    pub fn prepared_tree(&self) -> &PreparedTree {
        &self.pt
    }

    pub fn degree_threshold(&self) -> u64 {
        self.d_threshold
    }

    /// Input path index (0-based) for a sorted index (1-based).
    pub fn input_of(&self, sorted: u64) -> u32 {
        self.input_of_sorted[sorted as usize - 1]
    }

    /// Sorted path index (1-based) for an input index (0-based).
    pub fn sorted_of(&self, input: u32) -> u64 {
        u64::from(self.sorted_of_input[input as usize]) + 1
    }

    /// Number of paths starting at node `d`; 0 for nodes where no path
    /// starts or labels outside the tree.
    pub fn path_count_at(&self, d: u64) -> u64 {
        if d == 0 {
            return 0;
        }
        self.f.count_le(d) - self.f.count_le(d - 1)
    }

    /// Endpoints `(l, r)` of the path with sorted index `i`.
    pub fn pathep(&self, i: u64) -> (u64, u64) {
        assert!(
            i >= 1 && i <= u64::from(self.n),
            "path index {i} out of range"
        );
        (self.f.access(i), self.j.access(self.s.access(i)))
    }

    /// Sorted-index range of paths starting in `[l, l']`; empty when the
    /// first component exceeds the second.
    pub fn maprange_f(&self, l: u64, lp: u64) -> (u64, u64) {
        self.f.index_range(l, lp)
    }

    /// Slot range in `J` of ending nodes in `[r, r']`.
    pub fn maprange_j(&self, r: u64, rp: u64) -> (u64, u64) {
        self.j.index_range(r, rp)
    }

    /// The rectangles covering all paths whose first shared node with
    /// the decomposed path lies on sub-path `i`.
    fn beta_rects(&self, dec: &HeavySubPathDecomposition, i: usize) -> Vec<Rect> {
        let quad = self.pt.ranges(dec, i);
        let (a, b) = dec.pi[i];
        let (a, b) = (u64::from(a), u64::from(b));
        let mut rects = Vec::new();
        if let Some((lo, hi)) = quad.r1 {
            // Starts before the whole path: they must reach its subtree.
            rects.push(Rect {
                x: (u64::from(lo), u64::from(hi)),
                y: Some((a, self.pt.rmost_leaf(a))),
            });
        }
        rects.push(Rect { x: (a, b), y: None });
        let m = self.pt.node_count();
        for piece in quad.r3.iter().chain(quad.r4.iter()) {
            let Some((lo, hi)) = *piece else { continue };
            // These ranges tile into whole child subtrees hanging off the
            // sub-path; a path starting inside one intersects the
            // sub-path exactly when it ends past the subtree.
            let mut c = u64::from(lo);
            let hi = u64::from(hi);
            while c <= hi {
                let rlc = self.pt.rmost_leaf(c);
                debug_assert!(rlc <= hi, "branch walk escaped its range");
                rects.push(Rect {
                    x: (c, rlc),
                    y: Some((rlc + 1, m)),
                });
                c = rlc + 1;
            }
        }
        rects
    }

    /// Paths mapped to sub-path `i` by the first-shared-node rule, as
    /// sorted indices. The queried path reports itself on exactly one
    /// sub-path.
    pub fn compute_beta(&self, dec: &HeavySubPathDecomposition, i: usize) -> Vec<u64> {
        let mut out = Vec::new();
        let mut stats = NbrStats::default();
        self.beta_into(dec, i, &mut out, &mut stats);
        out
    }

    fn beta_into(
        &self,
        dec: &HeavySubPathDecomposition,
        i: usize,
        out: &mut Vec<u64>,
        stats: &mut NbrStats,
    ) {
        let n = u64::from(self.n);
        for rect in self.beta_rects(dec, i) {
            let (x1, x2) = self.maprange_f(rect.x.0, rect.x.1);
            if x1 > x2 {
                continue;
            }
            let (y1, y2) = match rect.y {
                None => (1, n),
                Some((r, rp)) => self.maprange_j(r, rp),
            };
            if y1 > y2 {
                continue;
            }
            stats.rectangles += 1;
            let (hits, wt) = self.s.search_instr((x1, x2), (y1, y2));
            stats.wt.partial_visits += wt.partial_visits;
            stats.reported_total += hits.len() as u64;
            out.extend(hits);
        }
    }

    /// True iff paths `i` and `j` (sorted indices) share a tree node.
    pub fn adjacency(&self, i: u64, j: u64) -> bool {
        self.adjacency_instr(i, j).0
    }

    pub fn adjacency_instr(&self, i: u64, j: u64) -> (bool, AdjStats) {
        let (l, r) = self.pathep(i);
        let q = self.pathep(j);
        let dec = self.pt.compute_pi(l, r);
        let mut stats = AdjStats::default();
        for idx in 0..dec.k() {
            stats.check_alpha_calls += 1;
            if self.pt.check_alpha(&dec, idx, q) {
                return (true, stats);
            }
        }
        (false, stats)
    }

    /// Sorted indices of all paths meeting path `i`, self excluded,
    /// ascending.
    pub fn neighbourhood(&self, i: u64) -> Vec<u64> {
        self.neighbourhood_instr(i).0
    }

    pub fn neighbourhood_instr(&self, i: u64) -> (Vec<u64>, NbrStats) {
        let (l, r) = self.pathep(i);
        let dec = self.pt.compute_pi(l, r);
        let mut out = Vec::new();
        let mut stats = NbrStats::default();
        for idx in 0..dec.k() {
            self.beta_into(&dec, idx, &mut out, &mut stats);
        }
        out.sort_unstable();
        debug_assert!(
            out.windows(2).all(|w| w[0] != w[1]),
            "rectangles overlapped"
        );
        out.retain(|&q| q != i);
        (out, stats)
    }

    /// Degree by summing rectangle counts; subtracts the self hit.
    pub fn degree_counting(&self, i: u64) -> (u64, NbrStats) {
        let (l, r) = self.pathep(i);
        let dec = self.pt.compute_pi(l, r);
        let n = u64::from(self.n);
        let mut total = 0u64;
        let mut stats = NbrStats::default();
        for idx in 0..dec.k() {
            for rect in self.beta_rects(&dec, idx) {
                let (x1, x2) = self.maprange_f(rect.x.0, rect.x.1);
                if x1 > x2 {
                    continue;
                }
                let (y1, y2) = match rect.y {
                    None => (1, n),
                    Some((rr, rp)) => self.maprange_j(rr, rp),
                };
                if y1 > y2 {
                    continue;
                }
                stats.rectangles += 1;
                let (c, wt) = self.s.count_instr((x1, x2), (y1, y2));
                stats.wt.partial_visits += wt.partial_visits;
                total += c;
            }
        }
        stats.reported_total = total;
        debug_assert!(total >= 1, "the path always counts itself once");
        (total - 1, stats)
    }

    /// Degree by enumerating the neighbourhood.
    pub fn degree_enumerating(&self, i: u64) -> u64 {
        self.neighbourhood(i).len() as u64
    }

    /// Degree of path `i`, picking the strategy flagged at build time.
    pub fn degree(&self, i: u64) -> u64 {
        assert!(
            i >= 1 && i <= u64::from(self.n),
            "path index {i} out of range"
        );
        if self.d.get(i) {
            self.degree_counting(i).0
        } else {
            self.degree_enumerating(i)
        }
    }

    pub fn is_large_degree(&self, i: u64) -> bool {
        self.d.get(i)
    }

    pub fn space_report(&self) -> SpaceReport {
        SpaceReport {
            n: u64::from(self.n),
            m: self.pt.node_count(),
            bp_core: self.pt.bp.core_bits(),
            bp_dirs: self.pt.bp.dir_bits(),
            f_core: self.f.core_bits(),
            f_dirs: self.f.dir_bits(),
            j_core: self.j.core_bits(),
            j_dirs: self.j.dir_bits(),
            wavelet_core: self.s.core_bits(),
            wavelet_dirs: self.s.dir_bits(),
            d_core: self.d.core_bits(),
            d_dirs: self.d.dir_bits(),
            aux_perm_bits: (self.input_of_sorted.len() + self.sorted_of_input.len()) as u64 * 32,
        }
    }
}

/// Per-component bit counts of a built structure. The total covers the
/// queryable structure itself; the input-index permutation kept for
/// caller-facing output is listed separately.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpaceReport {
    pub n: u64,
    pub m: u64,
    pub bp_core: u64,
    pub bp_dirs: u64,
    pub f_core: u64,
    pub f_dirs: u64,
    pub j_core: u64,
    pub j_dirs: u64,
    pub wavelet_core: u64,
    pub wavelet_dirs: u64,
    pub d_core: u64,
    pub d_dirs: u64,
    pub aux_perm_bits: u64,
}

impl SpaceReport {
    pub fn dirs_total(&self) -> u64 {
        self.bp_dirs + self.f_dirs + self.j_dirs + self.wavelet_dirs + self.d_dirs
    }

    pub fn total_bits(&self) -> u64 {
        self.bp_core
            + self.f_core
            + self.j_core
            + self.wavelet_core
            + self.d_core
            + self.dirs_total()
    }

    /// Total bits over `n * ceil(log2 n)`.
    pub fn leading_ratio(&self) -> f64 {
        let denom = self.n * u64::from(ceil_log2(self.n)).max(1);
        self.total_bits() as f64 / denom as f64
    }
}

impl std::fmt::Display for SpaceReport {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            out,
            "space report (bits), n = {}, tree nodes = {}",
            self.n, self.m
        )?;
        writeln!(
            out,
            "  parentheses {:>12} + {:>10} dirs",
            self.bp_core, self.bp_dirs
        )?;
        writeln!(
            out,
            "  starts F    {:>12} + {:>10} dirs",
            self.f_core, self.f_dirs
        )?;
        writeln!(
            out,
            "  ends J      {:>12} + {:>10} dirs",
            self.j_core, self.j_dirs
        )?;
        writeln!(
            out,
            "  wavelet S   {:>12} + {:>10} dirs",
            self.wavelet_core, self.wavelet_dirs
        )?;
        writeln!(
            out,
            "  flags D     {:>12} + {:>10} dirs",
            self.d_core, self.d_dirs
        )?;
        writeln!(
            out,
            "  total       {:>12}  ({:.3} x n ceil(log2 n))",
            self.total_bits(),
            self.leading_ratio()
        )?;
        writeln!(
            out,
            "  aux: input permutation {} bits (not part of the structure)",
            self.aux_perm_bits
        )
    }
}
