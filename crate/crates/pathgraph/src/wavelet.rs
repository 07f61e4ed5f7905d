//! Wavelet tree over a permutation of `[1, n]`.
//!
//! Stores `n` points `(x, y)` with pairwise distinct x's and pairwise
//! distinct y's, supporting point access by x, orthogonal range counting
//! and range reporting in increasing x order. The layout is pointerless:
//! one `n`-bit vector per level. A node owning the value interval
//! `[lo, hi]` occupies a contiguous position segment and writes bit 1
//! where the value falls in the upper half `[mid+1, hi]`, with
//! `mid = (lo+hi)/2` as the deterministic split. Stable partition keeps
//! segments aligned between levels, so both child segments follow from
//! two rank queries; leaf intervals propagate as zeros to keep every
//! level exactly `n` bits.
//!
//! Query rectangles are clamped to the universe; a range that misses the
//! universe entirely counts zero and reports nothing.

use crate::bitseq::{BitBuilder, BitVector};

#[derive(Debug, Clone)]
pub struct WaveletTree {
    n: u64,
    levels: Vec<BitVector>,
}

/// Instrumentation for one counting/reporting query.
#[derive(Debug, Default, Clone, Copy)]
pub struct WtStats {
    /// Level visits that had to descend (value range split the node);
    /// at most two per level after the top fork.
    pub partial_visits: u64,
}

struct PathStep {
    parent_s: u64,
    child_s: u64,
    right: bool,
}

impl WaveletTree {
    /// Builds from the permutation `y = perm[x - 1]`.
    pub fn from_permutation(perm: &[u32]) -> Self {
        let n = perm.len() as u64;
        let mut seen = vec![false; perm.len() + 1];
        for &y in perm {
            assert!(y >= 1 && u64::from(y) <= n, "value {y} outside [1, {n}]");
            assert!(!seen[y as usize], "duplicate value {y}");
            seen[y as usize] = true;
        }
        let depth = levels_for(n);
        let mut levels = Vec::with_capacity(depth);
        let mut cur: Vec<(u64, u64, Vec<u32>)> = vec![(1, n, perm.to_vec())];
        for _ in 0..depth {
            let mut bits = BitBuilder::with_capacity(n);
            let mut next: Vec<(u64, u64, Vec<u32>)> = Vec::with_capacity(cur.len() * 2);
            for (lo, hi, vals) in cur {
                if lo == hi {
                    bits.push_run(false, vals.len() as u64);
                    next.push((lo, hi, vals));
                    continue;
                }
                let mid = (lo + hi) / 2;
                let mut left = Vec::new();
                let mut right = Vec::new();
                for v in vals {
                    if u64::from(v) <= mid {
                        bits.push(false);
                        left.push(v);
                    } else {
                        bits.push(true);
                        right.push(v);
                    }
                }
                next.push((lo, mid, left));
                next.push((mid + 1, hi, right));
            }
            levels.push(bits.finish());
            cur = next;
        }
        WaveletTree { n, levels }
    }

    /// Builds from explicit points with distinct x's and distinct y's in
    /// `[1, n]`.
    pub fn from_points(points: &[(u32, u32)]) -> Self {
        let n = points.len();
        let mut perm = vec![0u32; n];
        let mut seen = vec![false; n + 1];
        for &(x, y) in points {
            assert!(x >= 1 && (x as usize) <= n, "x {x} outside [1, {n}]");
            assert!(!seen[x as usize], "duplicate x {x}");
            seen[x as usize] = true;
            perm[x as usize - 1] = y;
        }
        Self::from_permutation(&perm)
    }

    pub fn len(&self) -> u64 {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// The y-coordinate of the point with x-coordinate `x`.
    pub fn access(&self, x: u64) -> u64 {
        assert!(x >= 1 && x <= self.n, "x {x} out of range [1, {}]", self.n);
        let (mut lo, mut hi) = (1u64, self.n);
        let (mut s, mut e) = (0u64, self.n);
        let mut off = x - 1;
        for bits in &self.levels {
            if lo == hi {
                break;
            }
            let mid = (lo + hi) / 2;
            let zeros_s = bits.rank(false, s);
            let zeros = bits.rank(false, e) - zeros_s;
            if bits.get(s + off + 1) {
                off = (bits.rank(true, s + off) - bits.rank(true, s)) + 0;
                s += zeros;
                lo = mid + 1;
            } else {
                off = bits.rank(false, s + off) - zeros_s;
                e = s + zeros;
                hi = mid;
            }
        }
        lo
    }

    /// Number of stored points in `[x1, x2] x [y1, y2]`.
    pub fn count(&self, xr: (u64, u64), yr: (u64, u64)) -> u64 {
        self.count_instr(xr, yr).0
    }

    pub fn count_instr(&self, xr: (u64, u64), yr: (u64, u64)) -> (u64, WtStats) {
        let mut stats = WtStats::default();
        let Some(((x1, x2), yr)) = self.clamp(xr, yr) else {
            return (0, stats);
        };
        let mut total = 0;
        self.count_rec(
            0,
            (1, self.n),
            (0, self.n),
            (x1 - 1, x2),
            yr,
            &mut total,
            &mut stats,
        );
        (total, stats)
    }

    #[allow(clippy::too_many_arguments)]
    fn count_rec(
        &self,
        level: usize,
        (lo, hi): (u64, u64),
        (s, e): (u64, u64),
        (xs, xe): (u64, u64),
        (y1, y2): (u64, u64),
        total: &mut u64,
        stats: &mut WtStats,
    ) {
        if xs >= xe || lo > y2 || hi < y1 {
            return;
        }
        if y1 <= lo && hi <= y2 {
            *total += xe - xs;
            return;
        }
        stats.partial_visits += 1;
        let bits = &self.levels[level];
        let mid = (lo + hi) / 2;
        let zeros_s = bits.rank(false, s);
        let zeros = bits.rank(false, e) - zeros_s;
        let (ls, le) = (
            s + (bits.rank(false, xs) - zeros_s),
            s + (bits.rank(false, xe) - zeros_s),
        );
        let ones_s = bits.rank(true, s);
        let (rs, re) = (
            s + zeros + (bits.rank(true, xs) - ones_s),
            s + zeros + (bits.rank(true, xe) - ones_s),
        );
        self.count_rec(
            level + 1,
            (lo, mid),
            (s, s + zeros),
            (ls, le),
            (y1, y2),
            total,
            stats,
        );
        self.count_rec(
            level + 1,
            (mid + 1, hi),
            (s + zeros, e),
            (rs, re),
            (y1, y2),
            total,
            stats,
        );
    }

    /// X-coordinates of stored points inside the rectangle, increasing.
    pub fn search(&self, xr: (u64, u64), yr: (u64, u64)) -> Vec<u64> {
        self.search_instr(xr, yr).0
    }

    pub fn search_instr(&self, xr: (u64, u64), yr: (u64, u64)) -> (Vec<u64>, WtStats) {
        let mut stats = WtStats::default();
        let Some(((x1, x2), yr)) = self.clamp(xr, yr) else {
            return (Vec::new(), stats);
        };
        let mut hits = Vec::new();
        let mut path = Vec::new();
        self.search_rec(
            0,
            (1, self.n),
            (0, self.n),
            (x1 - 1, x2),
            yr,
            &mut path,
            &mut hits,
            &mut stats,
        );
        hits.sort_unstable();
        (hits, stats)
    }

    #[allow(clippy::too_many_arguments)]
    fn search_rec(
        &self,
        level: usize,
        (lo, hi): (u64, u64),
        (s, e): (u64, u64),
        (xs, xe): (u64, u64),
        (y1, y2): (u64, u64),
        path: &mut Vec<PathStep>,
        hits: &mut Vec<u64>,
        stats: &mut WtStats,
    ) {
        if xs >= xe || lo > y2 || hi < y1 {
            return;
        }
        if y1 <= lo && hi <= y2 {
            for p in xs..xe {
                hits.push(self.map_to_root(path, p));
            }
            return;
        }
        stats.partial_visits += 1;
        let bits = &self.levels[level];
        let mid = (lo + hi) / 2;
        let zeros_s = bits.rank(false, s);
        let zeros = bits.rank(false, e) - zeros_s;
        let (ls, le) = (
            s + (bits.rank(false, xs) - zeros_s),
            s + (bits.rank(false, xe) - zeros_s),
        );
        let ones_s = bits.rank(true, s);
        let (rs, re) = (
            s + zeros + (bits.rank(true, xs) - ones_s),
            s + zeros + (bits.rank(true, xe) - ones_s),
        );
        path.push(PathStep {
            parent_s: s,
            child_s: s,
            right: false,
        });
        self.search_rec(
            level + 1,
            (lo, mid),
            (s, s + zeros),
            (ls, le),
            (y1, y2),
            path,
            hits,
            stats,
        );
        path.pop();
        path.push(PathStep {
            parent_s: s,
            child_s: s + zeros,
            right: true,
        });
        self.search_rec(
            level + 1,
            (mid + 1, hi),
            (s + zeros, e),
            (rs, re),
            (y1, y2),
            path,
            hits,
            stats,
        );
        path.pop();
    }

    /// Maps an absolute position at depth `path.len()` back to the
    /// 1-based x-coordinate at the root.
    fn map_to_root(&self, path: &[PathStep], mut p: u64) -> u64 {
        for (l, step) in path.iter().enumerate().rev() {
            let bits = &self.levels[l];
            let idx = p - step.child_s;
            p = if step.right {
                bits.select(true, bits.rank(true, step.parent_s) + idx + 1) - 1
            } else {
                bits.select(false, bits.rank(false, step.parent_s) + idx + 1) - 1
            };
        }
        p + 1
    }

    fn clamp(&self, xr: (u64, u64), yr: (u64, u64)) -> Option<((u64, u64), (u64, u64))> {
        if self.n == 0 {
            return None;
        }
        let (x1, x2) = (xr.0.max(1), xr.1.min(self.n));
        let (y1, y2) = (yr.0.max(1), yr.1.min(self.n));
        if x1 > x2 || y1 > y2 {
            None
        } else {
            Some(((x1, x2), (y1, y2)))
        }
    }

    pub fn core_bits(&self) -> u64 {
        self.levels.iter().map(|b| b.core_bits()).sum()
    }

    pub fn dir_bits(&self) -> u64 {
        self.levels.iter().map(|b| b.dir_bits()).sum()
    }

    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    pub(crate) fn level_bits(&self) -> &[BitVector] {
        &self.levels
    }

    pub(crate) fn from_level_bits(n: u64, levels: Vec<BitVector>) -> Self {
        assert_eq!(levels.len(), levels_for(n));
        for l in &levels {
            assert_eq!(l.len(), n);
        }
        WaveletTree { n, levels }
    }
}

fn levels_for(n: u64) -> usize {
    if n <= 1 {
        0
    } else {
        (64 - (n - 1).leading_zeros()) as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_count(points: &[(u32, u32)], xr: (u64, u64), yr: (u64, u64)) -> u64 {
        points
            .iter()
            .filter(|&&(x, y)| {
                u64::from(x) >= xr.0
                    && u64::from(x) <= xr.1
                    && u64::from(y) >= yr.0
                    && u64::from(y) <= yr.1
            })
            .count() as u64
    }

    fn brute_search(points: &[(u32, u32)], xr: (u64, u64), yr: (u64, u64)) -> Vec<u64> {
        let mut v: Vec<u64> = points
            .iter()
            .filter(|&&(x, y)| {
                u64::from(x) >= xr.0
                    && u64::from(x) <= xr.1
                    && u64::from(y) >= yr.0
                    && u64::from(y) <= yr.1
            })
            .map(|&(x, _)| u64::from(x))
            .collect();
        v.sort_unstable();
        v
    }

    #[test]
    fn access_examples() {
        let pts = [(1, 3), (2, 1), (3, 2)];
        let wt = WaveletTree::from_points(&pts);
        assert_eq!(wt.access(1), 3);
        assert_eq!(wt.access(3), 2);
        let id4 = WaveletTree::from_permutation(&[1, 2, 3, 4]);
        assert_eq!(id4.access(2), 2);
    }

    #[test]
    fn count_examples() {
        let wt = WaveletTree::from_points(&[(1, 3), (2, 1), (3, 2)]);
        assert_eq!(wt.count((1, 2), (1, 3)), 2);
        assert_eq!(wt.count((2, 1), (1, 3)), 0);
        assert_eq!(wt.count((1, 3), (1, 3)), 3);
    }

    #[test]
    fn search_examples() {
        let wt = WaveletTree::from_points(&[(1, 3), (2, 1), (3, 2)]);
        assert_eq!(wt.search((2, 3), (1, 2)), vec![2, 3]);
        // y-range outside the universe clamps to empty.
        assert_eq!(wt.search((1, 3), (4, 4)), Vec::<u64>::new());
        assert_eq!(wt.search((1, 1), (3, 3)), vec![1]);
    }

    #[test]
    fn singleton_universe() {
        let wt = WaveletTree::from_points(&[(1, 1)]);
        assert_eq!(wt.access(1), 1);
        assert_eq!(wt.count((1, 1), (1, 1)), 1);
        assert_eq!(wt.search((1, 1), (1, 1)), vec![1]);
        assert_eq!(wt.level_count(), 0);
    }

    #[test]
    #[should_panic]
    fn access_out_of_range() {
        WaveletTree::from_permutation(&[2, 1]).access(3);
    }

    fn xorshift(state: &mut u64) -> u64 {
        *state ^= *state >> 12;
        *state ^= *state << 25;
        *state ^= *state >> 27;
        state.wrapping_mul(0x2545f4914f6cdd1d)
    }

    fn random_perm(n: usize, seed: u64) -> Vec<u32> {
        let mut s = seed | 1;
        let mut perm: Vec<u32> = (1..=n as u32).collect();
        for i in (1..n).rev() {
            let j = (xorshift(&mut s) % (i as u64 + 1)) as usize;
            perm.swap(i, j);
        }
        perm
    }

    #[test]
    fn oracle_equivalence_large() {
        for (n, seed) in [(1usize, 3u64), (2, 4), (100, 5), (1000, 6), (4096, 7)] {
            let perm = random_perm(n, seed);
            let pts: Vec<(u32, u32)> = perm
                .iter()
                .enumerate()
                .map(|(i, &y)| (i as u32 + 1, y))
                .collect();
            let wt = WaveletTree::from_permutation(&perm);
            for x in 1..=n as u64 {
                assert_eq!(wt.access(x), u64::from(perm[x as usize - 1]));
            }
            let mut s = seed.wrapping_add(99) | 1;
            let rects = if n >= 1000 { 1000 } else { 200 };
            let max_partial = 2 * levels_for(n as u64) as u64;
            for _ in 0..rects {
                let mut x1 = xorshift(&mut s) % n as u64 + 1;
                let mut x2 = xorshift(&mut s) % n as u64 + 1;
                if x1 > x2 {
                    std::mem::swap(&mut x1, &mut x2);
                }
                let mut y1 = xorshift(&mut s) % n as u64 + 1;
                let mut y2 = xorshift(&mut s) % n as u64 + 1;
                if y1 > y2 {
                    std::mem::swap(&mut y1, &mut y2);
                }
                let (got, stats) = wt.count_instr((x1, x2), (y1, y2));
                assert_eq!(got, brute_count(&pts, (x1, x2), (y1, y2)));
                assert!(
                    stats.partial_visits <= max_partial.max(1),
                    "count visited {} partial nodes on n={n}",
                    stats.partial_visits
                );
                assert_eq!(
                    wt.search((x1, x2), (y1, y2)),
                    brute_search(&pts, (x1, x2), (y1, y2))
                );
            }
        }
    }

    #[test]
    fn measured_space_overhead() {
        let n = 1 << 14;
        let perm = random_perm(n, 42);
        let wt = WaveletTree::from_permutation(&perm);
        let core = wt.core_bits();
        assert_eq!(core, (n as u64) * levels_for(n as u64) as u64);
        let eps = wt.dir_bits() as f64 / core as f64;
        assert!(eps <= 0.25, "directory overhead {eps:.3} above budget");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn matches_brute_force(n in 1usize..128, seed in any::<u64>(), queries in proptest::collection::vec((0u64..130, 0u64..130, 0u64..130, 0u64..130), 1..20)) {
            let perm = random_perm(n, seed);
            let pts: Vec<(u32, u32)> = perm.iter().enumerate().map(|(i, &y)| (i as u32 + 1, y)).collect();
            let wt = WaveletTree::from_permutation(&perm);
            // Access over all x reconstructs the permutation.
            let rebuilt: Vec<u32> = (1..=n as u64).map(|x| wt.access(x) as u32).collect();
            prop_assert_eq!(&rebuilt, &perm);
            for (x1, x2, y1, y2) in queries {
                prop_assert_eq!(wt.count((x1, x2), (y1, y2)), brute_count(&pts, (x1, x2), (y1, y2)));
                prop_assert_eq!(wt.search((x1, x2), (y1, y2)), brute_search(&pts, (x1, x2), (y1, y2)));
            }
        }
    }
}
