//! Balanced-parentheses ordinal tree navigation.
//!
//! A tree with `M` nodes is coded as `2M` bits from a pre-order walk:
//! `1` opens a node, `0` closes it. Node labels are pre-order ranks, so
//! label `v` corresponds to the `v`-th open parenthesis and every subtree
//! (and every heavy path, after the relabeling done elsewhere) occupies a
//! contiguous label interval.
//!
//! Navigation is excess-based: `excess(i) = 2 * rank(1, i) - i` is the
//! depth after reading `i` parentheses. A per-block minimum array plus a
//! sparse table over it answers the range-minimum, forward-search and
//! backward-search queries that `lca`, `parent` and `rmost_leaf` reduce
//! to. Any correct scheme would do; this one keeps the directory overhead
//! a few percent of the 2M-bit payload.

use super::{BitBuilder, BitVector, BLOCK_BITS};

/// Per-byte excess tables: total delta, minimum prefix excess scanning
/// the byte left to right, and minimum excess scanning right to left
/// (both relative to the entry excess).
const fn excess_tables() -> ([i8; 256], [i8; 256], [i8; 256]) {
    let mut delta = [0i8; 256];
    let mut fmin = [0i8; 256];
    let mut rmin = [0i8; 256];
    let mut b = 0usize;
    while b < 256 {
        let mut e = 0i8;
        let mut mn = i8::MAX;
        let mut k = 0;
        while k < 8 {
            e += if (b >> k) & 1 == 1 { 1 } else { -1 };
            if e < mn {
                mn = e;
            }
            k += 1;
        }
        delta[b] = e;
        fmin[b] = mn;
        let mut e2 = 0i8;
        let mut mn2 = i8::MAX;
        let mut k = 8usize;
        while k > 0 {
            k -= 1;
            e2 -= if (b >> k) & 1 == 1 { 1 } else { -1 };
            if e2 < mn2 {
                mn2 = e2;
            }
        }
        rmin[b] = mn2;
        b += 1;
    }
    (delta, fmin, rmin)
}

const EXC_TABLES: ([i8; 256], [i8; 256], [i8; 256]) = excess_tables();
const BYTE_DELTA: [i8; 256] = EXC_TABLES.0;
const BYTE_FMIN: [i8; 256] = EXC_TABLES.1;
const BYTE_RMIN: [i8; 256] = EXC_TABLES.2;

/// Ordinal tree over pre-order labels `1..=M` backed by balanced
/// parentheses.
#[derive(Debug, Clone)]
pub struct BPTree {
    bits: BitVector,
    m: u64,
    /// Minimum excess inside each block, absolute.
    block_min: Vec<i32>,
    /// Sparse table over `block_min`; level `k` holds minima of runs of
    /// `2^k` blocks.
    sparse: Vec<Vec<i32>>,
}

impl BPTree {
    /// Builds from parenthesis bits produced by a pre-order walk.
    pub fn from_bits(bits: BitVector) -> Self {
        let len = bits.len();
        assert!(len % 2 == 0, "parenthesis sequence must have even length");
        let m = bits.count_ones();
        assert_eq!(m * 2, len, "parenthesis sequence must balance");
        assert!(m < (1 << 30), "node count exceeds supported range");
        let n_blocks = ((len + BLOCK_BITS - 1) / BLOCK_BITS).max(1) as usize;
        let mut block_min = vec![i32::MAX; n_blocks];
        let mut e: i64 = 0;
        for b in 0..n_blocks {
            let lo = b as u64 * BLOCK_BITS + 1;
            let hi = ((b as u64 + 1) * BLOCK_BITS).min(len);
            let mut min = i64::MAX;
            for p in lo..=hi {
                e += if bits.get(p) { 1 } else { -1 };
                min = min.min(e);
            }
            block_min[b] = if min == i64::MAX { 0 } else { min as i32 };
        }
        let mut sparse = vec![block_min.clone()];
        let mut k = 1usize;
        while (1 << k) <= n_blocks {
            let prev = &sparse[k - 1];
            let half = 1usize << (k - 1);
            let level: Vec<i32> = (0..=n_blocks - (1 << k))
                .map(|i| prev[i].min(prev[i + half]))
                .collect();
            sparse.push(level);
            k += 1;
        }
        BPTree {
            bits,
            m,
            block_min,
            sparse,
        }
    }

    /// Builds directly from a parent array (1-based labels, heavy/ordinal
    /// ordering already applied; `children[v]` lists children in order).
    pub fn from_ordered_children(children: &[Vec<u32>]) -> Self {
        let m = children.len() - 1;
        let mut b = BitBuilder::with_capacity(2 * m as u64);
        // Iterative pre-order emit: (node, next child index).
        let mut stack: Vec<(u32, usize)> = vec![(1, 0)];
        b.push(true);
        while let Some((v, ci)) = stack.last_mut() {
            let v = *v;
            if *ci < children[v as usize].len() {
                let c = children[v as usize][*ci];
                *ci += 1;
                b.push(true);
                stack.push((c, 0));
            } else {
                b.push(false);
                stack.pop();
            }
        }
        Self::from_bits(b.finish())
    }

    pub fn node_count(&self) -> u64 {
        self.m
    }

    pub fn bits(&self) -> &BitVector {
        &self.bits
    }

    /// Pre-order label of the node opened at parenthesis position `i`;
    /// `label_at(0) == 1` by convention.
    pub fn label_at(&self, i: u64) -> u64 {
        if i == 0 {
            1
        } else {
            self.bits.rank(true, i)
        }
    }

    /// Position of the open parenthesis of `v`.
    pub fn open_pos(&self, v: u64) -> u64 {
        assert!(v >= 1 && v <= self.m, "label {v} out of range");
        self.bits.select(true, v)
    }

    fn excess(&self, pos: u64) -> i64 {
        2 * self.bits.rank(true, pos) as i64 - pos as i64
    }

    /// Bit at 1-based position `p`, no bounds check beyond debug.
    #[inline]
    fn bit(&self, p: u64) -> bool {
        debug_assert!(p >= 1 && p <= self.bits.len());
        let i = p - 1;
        (self.bits.words()[(i / 64) as usize] >> (i % 64)) & 1 == 1
    }

    /// Byte `j` of the parenthesis stream (positions `8j+1 ..= 8j+8`).
    #[inline]
    fn byte(&self, j: u64) -> u8 {
        (self.bits.words()[(j / 8) as usize] >> (8 * (j % 8))) as u8
    }

    /// Smallest `p` in `[lo, hi]` with `excess(p) == target`, entering
    /// with `excess(lo - 1) == e`.
    fn scan_fwd(&self, lo: u64, hi: u64, mut e: i64, target: i64) -> Option<u64> {
        let mut p = lo;
        while p <= hi && (p - 1) % 8 != 0 {
            e += if self.bit(p) { 1 } else { -1 };
            if e == target {
                return Some(p);
            }
            p += 1;
        }
        while p + 7 <= hi {
            let b = self.byte((p - 1) / 8) as usize;
            if e + i64::from(BYTE_FMIN[b]) <= target {
                for q in p..p + 8 {
                    e += if self.bit(q) { 1 } else { -1 };
                    if e == target {
                        return Some(q);
                    }
                }
                unreachable!("byte minimum promised a hit");
            }
            e += i64::from(BYTE_DELTA[b]);
            p += 8;
        }
        while p <= hi {
            e += if self.bit(p) { 1 } else { -1 };
            if e == target {
                return Some(p);
            }
            p += 1;
        }
        None
    }

    /// Largest `p` in `[lo, hi]` with `excess(p) == target`, entering
    /// with `excess(hi) == e`.
    fn scan_bwd(&self, lo: u64, hi: u64, mut e: i64, target: i64) -> Option<u64> {
        let mut p = hi;
        while p >= lo {
            if e == target {
                return Some(p);
            }
            if p % 8 == 0 && p >= lo + 7 {
                let b = self.byte(p / 8 - 1) as usize;
                if e + i64::from(BYTE_RMIN[b]) > target {
                    e -= i64::from(BYTE_DELTA[b]);
                    p -= 8;
                    continue;
                }
            }
            e -= if self.bit(p) { 1 } else { -1 };
            p -= 1;
        }
        None
    }

    /// Minimum excess over `[lo, hi]` entering with `excess(lo - 1) == e`.
    fn scan_min(&self, lo: u64, hi: u64, mut e: i64) -> i64 {
        let mut min = i64::MAX;
        let mut p = lo;
        while p <= hi && (p - 1) % 8 != 0 {
            e += if self.bit(p) { 1 } else { -1 };
            min = min.min(e);
            p += 1;
        }
        while p + 7 <= hi {
            let b = self.byte((p - 1) / 8) as usize;
            min = min.min(e + i64::from(BYTE_FMIN[b]));
            e += i64::from(BYTE_DELTA[b]);
            p += 8;
        }
        while p <= hi {
            e += if self.bit(p) { 1 } else { -1 };
            min = min.min(e);
            p += 1;
        }
        min
    }

    /// Smallest `j > from` with `excess(j) == target`. Callers guarantee
    /// all positions in between stay above `target`.
    fn fwd_find(&self, from: u64, target: i64) -> u64 {
        let len = self.bits.len();
        let first_hi = ((from / BLOCK_BITS) + 1) * BLOCK_BITS;
        if let Some(p) = self.scan_fwd(from + 1, first_hi.min(len), self.excess(from), target) {
            return p;
        }
        let mut blk = (from / BLOCK_BITS + 1) as usize;
        while blk < self.block_min.len() {
            if i64::from(self.block_min[blk]) <= target {
                let lo = blk as u64 * BLOCK_BITS + 1;
                let hi = ((blk as u64 + 1) * BLOCK_BITS).min(len);
                return self
                    .scan_fwd(lo, hi, self.excess(lo - 1), target)
                    .expect("block minimum promised a hit");
            }
            blk += 1;
        }
        panic!("forward excess search failed: unbalanced sequence");
    }

    /// Largest `j <= from` with `excess(j) == target`, allowing `j == 0`
    /// (empty prefix, excess 0). Callers guarantee every position right
    /// of the answer up to `from` stays above `target`.
    fn bwd_find(&self, from: u64, target: i64) -> u64 {
        let blk_lo = if from == 0 {
            1
        } else {
            (from - 1) / BLOCK_BITS * BLOCK_BITS + 1
        };
        if from >= 1 {
            if let Some(p) = self.scan_bwd(blk_lo, from, self.excess(from), target) {
                return p;
            }
        }
        let mut blk = ((blk_lo - 1) / BLOCK_BITS) as isize - 1;
        while blk >= 0 {
            if i64::from(self.block_min[blk as usize]) <= target {
                let lo = blk as u64 * BLOCK_BITS + 1;
                let hi = (blk as u64 + 1) * BLOCK_BITS;
                return self
                    .scan_bwd(lo, hi, self.excess(hi), target)
                    .expect("block minimum promised a hit");
            }
            blk -= 1;
        }
        assert_eq!(target, 0, "backward excess search failed");
        0
    }

    /// Minimum excess over positions `[lo, hi]`.
    fn range_min(&self, lo: u64, hi: u64) -> i64 {
        debug_assert!(lo >= 1 && lo <= hi && hi <= self.bits.len());
        let b_lo = ((lo - 1) / BLOCK_BITS) as usize;
        let b_hi = ((hi - 1) / BLOCK_BITS) as usize;
        if b_lo == b_hi {
            return self.scan_min(lo, hi, self.excess(lo - 1));
        }
        let mut min = self.scan_min(lo, (b_lo as u64 + 1) * BLOCK_BITS, self.excess(lo - 1));
        let tail_lo = b_hi as u64 * BLOCK_BITS + 1;
        min = min.min(self.scan_min(tail_lo, hi, self.excess(tail_lo - 1)));
        if b_lo + 1 <= b_hi - 1 {
            min = min.min(self.block_range_min(b_lo + 1, b_hi - 1));
        }
        min
    }

    fn block_range_min(&self, b1: usize, b2: usize) -> i64 {
        let k = (usize::BITS - 1 - (b2 - b1 + 1).leading_zeros()) as usize;
        let level = &self.sparse[k];
        i64::from(level[b1].min(level[b2 + 1 - (1 << k)]))
    }

    fn close_pos(&self, v: u64) -> u64 {
        let i = self.open_pos(v);
        self.fwd_find(i, self.excess(i) - 1)
    }

    /// Largest pre-order label in the subtree of `v`.
    pub fn rmost_leaf(&self, v: u64) -> u64 {
        self.bits.rank(true, self.close_pos(v))
    }

    pub fn is_ancestor(&self, u: u64, v: u64) -> bool {
        u <= v && v <= self.rmost_leaf(u)
    }

    /// Lowest common ancestor of `u` and `v`.
    pub fn lca(&self, u: u64, v: u64) -> u64 {
        let (u, v) = if u <= v { (u, v) } else { (v, u) };
        if self.is_ancestor(u, v) {
            return u;
        }
        let iu = self.open_pos(u);
        let iv = self.open_pos(v);
        let mu = self.range_min(iu + 1, iv);
        // The ancestor of u at depth mu opens right after the last
        // position before iu at depth mu - 1.
        let j = self.bwd_find(iu, mu - 1);
        self.label_at(j + 1)
    }

    /// Parent label, `None` for the root.
    pub fn parent(&self, v: u64) -> Option<u64> {
        assert!(v >= 1 && v <= self.m, "label {v} out of range");
        if v == 1 {
            None
        } else {
            Some(self.lca(v - 1, v))
        }
    }

    /// First child label (`v + 1` in pre-order) or `None` for a leaf.
    pub fn first_child(&self, v: u64) -> Option<u64> {
        let i = self.open_pos(v);
        if i + 1 <= self.bits.len() && self.bits.get(i + 1) {
            Some(v + 1)
        } else {
            None
        }
    }

    /// Number of siblings to the left of `v`. The root has no siblings to
    /// speak of and is rejected.
    pub fn child_rank(&self, v: u64) -> u64 {
        assert!(v >= 2 && v <= self.m, "child_rank needs a non-root label");
        let mut j = self.open_pos(v);
        let mut count = 0;
        while !self.bits.get(j - 1) {
            // Position j-1 closes the previous sibling; jump to its open.
            let e = self.excess(j - 1);
            j = self.bwd_find(j - 2, e) + 1;
            count += 1;
        }
        count
    }

    pub fn core_bits(&self) -> u64 {
        self.bits.core_bits()
    }

    pub fn dir_bits(&self) -> u64 {
        let sparse_bits: usize = self.sparse.iter().map(|l| l.len() * 32).sum();
        self.bits.dir_bits() + (self.block_min.len() * 32) as u64 + sparse_bits as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Pointer-based reference tree for cross-checking.
    struct RefTree {
        parent: Vec<u64>,
        children: Vec<Vec<u32>>,
    }

    impl RefTree {
        fn bp(&self) -> BPTree {
            BPTree::from_ordered_children(&self.children)
        }

        fn lca(&self, mut u: u64, mut v: u64) -> u64 {
            let depth = |mut x: u64| {
                let mut d = 0;
                while x != 1 {
                    x = self.parent[x as usize];
                    d += 1;
                }
                d
            };
            let (mut du, mut dv) = (depth(u), depth(v));
            while du > dv {
                u = self.parent[u as usize];
                du -= 1;
            }
            while dv > du {
                v = self.parent[v as usize];
                dv -= 1;
            }
            while u != v {
                u = self.parent[u as usize];
                v = self.parent[v as usize];
            }
            u
        }

        fn rmost_leaf(&self, v: u64) -> u64 {
            let mut best = v;
            let mut stack = vec![v];
            while let Some(x) = stack.pop() {
                best = best.max(x);
                stack.extend(self.children[x as usize].iter().map(|&c| u64::from(c)));
            }
            best
        }
    }

    /// The worked tree used across the crate: parent map
    /// {2->1, 3->2, 4->3, 5->2, 6->1} in pre-order labels.
    fn running_tree() -> RefTree {
        RefTree {
            parent: vec![0, 0, 1, 2, 3, 2, 1],
            children: vec![
                vec![],
                vec![2, 6],
                vec![3, 5],
                vec![4],
                vec![],
                vec![],
                vec![],
            ],
        }
    }

    /// Pre-order relabeled random tree: children ordered, labels 1..=m.
    fn random_ref_tree(m: usize, seed: u64) -> RefTree {
        let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
        let mut next = move || {
            state ^= state >> 12;
            state ^= state << 25;
            state ^= state >> 27;
            state.wrapping_mul(0x2545f4914f6cdd1d)
        };
        // Random attachment, then relabel by pre-order.
        let mut kids: Vec<Vec<u32>> = vec![vec![]; m + 1];
        for v in 2..=m {
            let p = (next() % (v as u64 - 1)) + 1;
            kids[p as usize].push(v as u32);
        }
        let mut relabel = vec![0u32; m + 1];
        let mut stack = vec![1u32];
        let mut next_label = 0u32;
        let mut order = vec![];
        while let Some(v) = stack.pop() {
            next_label += 1;
            relabel[v as usize] = next_label;
            order.push(v);
            for &c in kids[v as usize].iter().rev() {
                stack.push(c);
            }
        }
        let mut parent = vec![0u64; m + 1];
        let mut children = vec![vec![]; m + 1];
        for &v in &order {
            for &c in &kids[v as usize] {
                parent[relabel[c as usize] as usize] = u64::from(relabel[v as usize]);
                children[relabel[v as usize] as usize].push(relabel[c as usize]);
            }
        }
        for ch in children.iter_mut() {
            ch.sort_unstable();
        }
        RefTree { parent, children }
    }

    #[test]
    fn running_tree_bp_matches() {
        let t = running_tree().bp();
        let s: String = (1..=12)
            .map(|i| if t.bits().get(i) { '1' } else { '0' })
            .collect();
        assert_eq!(s, "111100100100");
    }

    #[test]
    fn lca_examples() {
        let t = running_tree().bp();
        assert_eq!(t.lca(4, 5), 2);
        assert_eq!(t.lca(5, 6), 1);
        assert_eq!(t.lca(3, 3), 3);
    }

    #[test]
    fn parent_examples() {
        let t = running_tree().bp();
        assert_eq!(t.parent(4), Some(3));
        assert_eq!(t.parent(1), None);
        assert_eq!(t.parent(6), Some(1));
    }

    #[test]
    fn first_child_examples() {
        let t = running_tree().bp();
        assert_eq!(t.first_child(1), Some(2));
        assert_eq!(t.first_child(4), None);
        assert_eq!(t.first_child(2), Some(3));
    }

    #[test]
    fn rmost_leaf_examples() {
        let t = running_tree().bp();
        assert_eq!(t.rmost_leaf(2), 5);
        assert_eq!(t.rmost_leaf(6), 6);
        assert_eq!(t.rmost_leaf(1), 6);
    }

    #[test]
    fn child_rank_examples() {
        let t = running_tree().bp();
        assert_eq!(t.child_rank(2), 0);
        assert_eq!(t.child_rank(6), 1);
        assert_eq!(t.child_rank(5), 1);
    }

    #[test]
    #[should_panic]
    fn child_rank_of_root_panics() {
        running_tree().bp().child_rank(1);
    }

    #[test]
    fn singleton() {
        let t = BPTree::from_ordered_children(&vec![vec![], vec![]]);
        assert_eq!(t.node_count(), 1);
        assert_eq!(t.lca(1, 1), 1);
        assert_eq!(t.parent(1), None);
        assert_eq!(t.first_child(1), None);
        assert_eq!(t.rmost_leaf(1), 1);
    }

    #[test]
    fn agrees_with_reference_on_large_trees() {
        for (m, seed) in [(100usize, 7u64), (1000, 11), (10_000, 13)] {
            let rt = random_ref_tree(m, seed);
            let bp = rt.bp();
            assert_eq!(bp.node_count(), m as u64);
            let mut state = seed;
            let mut next = move || {
                state ^= state >> 12;
                state ^= state << 25;
                state ^= state >> 27;
                state.wrapping_mul(0x2545f4914f6cdd1d)
            };
            for v in 1..=m as u64 {
                assert_eq!(
                    bp.parent(v),
                    if v == 1 {
                        None
                    } else {
                        Some(rt.parent[v as usize])
                    }
                );
                assert_eq!(bp.rmost_leaf(v), rt.rmost_leaf(v));
                assert_eq!(
                    bp.first_child(v),
                    rt.children[v as usize].first().map(|&c| u64::from(c))
                );
                if v != 1 {
                    let p = rt.parent[v as usize] as usize;
                    let rank = rt.children[p]
                        .iter()
                        .position(|&c| u64::from(c) == v)
                        .unwrap();
                    assert_eq!(bp.child_rank(v), rank as u64);
                }
            }
            for _ in 0..2000 {
                let u = next() % m as u64 + 1;
                let v = next() % m as u64 + 1;
                assert_eq!(bp.lca(u, v), rt.lca(u, v), "lca({u},{v}) on m={m}");
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn lca_matches_reference(m in 2usize..200, seed in any::<u64>()) {
            let rt = random_ref_tree(m, seed);
            let bp = rt.bp();
            for u in 1..=m as u64 {
                for v in u..=(u + 7).min(m as u64) {
                    prop_assert_eq!(bp.lca(u, v), rt.lca(u, v));
                }
            }
        }
    }
}
