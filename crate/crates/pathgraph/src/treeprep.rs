//! Clique-tree preprocessing.
//!
//! The input tree is re-rooted as an ordinal tree: every internal node
//! puts the child with the most descendants first (its heavy child; ties
//! go to the smallest original label) and the remaining children follow
//! in ascending original label. Nodes are then relabeled by pre-order
//! rank, which makes every subtree and every heavy path a contiguous
//! label interval. Heavy paths, the heavy path tree and its levels are
//! recorded, and paths in the tree can be decomposed into heavy
//! sub-paths with the successor bookkeeping and label ranges that the
//! query structures consume.

use crate::bitseq::BPTree;
use crate::{Error, Result};

/// Rooted tree given by a parent array over original labels `1..=m`.
/// The root stores parent `0` (a self-loop on input is normalized).
#[derive(Debug, Clone)]
pub struct RawCliqueTree {
    m: u32,
    parent: Vec<u32>,
}

impl RawCliqueTree {
    pub fn new(parents: Vec<u32>) -> Result<Self> {
        let m = parents.len() as u32;
        if m == 0 {
            return Err(Error::InvalidTree(
                "tree must have at least one node".into(),
            ));
        }
        let mut parent = vec![0u32; m as usize + 1];
        let mut root = 0u32;
        for (i, &p) in parents.iter().enumerate() {
            let v = i as u32 + 1;
            if p == 0 || p == v {
                if root != 0 {
                    return Err(Error::InvalidTree(format!("two roots: {root} and {v}")));
                }
                root = v;
                parent[v as usize] = 0;
            } else if p > m {
                return Err(Error::InvalidTree(format!(
                    "parent {p} of node {v} out of range"
                )));
            } else {
                parent[v as usize] = p;
            }
        }
        if root == 0 {
            return Err(Error::InvalidTree(
                "no root (parent 0 or self) found".into(),
            ));
        }
        // Reachability from the root proves the parent array is acyclic
        // and connected.
        let mut children = vec![Vec::new(); m as usize + 1];
        for v in 1..=m {
            if v != root {
                children[parent[v as usize] as usize].push(v);
            }
        }
        let mut seen = 0u32;
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            seen += 1;
            stack.extend_from_slice(&children[v as usize]);
        }
        if seen != m {
            return Err(Error::InvalidTree(format!(
                "{} of {} nodes reachable from the root",
                seen, m
            )));
        }
        Ok(RawCliqueTree { m, parent })
    }

    pub fn node_count(&self) -> u32 {
        self.m
    }

    /// Parent of `v`, `0` for the root.
    pub fn parent_of(&self, v: u32) -> u32 {
        self.parent[v as usize]
    }

    pub fn root(&self) -> u32 {
        (1..=self.m)
            .find(|&v| self.parent[v as usize] == 0)
            .unwrap()
    }

    pub fn parents(&self) -> &[u32] {
        &self.parent
    }
}

/// Pre-order relabeled ordinal clique tree with its heavy path
/// decomposition and heavy path tree.
#[derive(Debug, Clone)]
pub struct PreparedTree {
    pub bp: BPTree,
    /// Original label -> pre-order label.
    pub relabel: Vec<u32>,
    /// Pre-order label -> original label.
    pub old_label: Vec<u32>,
    /// Heavy paths as label intervals, sorted by start; id = index + 1.
    pub heavy_paths: Vec<(u32, u32)>,
    /// Pre-order label -> heavy path id.
    pub hp_of_node: Vec<u32>,
    /// Heavy path tree over heavy path ids.
    pub hpt: RawCliqueTree,
    /// Heavy path id -> level in the heavy path tree, root level 1.
    pub hp_level: Vec<u32>,
}

/// Decomposition of a path into heavy sub-paths, ordered by the heavy
/// path order (increasing interval start). `succ11`/`succ12` index the
/// sub-paths hanging off the end node and start node of the first
/// sub-path, when they exist.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeavySubPathDecomposition {
    pub pi: Vec<(u32, u32)>,
    pub succ11: Option<usize>,
    pub succ12: Option<usize>,
}

impl HeavySubPathDecomposition {
    pub fn k(&self) -> usize {
        self.pi.len()
    }

    /// Sub-path attached by a light edge below the end node of sub-path
    /// `i` (0-based), if any.
    pub fn succ1(&self, i: usize) -> Option<usize> {
        if i == 0 {
            self.succ11
        } else if i + 1 < self.pi.len() && Some(i + 1) != self.succ12 {
            Some(i + 1)
        } else {
            None
        }
    }

    /// Sub-path attached below the start node; only the first sub-path
    /// can have one.
    pub fn succ2(&self, i: usize) -> Option<usize> {
        if i == 0 {
            self.succ12
        } else {
            None
        }
    }
}

/// The four label ranges around one heavy sub-path.
///
/// `r2` is the sub-path itself. `r3` covers the labels below its end
/// node and `r4` the remaining labels below its start node, in both
/// cases with the subtrees holding the path's own continuation punched
/// out. Punching out up to two continuation subtrees can leave `r3` in
/// three pieces (a single-node first sub-path may carry both
/// successors). Intervals are inclusive; `None` marks an absent piece.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RangeQuad {
    pub r1: Option<(u32, u32)>,
    pub r2: (u32, u32),
    pub r3: [Option<(u32, u32)>; 3],
    pub r4: [Option<(u32, u32)>; 2],
}

fn contains(r: Option<(u32, u32)>, x: u64) -> bool {
    r.map_or(false, |(lo, hi)| x >= u64::from(lo) && x <= u64::from(hi))
}

/// `[lo, hi]` minus the given disjoint subtree intervals, ascending.
fn punch<const K: usize>(lo: u64, hi: u64, holes: &[(u64, u64)]) -> [Option<(u32, u32)>; K] {
    let mut out = [None; K];
    let mut slot = 0;
    let mut cur = lo;
    let push = |from: u64, to: u64, slot: &mut usize, out: &mut [Option<(u32, u32)>; K]| {
        if from <= to {
            out[*slot] = Some((from as u32, to as u32));
            *slot += 1;
        }
    };
    for &(hs, he) in holes {
        debug_assert!(hs >= cur || cur > hi, "holes must ascend");
        push(cur, hs.saturating_sub(1).min(hi), &mut slot, &mut out);
        cur = he + 1;
    }
    push(cur, hi, &mut slot, &mut out);
    out
}

/// Heavy path decomposition plus pre-order relabeling of a raw tree.
pub fn prepare(raw: &RawCliqueTree) -> Result<PreparedTree> {
    let m = raw.node_count() as usize;
    let root = raw.root();
    let mut children: Vec<Vec<u32>> = vec![Vec::new(); m + 1];
    for v in 1..=m as u32 {
        let p = raw.parent_of(v);
        if p != 0 {
            children[p as usize].push(v);
        }
    }
    // Subtree sizes, processing children before parents.
    let mut order = Vec::with_capacity(m);
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        order.push(v);
        stack.extend_from_slice(&children[v as usize]);
    }
    let mut size = vec![1u32; m + 1];
    for &v in order.iter().rev() {
        let p = raw.parent_of(v);
        if p != 0 {
            size[p as usize] += size[v as usize];
        }
    }
    // Heavy child first (ties to the smallest label), light children in
    // ascending label order.
    for v in 1..=m as u32 {
        let ch = &mut children[v as usize];
        if ch.is_empty() {
            continue;
        }
        ch.sort_unstable();
        let heavy = *ch
            .iter()
            .max_by(|&&a, &&b| size[a as usize].cmp(&size[b as usize]).then(b.cmp(&a)))
            .unwrap();
        let pos = ch.iter().position(|&c| c == heavy).unwrap();
        ch.remove(pos);
        ch.insert(0, heavy);
    }
    // Pre-order relabel over the ordinal tree.
    let mut relabel = vec![0u32; m + 1];
    let mut old_label = vec![0u32; m + 1];
    let mut next = 0u32;
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        next += 1;
        relabel[v as usize] = next;
        old_label[next as usize] = v;
        for &c in children[v as usize].iter().rev() {
            stack.push(c);
        }
    }
    let mut children_new: Vec<Vec<u32>> = vec![Vec::new(); m + 1];
    let mut parent_new = vec![0u32; m + 1];
    let mut heavy_child_new = vec![0u32; m + 1];
    for v in 1..=m as u32 {
        let nv = relabel[v as usize];
        for &c in &children[v as usize] {
            children_new[nv as usize].push(relabel[c as usize]);
        }
        if let Some(&h) = children[v as usize].first() {
            heavy_child_new[nv as usize] = relabel[h as usize];
        }
        let p = raw.parent_of(v);
        parent_new[nv as usize] = if p == 0 { 0 } else { relabel[p as usize] };
    }
    let bp = BPTree::from_ordered_children(&children_new);
    // A node starts a heavy path iff it is the root or a light child;
    // the path runs down the chain of heavy children, which pre-order
    // makes a contiguous interval.
    let mut heavy_paths = Vec::new();
    let mut hp_of_node = vec![0u32; m + 1];
    for v in 1..=m as u32 {
        let p = parent_new[v as usize];
        if p != 0 && heavy_child_new[p as usize] == v {
            continue;
        }
        let start = v;
        let mut end = v;
        while heavy_child_new[end as usize] != 0 {
            let h = heavy_child_new[end as usize];
            debug_assert_eq!(h, end + 1, "heavy chains must be contiguous in pre-order");
            end = h;
        }
        heavy_paths.push((start, end));
    }
    heavy_paths.sort_unstable();
    for (idx, &(a, b)) in heavy_paths.iter().enumerate() {
        for v in a..=b {
            hp_of_node[v as usize] = idx as u32 + 1;
        }
    }
    // Heavy path tree: one node per heavy path, edges are light edges.
    let hp_count = heavy_paths.len();
    let mut hpt_parents = vec![0u32; hp_count];
    for (idx, &(a, _)) in heavy_paths.iter().enumerate() {
        let p = parent_new[a as usize];
        hpt_parents[idx] = if p == 0 { 0 } else { hp_of_node[p as usize] };
    }
    let hpt = RawCliqueTree::new(hpt_parents)?;
    let mut hp_level = vec![0u32; hp_count + 1];
    // Heavy path ids ascend with depth along any root path (parents have
    // smaller start labels), so one forward pass fills levels.
    for h in 1..=hp_count as u32 {
        let p = hpt.parent_of(h);
        hp_level[h as usize] = if p == 0 { 1 } else { hp_level[p as usize] + 1 };
    }
    Ok(PreparedTree {
        bp,
        relabel,
        old_label,
        heavy_paths,
        hp_of_node,
        hpt,
        hp_level,
    })
}

impl PreparedTree {
    pub fn node_count(&self) -> u64 {
        self.bp.node_count()
    }

    pub fn level_count(&self) -> u32 {
        self.hp_level.iter().copied().max().unwrap_or(0)
    }

    /// Start node of the heavy path containing `v`, from the parenthesis
    /// encoding alone: the first node of the open-parenthesis run that
    /// `v`'s heavy chain sits on.
    pub fn hp_start_node(&self, v: u64) -> u64 {
        let bits = self.bp.bits();
        let i = bits.select(true, v);
        let j = bits.select(false, bits.rank(false, i));
        self.bp.label_at(j + 1)
    }

    pub fn lca(&self, u: u64, v: u64) -> u64 {
        self.bp.lca(u, v)
    }

    pub fn rmost_leaf(&self, v: u64) -> u64 {
        self.bp.rmost_leaf(v)
    }

    /// Parent label with `0` for the root.
    pub fn parent0(&self, v: u64) -> u64 {
        self.bp.parent(v).unwrap_or(0)
    }

    fn climb(&self, p: u64, x: u64) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        let mut cur = x;
        loop {
            let u = self.hp_start_node(cur);
            if u >= p {
                out.push((u as u32, cur as u32));
                let par = self.parent0(u);
                if par < p || par == 0 {
                    break;
                }
                cur = par;
            } else {
                out.push((p as u32, cur as u32));
                break;
            }
        }
        out.reverse();
        out
    }

    /// Decomposes the path `l..r` (pre-order labels, `l <= r`) into heavy
    /// sub-paths ordered by interval start, with first-sub-path successor
    /// links.
    pub fn compute_pi(&self, l: u64, r: u64) -> HeavySubPathDecomposition {
        let m = self.node_count();
        assert!(l >= 1 && r <= m && l <= r, "need 1 <= l <= r <= {m}");
        let p = self.lca(l, r);
        if l != p {
            // Two branches meet at p; the branch toward l owns p, the
            // other branch's climb re-reports p and is trimmed.
            let left = self.climb(p, l);
            let mut right = self.climb(p, r);
            debug_assert_eq!(right.first(), Some(&(p as u32, p as u32)));
            right.remove(0);
            debug_assert!(!right.is_empty());
            let succ11 = (left.len() >= 2).then_some(1);
            let succ12 = Some(left.len());
            let mut pi = left;
            pi.extend(right);
            HeavySubPathDecomposition { pi, succ11, succ12 }
        } else {
            let pi = self.climb(l, r);
            let succ11 = (pi.len() >= 2).then_some(1);
            if let Some(j) = succ11 {
                debug_assert_eq!(self.parent0(u64::from(pi[j].0)), u64::from(pi[0].1));
            }
            HeavySubPathDecomposition {
                pi,
                succ11,
                succ12: None,
            }
        }
    }

    /// The four ranges around sub-path `i` (0-based) of `dec`.
    pub fn ranges(&self, dec: &HeavySubPathDecomposition, i: usize) -> RangeQuad {
        assert!(i < dec.k(), "sub-path index {i} out of range");
        let (a, b) = dec.pi[i];
        let (a, b) = (u64::from(a), u64::from(b));
        let rl = |v: u64| self.rmost_leaf(v);
        let r1 = if i == 0 && a > 1 {
            Some((1, a as u32 - 1))
        } else {
            None
        };
        let rlb = rl(b);
        let rla = rl(a);
        // Continuation subtrees: the first successor hangs below the end
        // node; the second hangs below the start node, which lands in
        // the below-end region exactly when the sub-path is one node.
        let s1 = dec.succ1(i).map(|j| u64::from(dec.pi[j].0));
        let s2 = dec.succ2(i).map(|j| u64::from(dec.pi[j].0));
        let mut holes_b: Vec<(u64, u64)> = Vec::with_capacity(2);
        let mut holes_a: Vec<(u64, u64)> = Vec::with_capacity(1);
        if let Some(an) = s1 {
            holes_b.push((an, rl(an)));
        }
        if let Some(az) = s2 {
            if a == b {
                holes_b.push((az, rl(az)));
            } else {
                holes_a.push((az, rl(az)));
            }
        }
        holes_b.sort_unstable();
        RangeQuad {
            r1,
            r2: (a as u32, b as u32),
            r3: punch(b + 1, rlb, &holes_b),
            r4: punch(rlb + 1, rla, &holes_a),
        }
    }

    /// True iff the first node of `q = (s, t)` lying on the decomposed
    /// path falls inside sub-path `i`. Exactly one `i` answers true when
    /// the paths intersect; none when they are disjoint.
    pub fn check_alpha(&self, dec: &HeavySubPathDecomposition, i: usize, q: (u64, u64)) -> bool {
        let (s, t) = q;
        debug_assert!(s <= t);
        let quad = self.ranges(dec, i);
        let (a, b) = dec.pi[i];
        let (a, b) = (u64::from(a), u64::from(b));
        if i == 0 && contains(quad.r1, s) {
            let rl_a = self.rmost_leaf(a);
            if t >= a && t <= rl_a {
                return true;
            }
        }
        if s >= a && s <= b {
            return true;
        }
        if quad.r3.iter().any(|&r| contains(r, s)) {
            return self.lca(s, t) <= b;
        }
        if quad.r4.iter().any(|&r| contains(r, s)) {
            return self.lca(s, t) < b;
        }
        false
    }

    /// Depth of the heavy path tree (levels are 1-based).
    pub fn hpt_depth(&self) -> u32 {
        self.level_count()
    }
}

/// Path endpoint tuples in pre-order labels, sorted by `(l, r, input
/// index)`, remembering where each input path went.
#[derive(Debug, Clone)]
pub struct PathSet {
    /// Sorted endpoint tuples, `l <= r`.
    pub endpoints: Vec<(u32, u32)>,
    /// Sorted position (0-based) -> input position (0-based).
    pub input_of_sorted: Vec<u32>,
    /// Input position (0-based) -> sorted position (0-based).
    pub sorted_of_input: Vec<u32>,
}

impl PathSet {
    /// Relabels endpoint pairs given in original labels and sorts them.
    pub fn from_original(pt: &PreparedTree, paths: &[(u32, u32)]) -> Result<Self> {
        let m = pt.node_count() as u32;
        let mut tagged: Vec<(u32, u32, u32)> = Vec::with_capacity(paths.len());
        for (idx, &(x, y)) in paths.iter().enumerate() {
            for e in [x, y] {
                if e < 1 || e > m {
                    return Err(Error::EndpointOutOfRange(e, m));
                }
            }
            let (nx, ny) = (pt.relabel[x as usize], pt.relabel[y as usize]);
            let (l, r) = if nx <= ny { (nx, ny) } else { (ny, nx) };
            tagged.push((l, r, idx as u32));
        }
        tagged.sort_unstable();
        let endpoints = tagged.iter().map(|&(l, r, _)| (l, r)).collect();
        let input_of_sorted: Vec<u32> = tagged.iter().map(|&(_, _, i)| i).collect();
        let mut sorted_of_input = vec![0u32; paths.len()];
        for (s, &i) in input_of_sorted.iter().enumerate() {
            sorted_of_input[i as usize] = s as u32;
        }
        Ok(PathSet {
            endpoints,
            input_of_sorted,
            sorted_of_input,
        })
    }

    pub fn len(&self) -> usize {
        self.endpoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.endpoints.is_empty()
    }
}

/// `ceil(log2(x))` with `ceil_log2(1) == 0`.
pub fn ceil_log2(x: u64) -> u32 {
    if x <= 1 {
        0
    } else {
        64 - (x - 1).leading_zeros()
    }
}
