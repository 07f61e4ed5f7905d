//! Framed binary serialization.
//!
//! Every primitive writes a frame: a four-byte magic tag, a version
//! byte, the bit length as little-endian `u64`, the raw bit words, then
//! a directory section. Loads rebuild the rank directories from the raw
//! words and reject blobs whose stored directories disagree, which
//! doubles as an integrity check. Builds are deterministic, so saving a
//! loaded structure reproduces the original bytes exactly.

use crate::bitseq::{BPTree, BitVector, NonDecSeq};
use crate::interval::IntervalGraph;
use crate::level::LevelStructure;
use crate::succinct::SuccinctPathGraph;
use crate::treeprep::{PreparedTree, RawCliqueTree};
use crate::wavelet::WaveletTree;
use crate::{Error, Result};

const MAGIC_BITVEC: &[u8; 4] = b"PGBV";
const MAGIC_NONDEC: &[u8; 4] = b"PGNS";
const MAGIC_BP: &[u8; 4] = b"PGBP";
const MAGIC_WAVELET: &[u8; 4] = b"PGWT";
const MAGIC_PREPARED: &[u8; 4] = b"PGPT";
const MAGIC_INTERVAL: &[u8; 4] = b"PGIG";
const MAGIC_SUCCINCT: &[u8; 4] = b"PGS1";
const MAGIC_LEVEL: &[u8; 4] = b"PGL2";
const VERSION: u8 = 1;

#[derive(Default)]
struct Writer {
    buf: Vec<u8>,
}

impl Writer {
    fn magic(&mut self, tag: &[u8; 4]) {
        self.buf.extend_from_slice(tag);
        self.buf.push(VERSION);
    }

    fn u16(&mut self, v: u16) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }

    fn u32(&mut self, v: u32) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }

    fn u64(&mut self, v: u64) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }

    fn u32s(&mut self, vs: &[u32]) {
        self.u64(vs.len() as u64);
        for &v in vs {
            self.u32(v);
        }
    }

    fn pairs(&mut self, vs: &[(u32, u32)]) {
        self.u64(vs.len() as u64);
        for &(a, b) in vs {
            self.u32(a);
            self.u32(b);
        }
    }

    fn bitvec(&mut self, b: &BitVector) {
        self.magic(MAGIC_BITVEC);
        self.u64(b.len());
        for &w in b.words() {
            self.u64(w);
        }
        let (supers, blocks) = b.rank_dirs();
        self.u64(supers.len() as u64);
        for &s in supers {
            self.u64(s);
        }
        self.u64(blocks.len() as u64);
        for &blk in blocks {
            self.u16(blk);
        }
    }

    fn nondec(&mut self, s: &NonDecSeq) {
        self.magic(MAGIC_NONDEC);
        self.u64(s.len());
        self.bitvec(s.inner());
    }

    fn wavelet(&mut self, w: &WaveletTree) {
        self.magic(MAGIC_WAVELET);
        self.u64(w.len());
        self.u32(w.level_count() as u32);
        for level in w.level_bits() {
            self.bitvec(level);
        }
    }

    fn prepared(&mut self, pt: &PreparedTree) {
        self.magic(MAGIC_PREPARED);
        self.u32(pt.node_count() as u32);
        self.magic(MAGIC_BP);
        self.bitvec(pt.bp.bits());
        self.u32s(&pt.relabel);
        self.u32s(&pt.old_label);
        self.pairs(&pt.heavy_paths);
        self.u32s(&pt.hp_of_node);
        self.u32s(&pt.hpt.parents()[1..]);
        self.u32s(&pt.hp_level);
    }

    fn interval_graph(&mut self, g: &IntervalGraph) {
        self.magic(MAGIC_INTERVAL);
        let iv: Vec<(u32, u32)> = (1..=g.vertex_count()).map(|u| g.interval(u)).collect();
        self.pairs(&iv);
    }

    fn lists(&mut self, lists: &[Vec<u32>]) {
        self.u64(lists.len() as u64);
        for l in lists {
            self.u32s(l);
        }
    }
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn new(buf: &'a [u8]) -> Self {
        Reader { buf, pos: 0 }
    }

    fn take(&mut self, len: usize) -> Result<&'a [u8]> {
        if self.pos + len > self.buf.len() {
            return Err(Error::Blob("truncated blob".into()));
        }
        let s = &self.buf[self.pos..self.pos + len];
        self.pos += len;
        Ok(s)
    }

    fn magic(&mut self, tag: &[u8; 4]) -> Result<()> {
        let got = self.take(4)?;
        if got != tag {
            return Err(Error::Blob(format!(
                "expected section {:?}, found {:?}",
                String::from_utf8_lossy(tag),
                String::from_utf8_lossy(got)
            )));
        }
        let ver = self.take(1)?[0];
        if ver != VERSION {
            return Err(Error::Blob(format!("unsupported version {ver}")));
        }
        Ok(())
    }

    fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    /// Length prefix bounded by what the remaining bytes can hold, so a
    /// corrupt header cannot trigger an oversized allocation.
    fn len_elems(&mut self, elem_bytes: u64) -> Result<usize> {
        let n = self.u64()?;
        let remaining = (self.buf.len() - self.pos) as u64;
        if n.checked_mul(elem_bytes).map_or(true, |need| need > remaining) {
            return Err(Error::Blob(format!(
                "section length {n} exceeds the {remaining} bytes left"
            )));
        }
        Ok(n as usize)
    }

    fn u32s(&mut self) -> Result<Vec<u32>> {
        let n = self.len_elems(4)?;
        (0..n).map(|_| self.u32()).collect()
    }

    fn pairs(&mut self) -> Result<Vec<(u32, u32)>> {
        let n = self.len_elems(8)?;
        (0..n).map(|_| Ok((self.u32()?, self.u32()?))).collect()
    }

    fn bitvec(&mut self) -> Result<BitVector> {
        self.magic(MAGIC_BITVEC)?;
        let len = self.u64()?;
        if len / 8 > (self.buf.len() - self.pos) as u64 {
            return Err(Error::Blob("bit length exceeds the bytes left".into()));
        }
        let n_words = (len as usize).div_ceil(64);
        let mut words = Vec::with_capacity(n_words);
        for _ in 0..n_words {
            words.push(self.u64()?);
        }
        let b = BitVector::from_words(words, len);
        let (supers, blocks) = b.rank_dirs();
        let n_supers = self.len_elems(8)?;
        if n_supers != supers.len() {
            return Err(Error::Blob("rank directory shape mismatch".into()));
        }
        for s in supers {
            if self.u64()? != *s {
                return Err(Error::Blob("rank directory corrupt".into()));
            }
        }
        let n_blocks = self.len_elems(2)?;
        if n_blocks != blocks.len() {
            return Err(Error::Blob("rank directory shape mismatch".into()));
        }
        for b in blocks {
            if self.u16()? != *b {
                return Err(Error::Blob("rank directory corrupt".into()));
            }
        }
        Ok(b)
    }

    fn nondec(&mut self) -> Result<NonDecSeq> {
        self.magic(MAGIC_NONDEC)?;
        let n = self.u64()?;
        let bits = self.bitvec()?;
        if bits.count_zeros() != n {
            return Err(Error::Blob("coded sequence length mismatch".into()));
        }
        Ok(NonDecSeq::from_parts(bits, n))
    }

    fn wavelet(&mut self) -> Result<WaveletTree> {
        self.magic(MAGIC_WAVELET)?;
        let n = self.u64()?;
        let levels = self.u32()? as usize;
        let mut bits = Vec::with_capacity(levels);
        for _ in 0..levels {
            let level = self.bitvec()?;
            if level.len() != n {
                return Err(Error::Blob("wavelet level length mismatch".into()));
            }
            bits.push(level);
        }
        let expect = if n <= 1 {
            0
        } else {
            64 - (n - 1).leading_zeros() as usize
        };
        if levels != expect {
            return Err(Error::Blob("wavelet level count mismatch".into()));
        }
        Ok(WaveletTree::from_level_bits(n, bits))
    }

    fn prepared(&mut self) -> Result<PreparedTree> {
        self.magic(MAGIC_PREPARED)?;
        let m = self.u32()?;
        self.magic(MAGIC_BP)?;
        let bits = self.bitvec()?;
        if bits.len() != 2 * u64::from(m) || bits.count_ones() != u64::from(m) {
            return Err(Error::Blob("parenthesis section shape mismatch".into()));
        }
        let bp = BPTree::from_bits(bits);
        let relabel = self.u32s()?;
        let old_label = self.u32s()?;
        let heavy_paths = self.pairs()?;
        let hp_of_node = self.u32s()?;
        let hpt_parents = self.u32s()?;
        let hp_level = self.u32s()?;
        if relabel.len() != m as usize + 1
            || old_label.len() != m as usize + 1
            || hp_of_node.len() != m as usize + 1
            || hpt_parents.len() != heavy_paths.len()
            || hp_level.len() != heavy_paths.len() + 1
        {
            return Err(Error::Blob("prepared tree arrays shape mismatch".into()));
        }
        let hpt = RawCliqueTree::new(hpt_parents).map_err(|e| Error::Blob(e.to_string()))?;
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

    fn interval_graph(&mut self) -> Result<IntervalGraph> {
        self.magic(MAGIC_INTERVAL)?;
        let iv = self.pairs()?;
        IntervalGraph::build(&iv).map_err(|e| Error::Blob(e.to_string()))
    }

    fn lists(&mut self) -> Result<Vec<Vec<u32>>> {
        let n = self.len_elems(8)?;
        (0..n).map(|_| self.u32s()).collect()
    }

    fn done(&self) -> Result<()> {
        if self.pos != self.buf.len() {
            return Err(Error::Blob(format!(
                "{} trailing bytes after final section",
                self.buf.len() - self.pos
            )));
        }
        Ok(())
    }
}

fn check_perms(fwd: &[u32], inv: &[u32]) -> Result<()> {
    let n = fwd.len();
    let ok = inv.len() == n
        && fwd
            .iter()
            .enumerate()
            .all(|(s, &i)| (i as usize) < n && inv[i as usize] as usize == s);
    if ok {
        Ok(())
    } else {
        Err(Error::Blob(
            "index permutations are not mutual inverses".into(),
        ))
    }
}

/// Serializes the wavelet-tree representation.
pub fn save_succinct(g: &SuccinctPathGraph) -> Vec<u8> {
    let mut w = Writer::default();
    w.magic(MAGIC_SUCCINCT);
    w.u32(g.n);
    w.u64(g.d_threshold);
    w.prepared(&g.pt);
    w.nondec(&g.f);
    w.nondec(&g.j);
    w.wavelet(&g.s);
    w.bitvec(&g.d);
    w.u32s(&g.input_of_sorted);
    w.u32s(&g.sorted_of_input);
    w.buf
}

pub fn load_succinct(buf: &[u8]) -> Result<SuccinctPathGraph> {
    let mut r = Reader::new(buf);
    let g = read_succinct(&mut r)?;
    r.done()?;
    Ok(g)
}

fn read_succinct(r: &mut Reader) -> Result<SuccinctPathGraph> {
    r.magic(MAGIC_SUCCINCT)?;
    let n = r.u32()?;
    let d_threshold = r.u64()?;
    let pt = r.prepared()?;
    let f = r.nondec()?;
    let j = r.nondec()?;
    let s = r.wavelet()?;
    let d = r.bitvec()?;
    let input_of_sorted = r.u32s()?;
    let sorted_of_input = r.u32s()?;
    if f.len() != u64::from(n)
        || j.len() != u64::from(n)
        || s.len() != u64::from(n)
        || d.len() != u64::from(n)
        || input_of_sorted.len() != n as usize
        || sorted_of_input.len() != n as usize
    {
        return Err(Error::Blob("component sizes disagree with header".into()));
    }
    check_perms(&input_of_sorted, &sorted_of_input)?;
    Ok(SuccinctPathGraph {
        pt,
        f,
        j,
        s,
        d,
        d_threshold,
        input_of_sorted,
        sorted_of_input,
        n,
    })
}

/// Serializes the level-decomposed representation. Integer arrays are
/// fixed-width little-endian as declared by the frame headers.
pub fn save_level(g: &LevelStructure) -> Vec<u8> {
    let mut w = Writer::default();
    w.magic(MAGIC_LEVEL);
    w.u32(g.path_count_total());
    w.u32(g.node_count() as u32);
    w.u32(g.k_levels);
    w.prepared(&g.pt);
    w.pairs(&g.endpoints);
    w.u32s(&g.input_of_sorted);
    w.u32s(&g.sorted_of_input);
    w.pairs(&g.span);
    w.u64(g.pit.len() as u64);
    for rec in &g.pit {
        w.u32(rec[0]);
        w.u32(rec[1]);
    }
    w.lists(&g.label_to_path);
    w.u64(g.graphs.len() as u64);
    for graph in &g.graphs {
        w.interval_graph(graph);
    }
    w.lists(&g.lca_paths);
    w.u64(g.light_slots.len() as u64);
    for slots in &g.light_slots {
        w.u64(slots.len() as u64);
        for (child, list) in slots {
            w.u32(*child);
            w.u32s(list);
        }
    }
    w.u32s(&g.deg);
    w.buf
}

pub fn load_level(buf: &[u8]) -> Result<LevelStructure> {
    let mut r = Reader::new(buf);
    let g = read_level(&mut r)?;
    r.done()?;
    Ok(g)
}

fn read_level(r: &mut Reader) -> Result<LevelStructure> {
    r.magic(MAGIC_LEVEL)?;
    let n = r.u32()? as usize;
    let m = r.u32()?;
    let k_levels = r.u32()?;
    let pt = r.prepared()?;
    if pt.node_count() != u64::from(m) {
        return Err(Error::Blob("node count disagrees with header".into()));
    }
    let endpoints = r.pairs()?;
    let input_of_sorted = r.u32s()?;
    let sorted_of_input = r.u32s()?;
    let span = r.pairs()?;
    let pit_len = r.len_elems(8)?;
    let mut pit = Vec::with_capacity(pit_len);
    for _ in 0..pit_len {
        pit.push([r.u32()?, r.u32()?]);
    }
    let label_to_path = r.lists()?;
    let n_graphs = r.len_elems(8)?;
    let graphs = (0..n_graphs)
        .map(|_| r.interval_graph())
        .collect::<Result<Vec<_>>>()?;
    let lca_paths = r.lists()?;
    let n_slots = r.len_elems(8)?;
    let mut light_slots = Vec::with_capacity(n_slots);
    for _ in 0..n_slots {
        let k = r.len_elems(8)?;
        let mut slots = Vec::with_capacity(k);
        for _ in 0..k {
            let child = r.u32()?;
            let list = r.u32s()?;
            slots.push((child, list));
        }
        light_slots.push(slots);
    }
    let deg = r.u32s()?;
    if endpoints.len() != n
        || input_of_sorted.len() != n
        || sorted_of_input.len() != n
        || span.len() != n
        || pit.len() != n * k_levels as usize
        || label_to_path.len() != k_levels as usize
        || graphs.len() != k_levels as usize
        || deg.len() != n
    {
        return Err(Error::Blob("component sizes disagree with header".into()));
    }
    check_perms(&input_of_sorted, &sorted_of_input)?;
    Ok(LevelStructure {
        pt,
        endpoints,
        input_of_sorted,
        sorted_of_input,
        k_levels,
        span,
        pit,
        label_to_path,
        graphs,
        lca_paths,
        light_slots,
        deg,
    })
}

/// Either representation, loaded by magic tag.
pub enum LoadedGraph {
    Succinct(SuccinctPathGraph),
    Level(LevelStructure),
}

pub fn load_any(buf: &[u8]) -> Result<LoadedGraph> {
    if buf.len() < 4 {
        return Err(Error::Blob("blob too short".into()));
    }
    match &buf[..4] {
        t if t == MAGIC_SUCCINCT => Ok(LoadedGraph::Succinct(load_succinct(buf)?)),
        t if t == MAGIC_LEVEL => Ok(LoadedGraph::Level(load_level(buf)?)),
        t => Err(Error::Blob(format!(
            "unknown blob tag {:?}",
            String::from_utf8_lossy(t)
        ))),
    }
}

impl LoadedGraph {
    pub fn kind(&self) -> &'static str {
        match self {
            LoadedGraph::Succinct(_) => "succinct",
            LoadedGraph::Level(_) => "level",
        }
    }

    pub fn path_count(&self) -> u32 {
        match self {
            LoadedGraph::Succinct(g) => g.path_count_total(),
            LoadedGraph::Level(g) => g.path_count_total(),
        }
    }

    /// Adjacency in input path indices (1-based).
    pub fn adjacent_input(&self, i: u32, j: u32) -> bool {
        match self {
            LoadedGraph::Succinct(g) => g.adjacency(g.sorted_of(i - 1), g.sorted_of(j - 1)),
            LoadedGraph::Level(g) => g.adjacency(g.sorted_of(i - 1), g.sorted_of(j - 1)),
        }
    }

    /// Neighbours in input path indices (1-based), ascending.
    pub fn neighbours_input(&self, i: u32) -> Vec<u32> {
        let mut out: Vec<u32> = match self {
            LoadedGraph::Succinct(g) => g
                .neighbourhood(g.sorted_of(i - 1))
                .into_iter()
                .map(|q| g.input_of(q) + 1)
                .collect(),
            LoadedGraph::Level(g) => g
                .neighbourhood(g.sorted_of(i - 1))
                .into_iter()
                .map(|q| g.input_of(q) + 1)
                .collect(),
        };
        out.sort_unstable();
        out
    }

    pub fn degree_input(&self, i: u32) -> u64 {
        match self {
            LoadedGraph::Succinct(g) => g.degree(g.sorted_of(i - 1)),
            LoadedGraph::Level(g) => g.degree(g.sorted_of(i - 1)),
        }
    }
}
