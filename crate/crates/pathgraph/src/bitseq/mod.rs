//! Rank/select bit vectors and differential-coded non-decreasing sequences.
//!
//! Positions, ordinals and stored values are all 1-based; `0` is the
//! universal "none/invalid" sentinel, so `select` on an out-of-range
//! ordinal returns `0` rather than failing. This matches the convention
//! used by every structure built on top of these primitives.
//!
//! The rank directory is a two-level block scheme: an absolute `u64`
//! count per superblock of [`SUPER_BITS`] bits and a relative `u16` count
//! per block of [`BLOCK_BITS`] bits, finished by an in-block popcount
//! scan. Select is a binary search over the same directories.

mod bp;

pub use bp::BPTree;

/// Bits per rank block (`u16` relative counts must fit a superblock).
pub const BLOCK_BITS: u64 = 512;
/// Bits per rank superblock.
pub const SUPER_BITS: u64 = 4096;

const WORD_BITS: u64 = 64;

/// Immutable bit vector with rank/select support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitVector {
    words: Vec<u64>,
    len: u64,
    /// Ones before each superblock, absolute.
    supers: Vec<u64>,
    /// Ones before each block, relative to its superblock.
    blocks: Vec<u16>,
    ones: u64,
}

impl BitVector {
    pub fn from_bools(bits: &[bool]) -> Self {
        let mut b = BitBuilder::with_capacity(bits.len() as u64);
        for &bit in bits {
            b.push(bit);
        }
        b.finish()
    }

    /// Parses a string of `'0'`/`'1'` characters, leftmost bit first.
    pub fn from_bit_str(s: &str) -> Self {
        let mut b = BitBuilder::with_capacity(s.len() as u64);
        for c in s.chars() {
            match c {
                '0' => b.push(false),
                '1' => b.push(true),
                _ => panic!("bit string may only contain 0 and 1"),
            }
        }
        b.finish()
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn count_ones(&self) -> u64 {
        self.ones
    }

    pub fn count_zeros(&self) -> u64 {
        self.len - self.ones
    }

    /// Bit at 1-based position `pos`.
    pub fn get(&self, pos: u64) -> bool {
        assert!(pos >= 1 && pos <= self.len, "position {pos} out of range");
        let i = pos - 1;
        (self.words[(i / WORD_BITS) as usize] >> (i % WORD_BITS)) & 1 == 1
    }

    /// Number of ones among the first `i` bits (positions `1..=i`).
    fn prefix_ones(&self, i: u64) -> u64 {
        debug_assert!(i <= self.len);
        if i == 0 {
            return 0;
        }
        let last_bit = i - 1;
        let block = last_bit / BLOCK_BITS;
        let sup = last_bit / SUPER_BITS;
        let mut acc = self.supers[sup as usize] + u64::from(self.blocks[block as usize]);
        let word_start = (block * BLOCK_BITS / WORD_BITS) as usize;
        let last_word = (last_bit / WORD_BITS) as usize;
        for w in word_start..last_word {
            acc += self.words[w].count_ones() as u64;
        }
        let rem = i - last_word as u64 * WORD_BITS;
        if rem > 0 {
            let mask = if rem == 64 { !0u64 } else { (1u64 << rem) - 1 };
            acc += (self.words[last_word] & mask).count_ones() as u64;
        }
        acc
    }

    /// Count of symbol `b` in positions `1..=i`; `rank(_, 0) == 0`.
    ///
    /// Panics if `i` exceeds the length.
    pub fn rank(&self, b: bool, i: u64) -> u64 {
        assert!(
            i <= self.len,
            "rank position {i} exceeds length {}",
            self.len
        );
        let ones = self.prefix_ones(i);
        if b {
            ones
        } else {
            i - ones
        }
    }

    /// Position of the `i`-th occurrence of `b`, or `0` when there is no
    /// such occurrence (including `i == 0`).
    pub fn select(&self, b: bool, i: u64) -> u64 {
        let total = if b { self.ones } else { self.len - self.ones };
        if i == 0 || i > total {
            return 0;
        }
        // Superblock search: largest superblock whose prefix count < i.
        let count_before = |sup: usize| -> u64 {
            let bits = sup as u64 * SUPER_BITS;
            if b {
                self.supers[sup]
            } else {
                bits - self.supers[sup]
            }
        };
        let (mut lo, mut hi) = (0usize, self.supers.len() - 1);
        while lo < hi {
            let mid = (lo + hi + 1) / 2;
            if count_before(mid) < i {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        let sup = lo;
        let block_lo = sup * (SUPER_BITS / BLOCK_BITS) as usize;
        let block_hi = (block_lo + (SUPER_BITS / BLOCK_BITS) as usize).min(self.blocks.len());
        let block_count_before = |blk: usize| -> u64 {
            let bits = blk as u64 * BLOCK_BITS;
            if b {
                self.supers[sup] + u64::from(self.blocks[blk])
            } else {
                bits - self.supers[sup] - u64::from(self.blocks[blk])
            }
        };
        let (mut lo, mut hi) = (block_lo, block_hi - 1);
        while lo < hi {
            let mid = (lo + hi + 1) / 2;
            if block_count_before(mid) < i {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        let blk = lo;
        let mut remaining = i - block_count_before(blk);
        let mut word = (blk as u64 * BLOCK_BITS / WORD_BITS) as usize;
        loop {
            let w = if b {
                self.words[word]
            } else {
                !self.words[word]
            };
            let cnt = w.count_ones() as u64;
            if cnt >= remaining {
                let mut w = w;
                for _ in 1..remaining {
                    w &= w - 1;
                }
                return word as u64 * WORD_BITS + w.trailing_zeros() as u64 + 1;
            }
            remaining -= cnt;
            word += 1;
        }
    }

    /// Raw payload size in bits.
    pub fn core_bits(&self) -> u64 {
        self.len
    }

    /// Directory overhead in bits (rank superblocks and blocks).
    pub fn dir_bits(&self) -> u64 {
        (self.supers.len() * 64 + self.blocks.len() * 16) as u64
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    pub(crate) fn rank_dirs(&self) -> (&[u64], &[u16]) {
        (&self.supers, &self.blocks)
    }

    pub(crate) fn from_words(words: Vec<u64>, len: u64) -> Self {
        assert!(words.len() as u64 * WORD_BITS >= len);
        let mut b = BitBuilder { words, len };
        // Clear any stray bits past the end so equality and serialization
        // are canonical.
        if len % WORD_BITS != 0 {
            if let Some(last) = b.words.last_mut() {
                *last &= (1u64 << (len % WORD_BITS)) - 1;
            }
        }
        b.finish()
    }
}

/// Incremental builder for [`BitVector`].
#[derive(Debug, Default)]
pub struct BitBuilder {
    words: Vec<u64>,
    len: u64,
}

impl BitBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(bits: u64) -> Self {
        Self {
            words: Vec::with_capacity((bits / WORD_BITS + 1) as usize),
            len: 0,
        }
    }

    pub fn push(&mut self, bit: bool) {
        let word = (self.len / WORD_BITS) as usize;
        if word == self.words.len() {
            self.words.push(0);
        }
        if bit {
            self.words[word] |= 1u64 << (self.len % WORD_BITS);
        }
        self.len += 1;
    }

    /// Appends `count` copies of `bit`.
    pub fn push_run(&mut self, bit: bool, count: u64) {
        for _ in 0..count {
            self.push(bit);
        }
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn finish(self) -> BitVector {
        let words = self.words;
        let len = self.len;
        let n_blocks = (len / BLOCK_BITS + 1) as usize;
        let n_supers = (len / SUPER_BITS + 1) as usize;
        let mut supers = vec![0u64; n_supers];
        let mut blocks = vec![0u16; n_blocks];
        let mut acc = 0u64;
        let mut sup_acc = 0u64;
        for blk in 0..n_blocks {
            if (blk as u64 * BLOCK_BITS) % SUPER_BITS == 0 {
                let sup = blk as u64 * BLOCK_BITS / SUPER_BITS;
                supers[sup as usize] = acc;
                sup_acc = acc;
            }
            blocks[blk] = (acc - sup_acc) as u16;
            let word_lo = blk as u64 * BLOCK_BITS / WORD_BITS;
            let word_hi = ((blk as u64 + 1) * BLOCK_BITS / WORD_BITS).min(words.len() as u64);
            for w in word_lo..word_hi {
                acc += words[w as usize].count_ones() as u64;
            }
        }
        // Stray bits past `len` were never set: the builder only writes
        // pushed bits.
        let ones = {
            let mut total = 0u64;
            for &w in &words {
                total += w.count_ones() as u64;
            }
            total
        };
        BitVector {
            words,
            len,
            supers,
            blocks,
            ones,
        }
    }
}

/// Non-decreasing positive integer sequence, differential unary coded.
///
/// Value `v_1` is written as `v_1` ones and a zero, each later `v_i` as
/// `v_i - v_{i-1}` ones and a zero, so the payload is `n + v_n` bits.
/// `access` is `rank(B, 1, select(B, 0, i))` on the coded bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonDecSeq {
    bits: BitVector,
    n: u64,
    max: u64,
}

impl NonDecSeq {
    pub fn new(values: &[u32]) -> Self {
        let mut b = BitBuilder::new();
        let mut prev = 0u32;
        for &v in values {
            assert!(v >= 1, "values must be positive");
            assert!(v >= prev, "values must be non-decreasing");
            b.push_run(true, u64::from(v - prev));
            b.push(false);
            prev = v;
        }
        NonDecSeq {
            bits: b.finish(),
            n: values.len() as u64,
            max: u64::from(prev),
        }
    }

    pub fn len(&self) -> u64 {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Largest stored value (0 when empty).
    pub fn max_value(&self) -> u64 {
        self.max
    }

    /// The `i`-th stored value, `1 <= i <= n`.
    pub fn access(&self, i: u64) -> u64 {
        assert!(
            i >= 1 && i <= self.n,
            "index {i} out of range [1, {}]",
            self.n
        );
        self.bits.rank(true, self.bits.select(false, i))
    }

    /// Number of stored values `<= x`.
    pub fn count_le(&self, x: u64) -> u64 {
        if x == 0 || self.n == 0 {
            return 0;
        }
        if x >= self.max {
            return self.n;
        }
        // Zeros before the (x+1)-th one; x + 1 <= max so the one exists.
        self.bits.rank(false, self.bits.select(true, x + 1))
    }

    /// 1-based index range `[j, j']` of values inside `[lo, hi]`; empty
    /// when `j > j'` (in particular for vacuous `lo > hi`).
    pub fn index_range(&self, lo: u64, hi: u64) -> (u64, u64) {
        if lo > hi {
            return (1, 0);
        }
        let j = self.count_le(lo.saturating_sub(1)) + 1;
        let jp = self.count_le(hi);
        (j, jp)
    }

    pub fn core_bits(&self) -> u64 {
        self.bits.core_bits()
    }

    pub fn dir_bits(&self) -> u64 {
        self.bits.dir_bits()
    }

    pub(crate) fn inner(&self) -> &BitVector {
        &self.bits
    }

    pub(crate) fn from_parts(bits: BitVector, n: u64) -> Self {
        let max = bits.count_ones();
        assert_eq!(
            bits.count_zeros(),
            n,
            "unary coding must hold one zero per value"
        );
        NonDecSeq { bits, n, max }
    }
}
