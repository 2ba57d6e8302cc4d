//! Sliding-window class counters over alphabet-index encoded words.
//!
//! Each counter keeps an O(1)-updatable key for the current window and a
//! set of keys seen so far. [`scan`] drives a counter across a prefix and
//! applies the doubling-stability rule.

use rustc_hash::{FxHashMap, FxHashSet};

/// Smallest prefix length considered for windows of length `n`.
pub(crate) fn base_len(n: usize) -> usize {
    (4 * n).max(4096)
}

pub(crate) trait Classes {
    /// Loads the window starting at 0.
    fn start(&mut self, w: &[u16], n: usize);
    /// Moves from the window at `i - 1` to the one at `i`.
    fn step(&mut self, w: &[u16], n: usize, i: usize);
    /// Records the current window, which starts at `i`.
    fn record(&mut self, w: &[u16], n: usize, i: usize);
    fn count(&self) -> usize;
}

#[derive(Debug)]
pub(crate) struct Scan<C> {
    pub classes: C,
    pub stable: bool,
    /// Prefix length the stability rule wants next when not stable.
    pub needed: usize,
}

/// Scans windows of length `n >= 1`.
///
/// Counts are sampled at prefix lengths `L, 2L, 4L, ...` with
/// `L = base_len(n)`; the scan is stable once three consecutive samples
/// agree. With `exact`, `w` is the whole word and every window is taken.
pub(crate) fn scan<C: Classes>(w: &[u16], n: usize, mut classes: C, exact: bool) -> Scan<C> {
    debug_assert!(n >= 1);
    if w.len() < n {
        return Scan {
            classes,
            stable: exact,
            needed: base_len(n),
        };
    }
    classes.start(w, n);
    classes.record(w, n, 0);
    let mut next = 1;
    let mut run = |limit: usize, classes: &mut C| {
        while next + n <= limit {
            classes.step(w, n, next);
            classes.record(w, n, next);
            next += 1;
        }
    };
    if exact {
        run(w.len(), &mut classes);
        return Scan {
            classes,
            stable: true,
            needed: w.len(),
        };
    }
    let mut checkpoint = base_len(n);
    let mut history: Vec<usize> = Vec::new();
    loop {
        if checkpoint > w.len() {
            run(w.len(), &mut classes);
            return Scan {
                classes,
                stable: false,
                needed: checkpoint,
            };
        }
        run(checkpoint, &mut classes);
        history.push(classes.count());
        let h = history.len();
        if h >= 3 && history[h - 1] == history[h - 2] && history[h - 2] == history[h - 3] {
            return Scan {
                classes,
                stable: true,
                needed: checkpoint,
            };
        }
        checkpoint *= 2;
    }
}

/// Distinct weighted sums.
pub(crate) struct AdditiveClasses<'a> {
    weights: &'a [u64],
    current: u64,
    pub sums: FxHashSet<u64>,
}

impl<'a> AdditiveClasses<'a> {
    pub fn new(weights: &'a [u64]) -> Self {
        AdditiveClasses {
            weights,
            current: 0,
            sums: FxHashSet::default(),
        }
    }
}

impl Classes for AdditiveClasses<'_> {
    fn start(&mut self, w: &[u16], n: usize) {
        self.current = w[..n].iter().map(|&a| self.weights[a as usize]).sum();
    }

    fn step(&mut self, w: &[u16], n: usize, i: usize) {
        self.current = self.current + self.weights[w[i + n - 1] as usize]
            - self.weights[w[i - 1] as usize];
    }

    fn record(&mut self, _w: &[u16], _n: usize, _i: usize) {
        self.sums.insert(self.current);
    }

    fn count(&self) -> usize {
        self.sums.len()
    }
}

/// Distinct Parikh vectors. Keys pack the counts of all letters but the
/// last (the window length fixes it) into a `u128` when they fit.
pub(crate) struct AbelianClasses {
    k: usize,
    bits: u32,
    packed: bool,
    counts: Vec<u32>,
    key: u128,
    pub packed_keys: FxHashSet<u128>,
    pub wide_keys: FxHashSet<Box<[u32]>>,
}

impl AbelianClasses {
    pub fn new(k: usize, n: usize) -> Self {
        let bits = usize::BITS - n.leading_zeros();
        let packed = (k.saturating_sub(1) as u32) * bits <= 128;
        AbelianClasses {
            k,
            bits,
            packed,
            counts: vec![0; k],
            key: 0,
            packed_keys: FxHashSet::default(),
            wide_keys: FxHashSet::default(),
        }
    }

    fn unit(&self, a: u16) -> u128 {
        if self.packed && (a as usize) + 1 < self.k {
            1u128 << (a as u32 * self.bits)
        } else {
            0
        }
    }

    /// Recorded Parikh vectors, in no particular order.
    pub fn vectors(&self, n: usize) -> Vec<Vec<u32>> {
        if self.packed {
            let mask = if self.bits >= 128 {
                u128::MAX
            } else {
                (1u128 << self.bits) - 1
            };
            self.packed_keys
                .iter()
                .map(|&key| {
                    let mut v: Vec<u32> = (0..self.k.saturating_sub(1))
                        .map(|i| ((key >> (i as u32 * self.bits)) & mask) as u32)
                        .collect();
                    if self.k > 0 {
                        let rest = n as u32 - v.iter().sum::<u32>();
                        v.push(rest);
                    }
                    v
                })
                .collect()
        } else {
            self.wide_keys.iter().map(|k| k.to_vec()).collect()
        }
    }
}

impl Classes for AbelianClasses {
    fn start(&mut self, w: &[u16], n: usize) {
        self.counts.iter_mut().for_each(|c| *c = 0);
        self.key = 0;
        for &a in &w[..n] {
            self.counts[a as usize] += 1;
            self.key += self.unit(a);
        }
    }

    fn step(&mut self, w: &[u16], n: usize, i: usize) {
        let (out, inn) = (w[i - 1], w[i + n - 1]);
        if out != inn {
            self.counts[out as usize] -= 1;
            self.counts[inn as usize] += 1;
            self.key = self.key - self.unit(out) + self.unit(inn);
        }
    }

    fn record(&mut self, _w: &[u16], _n: usize, _i: usize) {
        if self.packed {
            self.packed_keys.insert(self.key);
        } else if !self.wide_keys.contains(self.counts.as_slice()) {
            self.wide_keys.insert(self.counts.clone().into_boxed_slice());
        }
    }

    fn count(&self) -> usize {
        if self.packed {
            self.packed_keys.len()
        } else {
            self.wide_keys.len()
        }
    }
}

/// Distinct factors, keyed by the exact base-`k` value of the window when
/// it fits in 128 bits, else by a rolling hash with slice verification.
pub(crate) struct FactorClasses {
    k: u128,
    top: Option<u128>,
    key: u128,
    hash: u64,
    hash_top: u64,
    /// First occurrence of each class.
    pub exact: FxHashMap<u128, usize>,
    pub hashed: FxHashMap<u64, Vec<usize>>,
    hashed_count: usize,
}

const MOD61: u64 = (1 << 61) - 1;
const HASH_BASE: u64 = 1_000_003;

fn mulmod61(a: u64, b: u64) -> u64 {
    let p = a as u128 * b as u128;
    let lo = (p as u64) & MOD61;
    let hi = (p >> 61) as u64;
    let s = lo + hi;
    if s >= MOD61 {
        s - MOD61
    } else {
        s
    }
}

impl FactorClasses {
    pub fn new(k: usize, n: usize) -> Self {
        let k = (k.max(1)) as u128;
        let top = u32::try_from(n)
            .ok()
            .and_then(|e| k.checked_pow(e))
            .and_then(|_| k.checked_pow(n as u32 - 1));
        let mut hash_top = 1u64;
        for _ in 1..n {
            hash_top = mulmod61(hash_top, HASH_BASE);
        }
        FactorClasses {
            k,
            top,
            key: 0,
            hash: 0,
            hash_top,
            exact: FxHashMap::default(),
            hashed: FxHashMap::default(),
            hashed_count: 0,
        }
    }

    /// Start position of one occurrence per class.
    pub fn representatives(&self) -> Vec<usize> {
        if self.top.is_some() {
            self.exact.values().copied().collect()
        } else {
            self.hashed.values().flatten().copied().collect()
        }
    }
}

impl Classes for FactorClasses {
    fn start(&mut self, w: &[u16], n: usize) {
        if self.top.is_some() {
            self.key = w[..n].iter().fold(0u128, |acc, &a| acc * self.k + a as u128);
        } else {
            self.hash = w[..n]
                .iter()
                .fold(0u64, |acc, &a| (mulmod61(acc, HASH_BASE) + a as u64 + 1) % MOD61);
        }
    }

    fn step(&mut self, w: &[u16], n: usize, i: usize) {
        let (out, inn) = (w[i - 1], w[i + n - 1]);
        if let Some(top) = self.top {
            self.key = (self.key - out as u128 * top) * self.k + inn as u128;
        } else {
            let drop = mulmod61(out as u64 + 1, self.hash_top);
            let h = (self.hash + MOD61 - drop) % MOD61;
            self.hash = (mulmod61(h, HASH_BASE) + inn as u64 + 1) % MOD61;
        }
    }

    fn record(&mut self, w: &[u16], n: usize, i: usize) {
        if self.top.is_some() {
            self.exact.entry(self.key).or_insert(i);
        } else {
            let bucket = self.hashed.entry(self.hash).or_default();
            let window = &w[i..i + n];
            if !bucket.iter().any(|&p| &w[p..p + n] == window) {
                bucket.push(i);
                self.hashed_count += 1;
            }
        }
    }

    fn count(&self) -> usize {
        if self.top.is_some() {
            self.exact.len()
        } else {
            self.hashed_count
        }
    }
}
