//! Abelian and additive powers, balance, and valuations that make additive
//! and abelian complexity agree.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::complexity::{abelian_additive_profiles, ComplexityError, ScanConfig};
use crate::exec::Execution;
use crate::word::{Alphabet, Letter, PrefixBuffer, Valuation, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PowersError {
    #[error("window {window} is shorter than the {needed} letters a power needs")]
    WindowTooSmall { window: usize, needed: usize },
    #[error("{0}")]
    InvalidArgument(String),
    #[error("valuation does not weigh letter {0}")]
    Unweighted(Letter),
    #[error("valuation weights overflow 64 bits")]
    Overflow,
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Complexity(#[from] ComplexityError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PowerKind {
    Abelian,
    Additive,
}

impl fmt::Display for PowerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PowerKind::Abelian => "abelian",
            PowerKind::Additive => "additive",
        })
    }
}

impl FromStr for PowerKind {
    type Err = PowersError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "abelian" => Ok(PowerKind::Abelian),
            "additive" => Ok(PowerKind::Additive),
            _ => Err(PowersError::InvalidArgument(format!(
                "unknown power kind {s:?} (abelian or additive)"
            ))),
        }
    }
}

/// `k` consecutive blocks of length `order` starting at `position`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PowerWitness {
    pub position: usize,
    pub order: usize,
    pub k: usize,
    pub kind: PowerKind,
}

/// Outcome of a search; absence is only ever claimed up to the window.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowerSearch {
    Found(PowerWitness),
    NotFoundUpTo { window: usize },
}

impl PowerSearch {
    pub fn witness(&self) -> Option<&PowerWitness> {
        match self {
            PowerSearch::Found(w) => Some(w),
            PowerSearch::NotFoundUpTo { .. } => None,
        }
    }

    pub fn is_found(&self) -> bool {
        self.witness().is_some()
    }
}

impl fmt::Display for PowerSearch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PowerSearch::Found(w) => write!(
                f,
                "{} {}-power of order {} at position {}",
                w.kind, w.k, w.order, w.position
            ),
            PowerSearch::NotFoundUpTo { window } => write!(f, "not found up to window {window}"),
        }
    }
}

/// Per-letter prefix counts and prefix weights over a fixed prefix, so
/// any two blocks compare in O(|Σ|) (abelian) or O(1) (additive).
#[derive(Debug, Clone)]
pub struct BlockIndex {
    len: usize,
    k: usize,
    /// `counts[i * k + a]`: occurrences of the `a`-th letter in `w[..i]`.
    counts: Vec<u32>,
    /// `weights[i]`: weight of `w[..i]`, when a valuation was given.
    weights: Option<Vec<u64>>,
    alphabet: Alphabet,
}

impl BlockIndex {
    pub fn new(
        letters: &[Letter],
        alphabet: &Alphabet,
        v: Option<&Valuation>,
    ) -> Result<Self, PowersError> {
        let k = alphabet.len();
        let dense = alphabet.encode(letters)?;
        let mut counts = vec![0u32; (letters.len() + 1) * k];
        for (i, &a) in dense.iter().enumerate() {
            let (prev, next) = counts.split_at_mut((i + 1) * k);
            next[..k].copy_from_slice(&prev[i * k..]);
            next[a as usize] += 1;
        }
        let weights = match v {
            None => None,
            Some(v) => {
                let table = alphabet
                    .letters()
                    .iter()
                    .map(|&a| v.weight(a).ok_or(PowersError::Unweighted(a)))
                    .collect::<Result<Vec<_>, _>>()?;
                let mut w = Vec::with_capacity(letters.len() + 1);
                w.push(0u64);
                let mut acc = 0u64;
                for &a in &dense {
                    acc = acc.checked_add(table[a as usize]).ok_or(PowersError::Overflow)?;
                    w.push(acc);
                }
                Some(w)
            }
        };
        Ok(BlockIndex {
            len: letters.len(),
            k,
            counts,
            weights,
            alphabet: alphabet.clone(),
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Parikh vector of `w[p..p + m]`, in alphabet order.
    pub fn parikh(&self, p: usize, m: usize) -> Vec<u32> {
        let (a, b) = (&self.counts[p * self.k..][..self.k], &self.counts[(p + m) * self.k..][..self.k]);
        b.iter().zip(a).map(|(x, y)| x - y).collect()
    }

    /// Number of occurrences of the `a`-th letter in `w[p..p + m]`.
    fn count(&self, a: usize, p: usize, m: usize) -> u32 {
        self.counts[(p + m) * self.k + a] - self.counts[p * self.k + a]
    }

    pub fn weight(&self, p: usize, m: usize) -> Option<u64> {
        self.weights.as_ref().map(|w| w[p + m] - w[p])
    }

    pub fn abelian_eq(&self, p: usize, q: usize, m: usize) -> bool {
        (0..self.k).all(|a| self.count(a, p, m) == self.count(a, q, m))
    }

    fn equivalent(&self, kind: PowerKind, p: usize, q: usize, m: usize) -> bool {
        match kind {
            PowerKind::Abelian => self.abelian_eq(p, q, m),
            PowerKind::Additive => {
                let w = self.weights.as_ref().expect("additive search needs weights");
                w[p + m] - w[p] == w[q + m] - w[q]
            }
        }
    }

    /// First position where `k` blocks of length `order` are pairwise
    /// equivalent, scanning the whole index.
    pub fn find_power(&self, kind: PowerKind, k: usize, order: usize) -> PowerSearch {
        let span = k * order;
        if span <= self.len {
            for p in 0..=self.len - span {
                if (1..k).all(|j| self.equivalent(kind, p, p + j * order, order)) {
                    return PowerSearch::Found(PowerWitness {
                        position: p,
                        order,
                        k,
                        kind,
                    });
                }
            }
        }
        PowerSearch::NotFoundUpTo { window: self.len }
    }

    /// Distinct Parikh vectors `P(x)` over abelian squares `xx'` of the
    /// given order.
    pub fn abelian_square_classes(&self, order: usize) -> HashSet<Vec<u32>> {
        let mut classes = HashSet::new();
        if 2 * order <= self.len {
            for p in 0..=self.len - 2 * order {
                if self.abelian_eq(p, p + order, order) {
                    classes.insert(self.parikh(p, order));
                }
            }
        }
        classes
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }
}

fn check_power_args(k: usize, order: usize, window: usize) -> Result<(), PowersError> {
    if k < 2 || order < 1 {
        return Err(PowersError::InvalidArgument(format!(
            "need k >= 2 and order >= 1, got k={k} order={order}"
        )));
    }
    if window < k * order {
        return Err(PowersError::WindowTooSmall {
            window,
            needed: k * order,
        });
    }
    Ok(())
}

fn index_prefix(
    src: &mut PrefixBuffer,
    window: usize,
    kind: PowerKind,
    v: Option<&Valuation>,
) -> Result<BlockIndex, PowersError> {
    // fixed points materialize whole images and may overshoot
    let len = src.ensure_at_most(window)?.min(window);
    let identity;
    let v = match (kind, v) {
        (PowerKind::Additive, None) => {
            identity = Valuation::identity(&src.alphabet());
            Some(&identity)
        }
        (_, v) => v,
    };
    BlockIndex::new(&src.letters()[..len], &src.alphabet(), v)
}

/// Smallest position of a `k`-power of the given order within the first
/// `window` letters. Additive searches default to the identity valuation.
pub fn find_power(
    src: &mut PrefixBuffer,
    kind: PowerKind,
    k: usize,
    order: usize,
    window: usize,
    v: Option<&Valuation>,
) -> Result<PowerSearch, PowersError> {
    check_power_args(k, order, window)?;
    Ok(index_prefix(src, window, kind, v)?.find_power(kind, k, order))
}

/// [`find_power`] for each order in `orders`, sharing one prefix index.
pub fn find_powers(
    src: &mut PrefixBuffer,
    kind: PowerKind,
    k: usize,
    orders: &[usize],
    window: usize,
    v: Option<&Valuation>,
    exec: Execution,
) -> Result<Vec<PowerSearch>, PowersError> {
    for &m in orders {
        check_power_args(k, m, window)?;
    }
    let index = index_prefix(src, window, kind, v)?;
    Ok(exec.map(orders, |&m| index.find_power(kind, k, m)))
}

/// `order,found,position` lines.
pub fn orders_csv(orders: &[usize], results: &[PowerSearch]) -> String {
    let mut out = String::from("order,found,position\n");
    for (m, r) in orders.iter().zip(results) {
        match r.witness() {
            Some(w) => out.push_str(&format!("{m},true,{}\n", w.position)),
            None => out.push_str(&format!("{m},false,\n")),
        }
    }
    out
}

/// Number of abelian classes of squares of the given order within the
/// first `window` letters.
pub fn abelian_square_class_count(
    src: &mut PrefixBuffer,
    order: usize,
    window: usize,
) -> Result<usize, PowersError> {
    check_power_args(2, order, window)?;
    Ok(index_prefix(src, window, PowerKind::Abelian, None)?
        .abelian_square_classes(order)
        .len())
}

/// Whether `⌊kφn⌋ mod k` is `0` or `k - 1`, with `φ = (1 + √5)/2`.
///
/// `√5` is bracketed by dyadic rationals, halving the bracket until both
/// ends give the same floor.
pub fn fibonacci_abelian_criterion(k: u64, n: u64) -> bool {
    assert!(k >= 1 && n >= 1, "k and n must be positive");
    let f = floor_k_phi_n(k, n);
    let r = &f % BigInt::from(k);
    r.is_zero() || r == BigInt::from(k - 1)
}

/// `⌊kφn⌋` by interval refinement of `√5`.
pub fn floor_k_phi_n(k: u64, n: u64) -> BigInt {
    let m = BigInt::from(k) * BigInt::from(n);
    // √5 ∈ [lo / 2^p, (lo + 1) / 2^p]
    let (mut lo, mut p) = (BigInt::from(2), 0u32);
    let five = BigInt::from(5);
    loop {
        // ⌊m(1 + x)/2⌋ = ⌊(m·2^p + m·num) / 2^(p+1)⌋ at x = num / 2^p
        let scale = BigInt::one() << p;
        let floor_at = |num: &BigInt| (&m * &scale + &m * num) >> (p + 1);
        let (a, b) = (floor_at(&lo), floor_at(&(&lo + 1)));
        if a == b {
            return a;
        }
        // halve: mid = (2·lo + 1) / 2^(p+1)
        let mid = 2 * &lo + 1;
        p += 1;
        lo = if &mid * &mid < &five << (2 * p) { mid } else { 2 * lo };
    }
}

/// Largest gap `||u|_a - |v|_a|` over same-length windows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalanceReport {
    pub c_observed: u32,
    /// Window lengths scanned: `1..=n_scanned`.
    pub n_scanned: usize,
    /// Letters of the prefix that were scanned.
    pub window: usize,
    pub witness: Option<BalanceWitness>,
}

/// Two windows of length `length` realizing the maximum gap on `letter`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BalanceWitness {
    pub letter: Letter,
    pub length: usize,
    pub first: usize,
    pub second: usize,
}

/// Scans every window length `1..=n_max` in the first `window` letters.
pub fn balance_report(
    src: &mut PrefixBuffer,
    n_max: usize,
    window: usize,
    exec: Execution,
) -> Result<BalanceReport, PowersError> {
    let index = index_prefix(src, window, PowerKind::Abelian, None)?;
    let n_scanned = n_max.min(index.len());
    let lengths: Vec<usize> = (1..=n_scanned).collect();
    let per_length = exec.map(&lengths, |&n| {
        let mut best: Option<(u32, BalanceWitness)> = None;
        for a in 0..index.k {
            let (mut lo, mut hi) = ((u32::MAX, 0), (0u32, 0));
            for p in 0..=index.len() - n {
                let c = index.count(a, p, n);
                if c < lo.0 {
                    lo = (c, p);
                }
                if c > hi.0 {
                    hi = (c, p);
                }
            }
            let gap = hi.0 - lo.0;
            if best.is_none_or(|(g, _)| gap > g) {
                let witness = BalanceWitness {
                    letter: index.alphabet.letters()[a],
                    length: n,
                    first: lo.1,
                    second: hi.1,
                };
                best = Some((gap, witness));
            }
        }
        best
    });
    let mut report = BalanceReport {
        c_observed: 0,
        n_scanned,
        window: index.len(),
        witness: None,
    };
    for (gap, w) in per_length.into_iter().flatten() {
        if report.witness.is_none() || gap > report.c_observed {
            report.c_observed = gap;
            report.witness = Some(w);
        }
    }
    Ok(report)
}

/// `C·Σ_{i ≤ ⌈k/2⌉} (a_{k+1-i} - a_i) + 1` for weights sorted ascending:
/// the number of window weights a `C`-balanced word can show.
pub fn balanced_additive_bound(weights: &[u64], c: u64) -> u64 {
    let mut sorted = weights.to_vec();
    sorted.sort_unstable();
    let k = sorted.len();
    let spread: u64 = (0..k.div_ceil(2)).map(|i| sorted[k - 1 - i] - sorted[i]).sum();
    c * spread + 1
}

/// `0, 1, a_3, ...` with `a_j = (a_1 + ... + a_{j-1})·C + 1`.
pub fn equalizing_weights(k: usize, c: u64) -> Result<Vec<u64>, PowersError> {
    let mut out: Vec<u64> = Vec::with_capacity(k);
    let mut sum = 0u64;
    for j in 0..k {
        let a = match j {
            0 => 0,
            1 => 1,
            _ => sum
                .checked_mul(c)
                .and_then(|x| x.checked_add(1))
                .ok_or(PowersError::Overflow)?,
        };
        sum = sum.checked_add(a).ok_or(PowersError::Overflow)?;
        out.push(a);
    }
    Ok(out)
}

/// [`equalizing_weights`] assigned to `alphabet` in increasing order.
pub fn equalizing_valuation(alphabet: &Alphabet, c: u64) -> Result<Valuation, PowersError> {
    Ok(Valuation::by_rank(alphabet, &equalizing_weights(alphabet.len(), c)?))
}

/// Smallest `n <= n_max` where additive (under `v`) and abelian
/// complexity differ.
pub fn first_add_ab_mismatch(
    src: &mut PrefixBuffer,
    v: &Valuation,
    n_max: usize,
    cfg: ScanConfig,
) -> Result<Option<usize>, PowersError> {
    let (ab, add) = abelian_additive_profiles(src, n_max, v, cfg)?;
    for n in 0..=n_max {
        if !ab.stabilized[n] {
            return Err(ComplexityError::CapExceeded {
                n,
                cap: cfg.cap,
                partial: ab.values[n],
                factors: None,
            }
            .into());
        }
        if ab.values[n] != add.values[n] {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::named_prefix;
    use crate::word::{parse_word, weighted_sum};

    fn word(name: &str) -> PrefixBuffer {
        named_prefix(name).unwrap().unwrap()
    }

    /// Independent recount of a witness on the raw letters.
    fn verify(letters: &[Letter], w: &PowerWitness, v: &Valuation) -> bool {
        let blocks: Vec<&[Letter]> = (0..w.k)
            .map(|j| &letters[w.position + j * w.order..][..w.order])
            .collect();
        blocks.iter().all(|b| b.len() == w.order)
            && blocks.windows(2).all(|p| match w.kind {
                PowerKind::Abelian => {
                    let (mut x, mut y) = (p[0].to_vec(), p[1].to_vec());
                    x.sort_unstable();
                    y.sort_unstable();
                    x == y
                }
                PowerKind::Additive => {
                    weighted_sum(p[0], v).unwrap() == weighted_sum(p[1], v).unwrap()
                }
            })
    }

    #[test]
    fn fibonacci_square_at_first_00() {
        let mut fib = word("fib");
        let r = find_power(&mut fib, PowerKind::Abelian, 2, 1, 100, None).unwrap();
        // 0100101...: the first 00 starts at 2
        assert_eq!(r.witness().unwrap().position, 2);
    }

    #[test]
    fn window_too_small() {
        let mut fib = word("fib");
        assert_eq!(
            find_power(&mut fib, PowerKind::Abelian, 3, 10, 29, None),
            Err(PowersError::WindowTooSmall { window: 29, needed: 30 })
        );
    }

    #[test]
    fn tribonacci_has_abelian_squares_of_small_orders() {
        let mut trib = word("trib");
        let orders: Vec<usize> = (1..=60).collect();
        let rs = find_powers(&mut trib, PowerKind::Abelian, 2, &orders, 20_000, None, Execution::default())
            .unwrap();
        let v = Valuation::identity(&trib.alphabet());
        for r in &rs {
            assert!(verify(trib.letters(), r.witness().unwrap(), &v));
        }
    }

    #[test]
    fn ccss_has_no_additive_cube_of_small_order() {
        let mut w = word("ccss");
        let orders: Vec<usize> = (1..=12).collect();
        let rs = find_powers(&mut w, PowerKind::Additive, 3, &orders, 3000, None, Execution::default())
            .unwrap();
        assert!(rs.iter().all(|r| *r == PowerSearch::NotFoundUpTo { window: 3000 }));
    }

    #[test]
    fn ccss_pair_is_additive_not_abelian() {
        let a = parse_word("11011031430110343430314").unwrap();
        let b = parse_word("30310110110314303434303").unwrap();
        assert_eq!((a.len(), b.len()), (23, 23));
        let alphabet = Alphabet::new([0, 1, 3, 4]);
        let v = Valuation::identity(&alphabet);
        assert_eq!(weighted_sum(&a, &v).unwrap(), weighted_sum(&b, &v).unwrap());
        let (mut x, mut y) = (a.clone(), b.clone());
        x.sort_unstable();
        y.sort_unstable();
        assert_ne!(x, y);
    }

    #[test]
    fn abelian_witness_implies_additive_at_same_position() {
        let mut w = word("vtm");
        let v = Valuation::identity(&w.alphabet());
        w.ensure(5000).unwrap();
        let index = BlockIndex::new(&w.letters()[..5000], &w.alphabet(), Some(&v)).unwrap();
        for k in 2..=3 {
            for m in 1..=30 {
                if let PowerSearch::Found(wit) = index.find_power(PowerKind::Abelian, k, m) {
                    assert!((1..k).all(|j| index.equivalent(
                        PowerKind::Additive,
                        wit.position,
                        wit.position + j * m,
                        m
                    )));
                    let add = index.find_power(PowerKind::Additive, k, m);
                    assert!(add.witness().unwrap().position <= wit.position);
                }
            }
        }
    }

    #[test]
    fn bounded_additive_words_contain_additive_powers() {
        for name in ["vtm", "tm3"] {
            let mut w = word(name);
            let v = Valuation::identity(&w.alphabet());
            w.ensure(20_000).unwrap();
            let index = BlockIndex::new(&w.letters()[..20_000], &w.alphabet(), Some(&v)).unwrap();
            for k in 2..=5 {
                let found = (1..=200)
                    .map(|m| index.find_power(PowerKind::Additive, k, m))
                    .find(PowerSearch::is_found)
                    .unwrap_or_else(|| panic!("{name}: no additive {k}-power"));
                assert!(verify(w.letters(), found.witness().unwrap(), &v));
            }
        }
    }

    #[test]
    fn square_classes() {
        let mut c = PrefixBuffer::ultimately_periodic(vec![], vec![0]);
        for m in 1..10 {
            assert_eq!(abelian_square_class_count(&mut c, m, 100).unwrap(), 1);
        }
        let mut trib = word("trib");
        let counts: Vec<usize> = (1..=40)
            .map(|m| abelian_square_class_count(&mut trib, m, 20_000).unwrap())
            .collect();
        assert!(counts.iter().all(|c| (1..=2).contains(c)), "{counts:?}");
        assert!(counts.contains(&1) && counts.contains(&2));
    }

    fn isqrt(x: u128) -> u128 {
        let mut r = (x as f64).sqrt() as u128;
        while r * r > x {
            r -= 1;
        }
        while (r + 1) * (r + 1) <= x {
            r += 1;
        }
        r
    }

    #[test]
    fn floor_matches_integer_square_root() {
        // ⌊m(1+√5)/2⌋ = ⌊(m + ⌊√(5m²)⌋)/2⌋ since √(5m²) is irrational
        for k in 1..=6u64 {
            for n in 1..=500u64 {
                let m = (k * n) as u128;
                let expected = (m + isqrt(5 * m * m)) / 2;
                assert_eq!(floor_k_phi_n(k, n), BigInt::from(expected), "k={k} n={n}");
            }
        }
        let big = floor_k_phi_n(1_000_000_007, 998_244_353);
        let m = 1_000_000_007u128 * 998_244_353;
        assert_eq!(big, BigInt::from((m + isqrt(5 * m * m)) / 2));
    }

    #[test]
    fn criterion_trivial_for_k_one() {
        assert!((1..100).all(|n| fibonacci_abelian_criterion(1, n)));
    }

    #[test]
    fn criterion_matches_square_search() {
        let mut fib = word("fib");
        let orders: Vec<usize> = (1..=60).collect();
        let found = find_powers(&mut fib, PowerKind::Abelian, 2, &orders, 30_000, None, Execution::default())
            .unwrap();
        for (&n, r) in orders.iter().zip(&found) {
            assert_eq!(fibonacci_abelian_criterion(2, n as u64), r.is_found(), "n={n}");
        }
    }

    #[test]
    fn balance_examples() {
        let mut trib = word("trib");
        let r = balance_report(&mut trib, 60, 20_000, Execution::default()).unwrap();
        assert_eq!(r.c_observed, 2);
        let w = r.witness.unwrap();
        let (a, b) = (
            &trib.letters()[w.first..][..w.length],
            &trib.letters()[w.second..][..w.length],
        );
        let count = |x: &[Letter]| x.iter().filter(|&&c| c == w.letter).count() as i64;
        assert_eq!((count(b) - count(a)).unsigned_abs(), 2);

        let mut c = PrefixBuffer::ultimately_periodic(vec![], vec![1]);
        assert_eq!(balance_report(&mut c, 20, 500, Execution::Sequential).unwrap().c_observed, 0);

        let mut vtm = word("vtm");
        let r = balance_report(&mut vtm, 300, 50_000, Execution::default()).unwrap();
        assert!(r.c_observed >= 3, "{r:?}");
    }

    #[test]
    fn additive_bound_examples() {
        assert_eq!(balanced_additive_bound(&[0, 1, 2], 1), 3);
        assert_eq!(balanced_additive_bound(&[0, 1], 1), 2);
        assert_eq!(balanced_additive_bound(&[0, 1, 2], 0), 1);
        assert_eq!(balanced_additive_bound(&[0, 1, 3], 2), 7);
    }

    #[test]
    fn bound_holds_on_balanced_words() {
        // Fibonacci is 1-balanced over {0,1}; tribonacci is 2-balanced
        let mut fib = word("fib");
        let v = Valuation::identity(&fib.alphabet());
        let (_, add) = abelian_additive_profiles(&mut fib, 60, &v, ScanConfig::default()).unwrap();
        assert!(add.values.iter().all(|&x| x as u64 <= balanced_additive_bound(&[0, 1], 1)));

        let mut trib = word("trib");
        let v = Valuation::identity(&trib.alphabet());
        let (_, add) = abelian_additive_profiles(&mut trib, 60, &v, ScanConfig::default()).unwrap();
        let bound = balanced_additive_bound(&[0, 1, 2], 2);
        assert!(add.values.iter().all(|&x| x as u64 <= bound));
    }

    #[test]
    fn equalizing_examples() {
        assert_eq!(equalizing_weights(3, 2).unwrap(), vec![0, 1, 3]);
        for c in 1..10 {
            assert_eq!(equalizing_weights(2, c).unwrap(), vec![0, 1]);
        }
        assert_eq!(equalizing_weights(4, 1).unwrap(), vec![0, 1, 2, 4]);
        assert_eq!(equalizing_weights(80, 1000), Err(PowersError::Overflow));
        let v = equalizing_valuation(&Alphabet::new([0, 1, 2]), 2).unwrap();
        assert_eq!(v.to_string(), "0:0,1:1,2:3");
    }

    #[test]
    fn equalizing_chain_is_strict() {
        for k in 2..8 {
            for c in 1..5 {
                let a = equalizing_weights(k, c).unwrap();
                for j in 1..k {
                    let below: u64 = a[..j].iter().sum();
                    assert!(below * c < a[j]);
                }
            }
        }
    }

    #[test]
    fn vtm_variant_mismatches() {
        let mut w = word("vtm:3");
        let v = Valuation::identity(&w.alphabet());
        assert_eq!(first_add_ab_mismatch(&mut w, &v, 100, ScanConfig::default()).unwrap(), Some(11));
    }

    #[test]
    fn equalized_tribonacci_has_no_mismatch() {
        let mut trib = word("trib");
        let v = equalizing_valuation(&trib.alphabet(), 2).unwrap();
        assert_eq!(first_add_ab_mismatch(&mut trib, &v, 80, ScanConfig::default()).unwrap(), None);
    }

    #[test]
    fn kind_parse() {
        assert_eq!("abelian".parse::<PowerKind>().unwrap(), PowerKind::Abelian);
        assert!("cubic".parse::<PowerKind>().is_err());
    }

    #[test]
    fn orders_csv_flags() {
        let rs = [
            PowerSearch::Found(PowerWitness { position: 4, order: 1, k: 2, kind: PowerKind::Abelian }),
            PowerSearch::NotFoundUpTo { window: 10 },
        ];
        assert_eq!(orders_csv(&[1, 2], &rs), "order,found,position\n1,true,4\n2,false,\n");
    }
}
