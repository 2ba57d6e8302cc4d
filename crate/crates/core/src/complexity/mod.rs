//! Factor, abelian and additive complexity of infinite words.
//!
//! Values come from scanning a finite prefix. For infinite sources each
//! length `n` is scanned at prefix lengths `L, 2L, 4L, ...`
//! (`L = max(4n, 4096)`) until the class count is unchanged across two
//! consecutive doublings; the result carries a stabilization flag instead
//! of silently trusting a fixed prefix. Literal (finite) words are scanned
//! exactly.

mod emit;
mod period;
pub(crate) mod scan;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::exec::Execution;
use crate::word::{Letter, PrefixBuffer, Valuation, WordError};
use scan::{base_len, AbelianClasses, AdditiveClasses, Classes, FactorClasses, Scan};

pub use emit::{profile_csv, series_csv, step_plot_svg, PlotSeries};
pub use period::{detect_eventual_period, EventualPeriod};

/// Default upper bound on materialized prefix length.
pub const DEFAULT_PREFIX_CAP: usize = 1 << 25;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexityError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("prefix cap {cap} reached before length-{n} classes stabilized (partial count {partial})")]
    CapExceeded {
        n: usize,
        cap: usize,
        partial: usize,
        /// Partial factor set, for factor scans.
        factors: Option<Box<FactorSet>>,
    },
    #[error("window [{i}, {i}+{n}) lies past the materialized prefix of length {available}")]
    OutOfRange { i: usize, n: usize, available: usize },
    #[error("valuation does not weigh letter {0}")]
    Unweighted(Letter),
}

/// Scan limits and scheduling.
#[derive(Debug, Clone, Copy)]
pub struct ScanConfig {
    pub cap: usize,
    pub execution: Execution,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            cap: DEFAULT_PREFIX_CAP,
            execution: Execution::default(),
        }
    }
}

impl ScanConfig {
    pub fn with_cap(cap: usize) -> Self {
        ScanConfig {
            cap,
            ..Self::default()
        }
    }

    pub fn sequential(self) -> Self {
        ScanConfig {
            execution: Execution::Sequential,
            ..self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Factor,
    Abelian,
    Additive,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Factor => "factor",
            Kind::Abelian => "abelian",
            Kind::Additive => "additive",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The length-`n` factors seen in a prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorSet {
    pub length: usize,
    pub factors: BTreeSet<Vec<Letter>>,
    pub stabilized: bool,
}

/// `n ↦` number of classes, for `n = 0..=n_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexityProfile {
    pub kind: Kind,
    pub valuation: Option<Valuation>,
    pub values: Vec<usize>,
    pub stabilized: Vec<bool>,
    /// Largest `n` such that every value up to `n` stabilized.
    pub stabilized_upto: Option<usize>,
}

impl ComplexityProfile {
    fn new(kind: Kind, valuation: Option<Valuation>, values: Vec<usize>, stabilized: Vec<bool>) -> Self {
        let stabilized_upto = stabilized
            .iter()
            .position(|s| !s)
            .map_or(Some(stabilized.len().saturating_sub(1)), |p| p.checked_sub(1));
        ComplexityProfile {
            kind,
            valuation,
            values,
            stabilized,
            stabilized_upto,
        }
    }

    pub fn is_fully_stabilized(&self) -> bool {
        self.stabilized.iter().all(|&s| s)
    }
}

/// Minimum and maximum window weight at one length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeightRange {
    pub min: u64,
    pub max: u64,
    /// Every integer in `[min, max]` is some window's weight.
    pub contiguous: bool,
}

/// Alphabet-index encoding of a prefix plus per-index weights.
struct Encoded {
    dense: Vec<u16>,
    k: usize,
    exact: bool,
}

impl Encoded {
    fn of(src: &PrefixBuffer) -> Result<Self, ComplexityError> {
        let alphabet = src.alphabet();
        Ok(Encoded {
            dense: alphabet.encode(src.letters())?,
            k: alphabet.len(),
            exact: !src.is_infinite(),
        })
    }
}

fn dense_weights(src: &PrefixBuffer, v: &Valuation) -> Result<Vec<u64>, ComplexityError> {
    let alphabet = src.alphabet();
    alphabet
        .letters()
        .iter()
        .map(|&a| v.weight(a).ok_or(ComplexityError::Unweighted(a)))
        .collect()
}

/// Grows `src` until every requested length stabilizes (or the cap is
/// hit), running `measure` for each pending length on the shared prefix.
fn measure_lengths<R, F>(
    src: &mut PrefixBuffer,
    lengths: &[usize],
    cfg: ScanConfig,
    measure: F,
) -> Result<Vec<(R, bool)>, ComplexityError>
where
    R: Send,
    F: Fn(&Encoded, usize) -> (R, bool, usize) + Sync + Send,
{
    let max_n = lengths.iter().copied().max().unwrap_or(0);
    let target = if src.is_infinite() {
        (4 * base_len(max_n)).min(cfg.cap.max(max_n))
    } else {
        0
    };
    src.ensure_at_most(target)?;
    let mut out: Vec<Option<(R, bool)>> = lengths.iter().map(|_| None).collect();
    let mut pending: Vec<usize> = (0..lengths.len()).collect();
    loop {
        let enc = Encoded::of(src)?;
        let results = cfg
            .execution
            .map(&pending, |&idx| measure(&enc, lengths[idx]));
        let at_cap = enc.exact || src.len() >= cfg.cap;
        let mut still = Vec::new();
        let mut needed = 0;
        for (&idx, (value, stable, need)) in pending.iter().zip(results) {
            if stable || at_cap {
                out[idx] = Some((value, stable));
            } else {
                still.push(idx);
                needed = needed.max(need);
            }
        }
        if still.is_empty() {
            break;
        }
        pending = still;
        let grow = needed.max(2 * src.len()).min(cfg.cap);
        src.ensure(grow)?;
    }
    Ok(out.into_iter().map(|r| r.expect("measured")).collect())
}

fn finish<C: Classes, R>(s: Scan<C>, f: impl FnOnce(C) -> R) -> (R, bool, usize) {
    (f(s.classes), s.stable, s.needed)
}

fn cap_error(n: usize, cfg: ScanConfig, partial: usize) -> ComplexityError {
    ComplexityError::CapExceeded {
        n,
        cap: cfg.cap,
        partial,
        factors: None,
    }
}

/// The set of length-`n` factors.
pub fn factor_set(
    src: &mut PrefixBuffer,
    n: usize,
    cfg: ScanConfig,
) -> Result<FactorSet, ComplexityError> {
    if n == 0 {
        return Ok(FactorSet {
            length: 0,
            factors: BTreeSet::from([Vec::new()]),
            stabilized: true,
        });
    }
    let mut res = measure_lengths(src, &[n], cfg, |enc, n| {
        finish(scan::scan(&enc.dense, n, FactorClasses::new(enc.k, n), enc.exact), |c| {
            c.representatives()
        })
    })?;
    let (reps, stabilized) = res.pop().expect("one length");
    let letters = src.letters();
    let factors: BTreeSet<Vec<Letter>> = reps.iter().map(|&p| letters[p..p + n].to_vec()).collect();
    let set = FactorSet {
        length: n,
        factors,
        stabilized,
    };
    if stabilized {
        Ok(set)
    } else {
        Err(ComplexityError::CapExceeded {
            n,
            cap: cfg.cap,
            partial: set.factors.len(),
            factors: Some(Box::new(set)),
        })
    }
}

fn single<R>(
    src: &mut PrefixBuffer,
    n: usize,
    cfg: ScanConfig,
    count: impl Fn(&Encoded, usize) -> (R, bool, usize) + Sync + Send,
    partial: impl Fn(&R) -> usize,
) -> Result<R, ComplexityError>
where
    R: Send,
{
    let (value, stable) = measure_lengths(src, &[n], cfg, count)?.pop().expect("one length");
    if stable {
        Ok(value)
    } else {
        Err(cap_error(n, cfg, partial(&value)))
    }
}

fn abelian_count(enc: &Encoded, n: usize) -> (usize, bool, usize) {
    if n == 0 {
        return (1, true, 0);
    }
    finish(
        scan::scan(&enc.dense, n, AbelianClasses::new(enc.k, n), enc.exact),
        |c| c.count(),
    )
}

fn factor_count(enc: &Encoded, n: usize) -> (usize, bool, usize) {
    if n == 0 {
        return (1, true, 0);
    }
    finish(
        scan::scan(&enc.dense, n, FactorClasses::new(enc.k, n), enc.exact),
        |c| c.count(),
    )
}

fn additive_sums(enc: &Encoded, weights: &[u64], n: usize) -> (Vec<u64>, bool, usize) {
    if n == 0 {
        return (vec![0], true, 0);
    }
    finish(
        scan::scan(&enc.dense, n, AdditiveClasses::new(weights), enc.exact),
        |c| {
            let mut v: Vec<u64> = c.sums.into_iter().collect();
            v.sort_unstable();
            v
        },
    )
}

/// Number of distinct Parikh vectors among length-`n` factors.
pub fn abelian_complexity(
    src: &mut PrefixBuffer,
    n: usize,
    cfg: ScanConfig,
) -> Result<usize, ComplexityError> {
    single(src, n, cfg, abelian_count, |&c| c)
}

/// Number of length-`n` factors.
pub fn factor_complexity(
    src: &mut PrefixBuffer,
    n: usize,
    cfg: ScanConfig,
) -> Result<usize, ComplexityError> {
    single(src, n, cfg, factor_count, |&c| c)
}

/// Number of distinct weights among length-`n` factors under `v`.
pub fn additive_complexity(
    src: &mut PrefixBuffer,
    n: usize,
    v: &Valuation,
    cfg: ScanConfig,
) -> Result<usize, ComplexityError> {
    Ok(window_weights(src, n, v, cfg)?.len())
}

/// Sorted distinct weights of length-`n` factors.
pub fn window_weights(
    src: &mut PrefixBuffer,
    n: usize,
    v: &Valuation,
    cfg: ScanConfig,
) -> Result<Vec<u64>, ComplexityError> {
    let weights = dense_weights(src, v)?;
    single(src, n, cfg, |enc, n| additive_sums(enc, &weights, n), Vec::len)
}

/// Weight of the window at `i` minus the weight of the prefix window,
/// both of length `n`. Reads only what is already materialized.
pub fn weighted_delta(
    src: &PrefixBuffer,
    i: usize,
    n: usize,
    v: &Valuation,
) -> Result<i64, ComplexityError> {
    let letters = src.letters();
    if i + n > letters.len() {
        return Err(ComplexityError::OutOfRange {
            i,
            n,
            available: letters.len(),
        });
    }
    let weigh = |w: &[Letter]| -> Result<i64, ComplexityError> {
        w.iter()
            .map(|&a| v.weight(a).map(|x| x as i64).ok_or(ComplexityError::Unweighted(a)))
            .sum()
    };
    Ok(weigh(&letters[i..i + n])? - weigh(&letters[..n])?)
}

/// Minimum and maximum weight of length-`n` factors, and whether every
/// value in between occurs.
pub fn weight_range(
    src: &mut PrefixBuffer,
    n: usize,
    v: &Valuation,
    cfg: ScanConfig,
) -> Result<WeightRange, ComplexityError> {
    let sums = window_weights(src, n, v, cfg)?;
    let (min, max) = (sums[0], *sums.last().expect("nonempty"));
    Ok(WeightRange {
        min,
        max,
        contiguous: (max - min + 1) as usize == sums.len(),
    })
}

/// Values for `n = 0..=n_max`. Lengths that fail to stabilize under the
/// cap keep their partial counts and are flagged in `stabilized`.
pub fn complexity_profile(
    src: &mut PrefixBuffer,
    n_max: usize,
    kind: Kind,
    v: Option<&Valuation>,
    cfg: ScanConfig,
) -> Result<ComplexityProfile, ComplexityError> {
    let lengths: Vec<usize> = (0..=n_max).collect();
    let results = match kind {
        Kind::Factor => measure_lengths(src, &lengths, cfg, factor_count)?,
        Kind::Abelian => measure_lengths(src, &lengths, cfg, abelian_count)?,
        Kind::Additive => {
            let identity;
            let v = match v {
                Some(v) => v,
                None => {
                    identity = Valuation::identity(&src.alphabet());
                    &identity
                }
            };
            let weights = dense_weights(src, v)?;
            measure_lengths(src, &lengths, cfg, |enc, n| {
                let (sums, s, need) = additive_sums(enc, &weights, n);
                (sums.len(), s, need)
            })?
        }
    };
    let (values, stabilized): (Vec<usize>, Vec<bool>) = results.into_iter().unzip();
    let valuation = match kind {
        Kind::Additive => Some(v.cloned().unwrap_or_else(|| Valuation::identity(&src.alphabet()))),
        _ => None,
    };
    Ok(ComplexityProfile::new(kind, valuation, values, stabilized))
}

/// Abelian and additive profiles from a single Parikh-vector scan per
/// length; the additive count is the number of distinct weights among the
/// recorded Parikh vectors.
pub fn abelian_additive_profiles(
    src: &mut PrefixBuffer,
    n_max: usize,
    v: &Valuation,
    cfg: ScanConfig,
) -> Result<(ComplexityProfile, ComplexityProfile), ComplexityError> {
    let weights = dense_weights(src, v)?;
    let lengths: Vec<usize> = (0..=n_max).collect();
    let results = measure_lengths(src, &lengths, cfg, |enc, n| {
        if n == 0 {
            return ((1, 1), true, 0);
        }
        finish(
            scan::scan(&enc.dense, n, AbelianClasses::new(enc.k, n), enc.exact),
            |c| {
                let sums: rustc_hash::FxHashSet<u64> = c
                    .vectors(n)
                    .iter()
                    .map(|p| p.iter().zip(&weights).map(|(&c, &w)| c as u64 * w).sum())
                    .collect();
                (c.count(), sums.len())
            },
        )
    })?;
    let mut ab = Vec::with_capacity(results.len());
    let mut add = Vec::with_capacity(results.len());
    let mut stable = Vec::with_capacity(results.len());
    for ((a, d), s) in results {
        ab.push(a);
        add.push(d);
        stable.push(s);
    }
    Ok((
        ComplexityProfile::new(Kind::Abelian, None, ab, stable.clone()),
        ComplexityProfile::new(Kind::Additive, Some(v.clone()), add, stable),
    ))
}

/// `binom(n + k - 1, k - 1)`: the number of Parikh vectors of length `n`
/// over `k` letters, saturating at `u128::MAX`.
pub fn parikh_vector_count(n: usize, k: usize) -> u128 {
    if k == 0 {
        return u128::from(n == 0);
    }
    let (top, r) = ((n + k - 1) as u128, (k - 1).min(n) as u128);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = match acc.checked_mul(top - i) {
            Some(x) => x / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}
