//! Positional numeration systems and greedy representations.
//!
//! A system is an increasing scale `U` with `U(0) = 1`. Representations are
//! stored most-significant digit first, and the representation of 0 is the
//! empty string.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

/// Recurrence scales are cached up to this many terms when they grow too
/// slowly to overflow `u64` first.
const MAX_CACHED_TERMS: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumerationError {
    #[error("digit {digit} exceeds the largest digit {max}")]
    DigitOutOfRange { digit: u32, max: u32 },
    #[error("value does not fit in 64 bits")]
    Overflow,
    #[error("scale has only {0} terms")]
    TableExhausted(usize),
    #[error("invalid scale: {0}")]
    InvalidScale(String),
    #[error("cannot parse numeration system {0:?}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScaleKind {
    /// Powers of an integer base.
    Base(u32),
    /// `U(n) = c1·U(n-1) + c2·U(n-2) + ...` after the initial terms.
    Recurrence {
        initial: Vec<u64>,
        coefficients: Vec<u64>,
    },
    /// A finite explicit scale.
    Table(Vec<u64>),
}

/// An increasing integer scale with greedy digit expansions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositionalSystem {
    kind: ScaleKind,
    terms: Vec<u64>,
    /// `terms` holds every term below `u64::MAX`.
    complete: bool,
    max_digit: u32,
}

/// A most-significant-first digit string.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Representation {
    pub digits: Vec<u32>,
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_digits(&self.digits))
    }
}

/// Digits as a plain string when all are below 10, else comma-separated.
pub fn format_digits(digits: &[u32]) -> String {
    if digits.iter().all(|&d| d < 10) {
        digits.iter().map(|d| char::from(b'0' + *d as u8)).collect()
    } else {
        let parts: Vec<String> = digits.iter().map(u32::to_string).collect();
        parts.join(",")
    }
}

/// Inverse of [`format_digits`].
pub fn parse_digits(s: &str) -> Result<Vec<u32>, NumerationError> {
    let s = s.trim();
    let bad = || NumerationError::Parse(s.to_string());
    if s.contains(',') {
        s.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect()
    } else {
        s.chars().map(|c| c.to_digit(10).ok_or_else(bad)).collect()
    }
}

impl PositionalSystem {
    pub fn base(k: u32) -> Result<Self, NumerationError> {
        if k < 2 {
            return Err(NumerationError::InvalidScale(format!("base {k} < 2")));
        }
        Self::build(ScaleKind::Base(k))
    }

    /// 1, 2, 3, 5, 8, ...
    pub fn fibonacci() -> Self {
        Self::recurrence(vec![1, 2], vec![1, 1]).expect("valid scale")
    }

    /// 1, 2, 4, 7, 13, 24, ...
    pub fn tribonacci() -> Self {
        Self::recurrence(vec![1, 2, 4], vec![1, 1, 1]).expect("valid scale")
    }

    pub fn recurrence(initial: Vec<u64>, coefficients: Vec<u64>) -> Result<Self, NumerationError> {
        if initial.is_empty() || initial.len() < coefficients.len() {
            return Err(NumerationError::InvalidScale(
                "need at least as many initial terms as coefficients".into(),
            ));
        }
        Self::build(ScaleKind::Recurrence {
            initial,
            coefficients,
        })
    }

    pub fn table(terms: Vec<u64>) -> Result<Self, NumerationError> {
        Self::build(ScaleKind::Table(terms))
    }

    fn build(kind: ScaleKind) -> Result<Self, NumerationError> {
        let (terms, complete) = match &kind {
            ScaleKind::Base(k) => {
                let mut t = vec![1u64];
                while let Some(x) = t.last().unwrap().checked_mul(*k as u64) {
                    t.push(x);
                }
                (t, true)
            }
            ScaleKind::Table(t) => (t.clone(), false),
            ScaleKind::Recurrence {
                initial,
                coefficients,
            } => {
                let mut t = initial.clone();
                let mut complete = false;
                while t.len() < MAX_CACHED_TERMS {
                    let n = t.len();
                    let next = coefficients.iter().enumerate().try_fold(0u64, |acc, (i, &c)| {
                        c.checked_mul(t[n - 1 - i]).and_then(|x| acc.checked_add(x))
                    });
                    match next {
                        Some(x) => t.push(x),
                        None => {
                            complete = true;
                            break;
                        }
                    }
                }
                (t, complete)
            }
        };
        if terms.first() != Some(&1) {
            return Err(NumerationError::InvalidScale("U(0) must be 1".into()));
        }
        if let Some(w) = terms.windows(2).find(|w| w[0] >= w[1]) {
            return Err(NumerationError::InvalidScale(format!(
                "scale not increasing at {} -> {}",
                w[0], w[1]
            )));
        }
        let max_digit = match &kind {
            ScaleKind::Base(k) => k - 1,
            _ => terms
                .windows(2)
                .map(|w| w[1].div_ceil(w[0]) - 1)
                .max()
                .unwrap_or(0)
                .min(u32::MAX as u64) as u32,
        };
        Ok(PositionalSystem {
            kind,
            terms,
            complete,
            max_digit,
        })
    }

    pub fn kind(&self) -> &ScaleKind {
        &self.kind
    }

    /// Largest digit a greedy representation can use.
    pub fn max_digit(&self) -> u32 {
        self.max_digit
    }

    /// The first `count` terms, computed with arbitrary precision.
    pub fn u_values(&self, count: usize) -> Result<Vec<BigUint>, NumerationError> {
        match &self.kind {
            ScaleKind::Base(k) => {
                let k = BigUint::from(*k);
                let mut out = Vec::with_capacity(count);
                let mut x = BigUint::one();
                for _ in 0..count {
                    out.push(x.clone());
                    x *= &k;
                }
                Ok(out)
            }
            ScaleKind::Table(t) => {
                if count > t.len() {
                    return Err(NumerationError::TableExhausted(t.len()));
                }
                Ok(t[..count].iter().map(|&x| BigUint::from(x)).collect())
            }
            ScaleKind::Recurrence {
                initial,
                coefficients,
            } => {
                let mut out: Vec<BigUint> =
                    initial.iter().take(count).map(|&x| BigUint::from(x)).collect();
                while out.len() < count {
                    let n = out.len();
                    let mut next = BigUint::zero();
                    for (i, &c) in coefficients.iter().enumerate() {
                        next += &out[n - 1 - i] * c;
                    }
                    out.push(next);
                }
                Ok(out)
            }
        }
    }

    /// `U(i)` when it fits in 64 bits.
    pub fn term(&self, i: usize) -> Result<u64, NumerationError> {
        match self.terms.get(i) {
            Some(&x) => Ok(x),
            None if self.complete => Err(NumerationError::Overflow),
            None => Err(NumerationError::TableExhausted(self.terms.len())),
        }
    }

    /// Greedy representation of `n`; `rep(0)` is empty.
    pub fn rep(&self, n: u64) -> Result<Representation, NumerationError> {
        if n == 0 {
            return Ok(Representation { digits: Vec::new() });
        }
        let top = self.terms.partition_point(|&u| u <= n);
        if top == self.terms.len() && !self.complete {
            return Err(NumerationError::TableExhausted(self.terms.len()));
        }
        let mut rem = n;
        let digits = self.terms[..top]
            .iter()
            .rev()
            .map(|&u| {
                let c = rem / u;
                rem %= u;
                c as u32
            })
            .collect();
        debug_assert_eq!(rem, 0);
        Ok(Representation { digits })
    }

    fn check_digits(&self, digits: &[u32]) -> Result<(), NumerationError> {
        match digits.iter().find(|&&d| d > self.max_digit) {
            Some(&digit) => Err(NumerationError::DigitOutOfRange {
                digit,
                max: self.max_digit,
            }),
            None => Ok(()),
        }
    }

    /// Value of a most-significant-first digit string. Leading zeros are
    /// ignored.
    pub fn val(&self, digits: &[u32]) -> Result<u64, NumerationError> {
        self.check_digits(digits)?;
        let start = digits.iter().position(|&d| d != 0).unwrap_or(digits.len());
        let digits = &digits[start..];
        digits.iter().rev().enumerate().try_fold(0u64, |acc, (i, &c)| {
            if c == 0 {
                return Ok(acc);
            }
            let u = self.term(i)?;
            u.checked_mul(c as u64)
                .and_then(|x| acc.checked_add(x))
                .ok_or(NumerationError::Overflow)
        })
    }

    /// Arbitrary-precision [`val`](Self::val).
    pub fn val_big(&self, digits: &[u32]) -> Result<BigUint, NumerationError> {
        self.check_digits(digits)?;
        let u = self.u_values(digits.len())?;
        Ok(digits
            .iter()
            .rev()
            .zip(&u)
            .map(|(&c, ui)| ui * c)
            .sum())
    }

    /// Whether `digits` satisfies the greedy inequality at every position,
    /// the leading one included.
    pub fn is_greedy(&self, digits: &[u32]) -> Result<bool, NumerationError> {
        self.check_digits(digits)?;
        let u = self.u_values(digits.len() + 1)?;
        let mut partial = BigUint::zero();
        // lsd-first: c(0), c(1), ..., c(t)
        for (j, &c) in digits.iter().rev().enumerate() {
            partial += &u[j] * c;
            if partial >= u[j + 1] {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Display for PositionalSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        match &self.kind {
            ScaleKind::Base(k) => write!(f, "base:{k}"),
            ScaleKind::Recurrence {
                initial,
                coefficients,
            } => write!(f, "rec:{};{}", join(initial), join(coefficients)),
            ScaleKind::Table(t) => write!(f, "table:{}", join(t)),
        }
    }
}

/// `base:K`, `fib`, `trib`, `rec:a0,a1,...;c1,c2,...` or `table:u0,u1,...`.
impl FromStr for PositionalSystem {
    type Err = NumerationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || NumerationError::Parse(s.to_string());
        let list = |x: &str| -> Result<Vec<u64>, NumerationError> {
            x.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect()
        };
        match s {
            "fib" => Ok(Self::fibonacci()),
            "trib" => Ok(Self::tribonacci()),
            _ => {
                if let Some(k) = s.strip_prefix("base:") {
                    Self::base(k.parse().map_err(|_| bad())?)
                } else if let Some(rest) = s.strip_prefix("rec:") {
                    let (init, coef) = rest.split_once(';').ok_or_else(bad)?;
                    Self::recurrence(list(init)?, list(coef)?)
                } else if let Some(rest) = s.strip_prefix("table:") {
                    Self::table(list(rest)?)
                } else {
                    Err(bad())
                }
            }
        }
    }
}
