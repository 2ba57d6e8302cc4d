//! Integer linear representations `x(n) = λ·μ(rep(n))·γ`.
//!
//! `λ` is a row vector, `γ` a column vector and `μ` maps each digit to a
//! square matrix. Digits are read most-significant first, so
//! `μ(d₁⋯d_t) = μ(d₁)⋯μ(d_t)`.
//!
//! Text format:
//!
//! ```text
//! dim: 2
//! lambda: 0 1
//! mu 0:
//! 2 0
//! 0 1
//! mu 1:
//! 2 0
//! 1 1
//! gamma: 1 0
//! ```

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::automata::Dfao;
use crate::numeration::{NumerationError, PositionalSystem};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinRepError {
    #[error("digit {digit} outside 0..{max}")]
    DigitOutOfRange { digit: u32, max: u32 },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid linear representation: {0}")]
    Invalid(String),
    #[error("semigroup trick did not close within {max_states} states")]
    DidNotHalt { max_states: usize },
    #[error("state output {0} does not fit in 64 bits")]
    OutputOverflow(BigInt),
    #[error(transparent)]
    Numeration(#[from] NumerationError),
}

type Matrix = Vec<Vec<BigInt>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearRep {
    lambda: Vec<BigInt>,
    /// Indexed by digit.
    mu: Vec<Matrix>,
    gamma: Vec<BigInt>,
}

impl LinearRep {
    pub fn new(lambda: Vec<BigInt>, mu: Vec<Matrix>, gamma: Vec<BigInt>) -> Result<Self, LinRepError> {
        let dim = lambda.len();
        if gamma.len() != dim {
            return Err(LinRepError::Invalid(format!(
                "lambda has {dim} entries, gamma {}",
                gamma.len()
            )));
        }
        if mu.is_empty() {
            return Err(LinRepError::Invalid("no digit matrices".into()));
        }
        for (d, m) in mu.iter().enumerate() {
            if m.len() != dim || m.iter().any(|row| row.len() != dim) {
                return Err(LinRepError::Invalid(format!("mu {d} is not {dim}x{dim}")));
            }
        }
        Ok(LinearRep { lambda, mu, gamma })
    }

    /// Convenience constructor from small integers.
    pub fn from_i64(lambda: &[i64], mu: &[Vec<Vec<i64>>], gamma: &[i64]) -> Result<Self, LinRepError> {
        let v = |x: &[i64]| x.iter().map(|&a| BigInt::from(a)).collect::<Vec<_>>();
        Self::new(
            v(lambda),
            mu.iter().map(|m| m.iter().map(|r| v(r)).collect()).collect(),
            v(gamma),
        )
    }

    pub fn dim(&self) -> usize {
        self.lambda.len()
    }

    pub fn max_digit(&self) -> u32 {
        (self.mu.len() - 1) as u32
    }

    pub fn lambda(&self) -> &[BigInt] {
        &self.lambda
    }

    pub fn gamma(&self) -> &[BigInt] {
        &self.gamma
    }

    pub fn mu(&self, digit: u32) -> &Matrix {
        &self.mu[digit as usize]
    }

    fn check(&self, digits: &[u32]) -> Result<(), LinRepError> {
        match digits.iter().find(|&&d| d > self.max_digit()) {
            Some(&digit) => Err(LinRepError::DigitOutOfRange {
                digit,
                max: self.max_digit(),
            }),
            None => Ok(()),
        }
    }

    /// `λ·μ(digits)`.
    pub fn row_after(&self, digits: &[u32]) -> Result<Vec<BigInt>, LinRepError> {
        self.check(digits)?;
        Ok(digits
            .iter()
            .fold(self.lambda.clone(), |v, &d| row_times(&v, &self.mu[d as usize])))
    }

    /// `λ·μ(digits)·γ`.
    pub fn evaluate(&self, digits: &[u32]) -> Result<BigInt, LinRepError> {
        Ok(dot(&self.row_after(digits)?, &self.gamma))
    }

    /// Value on the greedy representation of `n`.
    pub fn term(&self, sys: &PositionalSystem, n: u64) -> Result<BigInt, LinRepError> {
        self.evaluate(&sys.rep(n)?.digits)
    }

    /// A representation of minimal dimension computing the same function
    /// on every digit string, with integer entries.
    pub fn minimize(&self) -> LinearRep {
        let q = RationalRep::from(self);
        let reduced = q.left_reduce().transpose().left_reduce().transpose();
        reduced.integralize()
    }

    /// Dimension of the minimal representation.
    pub fn rank(&self) -> usize {
        RationalRep::from(self)
            .left_reduce()
            .transpose()
            .left_reduce()
            .dim()
    }

    /// Breadth-first closure of the row vectors `λ·μ(x)`, digits ascending.
    ///
    /// States are named `λ`, `w1`, `w2`, ... in discovery order and output
    /// `w·γ`. Fails with [`LinRepError::DidNotHalt`] once more than
    /// `max_states` distinct vectors appear.
    pub fn semigroup_trick(&self, max_states: usize) -> Result<SemigroupDfao, LinRepError> {
        let width = self.mu.len();
        let mut index: HashMap<Vec<BigInt>, usize> = HashMap::new();
        let mut vectors = vec![self.lambda.clone()];
        let mut transitions: Vec<Vec<usize>> = Vec::new();
        index.insert(self.lambda.clone(), 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(s) = queue.pop_front() {
            let mut row = Vec::with_capacity(width);
            for m in &self.mu {
                let next = row_times(&vectors[s], m);
                let t = match index.get(&next) {
                    Some(&t) => t,
                    None => {
                        if vectors.len() == max_states {
                            return Err(LinRepError::DidNotHalt { max_states });
                        }
                        let t = vectors.len();
                        index.insert(next.clone(), t);
                        vectors.push(next);
                        queue.push_back(t);
                        t
                    }
                };
                row.push(t);
            }
            // states leave the queue in index order
            debug_assert_eq!(transitions.len(), s);
            transitions.push(row);
        }
        let outputs = vectors
            .iter()
            .map(|v| {
                let out = dot(v, &self.gamma);
                out.to_i64().ok_or(LinRepError::OutputOverflow(out))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let names = (0..vectors.len())
            .map(|i| if i == 0 { "λ".to_string() } else { format!("w{i}") })
            .collect();
        let dfao = Dfao::new(self.max_digit(), names, outputs, 0, transitions)
            .map_err(|e| LinRepError::Invalid(e.to_string()))?;
        Ok(SemigroupDfao { dfao, vectors })
    }
}

/// The automaton built by [`LinearRep::semigroup_trick`] and the row vector
/// behind each state.
#[derive(Debug, Clone)]
pub struct SemigroupDfao {
    pub dfao: Dfao,
    pub vectors: Vec<Vec<BigInt>>,
}

fn row_times(v: &[BigInt], m: &Matrix) -> Vec<BigInt> {
    let dim = v.len();
    let mut out = vec![BigInt::zero(); dim];
    for (vi, row) in v.iter().zip(m) {
        if vi.is_zero() {
            continue;
        }
        for (o, mij) in out.iter_mut().zip(row) {
            if !mij.is_zero() {
                *o += vi * mij;
            }
        }
    }
    out
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

type Q = BigRational;

/// A linear representation over the rationals, used during minimization.
#[derive(Debug, Clone)]
struct RationalRep {
    lambda: Vec<Q>,
    mu: Vec<Vec<Vec<Q>>>,
    gamma: Vec<Q>,
}

impl From<&LinearRep> for RationalRep {
    fn from(r: &LinearRep) -> Self {
        let v = |x: &[BigInt]| x.iter().map(|a| Q::from_integer(a.clone())).collect::<Vec<_>>();
        RationalRep {
            lambda: v(&r.lambda),
            mu: r.mu.iter().map(|m| m.iter().map(|row| v(row)).collect()).collect(),
            gamma: v(&r.gamma),
        }
    }
}

fn q_row_times(v: &[Q], m: &[Vec<Q>]) -> Vec<Q> {
    let mut out = vec![Q::zero(); m.first().map_or(0, Vec::len)];
    for (vi, row) in v.iter().zip(m) {
        if vi.is_zero() {
            continue;
        }
        for (o, mij) in out.iter_mut().zip(row) {
            if !mij.is_zero() {
                *o += vi * mij;
            }
        }
    }
    out
}

fn q_dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

/// Coordinates `c` with `c·basis = v`, if `v` lies in the row span.
fn coordinates(basis: &[Vec<Q>], v: &[Q]) -> Option<Vec<Q>> {
    let r = basis.len();
    let n = v.len();
    // Solve basisᵀ·cᵀ = vᵀ: n equations, r unknowns.
    let mut a: Vec<Vec<Q>> = (0..n)
        .map(|i| {
            let mut row: Vec<Q> = basis.iter().map(|b| b[i].clone()).collect();
            row.push(v[i].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..r {
        let Some(p) = (row..n).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let inv = a[row][col].recip();
        for x in a[row].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i != row && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in col..=r {
                    let t = &f * &a[row][j];
                    a[i][j] -= t;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if a[row..].iter().any(|x| !x[r].is_zero()) {
        return None;
    }
    let mut c = vec![Q::zero(); r];
    for (i, &col) in pivots.iter().enumerate() {
        c[col] = a[i][r].clone();
    }
    Some(c)
}

impl RationalRep {
    fn dim(&self) -> usize {
        self.lambda.len()
    }

    /// Restricts to the span of the reachable row vectors `λ·μ(x)`.
    fn left_reduce(&self) -> RationalRep {
        let mut basis: Vec<Vec<Q>> = Vec::new();
        if self.lambda.iter().any(|x| !x.is_zero()) {
            basis.push(self.lambda.clone());
        }
        let mut next = 0;
        while next < basis.len() {
            for m in &self.mu {
                let u = q_row_times(&basis[next], m);
                if coordinates(&basis, &u).is_none() {
                    basis.push(u);
                }
            }
            next += 1;
        }
        let r = basis.len();
        let mu = self
            .mu
            .iter()
            .map(|m| {
                basis
                    .iter()
                    .map(|b| coordinates(&basis, &q_row_times(b, m)).expect("span is closed"))
                    .collect()
            })
            .collect();
        let mut lambda = vec![Q::zero(); r];
        if r > 0 {
            lambda[0] = Q::one();
        }
        let gamma = basis.iter().map(|b| q_dot(b, &self.gamma)).collect();
        RationalRep { lambda, mu, gamma }
    }

    /// The representation of the reversed function: swaps `λ` and `γ` and
    /// transposes every `μ(d)`.
    fn transpose(&self) -> RationalRep {
        let n = self.dim();
        RationalRep {
            lambda: self.gamma.clone(),
            mu: self
                .mu
                .iter()
                .map(|m| (0..n).map(|i| (0..n).map(|j| m[j][i].clone()).collect()).collect())
                .collect(),
            gamma: self.lambda.clone(),
        }
    }

    /// Rewrites the representation in a Z-basis of the lattice spanned by
    /// the reachable row vectors. That lattice is stable under every `μ(d)`,
    /// contains `λ`, and pairs integrally with `γ` when the represented
    /// function is integer valued, so the result has integer entries.
    fn integralize(&self) -> LinearRep {
        let n = self.dim();
        let to_int = |x: &Q| {
            assert!(x.is_integer(), "lattice basis leaves a denominator");
            x.to_integer()
        };
        if n == 0 {
            return LinearRep {
                lambda: vec![],
                mu: vec![vec![]; self.mu.len()],
                gamma: vec![],
            };
        }
        let mut basis = hermite_basis(std::slice::from_ref(&self.lambda));
        loop {
            let mut gens = basis.clone();
            for b in &basis {
                for m in &self.mu {
                    gens.push(q_row_times(b, m));
                }
            }
            let next = hermite_basis(&gens);
            if next == basis {
                break;
            }
            basis = next;
        }
        debug_assert_eq!(basis.len(), n);
        let coords = |v: &[Q]| coordinates(&basis, v).expect("basis spans the space");
        let lambda = coords(&self.lambda).iter().map(to_int).collect();
        let mu = self
            .mu
            .iter()
            .map(|m| {
                basis
                    .iter()
                    .map(|b| coords(&q_row_times(b, m)).iter().map(to_int).collect())
                    .collect()
            })
            .collect();
        let gamma = basis.iter().map(|b| to_int(&q_dot(b, &self.gamma))).collect();
        LinearRep { lambda, mu, gamma }
    }
}

/// Hermite normal form basis of the Z-span of rational row vectors.
fn hermite_basis(rows: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let denom = rows
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|x| (x * &denom).to_integer()).collect())
        .collect();
    let cols = rows.first().map_or(0, Vec::len);
    let mut top = 0;
    for col in 0..cols {
        // gcd-combine every row below `top` into the pivot row
        for i in top + 1..m.len() {
            if m[i][col].is_zero() {
                continue;
            }
            let (a, b) = (m[top][col].clone(), m[i][col].clone());
            let e = a.extended_gcd(&b);
            let (ra, rb) = (m[top].clone(), m[i].clone());
            let (pa, pb) = (&a / &e.gcd, &b / &e.gcd);
            for j in 0..cols {
                m[top][j] = &e.x * &ra[j] + &e.y * &rb[j];
                m[i][j] = &pa * &rb[j] - &pb * &ra[j];
            }
        }
        if top >= m.len() || m[top][col].is_zero() {
            continue;
        }
        if m[top][col].is_negative() {
            for x in m[top].iter_mut() {
                *x = -x.clone();
            }
        }
        let p = m[top][col].clone();
        for i in 0..top {
            let f = m[i][col].div_floor(&p);
            if !f.is_zero() {
                for j in 0..cols {
                    let t = &f * &m[top][j];
                    m[i][j] -= t;
                }
            }
        }
        top += 1;
        if top == m.len() {
            break;
        }
    }
    m.truncate(top);
    m.into_iter()
        .map(|r| r.into_iter().map(|x| Q::new(x, denom.clone())).collect())
        .collect()
}

impl fmt::Display for LinearRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let row = |v: &[BigInt]| v.iter().map(BigInt::to_string).collect::<Vec<_>>().join(" ");
        let line = |label: &str, v: &[BigInt]| {
            if v.is_empty() {
                format!("{label}:")
            } else {
                format!("{label}: {}", row(v))
            }
        };
        writeln!(f, "dim: {}", self.dim())?;
        writeln!(f, "{}", line("lambda", &self.lambda))?;
        for (d, m) in self.mu.iter().enumerate() {
            writeln!(f, "mu {d}:")?;
            for r in m {
                writeln!(f, "{}", row(r))?;
            }
        }
        writeln!(f, "{}", line("gamma", &self.gamma))
    }
}

impl FromStr for LinearRep {
    type Err = LinRepError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let err = |line: usize, message: String| LinRepError::Parse { line, message };
        let ints = |line: usize, s: &str| -> Result<Vec<BigInt>, LinRepError> {
            s.split_whitespace()
                .map(|t| t.parse().map_err(|_| err(line, format!("bad integer {t:?}"))))
                .collect()
        };
        let lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        let last = text.lines().count().max(1);
        let mut pos = 0;
        let mut next = |what: &str| -> Result<(usize, &str), LinRepError> {
            let item = lines.get(pos).copied();
            pos += 1;
            item.ok_or_else(|| err(last, format!("missing {what}")))
        };

        let (n, l) = next("`dim:`")?;
        let dim: usize = l
            .strip_prefix("dim:")
            .and_then(|d| d.trim().parse().ok())
            .ok_or_else(|| err(n, "expected `dim: N`".into()))?;
        let (n, l) = next("`lambda:`")?;
        let lambda = ints(n, l.strip_prefix("lambda:").ok_or_else(|| err(n, "expected `lambda:`".into()))?)?;
        if lambda.len() != dim {
            return Err(err(n, format!("lambda needs {dim} entries")));
        }
        let mut mu = Vec::new();
        let gamma = loop {
            let (n, l) = next("`gamma:`")?;
            if let Some(g) = l.strip_prefix("gamma:") {
                if mu.is_empty() {
                    return Err(err(n, "no mu matrices".into()));
                }
                break ints(n, g)
                    .and_then(|g| match g.len() == dim {
                        true => Ok(g),
                        false => Err(err(n, format!("gamma needs {dim} entries"))),
                    })?;
            }
            let digit = l
                .strip_prefix("mu")
                .and_then(|r| r.trim().strip_suffix(':'))
                .and_then(|d| d.trim().parse::<usize>().ok())
                .ok_or_else(|| err(n, "expected `mu D:` or `gamma:`".into()))?;
            if digit != mu.len() {
                return Err(err(n, format!("expected mu {}", mu.len())));
            }
            let mut m = Vec::with_capacity(dim);
            for _ in 0..dim {
                let (n, row) = next("matrix row")?;
                let row = ints(n, row)?;
                if row.len() != dim {
                    return Err(err(n, format!("row needs {dim} entries")));
                }
                m.push(row);
            }
            mu.push(m);
        };
        if let Some(&(n, _)) = lines.get(pos) {
            return Err(err(n, "text after gamma".into()));
        }
        LinearRep::new(lambda, mu, gamma)
    }
}
