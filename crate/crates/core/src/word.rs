//! Words over integer alphabets, morphisms, codings, valuations, and
//! prefixes of morphic fixed points.
//!
//! Letters are plain nonnegative integers. Unless a [`Valuation`] says
//! otherwise, a letter weighs its own value, so `020` and `101` are
//! additively equivalent over `{0,1,2}`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// A letter doubles as its default integer weight.
pub type Letter = u32;

/// Errors raised by the word engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("letter {0} has no rule")]
    UnknownLetter(Letter),
    #[error("letter {0} has two rules")]
    DuplicateRule(Letter),
    #[error("morphism is not prolongable on letter {0}")]
    NotProlongable(Letter),
    #[error("iteration from letter {letter} stalls at length {reached}")]
    NonExpanding { letter: Letter, reached: usize },
    #[error("literal word has only {available} letters, {requested} requested")]
    LiteralExhausted { available: usize, requested: usize },
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
}

/// A finite, strictly increasing set of letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Alphabet(Vec<Letter>);

impl Alphabet {
    pub fn new(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut v: Vec<Letter> = letters.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Alphabet(v)
    }

    /// The alphabet `{0, 1, ..., max}`.
    pub fn range(max: Letter) -> Self {
        Alphabet((0..=max).collect())
    }

    /// Letters occurring in `w`.
    pub fn of_word(w: &[Letter]) -> Self {
        Self::new(w.iter().copied())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, a: Letter) -> bool {
        self.0.binary_search(&a).is_ok()
    }

    pub fn index_of(&self, a: Letter) -> Option<usize> {
        self.0.binary_search(&a).ok()
    }

    /// Rewrites `w` as alphabet indices, the form the window scanners use.
    pub fn encode(&self, w: &[Letter]) -> Result<Vec<u16>, WordError> {
        assert!(self.0.len() <= u16::MAX as usize + 1);
        // Small alphabets of small letters get a direct lookup table.
        if let Some(&max) = self.0.last() {
            if max < 4096 {
                let mut table = vec![u16::MAX; max as usize + 1];
                for (i, &a) in self.0.iter().enumerate() {
                    table[a as usize] = i as u16;
                }
                return w
                    .iter()
                    .map(|&a| match table.get(a as usize) {
                        Some(&i) if i != u16::MAX => Ok(i),
                        _ => Err(WordError::UnknownLetter(a)),
                    })
                    .collect();
            }
        }
        w.iter()
            .map(|&a| {
                self.index_of(a)
                    .map(|i| i as u16)
                    .ok_or(WordError::UnknownLetter(a))
            })
            .collect()
    }
}

/// Per-letter occurrence counts, in alphabet order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParikhVector {
    pub counts: Vec<usize>,
}

impl ParikhVector {
    pub fn len(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl std::ops::Add for &ParikhVector {
    type Output = ParikhVector;

    fn add(self, rhs: &ParikhVector) -> ParikhVector {
        assert_eq!(self.counts.len(), rhs.counts.len());
        ParikhVector {
            counts: self
                .counts
                .iter()
                .zip(&rhs.counts)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

/// Parikh vector of `w` over `alphabet`.
pub fn parikh(w: &[Letter], alphabet: &Alphabet) -> Result<ParikhVector, WordError> {
    let mut counts = vec![0; alphabet.len()];
    for &a in w {
        let i = alphabet.index_of(a).ok_or(WordError::UnknownLetter(a))?;
        counts[i] += 1;
    }
    Ok(ParikhVector { counts })
}

/// Integer weights for letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Valuation {
    weights: BTreeMap<Letter, u64>,
}

impl Valuation {
    pub fn new(weights: impl IntoIterator<Item = (Letter, u64)>) -> Self {
        Valuation {
            weights: weights.into_iter().collect(),
        }
    }

    /// Each letter weighs its own value.
    pub fn identity(alphabet: &Alphabet) -> Self {
        Self::new(alphabet.letters().iter().map(|&a| (a, a as u64)))
    }

    /// Assigns `weights` to the letters of `alphabet` in increasing order.
    pub fn by_rank(alphabet: &Alphabet, weights: &[u64]) -> Self {
        assert_eq!(alphabet.len(), weights.len(), "one weight per letter");
        Self::new(alphabet.letters().iter().copied().zip(weights.iter().copied()))
    }

    pub fn weight(&self, a: Letter) -> Option<u64> {
        self.weights.get(&a).copied()
    }

    pub fn is_total_on(&self, alphabet: &Alphabet) -> bool {
        alphabet.letters().iter().all(|a| self.weights.contains_key(a))
    }

    /// Weights in alphabet order.
    pub fn dense(&self, alphabet: &Alphabet) -> Result<Vec<u64>, WordError> {
        alphabet
            .letters()
            .iter()
            .map(|&a| self.weight(a).ok_or(WordError::UnknownLetter(a)))
            .collect()
    }

    /// Multiplies every weight by `c`.
    pub fn scaled(&self, c: u64) -> Self {
        Self::new(self.weights.iter().map(|(&a, &w)| (a, w * c)))
    }

    pub fn iter(&self) -> impl Iterator<Item = (Letter, u64)> + '_ {
        self.weights.iter().map(|(&a, &w)| (a, w))
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|(a, w)| format!("{a}:{w}")).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// `a:w,b:w,...`
impl FromStr for Valuation {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut weights = BTreeMap::new();
        let mut offset = 0;
        for part in s.split(',') {
            let err = |message: &str| WordError::Parse {
                position: offset,
                message: message.to_string(),
            };
            let (a, w) = part.trim().split_once(':').ok_or_else(|| err("expected letter:weight"))?;
            let a: Letter = a.trim().parse().map_err(|_| err("bad letter"))?;
            let w: u64 = w.trim().parse().map_err(|_| err("bad weight"))?;
            if weights.insert(a, w).is_some() {
                return Err(err("letter weighted twice"));
            }
            offset += part.len() + 1;
        }
        Ok(Valuation { weights })
    }
}

/// Total weight of `w`.
pub fn weighted_sum(w: &[Letter], v: &Valuation) -> Result<u64, WordError> {
    w.iter()
        .map(|&a| v.weight(a).ok_or(WordError::UnknownLetter(a)))
        .sum()
}

/// Per-letter weights `v(a)·|w|_a` and their sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedParikh {
    pub entries: Vec<u64>,
    pub total: u64,
}

pub fn weighted_parikh(
    w: &[Letter],
    alphabet: &Alphabet,
    v: &Valuation,
) -> Result<WeightedParikh, WordError> {
    let p = parikh(w, alphabet)?;
    let weights = v.dense(alphabet)?;
    let entries: Vec<u64> = p
        .counts
        .iter()
        .zip(&weights)
        .map(|(&c, &wt)| c as u64 * wt)
        .collect();
    let total = entries.iter().sum();
    Ok(WeightedParikh { entries, total })
}

/// A letter-to-letter map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coding {
    map: BTreeMap<Letter, Letter>,
}

impl Coding {
    pub fn new(map: impl IntoIterator<Item = (Letter, Letter)>) -> Self {
        Coding {
            map: map.into_iter().collect(),
        }
    }

    pub fn identity(alphabet: &Alphabet) -> Self {
        Self::new(alphabet.letters().iter().map(|&a| (a, a)))
    }

    pub fn get(&self, a: Letter) -> Option<Letter> {
        self.map.get(&a).copied()
    }

    pub fn apply(&self, w: &[Letter]) -> Result<Vec<Letter>, WordError> {
        w.iter()
            .map(|&a| self.get(a).ok_or(WordError::UnknownLetter(a)))
            .collect()
    }

    pub fn domain(&self) -> Alphabet {
        Alphabet::new(self.map.keys().copied())
    }

    pub fn range(&self) -> Alphabet {
        Alphabet::new(self.map.values().copied())
    }

    fn as_morphism(&self) -> Morphism {
        Morphism {
            rules: self.map.iter().map(|(&a, &b)| (a, vec![b])).collect(),
        }
    }
}

impl FromStr for Coding {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let m: Morphism = s.parse()?;
        let mut map = BTreeMap::new();
        for (a, image) in m.rules {
            if image.len() != 1 {
                return Err(WordError::Parse {
                    position: 0,
                    message: format!("coding image of {a} must have length 1"),
                });
            }
            map.insert(a, image[0]);
        }
        Ok(Coding { map })
    }
}

impl fmt::Display for Coding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.as_morphism().fmt(f)
    }
}

/// A morphism on an integer alphabet, given by one image per letter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    rules: BTreeMap<Letter, Vec<Letter>>,
}

impl Morphism {
    /// Builds a morphism; every image letter must itself have a rule.
    pub fn new(
        rules: impl IntoIterator<Item = (Letter, Vec<Letter>)>,
    ) -> Result<Self, WordError> {
        let mut map = BTreeMap::new();
        for (a, image) in rules {
            if map.insert(a, image).is_some() {
                return Err(WordError::DuplicateRule(a));
            }
        }
        for image in map.values() {
            if let Some(&b) = image.iter().find(|b| !map.contains_key(b)) {
                return Err(WordError::UnknownLetter(b));
            }
        }
        Ok(Morphism { rules: map })
    }

    pub fn alphabet(&self) -> Alphabet {
        Alphabet(self.rules.keys().copied().collect())
    }

    pub fn image(&self, a: Letter) -> Option<&[Letter]> {
        self.rules.get(&a).map(Vec::as_slice)
    }

    pub fn rules(&self) -> impl Iterator<Item = (Letter, &[Letter])> {
        self.rules.iter().map(|(&a, im)| (a, im.as_slice()))
    }

    /// `Some(k)` when every image has length `k`.
    pub fn uniform_length(&self) -> Option<usize> {
        let mut lens = self.rules.values().map(Vec::len);
        let first = lens.next()?;
        lens.all(|l| l == first).then_some(first)
    }

    pub fn apply(&self, w: &[Letter]) -> Result<Vec<Letter>, WordError> {
        let mut out = Vec::with_capacity(w.len() * 2);
        for &a in w {
            out.extend_from_slice(self.image(a).ok_or(WordError::UnknownLetter(a))?);
        }
        Ok(out)
    }

    /// Whether `|m^n(a)|` grows without bound.
    ///
    /// Path counts in the letter graph (one edge per occurrence of `b` in
    /// `m(a)`) stay bounded iff every reachable strongly connected component
    /// is trivial or a plain cycle and no path visits two cyclic components.
    pub fn is_growing(&self, a: Letter) -> bool {
        self.growing_letters().contains(&a)
    }

    /// All letters with unbounded iterated image length.
    pub fn growing_letters(&self) -> Vec<Letter> {
        let letters = self.alphabet();
        let k = letters.len();
        let idx = |b: Letter| letters.index_of(b).expect("closed alphabet");
        let edges: Vec<Vec<usize>> = letters
            .letters()
            .iter()
            .map(|&b| self.rules[&b].iter().map(|&c| idx(c)).collect())
            .collect();
        let comp = strongly_connected(&edges);
        let n_comp = comp.iter().copied().max().map_or(0, |m| m + 1);

        let mut size = vec![0usize; n_comp];
        for &c in &comp {
            size[c] += 1;
        }
        let mut cyclic = vec![false; n_comp];
        let mut branching = vec![false; n_comp];
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n_comp];
        for (u, out) in edges.iter().enumerate() {
            let inner = out.iter().filter(|&&v| comp[v] == comp[u]).count();
            if inner > 0 {
                cyclic[comp[u]] = true;
            }
            if inner > 1 {
                branching[comp[u]] = true;
            }
            for &v in out {
                if comp[v] != comp[u] {
                    succ[comp[u]].push(comp[v]);
                }
            }
        }
        // Tarjan numbers components in reverse topological order, so
        // successors always carry smaller ids.
        let mut reaches_cycle = vec![false; n_comp];
        let mut grows = vec![false; n_comp];
        for c in 0..n_comp {
            let succ_cycle = succ[c].iter().any(|&d| reaches_cycle[d]);
            let succ_grows = succ[c].iter().any(|&d| grows[d]);
            reaches_cycle[c] = cyclic[c] || succ_cycle;
            grows[c] = branching[c] || succ_grows || (cyclic[c] && succ_cycle);
        }
        (0..k)
            .filter(|&u| grows[comp[u]])
            .map(|u| letters.letters()[u])
            .collect()
    }

    /// `m(a)` starts with `a` and `m^n(a)` grows without bound.
    pub fn is_prolongable(&self, a: Letter) -> bool {
        match self.image(a) {
            Some(image) => image.first() == Some(&a) && self.is_growing(a),
            None => false,
        }
    }

    /// The length-`len` prefix of the fixed point `m^ω(a)`.
    pub fn fixed_point_prefix(&self, a: Letter, len: usize) -> Result<Vec<Letter>, WordError> {
        let mut buf = PrefixBuffer::fixed_point(self.clone(), a)?;
        buf.ensure(len)?;
        Ok(buf.letters()[..len].to_vec())
    }

    /// The length-`len` prefix of `code(m^ω(a))`.
    pub fn coded_fixed_point_prefix(
        &self,
        code: &Coding,
        a: Letter,
        len: usize,
    ) -> Result<Vec<Letter>, WordError> {
        let mut buf = PrefixBuffer::coded_fixed_point(self.clone(), code.clone(), a)?;
        buf.ensure(len)?;
        Ok(buf.letters()[..len].to_vec())
    }

    /// Column `j` is the Parikh vector of the image of the `j`-th letter.
    pub fn adjacency_matrix(&self) -> Vec<Vec<i64>> {
        let alphabet = self.alphabet();
        let k = alphabet.len();
        let mut m = vec![vec![0i64; k]; k];
        for (j, (_, image)) in self.rules().enumerate() {
            for &b in image {
                m[alphabet.index_of(b).expect("closed alphabet")][j] += 1;
            }
        }
        m
    }

    pub fn is_parikh_collinear(&self) -> bool {
        integer_rank(&self.adjacency_matrix()) <= 1
    }
}

/// Tarjan's algorithm; returns the component id of every vertex.
fn strongly_connected(edges: &[Vec<usize>]) -> Vec<usize> {
    struct State<'a> {
        edges: &'a [Vec<usize>],
        index: Vec<Option<usize>>,
        low: Vec<usize>,
        on_stack: Vec<bool>,
        stack: Vec<usize>,
        comp: Vec<usize>,
        next_index: usize,
        next_comp: usize,
    }

    fn visit(s: &mut State<'_>, v: usize) {
        s.index[v] = Some(s.next_index);
        s.low[v] = s.next_index;
        s.next_index += 1;
        s.stack.push(v);
        s.on_stack[v] = true;
        for &w in &s.edges[v] {
            match s.index[w] {
                None => {
                    visit(s, w);
                    s.low[v] = s.low[v].min(s.low[w]);
                }
                Some(iw) if s.on_stack[w] => s.low[v] = s.low[v].min(iw),
                Some(_) => {}
            }
        }
        if Some(s.low[v]) == s.index[v] {
            loop {
                let w = s.stack.pop().expect("nonempty stack");
                s.on_stack[w] = false;
                s.comp[w] = s.next_comp;
                if w == v {
                    break;
                }
            }
            s.next_comp += 1;
        }
    }

    let n = edges.len();
    let mut s = State {
        edges,
        index: vec![None; n],
        low: vec![0; n],
        on_stack: vec![false; n],
        stack: Vec::new(),
        comp: vec![0; n],
        next_index: 0,
        next_comp: 0,
    };
    for v in 0..n {
        if s.index[v].is_none() {
            visit(&mut s, v);
        }
    }
    s.comp
}

/// Exact rank of an integer matrix (fraction-free elimination).
pub fn integer_rank(m: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|row| row.iter().map(|&x| x as i128).collect())
        .collect();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| a[r][c] != 0) else {
            continue;
        };
        a.swap(rank, p);
        for r in 0..rows {
            if r != rank && a[r][c] != 0 {
                let (f, g) = (a[rank][c], a[r][c]);
                for j in 0..cols {
                    a[r][j] = a[r][j] * f - a[rank][j] * g;
                }
                let d = a[r].iter().fold(0i128, |acc, &x| gcd(acc, x.abs()));
                if d > 1 {
                    a[r].iter_mut().for_each(|x| *x /= d);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Whitespace-separated `L->IMAGE` rules. `IMAGE` is a digit string when
/// every letter is a single digit, else `[l1,l2,...]`; empty images are
/// `L->` or `L->[]`.
impl FromStr for Morphism {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut rules = Vec::new();
        let mut seen = BTreeMap::new();
        for (position, token) in tokens_with_offsets(s) {
            let err = |message: String| WordError::Parse { position, message };
            let (lhs, rhs) = token
                .split_once("->")
                .ok_or_else(|| err(format!("expected L->IMAGE, found {token:?}")))?;
            let a: Letter = lhs
                .parse()
                .map_err(|_| err(format!("bad letter {lhs:?}")))?;
            let image = parse_image(rhs).map_err(err)?;
            if seen.insert(a, position).is_some() {
                return Err(err(format!("letter {a} has two rules")));
            }
            rules.push((a, image));
        }
        if rules.is_empty() {
            return Err(WordError::Parse {
                position: 0,
                message: "no rules".into(),
            });
        }
        Morphism::new(rules).map_err(|e| match e {
            WordError::UnknownLetter(b) => WordError::Parse {
                position: 0,
                message: format!("image letter {b} has no rule"),
            },
            other => other,
        })
    }
}

fn tokens_with_offsets(s: &str) -> impl Iterator<Item = (usize, &str)> {
    s.split_whitespace()
        .map(move |t| (t.as_ptr() as usize - s.as_ptr() as usize, t))
}

fn parse_image(rhs: &str) -> Result<Vec<Letter>, String> {
    if let Some(inner) = rhs.strip_prefix('[') {
        let inner = inner
            .strip_suffix(']')
            .ok_or_else(|| format!("unterminated image {rhs:?}"))?;
        if inner.trim().is_empty() {
            return Ok(Vec::new());
        }
        inner
            .split(',')
            .map(|x| x.trim().parse().map_err(|_| format!("bad letter {x:?} in image")))
            .collect()
    } else {
        rhs.chars()
            .map(|c| {
                c.to_digit(10)
                    .ok_or_else(|| format!("bad digit {c:?} in image {rhs:?}"))
            })
            .collect()
    }
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = self.rules.keys().all(|&a| a < 10);
        for (i, (a, image)) in self.rules.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{a}->")?;
            if digits && !image.is_empty() {
                for b in image {
                    write!(f, "{b}")?;
                }
            } else {
                let parts: Vec<String> = image.iter().map(u32::to_string).collect();
                write!(f, "[{}]", parts.join(","))?;
            }
        }
        Ok(())
    }
}

/// Renders a word compactly: digit string for single-digit letters,
/// comma-separated otherwise.
pub fn format_word(w: &[Letter]) -> String {
    if w.iter().all(|&a| a < 10) {
        w.iter().map(|a| char::from(b'0' + *a as u8)).collect()
    } else {
        let parts: Vec<String> = w.iter().map(u32::to_string).collect();
        parts.join(",")
    }
}

/// Parses a word in the [`format_word`] notation.
pub fn parse_word(s: &str) -> Result<Vec<Letter>, WordError> {
    let s = s.trim();
    if s.contains(',') {
        s.split(',')
            .enumerate()
            .map(|(i, x)| {
                x.trim().parse().map_err(|_| WordError::Parse {
                    position: i,
                    message: format!("bad letter {x:?}"),
                })
            })
            .collect()
    } else {
        s.char_indices()
            .map(|(i, c)| {
                c.to_digit(10).ok_or(WordError::Parse {
                    position: i,
                    message: format!("bad digit {c:?}"),
                })
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
enum Source {
    FixedPoint {
        morphism: Morphism,
        seed: Letter,
        coding: Option<Coding>,
    },
    Literal,
    UltimatelyPeriodic {
        preperiod: Vec<Letter>,
        period: Vec<Letter>,
    },
}

/// A growable prefix of an infinite (or literal finite) word.
///
/// Materialized letters are never rewritten; extension only appends.
#[derive(Debug, Clone)]
pub struct PrefixBuffer {
    source: Source,
    raw: Vec<Letter>,
    coded: Vec<Letter>,
    cursor: usize,
}

impl PrefixBuffer {
    pub fn fixed_point(morphism: Morphism, seed: Letter) -> Result<Self, WordError> {
        Self::build(morphism, seed, None)
    }

    pub fn coded_fixed_point(
        morphism: Morphism,
        coding: Coding,
        seed: Letter,
    ) -> Result<Self, WordError> {
        Self::build(morphism, seed, Some(coding))
    }

    fn build(morphism: Morphism, seed: Letter, coding: Option<Coding>) -> Result<Self, WordError> {
        if !morphism.alphabet().contains(seed) || !morphism.is_prolongable(seed) {
            return Err(WordError::NotProlongable(seed));
        }
        if let Some(code) = &coding {
            if let Some(&a) = morphism
                .alphabet()
                .letters()
                .iter()
                .find(|&&a| code.get(a).is_none())
            {
                return Err(WordError::UnknownLetter(a));
            }
        }
        let raw = morphism.image(seed).expect("seed has a rule").to_vec();
        let mut buf = PrefixBuffer {
            source: Source::FixedPoint {
                morphism,
                seed,
                coding,
            },
            raw,
            coded: Vec::new(),
            cursor: 1,
        };
        buf.sync_coded();
        Ok(buf)
    }

    /// A finite word; requests past its end fail.
    pub fn literal(word: Vec<Letter>) -> Self {
        PrefixBuffer {
            source: Source::Literal,
            raw: word,
            coded: Vec::new(),
            cursor: 0,
        }
    }

    /// The word `preperiod · period^ω`.
    pub fn ultimately_periodic(preperiod: Vec<Letter>, period: Vec<Letter>) -> Self {
        assert!(!period.is_empty(), "period must be nonempty");
        PrefixBuffer {
            raw: preperiod.clone(),
            source: Source::UltimatelyPeriodic { preperiod, period },
            coded: Vec::new(),
            cursor: 0,
        }
    }

    /// Whether the underlying word is infinite.
    pub fn is_infinite(&self) -> bool {
        !matches!(self.source, Source::Literal)
    }

    /// Materialized letters.
    pub fn letters(&self) -> &[Letter] {
        match &self.source {
            Source::FixedPoint {
                coding: Some(_), ..
            } => &self.coded,
            _ => &self.raw,
        }
    }

    pub fn len(&self) -> usize {
        self.letters().len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters().is_empty()
    }

    /// Every letter the word can use (for fixed points: the coded alphabet
    /// of the morphism, whether or not a letter occurs).
    pub fn alphabet(&self) -> Alphabet {
        match &self.source {
            Source::FixedPoint {
                morphism, coding, ..
            } => match coding {
                Some(c) => Alphabet::new(
                    morphism
                        .alphabet()
                        .letters()
                        .iter()
                        .map(|&a| c.get(a).expect("total coding")),
                ),
                None => morphism.alphabet(),
            },
            Source::Literal => Alphabet::of_word(&self.raw),
            Source::UltimatelyPeriodic { preperiod, period } => {
                Alphabet::new(preperiod.iter().chain(period).copied())
            }
        }
    }

    /// Materializes at least `len` letters.
    pub fn ensure(&mut self, len: usize) -> Result<(), WordError> {
        if self.len() >= len {
            return Ok(());
        }
        match &self.source {
            Source::Literal => {
                return Err(WordError::LiteralExhausted {
                    available: self.raw.len(),
                    requested: len,
                })
            }
            Source::UltimatelyPeriodic { preperiod, period } => {
                self.raw.reserve(len - self.raw.len());
                while self.raw.len() < len {
                    let j = (self.raw.len() - preperiod.len()) % period.len();
                    self.raw.push(period[j]);
                }
            }
            Source::FixedPoint { morphism, seed, .. } => {
                // x = m(x0) m(x1) m(x2) ...; raw holds m(x0..cursor).
                let images: Vec<&[Letter]> = {
                    let alphabet = morphism.alphabet();
                    let max = alphabet.letters().last().copied().unwrap_or(0) as usize;
                    let mut table: Vec<&[Letter]> = vec![&[]; max + 1];
                    for (a, im) in morphism.rules() {
                        table[a as usize] = im;
                    }
                    table
                };
                self.raw.reserve(len.saturating_sub(self.raw.len()));
                while self.raw.len() < len {
                    if self.cursor >= self.raw.len() {
                        return Err(WordError::NonExpanding {
                            letter: *seed,
                            reached: self.raw.len(),
                        });
                    }
                    let b = self.raw[self.cursor] as usize;
                    self.cursor += 1;
                    let image = images[b];
                    self.raw.extend_from_slice(image);
                }
            }
        }
        self.sync_coded();
        Ok(())
    }

    /// Materializes up to `len` letters, stopping early for literals.
    pub fn ensure_at_most(&mut self, len: usize) -> Result<usize, WordError> {
        match self.source {
            Source::Literal => Ok(self.raw.len().min(len)),
            _ => self.ensure(len).map(|()| self.len()),
        }
    }

    fn sync_coded(&mut self) {
        if let Source::FixedPoint {
            coding: Some(code), ..
        } = &self.source
        {
            let start = self.coded.len();
            self.coded.extend(
                self.raw[start..]
                    .iter()
                    .map(|&a| code.get(a).expect("total coding")),
            );
        }
    }
}
