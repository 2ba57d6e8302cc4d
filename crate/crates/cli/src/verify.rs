use std::collections::HashSet;
use std::fmt::Display;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::Args;
use serde::Serialize;

use addcomp::automata::Dfao;
use addcomp::complexity::{
    abelian_additive_profiles, complexity_profile, detect_eventual_period, parikh_vector_count,
    weight_range, Kind, ScanConfig,
};
use addcomp::fixtures;
use addcomp::linrep::LinearRep;
use addcomp::numeration::{parse_digits, PositionalSystem};
use addcomp::powers::{
    abelian_square_class_count, equalizing_valuation, fibonacci_abelian_criterion, find_powers,
    first_add_ab_mismatch, PowerKind,
};
use addcomp::word::{parse_word, Letter, Morphism, PrefixBuffer, Valuation};

use crate::Global;

pub const SUITES: &[&str] = &[
    "ternary-tm",
    "lm-tm",
    "vtm",
    "parikh-collinear",
    "tribonacci",
    "cww",
    "ccss",
    "semigroup",
    "fib-criterion",
    "trib-squares",
    "valuations",
    "properties",
];

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Suites to run, or "all"
    #[arg(default_value = "all")]
    suites: Vec<String>,
    /// Directory holding automaton and representation fixtures to compare against
    #[arg(long)]
    fixtures: Option<PathBuf>,
    /// Write the JSON-lines report here instead of stdout
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct Record {
    suite: &'static str,
    check: String,
    pass: bool,
    expected: String,
    actual: String,
    elapsed_ms: u128,
}

struct Ctx {
    cfg: ScanConfig,
    fixtures: Option<PathBuf>,
    suite: &'static str,
    started: Instant,
    records: Vec<Record>,
}

impl Ctx {
    fn record(&mut self, check: impl Into<String>, expected: impl Display, actual: impl Display, pass: bool) {
        let now = Instant::now();
        self.records.push(Record {
            suite: self.suite,
            check: check.into(),
            pass,
            expected: expected.to_string(),
            actual: actual.to_string(),
            elapsed_ms: (now - self.started).as_millis(),
        });
        self.started = now;
    }

    fn eq<T: PartialEq + Display>(&mut self, check: impl Into<String>, expected: T, actual: T) {
        let pass = expected == actual;
        self.record(check, expected, actual, pass);
    }

    fn series(&mut self, check: impl Into<String>, expected: &[usize], actual: &[usize]) {
        match expected.iter().zip(actual).position(|(e, a)| e != a) {
            Some(n) => self.record(check, format!("n={n}: {}", expected[n]), format!("n={n}: {}", actual[n]), false),
            None if expected.len() != actual.len() => {
                self.record(check, format!("{} terms", expected.len()), format!("{} terms", actual.len()), false)
            }
            None => self.record(check, summarize(expected), summarize(actual), true),
        }
    }

    /// Fixture text from the override directory, or the bundled copy.
    fn fixture(&self, file: &str, bundled: &str) -> Result<String> {
        match &self.fixtures {
            Some(dir) => {
                let p = dir.join(file);
                fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))
            }
            None => Ok(bundled.to_string()),
        }
    }

    fn fixture_dfao(&self, file: &str, bundled: &str) -> Result<Dfao> {
        self.fixture(file, bundled)?.parse().with_context(|| format!("parsing fixture {file}"))
    }

    fn text(&mut self, check: &str, expected: &str, actual: &str) {
        let pass = expected == actual;
        if !pass {
            eprintln!("{}/{check}: fixture mismatch", self.suite);
            eprint!("{}", line_diff(expected, actual));
        }
        let lines = |s: &str| format!("{} lines", s.lines().count());
        self.record(check, lines(expected), lines(actual), pass);
    }
}

fn summarize(v: &[usize]) -> String {
    match detect_eventual_period(v, v.len() / 2, v.len() / 3) {
        Some(p) => format!("{p} for n <= {}", v.len().saturating_sub(1)),
        None => format!("{} terms", v.len()),
    }
}

/// Lines only in `expected` as "-", lines only in `actual` as "+".
pub fn line_diff(expected: &str, actual: &str) -> String {
    let (e, a): (Vec<&str>, Vec<&str>) = (expected.lines().collect(), actual.lines().collect());
    let mut out = String::new();
    for i in 0..e.len().max(a.len()) {
        match (e.get(i), a.get(i)) {
            (Some(x), Some(y)) if x == y => {}
            (x, y) => {
                if let Some(x) = x {
                    out.push_str(&format!("-{:>4} {x}\n", i + 1));
                }
                if let Some(y) = y {
                    out.push_str(&format!("+{:>4} {y}\n", i + 1));
                }
            }
        }
    }
    out
}

fn word(morphism: &str) -> Result<PrefixBuffer> {
    Ok(PrefixBuffer::fixed_point(morphism.parse::<Morphism>()?, 0)?)
}

fn identity(w: &PrefixBuffer) -> Valuation {
    Valuation::identity(&w.alphabet())
}

fn periodic(head: &[usize], period: &[usize], len: usize) -> Vec<usize> {
    (0..len)
        .map(|n| head.get(n).copied().unwrap_or_else(|| period[(n - head.len()) % period.len()]))
        .collect()
}

fn ternary_tm(c: &mut Ctx) -> Result<()> {
    let mut w = word("0->012 1->120 2->201")?;
    let v = identity(&w);
    let (ab, add) = abelian_additive_profiles(&mut w, 200, &v, c.cfg)?;
    c.series("additive n<=200", &periodic(&[1, 3], &[5], 201), &add.values);
    c.series("abelian n<=200", &periodic(&[1, 3], &[6, 7, 6], 201), &ab.values);
    let d = c.fixture_dfao("ternary_tm_additive.dfao", fixtures::TERNARY_TM_ADDITIVE_DFAO)?;
    let base3 = PositionalSystem::base(3)?;
    let auto: Vec<usize> = (0..=200).map(|n| d.sequence_term(&base3, n).map(|x| x as usize)).collect::<Result<_, _>>()?;
    c.series("additive vs automaton", &auto, &add.values);
    Ok(())
}

fn lm_tm(c: &mut Ctx) -> Result<()> {
    for (l, m) in [(1, 3), (2, 3), (1, 4), (1, 2), (2, 4)] {
        let mut w = fixtures::named_prefix(&format!("tm:{l},{m}")).context("tm word")??;
        let v = identity(&w);
        let (ab, add) = abelian_additive_profiles(&mut w, 100, &v, c.cfg)?;
        if m == 2 * l {
            c.series(format!("({l},{m}) additive"), &periodic(&[1, 3], &[5], 101), &add.values);
        } else {
            c.series(format!("({l},{m}) additive = abelian"), &ab.values, &add.values);
            c.series(format!("({l},{m}) abelian"), &periodic(&[1, 3, 6], &[7, 6, 6], 101), &ab.values);
        }
    }
    Ok(())
}

fn vtm(c: &mut Ctx) -> Result<()> {
    let mut w = word("0->012 1->02 2->1")?;
    let v = identity(&w);
    let (ab, add) = abelian_additive_profiles(&mut w, 2000, &v, c.cfg)?;
    c.series("additive 1<=n<=500", &[3; 500], &add.values[1..=500]);
    let max = *ab.values.iter().max().unwrap_or(&0);
    c.record("abelian maximum n<=2000", ">= 5", max, max >= 5);
    let scales: Vec<usize> = (0..11)
        .map(|j| ab.values[1 << j..(2usize << j).min(2001)].iter().copied().max().unwrap_or(0))
        .collect();
    let ok = scales.windows(2).all(|p| p[0] <= p[1]);
    c.record("abelian maxima over doubling scales", "nondecreasing", format!("{scales:?}"), ok);
    Ok(())
}

fn parikh_collinear(c: &mut Ctx) -> Result<()> {
    let (m, _) = fixtures::named_word("collinear").context("collinear")?;
    c.eq("morphism Parikh-collinear", true, m.is_parikh_collinear());
    let mut w = PrefixBuffer::fixed_point(m, 0)?;
    let v = identity(&w);
    let (ab, add) = abelian_additive_profiles(&mut w, 243, &v, c.cfg)?;
    let d = c.fixture_dfao("collinear_additive.dfao", fixtures::COLLINEAR_ADDITIVE_DFAO)?;
    let base3 = PositionalSystem::base(3)?;
    let auto: Vec<usize> = (0..=243).map(|n| d.sequence_term(&base3, n).map(|x| x as usize)).collect::<Result<_, _>>()?;
    c.series("additive vs automaton n<=243", &auto, &add.values);
    c.series("additive n<=243", &periodic(&[1, 3, 4], &[3, 5, 5], 244), &add.values);
    c.series("abelian n<=243", &periodic(&[1, 3, 5], &[3, 7, 7], 244), &ab.values);
    Ok(())
}

fn tribonacci(c: &mut Ctx) -> Result<()> {
    let mut w = word("0->01 1->02 2->0")?;
    let cfg = ScanConfig { cap: c.cfg.cap.max(1_000_000), ..c.cfg };
    let v = identity(&w);
    let add = complexity_profile(&mut w, 478, Kind::Additive, Some(&v), cfg)?;
    let out: Vec<usize> = (1..=300).filter(|&n| !(3..=5).contains(&add.values[n])).collect();
    c.record("additive in {3,4,5} for 1<=n<=300", "[]", format!("{out:?}"), out.is_empty());
    let trib = PositionalSystem::tribonacci();
    for (digits, expected) in [("100", 3usize), ("1101", 4), ("1101001100", 5)] {
        let n = trib.val(&parse_digits(digits)?)? as usize;
        c.eq(format!("additive({n}), n = [{digits}]_T"), expected, add.values[n]);
    }
    let mut gaps = Vec::new();
    for n in 1..=300 {
        if !weight_range(&mut w, n, &v, cfg)?.contiguous {
            gaps.push(n);
        }
    }
    c.record("weight ranges contiguous n<=300", "[]", format!("{gaps:?}"), gaps.is_empty());
    Ok(())
}

fn cww(c: &mut Ctx) -> Result<()> {
    let mut w = word("0->01 1->12 2->20")?;
    let v = identity(&w);
    let add = complexity_profile(&mut w, 256, Kind::Additive, Some(&v), c.cfg)?;
    let expected: Vec<usize> = (1..=256usize).map(|n| 2 * n.ilog2() as usize + 3).collect();
    c.series("additive = 2 floor(log2 n) + 3", &expected, &add.values[1..]);
    Ok(())
}

fn ccss(c: &mut Ctx) -> Result<()> {
    let mut w = word("0->03 1->43 3->1 4->01")?;
    let orders: Vec<usize> = (1..=30).collect();
    let cubes = find_powers(&mut w, PowerKind::Additive, 3, &orders, 10_000, None, c.cfg.execution)?;
    let found: Vec<usize> = orders.iter().zip(&cubes).filter(|(_, r)| r.is_found()).map(|(m, _)| *m).collect();
    c.record("no additive cube of order <= 30 in 10^4 letters", "[]", format!("{found:?}"), found.is_empty());
    let v = identity(&w);
    let mismatch = first_add_ab_mismatch(&mut w, &v, 60, c.cfg)?;
    c.eq("first additive/abelian mismatch", "23".to_string(), format!("{mismatch:?}").replace("Some(", "").replace(')', ""));
    let a = parse_word("11011031430110343430314")?;
    let b = parse_word("30310110110314303434303")?;
    let weight = |x: &[Letter]| x.iter().map(|&l| l as u64).sum::<u64>();
    let (mut sa, mut sb) = (a.clone(), b.clone());
    sa.sort_unstable();
    sb.sort_unstable();
    c.eq("pair has equal weight", weight(&a), weight(&b));
    c.record("pair is not abelian equivalent", "distinct", if sa != sb { "distinct" } else { "equal" }, sa != sb);
    w.ensure(200_000)?;
    let occurs = |x: &[Letter]| w.letters().windows(23).any(|f| f == x);
    c.eq("pair occurs in the word", true, occurs(&a) && occurs(&b));
    Ok(())
}

fn semigroup(c: &mut Ctx) -> Result<()> {
    let text = c.fixture("rudin_shapiro.linrep", fixtures::RUDIN_SHAPIRO_LINREP)?;
    let rep: LinearRep = text.parse().context("parsing fixture rudin_shapiro.linrep")?;
    let min = rep.minimize();
    c.record("minimized dimension", "<= 4", min.dim(), min.dim() <= 4);
    let dfao = min.semigroup_trick(1000)?.dfao;
    let expected = c.fixture("rudin_shapiro.dfao", fixtures::RUDIN_SHAPIRO_DFAO)?;
    c.text("automaton text identical to fixture", &expected, &dfao.to_string());
    let base2 = PositionalSystem::base(2)?;
    let first: Vec<i64> = (0..16).map(|n| dfao.sequence_term(&base2, n)).collect::<Result<_, _>>()?;
    c.eq(
        "first 16 terms",
        "[0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 1, 1, 1, 0, 1]".to_string(),
        format!("{first:?}"),
    );
    let mut bad = None;
    'outer: for len in 0..=12u32 {
        for bits in 0..(1u32 << len) {
            let w: Vec<u32> = (0..len).rev().map(|i| (bits >> i) & 1).collect();
            if min.evaluate(&w)? != rep.evaluate(&w)? {
                bad = Some(w);
                break 'outer;
            }
        }
    }
    c.record("minimized agrees on strings of length <= 12", "none", format!("{bad:?}"), bad.is_none());
    Ok(())
}

fn fib_criterion(c: &mut Ctx) -> Result<()> {
    let mut fib = word("0->01 1->0")?;
    let orders: Vec<usize> = (1..=40).collect();
    for k in [2usize, 3] {
        let found = find_powers(&mut fib, PowerKind::Abelian, k, &orders, 30_000, None, c.cfg.execution)?;
        let bad: Vec<usize> = orders
            .iter()
            .zip(&found)
            .filter(|(&n, r)| fibonacci_abelian_criterion(k as u64, n as u64) != r.is_found())
            .map(|(&n, _)| n)
            .collect();
        c.record(format!("k={k}: criterion = search for n<=40"), "[]", format!("{bad:?}"), bad.is_empty());
    }
    Ok(())
}

fn trib_squares(c: &mut Ctx) -> Result<()> {
    let mut trib = word("0->01 1->02 2->0")?;
    let orders: Vec<usize> = (1..=200).collect();
    let found = find_powers(&mut trib, PowerKind::Abelian, 2, &orders, 50_000, None, c.cfg.execution)?;
    let missing: Vec<usize> = orders.iter().zip(&found).filter(|(_, r)| !r.is_found()).map(|(n, _)| *n).collect();
    c.record("abelian square of every order <= 200", "[]", format!("{missing:?}"), missing.is_empty());
    let mut seen = HashSet::new();
    let mut odd = Vec::new();
    for n in 1..=200 {
        let k = abelian_square_class_count(&mut trib, n, 50_000)?;
        if k != 1 && k != 2 {
            odd.push((n, k));
        }
        seen.insert(k);
    }
    c.record("class counts in {1,2}", "[]", format!("{odd:?}"), odd.is_empty());
    let mut seen: Vec<usize> = seen.into_iter().collect();
    seen.sort_unstable();
    c.eq("class counts occurring", "[1, 2]".to_string(), format!("{seen:?}"));
    Ok(())
}

fn valuations(c: &mut Ctx) -> Result<()> {
    for (l, n_max, expected) in [(3, 60, Some(11)), (4, 100, Some(43)), (5, 2000, None)] {
        let mut w = fixtures::named_prefix(&format!("vtm:{l}")).context("vtm variant")??;
        let v = identity(&w);
        let got = first_add_ab_mismatch(&mut w, &v, n_max, c.cfg)?;
        c.eq(format!("vtm:{l} first mismatch n<={n_max}"), format!("{expected:?}"), format!("{got:?}"));
    }
    let mut trib = word("0->01 1->02 2->0")?;
    let v = equalizing_valuation(&trib.alphabet(), 2)?;
    c.eq("equalizing valuation k=3 C=2", "0:0,1:1,2:3".to_string(), v.to_string());
    let (ab, add) = abelian_additive_profiles(&mut trib, 300, &v, c.cfg)?;
    c.series("tribonacci additive = abelian n<=300", &ab.values, &add.values);
    Ok(())
}

const PROPERTY_WORDS: &[&str] = &[
    "0->01 1->10",
    "0->01 1->0",
    "0->01 1->02 2->0",
    "0->012 1->02 2->1",
    "0->0121 1->12 2->3 3->30",
    "0->0011 1->1",
    "0->03 1->43 3->1 4->01",
    "0->02 1->2 2->211",
    "0->010 1->11",
    "0->0123 1->2 2->31 3->0",
];

fn properties(c: &mut Ctx) -> Result<()> {
    for spec in PROPERTY_WORDS {
        let mut w = word(spec)?;
        let k = w.alphabet().len();
        w.ensure(1 << 15)?;
        let mut p = PrefixBuffer::literal(w.letters()[..1 << 15].to_vec());
        let v = identity(&p);
        let f = complexity_profile(&mut p, 40, Kind::Factor, None, c.cfg)?;
        let (ab, add) = abelian_additive_profiles(&mut p, 40, &v, c.cfg)?;
        let bad: Vec<usize> = (0..=40usize)
            .filter(|&n| {
                let (a, b, x) = (add.values[n], ab.values[n], f.values[n]);
                let cap = (k as u128).saturating_pow(n as u32);
                !(1 <= a && a <= b && b <= x && x as u128 <= cap && a as u128 <= parikh_vector_count(n, k))
            })
            .collect();
        c.record(format!("{spec}: chain holds n<=40"), "[]", format!("{bad:?}"), bad.is_empty());
    }
    for (pre, per) in [("", "01"), ("2", "011"), ("0123", "3"), ("10", "0112"), ("", "0")] {
        let (pre, per) = (parse_word(pre)?, parse_word(per)?);
        let bound = pre.len() + per.len();
        let label = format!("{pre:?}{per:?}^w: additive <= {bound}");
        let mut w = PrefixBuffer::ultimately_periodic(pre, per);
        let v = identity(&w);
        let add = complexity_profile(&mut w, 40, Kind::Additive, Some(&v), c.cfg)?;
        let max = add.values.iter().copied().max().unwrap_or(0);
        c.record(label, format!("<= {bound}"), max, max <= bound);
    }
    Ok(())
}

fn suite_fn(name: &str) -> Option<(&'static str, fn(&mut Ctx) -> Result<()>)> {
    let f: fn(&mut Ctx) -> Result<()> = match name {
        "ternary-tm" => ternary_tm,
        "lm-tm" => lm_tm,
        "vtm" => vtm,
        "parikh-collinear" => parikh_collinear,
        "tribonacci" => tribonacci,
        "cww" => cww,
        "ccss" => ccss,
        "semigroup" => semigroup,
        "fib-criterion" => fib_criterion,
        "trib-squares" => trib_squares,
        "valuations" => valuations,
        "properties" => properties,
        _ => return None,
    };
    SUITES.iter().find(|s| **s == name).map(|s| (*s, f))
}

pub fn run(g: &Global, args: &VerifyArgs) -> Result<bool> {
    let mut names: Vec<&str> = Vec::new();
    for s in &args.suites {
        if s == "all" {
            names.extend(SUITES);
        } else if suite_fn(s).is_some() {
            names.push(s);
        } else {
            bail!("unknown suite {s:?}; known: all, {}", SUITES.join(", "));
        }
    }
    let mut ctx = Ctx {
        cfg: g.scan(),
        fixtures: args.fixtures.clone(),
        suite: "",
        started: Instant::now(),
        records: Vec::new(),
    };
    let mut seen = HashSet::new();
    for name in names {
        if !seen.insert(name) {
            continue;
        }
        let (suite, f) = suite_fn(name).expect("checked above");
        ctx.suite = suite;
        ctx.started = Instant::now();
        if let Err(e) = f(&mut ctx) {
            // an error inside a suite is a failed check, not a crash
            ctx.record("suite ran to completion", "ok", format!("{e:#}"), false);
        }
    }
    let mut out = String::new();
    for r in &ctx.records {
        out.push_str(&serde_json::to_string(r)?);
        out.push('\n');
    }
    match &args.report {
        Some(p) => fs::write(p, &out).with_context(|| format!("writing {}", p.display()))?,
        None => std::io::stdout().write_all(out.as_bytes())?,
    }
    let failed: Vec<&Record> = ctx.records.iter().filter(|r| !r.pass).collect();
    for r in &failed {
        eprintln!("FAIL {}/{}: expected {}, got {}", r.suite, r.check, r.expected, r.actual);
    }
    eprintln!("{} checks, {} failed", ctx.records.len(), failed.len());
    Ok(failed.is_empty())
}
