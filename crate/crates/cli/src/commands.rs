use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Subcommand, ValueEnum};

use addcomp::automata::Dfao;
use addcomp::complexity::{
    abelian_additive_profiles, complexity_profile, detect_eventual_period, step_plot_svg,
    ComplexityProfile, Kind, PlotSeries,
};
use addcomp::linrep::LinearRep;
use addcomp::numeration::{parse_digits, PositionalSystem};
use addcomp::powers::{
    abelian_square_class_count, balance_report, balanced_additive_bound, equalizing_valuation,
    fibonacci_abelian_criterion, find_power, find_powers, first_add_ab_mismatch, orders_csv,
    PowerKind,
};
use addcomp::word::{format_word, Alphabet, Letter};

use crate::source::{valuation, WordArgs};
use crate::Global;

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) if p != Path::new("-") => {
            fs::write(p, text).with_context(|| format!("writing {}", p.display()))
        }
        _ => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub fn read_dfao(path: &Path) -> Result<Dfao> {
    read(path)?
        .parse()
        .with_context(|| format!("parsing {}", path.display()))
}

pub fn read_linrep(path: &Path) -> Result<LinearRep> {
    read(path)?
        .parse()
        .with_context(|| format!("parsing {}", path.display()))
}

fn numsys(spec: Option<&str>) -> Result<PositionalSystem> {
    let spec = spec.context("--numsys is required to evaluate at integers")?;
    spec.parse().with_context(|| format!("numeration system {spec:?}"))
}

pub fn generate(word: &WordArgs, len: usize, output: Option<&Path>) -> Result<bool> {
    let mut src = word.prefix()?;
    let got = src.ensure_at_most(len)?;
    let text = format_word(&src.letters()[..got.min(len)]);
    let text = if text.is_empty() { text } else { text + "\n" };
    emit(output, &text)?;
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Factor,
    Abelian,
    Additive,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Factor => Kind::Factor,
            KindArg::Abelian => Kind::Abelian,
            KindArg::Additive => Kind::Additive,
        }
    }
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    #[command(flatten)]
    word: WordArgs,
    #[arg(long, default_value_t = 100)]
    n_max: usize,
    /// Complexities to compute
    #[arg(short = 'k', long = "kind", value_enum, value_delimiter = ',', default_value = "abelian,additive")]
    kinds: Vec<KindArg>,
    /// Letter weights for additive complexity, e.g. "0:0,1:1,2:3"
    #[arg(short = 'v', long)]
    valuation: Option<String>,
    /// Add the series abelian minus additive
    #[arg(long)]
    difference: bool,
    /// CSV destination ("-" for stdout)
    #[arg(long)]
    csv: Option<PathBuf>,
    /// SVG step plot destination
    #[arg(long)]
    svg: Option<PathBuf>,
    #[arg(long)]
    title: Option<String>,
}

fn period_summary(p: &ComplexityProfile) -> String {
    let v = &p.values;
    match detect_eventual_period(v, v.len() / 2, v.len() / 3) {
        Some(e) => format!("{}: {e}", p.kind),
        None => format!("{}: no eventual period up to n={}", p.kind, v.len() - 1),
    }
}

pub fn profile(g: &Global, args: &ProfileArgs) -> Result<bool> {
    let mut src = args.word.prefix()?;
    let v = valuation(args.valuation.as_deref(), &src)?;
    let cfg = g.scan();
    let mut kinds: Vec<Kind> = args.kinds.iter().map(|&k| k.into()).collect();
    kinds.dedup();
    let mut profiles: Vec<ComplexityProfile> = Vec::new();
    if kinds.contains(&Kind::Abelian) && kinds.contains(&Kind::Additive) {
        let (ab, add) = abelian_additive_profiles(&mut src, args.n_max, &v, cfg)?;
        for k in &kinds {
            match k {
                Kind::Abelian => profiles.push(ab.clone()),
                Kind::Additive => profiles.push(add.clone()),
                Kind::Factor => profiles.push(complexity_profile(&mut src, args.n_max, *k, None, cfg)?),
            }
        }
    } else {
        for &k in &kinds {
            profiles.push(complexity_profile(&mut src, args.n_max, k, Some(&v), cfg)?);
        }
    }

    let difference: Option<Vec<i64>> = if args.difference {
        let get = |k: Kind| profiles.iter().find(|p| p.kind == k);
        match (get(Kind::Abelian), get(Kind::Additive)) {
            (Some(a), Some(d)) => Some(
                a.values
                    .iter()
                    .zip(&d.values)
                    .map(|(&x, &y)| x as i64 - y as i64)
                    .collect(),
            ),
            _ => bail!("--difference needs both abelian and additive"),
        }
    } else {
        None
    };

    let mut out = String::new();
    for p in &profiles {
        writeln!(out, "{}", period_summary(p))?;
        if let Some(n) = p.stabilized.iter().position(|s| !s) {
            writeln!(
                out,
                "warning: {} values from n={n} did not stabilize within {} letters",
                p.kind, g.cap
            )?;
        }
    }
    if let Some(d) = &difference {
        let first = d.iter().position(|&x| x != 0);
        match first {
            Some(n) => writeln!(out, "difference: first nonzero at n={n} ({})", d[n])?,
            None => writeln!(out, "difference: zero up to n={}", args.n_max)?,
        }
    }

    if let Some(path) = &args.csv {
        let mut csv = String::from("n");
        for p in &profiles {
            write!(csv, ",{}", p.kind)?;
        }
        if difference.is_some() {
            csv.push_str(",difference");
        }
        csv.push('\n');
        if kinds.contains(&Kind::Additive) {
            writeln!(csv, "# valuation={v}")?;
        }
        for n in 0..=args.n_max {
            for p in &profiles {
                if !p.stabilized[n] {
                    writeln!(csv, "# warning: {} at n={n} did not stabilize", p.kind)?;
                }
            }
            write!(csv, "{n}")?;
            for p in &profiles {
                write!(csv, ",{}", p.values[n])?;
            }
            if let Some(d) = &difference {
                write!(csv, ",{}", d[n])?;
            }
            csv.push('\n');
        }
        emit(Some(path), &csv)?;
    }
    if let Some(path) = &args.svg {
        let mut series: Vec<PlotSeries> = profiles
            .iter()
            .map(|p| PlotSeries {
                label: p.kind.to_string(),
                values: p.values.iter().map(|&x| x as i64).collect(),
            })
            .collect();
        if let Some(d) = difference {
            series.push(PlotSeries {
                label: "difference".into(),
                values: d,
            });
        }
        let title = args.title.clone().unwrap_or_else(|| "complexity".into());
        fs::write(path, step_plot_svg(&title, &series))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    if args.csv.as_deref() == Some(Path::new("-")) {
        eprint!("{out}");
    } else {
        print!("{out}");
    }
    Ok(true)
}

#[derive(Debug, Subcommand)]
pub enum DfaoCommand {
    /// Output on a digit string, or on the representations of integers
    Run {
        dfao: PathBuf,
        #[arg(long)]
        numsys: Option<String>,
        /// Most-significant-first digits
        #[arg(long, conflicts_with = "n")]
        digits: Option<String>,
        n: Vec<u64>,
    },
    /// Compare against a complexity profile computed from a word
    Compare {
        dfao: PathBuf,
        #[arg(long)]
        numsys: String,
        #[command(flatten)]
        word: WordArgs,
        #[arg(short = 'k', long, value_enum, default_value = "additive")]
        kind: KindArg,
        #[arg(short = 'v', long)]
        valuation: Option<String>,
        #[arg(long, default_value_t = 200)]
        n_max: usize,
    },
}

pub fn dfao(g: &Global, cmd: DfaoCommand) -> Result<bool> {
    match cmd {
        DfaoCommand::Run { dfao, numsys: sys, digits, n } => {
            let d = read_dfao(&dfao)?;
            if let Some(ds) = digits {
                println!("{}", d.run(&parse_digits(&ds)?)?);
            } else {
                if n.is_empty() {
                    bail!("give --digits or at least one integer");
                }
                let sys = numsys(sys.as_deref())?;
                for n in n {
                    println!("{n} {}", d.sequence_term(&sys, n)?);
                }
            }
            Ok(true)
        }
        DfaoCommand::Compare {
            dfao,
            numsys: sys,
            word,
            kind,
            valuation: val,
            n_max,
        } => {
            let d = read_dfao(&dfao)?;
            let sys = numsys(Some(&sys))?;
            let mut src = word.prefix()?;
            let v = valuation(val.as_deref(), &src)?;
            let p = complexity_profile(&mut src, n_max, kind.into(), Some(&v), g.scan())?;
            match d.compare_with_oracle(&sys, |n| p.values[n as usize] as i64, n_max as u64)? {
                None => {
                    println!("automaton agrees with {} complexity for n <= {n_max}", p.kind);
                    Ok(true)
                }
                Some(n) => {
                    println!(
                        "first mismatch at n={n}: automaton {}, {} complexity {}",
                        d.sequence_term(&sys, n)?,
                        p.kind,
                        p.values[n as usize]
                    );
                    Ok(false)
                }
            }
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum LinrepCommand {
    /// λ·μ(w)·γ on a digit string or on representations of integers
    Eval {
        rep: PathBuf,
        #[arg(long)]
        numsys: Option<String>,
        #[arg(long, conflicts_with = "n")]
        digits: Option<String>,
        n: Vec<u64>,
    },
    /// Minimal integer representation of the same function
    Minimize {
        rep: PathBuf,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Build an automaton from the reachable row vectors
    Semigroup {
        rep: PathBuf,
        /// Use the representation as given
        #[arg(long)]
        no_minimize: bool,
        #[arg(long, default_value_t = 10_000)]
        max_states: usize,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
}

pub fn linrep(cmd: LinrepCommand) -> Result<bool> {
    match cmd {
        LinrepCommand::Eval { rep, numsys: sys, digits, n } => {
            let r = read_linrep(&rep)?;
            if let Some(ds) = digits {
                println!("{}", r.evaluate(&parse_digits(&ds)?)?);
            } else {
                if n.is_empty() {
                    bail!("give --digits or at least one integer");
                }
                let sys = numsys(sys.as_deref())?;
                for n in n {
                    println!("{n} {}", r.term(&sys, n)?);
                }
            }
        }
        LinrepCommand::Minimize { rep, output } => {
            let r = read_linrep(&rep)?;
            let m = r.minimize();
            eprintln!("dimension {} -> {}", r.dim(), m.dim());
            emit(output.as_deref(), &m.to_string())?;
        }
        LinrepCommand::Semigroup {
            rep,
            no_minimize,
            max_states,
            output,
        } => {
            let r = read_linrep(&rep)?;
            let r = if no_minimize { r } else { r.minimize() };
            let s = r.semigroup_trick(max_states)?;
            eprintln!("{} states", s.dfao.num_states());
            emit(output.as_deref(), &s.dfao.to_string())?;
        }
    }
    Ok(true)
}

#[derive(Debug, Subcommand)]
pub enum PowersCommand {
    /// First k-power of one order
    Find {
        #[command(flatten)]
        word: WordArgs,
        #[arg(long, default_value = "abelian")]
        kind: PowerKind,
        #[arg(short = 'k', long = "power", default_value_t = 2)]
        power: usize,
        #[arg(long)]
        order: usize,
        #[arg(long, default_value_t = 100_000)]
        window: usize,
        #[arg(short = 'v', long)]
        valuation: Option<String>,
    },
    /// k-powers for orders 1..=max-order, as CSV
    Orders {
        #[command(flatten)]
        word: WordArgs,
        #[arg(long, default_value = "abelian")]
        kind: PowerKind,
        #[arg(short = 'k', long = "power", default_value_t = 2)]
        power: usize,
        #[arg(long)]
        max_order: usize,
        #[arg(long, default_value_t = 100_000)]
        window: usize,
        #[arg(short = 'v', long)]
        valuation: Option<String>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Number of abelian classes of squares for orders 1..=max-order
    SquareClasses {
        #[command(flatten)]
        word: WordArgs,
        #[arg(long)]
        max_order: usize,
        #[arg(long, default_value_t = 50_000)]
        window: usize,
    },
    /// Residue test for abelian k-powers of order n in the Fibonacci word
    FibCriterion {
        #[arg(short = 'k', long = "power")]
        power: u64,
        #[arg(long)]
        n_max: u64,
    },
}

pub fn powers(g: &Global, cmd: PowersCommand) -> Result<bool> {
    match cmd {
        PowersCommand::Find {
            word,
            kind,
            power,
            order,
            window,
            valuation: val,
        } => {
            let mut src = word.prefix()?;
            let v = val.as_deref().map(|s| valuation(Some(s), &src)).transpose()?;
            println!("{}", find_power(&mut src, kind, power, order, window, v.as_ref())?);
        }
        PowersCommand::Orders {
            word,
            kind,
            power,
            max_order,
            window,
            valuation: val,
            csv,
        } => {
            let mut src = word.prefix()?;
            let v = val.as_deref().map(|s| valuation(Some(s), &src)).transpose()?;
            let orders: Vec<usize> = (1..=max_order).collect();
            let rs = find_powers(&mut src, kind, power, &orders, window, v.as_ref(), g.exec())?;
            let mut text = orders_csv(&orders, &rs);
            writeln!(text, "# found=false means none within the first {window} letters")?;
            emit(csv.as_deref(), &text)?;
        }
        PowersCommand::SquareClasses {
            word,
            max_order,
            window,
        } => {
            let mut src = word.prefix()?;
            println!("order,classes");
            for m in 1..=max_order {
                println!("{m},{}", abelian_square_class_count(&mut src, m, window)?);
            }
        }
        PowersCommand::FibCriterion { power, n_max } => {
            if power == 0 {
                bail!("k must be positive");
            }
            println!("n,holds");
            for n in 1..=n_max {
                println!("{n},{}", fibonacci_abelian_criterion(power, n));
            }
        }
    }
    Ok(true)
}

pub fn balance(g: &Global, word: &WordArgs, n_max: usize, window: usize) -> Result<bool> {
    let mut src = word.prefix()?;
    let r = balance_report(&mut src, n_max, window, g.exec())?;
    println!(
        "observed C = {} over lengths 1..={} in the first {} letters",
        r.c_observed, r.n_scanned, r.window
    );
    if let Some(w) = r.witness {
        println!(
            "witness: letter {} in the length-{} factors at {} and {}",
            w.letter, w.length, w.first, w.second
        );
    }
    Ok(true)
}

#[derive(Debug, Subcommand)]
pub enum ValuationCommand {
    /// Smallest weights with (a_1 + ... + a_{j-1})·C < a_j
    Equalize {
        /// Letters in increasing order, e.g. "0,1,2"
        #[arg(long, value_delimiter = ',', required = true)]
        alphabet: Vec<Letter>,
        #[arg(short = 'C', long = "balance")]
        c: u64,
    },
    /// Largest additive complexity a C-balanced word can have
    Bound {
        #[arg(long, value_delimiter = ',', required = true)]
        weights: Vec<u64>,
        #[arg(short = 'C', long = "balance")]
        c: u64,
    },
    /// First n where additive and abelian complexity differ
    Mismatch {
        #[command(flatten)]
        word: WordArgs,
        #[arg(short = 'v', long)]
        valuation: Option<String>,
        #[arg(long, default_value_t = 100)]
        n_max: usize,
    },
}

pub fn valuation_cmd(g: &Global, cmd: ValuationCommand) -> Result<bool> {
    match cmd {
        ValuationCommand::Equalize { alphabet, c } => {
            println!("{}", equalizing_valuation(&Alphabet::new(alphabet), c)?);
        }
        ValuationCommand::Bound { weights, c } => {
            println!("{}", balanced_additive_bound(&weights, c));
        }
        ValuationCommand::Mismatch {
            word,
            valuation: val,
            n_max,
        } => {
            let mut src = word.prefix()?;
            let v = valuation(val.as_deref(), &src)?;
            match first_add_ab_mismatch(&mut src, &v, n_max, g.scan())? {
                Some(n) => println!("first mismatch at n={n}"),
                None => println!("no mismatch for n <= {n_max}"),
            }
        }
    }
    Ok(true)
}
