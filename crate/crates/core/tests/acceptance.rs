//! End-to-end acceptance checks with pinned values and wall-clock budgets.
//!
//! Runs under a custom harness so that every criterion prints exactly one
//! pass/fail line whether or not output capture is on.

use std::collections::HashSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use addcomp::automata::Dfao;
use addcomp::complexity::{
    abelian_additive_profiles, complexity_profile, parikh_vector_count, weight_range, Kind,
    ScanConfig,
};
use addcomp::exec::Execution;
use addcomp::fixtures;
use addcomp::linrep::LinearRep;
use addcomp::numeration::{parse_digits, PositionalSystem};
use addcomp::powers::{
    abelian_square_class_count, equalizing_valuation, equalizing_weights, fibonacci_abelian_criterion,
    find_powers, first_add_ab_mismatch, PowerKind, PowerSearch,
};
use addcomp::word::{parse_word, Letter, Morphism, PrefixBuffer, Valuation};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};

type Outcome = Result<(), String>;

macro_rules! check {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn word(morphism: &str) -> PrefixBuffer {
    PrefixBuffer::fixed_point(morphism.parse::<Morphism>().expect("morphism parses"), 0)
        .expect("prolongable on 0")
}

fn identity(w: &PrefixBuffer) -> Valuation {
    Valuation::identity(&w.alphabet())
}

/// `head` followed by `period` repeated, truncated to `len` terms.
fn eventually_periodic(head: &[usize], period: &[usize], len: usize) -> Vec<usize> {
    (0..len)
        .map(|n| match head.get(n) {
            Some(&v) => v,
            None => period[(n - head.len()) % period.len()],
        })
        .collect()
}

fn first_difference(actual: &[usize], expected: &[usize]) -> Option<(usize, usize, usize)> {
    actual
        .iter()
        .zip(expected)
        .enumerate()
        .find(|(_, (a, e))| a != e)
        .map(|(n, (a, e))| (n, *a, *e))
}

fn same(label: &str, actual: &[usize], expected: &[usize]) -> Outcome {
    check!(
        actual.len() == expected.len(),
        "{label}: {} values, expected {}",
        actual.len(),
        expected.len()
    );
    match first_difference(actual, expected) {
        Some((n, a, e)) => Err(format!("{label}: n={n} gives {a}, expected {e}")),
        None => Ok(()),
    }
}

fn ternary_thue_morse() -> Outcome {
    let mut w = word("0->012 1->120 2->201");
    let v = identity(&w);
    let (ab, add) = abelian_additive_profiles(&mut w, 200, &v, ScanConfig::default()).map_err(|e| e.to_string())?;
    check!(ab.is_fully_stabilized(), "abelian profile did not stabilize");
    same("additive", &add.values, &eventually_periodic(&[1, 3], &[5], 201))?;
    same("abelian", &ab.values, &eventually_periodic(&[1, 3], &[6, 7, 6], 201))
}

fn lm_thue_morse() -> Outcome {
    let tm = |l: Letter, m: Letter| {
        let morphism =
            Morphism::new([(0, vec![0, l, m]), (l, vec![l, m, 0]), (m, vec![m, 0, l])]).unwrap();
        PrefixBuffer::fixed_point(morphism, 0).unwrap()
    };
    for (l, m) in [(1, 3), (2, 3), (1, 4)] {
        let mut w = tm(l, m);
        let v = identity(&w);
        let (ab, add) = abelian_additive_profiles(&mut w, 100, &v, ScanConfig::default()).map_err(|e| e.to_string())?;
        let label = format!("({l},{m})");
        same(&format!("{label} additive vs abelian"), &add.values, &ab.values)?;
        same(&label, &ab.values, &eventually_periodic(&[1, 3, 6], &[7, 6, 6], 101))?;
    }
    for (l, m) in [(1, 2), (2, 4)] {
        let mut w = tm(l, m);
        let v = identity(&w);
        let add = complexity_profile(&mut w, 100, Kind::Additive, Some(&v), ScanConfig::default()).map_err(|e| e.to_string())?;
        same(&format!("({l},{m}) additive"), &add.values, &eventually_periodic(&[1, 3], &[5], 101))?;
    }
    Ok(())
}

fn vtm() -> Outcome {
    let mut w = word("0->012 1->02 2->1");
    let v = identity(&w);
    let (ab, add) = abelian_additive_profiles(&mut w, 2000, &v, ScanConfig::default()).map_err(|e| e.to_string())?;
    check!(ab.is_fully_stabilized(), "abelian profile did not stabilize");
    for n in 1..=500 {
        check!(add.values[n] == 3, "additive({n}) = {}, expected 3", add.values[n]);
    }
    let max = *ab.values.iter().max().unwrap();
    check!(max >= 5, "abelian maximum {max} < 5");
    // maxima over [2^j, 2^(j+1)) must not decrease
    let scales: Vec<usize> = (0..11)
        .map(|j| ab.values[1 << j..(2usize << j).min(2001)].iter().copied().max().unwrap())
        .collect();
    check!(scales.windows(2).all(|p| p[0] <= p[1]), "scale maxima decrease: {scales:?}");
    Ok(())
}

fn collinear_word() -> Outcome {
    let morphism: Morphism = "0->012 1->112002 2->".parse().unwrap();
    check!(morphism.is_parikh_collinear(), "morphism is not Parikh-collinear");
    let mut w = PrefixBuffer::fixed_point(morphism, 0).unwrap();
    let v = identity(&w);
    let (ab, add) = abelian_additive_profiles(&mut w, 243, &v, ScanConfig::default()).map_err(|e| e.to_string())?;
    let dfao = fixtures::collinear_additive_dfao();
    let base3 = PositionalSystem::base(3).unwrap();
    let from_dfao: Vec<usize> = (0..=243)
        .map(|n| dfao.sequence_term(&base3, n).unwrap() as usize)
        .collect();
    same("additive vs automaton", &add.values, &from_dfao)?;
    same("additive", &add.values, &eventually_periodic(&[1, 3, 4], &[3, 5, 5], 244))?;
    same("abelian", &ab.values, &eventually_periodic(&[1, 3, 5], &[3, 7, 7], 244))
}

fn tribonacci() -> Outcome {
    let mut w = word("0->01 1->02 2->0");
    let cfg = ScanConfig::with_cap(1_000_000);
    let v = identity(&w);
    let add = complexity_profile(&mut w, 478, Kind::Additive, Some(&v), cfg).map_err(|e| e.to_string())?;
    check!(add.is_fully_stabilized(), "additive profile did not stabilize within 10^6 letters");
    for n in 1..=300 {
        check!((3..=5).contains(&add.values[n]), "additive({n}) = {}", add.values[n]);
    }
    let trib = PositionalSystem::tribonacci();
    for (digits, expected) in [("100", 3), ("1101", 4), ("1101001100", 5)] {
        let n = trib.val(&parse_digits(digits).unwrap()).unwrap() as usize;
        check!(add.values[n] == expected, "additive({n}) = {}, expected {expected}", add.values[n]);
    }
    for n in 1..=300 {
        let r = weight_range(&mut w, n, &v, cfg).map_err(|e| e.to_string())?;
        check!(r.contiguous, "weights of length {n} are not contiguous: {r:?}");
    }
    check!(w.len() <= 1_000_000, "prefix grew to {}", w.len());
    Ok(())
}

fn cww() -> Outcome {
    let mut w = word("0->01 1->12 2->20");
    let v = identity(&w);
    let add = complexity_profile(&mut w, 256, Kind::Additive, Some(&v), ScanConfig::default()).map_err(|e| e.to_string())?;
    for n in 1..=256usize {
        let expected = 2 * n.ilog2() as usize + 3;
        check!(add.values[n] == expected, "additive({n}) = {}, expected {expected}", add.values[n]);
    }
    Ok(())
}

fn ccss() -> Outcome {
    let mut w = word("0->03 1->43 3->1 4->01");
    let orders: Vec<usize> = (1..=30).collect();
    let cubes = find_powers(&mut w, PowerKind::Additive, 3, &orders, 10_000, None, Execution::default())
        .map_err(|e| e.to_string())?;
    for (m, r) in orders.iter().zip(&cubes) {
        check!(
            *r == PowerSearch::NotFoundUpTo { window: 10_000 },
            "order {m}: {r}"
        );
    }
    let v = identity(&w);
    let mismatch = first_add_ab_mismatch(&mut w, &v, 60, ScanConfig::default()).map_err(|e| e.to_string())?;
    check!(mismatch == Some(23), "first mismatch {mismatch:?}, expected 23");

    let a = parse_word("11011031430110343430314").unwrap();
    let b = parse_word("30310110110314303434303").unwrap();
    let weight = |x: &[Letter]| x.iter().map(|&c| c as u64).sum::<u64>();
    let mut sa = a.clone();
    let mut sb = b.clone();
    sa.sort_unstable();
    sb.sort_unstable();
    check!(a.len() == 23 && b.len() == 23, "pair lengths");
    check!(weight(&a) == weight(&b), "pair weights differ");
    check!(sa != sb, "pair is abelian equivalent");
    w.ensure(200_000).unwrap();
    let occurs = |x: &[Letter]| w.letters().windows(23).any(|f| f == x);
    check!(occurs(&a) && occurs(&b), "pair does not occur in a 2·10^5 prefix");
    Ok(())
}

fn appendix_semigroup() -> Outcome {
    // The representation exactly as printed.
    let rep = LinearRep::from_i64(
        &[1, 0, 0, 0],
        &[
            vec![vec![1, 0, 0, 0], vec![1, 0, 0, 0], vec![1, 0, 0, 0], vec![0, 0, 0, 1]],
            vec![vec![0, 0, 1, 0], vec![0, 0, 1, 0], vec![0, 0, -1, 1], vec![0, 0, 0, 1]],
        ],
        &[0, 0, 0, 1],
    )
    .unwrap();
    check!(rep == fixtures::rudin_shapiro_linrep(), "bundled representation differs");
    let min = rep.minimize();
    check!(min.dim() <= 4, "minimized dimension {}", min.dim());
    let dfao = min.semigroup_trick(1000).map_err(|e| e.to_string())?.dfao;

    // The figure: λ/0, w1/0, w2/1, w3/1.
    let figure: Dfao = "digits: 0..1\ninitial: λ\nλ 0\nw1 0\nw2 1\nw3 1\n\
                        λ --0--> λ\nλ --1--> w1\nw1 --0--> λ\nw1 --1--> w2\n\
                        w2 --0--> w3\nw2 --1--> w1\nw3 --0--> w3\nw3 --1--> w2\n"
        .parse()
        .unwrap();
    check!(dfao.num_states() == 4, "{} states", dfao.num_states());
    check!(dfao == figure, "automaton differs from the figure:\n{dfao}");
    check!(dfao.to_string() == fixtures::RUDIN_SHAPIRO_DFAO, "emitted text differs from fixture");

    let base2 = PositionalSystem::base(2).unwrap();
    let first: Vec<i64> = (0..16).map(|n| dfao.sequence_term(&base2, n).unwrap()).collect();
    check!(
        first == [0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 1, 1, 1, 0, 1],
        "first terms {first:?}"
    );
    for len in 0..=12u32 {
        for bits in 0..(1u32 << len) {
            let w: Vec<u32> = (0..len).rev().map(|i| (bits >> i) & 1).collect();
            let (a, b): (BigInt, BigInt) = (min.evaluate(&w).unwrap(), rep.evaluate(&w).unwrap());
            check!(a == b, "minimized rep disagrees on {w:?}");
        }
    }
    Ok(())
}

fn fibonacci_criterion() -> Outcome {
    let mut fib = word("0->01 1->0");
    let orders: Vec<usize> = (1..=40).collect();
    for k in [2usize, 3] {
        let found = find_powers(&mut fib, PowerKind::Abelian, k, &orders, 30_000, None, Execution::default())
            .map_err(|e| e.to_string())?;
        for (&n, r) in orders.iter().zip(&found) {
            let predicted = fibonacci_abelian_criterion(k as u64, n as u64);
            check!(
                predicted == r.is_found(),
                "k={k} n={n}: criterion says {predicted}, search says {r}"
            );
        }
    }
    Ok(())
}

fn tribonacci_squares() -> Outcome {
    let mut trib = word("0->01 1->02 2->0");
    let orders: Vec<usize> = (1..=200).collect();
    let found = find_powers(&mut trib, PowerKind::Abelian, 2, &orders, 50_000, None, Execution::default())
        .map_err(|e| e.to_string())?;
    if let Some((n, _)) = orders.iter().zip(&found).find(|(_, r)| !r.is_found()) {
        return Err(format!("no abelian square of order {n} in 5·10^4 letters"));
    }
    let mut seen = HashSet::new();
    for n in 1..=200 {
        let c = abelian_square_class_count(&mut trib, n, 50_000).map_err(|e| e.to_string())?;
        check!(c == 1 || c == 2, "order {n}: {c} classes");
        seen.insert(c);
    }
    check!(seen.len() == 2, "only {seen:?} class counts occur");
    Ok(())
}

fn valuations() -> Outcome {
    let variant = |l: Letter| {
        let m = Morphism::new([(0, vec![0, 1, l]), (1, vec![0, l]), (l, vec![1])]).unwrap();
        PrefixBuffer::fixed_point(m, 0).unwrap()
    };
    for (l, n_max, expected) in [(3, 60, Some(11)), (4, 100, Some(43)), (5, 2000, None)] {
        let mut w = variant(l);
        let v = identity(&w);
        let got = first_add_ab_mismatch(&mut w, &v, n_max, ScanConfig::default()).map_err(|e| e.to_string())?;
        check!(got == expected, "λ={l}: first mismatch {got:?}, expected {expected:?}");
    }
    check!(equalizing_weights(3, 2).unwrap() == [0, 1, 3], "weights for k=3, C=2");
    let mut trib = word("0->01 1->02 2->0");
    let v = equalizing_valuation(&trib.alphabet(), 2).unwrap();
    check!(v.to_string() == "0:0,1:1,2:3", "valuation {v}");
    let (ab, add) = abelian_additive_profiles(&mut trib, 300, &v, ScanConfig::default()).map_err(|e| e.to_string())?;
    same("tribonacci under {0,1,3}", &add.values, &ab.values)
}

fn random_morphism(rng: &mut impl Rng) -> Morphism {
    let k = rng.gen_range(2..=4u32);
    let rules = (0..k).map(|a| {
        let len = if a == 0 { rng.gen_range(2..=4) } else { rng.gen_range(1..=4) };
        let mut image: Vec<Letter> = (0..len).map(|_| rng.gen_range(0..k)).collect();
        if a == 0 {
            image[0] = 0;
        }
        (a, image)
    });
    Morphism::new(rules.collect::<Vec<_>>()).unwrap()
}

fn property_suite() -> Outcome {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(20);
    let mut words = 0;
    while words < 20 {
        let m = random_morphism(&mut rng);
        let mut src = PrefixBuffer::fixed_point(m.clone(), 0).unwrap();
        src.ensure(1 << 15).unwrap();
        let letters = src.letters()[..1 << 15].to_vec();
        if letters.iter().collect::<HashSet<_>>().len() < 2 {
            continue;
        }
        words += 1;
        let k = m.alphabet().len();
        // all three kinds over the same prefix
        let mut prefix = PrefixBuffer::literal(letters);
        let v = identity(&prefix);
        let cfg = ScanConfig::default();
        let f = complexity_profile(&mut prefix, 40, Kind::Factor, None, cfg).map_err(|e| e.to_string())?;
        let (ab, add) = abelian_additive_profiles(&mut prefix, 40, &v, cfg).map_err(|e| e.to_string())?;
        for n in 0..=40usize {
            let (a, b, c) = (add.values[n], ab.values[n], f.values[n]);
            let cap = (k as u128).saturating_pow(n as u32);
            check!(
                1 <= a && a <= b && b <= c && c as u128 <= cap,
                "{m} n={n}: additive {a}, abelian {b}, factor {c}"
            );
            check!(a as u128 <= parikh_vector_count(n, k), "{m} n={n}: additive {a} over binomial");
        }
    }
    for _ in 0..20 {
        let pre: Vec<Letter> = (0..rng.gen_range(0..8)).map(|_| rng.gen_range(0..4)).collect();
        let per: Vec<Letter> = (0..rng.gen_range(1..8)).map(|_| rng.gen_range(0..4)).collect();
        let bound = pre.len() + per.len();
        let mut w = PrefixBuffer::ultimately_periodic(pre.clone(), per.clone());
        let v = identity(&w);
        let add = complexity_profile(&mut w, 40, Kind::Additive, Some(&v), ScanConfig::default()).map_err(|e| e.to_string())?;
        for (n, &a) in add.values.iter().enumerate() {
            check!(a <= bound, "{pre:?}·{per:?}^ω n={n}: additive {a} > {bound}");
        }
    }
    Ok(())
}

const CRITERIA: &[Criterion] = &[
    Criterion { id: 1, name: "ternary Thue-Morse profiles", budget: Duration::from_secs(5), run: ternary_thue_morse },
    Criterion { id: 2, name: "(l,m)-Thue-Morse profiles", budget: Duration::from_secs(10), run: lm_thue_morse },
    Criterion { id: 3, name: "vtm additive and abelian growth", budget: Duration::from_secs(5), run: vtm },
    Criterion { id: 4, name: "Parikh-collinear word vs automaton", budget: Duration::from_secs(5), run: collinear_word },
    Criterion { id: 5, name: "Tribonacci additive values and weight ranges", budget: Duration::from_secs(30), run: tribonacci },
    Criterion { id: 6, name: "CWW additive formula", budget: Duration::from_secs(10), run: cww },
    Criterion { id: 7, name: "CCSS cubes and first mismatch", budget: Duration::from_secs(20), run: ccss },
    Criterion { id: 8, name: "semigroup trick on the 4x4 representation", budget: Duration::from_secs(2), run: appendix_semigroup },
    Criterion { id: 9, name: "Fibonacci abelian power criterion", budget: Duration::from_secs(20), run: fibonacci_criterion },
    Criterion { id: 10, name: "Tribonacci abelian squares", budget: Duration::from_secs(30), run: tribonacci_squares },
    Criterion { id: 11, name: "equalizing valuations", budget: Duration::from_secs(30), run: valuations },
    Criterion { id: 12, name: "complexity chain on random words", budget: Duration::from_secs(30), run: property_suite },
];

fn main() -> ExitCode {
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for c in CRITERIA {
        let label = format!("{} {}", c.id, c.name);
        if !filter.is_empty() && !filter.iter().any(|f| label.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| {
            if elapsed <= c.budget {
                Ok(())
            } else {
                Err(format!("over budget: {elapsed:.2?} > {:?}", c.budget))
            }
        });
        let status = if outcome.is_ok() { "PASS" } else { "FAIL" };
        println!(
            "criterion {:>2} {status} {} ({:.2}s, budget {}s)",
            c.id,
            c.name,
            elapsed.as_secs_f64(),
            c.budget.as_secs()
        );
        if let Err(msg) = outcome {
            println!("    {msg}");
            failed += 1;
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
