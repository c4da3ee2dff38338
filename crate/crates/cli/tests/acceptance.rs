//! Acceptance suite. Every check is exact; runtime limits are part of the criterion.
//! Prints one PASS/FAIL line per criterion and exits non-zero if any fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use cinv_core::classify::{classify_pair, traving_condition};
use cinv_core::exactmath::{binomial, valuation, Rational};
use cinv_core::invariants::{
    chern_coefficients, euler_characteristic, invariant_profile, pontrjagin_coefficients,
    total_degree,
};
use cinv_core::moduli::{
    compose, delta_closed_form, moduli_dimension, moduli_dimension_dfs, verify_monotonicity,
    BasePair,
};
use cinv_core::search::{find_collisions, CollisionKey, SearchConfig};
use cinv_core::symfun::{elementary_from_power_sums, g_explicit, power_sums};
use cinv_core::{BigInt, ClassificationVerdict, MultiDegree};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn big(s: &str) -> BigInt {
    s.parse().unwrap()
}

fn md(n: u32, d: &[u64]) -> MultiDegree {
    MultiDegree::new(n, d.iter().copied()).unwrap()
}

fn within(start: Instant, limit: Duration) -> Check {
    let took = start.elapsed();
    ensure!(took < limit, "took {took:?}, limit {limit:?}");
    Ok(())
}

/// Power sums, d, p_1, p_2 and e/d of one tabulated 5-fold.
fn row(
    x: &MultiDegree,
    sums: Option<[&str; 5]>,
    d: &str,
    p: Option<[&str; 2]>,
    e_over_d: &str,
) -> Check {
    if let Some(sums) = sums {
        let got = power_sums(x.degrees(), 5);
        for (i, want) in sums.iter().enumerate() {
            ensure!(
                got.get(i + 1) == &big(want),
                "{x}: s_{} = {}",
                i + 1,
                got.get(i + 1)
            );
        }
    }
    let prof = invariant_profile(x).map_err(|e| e.to_string())?;
    ensure!(prof.d == big(d), "{x}: d = {}", prof.d);
    if let Some(p) = p {
        ensure!(
            prof.p[..2] == [big(p[0]), big(p[1])],
            "{x}: p = {:?}",
            prof.p
        );
    }
    let q = prof.e_over_d();
    ensure!(q == Rational::from_integer(big(e_over_d)), "{x}: e/d = {q}");
    Ok(())
}

fn verdict(a: &MultiDegree, b: &MultiDegree) -> Result<ClassificationVerdict, String> {
    classify_pair(a, b).map_err(|e| e.to_string())
}

fn codim_eleven_pair() -> Check {
    let start = Instant::now();
    let a = md(5, &[46, 36, 34, 21, 14, 13, 12, 11, 3, 2, 2]);
    let b = md(5, &[44, 42, 26, 23, 18, 17, 7, 6, 6, 4]);
    row(
        &a,
        Some(["194", "5656", "200600", "7790356", "317267984"]),
        "340867118592",
        Some(["-5639", "19794330"]),
        "-6401091783",
    )?;
    row(
        &b,
        Some(["193", "5655", "200599", "7790355", "317267983"]),
        "340867118592",
        Some(["-5639", "19794330"]),
        "-6401091783",
    )?;
    ensure!(
        verdict(&a, &b)? == ClassificationVerdict::Diffeomorphic,
        "verdict"
    );
    within(start, Duration::from_secs(1))
}

fn codim_eight_family() -> Check {
    let start = Instant::now();
    let a = md(5, &[66, 56, 45, 39, 16, 15, 8, 3]);
    let b = md(5, &[64, 60, 42, 39, 20, 11, 9, 3]);
    row(
        &a,
        Some(["248", "11592", "621566", "35343636", "2079657638"]),
        "37362124800",
        Some(["-11578", "84696853"]),
        "-31485015068",
    )?;
    row(
        &b,
        Some(["248", "11592", "621638", "35343636", "2075677598"]),
        "37362124800",
        Some(["-11578", "84696853"]),
        "-31485015068",
    )?;
    ensure!(
        verdict(&a, &b)? == ClassificationVerdict::Diffeomorphic,
        "part 1 verdict"
    );
    for (extra, want) in [
        (None, ("-30762573120", "-30762561840")),
        (Some(7), ("-33795490160", "-33795524864")),
    ] {
        let alter = |x: &MultiDegree| match extra {
            None => md(5, &x.degrees()[..x.codim() - 1]),
            Some(e) => md(5, &[x.degrees(), &[e]].concat()),
        };
        let (a2, b2) = (alter(&a), alter(&b));
        row(&a2, None, &total_degree(&a2).to_string(), None, want.0)?;
        row(&b2, None, &total_degree(&b2).to_string(), None, want.1)?;
        ensure!(
            matches!(
                verdict(&a2, &b2)?,
                ClassificationVerdict::NotHomeomorphic { .. }
            ),
            "{a2} vs {b2} should not be homeomorphic"
        );
    }
    within(start, Duration::from_secs(1))
}

fn other_dimensions() -> Check {
    let start = Instant::now();
    for (n, a, b, ea, eb) in [
        (
            4,
            &[66u64, 56, 45, 39, 16, 15, 8, 3, 2][..],
            &[64u64, 60, 42, 39, 20, 11, 9, 3, 2][..],
            "365019422",
            "365025086",
        ),
        (
            6,
            &[66, 56, 45, 16, 15, 8, 3],
            &[64, 60, 42, 20, 11, 9, 3],
            "1370218430570",
            "1369971514442",
        ),
    ] {
        let (x, y) = (md(n, a), md(n, b));
        for (m, want) in [(&x, ea), (&y, eb)] {
            let prof = invariant_profile(m).map_err(|e| e.to_string())?;
            ensure!(
                prof.e_over_d() == Rational::from_integer(big(want)),
                "{m}: e/d = {}",
                prof.e_over_d()
            );
        }
        ensure!(
            matches!(
                verdict(&x, &y)?,
                ClassificationVerdict::NotHomeomorphic { .. }
            ),
            "n = {n} verdict"
        );
    }
    within(start, Duration::from_secs(1))
}

fn base_pair_table() -> Check {
    let pair = BasePair::default();
    let sums = Some(["399", "25879", "1833489", "137438707", "10682130249"]);
    let p = Some(["-25866", "403244325"]);
    let (a, b) = (md(5, &pair.d), md(5, &pair.d_prime));
    row(&a, sums, "1136843237376", p, "-296492615140")?;
    row(&b, sums, "1136843237376", p, "-296492615140")?;
    ensure!(
        verdict(&a, &b)? == ClassificationVerdict::Diffeomorphic,
        "verdict"
    );
    Ok(())
}

fn moduli_values() -> Check {
    let pair = BasePair::default();
    for (d, want) in [
        (&pair.d, "1382270197857128"),
        (&pair.d_prime, "1370693416581393"),
    ] {
        let start = Instant::now();
        let m = moduli_dimension(&md(5, d)).map_err(|e| e.to_string())?;
        ensure!(m == big(want), "m({d:?}) = {m}");
        within(start, Duration::from_secs(1))?;
    }
    Ok(())
}

fn difference_constants() -> Check {
    let pair = BasePair::default();
    for (lambda, s, want) in [
        (0, 1, "11576781275735"),
        (1, 2, "34356628415559239284"),
        (0, 2, "34347842980758828832"),
    ] {
        let r = delta_closed_form(&pair, lambda, s).map_err(|e| e.to_string())?;
        ensure!(
            r.direct == big(want),
            "direct ({lambda},{s}) = {}",
            r.direct
        );
        ensure!(
            r.closed_form == Some(big(want)),
            "closed form ({lambda},{s}) = {:?}",
            r.closed_form
        );
    }
    Ok(())
}

fn monotonicity() -> Check {
    let start = Instant::now();
    let jobs = std::thread::available_parallelism().map_or(1, |n| n.get());
    let rep = verify_monotonicity(&BasePair::default(), 6, jobs).map_err(|e| e.to_string())?;
    ensure!(
        rep.disagreements.is_empty(),
        "closed form differs at {:?}",
        rep.disagreements
    );
    ensure!(
        rep.delta_count == 21,
        "{} differences checked",
        rep.delta_count
    );
    ensure!(rep.passed, "bounds or monotonicity failed: {:?}", rep.per_s);
    within(start, Duration::from_secs(120))
}

fn five_member_family() -> Check {
    let pair = BasePair::default();
    let members: Vec<MultiDegree> = (0..=4)
        .map(|l| compose(&pair, l, 4 - l).unwrap().multidegree)
        .collect();
    let first = invariant_profile(&members[0]).map_err(|e| e.to_string())?;
    let mut ms = Vec::new();
    for m in &members {
        ensure!(
            invariant_profile(m).map_err(|e| e.to_string())? == first,
            "{m} profile differs"
        );
        ms.push(moduli_dimension(m).map_err(|e| e.to_string())?);
    }
    let tr = traving_condition(5, &first.d).map_err(|e| e.to_string())?;
    ensure!(tr.holds, "traving fails");
    ensure!(
        valuation(&first.d, 2) == 44,
        "nu_2 = {}",
        valuation(&first.d, 2)
    );
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            ensure!(
                verdict(&members[i], &members[j])? == ClassificationVerdict::Diffeomorphic,
                "pair {i},{j}"
            );
            ensure!(ms[i] != ms[j], "m equal for {i},{j}");
        }
    }
    Ok(())
}

fn newton_oracle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..1000 {
        for j in 1..=6 {
            let t: Vec<BigInt> = (0..j)
                .map(|_| BigInt::from(rng.gen_range(-100..=100)))
                .collect();
            let explicit = g_explicit(j, &t).map_err(|e| e.to_string())?;
            ensure!(
                elementary_from_power_sums(&t).get(j) == &explicit,
                "j = {j}, t = {t:?}"
            );
        }
    }
    for _ in 0..300 {
        let len = rng.gen_range(1..=8);
        let v: Vec<u64> = (0..len).map(|_| rng.gen_range(1..=30)).collect();
        // Brute force: sum of products over every index subset of size j.
        let e = elementary_from_power_sums(power_sums(&v, len).as_slice());
        for j in 1..=len {
            let mut want = BigInt::zero();
            for mask in 0u32..(1 << len) {
                if mask.count_ones() as usize == j {
                    want += (0..len)
                        .filter(|k| mask >> k & 1 == 1)
                        .map(|k| BigInt::from(v[k]))
                        .product::<BigInt>();
                }
            }
            ensure!(e.get(j) == &Rational::from_integer(want), "{v:?}, j = {j}");
        }
    }
    Ok(())
}

fn integrality() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..1000 {
        let n = rng.gen_range(1..=7);
        let r = rng.gen_range(0..=10);
        let x = MultiDegree::new(n, (0..r).map(|_| rng.gen_range(2..=20))).unwrap();
        chern_coefficients(&x).map_err(|e| format!("{x}: {e}"))?;
        pontrjagin_coefficients(&x).map_err(|e| format!("{x}: {e}"))?;
        let e = euler_characteristic(&x).map_err(|e| format!("{x}: {e}"))?;
        ensure!((e % total_degree(&x)).is_zero(), "{x}: e/d not integral");
    }
    Ok(())
}

fn determinacy() -> Check {
    let start = Instant::now();
    let mut cfg = SearchConfig::new(5, 1, 3, 12);
    cfg.key = CollisionKey::DegreeAndPontrjagin;
    cfg.jobs = std::thread::available_parallelism().map_or(1, |n| n.get());
    let found = find_collisions(&cfg).map_err(|e| e.to_string())?;
    ensure!(
        found.is_empty(),
        "{} collisions, first {:?}",
        found.len(),
        found[0].members
    );
    within(start, Duration::from_secs(60))
}

fn naive_moduli(x: &MultiDegree) -> BigInt {
    let d = x.degrees();
    let n = x.ambient_dim();
    let mut m = BigInt::one() - BigInt::from(n + 1).pow(2);
    for &di in d {
        m += binomial((n + di) as i64, n);
        for mask in 1u32..(1 << d.len()) {
            let sum: i64 = (0..d.len())
                .filter(|k| mask >> k & 1 == 1)
                .map(|k| d[k] as i64)
                .sum();
            let term = binomial(n as i64 + di as i64 - sum, n);
            if mask.count_ones() % 2 == 0 {
                m += term
            } else {
                m -= term
            }
        }
    }
    m
}

fn moduli_oracle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..500 {
        let n = rng.gen_range(2..=7);
        let r = rng.gen_range(1..=10);
        let x = MultiDegree::new(n, (0..r).map(|_| rng.gen_range(2..=12))).unwrap();
        let got = moduli_dimension(&x).map_err(|e| e.to_string())?;
        ensure!(got == naive_moduli(&x), "{x}: {got}");
    }
    let pair = BasePair::default();
    for s in 1..=6 {
        for l in 0..=s {
            let x = compose(&pair, l, s - l).unwrap().multidegree;
            let (g, d) = (moduli_dimension(&x), moduli_dimension_dfs(&x));
            ensure!(
                g.is_ok() && g == d,
                "composed ({l},{}) grouped {g:?} vs dfs {d:?}",
                s - l
            );
        }
    }
    Ok(())
}

fn cli_regression() -> Check {
    let bin = env!("CARGO_BIN_EXE_cinv");
    let ok = Command::new(bin)
        .arg("verify-paper")
        .output()
        .map_err(|e| e.to_string())?;
    ensure!(
        ok.status.code() == Some(0),
        "verify-paper exited {:?}",
        ok.status.code()
    );
    let bad = Command::new(bin)
        .args([
            "verify-paper",
            "--corrupt",
            "delta/lambda=1,s=2/closed_form",
        ])
        .output()
        .map_err(|e| e.to_string())?;
    ensure!(
        bad.status.code() == Some(2),
        "corrupted run exited {:?}",
        bad.status.code()
    );
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        (
            "codim-11/10 pair reproduces and is diffeomorphic",
            codim_eleven_pair,
        ),
        (
            "codim-8 pair and its drop/append variants",
            codim_eight_family,
        ),
        ("dimension-4 and dimension-6 pairs differ", other_dimensions),
        ("base pair table and verdict", base_pair_table),
        ("moduli dimensions of the base pair", moduli_values),
        (
            "difference constants, direct and closed form",
            difference_constants,
        ),
        ("family differences for s <= 6", monotonicity),
        ("five-member diffeomorphic family", five_member_family),
        ("Newton recurrence oracle", newton_oracle),
        ("integrality of characteristic numbers", integrality),
        (
            "no (d, p) collisions for r <= 3, degrees <= 12",
            determinacy,
        ),
        ("moduli naive-enumeration oracle", moduli_oracle),
        ("verify-paper exit codes", cli_regression),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(()) => println!("criterion {:>2} PASS  {name} ({secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({secs:.2}s): {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
