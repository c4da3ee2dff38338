//! Regression report over the published example tables.
//!
//! Every numeric cell (power sums, total degree, Pontrjagin coefficients, `e/d`,
//! moduli dimensions and family differences) and every verdict is recomputed and
//! compared as an exact decimal string.

use serde::{Deserialize, Serialize};

use crate::classify::classify_pair;
use crate::error::{Error, Result};
use crate::exactmath::{factorize, BigInt};
use crate::invariants::{invariant_profile, MultiDegree};
use crate::moduli::{delta_closed_form, moduli_dimension, BasePair};
use crate::symfun::power_sums;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegressionCheck {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegressionReport {
    pub checks: Vec<RegressionCheck>,
    pub total: usize,
    pub failed: usize,
    pub passed: bool,
}

impl RegressionReport {
    pub fn failures(&self) -> impl Iterator<Item = &RegressionCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

struct Checks(Vec<(String, String, String)>);

impl Checks {
    fn push(&mut self, name: impl Into<String>, expected: impl ToString, actual: impl ToString) {
        self.0
            .push((name.into(), expected.to_string(), actual.to_string()));
    }
}

fn md(n: u32, d: &[u64]) -> Result<MultiDegree> {
    MultiDegree::new(n, d.iter().copied())
}

/// Published row: power sums (when tabulated), d, p (when tabulated), e/d.
struct Row<'a> {
    degrees: &'a [u64],
    sums: Option<[i64; 5]>,
    d: u64,
    p: Option<[i64; 2]>,
    e_over_d: i64,
}

fn check_row(
    checks: &mut Checks,
    group: &str,
    side: &str,
    n: u32,
    row: &Row,
) -> Result<MultiDegree> {
    let x = md(n, row.degrees)?;
    let prof = invariant_profile(&x)?;
    if let Some(sums) = row.sums {
        let got = power_sums(x.degrees(), 5);
        for (i, want) in sums.iter().enumerate() {
            checks.push(format!("{group}/{side}/s_{}", i + 1), want, got.get(i + 1));
        }
    }
    checks.push(format!("{group}/{side}/d"), row.d, &prof.d);
    if let Some(p) = row.p {
        for (k, want) in p.iter().enumerate() {
            checks.push(format!("{group}/{side}/p_{}", k + 1), want, &prof.p[k]);
        }
    }
    let e_over_d = prof
        .e_over_d_integer()
        .map_or_else(|| prof.e_over_d().to_string(), |v| v.to_string());
    checks.push(format!("{group}/{side}/e_over_d"), row.e_over_d, e_over_d);
    Ok(x)
}

fn check_pair(
    checks: &mut Checks,
    group: &str,
    n: u32,
    left: Row,
    right: Row,
    verdict: &str,
) -> Result<(MultiDegree, MultiDegree)> {
    let a = check_row(checks, group, "left", n, &left)?;
    let b = check_row(checks, group, "right", n, &right)?;
    checks.push(
        format!("{group}/verdict"),
        verdict,
        classify_pair(&a, &b)?.name(),
    );
    Ok((a, b))
}

fn appended(x: &MultiDegree, n: u32, extra: u64) -> Result<MultiDegree> {
    MultiDegree::new(n, x.degrees().iter().copied().chain([extra]))
}

fn build() -> Result<Checks> {
    let mut c = Checks(Vec::new());

    let (a, _) = check_pair(
        &mut c,
        "codim11-vs-10",
        5,
        Row {
            degrees: &[46, 36, 34, 21, 14, 13, 12, 11, 3, 2, 2],
            sums: Some([194, 5656, 200600, 7790356, 317267984]),
            d: 340867118592,
            p: Some([-5639, 19794330]),
            e_over_d: -6401091783,
        },
        Row {
            degrees: &[44, 42, 26, 23, 18, 17, 7, 6, 6, 4],
            sums: Some([193, 5655, 200599, 7790355, 317267983]),
            d: 340867118592,
            p: Some([-5639, 19794330]),
            e_over_d: -6401091783,
        },
        "diffeomorphic",
    )?;
    c.push(
        "codim11-vs-10/factorization",
        "2^9 * 3^5 * 7^2 * 11 * 13 * 17 * 23",
        factorize(&crate::invariants::total_degree(&a))?,
    );

    let (c8a, c8b) = check_pair(
        &mut c,
        "codim8",
        5,
        Row {
            degrees: &[66, 56, 45, 39, 16, 15, 8, 3],
            sums: Some([248, 11592, 621566, 35343636, 2079657638]),
            d: 37362124800,
            p: Some([-11578, 84696853]),
            e_over_d: -31485015068,
        },
        Row {
            degrees: &[64, 60, 42, 39, 20, 11, 9, 3],
            sums: Some([248, 11592, 621638, 35343636, 2075677598]),
            d: 37362124800,
            p: Some([-11578, 84696853]),
            e_over_d: -31485015068,
        },
        "diffeomorphic",
    )?;
    c.push(
        "codim8/factorization",
        "2^11 * 3^6 * 5^2 * 7 * 11 * 13",
        factorize(&crate::invariants::total_degree(&c8a))?,
    );

    let row = |degrees, d, e_over_d| Row {
        degrees,
        sums: None,
        d,
        p: None,
        e_over_d,
    };
    let (drop_a, drop_b) = check_pair(
        &mut c,
        "codim8-drop-3",
        5,
        row(&[66, 56, 45, 39, 16, 15, 8], 12454041600, -30762573120),
        row(&[64, 60, 42, 39, 20, 11, 9], 12454041600, -30762561840),
        "not_homeomorphic",
    )?;
    let (add_a, add_b) = check_pair(
        &mut c,
        "codim8-add-7",
        5,
        row(
            &[66, 56, 45, 39, 16, 15, 8, 7, 3],
            261534873600,
            -33795490160,
        ),
        row(
            &[64, 60, 42, 39, 20, 11, 9, 7, 3],
            261534873600,
            -33795524864,
        ),
        "not_homeomorphic",
    )?;
    let (cut_a, cut_b) = check_pair(
        &mut c,
        "codim8-cut-by-quadric",
        4,
        row(&[66, 56, 45, 39, 16, 15, 8, 3, 2], 74724249600, 365019422),
        row(&[64, 60, 42, 39, 20, 11, 9, 3, 2], 74724249600, 365025086),
        "not_homeomorphic",
    )?;
    let (six_a, six_b) = check_pair(
        &mut c,
        "codim7-dim6",
        6,
        row(&[66, 56, 45, 16, 15, 8, 3], 958003200, 1370218430570),
        row(&[64, 60, 42, 20, 11, 9, 3], 958003200, 1369971514442),
        "not_homeomorphic",
    )?;

    // Appending a common degree can destroy a diffeomorphism, and so can removing one.
    let same = |x: &MultiDegree, y: &MultiDegree| x == y;
    c.push(
        "variant/append-degree/construction",
        true,
        same(
            &drop_a,
            &MultiDegree::new(5, c8a.degrees().iter().copied().filter(|&d| d != 3))?,
        ) && same(&add_a, &appended(&c8a, 5, 7)?)
            && same(&add_b, &appended(&c8b, 5, 7)?)
            && drop_b.codim() + 1 == c8b.codim(),
    );
    c.push(
        "variant/append-degree/verdicts",
        "diffeomorphic,not_homeomorphic,not_homeomorphic",
        format!(
            "{},{},{}",
            classify_pair(&c8a, &c8b)?.name(),
            classify_pair(&drop_a, &drop_b)?.name(),
            classify_pair(&add_a, &add_b)?.name()
        ),
    );
    // Cutting diffeomorphic 5-folds with one quadric gives non-homotopic 4-folds.
    c.push(
        "variant/cut/construction",
        true,
        same(&cut_a, &appended(&c8a, 4, 2)?) && same(&cut_b, &appended(&c8b, 4, 2)?),
    );
    c.push(
        "variant/cut/verdicts",
        "diffeomorphic,not_homeomorphic",
        format!(
            "{},{}",
            classify_pair(&c8a, &c8b)?.name(),
            classify_pair(&cut_a, &cut_b)?.name()
        ),
    );
    // Non-homotopic 6-folds whose sections by a degree-39 hypersurface are diffeomorphic.
    c.push(
        "variant/raise/construction",
        true,
        same(&appended(&six_a, 5, 39)?, &c8a) && same(&appended(&six_b, 5, 39)?, &c8b),
    );
    c.push(
        "variant/raise/verdicts",
        "not_homeomorphic,diffeomorphic",
        format!(
            "{},{}",
            classify_pair(&six_a, &six_b)?.name(),
            classify_pair(&appended(&six_a, 5, 39)?, &appended(&six_b, 5, 39)?)?.name()
        ),
    );

    let pair = BasePair::default();
    let (base_a, _) = check_pair(
        &mut c,
        "base-pair",
        5,
        Row {
            degrees: &pair.d,
            sums: Some([399, 25879, 1833489, 137438707, 10682130249]),
            d: 1136843237376,
            p: Some([-25866, 403244325]),
            e_over_d: -296492615140,
        },
        Row {
            degrees: &pair.d_prime,
            sums: Some([399, 25879, 1833489, 137438707, 10682130249]),
            d: 1136843237376,
            p: Some([-25866, 403244325]),
            e_over_d: -296492615140,
        },
        "diffeomorphic",
    )?;
    c.push(
        "base-pair/factorization",
        "2^11 * 3^6 * 7 * 11^2 * 29 * 31",
        factorize(&crate::invariants::total_degree(&base_a))?,
    );
    c.push(
        "moduli/left",
        "1382270197857128",
        moduli_dimension(&md(5, &pair.d)?)?,
    );
    c.push(
        "moduli/right",
        "1370693416581393",
        moduli_dimension(&md(5, &pair.d_prime)?)?,
    );

    for (lambda, s, want) in [
        (0, 1, "11576781275735"),
        (1, 2, "34356628415559239284"),
        (0, 2, "34347842980758828832"),
    ] {
        let r = delta_closed_form(&pair, lambda, s)?;
        c.push(
            format!("delta/lambda={lambda},s={s}/direct"),
            want,
            &r.direct,
        );
        c.push(
            format!("delta/lambda={lambda},s={s}/closed_form"),
            want,
            r.closed_form
                .map_or_else(|| "unavailable".to_string(), |v| v.to_string()),
        );
    }
    Ok(c)
}

fn corrupt_value(expected: &str) -> String {
    match expected.parse::<BigInt>() {
        Ok(v) => (v + BigInt::from(1)).to_string(),
        Err(_) => format!("{expected}#corrupted"),
    }
}

pub fn verify_paper_examples() -> Result<RegressionReport> {
    verify_paper_examples_with(&[])
}

/// As [`verify_paper_examples`], with the expected value of each named check
/// deliberately altered. Used to exercise the failure path.
pub fn verify_paper_examples_with(corrupt: &[&str]) -> Result<RegressionReport> {
    let Checks(raw) = build()?;
    for name in corrupt {
        if !raw.iter().any(|(n, _, _)| n == name) {
            return Err(Error::Precondition(format!("no check named {name:?}")));
        }
    }
    let checks: Vec<RegressionCheck> = raw
        .into_iter()
        .map(|(name, expected, actual)| {
            let expected = if corrupt.contains(&name.as_str()) {
                corrupt_value(&expected)
            } else {
                expected
            };
            RegressionCheck {
                pass: expected == actual,
                name,
                expected,
                actual,
            }
        })
        .collect();
    let failed = checks.iter().filter(|c| !c.pass).count();
    Ok(RegressionReport {
        total: checks.len(),
        failed,
        passed: failed == 0,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_published_values_reproduce() {
        let report = verify_paper_examples().unwrap();
        let failures: Vec<_> = report.failures().collect();
        assert!(failures.is_empty(), "{failures:#?}");
        assert!(report.total > 80);
    }

    #[test]
    fn corrupted_constant_fails_alone() {
        let report = verify_paper_examples_with(&["moduli/left"]).unwrap();
        assert!(!report.passed);
        assert_eq!(report.failed, 1);
        let bad = report.failures().next().unwrap();
        assert_eq!(bad.name, "moduli/left");
        assert_eq!(bad.expected, "1382270197857129");
        assert!(verify_paper_examples_with(&["no-such-check"]).is_err());
    }
}
