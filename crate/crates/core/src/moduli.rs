//! Moduli-space dimension of complete intersections and composed families.
//!
//! For `X_n(d) ⊂ CP^N`, `N = n + r`, `n ≥ 2`, all `d_i ≥ 2`:
//!
//! ```text
//! m(d) = 1 - (N+1)^2 + Σ_i C(N+d_i, N)
//!        + Σ_i Σ_{∅ ≠ K ⊆ {1..r}} (-1)^{|K|} C(N + d_i - Σ_{k∈K} d_k, N)
//! ```
//!
//! with `C(m, N) = 0` for `m < N`. Only subsets whose degree sum is at most `d_i`
//! contribute, which is what makes the sum tractable for long multidegrees.
//!
//! The composed multidegree `d_{λ,μ}` concatenates `λ` copies of a base list `d`
//! with `μ` copies of `d'`. When `d` and `d'` share power sums `s_1..s_5`, all
//! `d_{λ,s-λ}` are diffeomorphic 5-folds in `CP^{7s+5}`, and the difference
//! `m(d_{λ+1,s-λ-1}) - m(d_{λ,s-λ})` has a closed form `M_0 + M_1 + M_2 + M_3`
//! in terms of the constants in [`GammaTable`].

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::classify::{classify_pair, traving_condition, ClassificationVerdict};
use crate::error::{Error, Result};
use crate::exactmath::{self, binomial, decimal, BigInt, BinomialRow, Rational};
use crate::invariants::{invariant_profile, MultiDegree};
use crate::parallel::ordered_map;
use crate::symfun::power_sums;

pub const DEFAULT_BASE: [u64; 7] = [88, 77, 72, 54, 48, 31, 29];
pub const DEFAULT_BASE_PRIME: [u64; 7] = [87, 81, 64, 62, 44, 33, 28];

/// Every difference along a family exceeds this.
pub const DELTA_LOWER_BOUND: u64 = 3148;

/// `4 · 10^24`, the lower bound on every difference once `s ≥ 3`.
pub fn large_family_bound() -> BigInt {
    BigInt::from(4) * num_traits::pow(BigInt::from(10), 24)
}

fn check_domain(md: &MultiDegree) -> Result<()> {
    if md.n() < 2 {
        return Err(Error::Precondition(format!(
            "moduli dimension formula needs n >= 2, got n = {}",
            md.n()
        )));
    }
    Ok(())
}

fn constant_part(md: &MultiDegree, row: &BinomialRow) -> BigInt {
    let np1 = BigInt::from(md.ambient_dim() + 1);
    let mut total = BigInt::one() - &np1 * &np1;
    for &d in md.degrees() {
        total += row.get(d as i64);
    }
    total
}

fn row_for(md: &MultiDegree) -> BinomialRow {
    let max = md.degrees().first().copied().unwrap_or(0);
    BinomialRow::new(md.ambient_dim(), max)
}

/// `m(d)` by enumerating subsets grouped by multiplicity.
///
/// Distinct degree values `v_1 < … < v_m` with counts `c_j`; a subset is a vector
/// `a_j ≤ c_j` and is counted `Π C(c_j, a_j)` times.
pub fn moduli_dimension(md: &MultiDegree) -> Result<BigInt> {
    check_domain(md)?;
    let row = row_for(md);
    let mut groups: BTreeMap<u64, u64> = BTreeMap::new();
    for &d in md.degrees() {
        *groups.entry(d).or_default() += 1;
    }
    let groups: Vec<(u64, u64)> = groups.into_iter().collect();

    let mut total = constant_part(md, &row);
    for &(value, count) in &groups {
        let mut inner = BigInt::zero();
        grouped_subsets(&groups, 0, value, 0, &BigInt::one(), &row, &mut inner);
        total += inner * count;
    }
    Ok(total)
}

fn grouped_subsets(
    groups: &[(u64, u64)],
    idx: usize,
    remaining: u64,
    size: u64,
    weight: &BigInt,
    row: &BinomialRow,
    acc: &mut BigInt,
) {
    if idx == groups.len() || groups[idx].0 > remaining {
        if size > 0 {
            let term = weight * row.get(remaining as i64);
            if size % 2 == 1 {
                *acc -= term;
            } else {
                *acc += term;
            }
        }
        return;
    }
    let (value, count) = groups[idx];
    let mut taken = 0;
    while taken <= count && taken * value <= remaining {
        let w = weight * binomial(count as i64, taken);
        grouped_subsets(
            groups,
            idx + 1,
            remaining - taken * value,
            size + taken,
            &w,
            row,
            acc,
        );
        taken += 1;
    }
}

/// `m(d)` by depth-first search over index subsets, pruning on the degree sum.
pub fn moduli_dimension_dfs(md: &MultiDegree) -> Result<BigInt> {
    check_domain(md)?;
    let row = row_for(md);
    let mut ascending = md.degrees().to_vec();
    ascending.reverse();

    fn dfs(
        list: &[u64],
        start: usize,
        remaining: u64,
        size: u32,
        row: &BinomialRow,
        acc: &mut BigInt,
    ) {
        for k in start..list.len() {
            let dk = list[k];
            if dk > remaining {
                break;
            }
            let rest = remaining - dk;
            let term = row.get(rest as i64);
            if size.is_multiple_of(2) {
                *acc -= term;
            } else {
                *acc += term;
            }
            dfs(list, k + 1, rest, size + 1, row, acc);
        }
    }

    let mut total = constant_part(md, &row);
    for &di in &ascending {
        dfs(&ascending, 0, di, 0, &row, &mut total);
    }
    Ok(total)
}

/// Two equal-length base multidegrees for composed families.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasePair {
    pub d: Vec<u64>,
    pub d_prime: Vec<u64>,
}

impl Default for BasePair {
    fn default() -> Self {
        let pair = BasePair {
            d: DEFAULT_BASE.to_vec(),
            d_prime: DEFAULT_BASE_PRIME.to_vec(),
        };
        assert!(
            pair.shares_power_sums(5),
            "default base pair must share s_1..s_5"
        );
        pair
    }
}

impl BasePair {
    pub fn new(d: Vec<u64>, d_prime: Vec<u64>) -> Result<Self> {
        if d.len() != d_prime.len() {
            return Err(Error::InvalidMultiDegree(format!(
                "base lists must have equal length, got {} and {}",
                d.len(),
                d_prime.len()
            )));
        }
        if d.is_empty() {
            return Err(Error::InvalidMultiDegree(
                "base lists must be non-empty".into(),
            ));
        }
        if let Some(bad) = d.iter().chain(&d_prime).find(|&&x| x < 2) {
            return Err(Error::InvalidMultiDegree(format!(
                "base degrees must be >= 2, got {bad}"
            )));
        }
        let mut d = d;
        let mut d_prime = d_prime;
        d.sort_unstable_by(|a, b| b.cmp(a));
        d_prime.sort_unstable_by(|a, b| b.cmp(a));
        Ok(BasePair { d, d_prime })
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    pub fn is_default(&self) -> bool {
        self.d == DEFAULT_BASE && self.d_prime == DEFAULT_BASE_PRIME
    }

    pub fn shares_power_sums(&self, k: usize) -> bool {
        power_sums(&self.d, k) == power_sums(&self.d_prime, k)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComposedFamilyPoint {
    pub lambda: u64,
    pub mu: u64,
    pub multidegree: MultiDegree,
}

impl ComposedFamilyPoint {
    pub fn s(&self) -> u64 {
        self.lambda + self.mu
    }

    pub fn ambient_dim(&self) -> u64 {
        self.multidegree.ambient_dim()
    }
}

/// `d_{λ,μ}` as a 5-dimensional complete intersection.
pub fn compose(pair: &BasePair, lambda: u64, mu: u64) -> Result<ComposedFamilyPoint> {
    if lambda + mu == 0 {
        return Err(Error::Precondition(
            "composed multidegree needs λ + μ >= 1".into(),
        ));
    }
    let degrees = (0..lambda)
        .flat_map(|_| pair.d.iter().copied())
        .chain((0..mu).flat_map(|_| pair.d_prime.iter().copied()));
    Ok(ComposedFamilyPoint {
        lambda,
        mu,
        multidegree: MultiDegree::new(5, degrees)?,
    })
}

/// `N = r₀·s + 5` for a family of size `s` over a base pair of length `r₀`.
pub fn family_ambient_dim(pair: &BasePair, s: u64) -> u64 {
    pair.len() as u64 * s + 5
}

/// `Σ_{a∈x} Σ_{b∈y} Σ_{c∈z} C(N + a - b - c, N)`.
pub fn gamma_triple(x: &[u64], y: &[u64], z: &[u64], row: &BinomialRow) -> BigInt {
    let mut total = BigInt::zero();
    for &a in x {
        for &b in y {
            for &c in z {
                total += row.get(a as i64 - b as i64 - c as i64);
            }
        }
    }
    total
}

/// `Σ_{a∈x} Σ_{k1<k2} C(N + a - y_{k1} - y_{k2}, N)`.
pub fn gamma_pairs(x: &[u64], y: &[u64], row: &BinomialRow) -> BigInt {
    let mut total = BigInt::zero();
    for &a in x {
        for i in 0..y.len() {
            for j in i + 1..y.len() {
                total += row.get(a as i64 - y[i] as i64 - y[j] as i64);
            }
        }
    }
    total
}

/// `Σ_{a∈x} Σ_{b∈y} C(N + a - b, N)`.
fn single_sum(x: &[u64], y: &[u64], row: &BinomialRow) -> BigInt {
    let mut total = BigInt::zero();
    for &a in x {
        for &b in y {
            total += row.get(a as i64 - b as i64);
        }
    }
    total
}

/// The ten Γ constants at a fixed ambient dimension. `p` marks the primed list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaTable {
    pub ambient_dim: u64,
    #[serde(with = "decimal")]
    pub ddd: BigInt,
    #[serde(with = "decimal")]
    pub pppp: BigInt,
    /// Also equals `Γ_{d d' d}`.
    #[serde(with = "decimal")]
    pub ddp: BigInt,
    /// Also equals `Γ_{d' d' d}`.
    #[serde(with = "decimal")]
    pub pdp: BigInt,
    #[serde(with = "decimal")]
    pub dpp: BigInt,
    #[serde(with = "decimal")]
    pub pdd: BigInt,
    #[serde(with = "decimal")]
    pub d_pairs_d: BigInt,
    #[serde(with = "decimal")]
    pub p_pairs_d: BigInt,
    #[serde(with = "decimal")]
    pub d_pairs_p: BigInt,
    #[serde(with = "decimal")]
    pub p_pairs_p: BigInt,
}

pub fn gamma_table(pair: &BasePair, ambient_dim: u64) -> Result<GammaTable> {
    if ambient_dim == 0 {
        return Err(Error::Precondition("Γ constants need N >= 1".into()));
    }
    let max = pair
        .d
        .iter()
        .chain(&pair.d_prime)
        .copied()
        .max()
        .unwrap_or(0);
    let row = BinomialRow::new(ambient_dim, max);
    let (d, p) = (&pair.d[..], &pair.d_prime[..]);
    Ok(GammaTable {
        ambient_dim,
        ddd: gamma_triple(d, d, d, &row),
        pppp: gamma_triple(p, p, p, &row),
        ddp: gamma_triple(d, d, p, &row),
        pdp: gamma_triple(p, d, p, &row),
        dpp: gamma_triple(d, p, p, &row),
        pdd: gamma_triple(p, d, d, &row),
        d_pairs_d: gamma_pairs(d, d, &row),
        p_pairs_d: gamma_pairs(p, d, &row),
        d_pairs_p: gamma_pairs(d, p, &row),
        p_pairs_p: gamma_pairs(p, p, &row),
    })
}

/// Closed-form and direct values of `m(d_{λ+1,s-λ-1}) - m(d_{λ,s-λ})`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaReport {
    pub lambda: u64,
    pub s: u64,
    pub ambient_dim: u64,
    #[serde(with = "decimal")]
    pub m0: BigInt,
    #[serde(with = "decimal")]
    pub m1: BigInt,
    #[serde(with = "decimal")]
    pub m2: BigInt,
    /// Only available for the default base pair.
    #[serde(with = "decimal::option")]
    pub m3: Option<BigInt>,
    #[serde(with = "decimal::option")]
    pub closed_form: Option<BigInt>,
    #[serde(with = "decimal")]
    pub direct: BigInt,
    pub agreement: bool,
}

fn half(value: BigInt) -> BigInt {
    debug_assert!((&value % 2u32).is_zero());
    value / 2
}

/// `M_3(λ, s)` for the default pair, where only degrees 88/87 against
/// triples from {31, 29, 28} survive.
fn m3_default(lambda: &BigInt, s: &BigInt, ambient_dim: u64) -> Result<BigInt> {
    let (l, s) = (lambda, s);
    let c = |v: i64| BigInt::from(v);
    let q = |num: BigInt, den: i64| Rational::new(num, c(den));
    let b = |k: i64| Rational::from_integer(binomial(ambient_dim as i64 + k, ambient_dim));
    let (l2, l3, s2, s3) = (l * l, l * l * l, s * s, s * s * s);

    let t0 = q(
        c(12) - c(21) * s + c(12) * &s2 - c(3) * &s3 + c(44) * l - c(54) * s * l
            + c(18) * &s2 * l
            + c(60) * &l2
            - c(48) * s * &l2
            + c(40) * &l3,
        6,
    );
    let t1 = q(
        c(-6) + c(9) * s - c(3) * &s2 - c(23) * l + c(30) * s * l - c(12) * &s2 * l - c(33) * &l2
            + c(36) * s * &l2
            - c(28) * &l3,
        6,
    ) * b(1);
    let t2 = -q(
        (c(-1) + s - c(2) * l) * (c(2) - c(3) * s + &s2 + c(4) * l - c(4) * s * l + c(4) * &l2),
        2,
    ) * b(2);
    let t3 = q(
        (c(-1) + s - l) * (c(6) - c(7) * s + c(2) * &s2 + c(13) * l - c(7) * s * l + c(8) * &l2),
        3,
    ) * b(3);
    let t4 = q((c(1) - s + l) * (c(2) - s + l) * (c(3) - s + c(4) * l), 6) * b(4);
    exactmath::to_integer(&(t0 + t1 + t2 + t3 + t4), "M_3")
}

pub fn delta_closed_form(pair: &BasePair, lambda: u64, s: u64) -> Result<DeltaReport> {
    if lambda >= s {
        return Err(Error::Precondition(format!(
            "closed-form difference needs 0 <= λ < s, got λ = {lambda}, s = {s}"
        )));
    }
    let ambient_dim = family_ambient_dim(pair, s);
    let max = pair
        .d
        .iter()
        .chain(&pair.d_prime)
        .copied()
        .max()
        .unwrap_or(0);
    let row = BinomialRow::new(ambient_dim, max);
    let (d, p) = (&pair.d[..], &pair.d_prime[..]);
    let g = gamma_table(pair, ambient_dim)?;
    let (l, sb) = (BigInt::from(lambda), BigInt::from(s));
    let one = BigInt::one();
    let c = |v: i64| BigInt::from(v);

    let m0 = d.iter().map(|&x| row.get(x as i64).clone()).sum::<BigInt>()
        - p.iter().map(|&x| row.get(x as i64).clone()).sum::<BigInt>();

    let m1 = (-(c(2) * &l) - &one) * single_sum(d, d, &row)
        + (&one + c(2) * &l - &sb) * (single_sum(d, p, &row) + single_sum(p, d, &row))
        + (c(2) * &sb - c(2) * &l - &one) * single_sum(p, p, &row);

    let smlm1 = &sb - &l - &one; // s - λ - 1
    let sml = &sb - &l; // s - λ
    let m2 = (c(2) * &l + &one) * &g.d_pairs_d
        + half(&l * (c(3) * &l + &one)) * &g.ddd
        + ((&l + &one) * (&l + &one) * &smlm1 - &l * &l * &sml) * &g.ddp
        + (&sb - c(2) * &l - &one) * (&g.d_pairs_p + &g.p_pairs_d)
        + half(&smlm1 * (&sb - c(3) * &l - c(2))) * &g.dpp
        + half(&l * (c(2) * &sb - c(3) * &l - &one)) * &g.pdd
        + ((&l + &one) * &smlm1 * &smlm1 - &l * &sml * &sml) * &g.pdp
        + (&one - c(2) * &sb + c(2) * &l) * &g.p_pairs_p
        + half(&smlm1 * (c(2) - c(3) * &sb + c(3) * &l)) * &g.pppp;

    let m3 = if pair.is_default() {
        Some(if s >= 2 {
            m3_default(&l, &sb, ambient_dim)?
        } else {
            BigInt::zero()
        })
    } else {
        None
    };

    let closed_form = m3.as_ref().map(|m3| &m0 + &m1 + &m2 + m3);
    let upper = compose(pair, lambda + 1, s - lambda - 1)?;
    let lower = compose(pair, lambda, s - lambda)?;
    let direct = moduli_dimension(&upper.multidegree)? - moduli_dimension(&lower.multidegree)?;
    let agreement = closed_form.as_ref() == Some(&direct);
    Ok(DeltaReport {
        lambda,
        s,
        ambient_dim,
        m0,
        m1,
        m2,
        m3,
        closed_form,
        direct,
        agreement,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyRow {
    pub lambda: u64,
    pub mu: u64,
    #[serde(with = "decimal")]
    pub m: BigInt,
    /// `m(d_{λ,s-λ}) - m(d_{λ-1,s-λ+1})`, absent on the first row.
    #[serde(with = "decimal::option")]
    pub delta: Option<BigInt>,
    #[serde(with = "decimal::option")]
    pub closed_form_delta: Option<BigInt>,
    pub agreement: Option<bool>,
    pub positive: Option<bool>,
    pub above_lower_bound: Option<bool>,
    /// Only checked when `s ≥ 3`.
    pub above_large_bound: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub s: u64,
    pub ambient_dim: u64,
    pub rows: Vec<FamilyRow>,
    pub strictly_increasing: bool,
    pub closed_form_agrees: bool,
    /// Every member shares one invariant profile.
    pub shared_profile: bool,
    pub traving_holds: bool,
}

impl FamilyReport {
    pub fn min_delta(&self) -> Option<&BigInt> {
        self.rows.iter().filter_map(|r| r.delta.as_ref()).min()
    }

    pub fn bounds_hold(&self) -> bool {
        self.rows.iter().skip(1).all(|r| {
            r.positive == Some(true)
                && r.above_lower_bound == Some(true)
                && r.above_large_bound != Some(false)
        })
    }
}

/// All `s + 1` members of the family at size `s`, ordered by `λ`.
pub fn family(pair: &BasePair, s: u64, jobs: usize) -> Result<FamilyReport> {
    if s == 0 {
        return Err(Error::Precondition("family size s must be >= 1".into()));
    }
    let points: Vec<u64> = (0..=s).collect();
    let ms = ordered_map(points, jobs, |lambda| {
        compose(pair, lambda, s - lambda).and_then(|pt| moduli_dimension(&pt.multidegree))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let deltas = ordered_map((0..s).collect(), jobs, |lambda| {
        delta_closed_form(pair, lambda, s)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let large = large_family_bound();
    let lower = BigInt::from(DELTA_LOWER_BOUND);
    let mut rows = Vec::with_capacity(ms.len());
    for (lambda, m) in ms.iter().enumerate() {
        let prev = lambda.checked_sub(1);
        let delta = prev.map(|p| m - &ms[p]);
        let report = prev.map(|p| &deltas[p]);
        if let (Some(delta), Some(report)) = (&delta, report) {
            // Family deltas and per-point direct deltas come from the same m values.
            debug_assert_eq!(delta, &report.direct);
        }
        rows.push(FamilyRow {
            lambda: lambda as u64,
            mu: s - lambda as u64,
            m: m.clone(),
            closed_form_delta: report.and_then(|r| r.closed_form.clone()),
            agreement: report.map(|r| r.agreement),
            positive: delta.as_ref().map(|d| d > &BigInt::zero()),
            above_lower_bound: delta.as_ref().map(|d| d > &lower),
            above_large_bound: delta.as_ref().filter(|_| s >= 3).map(|d| d > &large),
            delta,
        });
    }
    let strictly_increasing = ms.windows(2).all(|w| w[0] < w[1]);
    let closed_form_agrees = deltas.iter().all(|d| d.agreement);

    let first = compose(pair, 0, s)?;
    let first_profile = invariant_profile(&first.multidegree)?;
    let mut shared_profile = true;
    for lambda in 1..=s {
        let pt = compose(pair, lambda, s - lambda)?;
        shared_profile &= invariant_profile(&pt.multidegree)? == first_profile;
    }
    let traving_holds = traving_condition(5, &first_profile.d)?.holds;

    Ok(FamilyReport {
        s,
        ambient_dim: family_ambient_dim(pair, s),
        rows,
        strictly_increasing,
        closed_form_agrees,
        shared_profile,
        traving_holds,
    })
}

/// Pairwise verdicts among all members of the family at size `s`.
pub fn family_verdicts(
    pair: &BasePair,
    s: u64,
) -> Result<Vec<((u64, u64), ClassificationVerdict)>> {
    let members = (0..=s)
        .map(|l| compose(pair, l, s - l))
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            let v = classify_pair(&members[i].multidegree, &members[j].multidegree)?;
            out.push(((i as u64, j as u64), v));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonotonicitySummary {
    pub s: u64,
    #[serde(with = "decimal")]
    pub min_delta: BigInt,
    pub all_positive: bool,
    pub above_lower_bound: bool,
    pub above_large_bound: Option<bool>,
    pub strictly_increasing: bool,
    pub closed_form_agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonotonicityReport {
    pub s_max: u64,
    pub per_s: Vec<MonotonicitySummary>,
    /// `(λ, s)` points where closed form and direct value differ.
    pub disagreements: Vec<(u64, u64)>,
    pub delta_count: usize,
    pub passed: bool,
}

pub fn verify_monotonicity(pair: &BasePair, s_max: u64, jobs: usize) -> Result<MonotonicityReport> {
    if s_max == 0 {
        return Err(Error::Precondition("s_max must be >= 1".into()));
    }
    let mut per_s = Vec::new();
    let mut disagreements = Vec::new();
    let mut delta_count = 0;
    for s in 1..=s_max {
        let fam = family(pair, s, jobs)?;
        for row in fam.rows.iter().skip(1) {
            delta_count += 1;
            if row.agreement != Some(true) {
                disagreements.push((row.lambda - 1, s));
            }
        }
        let deltas: Vec<&FamilyRow> = fam.rows.iter().skip(1).collect();
        per_s.push(MonotonicitySummary {
            s,
            min_delta: fam.min_delta().cloned().unwrap_or_default(),
            all_positive: deltas.iter().all(|r| r.positive == Some(true)),
            above_lower_bound: deltas.iter().all(|r| r.above_lower_bound == Some(true)),
            above_large_bound: (s >= 3)
                .then(|| deltas.iter().all(|r| r.above_large_bound == Some(true))),
            strictly_increasing: fam.strictly_increasing,
            closed_form_agrees: fam.closed_form_agrees,
        });
    }
    let passed = disagreements.is_empty()
        && per_s.iter().all(|p| {
            p.all_positive
                && p.above_lower_bound
                && p.above_large_bound != Some(false)
                && p.strictly_increasing
        });
    Ok(MonotonicityReport {
        s_max,
        per_s,
        disagreements,
        delta_count,
        passed,
    })
}
