//! Exact integer and rational arithmetic helpers.
//!
//! Unbounded integers come from `num-bigint`; rationals are `num-rational`'s
//! `BigRational`, which keeps values in lowest terms with a positive denominator.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use num_bigint::BigInt;
pub type Rational = num_rational::BigRational;

/// `C(m, k)` with the vanishing convention `C(m, k) = 0` whenever `m < k`.
///
/// Negative `m` therefore always yields zero; no generalized binomial is ever formed.
pub fn binomial(m: i64, k: u64) -> BigInt {
    if m < 0 || (m as u64) < k {
        return BigInt::zero();
    }
    let m = m as u64;
    let k = k.min(m - k);
    let mut acc = BigInt::one();
    for i in 1..=k {
        // acc = C(m - k + i - 1, i - 1) here, so the division is exact.
        acc *= m - k + i;
        acc /= i;
    }
    acc
}

/// Table of `C(base + j, base)` for `j = 0..=max_offset`.
///
/// The moduli-dimension sums only ever need binomials of this shape with a fixed
/// lower index, so they are precomputed once by the ratio
/// `C(base + j, base) = C(base + j - 1, base) · (base + j) / j`.
#[derive(Debug, Clone)]
pub struct BinomialRow {
    base: u64,
    values: Vec<BigInt>,
}

impl BinomialRow {
    pub fn new(base: u64, max_offset: u64) -> Self {
        let mut values = Vec::with_capacity(max_offset as usize + 1);
        let mut acc = BigInt::one();
        values.push(acc.clone());
        for j in 1..=max_offset {
            acc *= base + j;
            acc /= j;
            values.push(acc.clone());
        }
        BinomialRow { base, values }
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    /// `C(base + offset, base)`, zero for negative offsets.
    pub fn get(&self, offset: i64) -> &BigInt {
        static ZERO: std::sync::OnceLock<BigInt> = std::sync::OnceLock::new();
        if offset < 0 {
            return ZERO.get_or_init(BigInt::zero);
        }
        &self.values[offset as usize]
    }
}

/// Converts an exact rational to an integer, failing if a denominator remains.
pub fn to_integer(value: &Rational, what: &str) -> Result<BigInt> {
    if value.is_integer() {
        Ok(value.to_integer())
    } else {
        Err(Error::NonIntegral {
            what: what.to_string(),
            value: value.to_string(),
        })
    }
}

/// Prime factorization `d = Π p^ν_p(d)` with strictly increasing primes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeFactorization {
    factors: Vec<(u64, u32)>,
}

impl PrimeFactorization {
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// Exponent of `p`, zero when `p` does not divide.
    pub fn exponent(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|(q, _)| *q == p)
            .map_or(0, |&(_, e)| e)
    }

    pub fn product(&self) -> BigInt {
        self.factors.iter().fold(BigInt::one(), |acc, &(p, e)| {
            acc * num_traits::pow(BigInt::from(p), e as usize)
        })
    }
}

impl fmt::Display for PrimeFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (i, (p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" * ")?;
            }
            if *e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Trial-division factorization of `1 ≤ d < 2^64`.
///
/// Uses a 2·3·5 wheel. Fast for the total degrees that appear in practice
/// (well below 10^14); a large prime factor near 2^64 costs ~10^9 divisions.
pub fn factorize(d: &BigInt) -> Result<PrimeFactorization> {
    let value = d
        .to_u64()
        .ok_or_else(|| Error::Range(format!("cannot factor {d}: must satisfy 1 <= d < 2^64")))?;
    if value == 0 {
        return Err(Error::Range("cannot factor 0".into()));
    }
    Ok(factorize_u64(value))
}

pub fn factorize_u64(mut d: u64) -> PrimeFactorization {
    let mut factors = Vec::new();
    let mut take = |d: &mut u64, p: u64| {
        let mut e = 0;
        while (*d).is_multiple_of(p) {
            *d /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    };
    for p in [2, 3, 5] {
        take(&mut d, p);
    }
    const WHEEL: [u64; 8] = [4, 2, 4, 2, 4, 6, 2, 6];
    let mut p: u64 = 7;
    let mut w = 0;
    while p.checked_mul(p).is_some_and(|sq| sq <= d) {
        take(&mut d, p);
        p += WHEEL[w];
        w = (w + 1) % WHEEL.len();
    }
    if d > 1 {
        factors.push((d, 1));
    }
    PrimeFactorization { factors }
}

/// `ν_p(d)` for an arbitrary positive integer, by repeated division.
pub fn valuation(d: &BigInt, p: u64) -> u32 {
    if d.is_zero() {
        return u32::MAX;
    }
    let p = BigInt::from(p);
    let mut rest = d.clone();
    let mut e = 0;
    loop {
        let (q, r) = rest.div_rem(&p);
        if !r.is_zero() {
            return e;
        }
        rest = q;
        e += 1;
    }
}

pub fn is_prime_u64(n: u64) -> bool {
    n >= 2 && factorize_u64(n).factors == [(n, 1)]
}

/// Serde adapters that render big integers as decimal strings.
pub mod decimal {
    use super::BigInt;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(value)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let text = String::deserialize(d)?;
        parse(&text).map_err(D::Error::custom)
    }

    pub(crate) fn parse(text: &str) -> Result<BigInt, String> {
        let digits = text.strip_prefix('-').unwrap_or(text);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("not a decimal integer: {text:?}"));
        }
        text.parse().map_err(|e| format!("{e}"))
    }

    pub mod vec {
        use super::BigInt;
        use serde::{de::Error as _, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(values: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(values.len()))?;
            for v in values {
                seq.serialize_element(&v.to_string())?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
            Vec::<String>::deserialize(d)?
                .iter()
                .map(|t| super::parse(t).map_err(D::Error::custom))
                .collect()
        }
    }

    pub mod option {
        use super::BigInt;
        use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(value: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
            match value {
                Some(v) => s.collect_str(v),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigInt>, D::Error> {
            Option::<String>::deserialize(d)?
                .map(|t| super::parse(&t).map_err(D::Error::custom))
                .transpose()
        }
    }
}

/// Rationals as `"p/q"` strings, or `"p"` when integral.
pub mod rational_string {
    use super::{BigInt, Rational};
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(value)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        let (num, den) = match text.split_once('/') {
            Some((n, q)) => (n, q),
            None => (text.as_str(), "1"),
        };
        let num: BigInt = super::decimal::parse(num).map_err(D::Error::custom)?;
        let den: BigInt = super::decimal::parse(den).map_err(D::Error::custom)?;
        if num_traits::Zero::is_zero(&den) {
            return Err(D::Error::custom("zero denominator"));
        }
        Ok(Rational::new(num, den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pascal_row(m: usize) -> Vec<BigInt> {
        let mut row = vec![BigInt::one()];
        for _ in 0..m {
            let mut next = vec![BigInt::one(); row.len() + 1];
            for i in 1..row.len() {
                next[i] = &row[i - 1] + &row[i];
            }
            row = next;
        }
        row
    }

    #[test]
    fn binomial_vanishes_below_lower_index() {
        assert_eq!(binomial(11, 12), BigInt::zero());
        assert_eq!(binomial(-3, 2), BigInt::zero());
        assert_eq!(binomial(-1, 0), BigInt::zero());
        assert_eq!(binomial(12, 12), BigInt::one());
        assert_eq!(binomial(0, 0), BigInt::one());
    }

    #[test]
    fn binomial_100_12_matches_pascal() {
        let row = pascal_row(100);
        assert_eq!(binomial(100, 12), row[12]);
        assert_eq!(
            binomial(100, 12),
            "1050421051106700".parse::<BigInt>().unwrap()
        );
    }

    #[test]
    fn pascal_identity_up_to_200() {
        for m in 1..=200i64 {
            for k in 1..=m as u64 {
                assert_eq!(
                    binomial(m, k),
                    binomial(m - 1, k - 1) + binomial(m - 1, k),
                    "C({m},{k})"
                );
            }
        }
    }

    #[test]
    fn binomial_row_agrees_with_binomial() {
        let row = BinomialRow::new(47, 90);
        for j in -3..=90i64 {
            assert_eq!(*row.get(j), binomial(47 + j, 47));
        }
    }

    #[test]
    fn factorizes_published_total_degrees() {
        let f = factorize(&BigInt::from(340867118592u64)).unwrap();
        assert_eq!(
            f.factors(),
            &[(2, 9), (3, 5), (7, 2), (11, 1), (13, 1), (17, 1), (23, 1)]
        );
        let f = factorize(&BigInt::from(1136843237376u64)).unwrap();
        assert_eq!(
            f.factors(),
            &[(2, 11), (3, 6), (7, 1), (11, 2), (29, 1), (31, 1)]
        );
        assert_eq!(f.to_string(), "2^11 * 3^6 * 7 * 11^2 * 29 * 31");
    }

    #[test]
    fn factorize_unit_and_range() {
        assert!(factorize(&BigInt::one()).unwrap().factors().is_empty());
        assert!(matches!(factorize(&BigInt::zero()), Err(Error::Range(_))));
        let big = BigInt::from(u64::MAX) + 1;
        assert!(matches!(factorize(&big), Err(Error::Range(_))));
    }

    #[test]
    fn factorize_large_prime() {
        let p = 1_000_000_007u64;
        assert_eq!(factorize_u64(p).factors(), &[(p, 1)]);
        assert_eq!(factorize_u64(p * 49).factors(), &[(7, 2), (p, 1)]);
    }

    #[test]
    fn valuation_of_big_powers() {
        let d = num_traits::pow(BigInt::from(1136843237376u64), 4);
        assert_eq!(valuation(&d, 2), 44);
        assert_eq!(valuation(&d, 3), 24);
        assert_eq!(valuation(&d, 5), 0);
    }

    #[test]
    fn decimal_strings_round_trip() {
        #[derive(Serialize, Deserialize, PartialEq, Debug)]
        struct W {
            #[serde(with = "decimal")]
            v: BigInt,
            #[serde(with = "rational_string")]
            q: Rational,
        }
        let w = W {
            v: "-123456789012345678901234567890".parse().unwrap(),
            q: Rational::new(BigInt::from(-6), BigInt::from(4)),
        };
        let json = serde_json::to_string(&w).unwrap();
        assert_eq!(
            json,
            r#"{"v":"-123456789012345678901234567890","q":"-3/2"}"#
        );
        assert_eq!(serde_json::from_str::<W>(&json).unwrap(), w);
        assert!(serde_json::from_str::<W>(r#"{"v":"1e5","q":"1"}"#).is_err());
    }
}
