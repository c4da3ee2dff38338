//! Characteristic numbers of `X_n(d_1, …, d_r) ⊂ CP^{n+r}`.
//!
//! With `x` the hyperplane class and `s_i` the power sums of the degrees, every class
//! is an integer multiple of a power of `x`:
//!
//! ```text
//! c_k = e_k(n+r+1-s_1, …, n+r+1-s_k)            1 ≤ k ≤ n
//! p_k = e_k(n+r+1-s_2, …, n+r+1-s_{2k})         1 ≤ k ≤ ⌊n/2⌋
//! e   = d · e_n(n+r+1-s_1, …, n+r+1-s_n)
//! ```

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{self, decimal, BigInt, Rational};
use crate::symfun::{elementary_from_power_sums, power_sums, PowerSums};

/// Dimension plus canonical multidegree: sorted non-increasing, every entry ≥ 2.
///
/// Degree-1 entries are hyperplane sections and are dropped on construction; they
/// leave every invariant unchanged.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MultiDegree {
    n: u32,
    degrees: Vec<u64>,
}

impl MultiDegree {
    pub fn new(n: u32, degrees: impl IntoIterator<Item = u64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidMultiDegree(
                "dimension n must be at least 1".into(),
            ));
        }
        let mut list = Vec::new();
        for d in degrees {
            match d {
                0 => return Err(Error::InvalidMultiDegree("degree 0 is not allowed".into())),
                1 => {}
                d => list.push(d),
            }
        }
        list.sort_unstable_by(|a, b| b.cmp(a));
        Ok(MultiDegree { n, degrees: list })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    /// Codimension `r`.
    pub fn codim(&self) -> usize {
        self.degrees.len()
    }

    /// `N = n + r`.
    pub fn ambient_dim(&self) -> u64 {
        self.n as u64 + self.degrees.len() as u64
    }

    fn shift(&self) -> BigInt {
        BigInt::from(self.ambient_dim() + 1)
    }

    pub fn with_dimension(&self, n: u32) -> Result<Self> {
        MultiDegree::new(n, self.degrees.iter().copied())
    }
}

impl fmt::Display for MultiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X_{}(", self.n)?;
        for (i, d) in self.degrees.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
        f.write_str(")")
    }
}

impl<'de> Deserialize<'de> for MultiDegree {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            n: u32,
            degrees: Vec<u64>,
        }
        let raw = Raw::deserialize(d)?;
        MultiDegree::new(raw.n, raw.degrees).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChernVector(#[serde(with = "decimal::vec")] pub Vec<BigInt>);

/// The classification key `(n, d, p_1..p_⌊n/2⌋, e)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct InvariantProfile {
    pub n: u32,
    #[serde(with = "decimal")]
    pub d: BigInt,
    #[serde(with = "decimal::vec")]
    pub p: Vec<BigInt>,
    #[serde(with = "decimal")]
    pub e: BigInt,
}

impl InvariantProfile {
    /// `e / d` as an exact rational.
    pub fn e_over_d(&self) -> Rational {
        Rational::new(self.e.clone(), self.d.clone())
    }

    /// `e / d` when the division is exact.
    pub fn e_over_d_integer(&self) -> Option<BigInt> {
        let q = self.e_over_d();
        q.is_integer().then(|| q.to_integer())
    }
}

/// JSON form of a profile together with the multidegree it came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileDocument {
    pub n: u32,
    pub degrees: Vec<u64>,
    #[serde(with = "decimal")]
    pub d: BigInt,
    #[serde(with = "decimal::vec")]
    pub p: Vec<BigInt>,
    #[serde(with = "decimal")]
    pub e: BigInt,
    #[serde(with = "decimal::option")]
    pub e_over_d: Option<BigInt>,
}

impl ProfileDocument {
    pub fn new(md: &MultiDegree, profile: &InvariantProfile) -> Self {
        ProfileDocument {
            n: md.n(),
            degrees: md.degrees().to_vec(),
            d: profile.d.clone(),
            p: profile.p.clone(),
            e: profile.e.clone(),
            e_over_d: profile.e_over_d_integer(),
        }
    }

    pub fn profile(&self) -> InvariantProfile {
        InvariantProfile {
            n: self.n,
            d: self.d.clone(),
            p: self.p.clone(),
            e: self.e.clone(),
        }
    }
}

pub fn total_degree(md: &MultiDegree) -> BigInt {
    md.degrees
        .iter()
        .fold(BigInt::one(), |acc, &d| acc * BigInt::from(d))
}

/// `t_i = n + r + 1 - s_i` for the given power sums.
fn shifted(md: &MultiDegree, sums: &[BigInt]) -> Vec<BigInt> {
    let shift = md.shift();
    sums.iter().map(|s| &shift - s).collect()
}

fn sums_for(md: &MultiDegree) -> PowerSums {
    let n = md.n as usize;
    power_sums(&md.degrees, n.max(2 * (n / 2)))
}

pub fn chern_coefficients(md: &MultiDegree) -> Result<ChernVector> {
    let sums = sums_for(md);
    let t = shifted(md, &sums.as_slice()[..md.n as usize]);
    let values = elementary_from_power_sums(&t);
    let coeffs = values
        .as_slice()
        .iter()
        .enumerate()
        .map(|(k, v)| exactmath::to_integer(v, &format!("c_{} of {md}", k + 1)))
        .collect::<Result<_>>()?;
    Ok(ChernVector(coeffs))
}

pub fn pontrjagin_coefficients(md: &MultiDegree) -> Result<Vec<BigInt>> {
    let half = md.n as usize / 2;
    let sums = sums_for(md);
    let even: Vec<BigInt> = (1..=half).map(|i| sums.get(2 * i).clone()).collect();
    let t = shifted(md, &even);
    elementary_from_power_sums(&t)
        .as_slice()
        .iter()
        .enumerate()
        .map(|(k, v)| exactmath::to_integer(v, &format!("p_{} of {md}", k + 1)))
        .collect()
}

pub fn euler_characteristic(md: &MultiDegree) -> Result<BigInt> {
    let sums = sums_for(md);
    let t = shifted(md, &sums.as_slice()[..md.n as usize]);
    let top = elementary_from_power_sums(&t)
        .last()
        .cloned()
        .unwrap_or_else(Rational::zero);
    let e = top * Rational::from_integer(total_degree(md));
    exactmath::to_integer(&e, &format!("e of {md}"))
}

pub fn invariant_profile(md: &MultiDegree) -> Result<InvariantProfile> {
    Ok(InvariantProfile {
        n: md.n,
        d: total_degree(md),
        p: pontrjagin_coefficients(md)?,
        e: euler_characteristic(md)?,
    })
}
