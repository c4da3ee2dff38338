//! Power sums and Newton's identities.
//!
//! `elementary_from_power_sums` turns a sequence `t_1, …, t_k` into the elementary
//! symmetric values `e_1, …, e_k` of formal variables with those power sums:
//!
//! ```text
//! e_0 = 1,    j · e_j = Σ_{i=1..j} (-1)^{i-1} e_{j-i} t_i
//! ```
//!
//! `e_j` is `g_j(t_1, …, t_j) / j!` in the classical notation. The explicit
//! polynomials for `g_1 … g_6` are kept in [`g_explicit`] as a cross-check.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{BigInt, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSums(Vec<BigInt>);

impl PowerSums {
    pub fn as_slice(&self) -> &[BigInt] {
        &self.0
    }

    /// `s_i`, 1-based.
    pub fn get(&self, i: usize) -> &BigInt {
        &self.0[i - 1]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<BigInt> {
        self.0
    }
}

/// `s_i = Σ_j d_j^i` for `1 ≤ i ≤ k`.
pub fn power_sums(degrees: &[u64], k: usize) -> PowerSums {
    let mut sums = vec![BigInt::zero(); k];
    for &d in degrees {
        let d = BigInt::from(d);
        let mut pow = BigInt::one();
        for s in sums.iter_mut() {
            pow *= &d;
            *s += &pow;
        }
    }
    PowerSums(sums)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementaryValues(Vec<Rational>);

impl ElementaryValues {
    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    /// `e_j`, 1-based.
    pub fn get(&self, j: usize) -> &Rational {
        &self.0[j - 1]
    }

    pub fn last(&self) -> Option<&Rational> {
        self.0.last()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

pub fn elementary_from_power_sums(t: &[BigInt]) -> ElementaryValues {
    let mut e: Vec<Rational> = Vec::with_capacity(t.len() + 1);
    e.push(Rational::one());
    for j in 1..=t.len() {
        let mut acc = Rational::zero();
        for i in 1..=j {
            let term = &e[j - i] * Rational::from_integer(t[i - 1].clone());
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        e.push(acc / Rational::from_integer(BigInt::from(j)));
    }
    e.remove(0);
    ElementaryValues(e)
}

/// `g_j(t_1, …, t_j) / j!` from the printed expansions, `1 ≤ j ≤ 6`.
pub fn g_explicit(j: usize, t: &[BigInt]) -> Result<Rational> {
    if !(1..=6).contains(&j) {
        return Err(Error::Precondition(format!(
            "explicit g_j is only tabulated for 1 <= j <= 6, got {j}"
        )));
    }
    if t.len() < j {
        return Err(Error::Precondition(format!(
            "g_{j} needs {j} arguments, got {}",
            t.len()
        )));
    }
    let s = |i: usize| t[i - 1].clone();
    let c = |v: i64| BigInt::from(v);
    let (s1, s2) = (s(1), if j >= 2 { s(2) } else { BigInt::zero() });
    let g = match j {
        1 => s1,
        2 => &s1 * &s1 - &s2,
        3 => {
            let s3 = s(3);
            s1.pow(3) - c(3) * &s1 * &s2 + c(2) * s3
        }
        4 => {
            let (s3, s4) = (s(3), s(4));
            s1.pow(4) - c(6) * s1.pow(2) * &s2 + c(8) * &s1 * &s3 + c(3) * s2.pow(2) - c(6) * s4
        }
        5 => {
            let (s3, s4, s5) = (s(3), s(4), s(5));
            s1.pow(5) - c(10) * s1.pow(3) * &s2 + c(20) * s1.pow(2) * &s3 - c(30) * &s1 * &s4
                + c(15) * &s1 * s2.pow(2)
                - c(20) * &s2 * &s3
                + c(24) * s5
        }
        _ => {
            let (s3, s4, s5, s6) = (s(3), s(4), s(5), s(6));
            s1.pow(6) - c(15) * s1.pow(4) * &s2 + c(40) * s1.pow(3) * &s3 - c(90) * s1.pow(2) * &s4
                + c(45) * s1.pow(2) * s2.pow(2)
                - c(120) * &s1 * &s2 * &s3
                + c(144) * &s1 * &s5
                - c(15) * s2.pow(3)
                + c(90) * &s2 * &s4
                + c(40) * s3.pow(2)
                - c(120) * s6
        }
    };
    let factorial: i64 = (1..=j as i64).product();
    Ok(Rational::new(g, c(factorial)))
}
