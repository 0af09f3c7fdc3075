//! Level-4 Eisenstein series at the cusp infinity and their eta-quotient
//! identities.
//!
//! For exponents (r2, r4) in the admissible window, eta(t)^r1 eta(2t)^r2
//! eta(4t)^r4 with r1 = -2 r2 - 4 r4 equals 1 + sum_n c(n) q^n, where
//!
//!   c(n) = e^{-pi i k/2} (2pi)^k / Gamma(k) n^{k-1}
//!          sum_{c>=1} (4c)^{-k} sum_{0<=d<4c, (d,4c)=1} e(dn/4c - P(4c,d)/24).
//!
//! P stays an exact rational; floating point enters only through e(.) and the
//! powers of c, and the c-sum is truncated.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::etaquot::EtaQuotient;
use crate::ntheory::dedekind_sum_small;
use crate::qseries::expand;

type Q = Ratio<i128>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EisParams {
    pub r2: Ratio<i64>,
    pub r4: Ratio<i64>,
}

impl EisParams {
    /// Checks 0 <= -2r2-5r4 < 8, 0 <= -r4 < 8 and that the two sum past 8.
    pub fn new(r2: Ratio<i64>, r4: Ratio<i64>) -> Result<Self> {
        let u = -r2 * 2 - r4 * 5;
        let v = -r4;
        let eight = Ratio::from_integer(8);
        let zero = Ratio::zero();
        if u < zero || u >= eight || v < zero || v >= eight || u + v <= eight {
            return Err(Error::NotApplicable(format!(
                "(r2, r4) = ({r2}, {r4}) is outside the window with k > 2"
            )));
        }
        Ok(EisParams { r2, r4 })
    }

    pub fn r1(&self) -> Ratio<i64> {
        -self.r2 * 2 - self.r4 * 4
    }

    /// k = (-r2 - 3 r4)/2.
    pub fn weight(&self) -> Ratio<i64> {
        (-self.r2 - self.r4 * 3) / 2
    }

    /// Least D with D r_n even for all n.
    pub fn cover_index(&self) -> u64 {
        self.eta_quotient().cover_index()
    }

    pub fn eta_quotient(&self) -> EtaQuotient {
        let big = |r: Ratio<i64>| BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()));
        EtaQuotient::new(4, [(1, big(self.r1())), (2, big(self.r2)), (4, big(self.r4))])
            .expect("level 4 divisors")
    }
}

fn wide(r: Ratio<i64>) -> Q {
    Q::new(*r.numer() as i128, *r.denom() as i128)
}

/// P(c4, d) = r2 (12 s(-d, c4/2) - 24 s(-d, c4) + 3) + r4 (12 s(-d, c4/4) - 48 s(-d, c4) + 9).
pub fn p_factor(c4: i64, d: i64, r2: Ratio<i64>, r4: Ratio<i64>) -> Result<Q> {
    if c4 <= 0 || c4 % 4 != 0 {
        return Err(Error::InvalidArgument(format!("c = {c4} must be a positive multiple of 4")));
    }
    if d.gcd(&c4) != 1 {
        return Err(Error::InvalidArgument(format!("gcd({d}, {c4}) != 1")));
    }
    let s = |m: i64| dedekind_sum_small(-d, m);
    let twelve = Q::from_integer(12);
    let a = s(c4 / 2) * twelve - s(c4) * 24 + 3;
    let b = s(c4 / 4) * twelve - s(c4) * 48 + 9;
    Ok(wide(r2) * a + wide(r4) * b)
}

fn frac(x: Q) -> Q {
    x - Q::from_integer(x.numer().div_floor(x.denom()))
}

/// e(dn/c4 - P/24) for n = 1..=nmax, summed over reduced d modulo c4.
fn inner_sums(p: &EisParams, c4: i64, nmax: usize) -> Vec<Complex64> {
    let mut acc = vec![Complex64::zero(); nmax];
    for d in (0..c4).filter(|d| d.gcd(&c4) == 1) {
        let shift = frac(-p_factor(c4, d, p.r2, p.r4).unwrap() / 24);
        let (a, b) = (*shift.numer(), *shift.denom());
        let modulus = c4 as i128 * b;
        for (i, slot) in acc.iter_mut().enumerate() {
            let u = (d as i128 * (i as i128 + 1)).rem_euclid(c4 as i128);
            let num = (a * c4 as i128 + u * b).rem_euclid(modulus);
            let theta = 2.0 * PI * (num as f64 / modulus as f64);
            *slot += Complex64::new(theta.cos(), theta.sin());
        }
    }
    acc
}

/// Coefficients c(1..=nmax) with the c-sum cut at c_max, and a bound on the
/// discarded tail of each: |inner sum| <= 4c gives
/// sum_{c > c_max} (4c)^{1-k} <= 4^{1-k} c_max^{2-k} / (k - 2).
pub fn eis_coeffs(p: &EisParams, nmax: usize, c_max: u64) -> Result<Vec<(Complex64, f64)>> {
    let k = p.weight().to_f64().unwrap();
    if k <= 2.0 {
        return Err(Error::NotApplicable(format!("weight {} is not above 2", p.weight())));
    }
    // Fixed ascending reduction over c keeps the result independent of the pool.
    let per_c: Vec<Vec<Complex64>> = (1..=c_max as i64)
        .into_par_iter()
        .map(|c| {
            let w = (4.0 * c as f64).powf(-k);
            inner_sums(p, 4 * c, nmax).into_iter().map(|z| z * w).collect()
        })
        .collect();
    let mut a = vec![Complex64::zero(); nmax];
    for row in per_c {
        for (s, z) in a.iter_mut().zip(row) {
            *s += z;
        }
    }
    let pre = Complex64::from_polar(1.0, -PI * k / 2.0) * (2.0 * PI).powf(k) / gamma(k);
    let tail = 4f64.powf(1.0 - k) * (c_max as f64).powf(2.0 - k) / (k - 2.0);
    Ok(a
        .into_iter()
        .enumerate()
        .map(|(i, s)| {
            let nk = ((i + 1) as f64).powf(k - 1.0);
            (pre * nk * s, pre.norm() * nk * tail)
        })
        .collect())
}

/// n-th coefficient; n = 0 is the constant term 1.
pub fn eis_coeff(p: &EisParams, n: usize, c_max: u64) -> Result<(Complex64, f64)> {
    if n == 0 {
        return Ok((Complex64::new(1.0, 0.0), 0.0));
    }
    Ok(eis_coeffs(p, n, c_max)?[n - 1])
}

#[derive(Clone, Debug, Serialize)]
pub struct EisRow {
    pub n: usize,
    pub series_value: f64,
    pub eis_value: f64,
    pub eis_imag: f64,
    pub abs_err: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct EisReport {
    pub rows: Vec<EisRow>,
    pub max_err: f64,
    pub pass: bool,
}

/// Compares the exact q-expansion of the quotient with the truncated
/// Eisenstein coefficients for 0 <= n <= nmax.
pub fn verify_identity(p: &EisParams, nmax: usize, c_max: u64, tol: f64) -> Result<EisReport> {
    let p = EisParams::new(p.r2, p.r4)?;
    let series = expand(&p.eta_quotient(), nmax);
    let eis = eis_coeffs(&p, nmax, c_max)?;
    let mut rows = Vec::with_capacity(nmax + 1);
    for n in 0..=nmax {
        let exact = series.coefficient(&BigRational::from_integer(BigInt::from(n)))?;
        let sv = exact.to_f64().unwrap();
        let ev = if n == 0 { Complex64::new(1.0, 0.0) } else { eis[n - 1].0 };
        rows.push(EisRow {
            n,
            series_value: sv,
            eis_value: ev.re,
            eis_imag: ev.im,
            abs_err: (ev - sv).norm(),
        });
    }
    let max_err = rows.iter().map(|r| r.abs_err).fold(0.0, f64::max);
    Ok(EisReport { rows, max_err, pass: max_err < tol })
}
