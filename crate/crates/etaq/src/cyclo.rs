//! Roots of unity and exact elements of cyclotomic fields.
//!
//! A [`Cyclotomic`] is a finite sum `sum q_j e(j/M)` stored sparsely in the
//! group algebra Q[Z/M]. Zero testing maps it to the canonical basis of
//! Q(zeta_M) obtained by tensoring the power bases of the prime-power
//! subfields, which is the same as reducing modulo the M-th cyclotomic
//! polynomial but costs O(terms * sum p) instead of a polynomial division.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, Result};
use crate::ntheory::{divisors, factorize};

/// e(x) = exp(2 pi i x) with x stored in lowest terms in [0, 1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnityRoot {
    exponent: Ratio<i64>,
}

impl UnityRoot {
    pub fn new(x: Ratio<i64>) -> Self {
        let fl = x.floor();
        UnityRoot { exponent: x - fl }
    }

    /// e(num/den).
    pub fn frac(num: i64, den: i64) -> Self {
        Self::new(Ratio::new(num, den))
    }

    pub fn from_big(x: &BigRational) -> Self {
        let den = x.denom().clone();
        let num = x.numer().mod_floor(&den);
        Self::frac(
            num.to_i64().expect("root of unity order exceeds i64"),
            den.to_i64().expect("root of unity order exceeds i64"),
        )
    }

    pub fn one() -> Self {
        Self::frac(0, 1)
    }

    pub fn exponent(&self) -> Ratio<i64> {
        self.exponent
    }

    /// Multiplicative order, i.e. the reduced denominator.
    pub fn order(&self) -> i64 {
        *self.exponent.denom()
    }

    pub fn is_one(&self) -> bool {
        self.exponent.is_zero()
    }

    pub fn inv(&self) -> Self {
        Self::new(-self.exponent)
    }

    pub fn pow(&self, e: i64) -> Self {
        let d = *self.exponent.denom();
        let n = (*self.exponent.numer() as i128 * e as i128).rem_euclid(d as i128) as i64;
        Self::frac(n, d)
    }

    pub fn to_complex(&self) -> Complex64 {
        let x = *self.exponent.numer() as f64 / *self.exponent.denom() as f64;
        Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * x)
    }

    pub fn to_cyclotomic(&self) -> Cyclotomic {
        Cyclotomic::root(*self.exponent.numer(), *self.exponent.denom() as u64)
    }
}

impl Mul for UnityRoot {
    type Output = UnityRoot;
    // e(a) e(b) = e(a + b)
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, o: UnityRoot) -> UnityRoot {
        UnityRoot::new(self.exponent + o.exponent)
    }
}

impl fmt::Display for UnityRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e({})", self.exponent)
    }
}

/// Phi_M as integer coefficients, constant term first.
pub fn cyclotomic_polynomial(m: u64) -> Vec<BigInt> {
    assert!(m >= 1);
    // X^m - 1
    let mut num = vec![BigInt::zero(); m as usize + 1];
    num[0] = BigInt::from(-1);
    num[m as usize] = BigInt::one();
    for d in divisors(m) {
        if d == m {
            continue;
        }
        let phi_d = cyclotomic_polynomial(d);
        num = poly_div_exact(&num, &phi_d);
    }
    num
}

/// Exact quotient of integer polynomials by a monic divisor.
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    debug_assert!(den[dn].is_one());
    let qn = rem.len() - 1 - dn;
    let mut q = vec![BigInt::zero(); qn + 1];
    for i in (0..=qn).rev() {
        let c = rem[i + dn].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        q[i] = c;
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    q
}

/// Remainder of a rational polynomial modulo Phi_M. The slow reference path
/// for zero testing.
pub fn reduce_mod_cyclotomic_polynomial(poly: &[BigRational], m: u64) -> Vec<BigRational> {
    let phi: Vec<BigRational> = cyclotomic_polynomial(m)
        .into_iter()
        .map(BigRational::from)
        .collect();
    let dn = phi.len() - 1;
    let mut rem = poly.to_vec();
    while rem.len() > dn {
        let top = rem.len() - 1;
        let c = rem[top].clone();
        if !c.is_zero() {
            for (j, pj) in phi.iter().enumerate() {
                rem[top - dn + j] -= &c * pj;
            }
        }
        rem.pop();
    }
    rem
}

/// An element `sum_j q_j e(j/M)` of Q(zeta_M).
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    modulus: u64,
    coeffs: BTreeMap<u64, BigRational>,
}

impl Cyclotomic {
    pub fn zero(modulus: u64) -> Self {
        assert!(modulus >= 1);
        Cyclotomic {
            modulus,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn from_rational(q: BigRational) -> Self {
        let mut c = Self::zero(1);
        c.add_term(0, q);
        c
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from(BigInt::from(n)))
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// e(j/M).
    pub fn root(j: i64, modulus: u64) -> Self {
        let mut c = Self::zero(modulus);
        c.add_term(j.rem_euclid(modulus as i64) as u64, BigRational::one());
        c
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Raw (possibly non-canonical) terms.
    pub fn terms(&self) -> impl Iterator<Item = (u64, &BigRational)> {
        self.coeffs.iter().map(|(&j, q)| (j, q))
    }

    /// Adds q * e(j/M) in place; j is taken mod M.
    pub fn add_term(&mut self, j: u64, q: BigRational) {
        if q.is_zero() {
            return;
        }
        let j = j % self.modulus;
        let e = self.coeffs.entry(j).or_insert_with(BigRational::zero);
        *e += q;
        if e.is_zero() {
            self.coeffs.remove(&j);
        }
    }

    /// Adds q * root in place, lifting the modulus if needed.
    pub fn add_root_term(&mut self, root: UnityRoot, q: BigRational) {
        let den = root.order() as u64;
        if !self.modulus.is_multiple_of(den) {
            *self = self.lift(self.modulus.lcm(&den));
        }
        let j = *root.exponent().numer() as u64 * (self.modulus / den);
        self.add_term(j, q);
    }

    /// Same value over a modulus that is a multiple of the current one.
    pub fn lift(&self, modulus: u64) -> Self {
        assert!(modulus.is_multiple_of(self.modulus), "cannot lift modulus {} to {}", self.modulus, modulus);
        let f = modulus / self.modulus;
        Cyclotomic {
            modulus,
            coeffs: self.coeffs.iter().map(|(&j, q)| (j * f, q.clone())).collect(),
        }
    }

    fn common(a: &Self, b: &Self) -> (Self, Self) {
        let m = a.modulus.lcm(&b.modulus);
        (a.lift(m), b.lift(m))
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero(self.modulus);
        }
        Cyclotomic {
            modulus: self.modulus,
            coeffs: self.coeffs.iter().map(|(&j, c)| (j, c * q)).collect(),
        }
    }

    pub fn mul_root(&self, r: UnityRoot) -> Self {
        let den = r.order() as u64;
        let m = self.modulus.lcm(&den);
        let shift = *r.exponent().numer() as u64 * (m / den);
        let f = m / self.modulus;
        Cyclotomic {
            modulus: m,
            coeffs: self.coeffs.iter().map(|(&j, c)| ((j * f + shift) % m, c.clone())).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = (&base * &base).reduce();
            e >>= 1;
        }
        acc
    }

    /// Complex conjugate.
    pub fn conj(&self) -> Self {
        let m = self.modulus;
        Cyclotomic {
            modulus: m,
            coeffs: self.coeffs.iter().map(|(&j, c)| ((m - j) % m, c.clone())).collect(),
        }
    }

    /// Canonical representative: the coefficient vector in the basis
    /// tensored from {zeta_{p^e}^t : 0 <= t < (p-1) p^(e-1)}.
    pub fn reduce(&self) -> Self {
        let m = self.modulus;
        let mut coeffs = self.coeffs.clone();
        for (p, e) in factorize(m) {
            let pe = p.pow(e);
            let s = pe / p;
            // CRT idempotent for the p-component
            let rest = m / pe;
            let inv = mod_inverse(rest % pe, pe);
            let u = (rest * inv) % m;
            let step = (s * u) % m;
            let bad: Vec<u64> = coeffs
                .keys()
                .copied()
                .filter(|&j| j % pe >= (p - 1) * s)
                .collect();
            for j in bad {
                let c = match coeffs.remove(&j) {
                    Some(c) => c,
                    None => continue,
                };
                let mut k = j;
                for _ in 1..p {
                    k = (k + m - step) % m;
                    let ent = coeffs.entry(k).or_insert_with(BigRational::zero);
                    *ent -= &c;
                    if ent.is_zero() {
                        coeffs.remove(&k);
                    }
                }
            }
        }
        Cyclotomic { modulus: m, coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty() || self.reduce().coeffs.is_empty()
    }

    /// Some(q) when the value is the rational number q.
    pub fn to_rational(&self) -> Option<BigRational> {
        let r = self.reduce();
        match r.coeffs.len() {
            0 => Some(BigRational::zero()),
            1 => r.coeffs.get(&0).cloned(),
            _ => None,
        }
    }

    /// Double-precision shadow, for sanity checks only.
    pub fn to_complex(&self) -> Complex64 {
        let mut z = Complex64::new(0.0, 0.0);
        for (&j, q) in &self.coeffs {
            let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / self.modulus as f64);
            z += w * q.to_f64().unwrap_or(f64::NAN);
        }
        z
    }

    /// The positive square root of an odd a, as eps_a^-1 times the quadratic
    /// Gauss sum over Z/a.
    pub fn sqrt_embed(a: u64) -> Result<Self> {
        if a == 0 || a.is_multiple_of(2) {
            return invalid(format!("sqrt_embed needs an odd positive integer, got {a}"));
        }
        let mut g = Self::zero(a);
        for x in 0..a {
            g.add_term((x * x) % a, BigRational::one());
        }
        Ok(if a % 4 == 1 { g } else { g.mul_root(UnityRoot::frac(3, 4)) }.reduce())
    }

    /// The positive square root of any n >= 1, with sqrt 2 = e(1/8) + e(7/8).
    pub fn sqrt_int(n: u64) -> Result<Self> {
        if n == 0 {
            return Ok(Self::zero(1));
        }
        let v = n.trailing_zeros();
        let odd = n >> v;
        let mut out = Self::sqrt_embed(odd)?.scale(&BigRational::from(BigInt::from(1u64 << (v / 2))));
        if v % 2 == 1 {
            let mut s2 = Self::root(1, 8);
            s2.add_term(7, BigRational::one());
            out = &out * &s2;
        }
        Ok(out.reduce())
    }
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let e = (a as i128).extended_gcd(&(m as i128));
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(m as i128) as u64
}

impl PartialEq for Cyclotomic {
    fn eq(&self, o: &Self) -> bool {
        (self - o).is_zero()
    }
}

impl<'a> Add<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, o: &Cyclotomic) -> Cyclotomic {
        let (mut a, b) = Cyclotomic::common(self, o);
        for (j, q) in b.coeffs {
            a.add_term(j, q);
        }
        a
    }
}

impl<'a> Sub<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, o: &Cyclotomic) -> Cyclotomic {
        let (mut a, b) = Cyclotomic::common(self, o);
        for (j, q) in b.coeffs {
            a.add_term(j, -q);
        }
        a
    }
}

impl<'a> Mul<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, o: &Cyclotomic) -> Cyclotomic {
        let (a, b) = Cyclotomic::common(self, o);
        let m = a.modulus;
        let mut out = Cyclotomic::zero(m);
        for (&i, p) in &a.coeffs {
            for (&j, q) in &b.coeffs {
                out.add_term((i + j) % m, p * q);
            }
        }
        out
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        self.scale(&-BigRational::one())
    }
}

impl fmt::Display for Cyclotomic {
    /// Canonical form, e.g. `1/2 + -3*e(1/8)`; zero prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.reduce();
        if r.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&j, q) in &r.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if j == 0 {
                write!(f, "{q}")?;
            } else {
                let x = Ratio::new(j, r.modulus);
                if q.is_one() {
                    write!(f, "e({x})")?;
                } else if q.is_negative() && (-q).is_one() {
                    write!(f, "-e({x})")?;
                } else {
                    write!(f, "{q}*e({x})")?;
                }
            }
        }
        Ok(())
    }
}
