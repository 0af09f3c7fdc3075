//! Truncated q-series with an exact rational exponent offset, and the
//! expansions of eta-quotients built from them.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{CheckedAdd, CheckedSub, One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{invalid, Error, Result};
use crate::etaquot::EtaQuotient;

fn rat(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

/// sum_{j=0}^{T} c_j q^{offset + j}; everything above q^{offset + T} is unknown.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    offset: BigRational,
    coeffs: Vec<BigRational>,
}

impl QSeries {
    /// `coeffs` must be nonempty; its length fixes the precision.
    pub fn new(offset: BigRational, coeffs: Vec<BigRational>) -> Result<Self> {
        if coeffs.is_empty() {
            return invalid("a q-series needs at least one retained term");
        }
        Ok(Self { offset, coeffs })
    }

    pub fn from_ints(offset: BigRational, coeffs: &[i64]) -> Result<Self> {
        Self::new(offset, coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn offset(&self) -> &BigRational {
        &self.offset
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Index T of the last retained term.
    pub fn precision(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Largest exponent whose coefficient is known.
    pub fn window_end(&self) -> BigRational {
        &self.offset + rat(self.precision() as i64)
    }

    /// Coefficient of q^n. Exponents off the lattice offset + Z, or below
    /// the offset, read as 0; exponents past the window are an error.
    pub fn coefficient(&self, n: &BigRational) -> Result<BigRational> {
        if n > &self.window_end() {
            return Err(Error::OutOfPrecision(format!(
                "q^{n} lies beyond the known window ending at q^{}",
                self.window_end()
            )));
        }
        let j = n - &self.offset;
        if !j.is_integer() || j.is_negative() {
            return Ok(BigRational::zero());
        }
        Ok(self.coeffs[j.to_integer().to_usize().unwrap()].clone())
    }

    pub fn truncate(&self, t: usize) -> Self {
        let keep = (t + 1).min(self.coeffs.len());
        Self { offset: self.offset.clone(), coeffs: self.coeffs[..keep].to_vec() }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        Self { offset: self.offset.clone(), coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    pub fn add(&self, o: &QSeries) -> Result<QSeries> {
        let shift = &o.offset - &self.offset;
        if !shift.is_integer() {
            return invalid(format!(
                "cannot add series on different cosets ({} and {})",
                self.offset, o.offset
            ));
        }
        let (lo, hi) = if shift.is_negative() { (o, self) } else { (self, o) };
        let gap = (&hi.offset - &lo.offset).to_integer().to_usize().unwrap();
        let end = lo.precision().min(gap + hi.precision());
        let coeffs = (0..=end)
            .map(|j| {
                let mut c = lo.coeffs[j].clone();
                if j >= gap {
                    c += &hi.coeffs[j - gap];
                }
                c
            })
            .collect();
        Ok(QSeries { offset: lo.offset.clone(), coeffs })
    }

    pub fn mul(&self, o: &QSeries) -> QSeries {
        let t = self.precision().min(o.precision());
        let offset = &self.offset + &o.offset;
        let integral = |s: &QSeries| s.coeffs[..=t].iter().all(|c| c.is_integer());
        let coeffs = if integral(self) && integral(o) {
            let a: Vec<BigInt> = self.coeffs[..=t].iter().map(|c| c.to_integer()).collect();
            let b: Vec<BigInt> = o.coeffs[..=t].iter().map(|c| c.to_integer()).collect();
            let mut out = vec![BigInt::zero(); t + 1];
            for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                for (j, y) in b[..=t - i].iter().enumerate() {
                    if !y.is_zero() {
                        out[i + j] += x * y;
                    }
                }
            }
            out.into_iter().map(BigRational::from).collect()
        } else {
            let mut out = vec![BigRational::zero(); t + 1];
            for (i, x) in self.coeffs[..=t].iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                for (j, y) in o.coeffs[..=t - i].iter().enumerate() {
                    if !y.is_zero() {
                        out[i + j] += x * y;
                    }
                }
            }
            out
        };
        QSeries { offset, coeffs }
    }

    fn require_unit(&self) -> Result<()> {
        if !self.coeffs[0].is_one() {
            return invalid(format!("leading coefficient {} is not 1", self.coeffs[0]));
        }
        Ok(())
    }

    /// Formal log of the offset-free part 1 + h; the offset is dropped.
    pub fn log(&self) -> Result<Vec<BigRational>> {
        self.require_unit()?;
        let s = &self.coeffs;
        let t = self.precision();
        // s L' = s'  =>  j L_j = j s_j - sum_{i<j} i L_i s_{j-i}
        let mut l = vec![BigRational::zero(); t + 1];
        for j in 1..=t {
            let mut acc = rat(j as i64) * &s[j];
            for i in 1..j {
                if !l[i].is_zero() && !s[j - i].is_zero() {
                    acc -= rat(i as i64) * &l[i] * &s[j - i];
                }
            }
            l[j] = acc / rat(j as i64);
        }
        Ok(l)
    }

    /// exp of a series without constant term.
    pub fn exp(l: &[BigRational]) -> Result<Vec<BigRational>> {
        if l.first().is_some_and(|c| !c.is_zero()) {
            return invalid("exp needs a series without constant term");
        }
        let t = l.len().saturating_sub(1);
        // E' = L' E  =>  j E_j = sum_{i=1}^{j} i L_i E_{j-i}
        let mut e = vec![BigRational::zero(); t + 1];
        e[0] = BigRational::one();
        for j in 1..=t {
            let mut acc = BigRational::zero();
            for i in 1..=j {
                if !l[i].is_zero() && !e[j - i].is_zero() {
                    acc += rat(i as i64) * &l[i] * &e[j - i];
                }
            }
            e[j] = acc / rat(j as i64);
        }
        Ok(e)
    }

    /// s^r = q^{r offset} exp(r log(1 + h)).
    pub fn pow_rational(&self, r: &BigRational) -> Result<QSeries> {
        let l: Vec<BigRational> = self.log()?.iter().map(|c| c * r).collect();
        Ok(QSeries { offset: &self.offset * r, coeffs: Self::exp(&l)? })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "offset": self.offset.to_string(),
            "coeffs": self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "precision": self.precision(),
        })
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let e = &self.offset + rat(j as i64);
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            write!(f, "{}*q^({e})", c.abs())?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^({}))", self.window_end() + BigRational::one())
    }
}

/// Generalized pentagonal numbers k(3k-1)/2 up to `t`, with signs (-1)^k,
/// in increasing order (0 first).
pub fn pentagonal_terms(t: usize) -> Vec<(usize, i8)> {
    let mut out = vec![(0, 1)];
    for k in 1i64.. {
        let g1 = (k * (3 * k - 1) / 2) as usize;
        if g1 > t {
            break;
        }
        let s = if k % 2 == 0 { 1 } else { -1 };
        out.push((g1, s));
        let g2 = (k * (3 * k + 1) / 2) as usize;
        if g2 <= t {
            out.push((g2, s));
        }
    }
    out
}

/// eta(n tau) to index T: offset n/24, coefficients of prod (1 - q^{nm}).
pub fn eta_expansion(n: u64, t: usize) -> QSeries {
    let mut coeffs = vec![BigRational::zero(); t + 1];
    for (g, s) in pentagonal_terms(t / n as usize) {
        coeffs[g * n as usize] = rat(s as i64);
    }
    QSeries { offset: BigRational::new(BigInt::from(n), BigInt::from(24)), coeffs }
}

trait Ring: Clone + Zero + One + CheckedAdd + CheckedSub {}
impl Ring for i128 {}
impl Ring for BigInt {}

fn signed_add<T: Ring>(acc: &T, x: &T, s: i8) -> Option<T> {
    if s > 0 {
        acc.checked_add(x)
    } else {
        acc.checked_sub(x)
    }
}

/// prod_n prod_m (1 - q^{nm})^{r_n} by repeated sparse multiplication and
/// division by pentagonal series. None on overflow of T.
fn eta_product_in<T: Ring>(r: &[(u64, i64)], t: usize) -> Option<Vec<T>> {
    let mut c = vec![T::zero(); t + 1];
    c[0] = T::one();
    for &(n, e) in r {
        let n = n as usize;
        let pent = pentagonal_terms(t / n);
        for _ in 0..e.unsigned_abs() {
            if e > 0 {
                for j in (0..=t).rev() {
                    let mut acc = T::zero();
                    for &(g, s) in pent.iter().take_while(|(g, _)| g * n <= j) {
                        acc = signed_add(&acc, &c[j - g * n], s)?;
                    }
                    c[j] = acc;
                }
            } else {
                for j in 1..=t {
                    let mut acc = c[j].clone();
                    for &(g, s) in pent.iter().skip(1).take_while(|(g, _)| g * n <= j) {
                        acc = signed_add(&acc, &c[j - g * n], -s)?;
                    }
                    c[j] = acc;
                }
            }
        }
    }
    Some(c)
}

/// Offset-free coefficients of an integral eta-quotient, indices 0..=T.
pub fn eta_product_int(r: &[(u64, i64)], t: usize) -> Vec<BigInt> {
    match eta_product_in::<i128>(r, t) {
        Some(v) => v.into_iter().map(BigInt::from).collect(),
        None => eta_product_in::<BigInt>(r, t).expect("bigint arithmetic does not overflow"),
    }
}

/// q-expansion of f to index T, offset x_N/24. Fractional exponents use
/// the branch whose offset-free part has constant term 1.
pub fn expand(f: &EtaQuotient, t: usize) -> QSeries {
    let offset = f.x_n() / rat(24);
    let mut int_part = Vec::new();
    let mut frac_part = Vec::new();
    for (&n, r) in f.exponents() {
        let whole = r.floor();
        let w = whole.to_integer().to_i64().expect("exponent too large");
        if w != 0 {
            int_part.push((n, w));
        }
        if !r.is_integer() {
            frac_part.push((n, r - whole));
        }
    }
    let base = eta_product_int(&int_part, t);
    let mut s = QSeries { offset: BigRational::zero(), coeffs: base.into_iter().map(BigRational::from).collect() };
    for (n, fr) in frac_part {
        let mut e = eta_expansion(n, t);
        e.offset = BigRational::zero();
        let p = e.pow_rational(&fr).expect("eta expansions have leading coefficient 1");
        s = s.mul(&p);
    }
    s.offset = offset;
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn ints(s: &QSeries) -> Vec<i64> {
        s.coeffs().iter().map(|c| c.to_integer().to_i64().unwrap()).collect()
    }

    #[test]
    fn eta_examples() {
        let e = eta_expansion(1, 13);
        assert_eq!(e.offset(), &q(1, 24));
        assert_eq!(ints(&e), vec![1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0, 0, -1, 0]);
        let e2 = eta_expansion(2, 6);
        assert_eq!(e2.offset(), &q(2, 24));
        assert_eq!(ints(&e2), vec![1, 0, -1, 0, -1, 0, 0]);
        assert_eq!(ints(&eta_expansion(1, 0)), vec![1]);
    }

    #[test]
    fn pentagonal_matches_direct_product() {
        let t = 60;
        let mut direct = vec![0i64; t + 1];
        direct[0] = 1;
        for m in 1..=t {
            for j in (m..=t).rev() {
                direct[j] -= direct[j - m];
            }
        }
        assert_eq!(ints(&eta_expansion(1, t)), direct);
    }

    #[test]
    fn level14_displays() {
        let f = EtaQuotient::parse("1^-1 2^2 7^-1 14^2").unwrap();
        let s = expand(&f, 14);
        assert_eq!(s.offset(), &q(1, 1));
        assert_eq!(&ints(&s)[..14], &[1, 1, 0, 1, 0, 0, 1, 1, 1, 0, 2, 0, 0, 1]);
        let g = EtaQuotient::parse("1^2 2^-1 7^2 14^-1").unwrap();
        let s = expand(&g, 11);
        assert_eq!(s.offset(), &q(0, 1));
        assert_eq!(ints(&s), vec![1, -2, 0, 0, 2, 0, 0, -2, 4, -2, 0, -4]);
    }

    #[test]
    fn level6_coefficients() {
        let f = EtaQuotient::parse("1^1 2^1 3^1 6^3").unwrap();
        let s = expand(&f, 8);
        assert_eq!(s.coefficient(&q(2, 1)).unwrap(), q(-1, 1));
        assert_eq!(s.coefficient(&q(3, 1)).unwrap(), q(-2, 1));
        assert_eq!(s.coefficient(&q(6, 1)).unwrap(), q(4, 1));
    }

    #[test]
    fn coefficient_window() {
        let e = expand(&EtaQuotient::parse("1^1").unwrap(), 4);
        assert_eq!(e.coefficient(&q(1, 24)).unwrap(), q(1, 1));
        assert_eq!(e.coefficient(&(q(1, 24) + q(1, 2))).unwrap(), q(0, 1));
        assert!(matches!(e.coefficient(&q(5, 1)), Err(Error::OutOfPrecision(_))));
        let f = expand(&EtaQuotient::parse("1^-7 2^17 4^-3").unwrap(), 3);
        assert_eq!(f.offset(), &q(5, 8));
        assert_eq!(f.coefficient(&q(5, 8)).unwrap(), q(1, 1));
    }

    #[test]
    fn pow_examples() {
        let s = QSeries::from_ints(q(0, 1), &[1, 1, 0, 0]).unwrap();
        assert_eq!(ints(&s.pow_rational(&q(2, 1)).unwrap()), vec![1, 2, 1, 0]);
        let bad = QSeries::from_ints(q(0, 1), &[2, 1]).unwrap();
        assert!(bad.pow_rational(&q(1, 2)).is_err());

        let cube = expand(&EtaQuotient::parse("4^3").unwrap(), 30);
        let root = cube.pow_rational(&q(-1, 2)).unwrap();
        assert_eq!(root, expand(&EtaQuotient::parse("4^-3/2").unwrap(), 30));

        let r = q(3, 7);
        let s = expand(&EtaQuotient::parse("1^2 3^-1").unwrap(), 20);
        let back = s.pow_rational(&r).unwrap().pow_rational(&(q(1, 1) / r)).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn fractional_matches_log_derivative() {
        // j c_j = -sum_i B(i) c_{j-i}, B(i) = sum_{n | i} r_n n sigma(i/n)
        let f = EtaQuotient::parse("1^6 4^-3/2").unwrap();
        let t = 25;
        let sigma = |m: u64| crate::ntheory::divisors(m).iter().sum::<u64>() as i64;
        let mut c = vec![q(1, 1)];
        for j in 1..=t {
            let mut acc = q(0, 1);
            for i in 1..=j {
                let mut b = q(0, 1);
                for (&n, r) in f.exponents() {
                    if (i as u64).is_multiple_of(n) {
                        b += r * rat(n as i64 * sigma(i as u64 / n));
                    }
                }
                acc -= b * &c[j - i];
            }
            c.push(acc / rat(j as i64));
        }
        assert_eq!(expand(&f, t).coeffs(), &c[..]);
    }

    #[test]
    fn add_and_mul() {
        let a = QSeries::from_ints(q(1, 2), &[1, 2, 3]).unwrap();
        let b = QSeries::from_ints(q(3, 2), &[1, 1, 1, 1]).unwrap();
        let s = a.add(&b).unwrap();
        assert_eq!(ints(&s), vec![1, 3, 4]);
        let c = QSeries::from_ints(q(1, 3), &[1]).unwrap();
        assert!(a.add(&c).is_err());
        let p = a.mul(&b);
        assert_eq!(p.offset(), &q(2, 1));
        assert_eq!(ints(&p), vec![1, 3, 6]);
    }

    #[test]
    fn bigint_fallback() {
        let t = 400;
        let big = eta_product_int(&[(1, -24)], t);
        let small = eta_product_in::<BigInt>(&[(1, -24)], t).unwrap();
        assert_eq!(big, small);
        assert!(eta_product_in::<i128>(&[(1, -24)], t).is_none());
    }

    #[test]
    fn json_shape() {
        let v = eta_expansion(1, 2).to_json();
        assert_eq!(v["offset"], "1/24");
        assert_eq!(v["coeffs"], json!(["1", "-1", "-1"]));
        assert_eq!(v["precision"], 2);
    }
}
