//! Elementary number theory: divisors, totients, Kronecker symbols,
//! Dedekind sums, the Psi function on SL2(Z) and the rad family.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, Error, Result};

pub fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

pub fn lcm(a: i64, b: i64) -> i64 {
    a.lcm(&b)
}

/// Trial-division factorization, primes ascending. `factorize(1)` is empty.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n > 0, "factorize(0)");
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

/// Positive divisors in ascending order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, e) in factorize(n) {
        let len = ds.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                ds.push(ds[i] * pk);
            }
        }
    }
    ds.sort_unstable();
    ds
}

pub fn phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

pub fn sigma0(n: u64) -> u64 {
    factorize(n).into_iter().map(|(_, e)| e as u64 + 1).product()
}

pub fn valuation(p: u64, mut n: u64) -> u32 {
    assert!(p > 1 && n > 0);
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

pub fn is_square(n: u64) -> bool {
    let r = isqrt(n);
    r * r == n
}

pub fn is_square_big(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

/// Squarefree test on u64.
pub fn is_squarefree(n: u64) -> bool {
    factorize(n).iter().all(|&(_, e)| e == 1)
}

/// `(g, x, y)` with `a x + b y = g = gcd(a, b) >= 0`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let e = (a as i128).extended_gcd(&(b as i128));
    if e.gcd < 0 {
        (-e.gcd as i64, -e.x as i64, -e.y as i64)
    } else {
        (e.gcd as i64, e.x as i64, e.y as i64)
    }
}

fn jacobi_i128(mut a: i128, mut n: i128) -> i32 {
    debug_assert!(n > 0 && n % 2 == 1);
    a = a.rem_euclid(n);
    let mut t = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Kronecker-Jacobi symbol (m/n) on all of Z x Z, with (m/0) = 1 iff m = +-1
/// and (m/-1) = sign(m) (taking sign(0) = +1).
pub fn kronecker_i64(m: i64, n: i64) -> i32 {
    let (m, mut n) = (m as i128, n as i128);
    if n == 0 {
        return if m == 1 || m == -1 { 1 } else { 0 };
    }
    let mut res = 1;
    if n < 0 {
        n = -n;
        if m < 0 {
            res = -1;
        }
    }
    let tz = n.trailing_zeros();
    if tz > 0 {
        if m % 2 == 0 {
            return 0;
        }
        n >>= tz;
        let r = m.rem_euclid(8);
        if tz % 2 == 1 && (r == 3 || r == 5) {
            res = -res;
        }
    }
    res * jacobi_i128(m, n)
}

fn jacobi_big(a: &BigInt, n: &BigInt) -> i32 {
    let eight = BigInt::from(8);
    let four = BigInt::from(4);
    let mut a = a.mod_floor(n);
    let mut n = n.clone();
    let mut t = 1;
    while !a.is_zero() {
        let tz = a.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            a >>= tz;
            let r = n.mod_floor(&eight);
            if tz % 2 == 1 && (r == BigInt::from(3) || r == BigInt::from(5)) {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a.mod_floor(&four) == BigInt::from(3) && n.mod_floor(&four) == BigInt::from(3) {
            t = -t;
        }
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        t
    } else {
        0
    }
}

/// Arbitrary-precision Kronecker-Jacobi symbol, same conventions as [`kronecker_i64`].
pub fn kronecker(m: &BigInt, n: &BigInt) -> i32 {
    if let (Some(a), Some(b)) = (m.to_i64(), n.to_i64()) {
        return kronecker_i64(a, b);
    }
    if n.is_zero() {
        return if m.abs().is_one() { 1 } else { 0 };
    }
    let mut res = 1;
    let mut n = n.clone();
    if n.is_negative() {
        n = -n;
        if m.is_negative() {
            res = -1;
        }
    }
    let tz = n.trailing_zeros().unwrap_or(0);
    if tz > 0 {
        if m.is_even() {
            return 0;
        }
        n >>= tz;
        let r = m.mod_floor(&BigInt::from(8));
        if tz % 2 == 1 && (r == BigInt::from(3) || r == BigInt::from(5)) {
            res = -res;
        }
    }
    res * jacobi_big(m, &n)
}

/// The sawtooth ((x)): x - floor(x) - 1/2 off the integers, 0 on them.
pub fn sawtooth(x: &BigRational) -> BigRational {
    if x.is_integer() {
        BigRational::zero()
    } else {
        x - x.floor() - BigRational::new(BigInt::one(), BigInt::from(2))
    }
}

/// s(h,k) by literal summation over r mod k. Used as the oracle for [`dedekind_sum`].
pub fn dedekind_sum_direct(h: &BigInt, k: &BigInt) -> Result<BigRational> {
    if !k.is_positive() {
        return invalid(format!("dedekind sum modulus must be positive, got {k}"));
    }
    let mut acc = BigRational::zero();
    let mut r = BigInt::zero();
    while &r < k {
        let x = BigRational::new(r.clone(), k.clone());
        let y = BigRational::new(h * &r, k.clone());
        acc += sawtooth(&x) * sawtooth(&y);
        r += 1;
    }
    Ok(acc)
}

/// s(h,k) via the Euclidean algorithm on (k, h).
///
/// Iterating reciprocity and telescoping gives, for 0 < h < k coprime with
/// remainders r_0 = k, r_1 = h, ..., r_n = 1 and partial quotients a_j,
/// 12 k s(h,k) = k sum (-1)^(j+1) a_j + h + u_0 - 3k [n odd], where
/// u_0 / k = sum_j (-1)^j / (r_j r_(j+1)) is accumulated from the tail so
/// every intermediate value stays an integer of size about k.
pub fn dedekind_sum(h: &BigInt, k: &BigInt) -> Result<BigRational> {
    if !k.is_positive() {
        return invalid(format!("dedekind sum modulus must be positive, got {k}"));
    }
    if let (Some(hs), Some(ks)) = (h.to_i64(), k.to_i64()) {
        let r = dedekind_sum_small(hs, ks);
        return Ok(BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom())));
    }
    let g = h.gcd(k);
    let (h, k) = (h / &g, k / &g);
    let (h, sign) = if h.is_negative() { (-h, -1) } else { (h, 1) };
    let h = h.mod_floor(&k);
    if h.is_zero() {
        return Ok(BigRational::zero());
    }
    let mut r = vec![k.clone(), h.clone()];
    let mut alt = BigInt::zero();
    while !r[r.len() - 1].is_zero() {
        let (x, y) = (&r[r.len() - 2], &r[r.len() - 1]);
        let (q, rem) = x.div_rem(y);
        if r.len() % 2 == 0 {
            alt += q;
        } else {
            alt -= q;
        }
        r.push(rem);
    }
    let n = r.len() - 2;
    let mut u = BigInt::zero();
    for m in (0..n).rev() {
        let s = if m % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        u = (s + &u * &r[m]) / &r[m + 1];
    }
    let mut num = &k * &alt + &h + u;
    if n % 2 == 1 {
        num -= BigInt::from(3) * &k;
    }
    Ok(BigRational::new(num * sign, BigInt::from(12) * k))
}

/// Machine-width [`dedekind_sum`] for hot loops.
pub fn dedekind_sum_small(h: i64, k: i64) -> Ratio<i128> {
    assert!(k > 0, "dedekind sum modulus must be positive");
    let g = h.gcd(&k);
    let (h, k) = ((h / g) as i128, (k / g) as i128);
    let (h, sign) = if h < 0 { (-h, -1) } else { (h, 1) };
    let h = h.rem_euclid(k);
    if h == 0 {
        return Ratio::zero();
    }
    let mut r = [0i128; 96];
    r[0] = k;
    r[1] = h;
    let mut len = 2;
    let mut alt = 0i128;
    while r[len - 1] != 0 {
        let (x, y) = (r[len - 2], r[len - 1]);
        if len % 2 == 0 {
            alt += x / y;
        } else {
            alt -= x / y;
        }
        r[len] = x % y;
        len += 1;
    }
    let n = len - 2;
    let mut u = 0i128;
    for m in (0..n).rev() {
        let s = if m % 2 == 0 { 1 } else { -1 };
        u = (s + u * r[m]) / r[m + 1];
    }
    let mut num = k * alt + h + u;
    if n % 2 == 1 {
        num -= 3 * k;
    }
    Ratio::new(num * sign, 12 * k)
}

/// An element of SL2(Z), (a b; c d) with ad - bc = 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SL2Matrix {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl SL2Matrix {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Result<Self> {
        if &a * &d - &b * &c != BigInt::one() {
            return invalid(format!("determinant of ({a} {b}; {c} {d}) is not 1"));
        }
        Ok(SL2Matrix { a, b, c, d })
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> Self {
        Self::from_i64(1, 0, 0, 1).unwrap()
    }

    pub fn neg_identity() -> Self {
        Self::from_i64(-1, 0, 0, -1).unwrap()
    }

    /// T = (1 1; 0 1).
    pub fn t() -> Self {
        Self::from_i64(1, 1, 0, 1).unwrap()
    }

    /// S = (0 -1; 1 0).
    pub fn s() -> Self {
        Self::from_i64(0, -1, 1, 0).unwrap()
    }

    pub fn mul(&self, o: &SL2Matrix) -> SL2Matrix {
        SL2Matrix {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    pub fn inverse(&self) -> SL2Matrix {
        SL2Matrix {
            a: self.d.clone(),
            b: -&self.b,
            c: -&self.c,
            d: self.a.clone(),
        }
    }

    pub fn neg(&self) -> SL2Matrix {
        SL2Matrix {
            a: -&self.a,
            b: -&self.b,
            c: -&self.c,
            d: -&self.d,
        }
    }
}

impl fmt::Display for SL2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {}; {} {})", self.a, self.b, self.c, self.d)
    }
}

/// Psi(a,b;c,d), the integer with chi_eta(gamma, 1) = e(Psi(gamma)/24).
pub fn psi(g: &SL2Matrix) -> Result<BigInt> {
    let val = if g.c.is_positive() {
        BigRational::new(&g.a + &g.d, g.c.clone()) + dedekind_sum(&-&g.d, &g.c)? * BigInt::from(12)
            - BigInt::from(3)
    } else if g.c.is_negative() {
        BigRational::new(&g.a + &g.d, g.c.clone()) + dedekind_sum(&g.d, &-&g.c)? * BigInt::from(12)
            + BigInt::from(3)
    } else if g.a.is_positive() {
        BigRational::from(g.b.clone())
    } else {
        BigRational::from(-&g.b - 6)
    };
    if !val.is_integer() {
        return Err(Error::Internal(format!("Psi{g} = {val} is not an integer")));
    }
    Ok(val.to_integer())
}

/// Machine-width Psi for entries well inside i64.
pub fn psi_small(a: i64, b: i64, c: i64, d: i64) -> i64 {
    debug_assert_eq!(a as i128 * d as i128 - b as i128 * c as i128, 1);
    let val = if c > 0 {
        Ratio::new((a + d) as i128, c as i128) + dedekind_sum_small(-d, c) * 12 - 3
    } else if c < 0 {
        Ratio::new((a + d) as i128, c as i128) + dedekind_sum_small(d, -c) * 12 + 3
    } else if a > 0 {
        Ratio::from(b as i128)
    } else {
        Ratio::from(-(b as i128) - 6)
    };
    assert!(val.is_integer(), "Psi({a},{b};{c},{d}) = {val} is not an integer");
    val.to_integer() as i64
}

/// The six multiplicative pieces of an odd m, split by parity of v_p(m).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RadDecomposition {
    pub rad_e: u64,
    pub rad_o: u64,
    pub rad: u64,
    pub rad_prime: u64,
    pub irad: u64,
    pub irad_prime: u64,
}

pub fn rad_decomposition(m: u64) -> Result<RadDecomposition> {
    if m == 0 || m.is_multiple_of(2) {
        return invalid(format!("rad decomposition needs an odd positive integer, got {m}"));
    }
    let (mut rad_e, mut rad_o) = (1, 1);
    for (p, e) in factorize(m) {
        if e % 2 == 0 {
            rad_e *= p;
        } else {
            rad_o *= p;
        }
    }
    let rad = rad_e * rad_o;
    let rad_prime = rad_e * rad_e * rad_o;
    Ok(RadDecomposition {
        rad_e,
        rad_o,
        rad,
        rad_prime,
        irad: m / rad,
        irad_prime: m / rad_prime,
    })
}
