//! Multiplier systems of eta-quotients: evaluation on the D-fold cover,
//! Newman's equivalence test, and the Delta-sequence classification of
//! integral-exponent characters.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::cyclo::UnityRoot;
use crate::error::{invalid, Result};
use crate::etaquot::EtaQuotient;
use crate::ntheory::{divisors, factorize, kronecker, psi, psi_small, SL2Matrix};

/// (gamma, eps) in the D-fold cover of Gamma0(N).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedMatrix {
    pub g: SL2Matrix,
    pub eps: UnityRoot,
}

impl LiftedMatrix {
    pub fn new(g: SL2Matrix, eps: UnityRoot) -> Self {
        LiftedMatrix { g, eps }
    }

    pub fn plain(g: SL2Matrix) -> Self {
        LiftedMatrix {
            g,
            eps: UnityRoot::one(),
        }
    }
}

/// chi_r(gamma, eps) = eps^{-Dk} e(sum_n r_n Psi(a, bn; c/n, d) / 24).
pub fn chi_eval(f: &EtaQuotient, x: &LiftedMatrix) -> Result<UnityRoot> {
    let n = BigInt::from(f.level());
    if !(&x.g.c % &n).is_zero() {
        return invalid(format!("{} is not in Gamma0({})", x.g, f.level()));
    }
    let d = f.cover_index() as i64;
    if !x.eps.pow(d).is_one() {
        return invalid(format!("{} is not a {d}-th root of unity", x.eps));
    }
    let mut acc = BigRational::zero();
    for (&m, r) in f.exponents() {
        let mb = BigInt::from(m);
        let g = SL2Matrix {
            a: x.g.a.clone(),
            b: &x.g.b * &mb,
            c: &x.g.c / &mb,
            d: x.g.d.clone(),
        };
        acc += r * BigRational::from(psi(&g)?);
    }
    let dk = f.weight() * BigRational::from(BigInt::from(d));
    debug_assert!(dk.is_integer());
    let dk = dk.to_integer().to_i64().expect("weight too large");
    Ok(x.eps.pow(-dk) * UnityRoot::from_big(&(acc / BigRational::from(BigInt::from(24)))))
}

/// Machine-width chi_r for integral exponents on the double cover, with r
/// aligned to `divs` and eps = +-1.
pub fn chi_int_small(divs: &[u64], r: &[i64], a: i64, b: i64, c: i64, d: i64, eps: i8) -> UnityRoot {
    let mut s: i64 = 0;
    let mut w: i64 = 0;
    for (&n, &rn) in divs.iter().zip(r) {
        if rn == 0 {
            continue;
        }
        let n = n as i64;
        s += rn * psi_small(a, b * n, c / n, d);
        w += rn;
    }
    let mut out = UnityRoot::frac(s.rem_euclid(24), 24);
    // eps^{-2k} = eps^{-sum r}
    if eps < 0 && w.rem_euclid(2) == 1 {
        out = out * UnityRoot::frac(1, 2);
    }
    out
}

/// The closed form of chi_eta on the double cover, eps = +-1.
pub fn chi_eta_petersson(g: &SL2Matrix, eps: i8) -> UnityRoot {
    let (a, b, c, d) = (&g.a, &g.b, &g.c, &g.d);
    let c2m1 = c * c - 1;
    let (sym, num) = if (c % 2u8) != BigInt::zero() {
        let absc = if c < &BigInt::zero() { -c } else { c.clone() };
        (
            kronecker(d, &absc),
            (a - 2 * d) * c - b * d * &c2m1 + (3 * d - 3) * c,
        )
    } else {
        (kronecker(c, d), (a - 2 * d) * c - b * d * &c2m1 + 3 * d - 3)
    };
    debug_assert!(sym != 0);
    let mut out = UnityRoot::from_big(&BigRational::new(num, BigInt::from(24)));
    if sym * eps as i32 == -1 {
        out = out * UnityRoot::frac(1, 2);
    }
    out
}

/// Newman's criterion: chi_r = chi_r' on the double cover, for integral
/// vectors of equal weight aligned with the divisors of N.
pub fn newman_equivalent(r: &[i64], rp: &[i64], n: u64) -> Result<bool> {
    let divs = divisors(n);
    if r.len() != divs.len() || rp.len() != divs.len() {
        return invalid("exponent vectors must be aligned with the divisors of N");
    }
    if r.iter().sum::<i64>() != rp.iter().sum::<i64>() {
        return invalid("exponent vectors have different weights");
    }
    let (mut s1, mut s2) = (0i64, 0i64);
    let mut odd_prod: HashMap<u64, u32> = HashMap::new();
    for ((&d, &a), &b) in divs.iter().zip(r).zip(rp) {
        let diff = a - b;
        s1 = (s1 + (d as i64 % 24) * diff.rem_euclid(24)) % 24;
        s2 = (s2 + ((n / d) as i64 % 24) * diff.rem_euclid(24)) % 24;
        if diff.rem_euclid(2) == 1 {
            for (p, e) in factorize(d) {
                *odd_prod.entry(p).or_insert(0) += e;
            }
        }
    }
    Ok(s1 == 0 && s2 == 0 && odd_prod.values().all(|e| e % 2 == 0))
}

/// B_N in ascending order.
pub fn b_set(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for (p, a) in factorize(n) {
        match p {
            2 => match a {
                1 => out.push(2),
                2 => out.extend([2, 4]),
                _ => out.extend([1 << (a - 2), 1 << (a - 1), 1 << a]),
            },
            3 => match a {
                1 => out.push(3),
                _ => out.extend([3u64.pow(a - 1), 3u64.pow(a)]),
            },
            _ => out.push(p),
        }
    }
    out.sort_unstable();
    out
}

/// The trivial-character system on c (indexed by `b`): its mod-3 part and its
/// mod-8 part with the parity side conditions, which decouple by CRT.
struct ZSystem {
    // coefficients of the two congruences, reduced mod 24
    u: Vec<i64>,
    v: Vec<i64>,
    // (prime class, beta) per entry: class 0 for 2-powers, 1 for 3-powers,
    // 2 for primes >= 5, which must carry an even c
    class: Vec<(u8, u32)>,
}

impl ZSystem {
    fn new(n: u64, b: &[u64]) -> Self {
        let mut u = Vec::new();
        let mut v = Vec::new();
        let mut class = Vec::new();
        for &m in b {
            u.push(((m as i64) - 1).rem_euclid(24));
            v.push(((n / m) as i64 - n as i64).rem_euclid(24));
            let f = factorize(m);
            let (p, e) = f[0];
            class.push(match p {
                2 => (0, e),
                3 => (1, e),
                _ => (2, 1),
            });
        }
        ZSystem { u, v, class }
    }

    fn ok3(&self, c: &[i64]) -> bool {
        let s1: i64 = self.u.iter().zip(c).map(|(a, b)| a * b).sum();
        let s2: i64 = self.v.iter().zip(c).map(|(a, b)| a * b).sum();
        s1 % 3 == 0 && s2 % 3 == 0
    }

    fn ok8(&self, c: &[i64]) -> bool {
        let s1: i64 = self.u.iter().zip(c).map(|(a, b)| a * b).sum();
        let s2: i64 = self.v.iter().zip(c).map(|(a, b)| a * b).sum();
        if s1 % 8 != 0 || s2 % 8 != 0 {
            return false;
        }
        let (mut par2, mut par3) = (0u32, 0u32);
        for (&(cls, beta), &ci) in self.class.iter().zip(c) {
            if ci % 2 == 1 {
                match cls {
                    0 => par2 += beta,
                    1 => par3 += beta,
                    _ => return false,
                }
            }
        }
        par2 % 2 == 0 && par3 % 2 == 0
    }

    /// Some completion of the fixed prefix exists modulo `modulus` (3 or 8).
    fn extendable(&self, prefix: &[i64], modulus: i64) -> bool {
        let t = self.u.len();
        let mut c = prefix.to_vec();
        c.resize(t, 0);
        let free = t - prefix.len();
        let total = (modulus as u64).pow(free as u32);
        for code in 0..total {
            let mut k = code;
            for slot in c.iter_mut().skip(prefix.len()) {
                *slot = (k % modulus as u64) as i64;
                k /= modulus as u64;
            }
            let ok = if modulus == 3 { self.ok3(&c) } else { self.ok8(&c) };
            if ok {
                return true;
            }
        }
        false
    }
}

type DeltaCache = RwLock<HashMap<(u64, Vec<u64>), Vec<u64>>>;

fn delta_cache() -> &'static DeltaCache {
    static CACHE: OnceLock<DeltaCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Delta_i = least m in 1..=24 such that c_{b_j} = 0 (j < i), c_{b_i} = m
/// extends to a solution of the trivial-character system.
pub fn delta_sequence(n: u64, ordering: &[u64]) -> Result<Vec<u64>> {
    let mut sorted = ordering.to_vec();
    sorted.sort_unstable();
    if sorted != b_set(n) {
        return invalid(format!("{ordering:?} is not an ordering of B_{n} = {:?}", b_set(n)));
    }
    let key = (n, ordering.to_vec());
    if let Some(v) = delta_cache().read().unwrap().get(&key) {
        return Ok(v.clone());
    }
    let sys = ZSystem::new(n, ordering);
    let mut out = Vec::with_capacity(ordering.len());
    for i in 0..ordering.len() {
        let mut prefix = vec![0i64; i + 1];
        let delta = (1..=24i64)
            .find(|&m| {
                prefix[i] = m % 3;
                let ok3 = sys.extendable(&prefix, 3);
                prefix[i] = m % 8;
                ok3 && sys.extendable(&prefix, 8)
            })
            .expect("24 always extends");
        out.push(delta as u64);
    }
    delta_cache().write().unwrap().insert(key, out.clone());
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(rename = "B_N")]
    pub b_n: Vec<u64>,
    #[serde(rename = "Delta")]
    pub delta: Vec<u64>,
    pub count: u64,
}

pub fn classify(n: u64, ordering: Option<&[u64]>) -> Result<Classification> {
    let b = match ordering {
        Some(o) => o.to_vec(),
        None => b_set(n),
    };
    let delta = delta_sequence(n, &b)?;
    Ok(Classification {
        n,
        count: delta.iter().product(),
        b_n: b,
        delta,
    })
}

pub fn count_characters(n: u64) -> u64 {
    classify(n, None).expect("ascending B_N is always valid").count
}

/// All box representatives of weight k = two_k/2, as full exponent vectors
/// over the divisors of N: sum c_j e_{b_j} + (2k - sum c_j) e_1.
pub fn representatives(n: u64, two_k: i64) -> Vec<Vec<i64>> {
    let cls = classify(n, None).unwrap();
    representatives_for(&cls, two_k)
}

pub fn representatives_for(cls: &Classification, two_k: i64) -> Vec<Vec<i64>> {
    let divs = divisors(cls.n);
    let pos: Vec<usize> = cls
        .b_n
        .iter()
        .map(|b| divs.binary_search(b).unwrap())
        .collect();
    let mut out = Vec::with_capacity(cls.count as usize);
    let mut c = vec![0u64; cls.delta.len()];
    loop {
        let mut r = vec![0i64; divs.len()];
        let mut s = 0i64;
        for (j, &cj) in c.iter().enumerate() {
            r[pos[j]] = cj as i64;
            s += cj as i64;
        }
        r[0] += two_k - s;
        out.push(r);
        // odometer, last coordinate fastest
        let mut j = c.len();
        loop {
            if j == 0 {
                return out;
            }
            j -= 1;
            c[j] += 1;
            if c[j] < cls.delta[j] {
                break;
            }
            c[j] = 0;
        }
    }
}

/// Index of the box representative equivalent to r (same weight), by scan.
pub fn class_of(n: u64, r: &[i64]) -> Result<usize> {
    let two_k: i64 = r.iter().sum();
    for (i, rep) in representatives(n, two_k).iter().enumerate() {
        if newman_equivalent(r, rep, n)? {
            return Ok(i);
        }
    }
    Err(crate::Error::Internal(format!(
        "no box representative matches {r:?} at level {n}"
    )))
}

/// Exponent of chi as a fraction of a full turn, for tests and reports.
pub fn exponent_of(u: UnityRoot) -> Ratio<i64> {
    u.exponent()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eta() -> EtaQuotient {
        EtaQuotient::parse("1^1").unwrap()
    }

    #[test]
    fn chi_examples() {
        let f = EtaQuotient::parse("1^-7 2^17 4^-3").unwrap();
        let t = LiftedMatrix::plain(SL2Matrix::t());
        assert_eq!(chi_eval(&f, &t).unwrap(), UnityRoot::frac(15, 24));
        let mi = LiftedMatrix::plain(SL2Matrix::neg_identity());
        assert_eq!(chi_eval(&f, &mi).unwrap(), UnityRoot::frac(-7, 4));
        // eps^{-1} e(-3/24) with eps = 1
        let s = LiftedMatrix::plain(SL2Matrix::s());
        assert_eq!(chi_eval(&eta(), &s).unwrap(), UnityRoot::frac(-1, 8));
        assert_eq!(chi_eta_petersson(&SL2Matrix::s(), 1), UnityRoot::frac(-1, 8));
        assert!(chi_eval(&f, &s).is_err());
    }

    #[test]
    fn petersson_examples() {
        assert_eq!(chi_eta_petersson(&SL2Matrix::t(), 1), UnityRoot::frac(1, 24));
        assert_eq!(chi_eta_petersson(&SL2Matrix::neg_identity(), 1), UnityRoot::frac(-1, 4));
        assert_eq!(chi_eta_petersson(&SL2Matrix::t(), -1), UnityRoot::frac(13, 24));
    }

    #[test]
    fn newman_examples() {
        let r = [1, 2, 3, 4, 5, 6];
        assert!(newman_equivalent(&r, &r, 50).unwrap());
        // divisors of 50: 1 2 5 10 25 50
        assert!(newman_equivalent(&[-11, 7, 4, 0, 0, 0], &[1, -1, 0, 0, 0, 0], 50).unwrap());
        assert!(newman_equivalent(&[-15, 16, 1, 0, 0, 0], &[-1, 2, -1, 2, 0, 0], 98).unwrap());
        assert!(newman_equivalent(&[1, 0], &[0, 0], 2).is_err());
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta_sequence(5, &[5]).unwrap(), vec![6]);
        assert_eq!(delta_sequence(8, &[2, 4, 8]).unwrap(), vec![2, 8, 24]);
        assert_eq!(delta_sequence(20, &[2, 4, 5]).unwrap(), vec![8, 8, 6]);
        assert_eq!(delta_sequence(4, &[2, 4]).unwrap(), vec![24, 8]);
        assert_eq!(count_characters(4), 192);
        assert_eq!(count_characters(50), 48);
        assert_eq!(count_characters(1), 1);
        assert!(delta_sequence(4, &[2]).is_err());
    }

    #[test]
    fn representatives_are_distinct_classes() {
        for n in [4u64, 6, 9, 20] {
            let reps = representatives(n, 1);
            assert_eq!(reps.len() as u64, count_characters(n));
            for i in 0..reps.len() {
                for j in (i + 1)..reps.len().min(i + 40) {
                    assert!(!newman_equivalent(&reps[i], &reps[j], n).unwrap());
                }
            }
        }
    }
}
