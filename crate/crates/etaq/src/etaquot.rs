//! Eta-quotients, their cusp orders, and the matrix A_N linking the two.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{invalid, Error, Result};
use crate::gamma0::{invariants, CurveInvariants};
use crate::ntheory::{divisors, factorize, is_square, valuation};

fn rat(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

/// A divisor-indexed square matrix over the sorted divisors of N.
#[derive(Clone, Debug, PartialEq)]
pub struct DivisorMatrix {
    pub divisors: Vec<u64>,
    pub rows: Vec<Vec<BigRational>>,
}

impl DivisorMatrix {
    pub fn mul(&self, o: &DivisorMatrix) -> DivisorMatrix {
        let k = self.divisors.len();
        let rows = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| (0..k).map(|t| &self.rows[i][t] * &o.rows[t][j]).sum())
                    .collect()
            })
            .collect();
        DivisorMatrix {
            divisors: self.divisors.clone(),
            rows,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.rows.iter().enumerate().all(|(i, row)| {
            row.iter()
                .enumerate()
                .all(|(j, v)| if i == j { v.is_one() } else { v.is_zero() })
        })
    }
}

/// Entry A_N(c, n) = N/(N,c^2) * (n,c)^2 / n, always an integer.
pub fn an_entry(n_level: u64, c: u64, n: u64) -> i64 {
    let g = n.gcd(&c);
    ((n_level / n_level.gcd(&(c * c))) * g * g / n) as i64
}

pub fn an_matrix(n_level: u64) -> DivisorMatrix {
    let divs = divisors(n_level);
    let rows = divs
        .iter()
        .map(|&c| divs.iter().map(|&n| rat(an_entry(n_level, c, n))).collect())
        .collect();
    DivisorMatrix { divisors: divs, rows }
}

/// One prime-power block of the inverse, before the global scaling.
fn inverse_block(p: u64, alpha: u32, i: u32, j: u32) -> i64 {
    let p = p as i64;
    if i == j {
        if i == 0 || i == alpha {
            p
        } else {
            (p * p + 1) * p.pow(i.min(alpha - i) - 1)
        }
    } else if i.abs_diff(j) == 1 {
        -p.pow(j.min(alpha - j))
    } else {
        0
    }
}

/// A_N^{-1} = B / den with B integral, built as a Kronecker product over the
/// prime-power parts of N; entry (n, c) is row n, column c.
pub fn an_inverse_scaled(n_level: u64) -> (Vec<Vec<i64>>, i64) {
    let divs = divisors(n_level);
    let fac = factorize(n_level);
    let mut den = n_level as i64;
    let mut pref = 1i64;
    for &(p, _) in &fac {
        den *= (p * p - 1) as i64;
        pref *= p as i64;
    }
    let rows = divs
        .iter()
        .map(|&n| {
            divs.iter()
                .map(|&c| {
                    fac.iter().fold(pref, |acc, &(p, a)| {
                        acc * inverse_block(p, a, valuation(p, n), valuation(p, c))
                    })
                })
                .collect()
        })
        .collect();
    (rows, den)
}

pub fn an_inverse(n_level: u64) -> DivisorMatrix {
    let (b, den) = an_inverse_scaled(n_level);
    DivisorMatrix {
        divisors: divisors(n_level),
        rows: b
            .into_iter()
            .map(|row| row.into_iter().map(|v| BigRational::new(v.into(), den.into())).collect())
            .collect(),
    }
}

/// Precomputed per-level data shared by the hot loops.
#[derive(Clone, Debug)]
pub struct Level {
    pub n: u64,
    pub divisors: Vec<u64>,
    pub inv: CurveInvariants,
    /// phi(gcd(c, N/c)) per divisor c.
    pub cusp_mult: Vec<u64>,
    pub a: Vec<Vec<i64>>,
    pub a_inv: Vec<Vec<i64>>,
    pub a_inv_den: i64,
}

impl Level {
    pub fn new(n: u64) -> Self {
        let divs = divisors(n);
        let a = divs
            .iter()
            .map(|&c| divs.iter().map(|&d| an_entry(n, c, d)).collect())
            .collect();
        let (a_inv, a_inv_den) = an_inverse_scaled(n);
        Level {
            n,
            cusp_mult: divs.iter().map(|&c| crate::ntheory::phi(c.gcd(&(n / c)))).collect(),
            divisors: divs,
            inv: invariants(n),
            a,
            a_inv,
            a_inv_den,
        }
    }

    pub fn index_of(&self, d: u64) -> Option<usize> {
        self.divisors.binary_search(&d).ok()
    }

    /// x = A_N r for an integral exponent vector over the divisors.
    pub fn orders(&self, r: &[i64]) -> Vec<i64> {
        self.a
            .iter()
            .map(|row| row.iter().zip(r).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// r = A_N^{-1} x when integral.
    pub fn exponents_int(&self, x: &[i64]) -> Option<Vec<i64>> {
        let mut out = Vec::with_capacity(x.len());
        for row in &self.a_inv {
            let s: i128 = row.iter().zip(x).map(|(a, b)| *a as i128 * *b as i128).sum();
            if s % self.a_inv_den as i128 != 0 {
                return None;
            }
            out.push((s / self.a_inv_den as i128) as i64);
        }
        Some(out)
    }
}

/// prod eta(n tau)^{r_n} on an ambient level N.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EtaQuotient {
    level: u64,
    exps: BTreeMap<u64, BigRational>,
}

/// Cusp orders x_c (24 times the order at any cusp a/c), indexed by the
/// sorted divisors c of N.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CuspOrders {
    pub level: u64,
    pub x: Vec<BigRational>,
}

impl CuspOrders {
    pub fn new(level: u64, x: Vec<BigRational>) -> Result<Self> {
        if x.len() != divisors(level).len() {
            return invalid(format!(
                "level {level} has {} divisors but {} cusp orders were given",
                divisors(level).len(),
                x.len()
            ));
        }
        Ok(CuspOrders { level, x })
    }

    pub fn from_ints(level: u64, x: &[i64]) -> Result<Self> {
        Self::new(level, x.iter().map(|&v| rat(v)).collect())
    }

    pub fn get(&self, c: u64) -> Option<&BigRational> {
        divisors(self.level).binary_search(&c).ok().map(|i| &self.x[i])
    }
}

impl EtaQuotient {
    pub fn new(level: u64, exps: impl IntoIterator<Item = (u64, BigRational)>) -> Result<Self> {
        if level == 0 {
            return invalid("level must be positive");
        }
        let mut map = BTreeMap::new();
        for (n, r) in exps {
            if n == 0 || !level.is_multiple_of(n) {
                return invalid(format!("{n} does not divide the level {level}"));
            }
            if !r.is_zero() {
                let e = map.entry(n).or_insert_with(BigRational::zero);
                *e += r;
                if e.is_zero() {
                    map.remove(&n);
                }
            }
        }
        Ok(EtaQuotient { level, exps: map })
    }

    pub fn from_ints(level: u64, exps: &[(u64, i64)]) -> Result<Self> {
        Self::new(level, exps.iter().map(|&(n, r)| (n, rat(r))))
    }

    /// Integral exponent vector aligned with `divisors(level)`.
    pub fn from_vector(level: u64, r: &[i64]) -> Result<Self> {
        let divs = divisors(level);
        if divs.len() != r.len() {
            return invalid("exponent vector length does not match the divisor count");
        }
        Self::new(level, divs.into_iter().zip(r.iter().map(|&v| rat(v))))
    }

    /// Parses whitespace-separated `n^e` tokens; `*` and `·` also separate.
    /// The level is the lcm of the n with nonzero e.
    pub fn parse(text: &str) -> Result<Self> {
        let cleaned = text.replace(['·', '*'], " ");
        let mut seen = BTreeMap::new();
        for (pos, tok) in cleaned.split_whitespace().enumerate() {
            let perr = |msg: &str| Error::Parse {
                pos,
                msg: format!("{msg} in `{tok}`"),
            };
            let (n, e) = tok.split_once('^').ok_or_else(|| perr("expected n^e"))?;
            let n: u64 = n.parse().map_err(|_| perr("bad divisor"))?;
            if n == 0 {
                return Err(perr("divisor must be positive"));
            }
            let e = parse_rational(e).ok_or_else(|| perr("bad exponent"))?;
            if seen.insert(n, e).is_some() {
                return Err(perr("duplicate divisor"));
            }
        }
        let level = seen
            .iter()
            .filter(|(_, e)| !e.is_zero())
            .fold(1u64, |acc, (&n, _)| acc.lcm(&n));
        Self::new(level, seen)
    }

    /// The same function viewed on a multiple of its level.
    pub fn with_level(&self, level: u64) -> Result<Self> {
        if level == 0 || !level.is_multiple_of(self.minimal_level()) {
            return invalid(format!("{level} is not a multiple of {}", self.minimal_level()));
        }
        Self::new(level, self.exps.clone())
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    /// lcm of the n with r_n nonzero.
    pub fn minimal_level(&self) -> u64 {
        self.exps.keys().fold(1u64, |acc, &n| acc.lcm(&n))
    }

    pub fn exponent(&self, n: u64) -> BigRational {
        self.exps.get(&n).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Nonzero exponents keyed by n.
    pub fn exponents(&self) -> &BTreeMap<u64, BigRational> {
        &self.exps
    }

    pub fn exponent_vector(&self) -> Vec<BigRational> {
        divisors(self.level).into_iter().map(|n| self.exponent(n)).collect()
    }

    pub fn is_integral(&self) -> bool {
        self.exps.values().all(|r| r.is_integer())
    }

    /// Integral exponent vector over the divisors, if all r_n are integers.
    pub fn int_vector(&self) -> Option<Vec<i64>> {
        divisors(self.level)
            .into_iter()
            .map(|n| {
                let r = self.exponent(n);
                if r.is_integer() {
                    r.to_integer().to_i64()
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn weight(&self) -> BigRational {
        self.exps.values().sum::<BigRational>() / rat(2)
    }

    /// Least D > 0 with D r_n even for every n.
    pub fn cover_index(&self) -> u64 {
        // D r_n in 2Z  <=>  den(r_n/2) | D
        self.exps.values().fold(1u64, |acc, r| {
            let half = r / rat(2);
            acc.lcm(&half.denom().to_u64().expect("denominator too large"))
        })
    }

    /// x_N = sum n r_n, 24 times the order at infinity.
    pub fn x_n(&self) -> BigRational {
        self.exps.iter().map(|(&n, r)| r * rat(n as i64)).sum()
    }

    pub fn cusp_orders(&self) -> CuspOrders {
        let divs = divisors(self.level);
        let x = divs
            .iter()
            .map(|&c| {
                self.exps
                    .iter()
                    .map(|(&n, r)| r * rat(an_entry(self.level, c, n)))
                    .sum()
            })
            .collect();
        CuspOrders { level: self.level, x }
    }

    pub fn is_holomorphic(&self) -> bool {
        self.cusp_orders().x.iter().all(|x| !x.is_negative())
    }

    pub fn is_cuspform_side(&self) -> bool {
        self.cusp_orders().x.iter().all(|x| x.is_positive())
    }

    pub fn hecke_stats(&self) -> Result<HeckeStats> {
        if !self.is_integral() {
            return invalid("Hecke statistics need integral exponents");
        }
        let n = self.level;
        let mut s_dual = BigInt::zero();
        let mut s_n = BigInt::zero();
        let mut pi: BTreeMap<u64, u64> = BTreeMap::new();
        for (&d, r) in &self.exps {
            let r = r.to_integer();
            s_dual += &r * BigInt::from(n / d);
            s_n += &r * BigInt::from(d);
            let e = r.abs().to_u64().expect("exponent too large");
            for (p, v) in factorize(n / d) {
                *pi.entry(p).or_insert(0) += v as u64 * e;
            }
        }
        let g = BigInt::from(24).gcd(&s_dual).gcd(&s_n);
        let m_f = (BigInt::from(24) / g).to_u64().unwrap();
        // odd part of Pi mod 4: each odd p contributes p^v
        let odd_mod4 = pi
            .iter()
            .filter(|(&p, _)| p != 2)
            .fold(1u64, |acc, (&p, &v)| if p % 4 == 3 && v % 2 == 1 { acc * 3 % 4 } else { acc });
        Ok(HeckeStats {
            x_n: s_n,
            pi,
            delta: if odd_mod4 == 1 { 0 } else { 1 },
            m_f,
        })
    }

    /// Membership of l in the monoid L_f.
    pub fn in_l_f(&self, l: u64) -> Result<bool> {
        let st = self.hecke_stats()?;
        let half_integral = !self.weight().is_integer();
        Ok(l >= 1 && l % st.m_f == 1 % st.m_f && (!half_integral || is_square(l)))
    }

    pub fn to_json(&self) -> Value {
        let r: serde_json::Map<String, Value> = self
            .exps
            .iter()
            .map(|(n, e)| (n.to_string(), Value::String(e.to_string())))
            .collect();
        json!({"N": self.level, "r": r})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let level = v
            .get("N")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::InvalidArgument("missing integer field N".into()))?;
        let mut exps = Vec::new();
        if let Some(map) = v.get("r").and_then(Value::as_object) {
            for (k, e) in map {
                let n: u64 = k
                    .parse()
                    .map_err(|_| Error::InvalidArgument(format!("bad divisor key {k}")))?;
                let e = match e {
                    Value::String(s) => parse_rational(s),
                    Value::Number(x) => x.as_i64().map(rat),
                    _ => None,
                }
                .ok_or_else(|| Error::InvalidArgument(format!("bad exponent for {k}")))?;
                exps.push((n, e));
            }
        }
        Self::new(level, exps)
    }
}

impl fmt::Display for EtaQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.exps.iter().map(|(n, e)| format!("{n}^{e}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Parses an integer or `p/q`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(BigRational::new(p, q))
            }
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from),
    }
}

/// Exponents recovered from cusp orders through the closed-form inverse.
pub fn exponents_from_orders(x: &CuspOrders) -> Vec<BigRational> {
    let inv = an_inverse(x.level);
    inv.rows
        .iter()
        .map(|row| row.iter().zip(&x.x).map(|(a, b)| a * b).sum())
        .collect()
}

/// The quantities attached to an integral eta-quotient by the Hecke theory:
/// x_N, Pi = prod (N/n)^{|r_n|} as a factorization, delta, and m_f.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeStats {
    pub x_n: BigInt,
    pub pi: BTreeMap<u64, u64>,
    pub delta: u8,
    pub m_f: u64,
}

impl HeckeStats {
    pub fn pi_value(&self) -> BigInt {
        self.pi
            .iter()
            .fold(BigInt::one(), |acc, (&p, &v)| acc * BigInt::from(p).pow(v as u32))
    }

    pub fn v2_pi(&self) -> u64 {
        self.pi.get(&2).copied().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn parse_examples() {
        let f = EtaQuotient::parse("1^-7 2^17 4^-3").unwrap();
        assert_eq!(f.level(), 4);
        assert_eq!(f.weight(), BigRational::new(7.into(), 2.into()));
        let one = EtaQuotient::parse("").unwrap();
        assert_eq!((one.level(), one.weight()), (1, BigRational::zero()));
        let g = EtaQuotient::parse("4^-3/2").unwrap();
        assert_eq!((g.level(), g.cover_index()), (4, 4));
        assert_eq!(EtaQuotient::parse("1^2·2^-1").unwrap().level(), 2);
        assert!(matches!(EtaQuotient::parse("1^2 1^3"), Err(Error::Parse { pos: 1, .. })));
        assert!(matches!(EtaQuotient::parse("2^1/0"), Err(Error::Parse { .. })));
        assert!(matches!(EtaQuotient::parse("2-1"), Err(Error::Parse { .. })));
    }

    #[test]
    fn cusp_order_examples() {
        let f = EtaQuotient::parse("3^2 9^-1 27^1").unwrap();
        assert_eq!(f.cusp_orders().x, ints(&[16, 16, 0, 24]));
        let g = EtaQuotient::parse("1^-7 2^17 4^-3").unwrap();
        assert_eq!(g.cusp_orders().x, ints(&[3, 24, 15]));
        assert_eq!(EtaQuotient::parse("1^24").unwrap().cusp_orders().x, ints(&[24]));
    }

    #[test]
    fn inverse_examples() {
        let x = CuspOrders::from_ints(27, &[16, 16, 0, 24]).unwrap();
        assert_eq!(exponents_from_orders(&x), ints(&[0, 2, -1, 1]));
        let x = CuspOrders::from_ints(4, &[3, 24, 15]).unwrap();
        assert_eq!(exponents_from_orders(&x), ints(&[-7, 17, -3]));
        assert_eq!(an_matrix(4).rows, vec![ints(&[4, 2, 1]), ints(&[1, 2, 1]), ints(&[1, 2, 4])]);
        assert_eq!(an_matrix(12).rows[0], ints(&[12, 6, 4, 3, 2, 1]));
        for n in [1u64, 4, 12, 60, 72, 360] {
            assert!(an_matrix(n).mul(&an_inverse(n)).is_identity(), "N={n}");
        }
    }

    #[test]
    fn holomorphy() {
        assert!(EtaQuotient::parse("1^2 2^7 4^-4").unwrap().is_holomorphic());
        assert!(!EtaQuotient::parse("1^-1").unwrap().is_holomorphic());
        let f = EtaQuotient::parse("1^1 2^1 3^1 6^3").unwrap();
        assert!(f.is_cuspform_side());
        assert_eq!(f.cusp_orders().x, ints(&[14, 16, 18, 24]));
    }

    #[test]
    fn hecke_stat_examples() {
        let f = EtaQuotient::parse("1^1 2^-1 3^-1 4^1 6^4 12^-2").unwrap();
        let s = f.hecke_stats().unwrap();
        assert_eq!((s.pi.clone(), s.delta, s.m_f), ([(2, 9), (3, 3)].into_iter().collect(), 1, 24));
        let f = EtaQuotient::parse("3^2 9^-1 27^1").unwrap();
        let s = f.hecke_stats().unwrap();
        assert_eq!((s.x_n.clone(), s.pi_value(), s.delta, s.m_f), (24.into(), 243.into(), 1, 3));
        assert!(f.in_l_f(4).unwrap() && !f.in_l_f(2).unwrap());
        let f = EtaQuotient::parse("1^-7 2^17 4^-3").unwrap();
        let s = f.hecke_stats().unwrap();
        assert_eq!((s.pi_value(), s.delta, s.m_f), (BigInt::from(2).pow(31u32), 0, 8));
        assert!(f.in_l_f(9).unwrap() && !f.in_l_f(3).unwrap() && f.in_l_f(1).unwrap());
        assert!(EtaQuotient::parse("4^-3/2").unwrap().hecke_stats().is_err());
    }

    #[test]
    fn json_round_trip() {
        let f = EtaQuotient::parse("1^-7 2^17/3 4^-3").unwrap();
        assert_eq!(EtaQuotient::from_json(&f.to_json()).unwrap(), f);
    }

    #[test]
    fn level_fast_paths() {
        let lv = Level::new(12);
        let r = [1, -1, -1, 1, 4, -2];
        let x = lv.orders(&r);
        assert_eq!(lv.exponents_int(&x).unwrap(), r.to_vec());
    }
}
