//! Dimensions of M_k(Gamma0(N), chi) for eta-quotient characters chi.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::charclass::{classify, representatives_for};
use crate::error::{invalid, Error, Result};
use crate::etaquot::{exponents_from_orders, CuspOrders, EtaQuotient, Level};
use crate::gamma0::invariants;
use crate::ntheory::{divisors, phi, sigma0};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimQuery {
    /// Supplies the level and the character.
    pub f: EtaQuotient,
    pub t: u64,
}

impl DimQuery {
    pub fn new(f: EtaQuotient, t: u64) -> Self {
        DimQuery { f, t }
    }

    /// k = sum(r)/2 + 2t.
    pub fn weight(&self) -> BigRational {
        self.f.weight() + BigRational::from(BigInt::from(2 * self.t))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DimStatus {
    Exact,
    LowerBoundOnly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimResult {
    pub status: DimStatus,
    /// The formula value: the dimension when exact, a lower bound otherwise.
    pub value: i64,
    pub upper_bound: i64,
    pub cusp_dim: Option<i64>,
}

fn frac(x: &BigRational) -> BigRational {
    x - x.floor()
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Upper bound floor(mk/12) + 1 for k >= 0; the space is zero for k < 0.
fn upper_bound(m: u64, k: &BigRational) -> i64 {
    if k.is_negative() {
        return 0;
    }
    (k * q(m as i64, 12)).floor().to_integer().to_i64().unwrap() + 1
}

pub fn dimension(qry: &DimQuery) -> DimResult {
    let n = qry.f.level();
    let inv = invariants(n);
    let m = inv.m as i64;
    let k = qry.weight();
    let t = qry.t as i64;
    let x = qry.f.cusp_orders().x;
    let divs = divisors(n);
    let mults: Vec<i64> = divs.iter().map(|&c| phi(c.gcd(&(n / c))) as i64).collect();
    let x24: Vec<BigRational> = x.iter().map(|v| v / q(24, 1)).collect();

    let mut value = (&k - q(1, 1)) * q(m, 12)
        + (q(1, 4) - frac(&q(t, 2))) * q(inv.eps2 as i64, 1)
        + (q(1, 3) - frac(&q(-t, 3))) * q(inv.eps3 as i64, 1);
    for (mu, xc) in mults.iter().zip(&x24) {
        value += (q(1, 2) - frac(xc)) * q(*mu, 1);
    }
    assert!(value.is_integer(), "dimension formula gave non-integer {value}");
    let value = value.to_integer().to_i64().unwrap();

    let exact = if t >= 1 {
        let s: BigRational = mults
            .iter()
            .zip(&x24)
            .map(|(mu, xc)| (xc.floor() + q(1, 1)) * q(*mu, 1))
            .sum();
        s.is_positive()
    } else {
        let s: BigRational = mults
            .iter()
            .zip(&x24)
            .map(|(mu, xc)| (q(1, 1) - frac(xc)) * q(*mu, 1))
            .sum();
        let rhs = q(2, 1)
            - q(6 * inv.eps2 as i64, m)
            - q(8 * inv.eps3 as i64, m)
            - s * q(12, m);
        k > rhs
    };
    let cusp_dim = if exact && k > q(2, 1) {
        let r: i64 = mults
            .iter()
            .zip(&x24)
            .filter(|(_, xc)| xc.is_integer())
            .map(|(mu, _)| *mu)
            .sum();
        Some(value - r)
    } else {
        None
    };
    DimResult {
        status: if exact { DimStatus::Exact } else { DimStatus::LowerBoundOnly },
        value,
        upper_bound: upper_bound(inv.m, &k),
        cusp_dim,
    }
}

/// dim S_k = dim M_k - |R| with |R| the number of cusps where x_c/24 is an
/// integer; needs k > 2 and an exact dim M_k.
pub fn dimension_cusp(qry: &DimQuery) -> Result<i64> {
    if qry.weight() <= q(2, 1) {
        return Err(Error::NotApplicable(format!(
            "cusp-space formula needs k > 2, got {}",
            qry.weight()
        )));
    }
    let d = dimension(qry);
    match (d.status, d.cusp_dim) {
        (DimStatus::Exact, Some(s)) => Ok(s),
        _ => Err(Error::NotApplicable(
            "dimension of M_k is not certified exact".into(),
        )),
    }
}

/// Integer fast path: t = 0, integral x_c, weight two_k/2.
/// Returns (exact, value).
pub fn dimension_t0_int(lv: &Level, x: &[i64], two_k: i64) -> (bool, i64) {
    let m = lv.inv.m as i64;
    let (e2, e3) = (lv.inv.eps2 as i64, lv.inv.eps3 as i64);
    let mut scaled = (two_k - 2) * m + 6 * e2 + 8 * e3;
    let mut s = 0i64;
    for (&mu, &xc) in lv.cusp_mult.iter().zip(x) {
        let xr = xc.rem_euclid(24);
        scaled += mu as i64 * (12 - xr);
        s += mu as i64 * (24 - xr);
    }
    debug_assert_eq!(scaled % 24, 0);
    let exact = two_k * m > 4 * m - 12 * e2 - 16 * e3 - s;
    (exact, scaled / 24)
}

/// Dimension of M_2 with character from cusp orders summing to zero, on
/// levels where every phi(gcd(c, N/c)) is 1: g - 1 + sigma0(N) + sum [x_c/24].
pub fn weight2_special(x: &CuspOrders) -> Result<i64> {
    let n = x.level;
    let divs = divisors(n);
    if divs.iter().any(|&c| phi(c.gcd(&(n / c))) != 1) {
        return invalid(format!("level {n} has a cusp class of size > 1"));
    }
    if !x.x.iter().sum::<BigRational>().is_zero() {
        return invalid("cusp orders must sum to zero");
    }
    let g = invariants(n).genus as i64;
    let s: BigRational = x.x.iter().map(|v| (v / q(24, 1)).floor()).sum();
    Ok(g - 1 + sigma0(n) as i64 + s.to_integer().to_i64().unwrap())
}

/// The same dimension through the general formula with t = 1.
pub fn weight2_via_general(x: &CuspOrders) -> DimResult {
    let r = exponents_from_orders(x);
    let f = EtaQuotient::new(x.level, divisors(x.level).into_iter().zip(r)).unwrap();
    dimension(&DimQuery::new(f, 1))
}

/// One row of a dimension table: level, character count a, computable
/// count v, and d[j] = number of characters with dimension exactly j.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableRow {
    #[serde(rename = "N")]
    pub n: u64,
    pub a: u64,
    pub v: u64,
    pub d: Vec<u64>,
}

/// Level ranges for which the tables are known to be complete.
pub fn table_levels(two_k: i64) -> Vec<u64> {
    match two_k {
        1 => (1..=21).chain([24, 25, 27, 32, 36, 49, 50]).collect(),
        2 => (1..=22)
            .chain(24..=32)
            .chain([34, 36, 37, 39, 40, 45, 48, 49, 50, 54, 64, 72, 75, 81, 98, 100, 121, 169])
            .collect(),
        _ => (1..=529).collect(),
    }
}

/// Table row at level N and weight two_k/2 with t = 0, evaluated on the
/// canonical representative of every character class.
pub fn table_row(n: u64, two_k: i64) -> TableRow {
    let lv = Level::new(n);
    let cls = classify(n, None).unwrap();
    let mut v = 0;
    let mut d: Vec<u64> = Vec::new();
    for r in representatives_for(&cls, two_k) {
        let x = lv.orders(&r);
        let (exact, val) = dimension_t0_int(&lv, &x, two_k);
        if exact {
            v += 1;
            let j = val as usize;
            if d.len() <= j {
                d.resize(j + 1, 0);
            }
            d[j] += 1;
        }
    }
    TableRow { n, a: cls.count, v, d }
}

/// All rows with v > 0 over the table range, in level order; d padded to a
/// common width.
pub fn table(two_k: i64) -> Vec<TableRow> {
    table_over(two_k, &table_levels(two_k))
}

pub fn table_over(two_k: i64, levels: &[u64]) -> Vec<TableRow> {
    let mut rows: Vec<TableRow> = levels
        .par_iter()
        .map(|&n| table_row(n, two_k))
        .filter(|r| r.v > 0)
        .collect();
    rows.sort_by_key(|r| r.n);
    let width = rows.iter().map(|r| r.d.len()).max().unwrap_or(1);
    for r in &mut rows {
        r.d.resize(width, 0);
    }
    rows
}

pub fn table_csv(rows: &[TableRow]) -> String {
    let width = rows.first().map(|r| r.d.len()).unwrap_or(1);
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["N".to_string(), "a".into(), "v".into()];
    header.extend((0..width).map(|j| format!("d{j}")));
    w.write_record(&header).unwrap();
    for r in rows {
        let mut rec = vec![r.n.to_string(), r.a.to_string(), r.v.to_string()];
        rec.extend(r.d.iter().map(|x| x.to_string()));
        w.write_record(&rec).unwrap();
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

/// True when no character of weight two_k/2 at level N can satisfy the
/// t = 0 applicability condition, even with every x_c divisible by 24.
pub fn level_excluded(n: u64, two_k: i64) -> bool {
    let inv = invariants(n);
    let (m, e2, e3, ei) = (inv.m as i64, inv.eps2 as i64, inv.eps3 as i64, inv.eps_inf as i64);
    two_k * m <= 4 * m - 12 * e2 - 16 * e3 - 24 * ei
}

/// Rational k as a pair (two_k) if k is a half-integer.
pub fn two_k_of(k: &BigRational) -> Option<i64> {
    let t = k * q(2, 1);
    if t.is_integer() {
        t.to_integer().to_i64()
    } else {
        None
    }
}

impl DimResult {
    pub fn is_exact(&self) -> bool {
        self.status == DimStatus::Exact
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dq(s: &str, t: u64) -> DimQuery {
        DimQuery::new(EtaQuotient::parse(s).unwrap(), t)
    }

    #[test]
    fn dimension_examples() {
        let d = dimension(&dq("1^24", 0));
        assert_eq!((d.status, d.value), (DimStatus::Exact, 2));
        let f = EtaQuotient::parse("1^-15 2^16 7^1").unwrap().with_level(98).unwrap();
        let d = dimension(&DimQuery::new(f, 0));
        assert_eq!((d.status, d.value), (DimStatus::Exact, 8));
        let f = EtaQuotient::from_ints(20, &[(1, -7), (2, 1), (4, 6), (5, 1)]).unwrap();
        let d = dimension(&DimQuery::new(f, 0));
        assert_eq!((d.status, d.value), (DimStatus::Exact, 1));
        assert!(d.value <= d.upper_bound);
    }

    #[test]
    fn cusp_dimension_examples() {
        assert_eq!(dimension(&dq("1^1 2^1 3^1 6^3", 0)).value, 2);
        assert_eq!(dimension_cusp(&dq("1^1 2^1 3^1 6^3", 0)).unwrap(), 1);
        assert_eq!(dimension(&dq("1^-7 2^17 4^-3", 0)).value, 2);
        assert_eq!(dimension_cusp(&dq("1^-7 2^17 4^-3", 0)).unwrap(), 1);
        assert!(matches!(dimension_cusp(&dq("1^2", 0)), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn weight2_examples() {
        let x = CuspOrders::from_ints(11, &[12, -12]).unwrap();
        assert_eq!(weight2_special(&x).unwrap(), 1);
        let x = CuspOrders::from_ints(11, &[120, -120]).unwrap();
        assert_eq!(weight2_special(&x).unwrap(), 2);
        let x = CuspOrders::from_ints(2, &[0, 0]).unwrap();
        assert_eq!(weight2_special(&x).unwrap(), 1);
        for x in [[12, -12], [120, -120], [0, 0], [30, -30]] {
            let c = CuspOrders::from_ints(11, &x).unwrap();
            let g = weight2_via_general(&c);
            assert_eq!(g.value, weight2_special(&c).unwrap());
        }
        assert!(weight2_special(&CuspOrders::from_ints(9, &[0, 0, 0]).unwrap()).is_err());
    }

    #[test]
    fn fast_path_agrees() {
        let lv = Level::new(12);
        for r in [[1i64, -1, -1, 1, 4, -2], [3, 0, 0, 0, 0, 0], [-5, 2, 1, 0, 3, 0]] {
            let f = EtaQuotient::from_vector(12, &r).unwrap();
            let d = dimension(&DimQuery::new(f, 0));
            let (e, v) = dimension_t0_int(&lv, &lv.orders(&r), r.iter().sum());
            assert_eq!((d.is_exact(), d.value), (e, v));
        }
    }

    #[test]
    fn table_rows() {
        let r = table_row(4, 1);
        assert_eq!((r.a, r.v, r.d.clone()), (192, 146, vec![136, 10]));
        let r = table_row(50, 1);
        assert_eq!((r.a, r.v), (48, 4));
        assert_eq!(r.d, vec![0, 0, 4]);
    }
}
