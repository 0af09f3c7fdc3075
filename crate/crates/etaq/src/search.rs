//! Enumeration of admissible eta-quotients.
//!
//! The dimension of M_k(N, chi) at t = 0 depends only on k and on the cusp
//! orders x_c modulo 24, and those residues are constant on a character
//! class. So the search walks the character classes of each weight, keeps the
//! residue vectors whose space has the wanted dimension, and only then lifts
//! them to actual orders x = x_hat + 24 y with sum phi_c x_c = 2mk. The slack
//! sum phi_c y_c equals dim - 1 + genus, which keeps the lift tiny.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::charclass::representatives;
use crate::dims::{dimension, dimension_t0_int, DimQuery, DimStatus};
use crate::etaquot::{EtaQuotient, Level};
use crate::gamma0::invariants;
use crate::ntheory::{lcm, prime_divisors};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AdmissibleType {
    I,
    II,
}

impl AdmissibleType {
    pub fn as_str(self) -> &'static str {
        match self {
            AdmissibleType::I => "I",
            AdmissibleType::II => "II",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TypeFilter {
    pub type_i: bool,
    pub type_ii: bool,
}

impl TypeFilter {
    pub const I: TypeFilter = TypeFilter { type_i: true, type_ii: false };
    pub const II: TypeFilter = TypeFilter { type_i: false, type_ii: true };
    pub const BOTH: TypeFilter = TypeFilter { type_i: true, type_ii: true };
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibleRecord {
    pub f: EtaQuotient,
    /// Twice the weight.
    pub two_k: i64,
    pub level: u64,
    pub x: Vec<i64>,
    pub kind: AdmissibleType,
    pub dim: i64,
    pub n0: u64,
}

impl AdmissibleRecord {
    pub fn weight(&self) -> BigRational {
        BigRational::new(BigInt::from(self.two_k), BigInt::from(2))
    }

    pub fn to_json(&self) -> Value {
        let eta = match self.f.to_string() {
            s if s.is_empty() => "1^0".to_string(),
            s => s,
        };
        json!({
            "N": self.level,
            "eta": eta,
            "k": self.weight().to_string(),
            "x": self.x,
            "type": self.kind.as_str(),
            "dim": self.dim,
            "n0": self.n0,
        })
    }
}

/// a < b sqrt(n) with b > 0, decided on integers.
fn less_than_sqrt(a: &BigRational, b: &BigRational, n: u64) -> bool {
    debug_assert!(b.is_positive());
    if a.is_negative() {
        return true;
    }
    a * a < b * b * BigRational::from_integer(BigInt::from(n))
}

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Twice the weights in K_N = { k in Z/2 : 1/2 <= k < 1 + 12/m + 18/sqrt(N) }.
pub fn k_range(n: u64) -> Vec<i64> {
    let m = invariants(n).m as i64;
    let mut out = Vec::new();
    let mut two_k = 1i64;
    loop {
        // k - 1 - 12/m < 18 / sqrt(N)  <=>  (k - 1 - 12/m) sqrt(N) < 18
        let a = rat(two_k, 2) - BigRational::one() - rat(12, m);
        let inside = a.is_negative() || &a * &a * rat(n as i64, 1) < rat(324, 1);
        if !inside {
            return out;
        }
        out.push(two_k);
        two_k += 1;
    }
}

/// True when ((k-1)N/12 - 3 sqrt(N)/2) prod_{p|N}(1 + 1/p) >= 1, or N > 400.
pub fn not_admissible_bound(n: u64, k: &BigRational) -> bool {
    if n > 400 {
        return true;
    }
    let p = prime_divisors(n)
        .iter()
        .fold(BigRational::one(), |acc, &p| acc * rat(p as i64 + 1, p as i64));
    // (k-1)N P/12 - 1 >= (3P/2) sqrt(N)
    let lhs = (k - BigRational::one()) * rat(n as i64, 12) * &p - BigRational::one();
    !less_than_sqrt(&lhs, &(p * rat(3, 2)), n)
}

/// (k-1)m/12 - eps_inf/2 > 1: every M_k with k >= 2 on such a level has
/// dimension above one.
pub fn exceeds_type_one_support(n: u64, k: &BigRational) -> bool {
    let inv = invariants(n);
    (k - BigRational::one()) * rat(inv.m as i64, 12) - rat(inv.eps_inf as i64, 2)
        > BigRational::one()
}

/// Sum of phi(gcd(c, N/c)) over the cusps with x_c = 0 mod 24.
pub fn n0(f: &EtaQuotient) -> u64 {
    let lv = Level::new(f.level());
    let x = f.cusp_orders().x;
    let div24 = |v: &BigRational| (v / rat(24, 1)).is_integer();
    lv.cusp_mult
        .iter()
        .zip(&x)
        .filter(|(_, v)| div24(v))
        .map(|(mu, _)| *mu)
        .sum()
}

fn n0_of_residues(lv: &Level, xr: &[i64]) -> u64 {
    lv.cusp_mult
        .iter()
        .zip(xr)
        .filter(|(_, r)| **r == 0)
        .map(|(mu, _)| *mu)
        .sum()
}

/// All y >= lower with sum w_i y_i = s.
fn weighted_compositions(w: &[u64], lower: &[u64], s: u64) -> Vec<Vec<u64>> {
    fn go(w: &[u64], lower: &[u64], i: usize, left: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if i == w.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let mut y = lower[i];
        while y * w[i] <= left {
            cur.push(y);
            go(w, lower, i + 1, left - y * w[i], cur, out);
            cur.pop();
            y += 1;
        }
    }
    let base: u64 = w.iter().zip(lower).map(|(a, b)| a * b).sum();
    let mut out = Vec::new();
    if base <= s {
        go(w, lower, 0, s, &mut Vec::new(), &mut out);
    }
    out
}

fn support_lcm(divs: &[u64], r: &[i64]) -> u64 {
    divs.iter()
        .zip(r)
        .filter(|(_, e)| **e != 0)
        .fold(1i64, |acc, (&d, _)| lcm(acc, d as i64)) as u64
}

/// Admissible quotients of minimal level N and weight two_k/2.
fn search_level_weight(lv: &Level, two_k: i64, types: TypeFilter) -> Vec<AdmissibleRecord> {
    let n = lv.n;
    let m = lv.inv.m as i64;
    let residues: BTreeSet<Vec<i64>> = representatives(n, two_k)
        .iter()
        .map(|r| lv.orders(r).iter().map(|v| v.rem_euclid(24)).collect())
        .collect();
    let mut out = Vec::new();
    for xr in residues {
        let (exact, dim) = dimension_t0_int(lv, &xr, two_k);
        if !exact {
            continue;
        }
        let n0 = n0_of_residues(lv, &xr);
        let kind = if types.type_i && dim == 1 {
            AdmissibleType::I
        } else if types.type_ii && two_k > 4 && dim == n0 as i64 + 1 {
            AdmissibleType::II
        } else {
            continue;
        };
        let used: i64 = lv.cusp_mult.iter().zip(&xr).map(|(mu, v)| *mu as i64 * v).sum();
        let slack = two_k * m - used;
        if slack < 0 || slack % 24 != 0 {
            continue;
        }
        // Type II needs x_c > 0 everywhere, so zero residues must be lifted.
        let lower: Vec<u64> = xr
            .iter()
            .map(|&v| u64::from(kind == AdmissibleType::II && v == 0))
            .collect();
        for y in weighted_compositions(&lv.cusp_mult, &lower, (slack / 24) as u64) {
            let x: Vec<i64> = xr.iter().zip(&y).map(|(v, y)| v + 24 * *y as i64).collect();
            let Some(r) = lv.exponents_int(&x) else { continue };
            if support_lcm(&lv.divisors, &r) != n {
                continue;
            }
            let f = EtaQuotient::from_vector(n, &r).expect("divisor vector");
            out.push(AdmissibleRecord { f, two_k, level: n, x, kind, dim, n0 });
        }
    }
    out
}

/// The levels a search visits: type-I-only searches stop at 36, others at 400.
pub fn search_levels(levels: &[u64], types: TypeFilter) -> Vec<u64> {
    let cap = if types.type_ii { 400 } else { 36 };
    let mut v: Vec<u64> = levels.iter().copied().filter(|&n| (1..=cap).contains(&n)).collect();
    v.sort_unstable();
    v.dedup();
    v
}

pub fn search_admissible(levels: &[u64], types: TypeFilter) -> Vec<AdmissibleRecord> {
    let levels = search_levels(levels, types);
    let mut work: Vec<(u64, i64)> = Vec::new();
    for &n in &levels {
        if n == 1 {
            work.push((1, 0));
        }
        for two_k in k_range(n) {
            if !not_admissible_bound(n, &rat(two_k, 2)) {
                work.push((n, two_k));
            }
        }
    }
    let mut out: Vec<AdmissibleRecord> = work
        .par_iter()
        .flat_map_iter(|&(n, two_k)| search_level_weight(&Level::new(n), two_k, types))
        .collect();
    out.sort_by(|a, b| (a.level, a.two_k, &a.x).cmp(&(b.level, b.two_k, &b.x)));
    let before = out.len();
    out.dedup_by(|a, b| a.level == b.level && a.x == b.x);
    assert_eq!(before, out.len(), "search produced a repeated quotient");
    out.par_iter().for_each(|rec| {
        assert!(reverify(rec), "record failed re-verification: {}", rec.f);
    });
    out
}

/// Re-derives a record's claims through the rational dimension path.
pub fn reverify(rec: &AdmissibleRecord) -> bool {
    let f = &rec.f;
    if f.minimal_level() != rec.level || !f.is_holomorphic() {
        return false;
    }
    let k = f.weight();
    if k != rec.weight() {
        return false;
    }
    let d = dimension(&DimQuery::new(f.clone(), 0));
    if d.status != DimStatus::Exact || d.value != rec.dim {
        return false;
    }
    match rec.kind {
        AdmissibleType::I => d.value == 1,
        AdmissibleType::II => {
            k > rat(2, 1)
                && f.cusp_orders().x.iter().all(|v| v.is_positive())
                && d.value == n0(f) as i64 + 1
                && !rec.x.iter().any(|v| v.is_zero())
        }
    }
}

/// Record counts per level, as CSV lines `level,count`.
pub fn summary_csv(records: &[AdmissibleRecord]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["level", "count"]).unwrap();
    let mut i = 0;
    while i < records.len() {
        let n = records[i].level;
        let j = records[i..].iter().take_while(|r| r.level == n).count();
        w.write_record([n.to_string(), j.to_string()]).unwrap();
        i += j;
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

/// The levels of the published type-I census.
pub const CENSUS_LEVELS: [u64; 18] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 13, 14, 15, 17, 19, 21, 27];
