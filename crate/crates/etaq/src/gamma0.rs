//! Invariants and cusps of X0(N).

use num_integer::Integer;
use num_rational::Ratio;
use serde::Serialize;

use crate::ntheory::{divisors, factorize, gcd, kronecker_i64, phi};

/// A cusp a/c of X0(N); `multiplicity_class` is phi(gcd(c, N/c)), the number
/// of inequivalent cusps sharing this denominator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CuspRep {
    pub a: u64,
    pub c: u64,
    pub width: u64,
    pub multiplicity_class: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveInvariants {
    #[serde(rename = "N")]
    pub n: u64,
    pub m: u64,
    pub eps2: u64,
    pub eps3: u64,
    pub eps_inf: u64,
    pub genus: u64,
}

/// Index of Gamma0(N) in SL2(Z).
pub fn index(n: u64) -> u64 {
    factorize(n).iter().fold(n, |acc, &(p, _)| acc / p * (p + 1))
}

/// Cusp count sum_{d|N} phi(gcd(d, N/d)).
pub fn eps_inf(n: u64) -> u64 {
    divisors(n).into_iter().map(|d| phi(d.gcd(&(n / d)))).sum()
}

pub fn eps2(n: u64) -> u64 {
    if n.is_multiple_of(4) {
        return 0;
    }
    factorize(n)
        .iter()
        .map(|&(p, _)| (1 + kronecker_i64(-4, p as i64)) as u64)
        .product()
}

pub fn eps3(n: u64) -> u64 {
    if n.is_multiple_of(9) {
        return 0;
    }
    factorize(n)
        .iter()
        .map(|&(p, _)| (1 + kronecker_i64(-3, p as i64)) as u64)
        .product()
}

pub fn invariants(n: u64) -> CurveInvariants {
    assert!(n >= 1, "level must be positive");
    let (m, e2, e3, ei) = (index(n), eps2(n), eps3(n), eps_inf(n));
    let g = Ratio::from(1i64) + Ratio::new(m as i64, 12)
        - Ratio::new(e2 as i64, 4)
        - Ratio::new(e3 as i64, 3)
        - Ratio::new(ei as i64, 2);
    assert!(g.is_integer() && g >= Ratio::from(0), "genus of X0({n}) came out as {g}");
    CurveInvariants {
        n,
        m,
        eps2: e2,
        eps3: e3,
        eps_inf: ei,
        genus: g.to_integer() as u64,
    }
}

/// Width N/(N, c^2) of any cusp with denominator c.
pub fn width(n: u64, c: u64) -> u64 {
    n / n.gcd(&(c * c))
}

/// One representative a/c per cusp, ordered by c then by the residue of a
/// mod gcd(c, N/c); a is the smallest nonnegative choice.
pub fn cusp_representatives(n: u64) -> Vec<CuspRep> {
    let mut out = Vec::new();
    for c in divisors(n) {
        let g = c.gcd(&(n / c));
        for a0 in 0..g {
            if gcd(a0 as i64, g as i64) != 1 {
                continue;
            }
            let mut a = a0;
            while gcd(a as i64, c as i64) != 1 {
                a += g;
            }
            out.push(CuspRep {
                a,
                c,
                width: width(n, c),
                multiplicity_class: phi(g),
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariant_examples() {
        let i4 = invariants(4);
        assert_eq!((i4.m, i4.eps2, i4.eps3), (6, 0, 0));
        let i1 = invariants(1);
        assert_eq!((i1.m, i1.eps2, i1.eps3, i1.eps_inf, i1.genus), (1, 1, 1, 1, 0));
        let i50 = invariants(50);
        assert_eq!((i50.m, i50.eps2, i50.eps3, i50.eps_inf, i50.genus), (90, 2, 0, 12, 2));
        assert_eq!(invariants(11).genus, 1);
        assert_eq!(invariants(37).genus, 2);
    }

    #[test]
    fn cusp_examples() {
        assert_eq!(cusp_representatives(1).len(), 1);
        let c4 = cusp_representatives(4);
        assert_eq!(c4.iter().map(|c| c.c).collect::<Vec<_>>(), vec![1, 2, 4]);
        assert_eq!(c4.iter().map(|c| c.width).collect::<Vec<_>>(), vec![4, 1, 1]);
        assert_eq!(cusp_representatives(12).len(), 6);
        for r in cusp_representatives(72) {
            assert_eq!(gcd(r.a as i64, r.c as i64), 1);
        }
    }

    #[test]
    fn cusp_counts_and_widths() {
        for n in 1..=400u64 {
            let reps = cusp_representatives(n);
            let inv = invariants(n);
            assert_eq!(reps.len() as u64, inv.eps_inf);
            assert_eq!(reps.iter().map(|r| r.width).sum::<u64>(), inv.m, "N={n}");
        }
    }
}
