#![allow(dead_code)]

use etaq::etaquot::EtaQuotient;
use etaq::ntheory::{divisors, ext_gcd, SL2Matrix};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn q(p: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(d))
}

/// A random element (a b; c d) of Gamma0(N) with |c| up to N * cbound.
pub fn random_gamma0(rng: &mut StdRng, n: u64, cbound: i64) -> SL2Matrix {
    loop {
        let c = n as i64 * rng.gen_range(-cbound..=cbound);
        let d = rng.gen_range(-200i64..=200);
        let (g, x, y) = ext_gcd(d, c);
        if g != 1 {
            continue;
        }
        // x d + y c = 1, so (x, -y; c, d) has determinant 1; shift a by a multiple of c.
        let t = rng.gen_range(-3i64..=3);
        let (a, b) = (x + t * c, -y + t * d);
        return SL2Matrix::from_i64(a, b, c, d).unwrap();
    }
}

/// Integral exponents over the divisors of N, each in -range..=range.
pub fn random_int_vector(rng: &mut StdRng, n: u64, range: i64) -> Vec<i64> {
    divisors(n).iter().map(|_| rng.gen_range(-range..=range)).collect()
}

pub fn quotient(n: u64, r: &[i64]) -> EtaQuotient {
    EtaQuotient::from_vector(n, r).unwrap()
}

/// Sawtooth Dedekind sum straight from the definition.
pub fn dedekind_by_definition(h: i64, k: i64) -> BigRational {
    let saw = |x: BigRational| {
        if x.is_integer() {
            q(0, 1)
        } else {
            x.clone() - x.floor() - q(1, 2)
        }
    };
    (1..k).map(|r| saw(q(r, k)) * saw(q(h * r, k))).sum()
}
