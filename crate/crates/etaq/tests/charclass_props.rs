mod common;

use common::*;
use etaq::charclass::{
    b_set, chi_eta_petersson, chi_eval, chi_int_small, class_of, classify, newman_equivalent,
    representatives, LiftedMatrix,
};
use etaq::cyclo::UnityRoot;
use etaq::ntheory::{divisors, factorize, gcd, SL2Matrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::rngs::StdRng;
use rand::Rng;

fn lift(g: &SL2Matrix, eps: i8) -> LiftedMatrix {
    LiftedMatrix::new(g.clone(), if eps > 0 { UnityRoot::one() } else { UnityRoot::frac(1, 2) })
}

fn small(g: &SL2Matrix) -> (i64, i64, i64, i64) {
    (g.a.to_i64().unwrap(), g.b.to_i64().unwrap(), g.c.to_i64().unwrap(), g.d.to_i64().unwrap())
}

#[test]
fn multiplier_routes_agree() {
    let mut rng = rng(31);
    for _ in 0..1000 {
        let n = rng.gen_range(1..=60u64);
        let r = random_int_vector(&mut rng, n, 12);
        let f = quotient(n, &r);
        let g = random_gamma0(&mut rng, n, 20);
        // eps = -1 only lives on the cover when some exponent is odd
        let eps: i8 = if f.cover_index() == 2 && rng.gen_bool(0.5) { -1 } else { 1 };
        let direct = chi_eval(&f, &lift(&g, eps)).unwrap();
        let mut product = UnityRoot::one();
        for (&m, &rm) in divisors(n).iter().zip(&r) {
            let mb = BigInt::from(m);
            let gm = SL2Matrix::new(g.a.clone(), &g.b * &mb, &g.c / &mb, g.d.clone()).unwrap();
            product = product * chi_eta_petersson(&gm, eps).pow(rm);
        }
        assert_eq!(direct, product, "N = {n}, r = {r:?}, g = {g}, eps = {eps}");
        let (a, b, c, d) = small(&g);
        assert_eq!(chi_int_small(&divisors(n), &r, a, b, c, d, eps), direct);
    }
}

/// A random element of the trivial-character lattice with zero weight.
fn trivial_shift(rng: &mut StdRng, n: u64) -> Vec<i64> {
    let k = divisors(n).len();
    let mut z: Vec<i64> = (0..k).map(|_| 24 * rng.gen_range(-2..=2)).collect();
    let s: i64 = z.iter().sum();
    z[0] -= s;
    z
}

#[test]
fn representatives_are_pairwise_inequivalent_and_shifts_are_not() {
    let mut rng = rng(32);
    for n in 1..=50u64 {
        let reps = representatives(n, 0);
        for _ in 0..200 {
            let i = rng.gen_range(0..reps.len());
            let j = rng.gen_range(0..reps.len());
            assert_eq!(newman_equivalent(&reps[i], &reps[j], n).unwrap(), i == j, "N = {n}");
            let shifted: Vec<i64> = reps[i].iter().zip(trivial_shift(&mut rng, n)).map(|(a, b)| a + b).collect();
            assert!(newman_equivalent(&reps[i], &shifted, n).unwrap());
        }
    }
}

#[test]
fn equivalent_exponents_give_equal_characters() {
    let mut rng = rng(33);
    for n in 1..=30u64 {
        let reps = representatives(n, 2);
        for _ in 0..4 {
            let mut r = random_int_vector(&mut rng, n, 10);
            let s: i64 = r.iter().sum();
            r[0] += 2 - s;
            let rep = &reps[class_of(n, &r).unwrap()];
            assert!(newman_equivalent(&r, rep, n).unwrap());
            let (f, g) = (quotient(n, &r), quotient(n, rep));
            let divs = divisors(n);
            for _ in 0..50 {
                let m = random_gamma0(&mut rng, n, 10);
                assert_eq!(chi_eval(&f, &lift(&m, 1)).unwrap(), chi_eval(&g, &lift(&m, 1)).unwrap());
                let (a, b, c, d) = small(&m);
                for eps in [1i8, -1] {
                    assert_eq!(
                        chi_int_small(&divs, &r, a, b, c, d, eps),
                        chi_int_small(&divs, rep, a, b, c, d, eps)
                    );
                }
            }
        }
        // distinct classes are told apart by some element
        if reps.len() > 1 {
            let (f, g) = (quotient(n, &reps[0]), quotient(n, &reps[1]));
            let separated = (0..200).any(|_| {
                let m = lift(&random_gamma0(&mut rng, n, 10), 1);
                chi_eval(&f, &m).unwrap() != chi_eval(&g, &m).unwrap()
            });
            assert!(separated, "N = {n}");
        }
    }
}

#[test]
fn class_count_is_ordering_independent() {
    for n in 1..=100u64 {
        let asc = classify(n, None).unwrap();
        let mut rev = b_set(n);
        rev.reverse();
        let desc = classify(n, Some(&rev)).unwrap();
        assert_eq!(asc.count, desc.count, "N = {n}");
    }
}

fn g12(x: u64) -> u64 {
    x.gcd(&12)
}

#[test]
fn delta_sequences_of_prime_power_shapes() {
    for n in 2..=400u64 {
        let f = factorize(n);
        let delta = classify(n, None).unwrap().delta;
        let expect: Option<Vec<u64>> = match f.as_slice() {
            [(p, _)] if *p >= 5 => Some(vec![24 / g12(p - 1)]),
            [(2, 1)] => Some(vec![24]),
            [(2, 2)] => Some(vec![24, 8]),
            [(2, a)] => Some(if a % 2 == 0 { vec![2, 24, 8] } else { vec![2, 8, 24] }),
            [(3, 1)] => Some(vec![12]),
            [(3, a)] => Some(if a % 2 == 0 { vec![12, 3] } else { vec![3, 12] }),
            [(2, 2), (p, _)] if *p >= 5 => Some(vec![2 * g12(p - 1), 8, 24 / g12(p - 1)]),
            [(p1, _), (p2, _)] if *p1 >= 5 => {
                let (a, b) = (g12(p2 - 1), g12((p1 - 1) * (p2 - 1)));
                let inner = gcd((12 * a / b) as i64, *p1 as i64 - *p2 as i64) as u64;
                Some(vec![24 * a / b / inner, 24 / a])
            }
            _ => None,
        };
        if let Some(e) = expect {
            assert_eq!(delta, e, "N = {n}");
        }
    }
    assert_eq!(classify(4, None).unwrap().count, 192);
    assert_eq!(classify(9, None).unwrap().count, 36);
}
