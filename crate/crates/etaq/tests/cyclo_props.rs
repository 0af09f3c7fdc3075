mod common;

use common::*;
use etaq::cyclo::{Cyclotomic, UnityRoot};
use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::Rng;

#[test]
fn roots_of_unity_have_the_right_order() {
    for m in 1..=60u64 {
        for j in 0..m as i64 {
            let z = Cyclotomic::root(j, m);
            assert!(!z.is_zero());
            assert_eq!(z.pow(m as u32), Cyclotomic::one(), "e({j}/{m})");
        }
    }
}

#[test]
fn square_roots_square_back() {
    for a in (1..=99u64).step_by(2) {
        let s = Cyclotomic::sqrt_embed(a).unwrap();
        assert_eq!(&s * &s, Cyclotomic::from_int(a as i64), "sqrt {a}");
        assert!((s.to_complex().re - (a as f64).sqrt()).abs() < 1e-9);
    }
    for n in 1..=200u64 {
        let s = Cyclotomic::sqrt_int(n).unwrap();
        assert_eq!(&s * &s, Cyclotomic::from_int(n as i64), "sqrt {n}");
    }
}

fn random_element(rng: &mut StdRng) -> Cyclotomic {
    let m = [3u64, 4, 5, 8, 12, 15, 24][rng.gen_range(0..7)];
    let mut z = Cyclotomic::zero(m);
    for _ in 0..rng.gen_range(1..5) {
        z.add_term(rng.gen_range(0..m), q(rng.gen_range(-5..=5), rng.gen_range(1..4)));
    }
    z
}

#[test]
fn ring_axioms_and_numeric_shadow() {
    let mut rng = rng(3);
    for _ in 0..300 {
        let (a, b, c) = (random_element(&mut rng), random_element(&mut rng), random_element(&mut rng));
        let l = &(&a * &b) * &c;
        let r = &a * &(&b * &c);
        assert_eq!(l, r);
        let d = &(&a * &(&b + &c)) - &(&(&a * &b) + &(&a * &c));
        assert!(d.is_zero());
        assert!(d.to_complex().norm() < 1e-9);
        let diff = &(&a + &b) - &(&b + &a);
        assert!(diff.is_zero());
        let numeric = (a.to_complex() * b.to_complex() - (&a * &b).to_complex()).norm();
        assert!(numeric < 1e-9);
    }
}

#[test]
fn unity_roots_compose() {
    let mut rng = rng(4);
    for _ in 0..500 {
        let (a, b) = (rng.gen_range(-50..50i64), rng.gen_range(1..40i64));
        let (c, d) = (rng.gen_range(-50..50i64), rng.gen_range(1..40i64));
        let u = UnityRoot::frac(a, b) * UnityRoot::frac(c, d);
        let z = &UnityRoot::frac(a, b).to_cyclotomic() * &UnityRoot::frac(c, d).to_cyclotomic();
        assert_eq!(u.to_cyclotomic(), z);
        assert!((u.to_complex() - z.to_complex()).norm() < 1e-9);
    }
    assert_eq!(UnityRoot::frac(1, 2).to_cyclotomic().to_rational(), Some(BigRational::from_integer((-1).into())));
}
