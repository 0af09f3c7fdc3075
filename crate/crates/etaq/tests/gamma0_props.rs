use etaq::gamma0::{cusp_representatives, invariants, width};
use etaq::ntheory::{divisors, gcd, phi};

fn brute_index(n: u64) -> u64 {
    // |P^1(Z/N)| = #{(c, d) mod N : gcd(c, d, N) = 1} / phi(N)
    let n = n as i64;
    let mut pairs = 0u64;
    for c in 0..n {
        let g = gcd(c, n);
        for d in 0..n {
            if gcd(g, d) == 1 {
                pairs += 1;
            }
        }
    }
    pairs / phi(n as u64)
}

fn count_roots(n: u64, f: impl Fn(u64) -> u64) -> u64 {
    (0..n).filter(|&x| f(x).is_multiple_of(n)).count() as u64
}

#[test]
fn invariants_match_brute_force_below_200() {
    for n in 1..=200u64 {
        let inv = invariants(n);
        assert_eq!(inv.m, brute_index(n), "m at {n}");
        let e2 = if n % 4 == 0 { 0 } else { count_roots(n, |x| x * x + 1) };
        let e3 = if n % 9 == 0 { 0 } else { count_roots(n, |x| x * x + x + 1) };
        assert_eq!((inv.eps2, inv.eps3), (e2, e3), "elliptic points at {n}");
    }
}

#[test]
fn genus_integrality_below_1024() {
    for n in 1..=1023u64 {
        let inv = invariants(n);
        let twelve_g = 12 + inv.m as i64 - 3 * inv.eps2 as i64 - 4 * inv.eps3 as i64 - 6 * inv.eps_inf as i64;
        assert!(twelve_g >= 0 && twelve_g % 12 == 0, "N = {n}");
        assert_eq!(inv.genus as i64, twelve_g / 12, "N = {n}");
        // eps_inf <= m / sqrt(N)
        assert!(inv.eps_inf * inv.eps_inf * n <= inv.m * inv.m, "N = {n}");
    }
}

#[test]
fn cusps_are_distinct_and_widths_sum_to_index() {
    for n in 1..=400u64 {
        let reps = cusp_representatives(n);
        let inv = invariants(n);
        assert_eq!(reps.len() as u64, inv.eps_inf, "N = {n}");
        let total: u64 = reps.iter().map(|r| r.width).sum();
        assert_eq!(total, inv.m, "N = {n}");
        let weighted: u64 = divisors(n)
            .iter()
            .map(|&c| phi(gcd(c as i64, (n / c) as i64) as u64) * width(n, c))
            .sum();
        assert_eq!(weighted, inv.m);
        for (i, a) in reps.iter().enumerate() {
            for b in &reps[i + 1..] {
                let g = gcd(a.c as i64, (n / a.c) as i64) as u64;
                assert!(a.c != b.c || a.a % g != b.a % g, "N = {n}: {a:?} ~ {b:?}");
            }
        }
    }
}
