use etaq::eisenstein::*;
use etaq::Error;
use num_rational::Ratio;

fn params() -> Vec<EisParams> {
    [((0, 1), (-3, 2)), ((7, 1), (-4, 1)), ((29, 2), (-22, 3))]
        .iter()
        .map(|&((a, b), (c, d))| EisParams::new(Ratio::new(a, b), Ratio::new(c, d)).unwrap())
        .collect()
}

#[test]
fn deviation_shrinks_with_more_terms() {
    for p in params() {
        let coarse = verify_identity(&p, 8, 100, 1.0).unwrap();
        let fine = verify_identity(&p, 8, 400, 1.0).unwrap();
        assert!(fine.max_err < coarse.max_err, "{p:?}: {} vs {}", fine.max_err, coarse.max_err);
        assert_eq!(fine.rows[0].series_value, 1.0);
        assert_eq!(fine.rows[0].eis_value, 1.0);
    }
}

#[test]
fn eisenstein_side_is_real_and_within_tail_bound_of_series() {
    for p in params() {
        let rep = verify_identity(&p, 6, 400, 1.0).unwrap();
        let coeffs = eis_coeffs(&p, 6, 400).unwrap();
        for (row, (z, tail)) in rep.rows[1..].iter().zip(coeffs) {
            assert!(z.im.abs() <= tail + 1e-9, "{p:?} n = {}: im = {}", row.n, z.im);
            assert!(row.abs_err <= tail, "{p:?} n = {}: {} > {}", row.n, row.abs_err, tail);
        }
    }
}

#[test]
fn window_violations_are_rejected() {
    assert!(matches!(EisParams::new(Ratio::from(0), Ratio::from(-9)), Err(Error::NotApplicable(_))));
    assert!(matches!(EisParams::new(Ratio::from(1), Ratio::from(-1)), Err(Error::NotApplicable(_))));
}
