use sato_tate::report::{ROUTE_TOLERANCE, SYMMETRY_TOLERANCE};
use sato_tate::{
    angles, empirical_moment, expsum_exact, expsum_float, family_histogram,
    moment_identity_residual,
};

const PRIMES: [u64; 4] = [53, 101, 151, 199];

#[test]
fn higher_frequency_sums_decay() {
    let (small, large) = (family_histogram(53).unwrap(), family_histogram(199).unwrap());
    for m in 2..=4 {
        let at = |h: &sato_tate::TraceHistogram| {
            expsum_exact(h, m).unwrap().abs().to_f64() / h.v_p() as f64
        };
        assert!(at(&large) < at(&small), "m = {m}");
    }
}

#[test]
fn exact_and_float_routes_agree() {
    for p in PRIMES {
        let hist = family_histogram(p).unwrap();
        let sample = angles(&hist);
        let v = hist.v_p() as f64;
        for m in 1..=10u64 {
            let exact = expsum_exact(&hist, m).unwrap();
            assert!(exact.is_canonical());
            // sum_n e(m x_n) = sum_n e^{2 pi i m x_n}, with real part sum cos(2 m theta_n).
            let (re, im) = expsum_float(&sample, m as i64);
            assert!((re - exact.to_f64()).abs() <= ROUTE_TOLERANCE * v, "p = {p}, m = {m}");
            assert!(im.abs() <= SYMMETRY_TOLERANCE * v, "p = {p}, m = {m}: im = {im}");
        }
    }
}

#[test]
fn exact_outputs_are_canonical() {
    for p in PRIMES {
        let hist = family_histogram(p).unwrap();
        for r in 0..=4 {
            assert!(empirical_moment(&hist, r).is_canonical());
        }
        for m in 1..=10 {
            let res = moment_identity_residual(&hist, m).unwrap();
            assert!(res.is_zero() && res.is_canonical(), "p = {p}, m = {m}");
        }
    }
}
