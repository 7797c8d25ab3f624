//! Multi-scan acquisition: repeated independent scans of the FOU separated by
//! a reset time, until the receiver is acquired.

use crate::error::{Error, Result};
use crate::scan_model::{fou_scan_time, single_scan_expected_time, ProbabilityChain, ScanParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultiScanResult {
    /// Expected acquisition time `T_M` (s).
    pub expected_time: f64,
    pub per_scan_success: f64,
    /// Time to scan the full FOU `T_U` (s).
    pub fou_time: f64,
    /// `η = U²/(2κ²)`.
    pub eta: f64,
}

/// Total elapsed time when acquisition happens `t_s` into scan number `n + 1`.
pub fn multiscan_time(n: u64, t_s: f64, scan: &ScanParams) -> f64 {
    n as f64 * (fou_scan_time(scan) + scan.reset_time) + t_s
}

/// Probability that acquisition has completed by time `t`.
///
/// Flat while the terminal is resetting between scans.
pub fn multiscan_cdf(t: f64, scan: &ScanParams, chain: &ProbabilityChain) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let t_u = fou_scan_time(scan);
    let period = t_u + scan.reset_time;
    let n = (t / period).floor();
    let t_s = (t - n * period).min(t_u);
    let rate = 1.0 / scan.time_scale();
    let within = -(-rate * t_s).exp_m1();
    let miss = (1.0 - chain.p_s).powf(n);
    if miss == 0.0 {
        return 1.0;
    }
    1.0 - miss * (1.0 - chain.p_r * within)
}

/// Expected multi-scan acquisition time.
pub fn expected_acquisition_time(scan: &ScanParams, chain: &ProbabilityChain) -> Result<MultiScanResult> {
    if !(chain.p_s > 0.0) {
        return Err(Error::Degenerate {
            op: "expected_acquisition_time",
            reason: "per-scan success probability is zero; the expectation diverges".into(),
        });
    }
    let eta = scan.eta();
    let p_r = chain.p_r;
    // e^η/(e^η−1) written as 1/(1−e^{−η}) to stay finite for large η
    let ratio = -1.0 / (-eta).exp_m1();
    let em1 = eta.exp_m1();
    let expected_time = scan.time_scale() * (ratio * eta * (1.0 - p_r) / p_r + 1.0)
        + scan.reset_time * (ratio * (1.0 - p_r) + p_r / em1) / p_r;
    Ok(MultiScanResult { expected_time, per_scan_success: chain.p_s, fou_time: fou_scan_time(scan), eta })
}

/// Same expectation written as `T_S/P_U + (1/P_S − 1)(T_U + T_a)`.
pub fn expected_acquisition_time_decomposed(scan: &ScanParams, chain: &ProbabilityChain) -> Result<f64> {
    if !(chain.p_s > 0.0) {
        return Err(Error::Degenerate {
            op: "expected_acquisition_time_decomposed",
            reason: "per-scan success probability is zero".into(),
        });
    }
    Ok(single_scan_expected_time(scan) / chain.p_u + (1.0 / chain.p_s - 1.0) * (fou_scan_time(scan) + scan.reset_time))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::link_budget::{coverage_radius, link_constant};
    use crate::numerics::integrate;
    use crate::presets;
    use crate::scan_model::{probability_chain, single_scan_time_pdf};
    use rand::{Rng, SeedableRng};

    const URAD: f64 = 1e-6;
    const MRAD: f64 = 1e-3;

    fn fig4() -> (ScanParams, ProbabilityChain) {
        let scan = presets::reference_scan();
        let b = link_constant(&presets::reference_link(), &presets::turbulence(3).unwrap()).unwrap();
        let g = coverage_radius(scan.omega, b, 4.0 * URAD).unwrap();
        (scan, probability_chain(&scan, g).unwrap())
    }

    #[test]
    fn multiscan_time_examples() {
        let (mut scan, _) = fig4();
        assert_eq!(multiscan_time(0, 42.0, &scan), 42.0);
        // T_U = 331.8 s exactly via the FOU radius that yields it
        scan.fou = (331.8 * scan.speed * scan.pitch / std::f64::consts::PI).sqrt();
        assert!((multiscan_time(2, 50.0, &scan) - 733.6).abs() < 1e-9);
        let tu = fou_scan_time(&scan);
        assert!((multiscan_time(1, tu, &scan) - (2.0 * tu + scan.reset_time)).abs() < 1e-9);
    }

    #[test]
    fn cdf_limits_and_reset_plateau() {
        let (scan, chain) = fig4();
        assert_eq!(multiscan_cdf(0.0, &scan, &chain), 0.0);
        assert!(multiscan_cdf(1e6, &scan, &chain) > 1.0 - 1e-12);
        let tu = fou_scan_time(&scan);
        let a = multiscan_cdf(tu, &scan, &chain);
        let b = multiscan_cdf(tu + 0.5 * scan.reset_time, &scan, &chain);
        let c = multiscan_cdf(tu + scan.reset_time - 1e-9, &scan, &chain);
        assert!((a - b).abs() < 1e-12 && (a - c).abs() < 1e-12);
        // right-continuity at the start of the next scan
        let d = multiscan_cdf(tu + scan.reset_time, &scan, &chain);
        assert!((d - a).abs() < 1e-9);
        // end-of-scan value equals 1-(1-P_S)
        assert!((a - chain.p_s).abs() < 1e-12);
    }

    #[test]
    fn cdf_is_non_decreasing() {
        let (scan, chain) = fig4();
        let mut prev = 0.0;
        for i in 0..20_000 {
            let v = multiscan_cdf(i as f64 * 0.37, &scan, &chain);
            assert!(v >= prev - 1e-15);
            prev = v;
        }
    }

    #[test]
    fn cdf_matches_simulated_acquisitions() {
        let (scan, chain) = fig4();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let tu = fou_scan_time(&scan);
        let n = 100_000;
        let times: Vec<f64> = (0..n)
            .map(|_| {
                let mut elapsed = 0.0;
                loop {
                    let rho = scan.pointing_std * (-2.0 * (1.0 - rng.random::<f64>()).ln()).sqrt();
                    if rho <= scan.fou && rng.random::<f64>() < chain.p_r {
                        return elapsed + crate::scan_model::single_scan_time(rho, &scan);
                    }
                    elapsed += tu + scan.reset_time;
                }
            })
            .collect();
        for t in [200.0, 600.0, 1200.0] {
            let emp = times.iter().filter(|&&x| x <= t).count() as f64 / n as f64;
            assert!((emp - multiscan_cdf(t, &scan, &chain)).abs() < 0.01, "t={t}");
        }
    }

    #[test]
    fn expected_time_anchor() {
        let (scan, chain) = fig4();
        let r = expected_acquisition_time(&scan, &chain).unwrap();
        assert!((r.expected_time - 592.74).abs() / 592.74 < 5e-4, "{}", r.expected_time);
        assert!((r.expected_time - 592.9).abs() / 592.9 < 1e-3);
        assert!((r.eta - 0.845).abs() < 1e-12);
    }

    #[test]
    fn expected_time_single_guaranteed_scan() {
        let (mut scan, mut chain) = fig4();
        scan.reset_time = 0.0;
        scan.fou = 50.0 * MRAD;
        chain.p_r = 1.0;
        chain.p_u = 1.0;
        chain.p_s = 1.0;
        let r = expected_acquisition_time(&scan, &chain).unwrap();
        assert!((r.expected_time - scan.time_scale()).abs() / scan.time_scale() < 1e-12);
    }

    #[test]
    fn expected_time_degenerate() {
        let (scan, mut chain) = fig4();
        chain.p_r = 0.0;
        chain.p_s = 0.0;
        assert!(matches!(expected_acquisition_time(&scan, &chain), Err(Error::Degenerate { .. })));
    }

    #[test]
    fn two_closed_forms_agree() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        for _ in 0..100 {
            let scan = ScanParams {
                omega: 20.0 * URAD,
                pitch: rng.random_range(10.0..150.0) * URAD,
                fou: rng.random_range(0.2..3.0) * MRAD,
                speed: rng.random_range(0.1..2.0) * MRAD,
                reset_time: rng.random_range(0.0..60.0),
                field_prob: rng.random_range(0.3..1.0),
                pointing_std: rng.random_range(0.3..2.0) * MRAD,
            };
            let g = rng.random_range(1.0..60.0) * URAD;
            let chain = probability_chain(&scan, g).unwrap();
            let a = expected_acquisition_time(&scan, &chain).unwrap().expected_time;
            let b = expected_acquisition_time_decomposed(&scan, &chain).unwrap();
            assert!((a - b).abs() / b < 1e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn expectation_equals_truncated_series() {
        // Σ_n ∫_0^{T_U} (n(T_U+T_a) + t) (1−P_S)^n P_R f(t) dt
        let (scan, chain) = fig4();
        let tu = fou_scan_time(&scan);
        let period = tu + scan.reset_time;
        let mass = integrate(|t| single_scan_time_pdf(t, &scan), 0.0, tu, 0.0, 1e-15).unwrap();
        let first = integrate(|t| t * single_scan_time_pdf(t, &scan), 0.0, tu, 0.0, 1e-15).unwrap();
        let mut total = 0.0;
        let mut n = 0u32;
        loop {
            let w = (1.0 - chain.p_s).powi(n as i32);
            if w < 1e-12 {
                break;
            }
            total += w * chain.p_r * (n as f64 * period * mass + first);
            n += 1;
        }
        let closed = expected_acquisition_time(&scan, &chain).unwrap().expected_time;
        assert!((total - closed).abs() / closed < 1e-8, "{total} vs {closed}");
    }

    #[test]
    fn monotone_in_reset_time_and_feedback_probability() {
        let (scan, chain) = fig4();
        let t = |s: &ScanParams, c: &ProbabilityChain| expected_acquisition_time(s, c).unwrap().expected_time;
        let mut prev = 0.0;
        for i in 0..30 {
            let mut s = scan;
            s.reset_time = i as f64 * 2.0;
            let v = t(&s, &chain);
            assert!(v > prev);
            prev = v;
        }
        let mut prev = f64::INFINITY;
        for i in 1..=20 {
            let mut c = chain;
            c.p_r = i as f64 / 20.0;
            c.p_s = c.p_u * c.p_r;
            let v = t(&scan, &c);
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn expected_time_bounded_below_by_single_scan_term() {
        let (scan, chain) = fig4();
        let r = expected_acquisition_time(&scan, &chain).unwrap();
        assert!(r.expected_time >= single_scan_expected_time(&scan) / chain.p_u);
    }
}
