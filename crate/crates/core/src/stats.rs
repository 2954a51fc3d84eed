//! Statistics of empirical root measures and their comparison against the
//! closed-form limit laws: radial and angular goodness of fit, log-potential
//! profiles, near-origin mass, and the supporting test machinery.

use crate::rootsolver::{eval_log_polar, normalize_arg, LogCoeffPoly, RootSet};
use crate::theory;
use rand::Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("empty sample")]
    EmptySample,
    #[error("mismatched lengths: {log_radii} log-radii vs {args} arguments")]
    LengthMismatch { log_radii: usize, args: usize },
    #[error("non-finite value at index {index}")]
    NonfiniteValue { index: usize },
}

/// A root multiset reduced to the two marginals the limit laws constrain:
/// log-moduli (kept sorted ascending) and arguments in `(-pi, pi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalRootMeasure {
    n: usize,
    log_radii: Vec<f64>,
    args: Vec<f64>,
}

impl EmpiricalRootMeasure {
    /// Builds a measure from raw marginals; log-radii are sorted and
    /// arguments reduced to `(-pi, pi]`. `-inf` log-radii (roots at the
    /// origin) are accepted; NaN and `+inf` are not.
    pub fn new(log_radii: Vec<f64>, args: Vec<f64>) -> Result<Self, StatsError> {
        if log_radii.is_empty() {
            return Err(StatsError::EmptySample);
        }
        if log_radii.len() != args.len() {
            return Err(StatsError::LengthMismatch {
                log_radii: log_radii.len(),
                args: args.len(),
            });
        }
        for (i, &x) in log_radii.iter().enumerate() {
            if x.is_nan() || x == f64::INFINITY {
                return Err(StatsError::NonfiniteValue { index: i });
            }
        }
        for (i, &t) in args.iter().enumerate() {
            if !t.is_finite() {
                return Err(StatsError::NonfiniteValue { index: i });
            }
        }
        let mut log_radii = log_radii;
        log_radii.sort_by(f64::total_cmp);
        let args = args.into_iter().map(normalize_arg).collect();
        Ok(EmpiricalRootMeasure {
            n: log_radii.len(),
            log_radii,
            args,
        })
    }

    pub fn from_root_set(rs: &RootSet) -> Self {
        EmpiricalRootMeasure::new(rs.log_radii(), rs.args())
            .expect("root sets satisfy the measure invariants")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Sorted ascending.
    pub fn log_radii(&self) -> &[f64] {
        &self.log_radii
    }

    pub fn args(&self) -> &[f64] {
        &self.args
    }

    /// Max over arguments of the circular distance from its negation to the
    /// nearest argument; zero when the multiset is closed under negation.
    pub fn conjugate_negation_excess(&self) -> f64 {
        let mut sorted = self.args.clone();
        sorted.sort_by(f64::total_cmp);
        let two_pi = 2.0 * PI;
        let last = sorted[sorted.len() - 1];
        let mut worst = 0.0_f64;
        for &a in &self.args {
            let t = normalize_arg(-a);
            let idx = sorted.partition_point(|&x| x < t);
            let mut best = f64::INFINITY;
            if idx < sorted.len() {
                best = best.min((sorted[idx] - t).abs());
            }
            if idx > 0 {
                best = best.min((t - sorted[idx - 1]).abs());
            }
            best = best.min((sorted[0] + two_pi - t).abs());
            best = best.min((t - (last - two_pi)).abs());
            worst = worst.max(best);
        }
        worst
    }
}

/// Supremum deviations of the empirical CDF of `sorted` from `cdf`, evaluated
/// at the jump points: `(sup ECDF - F, sup F - ECDF)`.
fn ecdf_deviations(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> (f64, f64) {
    let n = sorted.len() as f64;
    let mut d_plus = 0.0_f64;
    let mut d_minus = 0.0_f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        d_plus = d_plus.max((i + 1) as f64 / n - f);
        d_minus = d_minus.max(f - i as f64 / n);
    }
    (d_plus, d_minus)
}

/// Kolmogorov-Smirnov distance between the empirical law of the log-moduli
/// and the limiting log-radial CDF, exact at the jump points.
pub fn ks_log_radius(m: &EmpiricalRootMeasure) -> f64 {
    let (d_plus, d_minus) = ecdf_deviations(&m.log_radii, theory::log_radial_cdf);
    d_plus.max(d_minus)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularStats {
    /// KS distance of `(arg + pi) / (2 pi)` from the uniform law on `[0, 1)`.
    pub ks: f64,
    /// Kuiper statistic `D+ + D-`, invariant under rotation of all roots.
    pub kuiper: f64,
}

/// Goodness of fit of the arguments against the uniform law on the circle.
pub fn ks_angular(m: &EmpiricalRootMeasure) -> AngularStats {
    let mut u: Vec<f64> = m.args.iter().map(|&t| (t + PI) / (2.0 * PI)).collect();
    u.sort_by(f64::total_cmp);
    let (d_plus, d_minus) = ecdf_deviations(&u, |x| x);
    AngularStats {
        ks: d_plus.max(d_minus),
        kuiper: d_plus + d_minus,
    }
}

/// Fraction of roots whose modulus differs from 1 by more than `band`.
pub fn modulus_concentration(m: &EmpiricalRootMeasure, band: f64) -> f64 {
    assert!(band > 0.0 && band.is_finite());
    let hi = (1.0 + band).ln();
    let lo = if band < 1.0 {
        (1.0 - band).ln()
    } else {
        f64::NEG_INFINITY
    };
    let outside = m
        .log_radii
        .iter()
        .filter(|&&x| x > hi || x < lo)
        .count();
    outside as f64 / m.n as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfilePoint {
    pub r: f64,
    /// Mean of `(1/n) ln|P|` over the equally spaced angles; for a periodic
    /// integrand this is the trapezoid-rule circular mean.
    pub circular_mean: f64,
    /// The limiting potential at modulus `r`.
    pub limit_potential: f64,
    /// The per-angle values of `(1/n) ln|P(r e^{i theta_j})|`.
    pub values: Vec<f64>,
}

/// Scaled log-modulus profile of `poly` on circles of the given radii,
/// sampled at `angles_per_radius` equally spaced angles.
pub fn log_potential_profile(
    poly: &LogCoeffPoly,
    radii: &[f64],
    angles_per_radius: usize,
) -> Vec<ProfilePoint> {
    assert!(angles_per_radius >= 1);
    let n = poly.n() as f64;
    radii
        .iter()
        .map(|&r| {
            assert!(r > 0.0 && r.is_finite());
            let log_r = r.ln();
            let mut values = Vec::with_capacity(angles_per_radius);
            for j in 0..angles_per_radius {
                let theta = 2.0 * PI * j as f64 / angles_per_radius as f64;
                let (lp, _) = eval_log_polar(poly, log_r, theta);
                values.push(lp / n);
            }
            let circular_mean = values.iter().sum::<f64>() / angles_per_radius as f64;
            ProfilePoint {
                r,
                circular_mean,
                limit_potential: theory::big_g_radial(r),
                values,
            }
        })
        .collect()
}

/// Largest excess of `(1/n) ln|P|` over the limiting potential on a
/// `radial_points x angular_points` polar grid spanning `[r_min, r_max]`
/// (radii geometrically spaced, endpoints included).
pub fn log_potential_excess_on_grid(
    poly: &LogCoeffPoly,
    r_min: f64,
    r_max: f64,
    radial_points: usize,
    angular_points: usize,
) -> f64 {
    assert!(r_min > 0.0 && r_max >= r_min);
    assert!(radial_points >= 1 && angular_points >= 1);
    let n = poly.n() as f64;
    let mut worst = f64::NEG_INFINITY;
    for i in 0..radial_points {
        let frac = if radial_points == 1 {
            0.0
        } else {
            i as f64 / (radial_points - 1) as f64
        };
        let log_r = r_min.ln() + frac * (r_max.ln() - r_min.ln());
        let limit = theory::big_g_radial(log_r.exp());
        for j in 0..angular_points {
            let theta = 2.0 * PI * j as f64 / angular_points as f64;
            let (lp, _) = eval_log_polar(poly, log_r, theta);
            worst = worst.max(lp / n - limit);
        }
    }
    worst
}

/// Fraction of roots with `|zeta| < delta`.
pub fn near_origin_mass(rs: &RootSet, delta: f64) -> f64 {
    assert!(delta > 0.0 && delta < 1.0);
    let ln_d = delta.ln();
    let inside = rs.roots.iter().filter(|r| r.log_abs < ln_d).count();
    inside as f64 / rs.n as f64
}

/// Width of the angular gap between consecutive root arguments that contains
/// the direction of the positive real axis; `0` if a root lies exactly on it.
pub fn cone_angle_gap(rs: &RootSet) -> f64 {
    let two_pi = 2.0 * PI;
    let mut below = f64::NEG_INFINITY;
    let mut above = f64::INFINITY;
    let mut min_arg = f64::INFINITY;
    let mut max_arg = f64::NEG_INFINITY;
    for r in &rs.roots {
        let a = r.arg;
        if a == 0.0 {
            return 0.0;
        }
        min_arg = min_arg.min(a);
        max_arg = max_arg.max(a);
        if a < 0.0 {
            below = below.max(a);
        } else {
            above = above.min(a);
        }
    }
    let lo = if below == f64::NEG_INFINITY {
        max_arg - two_pi
    } else {
        below
    };
    let hi = if above == f64::INFINITY {
        min_arg + two_pi
    } else {
        above
    };
    hi - lo
}

/// Two-sample Kolmogorov-Smirnov distance, tie-safe.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    assert!(!a.is_empty() && !b.is_empty());
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (m, n) = (a.len(), b.len());
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0_f64;
    while i < m && j < n {
        let x = a[i].min(b[j]);
        while i < m && a[i] <= x {
            i += 1;
        }
        while j < n && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / m as f64 - j as f64 / n as f64).abs());
    }
    d
}

/// Upper tail of the Kolmogorov distribution,
/// `2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2)`, clamped to `[0, 1]`.
/// Below the crossover the same sum is evaluated through its theta
/// transform, `1 - (sqrt(2 pi)/lambda) sum_{j>=1} exp(-(2j-1)^2 pi^2 /
/// (8 lambda^2))`, which needs four terms there; the two branches agree
/// to double precision at the crossover, and each stays monotone where
/// it is used.
pub fn kolmogorov_tail(lambda: f64) -> f64 {
    assert!(lambda >= 0.0);
    if lambda == 0.0 {
        return 1.0;
    }
    if lambda < 1.18 {
        let u = (-PI * PI / (8.0 * lambda * lambda)).exp();
        let cdf = ((2.0 * PI).sqrt() / lambda) * (u + u.powi(9) + u.powi(25) + u.powi(49));
        return (1.0 - cdf).clamp(0.0, 1.0);
    }
    let mut sum = 0.0_f64;
    for j in 1..=100u32 {
        let term = (-2.0 * (j * j) as f64 * lambda * lambda).exp();
        if term < 1e-17 {
            break;
        }
        if j % 2 == 1 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Asymptotic p-value for a two-sample KS distance `d` at sample sizes
/// `m` and `n`.
pub fn ks_two_sample_pvalue(d: f64, m: usize, n: usize) -> f64 {
    assert!(m > 0 && n > 0);
    assert!((0.0..=1.0).contains(&d));
    let eff = (m as f64 * n as f64) / (m + n) as f64;
    kolmogorov_tail(d * eff.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Pearson chi-square goodness of fit of observed `counts` against cell
/// probabilities `probs` (which must sum to 1).
pub fn chi_square_gof(counts: &[u64], probs: &[f64]) -> ChiSquareTest {
    assert_eq!(counts.len(), probs.len());
    assert!(counts.len() >= 2);
    let total: u64 = counts.iter().sum();
    assert!(total > 0);
    let psum: f64 = probs.iter().sum();
    assert!((psum - 1.0).abs() < 1e-9, "cell probabilities must sum to 1");
    let mut statistic = 0.0_f64;
    for (&c, &p) in counts.iter().zip(probs) {
        assert!(p > 0.0);
        let expected = total as f64 * p;
        let d = c as f64 - expected;
        statistic += d * d / expected;
    }
    let dof = counts.len() - 1;
    let dist = ChiSquared::new(dof as f64).expect("dof >= 1");
    ChiSquareTest {
        statistic,
        dof,
        p_value: dist.sf(statistic),
    }
}

/// Draws `n` points i.i.d. from the limit law: log-moduli through the
/// quantile transform, arguments uniform and closed under negation
/// (an odd leftover is placed on the negative real axis).
pub fn synthetic_from_law<R: Rng + ?Sized>(n: usize, rng: &mut R) -> EmpiricalRootMeasure {
    assert!(n >= 1);
    let mut log_radii = Vec::with_capacity(n);
    for _ in 0..n {
        let p = loop {
            let u: f64 = rng.gen();
            if u > 0.0 {
                break u;
            }
        };
        log_radii.push(theory::log_radial_quantile(p).expect("p in (0,1)"));
    }
    let mut args = Vec::with_capacity(n);
    for _ in 0..n / 2 {
        let phi = loop {
            let u: f64 = rng.gen::<f64>() * PI;
            if u > 0.0 {
                break u;
            }
        };
        args.push(phi);
        args.push(-phi);
    }
    if n % 2 == 1 {
        args.push(PI);
    }
    EmpiricalRootMeasure::new(log_radii, args).expect("synthetic draws are finite")
}

/// Median with the even-length convention of averaging the middle pair.
pub fn median(xs: &[f64]) -> f64 {
    assert!(!xs.is_empty());
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        0.5 * (v[mid - 1] + v[mid])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsolver::{find_roots, LogCoeffPoly, SolverConfig};
    use crate::theory;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn measure(log_radii: Vec<f64>, args: Vec<f64>) -> EmpiricalRootMeasure {
        EmpiricalRootMeasure::new(log_radii, args).unwrap()
    }

    fn solve(log_coeffs: &[f64]) -> crate::rootsolver::RootSet {
        let poly = LogCoeffPoly::new(log_coeffs.to_vec()).unwrap();
        find_roots(&poly, &SolverConfig::default()).unwrap()
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert_eq!(
            EmpiricalRootMeasure::new(vec![], vec![]),
            Err(StatsError::EmptySample)
        );
        assert_eq!(
            EmpiricalRootMeasure::new(vec![0.0, 1.0], vec![0.5]),
            Err(StatsError::LengthMismatch { log_radii: 2, args: 1 })
        );
        assert_eq!(
            EmpiricalRootMeasure::new(vec![0.0, f64::NAN], vec![0.1, 0.2]),
            Err(StatsError::NonfiniteValue { index: 1 })
        );
        assert_eq!(
            EmpiricalRootMeasure::new(vec![0.0], vec![f64::INFINITY]),
            Err(StatsError::NonfiniteValue { index: 0 })
        );
    }

    #[test]
    fn construction_sorts_radii_and_normalizes_args() {
        let m = measure(vec![1.0, -2.0, 0.5], vec![7.0, -4.0, 3.0]);
        assert_eq!(m.log_radii(), &[-2.0, 0.5, 1.0]);
        for &a in m.args() {
            assert!(-PI < a && a <= PI);
        }
        assert_eq!(m.n(), 3);
    }

    #[test]
    fn point_mass_on_unit_circle_has_radial_distance_half() {
        let m = measure(vec![0.0; 5], vec![0.3, -0.3, 1.0, -1.0, PI]);
        assert_eq!(ks_log_radius(&m), 0.5);
    }

    #[test]
    fn point_mass_angular_stats_hit_the_frozen_values() {
        let m = measure(vec![0.0; 4], vec![0.0; 4]);
        let a = ks_angular(&m);
        assert_eq!(a.ks, 0.5);
        assert_eq!(a.kuiper, 1.0);
    }

    #[test]
    fn equally_spaced_args_have_stratified_statistics() {
        let n = 40usize;
        let args: Vec<f64> = (0..n)
            .map(|j| -PI + (j as f64 + 0.5) * 2.0 * PI / n as f64)
            .collect();
        let m = measure(vec![0.0; n], args);
        let a = ks_angular(&m);
        assert!(a.kuiper <= 2.0 / n as f64 + 1e-15, "kuiper = {}", a.kuiper);
        assert!((a.ks - 0.5 / n as f64).abs() <= 1e-15);
    }

    #[test]
    fn kuiper_is_rotation_invariant_and_order_blind() {
        let n = 257usize;
        let mut x = 0.17_f64;
        let mut args = Vec::with_capacity(n);
        for _ in 0..n {
            x = (x * 997.0 + 0.123).fract();
            args.push(-PI + 2.0 * PI * x);
        }
        let base = ks_angular(&measure(vec![0.0; n], args.clone()));
        let rotated: Vec<f64> = args.iter().map(|&t| t + 1.2345).collect();
        let rot = ks_angular(&measure(vec![0.0; n], rotated));
        assert!((base.kuiper - rot.kuiper).abs() <= 1e-12);
        let mut shuffled = args;
        shuffled.reverse();
        shuffled.swap(3, 101);
        let perm = ks_angular(&measure(vec![0.0; n], shuffled));
        assert_eq!(base.ks, perm.ks);
        assert_eq!(base.kuiper, perm.kuiper);
    }

    #[test]
    fn synthetic_law_sample_meets_dkw_calibration() {
        let n = 10_000usize;
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        let m = synthetic_from_law(n, &mut rng);
        assert_eq!(m.n(), n);
        assert!(m.conjugate_negation_excess() <= 1e-15);
        let ks = ks_log_radius(&m);
        assert!(ks <= 1.95 / (n as f64).sqrt(), "ks = {ks}");
        let a = ks_angular(&m);
        assert!(a.kuiper <= 0.03, "kuiper = {}", a.kuiper);
    }

    #[test]
    fn band_fraction_matches_radial_cdf_on_synthetic_sample() {
        let n = 10_000usize;
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        let m = synthetic_from_law(n, &mut rng);
        let empirical = modulus_concentration(&m, 0.1);
        let limit =
            1.0 - (theory::mu_radial_cdf(1.1).unwrap() - theory::mu_radial_cdf(0.9).unwrap());
        assert!(
            (empirical - limit).abs() <= 0.02,
            "empirical {empirical} vs limit {limit}"
        );
    }

    #[test]
    fn unit_modulus_set_never_leaves_any_band() {
        let m = measure(vec![0.0; 6], vec![0.5, -0.5, 1.5, -1.5, 2.5, -2.5]);
        for band in [1e-9, 0.1, 2.0] {
            assert_eq!(modulus_concentration(&m, band), 0.0);
        }
    }

    #[test]
    fn degree_one_profile_mean_tracks_log_radius() {
        let poly = LogCoeffPoly::new(vec![0.0, 0.0]).unwrap();
        let rows = log_potential_profile(&poly, &[10.0, 0.1], 64);
        assert!((rows[0].circular_mean - 10.0_f64.ln()).abs() <= 1e-12);
        assert!(rows[1].circular_mean.abs() <= 1e-12);
        assert_eq!(rows[0].limit_potential, theory::big_g_radial(10.0));
        assert_eq!(rows[0].values.len(), 64);
    }

    #[test]
    fn profile_mean_matches_jensen_outside_the_root_annulus() {
        let poly = LogCoeffPoly::new(vec![0.0, 2.5_f64.ln(), 0.0]).unwrap();
        let rows = log_potential_profile(&poly, &[0.25, 4.0], 64);
        assert!(rows[0].circular_mean.abs() <= 1e-12);
        assert!((rows[1].circular_mean - 4.0_f64.ln()).abs() <= 1e-12);
    }

    #[test]
    fn grid_excess_is_tiny_for_a_law_shaped_profile() {
        let poly = LogCoeffPoly::new(vec![0.0, 0.0]).unwrap();
        let excess = log_potential_excess_on_grid(&poly, 0.5, 2.0, 5, 8);
        assert!(excess.is_finite());
        let single = log_potential_excess_on_grid(&poly, 1.0, 1.0, 1, 1);
        assert!((single - (2.0_f64.ln() - theory::big_g_radial(1.0))).abs() <= 1e-12);
    }

    #[test]
    fn near_origin_counts_strictly_inside_roots() {
        let rs = solve(&[0.0, 2.5_f64.ln(), 0.0]);
        assert_eq!(near_origin_mass(&rs, 0.6), 0.5);
        assert_eq!(near_origin_mass(&rs, 0.4), 0.0);
    }

    #[test]
    fn cone_gap_of_kac_roots_straddles_the_axis() {
        let rs = solve(&[0.0; 9]);
        let gap = cone_angle_gap(&rs);
        assert!((gap - 4.0 * PI / 9.0).abs() <= 1e-6, "gap = {gap}");
    }

    #[test]
    fn cone_gap_with_left_half_plane_roots_is_at_least_pi() {
        let rs = solve(&[0.0, 2.0_f64.ln(), 0.0]);
        assert!(cone_angle_gap(&rs) >= PI);
    }

    #[test]
    fn cone_gap_handles_single_root_and_axis_hit() {
        let rs = solve(&[3.0, 0.0]);
        assert!((cone_angle_gap(&rs) - 2.0 * PI).abs() <= 1e-12);
        let mut hit = rs.clone();
        hit.roots[0].arg = 0.0;
        assert_eq!(cone_angle_gap(&hit), 0.0);
    }

    #[test]
    fn two_sample_ks_handles_ties_and_extremes() {
        assert_eq!(ks_two_sample(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]), 0.0);
        assert_eq!(ks_two_sample(&[0.0, 1.0, 2.0], &[5.0, 6.0, 7.0]), 1.0);
        let d = ks_two_sample(&[1.0, 2.0, 3.0], &[1.5, 2.5, 3.5]);
        assert!((d - 1.0 / 3.0).abs() <= 1e-15);
    }

    #[test]
    fn kolmogorov_tail_matches_series_anchor() {
        assert!((kolmogorov_tail(1.0) - 0.2699996716773545).abs() <= 1e-14);
        assert_eq!(kolmogorov_tail(0.0), 1.0);
        assert_eq!(ks_two_sample_pvalue(0.0, 10, 10), 1.0);
        let p = ks_two_sample_pvalue(1.0, 2, 2);
        assert!((p - 0.2699996716773545).abs() <= 1e-14);
    }

    #[test]
    fn chi_square_matches_textbook_tails() {
        let exact = chi_square_gof(&[50, 50], &[0.5, 0.5]);
        assert_eq!(exact.statistic, 0.0);
        assert_eq!(exact.dof, 1);
        assert!((exact.p_value - 1.0).abs() <= 1e-12);

        let skew = chi_square_gof(&[60, 40], &[0.5, 0.5]);
        assert!((skew.statistic - 4.0).abs() <= 1e-12);
        assert!((skew.p_value - 0.045500263896358).abs() <= 1e-10);

        let two_dof = chi_square_gof(&[40, 30, 30], &[1.0 / 3.0; 3]);
        assert_eq!(two_dof.dof, 2);
        assert!(
            (two_dof.p_value - (-0.5 * two_dof.statistic).exp()).abs() <= 1e-12,
            "dof-2 tail is exp(-x/2)"
        );
    }

    #[test]
    fn median_handles_even_and_odd_lengths() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}
