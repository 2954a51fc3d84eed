//! Closed-form limit laws for the coefficient models.
//!
//! Everything here is deterministic and stateless: the rate profile `psi`
//! and its tilted form, the limit potential `G`, the limit root measure
//! (planar density, radial CDF, log-radial marginal with quantiles), the
//! finite-n expected profile, the auxiliary profile `Phi`, and the endpoint
//! criterion quantity. All potentials are in natural log throughout; any
//! display conversion happens in the CLI, never here.
//!
//! Functions are generic over [`Float`] so the scalar is a compile-time
//! choice; the harness instantiates them at [`crate::Real`].

use crate::sampler::ModelCoeffs;
use num_complex::Complex;
use num_traits::{Float, FloatConst};
use thiserror::Error;

/// Domain violations of the closed-form functions.
#[derive(Debug, Error, PartialEq)]
pub enum TheoryError {
    #[error("psi requires |t| < 1/2, got t = {0}")]
    PsiDomain(f64),
    #[error("argument must be nonzero")]
    ZeroArgument,
    #[error("radius must be positive, got {0}")]
    NonpositiveRadius(f64),
    #[error("quantile level must lie in (0, 1), got {0}")]
    QuantileDomain(f64),
    #[error("delta must lie in (0, 1), got {0}")]
    DeltaDomain(f64),
    #[error("phi requires 1 + t/r > 0, got t = {t}, r = {r}")]
    PhiDomain { t: f64, r: f64 },
    #[error("offset {k} out of range {lo}..={hi}")]
    OffsetOutOfRange { k: i64, lo: i64, hi: i64 },
    #[error("log-coefficient {0} is not finite")]
    NonfiniteLogCoeff(usize),
}

fn c<T: Float>(x: f64) -> T {
    T::from(x).expect("constant representable in the scalar type")
}

fn as_f64<T: Float>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Rate profile `psi(t) = -4|t| - 2 ln(1 - 2|t|)` on `|t| < 1/2`.
///
/// Even, nonnegative, zero only at `t = 0`, divergent at the endpoints.
pub fn psi<T: Float>(t: T) -> Result<T, TheoryError> {
    let a = t.abs();
    if a >= c(0.5) {
        return Err(TheoryError::PsiDomain(as_f64(t)));
    }
    Ok(-c::<T>(4.0) * a - c::<T>(2.0) * (T::one() - c::<T>(2.0) * a).ln())
}

/// Tilted profile `psi(t; z) = psi(t) - (1/2 + t) ln|z|`.
pub fn psi_tilted<T: Float>(t: T, z: Complex<T>) -> Result<T, TheoryError> {
    if z.re.is_zero() && z.im.is_zero() {
        return Err(TheoryError::ZeroArgument);
    }
    Ok(psi(t)? - (c::<T>(0.5) + t) * z.norm().ln())
}

/// Limit potential as a function of the modulus `r = |z|`.
///
/// `2 ln(4 / (4 - ln r))` for `r <= 1` and `ln r + 2 ln(4 / (4 + ln r))`
/// for `r >= 1`; the branches agree at `r = 1` with value 0 and matching
/// one-sided radial derivatives `1/2`. `r = 0` gives negative infinity.
pub fn big_g_radial<T: Float>(r: T) -> T {
    if r <= T::zero() {
        return T::neg_infinity();
    }
    let lr = r.ln();
    let four = c::<T>(4.0);
    if lr <= T::zero() {
        c::<T>(2.0) * (four / (four - lr)).ln()
    } else {
        lr + c::<T>(2.0) * (four / (four + lr)).ln()
    }
}

/// Limit potential `G(z)`; depends on `z` only through `|z|`.
pub fn big_g<T: Float>(z: Complex<T>) -> T {
    big_g_radial(z.norm())
}

/// Radial derivative of the limit potential away from `r = 1`.
///
/// `2 / (r (4 - ln r))` for `r < 1`, `(ln r + 2) / (r (4 + ln r))` for
/// `r > 1`; both one-sided limits at `r = 1` equal `1/2`.
pub fn big_g_radial_derivative<T: Float>(r: T) -> Result<T, TheoryError> {
    if r <= T::zero() {
        return Err(TheoryError::NonpositiveRadius(as_f64(r)));
    }
    let lr = r.ln();
    let four = c::<T>(4.0);
    Ok(if lr <= T::zero() {
        c::<T>(2.0) / (r * (four - lr))
    } else {
        (lr + c::<T>(2.0)) / (r * (four + lr))
    })
}

/// Planar density of the limit root measure at `z != 0`:
/// `1 / (pi |z|^2 (4 + |ln|z||)^2)`.
pub fn mu_density<T: Float + FloatConst>(z: Complex<T>) -> Result<T, TheoryError> {
    if z.re.is_zero() && z.im.is_zero() {
        return Err(TheoryError::ZeroArgument);
    }
    mu_density_radial(z.norm())
}

/// Planar density as a function of the modulus.
pub fn mu_density_radial<T: Float + FloatConst>(r: T) -> Result<T, TheoryError> {
    if r <= T::zero() {
        return Err(TheoryError::NonpositiveRadius(as_f64(r)));
    }
    let denom = T::PI() * r * r * (c::<T>(4.0) + r.ln().abs()).powi(2);
    Ok(denom.recip())
}

/// Mass of the limit measure inside the disc of radius `r`:
/// `2 / (4 - ln r)` for `r <= 1`, `(ln r + 2) / (4 + ln r)` for `r >= 1`.
pub fn mu_radial_cdf<T: Float>(r: T) -> Result<T, TheoryError> {
    if r <= T::zero() {
        return Err(TheoryError::NonpositiveRadius(as_f64(r)));
    }
    let lr = r.ln();
    let four = c::<T>(4.0);
    Ok(if lr <= T::zero() {
        c::<T>(2.0) / (four - lr)
    } else {
        (lr + c::<T>(2.0)) / (four + lr)
    })
}

/// Log-radial density `2 / (4 + |x|)^2`, the law of `ln|zeta|`.
pub fn log_radial_density<T: Float>(x: T) -> T {
    c::<T>(2.0) / (c::<T>(4.0) + x.abs()).powi(2)
}

/// Log-radial CDF: `2 / (4 - x)` for `x <= 0`, `1 - 2 / (4 + x)` for
/// `x >= 0`. Satisfies `log_radial_cdf(ln r) = mu_radial_cdf(r)`.
pub fn log_radial_cdf<T: Float>(x: T) -> T {
    let four = c::<T>(4.0);
    if x <= T::zero() {
        c::<T>(2.0) / (four - x)
    } else {
        T::one() - c::<T>(2.0) / (four + x)
    }
}

/// Closed-form inverse of [`log_radial_cdf`] on `p` in `(0, 1)`.
pub fn log_radial_quantile<T: Float>(p: T) -> Result<T, TheoryError> {
    if !(p > T::zero() && p < T::one()) {
        return Err(TheoryError::QuantileDomain(as_f64(p)));
    }
    let four = c::<T>(4.0);
    let two = c::<T>(2.0);
    Ok(if p <= c(0.5) { four - two / p } else { two / (T::one() - p) - four })
}

/// The limit root measure exposed as one value type.
///
/// The law is fixed (no parameters); methods delegate to the free
/// functions above.
#[derive(Debug, Clone, Copy, Default)]
pub struct RadialLaw;

impl RadialLaw {
    pub fn density_at<T: Float + FloatConst>(&self, z: Complex<T>) -> Result<T, TheoryError> {
        mu_density(z)
    }

    pub fn radial_cdf<T: Float>(&self, r: T) -> Result<T, TheoryError> {
        mu_radial_cdf(r)
    }

    pub fn log_radial_density<T: Float>(&self, x: T) -> T {
        log_radial_density(x)
    }

    /// Quantile of the modulus: `exp` of the log-radial quantile.
    pub fn radial_quantile<T: Float>(&self, p: T) -> Result<T, TheoryError> {
        Ok(log_radial_quantile(p)?.exp())
    }
}

/// Triangular number `T_r = r (r + 1) / 2` as a float.
fn tri(r: i64) -> f64 {
    (r as f64) * (r as f64 + 1.0) / 2.0
}

/// Finite-n expected profile `E[W_{R+k} | R]` at one offset.
///
/// For `k = -l <= 0` this is `1/(n+1) + sum_{s=1..l} s / T_{R-l+s}`; for
/// `k >= 0` the mirror sum with `n - R` in place of `R`. Offsets must lie
/// in `-R ..= n-R`.
pub fn psi_n_profile(n: usize, r_peak: usize, k: i64) -> Result<f64, TheoryError> {
    let lo = -(r_peak as i64);
    let hi = (n - r_peak) as i64;
    if k < lo || k > hi {
        return Err(TheoryError::OffsetOutOfRange { k, lo, hi });
    }
    let base = 1.0 / (n as f64 + 1.0);
    let (l, side) = if k <= 0 { (-k, r_peak as i64) } else { (k, (n - r_peak) as i64) };
    let sum: f64 = (1..=l).map(|s| s as f64 / tri(side - l + s)).sum();
    Ok(base + sum)
}

/// Full finite-n expected profile, indexed by sequence position `0..=n`.
///
/// Equals `psi_n_profile` at every offset but runs in O(n) overall: on each
/// side the sums `A_l = sum s/T_{side-l+s}` and `B_l = sum 1/T_{side-l+s}`
/// obey `A_{l+1} = A_l + B_l + 1/T_{side-l}`, `B_{l+1} = B_l + 1/T_{side-l}`.
pub fn psi_n_sweep(n: usize, r_peak: usize) -> Vec<f64> {
    let base = 1.0 / (n as f64 + 1.0);
    let mut out = vec![0.0f64; n + 1];
    out[r_peak] = base;
    for (side, positive) in [(r_peak as i64, false), ((n - r_peak) as i64, true)] {
        let mut a = 0.0f64;
        let mut b = 0.0f64;
        for l in 0..side {
            let step = 1.0 / tri(side - l);
            a += b + step;
            b += step;
            let idx = if positive {
                r_peak + (l + 1) as usize
            } else {
                r_peak - (l + 1) as usize
            };
            out[idx] = base + a;
        }
    }
    out
}

/// Auxiliary profile `Phi(t, r) = -2 ln(1 + t/r) + 2 t / r`.
///
/// Nonnegative on its domain; `Phi(t, 1/2) = psi(t)` for `t <= 0`.
pub fn phi_profile<T: Float>(t: T, r: T) -> Result<T, TheoryError> {
    if r <= T::zero() {
        return Err(TheoryError::NonpositiveRadius(as_f64(r)));
    }
    let u = t / r;
    if T::one() + u <= T::zero() {
        return Err(TheoryError::PhiDomain { t: as_f64(t), r: as_f64(r) });
    }
    Ok(-c::<T>(2.0) * (T::one() + u).ln() + c::<T>(2.0) * u)
}

/// Endpoint criterion quantity
/// `(1/n) (ln sum_k e^{L_k} - (L_0 + L_n) / 2)`, by max-shifted
/// log-sum-exp so extreme log-coefficients never overflow.
pub fn hughes_from_logs<T: Float>(log_coeffs: &[T]) -> Result<T, TheoryError> {
    let n = log_coeffs.len() - 1;
    assert!(n >= 1, "need degree at least 1");
    for (k, l) in log_coeffs.iter().enumerate() {
        if !l.is_finite() {
            return Err(TheoryError::NonfiniteLogCoeff(k));
        }
    }
    let m = log_coeffs.iter().cloned().fold(T::neg_infinity(), T::max);
    let sum = log_coeffs
        .iter()
        .fold(T::zero(), |acc, &l| acc + (l - m).exp());
    let lse = m + sum.ln();
    let ends = (log_coeffs[0] + log_coeffs[n]) / c(2.0);
    Ok((lse - ends) / c(n as f64))
}

/// [`hughes_from_logs`] applied to one model instance.
pub fn hughes_quantity(coeffs: &ModelCoeffs) -> Result<f64, TheoryError> {
    hughes_from_logs(&coeffs.log_coeffs)
}

/// Theoretical near-origin envelope `(v(sqrt(delta)) - v(delta)) / ln(1/sqrt(delta))`
/// with `v` the radial limit potential; bounds the limiting root fraction
/// in the disc of radius `delta`.
pub fn near_origin_envelope(delta: f64) -> Result<f64, TheoryError> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(TheoryError::DeltaDomain(delta));
    }
    let half_log = -delta.sqrt().ln();
    Ok((big_g_radial(delta.sqrt()) - big_g_radial(delta)) / half_log)
}

// 15-point Kronrod rule with embedded 7-point Gauss rule on [-1, 1]
// (positive abscissae; the rule is symmetric).
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let fc = f(mid);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let dx = half * XGK[i];
        let fsum = f(mid - dx) + f(mid + dx);
        kron += WGK[i] * fsum;
        if i % 2 == 1 {
            gauss += WG[i / 2] * fsum;
        }
    }
    (kron * half, (kron - gauss) * half)
}

/// Adaptive Gauss-Kronrod 15(7) quadrature of `f` on `[a, b]`.
///
/// Bisects any panel whose embedded-rule discrepancy exceeds its share of
/// `tol`; the recursion depth is capped, so a pathological integrand
/// degrades accuracy instead of overflowing the stack.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn recurse<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let (value, err) = gk15(f, a, b);
        if err.abs() <= tol || depth >= 60 {
            return value;
        }
        let mid = 0.5 * (a + b);
        recurse(f, a, mid, tol * 0.5, depth + 1) + recurse(f, mid, b, tol * 0.5, depth + 1)
    }
    recurse(f, a, b, tol, 0)
}

/// Total mass of the limit measure via the log-radius substitution
/// `u = ln r`, which turns the planar integral into
/// `int 2 / (4 + |u|)^2 du`; the tails beyond `|u| = U` contribute exactly
/// `2 / (4 + U)` each and the body is integrated numerically.
pub fn mu_total_mass_quadrature(tol: f64) -> f64 {
    let cut = 1.0e9;
    let body = integrate(&|u: f64| log_radial_density(u), -cut, cut, tol);
    body + 2.0 * 2.0 / (4.0 + cut)
}

/// Mass of the limit measure in the disc of radius `r`, by quadrature of
/// the planar density in polar coordinates under `u = ln r`; the lower
/// tail below `u = -U` contributes exactly `2 / (4 + U)`.
pub fn mu_disk_mass_quadrature(r: f64, tol: f64) -> Result<f64, TheoryError> {
    if r <= 0.0 {
        return Err(TheoryError::NonpositiveRadius(r));
    }
    let cut = 1.0e9;
    // 2 pi r^2 * density(e^u) du = log-radial density; integrate it directly.
    let body = integrate(&|u: f64| log_radial_density(u), -cut, r.ln(), tol);
    Ok(body + 2.0 / (4.0 + cut))
}

/// Golden-section search for the maximum of a unimodal function on `[a, b]`.
///
/// Returns the maximizer and the value; used as an independent numerical
/// check against closed-form suprema.
pub fn golden_section_max<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = 0.5 * (5.0f64.sqrt() - 1.0);
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    const LN2: f64 = std::f64::consts::LN_2;
    const PI: f64 = std::f64::consts::PI;

    #[test]
    fn psi_matches_hand_values() {
        assert_eq!(psi(0.0f64).unwrap(), 0.0);
        assert_relative_eq!(psi(0.25f64).unwrap(), 2.0 * LN2 - 1.0, max_relative = 1e-15);
        assert_eq!(psi(0.25f64).unwrap(), psi(-0.25f64).unwrap());
        assert!(matches!(psi(0.5f64), Err(TheoryError::PsiDomain(_))));
        assert!(matches!(psi(-0.7f64), Err(TheoryError::PsiDomain(_))));
    }

    #[test]
    fn psi_is_nonnegative_and_vanishes_only_at_zero() {
        for i in 1..100 {
            let t = 0.4999 * (i as f64) / 100.0;
            assert!(psi(t).unwrap() > 0.0);
            assert!(psi(-t).unwrap() > 0.0);
        }
    }

    #[test]
    fn psi_tilted_hand_values() {
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(psi_tilted(0.0, one).unwrap(), 0.0);
        let e = Complex64::new(std::f64::consts::E, 0.0);
        assert_relative_eq!(psi_tilted(0.0, e).unwrap(), -0.5, max_relative = 1e-15);
        assert!(matches!(
            psi_tilted(0.0, Complex64::new(0.0, 0.0)),
            Err(TheoryError::ZeroArgument)
        ));
    }

    #[test]
    fn tilted_supremum_reproduces_the_potential() {
        // sup_t -psi(t; z) = G(z); checked by golden-section search.
        for lz in [-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0] {
            let z = Complex64::new(lz.exp(), 0.0);
            let (_, sup) = golden_section_max(
                |t| -psi_tilted(t, z).unwrap(),
                -0.499999,
                0.499999,
                1e-12,
            );
            assert!(
                (sup - big_g(z)).abs() < 1e-8,
                "|z| = e^{lz}: sup {sup} vs G {}",
                big_g(z)
            );
        }
    }

    #[test]
    fn tilted_maximizer_matches_closed_form() {
        // Stationarity of psi(t; z) in t > 0 gives t* = L / (2 (4 + L)) for
        // L = ln|z| > 0, and by evenness t* = L / (2 (4 - L)) for L < 0.
        for lz in [-3.0, -1.0, 1.0, 3.0] {
            let z = Complex64::new(lz.exp(), 0.0);
            let expected = if lz > 0.0 { lz / (2.0 * (4.0 + lz)) } else { lz / (2.0 * (4.0 - lz)) };
            let (t_star, _) = golden_section_max(
                |t| -psi_tilted(t, z).unwrap(),
                -0.499999,
                0.499999,
                1e-12,
            );
            assert!((t_star - expected).abs() < 1e-6, "lz = {lz}: {t_star} vs {expected}");
        }
    }

    #[test]
    fn potential_hand_values() {
        assert_eq!(big_g(Complex64::new(1.0, 0.0)), 0.0);
        assert_relative_eq!(big_g_radial((-4.0f64).exp()), -2.0 * LN2, max_relative = 1e-15);
        assert_relative_eq!(big_g_radial(4.0f64.exp()), 4.0 - 2.0 * LN2, max_relative = 1e-15);
        assert_eq!(big_g_radial(0.0), f64::NEG_INFINITY);
        assert_eq!(big_g(Complex64::new(0.0, 0.0)), f64::NEG_INFINITY);
    }

    #[test]
    fn potential_is_c1_across_the_unit_circle() {
        let h = 1e-7;
        let left = (big_g_radial(1.0) - big_g_radial(1.0 - h)) / h;
        let right = (big_g_radial(1.0 + h) - big_g_radial(1.0)) / h;
        assert!((left - 0.5).abs() < 1e-6);
        assert!((right - 0.5).abs() < 1e-6);
    }

    #[test]
    fn potential_radial_derivative_matches_finite_differences() {
        let h = 1e-5;
        for r in [0.05, 0.3, 0.9, 1.5, 3.0, 40.0] {
            let fd = (big_g_radial(r + h) - big_g_radial(r - h)) / (2.0 * h);
            let closed = big_g_radial_derivative(r).unwrap();
            assert!((fd - closed).abs() < 1e-6, "r = {r}: {fd} vs {closed}");
        }
    }

    #[test]
    fn density_hand_values_and_symmetry() {
        let on_circle = mu_density(Complex64::new(0.0, 1.0)).unwrap();
        assert_relative_eq!(on_circle, 1.0 / (16.0 * PI), max_relative = 1e-15);
        let z = Complex64::from_polar(0.37, 1.1);
        let w = Complex64::from_polar(0.37, -2.6);
        assert_relative_eq!(mu_density(z).unwrap(), mu_density(w).unwrap(), max_relative = 1e-14);
        assert!(matches!(mu_density(Complex64::new(0.0, 0.0)), Err(TheoryError::ZeroArgument)));
    }

    #[test]
    fn radial_cdf_hand_values() {
        assert_eq!(mu_radial_cdf(1.0f64).unwrap(), 0.5);
        assert_relative_eq!(mu_radial_cdf((-4.0f64).exp()).unwrap(), 0.25, max_relative = 1e-15);
        assert_relative_eq!(mu_radial_cdf(4.0f64.exp()).unwrap(), 0.75, max_relative = 1e-15);
        assert!(mu_radial_cdf(1e-300f64).unwrap() < 1e-2);
        assert!(mu_radial_cdf(1e300f64).unwrap() > 0.99);
    }

    #[test]
    fn log_radial_marginal_is_consistent() {
        assert_eq!(log_radial_density(0.0f64), 0.125);
        assert_eq!(log_radial_cdf(0.0f64), 0.5);
        assert_relative_eq!(log_radial_quantile(0.75f64).unwrap(), 4.0, max_relative = 1e-15);
        for x in [-30.0, -2.5, -0.1, 0.0, 0.4, 7.0, 1e4] {
            assert_relative_eq!(
                log_radial_cdf(-x),
                1.0 - log_radial_cdf(x),
                max_relative = 1e-14
            );
            let r: f64 = x.exp();
            if r > 0.0 && r.is_finite() {
                assert_relative_eq!(
                    log_radial_cdf(x),
                    mu_radial_cdf(r).unwrap(),
                    max_relative = 1e-12
                );
            }
        }
        for p in [1e-6, 0.2, 0.5, 0.9, 1.0 - 1e-9] {
            let x = log_radial_quantile(p).unwrap();
            assert_relative_eq!(log_radial_cdf(x), p, max_relative = 1e-9);
        }
        assert!(log_radial_quantile(0.0f64).is_err());
        assert!(log_radial_quantile(1.0f64).is_err());
    }

    #[test]
    fn radial_law_type_delegates() {
        let law = RadialLaw;
        assert_eq!(law.radial_cdf(1.0f64).unwrap(), 0.5);
        assert_eq!(law.log_radial_density(0.0f64), 0.125);
        assert_relative_eq!(law.radial_quantile(0.75f64).unwrap(), 4.0f64.exp());
        assert!(law.density_at(Complex64::new(2.0, 0.0)).unwrap() > 0.0);
    }

    #[test]
    fn profile_hand_values() {
        assert_eq!(psi_n_profile(10, 4, 0).unwrap(), 1.0 / 11.0);
        // 1/5 + 1/T_2 = 1/5 + 1/3.
        assert_relative_eq!(
            psi_n_profile(4, 2, -1).unwrap(),
            8.0 / 15.0,
            max_relative = 1e-15
        );
        assert!(matches!(
            psi_n_profile(4, 2, 3),
            Err(TheoryError::OffsetOutOfRange { .. })
        ));
        assert!(matches!(
            psi_n_profile(4, 2, -3),
            Err(TheoryError::OffsetOutOfRange { .. })
        ));
    }

    #[test]
    fn profile_sweep_matches_direct_sums() {
        for (n, r) in [(9usize, 4usize), (12, 0), (12, 12), (101, 33)] {
            let sweep = psi_n_sweep(n, r);
            for i in 0..=n {
                let k = i as i64 - r as i64;
                let direct = psi_n_profile(n, r, k).unwrap();
                assert_relative_eq!(sweep[i], direct, max_relative = 1e-13);
            }
        }
    }

    #[test]
    fn profile_converges_to_psi_at_rate_one_over_n() {
        let sup_gap = |n: usize| -> f64 {
            let r = n / 2;
            let sweep = psi_n_sweep(n, r);
            let mut worst = 0.0f64;
            let lo = (-(0.4 * n as f64)).round() as i64;
            let hi = (0.4 * n as f64).round() as i64;
            for k in lo..=hi {
                let t = k as f64 / n as f64;
                let gap = (sweep[(r as i64 + k) as usize] - psi(t).unwrap()).abs();
                worst = worst.max(gap);
            }
            worst
        };
        let g1 = sup_gap(2000);
        let g2 = sup_gap(4000);
        let ratio = g2 / g1;
        assert!((0.375..=0.625).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn phi_hand_values() {
        assert_eq!(phi_profile(0.0f64, 0.5).unwrap(), 0.0);
        assert_relative_eq!(
            phi_profile(-0.25f64, 0.5).unwrap(),
            psi(0.25f64).unwrap(),
            max_relative = 1e-15
        );
        for (t, r) in [(-0.3, 0.7), (0.9, 0.2), (5.0, 1.0)] {
            assert!(phi_profile(t, r).unwrap() >= 0.0);
        }
        assert!(matches!(
            phi_profile(-1.0f64, 0.5),
            Err(TheoryError::PhiDomain { .. })
        ));
    }

    #[test]
    fn phi_equals_psi_on_the_negative_side() {
        for i in 1..50 {
            let t = -0.49 * (i as f64) / 50.0;
            assert_relative_eq!(
                phi_profile(t, 0.5).unwrap(),
                psi(t).unwrap(),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn hughes_hand_values() {
        let flat = vec![0.0f64; 8];
        assert_relative_eq!(
            hughes_from_logs(&flat).unwrap(),
            (8.0f64).ln() / 7.0,
            max_relative = 1e-14
        );
        for t in [0.0, 0.5, 3.0, 40.0] {
            let l = vec![0.0, -t, 0.0];
            assert_relative_eq!(
                hughes_from_logs(&l).unwrap(),
                0.5 * (2.0 + (-t).exp()).ln(),
                max_relative = 1e-14
            );
        }
        assert!(matches!(
            hughes_from_logs(&[0.0, f64::NEG_INFINITY, 0.0]),
            Err(TheoryError::NonfiniteLogCoeff(1))
        ));
    }

    #[test]
    fn hughes_survives_extreme_log_coefficients() {
        // Beta-scale inputs would overflow exp; the shifted form must not.
        let l = vec![-9000.0, -4000.0, -3500.0, -4200.0, -9500.0];
        let v = hughes_from_logs(&l).unwrap();
        assert!(v.is_finite() && v > 0.0);
    }

    #[test]
    fn quadrature_integrates_polynomials_exactly_enough() {
        let v = integrate(&|x: f64| x * x, 0.0, 1.0, 1e-12);
        assert_relative_eq!(v, 1.0 / 3.0, max_relative = 1e-13);
        let w = integrate(&|x: f64| x.sin(), 0.0, PI, 1e-12);
        assert_relative_eq!(w, 2.0, max_relative = 1e-12);
    }

    #[test]
    fn limit_measure_has_unit_mass() {
        let mass = mu_total_mass_quadrature(1e-12);
        assert!((mass - 1.0).abs() < 1e-9, "mass {mass}");
    }

    #[test]
    fn disc_mass_quadrature_matches_the_cdf() {
        for r in [0.01, 0.5, 1.0, 2.0, 100.0] {
            let q = mu_disk_mass_quadrature(r, 1e-12).unwrap();
            let c = mu_radial_cdf(r).unwrap();
            assert!((q - c).abs() < 1e-8, "r = {r}: {q} vs {c}");
        }
    }

    #[test]
    fn laplacian_of_potential_recovers_the_density() {
        // Five-point stencil at mesh 1e-4, off the unit circle where G is
        // smooth; (1/2pi) Lap G should equal the planar density.
        let h = 1e-4;
        for (x, y) in [(0.5, 0.0), (0.4, 0.9), (-1.2, 0.7), (2.0, -1.0)] {
            let g = |dx: f64, dy: f64| big_g(Complex64::new(x + dx, y + dy));
            let lap =
                (g(h, 0.0) + g(-h, 0.0) + g(0.0, h) + g(0.0, -h) - 4.0 * g(0.0, 0.0)) / (h * h);
            let dens = mu_density(Complex64::new(x, y)).unwrap();
            let rel = (lap / (2.0 * PI) - dens).abs() / dens;
            assert!(rel < 1e-4, "at ({x},{y}): rel {rel}");
        }
    }

    #[test]
    fn near_origin_envelope_hand_value() {
        let delta = 1e-4f64;
        let expected = (big_g_radial(1e-2) - big_g_radial(1e-4)) / (1e2f64).ln();
        assert_relative_eq!(near_origin_envelope(delta).unwrap(), expected, max_relative = 1e-14);
        assert!(near_origin_envelope(0.0).is_err());
        assert!(near_origin_envelope(1.0).is_err());
    }

    #[test]
    fn generic_scalar_paths_agree_with_f64() {
        let t32 = psi(0.25f32).unwrap();
        let t64 = psi(0.25f64).unwrap();
        assert!((t32 as f64 - t64).abs() < 1e-6);
        let g32 = big_g_radial(2.0f32);
        assert!((g32 as f64 - big_g_radial(2.0f64)).abs() < 1e-6);
    }
}
