//! Root finding for polynomials whose coefficients are given as natural
//! logs and may span thousands of nats.
//!
//! The polynomial is `P(z) = sum_k exp(L_k) z^k` with every coefficient
//! positive. Roots of such polynomials can be far outside f64 range, so
//! the solver works in adaptive-precision arithmetic and reports each root
//! both as decimal text and in log-polar form (`ln|z|`, `arg z`), which is
//! the representation every downstream statistic consumes.

mod aberth;
mod bigfloat;
mod companion;
mod matching;

pub use aberth::find_roots;
pub use companion::{companion_oracle, ORACLE_MAX_DEGREE};
pub use matching::{hungarian_min_cost, match_roots, max_matched_rel_distance};

use crate::sampler::{decimal17, ModelCoeffs};
use num_complex::Complex;
use num_traits::{Float, FloatConst};
use std::io;

/// Residual bound a solve must meet before a RootSet is marked converged,
/// unless the caller overrides it.
pub const DEFAULT_TARGET_RESIDUAL: f64 = 1e-12;

/// Roots closer to the positive real axis than this angle are evidence of
/// a failed solve: a polynomial with positive coefficients has none.
pub const MIN_ARG_FROM_POSITIVE_AXIS: f64 = 1e-9;

#[derive(Debug, thiserror::Error)]
pub enum SolveError {
    #[error("polynomial degree must be at least 1")]
    DegreeZero,
    #[error("log-coefficient {index} is not finite")]
    NonfiniteCoeff { index: usize },
    #[error("no convergence at the precision cap of {cap_bits} bits")]
    PrecisionCapReached { cap_bits: u32, partial: Box<RootSet> },
    #[error("companion oracle accepts degree <= {max}, got {n}")]
    DegreeTooLargeForOracle { n: usize, max: usize },
    #[error("companion QR iteration stalled after {steps} shifted steps")]
    QrStalled { steps: usize },
}

/// Degree-n polynomial stored as the natural logs of its (all positive)
/// coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct LogCoeffPoly {
    log_coeffs: Vec<f64>,
}

impl LogCoeffPoly {
    /// `log_coeffs[k]` is `ln` of the degree-k coefficient; at least two
    /// entries, all finite.
    pub fn new(log_coeffs: Vec<f64>) -> Result<LogCoeffPoly, SolveError> {
        if log_coeffs.len() < 2 {
            return Err(SolveError::DegreeZero);
        }
        for (index, l) in log_coeffs.iter().enumerate() {
            if !l.is_finite() {
                return Err(SolveError::NonfiniteCoeff { index });
            }
        }
        Ok(LogCoeffPoly { log_coeffs })
    }

    pub fn from_model(coeffs: &ModelCoeffs) -> Result<LogCoeffPoly, SolveError> {
        LogCoeffPoly::new(coeffs.log_coeffs.clone())
    }

    pub fn n(&self) -> usize {
        self.log_coeffs.len() - 1
    }

    pub fn log_coeffs(&self) -> &[f64] {
        &self.log_coeffs
    }

    /// Largest minus smallest log-coefficient, in nats.
    pub fn spread(&self) -> f64 {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &l in &self.log_coeffs {
            lo = lo.min(l);
            hi = hi.max(l);
        }
        hi - lo
    }
}

/// One root in log-polar form plus decimal renderings of its Cartesian
/// and absolute values (17 significant digits, exact even when the
/// magnitude is far outside f64 range).
#[derive(Clone, Debug, PartialEq)]
pub struct Root {
    pub log_abs: f64,
    pub arg: f64,
    pub re_text: String,
    pub im_text: String,
    pub abs_text: String,
}

impl Root {
    pub fn polar(&self) -> (f64, f64) {
        (self.log_abs, self.arg)
    }

    /// Cartesian value as f64; overflows to infinity when `log_abs`
    /// exceeds f64 range, so callers needing wide range must stay polar.
    pub fn to_complex(&self) -> Complex<f64> {
        Complex::from_polar(self.log_abs.exp(), self.arg)
    }
}

/// All n roots of one polynomial, with per-root relative residuals and
/// the working precision that produced them. Roots are sorted by
/// `(log_abs, arg)` so equal inputs yield identical output.
#[derive(Clone, Debug, PartialEq)]
pub struct RootSet {
    pub n: usize,
    pub roots: Vec<Root>,
    pub residuals: Vec<f64>,
    pub precision_bits: u32,
    pub converged: bool,
}

impl RootSet {
    pub fn log_radii(&self) -> Vec<f64> {
        self.roots.iter().map(|r| r.log_abs).collect()
    }

    pub fn args(&self) -> Vec<f64> {
        self.roots.iter().map(|r| r.arg).collect()
    }

    /// CSV with header `re,im,abs,arg,log_abs,residual`; 17 significant
    /// digits throughout.
    pub fn write_csv<W: io::Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "re,im,abs,arg,log_abs,residual")?;
        for (root, resid) in self.roots.iter().zip(&self.residuals) {
            writeln!(
                w,
                "{},{},{},{},{},{}",
                root.re_text,
                root.im_text,
                root.abs_text,
                decimal17(root.arg),
                decimal17(root.log_abs),
                decimal17(*resid),
            )?;
        }
        Ok(())
    }
}

/// How the solver chooses its working precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrecisionPolicy {
    /// Start from a residual-driven seed and double up to a spread-driven
    /// cap whenever a level fails to converge.
    Auto,
    /// Use exactly this many bits; no escalation.
    Fixed(u32),
}

#[derive(Clone, Copy, Debug)]
pub struct SolverConfig {
    /// Relative backward-error bound every root must meet.
    pub target_residual: f64,
    /// Sweep budget per precision level; exhausting it escalates.
    pub max_iters: usize,
    pub precision_policy: PrecisionPolicy,
}

impl Default for SolverConfig {
    fn default() -> SolverConfig {
        SolverConfig {
            target_residual: DEFAULT_TARGET_RESIDUAL,
            max_iters: 120,
            precision_policy: PrecisionPolicy::Auto,
        }
    }
}

/// Counts of roots classified as real, split by which half-axis they lie
/// on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RealRootCounts {
    pub negative_axis: usize,
    pub positive_axis: usize,
}

/// Worst-case measures of the algebraic invariants a converged RootSet
/// must satisfy.
#[derive(Clone, Copy, Debug)]
pub struct RootSetAudit {
    /// Max over roots of the relative distance from its conjugate to the
    /// nearest root; zero for an exactly conjugate-closed multiset.
    pub conjugate_excess: f64,
    /// `|sum_k ln|root_k| - (L_0 - L_n)|`.
    pub vieta_gap: f64,
    /// Smallest `|arg|` over the roots.
    pub min_abs_arg: f64,
    pub max_residual: f64,
}

/// `ln(1 + e^x)` without overflow; equals `ln(1 + |z|)` when `x = ln|z|`.
pub(crate) fn softplus(x: f64) -> f64 {
    if x > 36.0 {
        x
    } else {
        x.exp().ln_1p()
    }
}

/// Reduces an angle to `(-pi, pi]`.
pub(crate) fn normalize_arg(theta: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut t = theta.rem_euclid(two_pi);
    if t > std::f64::consts::PI {
        t -= two_pi;
    }
    t
}

/// Relative distance `|a - b| / (1 + max(|a|, |b|))` between two points
/// given in log-polar form, stable across magnitudes f64 cannot hold.
pub fn rel_distance(a: (f64, f64), b: (f64, f64)) -> f64 {
    let ((la, ta), (lb, tb)) = if a.0 >= b.0 { (a, b) } else { (b, a) };
    if lb == f64::NEG_INFINITY {
        if la == f64::NEG_INFINITY {
            return 0.0;
        }
        // One point is the origin: |a - 0| = e^la.
        return (la - softplus(la)).exp();
    }
    let w = (lb - la).exp();
    let d_scaled = (ta.cos() - w * tb.cos()).hypot(ta.sin() - w * tb.sin());
    if d_scaled == 0.0 {
        return 0.0;
    }
    (la + d_scaled.ln() - softplus(la)).exp()
}

/// Scaled evaluation of `P` at `z`: returns `(ln|P(z)|, P(z)/|P(z)|)`.
/// Exact cancellation yields `(-inf, 1)`.
pub fn eval_log<T: Float + FloatConst>(poly: &LogCoeffPoly, z: Complex<T>) -> (T, Complex<T>) {
    if z.re == T::zero() && z.im == T::zero() {
        return (
            T::from(poly.log_coeffs[0]).unwrap(),
            Complex::new(T::one(), T::zero()),
        );
    }
    eval_log_polar(poly, z.norm().ln(), z.im.atan2(z.re))
}

/// Same as [`eval_log`] with `z = exp(log_r) * exp(i theta)`, usable when
/// `|z|` itself would overflow. `log_r = -inf` means `z = 0`; `theta` of
/// exactly `0` or `+-pi` is evaluated on the real axis, where signs
/// cancel exactly instead of leaving trigonometric residue.
pub fn eval_log_polar<T: Float + FloatConst>(
    poly: &LogCoeffPoly,
    log_r: T,
    theta: T,
) -> (T, Complex<T>) {
    let one = Complex::new(T::one(), T::zero());
    if log_r == T::neg_infinity() {
        return (T::from(poly.log_coeffs[0]).unwrap(), one);
    }
    let mut m = T::neg_infinity();
    for (k, &l) in poly.log_coeffs.iter().enumerate() {
        let e = T::from(l).unwrap() + T::from(k).unwrap() * log_r;
        if e > m {
            m = e;
        }
    }
    if theta == T::zero() || theta.abs() == T::PI() {
        let negative = theta != T::zero();
        let mut s = T::zero();
        for (k, &l) in poly.log_coeffs.iter().enumerate() {
            let e = T::from(l).unwrap() + T::from(k).unwrap() * log_r;
            let term = (e - m).exp();
            if negative && k % 2 == 1 {
                s = s - term;
            } else {
                s = s + term;
            }
        }
        if s == T::zero() {
            return (T::neg_infinity(), one);
        }
        return (m + s.abs().ln(), Complex::new(s.signum(), T::zero()));
    }
    let mut s_re = T::zero();
    let mut s_im = T::zero();
    for (k, &l) in poly.log_coeffs.iter().enumerate() {
        let e = T::from(l).unwrap() + T::from(k).unwrap() * log_r;
        let mag = (e - m).exp();
        let phase = T::from(k).unwrap() * theta;
        s_re = s_re + mag * phase.cos();
        s_im = s_im + mag * phase.sin();
    }
    let s = Complex::new(s_re, s_im);
    let norm = s.norm();
    if norm == T::zero() {
        return (T::neg_infinity(), one);
    }
    (m + norm.ln(), s / norm)
}

/// Upper convex hull of the points `(k, L_k)` expressed as estimated root
/// magnitudes: each hull segment of slope `s` and width `m` contributes
/// `(log_radius = -s, multiplicity = m)`. Log-radii strictly increase and
/// multiplicities sum to the degree.
pub(crate) fn newton_polygon_log_radii(log_coeffs: &[f64]) -> Vec<(f64, usize)> {
    let pts: Vec<(f64, f64)> = log_coeffs
        .iter()
        .enumerate()
        .map(|(k, &l)| (k as f64, l))
        .collect();
    let mut hull: Vec<usize> = Vec::new();
    for k in 0..pts.len() {
        while hull.len() >= 2 {
            let a = pts[hull[hull.len() - 2]];
            let b = pts[hull[hull.len() - 1]];
            let c = pts[k];
            let cross = (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0);
            // Pop while the middle point lies on or below segment a-c.
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(k);
    }
    let mut out = Vec::with_capacity(hull.len() - 1);
    for seg in hull.windows(2) {
        let (ka, kb) = (seg[0], seg[1]);
        let slope = (log_coeffs[kb] - log_coeffs[ka]) / (kb - ka) as f64;
        out.push((-slope, kb - ka));
    }
    out
}

/// Root-magnitude estimates from the coefficient hull as
/// `(radius, multiplicity)` pairs, radii strictly increasing.
pub fn newton_polygon_radii(poly: &LogCoeffPoly) -> Vec<(f64, usize)> {
    newton_polygon_log_radii(&poly.log_coeffs)
        .into_iter()
        .map(|(lr, m)| (lr.exp(), m))
        .collect()
}

/// Classifies roots as real when `|Im| <= tol * (1 + |root|)` holds for
/// the root and for its nearest conjugate partner, and splits the count
/// by the sign of the real part.
pub fn count_real_roots(rs: &RootSet, tol: f64) -> RealRootCounts {
    let ln_tol = tol.ln();
    let passes = |root: &Root| -> bool {
        // ln|Im z| = log_abs + ln|sin arg|, compared in log domain.
        let ln_im = root.log_abs + root.arg.sin().abs().ln();
        ln_im <= ln_tol + softplus(root.log_abs)
    };
    let mut counts = RealRootCounts { negative_axis: 0, positive_axis: 0 };
    for root in &rs.roots {
        if !passes(root) {
            continue;
        }
        // The conjugate partner is the nearest root to the reflection;
        // for a conjugate-closed set this recheck can only reject when
        // closure itself is broken.
        let reflected = (root.log_abs, normalize_arg(-root.arg));
        let partner = rs
            .roots
            .iter()
            .min_by(|x, y| {
                let dx = rel_distance(x.polar(), reflected);
                let dy = rel_distance(y.polar(), reflected);
                dx.total_cmp(&dy)
            })
            .expect("RootSet holds at least one root");
        if !passes(partner) {
            continue;
        }
        if root.arg.cos() < 0.0 {
            counts.negative_axis += 1;
        } else {
            counts.positive_axis += 1;
        }
    }
    counts
}

/// Measures the algebraic invariants of a RootSet against its source
/// polynomial.
pub fn audit(rs: &RootSet, poly: &LogCoeffPoly) -> RootSetAudit {
    let mut conjugate_excess: f64 = 0.0;
    let mut min_abs_arg = f64::INFINITY;
    for root in &rs.roots {
        min_abs_arg = min_abs_arg.min(root.arg.abs());
        let reflected = (root.log_abs, normalize_arg(-root.arg));
        let nearest = rs
            .roots
            .iter()
            .map(|other| rel_distance(other.polar(), reflected))
            .fold(f64::INFINITY, f64::min);
        conjugate_excess = conjugate_excess.max(nearest);
    }
    let log_sum: f64 = rs.roots.iter().map(|r| r.log_abs).sum();
    let l = poly.log_coeffs();
    let vieta_gap = (log_sum - (l[0] - l[poly.n()])).abs();
    let max_residual = rs.residuals.iter().copied().fold(0.0, f64::max);
    RootSetAudit { conjugate_excess, vieta_gap, min_abs_arg, max_residual }
}
