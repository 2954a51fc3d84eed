//! Simultaneous root iteration in adaptive-precision arithmetic.
//!
//! Initial guesses come from the upper convex hull of the log-coefficient
//! profile; each hull segment supplies a circle of guesses whose radius is
//! the tropical root estimate for that segment. Iteration uses
//! Aberth-style corrected Newton steps with Jacobi (simultaneous) updates,
//! so a sweep depends only on the previous sweep's state and results are
//! reproducible. A precision level either converges or the working
//! precision doubles, up to a spread-driven cap.

use super::bigfloat::{cadd_inv, cdiv, cmul, csub, Big, CBig};
use super::{
    newton_polygon_log_radii, normalize_arg, LogCoeffPoly, PrecisionPolicy, Root, RootSet,
    SolveError, SolverConfig, MIN_ARG_FROM_POSITIVE_AXIS,
};
use std::f64::consts::{LN_2, PI};

/// Fixed irrational angular offset, in radians, applied per hull layer so
/// no initial guess lands on a symmetry axis of the root set.
const GOLDEN_OFFSET: f64 = 0.618_033_988_749_894_9;

/// Finds all roots. Precision escalates by doubling until every corrected
/// Newton step is small relative to its own root's magnitude, every
/// relative residual is below `target_residual`, and no root sits on the
/// positive real axis; hitting the cap first returns the partial result as
/// an error.
pub fn find_roots(poly: &LogCoeffPoly, config: &SolverConfig) -> Result<RootSet, SolveError> {
    assert!(
        config.target_residual > 0.0 && config.target_residual < 1.0,
        "target residual must lie in (0, 1)"
    );
    let target = config.target_residual;
    let (seed_bits, cap_bits) =
        precision_plan(poly.n(), poly.spread(), target, config.precision_policy);

    let guesses = initial_guesses(poly);
    let mut bits = seed_bits;
    let mut roots = materialize_guesses(&guesses, bits);
    loop {
        let coeffs = materialize_coeffs(poly.log_coeffs(), bits);
        let all_locked = aberth_sweeps(&coeffs, &mut roots, bits, config);
        let residuals = residuals_for(poly.log_coeffs(), &coeffs, &roots, bits);
        let max_residual = residuals.iter().copied().fold(0.0, f64::max);
        let min_arg = roots
            .iter()
            .map(|z| z.arg_f64().abs())
            .fold(f64::INFINITY, f64::min);
        if all_locked && max_residual <= target && min_arg >= MIN_ARG_FROM_POSITIVE_AXIS {
            return Ok(rootset_from_roots(&roots, residuals, bits, true));
        }
        if bits >= cap_bits {
            let partial = rootset_from_roots(&roots, residuals, bits, false);
            return Err(SolveError::PrecisionCapReached {
                cap_bits: bits,
                partial: Box::new(partial),
            });
        }
        bits = (bits * 2).min(cap_bits);
        roots = lift_roots(&roots, bits);
    }
}

/// Seed and cap working precisions in bits, both multiples of 64.
///
/// The seed covers the target residual plus summation slack (evaluation
/// at a root cancels locally, against the largest nearby term, not across
/// the whole coefficient spread). The cap adds 1.5 bits per nat of
/// coefficient spread on top, which covers global cancellation in the
/// worst case.
fn precision_plan(n: usize, spread: f64, target: f64, policy: PrecisionPolicy) -> (u32, u32) {
    match policy {
        PrecisionPolicy::Fixed(bits) => {
            let b = bits.max(64);
            (b, b)
        }
        PrecisionPolicy::Auto => {
            let need = 64.0 + ((n + 1) as f64).log2() + 2.0 * (1.0 / target).log2();
            let seed = ceil64(need).max(128);
            let cap = ceil64(64.0 + 1.5 * spread / LN_2).max(8 * seed);
            (seed, cap)
        }
    }
}

fn ceil64(x: f64) -> u32 {
    ((x.max(64.0) / 64.0).ceil() as u32) * 64
}

/// Initial guesses in log-polar form: one circle per hull segment, with
/// equally spaced angles rotated by a per-layer irrational offset.
fn initial_guesses(poly: &LogCoeffPoly) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(poly.n());
    let layers = newton_polygon_log_radii(poly.log_coeffs());
    for (layer, (log_r, mult)) in layers.into_iter().enumerate() {
        for i in 0..mult {
            let theta =
                2.0 * PI * i as f64 / mult as f64 + GOLDEN_OFFSET * (layer as f64 + 1.0);
            out.push((log_r, normalize_arg(theta)));
        }
    }
    out
}

fn materialize_guesses(guesses: &[(f64, f64)], bits: u32) -> Vec<CBig> {
    let mut t = Big::new(bits);
    let mut r = Big::new(bits);
    guesses
        .iter()
        .map(|&(log_r, theta)| {
            let mut z = CBig::new(bits);
            t.set_f64(log_r);
            Big::exp(&mut r, &t);
            Big::mul_f64(&mut z.re, &r, theta.cos());
            Big::mul_f64(&mut z.im, &r, theta.sin());
            z
        })
        .collect()
}

fn lift_roots(roots: &[CBig], bits: u32) -> Vec<CBig> {
    roots
        .iter()
        .map(|z| {
            let mut w = CBig::new(bits);
            w.re.set(&z.re);
            w.im.set(&z.im);
            w
        })
        .collect()
}

/// Coefficients `exp(L_k)` at the working precision.
pub(super) fn materialize_coeffs(log_coeffs: &[f64], bits: u32) -> Vec<Big> {
    let mut t = Big::new(bits);
    log_coeffs
        .iter()
        .map(|&l| {
            let mut c = Big::new(bits);
            t.set_f64(l);
            Big::exp(&mut c, &t);
            c
        })
        .collect()
}

struct Scratch {
    p: CBig,
    dp: CBig,
    t1: CBig,
    s: Big,
    acc: CBig,
    diff: CBig,
    pair: [Big; 2],
    newton: CBig,
    denom: CBig,
    step: CBig,
}

impl Scratch {
    fn new(bits: u32) -> Scratch {
        Scratch {
            p: CBig::new(bits),
            dp: CBig::new(bits),
            t1: CBig::new(bits),
            s: Big::new(bits),
            acc: CBig::new(bits),
            diff: CBig::new(bits),
            pair: [Big::new(bits), Big::new(bits)],
            newton: CBig::new(bits),
            denom: CBig::new(bits),
            step: CBig::new(bits),
        }
    }
}

/// `sc.p = P(z)`, `sc.dp = P'(z)` by a joint Horner recurrence.
fn horner(coeffs: &[Big], z: &CBig, sc: &mut Scratch) {
    let n = coeffs.len() - 1;
    sc.p.re.set(&coeffs[n]);
    sc.p.im.set_zero();
    sc.dp.re.set_zero();
    sc.dp.im.set_zero();
    for k in (0..n).rev() {
        // dp = dp * z + p, using p from before its own update.
        cmul(&mut sc.t1, &sc.dp, z, &mut sc.s);
        sc.t1.re.add_assign(&sc.p.re);
        sc.t1.im.add_assign(&sc.p.im);
        std::mem::swap(&mut sc.dp, &mut sc.t1);
        // p = p * z + c_k; the coefficient is real.
        cmul(&mut sc.t1, &sc.p, z, &mut sc.s);
        sc.t1.re.add_assign(&coeffs[k]);
        std::mem::swap(&mut sc.p, &mut sc.t1);
    }
}

/// `p = P(z)` only.
fn horner_value(coeffs: &[Big], z: &CBig, p: &mut CBig, t1: &mut CBig, s: &mut Big) {
    let n = coeffs.len() - 1;
    p.re.set(&coeffs[n]);
    p.im.set_zero();
    for k in (0..n).rev() {
        cmul(t1, p, z, s);
        t1.re.add_assign(&coeffs[k]);
        std::mem::swap(p, t1);
    }
}

/// Log of an iterate's own length scale. Thresholds tied to this stay
/// meaningful across the full dynamic range of root magnitudes; an exact
/// zero falls back to unit scale so a transient zero iterate can move.
fn log_scale(ln_abs: f64) -> f64 {
    if ln_abs == f64::NEG_INFINITY {
        0.0
    } else {
        ln_abs
    }
}

/// Runs Jacobi-style Aberth sweeps until every root's corrected step is
/// below `target / (4 (n + 1))` relative to that root's magnitude, or the
/// sweep budget runs out. Returns whether all roots locked.
///
/// The margin makes a lock imply the residual test: `|z P'(z)|` never
/// exceeds `n * sum_k |a_k z^k|`, so a relative position error `e` keeps
/// the relative residual below `n * e`.
fn aberth_sweeps(coeffs: &[Big], roots: &mut Vec<CBig>, bits: u32, config: &SolverConfig) -> bool {
    let n = roots.len();
    let ln_target = config.target_residual.ln() - (4.0 * (n as f64 + 1.0)).ln();
    let mut locked = vec![false; n];
    let mut next: Vec<CBig> = roots.clone();
    let mut sc = Scratch::new(bits);
    for _ in 0..config.max_iters {
        if locked.iter().all(|&l| l) {
            return true;
        }
        for i in 0..n {
            if locked[i] {
                next[i].set(&roots[i]);
                continue;
            }
            horner(coeffs, &roots[i], &mut sc);
            if sc.p.is_zero() {
                locked[i] = true;
                next[i].set(&roots[i]);
                continue;
            }
            if sc.dp.is_zero() {
                // Stationary point of P away from any root: rotate the
                // iterate by an exact power-of-two nudge and retry.
                nudge(&mut next[i], &roots[i], bits, &mut sc);
                continue;
            }
            cdiv(&mut sc.newton, &sc.p, &sc.dp, &mut sc.pair);
            sc.acc.re.set_zero();
            sc.acc.im.set_zero();
            for j in 0..n {
                if j == i {
                    continue;
                }
                csub(&mut sc.diff, &roots[i], &roots[j]);
                if sc.diff.is_zero() {
                    // Exact collision: synthesize a tiny imaginary
                    // separation so the repulsion term drives them apart.
                    let ln_d = log_scale(roots[i].ln_abs_f64()) - 0.5 * bits as f64 * LN_2;
                    sc.pair[0].set_f64(ln_d);
                    Big::exp(&mut sc.diff.im, &sc.pair[0]);
                    sc.diff.re.set_zero();
                }
                cadd_inv(&mut sc.acc, &sc.diff, &mut sc.pair);
            }
            // step = newton / (1 - newton * acc); a vanishing denominator
            // degrades gracefully to the plain Newton step.
            cmul(&mut sc.denom, &sc.newton, &sc.acc, &mut sc.s);
            sc.denom.re.neg_assign();
            sc.denom.re.add_f64_assign(1.0);
            sc.denom.im.neg_assign();
            if sc.denom.is_zero() {
                sc.step.set(&sc.newton);
            } else {
                cdiv(&mut sc.step, &sc.newton, &sc.denom, &mut sc.pair);
            }
            let lz = log_scale(roots[i].ln_abs_f64());
            let mut lw = sc.step.ln_abs_f64();
            if lw > lz {
                // Clamp runaway steps to the root's own scale; the factor
                // is applied in working precision so it never underflows.
                sc.pair[0].set_f64(lz - lw);
                Big::exp(&mut sc.s, &sc.pair[0]);
                sc.step.re.mul_assign(&sc.s);
                sc.step.im.mul_assign(&sc.s);
                lw = lz;
            }
            if lw <= ln_target + lz {
                locked[i] = true;
            }
            csub(&mut next[i], &roots[i], &sc.step);
        }
        std::mem::swap(roots, &mut next);
    }
    locked.iter().all(|&l| l)
}

/// `next = z + i * z * 2^-shift`: a small exact rotation.
fn nudge(next: &mut CBig, z: &CBig, bits: u32, sc: &mut Scratch) {
    let shift = -((bits as i64 / 8).max(16));
    sc.t1.set(z);
    sc.t1.re.mul_2si(shift);
    sc.t1.im.mul_2si(shift);
    Big::sub(&mut next.re, &z.re, &sc.t1.im);
    Big::add(&mut next.im, &z.im, &sc.t1.re);
}

/// Relative residual `|P(z)| / sum_k e^{L_k} |z|^k` per root, evaluated
/// in the working precision with the scale factor handled in log domain.
pub(super) fn residuals_for(
    log_coeffs: &[f64],
    coeffs: &[Big],
    roots: &[CBig],
    bits: u32,
) -> Vec<f64> {
    let mut p = CBig::new(bits);
    let mut t1 = CBig::new(bits);
    let mut s = Big::new(bits);
    roots
        .iter()
        .map(|z| {
            horner_value(coeffs, z, &mut p, &mut t1, &mut s);
            let ln_num = p.ln_abs_f64();
            if ln_num == f64::NEG_INFINITY {
                return 0.0;
            }
            let ln_den = log_abs_coeff_sum(log_coeffs, z.ln_abs_f64());
            (ln_num - ln_den).exp()
        })
        .collect()
}

/// `ln sum_k e^{L_k} r^k` for `r = e^lr`.
fn log_abs_coeff_sum(log_coeffs: &[f64], lr: f64) -> f64 {
    if lr == f64::NEG_INFINITY {
        return log_coeffs[0];
    }
    let mut m = f64::NEG_INFINITY;
    for (k, &l) in log_coeffs.iter().enumerate() {
        m = m.max(l + k as f64 * lr);
    }
    let mut s = 0.0;
    for (k, &l) in log_coeffs.iter().enumerate() {
        s += (l + k as f64 * lr - m).exp();
    }
    m + s.ln()
}

/// Converts working-precision roots into the reported form and sorts them
/// canonically by `(log_abs, arg)`.
pub(super) fn rootset_from_roots(
    roots: &[CBig],
    residuals: Vec<f64>,
    bits: u32,
    converged: bool,
) -> RootSet {
    let mut abs = Big::new(bits);
    let mut items: Vec<(Root, f64)> = roots
        .iter()
        .zip(residuals)
        .map(|(z, resid)| {
            Big::hypot(&mut abs, &z.re, &z.im);
            let root = Root {
                log_abs: z.ln_abs_f64(),
                arg: z.arg_f64(),
                re_text: z.re.to_sci_string(17),
                im_text: z.im.to_sci_string(17),
                abs_text: abs.to_sci_string(17),
            };
            (root, resid)
        })
        .collect();
    items.sort_by(|a, b| {
        a.0.log_abs
            .total_cmp(&b.0.log_abs)
            .then_with(|| a.0.arg.total_cmp(&b.0.arg))
    });
    let n = items.len();
    let (roots, residuals) = items.into_iter().unzip();
    RootSet { n, roots, residuals, precision_bits: bits, converged }
}
