//! Eigenvalue-based root oracle for moderate degrees.
//!
//! The polynomial is rescaled radially and made monic, its companion
//! matrix (already Hessenberg) is balanced with exact power-of-two
//! similarity scalings, and eigenvalues are extracted by explicit
//! single-shift complex QR with Wilkinson shifts. The whole computation
//! runs at a precision of at least four times the coefficient spread, so
//! the result is an independent check on the simultaneous iteration.

use super::aberth::{materialize_coeffs, residuals_for, rootset_from_roots};
use super::bigfloat::{cdiv, cmul, Big, CBig};
use super::{
    LogCoeffPoly, RootSet, SolveError, DEFAULT_TARGET_RESIDUAL, MIN_ARG_FROM_POSITIVE_AXIS,
};
use std::f64::consts::LN_2;

/// Degree ceiling: the dense QR iteration is cubic per step and exists
/// only to cross-check the production solver on small inputs.
pub const ORACLE_MAX_DEGREE: usize = 60;

pub fn companion_oracle(poly: &LogCoeffPoly) -> Result<RootSet, SolveError> {
    let n = poly.n();
    if n > ORACLE_MAX_DEGREE {
        return Err(SolveError::DegreeTooLargeForOracle { n, max: ORACLE_MAX_DEGREE });
    }
    let l = poly.log_coeffs();
    let bits = oracle_bits(poly.spread());
    // Monic form of P(rho * w) / (e^{L_n} rho^n): its log-coefficients
    // are the gaps between the profile and its endpoint chord, so the
    // rescale also flattens the overall scale (a_0 = 1).
    let ln_rho = (l[0] - l[n]) / n as f64;
    let monic_logs: Vec<f64> = (0..n)
        .map(|k| l[k] - l[n] + (k as f64 - n as f64) * ln_rho)
        .collect();

    let mut h = companion_matrix(&monic_logs, bits);
    balance(&mut h);
    let eigs = qr_eigenvalues(&mut h, bits)?;

    // Undo the radial rescale: zeta = rho * w.
    let t = Big::with_f64(bits, ln_rho);
    let mut rho = Big::new(bits);
    Big::exp(&mut rho, &t);
    let mut roots = eigs;
    for z in &mut roots {
        z.re.mul_assign(&rho);
        z.im.mul_assign(&rho);
    }

    let coeffs = materialize_coeffs(l, bits);
    let residuals = residuals_for(l, &coeffs, &roots, bits);
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    let min_arg = roots
        .iter()
        .map(|z| z.arg_f64().abs())
        .fold(f64::INFINITY, f64::min);
    let converged =
        max_residual <= DEFAULT_TARGET_RESIDUAL && min_arg >= MIN_ARG_FROM_POSITIVE_AXIS;
    Ok(rootset_from_roots(&roots, residuals, bits, converged))
}

/// At least 4 bits per nat-of-spread beyond a 256-bit floor: root
/// sensitivity to coefficient perturbations grows at most like the
/// spread, so this leaves the oracle orders of magnitude past the
/// comparison tolerance.
fn oracle_bits(spread: f64) -> u32 {
    let need = 64.0 + 4.0 * spread / LN_2;
    (((need.max(256.0)) / 64.0).ceil() as u32) * 64
}

/// Companion matrix of the monic polynomial `w^n + sum a_k w^k` with
/// `ln a_k` given: ones on the subdiagonal, `-a_k` down the last column.
fn companion_matrix(monic_logs: &[f64], bits: u32) -> Vec<Vec<CBig>> {
    let n = monic_logs.len();
    let mut t = Big::new(bits);
    let mut h: Vec<Vec<CBig>> = (0..n).map(|_| (0..n).map(|_| CBig::zero(bits)).collect()).collect();
    for i in 1..n {
        h[i][i - 1].re.set_f64(1.0);
    }
    for (i, &la) in monic_logs.iter().enumerate() {
        t.set_f64(la);
        Big::exp(&mut h[i][n - 1].re, &t);
        h[i][n - 1].re.neg_assign();
    }
    h
}

/// Parlett-Reinsch style balancing restricted to powers of two, which
/// keeps every scaling exact: repeatedly equalizes the off-diagonal row
/// and column norms of each index.
fn balance(h: &mut [Vec<CBig>]) {
    let n = h.len();
    if n < 2 {
        return;
    }
    for _pass in 0..32 {
        let mut changed = false;
        for i in 0..n {
            let row: Vec<f64> = (0..n)
                .filter(|&j| j != i)
                .map(|j| h[i][j].ln_abs_f64())
                .collect();
            let col: Vec<f64> = (0..n)
                .filter(|&j| j != i)
                .map(|j| h[j][i].ln_abs_f64())
                .collect();
            let lr = log_sum(&row);
            let lc = log_sum(&col);
            if !lr.is_finite() || !lc.is_finite() {
                continue;
            }
            let k = ((lr - lc) / (2.0 * LN_2)).round();
            let k = k.clamp(-1048576.0, 1048576.0) as i64;
            if k == 0 {
                continue;
            }
            // Column i picks up 2^k, row i picks up 2^-k; the diagonal
            // entry sees both and is unchanged.
            for j in 0..n {
                h[j][i].re.mul_2si(k);
                h[j][i].im.mul_2si(k);
            }
            for j in 0..n {
                h[i][j].re.mul_2si(-k);
                h[i][j].im.mul_2si(-k);
            }
            changed = true;
        }
        if !changed {
            break;
        }
    }
}

fn log_sum(values: &[f64]) -> f64 {
    let m = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + values.iter().map(|v| (v - m).exp()).sum::<f64>().ln()
}

/// Eigenvalues of a Hessenberg matrix by explicit single-shift QR,
/// deflating from the bottom of the active window.
fn qr_eigenvalues(h: &mut Vec<Vec<CBig>>, bits: u32) -> Result<Vec<CBig>, SolveError> {
    let n = h.len();
    let mut eigs: Vec<CBig> = Vec::with_capacity(n);
    let mut m = n;
    let max_steps = 30 * n + 60;
    let mut steps = 0usize;
    let mut since_deflation = 0usize;
    let mut sc = RotScratch::new(bits);
    while m > 0 {
        if m == 1 {
            eigs.push(h[0][0].clone());
            break;
        }
        // Find the top of the unreduced block ending at m-1.
        let mut l = m - 1;
        while l > 0 {
            if negligible(h, l, m, bits) {
                h[l][l - 1].re.set_zero();
                h[l][l - 1].im.set_zero();
                break;
            }
            l -= 1;
        }
        if l == m - 1 {
            eigs.push(h[m - 1][m - 1].clone());
            m -= 1;
            since_deflation = 0;
            continue;
        }
        if l == m - 2 {
            let (e1, e2) = eig2x2(
                &h[l][l],
                &h[l][l + 1],
                &h[l + 1][l],
                &h[l + 1][l + 1],
                bits,
            );
            eigs.push(e1);
            eigs.push(e2);
            m -= 2;
            since_deflation = 0;
            continue;
        }
        steps += 1;
        since_deflation += 1;
        if steps > max_steps {
            return Err(SolveError::QrStalled { steps });
        }
        let mu = if since_deflation % 24 == 0 {
            // Exceptional shift to break symmetry-induced cycling.
            let mut mu = h[m - 1][m - 1].clone();
            let mut t = Big::new(bits);
            Big::hypot(&mut t, &h[m - 1][m - 2].re, &h[m - 1][m - 2].im);
            t.mul_f64_assign(0.75);
            mu.re.add_assign(&t);
            mu
        } else {
            wilkinson_shift(h, m, bits)
        };
        qr_step(h, l, m, &mu, bits, &mut sc);
    }
    Ok(eigs)
}

/// Subdiagonal entry (k, k-1) counts as zero relative to its neighboring
/// diagonal mass (or, when that vanishes, to the active window's largest
/// entry).
fn negligible(h: &[Vec<CBig>], k: usize, m: usize, bits: u32) -> bool {
    let sub = &h[k][k - 1];
    if sub.is_zero() {
        return true;
    }
    let diag = log_sum(&[
        h[k - 1][k - 1].ln_abs_f64(),
        h[k][k].ln_abs_f64(),
    ]);
    let scale = if diag == f64::NEG_INFINITY {
        let mut best = f64::NEG_INFINITY;
        for row in h.iter().take(m) {
            for entry in row.iter().take(m) {
                best = best.max(entry.ln_abs_f64());
            }
        }
        best
    } else {
        diag
    };
    sub.ln_abs_f64() <= scale - (bits as f64 - 4.0) * LN_2
}

/// Eigenvalue of the window's bottom 2x2 block closest to its bottom
/// diagonal entry.
fn wilkinson_shift(h: &[Vec<CBig>], m: usize, bits: u32) -> CBig {
    let (e1, e2) = eig2x2(
        &h[m - 2][m - 2],
        &h[m - 2][m - 1],
        &h[m - 1][m - 2],
        &h[m - 1][m - 1],
        bits,
    );
    let d = &h[m - 1][m - 1];
    let dist = |e: &CBig| -> f64 {
        let mut diff = CBig::new(bits);
        Big::sub(&mut diff.re, &e.re, &d.re);
        Big::sub(&mut diff.im, &e.im, &d.im);
        diff.ln_abs_f64()
    };
    if dist(&e1) <= dist(&e2) {
        e1
    } else {
        e2
    }
}

/// Both eigenvalues of `[[a, b], [c, d]]`. The larger one comes from the
/// quadratic formula with the non-cancelling sign; the smaller from the
/// determinant, which avoids subtractive loss.
fn eig2x2(a: &CBig, b: &CBig, c: &CBig, d: &CBig, bits: u32) -> (CBig, CBig) {
    let mut t = CBig::new(bits);
    Big::add(&mut t.re, &a.re, &d.re);
    Big::add(&mut t.im, &a.im, &d.im);
    t.re.mul_2si(-1);
    t.im.mul_2si(-1);
    let mut delta = CBig::new(bits);
    Big::sub(&mut delta.re, &a.re, &d.re);
    Big::sub(&mut delta.im, &a.im, &d.im);
    delta.re.mul_2si(-1);
    delta.im.mul_2si(-1);
    let mut s = Big::new(bits);
    let mut u = CBig::new(bits);
    let mut bc = CBig::new(bits);
    cmul(&mut u, &delta, &delta, &mut s);
    cmul(&mut bc, b, c, &mut s);
    u.re.add_assign(&bc.re);
    u.im.add_assign(&bc.im);
    let disc = csqrt(&u, bits);
    let mut plus = CBig::new(bits);
    Big::add(&mut plus.re, &t.re, &disc.re);
    Big::add(&mut plus.im, &t.im, &disc.im);
    let mut minus = CBig::new(bits);
    Big::sub(&mut minus.re, &t.re, &disc.re);
    Big::sub(&mut minus.im, &t.im, &disc.im);
    let big = if plus.ln_abs_f64() >= minus.ln_abs_f64() { plus } else { minus };
    // det = a d - b c.
    let mut det = CBig::new(bits);
    cmul(&mut det, a, d, &mut s);
    det.re.sub_assign(&bc.re);
    det.im.sub_assign(&bc.im);
    if big.is_zero() {
        let small = CBig::zero(bits);
        return (big, small);
    }
    let mut small = CBig::new(bits);
    let mut pair = [Big::new(bits), Big::new(bits)];
    cdiv(&mut small, &det, &big, &mut pair);
    (big, small)
}

/// Principal complex square root.
fn csqrt(z: &CBig, bits: u32) -> CBig {
    let mut out = CBig::zero(bits);
    if z.is_zero() {
        return out;
    }
    let mut r = Big::new(bits);
    Big::hypot(&mut r, &z.re, &z.im);
    let mut t = Big::new(bits);
    if z.re.sgn() >= 0 {
        // u = sqrt((r + x) / 2), v = y / (2u).
        Big::add(&mut t, &r, &z.re);
        t.mul_2si(-1);
        Big::sqrt(&mut out.re, &t);
        Big::div(&mut out.im, &z.im, &out.re);
        out.im.mul_2si(-1);
    } else {
        // v = sign(y) sqrt((r - x) / 2), u = y / (2v).
        Big::sub(&mut t, &r, &z.re);
        t.mul_2si(-1);
        Big::sqrt(&mut out.im, &t);
        if z.im.sgn() < 0 {
            out.im.neg_assign();
        }
        Big::div(&mut out.re, &z.im, &out.im);
        out.re.mul_2si(-1);
    }
    out
}

struct RotScratch {
    t1: CBig,
    tb: Big,
    nx: CBig,
    ny: CBig,
}

impl RotScratch {
    fn new(bits: u32) -> RotScratch {
        RotScratch {
            t1: CBig::new(bits),
            tb: Big::new(bits),
            nx: CBig::new(bits),
            ny: CBig::new(bits),
        }
    }
}

/// One explicit-shift QR step on the active window `[l, m)`: factor
/// `H - mu I = QR` by Givens rotations, then form `RQ + mu I`. Updates
/// stay inside the window, which is sound when only eigenvalues are
/// wanted.
fn qr_step(h: &mut [Vec<CBig>], l: usize, m: usize, mu: &CBig, bits: u32, sc: &mut RotScratch) {
    for i in l..m {
        h[i][i].re.sub_assign(&mu.re);
        h[i][i].im.sub_assign(&mu.im);
    }
    let mut rots: Vec<(Big, CBig)> = Vec::with_capacity(m - l);
    for k in l..m - 1 {
        let (c, s) = givens(&h[k][k], &h[k + 1][k], bits);
        let (top, bottom) = h.split_at_mut(k + 1);
        let row_k = &mut top[k];
        let row_k1 = &mut bottom[0];
        for j in k..m {
            rotate_pair(&mut row_k[j], &mut row_k1[j], &c, &s, sc);
        }
        row_k1[k].re.set_zero();
        row_k1[k].im.set_zero();
        rots.push((c, s));
    }
    for (idx, k) in (l..m - 1).enumerate() {
        let (c, s) = &rots[idx];
        // Right-multiplying by the conjugate transpose is the same pair
        // rotation with s conjugated.
        let mut s_conj = s.clone();
        s_conj.im.neg_assign();
        for row in h.iter_mut().take(m).skip(l) {
            let (left, right) = row.split_at_mut(k + 1);
            rotate_pair(&mut left[k], &mut right[0], c, &s_conj, sc);
        }
    }
    for i in l..m {
        h[i][i].re.add_assign(&mu.re);
        h[i][i].im.add_assign(&mu.im);
    }
}

/// Unitary `[[c, s], [-conj(s), c]]` with real `c` sending `(a, b)` to
/// `(r, 0)`.
fn givens(a: &CBig, b: &CBig, bits: u32) -> (Big, CBig) {
    let mut c = Big::new(bits);
    let mut s = CBig::zero(bits);
    if b.is_zero() {
        c.set_f64(1.0);
        return (c, s);
    }
    let mut lb = Big::new(bits);
    Big::hypot(&mut lb, &b.re, &b.im);
    if a.is_zero() {
        c.set_f64(0.0);
        Big::div(&mut s.re, &b.re, &lb);
        Big::div(&mut s.im, &b.im, &lb);
        s.im.neg_assign();
        return (c, s);
    }
    let mut la = Big::new(bits);
    Big::hypot(&mut la, &a.re, &a.im);
    let mut t = Big::new(bits);
    Big::hypot(&mut t, &la, &lb);
    Big::div(&mut c, &la, &t);
    // s = a * conj(b) / (|a| t).
    let mut denom = Big::new(bits);
    Big::mul(&mut denom, &la, &t);
    let mut tmp = Big::new(bits);
    Big::mul(&mut s.re, &a.re, &b.re);
    Big::mul(&mut tmp, &a.im, &b.im);
    s.re.add_assign(&tmp);
    s.re.div_assign(&denom);
    Big::mul(&mut s.im, &a.im, &b.re);
    Big::mul(&mut tmp, &a.re, &b.im);
    s.im.sub_assign(&tmp);
    s.im.div_assign(&denom);
    (c, s)
}

/// `(x, y) <- (c x + s y, c y - conj(s) x)` in place.
fn rotate_pair(x: &mut CBig, y: &mut CBig, c: &Big, s: &CBig, sc: &mut RotScratch) {
    cmul(&mut sc.t1, s, y, &mut sc.tb);
    Big::mul(&mut sc.nx.re, c, &x.re);
    sc.nx.re.add_assign(&sc.t1.re);
    Big::mul(&mut sc.nx.im, c, &x.im);
    sc.nx.im.add_assign(&sc.t1.im);
    // conj(s) * x = (s.re x.re + s.im x.im, s.re x.im - s.im x.re).
    Big::mul(&mut sc.t1.re, &s.re, &x.re);
    Big::mul(&mut sc.tb, &s.im, &x.im);
    sc.t1.re.add_assign(&sc.tb);
    Big::mul(&mut sc.t1.im, &s.re, &x.im);
    Big::mul(&mut sc.tb, &s.im, &x.re);
    sc.t1.im.sub_assign(&sc.tb);
    Big::mul(&mut sc.ny.re, c, &y.re);
    sc.ny.re.sub_assign(&sc.t1.re);
    Big::mul(&mut sc.ny.im, c, &y.im);
    sc.ny.im.sub_assign(&sc.t1.im);
    x.set(&sc.nx);
    y.set(&sc.ny);
}
