//! Minimal safe wrapper over MPFR reals, plus a complex pair type.
//!
//! Only what the solver needs is exposed: construction at a given
//! precision, three-address arithmetic (aliasing of output and inputs is
//! permitted by MPFR and routed through raw pointers), a few in-place
//! accumulators, exponent-safe conversions to f64 log scale, and decimal
//! formatting. All rounding is to nearest. This is the only file in the
//! crate with `unsafe` code.

use gmp_mpfr_sys::mpfr;
use gmp_mpfr_sys::mpfr::{mpfr_t, rnd_t};
use std::mem::MaybeUninit;

const RND: rnd_t = rnd_t::RNDN;
const LN_2: f64 = std::f64::consts::LN_2;

/// One arbitrary-precision real. The precision is fixed at construction.
pub struct Big {
    raw: mpfr_t,
}

// The raw struct owns its limb buffer uniquely; no operation here mutates
// through a shared reference, so moving or sharing across threads is sound.
unsafe impl Send for Big {}
unsafe impl Sync for Big {}

impl Big {
    /// Fresh NaN at `prec` bits.
    pub fn new(prec: u32) -> Big {
        unsafe {
            let mut raw = MaybeUninit::uninit();
            mpfr::init2(raw.as_mut_ptr(), prec as mpfr::prec_t);
            Big { raw: raw.assume_init() }
        }
    }

    pub fn with_f64(prec: u32, v: f64) -> Big {
        let mut x = Big::new(prec);
        x.set_f64(v);
        x
    }

    #[cfg(test)]
    pub fn to_f64(&self) -> f64 {
        unsafe { mpfr::get_d(&self.raw, RND) }
    }

    /// Natural log of `|self|`, safe for values far outside f64 range.
    #[cfg(test)]
    pub fn ln_abs_f64(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let (m, e) = self.to_f64_2exp();
        e as f64 * LN_2 + m.abs().ln()
    }

    pub fn prec(&self) -> u32 {
        unsafe { mpfr::get_prec(&self.raw) as u32 }
    }

    pub fn set(&mut self, other: &Big) {
        unsafe {
            mpfr::set(&mut self.raw, &other.raw, RND);
        }
    }

    pub fn set_f64(&mut self, v: f64) {
        unsafe {
            mpfr::set_d(&mut self.raw, v, RND);
        }
    }

    pub fn set_zero(&mut self) {
        unsafe {
            mpfr::set_zero(&mut self.raw, 1);
        }
    }

    pub fn is_zero(&self) -> bool {
        unsafe { mpfr::zero_p(&self.raw) != 0 }
    }

    pub fn is_finite(&self) -> bool {
        unsafe { mpfr::number_p(&self.raw) != 0 }
    }

    pub fn sgn(&self) -> i32 {
        unsafe { mpfr::sgn(&self.raw) }
    }

    /// Mantissa in `[0.5, 1)` (zero for zero) and binary exponent with
    /// `self = m * 2^e`.
    pub fn to_f64_2exp(&self) -> (f64, i64) {
        let mut e: mpfr::exp_t = 0;
        let m = unsafe { mpfr::get_d_2exp(&mut e, &self.raw, RND) };
        (m, e as i64)
    }

    /// Multiplies in place by `2^e`.
    pub fn mul_2si(&mut self, e: i64) {
        unsafe {
            mpfr::mul_2si(&mut self.raw, &self.raw, e as mpfr::exp_t, RND);
        }
    }

    // Three-address operations. MPFR fully supports aliased operands, and
    // the raw-pointer forms below keep that usable from the in-place
    // methods; the safe references here simply cannot alias.

    pub fn add(out: &mut Big, a: &Big, b: &Big) {
        unsafe {
            mpfr::add(&mut out.raw, &a.raw, &b.raw, RND);
        }
    }

    pub fn sub(out: &mut Big, a: &Big, b: &Big) {
        unsafe {
            mpfr::sub(&mut out.raw, &a.raw, &b.raw, RND);
        }
    }

    pub fn mul(out: &mut Big, a: &Big, b: &Big) {
        unsafe {
            mpfr::mul(&mut out.raw, &a.raw, &b.raw, RND);
        }
    }

    pub fn div(out: &mut Big, a: &Big, b: &Big) {
        unsafe {
            mpfr::div(&mut out.raw, &a.raw, &b.raw, RND);
        }
    }

    pub fn sqr(out: &mut Big, a: &Big) {
        unsafe {
            mpfr::sqr(&mut out.raw, &a.raw, RND);
        }
    }

    pub fn sqrt(out: &mut Big, a: &Big) {
        unsafe {
            mpfr::sqrt(&mut out.raw, &a.raw, RND);
        }
    }

    pub fn exp(out: &mut Big, a: &Big) {
        unsafe {
            mpfr::exp(&mut out.raw, &a.raw, RND);
        }
    }

    pub fn mul_f64(out: &mut Big, a: &Big, d: f64) {
        unsafe {
            mpfr::mul_d(&mut out.raw, &a.raw, d, RND);
        }
    }

    /// `out = sqrt(a^2 + b^2)` without intermediate overflow.
    pub fn hypot(out: &mut Big, a: &Big, b: &Big) {
        unsafe {
            mpfr::hypot(&mut out.raw, &a.raw, &b.raw, RND);
        }
    }

    // In-place accumulators; aliasing is intentional and legal in MPFR.

    pub fn add_assign(&mut self, b: &Big) {
        let p: *mut mpfr_t = &mut self.raw;
        unsafe {
            mpfr::add(p, p, &b.raw, RND);
        }
    }

    pub fn sub_assign(&mut self, b: &Big) {
        let p: *mut mpfr_t = &mut self.raw;
        unsafe {
            mpfr::sub(p, p, &b.raw, RND);
        }
    }

    pub fn mul_assign(&mut self, b: &Big) {
        let p: *mut mpfr_t = &mut self.raw;
        unsafe {
            mpfr::mul(p, p, &b.raw, RND);
        }
    }

    pub fn div_assign(&mut self, b: &Big) {
        let p: *mut mpfr_t = &mut self.raw;
        unsafe {
            mpfr::div(p, p, &b.raw, RND);
        }
    }

    pub fn mul_f64_assign(&mut self, d: f64) {
        let p: *mut mpfr_t = &mut self.raw;
        unsafe {
            mpfr::mul_d(p, p, d, RND);
        }
    }

    pub fn add_f64_assign(&mut self, d: f64) {
        let p: *mut mpfr_t = &mut self.raw;
        unsafe {
            mpfr::add_d(p, p, d, RND);
        }
    }

    pub fn neg_assign(&mut self) {
        let p: *mut mpfr_t = &mut self.raw;
        unsafe {
            mpfr::neg(p, p, RND);
        }
    }

    /// Scientific-notation decimal with `digits` significant digits.
    pub fn to_sci_string(&self, digits: usize) -> String {
        if self.is_zero() {
            return "0.0".to_string();
        }
        if !self.is_finite() {
            return if self.sgn() >= 0 { "inf".into() } else { "-inf".into() };
        }
        unsafe {
            let mut exp: mpfr::exp_t = 0;
            let ptr = mpfr::get_str(
                std::ptr::null_mut(),
                &mut exp,
                10,
                digits,
                &self.raw,
                RND,
            );
            let c_str = std::ffi::CStr::from_ptr(ptr);
            let s = c_str.to_string_lossy().into_owned();
            mpfr::free_str(ptr);
            let (sign, mag) = if let Some(rest) = s.strip_prefix('-') {
                ("-", rest)
            } else {
                ("", s.as_str())
            };
            // get_str scales the digit string to 0.ddd * 10^exp.
            format!("{sign}{}.{}e{}", &mag[..1], &mag[1..], exp - 1)
        }
    }
}

impl Drop for Big {
    fn drop(&mut self) {
        unsafe {
            mpfr::clear(&mut self.raw);
        }
    }
}

impl Clone for Big {
    fn clone(&self) -> Big {
        let mut x = Big::new(self.prec());
        x.set(self);
        x
    }
}

impl std::fmt::Debug for Big {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Big({}, {} bits)", self.to_sci_string(17), self.prec())
    }
}

/// Complex number as a pair of [`Big`] components at one precision.
#[derive(Clone, Debug)]
pub struct CBig {
    pub re: Big,
    pub im: Big,
}

impl CBig {
    pub fn new(prec: u32) -> CBig {
        CBig { re: Big::new(prec), im: Big::new(prec) }
    }

    pub fn zero(prec: u32) -> CBig {
        let mut z = CBig::new(prec);
        z.re.set_zero();
        z.im.set_zero();
        z
    }

    pub fn set(&mut self, other: &CBig) {
        self.re.set(&other.re);
        self.im.set(&other.im);
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// Natural log of the modulus, exponent-safe.
    pub fn ln_abs_f64(&self) -> f64 {
        let (mr, er) = self.re.to_f64_2exp();
        let (mi, ei) = self.im.to_f64_2exp();
        if mr == 0.0 && mi == 0.0 {
            return f64::NEG_INFINITY;
        }
        let e = if mr == 0.0 {
            ei
        } else if mi == 0.0 {
            er
        } else {
            er.max(ei)
        };
        let vr = scale_mantissa(mr, er - e);
        let vi = scale_mantissa(mi, ei - e);
        e as f64 * LN_2 + vr.hypot(vi).ln()
    }

    /// Principal argument in `(-pi, pi]`, computed from aligned mantissas.
    pub fn arg_f64(&self) -> f64 {
        let (mr, er) = self.re.to_f64_2exp();
        let (mi, ei) = self.im.to_f64_2exp();
        if mr == 0.0 && mi == 0.0 {
            return 0.0;
        }
        let e = if mr == 0.0 {
            ei
        } else if mi == 0.0 {
            er
        } else {
            er.max(ei)
        };
        scale_mantissa(mi, ei - e).atan2(scale_mantissa(mr, er - e))
    }
}

/// `m * 2^shift` with the shift clamped into f64 range; `shift <= 0` here.
fn scale_mantissa(m: f64, shift: i64) -> f64 {
    if m == 0.0 {
        return m;
    }
    if shift < -2000 {
        // Underflows completely; keep the sign for atan2.
        return if m < 0.0 { -0.0 } else { 0.0 };
    }
    m * (shift as f64 * LN_2).exp()
}

/// `out = x * y`; `t` is scratch. Output must not alias the inputs
/// (enforced by the borrows).
pub fn cmul(out: &mut CBig, x: &CBig, y: &CBig, t: &mut Big) {
    Big::mul(&mut out.re, &x.re, &y.re);
    Big::mul(t, &x.im, &y.im);
    out.re.sub_assign(t);
    Big::mul(&mut out.im, &x.re, &y.im);
    Big::mul(t, &x.im, &y.re);
    out.im.add_assign(t);
}

/// `out = x / y`; `t` is scratch.
pub fn cdiv(out: &mut CBig, x: &CBig, y: &CBig, t: &mut [Big; 2]) {
    let [n2, tmp] = t;
    Big::sqr(n2, &y.re);
    Big::sqr(tmp, &y.im);
    n2.add_assign(tmp);
    // x * conj(y) = (xr yr + xi yi, xi yr - xr yi)
    Big::mul(&mut out.re, &x.re, &y.re);
    Big::mul(tmp, &x.im, &y.im);
    out.re.add_assign(tmp);
    out.re.div_assign(n2);
    Big::mul(&mut out.im, &x.im, &y.re);
    Big::mul(tmp, &x.re, &y.im);
    out.im.sub_assign(tmp);
    out.im.div_assign(n2);
}

/// `out += 1 / y`; `t` is scratch.
pub fn cadd_inv(out: &mut CBig, y: &CBig, t: &mut [Big; 2]) {
    let [n2, tmp] = t;
    Big::sqr(n2, &y.re);
    Big::sqr(tmp, &y.im);
    n2.add_assign(tmp);
    Big::div(tmp, &y.re, n2);
    out.re.add_assign(tmp);
    Big::div(tmp, &y.im, n2);
    out.im.sub_assign(tmp);
}

/// `out = x - y`.
pub fn csub(out: &mut CBig, x: &CBig, y: &CBig) {
    Big::sub(&mut out.re, &x.re, &y.re);
    Big::sub(&mut out.im, &x.im, &y.im);
}
