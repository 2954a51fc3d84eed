//! Exact generation of random convex sequences and their coefficient models.
//!
//! A random convex sequence of degree `n` is a V-shaped vector
//! `W_0 > ... > W_R < ... < W_n` with strictly convex sides. It is drawn in
//! two stages: the peak index `R` follows an explicit pmf proportional to
//! `C(n+1,i) * C(n+1,i+1)`, and conditionally on `R` each side is a weighted
//! sum of independent standard exponentials with triangular-number weights.
//! Both stages are sampled exactly: the peak by an inverse-CDF walk over
//! exact rationals (log-gamma floats with compensated summation past
//! `n = 500`), the sides in closed form.
//!
//! A brute-force rejection sampler over unconditioned exponentials serves as
//! ground truth for small `n`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Hard ceiling on the degree accepted by [`rejection_oracle`].
pub const REJECTION_MAX_DEGREE: usize = 12;

/// Attempt budget for one accepted rejection sample.
pub const REJECTION_MAX_ATTEMPTS: u64 = 100_000_000;

/// Largest degree for which the peak CDF is kept in exact rationals.
const EXACT_PEAK_DEGREE: usize = 500;

/// Errors from the sampling operations.
#[derive(Debug, Error)]
pub enum SamplerError {
    #[error("rejection sampling is limited to n <= {REJECTION_MAX_DEGREE}, got n = {0}")]
    RejectionDegreeTooLarge(usize),
    #[error("rejection sampling found no log-concave draw in {REJECTION_MAX_ATTEMPTS} attempts")]
    RejectionExhausted,
}

/// Violations of the [`ConvexSample`] shape contract.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ShapeError {
    #[error("length {len} does not equal n + 1 = {expected}")]
    Length { len: usize, expected: usize },
    #[error("peak index {r} out of range 0..={n}")]
    PeakOutOfRange { r: usize, n: usize },
    #[error("w[{0}] is not strictly positive")]
    NotPositive(usize),
    #[error("w is not strictly decreasing at index {0}")]
    NotDecreasing(usize),
    #[error("w is not strictly increasing at index {0}")]
    NotIncreasing(usize),
    #[error("second difference at index {0} is not strictly positive")]
    NotConvex(usize),
}

/// Coefficient ensembles derived from one convex sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// Coefficients `a_k = exp(-W_k)`, log-coefficients `-W_k`.
    Uniform,
    /// Coefficients `b_k = a_k^n`, log-coefficients `-n * W_k`.
    Beta,
    /// Coefficients `a_k^(n^alpha)`, log-coefficients `-n^alpha * W_k`.
    #[serde(rename = "alpha")]
    AlphaScaled,
}

impl Model {
    /// Name used by the CLI and the JSON documents.
    pub fn name(self) -> &'static str {
        match self {
            Model::Uniform => "uniform",
            Model::Beta => "beta",
            Model::AlphaScaled => "alpha",
        }
    }

    /// Parses the CLI spelling of a model name.
    pub fn parse(s: &str) -> Option<Model> {
        match s {
            "uniform" => Some(Model::Uniform),
            "beta" => Some(Model::Beta),
            "alpha" => Some(Model::AlphaScaled),
            _ => None,
        }
    }
}

/// One draw of the random convex sequence.
///
/// Invariants (checked by [`ConvexSample::validate`]):
/// * `w.len() == n + 1` and every entry is strictly positive;
/// * `w` strictly decreases on `0..=r_peak` and strictly increases on
///   `r_peak..=n` (either side may be empty);
/// * second differences are strictly positive within each side, so
///   `exp(-w)` is strictly log-concave.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexSample {
    pub n: usize,
    pub r_peak: usize,
    pub w: Vec<f64>,
}

impl ConvexSample {
    /// Checks the full shape contract, reporting the first violation.
    pub fn validate(&self) -> Result<(), ShapeError> {
        let n = self.n;
        let r = self.r_peak;
        if self.w.len() != n + 1 {
            return Err(ShapeError::Length { len: self.w.len(), expected: n + 1 });
        }
        if r > n {
            return Err(ShapeError::PeakOutOfRange { r, n });
        }
        for (k, &wk) in self.w.iter().enumerate() {
            if !(wk > 0.0) {
                return Err(ShapeError::NotPositive(k));
            }
        }
        for k in 0..r {
            if !(self.w[k] > self.w[k + 1]) {
                return Err(ShapeError::NotDecreasing(k));
            }
        }
        for k in r..n {
            if !(self.w[k + 1] > self.w[k]) {
                return Err(ShapeError::NotIncreasing(k));
            }
        }
        // Convexity is per side; the kink at the peak is exempt.
        for k in 0..n.saturating_sub(1) {
            if k + 2 <= r || k >= r {
                let dd = self.w[k] - 2.0 * self.w[k + 1] + self.w[k + 2];
                if !(dd > 0.0) {
                    return Err(ShapeError::NotConvex(k));
                }
            }
        }
        Ok(())
    }
}

/// Log-scale coefficients of one model instance.
///
/// `log_coeffs[k]` is the natural log of the (strictly positive) degree-`k`
/// coefficient. Built from a [`ConvexSample`], the sequence is strictly
/// log-concave: `L_{k-1} + L_{k+1} < 2 L_k` for interior `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelCoeffs {
    pub model: Model,
    pub alpha: f64,
    pub log_coeffs: Vec<f64>,
}

impl ModelCoeffs {
    /// Degree of the polynomial.
    pub fn degree(&self) -> usize {
        self.log_coeffs.len() - 1
    }
}

/// Exact pmf of the peak index: `P(R = i)` for `i = 0..=n`.
///
/// `P(R = i) = ((n+2)/(n+1)) * C(n+1,i) * C(n+1,i+1) / C(2n+2,n+1)`.
/// The entries are exact, symmetric under `i -> n - i`, and sum to one.
/// `n = 0` returns the degenerate distribution `{1}`.
pub fn peak_pmf(n: usize) -> Vec<BigRational> {
    if n == 0 {
        return vec![BigRational::one()];
    }
    let m = n + 1;
    let scale = BigRational::new(
        BigInt::from(n + 2),
        BigInt::from(n + 1) * binomial(2 * m, m),
    );
    (0..=n)
        .map(|i| &scale * BigRational::from(binomial(m, i) * binomial(m, i + 1)))
        .collect()
}

/// Exact binomial coefficient `C(n, k)`.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    // acc stays integral after each step: C(n, j) = C(n, j-1) * (n-j+1) / j.
    for j in 1..=k {
        acc = acc * BigUint::from(n - j + 1) / BigUint::from(j);
    }
    BigInt::from(acc)
}

/// Cached inverse-CDF sampler for the peak index.
///
/// For `n <= 500` the cumulative sums are exact rationals and the uniform
/// variate is refined 64 bits at a time until it separates from every cut
/// point, so no tail mass is ever truncated. Past that the pmf is formed
/// from log-gamma values and accumulated with compensated summation.
pub struct PeakDistribution {
    n: usize,
    cdf: PeakCdf,
}

enum PeakCdf {
    Exact(Vec<BigRational>),
    Float(Vec<f64>),
}

impl PeakDistribution {
    pub fn new(n: usize) -> Self {
        let cdf = if n <= EXACT_PEAK_DEGREE {
            let mut acc = BigRational::zero();
            let cum = peak_pmf(n)
                .into_iter()
                .map(|p| {
                    acc += p;
                    acc.clone()
                })
                .collect();
            PeakCdf::Exact(cum)
        } else {
            PeakCdf::Float(float_peak_cdf(n))
        };
        PeakDistribution { n, cdf }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Draws one peak index.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        match &self.cdf {
            PeakCdf::Exact(cum) => sample_exact_cdf(cum, rng),
            PeakCdf::Float(cum) => {
                let total = *cum.last().expect("nonempty cdf");
                let u = rng.gen::<f64>() * total;
                // partition_point returns the first index with cum > u.
                let i = cum.partition_point(|&c| c <= u);
                i.min(self.n)
            }
        }
    }
}

/// Walks an exact rational CDF with a lazily extended binary uniform.
///
/// The uniform variate is known only as an interval `[u, u + 2^-64b)`; the
/// binary search widens the variate by another 64-bit block whenever the
/// interval straddles a cut point, so the returned index is exact.
fn sample_exact_cdf<R: Rng + ?Sized>(cum: &[BigRational], rng: &mut R) -> usize {
    let mut num = BigUint::zero();
    let mut bits = 0u64;
    loop {
        num = (num << 64) | BigUint::from(rng.gen::<u64>());
        bits += 64;
        let lo = BigRational::new(BigInt::from(num.clone()), pow2(bits));
        let hi = BigRational::new(BigInt::from(num.clone() + BigUint::one()), pow2(bits));
        // First index whose cumulative mass exceeds the whole interval.
        // The last cumulative sum is exactly 1 and lo < 1, so i is in range.
        let i = cum.partition_point(|c| c <= &lo);
        if hi <= cum[i] {
            return i;
        }
    }
}

fn pow2(bits: u64) -> BigInt {
    BigInt::from(BigUint::one() << bits as usize)
}

/// Float-path peak CDF for large `n`, with Kahan compensation.
fn float_peak_cdf(n: usize) -> Vec<f64> {
    use statrs::function::gamma::ln_gamma;
    let m = (n + 1) as f64;
    let ln_c = |top: f64, bot: f64| ln_gamma(top + 1.0) - ln_gamma(bot + 1.0) - ln_gamma(top - bot + 1.0);
    let ln_norm = ((n + 2) as f64).ln() - m.ln() - ln_c(2.0 * m, m);
    let mut cum = Vec::with_capacity(n + 1);
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for i in 0..=n {
        let p = (ln_norm + ln_c(m, i as f64) + ln_c(m, (i + 1) as f64)).exp();
        let y = p - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        cum.push(sum);
    }
    cum
}

/// Standard exponential via inverse CDF, with the uniform kept away from 0.
fn exp1<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // gen::<f64>() is uniform on [0, 1); 1 - u lies in (0, 1].
    -(1.0 - rng.gen::<f64>()).ln()
}

/// Reusable sampler for convex sequences of one fixed degree.
pub struct ConvexSampler {
    peak: PeakDistribution,
}

impl ConvexSampler {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "degree must be positive");
        ConvexSampler { peak: PeakDistribution::new(n) }
    }

    pub fn n(&self) -> usize {
        self.peak.n()
    }

    /// Draws one convex sequence. Consumes, in order, one peak index,
    /// one exponential for the level, then the left-side and right-side
    /// exponentials.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> ConvexSample {
        let n = self.peak.n();
        let r = self.peak.sample(rng);
        let e0 = exp1(rng);
        let left: Vec<f64> = (0..r).map(|_| exp1(rng)).collect();
        let right: Vec<f64> = (0..n - r).map(|_| exp1(rng)).collect();
        convex_from_parts(n, r, e0, &left, &right)
    }
}

/// Draws one convex sequence of degree `n`.
///
/// One-shot convenience over [`ConvexSampler`]; building the peak
/// distribution dominates, so batch callers should reuse a sampler.
pub fn sample_convex<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ConvexSample {
    ConvexSampler::new(n).sample(rng)
}

/// Draws one peak index of degree `n`.
pub fn sample_peak<R: Rng + ?Sized>(n: usize, rng: &mut R) -> usize {
    assert!(n >= 1, "degree must be positive");
    PeakDistribution::new(n).sample(rng)
}

/// Assembles the V-shaped sequence from its independent ingredients.
///
/// With `T_r = r(r+1)/2` and writing `A_k = sum_{m<=k} E_m / T_(side)`,
/// `B_k = sum_{m<=k} m E_m / T_(side)`, the side values telescope to
/// `W = E_0/(n+1) + (k+1) A_k - B_k`, one update per step.
pub(crate) fn convex_from_parts(
    n: usize,
    r: usize,
    e0: f64,
    left: &[f64],
    right: &[f64],
) -> ConvexSample {
    debug_assert_eq!(left.len(), r);
    debug_assert_eq!(right.len(), n - r);
    let tri = |k: usize| (k as f64) * (k as f64 + 1.0) / 2.0;
    let base = e0 / (n as f64 + 1.0);
    let mut w = vec![0.0f64; n + 1];
    w[r] = base;
    let mut a = 0.0f64;
    let mut b = 0.0f64;
    for k in 1..=r {
        let t = tri(r - k + 1);
        a += left[k - 1] / t;
        b += (k as f64) * left[k - 1] / t;
        w[r - k] = base + (k as f64 + 1.0) * a - b;
    }
    a = 0.0;
    b = 0.0;
    for k in 1..=(n - r) {
        let t = tri(n - r - k + 1);
        a += right[k - 1] / t;
        b += (k as f64) * right[k - 1] / t;
        w[r + k] = base + (k as f64 + 1.0) * a - b;
    }
    ConvexSample { n, r_peak: r, w }
}

/// Ground-truth sampler: i.i.d. standard exponentials conditioned on
/// nonnegative second differences, by plain rejection.
///
/// Returns the accepted vector `(X_0..X_n)`. The acceptance probability
/// collapses combinatorially in `n`, hence the degree cap and the attempt
/// budget.
pub fn rejection_oracle<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Vec<f64>, SamplerError> {
    if n > REJECTION_MAX_DEGREE {
        return Err(SamplerError::RejectionDegreeTooLarge(n));
    }
    let mut x = vec![0.0f64; n + 1];
    for _ in 0..REJECTION_MAX_ATTEMPTS {
        for xi in x.iter_mut() {
            *xi = exp1(rng);
        }
        let convex = (1..n).all(|i| x[i - 1] - 2.0 * x[i] + x[i + 1] >= 0.0);
        if convex {
            return Ok(x);
        }
    }
    Err(SamplerError::RejectionExhausted)
}

/// Maps a convex sequence to model log-coefficients.
///
/// `alpha` is only read for [`Model::AlphaScaled`] and must be positive
/// there. No coefficient is ever materialized in linear scale.
pub fn make_coeffs(s: &ConvexSample, model: Model, alpha: f64) -> ModelCoeffs {
    let scale = match model {
        Model::Uniform => 1.0,
        Model::Beta => s.n as f64,
        Model::AlphaScaled => {
            assert!(alpha > 0.0, "alpha must be positive for the alpha-scaled model");
            (s.n as f64).powf(alpha)
        }
    };
    ModelCoeffs {
        model,
        alpha: if model == Model::AlphaScaled { alpha } else { 1.0 },
        log_coeffs: s.w.iter().map(|&wk| -scale * wk).collect(),
    }
}

/// Serialized form of one draw: sample plus model view, numbers as decimal
/// strings with 17 significant digits.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampleDocument {
    pub n: usize,
    pub model: Model,
    pub alpha: f64,
    pub seed: u64,
    /// Stream index used with the master seed for this draw.
    pub stream: u64,
    #[serde(rename = "R")]
    pub r_peak: usize,
    #[serde(rename = "W")]
    pub w: Vec<String>,
    pub log_coeffs: Vec<String>,
}

/// Decimal with 17 significant digits, enough to round-trip any f64.
pub fn decimal17(x: f64) -> String {
    format!("{x:.16e}")
}

impl SampleDocument {
    pub fn new(sample: &ConvexSample, coeffs: &ModelCoeffs, seed: u64, stream: u64) -> Self {
        SampleDocument {
            n: sample.n,
            model: coeffs.model,
            alpha: coeffs.alpha,
            seed,
            stream,
            r_peak: sample.r_peak,
            w: sample.w.iter().map(|&x| decimal17(x)).collect(),
            log_coeffs: coeffs.log_coeffs.iter().map(|&x| decimal17(x)).collect(),
        }
    }

    /// Parses the stored log-coefficients back to binary floats.
    pub fn log_coeffs_f64(&self) -> Result<Vec<f64>, std::num::ParseFloatError> {
        self.log_coeffs.iter().map(|s| s.parse::<f64>()).collect()
    }

    /// Parses the stored sequence values back to binary floats.
    pub fn w_f64(&self) -> Result<Vec<f64>, std::num::ParseFloatError> {
        self.w.iter().map(|s| s.parse::<f64>()).collect()
    }
}
