//! A laboratory for random polynomials with log-concave coefficients.
//!
//! The crate is organized around one pipeline:
//!
//! * [`sampler`] draws random convex sequences exactly (peak index by an
//!   exact-rational inverse CDF, sides by weighted exponential sums) and maps
//!   them to coefficient models given in natural-log scale.
//! * [`theory`] evaluates the closed-form limit laws those models obey:
//!   the rate profile and its tilted form, the limit potential, the limit
//!   root measure with its radial and log-radial marginals, the finite-n
//!   profile, and the endpoint criterion quantity.
//! * [`rootsolver`] finds all complex roots of polynomials whose
//!   coefficients span thousands of nats, using simultaneous iteration in
//!   adaptive multiprecision arithmetic seeded from the coefficient Newton
//!   polygon, with a companion-matrix eigenvalue oracle for cross-checking.
//! * [`stats`] reduces root sets to empirical-measure statistics and
//!   compares them against the closed forms.
//! * [`experiment`] orchestrates reproducible Monte Carlo runs and writes
//!   JSON records, per-root CSV tables, and optional SVG scatters.
//!
//! Mathematical functions are generic over [`num_traits::Float`] where the
//! working precision is a compile-time choice; the aliases below fix the
//! default scalar used throughout the harness. The root solver's scalar is
//! a runtime-precision float and lives behind its own types.

pub mod experiment;
pub mod rootsolver;
pub mod sampler;
pub mod stats;
pub mod theory;

/// Default real scalar for sampling, statistics, and theory evaluation.
pub type Real = f64;

/// Default complex scalar for fixed-precision evaluation paths.
pub type Complex = num_complex::Complex<Real>;
