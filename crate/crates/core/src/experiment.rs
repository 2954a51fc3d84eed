//! Reproducible experiment orchestration: drawing coefficient samples,
//! solving for roots, computing comparison statistics, and persisting
//! records, long-form root tables, and scatter figures.

use crate::rootsolver::{
    audit, count_real_roots, find_roots, LogCoeffPoly, PrecisionPolicy, RootSet, SolveError,
    SolverConfig, MIN_ARG_FROM_POSITIVE_AXIS,
};
use crate::sampler::{decimal17, make_coeffs, sample_convex, Model};
use crate::stats::{
    cone_angle_gap, ks_angular, ks_log_radius, log_potential_excess_on_grid,
    log_potential_profile, median, modulus_concentration, near_origin_mass, EmpiricalRootMeasure,
};
use crate::theory;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::time::Instant;
use thiserror::Error;

/// Band half-width for the modulus concentration statistic.
pub const MODULUS_BAND: f64 = 0.1;
/// Disk radius for the near-origin mass statistic.
pub const ORIGIN_DELTA: f64 = 0.01;
/// Circle radii probed by the log-potential profile.
pub const POTENTIAL_RADII: [f64; 3] = [0.5, 1.0, 2.0];
/// Polar grid for the pointwise log-potential upper-bound check.
pub const GRID_R_MIN: f64 = 0.5;
pub const GRID_R_MAX: f64 = 2.0;
pub const GRID_RADIAL_POINTS: usize = 10;
pub const GRID_ANGULAR_POINTS: usize = 10;
/// A replicate passes the pointwise check when the grid excess stays below
/// this slack.
pub const GRID_EXCESS_SLACK: f64 = 0.1;
/// Relative imaginary-part tolerance for classifying real roots.
pub const REAL_AXIS_TOL: f64 = 1e-8;
pub const DEFAULT_ANGLES_PER_RADIUS: usize = 256;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid experiment configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("failed to serialize the experiment record: {0}")]
    Serialize(String),
    #[error("I/O failure at {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

/// Which family of statistics a run computes. Suites that do not need roots
/// skip the solver entirely.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Radial,
    Angular,
    Potential,
    Hughes,
    Origin,
    RealRoots,
    All,
}

impl Suite {
    pub fn parse(s: &str) -> Option<Suite> {
        match s {
            "radial" => Some(Suite::Radial),
            "angular" => Some(Suite::Angular),
            "potential" => Some(Suite::Potential),
            "hughes" => Some(Suite::Hughes),
            "origin" => Some(Suite::Origin),
            "realroots" => Some(Suite::RealRoots),
            "all" => Some(Suite::All),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Radial => "radial",
            Suite::Angular => "angular",
            Suite::Potential => "potential",
            Suite::Hughes => "hughes",
            Suite::Origin => "origin",
            Suite::RealRoots => "realroots",
            Suite::All => "all",
        }
    }

    pub fn needs_roots(self) -> bool {
        matches!(
            self,
            Suite::Radial | Suite::Angular | Suite::Origin | Suite::RealRoots | Suite::All
        )
    }

    fn wants(self, family: Suite) -> bool {
        self == family || self == Suite::All
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub suite: Suite,
    pub model: Model,
    pub n_values: Vec<usize>,
    pub replicates: usize,
    pub master_seed: u64,
    /// Exponent scale for the alpha model; ignored by the other models.
    pub alpha: f64,
    pub precision_policy: PrecisionPolicy,
    pub target_residual: f64,
    pub angles_per_radius: usize,
    /// When set, the record, root table, and optional figures are written
    /// here; `None` keeps the run in memory.
    pub out_dir: Option<PathBuf>,
    pub emit_svg: bool,
    /// Worker threads for replicate-level parallelism; 0 uses the global
    /// default pool.
    pub threads: usize,
}

impl ExperimentConfig {
    pub fn new(
        suite: Suite,
        model: Model,
        n_values: Vec<usize>,
        replicates: usize,
        master_seed: u64,
    ) -> Self {
        ExperimentConfig {
            suite,
            model,
            n_values,
            replicates,
            master_seed,
            alpha: 1.0,
            precision_policy: PrecisionPolicy::Auto,
            target_residual: crate::rootsolver::DEFAULT_TARGET_RESIDUAL,
            angles_per_radius: DEFAULT_ANGLES_PER_RADIUS,
            out_dir: None,
            emit_svg: false,
            threads: 0,
        }
    }

    fn validate(&self) -> Result<(), ExperimentError> {
        if self.n_values.is_empty() {
            return Err(ExperimentError::InvalidConfig(
                "n_values must be nonempty".into(),
            ));
        }
        if let Some(&bad) = self.n_values.iter().find(|&&n| n < 1) {
            return Err(ExperimentError::InvalidConfig(format!(
                "degree must be at least 1, got {bad}"
            )));
        }
        if self.replicates < 1 {
            return Err(ExperimentError::InvalidConfig(
                "replicates must be at least 1".into(),
            ));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(ExperimentError::InvalidConfig(format!(
                "alpha must be positive and finite, got {}",
                self.alpha
            )));
        }
        if !(self.target_residual > 0.0 && self.target_residual < 1.0) {
            return Err(ExperimentError::InvalidConfig(format!(
                "target residual must lie in (0, 1), got {}",
                self.target_residual
            )));
        }
        if self.angles_per_radius < 1 {
            return Err(ExperimentError::InvalidConfig(
                "angles_per_radius must be at least 1".into(),
            ));
        }
        Ok(())
    }

    fn snapshot(&self) -> ConfigSnapshot {
        ConfigSnapshot {
            suite: self.suite.name().to_string(),
            model: self.model.name().to_string(),
            n_values: self.n_values.clone(),
            replicates: self.replicates,
            master_seed: self.master_seed,
            alpha: self.alpha,
            precision: match self.precision_policy {
                PrecisionPolicy::Auto => "auto".to_string(),
                PrecisionPolicy::Fixed(bits) => bits.to_string(),
            },
            target_residual: self.target_residual,
            angles_per_radius: self.angles_per_radius,
            modulus_band: MODULUS_BAND,
            origin_delta: ORIGIN_DELTA,
            potential_radii: POTENTIAL_RADII.to_vec(),
            real_axis_tolerance: REAL_AXIS_TOL,
        }
    }
}

/// The configuration as persisted in the record, with every engineering
/// threshold the statistics used.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ConfigSnapshot {
    pub suite: String,
    pub model: String,
    pub n_values: Vec<usize>,
    pub replicates: usize,
    pub master_seed: u64,
    pub alpha: f64,
    pub precision: String,
    pub target_residual: f64,
    pub angles_per_radius: usize,
    pub modulus_band: f64,
    pub origin_delta: f64,
    pub potential_radii: Vec<f64>,
    pub real_axis_tolerance: f64,
}

/// Statistics of one replicate; fields outside the requested suite stay
/// `None`.
#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
pub struct ReplicateStats {
    pub ks_log_radius: Option<f64>,
    pub angular_ks: Option<f64>,
    pub angular_kuiper: Option<f64>,
    pub modulus_outside_band: Option<f64>,
    pub hughes_quantity: Option<f64>,
    pub near_origin_mass: Option<f64>,
    pub near_origin_envelope: Option<f64>,
    /// Near-real roots with negative real part under the classifier
    /// `|Im z| <= tol * (1 + |z|)`; includes any root whose modulus is
    /// below `tol`.
    pub negative_axis_roots: Option<usize>,
    /// Roots inside the angular cone `|arg| < MIN_ARG_FROM_POSITIVE_AXIS`
    /// around the positive real axis; a converged solve certifies this
    /// cone empty, so the count is zero whenever `converged` holds.
    pub positive_axis_roots: Option<usize>,
    pub cone_angle_gap: Option<f64>,
    /// Circular means of the scaled log-modulus, aligned with
    /// `potential_radii`.
    pub circular_means: Option<Vec<f64>>,
    /// Largest `|circular mean - limit potential|` over the probed radii.
    pub potential_mean_dev: Option<f64>,
    /// Largest pointwise excess over the limit potential on the polar grid.
    pub potential_grid_excess: Option<f64>,
    pub conjugate_excess: Option<f64>,
    pub vieta_gap: Option<f64>,
    pub min_abs_arg: Option<f64>,
    pub max_residual: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ReplicateRow {
    pub n: usize,
    pub replicate: usize,
    pub master_seed: u64,
    /// ChaCha stream index; `(master_seed, stream)` reproduces the draw.
    pub stream: u64,
    /// False when the solver stopped at its precision cap; such rows are
    /// kept but excluded from the aggregates.
    pub converged: bool,
    /// Working precision of the root solve; `None` when the suite did not
    /// solve for roots.
    pub precision_bits: Option<u32>,
    pub wall_seconds: f64,
    pub stats: ReplicateStats,
}

/// Medians over the converged replicates at one degree.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct AggregateRow {
    pub n: usize,
    pub replicates: usize,
    pub converged: usize,
    pub median_ks_log_radius: Option<f64>,
    pub median_angular_ks: Option<f64>,
    pub median_angular_kuiper: Option<f64>,
    pub median_modulus_outside_band: Option<f64>,
    pub median_hughes_quantity: Option<f64>,
    pub median_near_origin_mass: Option<f64>,
    pub median_cone_angle_gap: Option<f64>,
    pub median_potential_mean_dev: Option<f64>,
    /// Fraction of converged replicates whose grid excess stayed within
    /// the slack.
    pub grid_excess_pass_fraction: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ExperimentRecord {
    pub config: ConfigSnapshot,
    pub rows: Vec<ReplicateRow>,
    pub aggregates: Vec<AggregateRow>,
}

impl ExperimentRecord {
    /// Fraction of replicates that failed to converge.
    pub fn failed_fraction(&self) -> f64 {
        if self.rows.is_empty() {
            return 0.0;
        }
        let failed = self.rows.iter().filter(|r| !r.converged).count();
        failed as f64 / self.rows.len() as f64
    }
}

/// The generator for a given replicate: one fixed stream of the master seed
/// per `(degree, replicate)` pair, independent of scheduling.
pub fn replicate_stream(n: usize, replicate: usize) -> u64 {
    n as u64 * 1_000_000 + replicate as u64
}

pub fn seeded_rng(master_seed: u64, stream: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(master_seed);
    rng.set_stream(stream);
    rng
}

/// Runs every `(degree, replicate)` task of the configuration, aggregates
/// the converged rows, and writes the configured artifacts.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentRecord, ExperimentError> {
    config.validate()?;
    let tasks: Vec<(usize, usize)> = config
        .n_values
        .iter()
        .flat_map(|&n| (0..config.replicates).map(move |r| (n, r)))
        .collect();
    let run_all = || -> Result<Vec<(ReplicateRow, Option<RootSet>)>, ExperimentError> {
        tasks
            .par_iter()
            .map(|&(n, rep)| run_replicate(config, n, rep))
            .collect()
    };
    let results = if config.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build()
            .map_err(|e| ExperimentError::InvalidConfig(format!("thread pool: {e}")))?
            .install(run_all)?
    } else {
        run_all()?
    };

    let mut rows = Vec::with_capacity(results.len());
    let mut sets = Vec::new();
    for (row, set) in results {
        if let Some(rs) = set {
            sets.push((row.n, row.replicate, rs));
        }
        rows.push(row);
    }

    let mut aggregates = Vec::new();
    let mut seen = Vec::new();
    for &n in &config.n_values {
        if seen.contains(&n) {
            continue;
        }
        seen.push(n);
        aggregates.push(aggregate(&rows, n));
    }

    let record = ExperimentRecord {
        config: config.snapshot(),
        rows,
        aggregates,
    };
    if let Some(dir) = &config.out_dir {
        write_outputs(&record, &sets, dir, config.emit_svg)?;
    }
    Ok(record)
}

fn run_replicate(
    config: &ExperimentConfig,
    n: usize,
    replicate: usize,
) -> Result<(ReplicateRow, Option<RootSet>), ExperimentError> {
    let start = Instant::now();
    let stream = replicate_stream(n, replicate);
    let mut rng = seeded_rng(config.master_seed, stream);
    let sample = sample_convex(n, &mut rng);
    let coeffs = make_coeffs(&sample, config.model, config.alpha);
    let poly = LogCoeffPoly::from_model(&coeffs)?;
    let suite = config.suite;
    let mut stats = ReplicateStats::default();

    if suite.wants(Suite::Hughes) {
        stats.hughes_quantity =
            Some(theory::hughes_quantity(&coeffs).expect("sampled coefficients are finite"));
    }
    if suite.wants(Suite::Potential) {
        let profile = log_potential_profile(&poly, &POTENTIAL_RADII, config.angles_per_radius);
        stats.potential_mean_dev = Some(
            profile
                .iter()
                .map(|p| (p.circular_mean - p.limit_potential).abs())
                .fold(0.0, f64::max),
        );
        stats.circular_means = Some(profile.into_iter().map(|p| p.circular_mean).collect());
        stats.potential_grid_excess = Some(log_potential_excess_on_grid(
            &poly,
            GRID_R_MIN,
            GRID_R_MAX,
            GRID_RADIAL_POINTS,
            GRID_ANGULAR_POINTS,
        ));
    }

    let mut converged = true;
    let mut precision_bits = None;
    let mut root_set = None;
    if suite.needs_roots() {
        let solver_config = SolverConfig {
            target_residual: config.target_residual,
            precision_policy: config.precision_policy,
            ..SolverConfig::default()
        };
        let rs = match find_roots(&poly, &solver_config) {
            Ok(rs) => rs,
            Err(SolveError::PrecisionCapReached { partial, .. }) => *partial,
            Err(e) => return Err(e.into()),
        };
        converged = rs.converged;
        precision_bits = Some(rs.precision_bits);
        let m = EmpiricalRootMeasure::from_root_set(&rs);
        if suite.wants(Suite::Radial) {
            stats.ks_log_radius = Some(ks_log_radius(&m));
        }
        if suite.wants(Suite::Angular) {
            let a = ks_angular(&m);
            stats.angular_ks = Some(a.ks);
            stats.angular_kuiper = Some(a.kuiper);
            stats.modulus_outside_band = Some(modulus_concentration(&m, MODULUS_BAND));
        }
        if suite.wants(Suite::Origin) {
            stats.near_origin_mass = Some(near_origin_mass(&rs, ORIGIN_DELTA));
            stats.near_origin_envelope =
                Some(theory::near_origin_envelope(ORIGIN_DELTA).expect("delta in (0,1)"));
        }
        if suite.wants(Suite::RealRoots) {
            let counts = count_real_roots(&rs, REAL_AXIS_TOL);
            stats.negative_axis_roots = Some(counts.negative_axis);
            stats.positive_axis_roots = Some(
                rs.roots
                    .iter()
                    .filter(|r| r.arg.abs() < MIN_ARG_FROM_POSITIVE_AXIS)
                    .count(),
            );
            stats.cone_angle_gap = Some(cone_angle_gap(&rs));
        }
        let a = audit(&rs, &poly);
        stats.conjugate_excess = Some(a.conjugate_excess);
        stats.vieta_gap = Some(a.vieta_gap);
        stats.min_abs_arg = Some(a.min_abs_arg);
        stats.max_residual = Some(a.max_residual);
        root_set = Some(rs);
    }

    let row = ReplicateRow {
        n,
        replicate,
        master_seed: config.master_seed,
        stream,
        converged,
        precision_bits,
        wall_seconds: start.elapsed().as_secs_f64(),
        stats,
    };
    Ok((row, root_set))
}

fn aggregate(rows: &[ReplicateRow], n: usize) -> AggregateRow {
    let all: Vec<&ReplicateRow> = rows.iter().filter(|r| r.n == n).collect();
    let conv: Vec<&ReplicateRow> = all.iter().copied().filter(|r| r.converged).collect();
    let med = |get: &dyn Fn(&ReplicateStats) -> Option<f64>| -> Option<f64> {
        let vals: Vec<f64> = conv.iter().filter_map(|r| get(&r.stats)).collect();
        if vals.is_empty() {
            None
        } else {
            Some(median(&vals))
        }
    };
    let grid_pass = {
        let vals: Vec<f64> = conv
            .iter()
            .filter_map(|r| r.stats.potential_grid_excess)
            .collect();
        if vals.is_empty() {
            None
        } else {
            let passed = vals.iter().filter(|&&x| x <= GRID_EXCESS_SLACK).count();
            Some(passed as f64 / vals.len() as f64)
        }
    };
    AggregateRow {
        n,
        replicates: all.len(),
        converged: conv.len(),
        median_ks_log_radius: med(&|s| s.ks_log_radius),
        median_angular_ks: med(&|s| s.angular_ks),
        median_angular_kuiper: med(&|s| s.angular_kuiper),
        median_modulus_outside_band: med(&|s| s.modulus_outside_band),
        median_hughes_quantity: med(&|s| s.hughes_quantity),
        median_near_origin_mass: med(&|s| s.near_origin_mass),
        median_cone_angle_gap: med(&|s| s.cone_angle_gap),
        median_potential_mean_dev: med(&|s| s.potential_mean_dev),
        grid_excess_pass_fraction: grid_pass,
    }
}

/// Plain-text table of the aggregates, one line per degree; columns absent
/// from the suite are omitted.
pub fn aggregate_table(record: &ExperimentRecord) -> String {
    type Col = (&'static str, fn(&AggregateRow) -> Option<f64>);
    let candidates: [Col; 9] = [
        ("ks_log_radius", |a| a.median_ks_log_radius),
        ("angular_ks", |a| a.median_angular_ks),
        ("kuiper", |a| a.median_angular_kuiper),
        ("outside_band", |a| a.median_modulus_outside_band),
        ("hughes", |a| a.median_hughes_quantity),
        ("origin_mass", |a| a.median_near_origin_mass),
        ("cone_gap", |a| a.median_cone_angle_gap),
        ("potential_dev", |a| a.median_potential_mean_dev),
        ("grid_pass", |a| a.grid_excess_pass_fraction),
    ];
    let active: Vec<&Col> = candidates
        .iter()
        .filter(|(_, get)| record.aggregates.iter().any(|a| get(a).is_some()))
        .collect();
    let mut out = String::new();
    let _ = write!(out, "{:>6} {:>5} {:>5}", "n", "reps", "conv");
    for (name, _) in &active {
        let _ = write!(out, " {name:>14}");
    }
    out.push('\n');
    for a in &record.aggregates {
        let _ = write!(out, "{:>6} {:>5} {:>5}", a.n, a.replicates, a.converged);
        for (_, get) in &active {
            match get(a) {
                Some(v) => {
                    let _ = write!(out, " {v:>14.6e}");
                }
                None => {
                    let _ = write!(out, " {:>14}", "-");
                }
            }
        }
        out.push('\n');
    }
    out
}

fn io_err(path: &Path, source: io::Error) -> ExperimentError {
    ExperimentError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn write_outputs(
    record: &ExperimentRecord,
    sets: &[(usize, usize, RootSet)],
    dir: &Path,
    emit_svg: bool,
) -> Result<(), ExperimentError> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let record_path = dir.join("record.json");
    let json = serde_json::to_string_pretty(record)
        .map_err(|e| ExperimentError::Serialize(e.to_string()))?;
    fs::write(&record_path, json).map_err(|e| io_err(&record_path, e))?;

    if !sets.is_empty() {
        let csv_path = dir.join("roots.csv");
        let mut buf = String::from("n,replicate,stream,converged,re,im,abs,arg,log_abs,residual\n");
        for (n, rep, rs) in sets {
            let stream = replicate_stream(*n, *rep);
            for (root, residual) in rs.roots.iter().zip(&rs.residuals) {
                let _ = writeln!(
                    buf,
                    "{n},{rep},{stream},{},{},{},{},{},{},{}",
                    rs.converged,
                    root.re_text,
                    root.im_text,
                    root.abs_text,
                    decimal17(root.arg),
                    decimal17(root.log_abs),
                    decimal17(*residual),
                );
            }
        }
        fs::write(&csv_path, buf).map_err(|e| io_err(&csv_path, e))?;

        if emit_svg {
            for (n, rep, rs) in sets {
                if *rep != 0 {
                    continue;
                }
                let svg_path = dir.join(format!("roots_n{n}.svg"));
                fs::write(&svg_path, render_svg(rs)).map_err(|e| io_err(&svg_path, e))?;
            }
        }
    }
    Ok(())
}

/// Minimal scatter of the roots on the fixed viewport `[-2, 2]^2`, with the
/// unit circle as a guide; the vertical axis points up.
pub fn render_svg(rs: &RootSet) -> String {
    let mut s = String::from(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-2 -2 4 4\" \
         width=\"480\" height=\"480\">\n",
    );
    s.push_str("<rect x=\"-2\" y=\"-2\" width=\"4\" height=\"4\" fill=\"white\"/>\n");
    s.push_str(
        "<circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"#cccccc\" \
         stroke-width=\"0.008\"/>\n",
    );
    for root in &rs.roots {
        // exp() only for points that can land in the viewport; huge moduli
        // would overflow f64.
        if root.log_abs > 1.2 {
            continue;
        }
        let r = root.log_abs.exp();
        let x = r * root.arg.cos();
        let y = -(r * root.arg.sin());
        if x.abs() > 2.05 || y.abs() > 2.05 {
            continue;
        }
        let _ = writeln!(
            s,
            "<circle cx=\"{x:.5}\" cy=\"{y:.5}\" r=\"0.012\" fill=\"#1f4d8f\" \
             fill-opacity=\"0.75\"/>"
        );
    }
    s.push_str("</svg>\n");
    s
}
