//! The five experiments. Each returns its rendered output together with any
//! invariant violations it found.

use std::fmt;
use std::path::PathBuf;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;
use vilenkin_core::approx::{lemma1_construct, Lemma1Report};
use vilenkin_core::battery::{battery, ensure_nonzero, nonnegative_battery};
use vilenkin_core::operators::tail_deviations;
use vilenkin_core::orlicz::PhiFunction;
use vilenkin_core::seeding::stream;
use vilenkin_core::system::dirichlet_kernel;
use vilenkin_core::weak_type::{
    exhaustive_restricted_constants, fit_hm, generalized_weak_check, search_restricted_constants, SearchResult,
};
use vilenkin_core::{LevelFunction, NaiveTransform, OperatorFamily, TransformPlan};

use crate::config::{ConfigError, Experiment, ExperimentConfig, FamilyChoice};
use crate::table::{Cell, CsvTable};

/// Relative error allowed between the fast transform and the oracle.
pub const TRANSFORM_TOLERANCE: f64 = 1e-10;

#[derive(Debug)]
pub enum CliError {
    Config(ConfigError),
    Core(vilenkin_core::Error),
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    /// Process exit code: 2 for configuration and I/O problems, 1 for a
    /// counterexample surfaced as a core error.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(vilenkin_core::Error::UnboundedWitness { .. }) => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(e) => e.fmt(f),
            CliError::Core(e) => write!(f, "error: {e}"),
            CliError::Io { path, source } => write!(f, "error: {}: {source}", path.display()),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

impl From<vilenkin_core::Error> for CliError {
    fn from(e: vilenkin_core::Error) -> Self {
        CliError::Core(e)
    }
}

/// Rendered result of one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub body: String,
    /// Extra JSON document written next to the main output (weaktype fit).
    pub sidecar: Option<String>,
    pub violations: Vec<String>,
}

impl Outcome {
    pub fn exit_code(&self) -> u8 {
        if self.violations.is_empty() {
            0
        } else {
            1
        }
    }
}

pub fn run(config: &ExperimentConfig) -> Result<Outcome, CliError> {
    match config.experiment {
        Experiment::TransformCheck => run_transform_check(config),
        Experiment::Weaktype => run_weaktype(config),
        Experiment::Extrapolation => run_extrapolation(config),
        Experiment::Lemma1 => run_lemma1(config),
        Experiment::Convergence => run_convergence(config),
    }
}

fn table_outcome(config: &ExperimentConfig, table: &CsvTable, violations: Vec<String>) -> Outcome {
    Outcome {
        body: table.render(&config.hash()),
        sidecar: None,
        violations,
    }
}

fn sup_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn sup_norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// Fast transform against the dense oracle on `trials` random functions.
/// Columns `trial,forward_error,inverse_error,roundtrip_error`, all relative
/// sup-norm errors.
pub fn run_transform_check(config: &ExperimentConfig) -> Result<Outcome, CliError> {
    let radix = config.radix();
    let plan = TransformPlan::new(radix.clone());
    let naive = NaiveTransform::new(radix.clone());
    let mut table = CsvTable::new(&["trial", "forward_error", "inverse_error", "roundtrip_error"]);
    let mut violations = Vec::new();
    for trial in 0..config.trials {
        let mut rng = stream(config.seed, trial as u64);
        let f = LevelFunction::from_fn(radix.clone(), |_| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let fast = plan.forward(&f)?;
        let slow = naive.forward(&f)?;
        let forward = sup_distance(fast.coeffs(), slow.coeffs()) / sup_norm(slow.coeffs());
        let back = plan.inverse(&slow)?;
        let back_slow = naive.inverse(&slow)?;
        let inverse = sup_distance(back.values(), back_slow.values()) / sup_norm(back_slow.values());
        let roundtrip = sup_distance(plan.inverse(&fast)?.values(), f.values()) / sup_norm(f.values());
        for (name, err) in [("forward", forward), ("inverse", inverse), ("roundtrip", roundtrip)] {
            if !(err < TRANSFORM_TOLERANCE) {
                violations.push(format!("trial {trial}: {name} error {err:e} exceeds {TRANSFORM_TOLERANCE:e}"));
            }
        }
        table.push(vec![trial.into(), forward.into(), inverse.into(), roundtrip.into()]);
    }
    Ok(table_outcome(config, &table, violations))
}

fn family(config: &ExperimentConfig) -> OperatorFamily {
    match config.family {
        FamilyChoice::PartialSums => OperatorFamily::all_partial_sums(config.radix()),
        FamilyChoice::Identity => OperatorFamily::identity(config.radix()),
    }
}

/// Restricted weak-type constants over `p_grid`, columns
/// `p,C_p,witness_set_size`; the sidecar holds the growth fit.
pub fn run_weaktype(config: &ExperimentConfig) -> Result<Outcome, CliError> {
    let family = family(config);
    let results: Vec<SearchResult> = if config.exhaustive {
        exhaustive_restricted_constants(&family, &config.p_grid)?
    } else {
        search_restricted_constants(&family, &config.p_grid, config.trials, config.seed)?
    };
    let mut table = CsvTable::new(&["p", "C_p", "witness_set_size"]);
    for r in &results {
        table.push(vec![r.p.into(), r.constant.into(), r.set.len().into()]);
    }
    let constants: Vec<f64> = results.iter().map(|r| r.constant).collect();
    let fit = fit_hm(&config.p_grid, &constants)?;
    let mut sidecar = serde_json::to_string_pretty(&fit).expect("fit serializes");
    sidecar.push('\n');
    let mut outcome = table_outcome(config, &table, Vec::new());
    outcome.sidecar = Some(sidecar);
    Ok(outcome)
}

/// Generalized weak-type table with `phi_m` over the battery, columns
/// `epsilon,C,worst_f_id,margin`. Negative margins and `C` increasing in
/// epsilon are violations.
pub fn run_extrapolation(config: &ExperimentConfig) -> Result<Outcome, CliError> {
    let family = family(config);
    let phi = PhiFunction::new(config.phi_m)?;
    let tests = battery(&config.radix(), config.battery_size, config.seed);
    ensure_nonzero(&tests)?;
    let rows = generalized_weak_check(&family, phi, &tests, &config.eps_grid, &config.lambda_grid)?;
    let mut table = CsvTable::new(&["epsilon", "C", "worst_f_id", "margin"]);
    let mut violations = Vec::new();
    for row in &rows {
        if row.margin < 0.0 {
            violations.push(format!(
                "negative margin {} at epsilon = {} ({})",
                row.margin, row.epsilon, row.worst_f_id
            ));
        }
        table.push(vec![
            row.epsilon.into(),
            row.c.into(),
            row.worst_f_id.as_str().into(),
            row.margin.into(),
        ]);
    }
    let mut by_eps: Vec<(f64, f64)> = rows.iter().map(|r| (r.epsilon, r.c)).collect();
    by_eps.sort_by(|a, b| a.0.total_cmp(&b.0));
    for w in by_eps.windows(2) {
        if w[1].0 > w[0].0 && w[1].1 > w[0].1 {
            violations.push(format!("C increases from {} to {} between epsilon = {} and {}", w[0].1, w[1].1, w[0].0, w[1].0));
        }
    }
    Ok(table_outcome(config, &table, violations))
}

#[derive(Serialize)]
struct FunctionReport<'a> {
    f_id: &'a str,
    #[serde(flatten)]
    report: Lemma1Report,
}

#[derive(Serialize)]
struct Lemma1Document<'a> {
    config_hash: String,
    pass: bool,
    reports: Vec<FunctionReport<'a>>,
}

/// Simple-function approximation of every non-negative battery function with the
/// Dirichlet kernels `D_j`, `j` in `kernels`. A failed report, or a band
/// residual of one atom or more, is a violation.
pub fn run_lemma1(config: &ExperimentConfig) -> Result<Outcome, CliError> {
    let radix = config.radix();
    let kernels = config
        .kernels
        .iter()
        .map(|&j| dirichlet_kernel(&radix, j))
        .collect::<Result<Vec<_>, _>>()?;
    let tests = nonnegative_battery(&radix, config.battery_size, config.seed);
    let atom = radix.haar().atom_mass();
    let mut reports = Vec::new();
    let mut violations = Vec::new();
    for (id, f) in &tests {
        let report = lemma1_construct(f, &kernels, None, config.epsilon)?.report;
        if !report.pass {
            violations.push(format!(
                "{id}: measured {} is not below epsilon + slack = {}",
                report.measured_integral,
                report.epsilon + report.slack
            ));
        }
        for (n, (res, a)) in report.residuals.iter().zip(&report.levels[1..]).enumerate() {
            if !(*res < a * atom) {
                violations.push(format!("{id}: band {} residual {res} is not below a_n / M_N", n + 1));
            }
        }
        reports.push(FunctionReport { f_id: id, report });
    }
    let document = Lemma1Document {
        config_hash: config.hash(),
        pass: violations.is_empty(),
        reports,
    };
    let mut body = serde_json::to_string_pretty(&document).expect("report serializes");
    body.push('\n');
    Ok(Outcome {
        body,
        sidecar: None,
        violations,
    })
}

/// Exceptional-set measures `mu({max_{J <= j <= M_N} |S_j f - f| > lambda})`
/// for `J = M_0, ..., M_N`, columns `J,lambda,measure,f_id`. A non-zero
/// measure at `J = M_N`, or a measure growing with `J`, is a violation.
pub fn run_convergence(config: &ExperimentConfig) -> Result<Outcome, CliError> {
    let radix = config.radix();
    let m = radix.order();
    let starts = radix.blocks().to_vec();
    let tests = battery(&radix, config.battery_size, config.seed);
    let mut table = CsvTable::new(&["J", "lambda", "measure", "f_id"]);
    let mut violations = Vec::new();
    for (id, f) in &tests {
        let deviations = tail_deviations(f, &starts)?;
        for &lambda in &config.lambda_grid {
            let mut previous = f64::INFINITY;
            for (i, &j) in starts.iter().enumerate() {
                let count = deviations.iter().filter(|d| d[i] > lambda).count();
                let measure = radix.haar().measure(count);
                if j == m && count != 0 {
                    violations.push(format!("{id}: measure {measure} at J = M_N, lambda = {lambda}"));
                }
                if measure > previous {
                    violations.push(format!("{id}: measure grows at J = {j}, lambda = {lambda}"));
                }
                previous = measure;
                table.push(vec![j.into(), lambda.into(), measure.into(), Cell::Text(id.clone())]);
            }
        }
    }
    Ok(table_outcome(config, &table, violations))
}
