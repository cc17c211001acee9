//! `folia` — command-line front end for the exact deformation toolkit.
//!
//! Every subcommand reads one JSON object (from `--input` or stdin), runs
//! a single engine operation, and writes a versioned JSON report (to
//! `--output` or stdout) plus a one-line summary on stderr.  Exit codes
//! follow a strict three-way split:
//!
//! * `0` — computed, and the property holds (integrable, exact,
//!   classified, no obstruction).
//! * `1` — computed, and the property fails; the report carries an exact
//!   witness (defect form, residues, obstruction order).
//! * `2` — the input or a hypothesis was rejected before the question
//!   could be decided.
//!
//! Identical inputs produce byte-identical reports: all engine types
//! serialize from ordered maps, the envelope has a fixed field order, and
//! the only sampled computation (the heuristic fiber probe) runs on a
//! fixed, overridable seed.

pub mod inputs;
pub mod report;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use folia_core::fiber::{FactoredFiber, ProbeOptions};
use folia_core::integrate::{
    classify_degree_one, radial_test, reconstruct_first_integral, rescale_deformation,
    ClassificationResult, ClassifyWitness, RadialTestResult, ReconstructOutcome,
};
use folia_core::period::QuadratureOptions;
use folia_core::series::{deformation_equations, integrability_defects};
use folia_core::{decompose, obstruction_series, Cycle};

use inputs::{
    ClassifyInput, DecomposeInput, DeformationInput, FormInput, RescaleInput, SeriesInput,
};
use report::{Report, Status};

/// The eight engine operations exposed by the CLI.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::Subcommand)]
pub enum Command {
    /// Expand ω_t∧dω_t and check every order for exact vanishing.
    CheckIntegrable,
    /// Write out the order-by-order deformation equations of a series.
    DeformationEquations,
    /// Decompose a 1-form as a·df + dh + Σλⱼ·(f·θⱼ) over a fiber.
    Decompose,
    /// Integrate a deformation over cycles, order by order.
    Periods,
    /// Reconstruct a polynomial first integral or report the obstruction.
    FirstIntegral,
    /// Classify an integrable degree-one deformation over two factors.
    ClassifyDegreeOne,
    /// Rescale a 1-form with exact lowest part into a deformation.
    Rescale,
    /// Decide the radial dichotomy for a homogeneous integrable 1-form.
    RadialTest,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::CheckIntegrable => "check-integrable",
            Command::DeformationEquations => "deformation-equations",
            Command::Decompose => "decompose",
            Command::Periods => "periods",
            Command::FirstIntegral => "first-integral",
            Command::ClassifyDegreeOne => "classify-degree-one",
            Command::Rescale => "rescale",
            Command::RadialTest => "radial-test",
        }
    }
}

/// Flag-level knobs; `None` keeps an engine default.
#[derive(Clone, Debug)]
pub struct JobOptions {
    /// Quadrature tolerance (`--tol`).
    pub tol: Option<f64>,
    /// Quadrature node cap (`--max-nodes`).
    pub max_nodes: Option<usize>,
    /// Truncation override for `rescale` (`--order`).
    pub order: Option<usize>,
    /// Seed for the heuristic fiber probe (`--seed`).
    pub seed: u64,
}

impl Default for JobOptions {
    fn default() -> Self {
        JobOptions { tol: None, max_nodes: None, order: None, seed: 7 }
    }
}

impl JobOptions {
    fn quadrature(&self) -> QuadratureOptions {
        let mut q = QuadratureOptions::default();
        if let Some(tol) = self.tol {
            q.tol = tol;
        }
        if let Some(n) = self.max_nodes {
            q.n_max = n;
        }
        q
    }
}

/// A finished run: the report bytes, the summary line for stderr, and the
/// process exit code.
pub struct Outcome {
    pub report_json: Vec<u8>,
    pub summary: String,
    pub exit_code: i32,
}

/// Runs one job from raw input JSON to a finished report.  Never panics
/// on user data; every rejection becomes an exit-2 report.
pub fn run_job(command: Command, input_json: &str, opts: &JobOptions) -> Outcome {
    let name = command.name();
    let (report, detail) = match dispatch(command, input_json, opts) {
        Ok((status, echo, result, detail)) => {
            (Report::success(name, status, echo, result), detail)
        }
        Err(failure) => {
            let detail = failure.message.clone();
            (Report::failure(name, failure.input, failure.message), detail)
        }
    };
    let tag = match report.status {
        Status::Holds => "holds",
        Status::Fails => "fails",
        Status::Error => "error",
    };
    Outcome {
        report_json: report.to_json_bytes(),
        summary: format!("{name}: {tag} — {detail}"),
        exit_code: report.exit_code,
    }
}

/// An exit-2 rejection: message plus the input echo when parsing got that
/// far.
struct Failure {
    input: Option<Value>,
    message: String,
}

type Success = (Status, Value, Value, String);

fn dispatch(command: Command, input_json: &str, opts: &JobOptions) -> Result<Success, Failure> {
    match command {
        Command::CheckIntegrable => check_integrable(input_json),
        Command::DeformationEquations => equations(input_json),
        Command::Decompose => run_decompose(input_json, opts),
        Command::Periods => periods(input_json, opts),
        Command::FirstIntegral => first_integral(input_json, opts),
        Command::ClassifyDegreeOne => classify(input_json, opts),
        Command::Rescale => rescale(input_json, opts),
        Command::RadialTest => radial(input_json),
    }
}

/// Parses the command input and returns it with its canonical echo.
fn parse<T: DeserializeOwned + Serialize>(input_json: &str) -> Result<(T, Value), Failure> {
    let parsed: T = serde_json::from_str(input_json)
        .map_err(|e| Failure { input: None, message: format!("invalid input: {e}") })?;
    let echo = serde_json::to_value(&parsed).expect("parsed inputs re-serialize");
    Ok((parsed, echo))
}

fn engine_err(input: &Value, message: impl ToString) -> Failure {
    Failure { input: Some(input.clone()), message: message.to_string() }
}

/// Heuristic transversality probe for fibers in ≥ 3 variables; `Null` in
/// the plane, where two coprime homogeneous factors meet only at the
/// origin and there is nothing to sample.  Evidence against the
/// normal-crossing hypothesis is a rejection.
fn probe_fiber(fiber: &FactoredFiber, seed: u64) -> Result<Value, String> {
    if fiber.vars().len() <= 2 {
        return Ok(Value::Null);
    }
    let options = ProbeOptions { seed, ..ProbeOptions::default() };
    let probe = fiber
        .transversality_probe(&options)
        .map_err(|e| format!("fiber validation: {e}"))?;
    if !probe.all_independent {
        let worst = probe.pairs.iter().find(|p| !p.independent).expect("a pair failed");
        return Err(format!(
            "fiber validation: gradients of factors {} and {} look dependent on their \
             intersection (min singular ratio {:.3e}); the crossing hypothesis appears violated",
            worst.i, worst.j, worst.min_singular_ratio
        ));
    }
    Ok(serde_json::to_value(&probe).expect("probe reports serialize"))
}

fn resolve_cycles(
    specs: &[inputs::CycleSpec],
    fiber: &FactoredFiber,
) -> Result<Vec<Cycle>, String> {
    specs.iter().map(|spec| spec.resolve(fiber)).collect()
}

fn check_integrable(input_json: &str) -> Result<Success, Failure> {
    let (input, echo) = parse::<SeriesInput>(input_json)?;
    let report = integrability_defects(&input.series);
    let (status, detail) = match report.first_defect_order {
        None => (
            Status::Holds,
            format!(
                "ω_t∧dω_t vanishes at every order 0..={}; the family is integrable for all t",
                2 * report.truncation
            ),
        ),
        Some(k) => (Status::Fails, format!("first nonzero integrability defect at order {k}")),
    };
    Ok((status, echo, json!({ "integrability": report }), detail))
}

fn equations(input_json: &str) -> Result<Success, Failure> {
    let (input, echo) = parse::<SeriesInput>(input_json)?;
    let eqs = deformation_equations(&input.series).map_err(|e| engine_err(&echo, e))?;
    let first_failing = eqs.iter().find(|eq| !eq.holds).map(|eq| eq.order);
    let (status, detail) = match first_failing {
        None => (Status::Holds, format!("all {} deformation equations hold", eqs.len())),
        Some(k) => (Status::Fails, format!("the deformation equation at order {k} fails")),
    };
    Ok((status, echo, json!({ "equations": eqs }), detail))
}

fn run_decompose(input_json: &str, opts: &JobOptions) -> Result<Success, Failure> {
    let (input, echo) = parse::<DecomposeInput>(input_json)?;
    let probe = probe_fiber(&input.fiber, opts.seed).map_err(|m| engine_err(&echo, m))?;
    let dec = decompose(&input.omega, &input.fiber).map_err(|e| engine_err(&echo, e))?;
    let lambda: Vec<String> = dec.lambda.iter().map(ToString::to_string).collect();
    let detail = if dec.residues_vanish() {
        format!("ω = {}·df + dh with vanishing residues (kernel dim {})", dec.a, dec.kernel_dim)
    } else {
        format!(
            "ω = {}·df + dh + Σλⱼ(f·θⱼ) with λ = [{}] (kernel dim {})",
            dec.a,
            lambda.join(", "),
            dec.kernel_dim
        )
    };
    let result = json!({ "decomposition": dec, "fiber_probe": probe });
    Ok((Status::Holds, echo, result, detail))
}

fn periods(input_json: &str, opts: &JobOptions) -> Result<Success, Failure> {
    let (input, echo) = parse::<DeformationInput>(input_json)?;
    let probe = probe_fiber(&input.fiber, opts.seed).map_err(|m| engine_err(&echo, m))?;
    let cycles = resolve_cycles(&input.cycles, &input.fiber).map_err(|m| engine_err(&echo, m))?;
    let report = obstruction_series(&input.series, &input.fiber, &cycles, &opts.quadrature())
        .map_err(|e| engine_err(&echo, e))?;
    let (status, detail) = match report.obstruction_order {
        None => (
            Status::Holds,
            format!(
                "all periods vanish over {} cycle(s) through order K = {}",
                cycles.len(),
                report.truncation
            ),
        ),
        Some(k) => (Status::Fails, format!("nonvanishing period at order {k}")),
    };
    Ok((status, echo, json!({ "periods": report, "fiber_probe": probe }), detail))
}

fn first_integral(input_json: &str, opts: &JobOptions) -> Result<Success, Failure> {
    let (input, echo) = parse::<DeformationInput>(input_json)?;
    let probe = probe_fiber(&input.fiber, opts.seed).map_err(|m| engine_err(&echo, m))?;
    let cycles = resolve_cycles(&input.cycles, &input.fiber).map_err(|m| engine_err(&echo, m))?;
    let outcome =
        reconstruct_first_integral(&input.series, &input.fiber, &cycles, &opts.quadrature())
            .map_err(|e| engine_err(&echo, e))?;
    let (status, detail) = match &outcome {
        ReconstructOutcome::FirstIntegral { series } => (
            Status::Holds,
            format!(
                "F_t reconstructed through order K = {}; d_x F_t = ω_t exactly",
                series.truncation()
            ),
        ),
        ReconstructOutcome::Obstructed { order, lambda, .. } => {
            let residues: Vec<String> = lambda.iter().map(ToString::to_string).collect();
            (
                Status::Fails,
                format!(
                    "no polynomial first integral: order {order} has residues λ = [{}]",
                    residues.join(", ")
                ),
            )
        }
    };
    Ok((status, echo, json!({ "reconstruction": outcome, "fiber_probe": probe }), detail))
}

fn classify(input_json: &str, opts: &JobOptions) -> Result<Success, Failure> {
    let (input, echo) = parse::<ClassifyInput>(input_json)?;
    let probe = probe_fiber(&input.fiber, opts.seed).map_err(|m| engine_err(&echo, m))?;
    let classification =
        classify_degree_one(&input.omega1, &input.fiber).map_err(|e| engine_err(&echo, e))?;
    let (status, detail) = match &classification {
        ClassificationResult::ExactCase { h_tilde, .. } => {
            (Status::Holds, format!("exact case: ω_t = d(f + t·h̃) with h̃ = {h_tilde}"))
        }
        ClassificationResult::PullbackCase { mu, lambda, .. } => (
            Status::Holds,
            format!("pullback case: ω_t = σ*(α_t) with μ = {mu}, λ = {lambda}"),
        ),
        ClassificationResult::Obstructed { witness } => {
            let kind = match witness {
                ClassifyWitness::NotIntegrable { equation, .. } => {
                    format!("the integrability equation {equation} fails")
                }
                ClassifyWitness::FactorizationFailure { .. } => {
                    "dh∧df₁∧df₂ ≠ 0 (factorization hypothesis fails)".to_string()
                }
                ClassifyWitness::AnsatzFailure { monomial, .. } => {
                    format!("h is not a polynomial in (f₁, f₂): obstructed at {monomial}")
                }
            };
            (Status::Fails, format!("outside the classified normal forms: {kind}"))
        }
    };
    Ok((status, echo, json!({ "classification": classification, "fiber_probe": probe }), detail))
}

fn rescale(input_json: &str, opts: &JobOptions) -> Result<Success, Failure> {
    let (input, echo) = parse::<RescaleInput>(input_json)?;
    let layers = input.omega.homogeneous_components();
    let lowest = layers.keys().next().copied();
    let highest = layers.keys().next_back().copied();
    let nu = input.nu.or(lowest).unwrap_or(0);
    let span = highest.map_or(0, |top| top.saturating_sub(nu) as usize);
    let k = opts.order.or(input.k).unwrap_or(span);
    let series = rescale_deformation(&input.omega, nu, k).map_err(|e| engine_err(&echo, e))?;
    let detail =
        format!("ω_t = t^-(ν+1)·σ_t*(Ω) = dP + Σ tʲ·Ω_(ν+j) with ν = {nu}, K = {k}");
    Ok((Status::Holds, echo, json!({ "deformation": series }), detail))
}

fn radial(input_json: &str) -> Result<Success, Failure> {
    let (input, echo) = parse::<FormInput>(input_json)?;
    let verdict = radial_test(&input.omega).map_err(|e| engine_err(&echo, e))?;
    let (status, detail) = match &verdict {
        RadialTestResult::ZeroContraction => {
            (Status::Holds, "ω(R) = 0: the radial field is tangent to the foliation".to_string())
        }
        RadialTestResult::ClosedQuotient { contraction } => (
            Status::Holds,
            format!("ω/g is closed for the radial contraction g = ω(R) = {contraction}"),
        ),
        RadialTestResult::Neither { .. } => (
            Status::Fails,
            "the radial dichotomy fails; the integrability hypothesis must be violated"
                .to_string(),
        ),
    };
    Ok((status, echo, json!({ "radial": verdict }), detail))
}
