//! Periods of polynomial 1-forms along Fourier cycles, and the
//! period-integral obstructions of a deformation.
//!
//! The integrand of `∮_γ ω` for a polynomial form along a trigonometric
//! loop is an entire, 2π-periodic function, so the equispaced trapezoid
//! rule converges spectrally: each node doubling roughly squares the
//! accuracy.  [`period`] doubles nodes until two successive values agree
//! to the requested tolerance, reporting `|I_{2N} − I_N|` as the error
//! estimate.
//!
//! Winding numbers `w_k = (1/2πi) ∮ df_k/f_k` are computed the same way
//! and then snapped to integers (the argument principle guarantees they
//! are integers when the cycle avoids `f_k = 0`).  This turns quadrature
//! of a logarithmic form `θ = Σ λ_k df_k/f_k` into exact arithmetic:
//!
//! ```text
//! ∮_γ θ = 2πi · Σ_k λ_k w_k ,
//! ```
//!
//! with the sum taken in Q(i) — see [`log_period_exact`].
//!
//! [`obstruction_series`] applies this machinery to a deformation
//! `ω_t = df + Σ_{j≥1} tʲ ω_j`: on a fiber `f = c` one has
//! `∮ ω_j / f = (1/c) ∮ ω_j`, and a nonzero value certifies that no
//! polynomial first integral exists at order `j`.

use num_complex::Complex64;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::cycle::Cycle;
use crate::decompose::relative_closedness_defect;
use crate::fiber::FactoredFiber;
use crate::form::{DiffForm, LogForm};
use crate::poly::Polynomial;
use crate::scalar::GaussianRational;
use crate::series::DeformationSeries;

/// Nodes used for the residency spot check before integrating.
const RESIDENCY_NODES: usize = 256;

/// Tunables for the adaptive trapezoid quadrature.
#[derive(Clone, Debug)]
pub struct QuadratureOptions {
    /// Stop once `|I_{2N} − I_N| ≤ tol · (1 + |I_{2N}|)`.
    pub tol: f64,
    /// Initial node count (at least 2).
    pub n_start: usize,
    /// Give up beyond this many nodes.
    pub n_max: usize,
    /// Reject winding quadrature when `|f_k(γ(s))|` drops below this.
    pub pole_guard: f64,
    /// Maximal distance of a raw winding estimate from the nearest integer.
    pub winding_tol: f64,
    /// `∮ ω_j` with `|value| ≤ zero_threshold · (1 + |c|)` counts as
    /// vanishing in obstruction reports.
    pub zero_threshold: f64,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        QuadratureOptions {
            tol: 1e-10,
            n_start: 64,
            n_max: 65_536,
            pole_guard: 1e-8,
            winding_tol: 1e-2,
            zero_threshold: 1e-8,
        }
    }
}

/// Failures of the quadrature layer.
#[derive(Debug, Error)]
pub enum PeriodError {
    #[error("periods are defined for 1-forms, got a {p}-form")]
    NotAOneForm { p: usize },
    #[error("the form lives in {form_vars} variables but the cycle has {cycle_dim} coordinates")]
    DimensionMismatch { form_vars: usize, cycle_dim: usize },
    #[error("deformation and fiber use different variable contexts")]
    ContextMismatch,
    #[error("the order-0 term of the deformation must equal df for the given fiber")]
    BaseMismatch,
    #[error(
        "trapezoid refinement did not reach the tolerance: \
         error estimate {achieved:e} at {nodes} nodes"
    )]
    NonConvergence { achieved: f64, nodes: usize },
    #[error("cycle passes too close to a zero of {pole}: min |{pole}| observed = {min_abs:e}")]
    PoleTooClose { pole: String, min_abs: f64 },
    #[error(
        "winding estimate {re} + {im}i is not within tolerance of an integer; \
         the cycle may link a zero set too closely or need more nodes"
    )]
    WindingNotInteger { re: f64, im: f64 },
    #[error(
        "cycle {cycle} does not stay on the fiber: \
         max |f(γ(s)) − c| = {defect:e} exceeds the tolerance {tolerance:e}"
    )]
    ResidencyFailure { cycle: usize, defect: f64, tolerance: f64 },
    #[error("cycle {cycle} declares the fiber value c = 0; periods over f need c ≠ 0")]
    ZeroFiberValue { cycle: usize },
}

fn serialize_c64<S: Serializer>(c: &Complex64, serializer: S) -> Result<S::Ok, S::Error> {
    [c.re, c.im].serialize(serializer)
}

/// A converged numeric period.
#[derive(Clone, Debug, Serialize)]
pub struct PeriodValue {
    /// `∮_γ ω`.
    #[serde(serialize_with = "serialize_c64")]
    pub value: Complex64,
    /// `|I_{2N} − I_N|` at acceptance.
    pub error_estimate: f64,
    /// Nodes of the accepted rule.
    pub nodes: usize,
}

// ---- trapezoid refinement ----

/// Equispaced trapezoid sums on [0, 2π) with node doubling and reuse.
fn refine_trapezoid<F>(
    mut integrand: F,
    opts: &QuadratureOptions,
) -> Result<(Complex64, f64, usize), PeriodError>
where
    F: FnMut(f64) -> Result<Complex64, PeriodError>,
{
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut n = opts.n_start.max(2);
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..n {
        sum += integrand(two_pi * (k as f64) / (n as f64))?;
    }
    let mut value = sum * (two_pi / n as f64);
    let mut achieved = f64::INFINITY;
    loop {
        if 2 * n > opts.n_max {
            return Err(PeriodError::NonConvergence { achieved, nodes: n });
        }
        // T_{2N} = T_N / 2 + (2π / 2N) · Σ over the new odd nodes.
        let mut odd = Complex64::new(0.0, 0.0);
        for k in 0..n {
            odd += integrand(two_pi * ((2 * k + 1) as f64) / ((2 * n) as f64))?;
        }
        n *= 2;
        let refined = value * 0.5 + odd * (two_pi / n as f64);
        achieved = (refined - value).norm();
        value = refined;
        if achieved <= opts.tol * (1.0 + value.norm()) {
            return Ok((value, achieved, n));
        }
    }
}

/// `∮_γ ω` for a polynomial 1-form, integrand `Σ_i ω_i(γ(s)) γ_i′(s)`.
pub fn period(
    omega: &DiffForm,
    cycle: &Cycle,
    opts: &QuadratureOptions,
) -> Result<PeriodValue, PeriodError> {
    if omega.p() != 1 {
        return Err(PeriodError::NotAOneForm { p: omega.p() });
    }
    if omega.vars().len() != cycle.dim() {
        return Err(PeriodError::DimensionMismatch {
            form_vars: omega.vars().len(),
            cycle_dim: cycle.dim(),
        });
    }
    let integrand = |s: f64| {
        let point = cycle.point(s);
        let velocity = cycle.velocity(s);
        let values = omega.evaluate_one_form(&point).expect("arity checked above");
        Ok(values.iter().zip(&velocity).map(|(w, v)| w * v).sum())
    };
    let (value, error_estimate, nodes) = refine_trapezoid(integrand, opts)?;
    Ok(PeriodValue { value, error_estimate, nodes })
}

// ---- winding numbers and exact logarithmic periods ----

fn log_derivative_integrand<'a>(
    factor: &'a Polynomial,
    cycle: &'a Cycle,
    guard: f64,
) -> impl FnMut(f64) -> Result<Complex64, PeriodError> + 'a {
    let n = factor.nvars();
    let partials: Vec<Polynomial> = (0..n).map(|i| factor.partial(i)).collect();
    move |s: f64| {
        let point = cycle.point(s);
        let velocity = cycle.velocity(s);
        let fv = factor.evaluate(&point).expect("arity checked above");
        if fv.norm() < guard {
            return Err(PeriodError::PoleTooClose {
                pole: factor.to_string(),
                min_abs: fv.norm(),
            });
        }
        let mut numerator = Complex64::new(0.0, 0.0);
        for (partial, v) in partials.iter().zip(&velocity) {
            numerator += partial.evaluate(&point).expect("arity checked above") * v;
        }
        Ok(numerator / fv)
    }
}

/// Raw argument-principle estimate `(1/2πi) ∮ df/f` with a fixed rule of
/// `nodes` equispaced points — no refinement, no integer snapping.
pub fn winding_estimate(
    factor: &Polynomial,
    cycle: &Cycle,
    nodes: usize,
    guard: f64,
) -> Result<Complex64, PeriodError> {
    assert!(!factor.is_zero(), "winding number of the zero polynomial");
    if factor.nvars() != cycle.dim() {
        return Err(PeriodError::DimensionMismatch {
            form_vars: factor.nvars(),
            cycle_dim: cycle.dim(),
        });
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    let n = nodes.max(2);
    let mut integrand = log_derivative_integrand(factor, cycle, guard);
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..n {
        sum += integrand(two_pi * (k as f64) / (n as f64))?;
    }
    Ok(sum * (two_pi / n as f64) / Complex64::new(0.0, two_pi))
}

/// The winding number `w = (1/2πi) ∮_γ df/f ∈ Z`, computed by refined
/// quadrature and snapped to the nearest integer.  Fails if the raw
/// estimate is farther than `winding_tol` from an integer.
pub fn winding_number(
    factor: &Polynomial,
    cycle: &Cycle,
    opts: &QuadratureOptions,
) -> Result<i64, PeriodError> {
    assert!(!factor.is_zero(), "winding number of the zero polynomial");
    if factor.nvars() != cycle.dim() {
        return Err(PeriodError::DimensionMismatch {
            form_vars: factor.nvars(),
            cycle_dim: cycle.dim(),
        });
    }
    let integrand = log_derivative_integrand(factor, cycle, opts.pole_guard);
    let (raw, _, _) = refine_trapezoid(integrand, opts)?;
    let w = raw / Complex64::new(0.0, 2.0 * std::f64::consts::PI);
    let rounded = w.re.round();
    if (w.re - rounded).abs() > opts.winding_tol || w.im.abs() > opts.winding_tol {
        return Err(PeriodError::WindingNotInteger { re: w.re, im: w.im });
    }
    Ok(rounded as i64)
}

/// `∮_γ θ` for a logarithmic form, with the residue sum in exact
/// arithmetic once the integer windings are known.
#[derive(Clone, Debug, Serialize)]
pub struct LogPeriod {
    /// `w_k = (1/2πi) ∮ df_k/f_k`, one per pole of θ.
    pub windings: Vec<i64>,
    /// `Σ_k λ_k w_k ∈ Q(i)`, exactly.
    pub residue_sum: GaussianRational,
    /// `2πi · residue_sum`, for comparison with quadrature.
    #[serde(serialize_with = "serialize_c64")]
    pub value: Complex64,
}

/// Evaluates `∮_γ θ = 2πi Σ λ_k w_k` exactly, quadrature entering only
/// through the integer winding numbers.
pub fn log_period_exact(
    theta: &LogForm,
    cycle: &Cycle,
    opts: &QuadratureOptions,
) -> Result<LogPeriod, PeriodError> {
    if theta.vars().len() != cycle.dim() {
        return Err(PeriodError::DimensionMismatch {
            form_vars: theta.vars().len(),
            cycle_dim: cycle.dim(),
        });
    }
    let mut windings = Vec::with_capacity(theta.terms().len());
    let mut residue_sum = GaussianRational::zero();
    for (lambda, pole) in theta.terms() {
        let w = winding_number(pole, cycle, opts)?;
        windings.push(w);
        residue_sum += &(lambda * &GaussianRational::from_int(w));
    }
    let two_pi_i = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
    let value = two_pi_i * residue_sum.to_complex64();
    Ok(LogPeriod { windings, residue_sum, value })
}

// ---- obstruction report for a deformation ----

/// Periods of one deformation coefficient over one cycle.
#[derive(Clone, Debug, Serialize)]
pub struct CyclePeriod {
    /// Index into the cycle list.
    pub cycle: usize,
    /// `∮_γ ω_j`.
    #[serde(serialize_with = "serialize_c64")]
    pub value: Complex64,
    /// `∮_γ ω_j / f = value / c` on the fiber `f = c`.
    #[serde(serialize_with = "serialize_c64")]
    pub value_over_f: Complex64,
    pub error_estimate: f64,
    pub nodes: usize,
    /// Whether `|value| ≤ zero_threshold · (1 + |c|)`.
    pub vanishes: bool,
}

/// All cycle periods of a single order of the deformation.
#[derive(Clone, Debug, Serialize)]
pub struct OrderObstruction {
    pub order: usize,
    /// Whether `dω_j ∧ df = 0` exactly.
    pub relatively_closed: bool,
    pub periods: Vec<CyclePeriod>,
}

/// Period obstructions of `ω_t = df + Σ tʲ ω_j` over a family of cycles.
#[derive(Clone, Debug, Serialize)]
pub struct PeriodReport {
    /// Truncation order `K` of the deformation.
    pub truncation: usize,
    pub orders: Vec<OrderObstruction>,
    /// Smallest order whose period fails to vanish on some cycle, if any.
    pub obstruction_order: Option<usize>,
}

/// Checks that every cycle has a nonzero fiber value, matches the ambient
/// dimension, and actually sits on its declared fiber of `f` (within its
/// own tolerance, sampled at 256 nodes).
pub(crate) fn validate_cycles_on_fiber(
    f: &Polynomial,
    cycles: &[Cycle],
) -> Result<(), PeriodError> {
    for (idx, cycle) in cycles.iter().enumerate() {
        if cycle.dim() != f.nvars() {
            return Err(PeriodError::DimensionMismatch {
                form_vars: f.nvars(),
                cycle_dim: cycle.dim(),
            });
        }
        if cycle.fiber_value().norm() == 0.0 {
            return Err(PeriodError::ZeroFiberValue { cycle: idx });
        }
        let defect = cycle.residency_defect(f, RESIDENCY_NODES);
        if defect > cycle.fiber_tolerance() {
            return Err(PeriodError::ResidencyFailure {
                cycle: idx,
                defect,
                tolerance: cycle.fiber_tolerance(),
            });
        }
    }
    Ok(())
}

/// Integrates one form over every (already validated) cycle; the flag is
/// true when every period vanishes within the zero threshold.
pub(crate) fn periods_over_cycles(
    omega: &DiffForm,
    cycles: &[Cycle],
    opts: &QuadratureOptions,
) -> Result<(Vec<CyclePeriod>, bool), PeriodError> {
    let mut periods = Vec::with_capacity(cycles.len());
    let mut all_vanish = true;
    for (idx, cycle) in cycles.iter().enumerate() {
        let pv = period(omega, cycle, opts)?;
        let c = cycle.fiber_value();
        let vanishes = pv.value.norm() <= opts.zero_threshold * (1.0 + c.norm());
        all_vanish &= vanishes;
        periods.push(CyclePeriod {
            cycle: idx,
            value: pv.value,
            value_over_f: pv.value / c,
            error_estimate: pv.error_estimate,
            nodes: pv.nodes,
            vanishes,
        });
    }
    Ok((periods, all_vanish))
}

/// Integrates every coefficient `ω_j` (`j ≥ 1`) over every cycle and
/// reports which orders obstruct a polynomial first integral.
///
/// Every cycle is first checked to actually sit on its declared fiber of
/// `f` (within its own tolerance, sampled at 256 nodes), and the order-0
/// coefficient must be exactly `df`.
pub fn obstruction_series(
    series: &DeformationSeries,
    fiber: &FactoredFiber,
    cycles: &[Cycle],
    opts: &QuadratureOptions,
) -> Result<PeriodReport, PeriodError> {
    if series.vars() != fiber.vars() {
        return Err(PeriodError::ContextMismatch);
    }
    let f = fiber.product();
    validate_cycles_on_fiber(f, cycles)?;
    if series.coeff(0) != &f.differential() {
        return Err(PeriodError::BaseMismatch);
    }

    let mut orders = Vec::new();
    let mut obstruction_order = None;
    for j in 1..=series.truncation() {
        let omega_j = series.coeff(j);
        let relatively_closed = relative_closedness_defect(omega_j, f).is_zero();
        let (periods, all_vanish) = periods_over_cycles(omega_j, cycles, opts)?;
        if !all_vanish && obstruction_order.is_none() {
            obstruction_order = Some(j);
        }
        orders.push(OrderObstruction { order: j, relatively_closed, periods });
    }
    Ok(PeriodReport { truncation: series.truncation(), orders, obstruction_order })
}
