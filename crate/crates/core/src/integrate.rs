//! First-integral reconstruction, classification of degree-one
//! deformations, the rescaling of a 1-form germ into a deformation, and
//! the radial dichotomy for homogeneous forms.
//!
//! **Reconstruction.**  For `ω_t = df + Σ tʲ ω_j` over a factored fiber,
//! each order is decomposed as `ω_j = a_j df + dh_j + Σ_k λ_{jk} f θ_k`.
//! When every residue `λ_{jk}` vanishes, the polynomial
//!
//! ```text
//! F_t = f + Σ_{j≥1} tʲ (a_j·f + h_j)
//! ```
//!
//! satisfies `d_x F_t = ω_t` exactly, order by order; the first order with
//! a nonzero residue is returned as the obstruction, with the exact λ's
//! as primary evidence and numeric cycle periods as corroboration.
//!
//! **Classification.**  For `f = f₁f₂` (two asserted-irreducible coprime
//! homogeneous factors) and an integrable degree-one deformation
//! `ω_t = df + t ω₁`, the decomposition `ω₁ = a₁df + dh + λ fθ₁` splits
//! the family into two normal forms: `λ = 0` gives the exact case
//! `ω_t = d(f + t h̃)`, and `λ ≠ 0` exhibits `ω_t = σ*(α_t)` as the
//! pullback under `σ = (f₁, f₂)` of the planar family
//!
//! ```text
//! α_t = (1 + tμ)·d(xy) + t·d(P(x) + Q(y)) + tλ'·y dx .
//! ```
//!
//! The bridge is the solve of `h = Σ c_{ij} f₁ⁱ f₂ʲ` over all products
//! with `i·ν₁ + j·ν₂ ≤ ν+1` — the degree bound leaves `(1,1)` as the only
//! mixed product, whose coefficient folds into `μ`.  Every returned
//! classification re-checks its defining identity exactly before return.
//!
//! **Rescaling.**  A 1-form `Ω = Σ_{j≥ν} Ω_j` whose lowest homogeneous
//! layer is closed (hence exact, `Ω_ν = dP`) rescales under `σ_t(z) = tz`
//! into the deformation `ω_t = t^{-(ν+1)} σ_t*(Ω) = dP + Σ t^{j-ν} Ω_j`,
//! using `σ_t*(Ω_j) = t^{j+1} Ω_j` for homogeneous layers.
//!
//! **Radial test.**  A homogeneous integrable 1-form either annihilates
//! the radial field `R = Σ xᵢ ∂/∂xᵢ`, or `ω / ω(R)` is closed — decided
//! by the exact polynomial identity `g·dω = dg∧ω` for `g = ω(R)`.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize};
use thiserror::Error;

use crate::cycle::Cycle;
use crate::decompose::{decompose, relative_closedness_defect, DecomposeError};
use crate::fiber::FactoredFiber;
use crate::form::{pullback, DiffForm};
use crate::linalg::{solve, Row};
use crate::period::{
    periods_over_cycles, validate_cycles_on_fiber, CyclePeriod, PeriodError, QuadratureOptions,
};
use crate::poly::{check_same_vars, Monomial, Polynomial, Vars};
use crate::scalar::GaussianRational;
use crate::series::DeformationSeries;

// ---- first-integral series ----

/// A truncated polynomial first integral `F_t = Σ_{j=0}^{K} tʲ F_j` with
/// `F₀ = f`; every coefficient has degree ≤ ν+1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FirstIntegralSeries {
    coeffs: Vec<Polynomial>,
}

impl FirstIntegralSeries {
    /// Wraps coefficients `[F₀, …, F_K]` (nonempty, one shared context).
    pub fn new(coeffs: Vec<Polynomial>) -> Self {
        assert!(!coeffs.is_empty(), "a first integral needs at least the order-0 coefficient");
        for c in &coeffs[1..] {
            check_same_vars(coeffs[0].vars(), c.vars(), "FirstIntegralSeries");
        }
        FirstIntegralSeries { coeffs }
    }

    pub fn vars(&self) -> &Vars {
        self.coeffs[0].vars()
    }

    /// Truncation order `K`.
    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// The polynomial coefficient of `tʲ`.
    pub fn coeff(&self, j: usize) -> &Polynomial {
        &self.coeffs[j]
    }

    pub fn coeffs(&self) -> &[Polynomial] {
        &self.coeffs
    }

    /// `F_t` at a specific parameter value, summed exactly.
    pub fn at(&self, t: &GaussianRational) -> Polynomial {
        let mut power = GaussianRational::one();
        let mut sum = Polynomial::zero(self.vars());
        for coeff in &self.coeffs {
            sum += &coeff.scale(&power);
            power = &power * t;
        }
        sum
    }

    /// The termwise differential `d_x F_t` as a deformation series.
    pub fn differential(&self) -> DeformationSeries {
        DeformationSeries::new(self.coeffs.iter().map(Polynomial::differential).collect())
    }
}

// JSON: { "K": 1, "coeffs": [Polynomial, ...] } with K + 1 coefficients.

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireFirstIntegral {
    #[serde(rename = "K")]
    k: usize,
    coeffs: Vec<Polynomial>,
}

impl Serialize for FirstIntegralSeries {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        WireFirstIntegral { k: self.truncation(), coeffs: self.coeffs.clone() }
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FirstIntegralSeries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = WireFirstIntegral::deserialize(deserializer)?;
        if wire.coeffs.is_empty() {
            return Err(D::Error::custom("a first integral needs at least one coefficient"));
        }
        if wire.k + 1 != wire.coeffs.len() {
            return Err(D::Error::custom(format!(
                "K = {} does not match the {} coefficients",
                wire.k,
                wire.coeffs.len()
            )));
        }
        if wire.coeffs[1..].iter().any(|c| c.vars() != wire.coeffs[0].vars()) {
            return Err(D::Error::custom("coefficients use different variable contexts"));
        }
        Ok(FirstIntegralSeries { coeffs: wire.coeffs })
    }
}

// ---- order-by-order reconstruction ----

/// Result of [`reconstruct_first_integral`].
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum ReconstructOutcome {
    /// Every order decomposed with vanishing residues; `d_x F_t = ω_t`
    /// exactly.
    FirstIntegral { series: FirstIntegralSeries },
    /// A nonzero residue at `order` blocks any polynomial first integral.
    /// The exact λ's are the primary witness; the cycle periods (present
    /// when cycles were supplied) corroborate numerically.
    Obstructed {
        order: usize,
        lambda: Vec<GaussianRational>,
        periods: Vec<CyclePeriod>,
    },
}

/// Hard failures of [`reconstruct_first_integral`] (invalid inputs, as
/// opposed to the honest [`ReconstructOutcome::Obstructed`] answer).
#[derive(Debug, Error)]
pub enum ReconstructError {
    #[error("deformation and fiber use different variable contexts")]
    ContextMismatch,
    #[error("the order-0 term of the deformation must equal df for the given fiber")]
    BaseMismatch,
    #[error("not an integrable deformation: dω{order}∧df ≠ 0")]
    NotRelativelyClosed { order: usize, defect: DiffForm },
    #[error("decomposition failed at order {order}: {source}")]
    Decompose {
        order: usize,
        #[source]
        source: DecomposeError,
    },
    #[error(transparent)]
    Period(#[from] PeriodError),
}

/// Rebuilds a polynomial first integral of `ω_t = df + Σ tʲ ω_j` order by
/// order, or reports the first obstructed order with its exact residues.
///
/// Each `ω_j` must satisfy `deg ω_j ≤ ν` and `dω_j ∧ df = 0`; the latter
/// is re-checked exactly (it is automatic for genuinely integrable
/// deformations once the previous orders are exact).  Supplied cycles are
/// validated against the fiber and integrated only to corroborate an
/// obstruction; pass no cycles for a purely symbolic run.
pub fn reconstruct_first_integral(
    series: &DeformationSeries,
    fiber: &FactoredFiber,
    cycles: &[Cycle],
    opts: &QuadratureOptions,
) -> Result<ReconstructOutcome, ReconstructError> {
    if series.vars() != fiber.vars() {
        return Err(ReconstructError::ContextMismatch);
    }
    let f = fiber.product();
    if series.coeff(0) != &f.differential() {
        return Err(ReconstructError::BaseMismatch);
    }
    validate_cycles_on_fiber(f, cycles).map_err(ReconstructError::Period)?;

    let mut coeffs = vec![f.clone()];
    for j in 1..=series.truncation() {
        let omega_j = series.coeff(j);
        let defect = relative_closedness_defect(omega_j, f);
        if !defect.is_zero() {
            return Err(ReconstructError::NotRelativelyClosed { order: j, defect });
        }
        let dec = decompose(omega_j, fiber)
            .map_err(|source| ReconstructError::Decompose { order: j, source })?;
        if !dec.residues_vanish() {
            let (periods, _) = periods_over_cycles(omega_j, cycles, opts)?;
            return Ok(ReconstructOutcome::Obstructed { order: j, lambda: dec.lambda, periods });
        }
        let coeff_j = &f.scale(&dec.a) + &dec.h;
        assert_eq!(
            coeff_j.differential(),
            *omega_j,
            "internal: a·df + dh must reproduce ω{j} when the residues vanish"
        );
        coeffs.push(coeff_j);
    }
    Ok(ReconstructOutcome::FirstIntegral { series: FirstIntegralSeries::new(coeffs) })
}

// ---- classification of degree-one deformations ----

/// The two normal forms of an integrable degree-one deformation over a
/// two-factor fiber, or the witness that neither applies.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "case", rename_all = "kebab-case")]
pub enum ClassificationResult {
    /// `ω_t = d(f + t·h̃)` with `h̃ = a₁f + h`.
    ExactCase {
        h_tilde: Polynomial,
        first_integral: FirstIntegralSeries,
        /// The identity `d(f + t h̃) = ω_t` was re-checked exactly.
        verified: bool,
    },
    /// `ω_t = σ*(α_t)` for `σ = (f₁, f₂)` and the planar family
    /// `α_t = (1+tμ)d(xy) + t·d(P(x)+Q(y)) + tλ·y dx`.
    PullbackCase {
        mu: GaussianRational,
        lambda: GaussianRational,
        p: Polynomial,
        q: Polynomial,
        sigma: Vec<Polynomial>,
        alpha: DeformationSeries,
        /// The identity `σ*(α_t) = ω_t` was re-checked exactly.
        verified: bool,
    },
    /// The input is outside the classified class; the witness says why.
    Obstructed { witness: ClassifyWitness },
}

/// Exact witnesses for [`ClassificationResult::Obstructed`].
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ClassifyWitness {
    /// One of the degree-one integrability equations fails.
    NotIntegrable { equation: String, defect: DiffForm },
    /// `dh ∧ df₁ ∧ df₂ ≠ 0`: the factorization property is not usable on
    /// this input.  (Unreachable when the integrability equations hold —
    /// kept as a defensive check.)
    FactorizationFailure { defect: DiffForm },
    /// `h` is not a combination of the products `f₁ⁱ f₂ʲ`: the linear
    /// solve is inconsistent at the named monomial.  (Signals a failure
    /// of the asserted factorization property.)
    AnsatzFailure { monomial: String, residual: GaussianRational },
}

/// Hard failures of [`classify_degree_one`].
#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error("classification expects a 1-form, got a {p}-form")]
    NotAOneForm { p: usize },
    #[error("form and fiber use different variable contexts")]
    ContextMismatch,
    #[error("classification needs a fiber with exactly two factors, got {got}")]
    NeedTwoFactors { got: usize },
    #[error(transparent)]
    Decompose(#[from] DecomposeError),
}

/// The 3-form `dh ∧ df₁ ∧ df₂`, whose vanishing lets `h` be written as a
/// polynomial in `f₁, f₂`.
pub fn factorization_defect(h: &Polynomial, f1: &Polynomial, f2: &Polynomial) -> DiffForm {
    h.differential().wedge(&f1.differential()).wedge(&f2.differential())
}

/// Expresses `h` in the products `f₁ⁱ f₂ʲ` with `i+j ≥ 1` and
/// `i·ν₁ + j·ν₂ ≤ ν+1`; returns the nonzero coefficients, or the monomial
/// at which the exact linear solve is inconsistent together with the
/// residual.
fn fit_to_factor_products(
    h: &Polynomial,
    f1: &Polynomial,
    f2: &Polynomial,
) -> Result<Vec<((u32, u32), GaussianRational)>, (String, GaussianRational)> {
    let nu1 = f1.homogeneity().expect("fiber factors are homogeneous and nonconstant");
    let nu2 = f2.homogeneity().expect("fiber factors are homogeneous and nonconstant");
    let cap = nu1 + nu2; // = deg f = ν + 1

    let mut pairs = Vec::new();
    for i in 0..=cap / nu1 {
        for j in 0..=cap / nu2 {
            if i + j >= 1 && i * nu1 + j * nu2 <= cap {
                pairs.push((i, j));
            }
        }
    }
    let products: Vec<Polynomial> =
        pairs.iter().map(|&(i, j)| &f1.pow(i) * &f2.pow(j)).collect();

    // One row per monomial in the union of supports, ascending.
    let mut row_of: std::collections::BTreeMap<Monomial, usize> = std::collections::BTreeMap::new();
    for m in h
        .terms()
        .map(|(m, _)| m)
        .chain(products.iter().flat_map(|p| p.terms().map(|(m, _)| m)))
    {
        let next = row_of.len();
        row_of.entry(m.clone()).or_insert(next);
    }
    let mut rows: Vec<Row> = (0..row_of.len())
        .map(|_| Row {
            coeffs: vec![GaussianRational::zero(); pairs.len()],
            rhs: GaussianRational::zero(),
        })
        .collect();
    let mut labels = vec![String::new(); row_of.len()];
    for (m, &r) in &row_of {
        labels[r] = Polynomial::term(h.vars(), m.clone(), GaussianRational::one()).to_string();
    }
    for (col, product) in products.iter().enumerate() {
        for (m, c) in product.terms() {
            rows[row_of[m]].coeffs[col] = c.clone();
        }
    }
    for (m, c) in h.terms() {
        rows[row_of[m]].rhs = c.clone();
    }

    match solve(&rows, pairs.len()) {
        Ok(solution) => Ok(pairs
            .into_iter()
            .zip(solution.particular)
            .filter(|(_, c)| !c.is_zero())
            .collect()),
        Err(inc) => Err((labels[inc.row].clone(), inc.residual)),
    }
}

/// Classifies the integrable degree-one deformation `ω_t = df + t ω₁`
/// over a two-factor fiber into its normal form.
///
/// The decomposition `ω₁ = a₁ df + dh + λ fθ₁` decides the case split on
/// `λ`; in the pullback case the canonical `h` is re-expressed in the
/// products `f₁ⁱ f₂ʲ`, the `(1,1)` coefficient and the `df₂/f₂`-residue
/// fold into `μ`, and the defining identity `σ*(α_t) = ω_t` is re-checked
/// exactly before returning.
pub fn classify_degree_one(
    omega1: &DiffForm,
    fiber: &FactoredFiber,
) -> Result<ClassificationResult, ClassifyError> {
    if omega1.p() != 1 {
        return Err(ClassifyError::NotAOneForm { p: omega1.p() });
    }
    if omega1.vars() != fiber.vars() {
        return Err(ClassifyError::ContextMismatch);
    }
    if fiber.r() != 1 {
        return Err(ClassifyError::NeedTwoFactors { got: fiber.r() + 1 });
    }
    let f = fiber.product();
    let f1 = &fiber.factors()[0];
    let f2 = &fiber.factors()[1];

    // Degree-one integrability equations, checked exactly.
    let d_omega1 = omega1.d();
    let defect = f.differential().wedge(&d_omega1);
    if !defect.is_zero() {
        return Ok(ClassificationResult::Obstructed {
            witness: ClassifyWitness::NotIntegrable { equation: "df∧dω1 = 0".into(), defect },
        });
    }
    let defect = omega1.wedge(&d_omega1);
    if !defect.is_zero() {
        return Ok(ClassificationResult::Obstructed {
            witness: ClassifyWitness::NotIntegrable { equation: "ω1∧dω1 = 0".into(), defect },
        });
    }

    let dec = decompose(omega1, fiber)?;
    let lambda = dec.lambda[0].clone();

    if lambda.is_zero() {
        // ω₁ = d(a₁f + h): the deformation is d(f + t·h̃).
        let h_tilde = &f.scale(&dec.a) + &dec.h;
        assert_eq!(
            h_tilde.differential(),
            *omega1,
            "internal: d(a₁f + h) must reproduce ω₁ when λ = 0"
        );
        let first_integral = FirstIntegralSeries::new(vec![f.clone(), h_tilde.clone()]);
        return Ok(ClassificationResult::ExactCase { h_tilde, first_integral, verified: true });
    }

    // λ ≠ 0: h must factor through (f₁, f₂).
    let defect = factorization_defect(&dec.h, f1, f2);
    if !defect.is_zero() {
        return Ok(ClassificationResult::Obstructed {
            witness: ClassifyWitness::FactorizationFailure { defect },
        });
    }
    let fit = match fit_to_factor_products(&dec.h, f1, f2) {
        Ok(fit) => fit,
        Err((monomial, residual)) => {
            return Ok(ClassificationResult::Obstructed {
                witness: ClassifyWitness::AnsatzFailure { monomial, residual },
            })
        }
    };

    // Split the products into P(f₁), Q(f₂), and the mixed (1,1) term; the
    // degree bound i·ν₁ + j·ν₂ ≤ ν₁ + ν₂ admits no other mixed product.
    let planar = Vars::new(&["x", "y"]);
    let mut p = Polynomial::zero(&planar);
    let mut q = Polynomial::zero(&planar);
    let mut c11 = GaussianRational::zero();
    for ((i, j), c) in fit {
        match (i, j) {
            (1, 1) => c11 = c,
            (i, 0) => p += &Polynomial::term(&planar, Monomial::new(vec![i, 0]), c),
            (0, j) => q += &Polynomial::term(&planar, Monomial::new(vec![0, j]), c),
            _ => unreachable!("a mixed product beyond f₁f₂ violates the degree bound"),
        }
    }

    // The residue part λ·fθ₁ = ρ₁·f₂df₁ + ρ₂·f₁df₂ pulls back from
    // ρ₂·d(xy) + (ρ₁−ρ₂)·y dx.
    let residue_row = &fiber.lambda_rows()[0];
    let rho1 = &lambda * &residue_row[0];
    let rho2 = &lambda * &residue_row[1];
    let mu = &(&dec.a + &c11) + &rho2;
    let lambda_norm = &rho1 - &rho2;

    let x = Polynomial::variable(&planar, 0);
    let y = Polynomial::variable(&planar, 1);
    let d_xy = (&x * &y).differential();
    let y_dx = DiffForm::one_form(&planar, vec![y.clone(), Polynomial::zero(&planar)]);
    let alpha1 = d_xy.scale(&mu) + (&p + &q).differential() + y_dx.scale(&lambda_norm);
    let alpha = DeformationSeries::new(vec![d_xy, alpha1]);

    let sigma = vec![f1.clone(), f2.clone()];
    for (order, target) in [(0, &f.differential()), (1, omega1)] {
        let pulled = pullback(&sigma, alpha.coeff(order))
            .expect("σ has one component per planar variable");
        assert_eq!(
            pulled, *target,
            "internal: σ*(α_t) must reproduce ω_t at order {order}"
        );
    }

    Ok(ClassificationResult::PullbackCase {
        mu,
        lambda: lambda_norm,
        p,
        q,
        sigma,
        alpha,
        verified: true,
    })
}

// ---- rescaling a 1-form into a deformation ----

/// Rejections from [`rescale_deformation`].
#[derive(Debug, Error)]
pub enum RescaleError {
    #[error("rescaling expects a 1-form, got a {p}-form")]
    NotAOneForm { p: usize },
    #[error("the zero form has no lowest homogeneous part")]
    ZeroForm,
    #[error("the lowest homogeneous part has degree {got}, expected {expected}")]
    WrongLowestDegree { expected: u32, got: u32 },
    #[error("the lowest homogeneous part is not closed, so it is not a differential dP")]
    LowestPartNotClosed { defect: DiffForm },
}

/// Rescales `Ω = Σ_{j≥ν} Ω_j` (lowest layer exact of degree ν) into the
/// deformation `ω_t = t^{-(ν+1)} σ_t*(Ω) = dP + Σ_{j>ν} t^{j-ν} Ω_j`,
/// truncated at order `K`; layers above degree ν+K are cut off.
///
/// The lowest layer must be closed; being homogeneous it is then exact
/// with the explicit primitive `P = ι_R(Ω_ν) / (ν+1)`.
pub fn rescale_deformation(
    omega: &DiffForm,
    nu: u32,
    k: usize,
) -> Result<DeformationSeries, RescaleError> {
    if omega.p() != 1 {
        return Err(RescaleError::NotAOneForm { p: omega.p() });
    }
    if omega.is_zero() {
        return Err(RescaleError::ZeroForm);
    }
    let layers = omega.homogeneous_components();
    let lowest = *layers.keys().next().expect("nonzero form has a lowest layer");
    if lowest != nu {
        return Err(RescaleError::WrongLowestDegree { expected: nu, got: lowest });
    }
    let omega_nu = &layers[&nu];
    let closedness = omega_nu.d();
    if !closedness.is_zero() {
        return Err(RescaleError::LowestPartNotClosed { defect: closedness });
    }
    // Euler: for the closed homogeneous layer, d(ι_R Ω_ν) = (ν+1)·Ω_ν.
    let primitive = omega_nu
        .contract_radial()
        .expect("checked to be a 1-form")
        .scale(&GaussianRational::from_ratio(1, i64::from(nu) + 1));
    assert_eq!(
        primitive.differential(),
        *omega_nu,
        "internal: the radial primitive must differentiate back to Ω_ν"
    );

    let coeffs = (0..=k)
        .map(|m| {
            layers
                .get(&(nu + m as u32))
                .cloned()
                .unwrap_or_else(|| DiffForm::zero(omega.vars(), 1))
        })
        .collect();
    Ok(DeformationSeries::new(coeffs))
}

// ---- the radial dichotomy ----

/// Outcome of [`radial_test`].
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum RadialTestResult {
    /// `ω(R) = 0`.
    ZeroContraction,
    /// `g = ω(R) ≠ 0` and `g·dω = dg∧ω` exactly, i.e. `d(ω/g) = 0`.
    ClosedQuotient { contraction: Polynomial },
    /// The dichotomy fails; impossible for integrable homogeneous input
    /// and kept as a hypothesis-violation flag.
    Neither { defect: DiffForm },
}

/// Rejections from [`radial_test`].
#[derive(Debug, Error)]
pub enum RadialTestError {
    #[error("the radial test expects a 1-form, got a {p}-form")]
    NotAOneForm { p: usize },
    #[error("the radial test expects a homogeneous form")]
    NonHomogeneous,
    #[error("the form is not integrable: ω∧dω ≠ 0")]
    NotIntegrable { defect: DiffForm },
}

/// Decides the homogeneous dichotomy: either the radial contraction
/// `g = ω(R)` vanishes, or `ω/g` is a closed 1-form of degree −1,
/// witnessed by the exact polynomial identity `g·dω = dg∧ω`.
pub fn radial_test(omega: &DiffForm) -> Result<RadialTestResult, RadialTestError> {
    if omega.p() != 1 {
        return Err(RadialTestError::NotAOneForm { p: omega.p() });
    }
    if !omega.is_homogeneous() {
        return Err(RadialTestError::NonHomogeneous);
    }
    let d_omega = omega.d();
    let integrability = omega.wedge(&d_omega);
    if !integrability.is_zero() {
        return Err(RadialTestError::NotIntegrable { defect: integrability });
    }
    let g = omega.contract_radial().expect("checked to be a 1-form");
    if g.is_zero() {
        return Ok(RadialTestResult::ZeroContraction);
    }
    let lhs = &g * &d_omega;
    let rhs = g.differential().wedge(omega);
    if lhs == rhs {
        Ok(RadialTestResult::ClosedQuotient { contraction: g })
    } else {
        Ok(RadialTestResult::Neither { defect: &lhs - &rhs })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycle::standard_torus_cycle;
    use crate::form::LogForm;
    use crate::scalar::GaussianRational as G;
    use num_complex::Complex64;

    fn mono(v: &Vars, c: i64, exps: &[u32]) -> Polynomial {
        Polynomial::term(v, Monomial::new(exps.to_vec()), G::from_int(c))
    }

    fn xyz_fiber() -> FactoredFiber {
        let v = Vars::new(&["x", "y", "z"]);
        let factors = (0..3).map(|i| Polynomial::variable(&v, i)).collect();
        FactoredFiber::new(factors, None).unwrap()
    }

    fn planar_fiber() -> FactoredFiber {
        let v = Vars::new(&["x", "y"]);
        let factors = vec![Polynomial::variable(&v, 0), Polynomial::variable(&v, 1)];
        FactoredFiber::new(factors, None).unwrap()
    }

    // ---- reconstruction ----

    #[test]
    fn reconstructs_an_exact_family() {
        // ω_t = d(f + t·x²z + t²·(f + x³)) over f = xyz.
        let fiber = xyz_fiber();
        let v = fiber.vars().clone();
        let f = fiber.product().clone();
        let h1 = mono(&v, 1, &[2, 0, 1]);
        let h2 = &f + &mono(&v, 1, &[3, 0, 0]);
        let series =
            DeformationSeries::new(vec![f.differential(), h1.differential(), h2.differential()]);
        let opts = QuadratureOptions::default();
        let outcome = reconstruct_first_integral(&series, &fiber, &[], &opts).unwrap();
        let integral = match outcome {
            ReconstructOutcome::FirstIntegral { series } => series,
            other => panic!("expected a first integral, got {other:?}"),
        };
        assert_eq!(integral.coeffs(), &[f, h1, h2]);
        // d_x F_t = ω_t exactly, and summing at t = 2 matches.
        assert_eq!(integral.differential(), series);
        assert_eq!(
            integral.at(&G::from_int(2)).differential(),
            series.at(&G::from_int(2))
        );
    }

    #[test]
    fn reports_the_obstructed_order_with_residues_and_periods() {
        // ω₁ = x dy − 2y dx over f = xy: residue −3 at order 1, period −6πi.
        let fiber = planar_fiber();
        let v = fiber.vars().clone();
        let f = fiber.product().clone();
        let omega1 =
            DiffForm::one_form(&v, vec![mono(&v, -2, &[0, 1]), mono(&v, 1, &[1, 0])]);
        let series = DeformationSeries::new(vec![f.differential(), omega1]);
        let cycle = standard_torus_cycle(
            &f,
            (0, 1),
            &[G::zero(), G::zero()],
            Complex64::new(1.0, 0.0),
            1e-9,
        )
        .unwrap();
        let opts = QuadratureOptions::default();
        let outcome = reconstruct_first_integral(&series, &fiber, &[cycle], &opts).unwrap();
        match outcome {
            ReconstructOutcome::Obstructed { order, lambda, periods } => {
                assert_eq!(order, 1);
                assert_eq!(lambda, vec![G::from_int(-3)]);
                assert_eq!(periods.len(), 1);
                let expected = Complex64::new(0.0, -6.0 * std::f64::consts::PI);
                assert!((periods[0].value - expected).norm() < 1e-9);
                assert!(!periods[0].vanishes);
            }
            other => panic!("expected an obstruction, got {other:?}"),
        }
    }

    #[test]
    fn example_family_with_lambda_minus_one_is_exact() {
        // ω₁ = x dy + y dx = df gives F_t = (1 + t)·xy.
        let fiber = planar_fiber();
        let f = fiber.product().clone();
        let series = DeformationSeries::new(vec![f.differential(), f.differential()]);
        let opts = QuadratureOptions::default();
        match reconstruct_first_integral(&series, &fiber, &[], &opts).unwrap() {
            ReconstructOutcome::FirstIntegral { series } => {
                assert_eq!(series.coeffs(), &[f.clone(), f]);
            }
            other => panic!("expected a first integral, got {other:?}"),
        }
    }

    #[test]
    fn reconstruction_rejects_bad_inputs() {
        let fiber = xyz_fiber();
        let v = fiber.vars().clone();
        let f = fiber.product().clone();
        let opts = QuadratureOptions::default();
        // Base term must be df.
        let bad = DeformationSeries::new(vec![
            DiffForm::one_form(&v, vec![
                Polynomial::one(&v),
                Polynomial::zero(&v),
                Polynomial::zero(&v),
            ]),
            f.differential(),
        ]);
        assert!(matches!(
            reconstruct_first_integral(&bad, &fiber, &[], &opts),
            Err(ReconstructError::BaseMismatch)
        ));
        // z dx is not relatively closed over xyz.
        let not_closed = DeformationSeries::new(vec![
            f.differential(),
            DiffForm::one_form(&v, vec![
                mono(&v, 1, &[0, 0, 1]),
                Polynomial::zero(&v),
                Polynomial::zero(&v),
            ]),
        ]);
        assert!(matches!(
            reconstruct_first_integral(&not_closed, &fiber, &[], &opts),
            Err(ReconstructError::NotRelativelyClosed { order: 1, .. })
        ));
    }

    // ---- classification ----

    #[test]
    fn classifies_the_rotation_family_as_a_pullback() {
        // ω₁ = x dy − 3y dx: a₁ = 1, λ = −4, P = Q = 0.
        let fiber = planar_fiber();
        let v = fiber.vars().clone();
        let omega1 =
            DiffForm::one_form(&v, vec![mono(&v, -3, &[0, 1]), mono(&v, 1, &[1, 0])]);
        match classify_degree_one(&omega1, &fiber).unwrap() {
            ClassificationResult::PullbackCase { mu, lambda, p, q, sigma, alpha, verified } => {
                assert_eq!(mu, G::one());
                assert_eq!(lambda, G::from_int(-4));
                assert!(p.is_zero());
                assert!(q.is_zero());
                assert_eq!(sigma, fiber.factors().to_vec());
                assert!(verified);
                // α₁ = d(xy) − 4y dx has components (y − 4y, x).
                let planar = alpha.vars().clone();
                let alpha1 = alpha.coeff(1).clone();
                assert_eq!(alpha1.component(&[0]), mono(&planar, -3, &[0, 1]));
                assert_eq!(alpha1.component(&[1]), mono(&planar, 1, &[1, 0]));
            }
            other => panic!("expected a pullback, got {other:?}"),
        }
    }

    #[test]
    fn classifies_the_exact_rotation_as_a_differential() {
        // λ = −1 in x dy − λ y dx gives ω₁ = d(xy).
        let fiber = planar_fiber();
        let f = fiber.product().clone();
        match classify_degree_one(&f.differential(), &fiber).unwrap() {
            ClassificationResult::ExactCase { h_tilde, first_integral, verified } => {
                assert_eq!(h_tilde, f);
                assert_eq!(first_integral.coeffs(), &[f.clone(), f]);
                assert!(verified);
            }
            other => panic!("expected the exact case, got {other:?}"),
        }
    }

    #[test]
    fn classification_round_trips_a_constructed_pullback() {
        // σ = (x² + yz, w), α₁ = 2·d(xy) + d(5x + y + y³) + 3·y dx.
        let v = Vars::new(&["x", "y", "z", "w"]);
        let f1 = &mono(&v, 1, &[2, 0, 0, 0]) + &mono(&v, 1, &[0, 1, 1, 0]);
        let f2 = Polynomial::variable(&v, 3);
        let fiber = FactoredFiber::new(vec![f1.clone(), f2.clone()], None).unwrap();
        let planar = Vars::new(&["x", "y"]);
        let expected_p = mono(&planar, 5, &[1, 0]);
        let expected_q = &mono(&planar, 1, &[0, 1]) + &mono(&planar, 1, &[0, 3]);
        let d_xy = (&Polynomial::variable(&planar, 0) * &Polynomial::variable(&planar, 1))
            .differential();
        let y_dx = DiffForm::one_form(
            &planar,
            vec![Polynomial::variable(&planar, 1), Polynomial::zero(&planar)],
        );
        let alpha1 = d_xy.scale(&G::from_int(2))
            + (&expected_p + &expected_q).differential()
            + y_dx.scale(&G::from_int(3));
        let sigma = vec![f1, f2];
        let omega1 = pullback(&sigma, &alpha1).unwrap();
        assert_eq!(pullback(&sigma, &d_xy).unwrap(), fiber.product().differential());
        match classify_degree_one(&omega1, &fiber).unwrap() {
            ClassificationResult::PullbackCase { mu, lambda, p, q, sigma: s, alpha, verified } => {
                assert_eq!(mu, G::from_int(2));
                assert_eq!(lambda, G::from_int(3));
                assert_eq!(p, expected_p);
                assert_eq!(q, expected_q);
                assert_eq!(s, sigma);
                assert_eq!(alpha.coeff(1), &alpha1);
                assert!(verified);
            }
            other => panic!("expected a pullback, got {other:?}"),
        }
    }

    #[test]
    fn custom_residue_rows_yield_the_same_normal_form() {
        // θ₁ = 2dx/x + dy/y instead of dx/x: the normal form is intrinsic.
        let v = Vars::new(&["x", "y"]);
        let factors = vec![Polynomial::variable(&v, 0), Polynomial::variable(&v, 1)];
        let fiber =
            FactoredFiber::new(factors, Some(vec![vec![G::from_int(2), G::one()]])).unwrap();
        let omega1 =
            DiffForm::one_form(&v, vec![mono(&v, -3, &[0, 1]), mono(&v, 1, &[1, 0])]);
        match classify_degree_one(&omega1, &fiber).unwrap() {
            ClassificationResult::PullbackCase { mu, lambda, p, q, verified, .. } => {
                assert_eq!(mu, G::one());
                assert_eq!(lambda, G::from_int(-4));
                assert!(p.is_zero() && q.is_zero());
                assert!(verified);
            }
            other => panic!("expected a pullback, got {other:?}"),
        }
    }

    #[test]
    fn classification_witnesses_failed_integrability() {
        // Over f = xy in three variables, z dx violates df∧dω₁ = 0.
        let v = Vars::new(&["x", "y", "z"]);
        let factors = vec![Polynomial::variable(&v, 0), Polynomial::variable(&v, 1)];
        let fiber = FactoredFiber::new(factors, None).unwrap();
        let omega1 = DiffForm::one_form(
            &v,
            vec![mono(&v, 1, &[0, 0, 1]), Polynomial::zero(&v), Polynomial::zero(&v)],
        );
        match classify_degree_one(&omega1, &fiber).unwrap() {
            ClassificationResult::Obstructed {
                witness: ClassifyWitness::NotIntegrable { equation, defect },
            } => {
                assert_eq!(equation, "df∧dω1 = 0");
                assert!(!defect.is_zero());
            }
            other => panic!("expected a non-integrability witness, got {other:?}"),
        }
        // z dz + y dx passes df∧dω₁ = 0 but fails ω₁∧dω₁ = 0.
        let omega1 = DiffForm::one_form(
            &v,
            vec![mono(&v, 1, &[0, 1, 0]), Polynomial::zero(&v), mono(&v, 1, &[0, 0, 1])],
        );
        match classify_degree_one(&omega1, &fiber).unwrap() {
            ClassificationResult::Obstructed {
                witness: ClassifyWitness::NotIntegrable { equation, .. },
            } => assert_eq!(equation, "ω1∧dω1 = 0"),
            other => panic!("expected a non-integrability witness, got {other:?}"),
        }
    }

    #[test]
    fn classification_rejects_invalid_inputs() {
        let three = xyz_fiber();
        let v = three.vars().clone();
        let omega1 = three.product().differential();
        assert!(matches!(
            classify_degree_one(&omega1, &three),
            Err(ClassifyError::NeedTwoFactors { got: 3 })
        ));
        let planar = planar_fiber();
        let pv = planar.vars().clone();
        // Degree too high: x² dx over f = xy has degree 2 > ν = 1.
        let big = DiffForm::one_form(&pv, vec![mono(&pv, 1, &[2, 0]), Polynomial::zero(&pv)]);
        assert!(matches!(
            classify_degree_one(&big, &planar),
            Err(ClassifyError::Decompose(DecomposeError::DegreeBound { .. }))
        ));
        let two_form = omega1.wedge(&v1_form(&v));
        assert!(matches!(
            classify_degree_one(&two_form, &three),
            Err(ClassifyError::NotAOneForm { p: 2 })
        ));
    }

    fn v1_form(v: &Vars) -> DiffForm {
        DiffForm::one_form(
            v,
            vec![Polynomial::one(v), Polynomial::zero(v), Polynomial::zero(v)],
        )
    }

    #[test]
    fn factorization_defect_detects_extra_variables() {
        // h = z² does not factor through (x, y): dh∧dx∧dy = 2z dz∧dx∧dy.
        let v = Vars::new(&["x", "y", "z"]);
        let h = mono(&v, 1, &[0, 0, 2]);
        let defect = factorization_defect(
            &h,
            &Polynomial::variable(&v, 0),
            &Polynomial::variable(&v, 1),
        );
        assert_eq!(defect.component(&[0, 1, 2]), mono(&v, 2, &[0, 0, 1]));
        // While h = x·y factors exactly.
        assert!(factorization_defect(
            &mono(&v, 1, &[1, 1, 0]),
            &Polynomial::variable(&v, 0),
            &Polynomial::variable(&v, 1)
        )
        .is_zero());
    }

    #[test]
    fn product_fit_recovers_coefficients_and_certifies_failure() {
        let v = Vars::new(&["x", "y", "z", "w"]);
        let f1 = &mono(&v, 1, &[2, 0, 0, 0]) + &mono(&v, 1, &[0, 1, 1, 0]);
        let f2 = Polynomial::variable(&v, 3);
        // h = 5f₁ + f₂³ − 2f₁f₂.
        let h = &(&f1.scale(&G::from_int(5)) + &f2.pow(3)) + &(&f1 * &f2).scale(&G::from_int(-2));
        let fit = fit_to_factor_products(&h, &f1, &f2).unwrap();
        assert_eq!(
            fit,
            vec![
                ((0, 3), G::one()),
                ((1, 0), G::from_int(5)),
                ((1, 1), G::from_int(-2)),
            ]
        );
        // h = x is not a combination of the products; the witness names x.
        let (monomial, residual) =
            fit_to_factor_products(&Polynomial::variable(&v, 0), &f1, &f2).unwrap_err();
        assert_eq!(monomial, "x");
        assert_eq!(residual, G::one());
    }

    // ---- rescaling ----

    #[test]
    fn rescaling_a_pure_differential_gives_a_constant_series() {
        let v = Vars::new(&["x", "y", "z"]);
        let p = &(&mono(&v, 1, &[2, 0, 0]) + &mono(&v, 1, &[0, 2, 0])) + &mono(&v, 1, &[0, 0, 2]);
        let series = rescale_deformation(&p.differential(), 1, 2).unwrap();
        assert_eq!(series.truncation(), 2);
        assert_eq!(series.coeff(0), &p.differential());
        assert!(series.coeff(1).is_zero());
        assert!(series.coeff(2).is_zero());
    }

    #[test]
    fn rescaling_splits_homogeneous_layers() {
        // Ω = d(x² + y² + z²) + x² dy: ω_t = dP + t·x² dy, and summing the
        // series at t = 1 reproduces Ω exactly.
        let v = Vars::new(&["x", "y", "z"]);
        let p = &(&mono(&v, 1, &[2, 0, 0]) + &mono(&v, 1, &[0, 2, 0])) + &mono(&v, 1, &[0, 0, 2]);
        let layer2 = DiffForm::one_form(
            &v,
            vec![Polynomial::zero(&v), mono(&v, 1, &[2, 0, 0]), Polynomial::zero(&v)],
        );
        let omega = p.differential() + layer2.clone();
        let series = rescale_deformation(&omega, 1, 1).unwrap();
        assert_eq!(series.coeff(0), &p.differential());
        assert_eq!(series.coeff(1), &layer2);
        assert_eq!(series.at(&G::one()), omega);
    }

    #[test]
    fn homogeneous_layers_rescale_by_the_expected_power() {
        // σ_t*(Ω_j) = t^{j+1}·Ω_j for homogeneous layers, exactly.
        let v = Vars::new(&["x", "y", "z"]);
        let layer = DiffForm::one_form(
            &v,
            vec![Polynomial::zero(&v), mono(&v, 1, &[2, 0, 0]), mono(&v, 3, &[0, 1, 1])],
        );
        for t in [G::from_int(3), G::from_int(-1), G::from_ints(1, 1)] {
            let images: Vec<Polynomial> =
                (0..3).map(|i| Polynomial::variable(&v, i).scale(&t)).collect();
            let pulled = pullback(&images, &layer).unwrap();
            // j = 2, so the factor is t³.
            let factor = &(&t * &t) * &t;
            assert_eq!(pulled, layer.scale(&factor), "t = {t}");
        }
    }

    #[test]
    fn rescaling_rejects_bad_lowest_layers() {
        let v = Vars::new(&["x", "y", "z"]);
        // x dy is homogeneous of degree 1 but not closed.
        let not_closed = DiffForm::one_form(
            &v,
            vec![Polynomial::zero(&v), mono(&v, 1, &[1, 0, 0]), Polynomial::zero(&v)],
        );
        assert!(matches!(
            rescale_deformation(&not_closed, 1, 1),
            Err(RescaleError::LowestPartNotClosed { .. })
        ));
        // Declared lowest degree must match the actual one.
        let p = mono(&v, 1, &[1, 1, 0]);
        assert!(matches!(
            rescale_deformation(&p.differential(), 2, 1),
            Err(RescaleError::WrongLowestDegree { expected: 2, got: 1 })
        ));
        assert!(matches!(
            rescale_deformation(&DiffForm::zero(&v, 1), 1, 1),
            Err(RescaleError::ZeroForm)
        ));
    }

    // ---- radial dichotomy ----

    #[test]
    fn differentials_have_closed_quotients() {
        // ω = df for homogeneous f: ω(R) = (deg f)·f and ω/ω(R) is closed.
        let v = Vars::new(&["x", "y", "z"]);
        let f = mono(&v, 1, &[2, 1, 0]);
        match radial_test(&f.differential()).unwrap() {
            RadialTestResult::ClosedQuotient { contraction } => {
                assert_eq!(contraction, f.scale(&G::from_int(3)));
            }
            other => panic!("expected a closed quotient, got {other:?}"),
        }
    }

    #[test]
    fn rotations_annihilate_the_radial_field() {
        let v = Vars::new(&["x", "y"]);
        let omega = DiffForm::one_form(&v, vec![mono(&v, -1, &[0, 1]), mono(&v, 1, &[1, 0])]);
        assert_eq!(radial_test(&omega).unwrap(), RadialTestResult::ZeroContraction);
    }

    #[test]
    fn logarithmic_families_have_closed_quotients() {
        // ω = xyz·(dx/x + 2dy/y + 3dz/z): ω(R) = 6xyz ≠ 0.
        let fiber = xyz_fiber();
        let theta = LogForm::new(
            fiber.vars(),
            [1, 2, 3]
                .into_iter()
                .map(G::from_int)
                .zip(fiber.factors().iter().cloned())
                .collect(),
        );
        let omega = theta.clear_against(fiber.product()).unwrap();
        match radial_test(&omega).unwrap() {
            RadialTestResult::ClosedQuotient { contraction } => {
                assert_eq!(contraction, fiber.product().scale(&G::from_int(6)));
            }
            other => panic!("expected a closed quotient, got {other:?}"),
        }
        // Residues summing to zero annihilate R instead.
        let balanced = LogForm::new(
            fiber.vars(),
            [1, -2, 1]
                .into_iter()
                .map(G::from_int)
                .zip(fiber.factors().iter().cloned())
                .collect(),
        );
        let omega = balanced.clear_against(fiber.product()).unwrap();
        assert_eq!(radial_test(&omega).unwrap(), RadialTestResult::ZeroContraction);
    }

    #[test]
    fn radial_test_rejects_bad_inputs() {
        let v = Vars::new(&["x", "y", "z"]);
        let mixed = &mono(&v, 1, &[1, 0, 0]).differential() + &mono(&v, 1, &[2, 0, 0]).differential();
        assert!(matches!(radial_test(&mixed), Err(RadialTestError::NonHomogeneous)));
        // x dy + z dx is homogeneous but not integrable.
        let omega = DiffForm::one_form(
            &v,
            vec![mono(&v, 1, &[0, 0, 1]), mono(&v, 1, &[1, 0, 0]), Polynomial::zero(&v)],
        );
        assert!(matches!(radial_test(&omega), Err(RadialTestError::NotIntegrable { .. })));
    }

    // ---- serialization ----

    #[test]
    fn first_integral_serde_round_trip() {
        let fiber = planar_fiber();
        let f = fiber.product().clone();
        let series = FirstIntegralSeries::new(vec![f.clone(), f.scale(&G::from_ints(0, 1))]);
        let json = serde_json::to_string(&series).unwrap();
        let back: FirstIntegralSeries = serde_json::from_str(&json).unwrap();
        assert_eq!(back, series);
        // K must match the coefficient count.
        let bad = json.replace("\"K\":1", "\"K\":3");
        assert!(serde_json::from_str::<FirstIntegralSeries>(&bad).is_err());
    }
}
