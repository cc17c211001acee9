//! Exact computational tools for polynomial differential forms and their
//! integrable deformations.
//!
//! The library works over the field **Q(i)** of Gaussian rationals: every
//! coefficient is a pair of arbitrary-precision rationals, every algebraic
//! operation is exact, and floating point enters only at the numerical
//! boundary (evaluation of forms at complex points and quadrature of period
//! integrals).
//!
//! The objects of study are deformations
//!
//! ```text
//! ω_t = df + t·ω₁ + t²·ω₂ + … + t^K·ω_K
//! ```
//!
//! of an exact polynomial 1-form `df`, where `f` is a reduced homogeneous
//! polynomial that splits into irreducible factors `f = f₁ ⋯ f_{r+1}`.  The
//! central questions — is `ω_t` integrable order by order, does it admit a
//! polynomial first integral, and if not, which logarithmic residues
//! obstruct it — all reduce to exact linear algebra through a decomposition
//! of polynomial 1-forms relative to the fibration `f = const`:
//!
//! ```text
//! ω = a·df + dh + f·Σⱼ λⱼ·θⱼ ,        θⱼ = Σ_k λ_k^{(j)} dfₖ/fₖ .
//! ```
//!
//! Module map:
//!
//! * [`scalar`] — the coefficient field Q(i).
//! * [`poly`] — sparse multivariate polynomials, graded-lex ordered.
//! * [`form`] — polynomial differential forms: wedge, `d`, pullback,
//!   radial contraction, logarithmic 1-forms.
//! * [`linalg`] — exact dense linear solves with rank/nullity certificates.
//! * [`series`] — truncated power series of forms in the deformation
//!   parameter; integrability defects and deformation equations.
//! * [`fiber`] — factored fibrations `f = f₁ ⋯ f_{r+1}` with residue data.
//! * [`decompose`] — the relative-cohomology decomposition above.
//! * [`cycle`] — trigonometric-polynomial cycles on fibers `f = c`.
//! * [`period`] — numerical periods, exact logarithmic periods, and
//!   order-by-order obstruction series.
//! * [`integrate`] — reconstruction of polynomial first integrals,
//!   classification of degree-one deformations, rescaling of a form into a
//!   deformation, and the radial integrability test.
//! * [`testkit`] — deterministic random generators used by the test suites.

pub mod cycle;
pub mod decompose;
pub mod fiber;
pub mod form;
pub mod integrate;
pub mod linalg;
pub mod period;
pub mod poly;
pub mod scalar;
pub mod series;
pub mod testkit;

pub use cycle::{standard_torus_cycle, Cycle, FourierSeries};
pub use decompose::{
    decompose, divisibility_lemma_check, relative_closedness_defect, Decomposition,
    DivisibilityOutcome,
};
pub use fiber::FactoredFiber;
pub use form::{pullback, DiffForm, LogForm};
pub use integrate::{
    classify_degree_one, radial_test, reconstruct_first_integral, rescale_deformation,
    ClassificationResult, FirstIntegralSeries, RadialTestResult, ReconstructOutcome,
};
pub use period::{log_period_exact, obstruction_series, period, PeriodReport, QuadratureOptions};
pub use poly::{Degree, Monomial, Polynomial, Vars};
pub use scalar::GaussianRational;
pub use series::{
    deformation_equations, integrability_defects, DeformationSeries, IntegrabilityReport,
};
