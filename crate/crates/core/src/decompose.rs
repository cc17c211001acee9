//! Decomposition of 1-forms relative to the fibration `f = const`.
//!
//! For a reduced homogeneous `f = f₁ ⋯ f_{r+1}` (a [`FactoredFiber`]) and a
//! polynomial 1-form `ω` with `deg ω ≤ ν` (where `deg f = ν + 1`), the
//! decomposition solved here is
//!
//! ```text
//! ω = a·df + dh + Σⱼ λⱼ · (f·θⱼ),      a, λⱼ ∈ Q(i),  deg h ≤ ν + 1,
//! ```
//!
//! with the fiber's logarithmic forms `θⱼ`.  A solution exists exactly when
//! `ω` is *relatively closed*, `dω ∧ df = 0`; comparing coefficients of
//! every monomial in every `dxᵢ` component turns the question into one
//! exact linear solve ([`crate::linalg`]).
//!
//! The solution is unique modulo the two-dimensional kernel
//! `{(a, h) ↦ (a − c, h + c·f + c₀)}`.  The representative returned is
//! canonical: `h` has zero constant term and zero component along `f` in
//! the monomial-coefficient Hermitian inner product, so equal inputs give
//! equal outputs — across runs and platforms.
//!
//! The logarithmic residues `λⱼ` are the obstruction half of the story:
//! they vanish iff `ω = a·df + dh` with a polynomial `h`, and they feed the
//! period predictions of [`crate::period`].

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fiber::FactoredFiber;
use crate::form::DiffForm;
use crate::linalg::{solve, Row};
use crate::poly::{proportionality, Degree, Monomial, Polynomial};
use crate::scalar::GaussianRational;

/// Result of [`decompose`]: `ω = a·df + dh + Σⱼ λⱼ·(f·θⱼ)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Decomposition {
    /// Constant coefficient of `df`.
    pub a: GaussianRational,
    /// Polynomial potential, `deg h ≤ ν + 1`, canonicalized (no constant
    /// term, no `f`-component).
    pub h: Polynomial,
    /// Logarithmic residues `λ₁, …, λ_r`.
    pub lambda: Vec<GaussianRational>,
    /// Dimension of the solution kernel (2 for valid fiber data).
    pub kernel_dim: usize,
}

impl Decomposition {
    /// All residues vanish — `ω` is exact modulo `a·df`.
    pub fn residues_vanish(&self) -> bool {
        self.lambda.iter().all(GaussianRational::is_zero)
    }

    /// Reassembles `a·df + dh + Σ λⱼ·(f·θⱼ)`, the form this decomposition
    /// represents.
    pub fn assemble(&self, fiber: &FactoredFiber) -> DiffForm {
        let mut out = fiber.product().differential().scale(&self.a);
        out += &self.h.differential();
        for (j, lam) in self.lambda.iter().enumerate() {
            if !lam.is_zero() {
                out += &fiber.f_theta(j + 1).scale(lam);
            }
        }
        out
    }
}

/// Failure modes of [`decompose`].
#[derive(Debug, Error)]
pub enum DecomposeError {
    #[error("decompose expects a 1-form, got a {p}-form")]
    NotAOneForm { p: usize },
    #[error("the form and the fiber use different variable contexts")]
    ContextMismatch,
    #[error("deg ω = {got} exceeds the decomposition bound ν = {bound}")]
    DegreeBound { got: Degree, bound: u32 },
    #[error(
        "no decomposition: the coefficient of {monomial} in the d{component} component is \
         obstructed (residual {residual}); ω is not relatively closed"
    )]
    NoSolution {
        /// Variable name of the obstructed component.
        component: String,
        /// Display form of the obstructed monomial.
        monomial: String,
        /// What remains on the right-hand side after elimination.
        residual: GaussianRational,
    },
}

/// All monomials of total degree ≤ `d` in `n` variables, ascending graded-lex.
fn monomials_up_to(n: usize, d: u32) -> Vec<Monomial> {
    let mut all = Vec::new();
    let mut exps = vec![0u32; n];
    loop {
        all.push(Monomial::new(exps.clone()));
        // Odometer over exponent vectors with total degree ≤ d.
        let mut i = 0;
        loop {
            if i == n {
                let mut sorted = all;
                sorted.sort();
                return sorted;
            }
            exps[i] += 1;
            if exps.iter().sum::<u32>() <= d {
                break;
            }
            exps[i] = 0;
            i += 1;
        }
    }
}

/// The defect 3-form `dω ∧ df` whose vanishing defines relative closedness.
pub fn relative_closedness_defect(omega: &DiffForm, f: &Polynomial) -> DiffForm {
    omega.d().wedge(&f.differential())
}

/// True iff `dω ∧ df = 0`.
pub fn is_relatively_closed(omega: &DiffForm, f: &Polynomial) -> bool {
    relative_closedness_defect(omega, f).is_zero()
}

/// Solves `ω = a·df + dh + Σⱼ λⱼ·(f·θⱼ)` exactly.
///
/// Requires a 1-form over the fiber's context with `deg ω ≤ ν`.  Returns
/// the canonical representative (see the module docs); when no solution
/// exists the error names the first obstructed monomial identity.
pub fn decompose(omega: &DiffForm, fiber: &FactoredFiber) -> Result<Decomposition, DecomposeError> {
    if omega.p() != 1 {
        return Err(DecomposeError::NotAOneForm { p: omega.p() });
    }
    if omega.vars() != fiber.vars() {
        return Err(DecomposeError::ContextMismatch);
    }
    let nu = fiber.nu();
    if omega.deg() > Degree::Finite(nu) {
        return Err(DecomposeError::DegreeBound { got: omega.deg(), bound: nu });
    }

    let vars = fiber.vars();
    let n = vars.len();
    let r = fiber.r();
    let f = fiber.product();

    // Unknowns: [a | h-coefficients over monomials of degree ≤ ν+1 | λ₁…λ_r].
    let h_monomials = monomials_up_to(n, nu + 1);
    let h_col: std::collections::BTreeMap<Monomial, usize> =
        h_monomials.iter().cloned().zip(1..).collect();
    let ncols = 1 + h_monomials.len() + r;
    let lambda_col = |j: usize| 1 + h_monomials.len() + j;

    let df: Vec<Polynomial> = (0..n).map(|i| f.partial(i)).collect();
    let f_thetas: Vec<Vec<Polynomial>> = (1..=r)
        .map(|j| {
            let ft = fiber.f_theta(j);
            (0..n).map(|i| ft.component(&[i])).collect()
        })
        .collect();

    // One equation per (component i, monomial m of degree ≤ ν): match the
    // coefficient of m·dxᵢ on both sides.
    let row_monomials = monomials_up_to(n, nu);
    let mut rows = Vec::with_capacity(n * row_monomials.len());
    let mut labels = Vec::with_capacity(n * row_monomials.len());
    for i in 0..n {
        let omega_i = omega.component(&[i]);
        for m in &row_monomials {
            let mut coeffs = vec![GaussianRational::zero(); ncols];
            coeffs[0] = df[i].coeff(m);
            // ∂h/∂xᵢ contributes (mᵢ+1)·h_{m+eᵢ} to the coefficient of m.
            let mut up = m.exps().to_vec();
            up[i] += 1;
            let up = Monomial::new(up);
            if let Some(&col) = h_col.get(&up) {
                coeffs[col] = GaussianRational::from_int(i64::from(m.exps()[i] + 1));
            }
            for j in 0..r {
                coeffs[lambda_col(j)] = f_thetas[j][i].coeff(m);
            }
            rows.push(Row { coeffs, rhs: omega_i.coeff(m) });
            labels.push((i, m.clone()));
        }
    }

    let solution = solve(&rows, ncols).map_err(|inc| {
        let (i, m) = &labels[inc.row];
        DecomposeError::NoSolution {
            component: vars.name(*i).to_string(),
            monomial: Polynomial::term(vars, m.clone(), GaussianRational::one()).to_string(),
            residual: inc.residual,
        }
    })?;

    let mut a = solution.particular[0].clone();
    let mut h = Polynomial::from_terms(
        vars,
        h_monomials
            .iter()
            .enumerate()
            .map(|(k, m)| (m.clone(), solution.particular[1 + k].clone())),
    );
    let lambda: Vec<GaussianRational> =
        (0..r).map(|j| solution.particular[lambda_col(j)].clone()).collect();

    // Canonical representative: strip h's constant term (invisible to dh),
    // then project away its f-component, compensating through a.  The two
    // directions span the kernel, so this pins the unique normal form.
    let constant = h.coeff(&Monomial::constant(n));
    if !constant.is_zero() {
        h = &h - &Polynomial::constant(vars, constant);
    }
    let f_norm = f.terms().fold(GaussianRational::zero(), |acc, (_, c)| acc + &(c * &c.conj()));
    let overlap = f
        .terms()
        .fold(GaussianRational::zero(), |acc, (m, c)| acc + &(h.coeff(m) * c.conj()));
    if !overlap.is_zero() {
        let c = &overlap / &f_norm;
        h = &h - &f.scale(&c);
        a += &c;
    }

    Ok(Decomposition { a, h, lambda, kernel_dim: solution.nullity })
}

// ---- the divisibility lemma ----

/// Outcome of the divisibility criterion.
///
/// For a *reduced* fiber polynomial `f` in normal crossings and a
/// homogeneous `h` with `deg h = deg f`, the criterion `f | dh ∧ df`
/// holds if and only if `h` is a constant multiple of `f`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum DivisibilityOutcome {
    /// `f | dh∧df`, and indeed `h = λ·f` exactly.
    Multiple { lambda: GaussianRational },
    /// `f ∤ dh∧df`; `h` does not leave the fiber polynomial invariant.
    NotInvariant,
}

/// Errors of [`divisibility_lemma_check`].
#[derive(Debug, Error, PartialEq)]
pub enum DivisibilityError {
    #[error("h and f use different variable contexts")]
    ContextMismatch,
    #[error("the divisor must be nonconstant, got {f}")]
    ConstantDivisor { f: String },
    #[error("h and f must be homogeneous of the same degree; got deg h = {h}, deg f = {f}")]
    DegreeMismatch { h: Degree, f: Degree },
    #[error(
        "f divides dh∧df although h is not a constant multiple of f; \
         f cannot be a reduced product of coprime irreducibles"
    )]
    LemmaViolation,
}

/// Decides `f | dh∧df` by exact division on every component of the
/// 2-form; when it holds, returns the constant `λ` with `h = λf`
/// (`λ = 0` for `h = 0`).
///
/// Requires `h` and `f` homogeneous of the same degree and `f` reduced
/// (asserted by the caller); a violation of reducedness that makes the
/// criterion true without `h` being a multiple of `f` is reported as
/// [`DivisibilityError::LemmaViolation`].
pub fn divisibility_lemma_check(
    h: &Polynomial,
    f: &Polynomial,
) -> Result<DivisibilityOutcome, DivisibilityError> {
    if h.vars() != f.vars() {
        return Err(DivisibilityError::ContextMismatch);
    }
    if f.deg() <= Degree::Finite(0) {
        return Err(DivisibilityError::ConstantDivisor { f: f.to_string() });
    }
    let same_degree = match (h.homogeneity(), f.homogeneity()) {
        _ if h.is_zero() => true,
        (Some(dh), Some(df)) => dh == df,
        _ => false,
    };
    if !same_degree {
        return Err(DivisibilityError::DegreeMismatch { h: h.deg(), f: f.deg() });
    }
    let two_form = h.differential().wedge(&f.differential());
    if !two_form.components().all(|(_, coeff)| f.divides(coeff).is_some()) {
        return Ok(DivisibilityOutcome::NotInvariant);
    }
    if h.is_zero() {
        return Ok(DivisibilityOutcome::Multiple { lambda: GaussianRational::zero() });
    }
    match proportionality(f, h) {
        Some(lambda) => Ok(DivisibilityOutcome::Multiple { lambda }),
        None => Err(DivisibilityError::LemmaViolation),
    }
}
