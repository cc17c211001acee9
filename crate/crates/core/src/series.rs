//! Deformations of 1-forms as truncated power series in a parameter `t`.
//!
//! A [`DeformationSeries`] is a family
//!
//! ```text
//! ω_t = ω₀ + t·ω₁ + … + t^K·ω_K
//! ```
//!
//! of polynomial 1-forms.  The family is *integrable* when
//! `ω_t ∧ dω_t = 0`; expanding in `t` gives one 3-form per order,
//!
//! ```text
//! D_k = Σ_{i+l=k} ωᵢ ∧ dω_l ,      0 ≤ k ≤ 2K,
//! ```
//!
//! and because both factors are polynomials in `t` of degree ≤ K, the
//! family is integrable for **every** value of `t` exactly when all of
//! `D₀, …, D_{2K}` vanish — there is no truncation error in this report.
//!
//! When the base term is exact, `ω₀ = df`, the constant equation `D₀ = 0`
//! is automatic and the remaining ones become the *deformation equations*
//!
//! ```text
//! df ∧ dω₁ = 0,   df ∧ dω₂ + ω₁ ∧ dω₁ = 0,   …
//! ```
//!
//! ([`deformation_equations`]), the form in which integrability is checked
//! order by order throughout this crate.

use std::fmt;
use std::ops::Add;

use serde::de::Error as _;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::form::DiffForm;
use crate::poly::{check_same_vars, Vars};

// ---- general truncated series of p-forms ----

/// A truncated series `Σ_{k=0}^{K} t^k · α_k` of `p`-forms.
///
/// Coefficients beyond the truncation order `K` are *unknown*, not zero:
/// sums and products are only trusted — and therefore only produced —
/// through the smaller of the operands' truncation orders.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FormSeries {
    vars: Vars,
    p: usize,
    coeffs: Vec<DiffForm>,
}

impl FormSeries {
    /// Wraps coefficients `[α₀, …, α_K]`; they must be nonempty and share
    /// one degree and context.
    pub fn new(coeffs: Vec<DiffForm>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least the order-0 coefficient");
        let vars = coeffs[0].vars().clone();
        let p = coeffs[0].p();
        for alpha in &coeffs {
            check_same_vars(&vars, alpha.vars(), "FormSeries");
            assert_eq!(alpha.p(), p, "series coefficients must share one form degree");
        }
        FormSeries { vars, p, coeffs }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    /// Common form degree of the coefficients.
    pub fn p(&self) -> usize {
        self.p
    }

    /// Truncation order `K`.
    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// The coefficient of `t^k` (`k ≤ K`).
    pub fn coeff(&self, k: usize) -> &DiffForm {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[DiffForm] {
        &self.coeffs
    }

    /// Termwise exterior derivative, same truncation.
    pub fn d(&self) -> FormSeries {
        FormSeries {
            vars: self.vars.clone(),
            p: self.p + 1,
            coeffs: self.coeffs.iter().map(DiffForm::d).collect(),
        }
    }

    /// Cauchy product under the wedge, truncated at `min(K_a, K_b)`.
    pub fn wedge(&self, other: &FormSeries) -> FormSeries {
        check_same_vars(&self.vars, &other.vars, "series wedge");
        let trunc = self.truncation().min(other.truncation());
        let p = self.p + other.p;
        let coeffs = (0..=trunc)
            .map(|k| {
                let mut acc = DiffForm::zero(&self.vars, p);
                for i in 0..=k {
                    acc += &self.coeffs[i].wedge(&other.coeffs[k - i]);
                }
                acc
            })
            .collect();
        FormSeries { vars: self.vars.clone(), p, coeffs }
    }
}

impl Add for &FormSeries {
    type Output = FormSeries;
    fn add(self, rhs: &FormSeries) -> FormSeries {
        check_same_vars(&self.vars, &rhs.vars, "series +");
        assert_eq!(self.p, rhs.p, "adding series of different form degree");
        let trunc = self.truncation().min(rhs.truncation());
        FormSeries {
            vars: self.vars.clone(),
            p: self.p,
            coeffs: (0..=trunc).map(|k| &self.coeffs[k] + &rhs.coeffs[k]).collect(),
        }
    }
}

// ---- deformation series of 1-forms ----

/// A deformation `ω_t = ω₀ + t·ω₁ + … + t^K·ω_K` of polynomial 1-forms.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DeformationSeries {
    series: FormSeries,
}

impl DeformationSeries {
    /// Wraps 1-form coefficients `[ω₀, …, ω_K]`.
    pub fn new(coeffs: Vec<DiffForm>) -> Self {
        let series = FormSeries::new(coeffs);
        assert_eq!(series.p(), 1, "a deformation series consists of 1-forms");
        DeformationSeries { series }
    }

    pub fn vars(&self) -> &Vars {
        self.series.vars()
    }

    /// Truncation order `K`.
    pub fn truncation(&self) -> usize {
        self.series.truncation()
    }

    /// The 1-form coefficient of `t^j`.
    pub fn coeff(&self, j: usize) -> &DiffForm {
        self.series.coeff(j)
    }

    pub fn coeffs(&self) -> &[DiffForm] {
        self.series.coeffs()
    }

    /// The underlying general series.
    pub fn as_series(&self) -> &FormSeries {
        &self.series
    }

    /// The polynomial 1-form `ω_t` at a specific parameter value, summed
    /// exactly: `Σ t^j ωⱼ`.
    pub fn at(&self, t: &crate::scalar::GaussianRational) -> DiffForm {
        let mut acc = DiffForm::zero(self.vars(), 1);
        let mut power = crate::scalar::GaussianRational::one();
        for omega in self.series.coeffs() {
            acc += &omega.scale(&power);
            power *= t;
        }
        acc
    }
}

// ---- integrability ----

/// Per-order integrability defects of a deformation.
#[derive(Clone, Debug, Serialize)]
pub struct IntegrabilityReport {
    /// Truncation order `K` of the input series.
    pub truncation: usize,
    /// The defects `D_k` for `k = 0, …, 2K`; entry `k` of the list.
    pub orders: Vec<DefectEntry>,
    /// Smallest `k` with `D_k ≠ 0`, if any.
    pub first_defect_order: Option<usize>,
}

/// One order of [`IntegrabilityReport`].
#[derive(Clone, Debug, Serialize)]
pub struct DefectEntry {
    pub order: usize,
    pub holds: bool,
    /// The 3-form `D_k = Σ_{i+l=k} ωᵢ∧dω_l` in full.
    pub defect: DiffForm,
}

impl IntegrabilityReport {
    /// True when every defect vanishes — the family is then integrable for
    /// all values of `t`, exactly.
    pub fn integrable_for_all_t(&self) -> bool {
        self.first_defect_order.is_none()
    }

    /// True when the defects vanish at least through the given order.
    pub fn holds_through(&self, order: usize) -> bool {
        self.first_defect_order.map_or(true, |k| k > order)
    }
}

/// Expands `ω_t ∧ dω_t` in `t` and reports every order `0, …, 2K`.
///
/// Since `ω_t` is polynomial in `t` of degree ≤ K, the expansion is the
/// complete product — vanishing of all listed orders is equivalent to
/// integrability of the family for every `t`.
pub fn integrability_defects(series: &DeformationSeries) -> IntegrabilityReport {
    let k_max = 2 * series.truncation();
    let omegas = series.coeffs();
    let d_omegas: Vec<DiffForm> = omegas.iter().map(DiffForm::d).collect();
    let mut orders = Vec::with_capacity(k_max + 1);
    let mut first = None;
    for k in 0..=k_max {
        let mut defect = DiffForm::zero(series.vars(), 3);
        for i in 0..=k.min(series.truncation()) {
            let l = k - i;
            if l > series.truncation() {
                continue;
            }
            defect += &omegas[i].wedge(&d_omegas[l]);
        }
        let holds = defect.is_zero();
        if !holds && first.is_none() {
            first = Some(k);
        }
        orders.push(DefectEntry { order: k, holds, defect });
    }
    IntegrabilityReport { truncation: series.truncation(), orders, first_defect_order: first }
}

// ---- deformation equations ----

/// The base term of the series is not closed, hence not of the form `df`.
#[derive(Debug, Error)]
#[error("the order-0 term of the deformation must be exact, but d(ω₀) = {defect} ≠ 0")]
pub struct BaseNotExact {
    /// The nonzero 2-form `dω₀`.
    pub defect: DiffForm,
}

/// One order of the deformation equations; see [`deformation_equations`].
#[derive(Clone, Debug, Serialize)]
pub struct DeformationEquation {
    pub order: usize,
    /// The index pairs `(i, l)` of the contributing terms `ωᵢ ∧ dω_l`
    /// (`l ≥ 1`; terms with `l = 0` vanish because `dω₀ = 0`).
    pub terms: Vec<(usize, usize)>,
    /// Human-readable rendering such as `"df∧dω1 + ω1∧dω0 = 0"`.
    pub equation: String,
    /// The left-hand side, evaluated.
    pub defect: DiffForm,
    pub holds: bool,
}

/// Writes the deformation equations of a series with exact base `ω₀ = df`.
///
/// Equation `k` (for `k = 1, …, 2K`) is `Σ_{i+l=k, l≥1} ωᵢ ∧ dω_l = 0`
/// with `ω₀` rendered as `df`; the `l = 0` terms drop since `dω₀ = 0`.
/// For a degree-one deformation (`K = 1`) this is the familiar pair
///
/// ```text
/// df ∧ dω₁ = 0        and        ω₁ ∧ dω₁ = 0.
/// ```
pub fn deformation_equations(
    series: &DeformationSeries,
) -> Result<Vec<DeformationEquation>, BaseNotExact> {
    let d_omega0 = series.coeff(0).d();
    if !d_omega0.is_zero() {
        return Err(BaseNotExact { defect: d_omega0 });
    }
    let trunc = series.truncation();
    let d_omegas: Vec<DiffForm> = series.coeffs().iter().map(DiffForm::d).collect();
    let mut equations = Vec::new();
    for k in 1..=2 * trunc {
        let mut terms = Vec::new();
        let mut defect = DiffForm::zero(series.vars(), 3);
        for i in 0..=k.min(trunc) {
            let l = k - i;
            if l == 0 || l > trunc {
                continue;
            }
            terms.push((i, l));
            defect += &series.coeff(i).wedge(&d_omegas[l]);
        }
        let rendered: Vec<String> = terms
            .iter()
            .map(|&(i, l)| {
                let left = if i == 0 { "df".to_string() } else { format!("ω{i}") };
                format!("{left}∧dω{l}")
            })
            .collect();
        let holds = defect.is_zero();
        equations.push(DeformationEquation {
            order: k,
            terms,
            equation: format!("{} = 0", rendered.join(" + ")),
            defect,
            holds,
        });
    }
    Ok(equations)
}

// ---- formatting & serde ----

impl fmt::Display for DeformationSeries {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, omega) in self.coeffs().iter().enumerate() {
            if j > 0 {
                write!(out, " + t^{j}·")?;
            }
            write!(out, "[{omega}]")?;
        }
        Ok(())
    }
}

// Wire format:
//   { "K": 2, "vars": [...], "coeffs": [DiffForm, DiffForm, DiffForm] }
// `K` must equal `coeffs.len() − 1`; every coefficient must be a 1-form in
// the shared context.

impl Serialize for DeformationSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("DeformationSeries", 3)?;
        s.serialize_field("K", &self.truncation())?;
        s.serialize_field("vars", self.vars().names())?;
        s.serialize_field("coeffs", self.coeffs())?;
        s.end()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WireSeries {
    #[serde(rename = "K")]
    k: usize,
    vars: Vec<String>,
    coeffs: Vec<DiffForm>,
}

impl<'de> Deserialize<'de> for DeformationSeries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = WireSeries::deserialize(deserializer)?;
        let vars = Vars::try_new(&wire.vars).map_err(D::Error::custom)?;
        if wire.coeffs.is_empty() {
            return Err(D::Error::custom("a deformation series needs at least ω₀"));
        }
        if wire.k != wire.coeffs.len() - 1 {
            return Err(D::Error::custom(format!(
                "K = {} does not match coeffs length {} (expected K+1 coefficients)",
                wire.k,
                wire.coeffs.len()
            )));
        }
        for (j, omega) in wire.coeffs.iter().enumerate() {
            if omega.vars() != &vars {
                return Err(D::Error::custom(format!(
                    "coefficient {j} uses a different variable context"
                )));
            }
            if omega.p() != 1 {
                return Err(D::Error::custom(format!(
                    "coefficient {j} is a {}-form, expected a 1-form",
                    omega.p()
                )));
            }
        }
        Ok(DeformationSeries::new(wire.coeffs))
    }
}
