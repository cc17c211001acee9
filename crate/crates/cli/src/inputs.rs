//! Typed JSON inputs for each subcommand.
//!
//! Every input is a single JSON object with the fields listed on its
//! struct; unknown fields are rejected so that typos fail loudly.  The
//! parsed input is echoed back into the report verbatim (canonically
//! re-serialized), which keeps reports self-contained and re-runnable.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use folia_core::cycle::{standard_torus_cycle, Cycle, DEFAULT_FIBER_TOLERANCE};
use folia_core::fiber::FactoredFiber;
use folia_core::form::DiffForm;
use folia_core::scalar::GaussianRational;
use folia_core::series::DeformationSeries;

/// Input for `check-integrable` and `deformation-equations`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesInput {
    pub series: DeformationSeries,
}

/// Input for `decompose`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecomposeInput {
    pub fiber: FactoredFiber,
    pub omega: DiffForm,
}

/// Input for `periods` and `first-integral`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeformationInput {
    pub fiber: FactoredFiber,
    pub series: DeformationSeries,
    #[serde(default)]
    pub cycles: Vec<CycleSpec>,
}

/// Input for `classify-degree-one`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifyInput {
    pub fiber: FactoredFiber,
    pub omega1: DiffForm,
}

/// Input for `rescale`.  `nu` defaults to the actual lowest homogeneous
/// degree and `K` to the span of the layers; the `--order` flag overrides
/// `K`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RescaleInput {
    pub omega: DiffForm,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<u32>,
    #[serde(rename = "K", default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
}

/// Input for `radial-test`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormInput {
    pub omega: DiffForm,
}

/// A cycle on a fiber `f = c`: either a standard torus, named by the two
/// coordinate axes it winds through, or an explicit trigonometric loop.
#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CycleSpec {
    /// `γ(s) = anchor + ε·e^{is}·e_i + ε·e^{−is}·e_j` with `ε² · ρ = c`;
    /// `plane` names the two variables (which must be zero in `anchor`).
    StandardTorus {
        plane: [String; 2],
        anchor: Vec<GaussianRational>,
        /// The fiber value `c` as `[re, im]`.
        fiber_value: [f64; 2],
        #[serde(default = "default_tolerance")]
        fiber_tolerance: f64,
    },
    /// A fully explicit cycle (truncated Fourier coordinates).
    Explicit { cycle: Cycle },
}

fn default_tolerance() -> f64 {
    DEFAULT_FIBER_TOLERANCE
}

impl CycleSpec {
    /// Builds the concrete cycle over the given fiber, resolving variable
    /// names to coordinate slots.
    pub fn resolve(&self, fiber: &FactoredFiber) -> Result<Cycle, String> {
        match self {
            CycleSpec::StandardTorus { plane, anchor, fiber_value, fiber_tolerance } => {
                let slot = |name: &str| {
                    fiber.vars().index_of(name).ok_or_else(|| {
                        format!(
                            "cycle plane names variable {name:?}, fiber has {:?}",
                            fiber.vars().names()
                        )
                    })
                };
                let i = slot(&plane[0])?;
                let j = slot(&plane[1])?;
                let c = Complex64::new(fiber_value[0], fiber_value[1]);
                standard_torus_cycle(fiber.product(), (i, j), anchor, c, *fiber_tolerance)
                    .map_err(|e| e.to_string())
            }
            CycleSpec::Explicit { cycle } => Ok(cycle.clone()),
        }
    }
}
