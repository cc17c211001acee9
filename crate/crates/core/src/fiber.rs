//! Factored fibrations `f = f₁ ⋯ f_{r+1}` and their residue data.
//!
//! The decomposition machinery works relative to a homogeneous polynomial
//! `f` that is *reduced* (square-free) with irreducible factors `fₖ` whose
//! zero sets are in normal crossings away from small codimension.  A
//! [`FactoredFiber`] carries the factor list, the product, and a matrix of
//! residues `λ_k^{(j)}` defining the closed logarithmic forms
//!
//! ```text
//! θⱼ = Σ_k λ_k^{(j)} · dfₖ/fₖ ,        j = 1, …, r,
//! ```
//!
//! subject to the nonsingularity of the `(r+1) × (r+1)` matrix whose first
//! row is all ones and whose later rows are the residue rows.  The default
//! residue choice is `θⱼ = dfⱼ/fⱼ`.
//!
//! Two validation layers are separated deliberately:
//!
//! * **Exact checks** in [`FactoredFiber::new`]: homogeneity, pairwise
//!   non-proportionality (which rejects repeated factors), the rule that a
//!   single-monomial factor must be a scalar multiple of one variable
//!   (monomials like `x²` or `xy` are never irreducible), and the residue
//!   matrix determinant.  Full irreducibility testing is out of scope; the
//!   caller asserts it.
//! * A **numerical, explicitly heuristic** probe
//!   ([`FactoredFiber::transversality_probe`]) that samples points near
//!   pairwise intersections `fᵢ = fⱼ = 0` and checks that the two
//!   gradients stay linearly independent there — evidence for, never proof
//!   of, the normal-crossing hypothesis.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::Error as _;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::form::{DiffForm, LogForm};
use crate::poly::{proportionality, Polynomial, Vars};
use crate::scalar::GaussianRational;

/// A reduced homogeneous fiber polynomial together with its factors and
/// logarithmic residue rows.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FactoredFiber {
    vars: Vars,
    factors: Vec<Polynomial>,
    product: Polynomial,
    cofactors: Vec<Polynomial>,
    /// `r` rows of `r+1` residues; row `j−1` defines `θⱼ`.
    lambda: Vec<Vec<GaussianRational>>,
}

/// Rejection reasons for fiber data.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum FiberError {
    #[error("the factor list is empty")]
    NoFactors,
    #[error("factor {index} is constant ({factor}); factors must be nonconstant")]
    ConstantFactor { index: usize, factor: String },
    #[error("factor {index} ({factor}) is not homogeneous")]
    NonHomogeneousFactor { index: usize, factor: String },
    #[error(
        "factor {index} ({factor}) is a single monomial but not a scalar multiple of one \
         variable, so it cannot be irreducible"
    )]
    MonomialFactorNotLinear { index: usize, factor: String },
    #[error("factors {i} and {j} are proportional; the fiber polynomial must be reduced")]
    ProportionalFactors { i: usize, j: usize },
    #[error("factor {index} uses a different variable context")]
    ContextMismatch { index: usize },
    #[error("residue matrix must have {expected_rows} rows of {expected_cols} entries, got {got}")]
    LambdaShape { expected_rows: usize, expected_cols: usize, got: String },
    #[error(
        "the residue matrix is singular: the rows (1,…,1), λ⁽¹⁾, …, λ⁽ʳ⁾ must be linearly \
         independent"
    )]
    SingularResidueMatrix,
}

/// Exact determinant by elimination over Q(i).
fn determinant(mut m: Vec<Vec<GaussianRational>>) -> GaussianRational {
    let n = m.len();
    debug_assert!(m.iter().all(|row| row.len() == n));
    let mut det = GaussianRational::one();
    for col in 0..n {
        let Some(found) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return GaussianRational::zero();
        };
        if found != col {
            m.swap(col, found);
            det = -det;
        }
        det *= &m[col][col].clone();
        let inv = m[col][col].inverse().expect("nonzero pivot");
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] * &inv;
            for c in col..n {
                let delta = &factor * &m[col][c];
                m[r][c] -= &delta;
            }
        }
    }
    det
}

impl FactoredFiber {
    /// Validates and assembles fiber data.
    ///
    /// `lambda` gives the residue rows `λ⁽¹⁾, …, λ⁽ʳ⁾`; `None` selects the
    /// default `θⱼ = dfⱼ/fⱼ` (row `j` is the `j`-th standard basis vector).
    pub fn new(
        factors: Vec<Polynomial>,
        lambda: Option<Vec<Vec<GaussianRational>>>,
    ) -> Result<Self, FiberError> {
        if factors.is_empty() {
            return Err(FiberError::NoFactors);
        }
        let vars = factors[0].vars().clone();
        for (index, fk) in factors.iter().enumerate() {
            if fk.vars() != &vars {
                return Err(FiberError::ContextMismatch { index });
            }
            if fk.homogeneity().is_none() {
                if fk.is_homogeneous() {
                    // Homogeneous but without a degree: the zero polynomial.
                    return Err(FiberError::ConstantFactor { index, factor: fk.to_string() });
                }
                return Err(FiberError::NonHomogeneousFactor { index, factor: fk.to_string() });
            }
            if fk.homogeneity() == Some(0) {
                return Err(FiberError::ConstantFactor { index, factor: fk.to_string() });
            }
            if fk.term_count() == 1 {
                let (m, _) = fk.leading_term().expect("nonzero by the checks above");
                let linear = m.total_degree() == 1;
                if !linear {
                    return Err(FiberError::MonomialFactorNotLinear {
                        index,
                        factor: fk.to_string(),
                    });
                }
            }
        }
        for i in 0..factors.len() {
            for j in i + 1..factors.len() {
                if proportionality(&factors[i], &factors[j]).is_some() {
                    return Err(FiberError::ProportionalFactors { i, j });
                }
            }
        }

        let r = factors.len() - 1;
        let lambda = match lambda {
            Some(rows) => {
                let ok = rows.len() == r && rows.iter().all(|row| row.len() == r + 1);
                if !ok {
                    return Err(FiberError::LambdaShape {
                        expected_rows: r,
                        expected_cols: r + 1,
                        got: format!(
                            "{} rows of lengths {:?}",
                            rows.len(),
                            rows.iter().map(Vec::len).collect::<Vec<_>>()
                        ),
                    });
                }
                rows
            }
            None => (0..r)
                .map(|j| {
                    (0..=r)
                        .map(|k| {
                            if k == j {
                                GaussianRational::one()
                            } else {
                                GaussianRational::zero()
                            }
                        })
                        .collect()
                })
                .collect(),
        };

        // Nonsingularity of [ones; λ⁽¹⁾; …; λ⁽ʳ⁾].
        let mut matrix = Vec::with_capacity(r + 1);
        matrix.push(vec![GaussianRational::one(); r + 1]);
        matrix.extend(lambda.iter().cloned());
        if determinant(matrix).is_zero() {
            return Err(FiberError::SingularResidueMatrix);
        }

        let product = factors.iter().fold(Polynomial::one(&vars), |acc, fk| &acc * fk);
        let cofactors = (0..factors.len())
            .map(|k| {
                factors
                    .iter()
                    .enumerate()
                    .filter(|&(l, _)| l != k)
                    .fold(Polynomial::one(&vars), |acc, (_, fl)| &acc * fl)
            })
            .collect();
        Ok(FactoredFiber { vars, factors, product, cofactors, lambda })
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    /// The factors `f₁, …, f_{r+1}` (0-indexed).
    pub fn factors(&self) -> &[Polynomial] {
        &self.factors
    }

    pub fn factor(&self, k: usize) -> &Polynomial {
        &self.factors[k]
    }

    /// `r` = number of factors − 1 = number of logarithmic forms θⱼ.
    pub fn r(&self) -> usize {
        self.factors.len() - 1
    }

    /// The fiber polynomial `f = f₁ ⋯ f_{r+1}`.
    pub fn product(&self) -> &Polynomial {
        &self.product
    }

    /// `Π_{l≠k} f_l`, so that `f·dfₖ/fₖ = cofactor(k)·dfₖ`.
    pub fn cofactor(&self, k: usize) -> &Polynomial {
        &self.cofactors[k]
    }

    /// Degree of `f`, written `ν + 1` throughout.
    pub fn nu_plus_one(&self) -> u32 {
        self.product.homogeneity().expect("product of nonconstant homogeneous factors")
    }

    /// `ν = deg f − 1`.
    pub fn nu(&self) -> u32 {
        self.nu_plus_one() - 1
    }

    /// The residue rows.
    pub fn lambda_rows(&self) -> &[Vec<GaussianRational>] {
        &self.lambda
    }

    /// The logarithmic form `θⱼ = Σ_k λ_k^{(j)} dfₖ/fₖ` for `1 ≤ j ≤ r`.
    pub fn theta(&self, j: usize) -> LogForm {
        assert!((1..=self.r()).contains(&j), "θ index must lie in 1..=r");
        let terms = self.lambda[j - 1]
            .iter()
            .zip(&self.factors)
            .filter(|(l, _)| !l.is_zero())
            .map(|(l, fk)| (l.clone(), fk.clone()))
            .collect();
        LogForm::new(&self.vars, terms)
    }

    /// The polynomial 1-form `f·θⱼ = Σ_k λ_k^{(j)} (f/fₖ) dfₖ`.
    pub fn f_theta(&self, j: usize) -> DiffForm {
        assert!((1..=self.r()).contains(&j), "θ index must lie in 1..=r");
        let mut out = DiffForm::zero(&self.vars, 1);
        for (k, l) in self.lambda[j - 1].iter().enumerate() {
            if l.is_zero() {
                continue;
            }
            out += &(&self.cofactors[k].scale(l) * &self.factors[k].differential());
        }
        out
    }

    /// Numerical, **heuristic** transversality probe: for every factor
    /// pair, walk random starts onto the intersection `fᵢ = fⱼ = 0` on the
    /// unit sphere and measure linear independence of the two gradients
    /// there (smallest/largest singular value of the 2×n Jacobian).
    ///
    /// Passing runs support, but never prove, the normal-crossing
    /// hypothesis; failures carry the offending pair.
    pub fn transversality_probe(&self, options: &ProbeOptions) -> Result<ProbeReport, ProbeError> {
        let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
        let n = self.vars.len();
        let mut pairs = Vec::new();
        for i in 0..self.factors.len() {
            for j in i + 1..self.factors.len() {
                let grads_i: Vec<Polynomial> = (0..n).map(|v| self.factors[i].partial(v)).collect();
                let grads_j: Vec<Polynomial> = (0..n).map(|v| self.factors[j].partial(v)).collect();
                let mut found = 0usize;
                let mut attempts = 0usize;
                let mut min_gap = f64::INFINITY;
                while found < options.samples_per_pair {
                    if attempts >= options.max_attempts_per_pair {
                        return Err(ProbeError::SamplingFailure { i, j, attempts });
                    }
                    attempts += 1;
                    let mut z: Vec<Complex64> = (0..n)
                        .map(|_| {
                            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                        })
                        .collect();
                    normalize(&mut z);
                    if !newton_to_intersection(
                        &self.factors[i],
                        &self.factors[j],
                        &grads_i,
                        &grads_j,
                        &mut z,
                        options.newton_steps,
                    ) {
                        continue;
                    }
                    found += 1;
                    let gap = gradient_gap(&grads_i, &grads_j, &z);
                    if gap < min_gap {
                        min_gap = gap;
                    }
                }
                pairs.push(PairProbe {
                    i,
                    j,
                    points_tested: found,
                    min_singular_ratio: min_gap,
                    independent: min_gap > INDEPENDENCE_THRESHOLD,
                });
            }
        }
        let all_independent = pairs.iter().all(|p| p.independent);
        Ok(ProbeReport { heuristic: true, pairs, all_independent })
    }
}

/// Smallest acceptable ratio `σ_min/σ_max` of the pairwise gradient
/// Jacobian before a sample point counts as a transversality failure.
const INDEPENDENCE_THRESHOLD: f64 = 1e-6;

/// Residual size below which a Newton iterate counts as on the intersection.
const NEWTON_TOLERANCE: f64 = 1e-10;

fn normalize(z: &mut [Complex64]) {
    let norm = z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        for c in z.iter_mut() {
            *c /= norm;
        }
    }
}

/// Gauss–Newton with minimum-norm steps toward `fᵢ = fⱼ = 0`, re-projected
/// to the unit sphere after each step (zero sets of homogeneous
/// polynomials are cones, so the sphere slice carries all the geometry).
fn newton_to_intersection(
    fi: &Polynomial,
    fj: &Polynomial,
    grads_i: &[Polynomial],
    grads_j: &[Polynomial],
    z: &mut Vec<Complex64>,
    steps: usize,
) -> bool {
    for _ in 0..steps {
        let vi = fi.evaluate(z).expect("arity checked by construction");
        let vj = fj.evaluate(z).expect("arity checked by construction");
        if vi.norm() < NEWTON_TOLERANCE && vj.norm() < NEWTON_TOLERANCE {
            return true;
        }
        let gi: Vec<Complex64> = grads_i.iter().map(|g| g.evaluate(z).unwrap()).collect();
        let gj: Vec<Complex64> = grads_j.iter().map(|g| g.evaluate(z).unwrap()).collect();
        // Minimum-norm solution of J·δ = F for the 2×n Jacobian J = [∇fᵢ; ∇fⱼ]:
        // δ = Jᴴ (J Jᴴ)⁻¹ F.
        let a: f64 = gi.iter().map(|c| c.norm_sqr()).sum();
        let d: f64 = gj.iter().map(|c| c.norm_sqr()).sum();
        let b: Complex64 = gi.iter().zip(&gj).map(|(p, q)| p * q.conj()).sum();
        let det = a * d - b.norm_sqr();
        if det.abs() < 1e-14 {
            return false; // gradients (numerically) parallel here; new start
        }
        // (J Jᴴ)⁻¹ [vi, vj]ᵀ by Cramer's rule.
        let u = (vi * d - vj * b) / det;
        let w = (vj * a - vi * b.conj()) / det;
        for (k, slot) in z.iter_mut().enumerate() {
            *slot -= gi[k].conj() * u + gj[k].conj() * w;
        }
        normalize(z);
    }
    false
}

/// `σ_min/σ_max` of the 2×n Jacobian at `z`, from the eigenvalues of the
/// 2×2 Hermitian matrix `J Jᴴ`.
fn gradient_gap(grads_i: &[Polynomial], grads_j: &[Polynomial], z: &[Complex64]) -> f64 {
    let gi: Vec<Complex64> = grads_i.iter().map(|g| g.evaluate(z).unwrap()).collect();
    let gj: Vec<Complex64> = grads_j.iter().map(|g| g.evaluate(z).unwrap()).collect();
    let a: f64 = gi.iter().map(|c| c.norm_sqr()).sum();
    let d: f64 = gj.iter().map(|c| c.norm_sqr()).sum();
    let b: Complex64 = gi.iter().zip(&gj).map(|(p, q)| p * q.conj()).sum();
    let tr = a + d;
    let det = (a * d - b.norm_sqr()).max(0.0);
    let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
    let hi = 0.5 * (tr + disc);
    let lo = 0.5 * (tr - disc).max(0.0);
    if hi <= 0.0 {
        return 0.0;
    }
    (lo / hi).sqrt()
}

/// Knobs for [`FactoredFiber::transversality_probe`].
#[derive(Clone, Debug)]
pub struct ProbeOptions {
    pub samples_per_pair: usize,
    pub max_attempts_per_pair: usize,
    pub newton_steps: usize,
    pub seed: u64,
}

impl Default for ProbeOptions {
    fn default() -> Self {
        ProbeOptions { samples_per_pair: 12, max_attempts_per_pair: 60, newton_steps: 80, seed: 7 }
    }
}

/// Outcome of the probe; `heuristic` is always `true` as a reminder that
/// this is sampled evidence, not a certificate.
#[derive(Clone, Debug, Serialize)]
pub struct ProbeReport {
    pub heuristic: bool,
    pub pairs: Vec<PairProbe>,
    pub all_independent: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairProbe {
    pub i: usize,
    pub j: usize,
    pub points_tested: usize,
    /// Worst observed `σ_min/σ_max` of the pairwise gradient Jacobian.
    pub min_singular_ratio: f64,
    pub independent: bool,
}

#[derive(Debug, Error)]
pub enum ProbeError {
    #[error(
        "could not sample the intersection of factors {i} and {j} after {attempts} attempts; \
         the intersection may be empty on the unit sphere"
    )]
    SamplingFailure { i: usize, j: usize, attempts: usize },
}

// ---- serde ----
//
//   { "vars": [...], "factors": [Polynomial, …], "lambda": [[ ["re","im"], … ], …] }
//
// `lambda` may be omitted on input for the default residues; output always
// writes it.

impl Serialize for FactoredFiber {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("FactoredFiber", 3)?;
        s.serialize_field("vars", self.vars.names())?;
        s.serialize_field("factors", &self.factors)?;
        s.serialize_field("lambda", &self.lambda)?;
        s.end()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WireFiber {
    vars: Vec<String>,
    factors: Vec<Polynomial>,
    #[serde(default)]
    lambda: Option<Vec<Vec<GaussianRational>>>,
}

impl<'de> Deserialize<'de> for FactoredFiber {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = WireFiber::deserialize(deserializer)?;
        let vars = Vars::try_new(&wire.vars).map_err(D::Error::custom)?;
        for (index, fk) in wire.factors.iter().enumerate() {
            if fk.vars() != &vars {
                return Err(D::Error::custom(format!(
                    "factor {index} uses a different variable context"
                )));
            }
        }
        FactoredFiber::new(wire.factors, wire.lambda).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Monomial;
    use crate::scalar::GaussianRational as G;

    fn vxyz() -> Vars {
        Vars::new(&["x", "y", "z"])
    }

    fn mono(vars: &Vars, c: i64, exps: &[u32]) -> Polynomial {
        Polynomial::term(vars, Monomial::new(exps.to_vec()), G::from_int(c))
    }

    fn coords(vars: &Vars) -> Vec<Polynomial> {
        (0..vars.len()).map(|i| Polynomial::variable(vars, i)).collect()
    }

    #[test]
    fn xyz_fiber_with_default_residues() {
        let v = vxyz();
        let fiber = FactoredFiber::new(coords(&v), None).unwrap();
        assert_eq!(fiber.r(), 2);
        assert_eq!(fiber.product(), &mono(&v, 1, &[1, 1, 1]));
        assert_eq!(fiber.nu_plus_one(), 3);
        assert_eq!(fiber.nu(), 2);
        assert_eq!(fiber.cofactor(0), &mono(&v, 1, &[0, 1, 1]));
        // f·θ₁ = f·dx/x = yz dx.
        let ft1 = fiber.f_theta(1);
        assert_eq!(ft1.component(&[0]), mono(&v, 1, &[0, 1, 1]));
        assert!(ft1.component(&[1]).is_zero());
        // f·θ₂ = xz dy.
        let ft2 = fiber.f_theta(2);
        assert_eq!(ft2.component(&[1]), mono(&v, 1, &[1, 0, 1]));
        // θ₁ has residues (1, 0, 0).
        let theta1 = fiber.theta(1);
        assert_eq!(theta1.terms().len(), 1);
        assert_eq!(theta1.terms()[0].0, G::one());
    }

    #[test]
    fn determinant_cases() {
        let one = G::one();
        let zero = G::zero();
        assert_eq!(determinant(vec![vec![G::from_int(5)]]), G::from_int(5));
        assert_eq!(
            determinant(vec![vec![one.clone(), one.clone()], vec![one.clone(), one.clone()]]),
            zero
        );
        // [[1,1,1],[1,0,0],[0,1,0]] has determinant 1.
        let m = vec![
            vec![G::from_int(1), G::from_int(1), G::from_int(1)],
            vec![G::from_int(1), G::from_int(0), G::from_int(0)],
            vec![G::from_int(0), G::from_int(1), G::from_int(0)],
        ];
        assert_eq!(determinant(m), G::from_int(1));
        // Complex entries: det [[i, 1], [1, i]] = i² − 1 = −2.
        let m = vec![vec![G::i(), G::from_int(1)], vec![G::from_int(1), G::i()]];
        assert_eq!(determinant(m), G::from_int(-2));
    }

    #[test]
    fn rejects_non_reduced_and_non_homogeneous_data() {
        let v = vxyz();
        let x = Polynomial::variable(&v, 0);
        let y = Polynomial::variable(&v, 1);

        // Repeated factor [x, x, y].
        assert_eq!(
            FactoredFiber::new(vec![x.clone(), x.clone(), y.clone()], None).unwrap_err(),
            FiberError::ProportionalFactors { i: 0, j: 1 }
        );
        // Proportional pair.
        assert_eq!(
            FactoredFiber::new(vec![&x + &y, (&x + &y).scale(&G::from_int(2))], None).unwrap_err(),
            FiberError::ProportionalFactors { i: 0, j: 1 }
        );
        // x² is a monomial that is not a variable.
        assert!(matches!(
            FactoredFiber::new(vec![mono(&v, 1, &[2, 0, 0]), y.clone()], None).unwrap_err(),
            FiberError::MonomialFactorNotLinear { index: 0, .. }
        ));
        // xy as a single factor is likewise not irreducible.
        assert!(matches!(
            FactoredFiber::new(vec![mono(&v, 1, &[1, 1, 0])], None).unwrap_err(),
            FiberError::MonomialFactorNotLinear { index: 0, .. }
        ));
        // Non-homogeneous factor.
        assert!(matches!(
            FactoredFiber::new(vec![&x + &Polynomial::one(&v)], None).unwrap_err(),
            FiberError::NonHomogeneousFactor { index: 0, .. }
        ));
        // Constant factor.
        assert!(matches!(
            FactoredFiber::new(vec![Polynomial::one(&v)], None).unwrap_err(),
            FiberError::ConstantFactor { index: 0, .. }
        ));
        // Empty list.
        assert_eq!(FactoredFiber::new(vec![], None).unwrap_err(), FiberError::NoFactors);
    }

    #[test]
    fn residue_matrix_must_be_nonsingular() {
        let v = vxyz();
        let x = Polynomial::variable(&v, 0);
        let y = Polynomial::variable(&v, 1);
        // Row (1, 1) is parallel to the all-ones row.
        let err = FactoredFiber::new(
            vec![x.clone(), y.clone()],
            Some(vec![vec![G::one(), G::one()]]),
        )
        .unwrap_err();
        assert_eq!(err, FiberError::SingularResidueMatrix);
        // Shape errors are caught before the determinant.
        assert!(matches!(
            FactoredFiber::new(vec![x.clone(), y.clone()], Some(vec![vec![G::one()]]))
                .unwrap_err(),
            FiberError::LambdaShape { expected_rows: 1, expected_cols: 2, .. }
        ));
        // A nonsingular custom choice: λ⁽¹⁾ = (1, −1).
        let fiber = FactoredFiber::new(
            vec![x, y],
            Some(vec![vec![G::one(), G::from_int(-1)]]),
        )
        .unwrap();
        let theta = fiber.theta(1);
        assert_eq!(theta.terms().len(), 2);
    }

    #[test]
    fn accepts_mixed_quadric_and_plane() {
        // f₁ = x² + y² + z², f₂ = z: distinct supports, both homogeneous.
        let v = vxyz();
        let quad = &(&mono(&v, 1, &[2, 0, 0]) + &mono(&v, 1, &[0, 2, 0])) + &mono(&v, 1, &[0, 0, 2]);
        let fiber = FactoredFiber::new(vec![quad, Polynomial::variable(&v, 2)], None).unwrap();
        assert_eq!(fiber.nu_plus_one(), 3);
        assert_eq!(fiber.r(), 1);
    }

    #[test]
    fn probe_passes_for_coordinate_planes() {
        let v = vxyz();
        let fiber = FactoredFiber::new(coords(&v), None).unwrap();
        let opts = ProbeOptions { samples_per_pair: 6, ..ProbeOptions::default() };
        let report = fiber.transversality_probe(&opts).unwrap();
        assert!(report.heuristic);
        assert_eq!(report.pairs.len(), 3);
        assert!(report.all_independent, "coordinate planes are transverse: {report:?}");
        for pair in &report.pairs {
            assert!(pair.min_singular_ratio > 0.5, "planes meet at right angles: {pair:?}");
        }
    }

    #[test]
    fn probe_is_trivial_without_pairs() {
        let v = vxyz();
        let fiber =
            FactoredFiber::new(vec![Polynomial::variable(&v, 0)], None).unwrap();
        let report = fiber.transversality_probe(&ProbeOptions::default()).unwrap();
        assert!(report.pairs.is_empty());
        assert!(report.all_independent);
    }

    #[test]
    fn probe_is_deterministic_for_a_seed() {
        let v = vxyz();
        let fiber = FactoredFiber::new(coords(&v), None).unwrap();
        let opts = ProbeOptions { samples_per_pair: 4, seed: 99, ..ProbeOptions::default() };
        let a = fiber.transversality_probe(&opts).unwrap();
        let b = fiber.transversality_probe(&opts).unwrap();
        for (p, q) in a.pairs.iter().zip(&b.pairs) {
            assert_eq!(p.min_singular_ratio, q.min_singular_ratio);
        }
    }

    #[test]
    fn serde_round_trip() {
        let v = vxyz();
        let fiber = FactoredFiber::new(
            vec![Polynomial::variable(&v, 0), Polynomial::variable(&v, 1)],
            Some(vec![vec![G::from_ratio(1, 2), G::from_int(-1)]]),
        )
        .unwrap();
        let json = serde_json::to_string(&fiber).unwrap();
        let back: FactoredFiber = serde_json::from_str(&json).unwrap();
        assert_eq!(back, fiber);
        assert_eq!(serde_json::to_string(&back).unwrap(), json);
        // Default lambda on input.
        let short = r#"{"vars":["x","y","z"],
            "factors":[{"vars":["x","y","z"],"terms":[{"coeff":["1","0"],"exps":[1,0,0]}]},
                       {"vars":["x","y","z"],"terms":[{"coeff":["1","0"],"exps":[0,1,0]}]}]}"#;
        let parsed: FactoredFiber = serde_json::from_str(short).unwrap();
        assert_eq!(parsed.lambda_rows(), &[vec![G::one(), G::zero()]]);
        // Invalid data is a parse error, not a panic.
        let bad = r#"{"vars":["x","y"],
            "factors":[{"vars":["x","y"],"terms":[{"coeff":["1","0"],"exps":[2,0]}]}]}"#;
        assert!(serde_json::from_str::<FactoredFiber>(bad).is_err());
    }
}
