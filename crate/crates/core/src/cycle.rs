//! Cycles on fibers `f = c`, parametrized by trigonometric polynomials.
//!
//! A [`Cycle`] is a smooth loop `γ : [0, 2π] → Cⁿ` whose coordinates are
//! finite Fourier sums `γ_k(s) = Σ_m c_{k,m} e^{i m s}`.  Periods of
//! polynomial 1-forms along such loops are entire, 2π-periodic integrands,
//! for which the trapezoid rule converges spectrally — the quadrature side
//! lives in [`crate::period`].
//!
//! The loop records which fiber it is supposed to live on (`fiber_value`)
//! and how much numerical drift is acceptable (`fiber_tolerance`); the
//! period engine re-checks residency before integrating.
//!
//! [`standard_torus_cycle`] builds the canonical vanishing-type cycle near
//! a normal crossing of two coordinate hyperplanes: in the plane of
//! variables `(i, j)` it is
//!
//! ```text
//! γ(s) = anchor + ε e^{is}·e_i + ε e^{-is}·e_j ,
//! ```
//!
//! where the anchor has zeros in slots `i, j` and the radius `ε` is chosen
//! so that `f ∘ γ ≡ c` *exactly* — which is possible precisely when `f`
//! collapses to `ρ·u·v` after freezing the other coordinates at the
//! anchor, a condition this constructor verifies in exact arithmetic.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::de::Error as _;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::poly::{Polynomial, Vars};
use crate::scalar::GaussianRational;

/// A finite Fourier sum `Σ_m c_m e^{i m s}` with integer frequencies.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierSeries {
    terms: BTreeMap<i32, Complex64>,
}

impl FourierSeries {
    /// Sums duplicate frequencies; keeps exact zeros out of the map.
    pub fn new<I: IntoIterator<Item = (i32, Complex64)>>(terms: I) -> Self {
        let mut map: BTreeMap<i32, Complex64> = BTreeMap::new();
        for (m, c) in terms {
            let slot = map.entry(m).or_insert(Complex64::new(0.0, 0.0));
            *slot += c;
        }
        map.retain(|_, c| c.re != 0.0 || c.im != 0.0);
        FourierSeries { terms: map }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new([(0, c)])
    }

    /// `c · e^{i m s}`.
    pub fn harmonic(m: i32, c: Complex64) -> Self {
        Self::new([(m, c)])
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i32, &Complex64)> {
        self.terms.iter()
    }

    /// Value at parameter `s`.
    pub fn eval(&self, s: f64) -> Complex64 {
        self.terms
            .iter()
            .map(|(&m, c)| c * Complex64::new(0.0, f64::from(m) * s).exp())
            .sum()
    }

    /// Derivative `d/ds` at `s`: `Σ (i m) c_m e^{i m s}`.
    pub fn velocity(&self, s: f64) -> Complex64 {
        self.terms
            .iter()
            .map(|(&m, c)| {
                c * Complex64::new(0.0, f64::from(m)) * Complex64::new(0.0, f64::from(m) * s).exp()
            })
            .sum()
    }
}

/// A Fourier-parametrized loop on the fiber `f = fiber_value`.
#[derive(Clone, Debug, PartialEq)]
pub struct Cycle {
    coords: Vec<FourierSeries>,
    fiber_value: Complex64,
    fiber_tolerance: f64,
}

/// Default residency tolerance for cycles built by this crate.
pub const DEFAULT_FIBER_TOLERANCE: f64 = 1e-9;

impl Cycle {
    pub fn new(coords: Vec<FourierSeries>, fiber_value: Complex64, fiber_tolerance: f64) -> Self {
        assert!(!coords.is_empty(), "a cycle needs at least one coordinate");
        assert!(fiber_tolerance > 0.0, "fiber tolerance must be positive");
        Cycle { coords, fiber_value, fiber_tolerance }
    }

    /// Ambient dimension `n`.
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[FourierSeries] {
        &self.coords
    }

    pub fn fiber_value(&self) -> Complex64 {
        self.fiber_value
    }

    pub fn fiber_tolerance(&self) -> f64 {
        self.fiber_tolerance
    }

    /// The point `γ(s)`.
    pub fn point(&self, s: f64) -> Vec<Complex64> {
        self.coords.iter().map(|f| f.eval(s)).collect()
    }

    /// The velocity `γ′(s)`.
    pub fn velocity(&self, s: f64) -> Vec<Complex64> {
        self.coords.iter().map(|f| f.velocity(s)).collect()
    }

    /// Largest deviation `max_s |f(γ(s)) − fiber_value|` sampled at `nodes`
    /// equidistant parameters.
    pub fn residency_defect(&self, f: &Polynomial, nodes: usize) -> f64 {
        assert_eq!(f.nvars(), self.dim(), "polynomial arity must match the cycle dimension");
        let mut worst: f64 = 0.0;
        for k in 0..nodes {
            let s = 2.0 * std::f64::consts::PI * (k as f64) / (nodes as f64);
            let value = f.evaluate(&self.point(s)).expect("arity checked above");
            worst = worst.max((value - self.fiber_value).norm());
        }
        worst
    }
}

/// Rejections from [`standard_torus_cycle`].
#[derive(Debug, Error)]
pub enum CycleError {
    #[error("torus plane indices ({i}, {j}) must be distinct and below the dimension {n}")]
    BadPlane { i: usize, j: usize, n: usize },
    #[error("anchor has {got} coordinates, the context has {expected}")]
    AnchorArity { expected: usize, got: usize },
    #[error("anchor coordinate {index} must be zero in the torus plane")]
    AnchorNotZeroOnPlane { index: usize },
    #[error("the fiber value c must be nonzero (c = 0 meets the singular locus)")]
    ZeroFiberValue,
    #[error(
        "no standard torus here: freezing the other coordinates at the anchor leaves \
         f(u, v) = {got}, not a nonzero multiple of u·v; pick an anchor on a normal crossing \
         of the two chosen coordinate hyperplanes"
    )]
    NotACrossing { got: String },
}

/// Builds the standard torus cycle in the `(i, j)` coordinate plane around
/// the given anchor, landing exactly on the fiber `f = c`.
///
/// Exact residency argument: substituting `xᵢ = u`, `xⱼ = v`, and
/// `x_k = anchor_k` otherwise must reduce `f` to `ρ·u·v` with `ρ ≠ 0` —
/// verified in rational arithmetic.  Then with `ε = √(c/ρ)`,
/// `f(γ(s)) = ρ·(ε e^{is})(ε e^{-is}) = c` identically in `s`. The factor
/// on the `xᵢ = 0` hyperplane winds once positively, the one on `xⱼ = 0`
/// once negatively.
pub fn standard_torus_cycle(
    f: &Polynomial,
    plane: (usize, usize),
    anchor: &[GaussianRational],
    c: Complex64,
    fiber_tolerance: f64,
) -> Result<Cycle, CycleError> {
    let n = f.nvars();
    let (i, j) = plane;
    if i == j || i >= n || j >= n {
        return Err(CycleError::BadPlane { i, j, n });
    }
    if anchor.len() != n {
        return Err(CycleError::AnchorArity { expected: n, got: anchor.len() });
    }
    for (index, slot) in [(i, &anchor[i]), (j, &anchor[j])] {
        if !slot.is_zero() {
            return Err(CycleError::AnchorNotZeroOnPlane { index });
        }
    }
    if c.norm() == 0.0 {
        return Err(CycleError::ZeroFiberValue);
    }

    // Freeze every other coordinate at the anchor, exactly.
    let uv = Vars::new(&["u", "v"]);
    let images: Vec<Polynomial> = (0..n)
        .map(|k| {
            if k == i {
                Polynomial::variable(&uv, 0)
            } else if k == j {
                Polynomial::variable(&uv, 1)
            } else {
                Polynomial::constant(&uv, anchor[k].clone())
            }
        })
        .collect();
    let g = f.substitute(&images);
    let rho = match (g.term_count(), g.leading_term()) {
        (1, Some((m, coeff))) if m.exps() == [1, 1] => coeff.clone(),
        _ => return Err(CycleError::NotACrossing { got: g.to_string() }),
    };

    let epsilon = (c / rho.to_complex64()).sqrt();
    let coords = (0..n)
        .map(|k| {
            if k == i {
                FourierSeries::harmonic(1, epsilon)
            } else if k == j {
                FourierSeries::harmonic(-1, epsilon)
            } else {
                FourierSeries::constant(anchor[k].to_complex64())
            }
        })
        .collect();
    Ok(Cycle::new(coords, c, fiber_tolerance))
}

// ---- serde ----
//
// Complex numbers are [re, im] pairs of floats on the wire.
//
// Cycle:
//   { "coords": [ { "terms": [ { "m": -1, "c": [re, im] }, … ] }, … ],
//     "fiber_value": [re, im],
//     "fiber_tolerance": 1e-9 }

fn c64_to_wire(c: Complex64) -> [f64; 2] {
    [c.re, c.im]
}

fn c64_from_wire(w: [f64; 2]) -> Complex64 {
    Complex64::new(w[0], w[1])
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireFourierTerm {
    m: i32,
    c: [f64; 2],
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireFourier {
    terms: Vec<WireFourierTerm>,
}

impl Serialize for FourierSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let wire = WireFourier {
            terms: self
                .terms
                .iter()
                .map(|(&m, &c)| WireFourierTerm { m, c: c64_to_wire(c) })
                .collect(),
        };
        wire.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FourierSeries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = WireFourier::deserialize(deserializer)?;
        Ok(FourierSeries::new(wire.terms.into_iter().map(|t| (t.m, c64_from_wire(t.c)))))
    }
}

impl Serialize for Cycle {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Cycle", 3)?;
        s.serialize_field("coords", &self.coords)?;
        s.serialize_field("fiber_value", &c64_to_wire(self.fiber_value))?;
        s.serialize_field("fiber_tolerance", &self.fiber_tolerance)?;
        s.end()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WireCycle {
    coords: Vec<FourierSeries>,
    fiber_value: [f64; 2],
    fiber_tolerance: f64,
}

impl<'de> Deserialize<'de> for Cycle {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = WireCycle::deserialize(deserializer)?;
        if wire.coords.is_empty() {
            return Err(D::Error::custom("a cycle needs at least one coordinate"));
        }
        if !(wire.fiber_tolerance > 0.0) {
            return Err(D::Error::custom("fiber_tolerance must be positive"));
        }
        Ok(Cycle::new(wire.coords, c64_from_wire(wire.fiber_value), wire.fiber_tolerance))
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

    fn xyz(vars: &Vars) -> Polynomial {
        Polynomial::term(vars, Monomial::new(vec![1, 1, 1]), G::one())
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn fourier_evaluation() {
        // 2cos(s) = e^{is} + e^{-is}.
        let one = Complex64::new(1.0, 0.0);
        let f = FourierSeries::new([(1, one), (-1, one)]);
        assert!(close(f.eval(0.0), Complex64::new(2.0, 0.0), 1e-14));
        assert!(close(f.eval(std::f64::consts::PI / 2.0), Complex64::new(0.0, 0.0), 1e-14));
        // d/ds 2cos(s) = −2 sin(s).
        assert!(close(
            f.velocity(std::f64::consts::PI / 2.0),
            Complex64::new(-2.0, 0.0),
            1e-14
        ));
        // Duplicate frequencies merge; zero sums drop.
        let g = FourierSeries::new([(3, one), (3, -one)]);
        assert_eq!(g.terms().count(), 0);
    }

    #[test]
    fn standard_torus_lands_on_the_fiber() {
        let v = vxyz();
        let f = xyz(&v);
        let anchor = [G::zero(), G::zero(), G::one()];
        for c in [
            Complex64::new(1.0, 0.0),
            Complex64::new(4.0, 0.0),
            Complex64::new(2.0, -1.0),
        ] {
            let cycle = standard_torus_cycle(&f, (0, 1), &anchor, c, 1e-9).unwrap();
            assert_eq!(cycle.dim(), 3);
            assert!(cycle.residency_defect(&f, 181) < 1e-12, "c = {c}");
            // γ(0) = (ε, ε, 1) with ε = √c.
            let p = cycle.point(0.0);
            assert!(close(p[0] * p[1] * p[2], c, 1e-12));
            assert!(close(p[2], Complex64::new(1.0, 0.0), 1e-15));
        }
    }

    #[test]
    fn torus_in_another_plane() {
        let v = vxyz();
        let f = xyz(&v);
        let anchor = [G::zero(), G::one(), G::zero()];
        let cycle =
            standard_torus_cycle(&f, (0, 2), &anchor, Complex64::new(1.0, 0.0), 1e-9).unwrap();
        assert!(cycle.residency_defect(&f, 97) < 1e-12);
        // x winds +1: x(s) = e^{is}.
        let quarter = cycle.point(std::f64::consts::PI / 2.0);
        assert!(close(quarter[0], Complex64::new(0.0, 1.0), 1e-14));
        assert!(close(quarter[2], Complex64::new(0.0, -1.0), 1e-14));
    }

    #[test]
    fn torus_constructor_rejects_bad_data() {
        let v = vxyz();
        let f = xyz(&v);
        let c = Complex64::new(1.0, 0.0);
        let anchor = [G::zero(), G::zero(), G::one()];
        assert!(matches!(
            standard_torus_cycle(&f, (1, 1), &anchor, c, 1e-9),
            Err(CycleError::BadPlane { .. })
        ));
        assert!(matches!(
            standard_torus_cycle(&f, (0, 1), &anchor[..2], c, 1e-9),
            Err(CycleError::AnchorArity { expected: 3, got: 2 })
        ));
        let off = [G::one(), G::zero(), G::one()];
        assert!(matches!(
            standard_torus_cycle(&f, (0, 1), &off, c, 1e-9),
            Err(CycleError::AnchorNotZeroOnPlane { index: 0 })
        ));
        assert!(matches!(
            standard_torus_cycle(&f, (0, 1), &anchor, Complex64::new(0.0, 0.0), 1e-9),
            Err(CycleError::ZeroFiberValue)
        ));
        // Anchor with z = 0 kills the product: f(u,v,0) = 0, not ρuv.
        let origin = [G::zero(), G::zero(), G::zero()];
        assert!(matches!(
            standard_torus_cycle(&f, (0, 1), &origin, c, 1e-9),
            Err(CycleError::NotACrossing { .. })
        ));
    }

    #[test]
    fn quadric_factor_admits_no_standard_torus() {
        // f = (x² + y² + z²)·w: freezing (z, w) leaves u² + v², never ρ·u·v.
        let v = Vars::new(&["x", "y", "z", "w"]);
        let quad = Polynomial::from_terms(
            &v,
            [
                (Monomial::new(vec![2, 0, 0, 0]), G::one()),
                (Monomial::new(vec![0, 2, 0, 0]), G::one()),
                (Monomial::new(vec![0, 0, 2, 0]), G::one()),
            ],
        );
        let f = &quad * &Polynomial::variable(&v, 3);
        let anchor = [G::zero(), G::zero(), G::zero(), G::one()];
        let err = standard_torus_cycle(&f, (0, 1), &anchor, Complex64::new(1.0, 0.0), 1e-9)
            .unwrap_err();
        assert!(matches!(err, CycleError::NotACrossing { .. }), "got {err}");
    }

    #[test]
    fn residency_detects_drift() {
        let v = vxyz();
        let f = xyz(&v);
        // A circle that does not stay on f = 1.
        let one = Complex64::new(1.0, 0.0);
        let cycle = Cycle::new(
            vec![
                FourierSeries::harmonic(1, one),
                FourierSeries::constant(one),
                FourierSeries::constant(one),
            ],
            one,
            1e-9,
        );
        assert!(cycle.residency_defect(&f, 64) > 1.0);
    }

    #[test]
    fn serde_round_trip() {
        let v = vxyz();
        let f = xyz(&v);
        let anchor = [G::zero(), G::zero(), G::one()];
        let cycle =
            standard_torus_cycle(&f, (0, 1), &anchor, Complex64::new(2.0, -1.0), 1e-9).unwrap();
        let json = serde_json::to_string(&cycle).unwrap();
        let back: Cycle = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cycle);
        assert_eq!(serde_json::to_string(&back).unwrap(), json);
        // Bad tolerance is rejected.
        let bad = json.replace("1e-9", "-1.0");
        assert!(serde_json::from_str::<Cycle>(&bad).is_err());
    }
}
