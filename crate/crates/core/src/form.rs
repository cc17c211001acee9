//! Polynomial differential forms.
//!
//! A [`DiffForm`] of degree `p` in variables `x₁, …, xₙ` is a sum
//!
//! ```text
//! ω = Σ_I  P_I · dx_{i₁} ∧ … ∧ dx_{iₚ},      I = (i₁ < … < iₚ),
//! ```
//!
//! stored as a map from strictly increasing index tuples to nonzero
//! polynomial coefficients.  Degree 0 forms are polynomials (the empty
//! tuple), and any form of degree `p > n` is zero because every tuple
//! repeats an index.
//!
//! The module implements the exterior calculus exactly: wedge product,
//! exterior derivative, pullback along a polynomial map, and contraction
//! with the radial (Euler) vector field `R = Σ xᵢ ∂/∂xᵢ`, for which
//! `ι_R(df) = m·f` on homogeneous `f` of degree `m`.  [`LogForm`] adds
//! closed logarithmic 1-forms `θ = Σ λₖ dfₖ/fₖ`, which stay rational until
//! their denominators are cleared against a designated multiple.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;
use serde::de::Error as _;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::poly::{check_same_vars, Degree, EvalError, Polynomial, Vars};
use crate::scalar::GaussianRational;

/// Errors from fallible form operations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormError {
    #[error("expected a 1-form, got a {p}-form")]
    ExpectedOneForm { p: usize },
    #[error("pullback arity mismatch: form lives in {expected} variables, map has {got} components")]
    PullbackArity { expected: usize, got: usize },
    #[error("pole {pole} does not divide the designated multiple {multiple}")]
    PoleDoesNotDivide { pole: String, multiple: String },
}

/// A polynomial differential form of fixed degree `p`.
#[derive(Clone, PartialEq, Eq)]
pub struct DiffForm {
    vars: Vars,
    p: usize,
    components: BTreeMap<Vec<usize>, Polynomial>,
}

/// Insertion sort of an index tuple, tracking the permutation sign.
/// Returns `None` when an index repeats (the term vanishes), otherwise
/// `Some(true)` for an odd permutation.
fn sort_with_sign(idx: &mut [usize]) -> Option<bool> {
    let mut negative = false;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            negative = !negative;
            j -= 1;
        }
        if j > 0 && idx[j - 1] == idx[j] {
            return None;
        }
    }
    Some(negative)
}

impl DiffForm {
    /// The zero `p`-form.  Degrees `p > n` are permitted and are always zero.
    pub fn zero(vars: &Vars, p: usize) -> Self {
        DiffForm { vars: vars.clone(), p, components: BTreeMap::new() }
    }

    /// A polynomial viewed as a 0-form.
    pub fn function(poly: Polynomial) -> Self {
        let vars = poly.vars().clone();
        let mut form = DiffForm::zero(&vars, 0);
        form.insert_sorted(Vec::new(), poly);
        form
    }

    /// The 1-form `Σ comps[i] · dxᵢ`; `comps.len()` must equal the arity.
    pub fn one_form(vars: &Vars, comps: Vec<Polynomial>) -> Self {
        assert_eq!(comps.len(), vars.len(), "one component per variable");
        let mut form = DiffForm::zero(vars, 1);
        for (i, poly) in comps.into_iter().enumerate() {
            check_same_vars(vars, poly.vars(), "one_form");
            form.insert_sorted(vec![i], poly);
        }
        form
    }

    /// Builds a form from `(index tuple, coefficient)` pairs.  Tuples must
    /// be strictly increasing with entries below the arity; duplicate
    /// tuples accumulate and zero coefficients drop.
    pub fn from_components<I>(vars: &Vars, p: usize, parts: I) -> Self
    where
        I: IntoIterator<Item = (Vec<usize>, Polynomial)>,
    {
        let mut form = DiffForm::zero(vars, p);
        for (idx, poly) in parts {
            assert_eq!(idx.len(), p, "index tuple length must equal the form degree");
            assert!(idx.windows(2).all(|w| w[0] < w[1]), "index tuple must strictly increase");
            assert!(idx.iter().all(|&i| i < vars.len()), "index out of range");
            check_same_vars(vars, poly.vars(), "from_components");
            form.insert_sorted(idx, poly);
        }
        form
    }

    /// Adds `poly · dx_idx` where `idx` is already strictly increasing.
    fn insert_sorted(&mut self, idx: Vec<usize>, poly: Polynomial) {
        if poly.is_zero() {
            return;
        }
        match self.components.entry(idx) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(poly);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += &poly;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    /// Adds `poly · dx_idx` for an arbitrary tuple, normalizing the order
    /// and sign; terms with repeated indices vanish.
    fn insert_signed(&mut self, mut idx: Vec<usize>, poly: Polynomial) {
        match sort_with_sign(&mut idx) {
            None => {}
            Some(false) => self.insert_sorted(idx, poly),
            Some(true) => self.insert_sorted(idx, -poly),
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    /// The form degree `p`.
    pub fn p(&self) -> usize {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// Stored (nonzero) components, keyed by increasing index tuple.
    pub fn components(&self) -> impl Iterator<Item = (&Vec<usize>, &Polynomial)> {
        self.components.iter()
    }

    /// The coefficient of `dx_idx` (zero when absent).
    pub fn component(&self, idx: &[usize]) -> Polynomial {
        self.components.get(idx).cloned().unwrap_or_else(|| Polynomial::zero(&self.vars))
    }

    /// For 0-forms: the underlying polynomial.
    pub fn as_function(&self) -> Option<Polynomial> {
        (self.p == 0).then(|| self.component(&[]))
    }

    /// For 1-forms: the full coefficient vector `(P₁, …, Pₙ)`.
    pub fn one_form_components(&self) -> Option<Vec<Polynomial>> {
        (self.p == 1).then(|| (0..self.vars.len()).map(|i| self.component(&[i])).collect())
    }

    /// Largest total degree among the polynomial coefficients (`−∞` if zero).
    pub fn deg(&self) -> Degree {
        self.components.values().map(Polynomial::deg).max().unwrap_or(Degree::MinusInfinity)
    }

    /// True when zero or all coefficients are homogeneous of one common degree.
    pub fn is_homogeneous(&self) -> bool {
        self.homogeneity().is_some() || self.is_zero()
    }

    /// `Some(m)` iff nonzero with every coefficient homogeneous of degree `m`.
    pub fn homogeneity(&self) -> Option<u32> {
        let mut iter = self.components.values();
        let first = iter.next()?.homogeneity()?;
        for poly in iter {
            if poly.homogeneity() != Some(first) {
                return None;
            }
        }
        Some(first)
    }

    /// The part of the form whose coefficients are homogeneous of degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> DiffForm {
        let mut out = DiffForm::zero(&self.vars, self.p);
        for (idx, poly) in &self.components {
            out.insert_sorted(idx.clone(), poly.homogeneous_part(d));
        }
        out
    }

    /// Splits into coefficient-homogeneous layers, keyed by degree.
    pub fn homogeneous_components(&self) -> BTreeMap<u32, DiffForm> {
        let mut parts: BTreeMap<u32, DiffForm> = BTreeMap::new();
        for (idx, poly) in &self.components {
            for (d, part) in poly.homogeneous_components() {
                parts
                    .entry(d)
                    .or_insert_with(|| DiffForm::zero(&self.vars, self.p))
                    .insert_sorted(idx.clone(), part);
            }
        }
        parts
    }

    /// Exterior derivative: `d(P dx_I) = Σᵢ ∂P/∂xᵢ dxᵢ ∧ dx_I`.
    /// On 0-forms this is the gradient 1-form; on `n`-forms the result is
    /// the zero `(n+1)`-form.
    pub fn d(&self) -> DiffForm {
        let mut out = DiffForm::zero(&self.vars, self.p + 1);
        for (idx, poly) in &self.components {
            for i in 0..self.vars.len() {
                let q = poly.partial(i);
                if q.is_zero() {
                    continue;
                }
                let mut tuple = Vec::with_capacity(idx.len() + 1);
                tuple.push(i);
                tuple.extend_from_slice(idx);
                out.insert_signed(tuple, q);
            }
        }
        out
    }

    /// Wedge product; anticommutative on odd degrees:
    /// `α ∧ β = (−1)^{pq} β ∧ α`.
    pub fn wedge(&self, other: &DiffForm) -> DiffForm {
        check_same_vars(&self.vars, &other.vars, "wedge");
        let mut out = DiffForm::zero(&self.vars, self.p + other.p);
        for (ia, pa) in &self.components {
            for (ib, pb) in &other.components {
                let mut tuple = Vec::with_capacity(ia.len() + ib.len());
                tuple.extend_from_slice(ia);
                tuple.extend_from_slice(ib);
                out.insert_signed(tuple, pa * pb);
            }
        }
        out
    }

    /// Scalar multiple.
    pub fn scale(&self, c: &GaussianRational) -> DiffForm {
        let mut out = DiffForm::zero(&self.vars, self.p);
        for (idx, poly) in &self.components {
            out.insert_sorted(idx.clone(), poly.scale(c));
        }
        out
    }

    /// Contraction `ι_R ω = Σᵢ xᵢ Pᵢ` with the radial field, defined here
    /// for 1-forms only.
    pub fn contract_radial(&self) -> Result<Polynomial, FormError> {
        if self.p != 1 {
            return Err(FormError::ExpectedOneForm { p: self.p });
        }
        let mut acc = Polynomial::zero(&self.vars);
        for (idx, poly) in &self.components {
            let xi = Polynomial::variable(&self.vars, idx[0]);
            acc += &(&xi * poly);
        }
        Ok(acc)
    }

    /// Numerical evaluation of every stored component at a complex point.
    /// Components absent from the map are zero.
    pub fn evaluate(&self, point: &[Complex64]) -> Result<BTreeMap<Vec<usize>, Complex64>, EvalError> {
        self.components
            .iter()
            .map(|(idx, poly)| Ok((idx.clone(), poly.evaluate(point)?)))
            .collect()
    }

    /// Numerical coefficient vector of a 1-form at a point: entry `i` is
    /// the value of the `dxᵢ` component.  Panics unless `p = 1`.
    pub fn evaluate_one_form(&self, point: &[Complex64]) -> Result<Vec<Complex64>, EvalError> {
        assert_eq!(self.p, 1, "evaluate_one_form on a {}-form", self.p);
        let mut out = vec![Complex64::new(0.0, 0.0); self.vars.len()];
        for (idx, poly) in &self.components {
            out[idx[0]] = poly.evaluate(point)?;
        }
        Ok(out)
    }
}

impl Polynomial {
    /// The exact differential `df = Σᵢ ∂f/∂xᵢ dxᵢ`.
    pub fn differential(&self) -> DiffForm {
        DiffForm::function(self.clone()).d()
    }
}

// ---- arithmetic operators ----

impl Add for &DiffForm {
    type Output = DiffForm;
    fn add(self, rhs: &DiffForm) -> DiffForm {
        check_same_vars(&self.vars, &rhs.vars, "+");
        assert_eq!(self.p, rhs.p, "adding forms of different degree");
        let mut out = self.clone();
        for (idx, poly) in &rhs.components {
            out.insert_sorted(idx.clone(), poly.clone());
        }
        out
    }
}

impl Sub for &DiffForm {
    type Output = DiffForm;
    fn sub(self, rhs: &DiffForm) -> DiffForm {
        self + &(-rhs)
    }
}

impl Neg for &DiffForm {
    type Output = DiffForm;
    fn neg(self) -> DiffForm {
        DiffForm {
            vars: self.vars.clone(),
            p: self.p,
            components: self.components.iter().map(|(i, q)| (i.clone(), -q)).collect(),
        }
    }
}

macro_rules! forward_form_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for DiffForm {
            type Output = DiffForm;
            fn $method(self, rhs: DiffForm) -> DiffForm {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&DiffForm> for DiffForm {
            type Output = DiffForm;
            fn $method(self, rhs: &DiffForm) -> DiffForm {
                (&self).$method(rhs)
            }
        }
    };
}

forward_form_binop!(Add, add);
forward_form_binop!(Sub, sub);

impl Neg for DiffForm {
    type Output = DiffForm;
    fn neg(self) -> DiffForm {
        -&self
    }
}

impl AddAssign<&DiffForm> for DiffForm {
    fn add_assign(&mut self, rhs: &DiffForm) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&DiffForm> for DiffForm {
    fn sub_assign(&mut self, rhs: &DiffForm) {
        *self = &*self - rhs;
    }
}

/// `g · ω` for a polynomial `g`.
impl Mul<&DiffForm> for &Polynomial {
    type Output = DiffForm;
    fn mul(self, rhs: &DiffForm) -> DiffForm {
        DiffForm::function(self.clone()).wedge(rhs)
    }
}

// ---- pullback ----

/// Pullback `σ*(α)` of a form along the polynomial map
/// `σ = (σ₁, …, σ_m) : (target space) → (source space of α)`:
/// substitute `σ` into the coefficients and replace each `dxₖ` by `dσₖ`.
/// Functorial: `(τ∘σ)* = σ* ∘ τ*`, and `σ*` commutes with `d` and `∧`.
pub fn pullback(sigma: &[Polynomial], alpha: &DiffForm) -> Result<DiffForm, FormError> {
    if sigma.len() != alpha.vars().len() {
        return Err(FormError::PullbackArity { expected: alpha.vars().len(), got: sigma.len() });
    }
    let target = sigma[0].vars().clone();
    for g in sigma {
        check_same_vars(&target, g.vars(), "pullback");
    }
    let dsigma: Vec<DiffForm> = sigma.iter().map(Polynomial::differential).collect();
    let mut out = DiffForm::zero(&target, alpha.p());
    for (idx, poly) in alpha.components() {
        let mut term = DiffForm::function(poly.substitute(sigma));
        for &k in idx {
            term = term.wedge(&dsigma[k]);
        }
        out += &term;
    }
    Ok(out)
}

// ---- logarithmic 1-forms ----

/// A closed logarithmic 1-form `θ = Σₖ λₖ · dfₖ/fₖ` with Gaussian-rational
/// residues `λₖ` and nonconstant polynomial poles `fₖ`.
///
/// The form itself is rational, not polynomial; it enters polynomial
/// computations through [`LogForm::clear_against`], which multiplies by a
/// designated common multiple `g` of the poles to produce the polynomial
/// 1-form `g·θ = Σₖ λₖ (g/fₖ) dfₖ`.
#[derive(Clone, PartialEq, Eq)]
pub struct LogForm {
    vars: Vars,
    terms: Vec<(GaussianRational, Polynomial)>,
}

impl LogForm {
    /// Builds `Σ λₖ dfₖ/fₖ`.  Panics if some `fₖ` is constant (including
    /// zero) — such a pole is not a pole at all.
    pub fn new(vars: &Vars, terms: Vec<(GaussianRational, Polynomial)>) -> Self {
        for (_, pole) in &terms {
            check_same_vars(vars, pole.vars(), "LogForm");
            assert!(
                pole.deg() > Degree::Finite(0),
                "logarithmic pole must be nonconstant, got {pole}"
            );
        }
        LogForm { vars: vars.clone(), terms }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    /// The residue/pole pairs `(λₖ, fₖ)`.
    pub fn terms(&self) -> &[(GaussianRational, Polynomial)] {
        &self.terms
    }

    /// The polynomial form `g·θ`, defined when every pole divides `g`.
    pub fn clear_against(&self, g: &Polynomial) -> Result<DiffForm, FormError> {
        check_same_vars(&self.vars, g.vars(), "clear_against");
        let mut out = DiffForm::zero(&self.vars, 1);
        for (lambda, pole) in &self.terms {
            let cofactor = pole.divides(g).ok_or_else(|| FormError::PoleDoesNotDivide {
                pole: pole.to_string(),
                multiple: g.to_string(),
            })?;
            out += &(&cofactor.scale(lambda) * &pole.differential());
        }
        Ok(out)
    }

    /// Numerical coefficient vector of `θ` at a point off the poles.
    pub fn evaluate_at(&self, point: &[Complex64]) -> Result<Vec<Complex64>, EvalError> {
        let n = self.vars.len();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (lambda, pole) in &self.terms {
            let denom = pole.evaluate(point)?;
            let scale = lambda.to_complex64() / denom;
            for (i, slot) in out.iter_mut().enumerate() {
                *slot += scale * pole.partial(i).evaluate(point)?;
            }
        }
        Ok(out)
    }
}

// ---- formatting ----

fn tuple_key(vars: &Vars, idx: &[usize]) -> String {
    if idx.is_empty() {
        return "1".to_string();
    }
    idx.iter().map(|&i| format!("d{}", vars.name(i))).collect::<Vec<_>>().join("^")
}

impl fmt::Display for DiffForm {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(out, "0");
        }
        let mut first = true;
        for (idx, poly) in &self.components {
            if !first {
                write!(out, " + ")?;
            }
            first = false;
            if idx.is_empty() {
                write!(out, "{poly}")?;
            } else if poly.term_count() == 1 && poly.leading_term().unwrap().1.is_one() {
                write!(out, "{poly}·{}", tuple_key(&self.vars, idx))?;
            } else {
                write!(out, "({poly})·{}", tuple_key(&self.vars, idx))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for DiffForm {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{self}")
    }
}

impl fmt::Display for LogForm {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(out, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(l, f)| format!("({l})·d({f})/({f})"))
            .collect();
        write!(out, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for LogForm {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{self}")
    }
}

// ---- serde wire formats ----
//
// DiffForm:
//   { "p": 2, "vars": ["x","y","z"],
//     "components": { "dx^dy": Polynomial, … } }
// with keys "d<name>" joined by "^" in increasing variable order ("1" for
// the empty tuple of a 0-form).  Inner polynomials repeat the outer
// context, which the reader checks.
//
// LogForm:
//   { "vars": [...], "terms": [ { "lambda": ["re","im"], "pole": Polynomial } ] }

impl Serialize for DiffForm {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("DiffForm", 3)?;
        s.serialize_field("p", &self.p)?;
        s.serialize_field("vars", self.vars.names())?;
        let comps: BTreeMap<String, &Polynomial> = self
            .components
            .iter()
            .map(|(idx, poly)| (tuple_key(&self.vars, idx), poly))
            .collect();
        s.serialize_field("components", &comps)?;
        s.end()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WireForm {
    p: usize,
    vars: Vec<String>,
    components: BTreeMap<String, Polynomial>,
}

fn parse_tuple_key(key: &str, vars: &Vars, p: usize) -> Result<Vec<usize>, String> {
    if key == "1" {
        return if p == 0 {
            Ok(Vec::new())
        } else {
            Err(format!("component key \"1\" in a {p}-form"))
        };
    }
    let mut idx = Vec::new();
    for part in key.split('^') {
        let name = part
            .strip_prefix('d')
            .ok_or_else(|| format!("component key part {part:?} does not start with 'd'"))?;
        let i = vars
            .index_of(name)
            .ok_or_else(|| format!("unknown variable {name:?} in component key {key:?}"))?;
        idx.push(i);
    }
    if idx.len() != p {
        return Err(format!("component key {key:?} has {} factors, form degree is {p}", idx.len()));
    }
    if !idx.windows(2).all(|w| w[0] < w[1]) {
        return Err(format!("component key {key:?} is not in increasing variable order"));
    }
    Ok(idx)
}

impl<'de> Deserialize<'de> for DiffForm {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = WireForm::deserialize(deserializer)?;
        let vars = Vars::try_new(&wire.vars).map_err(D::Error::custom)?;
        let mut form = DiffForm::zero(&vars, wire.p);
        for (key, poly) in wire.components {
            let idx = parse_tuple_key(&key, &vars, wire.p).map_err(D::Error::custom)?;
            if poly.vars() != &vars {
                return Err(D::Error::custom(format!(
                    "component {key:?} uses variables {:?}, form context is {:?}",
                    poly.vars().names(),
                    vars.names()
                )));
            }
            form.insert_sorted(idx, poly);
        }
        Ok(form)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireLogTerm {
    lambda: GaussianRational,
    pole: Polynomial,
}

impl Serialize for LogForm {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("LogForm", 2)?;
        s.serialize_field("vars", self.vars.names())?;
        let terms: Vec<WireLogTerm> = self
            .terms
            .iter()
            .map(|(l, f)| WireLogTerm { lambda: l.clone(), pole: f.clone() })
            .collect();
        s.serialize_field("terms", &terms)?;
        s.end()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WireLogForm {
    vars: Vec<String>,
    terms: Vec<WireLogTerm>,
}

impl<'de> Deserialize<'de> for LogForm {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = WireLogForm::deserialize(deserializer)?;
        let vars = Vars::try_new(&wire.vars).map_err(D::Error::custom)?;
        for t in &wire.terms {
            if t.pole.vars() != &vars {
                return Err(D::Error::custom("logarithmic pole uses a different variable context"));
            }
            if t.pole.deg() <= Degree::Finite(0) {
                return Err(D::Error::custom(format!(
                    "logarithmic pole must be nonconstant, got {}",
                    t.pole
                )));
            }
        }
        Ok(LogForm {
            vars,
            terms: wire.terms.into_iter().map(|t| (t.lambda, t.pole)).collect(),
        })
    }
}
