//! Sparse multivariate polynomials over Q(i).
//!
//! A [`Polynomial`] lives in a fixed variable context ([`Vars`], an ordered
//! list of names) and stores only its nonzero terms, keyed by exponent
//! vector in **graded lexicographic** order: monomials compare first by
//! total degree, ties broken lexicographically on exponents with earlier
//! variables weighing more.  All arithmetic is exact; the zero polynomial
//! has degree `−∞` (see [`Degree`]).
//!
//! Mixing polynomials from different contexts is a programming error and
//! panics; fallible, user-facing validation belongs to the callers that
//! parse input.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_complex::Complex64;
use serde::de::Error as _;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::scalar::GaussianRational;

// ---- variable contexts ----

/// An immutable, ordered list of variable names shared by all objects of a
/// computation.  Cheap to clone; equality is by content.
#[derive(Clone, Eq)]
pub struct Vars(Arc<[String]>);

impl Vars {
    /// Builds a context from distinct, nonempty names.  Panics on invalid
    /// names; parsers should use [`Vars::try_new`] instead.
    pub fn new<S: AsRef<str>>(names: &[S]) -> Self {
        match Self::try_new(names) {
            Ok(vars) => vars,
            Err(msg) => panic!("invalid variable context: {msg}"),
        }
    }

    /// Fallible constructor: names must be nonempty, pairwise distinct, and
    /// free of the reserved characters `^` and whitespace (component keys
    /// of differential forms are built from them).
    pub fn try_new<S: AsRef<str>>(names: &[S]) -> Result<Self, String> {
        if names.is_empty() {
            return Err("a variable context needs at least one variable".to_string());
        }
        let owned: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        for (k, name) in owned.iter().enumerate() {
            if name.is_empty() {
                return Err("empty variable name".to_string());
            }
            if name.contains('^') || name.contains(char::is_whitespace) {
                return Err(format!("variable name {name:?} contains a reserved character"));
            }
            if owned[..k].contains(name) {
                return Err(format!("duplicate variable name {name:?} in context"));
            }
        }
        Ok(Vars(owned.into()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0[i]
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }
}

impl PartialEq for Vars {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl fmt::Debug for Vars {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "Vars{:?}", &self.0)
    }
}

/// Panic helper: asserts two objects live in the same context.
pub(crate) fn check_same_vars(a: &Vars, b: &Vars, what: &str) {
    assert!(a == b, "variable context mismatch in {what}: {a:?} vs {b:?}");
}

/// `Some(c)` iff `b = c·a` with `a ≠ 0` (same support, uniform coefficient
/// ratio).  Note `proportionality(a, 0)` is `None`; callers that accept a
/// zero multiple must special-case it.
pub(crate) fn proportionality(a: &Polynomial, b: &Polynomial) -> Option<GaussianRational> {
    if a.is_zero() || a.term_count() != b.term_count() {
        return None;
    }
    let mut ratio: Option<GaussianRational> = None;
    for ((ma, ca), (mb, cb)) in a.terms().zip(b.terms()) {
        if ma != mb {
            return None;
        }
        let q = cb / ca;
        match &ratio {
            None => ratio = Some(q),
            Some(r) if *r == q => {}
            Some(_) => return None,
        }
    }
    ratio
}

// ---- monomials ----

/// An exponent vector, ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn constant(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    /// The single variable `x_i` in an `nvars`-variable context.
    pub fn variable(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range for {nvars} variables");
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        Monomial(exps)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Componentwise divisibility: `self | other`.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.len() == other.0.len()
            && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Componentwise product.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        assert_eq!(self.0.len(), other.0.len(), "monomial arity mismatch");
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise quotient; requires `other | self`.
    pub fn div(&self, other: &Monomial) -> Monomial {
        assert!(other.divides(self), "monomial quotient does not exist");
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    fn fmt_with(&self, vars: &Vars, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(out, "*")?;
            }
            first = false;
            write!(out, "{}", vars.name(i))?;
            if e > 1 {
                write!(out, "^{e}")?;
            }
        }
        if first {
            write!(out, "1")?;
        }
        Ok(())
    }
}

impl Ord for Monomial {
    /// Graded lexicographic order: total degree first, then lexicographic
    /// on exponents (earlier variables weigh more).
    fn cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.0.len(), other.0.len(), "comparing monomials of different arity");
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

// ---- degrees ----

/// Total degree of a polynomial, with `deg 0 = −∞` so that the identities
/// `deg(fg) = deg f + deg g` and `deg(f+g) ≤ max(deg f, deg g)` hold without
/// exceptions.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Degree {
    MinusInfinity,
    Finite(u32),
}

impl Degree {
    pub fn finite(self) -> Option<u32> {
        match self {
            Degree::MinusInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }

    /// `−∞ + d = −∞`.
    pub fn add(self, other: Degree) -> Degree {
        match (self, other) {
            (Degree::Finite(a), Degree::Finite(b)) => Degree::Finite(a + b),
            _ => Degree::MinusInfinity,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::MinusInfinity => write!(out, "-inf"),
            Degree::Finite(d) => write!(out, "{d}"),
        }
    }
}

impl From<u32> for Degree {
    fn from(d: u32) -> Self {
        Degree::Finite(d)
    }
}

// ---- polynomials ----

/// A sparse polynomial with Gaussian-rational coefficients.
///
/// Invariant: no stored coefficient is zero, so structural equality is
/// mathematical equality within a context.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    vars: Vars,
    terms: BTreeMap<Monomial, GaussianRational>,
}

/// Dimension mismatch when evaluating at a point of the wrong arity.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("evaluation point has {got} coordinates, context has {expected} variables")]
pub struct EvalError {
    pub expected: usize,
    pub got: usize,
}

impl Polynomial {
    pub fn zero(vars: &Vars) -> Self {
        Polynomial { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &Vars, c: GaussianRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::constant(vars.len()), c);
        }
        Polynomial { vars: vars.clone(), terms }
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, GaussianRational::one())
    }

    /// The coordinate function `x_i`.
    pub fn variable(vars: &Vars, i: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::variable(vars.len(), i), GaussianRational::one());
        Polynomial { vars: vars.clone(), terms }
    }

    /// Sums an arbitrary term list (duplicates merge, zeros drop).
    pub fn from_terms<I>(vars: &Vars, iter: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, GaussianRational)>,
    {
        let mut terms: BTreeMap<Monomial, GaussianRational> = BTreeMap::new();
        for (m, c) in iter {
            assert_eq!(m.nvars(), vars.len(), "term arity does not match context");
            if c.is_zero() {
                continue;
            }
            match terms.entry(m) {
                std::collections::btree_map::Entry::Vacant(slot) => {
                    slot.insert(c);
                }
                std::collections::btree_map::Entry::Occupied(mut slot) => {
                    *slot.get_mut() += &c;
                    if slot.get().is_zero() {
                        slot.remove();
                    }
                }
            }
        }
        Polynomial { vars: vars.clone(), terms }
    }

    /// A single term `c · x^m`.
    pub fn term(vars: &Vars, m: Monomial, c: GaussianRational) -> Self {
        Self::from_terms(vars, [(m, c)])
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_constant)
    }

    /// Number of nonzero terms.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter()
    }

    /// The coefficient of `x^m` (zero when absent).
    pub fn coeff(&self, m: &Monomial) -> GaussianRational {
        self.terms.get(m).cloned().unwrap_or_else(GaussianRational::zero)
    }

    /// Total degree; `−∞` for the zero polynomial.
    pub fn deg(&self) -> Degree {
        self.terms
            .keys()
            .map(Monomial::total_degree)
            .max()
            .map_or(Degree::MinusInfinity, Degree::Finite)
    }

    /// The graded-lex leading term of a nonzero polynomial.
    pub fn leading_term(&self) -> Option<(&Monomial, &GaussianRational)> {
        self.terms.iter().next_back()
    }

    /// True when zero or concentrated in a single total degree.
    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(Monomial::total_degree);
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|e| e == d),
        }
    }

    /// `Some(d)` iff nonzero and homogeneous of degree `d`.
    pub fn homogeneity(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(Monomial::total_degree);
        let d = degrees.next()?;
        degrees.all(|e| e == d).then_some(d)
    }

    /// Splits into homogeneous parts, keyed by total degree; only nonzero
    /// parts appear, and their sum is the original polynomial.
    pub fn homogeneous_components(&self) -> BTreeMap<u32, Polynomial> {
        let mut parts: BTreeMap<u32, Polynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            parts
                .entry(m.total_degree())
                .or_insert_with(|| Polynomial::zero(&self.vars))
                .terms
                .insert(m.clone(), c.clone());
        }
        parts
    }

    /// The homogeneous part of total degree `d` (possibly zero).
    pub fn homogeneous_part(&self, d: u32) -> Polynomial {
        Polynomial {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.total_degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Scalar multiple `c · self`.
    pub fn scale(&self, c: &GaussianRational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.vars);
        }
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// Partial derivative with respect to the `i`-th variable.
    pub fn partial(&self, i: usize) -> Polynomial {
        assert!(i < self.vars.len(), "partial with respect to unknown variable");
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exps()[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.exps().to_vec();
            exps[i] = e - 1;
            let factor = GaussianRational::from_int(i64::from(e));
            terms.insert(Monomial::new(exps), c * &factor);
        }
        Polynomial { vars: self.vars.clone(), terms }
    }

    /// `self^k` (with `self^0 = 1`).
    pub fn pow(&self, k: u32) -> Polynomial {
        let mut acc = Polynomial::one(&self.vars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Exact division test: `Some(q)` with `other = self · q`, or `None`
    /// when `self` does not divide `other`.  Requires `self ≠ 0`.
    ///
    /// Standard long division by a single divisor in graded-lex order: each
    /// step cancels the current leading term; the first leading term not
    /// divisible by `lt(self)` would land irrevocably in the remainder, so
    /// the search stops there.
    pub fn divides(&self, other: &Polynomial) -> Option<Polynomial> {
        assert!(!self.is_zero(), "division by the zero polynomial");
        check_same_vars(&self.vars, &other.vars, "divides");
        let (lm, lc) = self.leading_term().expect("nonzero divisor");
        let mut quotient = Polynomial::zero(&self.vars);
        let mut rem = other.clone();
        while let Some((m, c)) = rem.leading_term() {
            if !lm.divides(m) {
                return None;
            }
            let qm = m.div(lm);
            let qc = c / lc;
            let step = Polynomial::term(&self.vars, qm, qc);
            rem = &rem - &(self * &step);
            quotient = &quotient + &step;
        }
        Some(quotient)
    }

    /// Substitutes `images[i]` for the `i`-th variable.  All images must
    /// live in one common context, which becomes the context of the result;
    /// `images.len()` must equal the arity of `self`.
    pub fn substitute(&self, images: &[Polynomial]) -> Polynomial {
        assert_eq!(images.len(), self.vars.len(), "substitution arity mismatch");
        assert!(!images.is_empty(), "substitution into an empty context");
        let target = images[0].vars().clone();
        for g in images {
            check_same_vars(&target, g.vars(), "substitute");
        }
        // Per-variable power tables, built once up to the largest exponent.
        let mut powers: Vec<Vec<Polynomial>> = images
            .iter()
            .map(|g| vec![Polynomial::one(&target), g.clone()])
            .collect();
        for (i, table) in powers.iter_mut().enumerate() {
            let need = self.terms.keys().map(|m| m.exps()[i]).max().unwrap_or(0) as usize;
            while table.len() <= need {
                let next = &table[table.len() - 1] * &table[1];
                table.push(next);
            }
        }
        let mut acc = Polynomial::zero(&target);
        for (m, c) in &self.terms {
            let mut prod = Polynomial::constant(&target, c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    prod = &prod * &powers[i][e as usize];
                }
            }
            acc = &acc + &prod;
        }
        acc
    }

    /// Numerical evaluation at a complex point, via per-variable power
    /// tables (each power computed once, terms then multiplied out).
    pub fn evaluate(&self, point: &[Complex64]) -> Result<Complex64, EvalError> {
        if point.len() != self.vars.len() {
            return Err(EvalError { expected: self.vars.len(), got: point.len() });
        }
        let mut powers: Vec<Vec<Complex64>> = point
            .iter()
            .map(|&z| vec![Complex64::new(1.0, 0.0), z])
            .collect();
        for (i, table) in powers.iter_mut().enumerate() {
            let need = self.terms.keys().map(|m| m.exps()[i]).max().unwrap_or(0) as usize;
            while table.len() <= need {
                let next = table[table.len() - 1] * table[1];
                table.push(next);
            }
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut prod = c.to_complex64();
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    prod *= powers[i][e as usize];
                }
            }
            acc += prod;
        }
        Ok(acc)
    }

    /// Coefficientwise complex conjugate.
    pub fn conj(&self) -> Polynomial {
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.conj())).collect(),
        }
    }
}

// ---- arithmetic operators ----

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        check_same_vars(&self.vars, &rhs.vars, "+");
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            match terms.entry(m.clone()) {
                std::collections::btree_map::Entry::Vacant(slot) => {
                    slot.insert(c.clone());
                }
                std::collections::btree_map::Entry::Occupied(mut slot) => {
                    *slot.get_mut() += c;
                    if slot.get().is_zero() {
                        slot.remove();
                    }
                }
            }
        }
        Polynomial { vars: self.vars.clone(), terms }
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        check_same_vars(&self.vars, &rhs.vars, "*");
        let mut terms: BTreeMap<Monomial, GaussianRational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                match terms.entry(m) {
                    std::collections::btree_map::Entry::Vacant(slot) => {
                        slot.insert(c);
                    }
                    std::collections::btree_map::Entry::Occupied(mut slot) => {
                        *slot.get_mut() += &c;
                        if slot.get().is_zero() {
                            slot.remove();
                        }
                    }
                }
            }
        }
        Polynomial { vars: self.vars.clone(), terms }
    }
}

macro_rules! forward_poly_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                (&self).$method(rhs)
            }
        }
    };
}

forward_poly_binop!(Add, add);
forward_poly_binop!(Sub, sub);
forward_poly_binop!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

impl AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Polynomial> for Polynomial {
    fn sub_assign(&mut self, rhs: &Polynomial) {
        *self = &*self - rhs;
    }
}

impl Mul<&GaussianRational> for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &GaussianRational) -> Polynomial {
        self.scale(rhs)
    }
}

// ---- formatting ----

impl fmt::Display for Polynomial {
    /// Terms in descending graded-lex order, e.g. `x^2*y - 3/2*x + (1+i)`.
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(out, "0");
        }
        use num_traits::{Signed, Zero};
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let (lead, coeff) = if k == 0 {
                ("", c.clone())
            } else if c.is_real() && c.re().is_negative() {
                (" - ", -c)
            } else {
                (" + ", c.clone())
            };
            write!(out, "{lead}")?;
            let needs_parens = !coeff.is_real() && !coeff.re().is_zero();
            if m.is_constant() {
                if needs_parens {
                    write!(out, "({coeff})")?;
                } else {
                    write!(out, "{coeff}")?;
                }
            } else {
                if !coeff.is_one() {
                    if needs_parens {
                        write!(out, "({coeff})*")?;
                    } else {
                        write!(out, "{coeff}*")?;
                    }
                }
                m.fmt_with(&self.vars, out)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{self}")
    }
}

// ---- serde wire format ----
//
// {
//   "vars": ["x", "y"],
//   "terms": [ { "coeff": ["1", "0"], "exps": [2, 1] }, … ]
// }
//
// The writer emits terms in ascending graded-lex order with no zero
// coefficients, so serialization is canonical; the reader accepts any term
// order but rejects duplicate exponent vectors and arity mismatches, and
// silently drops explicit zero coefficients.

#[derive(Serialize, Deserialize)]
struct WireTerm {
    coeff: GaussianRational,
    exps: Vec<u32>,
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Polynomial", 2)?;
        s.serialize_field("vars", self.vars.names())?;
        let terms: Vec<WireTerm> = self
            .terms
            .iter()
            .map(|(m, c)| WireTerm { coeff: c.clone(), exps: m.exps().to_vec() })
            .collect();
        s.serialize_field("terms", &terms)?;
        s.end()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WirePolynomial {
    vars: Vec<String>,
    terms: Vec<WireTerm>,
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = WirePolynomial::deserialize(deserializer)?;
        let vars = Vars::try_new(&wire.vars).map_err(D::Error::custom)?;
        let mut terms: BTreeMap<Monomial, GaussianRational> = BTreeMap::new();
        for t in wire.terms {
            if t.exps.len() != vars.len() {
                return Err(D::Error::custom(format!(
                    "term has {} exponents, context has {} variables",
                    t.exps.len(),
                    vars.len()
                )));
            }
            if t.coeff.is_zero() {
                continue;
            }
            let m = Monomial::new(t.exps);
            if terms.insert(m.clone(), t.coeff).is_some() {
                return Err(D::Error::custom(format!(
                    "duplicate exponent vector {:?} in polynomial",
                    m.exps()
                )));
            }
        }
        Ok(Polynomial { vars, terms })
    }
}
