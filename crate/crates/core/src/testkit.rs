//! Deterministic random generators for property suites.
//!
//! Every generator draws from a caller-supplied [`ChaCha8Rng`], so a
//! fixed seed reproduces the same sequence of scalars, polynomials, and
//! forms on every platform.  The generators favour *small* data — few
//! terms, low degrees, single-digit numerators — because exact-arithmetic
//! properties fail on small counterexamples just as readily as on large
//! ones, and small cases keep thousand-case suites fast.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::form::DiffForm;
use crate::poly::{Monomial, Polynomial, Vars};
use crate::scalar::GaussianRational;

/// A reproducible generator for the given seed.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A Gaussian rational with numerators in `-max_abs..=max_abs` and
/// denominators in `1..=3`; zero is a possible outcome.
pub fn random_scalar(rng: &mut ChaCha8Rng, max_abs: i64) -> GaussianRational {
    let part = |rng: &mut ChaCha8Rng| {
        let numerator = rng.gen_range(-max_abs..=max_abs);
        let denominator = rng.gen_range(1..=3);
        GaussianRational::from_ratio(numerator, denominator)
    };
    let re = part(rng);
    let im = part(rng);
    &re + &(&im * &GaussianRational::i())
}

/// Like [`random_scalar`], but never zero.
pub fn random_nonzero_scalar(rng: &mut ChaCha8Rng, max_abs: i64) -> GaussianRational {
    loop {
        let c = random_scalar(rng, max_abs);
        if !c.is_zero() {
            return c;
        }
    }
}

/// A monomial with each exponent drawn uniformly from `0..=max_exp`.
pub fn random_monomial(rng: &mut ChaCha8Rng, vars: &Vars, max_exp: u32) -> Monomial {
    Monomial::new((0..vars.len()).map(|_| rng.gen_range(0..=max_exp)).collect())
}

/// A sparse polynomial with at most `terms` monomials of exponent at most
/// `max_exp` per variable; coincident draws merge, so the result may have
/// fewer terms and may even be zero.
pub fn random_polynomial(
    rng: &mut ChaCha8Rng,
    vars: &Vars,
    max_exp: u32,
    terms: usize,
) -> Polynomial {
    let mut sum = Polynomial::zero(vars);
    for _ in 0..terms {
        let m = random_monomial(rng, vars, max_exp);
        sum += &Polynomial::term(vars, m, random_scalar(rng, 5));
    }
    sum
}

/// A sparse polynomial in which every term has total degree ≤ `max_total`
/// (coincident draws merge; the result may be zero).
pub fn random_bounded_polynomial(
    rng: &mut ChaCha8Rng,
    vars: &Vars,
    max_total: u32,
    terms: usize,
) -> Polynomial {
    let mut sum = Polynomial::zero(vars);
    for _ in 0..terms {
        let total = rng.gen_range(0..=max_total);
        let mut exps = vec![0u32; vars.len()];
        for _ in 0..total {
            exps[rng.gen_range(0..vars.len())] += 1;
        }
        sum += &Polynomial::term(vars, Monomial::new(exps), random_scalar(rng, 5));
    }
    sum
}

/// A nonzero homogeneous polynomial of exact degree `degree` with at most
/// `terms` monomials.
pub fn random_homogeneous(
    rng: &mut ChaCha8Rng,
    vars: &Vars,
    degree: u32,
    terms: usize,
) -> Polynomial {
    loop {
        let mut sum = Polynomial::zero(vars);
        for _ in 0..terms.max(1) {
            // Distribute `degree` over the variables one unit at a time.
            let mut exps = vec![0u32; vars.len()];
            for _ in 0..degree {
                exps[rng.gen_range(0..vars.len())] += 1;
            }
            sum += &Polynomial::term(vars, Monomial::new(exps), random_nonzero_scalar(rng, 5));
        }
        if !sum.is_zero() {
            return sum;
        }
    }
}

/// A `p`-form whose components are drawn by [`random_polynomial`].
pub fn random_form(
    rng: &mut ChaCha8Rng,
    vars: &Vars,
    p: usize,
    max_exp: u32,
    terms: usize,
) -> DiffForm {
    let basis: Vec<usize> = (0..vars.len()).collect();
    DiffForm::from_components(
        vars,
        p,
        combinations(&basis, p)
            .into_iter()
            .map(|indices| (indices, random_polynomial(rng, vars, max_exp, terms))),
    )
}

/// A 1-form with random polynomial components.
pub fn random_one_form(
    rng: &mut ChaCha8Rng,
    vars: &Vars,
    max_exp: u32,
    terms: usize,
) -> DiffForm {
    random_form(rng, vars, 1, max_exp, terms)
}

/// A point with coordinates uniform in the complex square `[-1,1]²`.
pub fn random_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

/// All strictly increasing `p`-element index tuples from `pool`.
fn combinations(pool: &[usize], p: usize) -> Vec<Vec<usize>> {
    if p == 0 {
        return vec![Vec::new()];
    }
    if p > pool.len() {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (k, &first) in pool.iter().enumerate() {
        for mut rest in combinations(&pool[k + 1..], p - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}
