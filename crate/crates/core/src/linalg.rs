//! Exact dense linear algebra over Q(i).
//!
//! One entry point: [`solve`], Gauss–Jordan elimination with deterministic
//! pivoting (first nonzero entry in column order, rows scanned top to
//! bottom).  Everything is exact rational arithmetic — no pivot-size
//! heuristics are needed for stability, and identical inputs always
//! produce identical eliminations.
//!
//! The solver reports a *particular* solution with every free variable set
//! to zero, together with the rank and nullity of the coefficient matrix.
//! For inconsistent systems it returns the index of the first input row
//! (in the caller's original ordering) whose equation cannot be satisfied,
//! which callers turn into domain-specific certificates.

use thiserror::Error;

use crate::scalar::GaussianRational;

/// A dense row `coeffs · x = rhs`.
#[derive(Clone, Debug)]
pub struct Row {
    pub coeffs: Vec<GaussianRational>,
    pub rhs: GaussianRational,
}

/// Solution of a consistent system.
#[derive(Clone, Debug)]
pub struct Solution {
    /// One exact solution, free variables set to zero.
    pub particular: Vec<GaussianRational>,
    /// Rank of the coefficient matrix.
    pub rank: usize,
    /// Dimension of the kernel (`ncols − rank`).
    pub nullity: usize,
    /// Column indices of the pivot variables, ascending.
    pub pivot_cols: Vec<usize>,
}

/// Certificate of inconsistency: after elimination, the equation that came
/// from input row `row` reduced to `0 = residual` with `residual ≠ 0`.
#[derive(Debug, Error)]
#[error("inconsistent linear system: row {row} reduces to 0 = {residual}")]
pub struct Inconsistency {
    pub row: usize,
    pub residual: GaussianRational,
}

/// Solves `A·x = b` given as rows, over Q(i).
///
/// All rows must have `ncols` coefficients.  On success the solution is
/// exact; on failure the certificate names the first offending row in the
/// original order.
pub fn solve(rows: &[Row], ncols: usize) -> Result<Solution, Inconsistency> {
    for row in rows {
        assert_eq!(row.coeffs.len(), ncols, "row width must equal ncols");
    }
    // Work on (original index, row) pairs so certificates survive swaps.
    let mut work: Vec<(usize, Row)> = rows.iter().cloned().enumerate().collect();
    let mut pivot_cols = Vec::new();
    let mut rank = 0usize;

    for col in 0..ncols {
        // Deterministic pivot: first remaining row with a nonzero entry.
        let Some(found) = (rank..work.len()).find(|&r| !work[r].1.coeffs[col].is_zero()) else {
            continue;
        };
        work.swap(rank, found);

        // Normalize the pivot row.
        let inv = work[rank].1.coeffs[col]
            .inverse()
            .expect("pivot is nonzero by construction");
        for c in &mut work[rank].1.coeffs {
            *c *= &inv;
        }
        work[rank].1.rhs *= &inv;

        // Eliminate the column everywhere else (full reduction, so back
        // substitution is never needed).
        for r in 0..work.len() {
            if r == rank || work[r].1.coeffs[col].is_zero() {
                continue;
            }
            let factor = work[r].1.coeffs[col].clone();
            for c in 0..ncols {
                let delta = &factor * &work[rank].1.coeffs[c];
                work[r].1.coeffs[c] -= &delta;
            }
            let delta = &factor * &work[rank].1.rhs;
            work[r].1.rhs -= &delta;
        }

        pivot_cols.push(col);
        rank += 1;
    }

    // Any surviving nonzero right-hand side is an inconsistency; report the
    // one whose original row index is smallest.
    let mut offender: Option<(usize, GaussianRational)> = None;
    for (orig, row) in &work[rank..] {
        if !row.rhs.is_zero() && offender.as_ref().map_or(true, |(best, _)| orig < best) {
            offender = Some((*orig, row.rhs.clone()));
        }
    }
    if let Some((row, residual)) = offender {
        return Err(Inconsistency { row, residual });
    }

    let mut particular = vec![GaussianRational::zero(); ncols];
    for (k, &col) in pivot_cols.iter().enumerate() {
        particular[col] = work[k].1.rhs.clone();
    }
    Ok(Solution { particular, rank, nullity: ncols - rank, pivot_cols })
}
