//! Standard-form linear programs and a deterministic dense simplex solver.
//!
//! A [`LinearProgram`] minimizes `c'x` subject to `A_ub x <= b_ub`,
//! `A_eq x = b_eq`, and elementwise bounds `l <= x <= u` (infinities
//! allowed). [`solve`] runs a two-phase bounded-variable simplex with
//! deterministic pivot selection, so identical programs produce bit-identical
//! solutions.

mod simplex;


use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write as _;

use crate::matrix::Mat;

pub use simplex::solve;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(&'static str),
    #[error("variable {index}: lower bound exceeds upper bound")]
    InvertedBounds { index: usize },
    #[error("non-finite coefficient in {0}")]
    NonFinite(&'static str),
}

/// `min c'x  s.t.  A_ub x <= b_ub,  A_eq x = b_eq,  l <= x <= u`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearProgram {
    c: Vec<f64>,
    a_ub: Mat,
    b_ub: Vec<f64>,
    a_eq: Mat,
    b_eq: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl LinearProgram {
    pub fn new(
        c: Vec<f64>,
        a_ub: Mat,
        b_ub: Vec<f64>,
        a_eq: Mat,
        b_eq: Vec<f64>,
        lower: Vec<f64>,
        upper: Vec<f64>,
    ) -> Result<Self, LpError> {
        let v = c.len();
        if a_ub.cols() != v && a_ub.rows() > 0 {
            return Err(LpError::DimensionMismatch("a_ub columns != objective length"));
        }
        if a_eq.cols() != v && a_eq.rows() > 0 {
            return Err(LpError::DimensionMismatch("a_eq columns != objective length"));
        }
        if a_ub.rows() != b_ub.len() {
            return Err(LpError::DimensionMismatch("a_ub rows != b_ub length"));
        }
        if a_eq.rows() != b_eq.len() {
            return Err(LpError::DimensionMismatch("a_eq rows != b_eq length"));
        }
        if lower.len() != v || upper.len() != v {
            return Err(LpError::DimensionMismatch("bounds length != objective length"));
        }
        if c.iter().any(|x| !x.is_finite()) {
            return Err(LpError::NonFinite("objective"));
        }
        if a_ub.data().iter().any(|x| !x.is_finite())
            || a_eq.data().iter().any(|x| !x.is_finite())
        {
            return Err(LpError::NonFinite("constraint matrix"));
        }
        if b_ub.iter().any(|x| !x.is_finite()) || b_eq.iter().any(|x| !x.is_finite()) {
            return Err(LpError::NonFinite("right-hand side"));
        }
        for (index, (&l, &u)) in lower.iter().zip(upper.iter()).enumerate() {
            if l.is_nan() || u.is_nan() || l > u {
                return Err(LpError::InvertedBounds { index });
            }
        }
        Ok(LinearProgram {
            c,
            a_ub,
            b_ub,
            a_eq,
            b_eq,
            lower,
            upper,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.c.len()
    }

    pub fn objective(&self) -> &[f64] {
        &self.c
    }

    pub fn a_ub(&self) -> &Mat {
        &self.a_ub
    }

    pub fn b_ub(&self) -> &[f64] {
        &self.b_ub
    }

    pub fn a_eq(&self) -> &Mat {
        &self.a_eq
    }

    pub fn b_eq(&self) -> &[f64] {
        &self.b_eq
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// Plain-text dump for external cross-checking: a dimensions header,
    /// the objective, dense constraint rows, then one bounds line per
    /// variable (`inf`/`-inf` for unbounded sides).
    pub fn dump(&self) -> String {
        fn fmt_val(out: &mut String, v: f64) {
            if v == f64::INFINITY {
                out.push_str("inf");
            } else if v == f64::NEG_INFINITY {
                out.push_str("-inf");
            } else {
                let _ = write!(out, "{v}");
            }
        }
        fn fmt_row(out: &mut String, row: &[f64]) {
            for (i, &v) in row.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                fmt_val(out, v);
            }
        }
        let mut out = String::new();
        let _ = writeln!(
            out,
            "linear-program v1\nvars {} ub {} eq {}",
            self.num_vars(),
            self.b_ub.len(),
            self.b_eq.len()
        );
        out.push_str("min ");
        fmt_row(&mut out, &self.c);
        out.push('\n');
        for i in 0..self.b_ub.len() {
            out.push_str("ub ");
            fmt_row(&mut out, self.a_ub.row(i));
            let _ = write!(out, " <= {}", self.b_ub[i]);
            out.push('\n');
        }
        for i in 0..self.b_eq.len() {
            out.push_str("eq ");
            fmt_row(&mut out, self.a_eq.row(i));
            let _ = write!(out, " = {}", self.b_eq[i]);
            out.push('\n');
        }
        for i in 0..self.num_vars() {
            out.push_str("bounds ");
            fmt_val(&mut out, self.lower[i]);
            out.push(' ');
            fmt_val(&mut out, self.upper[i]);
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub x: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
}

/// Solver tolerances and limits. Defaults match the crate-wide contracts;
/// all are overridable.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverOptions {
    /// Phase-1 feasibility threshold.
    pub feas_tol: f64,
    /// Reduced-cost optimality threshold.
    pub opt_tol: f64,
    /// Step sizes at or below this count as degenerate pivots.
    pub degeneracy_tol: f64,
    /// Pivot budget across both phases.
    pub max_iters: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            feas_tol: 1e-9,
            opt_tol: 1e-9,
            degeneracy_tol: 1e-12,
            max_iters: 50_000,
        }
    }
}

/// Worst-case residuals of a candidate point against a program.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResidualReport {
    pub max_eq_residual: f64,
    pub max_ub_violation: f64,
    pub max_bound_violation: f64,
}

impl ResidualReport {
    pub fn worst(&self) -> f64 {
        self.max_eq_residual
            .max(self.max_ub_violation)
            .max(self.max_bound_violation)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.worst() <= tol
    }
}

/// Compute the exact residuals of `x` against `lp`.
/// Panics if the dimension of `x` does not match the program.
pub fn check_solution(lp: &LinearProgram, x: &[f64]) -> ResidualReport {
    assert_eq!(x.len(), lp.num_vars(), "solution dimension mismatch");
    let dot = |row: &[f64]| -> f64 { row.iter().zip(x.iter()).map(|(a, b)| a * b).sum() };
    let mut max_eq = 0.0f64;
    for i in 0..lp.b_eq.len() {
        max_eq = max_eq.max((dot(lp.a_eq.row(i)) - lp.b_eq[i]).abs());
    }
    let mut max_ub = 0.0f64;
    for i in 0..lp.b_ub.len() {
        max_ub = max_ub.max(dot(lp.a_ub.row(i)) - lp.b_ub[i]);
    }
    let mut max_bound = 0.0f64;
    for ((&xj, &l), &u) in x.iter().zip(&lp.lower).zip(&lp.upper) {
        max_bound = max_bound.max(l - xj).max(xj - u);
    }
    ResidualReport {
        max_eq_residual: max_eq,
        max_ub_violation: max_ub.max(0.0),
        max_bound_violation: max_bound.max(0.0),
    }
}

/// Objective value of a candidate point.
pub fn objective_value(lp: &LinearProgram, x: &[f64]) -> f64 {
    lp.c.iter().zip(x.iter()).map(|(a, b)| a * b).sum()
}
