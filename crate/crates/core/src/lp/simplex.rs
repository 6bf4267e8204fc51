//! Two-phase dense simplex over bounded variables.
//!
//! The working form shifts every variable to a `[0, u]` range (free
//! variables split into a positive/negative pair, upper-only variables
//! mirror), adds one slack per inequality row, and Phase 1 drives a set of
//! artificial columns to zero. Nonbasic variables rest at either bound;
//! pivots are classic tableau row reductions plus direct updates of the
//! basic-value vector, with bound flips when an entering variable hits its
//! own opposite bound first.
//!
//! Pivot selection is deterministic. Pricing keeps the best-scoring
//! improving columns and enters the one offering the largest actual
//! objective step, which avoids long degenerate cascades; the ratio test
//! takes the exact minimal blocking step with ties broken by pivot
//! magnitude, then variable index. A run of degenerate steps switches to
//! Bland's rule (smallest improving index, smallest-index ratio ties), and
//! past a hard per-phase budget Bland stays on so cycling cannot occur.
//! Reduced-cost rows are refreshed from the original costs periodically to
//! purge accumulated drift, and phase 1 ends as soon as the artificial sum
//! is within the feasibility tolerance.

use alloc::vec;
use alloc::vec::Vec;

use super::{LinearProgram, LpSolution, LpStatus, SolverOptions};

/// Column entries smaller than this are treated as zero in the ratio test.
const PIVOT_EPS: f64 = 1e-11;
/// Consecutive degenerate pivots before switching to Bland's rule.
const BLAND_TRIGGER: usize = 40;
/// Improving columns examined per iteration by the progress-aware pricing.
const PRICE_CANDIDATES: usize = 8;
/// Iterations between full reduced-cost recomputations.
const COST_REFRESH_EVERY: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq)]
enum VarState {
    Basic(usize),
    AtLower,
    AtUpper,
}

enum Recover {
    /// x = y[col] + lower
    Shift { col: usize, lower: f64 },
    /// x = upper - y[col]
    Mirror { col: usize, upper: f64 },
    /// x = y[pos] - y[neg]
    Split { pos: usize, neg: usize },
}

struct Tableau {
    m: usize,
    cols: usize,
    /// m x cols, row-major: the current B^{-1} [A | S | R].
    a: Vec<f64>,
    /// Reduced-cost rows for phase 1 and phase 2, updated by pivots and
    /// periodically recomputed from the original costs to purge drift.
    cost1: Vec<f64>,
    cost2: Vec<f64>,
    orig_cost1: Vec<f64>,
    orig_cost2: Vec<f64>,
    /// Upper bound of each column in shifted space (lower bounds are all 0).
    upper: Vec<f64>,
    state: Vec<VarState>,
    /// Column occupying each row's basic slot.
    basis: Vec<usize>,
    /// Current values of the basic variables.
    x_basic: Vec<f64>,
    /// First artificial column.
    art_start: usize,
    scratch: Vec<f64>,
}

enum PhaseEnd {
    Optimal,
    Unbounded,
    IterationLimit,
}

/// Chosen leaving row of a ratio test.
struct Leave {
    row: usize,
    hits_upper: bool,
    var: usize,
    pivot_mag: f64,
}

impl Tableau {
    #[inline]
    fn at(&self, r: usize, c: usize) -> f64 {
        self.a[r * self.cols + c]
    }

    fn pivot(&mut self, row: usize, col: usize, entering_value: f64, leaving_state: VarState) {
        let cols = self.cols;
        let leaving = self.basis[row];
        // normalize the pivot row
        let piv = self.a[row * cols + col];
        let inv = 1.0 / piv;
        for v in self.a[row * cols..(row + 1) * cols].iter_mut() {
            *v *= inv;
        }
        self.a[row * cols + col] = 1.0;
        self.scratch.clear();
        self.scratch.extend_from_slice(&self.a[row * cols..(row + 1) * cols]);
        for r in 0..self.m {
            if r == row {
                continue;
            }
            let f = self.a[r * cols + col];
            if f != 0.0 {
                let dst = &mut self.a[r * cols..(r + 1) * cols];
                for (d, s) in dst.iter_mut().zip(self.scratch.iter()) {
                    *d -= f * s;
                }
                dst[col] = 0.0;
            }
        }
        for cost in [&mut self.cost1, &mut self.cost2] {
            let f = cost[col];
            if f != 0.0 {
                for (d, s) in cost.iter_mut().zip(self.scratch.iter()) {
                    *d -= f * s;
                }
                cost[col] = 0.0;
            }
        }
        self.x_basic[row] = entering_value;
        self.basis[row] = col;
        self.state[col] = VarState::Basic(row);
        self.state[leaving] = leaving_state;
    }

    /// Exact minimal-ratio test for an entering column. Negative ratios
    /// (residual noise on basic values) clamp to zero. Ties break toward
    /// the largest pivot magnitude for stability, except in Bland mode
    /// where the smallest basic variable index is required for the
    /// anti-cycling guarantee.
    fn ratio_test(&self, e: usize, dir: f64, bland: bool) -> (f64, Option<Leave>) {
        let mut t_best = f64::INFINITY;
        let mut leave: Option<Leave> = None;
        for r in 0..self.m {
            let eff = dir * self.at(r, e);
            let (t, hits_upper) = if eff > PIVOT_EPS {
                ((self.x_basic[r] / eff).max(0.0), false)
            } else if eff < -PIVOT_EPS {
                let ub = self.upper[self.basis[r]];
                if ub.is_finite() {
                    (((ub - self.x_basic[r]) / (-eff)).max(0.0), true)
                } else {
                    continue;
                }
            } else {
                continue;
            };
            let var = self.basis[r];
            let pivot_mag = eff.abs();
            let replaces = if t < t_best {
                true
            } else if t > t_best {
                false
            } else if let Some(cur) = &leave {
                if bland {
                    var < cur.var
                } else {
                    pivot_mag > cur.pivot_mag || (pivot_mag == cur.pivot_mag && var < cur.var)
                }
            } else {
                true
            };
            if replaces {
                t_best = t;
                leave = Some(Leave {
                    row: r,
                    hits_upper,
                    var,
                    pivot_mag,
                });
            }
        }
        (t_best, leave)
    }

    #[allow(clippy::needless_range_loop)] // dense index math reads clearer
    fn run_phase(
        &mut self,
        phase1: bool,
        opts: &SolverOptions,
        iterations: &mut usize,
    ) -> PhaseEnd {
        let mut bland = false;
        let mut degenerate_streak = 0usize;
        let mut phase_iters = 0usize;
        // hard stop for pricing games: long phases fall back to Bland's
        // provably finite rule for the remainder
        let hard_trigger = 500 + 20 * self.m;
        let mut candidates: Vec<(usize, f64)> = Vec::with_capacity(PRICE_CANDIDATES);
        loop {
            if *iterations >= opts.max_iters {
                return PhaseEnd::IterationLimit;
            }
            phase_iters += 1;
            if phase_iters > hard_trigger {
                // permanent Bland tail guarantees termination
                bland = true;
            }
            if phase_iters.is_multiple_of(COST_REFRESH_EVERY) {
                self.refresh_costs();
            }
            if phase1 && self.phase1_objective() <= opts.feas_tol {
                // feasible enough; do not chase residual cost-row noise
                return PhaseEnd::Optimal;
            }
            // entering column: in Bland mode the smallest improving index;
            // otherwise keep the best-scoring candidates and prefer the one
            // that makes the most actual objective progress, which sidesteps
            // long runs of degenerate pivots
            let cost = if phase1 { &self.cost1 } else { &self.cost2 };
            candidates.clear();
            let mut entering: Option<usize> = None;
            for j in 0..self.cols {
                let score = match self.state[j] {
                    VarState::Basic(_) => continue,
                    VarState::AtLower => {
                        if self.upper[j] <= 0.0 {
                            continue; // fixed or retired column, cannot move
                        }
                        -cost[j]
                    }
                    VarState::AtUpper => cost[j],
                };
                if score > opts.opt_tol {
                    if bland {
                        entering = Some(j);
                        break;
                    }
                    // descending by score; ties keep the earlier (smaller) index
                    let pos = candidates
                        .iter()
                        .position(|&(_, s)| score > s)
                        .unwrap_or(candidates.len());
                    if pos < PRICE_CANDIDATES {
                        candidates.insert(pos, (j, score));
                        candidates.truncate(PRICE_CANDIDATES);
                    }
                }
            }
            if !bland {
                if candidates.is_empty() {
                    return PhaseEnd::Optimal;
                }
                let mut best: Option<(usize, f64)> = None; // (col, progress)
                for &(j, score) in &candidates {
                    let dir = if self.state[j] == VarState::AtLower { 1.0 } else { -1.0 };
                    let (t_limit, _) = self.ratio_test(j, dir, false);
                    let step = t_limit.min(self.upper[j]);
                    if step == f64::INFINITY {
                        // unbounded ray: take it immediately
                        best = Some((j, f64::INFINITY));
                        break;
                    }
                    let progress = step * score;
                    if best.is_none_or(|(_, p)| progress > p) {
                        best = Some((j, progress));
                    }
                }
                entering = best.map(|(j, _)| j);
            }
            let Some(e) = entering else {
                return PhaseEnd::Optimal;
            };
            let dir = if self.state[e] == VarState::AtLower { 1.0 } else { -1.0 };
            let (t_best, leave) = self.ratio_test(e, dir, bland);

            if self.upper[e] <= t_best {
                if self.upper[e] == f64::INFINITY {
                    return PhaseEnd::Unbounded;
                }
                // entering variable reaches its own opposite bound first:
                // bound flip, no basis change
                *iterations += 1;
                degenerate_streak = 0; // a positive-length move is progress
                let t = self.upper[e];
                for r in 0..self.m {
                    let d = self.at(r, e);
                    if d != 0.0 {
                        self.x_basic[r] -= dir * t * d;
                    }
                }
                self.state[e] = if dir > 0.0 {
                    VarState::AtUpper
                } else {
                    VarState::AtLower
                };
                continue;
            }
            let chosen = leave.expect("finite step implies a blocking row");
            *iterations += 1;
            if t_best <= opts.degeneracy_tol {
                degenerate_streak += 1;
                if degenerate_streak > BLAND_TRIGGER {
                    bland = true;
                }
            } else {
                degenerate_streak = 0;
                if phase_iters <= hard_trigger {
                    bland = false;
                }
            }
            for r in 0..self.m {
                if r == chosen.row {
                    continue;
                }
                let d = self.at(r, e);
                if d != 0.0 {
                    self.x_basic[r] -= dir * t_best * d;
                }
            }
            let entering_value = if dir > 0.0 { t_best } else { self.upper[e] - t_best };
            let leaving_state = if chosen.hits_upper {
                VarState::AtUpper
            } else {
                VarState::AtLower
            };
            self.pivot(chosen.row, e, entering_value, leaving_state);
        }
    }

    fn phase1_objective(&self) -> f64 {
        self.basis
            .iter()
            .zip(self.x_basic.iter())
            .filter(|(col, _)| **col >= self.art_start)
            .map(|(_, v)| v)
            .sum()
    }

    /// Recompute both reduced-cost rows from the original costs and the
    /// current tableau, purging accumulated pivot drift.
    fn refresh_costs(&mut self) {
        for (cost, orig) in [
            (&mut self.cost1, &self.orig_cost1),
            (&mut self.cost2, &self.orig_cost2),
        ] {
            cost.copy_from_slice(orig);
            for r in 0..self.m {
                let weight = orig[self.basis[r]];
                if weight != 0.0 {
                    let row = &self.a[r * self.cols..(r + 1) * self.cols];
                    for (c, v) in cost.iter_mut().zip(row.iter()) {
                        *c -= weight * v;
                    }
                }
            }
            for r in 0..self.m {
                cost[self.basis[r]] = 0.0;
            }
        }
    }

    /// Remove retired nonbasic artificial columns so phase 2 pivots do not
    /// keep paying for them. Basic artificials (redundant rows) stay, pinned
    /// at zero by their upper bound.
    fn compact_artificials(&mut self) {
        let keep: Vec<usize> = (0..self.cols)
            .filter(|&c| c < self.art_start || matches!(self.state[c], VarState::Basic(_)))
            .collect();
        if keep.len() == self.cols {
            return;
        }
        let mut new_index = vec![usize::MAX; self.cols];
        for (new, &old) in keep.iter().enumerate() {
            new_index[old] = new;
        }
        let new_cols = keep.len();
        let mut a = vec![0.0; self.m * new_cols];
        for r in 0..self.m {
            for (new, &old) in keep.iter().enumerate() {
                a[r * new_cols + new] = self.a[r * self.cols + old];
            }
        }
        self.a = a;
        self.cost1 = keep.iter().map(|&old| self.cost1[old]).collect();
        self.cost2 = keep.iter().map(|&old| self.cost2[old]).collect();
        self.orig_cost1 = keep.iter().map(|&old| self.orig_cost1[old]).collect();
        self.orig_cost2 = keep.iter().map(|&old| self.orig_cost2[old]).collect();
        self.upper = keep.iter().map(|&old| self.upper[old]).collect();
        self.state = keep.iter().map(|&old| self.state[old]).collect();
        for b in self.basis.iter_mut() {
            *b = new_index[*b];
            debug_assert!(*b != usize::MAX);
        }
        self.cols = new_cols;
        self.scratch = Vec::with_capacity(new_cols);
    }
}

/// Solve a linear program. Never panics on well-formed input; reports
/// `Infeasible`, `Unbounded`, or `IterationLimit` through the status field.
#[allow(clippy::needless_range_loop)] // dense index math reads clearer
pub fn solve(lp: &LinearProgram, opts: &SolverOptions) -> LpSolution {
    let n_orig = lp.num_vars();
    let m_ub = lp.b_ub().len();
    let m_eq = lp.b_eq().len();
    let m = m_ub + m_eq;

    // shifted structural columns
    let mut recover = Vec::with_capacity(n_orig);
    let mut col_of_orig: Vec<(usize, f64)> = Vec::new(); // (orig var, factor)
    let mut cost2 = Vec::new();
    let mut upper = Vec::new();
    for j in 0..n_orig {
        let (l, u) = (lp.lower()[j], lp.upper()[j]);
        let c = lp.objective()[j];
        if l.is_finite() {
            recover.push(Recover::Shift {
                col: col_of_orig.len(),
                lower: l,
            });
            col_of_orig.push((j, 1.0));
            cost2.push(c);
            upper.push(u - l);
        } else if u.is_finite() {
            recover.push(Recover::Mirror {
                col: col_of_orig.len(),
                upper: u,
            });
            col_of_orig.push((j, -1.0));
            cost2.push(-c);
            upper.push(f64::INFINITY);
        } else {
            recover.push(Recover::Split {
                pos: col_of_orig.len(),
                neg: col_of_orig.len() + 1,
            });
            col_of_orig.push((j, 1.0));
            col_of_orig.push((j, -1.0));
            cost2.push(c);
            cost2.push(-c);
            upper.push(f64::INFINITY);
            upper.push(f64::INFINITY);
        }
    }
    let n_struct = col_of_orig.len();

    // rhs adjusted for the variable shifts
    let mut rhs = Vec::with_capacity(m);
    rhs.extend_from_slice(lp.b_ub());
    rhs.extend_from_slice(lp.b_eq());
    let orig_entry = |r: usize, j: usize| -> f64 {
        if r < m_ub {
            lp.a_ub()[(r, j)]
        } else {
            lp.a_eq()[(r - m_ub, j)]
        }
    };
    for j in 0..n_orig {
        let (l, u) = (lp.lower()[j], lp.upper()[j]);
        let shift = if l.is_finite() {
            l
        } else if u.is_finite() {
            u
        } else {
            continue;
        };
        if shift != 0.0 {
            for (r, rhs_r) in rhs.iter_mut().enumerate() {
                *rhs_r -= orig_entry(r, j) * shift;
            }
        }
    }

    // count artificials: flipped ub rows and every eq row
    let mut flipped = vec![false; m];
    for (r, rhs_r) in rhs.iter_mut().enumerate() {
        if *rhs_r < 0.0 {
            flipped[r] = true;
            *rhs_r = -*rhs_r;
        }
    }
    let art_rows: Vec<usize> = (0..m).filter(|&r| r >= m_ub || flipped[r]).collect();
    let n_slack = m_ub;
    let art_start = n_struct + n_slack;
    let cols = art_start + art_rows.len();

    let mut tab = Tableau {
        m,
        cols,
        a: vec![0.0; m * cols],
        cost1: vec![0.0; cols],
        cost2: vec![0.0; cols],
        orig_cost1: vec![0.0; cols],
        orig_cost2: vec![0.0; cols],
        upper: vec![f64::INFINITY; cols],
        state: vec![VarState::AtLower; cols],
        basis: vec![0; m],
        x_basic: vec![0.0; m],
        art_start,
        scratch: Vec::with_capacity(cols),
    };
    tab.upper[..n_struct].copy_from_slice(&upper);
    tab.cost2[..n_struct].copy_from_slice(&cost2);
    tab.orig_cost2[..n_struct].copy_from_slice(&cost2);

    for r in 0..m {
        let sign = if flipped[r] { -1.0 } else { 1.0 };
        for (k, &(j, factor)) in col_of_orig.iter().enumerate() {
            tab.a[r * cols + k] = sign * factor * orig_entry(r, j);
        }
        if r < m_ub {
            tab.a[r * cols + n_struct + r] = sign;
        }
    }
    for (k, &r) in art_rows.iter().enumerate() {
        tab.a[r * cols + art_start + k] = 1.0;
        tab.cost1[art_start + k] = 1.0;
        tab.orig_cost1[art_start + k] = 1.0;
    }

    // starting basis: slack for clean ub rows, artificial elsewhere
    let mut art_iter = 0usize;
    for r in 0..m {
        let basic_col = if r < m_ub && !flipped[r] {
            n_struct + r
        } else {
            let col = art_start + art_iter;
            art_iter += 1;
            col
        };
        tab.basis[r] = basic_col;
        tab.state[basic_col] = VarState::Basic(r);
        tab.x_basic[r] = rhs[r];
    }
    // reduce the phase-1 cost row against the artificial basis
    for r in 0..m {
        if tab.basis[r] >= art_start {
            for j in 0..cols {
                tab.cost1[j] -= tab.a[r * cols + j];
            }
        }
    }

    let mut iterations = 0usize;
    let finish = |status: LpStatus, tab: &Tableau, iterations: usize| -> LpSolution {
        let x = recover_solution(&recover, tab);
        let objective = super::objective_value(lp, &x);
        LpSolution {
            status,
            x,
            objective,
            iterations,
        }
    };

    match tab.run_phase(true, opts, &mut iterations) {
        PhaseEnd::IterationLimit => return finish(LpStatus::IterationLimit, &tab, iterations),
        // phase-1 objective is bounded below by zero, so an unbounded ray
        // can only be numerical noise; treat it as infeasible
        PhaseEnd::Unbounded => return finish(LpStatus::Infeasible, &tab, iterations),
        PhaseEnd::Optimal => {}
    }
    if tab.phase1_objective() > opts.feas_tol {
        return finish(LpStatus::Infeasible, &tab, iterations);
    }

    // retire artificials: cap them at zero and pivot basic ones out where a
    // structural column is available; rows without one are redundant and the
    // artificial stays pinned at zero
    for col in art_start..cols {
        tab.upper[col] = 0.0;
    }
    for row in 0..m {
        if tab.basis[row] < art_start {
            continue;
        }
        let mut replacement = None;
        for j in 0..art_start {
            if matches!(tab.state[j], VarState::Basic(_)) {
                continue;
            }
            if tab.at(row, j).abs() > 1e-8 {
                replacement = Some(j);
                break;
            }
        }
        if let Some(j) = replacement {
            let entering_value = match tab.state[j] {
                VarState::AtUpper => tab.upper[j],
                _ => 0.0,
            };
            tab.pivot(row, j, entering_value, VarState::AtLower);
        }
    }
    tab.compact_artificials();

    match tab.run_phase(false, opts, &mut iterations) {
        PhaseEnd::IterationLimit => finish(LpStatus::IterationLimit, &tab, iterations),
        PhaseEnd::Unbounded => finish(LpStatus::Unbounded, &tab, iterations),
        PhaseEnd::Optimal => finish(LpStatus::Optimal, &tab, iterations),
    }
}

fn recover_solution(recover: &[Recover], tab: &Tableau) -> Vec<f64> {
    let col_value = |col: usize| -> f64 {
        match tab.state[col] {
            VarState::Basic(row) => tab.x_basic[row],
            VarState::AtLower => 0.0,
            VarState::AtUpper => tab.upper[col],
        }
    };
    recover
        .iter()
        .map(|r| match *r {
            Recover::Shift { col, lower } => col_value(col) + lower,
            Recover::Mirror { col, upper } => upper - col_value(col),
            Recover::Split { pos, neg } => col_value(pos) - col_value(neg),
        })
        .collect()
}
