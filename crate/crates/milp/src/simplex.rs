//! Dense bounded-variable simplex.
//!
//! Every row `a·x (sense) b` is rewritten as `a·x - s = 0` where the row
//! variable `s` carries the bounds implied by the sense and right-hand side.
//! The row variables form the initial basis, so the tableau `B⁻¹[A | -I]`
//! starts out as `[-A | I]` up to sign and no right-hand-side column is
//! needed: basic values follow from the nonbasic ones.
//!
//! Primal phase 1 minimises the sum of bound violations of the basic
//! variables, phase 2 the real objective. The dual simplex is used to
//! re-optimise after bound changes (branching). Dantzig pricing falls back to
//! Bland's rule after a run of degenerate pivots, which rules out cycling.

use crate::model::{LinearModel, RowSense};

const PIVOT_TOL: f64 = 1e-9;
const PRIMAL_TOL: f64 = 1e-9;
const DUAL_TOL: f64 = 1e-9;
const DEGENERATE_RUN: usize = 50;
/// Pivots after which a basis restore rebuilds the tableau from scratch.
const REFRESH_AFTER: usize = 4000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum ColStatus {
    Basic,
    Lower,
    Upper,
    Free,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum LpOutcome {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

/// Basis snapshot used to warm-start a later solve.
#[derive(Clone, Debug)]
pub(crate) struct Basis {
    basic: Vec<u32>,
    status: Vec<ColStatus>,
}

#[derive(Clone)]
pub(crate) struct Simplex {
    rows: usize,
    structurals: usize,
    cols: usize,
    /// Original sparse rows of A, kept for rebuilding the tableau.
    a_rows: Vec<Vec<(usize, f64)>>,
    cost: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    /// Row-major `(rows + 1) x cols`; the last row holds reduced costs.
    tab: Vec<f64>,
    basis: Vec<usize>,
    status: Vec<ColStatus>,
    x: Vec<f64>,
    scratch: Vec<f64>,
    pivots_since_reset: usize,
    pub(crate) iterations: u64,
}

impl Simplex {
    /// Builds the solver for `model`, always minimising: a maximisation
    /// objective is negated.
    pub(crate) fn new(model: &LinearModel) -> Self {
        let rows = model.num_constraints();
        let structurals = model.num_vars();
        let cols = structurals + rows;
        let sign = match model.sense {
            crate::model::ObjSense::Minimize => 1.0,
            crate::model::ObjSense::Maximize => -1.0,
        };
        let mut cost = vec![0.0; cols];
        for (j, c) in model.objective.iter().enumerate() {
            cost[j] = sign * c;
        }
        let mut lower = Vec::with_capacity(cols);
        let mut upper = Vec::with_capacity(cols);
        for v in &model.variables {
            lower.push(v.lower);
            upper.push(v.upper);
        }
        for c in &model.constraints {
            let (lo, hi) = match c.sense {
                RowSense::Le => (f64::NEG_INFINITY, c.rhs),
                RowSense::Ge => (c.rhs, f64::INFINITY),
                RowSense::Eq => (c.rhs, c.rhs),
            };
            lower.push(lo);
            upper.push(hi);
        }
        let a_rows = model.constraints.iter().map(|c| c.terms.iter().map(|&(v, a)| (v.0, a)).collect()).collect();
        let mut s = Simplex {
            rows,
            structurals,
            cols,
            a_rows,
            cost,
            lower,
            upper,
            tab: vec![0.0; (rows + 1) * cols],
            basis: vec![0; rows],
            status: vec![ColStatus::Lower; cols],
            x: vec![0.0; cols],
            scratch: vec![0.0; cols],
            pivots_since_reset: 0,
            iterations: 0,
        };
        s.reset();
        s
    }

    /// Rebuilds the tableau for the all-row-variable basis.
    pub(crate) fn reset(&mut self) {
        let (m, nc) = (self.rows, self.cols);
        self.tab.iter_mut().for_each(|v| *v = 0.0);
        for (r, row) in self.a_rows.iter().enumerate() {
            // Row r: a·x - s_r = 0 with s_r basic, i.e. s_r = a·x.
            // Tableau row for basic s_r is B⁻¹ times [a | -e_r] with B = -1: [-a | e_r].
            for &(j, a) in row {
                self.tab[r * nc + j] = -a;
            }
            self.tab[r * nc + self.structurals + r] = 1.0;
            self.basis[r] = self.structurals + r;
        }
        self.tab[m * nc..(m + 1) * nc].copy_from_slice(&self.cost);
        for j in 0..self.structurals {
            self.place_nonbasic(j);
        }
        for r in 0..m {
            self.status[self.structurals + r] = ColStatus::Basic;
        }
        self.pivots_since_reset = 0;
        self.recompute_basics();
    }

    fn place_nonbasic(&mut self, j: usize) {
        if self.lower[j].is_finite() {
            self.status[j] = ColStatus::Lower;
            self.x[j] = self.lower[j];
        } else if self.upper[j].is_finite() {
            self.status[j] = ColStatus::Upper;
            self.x[j] = self.upper[j];
        } else {
            self.status[j] = ColStatus::Free;
            self.x[j] = 0.0;
        }
    }

    /// Changes the bounds of a structural column. Nonbasic columns are moved
    /// onto the new bound; basic values are refreshed on the next solve.
    pub(crate) fn set_bounds(&mut self, j: usize, lo: f64, hi: f64) {
        self.lower[j] = lo;
        self.upper[j] = hi;
        match self.status[j] {
            ColStatus::Basic => {}
            ColStatus::Upper if hi.is_finite() => self.x[j] = hi,
            ColStatus::Lower if lo.is_finite() => self.x[j] = lo,
            _ => self.place_nonbasic(j),
        }
    }

    pub(crate) fn values(&self) -> &[f64] {
        &self.x[..self.structurals]
    }

    /// Objective in minimisation form.
    pub(crate) fn objective(&self) -> f64 {
        self.cost[..self.structurals].iter().zip(&self.x).map(|(c, x)| c * x).sum()
    }

    pub(crate) fn snapshot(&self) -> Basis {
        Basis { basic: self.basis.iter().map(|&b| b as u32).collect(), status: self.status.clone() }
    }

    /// Moves the tableau onto the basis in `snap` by pivoting from the current
    /// one. Falls back to a fresh tableau when a pivot is numerically unsafe.
    pub(crate) fn restore(&mut self, snap: &Basis) {
        if self.pivots_since_reset > REFRESH_AFTER {
            self.reset();
        }
        if !self.pivot_to(snap) {
            self.reset();
            if !self.pivot_to(snap) {
                log::debug!("basis restore failed; continuing from the row-variable basis");
                self.reset();
                return;
            }
        }
        for j in 0..self.cols {
            if self.status[j] == ColStatus::Basic {
                continue;
            }
            match snap.status[j] {
                ColStatus::Upper if self.upper[j].is_finite() => {
                    self.status[j] = ColStatus::Upper;
                    self.x[j] = self.upper[j];
                }
                ColStatus::Lower if self.lower[j].is_finite() => {
                    self.status[j] = ColStatus::Lower;
                    self.x[j] = self.lower[j];
                }
                _ => self.place_nonbasic(j),
            }
        }
        self.recompute_basics();
    }

    fn pivot_to(&mut self, snap: &Basis) -> bool {
        let nc = self.cols;
        let mut target = vec![false; nc];
        for &b in &snap.basic {
            target[b as usize] = true;
        }
        let entering: Vec<usize> = (0..nc).filter(|&j| target[j] && self.status[j] != ColStatus::Basic).collect();
        for j in entering {
            let mut best_row = usize::MAX;
            let mut best = 1e-7;
            for r in 0..self.rows {
                if target[self.basis[r]] {
                    continue;
                }
                let a = self.tab[r * nc + j].abs();
                if a > best {
                    best = a;
                    best_row = r;
                }
            }
            if best_row == usize::MAX {
                return false;
            }
            let leaving = self.basis[best_row];
            self.pivot(best_row, j);
            self.status[leaving] = ColStatus::Lower;
            self.place_nonbasic(leaving);
        }
        true
    }

    fn recompute_basics(&mut self) {
        let nc = self.cols;
        for r in 0..self.rows {
            let row = &self.tab[r * nc..(r + 1) * nc];
            let mut v = 0.0;
            for j in 0..nc {
                let xj = self.x[j];
                if xj != 0.0 && self.status[j] != ColStatus::Basic {
                    v -= row[j] * xj;
                }
            }
            self.x[self.basis[r]] = v;
        }
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let nc = self.cols;
        let piv = self.tab[r * nc + j];
        {
            let row = &mut self.tab[r * nc..(r + 1) * nc];
            let inv = 1.0 / piv;
            for v in row.iter_mut() {
                *v *= inv;
            }
            row[j] = 1.0;
            self.scratch.copy_from_slice(row);
        }
        let prow = &self.scratch;
        for i in 0..=self.rows {
            if i == r {
                continue;
            }
            let row = &mut self.tab[i * nc..(i + 1) * nc];
            let f = row[j];
            if f != 0.0 {
                for (v, p) in row.iter_mut().zip(prow.iter()) {
                    *v -= f * p;
                }
                row[j] = 0.0;
            }
        }
        self.status[j] = ColStatus::Basic;
        self.basis[r] = j;
        self.pivots_since_reset += 1;
    }

    fn tol(bound: f64) -> f64 {
        PRIMAL_TOL * bound.abs().max(1.0)
    }

    fn infeasibility(&self, b: usize) -> f64 {
        let v = self.x[b];
        if v < self.lower[b] - Self::tol(self.lower[b]) {
            self.lower[b] - v
        } else if v > self.upper[b] + Self::tol(self.upper[b]) {
            v - self.upper[b]
        } else {
            0.0
        }
    }

    fn primal_feasible(&self) -> bool {
        self.basis.iter().all(|&b| self.infeasibility(b) == 0.0)
    }

    fn dual_feasible(&self) -> bool {
        let d = &self.tab[self.rows * self.cols..];
        (0..self.cols).all(|j| match self.status[j] {
            ColStatus::Basic => true,
            _ if self.lower[j] == self.upper[j] => true,
            ColStatus::Lower => d[j] >= -DUAL_TOL,
            ColStatus::Upper => d[j] <= DUAL_TOL,
            ColStatus::Free => d[j].abs() <= DUAL_TOL,
        })
    }

    fn iteration_budget(&self) -> u64 {
        (50 * (self.rows + self.cols) + 1000) as u64
    }

    /// Solves from the current basis and bounds.
    pub(crate) fn solve(&mut self) -> LpOutcome {
        self.recompute_basics();
        let mut out = if self.primal_feasible() {
            self.primal(false)
        } else if self.dual_feasible() {
            match self.dual() {
                LpOutcome::Optimal if !self.dual_feasible() => self.primal(false),
                other => other,
            }
        } else {
            match self.primal(true) {
                LpOutcome::Optimal => self.primal(false),
                other => other,
            }
        };
        if out == LpOutcome::IterationLimit {
            // One retry on a fresh tableau clears accumulated round-off.
            log::debug!("simplex iteration limit; retrying from a fresh tableau");
            self.reset();
            out = match self.primal(true) {
                LpOutcome::Optimal => self.primal(false),
                other => other,
            };
        }
        if out == LpOutcome::Optimal {
            self.recompute_basics();
        }
        out
    }

    /// Primal simplex. In phase 1 the objective is the total bound violation
    /// of the basic variables and `Optimal` means a feasible basis was found.
    fn primal(&mut self, phase_one: bool) -> LpOutcome {
        let (m, nc) = (self.rows, self.cols);
        let budget = self.iteration_budget();
        let mut degenerate = 0usize;
        let mut d1 = vec![0.0; if phase_one { nc } else { 0 }];
        for _ in 0..budget {
            self.iterations += 1;
            let bland = degenerate >= DEGENERATE_RUN;
            if phase_one {
                d1.iter_mut().for_each(|v| *v = 0.0);
                let mut any = false;
                for r in 0..m {
                    let b = self.basis[r];
                    let v = self.x[b];
                    let w = if v < self.lower[b] - Self::tol(self.lower[b]) {
                        -1.0
                    } else if v > self.upper[b] + Self::tol(self.upper[b]) {
                        1.0
                    } else {
                        continue;
                    };
                    any = true;
                    let row = &self.tab[r * nc..(r + 1) * nc];
                    for (dj, a) in d1.iter_mut().zip(row) {
                        *dj -= w * a;
                    }
                }
                if !any {
                    return LpOutcome::Optimal;
                }
            }
            let d: &[f64] = if phase_one { &d1 } else { &self.tab[m * nc..] };

            let mut enter = None;
            let mut best = 0.0;
            for j in 0..nc {
                if self.lower[j] == self.upper[j] {
                    continue;
                }
                let dir = match self.status[j] {
                    ColStatus::Basic => continue,
                    ColStatus::Lower if d[j] < -DUAL_TOL => 1.0,
                    ColStatus::Upper if d[j] > DUAL_TOL => -1.0,
                    ColStatus::Free if d[j].abs() > DUAL_TOL => -d[j].signum(),
                    _ => continue,
                };
                if bland {
                    enter = Some((j, dir));
                    break;
                }
                if d[j].abs() > best {
                    best = d[j].abs();
                    enter = Some((j, dir));
                }
            }
            let Some((j, dir)) = enter else {
                return if phase_one { LpOutcome::Infeasible } else { LpOutcome::Optimal };
            };

            // Ratio test.
            let span = self.upper[j] - self.lower[j];
            let mut step = if span.is_finite() { span } else { f64::INFINITY };
            let mut leave: Option<(usize, ColStatus, f64)> = None;
            let mut leave_alpha = 0.0;
            for r in 0..m {
                let alpha = self.tab[r * nc + j] * dir;
                if alpha.abs() < PIVOT_TOL {
                    continue;
                }
                let b = self.basis[r];
                let (v, lo, hi) = (self.x[b], self.lower[b], self.upper[b]);
                let (limit, st, at) = if alpha > 0.0 {
                    if v > hi + Self::tol(hi) {
                        ((v - hi) / alpha, ColStatus::Upper, hi)
                    } else if v < lo - Self::tol(lo) || !lo.is_finite() {
                        continue;
                    } else {
                        ((v - lo).max(0.0) / alpha, ColStatus::Lower, lo)
                    }
                } else if v < lo - Self::tol(lo) {
                    ((lo - v) / -alpha, ColStatus::Lower, lo)
                } else if v > hi + Self::tol(hi) || !hi.is_finite() {
                    continue;
                } else {
                    ((hi - v).max(0.0) / -alpha, ColStatus::Upper, hi)
                };
                let better = match leave {
                    None => limit < step,
                    Some((lr, _, _)) => {
                        if limit < step - 1e-12 {
                            true
                        } else if limit <= step + 1e-12 {
                            if bland {
                                b < self.basis[lr]
                            } else {
                                alpha.abs() > leave_alpha
                            }
                        } else {
                            false
                        }
                    }
                };
                if better {
                    step = limit;
                    leave = Some((r, st, at));
                    leave_alpha = alpha.abs();
                }
            }
            if step.is_infinite() {
                return if phase_one { LpOutcome::IterationLimit } else { LpOutcome::Unbounded };
            }
            if step <= 1e-12 {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            // Move the entering variable and every basic variable.
            let delta = dir * step;
            if delta != 0.0 {
                self.x[j] += delta;
                for r in 0..m {
                    let a = self.tab[r * nc + j];
                    if a != 0.0 {
                        self.x[self.basis[r]] -= a * delta;
                    }
                }
            }
            match leave {
                None => {
                    // Bound flip.
                    if dir > 0.0 {
                        self.status[j] = ColStatus::Upper;
                        self.x[j] = self.upper[j];
                    } else {
                        self.status[j] = ColStatus::Lower;
                        self.x[j] = self.lower[j];
                    }
                }
                Some((r, st, at)) => {
                    let leaving = self.basis[r];
                    self.pivot(r, j);
                    self.status[leaving] =
                        if self.lower[leaving] == self.upper[leaving] { ColStatus::Lower } else { st };
                    self.x[leaving] = at;
                }
            }
        }
        LpOutcome::IterationLimit
    }

    /// Dual simplex; requires a dual feasible basis.
    fn dual(&mut self) -> LpOutcome {
        let (m, nc) = (self.rows, self.cols);
        let budget = self.iteration_budget();
        let mut stall = 0usize;
        let mut last_obj = f64::NEG_INFINITY;
        for _ in 0..budget {
            self.iterations += 1;
            let bland = stall >= DEGENERATE_RUN;
            let mut leave_row = None;
            let mut worst = 0.0;
            for r in 0..m {
                let inf = self.infeasibility(self.basis[r]);
                if inf > 0.0 {
                    if bland {
                        match leave_row {
                            Some(lr) if self.basis[lr] < self.basis[r] => {}
                            _ => leave_row = Some(r),
                        }
                    } else if inf > worst {
                        worst = inf;
                        leave_row = Some(r);
                    }
                }
            }
            let Some(r) = leave_row else {
                return LpOutcome::Optimal;
            };
            let b = self.basis[r];
            let v = self.x[b];
            let increase = v < self.lower[b];
            let target = if increase { self.lower[b] } else { self.upper[b] };

            let row = &self.tab[r * nc..(r + 1) * nc];
            let d = &self.tab[m * nc..];
            let mut enter = None;
            let mut best_ratio = f64::INFINITY;
            let mut best_a = 0.0;
            for k in 0..nc {
                let st = self.status[k];
                if st == ColStatus::Basic || self.lower[k] == self.upper[k] {
                    continue;
                }
                let a = row[k];
                if a.abs() < PIVOT_TOL {
                    continue;
                }
                let ok = match st {
                    ColStatus::Lower => (increase && a < 0.0) || (!increase && a > 0.0),
                    ColStatus::Upper => (increase && a > 0.0) || (!increase && a < 0.0),
                    ColStatus::Free => true,
                    ColStatus::Basic => false,
                };
                if !ok {
                    continue;
                }
                let ratio = d[k].abs() / a.abs();
                let better = if ratio < best_ratio - 1e-12 {
                    true
                } else if ratio <= best_ratio + 1e-12 {
                    !bland && a.abs() > best_a
                } else {
                    false
                };
                if better {
                    best_ratio = ratio;
                    best_a = a.abs();
                    enter = Some(k);
                }
            }
            let Some(k) = enter else {
                return LpOutcome::Infeasible;
            };
            let a = self.tab[r * nc + k];
            let delta = (v - target) / a;
            self.x[k] += delta;
            for i in 0..m {
                let t = self.tab[i * nc + k];
                if t != 0.0 {
                    self.x[self.basis[i]] -= t * delta;
                }
            }
            self.pivot(r, k);
            self.status[b] =
                if increase || self.lower[b] == self.upper[b] { ColStatus::Lower } else { ColStatus::Upper };
            self.x[b] = target;
            let obj = self.objective_all();
            if obj > last_obj + 1e-12 {
                stall = 0;
                last_obj = obj;
            } else {
                stall += 1;
            }
        }
        LpOutcome::IterationLimit
    }

    fn objective_all(&self) -> f64 {
        self.cost.iter().zip(&self.x).map(|(c, x)| c * x).sum()
    }
}
