use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::rc::Rc;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::MilpError;
use crate::model::{LinearModel, ObjSense, VarKind};
use crate::simplex::{Basis, LpOutcome, Simplex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
    NodeLimit,
    TimeLimit,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolverConfig {
    pub feasibility_tol: f64,
    pub integrality_tol: f64,
    /// Relative optimality gap; 0 proves optimality.
    pub relative_gap: f64,
    pub node_limit: Option<u64>,
    pub time_limit: Option<Duration>,
    /// Run a rounding dive at the root to seed the incumbent.
    pub dive: bool,
    /// Keep one [`NodeRecord`] per evaluated node.
    pub record_trace: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            feasibility_tol: 1e-7,
            integrality_tol: 1e-6,
            relative_gap: 0.0,
            node_limit: None,
            time_limit: None,
            dive: true,
            record_trace: false,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), MilpError> {
        if !(self.feasibility_tol > 0.0 && self.integrality_tol > 0.0 && self.relative_gap >= 0.0) {
            return Err(MilpError::InvalidModel("solver tolerances must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NodeRecord {
    pub id: u64,
    pub parent: Option<u64>,
    pub depth: u32,
    /// LP bound in the model's own objective sense; `None` when infeasible.
    pub bound: Option<f64>,
    pub integral: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MipSolution {
    pub status: SolveStatus,
    /// Objective of the incumbent in the model's sense, if any.
    pub objective: Option<f64>,
    pub values: Vec<f64>,
    /// Best proven bound in the model's sense.
    pub best_bound: Option<f64>,
    pub nodes: u64,
    pub lp_iterations: u64,
    #[serde(skip)]
    pub wall_time: Duration,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub incumbent_node: Option<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub trace: Vec<NodeRecord>,
}

impl MipSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }

    pub fn value(&self, v: crate::model::VarId) -> f64 {
        self.values[v.0]
    }

    pub(crate) fn empty(status: SolveStatus, n: usize) -> Self {
        Self {
            status,
            objective: None,
            values: vec![0.0; n],
            best_bound: None,
            nodes: 0,
            lp_iterations: 0,
            wall_time: Duration::ZERO,
            incumbent_node: None,
            trace: Vec::new(),
        }
    }
}

fn sense_sign(model: &LinearModel) -> f64 {
    match model.sense {
        ObjSense::Minimize => 1.0,
        ObjSense::Maximize => -1.0,
    }
}

/// Solves the LP relaxation (binaries treated as continuous on their bounds).
pub fn solve_lp(model: &LinearModel) -> Result<MipSolution, MilpError> {
    model.validate()?;
    let start = Instant::now();
    let mut lp = Simplex::new(model);
    let out = lp.solve();
    let n = model.num_vars();
    let mut sol = match out {
        LpOutcome::Optimal => {
            let values = lp.values().to_vec();
            let obj = model.objective_value(&values);
            MipSolution {
                status: SolveStatus::Optimal,
                objective: Some(obj),
                values,
                best_bound: Some(obj),
                ..MipSolution::empty(SolveStatus::Optimal, n)
            }
        }
        LpOutcome::Infeasible => MipSolution::empty(SolveStatus::Infeasible, n),
        LpOutcome::Unbounded => MipSolution::empty(SolveStatus::Unbounded, n),
        LpOutcome::IterationLimit => return Err(MilpError::Numerical("LP relaxation did not converge".into())),
    };
    sol.nodes = 1;
    sol.lp_iterations = lp.iterations;
    sol.wall_time = start.elapsed();
    Ok(sol)
}

struct Node {
    /// LP bound in minimisation form.
    bound: f64,
    seq: u64,
    id: u64,
    depth: u32,
    fixes: Rc<Fixes>,
    basis: Rc<Basis>,
}

/// Persistent list of binary fixings from the root down to a node.
struct Fixes {
    var: usize,
    value: f64,
    parent: Option<Rc<Fixes>>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Node {
    // BinaryHeap is a max-heap: smallest bound first, then oldest first.
    fn cmp(&self, other: &Self) -> Ordering {
        other.bound.total_cmp(&self.bound).then_with(|| other.seq.cmp(&self.seq))
    }
}

struct Search<'a> {
    model: &'a LinearModel,
    cfg: &'a SolverConfig,
    lp: Simplex,
    binaries: Vec<usize>,
    sign: f64,
    integral_objective: bool,
    incumbent: Option<(f64, Vec<f64>)>,
    incumbent_node: Option<u64>,
    nodes: u64,
    trace: Vec<NodeRecord>,
}

impl Search<'_> {
    fn apply_fixes(&mut self, fixes: Option<&Rc<Fixes>>) {
        for &j in &self.binaries {
            let v = &self.model.variables[j];
            self.lp.set_bounds(j, v.lower, v.upper);
        }
        let mut cur = fixes.cloned();
        while let Some(f) = cur {
            if f.var != usize::MAX {
                self.lp.set_bounds(f.var, f.value, f.value);
            }
            cur = f.parent.clone();
        }
    }

    fn most_fractional(&self, x: &[f64]) -> Option<usize> {
        let mut best = None;
        let mut best_frac = self.cfg.integrality_tol;
        for &j in &self.binaries {
            let frac = (x[j] - x[j].round()).abs();
            if frac > best_frac + 1e-12 {
                best_frac = frac;
                best = Some(j);
            }
        }
        best
    }

    fn prunes(&self, bound: f64) -> bool {
        let Some((inc, _)) = &self.incumbent else { return false };
        let gap = self.cfg.relative_gap * inc.abs();
        if self.integral_objective && bound > inc - 1.0 + 1e-6 {
            return true;
        }
        bound >= inc - gap - 1e-9
    }

    /// Snaps binaries and records the point if it is feasible and improving.
    fn offer(&mut self, x: &[f64], node: u64) -> bool {
        let mut snapped = x.to_vec();
        for &j in &self.binaries {
            snapped[j] = snapped[j].round();
        }
        if self.model.max_violation(&snapped) > self.cfg.feasibility_tol.max(1e-6) {
            return false;
        }
        let obj = self.sign * self.model.objective_value(&snapped);
        if self.incumbent.as_ref().is_none_or(|(inc, _)| obj < inc - 1e-9) {
            log::trace!("incumbent {} at node {}", self.sign * obj, node);
            self.incumbent = Some((obj, snapped));
            self.incumbent_node = Some(node);
            return true;
        }
        false
    }

    fn solve_current(&mut self) -> Option<(f64, Vec<f64>)> {
        match self.lp.solve() {
            LpOutcome::Optimal => {
                let x = self.lp.values().to_vec();
                // Guard against drift: re-solve from a clean tableau if the point is off.
                if self.model.max_violation(&x) > 1e-6 {
                    self.lp.reset();
                    if self.lp.solve() != LpOutcome::Optimal {
                        return None;
                    }
                    let x = self.lp.values().to_vec();
                    return Some((self.lp.objective(), x));
                }
                Some((self.lp.objective(), x))
            }
            _ => None,
        }
    }

    fn record(&mut self, id: u64, parent: Option<u64>, depth: u32, bound: Option<f64>, integral: bool) {
        if self.cfg.record_trace {
            self.trace.push(NodeRecord { id, parent, depth, bound: bound.map(|b| self.sign * b), integral });
        }
    }

    fn dive(&mut self, root_fixes: &Rc<Fixes>) {
        let saved = self.lp.snapshot();
        let mut fixes = root_fixes.clone();
        let mut x = self.lp.values().to_vec();
        for _ in 0..self.binaries.len() {
            let Some(j) = self.most_fractional(&x) else {
                self.offer(&x, 0);
                break;
            };
            let first = if x[j] >= 0.5 { 1.0 } else { 0.0 };
            let mut next = None;
            for value in [first, 1.0 - first] {
                self.lp.set_bounds(j, value, value);
                if let Some((obj, xs)) = self.solve_current() {
                    if !self.prunes(obj) {
                        next = Some((value, xs));
                        break;
                    }
                }
            }
            let Some((value, xs)) = next else { break };
            fixes = Rc::new(Fixes { var: j, value, parent: Some(fixes) });
            x = xs;
        }
        self.apply_fixes(Some(root_fixes));
        self.lp.restore(&saved);
    }
}

/// Best-first branch-and-bound over the binary variables.
///
/// Branches on the most fractional binary (lowest index on ties); open nodes
/// are ordered by LP bound, oldest first on ties. Both children are evaluated
/// as soon as their parent is branched, warm-started from the parent basis.
pub fn solve_mip(model: &LinearModel, cfg: &SolverConfig) -> Result<MipSolution, MilpError> {
    model.validate()?;
    cfg.validate()?;
    let start = Instant::now();
    let n = model.num_vars();
    let sign = sense_sign(model);
    let binaries: Vec<usize> =
        model.variables.iter().enumerate().filter(|(_, v)| v.kind == VarKind::Binary).map(|(i, _)| i).collect();
    let integral_objective = model.variables.iter().zip(&model.objective).all(|(v, &c)| match v.kind {
        VarKind::Binary => (c - c.round()).abs() < 1e-12,
        VarKind::Continuous => c == 0.0,
    });
    let mut s = Search {
        model,
        cfg,
        lp: Simplex::new(model),
        binaries,
        sign,
        integral_objective,
        incumbent: None,
        incumbent_node: None,
        nodes: 0,
        trace: Vec::new(),
    };

    let finish = |s: Search, status: SolveStatus, open_bound: Option<f64>| -> MipSolution {
        let mut sol = MipSolution::empty(status, n);
        sol.nodes = s.nodes;
        sol.lp_iterations = s.lp.iterations;
        sol.trace = s.trace;
        sol.incumbent_node = s.incumbent_node;
        if let Some((obj, x)) = s.incumbent {
            sol.objective = Some(sign * obj);
            sol.values = x;
            let bound = open_bound.map_or(obj, |b| b.min(obj));
            sol.best_bound = Some(sign * bound);
        } else {
            sol.best_bound = open_bound.map(|b| sign * b);
        }
        sol.wall_time = start.elapsed();
        sol
    };

    // Root.
    s.nodes = 1;
    let root_out = s.lp.solve();
    match root_out {
        LpOutcome::Optimal => {}
        LpOutcome::Infeasible => {
            s.record(0, None, 0, None, false);
            return Ok(finish(s, SolveStatus::Infeasible, None));
        }
        LpOutcome::Unbounded => return Ok(finish(s, SolveStatus::Unbounded, None)),
        LpOutcome::IterationLimit => return Err(MilpError::Numerical("root LP did not converge".into())),
    }
    let root_obj = s.lp.objective();
    let root_x = s.lp.values().to_vec();
    let root_fixes = Rc::new(Fixes { var: usize::MAX, value: 0.0, parent: None });
    if s.most_fractional(&root_x).is_none() {
        s.record(0, None, 0, Some(root_obj), true);
        if s.offer(&root_x, 0) {
            return Ok(finish(s, SolveStatus::Optimal, None));
        }
    }
    s.record(0, None, 0, Some(root_obj), false);
    if cfg.dive && s.incumbent.is_none() {
        s.dive(&root_fixes);
    }

    let mut heap = BinaryHeap::new();
    let mut seq = 0u64;
    heap.push(Node { bound: root_obj, seq, id: 0, depth: 0, fixes: root_fixes, basis: Rc::new(s.lp.snapshot()) });

    while let Some(node) = heap.pop() {
        if s.prunes(node.bound) {
            continue;
        }
        if let Some(limit) = cfg.node_limit {
            if s.nodes >= limit {
                heap.push(node);
                let open = heap.iter().map(|n| n.bound).fold(f64::INFINITY, f64::min);
                return Ok(finish(s, SolveStatus::NodeLimit, Some(open)));
            }
        }
        if let Some(limit) = cfg.time_limit {
            if start.elapsed() >= limit {
                heap.push(node);
                let open = heap.iter().map(|n| n.bound).fold(f64::INFINITY, f64::min);
                return Ok(finish(s, SolveStatus::TimeLimit, Some(open)));
            }
        }
        s.apply_fixes(Some(&node.fixes));
        s.lp.restore(&node.basis);
        let Some((_, x)) = s.solve_current() else {
            continue;
        };
        let Some(j) = s.most_fractional(&x) else {
            s.offer(&x, node.id);
            continue;
        };
        let parent_basis = s.lp.snapshot();
        for (k, value) in [0.0, 1.0].into_iter().enumerate() {
            if k > 0 {
                s.lp.set_bounds(j, s.model.variables[j].lower, s.model.variables[j].upper);
                s.lp.restore(&parent_basis);
            }
            s.lp.set_bounds(j, value, value);
            let id = s.nodes;
            s.nodes += 1;
            let depth = node.depth + 1;
            match s.solve_current() {
                None => s.record(id, Some(node.id), depth, None, false),
                Some((obj, cx)) => {
                    let integral = s.most_fractional(&cx).is_none();
                    s.record(id, Some(node.id), depth, Some(obj), integral);
                    if s.prunes(obj) {
                        continue;
                    }
                    if integral {
                        s.offer(&cx, id);
                        continue;
                    }
                    seq += 1;
                    heap.push(Node {
                        bound: obj,
                        seq,
                        id,
                        depth,
                        fixes: Rc::new(Fixes { var: j, value, parent: Some(node.fixes.clone()) }),
                        basis: Rc::new(s.lp.snapshot()),
                    });
                }
            }
        }
    }
    let status = if s.incumbent.is_some() { SolveStatus::Optimal } else { SolveStatus::Infeasible };
    Ok(finish(s, status, None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ObjSense, RowSense};

    #[test]
    fn two_item_choice() {
        let mut m = LinearModel::new(ObjSense::Maximize);
        let a = m.add_binary("x1", 3.0);
        let b = m.add_binary("x2", 2.0);
        m.add_constraint("one", [(a, 1.0), (b, 1.0)], RowSense::Le, 1.0);
        let sol = solve_mip(&m, &SolverConfig::default()).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert_eq!(sol.objective, Some(3.0));
        assert_eq!(sol.values, vec![1.0, 0.0]);
    }

    #[test]
    fn infeasible_binary_model() {
        let mut m = LinearModel::new(ObjSense::Minimize);
        let a = m.add_binary("x1", 1.0);
        let b = m.add_binary("x2", 1.0);
        m.add_constraint("c", [(a, 1.0), (b, 1.0)], RowSense::Ge, 3.0);
        assert_eq!(solve_mip(&m, &SolverConfig::default()).unwrap().status, SolveStatus::Infeasible);
    }

    #[test]
    fn lp_examples() {
        let mut m = LinearModel::new(ObjSense::Minimize);
        let x = m.add_continuous("x", 0.0, 10.0, 1.0);
        m.add_constraint("c", [(x, 1.0)], RowSense::Ge, 3.0);
        assert_eq!(solve_lp(&m).unwrap().objective, Some(3.0));

        let mut m = LinearModel::new(ObjSense::Minimize);
        let x = m.add_continuous("x", 0.0, f64::INFINITY, 1.0);
        let y = m.add_continuous("y", 0.0, f64::INFINITY, 1.0);
        m.add_constraint("c", [(x, 1.0), (y, 1.0)], RowSense::Ge, 1.0);
        let s = solve_lp(&m).unwrap();
        assert!((s.objective.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn node_limit_returns_incumbent_status() {
        // Odd-coefficient knapsack needs branching.
        let mut m = LinearModel::new(ObjSense::Maximize);
        let w = [7.0, 9.0, 11.0, 13.0, 15.0, 17.0];
        let xs: Vec<_> = w.iter().enumerate().map(|(i, &wi)| m.add_binary(format!("x{i}"), wi + 1.0)).collect();
        m.add_constraint("cap", xs.iter().zip(w).map(|(&x, wi)| (x, wi)), RowSense::Le, 30.0);
        let cfg = SolverConfig { node_limit: Some(1), dive: false, ..SolverConfig::default() };
        let sol = solve_mip(&m, &cfg).unwrap();
        assert_eq!(sol.status, SolveStatus::NodeLimit);
        let full = solve_mip(&m, &SolverConfig::default()).unwrap();
        assert_eq!(full.status, SolveStatus::Optimal);
        assert!(full.best_bound.unwrap() - full.objective.unwrap() < 1e-9);
    }

    #[test]
    fn mixed_model_with_continuous_part() {
        // min 5y + c s.t. c >= 4 - 4y, c >= 0, y binary: y=1 costs 5, y=0 costs 4.
        let mut m = LinearModel::new(ObjSense::Minimize);
        let y = m.add_binary("y", 5.0);
        let c = m.add_continuous("c", 0.0, f64::INFINITY, 1.0);
        m.add_constraint("link", [(c, 1.0), (y, 4.0)], RowSense::Ge, 4.0);
        let sol = solve_mip(&m, &SolverConfig::default()).unwrap();
        assert_eq!(sol.objective, Some(4.0));
    }
}
