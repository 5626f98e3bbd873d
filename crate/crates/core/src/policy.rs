//! Inventory dynamics and the static, myopic and least-squares Monte Carlo
//! dispatch policies.

use std::collections::HashMap;
use std::sync::Mutex;

use log::{debug, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use sdairp_milp::{solve_mip, MipSolution, SolveStatus, SolverConfig};

use crate::error::{ModelError, PolicyError};
use crate::formulations::{
    build_airp_model, build_carp_model, build_svrp_model, extract_routes, AirpInstance, Routes, SvrpInstance,
};
use crate::graph::{Network, NodeId, DEPOT};
use crate::regression::{fit, predict, FitResult};
use crate::stochastic::{simulate_paths, OuParams, PathMatrix};

/// System state observed at the decision point of period `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateSnapshot {
    pub t: usize,
    /// Inventory per arc; negative after a stock-out.
    pub s: Vec<f64>,
    /// Consumption rate per arc realised in period `t`.
    pub r: Vec<f64>,
    /// Periods until each vehicle is available again.
    pub recharge: Vec<usize>,
}

impl StateSnapshot {
    pub fn new(t: usize, s: Vec<f64>, r: Vec<f64>, fleet: usize) -> Self {
        Self { t, s, r, recharge: vec![0; fleet] }
    }
}

/// `s - r` per arc and the stock-out flags `s - r < 0`.
pub fn deplete(s: &[f64], r: &[f64]) -> (Vec<f64>, Vec<bool>) {
    let pre: Vec<f64> = s.iter().zip(r).map(|(s, r)| s - r).collect();
    let flags = pre.iter().map(|&v| v < 0.0).collect();
    (pre, flags)
}

/// Order-up-to replenishment: served arcs return to `q`.
pub fn replenish(pre: &[f64], y: &[bool], q: &[f64]) -> Vec<f64> {
    pre.iter().zip(y).zip(q).map(|((&p, &y), &q)| if y { q } else { p }).collect()
}

/// One period: consume `rates`, then serve the arcs in `y`. Returns the
/// post-decision state for period `t + 1` and the stock-out flags.
pub fn inventory_step(state: &StateSnapshot, rates: &[f64], y: &[bool], q: &[f64]) -> (StateSnapshot, Vec<bool>) {
    let (pre, flags) = deplete(&state.s, rates);
    let post = replenish(&pre, y, q);
    let next = StateSnapshot { t: state.t + 1, s: post, r: rates.to_vec(), recharge: state.recharge.clone() };
    (next, flags)
}

pub fn holding_cost(post: &[f64], h: &[f64]) -> f64 {
    post.iter().zip(h).map(|(s, h)| h * s.max(0.0)).sum()
}

pub fn stockout_cost(flags: &[bool], rho: &[f64]) -> f64 {
    flags.iter().zip(rho).filter(|(f, _)| **f).map(|(_, r)| r).sum()
}

/// Which arcs to serve this period and how.
#[derive(Debug, Clone, PartialEq)]
pub struct Decision {
    pub y: Vec<bool>,
    pub routes: Routes,
}

impl Decision {
    pub fn idle(net: &Network) -> Self {
        Self { y: vec![false; net.num_arcs()], routes: Routes::empty(net.fleet_size) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionRecord {
    pub t: usize,
    pub selected: Vec<(NodeId, NodeId)>,
    pub routes: Routes,
    /// Traversal cost.
    pub x: f64,
    /// Holding cost on post-decision inventory.
    pub h: f64,
    /// Stock-out cost.
    pub o: f64,
}

impl DecisionRecord {
    pub fn account(
        t: usize,
        net: &Network,
        decision: Decision,
        post: &[f64],
        flags: &[bool],
        h: &[f64],
        rho: &[f64],
    ) -> Self {
        let selected = net.arcs.iter().zip(&decision.y).filter(|(_, y)| **y).map(|(a, _)| (a.i, a.j)).collect();
        Self {
            t,
            selected,
            x: decision.routes.cost,
            routes: decision.routes,
            h: holding_cost(post, h),
            o: stockout_cost(flags, rho),
        }
    }

    pub fn total(&self) -> f64 {
        self.x + self.h + self.o
    }
}

/// Incumbent of a routing solve, if any.
fn usable(sol: &MipSolution) -> bool {
    match sol.status {
        SolveStatus::Optimal => true,
        SolveStatus::NodeLimit | SolveStatus::TimeLimit => sol.objective.is_some(),
        SolveStatus::Infeasible | SolveStatus::Unbounded => false,
    }
}

/// Routes serving exactly the arcs in `y`, or `None` when no feasible
/// routing was found. Vehicles are ordered by fuel use.
pub fn route_selection(net: &Network, y: &[bool], solver: &SolverConfig) -> Result<Option<Routes>, PolicyError> {
    if !y.iter().any(|&v| v) {
        return Ok(Some(Routes::empty(net.fleet_size)));
    }
    let restricted = net.with_demands(&y.iter().map(|&v| u8::from(v)).collect::<Vec<_>>());
    let carp = build_carp_model(&restricted)?;
    let sol = solve_mip(&carp.model, solver).map_err(ModelError::from)?;
    if !usable(&sol) {
        return Ok(None);
    }
    if !sol.is_optimal() {
        warn!("routing stopped at {:?}; using the incumbent", sol.status);
    }
    Ok(Some(extract_routes(&restricted, &carp.dirs, &carp.vars, &sol.values)?))
}

/// Largest candidate set solved by subset enumeration; beyond it the
/// selective model is handed to the MILP solver directly.
pub const MAX_ENUMERATED_CANDIDATES: usize = 12;

/// Routing oracle for one network. Optimal routes per served-arc set are
/// memoised, which makes repeated selective routing solves cheap: for a
/// fixed selection the selective model is exactly the arc routing model on
/// that selection.
pub struct RouteCache {
    net: Network,
    solver: SolverConfig,
    /// Depot-to-node shortest traversal costs.
    depot_dist: Vec<f64>,
    memo: Mutex<HashMap<u64, Option<Routes>>>,
}

impl RouteCache {
    pub fn new(net: &Network, solver: SolverConfig) -> Self {
        let depot_dist = net.shortest_paths()[DEPOT].clone();
        Self { net: net.clone(), solver, depot_dist, memo: Mutex::new(HashMap::new()) }
    }

    pub fn net(&self) -> &Network {
        &self.net
    }

    pub fn solver(&self) -> &SolverConfig {
        &self.solver
    }

    /// Number of distinct selections routed so far.
    pub fn len(&self) -> usize {
        self.memo.lock().expect("route memo poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn mask(y: &[bool]) -> u64 {
        y.iter().enumerate().filter(|(_, v)| **v).fold(0, |m, (k, _)| m | (1 << k))
    }

    /// Memoised [`route_selection`].
    pub fn routes(&self, y: &[bool]) -> Result<Option<Routes>, PolicyError> {
        if y.len() > 64 {
            return route_selection(&self.net, y, &self.solver);
        }
        let key = Self::mask(y);
        if let Some(hit) = self.memo.lock().expect("route memo poisoned").get(&key) {
            return Ok(hit.clone());
        }
        let routes = route_selection(&self.net, y, &self.solver)?;
        self.memo.lock().expect("route memo poisoned").insert(key, routes.clone());
        Ok(routes)
    }

    /// Lower bound on the routing cost of a non-empty selection: every
    /// selected arc is traversed, and each needs a trip from the depot.
    fn route_bound(&self, arcs: &[usize]) -> f64 {
        let d = &self.depot_dist;
        let sum: f64 = arcs.iter().map(|&k| self.net.arcs[k].c).sum();
        let trip = arcs
            .iter()
            .map(|&k| {
                let a = &self.net.arcs[k];
                d[a.i] + a.c + d[a.j]
            })
            .fold(0.0, f64::max);
        sum.max(trip)
    }

    /// Optimal selective routing for payoffs `pi`: minimises routing cost
    /// plus the payoffs of the selected arcs.
    pub fn select(&self, pi: &[f64]) -> Result<Option<Decision>, PolicyError> {
        let net = &self.net;
        let candidates: Vec<usize> = (0..net.num_arcs()).filter(|&k| net.arcs[k].demanded() && pi[k] < 0.0).collect();
        if candidates.is_empty() {
            return Ok(Some(Decision::idle(net)));
        }
        if candidates.len() > MAX_ENUMERATED_CANDIDATES || net.num_arcs() > 64 {
            return select_direct(net, pi, &self.solver);
        }
        // Best-first over subsets by (bound + payoff); stop once no subset
        // can beat the incumbent.
        let mut subsets: Vec<(f64, u32)> = (1u32..(1 << candidates.len()))
            .map(|bits| {
                let arcs: Vec<usize> = members(&candidates, bits);
                let payoff: f64 = arcs.iter().map(|&k| pi[k]).sum();
                (self.route_bound(&arcs) + payoff, bits)
            })
            .collect();
        subsets.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let mut best: (f64, Option<(Vec<bool>, Routes)>) = (0.0, None);
        for (bound, bits) in subsets {
            if bound >= best.0 - 1e-9 {
                break;
            }
            let mut y = vec![false; net.num_arcs()];
            for k in members(&candidates, bits) {
                y[k] = true;
            }
            if let Some(routes) = self.routes(&y)? {
                let obj = routes.cost + y.iter().zip(pi).filter(|(v, _)| **v).map(|(_, p)| p).sum::<f64>();
                if obj < best.0 - 1e-9 {
                    best = (obj, Some((y, routes)));
                }
            }
        }
        Ok(Some(match best.1 {
            Some((y, routes)) => Decision { y, routes },
            None => Decision::idle(net),
        }))
    }
}

fn members(candidates: &[usize], bits: u32) -> Vec<usize> {
    candidates.iter().enumerate().filter(|(b, _)| bits >> b & 1 == 1).map(|(_, &k)| k).collect()
}

/// Selective routing through the MILP model, restricted to arcs with a
/// negative payoff (the others can never improve the objective).
pub fn select_direct(net: &Network, pi: &[f64], solver: &SolverConfig) -> Result<Option<Decision>, PolicyError> {
    let candidates: Vec<u8> = net.arcs.iter().zip(pi).map(|(a, &p)| u8::from(a.demanded() && p < 0.0)).collect();
    if candidates.iter().all(|&c| c == 0) {
        return Ok(Some(Decision::idle(net)));
    }
    let restricted = net.with_demands(&candidates);
    let model = build_svrp_model(&SvrpInstance { net: restricted.clone(), pi: pi.to_vec() })?;
    let sol = solve_mip(&model.model, solver).map_err(ModelError::from)?;
    if !usable(&sol) {
        return Ok(None);
    }
    let routes = extract_routes(&restricted, &model.dirs, &model.vars, &sol.values)?;
    Ok(Some(Decision { y: model.selection(&sol.values), routes }))
}

/// Serve every demanded arc whose pre-decision inventory is below its
/// threshold. If no routing covers the selection, the selected arc with the
/// most inventory is dropped until one does.
pub fn myopic_decide(pre: &[f64], thresholds: &[f64], routing: &RouteCache) -> Result<Decision, PolicyError> {
    let net = routing.net();
    if thresholds.len() != net.num_arcs() || pre.len() != net.num_arcs() {
        return Err(PolicyError::Config("thresholds and state must have one entry per arc".into()));
    }
    let mut y: Vec<bool> = net.arcs.iter().enumerate().map(|(k, a)| a.demanded() && pre[k] < thresholds[k]).collect();
    loop {
        if let Some(routes) = routing.routes(&y)? {
            return Ok(Decision { y, routes });
        }
        let drop = (0..y.len())
            .filter(|&k| y[k])
            .max_by(|&a, &b| pre[a].total_cmp(&pre[b]).then(a.cmp(&b)))
            .expect("an empty selection always routes");
        warn!("myopic selection cannot be routed; dropping arc ({},{})", net.arcs[drop].i, net.arcs[drop].j);
        y[drop] = false;
    }
}

/// Period `t` (1-based) of a precomputed schedule.
pub fn static_decide(schedule: &[Routes], t: usize, net: &Network) -> Result<Decision, PolicyError> {
    let routes =
        schedule.get(t.wrapping_sub(1)).cloned().ok_or(PolicyError::BeyondSchedule { t, len: schedule.len() })?;
    let mut y = vec![false; net.num_arcs()];
    for k in routes.served_arcs(net) {
        y[k] = true;
    }
    Ok(Decision { y, routes })
}

/// A-priori plan seeding the backward pass.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Apriori {
    /// Deterministic multi-period model at the current rates, solved within
    /// a node budget; falls back to the cyclic plan.
    Airp {
        node_limit: u64,
    },
    NaiveCyclic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SdairpConfig {
    pub horizon: usize,
    pub paths: usize,
    pub basis: usize,
    pub rho: Vec<f64>,
    pub h: Vec<f64>,
    pub apriori: Apriori,
    /// Used when the period decision cannot be routed.
    pub fallback_thresholds: Vec<f64>,
    /// Clamp regression predictions to `[0, rho]`.
    pub clamp: bool,
    pub record_trace: bool,
}

impl SdairpConfig {
    pub fn validate(&self, net: &Network) -> Result<(), PolicyError> {
        let m = net.num_arcs();
        if self.horizon < 1 || self.paths < 2 || self.basis < 1 {
            return Err(PolicyError::Config("need horizon >= 1, paths >= 2, basis >= 1".into()));
        }
        if self.rho.len() != m || self.h.len() != m || self.fallback_thresholds.len() != m {
            return Err(PolicyError::Config("rho, h and thresholds need one entry per arc".into()));
        }
        if self.rho.iter().any(|&r| !(r >= 0.0 && r.is_finite())) {
            return Err(PolicyError::Config("stock-out costs must be finite and non-negative".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub tau: usize,
    /// Regression coefficients per arc (empty for arcs without demand).
    pub coefficients: Vec<Vec<f64>>,
    /// Selected arc numbers (1-based) per path.
    pub decisions: Vec<Vec<usize>>,
    pub solves: usize,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct LsmTrace {
    pub apriori: String,
    pub steps: Vec<TraceStep>,
}

/// Cyclic plan: each demanded arc is served every `max(1, round(q / mu))`
/// periods, first when its projected inventory would fall below one period
/// of consumption. Indexed `[tau - 1][arc]`.
pub fn naive_cyclic_plan(pre: &[f64], params: &[OuParams], net: &Network, horizon: usize) -> Vec<Vec<bool>> {
    let mut plan = vec![vec![false; net.num_arcs()]; horizon];
    for (k, a) in net.arcs.iter().enumerate().filter(|(_, a)| a.demanded()) {
        let mu = params[k].mu;
        let q = f64::from(a.q);
        let cycle = if mu > 0.0 { ((q / mu).round() as usize).max(1) } else { usize::MAX };
        if cycle == usize::MAX {
            continue;
        }
        let first = (1..=cycle).find(|&tau| pre[k] - (tau - 1) as f64 * mu < mu).unwrap_or(cycle);
        let mut tau = first;
        while tau <= horizon {
            plan[tau - 1][k] = true;
            tau += cycle;
        }
    }
    plan
}

fn airp_plan(
    pre: &[f64],
    rates: &[f64],
    net: &Network,
    cfg: &SdairpConfig,
    node_limit: u64,
) -> Result<Option<Vec<Vec<bool>>>, PolicyError> {
    let r: Vec<f64> = rates.iter().map(|r| r.max(0.0)).collect();
    let s0: Vec<f64> = net.arcs.iter().enumerate().map(|(k, a)| (pre[k] + r[k]).clamp(0.0, f64::from(a.q))).collect();
    let inst = AirpInstance::new(net.clone(), cfg.horizon, cfg.h.clone(), r, s0);
    let model = build_airp_model(&inst)?;
    let solver = SolverConfig { node_limit: Some(node_limit), ..SolverConfig::default() };
    let sol = solve_mip(&model.model, &solver).map_err(ModelError::from)?;
    if !usable(&sol) {
        return Ok(None);
    }
    let schedule = model.schedule(net, &sol.values)?;
    Ok(Some(
        schedule
            .iter()
            .map(|routes| {
                let mut y = vec![false; net.num_arcs()];
                for k in routes.served_arcs(net) {
                    y[k] = true;
                }
                y
            })
            .collect(),
    ))
}

/// Stock-out cost met by arc `k` on path `p` between `tau` (exclusive) and
/// its next planned service, starting from post-decision inventory `start`.
fn outcome(
    start: f64,
    p: usize,
    k: usize,
    tau: usize,
    plan: &[Vec<bool>],
    paths: Option<&PathMatrix>,
    rho: f64,
) -> f64 {
    let mut inv = start;
    for u in tau + 1..=plan.len() {
        let paths = paths.expect("paths exist whenever the horizon exceeds one period");
        inv -= paths.rate(p, u - 1, k);
        if inv < 0.0 {
            return rho;
        }
        if plan[u - 1][k] {
            return 0.0;
        }
    }
    0.0
}

/// Pre-decision inventory at `tau` on path `p` under `plan`.
fn pre_at(pre1: &[f64], p: usize, tau: usize, plan: &[Vec<bool>], paths: Option<&PathMatrix>, q: &[f64]) -> Vec<f64> {
    let mut inv = pre1.to_vec();
    for u in 2..=tau {
        let paths = paths.expect("paths exist whenever the horizon exceeds one period");
        for k in 0..inv.len() {
            if plan[u - 2][k] {
                inv[k] = q[k];
            }
            inv[k] -= paths.rate(p, u - 1, k);
        }
    }
    inv
}

/// Least-squares Monte Carlo decision for the current period. `params`
/// gives each arc's rate process; inner paths start from `state.r`.
pub fn lsm_decide(
    state: &StateSnapshot,
    params: &[OuParams],
    cfg: &SdairpConfig,
    routing: &RouteCache,
    seed: u64,
) -> Result<(Decision, Option<LsmTrace>), PolicyError> {
    let net = routing.net();
    cfg.validate(net)?;
    let m = net.num_arcs();
    let horizon = cfg.horizon;
    let q: Vec<f64> = net.arcs.iter().map(|a| f64::from(a.q)).collect();
    let pre1 = &state.s;

    let start: Vec<OuParams> = params.iter().zip(&state.r).map(|(p, &r)| p.with_r0(r)).collect();
    let paths = if horizon >= 2 { Some(simulate_paths(&start, cfg.paths, horizon - 1, seed)?) } else { None };
    let paths = paths.as_ref();

    let (apriori_plan, apriori_name) = match &cfg.apriori {
        Apriori::Airp { node_limit } => match airp_plan(pre1, &state.r, net, cfg, *node_limit)? {
            Some(plan) => (plan, "airp"),
            None => {
                debug!("a-priori multi-period model unsolved within budget; using the cyclic plan");
                (naive_cyclic_plan(pre1, params, net, horizon), "naive_cyclic_fallback")
            }
        },
        Apriori::NaiveCyclic => (naive_cyclic_plan(pre1, params, net, horizon), "naive_cyclic"),
    };
    let mut plans: Vec<Vec<Vec<bool>>> = vec![apriori_plan; cfg.paths];
    let mut trace = LsmTrace { apriori: apriori_name.to_string(), steps: Vec::new() };

    for tau in (1..=horizon).rev() {
        let pres: Vec<Vec<f64>> = (0..cfg.paths).map(|p| pre_at(pre1, p, tau, &plans[p], paths, &q)).collect();
        let fits: Vec<Option<FitResult>> = (0..m)
            .map(|k| {
                if !net.arcs[k].demanded() {
                    return None;
                }
                if tau == horizon {
                    return Some(FitResult::zero(cfg.basis));
                }
                let mut xs = Vec::with_capacity(2 * cfg.paths);
                let mut ys = Vec::with_capacity(2 * cfg.paths);
                for p in 0..cfg.paths {
                    for x in [pres[p][k], q[k]] {
                        xs.push(x);
                        ys.push(outcome(x, p, k, tau, &plans[p], paths, cfg.rho[k]));
                    }
                }
                Some(fit(&xs, &ys, cfg.basis))
            })
            .collect();
        let payoff = |pre: &[f64]| -> Vec<f64> {
            (0..m)
                .map(|k| match &fits[k] {
                    None => 0.0,
                    Some(f) => {
                        let clamp = cfg.clamp.then_some(cfg.rho[k]);
                        predict(f, q[k], clamp) - predict(f, pre[k], clamp) + cfg.h[k] * (q[k] - pre[k])
                    }
                })
                .collect()
        };

        if tau == 1 {
            let pi = payoff(pre1);
            let decision = match routing.select(&pi)? {
                Some(d) => d,
                None => {
                    warn!("selective routing failed for the period decision; using the myopic fallback");
                    myopic_decide(pre1, &cfg.fallback_thresholds, routing)?
                }
            };
            if cfg.record_trace {
                trace.steps.push(TraceStep {
                    tau,
                    coefficients: fits
                        .iter()
                        .map(|f| f.as_ref().map(|f| f.coefficients.clone()).unwrap_or_default())
                        .collect(),
                    decisions: vec![selected_ids(&decision.y)],
                    solves: 1,
                });
            }
            return Ok((decision, cfg.record_trace.then_some(trace)));
        }

        let results: Vec<Result<(Vec<bool>, bool), PolicyError>> = pres
            .par_iter()
            .map(|pre| {
                let pi = payoff(pre);
                if pi.iter().zip(&net.arcs).all(|(p, a)| !a.demanded() || *p >= 0.0) {
                    return Ok((vec![false; m], false));
                }
                match routing.select(&pi)? {
                    Some(d) => Ok((d.y, true)),
                    None => {
                        debug!("selective routing infeasible on a sample path; keeping no-deploy");
                        Ok((vec![false; m], true))
                    }
                }
            })
            .collect();
        let mut solves = 0;
        for (p, res) in results.into_iter().enumerate() {
            let (y, solved) = res?;
            solves += usize::from(solved);
            plans[p][tau - 1] = y;
        }
        if cfg.record_trace {
            trace.steps.push(TraceStep {
                tau,
                coefficients: fits
                    .iter()
                    .map(|f| f.as_ref().map(|f| f.coefficients.clone()).unwrap_or_default())
                    .collect(),
                decisions: plans.iter().map(|plan| selected_ids(&plan[tau - 1])).collect(),
                solves,
            });
        }
    }
    unreachable!("the backward pass always reaches tau = 1")
}

fn selected_ids(y: &[bool]) -> Vec<usize> {
    y.iter().enumerate().filter(|(_, v)| **v).map(|(k, _)| k + 1).collect()
}
