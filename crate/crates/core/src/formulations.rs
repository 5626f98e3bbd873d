//! MILP builders for the single-period arc routing model, the multi-period
//! arc-inventory routing model and the selective routing model, plus route
//! reconstruction from solver output.

use serde::{Deserialize, Serialize};

use sdairp_milp::{LinearModel, ObjSense, RowSense, VarId};

use crate::error::ModelError;
use crate::graph::{Network, NodeId, DEPOT};

/// One orientation of an undirected arc. Arc `k` yields directed arcs `2k`
/// (i to j) and `2k + 1` (j to i).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DirectedArc {
    pub tail: NodeId,
    pub head: NodeId,
    pub arc: usize,
}

pub fn directed_arcs(net: &Network) -> Vec<DirectedArc> {
    net.arcs
        .iter()
        .enumerate()
        .flat_map(|(k, a)| [DirectedArc { tail: a.i, head: a.j, arc: k }, DirectedArc { tail: a.j, head: a.i, arc: k }])
        .collect()
}

/// Routing variables of one period, indexed `[vehicle][directed arc]`.
#[derive(Debug, Clone)]
pub struct RoutingVars {
    pub x: Vec<Vec<VarId>>,
    pub l: Vec<Vec<VarId>>,
    pub f: Vec<Vec<VarId>>,
}

impl RoutingVars {
    /// `Σ_p (l_ij + l_ji)` terms for undirected arc `k`.
    fn service_terms(&self, k: usize, coef: f64) -> Vec<(VarId, f64)> {
        self.l.iter().flat_map(|lp| [(lp[2 * k], coef), (lp[2 * k + 1], coef)]).collect()
    }
}

/// Adds x, l, f for every vehicle with flow conservation, service implies
/// traversal, fuel capacity and the single-commodity connectivity flow.
fn add_routing_block(m: &mut LinearModel, net: &Network, dirs: &[DirectedArc], tag: &str) -> RoutingVars {
    let n = net.nodes;
    // Flow on any arc never exceeds the number of services, so the n^2
    // constant can be tightened to the demanded-arc count.
    let demanded = net.arcs.iter().filter(|a| a.demanded()).count();
    let cap = (n * n).min(demanded) as f64;
    let mut vars = RoutingVars { x: Vec::new(), l: Vec::new(), f: Vec::new() };
    for p in 1..=net.fleet_size {
        let mut xs = Vec::with_capacity(dirs.len());
        let mut ls = Vec::with_capacity(dirs.len());
        let mut fs = Vec::with_capacity(dirs.len());
        for d in dirs {
            let c = net.arcs[d.arc].c;
            xs.push(m.add_binary(format!("x{tag}_p{p}_{}_{}", d.tail, d.head), c));
            ls.push(m.add_binary(format!("l{tag}_p{p}_{}_{}", d.tail, d.head), 0.0));
            fs.push(m.add_continuous(format!("f{tag}_p{p}_{}_{}", d.tail, d.head), 0.0, f64::INFINITY, 0.0));
        }
        for i in 1..=n {
            let terms: Vec<_> = dirs
                .iter()
                .zip(&xs)
                .filter_map(|(d, &x)| match (d.head == i, d.tail == i) {
                    (true, _) => Some((x, 1.0)),
                    (_, true) => Some((x, -1.0)),
                    _ => None,
                })
                .collect();
            if !terms.is_empty() {
                m.add_constraint(format!("balance{tag}_p{p}_n{i}"), terms, RowSense::Eq, 0.0);
            }
        }
        for (k, d) in dirs.iter().enumerate() {
            m.add_constraint(
                format!("serve_implies_traverse{tag}_p{p}_{}_{}", d.tail, d.head),
                [(xs[k], 1.0), (ls[k], -1.0)],
                RowSense::Ge,
                0.0,
            );
        }
        let fuel: Vec<_> = dirs
            .iter()
            .enumerate()
            .flat_map(|(k, d)| {
                let a = &net.arcs[d.arc];
                [(xs[k], a.c), (ls[k], a.e)]
            })
            .collect();
        m.add_constraint(format!("fuel{tag}_p{p}"), fuel, RowSense::Le, net.fuel_capacity);
        for i in (1..=n).filter(|&i| i != DEPOT) {
            let mut terms = Vec::new();
            for (k, d) in dirs.iter().enumerate() {
                if d.tail == i {
                    terms.push((fs[k], 1.0));
                    terms.push((ls[k], -1.0));
                }
                if d.head == i {
                    terms.push((fs[k], -1.0));
                }
            }
            if !terms.is_empty() {
                m.add_constraint(format!("flow{tag}_p{p}_n{i}"), terms, RowSense::Eq, 0.0);
            }
        }
        for (k, d) in dirs.iter().enumerate() {
            m.add_constraint(
                format!("flow_cap{tag}_p{p}_{}_{}", d.tail, d.head),
                [(fs[k], 1.0), (xs[k], -cap)],
                RowSense::Le,
                0.0,
            );
        }
        vars.x.push(xs);
        vars.l.push(ls);
        vars.f.push(fs);
    }
    vars
}

/// A vehicle serving arc (i, j) travels at least the shortest closed walk
/// `d(depot, i) + c + d(j, depot)` (either orientation). Valid for every
/// integer solution. Only the multi-period model uses them: there they close
/// most of the gap, on single-period models the extra rows cost more than
/// they save.
fn add_route_length_cuts(m: &mut LinearModel, net: &Network, dirs: &[DirectedArc], vars: &RoutingVars, tag: &str) {
    let d = net.shortest_paths();
    for (k, a) in net.arcs.iter().enumerate() {
        if !a.demanded() {
            continue;
        }
        let depot = net.depot();
        let walk = (d[depot][a.i] + d[a.j][depot]).min(d[depot][a.j] + d[a.i][depot]) + a.c;
        if !walk.is_finite() || walk <= 0.0 {
            continue;
        }
        for p in 0..net.fleet_size {
            let mut terms: Vec<(VarId, f64)> =
                dirs.iter().enumerate().map(|(q, da)| (vars.x[p][q], net.arcs[da.arc].c)).collect();
            for (q, da) in dirs.iter().enumerate() {
                if da.arc == k {
                    terms.push((vars.l[p][q], -walk));
                }
            }
            m.add_constraint(format!("route_length{tag}_p{}_{}_{}", p + 1, a.i, a.j), terms, RowSense::Ge, 0.0);
        }
    }
}

/// Orders identical vehicles by fuel use, `fuel_p >= fuel_{p+1}`. Any
/// solution can be relabelled to satisfy it, so optima are unchanged; the
/// search no longer revisits permutations of the same routes.
pub fn add_vehicle_ordering(m: &mut LinearModel, net: &Network, dirs: &[DirectedArc], vars: &RoutingVars, tag: &str) {
    for p in 1..net.fleet_size {
        let mut terms = Vec::new();
        for (k, d) in dirs.iter().enumerate() {
            let a = &net.arcs[d.arc];
            terms.extend([
                (vars.x[p - 1][k], a.c),
                (vars.l[p - 1][k], a.e),
                (vars.x[p][k], -a.c),
                (vars.l[p][k], -a.e),
            ]);
        }
        m.add_constraint(format!("vehicle_order{tag}_p{p}"), terms, RowSense::Ge, 0.0);
    }
}

#[derive(Debug, Clone)]
pub struct CarpModel {
    pub model: LinearModel,
    pub vars: RoutingVars,
    pub dirs: Vec<DirectedArc>,
}

/// Single-period capacitated arc routing: every arc with `q = 1` is served
/// exactly once.
pub fn build_carp_model(net: &Network) -> Result<CarpModel, ModelError> {
    net.validate()?;
    let dirs = directed_arcs(net);
    let mut model = LinearModel::new(ObjSense::Minimize);
    let vars = add_routing_block(&mut model, net, &dirs, "");
    add_vehicle_ordering(&mut model, net, &dirs, &vars, "");
    for (k, a) in net.arcs.iter().enumerate() {
        model.add_constraint(
            format!("cover_{}_{}", a.i, a.j),
            vars.service_terms(k, 1.0),
            RowSense::Eq,
            f64::from(a.q),
        );
    }
    Ok(CarpModel { model, vars, dirs })
}

#[derive(Debug, Clone)]
pub struct AirpInstance {
    pub net: Network,
    pub horizon: usize,
    /// Holding cost per arc per period.
    pub h: Vec<f64>,
    /// Deterministic consumption rate per arc.
    pub r: Vec<f64>,
    /// Inventory at the start of the horizon.
    pub s0: Vec<f64>,
    pub big_m: f64,
}

impl AirpInstance {
    /// Uses the smallest safe big-M, `2 (max q + max r)`.
    pub fn new(net: Network, horizon: usize, h: Vec<f64>, r: Vec<f64>, s0: Vec<f64>) -> Self {
        let big_m = Self::min_big_m(&net, &r);
        Self { net, horizon, h, r, s0, big_m }
    }

    pub fn min_big_m(net: &Network, r: &[f64]) -> f64 {
        let max_q = net.arcs.iter().map(|a| f64::from(a.q)).fold(0.0, f64::max);
        let max_r = r.iter().copied().fold(0.0, f64::max);
        2.0 * (max_q + max_r)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        self.net.validate()?;
        let m = self.net.num_arcs();
        if self.horizon < 1 {
            return Err(ModelError::Instance("horizon must be at least 1".into()));
        }
        for (name, v) in [("h", &self.h), ("r", &self.r), ("s0", &self.s0)] {
            if v.len() != m {
                return Err(ModelError::Instance(format!("{name} has {} entries for {m} arcs", v.len())));
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(ModelError::Instance(format!("{name} has non-finite entries")));
            }
        }
        for (k, a) in self.net.arcs.iter().enumerate() {
            if self.s0[k] < 0.0 || self.s0[k] > f64::from(a.q) {
                return Err(ModelError::Instance(format!("s0 of arc ({},{}) outside [0, q]", a.i, a.j)));
            }
            if self.r[k] < 0.0 {
                return Err(ModelError::Instance(format!("negative rate on arc ({},{})", a.i, a.j)));
            }
        }
        if self.big_m < Self::min_big_m(&self.net, &self.r) {
            return Err(ModelError::Instance("big-M below 2 (max q + max r)".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct AirpModel {
    pub model: LinearModel,
    /// Routing variables for periods 1..=T (index 0 is period 1).
    pub periods: Vec<RoutingVars>,
    /// Inventory variables `[t][arc]` for t = 0..=T.
    pub s: Vec<Vec<VarId>>,
    pub dirs: Vec<DirectedArc>,
}

/// Multi-period deterministic arc-inventory routing. Holding cost is charged
/// on end-of-period inventory for periods 1..=T.
pub fn build_airp_model(inst: &AirpInstance) -> Result<AirpModel, ModelError> {
    inst.validate()?;
    let net = &inst.net;
    let dirs = directed_arcs(net);
    let big_m = inst.big_m;
    let mut model = LinearModel::new(ObjSense::Minimize);

    let mut s = Vec::with_capacity(inst.horizon + 1);
    s.push(
        net.arcs
            .iter()
            .enumerate()
            .map(|(k, a)| model.add_continuous(format!("s_t0_{}_{}", a.i, a.j), inst.s0[k], inst.s0[k], 0.0))
            .collect::<Vec<_>>(),
    );
    let mut periods = Vec::with_capacity(inst.horizon);
    for t in 1..=inst.horizon {
        let tag = format!("_t{t}");
        let vars = add_routing_block(&mut model, net, &dirs, &tag);
        // Without a recharge lockout the vehicles of one period are interchangeable.
        if net.recharge_periods == 0 {
            add_vehicle_ordering(&mut model, net, &dirs, &vars, &tag);
        }
        add_route_length_cuts(&mut model, net, &dirs, &vars, &tag);
        periods.push(vars);
        s.push(
            net.arcs
                .iter()
                .enumerate()
                .map(|(k, a)| model.add_continuous(format!("s{tag}_{}_{}", a.i, a.j), 0.0, f64::from(a.q), inst.h[k]))
                .collect(),
        );
    }

    for (k, a) in net.arcs.iter().enumerate() {
        for t in 0..=inst.horizon {
            model.add_constraint(format!("s_min_t{t}_{}_{}", a.i, a.j), [(s[t][k], 1.0)], RowSense::Ge, inst.r[k]);
        }
        for t in 1..=inst.horizon {
            let vars = &periods[t - 1];
            let served = vars.service_terms(k, 1.0);
            let name = |row: &str| format!("{row}_t{t}_{}_{}", a.i, a.j);
            model.add_constraint(name("serve_once"), served.clone(), RowSense::Le, 1.0);

            let mut lo = vec![(s[t - 1][k], 1.0), (s[t][k], -1.0)];
            lo.extend(vars.service_terms(k, big_m));
            model.add_constraint(name("deplete_lo"), lo, RowSense::Ge, inst.r[k]);

            let mut hi = vec![(s[t - 1][k], 1.0), (s[t][k], -1.0)];
            hi.extend(vars.service_terms(k, -big_m));
            model.add_constraint(name("deplete_hi"), hi, RowSense::Le, inst.r[k]);

            let mut refill = vec![(s[t][k], 1.0)];
            refill.extend(vars.service_terms(k, -big_m));
            model.add_constraint(name("refill"), refill, RowSense::Ge, f64::from(a.q) - big_m);
        }
    }

    add_service_windows(&mut model, inst, &periods);

    if net.recharge_periods > 0 {
        // Bound on depot departures by one vehicle within a period.
        let lock_m = dirs.iter().filter(|d| d.tail == DEPOT).count() as f64;
        let departures = |t: usize, p: usize| -> Vec<VarId> {
            dirs.iter().enumerate().filter(|(_, d)| d.tail == DEPOT).map(|(k, _)| periods[t - 1].x[p][k]).collect()
        };
        for p in 0..net.fleet_size {
            for t in 1..=inst.horizon {
                for tau in 1..=net.recharge_periods {
                    if t + tau > inst.horizon {
                        break;
                    }
                    let mut terms: Vec<_> = departures(t, p).into_iter().map(|v| (v, lock_m)).collect();
                    terms.extend(departures(t + tau, p).into_iter().map(|v| (v, 1.0)));
                    model.add_constraint(format!("recharge_p{}_t{t}_tau{tau}", p + 1), terms, RowSense::Le, lock_m);
                }
            }
        }
    }
    Ok(AirpModel { model, periods, s, dirs })
}

/// Valid inequalities implied by `s >= r`: an arc left unserved for more than
/// `(q - r) / r` consecutive periods runs dry, and the first service is due
/// once the initial stock is used up. They cut off no integer solution.
fn add_service_windows(model: &mut LinearModel, inst: &AirpInstance, periods: &[RoutingVars]) {
    const EPS: f64 = 1e-9;
    for (k, a) in inst.net.arcs.iter().enumerate() {
        let r = inst.r[k];
        if r <= EPS || !a.demanded() {
            continue;
        }
        let served = |from: usize, to: usize| -> Vec<(VarId, f64)> {
            (from..=to).flat_map(|t| periods[t - 1].service_terms(k, 1.0)).collect()
        };
        // Periods an arc can go unserved starting from stock s: s - n r >= r.
        let idle = |stock: f64| ((stock - r) / r + EPS).floor().max(0.0) as usize;
        let first = idle(inst.s0[k]) + 1;
        if first <= inst.horizon {
            model.add_constraint(format!("first_service_{}_{}", a.i, a.j), served(1, first), RowSense::Ge, 1.0);
        }
        let window = idle(f64::from(a.q)) + 1;
        for start in 1..=inst.horizon.saturating_sub(window) {
            let end = start + window;
            if end > inst.horizon {
                break;
            }
            // Serving at `start` forces another service within the next window.
            let mut terms = served(start + 1, end);
            terms.extend(periods[start - 1].service_terms(k, -1.0));
            model.add_constraint(format!("service_window_t{start}_{}_{}", a.i, a.j), terms, RowSense::Ge, 0.0);
        }
    }
}

impl AirpModel {
    /// Per-period routes of a solution.
    pub fn schedule(&self, net: &Network, values: &[f64]) -> Result<Vec<Routes>, ModelError> {
        self.periods.iter().map(|v| extract_routes(net, &self.dirs, v, values)).collect()
    }

    /// Inventory trajectory `[t][arc]`, t = 0..=T.
    pub fn inventories(&self, values: &[f64]) -> Vec<Vec<f64>> {
        self.s.iter().map(|row| row.iter().map(|v| values[v.0]).collect()).collect()
    }
}

#[derive(Debug, Clone)]
pub struct SvrpInstance {
    pub net: Network,
    /// Selection payoff per arc; negative values make service attractive.
    pub pi: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct SvrpModel {
    pub model: LinearModel,
    pub vars: RoutingVars,
    /// Selection variable per arc. Arcs with `q = 0` cannot be selected.
    pub y: Vec<VarId>,
    pub dirs: Vec<DirectedArc>,
}

/// Single-period selective routing: serve any subset of demanded arcs,
/// paying route cost plus the payoff of each selected arc.
pub fn build_svrp_model(inst: &SvrpInstance) -> Result<SvrpModel, ModelError> {
    let net = &inst.net;
    net.validate()?;
    if inst.pi.len() != net.num_arcs() {
        return Err(ModelError::Instance(format!("pi has {} entries for {} arcs", inst.pi.len(), net.num_arcs())));
    }
    if inst.pi.iter().any(|p| !p.is_finite()) {
        return Err(ModelError::Instance("pi has non-finite entries".into()));
    }
    let dirs = directed_arcs(net);
    let mut model = LinearModel::new(ObjSense::Minimize);
    let vars = add_routing_block(&mut model, net, &dirs, "");
    add_vehicle_ordering(&mut model, net, &dirs, &vars, "");
    let mut y = Vec::with_capacity(net.num_arcs());
    for (k, a) in net.arcs.iter().enumerate() {
        let yk =
            model.add_var(format!("y_{}_{}", a.i, a.j), 0.0, f64::from(a.q), sdairp_milp::VarKind::Binary, inst.pi[k]);
        let mut terms = vars.service_terms(k, 1.0);
        terms.push((yk, -1.0));
        model.add_constraint(format!("select_{}_{}", a.i, a.j), terms, RowSense::Eq, 0.0);
        y.push(yk);
    }
    Ok(SvrpModel { model, vars, y, dirs })
}

impl SvrpModel {
    pub fn selection(&self, values: &[f64]) -> Vec<bool> {
        self.y.iter().map(|v| values[v.0] > 0.5).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VehicleRoute {
    /// 1-based vehicle number.
    pub vehicle: usize,
    /// Closed walk starting and ending at the depot; empty if unused.
    pub walk: Vec<NodeId>,
    /// Served arcs in the direction of service.
    pub serviced: Vec<(NodeId, NodeId)>,
    pub fuel: f64,
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Routes {
    pub vehicles: Vec<VehicleRoute>,
    /// Total traversal cost X.
    pub cost: f64,
}

impl Routes {
    pub fn empty(fleet_size: usize) -> Self {
        Self {
            vehicles: (1..=fleet_size)
                .map(|vehicle| VehicleRoute { vehicle, walk: Vec::new(), serviced: Vec::new(), fuel: 0.0, cost: 0.0 })
                .collect(),
            cost: 0.0,
        }
    }

    /// Undirected arc indices served by any vehicle.
    pub fn served_arcs(&self, net: &Network) -> Vec<usize> {
        let mut out: Vec<usize> =
            self.vehicles.iter().flat_map(|v| v.serviced.iter()).filter_map(|&(i, j)| net.arc_index(i, j)).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn is_empty(&self) -> bool {
        self.vehicles.iter().all(|v| v.walk.is_empty())
    }
}

/// Rebuilds depot-rooted closed walks from the positive `x` of one period
/// (Hierholzer, lowest directed-arc index first).
pub fn extract_routes(
    net: &Network,
    dirs: &[DirectedArc],
    vars: &RoutingVars,
    values: &[f64],
) -> Result<Routes, ModelError> {
    let mut routes = Routes::empty(net.fleet_size);
    let mut total = 0.0;
    for (p, route) in routes.vehicles.iter_mut().enumerate() {
        let used: Vec<usize> = (0..dirs.len()).filter(|&k| values[vars.x[p][k].0] > 0.5).collect();
        for k in (0..dirs.len()).filter(|&k| values[vars.l[p][k].0] > 0.5) {
            if values[vars.x[p][k].0] <= 0.5 {
                return Err(ModelError::Inconsistent(format!("vehicle {} serves an untraversed arc", p + 1)));
            }
            route.serviced.push((dirs[k].tail, dirs[k].head));
            route.fuel += net.arcs[dirs[k].arc].e;
        }
        if used.is_empty() {
            if !route.serviced.is_empty() {
                return Err(ModelError::Inconsistent(format!("vehicle {} serves without moving", p + 1)));
            }
            continue;
        }
        let mut out_edges = vec![Vec::new(); net.nodes + 1];
        for &k in used.iter().rev() {
            out_edges[dirs[k].tail].push(k);
        }
        let mut stack = vec![DEPOT];
        let mut walk = Vec::with_capacity(used.len() + 1);
        while let Some(&u) = stack.last() {
            if let Some(k) = out_edges[u].pop() {
                stack.push(dirs[k].head);
            } else {
                walk.push(u);
                stack.pop();
            }
        }
        walk.reverse();
        if walk.len() != used.len() + 1 || out_edges.iter().any(|e| !e.is_empty()) {
            return Err(ModelError::Inconsistent(format!(
                "vehicle {} traverses arcs not forming one closed walk through the depot",
                p + 1
            )));
        }
        let cost: f64 = used.iter().map(|&k| net.arcs[dirs[k].arc].c).sum();
        route.walk = walk;
        route.cost = cost;
        route.fuel += cost;
        total += cost;
    }
    routes.cost = total;
    Ok(routes)
}

/// `Σ c·x` of one period's routing variables.
pub fn traversal_cost(net: &Network, dirs: &[DirectedArc], vars: &RoutingVars, values: &[f64]) -> f64 {
    vars.x
        .iter()
        .flat_map(|xs| xs.iter().zip(dirs))
        .filter(|(v, _)| values[v.0] > 0.5)
        .map(|(_, d)| net.arcs[d.arc].c)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_canonical;
    use sdairp_milp::{enumerate_oracle, solve_mip, SolveStatus, SolverConfig};

    fn two_node() -> Network {
        parse_canonical("nodes 2 depot 1 K 1 W 10 zeta 0\narc 1 2 c 3 e 0.5 q 1\n").unwrap()
    }

    #[test]
    fn out_and_back() {
        let net = two_node();
        let carp = build_carp_model(&net).unwrap();
        let sol = solve_mip(&carp.model, &SolverConfig::default()).unwrap();
        let oracle = enumerate_oracle(&carp.model).unwrap();
        assert_eq!(sol.objective, Some(6.0));
        assert_eq!(oracle.objective, Some(6.0));
        let routes = extract_routes(&net, &carp.dirs, &carp.vars, &sol.values).unwrap();
        assert_eq!(routes.vehicles[0].walk, vec![1, 2, 1]);
        assert_eq!(routes.vehicles[0].serviced.len(), 1);
        assert_eq!(routes.cost, 6.0);
        assert!((routes.vehicles[0].fuel - 6.5).abs() < 1e-12);
    }

    #[test]
    fn no_demand_costs_nothing() {
        let net = two_node().with_demands(&[0]);
        let carp = build_carp_model(&net).unwrap();
        let sol = solve_mip(&carp.model, &SolverConfig::default()).unwrap();
        assert_eq!(sol.objective, Some(0.0));
        assert!(sol.values.iter().all(|v| v.abs() < 1e-9));
        let routes = extract_routes(&net, &carp.dirs, &carp.vars, &sol.values).unwrap();
        assert!(routes.is_empty());
        assert_eq!(routes.vehicles.len(), 1);
    }

    #[test]
    fn fuel_too_small_is_infeasible() {
        let net = parse_canonical("nodes 2 depot 1 K 2 W 5 zeta 0\narc 1 2 c 3 e 0 q 1\n").unwrap();
        let carp = build_carp_model(&net).unwrap();
        assert_eq!(solve_mip(&carp.model, &SolverConfig::default()).unwrap().status, SolveStatus::Infeasible);
    }

    #[test]
    fn airp_single_period_holding_only() {
        let net = two_node();
        let inst = AirpInstance::new(net, 1, vec![0.1], vec![0.0], vec![1.0]);
        let m = build_airp_model(&inst).unwrap();
        let sol = solve_mip(&m.model, &SolverConfig::default()).unwrap();
        assert!((sol.objective.unwrap() - 0.1).abs() < 1e-9);
    }

    #[test]
    fn airp_rate_above_capacity_is_infeasible() {
        let net = two_node();
        let inst = AirpInstance::new(net, 1, vec![0.1], vec![1.5], vec![1.0]);
        let m = build_airp_model(&inst).unwrap();
        assert_eq!(solve_mip(&m.model, &SolverConfig::default()).unwrap().status, SolveStatus::Infeasible);
    }

    #[test]
    fn svrp_nonnegative_payoffs_select_nothing() {
        let net = two_node();
        let m = build_svrp_model(&SvrpInstance { net, pi: vec![0.5] }).unwrap();
        let sol = solve_mip(&m.model, &SolverConfig::default()).unwrap();
        assert_eq!(sol.objective, Some(0.0));
        assert_eq!(m.selection(&sol.values), vec![false]);
    }

    #[test]
    fn svrp_large_reward_selects() {
        let net = two_node();
        let m = build_svrp_model(&SvrpInstance { net, pi: vec![-20.0] }).unwrap();
        let sol = solve_mip(&m.model, &SolverConfig::default()).unwrap();
        assert_eq!(sol.objective, Some(-14.0));
        assert_eq!(m.selection(&sol.values), vec![true]);
    }
}
