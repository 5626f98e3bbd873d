//! Policy comparison: ground-truth rate trajectories, receding-horizon
//! replay of each policy and per-period cost summaries.

use std::fmt::Write as _;
use std::time::Instant;

use log::info;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use sdairp_milp::{solve_mip, SolveStatus, SolverConfig};

use crate::error::{EvalError, ModelError, PolicyError};
use crate::formulations::{build_airp_model, AirpInstance, Routes};
use crate::graph::{parse_canonical, Network};
use crate::policy::{
    deplete, lsm_decide, myopic_decide, replenish, static_decide, Apriori, Decision, DecisionRecord, LsmTrace,
    RouteCache, SdairpConfig, StateSnapshot,
};
use crate::stochastic::{simulate_paths, OuParams};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArcSetup {
    pub ou: OuParams,
    pub s0: f64,
    pub h: f64,
    pub rho: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PolicyKind {
    /// Replays the deterministic multi-period schedule solved at the start.
    Static {
        node_limit: Option<u64>,
    },
    /// Threshold per arc; defaults to the arc's mean rate.
    Myopic {
        threshold: Option<f64>,
    },
    Sdairp {
        horizon: usize,
        basis: usize,
        paths: usize,
        apriori: Apriori,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicySpec {
    pub label: String,
    pub kind: PolicyKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub name: String,
    pub net: Network,
    pub arcs: Vec<ArcSetup>,
    /// Number of evaluated periods.
    pub horizon: usize,
    pub seeds: Vec<u64>,
    pub roster: Vec<PolicySpec>,
    pub baseline: Option<String>,
    /// Node budget for each routing solve.
    pub node_limit: Option<u64>,
}

fn syntax(line: usize, msg: impl Into<String>) -> EvalError {
    EvalError::Syntax { line, msg: msg.into() }
}

fn num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T, EvalError> {
    let tok = tok.ok_or_else(|| syntax(line, format!("missing value for {what}")))?;
    tok.parse().map_err(|_| syntax(line, format!("cannot parse {what} from '{tok}'")))
}

/// Keyword/value pairs following a record head.
fn pairs<'a>(toks: impl Iterator<Item = &'a str>, line: usize) -> Result<Vec<(&'a str, &'a str)>, EvalError> {
    let toks: Vec<&str> = toks.collect();
    if toks.len() % 2 != 0 {
        return Err(syntax(line, "expected keyword/value pairs"));
    }
    Ok(toks.chunks(2).map(|c| (c[0], c[1])).collect())
}

impl ExperimentSpec {
    /// Parses an experiment document. Besides the instance records
    /// (`nodes`, `arc`) it accepts:
    ///
    /// ```text
    /// name <word>
    /// ou <i> <j> mu <v> theta <v> sigma <v> r0 <v> s0 <v> [h <v>] [rho <v>]
    /// holding <h>
    /// stockout <rho>
    /// horizon <periods>
    /// seeds <a>..<b> | seeds <s1> <s2> ...
    /// node_limit <n>
    /// policy <label> static [node_limit <n>]
    /// policy <label> myopic [threshold <v>]
    /// policy <label> sdairp T <t> M <m> P <p> [apriori cyclic|airp] [apriori_nodes <n>]
    /// baseline <label>
    /// ```
    pub fn parse(text: &str) -> Result<Self, EvalError> {
        let mut instance = String::new();
        let mut name = String::from("experiment");
        let mut ou_lines: Vec<(usize, &str)> = Vec::new();
        let mut holding = 0.0;
        let mut stockout = None;
        let mut horizon = None;
        let mut seeds = Vec::new();
        let mut roster = Vec::new();
        let mut baseline = None;
        let mut node_limit = None;

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                instance.push('\n');
                continue;
            }
            let mut toks = body.split_whitespace();
            let head = toks.next().expect("non-empty line");
            match head {
                "nodes" | "arc" => {
                    instance.push_str(body);
                    instance.push('\n');
                    continue;
                }
                "name" => name = toks.next().ok_or_else(|| syntax(line, "missing name"))?.to_string(),
                "ou" => {
                    ou_lines.push((line, body));
                    continue;
                }
                "holding" => holding = num(toks.next(), line, "holding cost")?,
                "stockout" => stockout = Some(num::<f64>(toks.next(), line, "stock-out cost")?),
                "horizon" => horizon = Some(num::<usize>(toks.next(), line, "horizon")?),
                "node_limit" => node_limit = Some(num::<u64>(toks.next(), line, "node limit")?),
                "baseline" => baseline = Some(toks.next().ok_or_else(|| syntax(line, "missing baseline"))?.to_string()),
                "seeds" => {
                    let rest: Vec<&str> = toks.by_ref().collect();
                    if let [range] = rest.as_slice() {
                        if let Some((a, b)) = range.split_once("..") {
                            let a: u64 = num(Some(a), line, "seed range start")?;
                            let b: u64 = num(Some(b), line, "seed range end")?;
                            seeds.extend(a..=b);
                            continue;
                        }
                    }
                    for s in rest {
                        seeds.push(num(Some(s), line, "seed")?);
                    }
                }
                "policy" => {
                    let label = toks.next().ok_or_else(|| syntax(line, "missing policy label"))?.to_string();
                    let kind = toks.next().ok_or_else(|| syntax(line, "missing policy kind"))?;
                    let kv = pairs(toks.by_ref(), line)?;
                    let get = |k: &str| kv.iter().find(|(key, _)| *key == k).map(|(_, v)| *v);
                    for (k, _) in &kv {
                        let known: &[&str] = match kind {
                            "static" => &["node_limit"],
                            "myopic" => &["threshold"],
                            "sdairp" => &["T", "M", "P", "apriori", "apriori_nodes"],
                            _ => &[],
                        };
                        if !known.contains(k) {
                            return Err(syntax(line, format!("unknown {kind} option '{k}'")));
                        }
                    }
                    let kind = match kind {
                        "static" => PolicyKind::Static {
                            node_limit: get("node_limit").map(|v| num(Some(v), line, "node_limit")).transpose()?,
                        },
                        "myopic" => PolicyKind::Myopic {
                            threshold: get("threshold").map(|v| num(Some(v), line, "threshold")).transpose()?,
                        },
                        "sdairp" => {
                            let apriori_nodes: u64 = get("apriori_nodes")
                                .map(|v| num(Some(v), line, "apriori_nodes"))
                                .transpose()?
                                .unwrap_or(500);
                            let apriori = match get("apriori").unwrap_or("cyclic") {
                                "cyclic" => Apriori::NaiveCyclic,
                                "airp" => Apriori::Airp { node_limit: apriori_nodes },
                                other => return Err(syntax(line, format!("unknown a-priori plan '{other}'"))),
                            };
                            PolicyKind::Sdairp {
                                horizon: num(get("T"), line, "T")?,
                                basis: num(get("M"), line, "M")?,
                                paths: num(get("P"), line, "P")?,
                                apriori,
                            }
                        }
                        other => return Err(syntax(line, format!("unknown policy kind '{other}'"))),
                    };
                    roster.push(PolicySpec { label, kind });
                    continue;
                }
                other => return Err(syntax(line, format!("unknown record '{other}'"))),
            }
            if let Some(extra) = toks.next() {
                return Err(syntax(line, format!("unexpected token '{extra}'")));
            }
        }

        let net = parse_canonical(&instance)?;
        let mut arcs: Vec<Option<ArcSetup>> = vec![None; net.num_arcs()];
        for (line, body) in ou_lines {
            let mut toks = body.split_whitespace().skip(1);
            let i: usize = num(toks.next(), line, "arc tail")?;
            let j: usize = num(toks.next(), line, "arc head")?;
            let k = net.arc_index(i, j).ok_or_else(|| syntax(line, format!("no arc ({i},{j}) in the instance")))?;
            let kv = pairs(toks, line)?;
            let get = |key: &str| kv.iter().find(|(k, _)| *k == key).map(|(_, v)| *v);
            for (key, _) in &kv {
                if !["mu", "theta", "sigma", "r0", "s0", "h", "rho"].contains(key) {
                    return Err(syntax(line, format!("unknown arc parameter '{key}'")));
                }
            }
            let mu: f64 = num(get("mu"), line, "mu")?;
            let setup = ArcSetup {
                ou: OuParams::new(
                    mu,
                    num(get("theta"), line, "theta")?,
                    num(get("sigma"), line, "sigma")?,
                    get("r0").map(|v| num(Some(v), line, "r0")).transpose()?.unwrap_or(mu),
                ),
                s0: num(get("s0"), line, "s0")?,
                h: get("h").map(|v| num(Some(v), line, "h")).transpose()?.unwrap_or(f64::NAN),
                rho: get("rho").map(|v| num(Some(v), line, "rho")).transpose()?.unwrap_or(f64::NAN),
            };
            if arcs[k].replace(setup).is_some() {
                return Err(syntax(line, format!("arc ({i},{j}) configured twice")));
            }
        }
        let arcs = arcs
            .into_iter()
            .enumerate()
            .map(|(k, a)| {
                let a = a.ok_or_else(|| {
                    EvalError::Spec(format!("arc ({},{}) has no 'ou' record", net.arcs[k].i, net.arcs[k].j))
                })?;
                let rho = if a.rho.is_nan() {
                    stockout.ok_or_else(|| EvalError::Spec("missing stock-out cost".into()))?
                } else {
                    a.rho
                };
                let h = if a.h.is_nan() { holding } else { a.h };
                Ok(ArcSetup { rho, h, ..a })
            })
            .collect::<Result<Vec<_>, EvalError>>()?;
        let spec = ExperimentSpec {
            name,
            net,
            arcs,
            horizon: horizon.ok_or_else(|| EvalError::Spec("missing horizon".into()))?,
            seeds,
            roster,
            baseline,
            node_limit,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), EvalError> {
        if self.horizon < 1 {
            return Err(EvalError::Spec("horizon must be at least 1".into()));
        }
        if self.seeds.is_empty() {
            return Err(EvalError::Spec("no seeds".into()));
        }
        let mut sorted = self.seeds.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(EvalError::Spec("seeds must be distinct".into()));
        }
        if self.roster.is_empty() {
            return Err(EvalError::Spec("empty policy roster".into()));
        }
        let mut labels: Vec<&str> = self.roster.iter().map(|p| p.label.as_str()).collect();
        labels.sort_unstable();
        if labels.windows(2).any(|w| w[0] == w[1]) {
            return Err(EvalError::Spec("policy labels must be distinct".into()));
        }
        if let Some(b) = &self.baseline {
            if !self.roster.iter().any(|p| &p.label == b) {
                return Err(EvalError::Spec(format!("baseline '{b}' is not in the roster")));
            }
        }
        if self.arcs.len() != self.net.num_arcs() {
            return Err(EvalError::Spec("one arc setup per arc required".into()));
        }
        for (a, setup) in self.net.arcs.iter().zip(&self.arcs) {
            setup.ou.validate().map_err(|e| EvalError::Spec(format!("arc ({},{}): {e}", a.i, a.j)))?;
            if !(setup.s0 <= f64::from(a.q) && setup.s0.is_finite()) {
                return Err(EvalError::Spec(format!("arc ({},{}): s0 above q", a.i, a.j)));
            }
            if !(setup.h >= 0.0 && setup.rho >= 0.0) {
                return Err(EvalError::Spec(format!("arc ({},{}): costs must be non-negative", a.i, a.j)));
            }
        }
        for p in &self.roster {
            if let PolicyKind::Sdairp { horizon, basis, paths, .. } = p.kind {
                if horizon < 1 || basis < 1 || paths < 2 {
                    return Err(EvalError::Spec(format!("policy {}: need T >= 1, M >= 1, P >= 2", p.label)));
                }
            }
        }
        Ok(())
    }

    pub fn ou(&self) -> Vec<OuParams> {
        self.arcs.iter().map(|a| a.ou).collect()
    }

    pub fn h(&self) -> Vec<f64> {
        self.arcs.iter().map(|a| a.h).collect()
    }

    pub fn rho(&self) -> Vec<f64> {
        self.arcs.iter().map(|a| a.rho).collect()
    }

    pub fn q(&self) -> Vec<f64> {
        self.net.arcs.iter().map(|a| f64::from(a.q)).collect()
    }

    pub fn routing_solver(&self) -> SolverConfig {
        SolverConfig { node_limit: self.node_limit, ..SolverConfig::default() }
    }
}

/// SplitMix64 finaliser.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

const TRUTH_NAMESPACE: u64 = 0x7472_7574_6800_0000;
const INNER_NAMESPACE: u64 = 0x696e_6e65_7200_0000;

/// Seed of the realised rate trajectory for an experiment seed.
pub fn truth_seed(seed: u64) -> u64 {
    splitmix64(seed ^ TRUTH_NAMESPACE)
}

/// Seed of the policy's own sample paths at period `t`.
pub fn inner_seed(seed: u64, t: usize) -> u64 {
    splitmix64(splitmix64(seed ^ INNER_NAMESPACE).wrapping_add(t as u64))
}

/// A policy ready to run: static schedules are solved up front.
#[derive(Debug, Clone)]
pub enum Prepared {
    Static(Vec<Routes>),
    Myopic(Vec<f64>),
    Sdairp(SdairpConfig),
}

#[derive(Debug, Clone)]
pub struct PreparedPolicy {
    pub label: String,
    pub policy: Prepared,
}

/// Deterministic multi-period schedule at mean rates from the initial
/// inventories.
pub fn static_schedule(spec: &ExperimentSpec, node_limit: Option<u64>) -> Result<Vec<Routes>, EvalError> {
    let r: Vec<f64> = spec.arcs.iter().map(|a| a.ou.mu.max(0.0)).collect();
    let s0: Vec<f64> = spec.arcs.iter().map(|a| a.s0.max(0.0)).collect();
    let inst = AirpInstance::new(spec.net.clone(), spec.horizon, spec.h(), r, s0);
    let model = build_airp_model(&inst).map_err(PolicyError::from)?;
    let cfg = SolverConfig { node_limit, ..SolverConfig::default() };
    let sol = solve_mip(&model.model, &cfg).map_err(|e| PolicyError::from(ModelError::from(e)))?;
    info!("static schedule: {:?}, objective {:?}, {} nodes", sol.status, sol.objective, sol.nodes);
    match sol.status {
        SolveStatus::Optimal => {}
        SolveStatus::NodeLimit | SolveStatus::TimeLimit if sol.objective.is_some() => {
            log::warn!("static schedule not proven optimal ({:?})", sol.status);
        }
        status => return Err(EvalError::Spec(format!("static schedule unavailable: {status:?}"))),
    }
    Ok(model.schedule(&spec.net, &sol.values).map_err(PolicyError::from)?)
}

pub fn prepare(spec: &ExperimentSpec, policy: &PolicySpec) -> Result<PreparedPolicy, EvalError> {
    let thresholds: Vec<f64> = spec.arcs.iter().map(|a| a.ou.mu).collect();
    let prepared = match &policy.kind {
        PolicyKind::Static { node_limit } => Prepared::Static(static_schedule(spec, node_limit.or(spec.node_limit))?),
        PolicyKind::Myopic { threshold } => {
            Prepared::Myopic(threshold.map(|v| vec![v; spec.net.num_arcs()]).unwrap_or(thresholds))
        }
        PolicyKind::Sdairp { horizon, basis, paths, apriori } => Prepared::Sdairp(SdairpConfig {
            horizon: *horizon,
            paths: *paths,
            basis: *basis,
            rho: spec.rho(),
            h: spec.h(),
            apriori: apriori.clone(),
            fallback_thresholds: thresholds,
            clamp: true,
            record_trace: false,
        }),
    };
    Ok(PreparedPolicy { label: policy.label.clone(), policy: prepared })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InventoryRow {
    pub period: usize,
    /// 1-based arc number.
    pub arc: usize,
    pub i: usize,
    pub j: usize,
    pub rate: f64,
    pub pre: f64,
    pub post: f64,
    pub served: bool,
    pub stockout: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Realization {
    pub seed: u64,
    pub records: Vec<DecisionRecord>,
    pub inventory: Vec<InventoryRow>,
    /// Wall-clock seconds per decision; not part of any output file.
    #[serde(skip)]
    pub decision_seconds: Vec<f64>,
    #[serde(skip)]
    pub traces: Vec<LsmTrace>,
}

/// Runs one policy on the trajectory drawn from `seed`.
pub fn run_realization(
    spec: &ExperimentSpec,
    policy: &PreparedPolicy,
    seed: u64,
    routing: &RouteCache,
) -> Result<Realization, EvalError> {
    let ou = spec.ou();
    let (h, rho, q) = (spec.h(), spec.rho(), spec.q());
    let net = &spec.net;
    let mut out = Realization {
        seed,
        records: Vec::new(),
        inventory: Vec::new(),
        decision_seconds: Vec::new(),
        traces: Vec::new(),
    };
    if spec.horizon == 0 {
        return Ok(out);
    }
    let truth = simulate_paths(&ou, 1, spec.horizon, truth_seed(seed)).map_err(PolicyError::from)?;
    let mut s: Vec<f64> = spec.arcs.iter().map(|a| a.s0).collect();
    for t in 1..=spec.horizon {
        let r: Vec<f64> = (0..net.num_arcs()).map(|k| truth.rate(0, t, k)).collect();
        let (pre, flags) = deplete(&s, &r);
        let clock = Instant::now();
        let decision: Decision = match &policy.policy {
            Prepared::Static(schedule) => static_decide(schedule, t, net)?,
            Prepared::Myopic(thresholds) => myopic_decide(&pre, thresholds, routing)?,
            Prepared::Sdairp(cfg) => {
                let state = StateSnapshot::new(t, pre.clone(), r.clone(), net.fleet_size);
                let (d, trace) = lsm_decide(&state, &ou, cfg, routing, inner_seed(seed, t))?;
                out.traces.extend(trace);
                d
            }
        };
        out.decision_seconds.push(clock.elapsed().as_secs_f64());
        let post = replenish(&pre, &decision.y, &q);
        for (k, a) in net.arcs.iter().enumerate() {
            out.inventory.push(InventoryRow {
                period: t,
                arc: k + 1,
                i: a.i,
                j: a.j,
                rate: r[k],
                pre: pre[k],
                post: post[k],
                served: decision.y[k],
                stockout: flags[k],
            });
        }
        out.records.push(DecisionRecord::account(t, net, decision, &post, &flags, &h, &rho));
        s = post;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicyRun {
    pub label: String,
    pub realizations: Vec<Realization>,
}

/// Every policy of the roster on every seed. Realizations run in parallel;
/// results do not depend on the schedule.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<PolicyRun>, EvalError> {
    spec.validate()?;
    let routing = RouteCache::new(&spec.net, spec.routing_solver());
    spec.roster
        .iter()
        .map(|p| {
            let prepared = prepare(spec, p)?;
            let realizations = spec
                .seeds
                .par_iter()
                .map(|&seed| run_realization(spec, &prepared, seed, &routing))
                .collect::<Result<Vec<_>, _>>()?;
            info!("policy {} done", p.label);
            Ok(PolicyRun { label: p.label.clone(), realizations })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Costs {
    pub x: f64,
    pub h: f64,
    pub o: f64,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicySummary {
    pub policy: String,
    pub realizations: usize,
    /// Mean costs per period (index 0 is period 1).
    pub periods: Vec<Costs>,
    pub total: Costs,
    /// `(total - baseline) / baseline`; `None` when not applicable.
    pub delta_vs_baseline: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub baseline: Option<String>,
    pub policies: Vec<PolicySummary>,
}

/// Means over realizations per policy and period, with deltas against the
/// named baseline.
pub fn aggregate(runs: &[(String, Vec<Vec<DecisionRecord>>)], baseline: Option<&str>) -> Result<Summary, EvalError> {
    let mut policies = Vec::with_capacity(runs.len());
    for (label, ledgers) in runs {
        let first = ledgers.first().ok_or_else(|| EvalError::Spec(format!("policy {label} has no realizations")))?;
        let horizon = first.len();
        let mut periods = vec![Costs::default(); horizon];
        for ledger in ledgers {
            if ledger.len() != horizon {
                return Err(EvalError::HorizonMismatch(horizon, ledger.len()));
            }
            for (acc, rec) in periods.iter_mut().zip(ledger) {
                acc.x += rec.x;
                acc.h += rec.h;
                acc.o += rec.o;
            }
        }
        let n = ledgers.len() as f64;
        let mut total = Costs::default();
        for c in &mut periods {
            c.x /= n;
            c.h /= n;
            c.o /= n;
            c.total = c.x + c.h + c.o;
            total.x += c.x;
            total.h += c.h;
            total.o += c.o;
            total.total += c.total;
        }
        policies.push(PolicySummary {
            policy: label.clone(),
            realizations: ledgers.len(),
            periods,
            total,
            delta_vs_baseline: None,
        });
    }
    if let Some(b) = baseline {
        let base = policies
            .iter()
            .find(|p| p.policy == b)
            .map(|p| p.total.total)
            .ok_or_else(|| EvalError::Spec(format!("baseline '{b}' has no results")))?;
        for p in &mut policies {
            p.delta_vs_baseline = (base != 0.0).then(|| (p.total.total - base) / base);
        }
    }
    Ok(Summary { baseline: baseline.map(str::to_string), policies })
}

pub fn summarize(spec: &ExperimentSpec, runs: &[PolicyRun]) -> Result<Summary, EvalError> {
    let ledgers: Vec<(String, Vec<Vec<DecisionRecord>>)> =
        runs.iter().map(|r| (r.label.clone(), r.realizations.iter().map(|z| z.records.clone()).collect())).collect();
    aggregate(&ledgers, spec.baseline.as_deref())
}

/// `-27.6%`, or `n/a`.
pub fn format_delta(delta: Option<f64>) -> String {
    match delta {
        Some(d) => format!("{:.1}%", d * 100.0),
        None => "n/a".to_string(),
    }
}

impl Summary {
    /// `policy,period,X,H,O,total`, one row per period then a `total` row.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("policy,period,X,H,O,total\n");
        for p in &self.policies {
            for (t, c) in p.periods.iter().enumerate() {
                let _ = writeln!(s, "{},{},{:.6},{:.6},{:.6},{:.6}", p.policy, t + 1, c.x, c.h, c.o, c.total);
            }
            let c = &p.total;
            let _ = writeln!(s, "{},total,{:.6},{:.6},{:.6},{:.6}", p.policy, c.x, c.h, c.o, c.total);
        }
        s
    }
}

/// Per-period inventory log of every realization.
pub fn inventory_csv(runs: &[PolicyRun]) -> String {
    let mut s = String::from("policy,seed,period,arc,i,j,rate,pre,post,served,stockout\n");
    for run in runs {
        for z in &run.realizations {
            for row in &z.inventory {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{:.6},{:.6},{:.6},{},{}",
                    run.label,
                    z.seed,
                    row.period,
                    row.arc,
                    row.i,
                    row.j,
                    row.rate,
                    row.pre,
                    row.post,
                    u8::from(row.served),
                    u8::from(row.stockout)
                );
            }
        }
    }
    s
}
