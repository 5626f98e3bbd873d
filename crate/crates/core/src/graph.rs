//! Network model, the canonical line-oriented instance format and the
//! importer for the DeArmon/Golden `gdb` keyword files.

use std::collections::{HashSet, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::GraphError;

/// Node ids are 1-based; node 1 is the depot.
pub type NodeId = usize;

pub const DEPOT: NodeId = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub i: NodeId,
    pub j: NodeId,
    /// Fuel to traverse the arc.
    pub c: f64,
    /// Extra fuel to serve (monitor) it.
    pub e: f64,
    /// Binary demand flag.
    pub q: u8,
    /// Integer demand carried over from benchmark files.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub demand: Option<f64>,
}

impl Arc {
    pub fn new(i: NodeId, j: NodeId, c: f64, e: f64, q: u8) -> Self {
        Self { i, j, c, e, q, demand: None }
    }

    pub fn key(&self) -> (NodeId, NodeId) {
        (self.i.min(self.j), self.i.max(self.j))
    }

    pub fn demanded(&self) -> bool {
        self.q == 1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Network {
    pub nodes: usize,
    pub arcs: Vec<Arc>,
    pub fleet_size: usize,
    pub fuel_capacity: f64,
    pub recharge_periods: usize,
}

impl Network {
    pub fn depot(&self) -> NodeId {
        DEPOT
    }

    pub fn num_arcs(&self) -> usize {
        self.arcs.len()
    }

    pub fn arc_index(&self, i: NodeId, j: NodeId) -> Option<usize> {
        let key = (i.min(j), i.max(j));
        self.arcs.iter().position(|a| a.key() == key)
    }

    pub fn demanded_arcs(&self) -> impl Iterator<Item = usize> + '_ {
        self.arcs.iter().enumerate().filter(|(_, a)| a.demanded()).map(|(k, _)| k)
    }

    /// Same network with `q` replaced.
    pub fn with_demands(&self, q: &[u8]) -> Network {
        let mut net = self.clone();
        for (a, &qa) in net.arcs.iter_mut().zip(q) {
            a.q = qa;
        }
        net
    }

    pub fn validate(&self) -> Result<(), GraphError> {
        if self.arcs.is_empty() {
            return Err(GraphError::EmptyArcSet);
        }
        if self.nodes < 1 {
            return Err(GraphError::Invariant("network needs at least one node".into()));
        }
        if self.fleet_size < 1 {
            return Err(GraphError::Invariant("fleet size K must be at least 1".into()));
        }
        if !(self.fuel_capacity > 0.0 && self.fuel_capacity.is_finite()) {
            return Err(GraphError::Invariant("fuel capacity W must be positive".into()));
        }
        let mut seen = HashSet::new();
        for (k, a) in self.arcs.iter().enumerate() {
            let tag = format!("arc {} ({},{})", k + 1, a.i, a.j);
            if a.i < 1 || a.i > self.nodes || a.j < 1 || a.j > self.nodes {
                return Err(GraphError::Invariant(format!("{tag}: endpoint outside [1, {}]", self.nodes)));
            }
            if a.i == a.j {
                return Err(GraphError::Invariant(format!("{tag}: self-loop")));
            }
            if !seen.insert(a.key()) {
                return Err(GraphError::Invariant(format!("{tag}: duplicate undirected arc")));
            }
            if !(a.c > 0.0 && a.c.is_finite()) {
                return Err(GraphError::Invariant(format!("{tag}: traversal cost must be positive")));
            }
            if !(a.e >= 0.0 && a.e.is_finite()) {
                return Err(GraphError::Invariant(format!("{tag}: service cost must be non-negative")));
            }
            if a.q > 1 {
                return Err(GraphError::Invariant(format!("{tag}: demand flag must be 0 or 1")));
            }
        }
        let reach = self.reachable_from_depot();
        for a in self.arcs.iter().filter(|a| a.demanded()) {
            if !reach[a.i] || !reach[a.j] {
                return Err(GraphError::Invariant(format!(
                    "demanded arc ({},{}) is not connected to the depot",
                    a.i, a.j
                )));
            }
        }
        Ok(())
    }

    fn reachable_from_depot(&self) -> Vec<bool> {
        let mut adj = vec![Vec::new(); self.nodes + 1];
        for a in &self.arcs {
            adj[a.i].push(a.j);
            adj[a.j].push(a.i);
        }
        let mut seen = vec![false; self.nodes + 1];
        let mut queue = VecDeque::from([DEPOT]);
        seen[DEPOT] = true;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }

    /// Shortest traversal-cost distances between all node pairs (1-based).
    pub fn shortest_paths(&self) -> Vec<Vec<f64>> {
        let n = self.nodes;
        let mut d = vec![vec![f64::INFINITY; n + 1]; n + 1];
        for (u, row) in d.iter_mut().enumerate() {
            row[u] = 0.0;
        }
        for a in &self.arcs {
            d[a.i][a.j] = d[a.i][a.j].min(a.c);
            d[a.j][a.i] = d[a.j][a.i].min(a.c);
        }
        for k in 1..=n {
            for i in 1..=n {
                for j in 1..=n {
                    let via = d[i][k] + d[k][j];
                    if via < d[i][j] {
                        d[i][j] = via;
                    }
                }
            }
        }
        d
    }
}

fn syntax(line: usize, msg: impl Into<String>) -> GraphError {
    GraphError::Syntax { line, msg: msg.into() }
}

fn parse_num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T, GraphError> {
    let tok = tok.ok_or_else(|| syntax(line, format!("missing value for {what}")))?;
    tok.parse().map_err(|_| syntax(line, format!("cannot parse {what} from '{tok}'")))
}

fn expect_kw(tok: Option<&str>, kw: &str, line: usize) -> Result<(), GraphError> {
    match tok {
        Some(t) if t == kw => Ok(()),
        Some(t) => Err(syntax(line, format!("expected '{kw}', found '{t}'"))),
        None => Err(syntax(line, format!("expected '{kw}'"))),
    }
}

/// Parses the canonical instance document:
///
/// ```text
/// nodes <n> depot 1 K <k> W <w> zeta <z>
/// arc <i> <j> c <cost> e <cost> q <0|1> [d <demand>]
/// ```
///
/// `#` starts a comment.
pub fn parse_canonical(text: &str) -> Result<Network, GraphError> {
    let mut header: Option<(usize, usize, f64, usize)> = None;
    let mut arcs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let mut toks = body.split_whitespace();
        match toks.next() {
            Some("nodes") => {
                if header.is_some() {
                    return Err(syntax(line, "duplicate header"));
                }
                let n: usize = parse_num(toks.next(), line, "node count")?;
                expect_kw(toks.next(), "depot", line)?;
                let depot: usize = parse_num(toks.next(), line, "depot")?;
                if depot != DEPOT {
                    return Err(GraphError::Invariant(format!("depot must be node {DEPOT}, found {depot}")));
                }
                expect_kw(toks.next(), "K", line)?;
                let k = parse_num(toks.next(), line, "K")?;
                expect_kw(toks.next(), "W", line)?;
                let w = parse_num(toks.next(), line, "W")?;
                expect_kw(toks.next(), "zeta", line)?;
                let z = parse_num(toks.next(), line, "zeta")?;
                if let Some(t) = toks.next() {
                    return Err(syntax(line, format!("unexpected token '{t}'")));
                }
                header = Some((n, k, w, z));
            }
            Some("arc") => {
                let i = parse_num(toks.next(), line, "arc tail")?;
                let j = parse_num(toks.next(), line, "arc head")?;
                expect_kw(toks.next(), "c", line)?;
                let c = parse_num(toks.next(), line, "c")?;
                expect_kw(toks.next(), "e", line)?;
                let e = parse_num(toks.next(), line, "e")?;
                expect_kw(toks.next(), "q", line)?;
                let q: u8 = parse_num(toks.next(), line, "q")?;
                let mut arc = Arc::new(i, j, c, e, q);
                match toks.next() {
                    None => {}
                    Some("d") => arc.demand = Some(parse_num(toks.next(), line, "d")?),
                    Some(t) => return Err(syntax(line, format!("unexpected token '{t}'"))),
                }
                if let Some(t) = toks.next() {
                    return Err(syntax(line, format!("unexpected token '{t}'")));
                }
                arcs.push(arc);
            }
            Some(t) => return Err(syntax(line, format!("unknown record '{t}'"))),
            None => unreachable!(),
        }
    }
    let (nodes, fleet_size, fuel_capacity, recharge_periods) =
        header.ok_or_else(|| syntax(0, "missing 'nodes' header"))?;
    let net = Network { nodes, arcs, fleet_size, fuel_capacity, recharge_periods };
    net.validate()?;
    Ok(net)
}

/// Normalised canonical text for a network; inverse of [`parse_canonical`].
pub fn to_canonical(net: &Network) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "nodes {} depot {} K {} W {} zeta {}",
        net.nodes, DEPOT, net.fleet_size, net.fuel_capacity, net.recharge_periods
    );
    for a in &net.arcs {
        let _ = write!(s, "arc {} {} c {} e {} q {}", a.i, a.j, a.c, a.e, a.q);
        if let Some(d) = a.demand {
            let _ = write!(s, " d {}", d);
        }
        s.push('\n');
    }
    s
}

/// Imports a gdb benchmark file. Demands are kept as metadata with every
/// `q = 0`; call [`binarize_demands`] to turn them into service flags.
/// Service costs `e` are set to `service_ratio * c`.
pub fn import_gdb(text: &str, service_ratio: f64) -> Result<Network, GraphError> {
    let mut vertices: Option<usize> = None;
    let mut vehicles: Option<usize> = None;
    let mut capacity: Option<f64> = None;
    let mut required: Option<usize> = None;
    let mut non_required: Option<usize> = None;
    let mut depot = DEPOT;
    let mut in_list = false;
    let mut arcs: Vec<Arc> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.trim();
        if body.is_empty() {
            continue;
        }
        if body.starts_with('(') {
            if !in_list {
                return Err(syntax(line, "edge outside an edge list"));
            }
            let close = body.find(')').ok_or_else(|| syntax(line, "unterminated edge tuple"))?;
            let inner = &body[1..close];
            let mut ends = inner.split(',').map(str::trim);
            let i: usize = parse_num(ends.next(), line, "edge tail")?;
            let j: usize = parse_num(ends.next(), line, "edge head")?;
            let n = vertices.ok_or_else(|| syntax(line, "edge before VERTICES"))?;
            if i < 1 || i > n || j < 1 || j > n {
                return Err(GraphError::VertexOutOfRange { line, vertex: if i < 1 || i > n { i } else { j }, n });
            }
            let mut toks = body[close + 1..].split_whitespace();
            let mut cost = None;
            let mut demand = 0.0;
            while let Some(t) = toks.next() {
                match t.to_ascii_lowercase().as_str() {
                    "coste" | "cost" => cost = Some(parse_num::<f64>(toks.next(), line, "coste")?),
                    "demanda" | "demand" => demand = parse_num(toks.next(), line, "demanda")?,
                    other => return Err(GraphError::UnknownKeyword { line, keyword: other.to_string() }),
                }
            }
            let c = cost.ok_or_else(|| syntax(line, "edge without coste"))?;
            let mut arc = Arc::new(i, j, c, service_ratio * c, 0);
            arc.demand = Some(demand);
            arcs.push(arc);
            continue;
        }
        let (key, value) = match body.split_once(':') {
            Some((k, v)) => (k.trim().to_ascii_uppercase(), v.trim()),
            None if body.eq_ignore_ascii_case("END") => break,
            None => return Err(GraphError::UnknownKeyword { line, keyword: body.to_string() }),
        };
        in_list = false;
        match key.as_str() {
            "NOMBRE" | "NAME" | "COMENTARIO" | "COMMENT" | "TIPO_COSTES_ARISTAS" | "COSTE_TOTAL_REQ" => {}
            "VERTICES" => vertices = Some(parse_num(Some(value), line, "VERTICES")?),
            "ARISTAS_REQ" => required = Some(parse_num(Some(value), line, "ARISTAS_REQ")?),
            "ARISTAS_NOREQ" => non_required = Some(parse_num(Some(value), line, "ARISTAS_NOREQ")?),
            "VEHICULOS" => vehicles = Some(parse_num(Some(value), line, "VEHICULOS")?),
            "CAPACIDAD" => capacity = Some(parse_num(Some(value), line, "CAPACIDAD")?),
            "LISTA_ARISTAS_REQ" | "LISTA_ARISTAS_NOREQ" => in_list = true,
            "DEPOSITO" => depot = parse_num(Some(value), line, "DEPOSITO")?,
            _ => return Err(GraphError::UnknownKeyword { line, keyword: key }),
        }
    }
    let nodes = vertices.ok_or_else(|| syntax(0, "missing VERTICES"))?;
    if depot != DEPOT {
        return Err(GraphError::Invariant(format!("gdb depot must be vertex {DEPOT}, found {depot}")));
    }
    let expected = required.unwrap_or(0) + non_required.unwrap_or(0);
    if (required.is_some() || non_required.is_some()) && expected != arcs.len() {
        return Err(GraphError::Invariant(format!("file declares {expected} edges but lists {}", arcs.len())));
    }
    let net = Network {
        nodes,
        arcs,
        fleet_size: vehicles.ok_or_else(|| syntax(0, "missing VEHICULOS"))?,
        fuel_capacity: capacity.ok_or_else(|| syntax(0, "missing CAPACIDAD"))?,
        recharge_periods: 0,
    };
    net.validate()?;
    Ok(net)
}

/// `q = 1` wherever the carried demand is positive.
pub fn binarize_demands(net: &Network) -> Network {
    let mut out = net.clone();
    for a in &mut out.arcs {
        a.q = u8::from(a.demand.unwrap_or(0.0) > 0.0);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const MONROY_LAYOUT: &str = "\
# five-node layout
nodes 5 depot 1 K 2 W 50 zeta 0
arc 1 2 c 3 e 0.3 q 1
arc 1 3 c 4 e 0.4 q 1
arc 2 3 c 2 e 0.2 q 1
arc 2 4 c 3 e 0.3 q 1
arc 2 5 c 4 e 0.4 q 1
arc 3 4 c 3 e 0.3 q 1
arc 4 5 c 2 e 0.2 q 1
";

    #[test]
    fn monroy_layout_parses() {
        let net = parse_canonical(MONROY_LAYOUT).unwrap();
        assert_eq!(net.nodes, 5);
        assert_eq!(net.num_arcs(), 7);
        assert_eq!(net.arc_index(4, 2), Some(3));
    }

    #[test]
    fn empty_arc_set_rejected() {
        let err = parse_canonical("nodes 3 depot 1 K 1 W 5 zeta 0\n").unwrap_err();
        assert!(matches!(err, GraphError::EmptyArcSet));
        assert_eq!(err.to_string(), "empty arc set");
    }

    #[test]
    fn round_trip_is_normalised() {
        let net = parse_canonical(MONROY_LAYOUT).unwrap();
        let text = to_canonical(&net);
        assert!(!text.contains('#'));
        assert_eq!(to_canonical(&parse_canonical(&text).unwrap()), text);
        assert_eq!(parse_canonical(&text).unwrap(), net);
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let doc = "nodes 3 depot 1 K 1 W 5 zeta 0\narc 1 2 c x e 0 q 1\n";
        match parse_canonical(doc).unwrap_err() {
            GraphError::Syntax { line, .. } => assert_eq!(line, 2),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn invariants_are_named() {
        let dup = "nodes 3 depot 1 K 1 W 5 zeta 0\narc 1 2 c 1 e 0 q 1\narc 2 1 c 1 e 0 q 1\n";
        assert!(parse_canonical(dup).unwrap_err().to_string().contains("duplicate"));
        let self_loop = "nodes 3 depot 1 K 1 W 5 zeta 0\narc 2 2 c 1 e 0 q 1\n";
        assert!(parse_canonical(self_loop).unwrap_err().to_string().contains("self-loop"));
        let zero_cost = "nodes 3 depot 1 K 1 W 5 zeta 0\narc 1 2 c 0 e 0 q 1\n";
        assert!(parse_canonical(zero_cost).unwrap_err().to_string().contains("positive"));
        let far = "nodes 3 depot 1 K 1 W 5 zeta 0\narc 1 4 c 1 e 0 q 1\n";
        assert!(parse_canonical(far).unwrap_err().to_string().contains("outside"));
    }

    #[test]
    fn disconnected_demand_is_rejected() {
        let doc = "nodes 4 depot 1 K 1 W 5 zeta 0\narc 1 2 c 1 e 0 q 0\narc 3 4 c 1 e 0 q 1\n";
        assert!(parse_canonical(doc).unwrap_err().to_string().contains("not connected"));
    }

    #[test]
    fn binarize_examples() {
        let mut net = parse_canonical(
            "nodes 3 depot 1 K 1 W 5 zeta 0\narc 1 2 c 1 e 0 q 0 d 0\narc 2 3 c 1 e 0 q 0 d 5\narc 1 3 c 1 e 0 q 0 d 2\n",
        )
        .unwrap();
        let q: Vec<u8> = binarize_demands(&net).arcs.iter().map(|a| a.q).collect();
        assert_eq!(q, vec![0, 1, 1]);
        for a in &mut net.arcs {
            a.demand = Some(0.0);
        }
        assert!(binarize_demands(&net).arcs.iter().all(|a| a.q == 0));
    }

    #[test]
    fn gdb_errors() {
        let bad_kw = "VERTICES : 3\nFOO : 1\n";
        assert!(matches!(import_gdb(bad_kw, 0.0), Err(GraphError::UnknownKeyword { .. })));
        let far = "VERTICES : 3\nVEHICULOS : 1\nCAPACIDAD : 5\nLISTA_ARISTAS_REQ :\n ( 1, 4) coste 1 demanda 1\n";
        assert!(matches!(import_gdb(far, 0.0), Err(GraphError::VertexOutOfRange { vertex: 4, .. })));
    }
}
