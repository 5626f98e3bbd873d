//! Combinatorial reference solutions for tiny networks, independent of the
//! MILP models.

#![allow(dead_code)]

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

use proptest::prelude::*;
use sdairp_core::graph::{Arc, Network, DEPOT};

#[derive(PartialEq)]
struct Entry(f64, usize, u32);

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| (self.1, self.2).cmp(&(other.1, other.2)))
    }
}

/// Cheapest closed walk from the depot that serves every arc in `serve`
/// (Dijkstra over node x served-set). Other arcs may be deadheaded.
pub fn closed_walk_cost(net: &Network, serve: &[usize]) -> f64 {
    if serve.is_empty() {
        return 0.0;
    }
    let bit: HashMap<usize, u32> = serve.iter().enumerate().map(|(b, &k)| (k, 1u32 << b)).collect();
    let full = (1u32 << serve.len()) - 1;
    let mut best: HashMap<(usize, u32), f64> = HashMap::new();
    let mut heap = BinaryHeap::from([Entry(0.0, DEPOT, 0)]);
    best.insert((DEPOT, 0), 0.0);
    while let Some(Entry(d, u, mask)) = heap.pop() {
        if u == DEPOT && mask == full {
            return d;
        }
        if d > best[&(u, mask)] {
            continue;
        }
        for (k, a) in net.arcs.iter().enumerate() {
            let v = if a.i == u {
                a.j
            } else if a.j == u {
                a.i
            } else {
                continue;
            };
            let mut next = vec![mask];
            if let Some(&b) = bit.get(&k) {
                next.push(mask | b);
            }
            for m in next {
                let nd = d + a.c;
                if best.get(&(v, m)).is_none_or(|&old| nd < old) {
                    best.insert((v, m), nd);
                    heap.push(Entry(nd, v, m));
                }
            }
        }
    }
    f64::INFINITY
}

/// Optimal routing cost serving exactly `serve` with the fleet, every
/// vehicle within the fuel capacity. `None` when no assignment fits.
pub fn routing_oracle(net: &Network, serve: &[usize]) -> Option<f64> {
    let k = net.fleet_size;
    let n = serve.len();
    let mut memo: HashMap<u32, Option<f64>> = HashMap::new();
    let mut vehicle = |mask: u32| -> Option<f64> {
        *memo.entry(mask).or_insert_with(|| {
            let subset: Vec<usize> = (0..n).filter(|b| mask >> b & 1 == 1).map(|b| serve[b]).collect();
            let cost = closed_walk_cost(net, &subset);
            let fuel = cost + subset.iter().map(|&a| net.arcs[a].e).sum::<f64>();
            (cost.is_finite() && fuel <= net.fuel_capacity + 1e-9).then_some(cost)
        })
    };
    let mut best: Option<f64> = None;
    let total = k.pow(n as u32);
    for code in 0..total {
        let mut masks = vec![0u32; k];
        let mut c = code;
        for b in 0..n {
            masks[c % k] |= 1 << b;
            c /= k;
        }
        let mut sum = 0.0;
        let mut ok = true;
        for &m in &masks {
            match vehicle(m) {
                Some(v) => sum += v,
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok && best.is_none_or(|b| sum < b) {
            best = Some(sum);
        }
    }
    best
}

/// Cheapest schedule by brute force over service sets per period.
pub fn airp_reference(net: &Network, horizon: usize, h: &[f64], r: &[f64], s0: &[f64]) -> Option<f64> {
    let cand = demanded(net);
    let m = net.num_arcs();
    let q: Vec<f64> = net.arcs.iter().map(|a| f64::from(a.q)).collect();
    if (0..m).any(|k| s0[k] < r[k]) {
        return None;
    }
    let sets = 1usize << cand.len();
    let route: Vec<Option<f64>> = (0..sets)
        .map(|mask| {
            let subset: Vec<usize> = (0..cand.len()).filter(|b| mask >> b & 1 == 1).map(|b| cand[b]).collect();
            routing_oracle(net, &subset)
        })
        .collect();
    let mut best: Option<f64> = None;
    for code in 0..sets.pow(horizon as u32) {
        let mut s = s0.to_vec();
        let mut cost = 0.0;
        let mut c = code;
        let mut ok = true;
        for _ in 0..horizon {
            let mask = c % sets;
            c /= sets;
            let Some(x) = route[mask] else {
                ok = false;
                break;
            };
            cost += x;
            for k in 0..m {
                let served = cand.iter().position(|&a| a == k).is_some_and(|b| mask >> b & 1 == 1);
                s[k] = if served { q[k] } else { s[k] - r[k] };
                if s[k] < r[k] - 1e-9 {
                    ok = false;
                }
                cost += h[k] * s[k];
            }
            if !ok {
                break;
            }
        }
        if ok && best.is_none_or(|b| cost < b) {
            best = Some(cost);
        }
    }
    best
}

pub fn demanded(net: &Network) -> Vec<usize> {
    net.demanded_arcs().collect()
}

/// Connected networks with 2 to 4 nodes and at most `max_arcs` edges.
pub fn arb_network(max_arcs: usize, max_fleet: usize) -> impl Strategy<Value = Network> {
    (2usize..=4, 1..=max_fleet, 4u32..=40, any::<u64>()).prop_map(move |(nodes, fleet, w, bits)| {
        let mut pairs: Vec<(usize, usize)> = (2..=nodes).map(|v| (v - 1, v)).collect();
        for i in 1..=nodes {
            for j in i + 2..=nodes {
                pairs.push((i, j));
            }
        }
        let mut arcs = Vec::new();
        for (idx, (i, j)) in pairs.into_iter().enumerate() {
            let chunk = bits.rotate_left(idx as u32 * 9);
            // Keep the chain so the graph stays connected; extras are optional.
            if idx >= nodes - 1 && chunk & 1 == 0 {
                continue;
            }
            if arcs.len() == max_arcs {
                break;
            }
            let c = 1.0 + ((chunk >> 1) % 6) as f64;
            let e = 0.5 * ((chunk >> 4) % 3) as f64;
            let q = u8::from((chunk >> 6) % 4 != 0);
            arcs.push(Arc::new(i, j, c, e, q));
        }
        Network { nodes, arcs, fleet_size: fleet, fuel_capacity: f64::from(w), recharge_periods: 0 }
    })
}
