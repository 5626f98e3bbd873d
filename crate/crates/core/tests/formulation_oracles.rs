//! Routing models against exhaustive combinatorial references.

mod common;

use common::{arb_network, demanded, routing_oracle};
use proptest::prelude::*;
use sdairp_core::formulations::{build_carp_model, build_svrp_model, extract_routes, traversal_cost, SvrpInstance};
use sdairp_core::graph::DEPOT;
use sdairp_core::policy::{select_direct, RouteCache};
use sdairp_milp::{solve_mip, SolveStatus, SolverConfig};

const TOL: f64 = 1e-6;

fn carp_optimum(net: &sdairp_core::graph::Network) -> Option<f64> {
    let m = build_carp_model(net).unwrap();
    let sol = solve_mip(&m.model, &SolverConfig::default()).unwrap();
    match sol.status {
        SolveStatus::Optimal => sol.objective,
        SolveStatus::Infeasible => None,
        other => panic!("unexpected status {other:?}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 96, ..ProptestConfig::default() })]

    #[test]
    fn carp_matches_reference(net in arb_network(5, 2)) {
        let reference = routing_oracle(&net, &demanded(&net));
        let m = build_carp_model(&net).unwrap();
        let sol = solve_mip(&m.model, &SolverConfig::default()).unwrap();
        match reference {
            None => prop_assert_eq!(sol.status, SolveStatus::Infeasible),
            Some(z) => {
                prop_assert_eq!(sol.status, SolveStatus::Optimal);
                let obj = sol.objective.unwrap();
                prop_assert!((obj - z).abs() < TOL, "model {} vs reference {}", obj, z);
                let routes = extract_routes(&net, &m.dirs, &m.vars, &sol.values).unwrap();
                prop_assert!((routes.cost - traversal_cost(&net, &m.dirs, &m.vars, &sol.values)).abs() < TOL);
                prop_assert!((routes.cost - obj).abs() < TOL);
                let mut served = routes.served_arcs(&net);
                served.sort_unstable();
                prop_assert_eq!(served, demanded(&net));
                for v in routes.vehicles.iter().filter(|v| !v.walk.is_empty()) {
                    prop_assert_eq!(v.walk.first(), Some(&DEPOT));
                    prop_assert_eq!(v.walk.last(), Some(&DEPOT));
                    prop_assert!(v.fuel <= net.fuel_capacity + TOL);
                    for w in v.walk.windows(2) {
                        prop_assert!(net.arc_index(w[0], w[1]).is_some());
                    }
                }
            }
        }
    }

    #[test]
    fn carp_monotone_in_fuel(net in arb_network(4, 2), extra in 1u32..20) {
        let tight = carp_optimum(&net);
        let mut loose = net.clone();
        loose.fuel_capacity += f64::from(extra);
        let relaxed = carp_optimum(&loose);
        if let Some(z) = tight {
            let r = relaxed.expect("more fuel cannot make a feasible instance infeasible");
            prop_assert!(r <= z + TOL);
        }
    }

    #[test]
    fn selective_routing_decomposes(net in arb_network(4, 2), raw in prop::collection::vec(-12i32..6, 4)) {
        let pi: Vec<f64> = (0..net.num_arcs()).map(|k| f64::from(raw[k % raw.len()])).collect();
        let cand = demanded(&net);
        let mut reference = 0.0f64;
        for mask in 0u32..(1 << cand.len()) {
            let subset: Vec<usize> = (0..cand.len()).filter(|b| mask >> b & 1 == 1).map(|b| cand[b]).collect();
            if let Some(cost) = routing_oracle(&net, &subset) {
                reference = reference.min(cost + subset.iter().map(|&k| pi[k]).sum::<f64>());
            }
        }
        let model = build_svrp_model(&SvrpInstance { net: net.clone(), pi: pi.clone() }).unwrap();
        let sol = solve_mip(&model.model, &SolverConfig::default()).unwrap();
        prop_assert_eq!(sol.status, SolveStatus::Optimal);
        prop_assert!((sol.objective.unwrap() - reference).abs() < TOL, "{:?} vs {}", sol.objective, reference);

        let score = |d: &sdairp_core::policy::Decision| {
            d.routes.cost + d.y.iter().zip(&pi).filter(|(y, _)| **y).map(|(_, p)| p).sum::<f64>()
        };
        let direct = select_direct(&net, &pi, &SolverConfig::default()).unwrap().unwrap();
        let cache = RouteCache::new(&net, SolverConfig::default());
        let enumerated = cache.select(&pi).unwrap().unwrap();
        prop_assert!((score(&direct) - reference).abs() < TOL);
        prop_assert!((score(&enumerated) - reference).abs() < TOL);
        prop_assert_eq!(enumerated.routes.served_arcs(&net).len(), enumerated.y.iter().filter(|y| **y).count());
    }
}
