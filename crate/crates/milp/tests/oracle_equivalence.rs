use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sdairp_milp::{enumerate_oracle, solve_lp, solve_mip, LinearModel, ObjSense, RowSense, SolveStatus, SolverConfig};

/// Random mixed model: `nb` binaries, `nc` bounded continuous variables,
/// integer-ish coefficients so ties and degeneracy show up.
fn random_model(seed: u64, nb: usize, nc: usize) -> LinearModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sense = if rng.random_bool(0.5) { ObjSense::Minimize } else { ObjSense::Maximize };
    let mut m = LinearModel::new(sense);
    let mut vars = Vec::new();
    for i in 0..nb {
        vars.push(m.add_binary(format!("b{i}"), rng.random_range(-5..=5) as f64));
    }
    for i in 0..nc {
        let ub = rng.random_range(1..=6) as f64;
        vars.push(m.add_continuous(format!("c{i}"), 0.0, ub, rng.random_range(-3..=3) as f64 * 0.5));
    }
    let rows = rng.random_range(1..=(nb + nc).max(2));
    for r in 0..rows {
        let mut terms = Vec::new();
        for &v in &vars {
            if rng.random_bool(0.6) {
                terms.push((v, rng.random_range(-4..=6) as f64));
            }
        }
        let sense = match rng.random_range(0..5) {
            0 => RowSense::Ge,
            1 => RowSense::Eq,
            _ => RowSense::Le,
        };
        let rhs = match sense {
            RowSense::Eq => terms.iter().filter(|_| rng.random_bool(0.5)).map(|t| t.1).sum::<f64>(),
            _ => rng.random_range(-2..=8) as f64,
        };
        m.add_constraint(format!("r{r}"), terms, sense, rhs);
    }
    m
}

fn check(seed: u64, nb: usize, nc: usize) {
    let m = random_model(seed, nb, nc);
    let cfg = SolverConfig { record_trace: true, ..SolverConfig::default() };
    let bb = solve_mip(&m, &cfg).unwrap();
    let or = enumerate_oracle(&m).unwrap();
    assert_eq!(bb.status, or.status, "seed {seed}: status mismatch");
    if or.status == SolveStatus::Optimal {
        let (a, b) = (bb.objective.unwrap(), or.objective.unwrap());
        assert!((a - b).abs() < 1e-6, "seed {seed}: b&b {a} vs oracle {b}");
        assert!(m.is_feasible(&bb.values, 1e-6, 1e-6), "seed {seed}: b&b point infeasible");
        let lp = solve_lp(&m).unwrap();
        let relax = lp.objective.unwrap();
        match m.sense {
            ObjSense::Minimize => assert!(relax <= b + 1e-7),
            ObjSense::Maximize => assert!(relax >= b - 1e-7),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn branch_and_bound_matches_enumeration(seed in any::<u64>(), nb in 0usize..=10, nc in 0usize..=4) {
        check(seed, nb, nc);
    }
}

#[test]
fn knapsack_ten_items() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let mut m = LinearModel::new(ObjSense::Maximize);
        let items: Vec<_> = (0..10)
            .map(|i| {
                let w = rng.random_range(1..=20) as f64;
                let v = m.add_binary(format!("x{i}"), rng.random_range(1..=30) as f64);
                (v, w)
            })
            .collect();
        let cap = items.iter().map(|t| t.1).sum::<f64>() / 2.0;
        m.add_constraint("cap", items.clone(), RowSense::Le, cap.floor());
        let a = solve_mip(&m, &SolverConfig::default()).unwrap();
        let b = enumerate_oracle(&m).unwrap();
        assert_eq!(a.objective, b.objective);
    }
}

#[test]
fn node_count_is_deterministic() {
    let m = random_model(99, 12, 3);
    let a = solve_mip(&m, &SolverConfig::default()).unwrap();
    let b = solve_mip(&m, &SolverConfig::default()).unwrap();
    assert_eq!(a.nodes, b.nodes);
    assert_eq!(a.objective, b.objective);
    assert_eq!(a.values, b.values);
}
