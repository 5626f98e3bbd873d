//! Experiment outputs are independent of the worker count.

use sdairp_core::evaluation::{inventory_csv, run_experiment, summarize, ExperimentSpec};

const SPEC: &str = "\
nodes 3 depot 1 K 1 W 20 zeta 0
arc 1 2 c 2 e 0.2 q 1
arc 2 3 c 1 e 0.1 q 1
arc 1 3 c 3 e 0.3 q 1
ou 1 2 mu 0.4 theta 0.2 sigma 0.05 r0 0.4 s0 0.9
ou 2 3 mu 0.3 theta 0.1 sigma 0.1 r0 0.3 s0 0.6
ou 1 3 mu 0.2 theta 0.3 sigma 0 s0 1
holding 0.1
stockout 10
horizon 4
seeds 1..4
policy myopic myopic
policy lsm sdairp T 3 M 3 P 24
baseline myopic
";

fn outputs(threads: usize) -> (String, String, String) {
    let spec = ExperimentSpec::parse(SPEC).unwrap();
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| {
        let runs = run_experiment(&spec).unwrap();
        let summary = summarize(&spec, &runs).unwrap();
        (summary.to_csv(), serde_json::to_string(&summary).unwrap(), inventory_csv(&runs))
    })
}

#[test]
fn outputs_do_not_depend_on_threads() {
    assert_eq!(outputs(1), outputs(4));
}

#[test]
fn served_arcs_reset_to_capacity() {
    let spec = ExperimentSpec::parse(SPEC).unwrap();
    for run in run_experiment(&spec).unwrap() {
        for z in &run.realizations {
            for row in &z.inventory {
                if row.served {
                    assert_eq!(row.post, 1.0);
                } else {
                    assert_eq!(row.post, row.pre);
                }
                assert_eq!(row.stockout, row.pre < 0.0);
            }
        }
    }
}
