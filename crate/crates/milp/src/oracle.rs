use std::time::Instant;

use crate::branch::{MipSolution, SolveStatus};
use crate::error::MilpError;
use crate::model::{LinearModel, ObjSense, VarKind};
use crate::simplex::{LpOutcome, Simplex};

pub const MAX_ENUMERATED_BINARIES: usize = 25;

/// Exhaustive reference solver: walks every binary assignment in Gray-code
/// order. Pure-binary models are checked by direct evaluation of the rows;
/// otherwise the residual LP over the continuous variables is solved.
pub fn enumerate_oracle(model: &LinearModel) -> Result<MipSolution, MilpError> {
    model.validate()?;
    let start = Instant::now();
    let bins = model.binary_ids();
    if bins.len() > MAX_ENUMERATED_BINARIES {
        return Err(MilpError::TooManyBinaries { found: bins.len(), max: MAX_ENUMERATED_BINARIES });
    }
    let n = model.num_vars();
    let sign = match model.sense {
        ObjSense::Minimize => 1.0,
        ObjSense::Maximize => -1.0,
    };
    let pure = model.variables.iter().all(|v| v.kind == VarKind::Binary);
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut evaluated = 0u64;
    let mut unbounded = false;

    let mut x = vec![0.0; n];
    let mut lp = if pure { None } else { Some(Simplex::new(model)) };
    let total: u64 = 1u64 << bins.len();
    for code in 0..total {
        let gray = code ^ (code >> 1);
        for (k, b) in bins.iter().enumerate() {
            x[b.0] = ((gray >> k) & 1) as f64;
        }
        // Skip assignments outside the declared binary bounds.
        if bins.iter().any(|b| {
            let v = &model.variables[b.0];
            x[b.0] < v.lower || x[b.0] > v.upper
        }) {
            continue;
        }
        evaluated += 1;
        let candidate = match lp.as_mut() {
            None => {
                if model.max_violation(&x) > 1e-9 {
                    continue;
                }
                (sign * model.objective_value(&x), x.clone())
            }
            Some(lp) => {
                for b in &bins {
                    lp.set_bounds(b.0, x[b.0], x[b.0]);
                }
                match lp.solve() {
                    LpOutcome::Optimal => {
                        let mut vals = lp.values().to_vec();
                        for b in &bins {
                            vals[b.0] = x[b.0];
                        }
                        (lp.objective(), vals)
                    }
                    LpOutcome::Infeasible => continue,
                    LpOutcome::Unbounded => {
                        unbounded = true;
                        break;
                    }
                    LpOutcome::IterationLimit => {
                        lp.reset();
                        match lp.solve() {
                            LpOutcome::Optimal => (lp.objective(), lp.values().to_vec()),
                            LpOutcome::Infeasible => continue,
                            _ => return Err(MilpError::Numerical("residual LP did not converge".into())),
                        }
                    }
                }
            }
        };
        if best.as_ref().is_none_or(|(b, _)| candidate.0 < b - 1e-9) {
            best = Some(candidate);
        }
    }

    let mut sol = match (unbounded, best) {
        (true, _) => MipSolution::empty(SolveStatus::Unbounded, n),
        (false, None) => MipSolution::empty(SolveStatus::Infeasible, n),
        (false, Some((obj, vals))) => {
            let mut s = MipSolution::empty(SolveStatus::Optimal, n);
            s.objective = Some(sign * obj);
            s.best_bound = s.objective;
            s.values = vals;
            s
        }
    };
    sol.nodes = evaluated;
    sol.wall_time = start.elapsed();
    Ok(sol)
}
