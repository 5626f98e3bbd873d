use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::MilpError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VarKind {
    Continuous,
    Binary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RowSense {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ObjSense {
    Minimize,
    Maximize,
}

/// Handle to a variable inside a [`LinearModel`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VarId(pub usize);

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    pub lower: f64,
    pub upper: f64,
    pub kind: VarKind,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Constraint {
    pub name: String,
    pub terms: Vec<(VarId, f64)>,
    pub sense: RowSense,
    pub rhs: f64,
}

/// A mixed binary linear program.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LinearModel {
    pub variables: Vec<Variable>,
    pub constraints: Vec<Constraint>,
    pub objective: Vec<f64>,
    pub sense: ObjSense,
}

impl Default for LinearModel {
    fn default() -> Self {
        Self::new(ObjSense::Minimize)
    }
}

impl LinearModel {
    pub fn new(sense: ObjSense) -> Self {
        Self { variables: Vec::new(), constraints: Vec::new(), objective: Vec::new(), sense }
    }

    pub fn add_var(&mut self, name: impl Into<String>, lower: f64, upper: f64, kind: VarKind, obj: f64) -> VarId {
        let id = VarId(self.variables.len());
        self.variables.push(Variable { name: name.into(), lower, upper, kind });
        self.objective.push(obj);
        id
    }

    pub fn add_binary(&mut self, name: impl Into<String>, obj: f64) -> VarId {
        self.add_var(name, 0.0, 1.0, VarKind::Binary, obj)
    }

    pub fn add_continuous(&mut self, name: impl Into<String>, lower: f64, upper: f64, obj: f64) -> VarId {
        self.add_var(name, lower, upper, VarKind::Continuous, obj)
    }

    /// Adds a row, merging repeated variables and dropping zero coefficients.
    pub fn add_constraint(
        &mut self,
        name: impl Into<String>,
        terms: impl IntoIterator<Item = (VarId, f64)>,
        sense: RowSense,
        rhs: f64,
    ) -> usize {
        let mut merged: Vec<(VarId, f64)> = Vec::new();
        for (v, a) in terms {
            match merged.iter_mut().find(|(w, _)| *w == v) {
                Some(slot) => slot.1 += a,
                None => merged.push((v, a)),
            }
        }
        merged.retain(|&(_, a)| a != 0.0);
        merged.sort_by_key(|&(v, _)| v);
        self.constraints.push(Constraint { name: name.into(), terms: merged, sense, rhs });
        self.constraints.len() - 1
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn num_binaries(&self) -> usize {
        self.variables.iter().filter(|v| v.kind == VarKind::Binary).count()
    }

    pub fn binary_ids(&self) -> Vec<VarId> {
        self.variables.iter().enumerate().filter(|(_, v)| v.kind == VarKind::Binary).map(|(i, _)| VarId(i)).collect()
    }

    pub fn var_by_name(&self, name: &str) -> Option<VarId> {
        self.variables.iter().position(|v| v.name == name).map(VarId)
    }

    pub fn validate(&self) -> Result<(), MilpError> {
        if self.objective.len() != self.variables.len() {
            return Err(MilpError::InvalidModel("objective length differs from variable count".into()));
        }
        for (i, v) in self.variables.iter().enumerate() {
            if v.lower.is_nan() || v.upper.is_nan() || v.lower > v.upper {
                return Err(MilpError::InvalidModel(format!(
                    "variable {} ({}) has inconsistent bounds [{}, {}]",
                    i, v.name, v.lower, v.upper
                )));
            }
            if v.kind == VarKind::Binary && (v.lower < 0.0 || v.upper > 1.0) {
                return Err(MilpError::InvalidModel(format!("binary variable {} has bounds outside [0,1]", v.name)));
            }
            if !self.objective[i].is_finite() {
                return Err(MilpError::InvalidModel(format!("objective coefficient of {} is not finite", v.name)));
            }
        }
        for c in &self.constraints {
            if !c.rhs.is_finite() {
                return Err(MilpError::InvalidModel(format!("constraint {} has a non-finite rhs", c.name)));
            }
            for &(v, a) in &c.terms {
                if v.0 >= self.variables.len() {
                    return Err(MilpError::InvalidModel(format!("constraint {} references unknown variable", c.name)));
                }
                if !a.is_finite() {
                    return Err(MilpError::InvalidModel(format!("constraint {} has a non-finite coefficient", c.name)));
                }
            }
        }
        Ok(())
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    pub fn row_activity(&self, row: usize, x: &[f64]) -> f64 {
        self.constraints[row].terms.iter().map(|&(v, a)| a * x[v.0]).sum()
    }

    /// Largest bound or row violation of `x`, scaled per row by its coefficient magnitude.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for (v, &xv) in self.variables.iter().zip(x) {
            worst = worst.max(v.lower - xv).max(xv - v.upper);
        }
        for (r, c) in self.constraints.iter().enumerate() {
            let act = self.row_activity(r, x);
            let scale = c.terms.iter().map(|t| t.1.abs()).fold(1.0, f64::max);
            let viol = match c.sense {
                RowSense::Le => act - c.rhs,
                RowSense::Ge => c.rhs - act,
                RowSense::Eq => (act - c.rhs).abs(),
            };
            worst = worst.max(viol / scale);
        }
        worst
    }

    pub fn is_feasible(&self, x: &[f64], feas_tol: f64, int_tol: f64) -> bool {
        if x.len() != self.variables.len() || self.max_violation(x) > feas_tol {
            return false;
        }
        self.variables.iter().zip(x).all(|(v, &xv)| v.kind == VarKind::Continuous || (xv - xv.round()).abs() <= int_tol)
    }

    /// Copy with every binary relaxed to a continuous variable on the same bounds.
    pub fn relaxed(&self) -> LinearModel {
        let mut m = self.clone();
        for v in &mut m.variables {
            v.kind = VarKind::Continuous;
        }
        m
    }

    /// CPLEX LP text format, for cross-checking with external solvers.
    pub fn to_lp_string(&self) -> String {
        let name = |i: usize| sanitize(&self.variables[i].name, i);
        let mut out = String::new();
        out.push_str(match self.sense {
            ObjSense::Minimize => "Minimize\n",
            ObjSense::Maximize => "Maximize\n",
        });
        out.push_str(" obj:");
        let terms: Vec<(usize, f64)> =
            self.objective.iter().enumerate().filter(|(_, c)| **c != 0.0).map(|(i, c)| (i, *c)).collect();
        if terms.is_empty() {
            out.push_str(" 0");
        }
        write_terms(&mut out, terms.into_iter(), &name);
        out.push_str("\nSubject To\n");
        for (r, c) in self.constraints.iter().enumerate() {
            let _ = write!(out, " c{}:", r);
            if c.terms.is_empty() {
                out.push_str(" 0");
            }
            write_terms(&mut out, c.terms.iter().map(|&(v, a)| (v.0, a)), &name);
            let op = match c.sense {
                RowSense::Le => "<=",
                RowSense::Eq => "=",
                RowSense::Ge => ">=",
            };
            let _ = writeln!(out, " {} {}", op, fmt_num(c.rhs));
        }
        out.push_str("Bounds\n");
        for (i, v) in self.variables.iter().enumerate() {
            let lo = if v.lower == f64::NEG_INFINITY { "-inf".to_string() } else { fmt_num(v.lower) };
            let hi = if v.upper == f64::INFINITY { "+inf".to_string() } else { fmt_num(v.upper) };
            let _ = writeln!(out, " {} <= {} <= {}", lo, name(i), hi);
        }
        let bins: Vec<String> =
            (0..self.variables.len()).filter(|&i| self.variables[i].kind == VarKind::Binary).map(name).collect();
        if !bins.is_empty() {
            out.push_str("Binaries\n");
            for chunk in bins.chunks(8) {
                let _ = writeln!(out, " {}", chunk.join(" "));
            }
        }
        out.push_str("End\n");
        out
    }
}

fn sanitize(name: &str, idx: usize) -> String {
    let cleaned: String =
        name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '_' || c == '.' { c } else { '_' }).collect();
    if cleaned.is_empty() || cleaned.starts_with(|c: char| c.is_ascii_digit() || c == '.') {
        format!("v{}_{}", idx, cleaned)
    } else {
        cleaned
    }
}

fn fmt_num(v: f64) -> String {
    format!("{}", v)
}

fn write_terms(out: &mut String, terms: impl Iterator<Item = (usize, f64)>, name: &dyn Fn(usize) -> String) {
    for (k, (i, a)) in terms.enumerate() {
        if k > 0 && k % 8 == 0 {
            out.push_str("\n   ");
        }
        let sign = if a < 0.0 { '-' } else { '+' };
        let _ = write!(out, " {} {} {}", sign, fmt_num(a.abs()), name(i));
    }
}
