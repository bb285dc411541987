//! Exact small-scale checks of logical gate constructions on the
//! state-vector kernel: the two-qubit stabilizer circuit, CNOT operator
//! identities, CNOT circuits between same-type qubits, S and T circuits
//! with byproduct bookkeeping, and distillation error counting.

pub mod circuit;
pub mod cnot;
pub mod distill;
pub mod identities;
pub mod phase;
pub mod stabilizer_pair;

use std::fmt;

pub use circuit::{Branching, LogicCircuit, MeasureBasis, Op, RunResult};
pub use cnot::{verify_cnot_heisenberg, verify_same_type_cnot};
pub use distill::{distillation_error_count, distillation_success_rate, verify_distillation, CodeSpec};
pub use identities::{verify_backends_agree, verify_gate_identities};
pub use phase::{verify_s_circuit, verify_sign_tables, verify_t_circuit};
pub use stabilizer_pair::verify_two_qubit_stabilizer;

/// One numeric check; passes when `|measured - expected| <= tol`.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub id: String,
    pub measured: f64,
    pub expected: f64,
    pub tol: f64,
}

impl Check {
    pub fn new(id: impl Into<String>, measured: f64, expected: f64, tol: f64) -> Self {
        Check { id: id.into(), measured, expected, tol }
    }

    /// Boolean check recorded as 1 (true) against 1.
    pub fn holds(id: impl Into<String>, ok: bool) -> Self {
        Check::new(id, if ok { 1.0 } else { 0.0 }, 1.0, 0.0)
    }

    pub fn pass(&self) -> bool {
        (self.measured - self.expected).abs() <= self.tol
    }

    /// `PASS|FAIL <id> <measured> <expected> <tol>`.
    pub fn line(&self) -> String {
        format!(
            "{} {} {} {} {:e}",
            if self.pass() { "PASS" } else { "FAIL" },
            self.id,
            fmt_num(self.measured),
            fmt_num(self.expected),
            self.tol
        )
    }
}

fn fmt_num(x: f64) -> String {
    if x == x.trunc() && x.abs() < 1e15 {
        format!("{x:.0}")
    } else {
        format!("{x:.6e}")
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(Check::pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass())
    }

    pub fn lines(&self) -> Vec<String> {
        self.checks.iter().map(Check::line).collect()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{}", c.line())?;
        }
        Ok(())
    }
}

/// Every verification in this module, in a fixed order.
pub fn verify_all(seed: u64) -> crate::Result<Report> {
    let mut r = Report::default();
    r.extend(verify_two_qubit_stabilizer(seed)?);
    r.extend(verify_cnot_heisenberg());
    r.extend(verify_same_type_cnot(seed)?);
    r.extend(verify_s_circuit(seed)?);
    r.extend(verify_t_circuit(seed)?);
    r.extend(verify_sign_tables(seed)?);
    r.extend(verify_distillation(seed)?);
    r.extend(verify_gate_identities());
    r.extend(verify_backends_agree(seed)?);
    Ok(r)
}
