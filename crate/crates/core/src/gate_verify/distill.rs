//! Error counting for magic-state distillation codes.
//!
//! Each ancilla error is modelled as a flip of its contribution to the
//! X-type stabilizer measurements. A pattern goes undetected when every
//! stabilizer sees an even number of flips, and it corrupts the output when
//! it also flips the parity of the logical representative.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Check, Report};
use crate::error::{Error, Result};

const MC_SHOTS: usize = 200_000;
const MAX_QUBITS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeSpec {
    pub name: &'static str,
    pub n: usize,
    /// Zero-based qubit sets.
    pub x_stabilizers: Vec<Vec<usize>>,
    pub logical_rep: Vec<usize>,
}

fn zero_based(sets: &[&[usize]]) -> Vec<Vec<usize>> {
    sets.iter().map(|s| s.iter().map(|q| q - 1).collect()).collect()
}

impl CodeSpec {
    /// Seven-qubit code used for `|Y>` distillation.
    pub fn steane() -> CodeSpec {
        CodeSpec {
            name: "steane",
            n: 7,
            x_stabilizers: zero_based(&[&[3, 4, 5, 6], &[2, 5, 6, 7], &[1, 4, 6, 7]]),
            logical_rep: (0..7).collect(),
        }
    }

    /// Fifteen-qubit code used for `|A>` distillation.
    pub fn reed_muller() -> CodeSpec {
        CodeSpec {
            name: "reed_muller",
            n: 15,
            x_stabilizers: zero_based(&[
                &[4, 5, 6, 7, 8, 9, 10, 11],
                &[1, 2, 3, 4, 5, 6, 7, 15],
                &[2, 3, 4, 5, 10, 11, 12, 13],
                &[1, 2, 5, 6, 9, 10, 13, 14],
            ]),
            logical_rep: (0..15).collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n > MAX_QUBITS {
            return Err(Error::InvalidArgument(format!("code size {} outside 1..={MAX_QUBITS}", self.n)));
        }
        for q in self.x_stabilizers.iter().flatten().chain(&self.logical_rep) {
            if *q >= self.n {
                return Err(Error::IndexOutOfRange { index: *q, n: self.n });
            }
        }
        Ok(())
    }

    fn masks(&self) -> (Vec<u32>, u32) {
        let mask = |s: &[usize]| s.iter().fold(0u32, |m, &q| m | 1 << q);
        (self.x_stabilizers.iter().map(|s| mask(s)).collect(), mask(&self.logical_rep))
    }

    pub fn undetected(&self, pattern: u32) -> bool {
        let (stabs, _) = self.masks();
        stabs.iter().all(|s| (s & pattern).count_ones().is_multiple_of(2))
    }

    pub fn flips_logical(&self, pattern: u32) -> bool {
        let (_, logical) = self.masks();
        (logical & pattern).count_ones() % 2 == 1
    }
}

/// Number of weight-`weight` patterns that pass every stabilizer and flip
/// the logical parity.
pub fn distillation_error_count(code: &CodeSpec, weight: usize) -> Result<u64> {
    code.validate()?;
    if weight > code.n {
        return Err(Error::InvalidArgument(format!("weight {weight} exceeds {} qubits", code.n)));
    }
    let (stabs, logical) = code.masks();
    let count = (0u32..1 << code.n)
        .filter(|p| p.count_ones() as usize == weight)
        .filter(|p| stabs.iter().all(|s| (s & p).count_ones() % 2 == 0) && (logical & p).count_ones() % 2 == 1)
        .count();
    Ok(count as u64)
}

/// Leading-order acceptance probability `1 - m p`, where `m` counts the
/// single-qubit errors some stabilizer detects.
pub fn distillation_success_rate(code: &CodeSpec, p: f64) -> Result<f64> {
    check_probability(p)?;
    code.validate()?;
    let detected = (0..code.n).filter(|&q| !code.undetected(1 << q)).count();
    Ok(1.0 - detected as f64 * p)
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("probability {p} outside [0, 1]")))
    }
}

/// Exact acceptance probability summed over every pattern.
pub fn exact_acceptance(code: &CodeSpec, p: f64) -> Result<f64> {
    check_probability(p)?;
    code.validate()?;
    let n = code.n as i32;
    Ok((0u32..1 << code.n)
        .filter(|&e| code.undetected(e))
        .map(|e| {
            let w = e.count_ones() as i32;
            p.powi(w) * (1.0 - p).powi(n - w)
        })
        .sum())
}

/// Sampled acceptance probability with independent errors of rate `p`.
pub fn monte_carlo_acceptance(code: &CodeSpec, p: f64, shots: usize, seed: u64) -> Result<f64> {
    check_probability(p)?;
    code.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (stabs, _) = code.masks();
    let accepted = (0..shots)
        .filter(|_| {
            let e = (0..code.n).fold(0u32, |m, q| if rng.gen::<f64>() < p { m | 1 << q } else { m });
            stabs.iter().all(|s| (s & e).count_ones() % 2 == 0)
        })
        .count();
    Ok(accepted as f64 / shots as f64)
}

/// Output error after one round at leading order: `count * p^3`.
pub fn output_error(code: &CodeSpec, p: f64) -> Result<f64> {
    Ok(distillation_error_count(code, 3)? as f64 * p.powi(3))
}

pub fn verify_distillation(seed: u64) -> Result<Report> {
    let steane = CodeSpec::steane();
    let rm = CodeSpec::reed_muller();
    let mut r = Report::default();
    for code in [&steane, &rm] {
        let name = code.name;
        r.push(Check::new(format!("distill.{name}.weight1"), distillation_error_count(code, 1)? as f64, 0.0, 0.0));
        r.push(Check::new(format!("distill.{name}.weight2"), distillation_error_count(code, 2)? as f64, 0.0, 0.0));
    }
    r.push(Check::new("distill.steane.weight3", distillation_error_count(&steane, 3)? as f64, 7.0, 0.0));
    r.push(Check::new("distill.reed_muller.weight3", distillation_error_count(&rm, 3)? as f64, 35.0, 0.0));
    r.push(Check::new("distill.steane.success_p0.01", distillation_success_rate(&steane, 0.01)?, 0.93, 1e-12));
    r.push(Check::new("distill.reed_muller.success_p0.01", distillation_success_rate(&rm, 0.01)?, 0.85, 1e-12));

    for (k, code) in [&steane, &rm].into_iter().enumerate() {
        let p = 0.01;
        let exact = exact_acceptance(code, p)?;
        let mc = monte_carlo_acceptance(code, p, MC_SHOTS, seed.wrapping_add(k as u64))?;
        let sigma = (exact * (1.0 - exact) / MC_SHOTS as f64).sqrt();
        r.push(Check::new(format!("distill.{}.monte_carlo_p0.01", code.name), mc, exact, 4.0 * sigma));
        // The linear rate agrees with the exact sum to second order.
        let linear = distillation_success_rate(code, p)?;
        let n = code.n as f64;
        r.push(Check::new(format!("distill.{}.linear_vs_exact", code.name), linear, exact, n * n * p * p));
    }
    // Two rounds of the 15-qubit code compose as 35 (35 p^3)^3.
    let p = 1e-2;
    let p1 = output_error(&rm, p)?;
    let p2 = output_error(&rm, p1)?;
    r.push(Check::new("distill.reed_muller.two_rounds", p2 / (35f64.powi(4) * p.powi(9)), 1.0, 1e-12));
    Ok(r)
}
