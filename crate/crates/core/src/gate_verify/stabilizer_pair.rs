//! One measure-X and one measure-Z qubit sharing two data qubits.
//!
//! Qubit order: 0 = measure-X, 1 = data a, 2 = data b, 3 = measure-Z.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::circuit::{Branching, LogicCircuit, MeasureBasis, Op};
use super::{Check, Report};
use crate::error::Result;
use crate::pauli::Gate1;
use crate::pauli::StateVector;

const TOL: f64 = 1e-12;
const RANDOM_INPUTS: usize = 20;

/// The four Bell states by outcome `(M_X, M_Z)`, as `[gg, ge, eg, ee]`
/// amplitudes of data `(a, b)`.
pub const BELL: [((i8, i8), [f64; 4]); 4] = [
    ((1, 1), [1.0, 0.0, 0.0, 1.0]),
    ((-1, 1), [1.0, 0.0, 0.0, -1.0]),
    ((1, -1), [0.0, 1.0, 1.0, 0.0]),
    ((-1, -1), [0.0, 1.0, -1.0, 0.0]),
];

fn cycle_ops(clockwise: bool) -> Vec<Op> {
    let mut ops = vec![Op::Gate(Gate1::H, 0)];
    if clockwise {
        ops.extend([Op::Cnot(0, 1), Op::Cnot(1, 3), Op::Cnot(2, 3), Op::Cnot(0, 2)]);
    } else {
        ops.extend([Op::Cnot(0, 1), Op::Cnot(0, 2), Op::Cnot(1, 3), Op::Cnot(2, 3)]);
    }
    ops.push(Op::Gate(Gate1::H, 0));
    ops.push(Op::Measure { q: 0, basis: MeasureBasis::Z });
    ops.push(Op::Measure { q: 3, basis: MeasureBasis::Z });
    ops
}

/// One measurement cycle; bits are `[M_X, M_Z]`. `clockwise` uses the
/// N-E-S-W interleaving, which measures the four-qubit products instead.
pub fn stabilizer_cycle(clockwise: bool) -> LogicCircuit {
    LogicCircuit::new(4, cycle_ops(clockwise)).expect("fixed circuit")
}

/// Cycle preceded by resetting both measure qubits.
fn repeat_cycle(clockwise: bool) -> LogicCircuit {
    let mut ops = vec![Op::Reset(0), Op::Reset(3)];
    ops.extend(cycle_ops(clockwise));
    LogicCircuit::new(4, ops).expect("fixed circuit")
}

/// Data amplitudes `[A, B, C, D]` on `|gg>, |ge>, |eg>, |ee>` with both
/// measure qubits in `|g>`.
pub fn data_input(amps: [Complex64; 4]) -> Result<StateVector> {
    let mut full = vec![Complex64::new(0.0, 0.0); 16];
    for (k, a) in amps.iter().enumerate() {
        let (qa, qb) = (k >> 1 & 1, k & 1);
        full[qa << 1 | qb << 2] = *a;
    }
    StateVector::from_amplitudes(full)
}

fn bell_full(mx: i8, mz: i8, amps: [f64; 4]) -> Result<StateVector> {
    let mut full = vec![Complex64::new(0.0, 0.0); 16];
    let hx = usize::from(mx < 0);
    let hz = usize::from(mz < 0) << 3;
    for (k, a) in amps.iter().enumerate() {
        let (qa, qb) = (k >> 1 & 1, k & 1);
        full[hx | qa << 1 | qb << 2 | hz] = Complex64::new(*a, 0.0);
    }
    StateVector::from_amplitudes(full)
}

fn random_amps(rng: &mut ChaCha8Rng) -> [Complex64; 4] {
    let mut a = [Complex64::new(0.0, 0.0); 4];
    for x in &mut a {
        *x = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    }
    let n = a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    a.map(|x| x / n)
}

/// Probability that a second cycle repeats the first cycle's `M_X`
/// (index 0) and `M_Z` (index 1), summed exactly over branches.
pub fn repeat_agreement(input: &StateVector, clockwise: bool) -> Result<[f64; 2]> {
    let first = stabilizer_cycle(clockwise);
    let second = repeat_cycle(clockwise);
    let mut agree = [0.0; 2];
    for b1 in first.branches() {
        let r1 = first.run(input.clone(), &mut Branching::Forced(&b1))?;
        if r1.prob == 0.0 {
            continue;
        }
        // Reset is deterministic here: measure qubits hold their outcomes.
        let mut reset = r1.state.clone();
        if b1[0] < 0 {
            reset.apply(Gate1::X, 0)?;
        }
        if b1[1] < 0 {
            reset.apply(Gate1::X, 3)?;
        }
        for b2 in second.branches() {
            let r2 = second.run(reset.clone(), &mut Branching::Forced(&b2))?;
            for k in 0..2 {
                if b1[k] == b2[k] {
                    agree[k] += r1.prob * r2.prob;
                }
            }
        }
    }
    Ok(agree)
}

pub fn verify_two_qubit_stabilizer(seed: u64) -> Result<Report> {
    let mut report = Report::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let circuit = stabilizer_cycle(false);

    let (mut prob_err, mut state_err, mut idem_err) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..RANDOM_INPUTS {
        let amps = random_amps(&mut rng);
        let [a, b, c, d] = amps;
        let input = data_input(amps)?;
        let expected = [(a + d).norm_sqr() / 2.0, (a - d).norm_sqr() / 2.0, (b + c).norm_sqr() / 2.0, (b - c).norm_sqr() / 2.0];
        for (k, ((mx, mz), bell)) in BELL.iter().enumerate() {
            let r = circuit.run(input.clone(), &mut Branching::Forced(&[*mx, *mz]))?;
            prob_err = prob_err.max((r.prob - expected[k]).abs());
            if r.prob > 1e-9 {
                state_err = state_err.max(r.state.projective_distance(&bell_full(*mx, *mz, *bell)?));
                // A second cycle on the projected state repeats the outcome
                // with certainty and leaves the state alone.
                let again = repeat_cycle(false).run(r.state.clone(), &mut Branching::Forced(&[*mx, *mz]))?;
                idem_err = idem_err.max((again.prob - 1.0).abs()).max(again.state.projective_distance(&r.state));
            }
        }
    }
    report.push(Check::new("stabilizer_pair.branch_probabilities", prob_err, 0.0, TOL));
    report.push(Check::new("stabilizer_pair.branch_states", state_err, 0.0, TOL));
    report.push(Check::new("stabilizer_pair.repeat_is_idempotent", idem_err, 0.0, TOL));

    for ((mx, mz), bell) in BELL {
        let amps = bell.map(|x| Complex64::new(x, 0.0));
        let r = circuit.run(data_input(amps)?, &mut Branching::Forced(&[mx, mz]))?;
        report.push(Check::new(format!("stabilizer_pair.bell_outcome[{mx:+},{mz:+}]"), r.prob, 1.0, TOL));
    }

    let input = data_input(random_amps(&mut rng))?;
    let right = repeat_agreement(&input, false)?;
    let wrong = repeat_agreement(&input, true)?;
    report.push(Check::new("stabilizer_pair.repeat_agreement.x", right[0], 1.0, TOL));
    report.push(Check::new("stabilizer_pair.repeat_agreement.z", right[1], 1.0, TOL));
    report.push(Check::new("stabilizer_pair.clockwise_agreement.x", wrong[0], 0.5, TOL));
    report.push(Check::new("stabilizer_pair.clockwise_agreement.z", wrong[1], 0.5, TOL));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{PauliOp, PauliString, StabilizerTableau};
    use crate::pauli::CliffordGate;

    #[test]
    fn all_checks_pass() {
        let r = verify_two_qubit_stabilizer(3).unwrap();
        assert!(r.all_pass(), "{r}");
    }

    /// Stabilizer-tableau oracle: the clockwise cycle on fresh measure
    /// qubits leaves `X X X X` and `Z Z Z Z` over all four qubits.
    #[test]
    fn clockwise_order_measures_four_qubit_products() {
        let mut t = StabilizerTableau::new(4);
        for op in cycle_ops(true) {
            match op {
                Op::Gate(Gate1::H, q) => t.apply(CliffordGate::H(q)).unwrap(),
                Op::Cnot(c, tq) => t.apply(CliffordGate::Cnot(c, tq)).unwrap(),
                Op::Measure { .. } => break,
                _ => unreachable!(),
            }
        }
        // Undo the closing Hadamard to read the products before readout.
        t.apply(CliffordGate::H(0)).unwrap();
        let xxxx = PauliString::xs(0..4);
        let zzzz = PauliString::zs(0..4);
        assert_eq!(t.expectation(&xxxx).unwrap(), Some(1));
        assert_eq!(t.expectation(&zzzz).unwrap(), Some(1));
        let xa = PauliString::from_ops([(0, PauliOp::X), (1, PauliOp::X), (2, PauliOp::X)]);
        assert_eq!(t.expectation(&xa).unwrap(), None);
    }

    #[test]
    fn probabilities_of_random_input_sum_to_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let input = data_input(random_amps(&mut rng)).unwrap();
        let c = stabilizer_cycle(false);
        let total: f64 = c.branches().iter().map(|b| c.run(input.clone(), &mut Branching::Forced(b)).unwrap().prob).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }
}
