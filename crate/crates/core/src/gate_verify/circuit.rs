//! Logic circuits with measurements and classically conditioned gates,
//! executed on the state-vector kernel.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::pauli::{Gate1, MAX_QUBITS};
use crate::pauli::{PauliOp, PauliString, StateVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureBasis {
    X,
    Z,
}

impl MeasureBasis {
    pub fn op(self, q: usize) -> PauliString {
        match self {
            MeasureBasis::X => PauliString::single(q, PauliOp::X),
            MeasureBasis::Z => PauliString::single(q, PauliOp::Z),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Op {
    Gate(Gate1, usize),
    Cnot(usize, usize),
    /// Measure into classical bit `bit` (bits are numbered in order of
    /// appearance).
    Measure { q: usize, basis: MeasureBasis },
    /// Return qubit `q` to `|g>`.
    Reset(usize),
    /// Apply `gate` to `q` if bit `bit` read `when`.
    Conditional { bit: usize, when: i8, gate: Gate1, q: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogicCircuit {
    n: usize,
    ops: Vec<Op>,
    n_bits: usize,
}

impl LogicCircuit {
    pub fn new(n: usize, ops: Vec<Op>) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::Dimension(format!("{n} qubits outside 1..={MAX_QUBITS}")));
        }
        let check = |q: usize| if q < n { Ok(()) } else { Err(Error::IndexOutOfRange { index: q, n }) };
        let mut bits = 0;
        for op in &ops {
            match *op {
                Op::Gate(_, q) | Op::Reset(q) => check(q)?,
                Op::Cnot(c, t) => {
                    check(c)?;
                    check(t)?;
                    if c == t {
                        return Err(Error::InvalidArgument(format!("CNOT control equals target {c}")));
                    }
                }
                Op::Measure { q, .. } => {
                    check(q)?;
                    bits += 1;
                }
                Op::Conditional { bit, when, q, .. } => {
                    check(q)?;
                    if bit >= bits {
                        return Err(Error::InvalidArgument(format!("condition on bit {bit} before it is measured")));
                    }
                    if when != 1 && when != -1 {
                        return Err(Error::InvalidArgument(format!("condition value {when} is not +-1")));
                    }
                }
            }
        }
        Ok(LogicCircuit { n, ops, n_bits: bits })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn num_bits(&self) -> usize {
        self.n_bits
    }

    pub fn ops(&self) -> &[Op] {
        &self.ops
    }

    /// Every outcome assignment for the circuit's bits.
    pub fn branches(&self) -> Vec<Vec<i8>> {
        (0..1usize << self.n_bits)
            .map(|m| (0..self.n_bits).map(|b| if m >> b & 1 == 1 { -1 } else { 1 }).collect())
            .collect()
    }

    pub fn run(&self, mut state: StateVector, branching: &mut Branching<'_>) -> Result<RunResult> {
        if state.n() != self.n {
            return Err(Error::Dimension(format!("state has {} qubits, circuit {}", state.n(), self.n)));
        }
        let mut bits = Vec::with_capacity(self.n_bits);
        let mut prob = 1.0;
        for op in &self.ops {
            match *op {
                Op::Gate(g, q) => state.apply(g, q)?,
                Op::Cnot(c, t) => state.cnot(c, t)?,
                Op::Measure { q, basis } => {
                    let p = basis.op(q);
                    let v = match branching {
                        Branching::Forced(v) => v[bits.len()],
                        Branching::Sample(rng) => {
                            if rng.gen::<f64>() < state.prob_plus(&p)? {
                                1
                            } else {
                                -1
                            }
                        }
                    };
                    prob *= state.project(&p, v)?;
                    bits.push(v);
                    if prob < 1e-24 {
                        return Ok(RunResult { state, bits, prob: 0.0 });
                    }
                }
                Op::Reset(q) => {
                    let z = PauliString::single(q, PauliOp::Z);
                    let p1 = state.prob_plus(&z)?;
                    let v = if p1 > 1.0 - 1e-12 {
                        1
                    } else if p1 < 1e-12 {
                        -1
                    } else {
                        match branching {
                            Branching::Sample(rng) => {
                                if rng.gen::<f64>() < p1 {
                                    1
                                } else {
                                    -1
                                }
                            }
                            Branching::Forced(_) => {
                                return Err(Error::InvalidArgument(format!("reset of qubit {q} is not deterministic")))
                            }
                        }
                    };
                    state.project(&z, v)?;
                    if v < 0 {
                        state.apply(Gate1::X, q)?;
                    }
                }
                Op::Conditional { bit, when, gate, q } => {
                    if bits[bit] == when {
                        state.apply(gate, q)?;
                    }
                }
            }
        }
        Ok(RunResult { state, bits, prob })
    }
}

/// How measurement outcomes are chosen.
pub enum Branching<'a> {
    /// Outcomes given in bit order; the result carries the branch weight.
    Forced(&'a [i8]),
    Sample(&'a mut ChaCha8Rng),
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub state: StateVector,
    pub bits: Vec<i8>,
    /// Probability of the branch taken (1 when nothing was measured).
    pub prob: f64,
}

/// Product state of single-qubit amplitude pairs, qubit 0 first.
pub fn product_state(qubits: &[[num_complex::Complex64; 2]]) -> Result<StateVector> {
    let mut state = StateVector::from_amplitudes(qubits[0].to_vec())?;
    for q in &qubits[1..] {
        // `tensor` puts `self` in the low bits.
        state = state.tensor(&StateVector::from_amplitudes(q.to_vec())?)?;
    }
    Ok(state)
}

/// Uniformly random pure single-qubit amplitudes.
pub fn random_qubit(rng: &mut ChaCha8Rng) -> [num_complex::Complex64; 2] {
    use num_complex::Complex64;
    let theta: f64 = rng.gen_range(0.0..std::f64::consts::PI);
    let phi: f64 = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
    [Complex64::new((theta / 2.0).cos(), 0.0), Complex64::from_polar((theta / 2.0).sin(), phi)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use rand::SeedableRng;

    #[test]
    fn conditions_must_follow_measurements() {
        let bad = LogicCircuit::new(1, vec![Op::Conditional { bit: 0, when: -1, gate: Gate1::X, q: 0 }]);
        assert!(bad.is_err());
        assert!(LogicCircuit::new(2, vec![Op::Cnot(1, 1)]).is_err());
        assert!(LogicCircuit::new(15, vec![]).is_err());
    }

    #[test]
    fn forced_branches_sum_to_one() {
        let c = LogicCircuit::new(
            2,
            vec![Op::Gate(Gate1::H, 0), Op::Measure { q: 0, basis: MeasureBasis::Z }, Op::Measure { q: 1, basis: MeasureBasis::X }],
        )
        .unwrap();
        let total: f64 = c
            .branches()
            .iter()
            .map(|b| c.run(StateVector::new(2).unwrap(), &mut Branching::Forced(b)).unwrap().prob)
            .sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn conditional_x_resets_measured_qubit() {
        let c = LogicCircuit::new(
            1,
            vec![
                Op::Gate(Gate1::H, 0),
                Op::Measure { q: 0, basis: MeasureBasis::Z },
                Op::Conditional { bit: 0, when: -1, gate: Gate1::X, q: 0 },
            ],
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let r = c.run(StateVector::new(1).unwrap(), &mut Branching::Sample(&mut rng)).unwrap();
            assert!(r.state.projective_distance(&StateVector::new(1).unwrap()) < 1e-12);
        }
    }

    #[test]
    fn product_state_orders_qubits() {
        let g = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        let e = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
        let s = product_state(&[e, g]).unwrap();
        assert!((s.amplitudes()[1].re - 1.0).abs() < 1e-15);
    }
}
