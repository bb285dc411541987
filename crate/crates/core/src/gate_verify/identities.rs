//! Dense-matrix gate identities and agreement between the state-vector
//! kernel and the stabilizer tableau on Clifford circuits.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::circuit::{LogicCircuit, Op};
use super::{cnot, stabilizer_pair, Check, Report};
use crate::error::{Error, Result};
use crate::pauli::Gate1;
use crate::pauli::{CliffordGate, StabilizerTableau, StateVector};

const EXACT: f64 = 1e-15;
const PHASE_TOL: f64 = 1e-12;

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    pub n: usize,
    pub a: Vec<Complex64>,
}

impl Mat {
    pub fn identity(n: usize) -> Mat {
        let mut a = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            a[i * n + i] = Complex64::new(1.0, 0.0);
        }
        Mat { n, a }
    }

    pub fn real(n: usize, rows: &[f64]) -> Mat {
        Mat { n, a: rows.iter().map(|&x| Complex64::new(x, 0.0)).collect() }
    }

    pub fn gate(g: Gate1) -> Mat {
        let m = g.matrix();
        Mat { n: 2, a: vec![m[0][0], m[0][1], m[1][0], m[1][1]] }
    }

    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.a[i * self.n + j]
    }

    pub fn mul(&self, o: &Mat) -> Mat {
        let n = self.n;
        let mut a = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let x = self.at(i, k);
                for j in 0..n {
                    a[i * n + j] += x * o.at(k, j);
                }
            }
        }
        Mat { n, a }
    }

    pub fn pow(&self, k: usize) -> Mat {
        (0..k).fold(Mat::identity(self.n), |acc, _| acc.mul(self))
    }

    /// `self ⊗ o` with `self` as the left (most significant) factor.
    pub fn kron(&self, o: &Mat) -> Mat {
        let n = self.n * o.n;
        let mut a = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..self.n {
            for j in 0..self.n {
                for k in 0..o.n {
                    for l in 0..o.n {
                        a[(i * o.n + k) * n + j * o.n + l] = self.at(i, j) * o.at(k, l);
                    }
                }
            }
        }
        Mat { n, a }
    }

    pub fn dagger(&self) -> Mat {
        let n = self.n;
        let mut a = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                a[j * n + i] = self.at(i, j).conj();
            }
        }
        Mat { n, a }
    }

    pub fn scaled(&self, s: f64) -> Mat {
        Mat { n: self.n, a: self.a.iter().map(|x| x * s).collect() }
    }

    pub fn max_diff(&self, o: &Mat) -> f64 {
        self.a.iter().zip(&o.a).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    /// `1 - |tr(A^† B)| / n`; zero iff equal up to a global phase (for
    /// unitaries).
    pub fn phase_distance(&self, o: &Mat) -> f64 {
        let tr: Complex64 = (0..self.n).map(|i| (0..self.n).map(|k| self.at(k, i).conj() * o.at(k, i)).sum::<Complex64>()).sum();
        (1.0 - tr.norm() / self.n as f64).abs()
    }
}

pub fn verify_gate_identities() -> Report {
    let g = Mat::gate;
    let (h, s, t, tdg, x, z) = (g(Gate1::H), g(Gate1::S), g(Gate1::T), g(Gate1::Tdg), g(Gate1::X), g(Gate1::Z));
    let sdg = g(Gate1::Sdg);
    let id = Mat::identity(2);
    let mut r = Report::default();
    r.push(Check::new("identity.t_squared_is_s", t.pow(2).max_diff(&s), 0.0, EXACT));
    r.push(Check::new("identity.s_squared_is_z", s.pow(2).max_diff(&z), 0.0, EXACT));
    r.push(Check::new("identity.s_fourth_is_identity", s.pow(4).max_diff(&id), 0.0, EXACT));
    r.push(Check::new("identity.hzh_is_x", h.mul(&z).mul(&h).max_diff(&x), 0.0, EXACT));
    r.push(Check::new("identity.t_seventh_is_tdg", t.pow(7).max_diff(&tdg), 0.0, EXACT));
    r.push(Check::new("identity.t_is_s_tdg", s.mul(&tdg).phase_distance(&t), 0.0, PHASE_TOL));
    r.push(Check::new("identity.tdg_is_z_s_t", z.mul(&s).mul(&t).phase_distance(&tdg), 0.0, PHASE_TOL));
    r.push(Check::new("identity.sdg_is_z_s", z.mul(&s).phase_distance(&sdg), 0.0, PHASE_TOL));
    r
}

/// Runs `prep` then `circuit` on both backends with shared outcomes and
/// returns the largest disagreement: for each measurement the tableau's
/// deterministic outcome must have probability 1 in the state vector, and
/// a random one must have probability 1/2.
pub fn backend_disagreement(prep: &[Op], circuit: &LogicCircuit, rng: &mut ChaCha8Rng) -> Result<f64> {
    let n = circuit.num_qubits();
    let mut sv = StateVector::new(n)?;
    let mut tab = StabilizerTableau::new(n);
    let mut bits: Vec<i8> = Vec::new();
    let mut worst = 0.0f64;
    let clifford = |g: Gate1, q: usize| match g {
        Gate1::H => Ok(CliffordGate::H(q)),
        Gate1::X => Ok(CliffordGate::X(q)),
        Gate1::Z => Ok(CliffordGate::Z(q)),
        other => Err(Error::InvalidArgument(format!("{other:?} has no tableau form"))),
    };
    for op in prep.iter().chain(circuit.ops()) {
        match *op {
            Op::Gate(g, q) => {
                tab.apply(clifford(g, q)?)?;
                sv.apply(g, q)?;
            }
            Op::Cnot(c, t) => {
                tab.apply(CliffordGate::Cnot(c, t))?;
                sv.cnot(c, t)?;
            }
            Op::Measure { q, basis } => {
                let p = basis.op(q);
                let m = tab.measure(&p, rng)?;
                let p_plus = sv.prob_plus(&p)?;
                let p_value = if m.value > 0 { p_plus } else { 1.0 - p_plus };
                let expected = if m.deterministic { 1.0 } else { 0.5 };
                worst = worst.max((p_value - expected).abs());
                sv.project(&p, m.value)?;
                bits.push(m.value);
            }
            Op::Reset(q) => {
                tab.apply(CliffordGate::Reset(q))?;
                let z = crate::pauli::PauliString::single(q, crate::pauli::PauliOp::Z);
                if sv.prob_plus(&z)? < 0.5 {
                    sv.project(&z, -1)?;
                    sv.apply(Gate1::X, q)?;
                } else {
                    sv.project(&z, 1)?;
                }
            }
            Op::Conditional { bit, when, gate, q } => {
                if bits[bit] == when {
                    tab.apply(clifford(gate, q)?)?;
                    sv.apply(gate, q)?;
                }
            }
        }
    }
    Ok(worst)
}

pub fn verify_backends_agree(seed: u64) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    // Bell inputs on the data pair of the two-qubit stabilizer cycle.
    for (flip_x, flip_z) in [(false, false), (true, false), (false, true), (true, true)] {
        let mut prep = vec![Op::Gate(Gate1::H, 1), Op::Cnot(1, 2)];
        if flip_z {
            prep.push(Op::Gate(Gate1::X, 2));
        }
        if flip_x {
            prep.push(Op::Gate(Gate1::Z, 1));
        }
        for clockwise in [false, true] {
            worst = worst.max(backend_disagreement(&prep, &stabilizer_pair::stabilizer_cycle(clockwise), &mut rng)?);
        }
    }
    // Basis inputs of the Z-cut same-type CNOT.
    for (a, d) in [(false, false), (false, true), (true, false), (true, true)] {
        let mut prep = Vec::new();
        if a {
            prep.push(Op::Gate(Gate1::X, 0));
        }
        if d {
            prep.push(Op::Gate(Gate1::X, 3));
        }
        for _ in 0..4 {
            worst = worst.max(backend_disagreement(&prep, &cnot::zcut_cnot_circuit(true), &mut rng)?);
        }
    }
    let mut r = Report::default();
    r.push(Check::new("backends.outcome_probabilities", worst, 0.0, PHASE_TOL));
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identities_hold() {
        let r = verify_gate_identities();
        assert!(r.all_pass(), "{r}");
    }

    #[test]
    fn backends_agree() {
        let r = verify_backends_agree(5).unwrap();
        assert!(r.all_pass(), "{r}");
    }

    #[test]
    fn phase_distance_ignores_global_phase() {
        let t = Mat::gate(Gate1::T);
        let rotated = Mat { n: 2, a: t.a.iter().map(|x| x * Complex64::from_polar(1.0, 0.7)).collect() };
        assert!(t.phase_distance(&rotated) < 1e-15);
        assert!(t.phase_distance(&Mat::gate(Gate1::X)) > 0.9);
    }

    #[test]
    fn kron_orders_factors() {
        let x = Mat::gate(Gate1::X);
        let id = Mat::identity(2);
        // X on the left factor maps |00> (index 0) to |10> (index 2).
        assert_eq!(x.kron(&id).at(2, 0), Complex64::new(1.0, 0.0));
        assert_eq!(id.kron(&x).at(1, 0), Complex64::new(1.0, 0.0));
    }
}
