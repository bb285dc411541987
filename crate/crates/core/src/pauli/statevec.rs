use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use num_complex::Complex64;
use rand::Rng;

use super::{PauliOp, PauliString};
use crate::error::{Error, Result};

pub const MAX_QUBITS: usize = 14;

/// Single-qubit gates of the state-vector kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate1 {
    H,
    S,
    Sdg,
    T,
    Tdg,
    Rz(f64),
    X,
    Z,
    /// Real `Y = Z·X`.
    Y,
}

impl Gate1 {
    pub fn matrix(self) -> [[Complex64; 2]; 2] {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let diag = |phase: f64| [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), Complex64::from_polar(1.0, phase)]];
        match self {
            Gate1::H => [
                [c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)],
                [c(FRAC_1_SQRT_2, 0.0), c(-FRAC_1_SQRT_2, 0.0)],
            ],
            Gate1::S => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 1.0)]],
            Gate1::Sdg => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, -1.0)]],
            Gate1::T => diag(FRAC_PI_4),
            Gate1::Tdg => diag(-FRAC_PI_4),
            Gate1::Rz(theta) => diag(theta),
            Gate1::X => [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]],
            Gate1::Z => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]],
            Gate1::Y => [[c(0.0, 0.0), c(1.0, 0.0)], [c(-1.0, 0.0), c(0.0, 0.0)]],
        }
    }
}

/// Dense amplitudes; qubit `q` is bit `q` of the basis index, `|g> = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn new(n: usize) -> Result<Self> {
        if n > MAX_QUBITS {
            return Err(Error::Dimension(format!("{n} qubits exceeds the cap of {MAX_QUBITS}")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n, amps })
    }

    /// Normalizes the given amplitudes.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::Dimension(format!("{len} amplitudes is not a power of two")));
        }
        let n = len.trailing_zeros() as usize;
        if n > MAX_QUBITS {
            return Err(Error::Dimension(format!("{n} qubits exceeds the cap of {MAX_QUBITS}")));
        }
        let mut s = StateVector { n, amps };
        let norm = s.norm();
        if norm < 1e-300 {
            return Err(Error::InvalidArgument("zero vector".into()));
        }
        s.scale(1.0 / norm);
        Ok(s)
    }

    /// Tensor product `self ⊗ other` with `other` on the higher qubits.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        if self.n + other.n > MAX_QUBITS {
            return Err(Error::Dimension("tensor product exceeds qubit cap".into()));
        }
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for b in &other.amps {
            for a in &self.amps {
                amps.push(a * b);
            }
        }
        Ok(StateVector { n: self.n + other.n, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    fn scale(&mut self, k: f64) {
        for a in &mut self.amps {
            *a *= k;
        }
    }

    fn check(&self, q: usize) -> Result<()> {
        if q < self.n {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: q, n: self.n })
        }
    }

    pub fn apply(&mut self, gate: Gate1, q: usize) -> Result<()> {
        self.check(q)?;
        let m = gate.matrix();
        let bit = 1usize << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (a0, a1) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[i | bit] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
        Ok(())
    }

    pub fn cnot(&mut self, c: usize, t: usize) -> Result<()> {
        self.check(c)?;
        self.check(t)?;
        if c == t {
            return Err(Error::InvalidArgument("CNOT control equals target".into()));
        }
        let (cb, tb) = (1usize << c, 1usize << t);
        for i in 0..self.amps.len() {
            if i & cb != 0 && i & tb == 0 {
                self.amps.swap(i, i | tb);
            }
        }
        Ok(())
    }

    /// `P|psi>` for a Pauli string in the real convention.
    pub fn apply_pauli(&mut self, p: &PauliString) -> Result<()> {
        for (q, op) in p.support() {
            self.check(q)?;
            // Z^z X^x: apply X first, then Z.
            let (zb, xb) = op.bits();
            if xb {
                self.apply(Gate1::X, q)?;
            }
            if zb {
                self.apply(Gate1::Z, q)?;
            }
        }
        if p.sign() < 0 {
            self.scale(-1.0);
        }
        Ok(())
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// `<psi|P|psi>`. Real for Hermitian `P`.
    pub fn expectation(&self, p: &PauliString) -> Result<f64> {
        let mut q = self.clone();
        q.apply_pauli(p)?;
        Ok(self.inner(&q).re)
    }

    /// Probability of outcome `+1` for a Hermitian Pauli observable.
    pub fn prob_plus(&self, p: &PauliString) -> Result<f64> {
        Ok(((1.0 + self.expectation(p)?) / 2.0).clamp(0.0, 1.0))
    }

    /// Project onto the `value` eigenspace of `p`; returns the branch probability.
    pub fn project(&mut self, p: &PauliString, value: i8) -> Result<f64> {
        if !p.is_hermitian() {
            return Err(Error::InvalidArgument(format!("observable {p} is not Hermitian")));
        }
        let mut pp = self.clone();
        pp.apply_pauli(p)?;
        let s = if value < 0 { -1.0 } else { 1.0 };
        for (a, b) in self.amps.iter_mut().zip(&pp.amps) {
            *a = (*a + b * s) * 0.5;
        }
        let norm = self.norm();
        let prob = norm * norm;
        if prob > 1e-24 {
            self.scale(1.0 / norm);
        }
        Ok(prob)
    }

    pub fn measure<R: Rng + ?Sized>(&mut self, p: &PauliString, rng: &mut R) -> Result<i8> {
        let pp = self.prob_plus(p)?;
        let v = if rng.gen::<f64>() < pp { 1 } else { -1 };
        self.project(p, v)?;
        Ok(v)
    }

    pub fn measure_z<R: Rng + ?Sized>(&mut self, q: usize, rng: &mut R) -> Result<i8> {
        self.measure(&PauliString::single(q, PauliOp::Z), rng)
    }

    /// `1 - |<a|b>|^2`, zero iff equal up to global phase.
    pub fn projective_distance(&self, other: &StateVector) -> f64 {
        let ip = self.inner(other).norm_sqr();
        let na = self.norm().powi(2);
        let nb = other.norm().powi(2);
        (1.0 - ip / (na * nb)).max(0.0)
    }

    /// Reduced single-qubit state of qubit `q` if the state factorizes as
    /// `(rest) ⊗ |phi>_q`; `None` if entangled beyond `tol`.
    pub fn factor_out(&self, q: usize, tol: f64) -> Result<Option<(StateVector, StateVector)>> {
        self.check(q)?;
        let bit = 1usize << q;
        let low = bit - 1;
        let rest_index = |i: usize| (i & low) | ((i >> 1) & !low);
        let (mut p0, mut p1) = (0.0, 0.0);
        for (i, a) in self.amps.iter().enumerate() {
            if i & bit == 0 {
                p0 += a.norm_sqr();
            } else {
                p1 += a.norm_sqr();
            }
        }
        let branch = if p0 >= p1 { 0 } else { bit };
        let mut rest = vec![Complex64::new(0.0, 0.0); self.amps.len() / 2];
        for (i, a) in self.amps.iter().enumerate() {
            if i & bit == branch {
                rest[rest_index(i)] = *a;
            }
        }
        let rest = StateVector::from_amplitudes(rest)?;
        let mut single = [Complex64::new(0.0, 0.0); 2];
        for (i, a) in self.amps.iter().enumerate() {
            let r = rest.amps[rest_index(i)];
            single[usize::from(i & bit != 0)] += r.conj() * a;
        }
        let single = StateVector::from_amplitudes(single.to_vec())?;
        let mut rebuilt = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (i, slot) in rebuilt.iter_mut().enumerate() {
            *slot = rest.amps[rest_index(i)] * single.amps[usize::from(i & bit != 0)];
        }
        let rebuilt = StateVector { n: self.n, amps: rebuilt };
        if self.projective_distance(&rebuilt) > tol {
            return Ok(None);
        }
        Ok(Some((rest, single)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{CliffordGate, StabilizerTableau};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_state(n: usize, rng: &mut ChaCha8Rng) -> StateVector {
        let amps = (0..1 << n).map(|_| c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)).collect();
        StateVector::from_amplitudes(amps).unwrap()
    }

    #[test]
    fn hadamard_makes_plus() {
        let mut s = StateVector::new(1).unwrap();
        s.apply(Gate1::H, 0).unwrap();
        let plus = StateVector::from_amplitudes(vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(s.projective_distance(&plus) < 1e-15);
        assert!((s.amplitudes()[0].re - FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn t_squared_is_s() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let psi = random_state(1, &mut rng);
            let mut a = psi.clone();
            a.apply(Gate1::T, 0).unwrap();
            a.apply(Gate1::T, 0).unwrap();
            let mut b = psi.clone();
            b.apply(Gate1::S, 0).unwrap();
            assert!(a.amplitudes().iter().zip(b.amplitudes()).all(|(x, y)| (x - y).norm() < 1e-12));
        }
    }

    #[test]
    fn rz_adds_relative_phase() {
        let mut s = StateVector::from_amplitudes(vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        s.apply(Gate1::Rz(PI / 4.0), 0).unwrap();
        let want = Complex64::from_polar(FRAC_1_SQRT_2, PI / 4.0);
        assert!((s.amplitudes()[1] - want).norm() < 1e-15);
    }

    #[test]
    fn gates_preserve_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut s = random_state(4, &mut rng);
        let gates = [Gate1::H, Gate1::S, Gate1::Sdg, Gate1::T, Gate1::Tdg, Gate1::Rz(0.3), Gate1::X, Gate1::Z, Gate1::Y];
        for k in 0..200 {
            s.apply(gates[k % gates.len()], k % 4).unwrap();
            if k % 7 == 0 {
                s.cnot(k % 4, (k + 1) % 4).unwrap();
            }
            assert!((s.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn size_cap_and_index_errors() {
        assert!(StateVector::new(15).is_err());
        assert!(StateVector::from_amplitudes(vec![c(1.0, 0.0); 3]).is_err());
        let mut s = StateVector::new(2).unwrap();
        assert!(s.apply(Gate1::H, 2).is_err());
        assert!(s.cnot(0, 0).is_err());
    }

    #[test]
    fn factor_out_recovers_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let a = random_state(2, &mut rng);
        let b = random_state(1, &mut rng);
        let ab = a.tensor(&b).unwrap();
        let (rest, single) = ab.factor_out(2, 1e-12).unwrap().unwrap();
        assert!(rest.projective_distance(&a) < 1e-12);
        assert!(single.projective_distance(&b) < 1e-12);
        let mut bell = StateVector::new(2).unwrap();
        bell.apply(Gate1::H, 0).unwrap();
        bell.cnot(0, 1).unwrap();
        assert!(bell.factor_out(1, 1e-9).unwrap().is_none());
    }

    /// Random Clifford circuits: deterministic tableau outcomes match the
    /// state vector exactly, random ones are uniform.
    #[test]
    fn tableau_agrees_with_state_vector() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let n = 6;
        let mut random_plus = 0usize;
        let mut random_total = 0usize;
        for _circuit in 0..60 {
            let mut sv = StateVector::new(n).unwrap();
            let mut tb = StabilizerTableau::new(n);
            for _ in 0..30 {
                match rng.gen_range(0..4) {
                    0 => {
                        let q = rng.gen_range(0..n);
                        sv.apply(Gate1::H, q).unwrap();
                        tb.apply(CliffordGate::H(q)).unwrap();
                    }
                    1 => {
                        let a = rng.gen_range(0..n);
                        let b = (a + rng.gen_range(1..n)) % n;
                        sv.cnot(a, b).unwrap();
                        tb.apply(CliffordGate::Cnot(a, b)).unwrap();
                    }
                    2 => {
                        let q = rng.gen_range(0..n);
                        sv.apply(Gate1::X, q).unwrap();
                        tb.apply(CliffordGate::X(q)).unwrap();
                    }
                    _ => {
                        let q = rng.gen_range(0..n);
                        sv.apply(Gate1::Z, q).unwrap();
                        tb.apply(CliffordGate::Z(q)).unwrap();
                    }
                }
            }
            for _ in 0..8 {
                let mut p = PauliString::identity();
                for q in 0..n {
                    p.set(q, PauliOp::ALL[rng.gen_range(0..4)]);
                }
                if !p.is_hermitian() {
                    p.set(0, PauliOp::I);
                    if !p.is_hermitian() {
                        continue;
                    }
                }
                let ev = sv.expectation(&p).unwrap();
                match tb.expectation(&p).unwrap() {
                    Some(v) => assert!((ev - v as f64).abs() < 1e-12, "{p}: {ev} vs {v}"),
                    None => {
                        assert!(ev.abs() < 1e-12);
                        random_total += 1;
                        let m = tb.measure(&p, &mut rng).unwrap();
                        random_plus += usize::from(m.value > 0);
                        sv.project(&p, m.value).unwrap();
                    }
                }
            }
        }
        let mean = random_plus as f64 / random_total as f64;
        let sigma = (0.25 / random_total as f64).sqrt();
        assert!((mean - 0.5).abs() < 3.0 * sigma + 1e-9, "{random_plus}/{random_total}");
    }
}
