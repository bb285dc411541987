//! CNOT operator identities and CNOT circuits between qubits of the same
//! cut type.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::circuit::{Branching, LogicCircuit, MeasureBasis, Op};
use super::identities::Mat;
use super::{Check, Report};
use crate::error::Result;
use crate::pauli::Gate1;
use crate::pauli::StateVector;

const TOL: f64 = 1e-12;
const RANDOM_INPUTS: usize = 10;

/// CNOT on `|control target>` with the control as the left factor.
pub fn cnot_matrix() -> Mat {
    Mat::real(4, &[1., 0., 0., 0., 0., 1., 0., 0., 0., 0., 0., 1., 0., 0., 1., 0.])
}

fn pauli(k: usize) -> Mat {
    match k {
        0 => Mat::identity(2),
        1 => Mat::gate(Gate1::X),
        2 => Mat::gate(Gate1::Y),
        _ => Mat::gate(Gate1::Z),
    }
}

/// `(z, x)` exponents with `P = Z^z X^x`.
fn zx_exponents(k: usize) -> (bool, bool) {
    match k {
        0 => (false, false),
        1 => (false, true),
        2 => (true, true),
        _ => (true, false),
    }
}

pub fn verify_cnot_heisenberg() -> Report {
    let c = cnot_matrix();
    let conj = |m: &Mat| c.mul(m).mul(&c.dagger());
    let (i, x, y, z) = (pauli(0), pauli(1), pauli(2), pauli(3));
    let mut r = Report::default();
    // Images of the four generators.
    let x_i = x.kron(&i);
    let i_x = i.kron(&x);
    let z_i = z.kron(&i);
    let i_z = i.kron(&z);
    let images = [(&x_i, x.kron(&x), "x_i"), (&i_x, i.kron(&x), "i_x"), (&z_i, z.kron(&i), "z_i"), (&i_z, z.kron(&z), "i_z")];
    for (input, image, name) in &images {
        r.push(Check::new(format!("cnot.image.{name}"), conj(input).max_diff(image), 0.0, TOL));
    }
    r.push(Check::new("cnot.image.x_z", conj(&x.kron(&z)).max_diff(&y.kron(&y)), 0.0, TOL));
    r.push(Check::new("cnot.image.y_i", conj(&y.kron(&i)).max_diff(&y.kron(&x)), 0.0, TOL));

    // Each of the sixteen products maps to the product of generator images.
    let img_x_i = x.kron(&x);
    let img_z_i = z.kron(&i);
    let img_i_x = i.kron(&x);
    let img_i_z = z.kron(&z);
    let mut worst = 0.0f64;
    for p in 0..4 {
        for q in 0..4 {
            let (pz, px) = zx_exponents(p);
            let (qz, qx) = zx_exponents(q);
            let mut img = Mat::identity(4);
            if pz {
                img = img.mul(&img_z_i);
            }
            if px {
                img = img.mul(&img_x_i);
            }
            if qz {
                img = img.mul(&img_i_z);
            }
            if qx {
                img = img.mul(&img_i_x);
            }
            worst = worst.max(conj(&pauli(p).kron(&pauli(q))).max_diff(&img));
        }
    }
    r.push(Check::new("cnot.products_close", worst, 0.0, TOL));
    r
}

/// Z-cut control (0), X-cut ancilla (1), target-out (2) and target-in (3).
/// The ancilla collects the parity of the other three; its `M_Z` (bit 0)
/// flips the target-out and the `M_X` of target-in (bit 1) applies `Z` to
/// target-out and, with `z_on_control`, to the control.
pub fn zcut_cnot_circuit(z_on_control: bool) -> LogicCircuit {
    let mut ops = vec![
        Op::Gate(Gate1::H, 2),
        Op::Cnot(3, 1),
        Op::Cnot(0, 1),
        Op::Cnot(2, 1),
        Op::Measure { q: 1, basis: MeasureBasis::Z },
        Op::Measure { q: 3, basis: MeasureBasis::X },
        Op::Conditional { bit: 0, when: -1, gate: Gate1::X, q: 2 },
        Op::Conditional { bit: 1, when: -1, gate: Gate1::Z, q: 2 },
    ];
    if z_on_control {
        ops.push(Op::Conditional { bit: 1, when: -1, gate: Gate1::Z, q: 0 });
    }
    LogicCircuit::new(4, ops).expect("fixed circuit")
}

/// X-cut control-in (0), Z-cut ancilla (1), control-out (2) and targets
/// `3..3+targets`. The ancilla drives every other qubit; its `M_X` (bit 0)
/// applies `Z` to control-out and the `M_Z` of control-in (bit 1) flips
/// control-out and every target.
pub fn xcut_cnot_circuit(targets: usize) -> LogicCircuit {
    let mut ops = vec![Op::Gate(Gate1::H, 1), Op::Cnot(1, 0), Op::Cnot(1, 2)];
    ops.extend((0..targets).map(|k| Op::Cnot(1, 3 + k)));
    ops.push(Op::Measure { q: 1, basis: MeasureBasis::X });
    ops.push(Op::Measure { q: 0, basis: MeasureBasis::Z });
    ops.push(Op::Conditional { bit: 0, when: -1, gate: Gate1::Z, q: 2 });
    ops.push(Op::Conditional { bit: 1, when: -1, gate: Gate1::X, q: 2 });
    ops.extend((0..targets).map(|k| Op::Conditional { bit: 1, when: -1, gate: Gate1::X, q: 3 + k }));
    LogicCircuit::new(3 + targets, ops).expect("fixed circuit")
}

/// Product state of groups: each group's state occupies the listed qubits
/// (group qubit `k` on global qubit `qubits[k]`); other qubits are `|g>`.
pub fn place(n: usize, groups: &[(&[usize], &StateVector)]) -> Result<StateVector> {
    let covered = groups.iter().flat_map(|(qs, _)| qs.iter()).fold(0usize, |m, &q| m | 1 << q);
    let amps = (0..1usize << n)
        .map(|i| {
            if i & !covered != 0 {
                return Complex64::new(0.0, 0.0);
            }
            groups.iter().fold(Complex64::new(1.0, 0.0), |acc, (qs, s)| {
                let local = qs.iter().enumerate().fold(0, |l, (k, &q)| l | (i >> q & 1) << k);
                acc * s.amplitudes()[local]
            })
        })
        .collect();
    StateVector::from_amplitudes(amps)
}

pub fn random_state(n: usize, rng: &mut ChaCha8Rng) -> Result<StateVector> {
    let amps = (0..1usize << n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    StateVector::from_amplitudes(amps)
}

fn basis(bit: bool) -> StateVector {
    let mut s = StateVector::new(1).expect("one qubit");
    if bit {
        s.apply(Gate1::X, 0).expect("qubit 0");
    }
    s
}

/// `|+>` for `+1`, `|->` for `-1`.
fn x_eigen(v: i8) -> StateVector {
    let mut s = basis(v < 0);
    s.apply(Gate1::H, 0).expect("qubit 0");
    s
}

/// Fan-out CNOT from qubit 0 onto every other qubit.
fn fan_out(s: &StateVector) -> Result<StateVector> {
    let mut out = s.clone();
    for t in 1..s.n() {
        out.cnot(0, t)?;
    }
    Ok(out)
}

/// Largest projective distance between the Z-cut circuit output and the
/// ideal CNOT over every branch, for an input on (control, target-in).
pub fn zcut_error(input: &StateVector, z_on_control: bool) -> Result<f64> {
    let c = zcut_cnot_circuit(z_on_control);
    let full = place(4, &[(&[0, 3], input)])?;
    let ideal = fan_out(input)?;
    let mut worst = 0.0f64;
    for b in c.branches() {
        let r = c.run(full.clone(), &mut Branching::Forced(&b))?;
        if r.prob < 1e-9 {
            continue;
        }
        let expected = place(4, &[(&[0, 2], &ideal), (&[1], &basis(b[0] < 0)), (&[3], &x_eigen(b[1]))])?;
        worst = worst.max(r.state.projective_distance(&expected));
    }
    Ok(worst)
}

/// Same for the X-cut circuit with `input` on (control-in, targets).
pub fn xcut_error(input: &StateVector) -> Result<f64> {
    let targets = input.n() - 1;
    let c = xcut_cnot_circuit(targets);
    let n = 3 + targets;
    let in_qubits: Vec<usize> = std::iter::once(0).chain(3..n).collect();
    let out_qubits: Vec<usize> = std::iter::once(2).chain(3..n).collect();
    let full = place(n, &[(&in_qubits, input)])?;
    let ideal = fan_out(input)?;
    let mut worst = 0.0f64;
    for b in c.branches() {
        let r = c.run(full.clone(), &mut Branching::Forced(&b))?;
        if r.prob < 1e-9 {
            continue;
        }
        let expected = place(n, &[(&out_qubits, &ideal), (&[1], &x_eigen(b[0])), (&[0], &basis(b[1] < 0))])?;
        worst = worst.max(r.state.projective_distance(&expected));
    }
    Ok(worst)
}

pub fn verify_same_type_cnot(seed: u64) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut r = Report::default();

    // Basis inputs: |control target> -> |control, control xor target>.
    // Correcting target-out alone suffices here.
    let mut basis_ok = 0usize;
    let mut basis_total = 0usize;
    let c = zcut_cnot_circuit(false);
    for (a, d) in [(false, false), (false, true), (true, false), (true, true)] {
        let input = place(2, &[(&[0], &basis(a)), (&[1], &basis(d))])?;
        let full = place(4, &[(&[0, 3], &input)])?;
        for b in c.branches() {
            let out = c.run(full.clone(), &mut Branching::Forced(&b))?;
            let expected = place(4, &[(&[0], &basis(a)), (&[1], &basis(b[0] < 0)), (&[2], &basis(a ^ d)), (&[3], &x_eigen(b[1]))])?;
            basis_total += 1;
            if out.prob > 1e-9 && out.state.projective_distance(&expected) < TOL {
                basis_ok += 1;
            }
        }
    }
    r.push(Check::new("same_type_cnot.zcut.basis_branches", basis_ok as f64, basis_total as f64, 0.0));

    let (mut z_err, mut x_err, mut fan_err) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..RANDOM_INPUTS {
        z_err = z_err.max(zcut_error(&random_state(2, &mut rng)?, true)?);
        x_err = x_err.max(xcut_error(&random_state(2, &mut rng)?)?);
        fan_err = fan_err.max(xcut_error(&random_state(4, &mut rng)?)?);
    }
    r.push(Check::new("same_type_cnot.zcut.superposition", z_err, 0.0, TOL));
    r.push(Check::new("same_type_cnot.xcut.superposition", x_err, 0.0, TOL));
    r.push(Check::new("same_type_cnot.fan_out_three", fan_err, 0.0, TOL));
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heisenberg_checks_pass() {
        let r = verify_cnot_heisenberg();
        assert!(r.all_pass(), "{r}");
        assert_eq!(r.checks.len(), 7);
    }

    #[test]
    fn same_type_checks_pass() {
        let r = verify_same_type_cnot(2).unwrap();
        assert!(r.all_pass(), "{r}");
    }

    /// Walk-through on `|e>` control, `|g>` target-in: the ancilla reads
    /// the control after the first two CNOTs, and the third entangles it
    /// with target-out.
    #[test]
    fn zcut_intermediate_states() {
        let mut s = place(4, &[(&[0], &basis(true))]).unwrap();
        s.apply(Gate1::H, 2).unwrap();
        let start = s.clone();
        s.cnot(3, 1).unwrap();
        assert!(s.projective_distance(&start) < 1e-15);
        s.cnot(0, 1).unwrap();
        let mut ee_plus_g = start.clone();
        ee_plus_g.apply(Gate1::X, 1).unwrap();
        assert!(s.projective_distance(&ee_plus_g) < 1e-15);
        s.cnot(2, 1).unwrap();
        // |e e g g> + |e g e g>: bits 0 and 1 set, or bits 0 and 2 set.
        let a = s.amplitudes();
        assert!((a[0b0011].norm_sqr() - 0.5).abs() < 1e-12);
        assert!((a[0b0101].norm_sqr() - 0.5).abs() < 1e-12);
    }

    /// Without the extra `Z` on the control, superposed controls pick up a
    /// relative phase on the `M_X = -1` branch.
    #[test]
    fn superposed_control_needs_control_correction() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let input = random_state(2, &mut rng).unwrap();
        assert!(zcut_error(&input, false).unwrap() > 1e-3);
        assert!(zcut_error(&input, true).unwrap() < 1e-12);
    }

    /// Brute force: every two-qubit computational input matches the
    /// truth table of CNOT through the X-cut circuit.
    #[test]
    fn xcut_truth_table() {
        for (a, t) in [(false, false), (false, true), (true, false), (true, true)] {
            let input = place(2, &[(&[0], &basis(a)), (&[1], &basis(t))]).unwrap();
            assert!(xcut_error(&input).unwrap() < 1e-12);
        }
    }
}
