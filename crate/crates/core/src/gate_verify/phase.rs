//! S and T circuits driven by injected ancilla states, with byproduct
//! bookkeeping and the measurement sign tables for faulty ancillas.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::circuit::{random_qubit, Branching, LogicCircuit, MeasureBasis, Op};
use super::{Check, Report};
use crate::error::{Error, Result};
use crate::pauli::Gate1;
use crate::pauli::{PauliOp, PauliString, StateVector};

const TOL: f64 = 1e-12;
const S_INPUTS: usize = 100;
const T_INPUTS: usize = 20;
const SHOTS: usize = 10_000;

/// `(|g> + e^{i theta} |e>) / sqrt 2`.
pub fn phase_ancilla(theta: f64) -> StateVector {
    StateVector::from_amplitudes(vec![Complex64::new(FRAC_1_SQRT_2, 0.0), Complex64::from_polar(FRAC_1_SQRT_2, theta)])
        .expect("two amplitudes")
}

fn qubit(a: [Complex64; 2]) -> StateVector {
    StateVector::from_amplitudes(a.to_vec()).expect("two amplitudes")
}

fn applied(s: &StateVector, gates: &[Gate1]) -> Result<StateVector> {
    let mut out = s.clone();
    for &g in gates {
        out.apply(g, 0)?;
    }
    Ok(out)
}

/// Input on qubit 0, `|Y>` ancilla on qubit 1; leaves `S psi` on qubit 0
/// and returns the ancilla unchanged.
pub fn s_circuit() -> LogicCircuit {
    LogicCircuit::new(2, vec![Op::Cnot(0, 1), Op::Gate(Gate1::H, 1), Op::Cnot(0, 1), Op::Gate(Gate1::H, 1)]).expect("fixed circuit")
}

fn split(state: &StateVector) -> Result<(StateVector, StateVector)> {
    // factor_out(0) returns (qubit 1, qubit 0).
    let (rest, q0) = state
        .factor_out(0, TOL)?
        .ok_or_else(|| Error::InvalidArgument("output is entangled".into()))?;
    Ok((q0, rest))
}

pub fn verify_s_circuit(seed: u64) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let y = phase_ancilla(FRAC_PI_2);
    let c = s_circuit();
    let (mut out_err, mut anc_err, mut reuse_err, mut sdg_err) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..S_INPUTS {
        let psi = qubit(random_qubit(&mut rng));
        let r = c.run(psi.tensor(&y)?, &mut Branching::Forced(&[]))?;
        let (out, anc) = split(&r.state)?;
        out_err = out_err.max(out.projective_distance(&applied(&psi, &[Gate1::S])?));
        anc_err = anc_err.max(anc.projective_distance(&y));
        // The returned ancilla drives a second input.
        let psi2 = qubit(random_qubit(&mut rng));
        let r2 = c.run(psi2.tensor(&anc)?, &mut Branching::Forced(&[]))?;
        let (out2, _) = split(&r2.state)?;
        reuse_err = reuse_err.max(out2.projective_distance(&applied(&psi2, &[Gate1::S])?));
        // S^dagger as Z after S.
        sdg_err = sdg_err.max(applied(&out, &[Gate1::Z])?.projective_distance(&applied(&psi, &[Gate1::Sdg])?));
    }
    let mut r = Report::default();
    r.push(Check::new("s_circuit.output", out_err, 0.0, TOL));
    r.push(Check::new("s_circuit.ancilla_returned", anc_err, 0.0, TOL));
    r.push(Check::new("s_circuit.ancilla_reused", reuse_err, 0.0, TOL));
    r.push(Check::new("s_circuit.sdg_as_z_s", sdg_err, 0.0, TOL));
    Ok(r)
}

/// Ancilla on qubit 0 (the output line) controls a CNOT onto the input on
/// qubit 1, which is then measured in Z (bit 0). With `s_when = Some(v)`
/// an `S` follows on the output when the bit reads `v`.
pub fn injection_circuit(s_when: Option<i8>) -> LogicCircuit {
    let mut ops = vec![Op::Cnot(0, 1), Op::Measure { q: 1, basis: MeasureBasis::Z }];
    if let Some(when) = s_when {
        ops.push(Op::Conditional { bit: 0, when, gate: Gate1::S, q: 0 });
    }
    LogicCircuit::new(2, ops).expect("fixed circuit")
}

/// Output line after a forced branch; `None` when the branch is impossible.
fn inject(ancilla: &StateVector, psi: &StateVector, s_when: Option<i8>, outcome: i8) -> Result<Option<StateVector>> {
    let r = injection_circuit(s_when).run(ancilla.tensor(psi)?, &mut Branching::Forced(&[outcome]))?;
    if r.prob < 1e-9 {
        return Ok(None);
    }
    let (out, _) = split(&r.state)?;
    Ok(Some(out))
}

/// T-gate rows: input byproduct, outcome, expected output as gates applied
/// to `psi` in order.
const T_ROWS: [(&[Gate1], i8, &[Gate1], &str); 6] = [
    (&[], 1, &[Gate1::T], "psi.plus"),
    (&[], -1, &[Gate1::T, Gate1::Z, Gate1::X], "psi.minus"),
    (&[Gate1::Z], 1, &[Gate1::T, Gate1::Z], "z_psi.plus"),
    (&[Gate1::Z], -1, &[Gate1::T, Gate1::X], "z_psi.minus"),
    (&[Gate1::X], 1, &[Gate1::T, Gate1::Z, Gate1::X], "x_psi.plus"),
    (&[Gate1::X], -1, &[Gate1::T], "x_psi.minus"),
];

pub fn verify_t_circuit(seed: u64) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7);
    let a = phase_ancilla(FRAC_PI_4);
    let mut r = Report::default();
    let psis: Vec<StateVector> = (0..T_INPUTS).map(|_| qubit(random_qubit(&mut rng))).collect();
    for (pre, outcome, expected, name) in T_ROWS {
        // S follows when the outcome times the known X byproduct is -1.
        let known_x = pre.contains(&Gate1::X);
        let s_when = if known_x { 1 } else { -1 };
        let mut worst = 0.0f64;
        for psi in &psis {
            let input = applied(psi, pre)?;
            let out = inject(&a, &input, Some(s_when), outcome)?.ok_or_else(|| Error::InvalidArgument("empty branch".into()))?;
            worst = worst.max(out.projective_distance(&applied(psi, expected)?));
        }
        r.push(Check::new(format!("t_circuit.{name}"), worst, 0.0, TOL));
    }
    // Without the conditional S the -1 branch carries X T^dagger.
    let mut raw = 0.0f64;
    let mut general = 0.0f64;
    for psi in &psis {
        let out = inject(&a, psi, None, -1)?.expect("nonzero branch");
        raw = raw.max(out.projective_distance(&applied(psi, &[Gate1::Tdg, Gate1::X])?));
        let theta = rng.gen_range(-PI..PI);
        for (outcome, sign) in [(1i8, 1.0), (-1, -1.0)] {
            let out = inject(&phase_ancilla(theta), psi, None, outcome)?.expect("nonzero branch");
            let mut gates = vec![Gate1::Rz(sign * theta)];
            if outcome < 0 {
                gates.push(Gate1::X);
            }
            general = general.max(out.projective_distance(&applied(psi, &gates)?));
        }
    }
    r.push(Check::new("t_circuit.minus_without_s", raw, 0.0, TOL));
    r.push(Check::new("t_circuit.general_angle", general, 0.0, TOL));
    Ok(r)
}

/// Sign of the output `M_X` relative to the ideal one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cell {
    Same,
    Flipped,
    /// Unrelated: 50/50.
    Either,
}

/// A faulty-ancilla table: ancilla error, the equivalent phase angle, and
/// the cells for outcomes `+1` and `-1`.
pub struct SignTable {
    pub name: &'static str,
    pub ancilla_angle: f64,
    /// Conditional `S` on this outcome.
    pub s_when: Option<i8>,
    /// Ideal output as gates on `psi`.
    pub ideal: &'static [Gate1],
    pub rows: [(Option<Gate1>, f64, [Cell; 2]); 4],
}

pub fn sign_tables() -> [SignTable; 2] {
    use Cell::*;
    [
        SignTable {
            name: "s_ancilla",
            ancilla_angle: FRAC_PI_2,
            s_when: None,
            ideal: &[Gate1::S],
            rows: [
                (None, FRAC_PI_2, [Same, Flipped]),
                (Some(Gate1::Z), -FRAC_PI_2, [Flipped, Same]),
                (Some(Gate1::X), -FRAC_PI_2, [Flipped, Same]),
                (Some(Gate1::Y), FRAC_PI_2, [Same, Flipped]),
            ],
        },
        SignTable {
            name: "t_ancilla",
            ancilla_angle: FRAC_PI_4,
            s_when: Some(1),
            ideal: &[Gate1::Tdg],
            rows: [
                (None, FRAC_PI_4, [Flipped, Same]),
                (Some(Gate1::Z), -3.0 * FRAC_PI_4, [Same, Flipped]),
                (Some(Gate1::X), -FRAC_PI_4, [Either, Either]),
                (Some(Gate1::Y), 3.0 * FRAC_PI_4, [Either, Either]),
            ],
        },
    ]
}

fn x0() -> PauliString {
    PauliString::single(0, PauliOp::X)
}

fn error_name(e: Option<Gate1>) -> &'static str {
    match e {
        None => "none",
        Some(Gate1::X) => "x",
        Some(Gate1::Y) => "y",
        Some(Gate1::Z) => "z",
        Some(_) => "other",
    }
}

/// Fraction of `+1` output `M_X` results among `shots` runs that landed on
/// `outcome`.
fn sampled_plus_fraction(ancilla: &StateVector, psi: &StateVector, s_when: Option<i8>, outcome: i8, rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut ops = injection_circuit(s_when).ops().to_vec();
    ops.push(Op::Measure { q: 0, basis: MeasureBasis::X });
    let c = LogicCircuit::new(2, ops)?;
    let input = ancilla.tensor(psi)?;
    let (mut kept, mut plus) = (0usize, 0usize);
    while kept < SHOTS {
        let r = c.run(input.clone(), &mut Branching::Sample(rng))?;
        if r.bits[0] == outcome {
            kept += 1;
            plus += usize::from(r.bits[1] > 0);
        }
    }
    Ok(plus as f64 / SHOTS as f64)
}

pub fn verify_sign_tables(seed: u64) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x1);
    let mut r = Report::default();
    let three_sigma = 3.0 * (0.25 / SHOTS as f64).sqrt();
    for table in sign_tables() {
        let clean = phase_ancilla(table.ancilla_angle);
        // Reference input whose ideal output is |+>.
        let mut reference = StateVector::from_amplitudes(vec![Complex64::new(FRAC_1_SQRT_2, 0.0); 2])?;
        for g in table.ideal.iter().rev() {
            let inverse = match g {
                Gate1::S => Gate1::Sdg,
                Gate1::Tdg => Gate1::T,
                other => *other,
            };
            reference.apply(inverse, 0)?;
        }
        let psis: Vec<StateVector> = (0..T_INPUTS).map(|_| qubit(random_qubit(&mut rng))).collect();
        for (err, angle, cells) in table.rows {
            let ancilla = match err {
                Some(g) => applied(&clean, &[g])?,
                None => clean.clone(),
            };
            let tag = format!("sign_table.{}.{}", table.name, error_name(err));
            r.push(Check::new(format!("{tag}.angle"), ancilla.projective_distance(&phase_ancilla(angle)), 0.0, TOL));
            for (k, outcome) in [1i8, -1].into_iter().enumerate() {
                let id = format!("{tag}.{}", if outcome > 0 { "plus" } else { "minus" });
                match cells[k] {
                    Cell::Same | Cell::Flipped => {
                        let sign = if cells[k] == Cell::Same { 1.0 } else { -1.0 };
                        let mut worst = 0.0f64;
                        for psi in &psis {
                            let out = inject(&ancilla, psi, table.s_when, outcome)?.expect("nonzero branch");
                            let ideal = applied(psi, table.ideal)?;
                            worst = worst.max((out.expectation(&x0())? - sign * ideal.expectation(&x0())?).abs());
                        }
                        r.push(Check::new(id, worst, 0.0, TOL));
                    }
                    Cell::Either => {
                        let out = inject(&ancilla, &reference, table.s_when, outcome)?.expect("nonzero branch");
                        r.push(Check::new(format!("{id}.expectation"), out.expectation(&x0())?, 0.0, TOL));
                        let f = sampled_plus_fraction(&ancilla, &reference, table.s_when, outcome, &mut rng)?;
                        r.push(Check::new(format!("{id}.sampled"), f, 0.5, three_sigma));
                    }
                }
            }
        }
    }
    Ok(r)
}
