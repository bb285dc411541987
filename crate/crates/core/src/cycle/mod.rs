//! Pauli-frame simulation of repeated surface-code cycles.
//!
//! Outcomes are stored relative to the noiseless run, so a record bit is 1
//! exactly when the frame flips that measurement. The pre-noise reference is
//! all zeros. Every record ends with one noiseless readout round so that all
//! error chains terminate.

mod circuit;
mod sampler;
pub mod seeds;

pub use circuit::{pair_option, single_option, FaultKind, FaultPoint, MeasureInfo, Op, RoundCircuit};
pub use sampler::{fault_effects, sample_faults, FastSampler, FaultEffect, ShotSample};

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::lattice::{ArrayLayout, Coord, StabKind};
use crate::pauli::{CliffordGate, PauliOp, PauliString, StabilizerTableau};

/// Per-step error rates of the three error classes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorModel {
    pub p0: f64,
    pub p1: f64,
    pub p2: f64,
}

impl ErrorModel {
    pub fn uniform(p: f64) -> Self {
        ErrorModel { p0: p, p1: p, p2: p }
    }

    pub fn noiseless() -> Self {
        Self::uniform(0.0)
    }

    /// Only class `class` is noisy.
    pub fn only_class(class: u8, p: f64) -> Result<Self> {
        let mut m = Self::noiseless();
        match class {
            0 => m.p0 = p,
            1 => m.p1 = p,
            2 => m.p2 = p,
            _ => return Err(Error::InvalidArgument(format!("unknown error class {class}"))),
        }
        Ok(m)
    }

    pub fn rate(&self, class: u8) -> f64 {
        [self.p0, self.p1, self.p2][class as usize]
    }

    pub fn validate(&self) -> Result<()> {
        for p in [self.p0, self.p1, self.p2] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidArgument(format!("rate {p} outside [0, 1]")));
            }
        }
        Ok(())
    }
}

/// X and Z error bits over all sites; a Y error sets both.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PauliFrame {
    pub x: Vec<bool>,
    pub z: Vec<bool>,
}

impl PauliFrame {
    pub fn new(n: usize) -> Self {
        PauliFrame { x: vec![false; n], z: vec![false; n] }
    }

    pub fn xor(&mut self, other: &PauliFrame) {
        for (a, b) in self.x.iter_mut().zip(&other.x) {
            *a ^= b;
        }
        for (a, b) in self.z.iter_mut().zip(&other.z) {
            *a ^= b;
        }
    }

    pub fn apply(&mut self, q: usize, op: PauliOp) {
        let (zb, xb) = op.bits();
        self.x[q] ^= xb;
        self.z[q] ^= zb;
    }

    /// Keep only the given sites.
    pub fn restricted(&self, sites: &[u32]) -> PauliFrame {
        let mut out = PauliFrame::new(self.x.len());
        for &s in sites {
            out.x[s as usize] = self.x[s as usize];
            out.z[s as usize] = self.z[s as usize];
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyndromeRecord {
    /// Noisy rounds; `outcomes` has one extra noiseless readout row.
    pub rounds: usize,
    pub measures: Vec<MeasureInfo>,
    pub outcomes: Vec<Vec<bool>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct DetectionEvent {
    pub round: usize,
    pub measure_coord: Coord,
    pub kind: StabKind,
}

/// A simulated run with its ground-truth data frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shot {
    pub record: SyndromeRecord,
    pub truth: PauliFrame,
}

/// Apply option `o` of fault point `p`.
fn apply_fault(c: &RoundCircuit, frame: &mut PauliFrame, outcomes: &mut [bool], p: u32, o: u8) {
    match c.points[p as usize].kind {
        FaultKind::Init(q) => frame.x[q as usize] ^= true,
        FaultKind::Single(q) => frame.apply(q as usize, single_option(o)),
        FaultKind::Pair(a, b) => {
            let (pa, pb) = pair_option(o);
            frame.apply(a as usize, pa);
            frame.apply(b as usize, pb);
        }
        FaultKind::Flip(i) => outcomes[i as usize] ^= true,
    }
}

/// One cycle of the step-by-step frame simulation. `faults` are
/// `(point, option)` pairs sorted by point id.
pub fn frame_round(c: &RoundCircuit, frame: &mut PauliFrame, faults: &[(u32, u8)], outcomes: &mut [bool]) {
    let mut next = 0;
    for op in &c.ops {
        match *op {
            Op::Reset(q) => {
                frame.x[q as usize] = false;
                frame.z[q as usize] = false;
            }
            Op::H(q) => {
                let q = q as usize;
                std::mem::swap(&mut frame.x[q], &mut frame.z[q]);
            }
            Op::Cnot(a, b) => {
                let (a, b) = (a as usize, b as usize);
                frame.x[b] ^= frame.x[a];
                frame.z[a] ^= frame.z[b];
            }
            Op::Measure { site, idx } => outcomes[idx as usize] = frame.x[site as usize],
            Op::Fault(p) => {
                while next < faults.len() && faults[next].0 == p {
                    apply_fault(c, frame, outcomes, p, faults[next].1);
                    next += 1;
                }
            }
        }
    }
    debug_assert_eq!(next, faults.len(), "fault list not sorted by point id");
}

/// One cycle on the exact stabilizer simulator, with outcome bits set for
/// `-1` results. Random outcomes (only possible before the code state is
/// established) take the `+1` branch.
pub fn tableau_round(
    c: &RoundCircuit,
    t: &mut StabilizerTableau,
    faults: &[(u32, u8)],
    outcomes: &mut [bool],
) -> Result<()> {
    let mut next = 0;
    for op in &c.ops {
        match *op {
            Op::Reset(q) => t.apply(CliffordGate::Reset(q as usize))?,
            Op::H(q) => t.apply(CliffordGate::H(q as usize))?,
            Op::Cnot(a, b) => t.apply(CliffordGate::Cnot(a as usize, b as usize))?,
            Op::Measure { site, idx } => {
                let m = t.measure_forced(&PauliString::single(site as usize, PauliOp::Z), 1)?;
                outcomes[idx as usize] = m.value < 0;
            }
            Op::Fault(p) => {
                while next < faults.len() && faults[next].0 == p {
                    let o = faults[next].1;
                    match c.points[p as usize].kind {
                        FaultKind::Init(q) => t.apply(CliffordGate::X(q as usize))?,
                        FaultKind::Single(q) => t.apply_pauli(&PauliString::single(q as usize, single_option(o)))?,
                        FaultKind::Pair(a, b) => {
                            let (pa, pb) = pair_option(o);
                            t.apply_pauli(&PauliString::from_ops([(a as usize, pa), (b as usize, pb)]))?;
                        }
                        FaultKind::Flip(i) => outcomes[i as usize] ^= true,
                    }
                    next += 1;
                }
            }
        }
    }
    Ok(())
}

/// Runs `faults.len()` noisy rounds with explicit faults, then a noiseless
/// readout round.
pub fn run_with_faults(layout: &ArrayLayout, faults: &[Vec<(u32, u8)>]) -> Shot {
    let c = RoundCircuit::new(layout);
    run_circuit_with_faults(&c, faults)
}

pub fn run_circuit_with_faults(c: &RoundCircuit, faults: &[Vec<(u32, u8)>]) -> Shot {
    let mut frame = PauliFrame::new(c.n_sites);
    let mut outcomes = Vec::with_capacity(faults.len() + 1);
    for f in faults.iter().map(Vec::as_slice).chain(std::iter::once(&[][..])) {
        let mut row = vec![false; c.num_measures()];
        frame_round(c, &mut frame, f, &mut row);
        outcomes.push(row);
    }
    Shot {
        record: SyndromeRecord { rounds: faults.len(), measures: c.measures.clone(), outcomes },
        truth: frame.restricted(&c.data),
    }
}

/// Samples the error model for `rounds` noisy cycles and simulates them
/// step by step. Uses shot 0 of the seed scheme in [`seeds`].
pub fn run_rounds(layout: &ArrayLayout, model: &ErrorModel, rounds: usize, seed: u64) -> Result<Shot> {
    if rounds == 0 {
        return Err(Error::InvalidArgument("rounds must be at least 1".into()));
    }
    model.validate()?;
    let c = RoundCircuit::new(layout);
    Ok(run_shot(&c, model, rounds, seed, 0))
}

pub fn run_shot(c: &RoundCircuit, model: &ErrorModel, rounds: usize, master: u64, shot: u64) -> Shot {
    let faults: Vec<Vec<(u32, u8)>> = (0..rounds)
        .map(|t| {
            let mut rng = seeds::round_rng(master, shot, t as u64);
            let mut f = Vec::new();
            sample_faults(c, model, &mut rng, &mut f);
            f
        })
        .collect();
    run_circuit_with_faults(c, &faults)
}

/// XOR of consecutive rounds, with the zero reference before round 0.
pub fn detection_events(record: &SyndromeRecord) -> Vec<DetectionEvent> {
    let mut out = Vec::new();
    let mut prev = vec![false; record.measures.len()];
    for (t, row) in record.outcomes.iter().enumerate() {
        for (i, (&a, &b)) in row.iter().zip(&prev).enumerate() {
            if a != b {
                let m = record.measures[i];
                out.push(DetectionEvent { round: t, measure_coord: m.coord, kind: m.kind });
            }
        }
        prev.clone_from(row);
    }
    out
}

pub const EVENT_CSV_HEADER: &str = "shot,round,row,col,kind";

pub fn events_csv(shot: u64, events: &[DetectionEvent]) -> String {
    let mut s = String::new();
    for e in events {
        let kind = if e.kind == StabKind::X { 'X' } else { 'Z' };
        let _ = writeln!(s, "{shot},{},{},{},{kind}", e.round, e.measure_coord.0, e.measure_coord.1);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::build_planar;
    use std::collections::BTreeSet;

    /// Fault point of data qubit `q` idling in cycle step `step` (1, 2, 7, 8).
    pub(crate) fn idle_point(c: &RoundCircuit, q: u32, step: usize) -> u32 {
        let k = [1, 2, 7, 8].iter().position(|&s| s == step).unwrap();
        *c.class_points[0].iter().filter(|&&p| c.points[p as usize].kind == FaultKind::Single(q)).nth(k).unwrap()
    }

    fn opt(op: PauliOp) -> u8 {
        match op {
            PauliOp::X => 0,
            PauliOp::Y => 1,
            PauliOp::Z => 2,
            PauliOp::I => unreachable!(),
        }
    }

    fn event_set(ev: &[DetectionEvent]) -> BTreeSet<(usize, Coord)> {
        ev.iter().map(|e| (e.round, e.measure_coord)).collect()
    }

    #[test]
    fn noiseless_record_is_zero() {
        let l = build_planar(3).unwrap();
        let s = run_rounds(&l, &ErrorModel::noiseless(), 4, 1).unwrap();
        assert_eq!(s.record.outcomes.len(), 5);
        assert!(s.record.outcomes.iter().flatten().all(|&b| !b));
        assert!(detection_events(&s.record).is_empty());
        assert!(run_rounds(&l, &ErrorModel::noiseless(), 0, 1).is_err());
    }

    #[test]
    fn bulk_z_error_fires_two_measure_x() {
        let l = build_planar(5).unwrap();
        let c = RoundCircuit::new(&l);
        let q = l.index((4, 4)) as u32;
        let mut faults = vec![Vec::new(); 3];
        faults[0].push((idle_point(&c, q, 8), opt(PauliOp::Z)));
        let ev = detection_events(&run_circuit_with_faults(&c, &faults).record);
        assert_eq!(event_set(&ev), BTreeSet::from([(1, (3, 4)), (1, (5, 4))]));
        assert!(ev.iter().all(|e| e.kind == StabKind::X));
    }

    #[test]
    fn bulk_y_error_fires_four() {
        let l = build_planar(5).unwrap();
        let c = RoundCircuit::new(&l);
        let q = l.index((4, 4)) as u32;
        let mut faults = vec![Vec::new(); 2];
        faults[0].push((idle_point(&c, q, 8), opt(PauliOp::Y)));
        let ev = detection_events(&run_circuit_with_faults(&c, &faults).record);
        assert_eq!(event_set(&ev), BTreeSet::from([(1, (3, 4)), (1, (5, 4)), (1, (4, 3)), (1, (4, 5))]));
    }

    #[test]
    fn measurement_flip_is_a_time_pair() {
        let l = build_planar(5).unwrap();
        let c = RoundCircuit::new(&l);
        let idx = c.measure_index((4, 3)).unwrap() as u32;
        let flip = *c.class_points[1].iter().find(|&&p| c.points[p as usize].kind == FaultKind::Flip(idx)).unwrap();
        let mut faults = vec![Vec::new(); 4];
        faults[2].push((flip, 0));
        let ev = detection_events(&run_circuit_with_faults(&c, &faults).record);
        assert_eq!(event_set(&ev), BTreeSet::from([(2, (4, 3)), (3, (4, 3))]));
    }

    #[test]
    fn shared_stabilizer_cancels() {
        // X on (4,4) and (4,6) share measure-Z (4,5).
        let l = build_planar(5).unwrap();
        let c = RoundCircuit::new(&l);
        let mut faults = vec![Vec::new(); 2];
        for q in [(4, 4), (4, 6)] {
            faults[0].push((idle_point(&c, l.index(q) as u32, 8), opt(PauliOp::X)));
        }
        faults[0].sort();
        let ev = detection_events(&run_circuit_with_faults(&c, &faults).record);
        assert_eq!(event_set(&ev), BTreeSet::from([(1, (4, 3)), (1, (4, 7))]));
    }

    #[test]
    fn class_validation() {
        assert!(ErrorModel::only_class(3, 0.1).is_err());
        assert!(ErrorModel::uniform(1.5).validate().is_err());
        assert_eq!(ErrorModel::only_class(2, 0.01).unwrap().rate(2), 0.01);
    }

    #[test]
    fn runs_are_deterministic() {
        let l = build_planar(3).unwrap();
        let m = ErrorModel::uniform(0.02);
        assert_eq!(run_rounds(&l, &m, 3, 42).unwrap(), run_rounds(&l, &m, 3, 42).unwrap());
        assert_ne!(run_rounds(&l, &m, 3, 42).unwrap(), run_rounds(&l, &m, 3, 43).unwrap());
    }

    #[test]
    fn csv_rows() {
        let ev = [DetectionEvent { round: 2, measure_coord: (4, 3), kind: StabKind::Z }];
        assert_eq!(events_csv(7, &ev), "7,2,4,3,Z\n");
    }
}
