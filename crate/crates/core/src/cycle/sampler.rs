use rand::Rng;

use super::circuit::RoundCircuit;
use super::{frame_round, seeds, ErrorModel, PauliFrame};
use crate::error::Result;
use crate::lattice::{logical_chain, ArrayLayout, QubitRef, StabKind, Which};

/// Draws the faults of one cycle. Each point of class `k` fires with
/// probability `p_k`, found by geometric skipping, and then picks one of its
/// options uniformly. Output is sorted by point id.
pub fn sample_faults<R: Rng + ?Sized>(c: &RoundCircuit, model: &ErrorModel, rng: &mut R, out: &mut Vec<(u32, u8)>) {
    out.clear();
    for class in 0..3u8 {
        let p = model.rate(class);
        let points = &c.class_points[class as usize];
        if p <= 0.0 || points.is_empty() {
            continue;
        }
        let pick = |rng: &mut R, id: u32| {
            let n = c.points[id as usize].kind.options();
            (id, if n == 1 { 0 } else { rng.gen_range(0..n) })
        };
        if p >= 1.0 {
            for &id in points {
                out.push(pick(rng, id));
            }
            continue;
        }
        let log_q = (-p).ln_1p();
        let mut i = 0usize;
        loop {
            let u: f64 = 1.0 - rng.gen::<f64>();
            let skip = (u.ln() / log_q).floor();
            if skip >= (points.len() - i) as f64 {
                break;
            }
            i += skip as usize;
            out.push(pick(rng, points[i]));
            i += 1;
            if i >= points.len() {
                break;
            }
        }
    }
    out.sort_unstable_by_key(|f| f.0);
}

/// Effect of one fault option, found by simulating a single cycle.
///
/// A fault in round `t` flips the measurements in `now` at round `t` and the
/// detection events in `next` at round `t + 1` (indices into
/// [`RoundCircuit::measures`]). `delta` is the data frame it leaves behind
/// as `(site, bits)` with bit 0 = X, bit 1 = Z, and `flips` records whether
/// that frame flips `X_L` (bit 0) or `Z_L` (bit 1).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FaultEffect {
    pub now: Vec<u32>,
    pub next: Vec<u32>,
    pub delta: Vec<(u32, u8)>,
    pub flips: u8,
}

/// Effects of every option of every fault point. Option `o` of point `p`
/// is entry `base[p] + o`.
pub fn fault_effects(circuit: &RoundCircuit, layout: &ArrayLayout) -> (Vec<u32>, Vec<FaultEffect>) {
    let zl = logical_chain(layout, Which::ZL, QubitRef::Planar).ok();
    let xl = logical_chain(layout, Which::XL, QubitRef::Planar).ok();
    let mut on_zl = vec![false; circuit.n_sites];
    let mut on_xl = vec![false; circuit.n_sites];
    for q in zl.iter().flat_map(|p| p.qubits()) {
        on_zl[q] = true;
    }
    for q in xl.iter().flat_map(|p| p.qubits()) {
        on_xl[q] = true;
    }
    let nm = circuit.num_measures();
    let mut base = Vec::with_capacity(circuit.points.len());
    let mut effects = Vec::new();
    let mut row = vec![false; nm];
    let mut syn = vec![false; nm];
    for (p, point) in circuit.points.iter().enumerate() {
        base.push(effects.len() as u32);
        for o in 0..point.kind.options() {
            let mut frame = PauliFrame::new(circuit.n_sites);
            row.fill(false);
            frame_round(circuit, &mut frame, &[(p as u32, o)], &mut row);
            let frame = frame.restricted(&circuit.data);
            let mut probe = frame.clone();
            syn.fill(false);
            frame_round(circuit, &mut probe, &[], &mut syn);
            let mut e = FaultEffect::default();
            for i in 0..nm {
                if row[i] {
                    e.now.push(i as u32);
                }
                if row[i] ^ syn[i] {
                    e.next.push(i as u32);
                }
            }
            let (mut fx, mut fz) = (false, false);
            for &q in &circuit.data {
                let q = q as usize;
                let bits = u8::from(frame.x[q]) | (u8::from(frame.z[q]) << 1);
                if bits != 0 {
                    e.delta.push((q as u32, bits));
                }
                fx ^= frame.x[q] && on_zl[q];
                fz ^= frame.z[q] && on_xl[q];
            }
            e.flips = u8::from(fx) | (u8::from(fz) << 1);
            effects.push(e);
        }
    }
    (base, effects)
}

/// Detection-event sampler built from per-fault effects; produces the same
/// events as the step-by-step simulation for the same seed.
#[derive(Debug, Clone)]
pub struct FastSampler {
    circuit: RoundCircuit,
    model: ErrorModel,
    base: Vec<u32>,
    /// Effects with measurement indices replaced by detector slots.
    effects: Vec<FaultEffect>,
    /// Recorded detector slot of each measurement, or `u32::MAX`.
    slot: Vec<u32>,
    detectors: Vec<u32>,
}

#[derive(Debug, Clone, Default)]
pub struct ShotSample {
    /// `(round, detector)` sorted by round then detector; detector indexes
    /// [`FastSampler::detectors`].
    pub events: Vec<(u32, u32)>,
    /// Bit 0: the data frame flips `X_L`; bit 1: it flips `Z_L`.
    pub flips: u8,
    pub faults: usize,
    rows: Vec<u64>,
    scratch: Vec<(u32, u8)>,
}

impl FastSampler {
    /// `record`: which stabilizer kinds produce detection events.
    pub fn new(layout: &ArrayLayout, model: ErrorModel, record: &[StabKind]) -> Result<Self> {
        model.validate()?;
        let circuit = RoundCircuit::new(layout);
        let mut slot = vec![u32::MAX; circuit.num_measures()];
        let mut detectors = Vec::new();
        for (i, m) in circuit.measures.iter().enumerate() {
            if record.contains(&m.kind) {
                slot[i] = detectors.len() as u32;
                detectors.push(i as u32);
            }
        }
        let (base, mut effects) = fault_effects(&circuit, layout);
        let keep = |v: &mut Vec<u32>| {
            *v = v.iter().filter(|&&i| slot[i as usize] != u32::MAX).map(|&i| slot[i as usize]).collect();
        };
        for e in &mut effects {
            keep(&mut e.now);
            keep(&mut e.next);
        }
        Ok(FastSampler { circuit, model, base, effects, slot, detectors })
    }

    pub fn circuit(&self) -> &RoundCircuit {
        &self.circuit
    }

    pub fn model(&self) -> &ErrorModel {
        &self.model
    }

    /// Measurement index of each detector slot.
    pub fn detectors(&self) -> &[u32] {
        &self.detectors
    }

    /// Detector slot of a measurement index.
    pub fn slot_of(&self, measure: usize) -> Option<u32> {
        let s = self.slot[measure];
        (s != u32::MAX).then_some(s)
    }

    /// Samples one shot of `rounds` noisy cycles plus the noiseless readout.
    pub fn sample(&self, rounds: usize, master: u64, shot: u64, out: &mut ShotSample) {
        self.sample_inner(rounds, master, shot, out, None);
    }

    /// As [`FastSampler::sample`], also accumulating the data frame.
    pub fn sample_with_truth(&self, rounds: usize, master: u64, shot: u64, out: &mut ShotSample) -> PauliFrame {
        let mut truth = PauliFrame::new(self.circuit.n_sites);
        self.sample_inner(rounds, master, shot, out, Some(&mut truth));
        truth
    }

    fn sample_inner(&self, rounds: usize, master: u64, shot: u64, out: &mut ShotSample, mut truth: Option<&mut PauliFrame>) {
        let words = self.detectors.len().div_ceil(64).max(1);
        out.rows.clear();
        out.rows.resize((rounds + 1) * words, 0);
        out.events.clear();
        out.flips = 0;
        out.faults = 0;
        let mut faults = std::mem::take(&mut out.scratch);
        for t in 0..rounds {
            let mut rng = seeds::round_rng(master, shot, t as u64);
            sample_faults(&self.circuit, &self.model, &mut rng, &mut faults);
            out.faults += faults.len();
            let (now_row, next_row) = (t * words, (t + 1) * words);
            for &(p, o) in &faults {
                let e = &self.effects[(self.base[p as usize] + o as u32) as usize];
                for &d in &e.now {
                    out.rows[now_row + d as usize / 64] ^= 1 << (d % 64);
                }
                for &d in &e.next {
                    out.rows[next_row + d as usize / 64] ^= 1 << (d % 64);
                }
                out.flips ^= e.flips;
                if let Some(tr) = truth.as_deref_mut() {
                    for &(q, bits) in &e.delta {
                        tr.x[q as usize] ^= bits & 1 != 0;
                        tr.z[q as usize] ^= bits & 2 != 0;
                    }
                }
            }
        }
        out.scratch = faults;
        for t in 0..=rounds {
            for w in 0..words {
                let mut bits = out.rows[t * words + w];
                while bits != 0 {
                    let b = bits.trailing_zeros();
                    out.events.push((t as u32, (w * 64) as u32 + b));
                    bits &= bits - 1;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycle::{detection_events, run_shot};
    use crate::lattice::build_planar;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn matches_step_by_step_simulation() {
        for d in [3, 5] {
            let l = build_planar(d).unwrap();
            let model = ErrorModel { p0: 0.01, p1: 0.02, p2: 0.015 };
            let fast = FastSampler::new(&l, model, &[StabKind::X, StabKind::Z]).unwrap();
            let c = fast.circuit().clone();
            let mut s = ShotSample::default();
            for shot in 0..300 {
                let truth = fast.sample_with_truth(d, 99, shot, &mut s);
                let slow = run_shot(&c, &model, d, 99, shot);
                let want: Vec<(u32, u32)> = detection_events(&slow.record)
                    .iter()
                    .map(|e| (e.round as u32, fast.slot_of(c.measure_index(e.measure_coord).unwrap()).unwrap()))
                    .collect();
                let mut got = s.events.clone();
                got.sort_unstable();
                let mut want = want;
                want.sort_unstable();
                assert_eq!(got, want, "d={d} shot={shot}");
                assert_eq!(truth, slow.truth);
            }
        }
    }

    #[test]
    fn class0_count_matches_four_p() {
        let l = build_planar(5).unwrap();
        let c = RoundCircuit::new(&l);
        let p = 0.01;
        let model = ErrorModel::only_class(0, p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut f = Vec::new();
        let data = c.data.len() as f64;
        let cycles = (1_000_000.0 / data).ceil() as usize;
        let mut total = 0usize;
        for _ in 0..cycles {
            sample_faults(&c, &model, &mut rng, &mut f);
            total += f.len();
        }
        let samples = cycles as f64 * data;
        let mean = total as f64 / samples;
        let sigma = (4.0 * p * (1.0 - p) / samples).sqrt();
        assert!((mean - 4.0 * p).abs() < 3.0 * sigma, "{mean}");
    }

    #[test]
    fn certain_faults_hit_every_point() {
        let l = build_planar(3).unwrap();
        let c = RoundCircuit::new(&l);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut f = Vec::new();
        sample_faults(&c, &ErrorModel::uniform(1.0), &mut rng, &mut f);
        assert_eq!(f.len(), c.points.len());
        sample_faults(&c, &ErrorModel::noiseless(), &mut rng, &mut f);
        assert!(f.is_empty());
    }
}
