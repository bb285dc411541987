use rayon::prelude::*;

use super::RatePoint;
use crate::cycle::seeds::mix;
use crate::cycle::{ErrorModel, FastSampler, ShotSample};
use crate::decoder::DecodingGraph;
use crate::error::{Error, Result};
use crate::lattice::{build_planar, StabKind};

/// One Monte Carlo point: `shots` runs of `rounds` cycles on a distance-`d`
/// planar array, counting `X_L` failures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointSpec {
    pub d: usize,
    /// Abscissa reported with the result.
    pub p: f64,
    pub model: ErrorModel,
    pub shots: u64,
    pub rounds: usize,
    pub seed: u64,
}

impl PointSpec {
    /// `rounds = d`, the run length used for per-cycle rates.
    pub fn new(d: usize, p: f64, model: ErrorModel, shots: u64, seed: u64) -> Self {
        PointSpec { d, p, model, shots, rounds: d, seed }
    }

    /// Master seed of this point; distinct points draw independent shots.
    pub fn master_seed(&self) -> u64 {
        mix(self.seed ^ mix(self.d as u64) ^ mix(self.p.to_bits().rotate_left(17)))
    }
}

/// Runs one point. Shots run on the current rayon pool; the count does not
/// depend on the number of threads.
pub fn run_point(spec: &PointSpec) -> Result<RatePoint> {
    if spec.rounds == 0 {
        return Err(Error::InvalidArgument("rounds must be at least 1".into()));
    }
    let layout = build_planar(spec.d)?;
    let sampler = FastSampler::new(&layout, spec.model, &[StabKind::Z])?;
    let graph = DecodingGraph::for_model(&layout, StabKind::Z, spec.rounds, &spec.model)?;
    debug_assert_eq!(sampler.detectors(), graph.detectors());
    let master = spec.master_seed();
    const CHUNK: u64 = 512;
    let failures = (0..spec.shots.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut s = ShotSample::default();
            let mut fails = 0u64;
            for shot in c * CHUNK..((c + 1) * CHUNK).min(spec.shots) {
                sampler.sample(spec.rounds, master, shot, &mut s);
                fails += u64::from(graph.correction_flips(&s.events) ^ (s.flips & 1 == 1));
            }
            fails
        })
        .sum();
    Ok(RatePoint { d: spec.d, p: spec.p, shots: spec.shots, failures, rounds: spec.rounds })
}

/// Every `(d, p)` combination with `model(p)` as the error model.
pub fn run_sweep(ds: &[usize], ps: &[f64], model: impl Fn(f64) -> Result<ErrorModel>, shots: u64, seed: u64) -> Result<Vec<RatePoint>> {
    let mut out = Vec::with_capacity(ds.len() * ps.len());
    for &d in ds {
        for &p in ps {
            out.push(run_point(&PointSpec::new(d, p, model(p)?, shots, seed))?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn independent_of_thread_count() {
        let spec = PointSpec::new(3, 0.01, ErrorModel::uniform(0.01), 3000, 42);
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(|| run_point(&spec)).unwrap();
        let three = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap().install(|| run_point(&spec)).unwrap();
        assert_eq!(one, three);
        assert!(one.failures > 0);
    }

    #[test]
    fn noiseless_never_fails() {
        let pt = run_point(&PointSpec::new(5, 0.0, ErrorModel::noiseless(), 200, 1)).unwrap();
        assert_eq!(pt.failures, 0);
    }
}
