//! Fixtures shared by the kernel benchmarks.

use surfcode::cycle::{ErrorModel, FastSampler, ShotSample};
use surfcode::decoder::{DecodingGraph, MatchingGraph};
use surfcode::lattice::{build_planar, StabKind};

/// Sampler and Z-type decoding graph for a distance-`d` patch run for `d`
/// rounds at uniform rate `p`.
pub fn memory_setup(d: usize, p: f64) -> (FastSampler, DecodingGraph) {
    let layout = build_planar(d).expect("valid distance");
    let model = ErrorModel::uniform(p);
    let sampler = FastSampler::new(&layout, model, &[StabKind::Z]).expect("valid model");
    let graph = DecodingGraph::for_model(&layout, StabKind::Z, d, &model).expect("valid graph");
    (sampler, graph)
}

/// Matching graphs of the first `n` shots that have any detection events.
pub fn matching_graphs(d: usize, p: f64, n: usize) -> Vec<MatchingGraph> {
    let (sampler, graph) = memory_setup(d, p);
    let mut sample = ShotSample::default();
    let mut out = Vec::with_capacity(n);
    let mut shot = 0;
    while out.len() < n {
        sampler.sample(d, 1, shot, &mut sample);
        shot += 1;
        if !sample.events.is_empty() {
            out.push(graph.matching_graph(&sample.events));
        }
    }
    out
}
