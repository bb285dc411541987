//! Minimum-weight perfect matching decoder for the planar code.
//!
//! Detection events of one stabilizer kind become nodes of a complete graph
//! whose weights are space-time distances: the fewest single faults of the
//! cycle circuit that connect two events. A node may instead match to the
//! boundary of the type that terminates its error chains.

mod blossom;
mod brute;

pub use blossom::max_weight_matching;
pub use brute::brute_force_match;

use std::collections::BTreeMap;

use crate::cycle::{detection_events, fault_effects, DetectionEvent, ErrorModel, PauliFrame, RoundCircuit, SyndromeRecord};
use crate::error::Result;
use crate::lattice::{logical_chain, ArrayLayout, Coord, QubitRef, StabKind, Which};
use crate::pauli::PauliOp;

/// Missing edge.
pub const NO_EDGE: u32 = u32::MAX;

/// Components up to this many vertices are matched by subset DP.
const DP_LIMIT: usize = 10;

/// A detection event as a graph node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphNode {
    pub coord: Coord,
    pub round: usize,
    /// Detector slot in the [`DecodingGraph`] that built the node.
    pub slot: u32,
}

/// Complete weighted graph over real nodes, plus one boundary edge per node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingGraph {
    n: usize,
    weight: Vec<u32>,
    boundary: Vec<u32>,
    /// Lattice position of each node; empty for abstract graphs.
    pub nodes: Vec<GraphNode>,
    pub kind: Option<StabKind>,
}

impl MatchingGraph {
    /// `n` nodes, no edges, boundary weights all zero.
    pub fn new(n: usize) -> Self {
        MatchingGraph { n, weight: vec![NO_EDGE; n * n], boundary: vec![0; n], nodes: Vec::new(), kind: None }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn set_edge(&mut self, i: usize, j: usize, w: u32) {
        self.weight[i * self.n + j] = w;
        self.weight[j * self.n + i] = w;
    }

    pub fn edge(&self, i: usize, j: usize) -> Option<u32> {
        let w = self.weight[i * self.n + j];
        (w != NO_EDGE && i != j).then_some(w)
    }

    pub fn set_boundary(&mut self, i: usize, w: u32) {
        self.boundary[i] = w;
    }

    pub fn boundary(&self, i: usize) -> u32 {
        self.boundary[i]
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MatchResult {
    /// Matched node pairs, `a < b`, sorted.
    pub pairs: Vec<(usize, usize)>,
    /// Nodes matched to the boundary, sorted.
    pub to_boundary: Vec<usize>,
    pub weight: u64,
}

impl MatchResult {
    fn finish(mut self) -> Self {
        for p in &mut self.pairs {
            if p.0 > p.1 {
                *p = (p.1, p.0);
            }
        }
        self.pairs.sort_unstable();
        self.to_boundary.sort_unstable();
        self
    }
}

/// Minimum-weight matching where every node pairs with another node or with
/// the boundary.
///
/// Nodes are grouped into components joined by edges no heavier than both
/// boundary edges together; no optimal matching crosses components. Each
/// component is solved as a perfect matching on pairwise costs
/// `min(w, b_u + b_v)`, plus one boundary vertex when its size is odd.
/// Among equal-weight matchings the one with fewest boundary matches wins.
pub fn mwpm(g: &MatchingGraph) -> MatchResult {
    let n = g.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for i in 0..n {
        for j in 0..i {
            if let Some(w) = g.edge(i, j) {
                if (w as u64) <= g.boundary[i] as u64 + g.boundary[j] as u64 {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
    }
    let mut comps: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        comps.entry(r).or_default().push(i);
    }
    let mut out = MatchResult::default();
    for nodes in comps.values() {
        solve_component(g, nodes, &mut out);
    }
    out.finish()
}

fn solve_component(g: &MatchingGraph, nodes: &[usize], out: &mut MatchResult) {
    let k = nodes.len();
    if k == 1 {
        out.to_boundary.push(nodes[0]);
        out.weight += g.boundary[nodes[0]] as u64;
        return;
    }
    if k + (k & 1) > DP_LIMIT {
        return solve_sparse(g, nodes, out);
    }
    let m = k + (k & 1);
    // Weight scaled past the largest possible boundary count, plus one per
    // boundary match; vertex `k` (if present) is the boundary.
    let scale = m as u64 + 1;
    let cost = |a: usize, b: usize| -> u64 {
        if a == k {
            return scale * g.boundary[nodes[b]] as u64 + 1;
        }
        if b == k {
            return scale * g.boundary[nodes[a]] as u64 + 1;
        }
        let (u, v) = (nodes[a], nodes[b]);
        let via = scale * (g.boundary[u] as u64 + g.boundary[v] as u64) + 2;
        g.edge(u, v).map_or(via, |w| (scale * w as u64).min(via))
    };
    let mate = dp_perfect(m, &cost);
    for a in 0..m {
        let b = mate[a];
        if b < a {
            continue;
        }
        if b == k {
            out.to_boundary.push(nodes[a]);
            out.weight += g.boundary[nodes[a]] as u64;
            continue;
        }
        let (u, v) = (nodes[a], nodes[b]);
        let via = g.boundary[u] as u64 + g.boundary[v] as u64;
        match g.edge(u, v) {
            Some(w) if (w as u64) <= via => {
                out.pairs.push((u, v));
                out.weight += w as u64;
            }
            _ => {
                out.to_boundary.extend([u, v]);
                out.weight += via;
            }
        }
    }
}

/// Perfect matching on the component plus a twin of it: node `i` pairs with
/// its twin at boundary cost, twins are joined at zero cost wherever their
/// nodes are, and only edges no heavier than both boundary edges are kept.
/// Twins of nodes paired directly can always pair along the same edge, so
/// the optimum equals the boundary matching optimum.
fn solve_sparse(g: &MatchingGraph, nodes: &[usize], out: &mut MatchResult) {
    let k = nodes.len();
    let scale = 2 * k as i64 + 1;
    let mut edges: Vec<(usize, usize, i64)> = Vec::new();
    for a in 0..k {
        edges.push((a, k + a, scale * g.boundary[nodes[a]] as i64 + 1));
        for b in 0..a {
            if let Some(w) = g.edge(nodes[a], nodes[b]) {
                if w as u64 <= g.boundary[nodes[a]] as u64 + g.boundary[nodes[b]] as u64 {
                    edges.push((b, a, scale * w as i64));
                    edges.push((k + b, k + a, 0));
                }
            }
        }
    }
    let big = edges.iter().map(|e| e.2).max().unwrap_or(0) + 1;
    for e in &mut edges {
        e.2 = big - e.2;
    }
    let mate = max_weight_matching(2 * k, &edges, true);
    for a in 0..k {
        let b = mate[a].expect("doubled graph has a perfect matching");
        if b == k + a {
            out.to_boundary.push(nodes[a]);
            out.weight += g.boundary[nodes[a]] as u64;
        } else if b < a {
            out.pairs.push((nodes[b], nodes[a]));
            out.weight += g.edge(nodes[a], nodes[b]).unwrap() as u64;
        }
    }
}

/// Exact minimum-cost perfect matching over subsets; `m` even.
fn dp_perfect(m: usize, cost: &dyn Fn(usize, usize) -> u64) -> Vec<usize> {
    let full = (1usize << m) - 1;
    let mut best = vec![u64::MAX; 1 << m];
    let mut choice = vec![0u8; 1 << m];
    best[0] = 0;
    for mask in 1..=full {
        if mask.count_ones() % 2 == 1 {
            continue;
        }
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << i);
        let mut bits = rest;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let sub = best[rest & !(1 << j)];
            if sub != u64::MAX {
                let c = sub + cost(i, j);
                if c < best[mask] {
                    best[mask] = c;
                    choice[mask] = j as u8;
                }
            }
        }
    }
    let mut mate = vec![usize::MAX; m];
    let mut mask = full;
    while mask != 0 {
        let i = mask.trailing_zeros() as usize;
        let j = choice[mask] as usize;
        mate[i] = j;
        mate[j] = i;
        mask &= !(1 << i) & !(1 << j);
    }
    mate
}

/// A single fault seen by one detector kind: it lights up detector `a`
/// and, unless it reaches the boundary, detector `b.0` at time offset `b.1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaultEdge {
    pub a: u32,
    pub b: Option<(u32, i32)>,
    /// Whether the fault flips the logical observable watched by this kind.
    pub flips: bool,
    /// Data sites the fault leaves flipped, in the Pauli this kind detects.
    pub data: Vec<u32>,
}

struct Bfs {
    dist: Vec<u16>,
    parity: Vec<bool>,
    parent: Vec<(u32, u32)>,
    /// Nearest node with a boundary edge, as `(node, edge)`.
    boundary: Option<(u32, u32)>,
}

/// Space-time decoding graph of one detector kind.
///
/// Nodes are `(detector, round)`; edges are the single faults of the cycle
/// circuit, each of unit weight. Distances are precomputed for every pair
/// of detectors and every round offset up to `rounds`, on a time window
/// wide enough that paths never reach its ends.
#[derive(Debug, Clone)]
pub struct DecodingGraph {
    layout: ArrayLayout,
    kind: StabKind,
    rounds: usize,
    slots: Vec<u32>,
    slot_of: Vec<u32>,
    coords: Vec<Coord>,
    edges: Vec<FaultEdge>,
    adj: Vec<Vec<(u32, i32, u32)>>,
    bnd: Vec<Option<u32>>,
    center: usize,
    dist: Vec<u16>,
    parity: Vec<bool>,
    bdist: Vec<u16>,
    bparity: Vec<bool>,
}

const FAR: u16 = u16::MAX;

impl DecodingGraph {
    /// Graph for records with up to `rounds` noisy rounds.
    pub fn new(layout: &ArrayLayout, kind: StabKind, rounds: usize) -> Result<Self> {
        Self::with_classes(layout, kind, rounds, [true; 3])
    }

    /// Graph built only from the faults `model` can produce.
    pub fn for_model(layout: &ArrayLayout, kind: StabKind, rounds: usize, model: &ErrorModel) -> Result<Self> {
        model.validate()?;
        Self::with_classes(layout, kind, rounds, [0u8, 1, 2].map(|c| model.rate(c) > 0.0))
    }

    /// Graph whose edges come from faults of the enabled error classes.
    pub fn with_classes(layout: &ArrayLayout, kind: StabKind, rounds: usize, classes: [bool; 3]) -> Result<Self> {
        let circuit = RoundCircuit::new(layout);
        let (base, effects) = fault_effects(&circuit, layout);
        let mut enabled = vec![false; effects.len()];
        for (p, point) in circuit.points.iter().enumerate() {
            if classes[point.class as usize] {
                let b = base[p] as usize;
                enabled[b..b + point.kind.options() as usize].fill(true);
            }
        }
        let mut slot_of = vec![u32::MAX; circuit.num_measures()];
        let mut slots = Vec::new();
        let mut coords = Vec::new();
        for (i, m) in circuit.measures.iter().enumerate() {
            if m.kind == kind {
                slot_of[i] = slots.len() as u32;
                slots.push(i as u32);
                coords.push(m.coord);
            }
        }
        let (flip_bit, data_bit) = match kind {
            StabKind::Z => (1u8, 1u8),
            StabKind::X => (2u8, 2u8),
        };
        let ns = slots.len();
        let mut edges: Vec<FaultEdge> = Vec::new();
        let mut seen: BTreeMap<(u32, u32, i32), ()> = BTreeMap::new();
        let mut bnd = vec![None; ns];
        let mut adj = vec![Vec::new(); ns];
        for e in effects.iter().zip(&enabled).filter(|x| *x.1).map(|x| x.0) {
            let mut hit: Vec<(u32, i32)> = Vec::new();
            hit.extend(e.now.iter().filter(|&&i| slot_of[i as usize] != u32::MAX).map(|&i| (slot_of[i as usize], 0)));
            hit.extend(e.next.iter().filter(|&&i| slot_of[i as usize] != u32::MAX).map(|&i| (slot_of[i as usize], 1)));
            hit.sort_unstable();
            let flips = e.flips & flip_bit != 0;
            let data: Vec<u32> = e.delta.iter().filter(|d| d.1 & data_bit != 0).map(|d| d.0).collect();
            match hit[..] {
                [(s, _)] => {
                    if bnd[s as usize].is_none() {
                        bnd[s as usize] = Some(edges.len() as u32);
                        edges.push(FaultEdge { a: s, b: None, flips, data });
                    }
                }
                [(s1, o1), (s2, o2)] => {
                    let key = (s1, s2, o2 - o1);
                    if seen.insert(key, ()).is_none() {
                        let id = edges.len() as u32;
                        adj[s1 as usize].push((s2, o2 - o1, id));
                        adj[s2 as usize].push((s1, o1 - o2, id));
                        edges.push(FaultEdge { a: s1, b: Some((s2, o2 - o1)), flips, data });
                    }
                }
                _ => {}
            }
        }
        let center = rounds + layout.distance() + 1;
        let mut g = DecodingGraph {
            layout: layout.clone(),
            kind,
            rounds,
            slots,
            slot_of,
            coords,
            edges,
            adj,
            bnd,
            center,
            dist: Vec::new(),
            parity: Vec::new(),
            bdist: vec![FAR; ns],
            bparity: vec![false; ns],
        };
        let w = 2 * rounds + 1;
        g.dist = vec![FAR; ns * ns * w];
        g.parity = vec![false; ns * ns * w];
        let t = 2 * center + 1;
        for s in 0..ns {
            let b = g.bfs(s as u32);
            for s2 in 0..ns {
                for dt in 0..w {
                    let node = s2 * t + center + dt - rounds;
                    let k = (s * ns + s2) * w + dt;
                    g.dist[k] = b.dist[node];
                    g.parity[k] = b.parity[node];
                }
            }
            if let Some((node, e)) = b.boundary {
                g.bdist[s] = b.dist[node as usize] + 1;
                g.bparity[s] = b.parity[node as usize] ^ g.edges[e as usize].flips;
            }
        }
        Ok(g)
    }

    pub fn kind(&self) -> StabKind {
        self.kind
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    /// Measurement index (into the cycle circuit) of each detector slot.
    pub fn detectors(&self) -> &[u32] {
        &self.slots
    }

    pub fn slot_of_measure(&self, measure: usize) -> Option<u32> {
        self.slot_of.get(measure).copied().filter(|&s| s != u32::MAX)
    }

    pub fn coord(&self, slot: u32) -> Coord {
        self.coords[slot as usize]
    }

    pub fn edges(&self) -> &[FaultEdge] {
        &self.edges
    }

    fn bfs(&self, src: u32) -> Bfs {
        let t = 2 * self.center + 1;
        let n = self.slots.len() * t;
        let mut dist = vec![FAR; n];
        let mut parity = vec![false; n];
        let mut parent = vec![(u32::MAX, u32::MAX); n];
        let mut boundary = None;
        let start = src as usize * t + self.center;
        dist[start] = 0;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            let (s, tau) = (v / t, v % t);
            if boundary.is_none() {
                if let Some(e) = self.bnd[s] {
                    boundary = Some((v as u32, e));
                }
            }
            for &(s2, dt, e) in &self.adj[s] {
                let tau2 = tau as i64 + dt as i64;
                if tau2 < 0 || tau2 >= t as i64 {
                    continue;
                }
                let u = s2 as usize * t + tau2 as usize;
                if dist[u] == FAR {
                    dist[u] = dist[v] + 1;
                    parity[u] = parity[v] ^ self.edges[e as usize].flips;
                    parent[u] = (v as u32, e);
                    queue.push_back(u);
                }
            }
        }
        Bfs { dist, parity, parent, boundary }
    }

    fn table(&self, s1: u32, t1: usize, s2: u32, t2: usize) -> usize {
        let w = 2 * self.rounds + 1;
        let dt = t2 as i64 - t1 as i64 + self.rounds as i64;
        debug_assert!((0..w as i64).contains(&dt));
        (s1 as usize * self.slots.len() + s2 as usize) * w + dt as usize
    }

    /// Distance between two events, if connected.
    pub fn distance(&self, s1: u32, t1: usize, s2: u32, t2: usize) -> Option<u32> {
        let d = self.dist[self.table(s1, t1, s2, t2)];
        (d != FAR).then_some(d as u32)
    }

    pub fn boundary_distance(&self, s: u32) -> Option<u32> {
        let d = self.bdist[s as usize];
        (d != FAR).then_some(d as u32)
    }

    /// Matching graph over `events`, given as `(round, slot)`.
    pub fn matching_graph(&self, events: &[(u32, u32)]) -> MatchingGraph {
        let mut g = MatchingGraph::new(events.len());
        g.kind = Some(self.kind);
        for (i, &(t, s)) in events.iter().enumerate() {
            g.set_boundary(i, self.bdist[s as usize] as u32);
            g.nodes.push(GraphNode { coord: self.coords[s as usize], round: t as usize, slot: s });
            for (j, &(t2, s2)) in events.iter().enumerate().take(i) {
                let d = self.dist[self.table(s, t as usize, s2, t2 as usize)];
                if d != FAR {
                    g.set_edge(i, j, d as u32);
                }
            }
        }
        g
    }

    /// Events of this kind in `events`, as `(round, slot)`.
    pub fn select(&self, circuit_measures: &[crate::cycle::MeasureInfo], events: &[DetectionEvent]) -> Vec<(u32, u32)> {
        events
            .iter()
            .filter(|e| e.kind == self.kind)
            .filter_map(|e| {
                let m = circuit_measures.iter().position(|m| m.coord == e.measure_coord)?;
                Some((e.round as u32, self.slot_of_measure(m)?))
            })
            .collect()
    }

    /// Whether the correction for `events` flips the watched logical
    /// observable: `X_L` for Z detectors, `Z_L` for X detectors.
    pub fn correction_flips(&self, events: &[(u32, u32)]) -> bool {
        let g = self.matching_graph(events);
        let m = mwpm(&g);
        let mut flip = false;
        for &(a, b) in &m.pairs {
            let (ta, sa) = events[a];
            let (tb, sb) = events[b];
            flip ^= self.parity[self.table(sa, ta as usize, sb, tb as usize)];
        }
        for &a in &m.to_boundary {
            flip ^= self.bparity[events[a].1 as usize];
        }
        flip
    }

    /// Fault edges along the path the table distance was computed from.
    fn path(&self, s1: u32, t1: usize, target: Option<(u32, usize)>) -> Vec<u32> {
        let b = self.bfs(s1);
        let t = 2 * self.center + 1;
        let (mut v, mut out) = match target {
            Some((s2, t2)) => {
                let tau = self.center as i64 + t2 as i64 - t1 as i64;
                (s2 as usize * t + tau as usize, Vec::new())
            }
            None => {
                let (node, e) = b.boundary.expect("detector reaches a boundary");
                (node as usize, vec![e])
            }
        };
        while b.parent[v].0 != u32::MAX {
            out.push(b.parent[v].1);
            v = b.parent[v].0 as usize;
        }
        out
    }

    /// Data flips of the matched paths.
    pub fn correction(&self, events: &[(u32, u32)], m: &MatchResult) -> Correction {
        let op = self.kind.other().op();
        let mut out = Correction::default();
        let mut apply = |edges: Vec<u32>| {
            for e in edges {
                for &q in &self.edges[e as usize].data {
                    out.flip(self.layout.coord(q as usize), op);
                }
            }
        };
        for &(a, b) in &m.pairs {
            let (ta, sa) = events[a];
            let (tb, sb) = events[b];
            apply(self.path(sa, ta as usize, Some((sb, tb as usize))));
        }
        for &a in &m.to_boundary {
            let (t, s) = events[a];
            apply(self.path(s, t as usize, None));
        }
        out
    }
}

/// Matching graph of the `kind` events among `events`, for a record of
/// `rounds` noisy rounds.
pub fn build_graph(events: &[DetectionEvent], layout: &ArrayLayout, rounds: usize, kind: StabKind) -> Result<MatchingGraph> {
    let g = DecodingGraph::new(layout, kind, rounds)?;
    let c = RoundCircuit::new(layout);
    Ok(g.matching_graph(&g.select(&c.measures, events)))
}

/// Data-qubit flips proposed by the decoder.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Correction {
    pub data_flips: BTreeMap<Coord, PauliOp>,
}

impl Correction {
    fn flip(&mut self, q: Coord, op: PauliOp) {
        let cur = self.data_flips.remove(&q).unwrap_or(PauliOp::I);
        let (_, next) = cur.mul(op);
        if next != PauliOp::I {
            self.data_flips.insert(q, next);
        }
    }

    pub fn to_frame(&self, layout: &ArrayLayout) -> PauliFrame {
        let mut f = PauliFrame::new(layout.num_sites());
        for (&q, &op) in &self.data_flips {
            f.apply(layout.index(q), op);
        }
        f
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Success,
    XLFailure,
    ZLFailure,
    Both,
}

impl Verdict {
    pub fn x_failed(self) -> bool {
        matches!(self, Verdict::XLFailure | Verdict::Both)
    }

    pub fn z_failed(self) -> bool {
        matches!(self, Verdict::ZLFailure | Verdict::Both)
    }
}

/// Both decoding graphs of a planar layout.
#[derive(Debug, Clone)]
pub struct Decoder {
    circuit: RoundCircuit,
    /// Z detectors (X errors), then X detectors (Z errors).
    graphs: [DecodingGraph; 2],
}

impl Decoder {
    pub fn new(layout: &ArrayLayout, rounds: usize) -> Result<Self> {
        Ok(Decoder {
            circuit: RoundCircuit::new(layout),
            graphs: [DecodingGraph::new(layout, StabKind::Z, rounds)?, DecodingGraph::new(layout, StabKind::X, rounds)?],
        })
    }

    pub fn graph(&self, kind: StabKind) -> &DecodingGraph {
        &self.graphs[usize::from(kind == StabKind::X)]
    }

    /// Data flips for both kinds.
    pub fn correction(&self, record: &SyndromeRecord) -> Correction {
        let events = detection_events(record);
        let mut out = Correction::default();
        for g in &self.graphs {
            let ev = g.select(&self.circuit.measures, &events);
            let m = mwpm(&g.matching_graph(&ev));
            for (q, op) in g.correction(&ev, &m).data_flips {
                out.flip(q, op);
            }
        }
        out
    }

    /// `correction ⊕ truth` over data sites.
    pub fn residual(&self, layout: &ArrayLayout, record: &SyndromeRecord, truth: &PauliFrame) -> PauliFrame {
        let mut residual = truth.clone();
        residual.xor(&self.correction(record).to_frame(layout));
        residual
    }

    /// Which logical operators the residual flips.
    pub fn judge(&self, layout: &ArrayLayout, record: &SyndromeRecord, truth: &PauliFrame) -> Result<Verdict> {
        let residual = self.residual(layout, record, truth);
        let zl = logical_chain(layout, Which::ZL, QubitRef::Planar)?;
        let xl = logical_chain(layout, Which::XL, QubitRef::Planar)?;
        let x_fail = zl.qubits().filter(|&q| residual.x[q]).count() % 2 == 1;
        let z_fail = xl.qubits().filter(|&q| residual.z[q]).count() % 2 == 1;
        Ok(match (x_fail, z_fail) {
            (false, false) => Verdict::Success,
            (true, false) => Verdict::XLFailure,
            (false, true) => Verdict::ZLFailure,
            (true, true) => Verdict::Both,
        })
    }
}

/// Decodes both event kinds of a planar-code record and reports which
/// logical operators the residual `correction ⊕ truth` flips.
pub fn decode_and_judge(layout: &ArrayLayout, record: &SyndromeRecord, truth: &PauliFrame) -> Result<Verdict> {
    Decoder::new(layout, record.rounds)?.judge(layout, record, truth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycle::{FaultKind, RoundCircuit};
    use crate::cycle::{frame_round, run_circuit_with_faults};
    use crate::lattice::build_planar;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_graph(rng: &mut ChaCha8Rng, n: usize, density: f64) -> MatchingGraph {
        let mut g = MatchingGraph::new(n);
        for i in 0..n {
            g.set_boundary(i, rng.gen_range(0..12));
            for j in 0..i {
                if rng.gen_bool(density) {
                    g.set_edge(i, j, rng.gen_range(0..15));
                }
            }
        }
        g
    }

    fn check_result(g: &MatchingGraph, m: &MatchResult) {
        let mut seen = vec![0; g.len()];
        let mut w = 0;
        for &(a, b) in &m.pairs {
            seen[a] += 1;
            seen[b] += 1;
            w += g.edge(a, b).unwrap() as u64;
        }
        for &a in &m.to_boundary {
            seen[a] += 1;
            w += g.boundary(a) as u64;
        }
        assert!(seen.iter().all(|&s| s == 1));
        assert_eq!(w, m.weight);
    }

    #[test]
    fn empty_graph() {
        let m = mwpm(&MatchingGraph::new(0));
        assert_eq!(m, MatchResult::default());
    }

    fn ev(kind: StabKind, r: usize, c: usize, t: usize) -> DetectionEvent {
        DetectionEvent { round: t, measure_coord: (r, c), kind }
    }

    #[test]
    fn lattice_weights() {
        let l = build_planar(5).unwrap();
        let x = StabKind::X;
        let g = build_graph(&[ev(x, 1, 2, 0), ev(x, 1, 4, 0)], &l, 3, x).unwrap();
        assert_eq!(g.edge(0, 1), Some(1));
        let g = build_graph(&[ev(x, 3, 4, 2), ev(x, 3, 4, 3)], &l, 3, x).unwrap();
        assert_eq!(g.edge(0, 1), Some(1));
        // two cells of data above row 3 reach the top boundary
        let g = build_graph(&[ev(x, 3, 4, 0)], &l, 3, x).unwrap();
        assert_eq!(g.boundary(0), 2);
        let g = build_graph(&[ev(StabKind::Z, 0, 1, 0)], &l, 3, StabKind::Z).unwrap();
        assert_eq!(g.boundary(0), 1);
    }

    #[test]
    fn distances_never_exceed_lattice_metric() {
        // Data and measurement faults alone give |dr|/2 + |dc|/2 + |dt|;
        // CNOT faults only add shortcuts.
        let l = build_planar(5).unwrap();
        for kind in [StabKind::X, StabKind::Z] {
            let g = DecodingGraph::new(&l, kind, 3).unwrap();
            let n = g.detectors().len() as u32;
            let mut shorter = 0;
            for a in 0..n {
                for b in 0..n {
                    for t in 0..=3 {
                        let (ca, cb) = (g.coord(a), g.coord(b));
                        let l1 = (ca.0.abs_diff(cb.0) / 2 + ca.1.abs_diff(cb.1) / 2 + t) as u32;
                        let d = g.distance(a, 0, b, t).unwrap();
                        assert!(d <= l1);
                        if t == 0 && (ca.0 == cb.0 || ca.1 == cb.1) {
                            assert_eq!(d, l1, "{ca:?} {cb:?}");
                        }
                        shorter += usize::from(d < l1);
                    }
                }
            }
            assert!(shorter > 0);
        }
    }

    #[test]
    fn every_single_fault_is_an_edge() {
        let l = build_planar(5).unwrap();
        for kind in [StabKind::X, StabKind::Z] {
            let g = DecodingGraph::new(&l, kind, 2).unwrap();
            let c = RoundCircuit::new(&l);
            let (_, effects) = fault_effects(&c, &l);
            for e in &effects {
                let mut hit: Vec<(u32, usize)> = e.now.iter().filter_map(|&m| g.slot_of_measure(m as usize)).map(|s| (s, 0)).collect();
                hit.extend(e.next.iter().filter_map(|&m| g.slot_of_measure(m as usize)).map(|s| (s, 1)));
                assert!(hit.len() <= 2, "{e:?}");
                match hit[..] {
                    [(s, _)] => assert_eq!(g.boundary_distance(s), Some(1)),
                    [(s1, t1), (s2, t2)] => assert_eq!(g.distance(s1, t1, s2, t2), Some(1)),
                    _ => {}
                }
            }
        }
    }

    #[test]
    fn matches_exhaustive_search_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for trial in 0..1500 {
            let n = rng.gen_range(0..=10);
            let density = rng.gen_range(0.3..=1.0);
            let g = random_graph(&mut rng, n, density);
            let m = mwpm(&g);
            check_result(&g, &m);
            assert_eq!(m.weight, brute_force_match(&g).unwrap().weight, "trial {trial}");
        }
    }

    /// Optimum over the complete reduced costs, by subset DP.
    fn dp_weight(g: &MatchingGraph) -> u64 {
        let k = g.len();
        let m = k + (k & 1);
        let cost = |a: usize, b: usize| -> u64 {
            if a == k || b == k {
                return g.boundary(a.min(b)) as u64;
            }
            let via = g.boundary(a) as u64 + g.boundary(b) as u64;
            g.edge(a, b).map_or(via, |w| (w as u64).min(via))
        };
        let mate = dp_perfect(m, &cost);
        (0..m).filter(|&a| mate[a] > a).map(|a| cost(a, mate[a])).sum()
    }

    #[test]
    fn sparse_twin_reduction_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for trial in 0..400 {
            let n = rng.gen_range(1..=16);
            let density = rng.gen_range(0.3..=1.0);
            let g = random_graph(&mut rng, n, density);
            let mut out = MatchResult::default();
            solve_sparse(&g, &(0..n).collect::<Vec<_>>(), &mut out);
            let out = out.finish();
            check_result(&g, &out);
            assert_eq!(out.weight, dp_weight(&g), "trial {trial}");
            if n <= 10 {
                assert_eq!(out.weight, brute_force_match(&g).unwrap().weight);
            }
        }
    }

    #[test]
    fn large_components() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let n = rng.gen_range(11..19);
            let mut g = MatchingGraph::new(n);
            for i in 0..n {
                g.set_boundary(i, rng.gen_range(3..8));
                for j in 0..i {
                    g.set_edge(i, j, rng.gen_range(1..10));
                }
            }
            let m = mwpm(&g);
            check_result(&g, &m);
            assert_eq!(m.weight, dp_weight(&g));
        }
    }

    /// Detector syndrome of a data frame at the final readout.
    fn syndrome(c: &RoundCircuit, frame: &PauliFrame) -> Vec<bool> {
        let mut f = frame.clone();
        let mut row = vec![false; c.num_measures()];
        frame_round(c, &mut f, &[], &mut row);
        row
    }

    #[test]
    fn every_single_fault_is_corrected_at_distance_three() {
        let l = build_planar(3).unwrap();
        let c = RoundCircuit::new(&l);
        let rounds = 3;
        let dec = Decoder::new(&l, rounds).unwrap();
        let mut cases = 0;
        for t in 0..rounds {
            for (p, point) in c.points.iter().enumerate() {
                for o in 0..point.kind.options() {
                    let mut faults = vec![Vec::new(); rounds];
                    faults[t].push((p as u32, o));
                    let shot = run_circuit_with_faults(&c, &faults);
                    let v = dec.judge(&l, &shot.record, &shot.truth).unwrap();
                    assert_eq!(v, Verdict::Success, "round {t} point {p} {:?} option {o}", point.kind);
                    let res = dec.residual(&l, &shot.record, &shot.truth);
                    assert!(syndrome(&c, &res).iter().all(|&b| !b));
                    cases += 1;
                }
            }
        }
        assert!(cases > 1000);
    }

    fn data_error_shot(l: &ArrayLayout, c: &RoundCircuit, errs: &[(Coord, PauliOp)]) -> (SyndromeRecord, PauliFrame) {
        // Data errors placed in the first idle slot of round 0.
        let mut faults = vec![Vec::new(), Vec::new()];
        for &(q, op) in errs {
            let site = l.index(q) as u32;
            let p = c.class_points[0].iter().find(|&&p| c.points[p as usize].kind == FaultKind::Single(site)).unwrap();
            let o = [PauliOp::X, PauliOp::Y, PauliOp::Z].iter().position(|&x| x == op).unwrap() as u8;
            faults[0].push((*p, o));
        }
        faults[0].sort_unstable();
        let shot = run_circuit_with_faults(c, &faults);
        (shot.record, shot.truth)
    }

    #[test]
    fn correctable_data_errors() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for d in [3usize, 5] {
            let l = build_planar(d).unwrap();
            let c = RoundCircuit::new(&l);
            let dec = Decoder::new(&l, 2).unwrap();
            let data: Vec<Coord> = l.data_sites().collect();
            let t = (d - 1) / 2;
            let mut sets: Vec<Vec<(Coord, PauliOp)>> = Vec::new();
            if d == 3 {
                for &q in &data {
                    for op in [PauliOp::X, PauliOp::Y, PauliOp::Z] {
                        sets.push(vec![(q, op)]);
                    }
                }
            } else {
                for _ in 0..4000 {
                    let mut s: Vec<(Coord, PauliOp)> = Vec::new();
                    while s.len() < t {
                        let q = data[rng.gen_range(0..data.len())];
                        if s.iter().all(|e| e.0 != q) {
                            s.push((q, [PauliOp::X, PauliOp::Y, PauliOp::Z][rng.gen_range(0..3)]));
                        }
                    }
                    sets.push(s);
                }
            }
            for s in sets {
                let (rec, truth) = data_error_shot(&l, &c, &s);
                assert_eq!(dec.judge(&l, &rec, &truth).unwrap(), Verdict::Success, "d={d} {s:?}");
            }
        }
    }

    #[test]
    fn row_misidentification() {
        // Five data qubits in row 2 of d=5. Two X errors (2nd, 3rd) and the
        // complementary three give the same two events.
        let l = build_planar(5).unwrap();
        let c = RoundCircuit::new(&l);
        let two = [((2, 2), PauliOp::X), ((2, 4), PauliOp::X)];
        let three = [((2, 0), PauliOp::X), ((2, 6), PauliOp::X), ((2, 8), PauliOp::X)];
        let (r2, t2) = data_error_shot(&l, &c, &two);
        let (r3, t3) = data_error_shot(&l, &c, &three);
        assert_eq!(detection_events(&r2), detection_events(&r3));
        let ev = detection_events(&r2);
        let g = build_graph(&ev, &l, 2, StabKind::Z).unwrap();
        assert_eq!(g.len(), 2);
        let m = mwpm(&g);
        assert_eq!(m.pairs, vec![(0, 1)]);
        assert_eq!(m.weight, 2);
        assert_eq!(g.boundary(0) + g.boundary(1), 3);
        assert_eq!(decode_and_judge(&l, &r2, &t2).unwrap(), Verdict::Success);
        assert_eq!(decode_and_judge(&l, &r3, &t3).unwrap(), Verdict::XLFailure);
    }

    #[test]
    fn logical_flip_agrees_with_explicit_correction() {
        use crate::cycle::{ErrorModel, FastSampler, ShotSample};
        for d in [3usize, 5] {
            let l = build_planar(d).unwrap();
            let model = ErrorModel::uniform(0.006);
            let fast = FastSampler::new(&l, model, &[StabKind::Z, StabKind::X]).unwrap();
            let c = fast.circuit().clone();
            let dec = Decoder::new(&l, d).unwrap();
            let mut s = ShotSample::default();
            for shot in 0..400 {
                let truth = fast.sample_with_truth(d, 5, shot, &mut s);
                let verdict = dec.judge(&l, &crate::cycle::run_shot(&c, &model, d, 5, shot).record, &truth).unwrap();
                for (k, kind) in [StabKind::Z, StabKind::X].into_iter().enumerate() {
                    let g = dec.graph(kind);
                    let ev: Vec<(u32, u32)> = s
                        .events
                        .iter()
                        .filter_map(|&(t, slot)| g.slot_of_measure(fast.detectors()[slot as usize] as usize).map(|x| (t, x)))
                        .collect();
                    let fail = g.correction_flips(&ev) ^ (s.flips >> k & 1 == 1);
                    let want = if k == 0 { verdict.x_failed() } else { verdict.z_failed() };
                    assert_eq!(fail, want, "d={d} shot={shot}");
                }
            }
        }
    }
}
