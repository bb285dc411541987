//! Planar surface-code array with hole cuts.
//!
//! Sites live on a `(2d-1) x (2d-1)` grid. Data qubits sit at (even, even)
//! and (odd, odd); measure-Z at (even, odd); measure-X at (odd, even). The
//! left and right edges are X boundaries, the top and bottom edges are Z
//! boundaries. Pauli strings over a layout index qubits by
//! [`ArrayLayout::index`].

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::pauli::{commutes, PauliOp, PauliString};

pub type Coord = (usize, usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Data,
    MeasureX,
    MeasureZ,
}

impl Role {
    pub fn name(self) -> &'static str {
        match self {
            Role::Data => "data",
            Role::MeasureX => "measureX",
            Role::MeasureZ => "measureZ",
        }
    }
}

/// Pauli type of a stabilizer, an error, or a logical operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StabKind {
    X,
    Z,
}

impl StabKind {
    pub fn other(self) -> StabKind {
        match self {
            StabKind::X => StabKind::Z,
            StabKind::Z => StabKind::X,
        }
    }

    pub fn op(self) -> PauliOp {
        match self {
            StabKind::X => PauliOp::X,
            StabKind::Z => PauliOp::Z,
        }
    }

    pub fn role(self) -> Role {
        match self {
            StabKind::X => Role::MeasureX,
            StabKind::Z => Role::MeasureZ,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Boundary {
    X,
    Z,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Site {
    pub coord: Coord,
    pub role: Role,
    pub active: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerSpec {
    pub measure_site: Coord,
    pub kind: StabKind,
    /// Active data neighbours in CNOT order.
    pub neighbors: Vec<Coord>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CutKind {
    /// Measure-Z qubits turned off.
    ZCut,
    /// Measure-X qubits turned off.
    XCut,
}

impl CutKind {
    pub fn stab(self) -> StabKind {
        match self {
            CutKind::ZCut => StabKind::Z,
            CutKind::XCut => StabKind::X,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HoleSpec {
    pub kind: CutKind,
    pub turned_off: Vec<Coord>,
}

impl HoleSpec {
    pub fn single(kind: CutKind, at: Coord) -> Self {
        HoleSpec { kind, turned_off: vec![at] }
    }

    /// Four same-kind cells around `(r,c)..(r+2,c+2)` plus the enclosed
    /// opposite-kind site.
    pub fn five_cell(kind: CutKind, top_left: Coord) -> Self {
        let (r, c) = top_left;
        HoleSpec {
            kind,
            turned_off: vec![(r, c), (r, c + 2), (r + 2, c), (r + 2, c + 2), (r + 1, c + 1)],
        }
    }

    /// Sites of the hole's own stabilizer kind.
    pub fn cells<'a>(&'a self, layout: &'a ArrayLayout) -> impl Iterator<Item = Coord> + 'a {
        self.turned_off.iter().copied().filter(move |&s| layout.role(s) == self.kind.stab().role())
    }

    /// Data qubits of the loop operator enclosing the hole.
    pub fn perimeter(&self, layout: &ArrayLayout) -> Vec<Coord> {
        let mut set = BTreeSet::new();
        for cell in self.cells(layout) {
            for q in layout.data_neighbors(cell) {
                if layout.is_active(q) && !set.remove(&q) {
                    set.insert(q);
                }
            }
        }
        set.into_iter().collect()
    }
}

/// Which logical qubit of a layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QubitRef {
    /// The boundary-defined qubit of a planar array.
    Planar,
    /// Two same-kind holes; indices into [`ArrayLayout::holes`].
    Pair(usize, usize),
    /// One hole paired with the array boundary.
    Single(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    XL,
    ZL,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrayLayout {
    d: usize,
    size: usize,
    active: Vec<bool>,
    holes: Vec<HoleSpec>,
}

const DIRS_Z: [(isize, isize); 4] = [(-1, 0), (0, -1), (0, 1), (1, 0)];
const DIRS_X: [(isize, isize); 4] = [(-1, 0), (0, 1), (0, -1), (1, 0)];

pub fn role_at(coord: Coord) -> Role {
    let (r, c) = coord;
    match (r % 2, c % 2) {
        (0, 0) | (1, 1) => Role::Data,
        (0, 1) => Role::MeasureZ,
        _ => Role::MeasureX,
    }
}

pub fn build_planar(d: usize) -> Result<ArrayLayout> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("distance {d} < 2")));
    }
    let size = 2 * d - 1;
    Ok(ArrayLayout { d, size, active: vec![true; size * size], holes: Vec::new() })
}

pub fn carve_holes(layout: &ArrayLayout, holes: &[HoleSpec]) -> Result<ArrayLayout> {
    let mut out = layout.clone();
    let mut claimed: BTreeSet<Coord> = BTreeSet::new();
    for h in holes {
        let own = h.kind.stab().role();
        if h.turned_off.is_empty() {
            return Err(Error::Layout("empty hole".into()));
        }
        for &s in &h.turned_off {
            if !layout.in_bounds_coord(s) {
                return Err(Error::Layout(format!("hole site {s:?} outside the array")));
            }
            if role_at(s) == Role::Data {
                return Err(Error::Layout(format!("hole site {s:?} is a data qubit")));
            }
            if !layout.is_active(s) || !claimed.insert(s) {
                return Err(Error::Layout(format!("hole site {s:?} overlaps another hole")));
            }
            let (r, c) = s;
            if r == 0 || c == 0 || r + 1 == layout.size || c + 1 == layout.size {
                return Err(Error::Layout(format!("hole site {s:?} clips the boundary")));
            }
            out.active[layout.index(s)] = false;
        }
        let own_off: BTreeSet<Coord> = h.turned_off.iter().copied().filter(|&s| role_at(s) == own).collect();
        if own_off.is_empty() {
            return Err(Error::Layout("hole has no site of its own kind".into()));
        }
        // Data enclosed by the hole: every own-kind neighbour is turned off.
        let mut enclosed = BTreeSet::new();
        for &cell in &own_off {
            for q in layout.data_neighbors(cell) {
                let own_nb: Vec<Coord> = layout.measure_neighbors(q).filter(|&m| role_at(m) == own).collect();
                if own_nb.len() >= 2 && own_nb.iter().all(|m| own_off.contains(m)) {
                    enclosed.insert(q);
                }
            }
        }
        for &s in &h.turned_off {
            if role_at(s) != own && !layout.data_neighbors(s).all(|q| enclosed.contains(&q)) {
                return Err(Error::Layout(format!("opposite-kind site {s:?} is not enclosed by the hole")));
            }
        }
        for q in enclosed {
            out.active[layout.index(q)] = false;
        }
        out.holes.push(h.clone());
    }
    Ok(out)
}

impl ArrayLayout {
    pub fn distance(&self) -> usize {
        self.d
    }

    /// Grid side length `2d - 1`.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn num_sites(&self) -> usize {
        self.size * self.size
    }

    pub fn holes(&self) -> &[HoleSpec] {
        &self.holes
    }

    pub fn boundary_type(&self, edge: Edge) -> Boundary {
        match edge {
            Edge::Left | Edge::Right => Boundary::X,
            Edge::Top | Edge::Bottom => Boundary::Z,
        }
    }

    pub fn index(&self, coord: Coord) -> usize {
        coord.0 * self.size + coord.1
    }

    pub fn coord(&self, index: usize) -> Coord {
        (index / self.size, index % self.size)
    }

    pub fn role(&self, coord: Coord) -> Role {
        role_at(coord)
    }

    pub fn in_bounds(&self, r: isize, c: isize) -> bool {
        r >= 0 && c >= 0 && (r as usize) < self.size && (c as usize) < self.size
    }

    fn in_bounds_coord(&self, s: Coord) -> bool {
        s.0 < self.size && s.1 < self.size
    }

    pub fn is_active(&self, coord: Coord) -> bool {
        self.in_bounds_coord(coord) && self.active[self.index(coord)]
    }

    pub fn set_active(&mut self, coord: Coord, on: bool) {
        let i = self.index(coord);
        self.active[i] = on;
    }

    /// Replace the activity mask and hole registry.
    pub fn with_mask(&self, active: Vec<bool>, holes: Vec<HoleSpec>) -> Result<ArrayLayout> {
        if active.len() != self.num_sites() {
            return Err(Error::Dimension(format!("mask has {} entries, expected {}", active.len(), self.num_sites())));
        }
        Ok(ArrayLayout { d: self.d, size: self.size, active, holes })
    }

    pub fn mask(&self) -> &[bool] {
        &self.active
    }

    pub fn sites(&self) -> impl Iterator<Item = Site> + '_ {
        (0..self.num_sites()).map(move |i| {
            let coord = self.coord(i);
            Site { coord, role: role_at(coord), active: self.active[i] }
        })
    }

    pub fn data_sites(&self) -> impl Iterator<Item = Coord> + '_ {
        self.sites().filter(|s| s.role == Role::Data && s.active).map(|s| s.coord)
    }

    pub fn measure_sites(&self, kind: StabKind) -> impl Iterator<Item = Coord> + '_ {
        self.sites().filter(move |s| s.role == kind.role() && s.active).map(|s| s.coord)
    }

    fn offsets(&self, coord: Coord, dirs: [(isize, isize); 4]) -> impl Iterator<Item = Coord> + '_ {
        dirs.into_iter().filter_map(move |(dr, dc)| {
            let (r, c) = (coord.0 as isize + dr, coord.1 as isize + dc);
            self.in_bounds(r, c).then_some((r as usize, c as usize))
        })
    }

    /// In-array data neighbours of a measure site, active or not, in CNOT order.
    pub fn data_neighbors(&self, m: Coord) -> impl Iterator<Item = Coord> + '_ {
        let dirs = if role_at(m) == Role::MeasureX { DIRS_X } else { DIRS_Z };
        self.offsets(m, dirs)
    }

    /// In-array measure neighbours of a data site, active or not.
    pub fn measure_neighbors(&self, q: Coord) -> impl Iterator<Item = Coord> + '_ {
        self.offsets(q, DIRS_Z)
    }

    /// CNOT slot (0..4) of each direction for a measure site.
    pub fn slot_of(m: Coord, q: Coord) -> usize {
        let dr = q.0 as isize - m.0 as isize;
        let dc = q.1 as isize - m.1 as isize;
        let dirs = if role_at(m) == Role::MeasureX { DIRS_X } else { DIRS_Z };
        dirs.iter().position(|&d| d == (dr, dc)).expect("adjacent sites")
    }

    pub fn stabilizer_at(&self, m: Coord) -> Option<StabilizerSpec> {
        let kind = match role_at(m) {
            Role::MeasureX => StabKind::X,
            Role::MeasureZ => StabKind::Z,
            Role::Data => return None,
        };
        if !self.is_active(m) {
            return None;
        }
        let neighbors: Vec<Coord> = self.data_neighbors(m).filter(|&q| self.is_active(q)).collect();
        (!neighbors.is_empty()).then_some(StabilizerSpec { measure_site: m, kind, neighbors })
    }

    /// Active stabilizers with nonempty support, in site order.
    pub fn stabilizers(&self) -> Vec<StabilizerSpec> {
        (0..self.num_sites()).filter_map(|i| self.stabilizer_at(self.coord(i))).collect()
    }

    pub fn stabilizer_operator(&self, s: &StabilizerSpec) -> PauliString {
        PauliString::from_ops(s.neighbors.iter().map(|&q| (self.index(q), s.kind.op())))
    }

    pub fn count(&self, role: Role) -> usize {
        self.sites().filter(|s| s.role == role && s.active).count()
    }

    /// Active data qubits minus independent constraints (stabilizers).
    pub fn logical_dof(&self) -> isize {
        self.count(Role::Data) as isize - self.stabilizers().len() as isize
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("d={}\n", self.d);
        for site in self.sites() {
            let _ = writeln!(s, "{} {} {} {}", site.coord.0, site.coord.1, site.role.name(), u8::from(site.active));
        }
        s
    }

    /// Inverse of [`ArrayLayout::to_text`]. Hole registry is not stored.
    pub fn from_text(text: &str) -> Result<ArrayLayout> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty layout".into()))?;
        let d: usize = header
            .trim()
            .strip_prefix("d=")
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad header {header:?}")))?;
        let mut layout = build_planar(d)?;
        let mut seen = 0;
        for line in lines {
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 4 {
                return Err(Error::Parse(format!("bad site line {line:?}")));
            }
            let r: usize = f[0].parse().map_err(|_| Error::Parse(line.into()))?;
            let c: usize = f[1].parse().map_err(|_| Error::Parse(line.into()))?;
            if !layout.in_bounds_coord((r, c)) || f[2] != role_at((r, c)).name() {
                return Err(Error::Parse(format!("site line inconsistent with d={d}: {line:?}")));
            }
            let active = match f[3] {
                "1" => true,
                "0" => false,
                _ => return Err(Error::Parse(line.into())),
            };
            layout.set_active((r, c), active);
            seen += 1;
        }
        if seen != layout.num_sites() {
            return Err(Error::Parse(format!("expected {} sites, got {seen}", layout.num_sites())));
        }
        Ok(layout)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Edge {
    Top,
    Bottom,
    Left,
    Right,
}

/// An endpoint of a data-qubit edge in the error graph of one Pauli type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum End {
    Site(usize),
    Hole(usize),
    Boundary,
}

/// Data-qubit edges of the graph on which `error`-type chains live: nodes
/// are the detecting measure sites, and turned-off or missing sites become
/// terminal ends.
struct ErrorGraph {
    edges: Vec<(usize, End, End)>,
}

impl ErrorGraph {
    fn new(layout: &ArrayLayout, error: StabKind) -> Self {
        let detect = error.other().role();
        let hole_of = |s: Coord| {
            layout.holes.iter().position(|h| h.kind.stab().role() == detect && h.turned_off.contains(&s))
        };
        let mut edges = Vec::new();
        for q in layout.data_sites() {
            let (r, c) = (q.0 as isize, q.1 as isize);
            // Detecting sites lie along one axis of each data qubit.
            let axis: [(isize, isize); 2] = if role_at((q.0, q.1 + 1)) == detect {
                [(0, -1), (0, 1)]
            } else {
                [(-1, 0), (1, 0)]
            };
            let ends = axis.map(|(dr, dc)| {
                let (rr, cc) = (r + dr, c + dc);
                if !layout.in_bounds(rr, cc) {
                    return End::Boundary;
                }
                let s = (rr as usize, cc as usize);
                if layout.is_active(s) {
                    End::Site(layout.index(s))
                } else {
                    hole_of(s).map_or(End::Boundary, End::Hole)
                }
            });
            edges.push((layout.index(q), ends[0], ends[1]));
        }
        ErrorGraph { edges }
    }

    /// Shortest path from any end in `from` to any end in `to`, as data
    /// qubit indices. Intermediate nodes are active sites only.
    fn shortest_path(&self, n_sites: usize, from: &dyn Fn(End) -> bool, to: &dyn Fn(End) -> bool) -> Option<Vec<usize>> {
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n_sites];
        let mut starts: Vec<(usize, usize)> = Vec::new();
        let mut direct: Option<usize> = None;
        let mut finals: Vec<(usize, usize)> = Vec::new();
        for &(q, a, b) in &self.edges {
            for (x, y) in [(a, b), (b, a)] {
                match (x, y) {
                    (End::Site(u), End::Site(v)) => adj[u].push((v, q)),
                    (End::Site(u), e) => {
                        if from(e) {
                            starts.push((u, q));
                        }
                        if to(e) {
                            finals.push((u, q));
                        }
                    }
                    _ => {}
                }
            }
            if from(a) && to(b) || from(b) && to(a) {
                direct.get_or_insert(q);
            }
        }
        if let Some(q) = direct {
            return Some(vec![q]);
        }
        let mut is_final = vec![None; n_sites];
        for &(u, q) in &finals {
            is_final[u].get_or_insert(q);
        }
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; n_sites];
        let mut seen = vec![false; n_sites];
        let mut queue = VecDeque::new();
        starts.sort_unstable();
        for &(u, q) in &starts {
            if !seen[u] {
                seen[u] = true;
                prev[u] = Some((usize::MAX, q));
                queue.push_back(u);
            }
        }
        while let Some(u) = queue.pop_front() {
            if let Some(qf) = is_final[u] {
                let mut path = vec![qf];
                let mut cur = u;
                while let Some((p, q)) = prev[cur] {
                    path.push(q);
                    if p == usize::MAX {
                        break;
                    }
                    cur = p;
                }
                path.reverse();
                return Some(path);
            }
            for &(v, q) in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    prev[v] = Some((u, q));
                    queue.push_back(v);
                }
            }
        }
        None
    }

    /// Length of the shortest closed walk (all ends merged into one node)
    /// crossing `target` an odd number of times.
    fn min_odd_cycle(&self, n_sites: usize, target: &BTreeSet<usize>) -> Option<usize> {
        let virt = n_sites;
        let nodes = n_sites + 1;
        let mut adj: Vec<Vec<(usize, bool)>> = vec![Vec::new(); nodes];
        for &(q, a, b) in &self.edges {
            let id = |e: End| match e {
                End::Site(u) => u,
                _ => virt,
            };
            let (u, v) = (id(a), id(b));
            let odd = target.contains(&q);
            if u == v {
                if odd {
                    // A single qubit spanning two ends is already a logical.
                    return Some(1);
                }
                continue;
            }
            adj[u].push((v, odd));
            adj[v].push((u, odd));
        }
        let used: Vec<usize> = (0..nodes).filter(|&u| !adj[u].is_empty()).collect();
        let mut best: Option<usize> = None;
        let mut dist = vec![usize::MAX; 2 * nodes];
        for &s in &used {
            dist.fill(usize::MAX);
            dist[2 * s] = 0;
            let mut queue = VecDeque::from([(s, 0usize)]);
            while let Some((u, p)) = queue.pop_front() {
                let du = dist[2 * u + p];
                if best.is_some_and(|b| du + 1 >= b) {
                    break;
                }
                for &(v, odd) in &adj[u] {
                    let pv = p ^ usize::from(odd);
                    if dist[2 * v + pv] == usize::MAX {
                        dist[2 * v + pv] = du + 1;
                        queue.push_back((v, pv));
                    }
                }
            }
            let d = dist[2 * s + 1];
            if d != usize::MAX && best.is_none_or(|b| d < b) {
                best = Some(d);
            }
        }
        best
    }
}

fn chain_string(qubits: impl IntoIterator<Item = usize>, kind: StabKind) -> PauliString {
    PauliString::from_ops(qubits.into_iter().map(|q| (q, kind.op())))
}

fn check_logical(layout: &ArrayLayout, op: &PauliString) -> Result<()> {
    for s in layout.stabilizers() {
        if !commutes(op, &layout.stabilizer_operator(&s)) {
            return Err(Error::NoLogical(format!("chain {op} anti-commutes with stabilizer at {:?}", s.measure_site)));
        }
    }
    Ok(())
}

fn hole(layout: &ArrayLayout, h: usize) -> Result<&HoleSpec> {
    layout.holes.get(h).ok_or_else(|| Error::NoLogical(format!("no hole {h}")))
}

/// Canonical chain for a logical operator.
///
/// Planar: `X_L` along row 0, `Z_L` along column 0. Holes: the loop is the
/// product of the hole's turned-off cells; the open chain is a shortest
/// path from the hole to its partner hole or to the boundary.
pub fn logical_chain(layout: &ArrayLayout, which: Which, qubit: QubitRef) -> Result<PauliString> {
    let op = match qubit {
        QubitRef::Planar => {
            let s = layout.size;
            let chain: Vec<usize> = match which {
                Which::XL => (0..s).step_by(2).map(|c| layout.index((0, c))).collect(),
                Which::ZL => (0..s).step_by(2).map(|r| layout.index((r, 0))).collect(),
            };
            if chain.iter().any(|&q| !layout.active[q]) {
                return Err(Error::NoLogical("canonical planar chain crosses a removed qubit".into()));
            }
            let kind = if which == Which::XL { StabKind::X } else { StabKind::Z };
            chain_string(chain, kind)
        }
        QubitRef::Pair(a, _) | QubitRef::Single(a) => {
            let ha = hole(layout, a)?;
            let partner = match qubit {
                QubitRef::Pair(_, b) => {
                    let hb = hole(layout, b)?;
                    if hb.kind != ha.kind || a == b {
                        return Err(Error::NoLogical("hole pair must be two distinct holes of one kind".into()));
                    }
                    Some(b)
                }
                _ => None,
            };
            let loop_kind = ha.kind.stab();
            let is_loop = matches!((which, ha.kind), (Which::ZL, CutKind::ZCut) | (Which::XL, CutKind::XCut));
            if is_loop {
                let per = ha.perimeter(layout);
                chain_string(per.into_iter().map(|q| layout.index(q)), loop_kind)
            } else {
                let error = loop_kind.other();
                let g = ErrorGraph::new(layout, error);
                let from = move |e: End| e == End::Hole(a);
                let path = match partner {
                    Some(b) => g.shortest_path(layout.num_sites(), &from, &move |e| e == End::Hole(b)),
                    None => g.shortest_path(layout.num_sites(), &from, &|e| e == End::Boundary),
                };
                let path = path.ok_or_else(|| {
                    Error::NoLogical(format!("no {error:?} chain from hole {a} to its partner (needs a matching boundary)"))
                })?;
                chain_string(path, error)
            }
        }
    };
    check_logical(layout, &op)?;
    Ok(op)
}

/// Minimum weight of an undetectable `error`-type chain that flips the
/// qubit, i.e. anti-commutes with the conjugate logical.
pub fn distance_of(layout: &ArrayLayout, qubit: QubitRef, error: StabKind) -> Result<usize> {
    let conj = match error {
        StabKind::X => logical_chain(layout, Which::ZL, qubit)?,
        StabKind::Z => logical_chain(layout, Which::XL, qubit)?,
    };
    let target: BTreeSet<usize> = conj.qubits().collect();
    ErrorGraph::new(layout, error)
        .min_odd_cycle(layout.num_sites(), &target)
        .ok_or_else(|| Error::NoLogical(format!("no {error:?}-type logical chain")))
}

/// `min` of the bit-flip and phase-flip distances.
pub fn code_distance(layout: &ArrayLayout, qubit: QubitRef) -> Result<usize> {
    Ok(distance_of(layout, qubit, StabKind::X)?.min(distance_of(layout, qubit, StabKind::Z)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2;

    fn stab_ops(l: &ArrayLayout) -> Vec<PauliString> {
        l.stabilizers().iter().map(|s| l.stabilizer_operator(s)).collect()
    }

    fn symplectic_rows(l: &ArrayLayout, ops: &[PauliString]) -> Vec<Vec<u64>> {
        let n = l.num_sites();
        ops.iter()
            .map(|p| {
                let mut v = vec![0u64; (2 * n).div_ceil(64)];
                for (q, op) in p.support() {
                    let (z, x) = op.bits();
                    if x {
                        gf2::set(&mut v, q);
                    }
                    if z {
                        gf2::set(&mut v, n + q);
                    }
                }
                v
            })
            .collect()
    }

    #[test]
    fn planar_counts() {
        for (d, data, meas) in [(2, 5, 4), (3, 13, 12), (5, 41, 40)] {
            let l = build_planar(d).unwrap();
            assert_eq!(l.count(Role::Data), data);
            assert_eq!(l.count(Role::MeasureX) + l.count(Role::MeasureZ), meas);
            assert_eq!(l.logical_dof(), 1);
        }
        assert!(build_planar(1).is_err());
    }

    #[test]
    fn boundary_types() {
        let l = build_planar(3).unwrap();
        assert_eq!(l.boundary_type(Edge::Left), Boundary::X);
        assert_eq!(l.boundary_type(Edge::Top), Boundary::Z);
        // measure-X on the left edge is 3-terminal
        assert_eq!(l.stabilizer_at((1, 0)).unwrap().neighbors.len(), 3);
        assert_eq!(l.stabilizer_at((1, 0)).unwrap().kind, StabKind::X);
    }

    #[test]
    fn zigzag_orders() {
        let l = build_planar(3).unwrap();
        let z = l.stabilizer_at((2, 1)).unwrap();
        assert_eq!(z.neighbors, vec![(1, 1), (2, 0), (2, 2), (3, 1)]);
        let x = l.stabilizer_at((1, 2)).unwrap();
        assert_eq!(x.neighbors, vec![(0, 2), (1, 3), (1, 1), (2, 2)]);
        let top = l.stabilizer_at((0, 1)).unwrap();
        assert_eq!(top.neighbors, vec![(0, 0), (0, 2), (1, 1)]);
    }

    #[test]
    fn planar_structure_for_all_sizes() {
        for d in 2..=11 {
            let l = build_planar(d).unwrap();
            let ops = stab_ops(&l);
            for (i, a) in ops.iter().enumerate() {
                for b in &ops[i + 1..] {
                    assert!(commutes(a, b));
                }
            }
            let specs = l.stabilizers();
            for a in &specs {
                for b in &specs {
                    if a.kind != b.kind {
                        let shared = a.neighbors.iter().filter(|q| b.neighbors.contains(q)).count();
                        assert!(shared == 0 || shared == 2);
                    }
                }
                let (r, c) = a.measure_site;
                if r > 0 && c > 0 && r + 1 < l.size() && c + 1 < l.size() {
                    assert_eq!(a.neighbors.len(), 4);
                }
            }
            for q in l.data_sites() {
                let nb: Vec<Coord> = l.measure_neighbors(q).collect();
                if nb.len() == 4 {
                    assert_eq!(nb.iter().filter(|&&m| role_at(m) == Role::MeasureX).count(), 2);
                }
            }
            let mut rows = symplectic_rows(&l, &ops);
            assert_eq!(gf2::rank(&mut rows), ops.len());
            assert_eq!(code_distance(&l, QubitRef::Planar).unwrap(), d);
        }
    }

    #[test]
    fn planar_chains() {
        let l = build_planar(5).unwrap();
        let x = logical_chain(&l, Which::XL, QubitRef::Planar).unwrap();
        let z = logical_chain(&l, Which::ZL, QubitRef::Planar).unwrap();
        assert_eq!(x.weight(), 5);
        assert!(!commutes(&x, &z));
        assert_eq!(x.qubits().filter(|q| z.get(*q) != PauliOp::I).count(), 1);
        let ops = stab_ops(&l);
        let mut rows = symplectic_rows(&l, &ops);
        let base = gf2::rank(&mut rows);
        let mut with = symplectic_rows(&l, &ops);
        with.extend(symplectic_rows(&l, std::slice::from_ref(&x)));
        assert_eq!(gf2::rank(&mut with), base + 1);
    }

    #[test]
    fn double_cut_small_qubit() {
        let l = build_planar(11).unwrap();
        let l = carve_holes(&l, &[HoleSpec::single(CutKind::ZCut, (10, 7)), HoleSpec::single(CutKind::ZCut, (10, 13))]).unwrap();
        assert_eq!(l.logical_dof(), 3);
        let q = QubitRef::Pair(0, 1);
        let x = logical_chain(&l, Which::XL, q).unwrap();
        let z = logical_chain(&l, Which::ZL, q).unwrap();
        assert_eq!(x.weight(), 3);
        assert_eq!(z.weight(), 4);
        assert!(!commutes(&x, &z));
        assert_eq!(code_distance(&l, q).unwrap(), 3);
        let xs: Vec<Coord> = x.qubits().map(|i| l.coord(i)).collect();
        assert_eq!(xs, vec![(10, 8), (10, 10), (10, 12)]);
    }

    #[test]
    fn five_cell_hole_loop() {
        let l = build_planar(9).unwrap();
        let l = carve_holes(&l, &[HoleSpec::five_cell(CutKind::ZCut, (6, 7))]).unwrap();
        let z = logical_chain(&l, Which::ZL, QubitRef::Single(0)).unwrap();
        assert_eq!(z.weight(), 8);
        assert_eq!(l.count(Role::Data), 145 - 4);
    }

    #[test]
    fn single_cut_near_boundary() {
        let l = build_planar(9).unwrap();
        let near = carve_holes(&l, &[HoleSpec::single(CutKind::ZCut, (8, 5))]).unwrap();
        assert_eq!(code_distance(&near, QubitRef::Single(0)).unwrap(), 3);
        let deeper = carve_holes(&l, &[HoleSpec::single(CutKind::ZCut, (8, 7))]).unwrap();
        assert_eq!(code_distance(&deeper, QubitRef::Single(0)).unwrap(), 4);
    }

    #[test]
    fn carve_errors_and_noop() {
        let l = build_planar(5).unwrap();
        assert_eq!(carve_holes(&l, &[]).unwrap(), l);
        assert!(carve_holes(&l, &[HoleSpec::single(CutKind::ZCut, (0, 1))]).is_err());
        assert!(carve_holes(&l, &[HoleSpec::single(CutKind::ZCut, (4, 4))]).is_err());
        let h = HoleSpec::single(CutKind::ZCut, (4, 3));
        assert!(carve_holes(&l, &[h.clone(), h]).is_err());
    }

    #[test]
    fn x_cut_pair_chains() {
        let l = build_planar(11).unwrap();
        let l = carve_holes(&l, &[HoleSpec::single(CutKind::XCut, (7, 10)), HoleSpec::single(CutKind::XCut, (13, 10))]).unwrap();
        let q = QubitRef::Pair(0, 1);
        let x = logical_chain(&l, Which::XL, q).unwrap();
        let z = logical_chain(&l, Which::ZL, q).unwrap();
        assert_eq!(x.weight(), 4);
        assert_eq!(z.weight(), 3);
        assert!(!commutes(&x, &z));
        assert_eq!(code_distance(&l, q).unwrap(), 3);
    }

    #[test]
    fn text_roundtrip() {
        let l = carve_holes(&build_planar(5).unwrap(), &[HoleSpec::single(CutKind::ZCut, (4, 3))]).unwrap();
        let t = l.to_text();
        assert!(t.starts_with("d=5\n"));
        assert!(t.contains("4 3 measureZ 0"));
        let back = ArrayLayout::from_text(&t).unwrap();
        assert_eq!(back.mask(), l.mask());
        assert!(ArrayLayout::from_text("d=2\n0 0 data 1\n").is_err());
    }
}
