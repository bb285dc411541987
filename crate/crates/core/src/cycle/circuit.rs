use crate::lattice::{ArrayLayout, Coord, Role, StabKind};
use crate::pauli::PauliOp;

/// One gate or noise point of the 8-step cycle, over site indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Reset(u32),
    H(u32),
    Cnot(u32, u32),
    Measure { site: u32, idx: u32 },
    Fault(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaultKind {
    /// Initialization into the wrong state: an X on the fresh qubit.
    Init(u32),
    /// X, Y or Z on one qubit.
    Single(u32),
    /// One of the 15 non-identity Paulis on `(control, target)`.
    Pair(u32, u32),
    /// Classical flip of measurement `idx`.
    Flip(u32),
}

impl FaultKind {
    pub fn options(self) -> u8 {
        match self {
            FaultKind::Init(_) | FaultKind::Flip(_) => 1,
            FaultKind::Single(_) => 3,
            FaultKind::Pair(..) => 15,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FaultPoint {
    /// 0: data idle, 1: measure-qubit init/H/readout, 2: CNOT.
    pub class: u8,
    pub kind: FaultKind,
}

/// Pauli of option `o` at a single-qubit point.
pub fn single_option(o: u8) -> PauliOp {
    [PauliOp::X, PauliOp::Y, PauliOp::Z][o as usize]
}

/// `(control, target)` Paulis of option `o` at a CNOT point.
pub fn pair_option(o: u8) -> (PauliOp, PauliOp) {
    let k = o as usize + 1;
    (PauliOp::ALL[k / 4], PauliOp::ALL[k % 4])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeasureInfo {
    pub site: u32,
    pub coord: Coord,
    pub kind: StabKind,
}

/// The gate sequence of one cycle with its fault points.
///
/// Step 1 resets measure qubits, step 2 applies H to measure-X, steps 3-6
/// run the CNOT slots in zig-zag order, step 7 applies H again and step 8
/// measures. Data qubits idle in steps 1, 2, 7 and 8.
#[derive(Debug, Clone)]
pub struct RoundCircuit {
    pub n_sites: usize,
    pub measures: Vec<MeasureInfo>,
    pub data: Vec<u32>,
    pub ops: Vec<Op>,
    pub points: Vec<FaultPoint>,
    pub class_points: [Vec<u32>; 3],
}

impl RoundCircuit {
    pub fn new(layout: &ArrayLayout) -> Self {
        let stabs = layout.stabilizers();
        let measures: Vec<MeasureInfo> = stabs
            .iter()
            .map(|s| MeasureInfo { site: layout.index(s.measure_site) as u32, coord: s.measure_site, kind: s.kind })
            .collect();
        let data: Vec<u32> = layout.data_sites().map(|q| layout.index(q) as u32).collect();
        let mut c = RoundCircuit {
            n_sites: layout.num_sites(),
            measures,
            data,
            ops: Vec::new(),
            points: Vec::new(),
            class_points: [Vec::new(), Vec::new(), Vec::new()],
        };
        let idle = |c: &mut RoundCircuit| {
            for q in c.data.clone() {
                c.fault(0, FaultKind::Single(q));
            }
        };
        let mx: Vec<u32> = c.measures.iter().filter(|m| m.kind == StabKind::X).map(|m| m.site).collect();

        for m in c.measures.clone() {
            c.ops.push(Op::Reset(m.site));
            c.fault(1, FaultKind::Init(m.site));
        }
        idle(&mut c);

        for &m in &mx {
            c.ops.push(Op::H(m));
            c.fault(1, FaultKind::Single(m));
        }
        idle(&mut c);

        for slot in 0..4 {
            for s in &stabs {
                let m = layout.index(s.measure_site) as u32;
                for &q in &s.neighbors {
                    if ArrayLayout::slot_of(s.measure_site, q) != slot {
                        continue;
                    }
                    let q = layout.index(q) as u32;
                    let (ctl, tgt) = if s.kind == StabKind::Z { (q, m) } else { (m, q) };
                    c.ops.push(Op::Cnot(ctl, tgt));
                    c.fault(2, FaultKind::Pair(ctl, tgt));
                }
            }
        }

        for &m in &mx {
            c.ops.push(Op::H(m));
            c.fault(1, FaultKind::Single(m));
        }
        idle(&mut c);

        idle(&mut c);
        for (idx, m) in c.measures.clone().into_iter().enumerate() {
            c.ops.push(Op::Measure { site: m.site, idx: idx as u32 });
            c.fault(1, FaultKind::Flip(idx as u32));
        }
        debug_assert!(c.measures.iter().all(|m| layout.role(m.coord) != Role::Data));
        c
    }

    fn fault(&mut self, class: u8, kind: FaultKind) {
        let id = self.points.len() as u32;
        self.points.push(FaultPoint { class, kind });
        self.class_points[class as usize].push(id);
        self.ops.push(Op::Fault(id));
    }

    pub fn num_measures(&self) -> usize {
        self.measures.len()
    }

    /// Index of the measurement taken at `coord`, if any.
    pub fn measure_index(&self, coord: Coord) -> Option<usize> {
        self.measures.iter().position(|m| m.coord == coord)
    }
}
