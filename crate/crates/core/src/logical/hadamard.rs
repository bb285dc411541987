//! Logical Hadamard on a Z-cut hole pair by isolating a square patch,
//! applying transversal H to its data, shifting it back onto the lattice
//! with two rounds of swaps and moving the holes home.
//!
//! Geometry (rows down, columns right). The patch `B` spans odd rows
//! `r0..=r1` and odd columns `c0..=c1`, `d` data qubits per side. The
//! qubit's holes are 2x2 cell blocks directly above and below `B`. An
//! X-cut ring at distance `2m` around `B` isolates the region. After the
//! shift the patch occupies `B' = B - (1, 1)` and two new holes sit to its
//! left and right on data row `xr`.

use std::collections::{BTreeMap, BTreeSet};

use super::frame::{Frame, OutcomeOracle};
use super::group::ByproductRecord;
use super::moves::with_holes;
use crate::error::{Error, Result};
use crate::lattice::{
    build_planar, code_distance, logical_chain, role_at, ArrayLayout, Coord, CutKind, HoleSpec, QubitRef, Role, StabKind,
    Which,
};
use crate::pauli::{CliffordGate, PauliOp, PauliString};

/// Hole pair of the scenario: index 1 is the lower hole (loop operator),
/// index 0 the upper one.
pub const QUBIT: QubitRef = QubitRef::Pair(1, 0);

/// Repeat counts stored in the emitted script.
pub const RING_REPEATS: usize = 3;
pub const SECOND_MOVE_REPEATS: usize = 2;
pub const RETURN_REPEATS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HadamardGeometry {
    pub d: usize,
    pub array_d: usize,
    pub r0: usize,
    pub r1: usize,
    pub c0: usize,
    pub c1: usize,
    /// Left column of the holes above and below the patch.
    pub hole_col: usize,
    /// Data row of the X chain between the re-created holes.
    pub xr: usize,
    pub ring_top: usize,
    pub ring_bottom: usize,
    pub ring_left: usize,
    pub ring_right: usize,
}

impl HadamardGeometry {
    /// Margin of four cells between patch and ring.
    pub fn new(d: usize) -> Result<Self> {
        if d < 3 || d.is_multiple_of(2) || d > 8 {
            return Err(Error::InvalidArgument(format!(
                "patch Hadamard supports odd d in 3..=7 with 2x2 holes, got {d}"
            )));
        }
        let m = 4;
        let (r0, c0) = (2 * m + 3, 2 * m + 3);
        let (r1, c1) = (r0 + 2 * (d - 1), c0 + 2 * (d - 1));
        let ring_right = c1 + 2 * m + 1;
        let size = (ring_right + 3) | 1;
        Ok(HadamardGeometry {
            d,
            array_d: size.div_ceil(2),
            r0,
            r1,
            c0,
            c1,
            hole_col: c0 + d - 3,
            xr: r0 - 1 + (d - 1),
            ring_top: r0 - 2 * m,
            ring_bottom: r1 + 2 * m,
            ring_left: c0 - 2 * m - 1,
            ring_right,
        })
    }

    fn block(top_left: Coord) -> HoleSpec {
        HoleSpec::five_cell(CutKind::ZCut, top_left)
    }

    pub fn upper(&self) -> HoleSpec {
        Self::block((self.r0 - 3, self.hole_col))
    }

    pub fn lower(&self) -> HoleSpec {
        Self::block((self.r1 + 1, self.hole_col))
    }

    pub fn ring(&self) -> HoleSpec {
        let mut sites = Vec::new();
        for c in (self.ring_left..=self.ring_right).step_by(2) {
            sites.push((self.ring_top, c));
            sites.push((self.ring_bottom, c));
        }
        for r in (self.ring_top + 2..self.ring_bottom).step_by(2) {
            sites.push((r, self.ring_left));
            sites.push((r, self.ring_right));
        }
        HoleSpec { kind: CutKind::XCut, turned_off: sites }
    }

    /// Starting layout: planar array with the two holes.
    pub fn layout(&self) -> Result<ArrayLayout> {
        with_holes(&build_planar(self.array_d)?, vec![self.upper(), self.lower()])
    }

    fn inside_ring(&self, s: Coord) -> bool {
        s.0 > self.ring_top && s.0 < self.ring_bottom && s.1 > self.ring_left && s.1 < self.ring_right
    }

    fn in_patch(&self, s: Coord) -> bool {
        (self.r0..=self.r1).contains(&s.0) && (self.c0..=self.c1).contains(&s.1)
    }

    fn in_shifted(&self, s: Coord) -> bool {
        (self.r0 - 1..self.r1).contains(&s.0) && (self.c0 - 1..self.c1).contains(&s.1)
    }
}

/// Layout whose measure sites are active unless in `off`; data qubits are
/// removed when all their X neighbours or all their Z neighbours are off.
fn masked(base: &ArrayLayout, off: &BTreeSet<Coord>, holes: Vec<HoleSpec>) -> Result<ArrayLayout> {
    let mut active = vec![true; base.num_sites()];
    for &s in off {
        active[base.index(s)] = false;
    }
    for q in base.data_sites() {
        let nb: Vec<Coord> = base.measure_neighbors(q).collect();
        let all_off = |role: Role| {
            let of: Vec<&Coord> = nb.iter().filter(|&&m| role_at(m) == role).collect();
            !of.is_empty() && of.iter().all(|m| off.contains(m))
        };
        if all_off(Role::MeasureX) || all_off(Role::MeasureZ) {
            active[base.index(q)] = false;
        }
    }
    base.with_mask(active, holes)
}

fn hadamard_op(p: &PauliString, on: &BTreeSet<usize>) -> PauliString {
    let mut out = PauliString::identity().with_sign(p.sign());
    for (q, op) in p.support() {
        let image = if on.contains(&q) {
            match op {
                PauliOp::X => PauliOp::Z,
                PauliOp::Z => PauliOp::X,
                other => {
                    // Real Y = ZX maps to XZ = -Y.
                    out = out.negated();
                    other
                }
            }
        } else {
            op
        };
        out.set(q, image);
    }
    out
}

fn z_chain(layout: &ArrayLayout, sites: impl IntoIterator<Item = Coord>) -> PauliString {
    PauliString::from_ops(sites.into_iter().map(|c| (layout.index(c), PauliOp::Z)))
}

fn x_chain(layout: &ArrayLayout, sites: impl IntoIterator<Item = Coord>) -> PauliString {
    PauliString::from_ops(sites.into_iter().map(|c| (layout.index(c), PauliOp::X)))
}

#[derive(Debug, Clone)]
pub struct HadamardOutcome {
    pub layout: ArrayLayout,
    /// Tracked `X_L ≅ x_sign · Z_L` and `Z_L ≅ z_sign · X_L` at the end,
    /// relative to the tracked signs at the start.
    pub x_image: [bool; 2],
    pub z_image: [bool; 2],
    pub x_sign: i8,
    pub z_sign: i8,
    pub byproduct: ByproductRecord,
    /// Z_L after the deformation into a chain across the ring.
    pub crossing_chain: PauliString,
    pub distances: Vec<usize>,
    pub script: Vec<String>,
}

/// Starts a frame on the geometry's layout tracking `[X_L, Z_L]`.
pub fn prepare(g: &HadamardGeometry, src: &mut dyn OutcomeOracle) -> Result<Frame> {
    let l = g.layout()?;
    let x = logical_chain(&l, Which::XL, QUBIT)?;
    let z = logical_chain(&l, Which::ZL, QUBIT)?;
    Ok(Frame::prepare(l, vec![x, z], src)?.0)
}

pub fn hadamard_patch(d: usize, src: &mut dyn OutcomeOracle) -> Result<HadamardOutcome> {
    let g = HadamardGeometry::new(d)?;
    let mut frame = prepare(&g, src)?;
    hadamard_on_frame(&mut frame, &g, [0, 1], d, src)
}

/// Runs the scenario on `frame`, whose tracked operators `ops[0]` and
/// `ops[1]` represent `±X_L` and `±Z_L` of the geometry's hole pair.
/// `required` is the distance that must hold while the holes move.
pub fn hadamard_on_frame(
    frame: &mut Frame,
    g: &HadamardGeometry,
    ops: [usize; 2],
    required: usize,
    src: &mut dyn OutcomeOracle,
) -> Result<HadamardOutcome> {
    let [xi, zi] = ops;
    let start = g.layout()?;
    if frame.layout() != &start {
        return Err(Error::Layout("frame is not on the scenario's starting layout".into()));
    }
    let targets = [logical_chain(&start, Which::XL, QUBIT)?, logical_chain(&start, Which::ZL, QUBIT)?];
    let (xm0, x0) = frame.express(&frame.tracked()[xi], &targets)?;
    let (zm0, z0) = frame.express(&frame.tracked()[zi], &targets)?;
    if xm0 != [true, false] || zm0 != [false, true] {
        return Err(Error::NoLogical("tracked operators are not X_L and Z_L of the hole pair".into()));
    }
    let base = build_planar(g.array_d)?;
    let ring = g.ring();
    let d = g.d;

    // Step 1: ring cut.
    let l1 = with_holes(&base, vec![g.upper(), g.lower(), ring.clone()])?;
    let gap: Vec<Coord> = frame.newly_removed(&l1);
    let singles: Vec<_> = gap.iter().map(|&q| (q, StabKind::Z)).collect();
    frame.note(
        &format!("turn off {} ring measure-X qubits; measure Z on {} gap data; repeat {RING_REPEATS}", ring.turned_off.len(), gap.len()),
        "tracked operators commute with the ring stabilizers",
    );
    frame.transition(l1, &singles, src)?;

    // Step 2: Z_L as a chain across the ring through the patch.
    let r2 = g.xr + 1;
    let crossing = z_chain(&base, (g.ring_left + 1..g.ring_right).step_by(2).map(|c| (r2, c)));
    frame.deform_tracked(zi, &crossing)?;
    frame.note(
        &format!("deform Z_L to the chain on row {r2} from column {} to {}", g.ring_left + 1, g.ring_right - 1),
        "Z_L equals the crossing chain times stabilizers",
    );

    // Step 3: clear the moat around the patch.
    let mut off: BTreeSet<Coord> = ring.turned_off.iter().copied().collect();
    for s in base.sites() {
        if s.role != Role::Data && g.inside_ring(s.coord) && !g.in_patch(s.coord) {
            off.insert(s.coord);
        }
    }
    let l3 = masked(&base, &off, vec![ring.clone()])?;
    let mut blue = 0;
    let mut moat: Vec<(Coord, StabKind)> = Vec::new();
    for q in base.sites().filter(|s| s.role == Role::Data).map(|s| s.coord) {
        if l3.is_active(q) || !g.inside_ring(q) || frame.singles().contains_key(&q) {
            continue;
        }
        let next_to_x = base.measure_neighbors(q).any(|m| role_at(m) == Role::MeasureX && l3.is_active(m));
        blue += usize::from(next_to_x);
        moat.push((q, if next_to_x { StabKind::X } else { StabKind::Z }));
    }
    frame.note(
        &format!("turn off all measure qubits between ring and patch; measure Z on {} data and X on {blue} data next to the patch's X boundaries", moat.len() - blue),
        "tracked operators lie inside the patch",
    );
    frame.transition(l3, &moat, src)?;
    // Drop the moat parts of the crossing chain.
    let inside = z_chain(&base, (g.c0..=g.c1).step_by(2).map(|c| (r2, c)));
    frame.deform_tracked(zi, &inside)?;

    // Steps 4-6: transversal H, then swap down-up and right-left.
    let patch_data: Vec<Coord> =
        base.sites().filter(|s| s.role == Role::Data && g.in_patch(s.coord)).map(|s| s.coord).collect();
    let h_on: BTreeSet<usize> = patch_data.iter().map(|&q| base.index(q)).collect();
    let mut perm: Vec<usize> = (0..base.num_sites()).collect();
    let mut gates: Vec<CliffordGate> = Vec::new();
    let mut fresh = Vec::new();
    for &(r, c) in &patch_data {
        let m = (r - 1, c);
        fresh.push((m, StabKind::Z, 1));
        gates.push(CliffordGate::Reset(base.index(m)));
    }
    gates.extend(h_on.iter().map(|&q| CliffordGate::H(q)));
    let mut swap = |a: Coord, b: Coord, gates: &mut Vec<CliffordGate>| {
        let (ia, ib) = (base.index(a), base.index(b));
        for p in perm.iter_mut() {
            if *p == ia {
                *p = ib;
            } else if *p == ib {
                *p = ia;
            }
        }
        gates.push(CliffordGate::Swap(ia, ib));
    };
    for &(r, c) in &patch_data {
        swap((r, c), (r - 1, c), &mut gates);
    }
    for &(r, c) in &patch_data {
        swap((r - 1, c), (r - 1, c - 1), &mut gates);
    }
    let mut off6: BTreeSet<Coord> = ring.turned_off.iter().copied().collect();
    for s in base.sites() {
        if s.role != Role::Data && g.inside_ring(s.coord) && !g.in_shifted(s.coord) {
            off6.insert(s.coord);
        }
    }
    let l6 = masked(&base, &off6, vec![ring.clone()])?;
    let mut singles6: BTreeMap<Coord, StabKind> = BTreeMap::new();
    for (&q, &(kind, _)) in frame.singles() {
        if !g.in_shifted(q) {
            singles6.insert(q, kind);
        }
    }
    let vacated: Vec<Coord> = patch_data.iter().copied().filter(|&q| !g.in_shifted(q)).collect();
    for &q in &vacated {
        singles6.insert(q, StabKind::Z);
    }
    let conj = move |p: &PauliString| hadamard_op(p, &h_on).mapped(|q| perm[q]);
    frame.note(
        &format!("apply H to the {} patch data qubits", patch_data.len()),
        "X and Z roles of patch stabilizers and tracked operators exchange",
    );
    frame.note(
        "swap each patch data qubit with the measure qubit above, then each such measure qubit with the data qubit to its left",
        &format!("patch shifted by one cell up-left; {} vacated data hold |g>", vacated.len()),
    );
    frame.apply_unitary(l6, &conj, &fresh, singles6, &gates, src)?;

    // Step 7: refill the moat, leaving holes left and right of the patch.
    let left = HadamardGeometry::block((g.xr - 2, g.c0 - 4));
    let right = HadamardGeometry::block((g.xr - 2, g.c1));
    let l7 = with_holes(&base, vec![left.clone(), right.clone(), ring.clone()])?;
    frame.note(
        "turn on all measure qubits inside the ring except two 2x2 Z-cut holes beside the patch",
        "tracked operators extend to commute with the refilled region",
    );
    frame.transition(l7.clone(), &[], src)?;

    // Step 8: loop form of the Z-type tracked operator.
    let loop_right = z_chain(&base, right.perimeter(&l7));
    frame.deform_tracked(xi, &loop_right)?;
    let across = x_chain(&base, (g.c0 - 1..g.c1).step_by(2).map(|c| (g.xr, c)));
    frame.deform_tracked(zi, &across)?;
    frame.note(
        "rewrite the tracked operators as the loop around the right hole and the chain between the holes",
        "former X_L is a Z loop; former Z_L is an X chain",
    );

    // Steps 9-10: move the holes home around the patch.
    let moves: [(usize, HoleSpec, HoleSpec, String); 3] = [
        (
            0,
            HadamardGeometry::block((g.r0 - 3, g.c0 - 4)),
            HadamardGeometry::block((g.r1 + 1, g.c1)),
            format!("wait {d} cycles"),
        ),
        (
            1,
            HadamardGeometry::block((g.r0 - 3, g.hole_col - 2)),
            HadamardGeometry::block((g.r1 + 1, g.hole_col + 2)),
            format!("repeat {SECOND_MOVE_REPEATS}"),
        ),
        (2, g.upper(), g.lower(), format!("repeat {RETURN_REPEATS}")),
    ];
    let mut distances = Vec::new();
    let mut holes = vec![left, right, ring.clone()];
    for (i, to_left, to_right, timing) in moves {
        let span = |a: &HoleSpec, b: &HoleSpec| span_block(a, b);
        let wide = vec![span(&holes[0], &to_left), span(&holes[1], &to_right), ring.clone()];
        let lw = with_holes(&base, wide)?;
        let ln = with_holes(&base, vec![to_left.clone(), to_right.clone(), ring.clone()])?;
        for l in [&lw, &ln] {
            let found = code_distance(l, QUBIT)?;
            distances.push(found);
            if found < required {
                return Err(Error::DistanceViolation { required, found });
            }
        }
        let removed: Vec<_> = frame.newly_removed(&lw).into_iter().map(|q| (q, StabKind::X)).collect();
        frame.note(
            &format!("move {}: extend both holes and measure X on {} data", i + 1, removed.len()),
            &format!("distance {} >= {required}", distances[distances.len() - 2]),
        );
        frame.transition(lw, &removed, src)?;
        frame.note(
            &format!("move {}: contract holes to {:?} and {:?}; {timing}", i + 1, to_left.turned_off[0], to_right.turned_off[0]),
            &format!("distance {} >= {required}", distances[distances.len() - 1]),
        );
        frame.transition(ln, &[], src)?;
        holes = vec![to_left, to_right, ring.clone()];
    }

    // Step 11: close the ring.
    frame.note("turn the ring measure-X qubits back on", "layout equals the starting layout");
    frame.transition(start.clone(), &[], src)?;
    if frame.layout().mask() != start.mask() {
        return Err(Error::Layout("holes did not return to their original sites".into()));
    }
    let (xm, x_sign) = frame.express(&frame.tracked()[xi], &targets)?;
    let (zm, z_sign) = frame.express(&frame.tracked()[zi], &targets)?;
    let (x_sign, z_sign) = (x_sign * x0, z_sign * z0);
    let x_image = [xm[0], xm[1]];
    let z_image = [zm[0], zm[1]];
    frame.note(
        "reduce tracked operators against the starting X_L and Z_L",
        &format!("X_L -> {}Z_L, Z_L -> {}X_L", sign_str(x_sign), sign_str(z_sign)),
    );
    Ok(HadamardOutcome {
        layout: frame.layout().clone(),
        x_image,
        z_image,
        x_sign,
        z_sign,
        byproduct: ByproductRecord::new(z_sign < 0, x_sign < 0),
        crossing_chain: crossing,
        distances,
        script: frame.take_transcript(),
    })
}

fn sign_str(s: i8) -> &'static str {
    if s < 0 {
        "-"
    } else {
        "+"
    }
}

/// Smallest 2-cell-wide rectangle of Z cells covering two 2x2 blocks on a
/// common row or column, with the enclosed X sites.
fn span_block(a: &HoleSpec, b: &HoleSpec) -> HoleSpec {
    let (ra, ca) = a.turned_off[0];
    let (rb, cb) = b.turned_off[0];
    let (rlo, rhi) = (ra.min(rb), ra.max(rb) + 2);
    let (clo, chi) = (ca.min(cb), ca.max(cb) + 2);
    let mut sites = Vec::new();
    for r in (rlo..=rhi).step_by(2) {
        for c in (clo..=chi).step_by(2) {
            sites.push((r, c));
        }
    }
    for r in (rlo + 1..rhi).step_by(2) {
        for c in (clo + 1..chi).step_by(2) {
            sites.push((r, c));
        }
    }
    HoleSpec { kind: CutKind::ZCut, turned_off: sites }
}
