//! Hole moves and braids as sequences of layout transitions.
//!
//! A move of a single-cell hole along cells `s1..sn` first turns off
//! `s2..sn` and measures the data qubits left between them, then turns
//! `s1..s(n-1)` back on. Tracked logical operators are carried through by
//! the [`Frame`], which also yields the byproduct signs.

use std::collections::{BTreeSet, VecDeque};

use super::frame::{Frame, MeasureRecord, OutcomeOracle};
use super::group::ByproductRecord;
use crate::error::{Error, Result};
use crate::lattice::{
    build_planar, carve_holes, code_distance, logical_chain, ArrayLayout, Coord, CutKind, HoleSpec, QubitRef, Role,
    StabKind, Which,
};
use crate::pauli::{commutes, multiply, PauliString};

/// Rebuilds `layout` from a planar array and a new hole list.
pub fn with_holes(layout: &ArrayLayout, holes: Vec<HoleSpec>) -> Result<ArrayLayout> {
    carve_holes(&build_planar(layout.distance())?, &holes)
}

fn is_edge(layout: &ArrayLayout, s: Coord) -> bool {
    let n = layout.size();
    s.0 < 2 || s.1 < 2 || s.0 + 2 >= n || s.1 + 2 >= n
}

fn steps(layout: &ArrayLayout, s: Coord) -> impl Iterator<Item = Coord> + '_ {
    [(-2isize, 0isize), (2, 0), (0, -2), (0, 2)].into_iter().filter_map(move |(dr, dc)| {
        let (r, c) = (s.0 as isize + dr, s.1 as isize + dc);
        layout.in_bounds(r, c).then_some((r as usize, c as usize))
    })
}

/// Sites of `role` that `passable` cannot connect to the array edge.
fn unreachable(layout: &ArrayLayout, role: Role, passable: &dyn Fn(Coord) -> bool) -> BTreeSet<Coord> {
    let all: Vec<Coord> = layout.sites().filter(|s| s.role == role && passable(s.coord)).map(|s| s.coord).collect();
    let mut seen: BTreeSet<Coord> = all.iter().copied().filter(|&s| is_edge(layout, s)).collect();
    let mut queue: VecDeque<Coord> = seen.iter().copied().collect();
    while let Some(s) = queue.pop_front() {
        for t in steps(layout, s) {
            if passable(t) && seen.insert(t) {
                queue.push_back(t);
            }
        }
    }
    all.into_iter().filter(|s| !seen.contains(s)).collect()
}

/// Sites of `role` inside the closed loop of `cells`.
pub fn inside_loop(layout: &ArrayLayout, role: Role, cells: &[Coord]) -> BTreeSet<Coord> {
    let wall: BTreeSet<Coord> = cells.iter().copied().collect();
    unreachable(layout, role, &|s| !wall.contains(&s))
}

/// Active sites of `role` cut off from the array edge by removed sites.
pub fn isolated_cells(layout: &ArrayLayout, role: Role) -> BTreeSet<Coord> {
    unreachable(layout, role, &|s| layout.is_active(s))
}

fn partner_of(qubit: QubitRef, hole: usize) -> Result<usize> {
    match qubit {
        QubitRef::Pair(a, b) if a == hole => Ok(b),
        QubitRef::Pair(a, b) if b == hole => Ok(a),
        _ => Err(Error::InvalidArgument(format!("hole {hole} is not part of the hole pair {qubit:?}"))),
    }
}

fn check_path(layout: &ArrayLayout, hole: usize, path: &[Coord]) -> Result<CutKind> {
    let h = layout.holes().get(hole).ok_or_else(|| Error::InvalidArgument(format!("no hole {hole}")))?;
    if path.len() < 2 {
        return Err(Error::Path("a move needs at least two cells".into()));
    }
    if h.turned_off != [path[0]] {
        return Err(Error::Path(format!("hole {hole} is not the single cell {:?}", path[0])));
    }
    let role = h.kind.stab().role();
    let mut seen = BTreeSet::new();
    for w in path.windows(2) {
        let (a, b) = (w[0], w[1]);
        let dr = a.0.abs_diff(b.0);
        let dc = a.1.abs_diff(b.1);
        if !((dr == 2 && dc == 0) || (dr == 0 && dc == 2)) {
            return Err(Error::Path(format!("cells {a:?} and {b:?} are not adjacent")));
        }
    }
    for (i, &s) in path.iter().enumerate() {
        if !seen.insert(s) {
            return Err(Error::Path(format!("path revisits {s:?}; a closed loop needs two moves")));
        }
        if i > 0 && (layout.role(s) != role || !layout.is_active(s)) {
            return Err(Error::Path(format!("{s:?} is not an active {role:?} cell")));
        }
    }
    Ok(h.kind)
}

fn coords(qs: &[Coord]) -> String {
    qs.iter().map(|q| format!("{q:?}")).collect::<Vec<_>>().join(" ")
}

/// Records of one executed move.
#[derive(Debug, Clone)]
pub struct MoveSteps {
    pub isolated: Vec<Coord>,
    pub extend: Vec<MeasureRecord>,
    pub contract: Vec<MeasureRecord>,
}

/// Moves single-cell hole `hole` of the frame's layout along `path`.
pub fn move_on_frame(frame: &mut Frame, hole: usize, path: &[Coord], src: &mut dyn OutcomeOracle) -> Result<MoveSteps> {
    let layout = frame.layout().clone();
    let kind = check_path(&layout, hole, path)?;
    let mut holes = layout.holes().to_vec();
    holes[hole] = HoleSpec { kind, turned_off: path.to_vec() };
    let extended = with_holes(&layout, holes.clone())?;
    if let Some(s) = isolated_cells(&extended, kind.stab().role()).into_iter().next() {
        return Err(Error::Path(format!(
            "path cuts the array in two around {s:?}; split it into two moves"
        )));
    }
    let isolated = frame.newly_removed(&extended);
    let basis = kind.stab().other();
    let singles: Vec<(Coord, StabKind)> = isolated.iter().map(|&q| (q, basis)).collect();
    let cells = &path[1..];
    frame.note(
        &format!("turn off {} cells {}; measure {:?} on data {}", cells.len(), coords(cells), basis, coords(&isolated)),
        "tracked operators commute with every new stabilizer",
    );
    let extend = frame.transition(extended, &singles, src)?;
    let last = *path.last().expect("path has two cells");
    holes[hole] = HoleSpec::single(kind, last);
    let contracted = with_holes(&layout, holes)?;
    let on = &path[..path.len() - 1];
    frame.note(
        &format!("turn on {} cells {}", on.len(), coords(on)),
        &format!("hole {hole} is the single cell {last:?}"),
    );
    let contract = frame.transition(contracted, &[], src)?;
    Ok(MoveSteps { isolated, extend, contract })
}

#[derive(Debug, Clone)]
pub struct MoveOutcome {
    pub layout: ArrayLayout,
    pub x_before: PauliString,
    pub z_before: PauliString,
    pub x_after: PauliString,
    pub z_after: PauliString,
    /// `X_L ≅ x_sign · x_after` and `Z_L ≅ z_sign · z_after`.
    pub x_sign: i8,
    pub z_sign: i8,
    pub byproduct: ByproductRecord,
    pub initial: Vec<MeasureRecord>,
    pub steps: MoveSteps,
    pub transcript: Vec<String>,
}

/// Moves `hole` of the hole-pair qubit `qubit` along `path`, tracking both
/// logical operators. The loop operator is taken around the moving hole.
pub fn move_hole(
    layout: &ArrayLayout,
    qubit: QubitRef,
    hole: usize,
    path: &[Coord],
    min_distance: usize,
    src: &mut dyn OutcomeOracle,
) -> Result<MoveOutcome> {
    let partner = partner_of(qubit, hole)?;
    let q = QubitRef::Pair(hole, partner);
    if with_holes(layout, layout.holes().to_vec())? != *layout {
        return Err(Error::Layout("moves need a planar array with registered holes".into()));
    }
    let kind = check_path(layout, hole, path)?;
    let mut final_holes = layout.holes().to_vec();
    final_holes[hole] = HoleSpec::single(kind, *path.last().expect("checked"));
    let found = code_distance(&with_holes(layout, final_holes)?, q)?;
    if found < min_distance {
        return Err(Error::DistanceViolation { required: min_distance, found });
    }
    let x_before = logical_chain(layout, Which::XL, q)?;
    let z_before = logical_chain(layout, Which::ZL, q)?;
    let (mut frame, initial) = Frame::prepare(layout.clone(), vec![x_before.clone(), z_before.clone()], src)?;
    let steps = move_on_frame(&mut frame, hole, path, src)?;
    let fin = frame.layout().clone();
    let loop_kind = kind.stab();
    let loop_op = logical_chain(&fin, if loop_kind == StabKind::Z { Which::ZL } else { Which::XL }, q)?;
    // Data between consecutive cells; other isolated data are not on the chain.
    let mids = path.windows(2).map(|w| ((w[0].0 + w[1].0) / 2, (w[0].1 + w[1].1) / 2));
    let extension = PauliString::from_ops(mids.map(|c| (fin.index(c), loop_kind.other().op())));
    let (x_after, z_after) = match loop_kind {
        StabKind::Z => (multiply(&x_before, &extension), loop_op),
        StabKind::X => (loop_op, multiply(&z_before, &extension)),
    };
    check_pair(&fin, &x_after, &z_after)?;
    let x_sign = single_sign(&frame, 0, &x_after)?;
    let z_sign = single_sign(&frame, 1, &z_after)?;
    let transcript = frame.take_transcript();
    Ok(MoveOutcome {
        layout: fin,
        x_before,
        z_before,
        x_after,
        z_after,
        x_sign,
        z_sign,
        byproduct: ByproductRecord::from_signs(x_sign, z_sign),
        initial,
        steps,
        transcript,
    })
}

fn single_sign(frame: &Frame, k: usize, target: &PauliString) -> Result<i8> {
    let (mask, sign) = frame.express(&frame.tracked()[k], std::slice::from_ref(target))?;
    if mask != [true] {
        return Err(Error::NoLogical(format!("tracked operator {k} does not reduce to {target}")));
    }
    Ok(sign)
}

/// Both operators commute with every stabilizer and anti-commute with
/// each other.
pub fn check_pair(layout: &ArrayLayout, x: &PauliString, z: &PauliString) -> Result<()> {
    for s in layout.stabilizers() {
        let g = layout.stabilizer_operator(&s);
        if !commutes(x, &g) || !commutes(z, &g) {
            return Err(Error::NoLogical(format!("logical chain anti-commutes with stabilizer at {:?}", s.measure_site)));
        }
    }
    if commutes(x, z) {
        return Err(Error::NoLogical("X_L and Z_L commute".into()));
    }
    Ok(())
}

/// Operator order used by braid transforms.
pub const BRAID_BASIS: [&str; 4] = ["X1", "X2", "Z1", "Z2"];

#[derive(Debug, Clone)]
pub struct BraidSpec {
    /// Z-cut hole pair, moving hole first.
    pub moving: QubitRef,
    /// Second hole pair, X-cut.
    pub other: QubitRef,
    /// Closed cell loop starting and ending at the moving hole.
    pub path: Vec<Coord>,
    /// Index of the cell where the first move ends.
    pub split: usize,
    pub repeat: usize,
    pub min_distance: usize,
}

#[derive(Debug, Clone)]
pub struct BraidOutcome {
    pub layout: ArrayLayout,
    /// Canonical `[X1, X2, Z1, Z2]` on the final layout.
    pub targets: [PauliString; 4],
    /// Image of each [`BRAID_BASIS`] operator as a mask over the same basis.
    pub images: [[bool; 4]; 4],
    pub signs: [i8; 4],
    pub byproducts: [ByproductRecord; 2],
    pub transcript: Vec<String>,
}

fn canonical_four(layout: &ArrayLayout, a: QubitRef, b: QubitRef) -> Result<[PauliString; 4]> {
    Ok([
        logical_chain(layout, Which::XL, a)?,
        logical_chain(layout, Which::XL, b)?,
        logical_chain(layout, Which::ZL, a)?,
        logical_chain(layout, Which::ZL, b)?,
    ])
}

/// Pauli byproduct `Z1^a X1^b Z2^c X2^e` that flips exactly the images
/// with sign -1.
pub fn braid_byproducts(images: &[[bool; 4]; 4], signs: &[i8; 4]) -> Result<[ByproductRecord; 2]> {
    for bits in 0u8..16 {
        let [a, b, c, e] = [0, 1, 2, 3].map(|i| bits >> i & 1 == 1);
        let ok = images.iter().zip(signs).all(|(m, &s)| {
            let odd = (a & m[0]) ^ (c & m[1]) ^ (b & m[2]) ^ (e & m[3]);
            odd == (s < 0)
        });
        if ok {
            return Ok([ByproductRecord::new(a, b), ByproductRecord::new(c, e)]);
        }
    }
    Err(Error::NoLogical("no Pauli byproduct matches the image signs".into()))
}

/// Canonical `[X1, X2, Z1, Z2]` chains for a braid on `layout`.
pub fn braid_operators(layout: &ArrayLayout, spec: &BraidSpec) -> Result<[PauliString; 4]> {
    canonical_four(layout, spec.moving, spec.other)
}

pub fn braid(layout: &ArrayLayout, spec: &BraidSpec, src: &mut dyn OutcomeOracle) -> Result<BraidOutcome> {
    let start = braid_operators(layout, spec)?;
    let (mut frame, _) = Frame::prepare(layout.clone(), start.to_vec(), src)?;
    braid_on_frame(&mut frame, spec, src)
}

/// Runs the braid on a frame whose first four tracked operators are
/// `[X1, X2, Z1, Z2]` up to stabilizers and sign.
pub fn braid_on_frame(frame: &mut Frame, spec: &BraidSpec, src: &mut dyn OutcomeOracle) -> Result<BraidOutcome> {
    let layout = frame.layout().clone();
    let (QubitRef::Pair(m, _), QubitRef::Pair(..)) = (spec.moving, spec.other) else {
        return Err(Error::InvalidArgument("braids need two hole-pair qubits".into()));
    };
    let path = &spec.path;
    if path.len() < 3 || path.first() != path.last() {
        return Err(Error::Path("braid path is not closed".into()));
    }
    if spec.split == 0 || spec.split + 1 >= path.len() {
        return Err(Error::Path("split must leave two non-empty moves".into()));
    }
    let kind = layout.holes().get(m).map(|h| h.kind).ok_or_else(|| Error::InvalidArgument(format!("no hole {m}")))?;
    let inside = inside_loop(&layout, kind.stab().role(), &path[..path.len() - 1]);
    for (i, h) in layout.holes().iter().enumerate() {
        if i != m && h.kind == kind && h.cells(&layout).any(|c| inside.contains(&c)) {
            return Err(Error::Path(format!("braid loop encloses hole {i} of the same cut type")));
        }
    }
    let found = code_distance(&layout, spec.moving)?;
    if found < spec.min_distance {
        return Err(Error::DistanceViolation { required: spec.min_distance, found });
    }
    if frame.tracked().len() < 4 {
        return Err(Error::InvalidArgument("frame must track X1, X2, Z1, Z2".into()));
    }
    for _ in 0..spec.repeat.max(1) {
        move_on_frame(frame, m, &path[..=spec.split], src)?;
        let found = code_distance(frame.layout(), spec.moving)?;
        if found < spec.min_distance {
            return Err(Error::DistanceViolation { required: spec.min_distance, found });
        }
        let d = layout.distance();
        frame.note(&format!("wait {d} cycles"), &format!("distance {found} >= {}", spec.min_distance));
        move_on_frame(frame, m, &path[spec.split..], src)?;
    }
    let fin = frame.layout().clone();
    let targets = canonical_four(&fin, spec.moving, spec.other)?;
    let mut images = [[false; 4]; 4];
    let mut signs = [1i8; 4];
    for k in 0..4 {
        let (mask, sign) = frame.express(&frame.tracked()[k], &targets)?;
        images[k].copy_from_slice(&mask);
        signs[k] = sign;
    }
    let byproducts = braid_byproducts(&images, &signs)?;
    let summary: Vec<String> = (0..4)
        .map(|k| {
            let img: Vec<&str> = (0..4).filter(|&j| images[k][j]).map(|j| BRAID_BASIS[j]).collect();
            format!("{} -> {}{}", BRAID_BASIS[k], if signs[k] < 0 { "-" } else { "" }, img.join(""))
        })
        .collect();
    frame.note("reduce tracked operators modulo stabilizers", &summary.join(", "));
    Ok(BraidOutcome { layout: fin, targets, images, signs, byproducts, transcript: frame.take_transcript() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logical::frame::{OutcomeSource, TableauOracle};
    use crate::logical::group::product;
    use crate::pauli::PauliOp;

    fn two_holes() -> ArrayLayout {
        let base = build_planar(9).unwrap();
        carve_holes(&base, &[HoleSpec::single(CutKind::ZCut, (4, 7)), HoleSpec::single(CutKind::ZCut, (10, 7))]).unwrap()
    }

    #[test]
    fn one_cell_move_extends_and_contracts() {
        let l = two_holes();
        let out = move_hole(&l, QubitRef::Pair(1, 0), 1, &[(10, 7), (12, 7)], 3, &mut OutcomeSource::AllPlus).unwrap();
        let z6789 = PauliString::zs([(11, 7), (12, 6), (12, 8), (13, 7)].map(|c| l.index(c)));
        let x1236 = PauliString::xs([(5, 7), (7, 7), (9, 7), (11, 7)].map(|c| l.index(c)));
        assert!(out.z_after.same_support_ops(&z6789));
        assert!(out.x_after.same_support_ops(&x1236));
        assert_eq!(out.steps.isolated, vec![(11, 7)]);
        assert!(out.byproduct.is_identity());
    }

    #[test]
    fn measured_minus_one_sets_px() {
        let l = two_holes();
        let x6 = PauliString::single(l.index((11, 7)), PauliOp::X);
        let mut src = OutcomeSource::Scripted(vec![(x6, -1)]);
        let out = move_hole(&l, QubitRef::Pair(1, 0), 1, &[(10, 7), (12, 7)], 3, &mut src).unwrap();
        assert_eq!(out.byproduct, ByproductRecord::new(true, false));
    }

    #[test]
    fn closed_single_move_is_rejected() {
        let l = two_holes();
        let ring = [(10, 7), (10, 9), (10, 11), (12, 11), (14, 11)];
        // Reaches the array edge without enclosing anything.
        assert!(move_hole(&l, QubitRef::Pair(1, 0), 1, &ring[..3], 1, &mut OutcomeSource::AllPlus).is_ok());
        let closed = [(10, 7), (10, 9), (12, 9), (12, 7), (10, 7)];
        assert!(matches!(
            move_hole(&l, QubitRef::Pair(1, 0), 1, &closed, 1, &mut OutcomeSource::AllPlus),
            Err(Error::Path(_))
        ));
    }

    #[test]
    fn enclosing_loop_cuts_array() {
        let l = two_holes();
        let big = [(10, 7), (10, 9), (10, 11), (12, 11), (12, 9), (12, 7)];
        move_hole(&l, QubitRef::Pair(1, 0), 1, &big, 1, &mut OutcomeSource::AllPlus).unwrap();
        // Eight cells of a 3x3 block cut off the centre cell.
        let u = [(10, 7), (10, 9), (10, 11), (12, 11), (14, 11), (14, 9), (14, 7), (12, 7)];
        let r = move_hole(&l, QubitRef::Pair(1, 0), 1, &u, 1, &mut OutcomeSource::AllPlus);
        assert!(matches!(r, Err(Error::Path(_))), "{:?}", r.map(|o| o.transcript));
    }

    #[test]
    fn move_toward_partner_violates_distance() {
        let l = two_holes();
        let err = move_hole(&l, QubitRef::Pair(1, 0), 1, &[(10, 7), (8, 7)], 3, &mut OutcomeSource::AllPlus).unwrap_err();
        assert!(matches!(err, Error::DistanceViolation { required: 3, found: 2 }));
    }

    fn braid_layout(c: Coord, d: Coord) -> ArrayLayout {
        let base = build_planar(12).unwrap();
        let holes = [
            HoleSpec::single(CutKind::ZCut, (8, 7)),
            HoleSpec::single(CutKind::ZCut, (2, 7)),
            HoleSpec::single(CutKind::XCut, c),
            HoleSpec::single(CutKind::XCut, d),
        ];
        carve_holes(&base, &holes).unwrap()
    }

    fn loop_spec(repeat: usize) -> BraidSpec {
        let path = vec![
            (8, 7), (8, 9), (8, 11), (8, 13), (10, 13), (12, 13), (14, 13),
            (14, 11), (14, 9), (14, 7), (12, 7), (10, 7), (8, 7),
        ];
        BraidSpec { moving: QubitRef::Pair(0, 1), other: QubitRef::Pair(2, 3), path, split: 6, repeat, min_distance: 3 }
    }

    const CNOT_IMAGES: [[bool; 4]; 4] = [
        [true, true, false, false],
        [false, true, false, false],
        [false, false, true, false],
        [false, false, true, true],
    ];

    const IDENTITY: [[bool; 4]; 4] = [
        [true, false, false, false],
        [false, true, false, false],
        [false, false, true, false],
        [false, false, false, true],
    ];

    #[test]
    fn braid_around_xcut_hole_acts_as_cnot() {
        let l = braid_layout((11, 10), (11, 18));
        let out = braid(&l, &loop_spec(1), &mut OutcomeSource::random(4)).unwrap();
        assert_eq!(out.images, CNOT_IMAGES);
        assert_eq!(out.layout, l);
    }

    #[test]
    fn double_braid_is_identity() {
        let l = braid_layout((11, 10), (11, 18));
        let out = braid(&l, &loop_spec(2), &mut OutcomeSource::random(5)).unwrap();
        assert_eq!(out.images, IDENTITY);
    }

    #[test]
    fn empty_region_braid_is_identity() {
        let l = braid_layout((11, 18), (17, 18));
        let out = braid(&l, &loop_spec(1), &mut OutcomeSource::random(6)).unwrap();
        assert_eq!(out.images, IDENTITY);
    }

    #[test]
    fn braid_errors() {
        let l = braid_layout((11, 10), (11, 18));
        let mut open = loop_spec(1);
        open.path.pop();
        assert!(matches!(braid(&l, &open, &mut OutcomeSource::AllPlus), Err(Error::Path(_))));
        let base = build_planar(12).unwrap();
        let holes = [
            HoleSpec::single(CutKind::ZCut, (8, 7)),
            HoleSpec::single(CutKind::ZCut, (2, 7)),
            HoleSpec::single(CutKind::ZCut, (12, 11)),
            HoleSpec::single(CutKind::ZCut, (12, 19)),
        ];
        let l = carve_holes(&base, &holes).unwrap();
        assert!(matches!(braid(&l, &loop_spec(1), &mut OutcomeSource::AllPlus), Err(Error::Path(_))));
    }

    #[test]
    fn braid_signs_match_tableau_with_references() {
        let l = braid_layout((11, 10), (11, 18));
        let spec = loop_spec(1);
        let n = l.num_sites();
        let mut oracle = TableauOracle::new(n + 2, 11);
        let ops = braid_operators(&l, &spec).unwrap();
        let (mut frame, _) = Frame::prepare(l.clone(), ops.to_vec(), &mut oracle).unwrap();
        // Reference qubit n pairs with qubit 1, n + 1 with qubit 2.
        let refs = [(n, PauliOp::X), (n + 1, PauliOp::X), (n, PauliOp::Z), (n + 1, PauliOp::Z)];
        let pairs: Vec<_> = ops.iter().zip(refs).map(|(o, (r, p))| (o.clone(), r, p)).collect();
        oracle.entangle(&pairs).unwrap();
        let out = braid_on_frame(&mut frame, &spec, &mut oracle).unwrap();
        for g in frame.group() {
            assert_eq!(oracle.tableau.expectation(g).unwrap(), Some(1));
        }
        for k in 0..4 {
            let mut img = product((0..4).filter(|&j| out.images[k][j]).map(|j| &out.targets[j]));
            img.mul_assign_single(refs[k].0, refs[k].1);
            assert_eq!(oracle.tableau.expectation(&img).unwrap(), Some(out.signs[k]), "operator {k}");
        }
    }

    #[test]
    fn multi_cell_byproducts_follow_outcome_products() {
        let l = two_holes();
        let path = [(10, 7), (12, 7), (12, 9), (12, 11), (14, 11)];
        let value = |recs: &[MeasureRecord], s: Coord| recs.iter().find(|r| r.site == s && !r.single).unwrap().outcome;
        let mut seen = [false; 4];
        for seed in 0..24 {
            let out = move_hole(&l, QubitRef::Pair(1, 0), 1, &path, 3, &mut OutcomeSource::random(seed)).unwrap();
            let xk: i8 = out.steps.extend.iter().filter(|r| r.single).map(|r| r.outcome).product();
            let zi: i8 = path[1..].iter().map(|&s| value(&out.initial, s)).product();
            let zf: i8 = path[..path.len() - 1].iter().map(|&s| value(&out.steps.contract, s)).product();
            assert_eq!(out.byproduct, ByproductRecord::from_signs(xk, zi * zf));
            seen[usize::from(out.byproduct.p_x) * 2 + usize::from(out.byproduct.p_z)] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn move_signs_match_tableau_with_reference() {
        let l = two_holes();
        let n = l.num_sites();
        let q = QubitRef::Pair(1, 0);
        let xl = logical_chain(&l, Which::XL, q).unwrap();
        let zl = logical_chain(&l, Which::ZL, q).unwrap();
        let mut oracle = TableauOracle::new(n + 1, 2);
        let (mut frame, _) = Frame::prepare(l.clone(), vec![xl.clone(), zl.clone()], &mut oracle).unwrap();
        oracle.entangle(&[(xl, n, PauliOp::X), (zl, n, PauliOp::Z)]).unwrap();
        let path = [(10, 7), (12, 7), (12, 9)];
        move_on_frame(&mut frame, 1, &path, &mut oracle).unwrap();
        let fin = frame.layout().clone();
        let targets = [logical_chain(&fin, Which::XL, q).unwrap(), logical_chain(&fin, Which::ZL, q).unwrap()];
        for (k, r) in [PauliOp::X, PauliOp::Z].into_iter().enumerate() {
            let (mask, sign) = frame.express(&frame.tracked()[k], &targets).unwrap();
            assert_eq!(mask.iter().filter(|&&b| b).count(), 1);
            let mut img = targets[mask.iter().position(|&b| b).unwrap()].clone();
            assert!(mask[k]);
            img.mul_assign_single(n, r);
            assert_eq!(oracle.tableau.expectation(&img).unwrap(), Some(sign));
        }
    }
}
