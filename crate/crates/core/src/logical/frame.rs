//! Logical-operator tracking through layout changes.
//!
//! A [`Frame`] holds a layout, the signed stabilizer group known on it
//! (active stabilizers plus single-qubit outcomes on removed data) and a
//! list of tracked operators. A tracked operator `T` represents a logical
//! operator `O` in the sense that `T` and `O` act identically on the code
//! state; it changes only by multiplication with known group elements, so
//! its sign carries all byproduct information.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::group::{product, symplectic};
use crate::error::{Error, Result};
use crate::gf2::{self, Basis};
use crate::lattice::{ArrayLayout, Coord, Role, StabKind};
use crate::pauli::{commutes, multiply, CliffordGate, PauliOp, PauliString, StabilizerTableau};

/// Supplies measurement outcomes to a [`Frame`].
pub trait OutcomeOracle {
    /// Outcome of measuring `op`. `known` is the frame's prediction when
    /// the outcome is fixed by the known group.
    fn measure(&mut self, op: &PauliString, known: Option<i8>) -> Result<i8>;

    /// Physical gates applied between measurements.
    fn apply(&mut self, _gates: &[CliffordGate]) -> Result<()> {
        Ok(())
    }
}

/// Outcomes that carry no physical state.
#[derive(Debug, Clone)]
pub enum OutcomeSource {
    AllPlus,
    /// Outcome per measured operator (compared up to sign); others are +1.
    Scripted(Vec<(PauliString, i8)>),
    Random(ChaCha8Rng),
}

impl OutcomeSource {
    pub fn random(seed: u64) -> Self {
        OutcomeSource::Random(ChaCha8Rng::seed_from_u64(seed))
    }
}

impl OutcomeOracle for OutcomeSource {
    fn measure(&mut self, op: &PauliString, known: Option<i8>) -> Result<i8> {
        match self {
            OutcomeSource::AllPlus => Ok(known.unwrap_or(1)),
            OutcomeSource::Random(rng) => Ok(known.unwrap_or_else(|| if rng.gen::<bool>() { 1 } else { -1 })),
            OutcomeSource::Scripted(list) => {
                let scripted = list.iter().find(|(p, _)| p.same_support_ops(op)).map(|&(_, v)| v);
                match (known, scripted) {
                    (Some(k), Some(v)) if k != v => Err(Error::InvalidArgument(format!(
                        "scripted outcome {v} for {op} contradicts the deterministic value {k}"
                    ))),
                    (Some(k), _) => Ok(k),
                    (None, v) => Ok(v.unwrap_or(1)),
                }
            }
        }
    }
}

/// Outcomes drawn from a stabilizer tableau that also holds reference
/// qubits beyond the layout's sites.
#[derive(Debug, Clone)]
pub struct TableauOracle {
    pub tableau: StabilizerTableau,
    pub rng: ChaCha8Rng,
}

impl TableauOracle {
    pub fn new(n: usize, seed: u64) -> Self {
        TableauOracle { tableau: StabilizerTableau::new(n), rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// Entangle each operator with its own reference qubit: measures
    /// `ops[k].0 ⊗ P_ref` with outcome forced to +1.
    pub fn entangle(&mut self, ops: &[(PauliString, usize, PauliOp)]) -> Result<()> {
        for (op, r, p) in ops {
            let mut full = op.clone();
            full.mul_assign_single(*r, *p);
            self.tableau.measure_forced(&full, 1)?;
        }
        Ok(())
    }
}

impl OutcomeOracle for TableauOracle {
    fn measure(&mut self, op: &PauliString, known: Option<i8>) -> Result<i8> {
        let m = self.tableau.measure(op, &mut self.rng)?;
        if let Some(k) = known {
            if !m.deterministic || m.value != k {
                return Err(Error::InvalidArgument(format!(
                    "frame predicted {k} for {op}, tableau gave {} (deterministic: {})",
                    m.value, m.deterministic
                )));
            }
        }
        Ok(m.value)
    }

    fn apply(&mut self, gates: &[CliffordGate]) -> Result<()> {
        for &g in gates {
            self.tableau.apply(g)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasureRecord {
    pub site: Coord,
    /// True for a single data-qubit measurement, false for a stabilizer.
    pub single: bool,
    pub op: PauliString,
    pub outcome: i8,
    pub deterministic: bool,
}

#[derive(Debug, Clone)]
pub struct Frame {
    layout: ArrayLayout,
    group: Vec<PauliString>,
    singles: BTreeMap<Coord, (StabKind, i8)>,
    tracked: Vec<PauliString>,
    transcript: Vec<String>,
}

fn basis_of(ops: &[PauliString], n: usize) -> Basis {
    let mut b = Basis::new(2 * n);
    for p in ops {
        b.push(&symplectic(p, n));
    }
    b
}

/// Value of `op` on a state stabilized by every element of `cur`, if fixed.
fn value_in(cur: &[PauliString], basis: &Basis, n: usize, op: &PauliString) -> Option<i8> {
    let subset = basis.solve(&symplectic(op, n))?;
    let p = product(subset.iter().map(|&i| &cur[i]));
    Some(op.sign() * p.sign())
}

/// Measures `m` on the subgroup `cur`, updating it in place.
fn measure_into(
    cur: &mut Vec<PauliString>,
    cache: &mut Option<Basis>,
    n: usize,
    m: &PauliString,
    src: &mut dyn OutcomeOracle,
) -> Result<(i8, bool)> {
    if let Some(j) = cur.iter().position(|g| !commutes(g, m)) {
        let pivot = cur.remove(j);
        for g in cur.iter_mut() {
            if !commutes(g, m) {
                *g = multiply(g, &pivot);
            }
        }
        let v = src.measure(m, None)?;
        cur.push(m.clone().with_sign(m.sign() * v));
        *cache = None;
        return Ok((v, false));
    }
    let basis = cache.get_or_insert_with(|| basis_of(cur, n));
    if let Some(v) = value_in(cur, basis, n, m) {
        return Ok((src.measure(m, Some(v))?, true));
    }
    let v = src.measure(m, None)?;
    let g = m.clone().with_sign(m.sign() * v);
    basis.push(&symplectic(&g, n));
    cur.push(g);
    Ok((v, false))
}

fn single_op(layout: &ArrayLayout, q: Coord, kind: StabKind) -> PauliString {
    PauliString::single(layout.index(q), kind.op())
}

impl Frame {
    /// Measures every stabilizer of `layout` and starts tracking `tracked`.
    pub fn prepare(layout: ArrayLayout, tracked: Vec<PauliString>, src: &mut dyn OutcomeOracle) -> Result<(Frame, Vec<MeasureRecord>)> {
        let n = layout.num_sites();
        let mut cur = Vec::new();
        let mut cache = None;
        let mut records = Vec::new();
        for s in layout.stabilizers() {
            let op = layout.stabilizer_operator(&s);
            let (outcome, deterministic) = measure_into(&mut cur, &mut cache, n, &op, src)?;
            records.push(MeasureRecord { site: s.measure_site, single: false, op, outcome, deterministic });
        }
        let mut frame = Frame { layout, group: Vec::new(), singles: BTreeMap::new(), tracked, transcript: Vec::new() };
        frame.rebuild(&cur, BTreeMap::new())?;
        Ok((frame, records))
    }

    pub fn layout(&self) -> &ArrayLayout {
        &self.layout
    }

    /// Known group elements, each with its eigenvalue folded into the sign.
    pub fn group(&self) -> &[PauliString] {
        &self.group
    }

    pub fn singles(&self) -> &BTreeMap<Coord, (StabKind, i8)> {
        &self.singles
    }

    pub fn tracked(&self) -> &[PauliString] {
        &self.tracked
    }

    pub fn transcript(&self) -> &[String] {
        &self.transcript
    }

    pub fn take_transcript(&mut self) -> Vec<String> {
        std::mem::take(&mut self.transcript)
    }

    pub fn note(&mut self, action: &str, asserts: &str) {
        let n = self.transcript.len() + 1;
        self.transcript.push(format!("step {n}: {action}; asserts: {asserts}"));
    }

    /// Replaces the group by the canonical generators of the current
    /// layout and `singles`, reading their signs off `cur`.
    fn rebuild(&mut self, cur: &[PauliString], singles: BTreeMap<Coord, StabKind>) -> Result<()> {
        let n = self.layout.num_sites();
        let basis = basis_of(cur, n);
        let mut group = Vec::new();
        for s in self.layout.stabilizers() {
            let op = self.layout.stabilizer_operator(&s);
            let v = value_in(cur, &basis, n, &op).ok_or_else(|| {
                Error::Layout(format!("stabilizer at {:?} is not fixed by the known group", s.measure_site))
            })?;
            group.push(op.with_sign(v));
        }
        self.singles.clear();
        for (q, kind) in singles {
            let op = single_op(&self.layout, q, kind);
            let v = value_in(cur, &basis, n, &op)
                .ok_or_else(|| Error::Layout(format!("single-qubit value at {q:?} is not fixed by the known group")))?;
            self.singles.insert(q, (kind, v));
            group.push(op.with_sign(v));
        }
        for (k, t) in self.tracked.iter().enumerate() {
            if let Some(g) = group.iter().find(|g| !commutes(g, t)) {
                return Err(Error::NoLogical(format!("tracked operator {k} anti-commutes with {g}")));
            }
        }
        self.group = group;
        Ok(())
    }

    /// Multiplies each tracked operator by known group elements so that it
    /// commutes with every operator in `ms`.
    fn fix_tracked(&mut self, ms: &[PauliString]) -> Result<()> {
        let width = ms.len();
        if width == 0 {
            return Ok(());
        }
        let pattern = |p: &PauliString| {
            let mut v = vec![0u64; width.div_ceil(64)];
            for (i, m) in ms.iter().enumerate() {
                if !commutes(p, m) {
                    gf2::set(&mut v, i);
                }
            }
            v
        };
        let rows: Vec<Vec<u64>> = self.group.iter().map(pattern).collect();
        let mut basis = Basis::new(width);
        for r in &rows {
            basis.push(r);
        }
        for k in 0..self.tracked.len() {
            let target = pattern(&self.tracked[k]);
            if target.iter().all(|&w| w == 0) {
                continue;
            }
            let subset = basis.solve(&target).ok_or_else(|| {
                Error::NoLogical(format!("tracked operator {k} cannot be carried through the layout change"))
            })?;
            for i in subset {
                self.tracked[k] = multiply(&self.tracked[k], &self.group[i]);
            }
        }
        Ok(())
    }

    /// Switches to `new`, measuring `singles` on data qubits first and
    /// then every stabilizer of `new` that is new, changed, or disturbed by
    /// those measurements.
    pub fn transition(
        &mut self,
        new: ArrayLayout,
        singles: &[(Coord, StabKind)],
        src: &mut dyn OutcomeOracle,
    ) -> Result<Vec<MeasureRecord>> {
        let n = self.layout.num_sites();
        if new.num_sites() != n {
            return Err(Error::Dimension("layouts differ in size".into()));
        }
        let mut plan: Vec<(Coord, bool, PauliString)> = Vec::new();
        for &(q, kind) in singles {
            if new.role(q) != Role::Data {
                return Err(Error::InvalidArgument(format!("{q:?} is not a data site")));
            }
            plan.push((q, true, single_op(&new, q, kind)));
        }
        let single_ops: Vec<PauliString> = plan.iter().map(|p| p.2.clone()).collect();
        for s in new.stabilizers() {
            let op = new.stabilizer_operator(&s);
            let unchanged = self.layout.stabilizer_at(s.measure_site).is_some_and(|o| o.neighbors == s.neighbors);
            if !unchanged || single_ops.iter().any(|m| !commutes(m, &op)) {
                plan.push((s.measure_site, false, op));
            }
        }
        let ms: Vec<PauliString> = plan.iter().map(|p| p.2.clone()).collect();
        self.fix_tracked(&ms)?;
        let mut cur = self.group.clone();
        let mut cache = None;
        let mut records = Vec::with_capacity(plan.len());
        for (site, single, op) in plan {
            let (outcome, deterministic) = measure_into(&mut cur, &mut cache, n, &op, src)?;
            records.push(MeasureRecord { site, single, op, outcome, deterministic });
        }
        let measured: BTreeMap<Coord, StabKind> = singles.iter().copied().collect();
        let mut keep: BTreeMap<Coord, StabKind> = BTreeMap::new();
        for (&q, &(kind, _)) in &self.singles {
            if !new.is_active(q) && !measured.contains_key(&q) {
                keep.insert(q, kind);
            }
        }
        for (q, kind) in measured {
            if !new.is_active(q) {
                keep.insert(q, kind);
            }
        }
        self.layout = new;
        self.rebuild(&cur, keep)?;
        Ok(records)
    }

    /// Applies a Clifford unitary described by its action `conj` on Pauli
    /// strings. `fresh` lists single-qubit states assumed before the gate
    /// (for example reset measure qubits); `singles` lists the single-qubit
    /// values claimed afterwards. `gates` go to the outcome oracle.
    pub fn apply_unitary(
        &mut self,
        new: ArrayLayout,
        conj: &dyn Fn(&PauliString) -> PauliString,
        fresh: &[(Coord, StabKind, i8)],
        singles: BTreeMap<Coord, StabKind>,
        gates: &[CliffordGate],
        src: &mut dyn OutcomeOracle,
    ) -> Result<()> {
        let mut cur = self.group.clone();
        for &(q, kind, v) in fresh {
            let op = single_op(&self.layout, q, kind).with_sign(v);
            if cur.iter().any(|g| !commutes(g, &op)) || self.tracked.iter().any(|t| !commutes(t, &op)) {
                return Err(Error::InvalidArgument(format!("fresh qubit {q:?} overlaps known operators")));
            }
            cur.push(op);
        }
        src.apply(gates)?;
        let cur: Vec<PauliString> = cur.iter().map(conj).collect();
        self.tracked = self.tracked.iter().map(conj).collect();
        self.layout = new;
        self.rebuild(&cur, singles)
    }

    /// Writes `op` as `sign · Π targets[i]` (over the returned mask) times
    /// known group elements.
    pub fn express(&self, op: &PauliString, targets: &[PauliString]) -> Result<(Vec<bool>, i8)> {
        let n = self.layout.num_sites();
        let mut basis = basis_of(&self.group, n);
        for t in targets {
            basis.push(&symplectic(t, n));
        }
        let subset = basis
            .solve(&symplectic(op, n))
            .ok_or_else(|| Error::NoLogical(format!("{op} is not generated by the targets and the stabilizers")))?;
        let g = self.group.len();
        let mut mask = vec![false; targets.len()];
        let mut ops: Vec<&PauliString> = Vec::new();
        for &i in subset.iter().filter(|&&i| i >= g) {
            mask[i - g] = true;
            ops.push(&targets[i - g]);
        }
        ops.extend(subset.iter().filter(|&&i| i < g).map(|&i| &self.group[i]));
        let p = product(ops);
        Ok((mask, op.sign() * p.sign()))
    }

    /// Replaces tracked operator `k` by `±target`, returning the sign.
    pub fn deform_tracked(&mut self, k: usize, target: &PauliString) -> Result<i8> {
        let (mask, sign) = self.express(&self.tracked[k], std::slice::from_ref(target))?;
        if mask != [true] {
            return Err(Error::NoLogical(format!("tracked operator {k} is not equivalent to {target}")));
        }
        self.tracked[k] = target.clone().with_sign(target.sign() * sign);
        Ok(sign)
    }

    /// Starts tracking `op`, which must commute with the known group.
    pub fn track(&mut self, op: PauliString) -> Result<usize> {
        if let Some(g) = self.group.iter().find(|g| !commutes(g, &op)) {
            return Err(Error::NoLogical(format!("{op} anti-commutes with {g}")));
        }
        self.tracked.push(op);
        Ok(self.tracked.len() - 1)
    }

    /// Data qubits active in the current layout but not in `new`.
    pub fn newly_removed(&self, new: &ArrayLayout) -> Vec<Coord> {
        self.layout.data_sites().filter(|&q| !new.is_active(q)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_planar, carve_holes, logical_chain, CutKind, HoleSpec, QubitRef, Which};

    #[test]
    fn prepare_records_every_stabilizer() {
        let l = build_planar(3).unwrap();
        let (f, rec) = Frame::prepare(l.clone(), vec![], &mut OutcomeSource::random(1)).unwrap();
        assert_eq!(rec.len(), l.stabilizers().len());
        assert_eq!(f.group().len(), l.stabilizers().len());
        assert!(rec.iter().all(|r| !r.deterministic));
    }

    #[test]
    fn tableau_agrees_with_frame_predictions() {
        let base = build_planar(4).unwrap();
        let hole = carve_holes(&base, &[HoleSpec::single(CutKind::ZCut, (2, 3))]).unwrap();
        let n = base.num_sites();
        let mut oracle = TableauOracle::new(n, 5);
        let (mut f, _) = Frame::prepare(base, vec![], &mut oracle).unwrap();
        let removed = f.newly_removed(&hole);
        let singles: Vec<_> = removed.iter().map(|&q| (q, StabKind::X)).collect();
        f.transition(hole.clone(), &singles, &mut oracle).unwrap();
        for g in f.group() {
            assert_eq!(oracle.tableau.expectation(g).unwrap(), Some(1), "{g}");
        }
        // Back to the full array: the old stabilizer is re-measured.
        let full = build_planar(4).unwrap();
        let rec = f.transition(full, &[], &mut oracle).unwrap();
        assert!(rec.iter().any(|r| r.site == (2, 3)));
        for g in f.group() {
            assert_eq!(oracle.tableau.expectation(g).unwrap(), Some(1));
        }
    }

    #[test]
    fn express_finds_sign_and_mask() {
        let l = build_planar(3).unwrap();
        let xl = logical_chain(&l, Which::XL, QubitRef::Planar).unwrap();
        let zl = logical_chain(&l, Which::ZL, QubitRef::Planar).unwrap();
        let (f, _) = Frame::prepare(l.clone(), vec![xl.clone()], &mut OutcomeSource::random(3)).unwrap();
        let g = f.group()[0].clone();
        let bare = g.clone().with_sign(1);
        let (mask, sign) = f.express(&multiply(&xl, &bare), &[xl.clone(), zl.clone()]).unwrap();
        assert_eq!(mask, vec![true, false]);
        assert_eq!(sign, g.sign());
        assert_eq!(f.express(&multiply(&xl, &g), std::slice::from_ref(&xl)).unwrap().1, 1);
        assert!(f.express(&multiply(&xl, &g), &[zl]).is_err());
    }

    #[test]
    fn scripted_contradiction_is_an_error() {
        let mut s = OutcomeSource::Scripted(vec![(PauliString::zs([0]), -1)]);
        assert_eq!(s.measure(&PauliString::zs([0]), None).unwrap(), -1);
        assert!(s.measure(&PauliString::zs([0]), Some(1)).is_err());
        assert_eq!(s.measure(&PauliString::zs([1]), None).unwrap(), 1);
    }
}
