//! Signed stabilizer groups over GF(2) and logical-operator chains.

use std::ops::BitXor;

use crate::error::{Error, Result};
use crate::gf2::{self, Basis};
use crate::lattice::{ArrayLayout, Coord, StabKind};
use crate::pauli::{commutes, multiply, PauliOp, PauliString};

/// Symplectic row of `p` over `n` qubits: x bits in `0..n`, z bits in `n..2n`.
pub fn symplectic(p: &PauliString, n: usize) -> Vec<u64> {
    let mut v = vec![0u64; (2 * n).div_ceil(64).max(1)];
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
}

/// Product of `ops` in order, with phases.
pub fn product<'a>(ops: impl IntoIterator<Item = &'a PauliString>) -> PauliString {
    ops.into_iter().fold(PauliString::identity(), |acc, p| multiply(&acc, p))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    /// The chain equals `sign` times the product of the listed generators'
    /// recorded eigenvalues, i.e. it acts on the code state as `sign`.
    Member { sign: i8, subset: Vec<usize> },
    NonMember,
}

/// Independent commuting generators with recorded outcomes.
#[derive(Debug, Clone)]
pub struct StabilizerGroup {
    n: usize,
    gens: Vec<PauliString>,
    signs: Vec<i8>,
    basis: Basis,
}

impl StabilizerGroup {
    /// `gens` are unsigned operators paired with their recorded outcomes.
    pub fn new(n: usize, gens: Vec<(PauliString, i8)>) -> Result<Self> {
        let mut basis = Basis::new(2 * n);
        let mut ops = Vec::with_capacity(gens.len());
        let mut signs = Vec::with_capacity(gens.len());
        for (i, (g, s)) in gens.into_iter().enumerate() {
            if g.max_qubit().is_some_and(|q| q >= n) {
                return Err(Error::IndexOutOfRange { index: g.max_qubit().unwrap_or(0), n });
            }
            if s != 1 && s != -1 {
                return Err(Error::InvalidArgument(format!("outcome {s} is not +-1")));
            }
            if let Some(j) = ops.iter().position(|h: &PauliString| !commutes(h, &g)) {
                return Err(Error::InvalidArgument(format!("generators {j} and {i} anti-commute")));
            }
            if !basis.push(&symplectic(&g, n)) {
                return Err(Error::InvalidArgument(format!("generator {i} is dependent")));
            }
            ops.push(g);
            signs.push(s);
        }
        Ok(StabilizerGroup { n, gens: ops, signs, basis })
    }

    /// Active stabilizers of `layout` with outcomes from `outcome`.
    pub fn from_layout(layout: &ArrayLayout, mut outcome: impl FnMut(Coord) -> i8) -> Result<Self> {
        let gens = layout
            .stabilizers()
            .iter()
            .map(|s| (layout.stabilizer_operator(s), outcome(s.measure_site)))
            .collect();
        StabilizerGroup::new(layout.num_sites(), gens)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.gens
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// Generator with its recorded outcome folded into the sign.
    pub fn signed(&self, i: usize) -> PauliString {
        self.gens[i].clone().with_sign(self.gens[i].sign() * self.signs[i])
    }

    /// Generator subset whose product equals `op` up to sign.
    pub fn decompose(&self, op: &PauliString) -> Option<Vec<usize>> {
        self.basis.solve(&symplectic(op, self.n))
    }

    pub fn in_group(&self, chain: &PauliString) -> Result<Membership> {
        if let Some(i) = self.gens.iter().position(|g| !commutes(g, chain)) {
            return Err(Error::DetectableChain(i));
        }
        let Some(subset) = self.decompose(chain) else {
            return Ok(Membership::NonMember);
        };
        let p = product(subset.iter().map(|&i| &self.gens[i]));
        let outcomes: i8 = subset.iter().map(|&i| self.signs[i]).product();
        Ok(Membership::Member { sign: chain.sign() * p.sign() * outcomes, subset })
    }

    /// `chain × Π subset`, and the sign `s` with `chain ≅ s · chain'` on
    /// the code state.
    pub fn deform(&self, chain: &PauliString, subset: &[usize]) -> Result<(PauliString, i8)> {
        let mut out = chain.clone();
        let mut sign = 1i8;
        for &i in subset {
            let g = self
                .gens
                .get(i)
                .ok_or(Error::IndexOutOfRange { index: i, n: self.gens.len() })?;
            out = multiply(&out, g);
            sign *= self.signs[i];
        }
        Ok((out, sign))
    }

    /// Index of the generator supported on `layout`'s stabilizer at `site`.
    pub fn index_of(&self, layout: &ArrayLayout, site: Coord) -> Option<usize> {
        let spec = layout.stabilizer_at(site)?;
        let op = layout.stabilizer_operator(&spec);
        self.gens.iter().position(|g| g.same_support_ops(&op))
    }
}

/// A Pauli chain together with the data sites it runs along.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorChain {
    pub op: PauliString,
    pub path: Vec<Coord>,
}

impl OperatorChain {
    pub fn along(layout: &ArrayLayout, path: &[Coord], kind: StabKind) -> Self {
        let op = PauliString::from_ops(path.iter().map(|&c| (layout.index(c), kind.op())));
        OperatorChain { op, path: path.to_vec() }
    }

    pub fn from_op(layout: &ArrayLayout, op: PauliString) -> Self {
        let path = op.qubits().map(|q| layout.coord(q)).collect();
        OperatorChain { op, path }
    }

    /// True if the chain commutes with every active stabilizer.
    pub fn is_logical(&self, layout: &ArrayLayout) -> bool {
        layout.stabilizers().iter().all(|s| commutes(&self.op, &layout.stabilizer_operator(s)))
    }

    pub fn kind(&self) -> Option<StabKind> {
        let mut ops = self.op.support().map(|(_, o)| o);
        let first = ops.next()?;
        ops.all(|o| o == first).then_some(first).and_then(|o| match o {
            PauliOp::X => Some(StabKind::X),
            PauliOp::Z => Some(StabKind::Z),
            _ => None,
        })
    }
}

/// Pending logical Pauli correction `Z_L^{p_x} X_L^{p_z}`.
///
/// `p_x` flips the sign of `X_L` measurements, `p_z` those of `Z_L`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct ByproductRecord {
    pub p_x: bool,
    pub p_z: bool,
}

impl ByproductRecord {
    pub fn new(p_x: bool, p_z: bool) -> Self {
        ByproductRecord { p_x, p_z }
    }

    /// From the signs picked up by `X_L` and `Z_L`.
    pub fn from_signs(x_sign: i8, z_sign: i8) -> Self {
        ByproductRecord { p_x: x_sign < 0, p_z: z_sign < 0 }
    }

    /// The same pending correction written after a logical Hadamard.
    pub fn through_hadamard(self) -> Self {
        ByproductRecord { p_x: self.p_z, p_z: self.p_x }
    }

    pub fn is_identity(&self) -> bool {
        !self.p_x && !self.p_z
    }

    /// Corrected `X_L` measurement outcome.
    pub fn correct_x(&self, outcome: i8) -> i8 {
        if self.p_x {
            -outcome
        } else {
            outcome
        }
    }

    pub fn correct_z(&self, outcome: i8) -> i8 {
        if self.p_z {
            -outcome
        } else {
            outcome
        }
    }
}

impl BitXor for ByproductRecord {
    type Output = ByproductRecord;

    fn bitxor(self, o: ByproductRecord) -> ByproductRecord {
        ByproductRecord { p_x: self.p_x ^ o.p_x, p_z: self.p_z ^ o.p_z }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_planar, logical_chain, QubitRef, Which};

    fn planar5() -> (ArrayLayout, StabilizerGroup) {
        let l = build_planar(5).unwrap();
        let g = StabilizerGroup::from_layout(&l, |(r, c)| if (r + c) % 3 == 0 { -1 } else { 1 }).unwrap();
        (l, g)
    }

    #[test]
    fn outlined_stabilizer_is_member_with_its_outcome() {
        let (l, g) = planar5();
        // Qubits 2, 10, 11, 12 around the measure-X site at (1, 2).
        let loop_ = PauliString::xs([(0, 2), (1, 1), (1, 3), (2, 2)].map(|c| l.index(c)));
        let i = g.index_of(&l, (1, 2)).unwrap();
        match g.in_group(&loop_).unwrap() {
            Membership::Member { sign, subset } => {
                assert_eq!(subset, vec![i]);
                assert_eq!(sign, g.signs()[i]);
                assert_eq!(sign, -1);
            }
            Membership::NonMember => panic!("loop should be a member"),
        }
    }

    #[test]
    fn logical_chain_is_not_member() {
        let (l, g) = planar5();
        let xl = logical_chain(&l, Which::XL, QubitRef::Planar).unwrap();
        assert_eq!(g.in_group(&xl).unwrap(), Membership::NonMember);
    }

    #[test]
    fn empty_chain_is_trivial_member() {
        let (_, g) = planar5();
        assert_eq!(
            g.in_group(&PauliString::identity()).unwrap(),
            Membership::Member { sign: 1, subset: vec![] }
        );
    }

    #[test]
    fn anticommuting_chain_is_detectable() {
        let (l, g) = planar5();
        let err = g.in_group(&PauliString::single(l.index((2, 2)), PauliOp::Z)).unwrap_err();
        assert!(matches!(err, Error::DetectableChain(_)));
    }

    #[test]
    fn deform_row_zero_chain_by_outlined_stabilizer() {
        let (l, g) = planar5();
        let xl = logical_chain(&l, Which::XL, QubitRef::Planar).unwrap();
        let i = g.index_of(&l, (1, 2)).unwrap();
        let (x2, sign) = g.deform(&xl, &[i]).unwrap();
        let expect = PauliString::xs([(0, 0), (1, 1), (1, 3), (2, 2), (0, 4), (0, 6), (0, 8)].map(|c| l.index(c)));
        assert!(x2.same_support_ops(&expect));
        assert_eq!(sign, g.signs()[i]);
        let (back, s2) = g.deform(&x2, &[i]).unwrap();
        assert_eq!(back, xl);
        assert_eq!(sign * s2, 1);
    }

    #[test]
    fn group_rejects_anticommuting_and_dependent() {
        let a = PauliString::xs([0, 1]);
        let b = PauliString::zs([1, 2]);
        assert!(StabilizerGroup::new(3, vec![(a.clone(), 1), (b, 1)]).is_err());
        assert!(StabilizerGroup::new(3, vec![(a.clone(), 1), (a, -1)]).is_err());
    }

    #[test]
    fn byproducts_compose_by_xor() {
        let a = ByproductRecord::new(true, false);
        let b = ByproductRecord::new(true, true);
        assert_eq!(a ^ b, ByproductRecord::new(false, true));
        assert!((a ^ a).is_identity());
        assert_eq!(a.correct_x(1), -1);
        assert_eq!(a.correct_z(1), 1);
    }
}
