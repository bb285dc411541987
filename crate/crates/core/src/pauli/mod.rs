//! Signed Pauli algebra with the real convention `Y = Z·X`.
//!
//! With this convention every operator in the group is a real matrix, so a
//! sign in `{+1, -1}` is all the phase bookkeeping needed.

mod statevec;
mod tableau;

pub use statevec::{Gate1, StateVector, MAX_QUBITS};
pub use tableau::{tableau_apply, tableau_measure, CliffordGate, StabilizerTableau};

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// Single-qubit Pauli. `Y` is the real product `Z·X = [[0,1],[-1,0]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PauliOp {
    I,
    X,
    Y,
    Z,
}

impl PauliOp {
    pub const ALL: [PauliOp; 4] = [PauliOp::I, PauliOp::X, PauliOp::Y, PauliOp::Z];

    /// `(z, x)` exponents in `Z^z X^x`.
    pub fn bits(self) -> (bool, bool) {
        match self {
            PauliOp::I => (false, false),
            PauliOp::X => (false, true),
            PauliOp::Y => (true, true),
            PauliOp::Z => (true, false),
        }
    }

    pub fn from_bits(z: bool, x: bool) -> PauliOp {
        match (z, x) {
            (false, false) => PauliOp::I,
            (false, true) => PauliOp::X,
            (true, true) => PauliOp::Y,
            (true, false) => PauliOp::Z,
        }
    }

    pub fn has_x(self) -> bool {
        self.bits().1
    }

    pub fn has_z(self) -> bool {
        self.bits().0
    }

    /// Real 2x2 matrix, rows then columns, basis order `|g>, |e>`.
    pub fn matrix(self) -> [[f64; 2]; 2] {
        match self {
            PauliOp::I => [[1.0, 0.0], [0.0, 1.0]],
            PauliOp::X => [[0.0, 1.0], [1.0, 0.0]],
            PauliOp::Y => [[0.0, 1.0], [-1.0, 0.0]],
            PauliOp::Z => [[1.0, 0.0], [0.0, -1.0]],
        }
    }

    /// Product `self · other` as `(sign, op)`.
    pub fn mul(self, other: PauliOp) -> (i8, PauliOp) {
        let (za, xa) = self.bits();
        let (zb, xb) = other.bits();
        let sign = if xa && zb { -1 } else { 1 };
        (sign, PauliOp::from_bits(za ^ zb, xa ^ xb))
    }

    pub fn anticommutes(self, other: PauliOp) -> bool {
        let (za, xa) = self.bits();
        let (zb, xb) = other.bits();
        (xa && zb) ^ (xb && za)
    }

    pub fn symbol(self) -> char {
        match self {
            PauliOp::I => 'I',
            PauliOp::X => 'X',
            PauliOp::Y => 'Y',
            PauliOp::Z => 'Z',
        }
    }
}

/// Signed tensor product of single-qubit Paulis with sparse support.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PauliString {
    support: BTreeMap<usize, PauliOp>,
    negative: bool,
}

impl PauliString {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn single(q: usize, op: PauliOp) -> Self {
        let mut s = Self::identity();
        s.set(q, op);
        s
    }

    pub fn from_ops<I: IntoIterator<Item = (usize, PauliOp)>>(ops: I) -> Self {
        let mut s = Self::identity();
        for (q, op) in ops {
            s.mul_assign_single(q, op);
        }
        s
    }

    pub fn xs<I: IntoIterator<Item = usize>>(qubits: I) -> Self {
        Self::from_ops(qubits.into_iter().map(|q| (q, PauliOp::X)))
    }

    pub fn zs<I: IntoIterator<Item = usize>>(qubits: I) -> Self {
        Self::from_ops(qubits.into_iter().map(|q| (q, PauliOp::Z)))
    }

    /// Build from dense `(z, x)` bit slices.
    pub fn from_bits(z: &[bool], x: &[bool], sign: i8) -> Self {
        let mut s = Self::identity();
        for (q, (&zq, &xq)) in z.iter().zip(x).enumerate() {
            s.set(q, PauliOp::from_bits(zq, xq));
        }
        s.negative = sign < 0;
        s
    }

    pub fn sign(&self) -> i8 {
        if self.negative {
            -1
        } else {
            1
        }
    }

    pub fn with_sign(mut self, sign: i8) -> Self {
        self.negative = sign < 0;
        self
    }

    pub fn negated(mut self) -> Self {
        self.negative = !self.negative;
        self
    }

    pub fn get(&self, q: usize) -> PauliOp {
        self.support.get(&q).copied().unwrap_or(PauliOp::I)
    }

    pub fn set(&mut self, q: usize, op: PauliOp) {
        if op == PauliOp::I {
            self.support.remove(&q);
        } else {
            self.support.insert(q, op);
        }
    }

    /// Right-multiply by a single-qubit operator, tracking the sign.
    pub fn mul_assign_single(&mut self, q: usize, op: PauliOp) {
        let (s, r) = self.get(q).mul(op);
        if s < 0 {
            self.negative = !self.negative;
        }
        self.set(q, r);
    }

    pub fn support(&self) -> impl Iterator<Item = (usize, PauliOp)> + '_ {
        self.support.iter().map(|(&q, &op)| (q, op))
    }

    pub fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.support.keys().copied()
    }

    pub fn weight(&self) -> usize {
        self.support.len()
    }

    pub fn is_identity(&self) -> bool {
        self.support.is_empty()
    }

    pub fn max_qubit(&self) -> Option<usize> {
        self.support.keys().next_back().copied()
    }

    /// Hermitian iff the number of `Y` factors is even (`Y^T = -Y`).
    pub fn is_hermitian(&self) -> bool {
        self.support.values().filter(|&&o| o == PauliOp::Y).count() % 2 == 0
    }

    /// Number of qubits on which the two strings anti-commute.
    pub fn anticommuting_overlap(&self, other: &PauliString) -> usize {
        let (small, large) = if self.weight() <= other.weight() {
            (self, other)
        } else {
            (other, self)
        };
        small
            .support()
            .filter(|&(q, op)| op.anticommutes(large.get(q)))
            .count()
    }

    /// Same operator up to sign.
    pub fn same_support_ops(&self, other: &PauliString) -> bool {
        self.support == other.support
    }

    /// Restrict to the given qubit set, keeping the sign.
    pub fn restricted<F: Fn(usize) -> bool>(&self, keep: F) -> PauliString {
        PauliString {
            support: self
                .support
                .iter()
                .filter(|(&q, _)| keep(q))
                .map(|(&q, &o)| (q, o))
                .collect(),
            negative: self.negative,
        }
    }

    /// Relabel qubits through `f`.
    pub fn mapped<F: Fn(usize) -> usize>(&self, f: F) -> PauliString {
        let mut out = PauliString::identity();
        for (q, op) in self.support() {
            out.set(f(q), op);
        }
        out.negative = self.negative;
        out
    }

    /// Dense `(z, x)` vectors of length `n`.
    pub fn to_bits(&self, n: usize) -> Result<(Vec<bool>, Vec<bool>)> {
        let mut z = vec![false; n];
        let mut x = vec![false; n];
        for (q, op) in self.support() {
            if q >= n {
                return Err(Error::IndexOutOfRange { index: q, n });
            }
            let (zq, xq) = op.bits();
            z[q] = zq;
            x[q] = xq;
        }
        Ok((z, x))
    }
}

/// Group product `a · b`.
pub fn multiply(a: &PauliString, b: &PauliString) -> PauliString {
    let mut out = a.clone();
    for (q, op) in b.support() {
        out.mul_assign_single(q, op);
    }
    if b.negative {
        out.negative = !out.negative;
    }
    out
}

pub fn commutes(a: &PauliString, b: &PauliString) -> bool {
    a.anticommuting_overlap(b).is_multiple_of(2)
}

impl std::ops::Mul for &PauliString {
    type Output = PauliString;
    fn mul(self, rhs: &PauliString) -> PauliString {
        multiply(self, rhs)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.negative { "-" } else { "+" })?;
        if self.support.is_empty() {
            return f.write_str("I");
        }
        let mut first = true;
        for (q, op) in self.support() {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{}{}", op.symbol(), q)?;
        }
        Ok(())
    }
}

impl std::str::FromStr for PauliString {
    type Err = Error;

    /// Parses the `Display` form, e.g. `-X0 Z3 Y4`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (negative, rest) = match s.chars().next() {
            Some('-') => (true, &s[1..]),
            Some('+') => (false, &s[1..]),
            _ => (false, s),
        };
        let mut out = PauliString::identity();
        for tok in rest.split_whitespace() {
            if tok == "I" {
                continue;
            }
            let op = match tok.chars().next() {
                Some('X') => PauliOp::X,
                Some('Y') => PauliOp::Y,
                Some('Z') => PauliOp::Z,
                Some('I') => PauliOp::I,
                _ => return Err(Error::Parse(format!("bad Pauli token {tok:?}"))),
            };
            let q: usize = tok[1..]
                .parse()
                .map_err(|_| Error::Parse(format!("bad qubit index in {tok:?}")))?;
            out.mul_assign_single(q, op);
        }
        out.negative ^= negative;
        Ok(out)
    }
}
