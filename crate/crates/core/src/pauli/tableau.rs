//! Stabilizer tableau with destabilizers.
//!
//! Rows `0..n` are destabilizers, rows `n..2n` are stabilizer generators.
//! Each row stores packed `x` and `z` bits plus a sign bit. Products follow
//! the real convention of the parent module: `(Z^a X^b)(Z^c X^d)` picks up
//! `(-1)^{b·c}`.

use rand::Rng;

use super::{PauliOp, PauliString};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CliffordGate {
    H(usize),
    Cnot(usize, usize),
    X(usize),
    Z(usize),
    Swap(usize, usize),
    Reset(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Measurement {
    pub value: i8,
    pub deterministic: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerTableau {
    n: usize,
    words: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    neg: Vec<bool>,
}

struct SparseObs {
    words: Vec<(usize, u64, u64)>,
    negative: bool,
}

impl StabilizerTableau {
    /// `|0...0>`: destabilizer `i` is `X_i`, generator `i` is `Z_i`.
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        let mut t = StabilizerTableau {
            n,
            words,
            x: vec![0; 2 * n * words],
            z: vec![0; 2 * n * words],
            neg: vec![false; 2 * n],
        };
        for i in 0..n {
            let (w, b) = (i / 64, 1u64 << (i % 64));
            t.x[i * words + w] |= b;
            t.z[(n + i) * words + w] |= b;
        }
        t
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn check(&self, q: usize) -> Result<()> {
        if q < self.n {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: q, n: self.n })
        }
    }

    fn row_string(&self, row: usize) -> PauliString {
        let mut s = PauliString::identity();
        for q in 0..self.n {
            let (w, b) = (q / 64, 1u64 << (q % 64));
            let xb = self.x[row * self.words + w] & b != 0;
            let zb = self.z[row * self.words + w] & b != 0;
            s.set(q, PauliOp::from_bits(zb, xb));
        }
        if self.neg[row] {
            s.negated()
        } else {
            s
        }
    }

    pub fn generator(&self, i: usize) -> PauliString {
        self.row_string(self.n + i)
    }

    pub fn generators(&self) -> Vec<PauliString> {
        (0..self.n).map(|i| self.generator(i)).collect()
    }

    pub fn destabilizers(&self) -> Vec<PauliString> {
        (0..self.n).map(|i| self.row_string(i)).collect()
    }

    pub fn apply(&mut self, gate: CliffordGate) -> Result<()> {
        let words = self.words;
        match gate {
            CliffordGate::H(q) => {
                self.check(q)?;
                let (w, b) = (q / 64, 1u64 << (q % 64));
                for r in 0..2 * self.n {
                    let i = r * words + w;
                    let (xb, zb) = (self.x[i] & b, self.z[i] & b);
                    if xb != 0 && zb != 0 {
                        self.neg[r] = !self.neg[r];
                    }
                    self.x[i] = (self.x[i] & !b) | zb;
                    self.z[i] = (self.z[i] & !b) | xb;
                }
            }
            CliffordGate::Cnot(c, t) => {
                self.check(c)?;
                self.check(t)?;
                if c == t {
                    return Err(Error::InvalidArgument("CNOT control equals target".into()));
                }
                let (wc, sc) = (c / 64, c % 64);
                let (wt, st) = (t / 64, t % 64);
                for r in 0..2 * self.n {
                    let base = r * words;
                    let xc = (self.x[base + wc] >> sc) & 1;
                    let zt = (self.z[base + wt] >> st) & 1;
                    self.x[base + wt] ^= xc << st;
                    self.z[base + wc] ^= zt << sc;
                }
            }
            CliffordGate::X(q) => {
                self.check(q)?;
                let (w, b) = (q / 64, 1u64 << (q % 64));
                for r in 0..2 * self.n {
                    if self.z[r * words + w] & b != 0 {
                        self.neg[r] = !self.neg[r];
                    }
                }
            }
            CliffordGate::Z(q) => {
                self.check(q)?;
                let (w, b) = (q / 64, 1u64 << (q % 64));
                for r in 0..2 * self.n {
                    if self.x[r * words + w] & b != 0 {
                        self.neg[r] = !self.neg[r];
                    }
                }
            }
            CliffordGate::Swap(a, b) => {
                self.check(a)?;
                self.check(b)?;
                if a == b {
                    return Ok(());
                }
                let (wa, sa) = (a / 64, a % 64);
                let (wb, sb) = (b / 64, b % 64);
                for r in 0..2 * self.n {
                    let base = r * words;
                    for v in [&mut self.x, &mut self.z] {
                        let ba = (v[base + wa] >> sa) & 1;
                        let bb = (v[base + wb] >> sb) & 1;
                        if ba != bb {
                            v[base + wa] ^= 1 << sa;
                            v[base + wb] ^= 1 << sb;
                        }
                    }
                }
            }
            CliffordGate::Reset(q) => {
                self.check(q)?;
                // A stabilizer state is pure, so reset keeps the +1 branch of
                // a random Z measurement; either branch is a valid sample.
                let m = self.measure_forced(&PauliString::single(q, PauliOp::Z), 1)?;
                if m.value < 0 {
                    self.apply(CliffordGate::X(q))?;
                }
            }
        }
        Ok(())
    }

    /// Conjugate by a Pauli operator (inject a Pauli error).
    pub fn apply_pauli(&mut self, p: &PauliString) -> Result<()> {
        let obs = self.sparse(p)?;
        for r in 0..2 * self.n {
            if self.row_anticommutes(r, &obs) {
                self.neg[r] = !self.neg[r];
            }
        }
        Ok(())
    }

    fn sparse(&self, p: &PauliString) -> Result<SparseObs> {
        let mut words: Vec<(usize, u64, u64)> = Vec::new();
        for (q, op) in p.support() {
            self.check(q)?;
            let (w, b) = (q / 64, 1u64 << (q % 64));
            let (zb, xb) = op.bits();
            match words.last_mut() {
                Some(last) if last.0 == w => {
                    if xb {
                        last.1 |= b;
                    }
                    if zb {
                        last.2 |= b;
                    }
                }
                _ => words.push((w, if xb { b } else { 0 }, if zb { b } else { 0 })),
            }
        }
        Ok(SparseObs { words, negative: p.sign() < 0 })
    }

    fn row_anticommutes(&self, r: usize, obs: &SparseObs) -> bool {
        let base = r * self.words;
        let mut par = 0u32;
        for &(w, ox, oz) in &obs.words {
            par ^= (self.x[base + w] & oz).count_ones() ^ (self.z[base + w] & ox).count_ones();
        }
        par & 1 == 1
    }

    /// Row `h` becomes `row_h · row_i`.
    fn rowmul(&mut self, h: usize, i: usize) {
        let (bh, bi) = (h * self.words, i * self.words);
        let mut par = 0u32;
        for k in 0..self.words {
            par ^= (self.x[bh + k] & self.z[bi + k]).count_ones();
            self.x[bh + k] ^= self.x[bi + k];
            self.z[bh + k] ^= self.z[bi + k];
        }
        self.neg[h] ^= self.neg[i] ^ (par & 1 == 1);
    }

    /// Value of a deterministic observable, `None` if the outcome is random.
    pub fn expectation(&self, p: &PauliString) -> Result<Option<i8>> {
        let obs = self.sparse(p)?;
        if (self.n..2 * self.n).any(|r| self.row_anticommutes(r, &obs)) {
            return Ok(None);
        }
        Ok(Some(self.deterministic_value(&obs)))
    }

    fn deterministic_value(&self, obs: &SparseObs) -> i8 {
        let words = self.words;
        let mut sx = vec![0u64; words];
        let mut sz = vec![0u64; words];
        let mut neg = false;
        for i in 0..self.n {
            if !self.row_anticommutes(i, obs) {
                continue;
            }
            let bi = (self.n + i) * words;
            let mut par = 0u32;
            for k in 0..words {
                par ^= (sx[k] & self.z[bi + k]).count_ones();
                sx[k] ^= self.x[bi + k];
                sz[k] ^= self.z[bi + k];
            }
            neg ^= self.neg[self.n + i] ^ (par & 1 == 1);
        }
        debug_assert!(obs.words.iter().all(|&(w, ox, oz)| sx[w] == ox && sz[w] == oz));
        if neg ^ obs.negative {
            -1
        } else {
            1
        }
    }

    fn measure_inner(&mut self, p: &PauliString, pick: impl FnOnce() -> i8) -> Result<Measurement> {
        if !p.is_hermitian() {
            return Err(Error::InvalidArgument(format!("observable {p} is not Hermitian")));
        }
        let obs = self.sparse(p)?;
        let n = self.n;
        let Some(pivot) = (n..2 * n).find(|&r| self.row_anticommutes(r, &obs)) else {
            return Ok(Measurement { value: self.deterministic_value(&obs), deterministic: true });
        };
        for r in 0..2 * n {
            if r != pivot && self.row_anticommutes(r, &obs) {
                self.rowmul(r, pivot);
            }
        }
        let words = self.words;
        let (d, s) = ((pivot - n) * words, pivot * words);
        self.x.copy_within(s..s + words, d);
        self.z.copy_within(s..s + words, d);
        self.neg[pivot - n] = self.neg[pivot];
        self.x[s..s + words].fill(0);
        self.z[s..s + words].fill(0);
        for &(w, ox, oz) in &obs.words {
            self.x[s + w] = ox;
            self.z[s + w] = oz;
        }
        let value = if pick() < 0 { -1 } else { 1 };
        self.neg[pivot] = obs.negative ^ (value < 0);
        Ok(Measurement { value, deterministic: false })
    }

    pub fn measure<R: Rng + ?Sized>(&mut self, p: &PauliString, rng: &mut R) -> Result<Measurement> {
        self.measure_inner(p, || if rng.gen::<bool>() { 1 } else { -1 })
    }

    /// Measure, using `value` as the outcome if it is random.
    pub fn measure_forced(&mut self, p: &PauliString, value: i8) -> Result<Measurement> {
        self.measure_inner(p, || value)
    }

    /// GF(2) rank of the generator rows restricted to `qubits`.
    pub fn rank_on(&self, qubits: &[usize]) -> usize {
        let mut rows: Vec<Vec<u64>> = (self.n..2 * self.n)
            .map(|r| {
                let mut v = vec![0u64; (2 * qubits.len()).div_ceil(64)];
                for (k, &q) in qubits.iter().enumerate() {
                    let (w, b) = (q / 64, 1u64 << (q % 64));
                    if self.x[r * self.words + w] & b != 0 {
                        v[(2 * k) / 64] |= 1 << ((2 * k) % 64);
                    }
                    if self.z[r * self.words + w] & b != 0 {
                        v[(2 * k + 1) / 64] |= 1 << ((2 * k + 1) % 64);
                    }
                }
                v
            })
            .collect();
        crate::gf2::rank(&mut rows)
    }
}

/// Functional form of [`StabilizerTableau::apply`].
pub fn tableau_apply(t: &StabilizerTableau, gate: CliffordGate) -> Result<StabilizerTableau> {
    let mut out = t.clone();
    out.apply(gate)?;
    Ok(out)
}

/// Functional form of [`StabilizerTableau::measure`].
pub fn tableau_measure<R: Rng + ?Sized>(
    t: &StabilizerTableau,
    observable: &PauliString,
    rng: &mut R,
) -> Result<(i8, StabilizerTableau)> {
    let mut out = t.clone();
    let m = out.measure(observable, rng)?;
    Ok((m.value, out))
}
