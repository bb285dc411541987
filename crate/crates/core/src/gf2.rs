//! Dense GF(2) elimination over packed `u64` rows.

pub fn get(row: &[u64], i: usize) -> bool {
    row[i / 64] >> (i % 64) & 1 == 1
}

pub fn set(row: &mut [u64], i: usize) {
    row[i / 64] |= 1 << (i % 64);
}

pub fn flip(row: &mut [u64], i: usize) {
    row[i / 64] ^= 1 << (i % 64);
}

pub fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

fn first_one(row: &[u64]) -> Option<usize> {
    row.iter()
        .enumerate()
        .find(|(_, &w)| w != 0)
        .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
}

/// Rank of the row set. Rows are reduced in place.
pub fn rank(rows: &mut [Vec<u64>]) -> usize {
    let mut r = 0;
    let ncols = rows.first().map_or(0, |v| v.len() * 64);
    for col in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| get(&rows[i], col)) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && get(row, col) {
                xor_into(row, &pivot);
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

/// Incremental echelon basis that remembers which input rows produced each
/// basis vector, so that membership queries return a combination.
#[derive(Debug, Clone)]
pub struct Basis {
    width: usize,
    inputs: usize,
    rows: Vec<(usize, Vec<u64>, Vec<u64>)>,
}

impl Basis {
    pub fn new(width_bits: usize) -> Self {
        Basis { width: width_bits.div_ceil(64).max(1), inputs: 0, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &mut [u64], combo: &mut Vec<u64>) {
        for (pivot, row, c) in &self.rows {
            if get(v, *pivot) {
                xor_into(v, row);
                if combo.len() < c.len() {
                    combo.resize(c.len(), 0);
                }
                xor_into(combo, c);
            }
        }
    }

    /// Adds row number `self.inputs`. Returns false if it was dependent.
    pub fn push(&mut self, v: &[u64]) -> bool {
        let idx = self.inputs;
        self.inputs += 1;
        let mut v = v.to_vec();
        v.resize(self.width, 0);
        let mut combo = vec![0u64; self.inputs.div_ceil(64)];
        set(&mut combo, idx);
        self.reduce(&mut v, &mut combo);
        let Some(p) = first_one(&v) else {
            return false;
        };
        for (_, row, c) in self.rows.iter_mut() {
            if get(row, p) {
                xor_into(row, &v);
                if c.len() < combo.len() {
                    c.resize(combo.len(), 0);
                }
                xor_into(c, &combo);
            }
        }
        self.rows.push((p, v, combo));
        true
    }

    /// Indices of pushed rows whose XOR equals `target`, if any.
    pub fn solve(&self, target: &[u64]) -> Option<Vec<usize>> {
        let mut v = target.to_vec();
        v.resize(self.width, 0);
        let mut combo = vec![0u64; self.inputs.div_ceil(64).max(1)];
        self.reduce(&mut v, &mut combo);
        if v.iter().any(|&w| w != 0) {
            return None;
        }
        Some((0..self.inputs).filter(|&i| get(&combo, i)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_small_matrix() {
        let mut rows = vec![vec![0b011], vec![0b110], vec![0b101]];
        assert_eq!(rank(&mut rows), 2);
        let mut rows = vec![vec![0b001], vec![0b010], vec![0b100]];
        assert_eq!(rank(&mut rows), 3);
    }

    #[test]
    fn basis_solve_returns_combination() {
        let mut b = Basis::new(8);
        assert!(b.push(&[0b0011]));
        assert!(b.push(&[0b0110]));
        assert!(!b.push(&[0b0101]));
        assert!(b.push(&[0b1000]));
        let c = b.solve(&[0b1101]).unwrap();
        let mut acc = 0u64;
        for i in c {
            acc ^= [0b0011, 0b0110, 0b0101, 0b1000][i];
        }
        assert_eq!(acc, 0b1101);
        assert!(b.solve(&[0b10000]).is_none());
    }
}
