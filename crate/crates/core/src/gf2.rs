//! Dense linear algebra over GF(2) with bit-packed rows.
//!
//! Rows are stored as `u64` words, bit `i` at word `i / 64`, position `i % 64`.
//! Elimination XORs whole words and skips the words left of the pivot column.
//! Everything here is a value type; matrices are only mutated through owned
//! copies.

use std::fmt;

use rand::Rng;

const WORD: usize = 64;

#[inline]
fn word_count(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// Fixed-length vector over GF(2). Padding bits past `len` are always zero.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    words: Vec<u64>,
    len: usize,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; word_count(len)],
            len,
        }
    }

    pub fn unit(len: usize, bit: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(bit, true);
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Uniformly random vector.
    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        let mut v = Self {
            words: (0..word_count(len)).map(|_| rng.gen()).collect(),
            len,
        };
        v.mask_padding();
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range (len {})", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range (len {})", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range (len {})", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// `self += other` over GF(2).
    #[inline]
    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// XOR restricted to words `from_word..`, for elimination past a pivot.
    #[inline]
    fn xor_assign_from(&mut self, other: &BitVector, from_word: usize) {
        for (a, b) in self.words[from_word..].iter_mut().zip(&other.words[from_word..]) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVector) -> BitVector {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Inner product over GF(2).
    #[inline]
    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in dot");
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() & 1 == 1
    }

    /// Number of positions where both vectors are set.
    pub fn and_count(&self, other: &BitVector) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let tz = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(wi * WORD + tz)
                }
            })
        })
    }

    /// Lowest set bit.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD + w.trailing_zeros() as usize)
    }

    /// Concatenation `self ‖ other`.
    pub fn concat(&self, other: &BitVector) -> BitVector {
        let mut out = BitVector::zeros(self.len + other.len);
        out.words[..self.words.len()].copy_from_slice(&self.words);
        let shift = self.len % WORD;
        let base = self.len / WORD;
        for (i, &w) in other.words.iter().enumerate() {
            if shift == 0 {
                out.words[base + i] |= w;
            } else {
                out.words[base + i] |= w << shift;
                if base + i + 1 < out.words.len() {
                    out.words[base + i + 1] |= w >> (WORD - shift);
                }
            }
        }
        out
    }

    /// Bits `start..start + len`.
    pub fn slice(&self, start: usize, len: usize) -> BitVector {
        assert!(start + len <= self.len, "slice out of range");
        let mut out = BitVector::zeros(len);
        let shift = start % WORD;
        let base = start / WORD;
        for i in 0..out.words.len() {
            let lo = self.words.get(base + i).copied().unwrap_or(0) >> shift;
            let hi = if shift == 0 {
                0
            } else {
                self.words.get(base + i + 1).copied().unwrap_or(0) << (WORD - shift)
            };
            out.words[i] = lo | hi;
        }
        out.mask_padding();
        out
    }

    /// Picks out the listed bit positions, in order.
    pub fn select(&self, positions: &[usize]) -> BitVector {
        let mut out = BitVector::zeros(positions.len());
        for (i, &p) in positions.iter().enumerate() {
            if self.get(p) {
                out.set(i, true);
            }
        }
        out
    }

    fn mask_padding(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector[")?;
        for i in 0..self.len {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        write!(f, "]")
    }
}

/// Row-major dense matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: Vec<BitVector>,
    ncols: usize,
}

impl BitMatrix {
    /// Matrix with no rows.
    pub fn empty(ncols: usize) -> Self {
        Self {
            rows: Vec::new(),
            ncols,
        }
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            rows: vec![BitVector::zeros(ncols); nrows],
            ncols,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            rows: (0..n).map(|i| BitVector::unit(n, i)).collect(),
            ncols: n,
        }
    }

    /// Builds a matrix from rows; all rows must have length `ncols`.
    pub fn from_rows(ncols: usize, rows: Vec<BitVector>) -> Self {
        for r in &rows {
            assert_eq!(r.len(), ncols, "row length mismatch");
        }
        Self { rows, ncols }
    }

    pub fn from_bools(rows: &[Vec<bool>]) -> Self {
        let ncols = rows.first().map_or(0, Vec::len);
        Self::from_rows(ncols, rows.iter().map(|r| BitVector::from_bools(r)).collect())
    }

    /// Shorthand for small literals: `from_ints(&[&[1, 0], &[0, 1]])`.
    pub fn from_ints(rows: &[&[u8]]) -> Self {
        let bools: Vec<Vec<bool>> = rows
            .iter()
            .map(|r| r.iter().map(|&b| b != 0).collect())
            .collect();
        Self::from_bools(&bools)
    }

    pub fn random<R: Rng + ?Sized>(nrows: usize, ncols: usize, rng: &mut R) -> Self {
        Self {
            rows: (0..nrows).map(|_| BitVector::random(ncols, rng)).collect(),
            ncols,
        }
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    pub fn into_rows(self) -> Vec<BitVector> {
        self.rows
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.rows[r].set(c, value)
    }

    pub fn push_row(&mut self, row: BitVector) {
        assert_eq!(row.len(), self.ncols, "row length mismatch");
        self.rows.push(row);
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.ncols, self.nrows());
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.iter_ones() {
                out.rows[c].set(r, true);
            }
        }
        out
    }

    /// `self · v`.
    pub fn mul_vec(&self, v: &BitVector) -> BitVector {
        assert_eq!(v.len(), self.ncols, "dimension mismatch in mul_vec");
        BitVector::from_bools(&self.rows.iter().map(|r| r.dot(v)).collect::<Vec<_>>())
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.ncols, other.nrows(), "dimension mismatch in mul");
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut acc = BitVector::zeros(other.ncols);
                for k in r.iter_ones() {
                    acc.xor_assign(&other.rows[k]);
                }
                acc
            })
            .collect();
        BitMatrix {
            rows,
            ncols: other.ncols,
        }
    }

    /// Entry-wise sum (equivalently difference) over GF(2).
    pub fn add(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.nrows(), other.nrows(), "row count mismatch in add");
        assert_eq!(self.ncols, other.ncols, "column count mismatch in add");
        BitMatrix {
            rows: self.rows.iter().zip(&other.rows).map(|(a, b)| a.xor(b)).collect(),
            ncols: self.ncols,
        }
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn vstack(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.ncols, other.ncols, "column count mismatch in vstack");
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        BitMatrix {
            rows,
            ncols: self.ncols,
        }
    }

    /// New matrix whose column `i` is column `columns[i]` of `self`.
    pub fn select_columns(&self, columns: &[usize]) -> BitMatrix {
        BitMatrix {
            rows: self.rows.iter().map(|r| r.select(columns)).collect(),
            ncols: columns.len(),
        }
    }

    /// Dimension of the row space.
    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        let mut rank = 0;
        for col in 0..self.ncols {
            if rank == rows.len() {
                break;
            }
            let w = col / WORD;
            let bit = 1u64 << (col % WORD);
            let Some(p) = (rank..rows.len()).find(|&r| rows[r].words[w] & bit != 0) else {
                continue;
            };
            rows.swap(rank, p);
            let (head, tail) = rows.split_at_mut(rank + 1);
            let pivot = &head[rank];
            for r in tail.iter_mut() {
                if r.words[w] & bit != 0 {
                    r.xor_assign_from(pivot, w);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Reduced row-echelon form and its pivot columns. Zero rows are kept at
    /// the bottom so the shape is unchanged.
    pub fn row_reduce(&self) -> (BitMatrix, Vec<usize>) {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        for col in 0..self.ncols {
            let rank = pivots.len();
            if rank == rows.len() {
                break;
            }
            let w = col / WORD;
            let bit = 1u64 << (col % WORD);
            let Some(p) = (rank..rows.len()).find(|&r| rows[r].words[w] & bit != 0) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank].clone();
            for (i, r) in rows.iter_mut().enumerate() {
                if i != rank && r.words[w] & bit != 0 {
                    r.xor_assign_from(&pivot, w);
                }
            }
            pivots.push(col);
        }
        (
            BitMatrix {
                rows,
                ncols: self.ncols,
            },
            pivots,
        )
    }

    /// Basis of `{v : self · v = 0}`, one vector per row.
    pub fn kernel_basis(&self) -> BitMatrix {
        let (rref, pivots) = self.row_reduce();
        let mut is_pivot = vec![false; self.ncols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = BitMatrix::empty(self.ncols);
        for free in (0..self.ncols).filter(|&c| !is_pivot[c]) {
            let mut v = BitVector::unit(self.ncols, free);
            for (i, &p) in pivots.iter().enumerate() {
                if rref.rows[i].get(free) {
                    v.set(p, true);
                }
            }
            basis.push_row(v);
        }
        basis
    }

    /// Drops zero rows after reduction, leaving a basis of the row space.
    pub fn row_basis(&self) -> BitMatrix {
        let (mut rref, pivots) = self.row_reduce();
        rref.rows.truncate(pivots.len());
        rref
    }

    /// Inverse of a square matrix, or `None` when singular.
    pub fn inverse(&self) -> Option<BitMatrix> {
        let n = self.nrows();
        if n != self.ncols {
            return None;
        }
        let aug = BitMatrix {
            rows: self
                .rows
                .iter()
                .zip(BitMatrix::identity(n).rows)
                .map(|(r, e)| r.concat(&e))
                .collect(),
            ncols: 2 * n,
        };
        let (rref, pivots) = aug.row_reduce();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(BitMatrix {
            rows: rref.rows.iter().map(|r| r.slice(n, n)).collect(),
            ncols: n,
        })
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.nrows(), self.ncols)?;
        for r in &self.rows {
            write!(f, "  ")?;
            for c in 0..self.ncols {
                write!(f, "{}", u8::from(r.get(c)))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

pub fn rank(m: &BitMatrix) -> usize {
    m.rank()
}

pub fn kernel_basis(m: &BitMatrix) -> BitMatrix {
    m.kernel_basis()
}

pub fn row_reduce(m: &BitMatrix) -> (BitMatrix, Vec<usize>) {
    m.row_reduce()
}

/// `dim(U₁ + … + U_m)`; the spanning sets need not be independent.
pub fn subspace_sum_dim(bases: &[&BitMatrix]) -> usize {
    let Some(first) = bases.first() else {
        return 0;
    };
    let ncols = first.ncols();
    let mut stacked = BitMatrix::empty(ncols);
    for b in bases {
        assert_eq!(b.ncols(), ncols, "subspaces live in different ambient spaces");
        stacked.rows.extend(b.rows.iter().cloned());
    }
    stacked.rank()
}

/// `dim(U ∩ V) = dim U + dim V − dim(U + V)`.
pub fn subspace_intersection_dim(u: &BitMatrix, v: &BitMatrix) -> usize {
    u.rank() + v.rank() - subspace_sum_dim(&[u, v])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn e(i: usize, n: usize) -> BitMatrix {
        BitMatrix::from_rows(n, vec![BitVector::unit(n, i)])
    }

    #[test]
    fn rank_examples() {
        assert_eq!(BitMatrix::identity(7).rank(), 7);
        assert_eq!(BitMatrix::zeros(3, 5).rank(), 0);
        assert_eq!(BitMatrix::from_ints(&[&[1, 1], &[1, 1]]).rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(BitMatrix::identity(2).kernel_basis().nrows(), 0);
        assert_eq!(BitMatrix::zeros(2, 3).kernel_basis().nrows(), 3);
        let k = BitMatrix::from_ints(&[&[1, 1, 0], &[0, 1, 1]]).kernel_basis();
        assert_eq!(k.nrows(), 1);
        assert_eq!(k.row(0), &BitVector::from_bools(&[true, true, true]));
    }

    #[test]
    fn row_reduce_examples() {
        let (r, p) = BitMatrix::identity(4).row_reduce();
        assert_eq!(r, BitMatrix::identity(4));
        assert_eq!(p, vec![0, 1, 2, 3]);

        let (r, p) = BitMatrix::from_ints(&[&[1, 1], &[1, 1]]).row_reduce();
        assert_eq!(r, BitMatrix::from_ints(&[&[1, 1], &[0, 0]]));
        assert_eq!(p, vec![0]);

        let (r, p) = BitMatrix::zeros(2, 3).row_reduce();
        assert_eq!(r, BitMatrix::zeros(2, 3));
        assert!(p.is_empty());
    }

    #[test]
    fn sum_and_intersection_examples() {
        let u = BitMatrix::from_ints(&[&[1, 0, 1], &[0, 1, 1]]);
        assert_eq!(subspace_sum_dim(&[&u, &u]), 2);
        assert_eq!(subspace_sum_dim(&[&e(0, 2), &e(1, 2)]), 2);
        let diag = BitMatrix::from_ints(&[&[1, 1]]);
        assert_eq!(subspace_sum_dim(&[&e(0, 2), &diag, &e(1, 2)]), 2);

        assert_eq!(subspace_intersection_dim(&u, &u), 2);
        assert_eq!(subspace_intersection_dim(&e(0, 2), &e(1, 2)), 0);
        let u12 = BitMatrix::from_ints(&[&[1, 0, 0], &[0, 1, 0]]);
        let u23 = BitMatrix::from_ints(&[&[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(subspace_intersection_dim(&u12, &u23), 1);
    }

    #[test]
    fn concat_and_slice_across_word_boundaries() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (a, b) in [(0, 5), (63, 2), (64, 64), (70, 130), (1, 0)] {
            let x = BitVector::random(a, &mut rng);
            let y = BitVector::random(b, &mut rng);
            let xy = x.concat(&y);
            assert_eq!(xy.len(), a + b);
            assert_eq!(xy.slice(0, a), x);
            assert_eq!(xy.slice(a, b), y);
            assert_eq!(xy.count_ones(), x.count_ones() + y.count_ones());
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut found = 0;
        while found < 20 {
            let m = BitMatrix::random(9, 9, &mut rng);
            match m.inverse() {
                Some(inv) => {
                    assert_eq!(m.mul(&inv), BitMatrix::identity(9));
                    found += 1;
                }
                None => assert!(m.rank() < 9),
            }
        }
    }

    fn arb_matrix() -> impl Strategy<Value = BitMatrix> {
        (0usize..12, 0usize..140, any::<u64>()).prop_map(|(r, c, seed)| {
            BitMatrix::random(r, c, &mut ChaCha8Rng::seed_from_u64(seed))
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in arb_matrix()) {
            let k = m.kernel_basis();
            prop_assert_eq!(m.rank() + k.nrows(), m.ncols());
            prop_assert!(m.rank() <= m.nrows().min(m.ncols()));
            for v in k.rows() {
                prop_assert!(m.mul_vec(v).is_zero());
            }
            prop_assert_eq!(k.rank(), k.nrows());
        }

        #[test]
        fn row_reduce_preserves_row_space(m in arb_matrix()) {
            let (r, pivots) = m.row_reduce();
            prop_assert_eq!(pivots.len(), m.rank());
            prop_assert_eq!(m.vstack(&r).rank(), m.rank());
            prop_assert_eq!(r.rank(), m.rank());
            for (i, &p) in pivots.iter().enumerate() {
                for j in 0..r.nrows() {
                    prop_assert_eq!(r.get(j, p), i == j);
                }
            }
        }

        #[test]
        fn rank_subadditive(seed in any::<u64>(), rows in 1usize..10, cols in 1usize..90) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = BitMatrix::random(rows, cols, &mut rng);
            let b = BitMatrix::random(rows, cols, &mut rng);
            prop_assert!(a.add(&b).rank() <= a.rank() + b.rank());
        }

        #[test]
        fn transpose_preserves_rank(m in arb_matrix()) {
            prop_assert_eq!(m.transpose().rank(), m.rank());
            prop_assert_eq!(m.transpose().transpose(), m);
        }
    }
}
