//! Dense matrices over a prime field with deterministic Gaussian elimination.
//!
//! Pivoting is always "first nonzero", so echelon forms, kernels and image
//! bases are reproducible across runs. For moduli below 2^24 the elimination
//! defers reduction: row updates accumulate raw `u64` values and are reduced
//! once at the end, which keeps the inner loop to a multiply-add.

use super::field::{PrimeField, LAZY_LIMIT};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("right-hand side is not in the image of the matrix")]
    NoSolution,
}

/// Row-major dense matrix. Entries are canonical residues in `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

/// Result of `rank_kernel_image`: kernel columns span `ker M`, image columns
/// span `im M`, both echelonized.
#[derive(Debug, Clone)]
pub struct RankKernelImage {
    pub rank: usize,
    pub kernel: FieldMatrix,
    pub image: FieldMatrix,
}

impl FieldMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        FieldMatrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Build from rows of signed integers (reduced into the field).
    pub fn from_rows_i64(field: PrimeField, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zeros(field, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged row in matrix literal");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, field.from_i64(v));
            }
        }
        m
    }

    pub fn from_columns(field: PrimeField, rows: usize, columns: &[Vec<u64>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, &v) in col.iter().enumerate() {
                m.set(i, j, v % field.characteristic());
            }
        }
        m
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> FieldMatrix {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &FieldMatrix) -> FieldMatrix {
        assert_eq!(self.rows, other.rows, "hstack: row mismatch");
        assert_eq!(self.field, other.field);
        let mut m = Self::zeros(self.field, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                m.set(i, self.cols + j, other.get(i, j));
            }
        }
        m
    }

    pub fn mul(&self, other: &FieldMatrix) -> FieldMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        assert_eq!(self.field, other.field);
        let p = self.field.characteristic();
        let mut out = Self::zeros(self.field, self.rows, other.cols);
        let lazy = p < LAZY_LIMIT && self.cols < (1 << 16);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                let src = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                if lazy {
                    for (d, &s) in dst.iter_mut().zip(src) {
                        *d += a * s;
                    }
                } else {
                    for (d, &s) in dst.iter_mut().zip(src) {
                        *d = (*d + a * s) % p;
                    }
                }
            }
            if lazy {
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for d in dst.iter_mut() {
                    *d %= p;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        let p = self.field.characteristic();
        (0..self.rows)
            .map(|i| {
                let mut acc = 0u64;
                for (j, &x) in v.iter().enumerate() {
                    acc = (acc + self.get(i, j) % p * (x % p)) % p;
                }
                acc
            })
            .collect()
    }

    /// In-place reduced row echelon form. Returns the pivot columns in order.
    pub fn echelonize(&mut self) -> Vec<usize> {
        let p = self.field.characteristic();
        let lazy = p < LAZY_LIMIT && self.rows < (1 << 16) && self.cols < (1 << 16);
        let mut pivots = Vec::new();
        let mut r = 0usize;
        let cols = self.cols;
        let mut neg_row = vec![0u64; cols];
        for c in 0..cols {
            if r == self.rows {
                break;
            }
            // first row with a nonzero residue in this column
            let mut pivot_row = None;
            for i in r..self.rows {
                if self.get(i, c) % p != 0 {
                    pivot_row = Some(i);
                    break;
                }
            }
            let Some(i0) = pivot_row else { continue };
            self.swap_rows(r, i0);
            // normalize the pivot row (full reduction, then scale to 1)
            let mut inv = 0;
            for j in c..cols {
                let v = self.get(r, j) % p;
                if j == c {
                    inv = self.field.inv(v);
                }
                self.set(r, j, v);
            }
            if inv != 1 {
                for j in c..cols {
                    self.set(r, j, self.field.mul(self.get(r, j), inv));
                }
            }
            for j in c..cols {
                let v = self.get(r, j);
                neg_row[j] = if v == 0 { 0 } else { p - v };
            }
            // eliminate every other row
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let e = self.get(i, c) % p;
                if e == 0 {
                    continue;
                }
                let base = i * cols;
                if lazy {
                    let dst = &mut self.data[base + c..base + cols];
                    let src = &neg_row[c..cols];
                    for (d, &s) in dst.iter_mut().zip(src) {
                        *d += e * s;
                    }
                } else {
                    for j in c..cols {
                        let v = (self.data[base + j] + e * neg_row[j]) % p;
                        self.data[base + j] = v;
                    }
                }
                self.data[base + c] = 0;
            }
            pivots.push(c);
            r += 1;
        }
        if lazy {
            for v in self.data.iter_mut() {
                *v %= p;
            }
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let cols = self.cols;
        for j in 0..cols {
            self.data.swap(a * cols + j, b * cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.echelonize().len()
    }

    /// Rank, an echelonized kernel basis (columns), and an echelonized image
    /// basis (columns). Rank-nullity is asserted.
    pub fn rank_kernel_image(&self) -> RankKernelImage {
        let mut rref = self.clone();
        let pivots = rref.echelonize();
        let rank = pivots.len();
        let kernel = kernel_from_rref(&rref, &pivots);
        assert_eq!(rank + kernel.cols(), self.cols, "rank-nullity violated");

        // image basis: row space of the transpose, echelonized
        let mut t = self.transpose();
        let ipiv = t.echelonize();
        assert_eq!(ipiv.len(), rank);
        let mut image = FieldMatrix::zeros(self.field, self.rows, rank);
        for k in 0..rank {
            for i in 0..self.rows {
                image.set(i, k, t.get(k, i));
            }
        }
        RankKernelImage {
            rank,
            kernel,
            image,
        }
    }

    /// Solve `M x = b` with free variables set to zero.
    pub fn solve_preimage(&self, b: &[u64]) -> Result<Vec<u64>, SolveError> {
        let rhs = FieldMatrix::from_columns(self.field, self.rows, &[b.to_vec()]);
        let sols = self.solve_preimage_many(&rhs)?;
        Ok(sols.column(0))
    }

    /// Solve `M X = rhs` column by column; fails if any column is outside the
    /// image. Free variables are zero, so solutions are deterministic.
    pub fn solve_preimage_many(&self, rhs: &FieldMatrix) -> Result<FieldMatrix, SolveError> {
        assert_eq!(self.rows, rhs.rows, "solve: shape mismatch");
        let mut aug = self.hstack(rhs);
        let pivots = aug.echelonize();
        let mut x = FieldMatrix::zeros(self.field, self.cols, rhs.cols);
        for (k, &c) in pivots.iter().enumerate() {
            if c >= self.cols {
                return Err(SolveError::NoSolution);
            }
            for j in 0..rhs.cols {
                x.set(c, j, aug.get(k, self.cols + j));
            }
        }
        Ok(x)
    }

    /// Entries as nested vecs, for serialization in reports.
    pub fn to_nested(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }
}

fn kernel_from_rref(rref: &FieldMatrix, pivots: &[usize]) -> FieldMatrix {
    let field = rref.field();
    let cols = rref.cols();
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut kernel = FieldMatrix::zeros(field, cols, free.len());
    for (k, &fc) in free.iter().enumerate() {
        kernel.set(fc, k, 1);
        for (row, &pc) in pivots.iter().enumerate() {
            kernel.set(pc, k, field.neg(rref.get(row, fc)));
        }
    }
    kernel
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn identity_has_full_rank_and_no_kernel() {
        let m = FieldMatrix::identity(f(5), 3);
        let rki = m.rank_kernel_image();
        assert_eq!(rki.rank, 3);
        assert_eq!(rki.kernel.cols(), 0);
        assert_eq!(rki.image.cols(), 3);
    }

    #[test]
    fn zero_matrix_kernel_is_everything() {
        let m = FieldMatrix::zeros(f(5), 2, 4);
        let rki = m.rank_kernel_image();
        assert_eq!(rki.rank, 0);
        assert_eq!(rki.kernel.cols(), 4);
    }

    #[test]
    fn rank_one_kernel_matches_hand_reduction() {
        // [[1,2],[2,4]] over F_7: kernel spanned by (-2, 1) = (5, 1)
        let m = FieldMatrix::from_rows_i64(f(7), &[vec![1, 2], vec![2, 4]]);
        let rki = m.rank_kernel_image();
        assert_eq!(rki.rank, 1);
        assert_eq!(rki.kernel.cols(), 1);
        assert_eq!(rki.kernel.column(0), vec![5, 1]);
    }

    #[test]
    fn solve_preimage_examples() {
        let id = FieldMatrix::identity(f(5), 3);
        assert_eq!(id.solve_preimage(&[2, 0, 4]).unwrap(), vec![2, 0, 4]);

        let zero = FieldMatrix::zeros(f(5), 2, 2);
        assert_eq!(zero.solve_preimage(&[1, 0]), Err(SolveError::NoSolution));

        // [[1,1],[0,2]] over F_5, b = (3,4) -> x = (1,2)
        let m = FieldMatrix::from_rows_i64(f(5), &[vec![1, 1], vec![0, 2]]);
        let x = m.solve_preimage(&[3, 4]).unwrap();
        assert_eq!(x, vec![1, 2]);
        assert_eq!(m.mul_vec(&x), vec![3, 4]);
    }

    #[test]
    fn echelonize_matches_naive_reference() {
        // cross-check the lazy elimination against a plain per-op reference
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for &p in &[2u64, 3, 7, 32003] {
            let field = f(p);
            for _ in 0..40 {
                let rows = rng.gen_range(0..8);
                let cols = rng.gen_range(0..8);
                let mut m = FieldMatrix::zeros(field, rows, cols);
                for i in 0..rows {
                    for j in 0..cols {
                        m.set(i, j, rng.gen_range(0..p));
                    }
                }
                let mut fast = m.clone();
                let piv = fast.echelonize();
                let (refm, refpiv) = naive_rref(&m);
                assert_eq!(piv, refpiv);
                assert_eq!(fast, refm);
                // kernel columns really are killed by m
                let rki = m.rank_kernel_image();
                for k in 0..rki.kernel.cols() {
                    let col = rki.kernel.column(k);
                    assert!(m.mul_vec(&col).iter().all(|&v| v == 0));
                }
                assert_eq!(rki.rank + rki.kernel.cols(), cols);
            }
        }
    }

    fn naive_rref(m: &FieldMatrix) -> (FieldMatrix, Vec<usize>) {
        let field = m.field();
        let p = field.characteristic();
        let mut a = m.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols() {
            if r == a.rows() {
                break;
            }
            let mut sel = None;
            for i in r..a.rows() {
                if a.get(i, c) != 0 {
                    sel = Some(i);
                    break;
                }
            }
            let Some(i0) = sel else { continue };
            for j in 0..a.cols() {
                let t = a.get(r, j);
                a.set(r, j, a.get(i0, j));
                a.set(i0, j, t);
            }
            let inv = field.inv(a.get(r, c));
            for j in 0..a.cols() {
                a.set(r, j, field.mul(a.get(r, j), inv));
            }
            for i in 0..a.rows() {
                if i != r && a.get(i, c) != 0 {
                    let e = a.get(i, c);
                    for j in 0..a.cols() {
                        let v = field.sub(a.get(i, j), field.mul(e, a.get(r, j)));
                        a.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
            let _ = p;
        }
        (a, pivots)
    }
}
