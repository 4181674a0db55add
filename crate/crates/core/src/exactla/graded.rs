//! Finite graded vector spaces, degree-homogeneous maps between them, and
//! homology of finite complexes.
//!
//! Degrees are arbitrary integers in a finite window. A `GradedMap` of shift
//! `d` stores one matrix block per source degree `i`, mapping into degree
//! `i + d`; differentials are shift -1 maps of a space into itself.

use super::field::PrimeField;
use super::matrix::FieldMatrix;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GradedError {
    #[error("duplicate basis label `{0}` in degree {1}")]
    DuplicateLabel(String, i32),
    #[error("block at degree {degree} has shape {got_rows}x{got_cols}, expected {want_rows}x{want_cols}")]
    BlockShape {
        degree: i32,
        got_rows: usize,
        got_cols: usize,
        want_rows: usize,
        want_cols: usize,
    },
    #[error("composition of differentials is nonzero at degree {0}: not a complex")]
    CompositionNotZero(i32),
}

/// A finite graded vector space over a prime field with named basis labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedSpace {
    field: PrimeField,
    lo: i32,
    labels: Vec<Vec<String>>,
}

impl GradedSpace {
    pub fn new(field: PrimeField, lo: i32, labels: Vec<Vec<String>>) -> Result<Self, GradedError> {
        for (off, degree_labels) in labels.iter().enumerate() {
            let mut seen = std::collections::BTreeSet::new();
            for l in degree_labels {
                if !seen.insert(l) {
                    return Err(GradedError::DuplicateLabel(l.clone(), lo + off as i32));
                }
            }
        }
        Ok(GradedSpace { field, lo, labels })
    }

    pub fn zero(field: PrimeField) -> Self {
        GradedSpace {
            field,
            lo: 0,
            labels: Vec::new(),
        }
    }

    /// Space with anonymous labels `prefix{degree}.{index}`.
    pub fn anonymous(field: PrimeField, lo: i32, dims: &[usize], prefix: &str) -> Self {
        let labels = dims
            .iter()
            .enumerate()
            .map(|(off, &n)| {
                (0..n)
                    .map(|i| format!("{prefix}{}.{i}", lo + off as i32))
                    .collect()
            })
            .collect();
        GradedSpace { field, lo, labels }
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    /// Lowest degree of the stored window (0 for the empty space).
    pub fn lo(&self) -> i32 {
        self.lo
    }

    /// Highest degree of the stored window (-1 + lo for the empty space).
    pub fn hi(&self) -> i32 {
        self.lo + self.labels.len() as i32 - 1
    }

    pub fn dim(&self, degree: i32) -> usize {
        if degree < self.lo {
            return 0;
        }
        self.labels
            .get((degree - self.lo) as usize)
            .map_or(0, |l| l.len())
    }

    pub fn total_dim(&self) -> usize {
        self.labels.iter().map(|l| l.len()).sum()
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i32> {
        self.lo..=self.hi()
    }

    pub fn labels_at(&self, degree: i32) -> &[String] {
        if degree < self.lo || degree > self.hi() {
            return &[];
        }
        &self.labels[(degree - self.lo) as usize]
    }

    pub fn label(&self, degree: i32, idx: usize) -> &str {
        &self.labels[(degree - self.lo) as usize][idx]
    }

    /// Locate a label anywhere in the space.
    pub fn find_label(&self, label: &str) -> Option<(i32, usize)> {
        for d in self.degrees() {
            if let Some(i) = self.labels_at(d).iter().position(|l| l == label) {
                return Some((d, i));
            }
        }
        None
    }

    pub fn dims_vec(&self) -> Vec<(i32, usize)> {
        self.degrees().map(|d| (d, self.dim(d))).collect()
    }

    /// Flat index of a basis element across all degrees, low degree first.
    pub fn global_index(&self, degree: i32, idx: usize) -> usize {
        debug_assert!(idx < self.dim(degree));
        let mut off = 0;
        for d in self.lo..degree {
            off += self.dim(d);
        }
        off + idx
    }

    pub fn from_global(&self, g: usize) -> (i32, usize) {
        let mut rest = g;
        for d in self.degrees() {
            let n = self.dim(d);
            if rest < n {
                return (d, rest);
            }
            rest -= n;
        }
        panic!("global index {g} out of range");
    }

    pub fn global_label(&self, g: usize) -> &str {
        let (d, i) = self.from_global(g);
        self.label(d, i)
    }

    /// Degrees relabelled upward by `i`.
    pub fn shifted(&self, i: i32, relabel: bool) -> GradedSpace {
        let labels = if relabel {
            self.labels
                .iter()
                .map(|ls| ls.iter().map(|l| format!("s{i}({l})")).collect())
                .collect()
        } else {
            self.labels.clone()
        };
        GradedSpace {
            field: self.field,
            lo: self.lo + i,
            labels,
        }
    }

    /// Reflected degrees with dual labels.
    pub fn dual(&self) -> GradedSpace {
        let mut labels: Vec<Vec<String>> = self
            .labels
            .iter()
            .rev()
            .map(|ls| ls.iter().map(|l| format!("{l}*")).collect())
            .collect();
        if labels.is_empty() {
            labels = Vec::new();
        }
        GradedSpace {
            field: self.field,
            lo: -self.hi(),
            labels,
        }
    }
}

/// Alternating sum of dimensions over all degrees.
pub fn euler_characteristic(space: &GradedSpace) -> i64 {
    space
        .degrees()
        .map(|d| {
            let sign = if d.rem_euclid(2) == 0 { 1 } else { -1 };
            sign * space.dim(d) as i64
        })
        .sum()
}

/// A degree-homogeneous linear map between graded spaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedMap {
    source: GradedSpace,
    target: GradedSpace,
    shift: i32,
    /// Block per source degree, indexed from `source.lo()`; block at source
    /// degree i has shape `target.dim(i+shift) x source.dim(i)`.
    blocks: Vec<FieldMatrix>,
}

impl GradedMap {
    pub fn zero(source: GradedSpace, target: GradedSpace, shift: i32) -> Self {
        let field = source.field();
        let blocks = source
            .degrees()
            .map(|d| FieldMatrix::zeros(field, target.dim(d + shift), source.dim(d)))
            .collect();
        GradedMap {
            source,
            target,
            shift,
            blocks,
        }
    }

    pub fn from_blocks(
        source: GradedSpace,
        target: GradedSpace,
        shift: i32,
        blocks: Vec<(i32, FieldMatrix)>,
    ) -> Result<Self, GradedError> {
        let mut map = GradedMap::zero(source, target, shift);
        for (degree, block) in blocks {
            map.set_block(degree, block)?;
        }
        Ok(map)
    }

    pub fn set_block(&mut self, degree: i32, block: FieldMatrix) -> Result<(), GradedError> {
        let want_rows = self.target.dim(degree + self.shift);
        let want_cols = self.source.dim(degree);
        if block.rows() != want_rows || block.cols() != want_cols {
            return Err(GradedError::BlockShape {
                degree,
                got_rows: block.rows(),
                got_cols: block.cols(),
                want_rows,
                want_cols,
            });
        }
        if degree >= self.source.lo() && degree <= self.source.hi() {
            self.blocks[(degree - self.source.lo()) as usize] = block;
        }
        Ok(())
    }

    pub fn source(&self) -> &GradedSpace {
        &self.source
    }

    pub fn target(&self) -> &GradedSpace {
        &self.target
    }

    pub fn shift(&self) -> i32 {
        self.shift
    }

    /// The block at a source degree; degrees outside the window give an
    /// appropriately shaped zero block.
    pub fn block(&self, degree: i32) -> FieldMatrix {
        if degree >= self.source.lo() && degree <= self.source.hi() {
            self.blocks[(degree - self.source.lo()) as usize].clone()
        } else {
            FieldMatrix::zeros(
                self.source.field(),
                self.target.dim(degree + self.shift),
                self.source.dim(degree),
            )
        }
    }

    pub fn entry(&self, degree: i32, row: usize, col: usize) -> u64 {
        self.block(degree).get(row, col)
    }

    pub fn set_entry(&mut self, degree: i32, row: usize, col: usize, v: u64) {
        let idx = (degree - self.source.lo()) as usize;
        self.blocks[idx].set(row, col, v);
    }

    pub fn apply(&self, degree: i32, v: &[u64]) -> Vec<u64> {
        self.block(degree).mul_vec(v)
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(|b| b.is_zero())
    }

    /// `other` then `self`; shifts add.
    pub fn compose(&self, other: &GradedMap) -> GradedMap {
        assert_eq!(
            other.target, self.source,
            "composition: middle spaces differ"
        );
        let shift = self.shift + other.shift;
        let mut out = GradedMap::zero(other.source.clone(), self.target.clone(), shift);
        let degrees: Vec<i32> = out.source.degrees().collect();
        for d in degrees {
            let b = self.block(d + other.shift).mul(&other.block(d));
            out.set_block(d, b).unwrap();
        }
        out
    }

    pub fn scaled(&self, c: u64) -> GradedMap {
        let field = self.source.field();
        let mut out = self.clone();
        for b in &mut out.blocks {
            for i in 0..b.rows() {
                for j in 0..b.cols() {
                    b.set(i, j, field.mul(b.get(i, j), c));
                }
            }
        }
        out
    }

    pub fn add(&self, other: &GradedMap) -> GradedMap {
        assert_eq!(self.source, other.source);
        assert_eq!(self.target, other.target);
        assert_eq!(self.shift, other.shift);
        let field = self.source.field();
        let mut out = self.clone();
        for (idx, b) in out.blocks.iter_mut().enumerate() {
            let o = &other.blocks[idx];
            for i in 0..b.rows() {
                for j in 0..b.cols() {
                    b.set(i, j, field.add(b.get(i, j), o.get(i, j)));
                }
            }
        }
        out
    }
}

/// Homology data at one degree of a complex: dimension, cycle representatives
/// (columns), and a projection sending any chain to the coordinates of its
/// class (zero on boundaries and on the chosen complement of the cycles).
#[derive(Debug, Clone)]
pub struct HomologyAt {
    pub dim: usize,
    pub reps: FieldMatrix,
    pub proj: FieldMatrix,
}

/// Homology at degree `i` of the complex with incoming differential `d_in`
/// (a shift -1 map hitting degree `i` from `i+1`) and outgoing `d_out`.
pub fn homology_at(d_in: &GradedMap, d_out: &GradedMap, i: i32) -> Result<HomologyAt, GradedError> {
    let din = d_in.block(i + 1);
    let dout = d_out.block(i);
    if !dout.mul(&din).is_zero() {
        return Err(GradedError::CompositionNotZero(i));
    }
    Ok(homology_from_blocks(&din, &dout))
}

/// Same computation on raw blocks: `din` maps into the middle space, `dout`
/// maps out of it. The composition is assumed zero.
pub fn homology_from_blocks(din: &FieldMatrix, dout: &FieldMatrix) -> HomologyAt {
    let field = dout.field();
    let space_dim = dout.cols();
    let cycles = dout.rank_kernel_image().kernel; // space_dim x z
    let bnd_rank_img = din.rank_kernel_image();
    let boundaries = bnd_rank_img.image; // space_dim x b

    let reps = extend_basis(&boundaries, &cycles);
    let h = reps.cols();

    // projection: complete [B | R] to a basis of the whole space with
    // standard vectors, invert, and keep the rows matching R
    let br = boundaries.hstack(&reps);
    let mut probe = br.hstack(&FieldMatrix::identity(field, space_dim));
    let pivots = probe.echelonize();
    let mut full_cols: Vec<Vec<u64>> = Vec::with_capacity(space_dim);
    let mut col_sources: Vec<usize> = Vec::new(); // position within [B|R|I]
    for &c in &pivots {
        col_sources.push(c);
        if c < br.cols() {
            full_cols.push(br.column(c));
        } else {
            let mut e = vec![0u64; space_dim];
            e[c - br.cols()] = 1;
            full_cols.push(e);
        }
    }
    let basis = FieldMatrix::from_columns(field, space_dim, &full_cols);
    let inv = basis
        .solve_preimage_many(&FieldMatrix::identity(field, space_dim))
        .expect("completed basis must be invertible");
    let mut proj = FieldMatrix::zeros(field, h, space_dim);
    let b = boundaries.cols();
    for (row, &src) in col_sources.iter().enumerate() {
        if src >= b && src < b + h {
            for j in 0..space_dim {
                proj.set(src - b, j, inv.get(row, j));
            }
        }
    }
    HomologyAt {
        dim: h,
        reps,
        proj,
    }
}

/// Columns of `extra` that extend the span of `base` to the span of
/// `[base | extra]`, chosen first-found.
pub fn extend_basis(base: &FieldMatrix, extra: &FieldMatrix) -> FieldMatrix {
    let field = base.field();
    let mut probe = base.hstack(extra);
    let pivots = probe.echelonize();
    let picked: Vec<Vec<u64>> = pivots
        .iter()
        .filter(|&&c| c >= base.cols())
        .map(|&c| extra.column(c - base.cols()))
        .collect();
    FieldMatrix::from_columns(field, base.rows(), &picked)
}

/// An echelonized spanning set for a subspace, supporting membership tests
/// and coordinates.
#[derive(Debug, Clone)]
pub struct Span {
    field: PrimeField,
    space_dim: usize,
    /// RREF rows, one per basis vector.
    rows: FieldMatrix,
    pivots: Vec<usize>,
}

impl Span {
    pub fn from_columns(field: PrimeField, space_dim: usize, vectors: &[Vec<u64>]) -> Span {
        let mut m = FieldMatrix::zeros(field, vectors.len(), space_dim);
        for (i, v) in vectors.iter().enumerate() {
            assert_eq!(v.len(), space_dim);
            for (j, &x) in v.iter().enumerate() {
                m.set(i, j, x % field.characteristic());
            }
        }
        let pivots = m.echelonize();
        let rank = pivots.len();
        let mut rows = FieldMatrix::zeros(field, rank, space_dim);
        for i in 0..rank {
            for j in 0..space_dim {
                rows.set(i, j, m.get(i, j));
            }
        }
        Span {
            field,
            space_dim,
            rows,
            pivots,
        }
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn space_dim(&self) -> usize {
        self.space_dim
    }

    /// Reduce `v` against the span; returns the residue.
    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        let mut w: Vec<u64> = v.iter().map(|&x| x % self.field.characteristic()).collect();
        for (r, &c) in self.pivots.iter().enumerate() {
            let coeff = w[c];
            if coeff != 0 {
                for j in 0..self.space_dim {
                    let s = self.field.mul(coeff, self.rows.get(r, j));
                    w[j] = self.field.sub(w[j], s);
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Coordinates of `v` in the echelonized basis, if `v` lies in the span.
    pub fn coords(&self, v: &[u64]) -> Option<Vec<u64>> {
        let mut w: Vec<u64> = v.iter().map(|&x| x % self.field.characteristic()).collect();
        let mut cs = Vec::with_capacity(self.pivots.len());
        for (r, &c) in self.pivots.iter().enumerate() {
            let coeff = w[c];
            cs.push(coeff);
            if coeff != 0 {
                for j in 0..self.space_dim {
                    let s = self.field.mul(coeff, self.rows.get(r, j));
                    w[j] = self.field.sub(w[j], s);
                }
            }
        }
        if w.iter().all(|&x| x == 0) {
            Some(cs)
        } else {
            None
        }
    }

    pub fn basis_rows(&self) -> &FieldMatrix {
        &self.rows
    }
}

/// Per-degree homology dimensions, serialized in reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeDims {
    pub lo: i32,
    pub dims: Vec<usize>,
}

impl DegreeDims {
    pub fn dim(&self, degree: i32) -> usize {
        if degree < self.lo {
            return 0;
        }
        self.dims.get((degree - self.lo) as usize).copied().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f() -> PrimeField {
        PrimeField::new(5).unwrap()
    }

    fn two_term_complex(block: FieldMatrix) -> (GradedSpace, GradedMap) {
        // degrees 0 and 1, differential = block at degree 1
        let field = block.field();
        let labels = vec![
            (0..block.rows()).map(|i| format!("a{i}")).collect(),
            (0..block.cols()).map(|i| format!("b{i}")).collect(),
        ];
        let space = GradedSpace::new(field, 0, labels).unwrap();
        let mut d = GradedMap::zero(space.clone(), space.clone(), -1);
        d.set_block(1, block).unwrap();
        (space, d)
    }

    #[test]
    fn exact_two_term_complex_has_no_homology() {
        let (_, d) = two_term_complex(FieldMatrix::identity(f(), 1));
        let h0 = homology_at(&d, &d, 0).unwrap();
        let h1 = homology_at(&d, &d, 1).unwrap();
        assert_eq!(h0.dim, 0);
        assert_eq!(h1.dim, 0);
    }

    #[test]
    fn zero_differential_homology_is_the_space() {
        let field = f();
        let space = GradedSpace::anonymous(field, 0, &[1, 3, 3, 1], "c");
        let d = GradedMap::zero(space.clone(), space.clone(), -1);
        let dims: Vec<usize> = (0..4).map(|i| homology_at(&d, &d, i).unwrap().dim).collect();
        assert_eq!(dims, vec![1, 3, 3, 1]);
    }

    #[test]
    fn koszul_complex_of_x_over_dual_numbers() {
        // K = k[x]/(x^2) <-x- k[x]/(x^2): H_0 = k, H_1 = k
        let field = f();
        let block = FieldMatrix::from_rows_i64(field, &[vec![0, 0], vec![1, 0]]);
        let (_, d) = two_term_complex(block);
        assert_eq!(homology_at(&d, &d, 0).unwrap().dim, 1);
        assert_eq!(homology_at(&d, &d, 1).unwrap().dim, 1);
    }

    #[test]
    fn composition_check_fires() {
        let (_, d) = two_term_complex(FieldMatrix::identity(f(), 2));
        // use d as both incoming and outgoing at degree 0 is fine (zero in),
        // but a fake complex with d_out = d_in = identity at overlapping
        // degrees must fail
        let field = f();
        let space = GradedSpace::anonymous(field, 0, &[2, 2, 2], "v");
        let mut dd = GradedMap::zero(space.clone(), space.clone(), -1);
        dd.set_block(1, FieldMatrix::identity(field, 2)).unwrap();
        dd.set_block(2, FieldMatrix::identity(field, 2)).unwrap();
        assert_eq!(
            homology_at(&dd, &dd, 1).unwrap_err(),
            GradedError::CompositionNotZero(1)
        );
        let _ = d;
    }

    #[test]
    fn projection_kills_boundaries_and_fixes_reps() {
        let field = f();
        // complex: degree 2 -> 1 -> 0 with d2 = [1;0;0], d1 = 0 (3-dim middle)
        let space = GradedSpace::anonymous(field, 0, &[1, 3, 1], "v");
        let mut d = GradedMap::zero(space.clone(), space.clone(), -1);
        d.set_block(2, FieldMatrix::from_rows_i64(field, &[vec![1], vec![0], vec![0]]))
            .unwrap();
        let h = homology_at(&d, &d, 1).unwrap();
        assert_eq!(h.dim, 2);
        // proj . reps = identity
        let pr = h.proj.mul(&h.reps);
        assert_eq!(pr, FieldMatrix::identity(field, 2));
        // boundary direction dies
        assert_eq!(h.proj.mul_vec(&[1, 0, 0]), vec![0, 0]);
    }

    #[test]
    fn euler_characteristic_alternates() {
        let field = f();
        let space = GradedSpace::anonymous(field, -1, &[2, 1, 3], "v");
        // degrees -1,0,1 with dims 2,1,3: chi = -2 + 1 - 3
        assert_eq!(euler_characteristic(&space), -4);
    }
}
