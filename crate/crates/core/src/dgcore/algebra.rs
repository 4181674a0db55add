//! Validated finite-dimensional DG algebras.
//!
//! An algebra is described by a graded basis, a differential table, a sparse
//! multiplication table and a distinguished unit. Construction runs every
//! axiom on every basis tuple: the differential squares to zero, the unit
//! law, associativity, graded commutativity with vanishing odd squares,
//! the Leibniz rule, and locality of the degree-0 component. Anything that
//! survives `make_algebra` can be trusted downstream.

use crate::exactla::{
    FieldError, FieldMatrix, GradedError, GradedMap, GradedSpace, PrimeField,
};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DgError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error("unknown basis label `{0}`")]
    UnknownLabel(String),
    #[error("label `{0}` appears in more than one degree")]
    AmbiguousLabel(String),
    #[error("entry ({0} -> {1}) does not drop degree by one")]
    DiffDegree(String, String),
    #[error("product entry ({0}, {1}) -> {2} violates degree additivity")]
    MultDegree(String, String, String),
    #[error("differential does not square to zero on `{0}`")]
    DiffSquare(String),
    #[error("unit label `{0}` is not a degree-0 basis element")]
    UnitMissing(String),
    #[error("unit law fails on `{0}`")]
    UnitLaw(String),
    #[error("associativity fails on basis triple ({0}, {1}, {2})")]
    Associativity(String, String, String),
    #[error("graded commutativity fails on basis pair ({0}, {1})")]
    GradedCommutativity(String, String),
    #[error("odd-degree square of `{0}` is nonzero")]
    OddSquare(String),
    #[error("Leibniz rule fails on basis pair ({0}, {1})")]
    Leibniz(String, String),
    #[error("degree-0 component is not local: `{0}` is not nilpotent")]
    NotLocal(String),
    #[error("augmentation is not a chain map: differential of `{0}` has a unit component")]
    AugmentationNotChainMap(String),
    #[error("module differential does not square to zero on `{0}`")]
    ModuleDiffSquare(String),
    #[error("unit does not act as identity on `{0}`")]
    ModuleUnit(String),
    #[error("module associativity fails on ({0}, {1}, {2})")]
    ModuleAssociativity(String, String, String),
    #[error("module Leibniz rule fails on ({0}, {1})")]
    ModuleLeibniz(String, String),
    #[error("map is not a chain map at degree {0}")]
    NotChainMap(i32),
    #[error("map is not linear over the algebra on ({0}, {1})")]
    NotLinear(String, String),
    #[error("map does not preserve products on ({0}, {1})")]
    NotMultiplicative(String, String),
    #[error("homology product depends on the representative choice at ({0}, {1})")]
    RepresentativeDependence(String, String),
    #[error("{0}")]
    Structure(String),
}

pub type SparseVec = Vec<(usize, u64)>;

/// Sparse products of basis pairs, keyed by flat basis indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairTable {
    n_left: usize,
    n_right: usize,
    entries: Vec<SparseVec>,
}

impl PairTable {
    pub fn new(n_left: usize, n_right: usize) -> Self {
        PairTable {
            n_left,
            n_right,
            entries: vec![Vec::new(); n_left * n_right],
        }
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> &[(usize, u64)] {
        &self.entries[a * self.n_right + b]
    }

    pub fn set(&mut self, a: usize, b: usize, v: SparseVec) {
        self.entries[a * self.n_right + b] = v;
    }

    pub fn add_term(&mut self, a: usize, b: usize, c: usize, coeff: u64, field: PrimeField) {
        let e = &mut self.entries[a * self.n_right + b];
        if let Some(t) = e.iter_mut().find(|t| t.0 == c) {
            t.1 = field.add(t.1, coeff);
        } else {
            e.push((c, coeff));
        }
    }

    pub fn normalize(&mut self) {
        for e in &mut self.entries {
            e.retain(|t| t.1 != 0);
            e.sort_by_key(|t| t.0);
        }
    }
}

pub(crate) fn list_normalize(field: PrimeField, mut v: SparseVec) -> SparseVec {
    v.sort_by_key(|t| t.0);
    let mut out: SparseVec = Vec::with_capacity(v.len());
    for (i, c) in v {
        if let Some(last) = out.last_mut() {
            if last.0 == i {
                last.1 = field.add(last.1, c);
                continue;
            }
        }
        out.push((i, c % field.characteristic()));
    }
    out.retain(|t| t.1 != 0);
    out
}

pub(crate) fn list_add(field: PrimeField, a: &[(usize, u64)], b: &[(usize, u64)], sign: i32) -> SparseVec {
    let mut v: SparseVec = a.to_vec();
    for &(i, c) in b {
        v.push((i, field.signed(c, sign)));
    }
    list_normalize(field, v)
}

/// Raw input for `make_algebra`: labels per degree starting at 0, the unit
/// label, differential entries `(from, to, coeff)` and multiplication entries
/// `(a, b, c, coeff)`.
#[derive(Debug, Clone)]
pub struct AlgebraDescription {
    pub characteristic: u64,
    pub basis: Vec<Vec<String>>,
    pub unit: String,
    pub diff: Vec<(String, String, i64)>,
    pub mult: Vec<(String, String, String, i64)>,
}

/// A validated non-negatively graded DG algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct DGAlgebra {
    space: GradedSpace,
    differential: GradedMap,
    mult: PairTable,
    unit: usize,
    /// Flat indices of the degree-0 maximal-ideal basis (non-unit elements).
    m0_basis: Vec<usize>,
}

impl DGAlgebra {
    pub fn field(&self) -> PrimeField {
        self.space.field()
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn differential(&self) -> &GradedMap {
        &self.differential
    }

    pub fn top(&self) -> i32 {
        self.space.hi().max(0)
    }

    pub fn dim(&self, degree: i32) -> usize {
        self.space.dim(degree)
    }

    pub fn total_dim(&self) -> usize {
        self.space.total_dim()
    }

    pub fn unit_global(&self) -> usize {
        self.unit
    }

    pub fn mult_table(&self) -> &PairTable {
        &self.mult
    }

    /// Product of two basis elements as a sparse vector over flat indices.
    #[inline]
    pub fn product_basis(&self, a: usize, b: usize) -> &[(usize, u64)] {
        self.mult.get(a, b)
    }

    pub fn degree_of(&self, global: usize) -> i32 {
        self.space.from_global(global).0
    }

    /// Augmentation of a flat-index sparse element (coefficient of the unit).
    pub fn augment_list(&self, v: &[(usize, u64)]) -> u64 {
        v.iter()
            .find(|t| t.0 == self.unit)
            .map_or(0, |t| t.1)
    }

    /// Flat indices of the augmentation-ideal basis: non-unit degree-0
    /// elements followed by everything in positive degrees.
    pub fn maximal_ideal_basis(&self) -> Vec<usize> {
        let mut v = self.m0_basis.clone();
        for d in 1..=self.space.hi() {
            for i in 0..self.space.dim(d) {
                v.push(self.space.global_index(d, i));
            }
        }
        v
    }

    /// Flat indices of the positive-degree part.
    pub fn positive_basis(&self) -> Vec<usize> {
        let mut v = Vec::new();
        for d in 1..=self.space.hi() {
            for i in 0..self.space.dim(d) {
                v.push(self.space.global_index(d, i));
            }
        }
        v
    }

    pub fn m0_basis(&self) -> &[usize] {
        &self.m0_basis
    }

    /// Differential of a basis element as a sparse vector.
    pub fn diff_basis(&self, g: usize) -> SparseVec {
        let (d, i) = self.space.from_global(g);
        let block = self.differential.block(d);
        let mut out = Vec::new();
        for r in 0..block.rows() {
            let c = block.get(r, i);
            if c != 0 {
                out.push((self.space.global_index(d - 1, r), c));
            }
        }
        out
    }

    pub fn list_diff(&self, xs: &[(usize, u64)]) -> SparseVec {
        let field = self.field();
        let mut out = Vec::new();
        for &(g, c) in xs {
            for (h, e) in self.diff_basis(g) {
                out.push((h, field.mul(c, e)));
            }
        }
        list_normalize(field, out)
    }

    pub fn list_mul(&self, xs: &[(usize, u64)], ys: &[(usize, u64)]) -> SparseVec {
        let field = self.field();
        let mut out = Vec::new();
        for &(a, ca) in xs {
            for &(b, cb) in ys {
                let c = field.mul(ca, cb);
                for &(t, e) in self.product_basis(a, b) {
                    out.push((t, field.mul(c, e)));
                }
            }
        }
        list_normalize(field, out)
    }
}

struct LabelIndex {
    space: GradedSpace,
}

impl LabelIndex {
    fn lookup(&self, label: &str) -> Result<usize, DgError> {
        let (d, i) = self
            .space
            .find_label(label)
            .ok_or_else(|| DgError::UnknownLabel(label.to_string()))?;
        Ok(self.space.global_index(d, i))
    }
}

/// Validate a raw description into a DG algebra. Every axiom is checked on
/// every basis tuple; the first violation is reported with its witnesses.
pub fn make_algebra(desc: &AlgebraDescription) -> Result<DGAlgebra, DgError> {
    let field = PrimeField::new(desc.characteristic)?;
    let space = GradedSpace::new(field, 0, desc.basis.clone())?;

    // labels must be globally unambiguous for the table formats to make sense
    {
        let mut seen = std::collections::BTreeMap::new();
        for d in space.degrees() {
            for l in space.labels_at(d) {
                if seen.insert(l.clone(), d).is_some() {
                    return Err(DgError::AmbiguousLabel(l.clone()));
                }
            }
        }
    }

    let index = LabelIndex {
        space: space.clone(),
    };
    let n = space.total_dim();

    let (unit_deg, unit_idx) = space
        .find_label(&desc.unit)
        .ok_or_else(|| DgError::UnitMissing(desc.unit.clone()))?;
    if unit_deg != 0 {
        return Err(DgError::UnitMissing(desc.unit.clone()));
    }
    let unit = space.global_index(0, unit_idx);

    // differential
    let mut differential = GradedMap::zero(space.clone(), space.clone(), -1);
    for (from, to, coeff) in &desc.diff {
        let gf = index.lookup(from)?;
        let gt = index.lookup(to)?;
        let (df, idxf) = space.from_global(gf);
        let (dt, idxt) = space.from_global(gt);
        if dt != df - 1 {
            return Err(DgError::DiffDegree(from.clone(), to.clone()));
        }
        let old = differential.entry(df, idxt, idxf);
        differential.set_entry(df, idxt, idxf, field.add(old, field.from_i64(*coeff)));
    }

    // multiplication table
    let mut mult = PairTable::new(n, n);
    for (a, b, c, coeff) in &desc.mult {
        let ga = index.lookup(a)?;
        let gb = index.lookup(b)?;
        let gc = index.lookup(c)?;
        let (da, _) = space.from_global(ga);
        let (db, _) = space.from_global(gb);
        let (dc, _) = space.from_global(gc);
        if dc != da + db {
            return Err(DgError::MultDegree(a.clone(), b.clone(), c.clone()));
        }
        mult.add_term(ga, gb, gc, field.from_i64(*coeff), field);
    }
    // the unit law determines products with the unit; fill in absent ones
    for g in 0..n {
        if mult.get(unit, g).is_empty() {
            mult.set(unit, g, vec![(g, 1)]);
        }
        if mult.get(g, unit).is_empty() {
            mult.set(g, unit, vec![(g, 1)]);
        }
    }
    mult.normalize();

    let algebra = DGAlgebra {
        space,
        differential,
        mult,
        unit,
        m0_basis: Vec::new(),
    };
    validate_algebra(algebra)
}

fn validate_algebra(mut algebra: DGAlgebra) -> Result<DGAlgebra, DgError> {
    let field = algebra.field();
    let space = algebra.space.clone();
    let n = space.total_dim();

    // d . d = 0
    for g in 0..n {
        if !algebra.list_diff(&algebra.diff_basis(g)).is_empty() {
            return Err(DgError::DiffSquare(space.global_label(g).to_string()));
        }
    }

    // unit law
    for g in 0..n {
        let want = vec![(g, 1u64)];
        if algebra.product_basis(algebra.unit, g) != want.as_slice()
            || algebra.product_basis(g, algebra.unit) != want.as_slice()
        {
            return Err(DgError::UnitLaw(space.global_label(g).to_string()));
        }
    }

    // graded commutativity and odd squares
    for a in 0..n {
        let da = space.from_global(a).0;
        for b in a..n {
            let db = space.from_global(b).0;
            let ab = algebra.product_basis(a, b).to_vec();
            let ba = algebra.product_basis(b, a);
            let sign = if (da & 1) == 1 && (db & 1) == 1 { -1 } else { 1 };
            let signed_ba: SparseVec = ba
                .iter()
                .map(|&(i, c)| (i, field.signed(c, sign)))
                .collect();
            if ab != list_normalize(field, signed_ba) {
                return Err(DgError::GradedCommutativity(
                    space.global_label(a).to_string(),
                    space.global_label(b).to_string(),
                ));
            }
            if a == b && (da & 1) == 1 && !ab.is_empty() {
                return Err(DgError::OddSquare(space.global_label(a).to_string()));
            }
        }
    }

    // associativity on all triples
    for a in 0..n {
        for b in 0..n {
            let ab = algebra.product_basis(a, b).to_vec();
            for c in 0..n {
                let bc = algebra.product_basis(b, c).to_vec();
                let left = algebra.list_mul(&ab, &[(c, 1)]);
                let right = algebra.list_mul(&[(a, 1)], &bc);
                if left != right {
                    return Err(DgError::Associativity(
                        space.global_label(a).to_string(),
                        space.global_label(b).to_string(),
                        space.global_label(c).to_string(),
                    ));
                }
            }
        }
    }

    // Leibniz on all pairs
    for a in 0..n {
        let da = space.from_global(a).0;
        let diff_a = algebra.diff_basis(a);
        for b in 0..n {
            let prod = algebra.product_basis(a, b).to_vec();
            let left = algebra.list_diff(&prod);
            let t1 = algebra.list_mul(&diff_a, &[(b, 1)]);
            let t2 = algebra.list_mul(&[(a, 1)], &algebra.diff_basis(b));
            let sign = if (da & 1) == 1 { -1 } else { 1 };
            let right = list_add(field, &t1, &t2, sign);
            if left != right {
                return Err(DgError::Leibniz(
                    space.global_label(a).to_string(),
                    space.global_label(b).to_string(),
                ));
            }
        }
    }

    // locality of degree 0: non-unit degree-0 basis elements are nilpotent,
    // so the augmentation ideal is spanned by them together with A_+
    let d0 = space.dim(0);
    let mut m0 = Vec::new();
    for i in 0..d0 {
        let g = space.global_index(0, i);
        if g == algebra.unit {
            continue;
        }
        let mut power: SparseVec = vec![(g, 1)];
        let mut nilpotent = false;
        for _ in 0..d0 {
            power = algebra.list_mul(&power, &[(g, 1)]);
            if power.is_empty() {
                nilpotent = true;
                break;
            }
        }
        if !nilpotent {
            return Err(DgError::NotLocal(space.global_label(g).to_string()));
        }
        m0.push(g);
    }

    // the augmentation must kill boundaries from degree 1
    for i in 0..space.dim(1) {
        let g = space.global_index(1, i);
        if algebra.augment_list(&algebra.diff_basis(g)) != 0 {
            return Err(DgError::AugmentationNotChainMap(
                space.global_label(g).to_string(),
            ));
        }
    }

    algebra.m0_basis = m0;
    Ok(algebra)
}

/// The augmentation as a graded map onto a one-dimensional degree-0 space.
pub fn augmentation_map(algebra: &DGAlgebra) -> GradedMap {
    let field = algebra.field();
    let k = GradedSpace::new(field, 0, vec![vec!["1k".to_string()]]).unwrap();
    let mut map = GradedMap::zero(algebra.space().clone(), k, 0);
    let (_, unit_idx) = algebra.space().from_global(algebra.unit_global());
    let mut block = FieldMatrix::zeros(field, 1, algebra.dim(0));
    block.set(0, unit_idx, 1);
    map.set_block(0, block).unwrap();
    map
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn field_description() -> AlgebraDescription {
        AlgebraDescription {
            characteristic: 32003,
            basis: vec![vec!["1".into()]],
            unit: "1".into(),
            diff: vec![],
            mult: vec![],
        }
    }

    #[test]
    fn the_field_is_an_algebra() {
        let a = make_algebra(&field_description()).unwrap();
        assert_eq!(a.total_dim(), 1);
        assert!(a.maximal_ideal_basis().is_empty());
    }

    #[test]
    fn odd_square_must_vanish() {
        // exterior generator declared with e^2 = 1
        let desc = AlgebraDescription {
            characteristic: 32003,
            basis: vec![vec!["1".into()], vec!["e".into()]],
            unit: "1".into(),
            diff: vec![],
            mult: vec![("e".into(), "e".into(), "1".into(), 1)],
        };
        // e*e = 1 lands in degree 0 from degree 2: degree violation fires
        // first; declare it in the right degree instead
        assert_eq!(
            make_algebra(&desc),
            Err(DgError::MultDegree("e".into(), "e".into(), "1".into()))
        );
        let desc2 = AlgebraDescription {
            characteristic: 32003,
            basis: vec![vec!["1".into()], vec!["e".into()], vec!["f".into()]],
            unit: "1".into(),
            diff: vec![],
            mult: vec![("e".into(), "e".into(), "f".into(), 1)],
        };
        assert_eq!(
            make_algebra(&desc2),
            Err(DgError::GradedCommutativity("e".into(), "e".into()))
        );
    }

    #[test]
    fn non_nilpotent_degree_zero_is_rejected() {
        // k x k described with an idempotent second basis vector
        let desc = AlgebraDescription {
            characteristic: 7,
            basis: vec![vec!["1".into(), "u".into()]],
            unit: "1".into(),
            diff: vec![],
            mult: vec![("u".into(), "u".into(), "u".into(), 1)],
        };
        assert_eq!(make_algebra(&desc), Err(DgError::NotLocal("u".into())));
    }

    #[test]
    fn dual_numbers_are_local() {
        let desc = AlgebraDescription {
            characteristic: 7,
            basis: vec![vec!["1".into(), "x".into()]],
            unit: "1".into(),
            diff: vec![],
            mult: vec![],
        };
        let a = make_algebra(&desc).unwrap();
        assert_eq!(a.m0_basis().len(), 1);
        assert_eq!(a.augment_list(&[(0, 3), (1, 5)]), 3);
    }

    #[test]
    fn leibniz_violation_is_named() {
        // d(e) = x on a 2-dim degree-0 part, with e*e = 0 but product x*e
        // declared inconsistently: d(x e) must be x*x = 0, so declare
        // x*e = e' and d(e') = x^2 = 0 while d(x e)... build a genuinely
        // broken table: d(e)=1 violates the augmentation axiom instead.
        let desc = AlgebraDescription {
            characteristic: 7,
            basis: vec![vec!["1".into()], vec!["e".into()]],
            unit: "1".into(),
            diff: vec![("e".into(), "1".into(), 1)],
            mult: vec![],
        };
        assert_eq!(
            make_algebra(&desc),
            Err(DgError::AugmentationNotChainMap("e".into()))
        );
    }
}
