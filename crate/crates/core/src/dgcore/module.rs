//! Validated DG modules over a DG algebra, with the shift / dual / sum /
//! submodule / quotient constructions used throughout the toolkit.

use super::algebra::{list_normalize, DGAlgebra, DgError, PairTable, SparseVec};
use crate::exactla::{
    homology_at, DegreeDims, FieldMatrix, GradedMap, GradedSpace, HomologyAt, PrimeField, Span,
};
use std::collections::BTreeMap;
use std::sync::Arc;

/// A finite-dimensional DG module over a validated DG algebra. Construction
/// checks the differential, the unit action, associativity of the action and
/// the Leibniz rule on all basis tuples.
#[derive(Debug, Clone, PartialEq)]
pub struct DGModule {
    algebra: Arc<DGAlgebra>,
    space: GradedSpace,
    differential: GradedMap,
    action: PairTable,
}

impl DGModule {
    pub fn new_checked(
        algebra: Arc<DGAlgebra>,
        space: GradedSpace,
        differential: GradedMap,
        mut action: PairTable,
    ) -> Result<DGModule, DgError> {
        // unit acts as identity; absent entries are filled in first
        let unit = algebra.unit_global();
        for x in 0..space.total_dim() {
            if action.get(unit, x).is_empty() {
                action.set(unit, x, vec![(x, 1)]);
            }
        }
        action.normalize();
        let m = DGModule {
            algebra,
            space,
            differential,
            action,
        };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<(), DgError> {
        let a = &*self.algebra;
        let field = self.field();
        let nx = self.space.total_dim();
        let na = a.total_dim();

        // action entries must respect the grading
        for ga in 0..na {
            let da = a.space().from_global(ga).0;
            for x in 0..nx {
                let dx = self.space.from_global(x).0;
                for &(t, c) in self.act_basis(ga, x) {
                    if c != 0 && self.space.from_global(t).0 != da + dx {
                        return Err(DgError::Structure(format!(
                            "action entry ({}, {}) violates degree additivity",
                            a.space().global_label(ga),
                            self.label_of(x)
                        )));
                    }
                }
            }
        }

        for x in 0..nx {
            if !self.diff_list(&self.diff_basis(x)).is_empty() {
                return Err(DgError::ModuleDiffSquare(self.label_of(x)));
            }
        }
        let unit = a.unit_global();
        for x in 0..nx {
            if self.act_basis(unit, x) != [(x, 1)] {
                return Err(DgError::ModuleUnit(self.label_of(x)));
            }
        }
        // (ab / ba grading guard is the algebra's job) -- check (ab)x = a(bx)
        for ga in 0..na {
            for gb in 0..na {
                let ab = a.product_basis(ga, gb).to_vec();
                for x in 0..nx {
                    let bx = self.act_basis(gb, x).to_vec();
                    let left = self.act_list(&ab, &[(x, 1)]);
                    let right = self.act_list(&[(ga, 1)], &bx);
                    if left != right {
                        return Err(DgError::ModuleAssociativity(
                            a.space().global_label(ga).to_string(),
                            a.space().global_label(gb).to_string(),
                            self.label_of(x),
                        ));
                    }
                }
            }
        }
        // Leibniz: d(ax) = d(a)x + (-1)^{|a|} a d(x)
        for ga in 0..na {
            let da = a.space().from_global(ga).0;
            let diff_a = a.diff_basis(ga);
            let sign = if (da & 1) == 1 { -1 } else { 1 };
            for x in 0..nx {
                let ax = self.act_basis(ga, x).to_vec();
                let left = self.diff_list(&ax);
                let t1 = self.act_alg_list(&diff_a, x);
                let dx = self.diff_basis(x);
                let t2 = self.act_list(&[(ga, 1)], &dx);
                let right = super::algebra::list_add(field, &t1, &t2, sign);
                if left != right {
                    return Err(DgError::ModuleLeibniz(
                        a.space().global_label(ga).to_string(),
                        self.label_of(x),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn algebra(&self) -> &Arc<DGAlgebra> {
        &self.algebra
    }

    pub fn field(&self) -> PrimeField {
        self.space.field()
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn differential(&self) -> &GradedMap {
        &self.differential
    }

    pub fn action(&self) -> &PairTable {
        &self.action
    }

    pub fn label_of(&self, x: usize) -> String {
        self.space.global_label(x).to_string()
    }

    pub fn same_algebra(&self, other: &DGModule) -> bool {
        Arc::ptr_eq(&self.algebra, &other.algebra) || *self.algebra == *other.algebra
    }

    #[inline]
    pub fn act_basis(&self, a: usize, x: usize) -> &[(usize, u64)] {
        self.action.get(a, x)
    }

    pub fn diff_basis(&self, x: usize) -> SparseVec {
        let (d, i) = self.space.from_global(x);
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

    pub fn diff_list(&self, xs: &[(usize, u64)]) -> SparseVec {
        let field = self.field();
        let mut out = Vec::new();
        for &(g, c) in xs {
            for (h, e) in self.diff_basis(g) {
                out.push((h, field.mul(c, e)));
            }
        }
        list_normalize(field, out)
    }

    /// Action of a sparse algebra element on a sparse module element.
    pub fn act_list(&self, alg: &[(usize, u64)], xs: &[(usize, u64)]) -> SparseVec {
        let field = self.field();
        let mut out = Vec::new();
        for &(a, ca) in alg {
            for &(x, cx) in xs {
                let c = field.mul(ca, cx);
                for &(t, e) in self.act_basis(a, x) {
                    out.push((t, field.mul(c, e)));
                }
            }
        }
        list_normalize(field, out)
    }

    fn act_alg_list(&self, alg: &[(usize, u64)], x: usize) -> SparseVec {
        self.act_list(alg, &[(x, 1)])
    }

    pub fn homology_at_degree(&self, degree: i32) -> HomologyAt {
        homology_at(&self.differential, &self.differential, degree)
            .expect("validated module is a complex")
    }

    pub fn homology_dims(&self) -> DegreeDims {
        let lo = self.space.lo();
        let dims = self
            .space
            .degrees()
            .map(|d| self.homology_at_degree(d).dim)
            .collect();
        DegreeDims { lo, dims }
    }

    pub fn is_homologically_zero(&self) -> bool {
        self.homology_dims().dims.iter().all(|&d| d == 0)
    }

    /// Largest degree with nonzero homology.
    pub fn sup_h(&self) -> Option<i32> {
        let h = self.homology_dims();
        self.space
            .degrees()
            .rev()
            .find(|&d| h.dim(d) > 0)
    }

    pub fn inf_h(&self) -> Option<i32> {
        let h = self.homology_dims();
        self.space.degrees().find(|&d| h.dim(d) > 0)
    }

    /// The algebra as a left module over itself.
    pub fn regular(algebra: Arc<DGAlgebra>) -> DGModule {
        let space = algebra.space().clone();
        let differential = algebra.differential().clone();
        let n = algebra.total_dim();
        let mut action = PairTable::new(n, n);
        for a in 0..n {
            for x in 0..n {
                action.set(a, x, algebra.product_basis(a, x).to_vec());
            }
        }
        DGModule::new_checked(algebra, space, differential, action)
            .expect("regular module of a validated algebra")
    }

    /// The residue field k, with the action through the augmentation.
    pub fn residue_field(algebra: Arc<DGAlgebra>) -> DGModule {
        let field = algebra.field();
        let space = GradedSpace::new(field, 0, vec![vec!["k".to_string()]]).unwrap();
        let differential = GradedMap::zero(space.clone(), space.clone(), -1);
        let n = algebra.total_dim();
        let mut action = PairTable::new(n, 1);
        action.set(algebra.unit_global(), 0, vec![(0, 1)]);
        DGModule::new_checked(algebra, space, differential, action)
            .expect("residue field is a module")
    }

    pub fn zero_module(algebra: Arc<DGAlgebra>) -> DGModule {
        let field = algebra.field();
        let space = GradedSpace::zero(field);
        let differential = GradedMap::zero(space.clone(), space.clone(), -1);
        let action = PairTable::new(algebra.total_dim(), 0);
        DGModule::new_checked(algebra, space, differential, action).expect("zero module")
    }

    /// The shift: degrees move up by `i`, the differential picks up the sign
    /// (-1)^i, the action of a picks up (-1)^{i |a|}.
    pub fn shift(&self, i: i32) -> DGModule {
        if i == 0 {
            return self.clone();
        }
        let field = self.field();
        let space = self.space.shifted(i, false);
        let diff_sign = if i.rem_euclid(2) == 0 { 1 } else { -1 };
        let mut differential = GradedMap::zero(space.clone(), space.clone(), -1);
        for d in self.space.degrees() {
            let mut block = self.differential.block(d);
            if diff_sign < 0 {
                block = scale_matrix(&block, field.neg(1), field);
            }
            differential.set_block(d + i, block).unwrap();
        }
        let na = self.algebra.total_dim();
        let nx = self.space.total_dim();
        let mut action = PairTable::new(na, nx);
        for a in 0..na {
            let da = self.algebra.space().from_global(a).0;
            let sign = if (i * da).rem_euclid(2) == 0 { 1 } else { -1 };
            for x in 0..nx {
                let list: SparseVec = self
                    .act_basis(a, x)
                    .iter()
                    .map(|&(t, c)| (t, field.signed(c, sign)))
                    .collect();
                action.set(a, x, list);
            }
        }
        DGModule::new_checked(self.algebra.clone(), space, differential, action)
            .expect("shift of a module is a module")
    }

    /// The graded dual Hom_k(X, k): reflected degrees, signed-transpose
    /// differential, action (a.f)(x) = (-1)^{|a||f|} f(ax).
    pub fn graded_dual(&self) -> DGModule {
        let field = self.field();
        let dual_space = self.space.dual();
        let mut differential = GradedMap::zero(dual_space.clone(), dual_space.clone(), -1);
        for n in dual_space.degrees() {
            // block at dual degree n: (X_{1-n})* <- (X_{-n})*
            let xb = self.differential.block(1 - n); // X_{-n} <- X_{1-n}
            let rows = dual_space.dim(n - 1);
            let cols = dual_space.dim(n);
            let mut block = FieldMatrix::zeros(field, rows, cols);
            let sign = if n.rem_euclid(2) == 0 { -1 } else { 1 }; // -(-1)^n
            for i in 0..rows {
                for j in 0..cols {
                    block.set(i, j, field.signed(xb.get(j, i), sign));
                }
            }
            differential.set_block(n, block).unwrap();
        }
        let na = self.algebra.total_dim();
        let nx = self.space.total_dim();
        let mut action = PairTable::new(na, nx);
        for a in 0..na {
            let da = self.algebra.space().from_global(a).0;
            for fj in 0..nx {
                // f = dual of basis element x_j in degree -n
                let (dj, j) = dual_space.from_global(fj);
                let n = dj;
                let x_source_degree = -n - da;
                let sign = if (da * n).rem_euclid(2) == 0 { 1 } else { -1 };
                let mut list = Vec::new();
                for i in 0..self.space.dim(x_source_degree) {
                    let xg = self.space.global_index(x_source_degree, i);
                    let ax = self.act_basis(a, xg);
                    // coefficient of x_j (degree -n) in a.x_i
                    let xj_global = self.space.global_index(-n, j);
                    if let Some(&(_, c)) = ax.iter().find(|t| t.0 == xj_global) {
                        let dual_target = dual_space.global_index(n + da, i);
                        list.push((dual_target, field.signed(c, sign)));
                    }
                }
                action.set(a, fj, list_normalize(field, list));
            }
        }
        DGModule::new_checked(self.algebra.clone(), dual_space, differential, action)
            .expect("graded dual of a module is a module")
    }

    pub fn direct_sum(&self, other: &DGModule) -> DGModule {
        assert!(self.same_algebra(other), "direct sum over different algebras");
        let field = self.field();
        let lo = if self.space.total_dim() == 0 {
            other.space.lo()
        } else if other.space.total_dim() == 0 {
            self.space.lo()
        } else {
            self.space.lo().min(other.space.lo())
        };
        let hi = self.space.hi().max(other.space.hi());
        let mut labels = Vec::new();
        let mut index_map_a = BTreeMap::new(); // self global -> sum global
        let mut index_map_b = BTreeMap::new();
        let mut sum_count = 0usize;
        let mut degree_labels: Vec<Vec<String>> = Vec::new();
        for d in lo..=hi {
            let mut ls = Vec::new();
            for i in 0..self.space.dim(d) {
                index_map_a.insert(self.space.global_index(d, i), sum_count + ls.len());
                ls.push(format!("0#{}", self.space.label(d, i)));
            }
            for i in 0..other.space.dim(d) {
                index_map_b.insert(other.space.global_index(d, i), sum_count + ls.len());
                ls.push(format!("1#{}", other.space.label(d, i)));
            }
            sum_count += ls.len();
            degree_labels.push(ls);
        }
        labels.extend(degree_labels);
        let space = GradedSpace::new(field, lo, labels).unwrap();
        let mut differential = GradedMap::zero(space.clone(), space.clone(), -1);
        let na = self.algebra.total_dim();
        let mut action = PairTable::new(na, space.total_dim());
        let install = |m: &DGModule, index_map: &BTreeMap<usize, usize>,
                           differential: &mut GradedMap,
                           action: &mut PairTable| {
            for x in 0..m.space.total_dim() {
                let (d, _) = m.space.from_global(x);
                let tx = index_map[&x];
                for (t, c) in m.diff_basis(x) {
                    let (td, ti) = m.space.from_global(t);
                    debug_assert_eq!(td, d - 1);
                    let (sd, si) = space.from_global(index_map[&t]);
                    debug_assert_eq!(sd, td);
                    let (_, xi) = space.from_global(tx);
                    let old = differential.entry(d, si, xi);
                    differential.set_entry(d, si, xi, field.add(old, c));
                    let _ = ti;
                }
                for a in 0..na {
                    let list: SparseVec = m
                        .act_basis(a, x)
                        .iter()
                        .map(|&(t, c)| (index_map[&t], c))
                        .collect();
                    action.set(a, tx, list_normalize(field, list));
                }
            }
        };
        install(self, &index_map_a, &mut differential, &mut action);
        install(other, &index_map_b, &mut differential, &mut action);
        DGModule::new_checked(self.algebra.clone(), space, differential, action)
            .expect("direct sum of modules is a module")
    }

    /// The submodule spanned by the given subspaces (one `Span` per degree in
    /// the module's coordinates). Fails if the spans are not closed under the
    /// differential and the action. Returns the module and the inclusion data
    /// (a block per degree embedding sub coordinates into `self`).
    pub fn submodule(&self, spans: &BTreeMap<i32, Span>) -> Result<(DGModule, GradedMap), DgError> {
        let field = self.field();
        let get_span = |d: i32| spans.get(&d);
        let sub_dim = |d: i32| get_span(d).map_or(0, |s| s.dim());
        let lo = self.space.lo();
        let hi = self.space.hi();
        let labels: Vec<Vec<String>> = (lo..=hi)
            .map(|d| (0..sub_dim(d)).map(|i| format!("sub{d}.{i}")).collect())
            .collect();
        let space = GradedSpace::new(field, lo, labels).unwrap();

        // basis vectors of the sub in ambient coordinates
        let mut amb: BTreeMap<i32, Vec<Vec<u64>>> = BTreeMap::new();
        for d in lo..=hi {
            let mut vs = Vec::new();
            if let Some(s) = get_span(d) {
                for r in 0..s.dim() {
                    vs.push((0..s.space_dim()).map(|j| s.basis_rows().get(r, j)).collect());
                }
            }
            amb.insert(d, vs);
        }

        let coords_in = |d: i32, v: &[u64]| -> Result<Vec<u64>, DgError> {
            if v.iter().all(|&c| c == 0) {
                return Ok(vec![0; sub_dim(d)]);
            }
            get_span(d)
                .and_then(|s| s.coords(v))
                .ok_or_else(|| DgError::Structure(format!("subspace not closed at degree {d}")))
        };

        let mut differential = GradedMap::zero(space.clone(), space.clone(), -1);
        for d in lo..=hi {
            let vs = &amb[&d];
            let mut block = FieldMatrix::zeros(field, sub_dim(d - 1), vs.len());
            for (j, v) in vs.iter().enumerate() {
                let dv = apply_block(&self.differential.block(d), v);
                let cs = coords_in(d - 1, &dv)?;
                for (i, &c) in cs.iter().enumerate() {
                    block.set(i, j, c);
                }
            }
            differential.set_block(d, block).unwrap();
        }

        let na = self.algebra.total_dim();
        let mut action = PairTable::new(na, space.total_dim());
        for a in 0..na {
            let da = self.algebra.space().from_global(a).0;
            for d in lo..=hi {
                for (j, v) in amb[&d].iter().enumerate() {
                    // a . v in ambient coordinates of degree d+da
                    let sparse: SparseVec = v
                        .iter()
                        .enumerate()
                        .filter(|(_, &c)| c != 0)
                        .map(|(i, &c)| (self.space.global_index(d, i), c))
                        .collect();
                    let av = self.act_list(&[(a, 1)], &sparse);
                    let av_dense = dense_at_degree(&self.space, d + da, &av);
                    let cs = coords_in(d + da, &av_dense)?;
                    let list: SparseVec = cs
                        .iter()
                        .enumerate()
                        .filter(|(_, &c)| c != 0)
                        .map(|(i, &c)| (space.global_index(d + da, i), c))
                        .collect();
                    action.set(a, space.global_index(d, j), list);
                }
            }
        }

        let mut inclusion = GradedMap::zero(space.clone(), self.space.clone(), 0);
        for d in lo..=hi {
            let vs = &amb[&d];
            let mut block = FieldMatrix::zeros(field, self.space.dim(d), vs.len());
            for (j, v) in vs.iter().enumerate() {
                for (i, &c) in v.iter().enumerate() {
                    block.set(i, j, c);
                }
            }
            inclusion.set_block(d, block).unwrap();
        }
        let module = DGModule::new_checked(self.algebra.clone(), space, differential, action)?;
        Ok((module, inclusion))
    }

    /// The quotient by a family of subspaces closed under differential and
    /// action. Returns the module and the projection blocks.
    pub fn quotient(&self, spans: &BTreeMap<i32, Span>) -> Result<(DGModule, GradedMap), DgError> {
        let field = self.field();
        let lo = self.space.lo();
        let hi = self.space.hi();
        // representatives: standard basis vectors at non-pivot coordinates
        let mut proj_blocks: BTreeMap<i32, FieldMatrix> = BTreeMap::new();
        let mut reps: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
        for d in lo..=hi {
            let n = self.space.dim(d);
            let empty = Span::from_columns(field, n, &[]);
            let span = spans.get(&d).unwrap_or(&empty);
            // representatives: standard basis vectors that enlarge the span,
            // taken first-found for determinism
            let mut chosen = Vec::new();
            let mut acc: Vec<Vec<u64>> = (0..span.dim())
                .map(|r| (0..n).map(|j| span.basis_rows().get(r, j)).collect())
                .collect();
            for i in 0..n {
                let mut e = vec![0u64; n];
                e[i] = 1;
                let s = Span::from_columns(field, n, &acc);
                if !s.contains(&e) {
                    chosen.push(i);
                    acc.push(e);
                }
            }
            // projection block: x -> coordinates of its residue on the chosen
            // representatives
            let full = {
                let mut cols: Vec<Vec<u64>> = Vec::new();
                for r in 0..span.dim() {
                    cols.push((0..n).map(|j| span.basis_rows().get(r, j)).collect());
                }
                for &i in &chosen {
                    let mut e = vec![0u64; n];
                    e[i] = 1;
                    cols.push(e);
                }
                FieldMatrix::from_columns(field, n, &cols)
            };
            let mut proj = FieldMatrix::zeros(field, chosen.len(), n);
            if n > 0 {
                let inv = full
                    .solve_preimage_many(&FieldMatrix::identity(field, n))
                    .expect("span plus representatives is a basis");
                for (r, _) in chosen.iter().enumerate() {
                    for j in 0..n {
                        proj.set(r, j, inv.get(span.dim() + r, j));
                    }
                }
            }
            proj_blocks.insert(d, proj);
            reps.insert(d, chosen);
        }

        let labels: Vec<Vec<String>> = (lo..=hi)
            .map(|d| {
                (0..reps[&d].len())
                    .map(|i| format!("q{d}.{i}"))
                    .collect()
            })
            .collect();
        let space = GradedSpace::new(field, lo, labels).unwrap();

        let mut differential = GradedMap::zero(space.clone(), space.clone(), -1);
        let na = self.algebra.total_dim();
        let mut action = PairTable::new(na, space.total_dim());
        for d in lo..=hi {
            let chosen = &reps[&d];
            let mut block = FieldMatrix::zeros(field, space.dim(d - 1), chosen.len());
            for (j, &amb_i) in chosen.iter().enumerate() {
                let g = self.space.global_index(d, amb_i);
                let dv = self.diff_basis(g);
                let dense = dense_at_degree(&self.space, d - 1, &dv);
                if d - 1 >= lo {
                    let cs = proj_blocks[&(d - 1)].mul_vec(&dense);
                    for (i, &c) in cs.iter().enumerate() {
                        block.set(i, j, c);
                    }
                }
            }
            differential.set_block(d, block).unwrap();
            for a in 0..na {
                let da = self.algebra.space().from_global(a).0;
                for (j, &amb_i) in chosen.iter().enumerate() {
                    let g = self.space.global_index(d, amb_i);
                    let av = self.act_list(&[(a, 1)], &[(g, 1)]);
                    let target_d = d + da;
                    let mut list = Vec::new();
                    debug_assert!(target_d <= hi || av.is_empty());
                    if target_d <= hi {
                        let dense = dense_at_degree(&self.space, target_d, &av);
                        let cs = proj_blocks[&target_d].mul_vec(&dense);
                        for (i, &c) in cs.iter().enumerate() {
                            if c != 0 {
                                list.push((space.global_index(target_d, i), c));
                            }
                        }
                    }
                    action.set(a, space.global_index(d, j), list);
                }
            }
        }

        let mut projection = GradedMap::zero(self.space.clone(), space.clone(), 0);
        for d in lo..=hi {
            projection.set_block(d, proj_blocks[&d].clone()).unwrap();
        }
        let module = DGModule::new_checked(self.algebra.clone(), space, differential, action)?;
        Ok((module, projection))
    }

    /// View a module over `target` as a module over `source` through an
    /// algebra morphism (typically a surjection like A = B x W -> B).
    pub fn restrict_via(
        phi: &super::morphism::DGAlgebraMorphism,
        module: &DGModule,
    ) -> Result<DGModule, DgError> {
        assert!(
            Arc::ptr_eq(module.algebra(), phi.target()) || **module.algebra() == **phi.target(),
            "module is not over the morphism target"
        );
        let source = phi.source().clone();
        let na = source.total_dim();
        let nx = module.space.total_dim();
        let mut action = PairTable::new(na, nx);
        for a in 0..na {
            let image = phi.apply_basis(a);
            for x in 0..nx {
                action.set(a, x, module.act_list(&image, &[(x, 1)]));
            }
        }
        DGModule::new_checked(
            source,
            module.space.clone(),
            module.differential.clone(),
            action,
        )
    }
}

pub(crate) fn scale_matrix(m: &FieldMatrix, c: u64, field: PrimeField) -> FieldMatrix {
    let mut out = m.clone();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            out.set(i, j, field.mul(m.get(i, j), c));
        }
    }
    out
}

pub(crate) fn apply_block(block: &FieldMatrix, v: &[u64]) -> Vec<u64> {
    block.mul_vec(v)
}

/// Dense coordinates of a sparse flat-index vector restricted to one degree.
pub(crate) fn dense_at_degree(space: &GradedSpace, degree: i32, v: &[(usize, u64)]) -> Vec<u64> {
    let mut out = vec![0u64; space.dim(degree)];
    for &(g, c) in v {
        let (d, i) = space.from_global(g);
        if d == degree {
            out[i] = c;
        } else if c != 0 {
            panic!("sparse vector has entries outside degree {degree}");
        }
    }
    out
}
