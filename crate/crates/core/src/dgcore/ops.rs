//! Algebra-level operations: tensor products of DG algebras and the
//! annihilator test used by the syzygy construction.

use super::algebra::{make_algebra, AlgebraDescription, DGAlgebra, DgError};
use super::module::DGModule;
use crate::exactla::FieldMatrix;

/// The tensor product of two DG algebras over the common ground field, with
/// the Koszul sign rule `(c (x) d)(c' (x) d') = (-1)^{|d||c'|} cc' (x) dd'`.
/// The result goes through full validation.
pub fn tensor_algebras(c: &DGAlgebra, d: &DGAlgebra) -> Result<DGAlgebra, DgError> {
    assert_eq!(c.field(), d.field(), "tensor over different fields");
    let field = c.field();
    let top = c.top() + d.top();

    let pair_label = |cg: usize, dg: usize| {
        format!(
            "({})*({})",
            c.space().global_label(cg),
            d.space().global_label(dg)
        )
    };

    // basis per degree: C-degree ascending, then indices
    let mut basis: Vec<Vec<String>> = Vec::new();
    for n in 0..=top {
        let mut labels = Vec::new();
        for dc in 0..=n.min(c.top()) {
            let dd = n - dc;
            for i in 0..c.dim(dc) {
                for j in 0..d.dim(dd) {
                    labels.push(pair_label(
                        c.space().global_index(dc, i),
                        d.space().global_index(dd, j),
                    ));
                }
            }
        }
        basis.push(labels);
    }

    let mut diff = Vec::new();
    let mut mult = Vec::new();
    let nc = c.total_dim();
    let nd = d.total_dim();
    for cg in 0..nc {
        let dc = c.space().from_global(cg).0;
        for dg in 0..nd {
            let from = pair_label(cg, dg);
            // d(c (x) e) = dc (x) e + (-1)^{|c|} c (x) de
            for (t, coeff) in c.diff_basis(cg) {
                diff.push((from.clone(), pair_label(t, dg), coeff as i64));
            }
            let sign = if (dc & 1) == 1 { -1i64 } else { 1 };
            for (t, coeff) in d.diff_basis(dg) {
                diff.push((
                    from.clone(),
                    pair_label(cg, t),
                    sign * coeff as i64,
                ));
            }
        }
    }
    for cg in 0..nc {
        for dg in 0..nd {
            let a_label = pair_label(cg, dg);
            let ddeg = d.space().from_global(dg).0;
            for cg2 in 0..nc {
                let cdeg2 = c.space().from_global(cg2).0;
                let sign = if (ddeg & 1) == 1 && (cdeg2 & 1) == 1 {
                    -1i64
                } else {
                    1
                };
                let cc = c.product_basis(cg, cg2).to_vec();
                for dg2 in 0..nd {
                    let b_label = pair_label(cg2, dg2);
                    let dd2 = d.product_basis(dg, dg2);
                    for &(tc, coeff_c) in &cc {
                        for &(td, coeff_d) in dd2 {
                            let coeff =
                                field.signed(field.mul(coeff_c, coeff_d), sign as i32);
                            mult.push((
                                a_label.clone(),
                                b_label.clone(),
                                pair_label(tc, td),
                                coeff as i64,
                            ));
                        }
                    }
                }
            }
        }
    }

    let unit = pair_label(c.unit_global(), d.unit_global());
    make_algebra(&AlgebraDescription {
        characteristic: field.characteristic(),
        basis,
        unit,
        diff,
        mult,
    })
}

/// True iff the annihilator of the positive part, Ann_A(A_+), kills X.
/// The annihilator is computed degreewise as the exact kernel of the
/// multiplication-by-A_+ system.
pub fn annihilator_check(x: &DGModule) -> bool {
    let algebra = x.algebra();
    let ann = annihilator_of_positive_part(algebra);
    for v in &ann {
        for xs in 0..x.space().total_dim() {
            if !x.act_list(v, &[(xs, 1)]).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Basis (as sparse flat-index vectors) of { a in A : a . A_+ = 0 }.
pub fn annihilator_of_positive_part(algebra: &DGAlgebra) -> Vec<Vec<(usize, u64)>> {
    let field = algebra.field();
    let space = algebra.space();
    let positive = algebra.positive_basis();
    let mut out = Vec::new();
    for da in 0..=algebra.top() {
        let na = algebra.dim(da);
        if na == 0 {
            continue;
        }
        // rows: for each positive basis b, the block of a*b over its degree
        let mut rows: Vec<Vec<u64>> = Vec::new();
        for &b in &positive {
            let db = space.from_global(b).0;
            let target_dim = algebra.dim(da + db);
            if target_dim == 0 {
                continue;
            }
            let mut block: Vec<Vec<u64>> = vec![vec![0; na]; target_dim];
            for i in 0..na {
                let ga = space.global_index(da, i);
                for &(t, coeff) in algebra.product_basis(ga, b) {
                    let (_, ti) = space.from_global(t);
                    block[ti][i] = coeff;
                }
            }
            rows.extend(block);
        }
        let mut m = FieldMatrix::zeros(field, rows.len(), na);
        for (i, row) in rows.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                m.set(i, j, c);
            }
        }
        let kernel = m.rank_kernel_image().kernel;
        for k in 0..kernel.cols() {
            let col = kernel.column(k);
            let v: Vec<(usize, u64)> = col
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(i, &c)| (space.global_index(da, i), c))
                .collect();
            out.push(v);
        }
    }
    out
}

