//! The on-disk algebra format and its bit-exact round trip.
//!
//! ```json
//! { "char": p,
//!   "basis": [["1"], ["e1", "e2"], ...],
//!   "unit": "1",
//!   "diff": [["e1", "x", 1], ...],
//!   "mult": [["e1", "e2", "e1^e2", 1], ...] }
//! ```
//!
//! Serialization is canonical (entries sorted by flat basis index, canonical
//! residues), so serialize -> parse reproduces identical tables.

use super::algebra::{make_algebra, AlgebraDescription, DGAlgebra, DgError};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct AlgebraJson {
    #[serde(rename = "char")]
    pub characteristic: u64,
    pub basis: Vec<Vec<String>>,
    pub unit: String,
    pub diff: Vec<(String, String, u64)>,
    pub mult: Vec<(String, String, String, u64)>,
}

pub fn algebra_to_json(a: &DGAlgebra) -> AlgebraJson {
    let space = a.space();
    let n = a.total_dim();
    let mut basis = Vec::new();
    for d in 0..=a.top() {
        basis.push(space.labels_at(d).to_vec());
    }
    let mut diff = Vec::new();
    for g in 0..n {
        for (t, c) in a.diff_basis(g) {
            diff.push((
                space.global_label(g).to_string(),
                space.global_label(t).to_string(),
                c,
            ));
        }
    }
    let mut mult = Vec::new();
    for ga in 0..n {
        for gb in 0..n {
            for &(t, c) in a.product_basis(ga, gb) {
                mult.push((
                    space.global_label(ga).to_string(),
                    space.global_label(gb).to_string(),
                    space.global_label(t).to_string(),
                    c,
                ));
            }
        }
    }
    AlgebraJson {
        characteristic: a.field().characteristic(),
        basis,
        unit: space.global_label(a.unit_global()).to_string(),
        diff,
        mult,
    }
}

pub fn algebra_from_json(j: &AlgebraJson) -> Result<DGAlgebra, DgError> {
    let desc = AlgebraDescription {
        characteristic: j.characteristic,
        basis: j.basis.clone(),
        unit: j.unit.clone(),
        diff: j
            .diff
            .iter()
            .map(|(f, t, c)| (f.clone(), t.clone(), *c as i64))
            .collect(),
        mult: j
            .mult
            .iter()
            .map(|(a, b, c, e)| (a.clone(), b.clone(), c.clone(), *e as i64))
            .collect(),
    };
    make_algebra(&desc)
}

pub fn algebra_to_json_string(a: &DGAlgebra) -> String {
    serde_json::to_string_pretty(&algebra_to_json(a)).expect("algebra serializes")
}

pub fn algebra_from_json_str(s: &str) -> Result<DGAlgebra, DgError> {
    let j: AlgebraJson = serde_json::from_str(s)
        .map_err(|e| DgError::Structure(format!("algebra JSON parse error: {e}")))?;
    algebra_from_json(&j)
}
