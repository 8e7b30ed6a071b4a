//! JSON interchange documents for algebras and based modules.
//!
//! The algebra document is the input format of every CLI command:
//!
//! ```json
//! {"dim": 2, "labels": ["e", "s"], "unit_index": 0,
//!  "gamma": [[0,0,0,"1"], [0,1,1,"1"], [1,0,1,"1"], [1,1,0,"1"]]}
//! ```
//!
//! Rationals are decimal-free strings, `"p"` or `"p/q"`. Entries with value
//! zero are legal input and mean absence. Serialization is deterministic:
//! gamma triples come out in (i, j, k)-lexicographic order.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, PBAlgebra};
use crate::based_modules::{BasedModule, ModuleError};
use crate::linalg::QMatrix;
use crate::scalar::{format_rat, parse_rat};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad rational at {context}: {message}")]
    Rational { context: String, message: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Module(#[from] ModuleError),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraDoc {
    pub dim: usize,
    pub labels: Vec<String>,
    pub unit_index: usize,
    pub gamma: Vec<(usize, usize, usize, String)>,
}

impl AlgebraDoc {
    pub fn from_algebra(alg: &PBAlgebra) -> Self {
        Self {
            dim: alg.dim(),
            labels: alg.labels().to_vec(),
            unit_index: alg.unit_index(),
            gamma: alg
                .gamma_iter()
                .map(|(&(i, j, k), v)| (i, j, k, format_rat(v)))
                .collect(),
        }
    }

    pub fn into_algebra(self) -> Result<PBAlgebra, IoError> {
        let mut entries = Vec::with_capacity(self.gamma.len());
        for (i, j, k, s) in self.gamma {
            let v = parse_rat(&s).map_err(|message| IoError::Rational {
                context: format!("gamma[{i}, {j}, {k}]"),
                message,
            })?;
            entries.push((i, j, k, v));
        }
        Ok(PBAlgebra::new(
            self.dim,
            self.labels,
            self.unit_index,
            entries,
        )?)
    }
}

pub fn parse_algebra(json: &str) -> Result<PBAlgebra, IoError> {
    serde_json::from_str::<AlgebraDoc>(json)?.into_algebra()
}

pub fn algebra_to_json(alg: &PBAlgebra) -> String {
    serde_json::to_string_pretty(&AlgebraDoc::from_algebra(alg)).expect("document serializes")
}

/// Module document: one m-by-m matrix of rational strings per algebra basis
/// index, row-major.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModuleDoc {
    pub dim: usize,
    pub labels: Vec<String>,
    pub actions: Vec<Vec<Vec<String>>>,
}

impl ModuleDoc {
    pub fn from_module(m: &BasedModule) -> Self {
        Self {
            dim: m.dim(),
            labels: m.labels().to_vec(),
            actions: m
                .actions()
                .iter()
                .map(|mat| {
                    (0..mat.nrows())
                        .map(|r| mat.row(r).iter().map(format_rat).collect())
                        .collect()
                })
                .collect(),
        }
    }

    pub fn into_module(self, algebra: Arc<PBAlgebra>) -> Result<BasedModule, IoError> {
        let mut actions = Vec::with_capacity(self.actions.len());
        for (i, rows) in self.actions.into_iter().enumerate() {
            let mut parsed = Vec::with_capacity(rows.len());
            for (r, row) in rows.into_iter().enumerate() {
                let mut out = Vec::with_capacity(row.len());
                for (c, s) in row.into_iter().enumerate() {
                    out.push(parse_rat(&s).map_err(|message| IoError::Rational {
                        context: format!("actions[{i}][{r}][{c}]"),
                        message,
                    })?);
                }
                parsed.push(out);
            }
            actions.push(QMatrix::from_rows(parsed));
        }
        Ok(BasedModule::from_parts(algebra, self.labels, actions)?)
    }
}

pub fn module_to_json(m: &BasedModule) -> String {
    serde_json::to_string_pretty(&ModuleDoc::from_module(m)).expect("document serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cells::compute_cells;
    use crate::constructors::{from_cayley_table, monoid_closure, Transformation};

    fn t2() -> PBAlgebra {
        let t = monoid_closure(&[
            Transformation::new(vec![1, 0]).unwrap(),
            Transformation::new(vec![0, 0]).unwrap(),
        ])
        .unwrap();
        from_cayley_table(&t).unwrap()
    }

    #[test]
    fn algebra_round_trip_is_identity() {
        let alg = t2();
        let json = algebra_to_json(&alg);
        let back = parse_algebra(&json).unwrap();
        assert_eq!(alg, back);
    }

    #[test]
    fn serialization_is_deterministic() {
        let alg = t2();
        assert_eq!(algebra_to_json(&alg), algebra_to_json(&alg));
    }

    #[test]
    fn zero_entries_mean_absence() {
        let json = r#"{"dim":1,"labels":["e"],"unit_index":0,
                        "gamma":[[0,0,0,"0/5"]]}"#;
        let alg = parse_algebra(json).unwrap();
        assert_eq!(alg.gamma_iter().count(), 0);
    }

    #[test]
    fn bad_rational_is_reported_with_context() {
        let json = r#"{"dim":1,"labels":["e"],"unit_index":0,
                        "gamma":[[0,0,0,"0.5"]]}"#;
        let err = parse_algebra(json).unwrap_err();
        assert!(err.to_string().contains("gamma[0, 0, 0]"));
    }

    #[test]
    fn module_round_trip() {
        let alg = Arc::new(t2());
        let cd = compute_cells(&alg);
        let m = crate::based_modules::cell_module(&alg, &cd, 1).unwrap();
        let doc = ModuleDoc::from_module(&m);
        let json = serde_json::to_string(&doc).unwrap();
        let doc2: ModuleDoc = serde_json::from_str(&json).unwrap();
        let back = doc2.into_module(alg.clone()).unwrap();
        assert_eq!(back.dim(), m.dim());
        for i in 0..alg.dim() {
            assert_eq!(back.action(i), m.action(i));
        }
    }
}
