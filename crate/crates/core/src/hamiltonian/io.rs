//! JSON model files.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::model::{OperatorTerm, SiteOp, SpinModel};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    name: String,
    sites: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
    terms: Vec<TermFile>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermFile {
    coeff: f64,
    factors: Vec<FactorFile>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FactorFile {
    site: usize,
    op: OpFile,
}

/// "X" | "Y" | "Z", or a row-major list of d² [re, im] pairs.
#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum OpFile {
    Named(String),
    Matrix(Vec<[f64; 2]>),
}

pub fn model_from_json(text: &str) -> Result<SpinModel> {
    let file: ModelFile =
        serde_json::from_str(text).map_err(|e| Error::InvalidModel(format!("model JSON: {e}")))?;
    let mut terms = Vec::with_capacity(file.terms.len());
    for (t, term) in file.terms.into_iter().enumerate() {
        let mut factors = Vec::with_capacity(term.factors.len());
        for f in term.factors {
            let op = match f.op {
                OpFile::Named(name) => match name.as_str() {
                    "X" => SiteOp::X,
                    "Y" => SiteOp::Y,
                    "Z" => SiteOp::Z,
                    other => {
                        return Err(Error::InvalidModel(format!(
                            "term {t}: unknown operator {other:?}"
                        )))
                    }
                },
                OpFile::Matrix(entries) => {
                    let d = (entries.len() as f64).sqrt().round() as usize;
                    if d * d != entries.len() {
                        return Err(Error::InvalidModel(format!(
                            "term {t}: {} matrix entries is not a square count",
                            entries.len()
                        )));
                    }
                    let data = entries.iter().map(|[re, im]| C64::new(*re, *im)).collect();
                    SiteOp::Matrix(ComplexMatrix::new(d, d, data)?)
                }
            };
            factors.push((f.site, op));
        }
        terms.push(OperatorTerm::new(term.coeff, factors));
    }
    match file.labels {
        Some(labels) => SpinModel::with_labels(file.name, file.sites, labels, terms),
        None => SpinModel::new(file.name, file.sites, terms),
    }
}

pub fn model_to_json(model: &SpinModel) -> String {
    let file = ModelFile {
        name: model.name.clone(),
        sites: model.sites().to_vec(),
        labels: Some(model.labels().to_vec()),
        terms: model
            .terms()
            .iter()
            .map(|t| TermFile {
                coeff: t.coefficient,
                factors: t
                    .factors
                    .iter()
                    .map(|f| FactorFile {
                        site: f.site,
                        op: match &f.op {
                            SiteOp::X => OpFile::Named("X".into()),
                            SiteOp::Y => OpFile::Named("Y".into()),
                            SiteOp::Z => OpFile::Named("Z".into()),
                            SiteOp::Matrix(m) => {
                                OpFile::Matrix(m.data().iter().map(|z| [z.re, z.im]).collect())
                            }
                        },
                    })
                    .collect(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("model serializes")
}

pub fn load_model(path: &Path) -> Result<SpinModel> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidModel(format!("{}: {e}", path.display())))?;
    model_from_json(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::builtin::chain3;
    use crate::random::{random_two_site_model, seeded_rng};

    #[test]
    fn parses_pauli_and_matrix_ops() {
        let text = r#"{
            "name": "demo",
            "sites": [2, 2],
            "terms": [
                {"coeff": -1.0, "factors": [{"site": 0, "op": "Z"}, {"site": 1, "op": "Z"}]},
                {"coeff": 0.5, "factors": [{"site": 1, "op": [[0,0],[1,0],[1,0],[0,0]]}]}
            ]
        }"#;
        let m = model_from_json(text).unwrap();
        assert_eq!(m.terms().len(), 2);
        assert_eq!(m.terms()[1].factors[0].op.matrix(), crate::linalg::sigma_x());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(model_from_json("{").is_err());
        let unknown = r#"{"name":"m","sites":[2],"terms":[{"coeff":1,"factors":[{"site":0,"op":"W"}]}]}"#;
        assert!(matches!(model_from_json(unknown), Err(Error::InvalidModel(_))));
        let ragged = r#"{"name":"m","sites":[2],"terms":[{"coeff":1,"factors":[{"site":0,"op":[[1,0],[0,0],[0,0]]}]}]}"#;
        assert!(model_from_json(ragged).is_err());
        let nonherm = r#"{"name":"m","sites":[2],"terms":[{"coeff":1,"factors":[{"site":0,"op":[[0,0],[1,0],[0,0],[0,0]]}]}]}"#;
        assert!(matches!(model_from_json(nonherm), Err(Error::NonHermitianTerm { .. })));
    }

    #[test]
    fn round_trip() {
        let mut rng = seeded_rng(4);
        for m in [chain3(1.0, 2.0, 3.0), random_two_site_model(&mut rng, 3)] {
            let back = model_from_json(&model_to_json(&m)).unwrap();
            assert_eq!(back, m);
        }
    }
}
