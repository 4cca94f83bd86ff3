//! JSON state documents.
//!
//! ```json
//! {"dims": [3, 3], "kind": "pure",    "data": [[re, im], ...]}
//! {"dims": [3, 3], "kind": "density", "data": [[[re, im], ...], ...]}
//! ```
//!
//! Pure data is the flat row-major amplitude list `α_{ij}` (index `i*d_B+j`);
//! density data is a list of matrix rows. Documents are validated on read with
//! the same checks as [`PureState::new`] and [`DensityMatrix::new`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::states::{DensityMatrix, Dims, PureState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Pure,
    Density,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum StateData {
    Vector(Vec<[f64; 2]>),
    Matrix(Vec<Vec<[f64; 2]>>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateDocument {
    dims: [usize; 2],
    kind: StateKind,
    data: StateData,
}

/// A state read from or written to a document.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Pure(PureState),
    Density(DensityMatrix),
}

impl StateSpec {
    pub fn dims(&self) -> Dims {
        match self {
            StateSpec::Pure(p) => p.dims(),
            StateSpec::Density(d) => d.dims(),
        }
    }

    pub fn kind(&self) -> StateKind {
        match self {
            StateSpec::Pure(_) => StateKind::Pure,
            StateSpec::Density(_) => StateKind::Density,
        }
    }

    /// The density matrix of the state (the projector for pure states).
    pub fn density(&self) -> DensityMatrix {
        match self {
            StateSpec::Pure(p) => p.projector(),
            StateSpec::Density(d) => d.clone(),
        }
    }
}

fn pair(z: &C64) -> [f64; 2] {
    [z.re, z.im]
}

fn complex(p: &[f64; 2]) -> C64 {
    C64::new(p[0], p[1])
}

pub fn parse_state(text: &str) -> Result<StateSpec> {
    let doc: StateDocument = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let dims = Dims::new(doc.dims[0], doc.dims[1])?;
    match (doc.kind, doc.data) {
        (StateKind::Pure, StateData::Vector(v)) => {
            PureState::new(dims, v.iter().map(complex).collect()).map(StateSpec::Pure)
        }
        (StateKind::Density, StateData::Matrix(rows)) => {
            let rows: Vec<Vec<C64>> = rows
                .iter()
                .map(|r| r.iter().map(complex).collect())
                .collect();
            let m = ComplexMatrix::from_rows(&rows)?;
            DensityMatrix::new(dims, m).map(StateSpec::Density)
        }
        (StateKind::Pure, StateData::Matrix(_)) => Err(Error::Parse(
            "pure state data must be a flat list of [re, im] pairs".into(),
        )),
        (StateKind::Density, StateData::Vector(_)) => Err(Error::Parse(
            "density data must be a list of rows of [re, im] pairs".into(),
        )),
    }
}

pub fn read_state(path: &std::path::Path) -> Result<StateSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_state(&text)
}

/// Serializes a state. Floats use shortest round-trip formatting, so
/// `parse_state(&to_document(s))` reproduces `s` exactly.
pub fn to_document(state: &StateSpec) -> String {
    let doc = match state {
        StateSpec::Pure(p) => StateDocument {
            dims: p.dims().into(),
            kind: StateKind::Pure,
            data: StateData::Vector(p.amplitudes().iter().map(pair).collect()),
        },
        StateSpec::Density(d) => {
            let m = d.matrix();
            StateDocument {
                dims: d.dims().into(),
                kind: StateKind::Density,
                data: StateData::Matrix(
                    (0..m.nrows())
                        .map(|i| m.row(i).iter().map(pair).collect())
                        .collect(),
                ),
            }
        }
    };
    let mut text = serde_json::to_string(&doc).expect("state document serializes");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{maximally_entangled_qutrits, random_density, werner};

    #[test]
    fn pure_document_round_trip() {
        let s = StateSpec::Pure(maximally_entangled_qutrits());
        let text = to_document(&s);
        assert!(text.contains("\"kind\":\"pure\""));
        assert_eq!(parse_state(&text).unwrap(), s);
    }

    #[test]
    fn density_document_round_trip() {
        for s in [
            StateSpec::Density(werner(0.5).unwrap()),
            StateSpec::Density(random_density(4, Dims::QUTRITS, 3).unwrap()),
        ] {
            assert_eq!(parse_state(&to_document(&s)).unwrap(), s);
        }
    }

    #[test]
    fn handwritten_document() {
        let text = r#"{"dims": [2, 2], "kind": "pure",
            "data": [[0.6, 0], [0, 0], [0, 0], [0, 0.8]]}"#;
        let s = parse_state(text).unwrap();
        assert_eq!(s.kind(), StateKind::Pure);
        assert_eq!(s.dims(), Dims::QUBITS);
    }

    #[test]
    fn rejects_invalid_documents() {
        let unnormalized = r#"{"dims": [2, 2], "kind": "pure",
            "data": [[1, 0], [1, 0], [0, 0], [0, 0]]}"#;
        assert!(matches!(
            parse_state(unnormalized),
            Err(Error::InvalidNormalization { .. })
        ));

        let not_psd = r#"{"dims": [2, 2], "kind": "density", "data": [
            [[1.5, 0], [0, 0], [0, 0], [0, 0]],
            [[0, 0], [-0.5, 0], [0, 0], [0, 0]],
            [[0, 0], [0, 0], [0, 0], [0, 0]],
            [[0, 0], [0, 0], [0, 0], [0, 0]]]}"#;
        assert!(matches!(parse_state(not_psd), Err(Error::NotPsd { .. })));

        let wrong_shape = r#"{"dims": [2, 2], "kind": "density",
            "data": [[1, 0], [0, 0], [0, 0], [0, 0]]}"#;
        assert!(matches!(parse_state(wrong_shape), Err(Error::Parse(_))));

        let bad_dims = r#"{"dims": [4, 2], "kind": "pure", "data": []}"#;
        assert_eq!(parse_state(bad_dims), Err(Error::UnsupportedDimension(4)));

        assert!(matches!(parse_state("not json"), Err(Error::Parse(_))));
        assert!(matches!(
            parse_state(r#"{"dims":[2,2],"kind":"mixed","data":[]}"#),
            Err(Error::Parse(_))
        ));
    }
}
