//! TOML document format for algebras and matrices.
//!
//! ```toml
//! name = "B2"
//! universe = ["0", "1"]
//! designated = ["1"]
//!
//! [[operator]]
//! symbol = "~"
//! arity = 1
//! table = ["1", "0"]
//! ```
//!
//! Tables list result labels row-major over the universe order. Omitting
//! `designated` describes a bare algebra.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{AlgebraError, FiniteAlgebra, Matrix};
use crate::syntax::Language;

#[derive(Debug, thiserror::Error)]
pub enum FileError {
    #[error("malformed document: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("could not serialize: {0}")]
    Serialize(#[from] toml::ser::Error),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("document has no designated set")]
    NotAMatrix,
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct OperatorDoc {
    pub symbol: String,
    pub arity: usize,
    pub table: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    universe: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    designated: Option<Vec<String>>,
    #[serde(default)]
    operator: Vec<OperatorDoc>,
}

/// Contents of a matrix document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixFile {
    pub name: Option<String>,
    pub algebra: FiniteAlgebra,
    pub designated: Option<BTreeSet<usize>>,
}

impl MatrixFile {
    pub fn from_matrix(name: Option<&str>, m: &Matrix) -> Self {
        MatrixFile {
            name: name.map(str::to_string),
            algebra: m.algebra().clone(),
            designated: Some(m.designated().clone()),
        }
    }

    pub fn from_algebra(name: Option<&str>, a: &FiniteAlgebra) -> Self {
        MatrixFile { name: name.map(str::to_string), algebra: a.clone(), designated: None }
    }

    pub fn into_matrix(self) -> Result<Matrix, FileError> {
        let d = self.designated.ok_or(FileError::NotAMatrix)?;
        Ok(Matrix::new(self.algebra, d)?)
    }

    pub fn parse(text: &str) -> Result<Self, FileError> {
        let doc: MatrixDoc = toml::from_str(text)?;
        let (algebra, designated) = build(&doc.universe, doc.designated.as_deref(), &doc.operator)?;
        Ok(MatrixFile { name: doc.name, algebra, designated })
    }

    pub fn render(&self) -> Result<String, FileError> {
        let a = &self.algebra;
        let doc = MatrixDoc {
            name: self.name.clone(),
            universe: a.universe().to_vec(),
            designated: self.designated.as_ref().map(|d| d.iter().map(|&i| a.label(i).to_string()).collect()),
            operator: operator_docs(a),
        };
        Ok(toml::to_string(&doc)?)
    }
}

pub(crate) fn operator_docs(a: &FiniteAlgebra) -> Vec<OperatorDoc> {
    a.lang()
        .operators()
        .map(|(op, arity)| OperatorDoc {
            symbol: op.to_string(),
            arity,
            table: a.table(op).unwrap().iter().map(|&i| a.label(i).to_string()).collect(),
        })
        .collect()
}

pub(crate) fn build(
    universe: &[String],
    designated: Option<&[String]>,
    ops: &[OperatorDoc],
) -> Result<(FiniteAlgebra, Option<BTreeSet<usize>>), FileError> {
    let lang = Language::new(ops.iter().map(|o| (o.symbol.as_str(), o.arity))).map_err(AlgebraError::from)?;
    let index = |l: &String| universe.iter().position(|u| u == l).ok_or_else(|| AlgebraError::UnknownLabel(l.clone()));
    let tables =
        ops.iter().map(|o| o.table.iter().map(index).collect::<Result<Vec<_>, _>>()).collect::<Result<Vec<_>, _>>()?;
    let algebra = FiniteAlgebra::new(lang, universe.to_vec(), tables)?;
    let designated = designated.map(|d| d.iter().map(index).collect::<Result<BTreeSet<_>, _>>()).transpose()?;
    if let Some(d) = &designated {
        Matrix::new(algebra.clone(), d.clone())?;
    }
    Ok((algebra, designated))
}

pub fn load_matrix(text: &str) -> Result<Matrix, FileError> {
    MatrixFile::parse(text)?.into_matrix()
}

pub fn store_matrix(name: Option<&str>, m: &Matrix) -> Result<String, FileError> {
    MatrixFile::from_matrix(name, m).render()
}
