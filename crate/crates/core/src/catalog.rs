//! Built-in matrices and Hilbert systems, loaded from the files under
//! `catalog/`.

use std::fmt;

use crate::classes::Class;
use crate::hilbert::format::{parse_system, FormatError};
use crate::hilbert::HilbertSystem;
use crate::matrix::file::{load_matrix, store_matrix, FileError};
use crate::matrix::{FiniteAlgebra, Matrix};
use crate::plonka::{adjoin_contaminating, PlonkaError};

/// Suffix marking the one-point contaminating extension of a matrix.
pub const OMEGA_SUFFIX: &str = "+w";

struct MatrixSource {
    id: &'static str,
    text: &'static str,
    class: Option<Class>,
    note: &'static str,
}

const MATRICES: &[MatrixSource] = &[
    MatrixSource {
        id: "B2",
        text: include_str!("../catalog/B2.toml"),
        class: Some(Class::Heyting),
        note: "two-element Boolean algebra, 1 designated",
    },
    MatrixSource {
        id: "H3",
        text: include_str!("../catalog/H3.toml"),
        class: Some(Class::Heyting),
        note: "three-element Heyting chain, 1 designated",
    },
    MatrixSource {
        id: "prerough3",
        text: include_str!("../catalog/prerough3.toml"),
        // As tabulated, with Ia = Ca = a; this breaks `~Ia | Ia = 1`, so no
        // class claim.
        class: None,
        note: "three-element pre-rough table with I and C the identity, 1 designated",
    },
    MatrixSource {
        id: "prerough3-std",
        text: include_str!("../catalog/prerough3-std.toml"),
        class: Some(Class::PreRough),
        note: "three-element pre-rough algebra with Ia = 0 and Ca = 1, 1 designated",
    },
    MatrixSource {
        id: "M3",
        text: include_str!("../catalog/M3.toml"),
        class: None,
        note: "characteristic matrix of RM3",
    },
    MatrixSource {
        id: "PS3",
        text: include_str!("../catalog/PS3.toml"),
        class: None,
        note: "characteristic matrix of LPS3",
    },
    MatrixSource {
        id: "trivial",
        text: include_str!("../catalog/trivial.toml"),
        class: None,
        note: "one-element matrix in the Heyting language",
    },
];

struct SystemSource {
    id: &'static str,
    text: &'static str,
    note: &'static str,
}

const SYSTEMS: &[SystemSource] = &[
    SystemSource { id: "minimal", text: include_str!("../catalog/minimal.sys"), note: "two lattice rules" },
    SystemSource {
        id: "minimal-re",
        text: include_str!("../catalog/minimal-re.sys"),
        note: "restricted rules companion of minimal",
    },
    SystemSource { id: "IPC", text: include_str!("../catalog/IPC.sys"), note: "A1-A10 with modus ponens" },
    SystemSource {
        id: "HIPWK",
        text: include_str!("../catalog/HIPWK.sys"),
        note: "A1-A10 with restricted modus ponens",
    },
    SystemSource { id: "CPC", text: include_str!("../catalog/CPC.sys"), note: "IPC plus ~~a -> a" },
    SystemSource { id: "HPRL", text: include_str!("../catalog/HPRL.sys"), note: "pre-rough logic" },
    SystemSource {
        id: "HPRL-re",
        text: include_str!("../catalog/HPRL-re.sys"),
        note: "pre-rough logic with RMP and RHS",
    },
    SystemSource { id: "RM3", text: include_str!("../catalog/RM3.sys"), note: "relevance-mingle logic" },
    SystemSource { id: "LPS3", text: include_str!("../catalog/LPS3.sys"), note: "LPS3, bot expanded via p0" },
];

/// Algebra entries: reducts that carry a class claim of their own.
const ALGEBRAS: &[(&str, &str, Class, &str)] =
    &[("M3-qb", "M3", Class::QuasiBoolean, "{&, |, ~}-reduct of M3 with 0 and 1 named")];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Matrix,
    Algebra,
    System,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Matrix => "matrix",
            Kind::Algebra => "algebra",
            Kind::System => "system",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Payload {
    Matrix(Matrix),
    Algebra(FiniteAlgebra),
    System(HilbertSystem),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub id: String,
    pub payload: Payload,
    /// The class the algebra is claimed to belong to, if any.
    pub class: Option<Class>,
    pub note: String,
    /// Checked-in text; derived entries have none.
    pub source: Option<&'static str>,
}

impl CatalogEntry {
    pub fn kind(&self) -> Kind {
        match self.payload {
            Payload::Matrix(_) => Kind::Matrix,
            Payload::Algebra(_) => Kind::Algebra,
            Payload::System(_) => Kind::System,
        }
    }

    /// The definition as text: the checked-in file where there is one.
    pub fn render(&self) -> String {
        if let Some(text) = self.source {
            return text.to_string();
        }
        match &self.payload {
            Payload::Matrix(m) => store_matrix(Some(&self.id), m).expect("catalog matrices serialize"),
            Payload::Algebra(a) => crate::matrix::file::MatrixFile::from_algebra(Some(&self.id), a)
                .render()
                .expect("catalog algebras serialize"),
            Payload::System(s) => s.to_string(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CatalogError {
    #[error("no catalog entry `{0}`")]
    Unknown(String),
    #[error("`{0}` is a {1}, not a {2}")]
    WrongKind(String, Kind, Kind),
    #[error("catalog file for `{id}`: {source}")]
    Matrix { id: String, source: FileError },
    #[error("catalog file for `{id}`: {source}")]
    System { id: String, source: FormatError },
    #[error(transparent)]
    Plonka(#[from] PlonkaError),
}

/// Every id, checked-in entries first, then derived ones.
pub fn catalog_ids() -> Vec<String> {
    let mut ids: Vec<String> = MATRICES.iter().map(|m| m.id.to_string()).collect();
    ids.extend(MATRICES.iter().map(|m| format!("{}{OMEGA_SUFFIX}", m.id)));
    ids.extend(ALGEBRAS.iter().map(|a| a.0.to_string()));
    ids.extend(SYSTEMS.iter().map(|s| s.id.to_string()));
    ids
}

fn base_matrix(src: &MatrixSource) -> Result<Matrix, CatalogError> {
    load_matrix(src.text).map_err(|source| CatalogError::Matrix { id: src.id.to_string(), source })
}

pub fn catalog_get(id: &str) -> Result<CatalogEntry, CatalogError> {
    if let Some(src) = MATRICES.iter().find(|m| m.id == id) {
        return Ok(CatalogEntry {
            id: id.to_string(),
            payload: Payload::Matrix(base_matrix(src)?),
            class: src.class,
            note: src.note.to_string(),
            source: Some(src.text),
        });
    }
    if let Some(base) = id.strip_suffix(OMEGA_SUFFIX) {
        if let Some(src) = MATRICES.iter().find(|m| m.id == base) {
            return Ok(CatalogEntry {
                id: id.to_string(),
                payload: Payload::Matrix(adjoin_contaminating(&base_matrix(src)?)?),
                class: None,
                note: format!("{base} with a contaminating designated element w"),
                source: None,
            });
        }
    }
    if let Some(&(aid, base, class, note)) = ALGEBRAS.iter().find(|a| a.0 == id) {
        let m = matrix(base)?;
        let alg = m
            .algebra()
            .reduct(&["&", "|", "~"])
            .with_constants(&[("0", "0"), ("1", "1")])
            .map_err(|e| CatalogError::Matrix { id: aid.to_string(), source: e.into() })?;
        return Ok(CatalogEntry {
            id: id.to_string(),
            payload: Payload::Algebra(alg),
            class: Some(class),
            note: note.to_string(),
            source: None,
        });
    }
    if let Some(src) = SYSTEMS.iter().find(|s| s.id == id) {
        let system = parse_system(src.text).map_err(|source| CatalogError::System { id: id.to_string(), source })?;
        return Ok(CatalogEntry {
            id: id.to_string(),
            payload: Payload::System(system),
            class: None,
            note: src.note.to_string(),
            source: Some(src.text),
        });
    }
    Err(CatalogError::Unknown(id.to_string()))
}

pub fn matrix(id: &str) -> Result<Matrix, CatalogError> {
    let e = catalog_get(id)?;
    match e.payload {
        Payload::Matrix(m) => Ok(m),
        _ => Err(CatalogError::WrongKind(id.to_string(), e.kind(), Kind::Matrix)),
    }
}

pub fn system(id: &str) -> Result<HilbertSystem, CatalogError> {
    let e = catalog_get(id)?;
    match e.payload {
        Payload::System(s) => Ok(s),
        _ => Err(CatalogError::WrongKind(id.to_string(), e.kind(), Kind::System)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{restricted_system, restriction_changes, SideCondition};
    use crate::matrix::{evaluate, Valuation};
    use crate::syntax::parse_formula;
    use std::collections::BTreeSet;

    fn table_row(id: &str, op: &str, row: &str) -> Vec<String> {
        let m = matrix(id).unwrap();
        let a = m.algebra();
        let x = a.index_of(row).unwrap();
        (0..a.size()).map(|y| a.label(a.apply(op, &[x, y])).to_string()).collect()
    }

    #[test]
    fn every_entry_loads_and_ids_are_unique() {
        let ids = catalog_ids();
        assert_eq!(ids.iter().collect::<BTreeSet<_>>().len(), ids.len());
        for id in &ids {
            catalog_get(id).unwrap_or_else(|e| panic!("{id}: {e}"));
        }
        assert!(matches!(catalog_get("nope"), Err(CatalogError::Unknown(_))));
    }

    #[test]
    fn table_rows() {
        assert_eq!(table_row("M3", "->", "1"), ["1", "0", "0"]);
        assert_eq!(table_row("PS3", "->", "1"), ["1", "1", "0"]);
        let r = matrix("prerough3").unwrap();
        let a = r.algebra();
        let x = a.index_of("a").unwrap();
        for op in ["~", "I", "C"] {
            assert_eq!(a.apply(op, &[x]), x);
        }
    }

    #[test]
    fn class_claims() {
        for id in catalog_ids() {
            let e = catalog_get(&id).unwrap();
            let Some(class) = e.class else { continue };
            let alg = match &e.payload {
                Payload::Matrix(m) => m.algebra().clone(),
                Payload::Algebra(a) => a.clone(),
                Payload::System(_) => unreachable!(),
            };
            assert!(class.contains(&alg).unwrap(), "{id} is not {}", class.name());
        }
    }

    #[test]
    fn tabulated_prerough_breaks_the_definition() {
        let a = matrix("prerough3").unwrap().algebra().clone();
        assert!(!crate::classes::is_pre_rough(&a).unwrap());
        let found =
            crate::classes::enumerate_algebras(Class::PreRough, &crate::syntax::Language::pre_rough(), 3).unwrap();
        let std = matrix("prerough3-std").unwrap().algebra().clone();
        assert!(found.iter().any(|f| crate::matrix::isomorphism(f, &std).is_some()));
        assert!(found.iter().all(|f| crate::matrix::isomorphism(f, &a).is_none()));
    }

    #[test]
    fn checked_in_matrices_are_canonical() {
        for src in MATRICES {
            let m = base_matrix(src).unwrap();
            assert_eq!(store_matrix(Some(src.id), &m).unwrap(), src.text, "{}", src.id);
        }
    }

    #[test]
    fn systems_restrict_as_expected() {
        let ipc = system("IPC").unwrap();
        let hipwk = system("HIPWK").unwrap();
        let re = restricted_system(&ipc);
        assert_eq!(re.axioms, hipwk.axioms);
        assert_eq!(re.rules, hipwk.rules);

        let hprl = system("HPRL").unwrap();
        let changes = restriction_changes(&hprl);
        let changed: Vec<&str> = changes.iter().filter(|c| c.changed).map(|c| c.restricted.as_str()).collect();
        assert_eq!(changed, ["RMP", "RHS"]);
        let paper_re = system("HPRL-re").unwrap();
        assert_eq!(
            paper_re.rules[1].condition,
            Some(SideCondition::Custom { covered: vec!["b".into()], by: vec!["a".into(), "c".into()] })
        );
        assert_eq!(&paper_re.rules[2..], &hprl.rules[2..]);

        let minimal = restricted_system(&system("minimal").unwrap());
        let checked_in = system("minimal-re").unwrap();
        assert_eq!(minimal.rules, checked_in.rules);
    }

    #[test]
    fn bot_is_constant_false_in_ps3() {
        let m = matrix("PS3").unwrap();
        let a = m.algebra();
        let bot = parse_formula("~(p0 -> p0)", m.lang()).unwrap();
        let zero = a.index_of("0").unwrap();
        for x in 0..a.size() {
            assert_eq!(evaluate(&bot, &Valuation::new().with("p0", x), a).unwrap(), zero);
        }
        let lps3 = system("LPS3").unwrap();
        assert_eq!(lps3.axiom("A13").unwrap(), &parse_formula("~(p0 -> p0) -> a", m.lang()).unwrap());
    }

    #[test]
    fn omega_extensions() {
        let m = matrix("B2+w").unwrap();
        assert_eq!(m.algebra().universe(), ["0", "1", "w"]);
        assert_eq!(m.designated_labels(), ["1", "w"]);
        assert!(matches!(system("B2"), Err(CatalogError::WrongKind(..))));
    }
}
