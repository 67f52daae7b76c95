//! TOML format for directed systems.
//!
//! ```toml
//! [index]
//! elements = ["0", "1"]
//! join = ["0", "1", "1", "1"]
//!
//! [[operator]]
//! symbol = "~"
//! arity = 1
//!
//! [[component]]
//! index = "0"
//! universe = ["0", "1"]
//! designated = ["1"]
//! tables = { "~" = ["1", "0"] }
//!
//! [[component]]
//! index = "1"
//! universe = ["w"]
//! designated = ["w"]
//! tables = { "~" = ["w"] }
//!
//! [[hom]]
//! from = "0"
//! to = "1"
//! map = ["w", "w"]
//! ```
//!
//! Either every component has `designated` (a system of matrices) or none
//! does. Maps `f_ii` may be omitted.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{DirectedSystem, MatrixSystem, SemilatticeIndex};
use crate::matrix::file::{build, FileError, OperatorDoc};
use crate::matrix::FiniteAlgebra;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IndexDoc {
    elements: Vec<String>,
    join: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SignatureDoc {
    symbol: String,
    arity: usize,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComponentDoc {
    index: String,
    universe: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    designated: Option<Vec<String>>,
    tables: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HomDoc {
    from: String,
    to: String,
    map: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    index: IndexDoc,
    operator: Vec<SignatureDoc>,
    component: Vec<ComponentDoc>,
    #[serde(default)]
    hom: Vec<HomDoc>,
}

/// A parsed directed-system document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SystemFile {
    Algebras(DirectedSystem),
    Matrices(MatrixSystem),
}

fn invalid(msg: impl Into<String>) -> FileError {
    FileError::Invalid(msg.into())
}

pub fn load_system(text: &str) -> Result<SystemFile, FileError> {
    let doc: SystemDoc = toml::from_str(text)?;
    let elements = doc.index.elements.clone();
    let pos = |l: &str| elements.iter().position(|e| e == l).ok_or_else(|| invalid(format!("unknown index `{l}`")));
    let join = doc.index.join.iter().map(|l| pos(l)).collect::<Result<Vec<_>, _>>()?;
    let index = SemilatticeIndex::new(elements.clone(), join).map_err(|e| invalid(e.to_string()))?;

    let mut slots: Vec<Option<(FiniteAlgebra, Option<_>)>> = vec![None; elements.len()];
    for c in &doc.component {
        let i = pos(&c.index)?;
        if slots[i].is_some() {
            return Err(invalid(format!("index `{}` has two components", c.index)));
        }
        let ops =
            doc.operator
                .iter()
                .map(|s| {
                    let table =
                        c.tables.get(&s.symbol).cloned().ok_or_else(|| {
                            invalid(format!("component `{}` has no table for `{}`", c.index, s.symbol))
                        })?;
                    Ok(OperatorDoc { symbol: s.symbol.clone(), arity: s.arity, table })
                })
                .collect::<Result<Vec<_>, FileError>>()?;
        if let Some(extra) = c.tables.keys().find(|k| !doc.operator.iter().any(|s| &s.symbol == *k)) {
            return Err(invalid(format!("component `{}` has a table for undeclared `{extra}`", c.index)));
        }
        slots[i] = Some(build(&c.universe, c.designated.as_deref(), &ops)?);
    }
    let comps = slots
        .into_iter()
        .enumerate()
        .map(|(i, s)| s.ok_or_else(|| invalid(format!("index `{}` has no component", elements[i]))))
        .collect::<Result<Vec<_>, _>>()?;

    let mut homs = BTreeMap::new();
    for h in &doc.hom {
        let (i, j) = (pos(&h.from)?, pos(&h.to)?);
        let target = &comps[j].0;
        let map = h
            .map
            .iter()
            .map(|l| {
                target.index_of(l).ok_or_else(|| invalid(format!("map {} -> {}: unknown label `{l}`", h.from, h.to)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if homs.insert((i, j), map).is_some() {
            return Err(invalid(format!("map {} -> {} given twice", h.from, h.to)));
        }
    }

    let marked = comps.iter().filter(|c| c.1.is_some()).count();
    let (algebras, designated): (Vec<_>, Vec<_>) = comps.into_iter().unzip();
    let system = DirectedSystem { index, algebras, homs };
    match marked {
        0 => Ok(SystemFile::Algebras(system)),
        n if n == system.algebras.len() => {
            Ok(SystemFile::Matrices(MatrixSystem { system, designated: designated.into_iter().flatten().collect() }))
        }
        _ => Err(invalid("either all components or none must have a designated set")),
    }
}

pub fn store_system(name: Option<&str>, file: &SystemFile) -> Result<String, FileError> {
    let (sys, designated) = match file {
        SystemFile::Algebras(s) => (s, None),
        SystemFile::Matrices(m) => (&m.system, Some(&m.designated)),
    };
    let labels = sys.index.elements();
    let doc = SystemDoc {
        name: name.map(str::to_string),
        index: IndexDoc {
            elements: labels.to_vec(),
            join: (0..labels.len() * labels.len())
                .map(|k| labels[sys.index.join(k / labels.len(), k % labels.len())].clone())
                .collect(),
        },
        operator: sys.lang().operators().map(|(s, a)| SignatureDoc { symbol: s.to_string(), arity: a }).collect(),
        component: sys
            .algebras
            .iter()
            .enumerate()
            .map(|(i, a)| ComponentDoc {
                index: labels[i].clone(),
                universe: a.universe().to_vec(),
                designated: designated.map(|d| d[i].iter().map(|&x| a.label(x).to_string()).collect()),
                tables: crate::matrix::file::operator_docs(a).into_iter().map(|o| (o.symbol, o.table)).collect(),
            })
            .collect(),
        hom: sys
            .homs
            .iter()
            .map(|(&(i, j), map)| HomDoc {
                from: labels[i].clone(),
                to: labels[j].clone(),
                map: map.iter().map(|&x| sys.algebras[j].label(x).to_string()).collect(),
            })
            .collect(),
    };
    Ok(toml::to_string(&doc)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plonka::plonka_sum_matrices;

    const DOC: &str = r#"
[index]
elements = ["0", "1"]
join = ["0", "1", "1", "1"]

[[operator]]
symbol = "~"
arity = 1

[[component]]
index = "0"
universe = ["0", "1"]
designated = ["1"]
tables = { "~" = ["1", "0"] }

[[component]]
index = "1"
universe = ["w"]
designated = ["w"]
tables = { "~" = ["w"] }

[[hom]]
from = "0"
to = "1"
map = ["w", "w"]
"#;

    #[test]
    fn parses_and_round_trips() {
        let f = load_system(DOC).unwrap();
        let SystemFile::Matrices(m) = &f else { panic!("expected matrices") };
        let sum = plonka_sum_matrices(m).unwrap();
        assert_eq!(sum.algebra().size(), 3);
        let once = store_system(None, &f).unwrap();
        assert_eq!(load_system(&once).unwrap(), f);
        assert_eq!(store_system(None, &load_system(&once).unwrap()).unwrap(), once);
    }

    #[test]
    fn reports_structural_problems() {
        let partial = DOC.replacen("designated = [\"w\"]\n", "", 1);
        assert!(matches!(load_system(&partial), Err(FileError::Invalid(_))));
        let missing = DOC.replace("tables = { \"~\" = [\"w\"] }", "tables = {}");
        assert!(matches!(load_system(&missing), Err(FileError::Invalid(_))));
        let bad_map = DOC.replace("map = [\"w\", \"w\"]", "map = [\"w\", \"q\"]");
        assert!(matches!(load_system(&bad_map), Err(FileError::Invalid(_))));
    }
}
