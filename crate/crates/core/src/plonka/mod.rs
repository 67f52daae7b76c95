//! Directed systems over finite join semilattices and their Płonka sums.

pub mod file;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::matrix::{homomorphism_violation, tuples, FiniteAlgebra, Matrix};
use crate::syntax::Language;

/// Label of the contaminating element adjoined by [`adjoin_contaminating`].
pub const OMEGA: &str = "w";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PlonkaError {
    #[error("invalid directed system:\n{}", list(.0))]
    Invalid(Vec<Violation>),
    #[error("element label `{OMEGA}` is reserved for the contaminating element")]
    ReservedLabel,
    #[error("{0}")]
    Shape(String),
}

fn list(vs: &[Violation]) -> String {
    vs.iter().map(|v| format!("  {v}")).collect::<Vec<_>>().join("\n")
}

/// A finite join semilattice given by its join table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemilatticeIndex {
    elements: Vec<String>,
    join: Vec<usize>,
}

impl SemilatticeIndex {
    pub fn new(elements: Vec<String>, join: Vec<usize>) -> Result<Self, PlonkaError> {
        let n = elements.len();
        if n == 0 {
            return Err(PlonkaError::Shape("index has no elements".into()));
        }
        if join.len() != n * n || join.iter().any(|&j| j >= n) {
            return Err(PlonkaError::Shape(format!("join table must have {} entries below {n}", n * n)));
        }
        Ok(SemilatticeIndex { elements, join })
    }

    /// The chain `0 < 1 < ... < n-1`, labelled by position.
    pub fn chain(n: usize) -> Self {
        let elements = (0..n).map(|i| i.to_string()).collect();
        let join = (0..n * n).map(|k| (k / n).max(k % n)).collect();
        SemilatticeIndex { elements, join }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == label)
    }

    pub fn join(&self, i: usize, j: usize) -> usize {
        self.join[i * self.len() + j]
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.join(i, j) == j
    }

    pub fn bottom(&self) -> Option<usize> {
        (0..self.len()).find(|&b| (0..self.len()).all(|i| self.join(b, i) == i))
    }

    fn violations(&self) -> Vec<Violation> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            if self.join(i, i) != i {
                out.push(Violation::IndexNotIdempotent { i });
            }
            for j in 0..n {
                if i < j && self.join(i, j) != self.join(j, i) {
                    out.push(Violation::IndexNotCommutative { i, j });
                }
                for k in 0..n {
                    if self.join(self.join(i, j), k) != self.join(i, self.join(j, k)) {
                        out.push(Violation::IndexNotAssociative { i, j, k });
                    }
                }
            }
        }
        out
    }
}

/// A failed condition of a directed system, with the offending indices and
/// elements (all as positions).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    IndexNotIdempotent {
        i: usize,
    },
    IndexNotCommutative {
        i: usize,
        j: usize,
    },
    IndexNotAssociative {
        i: usize,
        j: usize,
        k: usize,
    },
    NoBottom,
    ComponentCount {
        expected: usize,
        found: usize,
    },
    LanguageMismatch {
        index: usize,
    },
    MissingHom {
        from: usize,
        to: usize,
    },
    UnorderedHom {
        from: usize,
        to: usize,
    },
    MapShape {
        from: usize,
        to: usize,
    },
    NotHomomorphism {
        from: usize,
        to: usize,
        op: String,
        args: Vec<usize>,
    },
    /// `f_ii` moves an element.
    IdentityFails {
        index: usize,
        element: usize,
    },
    /// `f_jk(f_ij(a)) ≠ f_ik(a)`.
    CompositionFails {
        i: usize,
        j: usize,
        k: usize,
        element: usize,
    },
    DesignatedNotPreserved {
        from: usize,
        to: usize,
        element: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            IndexNotIdempotent { i } => write!(f, "index join not idempotent at {i}"),
            IndexNotCommutative { i, j } => write!(f, "index join not commutative at ({i}, {j})"),
            IndexNotAssociative { i, j, k } => write!(f, "index join not associative at ({i}, {j}, {k})"),
            NoBottom => write!(f, "nullary operators present but the index has no bottom"),
            ComponentCount { expected, found } => write!(f, "{found} components for {expected} indices"),
            LanguageMismatch { index } => write!(f, "component {index} has a different language"),
            MissingHom { from, to } => write!(f, "no map for {from} <= {to}"),
            UnorderedHom { from, to } => write!(f, "map given for {from}, {to} but {from} is not below {to}"),
            MapShape { from, to } => write!(f, "map {from} -> {to} is not a total function between universes"),
            NotHomomorphism { from, to, op, args } => {
                write!(f, "map {from} -> {to} does not commute with `{op}` at {args:?}")
            }
            IdentityFails { index, element } => write!(f, "f_{index}{index} moves element {element}"),
            CompositionFails { i, j, k, element } => {
                write!(f, "f_{j}{k} . f_{i}{j} differs from f_{i}{k} at element {element}")
            }
            DesignatedNotPreserved { from, to, element } => {
                write!(f, "map {from} -> {to} sends designated element {element} outside the designated set")
            }
        }
    }
}

/// Algebras indexed by a semilattice, with maps `f_ij` for `i <= j`.
///
/// A missing `f_ii` is read as the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedSystem {
    pub index: SemilatticeIndex,
    pub algebras: Vec<FiniteAlgebra>,
    pub homs: BTreeMap<(usize, usize), Vec<usize>>,
}

impl DirectedSystem {
    pub fn hom(&self, i: usize, j: usize) -> Option<std::borrow::Cow<'_, [usize]>> {
        match self.homs.get(&(i, j)) {
            Some(m) => Some(m.as_slice().into()),
            None if i == j => Some((0..self.algebras[i].size()).collect::<Vec<_>>().into()),
            None => None,
        }
    }

    pub fn lang(&self) -> &Language {
        self.algebras[0].lang()
    }

    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(v)
        }
    }

    fn violations(&self) -> Vec<Violation> {
        let mut out = self.index.violations();
        let n = self.index.len();
        if self.algebras.len() != n {
            out.push(Violation::ComponentCount { expected: n, found: self.algebras.len() });
            return out;
        }
        if !out.is_empty() {
            return out;
        }
        let lang = self.lang();
        for (i, a) in self.algebras.iter().enumerate() {
            if !a.lang().same_signature(lang) {
                out.push(Violation::LanguageMismatch { index: i });
            }
        }
        if !out.is_empty() {
            return out;
        }
        if lang.constants().next().is_some() && self.index.bottom().is_none() {
            out.push(Violation::NoBottom);
        }
        for &(i, j) in self.homs.keys() {
            if i >= n || j >= n || !self.index.leq(i, j) {
                out.push(Violation::UnorderedHom { from: i, to: j });
            }
        }
        let mut well_formed = BTreeSet::new();
        for i in 0..n {
            for j in (0..n).filter(|&j| self.index.leq(i, j)) {
                let Some(map) = self.hom(i, j) else {
                    out.push(Violation::MissingHom { from: i, to: j });
                    continue;
                };
                match homomorphism_violation(&map, &self.algebras[i], &self.algebras[j]) {
                    Err(_) => out.push(Violation::MapShape { from: i, to: j }),
                    Ok(Some((op, args))) => {
                        well_formed.insert((i, j));
                        out.push(Violation::NotHomomorphism { from: i, to: j, op, args });
                    }
                    Ok(None) => {
                        well_formed.insert((i, j));
                    }
                }
            }
        }
        for i in 0..n {
            if let Some(map) = self.hom(i, i).filter(|_| well_formed.contains(&(i, i))) {
                if let Some(element) = map.iter().enumerate().position(|(a, &b)| a != b) {
                    out.push(Violation::IdentityFails { index: i, element });
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if !(self.index.leq(i, j) && self.index.leq(j, k)) {
                        continue;
                    }
                    if ![(i, j), (j, k), (i, k)].iter().all(|p| well_formed.contains(p)) {
                        continue;
                    }
                    let (fij, fjk, fik) = (self.hom(i, j).unwrap(), self.hom(j, k).unwrap(), self.hom(i, k).unwrap());
                    if let Some(element) = (0..fij.len()).find(|&a| fjk[fij[a]] != fik[a]) {
                        out.push(Violation::CompositionFails { i, j, k, element });
                    }
                }
            }
        }
        out
    }

    /// Position of element `a` of component `i` in the sum's universe.
    pub fn sum_position(&self, i: usize, a: usize) -> usize {
        self.algebras[..i].iter().map(FiniteAlgebra::size).sum::<usize>() + a
    }

    /// Component index and local element for each position in the sum.
    fn origins(&self) -> Vec<(usize, usize)> {
        self.algebras.iter().enumerate().flat_map(|(i, a)| (0..a.size()).map(move |x| (i, x))).collect()
    }
}

/// A directed system whose components carry designated sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixSystem {
    pub system: DirectedSystem,
    pub designated: Vec<BTreeSet<usize>>,
}

impl MatrixSystem {
    pub fn from_matrices(
        index: SemilatticeIndex,
        matrices: Vec<Matrix>,
        homs: BTreeMap<(usize, usize), Vec<usize>>,
    ) -> Self {
        let designated = matrices.iter().map(|m| m.designated().clone()).collect();
        let algebras = matrices.into_iter().map(|m| m.algebra().clone()).collect();
        MatrixSystem { system: DirectedSystem { index, algebras, homs }, designated }
    }

    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        let mut out = match self.system.validate() {
            Ok(()) => Vec::new(),
            Err(v) => v,
        };
        let sys = &self.system;
        if self.designated.len() != sys.algebras.len() {
            out.push(Violation::ComponentCount { expected: sys.algebras.len(), found: self.designated.len() });
        }
        if !out.is_empty() {
            return Err(out);
        }
        for (&(i, j), map) in &sys.homs {
            for &a in &self.designated[i] {
                if !self.designated[j].contains(&map[a]) {
                    out.push(Violation::DesignatedNotPreserved { from: i, to: j, element: a });
                }
            }
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }
}

/// The Płonka sum: disjoint union of the components (labels become
/// `index:label`), each operation computed at the join of its arguments'
/// indices after pushing them along the system maps. Constants come from
/// the bottom component.
pub fn plonka_sum_algebras(sys: &DirectedSystem) -> Result<FiniteAlgebra, PlonkaError> {
    sys.validate().map_err(PlonkaError::Invalid)?;
    let origins = sys.origins();
    let universe: Vec<String> =
        origins.iter().map(|&(i, a)| format!("{}:{}", sys.index.elements()[i], sys.algebras[i].label(a))).collect();
    let size = universe.len();
    let lang = sys.lang().clone();
    let bottom = sys.index.bottom();
    let mut tables = Vec::new();
    for (op, arity) in lang.operators() {
        if arity == 0 {
            let b = bottom.ok_or(PlonkaError::Invalid(vec![Violation::NoBottom]))?;
            tables.push(vec![sys.sum_position(b, sys.algebras[b].apply(op, &[]))]);
            continue;
        }
        let mut table = Vec::with_capacity(size.pow(arity as u32));
        for args in tuples(size, arity) {
            let j = args.iter().map(|&x| origins[x].0).reduce(|a, b| sys.index.join(a, b)).unwrap();
            let pushed: Vec<usize> = args
                .iter()
                .map(|&x| {
                    let (i, a) = origins[x];
                    sys.hom(i, j).expect("validated")[a]
                })
                .collect();
            table.push(sys.sum_position(j, sys.algebras[j].apply(op, &pushed)));
        }
        tables.push(table);
    }
    FiniteAlgebra::new(lang, universe, tables).map_err(|e| PlonkaError::Shape(e.to_string()))
}

/// Sum of the algebras, designating the union of the components' sets.
pub fn plonka_sum_matrices(sys: &MatrixSystem) -> Result<Matrix, PlonkaError> {
    sys.validate().map_err(PlonkaError::Invalid)?;
    let algebra = plonka_sum_algebras(&sys.system)?;
    let designated = sys
        .designated
        .iter()
        .enumerate()
        .flat_map(|(i, d)| d.iter().map(move |&a| sys.system.sum_position(i, a)))
        .collect();
    Matrix::new(algebra, designated).map_err(|e| PlonkaError::Shape(e.to_string()))
}

/// `m` paired with the one-element matrix `{ω}` above it.
pub fn contaminating_system(m: &Matrix) -> MatrixSystem {
    let trivial = FiniteAlgebra::trivial(m.lang(), OMEGA);
    let top = Matrix::new(trivial, BTreeSet::from([0])).expect("single element");
    let homs = BTreeMap::from([((0, 1), vec![0; m.algebra().size()])]);
    MatrixSystem::from_matrices(SemilatticeIndex::chain(2), vec![m.clone(), top], homs)
}

/// `m ⊕ 1`: a fresh element ω absorbs every operation it takes part in,
/// constants keep their values, and ω is designated.
pub fn adjoin_contaminating(m: &Matrix) -> Result<Matrix, PlonkaError> {
    let a = m.algebra();
    if a.index_of(OMEGA).is_some() {
        return Err(PlonkaError::ReservedLabel);
    }
    let n = a.size();
    let w = n;
    let mut universe = a.universe().to_vec();
    universe.push(OMEGA.to_string());
    let tables = a
        .lang()
        .operators()
        .map(|(op, arity)| {
            tuples(n + 1, arity).map(|args| if args.contains(&w) { w } else { a.apply(op, &args) }).collect()
        })
        .collect();
    let algebra =
        FiniteAlgebra::new(a.lang().clone(), universe, tables).map_err(|e| PlonkaError::Shape(e.to_string()))?;
    let mut designated = m.designated().clone();
    designated.insert(w);
    Matrix::new(algebra, designated).map_err(|e| PlonkaError::Shape(e.to_string()))
}
