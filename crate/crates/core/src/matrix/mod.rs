//! Finite algebras, logical matrices and matrix-defined consequence.

mod compiled;
pub mod file;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::syntax::{variables_of, Formula, Language, LanguageMismatch, Symbol};
use compiled::Program;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("universe must be non-empty")]
    EmptyUniverse,
    #[error("element label `{0}` appears twice")]
    DuplicateLabel(String),
    #[error("unknown element label `{0}`")]
    UnknownLabel(String),
    #[error("no table for operator `{0}`")]
    MissingTable(String),
    #[error("table for `{op}` has {found} entries, expected {expected}")]
    TableSize { op: String, expected: usize, found: usize },
    #[error("table for `{op}` maps to element index {value} outside the universe")]
    ValueOutOfRange { op: String, value: usize },
    #[error("designated index {0} outside the universe")]
    DesignatedOutOfRange(usize),
    #[error(transparent)]
    Language(#[from] crate::syntax::LanguageError),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SemanticsError {
    #[error("variable `{0}` is not assigned")]
    UnassignedVariable(String),
    #[error("language mismatch: {0}")]
    Language(#[from] LanguageMismatch),
    #[error("algebras have different languages: {0} vs {1}")]
    SignatureMismatch(String, String),
    #[error("map has {found} entries for a universe of {expected}")]
    PartialMap { expected: usize, found: usize },
    #[error("map sends an element to index {0}, outside the target universe")]
    MapOutOfRange(usize),
    #[error("no matrices given")]
    NoMatrices,
}

/// Operation tables over a finite universe of labelled elements.
///
/// Elements are referred to by their index in `universe`. Each table is
/// stored row-major: the entry for `(a1, ..., an)` sits at
/// `((a1 * n + a2) * n + ...) + an`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteAlgebra {
    lang: Language,
    universe: Vec<String>,
    tables: Vec<Vec<usize>>,
}

impl FiniteAlgebra {
    /// `tables` are given in the order of `lang`'s operators.
    pub fn new(lang: Language, universe: Vec<String>, tables: Vec<Vec<usize>>) -> Result<Self, AlgebraError> {
        if universe.is_empty() {
            return Err(AlgebraError::EmptyUniverse);
        }
        let mut seen = BTreeSet::new();
        for l in &universe {
            if !seen.insert(l.as_str()) {
                return Err(AlgebraError::DuplicateLabel(l.clone()));
            }
        }
        let n = universe.len();
        if tables.len() != lang.len() {
            let missing = lang.operators().nth(tables.len()).map(|o| o.0).unwrap_or("?");
            return Err(AlgebraError::MissingTable(missing.to_string()));
        }
        for ((op, arity), table) in lang.operators().zip(&tables) {
            let expected = n.pow(arity as u32);
            if table.len() != expected {
                return Err(AlgebraError::TableSize { op: op.to_string(), expected, found: table.len() });
            }
            if let Some(&value) = table.iter().find(|&&v| v >= n) {
                return Err(AlgebraError::ValueOutOfRange { op: op.to_string(), value });
            }
        }
        Ok(FiniteAlgebra { lang, universe, tables })
    }

    /// Build from label tables, e.g. `("~", &["1", "0"])`.
    pub fn from_labels(lang: Language, universe: &[&str], tables: &[(&str, &[&str])]) -> Result<Self, AlgebraError> {
        let universe: Vec<String> = universe.iter().map(|s| s.to_string()).collect();
        let index =
            |l: &str| universe.iter().position(|u| u == l).ok_or_else(|| AlgebraError::UnknownLabel(l.to_string()));
        let mut out = Vec::new();
        for (op, _) in lang.operators() {
            let (_, entries) = tables
                .iter()
                .find(|(name, _)| *name == op)
                .ok_or_else(|| AlgebraError::MissingTable(op.to_string()))?;
            out.push(entries.iter().map(|l| index(l)).collect::<Result<Vec<_>, _>>()?);
        }
        FiniteAlgebra::new(lang, universe, out)
    }

    /// One-element algebra of the given language, element labelled `label`.
    pub fn trivial(lang: &Language, label: &str) -> Self {
        let tables = lang.operators().map(|_| vec![0]).collect();
        FiniteAlgebra { lang: lang.clone(), universe: vec![label.to_string()], tables }
    }

    pub fn lang(&self) -> &Language {
        &self.lang
    }

    pub fn size(&self) -> usize {
        self.universe.len()
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    pub fn label(&self, i: usize) -> &str {
        &self.universe[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.universe.iter().position(|u| u == label)
    }

    pub fn table(&self, op: &str) -> Option<&[usize]> {
        self.lang.position(op).map(|i| self.tables[i].as_slice())
    }

    pub(crate) fn tables(&self) -> &[Vec<usize>] {
        &self.tables
    }

    pub fn has(&self, op: &str) -> bool {
        self.lang.contains(op)
    }

    /// Apply operator `op` to element indices. Panics if `op` is absent or
    /// the argument count is wrong.
    pub fn apply(&self, op: &str, args: &[usize]) -> usize {
        let i = self.lang.position(op).unwrap_or_else(|| panic!("operator `{op}` not in algebra"));
        self.tables[i][self.offset(args)]
    }

    pub(crate) fn apply_at(&self, table: usize, args: &[usize]) -> usize {
        self.tables[table][self.offset(args)]
    }

    fn offset(&self, args: &[usize]) -> usize {
        let n = self.size();
        args.iter().fold(0, |acc, &a| acc * n + a)
    }

    /// All argument tuples of a given arity, in row-major order.
    pub fn tuples(&self, arity: usize) -> impl Iterator<Item = Vec<usize>> {
        tuples(self.size(), arity)
    }

    /// Reduct to a sub-language (tables for the other operators dropped).
    pub fn reduct(&self, keep: &[&str]) -> FiniteAlgebra {
        let lang = self.lang.restrict(keep);
        let tables = lang.operators().map(|(op, _)| self.table(op).unwrap().to_vec()).collect();
        FiniteAlgebra { lang, universe: self.universe.clone(), tables }
    }

    /// Expansion by new nullary operators, each naming an existing element.
    pub fn with_constants(&self, consts: &[(&str, &str)]) -> Result<FiniteAlgebra, AlgebraError> {
        let mut ops: Vec<(String, usize)> = self.lang.operators().map(|(n, a)| (n.to_string(), a)).collect();
        let mut tables = self.tables.clone();
        for (name, label) in consts {
            ops.push((name.to_string(), 0));
            let i = self.index_of(label).ok_or_else(|| AlgebraError::UnknownLabel(label.to_string()))?;
            tables.push(vec![i]);
        }
        FiniteAlgebra::new(Language::new(ops)?, self.universe.clone(), tables)
    }

    /// Same algebra with elements renamed.
    pub fn relabel(&self, labels: Vec<String>) -> Result<FiniteAlgebra, AlgebraError> {
        FiniteAlgebra::new(self.lang.clone(), labels, self.tables.clone())
    }

    /// Permute elements: element `i` becomes element `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> FiniteAlgebra {
        let n = self.size();
        let mut universe = vec![String::new(); n];
        for (i, &j) in perm.iter().enumerate() {
            universe[j] = self.universe[i].clone();
        }
        let tables = self
            .lang
            .operators()
            .zip(&self.tables)
            .map(|((_, arity), table)| {
                let mut out = vec![0; table.len()];
                for args in self.tuples(arity) {
                    let image: Vec<usize> = args.iter().map(|&a| perm[a]).collect();
                    out[self.offset(&image)] = perm[table[self.offset(&args)]];
                }
                out
            })
            .collect();
        FiniteAlgebra { lang: self.lang.clone(), universe, tables }
    }
}

/// All `arity`-tuples over `0..n`, in row-major order.
pub fn tuples(n: usize, arity: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..n.pow(arity as u32)).map(move |mut k| {
        let mut t = vec![0; arity];
        for slot in t.iter_mut().rev() {
            *slot = k % n;
            k /= n;
        }
        t
    })
}

/// Compare two algebras up to a bijection of their universes.
pub fn isomorphism(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Option<Vec<usize>> {
    if a.size() != b.size() || !a.lang().same_signature(b.lang()) {
        return None;
    }
    let n = a.size();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        if is_homomorphism(&perm, a, b).unwrap_or(false) {
            return Some(perm);
        }
        if !next_permutation(&mut perm) {
            return None;
        }
    }
}

pub(crate) fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// An algebra together with a designated subset.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    algebra: FiniteAlgebra,
    designated: BTreeSet<usize>,
}

impl Matrix {
    pub fn new(algebra: FiniteAlgebra, designated: BTreeSet<usize>) -> Result<Self, AlgebraError> {
        if let Some(&d) = designated.iter().find(|&&d| d >= algebra.size()) {
            return Err(AlgebraError::DesignatedOutOfRange(d));
        }
        Ok(Matrix { algebra, designated })
    }

    pub fn from_labels(algebra: FiniteAlgebra, designated: &[&str]) -> Result<Self, AlgebraError> {
        let set = designated
            .iter()
            .map(|l| algebra.index_of(l).ok_or_else(|| AlgebraError::UnknownLabel(l.to_string())))
            .collect::<Result<BTreeSet<_>, _>>()?;
        Matrix::new(algebra, set)
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.algebra
    }

    pub fn designated(&self) -> &BTreeSet<usize> {
        &self.designated
    }

    pub fn is_designated(&self, i: usize) -> bool {
        self.designated.contains(&i)
    }

    pub fn designated_labels(&self) -> Vec<&str> {
        self.designated.iter().map(|&i| self.algebra.label(i)).collect()
    }

    pub fn lang(&self) -> &Language {
        self.algebra.lang()
    }
}

/// Assignment of elements to variables.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Valuation {
    map: BTreeMap<Symbol, usize>,
}

impl Valuation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn assign(&mut self, var: &str, element: usize) {
        self.map.insert(Symbol::from(var), element);
    }

    pub fn with(mut self, var: &str, element: usize) -> Self {
        self.assign(var, element);
        self
    }

    /// Build from `(variable, element label)` pairs.
    pub fn from_labels(algebra: &FiniteAlgebra, pairs: &[(&str, &str)]) -> Result<Self, AlgebraError> {
        let mut v = Valuation::new();
        for (var, label) in pairs {
            let i = algebra.index_of(label).ok_or_else(|| AlgebraError::UnknownLabel(label.to_string()))?;
            v.assign(var, i);
        }
        Ok(v)
    }

    pub fn get(&self, var: &str) -> Option<usize> {
        self.map.get(var).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.map.iter().map(|(k, v)| (&**k, *v))
    }

    pub fn display<'a>(&'a self, algebra: &'a FiniteAlgebra) -> impl fmt::Display + 'a {
        struct D<'a>(&'a Valuation, &'a FiniteAlgebra);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let parts: Vec<String> = self.0.iter().map(|(k, v)| format!("{k}={}", self.1.label(v))).collect();
                f.write_str(&parts.join(", "))
            }
        }
        D(self, algebra)
    }
}

/// Value of `f` in `algebra` under `v`.
pub fn evaluate(f: &Formula, v: &Valuation, algebra: &FiniteAlgebra) -> Result<usize, SemanticsError> {
    match f {
        Formula::Var(x) => v.get(x).ok_or_else(|| SemanticsError::UnassignedVariable(x.to_string())),
        Formula::App(op, args) => {
            let table = algebra.lang().position(op).ok_or_else(|| LanguageMismatch::UnknownOperator(op.to_string()))?;
            let (_, arity) = algebra.lang().operators().nth(table).unwrap();
            if arity != args.len() {
                return Err(LanguageMismatch::Arity { op: op.to_string(), expected: arity, found: args.len() }.into());
            }
            let vals = args.iter().map(|a| evaluate(a, v, algebra)).collect::<Result<Vec<_>, _>>()?;
            Ok(algebra.apply_at(table, &vals))
        }
    }
}

/// A valuation designating every premise but not the conclusion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Countermodel {
    /// Index into the matrix list passed to [`countermodel`].
    pub matrix: usize,
    pub valuation: Valuation,
    pub conclusion_value: usize,
}

/// Search for a countermodel to `premises ⊨ conclusion`, matrix by matrix,
/// enumerating valuations of the occurring variables in odometer order
/// (first variable slowest, elements in universe order).
pub fn countermodel(
    premises: &[Formula],
    conclusion: &Formula,
    matrices: &[Matrix],
) -> Result<Option<Countermodel>, SemanticsError> {
    if matrices.is_empty() {
        return Err(SemanticsError::NoMatrices);
    }
    let vars: Vec<Symbol> = variables_of(premises.iter().chain(std::iter::once(conclusion))).into_iter().collect();
    for (mi, m) in matrices.iter().enumerate() {
        let alg = m.algebra();
        let progs = premises.iter().map(|p| Program::compile(p, alg, &vars)).collect::<Result<Vec<_>, _>>()?;
        let goal = Program::compile(conclusion, alg, &vars)?;
        let mut found = None;
        let mut stack = Vec::new();
        for_each_assignment(alg.size(), vars.len(), |assignment| {
            if progs.iter().all(|p| m.is_designated(p.run(alg, assignment, &mut stack))) {
                let value = goal.run(alg, assignment, &mut stack);
                if !m.is_designated(value) {
                    found = Some((assignment.to_vec(), value));
                    return false;
                }
            }
            true
        });
        if let Some((assignment, value)) = found {
            let mut valuation = Valuation::new();
            for (x, a) in vars.iter().zip(assignment) {
                valuation.assign(x, a);
            }
            return Ok(Some(Countermodel { matrix: mi, valuation, conclusion_value: value }));
        }
    }
    Ok(None)
}

/// Drive `visit` over all `n^k` assignments; stop early when it returns false.
pub(crate) fn for_each_assignment(n: usize, k: usize, mut visit: impl FnMut(&[usize]) -> bool) {
    let mut a = vec![0usize; k];
    loop {
        if !visit(&a) {
            return;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            a[i] += 1;
            if a[i] < n {
                break;
            }
            a[i] = 0;
        }
    }
}

/// `premises ⊨ conclusion` over every matrix in the list.
pub fn consequence(premises: &[Formula], conclusion: &Formula, matrices: &[Matrix]) -> Result<bool, SemanticsError> {
    countermodel(premises, conclusion, matrices).map(|c| c.is_none())
}

pub fn is_tautology(f: &Formula, matrices: &[Matrix]) -> Result<bool, SemanticsError> {
    consequence(&[], f, matrices)
}

/// First operation/argument tuple on which `map` fails to commute, if any.
pub fn homomorphism_violation(
    map: &[usize],
    a: &FiniteAlgebra,
    b: &FiniteAlgebra,
) -> Result<Option<(String, Vec<usize>)>, SemanticsError> {
    if !a.lang().same_signature(b.lang()) {
        return Err(SemanticsError::SignatureMismatch(a.lang().to_string(), b.lang().to_string()));
    }
    if map.len() != a.size() {
        return Err(SemanticsError::PartialMap { expected: a.size(), found: map.len() });
    }
    if let Some(&bad) = map.iter().find(|&&x| x >= b.size()) {
        return Err(SemanticsError::MapOutOfRange(bad));
    }
    for (op, arity) in a.lang().operators() {
        for args in a.tuples(arity) {
            let image: Vec<usize> = args.iter().map(|&x| map[x]).collect();
            if map[a.apply(op, &args)] != b.apply(op, &image) {
                return Ok(Some((op.to_string(), args)));
            }
        }
    }
    Ok(None)
}

/// Does `map` (indexed by `a`'s elements) commute with every operation?
pub fn is_homomorphism(map: &[usize], a: &FiniteAlgebra, b: &FiniteAlgebra) -> Result<bool, SemanticsError> {
    homomorphism_violation(map, a, b).map(|v| v.is_none())
}
