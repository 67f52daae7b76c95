//! Formula algebra: languages, formulas, substitutions and schema matching.

mod gen;
mod parse;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

pub use gen::{formulas_up_to_depth, FormulaSampler};
pub use parse::{parse_formula, parse_sequent, ParseError, ParseErrorKind, Sequent};

/// Interned-ish symbol used for variable and operator names.
pub type Symbol = Arc<str>;

/// Operator symbols understood by the text grammar.
pub mod ops {
    pub const NOT: &str = "~";
    pub const AND: &str = "&";
    pub const OR: &str = "|";
    pub const IMP: &str = "->";
    pub const INT: &str = "I";
    pub const CLO: &str = "C";
    pub const BOT: &str = "0";
    pub const TOP: &str = "1";

    /// Arity the grammar assigns to a symbol, if it is a grammar operator.
    pub fn grammar_arity(sym: &str) -> Option<usize> {
        match sym {
            NOT | INT | CLO => Some(1),
            AND | OR | IMP => Some(2),
            BOT | TOP => Some(0),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LanguageError {
    #[error("operator `{0}` declared twice")]
    DuplicateOperator(String),
}

/// A set of operator symbols with fixed arities.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Language {
    ops: Vec<(Symbol, usize)>,
}

impl Language {
    pub fn new<S: AsRef<str>>(ops: impl IntoIterator<Item = (S, usize)>) -> Result<Self, LanguageError> {
        let mut out: Vec<(Symbol, usize)> = Vec::new();
        for (name, arity) in ops {
            let name = name.as_ref();
            if out.iter().any(|(n, _)| &**n == name) {
                return Err(LanguageError::DuplicateOperator(name.to_string()));
            }
            out.push((Symbol::from(name), arity));
        }
        Ok(Language { ops: out })
    }

    /// Build from grammar symbols, taking arities from the grammar.
    ///
    /// Panics on a symbol the grammar does not know; intended for the
    /// fixed languages below.
    pub fn from_grammar(symbols: &[&str]) -> Self {
        Language::new(
            symbols
                .iter()
                .map(|s| (*s, ops::grammar_arity(s).unwrap_or_else(|| panic!("`{s}` is not a grammar operator")))),
        )
        .expect("grammar symbols are distinct")
    }

    /// `{∧, ∨}`
    pub fn lattice() -> Self {
        Self::from_grammar(&[ops::AND, ops::OR])
    }

    /// `{∧, ∨, 0, 1}`
    pub fn bounded_lattice() -> Self {
        Self::from_grammar(&[ops::AND, ops::OR, ops::BOT, ops::TOP])
    }

    /// `{∧, ∨, ¬, 0, 1}`
    pub fn quasi_boolean() -> Self {
        Self::from_grammar(&[ops::AND, ops::OR, ops::NOT, ops::BOT, ops::TOP])
    }

    /// `{∧, ∨, →, ¬, 0, 1}`
    pub fn heyting() -> Self {
        Self::from_grammar(&[ops::AND, ops::OR, ops::IMP, ops::NOT, ops::BOT, ops::TOP])
    }

    /// `{∧, ∨, →, ¬, I, C, 0, 1}`
    pub fn pre_rough() -> Self {
        Self::from_grammar(&[ops::AND, ops::OR, ops::IMP, ops::NOT, ops::INT, ops::CLO, ops::BOT, ops::TOP])
    }

    /// `{∧, ∨, →, ¬}`
    pub fn relevance() -> Self {
        Self::from_grammar(&[ops::AND, ops::OR, ops::IMP, ops::NOT])
    }

    pub fn operators(&self) -> impl Iterator<Item = (&str, usize)> {
        self.ops.iter().map(|(n, a)| (&**n, *a))
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.ops.iter().find(|(n, _)| &**n == name).map(|(_, a)| *a)
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.ops.iter().position(|(n, _)| &**n == name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.position(name).is_some()
    }

    /// Nullary operators in declaration order.
    pub fn constants(&self) -> impl Iterator<Item = &str> {
        self.ops.iter().filter(|(_, a)| *a == 0).map(|(n, _)| &**n)
    }

    /// Same operators with the same arities, ignoring declaration order.
    pub fn same_signature(&self, other: &Language) -> bool {
        self.len() == other.len() && self.operators().all(|(n, a)| other.arity(n) == Some(a))
    }

    /// Sub-language keeping only the named operators (in this language's order).
    pub fn restrict(&self, keep: &[&str]) -> Language {
        Language { ops: self.ops.iter().filter(|(n, _)| keep.contains(&&**n)).cloned().collect() }
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.ops.iter().map(|(n, _)| &**n).collect();
        write!(f, "{{{}}}", names.join(", "))
    }
}

/// A term over a language: a variable or an operator applied to arguments.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Var(Symbol),
    App(Symbol, Arc<[Formula]>),
}

/// Formulas whose variables are read as metavariables.
pub type Schema = Formula;

impl Formula {
    pub fn var(name: &str) -> Formula {
        Formula::Var(Symbol::from(name))
    }

    pub fn app(op: &str, args: Vec<Formula>) -> Formula {
        Formula::App(Symbol::from(op), args.into())
    }

    pub fn constant(op: &str) -> Formula {
        Formula::App(Symbol::from(op), Arc::from(Vec::new()))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Formula {
        Formula::app(ops::NOT, vec![a])
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::app(ops::AND, vec![a, b])
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::app(ops::OR, vec![a, b])
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::app(ops::IMP, vec![a, b])
    }

    pub fn int(a: Formula) -> Formula {
        Formula::app(ops::INT, vec![a])
    }

    pub fn clo(a: Formula) -> Formula {
        Formula::app(ops::CLO, vec![a])
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Formula::Var(_))
    }

    /// Operator at the root, `None` for variables.
    pub fn head(&self) -> Option<&str> {
        match self {
            Formula::Var(_) => None,
            Formula::App(op, _) => Some(op),
        }
    }

    pub fn args(&self) -> &[Formula] {
        match self {
            Formula::Var(_) => &[],
            Formula::App(_, args) => args,
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Var(_) => 1,
            Formula::App(_, args) => 1 + args.iter().map(Formula::size).sum::<usize>(),
        }
    }

    /// Height of the term tree; variables and constants have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Var(_) => 0,
            Formula::App(_, args) => args.iter().map(|a| a.depth() + 1).max().unwrap_or(0),
        }
    }

    pub fn vars(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            Formula::Var(v) => {
                out.insert(v.clone());
            }
            Formula::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    /// All subformulas, including `self`, without duplicates.
    pub fn subformulas(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        self.collect_subformulas(&mut out);
        out
    }

    fn collect_subformulas(&self, out: &mut BTreeSet<Formula>) {
        if out.insert(self.clone()) {
            for a in self.args() {
                a.collect_subformulas(out);
            }
        }
    }

    /// Check every operator against a language.
    pub fn check_language(&self, lang: &Language) -> Result<(), LanguageMismatch> {
        match self {
            Formula::Var(_) => Ok(()),
            Formula::App(op, args) => {
                match lang.arity(op) {
                    None => return Err(LanguageMismatch::UnknownOperator(op.to_string())),
                    Some(a) if a != args.len() => {
                        return Err(LanguageMismatch::Arity { op: op.to_string(), expected: a, found: args.len() })
                    }
                    _ => {}
                }
                args.iter().try_for_each(|a| a.check_language(lang))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LanguageMismatch {
    #[error("operator `{0}` is not in the language")]
    UnknownOperator(String),
    #[error("operator `{op}` has arity {expected}, applied to {found} arguments")]
    Arity { op: String, expected: usize, found: usize },
}

/// `var(Γ)`: the variables occurring in any member.
pub fn variables_of<'a>(fs: impl IntoIterator<Item = &'a Formula>) -> BTreeSet<Symbol> {
    let mut out = BTreeSet::new();
    for f in fs {
        f.collect_vars(&mut out);
    }
    out
}

/// A finite-support map from variables to formulas; identity elsewhere.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Substitution {
    map: BTreeMap<Symbol, Formula>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::default()
    }

    pub fn bind(&mut self, var: &str, value: Formula) {
        self.map.insert(Symbol::from(var), value);
    }

    pub fn with(mut self, var: &str, value: Formula) -> Self {
        self.bind(var, value);
        self
    }

    pub fn get(&self, var: &str) -> Option<&Formula> {
        self.map.get(var)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Formula)> {
        self.map.iter().map(|(k, v)| (&**k, v))
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn apply(&self, f: &Formula) -> Formula {
        apply_substitution(self, f)
    }

    /// `outer ∘ self`: first `self`, then `outer`.
    pub fn then(&self, outer: &Substitution) -> Substitution {
        let mut map: BTreeMap<Symbol, Formula> = self.map.iter().map(|(k, v)| (k.clone(), outer.apply(v))).collect();
        for (k, v) in &outer.map {
            map.entry(k.clone()).or_insert_with(|| v.clone());
        }
        Substitution { map }
    }
}

impl FromIterator<(Symbol, Formula)> for Substitution {
    fn from_iter<T: IntoIterator<Item = (Symbol, Formula)>>(iter: T) -> Self {
        Substitution { map: iter.into_iter().collect() }
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.map.iter().map(|(k, v)| format!("{k} := {v}")).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Homomorphic image of `f` under `sigma`.
pub fn apply_substitution(sigma: &Substitution, f: &Formula) -> Formula {
    if sigma.is_empty() {
        return f.clone();
    }
    match f {
        Formula::Var(v) => sigma.map.get(v).cloned().unwrap_or_else(|| f.clone()),
        Formula::App(op, args) => Formula::App(op.clone(), args.iter().map(|a| apply_substitution(sigma, a)).collect()),
    }
}

/// One-sided first-order matching of a schema against a target.
///
/// Returns the minimal substitution (binding exactly the schema's
/// metavariables) that maps `schema` onto `target`.
pub fn match_schema(schema: &Schema, target: &Formula) -> Option<Substitution> {
    let mut sigma = Substitution::new();
    match_into(schema, target, &mut sigma).then_some(sigma)
}

/// Extend `sigma` so that it maps `schema` to `target`; on failure `sigma`
/// may hold partial bindings and should be discarded.
pub fn match_into(schema: &Schema, target: &Formula, sigma: &mut Substitution) -> bool {
    match schema {
        Formula::Var(m) => match sigma.map.get(m) {
            Some(bound) => bound == target,
            None => {
                sigma.map.insert(m.clone(), target.clone());
                true
            }
        },
        Formula::App(op, args) => match target {
            Formula::App(top, targs) if op == top && args.len() == targs.len() => {
                args.iter().zip(targs.iter()).all(|(s, t)| match_into(s, t, sigma))
            }
            _ => false,
        },
    }
}

impl fmt::Display for Formula {
    /// Canonical fully parenthesized text. Binary operators print as
    /// `(a op b)`, `~` as `(~a)`, and the letter operators `I`, `C` as
    /// `I a` (they bind tightest, so no parentheses are needed).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Var(v) => f.write_str(v),
            Formula::App(op, args) => match args.len() {
                0 => f.write_str(op),
                1 if &**op == ops::NOT => write!(f, "(~{})", args[0]),
                1 => write!(f, "{} {}", op, args[0]),
                2 => write!(f, "({} {} {})", args[0], op, args[1]),
                _ => {
                    write!(f, "{op}(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            f.write_str(", ")?;
                        }
                        write!(f, "{a}")?;
                    }
                    f.write_str(")")
                }
            },
        }
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Render `var(Γ)` as `{p, q}`.
pub fn format_vars(vars: &BTreeSet<Symbol>) -> String {
    let v: Vec<&str> = vars.iter().map(|s| &**s).collect();
    format!("{{{}}}", v.join(", "))
}
