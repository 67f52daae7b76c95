//! Hilbert systems and proofs: checking, bounded search, the restricted
//! companion, theorem-proof translation and pruning.

pub mod format;
mod search;
mod transform;

pub use search::{derive_bounded, Limits, PoolPolicy, SearchOutcome};
pub use transform::{prune_derivation, translate_theorem_proof, TransformError};

use std::collections::BTreeSet;
use std::fmt;

use crate::syntax::{
    format_vars, match_into, match_schema, variables_of, Formula, Language, Schema, Substitution, Symbol,
};

/// Extra applicability test on a rule instance.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SideCondition {
    /// Variables of the instantiated premises must occur in the
    /// instantiated conclusion.
    VarInclusion,
    /// `var(σ(covered)) ⊆ var(σ(by))`, over metavariables of the rule.
    Custom { covered: Vec<Symbol>, by: Vec<Symbol> },
}

impl fmt::Display for SideCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SideCondition::VarInclusion => f.write_str("restrict"),
            SideCondition::Custom { covered, by } => {
                let j = |v: &[Symbol]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ");
                write!(f, "restrict {} <= {}", j(covered), j(by))
            }
        }
    }
}

/// The variables a side condition found missing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InclusionFailure {
    pub covered: Vec<Formula>,
    pub by: Vec<Formula>,
    pub missing: BTreeSet<Symbol>,
}

impl fmt::Display for InclusionFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let j = |v: &[Formula]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        write!(f, "var({}) ⊄ var({}) (missing {})", j(&self.covered), j(&self.by), format_vars(&self.missing))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub name: String,
    pub premises: Vec<Schema>,
    pub conclusion: Schema,
    pub condition: Option<SideCondition>,
}

impl Rule {
    pub fn new(name: &str, premises: Vec<Schema>, conclusion: Schema) -> Rule {
        Rule { name: name.to_string(), premises, conclusion, condition: None }
    }

    pub fn restricted(mut self, condition: SideCondition) -> Rule {
        self.condition = Some(condition);
        self
    }

    /// Every instance already satisfies variable inclusion, because the
    /// premise metavariables all occur in the conclusion.
    pub fn is_schematically_inclusive(&self) -> bool {
        variables_of(&self.premises).is_subset(&self.conclusion.vars())
    }

    /// Check the side condition on an instance given by `sigma` (which must
    /// bind every metavariable of the rule).
    pub fn side_condition_holds(&self, sigma: &Substitution) -> Result<(), InclusionFailure> {
        let (covered, by) = match &self.condition {
            None => return Ok(()),
            Some(SideCondition::VarInclusion) => {
                (self.premises.iter().map(|p| sigma.apply(p)).collect::<Vec<_>>(), vec![sigma.apply(&self.conclusion)])
            }
            Some(SideCondition::Custom { covered, by }) => {
                let inst = |vs: &[Symbol]| vs.iter().map(|v| sigma.apply(&Formula::Var(v.clone()))).collect::<Vec<_>>();
                (inst(covered), inst(by))
            }
        };
        let have = variables_of(&by);
        let missing: BTreeSet<Symbol> = variables_of(&covered).difference(&have).cloned().collect();
        if missing.is_empty() {
            Ok(())
        } else {
            Err(InclusionFailure { covered, by, missing })
        }
    }

    fn metavariables(&self) -> BTreeSet<Symbol> {
        let mut vs = variables_of(&self.premises);
        vs.extend(self.conclusion.vars());
        vs
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SystemError {
    #[error("axiom `{name}`: {detail}")]
    Axiom { name: String, detail: String },
    #[error("rule `{name}`: {detail}")]
    Rule { name: String, detail: String },
    #[error("`{0}` is defined twice")]
    Duplicate(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertSystem {
    pub name: String,
    pub lang: Language,
    pub axioms: Vec<(String, Schema)>,
    pub rules: Vec<Rule>,
}

impl HilbertSystem {
    pub fn new(
        name: &str,
        lang: Language,
        axioms: Vec<(String, Schema)>,
        rules: Vec<Rule>,
    ) -> Result<Self, SystemError> {
        let s = HilbertSystem { name: name.to_string(), lang, axioms, rules };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), SystemError> {
        let mut names = BTreeSet::new();
        for (name, schema) in &self.axioms {
            if !names.insert(name.as_str()) {
                return Err(SystemError::Duplicate(name.clone()));
            }
            schema
                .check_language(&self.lang)
                .map_err(|e| SystemError::Axiom { name: name.clone(), detail: e.to_string() })?;
        }
        for r in &self.rules {
            if !names.insert(r.name.as_str()) {
                return Err(SystemError::Duplicate(r.name.clone()));
            }
            let bad = |detail: String| SystemError::Rule { name: r.name.clone(), detail };
            if r.premises.is_empty() {
                return Err(bad("needs at least one premise".into()));
            }
            for f in r.premises.iter().chain(std::iter::once(&r.conclusion)) {
                f.check_language(&self.lang).map_err(|e| bad(e.to_string()))?;
            }
            if let Some(SideCondition::Custom { covered, by }) = &r.condition {
                let known = r.metavariables();
                if let Some(v) = covered.iter().chain(by).find(|v| !known.contains(*v)) {
                    return Err(bad(format!("side condition mentions unknown metavariable `{v}`")));
                }
            }
        }
        Ok(())
    }

    pub fn axiom(&self, name: &str) -> Option<&Schema> {
        self.axioms.iter().find(|(n, _)| n == name).map(|(_, s)| s)
    }

    pub fn rule(&self, name: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.name == name)
    }
}

impl fmt::Display for HilbertSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format::render_system(self))
    }
}

/// How a rule fared under [`restricted_system`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleChange {
    pub original: String,
    pub restricted: String,
    pub changed: bool,
}

fn restricted_name(name: &str) -> String {
    match name {
        "MP" => "RMP".into(),
        "HS" => "RHS".into(),
        _ if name.len() > 1 && name.starts_with('R') && name[1..].chars().all(|c| c.is_ascii_digit()) => {
            format!("{name}'")
        }
        _ => format!("R{name}"),
    }
}

/// What [`restricted_system`] does to each rule.
pub fn restriction_changes(s: &HilbertSystem) -> Vec<RuleChange> {
    s.rules
        .iter()
        .map(|r| {
            let changed = r.condition.is_none() && !r.is_schematically_inclusive();
            RuleChange {
                original: r.name.clone(),
                restricted: if changed { restricted_name(&r.name) } else { r.name.clone() },
                changed,
            }
        })
        .collect()
}

/// Same axioms; every rule that can lose variables gets the
/// variable-inclusion side condition.
pub fn restricted_system(s: &HilbertSystem) -> HilbertSystem {
    let rules = s
        .rules
        .iter()
        .zip(restriction_changes(s))
        .map(|(r, c)| {
            if c.changed {
                Rule { name: c.restricted, ..r.clone() }.restricted(SideCondition::VarInclusion)
            } else {
                r.clone()
            }
        })
        .collect();
    HilbertSystem { name: format!("{}-re", s.name), lang: s.lang.clone(), axioms: s.axioms.clone(), rules }
}

/// Members of `sigma` whose variables all occur in `phi`.
pub fn extract_delta(sigma: &[Formula], phi: &Formula) -> Vec<Formula> {
    let vs = phi.vars();
    sigma.iter().filter(|g| g.vars().is_subset(&vs)).cloned().collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Justification {
    Hypothesis,
    Axiom {
        name: String,
        sigma: Substitution,
    },
    /// Premise line indices, 0-based.
    Rule {
        name: String,
        premises: Vec<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Line {
    pub formula: Formula,
    pub justification: Justification,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Proof {
    pub hypotheses: Vec<Formula>,
    pub lines: Vec<Line>,
}

impl Proof {
    pub fn conclusion(&self) -> Option<&Formula> {
        self.lines.last().map(|l| &l.formula)
    }

    pub fn push(&mut self, formula: Formula, justification: Justification) -> usize {
        self.lines.push(Line { formula, justification });
        self.lines.len() - 1
    }

    pub fn vars(&self) -> BTreeSet<Symbol> {
        variables_of(self.lines.iter().map(|l| &l.formula))
    }
}

impl fmt::Display for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format::render_proof(self, None))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProofErrorKind {
    #[error("the proof has no lines")]
    Empty,
    #[error("`{0}` is not among the hypotheses")]
    NotAHypothesis(Formula),
    #[error("no axiom named `{0}`")]
    UnknownAxiom(String),
    #[error("not an instance of {axiom}: the substitution gives {expected}")]
    BadInstance { axiom: String, expected: Formula },
    #[error("no rule named `{0}`")]
    UnknownRule(String),
    #[error("{rule} takes {expected} premises, {found} given")]
    PremiseCount { rule: String, expected: usize, found: usize },
    #[error("refers to line {0}, which does not come earlier")]
    ForwardReference(usize),
    #[error("premises and conclusion do not fit the shape of {0}")]
    WrongShape(String),
    #[error("side condition of {rule} fails: {failure}")]
    SideCondition { rule: String, failure: InclusionFailure },
    #[error("formula outside the system's language: {0}")]
    Language(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {kind}")]
pub struct ProofError {
    /// 1-based.
    pub line: usize,
    pub kind: ProofErrorKind,
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut p: Vec<usize> = (0..k).collect();
    let mut out = vec![p.clone()];
    while crate::matrix::next_permutation(&mut p) {
        out.push(p.clone());
    }
    out
}

/// Match a rule against concrete premises (in any order) and conclusion.
/// Returns the substitution of the first ordering that fits and passes the
/// side condition, or the most informative failure.
pub(crate) fn match_rule(
    rule: &Rule,
    premises: &[&Formula],
    conclusion: &Formula,
) -> Result<Substitution, ProofErrorKind> {
    if premises.len() != rule.premises.len() {
        return Err(ProofErrorKind::PremiseCount {
            rule: rule.name.clone(),
            expected: rule.premises.len(),
            found: premises.len(),
        });
    }
    let mut side_failure = None;
    for perm in permutations(premises.len()) {
        let mut sigma = Substitution::new();
        let fits = rule.premises.iter().zip(&perm).all(|(s, &k)| match_into(s, premises[k], &mut sigma))
            && match_into(&rule.conclusion, conclusion, &mut sigma);
        if !fits {
            continue;
        }
        match rule.side_condition_holds(&sigma) {
            Ok(()) => return Ok(sigma),
            Err(failure) => side_failure = side_failure.or(Some(failure)),
        }
    }
    Err(match side_failure {
        Some(failure) => ProofErrorKind::SideCondition { rule: rule.name.clone(), failure },
        None => ProofErrorKind::WrongShape(rule.name.clone()),
    })
}

/// Complete a partial axiom substitution so that it instantiates `schema`
/// to `target`.
pub(crate) fn axiom_instance(schema: &Schema, sigma: &Substitution, target: &Formula) -> Option<Substitution> {
    let mut s = sigma.clone();
    if match_into(schema, target, &mut s) {
        Some(s)
    } else {
        None
    }
}

pub fn check_proof(p: &Proof, s: &HilbertSystem) -> Result<(), ProofError> {
    if p.lines.is_empty() {
        return Err(ProofError { line: 0, kind: ProofErrorKind::Empty });
    }
    for (i, line) in p.lines.iter().enumerate() {
        let err = |kind| ProofError { line: i + 1, kind };
        line.formula.check_language(&s.lang).map_err(|e| err(ProofErrorKind::Language(e.to_string())))?;
        match &line.justification {
            Justification::Hypothesis => {
                if !p.hypotheses.contains(&line.formula) {
                    return Err(err(ProofErrorKind::NotAHypothesis(line.formula.clone())));
                }
            }
            Justification::Axiom { name, sigma } => {
                let schema = s.axiom(name).ok_or_else(|| err(ProofErrorKind::UnknownAxiom(name.clone())))?;
                if axiom_instance(schema, sigma, &line.formula).is_none() {
                    return Err(err(ProofErrorKind::BadInstance {
                        axiom: name.clone(),
                        expected: sigma.apply(schema),
                    }));
                }
            }
            Justification::Rule { name, premises } => {
                let rule = s.rule(name).ok_or_else(|| err(ProofErrorKind::UnknownRule(name.clone())))?;
                if let Some(&bad) = premises.iter().find(|&&k| k >= i) {
                    return Err(err(ProofErrorKind::ForwardReference(bad + 1)));
                }
                let prem: Vec<&Formula> = premises.iter().map(|&k| &p.lines[k].formula).collect();
                match_rule(rule, &prem, &line.formula).map_err(err)?;
            }
        }
    }
    Ok(())
}

/// Does `schema` have `target` as an instance?
pub fn is_instance(schema: &Schema, target: &Formula) -> bool {
    match_schema(schema, target).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn f(s: &str) -> Formula {
        parse_formula(s, &Language::pre_rough()).unwrap()
    }

    fn minimal() -> HilbertSystem {
        HilbertSystem::new(
            "minimal",
            Language::lattice(),
            vec![],
            vec![Rule::new("R1", vec![f("a & b")], f("a")), Rule::new("R2", vec![f("a")], f("a | b"))],
        )
        .unwrap()
    }

    fn separation_proof() -> Proof {
        let mut p = Proof { hypotheses: vec![f("p & q")], lines: vec![] };
        p.push(f("p & q"), Justification::Hypothesis);
        p.push(f("p"), Justification::Rule { name: "R1".into(), premises: vec![0] });
        p.push(f("p | q"), Justification::Rule { name: "R2".into(), premises: vec![1] });
        p
    }

    #[test]
    fn minimal_restriction() {
        let s = minimal();
        let changes = restriction_changes(&s);
        assert_eq!(changes[0], RuleChange { original: "R1".into(), restricted: "R1'".into(), changed: true });
        assert!(!changes[1].changed);
        let re = restricted_system(&s);
        assert_eq!(re.rules[0].condition, Some(SideCondition::VarInclusion));
        assert_eq!(re.rules[1], s.rules[1]);
    }

    #[test]
    fn separation_derivation_checks() {
        let s = minimal();
        let p = separation_proof();
        assert_eq!(check_proof(&p, &s), Ok(()));
        let mut re_proof = p.clone();
        re_proof.lines[1].justification = Justification::Rule { name: "R1'".into(), premises: vec![0] };
        let err = check_proof(&re_proof, &restricted_system(&s)).unwrap_err();
        assert_eq!(err.line, 2);
        let ProofErrorKind::SideCondition { failure, .. } = &err.kind else { panic!("{err}") };
        assert_eq!(failure.to_string(), "var((p & q)) ⊄ var(p) (missing {q})");
    }

    #[test]
    fn checker_errors() {
        let s = minimal();
        let mut p = separation_proof();
        p.hypotheses.clear();
        assert_eq!(check_proof(&p, &s).unwrap_err().kind, ProofErrorKind::NotAHypothesis(f("p & q")));
        let mut p = separation_proof();
        p.lines[1].justification = Justification::Rule { name: "R1".into(), premises: vec![2] };
        assert_eq!(check_proof(&p, &s).unwrap_err().kind, ProofErrorKind::ForwardReference(3));
        let mut p = separation_proof();
        p.lines[1].formula = f("q | p");
        assert!(matches!(check_proof(&p, &s).unwrap_err().kind, ProofErrorKind::WrongShape(_)));
        assert_eq!(check_proof(&Proof::default(), &s).unwrap_err().kind, ProofErrorKind::Empty);
    }

    #[test]
    fn custom_condition_and_premise_order() {
        let hs = Rule::new("RHS", vec![f("a -> b"), f("b -> c")], f("a -> c"))
            .restricted(SideCondition::Custom { covered: vec!["b".into()], by: vec!["a".into(), "c".into()] });
        assert!(match_rule(&hs, &[&f("p -> q -> p"), &f("q -> p")], &f("q -> q -> p")).is_ok());
        let err = match_rule(&hs, &[&f("p -> r"), &f("r -> p")], &f("p -> p")).unwrap_err();
        assert!(matches!(err, ProofErrorKind::SideCondition { .. }));
    }

    #[test]
    fn delta_extraction() {
        let sigma = [f("p"), f("p & q"), f("r")];
        assert_eq!(extract_delta(&sigma, &f("p | q")), vec![f("p"), f("p & q")]);
        assert!(extract_delta(&[], &f("p")).is_empty());
        assert!(extract_delta(&[f("p"), f("~p")], &f("q")).is_empty());
    }
}
