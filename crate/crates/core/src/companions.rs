//! Consequence oracles and the left variable inclusion companion.

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::hilbert::{derive_bounded, extract_delta, HilbertSystem, Limits, Proof, SearchOutcome};
use crate::matrix::{consequence, Matrix, SemanticsError};
use crate::syntax::{parse_sequent, Formula, FormulaSampler, Language, ParseError, Sequent, Substitution};

/// Where an oracle's answers come from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    Matrices(String),
    BoundedSearch { system: String, depth: usize },
    LeftCompanion(Box<Provenance>),
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Matrices(name) => write!(f, "⊨[{name}]"),
            Provenance::BoundedSearch { system, depth } => write!(f, "⊢[{system}, depth {depth}]"),
            Provenance::LeftCompanion(base) => write!(f, "left({base})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Holds,
    Fails,
    /// A bounded search gave up; the instance may still hold.
    NotFound {
        depth: usize,
    },
}

impl Verdict {
    pub fn holds(self) -> bool {
        self == Verdict::Holds
    }

    fn from_bool(b: bool) -> Verdict {
        if b {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Holds => f.write_str("holds"),
            Verdict::Fails => f.write_str("fails"),
            Verdict::NotFound { depth } => write!(f, "not found within depth {depth}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

/// A consequence relation restricted to finite premise sets.
pub trait ConsequenceOracle {
    fn provenance(&self) -> Provenance;

    fn decide(&self, premises: &[Formula], conclusion: &Formula) -> Result<Verdict, OracleError>;

    fn holds(&self, premises: &[Formula], conclusion: &Formula) -> Result<bool, OracleError> {
        self.decide(premises, conclusion).map(Verdict::holds)
    }
}

impl<T: ConsequenceOracle + ?Sized> ConsequenceOracle for &T {
    fn provenance(&self) -> Provenance {
        (**self).provenance()
    }

    fn decide(&self, premises: &[Formula], conclusion: &Formula) -> Result<Verdict, OracleError> {
        (**self).decide(premises, conclusion)
    }
}

impl<T: ConsequenceOracle + ?Sized> ConsequenceOracle for Box<T> {
    fn provenance(&self) -> Provenance {
        (**self).provenance()
    }

    fn decide(&self, premises: &[Formula], conclusion: &Formula) -> Result<Verdict, OracleError> {
        (**self).decide(premises, conclusion)
    }
}

/// `⊨` over a finite set of matrices.
#[derive(Debug, Clone)]
pub struct MatrixOracle {
    pub name: String,
    pub matrices: Vec<Matrix>,
}

impl MatrixOracle {
    pub fn new(name: &str, matrices: Vec<Matrix>) -> Self {
        MatrixOracle { name: name.to_string(), matrices }
    }
}

impl ConsequenceOracle for MatrixOracle {
    fn provenance(&self) -> Provenance {
        Provenance::Matrices(self.name.clone())
    }

    fn decide(&self, premises: &[Formula], conclusion: &Formula) -> Result<Verdict, OracleError> {
        Ok(Verdict::from_bool(consequence(premises, conclusion, &self.matrices)?))
    }
}

/// Derivability in a Hilbert system, as far as a bounded search can tell.
#[derive(Debug, Clone)]
pub struct HilbertOracle {
    pub system: HilbertSystem,
    pub limits: Limits,
}

impl HilbertOracle {
    pub fn new(system: HilbertSystem, limits: Limits) -> Self {
        HilbertOracle { system, limits }
    }

    pub fn derive(&self, premises: &[Formula], conclusion: &Formula) -> Option<Proof> {
        match derive_bounded(premises, conclusion, &self.system, self.limits) {
            SearchOutcome::Found(p) => Some(p),
            SearchOutcome::NotFound { .. } => None,
        }
    }
}

impl ConsequenceOracle for HilbertOracle {
    fn provenance(&self) -> Provenance {
        Provenance::BoundedSearch { system: self.system.name.clone(), depth: self.limits.depth }
    }

    fn decide(&self, premises: &[Formula], conclusion: &Formula) -> Result<Verdict, OracleError> {
        Ok(match self.derive(premises, conclusion) {
            Some(_) => Verdict::Holds,
            None => Verdict::NotFound { depth: self.limits.depth },
        })
    }
}

/// `Σ ⊢^l φ` iff the base derives `φ` from the premises whose variables all
/// occur in `φ`. Checking only that largest subset is enough because the
/// base is monotone.
#[derive(Debug, Clone)]
pub struct LeftCompanion<O> {
    pub base: O,
}

pub fn left_companion<O: ConsequenceOracle>(base: O) -> LeftCompanion<O> {
    LeftCompanion { base }
}

impl<O: ConsequenceOracle> ConsequenceOracle for LeftCompanion<O> {
    fn provenance(&self) -> Provenance {
        Provenance::LeftCompanion(Box::new(self.base.provenance()))
    }

    fn decide(&self, premises: &[Formula], conclusion: &Formula) -> Result<Verdict, OracleError> {
        self.base.decide(&extract_delta(premises, conclusion), conclusion)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Agreement {
    Agree,
    /// Only the first oracle holds.
    AOnly,
    /// Only the second oracle holds.
    BOnly,
}

impl fmt::Display for Agreement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Agreement::Agree => "agree",
            Agreement::AOnly => "a-only",
            Agreement::BOnly => "b-only",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonRow {
    pub instance: Sequent,
    pub a: Verdict,
    pub b: Verdict,
    pub agreement: Agreement,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonReport {
    pub a: Provenance,
    pub b: Provenance,
    pub rows: Vec<ComparisonRow>,
}

impl ComparisonReport {
    pub fn count(&self, which: Agreement) -> usize {
        self.rows.iter().filter(|r| r.agreement == which).count()
    }

    pub fn all_agree(&self) -> bool {
        self.count(Agreement::Agree) == self.rows.len()
    }
}

impl fmt::Display for ComparisonReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "a = {}", self.a)?;
        writeln!(f, "b = {}", self.b)?;
        for r in &self.rows {
            writeln!(f, "{}\ta: {}\tb: {}\t{}", r.instance, r.a, r.b, r.agreement)?;
        }
        write!(
            f,
            "{} instances: {} agree, {} a-only, {} b-only",
            self.rows.len(),
            self.count(Agreement::Agree),
            self.count(Agreement::AOnly),
            self.count(Agreement::BOnly)
        )
    }
}

/// Run both oracles on every instance. A verdict counts as positive only
/// when it is [`Verdict::Holds`].
pub fn compare_oracles(
    a: &impl ConsequenceOracle,
    b: &impl ConsequenceOracle,
    instances: &[Sequent],
) -> Result<ComparisonReport, OracleError> {
    let mut rows = Vec::with_capacity(instances.len());
    for inst in instances {
        let va = a.decide(&inst.premises, &inst.conclusion)?;
        let vb = b.decide(&inst.premises, &inst.conclusion)?;
        let agreement = match (va.holds(), vb.holds()) {
            (true, false) => Agreement::AOnly,
            (false, true) => Agreement::BOnly,
            _ => Agreement::Agree,
        };
        rows.push(ComparisonRow { instance: inst.clone(), a: va, b: vb, agreement });
    }
    Ok(ComparisonReport { a: a.provenance(), b: b.provenance(), rows })
}

/// An instance showing that an oracle is not the left companion of any
/// logic: `Σ ⊢ φ`, yet the variable-included part `Δ` of `Σ` does not give
/// `φ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Obstruction {
    pub instance: Sequent,
    pub delta: Vec<Formula>,
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let delta: Vec<String> = self.delta.iter().map(|d| d.to_string()).collect();
        write!(
            f,
            "{} holds, but its only usable premises {{{}}} do not yield {}",
            self.instance,
            delta.join(", "),
            self.instance.conclusion
        )
    }
}

/// Every left companion `⊢^l` satisfies: `Σ ⊢^l φ` implies `Δ ⊢^l φ` for
/// `Δ = {γ ∈ Σ | var(γ) ⊆ var(φ)}`. Returns the instance as a witness when
/// `oracle` breaks this.
pub fn left_companion_obstruction(
    oracle: &impl ConsequenceOracle,
    instance: &Sequent,
) -> Result<Option<Obstruction>, OracleError> {
    if !oracle.holds(&instance.premises, &instance.conclusion)? {
        return Ok(None);
    }
    let delta = extract_delta(&instance.premises, &instance.conclusion);
    if oracle.decide(&delta, &instance.conclusion)? == Verdict::Fails {
        Ok(Some(Obstruction { instance: instance.clone(), delta }))
    } else {
        Ok(None)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("instance line {line}: {source}")]
pub struct InstanceError {
    pub line: usize,
    pub source: ParseError,
}

/// One `premises |- conclusion` per line; blank lines and `#` comments are
/// skipped.
pub fn parse_instances(text: &str, lang: &Language) -> Result<Vec<Sequent>, InstanceError> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .map(|(line, l)| parse_sequent(l, lang).map_err(|source| InstanceError { line, source }))
        .collect()
}

/// Which consequence-relation condition an instance breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Condition {
    /// `φ ∈ Σ` gives `Σ ⊢ φ`.
    Reflexivity,
    /// `Δ ⊢ ψ` for all `ψ ∈ Σ` and `Σ ⊢ φ` give `Δ ⊢ φ`.
    Transitivity,
    /// `Σ ⊢ φ` and `Σ ⊆ Δ` give `Δ ⊢ φ`.
    Monotonicity,
    /// `Σ ⊢ φ` gives `σ[Σ] ⊢ σ(φ)`.
    Structurality,
}

impl Condition {
    pub const ALL: [Condition; 4] =
        [Condition::Reflexivity, Condition::Transitivity, Condition::Monotonicity, Condition::Structurality];

    pub fn label(self) -> &'static str {
        match self {
            Condition::Reflexivity => "C1",
            Condition::Transitivity => "C2",
            Condition::Monotonicity => "C3",
            Condition::Structurality => "C4",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionViolation {
    pub condition: Condition,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConditionReport {
    /// Trials per condition, in [`Condition::ALL`] order.
    pub trials: [usize; 4],
    /// Trials whose hypotheses held, so the conclusion was actually tested.
    pub engaged: [usize; 4],
    pub violations: Vec<ConditionViolation>,
}

fn show(premises: &[Formula], conclusion: &Formula) -> String {
    Sequent { premises: premises.to_vec(), conclusion: conclusion.clone() }.to_string()
}

/// Randomized check of (C1)–(C4). Each trial draws premise sets of up to
/// two formulas and a conclusion from `sampler`, and substitutions mapping
/// each sampler variable to a sampled formula.
pub fn check_conditions<R: Rng + ?Sized>(
    oracle: &impl ConsequenceOracle,
    sampler: &FormulaSampler,
    trials: usize,
    rng: &mut R,
) -> Result<ConditionReport, OracleError> {
    let mut report = ConditionReport::default();
    let draw = |rng: &mut R, n: usize| (0..n).map(|_| sampler.sample(rng)).collect::<Vec<_>>();
    let vars: Vec<String> = sampler.vars().into_iter().map(str::to_string).collect();
    for _ in 0..trials {
        let k = rng.gen_range(0..=2);
        let sigma = draw(rng, k);
        let phi = sampler.sample(rng);
        let n_extra = rng.gen_range(1..=2);
        let extra = draw(rng, n_extra);

        // C1
        let mut with_phi = sigma.clone();
        with_phi.insert(rng.gen_range(0..=sigma.len()), phi.clone());
        report.trials[0] += 1;
        report.engaged[0] += 1;
        if !oracle.holds(&with_phi, &phi)? {
            report
                .violations
                .push(ConditionViolation { condition: Condition::Reflexivity, detail: show(&with_phi, &phi) });
        }

        let base = oracle.holds(&sigma, &phi)?;

        // C2: Δ is Σ's elements mixed with extra formulas, so that Δ ⊢ Σ
        // is often true.
        let mut delta: Vec<Formula> = sigma.iter().filter(|_| rng.gen_bool(0.7)).cloned().collect();
        delta.extend(extra.iter().take(1).cloned());
        delta.shuffle(rng);
        report.trials[1] += 1;
        let mut delta_gives_sigma = true;
        for s in &sigma {
            if !oracle.holds(&delta, s)? {
                delta_gives_sigma = false;
                break;
            }
        }
        if delta_gives_sigma && base {
            report.engaged[1] += 1;
            if !oracle.holds(&delta, &phi)? {
                report.violations.push(ConditionViolation {
                    condition: Condition::Transitivity,
                    detail: format!("{} with Δ = {}", show(&sigma, &phi), show(&delta, &phi)),
                });
            }
        }

        // C3
        report.trials[2] += 1;
        if base {
            report.engaged[2] += 1;
            let mut bigger = sigma.clone();
            bigger.extend(extra.iter().cloned());
            if !oracle.holds(&bigger, &phi)? {
                report
                    .violations
                    .push(ConditionViolation { condition: Condition::Monotonicity, detail: show(&bigger, &phi) });
            }
        }

        // C4
        report.trials[3] += 1;
        if base {
            report.engaged[3] += 1;
            let subst: Substitution = vars.iter().map(|v| (v.as_str().into(), sampler.sample(rng))).collect();
            let premises: Vec<Formula> = sigma.iter().map(|s| subst.apply(s)).collect();
            let conclusion = subst.apply(&phi);
            if !oracle.holds(&premises, &conclusion)? {
                report.violations.push(ConditionViolation {
                    condition: Condition::Structurality,
                    detail: format!("{} under σ gives {}", show(&sigma, &phi), show(&premises, &conclusion)),
                });
            }
        }
    }
    Ok(report)
}

/// Formulas on which the two oracles disagree about theoremhood.
pub fn theorem_disagreements(
    a: &impl ConsequenceOracle,
    b: &impl ConsequenceOracle,
    formulas: &[Formula],
) -> Result<Vec<Formula>, OracleError> {
    let mut out = Vec::new();
    for f in formulas {
        if a.holds(&[], f)? != b.holds(&[], f)? {
            out.push(f.clone());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{restricted_system, Rule};
    use crate::matrix::FiniteAlgebra;
    use crate::syntax::parse_formula;
    use rand::SeedableRng;

    fn b2() -> Matrix {
        let lang = Language::heyting();
        let alg = FiniteAlgebra::from_labels(
            lang,
            &["0", "1"],
            &[
                ("&", &["0", "0", "0", "1"]),
                ("|", &["0", "1", "1", "1"]),
                ("->", &["1", "1", "0", "1"]),
                ("~", &["1", "0"]),
                ("0", &["0"]),
                ("1", &["1"]),
            ],
        )
        .unwrap();
        Matrix::from_labels(alg, &["1"]).unwrap()
    }

    fn f(s: &str) -> Formula {
        parse_formula(s, &Language::heyting()).unwrap()
    }

    fn seq(s: &str) -> Sequent {
        parse_sequent(s, &Language::heyting()).unwrap()
    }

    #[test]
    fn left_companion_of_boolean_matrix() {
        let l = left_companion(MatrixOracle::new("B2", vec![b2()]));
        assert!(l.holds(&[f("p & q")], &f("p | q")).unwrap());
        assert!(!l.holds(&[f("p & q")], &f("p")).unwrap());
        assert!(!l.holds(&[f("p"), f("~p")], &f("q")).unwrap());
        assert_eq!(l.provenance().to_string(), "left(⊨[B2])");
    }

    #[test]
    fn minimal_system_comparison() {
        let lat = Language::lattice();
        let g = |s: &str| parse_formula(s, &lat).unwrap();
        let s = HilbertSystem::new(
            "minimal",
            lat.clone(),
            vec![],
            vec![Rule::new("R1", vec![g("a & b")], g("a")), Rule::new("R2", vec![g("a")], g("a | b"))],
        )
        .unwrap();
        let limits = Limits::new(4, 8);
        let re = HilbertOracle::new(restricted_system(&s), limits);
        let l = left_companion(HilbertOracle::new(s, limits));
        let inst = [parse_sequent("p & q |- p | q", &lat).unwrap()];
        let report = compare_oracles(&re, &l, &inst).unwrap();
        assert_eq!(report.rows[0].agreement, Agreement::BOnly);
        assert_eq!(report.rows[0].a, Verdict::NotFound { depth: 4 });
        let same = compare_oracles(&l, &l, &inst).unwrap();
        assert!(same.all_agree());
    }

    #[test]
    fn obstruction_for_non_companion() {
        let classical = MatrixOracle::new("B2", vec![b2()]);
        let w = left_companion_obstruction(&classical, &seq("p; p -> q |- q")).unwrap().unwrap();
        assert!(w.delta.is_empty());
        let l = left_companion(classical.clone());
        assert_eq!(left_companion_obstruction(&l, &seq("p; p -> q |- q")).unwrap(), None);
    }

    #[test]
    fn instance_files() {
        let text = "# header\np & q |- p | q\n\n |- p -> p\np; ~p |- q  # ecq\n";
        let got = parse_instances(text, &Language::heyting()).unwrap();
        assert_eq!(got.len(), 3);
        assert!(got[1].premises.is_empty());
        assert_eq!(got[2].premises.len(), 2);
        let err = parse_instances("p |- q\np |-\n", &Language::heyting()).unwrap_err();
        assert_eq!(err.line, 2);
    }

    #[test]
    fn conditions_hold_for_matrix_and_companion() {
        let m = MatrixOracle::new("B2", vec![b2()]);
        let sampler = FormulaSampler::new(&Language::heyting(), &["p", "q", "r"], 2);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let r = check_conditions(&m, &sampler, 300, &mut rng).unwrap();
        assert!(r.violations.is_empty(), "{:?}", r.violations);
        assert!(r.engaged.iter().all(|&e| e > 0));
        let l = left_companion(&m);
        let r = check_conditions(&l, &sampler, 300, &mut rng).unwrap();
        assert!(r.violations.is_empty(), "{:?}", r.violations);
    }

    #[test]
    fn theorems_are_preserved() {
        let m = MatrixOracle::new("B2", vec![b2()]);
        let fs = crate::syntax::formulas_up_to_depth(&Language::heyting(), &["p", "q"], 2);
        assert!(theorem_disagreements(&m, &left_companion(&m), &fs).unwrap().is_empty());
    }
}
