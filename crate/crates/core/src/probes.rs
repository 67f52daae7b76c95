//! Paraconsistency and deduction-theorem probes on single matrices.

use std::fmt;

use crate::companions::{ConsequenceOracle, OracleError};
use crate::matrix::{countermodel, Countermodel, Matrix, SemanticsError};
use crate::syntax::{ops, Formula};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProbeError {
    #[error("the matrix language lacks `{0}`")]
    MissingOperator(&'static str),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

fn require(m: &Matrix, needed: &[&'static str]) -> Result<(), ProbeError> {
    match needed.iter().find(|op| !m.lang().contains(op)) {
        Some(op) => Err(ProbeError::MissingOperator(op)),
        None => Ok(()),
    }
}

fn p() -> Formula {
    Formula::var("p")
}

fn q() -> Formula {
    Formula::var("q")
}

/// Result of a probe: whether the property holds, with a countermodel
/// when it does not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeOutcome {
    pub holds: bool,
    pub witness: Option<Countermodel>,
}

fn outcome(premises: &[Formula], conclusion: &Formula, m: &Matrix) -> Result<ProbeOutcome, ProbeError> {
    let witness = countermodel(premises, conclusion, std::slice::from_ref(m))?;
    Ok(ProbeOutcome { holds: witness.is_none(), witness })
}

/// `{p, ¬p} ⊨ q`
pub fn probe_ecq(m: &Matrix) -> Result<ProbeOutcome, ProbeError> {
    require(m, &[ops::NOT])?;
    outcome(&[p(), Formula::not(p())], &q(), m)
}

/// `{p ∧ ¬p} ⊨ q`
pub fn probe_land_ecq(m: &Matrix) -> Result<ProbeOutcome, ProbeError> {
    require(m, &[ops::AND, ops::NOT])?;
    outcome(&[Formula::and(p(), Formula::not(p()))], &q(), m)
}

/// `⊨ ¬(p ∧ ¬p)`
pub fn probe_lnc(m: &Matrix) -> Result<ProbeOutcome, ProbeError> {
    require(m, &[ops::AND, ops::NOT])?;
    outcome(&[], &Formula::not(Formula::and(p(), Formula::not(p()))), m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Paraconsistency {
    NotParaconsistent,
    /// ECQ fails, LNC holds.
    Weakly,
    /// ECQ and LNC both fail.
    Strongly,
}

impl fmt::Display for Paraconsistency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Paraconsistency::NotParaconsistent => "not paraconsistent",
            Paraconsistency::Weakly => "weakly paraconsistent",
            Paraconsistency::Strongly => "strongly paraconsistent",
        })
    }
}

pub fn classify_paraconsistency(m: &Matrix) -> Result<Paraconsistency, ProbeError> {
    require(m, &[ops::AND, ops::NOT])?;
    if probe_ecq(m)?.holds {
        Ok(Paraconsistency::NotParaconsistent)
    } else if probe_lnc(m)?.holds {
        Ok(Paraconsistency::Weakly)
    } else {
        Ok(Paraconsistency::Strongly)
    }
}

/// `(Σ, α, β)` for the two directions of `Σ ∪ {α} ⊢ β iff Σ ⊢ α → β`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DeductionInstance {
    pub sigma: Vec<Formula>,
    pub alpha: Formula,
    pub beta: Formula,
}

impl DeductionInstance {
    pub fn new(sigma: Vec<Formula>, alpha: Formula, beta: Formula) -> Self {
        DeductionInstance { sigma, alpha, beta }
    }

    pub fn implication(&self) -> Formula {
        Formula::imp(self.alpha.clone(), self.beta.clone())
    }

    fn extended(&self) -> Vec<Formula> {
        let mut s = self.sigma.clone();
        s.push(self.alpha.clone());
        s
    }

    /// `var(α) ⊆ var(β)`
    pub fn var_included(&self) -> bool {
        self.alpha.vars().is_subset(&self.beta.vars())
    }
}

impl fmt::Display for DeductionInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.sigma.iter().map(|x| x.to_string()).collect();
        write!(f, "Σ = {{{}}}, α = {}, β = {}", s.join(", "), self.alpha, self.beta)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeductionRow {
    pub instance: DeductionInstance,
    /// `Σ ∪ {α} ⊢ β`
    pub with_premise: bool,
    /// `Σ ⊢ α → β`
    pub implication: bool,
    /// For a matrix, a valuation refuting whichever side fails.
    pub witness: Option<Countermodel>,
}

impl DeductionRow {
    /// `Σ ∪ {α} ⊢ β` implies `Σ ⊢ α → β`.
    pub fn dt_holds(&self) -> bool {
        !self.with_premise || self.implication
    }

    /// `Σ ⊢ α → β` implies `Σ ∪ {α} ⊢ β`.
    pub fn converse_holds(&self) -> bool {
        !self.implication || self.with_premise
    }
}

impl fmt::Display for DeductionRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let yn = |b: bool| if b { "holds" } else { "fails" };
        write!(
            f,
            "{}: Σ,α ⊢ β {}; Σ ⊢ α -> β {}; DT {}; converse {}; var(α) ⊆ var(β) {}",
            self.instance,
            yn(self.with_premise),
            yn(self.implication),
            yn(self.dt_holds()),
            yn(self.converse_holds()),
            if self.instance.var_included() { "yes" } else { "no" },
        )
    }
}

/// Both deduction-theorem directions over an arbitrary oracle.
pub fn deduction_report(
    oracle: &impl ConsequenceOracle,
    instances: &[DeductionInstance],
) -> Result<Vec<DeductionRow>, ProbeError> {
    instances
        .iter()
        .map(|inst| {
            Ok(DeductionRow {
                with_premise: oracle.holds(&inst.extended(), &inst.beta)?,
                implication: oracle.holds(&inst.sigma, &inst.implication())?,
                instance: inst.clone(),
                witness: None,
            })
        })
        .collect()
}

/// Both deduction-theorem directions over one matrix, with countermodels.
pub fn probe_deduction(m: &Matrix, instances: &[DeductionInstance]) -> Result<Vec<DeductionRow>, ProbeError> {
    require(m, &[ops::IMP])?;
    let ms = std::slice::from_ref(m);
    instances
        .iter()
        .map(|inst| {
            let premise_cm = countermodel(&inst.extended(), &inst.beta, ms)?;
            let implication_cm = countermodel(&inst.sigma, &inst.implication(), ms)?;
            Ok(DeductionRow {
                with_premise: premise_cm.is_none(),
                implication: implication_cm.is_none(),
                witness: implication_cm.or(premise_cm),
                instance: inst.clone(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::matrix;
    use crate::companions::{left_companion, MatrixOracle};
    use crate::syntax::parse_formula;

    fn f(m: &Matrix, s: &str) -> Formula {
        parse_formula(s, m.lang()).unwrap()
    }

    #[test]
    fn ecq() {
        assert!(probe_ecq(&matrix("B2").unwrap()).unwrap().holds);
        let ps3 = matrix("PS3").unwrap();
        let out = probe_ecq(&ps3).unwrap();
        assert!(!out.holds);
        let w = out.witness.unwrap();
        assert_eq!(w.valuation.display(ps3.algebra()).to_string(), "p=1/2, q=0");
        let b2w = matrix("B2+w").unwrap();
        let w = probe_ecq(&b2w).unwrap().witness.unwrap();
        assert_eq!(w.valuation.display(b2w.algebra()).to_string(), "p=w, q=0");
    }

    #[test]
    fn land_ecq_and_lnc() {
        let b2 = matrix("B2").unwrap();
        let m3 = matrix("M3").unwrap();
        let r = matrix("prerough3").unwrap();
        assert!(probe_land_ecq(&b2).unwrap().holds);
        assert!(!probe_land_ecq(&m3).unwrap().holds);
        assert!(probe_land_ecq(&r).unwrap().holds);
        assert!(probe_lnc(&b2).unwrap().holds);
        assert!(probe_lnc(&m3).unwrap().holds);
        assert!(!probe_lnc(&r).unwrap().holds);
        assert!(!probe_lnc(&matrix("prerough3-std").unwrap()).unwrap().holds);
    }

    #[test]
    fn classification() {
        let c = |id: &str| classify_paraconsistency(&matrix(id).unwrap()).unwrap();
        assert_eq!(c("B2"), Paraconsistency::NotParaconsistent);
        assert_eq!(c("B2+w"), Paraconsistency::Weakly);
        assert_eq!(c("prerough3+w"), Paraconsistency::Strongly);
        assert_eq!(c("prerough3-std+w"), Paraconsistency::Strongly);
    }

    #[test]
    fn rm3_deduction_failure() {
        let m3 = matrix("M3").unwrap();
        let inst = DeductionInstance::new(vec![], f(&m3, "p | ~p"), f(&m3, "q | ~q"));
        let row = &probe_deduction(&m3, &[inst]).unwrap()[0];
        assert!(row.with_premise && !row.implication && !row.dt_holds());
        let w = row.witness.as_ref().unwrap();
        assert_eq!(w.valuation.display(m3.algebra()).to_string(), "p=1, q=1/2");
        assert_eq!(m3.algebra().label(w.conclusion_value), "0");
    }

    #[test]
    fn converse_failure_needs_lost_variables() {
        let h = matrix("H3+w").unwrap();
        let insts = [
            DeductionInstance::new(vec![], f(&h, "0"), f(&h, "q")),
            DeductionInstance::new(vec![], f(&h, "p & q"), f(&h, "p")),
        ];
        let rows = probe_deduction(&h, &insts).unwrap();
        assert!(rows[0].dt_holds() && rows[0].converse_holds());
        assert!(rows[1].implication && !rows[1].with_premise && !rows[1].instance.var_included());
        let l = left_companion(MatrixOracle::new("H3", vec![matrix("H3").unwrap()]));
        let via_companion = deduction_report(&l, &insts).unwrap();
        assert_eq!(
            via_companion.iter().map(|r| (r.with_premise, r.implication)).collect::<Vec<_>>(),
            rows.iter().map(|r| (r.with_premise, r.implication)).collect::<Vec<_>>()
        );
    }

    #[test]
    fn missing_operators() {
        let lat = matrix("M3").unwrap().algebra().reduct(&["&", "|"]);
        let m = Matrix::new(lat, [0].into()).unwrap();
        assert_eq!(probe_ecq(&m), Err(ProbeError::MissingOperator("~")));
        assert_eq!(probe_deduction(&m, &[]), Err(ProbeError::MissingOperator("->")));
    }
}
