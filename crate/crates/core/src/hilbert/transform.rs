//! Proof transformations: theorem proofs into the restricted companion,
//! and removal of unused lines.

use std::collections::{BTreeSet, HashMap};

use super::{
    axiom_instance, check_proof, restricted_system, restriction_changes, HilbertSystem, Justification, Proof,
    ProofError,
};
use crate::syntax::{match_schema, Formula, Substitution};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TransformError {
    #[error("input proof does not check: {0}")]
    Invalid(ProofError),
    #[error("theorem proofs may not use hypotheses")]
    HasHypotheses,
    #[error("conclusion {0} has no variables and the language has no constants to collapse onto")]
    NoFixedTerm(Formula),
    #[error("translated proof fails to check: {0}")]
    Output(ProofError),
}

/// Merge lines with identical formulas into their first occurrence.
fn dedupe(p: Proof) -> Proof {
    let mut first: HashMap<Formula, usize> = HashMap::new();
    let mut remap = Vec::with_capacity(p.lines.len());
    let mut out = Proof { hypotheses: p.hypotheses, lines: Vec::new() };
    for line in p.lines {
        if let Some(&j) = first.get(&line.formula) {
            remap.push(j);
            continue;
        }
        let justification = match line.justification {
            Justification::Rule { name, premises } => {
                Justification::Rule { name, premises: premises.iter().map(|&k| remap[k]).collect() }
            }
            other => other,
        };
        first.insert(line.formula.clone(), out.lines.len());
        remap.push(out.lines.len());
        out.push(line.formula, justification);
    }
    out
}

fn glue(parts: &[&Proof]) -> Proof {
    let mut out = Proof::default();
    for part in parts {
        let offset = out.lines.len();
        for line in &part.lines {
            let justification = match &line.justification {
                Justification::Rule { name, premises } => {
                    Justification::Rule { name: name.clone(), premises: premises.iter().map(|k| k + offset).collect() }
                }
                other => other.clone(),
            };
            out.push(line.formula.clone(), justification);
        }
    }
    dedupe(out)
}

fn substitute(p: &Proof, sigma: &Substitution, s: &HilbertSystem) -> Proof {
    let mut out = Proof::default();
    for line in &p.lines {
        let formula = sigma.apply(&line.formula);
        let justification = match &line.justification {
            Justification::Axiom { name, .. } => {
                let schema = s.axiom(name).expect("axiom names were checked");
                let tau = match_schema(schema, &formula).expect("substitution instances of axioms stay instances");
                Justification::Axiom { name: name.clone(), sigma: tau }
            }
            other => other.clone(),
        };
        out.push(formula, justification);
    }
    dedupe(out)
}

/// Rebuild a proof without hypotheses so that it uses only the restricted
/// rules. Each rule step glues the translated premise proofs, collapses
/// every variable outside the step's conclusion onto one fixed variable of
/// that conclusion (or a constant, when it has none), and then applies the
/// restricted rule.
pub fn translate_theorem_proof(p: &Proof, s: &HilbertSystem) -> Result<Proof, TransformError> {
    check_proof(p, s).map_err(TransformError::Invalid)?;
    if !p.hypotheses.is_empty() || p.lines.iter().any(|l| l.justification == Justification::Hypothesis) {
        return Err(TransformError::HasHypotheses);
    }
    let re = restricted_system(s);
    let names: HashMap<String, String> =
        restriction_changes(s).into_iter().map(|c| (c.original, c.restricted)).collect();
    let fallback = s.lang.constants().min().map(Formula::constant);

    let mut done: Vec<Proof> = Vec::with_capacity(p.lines.len());
    for line in &p.lines {
        let translated = match &line.justification {
            Justification::Axiom { name, sigma } => {
                let schema = s.axiom(name).expect("checked");
                let tau = axiom_instance(schema, sigma, &line.formula).expect("checked");
                let mut single = Proof::default();
                single.push(line.formula.clone(), Justification::Axiom { name: name.clone(), sigma: tau });
                single
            }
            Justification::Rule { name, premises } => {
                let parts: Vec<&Proof> = premises.iter().map(|&k| &done[k]).collect();
                let glued = glue(&parts);
                let keep = line.formula.vars();
                let fixed = match keep.iter().next() {
                    Some(v) => Formula::Var(v.clone()),
                    None => fallback.clone().ok_or_else(|| TransformError::NoFixedTerm(line.formula.clone()))?,
                };
                let sigma: Substitution =
                    glued.vars().into_iter().filter(|v| !keep.contains(v)).map(|v| (v, fixed.clone())).collect();
                let mut out = substitute(&glued, &sigma, s);
                let refs: Vec<usize> = premises
                    .iter()
                    .map(|&k| {
                        let target = sigma.apply(&p.lines[k].formula);
                        out.lines.iter().position(|l| l.formula == target).expect("premise survives substitution")
                    })
                    .collect();
                if let Some(existing) = out.lines.iter().position(|l| l.formula == line.formula) {
                    // the conclusion already occurs; cut the proof there
                    out.lines.truncate(existing + 1);
                } else {
                    out.push(line.formula.clone(), Justification::Rule { name: names[name].clone(), premises: refs });
                }
                out
            }
            Justification::Hypothesis => unreachable!("rejected above"),
        };
        done.push(translated);
    }
    let result = done.pop().expect("checked proofs are non-empty");
    check_proof(&result, &re).map_err(TransformError::Output)?;
    Ok(result)
}

/// Drop duplicate and unused lines: what remains is exactly what the last
/// line depends on, with only the hypotheses it uses.
pub fn prune_derivation(p: &Proof, s: &HilbertSystem) -> Result<Proof, TransformError> {
    check_proof(p, s).map_err(TransformError::Invalid)?;
    let d = dedupe(p.clone());
    let last = d.lines.iter().position(|l| Some(&l.formula) == p.conclusion()).expect("conclusion is kept");
    let mut keep = BTreeSet::new();
    let mut stack = vec![last];
    while let Some(i) = stack.pop() {
        if keep.insert(i) {
            if let Justification::Rule { premises, .. } = &d.lines[i].justification {
                stack.extend(premises);
            }
        }
    }
    let renumber: HashMap<usize, usize> = keep.iter().enumerate().map(|(n, &o)| (o, n)).collect();
    let mut out = Proof::default();
    for &i in &keep {
        let line = &d.lines[i];
        let justification = match &line.justification {
            Justification::Rule { name, premises } => {
                Justification::Rule { name: name.clone(), premises: premises.iter().map(|k| renumber[k]).collect() }
            }
            other => other.clone(),
        };
        out.push(line.formula.clone(), justification);
    }
    out.hypotheses = p
        .hypotheses
        .iter()
        .filter(|h| out.lines.iter().any(|l| &l.formula == *h && l.justification == Justification::Hypothesis))
        .cloned()
        .collect();
    check_proof(&out, s).map_err(TransformError::Output)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{Rule, SideCondition};
    use crate::syntax::{parse_formula, Language};

    fn g(s: &str) -> Formula {
        parse_formula(s, &Language::heyting()).unwrap()
    }

    fn ks() -> HilbertSystem {
        HilbertSystem::new(
            "KS",
            Language::heyting(),
            vec![("A1".into(), g("a -> (b -> a)")), ("A2".into(), g("(a -> (b -> c)) -> ((a -> b) -> (a -> c))"))],
            vec![Rule::new("MP", vec![g("a"), g("a -> b")], g("b"))],
        )
        .unwrap()
    }

    fn ax(p: &mut Proof, f: &str, name: &str) -> usize {
        p.push(g(f), Justification::Axiom { name: name.into(), sigma: Substitution::new() })
    }

    fn mp(p: &mut Proof, f: &str, a: usize, b: usize) -> usize {
        p.push(g(f), Justification::Rule { name: "MP".into(), premises: vec![a, b] })
    }

    /// p -> p through an idle detour that loses q.
    fn detour() -> Proof {
        let mut p = Proof::default();
        let a = ax(&mut p, "(p -> ((q -> q) -> p)) -> ((p -> (q -> q)) -> (p -> p))", "A2");
        let b = ax(&mut p, "p -> ((q -> q) -> p)", "A1");
        let c = mp(&mut p, "(p -> (q -> q)) -> (p -> p)", b, a);
        let d = ax(&mut p, "(q -> q) -> (p -> (q -> q))", "A1");
        let e = ax(&mut p, "q -> ((q -> q) -> q)", "A1");
        let f = ax(&mut p, "(q -> ((q -> q) -> q)) -> ((q -> (q -> q)) -> (q -> q))", "A2");
        let h = mp(&mut p, "(q -> (q -> q)) -> (q -> q)", e, f);
        let i = ax(&mut p, "q -> (q -> q)", "A1");
        let j = mp(&mut p, "q -> q", i, h);
        let k = mp(&mut p, "p -> (q -> q)", j, d);
        mp(&mut p, "p -> p", k, c);
        p
    }

    #[test]
    fn detour_is_collapsed() {
        let s = ks();
        let p = detour();
        check_proof(&p, &s).unwrap();
        let re = restricted_system(&s);
        assert_eq!(re.rules[0].condition, Some(SideCondition::VarInclusion));
        let mut renamed = p.clone();
        for l in &mut renamed.lines {
            if let Justification::Rule { name, .. } = &mut l.justification {
                *name = "RMP".into();
            }
        }
        assert!(check_proof(&renamed, &re).is_err());
        let t = translate_theorem_proof(&p, &s).unwrap();
        check_proof(&t, &re).unwrap();
        assert_eq!(t.conclusion(), Some(&g("p -> p")));
        assert!(t.vars().iter().all(|v| &**v == "p"));
    }

    #[test]
    fn single_axiom_is_unchanged() {
        let mut p = Proof::default();
        ax(&mut p, "p -> (q -> p)", "A1");
        let t = translate_theorem_proof(&p, &ks()).unwrap();
        assert_eq!(t.lines.len(), 1);
        assert_eq!(t.lines[0].formula, p.lines[0].formula);
    }

    #[test]
    fn inclusive_steps_keep_their_shape() {
        let mut p = Proof::default();
        let a = ax(&mut p, "(p -> ((p -> p) -> p)) -> ((p -> (p -> p)) -> (p -> p))", "A2");
        let b = ax(&mut p, "p -> ((p -> p) -> p)", "A1");
        let c = mp(&mut p, "(p -> (p -> p)) -> (p -> p)", b, a);
        let d = ax(&mut p, "p -> (p -> p)", "A1");
        mp(&mut p, "p -> p", d, c);
        let t = translate_theorem_proof(&p, &ks()).unwrap();
        let formulas = |q: &Proof| q.lines.iter().map(|l| l.formula.clone()).collect::<BTreeSet<_>>();
        assert_eq!(formulas(&t), formulas(&p));
        assert_eq!(t.lines.len(), p.lines.len());
    }

    #[test]
    fn constant_fallback() {
        // 0 -> 0 through a detour via q; the collapse target is the constant 0
        let mut p = Proof::default();
        let a = ax(&mut p, "(0 -> ((q -> 0) -> 0)) -> ((0 -> (q -> 0)) -> (0 -> 0))", "A2");
        let b = ax(&mut p, "0 -> ((q -> 0) -> 0)", "A1");
        let c = mp(&mut p, "(0 -> (q -> 0)) -> (0 -> 0)", b, a);
        let d = ax(&mut p, "0 -> (q -> 0)", "A1");
        mp(&mut p, "0 -> 0", d, c);
        let t = translate_theorem_proof(&p, &ks()).unwrap();
        assert!(t.vars().is_empty());
    }

    #[test]
    fn pruning() {
        let s = ks();
        let mut p = Proof { hypotheses: vec![g("r"), g("p")], lines: vec![] };
        p.push(g("r"), Justification::Hypothesis);
        let h = p.push(g("p"), Justification::Hypothesis);
        let a = ax(&mut p, "p -> (q -> p)", "A1");
        mp(&mut p, "q -> p", h, a);
        let pruned = prune_derivation(&p, &s).unwrap();
        assert_eq!(pruned.lines.len(), 3);
        assert_eq!(pruned.hypotheses, vec![g("p")]);
        assert_eq!(prune_derivation(&pruned, &s).unwrap(), pruned);
    }

    #[test]
    fn rejects_hypotheses() {
        let mut p = Proof { hypotheses: vec![g("p")], lines: vec![] };
        p.push(g("p"), Justification::Hypothesis);
        assert_eq!(translate_theorem_proof(&p, &ks()), Err(TransformError::HasHypotheses));
    }
}
