//! Finite-scale property experiments: Płonka agreement, containment of the
//! restricted companion, proof translation, consequence conditions and
//! deduction-theorem transfer.

use std::collections::{BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::catalog;
use crate::companions::{check_conditions, left_companion, theorem_disagreements, ConsequenceOracle, MatrixOracle};
use crate::hilbert::format::parse_proof;
use crate::hilbert::{
    check_proof, derive_bounded, extract_delta, prune_derivation, restricted_system, restriction_changes,
    translate_theorem_proof, HilbertSystem, Justification, Limits, Proof, SearchOutcome,
};
use crate::plonka::adjoin_contaminating;
use crate::probes::{deduction_report, DeductionInstance};
use crate::syntax::{formulas_up_to_depth, Formula, FormulaSampler, Language, Sequent};

/// Checked-in theorem proofs, as `(name, script)`.
pub const CORPUS: &[(&str, &str)] = &[
    ("ipc-identity-q", include_str!("../corpus/ipc-identity-q.proof")),
    ("ipc-identity-qr", include_str!("../corpus/ipc-identity-qr.proof")),
    ("ipc-identity-p", include_str!("../corpus/ipc-identity-p.proof")),
    ("ipc-constant", include_str!("../corpus/ipc-constant.proof")),
    ("ipc-and-or", include_str!("../corpus/ipc-and-or.proof")),
    ("ipc-and-or-right", include_str!("../corpus/ipc-and-or-right.proof")),
    ("ipc-weakened-theorem", include_str!("../corpus/ipc-weakened-theorem.proof")),
    ("cpc-dne-or", include_str!("../corpus/cpc-dne-or.proof")),
    ("cpc-identity-r", include_str!("../corpus/cpc-identity-r.proof")),
    ("hprl-identity", include_str!("../corpus/hprl-identity.proof")),
    ("hprl-lossy-hs", include_str!("../corpus/hprl-lossy-hs.proof")),
    ("hprl-and-left", include_str!("../corpus/hprl-and-left.proof")),
    ("hprl-lossy-mp", include_str!("../corpus/hprl-lossy-mp.proof")),
    ("hprl-contraposition", include_str!("../corpus/hprl-contraposition.proof")),
    ("hprl-interior", include_str!("../corpus/hprl-interior.proof")),
];

/// Matrices used by the Płonka and condition experiments.
pub const PLONKA_MATRICES: &[&str] = &["B2", "H3", "prerough3", "prerough3-std", "M3", "PS3"];

const VARS: [&str; 3] = ["p", "q", "r"];

/// Instances with at most two premises over `p, q, r`: every conclusion of
/// depth ≤ 1 against every premise set built from atoms, then `random`
/// draws with premise depth ≤ 2 and conclusion depth ≤ 3.
pub fn desk_instances(lang: &Language, random: usize, seed: u64) -> Vec<Sequent> {
    let atoms = formulas_up_to_depth(lang, &VARS, 0);
    let conclusions = formulas_up_to_depth(lang, &VARS, 1);
    let mut premise_sets: Vec<Vec<Formula>> = vec![vec![]];
    for (i, a) in atoms.iter().enumerate() {
        premise_sets.push(vec![a.clone()]);
        for b in &atoms[i + 1..] {
            premise_sets.push(vec![a.clone(), b.clone()]);
        }
    }
    let mut out = Vec::new();
    for c in &conclusions {
        for s in &premise_sets {
            out.push(Sequent { premises: s.clone(), conclusion: c.clone() });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let premise = FormulaSampler::new(lang, &VARS, 2);
    let conclusion = FormulaSampler::new(lang, &VARS, 3);
    for _ in 0..random {
        let k = rng.gen_range(0..=2);
        let premises = (0..k).map(|_| premise.sample(&mut rng)).collect();
        out.push(Sequent { premises, conclusion: conclusion.sample(&mut rng) });
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgreementReport {
    pub matrix: String,
    pub checked: usize,
    pub disagreements: Vec<Sequent>,
}

/// `left(⊨_m)` against `⊨_{m, m⊕1}` over [`desk_instances`].
pub fn plonka_agreement(id: &str, random: usize, seed: u64) -> Result<AgreementReport, String> {
    let m = catalog::matrix(id).map_err(|e| e.to_string())?;
    let ext = adjoin_contaminating(&m).map_err(|e| e.to_string())?;
    let left = left_companion(MatrixOracle::new(id, vec![m.clone()]));
    let sum = MatrixOracle::new(&format!("{id}, {id}+w"), vec![m.clone(), ext]);
    let instances = desk_instances(m.lang(), random, seed);
    let mut disagreements = Vec::new();
    for inst in &instances {
        let a = left.holds(&inst.premises, &inst.conclusion).map_err(|e| e.to_string())?;
        let b = sum.holds(&inst.premises, &inst.conclusion).map_err(|e| e.to_string())?;
        if a != b {
            disagreements.push(inst.clone());
        }
    }
    Ok(AgreementReport { matrix: id.to_string(), checked: instances.len(), disagreements })
}

/// Map a proof in the restricted companion back to the original rule names.
pub fn unrestrict_proof(p: &Proof, s: &HilbertSystem) -> Proof {
    let back: HashMap<String, String> =
        restriction_changes(s).into_iter().map(|c| (c.restricted, c.original)).collect();
    let mut out = p.clone();
    for line in &mut out.lines {
        if let Justification::Rule { name, .. } = &mut line.justification {
            if let Some(orig) = back.get(name) {
                *name = orig.clone();
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContainmentReport {
    pub system: String,
    pub instances: usize,
    /// Instances the restricted search derived.
    pub restricted_found: usize,
    /// Restricted successes that failed to certify as left-companion
    /// successes, with the reason.
    pub violations: Vec<(Sequent, String)>,
}

/// Every bounded success of the restricted companion must be a success of
/// the left companion. A restricted proof, once pruned, is certified when
/// it uses only premises whose variables occur in the goal and checks in
/// the original system.
pub fn containment(s: &HilbertSystem, instances: &[Sequent], limits: Limits) -> ContainmentReport {
    let re = restricted_system(s);
    let mut report = ContainmentReport {
        system: s.name.clone(),
        instances: instances.len(),
        restricted_found: 0,
        violations: vec![],
    };
    for inst in instances {
        let SearchOutcome::Found(proof) = derive_bounded(&inst.premises, &inst.conclusion, &re, limits) else {
            continue;
        };
        report.restricted_found += 1;
        let verdict = (|| {
            let pruned = prune_derivation(&proof, &re).map_err(|e| e.to_string())?;
            let delta = extract_delta(&inst.premises, &inst.conclusion);
            if let Some(h) = pruned.hypotheses.iter().find(|h| !delta.contains(h)) {
                return Err(format!("uses premise {h} outside Δ"));
            }
            check_proof(&unrestrict_proof(&pruned, s), s).map_err(|e| e.to_string())
        })();
        if let Err(why) = verdict {
            report.violations.push((inst.clone(), why));
        }
    }
    report
}

/// Premise sets of up to two formulas of depth ≤ 1 over `vars`, against
/// conclusions of depth ≤ 1.
pub fn small_instances(lang: &Language, vars: &[&str]) -> Vec<Sequent> {
    let fs = formulas_up_to_depth(lang, vars, 1);
    let mut sets: Vec<Vec<Formula>> = vec![vec![]];
    for (i, a) in fs.iter().enumerate() {
        sets.push(vec![a.clone()]);
        for b in &fs[i + 1..] {
            sets.push(vec![a.clone(), b.clone()]);
        }
    }
    let mut out = Vec::new();
    for c in &fs {
        for s in &sets {
            out.push(Sequent { premises: s.clone(), conclusion: c.clone() });
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslationRow {
    pub name: String,
    pub system: String,
    pub lines_in: usize,
    pub outcome: Result<usize, String>,
}

/// Translate every corpus proof and check the result in the restricted
/// system.
pub fn translate_corpus() -> Vec<TranslationRow> {
    CORPUS
        .iter()
        .map(|(name, text)| {
            let run = || -> Result<(String, usize, usize), String> {
                let system_id = text
                    .lines()
                    .find_map(|l| l.strip_prefix("system "))
                    .ok_or("proof has no system header")?
                    .trim()
                    .to_string();
                let s = catalog::system(&system_id).map_err(|e| e.to_string())?;
                let script = parse_proof(text, &s.lang).map_err(|e| e.to_string())?;
                let out = translate_theorem_proof(&script.proof, &s).map_err(|e| e.to_string())?;
                check_proof(&out, &restricted_system(&s)).map_err(|e| e.to_string())?;
                Ok((system_id, script.proof.lines.len(), out.lines.len()))
            };
            match run() {
                Ok((system, lines_in, lines_out)) => {
                    TranslationRow { name: name.to_string(), system, lines_in, outcome: Ok(lines_out) }
                }
                Err(e) => {
                    TranslationRow { name: name.to_string(), system: String::new(), lines_in: 0, outcome: Err(e) }
                }
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionSummary {
    pub oracle: String,
    pub trials: usize,
    pub engaged: [usize; 4],
    pub violations: Vec<String>,
}

/// (C1)–(C4) for `⊨_m` and `left(⊨_m)`, plus `⊢^l ⊆ ⊢` on random
/// instances and theorem equality on all formulas of depth ≤ 2 over `p, q`.
pub fn consequence_conditions(id: &str, trials: usize, seed: u64) -> Result<Vec<ConditionSummary>, String> {
    let m = catalog::matrix(id).map_err(|e| e.to_string())?;
    let base = MatrixOracle::new(id, vec![m.clone()]);
    let left = left_companion(&base);
    let sampler = FormulaSampler::new(m.lang(), &VARS, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let summarize = |oracle: String, r: crate::companions::ConditionReport| ConditionSummary {
        oracle,
        trials,
        engaged: r.engaged,
        violations: r.violations.iter().map(|v| format!("{}: {}", v.condition.label(), v.detail)).collect(),
    };
    let mut out = vec![
        summarize(id.to_string(), check_conditions(&base, &sampler, trials, &mut rng).map_err(|e| e.to_string())?),
        summarize(
            format!("left({id})"),
            check_conditions(&left, &sampler, trials, &mut rng).map_err(|e| e.to_string())?,
        ),
    ];

    let mut inclusion = Vec::new();
    for inst in desk_instances(m.lang(), trials, seed ^ 0x5eed) {
        let l = left.holds(&inst.premises, &inst.conclusion).map_err(|e| e.to_string())?;
        if l && !base.holds(&inst.premises, &inst.conclusion).map_err(|e| e.to_string())? {
            inclusion.push(format!("⊢^l ⊄ ⊢ at {inst}"));
        }
    }
    let theorems = formulas_up_to_depth(m.lang(), &["p", "q"], 2);
    let diff = theorem_disagreements(&base, &left, &theorems).map_err(|e| e.to_string())?;
    inclusion.extend(diff.iter().map(|f| format!("theoremhood differs at {f}")));
    out.push(ConditionSummary {
        oracle: format!("left({id}) vs {id}"),
        trials: trials + theorems.len(),
        engaged: [0; 4],
        violations: inclusion,
    });
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DeductionTransfer {
    pub instances: usize,
    /// Instances on which the base itself satisfies both directions.
    pub base_dt: usize,
    pub included: usize,
    /// Non-included instances where the converse fails, as it may.
    pub converse_failures: usize,
    pub violations: Vec<String>,
}

/// Deduction-theorem transfer to `left(⊨_m)`. On instances where the base
/// satisfies both directions: the direct direction always holds for the
/// companion; the converse holds whenever `var(α) ⊆ var(β)`; otherwise
/// adding `α` changes nothing, and some such instance must break the
/// converse.
pub fn deduction_transfer(id: &str) -> Result<DeductionTransfer, String> {
    let m = catalog::matrix(id).map_err(|e| e.to_string())?;
    let base = MatrixOracle::new(id, vec![m.clone()]);
    let left = left_companion(&base);
    let fs = formulas_up_to_depth(m.lang(), &["p", "q"], 1);
    let mut sigmas: Vec<Vec<Formula>> = vec![vec![]];
    sigmas.extend(fs.iter().map(|f| vec![f.clone()]));
    let mut insts = Vec::new();
    for s in &sigmas {
        for a in &fs {
            for b in &fs {
                insts.push(DeductionInstance::new(s.clone(), a.clone(), b.clone()));
            }
        }
    }
    let base_rows = deduction_report(&base, &insts).map_err(|e| e.to_string())?;
    let rows = deduction_report(&left, &insts).map_err(|e| e.to_string())?;
    let mut r = DeductionTransfer { instances: insts.len(), ..Default::default() };
    for (b, l) in base_rows.iter().zip(&rows) {
        if !(b.dt_holds() && b.converse_holds()) {
            continue;
        }
        r.base_dt += 1;
        if !l.dt_holds() {
            r.violations.push(format!("DT fails: {l}"));
        }
        if l.instance.var_included() {
            r.included += 1;
            if !l.converse_holds() {
                r.violations.push(format!("converse fails despite inclusion: {l}"));
            }
        } else {
            if !l.converse_holds() {
                r.converse_failures += 1;
            }
            let without = left.holds(&l.instance.sigma, &l.instance.beta).map_err(|e| e.to_string())?;
            if without != l.with_premise {
                r.violations.push(format!("adding a non-included α changed the verdict: {l}"));
            }
        }
    }
    if r.converse_failures == 0 {
        r.violations.push("no instance without inclusion breaks the converse".into());
    }
    Ok(r)
}

/// Variables of every line in a proof, for reporting.
pub fn proof_vars(p: &Proof) -> BTreeSet<String> {
    p.vars().iter().map(|v| v.to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_translates() {
        let rows = translate_corpus();
        assert!(rows.len() >= 10);
        for r in rows {
            assert!(r.outcome.is_ok(), "{}: {:?}", r.name, r.outcome);
        }
    }

    #[test]
    fn corpus_checks_in_its_own_system() {
        for (name, text) in CORPUS {
            let id = text.lines().find_map(|l| l.strip_prefix("system ")).unwrap().trim();
            let s = catalog::system(id).unwrap();
            let p = parse_proof(text, &s.lang).unwrap().proof;
            check_proof(&p, &s).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(p.hypotheses.is_empty());
        }
    }

    #[test]
    fn small_plonka_agreement() {
        let r = plonka_agreement("M3", 200, 1).unwrap();
        assert!(r.disagreements.is_empty(), "{:?}", r.disagreements);
    }

    #[test]
    fn minimal_containment() {
        let s = catalog::system("minimal").unwrap();
        let insts = small_instances(&s.lang, &["p", "q"]);
        let r = containment(&s, &insts, Limits::new(3, 7));
        assert!(r.violations.is_empty(), "{:?}", r.violations);
        assert!(r.restricted_found > 0);
    }

    #[test]
    fn h3_deduction_transfer() {
        let r = deduction_transfer("H3").unwrap();
        assert!(r.violations.is_empty(), "{:?}", r.violations);
        assert!(r.included > 0 && r.converse_failures > 0);
    }
}
