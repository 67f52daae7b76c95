//! Bounded forward proof search.
//!
//! Round 0 holds the hypotheses and every axiom instance whose metavariables
//! are drawn from a finite pool of formulas. Each later round applies every
//! rule with at least one premise from the previous round. Metavariables of
//! a rule conclusion that no premise binds are also drawn from the pool.
//! Everything above the size cap is discarded, so the search space is
//! finite at each depth and the result is deterministic.

use std::collections::{BTreeSet, HashMap};

use super::{HilbertSystem, Justification, Proof, Rule};
use crate::syntax::{match_into, Formula, Schema, Substitution, Symbol};

/// Where axiom and free-metavariable instantiations come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PoolPolicy {
    /// Subformulas of the hypotheses and goal, plus the language constants.
    #[default]
    Subformulas,
    /// The above, closed under substitutions sending each variable to a
    /// variable of the goal or a constant. Needed when a proof passes
    /// through collapsed copies of its formulas.
    RenamingClosure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Number of rule rounds.
    pub depth: usize,
    /// Largest formula size (node count) kept.
    pub size_cap: usize,
    pub pool: PoolPolicy,
}

impl Limits {
    pub fn new(depth: usize, size_cap: usize) -> Self {
        Limits { depth, size_cap, pool: PoolPolicy::Subformulas }
    }

    pub fn with_pool(mut self, pool: PoolPolicy) -> Self {
        self.pool = pool;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Proof),
    NotFound { depth: usize, facts: usize },
}

impl SearchOutcome {
    pub fn proof(&self) -> Option<&Proof> {
        match self {
            SearchOutcome::Found(p) => Some(p),
            SearchOutcome::NotFound { .. } => None,
        }
    }

    pub fn is_found(&self) -> bool {
        self.proof().is_some()
    }
}

fn pool(hyps: &[Formula], goal: &Formula, s: &HilbertSystem, policy: PoolPolicy) -> Vec<Formula> {
    let mut out: BTreeSet<Formula> = hyps.iter().chain(std::iter::once(goal)).flat_map(|f| f.subformulas()).collect();
    out.extend(s.lang.constants().map(Formula::constant));
    if policy == PoolPolicy::RenamingClosure {
        let vars: Vec<Symbol> = out.iter().flat_map(|f| f.vars()).collect::<BTreeSet<_>>().into_iter().collect();
        let mut targets: Vec<Formula> = goal.vars().into_iter().map(Formula::Var).collect();
        targets.extend(s.lang.constants().map(Formula::constant));
        if !targets.is_empty() {
            let base: Vec<Formula> = out.iter().cloned().collect();
            let mut choice = vec![0usize; vars.len()];
            loop {
                let sigma: Substitution =
                    vars.iter().cloned().zip(choice.iter().map(|&c| targets[c].clone())).collect();
                out.extend(base.iter().map(|f| sigma.apply(f)));
                let mut k = vars.len();
                loop {
                    if k == 0 {
                        break;
                    }
                    k -= 1;
                    choice[k] += 1;
                    if choice[k] < targets.len() {
                        break;
                    }
                    choice[k] = 0;
                }
                if choice.iter().all(|&c| c == 0) {
                    break;
                }
            }
        }
    }
    out.into_iter().collect()
}

fn occurrences(f: &Formula, counts: &mut HashMap<Symbol, usize>, fixed: &mut usize) {
    match f {
        Formula::Var(v) => *counts.entry(v.clone()).or_default() += 1,
        Formula::App(_, args) => {
            *fixed += 1;
            args.iter().for_each(|a| occurrences(a, counts, fixed));
        }
    }
}

struct Facts {
    lines: Vec<(Formula, Justification)>,
    known: HashMap<Formula, usize>,
    by_head: HashMap<Symbol, Vec<usize>>,
    by_head_arg: HashMap<(Symbol, Formula), Vec<usize>>,
}

impl Facts {
    fn new() -> Self {
        Facts { lines: Vec::new(), known: HashMap::new(), by_head: HashMap::new(), by_head_arg: HashMap::new() }
    }

    fn add(&mut self, f: Formula, j: Justification) -> Option<usize> {
        if self.known.contains_key(&f) {
            return None;
        }
        let id = self.lines.len();
        if let Formula::App(op, args) = &f {
            self.by_head.entry(op.clone()).or_default().push(id);
            if let Some(a0) = args.first() {
                self.by_head_arg.entry((op.clone(), a0.clone())).or_default().push(id);
            }
        }
        self.known.insert(f.clone(), id);
        self.lines.push((f, j));
        Some(id)
    }

    /// Facts below `end` that might match `schema` under `sigma`.
    fn candidates(&self, schema: &Schema, sigma: &Substitution, end: usize) -> Vec<usize> {
        let bound = |f: &Formula| f.vars().iter().all(|v| sigma.get(v).is_some());
        if bound(schema) {
            return self.known.get(&sigma.apply(schema)).filter(|&&id| id < end).into_iter().copied().collect();
        }
        let bucket = match schema {
            Formula::Var(_) => return (0..end).collect(),
            Formula::App(op, args) => match args.first() {
                Some(a0) if bound(a0) => self.by_head_arg.get(&(op.clone(), sigma.apply(a0))),
                _ => self.by_head.get(op),
            },
        };
        bucket.map(|ids| ids.iter().copied().take_while(|&id| id < end).collect()).unwrap_or_default()
    }

    fn proof_of(&self, hyps: &[Formula], goal: usize) -> Proof {
        let mut keep = BTreeSet::new();
        let mut stack = vec![goal];
        while let Some(id) = stack.pop() {
            if keep.insert(id) {
                if let Justification::Rule { premises, .. } = &self.lines[id].1 {
                    stack.extend(premises);
                }
            }
        }
        let renumber: HashMap<usize, usize> = keep.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let mut proof = Proof { hypotheses: hyps.to_vec(), lines: Vec::new() };
        for &id in &keep {
            let (f, j) = &self.lines[id];
            let j = match j {
                Justification::Rule { name, premises } => {
                    Justification::Rule { name: name.clone(), premises: premises.iter().map(|p| renumber[p]).collect() }
                }
                other => other.clone(),
            };
            proof.push(f.clone(), j);
        }
        proof
    }
}

/// Enumerate all bindings of `vars` to pool members, calling `visit` with
/// the completed substitution. Stops when `visit` returns true.
fn bind_from_pool(
    vars: &[Symbol],
    pool: &[Formula],
    sigma: &Substitution,
    mut visit: impl FnMut(&Substitution) -> bool,
) -> bool {
    if vars.is_empty() {
        return visit(sigma);
    }
    if pool.is_empty() {
        return false;
    }
    let mut choice = vec![0usize; vars.len()];
    loop {
        let mut s = sigma.clone();
        for (v, &c) in vars.iter().zip(&choice) {
            s.bind(v, pool[c].clone());
        }
        if visit(&s) {
            return true;
        }
        let mut k = vars.len();
        loop {
            if k == 0 {
                return false;
            }
            k -= 1;
            choice[k] += 1;
            if choice[k] < pool.len() {
                break;
            }
            choice[k] = 0;
        }
    }
}

struct Search<'a> {
    system: &'a HilbertSystem,
    pool: Vec<Formula>,
    cap: usize,
    goal: &'a Formula,
    facts: Facts,
}

impl Search<'_> {
    /// Add `f` if new and small enough; true when it is the goal.
    fn offer(&mut self, f: Formula, j: Justification) -> bool {
        if f.size() > self.cap {
            return false;
        }
        let is_goal = &f == self.goal;
        self.facts.add(f, j).is_some() && is_goal
    }

    fn axioms(&mut self) -> bool {
        let system = self.system;
        for (name, schema) in &system.axioms {
            let vars: Vec<Symbol> = schema.vars().into_iter().collect();
            let (mut counts, mut fixed) = (HashMap::new(), 0);
            occurrences(schema, &mut counts, &mut fixed);
            let pool = std::mem::take(&mut self.pool);
            let mut hit = false;
            bind_from_pool(&vars, &pool, &Substitution::new(), |sigma| {
                let size: usize = fixed + vars.iter().map(|v| counts[v] * sigma.get(v).unwrap().size()).sum::<usize>();
                if size <= self.cap {
                    let f = sigma.apply(schema);
                    hit = self.offer(f, Justification::Axiom { name: name.clone(), sigma: sigma.clone() });
                }
                hit
            });
            self.pool = pool;
            if hit {
                return true;
            }
        }
        false
    }

    /// Apply `rule` with premise `pivot` drawn from `new` and the rest from
    /// everything below `new.end`.
    fn apply(&mut self, rule: &Rule, pivot: usize, new: std::ops::Range<usize>) -> bool {
        let mut matches: Vec<(Substitution, Vec<usize>)> = Vec::new();
        for id in new.clone() {
            let mut sigma = Substitution::new();
            if !match_into(&rule.premises[pivot], &self.facts.lines[id].0, &mut sigma) {
                continue;
            }
            let mut partial = vec![(sigma, vec![usize::MAX; rule.premises.len()])];
            partial[0].1[pivot] = id;
            for (k, schema) in rule.premises.iter().enumerate() {
                if k == pivot {
                    continue;
                }
                let mut next = Vec::new();
                for (sigma, ids) in &partial {
                    for cand in self.facts.candidates(schema, sigma, new.end) {
                        let mut s = sigma.clone();
                        if match_into(schema, &self.facts.lines[cand].0, &mut s) {
                            let mut ids = ids.clone();
                            ids[k] = cand;
                            next.push((s, ids));
                        }
                    }
                }
                partial = next;
            }
            matches.extend(partial);
        }
        let free: Vec<Symbol> = rule.conclusion.vars().into_iter().collect();
        let pool = std::mem::take(&mut self.pool);
        let mut hit = false;
        for (sigma, ids) in matches {
            let unbound: Vec<Symbol> = free.iter().filter(|v| sigma.get(v).is_none()).cloned().collect();
            hit = bind_from_pool(&unbound, &pool, &sigma, |s| {
                if rule.side_condition_holds(s).is_err() {
                    return false;
                }
                let f = s.apply(&rule.conclusion);
                self.offer(f, Justification::Rule { name: rule.name.clone(), premises: ids.clone() })
            });
            if hit {
                break;
            }
        }
        self.pool = pool;
        hit
    }
}

/// Search for a proof of `goal` from `hyps` within `limits`.
pub fn derive_bounded(hyps: &[Formula], goal: &Formula, s: &HilbertSystem, limits: Limits) -> SearchOutcome {
    let mut hyp_list: Vec<Formula> = Vec::new();
    for h in hyps {
        if !hyp_list.contains(h) {
            hyp_list.push(h.clone());
        }
    }
    let mut search = Search {
        system: s,
        pool: pool(&hyp_list, goal, s, limits.pool),
        cap: limits.size_cap.max(goal.size()),
        goal,
        facts: Facts::new(),
    };
    for h in &hyp_list {
        search.facts.add(h.clone(), Justification::Hypothesis);
    }
    let found = |search: &Search| search.facts.known.get(goal).map(|&id| search.facts.proof_of(&hyp_list, id));
    if let Some(p) = found(&search) {
        return SearchOutcome::Found(p);
    }
    search.axioms();
    if let Some(p) = found(&search) {
        return SearchOutcome::Found(p);
    }
    let mut layer = 0..search.facts.lines.len();
    for _ in 0..limits.depth {
        if layer.is_empty() {
            break;
        }
        for rule in &s.rules {
            for pivot in 0..rule.premises.len() {
                if search.apply(rule, pivot, layer.clone()) {
                    return SearchOutcome::Found(found(&search).expect("goal was just added"));
                }
            }
        }
        layer = layer.end..search.facts.lines.len();
    }
    SearchOutcome::NotFound { depth: limits.depth, facts: search.facts.lines.len() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{check_proof, restricted_system};
    use crate::syntax::{parse_formula, Language};

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

    #[test]
    fn separation_example() {
        let s = minimal();
        let out = derive_bounded(&[f("p & q")], &f("p | q"), &s, Limits::new(4, 8));
        let proof = out.proof().expect("found");
        assert_eq!(proof.lines.len(), 3);
        check_proof(proof, &s).unwrap();
        let re = restricted_system(&s);
        assert!(!derive_bounded(&[f("p & q")], &f("p | q"), &re, Limits::new(8, 8)).is_found());
    }

    #[test]
    fn implication_through_axioms() {
        let lang = Language::from_grammar(&["->"]);
        let g = |s: &str| parse_formula(s, &lang).unwrap();
        let s = HilbertSystem::new(
            "K+S",
            lang.clone(),
            vec![("A1".into(), g("a -> (b -> a)")), ("A2".into(), g("(a -> (b -> c)) -> ((a -> b) -> (a -> c))"))],
            vec![Rule::new("MP", vec![g("a"), g("a -> b")], g("b"))],
        )
        .unwrap();
        let out = derive_bounded(&[], &g("p -> p"), &s, Limits::new(2, 20));
        let proof = out.proof().expect("found");
        check_proof(proof, &s).unwrap();
        assert_eq!(proof.lines.len(), 5);
        assert!(!derive_bounded(&[], &g("p -> p"), &s, Limits::new(1, 20)).is_found());
    }

    #[test]
    fn hypothesis_goal_is_immediate() {
        let out = derive_bounded(&[f("p")], &f("p"), &minimal(), Limits::new(0, 1));
        assert_eq!(out.proof().unwrap().lines.len(), 1);
    }

    #[test]
    fn renaming_closure_adds_collapsed_copies() {
        let s = minimal();
        let base = pool(&[], &f("p & q"), &s, PoolPolicy::Subformulas);
        let closed = pool(&[], &f("p & q"), &s, PoolPolicy::RenamingClosure);
        assert_eq!(base.len(), 3);
        assert!(closed.contains(&f("p & p")) && closed.contains(&f("q & p")));
    }
}
