//! Formula enumeration and random sampling for property checks.

use rand::Rng;

use super::{Formula, Language};

/// Every formula of depth at most `depth` over `vars` (constants included),
/// in a deterministic order: by depth, then by operator order in `lang`.
pub fn formulas_up_to_depth(lang: &Language, vars: &[&str], depth: usize) -> Vec<Formula> {
    let mut levels: Vec<Vec<Formula>> = Vec::new();
    let mut leaves: Vec<Formula> = vars.iter().map(|v| Formula::var(v)).collect();
    leaves.extend(lang.constants().map(Formula::constant));
    levels.push(leaves);
    for d in 1..=depth {
        let below: Vec<Formula> = levels.iter().flatten().cloned().collect();
        let mut fresh = Vec::new();
        for (op, arity) in lang.operators() {
            if arity == 0 {
                continue;
            }
            // tuples over `below` with at least one argument at depth d-1
            let mut idx = vec![0usize; arity];
            'tuples: loop {
                let args: Vec<Formula> = idx.iter().map(|&i| below[i].clone()).collect();
                if args.iter().any(|a| a.depth() == d - 1) {
                    fresh.push(Formula::app(op, args));
                }
                for k in (0..arity).rev() {
                    idx[k] += 1;
                    if idx[k] < below.len() {
                        continue 'tuples;
                    }
                    idx[k] = 0;
                }
                break;
            }
        }
        levels.push(fresh);
    }
    levels.into_iter().flatten().collect()
}

/// Random formulas over a fixed variable set with bounded depth.
#[derive(Debug, Clone)]
pub struct FormulaSampler {
    lang: Language,
    vars: Vec<String>,
    max_depth: usize,
    /// Probability of stopping at a leaf before the depth bound.
    leaf_bias: f64,
}

impl FormulaSampler {
    pub fn new(lang: &Language, vars: &[&str], max_depth: usize) -> Self {
        FormulaSampler {
            lang: lang.clone(),
            vars: vars.iter().map(|s| s.to_string()).collect(),
            max_depth,
            leaf_bias: 0.3,
        }
    }

    pub fn with_leaf_bias(mut self, bias: f64) -> Self {
        self.leaf_bias = bias;
        self
    }

    pub fn vars(&self) -> Vec<&str> {
        self.vars.iter().map(String::as_str).collect()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Formula {
        self.sample_depth(rng, self.max_depth)
    }

    pub fn sample_depth<R: Rng + ?Sized>(&self, rng: &mut R, depth: usize) -> Formula {
        let compound: Vec<(&str, usize)> = self.lang.operators().filter(|(_, a)| *a > 0).collect();
        if depth == 0 || compound.is_empty() || rng.gen_bool(self.leaf_bias) {
            return self.leaf(rng);
        }
        let (op, arity) = compound[rng.gen_range(0..compound.len())];
        let args = (0..arity).map(|_| self.sample_depth(rng, depth - 1)).collect();
        Formula::app(op, args)
    }

    fn leaf<R: Rng + ?Sized>(&self, rng: &mut R) -> Formula {
        let consts: Vec<&str> = self.lang.constants().collect();
        let n = self.vars.len() + consts.len();
        let i = rng.gen_range(0..n.max(1));
        if i < self.vars.len() {
            Formula::var(&self.vars[i])
        } else {
            Formula::constant(consts[i - self.vars.len()])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn enumeration_counts() {
        // leaves: p, q; depth 1 adds 2*2 conjunctions and 2*2 disjunctions
        let fs = formulas_up_to_depth(&Language::lattice(), &["p", "q"], 1);
        assert_eq!(fs.len(), 2 + 8);
        // depth 2 over 10 formulas: pairs with a depth-1 member, per operator
        let fs2 = formulas_up_to_depth(&Language::lattice(), &["p", "q"], 2);
        assert_eq!(fs2.len(), 10 + 2 * (100 - 4));
        let distinct: BTreeSet<_> = fs2.iter().collect();
        assert_eq!(distinct.len(), fs2.len());
        assert!(fs2.iter().all(|f| f.depth() <= 2));
    }

    #[test]
    fn sampler_respects_depth_and_vars() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let s = FormulaSampler::new(&Language::heyting(), &["p", "q", "r"], 3);
        for _ in 0..200 {
            let f = s.sample(&mut rng);
            assert!(f.depth() <= 3);
            assert!(f.vars().iter().all(|v| ["p", "q", "r"].contains(&&**v)));
            f.check_language(&Language::heyting()).unwrap();
        }
    }
}
