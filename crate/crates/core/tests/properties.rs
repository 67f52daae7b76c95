use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use varinc::catalog;
use varinc::companions::{left_companion, ConsequenceOracle, MatrixOracle};
use varinc::hilbert::format::{parse_proof, render_proof};
use varinc::hilbert::{check_proof, derive_bounded, extract_delta, Limits, SearchOutcome};
use varinc::matrix::file::{load_matrix, store_matrix};
use varinc::matrix::{consequence, evaluate, Valuation};
use varinc::plonka::adjoin_contaminating;
use varinc::syntax::{match_schema, parse_formula, variables_of, Formula, FormulaSampler, Language, Substitution};

fn formula(lang: &Language, vars: &[&str], depth: usize, seed: u64) -> Formula {
    FormulaSampler::new(lang, vars, depth).sample(&mut ChaCha8Rng::seed_from_u64(seed))
}

fn substitution(lang: &Language, seed: u64) -> Substitution {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = FormulaSampler::new(lang, &["p", "q", "r"], 2);
    let mut sigma = Substitution::new();
    for v in ["a", "b", "c"] {
        sigma.bind(v, s.sample(&mut rng));
    }
    sigma
}

fn valuation(size: usize, vars: &[&str], seed: u64) -> Valuation {
    let mut v = Valuation::new();
    for (i, var) in vars.iter().enumerate() {
        v.assign(var, ((seed >> (4 * i)) as usize) % size);
    }
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn display_parses_back(seed: u64) {
        for lang in [Language::heyting(), Language::pre_rough(), Language::relevance()] {
            let f = formula(&lang, &["p", "q", "r"], 4, seed);
            prop_assert_eq!(parse_formula(&f.to_string(), &lang).unwrap(), f);
        }
    }

    #[test]
    fn matching_recovers_an_instance(s1: u64, s2: u64) {
        let lang = Language::heyting();
        let schema = formula(&lang, &["a", "b", "c"], 3, s1);
        let target = substitution(&lang, s2).apply(&schema);
        let found = match_schema(&schema, &target);
        prop_assert!(found.is_some());
        prop_assert_eq!(found.unwrap().apply(&schema), target);
    }

    #[test]
    fn substitution_variables(s1: u64, s2: u64) {
        let lang = Language::heyting();
        let f = formula(&lang, &["a", "b", "c"], 3, s1);
        let sigma = substitution(&lang, s2);
        let images: Vec<Formula> = f.vars().iter().map(|v| sigma.apply(&Formula::Var(v.clone()))).collect();
        prop_assert_eq!(sigma.apply(&f).vars(), variables_of(&images));
    }

    #[test]
    fn delta_keeps_exactly_the_included_premises(s1: u64, s2: u64, s3: u64) {
        let lang = Language::heyting();
        let sigma = vec![formula(&lang, &["p", "q", "r"], 2, s1), formula(&lang, &["p", "q", "r"], 2, s2)];
        let phi = formula(&lang, &["p", "q"], 2, s3);
        let delta = extract_delta(&sigma, &phi);
        for s in &sigma {
            prop_assert_eq!(delta.contains(s), s.vars().is_subset(&phi.vars()));
        }
    }

    #[test]
    fn matrix_files_round_trip(pick in 0usize..6) {
        let id = ["B2", "H3", "M3", "PS3", "prerough3-std", "M3+w"][pick];
        let m = catalog::matrix(id).unwrap();
        let text = store_matrix(Some(id), &m).unwrap();
        prop_assert_eq!(load_matrix(&text).unwrap(), m);
    }

    /// Away from ω the extension agrees with the original; a formula takes
    /// ω exactly when one of its variables does.
    #[test]
    fn omega_contaminates(s1: u64, s2: u64, pick in 0usize..5) {
        let id = ["B2", "H3", "M3", "PS3", "prerough3"][pick];
        let m = catalog::matrix(id).unwrap();
        let ext = adjoin_contaminating(&m).unwrap();
        let w = ext.algebra().index_of("w").unwrap();
        let f = formula(m.lang(), &["p", "q"], 3, s1);
        let v = valuation(ext.algebra().size(), &["p", "q"], s2);
        let x = evaluate(&f, &v, ext.algebra()).unwrap();
        let touches_w = f.vars().iter().any(|var| v.get(var) == Some(w));
        prop_assert_eq!(x == w, touches_w);
        if !touches_w {
            let inner = evaluate(&f, &v, m.algebra()).unwrap();
            prop_assert_eq!(ext.algebra().label(x), m.algebra().label(inner));
        }
    }

    /// Structurality for a matrix and its left companion.
    #[test]
    fn consequence_is_structural(s1: u64, s2: u64, s3: u64, pick in 0usize..3) {
        let id = ["M3", "H3", "PS3"][pick];
        let m = catalog::matrix(id).unwrap();
        let lang = m.lang().clone();
        let premises = vec![formula(&lang, &["a", "b"], 2, s1)];
        let phi = formula(&lang, &["a", "b", "c"], 2, s2);
        let sigma = substitution(&lang, s3);
        let moved: Vec<Formula> = premises.iter().map(|p| sigma.apply(p)).collect();
        let base = MatrixOracle::new(id, vec![m]);
        if base.holds(&premises, &phi).unwrap() {
            prop_assert!(base.holds(&moved, &sigma.apply(&phi)).unwrap());
        }
        let left = left_companion(&base);
        if left.holds(&premises, &phi).unwrap() {
            prop_assert!(left.holds(&moved, &sigma.apply(&phi)).unwrap());
            prop_assert!(base.holds(&premises, &phi).unwrap());
        }
    }

    /// A matrix extended by ω in a sum validates no more than the matrix.
    #[test]
    fn adding_omega_only_removes_consequences(s1: u64, s2: u64) {
        let m = catalog::matrix("H3").unwrap();
        let ext = adjoin_contaminating(&m).unwrap();
        let premises = vec![formula(m.lang(), &["p", "q"], 2, s1)];
        let phi = formula(m.lang(), &["p", "q", "r"], 2, s2);
        if consequence(&premises, &phi, &[m.clone(), ext]).unwrap() {
            prop_assert!(consequence(&premises, &phi, &[m]).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Found proofs check, and survive rendering and parsing.
    #[test]
    fn search_results_check_and_round_trip(s1: u64, s2: u64) {
        let s = catalog::system("minimal").unwrap();
        let hyp = formula(&s.lang, &["p", "q"], 2, s1);
        let goal = formula(&s.lang, &["p", "q"], 2, s2);
        if let SearchOutcome::Found(p) = derive_bounded(&[hyp], &goal, &s, Limits::new(3, 9)) {
            prop_assert!(check_proof(&p, &s).is_ok());
            let back = parse_proof(&render_proof(&p, Some("minimal")), &s.lang).unwrap();
            prop_assert_eq!(back.proof, p);
        }
    }
}
