//! Membership tests for lattice-based algebra classes, decided by
//! exhausting the operation tables, plus brute-force enumeration of small
//! members.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::matrix::{next_permutation, FiniteAlgebra};
use crate::syntax::{ops, Language};

/// Largest universe [`enumerate_algebras`] will search.
pub const MAX_ENUMERATION_SIZE: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClassError {
    #[error("algebra lacks operator `{0}`")]
    MissingOperator(String),
    #[error("unknown algebra class `{0}`")]
    UnknownClass(String),
    #[error("enumeration is limited to size {MAX_ENUMERATION_SIZE}, got {0}")]
    TooLarge(usize),
    #[error("enumeration for {class} uses language {expected}, got {found}")]
    WrongLanguage { class: Class, expected: String, found: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Class {
    BoundedDistributiveLattice,
    QuasiBoolean,
    Heyting,
    PreRough,
}

impl Class {
    pub const ALL: [Class; 4] =
        [Class::BoundedDistributiveLattice, Class::QuasiBoolean, Class::Heyting, Class::PreRough];

    pub fn language(self) -> Language {
        match self {
            Class::BoundedDistributiveLattice => Language::bounded_lattice(),
            Class::QuasiBoolean => Language::quasi_boolean(),
            Class::Heyting => Language::heyting(),
            Class::PreRough => Language::pre_rough(),
        }
    }

    pub fn contains(self, a: &FiniteAlgebra) -> Result<bool, ClassError> {
        match self {
            Class::BoundedDistributiveLattice => is_bounded_distributive_lattice(a),
            Class::QuasiBoolean => is_quasi_boolean(a),
            Class::Heyting => is_heyting(a),
            Class::PreRough => is_pre_rough(a),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Class::BoundedDistributiveLattice => "bdl",
            Class::QuasiBoolean => "quasi-boolean",
            Class::Heyting => "heyting",
            Class::PreRough => "pre-rough",
        }
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Class {
    type Err = ClassError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "bdl" | "lattice" | "bounded-distributive-lattice" => Ok(Class::BoundedDistributiveLattice),
            "quasi-boolean" | "qba" => Ok(Class::QuasiBoolean),
            "heyting" => Ok(Class::Heyting),
            "pre-rough" | "prerough" => Ok(Class::PreRough),
            _ => Err(ClassError::UnknownClass(s.to_string())),
        }
    }
}

fn require(a: &FiniteAlgebra, needed: &[&str]) -> Result<(), ClassError> {
    match needed.iter().find(|op| !a.has(op)) {
        Some(op) => Err(ClassError::MissingOperator(op.to_string())),
        None => Ok(()),
    }
}

/// Shorthand accessors over a checked algebra.
struct View<'a> {
    a: &'a FiniteAlgebra,
}

impl View<'_> {
    fn meet(&self, x: usize, y: usize) -> usize {
        self.a.apply(ops::AND, &[x, y])
    }
    fn join(&self, x: usize, y: usize) -> usize {
        self.a.apply(ops::OR, &[x, y])
    }
    fn imp(&self, x: usize, y: usize) -> usize {
        self.a.apply(ops::IMP, &[x, y])
    }
    fn neg(&self, x: usize) -> usize {
        self.a.apply(ops::NOT, &[x])
    }
    fn int(&self, x: usize) -> usize {
        self.a.apply(ops::INT, &[x])
    }
    fn clo(&self, x: usize) -> usize {
        self.a.apply(ops::CLO, &[x])
    }
    fn bot(&self) -> usize {
        self.a.apply(ops::BOT, &[])
    }
    fn top(&self) -> usize {
        self.a.apply(ops::TOP, &[])
    }
    fn leq(&self, x: usize, y: usize) -> bool {
        self.meet(x, y) == x
    }
    fn all1(&self, p: impl Fn(usize) -> bool) -> bool {
        (0..self.a.size()).all(p)
    }
    fn all2(&self, p: impl Fn(usize, usize) -> bool) -> bool {
        self.all1(|x| self.all1(|y| p(x, y)))
    }
    fn all3(&self, p: impl Fn(usize, usize, usize) -> bool) -> bool {
        self.all1(|x| self.all2(|y, z| p(x, y, z)))
    }
}

fn lattice_laws(v: &View) -> bool {
    v.all1(|x| v.meet(x, x) == x && v.join(x, x) == x)
        && v.all2(|x, y| {
            v.meet(x, y) == v.meet(y, x)
                && v.join(x, y) == v.join(y, x)
                && v.meet(x, v.join(x, y)) == x
                && v.join(x, v.meet(x, y)) == x
        })
        && v.all3(|x, y, z| {
            v.meet(x, v.meet(y, z)) == v.meet(v.meet(x, y), z)
                && v.join(x, v.join(y, z)) == v.join(v.join(x, y), z)
                && v.meet(x, v.join(y, z)) == v.join(v.meet(x, y), v.meet(x, z))
        })
}

pub fn is_bounded_distributive_lattice(a: &FiniteAlgebra) -> Result<bool, ClassError> {
    require(a, &[ops::AND, ops::OR, ops::BOT, ops::TOP])?;
    let v = View { a };
    Ok(lattice_laws(&v) && v.all1(|x| v.meet(v.bot(), x) == v.bot() && v.join(v.top(), x) == v.top()))
}

pub fn is_quasi_boolean(a: &FiniteAlgebra) -> Result<bool, ClassError> {
    require(a, &[ops::AND, ops::OR, ops::NOT, ops::BOT, ops::TOP])?;
    let v = View { a };
    Ok(is_bounded_distributive_lattice(a)?
        && v.all1(|x| v.neg(v.neg(x)) == x)
        && v.all2(|x, y| v.neg(v.join(x, y)) == v.meet(v.neg(x), v.neg(y))))
}

/// Residuation: `a → b` is the largest `x` with `a ∧ x ≤ b`, and `¬a = a → 0`.
pub fn is_heyting(a: &FiniteAlgebra) -> Result<bool, ClassError> {
    require(a, &[ops::AND, ops::OR, ops::IMP, ops::NOT, ops::BOT, ops::TOP])?;
    let v = View { a };
    Ok(is_bounded_distributive_lattice(a)?
        && v.all2(|x, y| {
            let r = v.imp(x, y);
            v.leq(v.meet(x, r), y) && v.all1(|z| !v.leq(v.meet(x, z), y) || v.leq(z, r))
        })
        && v.all1(|x| v.neg(x) == v.imp(x, v.bot())))
}

/// Conditions (i)-(viii) of the pre-rough definition, with (v) also read
/// in the lattice order as `Ia ≤ a`. Read only through `→`, (v) admits
/// algebras with `I` constantly 1 and `→` constantly 1, where modus
/// ponens is unsound.
pub fn is_pre_rough(a: &FiniteAlgebra) -> Result<bool, ClassError> {
    require(a, &[ops::AND, ops::OR, ops::IMP, ops::NOT, ops::INT, ops::CLO, ops::BOT, ops::TOP])?;
    let v = View { a };
    let one = v.top();
    Ok(is_quasi_boolean(a)?
        && v.int(one) == one
        && v.all2(|x, y| v.int(v.meet(x, y)) == v.meet(v.int(x), v.int(y)))
        && v.all1(|x| v.join(v.neg(v.int(x)), v.int(x)) == one)
        && v.all1(|x| v.imp(v.int(x), x) == one && v.leq(v.int(x), x))
        && v.all1(|x| v.clo(x) == v.neg(v.int(v.neg(x))))
        && v.all2(|x, y| v.imp(x, y) == prerough_imp(&v, x, y))
        && v.all2(|x, y| !(v.imp(v.clo(x), v.clo(y)) == one && v.imp(v.int(x), v.int(y)) == one) || v.imp(x, y) == one))
}

fn prerough_imp(v: &View, x: usize, y: usize) -> usize {
    v.meet(v.join(v.neg(v.int(x)), v.int(y)), v.join(v.neg(v.clo(x)), v.clo(y)))
}

fn labels(n: usize) -> Vec<String> {
    let inner = ["a", "b"];
    (0..n)
        .map(|i| match i {
            0 => "0".to_string(),
            _ if i == n - 1 => "1".to_string(),
            _ => inner[i - 1].to_string(),
        })
        .collect()
}

/// Bounded distributive lattices of size `n` with bottom at index 0 and top
/// at index `n-1`, as `(meet, join)` tables.
fn lattices(n: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; pairs.len()];
    loop {
        let mut meet = vec![0; n * n];
        for i in 0..n {
            meet[i * n + i] = i;
        }
        for (&(i, j), &c) in pairs.iter().zip(&choice) {
            meet[i * n + j] = c;
            meet[j * n + i] = c;
        }
        if let Some(join) = join_from_meet(n, &meet) {
            let alg = FiniteAlgebra::new(
                Language::bounded_lattice(),
                labels(n),
                vec![meet.clone(), join.clone(), vec![0], vec![n - 1]],
            )
            .expect("tables are sized by construction");
            if is_bounded_distributive_lattice(&alg).unwrap_or(false) {
                out.push((meet, join));
            }
        }
        let mut k = pairs.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            choice[k] += 1;
            if choice[k] < n {
                break;
            }
            choice[k] = 0;
        }
    }
}

/// Least upper bounds for the order `x ≤ y iff x ∧ y = x`, if they all exist.
fn join_from_meet(n: usize, meet: &[usize]) -> Option<Vec<usize>> {
    let leq = |x: usize, y: usize| meet[x * n + y] == x;
    let mut join = vec![0; n * n];
    for x in 0..n {
        for y in 0..n {
            let ubs: Vec<usize> = (0..n).filter(|&z| leq(x, z) && leq(y, z)).collect();
            let least = ubs.iter().copied().find(|&z| ubs.iter().all(|&w| leq(z, w)))?;
            join[x * n + y] = least;
        }
    }
    Some(join)
}

fn functions(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..n.pow(n as u32)).map(move |mut k| {
        let mut f = vec![0; n];
        for slot in f.iter_mut() {
            *slot = k % n;
            k /= n;
        }
        f
    })
}

fn candidates(class: Class, n: usize) -> Vec<FiniteAlgebra> {
    let lang = class.language();
    let mut out = Vec::new();
    for (meet, join) in lattices(n) {
        let leq = |x: usize, y: usize| meet[x * n + y] == x;
        let table = |f: &dyn Fn(usize, usize) -> usize| -> Vec<usize> { (0..n * n).map(|k| f(k / n, k % n)).collect() };
        match class {
            Class::BoundedDistributiveLattice => out.push(vec![meet.clone(), join.clone(), vec![0], vec![n - 1]]),
            Class::QuasiBoolean => {
                for neg in functions(n) {
                    out.push(vec![meet.clone(), join.clone(), neg, vec![0], vec![n - 1]]);
                }
            }
            Class::Heyting => {
                // relative pseudo-complement: join of all z with x∧z ≤ y
                let imp = table(&|x, y| {
                    let zs: Vec<usize> = (0..n).filter(|&z| leq(meet[x * n + z], y)).collect();
                    zs.iter().copied().fold(0, |acc, z| join[acc * n + z])
                });
                let neg = (0..n).map(|x| imp[x * n]).collect();
                out.push(vec![meet.clone(), join.clone(), imp, neg, vec![0], vec![n - 1]]);
            }
            Class::PreRough => {
                for neg in functions(n) {
                    if (0..n).any(|x| neg[neg[x]] != x) {
                        continue;
                    }
                    for int in functions(n) {
                        let clo: Vec<usize> = (0..n).map(|x| neg[int[neg[x]]]).collect();
                        let imp = table(&|x, y| {
                            let left = join[neg[int[x]] * n + int[y]];
                            let right = join[neg[clo[x]] * n + clo[y]];
                            meet[left * n + right]
                        });
                        out.push(vec![meet.clone(), join.clone(), imp, neg.clone(), int, clo, vec![0], vec![n - 1]]);
                    }
                }
            }
        }
    }
    out.into_iter()
        .map(|tables| FiniteAlgebra::new(lang.clone(), labels(n), tables).expect("tables are sized by construction"))
        .filter(|a| class.contains(a).unwrap_or(false))
        .collect()
}

/// Lexicographically least table encoding over all relabelings.
fn canonical_code(a: &FiniteAlgebra) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..a.size()).collect();
    let mut best: Option<Vec<usize>> = None;
    loop {
        let code: Vec<usize> = a.permute(&perm).tables().concat();
        if best.as_ref().is_none_or(|b| code < *b) {
            best = Some(code);
        }
        if !next_permutation(&mut perm) {
            return best.unwrap_or_default();
        }
    }
}

/// Every member of `class` with at most `max_size` elements, one per
/// isomorphism type, smallest first. `lang` must be the class language.
pub fn enumerate_algebras(class: Class, lang: &Language, max_size: usize) -> Result<Vec<FiniteAlgebra>, ClassError> {
    if max_size > MAX_ENUMERATION_SIZE {
        return Err(ClassError::TooLarge(max_size));
    }
    let expected = class.language();
    if *lang != expected {
        return Err(ClassError::WrongLanguage { class, expected: expected.to_string(), found: lang.to_string() });
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for n in 1..=max_size {
        for a in candidates(class, n) {
            if seen.insert(canonical_code(&a)) {
                out.push(a);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::isomorphism;

    fn chain3() -> FiniteAlgebra {
        FiniteAlgebra::from_labels(
            Language::bounded_lattice(),
            &["0", "a", "1"],
            &[
                ("&", &["0", "0", "0", "0", "a", "a", "0", "a", "1"]),
                ("|", &["0", "a", "1", "a", "a", "1", "1", "1", "1"]),
                ("0", &["0"]),
                ("1", &["1"]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn lattice_examples() {
        assert!(is_bounded_distributive_lattice(&chain3()).unwrap());
        let broken = FiniteAlgebra::new(
            chain3().lang().clone(),
            chain3().universe().to_vec(),
            vec![chain3().table("&").unwrap().to_vec(), vec![0; 9], vec![0], vec![2]],
        )
        .unwrap();
        assert!(!is_bounded_distributive_lattice(&broken).unwrap());
        assert_eq!(
            is_bounded_distributive_lattice(&chain3().reduct(&["&", "|"])),
            Err(ClassError::MissingOperator("0".into()))
        );
    }

    #[test]
    fn identity_negation_is_not_de_morgan() {
        let a = chain3();
        let with_neg = FiniteAlgebra::new(
            Language::quasi_boolean(),
            a.universe().to_vec(),
            vec![a.table("&").unwrap().to_vec(), a.table("|").unwrap().to_vec(), vec![0, 1, 2], vec![0], vec![2]],
        )
        .unwrap();
        assert!(!is_quasi_boolean(&with_neg).unwrap());
    }

    #[test]
    fn enumeration_counts() {
        // distributive lattices up to size 4: 1, 2, 3-chain, 4-chain, 2x2
        let bdl = enumerate_algebras(Class::BoundedDistributiveLattice, &Language::bounded_lattice(), 4).unwrap();
        assert_eq!(bdl.len(), 5);
        let heyting = enumerate_algebras(Class::Heyting, &Language::heyting(), 4).unwrap();
        assert_eq!(heyting.len(), 5);
        let sizes: Vec<usize> = heyting.iter().map(|a| a.size()).collect();
        assert_eq!(sizes, vec![1, 2, 3, 4, 4]);
        let pr1 = enumerate_algebras(Class::PreRough, &Language::pre_rough(), 1).unwrap();
        assert_eq!(pr1.len(), 1);
        assert_eq!(pr1[0].size(), 1);
    }

    #[test]
    fn enumeration_is_self_consistent() {
        for class in Class::ALL {
            for a in enumerate_algebras(class, &class.language(), 3).unwrap() {
                assert!(class.contains(&a).unwrap(), "{class}: {a:?}");
            }
        }
        for a in enumerate_algebras(Class::PreRough, &Language::pre_rough(), 3).unwrap() {
            assert!(is_quasi_boolean(&a.reduct(&["&", "|", "~", "0", "1"])).unwrap());
        }
        for a in enumerate_algebras(Class::Heyting, &Language::heyting(), 3).unwrap() {
            assert!(is_bounded_distributive_lattice(&a.reduct(&["&", "|", "0", "1"])).unwrap());
        }
    }

    #[test]
    fn pre_rough_rejects_constant_interior() {
        let a = FiniteAlgebra::from_labels(
            Language::pre_rough(),
            &["0", "1"],
            &[
                ("&", &["0", "0", "0", "1"]),
                ("|", &["0", "1", "1", "1"]),
                ("->", &["1", "1", "1", "1"]),
                ("~", &["1", "0"]),
                ("I", &["1", "1"]),
                ("C", &["0", "0"]),
                ("0", &["0"]),
                ("1", &["1"]),
            ],
        )
        .unwrap();
        assert!(!is_pre_rough(&a).unwrap());
        let sizes: Vec<usize> =
            enumerate_algebras(Class::PreRough, &Language::pre_rough(), 3).unwrap().iter().map(|a| a.size()).collect();
        assert_eq!(sizes, vec![1, 2, 3]);
    }

    #[test]
    fn enumeration_guardrails() {
        assert_eq!(enumerate_algebras(Class::Heyting, &Language::heyting(), 5), Err(ClassError::TooLarge(5)));
        assert!(matches!(
            enumerate_algebras(Class::Heyting, &Language::lattice(), 2),
            Err(ClassError::WrongLanguage { .. })
        ));
        assert_eq!("boolean".parse::<Class>(), Err(ClassError::UnknownClass("boolean".into())));
    }

    #[test]
    fn quasi_boolean_size_two_is_boolean() {
        let qb = enumerate_algebras(Class::QuasiBoolean, &Language::quasi_boolean(), 2).unwrap();
        let b2 = FiniteAlgebra::from_labels(
            Language::quasi_boolean(),
            &["0", "1"],
            &[
                ("&", &["0", "0", "0", "1"]),
                ("|", &["0", "1", "1", "1"]),
                ("~", &["1", "0"]),
                ("0", &["0"]),
                ("1", &["1"]),
            ],
        )
        .unwrap();
        assert!(qb.iter().any(|a| isomorphism(a, &b2).is_some()));
    }
}
