//! The nine acceptance criteria. Each prints one PASS/FAIL line; the test
//! fails if any criterion does.

use std::process::Command;

use varinc::catalog::{self, catalog_get, catalog_ids, Kind};
use varinc::experiments::{
    consequence_conditions, containment, deduction_transfer, plonka_agreement, small_instances, translate_corpus,
    PLONKA_MATRICES,
};
use varinc::hilbert::Limits;

const DATA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data");

struct Out {
    code: i32,
    stdout: String,
}

fn varinc(args: &[&str]) -> Out {
    let out = Command::new(env!("CARGO_BIN_EXE_varinc")).args(args).output().expect("spawn varinc");
    Out { code: out.status.code().unwrap_or(-1), stdout: String::from_utf8_lossy(&out.stdout).into_owned() }
}

fn expect(cond: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(why())
    }
}

/// Transcribed independently of the catalog files: rows are the first
/// argument, columns the second, both in the printed element order.
/// `(matrix, elements, operator, rows)`
type Table = (&'static str, &'static [&'static str], &'static str, &'static [&'static [&'static str]]);

const TABLES: &[Table] = &[
    ("M3", &["1", "1/2", "0"], "&", &[&["1", "1/2", "0"], &["1/2", "1/2", "0"], &["0", "0", "0"]]),
    ("M3", &["1", "1/2", "0"], "|", &[&["1", "1", "1"], &["1", "1/2", "1/2"], &["1", "1/2", "0"]]),
    ("M3", &["1", "1/2", "0"], "->", &[&["1", "0", "0"], &["1", "1/2", "0"], &["1", "1", "1"]]),
    ("M3", &["1", "1/2", "0"], "~", &[&["0"], &["1/2"], &["1"]]),
    ("PS3", &["1", "1/2", "0"], "&", &[&["1", "1/2", "0"], &["1/2", "1/2", "0"], &["0", "0", "0"]]),
    ("PS3", &["1", "1/2", "0"], "|", &[&["1", "1", "1"], &["1", "1/2", "1/2"], &["1", "1/2", "0"]]),
    ("PS3", &["1", "1/2", "0"], "->", &[&["1", "1", "0"], &["1", "1", "0"], &["1", "1", "1"]]),
    ("PS3", &["1", "1/2", "0"], "~", &[&["0"], &["1/2"], &["1"]]),
    ("prerough3", &["0", "a", "1"], "&", &[&["0", "0", "0"], &["0", "a", "a"], &["0", "a", "1"]]),
    ("prerough3", &["0", "a", "1"], "|", &[&["0", "a", "1"], &["a", "a", "1"], &["1", "1", "1"]]),
    ("prerough3", &["0", "a", "1"], "->", &[&["1", "1", "1"], &["a", "a", "1"], &["0", "a", "1"]]),
    ("prerough3", &["0", "a", "1"], "~", &[&["1"], &["a"], &["0"]]),
    ("prerough3", &["0", "a", "1"], "I", &[&["0"], &["a"], &["1"]]),
    ("prerough3", &["0", "a", "1"], "C", &[&["0"], &["a"], &["1"]]),
];

fn table_fidelity() -> Result<String, String> {
    let mut entries = 0;
    for (id, elems, op, rows) in TABLES {
        for (x, row) in elems.iter().zip(rows.iter()) {
            for (k, want) in row.iter().enumerate() {
                let (formula, assign) = if row.len() == 1 {
                    (format!("{op} p"), format!("p={x}"))
                } else {
                    (format!("p {op} q"), format!("p={x},q={}", elems[k]))
                };
                let out = varinc(&["eval", id, &formula, "--assign", &assign]);
                let got = out.stdout.trim().trim_end_matches(" *");
                expect(out.code == 0 && got == *want, || {
                    format!("{id}: {formula} at {assign} gave {got}, want {want}")
                })?;
                entries += 1;
            }
        }
    }
    Ok(format!("{entries} table entries match"))
}

fn minimal_separation() -> Result<String, String> {
    let seq = "p & q |- p | q";
    let found = varinc(&["search-proof", "minimal", seq, "--depth", "4"]);
    expect(found.code == 0 && found.stdout.contains(":: R2"), || format!("minimal search: {}", found.stdout))?;

    let inst = format!("{DATA}/minimal.instances");
    let cmp = varinc(&["companion", "compare", "minimal", "--instances", &inst]);
    let row = cmp.stdout.lines().find(|l| l.starts_with("(p & q) |- (p | q)")).unwrap_or("");
    expect(cmp.code == 0 && row.contains("a: holds"), || format!("companion compare row: {row:?}"))?;

    let re = varinc(&["search-proof", "minimal-re", seq, "--depth", "8"]);
    expect(re.code == 1 && re.stdout.contains("not found"), || format!("restricted search: {}", re.stdout))?;

    let proof = format!("{DATA}/minimal-3line.proof");
    let ok = varinc(&["check-proof", "minimal", &proof]);
    expect(ok.code == 0, || format!("3-line proof in minimal: {}", ok.stdout))?;
    let bad = varinc(&["check-proof", "minimal", &proof, "--restricted"]);
    let msg = bad.stdout.trim();
    expect(bad.code == 1 && msg.contains("line 2") && msg.contains("R1'") && msg.contains("missing {q}"), || {
        format!("restricted check: {msg}")
    })?;
    Ok(format!("left companion holds, restricted not found at depth 8; {msg}"))
}

fn ecq_lnc() -> Result<String, String> {
    let cases: &[(&str, &str, i32)] =
        &[("ecq", "B2+w", 1), ("lnc", "B2+w", 0), ("ecq", "M3", 1), ("ecq", "PS3", 1), ("lnc", "prerough3", 1)];
    for (probe, m, code) in cases {
        let out = varinc(&["probe", probe, m]);
        expect(out.code == *code, || format!("probe {probe} {m} exited {} ({})", out.code, out.stdout.trim()))?;
    }
    for (m, want) in [("prerough3+w", "strongly paraconsistent"), ("B2+w", "weakly paraconsistent")] {
        let out = varinc(&["probe", "classify", m]);
        expect(out.stdout.trim() == want, || format!("classify {m}: {}", out.stdout.trim()))?;
    }
    Ok("5 probes and 2 classifications as stated".into())
}

fn rm3_deduction() -> Result<String, String> {
    let out = varinc(&["probe", "dt", "M3", "--instance", "|- (p | ~p) -> (q | ~q)"]);
    let s = &out.stdout;
    expect(s.contains("Σ,α ⊢ β holds") && s.contains("Σ ⊢ α -> β fails"), || format!("directions: {s}"))?;
    expect(s.contains("witness: p=1, q=1/2 gives 0"), || format!("witness: {s}"))?;
    Ok("premise side holds, implication fails at p=1, q=1/2 with value 0".into())
}

fn plonka_equivalence() -> Result<String, String> {
    let mut total = 0;
    for id in PLONKA_MATRICES {
        let r = plonka_agreement(id, 10_000, 0x9e37)?;
        expect(r.checked >= 10_000, || format!("{id}: only {} instances", r.checked))?;
        expect(r.disagreements.is_empty(), || {
            format!("{id}: {} disagreements, first {}", r.disagreements.len(), r.disagreements[0])
        })?;
        total += r.checked;
    }
    Ok(format!("{total} instances over {} matrices, 100% agreement", PLONKA_MATRICES.len()))
}

fn containment_property() -> Result<String, String> {
    let mut parts = Vec::new();
    for (id, vars, stride, limits) in [
        ("minimal", &["p", "q"][..], 1, Limits::new(3, 7)),
        ("IPC", &["p"][..], 7, Limits::new(2, 7)),
        ("CPC", &["p"][..], 7, Limits::new(2, 7)),
    ] {
        let s = catalog::system(id).map_err(|e| e.to_string())?;
        let insts: Vec<_> = small_instances(&s.lang, vars).into_iter().step_by(stride).collect();
        let r = containment(&s, &insts, limits);
        expect(r.violations.is_empty(), || format!("{id}: {:?}", r.violations[0]))?;
        expect(r.restricted_found > 0, || format!("{id}: no restricted successes to check"))?;
        parts.push(format!("{id} {}/{}", r.restricted_found, r.instances));
    }
    Ok(format!("restricted successes certified: {}", parts.join(", ")))
}

fn translation() -> Result<String, String> {
    let rows = translate_corpus();
    expect(rows.len() >= 10, || format!("corpus has {} proofs", rows.len()))?;
    for r in &rows {
        expect(r.outcome.is_ok(), || format!("{}: {:?}", r.name, r.outcome))?;
    }
    let hprl = rows.iter().filter(|r| r.system == "HPRL").count();
    Ok(format!("{} proofs translated and checked ({hprl} HPRL)", rows.len()))
}

fn consequence_axioms() -> Result<String, String> {
    let mut oracles = 0;
    let mut matrices = 0;
    for id in catalog_ids() {
        if !matches!(catalog_get(&id).map(|e| e.kind()), Ok(Kind::Matrix)) {
            continue;
        }
        for s in consequence_conditions(&id, 5_000, 11)? {
            expect(s.violations.is_empty(), || format!("{}: {}", s.oracle, s.violations[0]))?;
            oracles += 1;
        }
        matrices += 1;
    }
    Ok(format!("{matrices} matrices, {oracles} checks, 5000 trials per condition, zero violations"))
}

fn deduction_theorem_transfer() -> Result<String, String> {
    let r = deduction_transfer("H3")?;
    expect(r.violations.is_empty(), || r.violations[0].clone())?;
    Ok(format!(
        "{} instances ({} with base DT): DT everywhere, converse on all {} included, {} non-included failures",
        r.instances, r.base_dt, r.included, r.converse_failures
    ))
}

#[test]
fn acceptance() {
    type Criterion = (&'static str, fn() -> Result<String, String>);
    let criteria: [Criterion; 9] = [
        ("table fidelity", table_fidelity),
        ("minimal-example separation", minimal_separation),
        ("ECQ/LNC matrix facts", ecq_lnc),
        ("RM3 deduction-theorem failure", rm3_deduction),
        ("Płonka equivalence", plonka_equivalence),
        ("containment of the restricted companion", containment_property),
        ("theorem-proof translation", translation),
        ("consequence-relation axioms", consequence_axioms),
        ("deduction-theorem transfer", deduction_theorem_transfer),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    assert_eq!(failed, 0, "{failed} acceptance criteria failed");
}
