use std::path::Path;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use varinc::catalog::{self, catalog_get, catalog_ids};
use varinc::classes::Class;
use varinc::companions::{
    compare_oracles, left_companion, parse_instances, Agreement, ConsequenceOracle, HilbertOracle, MatrixOracle,
};
use varinc::hilbert::format::{parse_proof, parse_system, render_proof};
use varinc::hilbert::{
    check_proof, derive_bounded, restricted_system, restriction_changes, HilbertSystem, Justification, Limits,
    PoolPolicy, SearchOutcome,
};
use varinc::matrix::file::{load_matrix, store_matrix};
use varinc::matrix::{countermodel, evaluate, tuples, Matrix, Valuation};
use varinc::plonka::file::{load_system, SystemFile};
use varinc::plonka::{adjoin_contaminating, plonka_sum_algebras, plonka_sum_matrices};
use varinc::probes::{
    classify_paraconsistency, probe_deduction, probe_ecq, probe_land_ecq, probe_lnc, DeductionInstance, ProbeOutcome,
};
use varinc::repro::run_repro;
use varinc::syntax::{ops, parse_formula, parse_sequent, Formula, Sequent};

/// Finite-model workbench for variable-inclusion logics.
///
/// Matrix and system arguments are catalog ids (see `show`) or paths to
/// files. Exit status: 0 when the command succeeds or the property holds,
/// 1 when it fails, 2 on usage or input errors.
#[derive(Parser)]
#[command(name = "varinc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a formula, or print its truth table over unassigned variables.
    Eval {
        matrix: String,
        formula: String,
        /// Comma-separated `var=value` pairs, e.g. `p=1/2,q=0`.
        #[arg(long)]
        assign: Option<String>,
    },
    /// Decide `Σ |- φ` over one or more comma-separated matrices. Exits 1 when it fails.
    Consequence {
        matrices: String,
        sequent: String,
        /// Decide the left variable inclusion companion instead.
        #[arg(long)]
        left: bool,
    },
    /// Płonka sum of a directed system file, printed as a matrix or algebra file.
    Plonka {
        /// Directed system file.
        #[arg(required_unless_present = "adjoin_omega")]
        system: Option<String>,
        /// Print `m ⊕ 1` for the given matrix instead.
        #[arg(long, value_name = "MATRIX", conflicts_with = "system")]
        adjoin_omega: Option<String>,
    },
    /// Check a proof file against a system. Exits 1 on the first bad line.
    CheckProof {
        system: String,
        proof: String,
        /// Check against the restricted rules companion, reading each
        /// changed rule as its restricted version.
        #[arg(long)]
        restricted: bool,
    },
    /// Bounded forward proof search. Exits 1 when nothing is found.
    SearchProof {
        system: String,
        sequent: String,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        /// Largest formula size kept; defaults to twice the largest input formula plus three.
        #[arg(long)]
        size_cap: Option<usize>,
        /// Search the restricted rules companion of the system.
        #[arg(long)]
        restricted: bool,
        /// Close the instantiation pool under variable renamings.
        #[arg(long)]
        renaming: bool,
    },
    /// Companion comparisons over an instance file.
    Companion {
        #[command(subcommand)]
        command: CompanionCommand,
    },
    /// Paraconsistency and deduction-theorem probes.
    Probe {
        kind: ProbeKind,
        matrix: String,
        /// For `dt`: instances `Σ |- α -> β`, one per line.
        #[arg(long)]
        instances: Option<String>,
        /// For `dt`: a single instance `Σ |- α -> β`; may repeat.
        #[arg(long)]
        instance: Vec<String>,
    },
    /// All algebras of a class up to isomorphism.
    Enumerate {
        class: String,
        #[arg(long, default_value_t = 3)]
        max_size: usize,
        /// Print only the count per size.
        #[arg(long)]
        count: bool,
    },
    /// Recompute every catalog fact. Exits 1 on any mismatch.
    Repro,
    /// Print a catalog entry, or list all ids.
    Show { id: Option<String> },
}

#[derive(Subcommand)]
enum CompanionCommand {
    /// For a system: the left companion of bounded search against the
    /// restricted companion. For a matrix `m`: the left companion of `⊨m`
    /// against `⊨{m, m⊕1}`. Exits 1 if the second holds where the first
    /// does not.
    Compare {
        id: String,
        #[arg(long)]
        instances: String,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, default_value_t = 9)]
        size_cap: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ProbeKind {
    Ecq,
    LandEcq,
    Lnc,
    Dt,
    Classify,
}

/// Failures of the input rather than of the property.
struct InputError(anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.into())
    }
}

type Run = std::result::Result<bool, InputError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(InputError(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &str) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {path}"))
}

fn load_matrix_arg(arg: &str) -> Result<Matrix> {
    if Path::new(arg).is_file() {
        load_matrix(&read(arg)?).with_context(|| format!("loading {arg}"))
    } else {
        Ok(catalog::matrix(arg)?)
    }
}

fn load_system_arg(arg: &str) -> Result<HilbertSystem> {
    if Path::new(arg).is_file() {
        parse_system(&read(arg)?).with_context(|| format!("loading {arg}"))
    } else {
        Ok(catalog::system(arg)?)
    }
}

fn run(cmd: Command) -> Run {
    match cmd {
        Command::Eval { matrix, formula, assign } => eval(&matrix, &formula, assign.as_deref()),
        Command::Consequence { matrices, sequent, left } => {
            let ms = matrices.split(',').map(|m| load_matrix_arg(m.trim())).collect::<Result<Vec<_>>>()?;
            let q = parse_sequent(&sequent, ms[0].lang())?;
            let base = MatrixOracle::new(&matrices, ms.clone());
            let holds = if left {
                left_companion(&base).holds(&q.premises, &q.conclusion)?
            } else {
                base.holds(&q.premises, &q.conclusion)?
            };
            let name = if left { format!("⊨^l[{matrices}]") } else { format!("⊨[{matrices}]") };
            println!("{q}: {} under {name}", if holds { "holds" } else { "fails" });
            if !holds {
                let premises =
                    if left { varinc::hilbert::extract_delta(&q.premises, &q.conclusion) } else { q.premises };
                if let Some(cm) = countermodel(&premises, &q.conclusion, &ms)? {
                    let alg = ms[cm.matrix].algebra();
                    println!(
                        "countermodel in matrix {}: {} gives conclusion value {}",
                        cm.matrix + 1,
                        cm.valuation.display(alg),
                        alg.label(cm.conclusion_value)
                    );
                }
            }
            Ok(holds)
        }
        Command::Plonka { system, adjoin_omega } => {
            let text = match (system, adjoin_omega) {
                (_, Some(id)) => store_matrix(
                    Some(&format!("{id}{}", catalog::OMEGA_SUFFIX)),
                    &adjoin_contaminating(&load_matrix_arg(&id)?)?,
                )?,
                (Some(path), None) => match load_system(&read(&path)?)? {
                    SystemFile::Matrices(sys) => store_matrix(None, &plonka_sum_matrices(&sys)?)?,
                    SystemFile::Algebras(sys) => {
                        varinc::matrix::file::MatrixFile::from_algebra(None, &plonka_sum_algebras(&sys)?).render()?
                    }
                },
                (None, None) => return Err(anyhow!("give a system file or --adjoin-omega").into()),
            };
            print!("{text}");
            Ok(true)
        }
        Command::CheckProof { system, proof, restricted } => {
            let mut s = load_system_arg(&system)?;
            let mut script = parse_proof(&read(&proof)?, &s.lang)?;
            if restricted {
                let renames: Vec<_> = restriction_changes(&s).into_iter().map(|c| (c.original, c.restricted)).collect();
                for line in &mut script.proof.lines {
                    if let Justification::Rule { name, .. } = &mut line.justification {
                        if let Some((_, to)) = renames.iter().find(|(from, _)| from == name) {
                            *name = to.clone();
                        }
                    }
                }
                s = restricted_system(&s);
                script.system = None;
            }
            if let Some(named) = &script.system {
                if named != &s.name {
                    eprintln!("warning: proof names system {named}, checking against {}", s.name);
                }
            }
            match check_proof(&script.proof, &s) {
                Ok(()) => {
                    let concl = script.proof.conclusion().map(|f| f.to_string()).unwrap_or_default();
                    println!("ok: {concl} in {} lines of {}", script.proof.lines.len(), s.name);
                    Ok(true)
                }
                Err(e) => {
                    println!("invalid: {e}");
                    Ok(false)
                }
            }
        }
        Command::SearchProof { system, sequent, depth, size_cap, restricted, renaming } => {
            let mut s = load_system_arg(&system)?;
            if restricted {
                s = restricted_system(&s);
            }
            let q = parse_sequent(&sequent, &s.lang)?;
            let limits = limits_for(&q, depth, size_cap, renaming);
            match derive_bounded(&q.premises, &q.conclusion, &s, limits) {
                SearchOutcome::Found(p) => {
                    print!("{}", render_proof(&p, Some(&s.name)));
                    Ok(true)
                }
                SearchOutcome::NotFound { depth, facts } => {
                    println!(
                        "{q}: not found in {} within depth {depth} (size cap {}, {facts} facts)",
                        s.name, limits.size_cap
                    );
                    Ok(false)
                }
            }
        }
        Command::Companion { command: CompanionCommand::Compare { id, instances, depth, size_cap } } => {
            companion_compare(&id, &instances, Limits::new(depth, size_cap))
        }
        Command::Probe { kind, matrix, instances, instance } => probe(kind, &matrix, instances.as_deref(), &instance),
        Command::Enumerate { class, max_size, count } => {
            let class = Class::ALL.into_iter().find(|c| c.name() == class).ok_or_else(|| {
                let names: Vec<&str> = Class::ALL.iter().map(|c| c.name()).collect();
                anyhow!("unknown class `{class}`; expected one of {}", names.join(", "))
            })?;
            let found = varinc::classes::enumerate_algebras(class, &class.language(), max_size)?;
            for n in 1..=max_size {
                let k = found.iter().filter(|a| a.size() == n).count();
                println!("# size {n}: {k}");
            }
            if !count {
                for (i, a) in found.iter().enumerate() {
                    let name = format!("{}-{}-{}", class.name(), a.size(), i + 1);
                    println!(
                        "\n{}",
                        varinc::matrix::file::MatrixFile::from_algebra(Some(&name), a).render()?.trim_end()
                    );
                }
            }
            Ok(true)
        }
        Command::Repro => {
            let checks = run_repro();
            for c in &checks {
                println!("{c}");
            }
            let failed = checks.iter().filter(|c| !c.ok()).count();
            println!("{} checks, {failed} failed", checks.len());
            Ok(failed == 0)
        }
        Command::Show { id: None } => {
            for id in catalog_ids() {
                let e = catalog_get(&id)?;
                println!("{id}\t{}\t{}", e.kind(), e.note);
            }
            Ok(true)
        }
        Command::Show { id: Some(id) } => {
            let e = catalog_get(&id)?;
            print!("{}", e.render());
            Ok(true)
        }
    }
}

fn limits_for(q: &Sequent, depth: usize, size_cap: Option<usize>, renaming: bool) -> Limits {
    let largest = q.premises.iter().chain([&q.conclusion]).map(Formula::size).max().unwrap_or(1);
    let limits = Limits::new(depth, size_cap.unwrap_or(2 * largest + 3));
    if renaming {
        limits.with_pool(PoolPolicy::RenamingClosure)
    } else {
        limits
    }
}

fn eval(matrix: &str, formula: &str, assign: Option<&str>) -> Run {
    let m = load_matrix_arg(matrix)?;
    let alg = m.algebra();
    let f = parse_formula(formula, m.lang())?;
    let mut fixed = Valuation::new();
    for pair in assign.unwrap_or("").split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (var, val) = pair.split_once('=').ok_or_else(|| anyhow!("assignment `{pair}` is not var=value"))?;
        let i = alg.index_of(val.trim()).ok_or_else(|| anyhow!("`{}` is not an element of {matrix}", val.trim()))?;
        fixed.assign(var.trim(), i);
    }
    let free: Vec<String> = f.vars().into_iter().map(|v| v.to_string()).filter(|v| fixed.get(v).is_none()).collect();
    let mark = |x: usize| if m.is_designated(x) { " *" } else { "" };
    if free.is_empty() {
        let x = evaluate(&f, &fixed, alg)?;
        println!("{}{}", alg.label(x), mark(x));
        return Ok(true);
    }
    for t in tuples(alg.size(), free.len()) {
        let mut v = fixed.clone();
        for (var, &x) in free.iter().zip(&t) {
            v.assign(var, x);
        }
        let x = evaluate(&f, &v, alg)?;
        println!("{}: {}{}", v.display(alg), alg.label(x), mark(x));
    }
    Ok(true)
}

fn companion_compare(id: &str, instances: &str, limits: Limits) -> Run {
    let text = read(instances)?;
    let report = match catalog_get(id).map(|e| e.kind()) {
        Ok(catalog::Kind::System) => system_compare(catalog::system(id)?, &text, limits)?,
        Ok(_) => matrix_compare(id, catalog::matrix(id)?, &text)?,
        Err(_) if Path::new(id).is_file() => {
            let body = read(id)?;
            if body.lines().any(|l| l.trim_start().starts_with("system ") || l.trim_start().starts_with("rule ")) {
                system_compare(parse_system(&body)?, &text, limits)?
            } else {
                matrix_compare(id, load_matrix(&body)?, &text)?
            }
        }
        Err(e) => return Err(e.into()),
    };
    println!("{report}");
    Ok(report.count(Agreement::BOnly) == 0)
}

fn system_compare(s: HilbertSystem, text: &str, limits: Limits) -> Result<varinc::companions::ComparisonReport> {
    let insts = parse_instances(text, &s.lang)?;
    let re = restricted_system(&s);
    let left = left_companion(HilbertOracle::new(s, limits));
    Ok(compare_oracles(&left, &HilbertOracle::new(re, limits), &insts)?)
}

fn matrix_compare(name: &str, m: Matrix, text: &str) -> Result<varinc::companions::ComparisonReport> {
    let insts = parse_instances(text, m.lang())?;
    let ext = adjoin_contaminating(&m)?;
    let left = left_companion(MatrixOracle::new(name, vec![m.clone()]));
    let sum = MatrixOracle::new(&format!("{name}, {name}{}", catalog::OMEGA_SUFFIX), vec![m, ext]);
    Ok(compare_oracles(&left, &sum, &insts)?)
}

fn report_probe(name: &str, m: &Matrix, out: ProbeOutcome) -> bool {
    println!("{name}: {}", if out.holds { "holds" } else { "fails" });
    if let Some(w) = out.witness {
        println!("witness: {}", w.valuation.display(m.algebra()));
    }
    out.holds
}

fn probe(kind: ProbeKind, matrix: &str, instances: Option<&str>, instance: &[String]) -> Run {
    let m = load_matrix_arg(matrix)?;
    match kind {
        ProbeKind::Ecq => Ok(report_probe("ECQ {p, ~p} |- q", &m, probe_ecq(&m)?)),
        ProbeKind::LandEcq => Ok(report_probe("land-ECQ p & ~p |- q", &m, probe_land_ecq(&m)?)),
        ProbeKind::Lnc => Ok(report_probe("LNC |- ~(p & ~p)", &m, probe_lnc(&m)?)),
        ProbeKind::Classify => {
            println!("{}", classify_paraconsistency(&m)?);
            Ok(true)
        }
        ProbeKind::Dt => {
            let mut seqs = Vec::new();
            if let Some(path) = instances {
                seqs.extend(parse_instances(&read(path)?, m.lang())?);
            }
            for s in instance {
                seqs.push(parse_sequent(s, m.lang())?);
            }
            if seqs.is_empty() {
                return Err(anyhow!("dt needs --instances or --instance").into());
            }
            let insts = seqs
                .into_iter()
                .map(|q| match q.conclusion.head() {
                    Some(h) if h == ops::IMP => {
                        let [a, b] = q.conclusion.args() else { unreachable!("-> is binary") };
                        Ok(DeductionInstance::new(q.premises.clone(), a.clone(), b.clone()))
                    }
                    _ => Err(anyhow!("dt instance `{q}` must conclude an implication α -> β")),
                })
                .collect::<Result<Vec<_>>>()?;
            let rows = probe_deduction(&m, &insts)?;
            let mut all = true;
            for r in &rows {
                println!("{r}");
                if let Some(w) = &r.witness {
                    println!(
                        "  witness: {} gives {}",
                        w.valuation.display(m.algebra()),
                        m.algebra().label(w.conclusion_value)
                    );
                }
                all &= r.dt_holds() && r.converse_holds();
            }
            Ok(all)
        }
    }
}
