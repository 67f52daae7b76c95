//! Line-oriented text formats for Hilbert systems and proof scripts.
//!
//! A system file:
//!
//! ```text
//! system HPRL-re
//! language & | -> ~ I C
//! define bot := ~(p0 -> p0)
//! axiom A3: (a & b) -> b
//! rule RMP: a, a -> b / b restrict
//! rule RHS: a -> b, b -> c / a -> c restrict b <= a c
//! ```
//!
//! A proof script (line numbers are 1-based and must be consecutive):
//!
//! ```text
//! system HPRL
//! assume p & q
//! 1. p & q :: hyp
//! 2. (p & q) -> q :: ax A3 [a := p, b := q]
//! 3. q :: MP 1 2
//! 4. p -> q :: R3 3
//! ```
//!
//! `#` starts a comment in both formats.

use std::fmt::Write as _;

use super::{HilbertSystem, Justification, Proof, Rule, SideCondition, SystemError};
use crate::syntax::{ops, parse_formula, Formula, Language, ParseError, Substitution, Symbol};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Formula { line: usize, source: ParseError },
    #[error(transparent)]
    System(#[from] SystemError),
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, message: message.into() }
}

/// Non-blank lines with comments stripped, paired with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn is_ident(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

struct SystemReader {
    lang: Option<Language>,
    defines: Substitution,
}

impl SystemReader {
    fn formula(&self, line: usize, text: &str) -> Result<Formula, FormatError> {
        let lang = self.lang.as_ref().ok_or_else(|| syntax(line, "`language` must come first"))?;
        let f = parse_formula(text, lang).map_err(|source| FormatError::Formula { line, source })?;
        Ok(self.defines.apply(&f))
    }
}

/// Split `body restrict ...` into the body and the side condition.
fn split_condition(line: usize, text: &str) -> Result<(&str, Option<SideCondition>), FormatError> {
    let words: Vec<&str> = text.split_whitespace().collect();
    let Some(at) = words.iter().rposition(|w| *w == "restrict") else { return Ok((text, None)) };
    let start = text.rfind("restrict").expect("word is present");
    let body = text[..start].trim_end();
    let rest = &words[at + 1..];
    if rest.is_empty() {
        return Ok((body, Some(SideCondition::VarInclusion)));
    }
    let Some(le) = rest.iter().position(|w| *w == "<=") else {
        return Err(syntax(line, "expected `restrict` or `restrict <vars> <= <vars>`"));
    };
    let names =
        |ws: &[&str]| -> Result<Vec<Symbol>, FormatError> {
            if ws.is_empty() {
                return Err(syntax(line, "empty variable list in side condition"));
            }
            ws.iter()
                .map(|w| {
                    if is_ident(w) {
                        Ok(Symbol::from(*w))
                    } else {
                        Err(syntax(line, format!("`{w}` is not a variable")))
                    }
                })
                .collect()
        };
    Ok((body, Some(SideCondition::Custom { covered: names(&rest[..le])?, by: names(&rest[le + 1..])? })))
}

pub fn parse_system(text: &str) -> Result<HilbertSystem, FormatError> {
    let mut name = None;
    let mut reader = SystemReader { lang: None, defines: Substitution::new() };
    let mut axioms = Vec::new();
    let mut rules = Vec::new();
    for (n, line) in content_lines(text) {
        let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match keyword {
            "system" => {
                if rest.is_empty() {
                    return Err(syntax(n, "missing system name"));
                }
                name = Some(rest.to_string());
            }
            "language" => {
                let mut symbols = Vec::new();
                for s in rest.split_whitespace() {
                    let arity = ops::grammar_arity(s).ok_or_else(|| syntax(n, format!("unknown operator `{s}`")))?;
                    symbols.push((s, arity));
                }
                reader.lang = Some(Language::new(symbols).map_err(|e| syntax(n, e.to_string()))?);
            }
            "define" => {
                let (var, body) =
                    rest.split_once(":=").ok_or_else(|| syntax(n, "expected `define NAME := formula`"))?;
                let var = var.trim();
                if !is_ident(var) {
                    return Err(syntax(n, format!("`{var}` is not a valid name")));
                }
                let value = reader.formula(n, body)?;
                reader.defines.bind(var, value);
            }
            "axiom" => {
                let (label, body) = rest.split_once(':').ok_or_else(|| syntax(n, "expected `axiom NAME: schema`"))?;
                axioms.push((label.trim().to_string(), reader.formula(n, body)?));
            }
            "rule" => {
                let (label, body) =
                    rest.split_once(':').ok_or_else(|| syntax(n, "expected `rule NAME: premises / conclusion`"))?;
                let (body, condition) = split_condition(n, body)?;
                let (prem, concl) =
                    body.split_once('/').ok_or_else(|| syntax(n, "missing `/` between premises and conclusion"))?;
                let premises = prem
                    .split(',')
                    .filter(|p| !p.trim().is_empty())
                    .map(|p| reader.formula(n, p))
                    .collect::<Result<_, _>>()?;
                let mut rule = Rule::new(label.trim(), premises, reader.formula(n, concl)?);
                rule.condition = condition;
                rules.push(rule);
            }
            other => return Err(syntax(n, format!("unknown directive `{other}`"))),
        }
    }
    let lang = reader.lang.ok_or_else(|| syntax(0, "no `language` line"))?;
    Ok(HilbertSystem::new(&name.unwrap_or_else(|| "unnamed".into()), lang, axioms, rules)?)
}

pub fn render_system(s: &HilbertSystem) -> String {
    let mut out = String::new();
    let symbols: Vec<&str> = s.lang.operators().map(|(o, _)| o).collect();
    writeln!(out, "system {}", s.name).unwrap();
    writeln!(out, "language {}", symbols.join(" ")).unwrap();
    for (name, schema) in &s.axioms {
        writeln!(out, "axiom {name}: {schema}").unwrap();
    }
    for r in &s.rules {
        let prem: Vec<String> = r.premises.iter().map(|p| p.to_string()).collect();
        write!(out, "rule {}: {} / {}", r.name, prem.join(", "), r.conclusion).unwrap();
        if let Some(c) = &r.condition {
            write!(out, " {c}").unwrap();
        }
        out.push('\n');
    }
    out
}

fn render_sigma(sigma: &Substitution) -> String {
    let parts: Vec<String> = sigma.iter().map(|(v, f)| format!("{v} := {f}")).collect();
    format!("[{}]", parts.join(", "))
}

/// Render a proof script; `system` adds a header naming the system.
pub fn render_proof(p: &Proof, system: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(name) = system {
        writeln!(out, "system {name}").unwrap();
    }
    if !p.hypotheses.is_empty() {
        let hs: Vec<String> = p.hypotheses.iter().map(|h| h.to_string()).collect();
        writeln!(out, "assume {}", hs.join("; ")).unwrap();
    }
    for (i, line) in p.lines.iter().enumerate() {
        let why = match &line.justification {
            Justification::Hypothesis => "hyp".to_string(),
            Justification::Axiom { name, sigma } if sigma.is_empty() => format!("ax {name}"),
            Justification::Axiom { name, sigma } => format!("ax {name} {}", render_sigma(sigma)),
            Justification::Rule { name, premises } => {
                let refs: Vec<String> = premises.iter().map(|k| (k + 1).to_string()).collect();
                format!("{name} {}", refs.join(" "))
            }
        };
        writeln!(out, "{}. {} :: {why}", i + 1, line.formula).unwrap();
    }
    out
}

/// A parsed proof script.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofScript {
    /// From the optional `system` header.
    pub system: Option<String>,
    pub proof: Proof,
}

fn parse_sigma(n: usize, text: &str, lang: &Language) -> Result<Substitution, FormatError> {
    let inner = text
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| syntax(n, "substitution must be written `[a := formula, ...]`"))?;
    let mut sigma = Substitution::new();
    for binding in inner.split(',').filter(|b| !b.trim().is_empty()) {
        let (var, value) =
            binding.split_once(":=").ok_or_else(|| syntax(n, format!("bad binding `{}`", binding.trim())))?;
        let var = var.trim();
        if !is_ident(var) {
            return Err(syntax(n, format!("`{var}` is not a variable")));
        }
        sigma.bind(var, parse_formula(value, lang).map_err(|source| FormatError::Formula { line: n, source })?);
    }
    Ok(sigma)
}

/// Parse a proof script, reading formulas in `lang`.
pub fn parse_proof(text: &str, lang: &Language) -> Result<ProofScript, FormatError> {
    let formula = |n: usize, t: &str| parse_formula(t, lang).map_err(|source| FormatError::Formula { line: n, source });
    let mut script = ProofScript { system: None, proof: Proof::default() };
    for (n, line) in content_lines(text) {
        if let Some(name) = line.strip_prefix("system ") {
            script.system = Some(name.trim().to_string());
            continue;
        }
        if let Some(hs) = line.strip_prefix("assume ") {
            for h in hs.split(';').filter(|h| !h.trim().is_empty()) {
                script.proof.hypotheses.push(formula(n, h)?);
            }
            continue;
        }
        let (number, rest) = line.split_once('.').ok_or_else(|| syntax(n, "expected `N. formula :: justification`"))?;
        let expected = script.proof.lines.len() + 1;
        if number.trim().parse::<usize>().ok() != Some(expected) {
            return Err(syntax(n, format!("expected line number {expected}, found `{}`", number.trim())));
        }
        let (body, why) = rest.split_once("::").ok_or_else(|| syntax(n, "missing `::` before the justification"))?;
        let f = formula(n, body)?;
        let why = why.trim();
        let (head, args) = why.split_once(char::is_whitespace).map_or((why, ""), |(h, a)| (h, a.trim()));
        let justification = match head {
            "hyp" if args.is_empty() => Justification::Hypothesis,
            "ax" => {
                let (name, sigma) = args.split_once(char::is_whitespace).map_or((args, ""), |(a, s)| (a, s.trim()));
                if name.is_empty() {
                    return Err(syntax(n, "missing axiom name"));
                }
                let sigma = if sigma.is_empty() { Substitution::new() } else { parse_sigma(n, sigma, lang)? };
                Justification::Axiom { name: name.to_string(), sigma }
            }
            "" => return Err(syntax(n, "missing justification")),
            rule => {
                let premises = args
                    .split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|t| !t.is_empty())
                    .map(|t| match t.parse::<usize>() {
                        Ok(k) if k >= 1 => Ok(k - 1),
                        _ => Err(syntax(n, format!("`{t}` is not a line number"))),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Justification::Rule { name: rule.to_string(), premises }
            }
        };
        script.proof.push(f, justification);
    }
    Ok(script)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::check_proof;

    const HPRL_PART: &str = "\
system part   # a fragment
language & | -> ~ I C
axiom A3: (a & b) -> b
rule MP: a, a -> b / b
rule R3: a / b -> a
rule RHS: a -> b, b -> c / a -> c restrict b <= a c
";

    const SCRIPT: &str = "\
system part
assume p & q
1. p & q :: hyp
2. (p & q) -> q :: ax A3 [a := p, b := q]
3. q :: MP 1 2
4. p -> q :: R3 3
";

    #[test]
    fn system_round_trip() {
        let s = parse_system(HPRL_PART).unwrap();
        assert_eq!(s.name, "part");
        assert_eq!(s.rules.len(), 3);
        assert_eq!(
            s.rules[2].condition,
            Some(SideCondition::Custom { covered: vec!["b".into()], by: vec!["a".into(), "c".into()] })
        );
        let text = render_system(&s);
        assert_eq!(parse_system(&text).unwrap(), s);
        assert_eq!(render_system(&parse_system(&text).unwrap()), text);
    }

    #[test]
    fn defines_expand() {
        let s = parse_system("language ~ ->\ndefine bot := ~(p0 -> p0)\naxiom A13: bot -> a\n").unwrap();
        let lang = Language::from_grammar(&["~", "->"]);
        assert_eq!(s.axioms[0].1, parse_formula("~(p0 -> p0) -> a", &lang).unwrap());
    }

    #[test]
    fn proof_round_trip_and_check() {
        let s = parse_system(HPRL_PART).unwrap();
        let script = parse_proof(SCRIPT, &s.lang).unwrap();
        assert_eq!(script.system.as_deref(), Some("part"));
        check_proof(&script.proof, &s).unwrap();
        let text = render_proof(&script.proof, Some("part"));
        assert_eq!(parse_proof(&text, &s.lang).unwrap(), script);
    }

    #[test]
    fn partial_axiom_substitution_is_accepted() {
        let s = parse_system(HPRL_PART).unwrap();
        let text = SCRIPT.replace("[a := p, b := q]", "").replace("ax A3 ", "ax A3");
        let script = parse_proof(&text, &s.lang).unwrap();
        check_proof(&script.proof, &s).unwrap();
    }

    #[test]
    fn format_errors() {
        assert!(matches!(parse_system("axiom A: a"), Err(FormatError::Syntax { line: 1, .. })));
        assert!(matches!(parse_system("language -> @"), Err(FormatError::Syntax { .. })));
        assert!(matches!(parse_system("language ->\nrule MP: a, a -> b"), Err(FormatError::Syntax { line: 2, .. })));
        assert!(matches!(parse_system("language ->\naxiom A: a & b"), Err(FormatError::Formula { line: 2, .. })));
        let lang = Language::heyting();
        assert!(matches!(parse_proof("2. p :: hyp", &lang), Err(FormatError::Syntax { .. })));
        assert!(matches!(parse_proof("1. p :: MP x", &lang), Err(FormatError::Syntax { .. })));
        assert!(matches!(parse_proof("1. p", &lang), Err(FormatError::Syntax { .. })));
    }
}
