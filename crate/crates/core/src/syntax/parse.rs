//! Recursive-descent parser for the formula grammar.
//!
//! Precedence, tightest first: `~`, `I`, `C` (prefix); `&`; `|`; `->`
//! (right-associative). `&` and `|` associate to the left.

use super::{ops, Formula, Language};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("at offset {position}: {kind}")]
pub struct ParseError {
    /// Byte offset into the input.
    pub position: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("operator `{0}` is not in the language")]
    UnknownOperator(String),
    #[error("operator `{op}` is declared with arity {declared}, grammar uses it with arity {used}")]
    ArityMismatch { op: String, declared: usize, used: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Op(&'static str),
    LParen,
    RParen,
}

fn tokenize(text: &str, base: usize) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let pos = base + i;
        match c {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'(' => {
                out.push((pos, Tok::LParen));
                i += 1;
            }
            b')' => {
                out.push((pos, Tok::RParen));
                i += 1;
            }
            b'~' => {
                out.push((pos, Tok::Op(ops::NOT)));
                i += 1;
            }
            b'&' => {
                out.push((pos, Tok::Op(ops::AND)));
                i += 1;
            }
            b'|' => {
                out.push((pos, Tok::Op(ops::OR)));
                i += 1;
            }
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                out.push((pos, Tok::Op(ops::IMP)));
                i += 2;
            }
            b'0' => {
                out.push((pos, Tok::Op(ops::BOT)));
                i += 1;
            }
            b'1' => {
                out.push((pos, Tok::Op(ops::TOP)));
                i += 1;
            }
            b'I' | b'C' if !bytes.get(i + 1).is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_') => {
                out.push((pos, Tok::Op(if c == b'I' { ops::INT } else { ops::CLO })));
                i += 1;
            }
            b'a'..=b'z' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((pos, Tok::Ident(text[start..i].to_string())));
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(ParseError {
                    position: pos,
                    kind: ParseErrorKind::Syntax(format!("unexpected character `{ch}`")),
                });
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    lang: &'a Language,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { position: self.pos(), kind: ParseErrorKind::Syntax(msg.into()) })
    }

    fn check_op(&self, op: &str, used: usize, pos: usize) -> Result<(), ParseError> {
        match self.lang.arity(op) {
            None => Err(ParseError { position: pos, kind: ParseErrorKind::UnknownOperator(op.to_string()) }),
            Some(declared) if declared != used => Err(ParseError {
                position: pos,
                kind: ParseErrorKind::ArityMismatch { op: op.to_string(), declared, used },
            }),
            Some(_) => Ok(()),
        }
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if self.peek() == Some(&Tok::Op(ops::IMP)) {
            let pos = self.pos();
            self.at += 1;
            self.check_op(ops::IMP, 2, pos)?;
            let rhs = self.implication()?;
            return Ok(Formula::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while self.peek() == Some(&Tok::Op(ops::OR)) {
            let pos = self.pos();
            self.at += 1;
            self.check_op(ops::OR, 2, pos)?;
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Tok::Op(ops::AND)) {
            let pos = self.pos();
            self.at += 1;
            self.check_op(ops::AND, 2, pos)?;
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Op(op)) if op == ops::NOT || op == ops::INT || op == ops::CLO => {
                self.at += 1;
                self.check_op(op, 1, pos)?;
                let arg = self.unary()?;
                Ok(Formula::app(op, vec![arg]))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Ident(name)) => {
                self.at += 1;
                Ok(Formula::var(&name))
            }
            Some(Tok::Op(op)) if op == ops::BOT || op == ops::TOP => {
                self.at += 1;
                self.check_op(op, 0, pos)?;
                Ok(Formula::constant(op))
            }
            Some(Tok::LParen) => {
                self.at += 1;
                let inner = self.implication()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.syntax("expected `)`");
                }
                self.at += 1;
                Ok(inner)
            }
            Some(Tok::Op(op)) => self.syntax(format!("unexpected operator `{op}`")),
            Some(Tok::RParen) => self.syntax("unexpected `)`"),
            None => self.syntax("unexpected end of input"),
        }
    }
}

fn parse_at(text: &str, base: usize, lang: &Language) -> Result<Formula, ParseError> {
    let toks = tokenize(text, base)?;
    let mut p = Parser { toks, at: 0, end: base + text.len(), lang };
    let f = p.implication()?;
    if p.at != p.toks.len() {
        return p.syntax("trailing input");
    }
    Ok(f)
}

/// Parse a formula, checking every operator against `lang`.
pub fn parse_formula(text: &str, lang: &Language) -> Result<Formula, ParseError> {
    parse_at(text, 0, lang)
}

/// `Σ |- φ` with a finite premise list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sequent {
    pub premises: Vec<Formula>,
    pub conclusion: Formula,
}

impl std::fmt::Display for Sequent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let ps: Vec<String> = self.premises.iter().map(|p| p.to_string()).collect();
        if ps.is_empty() {
            write!(f, "|- {}", self.conclusion)
        } else {
            write!(f, "{} |- {}", ps.join("; "), self.conclusion)
        }
    }
}

/// Parse `p1; p2; ... |- φ`. Premises may also be separated by commas;
/// the premise list may be empty.
pub fn parse_sequent(text: &str, lang: &Language) -> Result<Sequent, ParseError> {
    let Some(turnstile) = text.find("|-") else {
        return Err(ParseError { position: 0, kind: ParseErrorKind::Syntax("missing `|-`".into()) });
    };
    let (lhs, rhs) = (&text[..turnstile], &text[turnstile + 2..]);
    let mut premises = Vec::new();
    let mut offset = 0;
    for piece in lhs.split([';', ',']) {
        if !piece.trim().is_empty() {
            premises.push(parse_at(piece, offset, lang)?);
        }
        offset += piece.len() + 1;
    }
    let conclusion = parse_at(rhs, turnstile + 2, lang)?;
    Ok(Sequent { premises, conclusion })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Formula as F;

    fn lang() -> Language {
        Language::pre_rough()
    }

    #[test]
    fn grammar_examples() {
        let p = F::var("p");
        let q = F::var("q");
        assert_eq!(parse_formula("p & ~p", &lang()).unwrap(), F::and(p.clone(), F::not(p.clone())));
        assert_eq!(parse_formula("(p -> (q -> p))", &lang()).unwrap(), F::imp(p.clone(), F::imp(q.clone(), p.clone())));
        let err = parse_formula("p & | q", &lang()).unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::Syntax(_)));
        assert_eq!(err.position, 4);
    }

    #[test]
    fn precedence_and_associativity() {
        let l = lang();
        assert_eq!(parse_formula("p -> q -> r", &l).unwrap(), parse_formula("p -> (q -> r)", &l).unwrap());
        assert_eq!(parse_formula("p | q & r", &l).unwrap(), parse_formula("p | (q & r)", &l).unwrap());
        assert_eq!(parse_formula("p & q & r", &l).unwrap(), parse_formula("(p & q) & r", &l).unwrap());
        assert_eq!(parse_formula("~p & q", &l).unwrap(), parse_formula("(~p) & q", &l).unwrap());
        assert_eq!(parse_formula("I p -> p", &l).unwrap(), parse_formula("(I p) -> p", &l).unwrap());
        assert_eq!(parse_formula("~I~p", &l).unwrap(), F::not(F::int(F::not(F::var("p")))));
    }

    #[test]
    fn identifiers_and_letter_operators() {
        let l = lang();
        assert_eq!(
            parse_formula("Ip", &l).unwrap_err().kind,
            ParseErrorKind::Syntax("unexpected character `I`".into())
        );
        assert_eq!(parse_formula("p_1 & x2", &l).unwrap(), F::and(F::var("p_1"), F::var("x2")));
        assert_eq!(parse_formula("C(p)", &l).unwrap(), F::clo(F::var("p")));
    }

    #[test]
    fn unknown_operator_and_arity() {
        let err = parse_formula("p -> q", &Language::lattice()).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownOperator("->".into()));
        let odd = Language::new([("&", 2), ("~", 2)]).unwrap();
        let err = parse_formula("~p", &odd).unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::ArityMismatch { .. }));
    }

    #[test]
    fn sequents() {
        let l = lang();
        let s = parse_sequent("p; p -> q |- q", &l).unwrap();
        assert_eq!(s.premises.len(), 2);
        assert_eq!(s.conclusion, F::var("q"));
        let t = parse_sequent("|- p -> p", &l).unwrap();
        assert!(t.premises.is_empty());
        assert_eq!(parse_sequent(&s.to_string(), &l).unwrap(), s);
        let err = parse_sequent("p; & |- q", &l).unwrap_err();
        assert_eq!(err.position, 3);
    }
}
