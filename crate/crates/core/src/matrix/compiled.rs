//! Postfix programs for evaluating one formula under many valuations.

use super::{FiniteAlgebra, SemanticsError};
use crate::syntax::{Formula, LanguageMismatch, Symbol};

#[derive(Debug, Clone, Copy)]
enum Instr {
    /// Push the value of the variable in this slot.
    Load(usize),
    /// Pop `arity` values, push the table entry.
    Apply { table: usize, arity: usize },
}

#[derive(Debug, Clone)]
pub(crate) struct Program {
    code: Vec<Instr>,
}

impl Program {
    /// Variables are resolved to positions in `slots`.
    pub(crate) fn compile(f: &Formula, alg: &FiniteAlgebra, slots: &[Symbol]) -> Result<Program, SemanticsError> {
        let mut code = Vec::with_capacity(f.size());
        emit(f, alg, slots, &mut code)?;
        Ok(Program { code })
    }

    pub(crate) fn run(&self, alg: &FiniteAlgebra, assignment: &[usize], stack: &mut Vec<usize>) -> usize {
        stack.clear();
        let n = alg.size();
        for ins in &self.code {
            match *ins {
                Instr::Load(slot) => stack.push(assignment[slot]),
                Instr::Apply { table, arity } => {
                    let base = stack.len() - arity;
                    let offset = stack[base..].iter().fold(0, |acc, &a| acc * n + a);
                    stack.truncate(base);
                    stack.push(alg.tables()[table][offset]);
                }
            }
        }
        stack[0]
    }
}

fn emit(f: &Formula, alg: &FiniteAlgebra, slots: &[Symbol], code: &mut Vec<Instr>) -> Result<(), SemanticsError> {
    match f {
        Formula::Var(x) => {
            let slot =
                slots.iter().position(|s| s == x).ok_or_else(|| SemanticsError::UnassignedVariable(x.to_string()))?;
            code.push(Instr::Load(slot));
        }
        Formula::App(op, args) => {
            let table = alg.lang().position(op).ok_or_else(|| LanguageMismatch::UnknownOperator(op.to_string()))?;
            let arity = alg.lang().arity(op).unwrap_or(0);
            if arity != args.len() {
                return Err(LanguageMismatch::Arity { op: op.to_string(), expected: arity, found: args.len() }.into());
            }
            for a in args.iter() {
                emit(a, alg, slots, code)?;
            }
            code.push(Instr::Apply { table, arity });
        }
    }
    Ok(())
}
