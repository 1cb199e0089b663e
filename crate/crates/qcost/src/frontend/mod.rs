//! Concrete syntax for mixed classical-quantum programs: lexer, recursive
//! descent parser with parse-time `def` macros, type checking, and the
//! desugaring of ket initializations into measure-and-correct form.

pub mod ast;
mod desugar;
mod lexer;
mod parser;
mod typecheck;

pub use ast::{CmpOp, Decl, Expr, Gate, LoopId, Program, Stmt, Type};
pub use desugar::desugar;
pub use parser::{parse, ParsedProgram};
pub use typecheck::{typecheck, TypedProgram};

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FrontendError {
    #[error("line {line}:{col}: {msg}")]
    Lex { line: u32, col: u32, msg: String },
    #[error("line {line}:{col}: {msg}")]
    Parse { line: u32, col: u32, msg: String },
    #[error("line {line}: unknown gate `{name}`: supported gates are X, Y, Z, H, S, Sdg, T, Tdg, CNOT, CZ, CCNOT")]
    UnknownGate { line: u32, name: String },
    #[error("line {line}: parametrized qubit registers are not supported; declare individual qubits")]
    ParamRegister { line: u32 },
    #[error("line {line}: gate {gate} expects {expect} qubit operand(s), got {got}")]
    GateArity { line: u32, gate: String, expect: usize, got: usize },
    #[error("line {line}: gate operands must be distinct qubits")]
    RepeatedOperand { line: u32 },
    #[error("line {line}: `{name}` is not declared")]
    UnknownVar { line: u32, name: String },
    #[error("line {line}: `{name}` is declared twice")]
    DuplicateVar { line: u32, name: String },
    #[error("line {line}: {msg}")]
    TypeMismatch { line: u32, msg: String },
    #[error("line {line}: macro `{name}` expects {expect} argument(s), got {got}")]
    MacroArity { line: u32, name: String, expect: usize, got: usize },
    #[error("macro expansion exceeded depth limit (recursive macro?)")]
    MacroDepth,
    #[error("program uses {got} qubits; the analyzer supports at most {max}")]
    TooManyQubits { got: usize, max: usize },
}

/// Hard cap on qubits: symbolic states are dense 2^n x 2^n matrices.
pub const MAX_QUBITS: usize = 6;

/// Full frontend: text to a desugared, typechecked program.
pub fn load_program(src: &str) -> Result<Program, FrontendError> {
    let parsed = parse(src)?;
    let typed = typecheck(parsed)?;
    Ok(desugar(typed))
}
