use std::collections::BTreeMap;

use super::ast::{Decl, Expr, Gate, Program, Stmt, Type};
use super::parser::{LStmt, LStmtKind, ParsedProgram};
use super::{FrontendError, MAX_QUBITS};

/// A scope-checked, type-checked program. Only the typechecker builds one.
#[derive(Clone, Debug)]
pub struct TypedProgram(pub(crate) Program);

impl TypedProgram {
    pub fn program(&self) -> &Program {
        &self.0
    }
}

pub fn typecheck(p: ParsedProgram) -> Result<TypedProgram, FrontendError> {
    let mut table: BTreeMap<String, Type> = BTreeMap::new();
    for d in &p.decls {
        if table.insert(d.name.clone(), d.ty).is_some() {
            return Err(FrontendError::DuplicateVar { line: d.line, name: d.name.clone() });
        }
    }
    let qubits = p.decls.iter().filter(|d| d.ty == Type::Qubit).count();
    if qubits > MAX_QUBITS {
        return Err(FrontendError::TooManyQubits { got: qubits, max: MAX_QUBITS });
    }
    let body = check_block(&p.body, &table)?;
    let decls = p.decls.into_iter().map(|d| Decl { name: d.name, ty: d.ty }).collect();
    Ok(TypedProgram(Program { decls, body }))
}

fn check_block(
    stmts: &[LStmt],
    table: &BTreeMap<String, Type>,
) -> Result<Vec<Stmt>, FrontendError> {
    stmts.iter().map(|s| check_stmt(s, table)).collect()
}

fn check_stmt(s: &LStmt, table: &BTreeMap<String, Type>) -> Result<Stmt, FrontendError> {
    let line = s.line;
    let mismatch = |msg: String| FrontendError::TypeMismatch { line, msg };
    match &s.kind {
        LStmtKind::Skip => Ok(Stmt::Skip),
        LStmtKind::Assign(x, e) => {
            let tx = var_type(x, line, table)?;
            if tx == Type::Qubit {
                return Err(mismatch(format!(
                    "cannot assign a classical expression to qubit `{}`; use `{} := |0>` or a gate",
                    x, x
                )));
            }
            let te = infer(e, line, table)?;
            if te != tx {
                return Err(mismatch(format!(
                    "`{}` has type {} but is assigned a {} expression",
                    x, tx, te
                )));
            }
            Ok(Stmt::Assign(x.clone(), e.clone()))
        }
        LStmtKind::Measure(x, q) => {
            expect_type(x, Type::Bool, line, table, "measurement results are bool")?;
            expect_type(q, Type::Qubit, line, table, "`meas` takes a qubit")?;
            Ok(Stmt::Measure(x.clone(), q.clone()))
        }
        LStmtKind::Gate(name, ops) => {
            let gate = Gate::from_name(name).ok_or_else(|| FrontendError::UnknownGate {
                line,
                name: name.clone(),
            })?;
            if ops.len() != gate.arity() {
                return Err(FrontendError::GateArity {
                    line,
                    gate: gate.name().to_string(),
                    expect: gate.arity(),
                    got: ops.len(),
                });
            }
            for (i, op) in ops.iter().enumerate() {
                expect_type(op, Type::Qubit, line, table, "gate operands are qubits")?;
                if ops[..i].contains(op) {
                    return Err(FrontendError::RepeatedOperand { line });
                }
            }
            Ok(Stmt::Gate(gate, ops.clone()))
        }
        LStmtKind::Consume(e) => {
            let te = infer(e, line, table)?;
            if te != Type::Int {
                return Err(mismatch(format!("`consume` expects an int expression, got {}", te)));
            }
            Ok(Stmt::Consume(e.clone()))
        }
        LStmtKind::InitZero(q) => {
            expect_type(q, Type::Qubit, line, table, "ket initialization targets a qubit")?;
            Ok(Stmt::InitZero(q.clone()))
        }
        LStmtKind::InitPlus(q) => {
            expect_type(q, Type::Qubit, line, table, "ket initialization targets a qubit")?;
            Ok(Stmt::InitPlus(q.clone()))
        }
        LStmtKind::If(guard, a, b) => {
            expect_bool_guard(guard, line, table, "if")?;
            Ok(Stmt::If(guard.clone(), check_block(a, table)?, check_block(b, table)?))
        }
        LStmtKind::While(id, guard, body) => {
            expect_bool_guard(guard, line, table, "while")?;
            Ok(Stmt::While(*id, guard.clone(), check_block(body, table)?))
        }
    }
}

fn var_type(
    name: &str,
    line: u32,
    table: &BTreeMap<String, Type>,
) -> Result<Type, FrontendError> {
    table
        .get(name)
        .copied()
        .ok_or_else(|| FrontendError::UnknownVar { line, name: name.to_string() })
}

fn expect_type(
    name: &str,
    want: Type,
    line: u32,
    table: &BTreeMap<String, Type>,
    what: &str,
) -> Result<(), FrontendError> {
    let got = var_type(name, line, table)?;
    if got != want {
        return Err(FrontendError::TypeMismatch {
            line,
            msg: format!("`{}` has type {}, expected {} ({})", name, got, want, what),
        });
    }
    Ok(())
}

fn expect_bool_guard(
    guard: &Expr,
    line: u32,
    table: &BTreeMap<String, Type>,
    stmt: &str,
) -> Result<(), FrontendError> {
    let t = infer(guard, line, table)?;
    if t != Type::Bool {
        return Err(FrontendError::TypeMismatch {
            line,
            msg: format!("`{}` guard must be bool, got {}", stmt, t),
        });
    }
    Ok(())
}

fn infer(e: &Expr, line: u32, table: &BTreeMap<String, Type>) -> Result<Type, FrontendError> {
    let mismatch = |msg: String| FrontendError::TypeMismatch { line, msg };
    match e {
        Expr::Bool(_) => Ok(Type::Bool),
        Expr::Int(_) => Ok(Type::Int),
        Expr::Var(n) => {
            let t = var_type(n, line, table)?;
            if t == Type::Qubit {
                return Err(mismatch(format!(
                    "qubit `{}` cannot be used in a classical expression; measure it first",
                    n
                )));
            }
            Ok(t)
        }
        Expr::Not(a) => {
            expect_expr(a, Type::Bool, line, table)?;
            Ok(Type::Bool)
        }
        Expr::And(a, b) | Expr::Or(a, b) => {
            expect_expr(a, Type::Bool, line, table)?;
            expect_expr(b, Type::Bool, line, table)?;
            Ok(Type::Bool)
        }
        Expr::Cmp(_, a, b) => {
            expect_expr(a, Type::Int, line, table)?;
            expect_expr(b, Type::Int, line, table)?;
            Ok(Type::Bool)
        }
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
            expect_expr(a, Type::Int, line, table)?;
            expect_expr(b, Type::Int, line, table)?;
            Ok(Type::Int)
        }
        Expr::Neg(a) => {
            expect_expr(a, Type::Int, line, table)?;
            Ok(Type::Int)
        }
    }
}

fn expect_expr(
    e: &Expr,
    want: Type,
    line: u32,
    table: &BTreeMap<String, Type>,
) -> Result<(), FrontendError> {
    let got = infer(e, line, table)?;
    if got != want {
        return Err(FrontendError::TypeMismatch {
            line,
            msg: format!("expected a {} expression, got {}", want, got),
        });
    }
    Ok(())
}
