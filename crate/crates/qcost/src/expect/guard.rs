use std::collections::BTreeMap;
use std::fmt;

use crate::arith::{Poly, QSqrt2, RatFun, VarId, VarKind, VarTable};
use crate::frontend::{CmpOp, Expr};

/// One literal of a guard in negation normal form. Comparisons are kept as
/// sign conditions on rational functions; boolean program variables stay
/// symbolic until a substitution decides them.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Lit {
    /// Program bool variable, positive or negated.
    Var(String, bool),
    /// f >= 0
    Ge(RatFun),
    /// f > 0
    Gt(RatFun),
}

/// Boolean condition over the classical and matrix state.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Guard {
    Const(bool),
    Lit(Lit),
    And(Vec<Guard>),
    Or(Vec<Guard>),
}

impl Guard {
    pub fn tt() -> Guard {
        Guard::Const(true)
    }

    pub fn ff() -> Guard {
        Guard::Const(false)
    }

    pub fn var(name: &str) -> Guard {
        Guard::Lit(Lit::Var(name.to_string(), true))
    }

    pub fn ge(f: RatFun) -> Guard {
        Guard::Lit(Lit::Ge(f)).simplified()
    }

    pub fn gt(f: RatFun) -> Guard {
        Guard::Lit(Lit::Gt(f)).simplified()
    }

    pub fn and(gs: Vec<Guard>) -> Guard {
        Guard::And(gs).simplified()
    }

    pub fn or(gs: Vec<Guard>) -> Guard {
        Guard::Or(gs).simplified()
    }

    pub fn as_const(&self) -> Option<bool> {
        match self {
            Guard::Const(b) => Some(*b),
            _ => None,
        }
    }

    /// Flattens nested connectives, folds constants, and dedupes literals.
    pub fn simplified(&self) -> Guard {
        match self {
            Guard::Const(_) => self.clone(),
            Guard::Lit(Lit::Ge(f)) => match f.as_constant() {
                Some(c) => Guard::Const(c.is_nonneg()),
                None => self.clone(),
            },
            Guard::Lit(Lit::Gt(f)) => match f.as_constant() {
                Some(c) => Guard::Const(c.signum() > 0),
                None => self.clone(),
            },
            Guard::Lit(_) => self.clone(),
            Guard::And(gs) => {
                let mut flat = Vec::new();
                for g in gs {
                    match g.simplified() {
                        Guard::Const(true) => {}
                        Guard::Const(false) => return Guard::Const(false),
                        Guard::And(inner) => flat.extend(inner),
                        other => flat.push(other),
                    }
                }
                flat.sort();
                flat.dedup();
                match flat.len() {
                    0 => Guard::Const(true),
                    1 => flat.pop().unwrap(),
                    _ => Guard::And(flat),
                }
            }
            Guard::Or(gs) => {
                let mut flat = Vec::new();
                for g in gs {
                    match g.simplified() {
                        Guard::Const(false) => {}
                        Guard::Const(true) => return Guard::Const(true),
                        Guard::Or(inner) => flat.extend(inner),
                        other => flat.push(other),
                    }
                }
                flat.sort();
                flat.dedup();
                match flat.len() {
                    0 => Guard::Const(false),
                    1 => flat.pop().unwrap(),
                    _ => Guard::Or(flat),
                }
            }
        }
    }

    /// Negation, pushed to the literals. Over integer-valued functions the
    /// complement of f >= 0 is -f - 1 >= 0; over real-valued ones it is the
    /// strict -f > 0.
    pub fn negate(&self, table: &VarTable) -> Guard {
        match self {
            Guard::Const(b) => Guard::Const(!b),
            Guard::Lit(Lit::Var(x, pos)) => Guard::Lit(Lit::Var(x.clone(), !pos)),
            Guard::Lit(Lit::Ge(f)) => {
                if is_integer_valued(f, table) {
                    Guard::ge(&-f - &RatFun::one())
                } else {
                    Guard::gt(-f)
                }
            }
            Guard::Lit(Lit::Gt(f)) => Guard::ge(-f),
            Guard::And(gs) => Guard::or(gs.iter().map(|g| g.negate(table)).collect()),
            Guard::Or(gs) => Guard::and(gs.iter().map(|g| g.negate(table)).collect()),
        }
    }

    /// Builds a guard from a program boolean expression. Integer
    /// subexpressions become polynomials over the table's int variables.
    pub fn from_expr(e: &Expr, table: &VarTable) -> Guard {
        match e {
            Expr::Bool(b) => Guard::Const(*b),
            Expr::Var(x) => Guard::var(x),
            Expr::Not(a) => Guard::from_expr(a, table).negate(table),
            Expr::And(a, b) => {
                Guard::and(vec![Guard::from_expr(a, table), Guard::from_expr(b, table)])
            }
            Expr::Or(a, b) => {
                Guard::or(vec![Guard::from_expr(a, table), Guard::from_expr(b, table)])
            }
            Expr::Cmp(op, a, b) => {
                let pa = int_poly(a, table);
                let pb = int_poly(b, table);
                let diff = |x: &Poly, y: &Poly| RatFun::from_poly(x - y);
                let one = RatFun::one;
                match op {
                    CmpOp::Ge => Guard::ge(diff(&pa, &pb)),
                    CmpOp::Le => Guard::ge(diff(&pb, &pa)),
                    CmpOp::Gt => Guard::ge(&diff(&pa, &pb) - &one()),
                    CmpOp::Lt => Guard::ge(&diff(&pb, &pa) - &one()),
                    CmpOp::Eq => {
                        Guard::and(vec![Guard::ge(diff(&pa, &pb)), Guard::ge(diff(&pb, &pa))])
                    }
                    CmpOp::Ne => Guard::or(vec![
                        Guard::ge(&diff(&pa, &pb) - &one()),
                        Guard::ge(&diff(&pb, &pa) - &one()),
                    ]),
                }
            }
            _ => panic!("not a boolean expression: {}", e),
        }
    }

    /// All conjuncts of a conjunction (a non-And guard is its own list).
    pub fn conjuncts(self) -> Vec<Guard> {
        match self {
            Guard::Const(true) => vec![],
            Guard::And(gs) => gs,
            g => vec![g],
        }
    }

    pub fn subst(&self, map: &BTreeMap<VarId, RatFun>, bools: &BTreeMap<String, Guard>, table: &VarTable) -> Guard {
        match self {
            Guard::Const(_) => self.clone(),
            Guard::Lit(Lit::Var(x, pos)) => match bools.get(x) {
                None => self.clone(),
                Some(g) => {
                    if *pos {
                        g.clone()
                    } else {
                        g.negate(table)
                    }
                }
            },
            Guard::Lit(Lit::Ge(f)) => Guard::ge(f.subst(map)),
            Guard::Lit(Lit::Gt(f)) => Guard::gt(f.subst(map)),
            Guard::And(gs) => {
                Guard::and(gs.iter().map(|g| g.subst(map, bools, table)).collect())
            }
            Guard::Or(gs) => Guard::or(gs.iter().map(|g| g.subst(map, bools, table)).collect()),
        }
    }

    pub fn eval_f64(&self, assign: &dyn Fn(VarId) -> f64, bools: &dyn Fn(&str) -> bool) -> bool {
        match self {
            Guard::Const(b) => *b,
            Guard::Lit(Lit::Var(x, pos)) => bools(x) == *pos,
            Guard::Lit(Lit::Ge(f)) => f.eval_f64(assign) >= 0.0,
            Guard::Lit(Lit::Gt(f)) => f.eval_f64(assign) > 0.0,
            Guard::And(gs) => gs.iter().all(|g| g.eval_f64(assign, bools)),
            Guard::Or(gs) => gs.iter().any(|g| g.eval_f64(assign, bools)),
        }
    }

    pub fn eval_exact(
        &self,
        assign: &dyn Fn(VarId) -> QSqrt2,
        bools: &dyn Fn(&str) -> bool,
    ) -> bool {
        match self {
            Guard::Const(b) => *b,
            Guard::Lit(Lit::Var(x, pos)) => bools(x) == *pos,
            Guard::Lit(Lit::Ge(f)) => f.eval_exact(assign).is_nonneg(),
            Guard::Lit(Lit::Gt(f)) => f.eval_exact(assign).signum() > 0,
            Guard::And(gs) => gs.iter().all(|g| g.eval_exact(assign, bools)),
            Guard::Or(gs) => gs.iter().any(|g| g.eval_exact(assign, bools)),
        }
    }

    pub fn vars(&self) -> Vec<VarId> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_vars(&self, out: &mut Vec<VarId>) {
        match self {
            Guard::Const(_) | Guard::Lit(Lit::Var(..)) => {}
            Guard::Lit(Lit::Ge(f)) | Guard::Lit(Lit::Gt(f)) => out.extend(f.vars()),
            Guard::And(gs) | Guard::Or(gs) => {
                for g in gs {
                    g.collect_vars(out);
                }
            }
        }
    }

    pub fn display<'a>(&'a self, table: &'a VarTable) -> GuardDisplay<'a> {
        GuardDisplay { guard: self, table }
    }
}

/// True when every variable of f ranges over the integers, so that strict
/// comparisons can be tightened.
fn is_integer_valued(f: &RatFun, table: &VarTable) -> bool {
    f.is_poly() && f.vars().iter().all(|v| matches!(table.kind(*v), VarKind::Int(_)))
}

fn int_poly(e: &Expr, table: &VarTable) -> Poly {
    match e {
        Expr::Int(n) => Poly::from_int(*n),
        Expr::Var(x) => {
            let id = table.lookup(x).unwrap_or_else(|| panic!("`{}` not in table", x));
            Poly::var(id)
        }
        Expr::Add(a, b) => &int_poly(a, table) + &int_poly(b, table),
        Expr::Sub(a, b) => &int_poly(a, table) - &int_poly(b, table),
        Expr::Mul(a, b) => &int_poly(a, table) * &int_poly(b, table),
        Expr::Neg(a) => -&int_poly(a, table),
        _ => panic!("not an integer expression: {}", e),
    }
}

/// Polynomial for an integer program expression.
pub fn poly_of_int_expr(e: &Expr, table: &VarTable) -> Poly {
    int_poly(e, table)
}

pub struct GuardDisplay<'a> {
    guard: &'a Guard,
    table: &'a VarTable,
}

impl fmt::Display for GuardDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_guard(self.guard, self.table, f)
    }
}

fn fmt_guard(g: &Guard, table: &VarTable, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match g {
        Guard::Const(b) => write!(f, "{}", b),
        Guard::Lit(Lit::Var(x, true)) => write!(f, "{}", x),
        Guard::Lit(Lit::Var(x, false)) => write!(f, "!{}", x),
        Guard::Lit(Lit::Ge(p)) => write!(f, "{} >= 0", p.display(table)),
        Guard::Lit(Lit::Gt(p)) => write!(f, "{} > 0", p.display(table)),
        Guard::And(gs) => {
            for (i, g) in gs.iter().enumerate() {
                if i > 0 {
                    write!(f, " && ")?;
                }
                match g {
                    Guard::Or(_) => {
                        write!(f, "(")?;
                        fmt_guard(g, table, f)?;
                        write!(f, ")")?;
                    }
                    _ => fmt_guard(g, table, f)?,
                }
            }
            Ok(())
        }
        Guard::Or(gs) => {
            for (i, g) in gs.iter().enumerate() {
                if i > 0 {
                    write!(f, " || ")?;
                }
                match g {
                    Guard::And(_) => {
                        write!(f, "(")?;
                        fmt_guard(g, table, f)?;
                        write!(f, ")")?;
                    }
                    _ => fmt_guard(g, table, f)?,
                }
            }
            Ok(())
        }
    }
}
