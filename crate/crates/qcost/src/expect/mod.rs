//! The symbolic expectation language: terms produced by running the
//! expectation transformer backward over a program, the guarded cost
//! expressions they flatten into, and the substitutions statements induce.

mod cost;
mod guard;

pub use cost::{CostExpr, CostExprDisplay, Summand};
pub use guard::{poly_of_int_expr, Guard, Lit};

use std::collections::BTreeMap;
use std::fmt;

use crate::arith::{Poly, QSqrt2, RatFun, VarId, VarTable};

/// Identifier of an unknown bound function. Loops give rise to one or two
/// of these (a cost part and, for nontrivial continuations, a value part).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct FunId(pub u32);

impl fmt::Display for FunId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}", self.0)
    }
}

/// A simultaneous substitution on the symbolic state: rational functions
/// for int and matrix variables, guards for bool variables. Missing keys
/// mean identity.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct StateUpdate {
    pub vals: BTreeMap<VarId, RatFun>,
    pub bools: BTreeMap<String, Guard>,
}

impl StateUpdate {
    pub fn identity() -> StateUpdate {
        StateUpdate::default()
    }

    pub fn is_identity(&self) -> bool {
        self.vals.is_empty() && self.bools.is_empty()
    }

    pub fn set_val(v: VarId, f: RatFun) -> StateUpdate {
        let mut u = StateUpdate::identity();
        u.vals.insert(v, f);
        u
    }

    pub fn set_bool(name: &str, g: Guard) -> StateUpdate {
        let mut u = StateUpdate::identity();
        u.bools.insert(name.to_string(), g);
        u
    }

    /// From a matrix-variable mapping, dropping identity entries.
    pub fn from_matrix(map: BTreeMap<VarId, RatFun>) -> StateUpdate {
        let vals = map.into_iter().filter(|(v, f)| *f != RatFun::var(*v)).collect();
        StateUpdate { vals, bools: BTreeMap::new() }
    }

    /// `self` then `later`: the state recorded by `self` re-expressed
    /// through the earlier update `later` (backward composition).
    pub fn compose(&self, later: &StateUpdate, table: &VarTable) -> StateUpdate {
        let mut vals = BTreeMap::new();
        for (v, f) in &self.vals {
            vals.insert(*v, f.subst(&later.vals));
        }
        for (v, f) in &later.vals {
            vals.entry(*v).or_insert_with(|| f.clone());
        }
        let mut bools = BTreeMap::new();
        for (x, g) in &self.bools {
            bools.insert(x.clone(), g.subst(&later.vals, &later.bools, table));
        }
        for (x, g) in &later.bools {
            bools.entry(x.clone()).or_insert_with(|| g.clone());
        }
        StateUpdate { vals, bools }
    }

    pub fn display<'a>(&'a self, table: &'a VarTable) -> StateUpdateDisplay<'a> {
        StateUpdateDisplay { update: self, table }
    }
}

/// Substitution eliminating the largest diagonal variable via trace one:
/// d_dim := 1 - sum of the others. Keeping terms reduced this way turns
/// full-trace sums into literal constants.
pub fn trace_update(table: &VarTable) -> StateUpdate {
    let diags = table.diag_ids();
    let last = *diags.last().expect("table has diagonal variables");
    let mut p = Poly::one();
    for d in &diags[..diags.len() - 1] {
        p = &p - &Poly::var(*d);
    }
    StateUpdate::set_val(last, RatFun::from_poly(p))
}

/// A symbolic expected-cost term.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Term {
    /// Closed-form guarded cost.
    Cost(CostExpr),
    Add(Box<Term>, Box<Term>),
    /// Classical branch on a guard.
    Cond(Guard, Box<Term>, Box<Term>),
    /// Probabilistic branch: p0 * t0 + p1 * t1.
    Meas(RatFun, Box<Term>, RatFun, Box<Term>),
    /// Unsolved loop bound applied to the recorded state.
    Fun(LoopId, StateUpdate),
}

impl Term {
    pub fn zero() -> Term {
        Term::Cost(CostExpr::zero())
    }

    pub fn cost(c: CostExpr) -> Term {
        Term::Cost(c)
    }

    pub fn fun(id: LoopId) -> Term {
        Term::Fun(id, StateUpdate::identity())
    }

    pub fn add(a: Term, b: Term) -> Term {
        match (a, b) {
            (Term::Cost(x), Term::Cost(y)) => Term::Cost(x.add(&y)),
            (Term::Cost(x), b) if x.is_zero() => b,
            (a, Term::Cost(y)) if y.is_zero() => a,
            (a, b) => Term::Add(Box::new(a), Box::new(b)),
        }
    }

    pub fn cond(g: Guard, a: Term, b: Term) -> Term {
        match g.as_const() {
            Some(true) => a,
            Some(false) => b,
            None => {
                if a == b {
                    a
                } else {
                    Term::Cond(g, Box::new(a), Box::new(b))
                }
            }
        }
    }

    pub fn meas(p0: RatFun, t0: Term, p1: RatFun, t1: Term) -> Term {
        if p0.is_zero() {
            return t1;
        }
        if p1.is_zero() {
            return t0;
        }
        let total = &p0 + &p1;
        if total.as_constant() == Some(QSqrt2::one()) {
            if p0.as_constant() == Some(QSqrt2::one()) {
                return t0;
            }
            if p1.as_constant() == Some(QSqrt2::one()) {
                return t1;
            }
            if t0 == t1 {
                return t0;
            }
        }
        Term::Meas(p0, Box::new(t0), p1, Box::new(t1))
    }

    /// Applies a state update (the effect of prepending a statement).
    pub fn apply(&self, u: &StateUpdate, table: &VarTable) -> Term {
        if u.is_identity() {
            return self.clone();
        }
        match self {
            Term::Cost(c) => Term::Cost(c.subst(&u.vals, &u.bools, table)),
            Term::Add(a, b) => Term::add(a.apply(u, table), b.apply(u, table)),
            Term::Cond(g, a, b) => {
                Term::cond(g.subst(&u.vals, &u.bools, table), a.apply(u, table), b.apply(u, table))
            }
            Term::Meas(p0, t0, p1, t1) => Term::meas(
                p0.subst(&u.vals),
                t0.apply(u, table),
                p1.subst(&u.vals),
                t1.apply(u, table),
            ),
            Term::Fun(id, sigma) => Term::Fun(*id, sigma.compose(u, table)),
        }
    }

    /// Replaces a loop symbol by a solved bound expression. The bound is
    /// instantiated through the state each call site recorded.
    pub fn resolve_fun(&self, id: LoopId, bound: &CostExpr, table: &VarTable) -> Term {
        match self {
            Term::Cost(_) => self.clone(),
            Term::Add(a, b) => Term::add(
                a.resolve_fun(id, bound, table),
                b.resolve_fun(id, bound, table),
            ),
            Term::Cond(g, a, b) => Term::cond(
                g.clone(),
                a.resolve_fun(id, bound, table),
                b.resolve_fun(id, bound, table),
            ),
            Term::Meas(p0, t0, p1, t1) => Term::meas(
                p0.clone(),
                t0.resolve_fun(id, bound, table),
                p1.clone(),
                t1.resolve_fun(id, bound, table),
            ),
            Term::Fun(fid, sigma) => {
                if *fid == id {
                    Term::Cost(bound.subst(&sigma.vals, &sigma.bools, table))
                } else {
                    self.clone()
                }
            }
        }
    }

    /// Loop symbols still present in the term.
    pub fn unresolved(&self) -> Vec<LoopId> {
        let mut out = Vec::new();
        self.collect_unresolved(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_unresolved(&self, out: &mut Vec<LoopId>) {
        match self {
            Term::Cost(_) => {}
            Term::Add(a, b) | Term::Cond(_, a, b) | Term::Meas(_, a, _, b) => {
                a.collect_unresolved(out);
                b.collect_unresolved(out);
            }
            Term::Fun(id, _) => out.push(*id),
        }
    }

    /// Matrix variables appearing in measurement probabilities; the tracked
    /// variable heuristic feeds on these.
    pub fn meas_prob_vars(&self) -> Vec<VarId> {
        let mut out = Vec::new();
        self.collect_meas_vars(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_meas_vars(&self, out: &mut Vec<VarId>) {
        match self {
            Term::Cost(_) | Term::Fun(..) => {}
            Term::Add(a, b) | Term::Cond(_, a, b) => {
                a.collect_meas_vars(out);
                b.collect_meas_vars(out);
            }
            Term::Meas(p0, t0, p1, t1) => {
                out.extend(p0.vars());
                out.extend(p1.vars());
                t0.collect_meas_vars(out);
                t1.collect_meas_vars(out);
            }
        }
    }

    /// Full flattening to a guarded cost expression. Panics on unsolved
    /// loop symbols.
    pub fn flatten(&self, table: &VarTable) -> CostExpr {
        match self {
            Term::Cost(c) => c.clone(),
            Term::Add(a, b) => a.flatten(table).add(&b.flatten(table)),
            Term::Cond(g, a, b) => a
                .flatten(table)
                .guard_with(g)
                .add(&b.flatten(table).guard_with(&g.negate(table))),
            Term::Meas(p0, t0, p1, t1) => {
                t0.flatten(table).scale(p0).add(&t1.flatten(table).scale(p1))
            }
            Term::Fun(id, _) => panic!("cannot flatten unsolved loop bound {}", id),
        }
    }

    pub fn eval_f64(&self, assign: &dyn Fn(VarId) -> f64, bools: &dyn Fn(&str) -> bool) -> f64 {
        match self {
            Term::Cost(c) => c.eval_f64(assign, bools),
            Term::Add(a, b) => a.eval_f64(assign, bools) + b.eval_f64(assign, bools),
            Term::Cond(g, a, b) => {
                if g.eval_f64(assign, bools) {
                    a.eval_f64(assign, bools)
                } else {
                    b.eval_f64(assign, bools)
                }
            }
            Term::Meas(p0, t0, p1, t1) => {
                let mut acc = 0.0;
                for (p, t) in [(p0, t0), (p1, t1)] {
                    let pv = p.eval_f64(assign);
                    if pv > 1e-300 {
                        acc += pv * t.eval_f64(assign, bools);
                    }
                }
                acc
            }
            Term::Fun(id, _) => panic!("cannot evaluate unsolved loop bound {}", id),
        }
    }

    pub fn display<'a>(&'a self, table: &'a VarTable) -> TermDisplay<'a> {
        TermDisplay { term: self, table }
    }
}

pub struct StateUpdateDisplay<'a> {
    update: &'a StateUpdate,
    table: &'a VarTable,
}

impl fmt::Display for StateUpdateDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut sep = |f: &mut fmt::Formatter<'_>| -> fmt::Result {
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            Ok(())
        };
        for (x, g) in &self.update.bools {
            sep(f)?;
            write!(f, "{} := {}", x, g.display(self.table))?;
        }
        for (v, fun) in &self.update.vals {
            sep(f)?;
            write!(f, "{} := {}", self.table.name(*v), fun.display(self.table))?;
        }
        Ok(())
    }
}

pub struct TermDisplay<'a> {
    term: &'a Term,
    table: &'a VarTable,
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_term(self.term, self.table, f, 0)
    }
}

fn fmt_term(t: &Term, table: &VarTable, f: &mut fmt::Formatter<'_>, indent: usize) -> fmt::Result {
    let pad = "  ".repeat(indent);
    match t {
        Term::Cost(c) => write!(f, "{}{}", pad, c.display(table)),
        Term::Add(a, b) => {
            writeln!(f, "{}sum of", pad)?;
            fmt_term(a, table, f, indent + 1)?;
            writeln!(f)?;
            fmt_term(b, table, f, indent + 1)
        }
        Term::Cond(g, a, b) => {
            writeln!(f, "{}if {} then", pad, g.display(table))?;
            fmt_term(a, table, f, indent + 1)?;
            writeln!(f)?;
            writeln!(f, "{}else", pad)?;
            fmt_term(b, table, f, indent + 1)
        }
        Term::Meas(p0, t0, p1, t1) => {
            writeln!(f, "{}measure", pad)?;
            writeln!(f, "{}  with {}:", pad, p0.display(table))?;
            fmt_term(t0, table, f, indent + 2)?;
            writeln!(f)?;
            writeln!(f, "{}  with {}:", pad, p1.display(table))?;
            fmt_term(t1, table, f, indent + 2)
        }
        Term::Fun(id, sigma) => {
            if sigma.is_identity() {
                write!(f, "{}F_{}", pad, id)
            } else {
                write!(f, "{}F_{}[{}]", pad, id, sigma.display(table))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> VarTable {
        VarTable::for_program(&["n".to_string()], 1)
    }

    #[test]
    fn trace_reduction_folds_full_sums() {
        let t = setup();
        let d1 = t.lookup("d1").unwrap();
        let d2 = t.lookup("d2").unwrap();
        let sum = &Poly::var(d1) + &Poly::var(d2);
        let reduced = RatFun::from_poly(sum).subst(&trace_update(&t).vals);
        assert_eq!(reduced, RatFun::one());
    }

    #[test]
    fn cond_simplifies_on_constant_guards() {
        let a = Term::Cost(CostExpr::constant(QSqrt2::from_int(1)));
        let b = Term::Cost(CostExpr::constant(QSqrt2::from_int(2)));
        assert_eq!(Term::cond(Guard::tt(), a.clone(), b.clone()), a);
        assert_eq!(Term::cond(Guard::ff(), a.clone(), b.clone()), b);
        assert_eq!(Term::cond(Guard::var("x"), a.clone(), a.clone()), a);
    }

    #[test]
    fn meas_drops_impossible_and_equal_arms() {
        let t = setup();
        let a = Term::Cost(CostExpr::constant(QSqrt2::from_int(1)));
        let b = Term::Cost(CostExpr::constant(QSqrt2::from_int(2)));
        let half = RatFun::constant(QSqrt2::ratio(1, 2));
        assert_eq!(Term::meas(RatFun::one(), a.clone(), RatFun::zero(), b.clone()), a);
        assert_eq!(
            Term::meas(half.clone(), a.clone(), half.clone(), a.clone()),
            a
        );
        // non-constant probabilities with equal arms still collapse when
        // they sum to one
        let d1 = RatFun::var(t.lookup("d1").unwrap());
        let p0 = d1.clone();
        let p1 = &RatFun::one() - &d1;
        assert_eq!(Term::meas(p0, a.clone(), p1, a.clone()), a);
    }

    #[test]
    fn apply_composes_into_fun_states() {
        let t = setup();
        let n = t.lookup("n").unwrap();
        // start: F_L0 with identity state; prepend n := n + 1 twice
        let term = Term::fun(LoopId(0));
        let bump = StateUpdate::set_val(
            n,
            RatFun::from_poly(&Poly::var(n) + &Poly::one()),
        );
        let term = term.apply(&bump, &t).apply(&bump, &t);
        match term {
            Term::Fun(_, sigma) => {
                let expect = RatFun::from_poly(&Poly::var(n) + &Poly::from_int(2));
                assert_eq!(sigma.vals[&n], expect);
            }
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn flatten_weights_branches() {
        let t = setup();
        let d1 = t.lookup("d1").unwrap();
        let p0 = RatFun::var(d1);
        let p1 = &RatFun::one() - &p0;
        let term = Term::meas(
            p0.clone(),
            Term::Cost(CostExpr::constant(QSqrt2::from_int(4))),
            p1.clone(),
            Term::zero(),
        );
        let flat = term.flatten(&t);
        // 4 * d1
        let assign = |v: VarId| if v == d1 { 0.25 } else { 0.0 };
        assert_eq!(flat.eval_f64(&assign, &|_| false), 1.0);
    }

    #[test]
    fn resolve_fun_instantiates_through_recorded_state() {
        let t = setup();
        let n = t.lookup("n").unwrap();
        let term = Term::fun(LoopId(0)).apply(
            &StateUpdate::set_val(n, RatFun::from_poly(&Poly::var(n) + &Poly::one())),
            &t,
        );
        // bound F(n) = 2n
        let bound = CostExpr::from_poly(Poly::var(n).scale(&QSqrt2::from_int(2)));
        let solved = term.resolve_fun(LoopId(0), &bound, &t);
        match solved {
            Term::Cost(c) => {
                let v = c.eval_f64(&|id| if id == n { 5.0 } else { 0.0 }, &|_| false);
                assert_eq!(v, 12.0); // 2 * (5 + 1)
            }
            other => panic!("{:?}", other),
        }
    }
}
