//! Reference interpreter over concrete density matrices. Runs a program as
//! a frontier of weighted configurations, splitting at measurements, and
//! reports the truncated expected cost together with the probability mass
//! it had to drop. The counted cost is a lower bound on the true expected
//! cost whenever consumed amounts are nonnegative.

mod num;

pub use num::NumDensity;

use std::collections::BTreeMap;
use std::rc::Rc;

use crate::frontend::{CmpOp, Expr, Program, Stmt, Type};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CVal {
    B(bool),
    I(i64),
}

impl CVal {
    pub fn as_bool(self) -> bool {
        match self {
            CVal::B(b) => b,
            CVal::I(_) => panic!("expected a bool value"),
        }
    }

    pub fn as_int(self) -> i64 {
        match self {
            CVal::I(n) => n,
            CVal::B(_) => panic!("expected an int value"),
        }
    }
}

pub type Env = BTreeMap<String, CVal>;

/// Default start: bools false, ints 0.
pub fn initial_env(p: &Program) -> Env {
    p.decls
        .iter()
        .filter_map(|d| match d.ty {
            Type::Bool => Some((d.name.clone(), CVal::B(false))),
            Type::Int => Some((d.name.clone(), CVal::I(0))),
            Type::Qubit => None,
        })
        .collect()
}

pub fn eval_expr(e: &Expr, env: &Env) -> CVal {
    match e {
        Expr::Bool(b) => CVal::B(*b),
        Expr::Int(n) => CVal::I(*n),
        Expr::Var(x) => *env.get(x).unwrap_or_else(|| panic!("`{}` unbound", x)),
        Expr::Not(a) => CVal::B(!eval_expr(a, env).as_bool()),
        Expr::And(a, b) => CVal::B(eval_expr(a, env).as_bool() && eval_expr(b, env).as_bool()),
        Expr::Or(a, b) => CVal::B(eval_expr(a, env).as_bool() || eval_expr(b, env).as_bool()),
        Expr::Cmp(op, a, b) => {
            let (x, y) = (eval_expr(a, env).as_int(), eval_expr(b, env).as_int());
            CVal::B(match op {
                CmpOp::Eq => x == y,
                CmpOp::Ne => x != y,
                CmpOp::Lt => x < y,
                CmpOp::Le => x <= y,
                CmpOp::Gt => x > y,
                CmpOp::Ge => x >= y,
            })
        }
        Expr::Add(a, b) => CVal::I(eval_expr(a, env).as_int() + eval_expr(b, env).as_int()),
        Expr::Sub(a, b) => CVal::I(eval_expr(a, env).as_int() - eval_expr(b, env).as_int()),
        Expr::Mul(a, b) => CVal::I(eval_expr(a, env).as_int() * eval_expr(b, env).as_int()),
        Expr::Neg(a) => CVal::I(-eval_expr(a, env).as_int()),
    }
}

#[derive(Clone, Copy, Debug)]
pub struct RunOpts {
    /// Per-configuration cap on loop-head visits, summed over all loops.
    pub depth: u32,
    /// Branches whose absolute probability mass falls below this are
    /// dropped into the residual.
    pub mass_cutoff: f64,
}

impl Default for RunOpts {
    fn default() -> Self {
        RunOpts { depth: 256, mass_cutoff: 1e-12 }
    }
}

/// A terminated execution branch.
pub struct Outcome {
    pub prob: f64,
    pub env: Env,
    pub rho: NumDensity,
}

pub struct RunResult {
    /// Expected cost counted on executed statements (truncated from below).
    pub cost: f64,
    pub outcomes: Vec<Outcome>,
    /// Probability mass of dropped branches (depth cap or mass cutoff).
    pub residual: f64,
}

#[derive(Clone)]
struct Frame {
    block: Rc<Vec<Stmt>>,
    i: usize,
}

#[derive(Clone)]
struct Config {
    prob: f64,
    env: Env,
    rho: NumDensity,
    stack: Vec<Frame>,
    visits: u32,
}

impl Config {
    fn advance(&mut self) {
        if let Some(f) = self.stack.last_mut() {
            f.i += 1;
        }
    }
}

pub fn run(p: &Program, rho0: NumDensity, env0: Env, opts: &RunOpts) -> RunResult {
    assert_eq!(rho0.n_qubits(), p.qubits().len(), "state size must match the program");
    let mut work = vec![Config {
        prob: 1.0,
        env: env0,
        rho: rho0,
        stack: vec![Frame { block: Rc::new(p.body.clone()), i: 0 }],
        visits: 0,
    }];
    let mut cost = 0.0;
    let mut residual = 0.0;
    let mut outcomes = Vec::new();

    while let Some(mut cfg) = work.pop() {
        'exec: loop {
            let stmt = loop {
                match cfg.stack.last() {
                    None => {
                        outcomes.push(Outcome { prob: cfg.prob, env: cfg.env, rho: cfg.rho });
                        break 'exec;
                    }
                    Some(f) if f.i == f.block.len() => {
                        cfg.stack.pop();
                    }
                    Some(f) => break f.block[f.i].clone(),
                }
            };
            match &stmt {
                Stmt::Skip => cfg.advance(),
                Stmt::Assign(x, e) => {
                    let v = eval_expr(e, &cfg.env);
                    cfg.env.insert(x.clone(), v);
                    cfg.advance();
                }
                Stmt::Consume(e) => {
                    cost += cfg.prob * eval_expr(e, &cfg.env).as_int() as f64;
                    cfg.advance();
                }
                Stmt::Gate(g, ops) => {
                    let qs: Vec<u32> =
                        ops.iter().map(|q| p.qubit_index(q).expect("declared qubit")).collect();
                    cfg.rho.apply_gate(*g, &qs);
                    cfg.advance();
                }
                Stmt::Measure(x, q) => {
                    cfg.advance();
                    let qi = p.qubit_index(q).expect("declared qubit");
                    let (p0, arm0, p1, arm1) = cfg.rho.measure(qi);
                    let m0 = cfg.prob * p0;
                    let m1 = cfg.prob * p1;
                    if m1 >= opts.mass_cutoff && m1 > 0.0 {
                        let mut c1 = cfg.clone();
                        c1.prob = m1;
                        c1.rho = arm1;
                        c1.env.insert(x.clone(), CVal::B(true));
                        work.push(c1);
                    } else {
                        residual += m1;
                    }
                    if m0 >= opts.mass_cutoff && m0 > 0.0 {
                        cfg.prob = m0;
                        cfg.rho = arm0;
                        cfg.env.insert(x.clone(), CVal::B(false));
                        work.push(cfg);
                    } else {
                        residual += m0;
                    }
                    break 'exec;
                }
                Stmt::If(g, a, b) => {
                    cfg.advance();
                    let taken = if eval_expr(g, &cfg.env).as_bool() { a } else { b };
                    if !taken.is_empty() {
                        cfg.stack.push(Frame { block: Rc::new(taken.clone()), i: 0 });
                    }
                }
                Stmt::While(_, g, body) => {
                    cfg.visits += 1;
                    if cfg.visits > opts.depth {
                        residual += cfg.prob;
                        break 'exec;
                    }
                    if eval_expr(g, &cfg.env).as_bool() {
                        cfg.stack.push(Frame { block: Rc::new(body.clone()), i: 0 });
                    } else {
                        cfg.advance();
                    }
                }
                Stmt::InitZero(_) | Stmt::InitPlus(_) => {
                    unreachable!("ket initializations are removed by desugaring")
                }
            }
        }
    }
    RunResult { cost, outcomes, residual }
}

/// Truncated expected cost from the default initial classical environment.
pub fn expected_cost(p: &Program, rho0: NumDensity, opts: &RunOpts) -> (f64, f64) {
    let r = run(p, rho0, initial_env(p), opts);
    (r.cost, r.residual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::load_program;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() < tol
    }

    #[test]
    fn deterministic_cost_adds_up() {
        let p = load_program("var x : int;\nconsume(3);\nx := 2;\nconsume(x + 1);").unwrap();
        let (cost, residual) = expected_cost(&p, NumDensity::zeros_state(0), &RunOpts::default());
        assert_eq!(cost, 6.0);
        assert_eq!(residual, 0.0);
    }

    #[test]
    fn fair_coin_weights_branches() {
        let p = load_program(
            "var x : bool; var q : qubit;\nq *= H;\nx <- meas(q);\nif x { consume(2); }",
        )
        .unwrap();
        let (cost, residual) = expected_cost(&p, NumDensity::zeros_state(1), &RunOpts::default());
        assert!(close(cost, 1.0, 1e-12));
        assert_eq!(residual, 0.0);
    }

    #[test]
    fn geometric_loop_costs_two() {
        let p = load_program(
            "var x : bool; var q : qubit;\n\
             while !x { consume(1); q *= H; x <- meas(q); }",
        )
        .unwrap();
        let (cost, residual) = expected_cost(&p, NumDensity::zeros_state(1), &RunOpts::default());
        assert!(residual < 1e-9, "residual {}", residual);
        assert!(close(cost, 2.0, 1e-9), "cost {}", cost);
    }

    #[test]
    fn outcome_mass_and_residual_account_for_everything() {
        let p = load_program(
            "var x : bool; var q : qubit;\n\
             while !x { consume(1); q *= H; x <- meas(q); }",
        )
        .unwrap();
        let r = run(&p, NumDensity::zeros_state(1), initial_env(&p), &RunOpts::default());
        let total: f64 = r.outcomes.iter().map(|o| o.prob).sum::<f64>() + r.residual;
        assert!(close(total, 1.0, 1e-12));
        // every surviving branch ends with x = true
        for o in &r.outcomes {
            assert_eq!(o.env["x"], CVal::B(true));
        }
    }

    #[test]
    fn depth_cap_moves_mass_to_residual() {
        let p = load_program("var x : bool;\nwhile !x { consume(1); }").unwrap();
        let opts = RunOpts { depth: 10, mass_cutoff: 0.0 };
        let (cost, residual) = expected_cost(&p, NumDensity::zeros_state(0), &opts);
        assert_eq!(cost, 10.0);
        assert_eq!(residual, 1.0);
    }

    #[test]
    fn measurement_collapses_state_for_later_use() {
        // measure, then measure again: same outcome both times
        let p = load_program(
            "var x : bool; var y : bool; var q : qubit;\n\
             q *= H;\nx <- meas(q);\ny <- meas(q);\nif x { if y { consume(1); } } \
             if !x { if !y { consume(1); } }",
        )
        .unwrap();
        let r = run(&p, NumDensity::zeros_state(1), initial_env(&p), &RunOpts::default());
        // outcomes always agree, so the program always consumes exactly 1
        assert!(close(r.cost, 1.0, 1e-12));
        for o in &r.outcomes {
            assert_eq!(o.env["x"], o.env["y"]);
        }
    }
}
