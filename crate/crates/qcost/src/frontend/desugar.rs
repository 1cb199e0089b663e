use super::ast::{Decl, Expr, Gate, Program, Stmt, Type};
use super::typecheck::TypedProgram;

/// Rewrites ket initializations into measure-and-correct form:
/// `q := |0>` measures q and flips on outcome 1, `q := |+>` additionally
/// applies H. Each rewrite gets a fresh `__i{k}` scratch bool.
pub fn desugar(p: TypedProgram) -> Program {
    let TypedProgram(mut prog) = p;
    let mut fresh = 0u32;
    let mut scratch = Vec::new();
    prog.body = walk(std::mem::take(&mut prog.body), &mut fresh, &mut scratch);
    prog.decls.extend(scratch);
    prog
}

fn walk(stmts: Vec<Stmt>, fresh: &mut u32, scratch: &mut Vec<Decl>) -> Vec<Stmt> {
    let mut out = Vec::new();
    for s in stmts {
        match s {
            Stmt::InitZero(q) => {
                out.extend(reset(&q, fresh, scratch));
            }
            Stmt::InitPlus(q) => {
                out.extend(reset(&q, fresh, scratch));
                out.push(Stmt::Gate(Gate::H, vec![q]));
            }
            Stmt::If(g, a, b) => {
                out.push(Stmt::If(g, walk(a, fresh, scratch), walk(b, fresh, scratch)));
            }
            Stmt::While(id, g, body) => {
                out.push(Stmt::While(id, g, walk(body, fresh, scratch)));
            }
            other => out.push(other),
        }
    }
    out
}

fn reset(q: &str, fresh: &mut u32, scratch: &mut Vec<Decl>) -> Vec<Stmt> {
    let flag = format!("__i{}", *fresh);
    *fresh += 1;
    scratch.push(Decl { name: flag.clone(), ty: Type::Bool });
    vec![
        Stmt::Measure(flag.clone(), q.to_string()),
        Stmt::If(Expr::var(&flag), vec![Stmt::Gate(Gate::X, vec![q.to_string()])], vec![]),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::load_program;

    #[test]
    fn kets_become_measure_and_correct() {
        let p = load_program("var q : qubit;\nq := |0>;\nq := |+>;").unwrap();
        assert_eq!(p.decls.len(), 3);
        assert_eq!(p.decls[1].name, "__i0");
        assert_eq!(p.decls[2].name, "__i1");
        assert_eq!(p.body.len(), 5);
        assert!(matches!(&p.body[0], Stmt::Measure(x, q) if x == "__i0" && q == "q"));
        assert!(matches!(&p.body[1], Stmt::If(Expr::Var(x), t, e)
            if x == "__i0" && t.len() == 1 && e.is_empty()));
        assert!(matches!(&p.body[4], Stmt::Gate(Gate::H, _)));
    }

    #[test]
    fn nested_kets_are_rewritten() {
        let p = load_program(
            "var x : bool; var q : qubit;\nwhile !x { q := |+>; x <- meas(q); }",
        )
        .unwrap();
        match &p.body[0] {
            Stmt::While(_, _, body) => {
                assert_eq!(body.len(), 4);
                assert!(matches!(&body[2], Stmt::Gate(Gate::H, _)));
            }
            other => panic!("{:?}", other),
        }
    }
}
