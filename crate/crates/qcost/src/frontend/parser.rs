use std::collections::BTreeMap;

use super::ast::{CmpOp, Expr, LoopId, Type};
use super::lexer::{lex, Tok, Token};
use super::FrontendError;

const MACRO_DEPTH_LIMIT: u32 = 64;

/// Parse output: statements still carry source lines and unresolved gate
/// names. The typechecker strips both.
#[derive(Clone, Debug)]
pub struct ParsedProgram {
    pub decls: Vec<LDecl>,
    pub body: Vec<LStmt>,
}

#[derive(Clone, Debug)]
pub struct LDecl {
    pub name: String,
    pub ty: Type,
    pub line: u32,
}

#[derive(Clone, Debug)]
pub struct LStmt {
    pub line: u32,
    pub kind: LStmtKind,
}

#[derive(Clone, Debug)]
pub enum LStmtKind {
    Skip,
    Assign(String, Expr),
    Measure(String, String),
    Gate(String, Vec<String>),
    Consume(Expr),
    InitZero(String),
    InitPlus(String),
    If(Expr, Vec<LStmt>, Vec<LStmt>),
    While(LoopId, Expr, Vec<LStmt>),
}

pub fn parse(src: &str) -> Result<ParsedProgram, FrontendError> {
    let raw = lex(src)?;
    let mut macros = BTreeMap::new();
    let mut expanded = Vec::new();
    expand(&raw, &mut macros, 0, &mut expanded)?;
    let mut p = P { toks: &expanded, i: 0, next_loop: 0 };
    p.program()
}

#[derive(Clone)]
struct MacroDef {
    params: Vec<String>,
    body: Vec<Token>,
}

/// Splices `def` macros at token level. Definitions register as they are
/// encountered, so a macro only resolves after its definition; bodies are
/// re-expanded at each use, with a depth guard against self-reference.
fn expand(
    toks: &[Token],
    macros: &mut BTreeMap<String, MacroDef>,
    depth: u32,
    out: &mut Vec<Token>,
) -> Result<(), FrontendError> {
    if depth > MACRO_DEPTH_LIMIT {
        return Err(FrontendError::MacroDepth);
    }
    let perr = |t: &Token, msg: String| FrontendError::Parse { line: t.line, col: t.col, msg };
    let mut i = 0;
    while i < toks.len() {
        match &toks[i].tok {
            Tok::Def => {
                let def_tok = &toks[i];
                i += 1;
                let name = match toks.get(i).map(|t| &t.tok) {
                    Some(Tok::Ident(n)) => n.clone(),
                    _ => return Err(perr(def_tok, "expected macro name after `def`".into())),
                };
                i += 1;
                match toks.get(i).map(|t| &t.tok) {
                    Some(Tok::LParen) => i += 1,
                    _ => return Err(perr(def_tok, format!("expected `(` after `def {}`", name))),
                }
                let mut params = Vec::new();
                loop {
                    match toks.get(i).map(|t| &t.tok) {
                        Some(Tok::RParen) if params.is_empty() => {
                            i += 1;
                            break;
                        }
                        Some(Tok::Ident(p)) => {
                            params.push(p.clone());
                            i += 1;
                            match toks.get(i).map(|t| &t.tok) {
                                Some(Tok::Comma) => i += 1,
                                Some(Tok::RParen) => {
                                    i += 1;
                                    break;
                                }
                                _ => {
                                    return Err(perr(
                                        def_tok,
                                        "expected `,` or `)` in macro parameter list".into(),
                                    ))
                                }
                            }
                        }
                        _ => return Err(perr(def_tok, "expected macro parameter name".into())),
                    }
                }
                match toks.get(i).map(|t| &t.tok) {
                    Some(Tok::LBrace) => i += 1,
                    _ => return Err(perr(def_tok, "expected `{` to open macro body".into())),
                }
                let start = i;
                let mut braces = 1u32;
                while braces > 0 {
                    match toks.get(i).map(|t| &t.tok) {
                        Some(Tok::LBrace) => braces += 1,
                        Some(Tok::RBrace) => braces -= 1,
                        Some(_) => {}
                        None => return Err(perr(def_tok, "unclosed macro body".into())),
                    }
                    i += 1;
                }
                let body = toks[start..i - 1].to_vec();
                macros.insert(name, MacroDef { params, body });
            }
            Tok::Ident(name)
                if macros.contains_key(name)
                    && matches!(toks.get(i + 1).map(|t| &t.tok), Some(Tok::LParen)) =>
            {
                let call_tok = &toks[i];
                let (args, after) = collect_args(toks, i + 1, call_tok)?;
                i = after;
                match toks.get(i).map(|t| &t.tok) {
                    Some(Tok::Semi) => i += 1,
                    _ => {
                        return Err(perr(call_tok, format!("expected `;` after `{}(...)`", name)))
                    }
                }
                let def = macros.get(name).unwrap().clone();
                if args.len() != def.params.len() {
                    return Err(FrontendError::MacroArity {
                        line: call_tok.line,
                        name: name.clone(),
                        expect: def.params.len(),
                        got: args.len(),
                    });
                }
                let mut spliced = Vec::new();
                for t in &def.body {
                    match &t.tok {
                        Tok::Ident(id) => {
                            if let Some(k) = def.params.iter().position(|p| p == id) {
                                spliced.extend(args[k].iter().cloned());
                            } else {
                                spliced.push(t.clone());
                            }
                        }
                        _ => spliced.push(t.clone()),
                    }
                }
                expand(&spliced, macros, depth + 1, out)?;
            }
            _ => {
                out.push(toks[i].clone());
                i += 1;
            }
        }
    }
    Ok(())
}

/// Collects `( a1 , a2 , ... )` as raw token runs, splitting only on
/// top-level commas. Returns the argument lists and the index past `)`.
fn collect_args(
    toks: &[Token],
    open: usize,
    call_tok: &Token,
) -> Result<(Vec<Vec<Token>>, usize), FrontendError> {
    let perr = |msg: String| FrontendError::Parse {
        line: call_tok.line,
        col: call_tok.col,
        msg,
    };
    let mut args = Vec::new();
    let mut cur = Vec::new();
    let mut depth = 0u32;
    let mut i = open + 1;
    loop {
        let t = toks.get(i).ok_or_else(|| perr("unclosed macro argument list".into()))?;
        match &t.tok {
            Tok::LParen | Tok::LBracket | Tok::LBrace => {
                depth += 1;
                cur.push(t.clone());
            }
            Tok::RParen if depth == 0 => {
                if !cur.is_empty() {
                    args.push(std::mem::take(&mut cur));
                } else if !args.is_empty() {
                    return Err(perr("empty macro argument".into()));
                }
                return Ok((args, i + 1));
            }
            Tok::RParen | Tok::RBracket | Tok::RBrace => {
                depth -= 1;
                cur.push(t.clone());
            }
            Tok::Comma if depth == 0 => {
                if cur.is_empty() {
                    return Err(perr("empty macro argument".into()));
                }
                args.push(std::mem::take(&mut cur));
            }
            _ => cur.push(t.clone()),
        }
        i += 1;
    }
}

struct P<'a> {
    toks: &'a [Token],
    i: usize,
    next_loop: u32,
}

impl<'a> P<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|t| &t.tok)
    }

    fn pos(&self) -> (u32, u32) {
        match self.toks.get(self.i).or_else(|| self.toks.last()) {
            Some(t) => (t.line, t.col),
            None => (1, 1),
        }
    }

    fn err(&self, msg: String) -> FrontendError {
        let (line, col) = self.pos();
        FrontendError::Parse { line, col, msg }
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.toks.get(self.i).cloned();
        if t.is_some() {
            self.i += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok, what: &str) -> Result<(), FrontendError> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.err(format!("expected {}", what)))
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, u32), FrontendError> {
        match self.toks.get(self.i) {
            Some(Token { tok: Tok::Ident(n), line, .. }) => {
                let r = (n.clone(), *line);
                self.i += 1;
                Ok(r)
            }
            _ => Err(self.err(format!("expected {}", what))),
        }
    }

    fn program(&mut self) -> Result<ParsedProgram, FrontendError> {
        let mut decls = Vec::new();
        while self.peek() == Some(&Tok::Var) {
            decls.push(self.decl()?);
        }
        let mut body = Vec::new();
        while self.peek().is_some() {
            body.push(self.stmt()?);
        }
        Ok(ParsedProgram { decls, body })
    }

    fn decl(&mut self) -> Result<LDecl, FrontendError> {
        self.expect(&Tok::Var, "`var`")?;
        let (name, line) = self.ident("a variable name")?;
        self.expect(&Tok::Colon, "`:` in declaration")?;
        let ty = match self.bump().map(|t| t.tok) {
            Some(Tok::Bool) => Type::Bool,
            Some(Tok::IntTy) => Type::Int,
            Some(Tok::Qubit) => {
                if self.peek() == Some(&Tok::LBracket) {
                    return Err(FrontendError::ParamRegister { line });
                }
                Type::Qubit
            }
            _ => return Err(self.err("expected a type: `bool`, `int`, or `qubit`".into())),
        };
        self.expect(&Tok::Semi, "`;` after declaration")?;
        Ok(LDecl { name, ty, line })
    }

    fn block(&mut self) -> Result<Vec<LStmt>, FrontendError> {
        self.expect(&Tok::LBrace, "`{`")?;
        let mut out = Vec::new();
        while self.peek() != Some(&Tok::RBrace) {
            if self.peek().is_none() {
                return Err(self.err("unclosed block".into()));
            }
            out.push(self.stmt()?);
        }
        self.i += 1;
        Ok(out)
    }

    fn stmt(&mut self) -> Result<LStmt, FrontendError> {
        let (line, _) = self.pos();
        let kind = match self.peek() {
            Some(Tok::Skip) => {
                self.i += 1;
                self.expect(&Tok::Semi, "`;` after `skip`")?;
                LStmtKind::Skip
            }
            Some(Tok::Consume) => {
                self.i += 1;
                self.expect(&Tok::LParen, "`(` after `consume`")?;
                let e = self.expr()?;
                self.expect(&Tok::RParen, "`)`")?;
                self.expect(&Tok::Semi, "`;` after `consume(..)`")?;
                LStmtKind::Consume(e)
            }
            Some(Tok::If) => {
                self.i += 1;
                let guard = self.expr()?;
                let then = self.block()?;
                let els = if self.eat(&Tok::Else) { self.block()? } else { Vec::new() };
                LStmtKind::If(guard, then, els)
            }
            Some(Tok::While) => {
                self.i += 1;
                let id = LoopId(self.next_loop);
                self.next_loop += 1;
                let guard = self.expr()?;
                let body = self.block()?;
                LStmtKind::While(id, guard, body)
            }
            Some(Tok::Ident(_)) => {
                let (name, _) = self.ident("a name")?;
                match self.peek() {
                    Some(Tok::Assign) => {
                        self.i += 1;
                        let kind = match self.peek() {
                            Some(Tok::Ket0) => {
                                self.i += 1;
                                LStmtKind::InitZero(name)
                            }
                            Some(Tok::KetPlus) => {
                                self.i += 1;
                                LStmtKind::InitPlus(name)
                            }
                            _ => LStmtKind::Assign(name, self.expr()?),
                        };
                        self.expect(&Tok::Semi, "`;` after assignment")?;
                        kind
                    }
                    Some(Tok::FromMeas) => {
                        self.i += 1;
                        self.expect(&Tok::Meas, "`meas`")?;
                        self.expect(&Tok::LParen, "`(` after `meas`")?;
                        let (q, _) = self.ident("a qubit name")?;
                        self.expect(&Tok::RParen, "`)`")?;
                        self.expect(&Tok::Semi, "`;` after measurement")?;
                        LStmtKind::Measure(name, q)
                    }
                    Some(Tok::Comma) | Some(Tok::GateApply) => {
                        let mut ops = vec![name];
                        while self.eat(&Tok::Comma) {
                            ops.push(self.ident("a qubit name")?.0);
                        }
                        self.expect(&Tok::GateApply, "`*=`")?;
                        let (gate, _) = self.ident("a gate name")?;
                        self.expect(&Tok::Semi, "`;` after gate application")?;
                        LStmtKind::Gate(gate, ops)
                    }
                    Some(Tok::LParen) => {
                        return Err(self.err(format!(
                            "unknown macro `{}` (macros must be defined before use)",
                            name
                        )))
                    }
                    _ => {
                        return Err(self.err(format!(
                            "expected `:=`, `<-`, or `*=` after `{}`",
                            name
                        )))
                    }
                }
            }
            _ => return Err(self.err("expected a statement".into())),
        };
        Ok(LStmt { line, kind })
    }

    fn expr(&mut self) -> Result<Expr, FrontendError> {
        self.or_expr()
    }

    fn or_expr(&mut self) -> Result<Expr, FrontendError> {
        let mut e = self.and_expr()?;
        while self.eat(&Tok::OrOr) {
            e = Expr::Or(Box::new(e), Box::new(self.and_expr()?));
        }
        Ok(e)
    }

    fn and_expr(&mut self) -> Result<Expr, FrontendError> {
        let mut e = self.not_expr()?;
        while self.eat(&Tok::AndAnd) {
            e = Expr::And(Box::new(e), Box::new(self.not_expr()?));
        }
        Ok(e)
    }

    fn not_expr(&mut self) -> Result<Expr, FrontendError> {
        if self.eat(&Tok::Not) {
            Ok(Expr::not(self.not_expr()?))
        } else {
            self.cmp_expr()
        }
    }

    fn cmp_expr(&mut self) -> Result<Expr, FrontendError> {
        let lhs = self.add_expr()?;
        let op = match self.peek() {
            Some(Tok::Eq) => CmpOp::Eq,
            Some(Tok::Ne) => CmpOp::Ne,
            Some(Tok::Lt) => CmpOp::Lt,
            Some(Tok::Le) => CmpOp::Le,
            Some(Tok::Gt) => CmpOp::Gt,
            Some(Tok::Ge) => CmpOp::Ge,
            _ => return Ok(lhs),
        };
        self.i += 1;
        let rhs = self.add_expr()?;
        Ok(Expr::Cmp(op, Box::new(lhs), Box::new(rhs)))
    }

    fn add_expr(&mut self) -> Result<Expr, FrontendError> {
        let mut e = self.mul_expr()?;
        loop {
            if self.eat(&Tok::Plus) {
                e = Expr::Add(Box::new(e), Box::new(self.mul_expr()?));
            } else if self.eat(&Tok::Minus) {
                e = Expr::Sub(Box::new(e), Box::new(self.mul_expr()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn mul_expr(&mut self) -> Result<Expr, FrontendError> {
        let mut e = self.unary_expr()?;
        while self.eat(&Tok::Star) {
            e = Expr::Mul(Box::new(e), Box::new(self.unary_expr()?));
        }
        Ok(e)
    }

    fn unary_expr(&mut self) -> Result<Expr, FrontendError> {
        if self.eat(&Tok::Minus) {
            return Ok(Expr::Neg(Box::new(self.unary_expr()?)));
        }
        match self.bump() {
            Some(Token { tok: Tok::Int(n), .. }) => Ok(Expr::Int(n)),
            Some(Token { tok: Tok::True, .. }) => Ok(Expr::Bool(true)),
            Some(Token { tok: Tok::False, .. }) => Ok(Expr::Bool(false)),
            Some(Token { tok: Tok::Ident(n), .. }) => Ok(Expr::Var(n)),
            Some(Token { tok: Tok::LParen, .. }) => {
                let e = self.expr()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(e)
            }
            _ => {
                self.i = self.i.saturating_sub(1);
                Err(self.err("expected an expression".into()))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn body(src: &str) -> Vec<LStmt> {
        parse(src).unwrap().body
    }

    #[test]
    fn statements_parse() {
        let p = parse(
            "var x : bool; var q : qubit;\n\
             q := |0>;\n\
             x <- meas(q);\n\
             while !x { consume(1); q *= H; x <- meas(q); }",
        )
        .unwrap();
        assert_eq!(p.decls.len(), 2);
        assert_eq!(p.body.len(), 3);
        match &p.body[2].kind {
            LStmtKind::While(id, guard, inner) => {
                assert_eq!(*id, LoopId(0));
                assert_eq!(*guard, Expr::not(Expr::var("x")));
                assert_eq!(inner.len(), 3);
            }
            other => panic!("expected while, got {:?}", other),
        }
    }

    #[test]
    fn loop_ids_follow_source_order() {
        let b = body("while true { while true { skip; } } while true { skip; }");
        let mut ids = Vec::new();
        fn walk(stmts: &[LStmt], ids: &mut Vec<u32>) {
            for s in stmts {
                if let LStmtKind::While(id, _, inner) = &s.kind {
                    ids.push(id.0);
                    walk(inner, ids);
                }
            }
        }
        walk(&b, &mut ids);
        assert_eq!(ids, vec![0, 1, 2]);
    }

    #[test]
    fn precedence() {
        let b = body("x := a || b && !c; y := 1 + 2 * 3 - 4; z := a + 1 < b * 2;");
        match &b[0].kind {
            LStmtKind::Assign(_, Expr::Or(l, r)) => {
                assert_eq!(**l, Expr::var("a"));
                assert_eq!(
                    **r,
                    Expr::And(Box::new(Expr::var("b")), Box::new(Expr::not(Expr::var("c"))))
                );
            }
            other => panic!("{:?}", other),
        }
        match &b[1].kind {
            LStmtKind::Assign(_, Expr::Sub(l, _)) => {
                assert_eq!(
                    **l,
                    Expr::Add(
                        Box::new(Expr::Int(1)),
                        Box::new(Expr::Mul(Box::new(Expr::Int(2)), Box::new(Expr::Int(3))))
                    )
                );
            }
            other => panic!("{:?}", other),
        }
        assert!(matches!(&b[2].kind, LStmtKind::Assign(_, Expr::Cmp(CmpOp::Lt, _, _))));
    }

    #[test]
    fn macros_splice_arguments() {
        let b = body(
            "def reset(q, flag) { flag <- meas(q); if flag { q *= X; } }\n\
             reset(a, fa);\n\
             reset(b, fb);",
        );
        assert_eq!(b.len(), 4);
        assert!(matches!(&b[0].kind, LStmtKind::Measure(x, q) if x == "fa" && q == "a"));
        assert!(matches!(&b[2].kind, LStmtKind::Measure(x, q) if x == "fb" && q == "b"));
    }

    #[test]
    fn macro_can_use_earlier_macro() {
        let b = body(
            "def one() { consume(1); }\n\
             def two() { one(); one(); }\n\
             two();",
        );
        assert_eq!(b.len(), 2);
        assert!(matches!(&b[0].kind, LStmtKind::Consume(Expr::Int(1))));
    }

    #[test]
    fn recursive_macro_hits_depth_limit() {
        let r = parse("def f() { f(); } f();");
        assert_eq!(r.unwrap_err(), FrontendError::MacroDepth);
    }

    #[test]
    fn macro_arity_mismatch() {
        let r = parse("def g(a) { a := 1; } g(x, y);");
        assert!(matches!(r, Err(FrontendError::MacroArity { expect: 1, got: 2, .. })));
    }

    #[test]
    fn qubit_register_is_rejected() {
        let r = parse("var qs : qubit[4];");
        assert!(matches!(r, Err(FrontendError::ParamRegister { line: 1 })));
    }

    #[test]
    fn undefined_macro_reported() {
        let r = parse("setup(q);");
        match r {
            Err(FrontendError::Parse { msg, .. }) => assert!(msg.contains("unknown macro")),
            other => panic!("{:?}", other),
        }
    }
}
