use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Type {
    Bool,
    Int,
    Qubit,
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Bool => write!(f, "bool"),
            Type::Int => write!(f, "int"),
            Type::Qubit => write!(f, "qubit"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Decl {
    pub name: String,
    pub ty: Type,
}

/// Unitary gate set: Clifford+T, entries exact over Q(sqrt2, i).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Gate {
    X,
    Y,
    Z,
    H,
    S,
    Sdg,
    T,
    Tdg,
    Cnot,
    Cz,
    Ccnot,
}

impl Gate {
    pub fn arity(self) -> usize {
        match self {
            Gate::Cnot | Gate::Cz => 2,
            Gate::Ccnot => 3,
            _ => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Gate::X => "X",
            Gate::Y => "Y",
            Gate::Z => "Z",
            Gate::H => "H",
            Gate::S => "S",
            Gate::Sdg => "Sdg",
            Gate::T => "T",
            Gate::Tdg => "Tdg",
            Gate::Cnot => "CNOT",
            Gate::Cz => "CZ",
            Gate::Ccnot => "CCNOT",
        }
    }

    pub fn from_name(name: &str) -> Option<Gate> {
        Some(match name {
            "X" => Gate::X,
            "Y" => Gate::Y,
            "Z" => Gate::Z,
            "H" => Gate::H,
            "S" => Gate::S,
            "Sdg" => Gate::Sdg,
            "T" => Gate::T,
            "Tdg" => Gate::Tdg,
            "CNOT" => Gate::Cnot,
            "CZ" => Gate::Cz,
            "CCNOT" => Gate::Ccnot,
            _ => return None,
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn text(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }
}

/// Classical expressions (Boolean and integer in one tree; the typechecker
/// separates them).
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Expr {
    Bool(bool),
    Int(i64),
    Var(String),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Cmp(CmpOp, Box<Expr>, Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
}

impl Expr {
    pub fn var(name: &str) -> Expr {
        Expr::Var(name.to_string())
    }

    pub fn not(e: Expr) -> Expr {
        Expr::Not(Box::new(e))
    }

    /// Free variables, in first-occurrence order.
    pub fn vars(&self, out: &mut Vec<String>) {
        match self {
            Expr::Bool(_) | Expr::Int(_) => {}
            Expr::Var(n) => {
                if !out.contains(n) {
                    out.push(n.clone());
                }
            }
            Expr::Not(e) | Expr::Neg(e) => e.vars(out),
            Expr::And(a, b)
            | Expr::Or(a, b)
            | Expr::Cmp(_, a, b)
            | Expr::Add(a, b)
            | Expr::Sub(a, b)
            | Expr::Mul(a, b) => {
                a.vars(out);
                b.vars(out);
            }
        }
    }

    /// Substitutes an expression for a variable.
    pub fn subst(&self, name: &str, value: &Expr) -> Expr {
        match self {
            Expr::Var(n) if n == name => value.clone(),
            Expr::Bool(_) | Expr::Int(_) | Expr::Var(_) => self.clone(),
            Expr::Not(e) => Expr::Not(Box::new(e.subst(name, value))),
            Expr::Neg(e) => Expr::Neg(Box::new(e.subst(name, value))),
            Expr::And(a, b) => {
                Expr::And(Box::new(a.subst(name, value)), Box::new(b.subst(name, value)))
            }
            Expr::Or(a, b) => {
                Expr::Or(Box::new(a.subst(name, value)), Box::new(b.subst(name, value)))
            }
            Expr::Cmp(op, a, b) => Expr::Cmp(
                *op,
                Box::new(a.subst(name, value)),
                Box::new(b.subst(name, value)),
            ),
            Expr::Add(a, b) => {
                Expr::Add(Box::new(a.subst(name, value)), Box::new(b.subst(name, value)))
            }
            Expr::Sub(a, b) => {
                Expr::Sub(Box::new(a.subst(name, value)), Box::new(b.subst(name, value)))
            }
            Expr::Mul(a, b) => {
                Expr::Mul(Box::new(a.subst(name, value)), Box::new(b.subst(name, value)))
            }
        }
    }
}

/// Stable label for a while loop, assigned in parse order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct LoopId(pub u32);

impl fmt::Display for LoopId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L{}", self.0)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Stmt {
    Skip,
    Assign(String, Expr),
    /// x <- meas(q)
    Measure(String, String),
    /// qs *= G
    Gate(Gate, Vec<String>),
    Consume(Expr),
    /// q := |0>; removed by desugaring
    InitZero(String),
    /// q := |+>; removed by desugaring
    InitPlus(String),
    If(Expr, Vec<Stmt>, Vec<Stmt>),
    While(LoopId, Expr, Vec<Stmt>),
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Program {
    pub decls: Vec<Decl>,
    pub body: Vec<Stmt>,
}

impl Program {
    pub fn qubits(&self) -> Vec<&str> {
        self.decls
            .iter()
            .filter(|d| d.ty == Type::Qubit)
            .map(|d| d.name.as_str())
            .collect()
    }

    /// 1-based qubit index in declaration order; the first declared qubit is
    /// the most significant position of the basis index.
    pub fn qubit_index(&self, name: &str) -> Option<u32> {
        self.qubits().iter().position(|q| *q == name).map(|i| i as u32 + 1)
    }

    pub fn decl_type(&self, name: &str) -> Option<Type> {
        self.decls.iter().find(|d| d.name == name).map(|d| d.ty)
    }

    pub fn int_vars(&self) -> Vec<String> {
        self.decls
            .iter()
            .filter(|d| d.ty == Type::Int)
            .map(|d| d.name.clone())
            .collect()
    }

    /// Inserts `consume(1)` before every application of `gate`.
    pub fn instrument_gate(&mut self, gate: Gate) {
        fn walk(stmts: &mut Vec<Stmt>, gate: Gate) {
            let mut i = 0;
            while i < stmts.len() {
                match &mut stmts[i] {
                    Stmt::Gate(g, _) if *g == gate => {
                        stmts.insert(i, Stmt::Consume(Expr::Int(1)));
                        i += 2;
                    }
                    Stmt::If(_, a, b) => {
                        walk(a, gate);
                        walk(b, gate);
                        i += 1;
                    }
                    Stmt::While(_, _, body) => {
                        walk(body, gate);
                        i += 1;
                    }
                    _ => i += 1,
                }
            }
        }
        walk(&mut self.body, gate);
    }

    /// Inserts `consume(1)` at the head of every loop body.
    pub fn instrument_iterations(&mut self) {
        fn walk(stmts: &mut Vec<Stmt>) {
            for s in stmts {
                match s {
                    Stmt::If(_, a, b) => {
                        walk(a);
                        walk(b);
                    }
                    Stmt::While(_, _, body) => {
                        walk(body);
                        body.insert(0, Stmt::Consume(Expr::Int(1)));
                    }
                    _ => {}
                }
            }
        }
        walk(&mut self.body);
    }
}

impl Expr {
    fn prec(&self) -> u8 {
        match self {
            Expr::Or(..) => 1,
            Expr::And(..) => 2,
            Expr::Not(..) => 3,
            Expr::Cmp(..) => 4,
            Expr::Add(..) | Expr::Sub(..) => 5,
            Expr::Mul(..) => 6,
            Expr::Neg(..) => 7,
            Expr::Bool(_) | Expr::Int(_) | Expr::Var(_) => 8,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.prec() < min {
            write!(f, "(")?;
            self.fmt_prec(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Expr::Bool(b) => write!(f, "{}", b),
            Expr::Int(n) => write!(f, "{}", n),
            Expr::Var(n) => write!(f, "{}", n),
            Expr::Not(e) => {
                write!(f, "!")?;
                e.fmt_prec(f, 3)
            }
            Expr::Or(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, " || ")?;
                b.fmt_prec(f, 2)
            }
            Expr::And(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, " && ")?;
                b.fmt_prec(f, 3)
            }
            Expr::Cmp(op, a, b) => {
                a.fmt_prec(f, 5)?;
                write!(f, " {} ", op.text())?;
                b.fmt_prec(f, 5)
            }
            Expr::Add(a, b) => {
                a.fmt_prec(f, 5)?;
                write!(f, " + ")?;
                b.fmt_prec(f, 6)
            }
            Expr::Sub(a, b) => {
                a.fmt_prec(f, 5)?;
                write!(f, " - ")?;
                b.fmt_prec(f, 6)
            }
            Expr::Mul(a, b) => {
                a.fmt_prec(f, 6)?;
                write!(f, " * ")?;
                b.fmt_prec(f, 7)
            }
            Expr::Neg(e) => {
                write!(f, "-")?;
                e.fmt_prec(f, 7)
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

fn fmt_stmt(s: &Stmt, f: &mut fmt::Formatter<'_>, indent: usize) -> fmt::Result {
    let pad = "  ".repeat(indent);
    match s {
        Stmt::Skip => writeln!(f, "{}skip;", pad),
        Stmt::Assign(x, e) => writeln!(f, "{}{} := {};", pad, x, e),
        Stmt::Measure(x, q) => writeln!(f, "{}{} <- meas({});", pad, x, q),
        Stmt::Gate(g, ops) => writeln!(f, "{}{} *= {};", pad, ops.join(", "), g.name()),
        Stmt::Consume(e) => writeln!(f, "{}consume({});", pad, e),
        Stmt::InitZero(q) => writeln!(f, "{}{} := |0>;", pad, q),
        Stmt::InitPlus(q) => writeln!(f, "{}{} := |+>;", pad, q),
        Stmt::If(g, a, b) => {
            writeln!(f, "{}if {} {{", pad, g)?;
            for s in a {
                fmt_stmt(s, f, indent + 1)?;
            }
            if b.is_empty() {
                writeln!(f, "{}}}", pad)
            } else {
                writeln!(f, "{}}} else {{", pad)?;
                for s in b {
                    fmt_stmt(s, f, indent + 1)?;
                }
                writeln!(f, "{}}}", pad)
            }
        }
        Stmt::While(_, g, body) => {
            writeln!(f, "{}while {} {{", pad, g)?;
            for s in body {
                fmt_stmt(s, f, indent + 1)?;
            }
            writeln!(f, "{}}}", pad)
        }
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.decls {
            writeln!(f, "var {} : {};", d.name, d.ty)?;
        }
        for s in &self.body {
            fmt_stmt(s, f, 0)?;
        }
        Ok(())
    }
}
