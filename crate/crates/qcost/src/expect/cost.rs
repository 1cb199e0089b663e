use std::collections::BTreeMap;
use std::fmt;

use crate::arith::{Poly, QSqrt2, RatFun, VarId, VarTable};

use super::guard::Guard;

/// One guarded term of a cost expression: the product of indicator guards
/// times a rational function.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Summand {
    pub guards: Vec<Guard>,
    pub coef: RatFun,
}

/// A closed-form cost: sum of guarded rational functions. This is both the
/// shape of synthesized bound templates and of final reported bounds.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default)]
pub struct CostExpr {
    summands: Vec<Summand>,
}

impl CostExpr {
    pub fn zero() -> CostExpr {
        CostExpr { summands: Vec::new() }
    }

    pub fn constant(c: QSqrt2) -> CostExpr {
        CostExpr::from_ratfun(RatFun::constant(c))
    }

    pub fn from_ratfun(f: RatFun) -> CostExpr {
        CostExpr { summands: vec![Summand { guards: Vec::new(), coef: f }] }.canonical()
    }

    pub fn from_poly(p: Poly) -> CostExpr {
        CostExpr::from_ratfun(RatFun::from_poly(p))
    }

    pub fn guarded(guard: Guard, f: RatFun) -> CostExpr {
        CostExpr { summands: vec![Summand { guards: vec![guard], coef: f }] }.canonical()
    }

    pub fn from_summands(summands: Vec<Summand>) -> CostExpr {
        CostExpr { summands }.canonical()
    }

    pub fn is_zero(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn summands(&self) -> &[Summand] {
        &self.summands
    }

    pub fn as_constant(&self) -> Option<QSqrt2> {
        match self.summands.len() {
            0 => Some(QSqrt2::zero()),
            1 if self.summands[0].guards.is_empty() => self.summands[0].coef.as_constant(),
            _ => None,
        }
    }

    /// Unguarded single rational function, if that is all there is.
    pub fn as_ratfun(&self) -> Option<&RatFun> {
        match self.summands.len() {
            1 if self.summands[0].guards.is_empty() => Some(&self.summands[0].coef),
            _ => None,
        }
    }

    pub fn add(&self, other: &CostExpr) -> CostExpr {
        let mut summands = self.summands.clone();
        summands.extend(other.summands.iter().cloned());
        CostExpr { summands }.canonical()
    }

    pub fn scale(&self, f: &RatFun) -> CostExpr {
        CostExpr {
            summands: self
                .summands
                .iter()
                .map(|s| Summand { guards: s.guards.clone(), coef: &s.coef * f })
                .collect(),
        }
        .canonical()
    }

    /// Multiplies every summand by the indicator of `g`.
    pub fn guard_with(&self, g: &Guard) -> CostExpr {
        CostExpr {
            summands: self
                .summands
                .iter()
                .map(|s| {
                    let mut guards = s.guards.clone();
                    guards.push(g.clone());
                    Summand { guards, coef: s.coef.clone() }
                })
                .collect(),
        }
        .canonical()
    }

    pub fn subst(
        &self,
        map: &BTreeMap<VarId, RatFun>,
        bools: &BTreeMap<String, Guard>,
        table: &VarTable,
    ) -> CostExpr {
        CostExpr {
            summands: self
                .summands
                .iter()
                .map(|s| Summand {
                    guards: s.guards.iter().map(|g| g.subst(map, bools, table)).collect(),
                    coef: s.coef.subst(map),
                })
                .collect(),
        }
        .canonical()
    }

    /// Splits conjunction guards, folds constants, drops dead summands, and
    /// merges summands with identical guard sets.
    fn canonical(mut self) -> CostExpr {
        let mut merged: BTreeMap<Vec<Guard>, RatFun> = BTreeMap::new();
        'next: for s in self.summands.drain(..) {
            if s.coef.is_zero() {
                continue;
            }
            let mut guards = Vec::new();
            for g in &s.guards {
                for c in g.simplified().conjuncts() {
                    match c.as_const() {
                        Some(true) => {}
                        Some(false) => continue 'next,
                        None => guards.push(c),
                    }
                }
            }
            guards.sort();
            guards.dedup();
            let slot = merged.entry(guards).or_insert_with(RatFun::zero);
            *slot = &*slot + &s.coef;
        }
        CostExpr {
            summands: merged
                .into_iter()
                .filter(|(_, coef)| !coef.is_zero())
                .map(|(guards, coef)| Summand { guards, coef })
                .collect(),
        }
    }

    pub fn eval_f64(&self, assign: &dyn Fn(VarId) -> f64, bools: &dyn Fn(&str) -> bool) -> f64 {
        self.summands
            .iter()
            .filter(|s| s.guards.iter().all(|g| g.eval_f64(assign, bools)))
            .map(|s| s.coef.eval_f64(assign))
            .sum()
    }

    pub fn eval_exact(
        &self,
        assign: &dyn Fn(VarId) -> QSqrt2,
        bools: &dyn Fn(&str) -> bool,
    ) -> QSqrt2 {
        let mut acc = QSqrt2::zero();
        for s in &self.summands {
            if s.guards.iter().all(|g| g.eval_exact(assign, bools)) {
                acc += &s.coef.eval_exact(assign);
            }
        }
        acc
    }

    pub fn vars(&self) -> Vec<VarId> {
        let mut out = Vec::new();
        for s in &self.summands {
            out.extend(s.coef.vars());
            for g in &s.guards {
                out.extend(g.vars());
            }
        }
        out.sort();
        out.dedup();
        out
    }

    pub fn display<'a>(&'a self, table: &'a VarTable) -> CostExprDisplay<'a> {
        CostExprDisplay { cost: self, table }
    }
}

pub struct CostExprDisplay<'a> {
    cost: &'a CostExpr,
    table: &'a VarTable,
}

impl fmt::Display for CostExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.cost.summands.is_empty() {
            return write!(f, "0");
        }
        for (i, s) in self.cost.summands.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            for g in &s.guards {
                write!(f, "[ {} ] * ", g.display(self.table))?;
            }
            let coef = format!("{}", s.coef.display(self.table));
            if !s.guards.is_empty() && (coef.contains(" + ") || coef.contains(" - ") || coef.starts_with('-')) {
                write!(f, "({})", coef)?;
            } else {
                write!(f, "{}", coef)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::VarKind;

    fn setup() -> VarTable {
        VarTable::for_program(&["n".to_string()], 1)
    }

    #[test]
    fn conjunction_guards_split_and_merge() {
        let t = setup();
        let n = RatFun::var(t.lookup("n").unwrap());
        let g1 = Guard::ge(n.clone());
        let g2 = Guard::ge(&n - &RatFun::one());
        let a = CostExpr::guarded(Guard::and(vec![g1.clone(), g2.clone()]), RatFun::one());
        let b = CostExpr::guarded(g2.clone(), RatFun::one()).guard_with(&g1);
        assert_eq!(a, b);
        // merging doubles the coefficient
        let merged = a.add(&b);
        assert_eq!(merged.summands().len(), 1);
        assert_eq!(merged.summands()[0].coef.as_constant(), Some(QSqrt2::from_int(2)));
    }

    #[test]
    fn dead_summands_vanish() {
        let t = setup();
        let dead = CostExpr::guarded(Guard::ff(), RatFun::one());
        assert!(dead.is_zero());
        let trivial = CostExpr::guarded(Guard::tt(), RatFun::zero());
        assert!(trivial.is_zero());
        let live = CostExpr::guarded(Guard::tt(), RatFun::var(t.lookup("n").unwrap()));
        assert_eq!(live.summands().len(), 1);
        assert!(live.summands()[0].guards.is_empty());
    }

    #[test]
    fn eval_respects_guards() {
        let t = setup();
        let n = t.lookup("n").unwrap();
        // max(0, n) = [n >= 0] * n
        let c = CostExpr::guarded(Guard::ge(RatFun::var(n)), RatFun::var(n));
        let at = |v: f64| move |id: VarId| if id == n { v } else { 0.0 };
        let no_bools = |_: &str| false;
        assert_eq!(c.eval_f64(&at(3.0), &no_bools), 3.0);
        assert_eq!(c.eval_f64(&at(-2.0), &no_bools), 0.0);
    }

    #[test]
    fn display_reads_naturally() {
        let t = setup();
        let a12 = t.lookup("a12").unwrap();
        let neg = -&RatFun::var(a12);
        let c = CostExpr::constant(QSqrt2::from_int(2))
            .add(&CostExpr::guarded(Guard::ge(neg.clone()), neg.scale(&QSqrt2::from_int(2))));
        let text = format!("{}", c.display(&t));
        assert_eq!(text, "2 + [ -a12 >= 0 ] * (-2*a12)");
    }

    #[test]
    fn subst_maps_matrix_vars_through_guards() {
        let t = setup();
        let a12 = t.lookup("a12").unwrap();
        let d1 = t.lookup("d1").unwrap();
        let c = CostExpr::guarded(Guard::ge(RatFun::var(a12)), RatFun::var(a12));
        let mut map = BTreeMap::new();
        map.insert(a12, -&RatFun::var(d1));
        let s = c.subst(&map, &BTreeMap::new(), &t);
        let d1f = RatFun::var(d1);
        assert_eq!(
            s,
            CostExpr::guarded(Guard::ge(-&d1f), -&d1f)
        );
        assert!(matches!(t.kind(d1), VarKind::Diag(1)));
    }
}
