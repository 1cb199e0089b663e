use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{QSqrt2, VarId, VarTable};

/// Sparse monomial: sorted (variable, exponent) pairs, exponents positive.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(Vec<(VarId, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: VarId) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_pairs(mut pairs: Vec<(VarId, u32)>) -> Self {
        pairs.retain(|&(_, e)| e > 0);
        pairs.sort_by_key(|&(v, _)| v);
        let mut out: Vec<(VarId, u32)> = Vec::with_capacity(pairs.len());
        for (v, e) in pairs {
            match out.last_mut() {
                Some(last) if last.0 == v => last.1 += e,
                _ => out.push((v, e)),
            }
        }
        Monomial(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, v: VarId) -> u32 {
        self.0.iter().find(|&&(w, _)| w == v).map_or(0, |&(_, e)| e)
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> + '_ {
        self.0.iter().map(|&(v, _)| v)
    }

    pub fn pairs(&self) -> &[(VarId, u32)] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut pairs = self.0.clone();
        pairs.extend_from_slice(&other.0);
        Monomial::from_pairs(pairs)
    }

    /// Componentwise quotient, None when not divisible.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::new();
        let mut it = self.0.iter().peekable();
        for &(v, e) in &other.0 {
            loop {
                let &&(w, f) = it.peek()?;
                if w < v {
                    out.push((w, f));
                    it.next();
                } else if w == v {
                    if f < e {
                        return None;
                    }
                    if f > e {
                        out.push((w, f - e));
                    }
                    it.next();
                    break;
                } else {
                    return None;
                }
            }
        }
        out.extend(it.copied());
        Some(Monomial(out))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    /// Graded lexicographic: total degree first, ties broken lexicographically
    /// with lower ids more significant (higher exponent on an earlier
    /// variable wins).
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let mut i = self.0.iter();
        let mut j = other.0.iter();
        loop {
            match (i.next(), j.next()) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(va, ea)), Some(&(vb, eb))) => {
                    if va != vb {
                        // the side owning the earlier variable is lex-larger
                        return if va < vb { Ordering::Greater } else { Ordering::Less };
                    }
                    if ea != eb {
                        return ea.cmp(&eb);
                    }
                }
            }
        }
    }
}

/// Sparse multivariate polynomial with Q(sqrt2) coefficients. Terms are kept
/// in a BTreeMap keyed by monomial, so iteration order (and hence printing
/// and emission) is deterministic.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, QSqrt2>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: QSqrt2) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Poly { terms }
    }

    pub fn one() -> Self {
        Poly::constant(QSqrt2::one())
    }

    pub fn from_int(n: i64) -> Self {
        Poly::constant(QSqrt2::from_int(n))
    }

    pub fn var(v: VarId) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(v), QSqrt2::one());
        Poly { terms }
    }

    pub fn term(m: Monomial, c: QSqrt2) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Some(c) when the polynomial is the constant c (including zero).
    pub fn as_constant(&self) -> Option<QSqrt2> {
        match self.terms.len() {
            0 => Some(QSqrt2::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &QSqrt2)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Leading (order-maximal) term.
    pub fn leading(&self) -> Option<(&Monomial, &QSqrt2)> {
        self.terms.iter().next_back()
    }

    pub fn vars(&self) -> Vec<VarId> {
        let mut vs: Vec<VarId> = self.terms.keys().flat_map(|m| m.vars()).collect();
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn contains_var(&self, v: VarId) -> bool {
        self.terms.keys().any(|m| m.exponent(v) > 0)
    }

    pub fn add_term(&mut self, m: Monomial, c: QSqrt2) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &QSqrt2) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect() }
    }

    /// Substitutes a polynomial for one variable.
    pub fn subst_var(&self, v: VarId, replacement: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e == 0 {
                out.add_term(m.clone(), c.clone());
                continue;
            }
            let rest = Monomial::from_pairs(
                m.pairs().iter().copied().filter(|&(w, _)| w != v).collect(),
            );
            let mut pow = Poly::one();
            for _ in 0..e {
                pow = &pow * replacement;
            }
            for (pm, pc) in &pow.terms {
                out.add_term(rest.mul(pm), pc * c);
            }
        }
        out
    }

    /// Exact multivariate division by a single divisor; None when the
    /// division leaves a remainder. Used for denominator cancellation.
    pub fn divide_exact(&self, divisor: &Poly) -> Option<Poly> {
        let (dm, dc) = divisor.leading()?;
        let dinv = dc.inv();
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while !rem.is_zero() {
            let (rm, rc) = rem.leading().unwrap();
            let qm = rm.div(dm)?;
            let qc = rc * &dinv;
            let t = Poly::term(qm, qc);
            quot = &quot + &t;
            rem = &rem - &(&t * divisor);
        }
        Some(quot)
    }

    /// Exact evaluation; every variable of the polynomial must be assigned.
    pub fn eval_exact(&self, assign: &dyn Fn(VarId) -> QSqrt2) -> QSqrt2 {
        let mut total = QSqrt2::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for &(var, e) in m.pairs() {
                let x = assign(var);
                for _ in 0..e {
                    v *= &x;
                }
            }
            total += &v;
        }
        total
    }

    pub fn eval_f64(&self, assign: &dyn Fn(VarId) -> f64) -> f64 {
        let mut total = 0.0;
        for (m, c) in &self.terms {
            let mut v = c.to_f64();
            for &(var, e) in m.pairs() {
                v *= assign(var).powi(e as i32);
            }
            total += v;
        }
        total
    }

    /// Divides by the leading coefficient; returns (monic poly, coefficient).
    pub fn monic(&self) -> (Poly, QSqrt2) {
        match self.leading() {
            None => (Poly::zero(), QSqrt2::one()),
            Some((_, c)) => {
                let c = c.clone();
                (self.scale(&c.inv()), c)
            }
        }
    }

    pub fn display<'a>(&'a self, vars: &'a VarTable) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, vars }
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a Poly,
    vars: &'a VarTable,
}

impl fmt::Display for PolyDisplay<'_> {
    /// Canonical text, order-descending terms: `(3/2)*sqrt2*d1*a12 + d2 - 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.poly.terms.iter().rev() {
            let neg = c.signum() < 0;
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut parts: Vec<String> = Vec::new();
            if !mag.is_one() || m.is_one() {
                parts.push(mag.to_string());
            }
            for &(v, e) in m.pairs() {
                let name = self.vars.name(v);
                if e == 1 {
                    parts.push(name);
                } else {
                    parts.push(format!("{}^{}", name, e));
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[")?;
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{:?}*{:?}", c, m.pairs())?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::VarKind;

    fn table() -> VarTable {
        VarTable::for_program(&["k".into()], 1)
    }

    #[test]
    fn graded_lex_order() {
        let t = table();
        let k = t.lookup("k").unwrap();
        let d1 = t.lookup("d1").unwrap();
        let d2 = t.lookup("d2").unwrap();
        // degree dominates
        assert!(Monomial::from_pairs(vec![(d2, 2)]) > Monomial::var(k));
        // same degree: earlier variable wins
        assert!(Monomial::var(k) > Monomial::var(d1));
        assert!(Monomial::var(d1) > Monomial::var(d2));
        // k*d2 vs d1^2: degree equal, k more significant
        assert!(
            Monomial::from_pairs(vec![(k, 1), (d2, 1)])
                > Monomial::from_pairs(vec![(d1, 2)])
        );
    }

    #[test]
    fn ring_identities() {
        let t = table();
        let k = Poly::var(t.lookup("k").unwrap());
        let d1 = Poly::var(t.lookup("d1").unwrap());
        let p = &(&k + &d1) * &(&k - &d1);
        let q = &(&k * &k) - &(&d1 * &d1);
        assert_eq!(p, q);
    }

    #[test]
    fn subst_var_composes() {
        let t = table();
        let k = t.lookup("k").unwrap();
        let d1 = t.lookup("d1").unwrap();
        // (k^2 + k)[k := d1 + 1] = d1^2 + 3 d1 + 2
        let p = &(&Poly::var(k) * &Poly::var(k)) + &Poly::var(k);
        let r = &Poly::var(d1) + &Poly::one();
        let s = p.subst_var(k, &r);
        let expect = &(&(&Poly::var(d1) * &Poly::var(d1))
            + &Poly::var(d1).scale(&QSqrt2::from_int(3)))
            + &Poly::from_int(2);
        assert_eq!(s, expect);
    }

    #[test]
    fn exact_division() {
        let t = table();
        let k = Poly::var(t.lookup("k").unwrap());
        let d1 = Poly::var(t.lookup("d1").unwrap());
        let prod = &(&k + &d1) * &(&k + &Poly::one());
        let q = prod.divide_exact(&(&k + &d1)).unwrap();
        assert_eq!(q, &k + &Poly::one());
        assert!(prod.divide_exact(&(&k + &Poly::from_int(7))).is_none());
        // scalar multiples divide to a constant
        let p = (&k + &d1).scale(&QSqrt2::ratio(3, 4));
        assert_eq!(p.divide_exact(&(&k + &d1)).unwrap(), Poly::constant(QSqrt2::ratio(3, 4)));
    }

    #[test]
    fn eval_exact_and_f64_agree() {
        let mut t = table();
        let extra = t.intern(VarKind::Coef("c0".into()));
        let k = t.lookup("k").unwrap();
        let p = &(&Poly::var(k) * &Poly::var(extra)).scale(&QSqrt2::sqrt2_ratio(1, 2))
            + &Poly::from_int(3);
        let exact = p.eval_exact(&|v| {
            if v == k {
                QSqrt2::from_int(2)
            } else {
                QSqrt2::from_int(5)
            }
        });
        let approx = p.eval_f64(&|v| if v == k { 2.0 } else { 5.0 });
        assert!((exact.to_f64() - approx).abs() < 1e-12);
        assert_eq!(exact, QSqrt2::new(crate::arith::rat_int(3), crate::arith::rat_int(5)));
    }

    #[test]
    fn display_canonical() {
        let t = table();
        let d1 = t.lookup("d1").unwrap();
        let d2 = t.lookup("d2").unwrap();
        let p = &(&Poly::var(d1).scale(&QSqrt2::sqrt2_ratio(3, 2)) - &Poly::var(d2))
            + &Poly::from_int(1);
        assert_eq!(p.display(&t).to_string(), "(3/2)*sqrt2*d1 - d2 + 1");
        assert_eq!(Poly::zero().display(&t).to_string(), "0");
    }
}
