use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{Poly, QSqrt2, VarId, VarTable};

/// Rational function kept as a numerator polynomial over a *list* of
/// denominator factors (monic, sorted). There is deliberately no multivariate
/// GCD: cancellation tries exact division of the numerator by each factor,
/// which is what post-measurement normalization needs — an arm probability
/// multiplying a state entry `q/p` cancels because `p` reappears literally,
/// and conditioned probabilities are scalar multiples of their denominators.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default)]
pub struct RatFun {
    num: Poly,
    den: Vec<Poly>,
}

impl RatFun {
    pub fn from_poly(num: Poly) -> Self {
        RatFun { num, den: Vec::new() }
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn constant(c: QSqrt2) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn var(v: VarId) -> Self {
        Self::from_poly(Poly::var(v))
    }

    /// num / (f1 * f2 * ...). Factors are monic-normalized (their leading
    /// coefficients move into the numerator) and cancellation is attempted.
    pub fn new(num: Poly, den: Vec<Poly>) -> Self {
        let mut r = RatFun { num, den };
        r.normalize();
        r
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den_factors(&self) -> &[Poly] {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_empty()
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        self.den.is_empty().then_some(&self.num)
    }

    pub fn as_constant(&self) -> Option<QSqrt2> {
        self.as_poly().and_then(Poly::as_constant)
    }

    /// Product of the denominator factors as one polynomial.
    pub fn den_poly(&self) -> Poly {
        let mut p = Poly::one();
        for f in &self.den {
            p = &p * f;
        }
        p
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        let mut scale = QSqrt2::one();
        let mut den: Vec<Poly> = Vec::with_capacity(self.den.len());
        for f in self.den.drain(..) {
            assert!(!f.is_zero(), "zero denominator factor");
            let (monic, lead) = f.monic();
            scale = scale * lead;
            if !monic.as_constant().map_or(false, |c| c.is_one()) {
                den.push(monic);
            }
        }
        let mut num = self.num.scale(&scale.inv());
        // cancellation: exact division by factors, repeated to fixpoint
        let mut progress = true;
        while progress {
            progress = false;
            for i in 0..den.len() {
                if let Some(q) = num.divide_exact(&den[i]) {
                    num = q;
                    den.remove(i);
                    progress = true;
                    break;
                }
            }
        }
        den.sort();
        self.num = num;
        self.den = den;
    }

    pub fn scale(&self, c: &QSqrt2) -> RatFun {
        if c.is_zero() {
            return RatFun::zero();
        }
        RatFun { num: self.num.scale(c), den: self.den.clone() }
    }

    /// Substitutes rational functions for variables (of both numerator and
    /// denominator factors). Unmapped variables stay themselves.
    pub fn subst(&self, map: &BTreeMap<VarId, RatFun>) -> RatFun {
        let num = subst_poly(&self.num, map);
        let mut out = num;
        for f in &self.den {
            let fs = subst_poly(f, map);
            out = &out * &fs.recip();
        }
        out
    }

    fn recip(&self) -> RatFun {
        assert!(!self.num.is_zero(), "division by zero rational function");
        let mut den = vec![self.num.clone()];
        den.extend(self.den.iter().cloned());
        // num becomes the old denominator product
        RatFun::new(self.den.iter().fold(Poly::one(), |acc, f| &acc * f), den)
    }

    pub fn div(&self, other: &RatFun) -> RatFun {
        self * &other.recip()
    }

    pub fn eval_f64(&self, assign: &dyn Fn(VarId) -> f64) -> f64 {
        let mut v = self.num.eval_f64(assign);
        for f in &self.den {
            v /= f.eval_f64(assign);
        }
        v
    }

    pub fn eval_exact(&self, assign: &dyn Fn(VarId) -> QSqrt2) -> QSqrt2 {
        let mut v = self.num.eval_exact(assign);
        for f in &self.den {
            v = v * f.eval_exact(assign).inv();
        }
        v
    }

    pub fn vars(&self) -> Vec<VarId> {
        let mut vs = self.num.vars();
        for f in &self.den {
            vs.extend(f.vars());
        }
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn display<'a>(&'a self, vars: &'a VarTable) -> RatFunDisplay<'a> {
        RatFunDisplay { rf: self, vars }
    }
}

/// Polynomial with variables replaced by rational functions.
pub(crate) fn subst_poly(p: &Poly, map: &BTreeMap<VarId, RatFun>) -> RatFun {
    if p.vars().iter().all(|v| !map.contains_key(v)) {
        return RatFun::from_poly(p.clone());
    }
    let mut acc = RatFun::zero();
    for (m, c) in p.terms() {
        let mut term = RatFun::constant(c.clone());
        for &(v, e) in m.pairs() {
            let factor = match map.get(&v) {
                Some(r) => r.clone(),
                None => RatFun::var(v),
            };
            for _ in 0..e {
                term = &term * &factor;
            }
        }
        acc = &acc + &term;
    }
    acc
}

impl Add for &RatFun {
    type Output = RatFun;
    fn add(self, rhs: &RatFun) -> RatFun {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RatFun::new(&self.num + &rhs.num, self.den.clone());
        }
        // shared factors once, unshared cross-multiplied
        let mut shared = Vec::new();
        let mut left = self.den.clone();
        let mut right = rhs.den.clone();
        let mut i = 0;
        while i < left.len() {
            if let Some(j) = right.iter().position(|f| f == &left[i]) {
                shared.push(left.remove(i));
                right.remove(j);
            } else {
                i += 1;
            }
        }
        let lprod = right.iter().fold(Poly::one(), |acc, f| &acc * f);
        let rprod = left.iter().fold(Poly::one(), |acc, f| &acc * f);
        let num = &(&self.num * &lprod) + &(&rhs.num * &rprod);
        let mut den = shared;
        den.extend(left);
        den.extend(right);
        RatFun::new(num, den)
    }
}

impl Sub for &RatFun {
    type Output = RatFun;
    fn sub(self, rhs: &RatFun) -> RatFun {
        self + &(-rhs)
    }
}

impl Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun { num: -&self.num, den: self.den.clone() }
    }
}

impl Mul for &RatFun {
    type Output = RatFun;
    fn mul(self, rhs: &RatFun) -> RatFun {
        if self.is_zero() || rhs.is_zero() {
            return RatFun::zero();
        }
        let mut den = self.den.clone();
        den.extend(rhs.den.iter().cloned());
        RatFun::new(&self.num * &rhs.num, den)
    }
}

pub struct RatFunDisplay<'a> {
    rf: &'a RatFun,
    vars: &'a VarTable,
}

impl fmt::Display for RatFunDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rf.den.is_empty() {
            return write!(f, "{}", self.rf.num.display(self.vars));
        }
        write!(f, "({})", self.rf.num.display(self.vars))?;
        for factor in &self.rf.den {
            write!(f, "/({})", factor.display(self.vars))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::VarTable;

    fn setup() -> (VarTable, VarId, VarId, VarId) {
        let t = VarTable::for_program(&["x".into()], 1);
        let x = t.lookup("x").unwrap();
        let d1 = t.lookup("d1").unwrap();
        let d2 = t.lookup("d2").unwrap();
        (t, x, d1, d2)
    }

    #[test]
    fn probability_times_normalized_entry_cancels() {
        let (_, x, d1, d2) = setup();
        let p = &Poly::var(d1) + &Poly::var(d2);
        let entry = RatFun::new(Poly::var(x), vec![p.clone()]);
        let prod = &RatFun::from_poly(p) * &entry;
        assert_eq!(prod, RatFun::var(x));
    }

    #[test]
    fn scalar_multiple_of_denominator_collapses() {
        let (_, _, d1, d2) = setup();
        let d = &Poly::var(d1) + &Poly::var(d2);
        let num = d.scale(&QSqrt2::ratio(3, 4));
        let r = RatFun::new(num, vec![d]);
        assert_eq!(r.as_constant().unwrap(), QSqrt2::ratio(3, 4));
    }

    #[test]
    fn monic_normalization_moves_leading_coeff() {
        let (_, _, d1, _) = setup();
        let den = Poly::var(d1).scale(&QSqrt2::from_int(2));
        let r = RatFun::new(Poly::one(), vec![den]);
        // 1/(2 d1) = (1/2)/d1
        assert_eq!(r.den_factors(), &[Poly::var(d1)]);
        assert_eq!(r.num(), &Poly::constant(QSqrt2::ratio(1, 2)));
    }

    #[test]
    fn addition_common_denominator() {
        let (_, x, d1, d2) = setup();
        let p = &Poly::var(d1) + &Poly::var(d2);
        let a = RatFun::new(Poly::var(x), vec![p.clone()]);
        let b = RatFun::new(Poly::var(d1), vec![p.clone()]);
        let s = &a + &b;
        assert_eq!(s, RatFun::new(&Poly::var(x) + &Poly::var(d1), vec![p]));
    }

    #[test]
    fn subst_through_denominator() {
        let (_, x, d1, d2) = setup();
        // (x/d1)[d1 := d2] = x/d2 ; then [x := d2] gives 1... via d2/d2
        let r = RatFun::new(Poly::var(x), vec![Poly::var(d1)]);
        let mut m = BTreeMap::new();
        m.insert(d1, RatFun::var(d2));
        let s = r.subst(&m);
        assert_eq!(s, RatFun::new(Poly::var(x), vec![Poly::var(d2)]));
        let mut m2 = BTreeMap::new();
        m2.insert(x, RatFun::var(d2));
        assert_eq!(s.subst(&m2), RatFun::one());
    }

    #[test]
    fn eval_matches_structure() {
        let (_, x, d1, _) = setup();
        let r = RatFun::new(Poly::var(x), vec![&Poly::var(d1) + &Poly::one()]);
        let v = r.eval_f64(&|v| if v == x { 6.0 } else { 2.0 });
        assert!((v - 2.0).abs() < 1e-12);
    }
}
