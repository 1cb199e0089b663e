use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{rat, rat_int, Rat};

/// Element of the field Q(sqrt 2), stored as `a + b*sqrt2` with exact
/// rational coordinates. This is where all gate-entry and certificate
/// arithmetic lives; sign and comparison are decided exactly.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QSqrt2 {
    pub a: Rat,
    pub b: Rat,
}

impl QSqrt2 {
    pub fn new(a: Rat, b: Rat) -> Self {
        QSqrt2 { a, b }
    }

    pub fn from_rat(a: Rat) -> Self {
        QSqrt2 { a, b: Rat::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rat(rat_int(n))
    }

    /// `p/q` with no sqrt2 part.
    pub fn ratio(p: i64, q: i64) -> Self {
        Self::from_rat(rat(p, q))
    }

    /// `(p/q)*sqrt2`.
    pub fn sqrt2_ratio(p: i64, q: i64) -> Self {
        QSqrt2 { a: Rat::zero(), b: rat(p, q) }
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn sqrt2() -> Self {
        QSqrt2 { a: Rat::zero(), b: Rat::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.b.is_zero() && self.a == Rat::one()
    }

    /// True when the sqrt2 coordinate vanishes.
    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Multiplicative inverse: (a - b*sqrt2) / (a^2 - 2 b^2).
    /// Panics on zero, like rational division.
    pub fn inv(&self) -> Self {
        let norm = &self.a * &self.a - rat_int(2) * &self.b * &self.b;
        assert!(!norm.is_zero(), "inverse of zero in Q(sqrt2)");
        QSqrt2 { a: &self.a / &norm, b: -&self.b / &norm }
    }

    /// Exact sign: -1, 0, or 1.
    pub fn signum(&self) -> i32 {
        if self.a.is_zero() {
            return sign_rat(&self.b);
        }
        if self.b.is_zero() {
            return sign_rat(&self.a);
        }
        let sa = sign_rat(&self.a);
        let sb = sign_rat(&self.b);
        if sa == sb {
            return sa;
        }
        // a and b have opposite signs: compare |a| with sqrt2*|b| via squares.
        let a2 = &self.a * &self.a;
        let b2 = rat_int(2) * &self.b * &self.b;
        match a2.cmp(&b2) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0, // impossible: sqrt2 irrational, but harmless
        }
    }

    pub fn is_nonneg(&self) -> bool {
        self.signum() >= 0
    }

    pub fn to_f64(&self) -> f64 {
        rat_f64(&self.a) + rat_f64(&self.b) * std::f64::consts::SQRT_2
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self.clone()
        } else {
            self.clone()
        }
    }
}

fn sign_rat(r: &Rat) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// Correctly-rounded-enough double for a big rational (numerator and
/// denominator converted separately, adequate for the magnitudes we meet).
pub fn rat_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

impl Add for QSqrt2 {
    type Output = QSqrt2;
    fn add(self, rhs: QSqrt2) -> QSqrt2 {
        QSqrt2 { a: self.a + rhs.a, b: self.b + rhs.b }
    }
}

impl<'a> Add<&'a QSqrt2> for QSqrt2 {
    type Output = QSqrt2;
    fn add(self, rhs: &QSqrt2) -> QSqrt2 {
        QSqrt2 { a: self.a + &rhs.a, b: self.b + &rhs.b }
    }
}

impl AddAssign<&QSqrt2> for QSqrt2 {
    fn add_assign(&mut self, rhs: &QSqrt2) {
        self.a += &rhs.a;
        self.b += &rhs.b;
    }
}

impl Sub for QSqrt2 {
    type Output = QSqrt2;
    fn sub(self, rhs: QSqrt2) -> QSqrt2 {
        QSqrt2 { a: self.a - rhs.a, b: self.b - rhs.b }
    }
}

impl SubAssign<&QSqrt2> for QSqrt2 {
    fn sub_assign(&mut self, rhs: &QSqrt2) {
        self.a -= &rhs.a;
        self.b -= &rhs.b;
    }
}

impl Neg for QSqrt2 {
    type Output = QSqrt2;
    fn neg(self) -> QSqrt2 {
        QSqrt2 { a: -self.a, b: -self.b }
    }
}

impl Neg for &QSqrt2 {
    type Output = QSqrt2;
    fn neg(self) -> QSqrt2 {
        QSqrt2 { a: -&self.a, b: -&self.b }
    }
}

impl Mul for QSqrt2 {
    type Output = QSqrt2;
    fn mul(self, rhs: QSqrt2) -> QSqrt2 {
        (&self).mul(&rhs)
    }
}

impl Mul<&QSqrt2> for &QSqrt2 {
    type Output = QSqrt2;
    fn mul(self, rhs: &QSqrt2) -> QSqrt2 {
        // (a1 + b1 s)(a2 + b2 s) = a1 a2 + 2 b1 b2 + (a1 b2 + a2 b1) s
        QSqrt2 {
            a: &self.a * &rhs.a + rat_int(2) * &self.b * &rhs.b,
            b: &self.a * &rhs.b + &rhs.a * &self.b,
        }
    }
}

impl MulAssign<&QSqrt2> for QSqrt2 {
    fn mul_assign(&mut self, rhs: &QSqrt2) {
        *self = (&*self).mul(rhs);
    }
}

impl Div for QSqrt2 {
    type Output = QSqrt2;
    fn div(self, rhs: QSqrt2) -> QSqrt2 {
        (&self).mul(&rhs.inv())
    }
}

impl PartialOrd for QSqrt2 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QSqrt2 {
    fn cmp(&self, other: &Self) -> Ordering {
        let d = QSqrt2 { a: &self.a - &other.a, b: &self.b - &other.b };
        match d.signum() {
            x if x < 0 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }
}

impl fmt::Display for QSqrt2 {
    /// Canonical text: `3`, `(3/2)`, `(3/2)*sqrt2`, `(1 + 2*sqrt2)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn rat_text(r: &Rat) -> String {
            if r.denom() == &num_bigint::BigInt::from(1) {
                format!("{}", r.numer())
            } else {
                format!("({})", r)
            }
        }
        if self.b.is_zero() {
            write!(f, "{}", rat_text(&self.a))
        } else if self.a.is_zero() {
            if self.b == Rat::one() {
                write!(f, "sqrt2")
            } else {
                write!(f, "{}*sqrt2", rat_text(&self.b))
            }
        } else {
            let bs = if self.b == Rat::one() {
                "sqrt2".to_string()
            } else {
                format!("{}*sqrt2", rat_text(&self.b))
            };
            if self.b.is_positive() {
                write!(f, "({} + {})", rat_text(&self.a), bs)
            } else {
                let nb = -&self.b;
                let bs = if nb == Rat::one() {
                    "sqrt2".to_string()
                } else {
                    format!("{}*sqrt2", rat_text(&nb))
                };
                write!(f, "({} - {})", rat_text(&self.a), bs)
            }
        }
    }
}

impl fmt::Debug for QSqrt2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: (i64, i64), b: (i64, i64)) -> QSqrt2 {
        QSqrt2::new(rat(a.0, a.1), rat(b.0, b.1))
    }

    #[test]
    fn field_ops() {
        let x = q((1, 2), (3, 1));
        let y = q((-2, 3), (1, 5));
        let z = (x.clone() + y.clone()) * y.clone();
        let w = x.clone() * y.clone() + y.clone() * y.clone();
        assert_eq!(z, w);
        let inv = y.inv();
        assert!((y * inv).is_one());
    }

    #[test]
    fn inverse_formula() {
        // 1/(1+sqrt2) = sqrt2 - 1
        let x = q((1, 1), (1, 1));
        assert_eq!(x.inv(), q((-1, 1), (1, 1)));
    }

    #[test]
    fn exact_sign_with_mixed_coordinates() {
        // 3 - 2*sqrt2 > 0 (since 9 > 8), 2 - 2*sqrt2 < 0
        assert_eq!(q((3, 1), (-2, 1)).signum(), 1);
        assert_eq!(q((2, 1), (-2, 1)).signum(), -1);
        assert_eq!(q((-3, 1), (2, 1)).signum(), -1);
        assert_eq!(q((-2, 1), (2, 1)).signum(), 1);
        assert_eq!(QSqrt2::zero().signum(), 0);
    }

    #[test]
    fn ordering_matches_f64() {
        let vals = [
            q((0, 1), (0, 1)),
            q((1, 2), (0, 1)),
            q((0, 1), (1, 2)),
            q((3, 1), (-2, 1)),
            q((-1, 1), (1, 1)),
        ];
        for x in &vals {
            for y in &vals {
                let exact = x.cmp(y);
                let approx = x.to_f64().partial_cmp(&y.to_f64()).unwrap();
                assert_eq!(exact, approx, "{} vs {}", x, y);
            }
        }
    }

    #[test]
    fn display_forms() {
        assert_eq!(QSqrt2::from_int(3).to_string(), "3");
        assert_eq!(QSqrt2::ratio(3, 2).to_string(), "(3/2)");
        assert_eq!(QSqrt2::sqrt2_ratio(3, 2).to_string(), "(3/2)*sqrt2");
        assert_eq!(q((1, 1), (2, 1)).to_string(), "(1 + 2*sqrt2)");
        assert_eq!(q((1, 1), (-2, 1)).to_string(), "(1 - 2*sqrt2)");
    }
}
