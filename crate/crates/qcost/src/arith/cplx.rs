use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::QSqrt2;

/// Complex number over Q(sqrt2); enough to express every gate entry in the
/// Clifford+T set exactly (e.g. the T phase (1+i)/sqrt2).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CplxQ {
    pub re: QSqrt2,
    pub im: QSqrt2,
}

impl CplxQ {
    pub fn new(re: QSqrt2, im: QSqrt2) -> Self {
        CplxQ { re, im }
    }

    pub fn zero() -> Self {
        CplxQ { re: QSqrt2::zero(), im: QSqrt2::zero() }
    }

    pub fn one() -> Self {
        CplxQ { re: QSqrt2::one(), im: QSqrt2::zero() }
    }

    pub fn i() -> Self {
        CplxQ { re: QSqrt2::zero(), im: QSqrt2::one() }
    }

    pub fn real(re: QSqrt2) -> Self {
        CplxQ { re, im: QSqrt2::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        CplxQ { re: self.re.clone(), im: -&self.im }
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

impl Add for &CplxQ {
    type Output = CplxQ;
    fn add(self, rhs: &CplxQ) -> CplxQ {
        CplxQ { re: self.re.clone() + &rhs.re, im: self.im.clone() + &rhs.im }
    }
}

impl Sub for &CplxQ {
    type Output = CplxQ;
    fn sub(self, rhs: &CplxQ) -> CplxQ {
        CplxQ {
            re: self.re.clone() - rhs.re.clone(),
            im: self.im.clone() - rhs.im.clone(),
        }
    }
}

impl Mul for &CplxQ {
    type Output = CplxQ;
    fn mul(self, rhs: &CplxQ) -> CplxQ {
        CplxQ {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for &CplxQ {
    type Output = CplxQ;
    fn neg(self) -> CplxQ {
        CplxQ { re: -&self.re, im: -&self.im }
    }
}

impl fmt::Display for CplxQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else {
            write!(f, "({} + {}i)", self.re, self.im)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t_phase_squares_to_i() {
        // omega = (1+i)/sqrt2, omega^2 = i
        let omega = CplxQ::new(QSqrt2::sqrt2_ratio(1, 2), QSqrt2::sqrt2_ratio(1, 2));
        let sq = &omega * &omega;
        assert_eq!(sq, CplxQ::i());
    }

    #[test]
    fn conj_mul_gives_modulus() {
        let z = CplxQ::new(QSqrt2::ratio(3, 5), QSqrt2::sqrt2_ratio(1, 5));
        let m = &z * &z.conj();
        assert!(m.im.is_zero());
        assert_eq!(m.re, QSqrt2::ratio(9 * 1, 25) + QSqrt2::ratio(2, 25));
    }
}
