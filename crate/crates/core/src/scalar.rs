//! Exact scalars: the quadratic field Q(√2) and its complexification Q(i,√2).
//!
//! All identity checks in the exact backend reduce to arithmetic in these
//! fields. `Scalar` is ordered (sign determined exactly), which is what the
//! positive-(semi)definiteness certificates rely on.

use num_bigint::BigInt;
#[allow(unused_imports)]
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Element a + b√2 of Q(√2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    pub a: Rat,
    pub b: Rat,
}

impl Scalar {
    pub fn new(a: Rat, b: Rat) -> Self {
        Scalar { a, b }
    }
    pub fn zero() -> Self {
        Scalar { a: Rat::zero(), b: Rat::zero() }
    }
    pub fn one() -> Self {
        Scalar { a: Rat::one(), b: Rat::zero() }
    }
    pub fn from_int(n: i64) -> Self {
        Scalar { a: Rat::from(BigInt::from(n)), b: Rat::zero() }
    }
    pub fn from_rat(r: Rat) -> Self {
        Scalar { a: r, b: Rat::zero() }
    }
    pub fn ratio(n: i64, d: i64) -> Self {
        Scalar { a: rat(n, d), b: Rat::zero() }
    }
    pub fn sqrt2() -> Self {
        Scalar { a: Rat::zero(), b: Rat::one() }
    }
    /// 1/√2 = √2/2.
    pub fn inv_sqrt2() -> Self {
        Scalar { a: Rat::zero(), b: rat(1, 2) }
    }
    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Exact sign of a + b√2.
    pub fn sign(&self) -> i32 {
        let sa = sign_rat(&self.a);
        let sb = sign_rat(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 {
            return sb;
        }
        if sa == sb {
            return sa;
        }
        // a and b have opposite signs: compare a^2 with 2 b^2.
        let a2 = &self.a * &self.a;
        let b2 = &self.b * &self.b * Rat::from(BigInt::from(2));
        match a2.cmp(&b2) {
            std::cmp::Ordering::Greater => sa,
            std::cmp::Ordering::Less => sb,
            std::cmp::Ordering::Equal => 0,
        }
    }
    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }
    pub fn is_negative(&self) -> bool {
        self.sign() < 0
    }
    pub fn abs(&self) -> Scalar {
        if self.is_negative() { -self.clone() } else { self.clone() }
    }

    pub fn inv(&self) -> Scalar {
        // 1/(a+b√2) = (a-b√2)/(a²-2b²)
        assert!(!self.is_zero(), "division by zero in Q(sqrt2)");
        let den = &self.a * &self.a - Rat::from(BigInt::from(2)) * &self.b * &self.b;
        Scalar { a: &self.a / &den, b: -&self.b / &den }
    }

    /// Exact square root in Q(√2) when it exists.
    pub fn sqrt(&self) -> Option<Scalar> {
        if self.is_zero() {
            return Some(Scalar::zero());
        }
        if self.sign() < 0 {
            return None;
        }
        // (c + d√2)² = c² + 2d² + 2cd√2 = a + b√2.
        if self.b.is_zero() {
            // c d = 0. Either d = 0, c² = a, or c = 0, 2d² = a.
            if let Some(c) = rat_sqrt(&self.a) {
                return Some(Scalar::from_rat(c));
            }
            if let Some(d) = rat_sqrt(&(&self.a / Rat::from(BigInt::from(2)))) {
                return Some(Scalar::new(Rat::zero(), d));
            }
            return None;
        }
        // c,d both nonzero: c² and 2d² are roots of t² - a t + b²/2 = 0.
        let two = Rat::from(BigInt::from(2));
        let disc = &self.a * &self.a - &two * &self.b * &self.b;
        let sq = rat_sqrt(&disc)?;
        for root in [(&self.a + &sq) / &two, (&self.a - &sq) / &two] {
            if let Some(c) = rat_sqrt(&root) {
                if c.is_zero() {
                    continue;
                }
                let d = &self.b / (&two * &c);
                let cand = Scalar::new(c, d);
                if &(&cand * &cand) == self && cand.sign() >= 0 {
                    return Some(cand);
                }
                let cand = -cand;
                if &(&cand * &cand) == self && cand.sign() >= 0 {
                    return Some(cand);
                }
            }
        }
        None
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64().unwrap_or(f64::NAN) + self.b.to_f64().unwrap_or(f64::NAN) * std::f64::consts::SQRT_2
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

/// Exact square root of a nonnegative rational, if rational.
pub fn rat_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    if r.is_zero() {
        return Some(Rat::zero());
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rat::new(n, d))
    } else {
        None
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $meth:ident, $op:tt) => {
        impl $trait for Scalar {
            type Output = Scalar;
            fn $meth(self, rhs: Scalar) -> Scalar {
                (&self).$meth(&rhs)
            }
        }
        impl<'a> $trait<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $meth(self, rhs: &'a Scalar) -> Scalar {
                Scalar { a: &self.a $op &rhs.a, b: &self.b $op &rhs.b }
            }
        }
    };
}
scalar_binop!(Add, add, +);
scalar_binop!(Sub, sub, -);

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        (&self).mul(&rhs)
    }
}
impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        if self.is_zero() || rhs.is_zero() {
            return Scalar::zero();
        }
        let two = Rat::from(BigInt::from(2));
        Scalar {
            a: &self.a * &rhs.a + &two * &self.b * &rhs.b,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
        }
    }
}
impl Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        &self * &rhs.inv()
    }
}
impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &'a Scalar) -> Scalar {
        self * &rhs.inv()
    }
}
impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { a: -self.a, b: -self.b }
    }
}
impl<'a> Neg for &'a Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { a: -&self.a, b: -&self.b }
    }
}
impl AddAssign for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        self.a += rhs.a;
        self.b += rhs.b;
    }
}
impl SubAssign for Scalar {
    fn sub_assign(&mut self, rhs: Scalar) {
        self.a -= rhs.a;
        self.b -= rhs.b;
    }
}
impl MulAssign for Scalar {
    fn mul_assign(&mut self, rhs: Scalar) {
        *self = &*self * &rhs;
    }
}

fn fmt_scalar(s: &Scalar, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if s.b.is_zero() {
        write!(f, "{}", s.a)
    } else if s.a.is_zero() {
        write!(f, "{}*sqrt2", s.b)
    } else {
        write!(f, "{}+{}*sqrt2", s.a, s.b)
    }
}
impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_scalar(self, f)
    }
}
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_scalar(self, f)
    }
}

/// Element x + y·i with x, y in Q(√2).
#[derive(Clone, PartialEq, Eq)]
pub struct CScalar {
    pub re: Scalar,
    pub im: Scalar,
}

impl CScalar {
    pub fn new(re: Scalar, im: Scalar) -> Self {
        CScalar { re, im }
    }
    pub fn zero() -> Self {
        CScalar { re: Scalar::zero(), im: Scalar::zero() }
    }
    pub fn one() -> Self {
        CScalar { re: Scalar::one(), im: Scalar::zero() }
    }
    pub fn i() -> Self {
        CScalar { re: Scalar::zero(), im: Scalar::one() }
    }
    pub fn from_real(s: Scalar) -> Self {
        CScalar { re: s, im: Scalar::zero() }
    }
    pub fn from_int(n: i64) -> Self {
        CScalar::from_real(Scalar::from_int(n))
    }
    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    pub fn conj(&self) -> CScalar {
        CScalar { re: self.re.clone(), im: -self.im.clone() }
    }
    /// |z|² as an element of Q(√2).
    pub fn norm_sq(&self) -> Scalar {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }
    pub fn inv(&self) -> CScalar {
        let n = self.norm_sq().inv();
        CScalar { re: &self.re * &n, im: &(-self.im.clone()) * &n }
    }
    pub fn to_c64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl Add for CScalar {
    type Output = CScalar;
    fn add(self, r: CScalar) -> CScalar {
        CScalar { re: self.re + r.re, im: self.im + r.im }
    }
}
impl Sub for CScalar {
    type Output = CScalar;
    fn sub(self, r: CScalar) -> CScalar {
        CScalar { re: self.re - r.re, im: self.im - r.im }
    }
}
impl Mul for CScalar {
    type Output = CScalar;
    fn mul(self, r: CScalar) -> CScalar {
        (&self).mul(&r)
    }
}
impl<'a> Mul<&'a CScalar> for &'a CScalar {
    type Output = CScalar;
    fn mul(self, r: &'a CScalar) -> CScalar {
        CScalar {
            re: &(&self.re * &r.re) - &(&self.im * &r.im),
            im: &(&self.re * &r.im) + &(&self.im * &r.re),
        }
    }
}
impl Neg for CScalar {
    type Output = CScalar;
    fn neg(self) -> CScalar {
        CScalar { re: -self.re, im: -self.im }
    }
}
impl AddAssign for CScalar {
    fn add_assign(&mut self, r: CScalar) {
        self.re += r.re;
        self.im += r.im;
    }
}
impl SubAssign for CScalar {
    fn sub_assign(&mut self, r: CScalar) {
        self.re -= r.re;
        self.im -= r.im;
    }
}
impl Div for CScalar {
    type Output = CScalar;
    fn div(self, r: CScalar) -> CScalar {
        &self * &r.inv()
    }
}

impl fmt::Debug for CScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})+({})i", self.re, self.im)
    }
}

/// Serialize an exact rational as "num/den".
pub fn rat_to_string(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn rat_from_string(s: &str) -> Option<Rat> {
    let mut it = s.splitn(2, '/');
    let n: BigInt = it.next()?.trim().parse().ok()?;
    let d: BigInt = match it.next() {
        Some(d) => d.trim().parse().ok()?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return None;
    }
    Some(Rat::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_axioms_spot() {
        let x = Scalar::new(rat(3, 4), rat(-2, 5));
        let y = Scalar::new(rat(-1, 3), rat(7, 2));
        let z = &(&x * &y) * &x.inv();
        assert_eq!(z, y);
        assert!((&x - &x).is_zero());
    }

    #[test]
    fn sign_mixed() {
        // 3 - 2√2 > 0 since 9 > 8
        assert_eq!(Scalar::new(rat(3, 1), rat(-2, 1)).sign(), 1);
        // 1 - √2 < 0
        assert_eq!(Scalar::new(rat(1, 1), rat(-1, 1)).sign(), -1);
        // 2 - √2·√2 = 0 handled through exact arithmetic
        let s = &Scalar::from_int(2) - &(&Scalar::sqrt2() * &Scalar::sqrt2());
        assert_eq!(s.sign(), 0);
    }

    #[test]
    fn sqrt_in_field() {
        // √(1/2) = √2/2
        let h = Scalar::ratio(1, 2).sqrt().unwrap();
        assert_eq!(h, Scalar::inv_sqrt2());
        // 3 + 2√2 = (1+√2)²
        let s = Scalar::new(rat(3, 1), rat(2, 1)).sqrt().unwrap();
        assert_eq!(s, Scalar::new(rat(1, 1), rat(1, 1)));
        // 1 + 2√2 is not a square in Q(√2)
        assert!(Scalar::new(rat(1, 1), rat(2, 1)).sqrt().is_none());
    }

    #[test]
    fn complex_ops() {
        let z = CScalar::new(Scalar::from_int(1), Scalar::sqrt2());
        let w = &z * &z.conj();
        assert_eq!(w.re, Scalar::from_int(3));
        assert!(w.im.is_zero());
    }
}
