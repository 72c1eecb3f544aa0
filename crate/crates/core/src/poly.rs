//! Multivariate polynomials with exact coefficients.
//!
//! Monomials are exponent vectors over at most [`MAX_VARS`] variables; the
//! chart decides how many are in play and what they are called. Arithmetic is
//! exact: `(p+q)-q == p` bit for bit.

use crate::scalar::{CScalar, Scalar};
use std::collections::BTreeMap;
use std::fmt;

pub const MAX_VARS: usize = 7;

/// Exponent multi-index.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Mono(pub [u8; MAX_VARS]);

impl Mono {
    pub fn one() -> Self {
        Mono([0; MAX_VARS])
    }
    pub fn var(i: usize) -> Self {
        let mut m = [0u8; MAX_VARS];
        m[i] = 1;
        Mono(m)
    }
    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }
    pub fn mul(&self, other: &Mono) -> Mono {
        let mut m = [0u8; MAX_VARS];
        for i in 0..MAX_VARS {
            m[i] = self.0[i] + other.0[i];
        }
        Mono(m)
    }
}

/// Coefficient ring abstraction shared by the exact backends.
pub trait Ring: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn from_scalar(s: &Scalar) -> Self;
}

impl Ring for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn from_scalar(s: &Scalar) -> Self {
        s.clone()
    }
}

impl Ring for CScalar {
    fn zero() -> Self {
        CScalar::zero()
    }
    fn one() -> Self {
        CScalar::one()
    }
    fn add(&self, other: &Self) -> Self {
        self.clone() + other.clone()
    }
    fn sub(&self, other: &Self) -> Self {
        self.clone() - other.clone()
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn is_zero(&self) -> bool {
        CScalar::is_zero(self)
    }
    fn from_scalar(s: &Scalar) -> Self {
        CScalar::from_real(s.clone())
    }
}

/// Sparse multivariate polynomial over `S`.
#[derive(Clone, PartialEq)]
pub struct Poly<S: Ring> {
    pub terms: BTreeMap<Mono, S>,
}

impl<S: Ring> Poly<S> {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }
    pub fn constant(c: S) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(Mono::one(), c);
        }
        p
    }
    pub fn one() -> Self {
        Poly::constant(S::one())
    }
    pub fn var(i: usize) -> Self {
        let mut p = Poly::zero();
        p.terms.insert(Mono::var(i), S::one());
        p
    }
    pub fn monomial(m: Mono, c: S) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }
    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, m: Mono, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(e) => {
                let s = e.add(&c);
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *e = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.neg());
        }
        out
    }
    pub fn neg(&self) -> Self {
        Poly { terms: self.terms.iter().map(|(m, c)| (*m, c.neg())).collect() }
    }
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1.mul(c2));
            }
        }
        out
    }
    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, v)| (*m, v.mul(c))).collect() }
    }
    pub fn mul_mono(&self, m: &Mono) -> Self {
        Poly { terms: self.terms.iter().map(|(k, v)| (k.mul(m), v.clone())).collect() }
    }

    /// Partial derivative with respect to variable `i`.
    pub fn deriv(&self, i: usize) -> Self {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut m2 = *m;
            m2.0[i] = e - 1;
            out.add_term(m2, c.mul(&S::from_scalar(&Scalar::from_int(e as i64))));
        }
        out
    }

    /// Evaluate at a point with coordinates in the base ring.
    pub fn eval(&self, x: &[S]) -> S {
        let mut acc = S::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t = t.mul(&x[i]);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Substitute polynomials for variables (used for pullbacks).
    pub fn substitute(&self, subs: &[Poly<S>]) -> Poly<S> {
        let mut acc = Poly::zero();
        for (m, c) in &self.terms {
            let mut t = Poly::constant(c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t = t.mul(&subs[i]);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }
}

impl Poly<Scalar> {
    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            let mut t = c.to_f64();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= x[i].powi(e as i32);
                }
            }
            acc += t;
        }
        acc
    }
    pub fn complexify(&self) -> Poly<CScalar> {
        Poly { terms: self.terms.iter().map(|(m, c)| (*m, CScalar::from_real(c.clone()))).collect() }
    }
}

impl Poly<CScalar> {
    /// Complex conjugation of the coefficients.
    pub fn conj(&self) -> Poly<CScalar> {
        Poly { terms: self.terms.iter().map(|(m, c)| (*m, c.conj())).collect() }
    }
    pub fn real_part(&self) -> Poly<Scalar> {
        let mut p = Poly::zero();
        for (m, c) in &self.terms {
            p.add_term(*m, c.re.clone());
        }
        p
    }
    pub fn imag_part(&self) -> Poly<Scalar> {
        let mut p = Poly::zero();
        for (m, c) in &self.terms {
            p.add_term(*m, c.im.clone());
        }
        p
    }
}

impl<S: Ring> fmt::Debug for Poly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:?})", c)?;
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    write!(f, "*v{}^{}", i, e)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn exact_roundtrip() {
        let p = Poly::<Scalar>::var(0).mul(&Poly::var(1)).add(&Poly::constant(Scalar::ratio(2, 3)));
        let q = Poly::<Scalar>::var(2).mul(&Poly::var(2));
        assert_eq!(p.add(&q).sub(&q), p);
    }

    #[test]
    fn derivative_leibniz() {
        let p = Poly::<Scalar>::var(0).mul(&Poly::var(0)).mul(&Poly::var(1));
        let q = Poly::<Scalar>::var(1).add(&Poly::constant(Scalar::from_int(3)));
        let lhs = p.mul(&q).deriv(1);
        let rhs = p.deriv(1).mul(&q).add(&p.mul(&q.deriv(1)));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn eval_matches_substitute() {
        let p = Poly::<Scalar>::var(0).mul(&Poly::var(3)).add(&Poly::var(2));
        let pt = vec![
            Scalar::ratio(1, 2),
            Scalar::zero(),
            Scalar::from_rat(rat(-3, 7)),
            Scalar::sqrt2(),
            Scalar::zero(),
            Scalar::zero(),
            Scalar::zero(),
        ];
        let v = p.eval(&pt);
        let expected = &(&Scalar::ratio(1, 2) * &Scalar::sqrt2()) + &Scalar::from_rat(rat(-3, 7));
        assert_eq!(v, expected);
    }
}
