//! Exterior algebra and exterior calculus over coordinate charts.
//!
//! Forms are stored as maps from strictly increasing index tuples to
//! coefficients, with zero coefficients never stored. The coefficient type is
//! abstract: exact polynomials over Q(√2) or Q(i,√2), or sampled numeric
//! fields. Chart tags keep incompatible forms apart.

use crate::error::PentaError;
use crate::numeric::NumericField;
use crate::poly::Poly;
use crate::scalar::{CScalar, Scalar};
use std::collections::BTreeMap;
use std::fmt;

/// Which coordinate system a form lives on.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Chart {
    /// A 5-dimensional chart box.
    R5,
    /// Ambient R⁶; used for forms on C³ before restriction.
    R6,
    /// Ambient R⁶ coordinates (x1,y1,x2,y2,x3,y3) restricted to S⁵.
    S5Ambient,
    /// Complex ambient coordinates (z1,z2,z3,z̄1,z̄2,z̄3) restricted to S⁵,
    /// with Wirtinger calculus; used by the spectral engine.
    ZAmbient,
    /// The cone (0,∞) × S⁵: variable 0 is r, variables 1..=6 are ambient.
    Cone,
}

impl Chart {
    pub fn nvars(&self) -> usize {
        match self {
            Chart::R5 => 5,
            Chart::R6 | Chart::S5Ambient | Chart::ZAmbient => 6,
            Chart::Cone => 7,
        }
    }
    /// Top degree of a differential form representative on this chart.
    pub fn top_degree(&self) -> u8 {
        self.nvars() as u8
    }
}

/// Strictly increasing tuple of coframe indices.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Idx {
    pub len: u8,
    pub ix: [u8; 7],
}

impl Idx {
    pub fn empty() -> Self {
        Idx { len: 0, ix: [0; 7] }
    }
    pub fn single(i: u8) -> Self {
        let mut ix = [0u8; 7];
        ix[0] = i;
        Idx { len: 1, ix }
    }
    pub fn from_slice(s: &[u8]) -> Self {
        debug_assert!(s.windows(2).all(|w| w[0] < w[1]), "indices must increase");
        let mut ix = [0u8; 7];
        ix[..s.len()].copy_from_slice(s);
        Idx { len: s.len() as u8, ix }
    }
    pub fn slice(&self) -> &[u8] {
        &self.ix[..self.len as usize]
    }
    pub fn contains(&self, i: u8) -> bool {
        self.slice().contains(&i)
    }
    /// Merge two increasing tuples; returns (sign, merged) or None on a
    /// repeated index.
    pub fn merge(&self, other: &Idx) -> Option<(i32, Idx)> {
        let a = self.slice();
        let b = other.slice();
        let mut out = [0u8; 7];
        let (mut i, mut j, mut k) = (0usize, 0usize, 0usize);
        let mut sign = 1i32;
        while i < a.len() && j < b.len() {
            if a[i] == b[j] {
                return None;
            }
            if a[i] < b[j] {
                out[k] = a[i];
                i += 1;
            } else {
                // b[j] jumps over the remaining entries of a.
                if (a.len() - i) % 2 == 1 {
                    sign = -sign;
                }
                out[k] = b[j];
                j += 1;
            }
            k += 1;
        }
        while i < a.len() {
            out[k] = a[i];
            i += 1;
            k += 1;
        }
        while j < b.len() {
            out[k] = b[j];
            j += 1;
            k += 1;
        }
        Some((sign, Idx { len: k as u8, ix: out }))
    }
    /// Remove index at position `pos`.
    fn remove_at(&self, pos: usize) -> Idx {
        let mut ix = [0u8; 7];
        let s = self.slice();
        let mut k = 0;
        for (p, &v) in s.iter().enumerate() {
            if p != pos {
                ix[k] = v;
                k += 1;
            }
        }
        Idx { len: k as u8, ix }
    }
}

impl fmt::Debug for Idx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e")?;
        for v in self.slice() {
            write!(f, "{}", v + 1)?;
        }
        Ok(())
    }
}

/// Coefficient abstraction: what the exterior calculus needs from a backend.
pub trait FormCoeff: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn scale(&self, s: &Scalar) -> Self;
    fn deriv(&self, var: usize) -> Self;
}

impl FormCoeff for Poly<Scalar> {
    fn zero() -> Self {
        Poly::zero()
    }
    fn add(&self, o: &Self) -> Self {
        Poly::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Poly::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Poly::mul(self, o)
    }
    fn neg(&self) -> Self {
        Poly::neg(self)
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn scale(&self, s: &Scalar) -> Self {
        Poly::scale(self, s)
    }
    fn deriv(&self, var: usize) -> Self {
        Poly::deriv(self, var)
    }
}

impl FormCoeff for Poly<CScalar> {
    fn zero() -> Self {
        Poly::zero()
    }
    fn add(&self, o: &Self) -> Self {
        Poly::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Poly::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Poly::mul(self, o)
    }
    fn neg(&self) -> Self {
        Poly::neg(self)
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn scale(&self, s: &Scalar) -> Self {
        Poly::scale(self, &CScalar::from_real(s.clone()))
    }
    fn deriv(&self, var: usize) -> Self {
        Poly::deriv(self, var)
    }
}

impl FormCoeff for NumericField {
    fn zero() -> Self {
        panic!("numeric zero needs a grid; use ExtForm::zero_on with an explicit spec")
    }
    fn add(&self, o: &Self) -> Self {
        self.map2(o, |a, b| a + b)
    }
    fn sub(&self, o: &Self) -> Self {
        self.map2(o, |a, b| a - b)
    }
    fn mul(&self, o: &Self) -> Self {
        self.map2(o, |a, b| a * b)
    }
    fn neg(&self) -> Self {
        self.map(|a| -a)
    }
    fn is_zero(&self) -> bool {
        self.max_abs() == 0.0
    }
    fn scale(&self, s: &Scalar) -> Self {
        let c = s.to_f64();
        self.map(|a| c * a)
    }
    fn deriv(&self, var: usize) -> Self {
        NumericField::deriv(self, var)
    }
}

/// A differential form with coefficients in `C`.
#[derive(Clone, PartialEq)]
pub struct ExtForm<C: FormCoeff> {
    pub chart: Chart,
    pub degree: u8,
    pub terms: BTreeMap<Idx, C>,
}

pub type Form = ExtForm<Poly<Scalar>>;
pub type CForm = ExtForm<Poly<CScalar>>;

impl<C: FormCoeff> ExtForm<C> {
    pub fn zero(chart: Chart, degree: u8) -> Self {
        ExtForm { chart, degree, terms: BTreeMap::new() }
    }
    pub fn from_terms(chart: Chart, degree: u8, terms: Vec<(Idx, C)>) -> Self {
        let mut f = ExtForm::zero(chart, degree);
        for (i, c) in terms {
            f.add_term(i, c);
        }
        f
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn add_term(&mut self, i: Idx, c: C) {
        debug_assert_eq!(i.len, self.degree, "index arity must match degree");
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&i) {
            Some(e) => {
                let s = e.add(&c);
                if s.is_zero() {
                    self.terms.remove(&i);
                } else {
                    *e = s;
                }
            }
            None => {
                self.terms.insert(i, c);
            }
        }
    }
    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.chart, o.chart);
        assert_eq!(self.degree, o.degree);
        let mut out = self.clone();
        for (i, c) in &o.terms {
            out.add_term(*i, c.clone());
        }
        out
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    pub fn neg(&self) -> Self {
        ExtForm {
            chart: self.chart,
            degree: self.degree,
            terms: self.terms.iter().map(|(i, c)| (*i, c.neg())).collect(),
        }
    }
    pub fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return ExtForm::zero(self.chart, self.degree);
        }
        ExtForm {
            chart: self.chart,
            degree: self.degree,
            terms: self.terms.iter().map(|(i, c)| (*i, c.scale(s))).collect(),
        }
    }
    pub fn scale_coeff(&self, f: &C) -> Self {
        let mut out = ExtForm::zero(self.chart, self.degree);
        for (i, c) in &self.terms {
            out.add_term(*i, c.mul(f));
        }
        out
    }

    /// Wedge product, graded anticommutative.
    pub fn wedge(&self, o: &Self) -> Result<Self, PentaError> {
        if self.chart != o.chart {
            return Err(PentaError::ChartMismatch(format!("{:?} vs {:?}", self.chart, o.chart)));
        }
        let deg = self.degree + o.degree;
        if deg > self.chart.top_degree() {
            return Err(PentaError::DegreeOverflow(self.degree, o.degree));
        }
        let mut out = ExtForm::zero(self.chart, deg);
        for (i1, c1) in &self.terms {
            for (i2, c2) in &o.terms {
                if let Some((sign, idx)) = i1.merge(i2) {
                    let mut c = c1.mul(c2);
                    if sign < 0 {
                        c = c.neg();
                    }
                    out.add_term(idx, c);
                }
            }
        }
        Ok(out)
    }

    /// Interior product with a vector field (degree -1 antiderivation).
    pub fn contract(&self, x: &VecField<C>) -> Result<Self, PentaError> {
        if self.chart != x.chart {
            return Err(PentaError::ChartMismatch("contract across charts".into()));
        }
        if self.degree == 0 {
            return Err(PentaError::InvalidInput("interior product of a 0-form".into()));
        }
        let mut out = ExtForm::zero(self.chart, self.degree - 1);
        for (idx, c) in &self.terms {
            for (pos, &i) in idx.slice().iter().enumerate() {
                let comp = &x.comps[i as usize];
                if comp.is_zero() {
                    continue;
                }
                let mut v = c.mul(comp);
                if pos % 2 == 1 {
                    v = v.neg();
                }
                out.add_term(idx.remove_at(pos), v);
            }
        }
        Ok(out)
    }

    /// Exterior derivative.
    pub fn ext_d(&self) -> Result<Self, PentaError> {
        if self.degree >= self.chart.top_degree() {
            return Ok(ExtForm::zero(self.chart, self.degree + 1));
        }
        let n = self.chart.nvars();
        let mut out = ExtForm::zero(self.chart, self.degree + 1);
        for (idx, c) in &self.terms {
            for v in 0..n {
                let dv = c.deriv(v);
                if dv.is_zero() {
                    continue;
                }
                if let Some((sign, merged)) = Idx::single(v as u8).merge(idx) {
                    out.add_term(merged, if sign < 0 { dv.neg() } else { dv });
                }
            }
        }
        Ok(out)
    }

    /// Cartan formula Lie derivative along a vector field.
    pub fn lie(&self, x: &VecField<C>) -> Result<Self, PentaError> {
        let a = self.ext_d()?.contract(x)?;
        if self.degree == 0 {
            return Ok(a);
        }
        Ok(a.add(&self.contract(x)?.ext_d()?))
    }

    pub fn map_coeffs<D: FormCoeff>(&self, chart: Chart, f: impl Fn(&C) -> D) -> ExtForm<D> {
        let mut out = ExtForm::zero(chart, self.degree);
        for (i, c) in &self.terms {
            out.add_term(*i, f(c));
        }
        out
    }
}

impl Form {
    /// Pull back along a map given by target coordinates as polynomials of
    /// the source coordinates.
    pub fn pullback(&self, source: Chart, comps: &[Poly<Scalar>]) -> Result<Form, PentaError> {
        assert_eq!(comps.len(), self.chart.nvars());
        if self.degree > source.top_degree() {
            return Ok(Form::zero(source, self.degree));
        }
        // differentials of the map components
        let diffs: Vec<Form> = comps
            .iter()
            .map(|p| {
                let mut f = Form::zero(source, 1);
                for v in 0..source.nvars() {
                    f.add_term(Idx::single(v as u8), p.deriv(v));
                }
                f
            })
            .collect();
        let mut out = Form::zero(source, self.degree);
        for (idx, c) in &self.terms {
            let mut acc = Form::from_terms(source, 0, vec![(Idx::empty(), c.substitute(comps))]);
            for &i in idx.slice() {
                acc = acc.wedge(&diffs[i as usize])?;
            }
            out = out.add(&acc);
        }
        Ok(out)
    }

    pub fn complexify(&self) -> CForm {
        self.map_coeffs(self.chart, |c| c.complexify())
    }

    pub fn eval_at(&self, x: &[Scalar]) -> BTreeMap<Idx, Scalar> {
        self.terms
            .iter()
            .filter_map(|(i, c)| {
                let v = c.eval(x);
                if v.is_zero() {
                    None
                } else {
                    Some((*i, v))
                }
            })
            .collect()
    }
}

impl CForm {
    pub fn conj(&self) -> CForm {
        self.map_coeffs(self.chart, |c| c.conj())
    }
    pub fn real_part(&self) -> Form {
        let mut out = Form::zero(self.chart, self.degree);
        for (i, c) in &self.terms {
            out.add_term(*i, c.real_part());
        }
        out
    }
    pub fn imag_part(&self) -> Form {
        let mut out = Form::zero(self.chart, self.degree);
        for (i, c) in &self.terms {
            out.add_term(*i, c.imag_part());
        }
        out
    }
    pub fn scale_c(&self, s: &CScalar) -> CForm {
        let p = Poly::constant(s.clone());
        self.scale_coeff(&p)
    }
}

impl<C: FormCoeff> fmt::Debug for ExtForm<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "[{:?}]({:?})", i, c)?;
        }
        Ok(())
    }
}

/// A vector field: one coefficient per coordinate direction.
#[derive(Clone, Debug)]
pub struct VecField<C: FormCoeff> {
    pub chart: Chart,
    pub comps: Vec<C>,
}

pub type Vf = VecField<Poly<Scalar>>;

impl<C: FormCoeff> VecField<C> {
    pub fn new(chart: Chart, comps: Vec<C>) -> Self {
        assert_eq!(comps.len(), chart.nvars());
        VecField { chart, comps }
    }
    pub fn add(&self, o: &Self) -> Self {
        VecField {
            chart: self.chart,
            comps: self.comps.iter().zip(&o.comps).map(|(a, b)| a.add(b)).collect(),
        }
    }
    pub fn scale(&self, s: &Scalar) -> Self {
        VecField { chart: self.chart, comps: self.comps.iter().map(|c| c.scale(s)).collect() }
    }
}

/// Convenience constructors for exact forms.
pub fn basis_form(chart: Chart, indices: &[u8]) -> Form {
    Form::from_terms(chart, indices.len() as u8, vec![(Idx::from_slice(indices), Poly::one())])
}

pub fn coord_vec(chart: Chart, i: usize) -> Vf {
    let mut comps = vec![Poly::zero(); chart.nvars()];
    comps[i] = Poly::one();
    VecField::new(chart, comps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    #[test]
    fn wedge_sign_single_transposition() {
        // e13 ∧ e24 = -e1234
        let a = basis_form(Chart::R5, &[0, 2]);
        let b = basis_form(Chart::R5, &[1, 3]);
        let w = a.wedge(&b).unwrap();
        let mut expect = Form::zero(Chart::R5, 4);
        expect.add_term(Idx::from_slice(&[0, 1, 2, 3]), Poly::constant(Scalar::from_int(-1)));
        assert_eq!(w, expect);
    }

    #[test]
    fn wedge_alpha_squared() {
        // (e13 - e24)^2 = 2 e1234, so θ∧α² = 2 e12345 with θ = e5
        let alpha = basis_form(Chart::R5, &[0, 2]).sub(&basis_form(Chart::R5, &[1, 3]));
        let a2 = alpha.wedge(&alpha).unwrap();
        let mut expect = Form::zero(Chart::R5, 4);
        expect.add_term(Idx::from_slice(&[0, 1, 2, 3]), Poly::constant(Scalar::from_int(2)));
        assert_eq!(a2, expect);
        let theta = basis_form(Chart::R5, &[4]);
        let top = theta.wedge(&a2).unwrap();
        let c = top.terms.get(&Idx::from_slice(&[0, 1, 2, 3, 4])).unwrap();
        assert_eq!(c, &Poly::constant(Scalar::from_int(2)));
    }

    #[test]
    fn wedge_degree_overflow_errors() {
        let a = basis_form(Chart::R5, &[0, 1, 2]);
        let b = basis_form(Chart::R5, &[3, 4]);
        assert!(a.wedge(&b).is_ok());
        let c = basis_form(Chart::R5, &[0]);
        let top = a.wedge(&b).unwrap();
        assert!(matches!(top.wedge(&c), Err(PentaError::DegreeOverflow(_, _))));
    }

    #[test]
    fn contract_model_cases() {
        // e5 ⌟ (e5 ∧ (e13 - e24)) = e13 - e24
        let alpha = basis_form(Chart::R5, &[0, 2]).sub(&basis_form(Chart::R5, &[1, 3]));
        let theta = basis_form(Chart::R5, &[4]);
        let psi = theta.wedge(&alpha).unwrap();
        let v = coord_vec(Chart::R5, 4);
        assert_eq!(psi.contract(&v).unwrap(), alpha);
        // e1 ⌟ e13 = e3
        let w = basis_form(Chart::R5, &[0, 2]).contract(&coord_vec(Chart::R5, 0)).unwrap();
        assert_eq!(w, basis_form(Chart::R5, &[2]));
        // double contraction vanishes
        let psi2 = basis_form(Chart::R5, &[0, 1, 2]);
        let once = psi2.contract(&coord_vec(Chart::R5, 1)).unwrap();
        assert!(once.contract(&coord_vec(Chart::R5, 1)).unwrap().is_zero());
    }

    #[test]
    fn d_of_x1_e2() {
        // d(x1 e2) = e12
        let mut f = Form::zero(Chart::R5, 1);
        f.add_term(Idx::single(1), Poly::var(0));
        let df = f.ext_d().unwrap();
        assert_eq!(df, basis_form(Chart::R5, &[0, 1]));
    }

    #[test]
    fn d_squared_zero_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let mut f = Form::zero(Chart::R5, 1);
            for i in 0..5u8 {
                let mut p = Poly::zero();
                for _ in 0..4 {
                    let mut m = crate::poly::Mono::one();
                    for _ in 0..rng.gen_range(0..3) {
                        m.0[rng.gen_range(0..5)] += 1;
                    }
                    p.add_term(m, Scalar::from_int(rng.gen_range(-5..6)));
                }
                f.add_term(Idx::single(i), p);
            }
            let dd = f.ext_d().unwrap().ext_d().unwrap();
            assert!(dd.is_zero());
        }
    }
}
