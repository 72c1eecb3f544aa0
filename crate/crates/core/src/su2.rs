//! SU(2)-structures on S⁵: contact hyperkähler predicates, Sasaki–Einstein
//! invariants (ρ, Q, L_vρ), cone forms, the deformation-graph algebra on
//! Λ±, and the tangential Cauchy–Riemann fragment on anti-self-dual
//! sections.
//!
//! The exact family here is homogeneous: θ = t·η for a rational constant t,
//! with Reeb v = u/t and metric g_H = 2t·(Euclidean on H). The
//! Sasaki–Einstein member has t = 3 (it is the normalization of 18·ι*Ψ, the
//! pullback of the flat Calabi–Yau form at the cone-compatible scale) and
//! the squashed members t = 3c are contact hyperkähler with Q = 1/c².

use crate::error::PentaError;
use crate::forms::{CForm, Chart, Form, Idx, Vf};
use crate::poly::{Mono, Poly};
use crate::s5;
use crate::scalar::{CScalar, Scalar};
use crate::structure::normalize_ambient;
use serde::Serialize;

pub const ANCHOR_HK: &str = "contact hyperkähler: d_H alpha = d_H beta = 0, wedge-orthonormal triple";
pub const ANCHOR_SE: &str = "SE-equations: L_v alpha = beta, L_v beta = -alpha";
pub const ANCHOR_CONE: &str = "cone forms: dLambda = dOmega = 0, conj(Lambda)^Lambda = 2i Omega^3";
pub const ANCHOR_DEFORM: &str = "deformation graph: (1-mu mu*) pi- d-_{H,mu} = d-_H - mu d+_H";
pub const ANCHOR_DELBAR: &str =
    "delbar_b norm: |db sigma|^2 = 1/4(<sigma,Lv alpha>^2 + <sigma,Lv beta>^2)";

/// An exact SU(2)-structure on S⁵ in the homogeneous family.
#[derive(Clone)]
pub struct AmbientSu2 {
    pub theta: Form,
    pub v: Vf,
    pub omega: Form,
    pub alpha: Form,
    pub beta: Form,
    /// θ = tscale·η
    pub tscale: Scalar,
    /// v = reeb·u
    pub reeb: Scalar,
    /// g_H = gscale·(Euclidean on H); equals 2·tscale
    pub gscale: Scalar,
}

impl AmbientSu2 {
    /// The Sasaki–Einstein structure: normalization of ψ = 18·ι*Ψ with the
    /// conjugate-branch companion β = −v⌟(18·ι*Ψ̂).
    pub fn round() -> Self {
        let psi = s5::psi_ambient().scale(&Scalar::from_int(18));
        let psihat = s5::psihat_ambient().scale(&Scalar::from_int(18));
        let contact = normalize_ambient(&psi, 1).expect("scaled round sphere normalizes");
        let beta = s5::reduce_form(&psihat.contract(&contact.v).unwrap()).neg();
        AmbientSu2 {
            theta: contact.theta,
            v: contact.v,
            omega: contact.omega,
            alpha: contact.alpha,
            beta,
            tscale: Scalar::from_int(3),
            reeb: Scalar::ratio(1, 3),
            gscale: Scalar::from_int(6),
        }
    }

    /// Squashed structure: θ ↦ c·θ, v ↦ v/c, (ω,α,β) ↦ c·(ω,α,β). Contact
    /// hyperkähler for every rational c > 0, SE only at c = 1.
    pub fn squashed(c: &Scalar) -> Self {
        let r = Self::round();
        AmbientSu2 {
            theta: r.theta.scale(c),
            v: r.v.scale(&c.inv()),
            omega: r.omega.scale(c),
            alpha: r.alpha.scale(c),
            beta: r.beta.scale(c),
            tscale: &r.tscale * c,
            reeb: &r.reeb / c,
            gscale: &r.gscale * c,
        }
    }

    /// The same structure with β replaced by −β (the conjugate companion
    /// branch). This flips the chirality of the triple: the round SE branch
    /// has IJ = −K while the conjugate branch keeps the graph-chart
    /// convention IJ = +K that the adapted-connection torsion gauge assumes;
    /// its ρ-invariant is −β, so f = −1 at the round scale.
    pub fn conjugate_branch(&self) -> Self {
        let mut out = self.clone();
        out.beta = self.beta.neg();
        out
    }

    /// Build from a pair of closed 3-forms ψ = θ∧α, ψ̂ = θ∧β in the
    /// homogeneous family (β on the literal branch β = v⌟ψ̂).
    pub fn from_forms(psi: &Form, psihat: &Form) -> Result<Self, PentaError> {
        let contact = normalize_ambient(psi, 1)?;
        let beta = s5::reduce_form(&psihat.contract(&contact.v).unwrap());
        let tscale = form_ratio(&contact.theta, &s5::eta()).ok_or_else(|| {
            PentaError::InvalidInput("structure is not in the homogeneous family of the exact backend".into())
        })?;
        Ok(AmbientSu2 {
            theta: contact.theta,
            v: contact.v,
            omega: contact.omega,
            alpha: contact.alpha,
            beta,
            reeb: tscale.inv(),
            gscale: &Scalar::from_int(2) * &tscale,
            tscale,
        })
    }

    pub fn lie_v(&self, a: &Form) -> Form {
        s5::reduce_form(&a.lie(&s5::u_field()).unwrap()).scale(&self.reeb)
    }

    /// ρ = L_v α.
    pub fn rho(&self) -> Form {
        self.lie_v(&self.alpha)
    }

    /// Pointwise g_H fiber product of 2-form sections (polynomial).
    pub fn fiber_g2(&self, a: &Form, b: &Form) -> Poly<Scalar> {
        s5::fiber_e(a, b).scale(&(&self.gscale * &self.gscale).inv())
    }

    /// Wedge pairing σ.τ = σ∧τ/ω² = fiber_e(σ, *τ)/(2·gscale²).
    pub fn dot(&self, a: &Form, b: &Form) -> Poly<Scalar> {
        let denom = &(&Scalar::from_int(2) * &self.gscale) * &self.gscale;
        s5::reduce_sphere(&s5::fiber_e(a, &s5::star_h_e(b)).scale(&denom.inv()))
    }

    /// Hodge star of g_H on p-forms: gscale^{2−p}·(Euclidean star).
    pub fn star_g(&self, a: &Form) -> Form {
        let p = a.degree as i32;
        let s = match 2 - p {
            2 => &self.gscale * &self.gscale,
            1 => self.gscale.clone(),
            0 => Scalar::one(),
            -1 => self.gscale.inv(),
            -2 => (&self.gscale * &self.gscale).inv(),
            _ => unreachable!(),
        };
        s5::star_h_e(a).scale(&s)
    }

    /// Scalar f with L_vα = f·β mod Ω⁻_H, computed as ρ.β.
    pub fn f_scalar(&self) -> Poly<Scalar> {
        self.dot(&self.rho(), &self.beta)
    }

    /// Volume form Vol_H = ½ω².
    pub fn vol_h(&self) -> Form {
        s5::reduce_form(&self.omega.wedge(&self.omega).unwrap()).scale(&Scalar::ratio(1, 2))
    }
}

/// The constant q with a ≡ q·b on the sphere, when it exists.
pub fn form_ratio(a: &Form, b: &Form) -> Option<Scalar> {
    for (idx, cb) in &b.terms {
        if let Some(ca) = a.terms.get(idx) {
            for (m, vb) in &cb.terms {
                if let Some(va) = ca.terms.get(m) {
                    let q = va / vb;
                    if s5::is_zero_on_sphere(&a.sub(&b.scale(&q))) {
                        return Some(q);
                    }
                    return None;
                }
            }
        }
    }
    None
}

#[derive(Clone, Debug, Serialize)]
pub struct HkReport {
    pub d_h_alpha_zero: bool,
    pub d_h_beta_zero: bool,
    pub orthonormal: bool,
    pub anchor: &'static str,
}

impl HkReport {
    pub fn verdict(&self) -> bool {
        self.d_h_alpha_zero && self.d_h_beta_zero && self.orthonormal
    }
}

pub fn check_contact_hk(s: &AmbientSu2) -> HkReport {
    let one = Poly::one();
    let orth = [
        s5::reduce_sphere(&s.dot(&s.omega, &s.omega).sub(&one)),
        s5::reduce_sphere(&s.dot(&s.alpha, &s.alpha).sub(&one)),
        s5::reduce_sphere(&s.dot(&s.beta, &s.beta).sub(&one)),
        s.dot(&s.omega, &s.alpha),
        s.dot(&s.alpha, &s.beta),
        s.dot(&s.beta, &s.omega),
    ]
    .iter()
    .all(|p| p.is_zero());
    HkReport {
        d_h_alpha_zero: s5::is_zero_h(&s5::d_h(&s.alpha)),
        d_h_beta_zero: s5::is_zero_h(&s5::d_h(&s.beta)),
        orthonormal: orth,
        anchor: ANCHOR_HK,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SeInvariants {
    pub q_value: String,
    pub q_is_one: bool,
    pub lrho_sq_value: String,
    pub lrho_sq_is_one: bool,
    pub rho_perp_alpha_omega: bool,
    pub lrho_mod_asd_is_minus_alpha: bool,
    pub se_equations_hold: bool,
    pub anchor: &'static str,
}

pub fn se_invariants(s: &AmbientSu2) -> SeInvariants {
    let rho = s.rho();
    let q = s.dot(&rho, &rho);
    let lrho = s.lie_v(&rho);
    let lrho_sq = s.dot(&lrho, &lrho);
    let one = Poly::one();
    let rho_perp = s.dot(&rho, &s.alpha).is_zero() && s.dot(&rho, &s.omega).is_zero();
    let lrho_alpha = s5::reduce_sphere(&s.dot(&lrho, &s.alpha).add(&one));
    let lrho_rho = s.dot(&lrho, &rho);
    let se1 = s5::is_zero_h(&rho.sub(&s.beta));
    let se2 = s5::is_zero_h(&s.lie_v(&s.beta).add(&s.alpha));
    SeInvariants {
        q_value: constant_string(&q),
        q_is_one: s5::reduce_sphere(&q.sub(&one)).is_zero(),
        lrho_sq_value: constant_string(&lrho_sq),
        lrho_sq_is_one: s5::reduce_sphere(&lrho_sq.sub(&one)).is_zero(),
        rho_perp_alpha_omega: rho_perp,
        lrho_mod_asd_is_minus_alpha: lrho_alpha.is_zero() && lrho_rho.is_zero(),
        se_equations_hold: se1 && se2,
        anchor: ANCHOR_SE,
    }
}

fn constant_string(p: &Poly<Scalar>) -> String {
    let r = s5::reduce_sphere(p);
    if r.is_zero() {
        return "0".into();
    }
    if r.terms.len() == 1 {
        if let Some(c) = r.terms.get(&Mono::one()) {
            return format!("{}", c);
        }
    }
    "nonconstant".into()
}

// ---------------------------------------------------------------------------
// Cone forms

fn to_cone(f: &Form, r_power: u8) -> CForm {
    let mut out = CForm::zero(Chart::Cone, f.degree);
    for (idx, c) in &f.terms {
        let mut ix = [0u8; 7];
        for (k, &i) in idx.slice().iter().enumerate() {
            ix[k] = i + 1;
        }
        let idx2 = Idx { len: idx.len, ix };
        let mut shifted = Poly::zero();
        for (m, v) in &c.terms {
            let mut mm = Mono::one();
            mm.0[0] = r_power;
            for var in 0..6 {
                mm.0[var + 1] = m.0[var];
            }
            shifted.add_term(mm, CScalar::from_real(v.clone()));
        }
        out.add_term(idx2, shifted);
    }
    out
}

fn cone_scalar(coef: i64, r_power: u8) -> CForm {
    let mut m = Mono::one();
    m.0[0] = r_power;
    CForm::from_terms(Chart::Cone, 0, vec![(Idx::empty(), Poly::monomial(m, CScalar::from_int(coef)))])
}

fn cone_dr() -> CForm {
    CForm::from_terms(Chart::Cone, 1, vec![(Idx::single(0), Poly::one())])
}

/// Ambient (real, imaginary) graded pieces of a cone form by r-power and
/// dr-content.
fn cone_graded_pieces(f: &CForm) -> Vec<(Form, Form)> {
    use std::collections::BTreeMap;
    let mut grouped: BTreeMap<(u8, bool, u8), (Form, Form)> = BTreeMap::new();
    for (idx, c) in &f.terms {
        let has_dr = idx.contains(0);
        let amb: Vec<u8> = idx.slice().iter().filter(|&&i| i != 0).map(|&i| i - 1).collect();
        let aidx = Idx::from_slice(&amb);
        for (m, v) in &c.terms {
            let rp = m.0[0];
            let mut ma = Mono::one();
            for var in 0..6 {
                ma.0[var] = m.0[var + 1];
            }
            let entry = grouped.entry((rp, has_dr, aidx.len)).or_insert_with(|| {
                (Form::zero(s5::CHART, aidx.len), Form::zero(s5::CHART, aidx.len))
            });
            if !v.re.is_zero() {
                entry.0.add_term(aidx, Poly::monomial(ma, v.re.clone()));
            }
            if !v.im.is_zero() {
                entry.1.add_term(aidx, Poly::monomial(ma, v.im.clone()));
            }
        }
    }
    grouped.into_values().collect()
}

fn cone_form_is_zero(f: &CForm) -> bool {
    cone_graded_pieces(f).iter().all(|(re, im)| s5::is_zero_on_sphere(re) && s5::is_zero_on_sphere(im))
}

#[derive(Clone, Debug, Serialize)]
pub struct ConeReport {
    pub d_lambda_zero: bool,
    pub d_omega_zero: bool,
    pub lambda_wedge_omega_zero: bool,
    pub lambda_lambdabar_is_2i_omega3: bool,
    pub d_lambda_norms_at_radii: Vec<f64>,
    pub anchor: &'static str,
}

impl ConeReport {
    pub fn verdict(&self) -> bool {
        self.d_lambda_zero
            && self.d_omega_zero
            && self.lambda_wedge_omega_zero
            && self.lambda_lambdabar_is_2i_omega3
    }
}

/// Evaluate the cone identities for Λ = (3r²dr + ir³θ)∧(α−iβ) and
/// Ω = 2r dr∧θ + r²ω. The ordering in the volume identity is
/// conj(Λ)∧Λ = 2iΩ³ (equivalently Λ∧conj(Λ) = −2iΩ³ since both factors have
/// odd degree).
pub fn cone_forms(s: &AmbientSu2, radii: &[Scalar]) -> ConeReport {
    let i = CScalar::i();
    let a_ib = to_cone(&s.alpha, 0).sub(&to_cone(&s.beta, 0).scale_c(&i));
    let front = cone_dr().wedge(&cone_scalar(3, 2)).unwrap().add(&to_cone(&s.theta, 3).scale_c(&i));
    let lambda = front.wedge(&a_ib).unwrap();
    let omega_cone = cone_dr()
        .wedge(&to_cone(&s.theta, 1))
        .unwrap()
        .scale(&Scalar::from_int(2))
        .add(&to_cone(&s.omega, 2));

    let dl = lambda.ext_d().unwrap();
    let dw = omega_cone.ext_d().unwrap();
    let lw = lambda.wedge(&omega_cone).unwrap();
    let o3 = omega_cone.wedge(&omega_cone).unwrap().wedge(&omega_cone).unwrap();
    let two_i = CScalar::new(Scalar::zero(), Scalar::from_int(2));
    let ll = lambda.conj().wedge(&lambda).unwrap().sub(&o3.scale_c(&two_i));

    let d_lambda_norms_at_radii = radii.iter().map(|r| cone_norm_at_radius(&dl, r)).collect();

    ConeReport {
        d_lambda_zero: cone_form_is_zero(&dl),
        d_omega_zero: cone_form_is_zero(&dw),
        lambda_wedge_omega_zero: cone_form_is_zero(&lw),
        lambda_lambdabar_is_2i_omega3: cone_form_is_zero(&ll),
        d_lambda_norms_at_radii,
        anchor: ANCHOR_CONE,
    }
}

fn cone_norm_at_radius(f: &CForm, r: &Scalar) -> f64 {
    use std::collections::BTreeMap;
    // freeze r exactly and group by (dr-content, ambient index) so that
    // cancellations modulo the sphere ideal across r-powers survive
    let mut grouped: BTreeMap<(bool, u8), (Form, Form)> = BTreeMap::new();
    for (idx, c) in &f.terms {
        let has_dr = idx.contains(0);
        let amb: Vec<u8> = idx.slice().iter().filter(|&&i| i != 0).map(|&i| i - 1).collect();
        let aidx = Idx::from_slice(&amb);
        let entry = grouped.entry((has_dr, aidx.len)).or_insert_with(|| {
            (Form::zero(s5::CHART, aidx.len), Form::zero(s5::CHART, aidx.len))
        });
        for (m, v) in &c.terms {
            let mut rpow = Scalar::one();
            for _ in 0..m.0[0] {
                rpow = &rpow * r;
            }
            let mut ma = Mono::one();
            for var in 0..6 {
                ma.0[var] = m.0[var + 1];
            }
            entry.0.add_term(aidx, Poly::monomial(ma, &v.re * &rpow));
            entry.1.add_term(aidx, Poly::monomial(ma, &v.im * &rpow));
        }
    }
    let mut acc = 0.0;
    for (re, im) in grouped.values() {
        for g in [re, im] {
            if !g.is_zero() {
                acc += s5::l2_e(g, g).to_f64().max(0.0);
            }
        }
    }
    acc.sqrt()
}

// ---------------------------------------------------------------------------
// Pointwise exact algebra on Λ²H*_p and deformation graphs

/// Exact pointwise algebra of 2-forms on H at a rational sphere point.
pub struct PointAlgebra {
    pub point: [Scalar; 6],
    pub h_frame: Vec<Vec<Scalar>>,
    pub pairs: Vec<(usize, usize)>,
    pub wedge_q: Vec<Vec<Scalar>>,
    pub sd: Vec<Vec<Scalar>>,
    pub asd: Vec<Vec<Scalar>>,
    pub omega_sq: Scalar,
}

impl PointAlgebra {
    pub fn new(s: &AmbientSu2, point: [Scalar; 6]) -> Self {
        use crate::structure::eval_form_on_vectors;
        let theta_row: Vec<Scalar> = (0..6)
            .map(|i| {
                s.theta
                    .terms
                    .get(&Idx::single(i as u8))
                    .map(|c| c.eval(&point))
                    .unwrap_or_else(Scalar::zero)
            })
            .collect();
        let pos_row: Vec<Scalar> = point.to_vec();
        let h_frame = kernel_of_rows(&[pos_row, theta_row]);
        assert_eq!(h_frame.len(), 4, "H_p must be 4-dimensional");
        let pairs: Vec<(usize, usize)> =
            (0..4).flat_map(|a| ((a + 1)..4).map(move |b| (a, b))).collect();
        let coords = |f: &Form| -> Vec<Scalar> {
            pairs
                .iter()
                .map(|&(a, b)| eval_form_on_vectors(f, &point, &[&h_frame[a], &h_frame[b]]))
                .collect()
        };
        let mut wedge_q = vec![vec![Scalar::zero(); 6]; 6];
        for (i, &(a, b)) in pairs.iter().enumerate() {
            for (j, &(c, d)) in pairs.iter().enumerate() {
                let mut all = [a, b, c, d];
                all.sort_unstable();
                if all == [0, 1, 2, 3] {
                    let perm = [a, b, c, d];
                    let mut sign = 1i64;
                    for x in 0..4 {
                        for y in x + 1..4 {
                            if perm[x] > perm[y] {
                                sign = -sign;
                            }
                        }
                    }
                    wedge_q[i][j] = Scalar::from_int(sign);
                }
            }
        }
        let sd = vec![coords(&s.omega), coords(&s.alpha), coords(&s.beta)];
        let mut cond = Vec::new();
        for row in &sd {
            let mut c = vec![Scalar::zero(); 6];
            for i in 0..6 {
                for j in 0..6 {
                    if !wedge_q[i][j].is_zero() {
                        c[j] = &c[j] + &(&row[i] * &wedge_q[i][j]);
                    }
                }
            }
            cond.push(c);
        }
        let asd = kernel_of_rows(&cond);
        let omega_sq = wedge_value(&wedge_q, &sd[0], &sd[0]);
        PointAlgebra { point, h_frame, pairs, wedge_q, sd, asd, omega_sq }
    }

    pub fn coords(&self, f: &Form) -> Vec<Scalar> {
        use crate::structure::eval_form_on_vectors;
        self.pairs
            .iter()
            .map(|&(a, b)| eval_form_on_vectors(f, &self.point, &[&self.h_frame[a], &self.h_frame[b]]))
            .collect()
    }

    pub fn dot(&self, x: &[Scalar], y: &[Scalar]) -> Scalar {
        &wedge_value(&self.wedge_q, x, y) / &self.omega_sq
    }

    /// Split into (SD coefficients against (ω,α,β), ASD coefficients).
    pub fn split(&self, x: &[Scalar]) -> (Vec<Scalar>, Vec<Scalar>) {
        let mut cols: Vec<Vec<Scalar>> = Vec::new();
        cols.extend(self.sd.iter().cloned());
        cols.extend(self.asd.iter().cloned());
        let a = crate::linalg::CMat::from_fn(6, 6, |i, j| CScalar::from_real(cols[j][i].clone()));
        let b: Vec<CScalar> = x.iter().map(|v| CScalar::from_real(v.clone())).collect();
        let sol = crate::linalg::solve(&a, &b).expect("Λ² basis at point is nondegenerate");
        (
            sol[..3].iter().map(|z| z.re.clone()).collect(),
            sol[3..].iter().map(|z| z.re.clone()).collect(),
        )
    }

    pub fn wedge_signature(&self) -> (usize, usize, usize) {
        let m = crate::linalg::CMat::from_fn(6, 6, |i, j| CScalar::from_real(self.wedge_q[i][j].clone()));
        crate::linalg::inertia(&m)
    }
}

fn wedge_value(q: &[Vec<Scalar>], x: &[Scalar], y: &[Scalar]) -> Scalar {
    let mut acc = Scalar::zero();
    for i in 0..6 {
        if x[i].is_zero() {
            continue;
        }
        for j in 0..6 {
            if q[i][j].is_zero() || y[j].is_zero() {
                continue;
            }
            acc += &(&x[i] * &q[i][j]) * &y[j];
        }
    }
    acc
}

fn kernel_of_rows(rows: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let n = rows[0].len();
    let a = crate::linalg::CMat::from_fn(rows.len(), n, |i, j| CScalar::from_real(rows[i][j].clone()));
    crate::linalg::kernel(&a)
        .into_iter()
        .map(|v| v.into_iter().map(|z| z.re).collect())
        .collect()
}

/// A deformation μ: Λ⁺_H → Λ⁻_H given by a constant coefficient matrix
/// against the dot-normalized triple (ω,α,β) and the pointwise ASD basis:
/// μ(σ) = Σ_ij m[i][j]·(σ.ω_i)·ζ_j.
#[derive(Clone)]
pub struct DeformationGraph {
    pub m: Vec<Vec<Scalar>>,
}

pub struct DeformedAlgebra<'a> {
    pub pa: &'a PointAlgebra,
    pub mu: Vec<Vec<Scalar>>,
    pub mu_star: Vec<Vec<Scalar>>,
}

impl<'a> DeformedAlgebra<'a> {
    /// μ and its fiber-metric adjoint at the point. The fiber metric is
    /// ⟨,⟩ = 2·dot on SD and −2·dot on ASD (mixed pairings vanish), so the
    /// adjoint reads (μ*τ)_i = −Σ_jl m_ij (ζ_j.ζ_l) t_l.
    pub fn new(pa: &'a PointAlgebra, g: &DeformationGraph) -> Self {
        let asd_dot: Vec<Vec<Scalar>> =
            (0..3).map(|i| (0..3).map(|j| pa.dot(&pa.asd[i], &pa.asd[j])).collect()).collect();
        let mut mu_star = vec![vec![Scalar::zero(); 3]; 3];
        for i in 0..3 {
            for l in 0..3 {
                let mut acc = Scalar::zero();
                for j in 0..3 {
                    acc += &g.m[i][j] * &asd_dot[j][l];
                }
                mu_star[i][l] = -acc;
            }
        }
        DeformedAlgebra { pa, mu: g.m.clone(), mu_star }
    }

    pub fn apply_mu(&self, s: &[Scalar]) -> Vec<Scalar> {
        (0..3)
            .map(|j| (0..3).fold(Scalar::zero(), |acc, i| &acc + &(&self.mu[i][j] * &s[i])))
            .collect()
    }
    pub fn apply_mu_star(&self, t: &[Scalar]) -> Vec<Scalar> {
        (0..3)
            .map(|i| (0..3).fold(Scalar::zero(), |acc, l| &acc + &(&self.mu_star[i][l] * &t[l])))
            .collect()
    }

    pub fn one_minus_mu_mu_star(&self) -> Vec<Vec<Scalar>> {
        let mut out = vec![vec![Scalar::zero(); 3]; 3];
        for l in 0..3 {
            let mut t = vec![Scalar::zero(); 3];
            t[l] = Scalar::one();
            let s = self.apply_mu_star(&t);
            let mms = self.apply_mu(&s);
            for j in 0..3 {
                out[j][l] = if j == l { &Scalar::one() - &mms[j] } else { -mms[j].clone() };
            }
        }
        out
    }
}

/// Graph-orthogonality at a point: (σ + μσ) ∧ (ζ + μ*ζ) over basis pairs;
/// returns the worst residual (exact zero when the adjoint is correct).
pub fn graph_orthogonality_residual(pa: &PointAlgebra, da: &DeformedAlgebra) -> Scalar {
    let mut worst = Scalar::zero();
    for i in 0..3 {
        let mut s = vec![Scalar::zero(); 3];
        s[i] = Scalar::one();
        let ms = da.apply_mu(&s);
        let mut left = vec![Scalar::zero(); 6];
        for k in 0..6 {
            left[k] = pa.sd[i][k].clone();
            for j in 0..3 {
                left[k] = &left[k] + &(&ms[j] * &pa.asd[j][k]);
            }
        }
        for l in 0..3 {
            let mut t = vec![Scalar::zero(); 3];
            t[l] = Scalar::one();
            let mst = da.apply_mu_star(&t);
            let mut right = vec![Scalar::zero(); 6];
            for k in 0..6 {
                right[k] = pa.asd[l][k].clone();
                for j in 0..3 {
                    right[k] = &right[k] + &(&mst[j] * &pa.sd[j][k]);
                }
            }
            let w = wedge_value(&pa.wedge_q, &left, &right);
            if !w.is_zero() {
                worst = w;
            }
        }
    }
    worst
}

/// Exact residual (in ASD coordinates) of the identity
/// (1−μμ*)∘π⁻∘d⁻_{H,μ}η = d⁻_Hη − μ(d⁺_Hη) at a point. The deformed
/// splitting is computed by an independent 6×6 exact solve.
pub fn deform_identity_residual_at(
    s: &AmbientSu2,
    g: &DeformationGraph,
    eta: &Form,
    point: [Scalar; 6],
) -> Vec<Scalar> {
    let pa = PointAlgebra::new(s, point);
    let da = DeformedAlgebra::new(&pa, g);
    let dh = s5::d_h(eta);
    let xi = pa.coords(&dh);
    let (xp, xm) = pa.split(&xi);
    let mut cols: Vec<Vec<Scalar>> = Vec::new();
    for i in 0..3 {
        let mut sv = vec![Scalar::zero(); 3];
        sv[i] = Scalar::one();
        let ms = da.apply_mu(&sv);
        let mut col = vec![Scalar::zero(); 6];
        for k in 0..6 {
            col[k] = pa.sd[i][k].clone();
            for j in 0..3 {
                col[k] = &col[k] + &(&ms[j] * &pa.asd[j][k]);
            }
        }
        cols.push(col);
    }
    for l in 0..3 {
        let mut tv = vec![Scalar::zero(); 3];
        tv[l] = Scalar::one();
        let mst = da.apply_mu_star(&tv);
        let mut col = vec![Scalar::zero(); 6];
        for k in 0..6 {
            col[k] = pa.asd[l][k].clone();
            for j in 0..3 {
                col[k] = &col[k] + &(&mst[j] * &pa.sd[j][k]);
            }
        }
        cols.push(col);
    }
    let a = crate::linalg::CMat::from_fn(6, 6, |i, j| CScalar::from_real(cols[j][i].clone()));
    let b: Vec<CScalar> = xi.iter().map(|v| CScalar::from_real(v.clone())).collect();
    let sol = crate::linalg::solve(&a, &b).expect("graph splitting solvable for |mu| < 1");
    let sigma_minus: Vec<Scalar> = sol[3..].iter().map(|z| z.re.clone()).collect();
    let omm = da.one_minus_mu_mu_star();
    let lhs: Vec<Scalar> = (0..3)
        .map(|j| (0..3).fold(Scalar::zero(), |acc, l| &acc + &(&omm[j][l] * &sigma_minus[l])))
        .collect();
    let mxp = da.apply_mu(&xp);
    (0..3).map(|j| &lhs[j] - &(&xm[j] - &mxp[j])).collect()
}

/// Exact positivity of the deformed metric ⟨⟨σ,σ⟩⟩_μ = ⟨σ,(1−μμ*)σ⟩ at a
/// point.
pub fn deformed_metric_positive_at(s: &AmbientSu2, g: &DeformationGraph, point: [Scalar; 6]) -> bool {
    let pa = PointAlgebra::new(s, point);
    let da = DeformedAlgebra::new(&pa, g);
    let omm = da.one_minus_mu_mu_star();
    let gm: Vec<Vec<Scalar>> = (0..3)
        .map(|j| {
            (0..3)
                .map(|l| -(&Scalar::from_int(2) * &pa.dot(&pa.asd[j], &pa.asd[l])))
                .collect()
        })
        .collect();
    let mut m = vec![vec![Scalar::zero(); 3]; 3];
    for j in 0..3 {
        for l in 0..3 {
            let mut acc = Scalar::zero();
            for k in 0..3 {
                acc += &gm[j][k] * &omm[k][l];
            }
            m[j][l] = acc;
        }
    }
    let msym = crate::linalg::CMat::from_fn(3, 3, |i, j| {
        CScalar::from_real(&(&m[i][j] + &m[j][i]) * &Scalar::ratio(1, 2))
    });
    // validity needs strict positivity: |μ| = 1 degenerates the metric
    crate::linalg::inertia(&msym) == (3, 0, 0)
}

/// A rank-one deformation with exactly unit (resp. scaled) operator norm at
/// the given point: μ(σ) = t·(σ.ω)·ζ/|ζ| using the first pointwise ASD basis
/// vector. Returns None when |ζ| is not exactly representable in Q(√2).
pub fn rank_one_deformation_at(s: &AmbientSu2, point: [Scalar; 6], t: &Scalar) -> Option<DeformationGraph> {
    let pa = PointAlgebra::new(s, point);
    let q = -pa.dot(&pa.asd[0], &pa.asd[0]);
    // singular value of m·(σ.ω)ζ at the point is m·√q·(norm factors):
    // ⟨μσ,μσ⟩ = 2q m² (σ.ω)², ⟨σ,σ⟩ = 2(σ.ω)² on the ω-line, so |μ| = m√q.
    let sqrt_q = q.sqrt()?;
    let m00 = t / &sqrt_q;
    let zero = || vec![Scalar::zero(), Scalar::zero(), Scalar::zero()];
    Some(DeformationGraph { m: vec![vec![m00, Scalar::zero(), Scalar::zero()], zero(), zero()] })
}

/// Estimate sup|μ| over sample points (f64) and flag invalid deformations
/// via the exact metric positivity test.
pub fn validate_deformation(
    s: &AmbientSu2,
    g: &DeformationGraph,
    n_points: usize,
) -> Result<f64, PentaError> {
    let pts = s5::sample_points(n_points, 4242);
    let mut sup: f64 = 0.0;
    for p in pts {
        let pa = PointAlgebra::new(s, p.clone());
        let da = DeformedAlgebra::new(&pa, g);
        let omm = da.one_minus_mu_mu_star();
        let mut a = vec![vec![0.0; 3]; 3];
        for j in 0..3 {
            for l in 0..3 {
                let v = -omm[j][l].to_f64();
                a[j][l] = if j == l { 1.0 + v } else { v };
            }
        }
        let asym: Vec<Vec<f64>> =
            (0..3).map(|i| (0..3).map(|j| 0.5 * (a[i][j] + a[j][i])).collect()).collect();
        let evs = crate::linalg::sym_eigvals(&asym);
        let top = evs.into_iter().fold(0.0f64, f64::max).max(0.0);
        sup = sup.max(top.sqrt());
        if !deformed_metric_positive_at(s, g, p) {
            return Err(PentaError::InvalidDeformation { sup_norm: sup.max(1.0) });
        }
    }
    Ok(sup)
}

// ---------------------------------------------------------------------------
// Tangential Cauchy–Riemann fragment

/// (γ∘I)(X) = γ(IX) on ambient 1-form representatives for the ambient
/// complex structure (I ∂x = ∂y): dx∘I = −dy, dy∘I = dx.
pub fn i_act_oneform(gamma: &Form) -> Form {
    let mut out = Form::zero(s5::CHART, 1);
    for (idx, c) in &gamma.terms {
        let i = idx.slice()[0] as usize;
        let (target, sign) = if i % 2 == 0 { (i + 1, -1) } else { (i - 1, 1) };
        let cc = if sign < 0 { c.neg() } else { c.clone() };
        out.add_term(Idx::single(target as u8), cc);
    }
    out
}

/// γ(I·,…,I·) on H-form representatives.
pub fn i_act_form(gamma: &Form) -> Form {
    let gh = s5::project_h(gamma);
    let mut out = Form::zero(s5::CHART, gamma.degree);
    for (idx, c) in &gh.terms {
        let mut acc = Form::from_terms(s5::CHART, 0, vec![(Idx::empty(), c.clone())]);
        for &i in idx.slice() {
            let i = i as usize;
            let (target, sign) = if i % 2 == 0 { (i + 1, -1) } else { (i - 1, 1) };
            let mut one = Form::zero(s5::CHART, 1);
            one.add_term(Idx::single(target as u8), if sign < 0 { Poly::one().neg() } else { Poly::one() });
            acc = acc.wedge(&one).unwrap();
        }
        out = out.add(&acc);
    }
    s5::reduce_form(&out)
}

/// π^{0,2}σ = u(α−iβ) with u = ¼(⟨σ,α⟩ + i⟨σ,β⟩); returns (Re, Im).
pub fn pi02(s: &AmbientSu2, sigma: &Form) -> (Form, Form) {
    let a = s.fiber_g2(sigma, &s.alpha).scale(&Scalar::ratio(1, 4));
    let b = s.fiber_g2(sigma, &s.beta).scale(&Scalar::ratio(1, 4));
    // (a + ib)(α − iβ) = (aα + bβ) + i(bα − aβ)
    let re = s.alpha.scale_coeff(&a).add(&s.beta.scale_coeff(&b));
    let im = s.alpha.scale_coeff(&b).sub(&s.beta.scale_coeff(&a));
    (s5::reduce_form(&re), s5::reduce_form(&im))
}

pub fn pi20(s: &AmbientSu2, sigma: &Form) -> (Form, Form) {
    let (re, im) = pi02(s, sigma);
    (re, im.neg())
}

/// π^{1,2} on H-3-forms: ½(γ + iC₃γ) with C₃γ = γ(I·,I·,I·); returns (Re, Im).
pub fn pi12_threeform(gamma: &Form) -> (Form, Form) {
    let gh = s5::project_h(gamma);
    let c3 = i_act_form(&gh);
    (gh.scale(&Scalar::ratio(1, 2)), c3.scale(&Scalar::ratio(1, 2)))
}

/// ∂̄_b on an anti-self-dual section: ∂̄_bσ = ∂̄_Hσ + θ∧π^{0,2}(L_vσ), as the
/// complex pair of 3-forms.
pub fn delbar_b(s: &AmbientSu2, sigma: &Form) -> (Form, Form) {
    let dh = s5::d_h(sigma);
    let (dre, dim) = pi12_threeform(&dh);
    let lv = s.lie_v(sigma);
    let (p02re, p02im) = pi02(s, &lv);
    let t_re = s.theta.wedge(&p02re).unwrap();
    let t_im = s.theta.wedge(&p02im).unwrap();
    (s5::reduce_form(&dre.add(&t_re)), s5::reduce_form(&dim.add(&t_im)))
}

/// Λσ (adjoint of ω∧): the ω-pairing ⟨σ,ω⟩/|ω|²-normalized component
/// (vanishes identically on ASD sections).
pub fn lambda_contraction(s: &AmbientSu2, sigma: &Form) -> Poly<Scalar> {
    s.fiber_g2(sigma, &s.omega).scale(&Scalar::ratio(1, 2))
}

/// The two fiber pairings entering the ∂̄_b-norm identity.
pub fn delbar_norm_data(s: &AmbientSu2, sigma: &Form) -> (Poly<Scalar>, Poly<Scalar>) {
    (s.fiber_g2(sigma, &s.lie_v(&s.alpha)), s.fiber_g2(sigma, &s.lie_v(&s.beta)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_is_contact_hk_and_se() {
        let s = AmbientSu2::round();
        let hk = check_contact_hk(&s);
        assert!(hk.verdict(), "{:?}", hk);
        let se = se_invariants(&s);
        assert!(se.q_is_one, "{:?}", se);
        assert!(se.lrho_sq_is_one);
        assert!(se.rho_perp_alpha_omega);
        assert!(se.se_equations_hold);
        assert!(se.lrho_mod_asd_is_minus_alpha);
    }

    #[test]
    fn squashed_is_hk_not_se() {
        let s = AmbientSu2::squashed(&Scalar::from_int(2));
        assert!(check_contact_hk(&s).verdict());
        let se = se_invariants(&s);
        assert!(!se.q_is_one);
        assert_eq!(se.q_value, "1/4");
        assert!(!se.se_equations_hold);
        let f = s.f_scalar();
        assert!(s5::reduce_sphere(&f.sub(&Poly::constant(Scalar::ratio(1, 2)))).is_zero());
    }

    #[test]
    fn round_f_scalar_is_one() {
        let s = AmbientSu2::round();
        assert!(s5::reduce_sphere(&s.f_scalar().sub(&Poly::one())).is_zero());
    }

    #[test]
    fn star_g_of_one_is_half_omega_squared() {
        let s = AmbientSu2::round();
        let one = Form::from_terms(s5::CHART, 0, vec![(Idx::empty(), Poly::one())]);
        let star1 = s.star_g(&one);
        assert!(s5::is_zero_on_sphere(&star1.sub(&s.vol_h())));
    }

    #[test]
    fn cone_identities_round() {
        let s = AmbientSu2::round();
        let radii = [Scalar::ratio(1, 2), Scalar::one(), Scalar::from_int(2)];
        let rep = cone_forms(&s, &radii);
        assert!(rep.d_lambda_zero, "dLambda = 0 must hold exactly for the SE structure");
        assert!(rep.d_omega_zero);
        assert!(rep.lambda_wedge_omega_zero);
        assert!(rep.lambda_lambdabar_is_2i_omega3, "conj(Λ)∧Λ = 2i Ω³");
        for v in rep.d_lambda_norms_at_radii {
            assert_eq!(v, 0.0);
        }
    }

    #[test]
    fn cone_fails_off_se() {
        let s = AmbientSu2::squashed(&Scalar::from_int(2));
        let rep = cone_forms(&s, &[Scalar::one()]);
        assert!(!rep.d_lambda_zero, "cone closure must fail off the SE locus");
    }

    #[test]
    fn wedge_signature_is_3_3() {
        let s = AmbientSu2::round();
        for p in s5::sample_points(5, 99) {
            let pa = PointAlgebra::new(&s, p);
            assert_eq!(pa.wedge_signature(), (3, 3, 0));
        }
    }

    #[test]
    fn deformation_identity_exact() {
        use rand::{Rng, SeedableRng};
        let s = AmbientSu2::round();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        let m: Vec<Vec<Scalar>> = (0..3)
            .map(|_| (0..3).map(|_| Scalar::ratio(rng.gen_range(-2i64..3), 10)).collect())
            .collect();
        let g = DeformationGraph { m };
        let pts = s5::sample_points(3, 7);
        for _ in 0..3 {
            let eta = s5::rand_h_form(&mut rng, 1, 2);
            for p in &pts {
                let res = deform_identity_residual_at(&s, &g, &eta, p.clone());
                for r in res {
                    assert!(r.is_zero(), "deformed splitting identity must be exact");
                }
            }
        }
    }

    #[test]
    fn graph_orthogonality_exact() {
        use rand::{Rng, SeedableRng};
        let s = AmbientSu2::round();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(32);
        for p in s5::sample_points(4, 21) {
            let m: Vec<Vec<Scalar>> = (0..3)
                .map(|_| (0..3).map(|_| Scalar::ratio(rng.gen_range(-3i64..4), 10)).collect())
                .collect();
            let g = DeformationGraph { m };
            let pa = PointAlgebra::new(&s, p);
            let da = DeformedAlgebra::new(&pa, &g);
            assert!(graph_orthogonality_residual(&pa, &da).is_zero());
        }
    }

    #[test]
    fn deformation_validity_flags() {
        let s = AmbientSu2::round();
        let p0 = [
            Scalar::one(),
            Scalar::zero(),
            Scalar::zero(),
            Scalar::zero(),
            Scalar::zero(),
            Scalar::zero(),
        ];
        // |μ| = 0.9 at p0: the metric stays positive definite there
        let g = rank_one_deformation_at(&s, p0.clone(), &Scalar::ratio(9, 10)).unwrap();
        assert!(deformed_metric_positive_at(&s, &g, p0.clone()));
        // |μ| = 1 at p0: degenerate, flagged
        let g1 = rank_one_deformation_at(&s, p0.clone(), &Scalar::one()).unwrap();
        assert!(!deformed_metric_positive_at(&s, &g1, p0));
    }

    #[test]
    fn delbar_theta_part_vanishes_on_round() {
        use rand::SeedableRng;
        let s = AmbientSu2::round();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let sigma = s5::rand_asd(&mut rng, 2);
        // L_vα = β ⟂ Λ⁻ and L_vβ = −α ⟂ Λ⁻
        let (da, db) = delbar_norm_data(&s, &sigma);
        assert!(s5::reduce_sphere(&da).is_zero());
        assert!(s5::reduce_sphere(&db).is_zero());
        assert!(s5::reduce_sphere(&lambda_contraction(&s, &sigma)).is_zero());
    }
}
