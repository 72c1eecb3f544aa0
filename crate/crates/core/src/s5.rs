//! Exact calculus on the unit sphere S⁵ ⊂ R⁶ with the standard contact
//! structure.
//!
//! Forms on S⁵ are represented by ambient polynomial representatives in the
//! coordinates (x1,y1,x2,y2,x3,y3); restriction is implicit. Scalars are
//! reduced to a normal form modulo the sphere relation r² = 1 (the y3
//! exponent is kept below 2), and every fiber or L² evaluation goes through
//! the pointwise projection onto the tangent space or the contact plane, so
//! all operations are well defined modulo the ideal of the sphere.
//!
//! Conventions: θ = η/√2 with η = Σ(xᵢ dyᵢ − yᵢ dxᵢ), Reeb field v = √2·u
//! with u the circle generator, ω = dθ = √2 κ with κ = Σ dxᵢ∧dyᵢ, the
//! contact metric g = θ² + g_H with g_H = √2·(Euclidean on H), and volume
//! form Vol_H = ½ω².

use crate::forms::{basis_form, Chart, Form, Idx, VecField, Vf};
use crate::poly::{Mono, Poly, Ring};
use crate::scalar::Scalar;
use rand::Rng;
use std::sync::OnceLock;

pub const CHART: Chart = Chart::S5Ambient;

/// x-coordinate variable of the j-th complex coordinate (0-based j).
fn xv(j: usize) -> usize {
    2 * j
}
fn yv(j: usize) -> usize {
    2 * j + 1
}

/// Reduce a polynomial modulo r² − 1 by eliminating y3 powers >= 2.
pub fn reduce_sphere<S: Ring>(p: &Poly<S>) -> Poly<S> {
    const Y3: usize = 5;
    if p.terms.keys().all(|m| m.0[Y3] < 2) {
        return p.clone();
    }
    // y3² = 1 - (sum of other squares)
    let mut rest = Poly::<S>::one();
    for v in 0..5 {
        let mut m = Mono::one();
        m.0[v] = 2;
        rest = rest.sub(&Poly::monomial(m, S::one()));
    }
    let mut out = Poly::zero();
    let mut pending = p.clone();
    while let Some((&m, _)) = pending.terms.iter().next_back() {
        let c = pending.terms.get(&m).unwrap().clone();
        pending.terms.remove(&m);
        if m.0[Y3] < 2 {
            out.add_term(m, c);
            continue;
        }
        let mut base = m;
        base.0[Y3] -= 2;
        for (rm, rc) in &rest.terms {
            pending.add_term(base.mul(rm), c.mul(rc));
        }
    }
    out
}

pub fn reduce_form(f: &Form) -> Form {
    let mut out = Form::zero(f.chart, f.degree);
    for (i, c) in &f.terms {
        out.add_term(*i, reduce_sphere(c));
    }
    out
}

/// r² = Σ coords².
pub fn r2() -> Poly<Scalar> {
    let mut p = Poly::zero();
    for v in 0..6 {
        let mut m = Mono::one();
        m.0[v] = 2;
        p.add_term(m, Scalar::one());
    }
    p
}

/// η = Σ (xᵢ dyᵢ − yᵢ dxᵢ); the contact form is θ = η/√2.
pub fn eta() -> Form {
    let mut f = Form::zero(CHART, 1);
    for j in 0..3 {
        f.add_term(Idx::single(yv(j) as u8), Poly::var(xv(j)));
        f.add_term(Idx::single(xv(j) as u8), Poly::var(yv(j)).neg());
    }
    f
}

/// ν = ½ d(r²) = Σ coordᵥ dcoordᵥ, the conormal of the sphere.
pub fn nu() -> Form {
    let mut f = Form::zero(CHART, 1);
    for v in 0..6 {
        f.add_term(Idx::single(v as u8), Poly::var(v));
    }
    f
}

/// κ = Σ dxᵢ∧dyᵢ, the ambient Kähler form; ω = √2·κ on S⁵.
pub fn kappa() -> Form {
    let mut f = Form::zero(CHART, 2);
    for j in 0..3 {
        f.add_term(Idx::from_slice(&[xv(j) as u8, yv(j) as u8]), Poly::one());
    }
    f
}

/// Circle generator u = Σ (xᵢ ∂yᵢ − yᵢ ∂xᵢ); the Reeb field is v = √2·u.
pub fn u_field() -> Vf {
    let mut comps = vec![Poly::zero(); 6];
    for j in 0..3 {
        comps[yv(j)] = Poly::var(xv(j));
        comps[xv(j)] = Poly::var(yv(j)).neg();
    }
    VecField::new(CHART, comps)
}

pub fn v_field() -> Vf {
    u_field().scale(&Scalar::sqrt2())
}

/// Outward position field N = Σ coordᵥ ∂ᵥ.
pub fn n_field() -> Vf {
    VecField::new(CHART, (0..6).map(Poly::var).collect())
}

/// Ψ = Re(dz¹∧dz²∧dz³) in the frame (x1,y1,x2,y2,x3,y3).
pub fn psi_ambient() -> Form {
    let mut f = Form::zero(CHART, 3);
    f.add_term(Idx::from_slice(&[0, 2, 4]), Poly::one());
    f.add_term(Idx::from_slice(&[0, 3, 5]), Poly::one().neg());
    f.add_term(Idx::from_slice(&[1, 2, 5]), Poly::one().neg());
    f.add_term(Idx::from_slice(&[1, 3, 4]), Poly::one().neg());
    f
}

/// Ψ̂ = Im(dz¹∧dz²∧dz³).
pub fn psihat_ambient() -> Form {
    let mut f = Form::zero(CHART, 3);
    f.add_term(Idx::from_slice(&[0, 2, 5]), Poly::one());
    f.add_term(Idx::from_slice(&[0, 3, 4]), Poly::one());
    f.add_term(Idx::from_slice(&[1, 2, 4]), Poly::one());
    f.add_term(Idx::from_slice(&[1, 3, 5]), Poly::one().neg());
    f
}

/// Pointwise projection of the coordinate coframe onto H* (kills ν and η
/// components on the sphere).
fn projected_coframe_h() -> &'static Vec<Form> {
    static CACHE: OnceLock<Vec<Form>> = OnceLock::new();
    CACHE.get_or_init(|| {
        let nu = nu();
        let eta = eta();
        (0..6usize)
            .map(|v| {
                let j = v / 2;
                let mut f = basis_form(CHART, &[v as u8]);
                // dx_j(N) = x_j-type coefficient; dx_j(u) = -y_j, dy_j(u) = x_j
                f = f.add(&nu.scale_coeff(&Poly::var(v).neg()));
                if v % 2 == 0 {
                    f = f.add(&eta.scale_coeff(&Poly::var(yv(j))));
                } else {
                    f = f.add(&eta.scale_coeff(&Poly::var(xv(j)).neg()));
                }
                reduce_form(&f)
            })
            .collect()
    })
}

/// Tangential projection of the coordinate coframe (kills ν only).
fn projected_coframe_t() -> &'static Vec<Form> {
    static CACHE: OnceLock<Vec<Form>> = OnceLock::new();
    CACHE.get_or_init(|| {
        let nu = nu();
        (0..6usize)
            .map(|v| {
                let f = basis_form(CHART, &[v as u8]);
                reduce_form(&f.add(&nu.scale_coeff(&Poly::var(v).neg())))
            })
            .collect()
    })
}

fn project_with(f: &Form, coframe: &[Form]) -> Form {
    let mut out = Form::zero(f.chart, f.degree);
    for (idx, c) in &f.terms {
        let mut acc = Form::from_terms(f.chart, 0, vec![(Idx::empty(), c.clone())]);
        for &i in idx.slice() {
            acc = acc.wedge(&coframe[i as usize]).unwrap();
        }
        out = out.add(&acc);
    }
    reduce_form(&out)
}

/// Project a form representative onto Λ•H* pointwise.
pub fn project_h(f: &Form) -> Form {
    project_with(f, projected_coframe_h())
}

/// Project onto Λ•T*S⁵ pointwise.
pub fn project_t(f: &Form) -> Form {
    project_with(f, projected_coframe_t())
}

/// Is the pullback of `f` to S⁵ zero? (sound and complete for polynomial
/// representatives: tangential projection kills the ν-part of the form
/// ideal, scalar reduction kills the (r²−1)-part)
pub fn is_zero_on_sphere(f: &Form) -> bool {
    project_t(f).is_zero()
}

/// Is `f` zero as a section of Λ•H*?
pub fn is_zero_h(f: &Form) -> bool {
    project_h(f).is_zero()
}

/// Euclidean volume form of H (= ½ κ_H²); the g_H volume is Vol_H = 2·this.
pub fn vol4_e() -> &'static Form {
    static CACHE: OnceLock<Form> = OnceLock::new();
    CACHE.get_or_init(|| {
        let kh = project_h(&kappa());
        reduce_form(&kh.wedge(&kh).unwrap()).scale(&Scalar::ratio(1, 2))
    })
}

/// Hodge star of the Euclidean metric on H (conformally invariant on
/// 2-forms). Projects its input, raises indices with the Euclidean metric
/// and contracts into Vol4.
pub fn star_h_e(f: &Form) -> Form {
    let p = f.degree as usize;
    assert!(p <= 4, "H-forms have degree <= 4");
    let fh = project_h(f);
    let vol = vol4_e();
    let mut out = Form::zero(CHART, (4 - p) as u8);
    for (idx, c) in &fh.terms {
        // contract Vol4 by e_{i1} first, then e_{i2}, ...
        let mut acc = vol.clone();
        for &i in idx.slice() {
            acc = acc.contract(&crate::forms::coord_vec(CHART, i as usize)).unwrap();
        }
        out = out.add(&acc.scale_coeff(c));
    }
    reduce_form(&out)
}

/// d_H on (representatives of) H-forms: d_H a = da − θ∧(v⌟da) = da − η∧(u⌟da).
pub fn d_h(a: &Form) -> Form {
    let da = a.ext_d().unwrap();
    let corr = eta().wedge(&da.contract(&u_field()).unwrap()).unwrap();
    reduce_form(&da.sub(&corr))
}

/// Lie derivative along the Reeb field v = √2 u.
pub fn lie_v(a: &Form) -> Form {
    reduce_form(&a.lie(&u_field()).unwrap()).scale(&Scalar::sqrt2())
}

/// Splitting a = θ∧(θ-part) + (H-part) of a form on S⁵.
pub fn split_v(a: &Form) -> (Form, Form) {
    if a.degree == 0 {
        return (Form::zero(CHART, 0), a.clone());
    }
    let theta_part = reduce_form(&a.contract(&v_field()).unwrap());
    let theta = eta().scale(&Scalar::inv_sqrt2());
    let h_part = if theta_part.is_zero() {
        a.clone()
    } else {
        reduce_form(&a.sub(&theta.wedge(&theta_part).unwrap()))
    };
    (theta_part, h_part)
}

/// Anti-self-dual projection (w.r.t. g_H and the orientation with ω² > 0).
pub fn pi_minus(a: &Form) -> Form {
    let ah = project_h(a);
    ah.sub(&star_h_e(&ah)).scale(&Scalar::ratio(1, 2))
}

pub fn pi_plus(a: &Form) -> Form {
    let ah = project_h(a);
    ah.add(&star_h_e(&ah)).scale(&Scalar::ratio(1, 2))
}

/// d_H⁻ = ½(d_H − *d_H): Ω¹_H → Ω⁻_H.
pub fn d_minus(a: &Form) -> Form {
    pi_minus(&d_h(a))
}

pub fn d_plus(a: &Form) -> Form {
    pi_plus(&d_h(a))
}

/// Codifferential −*d_H* of the contact metric g = θ² + g_H with the
/// standard round metric on H (the normalization the spectral bounds use).
pub fn dstar_e(a: &Form) -> Form {
    star_h_e(&d_h(&star_h_e(a))).neg()
}

/// □_H = d_H⁻ d_H* on Ω⁻_H (standard-metric normalization).
pub fn box_h(sigma: &Form) -> Form {
    d_minus(&dstar_e(sigma))
}

/// Δ_H = d_H d_H* + d_H* d_H (standard-metric normalization).
pub fn delta_h(a: &Form) -> Form {
    let mut out = dstar_e(&d_h(a));
    if a.degree > 0 {
        out = out.add(&d_h(&dstar_e(a)));
    }
    out
}

/// Pointwise Euclidean fiber product of two H-form representatives.
pub fn fiber_e(a: &Form, b: &Form) -> Poly<Scalar> {
    assert_eq!(a.degree, b.degree);
    let (pa, pb) = (project_h(a), project_h(b));
    let mut acc = Poly::zero();
    for (i, c) in &pa.terms {
        if let Some(d) = pb.terms.get(i) {
            acc = acc.add(&c.mul(d));
        }
    }
    reduce_sphere(&acc)
}

/// Wedge-product pairing σ.τ = σ∧τ / ω² for the unit-normalized structure
/// (ω = √2 κ): equals fiber_e(σ, *τ)/4.
pub fn wedge_dot(a: &Form, b: &Form) -> Poly<Scalar> {
    fiber_e(a, &star_h_e(b)).scale(&Scalar::ratio(1, 4))
}

/// L² inner product of H-form representatives: Euclidean fiber metric on H,
/// dA measure (units of π³). This is the inner product of the contact
/// metric g = θ² + g_H with the standard metric on H, up to the constant
/// measure normalization θ∧Vol_H = dA/√2 which drops out of every identity.
pub fn l2_h(a: &Form, b: &Form) -> Scalar {
    crate::moments::integrate(&fiber_e(a, b))
}

/// L² inner product of general forms on S⁵ for the contact metric, through
/// the splitting a = θ∧aθ + a_H (the θ-direction has unit length).
pub fn l2_contact(a: &Form, b: &Form) -> Scalar {
    assert_eq!(a.degree, b.degree);
    let (at, ah) = split_v(a);
    let (bt, bh) = split_v(b);
    let mut acc = l2_h(&ah, &bh);
    if a.degree > 0 {
        acc += l2_h(&at, &bt);
    }
    acc
}

/// L² inner product for the round metric on all of TS⁵ (Euclidean fiber,
/// dA measure).
pub fn l2_e(a: &Form, b: &Form) -> Scalar {
    assert_eq!(a.degree, b.degree);
    let (pa, pb) = (project_t(a), project_t(b));
    let mut acc = Poly::zero();
    for (i, c) in &pa.terms {
        if let Some(d) = pb.terms.get(i) {
            acc = acc.add(&c.mul(d));
        }
    }
    crate::moments::integrate(&reduce_sphere(&acc))
}

/// Alias kept for the round-metric reading of l2.
pub fn l2_round(a: &Form, b: &Form) -> Scalar {
    l2_e(a, b)
}

/// L² norm (as f64) for the contact metric, for diagnostics.
pub fn l2_norm_f64(a: &Form) -> f64 {
    l2_contact(a, a).to_f64().max(0.0).sqrt()
}

/// A rational point on S⁵ from a rational 5-vector via inverse stereographic
/// projection.
pub fn rational_sphere_point(a: &[Scalar; 5]) -> [Scalar; 6] {
    let norm2: Scalar = a.iter().fold(Scalar::zero(), |acc, v| &acc + &(v * v));
    let denom = (&norm2 + &Scalar::one()).inv();
    let mut p = [Scalar::zero(), Scalar::zero(), Scalar::zero(), Scalar::zero(), Scalar::zero(), Scalar::zero()];
    for i in 0..5 {
        p[i] = &(&Scalar::from_int(2) * &a[i]) * &denom;
    }
    p[5] = &(&norm2 - &Scalar::one()) * &denom;
    p
}

/// Deterministic small sample of rational points on S⁵.
pub fn sample_points(n: usize, seed: u64) -> Vec<[Scalar; 6]> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let a: [Scalar; 5] = std::array::from_fn(|_| {
                Scalar::from_rat(crate::scalar::rat(rng.gen_range(-6i64..7), rng.gen_range(1i64..5)))
            });
            rational_sphere_point(&a)
        })
        .collect()
}

/// Random polynomial with small integer coefficients.
pub fn rand_poly(rng: &mut impl Rng, nvars: usize, deg: u32, terms: usize) -> Poly<Scalar> {
    let mut p = Poly::zero();
    for _ in 0..terms {
        let mut m = Mono::one();
        let d = rng.gen_range(0..=deg);
        for _ in 0..d {
            m.0[rng.gen_range(0..nvars)] += 1;
        }
        p.add_term(m, Scalar::from_int(rng.gen_range(-4i64..5)));
    }
    p
}

/// Random ambient form of the given degree with polynomial coefficients.
pub fn rand_form(rng: &mut impl Rng, degree: u8, deg: u32) -> Form {
    let mut f = Form::zero(CHART, degree);
    let n = 6u8;
    let mut indices: Vec<Vec<u8>> = vec![vec![]];
    for _ in 0..degree {
        let mut next = Vec::new();
        for base in &indices {
            let start = base.last().map(|&l| l + 1).unwrap_or(0);
            for i in start..n {
                let mut v = base.clone();
                v.push(i);
                next.push(v);
            }
        }
        indices = next;
    }
    for ix in indices {
        if rng.gen_bool(0.6) {
            f.add_term(Idx::from_slice(&ix), rand_poly(rng, 6, deg, 3));
        }
    }
    f
}

/// Random section of Λ^p H* (projected, reduced).
pub fn rand_h_form(rng: &mut impl Rng, degree: u8, deg: u32) -> Form {
    project_h(&rand_form(rng, degree, deg))
}

/// Random anti-self-dual section.
pub fn rand_asd(rng: &mut impl Rng, deg: u32) -> Form {
    pi_minus(&rand_form(rng, 2, deg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn reduction_is_sound() {
        let p = r2();
        let red = reduce_sphere(&p);
        assert_eq!(red, Poly::one());
        let q = p.mul(&Poly::var(2)).sub(&Poly::var(2));
        assert!(reduce_sphere(&q).is_zero());
    }

    #[test]
    fn eta_is_tangential_and_unit() {
        // η(N) = 0 identically, |ι*η|² = 1
        let e = eta();
        let en = e.contract(&n_field()).unwrap();
        assert!(reduce_sphere(en.terms.get(&Idx::empty()).cloned().as_ref().unwrap_or(&Poly::zero())).is_zero());
        assert_eq!(l2_round(&e, &e), Scalar::one());
    }

    #[test]
    fn theta_l2_is_half_volume() {
        let theta = eta().scale(&Scalar::inv_sqrt2());
        assert_eq!(l2_round(&theta, &theta), Scalar::ratio(1, 2));
    }

    #[test]
    fn d_eta_is_two_kappa() {
        let de = eta().ext_d().unwrap();
        assert_eq!(de, kappa().scale(&Scalar::from_int(2)));
    }

    #[test]
    fn psi_is_closed_and_theta_wedge_psi_vanishes() {
        assert!(psi_ambient().ext_d().unwrap().is_zero());
        // ker(ψ) is spanned by θ: θ∧ψ pulls back to zero
        let tp = eta().wedge(&psi_ambient()).unwrap();
        assert!(is_zero_on_sphere(&tp));
    }

    #[test]
    fn star_model_cases() {
        // *1 = Vol_H = ½ω² for the g_H star
        let one = Form::from_terms(CHART, 0, vec![(Idx::empty(), Poly::one())]);
        // for g_H = √2·(Euclidean on H): *1 = 2·Vol_e = ½ω² with ω = √2κ
        let star1 = star_h_e(&one).scale(&Scalar::from_int(2));
        let omega = kappa().scale(&Scalar::sqrt2());
        let vol_h = reduce_form(&omega.wedge(&omega).unwrap()).scale(&Scalar::ratio(1, 2));
        assert!(is_zero_on_sphere(&star1.sub(&vol_h)));
        // ** = (−1)^{p(4−p)} on a random 2-form and 1-form
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let f2 = rand_h_form(&mut rng, 2, 2);
        let ss = star_h_e(&star_h_e(&f2));
        assert!(is_zero_h(&ss.sub(&project_h(&f2))));
        let f1 = rand_h_form(&mut rng, 1, 2);
        let ss1 = star_h_e(&star_h_e(&f1));
        // p=1: (−1)^{1·3} = −1
        assert!(is_zero_h(&ss1.add(&project_h(&f1))));
    }

    #[test]
    fn reeb_properties() {
        // θ(v) = 1 and v⌟ω = 0 on the sphere
        let theta = eta().scale(&Scalar::inv_sqrt2());
        let tv = theta.contract(&v_field()).unwrap();
        let one = Poly::one();
        let c = tv.terms.get(&Idx::empty()).cloned().unwrap_or_else(Poly::zero);
        assert!(reduce_sphere(&c.sub(&one)).is_zero());
        let omega = kappa().scale(&Scalar::sqrt2());
        let vo = omega.contract(&v_field()).unwrap();
        assert!(is_zero_on_sphere(&vo));
    }
}
