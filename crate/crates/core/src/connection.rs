//! The adapted connection of a homogeneous SU(2)-structure on S⁵, its
//! torsion, second fundamental form, curvature tensor with the
//! Weyl/Ricci/scalar decomposition, the Kulkarni–Nomizu toolkit, and the
//! Weitzenböck identity on anti-self-dual sections.
//!
//! All fields are ambient polynomial representatives; tensor components are
//! taken at rational points whose H-plane is spanned by Euclidean-orthonormal
//! coordinate vectors, so every orthonormal-frame formula carries an explicit
//! integer power of the metric scale and stays in Q(√2).

use crate::forms::{Form, Idx, VecField, Vf};
use crate::poly::Poly;
use crate::s5;
use crate::scalar::Scalar;
use crate::su2::AmbientSu2;
use serde::Serialize;

pub const ANCHOR_CONN: &str = "adapted connection: nabla g = 0, nabla v = 0, H preserved, T|_H = omega(X,Y) v";
pub const ANCHOR_GAUSS: &str = "Gauss equation: R_g = R^nabla - B(Y,Z)B(X,W) + B(X,Z)B(Y,W) + (f+1)/2 omega(X,Y)omega(Z,W)";
pub const ANCHOR_CURV_SYM: &str = "curvature symmetry: R(XYZW) - R(ZWXY) = Lvg/omega terms";
pub const ANCHOR_BIANCHI: &str = "first Bianchi with torsion: cyclic R = omega-weighted T_v sum";
pub const ANCHOR_WID: &str = "Weitzenböck: 2 box = nabla*nabla + (W-)action + s_H/3 - (2/3) f";
pub const ANCHOR_KN: &str = "Kulkarni-Nomizu toolkit: b(h KN g) = 0, c(h KN g) = 2h + tr(h) g";

/// Canonical tangent extension of an ambient vector: X_w(x) = w − ⟨w,x⟩x.
pub fn canonical_extension(w: &[Scalar; 6]) -> Vf {
    let mut comps: Vec<Poly<Scalar>> = Vec::with_capacity(6);
    // ⟨w, x⟩
    let mut wx = Poly::zero();
    for (i, wi) in w.iter().enumerate() {
        if !wi.is_zero() {
            wx = wx.add(&Poly::var(i).scale(wi));
        }
    }
    for (i, wi) in w.iter().enumerate() {
        let mut c = Poly::constant(wi.clone());
        c = c.sub(&wx.mul(&Poly::var(i)));
        comps.push(c);
    }
    VecField::new(s5::CHART, comps)
}

fn dot_fields(x: &Vf, y: &Vf) -> Poly<Scalar> {
    let mut acc = Poly::zero();
    for i in 0..6 {
        acc = acc.add(&x.comps[i].mul(&y.comps[i]));
    }
    s5::reduce_sphere(&acc)
}

/// Directional derivative D_X Y componentwise (flat ambient connection).
fn flat_d(x: &Vf, y: &Vf) -> Vf {
    let comps = (0..6)
        .map(|i| {
            let mut acc = Poly::zero();
            for v in 0..6 {
                acc = acc.add(&x.comps[v].mul(&y.comps[i].deriv(v)));
            }
            s5::reduce_sphere(&acc)
        })
        .collect();
    VecField::new(s5::CHART, comps)
}

fn bracket(x: &Vf, y: &Vf) -> Vf {
    let dxy = flat_d(x, y);
    let dyx = flat_d(y, x);
    VecField::new(s5::CHART, (0..6).map(|i| dxy.comps[i].sub(&dyx.comps[i])).collect())
}

fn scale_field(x: &Vf, c: &Poly<Scalar>) -> Vf {
    VecField::new(s5::CHART, x.comps.iter().map(|p| s5::reduce_sphere(&p.mul(c))).collect())
}

fn add_fields(x: &Vf, y: &Vf) -> Vf {
    VecField::new(s5::CHART, (0..6).map(|i| x.comps[i].add(&y.comps[i])).collect())
}

fn neg_field(x: &Vf) -> Vf {
    VecField::new(s5::CHART, x.comps.iter().map(|p| p.neg()).collect())
}

/// Ambient complex structure J (∂x ↦ ∂y, ∂y ↦ −∂x) applied to a field.
fn j_field(x: &Vf) -> Vf {
    let mut comps = vec![Poly::zero(); 6];
    for j in 0..3 {
        comps[2 * j + 1] = x.comps[2 * j].clone();
        comps[2 * j] = x.comps[2 * j + 1].neg();
    }
    VecField::new(s5::CHART, comps)
}

/// η(X) = ⟨u, X⟩ as a function.
fn eta_of(x: &Vf) -> Poly<Scalar> {
    dot_fields(&s5::u_field(), x)
}

/// Tangential projection P(W) = W − ⟨W,x⟩x of an ambient field.
fn project_tangent_field(w: &Vf) -> Vf {
    let wx = dot_fields(w, &s5::n_field());
    add_fields(w, &neg_field(&scale_field(&s5::n_field(), &wx)))
}

/// Projection of a tangent field onto H: W − θ(W)v (and tangentially).
fn project_h_field(s: &AmbientSu2, w: &Vf) -> Vf {
    let th = theta_of(s, w);
    let vfield = s5::u_field().scale(&s.reeb);
    let wt = project_tangent_field(w);
    add_fields(&wt, &neg_field(&scale_field(&vfield, &th)))
}

/// θ(W) as a function.
fn theta_of(s: &AmbientSu2, w: &Vf) -> Poly<Scalar> {
    s5::reduce_sphere(&eta_of(w).scale(&s.tscale))
}

/// The contact metric g = θ² + g_H with g_H = gscale·(Euclidean on H):
/// g(X,Y) = gscale·⟨X,Y⟩ + (1 − gscale·reeb²)·θ(X)θ(Y) on tangent fields.
pub fn metric(s: &AmbientSu2, x: &Vf, y: &Vf) -> Poly<Scalar> {
    let lambda = &Scalar::one() - &(&(&s.gscale * &s.reeb) * &s.reeb);
    let a = dot_fields(x, y).scale(&s.gscale);
    let b = theta_of(s, x).mul(&theta_of(s, y)).scale(&lambda);
    s5::reduce_sphere(&a.add(&b))
}

/// Levi-Civita connection of g in closed form:
/// ∇_XY = D_XY + ⟨X,Y⟩N + μ₀[η(Y)·P(JX) + η(X)·P(JY)],
/// μ₀ = (1 − gscale·reeb²)·tscale²/gscale.
pub fn lc_nabla(s: &AmbientSu2, x: &Vf, y: &Vf) -> Vf {
    let lambda = &Scalar::one() - &(&(&s.gscale * &s.reeb) * &s.reeb);
    let mu0 = &(&lambda * &(&s.tscale * &s.tscale)) / &s.gscale;
    let mut out = flat_d(x, y);
    out = add_fields(&out, &scale_field(&s5::n_field(), &dot_fields(x, y)));
    let pjx = project_tangent_field(&j_field(x));
    let pjy = project_tangent_field(&j_field(y));
    let corr = add_fields(&scale_field(&pjx, &eta_of(y)), &scale_field(&pjy, &eta_of(x)));
    out = add_fields(&out, &scale_field(&corr, &Poly::constant(mu0)));
    VecField::new(s5::CHART, out.comps.iter().map(s5::reduce_sphere).collect())
}

/// The Koszul right-hand side 2g(∇_XY, Z), used to verify `lc_nabla`.
pub fn koszul_rhs(s: &AmbientSu2, x: &Vf, y: &Vf, z: &Vf) -> Poly<Scalar> {
    let d = |f: &Poly<Scalar>, w: &Vf| -> Poly<Scalar> {
        let mut acc = Poly::zero();
        for v in 0..6 {
            acc = acc.add(&w.comps[v].mul(&f.deriv(v)));
        }
        s5::reduce_sphere(&acc)
    };
    let gyz = metric(s, y, z);
    let gxz = metric(s, x, z);
    let gxy = metric(s, x, y);
    let mut acc = d(&gyz, x);
    acc = acc.add(&d(&gxz, y));
    acc = acc.sub(&d(&gxy, z));
    acc = acc.add(&metric(s, &bracket(x, y), z));
    acc = acc.sub(&metric(s, &bracket(x, z), y));
    acc = acc.sub(&metric(s, &bracket(y, z), x));
    s5::reduce_sphere(&acc)
}

/// f of the structure as an exact constant.
pub fn f_constant(s: &AmbientSu2) -> Scalar {
    let f = s.f_scalar();
    let r = s5::reduce_sphere(&f);
    r.terms.get(&crate::poly::Mono::one()).cloned().unwrap_or_else(Scalar::zero)
}

/// I as an endomorphism of H-fields (equals the ambient J on H for this
/// family).
fn i_endo(s: &AmbientSu2, x: &Vf) -> Vf {
    project_h_field(s, &j_field(x))
}

/// L_v g as a bilinear form on fields.
pub fn lie_v_g(s: &AmbientSu2, x: &Vf, y: &Vf) -> Poly<Scalar> {
    let vf = s5::u_field().scale(&s.reeb);
    let d = |f: &Poly<Scalar>| -> Poly<Scalar> {
        let mut acc = Poly::zero();
        for v in 0..6 {
            acc = acc.add(&vf.comps[v].mul(&f.deriv(v)));
        }
        acc
    };
    let g = metric(s, x, y);
    let mut acc = d(&g);
    acc = acc.sub(&metric(s, &bracket(&vf, x), y));
    acc = acc.sub(&metric(s, x, &bracket(&vf, y)));
    s5::reduce_sphere(&acc)
}

/// T_v = ½ L_vI ∘ I − ½ f·I on H-fields (the fixed Appendix gauge).
pub fn torsion_v(s: &AmbientSu2, x: &Vf) -> Vf {
    let vf = s5::u_field().scale(&s.reeb);
    // (L_vI)(X) = [v, IX] − I[v,X]
    // (L_vI)(IX) = [v, I(IX)] − I([v, IX])
    let ixx = i_endo(s, x);
    let lvi_of_ix = add_fields(
        &bracket(&vf, &i_endo(s, &ixx)),
        &neg_field(&i_endo(s, &bracket(&vf, &ixx))),
    );
    let f = f_constant(s);
    let t1 = scale_field(&lvi_of_ix, &Poly::constant(Scalar::ratio(1, 2)));
    let t2 = scale_field(&i_endo(s, x), &Poly::constant(&Scalar::ratio(-1, 2) * &f));
    add_fields(&t1, &t2)
}

/// The adapted connection: for tangent X and H-field Y,
/// ∇_XY = π_H(∇^{LC}_{X_H}Y) + θ(X)(L_vY + T_vY).
pub fn adapted_nabla(s: &AmbientSu2, x: &Vf, y: &Vf) -> Vf {
    let xh = project_h_field(s, x);
    let lc = lc_nabla(s, &xh, y);
    let mut out = project_h_field(s, &lc);
    let th = theta_of(s, x);
    if !th.is_zero() {
        let vf = s5::u_field().scale(&s.reeb);
        let lv = bracket(&vf, y);
        let tv = torsion_v(s, y);
        let vertical = add_fields(&lv, &tv);
        out = add_fields(&out, &scale_field(&vertical, &th));
    }
    VecField::new(s5::CHART, out.comps.iter().map(s5::reduce_sphere).collect())
}

/// B(X,Y) = θ(∇^{LC}_X Y) (the second-fundamental-form of the splitting).
pub fn second_fundamental(s: &AmbientSu2, x: &Vf, y: &Vf) -> Poly<Scalar> {
    s5::reduce_sphere(&theta_of(s, &lc_nabla(s, x, y)))
}

/// Curvature R(X,Y)Z of a connection given as a closure on fields.
pub fn curvature_of(
    nabla: &dyn Fn(&Vf, &Vf) -> Vf,
    x: &Vf,
    y: &Vf,
    z: &Vf,
) -> Vf {
    let nyz = nabla(y, z);
    let nxz = nabla(x, z);
    let a = nabla(x, &nyz);
    let b = nabla(y, &nxz);
    let c = nabla(&bracket(x, y), z);
    VecField::new(
        s5::CHART,
        (0..6).map(|i| s5::reduce_sphere(&a.comps[i].sub(&b.comps[i]).sub(&c.comps[i]))).collect(),
    )
}

/// A rational point whose H-plane is spanned by four coordinate vectors
/// (all points supported in one complex coordinate plane qualify).
#[derive(Clone)]
pub struct NicePoint {
    pub p: [Scalar; 6],
    /// ambient indices of the Euclidean-orthonormal H-basis
    pub h_axes: [usize; 4],
}

pub fn nice_points() -> Vec<NicePoint> {
    vec![
        NicePoint {
            p: [
                Scalar::one(),
                Scalar::zero(),
                Scalar::zero(),
                Scalar::zero(),
                Scalar::zero(),
                Scalar::zero(),
            ],
            h_axes: [2, 3, 4, 5],
        },
        NicePoint {
            p: [
                Scalar::ratio(3, 5),
                Scalar::ratio(4, 5),
                Scalar::zero(),
                Scalar::zero(),
                Scalar::zero(),
                Scalar::zero(),
            ],
            h_axes: [2, 3, 4, 5],
        },
        NicePoint {
            p: [
                Scalar::zero(),
                Scalar::zero(),
                Scalar::ratio(5, 13),
                Scalar::ratio(12, 13),
                Scalar::zero(),
                Scalar::zero(),
            ],
            h_axes: [0, 1, 4, 5],
        },
    ]
}

/// All tensor data of the adapted connection at a nice point: components in
/// the Euclidean-orthonormal H-frame (u-frame), with the metric scale
/// carried explicitly (the g_H-orthonormal frame is gscale^{-1/2}·u).
pub struct ConnectionPoint<'a> {
    pub s: &'a AmbientSu2,
    pub np: NicePoint,
    /// canonical extensions of the u-frame vectors
    pub frame: Vec<Vf>,
    /// R^∇(u_a,u_b,u_c,u_d) = g(R(u_a,u_b)u_c, u_d), computed once
    pub r_nabla: Vec<Vec<Vec<Vec<Scalar>>>>,
    /// Levi-Civita curvature on the same frame
    pub r_g: Vec<Vec<Vec<Vec<Scalar>>>>,
    /// ω(u_a,u_b), L_vg(u_a,u_b), B(u_a,u_b), g(T_v u_a, u_b)
    pub omega_f: Vec<Vec<Scalar>>,
    pub lvg_f: Vec<Vec<Scalar>>,
    pub b_f: Vec<Vec<Scalar>>,
    pub tv_f: Vec<Vec<Scalar>>,
    pub f_const: Scalar,
}

fn eval_field_at(x: &Vf, p: &[Scalar; 6]) -> Vec<Scalar> {
    x.comps.iter().map(|c| c.eval(p)).collect()
}

fn eval_poly_at(q: &Poly<Scalar>, p: &[Scalar; 6]) -> Scalar {
    q.eval(p)
}

impl<'a> ConnectionPoint<'a> {
    pub fn new(s: &'a AmbientSu2, np: NicePoint) -> Self {
        let frame: Vec<Vf> = np
            .h_axes
            .iter()
            .map(|&a| {
                let mut w = [
                    Scalar::zero(),
                    Scalar::zero(),
                    Scalar::zero(),
                    Scalar::zero(),
                    Scalar::zero(),
                    Scalar::zero(),
                ];
                w[a] = Scalar::one();
                canonical_extension(&w)
            })
            .collect();
        let p = &np.p;
        let adapted = |x: &Vf, y: &Vf| adapted_nabla(s, x, y);
        let lc = |x: &Vf, y: &Vf| lc_nabla(s, x, y);
        // curvature components
        let mut r_nabla = vec![vec![vec![vec![Scalar::zero(); 4]; 4]; 4]; 4];
        let mut r_g = vec![vec![vec![vec![Scalar::zero(); 4]; 4]; 4]; 4];
        for a in 0..4 {
            for b in (a + 1)..4 {
                for c in 0..4 {
                    let rv = curvature_of(&adapted, &frame[a], &frame[b], &frame[c]);
                    let rg = curvature_of(&lc, &frame[a], &frame[b], &frame[c]);
                    for d in 0..4 {
                        let gv = metric(s, &rv, &frame[d]);
                        let gg = metric(s, &rg, &frame[d]);
                        let v1 = eval_poly_at(&gv, p);
                        let v2 = eval_poly_at(&gg, p);
                        r_nabla[a][b][c][d] = v1.clone();
                        r_nabla[b][a][c][d] = -v1;
                        r_g[a][b][c][d] = v2.clone();
                        r_g[b][a][c][d] = -v2;
                    }
                }
            }
        }
        let omega_f = eval_form2(&s.omega, &frame, p);
        let mut lvg_f = vec![vec![Scalar::zero(); 4]; 4];
        let mut b_f = vec![vec![Scalar::zero(); 4]; 4];
        let mut tv_f = vec![vec![Scalar::zero(); 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                lvg_f[a][b] = eval_poly_at(&lie_v_g(s, &frame[a], &frame[b]), p);
                b_f[a][b] = eval_poly_at(&second_fundamental(s, &frame[a], &frame[b]), p);
                tv_f[a][b] = eval_poly_at(&metric(s, &torsion_v(s, &frame[a]), &frame[b]), p);
            }
        }
        ConnectionPoint {
            s,
            np,
            frame,
            r_nabla,
            r_g,
            omega_f,
            lvg_f,
            b_f,
            tv_f,
            f_const: f_constant(s),
        }
    }
}

fn eval_form2(f: &Form, frame: &[Vf], p: &[Scalar; 6]) -> Vec<Vec<Scalar>> {
    let n = frame.len();
    let vals: Vec<Vec<Scalar>> = frame.iter().map(|x| eval_field_at(x, p)).collect();
    let mut out = vec![vec![Scalar::zero(); n]; n];
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            out[a][b] = crate::structure::eval_form_on_vectors(f, p, &[&vals[a], &vals[b]]);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Algebraic curvature toolkit on a 4-dimensional fiber

/// 4-tensors in u-frame components with the metric g = gscale·δ carried
/// separately. All contractions insert explicit gscale powers.
pub type T4 = Vec<Vec<Vec<Vec<Scalar>>>>;
pub type T2 = Vec<Vec<Scalar>>;

pub fn t4_zero() -> T4 {
    vec![vec![vec![vec![Scalar::zero(); 4]; 4]; 4]; 4]
}

pub fn t4_add(a: &T4, b: &T4) -> T4 {
    let mut out = t4_zero();
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    out[i][j][k][l] = &a[i][j][k][l] + &b[i][j][k][l];
                }
            }
        }
    }
    out
}

pub fn t4_sub(a: &T4, b: &T4) -> T4 {
    let mut out = t4_zero();
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    out[i][j][k][l] = &a[i][j][k][l] - &b[i][j][k][l];
                }
            }
        }
    }
    out
}

pub fn t4_scale(a: &T4, c: &Scalar) -> T4 {
    let mut out = t4_zero();
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    out[i][j][k][l] = &a[i][j][k][l] * c;
                }
            }
        }
    }
    out
}

pub fn t4_is_zero(a: &T4) -> bool {
    a.iter().flatten().flatten().flatten().all(|v| v.is_zero())
}

/// Symmetric part under the pair swap (ij)(kl) ↔ (kl)(ij).
pub fn pi_sym(r: &T4) -> T4 {
    let mut out = t4_zero();
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    out[i][j][k][l] = &(&r[i][j][k][l] + &r[k][l][i][j]) * &Scalar::ratio(1, 2);
                }
            }
        }
    }
    out
}

pub fn pi_alt(r: &T4) -> T4 {
    t4_sub(r, &pi_sym(r))
}

/// Bianchi map b(R)(X,Y,Z,W) = ⅓(R(X,Y,Z,W) + R(Y,Z,X,W) + R(Z,X,Y,W)).
pub fn bianchi(r: &T4) -> T4 {
    let mut out = t4_zero();
    let third = Scalar::ratio(1, 3);
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    let s = &(&(&r[i][j][k][l] + &r[j][k][i][l]) + &r[k][i][j][l]) * &third;
                    out[i][j][k][l] = s;
                }
            }
        }
    }
    out
}

/// Ricci contraction c(R)(X,Y) = Σ g^{aa} R(e_a, X, Y, e_a) = (1/gscale)·Σ_a R(u_a,X,Y,u_a).
pub fn ricci_contraction(r: &T4, gscale: &Scalar) -> T2 {
    let ginv = gscale.inv();
    let mut out = vec![vec![Scalar::zero(); 4]; 4];
    for x in 0..4 {
        for y in 0..4 {
            let mut acc = Scalar::zero();
            for a in 0..4 {
                acc += r[a][x][y][a].clone();
            }
            out[x][y] = &acc * &ginv;
        }
    }
    out
}

pub fn trace_t2(h: &T2, gscale: &Scalar) -> Scalar {
    let ginv = gscale.inv();
    let mut acc = Scalar::zero();
    for a in 0..4 {
        acc += h[a][a].clone();
    }
    &acc * &ginv
}

/// Kulkarni–Nomizu product (h ⊙∧ k)(X,Y,Z,W) =
/// h(X,W)k(Y,Z) + h(Y,Z)k(X,W) − h(X,Z)k(Y,W) − h(Y,W)k(X,Z).
pub fn kulkarni_nomizu(h: &T2, k: &T2) -> T4 {
    let mut out = t4_zero();
    for x in 0..4 {
        for y in 0..4 {
            for z in 0..4 {
                for w in 0..4 {
                    let t = &(&(&h[x][w] * &k[y][z]) + &(&h[y][z] * &k[x][w]))
                        - &(&(&h[x][z] * &k[y][w]) + &(&h[y][w] * &k[x][z]));
                    out[x][y][z][w] = t;
                }
            }
        }
    }
    out
}

pub fn t2_metric(gscale: &Scalar) -> T2 {
    let mut g = vec![vec![Scalar::zero(); 4]; 4];
    for a in 0..4 {
        g[a][a] = gscale.clone();
    }
    g
}

/// The curvature decomposition of R^H for the adapted connection:
/// R = C^H + b(π_s R) + π_a R with C^H = π_s R − b(π_s R), then
/// C^H = W^H + ½ r_H ⊙∧ g − (1/12) s_H (g ⊙∧ g).
pub struct CurvDecomposition {
    pub c_h: T4,
    pub w_h: T4,
    pub r_h: T2,
    pub s_h: Scalar,
    pub pi_a: T4,
    pub b_pi_s: T4,
}

pub fn decompose_curvature(r: &T4, gscale: &Scalar) -> CurvDecomposition {
    let sym = pi_sym(r);
    let alt = pi_alt(r);
    let b_pi_s = bianchi(&sym);
    let c_h = t4_sub(&sym, &b_pi_s);
    let r_h = ricci_contraction(&c_h, gscale);
    let s_h = trace_t2(&r_h, gscale);
    let g = t2_metric(gscale);
    let mut w_h = t4_sub(&c_h, &t4_scale(&kulkarni_nomizu(&r_h, &g), &Scalar::ratio(1, 2)));
    let ggkn = kulkarni_nomizu(&g, &g);
    w_h = t4_add(&w_h, &t4_scale(&ggkn, &(&s_h * &Scalar::ratio(1, 12))));
    CurvDecomposition { c_h, w_h, r_h, s_h, pi_a: alt, b_pi_s }
}

/// Action of a curvature-type tensor on 2-forms via Σ T_{klmn} ε^k ι^l ε^m ι^n
/// over a g_H-orthonormal frame, expressed in the u-frame with explicit
/// scale powers: the net factor is gscale^{-2} on u-frame component sums.
///
/// The operand and result are 2-forms in u-frame pair coordinates
/// (σ_{ab} = σ(u_a, u_b), antisymmetric matrix).
pub fn curvature_action(t: &T4, sigma: &T2, gscale: &Scalar) -> T2 {
    // ε^k ι^l ε^m ι^n σ with orthonormal frame f = s·u, s² = 1/gscale:
    // component chase in the u-frame gives (T σ)_{ab} with an overall
    // gscale^{-2}: derive from the model computation in the general lemma:
    // T_{klmn} ε^k ι^l ε^m ι^n e^{ab} = c(T)_{ka} e^{kb} + c(T)_{kb} e^{ak}
    //   − T_{bakm} e^{km} + 3 b(T)_{bakm} e^{km},
    // which we use directly as the definition of the action on Λ²; all
    // contractions on the right are u-frame sums with one inverse-metric
    // factor each.
    let ginv = gscale.inv();
    let ginv2 = &ginv * &ginv;
    let c_t = ricci_contraction(t, gscale);
    let b_t = bianchi(t);
    let mut out = vec![vec![Scalar::zero(); 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            if a == b {
                continue;
            }
            // σ = ½ σ_{ab} e^{ab}-sum; we act on basis bivectors and sum:
            // (Tσ)(u_a, u_b) = Σ_{x<y} σ_{xy} [action on e^{xy}]_{ab}
            let mut acc = Scalar::zero();
            for x in 0..4 {
                for y in 0..4 {
                    if x >= y || sigma[x][y].is_zero() {
                        continue;
                    }
                    // [c(T)_{k x} e^{k y} + c(T)_{k y} e^{x k}]
                    // evaluated at (a,b): e^{k y}(u_a,u_b) = δ_{ka}δ_{yb} − δ_{kb}δ_{ya}
                    let mut term = Scalar::zero();
                    // c-terms carry one explicit g^{-1} beyond ricci_contraction? no:
                    // ricci_contraction already includes it. The ε-ι frame scale
                    // gives a net single extra g^{-1} for the action; assembled
                    // below as ginv2 against raw sums and ginv against c-sums,
                    // matching the orthonormal-frame lemma exactly.
                    // c(T)_{k x} e^{k y}:
                    if y == b {
                        term += &c_t[a][x] * &ginv;
                    }
                    if y == a {
                        term -= &c_t[b][x] * &ginv;
                    }
                    // c(T)_{k y} e^{x k}: e^{x k}(u_a,u_b) = δ_{xa}δ_{kb} − δ_{xb}δ_{ka}
                    if x == a {
                        term += &c_t[b][y] * &ginv;
                    }
                    if x == b {
                        term -= &c_t[a][y] * &ginv;
                    }
                    // −T_{yxkm} e^{km}(u_a,u_b) = −(T_{yxab} − T_{yxba})
                    term -= &(&t[y][x][a][b] - &t[y][x][b][a]) * &ginv2;
                    // +3 b(T)_{yxkm} e^{km}
                    term += &(&(&b_t[y][x][a][b] - &b_t[y][x][b][a]) * &Scalar::from_int(3)) * &ginv2;
                    acc += &term * &sigma[x][y];
                }
            }
            out[a][b] = acc;
        }
    }
    out
}

/// π⁻ on u-frame 2-form components for the orientation with ω² > 0.
pub fn pi_minus_matrix(cp: &ConnectionPoint) -> Vec<Vec<Scalar>> {
    // pairs (01,02,03,12,13,23); star on the Euclidean frame with the
    // orientation of the structure: *e^{01} = ±e^{23} etc. Determine the
    // orientation sign from ω∧ω evaluated on the frame.
    let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let om = &cp.omega_f;
    // (ω∧ω)(u0,u1,u2,u3) = 2(ω01ω23 − ω02ω13 + ω03ω12)
    let pf = &(&(&om[0][1] * &om[2][3]) - &(&om[0][2] * &om[1][3])) + &(&om[0][3] * &om[1][2]);
    let sgn = pf.sign();
    assert!(sgn != 0, "omega nondegenerate");
    let s = Scalar::from_int(sgn as i64);
    // star in pair coords: *(e^{ab}) = sign(a,b,c,d)·s·e^{cd}
    let mut star = vec![vec![Scalar::zero(); 6]; 6];
    for (i, &(a, b)) in pairs.iter().enumerate() {
        let comp: Vec<usize> = (0..4).filter(|t| *t != a && *t != b).collect();
        let (c, d) = (comp[0], comp[1]);
        let j = pairs.iter().position(|&(x, y)| (x, y) == (c, d)).unwrap();
        let perm = [a, b, c, d];
        let mut sign = 1i64;
        for s1 in 0..4 {
            for s2 in s1 + 1..4 {
                if perm[s1] > perm[s2] {
                    sign = -sign;
                }
            }
        }
        star[j][i] = &Scalar::from_int(sign) * &s;
    }
    // π⁻ = ½(1 − *)
    let mut out = vec![vec![Scalar::zero(); 6]; 6];
    for i in 0..6 {
        for j in 0..6 {
            let idm = if i == j { Scalar::one() } else { Scalar::zero() };
            out[i][j] = &(&idm - &star[i][j]) * &Scalar::ratio(1, 2);
        }
    }
    out
}

/// The (W^H)⁻ block: conjugate W by π⁻ in pair coordinates and return the
/// 4-tensor with only the Λ⁻⊗Λ⁻ component.
pub fn w_minus_block(cp: &ConnectionPoint, w: &T4) -> T4 {
    let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let pm = pi_minus_matrix(cp);
    // W in pair coordinates: W_{(ab),(cd)} = w[a][b][c][d] (antisymmetrized)
    let mut wp = vec![vec![Scalar::zero(); 6]; 6];
    for (i, &(a, b)) in pairs.iter().enumerate() {
        for (j, &(c, d)) in pairs.iter().enumerate() {
            wp[i][j] = w[a][b][c][d].clone();
        }
    }
    // conjugate: π⁻ᵀ W π⁻ (π⁻ symmetric in the Euclidean pair basis)
    let mut tmp = vec![vec![Scalar::zero(); 6]; 6];
    for i in 0..6 {
        for j in 0..6 {
            let mut acc = Scalar::zero();
            for k in 0..6 {
                acc += &pm[k][i] * &wp[k][j];
            }
            tmp[i][j] = acc;
        }
    }
    let mut wminus = vec![vec![Scalar::zero(); 6]; 6];
    for i in 0..6 {
        for j in 0..6 {
            let mut acc = Scalar::zero();
            for k in 0..6 {
                acc += &tmp[i][k] * &pm[k][j];
            }
            wminus[i][j] = acc;
        }
    }
    // back to 4-tensor components with the antisymmetric convention
    let mut out = t4_zero();
    for (i, &(a, b)) in pairs.iter().enumerate() {
        for (j, &(c, d)) in pairs.iter().enumerate() {
            let v = &wminus[i][j];
            out[a][b][c][d] = v.clone();
            out[b][a][c][d] = -v.clone();
            out[a][b][d][c] = -v.clone();
            out[b][a][d][c] = v.clone();
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct ConnectionReport {
    pub koszul_ok: bool,
    pub metric_parallel: bool,
    pub reeb_parallel: bool,
    pub preserves_h: bool,
    pub torsion_h_is_omega_v: bool,
    pub b_formula: bool,
    pub tv_symmetric_is_half_lvg: bool,
    pub su2_parallel: bool,
    pub anchor: &'static str,
}

/// Properties (a)-(d) and (iii)-(v) of the adapted connection, verified
/// exactly on field batches at a nice point.
pub fn check_connection(s: &AmbientSu2, np: &NicePoint, seed: u64) -> ConnectionReport {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let p = &np.p;
    let mut rand_tangent = || -> Vf {
        let w: [Scalar; 6] = std::array::from_fn(|_| Scalar::from_int(rng.gen_range(-3i64..4)));
        let cand = canonical_extension(&w);
        cand
    };
    let vf = s5::u_field().scale(&s.reeb);
    let mut koszul_ok = true;
    let mut metric_parallel = true;
    let mut reeb_parallel = true;
    let mut preserves_h = true;
    let mut torsion_ok = true;
    let mut b_ok = true;
    let mut tv_ok = true;
    let mut su2_parallel = true;
    for _ in 0..4 {
        let x = rand_tangent();
        let y = rand_tangent();
        let z = rand_tangent();
        // Koszul: 2 g(∇^{LC}_X Y, Z) = RHS
        let lhs = metric(s, &lc_nabla(s, &x, &y), &z).scale(&Scalar::from_int(2));
        if !eval_poly_at(&lhs.sub(&koszul_rhs(s, &x, &y, &z)), p).is_zero() {
            koszul_ok = false;
        }
        // ∇ metric: X g(Y,Z) = g(∇_XY, Z) + g(Y, ∇_XZ) for H-fields
        let yh = project_h_field(s, &y);
        let zh = project_h_field(s, &z);
        let gyz = metric(s, &yh, &zh);
        let mut dxg = Poly::zero();
        for v in 0..6 {
            dxg = dxg.add(&x.comps[v].mul(&gyz.deriv(v)));
        }
        let rhs = metric(s, &adapted_nabla(s, &x, &yh), &zh)
            .add(&metric(s, &yh, &adapted_nabla(s, &x, &zh)));
        if !eval_poly_at(&s5::reduce_sphere(&dxg.sub(&rhs)), p).is_zero() {
            metric_parallel = false;
        }
        // ∇v = 0 and ∇ maps H-sections to H-sections
        let nv = adapted_nabla_tm(s, &x, &vf);
        if !nv.comps.iter().all(|c| eval_poly_at(c, p).is_zero()) {
            reeb_parallel = false;
        }
        let nxy = adapted_nabla(s, &x, &yh);
        if !eval_poly_at(&theta_of(s, &nxy), p).is_zero() {
            preserves_h = false;
        }
        // T(X,Y) = ω(X,Y)v for X,Y ∈ H
        let xh = project_h_field(s, &x);
        let t = torsion_of(s, &xh, &yh);
        let om = crate::structure::eval_form_on_vectors(
            &s.omega,
            p,
            &[&eval_field_at(&xh, p), &eval_field_at(&yh, p)],
        );
        let vv = eval_field_at(&vf, p);
        for i in 0..6 {
            let expect = &om * &vv[i];
            if eval_poly_at(&t.comps[i], p) != expect {
                torsion_ok = false;
            }
        }
        // B(X,Y) = −½ L_vg(X,Y) − ½ ω(X,Y)
        let b = eval_poly_at(&second_fundamental(s, &xh, &yh), p);
        let lvg = eval_poly_at(&lie_v_g(s, &xh, &yh), p);
        let expect = &(&lvg * &Scalar::ratio(-1, 2)) - &(&om * &Scalar::ratio(1, 2));
        if b != expect {
            b_ok = false;
        }
        // g(T_v^s X, Y) = ½ L_vg(X,Y): symmetric part of T_v
        let tvx = torsion_v(s, &xh);
        let tvy = torsion_v(s, &yh);
        let sym = &(&eval_poly_at(&metric(s, &tvx, &yh), p) + &eval_poly_at(&metric(s, &tvy, &xh), p))
            * &Scalar::ratio(1, 2);
        if sym != &lvg * &Scalar::ratio(1, 2) {
            tv_ok = false;
        }
        // ∇ω = ∇α = ∇β = 0 (parallel SU(2)-structure)
        for form in [&s.omega, &s.alpha, &s.beta] {
            let nf = nabla_form(s, &x, form);
            let val = crate::structure::eval_form_on_vectors(
                &nf,
                p,
                &[&eval_field_at(&yh, p), &eval_field_at(&zh, p)],
            );
            if !val.is_zero() {
                su2_parallel = false;
            }
        }
    }
    ConnectionReport {
        koszul_ok,
        metric_parallel,
        reeb_parallel,
        preserves_h,
        torsion_h_is_omega_v: torsion_ok,
        b_formula: b_ok,
        tv_symmetric_is_half_lvg: tv_ok,
        su2_parallel,
        anchor: ANCHOR_CONN,
    }
}

/// The adapted connection on general TM-fields: W = θ(W)v + W_H,
/// ∇_X W = X(θ(W))·v + ∇_X(W_H) (∇v = 0 and the splitting is preserved).
pub fn adapted_nabla_tm(s: &AmbientSu2, x: &Vf, w: &Vf) -> Vf {
    let thw = theta_of(s, w);
    let vf = s5::u_field().scale(&s.reeb);
    let wh = project_h_field(s, w);
    let mut dthw = Poly::zero();
    for v in 0..6 {
        dthw = dthw.add(&x.comps[v].mul(&thw.deriv(v)));
    }
    let out = add_fields(&scale_field(&vf, &s5::reduce_sphere(&dthw)), &adapted_nabla(s, x, &wh));
    VecField::new(s5::CHART, out.comps.iter().map(s5::reduce_sphere).collect())
}

/// Torsion T(X,Y) = ∇_XY − ∇_YX − [X,Y] of the adapted connection on
/// tangent fields.
pub fn torsion_of(s: &AmbientSu2, x: &Vf, y: &Vf) -> Vf {
    let a = adapted_nabla_tm(s, x, y);
    let b = adapted_nabla_tm(s, y, x);
    let c = bracket(x, y);
    VecField::new(
        s5::CHART,
        (0..6).map(|i| s5::reduce_sphere(&a.comps[i].sub(&b.comps[i]).sub(&c.comps[i]))).collect(),
    )
}

/// Covariant derivative of an H-form along a tangent field, as an ambient
/// representative (components against the canonical extensions).
pub fn nabla_form(s: &AmbientSu2, x: &Vf, sigma: &Form) -> Form {
    let p = sigma.degree as usize;
    assert!(p <= 4, "H-forms only");
    // the representative must act through the H-projection so that the
    // canonical frame extensions (which have v- and normal components) see
    // only the H-form
    let sigma = &s5::project_h(sigma);
    let mut out = Form::zero(s5::CHART, sigma.degree);
    let ext: Vec<Vf> = (0..6)
        .map(|i| {
            let mut w = [
                Scalar::zero(),
                Scalar::zero(),
                Scalar::zero(),
                Scalar::zero(),
                Scalar::zero(),
                Scalar::zero(),
            ];
            w[i] = Scalar::one();
            canonical_extension(&w)
        })
        .collect();
    let eval_on = |form: &Form, args: &[&Vf]| -> Poly<Scalar> {
        // σ(A,B,…) by successive interior products
        let mut cur = form.clone();
        for a in args {
            cur = cur.contract(a).unwrap();
        }
        s5::reduce_sphere(&cur.terms.get(&Idx::empty()).cloned().unwrap_or_else(Poly::zero))
    };
    if p == 0 {
        let comp = sigma.terms.get(&Idx::empty()).cloned().unwrap_or_else(Poly::zero);
        let mut dx = Poly::zero();
        for v in 0..6 {
            dx = dx.add(&x.comps[v].mul(&comp.deriv(v)));
        }
        out.add_term(Idx::empty(), s5::reduce_sphere(&dx));
        return out;
    }
    // all increasing index tuples of length p over 0..6
    let mut tuples: Vec<Vec<u8>> = vec![vec![]];
    for _ in 0..p {
        let mut next = Vec::new();
        for t in &tuples {
            let start = t.last().map(|&l| l + 1).unwrap_or(0);
            for i in start..6u8 {
                let mut v = t.clone();
                v.push(i);
                next.push(v);
            }
        }
        tuples = next;
    }
    for tup in tuples {
        let args: Vec<&Vf> = tup.iter().map(|&i| &ext[i as usize]).collect();
        let comp = eval_on(sigma, &args);
        let mut acc = Poly::zero();
        for v in 0..6 {
            acc = acc.add(&x.comps[v].mul(&comp.deriv(v)));
        }
        for (slot, &i) in tup.iter().enumerate() {
            let deriv_arg = adapted_nabla_tm(s, x, &ext[i as usize]);
            let mut args2: Vec<&Vf> = Vec::with_capacity(p);
            for (s2, &j) in tup.iter().enumerate() {
                if s2 == slot {
                    args2.push(&deriv_arg);
                } else {
                    args2.push(&ext[j as usize]);
                }
            }
            acc = acc.sub(&eval_on(sigma, &args2));
        }
        out.add_term(Idx::from_slice(&tup), s5::reduce_sphere(&acc));
    }
    out
}


/// Evaluate an ambient p-form at the nice point on u-frame tuples, as
/// components indexed by frame tuples.
pub fn form_components_at(cp: &ConnectionPoint, f: &Form, degree: usize) -> Vec<Scalar> {
    let p = &cp.np.p;
    let vals: Vec<Vec<Scalar>> = cp.frame.iter().map(|x| eval_field_at(x, p)).collect();
    let mut tuples: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..degree {
        let mut next = Vec::new();
        for t in &tuples {
            let start = t.last().map(|&l| l + 1).unwrap_or(0);
            for i in start..4 {
                let mut v = t.clone();
                v.push(i);
                next.push(v);
            }
        }
        tuples = next;
    }
    tuples
        .iter()
        .map(|t| {
            let refs: Vec<&Vec<Scalar>> = t.iter().map(|&i| &vals[i]).collect();
            crate::structure::eval_form_on_vectors(f, p, &refs)
        })
        .collect()
}

/// Gauss-equation residual over all frame index tuples (exact zero expected):
/// R_g(X,Y,Z,W) − R^∇(X,Y,Z,W) + B(Y,Z)B(X,W) − B(X,Z)B(Y,W)
///               − (f+1)/2·ω(X,Y)ω(Z,W).
pub fn gauss_residual(cp: &ConnectionPoint) -> Scalar {
    let f1 = &(&cp.f_const + &Scalar::one()) * &Scalar::ratio(1, 2);
    let mut worst = Scalar::zero();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let mut r = &cp.r_g[a][b][c][d] - &cp.r_nabla[a][b][c][d];
                    r += &cp.b_f[b][c] * &cp.b_f[a][d];
                    r -= &cp.b_f[a][c] * &cp.b_f[b][d];
                    r -= &(&f1 * &cp.omega_f[a][b]) * &cp.omega_f[c][d];
                    if !r.is_zero() {
                        worst = r;
                    }
                }
            }
        }
    }
    worst
}

/// First curvature symmetry identity residual (exact zero expected):
/// R(X,Y,Z,W) − R(Z,W,X,Y) + ½[Lvg(X,Z)ω(Y,W) + ω(X,Z)Lvg(Y,W)]
///   − ½[Lvg(X,W)ω(Y,Z) + ω(X,W)Lvg(Y,Z)].
pub fn curvature_symmetry_residual(cp: &ConnectionPoint) -> Scalar {
    let half = Scalar::ratio(1, 2);
    let mut worst = Scalar::zero();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let mut r = &cp.r_nabla[a][b][c][d] - &cp.r_nabla[c][d][a][b];
                    r += &(&(&cp.lvg_f[a][c] * &cp.omega_f[b][d]) + &(&cp.omega_f[a][c] * &cp.lvg_f[b][d])) * &half;
                    r -= &(&(&cp.lvg_f[a][d] * &cp.omega_f[b][c]) + &(&cp.omega_f[a][d] * &cp.lvg_f[b][c])) * &half;
                    if !r.is_zero() {
                        worst = r;
                    }
                }
            }
        }
    }
    worst
}

/// First-Bianchi-with-torsion residual (vector identity contracted with the
/// metric against the frame): cyclic R(X,Y)Z − [ω(X,Y)T_vZ + cyc] = 0.
pub fn bianchi_torsion_residual(cp: &ConnectionPoint) -> Scalar {
    let mut worst = Scalar::zero();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let cyc = &(&cp.r_nabla[a][b][c][d] + &cp.r_nabla[b][c][a][d]) + &cp.r_nabla[c][a][b][d];
                    let rhs = &(&(&cp.omega_f[a][b] * &cp.tv_f[c][d])
                        + &(&cp.omega_f[b][c] * &cp.tv_f[a][d]))
                        + &(&cp.omega_f[c][a] * &cp.tv_f[b][d]);
                    // the cited cyclic identity is stated for the opposite
                    // curvature sign convention (R(X,Y) = ∇_{[X,Y]} − [∇_X,∇_Y]);
                    // with the sign fixed by the Gauss equation the torsion
                    // side enters with a minus
                    let r = &cyc + &rhs;
                    if !r.is_zero() {
                        worst = r;
                    }
                }
            }
        }
    }
    worst
}

/// Skew part identity: π_a(R^H) = ¼ ω ⊙∧ L_vg (exact).
pub fn skew_curvature_residual(cp: &ConnectionPoint) -> Scalar {
    let alt = pi_alt(&cp.r_nabla);
    let kn = kulkarni_nomizu(&cp.omega_f, &cp.lvg_f);
    let expect = t4_scale(&kn, &Scalar::ratio(1, 4));
    let diff = t4_sub(&alt, &expect);
    diff.iter().flatten().flatten().flatten().find(|v| !v.is_zero()).cloned().unwrap_or_else(Scalar::zero)
}

/// Direct quadruple action Σ T_{klmn} ε^k ι^l ε^m ι^n σ over a
/// g_H-orthonormal frame, computed in the u-frame with the net scale
/// gscale^{-2}. Operand and result are antisymmetric u-frame component
/// matrices of 2-forms.
pub fn quadruple_action(t: &T4, sigma: &T2, gscale: &Scalar) -> T2 {
    let mut out = vec![vec![Scalar::zero(); 4]; 4];
    // ι_n σ gives covector c_a = σ_{na}; ε^m: (u^m∧c)_{ab} = δ_{ma}c_b − δ_{mb}c_a;
    // iterate twice, sum with T components, then scale.
    for k in 0..4 {
        for l in 0..4 {
            for m in 0..4 {
                for n in 0..4 {
                    if t[k][l][m][n].is_zero() {
                        continue;
                    }
                    // step 1: c1 = ι_n σ
                    // step 2: w = u^m ∧ c1 (2-form)
                    // step 3: c2 = ι_l w
                    // step 4: res = u^k ∧ c2
                    // assembled directly: contributes to out[a][b]
                    for b in 0..4 {
                        // c2_b where w = u^m∧c1: (ι_l w)_b = w_{lb} = δ_{ml} c1_b − δ_{mb} c1_l
                        let mut c2b = Scalar::zero();
                        if m == l {
                            c2b += sigma[n][b].clone();
                        }
                        if m == b {
                            c2b -= sigma[n][l].clone();
                        }
                        if c2b.is_zero() {
                            continue;
                        }
                        // res_{ab} = δ_{ka} c2_b − δ_{kb} c2_a: accumulate the first
                        // term at (k, b), the antisymmetry fills the rest
                        let w = &t[k][l][m][n] * &c2b;
                        out[k][b] = &out[k][b] + &w;
                        out[b][k] = &out[b][k] - &w;
                    }
                }
            }
        }
    }
    let g2inv = (&(gscale * gscale)).inv();
    for a in 0..4 {
        for b in 0..4 {
            out[a][b] = &out[a][b] * &g2inv;
        }
    }
    out
}

/// ω-action Σ ω_{kl} ε^k ι^l τ on u-frame 2-form components
/// (scale gscale^{-1}).
pub fn omega_action(cp: &ConnectionPoint, tau: &T2) -> T2 {
    let ginv = cp.s.gscale.inv();
    let mut out = vec![vec![Scalar::zero(); 4]; 4];
    for k in 0..4 {
        for l in 0..4 {
            if cp.omega_f[k][l].is_zero() {
                continue;
            }
            for b in 0..4 {
                // (u^k ∧ ι_l τ)_{ab} = δ_{ka} τ_{lb} − δ_{kb} τ_{la}
                let w = &cp.omega_f[k][l] * &tau[l][b];
                out[k][b] = &out[k][b] + &w;
                out[b][k] = &out[b][k] - &w;
            }
        }
    }
    for a in 0..4 {
        for b in 0..4 {
            out[a][b] = &out[a][b] * &ginv;
        }
    }
    out
}

/// Components of a 2-form rep on frame pairs as an antisymmetric matrix.
pub fn two_form_matrix_at(cp: &ConnectionPoint, f: &Form) -> T2 {
    let p = &cp.np.p;
    let vals: Vec<Vec<Scalar>> = cp.frame.iter().map(|x| eval_field_at(x, p)).collect();
    let mut out = vec![vec![Scalar::zero(); 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            if a == b {
                continue;
            }
            out[a][b] = crate::structure::eval_form_on_vectors(f, p, &[&vals[a], &vals[b]]);
        }
    }
    out
}

/// ∇*∇σ at the nice point: −g^{ab}∇²_{U_a,U_b}σ = −(1/gscale)Σ_a ∇²_{U_a,U_a}σ.
pub fn rough_laplacian_at(s: &AmbientSu2, cp: &ConnectionPoint, sigma: &Form) -> T2 {
    let ginv = s.gscale.inv();
    let mut acc = vec![vec![Scalar::zero(); 4]; 4];
    for a in 0..4 {
        let u = &cp.frame[a];
        let first = nabla_form(s, u, sigma);
        let second = nabla_form(s, u, &first);
        let w = adapted_nabla_tm(s, u, u);
        let corr = nabla_form(s, &w, sigma);
        let m2 = two_form_matrix_at(cp, &second);
        let mc = two_form_matrix_at(cp, &corr);
        for x in 0..4 {
            for y in 0..4 {
                acc[x][y] = &acc[x][y] - &(&(&m2[x][y] - &mc[x][y]) * &ginv);
            }
        }
    }
    acc
}

/// The Weitzenböck zeroth-order remainder on Λ⁻ at the point:
/// 𝓡σ = (W^H)⁻-action σ + (s_H/3)σ − (2/3) f σ.
pub struct WeitzenbockData {
    pub decomposition: CurvDecomposition,
    pub w_minus: T4,
    pub s_h: Scalar,
    pub f: Scalar,
}

pub fn weitzenbock_data(cp: &ConnectionPoint) -> WeitzenbockData {
    let dec = decompose_curvature(&cp.r_nabla, &cp.s.gscale);
    let w_minus = w_minus_block(cp, &dec.w_h);
    WeitzenbockData { s_h: dec.s_h.clone(), f: cp.f_const.clone(), decomposition: dec, w_minus }
}

pub fn remainder_apply(wd: &WeitzenbockData, cp: &ConnectionPoint, sigma: &T2) -> T2 {
    let act = quadruple_action(&wd.w_minus, sigma, &cp.s.gscale);
    let c = &(&wd.s_h * &Scalar::ratio(1, 3)) - &(&wd.f * &Scalar::ratio(2, 3));
    let mut out = vec![vec![Scalar::zero(); 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            out[a][b] = &act[a][b] + &(&c * &sigma[a][b]);
        }
    }
    out
}

/// Exact residual of Eq. 2□σ = ∇*∇σ + 𝓡σ on an anti-self-dual section at
/// the nice point (all components must vanish).
pub fn weitzenbock_residual(s: &AmbientSu2, cp: &ConnectionPoint, wd: &WeitzenbockData, sigma: &Form) -> Scalar {
    // □ for the structure metric = (1/gscale)·(standard-metric box)
    let box_s = s5::box_h(sigma);
    let lhs0 = two_form_matrix_at(cp, &box_s);
    let ginv = s.gscale.inv();
    let sig = two_form_matrix_at(cp, &s5::project_h(sigma));
    let rough = rough_laplacian_at(s, cp, &s5::project_h(sigma));
    let rem = remainder_apply(wd, cp, &sig);
    let mut worst = Scalar::zero();
    for a in 0..4 {
        for b in 0..4 {
            let lhs = &(&lhs0[a][b] * &ginv) * &Scalar::from_int(2);
            let r = &lhs - &(&rough[a][b] + &rem[a][b]);
            if !r.is_zero() {
                worst = r;
            }
        }
    }
    worst
}

/// Minimum eigenvalue enclosure of 𝓡 on Λ⁻ at the point, and the positivity
/// verdict for the vanishing criterion.
pub fn remainder_spectrum(cp: &ConnectionPoint, wd: &WeitzenbockData) -> ((f64, f64), bool) {
    use crate::linalg::{is_psd, min_rayleigh_enclosure, CMat};
    use crate::scalar::CScalar;
    let pairs = [(0usize, 1usize), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let pm = pi_minus_matrix(cp);
    // basis of Λ⁻: pivot columns of π⁻
    let pmat = CMat::from_fn(6, 6, |i, j| CScalar::from_real(pm[i][j].clone()));
    let basis_cols = crate::linalg::psd_pivot_basis(&pmat);
    let basis: Vec<Vec<Scalar>> = basis_cols
        .iter()
        .map(|&j| (0..6).map(|i| pm[i][j].clone()).collect())
        .collect();
    // act on each basis vector
    let apply = |v: &Vec<Scalar>| -> Vec<Scalar> {
        let mut sig = vec![vec![Scalar::zero(); 4]; 4];
        for (i, &(a, b)) in pairs.iter().enumerate() {
            sig[a][b] = v[i].clone();
            sig[b][a] = -v[i].clone();
        }
        let out = remainder_apply(wd, cp, &sig);
        pairs.iter().map(|&(a, b)| out[a][b].clone()).collect()
    };
    // fiber Gram on Λ²: ⟨e^{ab}, e^{cd}⟩ = gscale^{-2} δ-pairs (u-frame); the
    // common factor cancels in the generalized eigenproblem, so use δ.
    let n = basis.len();
    let g = CMat::from_fn(n, n, |i, j| {
        let mut acc = Scalar::zero();
        for k in 0..6 {
            acc += &basis[i][k] * &basis[j][k];
        }
        CScalar::from_real(acc)
    });
    let bmat = CMat::from_fn(n, n, |i, j| {
        let av = apply(&basis[j]);
        let mut acc = Scalar::zero();
        for k in 0..6 {
            acc += &basis[i][k] * &av[k];
        }
        CScalar::from_real(acc)
    });
    let enc = min_rayleigh_enclosure(&bmat, &g, 1e-12).expect("3x3 spectrum");
    let positive = {
        // exact: B ≻ 0 on the span ⟺ min Rayleigh > 0: test PSD at 0 and
        // non-PSD slightly above... strict positivity via B − εG PSD for the
        // certified lower bound ε = enc.0 when positive
        let zero_psd = crate::linalg::rayleigh_at_least(&bmat, &g, &Scalar::zero());
        let strict = is_psd(&bmat.sub_scaled(&g, &Scalar::ratio(1, 1000)));
        zero_psd && (strict || enc.0.to_f64() > 0.0)
    };
    ((enc.0.to_f64(), enc.1.to_f64()), positive)
}

/// KN toolkit identities at a point (exact booleans).
#[derive(Clone, Debug, Serialize)]
pub struct KnReport {
    pub b_of_h_kn_g_zero: bool,
    pub c_of_h_kn_g: bool,
    pub b_idempotent: bool,
    pub kn_omega_lemma: bool,
    pub c_omega_kn_lvg: bool,
    pub i_wedge_i_identity_on_asd: bool,
    pub skew_curvature: bool,
    pub action_lemma: bool,
    pub anchor: &'static str,
}

pub fn kn_toolkit(cp: &ConnectionPoint, seed: u64) -> KnReport {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let gscale = &cp.s.gscale;
    let g = t2_metric(gscale);
    fn rand_sym(rng: &mut rand_chacha::ChaCha8Rng, n: i64) -> T2 {
        use rand::Rng;
        let mut h = vec![vec![Scalar::zero(); 4]; 4];
        for a in 0..4 {
            for b in a..4 {
                let v = Scalar::from_int(rng.gen_range(-n..=n));
                h[a][b] = v.clone();
                h[b][a] = v;
            }
        }
        h
    }
    let mut ok_bkn = true;
    let mut ok_ckn = true;
    let mut ok_bidem = true;
    let mut ok_knom = true;
    let mut ok_action = true;
    for _ in 0..20 {
        let h = rand_sym(&mut rng, 5);
        let kn = kulkarni_nomizu(&h, &g);
        if !t4_is_zero(&bianchi(&kn)) {
            ok_bkn = false;
        }
        // c(h ⊙∧ g) = 2h + tr(h) g
        let c = ricci_contraction(&kn, gscale);
        let tr = trace_t2(&h, gscale);
        for a in 0..4 {
            for b in 0..4 {
                let expect = &(&h[a][b] * &Scalar::from_int(2)) + &(&tr * &g[a][b]);
                if c[a][b] != expect {
                    ok_ckn = false;
                }
            }
        }
        // b idempotent on a random 4-tensor with 2-form antisymmetries
        let mut t = t4_zero();
        for a in 0..4 {
            for b in (a + 1)..4 {
                for x in 0..4 {
                    for y in (x + 1)..4 {
                        let v = Scalar::from_int(rng.gen_range(-4i64..5));
                        t[a][b][x][y] = v.clone();
                        t[b][a][x][y] = -v.clone();
                        t[a][b][y][x] = -v.clone();
                        t[b][a][y][x] = v;
                    }
                }
            }
        }
        let bt = bianchi(&t);
        if !t4_is_zero(&t4_sub(&bianchi(&bt), &bt)) {
            ok_bidem = false;
        }
        // KN-omega lemma: 3b(ω⊙∧h)-coefficients equal (ω⊙∧h)-coefficients as
        // 2-form actions: compare the e^{km}-contraction terms directly
        let knw = kulkarni_nomizu(&cp.omega_f, &h);
        let bknw = bianchi(&knw);
        for bq in 0..4 {
            for aq in 0..4 {
                for k in 0..4 {
                    for m in 0..4 {
                        let lhs = &(&bknw[bq][aq][k][m] - &bknw[bq][aq][m][k]) * &Scalar::from_int(3);
                        let rhs = &knw[bq][aq][k][m] - &knw[bq][aq][m][k];
                        if lhs != rhs {
                            ok_knom = false;
                        }
                    }
                }
            }
        }
        // action lemma: quadruple action equals the c/b right-hand side
        let sig = {
            let mut m = vec![vec![Scalar::zero(); 4]; 4];
            for a in 0..4 {
                for b in (a + 1)..4 {
                    let v = Scalar::from_int(rng.gen_range(-4i64..5));
                    m[a][b] = v.clone();
                    m[b][a] = -v;
                }
            }
            m
        };
        let lhs = quadruple_action(&t, &sig, gscale);
        let rhs = curvature_action(&t, &sig, gscale);
        for a in 0..4 {
            for b in 0..4 {
                if lhs[a][b] != rhs[a][b] {
                    ok_action = false;
                }
            }
        }
    }
    // c(ω ⊙∧ L_vg) = tr(L_vg)·ω
    let knl = kulkarni_nomizu(&cp.omega_f, &cp.lvg_f);
    let c = ricci_contraction(&knl, gscale);
    let tr = trace_t2(&cp.lvg_f, gscale);
    let mut ok_cw = true;
    for a in 0..4 {
        for b in 0..4 {
            if c[a][b] != &tr * &cp.omega_f[a][b] {
                ok_cw = false;
            }
        }
    }
    // I∧I acts as the identity on Λ⁻: (I∧I σ)(X,Y) = σ(IX, IY) for σ ASD
    let pm = pi_minus_matrix(cp);
    let pairs = [(0usize, 1usize), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    // I in the u-frame: ω(X,Y) = g(IX,Y) ⟹ I = (1/gscale)·(-Ω) acting on
    // column vectors as in the pointwise module
    let mut imat = vec![vec![Scalar::zero(); 4]; 4];
    for x in 0..4 {
        for y in 0..4 {
            imat[x][y] = -(&cp.omega_f[x][y] / gscale);
        }
    }
    let mut ok_ii = true;
    for j in 0..6 {
        // σ = j-th column of π⁻ reconstructed
        let mut sig = vec![vec![Scalar::zero(); 4]; 4];
        for (i, &(a, b)) in pairs.iter().enumerate() {
            sig[a][b] = pm[i][j].clone();
            sig[b][a] = -pm[i][j].clone();
        }
        for a in 0..4 {
            for b in 0..4 {
                // (I∧Iσ)(u_a,u_b) = σ(Iu_a, Iu_b)
                let mut acc = Scalar::zero();
                for x in 0..4 {
                    for y in 0..4 {
                        acc += &(&imat[x][a] * &imat[y][b]) * &sig[x][y];
                    }
                }
                if acc != sig[a][b] {
                    ok_ii = false;
                }
            }
        }
    }
    KnReport {
        b_of_h_kn_g_zero: ok_bkn,
        c_of_h_kn_g: ok_ckn,
        b_idempotent: ok_bidem,
        kn_omega_lemma: ok_knom,
        c_omega_kn_lvg: ok_cw,
        i_wedge_i_identity_on_asd: ok_ii,
        skew_curvature: skew_curvature_residual(cp).is_zero(),
        action_lemma: ok_action,
        anchor: ANCHOR_KN,
    }
}

/// d_H = Σ e^k∧∇_k and d_H* = −Σ e_k⌟∇_k residuals on a random H-form at
/// the point (frame formulas of the adapted connection vs the sphere
/// operators; both scale-free as assembled).
pub fn frame_formula_residuals(s: &AmbientSu2, cp: &ConnectionPoint, sigma: &Form) -> (Scalar, Scalar) {
    let p = &cp.np.p;
    let sigma = s5::project_h(sigma);
    let deg = sigma.degree as usize;
    // d_H σ vs Σ_a u^a ∧ ∇_{U_a}σ
    let dh = s5::d_h(&sigma);
    let mut lhs_d = form_components_at(cp, &dh, deg + 1);
    let mut rhs_d = vec![Scalar::zero(); lhs_d.len()];
    // d* for the structure metric = (1/gscale)·dstar_e vs −(1/gscale)Σ ι_{u_a}∇_{U_a}
    let ds = s5::dstar_e(&sigma);
    let mut lhs_s = if deg >= 1 { form_components_at(cp, &ds, deg - 1) } else { vec![] };
    let mut rhs_s = vec![Scalar::zero(); lhs_s.len()];
    let vals: Vec<Vec<Scalar>> = cp.frame.iter().map(|x| eval_field_at(x, p)).collect();
    for a in 0..4 {
        let nf = nabla_form(s, &cp.frame[a], &sigma);
        // wedge with u^a: components on tuples
        let mut tuples: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..(deg + 1) {
            let mut next = Vec::new();
            for t in &tuples {
                let start = t.last().map(|&l| l + 1).unwrap_or(0);
                for i in start..4 {
                    let mut v = t.clone();
                    v.push(i);
                    next.push(v);
                }
            }
            tuples = next;
        }
        for (ti, t) in tuples.iter().enumerate() {
            // (u^a ∧ τ)(u_{t0},…) = Σ_pos (−1)^pos δ_{a,t_pos} τ(rest)
            for (pos, &tp) in t.iter().enumerate() {
                if tp != a {
                    continue;
                }
                let rest: Vec<usize> = t.iter().enumerate().filter(|(q, _)| *q != pos).map(|(_, &v)| v).collect();
                let refs: Vec<&Vec<Scalar>> = rest.iter().map(|&i| &vals[i]).collect();
                let tv = crate::structure::eval_form_on_vectors(&nf, p, &refs);
                if pos % 2 == 0 {
                    rhs_d[ti] = &rhs_d[ti] + &tv;
                } else {
                    rhs_d[ti] = &rhs_d[ti] - &tv;
                }
            }
        }
        if deg >= 1 {
            // −ι_{u_a}∇_a σ components on (deg−1)-tuples; codifferential needs
            // the inverse metric factor collected below
            let mut tuples2: Vec<Vec<usize>> = vec![vec![]];
            for _ in 0..(deg - 1) {
                let mut next = Vec::new();
                for t in &tuples2 {
                    let start = t.last().map(|&l| l + 1).unwrap_or(0);
                    for i in start..4 {
                        let mut v = t.clone();
                        v.push(i);
                        next.push(v);
                    }
                }
                tuples2 = next;
            }
            for (ti, t) in tuples2.iter().enumerate() {
                let mut args = vec![a];
                args.extend(t.iter().cloned());
                // not increasing in general: evaluate with sign via permutation
                let refs: Vec<&Vec<Scalar>> = args.iter().map(|&i| &vals[i]).collect();
                let tv = crate::structure::eval_form_on_vectors(&nf, p, &refs);
                rhs_s[ti] = &rhs_s[ti] - &tv;
            }
        }
    }
    // codifferential scales: lhs_s is the e-star codifferential; the frame
    // formula with the g_H-orthonormal frame gives (1/gscale)Σ_u, and the
    // structure codifferential is (1/gscale)·dstar_e, so compare Σ_u-form
    // against dstar_e directly.
    let mut worst_d = Scalar::zero();
    for (l, r) in lhs_d.iter_mut().zip(rhs_d.iter_mut()) {
        let v = &*l - &*r;
        if !v.is_zero() {
            worst_d = v;
        }
    }
    let mut worst_s = Scalar::zero();
    for (l, r) in lhs_s.iter_mut().zip(rhs_s.iter_mut()) {
        let v = &*l - &*r;
        if !v.is_zero() {
            worst_s = v;
        }
    }
    (worst_d, worst_s)
}

/// General Weitzenböck residual on an H-form of any degree:
/// Δ_H γ = ∇*∇γ + Σ ω_{kl} ε^k ι^l ∇_v γ + Σ ε^k ι^l R(e_k,e_l)_* γ.
pub fn general_weitzenbock_residual(s: &AmbientSu2, cp: &ConnectionPoint, gamma: &Form) -> Scalar {
    let gamma = s5::project_h(gamma);
    let deg = gamma.degree as usize;
    let p = &cp.np.p;
    let ginv = s.gscale.inv();
    // LHS: Δ for the structure metric = (1/gscale)·delta_e
    let lhs_form = s5::delta_h(&gamma);
    let lhs: Vec<Scalar> = form_components_at(cp, &lhs_form, deg).iter().map(|v| v * &ginv).collect();
    // ∇*∇ on general degree: reuse the 2-form path only when deg == 2; here
    // recompute generically
    let mut rough = vec![Scalar::zero(); lhs.len()];
    let tuples = tuples_of(deg);
    let vals: Vec<Vec<Scalar>> = cp.frame.iter().map(|x| eval_field_at(x, p)).collect();
    for a in 0..4 {
        let u = &cp.frame[a];
        let first = nabla_form(s, u, &gamma);
        let second = nabla_form(s, u, &first);
        let w = adapted_nabla_tm(s, u, u);
        let corr = nabla_form(s, &w, &gamma);
        for (ti, t) in tuples.iter().enumerate() {
            let refs: Vec<&Vec<Scalar>> = t.iter().map(|&i| &vals[i]).collect();
            let v2 = crate::structure::eval_form_on_vectors(&second, p, &refs);
            let vc = crate::structure::eval_form_on_vectors(&corr, p, &refs);
            rough[ti] = &rough[ti] - &(&(&v2 - &vc) * &ginv);
        }
    }
    // ω-term: Σ ω_{kl} ε^k ι^l ∇_v γ with scale gscale^{-1} in the u-frame
    let vf = s5::u_field().scale(&s.reeb);
    let nv = nabla_form(s, &vf, &gamma);
    let mut omega_term = vec![Scalar::zero(); lhs.len()];
    for k in 0..4 {
        for l in 0..4 {
            if cp.omega_f[k][l].is_zero() {
                continue;
            }
            for (ti, t) in tuples.iter().enumerate() {
                // (u^k ∧ ι_{u_l} ∇_vγ)(u_t…)
                for (pos, &tp) in t.iter().enumerate() {
                    if tp != k {
                        continue;
                    }
                    let mut args = vec![l];
                    args.extend(t.iter().enumerate().filter(|(q, _)| *q != pos).map(|(_, &v)| v));
                    let refs: Vec<&Vec<Scalar>> = args.iter().map(|&i| &vals[i]).collect();
                    let tv = crate::structure::eval_form_on_vectors(&nv, p, &refs);
                    let signed = if pos % 2 == 0 { tv } else { -tv };
                    omega_term[ti] = &omega_term[ti] + &(&(&cp.omega_f[k][l] * &signed) * &ginv);
                }
            }
        }
    }
    // curvature term: Σ_{k,l} ε^k ι^l (R(f_k,f_l)_* γ) over the ON frame:
    // in the u-frame this carries gscale^{-2}: ε·ι gives 1, the two frame
    // slots of R give s⁴·... R(f_k,f_l)_*: the additional ι/ε pair indices:
    // assembling as with the general lemma: use components R_{klmn} and act:
    // R(e_k,e_l)_*γ = derivation action with the endomorphism R(e_k,e_l):
    // (R(X,Y)_*γ)(Z…) = −Σ_i γ(…, R(X,Y)Z_i, …); R(u_k,u_l)u_m = Σ_n
    // R_{klmn} g^{nn} u_n = (1/gscale) Σ_n R_u[k][l][m][n] u_n.
    let mut curv_term = vec![Scalar::zero(); lhs.len()];
    let gamma_vals: Vec<Vec<usize>> = tuples.clone();
    let gam = |t: &[usize]| -> Scalar {
        let refs: Vec<&Vec<Scalar>> = t.iter().map(|&i| &vals[i]).collect();
        crate::structure::eval_form_on_vectors(&gamma, p, &refs)
    };
    for k in 0..4 {
        for l in 0..4 {
            // endomorphism E = R(u_k, u_l): E(u_m) = (1/gscale)Σ_n R_{klmn}u_n
            // derivation action on γ evaluated on tuples, then ε^k ι^l with
            // net scale gscale^{-1} (f-frame) × s² from the two R slots...
            // total in u-frame: gscale^{-2} overall.
            for (ti, t) in gamma_vals.iter().enumerate() {
                // (ε^k ι^l τ)(t) with τ = R_*γ
                for (pos, &tp) in t.iter().enumerate() {
                    if tp != k {
                        continue;
                    }
                    let mut args = vec![l];
                    args.extend(t.iter().enumerate().filter(|(q, _)| *q != pos).map(|(_, &v)| v));
                    // τ(args) = −Σ_slots γ(…E(arg_slot)…)
                    let mut tau = Scalar::zero();
                    for (sl, &aarg) in args.iter().enumerate() {
                        for n in 0..4 {
                            let coef = &cp.r_nabla[k][l][aarg][n];
                            if coef.is_zero() {
                                continue;
                            }
                            let mut args2 = args.clone();
                            args2[sl] = n;
                            // evaluate γ on args2 (may repeat indices → 0 handled
                            // by the antisymmetric evaluation)
                            let refs: Vec<&Vec<Scalar>> = args2.iter().map(|&i| &vals[i]).collect();
                            let gv = crate::structure::eval_form_on_vectors(&gamma, p, &refs);
                            tau = &tau - &(&(coef / &s.gscale) * &gv);
                        }
                    }
                    let signed = if pos % 2 == 0 { tau } else { -tau };
                    curv_term[ti] = &curv_term[ti] + &(&signed * &(&ginv * &ginv));
                }
            }
            let _ = gam;
        }
    }
    let mut worst = Scalar::zero();
    for i in 0..lhs.len() {
        let r = &(&lhs[i] - &rough[i]) - &(&omega_term[i] + &curv_term[i]);
        if !r.is_zero() {
            worst = r;
        }
    }
    worst
}

fn tuples_of(deg: usize) -> Vec<Vec<usize>> {
    let mut tuples: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..deg {
        let mut next = Vec::new();
        for t in &tuples {
            let start = t.last().map(|&l| l + 1).unwrap_or(0);
            for i in start..4 {
                let mut v = t.clone();
                v.push(i);
                next.push(v);
            }
        }
        tuples = next;
    }
    tuples
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn koszul_and_connection_properties_round() {
        let s = AmbientSu2::round().conjugate_branch();
        let np = nice_points()[0].clone();
        let rep = check_connection(&s, &np, 2026);
        assert!(rep.koszul_ok, "closed-form LC connection must satisfy Koszul");
        assert!(rep.metric_parallel, "{:?}", rep);
        assert!(rep.reeb_parallel);
        assert!(rep.preserves_h);
        assert!(rep.torsion_h_is_omega_v);
        assert!(rep.b_formula);
        assert!(rep.tv_symmetric_is_half_lvg);
        assert!(rep.su2_parallel);
    }

    #[test]
    fn curvature_suite_round() {
        let s = AmbientSu2::round().conjugate_branch();
        let cp = ConnectionPoint::new(&s, nice_points()[0].clone());
        assert!(gauss_residual(&cp).is_zero(), "Gauss equation exact");
        assert!(curvature_symmetry_residual(&cp).is_zero());
        assert!(bianchi_torsion_residual(&cp).is_zero());
        let kn = kn_toolkit(&cp, 99);
        assert!(kn.b_of_h_kn_g_zero, "{:?}", kn);
        assert!(kn.c_of_h_kn_g);
        assert!(kn.b_idempotent);
        assert!(kn.kn_omega_lemma);
        assert!(kn.c_omega_kn_lvg);
        assert!(kn.i_wedge_i_identity_on_asd);
        assert!(kn.skew_curvature);
        assert!(kn.action_lemma);
    }

    #[test]
    fn weitzenbock_identity_round() {
        use rand::SeedableRng;
        let s = AmbientSu2::round().conjugate_branch();
        let cp = ConnectionPoint::new(&s, nice_points()[0].clone());
        let wd = weitzenbock_data(&cp);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..3 {
            let sigma = s5::rand_asd(&mut rng, 2);
            let r = weitzenbock_residual(&s, &cp, &wd, &sigma);
            assert!(r.is_zero(), "W-identity residual: {:?}", r);
        }
        let ((lo, hi), positive) = remainder_spectrum(&cp, &wd);
        assert!(positive, "remainder must be positive definite on the round structure: [{}, {}]", lo, hi);
    }

    #[test]
    fn weitzenbock_identity_squashed() {
        use rand::SeedableRng;
        let s = AmbientSu2::squashed(&Scalar::from_int(2)).conjugate_branch();
        let cp = ConnectionPoint::new(&s, nice_points()[0].clone());
        assert!(gauss_residual(&cp).is_zero());
        let wd = weitzenbock_data(&cp);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        for _ in 0..2 {
            let sigma = s5::rand_asd(&mut rng, 2);
            let r = weitzenbock_residual(&s, &cp, &wd, &sigma);
            assert!(r.is_zero(), "W-identity (squashed) residual: {:?}", r);
        }
    }

    #[test]
    fn frame_formulas_and_general_weitzenbock() {
        use rand::SeedableRng;
        let s = AmbientSu2::round().conjugate_branch();
        let cp = ConnectionPoint::new(&s, nice_points()[0].clone());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for deg in 1..=2u8 {
            let sigma = s5::rand_h_form(&mut rng, deg, 2);
            let (d_res, ds_res) = frame_formula_residuals(&s, &cp, &sigma);
            assert!(d_res.is_zero(), "d_H = Σ e^k∧∇_k fails at degree {}: {:?}", deg, d_res);
            assert!(ds_res.is_zero(), "d_H* = −Σ e_k⌟∇_k fails at degree {}: {:?}", deg, ds_res);
        }
        for deg in 0..=2u8 {
            let gamma = s5::rand_h_form(&mut rng, deg, 1);
            let r = general_weitzenbock_residual(&s, &cp, &gamma);
            assert!(r.is_zero(), "general Weitzenböck fails at degree {}: {:?}", deg, r);
        }
    }

    #[test]
    fn koszul_and_connection_properties_squashed() {
        let s = AmbientSu2::squashed(&Scalar::from_int(2)).conjugate_branch();
        let np = nice_points()[1].clone();
        let rep = check_connection(&s, &np, 2027);
        assert!(rep.koszul_ok);
        assert!(rep.metric_parallel);
        assert!(rep.reeb_parallel);
        assert!(rep.preserves_h);
        assert!(rep.torsion_h_is_omega_v);
        assert!(rep.b_formula);
        assert!(rep.tv_symmetric_is_half_lvg);
        assert!(rep.su2_parallel);
    }
}
