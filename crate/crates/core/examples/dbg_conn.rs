use pentaform::connection::*;
use pentaform::su2::AmbientSu2;
use pentaform::{s5, structure, Scalar};
use pentaform::poly::Poly;
fn main() {
    let s = AmbientSu2::round();
    let np = nice_points()[0].clone();
    let p = &np.p;
    let mk = |w: [i64;6]| -> pentaform::forms::Vf {
        let w: [Scalar;6] = std::array::from_fn(|i| Scalar::from_int(w[i]));
        canonical_extension(&w)
    };
    let x1 = mk([0,1,0,0,0,0]);             // = e2 at p0
    let sc = &Scalar::from_int(3) * &s.reeb;
    let x2 = s5::u_field().scale(&sc); // = 3v = u field, u(p0) = e2
    let alpha_h = s5::project_h(&s.alpha);
    let y = mk([0,0,1,0,0,0]);
    let z = mk([0,0,0,0,1,0]);
    // term 1: X(alpha(Y,Z))
    let comp = {
        let c1 = alpha_h.contract(&y).unwrap().contract(&z).unwrap();
        // careful order: alpha(Y,Z) = (Z ⌟ (Y ⌟ alpha))
        s5::reduce_sphere(&c1.terms.get(&pentaform::forms::Idx::empty()).cloned().unwrap_or_else(Poly::zero))
    };
    let d_along = |x: &pentaform::forms::Vf, f: &Poly<Scalar>| -> Scalar {
        let mut acc = Poly::zero();
        for v in 0..6 { acc = acc.add(&x.comps[v].mul(&f.deriv(v))); }
        acc.eval(p)
    };
    println!("T1 x1: {:?} | x2: {:?}", d_along(&x1, &comp), d_along(&x2, &comp));
    // term 2: alpha(nabla_X Y, Z)
    let a1 = adapted_nabla_tm(&s, &x1, &y);
    let a2 = adapted_nabla_tm(&s, &x2, &y);
    let av1: Vec<Scalar> = a1.comps.iter().map(|c| c.eval(p)).collect();
    let av2: Vec<Scalar> = a2.comps.iter().map(|c| c.eval(p)).collect();
    println!("nabla_x1 Y at p: {:?}", av1);
    println!("nabla_x2 Y at p: {:?}", av2);
    let zv: Vec<Scalar> = z.comps.iter().map(|c| c.eval(p)).collect();
    let t2_1 = structure::eval_form_on_vectors(&alpha_h, p, &[&av1, &zv]);
    let t2_2 = structure::eval_form_on_vectors(&alpha_h, p, &[&av2, &zv]);
    println!("T2 x1: {:?} | x2: {:?}", t2_1, t2_2);
}
