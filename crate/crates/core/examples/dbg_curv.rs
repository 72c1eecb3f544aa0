use pentaform::connection::*;
use pentaform::su2::AmbientSu2;
use pentaform::s5;
use std::time::Instant;
fn main() {
    let s = AmbientSu2::round().conjugate_branch();
    let t0 = Instant::now();
    let cp = ConnectionPoint::new(&s, nice_points()[0].clone());
    println!("ConnectionPoint::new: {:?}", t0.elapsed());
    let t = Instant::now();
    println!("gauss residual: {:?} ({:?})", gauss_residual(&cp), t.elapsed());
    println!("curv sym: {:?}", curvature_symmetry_residual(&cp));
    println!("bianchi: {:?}", bianchi_torsion_residual(&cp));
    println!("skew: {:?}", skew_curvature_residual(&cp));
    let t = Instant::now();
    let kn = kn_toolkit(&cp, 99);
    println!("kn_toolkit ({:?}): {:?}", t.elapsed(), kn);
    let t = Instant::now();
    let wd = weitzenbock_data(&cp);
    println!("weitzenbock_data: {:?}; s_H = {:?}, f = {:?}", t.elapsed(), wd.s_h, wd.f);
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let sigma = s5::rand_asd(&mut rng, 1);
    let t1 = Instant::now();
    let r = weitzenbock_residual(&s, &cp, &wd, &sigma);
    println!("W-ID residual: {:?} ({:?})", r, t1.elapsed());
    let t = Instant::now();
    let ((lo,hi),pos) = remainder_spectrum(&cp, &wd);
    println!("remainder spectrum ({:?}): [{}, {}] positive={}", t.elapsed(), lo, hi, pos);
}
