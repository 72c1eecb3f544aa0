//! Exact monomial moments over the unit sphere S⁵ ⊂ R⁶.
//!
//! For even exponents a = 2b,
//!   ∫_{S⁵} Π xᵢ^{aᵢ} dA = 2 Π Γ((aᵢ+1)/2) / Γ((Σaᵢ+6)/2)
//!                       = 2 π³ Π[(2bᵢ)! / (4^{bᵢ} bᵢ!)] / (|b|+2)!
//! and zero when any aᵢ is odd. All moments are stored in units of
//! Vol(S⁵) = π³, so the returned rationals are ∫/π³.

use crate::poly::{Mono, Poly};
use crate::scalar::{CScalar, Rat, Scalar};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::sync::RwLock;

fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    acc
}

fn moment_uncached(exps: &[u8; 6]) -> Rat {
    if exps.iter().any(|&e| e % 2 == 1) {
        return Rat::zero();
    }
    let b: Vec<u64> = exps.iter().map(|&e| (e / 2) as u64).collect();
    let bsum: u64 = b.iter().sum();
    let mut num = BigInt::from(2);
    let mut den = BigInt::one();
    for &bi in &b {
        num *= factorial(2 * bi);
        den *= BigInt::from(4u64).pow(bi as u32) * factorial(bi);
    }
    den *= factorial(bsum + 2);
    Rat::new(num, den)
}

static MOMENT_CACHE: RwLock<Option<HashMap<[u8; 6], Rat>>> = RwLock::new(None);

/// ∫_{S⁵} x^a dA in units of π³.
pub fn moment(exps: &[u8; 6]) -> Rat {
    if exps.iter().any(|&e| e % 2 == 1) {
        return Rat::zero();
    }
    {
        let guard = MOMENT_CACHE.read().unwrap();
        if let Some(map) = guard.as_ref() {
            if let Some(v) = map.get(exps) {
                return v.clone();
            }
        }
    }
    let v = moment_uncached(exps);
    let mut guard = MOMENT_CACHE.write().unwrap();
    guard.get_or_insert_with(HashMap::new).insert(*exps, v.clone());
    v
}

fn mono_exps(m: &Mono) -> Option<[u8; 6]> {
    if m.0[6] != 0 {
        return None;
    }
    let mut e = [0u8; 6];
    e.copy_from_slice(&m.0[..6]);
    Some(e)
}

/// ∫_{S⁵} p dA in units of π³ for a polynomial in the six ambient variables.
pub fn integrate(p: &Poly<Scalar>) -> Scalar {
    let mut acc = Scalar::zero();
    for (m, c) in &p.terms {
        let e = mono_exps(m).expect("ambient integrand uses 6 variables");
        let w = moment(&e);
        if !w.is_zero() {
            acc += c * &Scalar::from_rat(w);
        }
    }
    acc
}

pub fn integrate_c(p: &Poly<CScalar>) -> CScalar {
    let mut acc = CScalar::zero();
    for (m, c) in &p.terms {
        let e = mono_exps(m).expect("ambient integrand uses 6 variables");
        let w = moment(&e);
        if !w.is_zero() {
            let ws = CScalar::from_real(Scalar::from_rat(w));
            acc += c * &ws;
        }
    }
    acc
}

/// Independent oracle: ∫ Π |z_j|^{2a_j} dA = 2π³ Π a_j! / (|a|+2)!.
pub fn moment_z_norms(a: &[u64; 3]) -> Rat {
    let mut num = BigInt::from(2);
    for &ai in a {
        num *= factorial(ai);
    }
    let den = factorial(a.iter().sum::<u64>() + 2);
    Rat::new(num, den)
}

/// Monte Carlo estimate of a monomial moment (units of π³), with the
/// standard error of the estimate. Deterministic given the seed.
pub fn monte_carlo_moment(exps: &[u8; 6], samples: u64, seed: u64) -> (f64, f64) {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut sum = 0.0f64;
    let mut sumsq = 0.0f64;
    let mut i = 0;
    while i < samples {
        // Box-Muller pairs -> 6 standard normals -> uniform point on S^5.
        let mut g = [0.0f64; 6];
        for k in 0..3 {
            let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
            let u2: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let r = (-2.0 * u1.ln()).sqrt();
            g[2 * k] = r * u2.cos();
            g[2 * k + 1] = r * u2.sin();
        }
        let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-12 {
            continue;
        }
        let mut val = 1.0;
        for (k, &e) in exps.iter().enumerate() {
            val *= (g[k] / norm).powi(e as i32);
        }
        sum += val;
        sumsq += val * val;
        i += 1;
    }
    let n = samples as f64;
    let mean = sum / n;
    let var = (sumsq / n - mean * mean).max(0.0);
    (mean, (var / n).sqrt())
}

/// Validates a set of table entries against the Monte Carlo oracle at 3σ.
pub fn validate_against_monte_carlo(entries: &[[u8; 6]], samples: u64, seed: u64) -> Result<(), String> {
    use num_traits::ToPrimitive;
    for (j, e) in entries.iter().enumerate() {
        let exact = moment(e).to_f64().unwrap();
        let (mc, se) = monte_carlo_moment(e, samples, seed.wrapping_add(j as u64));
        let tol = 3.0 * se + 1e-12;
        if (exact - mc).abs() > tol {
            return Err(format!(
                "moment {:?}: table {} vs MC {} ± {} exceeds 3σ",
                e, exact, mc, se
            ));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn normalization_is_volume() {
        assert_eq!(moment(&[0; 6]), Rat::one());
    }

    #[test]
    fn second_moments() {
        // ∫ x_i^2 = Vol/6 by symmetry.
        assert_eq!(moment(&[2, 0, 0, 0, 0, 0]), crate::scalar::rat(1, 6));
        let total: f64 = (0..6)
            .map(|i| {
                let mut e = [0u8; 6];
                e[i] = 2;
                moment(&e).to_f64().unwrap()
            })
            .sum();
        assert!((total - 1.0).abs() < 1e-15);
    }

    #[test]
    fn complex_norm_oracle_agrees() {
        // |z1|^2 = x1^2 + y1^2
        let lhs = moment(&[2, 0, 0, 0, 0, 0]) + moment(&[0, 2, 0, 0, 0, 0]);
        assert_eq!(lhs, moment_z_norms(&[1, 0, 0]));
        // |z1|^4 = x1^4 + 2 x1^2 y1^2 + y1^4
        let lhs = moment(&[4, 0, 0, 0, 0, 0])
            + crate::scalar::rat(2, 1) * moment(&[2, 2, 0, 0, 0, 0])
            + moment(&[0, 4, 0, 0, 0, 0]);
        assert_eq!(lhs, moment_z_norms(&[2, 0, 0]));
        // |z1 z2|^2
        let lhs = moment(&[2, 0, 2, 0, 0, 0])
            + moment(&[2, 0, 0, 2, 0, 0])
            + moment(&[0, 2, 2, 0, 0, 0])
            + moment(&[0, 2, 0, 2, 0, 0]);
        assert_eq!(lhs, moment_z_norms(&[1, 1, 0]));
    }

    #[test]
    fn monte_carlo_smoke() {
        // Small sample smoke test; the full 1e7-sample validation runs in the
        // acceptance suite.
        validate_against_monte_carlo(
            &[[0; 6], [2, 0, 0, 0, 0, 0], [2, 2, 0, 0, 0, 0], [4, 0, 2, 0, 0, 0]],
            200_000,
            7,
        )
        .unwrap();
    }
}
