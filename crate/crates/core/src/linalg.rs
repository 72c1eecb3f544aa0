//! Dense exact linear algebra over Q(i,√2), plus small float helpers.
//!
//! The definiteness certificates (LDL^H with exact pivot signs) are what the
//! spectral bounds rest on; floating point is only used to locate candidate
//! eigenvalues, never to certify them.

use crate::scalar::{CScalar, Rat, Scalar};
use num_bigint::BigInt;

#[derive(Clone, Debug)]
pub struct CMat {
    pub n: usize,
    pub m: usize,
    pub data: Vec<CScalar>,
}

impl CMat {
    pub fn zeros(n: usize, m: usize) -> Self {
        CMat { n, m, data: vec![CScalar::zero(); n * m] }
    }
    pub fn at(&self, i: usize, j: usize) -> &CScalar {
        &self.data[i * self.m + j]
    }
    pub fn set(&mut self, i: usize, j: usize, v: CScalar) {
        self.data[i * self.m + j] = v;
    }
    pub fn from_fn(n: usize, m: usize, f: impl Fn(usize, usize) -> CScalar) -> Self {
        let mut a = CMat::zeros(n, m);
        for i in 0..n {
            for j in 0..m {
                a.set(i, j, f(i, j));
            }
        }
        a
    }
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> CMat {
        CMat::from_fn(rows.len(), cols.len(), |i, j| self.at(rows[i], cols[j]).clone())
    }
    /// self - c * other, with c real.
    pub fn sub_scaled(&self, other: &CMat, c: &Scalar) -> CMat {
        assert_eq!((self.n, self.m), (other.n, other.m));
        let cc = CScalar::from_real(c.clone());
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
            *a = a.clone() - &cc * b;
        }
        out
    }
    pub fn is_hermitian(&self) -> bool {
        if self.n != self.m {
            return false;
        }
        for i in 0..self.n {
            for j in i..self.n {
                if self.at(i, j) != &self.at(j, i).conj() {
                    return false;
                }
            }
        }
        true
    }
    pub fn to_f64_hermitian_embed(&self) -> Vec<Vec<f64>> {
        // complex Hermitian H -> real symmetric [[Re, -Im],[Im, Re]]
        let n = self.n;
        let mut a = vec![vec![0.0; 2 * n]; 2 * n];
        for i in 0..n {
            for j in 0..n {
                let (re, im) = self.at(i, j).to_c64();
                a[i][j] = re;
                a[i][j + n] = -im;
                a[i + n][j] = im;
                a[i + n][j + n] = re;
            }
        }
        a
    }
}

/// Inertia (positive, negative, zero counts) of an exact Hermitian matrix.
pub fn inertia(a: &CMat) -> (usize, usize, usize) {
    debug_assert!(a.is_hermitian());
    let n = a.n;
    let mut a = a.clone();
    let mut active: Vec<usize> = (0..n).collect();
    let (mut pos, mut neg, mut zero) = (0usize, 0usize, 0usize);
    while !active.is_empty() {
        // best diagonal pivot
        let mut best: Option<(usize, Scalar)> = None;
        for (k, &i) in active.iter().enumerate() {
            let d = a.at(i, i).re.clone();
            if !d.is_zero() {
                let mag = d.abs();
                if best.as_ref().map_or(true, |(_, m)| (&mag - m).is_positive()) {
                    best = Some((k, mag));
                }
            }
        }
        if let Some((k, _)) = best {
            let i = active.remove(k);
            let d = a.at(i, i).re.clone();
            if d.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            let dinv = CScalar::from_real(d.inv());
            let col: Vec<CScalar> = active.iter().map(|&r| a.at(r, i).clone()).collect();
            for (ri, &r) in active.iter().enumerate() {
                for (ci, &c) in active.iter().enumerate() {
                    let upd = &(&col[ri] * &dinv) * &col[ci].conj();
                    let v = a.at(r, c).clone() - upd;
                    a.set(r, c, v);
                }
            }
            continue;
        }
        // all active diagonals vanish; look for an off-diagonal entry
        let mut off: Option<(usize, usize)> = None;
        'search: for (p, &i) in active.iter().enumerate() {
            for (q, &j) in active.iter().enumerate().skip(p + 1) {
                if !a.at(i, j).is_zero() {
                    off = Some((p, q));
                    break 'search;
                }
            }
        }
        match off {
            None => {
                zero += active.len();
                break;
            }
            Some((p, q)) => {
                // hyperbolic pair: block [[0, w],[w̄, 0]] contributes (+1, -1)
                let (i, j) = (active[p], active[q]);
                active.remove(q);
                active.remove(p);
                pos += 1;
                neg += 1;
                let w = a.at(i, j).clone();
                let winv = w.inv();
                // Schur complement: A' = A - C P^{-1} C^H with P = [[0,w],[w̄,0]],
                // P^{-1} = [[0, 1/w̄],[1/w, 0]].
                let ci: Vec<CScalar> = active.iter().map(|&r| a.at(r, i).clone()).collect();
                let cj: Vec<CScalar> = active.iter().map(|&r| a.at(r, j).clone()).collect();
                for (ri, &r) in active.iter().enumerate() {
                    for (si, &s) in active.iter().enumerate() {
                        // (C P^{-1} C^H)_{rs} = c_i(r) (1/w) c_j(s)^* + c_j(r) (1/w̄) c_i(s)^*
                        let t1 = &(&ci[ri] * &winv) * &cj[si].conj();
                        let t2 = &(&cj[ri] * &winv.conj()) * &ci[si].conj();
                        let v = a.at(r, s).clone() - t1 - t2;
                        a.set(r, s, v);
                    }
                }
            }
        }
    }
    (pos, neg, zero)
}

/// Exact positive-semidefiniteness test for a Hermitian matrix.
pub fn is_psd(a: &CMat) -> bool {
    let (_, neg, _) = inertia(a);
    neg == 0
}

/// Rank of a PSD Hermitian matrix, together with a set of row indices whose
/// principal submatrix is positive definite (a basis of the range).
pub fn psd_pivot_basis(a: &CMat) -> Vec<usize> {
    let n = a.n;
    let mut a = a.clone();
    let mut active: Vec<usize> = (0..n).collect();
    let mut chosen = Vec::new();
    loop {
        let mut best: Option<(usize, Scalar)> = None;
        for (k, &i) in active.iter().enumerate() {
            let d = a.at(i, i).re.clone();
            if d.is_positive() {
                let mag = d.clone();
                if best.as_ref().map_or(true, |(_, m)| (&mag - m).is_positive()) {
                    best = Some((k, mag));
                }
            }
        }
        let Some((k, _)) = best else { break };
        let i = active.remove(k);
        chosen.push(i);
        let d = a.at(i, i).re.clone();
        let dinv = CScalar::from_real(d.inv());
        let col: Vec<CScalar> = active.iter().map(|&r| a.at(r, i).clone()).collect();
        for (ri, &r) in active.iter().enumerate() {
            for (ci, &c) in active.iter().enumerate() {
                let upd = &(&col[ri] * &dinv) * &col[ci].conj();
                let v = a.at(r, c).clone() - upd;
                a.set(r, c, v);
            }
        }
    }
    chosen.sort_unstable();
    chosen
}

/// Solve A x = b exactly by Gaussian elimination; None when singular.
pub fn solve(a: &CMat, b: &[CScalar]) -> Option<Vec<CScalar>> {
    assert_eq!(a.n, a.m);
    assert_eq!(a.n, b.len());
    let n = a.n;
    let mut m = a.clone();
    let mut rhs = b.to_vec();
    let mut perm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let piv = (k..n).find(|&r| !m.at(perm[r], k).is_zero())?;
        perm.swap(k, piv);
        let pk = perm[k];
        let inv = m.at(pk, k).inv();
        for r in k + 1..n {
            let pr = perm[r];
            let factor = &m.at(pr, k).clone() * &inv;
            if factor.is_zero() {
                continue;
            }
            for c in k..n {
                let v = m.at(pr, c).clone() - &factor * m.at(pk, c);
                m.set(pr, c, v);
            }
            let v = rhs[pr].clone() - &factor * &rhs[pk];
            rhs[pr] = v;
        }
    }
    let mut x = vec![CScalar::zero(); n];
    for k in (0..n).rev() {
        let pk = perm[k];
        let mut acc = rhs[pk].clone();
        for c in k + 1..n {
            acc = acc - &m.at(pk, c).clone() * &x[c];
        }
        x[k] = &acc * &m.at(pk, k).inv();
    }
    Some(x)
}

/// Solve a (possibly singular) Hermitian PSD system G x = b when consistent.
pub fn solve_psd_consistent(g: &CMat, b: &[CScalar]) -> Option<Vec<CScalar>> {
    let basis = psd_pivot_basis(g);
    if basis.is_empty() {
        return if b.iter().all(|v| v.is_zero()) { Some(vec![CScalar::zero(); g.n]) } else { None };
    }
    let gs = g.submatrix(&basis, &basis);
    let bs: Vec<CScalar> = basis.iter().map(|&i| b[i].clone()).collect();
    let xs = solve(&gs, &bs)?;
    let mut x = vec![CScalar::zero(); g.n];
    for (k, &i) in basis.iter().enumerate() {
        x[i] = xs[k].clone();
    }
    // consistency: G x must equal b on every row
    for r in 0..g.n {
        let mut acc = CScalar::zero();
        for c in 0..g.n {
            acc += &g.at(r, c).clone() * &x[c];
        }
        if acc != b[r] {
            return None;
        }
    }
    Some(x)
}

/// A particular solution of a (possibly overdetermined) consistent system
/// A x = b, free variables set to zero; None when inconsistent.
pub fn solve_consistent(a: &CMat, b: &[CScalar]) -> Option<Vec<CScalar>> {
    let (n, m) = (a.n, a.m);
    assert_eq!(b.len(), n);
    // augmented RREF
    let mut mat = CMat::zeros(n, m + 1);
    for i in 0..n {
        for j in 0..m {
            mat.set(i, j, a.at(i, j).clone());
        }
        mat.set(i, m, b[i].clone());
    }
    let mut row = 0usize;
    let mut pivot_col_of_row = Vec::new();
    for col in 0..m {
        let piv = (row..n).find(|&r| !mat.at(r, col).is_zero());
        let Some(piv) = piv else { continue };
        if piv != row {
            for c in 0..=m {
                let t = mat.at(row, c).clone();
                mat.set(row, c, mat.at(piv, c).clone());
                mat.set(piv, c, t);
            }
        }
        let inv = mat.at(row, col).inv();
        for c in 0..=m {
            let v = &mat.at(row, c).clone() * &inv;
            mat.set(row, c, v);
        }
        for r in 0..n {
            if r != row && !mat.at(r, col).is_zero() {
                let f = mat.at(r, col).clone();
                for c in 0..=m {
                    let v = mat.at(r, c).clone() - &f * mat.at(row, c);
                    mat.set(r, c, v);
                }
            }
        }
        pivot_col_of_row.push(col);
        row += 1;
        if row == n {
            break;
        }
    }
    // inconsistency: a nonzero rhs in a zero row
    for r in row..n {
        if !mat.at(r, m).is_zero() {
            return None;
        }
    }
    let mut x = vec![CScalar::zero(); m];
    for (r, &pc) in pivot_col_of_row.iter().enumerate() {
        x[pc] = mat.at(r, m).clone();
    }
    Some(x)
}

/// Nullspace basis of a general exact matrix (columns of A span relations).
pub fn kernel(a: &CMat) -> Vec<Vec<CScalar>> {
    let (n, m) = (a.n, a.m);
    let mut mat = a.clone();
    let mut pivot_col_of_row = Vec::new();
    let mut row = 0usize;
    let mut pivot_cols = Vec::new();
    for col in 0..m {
        let piv = (row..n).find(|&r| !mat.at(r, col).is_zero());
        let Some(piv) = piv else { continue };
        // swap rows
        if piv != row {
            for c in 0..m {
                let t = mat.at(row, c).clone();
                mat.set(row, c, mat.at(piv, c).clone());
                mat.set(piv, c, t);
            }
        }
        let inv = mat.at(row, col).inv();
        for c in 0..m {
            let v = &mat.at(row, c).clone() * &inv;
            mat.set(row, c, v);
        }
        for r in 0..n {
            if r != row && !mat.at(r, col).is_zero() {
                let f = mat.at(r, col).clone();
                for c in 0..m {
                    let v = mat.at(r, c).clone() - &f * mat.at(row, c);
                    mat.set(r, c, v);
                }
            }
        }
        pivot_col_of_row.push(col);
        pivot_cols.push(col);
        row += 1;
        if row == n {
            break;
        }
    }
    let mut basis = Vec::new();
    for free in 0..m {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![CScalar::zero(); m];
        v[free] = CScalar::one();
        for (r, &pc) in pivot_col_of_row.iter().enumerate() {
            v[pc] = -mat.at(r, free).clone();
        }
        basis.push(v);
    }
    basis
}

/// Jacobi eigenvalue iteration for a dense symmetric f64 matrix.
pub fn sym_eigvals(a0: &[Vec<f64>]) -> Vec<f64> {
    let n = a0.len();
    let mut a: Vec<Vec<f64>> = a0.to_vec();
    for _sweep in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                off += a[i][j] * a[i][j];
            }
        }
        if off.sqrt() < 1e-13 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).collect()
}

fn rat_from_f64(x: f64) -> Rat {
    // dyadic approximation, exact value irrelevant (only used as bisection endpoints)
    let scaled = (x * (1u64 << 32) as f64).round();
    if !scaled.is_finite() {
        return Rat::from(BigInt::from(0));
    }
    Rat::new(BigInt::from(scaled as i128), BigInt::from(1u64 << 32))
}

/// Certified enclosure [lo, hi] of the minimum generalized Rayleigh quotient
/// x^H B x / x^H G x over the span (G PSD, B Hermitian, both exact).
///
/// PSD(B - c G) on the pivot basis certifies min >= c; failure certifies
/// min < c. Bisection tightens to `width`.
pub fn min_rayleigh_enclosure(b: &CMat, g: &CMat, width: f64) -> Option<(Scalar, Scalar)> {
    let basis = psd_pivot_basis(g);
    if basis.is_empty() {
        return None;
    }
    let bs = b.submatrix(&basis, &basis);
    let gs = g.submatrix(&basis, &basis);
    // float hint via G-Cholesky whitening on the embedded real matrices
    let gr = gs.to_f64_hermitian_embed();
    let br = bs.to_f64_hermitian_embed();
    let n = gr.len();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = gr[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            if i == j {
                l[i][i] = s.max(1e-300).sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    // W = L^{-1} B L^{-T}
    let mut y = vec![vec![0.0; n]; n]; // solves L y = B
    for col in 0..n {
        for i in 0..n {
            let mut s = br[i][col];
            for k in 0..i {
                s -= l[i][k] * y[k][col];
            }
            y[i][col] = s / l[i][i];
        }
    }
    let mut w = vec![vec![0.0; n]; n]; // solves L w^T = y^T
    for row in 0..n {
        for i in 0..n {
            let mut s = y[row][i];
            for k in 0..i {
                s -= l[i][k] * w[row][k];
            }
            w[row][i] = s / l[i][i];
        }
    }
    let evs = sym_eigvals(&w);
    let guess = evs.iter().cloned().fold(f64::INFINITY, f64::min);
    let spread = evs.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - guess;
    let margin = (spread.abs() * 1e-6).max(1e-6) + width;
    let mut lo = rat_from_f64(guess - margin);
    let mut hi = rat_from_f64(guess + margin);
    // ensure invariants: PSD at lo, not PSD at hi
    for _ in 0..60 {
        if is_psd(&bs.sub_scaled(&gs, &Scalar::from_rat(lo.clone()))) {
            break;
        }
        let w = &hi - &lo;
        lo -= w;
    }
    if !is_psd(&bs.sub_scaled(&gs, &Scalar::from_rat(lo.clone()))) {
        return None;
    }
    for _ in 0..60 {
        if !is_psd(&bs.sub_scaled(&gs, &Scalar::from_rat(hi.clone()))) {
            break;
        }
        let w = &hi - &lo;
        hi += w;
    }
    if is_psd(&bs.sub_scaled(&gs, &Scalar::from_rat(hi.clone()))) {
        // numerically huge spectrum gap; give up on the upper side
        return Some((Scalar::from_rat(lo), Scalar::from_rat(hi)));
    }
    while {
        let diff = &hi - &lo;
        diff > rat_from_f64(width)
    } {
        let mid = (&lo + &hi) / Rat::from(BigInt::from(2));
        if is_psd(&bs.sub_scaled(&gs, &Scalar::from_rat(mid.clone()))) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some((Scalar::from_rat(lo), Scalar::from_rat(hi)))
}

/// Exact check that min Rayleigh >= c over the span of a PSD Gram G.
pub fn rayleigh_at_least(b: &CMat, g: &CMat, c: &Scalar) -> bool {
    let basis = psd_pivot_basis(g);
    if basis.is_empty() {
        return true;
    }
    let bs = b.submatrix(&basis, &basis);
    let gs = g.submatrix(&basis, &basis);
    is_psd(&bs.sub_scaled(&gs, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn real_mat(rows: &[&[i64]]) -> CMat {
        CMat::from_fn(rows.len(), rows[0].len(), |i, j| CScalar::from_int(rows[i][j]))
    }

    #[test]
    fn inertia_signature() {
        // diag(2, -3,  0) plus a hyperbolic pair
        let a = real_mat(&[
            &[2, 0, 0, 0, 0],
            &[0, -3, 0, 0, 0],
            &[0, 0, 0, 0, 0],
            &[0, 0, 0, 0, 5],
            &[0, 0, 0, 5, 0],
        ]);
        assert_eq!(inertia(&a), (2, 2, 1));
    }

    #[test]
    fn psd_and_rank() {
        let a = real_mat(&[&[2, 1, 1], &[1, 2, 1], &[1, 1, 2]]);
        assert!(is_psd(&a));
        assert_eq!(psd_pivot_basis(&a).len(), 3);
        // rank-1 PSD
        let b = real_mat(&[&[1, 1], &[1, 1]]);
        assert!(is_psd(&b));
        assert_eq!(psd_pivot_basis(&b).len(), 1);
        assert!(!is_psd(&real_mat(&[&[1, 2], &[2, 1]])));
    }

    #[test]
    fn solve_exact() {
        let a = real_mat(&[&[2, 1], &[1, 3]]);
        let b = vec![CScalar::from_int(5), CScalar::from_int(10)];
        let x = solve(&a, &b).unwrap();
        assert_eq!(x[0], CScalar::from_int(1));
        assert_eq!(x[1], CScalar::from_int(3));
    }

    #[test]
    fn rayleigh_enclosure_diag() {
        let b = real_mat(&[&[3, 0], &[0, 7]]);
        let g = real_mat(&[&[1, 0], &[0, 1]]);
        let (lo, hi) = min_rayleigh_enclosure(&b, &g, 1e-9).unwrap();
        assert!((lo.to_f64() - 3.0).abs() < 1e-6);
        assert!((hi.to_f64() - 3.0).abs() < 1e-6);
        assert!(rayleigh_at_least(&b, &g, &Scalar::from_rat(rat(29, 10))));
        assert!(!rayleigh_at_least(&b, &g, &Scalar::from_rat(rat(31, 10))));
    }

    #[test]
    fn kernel_basis() {
        let a = real_mat(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = kernel(&a);
        assert_eq!(k.len(), 2);
        for v in &k {
            let mut acc = CScalar::zero();
            for j in 0..3 {
                acc += &a.at(0, j).clone() * &v[j];
            }
            assert!(acc.is_zero());
        }
    }
}
