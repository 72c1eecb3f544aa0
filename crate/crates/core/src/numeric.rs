//! Sampled numeric scalar fields on a chart box, with finite-difference
//! derivatives. Default stencils are 4th-order central, falling back to
//! one-sided 4th-order stencils near the box boundary.

use crate::error::PentaError;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GridSpec {
    /// [lo, hi] per axis.
    pub bounds: Vec<[f64; 2]>,
    /// Nodes per axis (>= 7 for 4th-order one-sided stencils).
    pub shape: Vec<usize>,
    /// Declared stencil order, >= 2.
    pub order: usize,
}

impl GridSpec {
    pub fn new(bounds: Vec<[f64; 2]>, shape: Vec<usize>, order: usize) -> Result<Self, PentaError> {
        if order < 2 {
            return Err(PentaError::InvalidInput(format!(
                "stencil order {} below the declared minimum 2",
                order
            )));
        }
        if bounds.len() != shape.len() || shape.iter().any(|&n| n < 7) {
            return Err(PentaError::InvalidInput("grid needs >= 7 nodes per axis".into()));
        }
        Ok(GridSpec { bounds, shape, order })
    }
    pub fn dim(&self) -> usize {
        self.shape.len()
    }
    pub fn len(&self) -> usize {
        self.shape.iter().product()
    }
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
    pub fn spacing(&self, axis: usize) -> f64 {
        (self.bounds[axis][1] - self.bounds[axis][0]) / (self.shape[axis] - 1) as f64
    }
    pub fn node(&self, idx: &[usize]) -> Vec<f64> {
        idx.iter()
            .enumerate()
            .map(|(a, &i)| self.bounds[a][0] + i as f64 * self.spacing(a))
            .collect()
    }
    fn strides(&self) -> Vec<usize> {
        let d = self.dim();
        let mut s = vec![1usize; d];
        for a in (0..d - 1).rev() {
            s[a] = s[a + 1] * self.shape[a + 1];
        }
        s
    }
}

/// A scalar field sampled on a grid.
#[derive(Clone, Debug)]
pub struct NumericField {
    pub spec: Arc<GridSpec>,
    pub values: Arc<Vec<f64>>,
}

impl PartialEq for NumericField {
    fn eq(&self, other: &Self) -> bool {
        self.values == other.values
    }
}

impl NumericField {
    pub fn from_fn(spec: Arc<GridSpec>, f: impl Fn(&[f64]) -> f64) -> Self {
        let strides = spec.strides();
        let d = spec.dim();
        let mut values = vec![0.0; spec.len()];
        let mut idx = vec![0usize; d];
        for (flat, v) in values.iter_mut().enumerate() {
            let mut rem = flat;
            for a in 0..d {
                idx[a] = rem / strides[a];
                rem %= strides[a];
            }
            *v = f(&spec.node(&idx));
        }
        NumericField { spec, values: Arc::new(values) }
    }

    pub fn constant(spec: Arc<GridSpec>, c: f64) -> Self {
        let values = Arc::new(vec![c; spec.len()]);
        NumericField { spec, values }
    }

    pub fn map2(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        assert!(Arc::ptr_eq(&self.spec, &other.spec) || self.spec.shape == other.spec.shape);
        let values = self.values.iter().zip(other.values.iter()).map(|(&a, &b)| f(a, b)).collect();
        NumericField { spec: self.spec.clone(), values: Arc::new(values) }
    }
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        NumericField {
            spec: self.spec.clone(),
            values: Arc::new(self.values.iter().map(|&a| f(a)).collect()),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, &v| m.max(v.abs()))
    }

    /// Max abs over nodes at least `margin` nodes away from every boundary.
    pub fn max_abs_interior(&self, margin: usize) -> f64 {
        let strides = self.spec.strides();
        let d = self.spec.dim();
        let mut best = 0.0f64;
        'outer: for flat in 0..self.values.len() {
            let mut rem = flat;
            for a in 0..d {
                let i = rem / strides[a];
                rem %= strides[a];
                if i < margin || i + margin >= self.spec.shape[a] {
                    continue 'outer;
                }
            }
            best = best.max(self.values[flat].abs());
        }
        best
    }

    /// 4th-order partial derivative along `axis`.
    pub fn deriv(&self, axis: usize) -> Self {
        let spec = &self.spec;
        let n = spec.shape[axis];
        let h = spec.spacing(axis);
        let strides = spec.strides();
        let stride = strides[axis];
        let d = spec.dim();
        let mut out = vec![0.0; self.values.len()];
        // central: (-f[i+2] + 8 f[i+1] - 8 f[i-1] + f[i-2]) / 12h
        // one-sided 4th order at the ends.
        let fwd: [f64; 5] = [-25.0 / 12.0, 4.0, -3.0, 4.0 / 3.0, -1.0 / 4.0];
        for flat in 0..self.values.len() {
            let mut rem = flat;
            let mut i = 0usize;
            for a in 0..d {
                let k = rem / strides[a];
                rem %= strides[a];
                if a == axis {
                    i = k;
                }
            }
            let base = flat as isize;
            let st = stride as isize;
            let at = |j: usize| self.values[(base + (j as isize - i as isize) * st) as usize];
            let atoff = |off: isize| self.values[(base + off * st) as usize];
            out[flat] = if i >= 2 && i + 2 < n {
                (-atoff(2) + 8.0 * atoff(1) - 8.0 * atoff(-1) + atoff(-2)) / (12.0 * h)
            } else if i < 2 {
                (0..5).map(|j| fwd[j] * at(i + j)).sum::<f64>() / h
            } else {
                -(0..5).map(|j| fwd[j] * at(i - j)).sum::<f64>() / h
            };
        }
        NumericField { spec: self.spec.clone(), values: Arc::new(out) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(n: usize) -> Arc<GridSpec> {
        Arc::new(GridSpec::new(vec![[-1.0, 1.0]; 2], vec![n; 2], 4).unwrap())
    }

    #[test]
    fn derivative_exact_on_low_degree() {
        // 4th-order stencils differentiate quartics exactly (up to rounding).
        let s = spec(9);
        let f = NumericField::from_fn(s.clone(), |x| x[0].powi(3) * x[1] + x[1].powi(4));
        let fx = f.deriv(0);
        let exact = NumericField::from_fn(s, |x| 3.0 * x[0] * x[0] * x[1]);
        let err = fx.map2(&exact, |a, b| a - b).max_abs();
        assert!(err < 1e-12, "err {}", err);
    }

    #[test]
    fn convergence_order() {
        let errs: Vec<f64> = [17usize, 33]
            .iter()
            .map(|&n| {
                let s = spec(n);
                let f = NumericField::from_fn(s.clone(), |x| (2.0 * x[0]).sin() * (x[1]).cos());
                let fx = f.deriv(0);
                let exact = NumericField::from_fn(s, |x| 2.0 * (2.0 * x[0]).cos() * x[1].cos());
                fx.map2(&exact, |a, b| a - b).max_abs()
            })
            .collect();
        let rate = (errs[0] / errs[1]).log2();
        assert!(rate > 3.5, "rate {}", rate);
    }
}
