use rayon::prelude::*;

use crate::error::{Error, Result};

/// Gauss-Legendre nodes and weights on `[-1, 1]`, by Newton iteration on
/// the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else { p1 };
            let pm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Tensor-product Gauss-Legendre with uniform subdivision of each axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadratureSpec {
    points: usize,
    subdivisions: usize,
}

impl QuadratureSpec {
    pub fn new(points: usize, subdivisions: usize) -> Result<Self> {
        if points < 2 {
            return Err(Error::Precondition(format!(
                "need at least 2 points per axis, got {points}"
            )));
        }
        if subdivisions < 1 {
            return Err(Error::Precondition("need at least one subdivision".into()));
        }
        Ok(QuadratureSpec {
            points,
            subdivisions,
        })
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn subdivisions(&self) -> usize {
        self.subdivisions
    }

    /// Twice the points per axis, used for error estimates.
    pub fn refined(&self) -> Self {
        QuadratureSpec {
            points: self.points * 2,
            subdivisions: self.subdivisions,
        }
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            points: 32,
            subdivisions: 1,
        }
    }
}

/// Integrates `f` over the box `∏ [lo_k, hi_k]`.
///
/// Cells are evaluated in parallel and summed in cell order, so the result
/// is bitwise reproducible. A zero-dimensional box is a point.
pub fn integrate_box<F>(f: F, bounds: &[(f64, f64)], spec: &QuadratureSpec) -> f64
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let k = bounds.len();
    if k == 0 {
        return f(&[]);
    }
    let (nodes, weights) = gauss_legendre(spec.points);
    let s = spec.subdivisions;
    let cells = s.pow(k as u32);
    let per_cell: Vec<f64> = (0..cells)
        .into_par_iter()
        .map(|cell| {
            let mut lo = vec![0.0; k];
            let mut half = vec![0.0; k];
            let mut c = cell;
            for (d, (a, b)) in bounds.iter().enumerate() {
                let h = (b - a) / s as f64;
                let j = c % s;
                c /= s;
                lo[d] = a + h * j as f64;
                half[d] = h / 2.0;
            }
            let mut jac = 1.0;
            for h in &half {
                jac *= h;
            }
            let n = nodes.len();
            let mut idx = vec![0usize; k];
            let mut u = vec![0.0; k];
            let mut sum = 0.0;
            loop {
                let mut w = 1.0;
                for d in 0..k {
                    u[d] = lo[d] + half[d] * (nodes[idx[d]] + 1.0);
                    w *= weights[idx[d]];
                }
                sum += w * f(&u);
                let mut d = 0;
                while d < k {
                    idx[d] += 1;
                    if idx[d] < n {
                        break;
                    }
                    idx[d] = 0;
                    d += 1;
                }
                if d == k {
                    break;
                }
            }
            sum * jac
        })
        .collect();
    per_cell.iter().sum()
}
