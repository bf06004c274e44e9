//! Brute-force reference computations used to check the exact kernels:
//! Monte Carlo volumes, grid sup-convolutions and grid infimal convolution.
//! Every routine here is deliberately naive and independent of the code paths
//! it is used to check.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::convex_body::Polytope;
use crate::error::{Error, Result};
use crate::layercake::LayerCake;
use crate::rng::trial_rng;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
}

const MC_BATCH: usize = 1 << 14;

/// Rejection-sampling volume estimate in the bounding box of `body`.
///
/// Batch `b` draws from stream `b` of the seeded generator, so the estimate is
/// identical however the batches are scheduled.
pub fn mc_volume(body: &Polytope, samples: usize, seed: u64) -> Result<McEstimate> {
    if samples < 1000 {
        return Err(Error::Precondition(format!("mc_volume needs >= 1000 samples, got {samples}")));
    }
    if body.affine_dim() != Some(body.dim()) {
        return Ok(McEstimate { estimate: 0.0, std_error: 0.0 });
    }
    let (lo, hi) = body.bounding_box().expect("non-empty");
    let dim = body.dim();
    let box_volume: f64 = (0..dim).map(|k| hi[k] - lo[k]).product();
    let batches = samples.div_ceil(MC_BATCH);
    let hits: usize = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = trial_rng(seed, b as u64);
            let n = MC_BATCH.min(samples - b * MC_BATCH);
            let mut x = vec![0.0; dim];
            let mut count = 0;
            for _ in 0..n {
                for k in 0..dim {
                    x[k] = rng.gen_range(lo[k]..=hi[k]);
                }
                if body.contains(&x) {
                    count += 1;
                }
            }
            count
        })
        .sum();
    let p = hits as f64 / samples as f64;
    Ok(McEstimate { estimate: box_volume * p, std_error: box_volume * (p * (1.0 - p) / samples as f64).sqrt() })
}

/// Monte Carlo estimate of `∫ f` over the bounding box of its support.
pub fn mc_integral(f: &LayerCake, samples: usize, seed: u64) -> Result<McEstimate> {
    let support = f.support();
    let Some((lo, hi)) = support.bounding_box() else {
        return Ok(McEstimate { estimate: 0.0, std_error: 0.0 });
    };
    let dim = f.dim();
    let box_volume: f64 = (0..dim).map(|k| hi[k] - lo[k]).product();
    if box_volume == 0.0 {
        return Ok(McEstimate { estimate: 0.0, std_error: 0.0 });
    }
    let batches = samples.div_ceil(MC_BATCH);
    let (sum, sum_sq): (f64, f64) = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = trial_rng(seed, b as u64);
            let n = MC_BATCH.min(samples - b * MC_BATCH);
            let mut x = vec![0.0; dim];
            let (mut s, mut s2) = (0.0, 0.0);
            for _ in 0..n {
                for k in 0..dim {
                    x[k] = rng.gen_range(lo[k]..=hi[k]);
                }
                let v = f.eval(&x);
                s += v;
                s2 += v * v;
            }
            (s, s2)
        })
        .reduce(|| (0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
    let n = samples as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0);
    Ok(McEstimate { estimate: box_volume * mean, std_error: box_volume * (var / n).sqrt() })
}

/// Uniform grid `{-extent, -extent + step, …, extent}^dim`.
#[derive(Clone, Copy, Debug)]
pub struct Grid {
    pub dim: usize,
    pub extent: f64,
    pub step: f64,
}

impl Grid {
    pub fn new(dim: usize, extent: f64, step: f64) -> Result<Self> {
        if !(step > 0.0) || !(extent >= 0.0) {
            return Err(Error::Precondition(format!("grid needs step > 0 and extent >= 0, got {step}, {extent}")));
        }
        Ok(Grid { dim, extent, step })
    }

    fn per_axis(&self) -> usize {
        (2.0 * self.extent / self.step).round() as usize + 1
    }

    pub fn points(&self) -> Vec<Vec<f64>> {
        let n = self.per_axis();
        let axis: Vec<f64> = (0..n).map(|i| -self.extent + i as f64 * self.step).collect();
        let total = n.pow(self.dim as u32);
        (0..total)
            .map(|mut idx| {
                (0..self.dim)
                    .map(|_| {
                        let v = axis[idx % n];
                        idx /= n;
                        v
                    })
                    .collect()
            })
            .collect()
    }
}

/// A function sampled at a list of points.
#[derive(Clone, Debug, Serialize)]
pub struct Sampled {
    pub points: Vec<Vec<f64>>,
    pub values: Vec<f64>,
}

fn sup_convolution(
    f: &(dyn Fn(&[f64]) -> f64 + Sync),
    g: &(dyn Fn(&[f64]) -> f64 + Sync),
    combine: &(dyn Fn(f64, f64) -> f64 + Sync),
    grid: &Grid,
) -> Sampled {
    let points = grid.points();
    let f_on_grid: Vec<(usize, f64)> = points.iter().enumerate().map(|(i, y)| (i, f(y))).filter(|&(_, v)| v > 0.0).collect();
    let values = points
        .par_iter()
        .map(|x| {
            let mut z = vec![0.0; grid.dim];
            let mut best = 0.0f64;
            for &(i, fy) in &f_on_grid {
                let y = &points[i];
                for k in 0..grid.dim {
                    z[k] = x[k] - y[k];
                }
                let gz = g(&z);
                if gz > 0.0 {
                    best = best.max(combine(fy, gz));
                }
            }
            best
        })
        .collect();
    Sampled { points, values }
}

/// `sup_{y+z=x} min(f(y), g(z))` with `y` restricted to the grid.
pub fn grid_quasi_sum(f: &LayerCake, g: &LayerCake, extent: f64, step: f64) -> Result<Sampled> {
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), found: g.dim() });
    }
    let grid = Grid::new(f.dim(), extent, step)?;
    Ok(sup_convolution(&|y| f.eval(y), &|z| g.eval(z), &|u, v| u.min(v), &grid))
}

/// `sup_{y+z=x} (f(y)^α + g(z)^α - 1)^{1/α}` with `y` on the grid. `α = 0`
/// uses `f(y)·g(z)` and `α = -∞` uses `min(f(y), g(z))`. Zero values never
/// enter the power mean.
pub fn grid_alpha_sum(f: &(dyn Fn(&[f64]) -> f64 + Sync), g: &(dyn Fn(&[f64]) -> f64 + Sync), alpha: f64, grid: &Grid) -> Result<Sampled> {
    if alpha > 0.0 || alpha.is_nan() {
        return Err(Error::PositiveAlpha(alpha));
    }
    let combine = move |u: f64, v: f64| -> f64 {
        if alpha == f64::NEG_INFINITY {
            u.min(v)
        } else if alpha == 0.0 {
            u * v
        } else {
            (u.powf(alpha) + v.powf(alpha) - 1.0).powf(1.0 / alpha)
        }
    };
    Ok(sup_convolution(f, g, &combine, grid))
}

/// `inf_{a+b=r} φ(a) + ψ(b)` over `a, b ≥ 0` on the grid `r_j = j·step ≤ r_max`.
pub fn grid_inf_conv(phi: &dyn Fn(f64) -> f64, psi: &dyn Fn(f64) -> f64, r_max: f64, step: f64) -> Result<Vec<(f64, f64)>> {
    if !(step > 0.0) {
        return Err(Error::Precondition(format!("grid step must be positive, got {step}")));
    }
    let n = (r_max / step).floor() as usize + 1;
    let rs: Vec<f64> = (0..n).map(|j| j as f64 * step).collect();
    let phi_v: Vec<f64> = rs.iter().map(|&r| phi(r)).collect();
    let psi_v: Vec<f64> = rs.iter().map(|&r| psi(r)).collect();
    Ok((0..n)
        .map(|j| {
            let best = (0..=j).map(|i| phi_v[i] + psi_v[j - i]).fold(f64::INFINITY, f64::min);
            (rs[j], best)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mc_unit_square_and_triangle() {
        let sq = Polytope::axis_box(&[0.0, 0.0], &[1.0, 1.0]).unwrap();
        let e = mc_volume(&sq, 100_000, 1).unwrap();
        assert_eq!(e.estimate, 1.0);
        let tri = Polytope::hull(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]], 2).unwrap();
        let e = mc_volume(&tri, 1_000_000, 2).unwrap();
        assert!((e.estimate - 0.5).abs() < 3.0 * e.std_error, "{e:?}");
        assert!(mc_volume(&tri, 10, 2).is_err());
        let seg = Polytope::hull(&[[0.0, 0.0], [1.0, 1.0]], 2).unwrap();
        assert_eq!(mc_volume(&seg, 1000, 2).unwrap(), McEstimate { estimate: 0.0, std_error: 0.0 });
    }

    #[test]
    fn mc_is_deterministic() {
        let tri = Polytope::hull(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]], 2).unwrap();
        assert_eq!(mc_volume(&tri, 50_000, 9).unwrap(), mc_volume(&tri, 50_000, 9).unwrap());
    }

    #[test]
    fn grid_layout() {
        let g = Grid::new(2, 1.0, 0.5).unwrap();
        let pts = g.points();
        assert_eq!(pts.len(), 25);
        assert_eq!(pts[0], vec![-1.0, -1.0]);
        assert_eq!(pts[24], vec![1.0, 1.0]);
    }

    #[test]
    fn inf_conv_identity_and_doubling() {
        let phi = |r: f64| r * r;
        let zero_at_origin = |r: f64| if r == 0.0 { 0.0 } else { f64::INFINITY };
        for (r, v) in grid_inf_conv(&phi, &zero_at_origin, 2.0, 0.125).unwrap() {
            assert_eq!(v, r * r);
        }
        // φ□φ = 2·φ = 2 (r/2)², attained on-grid at even indices.
        for (r, v) in grid_inf_conv(&phi, &phi, 2.0, 0.125).unwrap().into_iter().step_by(2) {
            assert!((v - r * r / 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn alpha_sum_limit_approaches_quasi_sum() {
        let f = LayerCake::from_pairs(vec![
            (1.0, Polytope::axis_box(&[-0.5, -0.5], &[0.5, 0.5]).unwrap()),
            (0.5, Polytope::axis_box(&[-1.0, -0.5], &[1.0, 1.0]).unwrap()),
        ])
        .unwrap();
        let g = LayerCake::from_pairs(vec![
            (1.0, Polytope::axis_box(&[0.0, 0.0], &[0.5, 0.5]).unwrap()),
            (0.75, Polytope::axis_box(&[-0.5, 0.0], &[0.5, 1.0]).unwrap()),
            (0.25, Polytope::axis_box(&[-1.0, -1.0], &[1.0, 1.0]).unwrap()),
        ])
        .unwrap();
        let grid = Grid::new(2, 2.0, 0.25).unwrap();
        let q = grid_quasi_sum(&f, &g, 2.0, 0.25).unwrap();
        let fe = |x: &[f64]| f.eval(x);
        let ge = |x: &[f64]| g.eval(x);
        let inf = grid_alpha_sum(&fe, &ge, f64::NEG_INFINITY, &grid).unwrap();
        assert_eq!(q.values, inf.values);
        let a = grid_alpha_sum(&fe, &ge, -50.0, &grid).unwrap();
        let gap = q.values.iter().zip(&a.values).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max);
        assert!(gap < 0.01, "{gap}");
        let a = grid_alpha_sum(&fe, &ge, -200.0, &grid).unwrap();
        let tighter = q.values.iter().zip(&a.values).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max);
        assert!(tighter < gap);
    }

    #[test]
    fn log_concave_sup_convolution_matches_scan() {
        // Gaussians: sup_y e^{-y²} e^{-(x-y)²} = e^{-x²/2}, attained at y = x/2.
        let f = |x: &[f64]| (-x[0] * x[0]).exp();
        let grid = Grid::new(1, 2.0, 0.05).unwrap();
        let s = grid_alpha_sum(&f, &f, 0.0, &grid).unwrap();
        for (x, v) in s.points.iter().zip(&s.values) {
            let exact = (-x[0] * x[0] / 2.0).exp();
            assert!(*v <= exact + 1e-15);
            assert!(exact - v < 2e-3);
        }
    }

    #[test]
    fn alpha_sum_of_exponentials() {
        let f = |x: &[f64]| (-x[0].abs()).exp();
        let grid = Grid::new(1, 4.0, 0.01).unwrap();
        let s = grid_alpha_sum(&f, &f, -1.0, &grid).unwrap();
        for (i, (x, v)) in s.points.iter().zip(&s.values).enumerate() {
            let h = 1.0 / (2.0 * (x[0].abs() / 2.0).exp() - 1.0);
            assert!(*v <= h + 1e-12);
            // The optimal split y = x/2 lies on the grid at even indices.
            if i % 2 == 0 {
                assert!((v - h).abs() < 1e-12, "x = {x:?}");
            }
        }
    }
}
