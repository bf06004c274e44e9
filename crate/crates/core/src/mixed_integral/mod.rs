//! Mixed integrals of layer-cake functions, quermassintegrals, the functional
//! Steiner polynomial and the polynomiality fit.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::convex_body::{mixed_volume, BallApprox, Polytope};
use crate::digest::digest;
use crate::error::{Error, Result};
use crate::layercake::{merge_thresholds, LayerCake, MaxOutcome};
use crate::report::{run_campaign, Fold, Inequality, TrialOutcome, VerifyReport};
use crate::sample::{random_cake, random_overlapping_box_pair};

#[cfg(test)]
mod tests;

/// Default per-variable ε values: 0.25, 0.5, …, 2.0.
pub fn default_eps_values() -> Vec<f64> {
    (1..=8).map(|i| 0.25 * i as f64).collect()
}

/// `count` evenly spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => vec![],
        1 => vec![lo],
        _ => (0..count).map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64).collect(),
    }
}

/// Cartesian power of `values`: every vector in `values^m`, first coordinate slowest.
pub fn product_grid(values: &[f64], m: usize) -> Vec<Vec<f64>> {
    let mut grid = vec![vec![]];
    for _ in 0..m {
        grid = grid
            .into_iter()
            .flat_map(|p| {
                values.iter().map(move |&v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    grid
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    RepresentationFormula,
    PolynomialFit,
    Polarization,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixedResult {
    pub value: f64,
    pub method: Method,
    pub residual: f64,
    pub inputs_digest: String,
}

fn check_arity(fs: &[&LayerCake]) -> Result<usize> {
    let n = fs.first().ok_or(Error::EmptyInput("mixed_integral"))?.dim();
    if !(2..=3).contains(&n) {
        return Err(Error::UnsupportedDimension(n));
    }
    if let Some(f) = fs.iter().find(|f| f.dim() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: f.dim() });
    }
    if fs.len() != n {
        return Err(Error::Arity { expected: n, found: fs.len() });
    }
    Ok(n)
}

/// `V(f₁,…,f_n) = Σ_j (t_j − t_{j+1}) V(K_{t_j}(f₁),…,K_{t_j}(f_n))` over the
/// merged thresholds. Exact for layer cakes.
pub fn mixed_integral(fs: &[&LayerCake]) -> Result<MixedResult> {
    check_arity(fs)?;
    let ts = merge_thresholds(fs);
    let mut value = 0.0;
    for (j, &t) in ts.iter().enumerate() {
        let next = ts.get(j + 1).copied().unwrap_or(0.0);
        let bodies: Vec<Polytope> = fs.iter().map(|f| f.level_set_unchecked(t)).collect();
        let refs: Vec<&Polytope> = bodies.iter().collect();
        value += (t - next) * mixed_volume(&refs)?;
    }
    Ok(MixedResult { value, method: Method::RepresentationFormula, residual: 0.0, inputs_digest: digest(fs) })
}

/// Quasi-sum of `ε_i ⊙ f_i`.
fn combination(fs: &[&LayerCake], eps: &[f64]) -> Result<LayerCake> {
    let mut acc = fs[0].dilate(eps[0])?;
    for (f, &e) in fs.iter().zip(eps).skip(1) {
        acc = acc.quasi_sum(&f.dilate(e)?)?;
    }
    Ok(acc)
}

/// Inclusion–exclusion over subsets: `n! V = Σ_{S≠∅} (−1)^{n−|S|} ∫ ⊕_{i∈S} f_i`.
pub fn mixed_integral_polarized(fs: &[&LayerCake]) -> Result<MixedResult> {
    let n = check_arity(fs)?;
    let mut total = 0.0;
    for mask in 1u32..(1 << n) {
        let eps: Vec<f64> = (0..n).map(|i| if mask & (1 << i) != 0 { 1.0 } else { 0.0 }).collect();
        let sign = if (n - mask.count_ones() as usize).is_multiple_of(2) { 1.0 } else { -1.0 };
        total += sign * combination(fs, &eps)?.integral();
    }
    Ok(MixedResult { value: (total / factorial(n)).max(0.0), method: Method::Polarization, residual: 0.0, inputs_digest: digest(fs) })
}

/// Reads `V(f₁,…,f_n)` off the `ε₁⋯ε_n` coefficient of the fitted polynomial.
pub fn mixed_integral_fitted(fs: &[&LayerCake]) -> Result<MixedResult> {
    let n = check_arity(fs)?;
    let fit = minkowski_fit(fs, &product_grid(&linspace(0.25, 2.0, 5), n))?;
    let coef = fit.coefficient(&vec![1; n]).expect("square-free monomial present");
    Ok(MixedResult { value: coef / factorial(n), method: Method::PolynomialFit, residual: fit.residual, inputs_digest: digest(fs) })
}

/// Homogeneous polynomial of degree `degree` in `vars` variables.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyFit {
    pub degree: usize,
    pub vars: usize,
    /// Exponent vectors, lexicographically decreasing: (2,0), (1,1), (0,2), …
    pub exponents: Vec<Vec<usize>>,
    pub coefficients: Vec<f64>,
    /// Max relative residual over the fitting grid.
    pub residual: f64,
}

fn homogeneous_exponents(vars: usize, degree: usize) -> Vec<Vec<usize>> {
    if vars == 1 {
        return vec![vec![degree]];
    }
    (0..=degree)
        .rev()
        .flat_map(|first| {
            homogeneous_exponents(vars - 1, degree - first).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

fn monomial(exps: &[usize], x: &[f64]) -> f64 {
    exps.iter().zip(x).map(|(&e, &v)| v.powi(e as i32)).product()
}

impl PolyFit {
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.exponents.iter().zip(&self.coefficients).map(|(e, c)| c * monomial(e, x)).sum()
    }

    pub fn coefficient(&self, exps: &[usize]) -> Option<f64> {
        self.exponents.iter().position(|e| e == exps).map(|i| self.coefficients[i])
    }

    pub fn min_coefficient(&self) -> f64 {
        self.coefficients.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

fn relative_error(pred: f64, actual: f64) -> f64 {
    let scale = actual.abs();
    if scale > 0.0 {
        (pred - actual).abs() / scale
    } else {
        (pred - actual).abs()
    }
}

fn least_squares(rows: &[Vec<f64>], rhs: &[f64]) -> Result<Vec<f64>> {
    let a = DMatrix::from_fn(rows.len(), rows[0].len(), |i, j| rows[i][j]);
    let b = DVector::from_column_slice(rhs);
    let svd = a.svd(true, true);
    let x = svd.solve(&b, 1e-14).map_err(|e| Error::Precondition(e.to_string()))?;
    Ok(x.iter().copied().collect())
}

/// Least-squares fit of `F(ε) = ∫ ⊕_i (ε_i ⊙ f_i)` by a homogeneous polynomial
/// of degree `n` (the ambient dimension).
pub fn minkowski_fit(fs: &[&LayerCake], grid: &[Vec<f64>]) -> Result<PolyFit> {
    let n = fs.first().ok_or(Error::EmptyInput("minkowski_fit"))?.dim();
    if let Some(f) = fs.iter().find(|f| f.dim() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: f.dim() });
    }
    let m = fs.len();
    let exponents = homogeneous_exponents(m, n);
    let mut distinct: Vec<&Vec<f64>> = grid.iter().collect();
    distinct.sort_by(|a, b| a.iter().zip(b.iter()).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal));
    distinct.dedup();
    if distinct.len() < exponents.len() {
        return Err(Error::Underdetermined { needed: exponents.len(), got: distinct.len() });
    }
    for eps in grid {
        if eps.len() != m {
            return Err(Error::Arity { expected: m, found: eps.len() });
        }
        if let Some(&bad) = eps.iter().find(|&&e| !(e > 0.0)) {
            return Err(Error::NonPositiveScale(bad));
        }
    }
    let values = grid.iter().map(|eps| Ok(combination(fs, eps)?.integral())).collect::<Result<Vec<f64>>>()?;
    let rows: Vec<Vec<f64>> = grid.iter().map(|eps| exponents.iter().map(|e| monomial(e, eps)).collect()).collect();
    let coefficients = least_squares(&rows, &values)?;
    let mut fit = PolyFit { degree: n, vars: m, exponents, coefficients, residual: 0.0 };
    fit.residual = grid.iter().zip(&values).map(|(eps, &v)| relative_error(fit.eval(eps), v)).fold(0.0, f64::max);
    Ok(fit)
}

/// Max relative error of `fit` against direct evaluation at `points`.
pub fn prediction_error(fit: &PolyFit, fs: &[&LayerCake], points: &[Vec<f64>]) -> Result<f64> {
    points.iter().try_fold(0.0f64, |acc, eps| {
        let direct = combination(fs, eps)?.integral();
        Ok(acc.max(relative_error(fit.eval(eps), direct)))
    })
}

fn ball_indicator(ball: &BallApprox) -> LayerCake {
    LayerCake::indicator(ball.polytope().clone()).expect("ball is non-empty")
}

fn check_ball(f: &LayerCake, ball: &BallApprox) -> Result<usize> {
    let n = f.dim();
    if ball.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: ball.dim() });
    }
    Ok(n)
}

/// `W_k(f) = V(f,…,f, 1_D,…,1_D)` with `k` ball slots.
pub fn quermassintegral(f: &LayerCake, k: usize, ball: &BallApprox) -> Result<f64> {
    let n = check_ball(f, ball)?;
    if k > n {
        return Err(Error::Precondition(format!("quermassintegral index k = {k} must satisfy 0 <= k <= n = {n}")));
    }
    let d = ball_indicator(ball);
    let fs: Vec<&LayerCake> = (0..n).map(|i| if i < n - k { f } else { &d }).collect();
    Ok(mixed_integral(&fs)?.value)
}

/// `S(f) = n W₁(f)`.
pub fn surface_area(f: &LayerCake, ball: &BallApprox) -> Result<f64> {
    Ok(f.dim() as f64 * quermassintegral(f, 1, ball)?)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SteinerCoefficients {
    pub n: usize,
    /// `W₀ … W_n` as read off the fitted polynomial.
    pub coefficients: Vec<f64>,
    pub ball_facets: usize,
    /// Max relative fit residual over the ε grid.
    pub residual: f64,
    /// Max gap between fitted and directly computed `W_i`, relative to `max(1, |W_i|)`.
    pub discrepancy: f64,
}

/// Fits `∫ f ⊕ (ε ⊙ 1_D) = Σ_i C(n,i) W_i(f) εⁱ` on `eps` and compares each
/// `W_i` with `quermassintegral`.
pub fn steiner_expand(f: &LayerCake, eps: &[f64], ball: &BallApprox) -> Result<SteinerCoefficients> {
    let n = check_ball(f, ball)?;
    let mut distinct = eps.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < n + 1 {
        return Err(Error::Underdetermined { needed: n + 1, got: distinct.len() });
    }
    if let Some(&bad) = eps.iter().find(|&&e| !(e > 0.0)) {
        return Err(Error::NonPositiveScale(bad));
    }
    let d = ball_indicator(ball);
    let values = eps.iter().map(|&e| Ok(f.quasi_sum(&d.dilate(e)?)?.integral())).collect::<Result<Vec<f64>>>()?;
    let rows: Vec<Vec<f64>> = eps.iter().map(|&e| (0..=n).map(|i| e.powi(i as i32)).collect()).collect();
    let c = least_squares(&rows, &values)?;
    let residual =
        eps.iter().zip(&values).map(|(&e, &v)| relative_error((0..=n).map(|i| c[i] * e.powi(i as i32)).sum(), v)).fold(0.0, f64::max);
    let coefficients: Vec<f64> = (0..=n).map(|i| c[i] / binomial(n, i)).collect();
    let mut discrepancy = 0.0f64;
    for (i, &w) in coefficients.iter().enumerate() {
        let direct = quermassintegral(f, i, ball)?;
        discrepancy = discrepancy.max((w - direct).abs() / direct.abs().max(1.0));
    }
    Ok(SteinerCoefficients { n, coefficients, ball_facets: ball.facets(), residual, discrepancy })
}

/// Acceptance grid for polynomiality: 5 values per variable.
fn polynomiality_grid() -> Vec<Vec<f64>> {
    product_grid(&linspace(0.25, 2.0, 5), 2)
}

fn offgrid_points() -> Vec<Vec<f64>> {
    vec![vec![0.4, 1.3], vec![1.7, 0.6], vec![0.9, 0.9], vec![2.6, 0.3], vec![0.15, 3.1], vec![1.35, 1.85]]
}

/// Polynomiality campaign: random planar pairs `(f, g)`, fit of
/// `F(ε₁,ε₂) = ∫ (ε₁⊙f) ⊕ (ε₂⊙g)` on a 5×5 grid.
///
/// Per-trial margin is `min(min coefficient, 1e-9 − residual, 1e-8 − off-grid error)`.
pub fn verify_polynomiality(seed: u64, trials: usize, tolerance: f64) -> Result<VerifyReport> {
    let grid = polynomiality_grid();
    let off = offgrid_points();
    run_campaign(
        Inequality::Polynomiality,
        seed,
        trials,
        tolerance,
        None,
        &[("max_residual", Fold::Max), ("max_offgrid_error", Fold::Max), ("min_coefficient", Fold::Min), ("max_swap_asymmetry", Fold::Max)],
        |rng, _| {
            let f = random_cake(rng, 2, 3)?;
            let g = random_cake(rng, 2, 3)?;
            let fs = [&f, &g];
            let fit = minkowski_fit(&fs, &grid)?;
            let offgrid = prediction_error(&fit, &fs, &off)?;
            let swapped = minkowski_fit(&[&g, &f], &grid)?;
            let asym = (0..3)
                .map(|i| (fit.coefficients[i] - swapped.coefficients[2 - i]).abs() / fit.coefficients[i].abs().max(1.0))
                .fold(0.0, f64::max);
            let min_coef = fit.min_coefficient();
            let margin = min_coef.min(1e-9 - fit.residual).min(1e-8 - offgrid);
            Ok(TrialOutcome::new(margin, digest(&fs))
                .metric("max_residual", fit.residual)
                .metric("max_offgrid_error", offgrid)
                .metric("min_coefficient", min_coef)
                .metric("max_swap_asymmetry", asym))
        },
    )
}

fn rel_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

fn v2(f: &LayerCake, g: &LayerCake) -> Result<f64> {
    Ok(mixed_integral(&[f, g])?.value)
}

/// Nested planar segments along `dir`, centred at `c`.
fn segment_cake<R: Rng>(rng: &mut R, dir: [f64; 2], c: [f64; 2]) -> Result<LayerCake> {
    let mut len = rng.gen_range(0.2..1.0);
    let mut pairs = Vec::new();
    for t in [1.0, 0.6, 0.3] {
        let a = [c[0] - len * dir[0], c[1] - len * dir[1]];
        let b = [c[0] + len * dir[0], c[1] + len * dir[1]];
        pairs.push((t, Polytope::hull(&[a, b], 2)?));
        len += rng.gen_range(0.1..1.0);
    }
    LayerCake::from_pairs(pairs)
}

fn random_rotation<R: Rng>(rng: &mut R) -> DMatrix<f64> {
    let th: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    DMatrix::from_row_slice(2, 2, &[th.cos(), -th.sin(), th.sin(), th.cos()])
}

fn shift<R: Rng>(rng: &mut R) -> Vec<f64> {
    vec![rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)]
}

/// Five structural properties of `V` on random planar inputs.
///
/// Sub-margins (all `≥ 0` when the property holds): monotonicity
/// `V(f) − V(g)` relative; invariance and `|det u|` scaling as minus the
/// relative gap; vanishing as minus the value on parallel segments (and `−1`
/// if non-parallel segments give zero); valuation as minus the relative gap of
/// `V(f₁∨f₂,h)+V(f₁∧f₂,h) = V(f₁,h)+V(f₂,h)`.
pub fn verify_v_properties(seed: u64, trials: usize, tolerance: f64) -> Result<VerifyReport> {
    let names = ["monotonicity", "invariance", "det_scaling", "vanishing", "valuation"];
    let folds: Vec<(&'static str, Fold)> = names.iter().map(|&n| (n, Fold::Min)).collect();
    run_campaign(Inequality::VProperties, seed, trials, tolerance, None, &folds, |rng, _| {
        let f1 = random_cake(rng, 2, 3)?;
        let f2 = random_cake(rng, 2, 3)?;
        let v = v2(&f1, &f2)?;

        let shrink = |rng: &mut crate::rng::TrialRng, f: &LayerCake| -> Result<LayerCake> {
            let c = f.layers()[0].body.vertex_centroid().expect("non-empty");
            let lambda = rng.gen_range(0.5..0.95);
            f.map_bodies(|b| b.scale_about(lambda, &c))
        };
        let g1 = shrink(rng, &f1)?;
        let g2 = shrink(rng, &f2)?;
        let monotonicity = (v - v2(&g1, &g2)?) / v.max(1e-300);

        let rot = random_rotation(rng);
        let moved1 = f1.affine_map(&rot, &shift(rng))?;
        let moved2 = f2.affine_map(&rot, &shift(rng))?;
        let invariance = -rel_gap(v2(&moved1, &moved2)?, v);

        let u = loop {
            let u: DMatrix<f64> = DMatrix::from_fn(2, 2, |_, _| rng.gen_range(-2.0..2.0));
            if u.determinant().abs() > 0.2 {
                break u;
            }
        };
        let zero = [0.0, 0.0];
        let det_scaling = -rel_gap(v2(&f1.affine_map(&u, &zero)?, &f2.affine_map(&u, &zero)?)?, u.determinant().abs() * v);

        let th: f64 = rng.gen_range(0.0..std::f64::consts::PI);
        let dir = [th.cos(), th.sin()];
        let c1 = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let c2 = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let s1 = segment_cake(rng, dir, c1)?;
        let s2 = segment_cake(rng, dir, c2)?;
        let th2 = th + rng.gen_range(0.3..std::f64::consts::PI - 0.3);
        let s3 = segment_cake(rng, [th2.cos(), th2.sin()], [0.0, 0.0])?;
        let parallel = v2(&s1, &s2)?;
        let crossing = v2(&s1, &s3)?;
        let vanishing = -parallel.abs() - if crossing > 1e-6 { 0.0 } else { 1.0 };

        let (a, b) = random_overlapping_box_pair(rng, 3)?;
        let h = random_cake(rng, 2, 3)?;
        let valuation = match a.lattice_max(&b)? {
            MaxOutcome::QuasiConcave(mx) => {
                let mn = a.lattice_min(&b)?;
                let lhs = v2(&mx, &h)? + v2(&mn, &h)?;
                let rhs = v2(&a, &h)? + v2(&b, &h)?;
                -rel_gap(lhs, rhs)
            }
            _ => -1.0,
        };

        let subs = [monotonicity, invariance, det_scaling, vanishing, valuation];
        let margin = subs.iter().copied().fold(f64::INFINITY, f64::min);
        let mut out = TrialOutcome::new(margin, digest(&[&f1, &f2]));
        for (name, value) in names.iter().zip(subs) {
            out = out.metric(name, value);
        }
        Ok(out)
    })
}
