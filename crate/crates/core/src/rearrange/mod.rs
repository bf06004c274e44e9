//! Symmetric decreasing rearrangement of layer cakes against a fixed polytopal
//! ball, the rearrangement inequalities, and the vanishing-surface sequence.

use serde::{Deserialize, Serialize};

use crate::convex_body::{BallApprox, Polytope};
use crate::digest::digest;
use crate::error::{Error, Result};
use crate::layercake::{merge_thresholds, Layer, LayerCake};
use crate::mixed_integral::{mixed_integral, quermassintegral, surface_area};
use crate::report::{run_campaign, Fold, Inequality, TrialOutcome, VerifyReport};
use crate::sample::random_cake;


fn check_dim(k: usize, ball: &BallApprox) -> Result<()> {
    if ball.dim() != k {
        return Err(Error::DimensionMismatch { expected: k, found: ball.dim() });
    }
    Ok(())
}

/// `ρ(K) = (Vol K / Vol D)^{1/n}`: radius of the ball with the volume of `K`.
pub fn equivalent_radius(body: &Polytope, ball: &BallApprox) -> f64 {
    (body.volume() / ball.volume()).powf(1.0 / ball.dim() as f64)
}

/// `K*`: the ball approximation scaled to the volume of `K` (a point when `K` is flat).
pub fn rearrange_body(body: &Polytope, ball: &BallApprox) -> Result<Polytope> {
    check_dim(body.dim(), ball)?;
    ball.polytope().scale(equivalent_radius(body, ball))
}

/// `f*`: every level set replaced by its rearrangement.
pub fn rearrange(f: &LayerCake, ball: &BallApprox) -> Result<LayerCake> {
    check_dim(f.dim(), ball)?;
    let layers = f.layers().iter().map(|l| Ok(Layer { t: l.t, body: rearrange_body(&l.body, ball)? })).collect::<Result<Vec<_>>>()?;
    if f.is_normalized() {
        LayerCake::new(f.dim(), layers)
    } else {
        LayerCake::from_pairs(layers.into_iter().map(|l| (l.t, l.body)).collect())
    }
}

/// `S(f) − S(f*)` on random cakes, same ball on both sides.
pub fn verify_isoperimetric(seed: u64, trials: usize, ball: &BallApprox, tolerance: f64) -> Result<VerifyReport> {
    let n = ball.dim();
    run_campaign(Inequality::Isoperimetric, seed, trials, tolerance, Some(ball.facets()), &[("max_margin", Fold::Max)], |rng, _| {
        let f = random_cake(rng, n, 4)?;
        let margin = surface_area(&f, ball)? - surface_area(&rearrange(&f, ball)?, ball)?;
        Ok(TrialOutcome::new(margin, digest(&f)).metric("max_margin", margin))
    })
}

/// Level-wise `ρ(K_t f + K_t g) − ρ(K_t f) − ρ(K_t g)`, minimised over merged thresholds.
pub fn bm_margin(f: &LayerCake, g: &LayerCake, ball: &BallApprox) -> Result<f64> {
    check_dim(f.dim(), ball)?;
    check_dim(g.dim(), ball)?;
    let mut worst = f64::INFINITY;
    for t in merge_thresholds(&[f, g]) {
        let a = f.level_set(t)?;
        let b = g.level_set(t)?;
        let margin = equivalent_radius(&a.minkowski_sum(&b)?, ball) - equivalent_radius(&a, ball) - equivalent_radius(&b, ball);
        worst = worst.min(margin);
    }
    Ok(worst)
}

/// `(f ⊕ g)* ≥ f* ⊕ g*` through level radii on random pairs.
pub fn verify_bm(seed: u64, trials: usize, ball: &BallApprox, tolerance: f64) -> Result<VerifyReport> {
    let n = ball.dim();
    run_campaign(Inequality::BrunnMinkowski, seed, trials, tolerance, Some(ball.facets()), &[], |rng, _| {
        let f = random_cake(rng, n, 4)?;
        let g = random_cake(rng, n, 4)?;
        Ok(TrialOutcome::new(bm_margin(&f, &g, ball)?, digest(&[&f, &g])))
    })
}

/// `V(f₁,…,f_n) − V(f₁*,…,f_n*)` and the Urysohn-type `W_{n−1}(f₁) − W_{n−1}(f₁*)`.
pub fn af_margins(fs: &[&LayerCake], ball: &BallApprox) -> Result<(f64, f64)> {
    let n = ball.dim();
    let stars = fs.iter().map(|f| rearrange(f, ball)).collect::<Result<Vec<_>>>()?;
    let star_refs: Vec<&LayerCake> = stars.iter().collect();
    let af = mixed_integral(fs)?.value - mixed_integral(&star_refs)?.value;
    let urysohn = quermassintegral(fs[0], n - 1, ball)? - quermassintegral(&stars[0], n - 1, ball)?;
    Ok((af, urysohn))
}

pub fn verify_af_corollary(seed: u64, trials: usize, ball: &BallApprox, tolerance: f64) -> Result<VerifyReport> {
    let n = ball.dim();
    run_campaign(
        Inequality::AfCorollary,
        seed,
        trials,
        tolerance,
        Some(ball.facets()),
        &[("min_af_margin", Fold::Min), ("min_urysohn_margin", Fold::Min)],
        |rng, _| {
            let fs = (0..n).map(|_| random_cake(rng, n, 3)).collect::<Result<Vec<_>>>()?;
            let refs: Vec<&LayerCake> = fs.iter().collect();
            let (af, urysohn) = af_margins(&refs, ball)?;
            Ok(TrialOutcome::new(af.min(urysohn), digest(&refs)).metric("min_af_margin", af).metric("min_urysohn_margin", urysohn))
        },
    )
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfacePoint {
    pub k: u32,
    /// `R_k = 2^k`: radius of the base layer; the top layer has radius `1/R_k`.
    pub radius: f64,
    /// Threshold of the base layer, chosen so that `∫ f_k = 1`.
    pub delta: f64,
    pub integral: f64,
    pub surface_area: f64,
}

/// Planar two-layer cakes `f_k = 1` on `R_k⁻¹D`, `δ_k` on `R_k D`, with
/// `∫ f_k = 1` while `S(f_k) → 0`.
pub fn shrinking_surface_sequence(k_max: u32, ball: &BallApprox) -> Result<Vec<SurfacePoint>> {
    if ball.dim() != 2 {
        return Err(Error::PlanarOnly("shrinking_surface_sequence"));
    }
    if k_max < 1 {
        return Err(Error::Precondition("k_max must be >= 1".into()));
    }
    (1..=k_max)
        .map(|k| {
            let radius = 2f64.powi(k as i32);
            let top = ball.polytope().scale(1.0 / radius)?;
            let base = ball.polytope().scale(radius)?;
            let (v1, v2) = (top.volume(), base.volume());
            let delta = (1.0 - v1) / (v2 - v1);
            let f = LayerCake::from_pairs(vec![(1.0, top), (delta, base)])?;
            Ok(SurfacePoint { k, radius, delta, integral: f.integral(), surface_area: surface_area(&f, ball)? })
        })
        .collect()
}
