//! Random inputs for verification campaigns and tests.

use rand::Rng;

use crate::alpha_core::{ConvexProfile, TailKind};
use crate::convex_body::Polytope;
use crate::error::Result;
use crate::layercake::{Layer, LayerCake};

/// Hull of `n` uniform points in the cube of half-width `spread` around `center`.
pub fn random_body<R: Rng>(rng: &mut R, center: &[f64], spread: f64, n: usize) -> Result<Polytope> {
    let pts: Vec<Vec<f64>> = (0..n).map(|_| center.iter().map(|c| c + rng.gen_range(-spread..spread)).collect()).collect();
    Polytope::hull(&pts, center.len())
}

/// Hull of `n` random convex combinations of the vertices of `outer`; always a subset of `outer`.
pub fn random_inner_body<R: Rng>(rng: &mut R, outer: &Polytope, n: usize) -> Result<Polytope> {
    let verts: Vec<&[f64]> = outer.vertices().collect();
    let pts: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            let w: Vec<f64> = verts.iter().map(|_| -rng.gen_range(1e-9f64..1.0).ln()).collect();
            let total: f64 = w.iter().sum();
            (0..outer.dim()).map(|k| verts.iter().zip(&w).map(|(v, wi)| v[k] * wi).sum::<f64>() / total).collect()
        })
        .collect();
    Polytope::hull(&pts, outer.dim())
}

/// Random decreasing thresholds `1 = t_1 > … > t_n` in `(0, 1]`.
pub fn random_thresholds<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let mut ts = vec![1.0];
    let mut rest: Vec<f64> = (1..n).map(|_| rng.gen_range(0.05..0.95)).collect();
    rest.sort_by(|a, b| b.total_cmp(a));
    rest.dedup();
    ts.extend(rest);
    ts
}

/// A random cake with 1..=`max_layers` layers of random nested polytopes.
pub fn random_cake<R: Rng>(rng: &mut R, dim: usize, max_layers: usize) -> Result<LayerCake> {
    let n = rng.gen_range(1..=max_layers.max(1));
    let ts = random_thresholds(rng, n);
    let center: Vec<f64> = (0..dim).map(|_| rng.gen_range(-2.0..2.0)).collect();
    let spread = rng.gen_range(0.5..2.0);
    let min_pts = dim + 2;
    let npts = rng.gen_range(min_pts..=min_pts + 5);
    let mut bodies = vec![random_body(rng, &center, spread, npts)?];
    for _ in 1..ts.len() {
        let outer = bodies.last().expect("non-empty");
        let npts = rng.gen_range(min_pts..=min_pts + 4);
        let inner = random_inner_body(rng, outer, npts)?;
        bodies.push(inner);
    }
    bodies.reverse();
    LayerCake::new(dim, ts.into_iter().zip(bodies).map(|(t, body)| Layer { t, body }).collect())
}

/// A random cake of nested axis-aligned boxes whose corners lie on the lattice `step·Z^dim`.
pub fn random_lattice_box_cake<R: Rng>(rng: &mut R, dim: usize, max_layers: usize, step: f64, reach: i32) -> Result<LayerCake> {
    let n = rng.gen_range(1..=max_layers.max(1));
    let ts = random_thresholds(rng, n);
    let mut lo: Vec<i32> = (0..dim).map(|_| rng.gen_range(-reach..=0)).collect();
    let mut hi: Vec<i32> = lo.iter().map(|&l| l + rng.gen_range(0..=reach)).collect();
    let mut layers = Vec::with_capacity(ts.len());
    for t in ts {
        let body = Polytope::axis_box(
            &lo.iter().map(|&v| v as f64 * step).collect::<Vec<_>>(),
            &hi.iter().map(|&v| v as f64 * step).collect::<Vec<_>>(),
        )?;
        layers.push(Layer { t, body });
        for k in 0..dim {
            lo[k] -= rng.gen_range(0..=1);
            hi[k] += rng.gen_range(0..=1);
        }
    }
    LayerCake::new(dim, layers)
}

/// Two planar box cakes sharing thresholds and vertical extents, with
/// overlapping horizontal extents, so that their maximum is quasi-concave.
pub fn random_overlapping_box_pair<R: Rng>(rng: &mut R, max_layers: usize) -> Result<(LayerCake, LayerCake)> {
    let n = rng.gen_range(1..=max_layers.max(1));
    let ts = random_thresholds(rng, n);
    let (mut y0, mut y1) = (rng.gen_range(-1.0..0.0), rng.gen_range(0.1..1.0));
    let (mut a0, mut a1) = (rng.gen_range(-2.0..-1.0), rng.gen_range(0.0..0.5));
    let (mut b0, mut b1) = (rng.gen_range(-0.5..0.0), rng.gen_range(1.0..2.0));
    let mut fa = Vec::new();
    let mut fb = Vec::new();
    for t in ts {
        fa.push(Layer { t, body: Polytope::axis_box(&[a0, y0], &[a1, y1])? });
        fb.push(Layer { t, body: Polytope::axis_box(&[b0, y0], &[b1, y1])? });
        let grow = |rng: &mut R| rng.gen_range(0.0..0.5);
        y0 -= grow(rng);
        y1 += grow(rng);
        a0 -= grow(rng);
        a1 += grow(rng);
        b0 -= grow(rng);
        b1 += grow(rng);
    }
    Ok((LayerCake::new(2, fa)?, LayerCake::new(2, fb)?))
}

/// A random piecewise-linear convex base: up to four segments with increasing
/// slopes (the first possibly flat), then either a steeper linear tail or,
/// one time in five, compact support.
pub fn random_convex_profile<R: Rng>(rng: &mut R) -> ConvexProfile {
    let compact = rng.gen_bool(0.2);
    let count = rng.gen_range(if compact { 1 } else { 0 }..=4);
    let mut slope: f64 = if rng.gen_bool(0.2) { 0.0 } else { rng.gen_range(0.05..1.0) };
    let mut segments = Vec::with_capacity(count);
    for _ in 0..count {
        segments.push((rng.gen_range(0.1..1.5), slope));
        slope += rng.gen_range(0.05..1.0);
    }
    let tail = if compact { TailKind::Compact } else { TailKind::Slope(slope.max(0.2)) };
    ConvexProfile::from_segments(&segments, tail).expect("slopes increase by construction")
}
