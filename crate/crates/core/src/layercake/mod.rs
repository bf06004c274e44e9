//! Quasi-concave step functions ("layer cakes").
//!
//! A cake is a list of thresholds `1 = t_1 > t_2 > … > t_N > 0` with nested
//! bodies `B_1 ⊆ … ⊆ B_N`, representing `f(x) = max{t_i : x ∈ B_i}` (0 off
//! `B_N`). Its upper level set `K_t(f)` is `B_i` for the largest `i` with
//! `t_i ≥ t`, so every level set is a polytope and the quasi-sum acts layer by
//! layer through Minkowski addition.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::convex_body::Polytope;
use crate::error::{Error, Result};

/// Thresholds closer than this are merged.
pub const THRESHOLD_DEDUP: f64 = 1e-15;
/// Relative slack of the volume test in [`LayerCake::lattice_max`].
pub const UNION_VOLUME_TOL: f64 = 1e-9;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Layer {
    pub t: f64,
    pub body: Polytope,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "CakeJson", into = "CakeJson")]
pub struct LayerCake {
    dim: usize,
    layers: Vec<Layer>,
    normalized: bool,
}

#[derive(Serialize, Deserialize)]
struct CakeJson {
    dim: usize,
    layers: Vec<Layer>,
}

impl TryFrom<CakeJson> for LayerCake {
    type Error = Error;

    fn try_from(j: CakeJson) -> Result<Self> {
        let top = j.layers.first().map(|l| l.t);
        if top == Some(1.0) {
            LayerCake::new(j.dim, j.layers)
        } else {
            LayerCake::build(j.dim, j.layers, false)
        }
    }
}

impl From<LayerCake> for CakeJson {
    fn from(c: LayerCake) -> Self {
        CakeJson { dim: c.dim, layers: c.layers }
    }
}

/// Outcome of [`LayerCake::lattice_max`].
#[derive(Clone, Debug)]
pub enum MaxOutcome {
    /// Every level set of `max(f, g)` is convex.
    QuasiConcave(LayerCake),
    /// At level `t` the union of the level sets is not convex; `gap` is the
    /// missing area `Vol(hull) - Vol(union)`.
    NotQuasiConcave { t: f64, gap: f64 },
    /// At level `t` both level sets are lower dimensional and not nested, so
    /// the area test cannot decide convexity.
    Degenerate { t: f64 },
}

impl LayerCake {
    /// A normalized cake (`t_1 = 1`).
    pub fn new(dim: usize, layers: Vec<Layer>) -> Result<Self> {
        match layers.first() {
            None => Err(Error::InvalidLayerCake("at least one layer is required".into())),
            Some(l) if l.t != 1.0 => Err(Error::InvalidLayerCake(format!("top threshold must be 1, got {}", l.t))),
            _ => Self::build(dim, layers, true),
        }
    }

    /// Convenience constructor from `(threshold, body)` pairs.
    pub fn from_pairs(pairs: Vec<(f64, Polytope)>) -> Result<Self> {
        let dim = pairs.first().map(|(_, b)| b.dim()).ok_or(Error::EmptyInput("layer cake"))?;
        Self::new(dim, pairs.into_iter().map(|(t, body)| Layer { t, body }).collect())
    }

    fn build(dim: usize, layers: Vec<Layer>, normalized: bool) -> Result<Self> {
        if !matches!(dim, 2 | 3) {
            return Err(Error::UnsupportedDimension(dim));
        }
        for (i, l) in layers.iter().enumerate() {
            if !(l.t > 0.0 && l.t <= 1.0) {
                return Err(Error::ThresholdOutOfRange(l.t));
            }
            if l.body.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: l.body.dim() });
            }
            if l.body.is_empty() {
                return Err(Error::InvalidLayerCake(format!("layer {i} has an empty body")));
            }
            if i > 0 {
                let prev = &layers[i - 1];
                if !(l.t < prev.t) {
                    return Err(Error::InvalidLayerCake(format!("thresholds must strictly decrease ({} then {})", prev.t, l.t)));
                }
                if !prev.body.is_subset_of(&l.body) {
                    return Err(Error::InvalidLayerCake(format!(
                        "layer {} (t = {}) is not contained in layer {} (t = {})",
                        i - 1,
                        prev.t,
                        i,
                        l.t
                    )));
                }
            }
        }
        Ok(LayerCake { dim, layers, normalized })
    }

    /// The indicator `1_K`.
    pub fn indicator(body: Polytope) -> Result<Self> {
        let dim = body.dim();
        Self::new(dim, vec![Layer { t: 1.0, body }])
    }

    /// The zero function (only produced by [`LayerCake::lattice_min`]).
    pub fn zero(dim: usize) -> Self {
        LayerCake { dim, layers: Vec::new(), normalized: false }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn thresholds(&self) -> impl Iterator<Item = f64> + '_ {
        self.layers.iter().map(|l| l.t)
    }

    /// `max f = 1`. Only results of [`LayerCake::lattice_min`] may be non-normalized.
    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// The support `B_N` (empty for the zero function).
    pub fn support(&self) -> Polytope {
        self.layers.last().map_or_else(|| Polytope::empty(self.dim), |l| l.body.clone())
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.layers.iter().find(|l| l.body.contains(x)).map_or(0.0, |l| l.t)
    }

    /// `K_t(f) = {f ≥ t}` for `0 < t ≤ 1`.
    pub fn level_set(&self, t: f64) -> Result<Polytope> {
        if !(t > 0.0 && t <= 1.0) {
            return Err(Error::ThresholdOutOfRange(t));
        }
        Ok(self.level_set_unchecked(t))
    }

    pub(crate) fn level_set_unchecked(&self, t: f64) -> Polytope {
        self.layers.iter().rev().find(|l| l.t >= t - THRESHOLD_DEDUP).map_or_else(|| Polytope::empty(self.dim), |l| l.body.clone())
    }

    fn ensure_same_dim(&self, other: &LayerCake) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        Ok(())
    }

    /// Quasi-sum `f ⊕ g`: `K_t(f ⊕ g) = K_t(f) + K_t(g)` at every merged threshold.
    pub fn quasi_sum(&self, other: &LayerCake) -> Result<LayerCake> {
        self.ensure_same_dim(other)?;
        let mut layers = Vec::new();
        for t in merge_thresholds(&[self, other]) {
            let body = self.level_set_unchecked(t).minkowski_sum(&other.level_set_unchecked(t))?;
            if !body.is_empty() {
                layers.push(Layer { t, body });
            }
        }
        Ok(self.assemble(layers))
    }

    fn assemble(&self, layers: Vec<Layer>) -> LayerCake {
        let normalized = layers.first().is_some_and(|l| l.t == 1.0);
        LayerCake { dim: self.dim, layers, normalized }
    }

    /// Dilation `λ ⊙ f`, i.e. `x ↦ f(x/λ)`; `0 ⊙ f = 1_{0}`.
    pub fn dilate(&self, lambda: f64) -> Result<LayerCake> {
        if !(lambda >= 0.0) {
            return Err(Error::NegativeScale(lambda));
        }
        if lambda == 0.0 {
            return Ok(LayerCake::indicator(Polytope::origin(self.dim)).expect("valid"));
        }
        self.map_bodies(|b| b.scale(lambda))
    }

    /// Applies a containment-preserving map to every body.
    pub fn map_bodies(&self, f: impl Fn(&Polytope) -> Result<Polytope>) -> Result<LayerCake> {
        let layers = self.layers.iter().map(|l| Ok(Layer { t: l.t, body: f(&l.body)? })).collect::<Result<Vec<_>>>()?;
        Ok(LayerCake { dim: self.dim, layers, normalized: self.normalized })
    }

    pub fn translate(&self, shift: &[f64]) -> Result<LayerCake> {
        self.map_bodies(|b| b.translate(shift))
    }

    /// `(u f)(x) = f(u⁻¹(x - shift))`.
    pub fn affine_map(&self, u: &DMatrix<f64>, shift: &[f64]) -> Result<LayerCake> {
        self.map_bodies(|b| b.affine_map(u, shift))
    }

    /// `∫ f = Σ (t_i - t_{i+1}) Vol(B_i)` with `t_{N+1} = 0`.
    pub fn integral(&self) -> f64 {
        let n = self.layers.len();
        (0..n)
            .map(|i| {
                let next = if i + 1 < n { self.layers[i + 1].t } else { 0.0 };
                (self.layers[i].t - next) * self.layers[i].body.volume()
            })
            .sum()
    }

    /// Pointwise maximum, when it is quasi-concave (planar only).
    pub fn lattice_max(&self, other: &LayerCake) -> Result<MaxOutcome> {
        self.ensure_same_dim(other)?;
        if self.dim != 2 {
            return Err(Error::PlanarOnly("lattice_max"));
        }
        let mut layers = Vec::new();
        for t in merge_thresholds(&[self, other]) {
            let a = self.level_set_unchecked(t);
            let b = other.level_set_unchecked(t);
            let body = if b.is_empty() || b.is_subset_of(&a) {
                a
            } else if a.is_empty() || a.is_subset_of(&b) {
                b
            } else {
                let pts: Vec<Vec<f64>> = a.vertices().chain(b.vertices()).map(|v| v.to_vec()).collect();
                let hull = Polytope::hull(&pts, 2)?;
                if hull.affine_dim() != Some(2) {
                    return Ok(MaxOutcome::Degenerate { t });
                }
                let union = a.volume() + b.volume() - a.intersect(&b)?.volume();
                let gap = hull.volume() - union;
                if gap.abs() > UNION_VOLUME_TOL * hull.volume().max(1.0) {
                    return Ok(MaxOutcome::NotQuasiConcave { t, gap });
                }
                hull
            };
            layers.push(Layer { t, body });
        }
        Ok(MaxOutcome::QuasiConcave(self.assemble(layers)))
    }

    /// Pointwise minimum (planar only). Empty top layers are dropped, so the
    /// result may be non-normalized or even zero.
    pub fn lattice_min(&self, other: &LayerCake) -> Result<LayerCake> {
        self.ensure_same_dim(other)?;
        if self.dim != 2 {
            return Err(Error::PlanarOnly("lattice_min"));
        }
        let mut layers = Vec::new();
        for t in merge_thresholds(&[self, other]) {
            let body = self.level_set_unchecked(t).intersect(&other.level_set_unchecked(t))?;
            if !body.is_empty() {
                layers.push(Layer { t, body });
            }
        }
        Ok(self.assemble(layers))
    }
}

/// Union of all thresholds, sorted decreasingly, near-duplicates merged.
pub fn merge_thresholds(cakes: &[&LayerCake]) -> Vec<f64> {
    let mut ts: Vec<f64> = cakes.iter().flat_map(|c| c.thresholds()).collect();
    ts.sort_by(|a, b| b.total_cmp(a));
    ts.dedup_by(|a, b| (*a - *b).abs() <= THRESHOLD_DEDUP);
    ts
}
