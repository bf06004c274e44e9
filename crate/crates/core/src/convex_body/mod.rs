//! Exact polytope kernel in dimensions 2 and 3.
//!
//! Bodies are stored in V-representation: a hull-reduced list of extreme
//! points, plus outward triangles for full-dimensional 3D bodies. All
//! comparisons between bodies should go through [`Polytope::hausdorff`] since
//! Minkowski sums permute vertex order.

mod ball;
mod hull2d;
mod hull3d;
pub(crate) mod vec3;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use hull2d::hull2_indices;
use hull3d::{hull3, Hull3};
use vec3::{add, dist, dot, extent, mul, orient2, point_segment_distance, point_triangle_distance, sub, P3};

pub use ball::BallApprox;

/// Minimum distance between two stored vertices.
pub const DEDUP_TOL: f64 = 1e-12;
/// Relative tolerance for orientation and coplanarity predicates.
pub const ORIENT_TOL: f64 = 1e-10;
/// Absolute slack for point-in-body tests.
pub const CONTAIN_TOL: f64 = 1e-10;

/// A compact convex body in R^2 or R^3 given by its extreme points.
///
/// The distinguished empty body (no vertices) only arises from intersections
/// and from level sets of non-normalized layer cakes.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "PolytopeJson", into = "PolytopeJson")]
pub struct Polytope {
    dim: usize,
    /// 2D: counter-clockwise. 3D degenerate polygons: cyclic.
    vertices: Vec<P3>,
    /// Outward triangles; non-empty exactly for full-dimensional 3D bodies.
    facets: Vec<[usize; 3]>,
}

#[derive(Serialize, Deserialize)]
struct PolytopeJson {
    dim: usize,
    vertices: Vec<Vec<f64>>,
}

impl TryFrom<PolytopeJson> for Polytope {
    type Error = Error;

    fn try_from(j: PolytopeJson) -> Result<Self> {
        if j.vertices.is_empty() {
            check_dim(j.dim)?;
            return Ok(Polytope::empty(j.dim));
        }
        Polytope::hull(&j.vertices, j.dim)
    }
}

impl From<Polytope> for PolytopeJson {
    fn from(p: Polytope) -> Self {
        PolytopeJson { dim: p.dim, vertices: p.vertices().map(|v| v.to_vec()).collect() }
    }
}

fn check_dim(dim: usize) -> Result<()> {
    match dim {
        2 | 3 => Ok(()),
        d => Err(Error::UnsupportedDimension(d)),
    }
}

fn lift(p: &[f64], dim: usize) -> Result<P3> {
    if p.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: p.len() });
    }
    if p.iter().any(|x| !x.is_finite()) {
        return Err(Error::Precondition("non-finite coordinate".into()));
    }
    let mut q = [0.0; 3];
    q[..dim].copy_from_slice(p);
    Ok(q)
}

impl Polytope {
    /// Convex hull of `points`, each of length `dim`.
    pub fn hull<P: AsRef<[f64]>>(points: &[P], dim: usize) -> Result<Self> {
        check_dim(dim)?;
        if points.is_empty() {
            return Err(Error::EmptyInput("hull needs at least one point"));
        }
        let pts = points.iter().map(|p| lift(p.as_ref(), dim)).collect::<Result<Vec<_>>>()?;
        Ok(Self::from_points(dim, &pts))
    }

    pub(crate) fn from_points(dim: usize, pts: &[P3]) -> Self {
        if pts.is_empty() {
            return Self::empty(dim);
        }
        let tol = ORIENT_TOL * extent(pts).max(1e-300);
        if dim == 2 {
            let idx = hull2_indices(pts, tol.max(DEDUP_TOL));
            let vertices = idx.into_iter().map(|i| pts[i]).collect();
            return Polytope { dim, vertices, facets: Vec::new() };
        }
        match hull3(pts, ORIENT_TOL) {
            Hull3::Empty => Self::empty(dim),
            Hull3::Point(p) => Polytope { dim, vertices: vec![p], facets: Vec::new() },
            Hull3::Segment(a, b) => {
                let vertices = if dist(a, b) <= DEDUP_TOL { vec![a] } else { vec![a, b] };
                Polytope { dim, vertices, facets: Vec::new() }
            }
            Hull3::Polygon(vertices) => Polytope { dim, vertices, facets: Vec::new() },
            Hull3::Solid { vertices, facets } => Polytope { dim, vertices, facets },
        }
    }

    /// The distinguished empty body.
    pub fn empty(dim: usize) -> Self {
        Polytope { dim, vertices: Vec::new(), facets: Vec::new() }
    }

    /// The single-point body `{p}`.
    pub fn point(p: &[f64]) -> Result<Self> {
        Self::hull(&[p], p.len())
    }

    /// The origin `{0}`.
    pub fn origin(dim: usize) -> Self {
        Polytope { dim, vertices: vec![[0.0; 3]], facets: Vec::new() }
    }

    /// Axis-aligned box `[lo, hi]`.
    pub fn axis_box(lo: &[f64], hi: &[f64]) -> Result<Self> {
        let dim = lo.len();
        check_dim(dim)?;
        if hi.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: hi.len() });
        }
        let mut pts = Vec::new();
        for mask in 0..(1usize << dim) {
            pts.push((0..dim).map(|k| if mask >> k & 1 == 1 { hi[k] } else { lo[k] }).collect::<Vec<_>>());
        }
        Self::hull(&pts, dim)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Extreme points, each a slice of length `dim`.
    pub fn vertices(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.vertices.iter().map(move |v| &v[..self.dim])
    }

    /// Dimension of the affine hull; `None` for the empty body.
    pub fn affine_dim(&self) -> Option<usize> {
        match self.vertices.len() {
            0 => None,
            1 => Some(0),
            2 => Some(1),
            _ if self.dim == 2 || !self.facets.is_empty() => Some(self.dim),
            _ => Some(2),
        }
    }

    /// Mean of the vertices; lies inside the body.
    pub fn vertex_centroid(&self) -> Option<Vec<f64>> {
        if self.is_empty() {
            return None;
        }
        let mut c = [0.0; 3];
        for v in &self.vertices {
            c = add(c, *v);
        }
        Some(mul(c, 1.0 / self.vertices.len() as f64)[..self.dim].to_vec())
    }

    pub fn bounding_box(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        if self.is_empty() {
            return None;
        }
        let mut lo = vec![f64::INFINITY; self.dim];
        let mut hi = vec![f64::NEG_INFINITY; self.dim];
        for v in self.vertices() {
            for k in 0..self.dim {
                lo[k] = lo[k].min(v[k]);
                hi[k] = hi[k].max(v[k]);
            }
        }
        Some((lo, hi))
    }

    fn ensure_same_dim(&self, other: &Polytope) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        Ok(())
    }

    /// `self + other = {x + y}`; the hull of all pairwise vertex sums.
    pub fn minkowski_sum(&self, other: &Polytope) -> Result<Polytope> {
        self.ensure_same_dim(other)?;
        if self.is_empty() || other.is_empty() {
            return Ok(Polytope::empty(self.dim));
        }
        if other.vertices.len() == 1 {
            return Ok(self.translated_raw(other.vertices[0]));
        }
        if self.vertices.len() == 1 {
            return Ok(other.translated_raw(self.vertices[0]));
        }
        let mut pts = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for a in &self.vertices {
            for b in &other.vertices {
                pts.push(add(*a, *b));
            }
        }
        Ok(Polytope::from_points(self.dim, &pts))
    }

    /// `λ·self`. `λ = 0` yields `{0}`.
    pub fn scale(&self, lambda: f64) -> Result<Polytope> {
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(Error::NegativeScale(lambda));
        }
        if self.is_empty() {
            return Ok(self.clone());
        }
        if lambda == 0.0 {
            return Ok(Polytope::origin(self.dim));
        }
        let vertices = self.vertices.iter().map(|v| mul(*v, lambda)).collect();
        Ok(Polytope { dim: self.dim, vertices, facets: self.facets.clone() })
    }

    /// Homothety about `center`: `center + λ(self - center)`.
    pub fn scale_about(&self, lambda: f64, center: &[f64]) -> Result<Polytope> {
        let c = lift(center, self.dim)?;
        Ok(self.translated_raw(mul(c, -1.0)).scale(lambda)?.translated_raw(c))
    }

    pub fn translate(&self, shift: &[f64]) -> Result<Polytope> {
        Ok(self.translated_raw(lift(shift, self.dim)?))
    }

    fn translated_raw(&self, s: P3) -> Polytope {
        Polytope { dim: self.dim, vertices: self.vertices.iter().map(|v| add(*v, s)).collect(), facets: self.facets.clone() }
    }

    /// Image under `x ↦ u·x + shift`.
    pub fn affine_map(&self, u: &DMatrix<f64>, shift: &[f64]) -> Result<Polytope> {
        if u.nrows() != self.dim || u.ncols() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: u.nrows() });
        }
        let det = u.determinant();
        if !(det.abs() > 1e-12) {
            return Err(Error::SingularMap(det.abs()));
        }
        let s = lift(shift, self.dim)?;
        let pts: Vec<P3> = self
            .vertices
            .iter()
            .map(|v| {
                let mut out = s;
                for r in 0..self.dim {
                    for c in 0..self.dim {
                        out[r] += u[(r, c)] * v[c];
                    }
                }
                out
            })
            .collect();
        Ok(Polytope::from_points(self.dim, &pts))
    }

    /// Lebesgue measure in the ambient dimension; 0 for lower-dimensional bodies.
    pub fn volume(&self) -> f64 {
        if self.dim == 2 {
            if self.vertices.len() < 3 {
                return 0.0;
            }
            let n = self.vertices.len();
            let o = self.vertices[0];
            let mut twice = 0.0;
            for i in 1..n - 1 {
                twice += orient2(o, self.vertices[i], self.vertices[i + 1]);
            }
            return (0.5 * twice).max(0.0);
        }
        if self.facets.is_empty() {
            return 0.0;
        }
        let mut c = [0.0; 3];
        for v in &self.vertices {
            c = add(c, *v);
        }
        let c = mul(c, 1.0 / self.vertices.len() as f64);
        let mut six = 0.0;
        for f in &self.facets {
            let a = sub(self.vertices[f[0]], c);
            let b = sub(self.vertices[f[1]], c);
            let d = sub(self.vertices[f[2]], c);
            six += dot(a, vec3::cross(b, d));
        }
        (six / 6.0).max(0.0)
    }

    /// Support function `h(u) = max_x <x, u>`.
    pub fn support(&self, u: &[f64]) -> Result<f64> {
        let u = lift(u, self.dim)?;
        Ok(self.vertices.iter().map(|v| dot(*v, u)).fold(f64::NEG_INFINITY, f64::max))
    }

    fn contain_slack(&self) -> f64 {
        CONTAIN_TOL * extent(&self.vertices).max(1.0)
    }

    /// Closed containment with slack [`CONTAIN_TOL`] (scaled by the body's extent when larger than 1).
    pub fn contains(&self, x: &[f64]) -> bool {
        match lift(x, self.dim) {
            Ok(p) => self.contains_raw(p, self.contain_slack()),
            Err(_) => false,
        }
    }

    pub(crate) fn contains_raw(&self, p: P3, slack: f64) -> bool {
        match self.affine_dim() {
            None => false,
            Some(d) if d < self.dim => self.distance_raw(p) <= slack,
            Some(_) if self.dim == 2 => {
                let n = self.vertices.len();
                (0..n).all(|i| {
                    let a = self.vertices[i];
                    let b = self.vertices[(i + 1) % n];
                    orient2(a, b, p) >= -slack * dist(a, b)
                })
            }
            Some(_) => self.facets.iter().all(|f| {
                let a = self.vertices[f[0]];
                let n = vec3::cross(sub(self.vertices[f[1]], a), sub(self.vertices[f[2]], a));
                let len = vec3::norm(n);
                len == 0.0 || dot(n, sub(p, a)) <= slack * len
            }),
        }
    }

    /// Every vertex of `self` lies in `other` (up to slack).
    pub fn is_subset_of(&self, other: &Polytope) -> bool {
        let slack = other.contain_slack().max(self.contain_slack());
        self.vertices.iter().all(|&v| other.contains_raw(v, slack))
    }

    /// Euclidean distance from `x` to the body (0 inside).
    pub fn distance(&self, x: &[f64]) -> Result<f64> {
        Ok(self.distance_raw(lift(x, self.dim)?))
    }

    pub(crate) fn distance_raw(&self, p: P3) -> f64 {
        let v = &self.vertices;
        match v.len() {
            0 => f64::INFINITY,
            1 => dist(p, v[0]),
            2 => point_segment_distance(p, v[0], v[1]),
            n if self.dim == 2 => {
                if self.contains_raw(p, 0.0) {
                    return 0.0;
                }
                (0..n).map(|i| point_segment_distance(p, v[i], v[(i + 1) % n])).fold(f64::INFINITY, f64::min)
            }
            n if self.facets.is_empty() => {
                (1..n - 1).map(|i| point_triangle_distance(p, v[0], v[i], v[i + 1])).fold(f64::INFINITY, f64::min)
            }
            _ => {
                if self.contains_raw(p, 0.0) {
                    return 0.0;
                }
                self.facets.iter().map(|f| point_triangle_distance(p, v[f[0]], v[f[1]], v[f[2]])).fold(f64::INFINITY, f64::min)
            }
        }
    }

    /// Hausdorff distance between the two bodies; infinite if exactly one is empty.
    pub fn hausdorff(&self, other: &Polytope) -> f64 {
        match (self.is_empty(), other.is_empty()) {
            (true, true) => return 0.0,
            (true, false) | (false, true) => return f64::INFINITY,
            _ => {}
        }
        let a = self.vertices.iter().map(|&v| other.distance_raw(v)).fold(0.0, f64::max);
        let b = other.vertices.iter().map(|&v| self.distance_raw(v)).fold(0.0, f64::max);
        a.max(b)
    }

    /// Planar intersection by successive half-plane clipping.
    pub fn intersect(&self, other: &Polytope) -> Result<Polytope> {
        self.ensure_same_dim(other)?;
        if self.dim != 2 {
            return Err(Error::PlanarOnly("intersect"));
        }
        if self.is_empty() || other.is_empty() {
            return Ok(Polytope::empty(2));
        }
        let slack = self.contain_slack().max(other.contain_slack());
        let (subject, clip) = if other.affine_dim() == Some(2) {
            (self, other)
        } else if self.affine_dim() == Some(2) {
            (other, self)
        } else {
            return Ok(intersect_degenerate(self, other, slack));
        };
        let mut poly: Vec<P3> = subject.vertices.clone();
        let n = clip.vertices.len();
        for i in 0..n {
            if poly.is_empty() {
                break;
            }
            let a = clip.vertices[i];
            let b = clip.vertices[(i + 1) % n];
            let len = dist(a, b);
            let side = |p: P3| orient2(a, b, p) / len;
            let mut next = Vec::with_capacity(poly.len() + 2);
            let m = poly.len();
            for j in 0..m {
                let cur = poly[j];
                let prev = poly[(j + m - 1) % m];
                let (sc, sp) = (side(cur), side(prev));
                let cin = sc >= -slack;
                let pin = sp >= -slack;
                if cin {
                    if !pin && sp < 0.0 && sc > 0.0 {
                        next.push(edge_point(prev, cur, sp, sc));
                    }
                    next.push(cur);
                } else if pin && sp > 0.0 && sc < 0.0 {
                    next.push(edge_point(prev, cur, sp, sc));
                }
            }
            poly = next;
        }
        Ok(Polytope::from_points(2, &poly))
    }
}

fn edge_point(p: P3, q: P3, sp: f64, sq: f64) -> P3 {
    let t = sp / (sp - sq);
    add(p, mul(sub(q, p), t))
}

/// Intersection when neither body is full-dimensional (points and segments).
fn intersect_degenerate(p: &Polytope, q: &Polytope, slack: f64) -> Polytope {
    let mut cand: Vec<P3> = Vec::new();
    cand.extend(p.vertices.iter().copied().filter(|&v| q.contains_raw(v, slack)));
    cand.extend(q.vertices.iter().copied().filter(|&v| p.contains_raw(v, slack)));
    if p.vertices.len() == 2 && q.vertices.len() == 2 {
        let (a, b, c, d) = (p.vertices[0], p.vertices[1], q.vertices[0], q.vertices[1]);
        let d1 = orient2(c, d, a);
        let d2 = orient2(c, d, b);
        let d3 = orient2(a, b, c);
        let d4 = orient2(a, b, d);
        if d1 * d2 < 0.0 && d3 * d4 < 0.0 {
            cand.push(edge_point(a, b, d1, d2));
        }
    }
    Polytope::from_points(2, &cand)
}

/// Mixed volume `V(K_1, …, K_n)` of `n` bodies in R^n by polarization:
/// `n!·V = Σ_{S ≠ ∅} (-1)^{n-|S|} Vol(Σ_{i∈S} K_i)`.
///
/// Arguments are put in a canonical order first, so the result is exactly
/// symmetric under permutations.
pub fn mixed_volume(bodies: &[&Polytope]) -> Result<f64> {
    let n = bodies.len();
    let Some(first) = bodies.first() else {
        return Err(Error::EmptyInput("mixed_volume needs bodies"));
    };
    let dim = first.dim;
    check_dim(dim)?;
    for b in bodies {
        if b.dim != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: b.dim });
        }
    }
    if n != dim {
        return Err(Error::Arity { expected: dim, found: n });
    }
    if bodies.iter().any(|b| b.is_empty()) {
        return Ok(0.0);
    }
    let mut sorted: Vec<&Polytope> = bodies.to_vec();
    sorted.sort_by(|a, b| canonical_cmp(a, b));

    let full = 1usize << n;
    let mut sums: Vec<Option<Polytope>> = vec![None; full];
    let mut acc = 0.0;
    for mask in 1..full {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let body =
            if rest == 0 { sorted[low].clone() } else { sums[rest].as_ref().expect("smaller subsets first").minkowski_sum(sorted[low])? };
        let sign = if (n - mask.count_ones() as usize).is_multiple_of(2) { 1.0 } else { -1.0 };
        acc += sign * body.volume();
        sums[mask] = Some(body);
    }
    let factorial: f64 = (1..=n).map(|k| k as f64).product();
    Ok((acc / factorial).max(0.0))
}

fn canonical_cmp(a: &Polytope, b: &Polytope) -> std::cmp::Ordering {
    a.vertices.len().cmp(&b.vertices.len()).then_with(|| {
        let mut va = a.vertices.clone();
        let mut vb = b.vertices.clone();
        let key = |p: &P3, q: &P3| p[0].total_cmp(&q[0]).then(p[1].total_cmp(&q[1])).then(p[2].total_cmp(&q[2]));
        va.sort_by(key);
        vb.sort_by(key);
        for (p, q) in va.iter().zip(&vb) {
            let c = key(p, q);
            if c.is_ne() {
                return c;
            }
        }
        std::cmp::Ordering::Equal
    })
}
