//! Incremental (quickhull-style) convex hull in three dimensions.
//!
//! Points within `tol` of a facet plane are treated as coplanar and never
//! become hull vertices through that facet. Vertices that end up in the
//! relative interior of a face or an edge are removed in a second pass, so the
//! returned vertex list is hull-reduced.

use std::collections::HashMap;

use super::hull2d::hull2_indices;
use super::vec3::{cross, dot, extent, norm, normalize, sub, P3};

#[derive(Clone, Debug)]
pub(crate) enum Hull3 {
    Empty,
    Point(P3),
    Segment(P3, P3),
    /// Coplanar polygon, vertices in cyclic order.
    Polygon(Vec<P3>),
    /// Full-dimensional body; facets are outward-oriented triangles.
    Solid {
        vertices: Vec<P3>,
        facets: Vec<[usize; 3]>,
    },
}

struct Face {
    v: [usize; 3],
    normal: P3,
    offset: f64,
    outside: Vec<usize>,
    alive: bool,
}

impl Face {
    fn new(points: &[P3], v: [usize; 3]) -> Self {
        let n = cross(sub(points[v[1]], points[v[0]]), sub(points[v[2]], points[v[0]]));
        let normal = normalize(n).unwrap_or([0.0, 0.0, 0.0]);
        let offset = dot(normal, points[v[0]]);
        Face { v, normal, offset, outside: Vec::new(), alive: true }
    }

    #[inline]
    fn distance(&self, p: P3) -> f64 {
        dot(self.normal, p) - self.offset
    }

    fn edges(&self) -> [(usize, usize); 3] {
        [(self.v[0], self.v[1]), (self.v[1], self.v[2]), (self.v[2], self.v[0])]
    }
}

pub(crate) fn hull3(points: &[P3], rel_tol: f64) -> Hull3 {
    if points.is_empty() {
        return Hull3::Empty;
    }
    let tol = rel_tol * extent(points);
    match raw_hull(points, tol) {
        Hull3::Solid { vertices, facets } => {
            let keep = extreme_vertices(&vertices, &facets, tol);
            if keep.len() == vertices.len() {
                return Hull3::Solid { vertices, facets };
            }
            let reduced: Vec<P3> = keep.iter().map(|&i| vertices[i]).collect();
            raw_hull(&reduced, tol)
        }
        other => other,
    }
}

fn raw_hull(points: &[P3], tol: f64) -> Hull3 {
    // Extreme points along the coordinate axes.
    let mut ext = [0usize; 6];
    for (i, p) in points.iter().enumerate() {
        for k in 0..3 {
            if p[k] < points[ext[2 * k]][k] {
                ext[2 * k] = i;
            }
            if p[k] > points[ext[2 * k + 1]][k] {
                ext[2 * k + 1] = i;
            }
        }
    }
    let (mut i0, mut i1, mut best) = (ext[0], ext[0], -1.0);
    for &a in &ext {
        for &b in &ext {
            let d = norm(sub(points[a], points[b]));
            if d > best {
                best = d;
                i0 = a;
                i1 = b;
            }
        }
    }
    if best <= tol {
        return Hull3::Point(points[i0]);
    }

    let dir = sub(points[i1], points[i0]);
    let line_dist = |p: P3| norm(cross(sub(p, points[i0]), dir)) / norm(dir);
    let (i2, d2) = argmax(points, line_dist);
    if d2 <= tol {
        // Collinear: extremes along the line direction.
        let (lo, _) = argmax(points, |p| -dot(sub(p, points[i0]), dir));
        let (hi, _) = argmax(points, |p| dot(sub(p, points[i0]), dir));
        return Hull3::Segment(points[lo], points[hi]);
    }

    let plane_n = normalize(cross(dir, sub(points[i2], points[i0]))).expect("non-degenerate triple");
    let plane_dist = |p: P3| dot(sub(p, points[i0]), plane_n).abs();
    let (i3, d3) = argmax(points, plane_dist);
    if d3 <= tol {
        return planar_hull(points, points[i0], dir, plane_n, tol);
    }

    let simplex = [i0, i1, i2, i3];
    let mut faces: Vec<Face> = Vec::new();
    for skip in 0..4 {
        let tri: Vec<usize> = (0..4).filter(|&k| k != skip).map(|k| simplex[k]).collect();
        let mut f = Face::new(points, [tri[0], tri[1], tri[2]]);
        if f.distance(points[simplex[skip]]) > 0.0 {
            f = Face::new(points, [tri[0], tri[2], tri[1]]);
        }
        faces.push(f);
    }
    let mut edge_owner: HashMap<(usize, usize), usize> = HashMap::new();
    for (fi, f) in faces.iter().enumerate() {
        for e in f.edges() {
            edge_owner.insert(e, fi);
        }
    }

    for (pi, &p) in points.iter().enumerate() {
        if simplex.contains(&pi) {
            continue;
        }
        assign(&mut faces, 0..4, pi, p, tol);
    }

    let mut stack: Vec<usize> = (0..4).collect();
    while let Some(fi) = stack.pop() {
        if !faces[fi].alive || faces[fi].outside.is_empty() {
            continue;
        }
        let apex = *faces[fi]
            .outside
            .iter()
            .max_by(|&&a, &&b| faces[fi].distance(points[a]).total_cmp(&faces[fi].distance(points[b])))
            .expect("non-empty outside set");
        let eye = points[apex];

        // Visible region by flood fill across shared edges.
        let mut visible = vec![fi];
        let mut is_visible: HashMap<usize, bool> = HashMap::new();
        is_visible.insert(fi, true);
        let mut cursor = 0;
        while cursor < visible.len() {
            let cur = visible[cursor];
            cursor += 1;
            for (a, b) in faces[cur].edges() {
                if let Some(&nb) = edge_owner.get(&(b, a)) {
                    if is_visible.contains_key(&nb) {
                        continue;
                    }
                    let vis = faces[nb].alive && faces[nb].distance(eye) > tol;
                    is_visible.insert(nb, vis);
                    if vis {
                        visible.push(nb);
                    }
                }
            }
        }

        let mut horizon: Vec<(usize, usize)> = Vec::new();
        for &vf in &visible {
            for (a, b) in faces[vf].edges() {
                let across = edge_owner.get(&(b, a)).copied();
                let across_visible = across.is_some_and(|g| *is_visible.get(&g).unwrap_or(&false));
                if !across_visible {
                    horizon.push((a, b));
                }
            }
        }

        let mut orphans: Vec<usize> = Vec::new();
        for &vf in &visible {
            faces[vf].alive = false;
            orphans.append(&mut faces[vf].outside);
            for e in faces[vf].edges() {
                if edge_owner.get(&e) == Some(&vf) {
                    edge_owner.remove(&e);
                }
            }
        }

        let first_new = faces.len();
        for (a, b) in horizon {
            let f = Face::new(points, [a, b, apex]);
            let id = faces.len();
            for e in f.edges() {
                edge_owner.insert(e, id);
            }
            faces.push(f);
        }
        let new_range = first_new..faces.len();
        for q in orphans {
            if q != apex {
                assign(&mut faces, new_range.clone(), q, points[q], tol);
            }
        }
        stack.extend(new_range);
    }

    // Compact the result.
    let mut remap: HashMap<usize, usize> = HashMap::new();
    let mut vertices: Vec<P3> = Vec::new();
    let mut facets: Vec<[usize; 3]> = Vec::new();
    for f in faces.iter().filter(|f| f.alive) {
        let mut tri = [0usize; 3];
        for (k, &v) in f.v.iter().enumerate() {
            let next = vertices.len();
            tri[k] = *remap.entry(v).or_insert_with(|| {
                vertices.push(points[v]);
                next
            });
        }
        facets.push(tri);
    }
    Hull3::Solid { vertices, facets }
}

fn assign(faces: &mut [Face], range: std::ops::Range<usize>, pi: usize, p: P3, tol: f64) {
    let mut best: Option<(usize, f64)> = None;
    for fi in range {
        if !faces[fi].alive {
            continue;
        }
        let d = faces[fi].distance(p);
        if d > tol && best.is_none_or(|(_, bd)| d > bd) {
            best = Some((fi, d));
        }
    }
    if let Some((fi, _)) = best {
        faces[fi].outside.push(pi);
    }
}

fn argmax(points: &[P3], f: impl Fn(P3) -> f64) -> (usize, f64) {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, &p) in points.iter().enumerate() {
        let v = f(p);
        if v > best.1 {
            best = (i, v);
        }
    }
    best
}

fn planar_hull(points: &[P3], origin: P3, dir: P3, normal: P3, tol: f64) -> Hull3 {
    let e1 = normalize(dir).expect("non-zero direction");
    let e2 = cross(normal, e1);
    let flat: Vec<P3> = points
        .iter()
        .map(|&p| {
            let d = sub(p, origin);
            [dot(d, e1), dot(d, e2), 0.0]
        })
        .collect();
    let idx = hull2_indices(&flat, tol);
    match idx.len() {
        0 => Hull3::Empty,
        1 => Hull3::Point(points[idx[0]]),
        2 => Hull3::Segment(points[idx[0]], points[idx[1]]),
        _ => Hull3::Polygon(idx.into_iter().map(|i| points[i]).collect()),
    }
}

/// Indices of vertices that are strict unique maximizers of the mean normal of
/// their incident facets.
fn extreme_vertices(vertices: &[P3], facets: &[[usize; 3]], tol: f64) -> Vec<usize> {
    let mut normal_sum = vec![[0.0f64; 3]; vertices.len()];
    for f in facets {
        let n = cross(sub(vertices[f[1]], vertices[f[0]]), sub(vertices[f[2]], vertices[f[0]]));
        if let Some(u) = normalize(n) {
            for &v in f {
                for k in 0..3 {
                    normal_sum[v][k] += u[k];
                }
            }
        }
    }
    (0..vertices.len())
        .filter(|&i| {
            let Some(u) = normalize(normal_sum[i]) else { return false };
            let v = vertices[i];
            vertices.iter().enumerate().filter(|&(j, _)| j != i).all(|(_, &w)| dot(u, sub(w, v)) < -tol)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solid_parts(h: Hull3) -> (Vec<P3>, Vec<[usize; 3]>) {
        match h {
            Hull3::Solid { vertices, facets } => (vertices, facets),
            other => panic!("expected solid, got {other:?}"),
        }
    }

    fn cube_grid(k: usize) -> Vec<P3> {
        let mut pts = Vec::new();
        for i in 0..=k {
            for j in 0..=k {
                for l in 0..=k {
                    pts.push([i as f64 / k as f64, j as f64 / k as f64, l as f64 / k as f64]);
                }
            }
        }
        pts
    }

    #[test]
    fn cube_grid_reduces_to_eight_vertices() {
        let (v, f) = solid_parts(hull3(&cube_grid(4), 1e-10));
        assert_eq!(v.len(), 8);
        assert_eq!(f.len(), 12);
    }

    #[test]
    fn every_directed_edge_has_a_twin() {
        let pts: Vec<P3> = (0..200)
            .map(|i| {
                let t = i as f64 * 0.618_033_988_75;
                let z = 1.0 - 2.0 * (i as f64 + 0.5) / 200.0;
                let r = (1.0 - z * z).sqrt();
                [r * (t * std::f64::consts::TAU).cos(), r * (t * std::f64::consts::TAU).sin(), z]
            })
            .collect();
        let (_, f) = solid_parts(hull3(&pts, 1e-10));
        let mut edges = std::collections::HashSet::new();
        for t in &f {
            edges.insert((t[0], t[1]));
            edges.insert((t[1], t[2]));
            edges.insert((t[2], t[0]));
        }
        for &(a, b) in &edges {
            assert!(edges.contains(&(b, a)));
        }
    }

    #[test]
    fn degenerate_cases() {
        assert!(matches!(hull3(&[[1.0, 2.0, 3.0]; 3], 1e-10), Hull3::Point(_)));
        let seg = [[0.0, 0.0, 0.0], [1.0, 1.0, 1.0], [0.5, 0.5, 0.5]];
        assert!(matches!(hull3(&seg, 1e-10), Hull3::Segment(_, _)));
        let sq = [[0.0, 0.0, 1.0], [1.0, 0.0, 1.0], [1.0, 1.0, 1.0], [0.0, 1.0, 1.0], [0.5, 0.5, 1.0]];
        match hull3(&sq, 1e-10) {
            Hull3::Polygon(v) => assert_eq!(v.len(), 4),
            other => panic!("{other:?}"),
        }
    }
}
