//! Andrew's monotone chain with a collinearity tolerance.

use super::vec3::{dist, orient2, P3};

/// Indices of the hull vertices of `points` (planar, `z` ignored) in
/// counter-clockwise order. Collinear and duplicate points are dropped; a
/// degenerate input yields one (point) or two (segment) indices.
pub(crate) fn hull2_indices(points: &[P3], tol: f64) -> Vec<usize> {
    if points.is_empty() {
        return Vec::new();
    }
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&i, &j| points[i][0].total_cmp(&points[j][0]).then(points[i][1].total_cmp(&points[j][1])));
    // Drop exact/near duplicates that are adjacent after sorting.
    idx.dedup_by(|a, b| dist(points[*a], points[*b]) <= tol);
    if idx.len() == 1 {
        return idx;
    }

    let turns_left = |o: usize, a: usize, b: usize| -> bool {
        let len = dist(points[o], points[a]);
        orient2(points[o], points[a], points[b]) > tol * len.max(tol)
    };

    let mut lower: Vec<usize> = Vec::with_capacity(idx.len());
    for &i in &idx {
        while lower.len() >= 2 && !turns_left(lower[lower.len() - 2], lower[lower.len() - 1], i) {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::with_capacity(idx.len());
    for &i in idx.iter().rev() {
        while upper.len() >= 2 && !turns_left(upper[upper.len() - 2], upper[upper.len() - 1], i) {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);

    // Remove near-duplicate neighbours that survived (first/last wrap-around).
    let mut out: Vec<usize> = Vec::with_capacity(lower.len());
    for i in lower {
        if out.iter().all(|&j| dist(points[i], points[j]) > tol) {
            out.push(i);
        }
    }
    out
}
