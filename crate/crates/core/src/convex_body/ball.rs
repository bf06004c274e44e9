use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::vec3::{add, normalize, P3};
use super::Polytope;
use crate::error::{Error, Result};

/// Inscribed polytopal approximation of the Euclidean unit ball.
///
/// In the plane this is the regular `m`-gon with a vertex at `(1, 0)`; in
/// space it is a geodesic sphere obtained by repeated 4-to-1 subdivision of
/// the icosahedron, so `m = 20·4^s`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "BallJson", into = "BallJson")]
pub struct BallApprox {
    facets: usize,
    polytope: Polytope,
}

#[derive(Serialize, Deserialize)]
struct BallJson {
    dim: usize,
    facets: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vertices: Option<Vec<Vec<f64>>>,
}

impl TryFrom<BallJson> for BallApprox {
    type Error = Error;

    fn try_from(j: BallJson) -> Result<Self> {
        BallApprox::new(j.dim, j.facets)
    }
}

impl From<BallApprox> for BallJson {
    fn from(b: BallApprox) -> Self {
        BallJson { dim: b.polytope.dim(), facets: b.facets, vertices: Some(b.polytope.vertices().map(|v| v.to_vec()).collect()) }
    }
}

pub const DEFAULT_FACETS_2D: usize = 64;
pub const DEFAULT_FACETS_3D: usize = 320;

impl BallApprox {
    pub fn new(dim: usize, facets: usize) -> Result<Self> {
        match dim {
            2 => {
                if facets < 8 || !facets.is_multiple_of(2) {
                    return Err(Error::InvalidBall(format!("planar facet count must be even and >= 8, got {facets}")));
                }
                let pts: Vec<P3> = (0..facets)
                    .map(|k| {
                        let a = std::f64::consts::TAU * k as f64 / facets as f64;
                        [a.cos(), a.sin(), 0.0]
                    })
                    .collect();
                Ok(BallApprox { facets, polytope: Polytope::from_points(2, &pts) })
            }
            3 => {
                let mut m = facets;
                let mut levels = 0;
                while m > 20 && m.is_multiple_of(4) {
                    m /= 4;
                    levels += 1;
                }
                if m != 20 {
                    return Err(Error::InvalidBall(format!("spatial facet count must be 20·4^s, got {facets}")));
                }
                let pts = icosphere(levels);
                Ok(BallApprox { facets, polytope: Polytope::from_points(3, &pts) })
            }
            d => Err(Error::UnsupportedDimension(d)),
        }
    }

    pub fn default_for(dim: usize) -> Result<Self> {
        Self::new(dim, Self::default_facets(dim)?)
    }

    pub fn default_facets(dim: usize) -> Result<usize> {
        match dim {
            2 => Ok(DEFAULT_FACETS_2D),
            3 => Ok(DEFAULT_FACETS_3D),
            d => Err(Error::UnsupportedDimension(d)),
        }
    }

    pub fn dim(&self) -> usize {
        self.polytope.dim()
    }

    pub fn facets(&self) -> usize {
        self.facets
    }

    pub fn polytope(&self) -> &Polytope {
        &self.polytope
    }

    pub fn volume(&self) -> f64 {
        self.polytope.volume()
    }
}

fn icosphere(levels: usize) -> Vec<P3> {
    let t = (1.0 + 5f64.sqrt()) / 2.0;
    let mut verts: Vec<P3> = [
        [-1.0, t, 0.0],
        [1.0, t, 0.0],
        [-1.0, -t, 0.0],
        [1.0, -t, 0.0],
        [0.0, -1.0, t],
        [0.0, 1.0, t],
        [0.0, -1.0, -t],
        [0.0, 1.0, -t],
        [t, 0.0, -1.0],
        [t, 0.0, 1.0],
        [-t, 0.0, -1.0],
        [-t, 0.0, 1.0],
    ]
    .iter()
    .map(|&v| normalize(v).expect("non-zero"))
    .collect();
    let mut faces: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..levels {
        let mut midpoint: HashMap<(usize, usize), usize> = HashMap::new();
        let mut mid = |a: usize, b: usize, verts: &mut Vec<P3>| -> usize {
            let key = (a.min(b), a.max(b));
            *midpoint.entry(key).or_insert_with(|| {
                verts.push(normalize(add(verts[a], verts[b])).expect("non-antipodal"));
                verts.len() - 1
            })
        };
        let mut next = Vec::with_capacity(faces.len() * 4);
        for [a, b, c] in faces {
            let ab = mid(a, b, &mut verts);
            let bc = mid(b, c, &mut verts);
            let ca = mid(c, a, &mut verts);
            next.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        faces = next;
    }
    verts
}
