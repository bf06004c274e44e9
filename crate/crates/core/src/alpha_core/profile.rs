//! Piecewise-linear convex radial bases `φ: [0,∞) → [0,∞]`.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Slopes may decrease by at most this much (relative) and still count as convex.
pub const SLOPE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Tail {
    /// Linear extension with this slope beyond the last breakpoint.
    Slope(f64),
    /// `φ = +∞` beyond this radius, which equals the last breakpoint.
    Compact(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvexProfile {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
    tail: Tail,
}

fn slopes_of(breakpoints: &[f64], values: &[f64]) -> Vec<f64> {
    breakpoints.windows(2).zip(values.windows(2)).map(|(b, v)| (v[1] - v[0]) / (b[1] - b[0])).collect()
}

/// `min(0, min_i (s_{i+1} − s_i))` over consecutive slopes including a linear tail.
pub fn slope_residual(breakpoints: &[f64], values: &[f64], tail: Tail) -> f64 {
    let mut s = slopes_of(breakpoints, values);
    if let Tail::Slope(t) = tail {
        s.push(t);
    }
    s.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::min)
}

impl ConvexProfile {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>, tail: Tail) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidProfile(m));
        if breakpoints.is_empty() || breakpoints.len() != values.len() {
            return bad(format!("{} breakpoints vs {} values", breakpoints.len(), values.len()));
        }
        if breakpoints[0] != 0.0 || values[0] != 0.0 {
            return bad("profile must start at (0, 0)".into());
        }
        if breakpoints.iter().chain(&values).any(|v| !v.is_finite()) {
            return bad("non-finite breakpoint or value".into());
        }
        if breakpoints.windows(2).any(|w| !(w[1] > w[0])) {
            return bad("breakpoints must be strictly increasing".into());
        }
        let mut slopes = slopes_of(&breakpoints, &values);
        if slopes.iter().any(|&s| s < -SLOPE_TOL) {
            return bad("profile must be nondecreasing".into());
        }
        let last = *breakpoints.last().expect("non-empty");
        match tail {
            Tail::Slope(s) => {
                if !(s > 0.0) || !s.is_finite() {
                    return bad(format!("tail slope must be positive, got {s}"));
                }
                slopes.push(s);
            }
            Tail::Compact(r) => {
                if r != last {
                    return bad(format!("compact radius {r} must equal the last breakpoint {last}"));
                }
            }
        }
        for w in slopes.windows(2) {
            if w[1] < w[0] - SLOPE_TOL * w[0].abs().max(1.0) {
                return bad(format!("slopes must be nondecreasing ({} then {})", w[0], w[1]));
            }
        }
        Ok(ConvexProfile { breakpoints, values, tail })
    }

    /// `φ(r) = s·r`.
    pub fn linear(slope: f64) -> Result<Self> {
        Self::new(vec![0.0], vec![0.0], Tail::Slope(slope))
    }

    /// Indicator base of the ball of radius `radius`: `0` on `[0, R]`, `+∞` beyond.
    pub fn indicator(radius: f64) -> Result<Self> {
        if radius == 0.0 {
            return Self::new(vec![0.0], vec![0.0], Tail::Compact(0.0));
        }
        if !(radius > 0.0) {
            return Err(Error::InvalidProfile(format!("radius must be >= 0, got {radius}")));
        }
        Self::new(vec![0.0, radius], vec![0.0, 0.0], Tail::Compact(radius))
    }

    /// Builds a profile from `(length, slope)` segments starting at the origin.
    pub fn from_segments(segments: &[(f64, f64)], tail: TailKind) -> Result<Self> {
        let mut bp = vec![0.0];
        let mut vals = vec![0.0];
        for &(len, slope) in segments {
            bp.push(bp.last().unwrap() + len);
            vals.push(vals.last().unwrap() + len * slope);
        }
        let tail = match tail {
            TailKind::Slope(s) => Tail::Slope(s),
            TailKind::Compact => Tail::Compact(*bp.last().unwrap()),
        };
        Self::new(bp, vals, tail)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    pub fn last_breakpoint(&self) -> f64 {
        *self.breakpoints.last().expect("non-empty")
    }

    pub fn last_value(&self) -> f64 {
        *self.values.last().expect("non-empty")
    }

    pub fn slopes(&self) -> Vec<f64> {
        slopes_of(&self.breakpoints, &self.values)
    }

    /// `(length, slope)` of every finite segment.
    pub fn segments(&self) -> Vec<(f64, f64)> {
        self.breakpoints.windows(2).map(|b| b[1] - b[0]).zip(self.slopes()).collect()
    }

    pub fn is_compact(&self) -> bool {
        matches!(self.tail, Tail::Compact(_))
    }

    pub fn eval(&self, r: f64) -> f64 {
        let r = r.max(0.0);
        let idx = self.breakpoints.partition_point(|&b| b <= r);
        if idx == self.breakpoints.len() {
            let (b, v) = (self.last_breakpoint(), self.last_value());
            return match self.tail {
                Tail::Slope(s) => v + s * (r - b),
                Tail::Compact(_) if r == b => v,
                Tail::Compact(_) => f64::INFINITY,
            };
        }
        let (b0, b1) = (self.breakpoints[idx - 1], self.breakpoints[idx]);
        let (v0, v1) = (self.values[idx - 1], self.values[idx]);
        v0 + (v1 - v0) * (r - b0) / (b1 - b0)
    }

    /// `sup { r : φ(r) ≤ b }`.
    pub fn inverse(&self, b: f64) -> f64 {
        if b == f64::INFINITY {
            return match self.tail {
                Tail::Slope(_) => f64::INFINITY,
                Tail::Compact(r) => r,
            };
        }
        let b = b.max(0.0);
        if b >= self.last_value() {
            return match self.tail {
                Tail::Slope(s) => self.last_breakpoint() + (b - self.last_value()) / s,
                Tail::Compact(r) => r,
            };
        }
        let j = self.values.partition_point(|&v| v <= b);
        let (b0, b1) = (self.breakpoints[j - 1], self.breakpoints[j]);
        let (v0, v1) = (self.values[j - 1], self.values[j]);
        b0 + (b - v0) * (b1 - b0) / (v1 - v0)
    }

    /// `(λ·φ)(r) = λ φ(r/λ)`.
    pub fn alpha_dilate(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(Error::NonPositiveScale(lambda));
        }
        let tail = match self.tail {
            Tail::Slope(s) => Tail::Slope(s),
            Tail::Compact(r) => Tail::Compact(r * lambda),
        };
        Self::new(self.breakpoints.iter().map(|b| b * lambda).collect(), self.values.iter().map(|v| v * lambda).collect(), tail)
    }

    /// `r ↦ φ(r/λ)`.
    pub fn radial_dilate(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(Error::NonPositiveScale(lambda));
        }
        let tail = match self.tail {
            Tail::Slope(s) => Tail::Slope(s / lambda),
            Tail::Compact(r) => Tail::Compact(r * lambda),
        };
        Self::new(self.breakpoints.iter().map(|b| b * lambda).collect(), self.values.clone(), tail)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TailKind {
    Slope(f64),
    Compact,
}

/// Exact infimal convolution `(φ □ ψ)(r) = inf_{a+b=r} φ(a) + ψ(b)`: the
/// segments of both profiles merged in increasing slope order. A linear tail
/// absorbs every segment at least as steep as itself.
pub fn inf_convolve(phi: &ConvexProfile, psi: &ConvexProfile) -> Result<ConvexProfile> {
    let tail_slope = match (phi.tail, psi.tail) {
        (Tail::Slope(a), Tail::Slope(b)) => Some(a.min(b)),
        (Tail::Slope(a), Tail::Compact(_)) | (Tail::Compact(_), Tail::Slope(a)) => Some(a),
        (Tail::Compact(_), Tail::Compact(_)) => None,
    };
    let mut segs: Vec<(f64, f64)> =
        phi.segments().into_iter().chain(psi.segments()).filter(|&(_, s)| tail_slope.is_none_or(|t| s < t)).collect();
    segs.sort_by(|a, b| a.1.total_cmp(&b.1));
    let mut merged: Vec<(f64, f64)> = Vec::with_capacity(segs.len());
    for (len, slope) in segs {
        match merged.last_mut() {
            Some(last) if last.1 == slope => last.0 += len,
            _ => merged.push((len, slope)),
        }
    }
    let tail = match tail_slope {
        Some(s) => TailKind::Slope(s),
        None => TailKind::Compact,
    };
    ConvexProfile::from_segments(&merged, tail)
}

/// Base of the quasi-sum of two functions with bases `φ`, `χ` (same `α`):
/// level radii add, so the result is `(φ⁻¹ + χ⁻¹)⁻¹`. Returns the raw
/// breakpoints, values and tail before any convexity validation.
pub fn level_sum_raw(phi: &ConvexProfile, chi: &ConvexProfile) -> (Vec<f64>, Vec<f64>, Tail) {
    let mut knots: Vec<f64> = phi.values.iter().chain(&chi.values).copied().collect();
    knots.sort_by(f64::total_cmp);
    knots.dedup();
    let mut bp = Vec::with_capacity(knots.len() + 1);
    let mut vals = Vec::with_capacity(knots.len() + 1);
    for &b in &knots {
        let r = phi.inverse(b) + chi.inverse(b);
        if bp.is_empty() && r > 0.0 {
            bp.push(0.0);
            vals.push(0.0);
        }
        if bp.last().is_none_or(|&last| r > last) {
            bp.push(r);
            vals.push(b);
        }
    }
    let tail = match (phi.tail, chi.tail) {
        (Tail::Slope(a), Tail::Slope(b)) => Tail::Slope(1.0 / (1.0 / a + 1.0 / b)),
        (Tail::Slope(a), Tail::Compact(_)) | (Tail::Compact(_), Tail::Slope(a)) => Tail::Slope(a),
        (Tail::Compact(_), Tail::Compact(_)) => Tail::Compact(*bp.last().expect("non-empty")),
    };
    (bp, vals, tail)
}

#[derive(Serialize, Deserialize)]
struct ProfileJson {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    tail_slope: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    compact: Option<f64>,
}

impl Serialize for ConvexProfile {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (tail_slope, compact) = match self.tail {
            Tail::Slope(v) => (Some(v), None),
            Tail::Compact(r) => (None, Some(r)),
        };
        ProfileJson { breakpoints: self.breakpoints.clone(), values: self.values.clone(), tail_slope, compact }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ConvexProfile {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = ProfileJson::deserialize(d)?;
        let tail = match (j.tail_slope, j.compact) {
            (Some(s), None) => Tail::Slope(s),
            (None, Some(r)) => Tail::Compact(r),
            _ => return Err(serde::de::Error::custom("exactly one of `tail_slope` and `compact` is required")),
        };
        ConvexProfile::new(j.breakpoints, j.values, tail).map_err(serde::de::Error::custom)
    }
}
