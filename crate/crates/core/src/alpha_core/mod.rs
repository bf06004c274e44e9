//! Radial α-concave functions: convex bases, the α-sum through infimal
//! convolution, moments, radial quermassintegrals and the inequality checks
//! built on them.

mod profile;
mod quad;

pub use profile::{inf_convolve, level_sum_raw, slope_residual, ConvexProfile, Tail, TailKind, SLOPE_TOL};
pub use quad::{adaptive_simpson, beta_fn, unit_ball_volume};

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::digest::digest;
use crate::error::{Error, Result};
use crate::mixed_integral::binomial;
use crate::report::{run_campaign, Fold, Inequality, TrialOutcome, VerifyReport};
use crate::sample::random_convex_profile;


/// Absolute tolerance of every quadrature.
pub const QUAD_TOL: f64 = 1e-10;

/// `|margin|` below this counts as an equality case.
pub const EQUALITY_TOL: f64 = 1e-6;

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 || alpha.is_nan() {
        return Err(Error::PositiveAlpha(alpha));
    }
    Ok(())
}

/// `φ ↦ f`: `(1 + φ/β)^{−β}` with `β = −1/α`, `e^{−φ}` at `α = 0`.
pub fn from_base_value(alpha: f64, phi: f64) -> f64 {
    if phi == f64::INFINITY {
        0.0
    } else if alpha == 0.0 {
        (-phi).exp()
    } else {
        (1.0 - alpha * phi).powf(1.0 / alpha)
    }
}

/// `t ↦ base_α(t) = (1 − t^α)/α`, `−log t` at `α = 0`.
pub fn base_value(alpha: f64, t: f64) -> f64 {
    if t <= 0.0 {
        f64::INFINITY
    } else if alpha == 0.0 {
        -t.ln()
    } else {
        (1.0 - t.powf(alpha)) / alpha
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Shape {
    Base(ConvexProfile),
    /// `α = −∞`: levels `(t_i, R_i)` with `t₁ = 1` decreasing and `R_i` increasing;
    /// `f(r) = max { t_i : r ≤ R_i }`.
    Steps(Vec<(f64, f64)>),
}

/// A rotation-invariant α-concave function on `ℝⁿ`, stored through its radial profile.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialAlphaProfile {
    alpha: f64,
    n: usize,
    shape: Shape,
}

/// How a refined base continues past the last knot.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Continuation {
    /// Linear extension with the slope of the last chord.
    Extend,
    /// `+∞` past the last knot.
    Compact,
}

/// PL interpolation of a convex `φ` through `knots` (which must start at 0),
/// bisecting every interval until the induced `f` deviates from the exact one
/// by at most `tol` at the quarter points.
pub fn refine_base(alpha: f64, phi: &dyn Fn(f64) -> f64, knots: &[f64], continuation: Continuation, tol: f64) -> Result<ConvexProfile> {
    if knots.first() != Some(&0.0) || knots.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidProfile("knots must start at 0 and increase".into()));
    }
    let phi0 = phi(0.0);
    if phi0.abs() > 1e-12 {
        return Err(Error::InvalidProfile(format!("base must vanish at 0, got {phi0}")));
    }
    let mut bp = vec![0.0];
    let mut vals = vec![0.0];
    for w in knots.windows(2) {
        let mut stack = vec![(w[0], w[1])];
        while let Some((a, b)) = stack.pop() {
            let (pa, pb) = (if a == 0.0 { 0.0 } else { phi(a) }, phi(b));
            let err = [0.25, 0.5, 0.75]
                .iter()
                .map(|q| {
                    let x = a + q * (b - a);
                    (from_base_value(alpha, pa + q * (pb - pa)) - from_base_value(alpha, phi(x))).abs()
                })
                .fold(0.0, f64::max);
            if err > tol && b - a > 1e-9 * b.max(1.0) {
                let m = 0.5 * (a + b);
                stack.push((m, b));
                stack.push((a, m));
            } else {
                bp.push(b);
                vals.push(pb);
            }
        }
    }
    let tail = match continuation {
        Continuation::Compact => Tail::Compact(*bp.last().expect("non-empty")),
        Continuation::Extend => {
            let k = bp.len();
            if k < 2 {
                return Err(Error::InvalidProfile("need at least two knots to extend".into()));
            }
            Tail::Slope((vals[k - 1] - vals[k - 2]) / (bp[k - 1] - bp[k - 2]))
        }
    };
    ConvexProfile::new(bp, vals, tail)
}

impl RadialAlphaProfile {
    pub fn from_base(alpha: f64, n: usize, base: ConvexProfile) -> Result<Self> {
        check_alpha(alpha)?;
        if alpha == f64::NEG_INFINITY {
            return Err(Error::NoBase);
        }
        if n == 0 {
            return Err(Error::UnsupportedDimension(0));
        }
        Ok(RadialAlphaProfile { alpha, n, shape: Shape::Base(base) })
    }

    /// Quasi-concave (`α = −∞`) step profile.
    pub fn steps(n: usize, levels: Vec<(f64, f64)>) -> Result<Self> {
        let bad = |m: &str| Err(Error::InvalidProfile(m.to_string()));
        if levels.first().map(|l| l.0) != Some(1.0) {
            return bad("step profile must start at level t = 1");
        }
        if levels.windows(2).any(|w| !(w[1].0 < w[0].0) || !(w[1].1 > w[0].1)) {
            return bad("step levels must decrease and radii must increase");
        }
        if levels.iter().any(|&(t, r)| !(t > 0.0) || !(r >= 0.0) || !r.is_finite()) {
            return bad("step levels must lie in (0, 1] with finite radii >= 0");
        }
        Ok(RadialAlphaProfile { alpha: f64::NEG_INFINITY, n, shape: Shape::Steps(levels) })
    }

    /// `g_α`, the profile with base `φ(r) = r`.
    pub fn g_alpha(alpha: f64, n: usize) -> Result<Self> {
        check_alpha(alpha)?;
        if alpha == f64::NEG_INFINITY {
            return Err(Error::NoBase);
        }
        Self::from_base(alpha, n, ConvexProfile::linear(1.0)?)
    }

    /// Indicator of the ball of radius `radius`; its base is the same for every α.
    pub fn indicator(alpha: f64, n: usize, radius: f64) -> Result<Self> {
        if alpha == f64::NEG_INFINITY {
            return Self::steps(n, vec![(1.0, radius)]);
        }
        Self::from_base(alpha, n, ConvexProfile::indicator(radius)?)
    }

    /// Refines a closed-form convex base on `[0, r_max]` and extends it linearly.
    pub fn from_base_fn(alpha: f64, n: usize, phi: &dyn Fn(f64) -> f64, r_max: f64, tol: f64) -> Result<Self> {
        let base = refine_base(alpha, phi, &[0.0, r_max], Continuation::Extend, tol)?;
        Self::from_base(alpha, n, base)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn base_of(&self) -> Result<&ConvexProfile> {
        match &self.shape {
            Shape::Base(b) => Ok(b),
            Shape::Steps(_) => Err(Error::NoBase),
        }
    }

    pub fn eval(&self, r: f64) -> f64 {
        match &self.shape {
            Shape::Base(b) => from_base_value(self.alpha, b.eval(r)),
            Shape::Steps(levels) => levels.iter().find(|l| r.abs() <= l.1).map_or(0.0, |l| l.0),
        }
    }

    /// `f(|x|)`.
    pub fn eval_point(&self, x: &[f64]) -> f64 {
        self.eval(x.iter().map(|v| v * v).sum::<f64>().sqrt())
    }

    /// Radius of the level set `{f ≥ t}`, `t ∈ (0, 1]`.
    pub fn level_radius(&self, t: f64) -> f64 {
        match &self.shape {
            Shape::Base(b) => b.inverse(base_value(self.alpha, t)),
            Shape::Steps(levels) => levels.iter().rev().find(|l| l.0 >= t).map_or(0.0, |l| l.1),
        }
    }

    /// Compact support radius, if any.
    pub fn support_radius(&self) -> Option<f64> {
        match &self.shape {
            Shape::Base(b) => match b.tail() {
                Tail::Compact(r) => Some(r),
                Tail::Slope(_) => None,
            },
            Shape::Steps(levels) => levels.last().map(|l| l.1),
        }
    }

    fn same_kind(&self, other: &Self) -> Result<()> {
        if self.alpha != other.alpha {
            return Err(Error::AlphaMismatch(self.alpha, other.alpha));
        }
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        Ok(())
    }

    /// `f ⋆_α g`: infimal convolution of bases; at `α = −∞` the quasi-sum.
    pub fn alpha_sum(&self, other: &Self) -> Result<Self> {
        self.same_kind(other)?;
        match (&self.shape, &other.shape) {
            (Shape::Base(a), Shape::Base(b)) => Self::from_base(self.alpha, self.n, inf_convolve(a, b)?),
            _ => self.quasi_sum(other),
        }
    }

    /// `λ ·_α f`: base `r ↦ λ φ(r/λ)`.
    pub fn alpha_dilate(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(Error::NonPositiveScale(lambda));
        }
        match &self.shape {
            Shape::Base(b) => Self::from_base(self.alpha, self.n, b.alpha_dilate(lambda)?),
            Shape::Steps(_) => self.radial_dilate(lambda),
        }
    }

    /// `λ ⊙ f`: `r ↦ f(r/λ)`.
    pub fn radial_dilate(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(Error::NonPositiveScale(lambda));
        }
        match &self.shape {
            Shape::Base(b) => Self::from_base(self.alpha, self.n, b.radial_dilate(lambda)?),
            Shape::Steps(levels) => Self::steps(self.n, levels.iter().map(|&(t, r)| (t, r * lambda)).collect()),
        }
    }

    /// `f ⊕ g`: level radii add.
    pub fn quasi_sum(&self, other: &Self) -> Result<Self> {
        self.same_kind(other)?;
        match (&self.shape, &other.shape) {
            (Shape::Base(a), Shape::Base(b)) => {
                let (bp, vals, tail) = level_sum_raw(a, b);
                Self::from_base(self.alpha, self.n, ConvexProfile::new(bp, vals, tail)?)
            }
            (Shape::Steps(a), Shape::Steps(b)) => {
                let mut ts: Vec<f64> = a.iter().chain(b).map(|l| l.0).collect();
                ts.sort_by(|x, y| y.total_cmp(x));
                ts.dedup();
                let mut levels: Vec<(f64, f64)> = Vec::with_capacity(ts.len());
                for t in ts {
                    let r = self.level_radius(t) + other.level_radius(t);
                    if levels.last().is_none_or(|l| r > l.1) {
                        levels.push((t, r));
                    }
                }
                Self::steps(self.n, levels)
            }
            _ => Err(Error::AlphaMismatch(self.alpha, other.alpha)),
        }
    }

    /// The same function described through its `α'`-base, refined to `f`-error `tol`
    /// on `[0, r_max]`. Fails with `InvalidProfile` if that base is not convex.
    pub fn reexpress(&self, alpha2: f64, r_max: f64, tol: f64) -> Result<Self> {
        check_alpha(alpha2)?;
        let base = self.base_of()?;
        let phi2 = |r: f64| base_value(alpha2, self.eval(r));
        let (mut knots, cont): (Vec<f64>, Continuation) = match base.tail() {
            Tail::Compact(_) => (base.breakpoints().to_vec(), Continuation::Compact),
            Tail::Slope(_) => {
                let mut k: Vec<f64> = base.breakpoints().iter().copied().filter(|&b| b < r_max).collect();
                k.push(r_max.max(base.last_breakpoint()));
                (k, Continuation::Extend)
            }
        };
        knots.dedup();
        if knots.len() == 1 {
            // indicator of the origin
            return Self::from_base(alpha2, self.n, base.clone());
        }
        Self::from_base(alpha2, self.n, refine_base(alpha2, &phi2, &knots, cont, tol)?)
    }

    /// `∫₀^∞ r^k f(r) dr`; divergent moments are an error, never a large float.
    pub fn moment(&self, k: usize) -> Result<f64> {
        let kf = k as i32;
        let base = match &self.shape {
            Shape::Steps(levels) => {
                return Ok((0..levels.len())
                    .map(|i| {
                        let next = levels.get(i + 1).map_or(0.0, |l| l.0);
                        (levels[i].0 - next) * levels[i].1.powi(kf + 1) / (k + 1) as f64
                    })
                    .sum());
            }
            Shape::Base(b) => b,
        };
        let alpha = self.alpha;
        let integrand = |r: f64| r.powi(kf) * from_base_value(alpha, base.eval(r));
        let bp = base.breakpoints();
        let mut total: f64 = bp.windows(2).map(|w| adaptive_simpson(&integrand, w[0], w[1], QUAD_TOL / bp.len() as f64)).sum();
        let s = match base.tail() {
            Tail::Compact(_) => return Ok(total),
            Tail::Slope(s) => s,
        };
        let (b, v) = (base.last_breakpoint(), base.last_value());
        let (u_max, remainder): (f64, Box<dyn Fn(f64, f64) -> f64>) = if alpha == 0.0 {
            // truncate where f < 1e-14; the rest in closed form
            let u = ((1e14f64.ln() - v) / s).max(0.0);
            let rem = move |t: f64, phi_t: f64| {
                (0..=k)
                    .map(|j| {
                        binomial(k, j) * t.powi((k - j) as i32) * (-phi_t).exp() * crate::mixed_integral::factorial(j)
                            / s.powi(j as i32 + 1)
                    })
                    .sum()
            };
            (u, Box::new(rem))
        } else {
            let beta = -1.0 / alpha;
            if k as f64 >= beta - 1.0 {
                return Err(Error::Divergent(format!(
                    "moment of order {k} is infinite for alpha = {alpha}: needs k < -1/alpha - 1 = {}",
                    beta - 1.0
                )));
            }
            let a = 1.0 + v / beta;
            let bb = s / beta;
            let u = a * (1e6f64.powf(1.0 / beta) - 1.0) / bb;
            let rem = move |t: f64, phi_t: f64| {
                let a_t = 1.0 + phi_t / beta;
                (0..=k)
                    .map(|j| {
                        let jf = j as f64;
                        binomial(k, j)
                            * t.powi((k - j) as i32)
                            * a_t.powf(jf + 1.0 - beta)
                            * bb.powf(-jf - 1.0)
                            * beta_fn(jf + 1.0, beta - jf - 1.0)
                    })
                    .sum()
            };
            (u, Box::new(rem))
        };
        let t_end = b + u_max;
        total += quad::adaptive_simpson_split(&integrand, b, t_end, QUAD_TOL, 32);
        total += remainder(t_end, v + s * u_max);
        Ok(total)
    }
}

#[derive(Serialize, Deserialize)]
struct RadialJson {
    alpha: serde_json::Value,
    n: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    base: Option<ConvexProfile>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    steps: Option<Vec<(f64, f64)>>,
}

impl Serialize for RadialAlphaProfile {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let alpha = if self.alpha == f64::NEG_INFINITY { serde_json::json!("-inf") } else { serde_json::json!(self.alpha) };
        let (base, steps) = match &self.shape {
            Shape::Base(b) => (Some(b.clone()), None),
            Shape::Steps(l) => (None, Some(l.clone())),
        };
        RadialJson { alpha, n: self.n, base, steps }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RadialAlphaProfile {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = RadialJson::deserialize(d)?;
        let alpha = match &j.alpha {
            serde_json::Value::Number(x) => x.as_f64().ok_or_else(|| D::Error::custom("alpha must be a number"))?,
            serde_json::Value::String(s) if s == "-inf" => f64::NEG_INFINITY,
            _ => return Err(D::Error::custom("`alpha` must be a number <= 0 or \"-inf\"")),
        };
        match (j.base, j.steps) {
            (Some(b), None) => RadialAlphaProfile::from_base(alpha, j.n, b).map_err(D::Error::custom),
            (None, Some(l)) if alpha == f64::NEG_INFINITY => RadialAlphaProfile::steps(j.n, l).map_err(D::Error::custom),
            _ => Err(D::Error::custom("expected `base` (alpha > -inf) or `steps` (alpha = \"-inf\")")),
        }
    }
}

/// `W_k(f) = (n−k) Vol(D) ∫ r^{n−k−1} f(r) dr`.
pub fn radial_quermassintegral(f: &RadialAlphaProfile, k: usize) -> Result<f64> {
    let n = f.n;
    if k >= n {
        return Err(Error::Precondition(format!("radial quermassintegral needs 0 <= k < n, got k = {k}, n = {n}")));
    }
    if let Some(msg) = quermass_divergence(f.alpha, n, k, f.support_radius().is_some()) {
        return Err(Error::Divergent(msg));
    }
    Ok((n - k) as f64 * unit_ball_volume(n) * f.moment(n - k - 1)?)
}

fn quermass_divergence(alpha: f64, n: usize, k: usize, compact: bool) -> Option<String> {
    if compact || alpha == 0.0 || alpha == f64::NEG_INFINITY || (k as f64) > n as f64 + 1.0 / alpha {
        None
    } else {
        Some(format!(
            "W_{k} is infinite for alpha = {alpha}, n = {n}: finiteness needs k > n + 1/alpha = {}, i.e. alpha > {}",
            n as f64 + 1.0 / alpha,
            -1.0 / (n - k) as f64
        ))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarginReport {
    pub margin: f64,
    pub lhs: f64,
    pub rhs: f64,
    /// `|margin| < 1e-6`; diagnostic only.
    pub equality: bool,
}

impl MarginReport {
    fn new(larger: f64, smaller: f64) -> Self {
        let margin = larger - smaller;
        MarginReport { margin, lhs: smaller, rhs: larger, equality: margin.abs() < EQUALITY_TOL }
    }
}

fn require_member(f: &RadialAlphaProfile, alpha: f64) -> Result<()> {
    check_alpha(alpha)?;
    if alpha == f64::NEG_INFINITY {
        return Err(Error::NoBase);
    }
    if !(f.alpha >= alpha) {
        return Err(Error::Precondition(format!("f is only {}-concave, not {alpha}-concave", f.alpha)));
    }
    if (f.eval(0.0) - 1.0).abs() > 1e-12 {
        return Err(Error::Precondition(format!("f(0) must be 1, got {}", f.eval(0.0))));
    }
    Ok(())
}

/// Moment comparison with `g_α`:
/// `(M_m(f)/M_m(g_α))^{1/(m+1)} ≤ (M_k(f)/M_k(g_α))^{1/(k+1)}` for
/// `0 ≤ k < m < −1/α − 1`. Margin is right minus left.
pub fn check_moment_lemma(f: &RadialAlphaProfile, alpha: f64, k: usize, m: usize) -> Result<MarginReport> {
    require_member(f, alpha)?;
    if k >= m {
        return Err(Error::Precondition(format!("moment lemma needs k < m, got k = {k}, m = {m}")));
    }
    if alpha < 0.0 && !((m as f64) < -1.0 / alpha - 1.0) {
        return Err(Error::Precondition(format!("moment lemma needs m < -1/alpha - 1 = {}, got m = {m}", -1.0 / alpha - 1.0)));
    }
    let g = RadialAlphaProfile::g_alpha(alpha, f.n)?;
    let ratio = |j: usize| -> Result<f64> { Ok((f.moment(j)? / g.moment(j)?).powf(1.0 / (j + 1) as f64)) };
    Ok(MarginReport::new(ratio(k)?, ratio(m)?))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "outcome")]
pub enum AlexandrovOutcome {
    Checked(MarginReport),
    /// `W_k(g_α) = ∞`: the inequality is trivial or meaningless.
    Vacuous {
        condition: String,
    },
}

/// `(W_k(f)/W_k(g_α))^{1/(n−k)} ≤ (W_m(f)/W_m(g_α))^{1/(n−m)}` for
/// `0 ≤ k < m < n`, rotation-invariant `f`.
pub fn check_alexandrov(f: &RadialAlphaProfile, alpha: f64, k: usize, m: usize) -> Result<AlexandrovOutcome> {
    let n = f.n;
    if !(k < m && m < n) {
        return Err(Error::Precondition(format!("Alexandrov check needs 0 <= k < m < n, got k = {k}, m = {m}, n = {n}")));
    }
    if let Some(condition) = quermass_divergence(alpha, n, k, false) {
        return Ok(AlexandrovOutcome::Vacuous { condition });
    }
    require_member(f, alpha)?;
    let g = RadialAlphaProfile::g_alpha(alpha, n)?;
    let ratio =
        |j: usize| -> Result<f64> { Ok((radial_quermassintegral(f, j)? / radial_quermassintegral(&g, j)?).powf(1.0 / (n - j) as f64)) };
    Ok(AlexandrovOutcome::Checked(MarginReport::new(ratio(m)?, ratio(k)?)))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClosureReport {
    pub alpha: f64,
    /// `min(0, min slope increment)` of the base of `f ⊕ g`.
    pub convexity_residual: f64,
    pub sum: RadialAlphaProfile,
}

/// `f ⊕ g` for two α-concave profiles and the convexity residual of its α-base.
pub fn check_closure(f: &RadialAlphaProfile, g: &RadialAlphaProfile) -> Result<ClosureReport> {
    f.same_kind(g)?;
    let (a, b) = (f.base_of()?, g.base_of()?);
    let (bp, vals, tail) = level_sum_raw(a, b);
    let convexity_residual = slope_residual(&bp, &vals, tail);
    let sum = RadialAlphaProfile::from_base(f.alpha, f.n, ConvexProfile::new(bp, vals, tail)?)?;
    Ok(ClosureReport { alpha: f.alpha, convexity_residual, sum })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StarCheck {
    pub alpha: f64,
    pub alpha_prime: f64,
    /// Smallest second difference of `base_α(f ⋆_{α'} g)` on the sampled radii.
    pub min_second_difference: f64,
    pub at_radius: f64,
}

/// Re-expresses `f, g` in the weaker class `α' < α`, forms `h = f ⋆_{α'} g` and
/// samples the second differences of `base_α(h)` at `r = jδ ≤ r_max`.
/// A negative value shows `h ∉ C_α`.
pub fn check_star_closure(
    f: &RadialAlphaProfile,
    g: &RadialAlphaProfile,
    alpha_prime: f64,
    delta: f64,
    r_max: f64,
    tol: f64,
) -> Result<StarCheck> {
    f.same_kind(g)?;
    if !(alpha_prime < f.alpha) {
        return Err(Error::Precondition(format!("need alpha' < alpha, got {alpha_prime} >= {}", f.alpha)));
    }
    let reach = 40.0f64.max(4.0 * r_max);
    let h = f.reexpress(alpha_prime, reach, tol)?.alpha_sum(&g.reexpress(alpha_prime, reach, tol)?)?;
    let count = (r_max / delta).floor() as usize;
    let b: Vec<f64> = (0..=count).map(|j| base_value(f.alpha, h.eval(j as f64 * delta))).collect();
    let (idx, min) = (1..count)
        .map(|j| (j, b[j + 1] - 2.0 * b[j] + b[j - 1]))
        .filter(|(_, d)| d.is_finite())
        .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
    Ok(StarCheck { alpha: f.alpha, alpha_prime, min_second_difference: min, at_radius: idx as f64 * delta })
}

/// Smallest second difference of `base_α(f)` at `r = jδ` inside the support.
pub fn sampled_base_convexity(f: &RadialAlphaProfile, alpha: f64, delta: f64, r_max: f64) -> f64 {
    let limit = f.support_radius().map_or(r_max, |r| r.min(r_max));
    let count = (limit / delta).floor() as usize;
    let b: Vec<f64> = (0..=count).map(|j| base_value(alpha, f.eval(j as f64 * delta))).collect();
    (1..count).map(|j| b[j + 1] - 2.0 * b[j] + b[j - 1]).filter(|d| d.is_finite()).fold(f64::INFINITY, f64::min)
}

/// Default α values cycled through by the moment-lemma and Alexandrov campaigns.
pub const CAMPAIGN_ALPHAS: [f64; 3] = [0.0, -0.1, -0.3];

/// Default α values for the closure campaign.
pub const CLOSURE_ALPHAS: [f64; 3] = [0.0, -0.25, -1.0];

fn pick_alpha(alphas: &[f64], trial: u64) -> f64 {
    alphas[trial as usize % alphas.len()]
}

/// Random admissible profiles; per trial a random `k < m < −1/α − 1` (capped at 6).
pub fn verify_moment_lemma(seed: u64, trials: usize, tolerance: f64, alphas: &[f64]) -> Result<VerifyReport> {
    if alphas.is_empty() {
        return Err(Error::EmptyInput("alphas"));
    }
    for &a in alphas {
        check_alpha(a)?;
        if a < 0.0 && -1.0 / a - 1.0 <= 1.0 {
            return Err(Error::Precondition(format!("alpha = {a} admits no pair k < m < -1/alpha - 1")));
        }
    }
    run_campaign(Inequality::MomentLemma, seed, trials, tolerance, None, &[("max_margin", Fold::Max)], |rng, i| {
        let alpha = pick_alpha(alphas, i);
        let m_max = if alpha == 0.0 { 6 } else { ((-1.0 / alpha - 1.0).ceil() as usize - 1).min(6) };
        let m = rng.gen_range(1..=m_max);
        let k = rng.gen_range(0..m);
        let f = RadialAlphaProfile::from_base(alpha, 1, random_convex_profile(rng))?;
        let r = check_moment_lemma(&f, alpha, k, m)?;
        Ok(TrialOutcome::new(r.margin, digest(&(&f, k, m))).metric("max_margin", r.margin))
    })
}

/// Random radial profiles in dimension `n`, fixed `(k, m)`.
pub fn verify_alexandrov(seed: u64, trials: usize, tolerance: f64, alphas: &[f64], n: usize, k: usize, m: usize) -> Result<VerifyReport> {
    if alphas.is_empty() {
        return Err(Error::EmptyInput("alphas"));
    }
    if !(k < m && m < n) {
        return Err(Error::Precondition(format!("Alexandrov check needs 0 <= k < m < n, got k = {k}, m = {m}, n = {n}")));
    }
    for &a in alphas {
        check_alpha(a)?;
        if let Some(condition) = quermass_divergence(a, n, k, false) {
            return Err(Error::Precondition(format!("vacuous: {condition}")));
        }
    }
    run_campaign(Inequality::Alexandrov, seed, trials, tolerance, None, &[("max_margin", Fold::Max)], |rng, i| {
        let alpha = pick_alpha(alphas, i);
        let f = RadialAlphaProfile::from_base(alpha, n, random_convex_profile(rng))?;
        match check_alexandrov(&f, alpha, k, m)? {
            AlexandrovOutcome::Checked(r) => Ok(TrialOutcome::new(r.margin, digest(&f)).metric("max_margin", r.margin)),
            AlexandrovOutcome::Vacuous { condition } => Err(Error::Precondition(condition)),
        }
    })
}

/// Random same-α pairs; margin is the convexity residual of the base of `f ⊕ g`.
pub fn verify_closure(seed: u64, trials: usize, tolerance: f64, alphas: &[f64]) -> Result<VerifyReport> {
    if alphas.is_empty() {
        return Err(Error::EmptyInput("alphas"));
    }
    for &a in alphas {
        check_alpha(a)?;
        if a == f64::NEG_INFINITY {
            return Err(Error::NoBase);
        }
    }
    run_campaign(Inequality::Closure, seed, trials, tolerance, None, &[], |rng, i| {
        let alpha = pick_alpha(alphas, i);
        let f = RadialAlphaProfile::from_base(alpha, 2, random_convex_profile(rng))?;
        let g = RadialAlphaProfile::from_base(alpha, 2, random_convex_profile(rng))?;
        let r = check_closure(&f, &g)?;
        Ok(TrialOutcome::new(r.convexity_residual, digest(&(&f, &g))))
    })
}
