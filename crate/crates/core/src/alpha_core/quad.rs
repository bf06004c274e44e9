//! Adaptive Simpson quadrature and closed-form special functions.

const MAX_DEPTH: u32 = 40;

fn simpson(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
    let m = 0.5 * (a + b);
    let fm = f(m);
    (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
}

#[allow(clippy::too_many_arguments)]
fn recurse(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64, m: f64, fm: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let (lm, flm, left) = simpson(f, a, fa, m, fm);
    let (rm, frm, right) = simpson(f, m, fm, b, fb);
    let delta = left + right - whole;
    // past this point the error estimate is rounding noise
    let noise = 64.0 * f64::EPSILON * (left.abs() + right.abs());
    if depth >= MAX_DEPTH || delta.abs() <= 15.0 * tol.max(noise) {
        return left + right + delta / 15.0;
    }
    recurse(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth + 1) + recurse(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth + 1)
}

/// `∫_a^b f` to absolute tolerance `tol`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let (fa, fb) = (f(a), f(b));
    let (m, fm, whole) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, m, fm, whole, tol, 0)
}

/// Same, after splitting `[a, b]` into `pieces` equal parts.
pub fn adaptive_simpson_split(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, pieces: usize) -> f64 {
    let h = (b - a) / pieces as f64;
    (0..pieces)
        .map(|i| adaptive_simpson(f, a + i as f64 * h, if i + 1 == pieces { b } else { a + (i + 1) as f64 * h }, tol / pieces as f64))
        .sum()
}

pub fn beta_fn(a: f64, b: f64) -> f64 {
    (libm::lgamma(a) + libm::lgamma(b) - libm::lgamma(a + b)).exp()
}

/// `Vol(D_n) = π^{n/2} / Γ(n/2 + 1)`.
pub fn unit_ball_volume(n: usize) -> f64 {
    std::f64::consts::PI.powf(n as f64 / 2.0) / libm::tgamma(n as f64 / 2.0 + 1.0)
}
