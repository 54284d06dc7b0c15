//! Scalar and complex root finders shared by the physics modules.
//!
//! Real roots use a scan for sign changes followed by bisection and a short
//! secant polish, which stays robust across the steep EIT dispersion. Complex
//! roots use damped Newton iteration with a central-difference derivative.

use num_complex::Complex64;

use crate::error::{PhysicsError, Result};

/// Tolerances and iteration caps for the root finders and pole checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Relative tolerance on the bracketed abscissa.
    pub rel_tol: f64,
    /// Absolute tolerance on |F| for complex Newton.
    pub residual_tol: f64,
    pub max_iter: usize,
    /// Number of samples used when scanning a range for sign changes.
    pub scan_points: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            residual_tol: 1e-10,
            max_iter: 100,
            scan_points: 401,
        }
    }
}

impl SolverOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            rel_tol: tol,
            residual_tol: tol,
            ..Self::default()
        }
    }
}

/// Evenly spaced samples of `f` over `[start, stop]`. Non-finite residuals
/// (poles) are kept so the caller can see them in a `NoBracket` report.
pub fn sample<F>(f: &F, start: f64, stop: f64, n: usize) -> Vec<(f64, f64)>
where
    F: Fn(f64) -> f64,
{
    let n = n.max(2);
    (0..n)
        .map(|i| {
            let x = start + (stop - start) * i as f64 / (n - 1) as f64;
            (x, f(x))
        })
        .collect()
}

/// Consecutive sample pairs whose residuals change sign (or hit zero).
pub fn sign_changes(samples: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for w in samples.windows(2) {
        let ((xa, fa), (xb, fb)) = (w[0], w[1]);
        if !fa.is_finite() || !fb.is_finite() {
            continue;
        }
        if fa == 0.0 {
            out.push((xa, xa));
        } else if fa.signum() != fb.signum() && fb != 0.0 {
            out.push((xa, xb));
        }
    }
    if let Some(&(x, fx)) = samples.last() {
        if fx == 0.0 {
            out.push((x, x));
        }
    }
    out
}

/// Bisection on a bracket `[a, b]` with `f(a)·f(b) ≤ 0`, finished with a few
/// bracket-preserving secant steps.
pub fn bisect<F>(f: &F, mut a: f64, mut b: f64, opts: &SolverOptions) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || !fa.is_finite() || !fb.is_finite() {
        return Err(PhysicsError::NoBracket {
            start: a,
            stop: b,
            samples: vec![(a, fa), (b, fb)],
        });
    }
    let scale = a.abs().max(b.abs()).max(f64::MIN_POSITIVE);
    // Enough halvings to reach the tolerance from any finite bracket.
    for _ in 0..200 {
        if (b - a).abs() <= opts.rel_tol * scale {
            break;
        }
        let m = 0.5 * (a + b);
        if m == a || m == b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
            fb = fm;
        }
    }
    // secant polish
    let mut best = if fa.abs() < fb.abs() { (a, fa) } else { (b, fb) };
    for _ in 0..4 {
        if fb == fa {
            break;
        }
        let x = b - fb * (b - a) / (fb - fa);
        if !(x > a.min(b) && x < a.max(b)) {
            break;
        }
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.abs() < best.1.abs() {
            best = (x, fx);
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
    }
    Ok(best.0)
}

/// All roots of `f` on `[start, stop]` located by a uniform scan, in order
/// from `start`.
pub fn find_roots<F>(f: &F, start: f64, stop: f64, opts: &SolverOptions) -> Result<Vec<f64>>
where
    F: Fn(f64) -> f64,
{
    let samples = sample(f, start, stop, opts.scan_points);
    let brackets = sign_changes(&samples);
    if brackets.is_empty() {
        return Err(PhysicsError::NoBracket {
            start,
            stop,
            samples,
        });
    }
    let mut roots = Vec::with_capacity(brackets.len());
    for (a, b) in brackets {
        let r = if a == b { a } else { bisect(f, a, b, opts)? };
        if roots.last() != Some(&r) {
            roots.push(r);
        }
    }
    Ok(roots)
}

/// First root of `f` encountered scanning from `start` towards `stop`.
pub fn first_root<F>(f: &F, start: f64, stop: f64, opts: &SolverOptions) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    find_roots(f, start, stop, opts).map(|r| r[0])
}

/// Damped complex Newton iteration with a central-difference derivative.
///
/// The step is halved (up to 30 times) until |F| decreases, which keeps the
/// iteration on the branch selected by the seed.
pub fn newton_complex<F>(f: &F, seed: Complex64, opts: &SolverOptions) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let mut z = seed;
    let mut fz = f(z)?;
    for _ in 0..opts.max_iter {
        if fz.norm() < opts.residual_tol {
            return Ok(z);
        }
        let h = 1e-7 * z.norm().max(1e-12);
        let dh = Complex64::new(h, 0.0);
        let deriv = (f(z + dh)? - f(z - dh)?) / (2.0 * dh);
        if deriv.norm() == 0.0 || !deriv.is_finite() {
            break;
        }
        let step = fz / deriv;
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let trial = z - step * lambda;
            if let Ok(ft) = f(trial) {
                if ft.is_finite() && ft.norm() < fz.norm() {
                    z = trial;
                    fz = ft;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    if fz.norm() < opts.residual_tol {
        Ok(z)
    } else {
        Err(PhysicsError::NoConvergence {
            iterations: opts.max_iter,
            residual: fz.norm(),
        })
    }
}
