//! Adaptive Simpson quadrature.

/// Default absolute tolerance for coefficient integrals.
pub const DEFAULT_TOL: f64 = 1e-10;

const MAX_DEPTH: u32 = 48;

/// Integrates `f` over `[a, b]` (either orientation) to about `tol`.
/// The first error produced by `f` is returned unchanged.
pub fn adaptive_simpson<F, E>(f: F, a: f64, b: f64, tol: f64) -> Result<f64, E>
where
    F: Fn(f64) -> Result<f64, E>,
{
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a)?;
    let fb = f(b)?;
    let m = 0.5 * (a + b);
    let fm = f(m)?;
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    recurse(&f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F, E>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64, E>
where
    F: Fn(f64) -> Result<f64, E>,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm)?;
    let frm = f(rm)?;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol || !delta.is_finite() {
        return Ok(left + right + delta / 15.0);
    }
    Ok(recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?
        + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::convert::Infallible;

    fn ok(f: impl Fn(f64) -> f64) -> impl Fn(f64) -> Result<f64, Infallible> {
        move |x| Ok(f(x))
    }

    #[test]
    fn polynomial_is_exact() {
        let v = adaptive_simpson(ok(|x| x * x * x - 2.0 * x), 0.0, 2.0, 1e-12).unwrap();
        assert!((v - 0.0).abs() < 1e-14);
    }

    #[test]
    fn exponential_and_reversed_limits() {
        let v = adaptive_simpson(ok(f64::exp), 1.0, 0.0, 1e-12).unwrap();
        assert!((v + (std::f64::consts::E - 1.0)).abs() < 1e-11);
    }

    #[test]
    fn errors_propagate() {
        let r: Result<f64, &str> =
            adaptive_simpson(|x| if x > 0.5 { Err("boom") } else { Ok(x) }, 0.0, 1.0, 1e-8);
        assert_eq!(r, Err("boom"));
    }
}
