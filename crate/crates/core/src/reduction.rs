//! Reduction of the beam equation along a symmetry generator.
//!
//! The characteristic system `dx/ξ = du/(A u)` with `A = f1 + ω/4` gives the
//! invariant profile `φ(x) = exp(∫_{x0}^x A/ξ ds)`. Substituting
//! `u = φ(x) F(t)` leaves `F'' = S F` whenever `S(x) = −L[φ]/(m φ)` is
//! constant, with `L[φ] = (EI φ'')'' − (T φ')'`.

use std::fmt;

use thiserror::Error;

use crate::beam_model::{BeamConfig, ClosedFormSolution, CoefficientFn, Domain, ModelError, TemporalFactor};
use crate::quadrature::{adaptive_simpson, DEFAULT_TOL};
use crate::symmetry::Infinitesimals;

/// `|S|` at or below this is treated as zero.
pub const S_ZERO_TOL: f64 = 1e-10;
/// Relative spread of `S(x)` accepted as constant.
pub const CONSTANCY_TOL: f64 = 1e-6;
/// Minimum number of usable grid points for a constancy verdict.
pub const MIN_CONSTANCY_POINTS: usize = 33;
/// Grid size used by [`reduce`].
pub const DEFAULT_GRID: usize = 65;

const FORM_SAMPLES: usize = 9;
const FORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReductionError {
    #[error("singular characteristic: xi vanishes near x = {x} in [{a}, {b}]")]
    SingularCharacteristic { x: f64, a: f64, b: f64 },
    #[error("normalization at x0 = inf needs a power-law integrand A/xi ~ c*x^p with p < -1")]
    InfiniteNormalization,
    #[error("A/xi has no recognized closed-form antiderivative")]
    NoClosedForm,
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Recognized antiderivative of `A/ξ`.
#[derive(Debug, Clone, PartialEq)]
pub enum ProfileForm {
    /// `A/ξ = c`: `φ = e^{c(x − x0)}`.
    Exponential { c: f64 },
    /// `A/ξ = c x^p`.
    Power { c: f64, p: f64 },
    /// `ξ = (a + b x)`, `A` constant: `φ = ((a + bx)/(a + bx0))^{A/b}`.
    Affine { a: f64, b: f64, exponent: f64 },
    /// `ξ = N/D` with `D = κ N'`, `A` constant: `φ = (N/N(x0))^{Aκ}`.
    LogDerivative { num: Vec<f64>, exponent: f64 },
}

impl fmt::Display for ProfileForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Exponential { c } => write!(f, "exponential (A/xi = {c})"),
            Self::Power { c, p } => write!(f, "power law (A/xi = {c}*x^{p})"),
            Self::Affine { a, b, exponent } => write!(f, "affine xi = {a} + {b}*x, exponent {exponent}"),
            Self::LogDerivative { exponent, .. } => write!(f, "xi = N/(k N'), exponent {exponent}"),
        }
    }
}

fn constant_value(f: &CoefficientFn, probe: &[f64]) -> Result<Option<f64>, ModelError> {
    if let Some(c) = f.as_polynomial() {
        if c.iter().skip(1).all(|v| *v == 0.0) {
            return Ok(Some(c.first().copied().unwrap_or(0.0)));
        }
    }
    let v0 = f.value(probe[0])?;
    for &x in &probe[1..] {
        if (f.value(x)? - v0).abs() > FORM_TOL * v0.abs().max(1e-300) {
            return Ok(None);
        }
    }
    Ok(Some(v0))
}

fn poly_derivative(c: &[f64]) -> Vec<f64> {
    c.iter().enumerate().skip(1).map(|(k, v)| k as f64 * v).collect()
}

fn trimmed(c: &[f64]) -> &[f64] {
    let mut n = c.len();
    while n > 0 && c[n - 1] == 0.0 {
        n -= 1;
    }
    &c[..n]
}

/// `D = κ N'` for polynomials, returning `κ`.
fn proportional(d: &[f64], np: &[f64]) -> Option<f64> {
    let (d, np) = (trimmed(d), trimmed(np));
    if d.len() != np.len() || d.is_empty() {
        return None;
    }
    let (k, lead) = np.iter().enumerate().find(|(_, v)| **v != 0.0)?;
    let kappa = d[k] / lead;
    let scale = d.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    d.iter()
        .zip(np)
        .all(|(a, b)| (a - kappa * b).abs() <= FORM_TOL * scale)
        .then_some(kappa)
}

fn probe_points(a: f64, b: f64) -> Vec<f64> {
    (0..FORM_SAMPLES)
        .map(|k| a + (b - a) * (k as f64 + 0.5) / FORM_SAMPLES as f64)
        .collect()
}

/// Finds a closed-form antiderivative of `A/ξ`, probing on `[a, b]`.
pub fn detect_form(
    xi: &CoefficientFn,
    f1: &CoefficientFn,
    a: f64,
    b: f64,
) -> Result<Option<ProfileForm>, ModelError> {
    let probe = probe_points(a, b);
    let a_const = constant_value(f1, &probe)?;
    if let Some(av) = a_const {
        if let Some(c) = xi.as_polynomial() {
            let c = trimmed(&c);
            if c.len() == 2 {
                return Ok(Some(ProfileForm::Affine {
                    a: c[0],
                    b: c[1],
                    exponent: av / c[1],
                }));
            }
        }
        if let CoefficientFn::Quotient { num, den } = xi {
            if let (Some(n), Some(d)) = (num.as_polynomial(), den.as_polynomial()) {
                if let Some(kappa) = proportional(&d, &poly_derivative(&n)) {
                    return Ok(Some(ProfileForm::LogDerivative {
                        num: trimmed(&n).to_vec(),
                        exponent: av * kappa,
                    }));
                }
            }
        }
    }
    // numeric probes on q = A/ξ
    let mut q = Vec::with_capacity(FORM_SAMPLES);
    for &x in &probe {
        let (fj, xj) = (f1.jet(x)?, xi.jet(x)?);
        let (qv, qd) = (fj.value() / xj.value(), (fj.dx(1) * xj.value() - fj.value() * xj.dx(1)) / (xj.value() * xj.value()));
        if !qv.is_finite() || !qd.is_finite() {
            return Ok(None);
        }
        q.push((x, qv, qd));
    }
    let q0 = q[0].1;
    let scale = q.iter().fold(0.0f64, |m, v| m.max(v.1.abs()));
    if scale == 0.0 {
        return Ok(Some(ProfileForm::Exponential { c: 0.0 }));
    }
    if q.iter().all(|v| (v.1 - q0).abs() <= FORM_TOL * scale) {
        return Ok(Some(ProfileForm::Exponential { c: q0 }));
    }
    if probe.iter().all(|x| *x > 0.0) && q.iter().all(|v| v.1 != 0.0) {
        let p = q[0].0 * q[0].2 / q[0].1;
        let pr = p.round();
        let p = if (p - pr).abs() <= 1e-9 { pr } else { p };
        let c = q0 / q[0].0.powf(p);
        if q.iter().all(|&(x, qv, _)| (c * x.powf(p) - qv).abs() <= 1e-10 * qv.abs()) {
            return Ok(Some(ProfileForm::Power { c, p }));
        }
    }
    Ok(None)
}

impl ProfileForm {
    /// Closed-form `φ` with `φ(x0) = 1`; `x0 = ∞` only for decaying power laws.
    pub fn profile(&self, x0: f64) -> Result<CoefficientFn, ReductionError> {
        let inf = x0.is_infinite();
        Ok(match self {
            Self::Power { c, p } if inf => {
                if !(*p < -1.0) {
                    return Err(ReductionError::InfiniteNormalization);
                }
                (CoefficientFn::x().pow(p + 1.0) * (c / (p + 1.0))).exp()
            }
            _ if inf => return Err(ReductionError::InfiniteNormalization),
            Self::Exponential { c } => CoefficientFn::affine(-c * x0, *c).exp(),
            Self::Power { c, p } if *p == -1.0 => CoefficientFn::x().pow(*c) * x0.powf(-c),
            Self::Power { c, p } => {
                let e = p + 1.0;
                (CoefficientFn::x().pow(e) * (c / e) + CoefficientFn::constant(-c * x0.powf(e) / e)).exp()
            }
            Self::Affine { a, b, exponent } => {
                CoefficientFn::affine(*a, *b).pow(*exponent) * (a + b * x0).powf(-exponent)
            }
            Self::LogDerivative { num, exponent } => {
                let n0: f64 = num.iter().rev().fold(0.0, |acc, c| acc * x0 + c);
                CoefficientFn::poly(num.clone()).pow(*exponent) * n0.powf(-exponent)
            }
        })
    }
}

fn check_nonvanishing(xi: &CoefficientFn, a: f64, b: f64) -> Result<(), ReductionError> {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    let n = 64;
    let mut prev: Option<f64> = None;
    for k in 0..=n {
        let x = lo + (hi - lo) * k as f64 / n as f64;
        let v = xi.value(x)?;
        if v == 0.0 || prev.is_some_and(|p| p.signum() != v.signum()) {
            return Err(ReductionError::SingularCharacteristic { x, a: lo, b: hi });
        }
        prev = Some(v);
    }
    Ok(())
}

/// `φ(x) = exp(∫_{x0}^x f1/ξ ds)`, where `f1` is the full `u`-coefficient
/// of `η`. Closed forms are used when recognized, adaptive Simpson otherwise.
pub fn invariant_profile(xi: &CoefficientFn, f1: &CoefficientFn, x0: f64, x: f64) -> Result<f64, ReductionError> {
    if x0.is_infinite() {
        let (a, b) = (x, 2.0 * x.abs() + 1.0);
        check_nonvanishing(xi, a, b)?;
        let form = detect_form(xi, f1, a, b)?.ok_or(ReductionError::InfiniteNormalization)?;
        return Ok(form.profile(x0)?.value(x)?);
    }
    check_nonvanishing(xi, x0, x)?;
    if x0 == x {
        return Ok(1.0);
    }
    let (a, b) = if x0 < x { (x0, x) } else { (x, x0) };
    if let Some(form) = detect_form(xi, f1, a, b)? {
        return Ok(form.profile(x0)?.value(x)?);
    }
    let integral = adaptive_simpson(|s| Ok::<f64, ModelError>(f1.value(s)? / xi.value(s)?), x0, x, DEFAULT_TOL)?;
    Ok(integral.exp())
}

/// Closed-form profile as a coefficient function, probing on `domain`.
pub fn invariant_profile_fn(
    xi: &CoefficientFn,
    f1: &CoefficientFn,
    x0: f64,
    domain: &Domain,
) -> Result<(CoefficientFn, ProfileForm), ReductionError> {
    let form = detect_form(xi, f1, domain.x_min(), domain.l())?.ok_or(ReductionError::NoClosedForm)?;
    Ok((form.profile(x0)?, form))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeparationReport {
    /// Separation constant; the mean of the samples, or exactly 0 when
    /// every sample is zero to rounding.
    pub s: f64,
    /// `(x, S(x))` for every grid point where `m φ ≠ 0`.
    pub samples: Vec<(f64, f64)>,
    pub max_deviation: f64,
    pub constant: bool,
    pub notes: Vec<String>,
}

impl SeparationReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,S\n");
        for (x, s) in &self.samples {
            out.push_str(&format!("{x:.16e},{s:.16e}\n"));
        }
        out
    }
}

/// `S(x) = −L[φ]/(m φ)` over `grid`, with a constancy verdict.
///
/// A sample whose value is below `S_ZERO_TOL` relative to the largest
/// operator term (divided by `m φ`) counts as zero; if all samples do, `S`
/// is reported as exactly 0.
pub fn separation_constant(
    config: &BeamConfig,
    phi: &CoefficientFn,
    grid: &[f64],
) -> Result<SeparationReport, ModelError> {
    let mut samples = Vec::with_capacity(grid.len());
    let mut notes = Vec::new();
    let mut all_zero = true;
    for &x in grid {
        let (ei, m, t) = config.jets(x)?;
        let p = phi.jet(x)?;
        let denom = m.value() * p.value();
        if denom == 0.0 {
            notes.push(format!("x = {x}: m*phi = 0, point excluded"));
            continue;
        }
        let terms = [
            ei.value() * p.dx(4),
            2.0 * ei.dx(1) * p.dx(3),
            ei.dx(2) * p.dx(2),
            -t.dx(1) * p.dx(1),
            -t.value() * p.dx(2),
        ];
        let l: f64 = terms.iter().sum();
        let scale = terms.iter().fold(0.0f64, |a, v| a.max(v.abs())) / denom.abs();
        let s = -l / denom;
        if s.abs() > S_ZERO_TOL * scale.max(f64::MIN_POSITIVE) && s.abs() > 0.0 {
            all_zero = false;
        }
        samples.push((x, s));
    }
    if samples.is_empty() {
        return Ok(SeparationReport {
            s: f64::NAN,
            samples,
            max_deviation: f64::NAN,
            constant: false,
            notes,
        });
    }
    let enough = samples.len() >= MIN_CONSTANCY_POINTS;
    if !enough {
        notes.push(format!(
            "{} usable points, at least {MIN_CONSTANCY_POINTS} needed for a constancy verdict",
            samples.len()
        ));
    }
    if all_zero {
        let dev = samples.iter().fold(0.0f64, |a, v| a.max(v.1.abs()));
        return Ok(SeparationReport {
            s: 0.0,
            samples,
            max_deviation: dev,
            constant: enough,
            notes,
        });
    }
    let mean = samples.iter().map(|v| v.1).sum::<f64>() / samples.len() as f64;
    let dev = samples.iter().fold(0.0f64, |a, v| a.max((v.1 - mean).abs()));
    let constant = enough && dev / mean.abs().max(1e-12) <= CONSTANCY_TOL;
    let s = if constant && mean.abs() <= S_ZERO_TOL { 0.0 } else { mean };
    Ok(SeparationReport {
        s,
        samples,
        max_deviation: dev,
        constant,
        notes,
    })
}

/// Solves `F'' = S F` with `F(0) = f0`, `F'(0) = f0dot`.
pub fn temporal_solve(s: f64, f0: f64, f0dot: f64) -> TemporalFactor {
    if s.abs() <= S_ZERO_TOL {
        TemporalFactor::Affine { a1: f0, a2: f0dot }
    } else if s > 0.0 {
        let lambda = s.sqrt();
        TemporalFactor::Hyperbolic {
            lambda,
            a1: 0.5 * (f0 + f0dot / lambda),
            a2: 0.5 * (f0 - f0dot / lambda),
        }
    } else {
        let nu = (-s).sqrt();
        TemporalFactor::Trigonometric {
            nu,
            a1: f0,
            a2: f0dot / nu,
        }
    }
}

pub fn assemble_solution(phi: CoefficientFn, temporal: TemporalFactor) -> ClosedFormSolution {
    ClosedFormSolution::separated(phi, temporal)
}

/// Result of reducing a config along a generator.
#[derive(Debug, Clone, PartialEq)]
pub struct Reduction {
    pub form: ProfileForm,
    pub x0: f64,
    pub separation: SeparationReport,
    pub solution: ClosedFormSolution,
}

/// Profile from the characteristic, separation test on a `DEFAULT_GRID`
/// grid, then the temporal factor from `F(0) = f0`, `F'(0) = f0dot`.
/// `x0 = None` normalizes at the domain midpoint.
pub fn reduce(
    config: &BeamConfig,
    inf: &Infinitesimals,
    x0: Option<f64>,
    f0: f64,
    f0dot: f64,
) -> Result<Reduction, ReductionError> {
    let x0 = x0.unwrap_or_else(|| config.domain.midpoint());
    let (phi, form) = invariant_profile_fn(&inf.xi, &inf.u_coefficient(), x0, &config.domain)?;
    let separation = separation_constant(config, &phi, &config.domain.linspace(DEFAULT_GRID))?;
    let temporal = temporal_solve(separation.s, f0, f0dot);
    Ok(Reduction {
        form,
        x0,
        separation,
        solution: assemble_solution(phi, temporal),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{bundle, CaseA1};
    use approx::assert_relative_eq;

    #[test]
    fn quadratic_xi_profile() {
        let xi = CoefficientFn::poly(vec![0.0, 0.0, 0.5]);
        let f1 = CoefficientFn::constant(1.0);
        let x0 = 0.5;
        let v = invariant_profile(&xi, &f1, x0, 0.8).unwrap();
        assert_relative_eq!(v, (2.0 / x0 - 2.0 / 0.8f64).exp(), max_relative = 1e-14);
        let v = invariant_profile(&xi, &f1, f64::INFINITY, 0.8).unwrap();
        assert_relative_eq!(v, (-2.0 / 0.8f64).exp(), max_relative = 1e-14);
    }

    #[test]
    fn linear_xi_profile() {
        let v = invariant_profile(&CoefficientFn::x(), &CoefficientFn::constant(3.0), 0.5, 2.0).unwrap();
        assert_relative_eq!(v, 64.0, max_relative = 1e-13);
    }

    #[test]
    fn exponential_profile_and_quadrature_fallback() {
        let v = 1.3;
        let xi = CoefficientFn::affine(0.0, v).exp() * (0.5 / (v * v));
        let f1 = CoefficientFn::affine(0.0, v).exp() * (1.0 / v);
        let p = invariant_profile(&xi, &f1, 0.2, 0.9).unwrap();
        assert_relative_eq!(p, (2.0 * v * 0.7f64).exp(), max_relative = 1e-13);
        // A/ξ = 1 + x: no recognized form
        let xi = CoefficientFn::constant(1.0);
        let f1 = CoefficientFn::affine(1.0, 1.0);
        assert_eq!(detect_form(&xi, &f1, 0.0, 1.0).unwrap(), None);
        let p = invariant_profile(&xi, &f1, 0.0, 1.0).unwrap();
        assert_relative_eq!(p, 1.5f64.exp(), max_relative = 1e-9);
    }

    #[test]
    fn vanishing_xi_is_singular() {
        let err = invariant_profile(&CoefficientFn::x(), &CoefficientFn::constant(1.0), -0.5, 0.5).unwrap_err();
        assert!(matches!(err, ReductionError::SingularCharacteristic { .. }));
        let err = invariant_profile(&CoefficientFn::x(), &CoefficientFn::constant(1.0), 0.5, 0.0).unwrap_err();
        assert!(matches!(err, ReductionError::SingularCharacteristic { .. }));
    }

    #[test]
    fn uniform_beam_separation() {
        let cfg = BeamConfig::new(
            "uniform",
            Domain::unit(),
            CoefficientFn::constant(1.0),
            CoefficientFn::constant(1.0),
            CoefficientFn::constant(0.0),
        )
        .unwrap();
        let rep = separation_constant(&cfg, &CoefficientFn::x().exp(), &cfg.domain.linspace(40)).unwrap();
        assert!(rep.constant);
        assert_relative_eq!(rep.s, -1.0, max_relative = 1e-14);
        assert_eq!(rep.to_csv().lines().count(), 41);
    }

    #[test]
    fn a1_separates_only_without_c2() {
        let b = bundle("a1", &[]).unwrap();
        let grid = b.config.domain.linspace(40);
        let rep = separation_constant(&b.config, &b.solution.profile, &grid).unwrap();
        assert!(rep.constant);
        assert_relative_eq!(rep.s, 2.0, max_relative = 1e-12);
        let cfg = CaseA1 { c2: 0.1, ..CaseA1::default() }.config().unwrap();
        let rep = separation_constant(&cfg, &b.solution.profile, &grid).unwrap();
        assert!(!rep.constant);
    }

    #[test]
    fn short_grid_gives_no_verdict() {
        let b = bundle("b", &[]).unwrap();
        let rep = separation_constant(&b.config, &b.solution.profile, &b.config.domain.linspace(10)).unwrap();
        assert_eq!(rep.s, 0.0);
        assert!(!rep.constant);
        assert_eq!(rep.notes.len(), 1);
    }

    #[test]
    fn zero_profile_points_are_excluded() {
        let b = bundle("bvp", &[]).unwrap();
        let rep = separation_constant(&b.config, &b.solution.profile, &b.config.domain.linspace(65)).unwrap();
        assert_eq!(rep.samples.len(), 64);
        assert!(rep.notes[0].contains("x = 0"));
        assert!(rep.constant);
        assert_relative_eq!(rep.s, -43200.0 / 3000.0, max_relative = 1e-6);
    }

    #[test]
    fn temporal_factors() {
        assert_eq!(temporal_solve(0.0, 2.0, 3.0), TemporalFactor::Affine { a1: 2.0, a2: 3.0 });
        let f = temporal_solve(2.0, 1.0, 0.0);
        for t in [0.0, 0.5, 1.7] {
            assert_relative_eq!(f.value(t), (2f64.sqrt() * t).cosh(), max_relative = 1e-14);
        }
        let f = temporal_solve(-14.4, 1.0, 0.0);
        match f {
            TemporalFactor::Trigonometric { nu, a1, a2 } => {
                assert!((nu - 3.794733).abs() < 1e-6);
                assert_eq!((a1, a2), (1.0, 0.0));
            }
            _ => panic!("{f:?}"),
        }
        let f = temporal_solve(-4.0, 1.0, 2.0);
        assert_relative_eq!(f.jet(0.0).dt(1), 2.0, max_relative = 1e-15);
    }

    #[test]
    fn zero_temporal_factor_gives_zero_solution() {
        let b = bundle("b", &[]).unwrap();
        let u = assemble_solution(b.solution.profile.clone(), TemporalFactor::Affine { a1: 0.0, a2: 0.0 });
        assert_eq!(crate::beam_model::residual(&b.config, &u, 0.3, 0.4).unwrap(), 0.0);
    }

    #[test]
    fn reduce_round_trips_separable_bundles() {
        for name in ["a1", "b", "bvp"] {
            let b = bundle(name, &[]).unwrap();
            let r = reduce(&b.config, &b.inf, None, 1.0, 0.0).unwrap();
            assert!(r.separation.constant, "{name}: {:?}", r.separation.notes);
            let rebuilt = CaseBundleView(&b.config, &r.solution).sweep();
            assert!(rebuilt <= 1e-9, "{name}: {rebuilt}");
        }
    }

    struct CaseBundleView<'a>(&'a BeamConfig, &'a ClosedFormSolution);

    impl CaseBundleView<'_> {
        fn sweep(&self) -> f64 {
            let mut worst = 0.0f64;
            for x in self.0.domain.linspace(10) {
                for k in 0..10 {
                    let r = crate::beam_model::residual_terms(self.0, self.1, x, 0.2 * k as f64).unwrap();
                    worst = worst.max(r.relative());
                }
            }
            worst
        }
    }
}
