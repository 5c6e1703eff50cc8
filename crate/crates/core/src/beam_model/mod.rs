//! Beam physical data and the axially loaded Euler–Bernoulli operator
//!
//! `(EI u'')'' + m u_tt − (T u')' = 0`
//!
//! expanded as `EI u_xxxx + 2 EI' u_xxx + EI'' u_xx + m u_tt − T' u_x − T u_xx`.

mod coefficient;
mod solution;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use coefficient::CoefficientFn;
pub(crate) use coefficient::poly_mul;
pub use solution::{residual, residual_terms, AffineOffset, ClosedFormSolution, ResidualTerms, TemporalFactor};

use crate::jets::{Jet, JetError};

/// Points used for on-demand positivity and evaluability checks.
pub const DOMAIN_SAMPLES: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("evaluation failed at x = {x}: {source}")]
    Eval { x: f64, source: JetError },
    #[error("invalid domain [{x_min}, {l}]")]
    InvalidDomain { x_min: f64, l: f64 },
    #[error("{role} is not evaluable on the domain: {reason}")]
    NotEvaluable { role: Role, reason: String },
    #[error("{role} must be positive; found {value} at x = {x}")]
    NotPositive { role: Role, x: f64, value: f64 },
    #[error("x = {x} outside domain [{x_min}, {l}]")]
    OutOfDomain { x: f64, x_min: f64, l: f64 },
    #[error("unsupported form: {0}")]
    Unsupported(String),
    #[error("config text: {0}")]
    Format(String),
}

/// Which physical coefficient a function plays.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Stiffness,
    Mass,
    Tension,
}

impl Role {
    pub fn units(self) -> &'static str {
        match self {
            Role::Stiffness => "force*length^2",
            Role::Mass => "mass/length",
            Role::Tension => "force",
        }
    }

    pub fn key(self) -> &'static str {
        match self {
            Role::Stiffness => "ei",
            Role::Mass => "m",
            Role::Tension => "t",
        }
    }

    pub fn from_key(key: &str) -> Option<Self> {
        match key {
            "ei" => Some(Role::Stiffness),
            "m" => Some(Role::Mass),
            "t" => Some(Role::Tension),
            _ => None,
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Stiffness => "EI",
            Role::Mass => "m",
            Role::Tension => "T",
        })
    }
}

/// Spatial interval `[x_min, l]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct Domain {
    x_min: f64,
    l: f64,
}

impl Domain {
    pub fn new(x_min: f64, l: f64) -> Result<Self, ModelError> {
        if !(x_min.is_finite() && l.is_finite() && x_min < l) {
            return Err(ModelError::InvalidDomain { x_min, l });
        }
        Ok(Self { x_min, l })
    }

    pub fn unit() -> Self {
        Self { x_min: 0.0, l: 1.0 }
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn l(&self) -> f64 {
        self.l
    }

    pub fn length(&self) -> f64 {
        self.l - self.x_min
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.x_min + self.l)
    }

    pub fn contains(&self, x: f64) -> bool {
        let slack = 1e-12 * self.length();
        x >= self.x_min - slack && x <= self.l + slack
    }

    /// `n` evenly spaced points including both ends.
    pub fn linspace(&self, n: usize) -> Vec<f64> {
        match n {
            0 => vec![],
            1 => vec![self.midpoint()],
            _ => (0..n)
                .map(|i| self.x_min + self.length() * i as f64 / (n - 1) as f64)
                .collect(),
        }
    }
}

impl TryFrom<[f64; 2]> for Domain {
    type Error = ModelError;
    fn try_from(v: [f64; 2]) -> Result<Self, ModelError> {
        Domain::new(v[0], v[1])
    }
}

impl From<Domain> for [f64; 2] {
    fn from(d: Domain) -> Self {
        [d.x_min, d.l]
    }
}

/// The coefficient triple `(EI, m, T)` on a spatial domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BeamConfig {
    pub label: String,
    pub domain: Domain,
    pub ei: CoefficientFn,
    pub m: CoefficientFn,
    pub t: CoefficientFn,
}

impl BeamConfig {
    /// Builds a config, rejecting coefficients that fail to evaluate
    /// anywhere on the domain sample (e.g. a `1/x` term with `x_min = 0`).
    pub fn new(
        label: impl Into<String>,
        domain: Domain,
        ei: CoefficientFn,
        m: CoefficientFn,
        t: CoefficientFn,
    ) -> Result<Self, ModelError> {
        let config = Self {
            label: label.into(),
            domain,
            ei,
            m,
            t,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        for role in [Role::Stiffness, Role::Mass, Role::Tension] {
            let f = self.coefficient(role);
            for x in self.domain.linspace(DOMAIN_SAMPLES) {
                f.jet(x).map_err(|e| ModelError::NotEvaluable {
                    role,
                    reason: e.to_string(),
                })?;
            }
        }
        Ok(())
    }

    pub fn coefficient(&self, role: Role) -> &CoefficientFn {
        match role {
            Role::Stiffness => &self.ei,
            Role::Mass => &self.m,
            Role::Tension => &self.t,
        }
    }

    pub fn coefficient_mut(&mut self, role: Role) -> &mut CoefficientFn {
        match role {
            Role::Stiffness => &mut self.ei,
            Role::Mass => &mut self.m,
            Role::Tension => &mut self.t,
        }
    }

    /// Multiplies one coefficient by a constant factor.
    pub fn scaled(mut self, role: Role, factor: f64) -> Self {
        let f = self.coefficient_mut(role);
        *f = f.clone() * factor;
        self
    }

    /// EI and m must be strictly positive on the domain sample.
    pub fn check_positivity(&self) -> Result<(), ModelError> {
        for role in [Role::Stiffness, Role::Mass] {
            for x in self.domain.linspace(DOMAIN_SAMPLES) {
                let value = self.coefficient(role).value(x)?;
                if !(value > 0.0) {
                    return Err(ModelError::NotPositive { role, x, value });
                }
            }
        }
        Ok(())
    }

    /// Jets of `(EI, m, T)` at `x`.
    pub fn jets(&self, x: f64) -> Result<(Jet, Jet, Jet), ModelError> {
        Ok((self.ei.jet(x)?, self.m.jet(x)?, self.t.jet(x)?))
    }

    pub fn to_toml_string(&self) -> Result<String, ModelError> {
        toml::to_string(self).map_err(|e| ModelError::Format(e.to_string()))
    }

    pub fn from_toml_str(text: &str) -> Result<Self, ModelError> {
        let config: Self = toml::from_str(text).map_err(|e| ModelError::Format(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }
}

/// Source of the axial load.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TensionKind {
    /// `T(x) = ∫_x^l m(s) Ω² s ds`
    Rotating { omega: f64 },
    /// `T(x) = ∫_x^l m(s) g ds`
    Gravity { g: f64 },
    /// Stiff string: `T = T0`.
    Constant { t0: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TensionMode {
    /// Closed form when `m` is polynomial, adaptive quadrature otherwise.
    #[default]
    Auto,
    ClosedForm,
    Quadrature,
}

pub fn build_tension(
    kind: TensionKind,
    m: &CoefficientFn,
    l: f64,
    mode: TensionMode,
) -> Result<CoefficientFn, ModelError> {
    let (integrand_poly, weight) = match kind {
        TensionKind::Constant { t0 } => return Ok(CoefficientFn::constant(t0)),
        TensionKind::Rotating { omega } => (vec![0.0, omega * omega], "rotating"),
        TensionKind::Gravity { g } => (vec![g], "gravity"),
    };
    let weight_fn = CoefficientFn::poly(integrand_poly.clone());
    let poly = m.as_polynomial();
    match (mode, poly) {
        (TensionMode::ClosedForm | TensionMode::Auto, Some(mc)) => {
            let w = coefficient::poly_mul(&mc, &integrand_poly);
            // antiderivative Q with Q(0) = 0; T(x) = Q(l) − Q(x)
            let mut q = vec![0.0; w.len() + 1];
            for (k, c) in w.iter().enumerate() {
                q[k + 1] = c / (k + 1) as f64;
            }
            let ql = q.iter().rev().fold(0.0, |acc, c| acc * l + c);
            let mut coeffs: Vec<f64> = q.iter().map(|c| -c).collect();
            coeffs[0] += ql;
            Ok(CoefficientFn::poly(coeffs))
        }
        (TensionMode::ClosedForm, None) => Err(ModelError::Unsupported(format!(
            "closed-form {weight} tension needs a polynomial mass, got {m}"
        ))),
        _ => Ok(CoefficientFn::tail_integral(m.clone() * weight_fn, l)),
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("sample {index} (x = {x}): {source}")]
pub struct SampleError {
    pub index: usize,
    pub x: f64,
    pub source: ModelError,
}

pub fn sample_field(f: &CoefficientFn, grid: &[f64]) -> Result<Vec<Jet>, SampleError> {
    grid.iter()
        .enumerate()
        .map(|(index, &x)| f.jet(x).map_err(|source| SampleError { index, x, source }))
        .collect()
}
