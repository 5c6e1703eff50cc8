use serde::{Deserialize, Serialize};

use super::{BeamConfig, CoefficientFn, ModelError};
use crate::jets::Jet;

/// Temporal factor `F(t)` of a separated solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TemporalFactor {
    /// `A1 e^{λt} + A2 e^{−λt}`
    Hyperbolic { lambda: f64, a1: f64, a2: f64 },
    /// `A1 + A2 t`
    Affine { a1: f64, a2: f64 },
    /// `A1 cos(νt) + A2 sin(νt)`
    Trigonometric { nu: f64, a1: f64, a2: f64 },
}

impl TemporalFactor {
    /// Jet of `F` at `t`; only pure-`t` slots are populated.
    pub fn jet(&self, t: f64) -> Jet {
        match *self {
            Self::Hyperbolic { lambda, a1, a2 } => {
                let p = a1 * (lambda * t).exp();
                let q = a2 * (-lambda * t).exp();
                Jet::from_t_derivatives([p + q, lambda * (p - q), lambda * lambda * (p + q)])
            }
            Self::Affine { a1, a2 } => Jet::from_t_derivatives([a1 + a2 * t, a2, 0.0]),
            Self::Trigonometric { nu, a1, a2 } => {
                let (s, c) = (nu * t).sin_cos();
                let f = a1 * c + a2 * s;
                Jet::from_t_derivatives([f, nu * (a2 * c - a1 * s), -nu * nu * f])
            }
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        self.jet(t).value()
    }

    /// Value of `F''/F` implied by the form (`λ²`, `0`, or `−ν²`).
    pub fn separation_constant(&self) -> f64 {
        match *self {
            Self::Hyperbolic { lambda, .. } => lambda * lambda,
            Self::Affine { .. } => 0.0,
            Self::Trigonometric { nu, .. } => -nu * nu,
        }
    }
}

/// `c t + c0`, added to the separated part.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct AffineOffset {
    pub rate: f64,
    pub constant: f64,
}

/// `u(x,t) = φ(x) F(t) + rate·t + constant`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormSolution {
    pub profile: CoefficientFn,
    pub temporal: TemporalFactor,
    #[serde(default)]
    pub offset: AffineOffset,
}

impl ClosedFormSolution {
    pub fn separated(profile: CoefficientFn, temporal: TemporalFactor) -> Self {
        Self {
            profile,
            temporal,
            offset: AffineOffset::default(),
        }
    }

    pub fn jet(&self, x: f64, t: f64) -> Result<Jet, ModelError> {
        let phi = self.profile.jet(x)?;
        let mut u = phi * self.temporal.jet(t);
        u += Jet::coord_t(t) * self.offset.rate + self.offset.constant;
        if !u.is_finite() {
            return Err(ModelError::Eval {
                x,
                source: crate::jets::JetError::NonFinite {
                    primitive: "mul",
                    value: phi.value(),
                },
            });
        }
        Ok(u)
    }

    pub fn value(&self, x: f64, t: f64) -> Result<f64, ModelError> {
        Ok(self.jet(x, t)?.value())
    }

    /// The solution multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            profile: self.profile.clone() * c,
            temporal: self.temporal,
            offset: AffineOffset {
                rate: c * self.offset.rate,
                constant: c * self.offset.constant,
            },
        }
    }
}

/// The six additive terms of the expanded operator at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualTerms {
    pub terms: [f64; 6],
}

impl ResidualTerms {
    pub const LABELS: [&'static str; 6] = [
        "EI*u_xxxx",
        "2*EI'*u_xxx",
        "EI''*u_xx",
        "m*u_tt",
        "-T'*u_x",
        "-T*u_xx",
    ];

    /// Expanded operator from jets of the coefficients and of `u`.
    pub fn from_jets(ei: &Jet, m: &Jet, t: &Jet, u: &Jet) -> Self {
        Self {
            terms: [
                ei.value() * u.get(4, 0),
                2.0 * ei.dx(1) * u.get(3, 0),
                ei.dx(2) * u.get(2, 0),
                m.value() * u.get(0, 2),
                -t.dx(1) * u.get(1, 0),
                -t.value() * u.get(2, 0),
            ],
        }
    }

    pub fn sum(&self) -> f64 {
        self.terms.iter().sum()
    }

    pub fn scale(&self) -> f64 {
        self.terms.iter().fold(0.0, |a, t| a.max(t.abs()))
    }

    /// `|sum| / max |term|`, zero when every term vanishes.
    pub fn relative(&self) -> f64 {
        let s = self.scale();
        if s == 0.0 {
            0.0
        } else {
            self.sum().abs() / s
        }
    }
}

pub fn residual_terms(
    config: &BeamConfig,
    u: &ClosedFormSolution,
    x: f64,
    t: f64,
) -> Result<ResidualTerms, ModelError> {
    if !config.domain.contains(x) {
        return Err(ModelError::OutOfDomain {
            x,
            x_min: config.domain.x_min(),
            l: config.domain.l(),
        });
    }
    let (ei, m, tens) = config.jets(x)?;
    Ok(ResidualTerms::from_jets(&ei, &m, &tens, &u.jet(x, t)?))
}

/// Left side of the beam equation for `u` at `(x, t)`.
pub fn residual(config: &BeamConfig, u: &ClosedFormSolution, x: f64, t: f64) -> Result<f64, ModelError> {
    Ok(residual_terms(config, u, x, t)?.sum())
}
