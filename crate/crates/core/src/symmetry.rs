//! Determining-equation residuals for a candidate point symmetry.
//!
//! A generator `ξ(x) ∂x + τ(t) ∂t + η(x,t,u) ∂u` with
//! `τ = ω t / 2 + t0` and `η = (f1(x) + ω/4) u + d1 + d2 t` is checked by
//! substituting jets of `EI, m, T, ξ, f1` into each determining equation.
//! `u` is an independent coordinate: `η` is affine in it, so `u`-derivatives
//! come from the coefficient `A = f1 + ω/4` directly.
//!
//! Equations R1–R4 (`τ_x, τ_u, ξ_t, ξ_u`) and R11 (`η_uu`) hold by the
//! structure of [`Infinitesimals`]; they are still evaluated, from the
//! jets, so a report always lists all eleven.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::beam_model::{BeamConfig, CoefficientFn, ModelError};
use crate::jets::Jet;

/// Default relative tolerance for determining residuals.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Displacement values cycled through by [`certify`].
pub const U_SAMPLES: [f64; 5] = [0.0, 1.0, -1.0, 10.0, -10.0];

/// Upper end of the sampled time window `[0, T_SAMPLE_MAX]`.
pub const T_SAMPLE_MAX: f64 = 2.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SymmetryError {
    #[error("{equation}: {source}")]
    Eval { equation: Equation, source: ModelError },
    #[error("x = {x} outside domain [{x_min}, {l}]")]
    OutOfDomain { x: f64, x_min: f64, l: f64 },
    #[error("at least one sample is required")]
    NoSamples,
}

/// `τ(t) = ω t / 2 + t0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tau {
    pub omega: f64,
    pub t0: f64,
}

/// `η = (f1(x) + ω/4) u + d1 + d2 t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Eta {
    pub f1: CoefficientFn,
    pub d1: f64,
    pub d2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Infinitesimals {
    pub xi: CoefficientFn,
    pub tau: Tau,
    pub eta: Eta,
}

impl Infinitesimals {
    pub fn tau_jet(&self, t: f64) -> Jet {
        let Tau { omega, t0 } = self.tau;
        Jet::from_t_derivatives([0.5 * omega * t + t0, 0.5 * omega, 0.0])
    }

    /// `A(x) = f1(x) + ω/4`, the coefficient of `u` in `η`.
    pub fn u_coefficient(&self) -> CoefficientFn {
        if self.tau.omega == 0.0 {
            self.eta.f1.clone()
        } else {
            self.eta.f1.clone() + CoefficientFn::constant(0.25 * self.tau.omega)
        }
    }

    /// Jet of `η_u = A` over `(x, t)`.
    pub fn eta_u_jet(&self, x: f64) -> Result<Jet, ModelError> {
        Ok(self.eta.f1.jet(x)? + 0.25 * self.tau.omega)
    }

    /// Jet of `η` over `(x, t)` at fixed `u`.
    pub fn eta_jet(&self, x: f64, t: f64, u: f64) -> Result<Jet, ModelError> {
        let a = self.eta_u_jet(x)?;
        Ok(a * u + Jet::coord_t(t) * self.eta.d2 + self.eta.d1)
    }
}

/// Labels of the determining equations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Equation {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    R8,
    R9,
    R10,
    R11,
}

impl Equation {
    pub const ALL: [Equation; 11] = [
        Equation::R1,
        Equation::R2,
        Equation::R3,
        Equation::R4,
        Equation::R5,
        Equation::R6,
        Equation::R7,
        Equation::R8,
        Equation::R9,
        Equation::R10,
        Equation::R11,
    ];

    pub const STRUCTURAL: [Equation; 4] = [Equation::R1, Equation::R2, Equation::R3, Equation::R4];

    pub fn label(self) -> &'static str {
        match self {
            Equation::R1 => "R1",
            Equation::R2 => "R2",
            Equation::R3 => "R3",
            Equation::R4 => "R4",
            Equation::R5 => "R5",
            Equation::R6 => "R6",
            Equation::R7 => "R7",
            Equation::R8 => "R8",
            Equation::R9 => "R9",
            Equation::R10 => "R10",
            Equation::R11 => "R11",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Equation::R1 => "tau_x",
            Equation::R2 => "tau_u",
            Equation::R3 => "xi_t",
            Equation::R4 => "xi_u",
            Equation::R5 => "m eta_tt - T' eta_x - T eta_xx + EI'' eta_xx + 2 EI' eta_xxx + EI eta_xxxx",
            Equation::R6 => "coefficient of u_xxx",
            Equation::R7 => "coefficient of u_xx",
            Equation::R8 => "coefficient of u_x",
            Equation::R9 => "coefficient of u_tt",
            Equation::R10 => "2 m eta_tu - m tau_tt + tau-derivative terms",
            Equation::R11 => "eta_uu",
        }
    }

    pub fn parse(label: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|e| e.label().eq_ignore_ascii_case(label))
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquationResidual {
    pub equation: Equation,
    /// Signed sum of the additive terms.
    pub value: f64,
    /// Largest term magnitude.
    pub scale: f64,
}

impl EquationResidual {
    fn from_terms(equation: Equation, terms: &[f64]) -> Self {
        Self {
            equation,
            value: terms.iter().sum(),
            scale: terms.iter().fold(0.0, |a, t| a.max(t.abs())),
        }
    }

    pub fn relative(&self) -> f64 {
        if self.scale == 0.0 {
            self.value.abs()
        } else {
            self.value.abs() / self.scale
        }
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.relative() <= tol
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeterminingReport {
    pub point: (f64, f64, f64),
    pub residuals: Vec<EquationResidual>,
}

impl DeterminingReport {
    pub fn get(&self, eq: Equation) -> &EquationResidual {
        &self.residuals[eq as usize]
    }

    pub fn verdicts(&self, tol: f64) -> impl Iterator<Item = (Equation, bool)> + '_ {
        self.residuals.iter().map(move |r| (r.equation, r.passes(tol)))
    }
}

pub fn determining_residuals(
    config: &BeamConfig,
    inf: &Infinitesimals,
    x: f64,
    t: f64,
    u: f64,
) -> Result<DeterminingReport, SymmetryError> {
    if !config.domain.contains(x) {
        return Err(SymmetryError::OutOfDomain {
            x,
            x_min: config.domain.x_min(),
            l: config.domain.l(),
        });
    }
    let at = |equation: Equation| move |source: ModelError| SymmetryError::Eval { equation, source };
    let ei = config.ei.jet(x).map_err(at(Equation::R5))?;
    let m = config.m.jet(x).map_err(at(Equation::R5))?;
    let tt = config.t.jet(x).map_err(at(Equation::R5))?;
    let xi = inf.xi.jet(x).map_err(at(Equation::R6))?;
    let tau = inf.tau_jet(t);
    let eta = inf.eta_jet(x, t, u).map_err(at(Equation::R5))?;
    let eta_u = inf.eta_u_jet(x).map_err(at(Equation::R6))?;

    let (e, e1, e2, e3) = (ei.value(), ei.dx(1), ei.dx(2), ei.dx(3));
    let (mv, m1) = (m.value(), m.dx(1));
    let (tv, t1, t2) = (tt.value(), tt.dx(1), tt.dx(2));
    let (xv, x1, x2, x3, x4) = (xi.value(), xi.dx(1), xi.dx(2), xi.dx(3), xi.dx(4));
    let xi_t = xi.get(0, 1);
    let xi_tt = xi.get(0, 2);
    let (eta_x, eta_xx, eta_xxx, eta_xxxx, eta_tt) =
        (eta.get(1, 0), eta.get(2, 0), eta.get(3, 0), eta.get(4, 0), eta.get(0, 2));
    let (eta_xu, eta_xxu, eta_xxxu, eta_tu) =
        (eta_u.get(1, 0), eta_u.get(2, 0), eta_u.get(3, 0), eta_u.get(0, 1));
    let (tau_x, tau_xx, tau_xxx, tau_xxxx) = (tau.get(1, 0), tau.get(2, 0), tau.get(3, 0), tau.get(4, 0));
    let (tau_t, tau_tt) = (tau.dt(1), tau.dt(2));
    // η is affine in u and τ, ξ carry no u-dependence
    let (tau_u, xi_u, eta_uu) = (0.0, 0.0, 0.0);

    let residuals = vec![
        EquationResidual::from_terms(Equation::R1, &[tau_x]),
        EquationResidual::from_terms(Equation::R2, &[tau_u]),
        EquationResidual::from_terms(Equation::R3, &[xi_t]),
        EquationResidual::from_terms(Equation::R4, &[xi_u]),
        EquationResidual::from_terms(
            Equation::R5,
            &[
                mv * eta_tt,
                -t1 * eta_x,
                -tv * eta_xx,
                e2 * eta_xx,
                2.0 * e1 * eta_xxx,
                e * eta_xxxx,
            ],
        ),
        EquationResidual::from_terms(
            Equation::R6,
            &[
                -2.0 * xv * e1 * e1 / e,
                2.0 * xv * e2,
                2.0 * e1 * x1,
                4.0 * e * eta_xu,
                -6.0 * e * x2,
            ],
        ),
        EquationResidual::from_terms(
            Equation::R7,
            &[
                tv * xv * e1 / e,
                -xv * t1,
                -xv * e1 * e2 / e,
                xv * e3,
                -2.0 * tv * x1,
                2.0 * e2 * x1,
                6.0 * e1 * eta_xu,
                6.0 * e1 * x2,
                6.0 * e * eta_xxu,
                4.0 * e * x3,
            ],
        ),
        EquationResidual::from_terms(
            Equation::R8,
            &[
                t1 * xv * e1 / e,
                -t2 * xv,
                -mv * xi_tt,
                -3.0 * t1 * x1,
                -2.0 * tv * eta_xu,
                2.0 * e2 * eta_xu,
                tv * x2,
                -e * x2,
                6.0 * e1 * eta_xxu,
                -2.0 * e1 * x3,
                4.0 * e * eta_xxxu,
                e * x4,
            ],
        ),
        EquationResidual::from_terms(
            Equation::R9,
            &[-mv * xv * e1 / e, xv * m1, -2.0 * mv * tau_t, 4.0 * x1],
        ),
        EquationResidual::from_terms(
            Equation::R10,
            &[
                2.0 * mv * eta_tu,
                -mv * tau_tt,
                t1 * tau_x,
                tv * tau_xx,
                -e2 * tau_xx,
                -2.0 * e1 * tau_xxx,
                -e * tau_xxxx,
            ],
        ),
        EquationResidual::from_terms(Equation::R11, &[eta_uu]),
    ];
    if let Some(bad) = residuals.iter().find(|r| !r.value.is_finite()) {
        return Err(SymmetryError::Eval {
            equation: bad.equation,
            source: ModelError::Eval {
                x,
                source: crate::jets::JetError::NonFinite {
                    primitive: "div",
                    value: e,
                },
            },
        });
    }
    Ok(DeterminingReport {
        point: (x, t, u),
        residuals,
    })
}

/// Radical-inverse Halton sequence value.
pub fn halton(mut index: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while index > 0 {
        f /= base as f64;
        r += f * (index % base) as f64;
        index /= base;
    }
    r
}

/// Deterministic `(x, t, u)` sample `k`, offset by `seed`.
pub fn sample_point(config: &BeamConfig, k: usize, seed: u64) -> (f64, f64, f64) {
    let idx = seed + k as u64 + 1;
    let d = &config.domain;
    let x = d.x_min() + d.length() * halton(idx, 2);
    let t = T_SAMPLE_MAX * halton(idx, 3);
    (x, t, U_SAMPLES[k % U_SAMPLES.len()])
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertifyEntry {
    pub equation: Equation,
    /// Largest relative residual over the sweep.
    pub max_residual: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertifyReport {
    pub entries: Vec<CertifyEntry>,
    pub samples: usize,
    pub tol: f64,
}

impl CertifyReport {
    pub fn entry(&self, eq: Equation) -> &CertifyEntry {
        &self.entries[eq as usize]
    }

    pub fn passing(&self) -> Vec<Equation> {
        self.entries.iter().filter(|e| e.pass).map(|e| e.equation).collect()
    }

    /// True when every listed equation passed.
    pub fn certifies(&self, equations: &[Equation]) -> bool {
        equations.iter().all(|e| self.entry(*e).pass)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("equation,max_residual,pass\n");
        for e in &self.entries {
            out.push_str(&format!("{},{:.16e},{}\n", e.equation, e.max_residual, e.pass));
        }
        out
    }
}

pub fn certify(
    config: &BeamConfig,
    inf: &Infinitesimals,
    n_samples: usize,
    tol: f64,
) -> Result<CertifyReport, SymmetryError> {
    certify_seeded(config, inf, n_samples, tol, 0)
}

pub fn certify_seeded(
    config: &BeamConfig,
    inf: &Infinitesimals,
    n_samples: usize,
    tol: f64,
    seed: u64,
) -> Result<CertifyReport, SymmetryError> {
    if n_samples == 0 {
        return Err(SymmetryError::NoSamples);
    }
    let mut worst = [0.0f64; 11];
    for k in 0..n_samples {
        let (x, t, u) = sample_point(config, k, seed);
        let report = determining_residuals(config, inf, x, t, u)?;
        for (w, r) in worst.iter_mut().zip(&report.residuals) {
            *w = w.max(r.relative());
        }
    }
    let entries = Equation::ALL
        .iter()
        .zip(worst)
        .map(|(&equation, max_residual)| CertifyEntry {
            equation,
            max_residual,
            pass: max_residual <= tol,
        })
        .collect();
    Ok(CertifyReport {
        entries,
        samples: n_samples,
        tol,
    })
}
