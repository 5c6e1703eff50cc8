use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::ModelError;
use crate::jets::{Jet, MAX_X};
use crate::quadrature::{adaptive_simpson, DEFAULT_TOL};

/// A closed-form function of the spatial coordinate, evaluable to a jet.
///
/// Serialized with an internal `kind` tag, e.g.
/// `{ kind = "exp", arg = { kind = "affine", a0 = 0.0, a1 = -1.0 } }`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CoefficientFn {
    Const {
        value: f64,
    },
    X,
    /// `a0 + a1 x`
    Affine {
        a0: f64,
        a1: f64,
    },
    /// `Σ coeffs[k] x^k`
    Poly {
        coeffs: Vec<f64>,
    },
    Pow {
        base: Box<CoefficientFn>,
        exponent: f64,
    },
    Exp {
        arg: Box<CoefficientFn>,
    },
    Sum {
        terms: Vec<CoefficientFn>,
    },
    Product {
        factors: Vec<CoefficientFn>,
    },
    Quotient {
        num: Box<CoefficientFn>,
        den: Box<CoefficientFn>,
    },
    /// `∫_x^upper integrand(s) ds`, integrated numerically.
    TailIntegral {
        integrand: Box<CoefficientFn>,
        upper: f64,
    },
}

impl CoefficientFn {
    pub fn constant(value: f64) -> Self {
        Self::Const { value }
    }

    pub fn x() -> Self {
        Self::X
    }

    pub fn affine(a0: f64, a1: f64) -> Self {
        Self::Affine { a0, a1 }
    }

    pub fn poly(coeffs: Vec<f64>) -> Self {
        Self::Poly { coeffs }
    }

    pub fn pow(self, exponent: f64) -> Self {
        Self::Pow {
            base: Box::new(self),
            exponent,
        }
    }

    pub fn exp(self) -> Self {
        Self::Exp { arg: Box::new(self) }
    }

    pub fn tail_integral(integrand: CoefficientFn, upper: f64) -> Self {
        Self::TailIntegral {
            integrand: Box::new(integrand),
            upper,
        }
    }

    /// Jet of the function at `x`; only pure-`x` slots are populated.
    pub fn jet(&self, x: f64) -> Result<Jet, ModelError> {
        self.eval(x).map_err(|source| ModelError::Eval { x, source })
    }

    pub fn value(&self, x: f64) -> Result<f64, ModelError> {
        Ok(self.jet(x)?.value())
    }

    fn eval(&self, x: f64) -> Result<Jet, crate::jets::JetError> {
        use crate::jets::JetError;
        Ok(match self {
            Self::Const { value } => Jet::constant(*value),
            Self::X => Jet::coord_x(x),
            Self::Affine { a0, a1 } => Jet::from_x_derivatives([a0 + a1 * x, *a1, 0.0, 0.0, 0.0]),
            Self::Poly { coeffs } => Jet::from_x_derivatives(poly_derivatives(coeffs, x)),
            Self::Pow { base, exponent } => base.eval(x)?.powf(*exponent)?,
            Self::Exp { arg } => arg.eval(x)?.exp()?,
            Self::Sum { terms } => {
                let mut acc = Jet::zero();
                for t in terms {
                    acc += t.eval(x)?;
                }
                acc
            }
            Self::Product { factors } => {
                let mut acc = Jet::constant(1.0);
                for f in factors {
                    acc = acc.try_mul(&f.eval(x)?)?;
                }
                acc
            }
            Self::Quotient { num, den } => num.eval(x)?.try_div(&den.eval(x)?)?,
            Self::TailIntegral { integrand, upper } => {
                let inner = integrand.eval(x)?;
                let value = adaptive_simpson(
                    |s| integrand.eval(s).map(|j| j.value()),
                    x,
                    *upper,
                    DEFAULT_TOL,
                )?;
                let mut d = [0.0; MAX_X + 1];
                d[0] = value;
                for k in 1..=MAX_X {
                    d[k] = -inner.dx(k - 1);
                }
                let out = Jet::from_x_derivatives(d);
                if !out.is_finite() {
                    return Err(JetError::NonFinite {
                        primitive: "integral",
                        value: x,
                    });
                }
                out
            }
        })
    }

    /// Ascending coefficients when the expression is a polynomial.
    pub fn as_polynomial(&self) -> Option<Vec<f64>> {
        match self {
            Self::Const { value } => Some(vec![*value]),
            Self::X => Some(vec![0.0, 1.0]),
            Self::Affine { a0, a1 } => Some(vec![*a0, *a1]),
            Self::Poly { coeffs } => Some(coeffs.clone()),
            Self::Sum { terms } => terms.iter().try_fold(vec![0.0], |acc, t| {
                Some(poly_add(&acc, &t.as_polynomial()?))
            }),
            Self::Product { factors } => factors.iter().try_fold(vec![1.0], |acc, f| {
                Some(poly_mul(&acc, &f.as_polynomial()?))
            }),
            Self::Pow { base, exponent } if *exponent >= 0.0 && exponent.fract() == 0.0 => {
                let b = base.as_polynomial()?;
                let mut acc = vec![1.0];
                for _ in 0..(*exponent as u32) {
                    acc = poly_mul(&acc, &b);
                }
                Some(acc)
            }
            Self::Quotient { num, den } => match den.as_ref() {
                Self::Const { value } if *value != 0.0 => {
                    Some(num.as_polynomial()?.iter().map(|c| c / value).collect())
                }
                _ => None,
            },
            _ => None,
        }
    }
}

fn poly_derivatives(coeffs: &[f64], x: f64) -> [f64; MAX_X + 1] {
    let mut out = [0.0; MAX_X + 1];
    let mut c: Vec<f64> = coeffs.to_vec();
    for slot in out.iter_mut() {
        // Horner on the current derivative
        *slot = c.iter().rev().fold(0.0, |acc, &ck| acc * x + ck);
        c = c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, ck)| ck * k as f64)
            .collect();
        if c.is_empty() {
            break;
        }
    }
    out
}

pub(crate) fn poly_add(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|k| a.get(k).copied().unwrap_or(0.0) + b.get(k).copied().unwrap_or(0.0))
        .collect()
}

pub(crate) fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return vec![0.0];
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

impl Add for CoefficientFn {
    type Output = CoefficientFn;
    fn add(self, rhs: Self) -> Self {
        let mut terms = match self {
            Self::Sum { terms } => terms,
            other => vec![other],
        };
        match rhs {
            Self::Sum { terms: more } => terms.extend(more),
            other => terms.push(other),
        }
        Self::Sum { terms }
    }
}

impl Sub for CoefficientFn {
    type Output = CoefficientFn;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for CoefficientFn {
    type Output = CoefficientFn;
    fn neg(self) -> Self {
        self * -1.0
    }
}

impl Mul for CoefficientFn {
    type Output = CoefficientFn;
    fn mul(self, rhs: Self) -> Self {
        let mut factors = match self {
            Self::Product { factors } => factors,
            other => vec![other],
        };
        match rhs {
            Self::Product { factors: more } => factors.extend(more),
            other => factors.push(other),
        }
        Self::Product { factors }
    }
}

impl Mul<f64> for CoefficientFn {
    type Output = CoefficientFn;
    fn mul(self, rhs: f64) -> Self {
        Self::constant(rhs) * self
    }
}

impl Div for CoefficientFn {
    type Output = CoefficientFn;
    fn div(self, rhs: Self) -> Self {
        Self::Quotient {
            num: Box::new(self),
            den: Box::new(rhs),
        }
    }
}

impl fmt::Display for CoefficientFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Const { value } => write!(f, "{value}"),
            Self::X => write!(f, "x"),
            Self::Affine { a0, a1 } => write!(f, "({a0} + {a1}*x)"),
            Self::Poly { coeffs } => {
                write!(f, "(")?;
                for (k, c) in coeffs.iter().enumerate() {
                    if k > 0 {
                        write!(f, " + ")?;
                    }
                    match k {
                        0 => write!(f, "{c}")?,
                        1 => write!(f, "{c}*x")?,
                        _ => write!(f, "{c}*x^{k}")?,
                    }
                }
                write!(f, ")")
            }
            Self::Pow { base, exponent } => write!(f, "{base}^{exponent}"),
            Self::Exp { arg } => write!(f, "exp({arg})"),
            Self::Sum { terms } => {
                write!(f, "(")?;
                for (k, t) in terms.iter().enumerate() {
                    if k > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{t}")?;
                }
                write!(f, ")")
            }
            Self::Product { factors } => {
                for (k, t) in factors.iter().enumerate() {
                    if k > 0 {
                        write!(f, "*")?;
                    }
                    write!(f, "{t}")?;
                }
                Ok(())
            }
            Self::Quotient { num, den } => write!(f, "{num}/({den})"),
            Self::TailIntegral { integrand, upper } => {
                write!(f, "integral(x..{upper}, {integrand})")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn stiffness_of_singular_case_at_unit_point() {
        // k^3 x^6 / (8 f0^3) with k = f0 = 1
        let ei = CoefficientFn::x().pow(6.0) * (1.0 / 8.0);
        let j = ei.jet(1.0).unwrap();
        assert_relative_eq!(j.value(), 1.0 / 8.0);
        assert_relative_eq!(j.dx(1), 6.0 / 8.0);
    }

    #[test]
    fn exponential_slots_scale_geometrically() {
        let f = CoefficientFn::affine(0.0, 2.0).exp();
        let j = f.jet(0.5).unwrap();
        let e = std::f64::consts::E;
        for k in 0..=MAX_X {
            assert_relative_eq!(j.dx(k), e * 2f64.powi(k as i32), max_relative = 1e-14);
        }
    }

    #[test]
    fn polynomial_slots() {
        let p = CoefficientFn::poly(vec![1.0, -2.0, 0.0, 1.0]);
        let j = p.jet(2.0).unwrap();
        assert_eq!(j.x_derivatives(), [5.0, 10.0, 12.0, 6.0, 0.0]);
    }

    #[test]
    fn polynomial_recognition() {
        let f = (CoefficientFn::affine(1.0, 2.0) * CoefficientFn::x()).pow(2.0)
            / CoefficientFn::constant(2.0);
        assert_eq!(f.as_polynomial().unwrap(), vec![0.0, 0.0, 0.5, 2.0, 2.0]);
        assert!(CoefficientFn::x().exp().as_polynomial().is_none());
    }

    #[test]
    fn tail_integral_jet() {
        // ∫_x^1 e^s ds = e - e^x
        let f = CoefficientFn::tail_integral(CoefficientFn::x().exp(), 1.0);
        let j = f.jet(0.25).unwrap();
        let e = std::f64::consts::E;
        assert_relative_eq!(j.value(), e - 0.25f64.exp(), max_relative = 1e-10);
        assert_relative_eq!(j.dx(1), -(0.25f64.exp()), max_relative = 1e-14);
        assert_relative_eq!(j.dx(4), -(0.25f64.exp()), max_relative = 1e-14);
    }

    #[test]
    fn singular_point_reports_location() {
        let f = CoefficientFn::x().pow(-1.0);
        match f.jet(0.0) {
            Err(ModelError::Eval { x, .. }) => assert_eq!(x, 0.0),
            other => panic!("expected eval error, got {other:?}"),
        }
    }
}
