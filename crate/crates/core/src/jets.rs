//! Truncated bivariate derivative jets.
//!
//! A [`Jet`] carries every partial derivative `∂^{i+j} f / ∂x^i ∂t^j` of a
//! scalar field at one point for `0 <= i <= 4` and `0 <= j <= 2`. Slots hold
//! raw derivatives, not Taylor coefficients, so residual assembly can read
//! `u_xxxx` or `u_tt` straight out of a jet.
//!
//! Products use the Leibniz rule in raw-derivative space (integer binomial
//! weights only), which keeps integer polynomial data bit-exact. Univariate
//! primitives are applied by composition: with `a = a0 + h`, where `h` has a
//! zero value slot, `f(a) = Σ_k f^(k)(a0) h^k / k!`. Because the truncation
//! keeps total order at most 6, `h^7` vanishes and the sum is finite.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use thiserror::Error;

/// Highest stored derivative order in `x`.
pub const MAX_X: usize = 4;
/// Highest stored derivative order in `t`.
pub const MAX_T: usize = 2;
/// Number of derivative slots in a jet.
pub const SLOTS: usize = (MAX_X + 1) * (MAX_T + 1);

const MAX_TOTAL: usize = MAX_X + MAX_T;

const BINOM: [[f64; 5]; 5] = [
    [1.0, 0.0, 0.0, 0.0, 0.0],
    [1.0, 1.0, 0.0, 0.0, 0.0],
    [1.0, 2.0, 1.0, 0.0, 0.0],
    [1.0, 3.0, 3.0, 1.0, 0.0],
    [1.0, 4.0, 6.0, 4.0, 1.0],
];

const FACTORIAL: [f64; MAX_TOTAL + 1] = [1.0, 1.0, 2.0, 6.0, 24.0, 120.0, 720.0];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JetError {
    #[error("{primitive}: argument {value} outside domain ({reason})")]
    Domain {
        primitive: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("{primitive}: non-finite result from argument {value}")]
    NonFinite { primitive: &'static str, value: f64 },
}

/// Partial derivatives of a scalar field at a point, up to order (4, 2).
#[derive(Clone, Copy, PartialEq)]
pub struct Jet {
    d: [[f64; MAX_T + 1]; MAX_X + 1],
}

impl Default for Jet {
    fn default() -> Self {
        Self::zero()
    }
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = f.debug_struct("Jet");
        s.field("x", &self.x_derivatives());
        s.field("t1", &[self.d[0][1], self.d[1][1], self.d[2][1], self.d[3][1], self.d[4][1]]);
        s.field("t2", &[self.d[0][2], self.d[1][2], self.d[2][2], self.d[3][2], self.d[4][2]]);
        s.finish()
    }
}

impl Jet {
    pub const fn zero() -> Self {
        Self {
            d: [[0.0; MAX_T + 1]; MAX_X + 1],
        }
    }

    pub const fn constant(c: f64) -> Self {
        let mut j = Self::zero();
        j.d[0][0] = c;
        j
    }

    /// Seeds the coordinate `x` at `x0`.
    pub const fn coord_x(x0: f64) -> Self {
        let mut j = Self::constant(x0);
        j.d[1][0] = 1.0;
        j
    }

    /// Seeds the coordinate `t` at `t0`.
    pub const fn coord_t(t0: f64) -> Self {
        let mut j = Self::constant(t0);
        j.d[0][1] = 1.0;
        j
    }

    /// A jet depending on `x` only, from `[f, f', f'', f''', f'''']`.
    pub fn from_x_derivatives(derivs: [f64; MAX_X + 1]) -> Self {
        let mut j = Self::zero();
        for (i, v) in derivs.into_iter().enumerate() {
            j.d[i][0] = v;
        }
        j
    }

    /// A jet depending on `t` only, from `[g, g', g'']`.
    pub fn from_t_derivatives(derivs: [f64; MAX_T + 1]) -> Self {
        let mut j = Self::zero();
        j.d[0] = derivs;
        j
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i][j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.d[i][j] = v;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.d[0][0]
    }

    /// `∂^k f / ∂x^k`.
    #[inline]
    pub fn dx(&self, k: usize) -> f64 {
        self.d[k][0]
    }

    /// `∂^k f / ∂t^k`.
    #[inline]
    pub fn dt(&self, k: usize) -> f64 {
        self.d[0][k]
    }

    pub fn x_derivatives(&self) -> [f64; MAX_X + 1] {
        [self.d[0][0], self.d[1][0], self.d[2][0], self.d[3][0], self.d[4][0]]
    }

    /// Iterates `((i, j), value)` over all slots, `x` order major.
    pub fn slots(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        (0..=MAX_X).flat_map(move |i| (0..=MAX_T).map(move |j| ((i, j), self.d[i][j])))
    }

    pub fn is_finite(&self) -> bool {
        self.slots().all(|(_, v)| v.is_finite())
    }

    /// Shifts the stored `x` orders down by one: the result is the jet of
    /// `∂f/∂x`, with the top `x` row left at zero (it is not known).
    pub fn x_derivative(&self) -> Self {
        let mut out = Self::zero();
        for i in 0..MAX_X {
            out.d[i] = self.d[i + 1];
        }
        out
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = *self;
        for row in &mut out.d {
            for v in row {
                *v *= s;
            }
        }
        out
    }

    fn leibniz(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for i in 0..=MAX_X {
            for j in 0..=MAX_T {
                let mut acc = 0.0;
                for a in 0..=i {
                    for b in 0..=j {
                        let w = BINOM[i][a] * BINOM[j][b];
                        acc += w * self.d[a][b] * other.d[i - a][j - b];
                    }
                }
                out.d[i][j] = acc;
            }
        }
        out
    }

    /// Composes with a univariate function whose derivatives at the value
    /// slot are `derivs[k] = f^(k)(a0)`.
    pub fn compose(&self, derivs: &[f64; MAX_TOTAL + 1]) -> Self {
        let mut h = *self;
        h.d[0][0] = 0.0;
        let mut out = Self::constant(derivs[0]);
        let mut power = h;
        for (k, dk) in derivs.iter().enumerate().skip(1) {
            if *dk != 0.0 {
                out += power.scale(dk / FACTORIAL[k]);
            }
            if k < MAX_TOTAL {
                power = power.leibniz(&h);
            }
        }
        out
    }

    fn finite(self, primitive: &'static str, arg: f64) -> Result<Self, JetError> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(JetError::NonFinite {
                primitive,
                value: arg,
            })
        }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, JetError> {
        self.leibniz(other).finite("mul", self.value())
    }

    pub fn exp(&self) -> Result<Self, JetError> {
        let e = self.value().exp();
        self.compose(&[e; MAX_TOTAL + 1]).finite("exp", self.value())
    }

    pub fn ln(&self) -> Result<Self, JetError> {
        let a = self.value();
        if !(a > 0.0) {
            return Err(JetError::Domain {
                primitive: "ln",
                value: a,
                reason: "requires a positive argument",
            });
        }
        let mut derivs = [0.0; MAX_TOTAL + 1];
        derivs[0] = a.ln();
        // f^(k)(a) = (-1)^(k-1) (k-1)! / a^k
        let mut inv = 1.0;
        for k in 1..=MAX_TOTAL {
            inv /= a;
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            derivs[k] = sign * FACTORIAL[k - 1] * inv;
        }
        self.compose(&derivs).finite("ln", a)
    }

    /// Real power. Integer exponents accept any base (negative exponents
    /// need a nonzero base); non-integer exponents need a positive base.
    pub fn powf(&self, p: f64) -> Result<Self, JetError> {
        let a = self.value();
        let integral = p.fract() == 0.0 && p.abs() < i32::MAX as f64;
        if integral {
            return self.powi(p as i32);
        }
        if !(a > 0.0) {
            return Err(JetError::Domain {
                primitive: "pow",
                value: a,
                reason: "non-integer exponent requires a positive base",
            });
        }
        let mut derivs = [0.0; MAX_TOTAL + 1];
        let mut falling = 1.0;
        for (k, slot) in derivs.iter_mut().enumerate() {
            *slot = falling * a.powf(p - k as f64);
            falling *= p - k as f64;
        }
        self.compose(&derivs).finite("pow", a)
    }

    pub fn powi(&self, n: i32) -> Result<Self, JetError> {
        let a = self.value();
        if n < 0 && a == 0.0 {
            return Err(JetError::Domain {
                primitive: "pow",
                value: a,
                reason: "negative exponent requires a nonzero base",
            });
        }
        let mut derivs = [0.0; MAX_TOTAL + 1];
        let mut falling = 1.0;
        for (k, slot) in derivs.iter_mut().enumerate() {
            if falling == 0.0 {
                break;
            }
            *slot = falling * a.powi(n - k as i32);
            falling *= (n - k as i32) as f64;
        }
        self.compose(&derivs).finite("pow", a)
    }

    pub fn sqrt(&self) -> Result<Self, JetError> {
        let a = self.value();
        if !(a > 0.0) {
            return Err(JetError::Domain {
                primitive: "sqrt",
                value: a,
                reason: "requires a positive argument",
            });
        }
        self.powf(0.5).map_err(|_| JetError::NonFinite {
            primitive: "sqrt",
            value: a,
        })
    }

    pub fn sin(&self) -> Result<Self, JetError> {
        let (s, c) = self.value().sin_cos();
        let cycle = [s, c, -s, -c];
        let derivs = std::array::from_fn(|k| cycle[k % 4]);
        self.compose(&derivs).finite("sin", self.value())
    }

    pub fn cos(&self) -> Result<Self, JetError> {
        let (s, c) = self.value().sin_cos();
        let cycle = [c, -s, -c, s];
        let derivs = std::array::from_fn(|k| cycle[k % 4]);
        self.compose(&derivs).finite("cos", self.value())
    }

    pub fn recip(&self) -> Result<Self, JetError> {
        if self.value() == 0.0 {
            return Err(JetError::Domain {
                primitive: "div",
                value: 0.0,
                reason: "denominator vanishes",
            });
        }
        self.powi(-1)
    }

    pub fn try_div(&self, den: &Self) -> Result<Self, JetError> {
        let r = den.recip()?;
        self.leibniz(&r).finite("div", den.value())
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(mut self, rhs: Jet) -> Jet {
        self += rhs;
        self
    }
}

impl AddAssign for Jet {
    fn add_assign(&mut self, rhs: Jet) {
        for (r, o) in self.d.iter_mut().zip(rhs.d.iter()) {
            for (a, b) in r.iter_mut().zip(o.iter()) {
                *a += *b;
            }
        }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        self + (-rhs)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        self.leibniz(&rhs)
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(rhs)
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, rhs: f64) -> Jet {
        self.d[0][0] += rhs;
        self
    }
}
