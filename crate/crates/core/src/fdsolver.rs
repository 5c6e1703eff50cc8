//! Method-of-lines solver for clamped-free beams.
//!
//! Nodes `x_0 .. x_{n+1}` split the domain into `N = n + 1` equal cells;
//! `u_0 = 0` is eliminated and `u_1 .. u_N` are the unknowns. With moments
//! `M_j = EI_j (u_{j+1} − 2u_j + u_{j−1})/dx²`, row `i` of the stiffness
//! operator is
//!
//! `(M_{i+1} − 2M_i + M_{i−1})/dx² − [T_{i+½}(u_{i+1} − u_i) − T_{i−½}(u_i − u_{i−1})]/dx²`.
//!
//! Ghosts: `u_{−1} = u_1` (zero slope at the clamp), `M_N = 0`,
//! `M_{N+1} = M_{N−1}` (zero moment and shear at the free end) and
//! `u_{N+1} = 2u_N − u_{N−1}` in the tension flux. Time integration is
//! average-acceleration Newmark on `M ü = −K u`.

use std::fmt::Write as _;

use thiserror::Error;

use crate::beam_model::{BeamConfig, ClosedFormSolution, CoefficientFn, Domain, ModelError};

pub const MIN_INTERIOR: usize = 16;
pub const NEWMARK_BETA: f64 = 0.25;
pub const NEWMARK_GAMMA: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FdError {
    #[error("grid needs at least {MIN_INTERIOR} interior points, got {0}")]
    GridTooSmall(usize),
    #[error("setup: {0}")]
    Setup(String),
    #[error("linear solve broke down at step {step} (zero pivot in row {row})")]
    Breakdown { step: usize, row: usize },
    #[error("domain mismatch: trajectory on [{a0}, {a1}], solution on [{b0}, {b1}]")]
    DomainMismatch { a0: f64, a1: f64, b0: f64, b1: f64 },
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    /// Interior point count.
    pub n: usize,
    pub dx: f64,
    /// `x_0 .. x_{n+1}`.
    pub points: Vec<f64>,
    pub domain: Domain,
}

impl Grid {
    pub fn new(domain: Domain, n: usize) -> Result<Self, FdError> {
        if n < MIN_INTERIOR {
            return Err(FdError::GridTooSmall(n));
        }
        let cells = n + 1;
        let dx = domain.length() / cells as f64;
        let points = (0..=cells)
            .map(|j| if j == cells { domain.l() } else { domain.x_min() + j as f64 * dx })
            .collect();
        Ok(Self { n, dx, points, domain })
    }

    /// Number of unknowns `u_1 .. u_N`.
    pub fn unknowns(&self) -> usize {
        self.n + 1
    }
}

/// Square matrix with two sub- and two super-diagonals;
/// `rows[i][k]` holds `A[i][i + k − 2]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pentadiagonal {
    rows: Vec<[f64; 5]>,
}

impl Pentadiagonal {
    pub fn zeros(n: usize) -> Self {
        Self { rows: vec![[0.0; 5]; n] }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    /// Entry `(i, j)`; zero outside the band.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let k = j as isize - i as isize + 2;
        if (0..5).contains(&k) {
            self.rows[i][k as usize]
        } else {
            0.0
        }
    }

    /// Adds `v` to `(i, j)`; panics outside the band.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let k = j as isize - i as isize + 2;
        assert!((0..5).contains(&k), "({i}, {j}) outside the band");
        self.rows[i][k as usize] += v;
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.size();
        (0..n)
            .map(|i| {
                let lo = i.saturating_sub(2);
                let hi = (i + 2).min(n - 1);
                (lo..=hi).map(|j| self.rows[i][j + 2 - i] * x[j]).sum()
            })
            .collect()
    }

    /// `self + c·diag(d)`.
    pub fn plus_diagonal(&self, c: f64, d: &[f64]) -> Self {
        let mut out = self.clone();
        for (row, v) in out.rows.iter_mut().zip(d) {
            row[2] += c * v;
        }
        out
    }

    /// `c·self + diag(d)`.
    pub fn scaled_plus_diagonal(&self, c: f64, d: &[f64]) -> Self {
        let mut out = self.clone();
        for (row, v) in out.rows.iter_mut().zip(d) {
            for e in row.iter_mut() {
                *e *= c;
            }
            row[2] += v;
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.rows.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()))
    }

    /// LU without pivoting; `Err(row)` on a zero pivot.
    pub fn factor(&self) -> Result<BandedLu, usize> {
        let n = self.size();
        let mut a = self.rows.clone();
        let scale = self.max_abs();
        for k in 0..n {
            let pivot = a[k][2];
            if !(pivot.abs() > 1e-300 && pivot.abs() > f64::EPSILON * 1e-6 * scale) || !pivot.is_finite() {
                return Err(k);
            }
            for i in k + 1..(k + 3).min(n) {
                let l = a[i][k + 2 - i] / pivot;
                a[i][k + 2 - i] = l;
                for j in k + 1..(k + 3).min(n) {
                    a[i][j + 2 - i] -= l * a[k][j + 2 - k];
                }
            }
        }
        Ok(BandedLu { lu: a })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandedLu {
    lu: Vec<[f64; 5]>,
}

impl BandedLu {
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.lu.len();
        let mut y = b.to_vec();
        for i in 0..n {
            for j in i.saturating_sub(2)..i {
                y[i] -= self.lu[i][j + 2 - i] * y[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..(i + 3).min(n) {
                y[i] -= self.lu[i][j + 2 - i] * y[j];
            }
            y[i] /= self.lu[i][2];
        }
        y
    }
}

/// Discrete stiffness `K` and lumped mass for the unknowns `u_1 .. u_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialOperator {
    pub grid: Grid,
    pub stiffness: Pentadiagonal,
    pub mass: Vec<f64>,
}

impl SpatialOperator {
    /// `K u` for the unknowns.
    pub fn apply(&self, u: &[f64]) -> Vec<f64> {
        self.stiffness.matvec(u)
    }

    /// `K u` for a full nodal vector `u_0 .. u_N` (`u_0` ignored).
    pub fn apply_nodal(&self, u: &[f64]) -> Vec<f64> {
        self.apply(&u[1..])
    }
}

pub fn discretize(config: &BeamConfig, grid: &Grid) -> Result<SpatialOperator, FdError> {
    if config.domain != grid.domain {
        return Err(FdError::Setup("grid and config domains differ".into()));
    }
    let nn = grid.unknowns();
    let dx = grid.dx;
    let x = &grid.points;
    let inv2 = 1.0 / (dx * dx);
    let mut ei = Vec::with_capacity(nn);
    for &xj in &x[..nn] {
        ei.push(config.ei.value(xj)?);
    }
    let mut mass = Vec::with_capacity(nn);
    for &xi in &x[1..=nn] {
        let m = config.m.value(xi)?;
        if !(m > 0.0) {
            return Err(FdError::Setup(format!("mass m = {m} is not positive at x = {xi}")));
        }
        mass.push(m);
    }

    // moment M_j as (column, weight) pairs over unknown indices 1..=N
    let moment = |j: usize| -> Vec<(usize, f64)> {
        let j = if j == nn + 1 { nn - 1 } else { j };
        if j == nn {
            return Vec::new();
        }
        let e = ei[j] * inv2;
        let mut out = Vec::with_capacity(3);
        for (col, w) in [(j as isize - 1, e), (j as isize, -2.0 * e), (j as isize + 1, e)] {
            let col = if col == -1 { 1 } else { col as usize };
            if col != 0 {
                out.push((col, w));
            }
        }
        out
    };

    let mut k = Pentadiagonal::zeros(nn);
    for i in 1..=nn {
        for (j, c) in [(i - 1, 1.0), (i, -2.0), (i + 1, 1.0)] {
            for (col, w) in moment(j) {
                k.add(i - 1, col - 1, c * w * inv2);
            }
        }
        let tp = config.t.value(x[i] + 0.5 * dx)?;
        let tm = config.t.value(x[i] - 0.5 * dx)?;
        for (col, w) in [(i + 1, -tp), (i, tp + tm), (i - 1, -tm)] {
            let w = w * inv2;
            match col {
                0 => {}
                c if c == nn + 1 => {
                    k.add(i - 1, nn - 1, 2.0 * w);
                    k.add(i - 1, nn - 2, -w);
                }
                c => k.add(i - 1, c - 1, w),
            }
        }
    }
    Ok(SpatialOperator {
        grid: grid.clone(),
        stiffness: k,
        mass,
    })
}

/// Static deflection under a tip load `force` at the free end; nodal
/// values `u_0 .. u_N`.
pub fn static_tip_load(config: &BeamConfig, grid: &Grid, force: f64) -> Result<Vec<f64>, FdError> {
    let op = discretize(config, grid)?;
    let nn = grid.unknowns();
    let mut rhs = vec![0.0; nn];
    rhs[nn - 1] = 2.0 * force / grid.dx;
    let lu = op.stiffness.factor().map_err(|row| FdError::Breakdown { step: 0, row })?;
    let mut u = vec![0.0];
    u.extend(lu.solve(&rhs));
    Ok(u)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    /// Nodal displacement `u_0 .. u_N` per time.
    pub states: Vec<Vec<f64>>,
    pub points: Vec<f64>,
    pub domain: Domain,
    pub dt: f64,
    pub scheme: String,
}

impl Trajectory {
    /// Samples a closed-form solution on the grid at `t = k dt`.
    pub fn from_solution(
        sol: &ClosedFormSolution,
        grid: &Grid,
        dt: f64,
        t_end: f64,
    ) -> Result<Self, FdError> {
        let steps = step_count(dt, t_end)?;
        let mut times = Vec::with_capacity(steps + 1);
        let mut states = Vec::with_capacity(steps + 1);
        for s in 0..=steps {
            let t = s as f64 * dt;
            let row = grid.points.iter().map(|&x| sol.value(x, t)).collect::<Result<Vec<_>, _>>()?;
            times.push(t);
            states.push(row);
        }
        Ok(Self {
            times,
            states,
            points: grid.points.clone(),
            domain: grid.domain,
            dt,
            scheme: "exact".into(),
        })
    }

    /// CSV `t,x,u`, every `stride`-th time row.
    pub fn to_csv(&self, stride: usize) -> String {
        let mut out = String::from("t,x,u\n");
        for (t, row) in self.times.iter().zip(&self.states).step_by(stride.max(1)) {
            for (x, u) in self.points.iter().zip(row) {
                let _ = writeln!(out, "{t:.16e},{x:.16e},{u:.16e}");
            }
        }
        let _ = writeln!(out, "# scheme = {}, dt = {:.16e}, steps = {}", self.scheme, self.dt, self.times.len() - 1);
        out
    }
}

fn step_count(dt: f64, t_end: f64) -> Result<usize, FdError> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(FdError::Setup(format!("dt must be positive, got {dt}")));
    }
    if !(t_end >= 0.0) || !t_end.is_finite() {
        return Err(FdError::Setup(format!("t_end must be non-negative, got {t_end}")));
    }
    Ok((t_end / dt).round() as usize)
}

/// Newmark (β = 1/4, γ = 1/2) integration of `M ü = −K u` from nodal
/// initial data `h`, `v0` (length `n + 2`; the clamped node is forced to 0).
pub fn simulate(
    config: &BeamConfig,
    h: &[f64],
    v0: &[f64],
    dt: f64,
    t_end: f64,
    grid: &Grid,
) -> Result<Trajectory, FdError> {
    let nn = grid.unknowns();
    if h.len() != nn + 1 || v0.len() != nn + 1 {
        return Err(FdError::Setup(format!(
            "initial data must have {} nodal values, got {} and {}",
            nn + 1,
            h.len(),
            v0.len()
        )));
    }
    let steps = step_count(dt, t_end)?;
    let op = discretize(config, grid)?;
    let mut u = h[1..].to_vec();
    let mut v = v0[1..].to_vec();
    let ku = op.apply(&u);
    let mut a: Vec<f64> = ku.iter().zip(&op.mass).map(|(k, m)| -k / m).collect();
    let b2 = NEWMARK_BETA * dt * dt;
    let lhs = op.stiffness.scaled_plus_diagonal(b2, &op.mass);
    let lu = lhs.factor().map_err(|row| FdError::Breakdown { step: 0, row })?;

    let nodal = |u: &[f64]| {
        let mut row = Vec::with_capacity(nn + 1);
        row.push(0.0);
        row.extend_from_slice(u);
        row
    };
    let mut times = vec![0.0];
    let mut states = vec![nodal(&u)];
    let mut up = vec![0.0; nn];
    for s in 1..=steps {
        for i in 0..nn {
            up[i] = u[i] + dt * v[i] + dt * dt * (0.5 - NEWMARK_BETA) * a[i];
        }
        let rhs: Vec<f64> = op.apply(&up).into_iter().map(|r| -r).collect();
        let an = lu.solve(&rhs);
        if an.iter().any(|x| !x.is_finite()) {
            return Err(FdError::Breakdown { step: s, row: an.iter().position(|x| !x.is_finite()).unwrap_or(0) });
        }
        for i in 0..nn {
            u[i] = up[i] + b2 * an[i];
            v[i] += dt * ((1.0 - NEWMARK_GAMMA) * a[i] + NEWMARK_GAMMA * an[i]);
        }
        a = an;
        times.push(s as f64 * dt);
        states.push(nodal(&u));
    }
    Ok(Trajectory {
        times,
        states,
        points: grid.points.clone(),
        domain: grid.domain,
        dt,
        scheme: format!("newmark(beta={NEWMARK_BETA}, gamma={NEWMARK_GAMMA})"),
    })
}

/// [`simulate`] with `h` given as a function and zero initial velocity.
pub fn simulate_from(
    config: &BeamConfig,
    h: &CoefficientFn,
    dt: f64,
    t_end: f64,
    grid: &Grid,
) -> Result<Trajectory, FdError> {
    let hv = grid.points.iter().map(|&x| h.value(x)).collect::<Result<Vec<_>, _>>()?;
    simulate(config, &hv, &vec![0.0; hv.len()], dt, t_end, grid)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorRow {
    pub t: f64,
    pub max_abs: f64,
    pub rms: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorTable {
    pub rows: Vec<ErrorRow>,
    /// `max |u_exact|` over the whole run.
    pub amplitude: f64,
    pub max_rel: f64,
    pub rms_rel: f64,
}

pub fn compare(traj: &Trajectory, sol: &ClosedFormSolution, domain: &Domain) -> Result<ErrorTable, FdError> {
    check_domain(traj, domain)?;
    let mut rows = Vec::with_capacity(traj.times.len());
    let (mut amplitude, mut worst, mut sq, mut count) = (0.0f64, 0.0f64, 0.0, 0usize);
    for (&t, state) in traj.times.iter().zip(&traj.states) {
        let (mut row_max, mut row_sq) = (0.0f64, 0.0);
        for (&x, &u) in traj.points.iter().zip(state) {
            let exact = sol.value(x, t)?;
            let e = (u - exact).abs();
            amplitude = amplitude.max(exact.abs());
            row_max = row_max.max(e);
            row_sq += e * e;
        }
        worst = worst.max(row_max);
        sq += row_sq;
        count += state.len();
        rows.push(ErrorRow {
            t,
            max_abs: row_max,
            rms: (row_sq / state.len() as f64).sqrt(),
        });
    }
    let amp = if amplitude > 0.0 { amplitude } else { 1.0 };
    Ok(ErrorTable {
        rows,
        amplitude,
        max_rel: worst / amp,
        rms_rel: (sq / count.max(1) as f64).sqrt() / amp,
    })
}

fn check_domain(traj: &Trajectory, domain: &Domain) -> Result<(), FdError> {
    if traj.domain != *domain {
        return Err(FdError::DomainMismatch {
            a0: traj.domain.x_min(),
            a1: traj.domain.l(),
            b0: domain.x_min(),
            b1: domain.l(),
        });
    }
    Ok(())
}

/// CSV `t,x,u_num,u_exact,abs_err` every `stride`-th time row, with the
/// error summary as trailing comments.
pub fn comparison_csv(
    traj: &Trajectory,
    sol: &ClosedFormSolution,
    domain: &Domain,
    stride: usize,
) -> Result<String, FdError> {
    let table = compare(traj, sol, domain)?;
    let mut out = String::from("t,x,u_num,u_exact,abs_err\n");
    for (&t, state) in traj.times.iter().zip(&traj.states).step_by(stride.max(1)) {
        for (&x, &u) in traj.points.iter().zip(state) {
            let exact = sol.value(x, t)?;
            let _ = writeln!(out, "{t:.16e},{x:.16e},{u:.16e},{exact:.16e},{:.16e}", (u - exact).abs());
        }
    }
    let _ = writeln!(out, "# amplitude = {:.16e}", table.amplitude);
    let _ = writeln!(out, "# max_rel_error = {:.16e}", table.max_rel);
    let _ = writeln!(out, "# rms_rel_error = {:.16e}", table.rms_rel);
    Ok(out)
}
