//! Time evolution of the post-quench state under pure dephasing in the
//! full-trap eigenbasis, density-profile fields `p(x, t)`, and the
//! cross-validating fixed-step integrator.
//!
//! Pure dephasing leaves populations untouched while each coherence
//! rotates at `omega_mn = (m^2 - n^2) alpha / hbar` and decays at its rate
//! `Gamma_mn`, so the propagated state has the closed form
//! `rho_mn(t) = rho_mn(0) exp(-i omega_mn t - Gamma_mn t)`. The generator
//! behind it is the completely positive dephasing semigroup with projector
//! jump operators; [`evolve_integrator`] integrates that generator
//! directly and exists to validate the closed form (and to host future
//! non-commuting extensions).

use nalgebra::{Complex, DMatrix};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::config::TrapConfig;
use crate::error::{CoreError, Result};
use crate::quench::{build_truncated_quench_state, QuenchState};
use crate::spectral::SpectralBasis;

/// Default truncation for dynamics (dense matrices; sweeps use the much
/// larger diagonal-only truncations instead).
pub const DEFAULT_DYNAMICS_N_MAX: usize = 128;

/// Coherence decay rates of the dephasing channel.
///
/// The default model is a single uniform rate for every pair; arbitrary
/// symmetric non-negative per-pair rates are supported for rate-structured
/// baths.
#[derive(Debug, Clone)]
pub struct DephasingModel {
    kind: RateKind,
}

#[derive(Debug, Clone)]
enum RateKind {
    Uniform(f64),
    PerPair(DMatrix<f64>),
}

impl DephasingModel {
    /// Uniform rate `Gamma_mn = gamma` for all `m != n`.
    pub fn uniform(gamma: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma >= 0.0) {
            return Err(CoreError::Domain(format!(
                "dephasing rate must be finite and >= 0, got {gamma}"
            )));
        }
        Ok(Self { kind: RateKind::Uniform(gamma) })
    }

    /// Explicit symmetric rate matrix; the diagonal is ignored (populations
    /// never decay under pure dephasing).
    pub fn with_pair_rates(rates: DMatrix<f64>) -> Result<Self> {
        if !rates.is_square() {
            return Err(CoreError::Domain("rate matrix must be square".into()));
        }
        for i in 0..rates.nrows() {
            for j in 0..rates.ncols() {
                let g = rates[(i, j)];
                if !(g.is_finite() && g >= 0.0) {
                    return Err(CoreError::Domain(format!(
                        "rate matrix entry ({i},{j}) = {g} must be finite and >= 0"
                    )));
                }
                if (rates[(i, j)] - rates[(j, i)]).abs() > 1e-12 {
                    return Err(CoreError::Domain(format!(
                        "rate matrix must be symmetric; mismatch at ({i},{j})"
                    )));
                }
            }
        }
        Ok(Self { kind: RateKind::PerPair(rates) })
    }

    /// Decay rate of the `(m, n)` coherence (1-indexed); zero on the
    /// diagonal.
    pub fn rate(&self, m: usize, n: usize) -> f64 {
        if m == n {
            return 0.0;
        }
        match &self.kind {
            RateKind::Uniform(g) => *g,
            RateKind::PerPair(mat) => mat[(m - 1, n - 1)],
        }
    }

    /// Largest rate among the first `n_max` levels.
    pub fn max_rate(&self, n_max: usize) -> f64 {
        match &self.kind {
            RateKind::Uniform(g) => *g,
            RateKind::PerPair(mat) => {
                let n = n_max.min(mat.nrows());
                let mut worst: f64 = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        if i != j {
                            worst = worst.max(mat[(i, j)]);
                        }
                    }
                }
                worst
            }
        }
    }

    fn check_dimension(&self, n_max: usize) -> Result<()> {
        if let RateKind::PerPair(mat) = &self.kind {
            if mat.nrows() < n_max {
                return Err(CoreError::Config(format!(
                    "rate matrix covers {} levels but the state has {n_max}",
                    mat.nrows()
                )));
            }
        }
        Ok(())
    }
}

/// Propagates the state to time `t` (physical units) by the closed-form
/// solution: populations unchanged, coherence `(m, n)` multiplied by
/// `exp(-i omega_mn t - Gamma_mn t)`.
pub fn evolve_closed_form(
    state: &QuenchState,
    model: &DephasingModel,
    t: f64,
) -> Result<QuenchState> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(CoreError::Domain(format!("time must be finite and >= 0, got {t}")));
    }
    let n = state.n_max();
    model.check_dimension(n)?;
    let basis = state.basis();
    let hbar = basis.config().hbar();
    let rho0 = state.rho();
    let mut rho = rho0.clone();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let decay = model.rate(i + 1, j + 1) * t;
            let amp = (-decay).exp();
            rho[(i, j)] = if amp == 0.0 {
                Complex::new(0.0, 0.0)
            } else {
                let omega = (basis.energy(i + 1) - basis.energy(j + 1)) / hbar;
                rho0[(i, j)] * Complex64::from_polar(amp, -omega * t)
            };
        }
    }
    Ok(QuenchState::from_parts(
        basis.clone(),
        rho,
        state.temperature_tag(),
        state.trace_deficit(),
    ))
}

/// Classical fixed-step 4th-order integration of
/// `d rho/dt = -(i/hbar)[H, rho] + D[rho]`, with `D` the projector-jump
/// pure-dephasing dissipator whose coherence decay rates are `Gamma_mn`
/// (entrywise, `D[rho]_mn = -Gamma_mn rho_mn` off the diagonal and zero on
/// it).
///
/// Guards: `dt * max(omega_mn, Gamma_mn) <= 0.1`, and the trace may not
/// drift by more than 1e-7 over the run.
pub fn evolve_integrator(
    state: &QuenchState,
    model: &DephasingModel,
    t_end: f64,
    dt: f64,
) -> Result<QuenchState> {
    if !(t_end.is_finite() && t_end >= 0.0) {
        return Err(CoreError::Domain(format!("t_end must be finite and >= 0, got {t_end}")));
    }
    if !(dt.is_finite() && dt > 0.0) {
        return Err(CoreError::Config(format!("dt must be finite and > 0, got {dt}")));
    }
    let n = state.n_max();
    model.check_dimension(n)?;
    let basis = state.basis();
    let hbar = basis.config().hbar();
    let omega_max = (basis.energy(n) - basis.energy(1)) / hbar;
    let stiffest = omega_max.max(model.max_rate(n));
    if dt * stiffest > 0.1 + 1e-12 {
        return Err(CoreError::Config(format!(
            "step-size guard violated: dt * max(omega, Gamma) = {:.3e} > 0.1",
            dt * stiffest
        )));
    }

    // generator is entrywise linear: G_mn = -i omega_mn - Gamma_mn
    let mut gen = DMatrix::<Complex64>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let omega = (basis.energy(i + 1) - basis.energy(j + 1)) / hbar;
                gen[(i, j)] = Complex::new(-model.rate(i + 1, j + 1), -omega);
            }
        }
    }
    let rhs = |r: &DMatrix<Complex64>| r.component_mul(&gen);

    let mut rho = state.rho().clone();
    let trace0 = state.trace();
    let steps = (t_end / dt).floor() as u64;
    let remainder = t_end - (steps as f64) * dt;
    for _ in 0..steps {
        rk4_step(&mut rho, dt, &rhs);
    }
    if remainder > 0.0 {
        rk4_step(&mut rho, remainder, &rhs);
    }

    let evolved = QuenchState::from_parts(
        basis.clone(),
        rho,
        state.temperature_tag(),
        state.trace_deficit(),
    );
    let drift = (evolved.trace() - trace0).abs();
    if drift > 1e-7 {
        return Err(CoreError::Integration(format!(
            "trace drifted by {drift:.3e} over {t_end} time units"
        )));
    }
    Ok(evolved)
}

fn rk4_step<F>(rho: &mut DMatrix<Complex64>, dt: f64, rhs: &F)
where
    F: Fn(&DMatrix<Complex64>) -> DMatrix<Complex64>,
{
    let half = Complex::new(0.5 * dt, 0.0);
    let two = Complex::new(2.0, 0.0);
    let k1 = rhs(rho);
    let k2 = rhs(&(&*rho + &k1 * half));
    let k3 = rhs(&(&*rho + &k2 * half));
    let k4 = rhs(&(&*rho + &k3 * Complex::new(dt, 0.0)));
    let sixth = Complex::new(dt / 6.0, 0.0);
    *rho += (k1 + k2 * two + k3 * two + k4) * sixth;
}

/// Position density `p(x) = <x|rho|x> = sum_mn Re[rho_mn] psi_m(x) psi_n(x)`
/// sampled on `xs`; positions must lie inside the trap `[-L/2, L/2]`.
pub fn density_profile(state: &QuenchState, xs: &[f64]) -> Result<Vec<f64>> {
    let basis = state.basis();
    let half_l = 0.5 * basis.config().length();
    for &x in xs {
        if !(x.is_finite() && x.abs() <= half_l) {
            return Err(CoreError::Domain(format!(
                "position {x} outside the trap [-{half_l}, {half_l}]"
            )));
        }
    }
    let n = state.n_max();
    let rho = state.rho();
    let mut out = Vec::with_capacity(xs.len());
    let mut psi = vec![0.0; n];
    for &x in xs {
        for m in 1..=n {
            psi[m - 1] = basis.eigenfunction(m, x);
        }
        let mut re = 0.0;
        let mut im = 0.0;
        for i in 0..n {
            let mut row_re = 0.0;
            let mut row_im = 0.0;
            for j in 0..n {
                let c = rho[(i, j)];
                row_re += c.re * psi[j];
                row_im += c.im * psi[j];
            }
            re += psi[i] * row_re;
            im += psi[i] * row_im;
        }
        // Hermiticity cancels the imaginary part exactly
        if im.abs() > 1e-10 {
            return Err(CoreError::Integration(format!(
                "density picked up imaginary weight {im:.3e}; state is not Hermitian"
            )));
        }
        out.push(clamp_density(re));
    }
    Ok(out)
}

/// Density of a diagonal ensemble, `p(x) = sum_m d_m psi_m(x)^2`; serves
/// both the dephased steady state and thermal equilibrium references.
pub fn diagonal_profile(cfg: &TrapConfig, occupations: &[f64], xs: &[f64]) -> Result<Vec<f64>> {
    let basis = SpectralBasis::new(cfg.clone(), occupations.len().max(4))?;
    let half_l = 0.5 * cfg.length();
    for &x in xs {
        if !(x.is_finite() && x.abs() <= half_l) {
            return Err(CoreError::Domain(format!(
                "position {x} outside the trap [-{half_l}, {half_l}]"
            )));
        }
    }
    let mut out = Vec::with_capacity(xs.len());
    for &x in xs {
        let mut p = 0.0;
        for (i, &d) in occupations.iter().enumerate() {
            if d != 0.0 {
                let v = basis.eigenfunction(i + 1, x);
                p += d * v * v;
            }
        }
        out.push(clamp_density(p));
    }
    Ok(out)
}

fn clamp_density(p: f64) -> f64 {
    // quadratic form of a PSD matrix; only rounding can push it negative
    if p < 0.0 && p > -1e-10 {
        0.0
    } else {
        p
    }
}

/// Sampled density-profile field `p[i][j] = p(x_i, t_j)`.
#[derive(Debug, Clone)]
pub struct ProfileGrid {
    x: Vec<f64>,
    times: Vec<f64>,
    p: DMatrix<f64>,
    warnings: Vec<String>,
}

impl ProfileGrid {
    pub fn x(&self) -> &[f64] {
        &self.x
    }

    /// Sample times in units of `hbar/alpha`.
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.p[(i, j)]
    }

    /// Density slice at time index `j`.
    pub fn slice(&self, j: usize) -> Vec<f64> {
        self.p.column(j).iter().cloned().collect()
    }

    /// Trapezoid integral of the slice at time index `j`.
    pub fn slice_norm(&self, j: usize) -> f64 {
        trapezoid(&self.x, self.p.column(j).as_slice())
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }
}

/// Trapezoid rule on an arbitrary sorted grid.
pub fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    let mut s = 0.0;
    for i in 1..x.len() {
        s += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
    }
    s
}

/// Samples `p(x, t)` over the requested time windows with the closed-form
/// evolution. Window bounds are in units of `hbar/alpha` so the bounce-
/// and-spread phenomenology lands at the same times for any `L`, `M`.
///
/// The `nx` positions span the closed trap `[-L/2, L/2]` (walls included,
/// where the density vanishes); each window carries `nt` slices. A time
/// step too coarse for the fastest retained coherence records a Nyquist
/// warning in the grid metadata rather than failing.
pub fn dynamics_movie(
    cfg: &TrapConfig,
    model: &DephasingModel,
    windows: &[(f64, f64)],
    nx: usize,
    nt: usize,
    n_max: Option<usize>,
) -> Result<ProfileGrid> {
    if windows.is_empty() {
        return Err(CoreError::Config("no time windows requested".into()));
    }
    for (i, &(a, b)) in windows.iter().enumerate() {
        if !(a.is_finite() && b.is_finite() && a >= 0.0 && b > a) {
            return Err(CoreError::Config(format!("bad window ({a}, {b})")));
        }
        if i > 0 && a < windows[i - 1].1 {
            return Err(CoreError::Config("windows must be non-overlapping and increasing".into()));
        }
    }
    if nx < 3 || nt < 2 {
        return Err(CoreError::Config(format!("grid too small: nx={nx}, nt={nt}")));
    }
    let n = n_max.unwrap_or(DEFAULT_DYNAMICS_N_MAX);
    let state = build_truncated_quench_state(cfg, n)?;
    let time_unit = cfg.hbar() / cfg.alpha();

    let half_l = 0.5 * cfg.length();
    let x: Vec<f64> =
        (0..nx).map(|i| -half_l + (i as f64) * cfg.length() / ((nx - 1) as f64)).collect();
    let mut times = Vec::with_capacity(windows.len() * nt);
    for &(a, b) in windows {
        for j in 0..nt {
            times.push(a + (j as f64) * (b - a) / ((nt - 1) as f64));
        }
    }

    let mut warnings = Vec::new();
    let omega_max_scaled = ((n * n - 1) as f64) * 1.0; // (n^2 - 1) per unit of hbar/alpha
    let dt_sample = windows.iter().map(|&(a, b)| (b - a) / ((nt - 1) as f64)).fold(f64::MAX, f64::min);
    if dt_sample * omega_max_scaled > std::f64::consts::PI {
        warnings.push(format!(
            "time sampling undersamples the fastest coherence: dt={dt_sample:.3e} \
             exceeds the Nyquist step {:.3e}",
            std::f64::consts::PI / omega_max_scaled
        ));
    }

    // basis functions on the grid, reused across slices
    let basis = state.basis();
    let mut psi = DMatrix::<f64>::zeros(n, nx);
    for m in 1..=n {
        for (i, &xv) in x.iter().enumerate() {
            psi[(m - 1, i)] = basis.eigenfunction(m, xv);
        }
    }

    let columns: Result<Vec<Vec<f64>>> = times
        .par_iter()
        .map(|&tau| {
            let evolved = evolve_closed_form(&state, model, tau * time_unit)?;
            let a = evolved.rho().map(|c| c.re);
            let b = &a * &psi;
            let col: Vec<f64> = (0..nx)
                .map(|i| clamp_density(psi.column(i).dot(&b.column(i))))
                .collect();
            Ok(col)
        })
        .collect();
    let columns = columns?;

    let mut p = DMatrix::<f64>::zeros(nx, times.len());
    for (j, col) in columns.iter().enumerate() {
        for (i, &v) in col.iter().enumerate() {
            p[(i, j)] = v;
        }
    }
    Ok(ProfileGrid { x, times, p, warnings })
}
