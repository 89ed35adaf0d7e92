//! Von Neumann entropies and the thermodynamic bookkeeping of free vs
//! isothermal expansion: entropy-change sweeps over `L/lambda_T` and
//! entropy-energy curves over temperature.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::config::TrapConfig;
use crate::error::{CoreError, Result};
use crate::quench::{diagonal_distribution, select_n_max};
use crate::spectral::{thermal_entropy, thermal_entropy_capped, BoltzmannWeights, TrapVariant};

/// Eigenvalues smaller than this are treated as exact zeros of the
/// spectrum (`0 ln 0 := 0`).
const EIGENVALUE_CLAMP: f64 = 1e-14;
/// Most negative eigenvalue still attributed to rounding.
const NEGATIVITY_TOL: f64 = -1e-8;

/// Von Neumann entropy `-sum lambda_i ln lambda_i` of a density matrix,
/// in units of `k_B`.
///
/// Expects a Hermitian, unit-trace, PSD matrix up to tolerance; an
/// eigenvalue below `-1e-8` is a positivity violation.
pub fn entropy(rho: &DMatrix<Complex64>) -> Result<f64> {
    if !rho.is_square() {
        return Err(CoreError::Domain("density matrix must be square".into()));
    }
    let eigenvalues = rho.clone().symmetric_eigenvalues();
    let mut s = 0.0;
    for &lambda in eigenvalues.iter() {
        if lambda < NEGATIVITY_TOL {
            return Err(CoreError::Positivity(lambda));
        }
        if lambda >= EIGENVALUE_CLAMP {
            s -= lambda * lambda.ln();
        }
    }
    Ok(s)
}

/// Entropy of an already-diagonal state, `-sum d_m ln d_m`; the fast path
/// that avoids the eigendecomposition.
pub fn entropy_diagonal(d: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &p in d {
        if p < -1e-12 {
            return Err(CoreError::Domain(format!("negative probability {p:.3e}")));
        }
        if p > 0.0 {
            s -= p * p.ln();
        }
    }
    Ok(s)
}

/// Entropy change of the dephased free expansion,
/// `S_f - S_i = H(D) - H(p_thermal)`, in units of `k_B`.
///
/// `n_max = None` selects the truncation by the tail rule of
/// [`select_n_max`]; at `T = 0` the initial entropy is exactly zero.
pub fn delta_s_free_expansion(cfg: &TrapConfig, n_max: Option<usize>) -> Result<f64> {
    let n = n_max.unwrap_or_else(|| select_n_max(cfg));
    let dist = diagonal_distribution(cfg, n)?;
    let s_f = entropy_diagonal(dist.probabilities())?;
    let s_i = thermal_entropy(cfg, TrapVariant::Half);
    Ok(s_f - s_i)
}

/// Entropy change of the isothermal expansion: equilibrium entropy of the
/// full trap minus that of the half trap, both at the configured
/// temperature. Zero at `T = 0` (the atom stays frozen in the ground
/// state).
pub fn delta_s_isothermal(cfg: &TrapConfig, n_max: Option<usize>) -> Result<f64> {
    let s_full = thermal_entropy_capped(cfg, TrapVariant::Full, n_max);
    let s_half = thermal_entropy_capped(cfg, TrapVariant::Half, n_max);
    Ok(s_full - s_half)
}

/// Tabulated entropy changes along a grid of `L/lambda_T` ratios.
#[derive(Debug, Clone)]
pub struct SweepResult {
    /// The ratio grid, strictly increasing.
    pub axis: Vec<f64>,
    /// Free-expansion entropy change per ratio, units of `k_B`.
    pub ds_fe: Vec<f64>,
    /// Isothermal entropy change per ratio, units of `k_B`.
    pub ds_iso: Vec<f64>,
    pub meta: SweepMeta,
}

/// Provenance of a sweep: the base configuration and any per-point
/// diagnostics (failed points are recorded as NaN, never dropped).
#[derive(Debug, Clone)]
pub struct SweepMeta {
    pub base: TrapConfig,
    pub n_max: Option<usize>,
    pub diagnostics: Vec<String>,
}

/// Sweeps both entropy changes over `L/lambda_T` by varying the trap size
/// at fixed temperature: each grid point evaluates `L = ratio * lambda_T`.
///
/// Per-point failures are recorded as NaN entries plus a diagnostic
/// message; the sweep itself only fails on an invalid grid.
pub fn sweep_ratio(
    cfg_base: &TrapConfig,
    ratios: &[f64],
    n_max: Option<usize>,
) -> Result<SweepResult> {
    if ratios.is_empty() {
        return Err(CoreError::Config("ratio grid is empty".into()));
    }
    if !ratios.iter().all(|r| r.is_finite() && *r > 0.0) {
        return Err(CoreError::Config("ratios must be finite and positive".into()));
    }
    if !ratios.windows(2).all(|w| w[1] > w[0]) {
        return Err(CoreError::Config("ratios must be strictly increasing".into()));
    }
    if cfg_base.is_zero_temperature() {
        return Err(CoreError::Config(
            "ratio sweep varies L at fixed T and needs T > 0".into(),
        ));
    }
    let lambda = cfg_base.thermal_wavelength();
    // each point is pure; evaluate in parallel, assemble in axis order
    let points: Vec<_> = ratios
        .par_iter()
        .map(|&r| {
            cfg_base.with_length(r * lambda).and_then(|cfg| {
                Ok((delta_s_free_expansion(&cfg, n_max)?, delta_s_isothermal(&cfg, n_max)?))
            })
        })
        .collect();
    let mut ds_fe = Vec::with_capacity(ratios.len());
    let mut ds_iso = Vec::with_capacity(ratios.len());
    let mut diagnostics = Vec::new();
    for (&r, point) in ratios.iter().zip(points) {
        match point {
            Ok((fe, iso)) => {
                ds_fe.push(fe);
                ds_iso.push(iso);
            }
            Err(e) => {
                ds_fe.push(f64::NAN);
                ds_iso.push(f64::NAN);
                diagnostics.push(format!("ratio {r}: {e}"));
            }
        }
    }
    Ok(SweepResult {
        axis: ratios.to_vec(),
        ds_fe,
        ds_iso,
        meta: SweepMeta { base: cfg_base.clone(), n_max, diagnostics },
    })
}

/// Which process an entropy-energy curve describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    /// Energy conserved at its pre-quench value, entropy of the dephased
    /// occupation distribution.
    FreeExpansion,
    /// Full-trap canonical equilibrium at each temperature.
    Equilibrium,
}

/// An `S(T) ~ E(T)` relation sampled over a temperature grid; energies in
/// units of `alpha`, entropies in units of `k_B`.
#[derive(Debug, Clone)]
pub struct SECurve {
    pub temperatures: Vec<f64>,
    pub energy: Vec<f64>,
    pub entropy: Vec<f64>,
    pub kind: CurveKind,
}

/// Entropy-energy curves at fixed trap size over a temperature grid:
/// the free-expansion curve pairs the conserved post-quench energy with
/// the dephased entropy, the equilibrium curve pairs the full-trap
/// canonical energy and entropy. The `T = 0` rows are the exact limits
/// `(4 alpha, 1.035 k_B)` and `(alpha, 0)`.
pub fn se_curves(
    cfg_base: &TrapConfig,
    temps: &[f64],
    n_max: Option<usize>,
) -> Result<(SECurve, SECurve)> {
    if temps.is_empty() {
        return Err(CoreError::Config("temperature grid is empty".into()));
    }
    if !temps.iter().all(|t| t.is_finite() && *t >= 0.0) {
        return Err(CoreError::Config("temperatures must be finite and non-negative".into()));
    }
    if !temps.windows(2).all(|w| w[1] > w[0]) {
        return Err(CoreError::Config("temperatures must be strictly increasing".into()));
    }
    let rows: Vec<Result<[f64; 4]>> = temps
        .par_iter()
        .map(|&t| {
            let cfg = cfg_base.with_temperature(t)?;
            let half = BoltzmannWeights::new(TrapVariant::Half.exponent_coeff(&cfg));
            let n = n_max.unwrap_or_else(|| select_n_max(&cfg));
            let s_fe = entropy_diagonal(diagonal_distribution(&cfg, n)?.probabilities())?;
            let full = BoltzmannWeights::new(TrapVariant::Full.exponent_coeff(&cfg));
            Ok([4.0 * half.mean_sq(), s_fe, full.mean_sq(), full.entropy()])
        })
        .collect();
    let mut fe = SECurve {
        temperatures: temps.to_vec(),
        energy: Vec::with_capacity(temps.len()),
        entropy: Vec::with_capacity(temps.len()),
        kind: CurveKind::FreeExpansion,
    };
    let mut eq = SECurve {
        temperatures: temps.to_vec(),
        energy: Vec::with_capacity(temps.len()),
        entropy: Vec::with_capacity(temps.len()),
        kind: CurveKind::Equilibrium,
    };
    for row in rows {
        let [e_fe, s_fe, e_eq, s_eq] = row?;
        fe.energy.push(e_fe);
        fe.entropy.push(s_fe);
        eq.energy.push(e_eq);
        eq.entropy.push(s_eq);
    }
    Ok((fe, eq))
}
