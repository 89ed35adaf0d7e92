//! Exact eigenstructure of the half-size and full-size square traps,
//! quench overlap coefficients, the partition function, and equilibrium
//! thermal quantities.
//!
//! Conventions, fixed once for the whole crate:
//!
//! * full trap on `(-L/2, L/2)`: `psi_m(x) = sqrt(2/L) sin(m pi (x + L/2)/L)`
//!   with energy `E_m = m^2 alpha`;
//! * half trap on `(-L/2, 0)`: `phi_n(x) = sqrt(4/L) sin(2 pi n x / L)` with
//!   energy `E_n = 4 n^2 alpha`.
//!
//! The overlap `<psi_m | phi_n>` then has the closed form implemented in
//! [`overlap`]: `(-1)^n / sqrt(2)` at the resonance `m = 2n`, zero for every
//! other even `m`, and `(-1)^{(m-1)/2} 4 sqrt(2) n / (pi (m^2 - 4 n^2))` for
//! odd `m`.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use crate::config::TrapConfig;
use crate::error::{CoreError, Result};

/// Relative cutoff for Boltzmann weight tails. Terms this far below the
/// leading weight are beneath f64 resolution of the normalized sums.
const WEIGHT_CUTOFF: f64 = 1e-18;

/// Which of the two traps an equilibrium quantity refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrapVariant {
    /// Pre-expansion trap of size `L/2`, spectrum `4 n^2 alpha`.
    Half,
    /// Post-expansion trap of size `L`, spectrum `m^2 alpha`.
    Full,
}

impl TrapVariant {
    /// Coefficient `c` in the Boltzmann exponent `exp(-c n^2)`.
    pub(crate) fn exponent_coeff(self, cfg: &TrapConfig) -> f64 {
        match self {
            TrapVariant::Half => cfg.q(),
            TrapVariant::Full => cfg.q() / 4.0,
        }
    }
}

/// Gibbs weights `w_n = exp(-c (n^2 - 1))` in the shifted representation
/// that stays finite for arbitrarily large `c` (the leading weight is
/// exactly 1). At `c = +inf` the vector degenerates to `[1]`, which is the
/// exact zero-temperature point mass; no dedicated branch divides by a
/// vanishing partition function.
#[derive(Debug, Clone)]
pub(crate) struct BoltzmannWeights {
    weights: Vec<f64>,
    total: f64,
}

impl BoltzmannWeights {
    pub(crate) fn new(coeff: f64) -> Self {
        Self::with_cap(coeff, usize::MAX)
    }

    pub(crate) fn with_cap(coeff: f64, cap: usize) -> Self {
        assert!(coeff > 0.0, "exponent coefficient must be positive");
        let mut weights = vec![1.0];
        if coeff.is_finite() {
            let mut n = 2u64;
            while weights.len() < cap {
                let w = (-coeff * ((n * n - 1) as f64)).exp();
                if w < WEIGHT_CUTOFF {
                    break;
                }
                weights.push(w);
                n += 1;
            }
        }
        let total = weights.iter().sum();
        Self { weights, total }
    }

    pub(crate) fn len(&self) -> usize {
        self.weights.len()
    }

    /// Occupation probability of level `n` (1-indexed); zero beyond the
    /// retained support.
    pub(crate) fn occupation(&self, n: usize) -> f64 {
        if n == 0 || n > self.weights.len() {
            0.0
        } else {
            self.weights[n - 1] / self.total
        }
    }

    /// `(n, p_n)` pairs over the retained support.
    pub(crate) fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.weights.iter().enumerate().map(|(i, w)| (i + 1, w / self.total))
    }

    /// The truncated partition sum in the shifted representation,
    /// `Z e^{c}`.
    pub(crate) fn normalizer(&self) -> f64 {
        self.total
    }

    /// `<n^2>` over the retained support.
    pub(crate) fn mean_sq(&self) -> f64 {
        let s: f64 = self
            .weights
            .iter()
            .enumerate()
            .map(|(i, w)| ((i + 1) * (i + 1)) as f64 * w)
            .sum();
        s / self.total
    }

    /// Shannon entropy `-sum p_n ln p_n` of the occupations.
    pub(crate) fn entropy(&self) -> f64 {
        let mut s = 0.0;
        for w in &self.weights {
            let p = w / self.total;
            if p > 0.0 {
                s -= p * p.ln();
            }
        }
        s
    }
}

/// Partition function `Z(q) = sum_{n>=1} exp(-q n^2)`, truncated once the
/// next term falls below `tol` relative to the partial sum.
///
/// Matches `(theta_3(0, e^{-q}) - 1)/2`. Underflows to zero for `q`
/// beyond roughly 745; the thermal routines use the shifted weights of
/// [`BoltzmannWeights`] in that regime instead.
pub fn partition_function(q: f64, tol: f64) -> Result<f64> {
    if q.is_nan() || q <= 0.0 {
        return Err(CoreError::Domain(format!(
            "partition function needs q > 0, got {q} (is T or L non-positive?)"
        )));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(CoreError::Domain(format!("tolerance must be > 0, got {tol}")));
    }
    let mut sum = 0.0;
    let mut n = 1u64;
    loop {
        let term = (-q * ((n * n) as f64)).exp();
        sum += term;
        if term <= tol * sum || term == 0.0 {
            break;
        }
        n += 1;
    }
    Ok(sum)
}

/// Overlap `<psi_m | phi_n>` between full-trap eigenfunction `m` and
/// half-trap eigenfunction `n` for the exact size-doubling geometry.
///
/// Real by convention; `overlap^2 = 1/2` at `m = 2n`, zero for other even
/// `m`, and `32 n^2 / (pi^2 (m^2 - 4 n^2)^2)` when squared for odd `m`.
pub fn overlap(m: usize, n: usize) -> Result<f64> {
    if m == 0 || n == 0 {
        return Err(CoreError::Domain(format!("overlap indices must be >= 1, got m={m} n={n}")));
    }
    if m % 2 == 0 {
        if m == 2 * n {
            // (-1)^n / sqrt(2)
            Ok(if n % 2 == 0 { FRAC_1_SQRT_2 } else { -FRAC_1_SQRT_2 })
        } else {
            Ok(0.0)
        }
    } else {
        // m odd: m^2 - 4n^2 is odd, never zero
        let diff = (m * m) as f64 - 4.0 * ((n * n) as f64);
        let sign = if ((m - 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
        Ok(sign * 4.0 * SQRT_2 * (n as f64) / (PI * diff))
    }
}

/// Equilibrium occupations `p_n = exp(-c n^2)/Z` for the selected trap at
/// the configured temperature, `c = q` (half) or `q/4` (full).
///
/// Returns a vector of length `basis_size`, padded with exact zeros past
/// the thermal support. Zero temperature yields a point mass on `n = 1`.
/// If `basis_size` cannot hold the occupied support to within `1e-12`
/// total mass, a truncation error reports the size that can.
pub fn thermal_occupations(
    cfg: &TrapConfig,
    basis_size: usize,
    variant: TrapVariant,
) -> Result<Vec<f64>> {
    if basis_size == 0 {
        return Err(CoreError::Domain("basis_size must be >= 1".into()));
    }
    let weights = BoltzmannWeights::new(variant.exponent_coeff(cfg));
    if basis_size < weights.len() {
        let deficit: f64 = (basis_size + 1..=weights.len()).map(|n| weights.occupation(n)).sum();
        if deficit > 1e-12 {
            return Err(CoreError::Truncation {
                deficit,
                tolerance: 1e-12,
                suggested: weights.len(),
            });
        }
    }
    let mut p = vec![0.0; basis_size];
    for (n, pn) in weights.iter().take(basis_size) {
        p[n - 1] = pn;
    }
    Ok(p)
}

/// Equilibrium occupations over the entire converged thermal support,
/// sized automatically (length 1 at `T = 0`).
pub fn thermal_support(cfg: &TrapConfig, variant: TrapVariant) -> Vec<f64> {
    BoltzmannWeights::new(variant.exponent_coeff(cfg)).iter().map(|(_, p)| p).collect()
}

/// Equilibrium mean energy of the selected trap by direct weighted sum;
/// at `T = 0` this is the ground energy (`4 alpha` half, `alpha` full).
pub fn internal_energy(cfg: &TrapConfig, variant: TrapVariant) -> f64 {
    let weights = BoltzmannWeights::new(variant.exponent_coeff(cfg));
    let scale = match variant {
        TrapVariant::Half => 4.0,
        TrapVariant::Full => 1.0,
    };
    scale * weights.mean_sq() * cfg.alpha()
}

/// Equilibrium entropy `-sum p_n ln p_n` of the selected trap, in units
/// of `k_B`.
pub(crate) fn thermal_entropy(cfg: &TrapConfig, variant: TrapVariant) -> f64 {
    BoltzmannWeights::new(variant.exponent_coeff(cfg)).entropy()
}

pub(crate) fn thermal_entropy_capped(
    cfg: &TrapConfig,
    variant: TrapVariant,
    cap: Option<usize>,
) -> f64 {
    match cap {
        None => thermal_entropy(cfg, variant),
        Some(c) => BoltzmannWeights::with_cap(variant.exponent_coeff(cfg), c.max(1)).entropy(),
    }
}

/// Truncated eigenbasis of the post-expansion (full-size) trap with
/// position-space evaluators.
#[derive(Debug, Clone)]
pub struct SpectralBasis {
    n_max: usize,
    energies: Vec<f64>,
    config: TrapConfig,
}

impl SpectralBasis {
    /// A basis truncated at `n_max >= 4` levels (below that the even/odd
    /// split of the quench distribution has no content).
    pub fn new(config: TrapConfig, n_max: usize) -> Result<Self> {
        if n_max < 4 {
            return Err(CoreError::Domain(format!("n_max must be >= 4, got {n_max}")));
        }
        let alpha = config.alpha();
        // closed form m^2 alpha, never accumulated
        let energies = (1..=n_max).map(|m| ((m * m) as f64) * alpha).collect();
        Ok(Self { n_max, energies, config })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn config(&self) -> &TrapConfig {
        &self.config
    }

    /// Energies `m^2 alpha`, `m = 1..=n_max`.
    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// Energy of level `m` (1-indexed).
    pub fn energy(&self, m: usize) -> f64 {
        self.energies[m - 1]
    }

    /// Full-trap eigenfunction `psi_m(x)`; zero outside `[-L/2, L/2]`.
    pub fn eigenfunction(&self, m: usize, x: f64) -> f64 {
        let l = self.config.length();
        if x < -0.5 * l || x > 0.5 * l {
            return 0.0;
        }
        (2.0 / l).sqrt() * ((m as f64) * PI * (x + 0.5 * l) / l).sin()
    }
}
