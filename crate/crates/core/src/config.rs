//! Trap geometry, physical constants, and derived quench parameters.

use std::f64::consts::PI;

use crate::error::{CoreError, Result};

/// Physical configuration of the expansion setup: a particle of mass `M`
/// in a 1D square trap of final size `L`, prepared at temperature `T` in
/// the left half of the trap.
///
/// Every derived scale used elsewhere comes from this struct, so all
/// modules agree on units:
///
/// * `alpha = pi^2 hbar^2 / (2 M L^2)`, the full-trap ground energy,
/// * `q = 4 alpha / (k_B T)`, the dimensionless quench parameter
///   (`+inf` at `T = 0`),
/// * `lambda_T = h (2 pi M k_B T)^{-1/2}` with `h = 2 pi hbar`, the
///   thermal de Broglie wavelength.
///
/// With these definitions `q = pi (lambda_T / L)^2` holds identically.
/// Defaults are natural units, `hbar = k_B = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrapConfig {
    length: f64,
    mass: f64,
    temperature: f64,
    hbar: f64,
    k_b: f64,
}

impl TrapConfig {
    /// Configuration in natural units (`hbar = k_B = 1`).
    pub fn new(length: f64, mass: f64, temperature: f64) -> Result<Self> {
        Self::with_constants(length, mass, temperature, 1.0, 1.0)
    }

    /// Configuration with explicit values of `hbar` and `k_B`.
    pub fn with_constants(
        length: f64,
        mass: f64,
        temperature: f64,
        hbar: f64,
        k_b: f64,
    ) -> Result<Self> {
        fn check_pos(name: &str, v: f64) -> Result<()> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(CoreError::Domain(format!("{name} must be finite and > 0, got {v}")))
            }
        }
        check_pos("length", length)?;
        check_pos("mass", mass)?;
        check_pos("hbar", hbar)?;
        check_pos("k_B", k_b)?;
        if !(temperature.is_finite() && temperature >= 0.0) {
            return Err(CoreError::Domain(format!(
                "temperature must be finite and >= 0, got {temperature}"
            )));
        }
        Ok(Self { length, mass, temperature, hbar, k_b })
    }

    /// The default configuration of the reference calculations:
    /// `L = M = T = 1` in natural units.
    pub fn natural() -> Self {
        Self { length: 1.0, mass: 1.0, temperature: 1.0, hbar: 1.0, k_b: 1.0 }
    }

    /// Same configuration with a different trap size.
    pub fn with_length(&self, length: f64) -> Result<Self> {
        Self::with_constants(length, self.mass, self.temperature, self.hbar, self.k_b)
    }

    /// Same configuration with a different temperature.
    pub fn with_temperature(&self, temperature: f64) -> Result<Self> {
        Self::with_constants(self.length, self.mass, temperature, self.hbar, self.k_b)
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn k_b(&self) -> f64 {
        self.k_b
    }

    pub fn is_zero_temperature(&self) -> bool {
        self.temperature == 0.0
    }

    /// Ground-state energy of the full trap, `alpha = pi^2 hbar^2 / (2 M L^2)`.
    pub fn alpha(&self) -> f64 {
        PI * PI * self.hbar * self.hbar / (2.0 * self.mass * self.length * self.length)
    }

    /// Dimensionless quench parameter `q = 4 alpha / (k_B T)`; `+inf` at `T = 0`.
    pub fn q(&self) -> f64 {
        if self.temperature == 0.0 {
            f64::INFINITY
        } else {
            4.0 * self.alpha() / (self.k_b * self.temperature)
        }
    }

    /// Thermal de Broglie wavelength `h (2 pi M k_B T)^{-1/2}`; `+inf` at `T = 0`.
    pub fn thermal_wavelength(&self) -> f64 {
        if self.temperature == 0.0 {
            f64::INFINITY
        } else {
            let h = 2.0 * PI * self.hbar;
            h / (2.0 * PI * self.mass * self.k_b * self.temperature).sqrt()
        }
    }

    /// Ratio of trap size to thermal wavelength, the sweep axis of the
    /// entropy-change curves.
    pub fn size_ratio(&self) -> f64 {
        if self.temperature == 0.0 {
            0.0
        } else {
            self.length / self.thermal_wavelength()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn rejects_bad_inputs() {
        assert!(TrapConfig::new(0.0, 1.0, 1.0).is_err());
        assert!(TrapConfig::new(-1.0, 1.0, 1.0).is_err());
        assert!(TrapConfig::new(1.0, 0.0, 1.0).is_err());
        assert!(TrapConfig::new(1.0, 1.0, -0.5).is_err());
        assert!(TrapConfig::new(f64::NAN, 1.0, 1.0).is_err());
        assert!(TrapConfig::with_constants(1.0, 1.0, 1.0, 0.0, 1.0).is_err());
        assert!(TrapConfig::new(1.0, 1.0, 0.0).is_ok());
    }

    #[test]
    fn natural_unit_scales() {
        let cfg = TrapConfig::natural();
        assert_relative_eq!(cfg.alpha(), PI * PI / 2.0, max_relative = 1e-15);
        assert_relative_eq!(cfg.q(), 2.0 * PI * PI, max_relative = 1e-15);
        assert_relative_eq!(cfg.thermal_wavelength(), (2.0 * PI).sqrt(), max_relative = 1e-15);
    }

    // q and lambda_T are tied by q = pi (lambda_T / L)^2 for any choice of
    // units; this pins the two derivations against each other.
    #[test]
    fn quench_parameter_matches_wavelength_identity() {
        let cases = [
            TrapConfig::natural(),
            TrapConfig::new(3.7, 0.2, 11.0).unwrap(),
            TrapConfig::with_constants(0.05, 87.0, 1.2e-7, 1.054e-34, 1.38e-23).unwrap(),
        ];
        for cfg in cases {
            let lhs = cfg.q();
            let rhs = PI * (cfg.thermal_wavelength() / cfg.length()).powi(2);
            assert_relative_eq!(lhs, rhs, max_relative = 1e-12);
        }
    }

    #[test]
    fn zero_temperature_limits() {
        let cfg = TrapConfig::new(1.0, 1.0, 0.0).unwrap();
        assert!(cfg.is_zero_temperature());
        assert!(cfg.q().is_infinite());
        assert!(cfg.thermal_wavelength().is_infinite());
        assert_eq!(cfg.size_ratio(), 0.0);
    }
}
