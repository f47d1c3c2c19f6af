//! Physical parameters and reduced-mass arithmetic.

use core::f64::consts::FRAC_PI_2;

use crate::error::{invalid, Result};

/// Proton mass in electron masses (CODATA). With it `-2 m_r` reproduces the
/// finite-mass zero-field ground energy -1.99891136.
pub const PROTON_MASS: f64 = 1836.152673;

/// Conversion of the atomic unit of magnetic field to tesla (as quoted).
pub const TESLA_PER_AU: f64 = 2.35e5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MassMode {
    /// Proton fixed at the origin.
    InfiniteProton,
    /// Proton mass in electron masses.
    FiniteProton(f64),
}

impl MassMode {
    pub fn finite_default() -> Self {
        MassMode::FiniteProton(PROTON_MASS)
    }
}

/// Dimensionless masses of the relative-motion problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedMasses {
    pub m_r: f64,
    pub mu_p: f64,
    pub mu_e: f64,
}

pub fn reduced_masses(mode: MassMode) -> Result<ReducedMasses> {
    match mode {
        MassMode::InfiniteProton => Ok(ReducedMasses {
            m_r: 1.0,
            mu_p: 1.0,
            mu_e: 0.0,
        }),
        MassMode::FiniteProton(m_p) => {
            if !(m_p > 0.0) || !m_p.is_finite() {
                return Err(invalid(
                    "m_p",
                    m_p,
                    "proton mass must be positive and finite",
                ));
            }
            let total = m_p + 1.0;
            let mu_p = m_p / total;
            Ok(ReducedMasses {
                m_r: mu_p,
                mu_p,
                mu_e: 1.0 / total,
            })
        }
    }
}

/// Field magnitude, tilt angle and mass model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConfig {
    b: f64,
    alpha: f64,
    mass_mode: MassMode,
    masses: ReducedMasses,
    zeeman_sign: f64,
}

impl PhysicalConfig {
    /// `alpha` in radians, within `[0, pi/2]`.
    pub fn new(b: f64, alpha: f64, mass_mode: MassMode) -> Result<Self> {
        if !(b >= 0.0) || !b.is_finite() {
            return Err(invalid("B", b, "field magnitude must be finite and >= 0"));
        }
        if !(alpha >= 0.0) || alpha > FRAC_PI_2 * (1.0 + 1e-14) {
            return Err(invalid("alpha", alpha, "tilt angle must lie in [0, pi/2]"));
        }
        let masses = reduced_masses(mass_mode)?;
        Ok(Self {
            b,
            alpha: alpha.min(FRAC_PI_2),
            mass_mode,
            masses,
            zeeman_sign: 1.0,
        })
    }

    /// `alpha` in degrees, within `[0, 90]`.
    pub fn from_degrees(b: f64, alpha_degrees: f64, mass_mode: MassMode) -> Result<Self> {
        if !(0.0..=90.0).contains(&alpha_degrees) {
            return Err(invalid(
                "alpha",
                alpha_degrees,
                "tilt angle must lie in [0, 90] degrees",
            ));
        }
        let alpha = if alpha_degrees == 90.0 {
            FRAC_PI_2
        } else {
            alpha_degrees.to_radians()
        };
        Self::new(b, alpha, mass_mode)
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Tilt angle in radians.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn alpha_degrees(&self) -> f64 {
        if self.alpha == FRAC_PI_2 {
            90.0
        } else {
            self.alpha.to_degrees()
        }
    }

    pub fn mass_mode(&self) -> MassMode {
        self.mass_mode
    }

    pub fn masses(&self) -> ReducedMasses {
        self.masses
    }

    pub fn m_r(&self) -> f64 {
        self.masses.m_r
    }

    /// `cos(alpha)`, exactly zero at `alpha = pi/2`.
    pub fn cos_alpha(&self) -> f64 {
        if self.alpha == FRAC_PI_2 {
            0.0
        } else {
            libm::cos(self.alpha)
        }
    }

    pub fn sin_alpha(&self) -> f64 {
        if self.alpha == FRAC_PI_2 {
            1.0
        } else {
            libm::sin(self.alpha)
        }
    }

    /// Coefficient of `L_z` in the potential matrix: `(mu_p - mu_e) B cos(alpha)`.
    pub fn zeeman_coefficient(&self) -> f64 {
        self.zeeman_sign * (self.masses.mu_p - self.masses.mu_e) * self.b * self.cos_alpha()
    }

    /// The same configuration with the sign of the Zeeman term flipped. A
    /// deliberately wrong operator, for checking that verification notices.
    pub fn with_reversed_zeeman(mut self) -> Self {
        self.zeeman_sign = -self.zeeman_sign;
        self
    }

    pub fn zeeman_reversed(&self) -> bool {
        self.zeeman_sign < 0.0
    }

    /// The orbital quantum number is conserved when the field is absent or
    /// perpendicular to the plane.
    pub fn lz_is_sharp(&self) -> bool {
        self.b == 0.0 || self.alpha == 0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinite_mass_is_exact() {
        let m = reduced_masses(MassMode::InfiniteProton).unwrap();
        assert_eq!((m.m_r, m.mu_p, m.mu_e), (1.0, 1.0, 0.0));
    }

    #[test]
    fn finite_default_reproduces_zero_field_energy() {
        let m = reduced_masses(MassMode::finite_default()).unwrap();
        assert!((m.m_r - 0.99945568).abs() < 5e-9);
        assert!((-2.0 * m.m_r - -1.99891136).abs() < 5e-9);
        assert!((m.mu_p + m.mu_e - 1.0).abs() < 1e-15);
    }

    #[test]
    fn equal_masses() {
        let m = reduced_masses(MassMode::FiniteProton(1.0)).unwrap();
        assert_eq!((m.m_r, m.mu_p, m.mu_e), (0.5, 0.5, 0.5));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(reduced_masses(MassMode::FiniteProton(0.0)).is_err());
        assert!(reduced_masses(MassMode::FiniteProton(-3.0)).is_err());
        assert!(PhysicalConfig::new(-1.0, 0.0, MassMode::InfiniteProton).is_err());
        assert!(PhysicalConfig::new(1.0, 2.0, MassMode::InfiniteProton).is_err());
        assert!(PhysicalConfig::from_degrees(1.0, 91.0, MassMode::InfiniteProton).is_err());
        assert!(PhysicalConfig::new(f64::NAN, 0.0, MassMode::InfiniteProton).is_err());
    }

    #[test]
    fn perpendicular_tilt_kills_zeeman_exactly() {
        let c = PhysicalConfig::from_degrees(3.0, 90.0, MassMode::InfiniteProton).unwrap();
        assert_eq!(c.zeeman_coefficient(), 0.0);
        assert_eq!(c.sin_alpha(), 1.0);
        assert_eq!(c.alpha_degrees(), 90.0);
    }

    #[test]
    fn reversal_flips_only_the_zeeman_term() {
        let c = PhysicalConfig::from_degrees(2.0, 30.0, MassMode::finite_default()).unwrap();
        let r = c.with_reversed_zeeman();
        assert!(!c.zeeman_reversed() && r.zeeman_reversed());
        assert_eq!(r.zeeman_coefficient(), -c.zeeman_coefficient());
        assert_eq!(r.masses(), c.masses());
        assert!(!r.with_reversed_zeeman().zeeman_reversed());
    }
}
