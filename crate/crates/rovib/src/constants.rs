//! Physical constants and energy-unit conversions.
//!
//! All internal computation uses eV for energies and angstroms for lengths;
//! cm^-1 appears only at I/O boundaries. The three conversion factors below
//! are fixed inputs of the model and are never recomputed.

use crate::error::{Error, Result};

/// hbar * c in eV * angstrom.
pub const HBAR_C: f64 = 1973.29;

/// One atomic mass unit in eV / c^2.
pub const AMU_TO_EV: f64 = 931.502e6;

/// One wavenumber (cm^-1) in eV.
pub const INVCM_TO_EV: f64 = 1.239_85e-4;

/// The fixed conversion table, bundled for callers that want to carry it around.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// eV * angstrom
    pub hbar_c: f64,
    /// eV / c^2 per a.m.u.
    pub amu_to_ev: f64,
    /// eV per cm^-1
    pub invcm_to_ev: f64,
}

impl PhysicalConstants {
    pub const fn standard() -> Self {
        Self {
            hbar_c: HBAR_C,
            amu_to_ev: AMU_TO_EV,
            invcm_to_ev: INVCM_TO_EV,
        }
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::standard()
    }
}

/// Energy units accepted at the I/O boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnergyUnit {
    InvCm,
    Ev,
    MeV,
}

impl EnergyUnit {
    /// Parses a unit label. Unknown labels are rejected.
    pub fn from_label(label: &str) -> Result<Self> {
        match label {
            "cm-1" | "cm^-1" | "invcm" | "1/cm" => Ok(Self::InvCm),
            "eV" | "ev" => Ok(Self::Ev),
            "MeV" | "mev" => Ok(Self::MeV),
            other => Err(Error::RejectedInput(format!("unknown energy unit '{other}'"))),
        }
    }

    /// Factor that takes a value in this unit to eV.
    fn to_ev_factor(self) -> f64 {
        match self {
            Self::InvCm => INVCM_TO_EV,
            Self::Ev => 1.0,
            Self::MeV => 1.0e6,
        }
    }
}

/// Converts `value` between energy units through the fixed factor table.
/// Round trips are identity to within a few ulp.
pub fn convert_energy(value: f64, from: EnergyUnit, to: EnergyUnit) -> f64 {
    if from == to {
        return value;
    }
    value * from.to_ev_factor() / to.to_ev_factor()
}

/// Reduced mass m1*m2/(m1+m2). Both masses must be positive.
pub fn reduced_mass(m1: f64, m2: f64) -> Result<f64> {
    if !(m1 > 0.0) || !(m2 > 0.0) {
        return Err(Error::RejectedInput(format!(
            "reduced_mass requires positive masses, got {m1} and {m2}"
        )));
    }
    Ok(m1 * m2 / (m1 + m2))
}
