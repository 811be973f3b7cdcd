//! Parametric Nikiforov-Uvarov engine: maps the six coefficients of the
//! hypergeometric-type radial equation to the derived constant set, the key
//! polynomials, the quantization residual, and the eigenfunction exponents.

use crate::error::{Error, Result};

/// Coefficients of the source equation: (c1, c2, c3) from the first-order
/// and quadratic terms, (b1, b2, b3) from the z^2, z^1, z^0 parts of the
/// driving polynomial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NUInput {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
}

impl NUInput {
    pub fn validate(&self) -> Result<()> {
        if self.c3 == 0.0 || !self.c3.is_finite() {
            return Err(Error::RejectedInput(
                "hypergeometric form requires c3 != 0".into(),
            ));
        }
        Ok(())
    }
}

/// The ten derived constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NUConstants {
    pub c4: f64,
    pub c5: f64,
    pub c6: f64,
    pub c7: f64,
    pub c8: f64,
    pub c9: f64,
    pub c10: f64,
    pub c11: f64,
    pub c12: f64,
    pub c13: f64,
}

/// Soft admissibility conditions, reported rather than thrown so parameter
/// scans can skip unphysical configurations cleanly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Admissibility {
    /// c10 > -1 and c11 > -1: the orthogonality weight is integrable.
    pub weight_ok: bool,
    /// c12 > 0 and c13 > 0: the envelope decays at both ends.
    pub envelope_ok: bool,
}

impl Admissibility {
    pub fn is_physical(&self) -> bool {
        self.weight_ok && self.envelope_ok
    }
}

impl NUConstants {
    pub fn admissibility(&self) -> Admissibility {
        Admissibility {
            weight_ok: self.c10 > -1.0 && self.c11 > -1.0,
            envelope_ok: self.c12 > 0.0 && self.c13 > 0.0,
        }
    }
}

/// Key polynomials: pi(z) = pi_const + pi_slope z, the shift constant k,
/// and tau(z) = tau_const + tau_slope z.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KeyPolynomials {
    pub pi_const: f64,
    pub pi_slope: f64,
    pub k: f64,
    pub tau_const: f64,
    pub tau_slope: f64,
}

/// Closed-form derived constants. Negative square-root arguments mean no
/// real bound configuration exists and are rejected outright.
pub fn derive_constants(input: &NUInput) -> Result<NUConstants> {
    input.validate()?;
    let NUInput {
        c1,
        c2,
        c3,
        b1,
        b2,
        b3,
    } = *input;
    let c4 = 0.5 * (1.0 - c1);
    let c5 = 0.5 * (c2 - 2.0 * c3);
    let c6 = c5 * c5 + b1;
    let c7 = 2.0 * c4 * c5 - b2;
    let c8 = c4 * c4 + b3;
    let c9 = c3 * (c7 + c3 * c8) + c6;
    if c8 < 0.0 || c9 < 0.0 {
        return Err(Error::Inadmissible(format!(
            "negative square-root argument: c8 = {c8}, c9 = {c9}"
        )));
    }
    Ok(NUConstants {
        c4,
        c5,
        c6,
        c7,
        c8,
        c9,
        c10: c1 + 2.0 * c4 + 2.0 * c8.sqrt() - 1.0,
        c11: 1.0 - c1 - 2.0 * c4 + 2.0 / c3 * c9.sqrt(),
        c12: c4 + c8.sqrt(),
        c13: -c4 + (c9.sqrt() - c5) / c3,
    })
}

/// The branch with negative tau slope, the only one admitting bound states.
pub fn key_polynomials(consts: &NUConstants, input: &NUInput) -> KeyPolynomials {
    let r8 = consts.c8.sqrt();
    let r9 = consts.c9.sqrt();
    let mix = r9 + input.c3 * r8;
    KeyPolynomials {
        pi_const: consts.c4 + r8,
        pi_slope: consts.c5 - mix,
        k: -(consts.c7 + 2.0 * input.c3 * consts.c8) - 2.0 * (consts.c8 * consts.c9).sqrt(),
        tau_const: input.c1 + 2.0 * consts.c4 + 2.0 * r8,
        tau_slope: -(input.c2 - 2.0 * consts.c5) - 2.0 * mix,
    }
}

/// Quantization residual for level index n; an eigen-configuration makes it
/// vanish. Quadratic in n with second difference 2 c3.
pub fn energy_relation_residual(consts: &NUConstants, input: &NUInput, n: u32) -> f64 {
    let nf = n as f64;
    let mix = consts.c9.sqrt() + input.c3 * consts.c8.sqrt();
    (input.c2 - input.c3) * nf + input.c3 * nf * nf - (2.0 * nf + 1.0) * consts.c5
        + (2.0 * nf + 1.0) * mix
        + consts.c7
        + 2.0 * input.c3 * consts.c8
        + 2.0 * (consts.c8 * consts.c9).sqrt()
}

/// Factor exponents of the bound eigenfunctions:
/// weight rho(z) = z^w0 (1 - c3 z)^w1, envelope phi(z) = z^e0 (1 - c3 z)^e1,
/// polynomial part P_n^(j0, j1)(1 - 2 c3 z).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveExponents {
    pub rho: (f64, f64),
    pub phi: (f64, f64),
    pub jacobi: (f64, f64),
}

pub fn wave_exponents(consts: &NUConstants) -> Result<WaveExponents> {
    if consts.c10 <= -1.0 || consts.c11 <= -1.0 {
        return Err(Error::Inadmissible(format!(
            "weight exponents out of range: c10 = {}, c11 = {}",
            consts.c10, consts.c11
        )));
    }
    Ok(WaveExponents {
        rho: (consts.c10, consts.c11),
        phi: (consts.c12, consts.c13),
        jacobi: (consts.c10, consts.c11),
    })
}
