//! Morse and q-deformed hyperbolic potential evaluation, well geometry, and
//! the three-term centrifugal approximation in the exponential variable.

use crate::error::{Error, Result};
use crate::registry::{Branch, PotentialParams};

/// Where a centrifugal coefficient triple came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoeffSource {
    /// Published closed-form expressions evaluated verbatim.
    ClosedForm,
    /// Triple solved so the approximant matches 1/r^2 in value, slope and
    /// curvature at r_e.
    DerivativeMatched,
}

impl std::fmt::Display for CoeffSource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CoeffSource::ClosedForm => "paper",
            CoeffSource::DerivativeMatched => "matched",
        })
    }
}

impl CoeffSource {
    pub fn from_label(label: &str) -> Result<Self> {
        match label {
            "paper" => Ok(CoeffSource::ClosedForm),
            "matched" => Ok(CoeffSource::DerivativeMatched),
            other => Err(Error::RejectedInput(format!(
                "unknown coefficient source '{other}' (expected 'paper' or 'matched')"
            ))),
        }
    }
}

/// Dimensionless centrifugal expansion coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CentrifugalCoeffs {
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
    pub source: CoeffSource,
}

/// (1 +- q e^(-2 a r)) / (1 -+ q e^(-2 a r)) for the plus/minus branch.
pub fn deformed_coth(r: f64, alpha: f64, q: f64, branch: Branch) -> Result<f64> {
    let t = q * (-2.0 * alpha * r).exp();
    let (num, den) = match branch {
        Branch::Plus => (1.0 + t, 1.0 - t),
        Branch::Minus => (1.0 - t, 1.0 + t),
    };
    if den.abs() < 1e-30 {
        return Err(Error::Pole { r });
    }
    Ok(num / den)
}

/// Signed exponential basis variable u(r) = z/(1 - q z) with z = +-e^(-2 a r).
/// The deformed coth equals 1 + 2 q u on either branch.
pub fn basis_ratio(r: f64, alpha: f64, q: f64, branch: Branch) -> Result<f64> {
    let z = match branch {
        Branch::Plus => (-2.0 * alpha * r).exp(),
        Branch::Minus => -(-2.0 * alpha * r).exp(),
    };
    let den = 1.0 - q * z;
    if den.abs() < 1e-30 {
        return Err(Error::Pole { r });
    }
    Ok(z / den)
}

/// V(r) = D (1 - sigma_eff * deformed_coth)^2 with D = D_e / (1 - sigma_eff)^2.
pub fn potential_value(params: &PotentialParams, r: f64) -> Result<f64> {
    let dc = deformed_coth(r, params.alpha, params.q, params.branch)?;
    let s = params.sigma_eff();
    let inner = 1.0 - s * dc;
    Ok(params.depth_ev() * inner * inner)
}

/// Radius where the well bottoms out; the first derivative of
/// `potential_value` vanishes there for any q.
pub fn equilibrium_radius(params: &PotentialParams) -> Result<f64> {
    let s = params.sigma_eff();
    // Plus branch needs |sigma_eff| < 1, minus branch |sigma_eff| > 1,
    // otherwise sigma_eff * deformed_coth never reaches 1.
    let arg = match params.branch {
        Branch::Plus => s,
        Branch::Minus => 1.0 / s,
    };
    if !(arg.abs() < 1.0) || arg == 0.0 {
        return Err(Error::Domain(format!(
            "no interior minimum: sigma_eff = {s} out of range for the {} branch",
            params.branch.label()
        )));
    }
    Ok((arg.atanh() + 0.5 * params.q.ln()) / params.alpha)
}

/// Morse well D (1 - e^(-alpha (r - r_e)))^2.
pub fn morse_value(d: f64, alpha: f64, r_e: f64, r: f64) -> f64 {
    let e = 1.0 - (-alpha * (r - r_e)).exp();
    d * e * e
}

/// Published closed forms for the centrifugal triple at matching point r_e.
pub fn pekeris_coefficients(alpha: f64, r_e: f64, branch: Branch) -> CentrifugalCoeffs {
    let s = match branch {
        Branch::Plus => 1.0,
        Branch::Minus => -1.0,
    };
    let x = alpha * r_e;
    let em = (-2.0 * x).exp();
    let ep = (2.0 * x).exp();
    let onem = 1.0 - s * em;
    let b = onem / (2.0 * x);
    let a0 = 1.0 - b * b * (8.0 * x / onem - 3.0 - 2.0 * x);
    let a1 = s * 2.0 * (ep - s) * (3.0 * b - (3.0 + 2.0 * x) * b);
    let a2 = (ep - s) * (ep - s) * b * b * (3.0 + 2.0 * x - 4.0 * x / onem);
    CentrifugalCoeffs {
        a0,
        a1,
        a2,
        source: CoeffSource::ClosedForm,
    }
}

/// Solves the 3x3 system forcing (a0 + a1 u + a2 u^2)/r_e^2 to agree with
/// 1/r^2 in value, first and second derivative at r = r_e.
pub fn matched_coefficients(
    alpha: f64,
    r_e: f64,
    q: f64,
    branch: Branch,
) -> Result<CentrifugalCoeffs> {
    if !(alpha * r_e > 0.0) {
        return Err(Error::RejectedInput(format!(
            "matching point requires alpha*r_e > 0, got alpha = {alpha}, r_e = {r_e}"
        )));
    }
    let u0 = basis_ratio(r_e, alpha, q, branch)?;
    // u' = -2 alpha u (1 + q u), u'' = 4 alpha^2 u (1 + q u)(1 + 2 q u).
    let up = -2.0 * alpha * u0 * (1.0 + q * u0);
    let upp = 4.0 * alpha * alpha * u0 * (1.0 + q * u0) * (1.0 + 2.0 * q * u0);
    let mut m = [
        [1.0, u0, u0 * u0],
        [0.0, up, 2.0 * u0 * up],
        [0.0, upp, 2.0 * u0 * upp + 2.0 * up * up],
    ];
    let mut rhs = [1.0, -2.0 / r_e, 6.0 / (r_e * r_e)];
    solve3(&mut m, &mut rhs)?;
    Ok(CentrifugalCoeffs {
        a0: rhs[0],
        a1: rhs[1],
        a2: rhs[2],
        source: CoeffSource::DerivativeMatched,
    })
}

/// In-place 3x3 Gaussian elimination with partial pivoting.
fn solve3(m: &mut [[f64; 3]; 3], rhs: &mut [f64; 3]) -> Result<()> {
    for col in 0..3 {
        let pivot = (col..3)
            .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
            .unwrap();
        if m[pivot][col].abs() < 1e-300 {
            return Err(Error::DegenerateGeometry);
        }
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        for row in (col + 1)..3 {
            let f = m[row][col] / m[col][col];
            for k in col..3 {
                m[row][k] -= f * m[col][k];
            }
            rhs[row] -= f * rhs[col];
        }
    }
    for col in (0..3).rev() {
        let mut acc = rhs[col];
        for k in (col + 1)..3 {
            acc -= m[col][k] * rhs[k];
        }
        rhs[col] = acc / m[col][col];
    }
    Ok(())
}

/// Three-term approximation to l(l+1)/r^2, in inverse length squared,
/// evaluated with the spectroscopic r_e of the molecule as the scale.
pub fn approx_centrifugal(
    coeffs: &CentrifugalCoeffs,
    l: u32,
    params: &PotentialParams,
    r: f64,
) -> Result<f64> {
    if l == 0 {
        return Ok(0.0);
    }
    let u = basis_ratio(r, params.alpha, params.q, params.branch)?;
    let ll = (l as f64) * (l as f64 + 1.0);
    let re = params.molecule.re_angstrom;
    Ok(ll / (re * re) * (coeffs.a0 + coeffs.a1 * u + coeffs.a2 * u * u))
}
