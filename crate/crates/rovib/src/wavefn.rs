//! Radial wave functions: log-space evaluation of the envelope-times-Jacobi
//! form, normalization constants by adaptive quadrature and by the printed
//! finite series, node counting, and boundary behavior.
//!
//! The radial factor is R(r) = g(r)/r with
//!   g(r) = N z^K (1 - q z)^(S/q + 1/2) P_n^(2K, 2S/q)(1 - 2 q z),
//! z = e^(-2 alpha r) on the plus branch. The normalization measure in z
//! follows from dr = -dz/(2 alpha z):
//!   1 = int g^2 dr = (1/2 alpha) int_0^(1/q) z^(2K-1) (1-qz)^(2S/q+1) P_n^2 dz.

use crate::error::{Error, Result};
use crate::potential::CentrifugalCoeffs;
use crate::registry::{Branch, PotentialParams};
use crate::specfun::{hyper_3f2_unit, jacobi_poly, ln_gamma, SeriesResult};
use crate::spectrum::{assemble, EnergyLevel};

/// A solved level dressed with its wave-function exponents and norm.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialState {
    pub level: EnergyLevel,
    /// Power of z (K).
    pub k_exp: f64,
    /// S/q, the power of (1 - q z) minus one half.
    pub s_exp: f64,
    /// Canonical normalization constant, from quadrature.
    pub norm: f64,
    /// ln(norm); the constant itself can be astronomically large.
    pub ln_norm: f64,
    pub branch: Branch,
}

/// Builds the state for a solved level: exponents from the parameter triple
/// at the level's energy, norm from quadrature.
pub fn radial_state(
    params: &PotentialParams,
    level: &EnergyLevel,
    coeffs: &CentrifugalCoeffs,
) -> Result<RadialState> {
    if params.branch == Branch::Minus {
        return Err(Error::InvalidState(
            "minus-branch radial profiles are not real-valued; evaluation unsupported".into(),
        ));
    }
    let asm = assemble(params, level.l, coeffs, level.value, level.regime)?;
    let k_exp = asm.k_tilde;
    let s_exp = asm.s_tilde / params.q;
    if !(k_exp > 0.0) || !(s_exp + 0.5 > 0.0) {
        return Err(Error::InvalidState(format!(
            "boundary decay violated: K = {k_exp}, S/q = {s_exp}"
        )));
    }
    if !(2.0 * k_exp > -1.0) || !(2.0 * s_exp > -1.0) {
        return Err(Error::InvalidState(format!(
            "Jacobi orders out of range: ({}, {})",
            2.0 * k_exp,
            2.0 * s_exp
        )));
    }
    let ln_i = log_norm_integral(params.alpha, params.q, k_exp, s_exp, level.n)?;
    let ln_norm = -0.5 * ln_i;
    Ok(RadialState {
        level: level.clone(),
        k_exp,
        s_exp,
        norm: ln_norm.exp(),
        ln_norm,
        branch: params.branch,
    })
}

/// R(r) = g(r)/r. Both envelope factors are combined in log space, so deep
/// underflow at either boundary comes back as an exact 0.0.
pub fn radial_value(state: &RadialState, params: &PotentialParams, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::RejectedInput(format!("radius must be positive, got {r}")));
    }
    let (alpha, q) = (params.alpha, params.q);
    let z = (-2.0 * alpha * r).exp();
    let core = 1.0 - q * z;
    // Inside the hard core (q > 1 region where the potential diverges) the
    // bound profile is identically zero.
    if core <= 0.0 {
        return Ok(0.0);
    }
    let ln_env = state.k_exp * (-2.0 * alpha * r) + (state.s_exp + 0.5) * (-q * z).ln_1p();
    let p = jacobi_poly(
        state.level.n,
        2.0 * state.k_exp,
        2.0 * state.s_exp,
        1.0 - 2.0 * q * z,
    );
    if p == 0.0 {
        return Ok(0.0);
    }
    Ok(p.signum() * (state.ln_norm + ln_env + p.abs().ln() - r.ln()).exp())
}

/// Counts strict sign changes of the radial profile on a uniform grid.
/// Underflowed zeros are skipped, not counted as crossings.
pub fn radial_nodes(
    state: &RadialState,
    params: &PotentialParams,
    r_lo: f64,
    r_hi: f64,
    samples: usize,
) -> Result<usize> {
    let mut nodes = 0;
    let mut last_sign = 0i8;
    for i in 0..=samples {
        let r = r_lo + (r_hi - r_lo) * i as f64 / samples as f64;
        let v = radial_value(state, params, r)?;
        let sign = if v > 0.0 {
            1
        } else if v < 0.0 {
            -1
        } else {
            continue;
        };
        if last_sign != 0 && sign != last_sign {
            nodes += 1;
        }
        last_sign = sign;
    }
    Ok(nodes)
}

/// Normalization constant N = I^(-1/2) from the z-space integral, adaptive
/// to 1e-10 relative.
pub fn norm_quadrature(state: &RadialState, params: &PotentialParams) -> Result<f64> {
    let ln_i = log_norm_integral(
        params.alpha,
        params.q,
        state.k_exp,
        state.s_exp,
        state.level.n,
    )?;
    Ok((-0.5 * ln_i).exp())
}

/// ln of (1/2 alpha) int_0^(1/q) z^(2K-1) (1-qz)^(2S/q+1) P_n^2 dz.
///
/// The integrand is a Beta-like spike: its envelope peaks at
/// z* = (2K-1)/(q (2K + 2S/q)) with width shrinking as the exponents grow,
/// so panels are laid out geometrically around z* before adapting, and the
/// whole integrand is rescaled by the peak log-magnitude. A z = u^2
/// substitution tames the endpoint when 2K-1 < 1.
fn log_norm_integral(alpha: f64, q: f64, kk: f64, sq: f64, n: u32) -> Result<f64> {
    if !(kk > 0.0) {
        return Err(Error::InvalidState(format!(
            "norm integral diverges: K = {kk} <= 0"
        )));
    }
    if !(q > 0.0) {
        return Err(Error::InvalidState(format!(
            "norm integral needs q > 0, got {q}"
        )));
    }
    let top = 1.0 / q;
    let pk = 2.0 * kk - 1.0;
    let ps = 2.0 * sq + 1.0;
    // Envelope peak and log-scale offset.
    let zstar = (pk / (q * (2.0 * kk + 2.0 * sq))).clamp(0.0, top);
    let ln_f = |z: f64| {
        if z <= 0.0 || z >= top {
            f64::NEG_INFINITY
        } else {
            pk * z.ln() + ps * (-q * z).ln_1p()
        }
    };
    let m = if pk > 0.0 && zstar > 0.0 { ln_f(zstar) } else { 0.0 };
    let h = |z: f64| {
        let lf = ln_f(z) - m;
        if lf == f64::NEG_INFINITY {
            0.0
        } else {
            let p = jacobi_poly(n, 2.0 * kk, 2.0 * sq, 1.0 - 2.0 * q * z);
            lf.exp() * p * p
        }
    };
    // Panel boundaries concentrated around the peak.
    let mut cuts = vec![0.0, top];
    if zstar > 0.0 && zstar < top {
        for f in [1.0 / 16.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0] {
            let z = zstar * f;
            if z > 0.0 && z < top {
                cuts.push(z);
            }
        }
    }
    cuts.push(0.5 * top);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-300);

    // Rough pass sizes the absolute tolerance for the adaptive pass.
    let mut rough = 0.0;
    for w in cuts.windows(2) {
        rough += gk15(&h, w[0], w[1]).0.abs();
    }
    if !(rough > 0.0) && !(rough == 0.0) {
        return Err(Error::InvalidState("norm integrand not finite".into()));
    }
    let tol_total = 1e-11 * rough.max(f64::MIN_POSITIVE);

    let mut total = 0.0;
    for w in cuts.windows(2) {
        let tol = tol_total * ((w[1] - w[0]) / top).max(0.05);
        if w[0] == 0.0 && pk < 1.0 {
            // z = u^2: integrand 2 u^(4K-1) (1 - q u^2)^(2S/q+1) P^2, smooth
            // at the origin for K > 0.
            let hu = |u: f64| {
                let z = u * u;
                if z <= 0.0 {
                    return 0.0;
                }
                let lf = (2.0 * pk + 1.0) * u.ln() + ps * (-q * z).ln_1p() - m;
                let p = jacobi_poly(n, 2.0 * kk, 2.0 * sq, 1.0 - 2.0 * q * z);
                2.0 * lf.exp() * p * p
            };
            total += adapt(&hu, 0.0, w[1].sqrt(), tol, 0);
        } else {
            total += adapt(&h, w[0], w[1], tol, 0);
        }
    }
    if !(total > 0.0) {
        return Err(Error::InvalidState(format!(
            "norm integral collapsed: scaled value {total}"
        )));
    }
    Ok(m + total.ln() - (2.0 * alpha).ln())
}

/// Closed-form check value for the degree-zero case: the integral is a Beta
/// function, N^2 = 2 alpha q^(2K) Gamma(2K + 2S/q + 2) / (Gamma(2K) Gamma(2S/q + 2)).
pub fn norm_beta_closed_form(alpha: f64, q: f64, kk: f64, sq: f64) -> Result<f64> {
    let (la, _) = ln_gamma(2.0 * kk + 2.0 * sq + 2.0)?;
    let (lb, _) = ln_gamma(2.0 * kk)?;
    let (lc, _) = ln_gamma(2.0 * sq + 2.0)?;
    let ln_n2 = (2.0 * alpha).ln() + 2.0 * kk * q.ln() + la - lb - lc;
    Ok((0.5 * ln_n2).exp())
}

/// Normalization constant by the printed finite series (q = 1 form), with
/// the gamma-ratio factor read as a Pochhammer symbol so every term is
/// finite. Summed in log space; the s-wave variant is the same structure
/// with the l = 0 exponents. Diagnostic only; quadrature is canonical.
pub fn norm_series(state: &RadialState, params: &PotentialParams, tol: f64) -> Result<SeriesResult> {
    if (params.q - 1.0).abs() > 1e-12 {
        return Err(Error::RejectedInput(
            "series normalization is derived for q = 1 only".into(),
        ));
    }
    if !(tol > 0.0) {
        return Err(Error::RejectedInput(format!("bad tolerance {tol}")));
    }
    let (kk, ss) = (state.k_exp, state.s_exp);
    let n = state.level.n;
    let nf = n as f64;
    let two_ks = 2.0 * (kk + ss);
    // ln of the m-independent prefactor.
    let (lg_k1, _) = ln_gamma(2.0 * kk + 1.0)?;
    let (lg_s2, _) = ln_gamma(2.0 * ss + 2.0)?;
    let pre = lg_k1 + lg_s2 - (2.0 * params.alpha).ln();

    // Scaled signed accumulation of the finite m-sum.
    let mut terms: Vec<(f64, f64)> = Vec::with_capacity(n as usize + 1);
    let mut peak = f64::NEG_INFINITY;
    for mm in 0..=n {
        let mf = mm as f64;
        let f = hyper_3f2_unit(
            2.0 * kk + mf,
            -nf,
            nf + 1.0 + two_ks,
            mf + two_ks + 2.0,
            1.0 + 2.0 * kk,
        )?;
        let mut ln_mag = 0.0;
        let mut sign = if mm % 2 == 0 { 1.0 } else { -1.0 };
        // (1 + n + 2(K+S))_m and (n)_m, positive for m <= n.
        for p in 0..mm {
            ln_mag += (nf + 1.0 + two_ks + p as f64).ln() + (nf + p as f64).ln();
            ln_mag -= (p as f64 + 1.0).ln();
        }
        let (lg_mk, _) = ln_gamma(mf + 2.0 * kk + 1.0)?;
        let (lg_mks, _) = ln_gamma(mf + two_ks + 2.0)?;
        ln_mag -= lg_mk + lg_mks;
        if f.value == 0.0 {
            continue;
        }
        sign *= f.value.signum();
        ln_mag += f.value.abs().ln();
        peak = peak.max(ln_mag);
        terms.push((sign, ln_mag));
    }
    let mut acc = 0.0;
    for (sign, ln_mag) in &terms {
        acc += sign * (ln_mag - peak).exp();
    }
    if !(acc > 0.0) {
        return Err(Error::InvalidState(format!(
            "series sum not positive (scaled value {acc})"
        )));
    }
    let ln_x = pre + peak + acc.ln();
    Ok(SeriesResult {
        value: (-0.5 * ln_x).exp(),
        terms_used: n as usize + 1,
        converged: true,
        truncation_estimate: 0.0,
    })
}

/// 15-point Kronrod estimate with embedded 7-point Gauss error measure.
pub(crate) fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    const XK: [f64; 8] = [
        0.991_455_371_120_813,
        0.949_107_912_342_759,
        0.864_864_423_359_769,
        0.741_531_185_599_394,
        0.586_087_235_467_691,
        0.405_845_151_377_397,
        0.207_784_955_007_898,
        0.0,
    ];
    const WK: [f64; 8] = [
        0.022_935_322_010_529,
        0.063_092_092_629_979,
        0.104_790_010_322_250,
        0.140_653_259_715_525,
        0.169_004_726_639_267,
        0.190_350_578_064_785,
        0.204_432_940_075_298,
        0.209_482_141_084_728,
    ];
    const WG: [f64; 4] = [
        0.129_484_966_168_870,
        0.279_705_391_489_277,
        0.381_830_050_505_119,
        0.417_959_183_673_469,
    ];
    let c = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut k = 0.0;
    let mut g = 0.0;
    for (i, (&x, &w)) in XK.iter().zip(WK.iter()).enumerate() {
        let (lo, hi) = (f(c - half * x), f(c + half * x));
        let pair = if x == 0.0 { f(c) } else { lo + hi };
        k += w * pair;
        if i % 2 == 1 {
            g += WG[i / 2] * pair;
        } else if x == 0.0 {
            g += WG[3] * pair;
        }
    }
    (k * half, (k - g).abs() * half)
}

pub(crate) fn adapt(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let (k, e) = gk15(f, a, b);
    if e <= tol || depth >= 50 || b - a < 1e-300 {
        return k;
    }
    let mid = 0.5 * (a + b);
    adapt(f, a, mid, 0.5 * tol, depth + 1) + adapt(f, mid, b, 0.5 * tol, depth + 1)
}
