//! Level assembly and solving: the dimensionless parameter triple, the
//! relativistic transcendental energy condition, the non-relativistic closed
//! forms, bound-spectrum extent, and transition energies.
//!
//! Relativistic energies are carried as W = E_R - mu c^2 throughout. The
//! rest energy is ~5e8 eV while level spacings are fractions of an eV, so
//! subtracting the offset analytically keeps full f64 resolution; the
//! identities mu^2 c^4 - E_R^2 = -W (2 mu c^2 + W) and
//! mu c^2 + E_R = 2 mu c^2 + W are exact in this variable.

use crate::constants::HBAR_C;
use crate::error::{Error, Result};
use crate::nu::{derive_constants, energy_relation_residual, NUInput};
use crate::potential::{CentrifugalCoeffs, CoeffSource};
use crate::registry::PotentialParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Relativistic,
    NonRelativistic,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regime::Relativistic => "kg",
            Regime::NonRelativistic => "nr",
        })
    }
}

impl Regime {
    pub fn from_label(label: &str) -> Result<Self> {
        match label {
            "kg" => Ok(Regime::Relativistic),
            "nr" => Ok(Regime::NonRelativistic),
            other => Err(Error::RejectedInput(format!(
                "unknown regime '{other}' (expected 'nr' or 'kg')"
            ))),
        }
    }
}

/// Dimensionless parameter triple of the radial problem at a trial energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssembledParams {
    pub k_tilde: f64,
    pub q_tilde: f64,
    pub s_tilde: f64,
    pub regime: Regime,
}

/// One solved level. `value` is in eV: the non-relativistic energy, or the
/// energy above rest mass (W) in the relativistic regime.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyLevel {
    pub n: u32,
    pub l: u32,
    pub value: f64,
    pub regime: Regime,
    /// Quantization-identity residual at the accepted energy, normalized by
    /// its largest term.
    pub residual: f64,
    pub source: CoeffSource,
}

/// Coefficient triple for pure vibrational (l = 0) work, where the
/// centrifugal expansion never enters.
pub fn s_wave_coeffs() -> CentrifugalCoeffs {
    CentrifugalCoeffs {
        a0: 0.0,
        a1: 0.0,
        a2: 0.0,
        source: CoeffSource::DerivativeMatched,
    }
}

fn ll_of(l: u32) -> f64 {
    (l as f64) * (l as f64 + 1.0)
}

/// K, Q, S at a trial energy (eV; W in the relativistic regime).
pub fn assemble(
    params: &PotentialParams,
    l: u32,
    coeffs: &CentrifugalCoeffs,
    energy: f64,
    regime: Regime,
) -> Result<AssembledParams> {
    let mol = &params.molecule;
    let hc2 = HBAR_C * HBAR_C;
    let (de, d, s, q) = (
        mol.de_ev(),
        params.depth_ev(),
        params.sigma_eff(),
        params.q,
    );
    let (a, re) = (params.alpha, mol.re_angstrom);
    let ll = ll_of(l);
    let cent0 = ll * hc2 * coeffs.a0 / (re * re);
    let cent2 = ll * hc2 * coeffs.a2 / (re * re);
    // a2sq is mu c^2 + E_R relativistically, 2 mu c^2 in the NR limit;
    // the K^2 numerator collapses to a2sq (D_e - energy) in both regimes.
    let a2sq = match regime {
        Regime::Relativistic => 2.0 * mol.mu_c2_ev() + energy,
        Regime::NonRelativistic => 2.0 * mol.mu_c2_ev(),
    };
    let k2 = a2sq * (de - energy) + cent0;
    let s2 = 4.0 * q * q * a2sq * d * s * s + cent2 + q * q * a * a * hc2;
    if k2 < 0.0 || s2 < 0.0 {
        return Err(Error::NoBoundState(format!(
            "negative square-root argument at energy {energy} eV (k^2 = {k2}, s^2 = {s2})"
        )));
    }
    let scale = 2.0 * a * HBAR_C;
    let q_tilde = -q * a2sq * d * s * (1.0 - s) / (a * a * hc2) + ll * coeffs.a1 / (4.0 * a * a * re * re);
    Ok(AssembledParams {
        k_tilde: k2.sqrt() / scale,
        q_tilde,
        s_tilde: s2.sqrt() / scale,
        regime,
    })
}

/// Source coefficients of the hypergeometric-form radial equation for a
/// given parameter triple.
pub fn nu_input(assembled: &AssembledParams, q: f64) -> NUInput {
    let (kk, ss, qq) = (assembled.k_tilde, assembled.s_tilde, assembled.q_tilde);
    NUInput {
        c1: 1.0,
        c2: q,
        c3: q,
        b1: q * q * kk * kk + ss * ss - q * qq - 0.25 * q * q,
        b2: 2.0 * q * kk * kk - qq,
        b3: kk * kk,
    }
}

/// Quantization residual at (n, l, energy), normalized by the largest term.
pub fn quantization_residual(
    params: &PotentialParams,
    n: u32,
    l: u32,
    coeffs: &CentrifugalCoeffs,
    energy: f64,
    regime: Regime,
) -> Result<f64> {
    let asm = assemble(params, l, coeffs, energy, regime)?;
    let input = nu_input(&asm, params.q);
    let consts = derive_constants(&input)?;
    let raw = energy_relation_residual(&consts, &input, n);
    // Largest-addend scale mirrors the term layout of the residual.
    let nf = n as f64;
    let mix = consts.c9.sqrt() + input.c3 * consts.c8.sqrt();
    let scale = [
        (input.c2 - input.c3) * nf,
        input.c3 * nf * nf,
        (2.0 * nf + 1.0) * consts.c5,
        (2.0 * nf + 1.0) * mix,
        consts.c7,
        2.0 * input.c3 * consts.c8,
        2.0 * (consts.c8 * consts.c9).sqrt(),
    ]
    .iter()
    .fold(0.0f64, |m, t| m.max(t.abs()));
    Ok(raw / scale.max(1e-300))
}

/// Left minus right side of the relativistic energy condition at W (eV).
/// Zero at an eigenvalue; sign changes bracket roots.
pub fn relativistic_residual(
    params: &PotentialParams,
    n: u32,
    l: u32,
    coeffs: &CentrifugalCoeffs,
    w: f64,
) -> Result<f64> {
    let mol = &params.molecule;
    let hc2 = HBAR_C * HBAR_C;
    let (de, d, s, q) = (
        mol.de_ev(),
        params.depth_ev(),
        params.sigma_eff(),
        params.q,
    );
    let (a, re) = (params.alpha, mol.re_angstrom);
    let ll = ll_of(l);
    let a2sq = 2.0 * mol.mu_c2_ev() + w;
    let k2 = a2sq * (de - w) + ll * hc2 * coeffs.a0 / (re * re);
    if k2 < 0.0 {
        return Err(Error::NoBoundState(format!(
            "left side undefined at W = {w} eV"
        )));
    }
    let lhs = 2.0 * k2.sqrt();
    let et2 = 4.0 * a2sq * d * s * s + ll * hc2 * coeffs.a2 / (q * q * re * re) + a * a * hc2;
    if et2 < 0.0 {
        return Err(Error::NoBoundState(format!(
            "envelope scale undefined at W = {w} eV"
        )));
    }
    let den = et2.sqrt() + a * HBAR_C * (2.0 * n as f64 + 1.0);
    let rhs = (4.0 * a2sq * d * s + ll * hc2 * (coeffs.a2 / (q * q) - coeffs.a1 / q) / (re * re)
        - den * den)
        / den;
    Ok(lhs - rhs)
}

/// Same residual scaled by max(|lhs|, |rhs|), for reporting.
pub fn relativistic_residual_normalized(
    params: &PotentialParams,
    n: u32,
    l: u32,
    coeffs: &CentrifugalCoeffs,
    w: f64,
) -> Result<f64> {
    let diff = relativistic_residual(params, n, l, coeffs, w)?;
    // Reconstruct the larger side magnitude from the difference and one side.
    let mol = &params.molecule;
    let hc2 = HBAR_C * HBAR_C;
    let ll = ll_of(l);
    let a2sq = 2.0 * mol.mu_c2_ev() + w;
    let k2 = a2sq * (mol.de_ev() - w)
        + ll * hc2 * coeffs.a0 / (mol.re_angstrom * mol.re_angstrom);
    let lhs = 2.0 * k2.sqrt();
    let rhs = lhs - diff;
    Ok(diff / lhs.abs().max(rhs.abs()).max(1e-300))
}

/// All roots of the relativistic condition inside [w_min, w_max] (eV),
/// found by a uniform scan and refined by bisection. Gaps where the
/// residual is undefined are skipped; no sign change means an empty list.
pub fn solve_relativistic(
    params: &PotentialParams,
    n: u32,
    l: u32,
    coeffs: &CentrifugalCoeffs,
    scan: (f64, f64, usize),
) -> Result<Vec<EnergyLevel>> {
    let (w_min, w_max, steps) = scan;
    if !(w_min < w_max) || steps < 1 {
        return Err(Error::RejectedInput(format!(
            "bad scan window [{w_min}, {w_max}] with {steps} steps"
        )));
    }
    if w_min <= -2.0 * params.molecule.mu_c2_ev() {
        return Err(Error::RejectedInput(
            "scan window extends below the negative-energy continuum".into(),
        ));
    }
    let f = |w: f64| relativistic_residual(params, n, l, coeffs, w).ok();
    let h = (w_max - w_min) / steps as f64;
    let mut roots = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for i in 0..=steps {
        let w = w_min + h * i as f64;
        let Some(res) = f(w) else {
            prev = None;
            continue;
        };
        if res == 0.0 {
            roots.push(w);
            prev = Some((w, res));
            continue;
        }
        if let Some((wp, rp)) = prev {
            if rp * res < 0.0 {
                roots.push(bisect(&f, wp, wp + h.min(w - wp), rp));
            }
        }
        prev = Some((w, res));
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * a.abs().max(1.0));
    roots
        .into_iter()
        .map(|w| {
            let residual = quantization_residual(params, n, l, coeffs, w, Regime::Relativistic)?;
            Ok(EnergyLevel {
                n,
                l,
                value: w,
                regime: Regime::Relativistic,
                residual,
                source: coeffs.source,
            })
        })
        .collect()
}

fn bisect(f: &dyn Fn(f64) -> Option<f64>, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b || (b - a) < 1e-14 * a.abs().max(b.abs()).max(1e-9) {
            break;
        }
        match f(mid) {
            Some(fm) if fm == 0.0 => return mid,
            Some(fm) => {
                if fa * fm < 0.0 {
                    b = mid;
                } else {
                    a = mid;
                    fa = fm;
                }
            }
            // Undefined interior point: shrink toward the defined end.
            None => b = mid,
        }
    }
    0.5 * (a + b)
}

/// The physical relativistic level: root of the transcendental condition
/// nearest the non-relativistic anchor. Scans a window around the anchor,
/// widening a few times before giving up; non-anchored candidates are
/// discoverable through `solve_relativistic` directly.
pub fn solve_level_relativistic(
    params: &PotentialParams,
    n: u32,
    l: u32,
    coeffs: &CentrifugalCoeffs,
) -> Result<EnergyLevel> {
    let anchor = nr_energy(params, n, l, coeffs)?.value;
    let mut half = (0.05 * anchor.abs()).max(6e-3);
    for _ in 0..4 {
        let lo = (anchor - half).max(-1.999 * params.molecule.mu_c2_ev());
        let candidates = solve_relativistic(params, n, l, coeffs, (lo, anchor + half, 256))?;
        let best = candidates
            .into_iter()
            .min_by(|x, y| (x.value - anchor).abs().total_cmp(&(y.value - anchor).abs()));
        if let Some(level) = best {
            return Ok(level);
        }
        half *= 4.0;
    }
    Err(Error::NoBoundState(format!(
        "no relativistic root near the anchor for n = {n}, l = {l}"
    )))
}

/// Closed-form non-relativistic level.
pub fn nr_energy(
    params: &PotentialParams,
    n: u32,
    l: u32,
    coeffs: &CentrifugalCoeffs,
) -> Result<EnergyLevel> {
    let mol = &params.molecule;
    let hc2 = HBAR_C * HBAR_C;
    let (de, d, s, q) = (
        mol.de_ev(),
        params.depth_ev(),
        params.sigma_eff(),
        params.q,
    );
    let (a, re) = (params.alpha, mol.re_angstrom);
    let mu_c2 = mol.mu_c2_ev();
    let ll = ll_of(l);
    let t = 2.0 * mu_c2 * d / (hc2 * a * a);
    let g = ll / (4.0 * a * a * re * re);
    let inner = t * s * s + g * coeffs.a2 / (q * q) + 0.25;
    if inner < 0.0 {
        return Err(Error::NoBoundState(format!(
            "no bound spectrum: radical argument {inner} for n = {n}, l = {l}"
        )));
    }
    let wden = n as f64 + 0.5 + inner.sqrt();
    let bracket = (t * s + g * (coeffs.a2 / (q * q) - coeffs.a1 / q) - wden * wden) / wden;
    let value = de + ll * hc2 * coeffs.a0 / (2.0 * mu_c2 * re * re)
        - a * a * hc2 / (2.0 * mu_c2) * bracket * bracket;
    let residual =
        quantization_residual(params, n, l, coeffs, value, Regime::NonRelativistic)?;
    Ok(EnergyLevel {
        n,
        l,
        value,
        regime: Regime::NonRelativistic,
        residual,
        source: coeffs.source,
    })
}

/// Largest level index of the non-relativistic bound spectrum, as a real
/// number; negative means not even the ground state fits the condition.
pub fn nr_n_max(params: &PotentialParams) -> Result<f64> {
    n_max_formula(
        8.0 * params.molecule.mu_c2_ev() * params.depth_ev() / (HBAR_C * HBAR_C),
        params.sigma_eff(),
        params.alpha,
    )
}

/// Relativistic spectrum-extent analogue at energy W above rest mass.
pub fn rel_n_max(params: &PotentialParams, w: f64) -> Result<f64> {
    n_max_formula(
        4.0 * (2.0 * params.molecule.mu_c2_ev() + w) * params.depth_ev() / (HBAR_C * HBAR_C),
        params.sigma_eff(),
        params.alpha,
    )
}

/// (1/2) [ -1 - sqrt(x sigma^2 + 1) + sqrt(x sigma) ] with x = strength/alpha^2.
pub fn n_max_formula(strength: f64, sigma: f64, alpha: f64) -> Result<f64> {
    if sigma <= 0.0 {
        return Err(Error::Domain(format!(
            "spectrum extent needs sigma_eff > 0, got {sigma}"
        )));
    }
    let x = strength / (alpha * alpha);
    if x * sigma < 0.0 || x * sigma * sigma + 1.0 < 0.0 {
        return Err(Error::NoBoundState(
            "negative radical in the spectrum-extent condition".into(),
        ));
    }
    Ok(0.5 * (-1.0 - (x * sigma * sigma + 1.0).sqrt() + (x * sigma).sqrt()))
}

/// All bound vibrational levels for one l, n = 0 up to floor(n_max).
pub fn scan_vibrational(
    params: &PotentialParams,
    l: u32,
    coeffs: &CentrifugalCoeffs,
) -> Result<Vec<EnergyLevel>> {
    let top = nr_n_max(params)?.max(0.0).floor() as u32;
    (0..=top).map(|n| nr_energy(params, n, l, coeffs)).collect()
}

/// Ground-level response to the well depth: sweeps D_e over a closed range
/// (cm^-1) at fixed shape parameters and returns (depth_cm, level) pairs.
pub fn scan_depth(
    params: &PotentialParams,
    n: u32,
    l: u32,
    coeffs: &CentrifugalCoeffs,
    de_min_cm: f64,
    de_max_cm: f64,
    steps: usize,
) -> Result<Vec<(f64, EnergyLevel)>> {
    if !(de_min_cm > 0.0) || !(de_max_cm >= de_min_cm) {
        return Err(Error::RejectedInput(format!(
            "bad depth range [{de_min_cm}, {de_max_cm}]"
        )));
    }
    if steps == 0 || (steps > 1 && de_max_cm == de_min_cm) {
        return Err(Error::RejectedInput(format!(
            "degenerate depth sweep: {steps} samples over [{de_min_cm}, {de_max_cm}]"
        )));
    }
    let mut out = Vec::with_capacity(steps);
    for i in 0..steps {
        let de = if steps == 1 {
            de_min_cm
        } else {
            de_min_cm + (de_max_cm - de_min_cm) * i as f64 / (steps - 1) as f64
        };
        let mut p = params.clone();
        p.molecule.de_cm = de;
        out.push((de, nr_energy(&p, n, l, coeffs)?));
    }
    Ok(out)
}

/// s-wave excitation energy E(n) - E(0). Indices are admitted up to
/// ceil(n_max): tabulated spectra include the last level just below the
/// dissociation limit even when n_max itself is fractional.
pub fn transition(params: &PotentialParams, n: u32) -> Result<f64> {
    let n_max = nr_n_max(params)?;
    if n as f64 > n_max.ceil() {
        return Err(Error::Domain(format!(
            "n = {n} beyond the bound spectrum (n_max = {n_max:.3})"
        )));
    }
    if n == 0 {
        return Ok(0.0);
    }
    let c = s_wave_coeffs();
    Ok(nr_energy(params, n, 0, &c)?.value - nr_energy(params, 0, 0, &c)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::INVCM_TO_EV;
    use crate::potential::matched_coefficients;
    use crate::registry::{builtin_registry, h2_fit_variants};

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    fn h2() -> PotentialParams {
        builtin_registry().get("H2").unwrap().clone()
    }

    fn ar2() -> PotentialParams {
        builtin_registry().get("Ar2").unwrap().clone()
    }

    fn matched(p: &PotentialParams) -> CentrifugalCoeffs {
        matched_coefficients(p.alpha, p.molecule.re_angstrom, p.q, p.branch).unwrap()
    }

    #[test]
    fn assembled_triple_frozen_h2_ground() {
        let p = h2();
        let e = 2168.679_923_24 * INVCM_TO_EV;
        let asm = assemble(&p, 0, &s_wave_coeffs(), e, Regime::NonRelativistic).unwrap();
        assert!(rel(asm.k_tilde, 17.615_772_802_778) < 1e-11);
        assert!(rel(asm.s_tilde, 426.802_946_428_42) < 1e-12);
        assert!(asm.k_tilde > 0.0 && asm.s_tilde > 0.0);
    }

    #[test]
    fn assembled_triple_frozen_ar2_l1() {
        let p = ar2();
        let c = matched(&p);
        let e = -4.640_289_622_6 * INVCM_TO_EV;
        let asm = assemble(&p, 1, &c, e, Regime::NonRelativistic).unwrap();
        assert!(rel(asm.k_tilde, 8.416_217_016_832_9) < 1e-9);
        assert!(rel(asm.s_tilde, 22.306_717_432_496) < 1e-9);
    }

    #[test]
    fn assemble_at_rest_energy_collapses() {
        // W = 0 makes K^2 equal 2 mu c^2 D_e / (2 alpha hbar c)^2.
        let p = h2();
        let asm = assemble(&p, 0, &s_wave_coeffs(), 0.0, Regime::Relativistic).unwrap();
        let expect = (2.0 * p.molecule.mu_c2_ev() * p.molecule.de_ev()).sqrt()
            / (2.0 * p.alpha * HBAR_C);
        assert!(rel(asm.k_tilde, expect) < 1e-13);
    }

    #[test]
    fn assemble_signals_unbound() {
        let p = h2();
        // Energy far above the asymptote turns K^2 negative.
        let e = 2.0 * p.molecule.de_ev();
        assert!(matches!(
            assemble(&p, 0, &s_wave_coeffs(), e, Regime::NonRelativistic),
            Err(Error::NoBoundState(_))
        ));
    }

    #[test]
    fn nr_levels_frozen_h2_l0() {
        let p = h2();
        let c = s_wave_coeffs();
        let want = [
            2_168.679_923,
            6_306.662_055,
            10_183.828_08,
            13_802.059_41,
            17_163.215_66,
            20_269.134_98,
        ];
        for (n, w) in want.iter().enumerate() {
            let lev = nr_energy(&p, n as u32, 0, &c).unwrap();
            assert!(
                (lev.value / INVCM_TO_EV - w).abs() < 1e-5,
                "n = {n}: {} vs {w}",
                lev.value / INVCM_TO_EV
            );
            assert!(lev.residual.abs() < 1e-9);
        }
    }

    #[test]
    fn nr_levels_frozen_h2_rotational() {
        let p = h2();
        let c = matched(&p);
        let l1 = [2_193.744_153, 6_331.079_941, 10_207.604_28, 13_825.198_52];
        let l2 = [2_243.867_663, 6_379.910_808, 10_255.151_82, 13_871.471_93];
        for (n, w) in l1.iter().enumerate() {
            let lev = nr_energy(&p, n as u32, 1, &c).unwrap();
            assert!((lev.value / INVCM_TO_EV - w).abs() < 2e-5);
        }
        for (n, w) in l2.iter().enumerate() {
            let lev = nr_energy(&p, n as u32, 2, &c).unwrap();
            assert!((lev.value / INVCM_TO_EV - w).abs() < 2e-5);
        }
    }

    #[test]
    fn nr_levels_frozen_ar2() {
        let p = ar2();
        let c = matched(&p);
        let l0 = [
            15.382_777_38,
            41.191_005_15,
            61.461_932_81,
            76.854_615_75,
            87.918_790_92,
            95.115_935_7,
        ];
        let l1 = [-4.640_289_623, 25.758_379_3, 49.787_397_15, 68.302_830_12];
        let l2 = [-114.376_617_9, -58.472_114_41, -14.485_515_3, 19.913_295_8];
        for (n, w) in l0.iter().enumerate() {
            let lev = nr_energy(&p, n as u32, 0, &c).unwrap();
            assert!((lev.value / INVCM_TO_EV - w).abs() < 1e-6);
        }
        for (n, w) in l1.iter().enumerate() {
            let lev = nr_energy(&p, n as u32, 1, &c).unwrap();
            assert!((lev.value / INVCM_TO_EV - w).abs() < 1e-6);
        }
        for (n, w) in l2.iter().enumerate() {
            let lev = nr_energy(&p, n as u32, 2, &c).unwrap();
            assert!((lev.value / INVCM_TO_EV - w).abs() < 1e-6);
        }
    }

    #[test]
    fn table2_variant_rows() {
        let rows = h2_fit_variants();
        let want = [2_168.679_923, 2_164.446_092, 2_157.528_489, 2_147.534_552];
        for (p, w) in rows.iter().zip(want) {
            let lev = nr_energy(p, 0, 0, &s_wave_coeffs()).unwrap();
            assert!(
                (lev.value / INVCM_TO_EV - w).abs() < 1e-5,
                "{}: {} vs {w}",
                p.molecule.name,
                lev.value / INVCM_TO_EV
            );
        }
    }

    #[test]
    fn s_wave_transitions_frozen() {
        let p = ar2();
        let want = [
            25.808_227_8,
            46.079_155_4,
            61.471_838_4,
            72.536_013_5,
            79.733_158_3,
            83.452_964_1,
            84.026_331_4,
        ];
        for (i, w) in want.iter().enumerate() {
            let dt = transition(&p, (i + 1) as u32).unwrap();
            assert!((dt / INVCM_TO_EV - w).abs() < 1e-6);
        }
        assert_eq!(transition(&p, 0).unwrap(), 0.0);
        assert!(transition(&p, 8).is_err());
    }

    #[test]
    fn transition_is_level_difference() {
        let p = ar2();
        let c = s_wave_coeffs();
        let e3 = nr_energy(&p, 3, 0, &c).unwrap().value;
        let e0 = nr_energy(&p, 0, 0, &c).unwrap().value;
        assert_eq!(transition(&p, 3).unwrap(), e3 - e0);
    }

    #[test]
    fn spectrum_extent_frozen() {
        assert!(rel(nr_n_max(&ar2()).unwrap(), 6.689_121_727) < 1e-8);
        assert!(rel(nr_n_max(&h2()).unwrap(), 17.266_903_28) < 1e-8);
        // Relativistic analogue at the solved ground level is
        // indistinguishable at ten digits.
        let p = ar2();
        let w0 = nr_energy(&p, 0, 0, &s_wave_coeffs()).unwrap().value;
        assert!(rel(rel_n_max(&p, w0).unwrap(), 6.689_121_727) < 1e-9);
    }

    #[test]
    fn spectrum_extent_collapses_at_unit_sigma() {
        // At sigma = 1 the extent formula is negative for any strength:
        // no excited level fits, the clamped count is zero.
        for strength in [1e-3, 1.0, 1e4, 1e12] {
            let v = n_max_formula(strength, 1.0, 1.0).unwrap();
            assert!(v < 0.0, "strength {strength} gave {v}");
            assert_eq!(v.max(0.0).floor(), 0.0);
        }
    }

    #[test]
    fn ar2_monotone_up_to_extent() {
        let p = ar2();
        let c = s_wave_coeffs();
        let n_max = nr_n_max(&p).unwrap().floor() as u32;
        assert_eq!(n_max, 6);
        let mut prev = f64::NEG_INFINITY;
        for n in 0..=n_max {
            let e = nr_energy(&p, n, 0, &c).unwrap().value;
            assert!(e > prev, "not increasing at n = {n}");
            prev = e;
        }
        assert!(prev <= p.molecule.de_ev());
    }

    #[test]
    fn relativistic_root_matches_anchor_h2() {
        let p = h2();
        let c = s_wave_coeffs();
        let want_w = [
            2_168.679_922_936_86,
            6_306.662_052_080_37,
            10_183.828_072_815_1,
            13_802.059_395_140_2,
        ];
        for (n, w_cm) in want_w.iter().enumerate() {
            let lev = solve_level_relativistic(&p, n as u32, 0, &c).unwrap();
            assert!(
                (lev.value / INVCM_TO_EV - w_cm).abs() < 1e-6,
                "n = {n}: {} vs {w_cm}",
                lev.value / INVCM_TO_EV
            );
            assert!(lev.residual.abs() < 1e-9);
            // The shift below the closed-form limit is tiny but resolvable.
            let e_nr = nr_energy(&p, n as u32, 0, &c).unwrap().value;
            let shift_cm = (lev.value - e_nr) / INVCM_TO_EV;
            assert!(shift_cm < 0.0 && shift_cm.abs() < 2e-5, "shift {shift_cm}");
        }
    }

    #[test]
    fn relativistic_root_matches_anchor_ar2() {
        let p = ar2();
        let lev = solve_level_relativistic(&p, 0, 0, &s_wave_coeffs()).unwrap();
        let e_nr = nr_energy(&p, 0, 0, &s_wave_coeffs()).unwrap().value;
        assert!(((lev.value - e_nr) / INVCM_TO_EV).abs() < 1e-9);
    }

    #[test]
    fn relativistic_rotational_root() {
        let p = h2();
        let c = matched(&p);
        let lev = solve_level_relativistic(&p, 1, 1, &c).unwrap();
        assert!((lev.value / INVCM_TO_EV - 6_331.079_938_964_14).abs() < 1e-6);
    }

    #[test]
    fn scan_finds_bracketed_roots_and_is_stable() {
        let p = h2();
        let c = s_wave_coeffs();
        let anchor = nr_energy(&p, 2, 0, &c).unwrap().value;
        let window = (anchor - 0.05, anchor + 0.05, 400);
        let roots = solve_relativistic(&p, 2, 0, &c, window).unwrap();
        assert_eq!(roots.len(), 1);
        let dense = solve_relativistic(&p, 2, 0, &c, (anchor - 0.05, anchor + 0.05, 800)).unwrap();
        assert_eq!(dense.len(), 1);
        assert!(rel(roots[0].value, dense[0].value) < 1e-11);
        // Shrinking the bracket around the isolated root leaves it fixed.
        let w = roots[0].value;
        let tight = solve_relativistic(&p, 2, 0, &c, (w - 1e-4, w + 1e-4, 8)).unwrap();
        assert_eq!(tight.len(), 1);
        assert!(rel(tight[0].value, w) < 1e-11);
    }

    #[test]
    fn scan_empty_window_is_ok() {
        let p = h2();
        let c = s_wave_coeffs();
        // A window far from any root for n = 0.
        let roots = solve_relativistic(&p, 0, 0, &c, (1.0, 1.2, 50)).unwrap();
        assert!(roots.is_empty());
    }

    #[test]
    fn scan_rejects_bad_windows() {
        let p = h2();
        let c = s_wave_coeffs();
        assert!(solve_relativistic(&p, 0, 0, &c, (0.5, 0.1, 50)).is_err());
        let below = -2.1 * p.molecule.mu_c2_ev();
        assert!(solve_relativistic(&p, 0, 0, &c, (below, 0.1, 50)).is_err());
    }

    #[test]
    fn s_wave_residual_consistency() {
        // The general residual with zeroed coefficients must match a direct
        // transcription of the l = 0 condition.
        let p = ar2();
        let mol = &p.molecule;
        let hc2 = HBAR_C * HBAR_C;
        let (d, s, a) = (p.depth_ev(), p.sigma_eff(), p.alpha);
        for n in 0..3u32 {
            for i in 0..5 {
                let w = (5.0 + 15.0 * i as f64) * INVCM_TO_EV;
                let a2sq = 2.0 * mol.mu_c2_ev() + w;
                let lhs = 2.0 * (a2sq * (mol.de_ev() - w)).sqrt();
                let den = (4.0 * a2sq * d * s * s + a * a * hc2).sqrt()
                    + a * HBAR_C * (2.0 * n as f64 + 1.0);
                let expect = lhs - (4.0 * a2sq * d * s - den * den) / den;
                let got = relativistic_residual(&p, n, 0, &s_wave_coeffs(), w).unwrap();
                assert!(rel(got, expect) < 1e-12);
            }
        }
    }

    #[test]
    fn closed_form_matches_engine_route() {
        // Rearranged quantization identity must reproduce the closed form
        // across molecules, levels, and coefficient variants.
        let ps = [h2(), ar2()];
        for p in &ps {
            let c = matched(p);
            for n in 0..4u32 {
                for l in 0..3u32 {
                    let lev = nr_energy(p, n, l, &c).unwrap();
                    assert!(
                        lev.residual.abs() < 1e-10,
                        "{} n={n} l={l}: {}",
                        p.molecule.name,
                        lev.residual
                    );
                }
            }
        }
    }
}
