//! Independent finite-difference eigenvalue solver for the radial problem.
//!
//! Three-point Laplacian on a uniform Dirichlet grid, eigenvalues of the
//! symmetric tridiagonal matrix by Sturm-sequence bisection. Results are
//! accepted only after a Richardson ladder (grid spacing halved per rung)
//! shows consecutive extrapolants agreeing below a fixed gate, so every
//! returned eigenvalue carries a measured convergence certificate.
//!
//! The solver is deliberately independent of the analytic machinery: it sees
//! only the potential as a callable and the reduced mass.

use crate::constants::{HBAR_C, INVCM_TO_EV};
use crate::error::{Error, Result};
use crate::potential::{approx_centrifugal, matched_coefficients, potential_value};
use crate::registry::PotentialParams;
use crate::spectrum::{nr_n_max, EnergyLevel};
use crate::ExecMode;

/// Acceptance gate for the refinement ladder, in eV.
const LADDER_GATE_EV: f64 = 1e-3 * INVCM_TO_EV;

/// Energies above this are treated as a hard wall; potential poles and
/// overflow map here so the matrix stays finite.
const WALL_EV: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub r_min: f64,
    pub r_max: f64,
    pub points: usize,
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.r_min > 0.0) {
            return Err(Error::RejectedInput(format!(
                "grid must start above the origin, got r_min = {}",
                self.r_min
            )));
        }
        if !(self.r_max > self.r_min) {
            return Err(Error::RejectedInput(format!(
                "grid must be ordered, got [{}, {}]",
                self.r_min, self.r_max
            )));
        }
        if self.points < 1000 {
            return Err(Error::RejectedInput(format!(
                "grid too coarse: {} points (minimum 1000)",
                self.points
            )));
        }
        Ok(())
    }
}

/// Default box: inner wall well inside the repulsive core, outer wall far
/// past the dissociation shoulder of the shallower wells.
pub fn default_grid(params: &PotentialParams) -> GridSpec {
    let re = params.molecule.re_angstrom;
    GridSpec {
        r_min: 1e-3 * re,
        r_max: 12.0 * re,
        points: 20_000,
    }
}

/// Lowest `count` eigenvalues of -(hbar^2/2mu) d^2/dr^2 + V(r), V supplied
/// as a callable, with the refinement ladder applied. Energies in eV.
pub fn fd_custom<V: Fn(f64) -> f64 + Sync>(
    potential: V,
    mu_c2: f64,
    grid: &GridSpec,
    count: usize,
    mode: ExecMode,
) -> Result<Vec<f64>> {
    grid.validate()?;
    if count == 0 {
        return Err(Error::RejectedInput("need at least one eigenvalue".into()));
    }
    if !(mu_c2 > 0.0) {
        return Err(Error::RejectedInput(format!("bad mass term {mu_c2}")));
    }
    let mut pts = grid.points;
    let coarse = solve_once(&potential, mu_c2, grid, pts, count, mode);
    pts = 2 * pts - 1;
    let mut mid = solve_once(&potential, mu_c2, grid, pts, count, mode);
    let mut prev_ex = richardson(&coarse, &mid);
    // Two more rungs available: 4N-3 and 8N-7 points.
    for _ in 0..2 {
        pts = 2 * pts - 1;
        let fine = solve_once(&potential, mu_c2, grid, pts, count, mode);
        let ex = richardson(&mid, &fine);
        let worst = ex
            .iter()
            .zip(prev_ex.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        if worst < LADDER_GATE_EV {
            return Ok(ex);
        }
        prev_ex = ex;
        mid = fine;
    }
    Err(Error::Resolution {
        suggested_points: 2 * pts - 1,
    })
}

/// Lowest `count` bound energies for a registered parameter set. The
/// centrifugal term is exact l(l+1)/r^2, or the quadratic approximant in
/// the deformed basis when `exact_centrifugal` is false.
pub fn fd_eigenvalues(
    params: &PotentialParams,
    l: u32,
    grid: &GridSpec,
    count: usize,
    exact_centrifugal: bool,
    mode: ExecMode,
) -> Result<Vec<f64>> {
    grid.validate()?;
    let capacity = nr_n_max(params)?.max(0.0).floor() as usize + 1;
    if count > capacity {
        return Err(Error::RejectedInput(format!(
            "requested {count} levels, well supports {capacity}"
        )));
    }
    let mu_c2 = params.molecule.mu_c2_ev();
    let ll = (l * (l + 1)) as f64;
    let p = params.clone();
    if exact_centrifugal {
        let v = move |r: f64| {
            let cent = ll * HBAR_C * HBAR_C / (2.0 * mu_c2 * r * r);
            match potential_value(&p, r) {
                Ok(base) if (base + cent).is_finite() => base + cent,
                _ => WALL_EV,
            }
        };
        fd_custom(v, mu_c2, grid, count, mode)
    } else {
        let coeffs = matched_coefficients(p.alpha, p.molecule.re_angstrom, p.q, p.branch)?;
        let scale = HBAR_C * HBAR_C / (2.0 * mu_c2);
        let v = move |r: f64| {
            let base = potential_value(&p, r);
            let cent = approx_centrifugal(&coeffs, l, &p, r);
            match (base, cent) {
                (Ok(a), Ok(b)) if (a + scale * b).is_finite() => a + scale * b,
                _ => WALL_EV,
            }
        };
        fd_custom(v, mu_c2, grid, count, mode)
    }
}

/// Known-spectrum self-check: a stiff harmonic well solved on a fresh grid.
/// Returns the worst relative deviation from (n + 1/2) hbar omega over the
/// first six levels.
pub fn harmonic_self_test(mode: ExecMode) -> Result<f64> {
    let (mu_c2, k, r0) = (4.7e8, 50.0, 1.5);
    let a = (HBAR_C * HBAR_C / (mu_c2 * k)).powf(0.25);
    let grid = GridSpec {
        r_min: r0 - 8.0 * a,
        r_max: r0 + 8.0 * a,
        points: 20_001,
    };
    let vals = fd_custom(|r| 0.5 * k * (r - r0) * (r - r0), mu_c2, &grid, 6, mode)?;
    let hw = HBAR_C * (k / mu_c2).sqrt();
    let mut worst = 0.0f64;
    for (n, &e) in vals.iter().enumerate() {
        let exact = (n as f64 + 0.5) * hw;
        worst = worst.max(((e - exact) / exact).abs());
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelDeviation {
    pub n: u32,
    pub analytic_ev: f64,
    pub numeric_ev: f64,
    pub abs_ev: f64,
    pub rel: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareReport {
    pub rows: Vec<LevelDeviation>,
    pub max_abs_ev: f64,
    pub max_rel: f64,
    pub tolerance_ev: f64,
    pub pass: bool,
}

/// Per-level deviation table between an analytic level list and oracle
/// energies, judged against a caller-supplied absolute tolerance in eV.
pub fn compare_report(
    analytic: &[EnergyLevel],
    numeric: &[f64],
    tolerance_ev: f64,
) -> Result<CompareReport> {
    if analytic.len() != numeric.len() {
        return Err(Error::Alignment {
            left: analytic.len(),
            right: numeric.len(),
        });
    }
    let mut rows = Vec::with_capacity(numeric.len());
    let (mut max_abs, mut max_rel) = (0.0f64, 0.0f64);
    for (lev, &num) in analytic.iter().zip(numeric.iter()) {
        let abs = (lev.value - num).abs();
        let rel = abs / num.abs().max(1e-300);
        max_abs = max_abs.max(abs);
        max_rel = max_rel.max(rel);
        rows.push(LevelDeviation {
            n: lev.n,
            analytic_ev: lev.value,
            numeric_ev: num,
            abs_ev: abs,
            rel,
        });
    }
    Ok(CompareReport {
        rows,
        max_abs_ev: max_abs,
        max_rel,
        tolerance_ev,
        pass: max_abs <= tolerance_ev,
    })
}

fn richardson(coarse: &[f64], fine: &[f64]) -> Vec<f64> {
    coarse
        .iter()
        .zip(fine.iter())
        .map(|(c, f)| (4.0 * f - c) / 3.0)
        .collect()
}

/// Single-grid solve: assemble the tridiagonal operator and extract the
/// lowest eigenvalues, one independent bisection per index.
fn solve_once<V: Fn(f64) -> f64 + Sync>(
    potential: &V,
    mu_c2: f64,
    grid: &GridSpec,
    points: usize,
    count: usize,
    mode: ExecMode,
) -> Vec<f64> {
    let h = (grid.r_max - grid.r_min) / (points - 1) as f64;
    let t = HBAR_C * HBAR_C / (2.0 * mu_c2 * h * h);
    let dim = points - 2;
    let mut d = Vec::with_capacity(dim);
    for i in 1..points - 1 {
        let r = grid.r_min + h * i as f64;
        d.push(2.0 * t + potential(r).min(WALL_EV));
    }
    let e2 = t * t;
    // Gershgorin bounds; off-diagonal magnitude is t on both sides.
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &di in &d {
        lo = lo.min(di - 2.0 * t);
        hi = hi.max(di + 2.0 * t);
    }
    run_indexed(count, mode, |k| kth_eigenvalue(&d, e2, k, lo, hi))
}

/// Number of eigenvalues strictly below x, by the LDL^T sign count.
fn count_below(d: &[f64], e2: f64, x: f64) -> usize {
    let mut cnt = 0usize;
    let mut q = 0.0f64;
    for (i, &di) in d.iter().enumerate() {
        q = if i == 0 { di - x } else { (di - x) - e2 / q };
        if q.abs() < 1e-290 {
            q = -1e-290;
        }
        if q < 0.0 {
            cnt += 1;
        }
    }
    cnt
}

fn kth_eigenvalue(d: &[f64], e2: f64, k: usize, lo0: f64, hi0: f64) -> f64 {
    let (mut lo, mut hi) = (lo0, hi0);
    for _ in 0..220 {
        let mid = 0.5 * (lo + hi);
        if !(mid > lo && mid < hi) {
            break;
        }
        if count_below(d, e2, mid) >= k + 1 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-10 * hi.abs().max(lo.abs()).max(1e-30) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Maps an index range through `f`, in parallel when both the feature and
/// the runtime mode ask for it. Results are positionally ordered either
/// way, so the two modes agree bit for bit.
fn run_indexed<F: Fn(usize) -> f64 + Sync>(count: usize, mode: ExecMode, f: F) -> Vec<f64> {
    #[cfg(feature = "parallel")]
    if mode == ExecMode::Parallel {
        use rayon::prelude::*;
        return (0..count).into_par_iter().map(&f).collect();
    }
    let _ = mode;
    (0..count).map(f).collect()
}
