//! Self-contained special-function kernel: log-gamma, Pochhammer symbols,
//! Gauss 2F1, terminating 3F2 at unit argument, and Jacobi polynomials.
//!
//! Everything here is plain f64 with explicit convergence reporting; no
//! external math crates.

use crate::error::{Error, Result};

/// Outcome of a series evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesResult {
    pub value: f64,
    pub terms_used: usize,
    pub converged: bool,
    /// Magnitude of the last term relative to the sum; 0 for exact finite sums.
    pub truncation_estimate: f64,
}

const SERIES_TOL: f64 = 1e-14;
const SERIES_CAP: usize = 100_000;

/// Lanczos coefficients, g = 7, 9 terms.
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of |Gamma(x)| together with the sign of Gamma(x).
/// Poles at non-positive integers are rejected.
pub fn ln_gamma(x: f64) -> Result<(f64, i32)> {
    if !x.is_finite() {
        return Err(Error::RejectedInput(format!("ln_gamma({x})")));
    }
    if x <= 0.0 && x == x.floor() {
        return Err(Error::Domain(format!("gamma pole at {x}")));
    }
    if x < 0.5 {
        // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x).
        let (lg, _) = ln_gamma(1.0 - x)?;
        let s = (std::f64::consts::PI * x).sin();
        let value = (std::f64::consts::PI / s.abs()).ln() - lg;
        let sign = if s < 0.0 { -1 } else { 1 };
        return Ok((value, sign));
    }
    let xm1 = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (xm1 + i as f64);
    }
    let t = xm1 + 7.5;
    let half_ln_2pi = 0.918_938_533_204_672_74;
    Ok((half_ln_2pi + (xm1 + 0.5) * t.ln() - t + acc.ln(), 1))
}

/// Rising factorial (m)_n = m (m+1) ... (m+n-1), with (m)_0 = 1.
pub fn pochhammer(m: f64, n: u32) -> f64 {
    let mut acc = 1.0;
    for k in 0..n {
        acc *= m + k as f64;
    }
    acc
}

fn nonpositive_integer_index(a: f64) -> Option<usize> {
    if a <= 0.0 && a == a.floor() && a >= -(SERIES_CAP as f64) {
        Some((-a) as usize)
    } else {
        None
    }
}

/// Gauss hypergeometric 2F1(a, b; c; z) by direct power series.
///
/// Converges for |z| < 1; when a or b is a non-positive integer the series
/// terminates and is summed exactly regardless of z. Terms are rescaled when
/// they risk overflow so very large finite sums still accumulate.
pub fn gauss_2f1(a: f64, b: f64, c: f64, z: f64) -> Result<SeriesResult> {
    let term_a = nonpositive_integer_index(a);
    let term_b = nonpositive_integer_index(b);
    let terminates = term_a.or(term_b).map(|ka| match (term_a, term_b) {
        (Some(x), Some(y)) => x.min(y),
        _ => ka,
    });
    if terminates.is_none() && z.abs() >= 1.0 {
        return Err(Error::RejectedInput(format!(
            "2F1 series requires |z| < 1 unless terminating, got z = {z}"
        )));
    }
    if let Some(kc) = nonpositive_integer_index(c) {
        // A pole in c is tolerable only if termination strikes first.
        if terminates.map_or(true, |kt| kt > kc) {
            return Err(Error::Domain(format!("2F1 parameter c = {c} hits a pole")));
        }
    }

    // Scaled accumulation: value = (sum + running term stream) * 2^(512*shift).
    let mut sum = 1.0_f64;
    let mut term = 1.0_f64;
    let mut shift: i32 = 0;
    let mut small_streak = 0;
    let mut p: usize = 0;
    loop {
        if let Some(k) = terminates {
            if p >= k {
                let value = rescale(sum, shift);
                return Ok(SeriesResult {
                    value,
                    terms_used: p + 1,
                    converged: true,
                    truncation_estimate: 0.0,
                });
            }
        }
        if p >= SERIES_CAP {
            let value = rescale(sum, shift);
            return Ok(SeriesResult {
                value,
                terms_used: p,
                converged: false,
                truncation_estimate: (term / sum).abs(),
            });
        }
        let pf = p as f64;
        term *= (a + pf) * (b + pf) / ((c + pf) * (pf + 1.0)) * z;
        sum += term;
        p += 1;
        if term.abs().max(sum.abs()) > 1e290 {
            sum /= 2f64.powi(512);
            term /= 2f64.powi(512);
            shift += 1;
        }
        if terminates.is_none() {
            if term.abs() < SERIES_TOL * sum.abs() {
                small_streak += 1;
                if small_streak >= 3 {
                    return Ok(SeriesResult {
                        value: rescale(sum, shift),
                        terms_used: p + 1,
                        converged: true,
                        truncation_estimate: (term / sum).abs(),
                    });
                }
            } else {
                small_streak = 0;
            }
        }
    }
}

fn rescale(sum: f64, shift: i32) -> f64 {
    if shift == 0 {
        sum
    } else {
        sum * 2f64.powi(512).powi(shift)
    }
}

/// Terminating generalized hypergeometric 3F2(a1, a2, a3; b1, b2; 1).
///
/// One of the upper parameters must be a non-positive integer; the finite sum
/// is evaluated exactly. Non-terminating parameter sets are rejected because
/// convergence at unit argument is not assumed.
pub fn hyper_3f2_unit(a1: f64, a2: f64, a3: f64, b1: f64, b2: f64) -> Result<SeriesResult> {
    let k = [a1, a2, a3]
        .iter()
        .filter_map(|&a| nonpositive_integer_index(a))
        .min()
        .ok_or_else(|| {
            Error::RejectedInput(
                "3F2 at unit argument requires a non-positive integer upper parameter".into(),
            )
        })?;
    let mut sum = 1.0_f64;
    let mut term = 1.0_f64;
    for p in 0..k {
        let pf = p as f64;
        let den = (b1 + pf) * (b2 + pf);
        if den == 0.0 {
            return Err(Error::Domain(format!(
                "3F2 lower parameter pole at term {p} (b1 = {b1}, b2 = {b2})"
            )));
        }
        term *= (a1 + pf) * (a2 + pf) * (a3 + pf) / (den * (pf + 1.0));
        sum += term;
    }
    Ok(SeriesResult {
        value: sum,
        terms_used: k + 1,
        converged: true,
        truncation_estimate: 0.0,
    })
}

/// Jacobi polynomial P_n^(mu, nu)(x) by the three-term recurrence.
/// Requires mu > -1 and nu > -1 for the classical weight to make sense.
pub fn jacobi_poly(n: u32, mu: f64, nu: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut pm1 = 1.0;
    let mut p = 0.5 * ((mu - nu) + (mu + nu + 2.0) * x);
    for k in 2..=n {
        let kf = k as f64;
        let s = 2.0 * kf + mu + nu;
        let c1 = 2.0 * kf * (kf + mu + nu) * (s - 2.0);
        let c2 = (s - 1.0) * (mu * mu - nu * nu);
        let c3 = (s - 2.0) * (s - 1.0) * s;
        let c4 = 2.0 * (kf + mu - 1.0) * (kf + nu - 1.0) * s;
        let next = ((c2 + c3 * x) * p - c4 * pm1) / c1;
        pm1 = p;
        p = next;
    }
    p
}

/// Double-double scalar: hi + lo with |lo| <= ulp(hi)/2.
/// Just enough arithmetic for the terminating Jacobi sum below, where
/// alternating terms reach ~1e9 while the value is O(1); plain f64 partial
/// sums would surrender ten digits to cancellation.
#[derive(Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd { hi: s, lo: b - (s - a) }
}

fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let v = s - a;
    Dd { hi: s, lo: (a - (s - v)) + (b - v) }
}

fn two_prod(a: f64, b: f64) -> Dd {
    let p = a * b;
    Dd { hi: p, lo: a.mul_add(b, -p) }
}

impl Dd {
    fn new(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    fn add(self, o: Dd) -> Dd {
        let s = two_sum(self.hi, o.hi);
        quick_two_sum(s.hi, s.lo + self.lo + o.lo)
    }

    fn mul(self, o: Dd) -> Dd {
        let p = two_prod(self.hi, o.hi);
        quick_two_sum(p.hi, p.lo + self.hi * o.lo + self.lo * o.hi)
    }

    fn scale(self, f: f64) -> Dd {
        let p = two_prod(self.hi, f);
        quick_two_sum(p.hi, p.lo + self.lo * f)
    }

    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r1 = self.add(o.scale(-q1));
        let q2 = r1.hi / o.hi;
        let r2 = r1.add(o.scale(-q2));
        let q3 = r2.hi / o.hi;
        quick_two_sum(q1, q2).add(Dd::new(q3))
    }

    fn value(self) -> f64 {
        self.hi + self.lo
    }
}

/// Jacobi polynomial through its hypergeometric representation,
/// P_n^(mu, nu)(1 - 2s) = ((mu+1)_n / n!) 2F1(-n, 1+mu+nu+n; mu+1; s).
/// Kept as an independent cross-check path for `jacobi_poly`.
///
/// Negative x is routed through P_n^(mu, nu)(-x) = (-1)^n P_n^(nu, mu)(x)
/// so the series argument stays at or below one half, and the terminating
/// sum runs in compensated arithmetic; both are needed to hold the
/// cross-check near machine precision up to n ~ 20.
pub fn jacobi_poly_hypergeometric(n: u32, mu: f64, nu: f64, x: f64) -> Result<f64> {
    if x < 0.0 {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        return Ok(sign * jacobi_poly_hypergeometric(n, nu, mu, -x)?);
    }
    // z = (1 - x)/2 with the subtraction's rounding error carried along.
    let z = two_sum(1.0, -x).scale(0.5);
    let b = two_sum(mu, nu).add(Dd::new(1.0 + n as f64));
    let c = two_sum(mu, 1.0);
    let mut term = Dd::new(1.0);
    let mut sum = Dd::new(1.0);
    for p in 0..n {
        let pf = p as f64;
        let num = Dd::new(pf - n as f64).mul(b.add(Dd::new(pf))).mul(z);
        let den = c.add(Dd::new(pf)).scale(pf + 1.0);
        term = term.mul(num).div(den);
        sum = sum.add(term);
    }
    let mut poch = Dd::new(1.0);
    let mut nfact = Dd::new(1.0);
    for k in 0..n {
        poch = poch.mul(c.add(Dd::new(k as f64)));
        nfact = nfact.scale(k as f64 + 1.0);
    }
    Ok(poch.div(nfact).mul(sum).value())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn ln_gamma_known_points() {
        assert!(ln_gamma(1.0).unwrap().0.abs() < 1e-14);
        assert!(ln_gamma(2.0).unwrap().0.abs() < 1e-14);
        let (half, _) = ln_gamma(0.5).unwrap();
        assert!(rel(half, std::f64::consts::PI.sqrt().ln()) < 1e-14);
        // Independent high-precision value.
        let (v, s) = ln_gamma(20.3).unwrap();
        assert_eq!(s, 1);
        assert!(rel(v, 40.233_336_835_437_24) < 1e-13);
    }

    #[test]
    fn ln_gamma_matches_downward_recursion() {
        // Gamma(20.3) = 19.3 * 18.3 * ... * 0.3 * Gamma(0.3)
        let (g03, _) = ln_gamma(0.3).unwrap();
        let mut acc = g03;
        let mut x = 0.3f64;
        while x < 20.0 {
            acc += x.ln();
            x += 1.0;
        }
        let (direct, _) = ln_gamma(20.3).unwrap();
        assert!(rel(direct, acc) < 1e-12);
    }

    #[test]
    fn ln_gamma_recurrence_property() {
        let mut x = 0.1;
        while x < 100.0 {
            let (a, _) = ln_gamma(x + 1.0).unwrap();
            let (b, _) = ln_gamma(x).unwrap();
            assert!(
                (a - b - x.ln()).abs() < 1e-12 * a.abs().max(1.0),
                "recurrence failed at x = {x}"
            );
            x *= 1.7;
        }
    }

    #[test]
    fn ln_gamma_rejects_poles() {
        assert!(ln_gamma(0.0).is_err());
        assert!(ln_gamma(-3.0).is_err());
        // Negative non-integers are fine and carry a sign.
        let (_, sign) = ln_gamma(-0.5).unwrap();
        assert_eq!(sign, -1);
    }

    #[test]
    fn pochhammer_basics() {
        assert_eq!(pochhammer(3.7, 0), 1.0);
        assert_eq!(pochhammer(1.0, 5), 120.0);
        assert_eq!(pochhammer(0.0, 3), 0.0);
        assert_eq!(pochhammer(0.0, 0), 1.0);
    }

    #[test]
    fn gauss_2f1_leading_term() {
        let r = gauss_2f1(0.3, -2.2, 4.4, 0.0).unwrap();
        assert_eq!(r.value, 1.0);
        assert!(r.converged);
    }

    #[test]
    fn gauss_2f1_binomial_identity() {
        // 2F1(a, b; b; z) = (1 - z)^(-a)
        let r = gauss_2f1(1.7, 2.9, 2.9, 0.3).unwrap();
        assert!(rel(r.value, (1.0 - 0.3f64).powf(-1.7)) < 1e-12);
    }

    #[test]
    fn gauss_2f1_terminating_matches_manual_sum() {
        let r = gauss_2f1(-3.0, 2.5, 1.2, 0.4).unwrap();
        let mut manual = 0.0;
        for p in 0..=3u32 {
            let mut fact = 1.0;
            for k in 1..=p {
                fact *= k as f64;
            }
            manual += pochhammer(-3.0, p) * pochhammer(2.5, p) / (pochhammer(1.2, p) * fact)
                * 0.4f64.powi(p as i32);
        }
        assert!(rel(r.value, manual) < 1e-14);
        assert!(r.converged);
        assert_eq!(r.terms_used, 4);
        // Independent high-precision value.
        assert!(rel(r.value, -0.207_386_363_636_363_6) < 1e-13);
    }

    #[test]
    fn gauss_2f1_rejects_divergent_argument() {
        assert!(gauss_2f1(0.5, 0.7, 1.1, 1.5).is_err());
    }

    #[test]
    fn hyper_3f2_trivial_cases() {
        let one = hyper_3f2_unit(4.2, 0.0, 1.1, 2.2, 3.3).unwrap();
        assert_eq!(one.value, 1.0);
        let two = hyper_3f2_unit(4.2, -1.0, 1.1, 2.2, 3.3).unwrap();
        assert!(rel(two.value, 1.0 - 4.2 * 1.1 / (2.2 * 3.3)) < 1e-14);
    }

    #[test]
    fn hyper_3f2_matches_manual_sum() {
        let r = hyper_3f2_unit(2.4, -3.0, 5.1, 6.2, 3.4).unwrap();
        let mut manual = 0.0;
        for p in 0..=3u32 {
            let mut fact = 1.0;
            for k in 1..=p {
                fact *= k as f64;
            }
            manual += pochhammer(2.4, p) * pochhammer(-3.0, p) * pochhammer(5.1, p)
                / (pochhammer(6.2, p) * pochhammer(3.4, p) * fact);
        }
        assert!(rel(r.value, manual) < 1e-14);
        assert!(rel(r.value, 0.130_273_360_407_113_4) < 1e-13);
        assert!(hyper_3f2_unit(1.1, 2.2, 3.3, 4.4, 5.5).is_err());
    }

    #[test]
    fn jacobi_low_orders() {
        assert_eq!(jacobi_poly(0, 0.3, 0.9, -0.4), 1.0);
        // x = 1 gives (mu+1)_n / n!
        for n in 0..6u32 {
            let mut nfact = 1.0;
            for k in 1..=n {
                nfact *= k as f64;
            }
            let expect = pochhammer(1.7, n) / nfact;
            assert!(rel(jacobi_poly(n, 0.7, 1.3, 1.0), expect) < 1e-13);
        }
    }

    #[test]
    fn jacobi_frozen_point() {
        let v = jacobi_poly(5, 0.7, 1.3, -0.2);
        assert!((v - (-0.636_005_25)).abs() < 1e-10, "got {v}");
        let h = jacobi_poly_hypergeometric(5, 0.7, 1.3, -0.2).unwrap();
        assert!(rel(v, h) < 1e-12);
    }

    #[test]
    fn jacobi_dual_path_large_parameters() {
        // Parameters sized like the light-molecule wave function exponents.
        let (mu, nu) = (2.0 * 14.503_416_336_689, 2.0 * 426.802_946_428_42);
        let x = 1.0 - 2.0 * 0.0385;
        let rec = jacobi_poly(3, mu, nu, x);
        let hyp = jacobi_poly_hypergeometric(3, mu, nu, x).unwrap();
        assert!(rel(rec, hyp) < 1e-12);
        assert!(rel(rec, 41.699_817_030_428_25) < 1e-11, "got {rec}");
    }
}
