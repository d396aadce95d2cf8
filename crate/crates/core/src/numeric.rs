//! Floating-point evaluation on the upper half-plane: q-series at a point,
//! reduction to the fundamental domain, inversion of `j`, the point `û_p`
//! with `j(û_p) = -P_p(ρ)`, and numeric checks of identities that exact
//! series arithmetic cannot reach.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::modcurve::{ProjectivePoint, Sl2};
use crate::modforms::{
    j_series, p_series, phi_series, AlphaTable, GenusZeroPrime, ModformsError, ShiftConstant,
};
use crate::qseries::LaurentSeries;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericError {
    #[error("point {re} + {im}i is not in the upper half-plane")]
    NotInUpperHalfPlane { re: f64, im: f64 },
    #[error("reduction did not terminate after {0} steps")]
    IterationCap(usize),
    #[error("no convergence for target {target}: residual {residual:e} after {iterations} iterations")]
    NoConvergence { target: Complex64, residual: f64, iterations: usize },
    #[error("series order {available} too small, need at least {needed}")]
    InsufficientOrder { needed: usize, available: usize },
    #[error("truncation tail {tail:e} exceeds tolerance {tolerance:e}")]
    TailTooLarge { tail: f64, tolerance: f64 },
    #[error(transparent)]
    Modforms(#[from] ModformsError),
}

/// Tolerance and iteration budget for the numeric routines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Precision {
    pub tolerance: f64,
    pub max_iter: usize,
}

impl Default for Precision {
    fn default() -> Self {
        Precision { tolerance: 1e-8, max_iter: 200 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpperHalfPoint {
    re: f64,
    im: f64,
}

impl UpperHalfPoint {
    pub fn new(re: f64, im: f64) -> Result<Self, NumericError> {
        if !(im > 0.0) || !re.is_finite() || !im.is_finite() {
            return Err(NumericError::NotInUpperHalfPlane { re, im });
        }
        Ok(UpperHalfPoint { re, im })
    }

    pub fn from_complex(z: Complex64) -> Result<Self, NumericError> {
        Self::new(z.re, z.im)
    }

    pub fn re(&self) -> f64 {
        self.re
    }

    pub fn im(&self) -> f64 {
        self.im
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    /// `e^{2πiτ}`.
    pub fn q(&self) -> Complex64 {
        (Complex64::i() * 2.0 * PI * self.to_complex()).exp()
    }

    pub fn i() -> Self {
        UpperHalfPoint { re: 0.0, im: 1.0 }
    }

    /// `ρ = (-1 + i√3)/2`, the zero of `j` in the fundamental domain.
    pub fn rho() -> Self {
        UpperHalfPoint { re: -0.5, im: 3f64.sqrt() / 2.0 }
    }

    /// `τ_0 = i/√p`.
    pub fn tau0(p: u32) -> Self {
        UpperHalfPoint { re: 0.0, im: 1.0 / (p as f64).sqrt() }
    }

    /// `τ_1 = (τ_0 - 1)/2`, or `(i - 1)/2` at `p = 2`.
    pub fn tau1(p: u32) -> Self {
        if p == 2 {
            UpperHalfPoint { re: -0.5, im: 0.5 }
        } else {
            UpperHalfPoint { re: -0.5, im: 0.5 / (p as f64).sqrt() }
        }
    }

    /// `γ τ`.
    pub fn act(&self, g: &Sl2) -> Self {
        let z = self.to_complex();
        let w = (z * g.a as f64 + g.b as f64) / (z * g.c as f64 + g.d as f64);
        UpperHalfPoint { re: w.re, im: w.im }
    }

    /// `-1/(pτ)`.
    pub fn fricke(&self, p: u32) -> Self {
        let w = -1.0 / (self.to_complex() * p as f64);
        UpperHalfPoint { re: w.re, im: w.im }
    }

    /// `(τ + k)/p`.
    pub fn hecke_branch(&self, k: u32, p: u32) -> Self {
        UpperHalfPoint { re: (self.re + k as f64) / p as f64, im: self.im / p as f64 }
    }

    pub fn distance(&self, other: &UpperHalfPoint) -> f64 {
        (self.to_complex() - other.to_complex()).norm()
    }
}

impl fmt::Display for UpperHalfPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.15}{:+.15}i", self.re, self.im)
    }
}

/// A point `u` of the fundamental domain and `γ` with `γ u` equal to the
/// input point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedPoint {
    pub u: UpperHalfPoint,
    pub gamma: Sl2,
}

impl ReducedPoint {
    /// The `Γ_0(p)`-coset of `γ` as a point of `P^1(F_p)`.
    pub fn coset(&self, p: u32) -> ProjectivePoint {
        ProjectivePoint::from_row(self.gamma.c, self.gamma.d, p)
    }
}

const BOUNDARY_EPS: f64 = 1e-9;

/// Whether `u` lies in the half-open fundamental domain: `|u| ≥ 1` and
/// `-1/2 ≤ Re u ≤ 0`, or `|u| > 1` and `0 < Re u < 1/2`.
pub fn in_fundamental_domain(u: &UpperHalfPoint) -> bool {
    let n = u.re * u.re + u.im * u.im;
    if u.re <= BOUNDARY_EPS {
        u.re >= -0.5 - BOUNDARY_EPS && n >= 1.0 - BOUNDARY_EPS
    } else {
        u.re < 0.5 - BOUNDARY_EPS && n > 1.0 + BOUNDARY_EPS
    }
}

/// Reduces `τ` into the fundamental domain by translations and `τ ↦ -1/τ`.
/// Points within `1e-9` of the boundary are moved onto its closed half.
pub fn reduce_to_r(tau: &UpperHalfPoint, max_iter: usize) -> Result<ReducedPoint, NumericError> {
    // z = m τ throughout; γ = m⁻¹ at the end
    let mut m = Sl2::IDENTITY;
    let mut z = *tau;
    for _ in 0..max_iter {
        let k = (z.re + 0.5).floor() as i64;
        if k != 0 {
            let t = Sl2::translation(-k);
            z = z.act(&t);
            m = t * m;
        }
        let n = z.re * z.re + z.im * z.im;
        if n < 1.0 - BOUNDARY_EPS {
            z = z.act(&Sl2::S);
            m = Sl2::S * m;
            continue;
        }
        if z.re >= 0.5 - BOUNDARY_EPS {
            let t = Sl2::translation(-1);
            z = z.act(&t);
            m = t * m;
        }
        if (n - 1.0).abs() <= BOUNDARY_EPS && z.re > BOUNDARY_EPS {
            z = z.act(&Sl2::S);
            m = Sl2::S * m;
        }
        debug_assert!(in_fundamental_domain(&z), "{z}");
        return Ok(ReducedPoint { u: z, gamma: m.inverse() });
    }
    Err(NumericError::IterationCap(max_iter))
}

/// A value with an estimate of the neglected tail of the series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub value: Complex64,
    pub tail: f64,
}

/// Coefficients of a Laurent series rounded to `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericSeries {
    lead: i64,
    coeffs: Vec<f64>,
}

impl NumericSeries {
    pub fn from_series(s: &LaurentSeries) -> Self {
        let coeffs = s
            .coeffs()
            .iter()
            .map(|c| c.to_f64().expect("coefficient fits in f64"))
            .collect();
        NumericSeries { lead: s.lead(), coeffs }
    }

    pub fn order(&self) -> i64 {
        self.lead + self.coeffs.len() as i64 - 1
    }

    /// Geometric estimate of `Σ_{n > N} |c_n| |q|^n` from the last
    /// coefficients and their growth ratio.
    pub fn tail_estimate(&self, q_abs: f64) -> f64 {
        let len = self.coeffs.len();
        let window = &self.coeffs[len.saturating_sub(6)..];
        let top = window.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        if top == 0.0 {
            return 0.0;
        }
        let mut growth = 1.0f64;
        for w in window.windows(2) {
            if w[0] != 0.0 {
                growth = growth.max((w[1] / w[0]).abs());
            }
        }
        let ratio = growth * q_abs;
        if ratio >= 1.0 {
            return f64::INFINITY;
        }
        let log = top.ln() + growth.ln() + (self.order() + 1) as f64 * q_abs.ln() - (1.0 - ratio).ln();
        log.exp()
    }

    /// Value, first and second `q`-derivatives at `q`.
    pub fn eval_q(&self, q: Complex64) -> [Complex64; 3] {
        let zero = Complex64::new(0.0, 0.0);
        let (mut p0, mut p1, mut p2) = (zero, zero, zero);
        for &c in self.coeffs.iter().rev() {
            p2 = p2 * q + p1 * 2.0;
            p1 = p1 * q + p0;
            p0 = p0 * q + c;
        }
        let l = self.lead as f64;
        let ql = q.powi(self.lead as i32);
        let inv = 1.0 / q;
        let f = ql * p0;
        let df = ql * (p0 * l * inv + p1);
        let d2f = ql * (p0 * l * (l - 1.0) * inv * inv + p1 * 2.0 * l * inv + p2);
        [f, df, d2f]
    }

    pub fn eval(&self, tau: &UpperHalfPoint) -> Evaluation {
        let q = tau.q();
        debug_assert!(q.norm() < 1.0);
        Evaluation { value: self.eval_q(q)[0], tail: self.tail_estimate(q.norm()) }
    }

    /// Evaluation that fails when the tail estimate exceeds `tolerance`.
    pub fn eval_checked(&self, tau: &UpperHalfPoint, tolerance: f64) -> Result<Complex64, NumericError> {
        let e = self.eval(tau);
        if e.tail > tolerance {
            return Err(NumericError::TailTooLarge { tail: e.tail, tolerance });
        }
        Ok(e.value)
    }
}

/// `Σ c_n q^n` at `q = e^{2πiτ}` with a tail estimate.
pub fn eval_series(s: &LaurentSeries, tau: &UpperHalfPoint) -> Evaluation {
    NumericSeries::from_series(s).eval(tau)
}

/// `j` in floating point, exact to high order on `Im τ ≥ 1/2`.
#[derive(Debug, Clone)]
pub struct JFunction {
    series: NumericSeries,
}

impl Default for JFunction {
    fn default() -> Self {
        Self::with_order(160)
    }
}

impl JFunction {
    pub fn with_order(order: usize) -> Self {
        JFunction { series: NumericSeries::from_series(&j_series(order)) }
    }

    pub fn eval(&self, tau: &UpperHalfPoint) -> Evaluation {
        self.series.eval(tau)
    }

    /// `j(τ)` after moving `τ` into the fundamental domain.
    pub fn eval_reduced(&self, tau: &UpperHalfPoint) -> Result<Complex64, NumericError> {
        let r = reduce_to_r(tau, 10_000)?;
        Ok(self.eval(&r.u).value)
    }

    /// All distinct points of the fundamental domain found by Newton
    /// iteration from the seeds, best residual first.
    pub fn invert_all(&self, target: Complex64, precision: Precision) -> Result<Vec<(ReducedPoint, f64)>, NumericError> {
        let tolerance = effective_tolerance(target, precision);
        let mut found: Vec<(ReducedPoint, f64)> = Vec::new();
        let mut last_err = None;
        for seed in self.seeds(target) {
            match self.newton(seed, target, precision) {
                Ok(q) => {
                    let tau = tau_of_q(q)?;
                    let r = reduce_to_r(&tau, 10_000)?;
                    let residual = (self.eval(&r.u).value - target).norm();
                    if residual < tolerance && !found.iter().any(|(f, _)| f.u.distance(&r.u) < 1e-6) {
                        found.push((r, residual));
                    }
                }
                Err(e) => last_err = Some(e),
            }
        }
        found.sort_by(|a, b| a.1.total_cmp(&b.1));
        if found.is_empty() {
            return Err(last_err.unwrap_or(NumericError::NoConvergence {
                target,
                residual: f64::INFINITY,
                iterations: 0,
            }));
        }
        Ok(found)
    }

    /// `u` in the fundamental domain with `|j(u) - target| < tolerance`.
    pub fn invert(&self, target: Complex64, precision: Precision) -> Result<ReducedPoint, NumericError> {
        Ok(self.invert_all(target, precision)?[0].0)
    }

    /// `q ≈ 1/(t - 744)` for large targets, otherwise the closest points of
    /// a grid over the fundamental domain.
    fn seeds(&self, target: Complex64) -> Vec<Complex64> {
        let mut seeds = Vec::new();
        if target.norm() > 2000.0 {
            seeds.push(1.0 / (target - 744.0));
        }
        let mut grid: Vec<(f64, Complex64)> = Vec::new();
        for i in 0..=20 {
            let re = -0.5 + 0.05 * i as f64;
            for k in 0..=60 {
                let im = 0.8 + 0.05 * k as f64;
                let u = UpperHalfPoint { re, im };
                if re * re + im * im < 1.0 {
                    continue;
                }
                let q = u.q();
                grid.push(((self.series.eval_q(q)[0] - target).norm(), q));
            }
        }
        grid.sort_by(|a, b| a.0.total_cmp(&b.0));
        seeds.extend(grid.into_iter().take(3).map(|(_, q)| q));
        seeds
    }

    /// Damped Newton in `q` using the multiplicity-robust step
    /// `f f' / (f'^2 - f f'')`, which stays quadratic at the double and triple
    /// zeros of `j - 1728` and `j`.
    fn newton(&self, mut q: Complex64, target: Complex64, precision: Precision) -> Result<Complex64, NumericError> {
        // keep Im τ ≥ 1/2 so the series stays accurate
        let q_max = (-PI).exp();
        let tolerance = effective_tolerance(target, precision);
        let residual = |q: Complex64| (self.series.eval_q(q)[0] - target).norm();
        let mut current = residual(q);
        for iter in 0..precision.max_iter {
            let [f, df, d2f] = self.series.eval_q(q);
            let f = f - target;
            if f.norm() == 0.0 {
                return Ok(q);
            }
            let den = df * df - f * d2f;
            let step = if den.norm() > 0.0 { f * df / den } else { f / df };
            let mut lambda = 1.0;
            let mut accepted = false;
            for _ in 0..40 {
                let trial = q - step * lambda;
                if trial.norm() < q_max && trial.norm() > 0.0 {
                    let r = residual(trial);
                    if r < current || r < tolerance * 1e-3 {
                        q = trial;
                        current = r;
                        accepted = true;
                        break;
                    }
                }
                lambda *= 0.5;
            }
            if !accepted || (step * lambda).norm() < 1e-16 * q.norm().max(1e-300) {
                return if current < tolerance {
                    Ok(q)
                } else {
                    Err(NumericError::NoConvergence { target, residual: current, iterations: iter })
                };
            }
        }
        if current < tolerance {
            Ok(q)
        } else {
            Err(NumericError::NoConvergence { target, residual: current, iterations: precision.max_iter })
        }
    }
}

/// The absolute tolerance, widened to a few ulps of `|target|` where double
/// precision cannot resolve it.
fn effective_tolerance(target: Complex64, precision: Precision) -> f64 {
    precision.tolerance.max(64.0 * f64::EPSILON * target.norm())
}

/// `τ = log(q) / (2πi)` with `Re τ ∈ (-1/2, 1/2]`.
fn tau_of_q(q: Complex64) -> Result<UpperHalfPoint, NumericError> {
    let l = q.ln();
    UpperHalfPoint::new(l.im / (2.0 * PI), -l.re / (2.0 * PI))
}

/// [`JFunction::invert`] with a default-order `j`.
pub fn invert_j(target: Complex64, precision: Precision) -> Result<ReducedPoint, NumericError> {
    JFunction::default().invert(target, precision)
}

/// The solution `û_p` of `j(u) = -P_p(ρ)` in the fundamental domain.
#[derive(Debug, Clone, PartialEq)]
pub struct UhatResult {
    pub point: ReducedPoint,
    /// `|j(û_p) + P_p(ρ)|`.
    pub residual: f64,
    /// Every distinct solution the search found; a single entry is expected.
    pub candidates: Vec<ReducedPoint>,
}

pub fn find_uhat(shift: &ShiftConstant, precision: Precision) -> Result<UhatResult, NumericError> {
    let target = -shift.value.to_f64().expect("shift constant fits in f64");
    let all = JFunction::default().invert_all(Complex64::new(target, 0.0), precision)?;
    Ok(UhatResult {
        point: all[0].0,
        residual: all[0].1,
        candidates: all.iter().map(|(r, _)| *r).collect(),
    })
}

/// Minimum table length per unit of `p` for [`verify_vanishing_sum`].
pub const VANISHING_SUM_ORDER_PER_P: usize = 200;

/// `|G_p(u) + Σ_{k<p} G_p((u + k)/p)| = |P_p(u)|`.
///
/// The branches have imaginary part `Im u / p`, so the table must reach
/// `200 p` and the tail estimate at those points must be below `1e-12`.
pub fn verify_vanishing_sum(alphas: &AlphaTable, u: &UpperHalfPoint) -> Result<f64, NumericError> {
    let p = alphas.p().get();
    let needed = VANISHING_SUM_ORDER_PER_P * p as usize;
    if alphas.order() < needed {
        return Err(NumericError::InsufficientOrder { needed, available: alphas.order() });
    }
    let g = NumericSeries::from_series(&alphas.series().truncate(needed as i64));
    let mut total = g.eval_checked(u, 1e-12)?;
    for k in 0..p {
        total += g.eval_checked(&u.hecke_branch(k, p), 1e-12)?;
    }
    Ok(total.norm())
}

/// `|eval(P_p)(τ) - shift|`; at `τ = ρ` this is `|P_p(ρ) - shift|` since
/// `j(ρ) = 0`.
pub fn p_series_value(alphas: &AlphaTable, order: usize, tau: &UpperHalfPoint) -> Result<Complex64, NumericError> {
    let ps = p_series(alphas, order)?;
    NumericSeries::from_series(&ps).eval_checked(tau, 1e-10)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhiFixedReport {
    pub p: u32,
    pub at_tau0: Complex64,
    pub at_tau1: Complex64,
    /// `p^{-r/4}`.
    pub expected_modulus: f64,
    pub modulus_error: f64,
    /// `|Φ_p(τ_0) + Φ_p(τ_1)|`.
    pub opposition_error: f64,
}

impl PhiFixedReport {
    pub fn passed(&self, tolerance: f64) -> bool {
        self.modulus_error < tolerance && self.opposition_error < tolerance
    }
}

/// Evaluates `Φ_p` at the two Fricke fixed points `τ_0` and `τ_1`.
pub fn phi_fixed_value_check(p: GenusZeroPrime) -> Result<PhiFixedReport, NumericError> {
    let phi = NumericSeries::from_series(&phi_series(p, 400));
    let at_tau0 = phi.eval_checked(&UpperHalfPoint::tau0(p.p()), 1e-12)?;
    let at_tau1 = phi.eval_checked(&UpperHalfPoint::tau1(p.p()), 1e-12)?;
    let expected_modulus = (p.p() as f64).powf(-(p.r() as f64) / 4.0);
    let modulus_error = (at_tau0.norm() - expected_modulus)
        .abs()
        .max((at_tau1.norm() - expected_modulus).abs());
    Ok(PhiFixedReport {
        p: p.p(),
        at_tau0,
        at_tau1,
        expected_modulus,
        modulus_error,
        opposition_error: (at_tau0 + at_tau1).norm(),
    })
}
