//! Fricke fixed points on `X_0(p)` and the class-number counts behind them.
//!
//! A fixed point of `τ ↦ -1/(pτ)` modulo `Γ_0(p)` is represented by
//! `τ = (τ_0 - b) / a` with `τ_0 = i/√p`, the root of the form
//! `[a p, 2 b p, d]` with `a d = p b^2 + 1`. Two candidates are identified
//! when their Gauss-reduced forms agree and the reducing matrices share a
//! `Γ_0(p)`-coset, read off as a point of `P^1(F_p)`.

mod forms;

use std::collections::HashSet;

use thiserror::Error;

use crate::arith::{is_prime, SUPERSINGULAR_PRIMES};

pub use forms::{class_number, ProjectivePoint, QuadraticForm, Sl2};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModcurveError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("expected an odd prime, got {0}")]
    NotOdd(u32),
    #[error("{0} is not a supersingular prime")]
    NotSupersingular(u32),
    #[error("discriminant {0} is not negative and congruent to 0 or 1 mod 4")]
    InvalidDiscriminant(i64),
    #[error("form {0:?} is not positive definite")]
    NotPositiveDefinite([i64; 3]),
    #[error("matrix {0:?} does not have determinant 1")]
    NotUnimodular([i64; 4]),
    #[error("fixed-point form has content {0}, expected 1 or 2")]
    UnexpectedContent(i64),
    #[error("branch count {branch} is incompatible with genus {genus}")]
    InconsistentBranchCount { genus: u32, branch: u64 },
}

/// Which class group a fixed point represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DiscClass {
    /// The maximal order: `D = -p`, or `D = -4p` with `p ≡ 1 (mod 4)`.
    Field,
    /// The order of conductor 2: `D = -4p` with `p ≡ 3 (mod 4)`.
    Order,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PointKind {
    /// `τ_0 = i/√p`.
    Tau0,
    /// `τ_1 = (τ_0 - 1)/2`.
    Tau1,
    /// `(τ_0 - b)/a` with `b > 0`.
    Plus,
    /// `(τ_0 + b)/a`.
    Minus,
    /// One of the two hard-coded points at `p = 2`.
    Special,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedPoint {
    pub kind: PointKind,
    pub a: i64,
    /// Signed: the point is `(τ_0 - b)/a`. At `p = 2` only the form is meaningful.
    pub b: i64,
    pub form: QuadraticForm,
    pub reduced: QuadraticForm,
    pub reducer: Sl2,
    pub coset: ProjectivePoint,
    /// `None` at `p = 2`.
    pub disc_class: Option<DiscClass>,
}

impl FixedPoint {
    /// Builds the point `(τ_0 - b)/a` for the odd prime `p`.
    fn from_pair(p: u32, a: i64, b: i64, kind: PointKind) -> Result<Self, ModcurveError> {
        let pi = p as i64;
        debug_assert_eq!((pi * b * b + 1) % a, 0);
        let d = (pi * b * b + 1) / a;
        let form = QuadraticForm::new(a * pi, 2 * b * pi, d)?;
        let mut fp = Self::from_form(p, a, b, form, kind);
        fp.disc_class = Some(classify_form(&form, p)?);
        Ok(fp)
    }

    fn from_form(p: u32, a: i64, b: i64, form: QuadraticForm, kind: PointKind) -> Self {
        let (reduced, reducer) = form.reduce();
        let coset = coset_key(&reduced, &reducer, p);
        FixedPoint { kind, a, b, form, reduced, reducer, coset, disc_class: None }
    }

    /// `(reduced form, coset)`: equal exactly for `Γ_0(p)`-equivalent points.
    pub fn key(&self) -> (QuadraticForm, ProjectivePoint) {
        (self.reduced, self.coset)
    }

    /// Approximate `(Re τ, Im τ)`.
    pub fn root(&self) -> (f64, f64) {
        self.form.root()
    }
}

/// Smallest coset label over the automorphs of the reduced form, so that the
/// label does not depend on which reducing matrix was found.
fn coset_key(reduced: &QuadraticForm, reducer: &Sl2, p: u32) -> ProjectivePoint {
    reduced
        .automorphs()
        .into_iter()
        .map(|s| {
            let (c, d) = (*reducer * s).bottom_row();
            ProjectivePoint::from_row(c, d, p)
        })
        .min()
        .expect("identity is always an automorph")
}

fn require_odd_prime(p: u32) -> Result<(), ModcurveError> {
    if !is_prime(p as u64) {
        return Err(ModcurveError::NotPrime(p as u64));
    }
    if p == 2 {
        return Err(ModcurveError::NotOdd(p));
    }
    Ok(())
}

/// Genus of `X_0(p)` for a prime `p`.
pub fn genus_x0(p: u32) -> Result<u32, ModcurveError> {
    if !is_prime(p as u64) {
        return Err(ModcurveError::NotPrime(p as u64));
    }
    let g = (p + 1) / 12;
    Ok(if p % 12 == 1 { g - 1 } else { g })
}

/// Discriminant whose class group `h_K` counts: `-p` or `-4p`.
pub fn field_discriminant(p: u32) -> i64 {
    if p % 4 == 3 {
        -(p as i64)
    } else {
        -4 * p as i64
    }
}

/// Raw candidates in scan order: `τ_0`, `τ_1`, then `τ_±` for every
/// `(a, b)` with `3 a^2 < 4p`, `0 < 2b < a` and `a | p b^2 + 1`.
pub fn scan_candidates(p: u32) -> Result<Vec<FixedPoint>, ModcurveError> {
    require_odd_prime(p)?;
    let pi = p as i64;
    let mut out = vec![
        FixedPoint::from_pair(p, 1, 0, PointKind::Tau0)?,
        FixedPoint::from_pair(p, 2, 1, PointKind::Tau1)?,
    ];
    let mut a = 3i64;
    while 3 * a * a < 4 * pi {
        for b in (1..).take_while(|b| 2 * b < a) {
            if (pi * b * b + 1) % a == 0 {
                out.push(FixedPoint::from_pair(p, a, b, PointKind::Plus)?);
                out.push(FixedPoint::from_pair(p, a, -b, PointKind::Minus)?);
            }
        }
        a += 1;
    }
    Ok(out)
}

/// The two points at `p = 2`: `i/√2` (form `[2, 0, 1]`) and `(1 + i)/2`
/// (form `[2, -2, 1]`, fixed up to `τ ↦ τ - 1`).
fn level_two_points() -> Vec<FixedPoint> {
    let root2 = QuadraticForm::new(2, 0, 1).expect("definite");
    let gauss = QuadraticForm::new(2, -2, 1).expect("definite");
    vec![
        FixedPoint::from_form(2, 1, 0, root2, PointKind::Special),
        FixedPoint::from_form(2, 1, -1, gauss, PointKind::Special),
    ]
}

/// Fricke fixed points on `X_0(p)`, one per `Γ_0(p)`-class, first
/// occurrence kept.
pub fn enumerate_fixed_points(p: u32) -> Result<Vec<FixedPoint>, ModcurveError> {
    if p == 2 {
        return Ok(level_two_points());
    }
    let mut seen = HashSet::new();
    Ok(scan_candidates(p)?
        .into_iter()
        .filter(|fp| seen.insert(fp.key()))
        .collect())
}

fn classify_form(form: &QuadraticForm, p: u32) -> Result<DiscClass, ModcurveError> {
    match form.content() {
        2 => Ok(DiscClass::Field),
        1 if p % 4 == 1 => Ok(DiscClass::Field),
        1 => Ok(DiscClass::Order),
        l => Err(ModcurveError::UnexpectedContent(l)),
    }
}

/// Class of a fixed point from the content of its form: content 2 means
/// `D = -p`, content 1 means `D = -4p`.
pub fn classify_fixed_point(fp: &FixedPoint, p: u32) -> Result<DiscClass, ModcurveError> {
    require_odd_prime(p)?;
    classify_form(&fp.form, p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassCounts {
    pub h_k: u64,
    /// Zero when `p ≡ 1 (mod 4)`.
    pub h_2: u64,
}

impl ClassCounts {
    pub fn for_prime(p: u32) -> Result<Self, ModcurveError> {
        require_odd_prime(p)?;
        let h_k = class_number(field_discriminant(p))?;
        let h_2 = if p % 4 == 3 { class_number(-4 * p as i64)? } else { 0 };
        Ok(ClassCounts { h_k, h_2 })
    }

    pub fn total(&self) -> u64 {
        self.h_k + self.h_2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CurveData {
    pub p: u32,
    pub g: u32,
    /// Genus of `X_0(p) / ω_p`.
    pub gamma: u32,
    /// `2g + 2` when `gamma = 0`.
    pub weierstrass_count: Option<u32>,
}

/// Number of fixed points of the Fricke involution on `X_0(p)`.
fn branch_count(p: u32) -> Result<u64, ModcurveError> {
    if p == 2 {
        return Ok(class_number(-8)? + class_number(-4)?);
    }
    Ok(ClassCounts::for_prime(p)?.total())
}

/// Genus data, with `gamma` from Riemann-Hurwitz for the double cover
/// `X_0(p) → X_0(p)/ω_p`: `2g - 2 = 2(2γ - 2) + B`.
pub fn curve_data(p: u32) -> Result<CurveData, ModcurveError> {
    let g = genus_x0(p)?;
    let branch = branch_count(p)?;
    let twice = 2 * (g as i64 + 1) - branch as i64;
    if twice < 0 || twice % 4 != 0 {
        return Err(ModcurveError::InconsistentBranchCount { genus: g, branch });
    }
    let gamma = (twice / 4) as u32;
    Ok(CurveData {
        p,
        g,
        gamma,
        weierstrass_count: (gamma == 0).then_some(2 * g + 2),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountCheck {
    pub name: &'static str,
    pub expected: u64,
    pub actual: u64,
}

impl CountCheck {
    pub fn passed(&self) -> bool {
        self.expected == self.actual
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountReport {
    pub p: u32,
    pub curve: CurveData,
    pub counts: ClassCounts,
    pub candidates: usize,
    pub points: usize,
    pub field_points: u64,
    pub order_points: u64,
    pub checks: Vec<CountCheck>,
}

impl CountReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(CountCheck::passed)
    }
}

/// Checks the census of fixed points against `2g + 2` and the class numbers
/// for an odd supersingular prime.
pub fn verify_counts(p: u32) -> Result<CountReport, ModcurveError> {
    require_odd_prime(p)?;
    if !SUPERSINGULAR_PRIMES.contains(&p) {
        return Err(ModcurveError::NotSupersingular(p));
    }
    let curve = curve_data(p)?;
    let counts = ClassCounts::for_prime(p)?;
    let candidates = scan_candidates(p)?.len();
    let points = enumerate_fixed_points(p)?;
    let mut field_points = 0;
    let mut order_points = 0;
    for fp in &points {
        match classify_fixed_point(fp, p)? {
            DiscClass::Field => field_points += 1,
            DiscClass::Order => order_points += 1,
        }
    }
    let two_g_plus_2 = 2 * curve.g as u64 + 2;
    let checks = vec![
        CountCheck { name: "points", expected: two_g_plus_2, actual: points.len() as u64 },
        CountCheck { name: "field_points", expected: counts.h_k, actual: field_points },
        CountCheck { name: "order_points", expected: counts.h_2, actual: order_points },
        CountCheck { name: "class_total", expected: two_g_plus_2, actual: counts.total() },
        CountCheck { name: "quotient_genus", expected: 0, actual: curve.gamma as u64 },
    ];
    Ok(CountReport {
        p,
        curve,
        counts,
        candidates,
        points: points.len(),
        field_points,
        order_points,
        checks,
    })
}

/// Outcome of comparing a point's reduced number with the closed form
/// `(u_0 + s)/a`, `u_0 = i√p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReducedNumberCheck {
    Matches,
    Mismatch,
    /// The closed-form value lies outside the fundamental domain.
    NotDirectlyReduced,
    /// No closed form applies to this `(a, b)`.
    NoFormula,
}

/// Closed-form shift `s` with `u = (u_0 + s)/a` for a point `τ_±`:
/// `s = ±1` for `b = 1`, `s = ∓r` when `a = b r + 1`, `s = ±r` when
/// `a = b r - 1`. The upper sign belongs to `τ_+`.
pub fn reduced_number_shift(fp: &FixedPoint) -> Option<i64> {
    let sign = match fp.kind {
        PointKind::Plus => 1,
        PointKind::Minus => -1,
        _ => return None,
    };
    let (a, b) = (fp.a, fp.b.abs());
    if b == 1 {
        Some(sign)
    } else if (a - 1) % b == 0 {
        Some(-sign * (a - 1) / b)
    } else if (a + 1) % b == 0 {
        Some(sign * (a + 1) / b)
    } else {
        None
    }
}

/// Compares the `SL_2(Z)`-reduction of `τ_±` with its closed-form reduced
/// number, when that value lies in the fundamental domain.
pub fn check_reduced_number(fp: &FixedPoint, p: u32) -> ReducedNumberCheck {
    let Some(s) = reduced_number_shift(fp) else {
        return ReducedNumberCheck::NoFormula;
    };
    let a = fp.a;
    // (u_0 + s)/a is the root of [a^2, -2as, s^2 + p]
    let claimed = QuadraticForm::new(a * a, -2 * a * s, s * s + p as i64).expect("definite");
    if !claimed.is_reduced() {
        ReducedNumberCheck::NotDirectlyReduced
    } else if claimed.same_root(&fp.reduced) {
        ReducedNumberCheck::Matches
    } else {
        ReducedNumberCheck::Mismatch
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// (p, g, h_K, h_2, 2g+2) for the odd supersingular primes.
    const TABLE: [(u32, u32, u64, u64, u32); 14] = [
        (3, 0, 1, 1, 2),
        (5, 0, 2, 0, 2),
        (7, 0, 1, 1, 2),
        (11, 1, 1, 3, 4),
        (13, 0, 2, 0, 2),
        (17, 1, 4, 0, 4),
        (19, 1, 1, 3, 4),
        (23, 2, 3, 3, 6),
        (29, 2, 6, 0, 6),
        (31, 2, 3, 3, 6),
        (41, 3, 8, 0, 8),
        (47, 4, 5, 5, 10),
        (59, 5, 3, 9, 12),
        (71, 6, 7, 7, 14),
    ];

    #[test]
    fn genus_examples() {
        assert_eq!(genus_x0(13).unwrap(), 0);
        assert_eq!(genus_x0(11).unwrap(), 1);
        assert_eq!(genus_x0(71).unwrap(), 6);
        assert_eq!(genus_x0(2).unwrap(), 0);
        assert_eq!(genus_x0(15), Err(ModcurveError::NotPrime(15)));
    }

    #[test]
    fn table_regression() {
        for (p, g, hk, h2, w) in TABLE {
            let counts = ClassCounts::for_prime(p).unwrap();
            let curve = curve_data(p).unwrap();
            assert_eq!((curve.g, counts.h_k, counts.h_2), (g, hk, h2), "p = {p}");
            assert_eq!(curve.weierstrass_count, Some(w));
        }
    }

    #[test]
    fn quotient_genus_beyond_supersingular() {
        // X_0(p)^+ has genus 1 at 37, 43, 53, 61 and genus 2 at 67, 73.
        for (p, gamma) in [(37, 1), (43, 1), (53, 1), (61, 1), (67, 2), (73, 2)] {
            assert_eq!(curve_data(p).unwrap().gamma, gamma, "p = {p}");
        }
        for p in SUPERSINGULAR_PRIMES {
            assert_eq!(curve_data(p).unwrap().gamma, 0);
        }
    }

    #[test]
    fn census_matches_table() {
        for (p, _, hk, h2, w) in TABLE {
            let report = verify_counts(p).unwrap();
            assert!(report.all_passed(), "{report:?}");
            assert_eq!(report.points as u32, w);
            assert_eq!((report.field_points, report.order_points), (hk, h2));
        }
    }

    #[test]
    fn dedup_removes_equivalent_candidates() {
        let raw = scan_candidates(29).unwrap();
        assert!(raw.len() > 6);
        assert_eq!(enumerate_fixed_points(29).unwrap().len(), 6);
        // keys are unique and every form has discriminant -4p
        for p in [11u32, 19, 29, 41, 59, 71] {
            let pts = enumerate_fixed_points(p).unwrap();
            let keys: HashSet<_> = pts.iter().map(FixedPoint::key).collect();
            assert_eq!(keys.len(), pts.len());
            for fp in scan_candidates(p).unwrap() {
                assert_eq!(fp.form.discriminant(), -4 * p as i64);
            }
        }
    }

    /// Independent check of the Fricke condition: for every point,
    /// `-1/(pτ) = A τ` for some `A ∈ Γ_0(p)` found by search over the
    /// reduction matrices of the two forms.
    #[test]
    fn points_are_fricke_fixed() {
        for p in [3u32, 11, 23, 29, 71] {
            for fp in enumerate_fixed_points(p).unwrap() {
                // -1/(pτ) is the root of Q ∘ W with W = [[0, -1], [p, 0]] up to scaling:
                // [A, B, C] at τ maps to [C p, -B p, A] / p at -1/(pτ).
                let [a, b, c] = fp.form.coefficients();
                let pi = p as i64;
                let image = QuadraticForm::new(c * pi, -b, a / pi).unwrap();
                let (r1, g1) = fp.form.reduce();
                let (r2, g2) = image.reduce();
                assert_eq!(r1, r2);
                // image = g2-reduced; τ = g1 z, ω τ = g2 s z for an automorph s
                let ok = r1.automorphs().into_iter().any(|s| (g2 * s * g1.inverse()).in_gamma0(pi));
                assert!(ok, "p = {p}, {fp:?}");
            }
        }
    }

    #[test]
    fn classification_examples() {
        let pts = enumerate_fixed_points(11).unwrap();
        assert_eq!(pts.len(), 4);
        let t0 = &pts[0];
        let t1 = &pts[1];
        assert_eq!(t0.form.coefficients(), [11, 0, 1]);
        assert_eq!(t1.form.coefficients(), [22, 22, 6]);
        assert_eq!(t1.form.content(), 2);
        assert_eq!(t1.form.primitive_part().discriminant(), -11);
        assert_eq!(classify_fixed_point(t1, 11).unwrap(), DiscClass::Field);
        assert_eq!(classify_fixed_point(t0, 11).unwrap(), DiscClass::Order);
        assert_eq!((pts[2].a, pts[2].b, pts[3].b), (3, 1, -1));
        let p13 = enumerate_fixed_points(13).unwrap();
        assert_eq!(p13.iter().map(|f| f.kind).collect::<Vec<_>>(), vec![PointKind::Tau0, PointKind::Tau1]);
        assert_eq!(classify_fixed_point(&p13[0], 13).unwrap(), DiscClass::Field);
        assert_eq!(p13[0].form.discriminant(), -52);
    }

    #[test]
    fn level_two() {
        let pts = enumerate_fixed_points(2).unwrap();
        assert_eq!(pts.len(), 2);
        assert!(pts.iter().all(|f| f.disc_class.is_none()));
        let (x, y) = pts[1].root();
        assert!((x - 0.5).abs() < 1e-12 && (y - 0.5).abs() < 1e-12);
        assert_eq!(pts[0].reduced.coefficients(), [1, 0, 2]); // i√2
        assert_eq!(pts[1].reduced.coefficients(), [1, 0, 1]); // i
        assert!(classify_fixed_point(&pts[0], 2).is_err());
        assert!(verify_counts(2).is_err());
        assert_eq!(verify_counts(37), Err(ModcurveError::NotSupersingular(37)));
    }

    #[test]
    fn b_one_reduced_numbers() {
        let mut checked = 0;
        for p in SUPERSINGULAR_PRIMES.into_iter().filter(|&p| p > 2) {
            for fp in enumerate_fixed_points(p).unwrap() {
                if fp.b.abs() == 1 && fp.a > 2 {
                    match check_reduced_number(&fp, p) {
                        ReducedNumberCheck::Matches => checked += 1,
                        ReducedNumberCheck::NotDirectlyReduced => {}
                        other => panic!("p = {p}, a = {}: {other:?}", fp.a),
                    }
                }
            }
        }
        assert!(checked >= 10, "only {checked} cases in range");
    }
}
