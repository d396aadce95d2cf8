//! Positive definite binary quadratic forms, integral Gauss reduction and
//! class numbers.

use std::fmt;
use std::ops::Mul;

use crate::arith::gcd;

use super::ModcurveError;

/// An element `[[a, b], [c, d]]` of `SL_2(Z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Sl2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Sl2 {
    pub const IDENTITY: Sl2 = Sl2 { a: 1, b: 0, c: 0, d: 1 };
    /// `τ ↦ -1/τ`.
    pub const S: Sl2 = Sl2 { a: 0, b: -1, c: 1, d: 0 };
    /// `τ ↦ τ + 1`.
    pub const T: Sl2 = Sl2 { a: 1, b: 1, c: 0, d: 1 };
    /// `τ ↦ -1/(τ + 1)`, of order three in `PSL_2(Z)`; fixes `ρ`.
    pub const U: Sl2 = Sl2 { a: 0, b: -1, c: 1, d: 1 };

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self, ModcurveError> {
        if a * d - b * c != 1 {
            return Err(ModcurveError::NotUnimodular([a, b, c, d]));
        }
        Ok(Sl2 { a, b, c, d })
    }

    pub fn translation(k: i64) -> Self {
        Sl2 { a: 1, b: k, c: 0, d: 1 }
    }

    pub fn inverse(&self) -> Self {
        Sl2 { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn bottom_row(&self) -> (i64, i64) {
        (self.c, self.d)
    }

    /// Whether `c ≡ 0 (mod level)`.
    pub fn in_gamma0(&self, level: i64) -> bool {
        self.c.rem_euclid(level) == 0
    }
}

impl Mul for Sl2 {
    type Output = Sl2;

    fn mul(self, o: Sl2) -> Sl2 {
        Sl2 {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }
}

/// A point of the projective line over `F_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProjectivePoint {
    Finite(u32),
    Infinity,
}

impl ProjectivePoint {
    /// The class of `(c : d)`, normalised to `(1 : t)` or `(0 : 1)`.
    ///
    /// `Γ_0(p) γ` depends only on this class of the bottom row of `γ`.
    pub fn from_row(c: i64, d: i64, p: u32) -> Self {
        let p = p as i64;
        let (c, d) = (c.rem_euclid(p), d.rem_euclid(p));
        debug_assert!(c != 0 || d != 0, "row vanishes mod {p}");
        if c == 0 {
            ProjectivePoint::Infinity
        } else {
            ProjectivePoint::Finite((d * crate::arith::inv_mod(c, p)).rem_euclid(p) as u32)
        }
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjectivePoint::Finite(t) => write!(f, "(1:{t})"),
            ProjectivePoint::Infinity => write!(f, "(0:1)"),
        }
    }
}

/// `A x^2 + B x y + C y^2` with `A > 0` and `B^2 - 4AC < 0`.
///
/// Its root in the upper half-plane is `(-B + i sqrt|D|) / (2A)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadraticForm {
    a: i64,
    b: i64,
    c: i64,
}

impl QuadraticForm {
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self, ModcurveError> {
        let f = QuadraticForm { a, b, c };
        if a <= 0 || f.discriminant() >= 0 {
            return Err(ModcurveError::NotPositiveDefinite([a, b, c]));
        }
        Ok(f)
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    pub fn coefficients(&self) -> [i64; 3] {
        [self.a, self.b, self.c]
    }

    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    /// `gcd(A, B, C)`.
    pub fn content(&self) -> i64 {
        gcd(gcd(self.a, self.b), self.c)
    }

    pub fn primitive_part(&self) -> QuadraticForm {
        let l = self.content();
        QuadraticForm { a: self.a / l, b: self.b / l, c: self.c / l }
    }

    /// `|B| ≤ A ≤ C`, with `B ≥ 0` when `|B| = A` or `A = C`.
    ///
    /// Equivalently the root lies in the half-open fundamental domain with
    /// `-1/2 ≤ Re τ ≤ 0` on the closed side.
    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
    }

    /// `(Q ∘ γ)(x, y) = Q(a x + b y, c x + d y)`, whose root is `γ⁻¹` of ours.
    pub fn compose(&self, g: &Sl2) -> QuadraticForm {
        let q = |x: i64, y: i64| self.a * x * x + self.b * x * y + self.c * y * y;
        QuadraticForm {
            a: q(g.a, g.c),
            b: 2 * self.a * g.a * g.b + self.b * (g.a * g.d + g.b * g.c) + 2 * self.c * g.c * g.d,
            c: q(g.b, g.d),
        }
    }

    /// The reduced form `R` and `γ ∈ SL_2(Z)` with `R = Q ∘ γ`.
    pub fn reduce(&self) -> (QuadraticForm, Sl2) {
        let mut f = *self;
        let mut g = Sl2::IDENTITY;
        loop {
            // bring B into (-A, A]
            let k = (f.a - f.b).div_euclid(2 * f.a);
            if k != 0 {
                let t = Sl2::translation(k);
                f = f.compose(&t);
                g = g * t;
            }
            if f.a > f.c || (f.a == f.c && f.b < 0) {
                f = f.compose(&Sl2::S);
                g = g * Sl2::S;
                continue;
            }
            debug_assert!(f.is_reduced());
            return (f, g);
        }
    }

    /// Matrices `s` with `R ∘ s = R`, modulo `±1`, for a reduced form `R`.
    pub fn automorphs(&self) -> Vec<Sl2> {
        debug_assert!(self.is_reduced());
        let p = self.primitive_part();
        match (p.a, p.b, p.c) {
            (1, 0, 1) => vec![Sl2::IDENTITY, Sl2::S],
            (1, 1, 1) => vec![Sl2::IDENTITY, Sl2::U, Sl2::U * Sl2::U],
            _ => vec![Sl2::IDENTITY],
        }
    }

    /// `(Re τ, Im τ)` of the root in the upper half-plane.
    pub fn root(&self) -> (f64, f64) {
        let two_a = 2.0 * self.a as f64;
        (-(self.b as f64) / two_a, ((-self.discriminant()) as f64).sqrt() / two_a)
    }

    /// Whether the two forms have the same root.
    pub fn same_root(&self, other: &QuadraticForm) -> bool {
        // -B/2A and |D|/4A^2 agree
        let (d1, d2) = (-self.discriminant() as i128, -other.discriminant() as i128);
        let (a1, a2) = (self.a as i128, other.a as i128);
        self.b as i128 * a2 == other.b as i128 * a1 && d1 * a2 * a2 == d2 * a1 * a1
    }
}

impl fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}]", self.a, self.b, self.c)
    }
}

/// Number of primitive reduced forms of discriminant `d < 0`.
pub fn class_number(d: i64) -> Result<u64, ModcurveError> {
    if d >= 0 || !matches!(d.rem_euclid(4), 0 | 1) {
        return Err(ModcurveError::InvalidDiscriminant(d));
    }
    let mut h = 0;
    let mut a = 1i64;
    // reduced forms have 3A^2 ≤ |D|
    while 3 * a * a <= -d {
        for b in (1 - a)..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            let f = QuadraticForm { a, b, c };
            if f.is_reduced() && f.content() == 1 {
                h += 1;
            }
        }
        a += 1;
    }
    Ok(h)
}
