//! Truncated Laurent series in `q` with exact rational coefficients.
//!
//! A [`LaurentSeries`] stores the coefficients of `q^lead, ..., q^order` and
//! stands for `Σ a_n q^n + O(q^(order + 1))`. Every operation records the
//! largest order at which its result is still exact, so a coefficient is
//! either known exactly or reported as out of range.
//!
//! Internally the heavy operations (products, inverses, powers) are carried
//! out on integer vectors after clearing denominators, and they only visit
//! the nonzero coefficients of the sparser operand. Eta products such as
//! `∏(1 - q^n)` are extremely sparse, which keeps high-order expansions cheap.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Exact rational number in lowest terms with a positive denominator.
pub type ExactRational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("series not invertible")]
    NotInvertible,
    #[error("coefficient of q^{exponent} is beyond the truncation order {order}")]
    BeyondOrder { exponent: i64, order: i64 },
}

/// `Σ_{n=lead}^{order} a_n q^n + O(q^(order+1))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSeries {
    lead: i64,
    order: i64,
    coeffs: Vec<ExactRational>,
}

/// Integer image of a series: `coeff(lead + i) = ints[i] / denom`.
struct Integral {
    lead: i64,
    ints: Vec<BigInt>,
    denom: BigInt,
}

impl LaurentSeries {
    /// Builds `Σ coeffs[i] q^(lead + i)`, exact up to `q^(lead + len - 1)`.
    ///
    /// Leading zeros are trimmed, keeping at least one stored coefficient.
    ///
    /// # Panics
    /// If `coeffs` is empty.
    pub fn new(lead: i64, coeffs: Vec<ExactRational>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least one coefficient");
        let order = lead + coeffs.len() as i64 - 1;
        let mut s = LaurentSeries { lead, order, coeffs };
        s.trim();
        s
    }

    pub fn from_integers(lead: i64, coeffs: &[i64]) -> Self {
        Self::new(
            lead,
            coeffs.iter().map(|&c| ExactRational::from_integer(c.into())).collect(),
        )
    }

    pub fn from_bigints(lead: i64, coeffs: Vec<BigInt>) -> Self {
        Self::new(lead, coeffs.into_iter().map(ExactRational::from_integer).collect())
    }

    /// The zero series, exact up to `q^order`.
    pub fn zero(order: i64) -> Self {
        LaurentSeries {
            lead: order,
            order,
            coeffs: vec![ExactRational::zero()],
        }
    }

    /// The constant 1, exact up to `q^order` (`order >= 0`).
    pub fn one(order: i64) -> Self {
        Self::monomial(0, ExactRational::one(), order)
    }

    /// `c q^exponent + O(q^(order+1))`.
    ///
    /// # Panics
    /// If `order < exponent`.
    pub fn monomial(exponent: i64, c: ExactRational, order: i64) -> Self {
        assert!(order >= exponent, "monomial beyond its own truncation order");
        let mut coeffs = vec![ExactRational::zero(); (order - exponent + 1) as usize];
        coeffs[0] = c;
        Self::new(exponent, coeffs)
    }

    fn trim(&mut self) {
        let skip = self
            .coeffs
            .iter()
            .position(|c| !c.is_zero())
            .unwrap_or(self.coeffs.len() - 1);
        if skip > 0 {
            self.coeffs.drain(..skip);
            self.lead += skip as i64;
        }
    }

    pub fn lead(&self) -> i64 {
        self.lead
    }

    /// Highest exponent whose coefficient is known exactly.
    pub fn order(&self) -> i64 {
        self.order
    }

    /// Stored coefficients, `coeffs()[i]` belonging to `q^(lead + i)`.
    pub fn coeffs(&self) -> &[ExactRational] {
        &self.coeffs
    }

    /// Coefficient of `q^n`; zero below the lead, an error above the order.
    pub fn coeff(&self, n: i64) -> Result<ExactRational, SeriesError> {
        if n > self.order {
            return Err(SeriesError::BeyondOrder {
                exponent: n,
                order: self.order,
            });
        }
        Ok(self.coeff_or_zero(n))
    }

    fn coeff_or_zero(&self, n: i64) -> ExactRational {
        if n < self.lead || n > self.order {
            ExactRational::zero()
        } else {
            self.coeffs[(n - self.lead) as usize].clone()
        }
    }

    /// `(exponent, coefficient)` pairs for the nonzero coefficients.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &ExactRational)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.lead + i as i64, c))
    }

    /// Exponent of the first nonzero coefficient, `None` for the zero series.
    pub fn valuation(&self) -> Option<i64> {
        if self.coeffs[0].is_zero() {
            None
        } else {
            Some(self.lead)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Valuation, or `order + 1` for the zero series.
    fn effective_valuation(&self) -> i64 {
        self.valuation().unwrap_or(self.order + 1)
    }

    /// Drops every coefficient above `q^order`.
    pub fn truncate(&self, order: i64) -> Self {
        if order >= self.order {
            return self.clone();
        }
        if order < self.lead {
            return Self::zero(order);
        }
        let keep = (order - self.lead + 1) as usize;
        Self::new(self.lead, self.coeffs[..keep].to_vec())
    }

    /// Multiplies by `q^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentSeries {
            lead: self.lead + k,
            order: self.order + k,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn scale(&self, c: &ExactRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.order);
        }
        LaurentSeries {
            lead: self.lead,
            order: self.order,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    fn integral(&self) -> Integral {
        let denom = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints = if denom.is_one() {
            self.coeffs.iter().map(|c| c.numer().clone()).collect()
        } else {
            self.coeffs
                .iter()
                .map(|c| c.numer() * (&denom / c.denom()))
                .collect()
        };
        Integral {
            lead: self.lead,
            ints,
            denom,
        }
    }

    fn from_scaled(lead: i64, ints: Vec<BigInt>, denom: &BigInt) -> Self {
        if denom.is_one() {
            Self::from_bigints(lead, ints)
        } else {
            Self::new(
                lead,
                ints.into_iter()
                    .map(|n| ExactRational::new(n, denom.clone()))
                    .collect(),
            )
        }
    }

    /// Multiplicative inverse; the result is exact to relative precision
    /// `order - valuation`.
    pub fn invert(&self) -> Result<Self, SeriesError> {
        let v = self.valuation().ok_or(SeriesError::NotInvertible)?;
        let c = self.coeffs[0].clone();
        let unit = self.scale(&c.recip());
        let rel = (self.order - v) as usize;
        let (h, l) = tail_integral(&unit);

        // w_n = l^n u_n where u = 1 / (1 + h/l); integral by construction.
        let steps = weighted_tail(&h, &l);
        let mut w: Vec<BigInt> = Vec::with_capacity(rel + 1);
        w.push(BigInt::one());
        for n in 1..=rel {
            let mut acc = BigInt::zero();
            for step in steps.iter().take_while(|st| st.j <= n) {
                step.mul_add(&mut acc, -1, &w[n - step.j]);
            }
            w.push(acc);
        }
        let series = unscale_powers(-v, w, &l);
        Ok(series.scale(&c.recip()))
    }

    /// `self^k` for any integer `k`; negative powers require an invertible
    /// series.
    ///
    /// Uses the J. C. P. Miller recurrence on the normalized series
    /// `1 + h`, which costs one pass per output coefficient over the nonzero
    /// coefficients of `h`. The result is exact to the same relative
    /// precision as `self`.
    pub fn pow(&self, k: i64) -> Result<Self, SeriesError> {
        let Some(v) = self.valuation() else {
            if k <= 0 {
                return Err(SeriesError::NotInvertible);
            }
            let mut acc = self.clone();
            for _ in 1..k {
                acc = &acc * self;
            }
            return Ok(acc);
        };
        let rel = (self.order - v) as usize;
        if k == 0 {
            return Ok(Self::one(rel as i64));
        }
        if k == 1 {
            return Ok(self.clone());
        }
        let c = self.coeffs[0].clone();
        let unit = self.scale(&c.recip());
        let (h, l) = tail_integral(&unit);
        let steps = weighted_tail(&h, &l);

        let mut w: Vec<BigInt> = Vec::with_capacity(rel + 1);
        w.push(BigInt::one());
        for n in 1..=rel {
            let mut acc = BigInt::zero();
            for step in steps.iter().take_while(|st| st.j <= n) {
                // ((k + 1) j - n) h_j w_{n-j}
                let weight = (k + 1) * step.j as i64 - n as i64;
                if weight != 0 {
                    step.mul_add(&mut acc, weight, &w[n - step.j]);
                }
            }
            let (q, r) = acc.div_rem(&BigInt::from(n));
            debug_assert!(r.is_zero(), "Miller recurrence left a remainder");
            w.push(q);
        }
        let series = unscale_powers(v * k, w, &l);
        Ok(series.scale(&rational_pow(&c, k)))
    }

    /// Substitutes `q -> q^p`.
    pub fn rescale(&self, p: u32) -> Self {
        assert!(p >= 1, "rescale factor must be positive");
        if p == 1 {
            return self.clone();
        }
        let p = p as i64;
        let order = p * (self.order + 1) - 1;
        let lead = p * self.lead;
        let mut coeffs = vec![ExactRational::zero(); (order - lead + 1) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * p as usize] = c.clone();
        }
        Self::new(lead, coeffs)
    }

    /// `Σ a_{pn} q^n`: keeps the exponents divisible by `p` and divides them
    /// by `p` (the coefficient map of the `U_p` operator).
    pub fn u_pick(&self, p: u32) -> Self {
        assert!(p >= 1, "u_pick factor must be positive");
        if p == 1 {
            return self.clone();
        }
        let p = p as i64;
        let lead = -((-self.lead).div_euclid(p));
        let order = self.order.div_euclid(p);
        if lead > order {
            return Self::zero(order);
        }
        let coeffs = (lead..=order).map(|n| self.coeff_or_zero(n * p)).collect();
        Self::new(lead, coeffs)
    }
}

/// Splits a unit-leading series `1 + h` into `(H, l)` with `h = H / l`,
/// `H[j - 1]` holding the coefficient of `q^j`.
fn tail_integral(unit: &LaurentSeries) -> (Vec<BigInt>, BigInt) {
    let int = unit.integral();
    debug_assert_eq!(&int.ints[0], &int.denom);
    let l = int.denom;
    (int.ints.into_iter().skip(1).collect(), l)
}

/// One nonzero term `H_j l^(j-1)` of a recurrence.
struct Step {
    j: usize,
    value: BigInt,
    small: Option<i64>,
}

impl Step {
    fn new(j: usize, value: BigInt) -> Self {
        let small = value.to_i64();
        Step { j, value, small }
    }

    /// `acc += weight * value * w`.
    fn mul_add(&self, acc: &mut BigInt, weight: i64, w: &BigInt) {
        if w.is_zero() {
            return;
        }
        match self.small.and_then(|s| s.checked_mul(weight)) {
            Some(1) => *acc += w,
            Some(-1) => *acc -= w,
            Some(f) => *acc += w * f,
            None => *acc += (&self.value * w) * weight,
        }
    }
}

/// Nonzero `H_j l^(j-1)`, sorted by `j`.
fn weighted_tail(h: &[BigInt], l: &BigInt) -> Vec<Step> {
    let mut out = Vec::new();
    let mut lp = BigInt::one();
    for (i, hj) in h.iter().enumerate() {
        if !hj.is_zero() {
            let value = if l.is_one() { hj.clone() } else { hj * &lp };
            out.push(Step::new(i + 1, value));
        }
        if !l.is_one() {
            lp *= l;
        }
    }
    out
}

/// Rebuilds `q^shift Σ (w_n / l^n) q^n`.
fn unscale_powers(shift: i64, w: Vec<BigInt>, l: &BigInt) -> LaurentSeries {
    if l.is_one() {
        return LaurentSeries::from_bigints(shift, w);
    }
    let mut lp = BigInt::one();
    let mut coeffs = Vec::with_capacity(w.len());
    for wn in w {
        coeffs.push(ExactRational::new(wn, lp.clone()));
        lp *= l;
    }
    LaurentSeries::new(shift, coeffs)
}

fn rational_pow(c: &ExactRational, k: i64) -> ExactRational {
    let e = k.unsigned_abs();
    let e = u32::try_from(e).expect("exponent too large");
    let base = if k < 0 { c.recip() } else { c.clone() };
    num_traits::pow::pow(base, e as usize)
}

impl Add<&LaurentSeries> for &LaurentSeries {
    type Output = LaurentSeries;

    fn add(self, rhs: &LaurentSeries) -> LaurentSeries {
        let order = self.order.min(rhs.order);
        let lead = self.lead.min(rhs.lead).min(order);
        let coeffs = (lead..=order)
            .map(|n| self.coeff_or_zero(n) + rhs.coeff_or_zero(n))
            .collect();
        LaurentSeries::new(lead, coeffs)
    }
}

impl Neg for &LaurentSeries {
    type Output = LaurentSeries;

    fn neg(self) -> LaurentSeries {
        LaurentSeries {
            lead: self.lead,
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Sub<&LaurentSeries> for &LaurentSeries {
    type Output = LaurentSeries;

    fn sub(self, rhs: &LaurentSeries) -> LaurentSeries {
        self + &(-rhs)
    }
}

impl Mul<&LaurentSeries> for &LaurentSeries {
    type Output = LaurentSeries;

    /// Cauchy product, exact up to
    /// `min(order(s) + val(t), order(t) + val(s))`.
    fn mul(self, rhs: &LaurentSeries) -> LaurentSeries {
        let vs = self.effective_valuation();
        let vt = rhs.effective_valuation();
        let order = (self.order + vt).min(rhs.order + vs);
        let lead = vs + vt;
        if self.is_zero() || rhs.is_zero() || lead > order {
            return LaurentSeries::zero(order);
        }
        let a = self.integral();
        let b = rhs.integral();
        let nnz = |x: &Integral| x.ints.iter().filter(|c| !c.is_zero()).count();
        let (sparse, dense) = if nnz(&a) <= nnz(&b) { (&a, &b) } else { (&b, &a) };

        let len = (order - lead + 1) as usize;
        let mut acc = vec![BigInt::zero(); len];
        for (i, si) in sparse.ints.iter().enumerate() {
            if si.is_zero() {
                continue;
            }
            // exponent of si is sparse.lead + i; offset into acc:
            let base = (sparse.lead + i as i64 + dense.lead - lead) as usize;
            if base >= len {
                break;
            }
            let small = si.to_i64();
            for (j, dj) in dense.ints.iter().take(len - base).enumerate() {
                if dj.is_zero() {
                    continue;
                }
                match small {
                    Some(1) => acc[base + j] += dj,
                    Some(-1) => acc[base + j] -= dj,
                    Some(s) => acc[base + j] += dj * s,
                    None => acc[base + j] += dj * si,
                }
            }
        }
        let denom = &a.denom * &b.denom;
        LaurentSeries::from_scaled(lead, acc, &denom)
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.terms() {
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match n {
                0 => write!(f, "{mag}")?,
                _ if mag.is_one() => write!(f, "q^{n}")?,
                _ => write!(f, "{mag}*q^{n}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.order + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ser(lead: i64, c: &[i64]) -> LaurentSeries {
        LaurentSeries::from_integers(lead, c)
    }

    fn r(n: i64) -> ExactRational {
        ExactRational::from_integer(n.into())
    }

    #[test]
    fn add_examples() {
        let s = &ser(-1, &[1, 0, 0]) + &ser(1, &[1]);
        assert_eq!(s, ser(-1, &[1, 0, 1]));

        let s = ser(-2, &[3, 0, 5, 7]);
        assert_eq!(&s + &LaurentSeries::zero(5), s);

        let s = &ser(0, &[1, -1, 0]) + &ser(1, &[1, 0]);
        assert_eq!(s, ser(0, &[1, 0, 0]));
    }

    #[test]
    fn mul_examples() {
        // (q^-1 + 1)(q) with q known to order 2
        let s = &ser(-1, &[1, 1, 0, 0]) * &ser(1, &[1, 0]);
        assert_eq!(s.lead(), 0);
        assert_eq!(s.coeff(0).unwrap(), r(1));
        assert_eq!(s.coeff(1).unwrap(), r(1));

        let s = ser(-1, &[2, 0, 5, 0, 1]);
        assert_eq!(&s * &LaurentSeries::one(10), s);

        let s = &ser(0, &[1, 1, 0, 0]) * &ser(0, &[1, -1, 0, 0]);
        assert_eq!(s, ser(0, &[1, 0, -1, 0]));
    }

    #[test]
    fn mul_order_bookkeeping() {
        let s = ser(-1, &[1, 2, 3]); // order 1
        let t = ser(2, &[1, 1, 1, 1]); // order 5
        let p = &s * &t;
        assert_eq!(p.order(), (1 + 2).min(5 - 1));
        assert!(p.coeff(4).is_err());
    }

    #[test]
    fn invert_examples() {
        let s = ser(0, &[1, -1, 0, 0, 0, 0]).invert().unwrap();
        assert_eq!(s, ser(0, &[1, 1, 1, 1, 1, 1]));

        let s = ser(1, &[1, 0, 0]).invert().unwrap();
        assert_eq!(s.lead(), -1);
        assert_eq!(s.coeff(-1).unwrap(), r(1));
        assert_eq!(s.coeff(0).unwrap(), r(0));

        // q(1 + 24q): multiply back and check the product is 1.
        let base = ser(1, &[1, 24, 0, 0, 0, 0, 0]);
        let inv = base.invert().unwrap();
        assert_eq!(inv.lead(), -1);
        assert_eq!(inv.coeff(0).unwrap(), r(-24));
        assert_eq!(inv.coeff(1).unwrap(), r(576));
        let one = &base * &inv;
        for n in 0..=one.order() {
            let want = if n == 0 { r(1) } else { r(0) };
            assert_eq!(one.coeff(n).unwrap(), want);
        }
    }

    #[test]
    fn invert_rational_leading_coefficient() {
        let s = LaurentSeries::new(
            0,
            vec![
                ExactRational::new(3.into(), 2.into()),
                ExactRational::new(1.into(), 3.into()),
                r(5),
                r(0),
            ],
        );
        let inv = s.invert().unwrap();
        let prod = &s * &inv;
        assert_eq!(prod, LaurentSeries::one(3));
    }

    #[test]
    fn invert_zero_fails() {
        assert_eq!(
            LaurentSeries::zero(4).invert(),
            Err(SeriesError::NotInvertible)
        );
    }

    #[test]
    fn pow_examples() {
        let s = ser(0, &[1, 1, 0, 0, 0]).pow(2).unwrap();
        assert_eq!(s, ser(0, &[1, 2, 1, 0, 0]));

        let s = ser(-1, &[4, 7, 9]).pow(0).unwrap();
        assert_eq!(s, LaurentSeries::one(2));

        // binomial oracle: coefficient of q^2 in (1 - q)^24 is C(24, 2)
        let s = ser(0, &[1, -1, 0, 0]).pow(24).unwrap();
        let c24_2 = (24 * 23) / 2;
        assert_eq!(s.coeff(2).unwrap(), r(c24_2));
        assert_eq!(c24_2, 276);
    }

    #[test]
    fn pow_negative_matches_repeated_inverse() {
        let s = ser(1, &[2, -3, 0, 5, 1, 0, 0]);
        let inv = s.invert().unwrap();
        let direct = &(&inv * &inv) * &inv;
        assert_eq!(s.pow(-3).unwrap(), direct);
    }

    #[test]
    fn pow_of_zero() {
        assert_eq!(LaurentSeries::zero(3).pow(-1), Err(SeriesError::NotInvertible));
        assert!(LaurentSeries::zero(3).pow(2).unwrap().is_zero());
    }

    #[test]
    fn rescale_examples() {
        let s = ser(1, &[1, 1]).rescale(2);
        assert_eq!(s.coeff(2).unwrap(), r(1));
        assert_eq!(s.coeff(3).unwrap(), r(0));
        assert_eq!(s.coeff(4).unwrap(), r(1));
        assert_eq!(s.order(), 5);

        let s = ser(-1, &[3, 0, 1]);
        assert_eq!(s.rescale(1), s);

        let s = ser(-1, &[1]).rescale(3);
        assert_eq!(s.lead(), -3);
        assert_eq!(s.coeff(-3).unwrap(), r(1));
    }

    #[test]
    fn u_pick_examples() {
        let s = ser(-1, &[1, 0, 0, 5]).u_pick(2);
        assert_eq!(s, ser(1, &[5]));

        let s = ser(-1, &[1, 2, 3]);
        assert_eq!(s.u_pick(1), s);

        let s = ser(3, &[1, 0, 0, 7]).u_pick(3);
        assert_eq!(s, ser(1, &[1, 7]));
    }

    #[test]
    fn coefficient_beyond_order_is_an_error() {
        let s = ser(0, &[1, 2]);
        assert_eq!(
            s.coeff(2),
            Err(SeriesError::BeyondOrder { exponent: 2, order: 1 })
        );
        assert_eq!(s.coeff(-5).unwrap(), r(0));
    }

    #[test]
    fn display() {
        let s = ser(-1, &[1, 744, -3]);
        assert_eq!(s.to_string(), "q^-1 + 744 - 3*q^1 + O(q^2)");
    }

    fn arb_series() -> impl Strategy<Value = LaurentSeries> {
        (-2i64..3, prop::collection::vec(-20i64..20, 1..9)).prop_map(|(lead, mut c)| {
            if c[0] == 0 {
                c[0] = 1;
            }
            LaurentSeries::from_integers(lead, &c)
        })
    }

    fn arb_rational_series() -> impl Strategy<Value = LaurentSeries> {
        (
            -2i64..3,
            prop::collection::vec((-9i64..9, 1i64..5), 1..7),
        )
            .prop_map(|(lead, c)| {
                let mut coeffs: Vec<_> = c
                    .into_iter()
                    .map(|(n, d)| ExactRational::new(n.into(), d.into()))
                    .collect();
                if coeffs[0].is_zero() {
                    coeffs[0] = ExactRational::new(2.into(), 3.into());
                }
                LaurentSeries::new(lead, coeffs)
            })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_series(), b in arb_series(), c in arb_rational_series()) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            let lhs = &a * &(&b + &c);
            let rhs = &(&a * &b) + &(&a * &c);
            // distributivity holds wherever both sides are exact
            let order = lhs.order().min(rhs.order());
            prop_assert_eq!(lhs.truncate(order), rhs.truncate(order));
        }

        #[test]
        fn invert_is_two_sided(a in arb_rational_series()) {
            let inv = a.invert().unwrap();
            let left = &a * &inv;
            let right = &inv * &a;
            prop_assert_eq!(left.clone(), right);
            prop_assert_eq!(left.clone(), LaurentSeries::one(left.order()));
            prop_assert_eq!(inv.lead(), -a.lead());
        }

        #[test]
        fn pow_agrees_with_repeated_multiplication(a in arb_rational_series(), k in 0i64..5) {
            let mut acc = LaurentSeries::one(a.order() - a.lead());
            for _ in 0..k {
                acc = &acc * &a;
            }
            let p = a.pow(k).unwrap();
            let order = p.order().min(acc.order());
            prop_assert_eq!(p.truncate(order), acc.truncate(order));
        }

        #[test]
        fn rescale_is_multiplicative(a in arb_series(), b in arb_rational_series(), p in 1u32..5) {
            prop_assert_eq!((&a * &b).rescale(p), &a.rescale(p) * &b.rescale(p));
        }

        #[test]
        fn u_pick_undoes_rescale(a in arb_rational_series(), p in 1u32..6) {
            prop_assert_eq!(a.rescale(p).u_pick(p), a);
        }
    }
}
