//! Exact q-expansions of eta quotients, `j`, the absolute invariants `Φ_p`,
//! the Fricke-invariant functions `G_p` and their Hecke images `P_p`.
//!
//! For a genus-zero prime `p` with `r = 24 / (p - 1)`:
//!
//! ```text
//! Φ_p(τ)        = (η(pτ)/η(τ))^r                = q (1 + Σ b_n q^n)
//! Φ_p(-1/(pτ))  = p^(-r/2) Φ_p(τ)^(-1)           = p^(-r/2) (q^-1 + Σ a_n q^n)
//! G_p           = p^(r/2) (Φ_p(τ) + Φ_p(-1/(pτ))) = q^-1 + Σ α_n q^n
//! P_p           = G_p(τ) + Σ_{m<p} G_p((τ+m)/p)  = q^-1 + α_0 (p+1) + Σ (α_n + p α_{pn}) q^n
//! ```
//!
//! `P_p` is invariant under the full modular group and has a single simple
//! pole at the cusp, so `P_p - j` is a constant. [`shift_constant`] checks that
//! coefficient by coefficient.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith::{divisor_power_sum, GENUS_ZERO_PRIMES, SUPERSINGULAR_PRIMES};
use crate::qseries::{ExactRational, LaurentSeries, SeriesError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModformsError {
    #[error("{0} is not a supersingular prime")]
    NotSupersingular(u32),
    #[error("X_0({0}) does not have genus zero")]
    NotGenusZero(u32),
    #[error("alpha table too short: index {needed} required, table ends at {available}")]
    TableTooShort { needed: usize, available: usize },
    #[error("identity violated at order {n}: difference coefficient {value}")]
    IdentityViolated { n: i64, value: ExactRational },
    #[error("empty alpha table")]
    EmptyTable,
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// A prime `p` with `X_0(p)` of genus zero: `p ∈ {2, 3, 5, 7, 13}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GenusZeroPrime {
    p: u32,
    r: u32,
}

impl GenusZeroPrime {
    pub fn new(p: u32) -> Result<Self, ModformsError> {
        if !GENUS_ZERO_PRIMES.contains(&p) {
            return Err(ModformsError::NotGenusZero(p));
        }
        let r = 24 / (p - 1);
        debug_assert_eq!(r * (p - 1), 24);
        debug_assert_eq!(r % 2, 0);
        Ok(GenusZeroPrime { p, r })
    }

    pub fn all() -> impl Iterator<Item = GenusZeroPrime> {
        GENUS_ZERO_PRIMES.iter().map(|&p| GenusZeroPrime { p, r: 24 / (p - 1) })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// `r = 24 / (p - 1)`.
    pub fn r(&self) -> u32 {
        self.r
    }

    /// `r / 2 = 12 / (p - 1)`.
    pub fn half_r(&self) -> u32 {
        self.r / 2
    }

    /// The integer `p^(r/2)`.
    pub fn fricke_scale(&self) -> BigInt {
        num_traits::pow(BigInt::from(self.p), self.half_r() as usize)
    }

    pub fn supersingular(&self) -> SupersingularPrime {
        SupersingularPrime(self.p)
    }
}

/// One of the fifteen supersingular primes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SupersingularPrime(u32);

impl SupersingularPrime {
    pub fn new(p: u32) -> Result<Self, ModformsError> {
        if SUPERSINGULAR_PRIMES.contains(&p) {
            Ok(SupersingularPrime(p))
        } else {
            Err(ModformsError::NotSupersingular(p))
        }
    }

    pub fn all() -> impl Iterator<Item = SupersingularPrime> {
        SUPERSINGULAR_PRIMES.iter().map(|&p| SupersingularPrime(p))
    }

    pub fn get(&self) -> u32 {
        self.0
    }

    pub fn genus_zero(&self) -> Option<GenusZeroPrime> {
        GenusZeroPrime::new(self.0).ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableSource {
    Computed,
    Ingested,
}

/// Coefficients `α_0, ..., α_N` of `G_p = q^-1 + Σ α_n q^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaTable {
    p: SupersingularPrime,
    entries: Vec<ExactRational>,
    source: TableSource,
}

impl AlphaTable {
    /// Wraps an externally supplied table (index `n` at position `n`).
    pub fn ingested(
        p: SupersingularPrime,
        entries: Vec<ExactRational>,
    ) -> Result<Self, ModformsError> {
        if entries.is_empty() {
            return Err(ModformsError::EmptyTable);
        }
        Ok(AlphaTable {
            p,
            entries,
            source: TableSource::Ingested,
        })
    }

    pub fn p(&self) -> SupersingularPrime {
        self.p
    }

    pub fn source(&self) -> TableSource {
        self.source
    }

    /// Largest index `N` present.
    pub fn order(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn entries(&self) -> &[ExactRational] {
        &self.entries
    }

    pub fn alpha(&self, n: usize) -> Result<&ExactRational, ModformsError> {
        self.entries.get(n).ok_or(ModformsError::TableTooShort {
            needed: n,
            available: self.order(),
        })
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(|a| a.is_integer())
    }

    /// `q^-1 + Σ_{n ≤ N} α_n q^n`.
    pub fn series(&self) -> LaurentSeries {
        let mut coeffs = Vec::with_capacity(self.entries.len() + 1);
        coeffs.push(ExactRational::one());
        coeffs.extend(self.entries.iter().cloned());
        LaurentSeries::new(-1, coeffs)
    }
}

/// The constant `P_p(ρ)` in `P_p = j + P_p(ρ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftConstant {
    pub p: SupersingularPrime,
    pub value: ExactRational,
}

/// Comparison of the two printed closed forms of the shift constant,
/// `α_0 (p + 1) - 744` and `α_0 (p - 1) - 744`, against the computed value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstantAdjudication {
    pub computed: ExactRational,
    pub plus_form: ExactRational,
    pub minus_form: ExactRational,
    pub plus_holds: bool,
    pub minus_holds: bool,
}

fn int(n: i64) -> ExactRational {
    ExactRational::from_integer(n.into())
}

/// `∏_{n=1}^{N} (1 - q^n)` modulo `q^(N+1)`, expanded by Euler's pentagonal
/// number theorem.
pub fn dedekind_product(order: usize) -> LaurentSeries {
    let mut coeffs = vec![BigInt::zero(); order + 1];
    coeffs[0] = BigInt::one();
    for k in 1i64.. {
        let sign: i64 = if k % 2 == 0 { 1 } else { -1 };
        let lo = (k * (3 * k - 1) / 2) as usize;
        if lo > order {
            break;
        }
        coeffs[lo] += sign;
        let hi = (k * (3 * k + 1) / 2) as usize;
        if hi <= order {
            coeffs[hi] += sign;
        }
    }
    LaurentSeries::from_bigints(0, coeffs)
}

/// `∏_m ∏_n (1 - q^(m n))^(e_m)` modulo `q^(order+1)` for `(m, e_m)` pairs.
///
/// The first factor is expanded by powering, later positive factors are
/// multiplied in one sparse `∏(1 - q^(mn))` at a time. Put the factor with
/// the negative exponent first to keep every product sparse-by-dense.
pub fn eta_quotient(factors: &[(u32, i64)], order: usize) -> LaurentSeries {
    let mut acc: Option<LaurentSeries> = None;
    for &(m, e) in factors {
        assert!(m >= 1, "eta level must be positive");
        if e == 0 {
            continue;
        }
        let base = dedekind_product(order / m as usize);
        match acc.take() {
            None => {
                let piece = base
                    .pow(e)
                    .expect("dedekind product has unit constant term")
                    .rescale(m)
                    .truncate(order as i64);
                acc = Some(piece);
            }
            Some(cur) if e > 0 => {
                let sparse = base.rescale(m).truncate(order as i64);
                let mut cur = cur;
                for _ in 0..e {
                    cur = &cur * &sparse;
                }
                acc = Some(cur);
            }
            Some(cur) => {
                let piece = base
                    .pow(e)
                    .expect("dedekind product has unit constant term")
                    .rescale(m)
                    .truncate(order as i64);
                acc = Some(&cur * &piece);
            }
        }
    }
    acc.unwrap_or_else(|| LaurentSeries::one(order as i64))
}

/// `Φ_p = q ∏ (1 - q^(pn))^r / (1 - q^n)^r`, exact to `q^order`.
pub fn phi_series(p: GenusZeroPrime, order: usize) -> LaurentSeries {
    assert!(order >= 1);
    let r = p.r() as i64;
    eta_quotient(&[(1, -r), (p.p(), r)], order - 1).shift(1)
}

/// `q^-1 + Σ a_n q^n = q^-1 ∏ (1 - q^n)^r / (1 - q^(pn))^r`, the Fricke image
/// of `Φ_p` without its `p^(-r/2)` factor.
pub fn phi_fricke_normalized(p: GenusZeroPrime, order: usize) -> LaurentSeries {
    let r = p.r() as i64;
    eta_quotient(&[(p.p(), -r), (1, r)], order + 1).shift(-1)
}

/// `Φ_p(-1/(pτ)) = p^(-r/2) Φ_p(τ)^(-1)`, exact to `q^order`.
///
/// Expanded directly from the eta quotient of the inverse rather than by
/// inverting [`phi_series`]; the two agree as series.
pub fn phi_fricke_series(p: GenusZeroPrime, order: usize) -> LaurentSeries {
    let scale = ExactRational::new(BigInt::one(), p.fricke_scale());
    phi_fricke_normalized(p, order).scale(&scale)
}

/// The table of `G_p = p^(r/2) Φ_p + (q^-1 + Σ a_n q^n)` up to `α_order`.
pub fn g_series(p: GenusZeroPrime, order: usize) -> AlphaTable {
    let phi = phi_series(p, order);
    let fricke = phi_fricke_normalized(p, order);
    let scale = ExactRational::from_integer(p.fricke_scale());
    let g = &phi.scale(&scale) + &fricke;
    debug_assert_eq!(g.coeff(-1).ok(), Some(ExactRational::one()));
    let entries = (0..=order as i64)
        .map(|n| g.coeff(n).expect("within order"))
        .collect();
    AlphaTable {
        p: p.supersingular(),
        entries,
        source: TableSource::Computed,
    }
}

/// Checks `α_0 = a_0 = -b_1`, `α_1 = p^(r/2) + a_1` and
/// `α_n = p^(r/2) b_(n-1) + a_n` for `n ≤ order`, returning the number of
/// relations checked or the first failing index.
pub fn check_phi_relations(
    p: GenusZeroPrime,
    alphas: &AlphaTable,
    order: usize,
) -> Result<usize, ModformsError> {
    let phi = phi_series(p, order + 1);
    let fricke = phi_fricke_normalized(p, order);
    let scale = ExactRational::from_integer(p.fricke_scale());
    // b_n is the coefficient of q^(n+1) in Φ_p.
    let b = |n: i64| phi.coeff(n + 1);
    let a = |n: i64| fricke.coeff(n);
    let fail = |n: i64, lhs: &ExactRational, rhs: &ExactRational| ModformsError::IdentityViolated {
        n,
        value: lhs - rhs,
    };

    let mut checked = 0;
    let a0 = a(0)?;
    let alpha0 = alphas.alpha(0)?;
    if *alpha0 != a0 {
        return Err(fail(0, alpha0, &a0));
    }
    let minus_b1 = -b(1)?;
    if a0 != minus_b1 {
        return Err(fail(0, &a0, &minus_b1));
    }
    checked += 2;
    for n in 1..=order as i64 {
        let rhs = &scale * b(n - 1)? + a(n)?;
        let lhs = alphas.alpha(n as usize)?;
        if *lhs != rhs {
            return Err(fail(n, lhs, &rhs));
        }
        checked += 1;
    }
    Ok(checked)
}

/// Eisenstein series `E_4 = 1 + 240 Σ σ_3(n) q^n`.
pub fn eisenstein_e4(order: usize) -> LaurentSeries {
    let coeffs: Vec<BigInt> = (0..=order as u64)
        .map(|n| {
            if n == 0 {
                BigInt::one()
            } else {
                BigInt::from(divisor_power_sum(n, 3)) * 240
            }
        })
        .collect();
    LaurentSeries::from_bigints(0, coeffs)
}

/// `j = E_4^3 / Δ = q^-1 + 744 + Σ c_n q^n`, exact to `q^order`.
pub fn j_series(order: usize) -> LaurentSeries {
    assert!(order >= 1);
    let e4_cubed = eisenstein_e4(order + 1)
        .pow(3)
        .expect("E4 has unit constant term");
    // 1/Δ = q^-1 ∏ (1 - q^n)^-24
    let inv_delta = eta_quotient(&[(1, -24)], order + 1).shift(-1);
    (&e4_cubed * &inv_delta).truncate(order as i64)
}

/// `P_p = G_p + p U_p(G_p)`, exact to `q^order`; needs `α` up to `p · order`.
pub fn p_series(alphas: &AlphaTable, order: usize) -> Result<LaurentSeries, ModformsError> {
    let p = alphas.p().get();
    let needed = order * p as usize;
    if alphas.order() < needed {
        return Err(ModformsError::TableTooShort {
            needed,
            available: alphas.order(),
        });
    }
    let g = alphas.series();
    let picked = g.u_pick(p).scale(&int(p as i64));
    Ok((&g + &picked).truncate(order as i64))
}

/// Computes `P_p - j` to `q^order`, requires it to be constant and returns
/// that constant.
pub fn shift_constant(alphas: &AlphaTable, order: usize) -> Result<ShiftConstant, ModformsError> {
    shift_constant_against(alphas, &j_series(order), order)
}

/// [`shift_constant`] with a precomputed `j` expansion.
pub fn shift_constant_against(
    alphas: &AlphaTable,
    j: &LaurentSeries,
    order: usize,
) -> Result<ShiftConstant, ModformsError> {
    let pser = p_series(alphas, order)?;
    let diff = (&pser - j).truncate(order as i64);
    for (n, c) in diff.terms() {
        if n != 0 {
            return Err(ModformsError::IdentityViolated {
                n,
                value: c.clone(),
            });
        }
    }
    Ok(ShiftConstant {
        p: alphas.p(),
        value: diff.coeff(0)?,
    })
}

/// Compares the computed shift constant with both printed closed forms.
pub fn adjudicate_constant(alphas: &AlphaTable, shift: &ShiftConstant) -> ConstantAdjudication {
    let p = alphas.p().get() as i64;
    let a0 = &alphas.entries[0];
    let plus_form = a0 * int(p + 1) - int(744);
    let minus_form = a0 * int(p - 1) - int(744);
    ConstantAdjudication {
        plus_holds: plus_form == shift.value,
        minus_holds: minus_form == shift.value,
        computed: shift.value.clone(),
        plus_form,
        minus_form,
    }
}

/// `(c_n, α_n + p α_{pn})` for `n ≥ 1`.
pub fn coefficient_relation(
    alphas: &AlphaTable,
    j: &LaurentSeries,
    n: usize,
) -> Result<(ExactRational, ExactRational), ModformsError> {
    let p = alphas.p().get() as usize;
    let c = j.coeff(n as i64)?;
    let rhs = alphas.alpha(n)? + int(p as i64) * alphas.alpha(p * n)?;
    Ok((c, rhs))
}

/// Checks `c_n = α_n + p α_{pn}` for `1 ≤ n ≤ max_n`; returns the count.
pub fn check_coefficient_relation(
    alphas: &AlphaTable,
    j: &LaurentSeries,
    max_n: usize,
) -> Result<usize, ModformsError> {
    for n in 1..=max_n {
        let (c, rhs) = coefficient_relation(alphas, j, n)?;
        if c != rhs {
            return Err(ModformsError::IdentityViolated {
                n: n as i64,
                value: c - rhs,
            });
        }
    }
    Ok(max_n)
}
