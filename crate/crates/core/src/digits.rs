//! Base-`p` digit operators and the coefficient chains they generate.
//!
//! `F_p(n) = p n` shifts the digits of `n` up, `σ_p` adds one to the lowest
//! digit modulo `p`. Along `n, p n, p^2 n, ...` the coefficients `α_m` of
//! `G_p` and `c_m` of `j` are tied together by the alternating chain identity
//! checked in [`chain_residual`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::modforms::{AlphaTable, ModformsError, TableSource};
use crate::qseries::{ExactRational, LaurentSeries, SeriesError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DigitsError {
    #[error("index 0 has no F_p chain")]
    ZeroIndex,
    #[error("chain length k must be at least 1")]
    EmptyChain,
    #[error("no rational part for index {0}")]
    MissingEntry(usize),
    #[error(transparent)]
    Table(#[from] ModformsError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Base-`p` digits `(a_0, a_1, ..., a_N)` with `a_N ≠ 0`; empty for zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitVector {
    p: u64,
    digits: Vec<u64>,
}

impl DigitVector {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn value(&self) -> u64 {
        self.digits.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }
}

pub fn digits_of(mut n: u64, p: u64) -> DigitVector {
    assert!(p >= 2);
    let mut digits = Vec::new();
    while n > 0 {
        digits.push(n % p);
        n /= p;
    }
    DigitVector { p, digits }
}

/// `F_p^k(n) = n p^k`. Panics on overflow.
pub fn f_shift(n: u64, p: u64, k: u32) -> u64 {
    p.checked_pow(k)
        .and_then(|pk| n.checked_mul(pk))
        .expect("F_p^k overflows u64")
}

/// `σ_p^l(n)`: the lowest digit `a_0` becomes `(a_0 + l) mod p`.
pub fn sigma_shift(n: u64, p: u64, l: u64) -> u64 {
    let a0 = n % p;
    n - a0 + (a0 + l) % p
}

/// `F_p^k σ_p^l (n) - σ_p^l F_p^k (n)`, by composing the two operators.
pub fn commutator_h(n: u64, p: u64, k: u32, l: u64) -> i64 {
    let left = f_shift(sigma_shift(n, p, l), p, k) as i64;
    let right = sigma_shift(f_shift(n, p, k), p, l) as i64;
    left - right
}

/// `-l + ((a_0 + l) mod p - a_0) p^k`.
pub fn commutator_h_closed(n: u64, p: u64, k: u32, l: u64) -> i64 {
    let a0 = (n % p) as i64;
    let shifted = ((n % p + l) % p) as i64;
    -(l as i64) + (shifted - a0) * (p as i64).pow(k)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Letter {
    F,
    Sigma(u64),
}

/// The word `σ^{a_0} F σ^{a_1} F ... F σ^{a_N}` that builds `n` from 0,
/// outermost letter first.
pub fn word_of(n: u64, p: u64) -> Vec<Letter> {
    let digits = digits_of(n, p);
    let mut word = Vec::new();
    for (i, &d) in digits.digits().iter().enumerate() {
        if i > 0 {
            word.push(Letter::F);
        }
        if d > 0 {
            word.push(Letter::Sigma(d));
        }
    }
    word
}

/// Applies a word to 0, innermost (last) letter first.
pub fn apply_word(word: &[Letter], p: u64) -> u64 {
    word.iter().rev().fold(0, |acc, letter| match *letter {
        Letter::F => f_shift(acc, p, 1),
        Letter::Sigma(l) => sigma_shift(acc, p, l),
    })
}

/// `n` with every factor `p` removed: the start of the longest chain
/// `m, p m, p^2 m, ...` through `n`.
pub fn chain_root(mut n: u64, p: u64) -> u64 {
    assert!(n > 0);
    while n % p == 0 {
        n /= p;
    }
    n
}

/// `n, p n, ..., p^(len-1) n`.
pub fn f_chain(n: u64, p: u64, len: usize) -> Vec<u64> {
    std::iter::successors(Some(n), |&m| m.checked_mul(p)).take(len).collect()
}

fn pow_rational(p: u64, k: u32) -> ExactRational {
    ExactRational::from_integer(num_traits::pow(BigInt::from(p), k as usize))
}

/// `(p^k α_{p^k n} + (-1)^(k+1) α_n, Σ_{i<k} (-1)^(k-1-i) p^i c_{p^i n})`.
///
/// The two sides agree for every `n ≥ 1` and `k ≥ 1` when the table comes
/// from a Fricke-invariant function with `P_p = j + const`.
pub fn chain_residual(
    alphas: &AlphaTable,
    j: &LaurentSeries,
    n: usize,
    k: u32,
) -> Result<(ExactRational, ExactRational), DigitsError> {
    if n == 0 {
        return Err(DigitsError::ZeroIndex);
    }
    if k == 0 {
        return Err(DigitsError::EmptyChain);
    }
    let p = alphas.p().get() as u64;
    let top = f_shift(n as u64, p, k) as usize;
    let sign = if k % 2 == 1 { 1 } else { -1 };
    let lhs = pow_rational(p, k) * alphas.alpha(top)? + ExactRational::from_integer(sign.into()) * alphas.alpha(n)?;
    let mut rhs = ExactRational::zero();
    for i in 0..k {
        let idx = f_shift(n as u64, p, i) as i64;
        let term = pow_rational(p, i) * j.coeff(idx)?;
        if (k - 1 - i) % 2 == 0 {
            rhs += term;
        } else {
            rhs -= term;
        }
    }
    Ok((lhs, rhs))
}

/// `c_n / p + p α_{p^2 n} - α_n / p`, which equals `c_{pn}`.
pub fn f_map(alphas: &AlphaTable, j: &LaurentSeries, n: usize) -> Result<ExactRational, DigitsError> {
    let p = alphas.p().get() as u64;
    let pr = pow_rational(p, 1);
    let c = j.coeff(n as i64)?;
    let deep = alphas.alpha(f_shift(n as u64, p, 2) as usize)?;
    Ok(c / &pr + &pr * deep - alphas.alpha(n)? / &pr)
}

/// `(-1)^k / p^k`: the factor any irrational part of `α_n` picks up along
/// `n, p n, ..., p^k n`. Its magnitude tends to zero.
pub fn omega_scale(k: u32, p: u64) -> ExactRational {
    let mag = ExactRational::new(BigInt::one(), num_traits::pow(BigInt::from(p), k as usize));
    if k % 2 == 0 {
        mag
    } else {
        -mag
    }
}

/// How the irrational part of an entry is treated; it is never given a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OmegaTag {
    /// Computed genus-zero table: every entry is an integer, the part is zero.
    AssumedZero,
    /// Ingested table: carried only as a symbol, consistent with zero.
    Symbolic,
}

/// `α_n = Ω_n + a_n / b_n` with `gcd(a_n, b_n) = 1`, `b_n ≥ 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalDecomposition {
    pub n: usize,
    pub g: ExactRational,
    pub omega: OmegaTag,
}

impl RationalDecomposition {
    pub fn numerator(&self) -> &BigInt {
        self.g.numer()
    }

    /// `BigRational` keeps the denominator positive and coprime.
    pub fn denominator(&self) -> &BigInt {
        self.g.denom()
    }
}

pub fn decompose(alphas: &AlphaTable) -> Vec<RationalDecomposition> {
    let omega = match alphas.source() {
        TableSource::Computed => OmegaTag::AssumedZero,
        TableSource::Ingested => OmegaTag::Symbolic,
    };
    alphas
        .entries()
        .iter()
        .enumerate()
        .map(|(n, g)| RationalDecomposition { n, g: g.clone(), omega })
        .collect()
}

/// Relation between consecutive denominators along a chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DenominatorCase {
    /// Every denominator is 1.
    Integral,
    /// `b_{pm} = b_m` at every step.
    Equal,
    /// `b_{pm} = p b_m` at every step.
    Scaled,
    /// Some steps of each kind, or other admissible ratios.
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenominatorReport {
    pub n: usize,
    pub k: u32,
    /// `b_n | b_{p^i n}` and `b_{p^i n} | p^i b_n` for `1 ≤ i ≤ k`.
    pub divisibility_holds: bool,
    /// First `i` where a divisibility fails.
    pub first_failure: Option<u32>,
    /// `p^k b_n a_{p^k n} + (-1)^(k+1) a_n b_{p^k n} = b_n b_{p^k n} A`.
    pub identity_holds: bool,
    /// The variant with the sign on the other term; agrees with the above
    /// exactly when `k` is odd or both sides vanish.
    pub swapped_sign_identity_holds: bool,
    pub case: DenominatorCase,
}

/// Checks the denominator constraints along `n, p n, ..., p^k n` for the
/// rational parts of `alphas`, with `A = p^k α_{p^k n} + (-1)^(k+1) α_n`
/// taken from the alternating `c`-sum.
pub fn denominator_chain_check(
    alphas: &AlphaTable,
    j: &LaurentSeries,
    n: usize,
    k: u32,
) -> Result<DenominatorReport, DigitsError> {
    let p = alphas.p().get() as u64;
    let parts = decompose(alphas);
    let part = |m: usize| parts.get(m).ok_or(DigitsError::MissingEntry(m));
    let (_, chain_sum) = chain_residual(alphas, j, n, k)?;

    let base = part(n)?;
    let b_n = base.denominator().clone();
    let mut first_failure = None;
    let mut equal_steps = 0;
    let mut scaled_steps = 0;
    let mut prev = b_n.clone();
    for i in 1..=k {
        let b_i = part(f_shift(n as u64, p, i) as usize)?.denominator().clone();
        let pk = num_traits::pow(BigInt::from(p), i as usize);
        let ok = b_i.is_multiple_of(&b_n) && (&pk * &b_n).is_multiple_of(&b_i);
        if !ok && first_failure.is_none() {
            first_failure = Some(i);
        }
        if b_i == prev {
            equal_steps += 1;
        } else if b_i == &prev * BigInt::from(p) {
            scaled_steps += 1;
        }
        prev = b_i;
    }

    let top = part(f_shift(n as u64, p, k) as usize)?;
    let (a_n, a_top, b_top) = (base.numerator(), top.numerator(), top.denominator());
    let pk = num_traits::pow(BigInt::from(p), k as usize);
    let odd = k % 2 == 1;
    let signed = |x: BigInt, positive: bool| if positive { x } else { -x };
    let lhs = &pk * &b_n * a_top + signed(a_n * b_top, odd);
    let swapped = a_n * b_top + signed(&pk * &b_n * a_top, odd);
    let rhs = ExactRational::from_integer(&b_n * b_top) * &chain_sum;
    let lhs = ExactRational::from_integer(lhs);
    let swapped = ExactRational::from_integer(swapped);

    let all_one = parts_are_one(&parts, n, k, p);
    let case = if all_one {
        DenominatorCase::Integral
    } else if equal_steps == k {
        DenominatorCase::Equal
    } else if scaled_steps == k {
        DenominatorCase::Scaled
    } else {
        DenominatorCase::Mixed
    };

    Ok(DenominatorReport {
        n,
        k,
        divisibility_holds: first_failure.is_none(),
        first_failure,
        identity_holds: lhs == rhs,
        swapped_sign_identity_holds: swapped == rhs,
        case,
    })
}

fn parts_are_one(parts: &[RationalDecomposition], n: usize, k: u32, p: u64) -> bool {
    (0..=k).all(|i| parts[f_shift(n as u64, p, i) as usize].denominator().is_one())
}

/// Largest `k` with `p^k n` inside the table.
pub fn max_chain_length(alphas: &AlphaTable, n: usize) -> u32 {
    let p = alphas.p().get() as usize;
    let mut k = 0;
    let mut m = n;
    while m * p <= alphas.order() {
        m *= p;
        k += 1;
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modforms::{g_series, j_series, GenusZeroPrime, SupersingularPrime};
    use num_traits::Signed;
    use proptest::prelude::*;

    fn r(n: i64) -> ExactRational {
        ExactRational::from_integer(n.into())
    }

    #[test]
    fn digit_examples() {
        assert_eq!(digits_of(5, 3).digits(), &[2, 1]);
        assert!(digits_of(0, 7).digits().is_empty());
        assert_eq!(digits_of(125, 5).digits(), &[0, 0, 0, 1]);
        assert_eq!(f_shift(5, 3, 1), 15);
        assert_eq!(f_shift(9, 4, 0), 9);
        assert_eq!(digits_of(f_shift(3, 2, 1), 2).digits(), &[0, 1, 1]);
        assert_eq!(sigma_shift(5, 3, 1), 3);
        assert_eq!(sigma_shift(0, 5, 1), 1);
        assert_eq!(sigma_shift(17, 7, 7), 17);
    }

    #[test]
    fn commutator_examples() {
        assert_eq!(commutator_h(3, 3, 1, 1), 2);
        assert_eq!(commutator_h(4, 5, 2, 3), -53);
        for p in [2u64, 3, 5] {
            for k in 1..=3 {
                for l in 1..p {
                    // n divisible by p gives l(p^k - 1)
                    let want = l as i64 * ((p as i64).pow(k) - 1);
                    assert_eq!(commutator_h(7 * p, p, k, l), want);
                }
            }
        }
    }

    #[test]
    fn commutator_brute_force() {
        for p in [2u64, 3, 5, 7, 11, 13] {
            for k in 1..=3 {
                for l in 1..p {
                    for n in 0..10_000 {
                        let h = commutator_h(n, p, k, l);
                        assert_eq!(h, commutator_h_closed(n, p, k, l));
                        assert_ne!(h.rem_euclid(p as i64), 0);
                    }
                }
            }
            for n in 0..10_000 {
                assert_eq!(sigma_shift(n, p, p), n);
                assert_eq!(apply_word(&word_of(n, p), p), n);
            }
        }
    }

    #[test]
    fn chains_are_maximal_at_roots() {
        for p in [2u64, 3, 13] {
            for n in (1..300u64).filter(|n| n % p != 0) {
                let chain = f_chain(n, p, 8);
                let mut distinct = chain.clone();
                distinct.sort_unstable();
                distinct.dedup();
                assert_eq!(distinct.len(), chain.len());
                for r in 0..4 {
                    let m = f_shift(n, p, r);
                    assert_eq!(chain_root(m, p), n);
                    assert!(f_chain(m, p, 8 - r as usize).iter().all(|x| chain.contains(x)));
                }
            }
        }
    }

    #[test]
    fn omega_scale_examples() {
        assert_eq!(omega_scale(0, 5), r(1));
        assert_eq!(omega_scale(1, 5), ExactRational::new((-1).into(), 5.into()));
        assert_eq!(omega_scale(2, 3), ExactRational::new(1.into(), 9.into()));
        let tiny = omega_scale(40, 2);
        assert!(tiny.abs() < ExactRational::new(1.into(), BigInt::from(10u64).pow(12)));
    }

    fn tables(p: u32, order: usize) -> (AlphaTable, LaurentSeries) {
        (g_series(GenusZeroPrime::new(p).unwrap(), order), j_series(order))
    }

    #[test]
    fn chain_identity_small() {
        let (t, j) = tables(2, 40);
        let (lhs, rhs) = chain_residual(&t, &j, 1, 2).unwrap();
        let c = |n| j.coeff(n).unwrap();
        assert_eq!(rhs, r(2) * c(2) - c(1));
        assert_eq!(lhs, rhs);
        for n in 1..=10 {
            let (l1, r1) = chain_residual(&t, &j, n, 1).unwrap();
            assert_eq!(l1, r1);
            assert_eq!(r1, c(n as i64));
        }
        assert_eq!(chain_residual(&t, &j, 0, 1), Err(DigitsError::ZeroIndex));
        assert_eq!(chain_residual(&t, &j, 1, 0), Err(DigitsError::EmptyChain));
        assert!(matches!(chain_residual(&t, &j, 11, 2), Err(DigitsError::Table(_))));
    }

    #[test]
    fn f_map_reproduces_coefficients() {
        let (t2, j) = tables(2, 64);
        assert_eq!(f_map(&t2, &j, 1).unwrap(), j.coeff(2).unwrap());
        let (t13, j13) = tables(13, 169);
        assert_eq!(f_map(&t13, &j13, 1).unwrap(), j13.coeff(13).unwrap());
        // iterating from c_1 along the chain
        let mut c = j.coeff(1).unwrap();
        let mut n = 1usize;
        for _ in 0..3 {
            let deep = t2.alpha(4 * n).unwrap().clone();
            c = &c / r(2) + r(2) * deep - t2.alpha(n).unwrap() / r(2);
            n *= 2;
            assert_eq!(c, j.coeff(n as i64).unwrap());
        }
    }

    #[test]
    fn denominators_of_computed_tables() {
        let (t, j) = tables(3, 90);
        for k in 1..=3 {
            let rep = denominator_chain_check(&t, &j, 1, k).unwrap();
            assert_eq!(rep.case, DenominatorCase::Integral);
            assert!(rep.divisibility_holds && rep.identity_holds);
            assert_eq!(rep.swapped_sign_identity_holds, k % 2 == 1);
        }
        assert!(decompose(&t).iter().all(|d| d.omega == OmegaTag::AssumedZero));
    }

    /// A table whose rational parts scale by p along the chain from n = 1,
    /// built so that p α_{pm} + α_m = c_m for m = 1, p.
    #[test]
    fn synthetic_scaled_denominators() {
        let p = 3u32;
        let j = j_series(9);
        let c = |n: i64| j.coeff(n).unwrap();
        let mut entries = vec![r(0); 10];
        entries[1] = ExactRational::new(1.into(), 2.into());
        entries[3] = (c(1) - &entries[1]) / r(3);
        entries[9] = (c(3) - &entries[3]) / r(3);
        let t = AlphaTable::ingested(SupersingularPrime::new(p).unwrap(), entries).unwrap();
        assert_eq!(t.alpha(3).unwrap().denom(), &BigInt::from(6));
        let rep = denominator_chain_check(&t, &j, 1, 2).unwrap();
        assert_eq!(rep.case, DenominatorCase::Scaled);
        assert!(rep.divisibility_holds && rep.identity_holds);
        assert!(!rep.swapped_sign_identity_holds);
        assert!(decompose(&t).iter().all(|d| d.omega == OmegaTag::Symbolic));

        let mut broken = t.entries().to_vec();
        broken[3] = ExactRational::new(1.into(), 7.into());
        let bad = AlphaTable::ingested(SupersingularPrime::new(p).unwrap(), broken).unwrap();
        let rep = denominator_chain_check(&bad, &j, 1, 1).unwrap();
        assert_eq!(rep.first_failure, Some(1));
        assert!(!rep.identity_holds);
        assert_eq!(max_chain_length(&t, 1), 2);
    }

    proptest! {
        #[test]
        fn digits_round_trip(n in 0u64..1_000_000_000, p in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13, 71])) {
            let d = digits_of(n, p);
            prop_assert_eq!(d.value(), n);
            prop_assert!(d.digits().iter().all(|&a| a < p));
            prop_assert!(d.digits().last().map_or(true, |&a| a != 0));
        }
    }
}
