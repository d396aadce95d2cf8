//! Small integer helpers shared by the other modules.

/// The fifteen supersingular primes, in increasing order.
pub const SUPERSINGULAR_PRIMES: [u32; 15] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 41, 47, 59, 71];

/// Primes `p` with `X_0(p)` of genus zero, i.e. `(p - 1) | 24`.
pub const GENUS_ZERO_PRIMES: [u32; 5] = [2, 3, 5, 7, 13];

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a as i64
}

/// Inverse of `a` modulo the prime `p`, for `a` not divisible by `p`.
pub fn inv_mod(a: i64, p: i64) -> i64 {
    let (mut r0, mut r1) = (a.rem_euclid(p), p);
    let (mut s0, mut s1) = (1i64, 0i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1, "{a} is not invertible mod {p}");
    s0.rem_euclid(p)
}

/// Sum of the `k`-th powers of the divisors of `n`.
pub fn divisor_power_sum(n: u64, k: u32) -> u128 {
    let mut total = 0u128;
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            total += (d as u128).pow(k);
            let e = n / d;
            if e != d {
                total += (e as u128).pow(k);
            }
        }
        d += 1;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        let small: Vec<u64> = (0..40).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert!(SUPERSINGULAR_PRIMES.iter().all(|&p| is_prime(p as u64)));
    }

    #[test]
    fn genus_zero_primes_divide_24() {
        for p in GENUS_ZERO_PRIMES {
            assert_eq!(24 % (p - 1), 0);
        }
    }

    #[test]
    fn inverses() {
        for a in 1..11 {
            assert_eq!(a * inv_mod(a, 11) % 11, 1);
        }
        assert_eq!(inv_mod(-3, 7), 2);
    }

    #[test]
    fn sigma() {
        assert_eq!(divisor_power_sum(1, 3), 1);
        assert_eq!(divisor_power_sum(6, 3), 1 + 8 + 27 + 216);
        assert_eq!(divisor_power_sum(12, 1), 28);
    }
}
