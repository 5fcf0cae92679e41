use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub fn is_prime(n: u64) -> bool {
    num_prime::nt_funcs::is_prime64(n)
}

pub fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    let m = m as u128;
    let mut r: u128 = 1 % m;
    let mut b = b as u128 % m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r as u64
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: i64, m: u64) -> Option<u64> {
    let m = m as i128;
    let (mut r0, mut r1) = (m, (a as i128).rem_euclid(m));
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    (r0 == 1).then(|| s0.rem_euclid(m) as u64)
}

/// Binomial coefficient C(n, k) mod a prime p by Lucas' theorem.
pub fn binom_mod_p(mut n: u64, mut k: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    while k > 0 {
        let (ni, ki) = (n % p, k % p);
        if ki > ni {
            return 0;
        }
        acc = acc * small_binom_mod(ni, ki, p) % p;
        n /= p;
        k /= p;
    }
    acc
}

fn small_binom_mod(n: u64, k: u64, p: u64) -> u64 {
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..k {
        num = num * ((n - i) % p) % p;
        den = den * ((i + 1) % p) % p;
    }
    num * pow_mod(den, p - 2, p) % p
}

pub fn binom(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// Kronecker symbol (a | n) for n > 0.
pub fn kronecker(a: i64, n: u64) -> i32 {
    if n == 0 {
        return if a.abs() == 1 { 1 } else { 0 };
    }
    let mut n = n;
    let mut a = a as i128;
    let mut res = 1i32;
    while n.is_multiple_of(2) {
        n /= 2;
        match a.rem_euclid(8) {
            0 | 2 | 4 | 6 => return 0,
            3 | 5 => res = -res,
            _ => {}
        }
    }
    let mut n = n as i128;
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                res = -res;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            res = -res;
        }
        a %= n;
    }
    if n == 1 {
        res
    } else {
        0
    }
}

pub fn is_squarefree(n: u64) -> bool {
    if n == 0 {
        return false;
    }
    num_prime::nt_funcs::factorize64(n).values().all(|&e| e == 1)
}

/// Prime factors of |n| (n ≠ 0), ascending.
pub fn prime_factors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    if n.is_zero() || n.is_one() {
        return Vec::new();
    }
    let u = n.to_biguint().expect("nonnegative");
    num_prime::nt_funcs::factorize(u)
        .into_keys()
        .map(BigInt::from)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lucas_matches_direct() {
        for n in 0..40u64 {
            for k in 0..=n {
                let direct = binom(n, k) % BigInt::from(5);
                assert_eq!(BigInt::from(binom_mod_p(n, k, 5)), direct);
            }
        }
    }

    #[test]
    fn kronecker_small() {
        assert_eq!(kronecker(-11, 3), 1);
        assert_eq!(kronecker(-7, 5), -1);
        assert_eq!(kronecker(-3, 3), 0);
        assert_eq!(kronecker(-7, 2), 1);
        assert_eq!(kronecker(-3, 2), -1);
        assert_eq!(kronecker(-4, 2), 0);
    }

    #[test]
    fn inverse() {
        assert_eq!(inv_mod(2, 27), Some(14));
        assert_eq!(inv_mod(3, 27), None);
        assert_eq!(inv_mod(-1, 7), Some(6));
    }
}
