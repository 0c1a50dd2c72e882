//! Elementary number theory on machine integers.

use super::polyfp::{mul_mod, pow_mod};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

/// Deterministic Miller-Rabin for all u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

/// Prime factorization as sorted (prime, exponent) pairs. `factorize(1)` is empty.
pub fn factorize(n: u64) -> Vec<(u64, u32)> {
    fn rec(n: u64, out: &mut Vec<u64>) {
        if n == 1 {
            return;
        }
        if is_prime(n) {
            out.push(n);
            return;
        }
        for p in [2u64, 3, 5, 7, 11, 13] {
            if n % p == 0 {
                out.push(p);
                rec(n / p, out);
                return;
            }
        }
        let d = pollard_rho(n);
        rec(d, out);
        rec(n / d, out);
    }
    assert!(n > 0, "factorize(0)");
    let mut ps = Vec::new();
    rec(n, &mut ps);
    ps.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in ps {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

pub fn mod_pow(b: u64, e: u64, m: u64) -> u64 {
    pow_mod(b, e, m)
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inv(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Multiplicative order of `a` modulo `m` (requires gcd(a, m) = 1).
pub fn mult_order(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 1;
    }
    debug_assert_eq!(gcd(a % m, m), 1);
    let phi = euler_phi(m);
    let mut d = phi;
    for (p, _) in factorize(phi) {
        while d % p == 0 && mod_pow(a, d / p, m) == 1 {
            d /= p;
        }
    }
    d
}

/// Split `n` as `p^l * rest` with `p` not dividing `rest`.
pub fn split_prime_power(n: u64, p: u64) -> (u32, u64) {
    let mut l = 0;
    let mut m = n;
    while m % p == 0 {
        m /= p;
        l += 1;
    }
    (l, m)
}

/// Legendre-style symbol (l/3): 1, -1 or 0.
pub fn legendre3(l: u64) -> i64 {
    match l % 3 {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_primes() {
        let ps: Vec<u64> = (0..40).filter(|&n| is_prime(n)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(3_215_031_751));
    }

    #[test]
    fn orders() {
        assert_eq!(mult_order(2, 5), 4);
        assert_eq!(mult_order(2, 7), 3);
        assert_eq!(mult_order(3, 4), 2);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(split_prime_power(12, 2), (2, 3));
    }

    proptest! {
        #[test]
        fn factorization_multiplies_back(n in 1u64..10_000_000_000u64) {
            let f = factorize(n);
            let prod: u64 = f.iter().map(|&(p, e)| p.pow(e)).product();
            prop_assert_eq!(prod, n);
            for (p, _) in f { prop_assert!(is_prime(p)); }
        }

        #[test]
        fn inverse_is_inverse(a in 1u64..1000, m in 2u64..1000) {
            match mod_inv(a, m) {
                Some(x) => prop_assert_eq!(a * x % m, 1 % m),
                None => prop_assert!(gcd(a, m) != 1),
            }
        }
    }
}
