//! Small-integer number theory used throughout: factorization, modular
//! inverses and square roots, Hensel lifting.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Trial-division factorization of `n > 0`, primes in increasing order.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factor(n).into_iter().map(|(p, _)| p).collect()
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factor(n).len() == 1 && factor(n)[0].1 == 1
}

pub fn is_squarefree(n: u64) -> bool {
    factor(n).iter().all(|&(_, e)| e == 1)
}

/// Primes up to and including `x`.
pub fn primes_upto(x: usize) -> Vec<u64> {
    if x < 2 {
        return vec![];
    }
    let mut sieve = vec![true; x + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= x {
        if sieve[i] {
            let mut j = i * i;
            while j <= x {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    (0..=x).filter(|&i| sieve[i]).map(|i| i as u64).collect()
}

/// `ord_p(n)` for `n != 0`.
pub fn val(n: i128, p: u64) -> u32 {
    assert!(n != 0, "valuation of zero");
    let p = p as i128;
    let mut n = n;
    let mut e = 0;
    while n % p == 0 {
        n /= p;
        e += 1;
    }
    e
}

pub fn val_big(n: &BigInt, p: u64) -> u32 {
    assert!(!n.is_zero(), "valuation of zero");
    let pb = BigInt::from(p);
    let mut n = n.clone();
    let mut e = 0;
    loop {
        let (q, r) = n.div_rem(&pb);
        if !r.is_zero() {
            return e;
        }
        n = q;
        e += 1;
    }
}

pub fn pow_u(p: u64, e: u32) -> i128 {
    (p as i128).pow(e)
}

/// Nonnegative residue of `a` mod `m`.
pub fn md(a: i128, m: i128) -> i128 {
    let r = a % m;
    if r < 0 {
        r + m
    } else {
        r
    }
}

/// `a*b mod m` without overflow for any `m < 2^126`.
pub fn mulmod(a: i128, b: i128, m: i128) -> i128 {
    let a = md(a, m);
    let b = md(b, m);
    match a.checked_mul(b) {
        Some(x) => x % m,
        None => {
            let r = (BigInt::from(a) * BigInt::from(b)) % BigInt::from(m);
            r.to_i128().unwrap()
        }
    }
}

pub fn powmod(a: i128, mut e: u64, m: i128) -> i128 {
    let mut base = md(a, m);
    let mut acc = 1 % m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, base, m);
        }
        base = mulmod(base, base, m);
        e >>= 1;
    }
    acc
}

/// Extended gcd: returns (g, x, y) with ax + by = g >= 0.
pub fn egcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

pub fn gcd(a: i128, b: i128) -> i128 {
    egcd(a, b).0
}

pub fn invmod(a: i128, m: i128) -> Option<i128> {
    let (g, x, _) = egcd(md(a, m), m);
    if g == 1 {
        Some(md(x, m))
    } else {
        None
    }
}

/// Legendre symbol for an odd prime `p`.
pub fn legendre(a: i128, p: u64) -> i32 {
    let a = md(a, p as i128);
    if a == 0 {
        return 0;
    }
    if powmod(a, (p - 1) / 2, p as i128) == 1 {
        1
    } else {
        -1
    }
}

/// Kronecker symbol `(d / q)` for a discriminant `d` and prime `q`.
pub fn kronecker_disc(d: i64, q: u64) -> i32 {
    if q == 2 {
        if d % 2 == 0 {
            0
        } else if md(d as i128, 8) == 1 || md(d as i128, 8) == 7 {
            1
        } else {
            -1
        }
    } else {
        legendre(d as i128, q)
    }
}

/// Least nonnegative square root of `a` modulo an odd prime `p`.
pub fn sqrt_mod_prime(a: i128, p: u64) -> Option<i128> {
    let pi = p as i128;
    let a = md(a, pi);
    if a == 0 {
        return Some(0);
    }
    if legendre(a, p) != 1 {
        return None;
    }
    // Tonelli-Shanks, then pick the smaller of the two roots.
    let mut q = p - 1;
    let mut s = 0;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2i128;
    while legendre(z, p) != -1 {
        z += 1;
    }
    let mut m = s;
    let mut c = powmod(z, q, pi);
    let mut t = powmod(a, q, pi);
    let mut r = powmod(a, (q + 1) / 2, pi);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mulmod(tt, tt, pi);
            i += 1;
        }
        let b = powmod(c, 1u64 << (m - i - 1), pi);
        m = i;
        c = mulmod(b, b, pi);
        t = mulmod(t, c, pi);
        r = mulmod(r, b, pi);
    }
    Some(r.min(pi - r))
}

/// Hensel lift of a simple root `r0` of the integer polynomial `f`
/// (coefficients low to high) from mod `p` to mod `p^k`.
pub fn hensel_lift(f: &[i128], r0: i128, p: u64, k: u32) -> Option<i128> {
    let modulus = pow_u(p, k);
    let eval = |x: i128, m: i128| -> i128 {
        let mut acc = 0i128;
        for c in f.iter().rev() {
            acc = md(mulmod(acc, x, m) + md(*c, m), m);
        }
        acc
    };
    let deriv: Vec<i128> = f.iter().enumerate().skip(1).map(|(i, c)| c * i as i128).collect();
    let d0 = {
        let mut acc = 0i128;
        for c in deriv.iter().rev() {
            acc = md(mulmod(acc, r0, p as i128) + md(*c, p as i128), p as i128);
        }
        acc
    };
    if d0 == 0 || eval(r0, p as i128) != 0 {
        return None;
    }
    let mut r = md(r0, p as i128);
    let mut cur = p as i128;
    while cur < modulus {
        let next = (cur.checked_mul(cur).unwrap_or(modulus)).min(modulus);
        let fv = eval(r, next);
        let mut dv = 0i128;
        for c in deriv.iter().rev() {
            dv = md(mulmod(dv, r, next) + md(*c, next), next);
        }
        let inv = invmod(dv, next)?;
        r = md(r - mulmod(fv, inv, next), next);
        cur = next;
    }
    Some(md(r, modulus))
}

/// Square root of a `p`-adic unit `a` modulo `p^k`. For odd `p` this is the
/// Hensel lift of the least nonnegative root mod `p`; for `p = 2` the root
/// congruent to 1 mod 4 (requires `a ≡ 1 mod 8`).
pub fn sqrt_mod_prime_power(a: i128, p: u64, k: u32) -> Option<i128> {
    if p == 2 {
        let m = pow_u(2, k + 1);
        let a = md(a, m);
        if md(a, 8) != 1 {
            return None;
        }
        // x_{j+1} = x_j + (a - x_j^2)/2 lifts a root mod 2^j to 2^{j+1}-ish.
        let mut x: i128 = 1;
        for _ in 0..(2 * k + 4) {
            let err = md(a - mulmod(x, x, m), m);
            if err == 0 {
                break;
            }
            x = md(x + err / 2, m);
        }
        let m2 = pow_u(2, k);
        let mut x = md(x, m2);
        if md(x, 4) != 1 {
            x = md(-x, m2);
        }
        if md(mulmod(x, x, m2) - a, m2) != 0 {
            return None;
        }
        return Some(x);
    }
    let r0 = sqrt_mod_prime(a, p)?;
    if r0 == 0 {
        return None;
    }
    hensel_lift(&[-a, 0, 1], r0, p, k)
}

/// `num / den` reduced modulo `m`, requiring `gcd(den, m) = 1`.
pub fn ratmod(num: &BigInt, den: &BigInt, m: i128) -> Option<i128> {
    let mb = BigInt::from(m);
    let n = num.mod_floor(&mb).to_i128().unwrap();
    let d = den.mod_floor(&mb).to_i128().unwrap();
    Some(mulmod(n, invmod(d, m)?, m))
}

pub fn big_gcd(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}

pub fn big_abs_i128(a: &BigInt) -> Option<i128> {
    a.abs().to_i128()
}

pub fn is_one(a: &BigInt) -> bool {
    a.is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_basics() {
        assert_eq!(factor(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert!(is_prime(97) && !is_prime(91));
        assert_eq!(primes_upto(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
    }

    #[test]
    fn square_roots() {
        assert_eq!(sqrt_mod_prime(2, 7), Some(3));
        let r = sqrt_mod_prime_power(-11, 3, 10).unwrap();
        assert_eq!(md(r * r + 11, pow_u(3, 10)), 0);
        assert_eq!(md(r, 3), 1);
        let r2 = sqrt_mod_prime_power(17, 2, 12).unwrap();
        assert_eq!(md(r2 * r2 - 17, pow_u(2, 12)), 0);
        assert_eq!(sqrt_mod_prime(-1, 3), None);
    }

    #[test]
    fn hensel_unit_root() {
        // X^2 + X + 3 has the unit root ≡ 2 mod 3.
        let r = hensel_lift(&[3, 1, 1], 2, 3, 8).unwrap();
        let m = pow_u(3, 8);
        assert_eq!(md(r * r + r + 3, m), 0);
        assert_eq!(md(r, 3), 2);
    }
}
