//! Integer factorization: trial division with a Pollard rho fallback.
//!
//! Only gcds of coordinate tuples are ever factored, so inputs are usually
//! small; correctness of the callers does not depend on the method used.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

const TRIAL_LIMIT: u64 = 1 << 20;

/// Prime factorization of `n > 0`, sorted by prime.
pub(crate) fn factorize(n: &BigUint) -> Vec<(BigUint, u64)> {
    let mut out = Vec::new();
    if n.is_one() || n.is_zero() {
        return out;
    }
    let mut n = n.clone();
    let mut p = 2u64;
    while p <= TRIAL_LIMIT {
        let bp = BigUint::from(p);
        if &bp * &bp > n {
            break;
        }
        let mut e = 0u64;
        loop {
            let (q, r) = n.div_rem(&bp);
            if !r.is_zero() {
                break;
            }
            n = q;
            e += 1;
        }
        if e > 0 {
            out.push((bp, e));
        }
        if n.is_one() {
            return out;
        }
        p = if p == 2 { 3 } else { p + 2 };
    }
    if !n.is_one() {
        let mut rest = Vec::new();
        split(&n, &mut rest);
        rest.sort();
        let mut it = rest.into_iter();
        if let Some(mut cur) = it.next() {
            let mut e = 1u64;
            for f in it {
                if f == cur {
                    e += 1;
                } else {
                    out.push((cur, e));
                    cur = f;
                    e = 1;
                }
            }
            out.push((cur, e));
        }
        out.sort();
    }
    out
}

fn split(n: &BigUint, out: &mut Vec<BigUint>) {
    if n.is_one() {
        return;
    }
    if is_probable_prime(n) {
        out.push(n.clone());
        return;
    }
    let d = pollard_rho(n);
    split(&d, out);
    split(&(n / &d), out);
}

fn is_probable_prime(n: &BigUint) -> bool {
    if n < &BigUint::from(2u32) {
        return false;
    }
    for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let bp = BigUint::from(p);
        if n == &bp {
            return true;
        }
        if (n % &bp).is_zero() {
            return false;
        }
    }
    // Miller-Rabin; the base set is deterministic below 3.3e24
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: &BigUint) -> BigUint {
    if n.is_even() {
        return BigUint::from(2u32);
    }
    let mut c = 1u64;
    loop {
        let bc = BigUint::from(c);
        let mut x = BigUint::from(2u64 + c);
        let mut y = x.clone();
        let mut d = BigUint::one();
        while d.is_one() {
            x = (&x * &x + &bc) % n;
            y = (&y * &y + &bc) % n;
            y = (&y * &y + &bc) % n;
            let diff = if x > y { &x - &y } else { &y - &x };
            if diff.is_zero() {
                break;
            }
            d = diff.gcd(n);
        }
        if !d.is_one() && &d != n {
            return d;
        }
        c += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn fac(n: u128) -> Vec<(u128, u64)> {
        factorize(&BigUint::from(n))
            .into_iter()
            .map(|(p, e)| (p.to_u128().unwrap(), e))
            .collect()
    }

    #[test]
    fn small_values() {
        assert_eq!(fac(1), vec![]);
        assert_eq!(fac(240), vec![(2, 4), (3, 1), (5, 1)]);
        assert_eq!(fac(46_656), vec![(2, 6), (3, 6)]);
        assert_eq!(fac(119_880), vec![(2, 3), (3, 4), (5, 1), (37, 1)]);
    }

    #[test]
    fn large_prime_cofactor() {
        // product of two primes above the trial division limit
        let p = 1_000_003u128;
        let q = 1_000_033u128;
        assert_eq!(fac(p * q), vec![(p, 1), (q, 1)]);
        assert_eq!(fac(p * p), vec![(p, 2)]);
    }
}
