//! Small integer helpers shared across the crate.

/// Greatest common divisor.
pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `base^exp` with overflow panic; exponents here are tiny.
pub fn pow_u64(base: u64, exp: u32) -> u64 {
    base.checked_pow(exp)
        .expect("integer overflow in pow_u64; inputs exceed supported scale")
}

/// Euler phi of `l^e` for prime `l`: `l^{e-1}(l-1)`, with `phi(l^0) = 1`.
pub fn phi_lpow(l: u64, e: u32) -> u64 {
    if e == 0 {
        1
    } else {
        pow_u64(l, e - 1) * (l - 1)
    }
}

/// Trial-division primality; plenty for the word-sized moduli used here.
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

/// Writes `n = l^k` and returns `k`, or `None` if `n` is not an `l`-power.
pub fn lpow_exponent(l: u64, mut n: u64) -> Option<u32> {
    if n == 0 {
        return None;
    }
    let mut k = 0;
    while n > 1 {
        if n % l != 0 {
            return None;
        }
        n /= l;
        k += 1;
    }
    Some(k)
}

/// `a^e mod m`.
pub fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * a % m;
        }
        a = a * a % m;
        e >>= 1;
    }
    acc
}

/// Multiplicative inverse mod a prime `p`.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Multiplicative order of `a` modulo `m` (requires `gcd(a, m) = 1`).
pub fn order_mod(a: u64, m: u64) -> u64 {
    assert_eq!(gcd(a % m, m), 1, "order_mod requires a unit");
    let mut x = a % m;
    let mut k = 1;
    while x != 1 % m {
        x = x * a % m;
        k += 1;
    }
    k
}

/// Units of `Z/l^e` in increasing order; `[1]`... for `e = 0` the group is
/// trivial and we return `[0]`, the unique residue mod 1.
pub fn units_mod_lpow(l: u64, e: u32) -> Vec<u64> {
    if e == 0 {
        return vec![0];
    }
    let m = pow_u64(l, e);
    (1..m).filter(|k| k % l != 0).collect()
}

/// Smallest generator of the cyclic group `(Z/l^e)^*` for an odd prime `l`.
pub fn primitive_root_mod_lpow(l: u64, e: u32) -> u64 {
    assert!(e >= 1);
    let m = pow_u64(l, e);
    let target = phi_lpow(l, e);
    units_mod_lpow(l, e)
        .into_iter()
        .find(|&g| order_mod(g, m) == target)
        .expect("(Z/l^e)^* is cyclic for odd l")
}
