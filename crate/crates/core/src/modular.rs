//! Small modular-arithmetic helpers. Inputs are reduced into `[0, m)` before
//! any multiplication so products stay well inside `u128`.

/// `value mod modulus` in `[0, modulus)`.
pub fn reduce(value: i128, modulus: u64) -> u64 {
    // 128-bit division is a libcall; most values fit in 64 bits.
    match (i64::try_from(value), i64::try_from(modulus)) {
        (Ok(v), Ok(m)) => v.rem_euclid(m) as u64,
        _ => value.rem_euclid(i128::from(modulus)) as u64,
    }
}

/// `(a * b) mod modulus` for already-reduced operands.
pub fn mul_mod(a: u64, b: u64, modulus: u64) -> u64 {
    match a.checked_mul(b) {
        Some(ab) => ab % modulus,
        None => ((u128::from(a) * u128::from(b)) % u128::from(modulus)) as u64,
    }
}

/// Extended Euclid: returns `(g, x, y)` with `a*x + b*y = g = gcd(a, b)`.
pub fn extended_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    (old_r, old_s, old_t)
}

/// Inverse of `a` modulo `modulus`, if `gcd(a, modulus) = 1`.
pub fn inverse_mod(a: u64, modulus: u64) -> Option<u64> {
    let (g, x, _) = extended_gcd(i128::from(a), i128::from(modulus));
    (g == 1).then(|| reduce(x, modulus))
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}
