//! Rational modular arithmetic: powers, inverses, primality, and Lucas
//! sequences by fast doubling.
//!
//! Lucas sequences here follow the convention
//! `U_0 = 0, U_1 = 1, U_{n+1} = b*U_n - c*U_{n-1}` (same recurrence for `V`
//! with `V_0 = 2, V_1 = b`), so the discriminant is `b^2 - 4c`.  With
//! `c = -1` and `b` odd this gives discriminant `b^2 + 4`, the shape the
//! verification checks care about.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModError {
    #[error("{a} is not invertible modulo {n}")]
    NonInvertible { a: i64, n: i64 },
    #[error("modulus {0} must be positive")]
    BadModulus(i64),
    #[error("modulus {0} must be an odd prime")]
    NotOddPrime(i64),
    #[error("doubling identity needs p > 3 prime with p not dividing b*c*(b^2-4c); got b={b} c={c} p={p}")]
    DegenerateLucas { b: i64, c: i64, p: i64 },
}

/// `a^e mod n` for `n >= 1`, result in `0..n`.  Exact for any `i64` base.
pub fn pow_mod(a: i64, e: u64, n: i64) -> i64 {
    assert!(n >= 1, "pow_mod modulus must be positive");
    if n == 1 {
        return 0;
    }
    let mut base = a.rem_euclid(n);
    let mut acc = 1i64;
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, n);
        }
        base = mul_mod(base, base, n);
        e >>= 1;
    }
    acc
}

/// `a * b mod n` without overflow (all inputs already reduced or small).
pub fn mul_mod(a: i64, b: i64, n: i64) -> i64 {
    ((a as i128 * b as i128).rem_euclid(n as i128)) as i64
}

/// Modular inverse via the extended Euclidean algorithm; errors when
/// `gcd(a, n) != 1`.
pub fn inv_mod(a: i64, n: i64) -> Result<i64, ModError> {
    if n < 1 {
        return Err(ModError::BadModulus(n));
    }
    let a0 = a.rem_euclid(n);
    let (mut r0, mut r1) = (n, a0);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return Err(ModError::NonInvertible { a, n });
    }
    Ok(t0.rem_euclid(n))
}

/// Euclidean gcd of absolute values; `gcd(0, 0) = 0`.
pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut x, mut y) = (a.abs(), b.abs());
    while y != 0 {
        (x, y) = (y, x % y);
    }
    x
}

/// 2-adic valuation of a nonzero integer.
pub fn val2(n: i64) -> u32 {
    assert!(n != 0, "2-adic valuation of zero is undefined");
    n.trailing_zeros()
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pow_mod_u64(a: u64, e: u64, n: u64) -> u64 {
    let mut base = a % n;
    let mut acc = 1u64;
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * base as u128) % n as u128) as u64;
        }
        base = ((base as u128 * base as u128) % n as u128) as u64;
        e >>= 1;
    }
    acc
}

/// Lucas pair `(U_n, V_n) mod p` for the recurrence with parameters `(b, c)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LucasPair {
    pub u: i64,
    pub v: i64,
    pub n: u64,
    pub p: i64,
}

/// Computes `(U_n(b, c), V_n(b, c)) mod p` by binary fast doubling:
///
/// ```text
/// U_2k = U_k * V_k            V_2k = V_k^2 - 2 c^k
/// U_{k+1} = (b U_k + V_k)/2   V_{k+1} = ((b^2 - 4c) U_k + b V_k)/2
/// ```
///
/// The halving steps use the inverse of 2 mod `p`, so `p` must be an odd
/// prime.  Runs in `O(log n)` multiplications.
pub fn lucas_uv_mod(b: i64, c: i64, n: u64, p: i64) -> Result<LucasPair, ModError> {
    if p < 3 || !is_prime(p as u64) {
        return Err(ModError::NotOddPrime(p));
    }
    let inv2 = (p + 1) / 2;
    let bb = b.rem_euclid(p);
    let cc = c.rem_euclid(p);
    let disc = (mul_mod(bb, bb, p) - 4 * cc).rem_euclid(p);

    // Invariants: (u, v) = (U_k, V_k) and q = c^k for the prefix k of n.
    let mut u = 0i64;
    let mut v = 2i64;
    let mut q = 1i64;
    for bit_pos in (0..64).rev() {
        if n >> bit_pos == 0 {
            continue;
        }
        // Double: k -> 2k.
        let u2 = mul_mod(u, v, p);
        let v2 = (mul_mod(v, v, p) - 2 * q).rem_euclid(p);
        u = u2;
        v = v2;
        q = mul_mod(q, q, p);
        if (n >> bit_pos) & 1 == 1 {
            // Advance: 2k -> 2k + 1.
            let u1 = mul_mod((mul_mod(bb, u, p) + v).rem_euclid(p), inv2, p);
            let v1 = mul_mod(
                (mul_mod(disc, u, p) + mul_mod(bb, v, p)).rem_euclid(p),
                inv2,
                p,
            );
            u = u1;
            v = v1;
            q = mul_mod(q, cc, p);
        }
    }
    Ok(LucasPair { u, v, n, p })
}

/// `((b + root) / 2)^e mod p` -- the power of the fundamental-unit analogue
/// attached to a square root `root` of the discriminant mod `p`.
pub fn unit_power(b: i64, root: i64, e: u64, p: i64) -> i64 {
    let inv2 = (p + 1) / 2;
    let base = mul_mod((b + root).rem_euclid(p), inv2, p);
    pow_mod(base, e, p)
}

/// Checks the doubling identity `p | U_n  <=>  V_2n = 2 c^n (mod p)` by
/// evaluating both sides independently; returns whether they agree.
///
/// The equivalence only holds for non-degenerate parameters: it needs
/// `p > 3` prime with `p` dividing none of `b`, `c`, `b^2 - 4c` (when `p`
/// divides the discriminant, `V_n^2 = 4c^n (mod p)` identically and the
/// right side is vacuously true).  Degenerate inputs are rejected.
pub fn check_doubling_identity(b: i64, c: i64, n: u64, p: i64) -> Result<bool, ModError> {
    if p <= 3 {
        return Err(ModError::NotOddPrime(p));
    }
    let disc = b as i128 * b as i128 - 4 * c as i128;
    let degenerate = b.rem_euclid(p) == 0
        || c.rem_euclid(p) == 0
        || disc.rem_euclid(p as i128) == 0;
    if degenerate {
        return Err(ModError::DegenerateLucas { b, c, p });
    }
    let un = lucas_uv_mod(b, c, n, p)?;
    let v2n = lucas_uv_mod(b, c, 2 * n, p)?;
    let lhs = un.u == 0;
    let rhs = v2n.v == mul_mod(2, pow_mod(c, n, p), p);
    Ok(lhs == rhs)
}
