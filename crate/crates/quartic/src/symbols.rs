//! Quadratic and quartic residue symbols.
//!
//! The quartic (biquadratic) Jacobi symbol `(alpha / beta)_4` takes values in
//! `{1, i, -1, -i}`, encoded here as [`I4`] (the exponent of `i`).  It is
//! defined for `beta` of odd norm, is multiplicative in both arguments, and
//! depends only on the ideal generated by `beta`.
//!
//! Two independent implementations are provided:
//!
//! * [`quartic_jacobi`] -- a fast Euclidean algorithm using only division
//!   with remainder, extraction of `i` and `1+i` factors with their
//!   supplementary laws, and the general quartic reciprocity sign.
//! * [`quartic_char_oracle`] / [`quartic_jacobi_oracle`] -- the definition:
//!   `alpha^((N(pi)-1)/4) mod pi` for prime `pi`, extended by factorization.
//!   Slow but independent, used to cross-check the fast path.

use std::fmt;

use thiserror::Error;

use crate::gaussian::{factor, normalize_odd, GaussError, GaussInt, OddGauss, COORD_LIMIT};
use crate::modular::{gcd, inv_mod, is_prime, ModError};

/// Norm bound for oracle factorizations; keeps the trial division cheap.
pub const ORACLE_NORM_BOUND: i128 = 100_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SymbolError {
    /// The symbol is undefined because numerator and denominator share a
    /// prime factor.
    #[error("symbol undefined: {alpha} and {beta} share a factor")]
    NonCoprime { alpha: GaussInt, beta: GaussInt },
    /// The quadratic Jacobi symbol needs an odd denominator.
    #[error("Jacobi symbol denominator {0} must be odd and nonzero")]
    EvenModulus(i64),
    /// The oracle character needs a Gaussian prime of odd norm.
    #[error("{0} is not a Gaussian prime of odd norm")]
    NotPrime(GaussInt),
    /// `i4_log` needs a base whose square is `-1 mod q`.
    #[error("{base} is not a fourth root of unity generator mod {q}")]
    BadUnitBase { base: i64, q: i64 },
    /// `i4_log` was given a value outside `{1, base, -1, -base}` mod q.
    #[error("{value} is not a power of {base} mod {q}")]
    NotUnitPower { value: i64, base: i64, q: i64 },
    /// The rational symbol preconditions `(den, q) = (num^2+den^2, q) = 1`
    /// failed, or `q` was even / too small.
    #[error("rational symbol undefined for ({num} + {den} i / {q})")]
    BadRational { num: i64, den: i64, q: i64 },
    #[error(transparent)]
    Gauss(#[from] GaussError),
    #[error(transparent)]
    Mod(#[from] ModError),
}

/// A fourth root of unity `i^k`, `k` in `0..4`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct I4(u8);

impl I4 {
    pub const ONE: I4 = I4(0);
    pub const I: I4 = I4(1);
    pub const MINUS_ONE: I4 = I4(2);
    pub const MINUS_I: I4 = I4(3);

    /// `i^k` with any integer exponent.
    pub fn new(k: i64) -> I4 {
        I4(k.rem_euclid(4) as u8)
    }

    /// The exponent `k` in `0..4`.
    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn inv(self) -> I4 {
        I4((4 - self.0) % 4)
    }

    pub fn pow(self, e: u32) -> I4 {
        I4(((self.0 as u32 * (e % 4)) % 4) as u8)
    }

    /// The value as a Gaussian integer.
    pub fn to_gauss(self) -> GaussInt {
        GaussInt::ONE.mul_unit(self.0)
    }

    /// True when the value is real (`1` or `-1`), i.e. a quadratic sign.
    pub fn is_real(self) -> bool {
        self.0 % 2 == 0
    }

    /// For real values, the sign `+1` / `-1`.
    pub fn as_sign(self) -> Option<i64> {
        match self.0 {
            0 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }
}

impl std::ops::Mul for I4 {
    type Output = I4;
    fn mul(self, rhs: I4) -> I4 {
        I4((self.0 + rhs.0) % 4)
    }
}

impl fmt::Display for I4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "i^{}", self.0)
    }
}

/// Quadratic Jacobi symbol `(a / m)` for odd `m` (the sign of `m` is
/// ignored).  Returns `0` when `gcd(a, m) > 1`.
pub fn jacobi2(a: i64, m: i64) -> Result<i64, SymbolError> {
    let mut m = m.checked_abs().ok_or(SymbolError::EvenModulus(m))?;
    if m == 0 || m % 2 == 0 {
        return Err(SymbolError::EvenModulus(m));
    }
    let mut a = a.rem_euclid(m);
    let mut t = 1i64;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if m % 8 == 3 || m % 8 == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut m);
        if a % 4 == 3 && m % 4 == 3 {
            t = -t;
        }
        a %= m;
    }
    if m == 1 {
        Ok(t)
    } else {
        Ok(0)
    }
}

/// Supplement `(i / a+bi)_4 = i^((a^2+b^2-1)/4)` for odd-normalized `a+bi`.
fn supp_i(den: GaussInt) -> I4 {
    let e = (den.norm() - 1) / 4;
    I4(e.rem_euclid(4) as u8)
}

/// Supplement for `(1+i / a+bi)_4` with `a` odd, `b` even:
///
/// ```text
/// i^((s(a-b) - 1)/4)        if 4 | b
/// i^((s(b-a) - 1)/4 - 1)    if 2 || b      where s = (-1)^((a-1)/2)
/// ```
fn supp_one_plus_i(den: GaussInt) -> I4 {
    let a = den.re() as i128;
    let b = den.im() as i128;
    let s: i128 = if ((a - 1) / 2).rem_euclid(2) == 0 { 1 } else { -1 };
    let e = if b.rem_euclid(4) == 0 {
        (s * (a - b) - 1) / 4
    } else {
        (s * (b - a) - 1) / 4 - 1
    };
    I4(e.rem_euclid(4) as u8)
}

/// The general quartic reciprocity sign for swapping odd-normalized
/// `a+bi` (numerator) and `c+di` (denominator):
///
/// ```text
/// (a+bi / c+di) = (-1)^((b/2)(c-1)/2 + (d/2)(a+b-1)/2) * (c+di / a+bi)
/// ```
fn recip_sign(num: GaussInt, den: GaussInt) -> I4 {
    let a = num.re() as i128;
    let b = num.im() as i128;
    let c = den.re() as i128;
    let d = den.im() as i128;
    let e = (b / 2) * ((c - 1) / 2) + (d / 2) * ((a + b - 1) / 2);
    if e.rem_euclid(2) == 0 {
        I4::ONE
    } else {
        I4::MINUS_ONE
    }
}

/// Quartic Jacobi symbol `(alpha / beta)_4` by Euclidean reduction.
///
/// Each round reduces `alpha mod beta`, strips the remainder into
/// `(1+i)^t * i^(4-u) * w` with `w` odd-normalized, folds in the two
/// supplementary laws evaluated at `beta`, applies the reciprocity sign,
/// and swaps.  The denominator norm at least halves every round, so this
/// runs in `O(log N(beta))` divisions.
///
/// Errors with [`SymbolError::NonCoprime`] when the arguments share a
/// factor (the symbol is undefined there).
pub fn quartic_jacobi(alpha: GaussInt, beta: OddGauss) -> Result<I4, SymbolError> {
    let mut num = alpha;
    let mut den = beta.value();
    let mut acc = I4::ONE;
    while den.norm() > 1 {
        let (_, r) = num.div_rem(den);
        if r.is_zero() {
            return Err(SymbolError::NonCoprime { alpha, beta: beta.value() });
        }
        let (t, odd) = r.val_one_plus_i();
        let (u, w) = normalize_odd(odd).expect("odd part has odd norm");
        let w = w.value();
        // r = (1+i)^t * i^(-u) * w, so
        // (r / den) = (1+i / den)^t * (i / den)^(-u) * (w / den).
        acc = acc * supp_one_plus_i(den).pow(t);
        acc = acc * supp_i(den).pow(u32::from((4 - u) % 4));
        acc = acc * recip_sign(w, den);
        num = den;
        den = w;
    }
    Ok(acc)
}

/// The defining quartic residue character `(alpha / pi)_4` for a Gaussian
/// prime `pi` of odd norm: the unique `i^k` with
/// `alpha^((N(pi)-1)/4) = i^k (mod pi)`.
///
/// Errors when `pi` is not a Gaussian prime of odd norm (primality of the
/// norm is checked exactly) or when `pi | alpha`.
pub fn quartic_char_oracle(alpha: GaussInt, pi: GaussInt) -> Result<I4, SymbolError> {
    let n = pi.norm();
    let valid = if n % 2 == 1 && n > 1 {
        if let Ok(small) = u64::try_from(n) {
            if is_prime(small) {
                true
            } else {
                // Inert case: norm l^2 with l = 3 (mod 4) prime and l | pi.
                let l = crate::gaussian::integer_sqrt(small.min(i64::MAX as u64) as i64);
                (l as i128) * (l as i128) == n
                    && l % 4 == 3
                    && is_prime(l as u64)
                    && pi.re() % l == 0
                    && pi.im() % l == 0
            }
        } else {
            false
        }
    } else {
        false
    };
    if !valid {
        return Err(SymbolError::NotPrime(pi));
    }

    let mut e = (n - 1) / 4;
    let mut base = alpha.div_rem(pi).1;
    let mut acc = GaussInt::ONE;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc * base).div_rem(pi).1;
        }
        base = (base * base).div_rem(pi).1;
        e >>= 1;
    }
    for k in 0..4u8 {
        if pi.divides(acc - GaussInt::ONE.mul_unit(k)) {
            return Ok(I4(k));
        }
    }
    // alpha^e = 0 mod pi means pi | alpha.
    Err(SymbolError::NonCoprime { alpha, beta: pi })
}

/// Oracle evaluation of `(alpha / beta)_4` via trial-division factorization
/// of `beta` and the defining character at each prime.  Slow (norms up to
/// [`ORACLE_NORM_BOUND`]) but entirely independent of [`quartic_jacobi`].
pub fn quartic_jacobi_oracle(alpha: GaussInt, beta: OddGauss) -> Result<I4, SymbolError> {
    let f = factor(beta.value(), ORACLE_NORM_BOUND)?;
    let mut acc = I4::ONE;
    for (pi, e) in f.primes {
        acc = acc * quartic_char_oracle(alpha, pi)?.pow(e);
    }
    Ok(acc)
}

/// Rational-denominator convenience: `(num + den*i / q)_4` for odd `q > 1`,
/// requiring `(den, q) = (num^2 + den^2, q) = 1`.
pub fn quartic_rational(num: i64, den: i64, q: i64) -> Result<I4, SymbolError> {
    if q <= 1 || q % 2 == 0 {
        return Err(SymbolError::BadRational { num, den, q });
    }
    let nsq = (num as i128 * num as i128 + den as i128 * den as i128).rem_euclid(q as i128) as i64;
    if gcd(den, q) != 1 || gcd(nsq, q) != 1 {
        return Err(SymbolError::BadRational { num, den, q });
    }
    let beta = OddGauss::new(GaussInt::new(q, 0))?;
    quartic_jacobi(GaussInt::new(num, den), beta)
}

/// `z^e` with both coordinates reduced mod `n` at every step; the result
/// has coordinates in `0..n`.
pub fn gauss_pow_mod(z: GaussInt, e: u64, n: i64) -> GaussInt {
    assert!(n >= 2 && n <= COORD_LIMIT, "modulus out of range");
    let mut base = gauss_reduce(z, n);
    let mut acc = GaussInt::ONE;
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = gauss_reduce(acc * base, n);
        }
        base = gauss_reduce(base * base, n);
        e >>= 1;
    }
    acc
}

/// Coordinate-wise reduction of `z` mod `n` into `0..n`.
pub fn gauss_reduce(z: GaussInt, n: i64) -> GaussInt {
    GaussInt::new(z.re().rem_euclid(n), z.im().rem_euclid(n))
}

/// Inverse of `z` modulo the rational integer `n`: `conj(z) * N(z)^-1`,
/// defined when `gcd(N(z), n) = 1`.
pub fn gauss_inv_mod(z: GaussInt, n: i64) -> Result<GaussInt, SymbolError> {
    let nz = (z.norm().rem_euclid(n as i128)) as i64;
    let inv = inv_mod(nz, n)?;
    let c = gauss_reduce(z.conj(), n);
    Ok(gauss_reduce(
        GaussInt::new(
            ((c.re() as i128 * inv as i128).rem_euclid(n as i128)) as i64,
            ((c.im() as i128 * inv as i128).rem_euclid(n as i128)) as i64,
        ),
        n,
    ))
}

/// Discrete log in the order-4 unit group: the `k` in `0..4` with
/// `value = base^k (mod q)`, where `base^2 = -1 (mod q)` is required.
pub fn i4_log(value: i64, base: i64, q: i64) -> Result<u8, SymbolError> {
    if q < 3 {
        return Err(SymbolError::BadUnitBase { base, q });
    }
    let b = base.rem_euclid(q);
    if (b as i128 * b as i128 + 1).rem_euclid(q as i128) != 0 {
        return Err(SymbolError::BadUnitBase { base, q });
    }
    let v = value.rem_euclid(q);
    let candidates = [1i64.rem_euclid(q), b, (q - 1) % q, (q - b) % q];
    for (k, &c) in candidates.iter().enumerate() {
        if v == c {
            return Ok(k as u8);
        }
    }
    Err(SymbolError::NotUnitPower { value, base, q })
}
