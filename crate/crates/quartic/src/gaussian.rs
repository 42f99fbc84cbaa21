//! Exact arithmetic in the ring of Gaussian integers Z[i].
//!
//! Everything here is deterministic integer arithmetic: coordinates are
//! `i64` (bounded so that norms and cross products fit in `i128`), division
//! is Euclidean with a fixed rounding rule, and gcds / factorizations pick a
//! canonical associate so results are reproducible.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

/// Largest allowed absolute value of a coordinate.  With |re|, |im| <= 2^62
/// every norm is < 2^125 and every cross product used by [`GaussInt::div_rem`]
/// fits comfortably in `i128`.
pub const COORD_LIMIT: i64 = 1 << 62;

/// Errors produced by fallible Gaussian-integer operations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum GaussError {
    /// A value that must have odd norm (a valid quartic-symbol denominator,
    /// for instance) had even norm.
    #[error("Gaussian integer {0} has even norm where odd norm is required")]
    EvenNorm(GaussInt),
    /// Factorization was asked for a value whose norm exceeds the trial
    /// division bound.
    #[error("norm {norm} exceeds the factorization bound {bound}")]
    NormTooLarge { norm: i128, bound: i128 },
    /// Factorization of zero is undefined.
    #[error("cannot factor zero")]
    FactorZero,
}

/// A Gaussian integer `re + im*i` with `|re|, |im| <= 2^62`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct GaussInt {
    re: i64,
    im: i64,
}

impl fmt::Debug for GaussInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}{:+}i)", self.re, self.im)
    }
}

impl fmt::Display for GaussInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}i", self.re, self.im)
    }
}

impl GaussInt {
    pub const ZERO: GaussInt = GaussInt { re: 0, im: 0 };
    pub const ONE: GaussInt = GaussInt { re: 1, im: 0 };
    pub const I: GaussInt = GaussInt { re: 0, im: 1 };

    /// Construct `re + im*i`.
    ///
    /// Panics if a coordinate exceeds [`COORD_LIMIT`] in absolute value; the
    /// bound guarantees all downstream `i128` intermediates are exact.
    pub fn new(re: i64, im: i64) -> GaussInt {
        assert!(
            re.unsigned_abs() <= COORD_LIMIT as u64 && im.unsigned_abs() <= COORD_LIMIT as u64,
            "Gaussian coordinate out of supported range: ({re}, {im})"
        );
        GaussInt { re, im }
    }

    pub fn re(self) -> i64 {
        self.re
    }

    pub fn im(self) -> i64 {
        self.im
    }

    pub fn is_zero(self) -> bool {
        self.re == 0 && self.im == 0
    }

    /// `N(z) = re^2 + im^2 >= 0`, computed exactly in `i128`.
    pub fn norm(self) -> i128 {
        let re = self.re as i128;
        let im = self.im as i128;
        re * re + im * im
    }

    /// Complex conjugate `re - im*i`.
    pub fn conj(self) -> GaussInt {
        GaussInt::new(self.re, -self.im)
    }

    /// Multiplication by the unit `i`.
    pub fn mul_i(self) -> GaussInt {
        GaussInt::new(-self.im, self.re)
    }

    /// `i^k * self` for any exponent class `k mod 4`.
    pub fn mul_unit(self, k: u8) -> GaussInt {
        match k % 4 {
            0 => self,
            1 => self.mul_i(),
            2 => -self,
            _ => -self.mul_i(),
        }
    }

    /// True iff `self` divides `other` exactly.
    pub fn divides(self, other: GaussInt) -> bool {
        assert!(!self.is_zero(), "division by zero Gaussian integer");
        other.div_rem(self).1.is_zero()
    }

    /// Euclidean division: returns `(quot, rem)` with
    /// `self = quot * b + rem` and `N(rem) <= N(b) / 2`.
    ///
    /// Each coordinate of the exact quotient `self/b` is rounded to the
    /// nearest integer, half-way cases toward zero, which is what makes the
    /// result (and everything built on it) deterministic.
    ///
    /// Panics if `b` is zero.
    pub fn div_rem(self, b: GaussInt) -> (GaussInt, GaussInt) {
        assert!(!b.is_zero(), "division by zero Gaussian integer");
        let n = b.norm();
        // self / b = self * conj(b) / N(b); both cross products are exact.
        let num_re = self.re as i128 * b.re as i128 + self.im as i128 * b.im as i128;
        let num_im = self.im as i128 * b.re as i128 - self.re as i128 * b.im as i128;
        let q_re = round_half_toward_zero(num_re, n);
        let q_im = round_half_toward_zero(num_im, n);
        let quot = GaussInt::new(i64::try_from(q_re).expect("quotient re overflow"),
                                 i64::try_from(q_im).expect("quotient im overflow"));
        let rem = self - quot * b;
        debug_assert!(rem.norm() * 2 <= n, "remainder norm bound violated");
        (quot, rem)
    }

    /// Splits off the `(1+i)`-adic part: returns `(t, w)` with
    /// `self = (1+i)^t * w` and `N(w)` odd.  Panics on zero.
    pub fn val_one_plus_i(self) -> (u32, GaussInt) {
        assert!(!self.is_zero(), "(1+i)-adic valuation of zero is undefined");
        let mut t = 0u32;
        let mut z = self;
        // z is divisible by 1+i exactly when re+im is even, and
        // z / (1+i) = (re+im)/2 + (im-re)/2 * i.
        while (z.re + z.im) % 2 == 0 {
            z = GaussInt::new((z.re + z.im) / 2, (z.im - z.re) / 2);
            t += 1;
        }
        (t, z)
    }
}

/// Rounds the exact rational `num / den` (with `den > 0`) to the nearest
/// integer, ties toward zero.
fn round_half_toward_zero(num: i128, den: i128) -> i128 {
    debug_assert!(den > 0);
    let q = num.div_euclid(den);
    let r = num.rem_euclid(den);
    match (2 * r).cmp(&den) {
        std::cmp::Ordering::Less => q,
        std::cmp::Ordering::Greater => q + 1,
        // Tie: the exact value is q + 1/2; toward zero keeps q when the
        // value is positive (q >= 0) and bumps to q + 1 when negative.
        std::cmp::Ordering::Equal => {
            if q >= 0 {
                q
            } else {
                q + 1
            }
        }
    }
}

impl Add for GaussInt {
    type Output = GaussInt;
    fn add(self, rhs: GaussInt) -> GaussInt {
        GaussInt::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for GaussInt {
    type Output = GaussInt;
    fn sub(self, rhs: GaussInt) -> GaussInt {
        GaussInt::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Neg for GaussInt {
    type Output = GaussInt;
    fn neg(self) -> GaussInt {
        GaussInt::new(-self.re, -self.im)
    }
}

impl Mul for GaussInt {
    type Output = GaussInt;
    fn mul(self, rhs: GaussInt) -> GaussInt {
        let re = self.re as i128 * rhs.re as i128 - self.im as i128 * rhs.im as i128;
        let im = self.re as i128 * rhs.im as i128 + self.im as i128 * rhs.re as i128;
        GaussInt::new(
            i64::try_from(re).expect("product re overflow"),
            i64::try_from(im).expect("product im overflow"),
        )
    }
}

/// A Gaussian integer of odd norm normalized to have odd `re` and even `im`
/// (a "primary-ish" shape: exactly one unit multiple of any odd-norm value
/// has this form up to sign of `re`; we only fix the parity pattern here).
///
/// This is the required shape for denominators of the quartic symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OddGauss(GaussInt);

impl OddGauss {
    /// Wraps `z`, requiring odd `re` and even `im` (hence odd norm).
    pub fn new(z: GaussInt) -> Result<OddGauss, GaussError> {
        if z.re().rem_euclid(2) == 1 && z.im().rem_euclid(2) == 0 {
            Ok(OddGauss(z))
        } else {
            Err(GaussError::EvenNorm(z))
        }
    }

    pub fn value(self) -> GaussInt {
        self.0
    }

    pub fn re(self) -> i64 {
        self.0.re()
    }

    pub fn im(self) -> i64 {
        self.0.im()
    }
}

impl TryFrom<GaussInt> for OddGauss {
    type Error = GaussError;
    fn try_from(z: GaussInt) -> Result<OddGauss, GaussError> {
        OddGauss::new(z)
    }
}

/// Rotates an odd-norm `z` by a power of `i`: returns the least `u` in
/// `0..=3` such that `w = i^u * z` has odd real part and even imaginary
/// part, together with `w`.
///
/// Returns an error when `N(z)` is even (no rotation can fix the parity).
pub fn normalize_odd(z: GaussInt) -> Result<(u8, OddGauss), GaussError> {
    let mut w = z;
    for u in 0..4u8 {
        if let Ok(odd) = OddGauss::new(w) {
            return Ok((u, odd));
        }
        w = w.mul_i();
    }
    Err(GaussError::EvenNorm(z))
}

/// Greatest common divisor by Euclidean descent, returned as a canonical
/// associate: for odd-norm results the associate with odd *positive* real
/// part (and even imaginary part); for even-norm results the unique
/// associate with `re > 0` and `im >= 0`.  `gauss_gcd(0, 0) = 0`.
pub fn gauss_gcd(a: GaussInt, b: GaussInt) -> GaussInt {
    let (mut x, mut y) = (a, b);
    while !y.is_zero() {
        let (_, r) = x.div_rem(y);
        x = y;
        y = r;
    }
    canonical_associate(x)
}

/// Canonical associate used by [`gauss_gcd`] and [`factor`]; see
/// [`gauss_gcd`] for the rule.  Zero maps to zero.
pub fn canonical_associate(z: GaussInt) -> GaussInt {
    if z.is_zero() {
        return z;
    }
    if z.norm() % 2 == 1 {
        let (_, odd) = normalize_odd(z).expect("odd norm");
        let w = odd.value();
        if w.re() > 0 {
            w
        } else {
            -w
        }
    } else {
        let mut w = z;
        for _ in 0..4 {
            if w.re() > 0 && w.im() >= 0 {
                return w;
            }
            w = w.mul_i();
        }
        unreachable!("some rotation of a nonzero value lands in the first quadrant")
    }
}

/// A factorization `z = unit * prod primes[k].0 ^ primes[k].1` with the
/// primes canonical (per [`canonical_associate`], except the ramified prime
/// which is kept as `1+i`) and sorted by `(norm, re, im)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussFactorization {
    /// One of `1, i, -1, -i`.
    pub unit: GaussInt,
    pub primes: Vec<(GaussInt, u32)>,
}

impl GaussFactorization {
    /// Multiplies the factorization back together (exact; for testing).
    pub fn product(&self) -> GaussInt {
        let mut acc = self.unit;
        for &(p, e) in &self.primes {
            for _ in 0..e {
                acc = acc * p;
            }
        }
        acc
    }
}

/// Factors `z` into Gaussian primes by trial division over rational primes
/// dividing `N(z)`.  Intended as a small exact oracle: refuses inputs with
/// `N(z) > norm_bound` so runtimes stay predictable.
pub fn factor(z: GaussInt, norm_bound: i128) -> Result<GaussFactorization, GaussError> {
    if z.is_zero() {
        return Err(GaussError::FactorZero);
    }
    let n = z.norm();
    if n > norm_bound {
        return Err(GaussError::NormTooLarge { norm: n, bound: norm_bound });
    }

    let mut primes: Vec<(GaussInt, u32)> = Vec::new();
    let (t, mut w) = z.val_one_plus_i();
    if t > 0 {
        primes.push((GaussInt::new(1, 1), t));
    }

    // Trial divide the odd part via the rational primes of its norm.
    let mut m = w.norm();
    let mut l: i128 = 3;
    while l * l <= m {
        if m % l != 0 {
            l += 2;
            continue;
        }
        let mut e_l = 0u32;
        while m % l == 0 {
            m /= l;
            e_l += 1;
        }
        let lp = i64::try_from(l).expect("prime fits i64");
        if l % 4 == 3 {
            // Inert prime: l itself is a Gaussian prime, N(l) = l^2.
            debug_assert!(e_l % 2 == 0, "inert prime must divide the norm evenly");
            let e = e_l / 2;
            for _ in 0..e {
                let (q, r) = w.div_rem(GaussInt::new(lp, 0));
                debug_assert!(r.is_zero());
                w = q;
            }
            primes.push((GaussInt::new(lp, 0), e));
        } else {
            // Split prime: l = pi * conj(pi); divide by each as often as possible.
            let pi = split_prime_above(lp);
            for cand in [pi, canonical_associate(pi.conj())] {
                let mut e = 0u32;
                loop {
                    let (q, r) = w.div_rem(cand);
                    if r.is_zero() {
                        w = q;
                        e += 1;
                    } else {
                        break;
                    }
                }
                if e > 0 {
                    primes.push((cand, e));
                }
            }
        }
        l += 2;
    }
    if m > 1 {
        // Residual rational prime of the norm.
        let lp = i64::try_from(m).expect("prime fits i64");
        debug_assert!(m % 4 == 1, "odd residual norm prime splits");
        let pi = split_prime_above(lp);
        for cand in [pi, canonical_associate(pi.conj())] {
            let (q, r) = w.div_rem(cand);
            if r.is_zero() {
                w = q;
                primes.push((cand, 1));
            }
        }
    }

    debug_assert_eq!(w.norm(), 1, "all primes removed leaves a unit");
    primes.sort_by_key(|&(p, _)| (p.norm(), p.re(), p.im()));
    Ok(GaussFactorization { unit: w, primes })
}

/// Finds the canonical Gaussian prime above a split rational prime
/// `l = a^2 + b^2` (l = 2 also works, returning `1+i`).
fn split_prime_above(l: i64) -> GaussInt {
    if l == 2 {
        return GaussInt::new(1, 1);
    }
    let mut b = 1i64;
    loop {
        let rest = l - b * b;
        if rest <= 0 {
            panic!("{l} is not a sum of two squares");
        }
        let a = integer_sqrt(rest);
        if a * a == rest {
            return canonical_associate(GaussInt::new(a, b));
        }
        b += 1;
    }
}

/// Exact floor of the square root of a nonnegative `i64`.
pub fn integer_sqrt(n: i64) -> i64 {
    assert!(n >= 0, "integer_sqrt of negative value");
    if n == 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as i64;
    while r > 0 && r.saturating_mul(r) > n {
        r -= 1;
    }
    while (r + 1).saturating_mul(r + 1) <= n {
        r += 1;
    }
    r
}
