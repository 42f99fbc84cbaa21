//! Normalized representations of primes by binary quadratic forms.
//!
//! A prime `p = 1 (mod 4)` is written `p = c^2 + d^2` with the sign
//! conventions `c = 1 (mod 4)` and `d = 2^r d0`, `d0 = 1 (mod 4)`; and,
//! when possible, `p = x^2 + q y^2` with `y`'s odd part `= 1 (mod 4)` and
//! both signs of `x` kept.  The residuacity criteria in [`crate::verify`]
//! are stated exactly in terms of these normalizations.

use thiserror::Error;

use crate::gaussian::{gauss_gcd, integer_sqrt, GaussInt};
use crate::modular::{gcd, is_prime, pow_mod, val2};
use crate::symbols::jacobi2;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RepError {
    #[error("{0} is not prime")]
    NotPrime(i64),
    #[error("{0} is not congruent to 1 mod 4")]
    BadResidue(i64),
    #[error("form parameter q = {q} invalid for p = {p} (need q >= 2, p not dividing q)")]
    BadForm { p: i64, q: i64 },
}

/// `p = c^2 + d^2` with `c = 1 (mod 4)`, `d = 2^r * d0`, `d0 = 1 (mod 4)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TwoSquares {
    pub p: i64,
    pub c: i64,
    pub d: i64,
    pub r: u32,
    pub d0: i64,
}

/// One representation `p = x^2 + q y^2`, with the decompositions
/// `y = 2^t * y0` (`y0` odd, `= 1 (mod 4)`) and `x = 2^s * x0` (`x0` odd).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadRep {
    pub p: i64,
    pub q: i64,
    pub x: i64,
    pub y: i64,
    pub t: u32,
    pub y0: i64,
    pub s: u32,
    pub x0: i64,
}

/// Status of the coprimality hypotheses the residuacity criteria assume.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HypothesisStatus {
    /// `(c, x+d) = 1`.
    pub gcd_c_xd_ok: bool,
    /// `(d0, x+c) = 1`.
    pub gcd_d0_xc_ok: bool,
    /// `m` with `2^m || (x+c)`, `None` when `x + c = 0`.
    pub m_val: Option<u32>,
}

/// Writes the prime `p = 1 (mod 4)` as a normalized sum of two squares.
///
/// The Gaussian prime above `p` is found as `gcd(p, t + i)` where
/// `t^2 = -1 (mod p)` comes from powering a quadratic nonresidue; signs are
/// then fixed so `c = 1 (mod 4)` and `d`'s odd part is `1 (mod 4)`.
/// Deterministic, `O(log p)` multiplications.
pub fn two_squares(p: i64) -> Result<TwoSquares, RepError> {
    if p < 2 || !is_prime(p as u64) {
        return Err(RepError::NotPrime(p));
    }
    if p % 4 != 1 {
        return Err(RepError::BadResidue(p));
    }
    let t = sqrt_minus_one(p);
    let g = gauss_gcd(GaussInt::new(p, 0), GaussInt::new(t, 1));
    debug_assert_eq!(g.norm(), p as i128);
    // Canonical gcd associate has odd positive re and even im.
    let c0 = g.re();
    let dd = g.im();
    debug_assert!(c0 % 2 == 1 && dd % 2 == 0 && dd != 0);
    let c = if c0.rem_euclid(4) == 1 { c0 } else { -c0 };
    let r = val2(dd);
    let d_abs = dd.abs();
    let d = if (d_abs >> r).rem_euclid(4) == 1 { d_abs } else { -d_abs };
    let d0 = d / (1i64 << r);
    Ok(TwoSquares { p, c, d, r, d0 })
}

/// A square root of `-1 mod p` for a prime `p = 1 (mod 4)`.
fn sqrt_minus_one(p: i64) -> i64 {
    let mut n = 2i64;
    loop {
        if jacobi2(n, p) == Ok(-1) {
            let t = pow_mod(n, ((p - 1) / 4) as u64, p);
            debug_assert_eq!(pow_mod(t, 2, p), p - 1);
            return t;
        }
        n += 1;
    }
}

/// All normalized representations `p = x^2 + q y^2`, ordered by `|y|`
/// ascending then `x` ascending.  Empty when `p` is not represented by the
/// form.  Requires `p` an odd prime not dividing `q`, and `q >= 2`.
pub fn quad_reps(p: i64, q: i64) -> Result<Vec<QuadRep>, RepError> {
    if p < 3 || !is_prime(p as u64) {
        return Err(RepError::NotPrime(p));
    }
    if q < 2 || q % p == 0 {
        return Err(RepError::BadForm { p, q });
    }
    let mut out = Vec::new();
    let mut y_abs = 1i64;
    while q.saturating_mul(y_abs * y_abs) < p {
        let rem = p - q * y_abs * y_abs;
        let x_abs = integer_sqrt(rem);
        if x_abs * x_abs == rem {
            // x = 0 would force p | q y^2, impossible here.
            debug_assert!(x_abs > 0);
            debug_assert_eq!(gcd(x_abs, y_abs), 1);
            let t = val2(y_abs);
            let y = if (y_abs >> t).rem_euclid(4) == 1 { y_abs } else { -y_abs };
            let y0 = y / (1i64 << t);
            let s = val2(x_abs);
            for x in [-x_abs, x_abs] {
                out.push(QuadRep { p, q, x, y, t, y0, s, x0: x / (1i64 << s) });
            }
        }
        y_abs += 1;
    }
    Ok(out)
}

/// Evaluates the coprimality hypotheses for one representation pair.
/// Panics if the two structures describe different primes.
pub fn hypotheses(ts: &TwoSquares, rep: &QuadRep) -> HypothesisStatus {
    assert_eq!(ts.p, rep.p, "mismatched primes");
    let xd = rep.x + ts.d;
    let xc = rep.x + ts.c;
    HypothesisStatus {
        gcd_c_xd_ok: gcd(ts.c, xd) == 1,
        gcd_d0_xc_ok: gcd(ts.d0, xc) == 1,
        m_val: if xc == 0 { None } else { Some(val2(xc)) },
    }
}

/// The two gcd identities relating the representations:
/// `(x+d, c^2) = (x+d, q y^2)` and
/// `(q y^2, c^2 + (x+d)^2) = (x+d, c^2) * (2, x+d + c^2/(x+d, c^2))`.
/// Returns whether both hold (they always should).
pub fn gcd_identities_hold(ts: &TwoSquares, rep: &QuadRep) -> bool {
    assert_eq!(ts.p, rep.p, "mismatched primes");
    let xd = rep.x + ts.d;
    let c2 = ts.c * ts.c;
    let qy2 = rep.q * rep.y * rep.y;
    let g1 = gcd(xd, c2);
    let first = g1 == gcd(xd, qy2);
    let lhs = gcd(qy2, c2 + xd * xd);
    let rhs = g1 * gcd(2, xd + c2 / g1);
    first && lhs == rhs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_squares_examples() {
        assert_eq!(
            two_squares(61).unwrap(),
            TwoSquares { p: 61, c: 5, d: -6, r: 1, d0: -3 }
        );
        assert_eq!(
            two_squares(5).unwrap(),
            TwoSquares { p: 5, c: 1, d: 2, r: 1, d0: 1 }
        );
        assert_eq!(
            two_squares(13).unwrap(),
            TwoSquares { p: 13, c: -3, d: 2, r: 1, d0: 1 }
        );
    }

    #[test]
    fn two_squares_normalization_invariants() {
        for p in (5..5000i64).step_by(4) {
            if !is_prime(p as u64) {
                continue;
            }
            let ts = two_squares(p).unwrap();
            assert_eq!(ts.c * ts.c + ts.d * ts.d, p);
            assert_eq!(ts.c.rem_euclid(4), 1);
            assert_eq!(ts.d0.rem_euclid(4), 1);
            assert_eq!(ts.d, ts.d0 << ts.r);
            assert!(ts.d0 % 2 != 0 && ts.r >= 1);
            // p mod 8 controls the 2-adic valuation of d.
            if p % 8 == 1 {
                assert!(ts.r >= 2, "p={p}");
            } else {
                assert_eq!(ts.r, 1, "p={p}");
            }
        }
    }

    #[test]
    fn two_squares_rejects_bad_input() {
        assert_eq!(two_squares(15), Err(RepError::NotPrime(15)));
        assert_eq!(two_squares(7), Err(RepError::BadResidue(7)));
    }

    #[test]
    fn quad_reps_examples() {
        let reps = quad_reps(61, 15).unwrap();
        assert_eq!(reps.len(), 2);
        assert_eq!(
            reps[0],
            QuadRep { p: 61, q: 15, x: -1, y: 2, t: 1, y0: 1, s: 0, x0: -1 }
        );
        assert_eq!(
            reps[1],
            QuadRep { p: 61, q: 15, x: 1, y: 2, t: 1, y0: 1, s: 0, x0: 1 }
        );

        assert!(quad_reps(13, 17).unwrap().is_empty());

        let reps = quad_reps(29, 7).unwrap();
        assert_eq!(reps.len(), 2);
        assert_eq!((reps[0].x, reps[0].y), (-1, 2));
        assert_eq!((reps[1].x, reps[1].y), (1, 2));
    }

    #[test]
    fn quad_reps_match_brute_force() {
        for p in [5i64, 13, 17, 29, 41, 61, 73, 89, 97, 101, 113] {
            for q in 2..50i64 {
                if q % p == 0 {
                    continue;
                }
                let reps = quad_reps(p, q).unwrap();
                // Brute force over all pairs.
                let mut expected = Vec::new();
                for y in -p..=p {
                    for x in -p..=p {
                        if x * x + q * y * y == p && y != 0 {
                            let t = val2(y);
                            if (y.abs() >> t).rem_euclid(4) == if y > 0 { 1 } else { 3 } {
                                expected.push((x, y));
                            }
                        }
                    }
                }
                expected.sort_by_key(|&(x, y)| (y.abs(), x));
                let got: Vec<(i64, i64)> = reps.iter().map(|r| (r.x, r.y)).collect();
                assert_eq!(got, expected, "p={p} q={q}");
                for r in &reps {
                    assert_eq!(r.x * r.x + q * r.y * r.y, p);
                    assert_eq!(r.y, r.y0 << r.t);
                    assert_eq!(r.x, r.x0 << r.s);
                    assert_eq!(r.y0.rem_euclid(4), 1);
                    assert!(r.x0 % 2 != 0 && r.y0 % 2 != 0);
                }
            }
        }
    }

    #[test]
    fn quad_reps_rejects_bad_input() {
        assert!(quad_reps(15, 7).is_err());
        assert!(quad_reps(13, 1).is_err());
        assert!(quad_reps(13, 26).is_err());
    }

    #[test]
    fn hypotheses_examples() {
        // p = 61, q = 15, x = -1: (c, x+d) = (5, -7) = 1 and
        // (d0, x+c) = (-3, 4) = 1, with 2^2 || (x + c).
        let ts = two_squares(61).unwrap();
        let rep = quad_reps(61, 15).unwrap()[0];
        let h = hypotheses(&ts, &rep);
        assert!(h.gcd_c_xd_ok && h.gcd_d0_xc_ok);
        assert_eq!(h.m_val, Some(2));

        // p = 41, q = 5, x = 6: (c, x+d) = (5, 10) = 5 fails,
        // (d0, x+c) = (1, 11) = 1 holds.
        let ts = two_squares(41).unwrap();
        assert_eq!((ts.c, ts.d), (5, 4));
        let rep = quad_reps(41, 5)
            .unwrap()
            .into_iter()
            .find(|r| r.x == 6)
            .unwrap();
        let h = hypotheses(&ts, &rep);
        assert!(!h.gcd_c_xd_ok);
        assert!(h.gcd_d0_xc_ok);

        // p = 29, q = 7, x = 1: (c, x+d) = (5, 3) = 1.
        let ts = two_squares(29).unwrap();
        let rep = quad_reps(29, 7)
            .unwrap()
            .into_iter()
            .find(|r| r.x == 1)
            .unwrap();
        assert!(hypotheses(&ts, &rep).gcd_c_xd_ok);
    }

    #[test]
    fn gcd_identities_hold_everywhere_small() {
        for p in (5..2000i64).step_by(4) {
            if !is_prime(p as u64) {
                continue;
            }
            let ts = two_squares(p).unwrap();
            for q in 2..60i64 {
                if q % p == 0 {
                    continue;
                }
                for rep in quad_reps(p, q).unwrap() {
                    assert!(gcd_identities_hold(&ts, &rep), "p={p} q={q} x={}", rep.x);
                }
            }
        }
    }
}
