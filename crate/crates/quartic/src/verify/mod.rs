//! The verification engine: named checks, parameter validation, per-prime
//! evaluation, and the scan driver.
//!
//! Each check is one congruence criterion for `q^[p/8] mod p` (or a Lucas
//! pair / unit power built from the same data), evaluated on every
//! normalized representation instance `p = c^2 + d^2 = x^2 + q y^2` and
//! compared against the directly computed value.  [`run_check`] evaluates a
//! single `(check, p, params)` triple; [`run_suite`] crosses a check list
//! with a parameter grid over a prime range and aggregates tallies.
//!
//! A record with `applicable = true`, `explore = false`, and
//! `matched = false` (and not variant-dependent) is a counterexample; the
//! scanned ranges are expected to produce none.

mod checks;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::modular::{gcd, is_prime};
use crate::represent::{
    hypotheses, quad_reps, two_squares, HypothesisStatus, QuadRep, RepError, TwoSquares,
};
use crate::sieve::primes_in_range;
use crate::symbols::I4;

pub use checks::lemma2_9_holds;

use checks::{Ctx, Eval, Outcome};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("unknown check id `{0}`")]
    UnknownCheck(String),
    #[error("invalid parameters for {check}: {reason}")]
    ParamShape { check: CheckId, reason: String },
    #[error("p = {0} must be an odd prime")]
    BadPrime(i64),
    #[error(transparent)]
    Rep(#[from] RepError),
}

/// Identifiers of every check, in presentation order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum CheckId {
    Thm3_1,
    Thm3_2,
    Cor3_1,
    Thm3_3,
    Thm3_4,
    Thm3_5,
    Thm4_1,
    Cor4_1,
    Thm4_2,
    Cor4_2,
    Thm4_3,
    Cor4_3,
    Thm4_4,
    Cor4_4,
    Cor4_5,
    Thm4_5,
    Thm5_1,
    Cor5_1,
    Thm5_2,
    Cor5_2,
    Eq5_5,
    Thm6_1,
    Thm6_2,
    Thm6_3,
    Thm6_4,
    Thm7_1,
    Cor7_1,
    Thm7_2,
    Lemma2_7,
    Lemma2_8,
    Lemma2_9,
    Lemma2_12,
    Lemma2_13,
}

impl CheckId {
    pub const ALL: [CheckId; 33] = [
        CheckId::Thm3_1,
        CheckId::Thm3_2,
        CheckId::Cor3_1,
        CheckId::Thm3_3,
        CheckId::Thm3_4,
        CheckId::Thm3_5,
        CheckId::Thm4_1,
        CheckId::Cor4_1,
        CheckId::Thm4_2,
        CheckId::Cor4_2,
        CheckId::Thm4_3,
        CheckId::Cor4_3,
        CheckId::Thm4_4,
        CheckId::Cor4_4,
        CheckId::Cor4_5,
        CheckId::Thm4_5,
        CheckId::Thm5_1,
        CheckId::Cor5_1,
        CheckId::Thm5_2,
        CheckId::Cor5_2,
        CheckId::Eq5_5,
        CheckId::Thm6_1,
        CheckId::Thm6_2,
        CheckId::Thm6_3,
        CheckId::Thm6_4,
        CheckId::Thm7_1,
        CheckId::Cor7_1,
        CheckId::Thm7_2,
        CheckId::Lemma2_7,
        CheckId::Lemma2_8,
        CheckId::Lemma2_9,
        CheckId::Lemma2_12,
        CheckId::Lemma2_13,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckId::Thm3_1 => "thm3.1",
            CheckId::Thm3_2 => "thm3.2",
            CheckId::Cor3_1 => "cor3.1",
            CheckId::Thm3_3 => "thm3.3",
            CheckId::Thm3_4 => "thm3.4",
            CheckId::Thm3_5 => "thm3.5",
            CheckId::Thm4_1 => "thm4.1",
            CheckId::Cor4_1 => "cor4.1",
            CheckId::Thm4_2 => "thm4.2",
            CheckId::Cor4_2 => "cor4.2",
            CheckId::Thm4_3 => "thm4.3",
            CheckId::Cor4_3 => "cor4.3",
            CheckId::Thm4_4 => "thm4.4",
            CheckId::Cor4_4 => "cor4.4",
            CheckId::Cor4_5 => "cor4.5",
            CheckId::Thm4_5 => "thm4.5",
            CheckId::Thm5_1 => "thm5.1",
            CheckId::Cor5_1 => "cor5.1",
            CheckId::Thm5_2 => "thm5.2",
            CheckId::Cor5_2 => "cor5.2",
            CheckId::Eq5_5 => "eq5.5",
            CheckId::Thm6_1 => "thm6.1",
            CheckId::Thm6_2 => "thm6.2",
            CheckId::Thm6_3 => "thm6.3",
            CheckId::Thm6_4 => "thm6.4",
            CheckId::Thm7_1 => "thm7.1",
            CheckId::Cor7_1 => "cor7.1",
            CheckId::Thm7_2 => "thm7.2",
            CheckId::Lemma2_7 => "lemma2.7",
            CheckId::Lemma2_8 => "lemma2.8",
            CheckId::Lemma2_9 => "lemma2.9",
            CheckId::Lemma2_12 => "lemma2.12",
            CheckId::Lemma2_13 => "lemma2.13",
        }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckId {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<CheckId, VerifyError> {
        CheckId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| VerifyError::UnknownCheck(s.to_string()))
    }
}

/// User-supplied parameters.  Each check consumes exactly the fields it
/// needs and rejects the rest (see [`run_check`]); fixed-parameter checks
/// (`cor3.1`, `cor4.5`, `eq5.5`, the lemma aggregates) take none.
#[derive(Clone, Copy, Default, Debug, PartialEq, Eq)]
pub struct CheckParams {
    /// The form parameter `q` itself, for checks parameterized directly
    /// by `q`.
    pub q: Option<i64>,
    /// The odd `b` with `q = b^2 + 4^alpha`.
    pub b: Option<i64>,
    /// For `thm4.5`: the even part of `q = a^2 + b^2`.  For the `q = 4a^2
    /// + 1` family: `a`.
    pub a: Option<i64>,
    /// The exponent in `q = b^2 + 4^alpha` where variable.
    pub alpha: Option<u32>,
}

/// Resolved parameters: the effective form parameter `q` plus whichever of
/// `b`, `a`, `alpha` the check's tables consume (0 when unused).
#[derive(Clone, Copy, Debug)]
struct Eff {
    q: i64,
    b: i64,
    a: i64,
    alpha: u32,
}

/// Which coprimality hypothesis a check's statement assumes.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum HypReq {
    /// `(c, x + d) = 1`.
    Cxd,
    /// `(d0, x + c) = 1`.
    D0xc,
    /// Either of the two suffices.
    Either,
    /// No coprimality hypothesis.
    Free,
}

fn hyp_req(check: CheckId) -> HypReq {
    use CheckId::*;
    match check {
        Thm3_1 | Thm3_2 | Cor3_1 => HypReq::Cxd,
        Thm3_3 | Thm3_4 | Thm3_5 => HypReq::D0xc,
        Thm4_1 | Cor4_1 | Thm4_2 | Cor4_2 | Thm4_3 | Cor4_3 | Thm4_4 | Cor4_4 | Cor4_5
        | Thm4_5 | Thm5_1 | Cor5_1 | Thm5_2 | Cor5_2 | Thm6_1 | Thm6_2 | Thm6_3 | Thm6_4
        | Thm7_1 | Cor7_1 | Thm7_2 => HypReq::Either,
        Eq5_5 | Lemma2_7 | Lemma2_8 | Lemma2_9 | Lemma2_12 | Lemma2_13 => HypReq::Free,
    }
}

/// How a record came about; refines the `applicable`/`explore` flags.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RecordKind {
    /// Structural side conditions fail; the statement says nothing here.
    NotApplicable,
    /// Structure fits but the coprimality hypothesis fails and explore
    /// mode is off: not evaluated.
    HypSkipped,
    /// Evaluated with all hypotheses satisfied.
    Evaluated,
    /// Evaluated in explore mode with a failed coprimality hypothesis.
    ExploreEvaluated,
    /// Explore mode, but a needed symbol/inverse does not exist without
    /// the hypothesis.
    ExploreBroken,
}

/// One evaluation of one check on one instance.
#[derive(Clone, Debug)]
pub struct VerifyRecord {
    pub check: CheckId,
    pub p: i64,
    pub params: CheckParams,
    /// Effective form parameter; 0 for checks without one.
    pub q: i64,
    pub ts: Option<TwoSquares>,
    pub rep: Option<QuadRep>,
    pub hyp: Option<HypothesisStatus>,
    pub applicable: bool,
    pub exponent: Option<I4>,
    pub predicted: Option<String>,
    pub actual: Option<String>,
    /// Defined only when `applicable` is true.
    pub matched: Option<bool>,
    /// True when this record was evaluated despite a failed coprimality
    /// hypothesis (explore mode).
    pub explore: bool,
    pub kind: RecordKind,
    /// The prediction matched under some unit variants of the `q = a^2 +
    /// b^2` decomposition but not all.
    pub variant_mixed: bool,
}

/// Flat JSON-lines projection of a record; field order is the wire format.
#[derive(Serialize)]
struct RecordLine<'a> {
    check: &'a str,
    p: i64,
    q: i64,
    c: i64,
    d: i64,
    x: i64,
    y: i64,
    hyp_cxd: Option<bool>,
    hyp_d0xc: Option<bool>,
    applicable: bool,
    exponent: Option<u8>,
    predicted: Option<&'a str>,
    actual: Option<&'a str>,
    matched: Option<bool>,
    explore: bool,
}

impl VerifyRecord {
    /// An applicable, non-explore, non-variant-dependent mismatch: the
    /// only outcome that refutes a check.
    pub fn is_counterexample(&self) -> bool {
        self.applicable && !self.explore && self.matched == Some(false) && !self.variant_mixed
    }

    /// The record as one JSON-lines object with the fixed field set.
    pub fn json_line(&self) -> String {
        let line = RecordLine {
            check: self.check.name(),
            p: self.p,
            q: self.q,
            c: self.ts.map_or(0, |t| t.c),
            d: self.ts.map_or(0, |t| t.d),
            x: self.rep.map_or(0, |r| r.x),
            y: self.rep.map_or(0, |r| r.y),
            hyp_cxd: self.hyp.map(|h| h.gcd_c_xd_ok),
            hyp_d0xc: self.hyp.map(|h| h.gcd_d0_xc_ok),
            applicable: self.applicable,
            exponent: self.exponent.map(|s| s.exponent()),
            predicted: self.predicted.as_deref(),
            actual: self.actual.as_deref(),
            matched: self.matched,
            explore: self.explore,
        };
        serde_json::to_string(&line).expect("record serialization cannot fail")
    }
}

const PARAM_BOUND: i64 = 1_000_000;

fn param_err(check: CheckId, reason: impl Into<String>) -> VerifyError {
    VerifyError::ParamShape {
        check,
        reason: reason.into(),
    }
}

/// Enforces the parameter shape of `check` and resolves the effective form
/// parameter.  `Ok(None)` marks the per-prime checks that take no form at
/// all (`eq5.5`, `lemma2.7`, `lemma2.8`).
fn validate_params(check: CheckId, params: &CheckParams) -> Result<Option<Eff>, VerifyError> {
    use CheckId::*;
    let forbid = |field: Option<()>, name: &str| -> Result<(), VerifyError> {
        match field {
            Some(()) => Err(param_err(check, format!("unexpected parameter `{name}`"))),
            None => Ok(()),
        }
    };
    let no_q = || forbid(params.q.map(|_| ()), "q");
    let no_b = || forbid(params.b.map(|_| ()), "b");
    let no_a = || forbid(params.a.map(|_| ()), "a");
    let no_alpha = || forbid(params.alpha.map(|_| ()), "alpha");
    let need_q = || params.q.ok_or_else(|| param_err(check, "missing parameter `q`"));
    let need_b = || params.b.ok_or_else(|| param_err(check, "missing parameter `b`"));
    let need_a = || params.a.ok_or_else(|| param_err(check, "missing parameter `a`"));
    let odd_b = |b: i64| -> Result<i64, VerifyError> {
        if b >= 1 && b <= PARAM_BOUND && b % 2 == 1 {
            Ok(b)
        } else {
            Err(param_err(check, format!("b = {b} must be odd, 1 <= b <= {PARAM_BOUND}")))
        }
    };
    let eff_q = |q: i64| Eff { q, b: 0, a: 0, alpha: 0 };

    match check {
        Thm3_1 | Thm3_2 | Thm3_3 | Thm3_4 | Thm3_5 | Lemma2_9 => {
            let q = need_q()?;
            no_b()?;
            no_a()?;
            no_alpha()?;
            if q < 3 || q > PARAM_BOUND || q % 2 == 0 {
                return Err(param_err(check, format!("q = {q} must be odd, 3 <= q <= {PARAM_BOUND}")));
            }
            Ok(Some(eff_q(q)))
        }
        Lemma2_12 | Lemma2_13 => {
            let q = need_q()?;
            no_b()?;
            no_a()?;
            no_alpha()?;
            if q < 2 || q > PARAM_BOUND {
                return Err(param_err(check, format!("q = {q} must satisfy 2 <= q <= {PARAM_BOUND}")));
            }
            Ok(Some(eff_q(q)))
        }
        Cor3_1 => {
            no_q()?;
            no_b()?;
            no_a()?;
            no_alpha()?;
            Ok(Some(eff_q(15)))
        }
        Cor4_5 => {
            no_q()?;
            no_b()?;
            no_a()?;
            no_alpha()?;
            Ok(Some(eff_q(17)))
        }
        Eq5_5 | Lemma2_7 | Lemma2_8 => {
            no_q()?;
            no_b()?;
            no_a()?;
            no_alpha()?;
            Ok(None)
        }
        Thm4_1 | Cor4_1 | Thm4_2 | Cor4_2 | Thm4_3 | Cor4_3 | Thm4_4 | Cor4_4 => {
            let q = need_q()?;
            no_b()?;
            no_a()?;
            no_alpha()?;
            let (modulus, class) = match check {
                Thm4_1 => (4, 3),
                Cor4_1 => (8, 3),
                Thm4_2 | Cor4_2 => (8, 7),
                Thm4_3 => (4, 1),
                Cor4_3 => (8, 5),
                _ => (8, 1),
            };
            if q < 3 || q > PARAM_BOUND || !is_prime(q as u64) || q % modulus != class {
                return Err(param_err(
                    check,
                    format!("q = {q} must be a prime = {class} (mod {modulus}), q <= {PARAM_BOUND}"),
                ));
            }
            Ok(Some(eff_q(q)))
        }
        Thm4_5 => {
            no_q()?;
            no_alpha()?;
            let a = need_a()?;
            let b = need_b()?;
            if a < 2 || a > PARAM_BOUND || a % 2 != 0 {
                return Err(param_err(check, format!("a = {a} must be even, 2 <= a <= {PARAM_BOUND}")));
            }
            let b = odd_b(b)?;
            if gcd(a, b) != 1 {
                return Err(param_err(check, format!("a = {a}, b = {b} must be coprime")));
            }
            Ok(Some(Eff { q: a * a + b * b, b, a, alpha: 0 }))
        }
        Thm5_1 | Cor5_1 | Thm6_1 | Thm6_2 => {
            no_q()?;
            no_a()?;
            no_alpha()?;
            let b = odd_b(need_b()?)?;
            Ok(Some(Eff { q: b * b + 4, b, a: 0, alpha: 1 }))
        }
        Cor5_2 => {
            no_q()?;
            no_a()?;
            no_alpha()?;
            let b = odd_b(need_b()?)?;
            Ok(Some(Eff { q: b * b + 16, b, a: 0, alpha: 2 }))
        }
        Thm5_2 | Thm6_3 | Thm6_4 => {
            no_q()?;
            no_a()?;
            let b = odd_b(need_b()?)?;
            let alpha = params
                .alpha
                .ok_or_else(|| param_err(check, "missing parameter `alpha`"))?;
            if !(2..=28).contains(&alpha) {
                return Err(param_err(check, format!("alpha = {alpha} must satisfy 2 <= alpha <= 28")));
            }
            Ok(Some(Eff {
                q: b * b + (1i64 << (2 * alpha)),
                b,
                a: 0,
                alpha,
            }))
        }
        Thm7_1 | Cor7_1 | Thm7_2 => {
            no_q()?;
            no_b()?;
            no_alpha()?;
            let a = need_a()?;
            if a < 1 || a > PARAM_BOUND {
                return Err(param_err(check, format!("a = {a} must satisfy 1 <= a <= {PARAM_BOUND}")));
            }
            Ok(Some(Eff { q: 4 * a * a + 1, b: 0, a, alpha: 0 }))
        }
    }
}

/// Evaluates the check's case table on one instance.
fn dispatch(check: CheckId, eff: &Eff, ctx: &Ctx) -> Outcome {
    use CheckId::*;
    match check {
        Thm3_1 => checks::thm3_1(ctx),
        Thm3_2 => checks::thm3_2(ctx),
        Cor3_1 => checks::cor3_1(ctx),
        Thm3_3 => checks::thm3_3(ctx),
        Thm3_4 => checks::thm3_4(ctx),
        Thm3_5 => checks::thm3_5(ctx),
        Thm4_1 => checks::thm4_1(ctx),
        Cor4_1 => checks::cor4_1(ctx),
        Thm4_2 => checks::thm4_2(ctx),
        Cor4_2 => checks::cor4_2(ctx),
        Thm4_3 => checks::thm4_3(ctx),
        Cor4_3 => checks::cor4_3(ctx),
        Thm4_4 => checks::thm4_4(ctx),
        Cor4_4 => checks::cor4_4(ctx),
        Cor4_5 => checks::cor4_5(ctx),
        Thm4_5 => checks::thm4_5(ctx, eff.a, eff.b),
        Thm5_1 => checks::thm5_1(ctx, eff.b),
        Cor5_1 => checks::cor5_1(ctx, eff.b),
        Thm5_2 => checks::thm5_2(ctx, eff.b, eff.alpha),
        Cor5_2 => checks::cor5_2(ctx, eff.b),
        Thm6_1 => checks::thm6_1(ctx, eff.b),
        Thm6_2 => checks::thm6_2(ctx, eff.b),
        Thm6_3 => checks::thm6_3(ctx, eff.b, eff.alpha),
        Thm6_4 => checks::thm6_4(ctx, eff.b, eff.alpha),
        Thm7_1 => checks::thm7_1(ctx, eff.a),
        Cor7_1 => checks::cor7_1(ctx, eff.a),
        Thm7_2 => checks::thm7_2(ctx, eff.a),
        Lemma2_9 => checks::lemma2_9(ctx),
        Lemma2_12 => checks::lemma2_12(ctx),
        Lemma2_13 => checks::lemma2_13(ctx),
        Eq5_5 | Lemma2_7 | Lemma2_8 => unreachable!("per-prime checks have no instance"),
    }
}

fn evaluate_instance(
    check: CheckId,
    eff: &Eff,
    params: &CheckParams,
    ts: &TwoSquares,
    rep: &QuadRep,
    explore: bool,
) -> VerifyRecord {
    let hyp = hypotheses(ts, rep);
    let hyp_ok = match hyp_req(check) {
        HypReq::Cxd => hyp.gcd_c_xd_ok,
        HypReq::D0xc => hyp.gcd_d0_xc_ok,
        HypReq::Either => hyp.gcd_c_xd_ok || hyp.gcd_d0_xc_ok,
        HypReq::Free => true,
    };
    let base = |kind: RecordKind| VerifyRecord {
        check,
        p: ts.p,
        params: *params,
        q: eff.q,
        ts: Some(*ts),
        rep: Some(*rep),
        hyp: Some(hyp),
        applicable: false,
        exponent: None,
        predicted: None,
        actual: None,
        matched: None,
        explore: false,
        kind,
        variant_mixed: false,
    };
    let ctx = Ctx::new(eff.q, ts, rep);
    if !hyp_ok && !explore {
        // Structural inapplicability takes priority over the hypothesis:
        // a record outside the statement's cases is NotApplicable even if
        // its gcd hypothesis also fails.
        return match dispatch(check, eff, &ctx) {
            Outcome::Inapplicable => base(RecordKind::NotApplicable),
            _ => base(RecordKind::HypSkipped),
        };
    }
    match dispatch(check, eff, &ctx) {
        Outcome::Inapplicable => base(RecordKind::NotApplicable),
        Outcome::SymbolBroke => {
            if hyp_ok {
                // The hypothesis held and a symbol the statement relies on
                // still failed to exist: that refutes the statement.
                VerifyRecord {
                    applicable: true,
                    matched: Some(false),
                    kind: RecordKind::Evaluated,
                    ..base(RecordKind::Evaluated)
                }
            } else {
                VerifyRecord {
                    explore: true,
                    ..base(RecordKind::ExploreBroken)
                }
            }
        }
        Outcome::Done(ev) => {
            let Eval {
                exponent,
                predicted,
                actual,
                matched,
                variant_mixed,
            } = ev;
            VerifyRecord {
                applicable: true,
                exponent,
                predicted: Some(predicted),
                actual: Some(actual),
                matched: Some(matched),
                explore: !hyp_ok,
                kind: if hyp_ok {
                    RecordKind::Evaluated
                } else {
                    RecordKind::ExploreEvaluated
                },
                variant_mixed,
                ..base(RecordKind::Evaluated)
            }
        }
    }
}

/// Wraps a finished per-prime evaluation (`eq5.5`, lemma aggregates) in a
/// record.
fn prime_record(
    check: CheckId,
    p: i64,
    params: &CheckParams,
    ts: Option<TwoSquares>,
    ev: Eval,
) -> VerifyRecord {
    VerifyRecord {
        check,
        p,
        params: *params,
        q: 0,
        ts,
        rep: None,
        hyp: None,
        applicable: true,
        exponent: ev.exponent,
        predicted: Some(ev.predicted),
        actual: Some(ev.actual),
        matched: Some(ev.matched),
        explore: false,
        kind: RecordKind::Evaluated,
        variant_mixed: false,
    }
}

/// Runs one check at one prime.  Representation-based checks return one
/// record per normalized representation (empty when `p` is not represented
/// or `p` does not fit the check's residue class); `eq5.5` and the lemma
/// aggregates return a single record.
pub fn run_check(check: CheckId, p: i64, params: &CheckParams) -> Result<Vec<VerifyRecord>, VerifyError> {
    run_check_with(check, p, params, false)
}

/// [`run_check`] with explore mode: the coprimality hypotheses are
/// ignored and hypothesis-violating instances are evaluated anyway,
/// flagged `explore`.
pub fn run_check_with(
    check: CheckId,
    p: i64,
    params: &CheckParams,
    explore: bool,
) -> Result<Vec<VerifyRecord>, VerifyError> {
    let eff = validate_params(check, params)?;
    if p < 3 || !is_prime(p as u64) {
        return Err(VerifyError::BadPrime(p));
    }
    match check {
        CheckId::Lemma2_7 => Ok(vec![prime_record(check, p, params, None, checks::lemma2_7_eval(p))]),
        CheckId::Lemma2_8 => Ok(vec![prime_record(check, p, params, None, checks::lemma2_8_eval(p))]),
        CheckId::Eq5_5 => {
            if p % 4 != 1 {
                return Ok(vec![]);
            }
            let ts = two_squares(p)?;
            Ok(vec![prime_record(check, p, params, Some(ts), checks::eq5_5(&ts))])
        }
        _ => {
            let eff = eff.expect("representation checks resolve an effective q");
            if p % 4 != 1 || eff.q % p == 0 {
                return Ok(vec![]);
            }
            let ts = two_squares(p)?;
            let reps = quad_reps(p, eff.q)?;
            Ok(reps
                .iter()
                .map(|rep| evaluate_instance(check, &eff, params, &ts, rep, explore))
                .collect())
        }
    }
}

/// Scan configuration: which checks, over which primes, with which
/// parameter grid.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub checks: Vec<CheckId>,
    pub p_min: i64,
    pub p_max: i64,
    /// Overrides for the per-check default grids; `None` keeps the default.
    pub q: Option<Vec<i64>>,
    pub b: Option<Vec<i64>>,
    pub a: Option<Vec<i64>>,
    pub alpha: Option<Vec<u32>>,
    pub explore: bool,
    pub jobs: usize,
}

impl RunConfig {
    pub fn new(checks: Vec<CheckId>, p_max: i64) -> RunConfig {
        RunConfig {
            checks,
            p_min: 5,
            p_max,
            q: None,
            b: None,
            a: None,
            alpha: None,
            explore: false,
            jobs: 1,
        }
    }
}

/// Default `q` grid for the directly `q`-parameterized checks; each check
/// keeps the entries its own validation admits.
const DEFAULT_Q: [i64; 16] = [3, 5, 7, 9, 11, 13, 15, 17, 19, 21, 23, 25, 27, 29, 31, 33];
const DEFAULT_B: [i64; 2] = [1, 3];
const DEFAULT_B_WIDE: [i64; 4] = [1, 3, 5, 7];
const DEFAULT_A: [i64; 3] = [1, 2, 3];
const DEFAULT_ALPHA: [u32; 2] = [2, 3];
const DEFAULT_AB_PAIRS: [(i64, i64); 3] = [(2, 1), (2, 3), (4, 1)];

/// The parameter grid a suite run uses for `check`: the configured lists
/// (or the defaults) filtered down to shapes the check accepts.  Entries a
/// check rejects (wrong residue class, non-prime, ...) are dropped
/// silently so one `--q` list can serve several checks.
fn grid_for(check: CheckId, cfg: &RunConfig) -> Vec<(CheckParams, Option<Eff>)> {
    use CheckId::*;
    let mut out = Vec::new();
    let mut push = |params: CheckParams| {
        if let Ok(eff) = validate_params(check, &params) {
            out.push((params, eff));
        }
    };
    match check {
        Cor3_1 | Cor4_5 | Eq5_5 | Lemma2_7 | Lemma2_8 => push(CheckParams::default()),
        Thm3_1 | Thm3_2 | Thm3_3 | Thm3_4 | Thm3_5 | Thm4_1 | Cor4_1 | Thm4_2 | Cor4_2
        | Thm4_3 | Cor4_3 | Thm4_4 | Cor4_4 | Lemma2_9 | Lemma2_12 | Lemma2_13 => {
            for &q in cfg.q.as_deref().unwrap_or(&DEFAULT_Q) {
                push(CheckParams { q: Some(q), ..CheckParams::default() });
            }
        }
        Thm4_5 => {
            if cfg.a.is_none() && cfg.b.is_none() {
                for (a, b) in DEFAULT_AB_PAIRS {
                    push(CheckParams { a: Some(a), b: Some(b), ..CheckParams::default() });
                }
            } else {
                for &a in cfg.a.as_deref().unwrap_or(&[2, 4]) {
                    for &b in cfg.b.as_deref().unwrap_or(&DEFAULT_B) {
                        push(CheckParams { a: Some(a), b: Some(b), ..CheckParams::default() });
                    }
                }
            }
        }
        Thm5_1 | Cor5_1 | Thm6_1 | Thm6_2 => {
            for &b in cfg.b.as_deref().unwrap_or(&DEFAULT_B) {
                push(CheckParams { b: Some(b), ..CheckParams::default() });
            }
        }
        Cor5_2 => {
            for &b in cfg.b.as_deref().unwrap_or(&DEFAULT_B_WIDE) {
                push(CheckParams { b: Some(b), ..CheckParams::default() });
            }
        }
        Thm5_2 => {
            for &b in cfg.b.as_deref().unwrap_or(&DEFAULT_B_WIDE) {
                for &alpha in cfg.alpha.as_deref().unwrap_or(&DEFAULT_ALPHA) {
                    push(CheckParams { b: Some(b), alpha: Some(alpha), ..CheckParams::default() });
                }
            }
        }
        Thm6_3 | Thm6_4 => {
            for &b in cfg.b.as_deref().unwrap_or(&DEFAULT_B) {
                for &alpha in cfg.alpha.as_deref().unwrap_or(&DEFAULT_ALPHA) {
                    push(CheckParams { b: Some(b), alpha: Some(alpha), ..CheckParams::default() });
                }
            }
        }
        Thm7_1 | Cor7_1 | Thm7_2 => {
            for &a in cfg.a.as_deref().unwrap_or(&DEFAULT_A) {
                push(CheckParams { a: Some(a), ..CheckParams::default() });
            }
        }
    }
    out
}

/// Per-check outcome counts for one suite run.
#[derive(Clone, Copy, Default, Debug, PartialEq, Eq)]
pub struct CheckTally {
    pub records: u64,
    pub not_applicable: u64,
    pub skipped_no_hyp: u64,
    pub applicable: u64,
    pub matched: u64,
    pub mismatched: u64,
    pub variant_dependent: u64,
    pub counterexamples: u64,
    pub explore_evaluated: u64,
    pub explore_matched: u64,
    pub explore_mismatched: u64,
    pub explore_broken: u64,
}

impl CheckTally {
    fn absorb(&mut self, r: &VerifyRecord) {
        self.records += 1;
        match r.kind {
            RecordKind::NotApplicable => self.not_applicable += 1,
            RecordKind::HypSkipped => self.skipped_no_hyp += 1,
            RecordKind::Evaluated => {
                self.applicable += 1;
                if r.matched == Some(true) {
                    self.matched += 1;
                } else if r.variant_mixed {
                    self.variant_dependent += 1;
                } else {
                    self.mismatched += 1;
                    self.counterexamples += 1;
                }
            }
            RecordKind::ExploreEvaluated => {
                self.explore_evaluated += 1;
                if r.matched == Some(true) {
                    self.explore_matched += 1;
                } else {
                    self.explore_mismatched += 1;
                }
            }
            RecordKind::ExploreBroken => self.explore_broken += 1,
        }
    }
}

const MAX_KEPT_COUNTEREXAMPLES: usize = 32;

/// Aggregated outcome of a suite run.
#[derive(Clone, Debug, Default)]
pub struct SuiteSummary {
    /// One tally per requested check, in check order.
    pub tallies: Vec<(CheckId, CheckTally)>,
    pub total_records: u64,
    pub counterexample_count: u64,
    /// The first counterexample records, capped.
    pub counterexamples: Vec<VerifyRecord>,
}

impl fmt::Display for SuiteSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<10} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8} {:>9} {:>9}",
            "check", "records", "applic", "matched", "mismatch", "variant", "skipped", "expl-ok", "expl-bad"
        )?;
        for (id, t) in &self.tallies {
            writeln!(
                f,
                "{:<10} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8} {:>9} {:>9}",
                id.name(),
                t.records,
                t.applicable,
                t.matched,
                t.mismatched,
                t.variant_dependent,
                t.skipped_no_hyp,
                t.explore_matched,
                t.explore_mismatched,
            )?;
        }
        write!(
            f,
            "total records: {}; counterexamples: {}",
            self.total_records, self.counterexample_count
        )
    }
}

/// Runs every requested check over all primes in `[max(p_min, 3), p_max]`,
/// calling `sink` on each record in deterministic order: primes ascending,
/// then checks in id order, then the check's parameter grid, then
/// representations as `quad_reps` emits them.  Representation checks and
/// `eq5.5` skip primes not `= 1 (mod 4)`; the lemma aggregates run on
/// every odd prime in range.
///
/// Distinct primes are evaluated on up to `jobs` threads; the record order
/// does not depend on `jobs`.
pub fn run_suite<F>(cfg: &RunConfig, mut sink: F) -> Result<SuiteSummary, VerifyError>
where
    F: FnMut(&VerifyRecord),
{
    let mut ids = cfg.checks.clone();
    ids.sort();
    ids.dedup();
    let grids: Vec<(CheckId, Vec<(CheckParams, Option<Eff>)>)> =
        ids.iter().map(|&id| (id, grid_for(id, cfg))).collect();

    let mut tallies: BTreeMap<CheckId, CheckTally> = ids.iter().map(|&id| (id, CheckTally::default())).collect();
    let mut summary = SuiteSummary::default();

    if ids.is_empty() || cfg.p_max < 3 {
        return Ok(summary);
    }
    let lo = cfg.p_min.max(3) as u64;
    let primes = if lo <= cfg.p_max as u64 {
        primes_in_range(lo, cfg.p_max as u64)
    } else {
        Vec::new()
    };
    let jobs = cfg.jobs.clamp(1, 64);

    let eval_prime = |p: i64| -> Vec<VerifyRecord> {
        let mut out = Vec::new();
        let ts = if p % 4 == 1 {
            Some(two_squares(p).expect("p = 1 (mod 4) is prime"))
        } else {
            None
        };
        let mut rep_cache: BTreeMap<i64, Vec<QuadRep>> = BTreeMap::new();
        for (check, grid) in &grids {
            for (params, eff) in grid {
                match check {
                    CheckId::Lemma2_7 => {
                        out.push(prime_record(*check, p, params, None, checks::lemma2_7_eval(p)));
                    }
                    CheckId::Lemma2_8 => {
                        out.push(prime_record(*check, p, params, None, checks::lemma2_8_eval(p)));
                    }
                    CheckId::Eq5_5 => {
                        if let Some(ts) = &ts {
                            out.push(prime_record(*check, p, params, Some(*ts), checks::eq5_5(ts)));
                        }
                    }
                    _ => {
                        let Some(ts) = &ts else { continue };
                        let eff = eff.as_ref().expect("representation checks resolve q");
                        if eff.q % p == 0 {
                            continue;
                        }
                        let reps = rep_cache
                            .entry(eff.q)
                            .or_insert_with(|| quad_reps(p, eff.q).expect("valid form parameters"));
                        for rep in reps.iter() {
                            out.push(evaluate_instance(*check, eff, params, ts, rep, cfg.explore));
                        }
                    }
                }
            }
        }
        out
    };

    for wave in primes.chunks(jobs.max(1)) {
        let results: Vec<Vec<VerifyRecord>> = if jobs == 1 || wave.len() == 1 {
            wave.iter().map(|&p| eval_prime(p as i64)).collect()
        } else {
            std::thread::scope(|s| {
                let ep = &eval_prime;
                let handles: Vec<_> = wave
                    .iter()
                    .map(|&p| s.spawn(move || ep(p as i64)))
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("scan worker panicked"))
                    .collect()
            })
        };
        for recs in results {
            for r in recs {
                summary.total_records += 1;
                tallies
                    .get_mut(&r.check)
                    .expect("tally preallocated per check")
                    .absorb(&r);
                if r.is_counterexample() {
                    summary.counterexample_count += 1;
                    if summary.counterexamples.len() < MAX_KEPT_COUNTEREXAMPLES {
                        summary.counterexamples.push(r.clone());
                    }
                }
                sink(&r);
            }
        }
    }
    summary.tallies = tallies.into_iter().collect();
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q_params(q: i64) -> CheckParams {
        CheckParams { q: Some(q), ..CheckParams::default() }
    }

    #[test]
    fn check_ids_round_trip() {
        for id in CheckId::ALL {
            assert_eq!(id.name().parse::<CheckId>().unwrap(), id);
        }
        assert!(matches!(
            "nosuch".parse::<CheckId>(),
            Err(VerifyError::UnknownCheck(_))
        ));
    }

    #[test]
    fn param_shapes_rejected() {
        // missing q
        assert!(run_check(CheckId::Thm3_1, 61, &CheckParams::default()).is_err());
        // unexpected q on a fixed-parameter check
        assert!(run_check(CheckId::Cor3_1, 61, &q_params(15)).is_err());
        // wrong residue class: thm4.1 wants q = 3 (mod 4)
        assert!(run_check(CheckId::Thm4_1, 61, &q_params(5)).is_err());
        // thm4.2 wants 7 mod 8, not just any prime
        assert!(run_check(CheckId::Thm4_2, 61, &q_params(3)).is_err());
        // thm4.5 needs coprime (a, b)
        let bad = CheckParams { a: Some(2), b: Some(3), q: Some(13), ..CheckParams::default() };
        assert!(run_check(CheckId::Thm4_5, 61, &bad).is_err());
        // even b rejected
        let bad = CheckParams { b: Some(2), ..CheckParams::default() };
        assert!(run_check(CheckId::Thm5_1, 61, &bad).is_err());
        // alpha out of range
        let bad = CheckParams { b: Some(1), alpha: Some(1), ..CheckParams::default() };
        assert!(run_check(CheckId::Thm5_2, 61, &bad).is_err());
        // composite p
        assert!(matches!(
            run_check(CheckId::Thm3_1, 15, &q_params(7)),
            Err(VerifyError::BadPrime(15))
        ));
    }

    #[test]
    fn unrepresented_prime_yields_no_records() {
        let recs = run_check(CheckId::Thm3_2, 13, &q_params(17)).unwrap();
        assert!(recs.is_empty());
        // p | q is skipped, not an error
        let recs = run_check(CheckId::Thm3_2, 5, &q_params(15)).unwrap();
        assert!(recs.is_empty());
        // p = 3 (mod 4) has no c^2 + d^2 instance
        let recs = run_check(CheckId::Thm3_2, 7, &q_params(3)).unwrap();
        assert!(recs.is_empty());
    }

    #[test]
    fn cor3_1_worked_example() {
        let recs = run_check(CheckId::Cor3_1, 61, &CheckParams::default()).unwrap();
        assert_eq!(recs.len(), 2);
        let r = &recs[0];
        assert_eq!(r.rep.unwrap().x, -1);
        assert_eq!(r.kind, RecordKind::Evaluated);
        assert!(r.applicable);
        assert_eq!(r.predicted.as_deref(), Some("22"));
        assert_eq!(r.actual.as_deref(), Some("22"));
        assert_eq!(r.matched, Some(true));
        // x = 1 violates (c, x+d) = 1: skipped, not applicable.
        let r = &recs[1];
        assert_eq!(r.rep.unwrap().x, 1);
        assert_eq!(r.kind, RecordKind::HypSkipped);
        assert!(!r.applicable);
        assert_eq!(r.matched, None);
    }

    #[test]
    fn explore_mode_classifies_broken_symbol() {
        let recs = run_check_with(CheckId::Cor3_1, 61, &CheckParams::default(), true).unwrap();
        let r = &recs[1];
        assert_eq!(r.kind, RecordKind::ExploreBroken);
        assert!(!r.applicable);
        assert!(r.explore);
        assert!(!r.is_counterexample());
    }

    #[test]
    fn thm4_2_records() {
        let recs = run_check(CheckId::Thm4_2, 29, &q_params(7)).unwrap();
        assert_eq!(recs.len(), 2);
        for r in &recs {
            assert_eq!(r.matched, Some(true));
            assert_eq!(r.predicted.as_deref(), Some("24"));
            assert_eq!(r.exponent, Some(I4::new(1)));
        }
    }

    #[test]
    fn thm6_2_equivalence_record() {
        let params = CheckParams { b: Some(1), ..CheckParams::default() };
        let recs = run_check(CheckId::Thm6_2, 41, &params).unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[0].rep.unwrap().x, -6);
        for r in &recs {
            assert_eq!(r.matched, Some(true));
            assert_eq!(r.actual.as_deref(), Some("U!=0"));
        }
    }

    #[test]
    fn json_line_schema_is_frozen() {
        let recs = run_check(CheckId::Cor3_1, 61, &CheckParams::default()).unwrap();
        assert_eq!(
            recs[0].json_line(),
            "{\"check\":\"cor3.1\",\"p\":61,\"q\":15,\"c\":5,\"d\":-6,\"x\":-1,\"y\":2,\
             \"hyp_cxd\":true,\"hyp_d0xc\":true,\"applicable\":true,\"exponent\":null,\
             \"predicted\":\"22\",\"actual\":\"22\",\"matched\":true,\"explore\":false}"
        );
        assert_eq!(
            recs[1].json_line(),
            "{\"check\":\"cor3.1\",\"p\":61,\"q\":15,\"c\":5,\"d\":-6,\"x\":1,\"y\":2,\
             \"hyp_cxd\":false,\"hyp_d0xc\":false,\"applicable\":false,\"exponent\":null,\
             \"predicted\":null,\"actual\":null,\"matched\":null,\"explore\":false}"
        );
    }

    #[test]
    fn suite_is_deterministic_across_jobs() {
        let mut cfg = RunConfig::new(
            vec![CheckId::Thm3_2, CheckId::Thm4_1, CheckId::Lemma2_12],
            300,
        );
        let mut lines1 = Vec::new();
        let s1 = run_suite(&cfg, |r| lines1.push(r.json_line())).unwrap();
        cfg.jobs = 4;
        let mut lines4 = Vec::new();
        let s4 = run_suite(&cfg, |r| lines4.push(r.json_line())).unwrap();
        assert!(!lines1.is_empty());
        assert_eq!(lines1, lines4);
        assert_eq!(s1.total_records, s4.total_records);
        assert_eq!(s1.counterexample_count, 0);
    }

    #[test]
    fn empty_check_list_gives_empty_summary() {
        let cfg = RunConfig::new(vec![], 100);
        let s = run_suite(&cfg, |_| {}).unwrap();
        assert_eq!(s.total_records, 0);
        assert!(s.tallies.is_empty());
    }

    /// Frozen `applicable` tallies for the full grid at p_max = 1500,
    /// q grid {3,5,...,31} (odd), defaults elsewhere.  These counts pin
    /// the structural gates (case dispatch) of every table: a gate
    /// transcription error changes a count even when no mismatch occurs.
    #[test]
    fn suite_parity_tallies_frozen() {
        let ids: Vec<CheckId> = CheckId::ALL
            .into_iter()
            .filter(|id| !matches!(id, CheckId::Lemma2_7 | CheckId::Lemma2_8))
            .collect();
        let mut cfg = RunConfig::new(ids, 1500);
        cfg.q = Some(vec![3, 5, 7, 11, 13, 15, 17, 19, 23, 29, 31]);
        cfg.jobs = 4;
        let summary = run_suite(&cfg, |_| {}).unwrap();
        let expected: &[(CheckId, u64)] = &[
            (CheckId::Thm3_1, 112),
            (CheckId::Thm3_2, 394),
            (CheckId::Cor3_1, 22),
            (CheckId::Thm3_3, 226),
            (CheckId::Thm3_4, 139),
            (CheckId::Thm3_5, 193),
            (CheckId::Thm4_1, 328),
            (CheckId::Cor4_1, 108),
            (CheckId::Thm4_2, 164),
            (CheckId::Cor4_2, 114),
            (CheckId::Thm4_3, 296),
            (CheckId::Cor4_3, 136),
            (CheckId::Thm4_4, 50),
            (CheckId::Cor4_4, 22),
            (CheckId::Cor4_5, 50),
            (CheckId::Thm4_5, 264),
            (CheckId::Thm5_1, 214),
            (CheckId::Cor5_1, 104),
            (CheckId::Thm5_2, 308),
            (CheckId::Cor5_2, 204),
            (CheckId::Eq5_5, 116),
            (CheckId::Thm6_1, 214),
            (CheckId::Thm6_2, 102),
            (CheckId::Thm6_3, 234),
            (CheckId::Thm6_4, 101),
            (CheckId::Thm7_1, 273),
            (CheckId::Cor7_1, 123),
            (CheckId::Thm7_2, 126),
            (CheckId::Lemma2_9, 575),
            (CheckId::Lemma2_12, 690),
            (CheckId::Lemma2_13, 690),
        ];
        let got: BTreeMap<CheckId, CheckTally> = summary.tallies.iter().cloned().collect();
        for &(id, applicable) in expected {
            let t = got.get(&id).unwrap_or_else(|| panic!("no tally for {id}"));
            assert_eq!(t.applicable, applicable, "{id}: applicable count drifted");
            assert_eq!(t.mismatched, 0, "{id}: mismatches");
            assert_eq!(t.variant_dependent, 0, "{id}: variant-dependent records");
            assert_eq!(t.counterexamples, 0, "{id}: counterexamples");
        }
        assert_eq!(summary.counterexample_count, 0);
    }
}
