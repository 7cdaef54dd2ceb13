//! Two-argument special means, the ordering chain between them, and the
//! four logarithmic-identric propositions checked numerically.
//!
//! Arguments are sorted before evaluation so every mean is bit-symmetric.
//! Logarithmic, identric and p-logarithmic means switch to a series around
//! the diagonal when `|b - a| < 1e-8 max(a, b)`, and are otherwise computed
//! in log space so `b^b` and `b^(p+1)` never overflow.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::classes::{check_membership, ClassSpec, MembershipVerdict, SearchConfig};
use crate::error::{Error, Result};
use crate::funcat::{builtin_f, builtin_h, validate_s, FName, HName};
use crate::hadamard::{TheoremId, REL_SLACK};
use crate::interval::Interval;
use crate::quad::{integral_mean, DEFAULT_TOL};

/// Relative width below which the diagonal series are used.
pub const NEAR_DIAGONAL: f64 = 1e-8;

/// Relative slack for the ordering chain; absorbs a few ulps of rounding
/// when two means nearly coincide.
pub const CHAIN_REL_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeanKind {
    Arithmetic,
    Geometric,
    Harmonic,
    Quadratic,
    Logarithmic,
    Identric,
    PLogarithmic(f64),
}

impl MeanKind {
    /// `L_p`, with `p = 0` mapped to the identric and `p = -1` to the
    /// logarithmic mean.
    pub fn p_logarithmic(p: f64) -> MeanKind {
        if p == 0.0 {
            MeanKind::Identric
        } else if p == -1.0 {
            MeanKind::Logarithmic
        } else {
            MeanKind::PLogarithmic(p)
        }
    }

    pub fn parse(name: &str) -> Result<MeanKind> {
        let kind = match name {
            "arithmetic" | "A" => MeanKind::Arithmetic,
            "geometric" | "G" => MeanKind::Geometric,
            "harmonic" | "H" => MeanKind::Harmonic,
            "quadratic" | "K" => MeanKind::Quadratic,
            "logarithmic" | "L" => MeanKind::Logarithmic,
            "identric" | "I" => MeanKind::Identric,
            _ => {
                let p = name
                    .strip_prefix("p_logarithmic(")
                    .and_then(|r| r.strip_suffix(')'))
                    .and_then(|p| p.trim().parse::<f64>().ok())
                    .filter(|p| p.is_finite());
                match p {
                    Some(p) => MeanKind::p_logarithmic(p),
                    None => {
                        return Err(Error::UnknownName {
                            what: "mean",
                            name: name.to_owned(),
                        })
                    }
                }
            }
        };
        Ok(kind)
    }

    pub fn symbol(self) -> &'static str {
        match self {
            MeanKind::Arithmetic => "A",
            MeanKind::Geometric => "G",
            MeanKind::Harmonic => "H",
            MeanKind::Quadratic => "K",
            MeanKind::Logarithmic => "L",
            MeanKind::Identric => "I",
            MeanKind::PLogarithmic(_) => "L_p",
        }
    }
}

impl fmt::Display for MeanKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeanKind::Arithmetic => f.write_str("arithmetic"),
            MeanKind::Geometric => f.write_str("geometric"),
            MeanKind::Harmonic => f.write_str("harmonic"),
            MeanKind::Quadratic => f.write_str("quadratic"),
            MeanKind::Logarithmic => f.write_str("logarithmic"),
            MeanKind::Identric => f.write_str("identric"),
            MeanKind::PLogarithmic(p) => write!(f, "p_logarithmic({p})"),
        }
    }
}

impl Serialize for MeanKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn check_args(kind: MeanKind, a: f64, b: f64) -> Result<()> {
    let strict = !matches!(
        kind,
        MeanKind::Arithmetic | MeanKind::Geometric | MeanKind::Quadratic | MeanKind::Harmonic
    );
    for v in [a, b] {
        let bad = !v.is_finite() || v < 0.0 || (strict && v == 0.0);
        if bad {
            return Err(Error::InvalidParameter {
                name: "mean argument",
                value: v,
                reason: if strict {
                    "must be positive and finite"
                } else {
                    "must be non-negative and finite"
                },
            });
        }
    }
    if kind == MeanKind::Harmonic && a + b == 0.0 {
        return Err(Error::InvalidParameter {
            name: "harmonic mean argument sum",
            value: 0.0,
            reason: "must be positive",
        });
    }
    Ok(())
}

/// Value of the mean `kind` at `(a, b)`.
pub fn mean(kind: MeanKind, a: f64, b: f64) -> Result<f64> {
    check_args(kind, a, b)?;
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    if lo == hi {
        return Ok(lo);
    }
    let near = hi - lo < NEAR_DIAGONAL * hi;
    let arith = 0.5 * lo + 0.5 * hi;
    // relative half-gap (b - a)/(b + a)
    let delta = (hi - lo) / (hi + lo);
    let d2 = delta * delta;
    Ok(match kind {
        MeanKind::Arithmetic => arith,
        MeanKind::Geometric => lo.sqrt() * hi.sqrt(),
        MeanKind::Harmonic => 2.0 * lo * (hi / (lo + hi)),
        MeanKind::Quadratic => lo.hypot(hi) * std::f64::consts::FRAC_1_SQRT_2,
        MeanKind::Logarithmic if near => arith / (1.0 + d2 / 3.0 + d2 * d2 / 5.0),
        MeanKind::Logarithmic => log_mean(lo, hi),
        MeanKind::Identric if near => arith * (-d2 / 6.0 - d2 * d2 / 20.0).exp(),
        MeanKind::Identric => ln_identric_sorted(lo, hi).exp(),
        MeanKind::PLogarithmic(0.0) => return mean(MeanKind::Identric, lo, hi),
        MeanKind::PLogarithmic(-1.0) => return mean(MeanKind::Logarithmic, lo, hi),
        MeanKind::PLogarithmic(p) => {
            if !p.is_finite() {
                return Err(Error::InvalidParameter {
                    name: "p",
                    value: p,
                    reason: "must be finite",
                });
            }
            if near {
                let c2 = p * (p - 1.0) / 6.0;
                let c4 = p * (p - 1.0) * (p - 2.0) * (p - 3.0) / 120.0;
                arith * ((c2 * d2 + c4 * d2 * d2).ln_1p() / p).exp()
            } else {
                hi * (ln_p_ratio(lo, hi, p) / p).exp()
            }
        }
    })
}

fn log_mean(lo: f64, hi: f64) -> f64 {
    (hi - lo) / ((hi - lo) / lo).ln_1p()
}

/// `ln I = ln b - 1 + a / L(a, b)`.
fn ln_identric_sorted(lo: f64, hi: f64) -> f64 {
    hi.ln() - 1.0 + lo / log_mean(lo, hi)
}

/// `ln |e^c - 1|` for `c != 0`, without overflow for large `c`.
fn ln_abs_expm1(c: f64) -> f64 {
    if c > 0.0 {
        c + (-(-c).exp_m1()).ln()
    } else {
        (-c.exp_m1()).ln()
    }
}

/// `ln[(1 - r^(p+1)) / ((p+1)(1 - r))]` with `r = lo/hi`; the `p`-th power of
/// `L_p / hi`.
fn ln_p_ratio(lo: f64, hi: f64, p: f64) -> f64 {
    let lr = (-(hi - lo) / hi).ln_1p();
    let q = p + 1.0;
    ln_abs_expm1(q * lr) - q.abs().ln() - ln_abs_expm1(lr)
}

/// `L_p(a, b)`; `p = 0` and `p = -1` give the identric and logarithmic means.
pub fn p_log_mean(a: f64, b: f64, p: f64) -> Result<f64> {
    mean(MeanKind::p_logarithmic(p), a, b)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NamedMean {
    pub name: &'static str,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainLink {
    pub lhs: &'static str,
    pub rhs: &'static str,
    pub margin: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainReport {
    pub a: f64,
    pub b: f64,
    pub means: Vec<NamedMean>,
    pub links: Vec<ChainLink>,
    pub holds: bool,
}

/// The chain `H <= G <= L <= I <= A <= K`.
pub fn chain_check(a: f64, b: f64) -> Result<ChainReport> {
    let kinds = [
        MeanKind::Harmonic,
        MeanKind::Geometric,
        MeanKind::Logarithmic,
        MeanKind::Identric,
        MeanKind::Arithmetic,
        MeanKind::Quadratic,
    ];
    let mut means = Vec::with_capacity(kinds.len());
    for k in kinds {
        means.push(NamedMean {
            name: k.symbol(),
            value: mean(k, a, b)?,
        });
    }
    let links: Vec<ChainLink> = means
        .windows(2)
        .map(|w| {
            let margin = w[1].value - w[0].value;
            ChainLink {
                lhs: w[0].name,
                rhs: w[1].name,
                margin,
                holds: margin >= -CHAIN_REL_SLACK * w[1].value.abs(),
            }
        })
        .collect();
    let holds = links.iter().all(|l| l.holds);
    Ok(ChainReport {
        a,
        b,
        means,
        links,
        holds,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PropositionId(u8);

impl PropositionId {
    pub const ALL: [PropositionId; 4] = [
        PropositionId(1),
        PropositionId(2),
        PropositionId(3),
        PropositionId(4),
    ];

    pub fn new(id: u8) -> Result<Self> {
        if (1..=4).contains(&id) {
            Ok(PropositionId(id))
        } else {
            Err(Error::UnknownName {
                what: "proposition",
                name: id.to_string(),
            })
        }
    }

    pub fn get(self) -> u8 {
        self.0
    }

    /// The inequality whose `h(t) = t` specialization each proposition uses.
    pub fn source_theorem(self) -> TheoremId {
        match self.0 {
            2 => TheoremId::HsSandwich,
            4 => TheoremId::HsBullen,
            _ => TheoremId::HsSymmetricUpper,
        }
    }
}

impl Serialize for PropositionId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u8(self.0)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PropositionReport {
    pub id: PropositionId,
    pub a: f64,
    pub b: f64,
    pub s: f64,
    pub source_theorem: TheoremId,
    /// Lower bound; only proposition 2 has one.
    pub left: Option<f64>,
    /// `ln I(a, b)` from the closed form.
    pub middle: f64,
    /// `ln I(a, b)` as the integral mean of `ln`, with its error bound.
    pub middle_quadrature: f64,
    pub quadrature_error: f64,
    pub right_printed: f64,
    pub right_derived: f64,
    pub holds_as_printed: bool,
    pub holds_as_derived: bool,
    /// Membership of `ln` in the `h(t) = t` second-sense class at `s`;
    /// absent when `a = b`.
    pub hypothesis: Option<MembershipVerdict>,
    pub hypothesis_established: Option<bool>,
}

fn le_with_slack(lhs: f64, rhs: f64, err: f64) -> bool {
    rhs - lhs >= -(err + REL_SLACK * lhs.abs().max(rhs.abs()))
}

/// Checks one proposition at `(a, b, s)`. The printed bounds are evaluated
/// literally from the means; the derived bounds substitute `f = ln` and
/// `h(t) = t` into the source theorem.
pub fn proposition_check(
    id: PropositionId,
    a: f64,
    b: f64,
    s: f64,
    search: &SearchConfig,
) -> Result<PropositionReport> {
    for v in [a, b] {
        if !(v.is_finite() && v > 2.0) {
            return Err(Error::InvalidParameter {
                name: "proposition argument",
                value: v,
                reason: "must be finite and greater than 2",
            });
        }
    }
    if a > b {
        return Err(Error::InvalidInterval {
            a,
            b,
            reason: "propositions take a <= b",
        });
    }
    let s = validate_s(s)?;
    let inv = 1.0 / (s + 1.0);
    let (la, lb) = (a.ln(), b.ln());
    let arith_logs = mean(MeanKind::Arithmetic, la, lb).unwrap_or(0.5 * (la + lb));
    let ln_arith = mean(MeanKind::Arithmetic, a, b)?.ln();
    let ln_geo_sq = 2.0 * mean(MeanKind::Geometric, a, b)?.ln();
    let middle = mean(MeanKind::Identric, a, b)?.ln();

    let (left, right_printed, right_derived) = match id.0 {
        1 => (None, 2.0 * inv * arith_logs, (la + lb) * inv),
        2 => (
            Some(2f64.powf(s - 1.0) * ln_arith),
            inv * arith_logs,
            0.5 * (la + lb) * (2.0 * inv),
        ),
        3 => (None, inv * ln_geo_sq, (la + lb) * inv),
        _ => (
            None,
            inv * (0.5 * ln_geo_sq + ln_arith),
            (0.5 * (la + lb) + (0.5 * (a + b)).ln()) * inv,
        ),
    };

    let (middle_quadrature, quadrature_error, hypothesis) = if a == b {
        (middle, 0.0, None)
    } else {
        let iv = Interval::new(a, b)?;
        let ln = builtin_f(FName::Ln, iv)?;
        let q = integral_mean(&ln, iv, DEFAULT_TOL)?;
        let spec = ClassSpec::hs_second(builtin_h(HName::Identity), s)?;
        let verdict = check_membership(&spec, &ln, iv, search)?;
        (q.value, q.error_estimate, Some(verdict))
    };
    let err = quadrature_error + (middle - middle_quadrature).abs();
    let left_ok = left.is_none_or(|l| le_with_slack(l, middle, err));
    let holds_as_printed = left_ok && le_with_slack(middle, right_printed, err);
    let holds_as_derived = left_ok && le_with_slack(middle, right_derived, err);
    let hypothesis_established = hypothesis.as_ref().map(MembershipVerdict::is_member);
    Ok(PropositionReport {
        id,
        a,
        b,
        s,
        source_theorem: id.source_theorem(),
        left,
        middle,
        middle_quadrature,
        quadrature_error,
        right_printed,
        right_derived,
        holds_as_printed,
        holds_as_derived,
        hypothesis,
        hypothesis_established,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const ALL_FIXED: [MeanKind; 6] = [
        MeanKind::Arithmetic,
        MeanKind::Geometric,
        MeanKind::Harmonic,
        MeanKind::Quadratic,
        MeanKind::Logarithmic,
        MeanKind::Identric,
    ];

    fn close(x: f64, y: f64, rel: f64) -> bool {
        (x - y).abs() <= rel * y.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn examples() {
        assert_eq!(mean(MeanKind::Arithmetic, 2.0, 4.0).unwrap(), 3.0);
        assert!(close(
            mean(MeanKind::Harmonic, 2.0, 6.0).unwrap(),
            3.0,
            1e-15
        ));
        assert!(close(
            mean(MeanKind::Quadratic, 1.0, 7.0).unwrap(),
            5.0,
            1e-15
        ));
        let e = std::f64::consts::E;
        assert!(close(
            mean(MeanKind::Logarithmic, 1.0, e).unwrap(),
            e - 1.0,
            1e-14
        ));
        assert!(close(
            mean(MeanKind::Identric, 1.0, e).unwrap(),
            (1.0 / (e - 1.0)).exp(),
            1e-14
        ));
        assert!(
            (mean(MeanKind::Identric, 1.0, e).unwrap() - 1.789_572_396_841_833_6).abs() < 1e-14
        );
    }

    #[test]
    fn p_log_examples() {
        assert!(close(p_log_mean(1.0, 2.0, 1.0).unwrap(), 1.5, 1e-15));
        assert!(close(
            p_log_mean(1.0, 2.0, 2.0).unwrap(),
            (7.0f64 / 3.0).sqrt(),
            1e-14
        ));
        let ident = mean(MeanKind::Identric, 1.0, 2.0).unwrap();
        assert!(close(ident, 4.0 / std::f64::consts::E, 1e-14));
        assert!((p_log_mean(1.0, 2.0, 1e-7).unwrap() - ident).abs() < 1e-7);
        assert_eq!(p_log_mean(1.0, 2.0, 0.0).unwrap(), ident);
        assert_eq!(
            p_log_mean(1.0, 2.0, -1.0).unwrap(),
            mean(MeanKind::Logarithmic, 1.0, 2.0).unwrap()
        );
        // L_{-2} is the geometric mean
        assert!(close(p_log_mean(3.0, 12.0, -2.0).unwrap(), 6.0, 1e-14));
    }

    #[test]
    fn domain_errors() {
        assert!(mean(MeanKind::Logarithmic, 0.0, 1.0).is_err());
        assert!(mean(MeanKind::Identric, 1.0, -1.0).is_err());
        assert!(mean(MeanKind::Harmonic, 0.0, 0.0).is_err());
        assert!(mean(MeanKind::Arithmetic, f64::NAN, 1.0).is_err());
        assert_eq!(mean(MeanKind::Geometric, 0.0, 4.0).unwrap(), 0.0);
        assert!(MeanKind::parse("median").is_err());
        assert_eq!(
            MeanKind::parse("p_logarithmic(2.5)").unwrap(),
            MeanKind::PLogarithmic(2.5)
        );
        assert_eq!(
            MeanKind::parse("p_logarithmic(0)").unwrap(),
            MeanKind::Identric
        );
    }

    #[test]
    fn chain_examples() {
        let r = chain_check(2.0, 4.0).unwrap();
        let want = [
            8.0 / 3.0,
            2.0 * 2f64.sqrt(),
            2.0 / 2f64.ln(),
            8.0 / std::f64::consts::E,
            3.0,
            10f64.sqrt(),
        ];
        for (m, w) in r.means.iter().zip(want) {
            assert!(close(m.value, w, 1e-14), "{}: {} vs {w}", m.name, m.value);
        }
        assert!(r.holds && r.links.len() == 5);
        let d = chain_check(5.0, 5.0).unwrap();
        assert!(d.means.iter().all(|m| m.value == 5.0));
        assert!(d.holds);
    }

    #[test]
    fn chain_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..1000 {
            let (a, b) = (rng.random_range(0.1..100.0), rng.random_range(0.1..100.0));
            assert!(chain_check(a, b).unwrap().holds, "({a}, {b})");
        }
    }

    #[test]
    fn near_diagonal_is_continuous() {
        // just inside and just outside the series threshold
        for a in [0.3, 2.0, 1234.5] {
            for rel in [0.99e-8, 1.01e-8] {
                let b = a * (1.0 + rel);
                let ar = mean(MeanKind::Arithmetic, a, b).unwrap();
                for k in [
                    MeanKind::Logarithmic,
                    MeanKind::Identric,
                    MeanKind::PLogarithmic(-3.0),
                    MeanKind::PLogarithmic(0.5),
                    MeanKind::PLogarithmic(2.0),
                ] {
                    let v = mean(k, a, b).unwrap();
                    assert!(close(v, ar, 1e-14), "{k} at ({a}, {b}): {v} vs {ar}");
                }
            }
        }
    }

    #[test]
    fn large_arguments_do_not_overflow() {
        let i = mean(MeanKind::Identric, 1e5, 1e6).unwrap();
        assert!(i.is_finite() && i > 1e5 && i < 1e6);
        for p in [-5.0, -2.0, 3.0, 5.0] {
            let v = p_log_mean(1e-3, 1e6, p).unwrap();
            assert!(v.is_finite() && v > 1e-3 && v < 1e6, "p={p}: {v}");
        }
        let big = p_log_mean(1e300, 1.5e300, 3.0).unwrap();
        assert!(big.is_finite());
    }

    #[test]
    fn symmetry_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let (a, b) = (rng.random_range(0.01..50.0), rng.random_range(0.01..50.0));
            for k in ALL_FIXED.into_iter().chain([MeanKind::PLogarithmic(2.5)]) {
                assert_eq!(mean(k, a, b).unwrap(), mean(k, b, a).unwrap());
            }
        }
    }

    #[test]
    fn homogeneity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let (a, b) = (rng.random_range(0.1..20.0), rng.random_range(0.1..20.0));
            for k in ALL_FIXED
                .into_iter()
                .chain([MeanKind::PLogarithmic(-3.5), MeanKind::PLogarithmic(1.7)])
            {
                let m = mean(k, a, b).unwrap();
                for lambda in [0.5, 2.0, 10.0] {
                    let scaled = mean(k, lambda * a, lambda * b).unwrap();
                    assert!(close(scaled, lambda * m, 1e-12), "{k} ({a}, {b}) x{lambda}");
                }
            }
        }
    }

    #[test]
    fn p_log_monotone_in_p() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let (a, b) = (rng.random_range(0.1..100.0), rng.random_range(0.1..100.0));
            let mut prev = f64::NEG_INFINITY;
            for p in -5..=5 {
                let v = p_log_mean(a, b, p as f64).unwrap();
                assert!(v >= prev * (1.0 - 1e-14), "({a}, {b}) p={p}");
                prev = v;
            }
        }
    }

    #[test]
    fn ln_identric_is_integral_mean_of_ln() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let a = rng.random_range(2.0..50.0);
            let b = rng.random_range(2.0..50.0);
            if a == b {
                continue;
            }
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            let iv = Interval::new(lo, hi).unwrap();
            let q = integral_mean(&builtin_f(FName::Ln, iv).unwrap(), iv, 1e-12).unwrap();
            let li = mean(MeanKind::Identric, a, b).unwrap().ln();
            assert!((li - q.value).abs() <= 1e-8, "({a}, {b})");
        }
        let iv = Interval::new(2.0, 4.0).unwrap();
        let q = integral_mean(&builtin_f(FName::Ln, iv).unwrap(), iv, 1e-12).unwrap();
        assert!((q.value - 1.079_441_541_7).abs() <= 1e-10);
    }

    fn grid() -> SearchConfig {
        SearchConfig::with_grid(21)
    }

    #[test]
    fn proposition_one_fails_with_failed_hypothesis() {
        let r = proposition_check(PropositionId::new(1).unwrap(), 3.0, 5.0, 1.0, &grid()).unwrap();
        // ln I(3, 5) = (5 ln 5 - 3 ln 3)/2 - 1
        let want = 0.5 * (5.0 * 5f64.ln() - 3.0 * 3f64.ln()) - 1.0;
        assert!((r.middle - want).abs() < 1e-14);
        assert!((r.middle - r.middle_quadrature).abs() < 1e-10);
        assert!((r.right_printed - 0.5 * (3f64.ln() + 5f64.ln())).abs() < 1e-15);
        assert!(!r.holds_as_printed && !r.holds_as_derived);
        assert_eq!(r.hypothesis_established, Some(false));
        assert_eq!(r.source_theorem, TheoremId::HsSymmetricUpper);
    }

    #[test]
    fn proposition_two_printed_and_derived_differ() {
        let r = proposition_check(PropositionId::new(2).unwrap(), 3.0, 5.0, 0.5, &grid()).unwrap();
        assert!((r.right_derived - 2.0 * r.right_printed).abs() < 1e-14);
        assert!((r.left.unwrap() - 0.5f64.sqrt() * 4f64.ln()).abs() < 1e-14);
        assert!(!r.holds_as_printed);
        assert!(r.holds_as_derived);
    }

    #[test]
    fn proposition_four_example() {
        let r = proposition_check(PropositionId::new(4).unwrap(), 3.0, 5.0, 1.0, &grid()).unwrap();
        let want = 0.5 * (0.5 * (3f64.ln() + 5f64.ln()) + 4f64.ln());
        assert!((r.right_printed - want).abs() < 1e-14);
        assert!((r.right_derived - want).abs() < 1e-14);
        assert!((r.right_printed - 1.3701).abs() < 1e-4);
        assert!(!r.holds_as_printed);
        assert_eq!(r.hypothesis_established, Some(false));
    }

    #[test]
    fn printed_and_derived_agree_except_proposition_two() {
        for id in PropositionId::ALL {
            let r = proposition_check(id, 2.5, 7.0, 0.3, &grid()).unwrap();
            let same = (r.right_printed - r.right_derived).abs() < 1e-13;
            assert_eq!(same, id.get() != 2, "proposition {}", id.get());
        }
    }

    #[test]
    fn diagonal_is_equality() {
        for id in PropositionId::ALL {
            let r = proposition_check(id, 3.0, 3.0, 1.0, &grid()).unwrap();
            assert!((r.middle - 3f64.ln()).abs() < 1e-15);
            assert!(r.hypothesis.is_none());
            if id.get() != 2 {
                assert!((r.right_printed - 3f64.ln()).abs() < 1e-15);
                assert!(r.holds_as_printed);
            }
        }
    }

    #[test]
    fn proposition_preconditions() {
        let p1 = PropositionId::new(1).unwrap();
        assert!(proposition_check(p1, 1.0, 5.0, 1.0, &grid()).is_err());
        assert!(proposition_check(p1, 5.0, 3.0, 1.0, &grid()).is_err());
        assert!(proposition_check(p1, 3.0, 5.0, 0.0, &grid()).is_err());
        assert!(PropositionId::new(5).is_err());
    }
}
