//! Both sides of each Hadamard-type inequality, with margins.
//!
//! Every report names its compared quantities `left` (when the inequality
//! is two-sided), `middle` and `right`, plus the auxiliary terms they are
//! built from (endpoint values, weight integrals, `M` and `N`). Each term
//! carries an absolute error bound inherited from quadrature; a comparison
//! holds when `right - left >= -(errors + 1e-9 * scale)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::classes::{check_membership, ClassKind, ClassSpec, MembershipVerdict, SearchConfig};
use crate::error::{Error, Result};
use crate::funcat::{builtin_h, h_power, validate_s, HName, HPower, RealFunction};
use crate::interval::Interval;
use crate::quad::{integrate_unit_pair, integrate_with, QuadConfig, QuadResult, DEFAULT_TOL};
use crate::specfun::beta;

/// Relative slack added to every comparison.
pub const REL_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremId {
    HhClassic,
    Bullen,
    PHadamard,
    PachpatteProduct,
    SConvexHadamard,
    HsUpper,
    HsSandwich,
    HsProduct,
    HsSymmetricUpper,
    HsBullen,
}

impl TheoremId {
    pub const ALL: [TheoremId; 10] = [
        TheoremId::HhClassic,
        TheoremId::Bullen,
        TheoremId::PHadamard,
        TheoremId::PachpatteProduct,
        TheoremId::SConvexHadamard,
        TheoremId::HsUpper,
        TheoremId::HsSandwich,
        TheoremId::HsProduct,
        TheoremId::HsSymmetricUpper,
        TheoremId::HsBullen,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::HhClassic => "hh_classic",
            TheoremId::Bullen => "bullen",
            TheoremId::PHadamard => "p_hadamard",
            TheoremId::PachpatteProduct => "pachpatte_product",
            TheoremId::SConvexHadamard => "s_convex_hadamard",
            TheoremId::HsUpper => "hs_upper",
            TheoremId::HsSandwich => "hs_sandwich",
            TheoremId::HsProduct => "hs_product",
            TheoremId::HsSymmetricUpper => "hs_symmetric_upper",
            TheoremId::HsBullen => "hs_bullen",
        }
    }

    pub fn uses_g(self) -> bool {
        matches!(self, TheoremId::PachpatteProduct | TheoremId::HsProduct)
    }

    pub fn uses_h(self) -> bool {
        matches!(
            self,
            TheoremId::HsUpper
                | TheoremId::HsSandwich
                | TheoremId::HsProduct
                | TheoremId::HsSymmetricUpper
                | TheoremId::HsBullen
        )
    }

    pub fn uses_s(self) -> bool {
        self.uses_h() || self == TheoremId::SConvexHadamard
    }

    /// The class each theorem assumes its function(s) belong to.
    pub fn hypothesis_class(self) -> ClassKind {
        match self {
            TheoremId::HhClassic | TheoremId::Bullen | TheoremId::PachpatteProduct => {
                ClassKind::Convex
            }
            TheoremId::PHadamard => ClassKind::PFunction,
            TheoremId::SConvexHadamard => ClassKind::SConvex2,
            _ => ClassKind::HsSecond,
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::UnknownName {
                what: "theorem",
                name: s.to_owned(),
            })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Term {
    pub label: String,
    pub value: f64,
    /// Absolute error bound; zero for directly evaluated quantities.
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub lhs: String,
    pub rhs: String,
    pub lhs_value: f64,
    pub rhs_value: f64,
    /// `rhs - lhs`.
    pub margin: f64,
    /// Allowed shortfall: both error bounds plus the relative slack.
    pub slack: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct HypothesisCheck {
    pub class: ClassKind,
    pub verdicts: Vec<MembershipVerdict>,
    pub established: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct InequalityReport {
    pub theorem: TheoremId,
    pub f: String,
    pub g: Option<String>,
    pub h: Option<String>,
    pub s: Option<f64>,
    pub interval: Interval,
    pub terms: Vec<Term>,
    pub comparisons: Vec<Comparison>,
    pub holds: bool,
    /// False when some quadrature hit its budget.
    pub converged: bool,
    pub hypothesis: Option<HypothesisCheck>,
    pub notes: Vec<String>,
}

impl InequalityReport {
    pub fn term(&self, label: &str) -> Option<&Term> {
        self.terms.iter().find(|t| t.label == label)
    }

    pub fn value(&self, label: &str) -> Option<f64> {
        self.term(label).map(|t| t.value)
    }

    /// Whether the theorem's hypothesis was checked and failed.
    pub fn hypothesis_not_established(&self) -> bool {
        self.hypothesis.as_ref().is_some_and(|h| !h.established)
    }
}

/// `M = f(a)g(a) + f(b)g(b)` and `N = f(a)g(b) + f(b)g(a)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProductEndpointTerms {
    #[serde(rename = "M")]
    pub m: f64,
    #[serde(rename = "N")]
    pub n: f64,
}

pub fn endpoint_terms(
    f: &RealFunction,
    g: &RealFunction,
    interval: Interval,
) -> Result<ProductEndpointTerms> {
    let (a, b) = (interval.a(), interval.b());
    let (fa, fb, ga, gb) = (f.eval(a)?, f.eval(b)?, g.eval(a)?, g.eval(b)?);
    Ok(ProductEndpointTerms {
        m: fa * ga + fb * gb,
        n: fa * gb + fb * ga,
    })
}

/// Everything a theorem evaluation needs.
#[derive(Debug, Clone)]
pub struct TheoremInput {
    pub f: RealFunction,
    pub g: Option<RealFunction>,
    pub h: Option<RealFunction>,
    pub s: Option<f64>,
    pub interval: Interval,
    pub quad_tol: f64,
    pub check_hypothesis: bool,
    pub search: SearchConfig,
}

impl TheoremInput {
    pub fn new(f: RealFunction, interval: Interval) -> Self {
        TheoremInput {
            f,
            g: None,
            h: None,
            s: None,
            interval,
            quad_tol: DEFAULT_TOL,
            check_hypothesis: false,
            search: SearchConfig::default(),
        }
    }

    pub fn g(mut self, g: RealFunction) -> Self {
        self.g = Some(g);
        self
    }

    pub fn h(mut self, h: RealFunction) -> Self {
        self.h = Some(h);
        self
    }

    pub fn s(mut self, s: f64) -> Self {
        self.s = Some(s);
        self
    }

    pub fn quad_tol(mut self, tol: f64) -> Self {
        self.quad_tol = tol;
        self
    }

    pub fn check_hypothesis(mut self, search: SearchConfig) -> Self {
        self.check_hypothesis = true;
        self.search = search;
        self
    }
}

struct Builder {
    terms: Vec<Term>,
    comparisons: Vec<Comparison>,
    converged: bool,
}

impl Builder {
    fn new() -> Self {
        Builder {
            terms: Vec::new(),
            comparisons: Vec::new(),
            converged: true,
        }
    }

    fn exact(&mut self, label: &str, value: f64) -> f64 {
        self.with_error(label, value, 0.0)
    }

    fn with_error(&mut self, label: &str, value: f64, error: f64) -> f64 {
        self.terms.push(Term {
            label: label.to_owned(),
            value,
            error,
        });
        value
    }

    fn quad(&mut self, label: &str, r: QuadResult) -> (f64, f64) {
        self.converged &= r.converged;
        self.with_error(label, r.value, r.error_estimate);
        (r.value, r.error_estimate)
    }

    fn get(&self, label: &str) -> &Term {
        self.terms
            .iter()
            .find(|t| t.label == label)
            .expect("compared terms are recorded first")
    }

    fn compare(&mut self, lhs: &str, rhs: &str) {
        let (l, r) = (self.get(lhs).clone(), self.get(rhs).clone());
        let margin = r.value - l.value;
        let slack = l.error + r.error + REL_SLACK * l.value.abs().max(r.value.abs());
        self.comparisons.push(Comparison {
            lhs: lhs.to_owned(),
            rhs: rhs.to_owned(),
            lhs_value: l.value,
            rhs_value: r.value,
            margin,
            slack,
            holds: margin >= -slack,
        });
    }
}

fn integral_mean_of<F>(mut f: F, iv: Interval, tol: f64) -> Result<QuadResult>
where
    F: FnMut(f64) -> crate::expr::EvalOutcome,
{
    let cfg = QuadConfig::with_tol(tol * iv.width());
    Ok(integrate_with(&mut f, iv, &cfg)?.scaled(1.0 / iv.width()))
}

fn weight_integral<F>(mut phi: F, tol: f64) -> Result<QuadResult>
where
    F: FnMut(f64, f64) -> crate::expr::EvalOutcome,
{
    integrate_unit_pair(&mut phi, &QuadConfig::with_tol(tol))
}

/// Evaluates one inequality and, optionally, its hypothesis.
pub fn evaluate_theorem(id: TheoremId, input: &TheoremInput) -> Result<InequalityReport> {
    let mut notes = Vec::new();
    let iv = input.interval;
    let tol = input.quad_tol;
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidParameter {
            name: "quadrature tolerance",
            value: tol,
            reason: "must be positive and finite",
        });
    }

    let g = if id.uses_g() {
        Some(match &input.g {
            Some(g) => g.clone(),
            None => {
                notes.push("g defaulted to f".to_owned());
                input.f.clone()
            }
        })
    } else {
        if input.g.is_some() {
            return Err(Error::InvalidArgument(format!(
                "theorem {id} takes a single function; g must be absent"
            )));
        }
        None
    };
    let s = if id.uses_s() {
        let s = input
            .s
            .ok_or_else(|| Error::InvalidArgument(format!("theorem {id} requires s")))?;
        Some(validate_s(s)?)
    } else {
        if input.s.is_some() {
            notes.push(format!("s is not used by {id}"));
        }
        None
    };
    let h = if id.uses_h() {
        Some(match &input.h {
            Some(h) => h.clone(),
            None => {
                notes.push("h defaulted to identity".to_owned());
                builtin_h(HName::Identity)
            }
        })
    } else {
        if input.h.is_some() {
            notes.push(format!("h is not used by {id}"));
        }
        None
    };
    let hp: Option<HPower> = match (&h, s) {
        (Some(h), Some(s)) => Some(h_power(h, s)?),
        _ => None,
    };

    let f = &input.f;
    let (a, b) = (iv.a(), iv.b());
    let mut out = Builder::new();
    let fa = out.exact("f_a", f.eval(a)?);
    let fb = out.exact("f_b", f.eval(b)?);
    let fmid = out.exact("f_mid", f.eval(iv.midpoint())?);
    let (mean, mean_err) = out.quad("mean", integral_mean_of(|x| f.eval(x), iv, tol)?);

    match id {
        TheoremId::HhClassic => {
            let k = out.exact("right_factor", 0.5);
            out.exact("left", fmid);
            out.with_error("middle", mean, mean_err);
            out.exact("right", k * (fa + fb));
            out.compare("left", "middle");
            out.compare("middle", "right");
        }
        TheoremId::Bullen => {
            let k = out.exact("right_factor", 0.5);
            out.with_error("middle", 2.0 * mean, 2.0 * mean_err);
            out.exact("right", k * (fa + fb + 2.0 * fmid));
            out.compare("middle", "right");
        }
        TheoremId::PHadamard => {
            let km = out.exact("middle_factor", 2.0);
            let kr = out.exact("right_factor", 2.0);
            out.exact("left", fmid);
            out.with_error("middle", km * mean, km * mean_err);
            out.exact("right", kr * (fa + fb));
            out.compare("left", "middle");
            out.compare("middle", "right");
        }
        TheoremId::PachpatteProduct | TheoremId::HsProduct => {
            let g = g.as_ref().expect("product theorems resolve g");
            let ga = out.exact("g_a", g.eval(a)?);
            let gb = out.exact("g_b", g.eval(b)?);
            let mn = endpoint_terms(f, g, iv)?;
            out.exact("M", mn.m);
            out.exact("N", mn.n);
            let (pm, pm_err) = out.quad(
                "product_mean",
                integral_mean_of(|x| Ok(f.eval(x)? * g.eval(x)?), iv, tol)?,
            );
            out.with_error("middle", pm, pm_err);
            if id == TheoremId::PachpatteProduct {
                let km = out.exact("m_coeff", 1.0 / 3.0);
                let kn = out.exact("n_coeff", 1.0 / 6.0);
                out.exact("right", km * mn.m + kn * mn.n);
            } else {
                let hp = hp.as_ref().expect("hs theorems resolve h^s");
                let (i1, e1) = out.quad(
                    "int_h2s_t",
                    weight_integral(|t, _| hp.eval(t).map(|w| w * w), tol)?,
                );
                let (i2, e2) = out.quad(
                    "int_h2s_1mt",
                    weight_integral(|_, u| hp.eval(u).map(|w| w * w), tol)?,
                );
                let (i3, e3) = out.quad(
                    "int_cross",
                    weight_integral(|t, u| Ok(hp.eval(t)? * hp.eval(u)?), tol)?,
                );
                let value = fa * ga * i1 + fb * gb * i2 + mn.n * i3;
                let err = (fa * ga).abs() * e1 + (fb * gb).abs() * e2 + mn.n.abs() * e3;
                out.with_error("right", value, err);
            }
            out.compare("middle", "right");
        }
        TheoremId::SConvexHadamard => {
            let s = s.expect("resolved");
            let kl = out.exact("left_factor", 2f64.powf(s - 1.0));
            let kr = out.exact("right_factor", 1.0 / (s + 1.0));
            out.exact("left", kl * fmid);
            out.with_error("middle", mean, mean_err);
            out.exact("right", kr * (fa + fb));
            out.compare("left", "middle");
            out.compare("middle", "right");
        }
        TheoremId::HsUpper => {
            let hp = hp.as_ref().expect("resolved");
            let (i1, e1) = out.quad("int_hs_t", weight_integral(|t, _| hp.eval(t), tol)?);
            let (i2, e2) = out.quad("int_hs_1mt", weight_integral(|_, u| hp.eval(u), tol)?);
            out.with_error("middle", mean, mean_err);
            out.with_error("right", fa * i1 + fb * i2, fa.abs() * e1 + fb.abs() * e2);
            out.compare("middle", "right");
        }
        TheoremId::HsSandwich => {
            let hp = hp.as_ref().expect("resolved");
            let half = out.exact("hs_half", hp.eval(0.5)?);
            if half == 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "h^s(1/2) = 0 for h = {}; the left factor 1/(2 h^s(1/2)) is undefined",
                    hp.h().name()
                )));
            }
            let kl = out.exact("left_factor", 1.0 / (2.0 * half));
            let (isum, esum) = out.quad(
                "int_hs_sum",
                weight_integral(|t, u| Ok(hp.eval(t)? + hp.eval(u)?), tol)?,
            );
            out.exact("left", kl * fmid);
            out.with_error("middle", mean, mean_err);
            let avg = 0.5 * (fa + fb);
            out.with_error("right", avg * isum, avg.abs() * esum);
            out.compare("left", "middle");
            out.compare("middle", "right");
        }
        TheoremId::HsSymmetricUpper | TheoremId::HsBullen => {
            let hp = hp.as_ref().expect("resolved");
            let (i, e) = out.quad("int_hs_t", weight_integral(|t, _| hp.eval(t), tol)?);
            let k = if id == TheoremId::HsSymmetricUpper {
                fa + fb
            } else {
                0.5 * (fa + fb) + fmid
            };
            out.with_error("middle", mean, mean_err);
            out.with_error("right", k * i, k.abs() * e);
            out.compare("middle", "right");
        }
    }

    let hypothesis = if input.check_hypothesis {
        let class = id.hypothesis_class();
        let spec = match class {
            ClassKind::Convex | ClassKind::PFunction => ClassSpec::new(class, None, None)?,
            ClassKind::SConvex2 => ClassSpec::new(class, None, s)?,
            _ => ClassSpec::new(class, h.clone(), s)?,
        };
        let mut verdicts = vec![check_membership(&spec, f, iv, &input.search)?];
        if let Some(g) = &g {
            verdicts.push(check_membership(&spec, g, iv, &input.search)?);
        }
        let established = verdicts.iter().all(MembershipVerdict::is_member);
        if !established {
            notes.push("hypothesis not established".to_owned());
        }
        Some(HypothesisCheck {
            class,
            verdicts,
            established,
        })
    } else {
        None
    };

    if !out.converged {
        notes.push("quadrature did not converge for at least one term".to_owned());
    }
    let holds = out.comparisons.iter().all(|c| c.holds);
    Ok(InequalityReport {
        theorem: id,
        f: f.name().to_owned(),
        g: g.map(|g| g.name().to_owned()),
        h: h.map(|h| h.name().to_owned()),
        s,
        interval: iv,
        terms: out.terms,
        comparisons: out.comparisons,
        holds,
        converged: out.converged,
        hypothesis,
        notes,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Coefficient {
    pub label: &'static str,
    pub value: f64,
}

/// Analytic values, for `h(t) = t`, of every coefficient a theorem's report
/// carries. Labels match the report's term labels.
pub fn closed_form_coefficients(id: TheoremId, s: f64) -> Result<Vec<Coefficient>> {
    let s = validate_s(s)?;
    let c = |label, value| Coefficient { label, value };
    let int_hs = 1.0 / (s + 1.0);
    Ok(match id {
        TheoremId::HhClassic | TheoremId::Bullen => vec![c("right_factor", 0.5)],
        TheoremId::PHadamard => vec![c("middle_factor", 2.0), c("right_factor", 2.0)],
        TheoremId::PachpatteProduct => vec![c("m_coeff", 1.0 / 3.0), c("n_coeff", 1.0 / 6.0)],
        TheoremId::SConvexHadamard => vec![
            c("left_factor", 2f64.powf(s - 1.0)),
            c("right_factor", int_hs),
        ],
        TheoremId::HsUpper => vec![c("int_hs_t", int_hs), c("int_hs_1mt", int_hs)],
        TheoremId::HsSandwich => vec![
            c("left_factor", 2f64.powf(s - 1.0)),
            c("int_hs_sum", 2.0 * int_hs),
        ],
        TheoremId::HsProduct => {
            let sq = 1.0 / (2.0 * s + 1.0);
            vec![
                c("int_h2s_t", sq),
                c("int_h2s_1mt", sq),
                c("int_cross", beta(s + 1.0, s + 1.0)?),
            ]
        }
        TheoremId::HsSymmetricUpper | TheoremId::HsBullen => vec![c("int_hs_t", int_hs)],
    })
}
