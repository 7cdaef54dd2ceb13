//! Adaptive Gauss-Kronrod (G7/K15) quadrature.
//!
//! Both rules are open: no abscissa sits on a panel endpoint, so integrands
//! that fail at `a` or `b` are fine as long as they are integrable. The
//! panel error estimate is `|K15 - G7|` plus a roundoff floor of
//! `2 eps * integral(|f|)`; the worst panel is always bisected first (ties go
//! to the leftmost), and the final sums run left to right, so results are
//! bit-reproducible.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::error::{DomainError, DomainReason, Error, Result};
use crate::expr::EvalOutcome;
use crate::funcat::RealFunction;
use crate::interval::Interval;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_BUDGET: usize = 200_000;

/// Kronrod abscissae on `[-1, 1]`, descending; odd indices are shared with G7.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss weights for `XGK[1], XGK[3], XGK[5], XGK[7]`.
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const POINTS_PER_PANEL: usize = 15;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    /// Absolute tolerance on the summed error estimate.
    pub tol: f64,
    /// Maximum number of integrand evaluations.
    pub budget: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            tol: DEFAULT_TOL,
            budget: DEFAULT_BUDGET,
        }
    }
}

impl QuadConfig {
    pub fn with_tol(tol: f64) -> Self {
        QuadConfig {
            tol,
            ..Default::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::InvalidParameter {
                name: "quadrature tolerance",
                value: self.tol,
                reason: "must be positive and finite",
            });
        }
        if self.budget < POINTS_PER_PANEL {
            return Err(Error::InvalidParameter {
                name: "quadrature budget",
                value: self.budget as f64,
                reason: "must allow at least one panel",
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl QuadResult {
    /// Multiplies value and error by `k`.
    pub fn scaled(self, k: f64) -> QuadResult {
        QuadResult {
            value: self.value * k,
            error_estimate: self.error_estimate * k.abs(),
            ..self
        }
    }

    fn combine(self, other: QuadResult) -> QuadResult {
        QuadResult {
            value: self.value + other.value,
            error_estimate: self.error_estimate + other.error_estimate,
            evaluations: self.evaluations + other.evaluations,
            converged: self.converged && other.converged,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    /// Larger error first; equal errors prefer the leftmost panel.
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn call<F>(f: &mut F, x: f64) -> Result<f64>
where
    F: FnMut(f64) -> EvalOutcome,
{
    match f(x) {
        Ok(v) if v.is_finite() => Ok(v),
        Ok(_) => Err(Error::QuadDomain {
            at: x,
            source: DomainError::new("integrand", x, DomainReason::NonFinite),
        }),
        Err(source) => Err(Error::QuadDomain { at: x, source }),
    }
}

/// One G7/K15 panel on `[a, b]`: `(kronrod, error)`.
fn gk15<F>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> EvalOutcome,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = call(f, center)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut resabs = fc.abs() * WGK[7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = call(f, center - dx)?;
        let f2 = call(f, center + dx)?;
        kronrod += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let err = ((kronrod - gauss) * half).abs() + 2.0 * f64::EPSILON * resabs * half.abs();
    Ok((kronrod * half, err))
}

/// Adaptive integration of an arbitrary integrand closure over `iv`.
pub fn integrate_with<F>(mut f: F, iv: Interval, config: &QuadConfig) -> Result<QuadResult>
where
    F: FnMut(f64) -> EvalOutcome,
{
    config.validate()?;
    let (value, error) = gk15(&mut f, iv.a(), iv.b())?;
    let mut evaluations = POINTS_PER_PANEL;
    let mut heap = BinaryHeap::new();
    heap.push(Panel {
        a: iv.a(),
        b: iv.b(),
        value,
        error,
    });
    let mut running = error;
    let mut converged = false;
    loop {
        if running <= config.tol {
            let exact: f64 = heap.iter().map(|p| p.error).sum();
            if exact <= config.tol {
                converged = true;
                break;
            }
            running = exact;
        }
        if evaluations + 2 * POINTS_PER_PANEL > config.budget {
            break;
        }
        let worst = heap.pop().expect("heap never empties");
        let mid = 0.5 * (worst.a + worst.b);
        if !(worst.a < mid && mid < worst.b) {
            heap.push(worst);
            break;
        }
        let (lv, le) = gk15(&mut f, worst.a, mid)?;
        let (rv, re) = gk15(&mut f, mid, worst.b)?;
        evaluations += 2 * POINTS_PER_PANEL;
        running += le + re - worst.error;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: lv,
            error: le,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: rv,
            error: re,
        });
    }
    let mut panels = heap.into_vec();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let value = panels.iter().map(|p| p.value).sum();
    let error_estimate: f64 = panels.iter().map(|p| p.error).sum();
    Ok(QuadResult {
        value,
        error_estimate,
        evaluations,
        converged: converged && error_estimate <= config.tol,
    })
}

/// `integral_0^1 phi(t, 1 - t) dt` where the integrand receives both `t` and
/// `1 - t`. Each half of `[0, 1]` is parametrized from its own endpoint, so
/// the small argument is always exact; this keeps weights like `(1-t)^-s`
/// integrable to full precision near `t = 1`.
pub fn integrate_unit_pair<F>(mut phi: F, config: &QuadConfig) -> Result<QuadResult>
where
    F: FnMut(f64, f64) -> EvalOutcome,
{
    config.validate()?;
    let half_cfg = QuadConfig {
        tol: 0.5 * config.tol,
        budget: config.budget / 2,
    };
    let half = Interval::new(0.0, 0.5)?;
    let left = integrate_with(|u| phi(u, 1.0 - u), half, &half_cfg)?;
    let right = integrate_with(|u| phi(1.0 - u, u), half, &half_cfg)?;
    Ok(left.combine(right))
}

/// `integral_a^b f(x) dx`.
pub fn integrate(f: &RealFunction, iv: Interval, tol: f64) -> Result<QuadResult> {
    integrate_with(|x| f.eval(x), iv, &QuadConfig::with_tol(tol))
}

/// `(1 / (b - a)) integral_a^b f(x) dx`, error scaled alike.
pub fn integral_mean(f: &RealFunction, iv: Interval, tol: f64) -> Result<QuadResult> {
    let raw = integrate_with(|x| f.eval(x), iv, &QuadConfig::with_tol(tol * iv.width()))?;
    Ok(raw.scaled(1.0 / iv.width()))
}
