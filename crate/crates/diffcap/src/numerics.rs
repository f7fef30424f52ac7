//! Special functions and bracketed scalar root finding.
//!
//! [`e1`] is the exponential integral `E1(x) = ∫_x^∞ exp(-y)/y dy`; every
//! closed-form concentration response of the 2-D diffusion kernel reduces to
//! differences of it. [`log_e1`] evaluates `ln E1(x)` without intermediate
//! underflow, which keeps the timing inversions well-conditioned at extreme
//! production rates. [`find_root`] is the secant-accelerated bisection used
//! by every solver in the crate.

use crate::error::{Error, Result};
use crate::scalar::{flt, positive_finite, Scalar};

/// Euler–Mascheroni constant, needed by the small-argument series of `E1`.
#[allow(clippy::excessive_precision)]
pub const EULER_GAMMA: f64 = 0.57721566490153286060651209008;

/// Largest argument for which `e1` still returns a normal f64 value;
/// past this point `E1(x) ~ exp(-x)/x` underflows and [`log_e1`] must be
/// used instead.
pub const E1_MAX_ARG: f64 = 700.0;

/// Regime switch of the `E1` evaluation: power series at or below,
/// continued fraction above.
const E1_SERIES_MAX: f64 = 1.0;

/// Convergence control for the iterative solvers.
///
/// A root is accepted once the bracket width drops below
/// `max(abs, rel * |root|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance<T> {
    pub rel: T,
    pub abs: T,
    pub max_iter: usize,
}

impl<T: Scalar> Tolerance<T> {
    pub fn new(rel: T, abs: T, max_iter: usize) -> Result<Self> {
        if !positive_finite(rel) || abs < T::zero() || abs.is_nan() {
            return Err(Error::Domain(format!(
                "tolerance requires rel > 0 and abs >= 0, got rel={rel}, abs={abs}"
            )));
        }
        if max_iter < 1 {
            return Err(Error::Domain("tolerance requires max_iter >= 1".into()));
        }
        Ok(Self { rel, abs, max_iter })
    }
}

impl<T: Scalar> Default for Tolerance<T> {
    fn default() -> Self {
        Self {
            rel: flt(1e-10),
            abs: flt(1e-12),
            max_iter: 200,
        }
    }
}

/// Exponential integral `E1(x) = ∫_x^∞ exp(-y)/y dy` for `x > 0`.
///
/// Strictly positive and strictly decreasing; relative accuracy a few ulps
/// of the scalar type (≤ 1e-12 for `f64`). Arguments above [`E1_MAX_ARG`]
/// are rejected because the value underflows; use [`log_e1`] there.
pub fn e1<T: Scalar>(x: T) -> Result<T> {
    if x.is_nan() || x <= T::zero() {
        return Err(Error::Domain(format!("e1: argument must be positive, got {x}")));
    }
    if x > flt(E1_MAX_ARG) {
        return Err(Error::Underflow(format!(
            "e1({x}) underflows the scalar type; use log_e1"
        )));
    }
    if x <= flt(E1_SERIES_MAX) {
        Ok(e1_series(x))
    } else {
        let cf = e1_continued_fraction(x)?;
        Ok(cf * (-x).exp())
    }
}

/// `ln E1(x)` for `x > 0`, computed without intermediate underflow.
///
/// For `x` above the series regime the continued fraction supplies
/// `E1(x) = exp(-x) * h(x)` and the log is assembled as `ln h(x) - x`,
/// which stays finite for any representable `x`.
pub fn log_e1<T: Scalar>(x: T) -> Result<T> {
    if x.is_nan() || x <= T::zero() {
        return Err(Error::Domain(format!(
            "log_e1: argument must be positive, got {x}"
        )));
    }
    if x <= flt(E1_SERIES_MAX) {
        Ok(e1_series(x).ln())
    } else {
        let cf = e1_continued_fraction(x)?;
        Ok(cf.ln() - x)
    }
}

/// `E1` with underflow flushed to zero. Residual functions built from
/// differences of `E1` use this so that a term beyond [`E1_MAX_ARG`]
/// contributes exactly the zero it rounds to.
pub(crate) fn e1_flush<T: Scalar>(x: T) -> T {
    debug_assert!(x > T::zero());
    if x > flt(E1_MAX_ARG) {
        T::zero()
    } else if x <= flt(E1_SERIES_MAX) {
        e1_series(x)
    } else {
        match e1_continued_fraction(x) {
            Ok(cf) => cf * (-x).exp(),
            Err(_) => T::zero(),
        }
    }
}

/// Power series `E1(x) = -γ - ln x + Σ_{k≥1} (-1)^(k+1) x^k / (k·k!)`,
/// accurate for `0 < x <= 1`.
fn e1_series<T: Scalar>(x: T) -> T {
    let mut sum = T::zero();
    let mut power = T::one(); // x^k / k!
    let mut sign = T::one();
    for k in 1..200u32 {
        let kf = flt::<T>(f64::from(k));
        power = power * x / kf;
        let term = sign * power / kf;
        sum = sum + term;
        if term.abs() <= sum.abs() * T::epsilon() {
            break;
        }
        sign = -sign;
    }
    sum - flt::<T>(EULER_GAMMA) - x.ln()
}

/// Modified-Lentz evaluation of the continued fraction
/// `E1(x)·e^x = 1/(x+1- 1/(x+3- 4/(x+5- 9/(x+7- ...))))` for `x > 1`.
///
/// Returns the fraction itself (the caller applies `exp(-x)` or works in
/// the log domain).
fn e1_continued_fraction<T: Scalar>(x: T) -> Result<T> {
    let tiny = T::min_positive_value();
    let two = flt::<T>(2.0);
    let mut b = x + T::one();
    let mut c = T::one() / tiny;
    let mut d = T::one() / b;
    let mut h = d;
    for i in 1..500u32 {
        let fi = flt::<T>(f64::from(i));
        let a = -fi * fi;
        b = b + two;
        d = (a * d + b).recip();
        c = b + a / c;
        if c == T::zero() {
            c = tiny;
        }
        if d == T::zero() {
            d = tiny;
        }
        let delta = c * d;
        h = h * delta;
        if (delta - T::one()).abs() <= T::epsilon() {
            return Ok(h);
        }
    }
    Err(Error::Convergence(format!(
        "e1 continued fraction did not converge at x={x}"
    )))
}

/// Find a root of `f` in the bracket `[lo, hi]`, which must straddle a sign
/// change. Secant steps are taken whenever they fall safely inside the
/// bracket and keep shrinking it; otherwise the step falls back to
/// bisection, so convergence is guaranteed for any continuous `f`.
///
/// Deterministic for identical inputs.
pub fn find_root<T, F>(mut f: F, lo: T, hi: T, tol: &Tolerance<T>) -> Result<T>
where
    T: Scalar,
    F: FnMut(T) -> T,
{
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == T::zero() {
        return Ok(a);
    }
    if fb == T::zero() {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoSignChange(format!(
            "no sign change on [{a}, {b}]: f(lo)={fa}, f(hi)={fb}"
        )));
    }

    let half = flt::<T>(0.5);
    let mut force_bisect = false;
    for _ in 0..tol.max_iter {
        let width = b - a;
        let mid = a + half * width;
        if width <= tol.abs.max(tol.rel * mid.abs()) {
            return Ok(mid);
        }

        let mut x = mid;
        if !force_bisect {
            // Secant candidate, clipped away from the endpoints so a stalled
            // secant cannot pin the bracket.
            let secant = b - fb * (b - a) / (fb - fa);
            let margin = width * flt::<T>(1e-3);
            if secant.is_finite() && secant > a + margin && secant < b - margin {
                x = secant;
            }
        }

        let fx = f(x);
        if fx == T::zero() {
            return Ok(x);
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        // If the step failed to halve the bracket, bisect next time.
        force_bisect = (b - a) > half * width;
    }
    Err(Error::Convergence(format!(
        "root not located to tolerance within {} iterations (bracket [{a}, {b}])",
        tol.max_iter
    )))
}
