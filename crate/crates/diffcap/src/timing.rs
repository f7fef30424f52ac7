//! Symbol-duration solvers.
//!
//! In canonical units the three timing equations read
//!
//! ```text
//! E1(1/T01) = 2/F̃                                  (low → high)
//! E1(1/(T01+T10)) - E1(1/T10) = 1/F̃                (high → low)
//! E1(1/(T01+T11)) - (1-α)·E1(1/T11) = 2/F̃          (high → high)
//! ```
//!
//! `T01` is inverted in the log domain so the solve stays well-conditioned
//! across the whole supported rate range. The high→high equation always has
//! the degenerate root `T11 = 0`; [`solve_t11`] reports the smallest strictly
//! positive root when one exists instead of hiding the root structure. The
//! default pipeline ([`solve_durations`]) uses the fundamental interval for
//! `T11`, with the rate fraction α that this choice actually requires
//! reported separately by the simulator module.

use crate::diffusion::NormalizedParams;
use crate::error::{Error, Result};
use crate::numerics::{e1_flush, find_root, log_e1, Tolerance};
use crate::scalar::{flt, in_unit_interval, positive_finite, Scalar};

/// Smallest supported normalized production rate.
pub const F_TILDE_MIN: f64 = 1e-3;
/// Largest supported normalized production rate.
pub const F_TILDE_MAX: f64 = 1e6;

/// Largest duration (in `τ0` units) the solvers will report.
const T_MAX: f64 = 1e300;

/// The four symbol durations in `τ0` units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymbolDurations<T> {
    pub t00: T,
    pub t01: T,
    pub t10: T,
    pub t11: T,
}

impl<T: Scalar> SymbolDurations<T> {
    pub fn new(t00: T, t01: T, t10: T, t11: T) -> Result<Self> {
        for (name, v) in [("t00", t00), ("t01", t01), ("t10", t10), ("t11", t11)] {
            if !positive_finite(v) {
                return Err(Error::Domain(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(Self { t00, t01, t10, t11 })
    }
}

fn check_f_tilde<T: Scalar>(f_tilde: T) -> Result<()> {
    if !(flt(F_TILDE_MIN)..=flt(F_TILDE_MAX)).contains(&f_tilde) {
        return Err(Error::Domain(format!(
            "f_tilde must lie in [{F_TILDE_MIN:e}, {F_TILDE_MAX:e}], got {f_tilde}"
        )));
    }
    Ok(())
}

fn check_positive<T: Scalar>(name: &str, v: T) -> Result<()> {
    if !positive_finite(v) {
        return Err(Error::Domain(format!("{name} must be positive, got {v}")));
    }
    Ok(())
}

fn solver_tolerance<T: Scalar>() -> Tolerance<T> {
    Tolerance {
        rel: flt::<T>(1e-13).max(T::epsilon() * flt(8.0)),
        abs: T::zero(),
        max_iter: 5000,
    }
}

/// Duration of the low→high symbol: the unique `T01` with
/// `E1(1/T01) = 2/F̃`. Strictly decreasing in `F̃`.
pub fn solve_t01<T: Scalar>(f_tilde: T) -> Result<T> {
    check_f_tilde(f_tilde)?;
    let target = (flt::<T>(2.0) / f_tilde).ln();
    // ln E1(1/T) is strictly increasing in T; expand upward from T = 1
    // until the bracket straddles the target.
    let residual = |t: T| log_e1(t.recip()).expect("argument is positive") - target;
    let mut lo = flt::<T>(1e-12);
    let mut hi = T::one();
    if residual(hi) < T::zero() {
        loop {
            lo = hi;
            hi = hi * flt(10.0);
            if hi > flt(T_MAX) {
                return Err(Error::NoSolution(format!(
                    "T01 exceeds the representable range at f_tilde={f_tilde}"
                )));
            }
            if residual(hi) >= T::zero() {
                break;
            }
        }
    }
    find_root(residual, lo, hi, &solver_tolerance())
}

/// Duration of the high→low symbol: the unique `T10` at which the decaying
/// post-pulse concentration crosses `S`, i.e.
/// `E1(1/(T01+T10)) - E1(1/T10) = 1/F̃`.
pub fn solve_t10<T: Scalar>(f_tilde: T, t01: T) -> Result<T> {
    check_f_tilde(f_tilde)?;
    check_positive("t01", t01)?;
    let target = f_tilde.recip();
    let residual = |t: T| e1_flush((t01 + t).recip()) - e1_flush(t.recip()) - target;
    // The residual is +1/F̃ at T→0⁺ and falls to -1/F̃ as T→∞, crossing
    // zero exactly once; expand the upper bound until the sign flips.
    let lo = flt::<T>(1e-9);
    let mut hi = t01;
    while residual(hi) >= T::zero() {
        hi = hi * flt(2.0);
        if hi > flt(1e9) {
            return Err(Error::NoSolution(format!(
                "no high→low crossing below 1e9 τ0 at f_tilde={f_tilde}"
            )));
        }
    }
    find_root(residual, lo, hi, &solver_tolerance())
}

/// Smallest strictly positive root of the high→high equation
/// `E1(1/(T01+T11)) - (1-α)·E1(1/T11) = 2/F̃`, if one exists.
///
/// `T11 = 0` always satisfies the equation in the limit; the residual rises
/// from that degenerate root and may cross zero again on its way down. For
/// `α = 1` it never does and `None` is returned.
pub fn solve_t11<T: Scalar>(f_tilde: T, t01: T, alpha: T) -> Result<Option<T>> {
    check_f_tilde(f_tilde)?;
    check_positive("t01", t01)?;
    if !in_unit_interval(alpha) {
        return Err(Error::Domain(format!("alpha must lie in [0, 1], got {alpha}")));
    }
    let target = flt::<T>(2.0) / f_tilde;
    let one_minus_alpha = T::one() - alpha;
    let residual =
        |t: T| e1_flush((t01 + t).recip()) - one_minus_alpha * e1_flush(t.recip()) - target;

    // Multiplicative scan for the first downward crossing. Points below the
    // noise floor of the E1 differences are skipped so the degenerate root
    // at 0 cannot masquerade as a sign change.
    let floor = target * flt(1e-12);
    let ratio = flt::<T>(1.25);
    let mut prev = flt::<T>(1e-9);
    let mut seen_positive = residual(prev) > floor;
    let mut t = prev;
    while t < flt(1e9) {
        t = t * ratio;
        let val = residual(t);
        if seen_positive && val <= T::zero() {
            let root = find_root(residual, prev, t, &solver_tolerance())?;
            return Ok(Some(root));
        }
        if val > floor {
            seen_positive = true;
        }
        prev = t;
    }
    Ok(None)
}

/// Rate fraction required to hit the high level exactly at the end of a
/// high→high symbol of duration `t11`:
/// `α = 1 - [E1(1/(t01+t11)) - 2/F̃] / E1(1/t11)`.
///
/// Returned only when it lies in `[0, 1]`; `None` signals that with this
/// `t11` the channel memory alone over- or under-shoots the `2S` level.
pub fn solve_alpha<T: Scalar>(f_tilde: T, t01: T, t11: T) -> Result<Option<T>> {
    check_f_tilde(f_tilde)?;
    check_positive("t01", t01)?;
    check_positive("t11", t11)?;
    let denom = e1_flush(t11.recip());
    if denom == T::zero() {
        // t11 so short that the symbol's own emission cannot register
        return Ok(None);
    }
    let raw = T::one() - (e1_flush((t01 + t11).recip()) - flt::<T>(2.0) / f_tilde) / denom;
    if raw >= T::zero() && raw <= T::one() {
        Ok(Some(raw))
    } else {
        Ok(None)
    }
}

/// Solve the full duration set for the given normalized parameters,
/// using the fundamental interval for both `T00` and `T11`.
pub fn solve_durations<T: Scalar>(params: &NormalizedParams<T>) -> Result<SymbolDurations<T>> {
    check_positive("t00", params.t00)?;
    let t01 = solve_t01(params.f_tilde)?;
    let t10 = solve_t10(params.f_tilde, t01)?;
    SymbolDurations::new(params.t00, t01, t10, params.t00)
}
