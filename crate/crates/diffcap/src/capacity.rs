//! Discrete-noiseless-channel capacity from symbol durations.
//!
//! For the two-state chain the characteristic determinant equation factors
//! as `W^-(T01+T10) = (1 - W^-T00)(1 - W^-T11)`, with a unique root
//! `W > 1` for finite positive durations, and the capacity is `log2(W)`.
//! [`solve_w`] finds that root. [`solve_w_special`] solves the `T11 = T00`
//! special case through its own factored form `W^(s-2)·(W-1)² = 1` so the
//! two routes cross-check each other. [`count_blocks`] is an independent
//! block-counting oracle on integer durations whose growth rate converges to
//! the same capacity.
//!
//! The root is located in capacity space `c = log2 W`, which stays
//! well-conditioned when `W` is barely above 1 (very long durations).

use crate::error::{Error, Result};
use crate::numerics::{find_root, Tolerance};
use crate::scalar::{flt, positive_finite, Scalar};
use crate::timing::SymbolDurations;

/// Largest real root of the duration equation and the capacity it implies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityResult<T> {
    /// Largest real root `W` of the characteristic equation.
    pub w: T,
    /// Capacity `log2(W)` in bits per `τ0` unit of time.
    pub capacity: T,
    /// Capacity in bits per fundamental interval `T00`.
    pub capacity_per_t00: T,
}

/// Counts of admissible symbol sequences by exact duration, ending in the
/// low or high channel state, kept as `log2` values so they cannot overflow.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockCounts<T> {
    log2_low: Vec<T>,
    log2_high: Vec<T>,
}

impl<T: Scalar> BlockCounts<T> {
    pub fn t_max(&self) -> usize {
        self.log2_low.len() - 1
    }

    /// `log2 N_L(t)`; negative infinity encodes a zero count.
    pub fn log2_low(&self, t: usize) -> T {
        self.log2_low[t]
    }

    /// `log2 N_H(t)`; negative infinity encodes a zero count.
    pub fn log2_high(&self, t: usize) -> T {
        self.log2_high[t]
    }

    /// `log2 (N_L(t) + N_H(t))`.
    pub fn log2_total(&self, t: usize) -> T {
        log2_add(self.log2_low[t], self.log2_high[t])
    }

    /// Linear count `N_L(t)`, exact while it fits the scalar type.
    pub fn count_low(&self, t: usize) -> T {
        self.log2_low[t].exp2()
    }

    /// Linear count `N_H(t)`, exact while it fits the scalar type.
    pub fn count_high(&self, t: usize) -> T {
        self.log2_high[t].exp2()
    }

    /// Exponential growth rate `(log2 N(t_end) - log2 N(t_start)) / (t_end -
    /// t_start)`, the block-counting estimate of the capacity per time unit.
    pub fn growth_rate(&self, t_start: usize, t_end: usize) -> Result<T> {
        if t_start >= t_end || t_end > self.t_max() {
            return Err(Error::Domain(format!(
                "growth window [{t_start}, {t_end}] must be increasing and within 0..={}",
                self.t_max()
            )));
        }
        let a = self.log2_total(t_start);
        let b = self.log2_total(t_end);
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::Domain(format!(
                "no admissible blocks at a window endpoint ({t_start} or {t_end})"
            )));
        }
        Ok((b - a) / flt((t_end - t_start) as f64))
    }
}

fn log2_add<T: Scalar>(a: T, b: T) -> T {
    if a == T::neg_infinity() {
        return b;
    }
    if b == T::neg_infinity() {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (T::one() + (lo - hi).exp2()).log2()
}

fn check_durations<T: Scalar>(d: &SymbolDurations<T>) -> Result<()> {
    for (name, v) in [("t00", d.t00), ("t01", d.t01), ("t10", d.t10), ("t11", d.t11)] {
        if !positive_finite(v) {
            return Err(Error::Domain(format!("{name} must be positive, got {v}")));
        }
    }
    Ok(())
}

fn capacity_tolerance<T: Scalar>() -> Tolerance<T> {
    Tolerance {
        rel: flt::<T>(1e-14).max(T::epsilon() * flt(4.0)),
        abs: T::zero(),
        max_iter: 5000,
    }
}

/// Solve `W^-(T01+T10) = (1 - W^-T00)(1 - W^-T11)` for the unique `W > 1`.
///
/// The left side is strictly decreasing and the right side strictly
/// increasing on `(1, ∞)`, so a sign-change bracket in `c = log2 W`
/// pins the root.
pub fn solve_w<T: Scalar>(d: &SymbolDurations<T>) -> Result<CapacityResult<T>> {
    check_durations(d)?;
    let s = d.t01 + d.t10;
    let ln2 = flt::<T>(std::f64::consts::LN_2);
    // residual in capacity space; exp_m1 keeps 1 - 2^-x accurate near 0
    let residual = move |c: T| {
        let lhs = (-c * s * ln2).exp();
        let rhs = (-(-c * d.t00 * ln2).exp_m1()) * (-(-c * d.t11 * ln2).exp_m1());
        lhs - rhs
    };

    let dmin = d.t00.min(d.t01).min(d.t10).min(d.t11);
    // upper bound: four symbols of duration >= dmin admit at most
    // 4^(t/dmin) blocks, so c <= 2/dmin
    let mut hi = flt::<T>(2.0) / dmin + T::one();
    while residual(hi) >= T::zero() {
        hi = hi * flt(2.0);
        if !hi.is_finite() {
            return Err(Error::NoSolution("capacity upper bound diverged".into()));
        }
    }
    let mut lo = hi;
    loop {
        lo = lo * flt(1.0 / 16.0);
        if lo < flt(1e-300) {
            return Err(Error::NoSolution(
                "capacity below the representable range (durations too long)".into(),
            ));
        }
        if residual(lo) > T::zero() {
            break;
        }
    }

    let c = find_root(residual, lo, hi, &capacity_tolerance())?;
    Ok(CapacityResult { w: c.exp2(), capacity: c, capacity_per_t00: c * d.t00 })
}

/// Solve the `T11 = T00` special case `W^(s-2)·(W-1)² = 1`, where
/// `s = T̃01 + T̃10` is the transition-time sum in `T00` units.
///
/// Algebraically identical to [`solve_w`] with unit `T00` and `T11`, but
/// evaluated through its own factored form; results are in bits per `T00`.
pub fn solve_w_special<T: Scalar>(s: T) -> Result<CapacityResult<T>> {
    if !positive_finite(s) {
        return Err(Error::Domain(format!("s must be positive, got {s}")));
    }
    let ln2 = flt::<T>(std::f64::consts::LN_2);
    let two = flt::<T>(2.0);
    // log residual: c·(s-2)·ln2 + 2·ln(2^c - 1), increasing through 0 at the root
    let residual = move |c: T| c * (s - two) * ln2 + two * (c * ln2).exp_m1().ln();

    let mut hi = T::one();
    while residual(hi) <= T::zero() {
        hi = hi * two;
        if !hi.is_finite() {
            return Err(Error::NoSolution("special-case upper bound diverged".into()));
        }
    }
    let mut lo = hi;
    loop {
        lo = lo * flt(1.0 / 16.0);
        if lo < flt(1e-300) {
            return Err(Error::NoSolution(
                "capacity below the representable range (s too large)".into(),
            ));
        }
        if residual(lo) < T::zero() {
            break;
        }
    }

    let c = find_root(residual, lo, hi, &capacity_tolerance())?;
    Ok(CapacityResult { w: c.exp2(), capacity: c, capacity_per_t00: c })
}

/// Block-counting dynamic program on integer durations:
///
/// ```text
/// N_L(t) = N_L(t - T00) + N_H(t - T10)
/// N_H(t) = N_L(t - T01) + N_H(t - T11)
/// ```
///
/// with `N_L(0) = 1`, `N_H(0) = 0` and zero for negative arguments. Counts
/// are held in `log2` form because they grow like `W^t`.
pub fn count_blocks<T: Scalar>(d: &SymbolDurations<T>, t_max: usize) -> Result<BlockCounts<T>> {
    check_durations(d)?;
    let as_int = |name: &str, v: T| -> Result<usize> {
        if v.fract() != T::zero() {
            return Err(Error::Domain(format!(
                "count_blocks requires integer durations, got {name}={v}"
            )));
        }
        v.to_usize()
            .ok_or_else(|| Error::Domain(format!("{name}={v} does not fit an index")))
    };
    let t00 = as_int("t00", d.t00)?;
    let t01 = as_int("t01", d.t01)?;
    let t10 = as_int("t10", d.t10)?;
    let t11 = as_int("t11", d.t11)?;
    let longest = t00.max(t01).max(t10).max(t11);
    if t_max < longest {
        return Err(Error::Domain(format!(
            "t_max={t_max} must cover the longest duration {longest}"
        )));
    }

    let neg = T::neg_infinity();
    let mut log2_low = vec![neg; t_max + 1];
    let mut log2_high = vec![neg; t_max + 1];
    log2_low[0] = T::zero();
    let back = |v: &[T], t: usize, d: usize| if t >= d { v[t - d] } else { neg };
    for t in 1..=t_max {
        log2_low[t] = log2_add(back(&log2_low, t, t00), back(&log2_high, t, t10));
        log2_high[t] = log2_add(back(&log2_low, t, t01), back(&log2_high, t, t11));
    }
    Ok(BlockCounts { log2_low, log2_high })
}
