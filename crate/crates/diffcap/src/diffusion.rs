//! Closed-form concentration responses of the 2-D diffusive medium.
//!
//! Canonical internal units: time in `τ0 = r²/(4D)`, concentration in units
//! of the receiver sensitivity `S`, emission rate in units of `4πDS`. In
//! these units the response of a rectangular emission pulse reduces to
//! differences of `E1`, and the timing equations lose all physical
//! parameters except the normalized rate. Physical inputs are converted once
//! at the boundary by [`normalize`].

use crate::error::{Error, Result};
use crate::numerics::e1_flush;
use crate::scalar::{flt, in_unit_interval, positive_finite, Scalar};

/// Raw medium/transmitter description in physical units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams<T> {
    /// Diffusion coefficient `D` (length²/time).
    pub diff_coeff: T,
    /// Transmitter–receiver separation `r` (length).
    pub distance: T,
    /// Receiver concentration sensitivity `S` (amount/length²).
    pub sensitivity: T,
    /// Maximum molecule production rate `F` (amount/time).
    pub max_rate: T,
    /// Fraction of `F` allocated to the high→high symbol, in `[0, 1]`.
    pub alpha: T,
    /// Constant `k` fixing the fundamental interval `T00 = k·r²/D`.
    pub k_t00: T,
}

impl<T: Scalar> PhysicalParams<T> {
    pub fn new(
        diff_coeff: T,
        distance: T,
        sensitivity: T,
        max_rate: T,
        alpha: T,
        k_t00: T,
    ) -> Result<Self> {
        for (name, v) in [
            ("diff_coeff", diff_coeff),
            ("distance", distance),
            ("sensitivity", sensitivity),
            ("max_rate", max_rate),
            ("k_t00", k_t00),
        ] {
            if !positive_finite(v) {
                return Err(Error::Domain(format!("{name} must be positive, got {v}")));
            }
        }
        if !in_unit_interval(alpha) {
            return Err(Error::Domain(format!("alpha must lie in [0, 1], got {alpha}")));
        }
        Ok(Self { diff_coeff, distance, sensitivity, max_rate, alpha, k_t00 })
    }
}

/// Dimensionless parameters after conversion to canonical units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizedParams<T> {
    /// Normalized production rate `F̃ = F/(4πDS)`.
    pub f_tilde: T,
    /// Fraction of the rate allocated to the high→high symbol.
    pub alpha: T,
    /// Fundamental interval `T00` in units of `τ0 = r²/(4D)`.
    pub t00: T,
}

impl<T: Scalar> NormalizedParams<T> {
    pub fn new(f_tilde: T, alpha: T, t00: T) -> Result<Self> {
        if !positive_finite(f_tilde) {
            return Err(Error::Domain(format!("f_tilde must be positive, got {f_tilde}")));
        }
        if !positive_finite(t00) {
            return Err(Error::Domain(format!("t00 must be positive, got {t00}")));
        }
        if !in_unit_interval(alpha) {
            return Err(Error::Domain(format!("alpha must lie in [0, 1], got {alpha}")));
        }
        Ok(Self { f_tilde, alpha, t00 })
    }
}

/// Rectangular emission pulse, in canonical units: times in `τ0`,
/// amplitude in `4πDS`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pulse<T> {
    pub start: T,
    pub duration: T,
    pub amplitude: T,
}

impl<T: Scalar> Pulse<T> {
    pub fn new(start: T, duration: T, amplitude: T) -> Result<Self> {
        if !positive_finite(duration) {
            return Err(Error::Domain(format!("pulse duration must be positive, got {duration}")));
        }
        if amplitude < T::zero() || !amplitude.is_finite() {
            return Err(Error::Domain(format!(
                "pulse amplitude must be non-negative, got {amplitude}"
            )));
        }
        if !start.is_finite() {
            return Err(Error::Domain(format!("pulse start must be finite, got {start}")));
        }
        Ok(Self { start, duration, amplitude })
    }

    pub fn end(&self) -> T {
        self.start + self.duration
    }
}

/// Ordered, non-overlapping sequence of emission pulses.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EmissionSchedule<T> {
    pulses: Vec<Pulse<T>>,
}

impl<T: Scalar> EmissionSchedule<T> {
    /// Build a schedule, checking ordering and non-overlap.
    pub fn new(pulses: Vec<Pulse<T>>) -> Result<Self> {
        for pair in pulses.windows(2) {
            if pair[0].end() > pair[1].start {
                return Err(Error::Domain(format!(
                    "pulses must be sequential: pulse ending at {} overlaps pulse starting at {}",
                    pair[0].end(),
                    pair[1].start
                )));
            }
        }
        Ok(Self { pulses })
    }

    pub fn empty() -> Self {
        Self { pulses: Vec::new() }
    }

    pub fn pulses(&self) -> &[Pulse<T>] {
        &self.pulses
    }
}

/// Green's function of the 2-D diffusion equation:
/// `g = 1/(4πDt) · exp(-dist²/(4Dt))`, in physical units.
///
/// Peaks at `t = dist²/(4D)` with value `e⁻¹/(π·dist²)` and vanishes at both
/// ends of the time axis.
pub fn impulse_response<T: Scalar>(dist: T, t: T, diff_coeff: T) -> Result<T> {
    if t.is_nan() || t <= T::zero() {
        return Err(Error::Domain(format!("impulse_response: t must be positive, got {t}")));
    }
    if dist.is_nan() || dist < T::zero() {
        return Err(Error::Domain(format!(
            "impulse_response: dist must be non-negative, got {dist}"
        )));
    }
    if !positive_finite(diff_coeff) {
        return Err(Error::Domain(format!(
            "impulse_response: diff_coeff must be positive, got {diff_coeff}"
        )));
    }
    let four_pi = flt::<T>(4.0 * std::f64::consts::PI);
    let four = flt::<T>(4.0);
    let spread = four * diff_coeff * t;
    Ok((-(dist * dist) / spread).exp() / (four_pi * diff_coeff * t))
}

/// Concentration at the receiver due to one rectangular pulse, in units of
/// `S`, at time `t` in `τ0` units.
///
/// With `a = start`, `d = duration`, `A = amplitude`:
/// zero up to `a`, `A·E1(1/(t-a))` while the pulse is on, and
/// `A·[E1(1/(t-a)) - E1(1/(t-a-d))]` after it ends. Continuous at both
/// regime boundaries.
pub fn pulse_response<T: Scalar>(t: T, pulse: &Pulse<T>) -> T {
    let since_start = t - pulse.start;
    if since_start <= T::zero() {
        return T::zero();
    }
    let rising = pulse.amplitude * e1_flush(since_start.recip());
    let since_end = since_start - pulse.duration;
    if since_end <= T::zero() {
        rising
    } else {
        rising - pulse.amplitude * e1_flush(since_end.recip())
    }
}

/// Superposition of all pulses in the schedule at time `t` (units of `S`).
pub fn schedule_response<T: Scalar>(t: T, schedule: &EmissionSchedule<T>) -> T {
    schedule
        .pulses()
        .iter()
        .fold(T::zero(), |acc, p| acc + pulse_response(t, p))
}

/// Convert physical parameters to canonical units:
/// `f_tilde = F/(4πDS)` and `t00 = k·r²/D = 4k` in `τ0 = r²/(4D)` units.
pub fn normalize<T: Scalar>(p: &PhysicalParams<T>) -> NormalizedParams<T> {
    let four_pi = flt::<T>(4.0 * std::f64::consts::PI);
    let four = flt::<T>(4.0);
    NormalizedParams {
        f_tilde: p.max_rate / (four_pi * p.diff_coeff * p.sensitivity),
        alpha: p.alpha,
        t00: four * p.k_t00,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const E1_AT_1: f64 = 0.21938393439552029;

    #[test]
    fn impulse_reference_values() {
        // dist=2, D=1, t=1: e^-1/(4π), which is also the peak value
        let g = impulse_response(2.0f64, 1.0, 1.0).unwrap();
        assert!((g - 0.02927491576215958).abs() < 1e-15);
        // dist=0: exponential factor is 1
        let g0 = impulse_response(0.0f64, 1.0, 1.0).unwrap();
        assert!((g0 - 0.07957747154594767).abs() < 1e-15);
    }

    #[test]
    fn impulse_domain_errors() {
        assert!(impulse_response(2.0f64, 0.0, 1.0).is_err());
        assert!(impulse_response(2.0f64, -1.0, 1.0).is_err());
        assert!(impulse_response(-2.0f64, 1.0, 1.0).is_err());
        assert!(impulse_response(2.0f64, 1.0, 0.0).is_err());
    }

    #[test]
    fn impulse_vanishes_at_extremes() {
        assert!(impulse_response(2.0f64, 1e-12, 1.0).unwrap() < 1e-300);
        assert!(impulse_response(2.0f64, 1e12, 1.0).unwrap() < 1e-11);
    }

    #[test]
    fn pulse_reference_values() {
        let p = Pulse::new(0.0f64, 1.0, 1.0).unwrap();
        // end of the pulse
        assert!((pulse_response(1.0, &p) - E1_AT_1).abs() < 1e-13);
        // after the end the response keeps rising before it decays
        assert!((pulse_response(2.0, &p) - 0.34038966038064056).abs() < 1e-13);
        assert!(pulse_response(2.0, &p) > pulse_response(1.0, &p));
        // nothing before or at the start
        assert_eq!(pulse_response(0.0, &p), 0.0);
        assert_eq!(pulse_response(-3.0, &p), 0.0);
        let shifted = Pulse::new(2.5f64, 1.0, 1.0).unwrap();
        assert_eq!(pulse_response(2.5, &shifted), 0.0);
    }

    #[test]
    fn pulse_continuous_at_boundaries() {
        let p = Pulse::new(0.5f64, 2.0, 3.0).unwrap();
        let eps = 1e-9;
        // at start
        assert!(pulse_response(0.5 + eps, &p) < 1e-6);
        // at end
        let before = pulse_response(2.5 - eps, &p);
        let after = pulse_response(2.5 + eps, &p);
        assert!((before - after).abs() < 1e-6);
    }

    #[test]
    fn pulse_decays_to_zero() {
        let p = Pulse::new(0.0f64, 1.0, 1.0).unwrap();
        assert!(pulse_response(1e6, &p) < 1e-5);
    }

    #[test]
    fn schedule_superposition() {
        let p1 = Pulse::new(0.0f64, 1.0, 1.0).unwrap();
        let p2 = Pulse::new(3.0f64, 0.5, 2.0).unwrap();
        let s = EmissionSchedule::new(vec![p1, p2]).unwrap();
        let t = 4.2;
        let direct = pulse_response(t, &p1) + pulse_response(t, &p2);
        assert_eq!(schedule_response(t, &s), direct);

        // empty schedule and singleton
        assert_eq!(schedule_response(t, &EmissionSchedule::<f64>::empty()), 0.0);
        let single = EmissionSchedule::new(vec![p1]).unwrap();
        assert_eq!(schedule_response(t, &single), pulse_response(t, &p1));
    }

    #[test]
    fn schedule_rejects_overlap() {
        let p1 = Pulse::new(0.0f64, 2.0, 1.0).unwrap();
        let p2 = Pulse::new(1.0f64, 1.0, 1.0).unwrap();
        assert!(EmissionSchedule::new(vec![p1, p2]).is_err());
        // touching pulses are fine
        let p3 = Pulse::new(2.0f64, 1.0, 1.0).unwrap();
        assert!(EmissionSchedule::new(vec![p1, p3]).is_ok());
    }

    #[test]
    fn normalize_reference_values() {
        let four_pi = 4.0 * std::f64::consts::PI;
        let p = PhysicalParams::new(1.0f64, 1.0, 1.0, four_pi, 0.0, 0.25).unwrap();
        let n = normalize(&p);
        assert!((n.f_tilde - 1.0).abs() < 1e-15);
        assert!((n.t00 - 1.0).abs() < 1e-15);

        // the normalized rate is independent of the distance
        let p = PhysicalParams::new(1.0f64, 2.0, 1.0, four_pi * 3.9, 0.0, 0.25).unwrap();
        assert!((normalize(&p).f_tilde - 3.9).abs() < 1e-12);
    }

    #[test]
    fn params_validation() {
        assert!(PhysicalParams::new(0.0f64, 1.0, 1.0, 1.0, 0.0, 1.0).is_err());
        assert!(PhysicalParams::new(1.0f64, 1.0, 1.0, 1.0, 1.5, 1.0).is_err());
        assert!(NormalizedParams::new(0.0f64, 0.0, 1.0).is_err());
        assert!(NormalizedParams::new(1.0f64, 0.0, -1.0).is_err());
        assert!(NormalizedParams::new(3.9f64, 0.0, 1.0).is_ok());
        assert!(Pulse::new(0.0f64, 0.0, 1.0).is_err());
        assert!(Pulse::new(0.0f64, 1.0, -0.5).is_err());
    }
}
