//! End-to-end noiseless link simulation.
//!
//! Bits walk the two-state chain: in the low state a 0 is silence for `T00`
//! and a 1 is a full-rate pulse for `T01`; in the high state a 0 waits `T10`
//! for the channel to clear and a 1 emits at the fraction α of the full rate
//! for `T11`. The per-symbol trace model carries exactly one symbol of
//! memory: inside any symbol entered in the high state the lingering
//! concentration is the tail of a full-rate low→high pulse that ended at the
//! symbol boundary, which is what makes every boundary land on its nominal
//! `S`/`2S` level regardless of history. [`trace_full`] evaluates the exact
//! superposition of the actual emission schedule instead, quantifying the
//! truncation error of that model.

use crate::diffusion::{pulse_response, EmissionSchedule, Pulse};
use crate::error::{Error, Result};
use crate::scalar::{flt, in_unit_interval, positive_finite, Scalar};
use crate::timing::SymbolDurations;

/// Decode threshold between the `S` and `2S` levels, in units of `S`.
pub const DEFAULT_THRESHOLD: f64 = 1.5;

/// Default trace sampling density.
pub const DEFAULT_SAMPLES_PER_SYMBOL: usize = 64;

/// Channel state: high iff the last transmitted bit was 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelState {
    Low,
    High,
}

/// The four symbols of the chain; the first bit is the originating state,
/// the second the transmitted bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolKind {
    S00,
    S01,
    S10,
    S11,
}

impl SymbolKind {
    /// Channel state the symbol starts from.
    pub fn state_before(self) -> ChannelState {
        match self {
            SymbolKind::S00 | SymbolKind::S01 => ChannelState::Low,
            SymbolKind::S10 | SymbolKind::S11 => ChannelState::High,
        }
    }

    /// Bit the symbol transmits (also the state it leads to).
    pub fn bit(self) -> bool {
        matches!(self, SymbolKind::S01 | SymbolKind::S11)
    }
}

/// One transmitted symbol with its duration (`τ0` units) and emission
/// amplitude (`4πDS` units; zero for the waiting symbols).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Symbol<T> {
    pub kind: SymbolKind,
    pub duration: T,
    pub amplitude: T,
}

/// Concentration sample of a trace, in `S` units at `τ0` time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceSample<T> {
    pub t: T,
    pub concentration: T,
}

/// Encode a bit sequence through the chain, starting in the low state.
///
/// Returns the symbol sequence and the emission schedule it implies: one
/// pulse per s01 (amplitude `F̃`) and per s11 (amplitude `α·F̃`).
pub fn encode<T: Scalar>(
    bits: &[bool],
    d: &SymbolDurations<T>,
    f_tilde: T,
    alpha: T,
) -> Result<(Vec<Symbol<T>>, EmissionSchedule<T>)> {
    if bits.is_empty() {
        return Err(Error::Domain("bit sequence must be non-empty".into()));
    }
    if !positive_finite(f_tilde) {
        return Err(Error::Domain(format!("f_tilde must be positive, got {f_tilde}")));
    }
    if !in_unit_interval(alpha) {
        return Err(Error::Domain(format!("alpha must lie in [0, 1], got {alpha}")));
    }

    let mut symbols = Vec::with_capacity(bits.len());
    let mut pulses = Vec::new();
    let mut state = ChannelState::Low;
    let mut now = T::zero();
    for &bit in bits {
        let kind = match (state, bit) {
            (ChannelState::Low, false) => SymbolKind::S00,
            (ChannelState::Low, true) => SymbolKind::S01,
            (ChannelState::High, false) => SymbolKind::S10,
            (ChannelState::High, true) => SymbolKind::S11,
        };
        let (duration, amplitude) = match kind {
            SymbolKind::S00 => (d.t00, T::zero()),
            SymbolKind::S01 => (d.t01, f_tilde),
            SymbolKind::S10 => (d.t10, T::zero()),
            SymbolKind::S11 => (d.t11, alpha * f_tilde),
        };
        if kind.bit() {
            pulses.push(Pulse::new(now, duration, amplitude)?);
        }
        symbols.push(Symbol { kind, duration, amplitude });
        now = now + duration;
        state = if bit { ChannelState::High } else { ChannelState::Low };
    }
    Ok((symbols, EmissionSchedule::new(pulses)?))
}

/// End time of each symbol (cumulative durations).
pub fn boundary_times<T: Scalar>(symbols: &[Symbol<T>]) -> Vec<T> {
    symbols
        .iter()
        .scan(T::zero(), |now, s| {
            *now = *now + s.duration;
            Some(*now)
        })
        .collect()
}

/// Concentration at local time `u` into a symbol, under the one-symbol
/// memory model.
fn markov_concentration<T: Scalar>(sym: &Symbol<T>, u: T, t01: T, f_tilde: T) -> T {
    let own = pulse_response(u, &Pulse { start: T::zero(), duration: sym.duration, amplitude: sym.amplitude });
    let memory = match sym.kind.state_before() {
        ChannelState::High => {
            // tail of a full-rate low→high pulse that ended at symbol start
            let prior = Pulse { start: T::zero(), duration: t01, amplitude: f_tilde };
            pulse_response(u + t01, &prior)
        }
        ChannelState::Low => T::zero(),
    };
    own + memory
}

/// Sample grid matching [`trace_markov`]: `t = 0`, then `samples_per_symbol`
/// samples per symbol with the boundary sample placed exactly.
pub fn sample_times<T: Scalar>(symbols: &[Symbol<T>], samples_per_symbol: usize) -> Vec<T> {
    let n = samples_per_symbol.max(1);
    let mut times = Vec::with_capacity(symbols.len() * n + 1);
    times.push(T::zero());
    let mut start = T::zero();
    for sym in symbols {
        for j in 1..=n {
            let u = if j == n {
                sym.duration
            } else {
                sym.duration * flt::<T>(j as f64) / flt::<T>(n as f64)
            };
            times.push(start + u);
        }
        start = start + sym.duration;
    }
    times
}

/// Per-symbol trace under the one-symbol memory model.
pub fn trace_markov<T: Scalar>(
    symbols: &[Symbol<T>],
    d: &SymbolDurations<T>,
    f_tilde: T,
    samples_per_symbol: usize,
) -> Vec<TraceSample<T>> {
    let n = samples_per_symbol.max(1);
    let mut out = Vec::with_capacity(symbols.len() * n + 1);
    out.push(TraceSample { t: T::zero(), concentration: T::zero() });
    let mut start = T::zero();
    for sym in symbols {
        for j in 1..=n {
            let u = if j == n {
                sym.duration
            } else {
                sym.duration * flt::<T>(j as f64) / flt::<T>(n as f64)
            };
            out.push(TraceSample {
                t: start + u,
                concentration: markov_concentration(sym, u, d.t01, f_tilde),
            });
        }
        start = start + sym.duration;
    }
    out
}

/// Symbol-boundary concentrations under the one-symbol memory model, one
/// value per symbol.
pub fn markov_boundary_concentrations<T: Scalar>(
    symbols: &[Symbol<T>],
    d: &SymbolDurations<T>,
    f_tilde: T,
) -> Vec<T> {
    symbols
        .iter()
        .map(|sym| markov_concentration(sym, sym.duration, d.t01, f_tilde))
        .collect()
}

/// Exact superposition of the whole emission schedule at the given times.
pub fn trace_full<T: Scalar>(schedule: &EmissionSchedule<T>, times: &[T]) -> Vec<TraceSample<T>> {
    times
        .iter()
        .map(|&t| TraceSample { t, concentration: crate::diffusion::schedule_response(t, schedule) })
        .collect()
}

/// Threshold decoder: bit = 1 iff the boundary concentration reaches the
/// threshold.
pub fn decode<T: Scalar>(boundary_concentrations: &[T], threshold: T) -> Vec<bool> {
    boundary_concentrations.iter().map(|&c| c >= threshold).collect()
}

/// Decode-safe rate fraction for the high→high symbol, plus the overshoot
/// above the `2S` level that remains when the memory alone already exceeds
/// it and α is clamped to zero.
///
/// With the returned α the end-of-s11 concentration is `≥ 2S`, exactly `2S`
/// whenever the timing equation is satisfiable.
pub fn effective_alpha<T: Scalar>(f_tilde: T, d: &SymbolDurations<T>) -> Result<(T, T)> {
    if !positive_finite(f_tilde) {
        return Err(Error::Domain(format!("f_tilde must be positive, got {f_tilde}")));
    }
    for (name, v) in [("t01", d.t01), ("t11", d.t11)] {
        if !positive_finite(v) {
            return Err(Error::Domain(format!("{name} must be positive, got {v}")));
        }
    }
    let two = flt::<T>(2.0);
    let memory_pulse = Pulse { start: T::zero(), duration: d.t01, amplitude: f_tilde };
    let memory_end = pulse_response(d.t11 + d.t01, &memory_pulse);
    let full_rate_own = pulse_response(d.t11, &Pulse {
        start: T::zero(),
        duration: d.t11,
        amplitude: f_tilde,
    });
    let needed = two - memory_end;
    if needed <= T::zero() {
        Ok((T::zero(), -needed))
    } else if needed <= full_rate_own {
        Ok((needed / full_rate_own, T::zero()))
    } else {
        Err(Error::Infeasible(format!(
            "even alpha = 1 reaches only {} S at the end of t11={}",
            memory_end + full_rate_own,
            d.t11
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::timing::{solve_alpha, solve_t01, solve_t10, solve_t11};

    const F: f64 = 3.9;

    fn test_durations() -> SymbolDurations<f64> {
        let t01 = solve_t01(F).unwrap();
        let t10 = solve_t10(F, t01).unwrap();
        SymbolDurations::new(1.0, t01, t10, 1.0).unwrap()
    }

    fn bits(s: &str) -> Vec<bool> {
        s.chars().map(|c| c == '1').collect()
    }

    #[test]
    fn encode_walks_the_chain() {
        let d = test_durations();

        let (symbols, schedule) = encode(&bits("0"), &d, F, 0.0).unwrap();
        assert_eq!(symbols.len(), 1);
        assert_eq!(symbols[0].kind, SymbolKind::S00);
        assert_eq!(symbols[0].duration, d.t00);
        assert!(schedule.pulses().is_empty());

        let (symbols, schedule) = encode(&bits("11"), &d, F, 0.25).unwrap();
        assert_eq!(symbols[0].kind, SymbolKind::S01);
        assert_eq!(symbols[1].kind, SymbolKind::S11);
        let p = schedule.pulses();
        assert_eq!(p.len(), 2);
        assert_eq!((p[0].start, p[0].duration, p[0].amplitude), (0.0, d.t01, F));
        assert_eq!((p[1].start, p[1].duration, p[1].amplitude), (d.t01, d.t11, 0.25 * F));

        let (symbols, schedule) = encode(&bits("101"), &d, F, 0.0).unwrap();
        let kinds: Vec<_> = symbols.iter().map(|s| s.kind).collect();
        assert_eq!(kinds, vec![SymbolKind::S01, SymbolKind::S10, SymbolKind::S01]);
        assert_eq!(schedule.pulses().len(), 2);

        assert!(encode(&[], &d, F, 0.0).is_err());
        assert!(encode(&bits("1"), &d, F, 1.5).is_err());
    }

    #[test]
    fn schedule_duration_matches_symbols() {
        let d = test_durations();
        let (symbols, _) = encode(&bits("1101001"), &d, F, 0.0).unwrap();
        let total: f64 = symbols.iter().map(|s| s.duration).sum();
        let boundaries = boundary_times(&symbols);
        assert!((boundaries.last().unwrap() - total).abs() < 1e-12);
    }

    #[test]
    fn markov_boundaries_hit_nominal_levels() {
        let d = test_durations();
        let (symbols, _) = encode(&bits("1101"), &d, F, 0.0).unwrap();
        let b = markov_boundary_concentrations(&symbols, &d, F);
        // s01 ends at 2S, s11 at >= 2S, s10 at S, regardless of history
        assert!((b[0] - 2.0).abs() < 1e-10);
        assert!(b[1] >= 2.0 - 1e-10);
        assert!((b[2] - 1.0).abs() < 1e-10);
        assert!((b[3] - 2.0).abs() < 1e-10);
    }

    #[test]
    fn trace_starts_at_zero_and_ends_on_boundary() {
        let d = test_durations();
        let (symbols, _) = encode(&bits("10"), &d, F, 0.0).unwrap();
        let trace = trace_markov(&symbols, &d, F, 16);
        assert_eq!(trace[0].t, 0.0);
        assert_eq!(trace[0].concentration, 0.0);
        assert_eq!(trace.len(), 1 + 2 * 16);
        let t_end = d.t01 + d.t10;
        assert!((trace.last().unwrap().t - t_end).abs() < 1e-12);
        let times = sample_times(&symbols, 16);
        for (s, t) in trace.iter().zip(&times) {
            assert_eq!(s.t, *t);
        }
    }

    #[test]
    fn single_symbol_full_equals_markov() {
        let d = test_durations();
        let (symbols, schedule) = encode(&bits("1"), &d, F, 0.0).unwrap();
        let markov = trace_markov(&symbols, &d, F, 32);
        let times: Vec<f64> = markov.iter().map(|s| s.t).collect();
        let full = trace_full(&schedule, &times);
        for (m, f) in markov.iter().zip(&full) {
            assert!((m.concentration - f.concentration).abs() < 1e-14);
        }
    }

    #[test]
    fn two_symbol_message_has_no_truncation() {
        // "11" keeps only one prior pulse, so the one-symbol model drops
        // nothing at the final boundary
        let d = test_durations();
        let (symbols, schedule) = encode(&bits("11"), &d, F, 0.0).unwrap();
        let boundaries = boundary_times(&symbols);
        let markov = markov_boundary_concentrations(&symbols, &d, F);
        let full = trace_full(&schedule, &boundaries);
        let deviation = full.last().unwrap().concentration - markov.last().unwrap();
        assert!(deviation.abs() < 1e-12);
    }

    #[test]
    fn dropped_tail_identity_for_1011() {
        let d = test_durations();
        let (symbols, schedule) = encode(&bits("1011"), &d, F, 0.0).unwrap();
        let boundaries = boundary_times(&symbols);
        let t_final = *boundaries.last().unwrap();
        let markov = markov_boundary_concentrations(&symbols, &d, F);
        let full = trace_full(&schedule, &boundaries);
        let deviation = full.last().unwrap().concentration - markov.last().unwrap();
        // the one-symbol model drops exactly the first s01 pulse here
        let first = schedule.pulses()[0];
        let dropped = pulse_response(t_final, &first);
        assert!((deviation - dropped).abs() < 1e-12);
        assert!((dropped - 0.718076204808346).abs() < 1e-9);
    }

    #[test]
    fn decode_thresholding() {
        assert_eq!(decode(&[2.0f64], 1.5), vec![true]);
        assert_eq!(decode(&[1.0f64, 2.0, 1.0], 1.5), vec![false, true, false]);
        assert_eq!(decode(&[1.49999f64], 1.5), vec![false]);
        assert_eq!(decode(&[1.5f64], 1.5), vec![true]);
    }

    #[test]
    fn round_trip_short_messages() {
        use rand::{Rng, SeedableRng};
        let d = test_durations();
        let (alpha, _) = effective_alpha(F, &d).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let msg: Vec<bool> = (0..32).map(|_| rng.gen::<bool>()).collect();
            let (symbols, _) = encode(&msg, &d, F, alpha).unwrap();
            let b = markov_boundary_concentrations(&symbols, &d, F);
            assert_eq!(decode(&b, DEFAULT_THRESHOLD), msg);
        }
    }

    #[test]
    fn effective_alpha_reference_points() {
        let d = test_durations();
        // memory alone exceeds 2S at t11 = 1: clamped with overshoot
        let (alpha, overshoot) = effective_alpha(F, &d).unwrap();
        assert_eq!(alpha, 0.0);
        assert!((overshoot - 0.233128920831468).abs() < 1e-9);

        // at the alpha = 0 root of the timing equation the overshoot vanishes
        let t11 = solve_t11(F, d.t01, 0.0).unwrap().unwrap();
        let d2 = SymbolDurations::new(1.0, d.t01, d.t10, t11).unwrap();
        let (alpha, overshoot) = effective_alpha(F, &d2).unwrap();
        assert!(alpha.abs() < 1e-8);
        assert!(overshoot.abs() < 1e-8);

        // very long t11: small fraction sustains the level, no overshoot
        let d3 = SymbolDurations::new(1.0, d.t01, d.t10, 1e6).unwrap();
        let (alpha, overshoot) = effective_alpha(F, &d3).unwrap();
        assert_eq!(overshoot, 0.0);
        let raw = solve_alpha(F, d.t01, 1e6).unwrap().unwrap();
        assert!((alpha - raw).abs() < 1e-12);
    }

    #[test]
    fn effective_alpha_infeasible_when_level_unreachable() {
        // a t01 far shorter than the timing equation demands: even the
        // memory plus full-rate emission stays below 2S at the end of t11
        let d = SymbolDurations::new(1.0, 0.1, 1.0, 0.1).unwrap();
        assert!(matches!(effective_alpha(1.2, &d), Err(Error::Infeasible(_))));

        // whereas a consistent t01 is always feasible: the alpha = 1
        // response is the in-pulse value of a longer full-rate pulse
        let d = SymbolDurations::new(1.0, solve_t01(1.2f64).unwrap(), 1.0, 1e-3).unwrap();
        assert!(effective_alpha(1.2, &d).is_ok());
    }
}
