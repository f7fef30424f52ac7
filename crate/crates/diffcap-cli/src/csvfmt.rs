//! Deterministic CSV number formatting: 12 significant digits, '.' decimal
//! separator, positional notation in the everyday range and scientific
//! beyond it, trailing zeros stripped.

pub fn fmt_sig(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exponent) = sci.split_once('e').expect("e-notation");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    if !(-4..12).contains(&exponent) {
        let m = mantissa.trim_end_matches('0').trim_end_matches('.');
        format!("{m}e{exponent}")
    } else {
        let decimals = (11 - exponent).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    }
}
