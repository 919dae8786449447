//! Locale-independent number formatting with 9 significant digits.

/// Significant digits in every emitted number.
pub const SIG_DIGITS: usize = 9;

/// Formats like C's `%.9g`: plain decimal for exponents in `[-4, 9)`,
/// scientific otherwise, trailing zeros trimmed, `-0` printed as `0`.
pub fn fmt_sig(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "NaN".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let s = if (-4..SIG_DIGITS as i32).contains(&exp) {
        let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim_zeros(mantissa.to_string()), exp)
    };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Value rounded to 9 significant digits, for JSON emission.
pub fn round_sig(x: f64) -> f64 {
    let r: f64 = fmt_sig(x).parse().unwrap_or(x);
    if r == 0.0 {
        0.0
    } else {
        r
    }
}
