//! Locale-independent number formatting for CSV output.

/// Format `x` with `digits` significant digits, following the rules of C's
/// `%.{digits}g`: plain decimal notation when the decimal exponent lies in
/// `[-4, digits)`, scientific otherwise, trailing zeros removed.
pub fn sig(x: f64, digits: usize) -> String {
    assert!(digits >= 1);
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    // Rounding to `digits` can carry into the next decade, so take the
    // exponent from the rounded scientific rendering.
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        format!("{}e{}", trim_zeros(mantissa), exp)
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

/// Nine significant digits, the precision used for every CSV this crate writes.
pub fn sig9(x: f64) -> String {
    sig(x, 9)
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
