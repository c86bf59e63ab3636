//! Number formatting: full precision for CSV, six significant digits for
//! human reports.

/// Seventeen significant digits in scientific notation.
pub fn csv(x: f64) -> String {
    if x == 0.0 {
        // Folds -0 into 0.
        return format!("{:.16e}", 0.0);
    }
    format!("{x:.16e}")
}

/// Six significant digits in the style of C's `%g`.
pub fn human(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        format!("{}e{}{:02}", trim(mantissa), if exp < 0 { '-' } else { '+' }, exp.abs())
    } else {
        let decimals = (5 - exp).max(0) as usize;
        trim(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
