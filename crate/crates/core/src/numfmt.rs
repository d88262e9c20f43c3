//! Fixed-precision float formatting shared by the text and CSV outputs.

/// Formats `x` with exactly 12 significant digits: plain decimal for
/// magnitudes in `[1e-4, 1e12)`, scientific otherwise.
pub fn sig12(x: f64) -> String {
    sig(x, 12)
}

pub fn sig(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return format!("{:.*}", digits - 1, 0.0);
    }
    // rounding can carry into the next decade, so take the exponent from the
    // scientific rendering rather than from log10
    let sci = format!("{:.*e}", digits - 1, x);
    let exp: i32 = sci
        .rsplit('e')
        .next()
        .and_then(|e| e.parse().ok())
        .unwrap_or(0);
    if (-4..12).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        sci
    }
}
