//! Fixed-precision number output for reports.

/// Significant digits written to every report.
pub const REPORT_DIGITS: usize = 12;

/// Rounds `x` to `digits` significant decimal digits, ties to even.
///
/// The result is the `f64` nearest to the rounded decimal, so its shortest
/// `Display` form has at most `digits` significant digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    let s = format!("{:.*e}", digits.saturating_sub(1), x);
    s.parse().expect("formatted float parses")
}

/// `round_sig(x, REPORT_DIGITS)` rendered with `Display`.
pub fn format_report(x: f64) -> String {
    let r = round_sig(x, REPORT_DIGITS);
    if r == 0.0 {
        // no negative zero in reports
        return "0".to_owned();
    }
    format!("{r}")
}

/// `serialize_with` helper writing floats at report precision.
pub fn serialize_report<S: serde::Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(round_sig(*x, REPORT_DIGITS))
}
