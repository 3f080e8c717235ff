//! Number formatting shared by TSV, text and JSON output.

/// Nine significant digits, trailing zeros trimmed; exponent form outside `[1e-4, 1e9)`.
pub fn fmt_real(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let mag = x.abs();
    if !(1e-4..1e9).contains(&mag) {
        let s = format!("{x:.8e}");
        let (mantissa, exp) = s.split_once('e').unwrap_or((&s, "0"));
        return format!("{}e{exp}", trim(mantissa));
    }
    let int_digits = mag.log10().floor() as i32 + 1;
    let decimals = (9 - int_digits).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // rounding can carry into a new digit (9.9999999996 -> 10.00000000)
    trim(&s).to_string()
}

fn trim(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::fmt_real;

    #[test]
    fn significant_digits() {
        assert_eq!(fmt_real(2f64.sqrt()), "1.41421356");
        assert_eq!(fmt_real(2.0), "2");
        assert_eq!(fmt_real(0.0), "0");
        assert_eq!(fmt_real(123456.789123), "123456.789");
        assert_eq!(fmt_real(-0.5), "-0.5");
        assert_eq!(fmt_real(1.5e12), "1.5e12");
        assert_eq!(fmt_real(1.0 / 3.0 * 1e-6), "3.33333333e-7");
        assert_eq!(fmt_real(f64::NAN), "nan");
    }
}
