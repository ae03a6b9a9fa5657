//! Text formatting shared by every CSV writer.

/// Formats `x` like C's `%.17g`: 17 significant digits, trailing zeros
/// stripped, scientific notation outside `1e-4 <= |x| < 1e17`.
pub fn real(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    const PRECISION: i32 = 17;
    let sci = format!("{:.*e}", (PRECISION - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..PRECISION).contains(&exp) {
        let decimals = (PRECISION - 1 - exp).max(0) as usize;
        strip_zeros(format!("{:.*}", decimals, x))
    } else {
        let mantissa = strip_zeros(mantissa.to_string());
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    }
}

fn strip_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let trimmed = s.trim_end_matches('0').trim_end_matches('.');
    trimmed.to_string()
}

#[cfg(test)]
mod tests {
    use super::real;

    #[test]
    fn matches_printf_g17() {
        // Reference strings from `'%.17g' % x` in CPython.
        assert_eq!(real(1.0), "1");
        assert_eq!(real(0.1), "0.10000000000000001");
        assert_eq!(real(-2.5), "-2.5");
        assert_eq!(real(1e-5), "1.0000000000000001e-05");
        assert_eq!(real(123456.0), "123456");
        assert_eq!(real(1e17), "1e+17");
        assert_eq!(real(1.0 / 3.0), "0.33333333333333331");
        assert_eq!(real(0.0001), "0.0001");
        assert_eq!(real(2.0f64.powi(70)), "1.1805916207174113e+21");
        assert_eq!(real(0.0), "0");
    }

    #[test]
    fn round_trips() {
        for &x in &[0.1, 1.0 / 7.0, 6.02214076e23, -3.3e-9, f64::MIN_POSITIVE] {
            assert_eq!(real(x).parse::<f64>().unwrap(), x);
        }
    }
}
