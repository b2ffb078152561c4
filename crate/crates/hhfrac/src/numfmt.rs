//! Number formatting for tables (10 significant digits) and files (17).

/// Up to 10 significant digits with trailing zeros trimmed, keeping one
/// decimal place: `1.0`, `0.25`, `0.3333333333`, `1.5e-12`.
pub fn table(x: f64) -> String {
    sig(x, 10)
}

pub fn sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0.0".into();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..10).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(1) as usize;
        trim(&format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim(mantissa))
    }
}

fn trim(s: &str) -> String {
    if !s.contains('.') {
        return format!("{s}.0");
    }
    let t = s.trim_end_matches('0');
    if t.ends_with('.') {
        format!("{t}0")
    } else {
        t.to_string()
    }
}

/// 17 significant digits in scientific notation; round-trips exactly.
pub fn file(x: f64) -> String {
    format!("{x:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_format() {
        assert_eq!(table(1.0), "1.0");
        assert_eq!(table(0.25), "0.25");
        assert_eq!(table(1.0 / 3.0), "0.3333333333");
        assert_eq!(table(2.0 / 3.0), "0.6666666667");
        assert_eq!(table(-0.5), "-0.5");
        assert_eq!(table(1.5e-12), "1.5e-12");
        assert_eq!(table(123456.0), "123456.0");
        assert_eq!(table(0.0), "0.0");
        assert_eq!(table(f64::INFINITY), "inf");
        assert_eq!(table(2.5e12), "2.5e12");
        assert_eq!(table(1e-3), "0.001");
    }

    #[test]
    fn file_format_round_trips() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02e23] {
            assert_eq!(file(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(file(0.25), "2.5000000000000000e-1");
    }
}
