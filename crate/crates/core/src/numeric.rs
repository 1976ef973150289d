//! Small numeric helpers shared across modules: the complex alias, the
//! residual metric, and the textual complex format used by the CLI.

use num_complex::Complex;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

/// Residual metric used by every identity check:
/// `|a - b| / (1 + max(|a|, |b|))`.
///
/// Behaves like a relative error for large values and like an absolute error
/// near zero.
pub fn rel_err(a: C64, b: C64) -> f64 {
    (a - b).norm() / (1.0 + a.norm().max(b.norm()))
}

pub fn abs_err(a: C64, b: C64) -> f64 {
    (a - b).norm()
}

/// Rounds `x` to `digits` significant decimal digits and prints the shortest
/// decimal string that parses back to the rounded value.
///
/// At 17 digits the rounded value is `x` itself, so the output re-parses
/// bit-identically. Both zeros print as `0`.
pub fn format_real(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "NaN".to_string()
        } else if x > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        };
    }
    let digits = digits.clamp(1, 17);
    let rounded: f64 = format!("{:.*e}", digits - 1, x)
        .parse()
        .expect("formatted float re-parses");
    let a = rounded.abs();
    if a == 0.0 {
        "0".to_string()
    } else if (1e-5..1e16).contains(&a) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

/// `a+bi` / `a-bi` with no spaces.
pub fn format_complex(z: C64, digits: usize) -> String {
    let re = format_real(z.re, digits);
    let im = format_real(z.im, digits);
    if im.starts_with('-') {
        format!("{re}{im}i")
    } else {
        format!("{re}+{im}i")
    }
}

/// Parses `a+bi`, `a-bi`, a bare real `a`, or a bare imaginary `bi`.
/// Exponents (`1e-3+2i`) are accepted; whitespace is not.
pub fn parse_complex(s: &str) -> Result<C64> {
    let bad = || Error::InvalidArgument(format!("cannot parse complex number {s:?}"));
    if s.is_empty() || s.chars().any(char::is_whitespace) {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().map(|re| C64::new(re, 0.0)).map_err(|_| bad());
    };
    // Split at the last sign that is neither leading nor part of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let parse_im = |t: &str| -> Result<f64> {
        match t {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => t.parse::<f64>().map_err(|_| bad()),
        }
    };
    match split {
        Some(k) => {
            let re = body[..k].parse::<f64>().map_err(|_| bad())?;
            Ok(C64::new(re, parse_im(&body[k..])?))
        }
        None => Ok(C64::new(0.0, parse_im(body)?)),
    }
}

/// `n!` as a float; exact up to 22!.
pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_flag_syntax() {
        assert_eq!(parse_complex("1+0i").unwrap(), C64::new(1.0, 0.0));
        assert_eq!(parse_complex("3-1i").unwrap(), C64::new(3.0, -1.0));
        assert_eq!(parse_complex("0").unwrap(), C64::new(0.0, 0.0));
        assert_eq!(parse_complex("-2.5").unwrap(), C64::new(-2.5, 0.0));
        assert_eq!(parse_complex("0.1+0.3i").unwrap(), C64::new(0.1, 0.3));
        assert_eq!(parse_complex("-1e-3-2E+2i").unwrap(), C64::new(-1e-3, -200.0));
        assert_eq!(parse_complex("2i").unwrap(), C64::new(0.0, 2.0));
        assert_eq!(parse_complex("-i").unwrap(), C64::new(0.0, -1.0));
        assert_eq!(parse_complex("1-i").unwrap(), C64::new(1.0, -1.0));
    }

    #[test]
    fn rejects_malformed() {
        for s in ["", "1 + 2i", "abc", "1+2j", "1++2i", "i1"] {
            assert!(parse_complex(s).is_err(), "{s}");
        }
    }

    #[test]
    fn formats_compactly() {
        assert_eq!(format_complex(C64::new(2.0, 0.0), 15), "2+0i");
        assert_eq!(format_complex(C64::new(1.0, -1.0), 15), "1-1i");
        assert_eq!(format_real(1.0 / 3.0, 3), "0.333");
        assert_eq!(format_real(1.5e-9, 15), "1.5e-9");
    }

    #[test]
    fn precision_17_round_trips() {
        for &x in &[std::f64::consts::PI, 1.0 / 3.0, -2.718281828459045e-7, 6.02214076e23, 1e-300] {
            let s = format_real(x, 17);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
        }
    }

    #[test]
    fn rel_err_is_absolute_near_zero() {
        assert_eq!(rel_err(C64::new(0.0, 0.0), C64::new(1e-12, 0.0)), 1e-12 / (1.0 + 1e-12));
        assert!((rel_err(C64::new(1e6, 0.0), C64::new(1e6 + 1.0, 0.0)) - 1e-6).abs() < 1e-9);
    }
}
