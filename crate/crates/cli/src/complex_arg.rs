//! Parser for complex CLI literals in `a+bi` form.

use std::str::FromStr;

use twinbeam_core::C64;

/// Complex argument wrapper accepted in forms like `2`, `-1.5i`, `1+1i`,
/// `0.3-0.25i`, `3e-2+1e-1i`.
#[derive(Debug, Clone, Copy)]
pub struct ComplexArg(pub C64);

impl FromStr for ComplexArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.is_empty() {
            return Err("empty complex literal".into());
        }
        if let Some(body) = t.strip_suffix(['i', 'I']) {
            // Split body into real and imaginary parts at the last +/-
            // that is not part of an exponent and not the leading sign.
            let bytes = body.as_bytes();
            let mut split = None;
            for (idx, &b) in bytes.iter().enumerate().skip(1) {
                if (b == b'+' || b == b'-')
                    && !matches!(bytes[idx - 1], b'e' | b'E')
                {
                    split = Some(idx);
                }
            }
            match split {
                Some(idx) => {
                    let re: f64 = body[..idx]
                        .parse()
                        .map_err(|_| format!("bad real part in `{s}`"))?;
                    let imag_str = &body[idx..];
                    let im: f64 = if imag_str == "+" {
                        1.0
                    } else if imag_str == "-" {
                        -1.0
                    } else {
                        imag_str.parse().map_err(|_| format!("bad imaginary part in `{s}`"))?
                    };
                    Ok(ComplexArg(C64::new(re, im)))
                }
                None => {
                    // Pure imaginary: `i`, `-i`, `2.5i`.
                    let im: f64 = if body.is_empty() {
                        1.0
                    } else if body == "-" {
                        -1.0
                    } else if body == "+" {
                        1.0
                    } else {
                        body.parse().map_err(|_| format!("bad imaginary literal `{s}`"))?
                    };
                    Ok(ComplexArg(C64::new(0.0, im)))
                }
            }
        } else {
            let re: f64 = t.parse().map_err(|_| format!("bad complex literal `{s}`"))?;
            Ok(ComplexArg(C64::new(re, 0.0)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> C64 {
        s.parse::<ComplexArg>().unwrap().0
    }

    #[test]
    fn literal_forms() {
        assert_eq!(parse("2"), C64::new(2.0, 0.0));
        assert_eq!(parse("-1.5"), C64::new(-1.5, 0.0));
        assert_eq!(parse("1+1i"), C64::new(1.0, 1.0));
        assert_eq!(parse("0.5-0.25i"), C64::new(0.5, -0.25));
        assert_eq!(parse("1i"), C64::new(0.0, 1.0));
        assert_eq!(parse("-i"), C64::new(0.0, -1.0));
        assert_eq!(parse("i"), C64::new(0.0, 1.0));
        assert_eq!(parse("3e-2+1e-1i"), C64::new(0.03, 0.1));
        assert_eq!(parse("-2.5-3i"), C64::new(-2.5, -3.0));
        assert_eq!(parse("1+i"), C64::new(1.0, 1.0));
    }

    #[test]
    fn rejects_garbage() {
        assert!("".parse::<ComplexArg>().is_err());
        assert!("1+".parse::<ComplexArg>().is_err());
        assert!("abc".parse::<ComplexArg>().is_err());
        assert!("1+2j".parse::<ComplexArg>().is_err());
    }
}
