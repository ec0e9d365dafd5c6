//! Parsers for complex and rational flag values.

use num_rational::Ratio;

use elliptica::C64;

/// Parse `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i` (exponents like `1e-3` allowed).
pub fn complex(raw: &str) -> Result<C64, String> {
    let t: String = raw.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err("empty complex literal".into());
    }
    let Some(body) = t.strip_suffix(['i', 'j']) else {
        return real(&t).map(|re| C64::new(re, 0.0));
    };
    // split at the last sign that is not leading and not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re_part, im_part) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let im = match im_part {
        "" | "+" => 1.0,
        "-" => -1.0,
        s => real(s)?,
    };
    let re = if re_part.is_empty() { 0.0 } else { real(re_part)? };
    Ok(C64::new(re, im))
}

fn real(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("invalid number {s:?}"))?;
    if !v.is_finite() {
        return Err(format!("non-finite number {s:?}"));
    }
    Ok(v)
}

/// Parse `n` or `n/d` with `d > 0` after normalization.
pub fn rational(raw: &str) -> Result<Ratio<i64>, String> {
    let t = raw.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n, d),
        None => (t, "1"),
    };
    let n: i64 = n.trim().parse().map_err(|_| format!("invalid rational {raw:?}"))?;
    let d: i64 = d.trim().parse().map_err(|_| format!("invalid rational {raw:?}"))?;
    if d == 0 {
        return Err(format!("zero denominator in {raw:?}"));
    }
    Ok(Ratio::new(n, d))
}

/// Parse an inclusive integer range `a..b` (or `a..=b`).
pub fn range(raw: &str) -> Result<(i64, i64), String> {
    let (a, b) = raw
        .split_once("..")
        .ok_or_else(|| format!("expected a range like -10..10, got {raw:?}"))?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let lo: i64 = a.trim().parse().map_err(|_| format!("invalid range start in {raw:?}"))?;
    let hi: i64 = b.trim().parse().map_err(|_| format!("invalid range end in {raw:?}"))?;
    if lo > hi {
        return Err(format!("empty range {raw:?}"));
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals() {
        let cases = [
            ("0.5", C64::new(0.5, 0.0)),
            ("0.5+0.25i", C64::new(0.5, 0.25)),
            ("-0.3-2i", C64::new(-0.3, -2.0)),
            ("2i", C64::new(0.0, 2.0)),
            ("-i", C64::new(0.0, -1.0)),
            ("i", C64::new(0.0, 1.0)),
            ("1e-3+1e-2i", C64::new(1e-3, 1e-2)),
            ("-1.5e+2-3E-1i", C64::new(-150.0, -0.3)),
            (" 1 + 2i ", C64::new(1.0, 2.0)),
        ];
        for (raw, want) in cases {
            assert_eq!(complex(raw).unwrap(), want, "{raw}");
        }
        for bad in ["", "abc", "1+", "1++2i", "nan", "inf", "1+2k"] {
            assert!(complex(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn rationals_and_ranges() {
        assert_eq!(rational("-2/4").unwrap(), Ratio::new(-1, 2));
        assert_eq!(rational("3").unwrap(), Ratio::from_integer(3));
        assert!(rational("1/0").is_err());
        assert!(rational("x").is_err());
        assert_eq!(range("-4..4").unwrap(), (-4, 4));
        assert_eq!(range("0..=3").unwrap(), (0, 3));
        assert!(range("3..1").is_err());
    }
}
