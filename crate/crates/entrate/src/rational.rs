//! Exact rational scalars and the few float bridges the entropy code needs.
//!
//! Every probability in this crate is a [`Rational`]: an arbitrary-precision
//! fraction kept in canonical reduced form with a positive denominator.
//! Feasibility verdicts compare these exactly; only entropies ever round.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Arbitrary-precision rational in canonical reduced form.
pub type Rational = num_rational::BigRational;

/// Parses a probability entry: a fraction `"2/5"`, an integer `"1"`, or a
/// decimal literal `"0.36"` (read exactly as 36/100).
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::Parse(text.to_string()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| Error::Parse(text.to_string()))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| Error::Parse(text.to_string()))?;
        if d.is_zero() {
            return Err(Error::Parse(text.to_string()));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let (sign, int_digits) = match int_part.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, int_part.strip_prefix('+').unwrap_or(int_part)),
        };
        if !int_digits.chars().all(|c| c.is_ascii_digit())
            || !frac_part.chars().all(|c| c.is_ascii_digit())
            || (int_digits.is_empty() && frac_part.is_empty())
        {
            return Err(Error::Parse(text.to_string()));
        }
        let digits = format!("{}{}", int_digits, frac_part);
        let numer: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse().map_err(|_| Error::Parse(text.to_string()))?
        };
        let denom = BigInt::from(10u32).pow(frac_part.len() as u32);
        return Ok(Rational::new(numer * sign, denom));
    }
    let n: BigInt = s.parse().map_err(|_| Error::Parse(text.to_string()))?;
    Ok(Rational::from_integer(n))
}

/// Renders a rational as `"p/q"`, or just `"p"` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn ratio_one() -> Rational {
    Rational::one()
}

pub fn ratio_from_biguint(n: &BigUint) -> Rational {
    Rational::from_integer(BigInt::from(n.clone()))
}

/// Natural log of a positive big integer, accurate to ~1 ulp even when the
/// integer overflows f64.
pub fn ln_biguint(n: &BigUint) -> f64 {
    debug_assert!(!n.is_zero());
    let bits = n.bits();
    if bits <= 64 {
        return n.to_f64().expect("fits in f64").ln();
    }
    // ln(n) = ln(top 64 bits) + (dropped bits) * ln 2
    let shift = bits - 64;
    let top = (n >> shift).to_f64().expect("64-bit value fits");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of a positive rational.
pub fn ln_rational(r: &Rational) -> f64 {
    debug_assert!(r.is_positive());
    ln_biguint(r.numer().magnitude()) - ln_biguint(r.denom().magnitude())
}

/// Base-2 log of a positive rational.
pub fn log2_rational(r: &Rational) -> f64 {
    ln_rational(r) / std::f64::consts::LN_2
}

/// Rounds a nonnegative rational to f64, surviving numerators and
/// denominators that individually overflow f64.
pub fn rational_to_f64(r: &Rational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    debug_assert!(r.is_positive());
    let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
    let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
    if n.is_finite() && d.is_finite() && d != 0.0 {
        n / d
    } else {
        ln_rational(r).exp()
    }
}

/// Serde adapter: rationals as exact strings ("2/5").
pub mod serde_str {
    use super::{format_rational, parse_rational, Rational};
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        de: D,
    ) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(de)?;
        parse_rational(&s).map_err(de::Error::custom)
    }
}

/// Serde adapter: big unsigned integers as decimal strings (prefix lengths
/// in witnesses can exceed u64).
pub mod serde_biguint {
    use num_bigint::BigUint;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &BigUint, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&n.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        de: D,
    ) -> std::result::Result<BigUint, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(de::Error::custom)
    }
}

/// Serde adapter: `Option<Rational>` as an optional exact string.
pub mod serde_opt_str {
    use super::{format_rational, parse_rational, Rational};
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        r: &Option<Rational>,
        ser: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match r {
            Some(r) => ser.serialize_some(&format_rational(r)),
            None => ser.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        de: D,
    ) -> std::result::Result<Option<Rational>, D::Error> {
        let s = Option::<String>::deserialize(de)?;
        s.map(|s| parse_rational(&s).map_err(de::Error::custom))
            .transpose()
    }
}

/// Formats a real with 12 significant digits, trimming trailing zeros.
pub fn format_real(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let sci = format!("{:.11e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("{:e} always has an exponent");
    let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
    let exp: i32 = exp.parse().expect("exponent is an integer");
    if (-4..=14).contains(&exp) {
        // Re-render in plain decimal with the same significant digits.
        let digits = mantissa.replace(['-', '.'], "");
        let neg = x < 0.0;
        let point = exp + 1; // digits before the decimal point
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        if point <= 0 {
            out.push_str("0.");
            out.extend(std::iter::repeat_n('0', (-point) as usize));
            out.push_str(&digits);
        } else if (point as usize) >= digits.len() {
            out.push_str(&digits);
            out.extend(std::iter::repeat_n('0', point as usize - digits.len()));
        } else {
            out.push_str(&digits[..point as usize]);
            out.push('.');
            out.push_str(&digits[point as usize..]);
        }
        out
    } else {
        format!("{}e{}", mantissa, exp)
    }
}

/// Serde adapter: reals as decimal strings with 12 significant digits.
pub mod serde_real {
    use super::format_real;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&format_real(*x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> std::result::Result<f64, D::Error> {
        let s = String::deserialize(de)?;
        match s.as_str() {
            "inf" => Ok(f64::INFINITY),
            "-inf" => Ok(f64::NEG_INFINITY),
            _ => s.parse().map_err(de::Error::custom),
        }
    }
}

/// Serde adapter: `Option<f64>` with the same 12-digit convention.
pub mod serde_opt_real {
    use super::format_real;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        x: &Option<f64>,
        ser: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match x {
            Some(x) => ser.serialize_some(&format_real(*x)),
            None => ser.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        de: D,
    ) -> std::result::Result<Option<f64>, D::Error> {
        let s = Option::<String>::deserialize(de)?;
        s.map(|s| match s.as_str() {
            "inf" => Ok(f64::INFINITY),
            "-inf" => Ok(f64::NEG_INFINITY),
            _ => s.parse().map_err(de::Error::custom),
        })
        .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn parses_fractions_integers_decimals() {
        assert_eq!(rat("2/5"), Rational::new(2.into(), 5.into()));
        assert_eq!(rat("0.36"), Rational::new(9.into(), 25.into()));
        assert_eq!(rat("1"), Rational::one());
        assert_eq!(rat(" 4/6 "), Rational::new(2.into(), 3.into()));
        assert_eq!(rat(".5"), Rational::new(1.into(), 2.into()));
        assert_eq!(rat("-0.25"), Rational::new((-1).into(), 4.into()));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "abc", "1/0", "1.2.3", "2/", "0x10", "1e3"] {
            assert!(parse_rational(bad).is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn format_round_trips() {
        for s in ["2/5", "1", "36/100", "1/3"] {
            let r = rat(s);
            assert_eq!(rat(&format_rational(&r)), r);
        }
    }

    #[test]
    fn ln_of_huge_integers() {
        let n = BigUint::from(3u32).pow(400);
        let expect = 400.0 * 3f64.ln();
        assert!((ln_biguint(&n) - expect).abs() < 1e-9 * expect);
    }

    #[test]
    fn f64_of_tiny_rationals() {
        // (2/5)^300 underflows both numerator and denominator paths.
        let r = Rational::new(2.into(), 5.into()).pow(300);
        let x = rational_to_f64(&r);
        let expect = 300.0 * (0.4f64).ln();
        assert!((x.ln() - expect).abs() < 1e-9 * expect.abs());
    }

    #[test]
    fn real_formatting() {
        assert_eq!(format_real(0.0), "0");
        assert_eq!(format_real(1.0), "1");
        assert_eq!(format_real(0.5), "0.5");
        assert_eq!(format_real(1.125), "1.125");
        assert_eq!(format_real(-0.001), "-0.001");
        let x = 1.16442983762_f64;
        assert_eq!(format_real(x).parse::<f64>().unwrap(), x);
        let tiny = 3.5e-20;
        assert!((format_real(tiny).parse::<f64>().unwrap() - tiny).abs() < 1e-30);
    }
}
