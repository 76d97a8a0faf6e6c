//! Exact numeric values.
//!
//! Every coordinate and every measure value is an exact rational. Inputs are
//! read from decimal text, so denominators are usually powers of ten; the
//! embeddings introduce halves and eighths.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact coordinate / distance value.
pub type Rational = Ratio<i64>;

/// Exact volume value (hypervolume can exceed the 64-bit range).
pub type Volume = Ratio<i128>;

/// Parses a decimal (`-1.25`, `3`, `2.5e-3`) or fraction (`7/8`) literal.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::Input("empty numeric field".into()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: i64 = num
            .trim()
            .parse()
            .map_err(|_| Error::Input(format!("bad numerator in '{s}'")))?;
        let d: i64 = den
            .trim()
            .parse()
            .map_err(|_| Error::Input(format!("bad denominator in '{s}'")))?;
        if d == 0 {
            return Err(Error::Input(format!("zero denominator in '{s}'")));
        }
        return Ok(Rational::new(n, d));
    }

    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i32 = s[pos + 1..]
                .parse()
                .map_err(|_| Error::Input(format!("bad exponent in '{s}'")))?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (negative, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(Error::Input(format!("not a number: '{s}'")));
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(Error::Input(format!("not a number: '{s}'")));
    }

    let digits = format!("{int_part}{frac_part}");
    let digits = digits.trim_start_matches('0');
    let mut numer: i64 = if digits.is_empty() {
        0
    } else {
        digits
            .parse()
            .map_err(|_| Error::Overflow(format!("too many digits in '{s}'")))?
    };
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i32;
    let pow = |e: u32| -> Result<i64> {
        10i64
            .checked_pow(e)
            .ok_or_else(|| Error::Overflow(format!("exponent out of range in '{s}'")))
    };
    if scale >= 0 {
        let factor = pow(scale as u32)?;
        let value = numer
            .checked_mul(factor)
            .ok_or_else(|| Error::Overflow(format!("value out of range: '{s}'")))?;
        Ok(Rational::from_integer(value))
    } else {
        Ok(Rational::new(numer, pow((-scale) as u32)?))
    }
}

/// Formats a rational exactly: a terminating decimal when the denominator
/// only has factors 2 and 5, otherwise `p/q`. `parse_rational` inverts this.
pub fn format_rational(value: &Rational) -> String {
    let numer = *value.numer();
    let denom = *value.denom();
    if denom == 1 {
        return numer.to_string();
    }
    let (mut twos, mut fives, mut rest) = (0u32, 0u32, denom);
    while rest % 2 == 0 {
        rest /= 2;
        twos += 1;
    }
    while rest % 5 == 0 {
        rest /= 5;
        fives += 1;
    }
    if rest != 1 {
        return format!("{numer}/{denom}");
    }
    let places = twos.max(fives);
    // numer/denom = numer * (10^places / denom) / 10^places
    let widen = 10i128.pow(places) / denom as i128;
    let scaled = numer as i128 * widen;
    let unit = 10i128.pow(places);
    let sign = if scaled < 0 { "-" } else { "" };
    let abs = scaled.abs();
    format!(
        "{sign}{}.{:0width$}",
        abs / unit,
        abs % unit,
        width = places as usize
    )
}

/// Like [`format_rational`], falling back to `p/q` beyond the 64-bit range.
pub fn format_volume(value: &Volume) -> String {
    match (i64::try_from(*value.numer()), i64::try_from(*value.denom())) {
        (Ok(n), Ok(d)) => format_rational(&Rational::new(n, d)),
        _ => format!("{}/{}", value.numer(), value.denom()),
    }
}

pub fn to_f64(value: &Rational) -> f64 {
    *value.numer() as f64 / *value.denom() as f64
}

pub fn volume_to_f64(value: &Volume) -> f64 {
    value.numer().to_f64().unwrap_or(f64::NAN) / value.denom().to_f64().unwrap_or(f64::NAN)
}

pub fn widen(value: &Rational) -> Volume {
    Volume::new(*value.numer() as i128, *value.denom() as i128)
}

/// Least common multiple of the denominators, with overflow detection.
pub(crate) fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Result<i64> {
    let mut lcm: i64 = 1;
    for v in values {
        let d = *v.denom();
        let g = lcm.gcd(&d);
        lcm = (lcm / g)
            .checked_mul(d)
            .ok_or_else(|| Error::Overflow("common denominator exceeds 64 bits".into()))?;
    }
    Ok(lcm)
}

/// `value * scale` as an integer; `scale` must be a multiple of the denominator.
pub(crate) fn scale_to_integer(value: &Rational, scale: i64) -> Result<i64> {
    debug_assert_eq!(scale % value.denom(), 0);
    (scale / value.denom())
        .checked_mul(*value.numer())
        .ok_or_else(|| Error::Overflow("scaled coordinate exceeds 64 bits".into()))
}

pub(crate) fn abs_diff(a: &Rational, b: &Rational) -> Rational {
    (a - b).abs()
}

pub(crate) fn positive_part(v: Rational) -> Rational {
    if v.is_positive() {
        v
    } else {
        Rational::zero()
    }
}
