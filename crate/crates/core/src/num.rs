//! Exact rational helpers shared by every module.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number used for costs, capacities and LP values.
pub type Q = BigRational;

pub fn int(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

pub fn ratio(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}

/// Parses `12`, `0.75`, `-3` or `3/4`.
pub fn parse_rational(text: &str) -> Option<Q> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    if let Some((n, d)) = text.split_once('/') {
        let n: BigInt = n.parse().ok()?;
        let d: BigInt = d.parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Q::new(n, d));
    }
    let (neg, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let (whole, frac) = match body.split_once('.') {
        Some((w, f)) => (w, f),
        None => (body, ""),
    };
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{whole}{frac}");
    let numer: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().ok()?
    };
    let denom = num_traits::pow(BigInt::from(10), frac.len());
    let value = Q::new(numer, denom);
    Some(if neg { -value } else { value })
}

/// Canonical text form: `a` for integers, `a/b` otherwise.
pub fn format_rational(v: &Q) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

pub fn to_f64(v: &Q) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

pub fn sum<'a>(values: impl IntoIterator<Item = &'a Q>) -> Q {
    values.into_iter().fold(Q::zero(), |acc, v| acc + v)
}

/// `min(1, factor * v)`.
pub fn clamp_scaled(v: &Q, factor: &Q) -> Q {
    let s = v * factor;
    if s > Q::one() {
        Q::one()
    } else {
        s
    }
}

/// Scales nonnegative rationals by the lcm of their denominators so that the
/// result is an integer vector with the same ordering of all subset sums.
pub fn scale_to_integers(values: &[Q]) -> Option<Vec<i128>> {
    let mut lcm = BigInt::one();
    for v in values {
        if v.is_negative() {
            return None;
        }
        lcm = lcm.lcm(v.denom());
    }
    values
        .iter()
        .map(|v| (v.numer() * (&lcm / v.denom())).to_i128())
        .collect()
}

pub fn ceil_log2(k: u64) -> u32 {
    if k <= 1 {
        0
    } else {
        64 - (k - 1).leading_zeros()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimals_and_fractions() {
        assert_eq!(parse_rational("0.75"), Some(ratio(3, 4)));
        assert_eq!(parse_rational("3/4"), Some(ratio(3, 4)));
        assert_eq!(parse_rational("12"), Some(int(12)));
        assert_eq!(parse_rational("-1.5"), Some(ratio(-3, 2)));
        assert_eq!(parse_rational(".5"), Some(ratio(1, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational("."), None);
    }

    #[test]
    fn canonical_format() {
        assert_eq!(format_rational(&ratio(6, 4)), "3/2");
        assert_eq!(format_rational(&int(7)), "7");
    }

    #[test]
    fn integer_scaling_preserves_ratios() {
        let scaled = scale_to_integers(&[ratio(1, 2), ratio(1, 3), int(2)]).unwrap();
        assert_eq!(scaled, vec![3, 2, 12]);
        assert!(scale_to_integers(&[int(-1)]).is_none());
    }

    #[test]
    fn log2_ceiling() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(5), 3);
        assert_eq!(ceil_log2(16), 4);
        assert_eq!(ceil_log2(17), 5);
    }
}
