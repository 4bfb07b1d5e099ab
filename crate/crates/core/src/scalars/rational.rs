use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational; always stored in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // Fall back for huge operands: scale both parts down together.
        let n = q.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = q.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// Parse `-3`, `3/5`, `0.125` or `-1.5e-2` style literals exactly.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = Rational::from_integer(digits.parse::<BigInt>().ok()?);
    let shift = exp - frac_part.len() as i32;
    let ten = Rational::from_integer(10.into());
    if shift >= 0 {
        value *= num_traits::pow(ten, shift as usize);
    } else {
        value /= num_traits::pow(ten, (-shift) as usize);
    }
    Some(if neg { -value } else { value })
}

fn exact_root(n: &BigInt, k: u32) -> Option<BigInt> {
    let r = n.nth_root(k);
    if num_traits::pow(r.clone(), k as usize) == *n {
        Some(r)
    } else {
        None
    }
}

/// `q^p` when the result is again rational, e.g. `8^(1/3) = 2`.
pub(crate) fn exact_pow(q: &Rational, p: &Rational) -> Option<Rational> {
    let k = p.denom().to_u32()?;
    let m = p.numer().to_i64()?;
    if q.is_zero() {
        return if m > 0 { Some(Rational::zero()) } else { None };
    }
    if q.is_negative() && k % 2 == 0 {
        return None;
    }
    let sign = if q.is_negative() { -BigInt::one() } else { BigInt::one() };
    let num = q.numer().abs();
    let den = q.denom().clone();
    let root = Rational::new(sign * exact_root(&num, k)?, exact_root(&den, k)?);
    let powered = num_traits::pow(root, m.unsigned_abs() as usize);
    Some(if m < 0 { num_traits::Inv::inv(powered) } else { powered })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_literals() {
        assert_eq!(parse_rational("3/5"), Some(rat(3, 5)));
        assert_eq!(parse_rational("-2"), Some(rat(-2, 1)));
        assert_eq!(parse_rational("0.1"), Some(rat(1, 10)));
        assert_eq!(parse_rational("-1.5e-2"), Some(rat(-3, 200)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational("."), None);
    }

    #[test]
    fn lowest_terms() {
        let q = rat(6, -4);
        assert_eq!(q.numer(), &BigInt::from(-3));
        assert_eq!(q.denom(), &BigInt::from(2));
        assert_eq!(rat(0, 7), rat(0, 1));
    }

    #[test]
    fn exact_powers() {
        assert_eq!(exact_pow(&rat(8, 1), &rat(1, 3)), Some(rat(2, 1)));
        assert_eq!(exact_pow(&rat(-8, 27), &rat(1, 3)), Some(rat(-2, 3)));
        assert_eq!(exact_pow(&rat(4, 9), &rat(-3, 2)), Some(rat(27, 8)));
        assert_eq!(exact_pow(&rat(2, 1), &rat(1, 2)), None);
        assert_eq!(exact_pow(&rat(-4, 1), &rat(1, 2)), None);
    }
}
