use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Reduced fraction with positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Canonical text form: `p` for integers, `p/q` otherwise.
pub fn render_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_roundtrip() {
        let q = rat_frac(6, -4);
        assert_eq!(render_rational(&q), "-3/2");
        assert_eq!(parse_rational("-3/2"), Some(q));
        assert_eq!(render_rational(&rat(5)), "5");
        assert_eq!(parse_rational("1/0"), None);
    }
}
