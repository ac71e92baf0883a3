//! Exact rational scalars and small helpers shared across modules.

use num::bigint::Sign;
use num::{BigInt, BigRational, Integer, One, Signed, Zero};

use crate::error::{CrnError, Result};

/// Exact rational scalar used for every structural computation.
pub type Rat = BigRational;

/// `n` as an exact rational.
pub fn rat_i64(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `n / d` as an exact rational. Panics if `d == 0`.
pub fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses an exact rational from integer (`-3`), fraction (`7/4`) or decimal
/// (`0.25`) notation. Decimals are converted exactly (base-10), never via
/// floating point.
pub fn parse_rational(s: &str) -> Result<Rat> {
    let t = s.trim();
    let err = || CrnError::Invalid(format!("cannot parse '{t}' as a rational number"));
    if t.is_empty() {
        return Err(err());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err())?;
        let d: BigInt = d.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(CrnError::Invalid(format!("zero denominator in '{t}'")));
        }
        return Ok(Rat::new(n, d));
    }
    if let Some((ip, fp)) = t.split_once('.') {
        let (sign, ip_digits) = match ip.trim() {
            x if x.starts_with('-') => (-1i64, &x[1..]),
            x if x.starts_with('+') => (1, &x[1..]),
            x => (1, x),
        };
        let fp = fp.trim();
        if !fp.chars().all(|c| c.is_ascii_digit()) || fp.is_empty() {
            return Err(err());
        }
        if !ip_digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(err());
        }
        let int_part: BigInt = if ip_digits.is_empty() {
            BigInt::zero()
        } else {
            ip_digits.parse().map_err(|_| err())?
        };
        let frac_part: BigInt = fp.parse().map_err(|_| err())?;
        let scale = BigInt::from(10u32).pow(fp.len() as u32);
        let v = Rat::new(int_part * &scale + frac_part, scale);
        return Ok(if sign < 0 { -v } else { v });
    }
    let n: BigInt = t.parse().map_err(|_| err())?;
    Ok(Rat::from_integer(n))
}

/// Exact rational from an `f64` (every finite float is a dyadic rational).
pub fn rat_from_f64(x: f64) -> Result<Rat> {
    Rat::from_float(x).ok_or_else(|| CrnError::Numeric(format!("non-finite value {x}")))
}

/// Lossy conversion to `f64` for numeric work.
pub fn rat_to_f64(x: &Rat) -> f64 {
    // `to_f64` only fails on huge magnitudes; saturate in that case.
    num::ToPrimitive::to_f64(x).unwrap_or(if x.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    })
}

/// Scales a rational vector to coprime integers with positive first nonzero
/// entry. The zero vector is returned unchanged. The result spans the same
/// line as the input.
pub fn canonical_int_vector(v: &[Rat]) -> Vec<Rat> {
    let mut denom_lcm = BigInt::one();
    for x in v {
        denom_lcm = denom_lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rat::from_integer(denom_lcm.clone())).to_integer()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return v.to_vec();
    }
    let mut out: Vec<BigInt> = ints.into_iter().map(|x| x / &g).collect();
    if let Some(first) = out.iter().find(|x| !x.is_zero()) {
        if first.sign() == Sign::Minus {
            for x in &mut out {
                *x = -x.clone();
            }
        }
    }
    out.into_iter().map(Rat::from_integer).collect()
}

/// Formats a rational compactly (`3`, `-7/4`).
pub fn rat_display(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}
