use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// An angle stored exactly as a fraction of a full turn; `p/q` means
/// `2π·p/q` radians. Always reduced with a positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Turn(BigRational);

impl Turn {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::validation("turn.den", "denominator must be nonzero"));
        }
        Ok(Turn(BigRational::new(num.into(), den.into())))
    }

    pub fn zero() -> Self {
        Turn(BigRational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// `k` times this angle, not reduced.
    pub fn scale(&self, k: i64) -> Turn {
        Turn(&self.0 * BigRational::from_integer(k.into()))
    }

    /// Representative in `[0, 1)`.
    pub fn fract(&self) -> Turn {
        let (n, d) = (self.0.numer(), self.0.denom());
        Turn(BigRational::new(n.mod_floor(d), d.clone()))
    }

    /// Representative in `(-1/2, 1/2]`.
    pub fn centered(&self) -> Turn {
        let f = self.fract();
        let half = BigRational::new(1.into(), 2.into());
        if f.0 > half {
            Turn(f.0 - BigRational::one())
        } else {
            f
        }
    }

    /// Equal modulo whole turns.
    pub fn congruent(&self, other: &Turn) -> bool {
        (self - other).fract().is_zero()
    }

    /// Radians of the `[0, 1)` representative; the reduction happens before
    /// rounding so large multiples lose no precision.
    pub fn radians(&self) -> f64 {
        let f = self.fract();
        2.0 * std::f64::consts::PI * ratio_to_f64(&f.0)
    }

    /// Radians of the `(-1/2, 1/2]` representative.
    pub fn centered_radians(&self) -> f64 {
        2.0 * std::f64::consts::PI * ratio_to_f64(&self.centered().0)
    }

    pub fn as_f64(&self) -> f64 {
        ratio_to_f64(&self.0)
    }
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    match (r.numer().to_i64(), r.denom().to_i64()) {
        (Some(n), Some(d)) if n.unsigned_abs() < 1 << 53 && d < 1 << 53 => n as f64 / d as f64,
        _ => r.to_f64().unwrap_or(f64::NAN),
    }
}

impl Add for &Turn {
    type Output = Turn;
    fn add(self, rhs: &Turn) -> Turn {
        Turn(&self.0 + &rhs.0)
    }
}

impl Add for Turn {
    type Output = Turn;
    fn add(self, rhs: Turn) -> Turn {
        Turn(self.0 + rhs.0)
    }
}

impl Sub for &Turn {
    type Output = Turn;
    fn sub(self, rhs: &Turn) -> Turn {
        Turn(&self.0 - &rhs.0)
    }
}

impl Neg for &Turn {
    type Output = Turn;
    fn neg(self) -> Turn {
        Turn(-&self.0)
    }
}

impl fmt::Debug for Turn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Display for Turn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// `{"num": p, "den": q}`; integers beyond `i64` are written as strings.
impl Serialize for Turn {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Turn", 2)?;
        match (self.0.numer().to_i64(), self.0.denom().to_i64()) {
            (Some(n), Some(d)) => {
                st.serialize_field("num", &n)?;
                st.serialize_field("den", &d)?;
            }
            _ => {
                st.serialize_field("num", &self.0.numer().to_string())?;
                st.serialize_field("den", &self.0.denom().to_string())?;
            }
        }
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_and_normalizes_sign() {
        let t = Turn::new(2, -8).unwrap();
        assert_eq!(format!("{t}"), "-1/4");
        assert!(Turn::new(1, 0).is_err());
    }

    #[test]
    fn centered_range() {
        assert_eq!(
            Turn::new(3, 4).unwrap().centered(),
            Turn::new(-1, 4).unwrap()
        );
        assert_eq!(
            Turn::new(1, 2).unwrap().centered(),
            Turn::new(1, 2).unwrap()
        );
        assert_eq!(
            Turn::new(-1, 2).unwrap().centered(),
            Turn::new(1, 2).unwrap()
        );
        assert_eq!(Turn::new(-7, 3).unwrap().fract(), Turn::new(2, 3).unwrap());
    }

    #[test]
    fn radians_of_large_multiples_stay_accurate() {
        let t = Turn::new(1, 3).unwrap().scale(3_000_000_001);
        assert!((t.radians() - 2.0 * std::f64::consts::PI / 3.0).abs() < 1e-15);
    }

    #[test]
    fn serializes_as_fraction() {
        let s = serde_json::to_string(&Turn::new(6, 8).unwrap()).unwrap();
        assert_eq!(s, r#"{"num":3,"den":4}"#);
    }
}
