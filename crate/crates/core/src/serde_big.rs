//! JSON-friendly big integers: a plain number when it fits in `i64`, a decimal string otherwise.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BigIntRepr {
    Small(i64),
    Large(String),
}

impl From<BigInt> for BigIntRepr {
    fn from(n: BigInt) -> Self {
        match n.to_i64() {
            Some(v) => BigIntRepr::Small(v),
            None => BigIntRepr::Large(n.to_string()),
        }
    }
}

impl TryFrom<BigIntRepr> for BigInt {
    type Error = String;
    fn try_from(r: BigIntRepr) -> Result<Self, String> {
        match r {
            BigIntRepr::Small(v) => Ok(BigInt::from(v)),
            BigIntRepr::Large(s) => s.parse().map_err(|_| format!("not an integer: {s:?}")),
        }
    }
}

/// Exact rational as `{"num": .., "den": ..}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalRepr {
    pub num: BigIntRepr,
    pub den: BigIntRepr,
}

impl From<&num_rational::BigRational> for RationalRepr {
    fn from(q: &num_rational::BigRational) -> Self {
        RationalRepr {
            num: q.numer().clone().into(),
            den: q.denom().clone().into(),
        }
    }
}

impl TryFrom<RationalRepr> for num_rational::BigRational {
    type Error = String;
    fn try_from(r: RationalRepr) -> Result<Self, String> {
        let den: BigInt = r.den.try_into()?;
        if den == BigInt::from(0) {
            return Err("zero denominator".into());
        }
        Ok(num_rational::BigRational::new(r.num.try_into()?, den))
    }
}
