//! Exact arithmetic in the Chow ring `A(F_e) = Z[xi, f] / (f^2, xi^3 - e*xi^2*f)`.
//!
//! Every class is stored densely on the monomial basis `{1, xi, f, xi^2, xi*f, pt}`
//! where `pt = xi^2*f` is the class of a point. Products are reduced eagerly, so two
//! classes are equal exactly when their coefficient vectors are.

mod parse;

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use parse::parse_expr;

/// The two threefolds `F_e = P(O + O + O(e))` over `P^1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Threefold {
    /// `P^1 x P^2`.
    F0,
    /// The blow-up of `P^3` along a line.
    F1,
}

impl Threefold {
    pub const ALL: [Threefold; 2] = [Threefold::F0, Threefold::F1];

    pub fn from_e(e: u8) -> Option<Self> {
        match e {
            0 => Some(Threefold::F0),
            1 => Some(Threefold::F1),
            _ => None,
        }
    }

    pub fn e(self) -> i32 {
        match self {
            Threefold::F0 => 0,
            Threefold::F1 => 1,
        }
    }

    /// Fundamental divisor `h = 3 xi + (2 - e) f`; `omega = -h`.
    pub fn h(self) -> Divisor {
        Divisor::new(3, 2 - self.e())
    }

    /// The very ample divisor `xi + f`.
    pub fn hhat(self) -> Divisor {
        Divisor::new(1, 1)
    }

    pub fn canonical(self) -> Divisor {
        -self.h()
    }

    /// The exceptional divisor `E = xi - f` of the blow-up; only on `F1`.
    pub fn exceptional(self) -> Option<Divisor> {
        match self {
            Threefold::F0 => None,
            Threefold::F1 => Some(Divisor::new(1, -1)),
        }
    }

    /// `c2` of the cotangent bundle, `3 xi^2 + (6 - 2e) xi f`.
    pub fn c2_cotangent(self) -> ChowClass {
        ChowClass::codim2(self, 3, 6 - 2 * self.e())
    }

    /// `chi(O) = 1` (both threefolds are rational).
    pub fn chi_structure_sheaf(self) -> i32 {
        1
    }

    /// Fano index; `omega = -index * h`.
    pub fn index(self) -> i32 {
        1
    }

    pub fn q(self) -> i32 {
        self.index() / 2
    }

    /// `h^3`.
    pub fn degree(self) -> BigInt {
        self.h().class(self).pow(3).degree()
    }
}

impl fmt::Display for Threefold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threefold::F0 => f.write_str("F0"),
            Threefold::F1 => f.write_str("F1"),
        }
    }
}

/// A divisor class `a xi + b f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Divisor {
    pub a: i32,
    pub b: i32,
}

impl Divisor {
    pub const ZERO: Divisor = Divisor { a: 0, b: 0 };

    pub const fn new(a: i32, b: i32) -> Self {
        Divisor { a, b }
    }

    pub fn class(self, model: Threefold) -> ChowClass {
        ChowClass::divisor(model, self.a, self.b)
    }
}

impl Add for Divisor {
    type Output = Divisor;
    fn add(self, rhs: Divisor) -> Divisor {
        Divisor::new(self.a + rhs.a, self.b + rhs.b)
    }
}

impl Sub for Divisor {
    type Output = Divisor;
    fn sub(self, rhs: Divisor) -> Divisor {
        Divisor::new(self.a - rhs.a, self.b - rhs.b)
    }
}

impl Neg for Divisor {
    type Output = Divisor;
    fn neg(self) -> Divisor {
        Divisor::new(-self.a, -self.b)
    }
}

impl Mul<Divisor> for i32 {
    type Output = Divisor;
    fn mul(self, rhs: Divisor) -> Divisor {
        Divisor::new(self * rhs.a, self * rhs.b)
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Both threefolds print a divisor the same way.
        write!(f, "{}", ChowClass::divisor(Threefold::F1, self.a, self.b))
    }
}

/// Monomial basis of `A(F_e)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Basis {
    One = 0,
    Xi = 1,
    F = 2,
    Xi2 = 3,
    XiF = 4,
    Point = 5,
}

impl Basis {
    pub const ALL: [Basis; 6] = [
        Basis::One,
        Basis::Xi,
        Basis::F,
        Basis::Xi2,
        Basis::XiF,
        Basis::Point,
    ];

    pub fn codim(self) -> usize {
        match self {
            Basis::One => 0,
            Basis::Xi | Basis::F => 1,
            Basis::Xi2 | Basis::XiF => 2,
            Basis::Point => 3,
        }
    }

    /// Exponents `(i, j)` of the monomial `xi^i f^j`.
    fn exponents(self) -> (u32, u32) {
        match self {
            Basis::One => (0, 0),
            Basis::Xi => (1, 0),
            Basis::F => (0, 1),
            Basis::Xi2 => (2, 0),
            Basis::XiF => (1, 1),
            Basis::Point => (2, 1),
        }
    }

    fn symbol(self, point_as_pt: bool) -> &'static str {
        match self {
            Basis::One => "1",
            Basis::Xi => "xi",
            Basis::F => "f",
            Basis::Xi2 => "xi^2",
            Basis::XiF => "xi*f",
            Basis::Point if point_as_pt => "pt",
            Basis::Point => "xi^2*f",
        }
    }
}

/// Reduces `xi^i f^j` to `coeff * basis` (or zero).
fn reduce_monomial(model: Threefold, i: u32, j: u32) -> Option<(i32, Basis)> {
    match (i, j) {
        (_, j) if j >= 2 => None,
        (0, 0) => Some((1, Basis::One)),
        (1, 0) => Some((1, Basis::Xi)),
        (0, 1) => Some((1, Basis::F)),
        (2, 0) => Some((1, Basis::Xi2)),
        (1, 1) => Some((1, Basis::XiF)),
        (2, 1) => Some((1, Basis::Point)),
        (3, 0) if model.e() != 0 => Some((model.e(), Basis::Point)),
        _ => None,
    }
}

/// An element of `A(F_e)` with arbitrary-precision integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChowClass {
    model: Threefold,
    coeffs: [BigInt; 6],
}

impl ChowClass {
    pub fn zero(model: Threefold) -> Self {
        ChowClass {
            model,
            coeffs: Default::default(),
        }
    }

    pub fn one(model: Threefold) -> Self {
        Self::basis(model, Basis::One)
    }

    pub fn basis(model: Threefold, b: Basis) -> Self {
        let mut c = Self::zero(model);
        c.coeffs[b as usize] = BigInt::one();
        c
    }

    pub fn xi(model: Threefold) -> Self {
        Self::basis(model, Basis::Xi)
    }

    pub fn f(model: Threefold) -> Self {
        Self::basis(model, Basis::F)
    }

    pub fn point(model: Threefold) -> Self {
        Self::basis(model, Basis::Point)
    }

    pub fn from_coeffs<T: Into<BigInt>>(model: Threefold, coeffs: [T; 6]) -> Self {
        ChowClass {
            model,
            coeffs: coeffs.map(Into::into),
        }
    }

    /// `a xi + b f`.
    pub fn divisor(model: Threefold, a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        let mut c = Self::zero(model);
        c.coeffs[Basis::Xi as usize] = a.into();
        c.coeffs[Basis::F as usize] = b.into();
        c
    }

    /// `alpha xi^2 + beta xi f`.
    pub fn codim2(model: Threefold, alpha: impl Into<BigInt>, beta: impl Into<BigInt>) -> Self {
        let mut c = Self::zero(model);
        c.coeffs[Basis::Xi2 as usize] = alpha.into();
        c.coeffs[Basis::XiF as usize] = beta.into();
        c
    }

    pub fn scalar(model: Threefold, n: impl Into<BigInt>) -> Self {
        let mut c = Self::zero(model);
        c.coeffs[0] = n.into();
        c
    }

    pub fn model(&self) -> Threefold {
        self.model
    }

    pub fn coeff(&self, b: Basis) -> &BigInt {
        &self.coeffs[b as usize]
    }

    pub fn coeffs(&self) -> &[BigInt; 6] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The integer coefficient of the point class.
    pub fn degree(&self) -> BigInt {
        self.coeffs[Basis::Point as usize].clone()
    }

    /// Homogeneous component of codimension `codim`.
    pub fn part(&self, codim: usize) -> ChowClass {
        let mut c = Self::zero(self.model);
        for b in Basis::ALL.into_iter().filter(|b| b.codim() == codim) {
            c.coeffs[b as usize] = self.coeffs[b as usize].clone();
        }
        c
    }

    /// `Some((a, b))` when the class is exactly `a xi + b f` with machine-sized coefficients.
    pub fn as_divisor(&self) -> Option<Divisor> {
        if self.part(1) != *self {
            return None;
        }
        Some(Divisor::new(
            self.coeff(Basis::Xi).to_i32()?,
            self.coeff(Basis::F).to_i32()?,
        ))
    }

    fn check_model(&self, other: &ChowClass) -> Result<()> {
        if self.model != other.model {
            return Err(Error::ModelMismatch {
                left: self.model,
                right: other.model,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &ChowClass) -> Result<ChowClass> {
        self.check_model(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn checked_mul(&self, other: &ChowClass) -> Result<ChowClass> {
        self.check_model(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn add_unchecked(&self, other: &ChowClass) -> ChowClass {
        let mut out = self.clone();
        for (x, y) in out.coeffs.iter_mut().zip(other.coeffs.iter()) {
            *x += y;
        }
        out
    }

    fn mul_unchecked(&self, other: &ChowClass) -> ChowClass {
        let mut out = Self::zero(self.model);
        for bx in Basis::ALL {
            let x = &self.coeffs[bx as usize];
            if x.is_zero() {
                continue;
            }
            let (i1, j1) = bx.exponents();
            for by in Basis::ALL {
                let y = &other.coeffs[by as usize];
                if y.is_zero() || bx.codim() + by.codim() > 3 {
                    continue;
                }
                let (i2, j2) = by.exponents();
                if let Some((k, b)) = reduce_monomial(self.model, i1 + i2, j1 + j2) {
                    out.coeffs[b as usize] += x * y * k;
                }
            }
        }
        out
    }

    pub fn scale(&self, k: impl Into<BigInt>) -> ChowClass {
        let k = k.into();
        ChowClass {
            model: self.model,
            coeffs: self.coeffs.clone().map(|c| c * &k),
        }
    }

    pub fn pow(&self, mut n: u32) -> ChowClass {
        let mut base = self.clone();
        let mut acc = Self::one(self.model);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    /// Inverse of a unit `1 + x` with `x` nilpotent; `None` if the constant term is not `+-1`.
    pub fn inverse(&self) -> Option<ChowClass> {
        let c0 = self.coeff(Basis::One);
        if !(c0.is_one() || (-c0).is_one()) {
            return None;
        }
        // u = c0 (1 - x), x^4 = 0, so u^{-1} = c0 (1 + x + x^2 + x^3).
        let normalized = self.scale(c0.clone());
        let x = Self::one(self.model) - normalized;
        let x2 = &x * &x;
        let x3 = &x2 * &x;
        let inv = Self::one(self.model) + x + x2 + x3;
        Some(inv.scale(c0.clone()))
    }

    fn fmt_with(&self, f: &mut fmt::Formatter<'_>, point_as_pt: bool) -> fmt::Result {
        let mut first = true;
        for b in Basis::ALL {
            let c = &self.coeffs[b as usize];
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            first = false;
            match (b, mag.is_one()) {
                (Basis::One, _) => write!(f, "{mag}")?,
                (_, true) => f.write_str(b.symbol(point_as_pt))?,
                (_, false) => write!(f, "{mag}*{}", b.symbol(point_as_pt))?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }

    /// Human-oriented rendering that names the point class `pt`.
    pub fn pretty(&self) -> String {
        struct Pretty<'a>(&'a ChowClass);
        impl fmt::Display for Pretty<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.fmt_with(f, true)
            }
        }
        Pretty(self).to_string()
    }
}

/// Parseable rendering; the point class is written `xi^2*f`.
impl fmt::Display for ChowClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f, false)
    }
}

// Operators panic on a model mismatch; use `checked_*` at API boundaries.
impl Add<&ChowClass> for &ChowClass {
    type Output = ChowClass;
    fn add(self, rhs: &ChowClass) -> ChowClass {
        self.checked_add(rhs).expect("Chow class addition across threefolds")
    }
}

impl Add for ChowClass {
    type Output = ChowClass;
    fn add(self, rhs: ChowClass) -> ChowClass {
        &self + &rhs
    }
}

impl AddAssign<&ChowClass> for ChowClass {
    fn add_assign(&mut self, rhs: &ChowClass) {
        *self = &*self + rhs;
    }
}

impl Neg for &ChowClass {
    type Output = ChowClass;
    fn neg(self) -> ChowClass {
        self.scale(-1)
    }
}

impl Neg for ChowClass {
    type Output = ChowClass;
    fn neg(self) -> ChowClass {
        self.scale(-1)
    }
}

impl Sub<&ChowClass> for &ChowClass {
    type Output = ChowClass;
    fn sub(self, rhs: &ChowClass) -> ChowClass {
        self + &(-rhs)
    }
}

impl Sub for ChowClass {
    type Output = ChowClass;
    fn sub(self, rhs: ChowClass) -> ChowClass {
        &self - &rhs
    }
}

impl Mul<&ChowClass> for &ChowClass {
    type Output = ChowClass;
    fn mul(self, rhs: &ChowClass) -> ChowClass {
        self.checked_mul(rhs).expect("Chow class product across threefolds")
    }
}

impl Mul for ChowClass {
    type Output = ChowClass;
    fn mul(self, rhs: ChowClass) -> ChowClass {
        &self * &rhs
    }
}

/// Slope `mu = c1 . h^2 / rank` as an exact rational.
pub fn slope(c1: &ChowClass, rank: i64) -> Result<BigRational> {
    if rank == 0 {
        return Err(Error::ZeroRank);
    }
    let model = c1.model();
    let h = model.h().class(model);
    let num = (c1.part(1) * h.pow(2)).degree();
    Ok(BigRational::new(num, BigInt::from(rank)))
}

/// Slope of the line bundle `O(D)`.
pub fn line_slope(model: Threefold, d: Divisor) -> BigRational {
    slope(&d.class(model), 1).expect("rank 1")
}

#[derive(Serialize, Deserialize)]
struct ChowClassRepr {
    model: Threefold,
    coeffs: [crate::serde_big::BigIntRepr; 6],
}

impl Serialize for ChowClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ChowClassRepr {
            model: self.model,
            coeffs: self.coeffs.clone().map(Into::into),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ChowClass {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = ChowClassRepr::deserialize(d)?;
        let mut coeffs: [BigInt; 6] = Default::default();
        for (slot, c) in coeffs.iter_mut().zip(r.coeffs) {
            *slot = c.try_into().map_err(serde::de::Error::custom)?;
        }
        Ok(ChowClass {
            model: r.model,
            coeffs,
        })
    }
}
