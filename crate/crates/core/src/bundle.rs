//! Chern classes of twists, sums and complexes, and Riemann-Roch.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::chow::{ChowClass, Divisor, Threefold};
use crate::error::{Error, Result};

/// `(rank, c1, c2, c3)`; the rank may be negative for virtual classes of complexes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChernData {
    pub rank: i64,
    pub c1: ChowClass,
    pub c2: ChowClass,
    pub c3: ChowClass,
}

impl ChernData {
    pub fn trivial(model: Threefold, rank: i64) -> Self {
        ChernData {
            rank,
            c1: ChowClass::zero(model),
            c2: ChowClass::zero(model),
            c3: ChowClass::zero(model),
        }
    }

    pub fn line(model: Threefold, d: Divisor) -> Self {
        ChernData {
            c1: d.class(model),
            ..Self::trivial(model, 1)
        }
    }

    /// Rank-2 data `(2, -h, alpha xi^2 + beta xi f, 0)` of an instanton with the given charge.
    pub fn instanton(model: Threefold, alpha: i32, beta: i32) -> Self {
        ChernData {
            rank: 2,
            c1: -model.h().class(model),
            c2: ChowClass::codim2(model, alpha, beta),
            c3: ChowClass::zero(model),
        }
    }

    pub fn model(&self) -> Threefold {
        self.c1.model()
    }

    /// Total Chern class `1 + c1 + c2 + c3`.
    pub fn total(&self) -> ChowClass {
        ChowClass::one(self.model()) + self.c1.part(1) + self.c2.part(2) + self.c3.part(3)
    }

    pub fn from_total(rank: i64, total: &ChowClass) -> Self {
        ChernData {
            rank,
            c1: total.part(1),
            c2: total.part(2),
            c3: total.part(3),
        }
    }

    /// `c(E + F) = c(E) c(F)`.
    pub fn direct_sum(&self, other: &ChernData) -> Result<ChernData> {
        let total = self.total().checked_mul(&other.total())?;
        Ok(Self::from_total(self.rank + other.rank, &total))
    }

    /// `E^{+n}`.
    pub fn power(&self, n: u32) -> ChernData {
        Self::from_total(self.rank * n as i64, &self.total().pow(n))
    }

    /// `c_i(E^dual) = (-1)^i c_i(E)`.
    pub fn dual(&self) -> ChernData {
        ChernData {
            rank: self.rank,
            c1: -&self.c1,
            c2: self.c2.clone(),
            c3: -&self.c3,
        }
    }

    /// `E (x) O(L)`: `c_i(E(L)) = sum_k C(r-k, i-k) c_k L^{i-k}`.
    pub fn twist(&self, l: Divisor) -> ChernData {
        let model = self.model();
        let lc = l.class(model);
        let c = [ChowClass::one(model), self.c1.clone(), self.c2.clone(), self.c3.clone()];
        let mut out = [ChowClass::zero(model), ChowClass::zero(model), ChowClass::zero(model)];
        for (i, slot) in out.iter_mut().enumerate() {
            let i = i + 1;
            for (k, ck) in c.iter().enumerate().take(i + 1) {
                let coef = gen_binom(self.rank - k as i64, (i - k) as u32);
                if coef.is_zero() {
                    continue;
                }
                *slot += &(ck * &lc.pow((i - k) as u32)).scale(coef);
            }
        }
        let [c1, c2, c3] = out;
        ChernData {
            rank: self.rank,
            c1,
            c2,
            c3,
        }
    }
}

impl fmt::Display for ChernData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(rank {}, c1 = {}, c2 = {}, c3 = {})", self.rank, self.c1, self.c2, self.c3)
    }
}

/// Binomial coefficient `C(n, k)` for any integer `n`.
fn gen_binom(n: i64, k: u32) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in 0..k as i64 {
        num *= n - j;
        den *= j + 1;
    }
    num / den
}

/// The sheaves that occur as summands of monad terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NamedBundle {
    /// `O(a xi + b f)`.
    Line { a: i32, b: i32 },
    /// The relative cotangent bundle `Omega_{F|P^1}(a xi + b f)`.
    Cotangent { a: i32, b: i32 },
}

impl NamedBundle {
    pub fn line(d: Divisor) -> Self {
        NamedBundle::Line { a: d.a, b: d.b }
    }

    pub fn cotangent(d: Divisor) -> Self {
        NamedBundle::Cotangent { a: d.a, b: d.b }
    }

    pub fn twist_divisor(&self) -> Divisor {
        match *self {
            NamedBundle::Line { a, b } | NamedBundle::Cotangent { a, b } => Divisor::new(a, b),
        }
    }

    pub fn rank(&self) -> i64 {
        match self {
            NamedBundle::Line { .. } => 1,
            NamedBundle::Cotangent { .. } => 2,
        }
    }
}

impl fmt::Display for NamedBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.twist_divisor();
        match (self, d == Divisor::ZERO) {
            (NamedBundle::Line { .. }, _) => write!(f, "O({d})"),
            (NamedBundle::Cotangent { .. }, true) => f.write_str("Omega"),
            (NamedBundle::Cotangent { .. }, false) => write!(f, "Omega({d})"),
        }
    }
}

/// Total Chern class of the untwisted relative cotangent bundle, read off the relative
/// Euler sequence `0 -> Omega -> O(-xi)^2 + O(-xi + e f) -> O -> 0`.
pub fn cotangent_total(model: Threefold) -> ChowClass {
    let one = ChowClass::one(model);
    let xi = ChowClass::xi(model);
    let f = ChowClass::f(model);
    let a = &one - &xi;
    let b = &a + &f.scale(model.e());
    &a.pow(2) * &b
}

pub fn chern_of(model: Threefold, named: &NamedBundle) -> ChernData {
    match *named {
        NamedBundle::Line { a, b } => ChernData::line(model, Divisor::new(a, b)),
        NamedBundle::Cotangent { a, b } => {
            ChernData::from_total(2, &cotangent_total(model)).twist(Divisor::new(a, b))
        }
    }
}

/// `bundle^{mult}` as one summand of a complex term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Summand {
    pub bundle: NamedBundle,
    pub mult: u32,
}

/// A term `C^degree` of a bounded complex.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ComplexTerm {
    pub degree: i32,
    pub summands: Vec<Summand>,
}

impl ComplexTerm {
    pub fn rank(&self) -> i64 {
        self.summands
            .iter()
            .map(|s| s.bundle.rank() * s.mult as i64)
            .sum()
    }

    pub fn chern(&self, model: Threefold) -> ChernData {
        self.summands
            .iter()
            .filter(|s| s.mult > 0)
            .fold(ChernData::trivial(model, 0), |acc, s| {
                acc.direct_sum(&chern_of(model, &s.bundle).power(s.mult))
                    .expect("same model")
            })
    }
}

/// Chern data of the alternating sum `sum (-1)^i C^i`, computed as
/// `c = prod c(C^i)^{(-1)^i}` in `A(F_e)`.
pub fn chern_of_complex(model: Threefold, terms: &[ComplexTerm]) -> ChernData {
    let mut total = ChowClass::one(model);
    let mut rank = 0;
    for t in terms {
        let c = t.chern(model);
        let ct = c.total();
        if t.degree.rem_euclid(2) == 0 {
            total = &total * &ct;
            rank += c.rank;
        } else {
            total = &total * &ct.inverse().expect("total Chern classes are units");
            rank -= c.rank;
        }
    }
    ChernData::from_total(rank, &total)
}

fn deg(c: &ChowClass) -> BigRational {
    BigRational::from_integer(c.degree())
}

/// Hirzebruch-Riemann-Roch on `F_e`:
/// `chi = r chi(O) + (c1^3 - 3 c1 c2 + 3 c3)/6 - (w c1^2 - 2 w c2)/4 + (w^2 c1 + c2(Omega) c1)/12`.
pub fn rr_general(c: &ChernData) -> Result<BigInt> {
    let model = c.model();
    let w = model.canonical().class(model);
    let c2_omega = model.c2_cotangent();
    let (c1, c2, c3) = (&c.c1.part(1), &c.c2.part(2), &c.c3.part(3));
    let r = BigRational::from_integer(BigInt::from(c.rank * model.chi_structure_sheaf() as i64));
    let ch3 = deg(&(c1.pow(3) - (c1 * c2).scale(3) + c3.scale(3)));
    let mid = deg(&(&w * &c1.pow(2) - (&w * c2).scale(2)));
    let td = deg(&(&w.pow(2) * c1 + &c2_omega * c1));
    let chi = r + ch3 / BigInt::from(6) - mid / BigInt::from(4) + td / BigInt::from(12);
    if !chi.is_integer() {
        return Err(Error::NonIntegral {
            value: chi.to_string(),
        });
    }
    Ok(chi.to_integer())
}

/// `chi(E(a xi + b f))` for an instanton `E` of charge `alpha xi^2 + beta xi f`:
/// `e(a^3/3 + 2a/3 - a alpha) + a^2 b + 3a + 2b - b alpha - a beta`.
pub fn rr_chi(model: Threefold, alpha: i64, beta: i64, a: i64, b: i64) -> Result<BigInt> {
    let q = |n: i64| BigRational::from_integer(BigInt::from(n));
    let e = q(model.e() as i64);
    let (al, be, a, b) = (q(alpha), q(beta), q(a), q(b));
    let three = q(3);
    let cubic = &a * &a * &a / &three + q(2) * &a / &three - &a * &al;
    let chi = e * cubic + &a * &a * &b + q(3) * &a + q(2) * &b - &b * &al - &a * &be;
    if !chi.is_integer() {
        return Err(Error::NonIntegral {
            value: chi.to_string(),
        });
    }
    Ok(chi.to_integer())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const F0: Threefold = Threefold::F0;
    const F1: Threefold = Threefold::F1;

    fn div(m: Threefold, a: i64, b: i64) -> ChowClass {
        ChowClass::divisor(m, a, b)
    }

    #[test]
    fn cotangent_chern_classes() {
        for m in Threefold::ALL {
            let c = chern_of(m, &NamedBundle::Cotangent { a: 0, b: 0 });
            assert_eq!(c.rank, 2);
            assert_eq!(c.c1, div(m, -3, m.e() as i64));
            assert_eq!(c.c2, ChowClass::codim2(m, 3, -2 * m.e()));
            assert!(c.c3.is_zero());
        }
        let c = chern_of(F1, &NamedBundle::Cotangent { a: 0, b: -1 });
        assert_eq!(c, ChernData { rank: 2, c1: div(F1, -3, -1), ..ChernData::instanton(F1, 3, 1) });
        let c = chern_of(F0, &NamedBundle::Cotangent { a: 0, b: -1 });
        assert_eq!(c, ChernData::instanton(F0, 3, 3));
        assert_eq!(chern_of(F1, &NamedBundle::Line { a: 0, b: 0 }), ChernData::trivial(F1, 1));
    }

    #[test]
    fn cotangent_c2_matches_tangent_bundle_of_threefold() {
        // c(Omega_X) = c(Omega_{X|P^1}) c(O(-2f)).
        for m in Threefold::ALL {
            let rel = chern_of(m, &NamedBundle::Cotangent { a: 0, b: 0 });
            let base = ChernData::line(m, Divisor::new(0, -2));
            let full = rel.direct_sum(&base).unwrap();
            assert_eq!(full.c1, m.canonical().class(m));
            assert_eq!(full.c2, m.c2_cotangent());
        }
    }

    #[test]
    fn instanton_twist_from_serre_data() {
        for (alpha, beta) in [(2, 2), (3, 1), (5, 0), (4, 7)] {
            let z = ChowClass::codim2(F1, alpha - 2, -(alpha - 2)) + ChowClass::codim2(F1, 0, alpha + beta - 4);
            let f = ChernData { rank: 2, c1: div(F1, 1, -1), c2: z, c3: ChowClass::zero(F1) };
            assert_eq!(f.twist(Divisor::new(-2, 0)), ChernData::instanton(F1, alpha, beta));
        }
        let l = ChernData::line(F1, Divisor::new(1, 0));
        assert_eq!(l.twist(Divisor::new(0, 1)), ChernData::line(F1, Divisor::new(1, 1)));
    }

    #[test]
    fn rr_spot_values() {
        assert_eq!(rr_general(&ChernData::instanton(F1, 2, 2)).unwrap(), BigInt::from(0));
        assert_eq!(rr_general(&ChernData::trivial(F1, 1)).unwrap(), BigInt::from(1));
        let c1 = -F1.h().class(F1);
        assert_eq!((F1.c2_cotangent() * c1).degree(), BigInt::from(-24));
        assert_eq!(rr_chi(F1, 3, 1, 0, 0).unwrap(), BigInt::from(0));
        for alpha in 0..6 {
            for beta in 0..6 {
                assert_eq!(rr_chi(F1, alpha, beta, -1, 0).unwrap(), BigInt::from(alpha + beta - 4));
                assert_eq!(rr_chi(F0, alpha, beta, 1, 0).unwrap(), BigInt::from(3 - beta));
            }
        }
    }

    #[test]
    fn rr_rejects_non_integral_data() {
        let mut c = ChernData::trivial(F1, 1);
        c.c3 = ChowClass::point(F1);
        assert!(matches!(rr_general(&c), Err(Error::NonIntegral { .. })));
    }

    #[test]
    fn complex_with_single_term() {
        let t = ComplexTerm {
            degree: 0,
            summands: vec![Summand { bundle: NamedBundle::Line { a: 2, b: -5 }, mult: 1 }],
        };
        assert_eq!(chern_of_complex(F1, &[t]), ChernData::line(F1, Divisor::new(2, -5)));
    }

    #[test]
    fn complex_of_euler_sequence_is_cotangent() {
        // Omega = [O(-xi)^2 + O(-xi + e f) -> O] placed in degrees 0, 1.
        for m in Threefold::ALL {
            let e = m.e();
            let terms = [
                ComplexTerm {
                    degree: 0,
                    summands: vec![
                        Summand { bundle: NamedBundle::Line { a: -1, b: 0 }, mult: 2 },
                        Summand { bundle: NamedBundle::Line { a: -1, b: e }, mult: 1 },
                    ],
                },
                ComplexTerm {
                    degree: 1,
                    summands: vec![Summand { bundle: NamedBundle::Line { a: 0, b: 0 }, mult: 1 }],
                },
            ];
            assert_eq!(chern_of_complex(m, &terms), chern_of(m, &NamedBundle::Cotangent { a: 0, b: 0 }));
        }
    }

    fn model() -> impl Strategy<Value = Threefold> {
        prop_oneof![Just(F0), Just(F1)]
    }

    fn rank2(m: Threefold) -> impl Strategy<Value = ChernData> {
        (-9i64..9, -9i64..9, -9i64..9, -9i64..9, -9i64..9).prop_map(move |(a, b, x, y, p)| ChernData {
            rank: 2,
            c1: div(m, a, b),
            c2: ChowClass::codim2(m, x, y),
            c3: ChowClass::point(m).scale(p),
        })
    }

    proptest! {
        #[test]
        fn twist_round_trip((c, a, b) in model().prop_flat_map(|m| (rank2(m), -9i32..9, -9i32..9))) {
            let l = Divisor::new(a, b);
            prop_assert_eq!(c.twist(l).twist(-l), c);
        }

        #[test]
        fn twist_agrees_with_rank2_formula((c, a, b) in model().prop_flat_map(|m| (rank2(m), -9i32..9, -9i32..9))) {
            let m = c.model();
            let l = Divisor::new(a, b).class(m);
            let t = c.twist(Divisor::new(a, b));
            prop_assert_eq!(&t.c1, &(&c.c1 + &l.scale(2)));
            prop_assert_eq!(&t.c2, &(&c.c2 + &(&c.c1 * &l) + l.pow(2)));
        }

        #[test]
        fn twist_commutes_with_sums_of_lines(m in model(), a in -5i32..5, b in -5i32..5, c in -5i32..5, d in -5i32..5) {
            let x = ChernData::line(m, Divisor::new(a, b));
            let y = ChernData::line(m, Divisor::new(c, d));
            let s = x.direct_sum(&y).unwrap();
            let l = Divisor::new(1, -2);
            prop_assert_eq!(s.twist(l), x.twist(l).direct_sum(&y.twist(l)).unwrap());
        }

        #[test]
        fn rr_specialises(m in model(), alpha in 0i32..=10, beta in 0i32..=10, a in -8i32..=8, b in -8i32..=8) {
            let c = ChernData::instanton(m, alpha, beta).twist(Divisor::new(a, b));
            prop_assert_eq!(
                rr_general(&c).unwrap(),
                rr_chi(m, alpha as i64, beta as i64, a as i64, b as i64).unwrap()
            );
        }

        #[test]
        fn euler_sequence_additivity(m in model(), a in -8i32..=8, b in -8i32..=8) {
            let d = Divisor::new(a, b);
            let e = m.e();
            let mid = 2 * crate::line_cohomology::line_chi_rr(m, a - 1, b)
                + crate::line_cohomology::line_chi_rr(m, a - 1, b + e);
            let omega = rr_general(&chern_of(m, &NamedBundle::cotangent(d))).unwrap();
            let line = crate::line_cohomology::line_chi_rr(m, a, b);
            prop_assert_eq!(BigInt::from(mid), omega + BigInt::from(line));
        }

        #[test]
        fn self_duality_of_cotangent(m in model()) {
            let omega = chern_of(m, &NamedBundle::Cotangent { a: 0, b: 0 });
            let twisted = omega.twist(Divisor::new(3, -m.e()));
            prop_assert_eq!(omega.dual(), twisted);
        }
    }
}
