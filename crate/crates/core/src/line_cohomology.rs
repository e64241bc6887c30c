//! Cohomology of the line bundles `O(a xi + b f)`.
//!
//! On `F1` the pushforward to `P^1` of `O(a xi + b f)` is a sum of line bundles, which
//! turns every `h^i` into a weighted sum over `P^1` cohomology; the sums are evaluated
//! here in closed form. On `F0` everything is a Kunneth product.

use serde::{Deserialize, Serialize};

use crate::bundle::{rr_general, ChernData};
use crate::chow::{Divisor, Threefold};

/// `(h^0, h^1, h^2, h^3)` together with the Euler characteristic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CohomologyVector {
    pub h: [i128; 4],
    pub chi: i128,
}

impl CohomologyVector {
    pub fn new(h: [i128; 4]) -> Self {
        debug_assert!(h.iter().all(|&x| x >= 0));
        CohomologyVector {
            h,
            chi: h[0] - h[1] + h[2] - h[3],
        }
    }

    pub fn h0(&self) -> i128 {
        self.h[0]
    }
    pub fn h1(&self) -> i128 {
        self.h[1]
    }
    pub fn h2(&self) -> i128 {
        self.h[2]
    }
    pub fn h3(&self) -> i128 {
        self.h[3]
    }

    pub fn is_zero(&self) -> bool {
        self.h == [0; 4]
    }
}

/// `C(n, 1)` with the convention that it vanishes for `n <= 0`.
pub fn binom1(n: i128) -> i128 {
    n.max(0)
}

/// `C(n, 2)` with the convention that it vanishes for `n < 2`.
pub fn binom2(n: i128) -> i128 {
    if n >= 2 {
        n * (n - 1) / 2
    } else {
        0
    }
}

fn sum_j(n: i128) -> i128 {
    n * (n + 1) / 2
}

fn sum_j2(n: i128) -> i128 {
    n * (n + 1) * (2 * n + 1) / 6
}

/// `sum_{j=lo}^{hi} j * (s*j + k)`, empty when `hi < lo`; requires `lo >= 1`.
fn weighted(lo: i128, hi: i128, s: i128, k: i128) -> i128 {
    if hi < lo {
        return 0;
    }
    s * (sum_j2(hi) - sum_j2(lo - 1)) + k * (sum_j(hi) - sum_j(lo - 1))
}

fn f1_cohomology(a: i128, b: i128) -> [i128; 4] {
    let c = a + b + 2;
    let n = a + 1;
    let m = -a - 2;
    [
        weighted(1, n.min(c - 1), -1, c),
        weighted((c + 1).max(1), n, 1, -c),
        weighted((1 - c).max(1), m, 1, c),
        weighted(1, m.min(-c - 1), -1, -c),
    ]
}

fn f0_cohomology(a: i128, b: i128) -> [i128; 4] {
    [
        binom2(a + 2) * binom1(b + 1),
        binom2(a + 2) * binom1(-1 - b),
        binom2(-1 - a) * binom1(b + 1),
        binom2(-1 - a) * binom1(-1 - b),
    ]
}

/// Exact cohomology of `O(a xi + b f)`.
pub fn line_cohomology(model: Threefold, a: i32, b: i32) -> CohomologyVector {
    let (a, b) = (a as i128, b as i128);
    CohomologyVector::new(match model {
        Threefold::F0 => f0_cohomology(a, b),
        Threefold::F1 => f1_cohomology(a, b),
    })
}

pub fn line_cohomology_of(model: Threefold, d: Divisor) -> CohomologyVector {
    line_cohomology(model, d.a, d.b)
}

/// `chi(O(a xi + b f))` from Riemann-Roch, independent of [`line_cohomology`].
pub fn line_chi_rr(model: Threefold, a: i32, b: i32) -> i128 {
    let c = ChernData::line(model, Divisor::new(a, b));
    let chi = rr_general(&c).expect("line bundles have integral Euler characteristic");
    i128::try_from(chi).expect("Euler characteristic of a line bundle fits in i128")
}

/// Indices `(a', b')` with `h^i(a, b) = h^{3-i}(a', b')`.
pub fn serre_dual_indices(model: Threefold, a: i32, b: i32) -> (i32, i32) {
    let w = model.canonical();
    (w.a - a, w.b - b)
}

/// How the smooth-member flag was decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SmoothMemberCriterion {
    /// Classified directly on the blow-up.
    Classified,
    /// Global generation plus Bertini on `P^1 x P^2`.
    BertiniExtension,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineProperties {
    pub effective: bool,
    pub globally_generated: bool,
    pub has_smooth_integral_member: bool,
    pub smooth_member_criterion: SmoothMemberCriterion,
}

pub fn line_properties(model: Threefold, a: i32, b: i32) -> LineProperties {
    let gg = a >= 0 && b >= 0;
    match model {
        Threefold::F1 => LineProperties {
            effective: a >= 0 && a + b >= 0,
            globally_generated: gg,
            has_smooth_integral_member: gg || (a, b) == (1, -1),
            smooth_member_criterion: SmoothMemberCriterion::Classified,
        },
        Threefold::F0 => LineProperties {
            effective: gg,
            globally_generated: gg,
            has_smooth_integral_member: gg,
            smooth_member_criterion: SmoothMemberCriterion::BertiniExtension,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const F0: Threefold = Threefold::F0;
    const F1: Threefold = Threefold::F1;

    /// Literal transcription of the four sums, one term at a time.
    fn f1_by_loops(a: i128, b: i128) -> [i128; 4] {
        let mut h = [0; 4];
        for j in 1..=a + 1 {
            h[0] += j * (a + b + 2 - j).max(0);
            h[1] += j * (-a - b - 2 + j).max(0);
        }
        for j in 1..=-a - 2 {
            h[2] += j * (a + b + 2 + j).max(0);
            h[3] += j * (-a - b - 2 - j).max(0);
        }
        h
    }

    #[test]
    fn spot_values() {
        assert_eq!(line_cohomology(F1, 0, 0).h, [1, 0, 0, 0]);
        assert_eq!(line_cohomology(F1, 1, -3).h1(), 5);
        assert!(line_cohomology(F1, -2, 0).is_zero());
        assert_eq!(line_cohomology(F1, 1, 0).h0(), 4);
        for b in -12..=12 {
            assert!(line_cohomology(F0, -1, b).is_zero());
        }
        assert_eq!(line_cohomology(F0, 1, 1).h, [6, 0, 0, 0]);
    }

    #[test]
    fn rr_spot_values() {
        assert_eq!(line_chi_rr(F1, 0, 0), 1);
        assert_eq!(line_chi_rr(F1, -1, 0), 0);
        assert_eq!(line_chi_rr(F0, 1, 1), 6);
    }

    #[test]
    fn serre_indices() {
        assert_eq!(serre_dual_indices(F1, 0, 0), (-3, -1));
        assert_eq!(serre_dual_indices(F0, 0, 0), (-3, -2));
        assert_eq!(serre_dual_indices(F1, -3, -1), (0, 0));
    }

    #[test]
    fn properties_spot_values() {
        let p = line_properties(F1, 1, -1);
        assert!(p.effective && !p.globally_generated && p.has_smooth_integral_member);
        let p = line_properties(F1, 0, 0);
        assert!(p.effective && p.globally_generated && p.has_smooth_integral_member);
        let p = line_properties(F1, 2, -3);
        assert!(!p.effective && !p.globally_generated && !p.has_smooth_integral_member);
        assert_eq!(
            line_properties(F0, 2, 2).smooth_member_criterion,
            SmoothMemberCriterion::BertiniExtension
        );
    }

    proptest! {
        #[test]
        fn closed_forms_match_loops(a in -40i32..=40, b in -40i32..=40) {
            prop_assert_eq!(line_cohomology(F1, a, b).h, f1_by_loops(a as i128, b as i128));
        }

        #[test]
        fn product_has_one_nonzero_group(a in -30i32..=30, b in -30i32..=30) {
            let c = line_cohomology(F0, a, b);
            prop_assert!(c.h.iter().filter(|&&x| x != 0).count() <= 1);
        }

        #[test]
        fn duality_and_rr(a in -25i32..=25, b in -25i32..=25) {
            for m in Threefold::ALL {
                let c = line_cohomology(m, a, b);
                let (da, db) = serre_dual_indices(m, a, b);
                let d = line_cohomology(m, da, db);
                for i in 0..4 {
                    prop_assert_eq!(c.h[i], d.h[3 - i]);
                }
                prop_assert_eq!(c.chi, line_chi_rr(m, a, b));
            }
        }
    }

    #[test]
    fn huge_parameters_do_not_overflow() {
        let c = line_cohomology(F1, i32::MAX / 2, i32::MAX / 2);
        assert!(c.h0() > 0);
        let c = line_cohomology(F0, i32::MIN / 2, i32::MIN / 2);
        assert!(c.h3() > 0);
    }
}
