//! Cohomology of `Omega_{F|P^1}(a xi + b f)`.
//!
//! On `F0` the relative cotangent bundle is pulled back from `P^2`, so Bott's formula and
//! Kunneth give exact values. On `F1` the groups are pinned down only as far as two long
//! exact sequences (the relative Euler sequence and its dual presentation), Serre duality
//! and Riemann-Roch allow; entries that do not collapse are reported as intervals.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bundle::{chern_of, rr_general, NamedBundle};
use crate::chow::{Divisor, Threefold};
use crate::error::{Error, Result};
use crate::line_cohomology::{line_cohomology_of, CohomologyVector};

/// Enumeration budget for the F1 search; beyond it the coarse (still sound) bounds are returned.
const SEARCH_BUDGET: i128 = 20_000_000;

fn binom(n: i128, k: i128) -> i128 {
    if k < 0 || n < k {
        return 0;
    }
    let mut r = 1i128;
    for j in 0..k {
        r = r * (n - j) / (j + 1);
    }
    r
}

/// Bott's formula for `h^q(P^n, Omega^p(k))`.
pub fn bott(n: i128, p: i128, q: i128, k: i128) -> i128 {
    if q == 0 && k > p {
        binom(k + n - p, k) * binom(k - 1, p)
    } else if q == n && k < p - n {
        binom(-k + p, -k) * binom(-k - 1, n - p)
    } else if k == 0 && p == q {
        1
    } else {
        0
    }
}

/// `(h^0, h^1, h^2)` of `Omega_{P^2}(a)`.
pub fn bott_p2(a: i32) -> [i128; 3] {
    let k = a as i128;
    [bott(2, 1, 0, k), bott(2, 1, 1, k), bott(2, 1, 2, k)]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Entry {
    Exact(i128),
    Interval { lo: i128, hi: i128 },
}

impl Entry {
    fn from_range(lo: i128, hi: i128) -> Entry {
        if lo == hi {
            Entry::Exact(lo)
        } else {
            Entry::Interval { lo, hi }
        }
    }

    pub fn lo(&self) -> i128 {
        match *self {
            Entry::Exact(n) => n,
            Entry::Interval { lo, .. } => lo,
        }
    }

    pub fn hi(&self) -> i128 {
        match *self {
            Entry::Exact(n) => n,
            Entry::Interval { hi, .. } => hi,
        }
    }

    pub fn exact(&self) -> Option<i128> {
        match *self {
            Entry::Exact(n) => Some(n),
            Entry::Interval { .. } => None,
        }
    }

    pub fn contains(&self, n: i128) -> bool {
        self.lo() <= n && n <= self.hi()
    }
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Entry::Exact(n) => write!(f, "{n}"),
            Entry::Interval { lo, hi } => write!(f, "[{lo}, {hi}]"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntervalCohomology {
    pub h: [Entry; 4],
    pub chi: i128,
}

impl IntervalCohomology {
    pub fn is_exact(&self) -> bool {
        self.h.iter().all(|e| e.exact().is_some())
    }

    pub fn exact_values(&self) -> Option<[i128; 4]> {
        let mut out = [0; 4];
        for (o, e) in out.iter_mut().zip(self.h.iter()) {
            *o = e.exact()?;
        }
        Some(out)
    }
}

/// Whether `0 -> V_1 -> ... -> V_n -> 0` can be exact: every alternating partial sum is
/// non-negative and the full alternating sum vanishes.
pub fn exact_sequence_feasible(dims: &[i128]) -> bool {
    let mut rank = 0i128;
    for &d in dims {
        if d < 0 {
            return false;
        }
        rank = d - rank;
        if rank < 0 {
            return false;
        }
    }
    rank == 0
}

/// Long exact sequence of `0 -> A -> B -> C -> 0`, listed `H^0 A, H^0 B, H^0 C, H^1 A, ...`.
pub fn long_exact_dims(a: [i128; 4], b: [i128; 4], c: [i128; 4]) -> Vec<i128> {
    (0..4).flat_map(|i| [a[i], b[i], c[i]]).collect()
}

fn sum_h(parts: &[CohomologyVector]) -> [i128; 4] {
    let mut out = [0; 4];
    for p in parts {
        for (o, x) in out.iter_mut().zip(p.h.iter()) {
            *o += x;
        }
    }
    out
}

/// Line-bundle data of the two presentations of `Omega(G)` on `F_e`.
///
/// Euler: `0 -> Omega(G) -> O(G - xi)^2 + O(G - xi + e f) -> O(G) -> 0`.
/// Dual: `0 -> O(G - 3xi + e f) -> O(G - 2xi + e f)^2 + O(G - 2xi) -> Omega(G) -> 0`.
#[derive(Debug, Clone, Copy)]
struct Presentations {
    euler_mid: [i128; 4],
    euler_right: [i128; 4],
    dual_left: [i128; 4],
    dual_mid: [i128; 4],
}

impl Presentations {
    fn new(model: Threefold, g: Divisor) -> Self {
        let e = model.e();
        let h = |a: i32, b: i32| line_cohomology_of(model, g + Divisor::new(a, b));
        let m1 = h(-1, 0);
        let m2 = h(-2, e);
        Presentations {
            euler_mid: sum_h(&[m1, m1, h(-1, e)]),
            euler_right: h(0, 0).h,
            dual_left: h(-3, e).h,
            dual_mid: sum_h(&[m2, m2, h(-2, 0)]),
        }
    }

    fn feasible(&self, x: [i128; 4]) -> bool {
        exact_sequence_feasible(&long_exact_dims(x, self.euler_mid, self.euler_right))
            && exact_sequence_feasible(&long_exact_dims(self.dual_left, self.dual_mid, x))
    }

    /// `h^i(Omega(G)) <= h^{i-1}(right) + h^i(mid)` and `<= h^i(mid) + h^{i+1}(left)`.
    fn upper_bounds(&self) -> [i128; 4] {
        let mut ub = [0; 4];
        for (i, u) in ub.iter_mut().enumerate() {
            let prev = if i > 0 { self.euler_right[i - 1] } else { 0 };
            let next = if i < 3 { self.dual_left[i + 1] } else { 0 };
            *u = (prev + self.euler_mid[i]).min(self.dual_mid[i] + next);
        }
        ub
    }
}

/// `D* = -D - 2f`, so that `h^i(Omega(D)) = h^{3-i}(Omega(D*))` via `Omega^dual = Omega(3xi - e f)`.
pub fn cotangent_serre_dual(d: Divisor) -> Divisor {
    Divisor::new(-d.a, -d.b - 2)
}

fn f0_exact(a: i32, b: i32) -> [i128; 4] {
    let p2 = bott_p2(a);
    let b = b as i128;
    let p1 = [(b + 1).max(0), (-b - 1).max(0)];
    let mut out = [0; 4];
    for (i, x) in p2.iter().enumerate() {
        for (j, y) in p1.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn cotangent_chi(model: Threefold, d: Divisor) -> i128 {
    let chi = rr_general(&chern_of(model, &NamedBundle::cotangent(d)))
        .expect("Chern data of Omega(D) is integral");
    i128::try_from(chi).expect("fits in i128")
}

fn f1_intervals(d: Divisor) -> Result<IntervalCohomology> {
    let model = Threefold::F1;
    let chi = cotangent_chi(model, d);
    let here = Presentations::new(model, d);
    let there = Presentations::new(model, cotangent_serre_dual(d));
    let ub_here = here.upper_bounds();
    let ub_there = there.upper_bounds();
    let mut ub = [0; 4];
    for i in 0..4 {
        ub[i] = ub_here[i].min(ub_there[3 - i]);
    }
    let feasible = |x: [i128; 4]| {
        let y = [x[3], x[2], x[1], x[0]];
        here.feasible(x) && there.feasible(y)
    };

    let box_size = (ub[0] + 1).saturating_mul(ub[1] + 1).saturating_mul(ub[2] + 1);
    if box_size > SEARCH_BUDGET {
        return Ok(IntervalCohomology {
            h: ub.map(|u| Entry::from_range(0, u)),
            chi,
        });
    }

    let mut lo = [i128::MAX; 4];
    let mut hi = [i128::MIN; 4];
    for x0 in 0..=ub[0] {
        for x1 in 0..=ub[1] {
            for x2 in 0..=ub[2] {
                let x3 = x0 - x1 + x2 - chi;
                if !(0..=ub[3]).contains(&x3) {
                    continue;
                }
                let x = [x0, x1, x2, x3];
                if feasible(x) {
                    for i in 0..4 {
                        lo[i] = lo[i].min(x[i]);
                        hi[i] = hi[i].max(x[i]);
                    }
                }
            }
        }
    }
    if lo[0] == i128::MAX {
        return Err(Error::Internal(format!(
            "no cohomology of Omega({d}) is compatible with the Euler sequences"
        )));
    }
    Ok(IntervalCohomology {
        h: std::array::from_fn(|i| Entry::from_range(lo[i], hi[i])),
        chi,
    })
}

pub fn cotangent_cohomology(model: Threefold, a: i32, b: i32) -> Result<IntervalCohomology> {
    match model {
        Threefold::F0 => {
            let h = f0_exact(a, b);
            Ok(IntervalCohomology {
                h: h.map(Entry::Exact),
                chi: h[0] - h[1] + h[2] - h[3],
            })
        }
        Threefold::F1 => f1_intervals(Divisor::new(a, b)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Euler sequence `0 -> Omega(a) -> O(a-1)^3 -> O(a) -> 0` on `P^2`, with the
    /// evaluation map on global sections surjective for `a >= 1` and injective on `H^2`.
    fn p2_line(a: i128) -> [i128; 3] {
        let c2 = |n: i128| if n >= 2 { n * (n - 1) / 2 } else { 0 };
        [c2(a + 2), 0, c2(-a - 1)]
    }

    fn bott_oracle(a: i128) -> [i128; 3] {
        let mid = p2_line(a - 1).map(|x| 3 * x);
        let right = p2_line(a);
        if a == 0 {
            // H^0(O) = C is the cokernel of H^0(O(-1)^3) = 0.
            return [0, 1, 0];
        }
        [mid[0] - right[0], 0, mid[2] - right[2]]
    }

    #[test]
    fn bott_spot_values() {
        assert_eq!(bott_p2(0), [0, 1, 0]);
        assert_eq!(bott_p2(1), [0, 0, 0]);
        assert_eq!(bott_p2(2), [3, 0, 0]);
        assert_eq!(bott_p2(-1), [0, 0, 0]);
        assert_eq!(bott_p2(-2), [0, 0, 3]);
        for a in -30..=30 {
            assert_eq!(bott_p2(a), bott_oracle(a as i128), "a = {a}");
        }
    }

    #[test]
    fn f1_vanishings_used_for_the_monad() {
        for b in [-2, -3] {
            let c = cotangent_cohomology(Threefold::F1, 1, b).unwrap();
            assert_eq!(c.h[1], Entry::Exact(0));
            assert_eq!(c.h[2], Entry::Exact(0));
        }
    }

    #[test]
    fn f0_is_exact() {
        let c = cotangent_cohomology(Threefold::F0, 0, 0).unwrap();
        assert_eq!(c.exact_values(), Some([0, 1, 0, 0]));
    }

    #[test]
    fn feasibility_of_short_sequences() {
        assert!(exact_sequence_feasible(&[1, 3, 2]));
        assert!(!exact_sequence_feasible(&[2, 1, 0]));
        assert!(!exact_sequence_feasible(&[0, 1, 0]));
        assert!(exact_sequence_feasible(&[]));
    }

    proptest! {
        #[test]
        fn f0_consistent_with_rr_and_sequences(a in -8i32..=8, b in -8i32..=8) {
            let c = cotangent_cohomology(Threefold::F0, a, b).unwrap();
            let x = c.exact_values().unwrap();
            prop_assert_eq!(c.chi, cotangent_chi(Threefold::F0, Divisor::new(a, b)));
            let p = Presentations::new(Threefold::F0, Divisor::new(a, b));
            prop_assert!(p.feasible(x));
        }

        #[test]
        fn f1_intervals_are_sound(a in -6i32..=6, b in -6i32..=6) {
            let c = cotangent_cohomology(Threefold::F1, a, b).unwrap();
            prop_assert_eq!(c.chi, cotangent_chi(Threefold::F1, Divisor::new(a, b)));
            for e in c.h {
                prop_assert!(0 <= e.lo() && e.lo() <= e.hi());
            }
            // Some point of the box is consistent with every constraint.
            let d = Divisor::new(a, b);
            let here = Presentations::new(Threefold::F1, d);
            let there = Presentations::new(Threefold::F1, cotangent_serre_dual(d));
            let mut witness = false;
            for x0 in c.h[0].lo()..=c.h[0].hi() {
                for x1 in c.h[1].lo()..=c.h[1].hi() {
                    for x2 in c.h[2].lo()..=c.h[2].hi() {
                        let x3 = x0 - x1 + x2 - c.chi;
                        let x = [x0, x1, x2, x3];
                        if c.h[3].contains(x3) && here.feasible(x) && there.feasible([x3, x2, x1, x0]) {
                            witness = true;
                        }
                    }
                }
            }
            prop_assert!(witness);
        }
    }
}
