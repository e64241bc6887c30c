//! Which charges carry instantons, and the dimensions attached to them.

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::chow::{ChowClass, Divisor, Threefold};
use crate::error::{Error, Result};
use crate::line_cohomology::line_cohomology;
use crate::serre::Variant;

/// `c2 . h` for `c2 = alpha xi^2 + beta xi f`, read off the ring.
pub fn charge_degree(model: Threefold, alpha: i32, beta: i32) -> i64 {
    let c2 = ChowClass::codim2(model, alpha, beta);
    (c2 * model.h().class(model))
        .degree()
        .to_i64()
        .expect("degree of a machine-sized charge")
}

fn failed(checks: &[(bool, &str)]) -> Vec<String> {
    checks.iter().filter(|(ok, _)| !ok).map(|(_, s)| s.to_string()).collect()
}

/// Violated inequalities of the range in which `variant` yields a stable instanton.
pub fn construction_violations(variant: Variant, alpha: i32, beta: i32) -> Vec<String> {
    let deg = charge_degree(variant.model(), alpha, beta);
    match variant {
        Variant::Instanton => failed(&[
            (alpha >= 2, "alpha >= 2"),
            (alpha + beta >= 4, "alpha + beta >= 4"),
            (deg >= 15, "c2.h >= 15"),
        ]),
        Variant::Earnest => failed(&[
            (alpha >= 2, "alpha >= 2"),
            (beta >= 1, "beta >= 1"),
            (deg >= 15, "c2.h >= 15"),
        ]),
        Variant::Segre => failed(&[
            (alpha >= 2, "alpha >= 2"),
            (beta >= 3, "beta >= 3"),
            (alpha + beta >= 6, "alpha + beta >= 6"),
        ]),
    }
}

/// Conditions forced by the non-negativity of the monad's cohomology table.
pub fn monad_necessary_ok(model: Threefold, alpha: i32, beta: i32) -> bool {
    match model {
        Threefold::F1 => alpha >= 2 && alpha + beta >= 4,
        Threefold::F0 => alpha >= 2 && beta >= 3 && alpha + beta >= 6,
    }
}

pub fn instanton_exists(model: Threefold, alpha: i32, beta: i32) -> bool {
    let v = match model {
        Threefold::F1 => Variant::Instanton,
        Threefold::F0 => Variant::Segre,
    };
    construction_violations(v, alpha, beta).is_empty()
}

pub fn earnest_exists(model: Threefold, alpha: i32, beta: i32) -> bool {
    match model {
        Threefold::F1 => construction_violations(Variant::Earnest, alpha, beta).is_empty(),
        Threefold::F0 => instanton_exists(model, alpha, beta),
    }
}

/// Rays of the effective cone of divisors.
pub fn effective_rays(model: Threefold) -> [Divisor; 2] {
    match model {
        Threefold::F1 => [Divisor::new(1, -1), Divisor::new(0, 1)],
        Threefold::F0 => [Divisor::new(1, 0), Divisor::new(0, 1)],
    }
}

/// Whether `alpha xi^2 + beta xi f` pairs non-negatively with every effective divisor.
pub fn mov_contains(model: Threefold, alpha: i32, beta: i32) -> bool {
    let c2 = ChowClass::codim2(model, alpha, beta);
    effective_rays(model)
        .iter()
        .all(|d| (&c2 * &d.class(model)).degree() >= 0.into())
}

/// `dim Ext^1(E, E) = 2 c2.h - h^3/2 - 3` for an instanton with `Ext^2 = Ext^3 = 0`.
pub fn ext1_from_degree(model: Threefold, degree: i64) -> i64 {
    let h3 = model.degree().to_i64().expect("54");
    2 * degree - h3 / 2 - 3
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChargeReport {
    pub model: Threefold,
    pub alpha: i32,
    pub beta: i32,
    pub degree: i64,
    pub monad_necessary_ok: bool,
    pub instanton_exists: bool,
    pub earnest_exists: bool,
    pub in_movable_cone: bool,
    pub ext1_dim: Option<i64>,
    pub notes: Vec<String>,
}

pub fn classify_charge(model: Threefold, alpha: i32, beta: i32) -> ChargeReport {
    let degree = charge_degree(model, alpha, beta);
    let exists = instanton_exists(model, alpha, beta);
    let mut notes = vec!["instanton_exists: constructive range, also necessary".to_string()];
    match model {
        Threefold::F1 => notes.push("earnest_exists: earnest construction range".into()),
        Threefold::F0 => {
            notes.push("earnest_exists: every instanton on P1xP2 is earnest".into());
            notes.push("in_movable_cone: derived from the effective-cone pairing".into());
        }
    }
    ChargeReport {
        model,
        alpha,
        beta,
        degree,
        monad_necessary_ok: monad_necessary_ok(model, alpha, beta),
        instanton_exists: exists,
        earnest_exists: earnest_exists(model, alpha, beta),
        in_movable_cone: mov_contains(model, alpha, beta),
        ext1_dim: exists.then(|| ext1_from_degree(model, degree)),
        notes,
    }
}

/// `(ext^1, ext^2, ext^3)` of the bundle produced by `variant`.
pub fn ext_dims_constructed(variant: Variant, alpha: i32, beta: i32) -> Result<(i64, i64, i64)> {
    variant.check_admissible(alpha, beta)?;
    let deg = charge_degree(variant.model(), alpha, beta);
    Ok((ext1_from_degree(variant.model(), deg), 0, 0))
}

/// All `(alpha, beta)` with `0 <= alpha <= max_degree` and `0 <= c2.h <= max_degree`,
/// sorted by degree, then `alpha`.
pub fn enumerate_charges(model: Threefold, max_degree: u32) -> Vec<ChargeReport> {
    let max = max_degree as i64;
    let pa = charge_degree(model, 1, 0);
    let pb = charge_degree(model, 0, 1);
    let mut out = Vec::new();
    for alpha in 0..=max {
        let lo = (-pa * alpha).div_euclid(pb) + i64::from((-pa * alpha).rem_euclid(pb) != 0);
        let hi = (max - pa * alpha).div_euclid(pb);
        for beta in lo..=hi {
            out.push(classify_charge(model, alpha as i32, beta as i32));
        }
    }
    out.sort_by_key(|r| (r.degree, r.alpha));
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecialCharge {
    pub alpha: i32,
    pub beta: i32,
    pub extension_space_dim: i64,
    pub moduli_dim: i64,
    pub ext1_dim: i64,
}

/// Charge `2 xi^2 + 3 xi f` on `F1`: these instantons sit in
/// `0 -> O(-xi - 2f) -> E -> O(-2xi + f) -> 0`, with classes in `P(H^1(O(xi - 3f)))`.
pub fn special_charge_2_3() -> Result<SpecialCharge> {
    let model = Threefold::F1;
    let ext = line_cohomology(model, 1, -3).h1() as i64;
    let moduli_dim = ext - 1;
    let ext1 = classify_charge(model, 2, 3)
        .ext1_dim
        .ok_or_else(|| Error::Internal("charge (2, 3) should carry instantons".into()))?;
    if ext1 != moduli_dim {
        return Err(Error::Internal(format!(
            "projective extension space has dimension {moduli_dim} but ext^1 = {ext1}"
        )));
    }
    Ok(SpecialCharge {
        alpha: 2,
        beta: 3,
        extension_space_dim: ext,
        moduli_dim,
        ext1_dim: ext1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const F0: Threefold = Threefold::F0;
    const F1: Threefold = Threefold::F1;

    fn existing(model: Threefold, max: u32) -> Vec<(i32, i32)> {
        enumerate_charges(model, max)
            .into_iter()
            .filter(|r| r.instanton_exists)
            .map(|r| (r.alpha, r.beta))
            .collect()
    }

    #[test]
    fn classification_examples() {
        let r = classify_charge(F1, 2, 2);
        assert_eq!(r.degree, 14);
        assert!(!r.instanton_exists);
        let r = classify_charge(F1, 3, 1);
        assert!(r.instanton_exists && r.earnest_exists);
        assert_eq!(r.ext1_dim, Some(0));
        let r = classify_charge(F1, 2, 3);
        assert!(r.instanton_exists && r.earnest_exists);
        assert_eq!(r.ext1_dim, Some(4));
        assert!(!classify_charge(F0, 2, 3).monad_necessary_ok);
        assert_eq!(classify_charge(F0, 3, 3).ext1_dim, Some(0));
    }

    #[test]
    fn movable_cone() {
        assert!(!mov_contains(F1, 1, -1));
        assert!(mov_contains(F1, 0, 0));
        assert!(mov_contains(F1, 3, 1));
        for a in -5..=5 {
            for b in -5..=5 {
                for m in Threefold::ALL {
                    assert_eq!(mov_contains(m, a, b), a >= 0 && b >= 0);
                }
            }
        }
    }

    #[test]
    fn ext_dims() {
        assert_eq!(ext_dims_constructed(Variant::Instanton, 3, 1).unwrap(), (0, 0, 0));
        assert_eq!(ext_dims_constructed(Variant::Earnest, 2, 3).unwrap(), (4, 0, 0));
        assert_eq!(ext_dims_constructed(Variant::Segre, 2, 4).unwrap(), (2, 0, 0));
        assert!(ext_dims_constructed(Variant::Segre, 2, 3).is_err());
    }

    #[test]
    fn minimal_charges() {
        assert_eq!(existing(F1, 15), vec![(3, 1)]);
        assert!(existing(F1, 14).is_empty());
        assert_eq!(existing(F0, 15), vec![(3, 3)]);
    }

    #[test]
    fn enumeration_is_complete_and_sorted() {
        let all = enumerate_charges(F1, 20);
        assert!(all.windows(2).all(|w| (w[0].degree, w[0].alpha) < (w[1].degree, w[1].alpha)));
        let mut brute = 0;
        for alpha in 0..=20 {
            for beta in -40..=40 {
                let d = 4 * alpha + 3 * beta;
                if (0..=20).contains(&d) {
                    brute += 1;
                }
            }
        }
        assert_eq!(all.len(), brute);
        assert!(all.iter().any(|r| r.beta < 0));
    }

    #[test]
    fn special_charge() {
        let s = special_charge_2_3().unwrap();
        assert_eq!((s.extension_space_dim, s.moduli_dim, s.ext1_dim), (5, 4, 4));
    }
}
