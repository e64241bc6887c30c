//! Curve classes, the charge algebra of the three Serre constructions, and the bounds on
//! `h^1(E(-E))` that decide earnestness on `F1`.
//!
//! Each construction starts from a disjoint union `Z` of curves from the families `L`, `M`,
//! `N`, extends `I_Z(det)` by `O` to a rank-2 bundle `F`, and twists `F` to `c1 = -h`.

use std::fmt;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::bundle::ChernData;
use crate::chow::{ChowClass, Divisor, Threefold};
use crate::error::{Error, Result};
use crate::line_cohomology::line_cohomology_of;
use crate::moduli;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FamilyName {
    L,
    M,
    N,
}

impl fmt::Display for FamilyName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyName::L => "L",
            FamilyName::M => "M",
            FamilyName::N => "N",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveFamily {
    pub name: FamilyName,
    pub model: Threefold,
    pub class: ChowClass,
    /// Splitting type of the normal bundle on `P^1`.
    pub normal_splitting: (i32, i32),
    pub hilbert_dim: i32,
    pub h_degree: i64,
    pub hhat_degree: i64,
}

fn pairing(class: &ChowClass, d: Divisor) -> i64 {
    (class * &d.class(class.model()))
        .degree()
        .to_i64()
        .expect("small intersection number")
}

/// The family `name` on `model`; lines (`L`) only exist on `F1`.
pub fn curve_family(model: Threefold, name: FamilyName) -> Option<CurveFamily> {
    let e = model.e();
    let (class, normal, hilb) = match name {
        FamilyName::L if model == Threefold::F0 => return None,
        FamilyName::L => (ChowClass::codim2(model, 1, -1), (0, -1), 1),
        FamilyName::M => (ChowClass::codim2(model, 1, 0), (e, e), 2 * (1 + e)),
        FamilyName::N => (ChowClass::codim2(model, 0, 1), (0, 1), 3),
    };
    Some(CurveFamily {
        name,
        model,
        h_degree: pairing(&class, model.h()),
        hhat_degree: pairing(&class, model.hhat()),
        class,
        normal_splitting: normal,
        hilbert_dim: hilb,
    })
}

/// A disjoint union of `n_l` lines, `n_m` curves of class `xi^2` and `n_n` fibre lines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ZScheme {
    pub model: Threefold,
    pub n_l: u32,
    pub n_m: u32,
    pub n_n: u32,
}

impl ZScheme {
    pub fn new(model: Threefold, n_l: u32, n_m: u32, n_n: u32) -> Result<Self> {
        if model == Threefold::F0 && n_l > 0 {
            return Err(Error::WrongThreefold {
                variant: "line component".into(),
                expected: Threefold::F1,
                found: model,
            });
        }
        Ok(ZScheme {
            model,
            n_l,
            n_m,
            n_n,
        })
    }

    pub fn is_empty(&self) -> bool {
        self.n_l + self.n_m + self.n_n == 0
    }

    /// `(family, count)` for every family that occurs.
    pub fn components(&self) -> Vec<(CurveFamily, u32)> {
        [
            (FamilyName::L, self.n_l),
            (FamilyName::M, self.n_m),
            (FamilyName::N, self.n_n),
        ]
        .into_iter()
        .filter(|&(_, n)| n > 0)
        .map(|(name, n)| (curve_family(self.model, name).expect("validated on construction"), n))
        .collect()
    }
}

impl fmt::Display for ZScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .components()
            .iter()
            .map(|(fam, n)| format!("{n}*{}", fam.name))
            .collect();
        if parts.is_empty() {
            f.write_str("empty")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

pub fn z_class(z: &ZScheme) -> ChowClass {
    let m = z.model;
    ChowClass::codim2(m, 1, -1).scale(z.n_l)
        + ChowClass::codim2(m, 1, 0).scale(z.n_m)
        + ChowClass::codim2(m, 0, 1).scale(z.n_n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Polarization {
    H,
    HHat,
}

impl Polarization {
    pub fn divisor(self, model: Threefold) -> Divisor {
        match self {
            Polarization::H => model.h(),
            Polarization::HHat => model.hhat(),
        }
    }
}

/// Effective codimension-2 classes `a xi^2 + b xi f` (`a >= 0`, `e a + b >= 0`) of degree 1.
pub fn classify_unit_degree(model: Threefold, pol: Polarization) -> Vec<ChowClass> {
    let d = pol.divisor(model);
    let e = model.e();
    // With b' = e a + b the degree is a q + b' p for d = p xi + q f, and p, q >= 1
    // for both polarizations, so a, b' <= 1.
    debug_assert!(d.a >= 1 && d.b >= 1);
    let mut out = Vec::new();
    for a in 0..=1 {
        for bp in 0..=1 {
            let class = ChowClass::codim2(model, a, bp - e * a);
            if pairing(&class, d) == 1 {
                out.push(class);
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SerreApplicability {
    pub exists: bool,
    pub unique: bool,
}

/// A bundle with a section vanishing on `Z` exists when `h^2(-det) = 0` and is unique
/// when moreover `h^1(-det) = 0`.
pub fn serre_applicable(model: Threefold, det: Divisor) -> SerreApplicability {
    let c = line_cohomology_of(model, -det);
    let exists = c.h2() == 0;
    SerreApplicability {
        exists,
        unique: exists && c.h1() == 0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Instanton,
    Earnest,
    Segre,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Instanton, Variant::Earnest, Variant::Segre];

    pub fn model(self) -> Threefold {
        match self {
            Variant::Instanton | Variant::Earnest => Threefold::F1,
            Variant::Segre => Threefold::F0,
        }
    }

    /// `c1` of the intermediate bundle `F`.
    pub fn det(self) -> Divisor {
        match self {
            Variant::Instanton => Divisor::new(1, -1),
            Variant::Earnest => Divisor::new(1, 1),
            Variant::Segre => Divisor::new(1, 0),
        }
    }

    /// `E = F(twist)`.
    pub fn twist(self) -> Divisor {
        match self {
            Variant::Instanton => Divisor::new(-2, 0),
            Variant::Earnest | Variant::Segre => Divisor::new(-2, -1),
        }
    }

    /// `S` in `0 -> O(S) -> E -> I_Z(Q) -> 0`.
    pub fn sub_divisor(self) -> Divisor {
        self.twist()
    }

    /// `Q` in `0 -> O(S) -> E -> I_Z(Q) -> 0`.
    pub fn quotient_divisor(self) -> Divisor {
        self.det() + self.twist()
    }

    pub fn families(self) -> &'static [FamilyName] {
        match self {
            Variant::Instanton => &[FamilyName::L, FamilyName::N],
            Variant::Earnest | Variant::Segre => &[FamilyName::M, FamilyName::N],
        }
    }

    /// `(n_L, n_M, n_N)` as affine functions of the charge; may be negative.
    pub fn counts(self, alpha: i32, beta: i32) -> (i32, i32, i32) {
        match self {
            Variant::Instanton => (alpha - 2, 0, alpha + beta - 4),
            Variant::Earnest => (0, alpha - 2, beta - 1),
            Variant::Segre => (0, alpha - 2, beta - 3),
        }
    }

    /// The curve configuration `Z` of the construction.
    pub fn z_scheme(self, alpha: i32, beta: i32) -> Result<ZScheme> {
        let (l, m, n) = self.counts(alpha, beta);
        let conv = |x: i32| u32::try_from(x).ok();
        match (conv(l), conv(m), conv(n)) {
            (Some(l), Some(m), Some(n)) => ZScheme::new(self.model(), l, m, n),
            _ => Err(Error::Inadmissible {
                variant: self.to_string(),
                alpha,
                beta,
                reason: format!("negative component count in ({l}, {m}, {n})"),
            }),
        }
    }

    /// Charges for which the construction produces a stable instanton.
    pub fn admissibility_violations(self, alpha: i32, beta: i32) -> Vec<String> {
        moduli::construction_violations(self, alpha, beta)
    }

    pub fn check_admissible(self, alpha: i32, beta: i32) -> Result<()> {
        let v = self.admissibility_violations(alpha, beta);
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Inadmissible {
                variant: self.to_string(),
                alpha,
                beta,
                reason: v.join(", "),
            })
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Instanton => "instanton",
            Variant::Earnest => "earnest",
            Variant::Segre => "segre",
        })
    }
}

/// `sum of normal degrees = det . C` for one family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetCheck {
    pub family: FamilyName,
    pub normal_degree: i64,
    pub det_degree: i64,
    pub ok: bool,
}

/// Splitting of `E` on a general line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LineRestriction {
    Splits(i32, i32),
    /// There are no lines to restrict to.
    Vacuous,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecipeOutcome {
    pub variant: Variant,
    pub alpha: i32,
    pub beta: i32,
    pub z: ZScheme,
    pub z_class: ChowClass,
    pub chern_f: ChernData,
    pub chern_e: ChernData,
    pub det_checks: Vec<DetCheck>,
    pub det_compatible: bool,
    pub applicability: SerreApplicability,
    pub general_line: LineRestriction,
}

pub fn det_checks(variant: Variant) -> Vec<DetCheck> {
    let model = variant.model();
    variant
        .families()
        .iter()
        .map(|&name| {
            let fam = curve_family(model, name).expect("families of the recipe exist");
            let normal_degree = (fam.normal_splitting.0 + fam.normal_splitting.1) as i64;
            let det_degree = pairing(&fam.class, variant.det());
            DetCheck {
                family: name,
                normal_degree,
                det_degree,
                ok: normal_degree == det_degree,
            }
        })
        .collect()
}

/// Runs the construction for charge `alpha xi^2 + beta xi f`.
pub fn recipe_charge(variant: Variant, alpha: i32, beta: i32) -> Result<RecipeOutcome> {
    variant.check_admissible(alpha, beta)?;
    let model = variant.model();
    let z = variant.z_scheme(alpha, beta)?;
    let zc = z_class(&z);
    let chern_f = ChernData {
        rank: 2,
        c1: variant.det().class(model),
        c2: zc.clone(),
        c3: ChowClass::zero(model),
    };
    let chern_e = chern_f.twist(variant.twist());
    let checks = det_checks(variant);
    if let Some(bad) = checks.iter().find(|c| !c.ok) {
        return Err(Error::Internal(format!(
            "normal bundle of {} has degree {} but det . C = {}",
            bad.family, bad.normal_degree, bad.det_degree
        )));
    }
    let expected = ChernData::instanton(model, alpha, beta);
    if chern_e != expected {
        return Err(Error::Internal(format!(
            "construction gives {chern_e}, expected {expected}"
        )));
    }
    let general_line = match model {
        Threefold::F1 => {
            let d = pairing(&curve_family(model, FamilyName::L).expect("F1").class, -model.h());
            LineRestriction::Splits(0, d as i32)
        }
        Threefold::F0 => LineRestriction::Vacuous,
    };
    Ok(RecipeOutcome {
        variant,
        alpha,
        beta,
        z,
        z_class: zc,
        chern_f,
        chern_e,
        det_compatible: true,
        det_checks: checks,
        applicability: serre_applicable(model, variant.det()),
        general_line,
    })
}

/// `h^1(I_Z(D))` for a disjoint union of smooth rational curves, valid when
/// `h^0(O(D)) = h^1(O(D)) = 0` so that it equals `h^0(O_Z(D))`.
fn h1_ideal_twist(z: &ZScheme, d: Divisor) -> Result<i128> {
    let c = line_cohomology_of(z.model, d);
    if c.h0() != 0 || c.h1() != 0 {
        return Err(Error::Internal(format!(
            "h^1(I_Z({d})) is not determined by Z alone"
        )));
    }
    Ok(z.components()
        .iter()
        .map(|(fam, n)| *n as i128 * (pairing(&fam.class, d) as i128 + 1).max(0))
        .sum())
}

/// Interval containing `h^1(E(-E))` for the bundle built by `variant`, from the
/// cohomology sequence of `0 -> O(S - E) -> E(-E) -> I_Z(Q - E) -> 0`.
pub fn earnest_defect_bounds(variant: Variant, alpha: i32, beta: i32) -> Result<(i128, i128)> {
    let model = variant.model();
    let Some(exc) = model.exceptional() else {
        return Err(Error::WrongThreefold {
            variant: variant.to_string(),
            expected: Threefold::F1,
            found: model,
        });
    };
    if alpha < 2 {
        return Err(Error::Inadmissible {
            variant: variant.to_string(),
            alpha,
            beta,
            reason: "alpha >= 2".into(),
        });
    }
    let z = variant.z_scheme(alpha, beta)?;
    let sub = line_cohomology_of(model, variant.sub_divisor() - exc);
    let quot = h1_ideal_twist(&z, variant.quotient_divisor() - exc)?;
    let lo = (quot - sub.h2()).max(0);
    let hi = sub.h1() + quot;
    Ok((lo, hi))
}
