//! Conservative slope-stability checks.
//!
//! A rank-2 bundle `E` is stable when `h^0(E(-D)) = 0` for every divisor `D` with
//! `mu(O(D)) >= mu(E)` (semistable: `>`). Only a finite box of twists is inspected and every
//! vanishing must come with a certificate; anything else is reported, never guessed.

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::bundle::ChernData;
use crate::chow::{line_slope, slope, Divisor, Threefold};
use crate::error::{Error, Result};
use crate::line_cohomology::line_cohomology_of;
use crate::serre::{Variant, ZScheme};

pub const DEFAULT_BOUND: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Stable,
    Semistable,
}

/// Twists `D = a xi + b f` with `|a|, |b| <= bound` and `mu(D) >= mu` (`> mu` when semistable).
pub fn hoppe_window(model: Threefold, mu: &BigRational, bound: u32, mode: Mode) -> Vec<Divisor> {
    let r = bound as i32;
    let mut out = Vec::new();
    for a in -r..=r {
        for b in -r..=r {
            let d = Divisor::new(a, b);
            let s = line_slope(model, d);
            let keep = match mode {
                Mode::Stable => &s >= mu,
                Mode::Semistable => &s > mu,
            };
            if keep {
                out.push(d);
            }
        }
    }
    out
}

/// Why `h^0` of a sheaf vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// The line bundle itself has no sections.
    NoSections,
    /// `I_Z` with `Z` non-empty has no constant sections.
    NonEmptyZ,
    /// Sections of `O(k f)` vanish on `k` fibres, which cannot contain `Z`.
    FibresMissZ,
    /// The only section of `O(k E)` vanishes on `kE`, which does not contain `Z`.
    ExceptionalMissesZ,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Vanishes(Rule),
    Nonzero(i128),
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// One twist of the window: certificates for both ends of `0 -> O(S) -> E -> I_Z(Q) -> 0`.
    Twist {
        a: i32,
        b: i32,
        slope: i64,
        sub: Check,
        quotient: Check,
    },
    /// One summand of a split bundle with its slope.
    Summand { a: i32, b: i32, slope: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    StableVerified,
    SemistableVerified,
    Unstable,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityVerdict {
    pub verdict: Verdict,
    pub bound: Option<u32>,
    pub witnesses: Vec<Witness>,
}

impl StabilityVerdict {
    /// Witnesses that explain a non-verified verdict.
    pub fn offending(&self) -> Vec<&Witness> {
        self.witnesses
            .iter()
            .filter(|w| match w {
                Witness::Twist { sub, quotient, .. } => {
                    !matches!(sub, Check::Vanishes(_)) || !matches!(quotient, Check::Vanishes(_))
                }
                Witness::Summand { .. } => self.verdict == Verdict::Unstable,
            })
            .collect()
    }
}

fn slope_int(model: Threefold, d: Divisor) -> i64 {
    line_slope(model, d).to_integer().to_i64().expect("small slope")
}

fn check_line(model: Threefold, d: Divisor) -> Check {
    match line_cohomology_of(model, d).h0() {
        0 => Check::Vanishes(Rule::NoSections),
        n => Check::Nonzero(n),
    }
}

/// Certifies `h^0(I_Z(q)) = 0` where possible.
fn check_ideal(z: &ZScheme, q: Divisor) -> Check {
    let model = z.model;
    if line_cohomology_of(model, q).h0() == 0 {
        return Check::Vanishes(Rule::NoSections);
    }
    if q == Divisor::ZERO {
        return if z.is_empty() {
            Check::Nonzero(1)
        } else {
            Check::Vanishes(Rule::NonEmptyZ)
        };
    }
    // q = k f: zero loci are k fibres. Curves of class xi^2 - xi f or xi^2 meet every fibre,
    // and disjoint fibre lines lie in distinct fibres.
    if q.a == 0 && q.b >= 1 {
        let k = q.b as u64;
        if z.n_l + z.n_m >= 1 || z.n_n as u64 > k {
            return Check::Vanishes(Rule::FibresMissZ);
        }
        return Check::Unknown;
    }
    // q = k E on F1: a general curve of class xi^2 or xi f is not contained in E.
    if let Some(exc) = model.exceptional() {
        if q.a >= 1 && q == q.a * exc && (z.n_m >= 1 || z.n_n >= 1) {
            return Check::Vanishes(Rule::ExceptionalMissesZ);
        }
    }
    Check::Unknown
}

/// Hoppe-criterion check of the bundle built by `variant` on the window of size `bound`.
pub fn check_serre_stability_with(
    variant: Variant,
    alpha: i32,
    beta: i32,
    bound: u32,
    mode: Mode,
) -> Result<StabilityVerdict> {
    variant.check_admissible(alpha, beta)?;
    let model = variant.model();
    let z = variant.z_scheme(alpha, beta)?;
    let e = ChernData::instanton(model, alpha, beta);
    let mu = slope(&e.c1, e.rank)?;
    let (s, q) = (variant.sub_divisor(), variant.quotient_divisor());

    let mut witnesses = Vec::new();
    let (mut unstable, mut unknown) = (false, false);
    for d in hoppe_window(model, &mu, bound, mode) {
        let sub = check_line(model, s - d);
        let quotient = check_ideal(&z, q - d);
        unstable |= matches!(sub, Check::Nonzero(_));
        unknown |= !matches!(quotient, Check::Vanishes(_));
        witnesses.push(Witness::Twist {
            a: d.a,
            b: d.b,
            slope: slope_int(model, d),
            sub,
            quotient,
        });
    }
    let verdict = match (unstable, unknown, mode) {
        (true, _, _) => Verdict::Unstable,
        (false, true, _) => Verdict::Inconclusive,
        (false, false, Mode::Stable) => Verdict::StableVerified,
        (false, false, Mode::Semistable) => Verdict::SemistableVerified,
    };
    Ok(StabilityVerdict {
        verdict,
        bound: Some(bound),
        witnesses,
    })
}

pub fn check_serre_stability(variant: Variant, alpha: i32, beta: i32, bound: u32) -> Result<StabilityVerdict> {
    check_serre_stability_with(variant, alpha, beta, bound, Mode::Stable)
}

/// A direct sum of line bundles is never stable, and is semistable exactly when all
/// summands have the same slope.
pub fn check_split_slopes(model: Threefold, summands: &[Divisor]) -> Result<StabilityVerdict> {
    if summands.is_empty() {
        return Err(Error::EmptySummands);
    }
    let witnesses: Vec<Witness> = summands
        .iter()
        .map(|d| Witness::Summand {
            a: d.a,
            b: d.b,
            slope: slope_int(model, *d),
        })
        .collect();
    let slopes: Vec<i64> = summands.iter().map(|d| slope_int(model, *d)).collect();
    let verdict = if slopes.iter().all(|&s| s == slopes[0]) {
        Verdict::SemistableVerified
    } else {
        Verdict::Unstable
    };
    Ok(StabilityVerdict {
        verdict,
        bound: None,
        witnesses,
    })
}

/// `mu` of a rank-2 bundle with `c1 = -h`.
pub fn instanton_slope(model: Threefold) -> BigRational {
    slope(&-model.h().class(model), 2).expect("rank 2")
}
