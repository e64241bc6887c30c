//! Three-term monads `C^-1 -> C^0 -> C^1` whose cohomology is an instanton, and the
//! cohomology tables `e^{p,q}` from which their multiplicities are read.

use std::fmt;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::bundle::{chern_of_complex, rr_chi, ChernData, ComplexTerm, NamedBundle, Summand};
use crate::chow::{Divisor, Threefold};
use crate::error::{Error, Result};

/// Charge `alpha xi^2 + beta xi f` plus the auxiliary dimensions `gamma`, `delta`
/// (`delta` is unused on `F0`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonadSpec {
    pub model: Threefold,
    pub alpha: i32,
    pub beta: i32,
    pub gamma: i32,
    pub delta: i32,
}

impl MonadSpec {
    pub fn new(model: Threefold, alpha: i32, beta: i32, gamma: i32, delta: i32) -> Self {
        MonadSpec {
            model,
            alpha,
            beta,
            gamma,
            delta,
        }
    }

    /// Human-readable list of violated constraints; empty when admissible.
    pub fn violations(&self) -> Vec<String> {
        let (a, b, c, d) = (self.alpha, self.beta, self.gamma, self.delta);
        let checks: Vec<(bool, &str)> = match self.model {
            Threefold::F1 => vec![
                (a >= 2, "alpha >= 2"),
                (c >= 0, "gamma >= 0"),
                (b >= 4 - a, "beta >= 4 - alpha"),
                (b >= a - d - 2, "beta >= alpha - delta - 2"),
                (b >= 1 - c, "beta >= 1 - gamma"),
                (d >= 2 * c, "delta >= 2 gamma"),
            ],
            Threefold::F0 => vec![
                (a >= 2, "alpha >= 2"),
                (b >= 3, "beta >= 3"),
                (a + b >= 6, "alpha + beta >= 6"),
                (c >= 0, "gamma >= 0"),
                (a - b + c >= 0, "alpha - beta + gamma >= 0"),
                (d == 0, "delta = 0 on F0"),
            ],
        };
        checks
            .into_iter()
            .filter(|(ok, _)| !ok)
            .map(|(_, s)| s.to_string())
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        let violations = self.violations();
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidSpec { violations })
        }
    }
}

/// The three terms of the monad, in degrees -1, 0, 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonadTerms {
    pub spec: MonadSpec,
    pub terms: [ComplexTerm; 3],
}

fn term(degree: i32, parts: &[(NamedBundle, i32)]) -> ComplexTerm {
    ComplexTerm {
        degree,
        summands: parts
            .iter()
            .filter(|(_, m)| *m != 0)
            .map(|&(bundle, m)| Summand {
                bundle,
                mult: u32::try_from(m).expect("validated multiplicity"),
            })
            .collect(),
    }
}

fn o(a: i32, b: i32) -> NamedBundle {
    NamedBundle::Line { a, b }
}

pub fn build_monad(spec: MonadSpec) -> Result<MonadTerms> {
    spec.validate()?;
    let MonadSpec {
        alpha: a,
        beta: b,
        gamma: c,
        delta: d,
        ..
    } = spec;
    let omega = NamedBundle::Cotangent { a: 0, b: -1 };
    let terms = match spec.model {
        Threefold::F1 => [
            term(-1, &[(o(-2, -1), a + b - 4), (o(-2, 0), c)]),
            term(0, &[(o(-2, 0), b + c - 1), (omega, a - 2), (o(-1, 0), d + b - a + 2)]),
            term(1, &[(o(-1, -1), c), (o(-1, 0), d - 2 * c), (o(-1, 1), b + c - 1)]),
        ],
        Threefold::F0 => [
            term(-1, &[(o(-2, -1), a + b - 6)]),
            term(0, &[(o(-2, 0), b - 3), (omega, a - 2), (o(-1, -1), c)]),
            term(1, &[(o(-1, -1), a - b + c), (o(-1, 0), b - 3)]),
        ],
    };
    Ok(MonadTerms { spec, terms })
}

impl MonadTerms {
    pub fn model(&self) -> Threefold {
        self.spec.model
    }

    pub fn ranks(&self) -> [i64; 3] {
        self.terms.clone().map(|t| t.rank())
    }
}

impl fmt::Display for MonadTerms {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "C^{} = ", t.degree)?;
            if t.summands.is_empty() {
                f.write_str("0")?;
            }
            for (j, s) in t.summands.iter().enumerate() {
                if j > 0 {
                    f.write_str(" + ")?;
                }
                if s.mult == 1 {
                    write!(f, "{}", s.bundle)?;
                } else {
                    write!(f, "{}^{}", s.bundle, s.mult)?;
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonadVerification {
    pub chern: ChernData,
    pub expected: ChernData,
    pub ok: bool,
    pub failures: Vec<String>,
}

/// Chern data of the monad cohomology, checked against `(2, -h, alpha xi^2 + beta xi f, 0)`.
pub fn verify_monad(terms: &MonadTerms) -> MonadVerification {
    let model = terms.model();
    let chern = chern_of_complex(model, &terms.terms);
    let expected = ChernData::instanton(model, terms.spec.alpha, terms.spec.beta);
    let mut failures = Vec::new();
    if chern.rank != expected.rank {
        failures.push(format!("rank is {}, expected {}", chern.rank, expected.rank));
    }
    for (name, got, want) in [
        ("c1", &chern.c1, &expected.c1),
        ("c2", &chern.c2, &expected.c2),
        ("c3", &chern.c3, &expected.c3),
    ] {
        if got != want {
            failures.push(format!("{name} is {got}, expected {want}"));
        }
    }
    MonadVerification {
        ok: failures.is_empty(),
        chern,
        expected,
        failures,
    }
}

/// Integer affine form `c + x_a alpha + x_b beta + x_c gamma + x_d delta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Affine {
    pub constant: i64,
    pub alpha: i64,
    pub beta: i64,
    pub gamma: i64,
    pub delta: i64,
}

impl Affine {
    pub const ZERO: Affine = Affine {
        constant: 0,
        alpha: 0,
        beta: 0,
        gamma: 0,
        delta: 0,
    };

    pub fn constant(c: i64) -> Self {
        Affine {
            constant: c,
            ..Self::ZERO
        }
    }

    pub fn gamma() -> Self {
        Affine {
            gamma: 1,
            ..Self::ZERO
        }
    }

    pub fn delta() -> Self {
        Affine {
            delta: 1,
            ..Self::ZERO
        }
    }

    pub fn is_zero(&self) -> bool {
        *self == Self::ZERO
    }

    pub fn eval(&self, alpha: i64, beta: i64, gamma: i64, delta: i64) -> i64 {
        self.constant + self.alpha * alpha + self.beta * beta + self.gamma * gamma + self.delta * delta
    }

    fn scale(self, k: i64) -> Self {
        Affine {
            constant: k * self.constant,
            alpha: k * self.alpha,
            beta: k * self.beta,
            gamma: k * self.gamma,
            delta: k * self.delta,
        }
    }

    fn add(self, o: Affine) -> Self {
        Affine {
            constant: self.constant + o.constant,
            alpha: self.alpha + o.alpha,
            beta: self.beta + o.beta,
            gamma: self.gamma + o.gamma,
            delta: self.delta + o.delta,
        }
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (coef, name) in [
            (self.alpha, "α"),
            (self.beta, "β"),
            (self.gamma, "γ"),
            (self.delta, "δ"),
            (self.constant, ""),
        ] {
            if coef == 0 {
                continue;
            }
            let sign = if coef < 0 { "-" } else if first { "" } else { "+" };
            let mag = coef.abs();
            match (mag, name.is_empty()) {
                (_, true) => write!(f, "{sign}{mag}")?,
                (1, false) => write!(f, "{sign}{name}")?,
                _ => write!(f, "{sign}{mag}{name}")?,
            }
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// `ceil(p / 2)`.
fn half_up(p: i32) -> i32 {
    p.div_euclid(2) + p.rem_euclid(2)
}

/// Twists `F_p` indexing the columns `p = -5..=0`.
pub fn column_twists(model: Threefold) -> [Divisor; 6] {
    let d = Divisor::new;
    match model {
        Threefold::F1 => [d(-1, 0), d(-1, 1), d(0, -1), d(0, 0), d(1, -2), d(1, -1)],
        Threefold::F0 => [d(-1, -1), d(-1, 0), d(0, -1), d(0, 0), d(1, -1), d(1, 0)],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Role {
    /// The entry is one of the auxiliary parameters.
    Given(Affine),
    /// The entry is forced by Riemann-Roch once the others are known.
    Solved,
}

/// Non-vanishing positions of each column, as `(q, role)`.
fn column_support(model: Threefold, p: i32) -> Vec<(usize, Role)> {
    use Role::*;
    match (model, p) {
        (Threefold::F1, -5) => vec![(4, Solved)],
        (Threefold::F1, -4) => vec![(4, Solved), (3, Given(Affine::gamma()))],
        (Threefold::F1, -3) => vec![(3, Solved)],
        (Threefold::F1, -1) => vec![(2, Given(Affine::delta())), (1, Solved)],
        (Threefold::F1, 0) => vec![(2, Given(Affine::gamma())), (1, Solved)],
        (Threefold::F0, -5) => vec![(4, Solved)],
        (Threefold::F0, -4) => vec![(4, Solved)],
        (Threefold::F0, -3) => vec![(3, Solved)],
        (Threefold::F0, -1) => vec![(2, Solved), (1, Given(Affine::gamma()))],
        (Threefold::F0, 0) => vec![(1, Solved)],
        _ => vec![],
    }
}

/// Sign of `e^{p,q}` in `chi(E (x) F_p)`: the entry is `h^{q + ceil(p/2)}`.
fn chi_sign(p: i32, q: usize) -> i64 {
    if (q as i32 + half_up(p)).rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// `chi(E(a xi + b f))` as an affine form in `(alpha, beta)`.
pub fn rr_chi_affine(model: Threefold, a: i32, b: i32) -> Affine {
    let at = |alpha: i64, beta: i64| {
        rr_chi(model, alpha, beta, a as i64, b as i64)
            .ok()
            .and_then(|n| n.to_i64())
            .expect("integral and small for table twists")
    };
    let c = at(0, 0);
    Affine {
        constant: c,
        alpha: at(1, 0) - c,
        beta: at(0, 1) - c,
        ..Affine::ZERO
    }
}

/// `e^{p,q}` for `p = -5..=0`, `q = 0..=5`; `entries[p + 5][q]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpqTable<T> {
    pub model: Threefold,
    pub entries: [[T; 6]; 6],
}

impl<T> EpqTable<T> {
    pub fn get(&self, p: i32, q: usize) -> &T {
        &self.entries[(p + 5) as usize][q]
    }
}

impl<T: fmt::Display> EpqTable<T> {
    /// Text grid with `q` decreasing downwards and `p` increasing to the right.
    pub fn render(&self) -> String {
        let cells: Vec<Vec<String>> = (0..6)
            .rev()
            .map(|q| (0..6).map(|pi| self.entries[pi][q].to_string()).collect())
            .collect();
        let width = cells.iter().flatten().map(|c| c.chars().count()).max().unwrap_or(1).max(2);
        let mut out = String::new();
        for (row, q) in cells.iter().zip((0..6).rev()) {
            out.push_str(&format!("q={q} |"));
            for c in row {
                out.push_str(&format!(" {c:>width$}"));
            }
            out.push('\n');
        }
        out.push_str(&format!("    +{}\n", "-".repeat((width + 1) * 6)));
        out.push_str("     ");
        for p in -5..=0 {
            out.push_str(&format!(" {:>width$}", format!("p={p}")));
        }
        out.push('\n');
        out
    }
}

/// Solves each column from Riemann-Roch, treating `gamma`/`delta` entries as given.
fn solve_columns(model: Threefold) -> EpqTable<Affine> {
    let twists = column_twists(model);
    let mut entries = [[Affine::ZERO; 6]; 6];
    for (pi, tw) in twists.iter().enumerate() {
        let p = pi as i32 - 5;
        let mut rest = rr_chi_affine(model, tw.a, tw.b);
        let mut solved = None;
        for (q, role) in column_support(model, p) {
            match role {
                Role::Given(v) => {
                    entries[pi][q] = v;
                    rest = rest.add(v.scale(-chi_sign(p, q)));
                }
                Role::Solved => solved = Some(q),
            }
        }
        if let Some(q) = solved {
            entries[pi][q] = rest.scale(chi_sign(p, q));
        }
    }
    EpqTable { model, entries }
}

pub fn epq_table_symbolic(model: Threefold) -> EpqTable<Affine> {
    solve_columns(model)
}

/// Numeric table for `spec`, cross-checked column by column against [`rr_chi`].
pub fn epq_table_numeric(spec: MonadSpec) -> Result<EpqTable<i64>> {
    spec.validate()?;
    let model = spec.model;
    let (al, be, ga, de) = (
        spec.alpha as i64,
        spec.beta as i64,
        spec.gamma as i64,
        spec.delta as i64,
    );
    let sym = epq_table_symbolic(model);
    let entries = sym.entries.map(|col| col.map(|e| e.eval(al, be, ga, de)));
    for (pi, tw) in column_twists(model).iter().enumerate() {
        let p = pi as i32 - 5;
        let expected = rr_chi(model, al, be, tw.a as i64, tw.b as i64)?;
        let got: i64 = (0..6).map(|q| chi_sign(p, q) * entries[pi][q]).sum();
        if expected != got.into() {
            return Err(Error::Internal(format!(
                "column p={p}: alternating sum {got} but chi = {expected}"
            )));
        }
        if let Some(q) = (0..6).find(|&q| entries[pi][q] < 0) {
            return Err(Error::Internal(format!(
                "negative entry e^({p},{q}) = {}",
                entries[pi][q]
            )));
        }
    }
    Ok(EpqTable { model, entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    const F0: Threefold = Threefold::F0;
    const F1: Threefold = Threefold::F1;

    fn aff(constant: i64, alpha: i64, beta: i64, gamma: i64, delta: i64) -> Affine {
        Affine { constant, alpha, beta, gamma, delta }
    }

    #[test]
    fn ceil_half() {
        let got: Vec<i32> = (-5..=0).map(half_up).collect();
        assert_eq!(got, vec![-2, -2, -1, -1, 0, 0]);
    }

    #[test]
    fn affine_display() {
        assert_eq!(aff(-4, 1, 1, 0, 0).to_string(), "α+β-4");
        assert_eq!(aff(2, -1, 1, 0, 1).to_string(), "-α+β+δ+2");
        assert_eq!(Affine::ZERO.to_string(), "0");
        assert_eq!(aff(0, 0, 0, 2, 0).to_string(), "2γ");
    }

    #[test]
    fn minimal_monads_are_cotangent() {
        for spec in [MonadSpec::new(F1, 3, 1, 0, 0), MonadSpec::new(F0, 3, 3, 0, 0)] {
            let m = build_monad(spec).unwrap();
            assert!(m.terms[0].summands.is_empty());
            assert!(m.terms[2].summands.is_empty());
            assert_eq!(
                m.terms[1].summands,
                vec![Summand { bundle: NamedBundle::Cotangent { a: 0, b: -1 }, mult: 1 }]
            );
            let v = verify_monad(&m);
            assert!(v.ok, "{:?}", v.failures);
            assert_eq!(v.chern, crate::bundle::chern_of(spec.model, &NamedBundle::Cotangent { a: 0, b: -1 }));
        }
    }

    #[test]
    fn small_monad_has_expected_terms() {
        let m = build_monad(MonadSpec::new(F1, 2, 2, 0, 0)).unwrap();
        assert_eq!(m.to_string(), "C^-1 = 0\nC^0 = O(-2*xi) + O(-xi)^2\nC^1 = O(-xi + f)");
        assert!(verify_monad(&m).ok);
    }

    #[test]
    fn invalid_specs_list_violations() {
        let err = build_monad(MonadSpec::new(F1, 1, 0, -1, -3)).unwrap_err();
        match err {
            Error::InvalidSpec { violations } => {
                assert!(violations.contains(&"alpha >= 2".to_string()));
                assert!(violations.contains(&"gamma >= 0".to_string()));
            }
            other => panic!("{other:?}"),
        }
        assert!(build_monad(MonadSpec::new(F0, 2, 3, 0, 0)).is_err());
    }

    #[test]
    fn mutated_monad_fails_verification() {
        let mut m = build_monad(MonadSpec::new(F1, 4, 2, 1, 2)).unwrap();
        assert!(verify_monad(&m).ok);
        m.terms[2].summands.push(Summand { bundle: NamedBundle::Line { a: -1, b: 0 }, mult: 1 });
        let v = verify_monad(&m);
        assert!(!v.ok);
        assert_eq!(v.chern.rank, 1);
    }

    #[test]
    fn numeric_table_spot_value() {
        let t = epq_table_numeric(MonadSpec::new(F0, 3, 3, 0, 0)).unwrap();
        assert_eq!(*t.get(-3, 3), 1);
    }

    #[test]
    fn render_has_six_rows_and_axis() {
        let r = epq_table_symbolic(F1).render();
        assert_eq!(r.lines().count(), 8);
        assert!(r.starts_with("q=5 |"));
        assert!(r.contains("α+β-4"));
    }
}
