use fano_core::bundle::{chern_of, rr_chi, ChernData, NamedBundle};
use fano_core::monad::{build_monad, epq_table_numeric, verify_monad, MonadSpec};
use fano_core::serre::{recipe_charge, Variant};
use fano_core::stability::{check_serre_stability, Verdict};
use fano_core::{parse_expr, ChowClass, Divisor, Error, Threefold};
use proptest::prelude::*;

const F0: Threefold = Threefold::F0;
const F1: Threefold = Threefold::F1;

#[test]
fn monad_and_serre_agree_on_the_minimal_charge() {
    let m = build_monad(MonadSpec::new(F1, 3, 1, 0, 0)).unwrap();
    let from_monad = verify_monad(&m).chern;
    let from_serre = recipe_charge(Variant::Instanton, 3, 1).unwrap().chern_e;
    assert_eq!(from_monad, from_serre);
    assert_eq!(from_monad, chern_of(F1, &NamedBundle::cotangent(Divisor::new(0, -1))));
}

#[test]
fn closed_form_rr_matches_general_rr() {
    for (m, a, b) in [(F1, 3, 1), (F1, 5, 4), (F0, 3, 3), (F0, 4, 7)] {
        let direct = fano_core::bundle::rr_general(&ChernData::instanton(m, a, b)).unwrap();
        assert_eq!(direct, rr_chi(m, a as i64, b as i64, 0, 0).unwrap());
    }
}

#[test]
fn json_round_trips() {
    let c = parse_expr("3*xi^2 - 7*xi*f + 2*xi^2*f", F1).unwrap();
    let s = serde_json::to_string(&c).unwrap();
    assert_eq!(serde_json::from_str::<ChowClass>(&s).unwrap(), c);

    let big = ChowClass::xi(F1).scale(1_000_000_000_000i64).pow(3);
    let s = serde_json::to_string(&big).unwrap();
    assert_eq!(serde_json::from_str::<ChowClass>(&s).unwrap(), big);

    let m = build_monad(MonadSpec::new(F1, 4, 2, 1, 2)).unwrap();
    let s = serde_json::to_string(&m).unwrap();
    assert_eq!(serde_json::from_str::<fano_core::monad::MonadTerms>(&s).unwrap(), m);

    let t = epq_table_numeric(MonadSpec::new(F0, 4, 3, 1, 0)).unwrap();
    let v = serde_json::to_value(&t).unwrap();
    assert_eq!(v["model"], "F0");
    assert_eq!(v["entries"][2][3], 2);
}

#[test]
fn errors_are_typed() {
    assert!(matches!(parse_expr("E", F0), Err(Error::ExceptionalOnF0 { position: 0 })));
    assert!(matches!(parse_expr("xi^-1", F1), Err(Error::NegativeExponent { .. })));
    assert!(matches!(parse_expr("xi +", F1), Err(Error::Parse { .. })));
    assert!(matches!(
        build_monad(MonadSpec::new(F0, 3, 3, 0, 1)),
        Err(Error::InvalidSpec { .. })
    ));
    assert!(matches!(recipe_charge(Variant::Earnest, 2, 0), Err(Error::Inadmissible { .. })));
}

proptest! {
    #[test]
    fn admissible_monads_verify(a in 2i32..12, b in -8i32..12, c in 0i32..6, d in 0i32..14) {
        let spec = MonadSpec::new(F1, a, b, c, d);
        prop_assume!(spec.violations().is_empty());
        let v = verify_monad(&build_monad(spec).unwrap());
        prop_assert!(v.ok, "{:?}", v.failures);
        let t = epq_table_numeric(spec).unwrap();
        prop_assert_eq!(*t.get(-5, 4), (a + b - 4) as i64);
    }

    #[test]
    fn constructed_instantons_are_stable(a in 2i32..9, b in -4i32..9) {
        for v in Variant::ALL {
            if v.check_admissible(a, b).is_ok() {
                let r = check_serre_stability(v, a, b, 6).unwrap();
                prop_assert_ne!(r.verdict, Verdict::Unstable);
            }
        }
    }

    #[test]
    fn parse_matches_constructors(a in -50i32..50, b in -50i32..50) {
        for m in Threefold::ALL {
            let text = format!("{a}*xi {} {}*f", if b < 0 { "-" } else { "+" }, b.abs());
            prop_assert_eq!(parse_expr(&text, m).unwrap(), Divisor::new(a, b).class(m));
        }
    }
}
