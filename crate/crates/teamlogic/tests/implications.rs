use teamlogic::fixtures::{implications, Implication};
use teamlogic_core::dbdeps::{self, DbError, Dependency, System};

fn system(i: &Implication) -> System {
    let exd = i.premises.iter().chain([&i.goal]).any(|d| matches!(d, Dependency::Exd(..)));
    if exd {
        System::IncExc
    } else {
        System::IncOnly
    }
}

#[test]
fn listed_implications_are_derived_and_hold() {
    for i in implications("implications.txt").unwrap() {
        let sys = system(&i);
        let d = dbdeps::derive(&i.premises, &i.goal, sys, 6)
            .unwrap()
            .unwrap_or_else(|| panic!("no derivation for {i}"));
        dbdeps::verify(&d, &i.premises, sys).unwrap();
        match dbdeps::semantic_implies(&i.premises, &i.goal, 3, 3) {
            Ok(holds) => assert!(holds, "{i} refuted"),
            Err(DbError::Budget { .. }) => assert!(dbdeps::semantic_implies(&i.premises, &i.goal, 2, 3).unwrap(), "{i}"),
            Err(e) => panic!("{i}: {e}"),
        }
    }
}

#[test]
fn listed_non_implications_are_refuted() {
    for i in implications("non-implications.txt").unwrap() {
        let r = dbdeps::find_counterexample(&i.premises, &i.goal, 3, 3, dbdeps::DEFAULT_RELATION_BUDGET)
            .unwrap()
            .unwrap_or_else(|| panic!("no counterexample for {i}"));
        for p in &i.premises {
            assert!(dbdeps::check_dependency(&r, p).unwrap());
        }
        assert!(!dbdeps::check_dependency(&r, &i.goal).unwrap());
        assert_eq!(dbdeps::derive(&i.premises, &i.goal, system(&i), 4).unwrap(), None, "{i}");
    }
}

#[test]
fn reference_derivations_have_the_expected_rules() {
    let got: Vec<String> = implications("derivations.txt")
        .unwrap()
        .iter()
        .map(|i| {
            let d = dbdeps::derive(&i.premises, &i.goal, system(i), 6).unwrap().unwrap();
            d.to_string().lines().next().unwrap().to_string()
        })
        .collect();
    assert_eq!(
        got,
        [
            "incl(x ; x)  [I1]",
            "incl(y ; v)  [I2 pi=(2)]",
            "incl(x ; z)  [I3]",
            "excl(z ; w)  [IE2]",
        ]
    );
}
