use super::*;
use crate::diagram::{fixture, fixture_names, random_diagram, BraidLetter};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use Label::*;

fn state(marking: &str, labels: &str) -> EnhancedState {
    let marking = Marking(
        marking
            .chars()
            .map(|c| if c == '+' { Marker::Positive } else { Marker::Negative })
            .collect(),
    );
    let labels = labels.chars().map(|c| if c == '1' { One } else { X }).collect();
    EnhancedState::new(marking, labels)
}

fn check_entries(cx: &ChainComplex) {
    assert!(cx.is_homogeneous());
    for m in cx.differentials.values() {
        for (_, _, p) in m.nonzero_entries() {
            assert!(p.is_one() || *p == Poly::c(), "entry {p}");
        }
    }
}

#[test]
fn unknot_gradings() {
    let u = fixture("unknot").unwrap();
    assert_eq!(gradings(&u, &state("", "1")).unwrap(), (0, 1));
    assert_eq!(gradings(&u, &state("", "X")).unwrap(), (0, -1));
    let mut s = state("", "X");
    s.c_exp = 1;
    assert_eq!(gradings(&u, &s).unwrap(), (0, 1));
    assert!(matches!(gradings(&u, &state("", "1X")), Err(ComplexError::LabelCount { .. })));
    assert!(matches!(grading(1, 0, 1, 0), Err(ComplexError::Parity { .. })));
}

#[test]
fn unknot_complex() {
    let cx = build_complex(&fixture("unknot").unwrap()).unwrap();
    assert_eq!(cx.bigraded_ranks().len(), 2);
    assert_eq!(cx.at((0, 1)), vec![&state("", "1")]);
    assert_eq!(cx.at((0, -1)), vec![&state("", "X")]);
    assert!(cx.is_zero_differential());
}

#[test]
fn unlink_complex() {
    let cx = build_complex(&fixture("unlink_2").unwrap()).unwrap();
    let ranks: Vec<(Bidegree, usize)> = cx.bigraded_ranks().into_iter().collect();
    assert_eq!(ranks, vec![((0, -2), 1), ((0, 0), 2), ((0, 2), 1)]);
    assert!(cx.is_zero_differential());
}

#[test]
fn hopf_complex() {
    let h = fixture("hopf_positive").unwrap();
    let cx = build_complex(&h).unwrap();
    assert_eq!(cx.total_rank(), 12);
    cx.check_d_squared().unwrap();
    check_entries(&cx);
    assert!(!cx.is_zero_differential());
}

#[test]
fn split_of_one_has_three_incident_states() {
    // The all-positive Hopf state has two circles; one flip merges them, so
    // take the one-circle state (+-) and flip its positive marker.
    let h = fixture("hopf_positive").unwrap();
    let inc = incident_states(&h, &state("+-", "1")).unwrap();
    assert_eq!(inc.len(), 3);
    assert_eq!(inc.iter().filter(|(_, p)| *p == Poly::c()).count(), 1);
    let (with_c, _) = inc.iter().find(|(_, p)| *p == Poly::c()).unwrap();
    assert_eq!(with_c.labels, vec![X, X]);
    assert_eq!(incident_states(&h, &state("+-", "X")).unwrap().len(), 1);
}

#[test]
fn all_negative_state_has_no_incidences() {
    let tr = fixture("trefoil_right").unwrap();
    let n = tr.resolve(&Marking::uniform(3, Marker::Negative)).unwrap().len();
    let s = EnhancedState::new(Marking::uniform(3, Marker::Negative), vec![One; n]);
    assert!(incident_states(&tr, &s).unwrap().is_empty());
}

#[test]
fn merge_of_two_x_vanishes() {
    let h = fixture("hopf_positive").unwrap();
    assert!(incident_states(&h, &state("++", "XX")).unwrap().is_empty());
    assert_eq!(incident_states(&h, &state("++", "1X")).unwrap().len(), 2);
}

#[test]
fn corpus_differentials() {
    for name in fixture_names() {
        let cx = build_complex(&fixture(name).unwrap()).unwrap();
        cx.check_d_squared().unwrap();
        check_entries(&cx);
    }
}

#[test]
fn random_differentials() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..40 {
        let d = random_diagram(&mut rng, 5);
        let cx = build_complex(&d).unwrap();
        cx.check_d_squared().unwrap();
        check_entries(&cx);
    }
}

#[test]
fn size_guard() {
    let d = crate::diagram::braid_closure(2, &[BraidLetter::pos(1); 13]);
    assert!(matches!(
        build_complex(&d),
        Err(ComplexError::TooManyCrossings { count: 13, bound: 12 })
    ));
    assert!(build_complex_with(&fixture("trefoil_left").unwrap(), &Frobenius::standard(), 2).is_err());
}

#[test]
fn reversed_order_is_a_complex() {
    let cx = build_complex(&fixture("figure_eight").unwrap()).unwrap();
    let r = cx.reversed();
    r.check_d_squared().unwrap();
    assert_eq!(r.reversed(), cx);
}

/// Every table allowed by j-preservation, one bit per optional term.
fn admissible_table(bits: u32) -> Frobenius {
    let on = |k: u32| bits >> k & 1 == 1;
    let pick = |terms: Vec<(bool, Term)>| -> Vec<Term> {
        terms.into_iter().filter(|t| t.0).map(|t| t.1).collect()
    };
    let pick2 = |terms: Vec<(bool, Term2)>| -> Vec<Term2> {
        terms.into_iter().filter(|t| t.0).map(|t| t.1).collect()
    };
    Frobenius {
        merge: [
            [pick(vec![(on(0), (One, 0)), (on(1), (X, 1))]), pick(vec![(on(2), (X, 0))])],
            [pick(vec![(on(3), (X, 0))]), vec![]],
        ],
        split: [
            pick2(vec![(on(4), (One, X, 0)), (on(5), (X, One, 0)), (on(6), (X, X, 1))]),
            pick2(vec![(on(7), (X, X, 0))]),
        ],
    }
}

fn is_complex(table: &Frobenius) -> bool {
    ["trefoil_right", "figure_eight", "hopf_negative"].iter().all(|n| {
        build_complex_with(&fixture(n).unwrap(), table, 12)
            .map(|cx| cx.check_d_squared().is_ok())
            .unwrap_or(false)
    })
}

#[test]
fn forcing_the_frobenius_table() {
    // Degree-violating cells are rejected by the builder.
    let mut t = Frobenius::standard();
    t.merge[1][1] = vec![(One, 0)];
    assert!(matches!(
        build_complex_with(&fixture("trefoil_right").unwrap(), &t, 12),
        Err(ComplexError::NotHomogeneous { .. })
    ));
    let mut t = Frobenius::standard();
    t.split[1] = vec![(X, X, 0), (One, One, 0)];
    assert!(build_complex_with(&fixture("trefoil_right").unwrap(), &t, 12).is_err());

    // Among the 256 j-preserving tables, those giving d∘d = 0 with 1 as the
    // unit of m and three terms in Δ(1) are exactly the standard one.
    let survivors: Vec<Frobenius> = (0..256).map(admissible_table).filter(is_complex).collect();
    let standard = Frobenius::standard();
    assert!(survivors.contains(&standard));
    let pinned: Vec<&Frobenius> = survivors
        .iter()
        .filter(|t| {
            t.merge[0][0] == vec![(One, 0)]
                && t.merge[0][1] == vec![(X, 0)]
                && t.merge[1][0] == vec![(X, 0)]
                && t.split[0].len() == 3
        })
        .collect();
    assert_eq!(pinned, vec![&standard]);

    // Single-cell perturbations of the standard table: dropping Δ(X), m(1,1)
    // or a c-free split term breaks d∘d = 0. Dropping the c·X⊗X term does
    // not (it is the c = 0 theory), nor does adding c·X to m(1,1); only the
    // three-state row and the unit axiom pin those.
    let perturb = |f: &dyn Fn(&mut Frobenius)| {
        let mut t = Frobenius::standard();
        f(&mut t);
        is_complex(&t)
    };
    assert!(!perturb(&|t| t.split[1].clear()));
    assert!(!perturb(&|t| t.split[0].retain(|x| *x != (One, X, 0))));
    assert!(!perturb(&|t| t.merge[0][0].clear()));
    assert!(perturb(&|t| t.merge[0][0].push((X, 1))));
    assert!(perturb(&|t| t.split[0].retain(|x| *x != (X, X, 1))));
}

proptest::proptest! {
    #![proptest_config(proptest::prelude::ProptestConfig::with_cases(48))]

    #[test]
    fn random_complexes_are_graded_complexes(seed in proptest::prelude::any::<u64>()) {
        let d = random_diagram(&mut ChaCha8Rng::seed_from_u64(seed), 5);
        let cx = build_complex(&d).unwrap();
        proptest::prop_assert!(cx.check_d_squared().is_ok());
        check_entries(&cx);
        let gens = graded_generators(&d, DEFAULT_CROSSING_BOUND).unwrap();
        proptest::prop_assert_eq!(gens.levels, cx.levels);
    }
}
