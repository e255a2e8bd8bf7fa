use super::*;
use crate::complex::build_complex;
use crate::diagram::{fixture, fixture_names, Strand};

fn table(entries: &[((i32, i32), usize)]) -> HomologyTable {
    HomologyTable {
        groups: entries
            .iter()
            .map(|&(k, free)| (k, HomologyGroup { free, torsion: vec![] }))
            .collect(),
    }
}

fn hom(name: &str) -> HomologyTable {
    homology(&build_complex(&fixture(name).unwrap()).unwrap()).unwrap()
}

#[test]
fn unknot_and_unlink() {
    assert_eq!(hom("unknot"), table(&[((0, -1), 1), ((0, 1), 1)]));
    assert_eq!(hom("unknot_1"), table(&[((0, -1), 1), ((0, 1), 1)]));
    assert_eq!(hom("unlink_2"), table(&[((0, -2), 1), ((0, 0), 2), ((0, 2), 1)]));
    assert_eq!(hom("empty"), table(&[((0, 0), 1)]));
}

#[test]
fn trefoils_and_hopf_match_mod_two_khovanov() {
    // Rational/mod-2 Khovanov homology of the right trefoil and positive
    // Hopf link in the usual conventions; the c-deformation adds no torsion.
    let right = table(&[((0, 1), 1), ((0, 3), 1), ((2, 5), 1), ((2, 7), 1), ((3, 7), 1), ((3, 9), 1)]);
    assert_eq!(hom("trefoil_right"), right);
    let left = table(&[((0, -1), 1), ((0, -3), 1), ((-2, -5), 1), ((-2, -7), 1), ((-3, -7), 1), ((-3, -9), 1)]);
    assert_eq!(hom("trefoil_left"), left);
    assert_eq!(hom("hopf_positive"), table(&[((0, 0), 1), ((0, 2), 1), ((2, 4), 1), ((2, 6), 1)]));
}

#[test]
fn euler_of_small_diagrams() {
    let e = |n: &str| euler_characteristic(&build_complex(&fixture(n).unwrap()).unwrap());
    assert_eq!(e("unknot"), LaurentPoly::loop_value());
    assert_eq!(e("unlink_2"), LaurentPoly::loop_value().pow(2));
}

#[test]
fn bracket_values() {
    let unknot = fixture("unknot").unwrap();
    assert_eq!(kauffman_bracket(&unknot).unwrap(), LaurentPoly::one());
    let delta = LaurentPoly::from_terms([(2, -1), (-2, -1)]);
    assert_eq!(kauffman_bracket(&fixture("unlink_2").unwrap()).unwrap(), delta);
    // Positive Hopf link, four states by hand: σ = 2, 0, 0, -2 with 2, 1, 1,
    // 2 circles: A^2 δ + 2 + A^-2 δ = -A^4 - A^-4; normalized by (-A^3)^-2.
    let hopf = kauffman_bracket(&fixture("hopf_positive").unwrap()).unwrap();
    assert_eq!(hopf, LaurentPoly::from_terms([(-2, -1), (-10, -1)]));
    assert!(matches!(kauffman_bracket(&fixture("empty").unwrap()), Err(HomologyError::EmptyDiagram)));
}

#[test]
fn euler_matches_bracket_on_corpus() {
    for name in fixture_names() {
        let d = fixture(name).unwrap();
        let cx = build_complex(&d).unwrap();
        assert_eq!(euler_characteristic(&cx), bracket_oracle(&d).unwrap(), "{name}");
    }
}

#[test]
fn pivot_order_independence() {
    for name in fixture_names() {
        let cx = build_complex(&fixture(name).unwrap()).unwrap();
        assert_eq!(homology(&cx).unwrap(), homology(&cx.reversed()).unwrap(), "{name}");
    }
}

#[test]
fn invariant_factors_are_monomials() {
    for name in fixture_names() {
        let cx = build_complex(&fixture(name).unwrap()).unwrap();
        for d in cx.differentials.values() {
            for f in snf(d).factors {
                assert!(f.as_monomial().is_some(), "{name}: {f}");
            }
        }
    }
}

#[test]
fn r2_invariance_on_unlink() {
    let u = fixture("unlink_2").unwrap();
    let base = hom("unlink_2");
    for (a, b) in [(0, 2), (0, 3), (1, 2)] {
        let (d, _) = u.r2_up(a, b, None, Strand::A).unwrap();
        assert_eq!(homology(&build_complex(&d).unwrap()).unwrap(), base);
    }
}

#[test]
fn torsion_from_a_c_differential() {
    // Two generators at the same level distance with d = (c): Z₂[c]/(c).
    use crate::complex::{EnhancedState, Generator};
    use crate::matrix::PolyMatrix;
    let g = |j| Generator { state: EnhancedState::new(Marking(vec![]), vec![]), j };
    let cx = ChainComplex {
        levels: [(0, vec![g(2)]), (1, vec![g(0)])].into_iter().collect(),
        differentials: [(0, PolyMatrix::from_rows(vec![vec![Poly::c()]]))].into_iter().collect(),
    };
    let h = homology(&cx).unwrap();
    assert_eq!(h.free_rank((0, 2)), 0);
    assert_eq!(h.torsion((1, 0)), &[1]);
    let json = serde_json::to_string(&h).unwrap();
    assert_eq!(json, r#"{"(1,0)":{"free":0,"torsion":[1]}}"#);
}
