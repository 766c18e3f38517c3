use rug::{Integer, Rational};
use singcert::numfield::{conjugate_ratio, pair_orbit, ratio_minpoly_numeric, ConjugateTriple};
use singcert::quadforms::{hilbert_class_poly, Discriminant};

fn triple(d: i64) -> ConjugateTriple {
    ConjugateTriple::new(&hilbert_class_poly(Discriminant::new(d).unwrap()).unwrap()).unwrap()
}

fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

#[test]
fn relator_for_92_and_23() {
    let p = pair_orbit(&triple(-92), &triple(-23)).unwrap();
    assert!(p.verify_exact());
    assert_eq!(p.relator.coeff(2), q("1/137949223063553"));
    assert_eq!(p.relator.coeff(1), q("-12207863342544/137949223063553"));
    assert_eq!(p.relator.coeff(0), q("-2217259040000/10287808417"));
    assert!(p.y_swapped);
}

#[test]
fn relator_for_124_and_31() {
    let p = pair_orbit(&triple(-124), &triple(-31)).unwrap();
    assert!(p.verify_exact());
    assert_eq!(p.relator.coeff(2), q("1/137949223063553"));
    assert_eq!(p.relator.coeff(1), q("-1559739539871184/137949223063553"));
    assert_eq!(p.relator.coeff(0), q("-341679101181696/140908297307"));
}

#[test]
fn conjugate_ratio_routes_agree() {
    for (d, lc) in [(-92i64, "477743554659559173623"), (-124, "523701886349518319220981841")] {
        let t = triple(d);
        let beta = conjugate_ratio(&t.members[2], &t.members[1]).unwrap();
        assert_eq!(beta.degree(), 6);
        assert_eq!(beta.minpoly().lead(), q(lc));
        let lead: Integer = lc.parse().unwrap();
        let numeric = ratio_minpoly_numeric(&t, &lead).unwrap();
        assert_eq!(&numeric, beta.minpoly());
        assert!(!beta.is_root_of_unity());
    }
}

#[test]
fn beta_heights() {
    for (d, h) in [(-92i64, 14.6375), (-124, 19.7717)] {
        let t = triple(d);
        let beta = conjugate_ratio(&t.members[2], &t.members[1]).unwrap();
        let hv = beta.height().unwrap();
        assert!((hv.to_f64() - h).abs() < 1e-3, "{d}: {}", hv.to_f64());
    }
}
