use num_rational::Rational64;
use zfrt_core::*;

fn rational() -> SMatrixFamily {
    SMatrixFamily::Rational { g: Rational64::from_integer(1) }
}

fn contact() -> ExprContext {
    let spec = CatalogSpec::new(
        2,
        MomentumGrid::ints(&[5, 9]),
        rational(),
        DefectFamily::ScalarContact { eta: Rational64::from_integer(12) },
    );
    ExprContext::new(spec).unwrap()
}

fn free() -> ExprContext {
    ExprContext::new(CatalogSpec::new(2, MomentumGrid::ints(&[1, 2]), rational(), DefectFamily::Free)).unwrap()
}

#[test]
fn lowest_bulk_order_is_the_number_operator() {
    let c = free();
    let h = hamiltonian(HamiltonianKind::Bulk, 0, &c).unwrap();
    let mut number = NCPoly::zero(2, 0);
    for &k in c.grid().points() {
        for i in 0..2u8 {
            number.add_entry(
                vec![Letter::new(LetterKind::Create, k), Letter::new(LetterKind::Annihilate, k)],
                Key::from_slice(&[i, i]),
                &Scalar::one(),
            );
        }
    }
    assert_eq!(h.body, Weighted::plain(number));
}

#[test]
fn free_defect_hamiltonian_doubles_the_bulk_one() {
    let c = free();
    for order in 0..3 {
        let rt = hamiltonian(HamiltonianKind::Defect, order, &c).unwrap().body;
        let zf = hamiltonian(HamiltonianKind::Bulk, order, &c).unwrap().body.scale(&Scalar::from_int(2));
        assert!(equal_weighted(&rt, &zf, &c).unwrap().equal);
    }
}

#[test]
fn bulk_hierarchy_holds() {
    for c in [free(), contact()] {
        let report = verify_zf_hierarchy(&c, &[0, 1, 2, 3]);
        assert!(report.pass, "{:?}", report.failures().next());
        assert_eq!(report.matching("dressed-even-order").count(), 2);
    }
}

#[test]
fn defect_hierarchy_holds_except_odd_decomposition() {
    let report = verify_rt_hierarchy(&contact(), &[0, 1, 2, 3]);
    let failing: Vec<&str> = report.failures().map(|c| c.id.as_str()).collect();
    assert_eq!(failing, ["bulk-decomposition/n=1", "bulk-decomposition/n=3"]);
    assert!(report.matching("defect-symmetry-opaque/").all(|c| c.passed()));
    assert!(report.matching("parity-commutator/m=0,n=2").all(|c| c.passed()));
}

#[test]
fn free_defect_hierarchy_collapses_to_bulk() {
    let report = verify_rt_hierarchy(&free(), &[0, 1, 2]);
    assert!(report.pass, "{:?}", report.failures().next());
}

#[test]
fn opaque_rules_reproduce_their_relations() {
    assert!(verify_opaque_relations(&contact()).pass);
}

#[test]
fn asymmetric_grid_breaks_even_order_identity() {
    let grid =
        MomentumGrid::waived(&[Rational64::from_integer(1), Rational64::from_integer(2), Rational64::from_integer(-1)])
            .unwrap();
    let c = ExprContext::waived(CatalogSpec::new(1, grid, rational(), DefectFamily::Free)).unwrap();
    let report = verify_zf_hierarchy(&c, &[0, 2]);
    let even: Vec<_> = report.matching("dressed-even-order").collect();
    assert_eq!(even.len(), 2);
    assert!(even.iter().all(|c| !c.passed()));
}
