use tensor_ginv::rol::catalog::{run_case, CaseKind, CATALOG};
use tensor_ginv::rol::Tolerances;

#[test]
fn every_catalog_case_holds_on_fifty_instances() {
    for case in CATALOG {
        let s = run_case(case, 50, 2024, Tolerances::default()).unwrap();
        assert!(s.passed(), "{}: {s:?}", case.id);
        assert_eq!(s.instances, 50);
        if case.kind != CaseKind::Equivalence {
            assert!(s.max_residual <= 1e-8, "{}: {}", case.id, s.max_residual);
        }
    }
}
