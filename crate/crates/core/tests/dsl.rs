mod common;

use std::collections::BTreeMap;

use paracontact::catalog::{builtins, find_builtin, load_document, parse_document, print_document, CatalogError};
use paracontact::structure::{verify_structure, StructureError};

use common::*;

const HEADER: &str = "[name]\nt\n[dim]\n3\n";
const TAIL: &str = "[metric]\ng xi xi = 1\ng X Y = 1\n[phi]\nphi X = X\nphi Y = -Y\n[eta]\neta xi = 1\n";

fn doc(frame: &str) -> String {
    format!("{HEADER}[frame]\n{frame}{TAIL}")
}

#[test]
fn round_trip_over_parameter_ranges() {
    for entry in builtins() {
        let max_n = if entry.params.is_empty() { 0 } else { 4 };
        for n in 1..=max_n.max(1) {
            for m in 1..=n {
                let mut p = BTreeMap::new();
                for spec in &entry.params {
                    p.insert(spec.name.to_string(), if spec.name == "n" { n } else { m });
                }
                let Ok(s) = entry.instantiate(&p) else { continue };
                let back = load_document(&print_document(&s)).unwrap();
                assert_eq!(back, s, "{}", s.name());
                assert_eq!(print_document(&back), print_document(&s));
            }
        }
    }
}

#[test]
fn empty_frame_section_is_a_parse_error() {
    let e = load_document(&format!("{HEADER}[frame]\n{TAIL}")).unwrap_err();
    assert!(matches!(e, CatalogError::Parse { .. }), "{e}");
    assert!(!e.is_semantic());
}

#[test]
fn parse_errors_report_line_and_column() {
    let e = parse_document(&doc("labels xi X Y\nbracket X Y = 2*xi +\n")).unwrap_err();
    match e {
        CatalogError::Parse { line, column, .. } => {
            assert_eq!(line, 7);
            assert!(column > 1);
        }
        other => panic!("{other}"),
    }
    let e = parse_document(&doc("labels xi X Y\nbracket X W = xi\n")).unwrap_err();
    assert!(matches!(e, CatalogError::Parse { line: 7, .. }), "{e}");
    let e = parse_document(&doc("labels X xi Y\n")).unwrap_err();
    assert!(matches!(e, CatalogError::Parse { .. }), "{e}");
}

#[test]
fn jacobi_violation_is_rejected_with_triple() {
    // [X,Y] = X, [X,Z] = Y: the jacobiator of (X, Y, Z) is -Y
    let text = "[name]\nbad\n[dim]\n5\n[frame]\nlabels xi X Y Z W\nbracket X Y = X\nbracket X Z = Y\n\
                [metric]\ng xi xi = 1\ng X Y = 1\ng Z W = 1\n[phi]\nphi X = X\nphi Y = -Y\nphi Z = Z\nphi W = -W\n[eta]\neta xi = 1\n";
    let e = load_document(text).unwrap_err();
    match &e {
        CatalogError::Jacobi { triple, jacobiator } => {
            assert_eq!(triple, &("X".to_string(), "Y".to_string(), "Z".to_string()));
            assert_eq!(jacobiator, "-Y");
        }
        other => panic!("{other}"),
    }
    assert!(e.is_semantic());
}

#[test]
fn eta_must_match_metric() {
    let text = doc("labels xi X Y\nbracket X Y = 2*xi\n").replace("eta xi = 1", "eta xi = 1\neta X = 1");
    let e = load_document(&text).unwrap_err();
    assert!(matches!(e, CatalogError::Structure(StructureError::EtaMismatch { .. })), "{e}");
    assert!(e.is_semantic());
}

#[test]
fn almost_paracontact_gate() {
    let text = doc("labels xi X Y\nbracket X Y = 2*xi\n").replace("phi Y = -Y", "phi Y = Y");
    let e = load_document(&text).unwrap_err();
    assert!(matches!(e, CatalogError::NotAlmostParacontact { .. }), "{e}");
    assert!(e.is_semantic());
}

#[test]
fn heisenberg_document_loads() {
    let s = load_document(&doc("labels xi X Y\nbracket X Y = 2*xi\n")).unwrap();
    assert_eq!(s.dim(), 3);
    assert!(verify_structure(&s).passed());
    // the opposite sign is still a valid frame but d eta = Phi fails
    let flipped = load_document(&doc("labels xi X Y\nbracket X Y = -2*xi\n")).unwrap();
    assert!(!verify_structure(&flipped).passed());
}

#[test]
fn builtin_parameter_validation() {
    let entry = find_builtin("ex-mu2-hm-n").unwrap();
    let p: BTreeMap<String, i64> = [("n".to_string(), 2), ("m".to_string(), 3)].into();
    assert!(matches!(entry.instantiate(&p), Err(CatalogError::ParameterOutOfRange { .. })));
    let entry = find_builtin("ex-mu0-h2+").unwrap();
    let p: BTreeMap<String, i64> = [("n".to_string(), 3), ("m".to_string(), 1)].into();
    assert!(matches!(entry.instantiate(&p), Err(CatalogError::ParameterOutOfRange { .. })));
    let p: BTreeMap<String, i64> = [("k".to_string(), 1)].into();
    assert!(matches!(entry.instantiate(&p), Err(CatalogError::UnknownParameter { .. })));
    assert!(matches!(find_builtin("nope"), Err(CatalogError::UnknownBuiltin(_))));
}

#[test]
fn instance_names_are_stable() {
    assert_eq!(builtin("ex-mu2-hm-n", &[("n", 2), ("m", 1)]).name(), "ex-mu2-hm-n(m=1, n=2)");
    assert_eq!(builtin("ex-mu2-nonconstant", &[]).name(), "ex-mu2-nonconstant");
}
