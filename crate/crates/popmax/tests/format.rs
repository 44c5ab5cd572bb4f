use popmax::format::{
    format_witness, parse_certificate, parse_dimacs, parse_instance, parse_matching,
    serialize_certificate, serialize_dimacs, serialize_instance, serialize_matching, FormatError,
};
use popmax::gen::{random_cnf, random_instance};
use popmax_core::{popular_max_matching, verify_popular_max, certify_popular_max};
use proptest::prelude::*;

#[test]
fn fixture_i1_has_three_edges() {
    let t = "side A a1 a2\nside B b1 b2\npref a1: b1\npref a2: b1 b2\npref b1: a2 a1\npref b2: a2\n";
    assert_eq!(parse_instance(t).unwrap().num_edges(), 3);
}

#[test]
fn comments_and_split_sides() {
    let t = "# header\nside A x#1 # trailing\nside A y\nside B z\npref x#1 : z\npref y:\npref z: x#1 #y\n";
    let inst = parse_instance(t).unwrap();
    assert_eq!(inst.names_a(), ["x#1", "y"]);
    assert_eq!(inst.num_edges(), 1);
    assert_eq!(parse_instance(&serialize_instance(&inst)).unwrap(), inst);
}

#[test]
fn instance_errors() {
    let err = |t: &str| parse_instance(t).unwrap_err();
    assert!(matches!(err("side A a\nside B b\npref a: b\npref b:\n"), FormatError::Instance(_)));
    assert!(matches!(err("side C a\n"), FormatError::Syntax { line: 1, col: 6, .. }));
    assert!(matches!(err("side A a\nside B b\npref a b\n"), FormatError::Syntax { line: 3, .. }));
    assert!(matches!(
        err("side A a\nside B b\npref a: b\npref b: a\ncost a b x\n"),
        FormatError::Syntax { line: 5, col: 10, .. }
    ));
    assert!(matches!(err("side A a a\n"), FormatError::Instance(_)));
}

#[test]
fn matching_and_certificate_files() {
    let inst = random_instance(4, 4, 1.0, 5, None);
    let m = popular_max_matching(&inst);
    let text = serialize_matching(&inst, &m);
    assert_eq!(parse_matching(&inst, &text).unwrap(), m);
    assert!(parse_matching(&inst, "a1 a2\n").is_err());
    assert!(parse_matching(&inst, "a1 b1\na1 b2\n").is_err());
    let c = certify_popular_max(&inst, &m).unwrap();
    let ct = serialize_certificate(&inst, &c);
    assert_eq!(parse_certificate(&inst, &ct).unwrap(), c);
    assert!(parse_certificate(&inst, "alpha a1 0\nalpha a1 0\n").is_err());
    assert!(parse_certificate(&inst, "alpha a1 zero\n").is_err());
}

#[test]
fn witness_text() {
    let t = "side A a1 a2 a3\nside B b1\npref a1: b1\npref a2: b1\npref a3: b1\npref b1: a1 a2 a3\n";
    let inst = parse_instance(t).unwrap();
    let m = parse_matching(&inst, "a3 b1\n").unwrap();
    let w = verify_popular_max(&inst, &m).unwrap().witness.unwrap();
    assert_eq!(format_witness(&inst, &w), "path: a1 (b1,a3) wt=2\na1 b1\na3 b1\n");
}

#[test]
fn dimacs() {
    let psi = parse_dimacs("c hi\np cnf 3 2\n1 -2\n 3 0 -1 0\n").unwrap();
    assert_eq!(psi.clauses(), [vec![1, -2, 3], vec![-1]]);
    assert_eq!(parse_dimacs(&serialize_dimacs(&psi)).unwrap(), psi);
    assert!(parse_dimacs("1 2 0\n").is_err());
    assert!(parse_dimacs("p cnf 2 2\n1 2 0\n").is_err());
    assert!(parse_dimacs("p cnf 2 1\n1 4 0\n").is_err());
}

proptest! {
    #[test]
    fn instance_round_trip(na in 0usize..7, nb in 0usize..7, d in 0.0f64..=1.0, seed: u64, cost in proptest::option::of(1i64..20)) {
        let inst = random_instance(na, nb, d, seed, cost);
        let text = serialize_instance(&inst);
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert_eq!(serialize_instance(&back), text);
    }

    #[test]
    fn dimacs_round_trip(nv in 1usize..6, nc in 0usize..8, seed: u64) {
        let psi = random_cnf(nv, nc, seed);
        prop_assert_eq!(parse_dimacs(&serialize_dimacs(&psi)).unwrap(), psi);
    }
}
