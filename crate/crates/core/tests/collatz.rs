mod common;

use gf2collatz::collatz::{self, length_bound, ViolationKind};
use gf2collatz::{check_trace, step, strip, trace, Poly, TraceRecord};

#[test]
fn odd_sequences_match_the_definition() {
    for bits in 1u128..1 << 11 {
        let t = trace(&common::to_poly(bits)).unwrap();
        let got: Vec<u128> = t.odd_terms.iter().map(common::from_poly).collect();
        assert_eq!(got, common::odd_sequence(bits), "input {bits:#x}");
        assert_eq!(t.length, got.len());
    }
}

#[test]
fn strip_matches_repeated_division() {
    for bits in 1u128..1 << 12 {
        let s = strip(&common::to_poly(bits)).unwrap();
        let (a, b, odd) = common::strip(bits);
        assert_eq!(
            (s.a as u32, s.b as u32, common::from_poly(&s.odd_part)),
            (a, b, odd)
        );
        assert!(common::is_odd(odd));
    }
}

#[test]
fn steps_keep_their_shape() {
    for bits in (1u128..1 << 12).filter(|&b| common::is_odd(b)) {
        let p = common::to_poly(bits);
        let s = step(&p).unwrap();
        assert_eq!(common::from_poly(&s.even), 1 ^ common::mul(common::M, bits));
        assert!(s.a >= 1 && s.b >= 1);
        assert_eq!(s.even.degree().unwrap(), p.degree().unwrap() + 2);
    }
}

#[test]
fn audit_is_clean_and_lengths_are_bounded() {
    for bits in 1u64..1 << 12 {
        let p = Poly::from_u64(bits);
        let t = trace(&p).unwrap();
        assert!(check_trace(&t).is_empty(), "input {bits:#x}");
        if let Some(bound) = length_bound(p.degree().unwrap()) {
            assert!(t.length as u64 <= bound);
        }
    }
}

#[test]
fn tampered_records_are_flagged() {
    let mut t = trace(&"x^8+x^3+1".parse().unwrap()).unwrap();
    t.odd_degrees[2] += 1;
    let kinds: Vec<ViolationKind> = check_trace(&t).into_iter().map(|v| v.kind).collect();
    assert!(
        kinds.contains(&ViolationKind::Shape) || kinds.contains(&ViolationKind::DegreeRelation)
    );

    let mut t = trace(&"x^8+x^3+1".parse().unwrap()).unwrap();
    t.length += 1;
    assert!(!check_trace(&t).is_empty());
}

#[test]
fn records_round_trip_through_json() {
    let t = trace(&"x^20+x^7+x+1".parse().unwrap()).unwrap();
    let json = serde_json::to_string(&t).unwrap();
    let back: TraceRecord = serde_json::from_str(&json).unwrap();
    assert_eq!(back, t);
}

#[test]
fn long_inputs_span_several_words() {
    let p = Poly::from_exponents([300, 129, 64, 1, 0]);
    let t = trace(&p).unwrap();
    assert!(check_trace(&t).is_empty());
    assert_eq!(collatz::length(&p).unwrap(), t.length);
    assert_eq!(collatz::length(&p.bar()).unwrap(), t.length);
}
