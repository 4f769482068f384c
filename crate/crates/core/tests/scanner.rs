mod common;

use std::collections::BTreeMap;

use gf2collatz::scanner::{self, PolyClass, ScanReport};
use gf2collatz::{collatz, Poly};

#[test]
fn histogram_matches_oracle_lengths() {
    let report = scanner::scan(1, 9, PolyClass::All, 4).unwrap();
    let mut hist = BTreeMap::new();
    for bits in 2u128..1 << 10 {
        *hist.entry(common::length(bits) as u64).or_insert(0u64) += 1;
    }
    assert_eq!(report.length_histogram, hist);
    assert!(report.is_clean());
}

#[test]
fn odd_class_histogram_matches_oracle() {
    let report = scanner::scan(2, 10, PolyClass::Odd, 2).unwrap();
    let mut hist = BTreeMap::new();
    for bits in (4u128..1 << 11).filter(|&b| common::is_odd(b)) {
        *hist.entry(common::length(bits) as u64).or_insert(0u64) += 1;
    }
    assert_eq!(report.length_histogram, hist);
    for row in &report.per_degree {
        assert_eq!(row.count, 1 << (row.degree - 2));
    }
}

#[test]
fn witnesses_retrace_to_reported_lengths() {
    let report = scanner::scan(3, 11, PolyClass::All, 4).unwrap();
    for row in &report.per_degree {
        let len = collatz::length(&row.max_witness).unwrap() as u64;
        assert_eq!(len, row.max_length);
        assert_eq!(row.max_witness.degree().unwrap() as u32, row.degree);
        // smallest witness: nothing below it in the same degree reaches the max
        let lo = 1u64 << row.degree;
        let w = row.max_witness.to_u64().unwrap();
        assert!(
            (lo..w).all(|b| (collatz::length(&Poly::from_u64(b)).unwrap() as u64) < row.max_length)
        );
    }
    for w in &report.max_length_witnesses {
        assert_eq!(collatz::length(w).unwrap() as u64, report.max_length);
    }
    let r = report.max_ratio;
    let w = &report.max_ratio_witness;
    let wl = collatz::length(w).unwrap() as u64;
    assert_eq!(wl * r.den, r.num * w.degree().unwrap() as u64);
}

#[test]
fn max_length_is_monotone_in_degree_here() {
    let report = scanner::scan(2, 12, PolyClass::All, 4).unwrap();
    let maxima: Vec<u64> = report.per_degree.iter().map(|r| r.max_length).collect();
    assert!(maxima.windows(2).all(|w| w[0] <= w[1]), "{maxima:?}");
}

#[test]
fn report_round_trips_through_json() {
    let report = scanner::scan(4, 8, PolyClass::Even, 2).unwrap();
    let json = serde_json::to_string(&report).unwrap();
    let back: ScanReport = serde_json::from_str(&json).unwrap();
    assert_eq!(back, report);
    assert!(!json.contains('.'), "no floats in the report");
}

#[test]
fn class_enumeration_matches_definition() {
    for d in 2..=10u32 {
        for (class, pred) in [
            (PolyClass::P00, (|b: u128| b & 1 == 0) as fn(u128) -> bool),
            (PolyClass::P01, |b| b & 1 == 1),
            (PolyClass::P10, |b| b.count_ones() % 2 == 0),
            (PolyClass::P11, |b| b.count_ones() % 2 == 1),
            (PolyClass::Odd, common::is_odd),
        ] {
            let got: Vec<u128> = scanner::enumerate(d, class)
                .unwrap()
                .map(|p| common::from_poly(&p))
                .collect();
            let want: Vec<u128> = ((1u128 << d)..(1 << (d + 1)))
                .filter(|&b| pred(b))
                .collect();
            assert_eq!(got, want, "d={d} {class}");
        }
    }
}

#[test]
fn bar_check_is_seeded() {
    let a = scanner::bar_sample_check(16, 50, 9, &[], 1).unwrap();
    let b = scanner::bar_sample_check(16, 50, 9, &[], 4).unwrap();
    assert_eq!(a, b);
    let c = scanner::bar_sample_check(16, 50, 10, &[], 1).unwrap();
    assert_ne!(a.samples, c.samples);
    assert_eq!(a.failed, 0);
}
