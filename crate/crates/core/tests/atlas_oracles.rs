//! Stratum counts against closed formulas and independent scans.

use std::collections::HashSet;

use sp4lab::atlas::{d_count_formula, enumerate_d, line_count_formula, Atlas};
use sp4lab::symplectic::{skew_form, Vector4};

fn brute_d(n: u32) -> usize {
    let mut seen = HashSet::new();
    for code in 0..n.pow(4) {
        let v = Vector4::decode(code, n);
        if v.is_primitive() {
            seen.insert(v.canonical_pm());
        }
    }
    seen.len()
}

#[test]
fn divisor_counts() {
    for n in 3..=12u32 {
        let d = enumerate_d(n).unwrap().len();
        assert_eq!(d as u64, d_count_formula(n), "n={n}");
        assert_eq!(d, brute_d(n), "n={n}");
    }
    assert_eq!(d_count_formula(3), 40);
    assert_eq!(d_count_formula(4), 120);
    assert_eq!(d_count_formula(5), 312);
}

#[test]
fn line_counts() {
    for n in [3u32, 4, 5, 6, 7] {
        let atlas = Atlas::new(n).unwrap();
        assert_eq!(atlas.lines().len() as u64, line_count_formula(n), "n={n}");
    }
    // independent scan at n = 3: orthogonal, non-proportional pairs of divisors
    let ds = enumerate_d(3).unwrap();
    let mut pairs = 0;
    for (i, a) in ds.iter().enumerate() {
        for b in &ds[i + 1..] {
            let (x, y) = (a.vector(), b.vector());
            if skew_form(&x, &y).unwrap().value() == 0 && x.scale(2) != y {
                pairs += 1;
            }
        }
    }
    assert_eq!(pairs, 240);
}

#[test]
fn incidences_are_consistent() {
    let atlas = Atlas::new(5).unwrap();
    let c = atlas.counts();
    assert_eq!(c.d, 312);
    // every line lies over a cusp whose plane contains both of its divisors
    for l in atlas.lines() {
        let (a, b) = l.divisors();
        let plane = l.cusp().plane();
        assert!(plane.contains(&a.vector()) && plane.contains(&b.vector()));
    }
    // each triple point's three lines are lines of the atlas
    let lines: HashSet<_> = atlas.lines().iter().copied().collect();
    for t in atlas.triples() {
        assert!(t.lines().iter().all(|l| lines.contains(l)));
    }
}
