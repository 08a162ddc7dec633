//! Engine output checked against brute-force oracles.

mod common;

use hfold_core::constructions::{ap_witness, bh_witness, hk_witness, WitnessKind};
use hfold_core::sumset::{classify, DenseSumset};
use hfold_core::verifier::{family_witnesses, FamilyGrid};
use hfold_core::{enumerate_canonical, hfold_sumset, FiniteSet};

fn ints(set: &FiniteSet) -> Vec<i128> {
    set.to_ints().unwrap()
}

#[test]
fn canonical_enumeration_matches_orbits() {
    for k in 2..=5 {
        for m in (k - 1)..=12 {
            let got: Vec<Vec<i128>> = enumerate_canonical(k, m).unwrap().map(|s| ints(&s)).collect();
            let want = common::canonical_by_orbits(k, m as i128);
            assert_eq!(got, want, "k={k} M={m}");
        }
    }
}

#[test]
fn canonical_sets_are_normalized() {
    for s in enumerate_canonical(5, 14).unwrap() {
        assert_eq!(s.canonicalize().unwrap(), s);
    }
}

#[test]
fn composition_count_matches_binomial_helper() {
    for h in 1..=8 {
        for k in 1..=8 {
            assert_eq!(
                common::composition_count(h, k),
                hfold_core::sumset::max_sumset_size(h, k).unwrap(),
                "h={h} k={k}"
            );
        }
    }
}

#[test]
fn witnesses_on_desk_grid_meet_predictions() {
    for h in 2..=6 {
        for k in 2..=7 {
            for a in 1..=20 {
                let w = ap_witness(h, k, a).unwrap();
                let c = w.check().unwrap();
                assert!(c.passed(), "{w:?}: {:?}", c.failures);
                assert_eq!(c.nontrivial, Some(0));
                if k >= 3 {
                    let w = hk_witness(h, k, a).unwrap();
                    let c = w.check().unwrap();
                    assert!(c.passed(), "{w:?}: {:?}", c.failures);
                    assert!(c.nontrivial.unwrap() > 0);
                }
            }
            let w = bh_witness(h, k).unwrap();
            let c = w.check().unwrap();
            assert!(c.passed(), "{w:?}: {:?}", c.failures);
            assert_eq!(c.size as u128, common::composition_count(h, k));
        }
    }
}

#[test]
fn only_progressions_have_no_nontrivial_elements() {
    for w in family_witnesses(FamilyGrid { h_min: 2, h_max: 6, param_max: 8 }).unwrap() {
        assert_ne!(w.spec.kind(), WitnessKind::Ap);
        assert!(!classify(&w.set, w.spec.h()).unwrap().nontrivial().is_empty(), "{w:?}");
    }
    for h in 2..=6 {
        for k in 3..=7 {
            let bh = bh_witness(h, k).unwrap();
            assert!(!classify(&bh.set, h).unwrap().nontrivial().is_empty());
        }
    }
}

#[test]
fn hk_sumset_skips_exactly_one_multiple() {
    let w = hk_witness(3, 4, 1).unwrap();
    let got: Vec<i128> = hfold_sumset(&w.set, 3).unwrap().iter().map(|e| e.as_scalar().unwrap()).collect();
    assert_eq!(got, common::composition_sumset(&[0, 1, 2, 4], 3));
    assert!(!got.contains(&11));
}

#[test]
fn both_engines_match_oracle_on_canonical_sets() {
    let mut dense = DenseSumset::new();
    for k in 2..=5 {
        let mut sets = enumerate_canonical(k, 12).unwrap();
        while let Some(raw) = sets.next_raw() {
            let values: Vec<i128> = raw.iter().map(|&v| v as i128).collect();
            let set = FiniteSet::from_ints(&values).unwrap();
            for h in 1..=5 {
                let want = common::composition_sumset(&values, h);
                let got: Vec<i128> = hfold_sumset(&set, h).unwrap().iter().map(|e| e.as_scalar().unwrap()).collect();
                assert_eq!(got, want, "A={set} h={h}");
                assert_eq!(dense.size(raw, h), want.len(), "A={set} h={h}");
            }
        }
    }
}
