//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each,
//! and exits nonzero if any criterion fails. All thresholds are exact.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use hfold_core::constructions::{ap_witness, bh_witness, hk_witness};
use hfold_core::spectrum::VerdictStatus;
use hfold_core::sumset::{max_sumset_size, DenseSumset};
use hfold_core::verifier::{
    check_dichotomy, check_dilation_invariance, check_family_lower_bounds, check_nontrivial_monotonicity,
    check_order_axioms, check_reflection_invariance, check_translation_invariance, check_z2_gap_sampled, FamilyGrid,
};
use hfold_core::{compute_spectrum, enumerate_canonical, gap_check, hfold_sumset, FiniteSet, GroupElement};

type Verdict = Result<String, String>;

fn scalars(es: &[GroupElement]) -> Vec<i128> {
    es.iter().map(|e| e.as_scalar().unwrap()).collect()
}

fn within(limit: Duration, start: Instant) -> Result<Duration, String> {
    let took = start.elapsed();
    if took < limit {
        Ok(took)
    } else {
        Err(format!("took {took:?}, limit {limit:?}"))
    }
}

/// Criterion 1: no achieved size in [hk-h+2, hk-1] for (h,k) in {3,4,5}x{4,5}, M = 3k.
fn gap_interval() -> Verdict {
    let start = Instant::now();
    let mut scanned = 0;
    for h in 3..=5 {
        for k in 4..=5 {
            let report = compute_spectrum(h, k, 3 * k, 1).map_err(|e| e.to_string())?;
            let v = gap_check(&report);
            if v.status != VerdictStatus::Pass || !v.offending.is_empty() {
                return Err(format!("h={h} k={k}: {v:?}"));
            }
            if h == 3 && k == 4 && report.achieved.contains(&11) {
                return Err("11 achieved at h=3 k=4".into());
            }
            scanned += report.sets_scanned;
        }
    }
    let took = within(Duration::from_secs(60), start)?;
    Ok(format!("6 grids, {scanned} canonical sets, {took:.2?}"))
}

/// Criterion 2: progressions have |hA| = hk - h + 1.
fn minimum_endpoint() -> Verdict {
    let mut n = 0;
    for h in 2..=6 {
        for k in 2..=7 {
            for a in 1..=3 {
                let w = ap_witness(h, k, a).map_err(|e| e.to_string())?;
                let size = hfold_sumset(&w.set, h).map_err(|e| e.to_string())?.len();
                if size != h * k - h + 1 {
                    return Err(format!("h={h} k={k} a={a}: size {size}"));
                }
                n += 1;
            }
        }
    }
    Ok(format!("{n} witnesses"))
}

/// Criterion 3: |hA| = hk and hA = {ja : j in [0,hk] minus hk-1}.
fn hk_attainment() -> Verdict {
    let mut n = 0;
    for h in 2..=6 {
        for k in 3..=7 {
            for a in [1, 3] {
                let w = hk_witness(h, k, a).map_err(|e| e.to_string())?;
                let got = scalars(&hfold_sumset(&w.set, h).map_err(|e| e.to_string())?);
                let hk = (h * k) as i128;
                let want: Vec<i128> = (0..=hk).filter(|&j| j != hk - 1).map(|j| j * a).collect();
                if got.len() != h * k || got != want {
                    return Err(format!("h={h} k={k} a={a}: {got:?}"));
                }
                n += 1;
            }
        }
    }
    Ok(format!("{n} witnesses"))
}

/// Criterion 4: B_h witness size is C(h+k-1, h), cross-checked by composition oracle.
fn maximum_endpoint() -> Verdict {
    let mut n = 0;
    for h in 2..=4 {
        for k in 2..=6 {
            let w = bh_witness(h, k).map_err(|e| e.to_string())?;
            let engine = hfold_sumset(&w.set, h).map_err(|e| e.to_string())?;
            let oracle = common::composition_sumset(&w.set.to_ints().unwrap(), h);
            let binom = max_sumset_size(h, k).map_err(|e| e.to_string())?;
            let count = common::composition_count(h, k);
            if engine.len() as u128 != binom || oracle.len() as u128 != count || binom != count || scalars(&engine) != oracle {
                return Err(format!("h={h} k={k}: engine {} oracle {} C={binom}", engine.len(), oracle.len()));
            }
            n += 1;
        }
    }
    Ok(format!("{n} witnesses"))
}

/// Criterion 5: family witnesses have at least h - 1 nontrivial elements.
fn family_lower_bounds() -> Verdict {
    let outcome = check_family_lower_bounds(FamilyGrid { h_min: 2, h_max: 6, param_max: 12 });
    if outcome.passed() {
        Ok(format!("{} witnesses", outcome.cases))
    } else {
        Err(format!("{:?}", &outcome.failures[..outcome.failures.len().min(3)]))
    }
}

/// Criterion 6: minimum size only for progressions, size >= hk otherwise.
fn dichotomy() -> Verdict {
    let start = Instant::now();
    let mut cases = 0;
    for (h, k, m) in [(3, 4, 12), (4, 4, 10), (3, 5, 10)] {
        let outcome = check_dichotomy(h, k, m);
        if !outcome.passed() {
            return Err(format!("({h},{k},{m}): {:?}", outcome.failures));
        }
        cases += outcome.cases;
    }
    let took = within(Duration::from_secs(30), start)?;
    Ok(format!("{cases} canonical sets, {took:.2?}"))
}

/// Criterion 7: seeded property suites with zero failures.
fn property_suites() -> Verdict {
    let mut outcomes = vec![
        check_translation_invariance(1, 500),
        check_dilation_invariance(1, 500),
        check_reflection_invariance(1, 500),
        check_nontrivial_monotonicity(2, 300),
        check_order_axioms(4, 500),
    ];
    for h in 2..=5 {
        outcomes.push(check_z2_gap_sampled(3, 200, h, 4));
    }
    let failed: Vec<String> = outcomes.iter().filter(|o| !o.passed()).map(|o| o.to_string()).collect();
    if !failed.is_empty() {
        return Err(failed.join("; "));
    }
    let expected = [500, 500, 500, 300, 500, 200, 200, 200, 200];
    if outcomes.iter().map(|o| o.cases).ne(expected) {
        return Err("trial counts differ from the required grid".into());
    }
    let total: u64 = outcomes.iter().map(|o| o.cases).sum();
    Ok(format!("{} checks, {total} trials", outcomes.len()))
}

/// Criterion 8: engine equals the composition oracle on canonical sets
/// with k <= 5, M <= 12, h <= 5.
fn oracle_equivalence() -> Verdict {
    let mut dense = DenseSumset::new();
    let mut compared = 0;
    for k in 2..=5 {
        let mut sets = enumerate_canonical(k, 12).map_err(|e| e.to_string())?;
        while let Some(raw) = sets.next_raw() {
            let values: Vec<i128> = raw.iter().map(|&v| v as i128).collect();
            let set = FiniteSet::from_ints(&values).unwrap();
            for h in 1..=5 {
                let want = common::composition_sumset(&values, h);
                let got = scalars(&hfold_sumset(&set, h).map_err(|e| e.to_string())?);
                if got != want || dense.size(raw, h) != want.len() {
                    return Err(format!("mismatch at A={set} h={h}"));
                }
                compared += 1;
            }
        }
    }
    Ok(format!("{compared} (set, h) pairs, 0 mismatches"))
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Verdict);
    let criteria: [Criterion; 8] = [
        ("1 gap interval empty", gap_interval),
        ("2 minimum endpoint hk-h+1", minimum_endpoint),
        ("3 hk attainment", hk_attainment),
        ("4 maximum endpoint C(h+k-1,h)", maximum_endpoint),
        ("5 family lower bounds", family_lower_bounds),
        ("6 minimum-size dichotomy", dichotomy),
        ("7 property suites", property_suites),
        ("8 oracle equivalence", oracle_equivalence),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail}");
            }
        }
    }
    if failed == 0 {
        println!("acceptance: all 8 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}
