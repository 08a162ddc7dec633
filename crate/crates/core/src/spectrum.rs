//! Exhaustive scan of canonical integer k-sets with bounded maximum, and
//! the sumset-size spectrum they realize.
//!
//! A scan only ever lower-bounds the true spectrum: a size missing from a
//! report says nothing beyond the bound unless a theorem excludes it.
//!
//! The scan is split by the second element `a_2`. Each partition is owned
//! by one worker and produces a [`SpectrumAccumulator`]; accumulators merge
//! associatively and commutatively (smallest witness wins), so the report is
//! identical for any number of jobs.

use std::collections::BTreeMap;
use std::time::Instant;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Coord, FiniteSet};
use crate::sumset::{iterated_sumset, max_sumset_size, min_sumset_size, DenseSumset};

/// Largest `h * M` for which the bitset path is used.
const DENSE_LIMIT: usize = 1 << 26;

/// Counterexamples kept per report; the counts are always exact.
const MAX_RECORDED_VIOLATIONS: usize = 16;

/// Lexicographic stream of canonical sets `{0 = a_1 < a_2 < ... < a_k <= M}`
/// with `gcd = 1` that are lex-<= their reflection.
#[derive(Debug, Clone)]
pub struct CanonicalSets {
    k: usize,
    max: usize,
    second_hi: usize,
    current: Vec<usize>,
    started: bool,
    done: bool,
}

impl CanonicalSets {
    fn with_second_range(k: usize, max: usize, lo: usize, hi: usize) -> Self {
        let mut current = vec![0; k];
        let done = k < 2 || lo == 0 || lo > hi || max + 1 < k;
        if !done {
            for (i, v) in current.iter_mut().enumerate().skip(1) {
                *v = lo + i - 1;
            }
        }
        Self { k, max, second_hi: hi, current, started: false, done }
    }

    /// Only the sets whose second element equals `second`.
    pub fn with_second(k: usize, max: usize, second: usize) -> Self {
        Self::with_second_range(k, max, second, second)
    }

    /// Largest admissible second element.
    fn second_max(k: usize, max: usize) -> usize {
        (max + 2).saturating_sub(k)
    }

    // next strictly increasing tuple with a_1 = 0, in lex order
    fn advance(&mut self) -> bool {
        let (k, m) = (self.k, self.max);
        let v = &mut self.current;
        let mut i = k - 1;
        while i >= 2 {
            if v[i] < m - (k - 1 - i) {
                v[i] += 1;
                for j in i + 1..k {
                    v[j] = v[j - 1] + 1;
                }
                return true;
            }
            i -= 1;
        }
        if v[1] < self.second_hi.min(Self::second_max(k, m)) {
            v[1] += 1;
            for j in 2..k {
                v[j] = v[j - 1] + 1;
            }
            return true;
        }
        false
    }

    fn is_canonical(v: &[usize]) -> bool {
        if v[1..].iter().fold(0usize, |g, &x| g.gcd(&x)) != 1 {
            return false;
        }
        let top = v[v.len() - 1];
        for (x, &y) in v.iter().zip(v.iter().rev()) {
            let r = top - y;
            if *x != r {
                return *x < r;
            }
        }
        true
    }

    /// The next canonical set as raw values, without allocating.
    pub fn next_raw(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        loop {
            if self.started {
                if !self.advance() {
                    self.done = true;
                    return None;
                }
            } else {
                self.started = true;
                if self.current[self.k - 1] > self.max {
                    self.done = true;
                    return None;
                }
            }
            if Self::is_canonical(&self.current) {
                return Some(&self.current);
            }
        }
    }
}

impl Iterator for CanonicalSets {
    type Item = FiniteSet;

    fn next(&mut self) -> Option<FiniteSet> {
        self.next_raw().map(raw_to_set)
    }
}

fn raw_to_set(values: &[usize]) -> FiniteSet {
    let ints: Vec<Coord> = values.iter().map(|&v| v as Coord).collect();
    FiniteSet::from_sorted_ints_unchecked(&ints)
}

/// All canonical `k`-sets with maximum at most `max`, in lex order.
pub fn enumerate_canonical(k: usize, max: usize) -> Result<CanonicalSets> {
    if k < 2 {
        return Err(Error::TooFewElements { min: 2, got: k });
    }
    Ok(CanonicalSets::with_second_range(k, max, 1, CanonicalSets::second_max(k, max)))
}

fn is_progression(v: &[usize]) -> bool {
    v.len() <= 2 || v.windows(2).all(|w| w[1] - w[0] == v[1] - v[0])
}

/// Per-set observations that back the `|hA| = hk-h+1` or `|hA| >= hk` check.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DichotomyTally {
    /// Progressions scanned.
    pub progressions: u64,
    /// Sets of minimum size `hk - h + 1`.
    pub at_minimum: u64,
    /// Smallest size seen among non-progressions.
    pub smallest_non_progression: Option<usize>,
    /// Sets breaking the dichotomy (a progression off the minimum, or a
    /// non-progression below `hk`).
    pub violation_count: u64,
    /// The lexicographically smallest violations, at most 16.
    pub violations: Vec<FiniteSet>,
}

/// Partial scan state; see the module docs for the merge rule.
#[derive(Debug, Clone)]
pub struct SpectrumAccumulator {
    h: usize,
    k: usize,
    witnesses: BTreeMap<usize, Vec<usize>>,
    violations: Vec<Vec<usize>>,
    scanned: u64,
    tally: DichotomyTally,
}

impl SpectrumAccumulator {
    pub fn new(h: usize, k: usize) -> Self {
        Self {
            h,
            k,
            witnesses: BTreeMap::new(),
            violations: Vec::new(),
            scanned: 0,
            tally: DichotomyTally::default(),
        }
    }

    /// Records one canonical set with its sumset size.
    pub fn observe(&mut self, set: &[usize], size: usize) {
        self.scanned += 1;
        match self.witnesses.get_mut(&size) {
            Some(w) if set < w.as_slice() => *w = set.to_vec(),
            Some(_) => {}
            None => {
                self.witnesses.insert(size, set.to_vec());
            }
        }
        let minimum = min_sumset_size(self.h, self.k);
        let ap = is_progression(set);
        if size == minimum {
            self.tally.at_minimum += 1;
        }
        if ap {
            self.tally.progressions += 1;
        } else {
            let s = &mut self.tally.smallest_non_progression;
            *s = Some(s.map_or(size, |x| x.min(size)));
        }
        let broken = if ap { size != minimum } else { size < self.h * self.k };
        if broken {
            self.tally.violation_count += 1;
            self.push_violation(set.to_vec());
        }
    }

    fn push_violation(&mut self, set: Vec<usize>) {
        let at = self.violations.binary_search(&set).unwrap_or_else(|i| i);
        if at < MAX_RECORDED_VIOLATIONS {
            self.violations.insert(at, set);
            self.violations.truncate(MAX_RECORDED_VIOLATIONS);
        }
    }

    pub fn merge(mut self, other: Self) -> Self {
        assert_eq!((self.h, self.k), (other.h, other.k), "merging scans of different (h, k)");
        for (size, w) in other.witnesses {
            match self.witnesses.get_mut(&size) {
                Some(mine) if w < *mine => *mine = w,
                Some(_) => {}
                None => {
                    self.witnesses.insert(size, w);
                }
            }
        }
        for v in other.violations {
            self.push_violation(v);
        }
        self.scanned += other.scanned;
        let t = &mut self.tally;
        let o = other.tally;
        t.progressions += o.progressions;
        t.at_minimum += o.at_minimum;
        t.violation_count += o.violation_count;
        t.smallest_non_progression = match (t.smallest_non_progression, o.smallest_non_progression) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self
    }

    pub fn achieved(&self) -> Vec<usize> {
        self.witnesses.keys().copied().collect()
    }

    pub fn into_report(self, bound: usize, duration_secs: f64) -> SpectrumReport {
        let mut tally = self.tally;
        tally.violations = self.violations.iter().map(|v| raw_to_set(v)).collect();
        SpectrumReport {
            h: self.h,
            k: self.k,
            bound,
            achieved: self.witnesses.keys().copied().collect(),
            witnesses: self.witnesses.iter().map(|(&s, w)| (s, raw_to_set(w))).collect(),
            sets_scanned: self.scanned,
            duration_secs,
            dichotomy: tally,
            note: SCOPE_NOTE.to_string(),
        }
    }
}

const SCOPE_NOTE: &str = "achieved sizes are those of canonical sets with maximum <= bound; \
                          the scan lower-bounds R(h,k) and a missing size is not evidence of absence";

/// Sizes realized by canonical `k`-sets with maximum at most `bound`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub h: usize,
    pub k: usize,
    pub bound: usize,
    pub achieved: Vec<usize>,
    /// Lexicographically smallest canonical set per achieved size.
    pub witnesses: BTreeMap<usize, FiniteSet>,
    pub sets_scanned: u64,
    pub duration_secs: f64,
    pub dichotomy: DichotomyTally,
    pub note: String,
}

/// Sizes `|hA|` for raw sets; picks the bitset path when it fits.
struct SizeOracle {
    h: usize,
    dense: Option<DenseSumset>,
    coords: Vec<Coord>,
}

impl SizeOracle {
    fn new(h: usize, bound: usize) -> Self {
        let dense = h.checked_mul(bound).filter(|&n| n <= DENSE_LIMIT).map(|_| DenseSumset::new());
        Self { h, dense, coords: Vec::new() }
    }

    fn size(&mut self, set: &[usize]) -> Result<usize> {
        match &mut self.dense {
            Some(d) => Ok(d.size(set, self.h)),
            None => {
                self.coords.clear();
                self.coords.extend(set.iter().map(|&v| v as Coord));
                Ok(iterated_sumset(&self.coords, self.h)?.len())
            }
        }
    }
}

/// Scans the partition of canonical sets with second element `second`.
pub fn scan_partition(h: usize, k: usize, bound: usize, second: usize) -> Result<SpectrumAccumulator> {
    let mut acc = SpectrumAccumulator::new(h, k);
    let mut sizes = SizeOracle::new(h, bound);
    let mut sets = CanonicalSets::with_second(k, bound, second);
    while let Some(set) = sets.next_raw() {
        let size = sizes.size(set)?;
        acc.observe(set, size);
    }
    Ok(acc)
}

fn validate(h: usize, k: usize, bound: usize) -> Result<()> {
    if h < 2 {
        return Err(Error::InvalidParameter("spectrum needs h >= 2".into()));
    }
    if k < 2 {
        return Err(Error::InvalidParameter("spectrum needs k >= 2".into()));
    }
    if bound + 1 < k {
        return Err(Error::InvalidParameter(format!("bound {bound} too small for k = {k} (need >= k - 1)")));
    }
    Ok(())
}

/// Computes the spectrum using `jobs` worker threads (`jobs <= 1` scans on
/// the calling thread). The report does not depend on `jobs`.
pub fn compute_spectrum(h: usize, k: usize, bound: usize, jobs: usize) -> Result<SpectrumReport> {
    validate(h, k, bound)?;
    let start = Instant::now();
    let seconds: Vec<usize> = (1..=CanonicalSets::second_max(k, bound)).collect();
    let acc = if jobs <= 1 {
        seconds.iter().try_fold(SpectrumAccumulator::new(h, k), |acc, &s| {
            Ok::<_, Error>(acc.merge(scan_partition(h, k, bound, s)?))
        })?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
        pool.install(|| {
            seconds
                .par_iter()
                .map(|&s| scan_partition(h, k, bound, s))
                .try_reduce(|| SpectrumAccumulator::new(h, k), |a, b| Ok(a.merge(b)))
        })?
    };
    Ok(acc.into_report(bound, start.elapsed().as_secs_f64()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictStatus {
    Pass,
    /// Passed because there was nothing to check.
    Vacuous,
    Fail,
    /// Outside the range where the statement is a theorem (`k < 4`).
    NotApplicable,
}

impl VerdictStatus {
    /// Anything other than an outright failure.
    pub fn ok(self) -> bool {
        self != VerdictStatus::Fail
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapVerdict {
    pub status: VerdictStatus,
    /// Inclusive interval `[hk - h + 2, hk - 1]`; empty when `lo > hi`.
    pub lo: usize,
    pub hi: usize,
    /// Achieved sizes inside the interval.
    pub offending: Vec<usize>,
}

/// No achieved size may fall in `[hk - h + 2, hk - 1]` when `k >= 4`.
pub fn gap_check(report: &SpectrumReport) -> GapVerdict {
    let (h, k) = (report.h, report.k);
    let lo = h * k - h + 2;
    let hi = h * k - 1;
    let offending: Vec<usize> = report.achieved.iter().copied().filter(|s| (lo..=hi).contains(s)).collect();
    let status = if k < 4 {
        VerdictStatus::NotApplicable
    } else if !offending.is_empty() {
        VerdictStatus::Fail
    } else if lo > hi {
        VerdictStatus::Vacuous
    } else {
        VerdictStatus::Pass
    };
    GapVerdict { status, lo, hi, offending }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DichotomyVerdict {
    pub status: VerdictStatus,
    pub minimum: usize,
    pub progressions: u64,
    pub at_minimum: u64,
    pub smallest_non_progression: Option<usize>,
    pub violation_count: u64,
    pub violations: Vec<FiniteSet>,
}

/// Every scanned set of size `hk - h + 1` is a progression, and every
/// non-progression has size at least `hk`.
pub fn min_dichotomy_check(report: &SpectrumReport) -> DichotomyVerdict {
    let t = &report.dichotomy;
    let status = if report.k < 4 {
        VerdictStatus::NotApplicable
    } else if t.violation_count > 0 || t.at_minimum != t.progressions {
        VerdictStatus::Fail
    } else {
        VerdictStatus::Pass
    };
    DichotomyVerdict {
        status,
        minimum: min_sumset_size(report.h, report.k),
        progressions: t.progressions,
        at_minimum: t.at_minimum,
        smallest_non_progression: t.smallest_non_progression,
        violation_count: t.violation_count,
        violations: t.violations.clone(),
    }
}

/// Sizes outside `[hk - h + 1, C(h+k-1, h)]`, which no set can realize.
pub fn out_of_range_sizes(report: &SpectrumReport) -> Result<Vec<usize>> {
    let lo = min_sumset_size(report.h, report.k);
    let hi = max_sumset_size(report.h, report.k)?;
    Ok(report.achieved.iter().copied().filter(|&s| s < lo || s as u128 > hi).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lists(k: usize, m: usize) -> Vec<Vec<Coord>> {
        enumerate_canonical(k, m).unwrap().map(|s| s.to_ints().unwrap()).collect()
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(lists(3, 3), vec![vec![0, 1, 2], vec![0, 1, 3]]);
        assert_eq!(lists(2, 5), vec![vec![0, 1]]);
        assert_eq!(lists(4, 4), vec![vec![0, 1, 2, 3], vec![0, 1, 2, 4], vec![0, 1, 3, 4]]);
        assert!(enumerate_canonical(1, 4).is_err());
        assert_eq!(lists(4, 2), Vec::<Vec<Coord>>::new());
    }

    #[test]
    fn enumeration_counts() {
        // brute-force counts of canonical classes
        assert_eq!(enumerate_canonical(4, 12).unwrap().count(), 109);
        assert_eq!(enumerate_canonical(4, 10).unwrap().count(), 62);
        assert_eq!(enumerate_canonical(5, 15).unwrap().count(), 671);
    }

    #[test]
    fn spectrum_examples() {
        let r = compute_spectrum(3, 4, 12, 1).unwrap();
        assert_eq!(r.achieved, vec![10, 12, 13, 14, 15, 16, 17, 18, 19, 20]);
        assert_eq!(r.sets_scanned, 109);
        assert_eq!(r.witnesses[&10].to_string(), "0,1,2,3");
        assert_eq!(r.witnesses[&12].to_string(), "0,1,2,4");

        let r = compute_spectrum(2, 4, 27, 1).unwrap();
        assert_eq!(r.achieved, vec![7, 8, 9, 10]);

        let r = compute_spectrum(2, 2, 1, 1).unwrap();
        assert_eq!(r.achieved, vec![3]);
        assert_eq!(r.sets_scanned, 1);
    }

    #[test]
    fn spectrum_rejects_bad_parameters() {
        assert!(compute_spectrum(1, 4, 12, 1).is_err());
        assert!(compute_spectrum(3, 1, 12, 1).is_err());
        assert!(compute_spectrum(3, 5, 3, 1).is_err());
    }

    #[test]
    fn gap_verdicts() {
        let v = gap_check(&compute_spectrum(3, 4, 12, 1).unwrap());
        assert_eq!((v.status, v.lo, v.hi), (VerdictStatus::Pass, 11, 11));

        let v = gap_check(&compute_spectrum(2, 5, 15, 1).unwrap());
        assert_eq!((v.status, v.lo, v.hi), (VerdictStatus::Vacuous, 10, 9));

        let r = compute_spectrum(4, 4, 10, 1).unwrap();
        assert_eq!(
            r.achieved,
            vec![13, 16, 17, 19, 21, 23, 24, 25, 26, 27, 29, 30, 31]
        );
        let v = gap_check(&r);
        assert_eq!((v.status, v.lo, v.hi), (VerdictStatus::Pass, 14, 15));

        let v = gap_check(&compute_spectrum(3, 3, 6, 1).unwrap());
        assert_eq!(v.status, VerdictStatus::NotApplicable);
    }

    #[test]
    fn injected_gap_violation_fails() {
        let mut r = compute_spectrum(3, 4, 12, 1).unwrap();
        r.achieved.push(11);
        r.achieved.sort();
        let v = gap_check(&r);
        assert_eq!(v.status, VerdictStatus::Fail);
        assert_eq!(v.offending, vec![11]);
    }

    #[test]
    fn dichotomy_verdicts() {
        for (h, k, m) in [(3, 4, 12), (2, 4, 8), (5, 4, 6)] {
            let v = min_dichotomy_check(&compute_spectrum(h, k, m, 1).unwrap());
            assert_eq!(v.status, VerdictStatus::Pass, "({h},{k},{m})");
            assert_eq!((v.progressions, v.at_minimum), (1, 1));
            assert!(v.smallest_non_progression.unwrap() >= h * k);
        }
    }

    #[test]
    fn accumulator_records_violations() {
        let mut acc = SpectrumAccumulator::new(3, 4);
        acc.observe(&[0, 1, 2, 4], 11);
        acc.observe(&[0, 1, 2, 3], 10);
        let r = acc.into_report(4, 0.0);
        let v = min_dichotomy_check(&r);
        assert_eq!(v.status, VerdictStatus::Fail);
        assert_eq!(v.violations[0].to_string(), "0,1,2,4");
    }

    #[test]
    fn jobs_do_not_change_report() {
        let one = compute_spectrum(3, 5, 12, 1).unwrap();
        let four = compute_spectrum(3, 5, 12, 4).unwrap();
        assert_eq!(one.achieved, four.achieved);
        assert_eq!(one.witnesses, four.witnesses);
        assert_eq!(one.dichotomy, four.dichotomy);
        assert_eq!(one.sets_scanned, four.sets_scanned);
    }

    #[test]
    fn achieved_within_bounds() {
        let r = compute_spectrum(3, 5, 15, 1).unwrap();
        assert!(out_of_range_sizes(&r).unwrap().is_empty());
    }
}
