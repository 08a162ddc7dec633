//! Falsifiable checks of the proved statements about h-fold sumsets, run
//! over deterministic grids and seeded random samples.
//!
//! Every statement checked here is a theorem, so a failure points at a bug
//! in this crate rather than at a mathematical counterexample. Each failure
//! records the exact input that produced it.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::constructions::{base_case_family, thm1_family, thm2_family, Witness};
use crate::error::{Error, Result};
use crate::group::{lex_compare, Coord, FiniteSet, GroupElement};
use crate::spectrum::{compute_spectrum, gap_check, min_dichotomy_check, VerdictStatus};
use crate::sumset::{classify, hfold_sumset, min_sumset_size, sumset_size};

/// One counterexample, with enough detail to replay it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub input: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub check: String,
    pub grid: String,
    pub seed: Option<u64>,
    pub cases: u64,
    pub failures: Vec<Failure>,
    pub elapsed_secs: f64,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "{verdict} {} [{}] cases={} failures={} ({:.3}s)",
            self.check,
            self.grid,
            self.cases,
            self.failures.len(),
            self.elapsed_secs
        )
    }
}

/// Collects cases and failures for one check.
struct Recorder {
    check: &'static str,
    grid: String,
    seed: Option<u64>,
    cases: u64,
    failures: Vec<Failure>,
    start: Instant,
}

impl Recorder {
    fn new(check: &'static str, grid: String, seed: Option<u64>) -> Self {
        Self { check, grid, seed, cases: 0, failures: Vec::new(), start: Instant::now() }
    }

    fn case(&mut self) {
        self.cases += 1;
    }

    fn fail(&mut self, input: impl Into<String>, detail: impl Into<String>) {
        self.failures.push(Failure { input: input.into(), detail: detail.into() });
    }

    /// Records an engine error as a failure of the current case.
    fn guard<T>(&mut self, input: &dyn Fn() -> String, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.fail(input(), format!("error: {e}"));
                None
            }
        }
    }

    fn finish(self) -> CheckOutcome {
        CheckOutcome {
            check: self.check.to_string(),
            grid: self.grid,
            seed: self.seed,
            cases: self.cases,
            failures: self.failures,
            elapsed_secs: self.start.elapsed().as_secs_f64(),
        }
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A uniformly random `k`-subset of the box `[lo, hi]^dim`.
pub fn random_set<R: Rng>(rng: &mut R, k: usize, dim: usize, lo: Coord, hi: Coord) -> Result<FiniteSet> {
    let side = usize::try_from(hi - lo + 1).map_err(|_| Error::InvalidParameter("empty box".into()))?;
    let cells = side
        .checked_pow(dim as u32)
        .ok_or(Error::InvalidParameter("box too large to sample".into()))?;
    if k > cells {
        return Err(Error::InvalidParameter(format!("cannot draw {k} distinct points from {cells}")));
    }
    let elements = index::sample(rng, cells, k)
        .into_iter()
        .map(|mut cell| {
            let mut coords = vec![0; dim];
            for c in coords.iter_mut().rev() {
                *c = lo + (cell % side) as Coord;
                cell /= side;
            }
            GroupElement::new(coords)
        })
        .collect::<Result<Vec<_>>>()?;
    FiniteSet::new(elements)
}

fn random_element<R: Rng>(rng: &mut R, dim: usize, bound: Coord) -> GroupElement {
    GroupElement::new((0..dim).map(|_| rng.gen_range(-bound..=bound))).expect("dim >= 1")
}

/// `|h(A + b)| = |hA|` on random sets in one and two dimensions.
pub fn check_translation_invariance(seed: u64, trials: u64) -> CheckOutcome {
    let mut rec = Recorder::new("translation", format!("k<=6, values<=50, d in {{1,2}}, h in [2,5], trials={trials}"), Some(seed));
    let mut rng = rng(seed);
    for _ in 0..trials {
        let dim = rng.gen_range(1..=2);
        let k = rng.gen_range(1..=6);
        let h = rng.gen_range(2..=5);
        let a = random_set(&mut rng, k, dim, 0, 50).expect("box holds 6 points");
        let b = random_element(&mut rng, dim, 100);
        rec.case();
        let input = || format!("A={a} b={b} h={h}");
        let Some(moved) = rec.guard(&input, a.translate(&b)) else { continue };
        let Some(lhs) = rec.guard(&input, sumset_size(&moved, h)) else { continue };
        let Some(rhs) = rec.guard(&input, sumset_size(&a, h)) else { continue };
        if lhs != rhs {
            rec.fail(input(), format!("|h(A+b)| = {lhs} but |hA| = {rhs}"));
        }
    }
    rec.finish()
}

/// `|h(sA)| = |hA|` for nonzero integer `s`.
pub fn check_dilation_invariance(seed: u64, trials: u64) -> CheckOutcome {
    let mut rec = Recorder::new("dilation", format!("k<=6, values<=50, d in {{1,2}}, s in [-7,7]\\{{0}}, h in [2,5], trials={trials}"), Some(seed));
    let mut rng = rng(seed);
    for _ in 0..trials {
        let dim = rng.gen_range(1..=2);
        let k = rng.gen_range(1..=6);
        let h = rng.gen_range(2..=5);
        let a = random_set(&mut rng, k, dim, 0, 50).expect("box holds 6 points");
        let mut s = rng.gen_range(-7..=6);
        if s >= 0 {
            s += 1;
        }
        rec.case();
        let input = || format!("A={a} s={s} h={h}");
        let Some(scaled) = rec.guard(&input, a.dilate(s)) else { continue };
        let Some(lhs) = rec.guard(&input, sumset_size(&scaled, h)) else { continue };
        let Some(rhs) = rec.guard(&input, sumset_size(&a, h)) else { continue };
        if lhs != rhs {
            rec.fail(input(), format!("|h(sA)| = {lhs} but |hA| = {rhs}"));
        }
    }
    rec.finish()
}

/// `|h{max - a}| = |hA|`.
pub fn check_reflection_invariance(seed: u64, trials: u64) -> CheckOutcome {
    let mut rec = Recorder::new("reflection", format!("k<=6, values<=50, d in {{1,2}}, h in [2,5], trials={trials}"), Some(seed));
    let mut rng = rng(seed);
    for _ in 0..trials {
        let dim = rng.gen_range(1..=2);
        let k = rng.gen_range(1..=6);
        let h = rng.gen_range(2..=5);
        let a = random_set(&mut rng, k, dim, 0, 50).expect("box holds 6 points");
        rec.case();
        let input = || format!("A={a} h={h}");
        let Some(mirror) = rec.guard(&input, a.reflect()) else { continue };
        let Some(lhs) = rec.guard(&input, sumset_size(&mirror, h)) else { continue };
        let Some(rhs) = rec.guard(&input, sumset_size(&a, h)) else { continue };
        if lhs != rhs {
            rec.fail(input(), format!("|h(max-A)| = {lhs} but |hA| = {rhs}"));
        }
    }
    rec.finish()
}

fn is_sorted_subset(small: &[GroupElement], big: &[GroupElement]) -> bool {
    small.iter().all(|x| big.binary_search(x).is_ok())
}

/// With `B = A` minus its largest element: `hB ⊆ hA`, and every nontrivial
/// element of `hB` is nontrivial in `hA`.
pub fn check_nontrivial_monotonicity(seed: u64, trials: u64) -> CheckOutcome {
    let mut rec = Recorder::new("nontrivial", format!("3<=k<=6, values<=50, d in {{1,2}}, h in [2,5], trials={trials}"), Some(seed));
    let mut rng = rng(seed);
    for _ in 0..trials {
        let dim = rng.gen_range(1..=2);
        let k = rng.gen_range(3..=6);
        let h = rng.gen_range(2..=5);
        let a = random_set(&mut rng, k, dim, 0, 50).expect("box holds 6 points");
        rec.case();
        let input = || format!("A={a} h={h}");
        let b = a.without_max().expect("k >= 3");
        let Some(big) = rec.guard(&input, classify(&a, h)) else { continue };
        let Some(small) = rec.guard(&input, classify(&b, h)) else { continue };
        if !is_sorted_subset(small.elements(), big.elements()) {
            rec.fail(input(), "hB is not contained in hA");
        }
        if !is_sorted_subset(small.nontrivial(), big.nontrivial()) {
            rec.fail(input(), "a nontrivial element of hB is trivial in hA");
        }
    }
    rec.finish()
}

/// Parameter grid for the family lower-bound check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyGrid {
    pub h_min: usize,
    pub h_max: usize,
    /// Upper bound on every family parameter (gaps, `b`, `c`, `d`, `e`).
    pub param_max: Coord,
}

impl Default for FamilyGrid {
    fn default() -> Self {
        Self { h_min: 2, h_max: 6, param_max: 12 }
    }
}

/// Every family witness over the grid: thm1 and thm2 for `k = 4` and
/// `k = 5`, base case for every `e`.
pub fn family_witnesses(grid: FamilyGrid) -> Result<Vec<Witness>> {
    let p = grid.param_max;
    let mut gap_lists: Vec<Vec<Coord>> = (1..=p).map(|a| vec![a]).collect();
    for a1 in 1..=p {
        for a2 in a1 + 1..=p {
            gap_lists.push(vec![a1, a2]);
        }
    }
    let mut out = Vec::new();
    for h in grid.h_min..=grid.h_max {
        for gaps in &gap_lists {
            for b in 1..=p {
                for c in 1..=p {
                    if c % b != 0 {
                        out.push(thm1_family(h, gaps, b, c)?);
                    }
                }
                for d in 2..=p {
                    out.push(thm2_family(h, gaps, b, d)?);
                }
            }
        }
        for e in 2..=p {
            out.push(base_case_family(h, e)?);
        }
    }
    Ok(out)
}

/// Each family witness has at least `h - 1` nontrivial elements (and, for
/// the two tail families, size at least `hk`).
pub fn check_family_lower_bounds(grid: FamilyGrid) -> CheckOutcome {
    let mut rec = Recorder::new(
        "families",
        format!("h in [{},{}], params <= {}, k in {{3,4,5}}", grid.h_min, grid.h_max, grid.param_max),
        None,
    );
    let witnesses = match family_witnesses(grid) {
        Ok(w) => w,
        Err(e) => {
            rec.fail(format!("{grid:?}"), format!("cannot build grid: {e}"));
            return rec.finish();
        }
    };
    for w in witnesses {
        rec.case();
        let input = || format!("{} A={} h={}", w.spec.kind(), w.set, w.spec.h());
        let Some(check) = rec.guard(&input, w.check()) else { continue };
        if !check.passed() {
            rec.fail(input(), check.failures.join("; "));
        }
    }
    rec.finish()
}

/// Full enumeration at `(h, k, M)`: the gap interval is empty of achieved
/// sizes and the minimum-size dichotomy holds.
pub fn check_dichotomy(h: usize, k: usize, max: usize) -> CheckOutcome {
    let mut rec = Recorder::new("gap", format!("h={h}, k={k}, M={max}, exhaustive"), None);
    let report = match compute_spectrum(h, k, max, 1) {
        Ok(r) => r,
        Err(e) => {
            rec.fail(format!("h={h} k={k} M={max}"), format!("error: {e}"));
            return rec.finish();
        }
    };
    rec.cases = report.sets_scanned;
    let gap = gap_check(&report);
    for s in &gap.offending {
        rec.fail(format!("A={} h={h}", report.witnesses[s]), format!("size {s} lies in [{}, {}]", gap.lo, gap.hi));
    }
    let dich = min_dichotomy_check(&report);
    for v in &dich.violations {
        rec.fail(format!("A={v} h={h}"), "breaks |hA| = hk-h+1 (progression) or |hA| >= hk");
    }
    if dich.status == VerdictStatus::Fail && dich.violations.is_empty() {
        rec.fail(
            format!("h={h} k={k} M={max}"),
            format!("{} sets at minimum but {} progressions", dich.at_minimum, dich.progressions),
        );
    }
    if gap.status == VerdictStatus::NotApplicable {
        rec.grid.push_str(" (k < 4: outside theorem scope, recorded only)");
    }
    rec.finish()
}

/// Random `k`-subsets of `[0, 20]^2`: either a progression with
/// `|hA| = hk - h + 1` or a non-progression with `|hA| >= hk`.
pub fn check_z2_gap_sampled(seed: u64, trials: u64, h: usize, k: usize) -> CheckOutcome {
    let mut rec = Recorder::new("z2", format!("random {k}-subsets of [0,20]^2, h={h}, trials={trials}"), Some(seed));
    let mut rng = rng(seed);
    if h < 2 || k < 4 {
        rec.fail(format!("h={h} k={k}"), "needs h >= 2 and k >= 4");
        return rec.finish();
    }
    let minimum = min_sumset_size(h, k);
    for _ in 0..trials {
        let a = match random_set(&mut rng, k, 2, 0, 20) {
            Ok(a) => a,
            Err(e) => {
                rec.fail(format!("k={k}"), format!("error: {e}"));
                break;
            }
        };
        rec.case();
        if let Err(detail) = dichotomy_holds(&a, h, minimum) {
            rec.fail(format!("A={a} h={h}"), detail);
        }
    }
    rec.finish()
}

/// Checks one set against the minimum-size dichotomy.
pub fn dichotomy_holds(a: &FiniteSet, h: usize, minimum: usize) -> std::result::Result<usize, String> {
    let size = sumset_size(a, h).map_err(|e| format!("error: {e}"))?;
    let hk = h * a.len();
    let ap = a.is_arithmetic_progression();
    if ap && size != minimum {
        return Err(format!("progression with size {size} != {minimum}"));
    }
    if !ap && size < hk {
        return Err(format!("non-progression with size {size} < hk = {hk}"));
    }
    Ok(size)
}

/// Randomized checks of the order lemmas on lexicographic `Z^d`.
pub fn check_order_axioms(seed: u64, trials: u64) -> CheckOutcome {
    let mut rec = Recorder::new("axioms", format!("d in [1,3], coords in [-1000,1000], trials={trials}"), Some(seed));
    let mut rng = rng(seed);
    for _ in 0..trials {
        let dim = rng.gen_range(1..=3);
        let draw = |rng: &mut ChaCha8Rng| random_element(rng, dim, 1000);
        let (x, y, z) = (draw(&mut rng), draw(&mut rng), draw(&mut rng));
        let mut abcd = [draw(&mut rng), draw(&mut rng), draw(&mut rng), draw(&mut rng)];
        let mut g = draw(&mut rng);
        if g.is_zero() {
            g = GroupElement::new(std::iter::once(1).chain(std::iter::repeat_n(0, dim - 1))).expect("dim >= 1");
        }
        let h = rng.gen_range(-50..=50);
        let i = rng.gen_range(-50..=50);
        rec.case();
        let input = format!("x={x} y={y} z={z} a,b,c,d={abcd:?} g={g} h={h} i={i}");
        if let Err(detail) = order_axioms_hold(&x, &y, &z, &mut abcd, &g, h, i) {
            rec.fail(input, detail);
        }
    }
    rec.finish()
}

fn cmp(x: &GroupElement, y: &GroupElement) -> std::result::Result<Ordering, String> {
    lex_compare(x, y).map_err(|e| e.to_string())
}

fn sum(x: &GroupElement, y: &GroupElement) -> std::result::Result<GroupElement, String> {
    x.checked_add(y).map_err(|e| e.to_string())
}

fn times(n: Coord, x: &GroupElement) -> std::result::Result<GroupElement, String> {
    x.checked_scalar_mul(n).map_err(|e| e.to_string())
}

/// The lemma statements on one random draw. `abcd` is reordered in place so
/// that `a <= b` and `c <= d`; `g` must be nonzero.
pub fn order_axioms_hold(
    x: &GroupElement,
    y: &GroupElement,
    z: &GroupElement,
    abcd: &mut [GroupElement; 4],
    g: &GroupElement,
    h: Coord,
    i: Coord,
) -> std::result::Result<(), String> {
    // total order
    if cmp(x, x)? != Ordering::Equal {
        return Err("not reflexive".into());
    }
    if cmp(x, y)? != cmp(y, x)?.reverse() {
        return Err("not antisymmetric".into());
    }
    let mut t = [x.clone(), y.clone(), z.clone()];
    t.sort();
    if cmp(&t[0], &t[1])? == Ordering::Greater || cmp(&t[1], &t[2])? == Ordering::Greater || cmp(&t[0], &t[2])? == Ordering::Greater {
        return Err("not transitive".into());
    }
    // translation compatibility
    if cmp(x, y)? == Ordering::Less && cmp(&sum(x, z)?, &sum(y, z)?)? != Ordering::Less {
        return Err("x < y but x + z >= y + z".into());
    }
    // a <= b and c < d imply a + c < b + d
    let [a, b, c, d] = abcd;
    if a > b {
        std::mem::swap(a, b);
    }
    if c > d {
        std::mem::swap(c, d);
    }
    if c != d && cmp(&sum(a, c)?, &sum(b, d)?)? != Ordering::Less {
        return Err("a <= b, c < d but a + c >= b + d".into());
    }
    // h <= i iff h*p <= i*p for positive p
    let p = if cmp(g, &GroupElement::zero(g.dim()))? == Ordering::Less { g.checked_neg().map_err(|e| e.to_string())? } else { g.clone() };
    let scaled_le = cmp(&times(h, &p)?, &times(i, &p)?)? != Ordering::Greater;
    if (h <= i) != scaled_le {
        return Err(format!("h <= i is {} but h*p <= i*p is {scaled_le}", h <= i));
    }
    // torsion-free: n*g != 0 for 1 <= n <= 64
    for n in 1..=64 {
        if times(n, g)?.is_zero() {
            return Err(format!("{n} * g = 0 for nonzero g"));
        }
    }
    Ok(())
}

/// Check groups runnable from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    All,
    Gap,
    Translation,
    Dilation,
    Reflection,
    Nontrivial,
    Families,
    Axioms,
    Z2,
}

impl Suite {
    pub const NAMES: [&'static str; 9] =
        ["all", "gap", "translation", "dilation", "reflection", "nontrivial", "families", "axioms", "z2"];
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => Suite::All,
            "gap" => Suite::Gap,
            "translation" => Suite::Translation,
            "dilation" => Suite::Dilation,
            "reflection" => Suite::Reflection,
            "nontrivial" => Suite::Nontrivial,
            "families" => Suite::Families,
            "axioms" => Suite::Axioms,
            "z2" => Suite::Z2,
            other => return Err(Error::InvalidParameter(format!("unknown suite {other:?}"))),
        })
    }
}

/// Overrides for [`run_suite`]; unset fields use the default grids.
#[derive(Debug, Clone, Default)]
pub struct SuiteParams {
    pub seed: u64,
    pub trials: Option<u64>,
    pub h: Option<usize>,
    pub k: Option<usize>,
    pub max: Option<usize>,
}

/// Default exhaustive grid for the gap and dichotomy check.
pub const DICHOTOMY_GRID: [(usize, usize, usize); 3] = [(3, 4, 12), (4, 4, 10), (3, 5, 10)];

pub fn run_suite(suite: Suite, params: &SuiteParams) -> Vec<CheckOutcome> {
    let seed = params.seed;
    let trials = |default: u64| params.trials.unwrap_or(default);
    let mut out = Vec::new();
    let want = |s: Suite| suite == Suite::All || suite == s;
    if want(Suite::Axioms) {
        out.push(check_order_axioms(seed, trials(500)));
    }
    if want(Suite::Translation) {
        out.push(check_translation_invariance(seed, trials(500)));
    }
    if want(Suite::Dilation) {
        out.push(check_dilation_invariance(seed, trials(500)));
    }
    if want(Suite::Reflection) {
        out.push(check_reflection_invariance(seed, trials(500)));
    }
    if want(Suite::Nontrivial) {
        out.push(check_nontrivial_monotonicity(seed, trials(300)));
    }
    if want(Suite::Families) {
        let mut grid = FamilyGrid::default();
        if let Some(h) = params.h {
            grid.h_min = h;
            grid.h_max = h;
        }
        out.push(check_family_lower_bounds(grid));
    }
    if want(Suite::Gap) {
        match (params.h, params.k, params.max) {
            (Some(h), Some(k), Some(m)) => out.push(check_dichotomy(h, k, m)),
            (Some(h), Some(k), None) => out.push(check_dichotomy(h, k, 3 * k)),
            _ => out.extend(DICHOTOMY_GRID.iter().map(|&(h, k, m)| check_dichotomy(h, k, m))),
        }
    }
    if want(Suite::Z2) {
        let k = params.k.unwrap_or(4);
        let hs: Vec<usize> = params.h.map_or_else(|| (2..=5).collect(), |h| vec![h]);
        for h in hs {
            out.push(check_z2_gap_sampled(seed, trials(200), h, k));
        }
    }
    out
}

/// `hB ⊆ hA` and the nontrivial containment for one explicit pair; used by
/// the examples in tests and the CLI.
pub fn nontrivial_containment(a: &FiniteSet, h: usize) -> Result<bool> {
    let b = a.without_max().ok_or(Error::TooFewElements { min: 2, got: a.len() })?;
    let big = classify(a, h)?;
    let small = classify(&b, h)?;
    Ok(is_sorted_subset(&hfold_sumset(&b, h)?, big.elements()) && is_sorted_subset(small.nontrivial(), big.nontrivial()))
}
