//! Extremal and family witness sets, each carrying the properties it is
//! known to satisfy so that the sumset engine can confirm them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{literal, Coord, FiniteSet, GroupElement};
use crate::sumset::{classify, hfold_sumset, max_sumset_size, min_sumset_size};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    /// Arithmetic progression, attains the minimum size.
    Ap,
    /// `{0, a, ..., (k-2)a, ka}`, size exactly `hk`.
    Hk,
    /// Geometric set whose h-fold sums are all distinct.
    BhMax,
    /// Tail `b, c` with `c` not a multiple of `b`.
    Thm1Family,
    /// Tail `b, d*b` with `d >= 2`.
    Thm2Family,
    /// Three-element set `{0, 1, e + 1}`.
    BaseCase,
}

impl WitnessKind {
    pub const ALL: [WitnessKind; 6] = [
        WitnessKind::Ap,
        WitnessKind::Hk,
        WitnessKind::BhMax,
        WitnessKind::Thm1Family,
        WitnessKind::Thm2Family,
        WitnessKind::BaseCase,
    ];

    /// Short name used on the command line.
    pub fn short_name(self) -> &'static str {
        match self {
            WitnessKind::Ap => "ap",
            WitnessKind::Hk => "hk",
            WitnessKind::BhMax => "max",
            WitnessKind::Thm1Family => "thm1",
            WitnessKind::Thm2Family => "thm2",
            WitnessKind::BaseCase => "base",
        }
    }
}

impl fmt::Display for WitnessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for WitnessKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        WitnessKind::ALL
            .into_iter()
            .find(|k| k.short_name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown witness kind {s:?}")))
    }
}

/// Recipe for one witness set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessSpec {
    Ap { h: usize, k: usize, a: Coord },
    Hk { h: usize, k: usize, a: Coord },
    BhMax { h: usize, k: usize },
    Thm1Family { h: usize, gaps: Vec<Coord>, b: Coord, c: Coord },
    Thm2Family { h: usize, gaps: Vec<Coord>, b: Coord, d: Coord },
    BaseCase { h: usize, e: Coord },
}

impl WitnessSpec {
    pub fn kind(&self) -> WitnessKind {
        match self {
            WitnessSpec::Ap { .. } => WitnessKind::Ap,
            WitnessSpec::Hk { .. } => WitnessKind::Hk,
            WitnessSpec::BhMax { .. } => WitnessKind::BhMax,
            WitnessSpec::Thm1Family { .. } => WitnessKind::Thm1Family,
            WitnessSpec::Thm2Family { .. } => WitnessKind::Thm2Family,
            WitnessSpec::BaseCase { .. } => WitnessKind::BaseCase,
        }
    }

    pub fn h(&self) -> usize {
        match *self {
            WitnessSpec::Ap { h, .. }
            | WitnessSpec::Hk { h, .. }
            | WitnessSpec::BhMax { h, .. }
            | WitnessSpec::Thm1Family { h, .. }
            | WitnessSpec::Thm2Family { h, .. }
            | WitnessSpec::BaseCase { h, .. } => h,
        }
    }

    /// Size of the generated set.
    pub fn k(&self) -> usize {
        match self {
            WitnessSpec::Ap { k, .. } | WitnessSpec::Hk { k, .. } | WitnessSpec::BhMax { k, .. } => *k,
            WitnessSpec::Thm1Family { gaps, .. } | WitnessSpec::Thm2Family { gaps, .. } => gaps.len() + 3,
            WitnessSpec::BaseCase { .. } => 3,
        }
    }

    pub fn build(&self) -> Result<Witness> {
        match self {
            WitnessSpec::Ap { h, k, a } => ap_witness(*h, *k, *a),
            WitnessSpec::Hk { h, k, a } => hk_witness(*h, *k, *a),
            WitnessSpec::BhMax { h, k } => bh_witness(*h, *k),
            WitnessSpec::Thm1Family { h, gaps, b, c } => thm1_family(*h, gaps, *b, *c),
            WitnessSpec::Thm2Family { h, gaps, b, d } => thm2_family(*h, gaps, *b, *d),
            WitnessSpec::BaseCase { h, e } => base_case_family(*h, *e),
        }
    }
}

/// Properties a witness is predicted to have. Unset fields make no claim.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prediction {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_nontrivial: Option<usize>,
    #[serde(
        skip_serializing_if = "Option::is_none",
        serialize_with = "serialize_opt_literal",
        deserialize_with = "deserialize_opt_literal",
        default
    )]
    pub exact_sumset: Option<Vec<GroupElement>>,
}

fn serialize_opt_literal<S: serde::Serializer>(
    v: &Option<Vec<GroupElement>>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(es) => literal::serialize(es, s),
        None => s.serialize_none(),
    }
}

fn deserialize_opt_literal<'de, D: serde::Deserializer<'de>>(
    d: D,
) -> std::result::Result<Option<Vec<GroupElement>>, D::Error> {
    literal::deserialize(d).map(Some)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub spec: WitnessSpec,
    pub set: FiniteSet,
    pub predicted: Prediction,
}

/// Outcome of running a witness through the sumset engine.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessCheck {
    pub size: usize,
    /// `None` when `h = 1` or `k = 1`, where the trivial chain is undefined.
    pub nontrivial: Option<usize>,
    pub failures: Vec<String>,
}

impl WitnessCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl Witness {
    pub fn check(&self) -> Result<WitnessCheck> {
        let h = self.spec.h();
        let (elements, nontrivial) = if h >= 2 && self.set.len() >= 2 {
            let r = classify(&self.set, h)?;
            let n = r.nontrivial().len();
            (r.elements().to_vec(), Some(n))
        } else {
            (hfold_sumset(&self.set, h)?, None)
        };
        let size = elements.len();
        let p = &self.predicted;
        let mut failures = Vec::new();
        if let Some(want) = p.exact_size {
            if size != want {
                failures.push(format!("size {size} != predicted {want}"));
            }
        }
        if let Some(want) = p.min_size {
            if size < want {
                failures.push(format!("size {size} < predicted minimum {want}"));
            }
        }
        if let Some(want) = p.min_nontrivial {
            match nontrivial {
                Some(n) if n >= want => {}
                Some(n) => failures.push(format!("{n} nontrivial < predicted minimum {want}")),
                None => failures.push("nontrivial count undefined for this h, k".into()),
            }
        }
        if let Some(want) = &p.exact_sumset {
            if &elements != want {
                failures.push("sumset differs from predicted element list".into());
            }
        }
        Ok(WitnessCheck { size, nontrivial, failures })
    }
}

fn require(cond: bool, msg: impl Into<String>) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter(msg.into()))
    }
}

fn mul(a: Coord, b: Coord) -> Result<Coord> {
    a.checked_mul(b).ok_or(Error::Overflow("witness"))
}

fn add(a: Coord, b: Coord) -> Result<Coord> {
    a.checked_add(b).ok_or(Error::Overflow("witness"))
}

fn ints_to_set(values: &[Coord]) -> Result<FiniteSet> {
    FiniteSet::from_ints(values)
}

/// `{0, a, 2a, ..., (k-1)a}`, with `|hA| = hk - h + 1`.
pub fn ap_witness(h: usize, k: usize, a: Coord) -> Result<Witness> {
    require(h >= 1, "ap witness needs h >= 1")?;
    require(k >= 2, "ap witness needs k >= 2")?;
    require(a >= 1, "common difference must be positive")?;
    let values = (0..k as Coord).map(|j| mul(j, a)).collect::<Result<Vec<_>>>()?;
    Ok(Witness {
        spec: WitnessSpec::Ap { h, k, a },
        set: ints_to_set(&values)?,
        predicted: Prediction { exact_size: Some(min_sumset_size(h, k)), ..Default::default() },
    })
}

/// `{0, a, ..., (k-2)a, ka}`, with `hA = {ja : 0 <= j <= hk, j != hk - 1}`.
pub fn hk_witness(h: usize, k: usize, a: Coord) -> Result<Witness> {
    require(h >= 1, "hk witness needs h >= 1")?;
    require(k >= 3, "hk witness needs k >= 3")?;
    require(a >= 1, "step must be positive")?;
    let mut values = (0..(k - 1) as Coord).map(|j| mul(j, a)).collect::<Result<Vec<_>>>()?;
    values.push(mul(k as Coord, a)?);
    let hk = (h * k) as Coord;
    let exact_sumset = (0..=hk)
        .filter(|&j| j != hk - 1)
        .map(|j| mul(j, a).map(GroupElement::scalar))
        .collect::<Result<Vec<_>>>()?;
    Ok(Witness {
        spec: WitnessSpec::Hk { h, k, a },
        set: ints_to_set(&values)?,
        predicted: Prediction {
            exact_size: Some(h * k),
            exact_sumset: Some(exact_sumset),
            ..Default::default()
        },
    })
}

/// `{1, (h+1), (h+1)^2, ..., (h+1)^(k-1)}`. Writing an h-fold sum in base
/// `h + 1` recovers the multiplicities, so all `C(h+k-1, h)` sums differ.
pub fn bh_witness(h: usize, k: usize) -> Result<Witness> {
    require(h >= 2, "B_h witness needs h >= 2")?;
    require(k >= 2, "B_h witness needs k >= 2")?;
    let base = (h + 1) as Coord;
    let values = (0..k as u32)
        .map(|j| base.checked_pow(j).ok_or(Error::Overflow("witness")))
        .collect::<Result<Vec<_>>>()?;
    let size = usize::try_from(max_sumset_size(h, k)?).map_err(|_| Error::Overflow("witness"))?;
    Ok(Witness {
        spec: WitnessSpec::BhMax { h, k },
        set: ints_to_set(&values)?,
        predicted: Prediction { exact_size: Some(size), ..Default::default() },
    })
}

fn check_gaps(gaps: &[Coord]) -> Result<()> {
    require(!gaps.is_empty(), "family needs at least one gap (k >= 4)")?;
    require(gaps[0] > 0, "gaps must be positive")?;
    require(gaps.windows(2).all(|w| w[0] < w[1]), "gaps must be strictly increasing")
}

fn family_set(gaps: &[Coord], b: Coord, c: Coord) -> Result<Vec<Coord>> {
    let last = gaps[gaps.len() - 1];
    let mut values = Vec::with_capacity(gaps.len() + 3);
    values.push(0);
    values.extend_from_slice(gaps);
    values.push(add(last, b)?);
    values.push(add(add(last, b)?, c)?);
    Ok(values)
}

fn family_prediction(h: usize, k: usize) -> Prediction {
    Prediction {
        min_nontrivial: Some(h - 1),
        min_size: Some(h * k),
        ..Default::default()
    }
}

/// `{0, a_1, ..., a_m, a_m + b, a_m + b + c}` where `c` is not a positive
/// multiple of `b`. `hA` has at least `h - 1` nontrivial elements.
pub fn thm1_family(h: usize, gaps: &[Coord], b: Coord, c: Coord) -> Result<Witness> {
    require(h >= 2, "family needs h >= 2")?;
    check_gaps(gaps)?;
    require(b >= 1 && c >= 1, "b and c must be positive")?;
    require(c % b != 0, format!("c = {c} is a multiple of b = {b}"))?;
    let values = family_set(gaps, b, c)?;
    let k = values.len();
    Ok(Witness {
        spec: WitnessSpec::Thm1Family { h, gaps: gaps.to_vec(), b, c },
        set: ints_to_set(&values)?,
        predicted: family_prediction(h, k),
    })
}

/// `{0, a_1, ..., a_m, a_m + b, a_m + b + d*b}` with `d >= 2`. `hA` has at
/// least `h - 1` nontrivial elements.
pub fn thm2_family(h: usize, gaps: &[Coord], b: Coord, d: Coord) -> Result<Witness> {
    require(h >= 2, "family needs h >= 2")?;
    check_gaps(gaps)?;
    require(b >= 1, "b must be positive")?;
    require(d >= 2, "d must be at least 2")?;
    let values = family_set(gaps, b, mul(d, b)?)?;
    let k = values.len();
    Ok(Witness {
        spec: WitnessSpec::Thm2Family { h, gaps: gaps.to_vec(), b, d },
        set: ints_to_set(&values)?,
        predicted: family_prediction(h, k),
    })
}

/// `{0, 1, e + 1}` for `e >= 2`; `hB` has at least `h - 1` nontrivial
/// elements. (`e = 1` is the progression `{0, 1, 2}`.)
pub fn base_case_family(h: usize, e: Coord) -> Result<Witness> {
    require(h >= 2, "base case needs h >= 2")?;
    require(e >= 2, "e must be at least 2")?;
    Ok(Witness {
        spec: WitnessSpec::BaseCase { h, e },
        set: ints_to_set(&[0, 1, add(e, 1)?])?,
        predicted: Prediction { min_nontrivial: Some(h - 1), ..Default::default() },
    })
}
