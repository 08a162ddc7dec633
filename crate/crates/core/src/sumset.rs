//! h-fold sumsets, the trivial chain, and the nontrivial residue.
//!
//! `hA` is computed by iterated Minkowski addition: `iA` is the sorted
//! merge of the translates `(i-1)A + a` for `a in A`. Each translate of a
//! sorted list is sorted, so every step is a sequence of linear merges.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{literal, Coord, FiniteSet, GroupElement};

/// Anything that can be added exactly and ordered.
pub trait Summand: Ord + Clone {
    fn try_add(&self, other: &Self) -> Result<Self>;
}

impl Summand for Coord {
    fn try_add(&self, other: &Self) -> Result<Self> {
        self.checked_add(*other).ok_or(Error::Overflow("sumset"))
    }
}

impl Summand for GroupElement {
    fn try_add(&self, other: &Self) -> Result<Self> {
        self.checked_add(other)
    }
}

fn merge_dedup<T: Ord + Clone>(left: &[T], right: &[T], out: &mut Vec<T>) {
    out.clear();
    out.reserve(left.len() + right.len());
    let (mut i, mut j) = (0, 0);
    while i < left.len() && j < right.len() {
        match left[i].cmp(&right[j]) {
            std::cmp::Ordering::Less => {
                out.push(left[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(right[j].clone());
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push(left[i].clone());
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&left[i..]);
    out.extend_from_slice(&right[j..]);
}

/// `hA` for a strictly increasing `base`, sorted and deduplicated.
pub fn iterated_sumset<T: Summand>(base: &[T], h: usize) -> Result<Vec<T>> {
    if h == 0 {
        return Err(Error::InvalidParameter("fold count h must be at least 1".into()));
    }
    if base.is_empty() {
        return Err(Error::TooFewElements { min: 1, got: 0 });
    }
    let mut current = base.to_vec();
    let mut shifted = Vec::new();
    let mut acc = Vec::new();
    let mut scratch = Vec::new();
    for _ in 1..h {
        acc.clear();
        for a in base {
            shifted.clear();
            for x in &current {
                shifted.push(x.try_add(a)?);
            }
            merge_dedup(&acc, &shifted, &mut scratch);
            std::mem::swap(&mut acc, &mut scratch);
        }
        std::mem::swap(&mut current, &mut acc);
    }
    Ok(current)
}

/// The h-fold sumset `hA` as a sorted list. `h = 1` returns `A`.
pub fn hfold_sumset(set: &FiniteSet, h: usize) -> Result<Vec<GroupElement>> {
    if set.dim() == 1 {
        // plain integers avoid per-element allocation checks
        let ints = iterated_sumset(&set.to_ints()?, h)?;
        return Ok(ints.into_iter().map(GroupElement::scalar).collect());
    }
    iterated_sumset(set.elements(), h)
}

/// `|hA|`.
pub fn sumset_size(set: &FiniteSet, h: usize) -> Result<usize> {
    if set.dim() == 1 {
        return Ok(iterated_sumset(&set.to_ints()?, h)?.len());
    }
    Ok(iterated_sumset(set.elements(), h)?.len())
}

/// The chain `h a_1 < (h-1)a_1 + a_2 < ... < h a_k` of `hk - h + 1` trivial
/// sums, in chain order. Fails if the chain is not strictly increasing.
pub fn trivial_chain(set: &FiniteSet, h: usize) -> Result<Vec<GroupElement>> {
    if h < 2 {
        return Err(Error::InvalidParameter("classification needs h >= 2".into()));
    }
    if set.len() < 2 {
        return Err(Error::TooFewElements { min: 2, got: set.len() });
    }
    let hc = h as Coord;
    let a = set.elements();
    let mut chain = Vec::with_capacity(h * a.len() - h + 1);
    for pair in a.windows(2) {
        for i in 0..hc {
            let lower = pair[0].checked_scalar_mul(hc - i)?;
            let upper = pair[1].checked_scalar_mul(i)?;
            chain.push(lower.checked_add(&upper)?);
        }
    }
    chain.push(a[a.len() - 1].checked_scalar_mul(hc)?);
    if let Some(position) = chain.windows(2).position(|w| w[0] >= w[1]) {
        return Err(Error::ChainNotIncreasing { position });
    }
    Ok(chain)
}

/// A computed sumset split into trivial and nontrivial elements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SumsetResult {
    h: usize,
    k: usize,
    base: FiniteSet,
    size: usize,
    #[serde(with = "literal")]
    elements: Vec<GroupElement>,
    #[serde(with = "literal")]
    trivial: Vec<GroupElement>,
    #[serde(with = "literal")]
    nontrivial: Vec<GroupElement>,
}

impl SumsetResult {
    pub fn h(&self) -> usize {
        self.h
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn base(&self) -> &FiniteSet {
        &self.base
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Sorted elements of `hA`.
    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    /// Trivial elements in chain order (which is also ascending).
    pub fn trivial(&self) -> &[GroupElement] {
        &self.trivial
    }

    pub fn nontrivial(&self) -> &[GroupElement] {
        &self.nontrivial
    }
}

/// Computes `hA` and splits it against the trivial chain. Requires `h >= 2`
/// and `k >= 2`.
pub fn classify(set: &FiniteSet, h: usize) -> Result<SumsetResult> {
    let trivial = trivial_chain(set, h)?;
    let elements = hfold_sumset(set, h)?;
    let mut nontrivial = Vec::with_capacity(elements.len().saturating_sub(trivial.len()));
    let mut t = trivial.iter().peekable();
    for x in &elements {
        while t.next_if(|y| *y < x).is_some() {}
        if t.next_if(|y| *y == x).is_none() {
            nontrivial.push(x.clone());
        }
    }
    if t.peek().is_some() || elements.len() != trivial.len() + nontrivial.len() {
        // a trivial sum missing from hA would mean the engine is wrong
        return Err(Error::Internal("trivial chain not contained in sumset".into()));
    }
    Ok(SumsetResult {
        h,
        k: set.len(),
        base: set.clone(),
        size: elements.len(),
        elements,
        trivial,
        nontrivial,
    })
}

/// `C(n, r)` in exact arithmetic.
pub fn binomial(n: u64, r: u64) -> Result<u128> {
    if r > n {
        return Ok(0);
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        // acc * (n - i) is divisible by (i + 1) at every step
        acc = acc
            .checked_mul((n - i) as u128)
            .ok_or(Error::Overflow("binomial"))?
            / (i as u128 + 1);
    }
    Ok(acc)
}

/// Smallest possible `|hA|` for `|A| = k`: `hk - h + 1`.
pub fn min_sumset_size(h: usize, k: usize) -> usize {
    h * k - h + 1
}

/// Largest possible `|hA|` for `|A| = k`: `C(h + k - 1, h)`.
pub fn max_sumset_size(h: usize, k: usize) -> Result<u128> {
    binomial((h + k - 1) as u64, h as u64)
}

/// Reusable bitset buffers for sizes of small nonnegative integer sets.
///
/// This is the same iterated addition as [`iterated_sumset`], with the
/// sorted merge replaced by OR-ing shifted bitsets; it is only valid for
/// elements in `0..=max` with `h * max` small enough to allocate.
#[derive(Debug, Default, Clone)]
pub struct DenseSumset {
    current: Vec<u64>,
    next: Vec<u64>,
}

impl DenseSumset {
    pub fn new() -> Self {
        Self::default()
    }

    /// `|hA|` for a strictly increasing, nonnegative `values`.
    pub fn size(&mut self, values: &[usize], h: usize) -> usize {
        assert!(h >= 1 && !values.is_empty());
        let max = values[values.len() - 1];
        let words = (h * max) / 64 + 1;
        self.current.clear();
        self.current.resize(words, 0);
        for &v in values {
            self.current[v / 64] |= 1 << (v % 64);
        }
        for step in 2..=h {
            // (step - 1)A lives in bits 0..=(step - 1) * max
            let live = ((step - 1) * max) / 64 + 1;
            self.next.clear();
            self.next.resize(words, 0);
            for &a in values {
                shift_or(&mut self.next, &self.current[..live], a);
            }
            std::mem::swap(&mut self.current, &mut self.next);
        }
        self.current.iter().map(|w| w.count_ones() as usize).sum()
    }
}

fn shift_or(dst: &mut [u64], src: &[u64], shift: usize) {
    let word_shift = shift / 64;
    let bit_shift = shift % 64;
    for (i, &w) in src.iter().enumerate() {
        if w == 0 {
            continue;
        }
        let at = i + word_shift;
        if at >= dst.len() {
            break;
        }
        dst[at] |= w << bit_shift;
        if bit_shift > 0 && at + 1 < dst.len() {
            dst[at + 1] |= w >> (64 - bit_shift);
        }
    }
}
