//! Exact arithmetic on points of `Z^d` under lexicographic order, finite
//! sets of such points, and the set-literal text format.
//!
//! Every torsion-free abelian group admits a translation-compatible total
//! order, and the toolkit works in the concrete instance `Z^d` ordered
//! lexicographically. Coordinates are `i128`; any result that leaves that
//! range is reported as [`Error::Overflow`] instead of wrapping.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Exact integer coordinate type.
pub type Coord = i128;

/// A point of `Z^d`.
///
/// The derived `Ord` is lexicographic on the coordinates, which is the group
/// order whenever both sides share a dimension. Use [`lex_compare`] when the
/// dimensions are not already known to agree.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    coords: SmallVec<[Coord; 2]>,
}

impl GroupElement {
    pub fn new(coords: impl IntoIterator<Item = Coord>) -> Result<Self> {
        let coords: SmallVec<[Coord; 2]> = coords.into_iter().collect();
        if coords.is_empty() {
            return Err(Error::InvalidParameter("element needs at least one coordinate".into()));
        }
        Ok(Self { coords })
    }

    /// One-dimensional element.
    pub fn scalar(value: Coord) -> Self {
        let mut coords = SmallVec::new();
        coords.push(value);
        Self { coords }
    }

    pub fn zero(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be positive");
        Self { coords: SmallVec::from_elem(0, dim) }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Coord] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// The single coordinate of a one-dimensional element.
    pub fn as_scalar(&self) -> Result<Coord> {
        match self.coords.as_slice() {
            [v] => Ok(*v),
            _ => Err(Error::NotOneDimensional(self.dim())),
        }
    }

    fn same_dim(&self, other: &Self) -> Result<()> {
        if self.dim() == other.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { left: self.dim(), right: other.dim() })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow("add")))
            .collect::<Result<_>>()?;
        Ok(Self { coords })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.checked_neg()?)
    }

    pub fn checked_neg(&self) -> Result<Self> {
        let coords = self
            .coords
            .iter()
            .map(|a| a.checked_neg().ok_or(Error::Overflow("neg")))
            .collect::<Result<_>>()?;
        Ok(Self { coords })
    }

    /// `n * self`, i.e. the sum of `n` copies of `self` (negated for `n < 0`).
    pub fn checked_scalar_mul(&self, n: Coord) -> Result<Self> {
        let coords = self
            .coords
            .iter()
            .map(|a| a.checked_mul(n).ok_or(Error::Overflow("scalar_mul")))
            .collect::<Result<_>>()?;
        Ok(Self { coords })
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self)
    }
}

/// Space separated coordinates, e.g. `3` or `1 2`.
impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for GroupElement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let coords = s
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(parse_coord)
            .collect::<Result<Vec<_>>>()?;
        GroupElement::new(coords).map_err(|_| Error::Parse(format!("empty element in {s:?}")))
    }
}

impl Serialize for GroupElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GroupElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn parse_coord(token: &str) -> Result<Coord> {
    token
        .trim()
        .parse::<Coord>()
        .map_err(|e| Error::Parse(format!("{token:?}: {e}")))
}

/// Compare two elements in the lexicographic group order.
pub fn lex_compare(x: &GroupElement, y: &GroupElement) -> Result<Ordering> {
    x.same_dim(y)?;
    Ok(x.coords.cmp(&y.coords))
}

/// A nonempty, strictly increasing set of elements sharing one dimension.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteSet {
    dim: usize,
    elements: Vec<GroupElement>,
}

impl FiniteSet {
    /// Builds a set from arbitrary-order elements. Duplicates are rejected,
    /// not merged.
    pub fn new(mut elements: Vec<GroupElement>) -> Result<Self> {
        let dim = match elements.first() {
            Some(e) => e.dim(),
            None => return Err(Error::TooFewElements { min: 1, got: 0 }),
        };
        if let Some(bad) = elements.iter().find(|e| e.dim() != dim) {
            return Err(Error::DimensionMismatch { left: dim, right: bad.dim() });
        }
        elements.sort_unstable();
        if let Some(w) = elements.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Duplicate(w[0].to_string()));
        }
        Ok(Self { dim, elements })
    }

    /// One-dimensional set from integers in any order.
    pub fn from_ints(values: &[Coord]) -> Result<Self> {
        Self::new(values.iter().copied().map(GroupElement::scalar).collect())
    }

    /// Caller guarantees: nonempty, one dimension, strictly increasing.
    pub(crate) fn from_sorted_unchecked(elements: Vec<GroupElement>) -> Self {
        debug_assert!(!elements.is_empty());
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        Self { dim: elements[0].dim(), elements }
    }

    pub(crate) fn from_sorted_ints_unchecked(values: &[Coord]) -> Self {
        Self::from_sorted_unchecked(values.iter().copied().map(GroupElement::scalar).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Cardinality `k`.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn smallest(&self) -> &GroupElement {
        &self.elements[0]
    }

    pub fn largest(&self) -> &GroupElement {
        &self.elements[self.elements.len() - 1]
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        self.elements.binary_search(x).is_ok()
    }

    /// The coordinates of a one-dimensional set, ascending.
    pub fn to_ints(&self) -> Result<Vec<Coord>> {
        if self.dim != 1 {
            return Err(Error::NotOneDimensional(self.dim));
        }
        Ok(self.elements.iter().map(|e| e.coords[0]).collect())
    }

    /// `{a + b : a in A}`.
    pub fn translate(&self, b: &GroupElement) -> Result<Self> {
        let elements = self
            .elements
            .iter()
            .map(|a| a.checked_add(b))
            .collect::<Result<Vec<_>>>()?;
        // translation preserves the order
        Ok(Self::from_sorted_unchecked(elements))
    }

    /// `{s * a : a in A}` for `s != 0`.
    pub fn dilate(&self, s: Coord) -> Result<Self> {
        if s == 0 {
            return Err(Error::InvalidParameter("dilation factor must be nonzero".into()));
        }
        let mut elements = self
            .elements
            .iter()
            .map(|a| a.checked_scalar_mul(s))
            .collect::<Result<Vec<_>>>()?;
        if s < 0 {
            elements.reverse();
        }
        Ok(Self::from_sorted_unchecked(elements))
    }

    /// `{max - a : a in A}`.
    pub fn reflect(&self) -> Result<Self> {
        let top = self.largest().clone();
        let elements = self
            .elements
            .iter()
            .rev()
            .map(|a| top.checked_sub(a))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_sorted_unchecked(elements))
    }

    /// The set with its largest element removed, or `None` for `k = 1`.
    pub fn without_max(&self) -> Option<Self> {
        (self.len() > 1).then(|| Self::from_sorted_unchecked(self.elements[..self.len() - 1].to_vec()))
    }

    /// True iff all consecutive differences agree. Sets with `k <= 2` count
    /// as progressions.
    pub fn is_arithmetic_progression(&self) -> bool {
        if self.len() <= 2 {
            return true;
        }
        let step = match self.elements[1].checked_sub(&self.elements[0]) {
            Ok(d) => d,
            Err(_) => return false,
        };
        self.elements
            .windows(2)
            .all(|w| w[1].checked_sub(&w[0]).is_ok_and(|d| d == step))
    }

    /// Canonical representative of the affine class of a one-dimensional set;
    /// see [`canonicalize_ints`].
    pub fn canonicalize(&self) -> Result<Self> {
        let ints = self.to_ints()?;
        Ok(Self::from_sorted_ints_unchecked(&canonicalize_ints(&ints)?))
    }
}

impl fmt::Debug for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self)
    }
}

/// Set literal: `0,1,2,4` in one dimension, `0 0;1 2;2 4` otherwise.
impl fmt::Display for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_literal(f, &self.elements)
    }
}

impl FromStr for FiniteSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FiniteSet::new(parse_literal(s)?)
    }
}

impl Serialize for FiniteSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FiniteSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Formats any element list in set-literal syntax. An empty list is the
/// empty string.
pub fn format_literal(elements: &[GroupElement]) -> String {
    struct Lit<'a>(&'a [GroupElement]);
    impl fmt::Display for Lit<'_> {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            write_literal(f, self.0)
        }
    }
    Lit(elements).to_string()
}

fn write_literal(f: &mut fmt::Formatter<'_>, elements: &[GroupElement]) -> fmt::Result {
    let sep = if elements.first().map_or(1, GroupElement::dim) == 1 { "," } else { ";" };
    for (i, e) in elements.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        write!(f, "{e}")?;
    }
    Ok(())
}

/// Parses a set literal into its elements, in the order written. The empty
/// string yields an empty list.
pub fn parse_literal(s: &str) -> Result<Vec<GroupElement>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    if s.contains(';') {
        let elements = s.split(';').map(str::parse).collect::<Result<Vec<GroupElement>>>()?;
        if let Some(bad) = elements.iter().find(|e| e.dim() != elements[0].dim()) {
            return Err(Error::DimensionMismatch { left: elements[0].dim(), right: bad.dim() });
        }
        Ok(elements)
    } else if s.contains(',') {
        s.split(',').map(|t| parse_coord(t).map(GroupElement::scalar)).collect()
    } else {
        // a single element, possibly multi-dimensional
        Ok(vec![s.parse()?])
    }
}

/// Serde helpers that write element lists as set-literal strings.
pub mod literal {
    use super::*;

    pub fn serialize<S: Serializer>(
        elements: &[GroupElement],
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&format_literal(elements))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Vec<GroupElement>, D::Error> {
        let s = String::deserialize(deserializer)?;
        parse_literal(&s).map_err(serde::de::Error::custom)
    }
}

/// Normalizes a strictly increasing integer set (`k >= 2`): shift the
/// minimum to 0, divide by the gcd, then keep whichever of the result and
/// its reflection `{max - a}` is lexicographically smaller.
///
/// The output has first element 0, gcd 1, and is lex-<= its reflection.
pub fn canonicalize_ints(values: &[Coord]) -> Result<Vec<Coord>> {
    if values.len() < 2 {
        return Err(Error::TooFewElements { min: 2, got: values.len() });
    }
    debug_assert!(values.windows(2).all(|w| w[0] < w[1]));
    let lo = values[0];
    let shifted = values
        .iter()
        .map(|&v| v.checked_sub(lo).ok_or(Error::Overflow("canonicalize")))
        .collect::<Result<Vec<_>>>()?;
    let g = shifted[1..].iter().fold(0, |g: Coord, &v| g.gcd(&v));
    let scaled: Vec<Coord> = shifted.iter().map(|&v| v / g).collect();
    let top = scaled[scaled.len() - 1];
    let reflected: Vec<Coord> = scaled.iter().rev().map(|&v| top - v).collect();
    Ok(if reflected < scaled { reflected } else { scaled })
}

/// Whether a strictly increasing integer set is its own canonical form.
pub fn is_canonical_ints(values: &[Coord]) -> bool {
    canonicalize_ints(values).is_ok_and(|c| c == values)
}
