//! Label vectors, partial vectors, assignments and prediction sets.
//!
//! Every vector over `m` labels is stored as a bitmask in which label `i`
//! (0-based) occupies bit `m − 1 − i`. The mask of a vector is therefore the
//! integer whose binary reading is the vector's text form (`"01"` is 1,
//! `"10"` is 2), and it doubles as the leaf index of the vector in an
//! [`ImpreciseBinaryTree`](crate::tree::ImpreciseBinaryTree).
//!
//! Text forms use one character per label, first label first: `0`/`1` for
//! decided labels and `*` for abstention.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest label count representable by the bitmask types.
pub const MAX_LABELS: usize = 24;

/// Largest label count for which explicit `2^m` sets are enumerated.
pub const MAX_ENUMERATION_LABELS: usize = 16;

#[inline]
pub(crate) fn label_bit(m: usize, i: usize) -> u32 {
    1 << (m - 1 - i)
}

#[inline]
pub(crate) fn full_mask(m: usize) -> u32 {
    if m == 32 {
        u32::MAX
    } else {
        (1u32 << m) - 1
    }
}

fn check_m(m: usize) -> Result<()> {
    if (1..=MAX_LABELS).contains(&m) {
        Ok(())
    } else {
        Err(Error::LabelCount(m, MAX_LABELS))
    }
}

pub(crate) fn check_enumerable(what: &'static str, m: usize, max: usize) -> Result<()> {
    if m > max {
        Err(Error::EnumerationTooLarge { what, m, max })
    } else {
        Ok(())
    }
}

/// A complete label vector in `{0,1}^m`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryVector {
    m: u8,
    bits: u32,
}

impl BinaryVector {
    pub fn new(m: usize, bits: u32) -> Result<Self> {
        check_m(m)?;
        if bits & !full_mask(m) != 0 {
            return Err(Error::Parse { what: "binary vector mask", input: format!("{bits:#b} for m = {m}") });
        }
        Ok(Self { m: m as u8, bits })
    }

    pub(crate) fn from_raw(m: usize, bits: u32) -> Self {
        debug_assert!(bits & !full_mask(m) == 0);
        Self { m: m as u8, bits }
    }

    pub fn zeros(m: usize) -> Result<Self> {
        Self::new(m, 0)
    }

    pub fn from_labels(labels: &[bool]) -> Result<Self> {
        check_m(labels.len())?;
        let m = labels.len();
        let bits = labels
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .fold(0, |acc, (i, _)| acc | label_bit(m, i));
        Ok(Self::from_raw(m, bits))
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m as usize
    }

    /// Bitmask (and leaf index) of the vector.
    #[inline]
    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Value of label `i` (0-based).
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.m(), "label index {i} out of range for m = {}", self.m);
        self.bits & label_bit(self.m(), i) != 0
    }

    pub fn labels(&self) -> Vec<bool> {
        (0..self.m()).map(|i| self.get(i)).collect()
    }

    pub fn complement(&self) -> Self {
        Self::from_raw(self.m(), !self.bits & full_mask(self.m()))
    }

    /// Every vector of `{0,1}^m`, in mask order.
    pub fn all(m: usize) -> Result<impl Iterator<Item = BinaryVector>> {
        check_m(m)?;
        check_enumerable("vector enumeration", m, MAX_ENUMERATION_LABELS)?;
        Ok((0..1u32 << m).map(move |bits| Self::from_raw(m, bits)))
    }
}

impl fmt::Display for BinaryVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.m() {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BinaryVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryVector({self})")
    }
}

impl FromStr for BinaryVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let labels = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Parse { what: "binary vector", input: s.to_string() }),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_labels(&labels)
    }
}

impl Serialize for BinaryVector {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BinaryVector {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Number of labels on which `y1` and `y2` differ.
///
/// Panics when the vectors have different lengths.
pub fn hamming_loss(y1: &BinaryVector, y2: &BinaryVector) -> u32 {
    assert_eq!(y1.m, y2.m, "hamming_loss on vectors of different length");
    (y1.bits ^ y2.bits).count_ones()
}

/// A value assignment `a_I` over an index subset `I`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Assignment {
    m: u8,
    indices: u32,
    values: u32,
}

impl Assignment {
    /// Assignment of `values[k]` to label `indices[k]` (0-based).
    pub fn new(m: usize, indices: &[usize], values: &[bool]) -> Result<Self> {
        check_m(m)?;
        if indices.len() != values.len() {
            return Err(Error::DimensionMismatch { expected: indices.len(), found: values.len() });
        }
        let mut idx = 0;
        let mut val = 0;
        for (&i, &v) in indices.iter().zip(values) {
            if i >= m {
                return Err(Error::IndexOutOfRange { index: i, m });
            }
            idx |= label_bit(m, i);
            if v {
                val |= label_bit(m, i);
            }
        }
        Ok(Self { m: m as u8, indices: idx, values: val })
    }

    /// Builds from masks; bits of `values` outside `indices` are dropped.
    pub fn from_masks(m: usize, indices: u32, values: u32) -> Result<Self> {
        check_m(m)?;
        if indices & !full_mask(m) != 0 {
            return Err(Error::IndexOutOfRange { index: (32 - indices.leading_zeros()) as usize, m });
        }
        Ok(Self { m: m as u8, indices, values: values & indices })
    }

    pub(crate) fn from_raw(m: usize, indices: u32, values: u32) -> Self {
        Self { m: m as u8, indices, values: values & indices }
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m as usize
    }

    pub fn index_mask(&self) -> u32 {
        self.indices
    }

    pub fn value_mask(&self) -> u32 {
        self.values
    }

    /// Assigned label indices (0-based), ascending.
    pub fn indices(&self) -> Vec<usize> {
        (0..self.m()).filter(|&i| self.indices & label_bit(self.m(), i) != 0).collect()
    }

    pub fn len(&self) -> usize {
        self.indices.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.indices == 0
    }

    /// Flips every assigned value, keeping the index set.
    pub fn complement(&self) -> Self {
        Self::from_raw(self.m(), self.indices, !self.values)
    }

    /// True when `y` agrees with the assignment on every assigned index.
    pub fn matches(&self, y: &BinaryVector) -> bool {
        (y.bits ^ self.values) & self.indices == 0
    }

    pub fn to_partial(&self) -> PartialVector {
        PartialVector { m: self.m, known: self.indices, values: self.values }
    }
}

/// Partial Hamming loss `Σ_{i∈I} 1[b_i ≠ y_i]`.
///
/// Panics when the assignment and the vector have different label counts.
pub fn partial_hamming_loss(b: &Assignment, y: &BinaryVector) -> u32 {
    assert_eq!(b.m, y.m, "partial_hamming_loss on vectors of different length");
    ((b.values ^ y.bits) & b.indices).count_ones()
}

/// An element of `{0,1,*}^m`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PartialVector {
    m: u8,
    known: u32,
    values: u32,
}

impl PartialVector {
    /// Builds from per-label entries, `None` meaning abstention.
    pub fn from_entries(entries: &[Option<bool>]) -> Result<Self> {
        check_m(entries.len())?;
        let m = entries.len();
        let mut known = 0;
        let mut values = 0;
        for (i, e) in entries.iter().enumerate() {
            if let Some(v) = e {
                known |= label_bit(m, i);
                if *v {
                    values |= label_bit(m, i);
                }
            }
        }
        Ok(Self { m: m as u8, known, values })
    }

    pub(crate) fn from_raw(m: usize, known: u32, values: u32) -> Self {
        Self { m: m as u8, known, values: values & known }
    }

    /// The fully abstaining vector `(*, ..., *)`.
    pub fn all_star(m: usize) -> Result<Self> {
        check_m(m)?;
        Ok(Self::from_raw(m, 0, 0))
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m as usize
    }

    pub fn known_mask(&self) -> u32 {
        self.known
    }

    pub fn value_mask(&self) -> u32 {
        self.values
    }

    /// Entry of label `i` (0-based): `None` for `*`.
    pub fn get(&self, i: usize) -> Option<bool> {
        assert!(i < self.m(), "label index {i} out of range for m = {}", self.m);
        let bit = label_bit(self.m(), i);
        (self.known & bit != 0).then_some(self.values & bit != 0)
    }

    pub fn entries(&self) -> Vec<Option<bool>> {
        (0..self.m()).map(|i| self.get(i)).collect()
    }

    pub fn star_count(&self) -> usize {
        self.m() - self.known.count_ones() as usize
    }

    pub fn decided_count(&self) -> usize {
        self.known.count_ones() as usize
    }

    pub fn is_complete(&self) -> bool {
        self.star_count() == 0
    }

    pub fn to_binary(&self) -> Option<BinaryVector> {
        self.is_complete().then(|| BinaryVector::from_raw(self.m(), self.values))
    }

    /// Number of completions, `2^(#stars)`.
    pub fn cardinality(&self) -> u64 {
        1u64 << self.star_count()
    }

    pub fn contains(&self, y: &BinaryVector) -> bool {
        y.m == self.m && (y.bits ^ self.values) & self.known == 0
    }

    /// The set of completions of this partial vector.
    pub fn expand(&self) -> Result<PredictionSet> {
        check_enumerable("partial vector expansion", self.m(), MAX_ENUMERATION_LABELS)?;
        let free = !self.known & full_mask(self.m());
        // enumerate submasks of `free` in increasing order
        let mut members = Vec::with_capacity(self.cardinality() as usize);
        let mut sub = 0u32;
        loop {
            members.push(self.values | sub);
            if sub == free {
                break;
            }
            sub = (sub.wrapping_sub(free)) & free;
        }
        members.sort_unstable();
        Ok(PredictionSet { m: self.m, members })
    }
}

impl From<BinaryVector> for PartialVector {
    fn from(y: BinaryVector) -> Self {
        Self { m: y.m, known: full_mask(y.m()), values: y.bits }
    }
}

impl fmt::Display for PartialVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.m() {
            f.write_str(match self.get(i) {
                Some(true) => "1",
                Some(false) => "0",
                None => "*",
            })?;
        }
        Ok(())
    }
}

impl fmt::Debug for PartialVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PartialVector({self})")
    }
}

impl FromStr for PartialVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let entries = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(Some(false)),
                '1' => Ok(Some(true)),
                '*' => Ok(None),
                _ => Err(Error::Parse { what: "partial vector", input: s.to_string() }),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_entries(&entries)
    }
}

impl Serialize for PartialVector {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PartialVector {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Completions of `v`. Fails when `v.m()` exceeds the enumeration guard.
pub fn expand_partial(v: &PartialVector) -> Result<PredictionSet> {
    v.expand()
}

/// The partial vector whose expansion is exactly `s`, if there is one.
pub fn is_partial_vector(s: &PredictionSet) -> Option<PartialVector> {
    s.to_partial_vector()
}

/// A deduplicated set of complete vectors, kept sorted by mask.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PredictionSet {
    m: u8,
    members: Vec<u32>,
}

impl PredictionSet {
    pub fn empty(m: usize) -> Result<Self> {
        check_m(m)?;
        Ok(Self { m: m as u8, members: Vec::new() })
    }

    pub fn from_vectors<I: IntoIterator<Item = BinaryVector>>(m: usize, vectors: I) -> Result<Self> {
        check_m(m)?;
        let mut members = Vec::new();
        for y in vectors {
            if y.m() != m {
                return Err(Error::DimensionMismatch { expected: m, found: y.m() });
            }
            members.push(y.bits);
        }
        members.sort_unstable();
        members.dedup();
        Ok(Self { m: m as u8, members })
    }

    /// Parses each string as a [`BinaryVector`].
    pub fn parse<S: AsRef<str>>(m: usize, items: &[S]) -> Result<Self> {
        let vectors = items.iter().map(|s| s.as_ref().parse()).collect::<Result<Vec<BinaryVector>>>()?;
        Self::from_vectors(m, vectors)
    }

    pub(crate) fn from_sorted_masks(m: usize, members: Vec<u32>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Self { m: m as u8, members }
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m as usize
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn masks(&self) -> &[u32] {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = BinaryVector> + '_ {
        let m = self.m();
        self.members.iter().map(move |&b| BinaryVector::from_raw(m, b))
    }

    pub fn contains(&self, y: &BinaryVector) -> bool {
        y.m == self.m && self.members.binary_search(&y.bits).is_ok()
    }

    pub fn is_subset(&self, other: &PredictionSet) -> bool {
        self.m == other.m && self.members.iter().all(|b| other.members.binary_search(b).is_ok())
    }

    pub fn union(&self, other: &PredictionSet) -> PredictionSet {
        assert_eq!(self.m, other.m, "union of sets over different label counts");
        let mut members: Vec<u32> = self.members.iter().chain(&other.members).copied().collect();
        members.sort_unstable();
        members.dedup();
        Self { m: self.m, members }
    }

    /// The partial vector whose expansion equals this set, or `None`.
    pub fn to_partial_vector(&self) -> Option<PartialVector> {
        let first = *self.members.first()?;
        let full = full_mask(self.m());
        let (always_one, ever_one) = self.members.iter().fold((full, 0), |(and, or), &b| (and & b, or | b));
        let known = (always_one | !ever_one) & full;
        let candidate = PartialVector::from_raw(self.m(), known, first);
        (candidate.cardinality() == self.members.len() as u64).then_some(candidate)
    }
}

impl fmt::Display for PredictionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, y) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{y}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for PredictionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PredictionSet{self}")
    }
}

impl Serialize for PredictionSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter().map(|y| y.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bv(s: &str) -> BinaryVector {
        s.parse().unwrap()
    }

    fn pv(s: &str) -> PartialVector {
        s.parse().unwrap()
    }

    fn set(items: &[&str]) -> PredictionSet {
        PredictionSet::parse(items[0].len(), items).unwrap()
    }

    #[test]
    fn hamming_examples() {
        assert_eq!(hamming_loss(&bv("01"), &bv("10")), 2);
        assert_eq!(hamming_loss(&bv("0110"), &bv("0110")), 0);
        assert_eq!(hamming_loss(&bv("110"), &bv("100")), 1);
    }

    #[test]
    #[should_panic(expected = "different length")]
    fn hamming_dimension_mismatch_panics() {
        hamming_loss(&bv("01"), &bv("010"));
    }

    #[test]
    fn partial_hamming_examples() {
        // I = {2}, a = (0), y = (1,1)
        let b = Assignment::new(2, &[1], &[false]).unwrap();
        assert_eq!(partial_hamming_loss(&b, &bv("11")), 1);
        let empty = Assignment::new(3, &[], &[]).unwrap();
        assert_eq!(partial_hamming_loss(&empty, &bv("101")), 0);
    }

    #[test]
    fn assignment_out_of_range() {
        assert!(matches!(Assignment::new(2, &[2], &[true]), Err(Error::IndexOutOfRange { index: 2, m: 2 })));
    }

    #[test]
    fn assignment_complement_keeps_indices() {
        let a = Assignment::new(4, &[0, 2], &[true, false]).unwrap();
        let c = a.complement();
        assert_eq!(c.indices(), vec![0, 2]);
        assert_eq!(c.to_partial().to_string(), "0*1*");
        assert_eq!(c.complement(), a);
    }

    #[test]
    fn bit_layout_matches_text() {
        assert_eq!(bv("01").bits(), 1);
        assert_eq!(bv("10").bits(), 2);
        assert_eq!(bv("110").bits(), 6);
        assert!(bv("10").get(0));
        assert!(!bv("10").get(1));
        assert_eq!(bv("0110").complement(), bv("1001"));
    }

    #[test]
    fn expand_examples() {
        assert_eq!(pv("1*").expand().unwrap(), set(&["10", "11"]));
        assert_eq!(pv("**").expand().unwrap(), set(&["00", "01", "10", "11"]));
        assert_eq!(pv("01").expand().unwrap(), set(&["01"]));
        assert_eq!(pv("*1*").expand().unwrap(), set(&["010", "011", "110", "111"]));
    }

    #[test]
    fn expand_guard() {
        let big = PartialVector::all_star(17).unwrap();
        assert!(matches!(big.expand(), Err(Error::EnumerationTooLarge { m: 17, .. })));
        assert_eq!(PartialVector::all_star(16).unwrap().expand().unwrap().len(), 1 << 16);
    }

    #[test]
    fn partial_vector_recognition() {
        assert_eq!(is_partial_vector(&set(&["10", "11"])), Some(pv("1*")));
        assert_eq!(is_partial_vector(&set(&["01", "10"])), None);
        assert_eq!(is_partial_vector(&set(&["10", "00", "11"])), None);
        assert_eq!(is_partial_vector(&set(&["101"])), Some(pv("101")));
    }

    #[test]
    fn text_round_trip() {
        assert_eq!(pv("1*0").to_string(), "1*0");
        assert!("1x0".parse::<PartialVector>().is_err());
        assert!("".parse::<BinaryVector>().is_err());
        let json = serde_json::to_string(&set(&["11", "00"])).unwrap();
        assert_eq!(json, r#"["00","11"]"#);
    }

    /// Closure condition: for all y, y' in s, every vector agreeing with both
    /// on the indices where they agree is in s.
    fn closure_holds(s: &PredictionSet) -> bool {
        let m = s.m();
        let all: Vec<BinaryVector> = BinaryVector::all(m).unwrap().collect();
        s.iter().all(|y| {
            s.iter().all(|y2| {
                all.iter()
                    .filter(|z| (0..m).all(|i| y.get(i) != y2.get(i) || z.get(i) == y.get(i)))
                    .all(|z| s.contains(z))
            })
        })
    }

    proptest! {
        #[test]
        fn expansion_round_trip(entries in prop::collection::vec(prop::option::of(any::<bool>()), 1..=10)) {
            let v = PartialVector::from_entries(&entries).unwrap();
            let s = expand_partial(&v).unwrap();
            prop_assert_eq!(s.len() as u64, 1u64 << v.star_count());
            prop_assert_eq!(is_partial_vector(&s), Some(v));
        }

        #[test]
        fn recognition_matches_closure(m in 1usize..=4, raw in any::<u64>()) {
            let size = 1u32 << m;
            let members: Vec<BinaryVector> = (0..size)
                .filter(|b| raw >> b & 1 == 1)
                .map(|b| BinaryVector::new(m, b).unwrap())
                .collect();
            prop_assume!(!members.is_empty());
            let s = PredictionSet::from_vectors(m, members).unwrap();
            prop_assert_eq!(is_partial_vector(&s).is_some(), closure_holds(&s));
        }
    }

    #[test]
    fn partial_loss_with_full_index_is_hamming() {
        for m in 1..=8usize {
            let full: Vec<usize> = (0..m).collect();
            for a in 0..1u32 << m {
                let y1 = BinaryVector::new(m, a).unwrap();
                let b = Assignment::new(m, &full, &y1.labels()).unwrap();
                for c in 0..1u32 << m {
                    let y2 = BinaryVector::new(m, c).unwrap();
                    assert_eq!(partial_hamming_loss(&b, &y2), hamming_loss(&y1, &y2));
                }
            }
        }
    }
}
