//! Subsets of the cyclic ground set `[n]` and the order and separation
//! predicates the rest of the crate is built on.
//!
//! A [`Subset`] is one machine word: bit `i - 1` is set iff element `i`
//! belongs to the set. The ground set is capped at 64 elements.

use std::fmt;
use std::ops::{BitAnd, BitOr, Sub};

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub const MAX_N: usize = 64;

/// A subset of `[n]`, `1 <= n <= 64`.
///
/// Ordering is by mask value first, which is the canonical order used for
/// collections throughout the crate.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset {
    mask: u64,
    n: u8,
}

#[inline]
fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_N {
        Err(Error::GroundSize(n))
    } else {
        Ok(())
    }
}

impl Subset {
    pub fn new(mask: u64, n: usize) -> Result<Self> {
        check_n(n)?;
        if mask & !full_mask(n) != 0 {
            return Err(Error::MaskOutOfRange { mask, n });
        }
        Ok(Subset { mask, n: n as u8 })
    }

    pub fn empty(n: usize) -> Result<Self> {
        Subset::new(0, n)
    }

    pub fn full(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(Subset { mask: full_mask(n), n: n as u8 })
    }

    /// Builds a subset from 1-based elements. Repeated elements are merged.
    pub fn from_elements<I>(elements: I, n: usize) -> Result<Self>
    where
        I: IntoIterator<Item = usize>,
    {
        check_n(n)?;
        let mut mask = 0u64;
        for e in elements {
            if e == 0 || e > n {
                return Err(Error::ElementOutOfRange { element: e as i64, n });
            }
            mask |= 1 << (e - 1);
        }
        Ok(Subset { mask, n: n as u8 })
    }

    /// Parses the textual form `"1,2,4"`. The empty string (or `"{}"`) is the
    /// empty set.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        check_n(n)?;
        let trimmed = text.trim().trim_start_matches('{').trim_end_matches('}').trim();
        let mut mask = 0u64;
        if trimmed.is_empty() {
            return Ok(Subset { mask, n: n as u8 });
        }
        for tok in trimmed.split(',') {
            let tok = tok.trim();
            let value: i64 = tok.parse().map_err(|_| Error::Parse {
                input: text.to_string(),
                reason: format!("{tok:?} is not an integer"),
            })?;
            if value < 1 || value as usize > n {
                return Err(Error::ElementOutOfRange { element: value, n });
            }
            let bit = 1u64 << (value - 1);
            if mask & bit != 0 {
                return Err(Error::Parse {
                    input: text.to_string(),
                    reason: format!("element {value} repeated"),
                });
            }
            mask |= bit;
        }
        Ok(Subset { mask, n: n as u8 })
    }

    #[inline]
    pub fn mask(self) -> u64 {
        self.mask
    }

    #[inline]
    pub fn n(self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn len(self) -> usize {
        self.mask.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.mask == 0
    }

    #[inline]
    pub fn contains(self, element: usize) -> bool {
        element >= 1 && element <= self.n() && self.mask & (1 << (element - 1)) != 0
    }

    /// Elements in ascending order, 1-based.
    pub fn elements(self) -> Elements {
        Elements { rest: self.mask }
    }

    pub fn min_element(self) -> Option<usize> {
        (self.mask != 0).then(|| self.mask.trailing_zeros() as usize + 1)
    }

    pub fn max_element(self) -> Option<usize> {
        (self.mask != 0).then(|| 64 - self.mask.leading_zeros() as usize)
    }

    pub fn with(self, element: usize) -> Self {
        assert!(element >= 1 && element <= self.n(), "element {element} outside [1, {}]", self.n);
        Subset { mask: self.mask | 1 << (element - 1), n: self.n }
    }

    pub fn without(self, element: usize) -> Self {
        assert!(element >= 1 && element <= self.n(), "element {element} outside [1, {}]", self.n);
        Subset { mask: self.mask & !(1 << (element - 1)), n: self.n }
    }

    pub fn complement(self) -> Self {
        Subset { mask: !self.mask & full_mask(self.n()), n: self.n }
    }

    /// Maps every element `x` to `((x - 1 + r) mod n) + 1`.
    pub fn rotate(self, r: i64) -> Self {
        let n = self.n();
        let shift = r.rem_euclid(n as i64) as u32;
        if shift == 0 {
            return self;
        }
        let m = self.mask;
        let rotated = (m << shift | m >> (n as u32 - shift)) & full_mask(n);
        Subset { mask: rotated, n: self.n }
    }

    pub fn transform(self, kind: Transform) -> Self {
        match kind {
            Transform::Complement => self.complement(),
            Transform::Rotate(r) => self.rotate(r),
        }
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.mask & !other.mask == 0
    }

    /// True iff the set is `[a, b]` taken cyclically, or is empty or full.
    pub fn is_cyclic_interval(self) -> bool {
        let n = self.n();
        let full = full_mask(n);
        if self.mask == 0 || self.mask == full {
            return true;
        }
        // An interval has exactly one position where membership switches on
        // when walking clockwise.
        let prev = (self.mask << 1 | self.mask >> (n - 1)) & full;
        (self.mask & !prev).count_ones() == 1
    }

    /// `self` surrounds `other`: `self \ other` splits as `L ⊔ R` with
    /// `L < other \ self < R` in the linear order on `[n]`.
    pub fn surrounds(self, other: Subset) -> Result<bool> {
        same_ground(self, other)?;
        Ok(surrounds_masks(self.mask & !other.mask, other.mask & !self.mask))
    }

    pub fn is_weakly_separated(self, other: Subset) -> Result<bool> {
        same_ground(self, other)?;
        Ok(weakly_separated_unchecked(self, other))
    }

    pub fn is_chord_separated(self, other: Subset) -> Result<bool> {
        same_ground(self, other)?;
        Ok(chord_separated_unchecked(self, other))
    }
}

pub(crate) fn same_ground(a: Subset, b: Subset) -> Result<()> {
    if a.n != b.n {
        Err(Error::MismatchedGround { left: a.n(), right: b.n() })
    } else {
        Ok(())
    }
}

#[inline]
fn surrounds_masks(outer: u64, inner: u64) -> bool {
    if outer == 0 || inner == 0 {
        return true;
    }
    let lo = inner.trailing_zeros();
    let hi = 63 - inner.leading_zeros();
    let span = if hi == 63 { u64::MAX << lo } else { ((1u64 << (hi + 1)) - 1) & (u64::MAX << lo) };
    outer & span == 0
}

/// Weak separation without the ground-set check; callers guarantee equal `n`.
#[inline]
pub(crate) fn weakly_separated_unchecked(s: Subset, t: Subset) -> bool {
    let (ls, lt) = (s.len(), t.len());
    let s_minus = s.mask & !t.mask;
    let t_minus = t.mask & !s.mask;
    (ls <= lt && surrounds_masks(s_minus, t_minus)) || (lt <= ls && surrounds_masks(t_minus, s_minus))
}

/// Chord separation by walking the circle and counting how often the
/// membership label of `S \ T` versus `T \ S` switches. Two or fewer switches
/// means the differences occupy at most two arcs.
#[inline]
pub(crate) fn chord_separated_unchecked(s: Subset, t: Subset) -> bool {
    let a = s.mask & !t.mask;
    let b = t.mask & !s.mask;
    if a == 0 || b == 0 {
        return true;
    }
    let mut rest = a | b;
    let first_in_a = a & (rest & rest.wrapping_neg()) != 0;
    let mut prev = first_in_a;
    let mut switches = 0;
    while rest != 0 {
        let bit = rest & rest.wrapping_neg();
        let in_a = a & bit != 0;
        if in_a != prev {
            switches += 1;
        }
        prev = in_a;
        rest &= rest - 1;
    }
    if prev != first_in_a {
        switches += 1;
    }
    switches <= 2
}

pub struct Elements {
    rest: u64,
}

impl Iterator for Elements {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.rest == 0 {
            return None;
        }
        let e = self.rest.trailing_zeros() as usize + 1;
        self.rest &= self.rest - 1;
        Some(e)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let c = self.rest.count_ones() as usize;
        (c, Some(c))
    }
}

impl ExactSizeIterator for Elements {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Transform {
    Complement,
    Rotate(i64),
}

/// Cyclic interval `[a, b]` modulo `n`.
pub fn cyclic_interval(a: usize, b: usize, n: usize) -> Result<Subset> {
    check_n(n)?;
    for e in [a, b] {
        if e == 0 || e > n {
            return Err(Error::ElementOutOfRange { element: e as i64, n });
        }
    }
    let len = (b + n - a) % n + 1;
    let run = full_mask(len);
    Ok(Subset::new(run, n)?.rotate(a as i64 - 1))
}

/// The shifted linear order `<_i` on `[n]`: `i < i+1 < ... < n < 1 < ... < i-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CyclicOrder {
    base: usize,
}

impl CyclicOrder {
    pub fn new(base: usize) -> Self {
        assert!(base >= 1, "cyclic order base is 1-based");
        CyclicOrder { base }
    }

    pub fn base(self) -> usize {
        self.base
    }

    /// Position of `x` in `<_base`, 0 for the base itself.
    #[inline]
    pub fn rank(self, x: usize, n: usize) -> usize {
        (x + n - self.base % n.max(1)) % n
    }

    /// Elements of `s` sorted by this order.
    pub fn sorted(self, s: Subset) -> Vec<usize> {
        let mut v: Vec<usize> = s.elements().collect();
        v.sort_by_key(|&x| self.rank(x, s.n()));
        v
    }
}

/// Gale order `A ≼_i B`: `|A| <= |B|` and the m-th smallest element of `A`
/// under `<_i` is at most the m-th smallest of `B`.
pub fn gale_leq(a: Subset, b: Subset, order: CyclicOrder) -> Result<bool> {
    same_ground(a, b)?;
    Ok(gale_leq_unchecked(a, b, order))
}

pub(crate) fn gale_leq_unchecked(a: Subset, b: Subset, order: CyclicOrder) -> bool {
    if a.len() > b.len() {
        return false;
    }
    let n = a.n();
    let ra = order.sorted(a);
    let rb = order.sorted(b);
    ra.iter().zip(&rb).all(|(&x, &y)| order.rank(x, n) <= order.rank(y, n))
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// All `k`-subsets of `[n]`, ascending by mask.
pub fn k_subsets(n: usize, k: usize) -> Result<Vec<Subset>> {
    check_n(n)?;
    if k > n {
        return Ok(Vec::new());
    }
    let mut out = Vec::with_capacity(binomial(n, k));
    if k == 0 {
        out.push(Subset { mask: 0, n: n as u8 });
        return Ok(out);
    }
    // Gosper's hack enumerates masks with k bits in increasing order.
    let limit = full_mask(n);
    let mut m: u64 = full_mask(k);
    loop {
        out.push(Subset { mask: m, n: n as u8 });
        if m == limit << (n - k) & limit {
            break;
        }
        let c = m & m.wrapping_neg();
        let r = m + c;
        m = (((r ^ m) >> 2) / c) | r;
        if m > limit {
            break;
        }
    }
    Ok(out)
}

/// All subsets of `[n]`, ascending by mask. Only sensible for small `n`.
pub fn all_subsets(n: usize) -> Result<Vec<Subset>> {
    check_n(n)?;
    if n > 24 {
        return Err(Error::Precondition(format!("2^[{n}] is too large to list")));
    }
    Ok((0..1u64 << n).map(|mask| Subset { mask, n: n as u8 }).collect())
}

impl BitAnd for Subset {
    type Output = Subset;

    fn bitand(self, rhs: Subset) -> Subset {
        assert_eq!(self.n, rhs.n, "subsets on different ground sets");
        Subset { mask: self.mask & rhs.mask, n: self.n }
    }
}

impl BitOr for Subset {
    type Output = Subset;

    fn bitor(self, rhs: Subset) -> Subset {
        assert_eq!(self.n, rhs.n, "subsets on different ground sets");
        Subset { mask: self.mask | rhs.mask, n: self.n }
    }
}

impl Sub for Subset {
    type Output = Subset;

    fn sub(self, rhs: Subset) -> Subset {
        assert_eq!(self.n, rhs.n, "subsets on different ground sets");
        Subset { mask: self.mask & !rhs.mask, n: self.n }
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for e in self.elements() {
            if !first {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}/{}", self.n)
    }
}

impl Serialize for Subset {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.elements())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(elems: &[usize], n: usize) -> Subset {
        Subset::from_elements(elems.iter().copied(), n).unwrap()
    }

    #[test]
    fn intervals_wrap() {
        assert_eq!(cyclic_interval(2, 4, 6).unwrap(), s(&[2, 3, 4], 6));
        assert_eq!(cyclic_interval(5, 2, 6).unwrap(), s(&[5, 6, 1, 2], 6));
        assert_eq!(cyclic_interval(3, 3, 6).unwrap(), s(&[3], 6));
        assert_eq!(cyclic_interval(1, 64, 64).unwrap().len(), 64);
        assert!(matches!(cyclic_interval(0, 3, 6), Err(Error::ElementOutOfRange { .. })));
        assert!(matches!(cyclic_interval(2, 7, 6), Err(Error::ElementOutOfRange { .. })));
    }

    #[test]
    fn interval_recognition() {
        assert!(s(&[5, 6, 1], 6).is_cyclic_interval());
        assert!(!s(&[1, 3], 4).is_cyclic_interval());
        assert!(Subset::empty(5).unwrap().is_cyclic_interval());
        assert!(Subset::full(5).unwrap().is_cyclic_interval());
        assert!(s(&[1], 1).is_cyclic_interval());
        for n in 1..=7 {
            for a in 1..=n {
                for b in 1..=n {
                    assert!(cyclic_interval(a, b, n).unwrap().is_cyclic_interval());
                }
            }
        }
    }

    #[test]
    fn surrounds_examples() {
        assert!(s(&[1, 5], 6).surrounds(s(&[3], 6)).unwrap());
        assert!(!s(&[3], 6).surrounds(s(&[1, 5], 6)).unwrap());
        let empty = Subset::empty(6).unwrap();
        assert!(empty.surrounds(s(&[2, 4], 6)).unwrap());
    }

    #[test]
    fn separation_examples() {
        let i = s(&[1, 2, 4], 6);
        let j = s(&[3, 5, 6], 6);
        assert!(!i.is_weakly_separated(j).unwrap());
        assert!(!i.is_chord_separated(j).unwrap());
        assert!(!s(&[2], 4).is_weakly_separated(s(&[1, 3], 4)).unwrap());
        assert!(s(&[1, 3], 4).is_chord_separated(s(&[2], 4)).unwrap());
        assert!(!s(&[1, 3], 4).is_chord_separated(s(&[2, 4], 4)).unwrap());
        assert!(i.is_weakly_separated(i).unwrap());
    }

    #[test]
    fn mismatched_ground_is_an_error() {
        let a = s(&[1], 4);
        let b = s(&[1], 5);
        assert_eq!(a.is_weakly_separated(b), Err(Error::MismatchedGround { left: 4, right: 5 }));
        assert!(a.is_chord_separated(b).is_err());
        assert!(a.surrounds(b).is_err());
        assert!(gale_leq(a, b, CyclicOrder::new(1)).is_err());
    }

    #[test]
    fn gale_examples() {
        let o = CyclicOrder::new(1);
        assert!(gale_leq(s(&[1, 3], 4), s(&[2, 4], 4), o).unwrap());
        assert!(!gale_leq(s(&[2, 4], 4), s(&[1, 3], 4), o).unwrap());
        assert!(gale_leq(s(&[2, 4], 4), s(&[2, 4], 4), CyclicOrder::new(3)).unwrap());
        // <_3 on [4] is 3 < 4 < 1 < 2, so {3} precedes {2}.
        assert!(gale_leq(s(&[3], 4), s(&[2], 4), CyclicOrder::new(3)).unwrap());
    }

    #[test]
    fn transforms() {
        assert_eq!(s(&[1, 2, 4], 6).complement(), s(&[3, 5, 6], 6));
        assert_eq!(s(&[5, 6], 6).rotate(2), s(&[1, 2], 6));
        assert_eq!(s(&[5, 6], 6).rotate(0), s(&[5, 6], 6));
        assert_eq!(s(&[1, 2], 6).rotate(-2), s(&[5, 6], 6));
        assert_eq!(s(&[64], 64).rotate(1), s(&[1], 64));
        assert_eq!(s(&[3], 6).transform(Transform::Rotate(6)), s(&[3], 6));
        assert_eq!(s(&[3], 6).transform(Transform::Complement).len(), 5);
    }

    #[test]
    fn parse_and_display() {
        let x = Subset::parse("1,2,4", 6).unwrap();
        assert_eq!(x, s(&[1, 2, 4], 6));
        assert_eq!(x.to_string(), "1,2,4");
        assert_eq!(Subset::parse("", 3).unwrap(), Subset::empty(3).unwrap());
        assert!(matches!(Subset::parse("1,2,7", 6), Err(Error::ElementOutOfRange { element: 7, .. })));
        assert!(matches!(Subset::parse("1,x", 6), Err(Error::Parse { .. })));
        assert!(matches!(Subset::parse("1,1", 6), Err(Error::Parse { .. })));
        assert!(Subset::new(1 << 6, 6).is_err());
        assert!(Subset::empty(0).is_err());
        assert!(Subset::empty(65).is_err());
    }

    #[test]
    fn subset_listing() {
        assert_eq!(k_subsets(6, 3).unwrap().len(), 20);
        assert_eq!(k_subsets(5, 0).unwrap().len(), 1);
        assert_eq!(k_subsets(5, 5).unwrap().len(), 1);
        assert_eq!(k_subsets(4, 5).unwrap().len(), 0);
        let listed = k_subsets(8, 4).unwrap();
        assert!(listed.windows(2).all(|w| w[0] < w[1]));
        assert!(listed.iter().all(|x| x.len() == 4));
        assert_eq!(k_subsets(64, 1).unwrap().len(), 64);
        assert_eq!(k_subsets(64, 63).unwrap().len(), 64);
        assert_eq!(all_subsets(4).unwrap().len(), 16);
        assert_eq!(binomial(10, 5), 252);
    }
}
