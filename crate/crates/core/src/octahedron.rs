//! The four-interval projection `φ`, the square pyramids spanned by
//! `α_1..α_4`, and the lattice counts for sets whose circle partition has
//! four intervals.
//!
//! Pyramid membership uses facet inequalities instead of solving for the
//! `t_i`. Writing `d = v - apex` for `v = apex + Σ t_i α_i`,
//!
//! ```text
//! d = (-t3 - t4, t2 + t3, -t1 - t2, t1 + t4)
//! ```
//!
//! so `+P` is `d1 <= 0, d2 >= 0, d3 <= 0, d4 >= 0` on the level hyperplane.
//! Each facet is spanned by two cyclically adjacent `α`s and is the zero set
//! of one coordinate of `d`. The converse direction is [`decompose`].

use std::collections::BTreeSet;

use serde::Serialize;

use crate::cliques::Collection;
use crate::domains::circle_partition;
use crate::error::{Error, Result};
use crate::ground::{binomial, Subset};
use crate::mutations::SquareMove;

pub const ALPHA: [[i64; 4]; 4] = [[0, 0, -1, 1], [0, 1, -1, 0], [-1, 1, 0, 0], [-1, 0, 0, 1]];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LatticeVec4 {
    pub coords: [i64; 4],
}

impl LatticeVec4 {
    pub fn new(coords: [i64; 4]) -> Self {
        LatticeVec4 { coords }
    }

    pub fn level(&self) -> i64 {
        self.coords.iter().sum()
    }

    fn minus(&self, other: &LatticeVec4) -> [i64; 4] {
        std::array::from_fn(|i| self.coords[i] - other.coords[i])
    }
}

/// Checks that the split is a composition of `n` and returns the cut points.
fn split_bounds(split: [usize; 4], n: usize) -> Result<[usize; 4]> {
    if split.iter().sum::<usize>() != n {
        return Err(Error::Split { split, n });
    }
    let mut ends = [0; 4];
    let mut acc = 0;
    for (i, &x) in split.iter().enumerate() {
        acc += x;
        ends[i] = acc;
    }
    Ok(ends)
}

/// Index of the split interval holding `x`.
fn part_of(x: usize, ends: &[usize; 4]) -> usize {
    ends.iter().position(|&e| x <= e).expect("element inside [n]")
}

pub fn phi_subset(s: Subset, split: [usize; 4]) -> Result<LatticeVec4> {
    let ends = split_bounds(split, s.n())?;
    let mut coords = [0i64; 4];
    for x in s.elements() {
        coords[part_of(x, &ends)] += 1;
    }
    Ok(LatticeVec4 { coords })
}

pub fn phi(c: &Collection, split: [usize; 4]) -> Result<Vec<LatticeVec4>> {
    c.iter().map(|&s| phi_subset(s, split)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Orientation {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PyramidFrame {
    pub apex: LatticeVec4,
    pub orientation: Orientation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Position {
    Interior,
    Boundary,
    Outside,
}

pub fn pyramid_position(frame: PyramidFrame, v: LatticeVec4) -> Result<Position> {
    if v.level() != frame.apex.level() {
        return Err(Error::LevelMismatch(frame.apex.level(), v.level()));
    }
    let mut d = v.minus(&frame.apex);
    if frame.orientation == Orientation::Minus {
        d = d.map(|x| -x);
    }
    let inside = d[0] <= 0 && d[1] >= 0 && d[2] <= 0 && d[3] >= 0;
    let strict = d[0] < 0 && d[1] > 0 && d[2] < 0 && d[3] > 0;
    Ok(if strict {
        Position::Interior
    } else if inside {
        Position::Boundary
    } else {
        Position::Outside
    })
}

/// Nonnegative `t` with `Σ t_i α_i = d`, for `d` on level 0 satisfying the
/// facet inequalities of `+P`.
pub fn decompose(d: [i64; 4]) -> Option<[i64; 4]> {
    if d.iter().sum::<i64>() != 0 || d[0] > 0 || d[1] < 0 || d[2] > 0 || d[3] < 0 {
        return None;
    }
    let t3 = (-d[0]).min(d[1]);
    let t4 = -d[0] - t3;
    let t2 = d[1] - t3;
    let t1 = d[3] - t4;
    Some([t1, t2, t3, t4])
}

pub fn combine(t: [i64; 4]) -> [i64; 4] {
    let mut d = [0i64; 4];
    for (ti, alpha) in t.iter().zip(ALPHA.iter()) {
        for c in 0..4 {
            d[c] += ti * alpha[c];
        }
    }
    d
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct P4Counts {
    pub p: [usize; 4],
    pub normalized: [usize; 4],
    pub z_count: usize,
    pub z_formula: i64,
    /// Points of `P` not outside it that lie strictly inside `Q`.
    pub interior_pq_count: usize,
    /// Points strictly inside both pyramids.
    pub strict_interior_count: usize,
    pub cuboid_formula: i64,
}

impl P4Counts {
    pub fn matches(&self) -> bool {
        self.z_count as i64 == self.z_formula && self.interior_pq_count as i64 == self.cuboid_formula
    }
}

/// The rotation of `p` with `p_1` maximal, lexicographically largest among
/// those. Rotating by one swaps the roles of `A` and its complement.
pub fn normalize_p4(p: [usize; 4]) -> [usize; 4] {
    let max = *p.iter().max().unwrap();
    (0..4)
        .map(|r| std::array::from_fn(|i| p[(i + r) % 4]))
        .filter(|q: &[usize; 4]| q[0] == max)
        .max()
        .unwrap()
}

pub fn p4_counts(a: Subset) -> Result<P4Counts> {
    let part = circle_partition(a)?;
    if part.u != 2 {
        return Err(Error::Precondition(format!("{{{a}}} has {} intervals, not 4", 2 * part.u)));
    }
    let p: [usize; 4] = std::array::from_fn(|i| part.lengths[i]);
    Ok(p4_counts_from_lengths(p))
}

/// Exhaustive lattice count for the partition `(p_1, p_2, p_3, p_4)` with
/// `p_1 + p_3 = p_2 + p_4 = k`.
pub fn p4_counts_from_lengths(p: [usize; 4]) -> P4Counts {
    let k = (p[0] + p[2]) as i64;
    debug_assert_eq!(p[0] + p[2], p[1] + p[3]);
    let pi = p.map(|x| x as i64);
    let plus = PyramidFrame { apex: LatticeVec4::new([pi[0], 0, pi[2], 0]), orientation: Orientation::Plus };
    let minus = PyramidFrame { apex: LatticeVec4::new([0, pi[1], 0, pi[3]]), orientation: Orientation::Minus };
    let (mut z, mut pq, mut strict) = (0, 0, 0);
    // Both pyramids together confine points to the box [0, p_1] × ... × [0, p_4].
    for x1 in 0..=pi[0] {
        for x2 in 0..=pi[1] {
            for x3 in 0..=pi[2] {
                let x4 = k - x1 - x2 - x3;
                if !(0..=pi[3]).contains(&x4) {
                    continue;
                }
                let v = LatticeVec4::new([x1, x2, x3, x4]);
                let in_p = pyramid_position(plus, v).expect("same level");
                let in_q = pyramid_position(minus, v).expect("same level");
                if in_q != Position::Interior {
                    continue;
                }
                match in_p {
                    Position::Boundary => {
                        z += 1;
                        pq += 1;
                    }
                    Position::Interior => {
                        pq += 1;
                        strict += 1;
                    }
                    Position::Outside => {}
                }
            }
        }
    }
    let sum_binom: i64 = p.iter().map(|&x| binomial(x, 2) as i64).sum();
    let q = normalize_p4(p);
    P4Counts {
        p,
        normalized: q,
        z_count: z,
        z_formula: 1 + k * k - 2 * k - sum_binom,
        interior_pq_count: pq,
        strict_interior_count: strict,
        cuboid_formula: (q[1] * q[2] * q[3]) as i64 - 2 * binomial(q[2] + 1, 3) as i64,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub apex: Subset,
    pub point: Subset,
    pub orientation: Orientation,
}

/// First pair `(J, I)` in canonical order with `φ(I)` interior to `±P(φ(J))`.
pub fn check_no_interior(c: &Collection, split: [usize; 4]) -> Result<Option<Violation>> {
    let images = phi(c, split)?;
    for (jdx, &apex) in images.iter().enumerate() {
        for (idx, &v) in images.iter().enumerate() {
            if idx == jdx || v.level() != apex.level() {
                continue;
            }
            for orientation in [Orientation::Plus, Orientation::Minus] {
                if pyramid_position(PyramidFrame { apex, orientation }, v)? == Position::Interior {
                    return Ok(Some(Violation { apex: c.items()[jdx], point: c.items()[idx], orientation }));
                }
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProjectionEffect {
    /// `φ(to) = φ(from) + sign · (-1, 1, -1, 1)`.
    Shift { sign: i8 },
    Unchanged,
}

/// How a square move acts on the image `φ(c)`. Errors with
/// [`Error::Falsified`] if the move does neither of the two expected things.
pub fn move_projection_effect(c: &Collection, m: &SquareMove, split: [usize; 4]) -> Result<ProjectionEffect> {
    let after = crate::mutations::apply_square_move(c, m)?;
    let ends = split_bounds(split, m.from.n())?;
    let mut parts = [m.a, m.b, m.c, m.d].map(|x| part_of(x, &ends));
    parts.sort_unstable();
    let distinct = parts.windows(2).all(|w| w[0] != w[1]);
    if distinct {
        let before = phi_subset(m.from, split)?;
        let now = phi_subset(m.to, split)?;
        let d = now.minus(&before);
        return match d {
            [-1, 1, -1, 1] => Ok(ProjectionEffect::Shift { sign: 1 }),
            [1, -1, 1, -1] => Ok(ProjectionEffect::Shift { sign: -1 }),
            _ => Err(Error::Falsified(format!("move {{{}}} -> {{{}}} shifts φ by {d:?}", m.from, m.to))),
        };
    }
    // Equality holds for the image as a set: the removed point keeps a
    // preimage among the four neighbours and the new point already has one.
    let x: BTreeSet<LatticeVec4> = phi(c, split)?.into_iter().collect();
    let y: BTreeSet<LatticeVec4> = phi(&after, split)?.into_iter().collect();
    if x != y {
        return Err(Error::Falsified(format!("move {{{}}} -> {{{}}} changes the φ image", m.from, m.to)));
    }
    Ok(ProjectionEffect::Unchanged)
}

/// All compositions of `n` into four positive parts.
pub fn four_splits(n: usize) -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for x in 1..n {
        for y in 1..n {
            for z in 1..n {
                if x + y + z < n {
                    out.push([x, y, z, n - x - y - z]);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(elems: &[usize], n: usize) -> Subset {
        Subset::from_elements(elems.iter().copied(), n).unwrap()
    }

    #[test]
    fn projection() {
        assert_eq!(phi_subset(s(&[1, 2, 4], 6), [2, 1, 1, 2]).unwrap().coords, [2, 0, 1, 0]);
        assert_eq!(phi_subset(s(&[3, 5, 6], 6), [2, 1, 1, 2]).unwrap().coords, [0, 1, 0, 2]);
        assert_eq!(phi_subset(Subset::empty(6).unwrap(), [2, 1, 1, 2]).unwrap().coords, [0; 4]);
        assert!(matches!(phi_subset(s(&[1], 6), [2, 1, 1, 1]), Err(Error::Split { .. })));
    }

    #[test]
    fn positions() {
        let apex = LatticeVec4::new([2, 0, 1, 0]);
        let frame = PyramidFrame { apex, orientation: Orientation::Plus };
        assert_eq!(pyramid_position(frame, LatticeVec4::new([0, 1, 0, 2])).unwrap(), Position::Interior);
        assert_eq!(pyramid_position(frame, apex).unwrap(), Position::Boundary);
        assert_eq!(pyramid_position(frame, LatticeVec4::new([2, 0, 0, 1])).unwrap(), Position::Boundary);
        assert_eq!(pyramid_position(frame, LatticeVec4::new([3, 0, 0, 0])).unwrap(), Position::Outside);
        assert!(matches!(pyramid_position(frame, LatticeVec4::new([0, 0, 0, 0])), Err(Error::LevelMismatch(3, 0))));
    }

    #[test]
    fn counts() {
        let c = p4_counts(s(&[1, 2, 4], 6)).unwrap();
        assert_eq!(c.p, [2, 1, 1, 2]);
        assert_eq!(c.normalized, [2, 2, 1, 1]);
        assert_eq!((c.z_count, c.z_formula, c.interior_pq_count, c.cuboid_formula), (2, 2, 2, 2));
        let c = p4_counts_from_lengths([2, 2, 2, 2]);
        assert_eq!((c.z_count, c.z_formula, c.interior_pq_count, c.cuboid_formula), (5, 5, 6, 6));
        assert!(p4_counts(s(&[1, 2, 3], 6)).is_err());
    }

    #[test]
    fn no_interior_detects_the_bad_pair() {
        let c = Collection::new([s(&[1, 2, 4], 6), s(&[3, 5, 6], 6)]).unwrap();
        let v = check_no_interior(&c, [2, 1, 1, 2]).unwrap().unwrap();
        assert_eq!((v.apex, v.point, v.orientation), (s(&[1, 2, 4], 6), s(&[3, 5, 6], 6), Orientation::Plus));
        let single = Collection::new([s(&[1, 2, 4], 6)]).unwrap();
        assert_eq!(check_no_interior(&single, [2, 1, 1, 2]).unwrap(), None);
    }

    #[test]
    fn square_move_shift() {
        let c = Collection::new([s(&[1, 2], 4), s(&[2, 3], 4), s(&[3, 4], 4), s(&[1, 4], 4), s(&[1, 3], 4)]).unwrap();
        let m = crate::mutations::find_square_moves(&c).unwrap()[0];
        assert_eq!(move_projection_effect(&c, &m, [1, 1, 1, 1]).unwrap(), ProjectionEffect::Shift { sign: 1 });
        assert_eq!(move_projection_effect(&c, &m, [4, 0, 0, 0]).unwrap(), ProjectionEffect::Unchanged);
    }

    #[test]
    fn splits() {
        assert_eq!(four_splits(6).len(), 10);
        assert_eq!(four_splits(4), vec![[1, 1, 1, 1]]);
    }
}
