//! Decorated permutations, Grassmann necklaces, positroid membership and the
//! inside/outside split of simple cyclic patterns.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::cliques::{Collection, Relation};
use crate::domains::circle_partition;
use crate::error::{Error, Result};
use crate::ground::{all_subsets, gale_leq_unchecked, k_subsets, weakly_separated_unchecked, CyclicOrder, Subset};

/// A permutation of `[n]` in one-line notation with a colour on every fixed
/// point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct DecoratedPermutation {
    perm: Vec<usize>,
    colors: BTreeMap<usize, i8>,
}

impl DecoratedPermutation {
    pub fn new(perm: Vec<usize>, colors: BTreeMap<usize, i8>) -> Result<Self> {
        let n = perm.len();
        if n == 0 || n > 64 {
            return Err(Error::GroundSize(n));
        }
        let mut seen = vec![false; n + 1];
        for &v in &perm {
            if v == 0 || v > n || std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidPermutation(format!("{perm:?} is not a bijection of [{n}]")));
            }
        }
        for i in 1..=n {
            let fixed = perm[i - 1] == i;
            match colors.get(&i) {
                Some(&c) if !fixed => {
                    return Err(Error::InvalidPermutation(format!("colour {c} on non-fixed point {i}")))
                }
                Some(&c) if c != 1 && c != -1 => {
                    return Err(Error::InvalidPermutation(format!("colour of {i} must be +1 or -1")))
                }
                None if fixed => return Err(Error::InvalidPermutation(format!("fixed point {i} has no colour"))),
                _ => {}
            }
        }
        Ok(DecoratedPermutation { perm, colors })
    }

    /// Colours every fixed point with `color`.
    pub fn with_fixed_color(perm: Vec<usize>, color: i8) -> Result<Self> {
        let colors = perm.iter().enumerate().filter(|(i, &v)| v == i + 1).map(|(i, _)| (i + 1, color)).collect();
        DecoratedPermutation::new(perm, colors)
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    pub fn one_line(&self) -> &[usize] {
        &self.perm
    }

    pub fn colors(&self) -> &BTreeMap<usize, i8> {
        &self.colors
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.perm[i - 1]
    }

    pub fn inverse_one_line(&self) -> Vec<usize> {
        let mut inv = vec![0; self.n()];
        for (i, &v) in self.perm.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        inv
    }

    /// `(self ∘ inner)(i) = self(inner(i))`. Fails when the result has fixed
    /// points, since their colours are not determined.
    pub fn compose(&self, inner: &DecoratedPermutation) -> Result<DecoratedPermutation> {
        if self.n() != inner.n() {
            return Err(Error::MismatchedGround { left: self.n(), right: inner.n() });
        }
        let perm: Vec<usize> = inner.perm.iter().map(|&v| self.apply(v)).collect();
        if let Some(i) = perm.iter().enumerate().position(|(i, &v)| v == i + 1) {
            return Err(Error::InvalidPermutation(format!("composition fixes {}", i + 1)));
        }
        DecoratedPermutation::new(perm, BTreeMap::new())
    }
}

/// `τ_{k,n}: i ↦ i + k (mod n)`. For `k ∈ {0, n}` every point is fixed and
/// coloured `+1` (k = 0) or `-1` (k = n).
pub fn tau_kn(k: usize, n: usize) -> Result<DecoratedPermutation> {
    if k > n {
        return Err(Error::Precondition(format!("need k <= n, got k={k}, n={n}")));
    }
    let perm = (1..=n).map(|i| (i - 1 + k) % n + 1).collect();
    DecoratedPermutation::with_fixed_color(perm, if k == n { -1 } else { 1 })
}

/// `τ_A`, reversing each block of the circle partition of `A`.
pub fn tau_a(a: Subset) -> Result<DecoratedPermutation> {
    let part = circle_partition(a)?;
    let mut perm = Vec::with_capacity(2 * part.k);
    let mut end = 0;
    for &p in &part.lengths {
        end += p;
        perm.extend((end - p + 1..=end).rev());
    }
    DecoratedPermutation::with_fixed_color(perm, 1)
}

/// `τ_A ∘ τ_{k,2k}`.
pub fn canonical_permutation(a: Subset) -> Result<DecoratedPermutation> {
    let k = a.n() / 2;
    tau_a(a)?.compose(&tau_kn(k, 2 * k)?)
}

/// `a, b, c, d` distinct and met in this order walking clockwise from `a`.
#[inline]
pub fn cyclically_ordered(a: usize, b: usize, c: usize, d: usize, n: usize) -> bool {
    let rank = |x: usize| (x + n - a) % n;
    let (rb, rc, rd) = (rank(b), rank(c), rank(d));
    0 < rb && rb < rc && rc < rd
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Length {
    pub alignments: usize,
    pub length: i64,
}

/// Alignments are pairs `{i, j}` with `i, π(i), π(j), j` cyclically ordered
/// and distinct; `ℓ = k(n - k) - al`.
pub fn length_of(p: &DecoratedPermutation, k: usize) -> Length {
    let n = p.n();
    let mut alignments = 0;
    for i in 1..=n {
        for j in 1..=n {
            if i != j && cyclically_ordered(i, p.apply(i), p.apply(j), j, n) {
                alignments += 1;
            }
        }
    }
    Length { alignments, length: (k * (n - k)) as i64 - alignments as i64 }
}

/// `I_1, ..., I_n` with `I_{n+1} = I_1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GrassmannNecklace {
    sets: Vec<Subset>,
}

impl GrassmannNecklace {
    /// Validates the one-element exchange rule between consecutive sets.
    pub fn new(sets: Vec<Subset>) -> Result<Self> {
        let n = sets.len();
        if n == 0 {
            return Err(Error::InvalidNecklace("no sets".into()));
        }
        let k = sets[0].len();
        for (idx, s) in sets.iter().enumerate() {
            if s.n() != n {
                return Err(Error::InvalidNecklace(format!("I_{} is not over [{n}]", idx + 1)));
            }
            if s.len() != k {
                return Err(Error::InvalidNecklace(format!("I_{} has size {}, expected {k}", idx + 1, s.len())));
            }
        }
        for i in 1..=n {
            let (cur, next) = (sets[i - 1], sets[i % n]);
            let ok = if cur.contains(i) { (cur.without(i) - next).is_empty() } else { cur == next };
            if !ok {
                return Err(Error::InvalidNecklace(format!("step from I_{i} to I_{} breaks the exchange rule", i % n + 1)));
            }
        }
        Ok(GrassmannNecklace { sets })
    }

    pub fn sets(&self) -> &[Subset] {
        &self.sets
    }

    pub fn n(&self) -> usize {
        self.sets.len()
    }

    pub fn k(&self) -> usize {
        self.sets[0].len()
    }

    /// `I_i`, 1-based and cyclic.
    pub fn get(&self, i: usize) -> Subset {
        self.sets[(i - 1) % self.n()]
    }

    pub fn is_connected(&self) -> bool {
        let mut sorted = self.sets.clone();
        sorted.sort_unstable();
        sorted.windows(2).all(|w| w[0] != w[1])
    }

    pub fn collection(&self) -> Collection {
        Collection::new(self.sets.iter().copied()).expect("necklace sets share n")
    }
}

impl Serialize for GrassmannNecklace {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.sets.iter())
    }
}

/// `I_i = { j : j <_i π⁻¹(j) } ∪ { fixed points coloured -1 }`.
pub fn necklace_from_perm(p: &DecoratedPermutation, k: usize) -> Result<GrassmannNecklace> {
    let n = p.n();
    let inv = p.inverse_one_line();
    let mut sets = Vec::with_capacity(n);
    for i in 1..=n {
        let order = CyclicOrder::new(i);
        let elems = (1..=n).filter(|&j| {
            let pre = inv[j - 1];
            if pre == j {
                p.colors.get(&j) == Some(&-1)
            } else {
                order.rank(j, n) < order.rank(pre, n)
            }
        });
        let s = Subset::from_elements(elems, n)?;
        if s.len() != k {
            return Err(Error::InvalidPermutation(format!("I_{i} has size {}, not {k}", s.len())));
        }
        sets.push(s);
    }
    GrassmannNecklace::new(sets)
}

/// The size of every necklace set the permutation determines.
pub fn necklace_rank(p: &DecoratedPermutation) -> usize {
    let inv = p.inverse_one_line();
    (1..=p.n())
        .filter(|&j| {
            let pre = inv[j - 1];
            if pre == j {
                p.colors.get(&j) == Some(&-1)
            } else {
                pre > j
            }
        })
        .count()
}

pub fn perm_from_necklace(nk: &GrassmannNecklace) -> Result<DecoratedPermutation> {
    let n = nk.n();
    let mut perm = vec![0; n];
    let mut colors = BTreeMap::new();
    for i in 1..=n {
        let (cur, next) = (nk.get(i), nk.get(i + 1));
        if cur.contains(i) {
            let added = next - cur.without(i);
            let j = added.min_element().expect("exchange rule leaves one new element");
            perm[i - 1] = j;
            if j == i {
                colors.insert(i, -1);
            }
        } else {
            perm[i - 1] = i;
            colors.insert(i, 1);
        }
    }
    DecoratedPermutation::new(perm, colors)
}

/// `I_i ≼_i J` for every `i`.
pub fn positroid_contains(nk: &GrassmannNecklace, j: Subset) -> Result<bool> {
    if j.n() != nk.n() {
        return Err(Error::MismatchedGround { left: nk.n(), right: j.n() });
    }
    if j.len() != nk.k() {
        return Err(Error::Cardinality { expected: nk.k(), found: j.len() });
    }
    Ok((1..=nk.n()).all(|i| gale_leq_unchecked(nk.get(i), j, CyclicOrder::new(i))))
}

/// `k`-subsets weakly separated from the whole necklace and inside its
/// positroid.
pub fn domain_in_for_necklace(nk: &GrassmannNecklace) -> Result<Collection> {
    let items: Vec<Subset> = k_subsets(nk.n(), nk.k())?
        .into_par_iter()
        .filter(|&x| {
            nk.sets.iter().all(|&s| weakly_separated_unchecked(x, s))
                && (1..=nk.n()).all(|i| gale_leq_unchecked(nk.get(i), x, CyclicOrder::new(i)))
        })
        .collect();
    Collection::new(items)
}

/// Cyclic sequence `S_0, ..., S_{r-1}` of pairwise weakly separated distinct
/// sets with unit symmetric differences between neighbours.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleCyclicPattern {
    sets: Vec<Subset>,
}

impl SimpleCyclicPattern {
    pub fn new(sets: Vec<Subset>) -> Result<Self> {
        check_pattern(&sets, 1)?;
        Ok(SimpleCyclicPattern { sets })
    }

    pub fn sets(&self) -> &[Subset] {
        &self.sets
    }

    /// Indices `i` with `|S_{i-1}| != |S_{i+1}|`.
    pub fn slopes(&self) -> Vec<usize> {
        let r = self.sets.len();
        (0..r).filter(|&i| self.sets[(i + r - 1) % r].len() != self.sets[(i + 1) % r].len()).collect()
    }
}

/// Validity check for a generalized cyclic pattern: same-size sets whose
/// neighbours differ by one exchange.
pub fn check_generalized_pattern(sets: &[Subset]) -> Result<()> {
    if let Some(s) = sets.iter().find(|s| s.len() != sets[0].len()) {
        return Err(Error::InvalidPattern(format!("{{{s}}} has a different size")));
    }
    check_pattern(sets, 2)
}

fn check_pattern(sets: &[Subset], step: usize) -> Result<()> {
    let r = sets.len();
    if r < 2 {
        return Err(Error::InvalidPattern("a cyclic pattern needs at least two sets".into()));
    }
    let coll = Collection::new(sets.iter().copied()).map_err(|e| Error::InvalidPattern(e.to_string()))?;
    if coll.len() != r {
        return Err(Error::InvalidPattern("sets are not pairwise distinct".into()));
    }
    if let Some((a, b)) = coll.first_conflict(Relation::Weak) {
        return Err(Error::InvalidPattern(format!("{{{a}}} and {{{b}}} are not weakly separated")));
    }
    for i in 0..r {
        let (x, y) = (sets[i], sets[(i + 1) % r]);
        if ((x - y) | (y - x)).len() != step {
            return Err(Error::InvalidPattern(format!("{{{x}}} to {{{y}}} is not a step of size {step}")));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PatternSplit {
    pub d_in: Collection,
    pub d_out: Collection,
}

/// Splits the sets weakly separated from the pattern by the parity of the
/// number of same-size slopes below them in `≺_1`.
pub fn simple_pattern_split(p: &SimpleCyclicPattern) -> Result<PatternSplit> {
    let n = p.sets[0].n();
    let order = CyclicOrder::new(1);
    let slopes: Vec<Subset> = p.slopes().into_iter().map(|i| p.sets[i]).collect();
    let pattern = Collection::new(p.sets.iter().copied())?;
    let (mut d_in, mut d_out) = (pattern.items().to_vec(), pattern.items().to_vec());
    for x in all_subsets(n)? {
        if pattern.contains(x) || !p.sets.iter().all(|&s| weakly_separated_unchecked(x, s)) {
            continue;
        }
        let below = slopes.iter().filter(|s| s.len() == x.len() && gale_leq_unchecked(**s, x, order)).count();
        if below % 2 == 1 {
            d_in.push(x);
        } else {
            d_out.push(x);
        }
    }
    Ok(PatternSplit { d_in: Collection::new(d_in)?, d_out: Collection::new(d_out)? })
}
