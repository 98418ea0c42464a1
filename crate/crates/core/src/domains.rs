//! The concrete domains (`A_{I,J}`, boundary intervals, `LR(n)`), the circle
//! partition of a set `A ⊂ [2k]`, and the rank and distance formulas that go
//! with them.

use rayon::prelude::*;
use serde::Serialize;

use crate::cliques::{build_compat_graph, Collection, Relation};
use crate::error::{Error, Result};
use crate::ground::{
    all_subsets, binomial, cyclic_interval, k_subsets, same_ground, weakly_separated_unchecked, Subset,
};

/// Alternating runs of `A` and its complement around the circle `[2k]`.
///
/// Intervals are stored in canonical coordinates: `A` rotated by `offset` so
/// that `1 ∈ A` and `2k ∉ A`. Odd positions (`P_1, P_3, ...`) belong to `A`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CirclePartition {
    pub k: usize,
    pub u: usize,
    pub offset: usize,
    pub intervals: Vec<Subset>,
    pub lengths: Vec<usize>,
}

impl CirclePartition {
    /// `a_i = p_{2i-1}`, the runs inside `A`.
    pub fn a(&self) -> Vec<usize> {
        self.lengths.iter().step_by(2).copied().collect()
    }

    /// `b_i = p_{2i}`, the runs inside the complement.
    pub fn b(&self) -> Vec<usize> {
        self.lengths.iter().skip(1).step_by(2).copied().collect()
    }

    /// 0-based index of the interval holding a canonical-coordinate element.
    pub fn interval_of(&self, x: usize) -> usize {
        self.intervals.iter().position(|p| p.contains(x)).expect("intervals cover the circle")
    }

    /// Maps an element of the original `[2k]` into canonical coordinates.
    pub fn to_canonical(&self, x: usize) -> usize {
        (x - 1 + self.offset) % (2 * self.k) + 1
    }

    /// The intervals in the coordinates of the original set.
    pub fn original_intervals(&self) -> Vec<Subset> {
        self.intervals.iter().map(|p| p.rotate(-(self.offset as i64))).collect()
    }

    pub fn is_balanced(&self) -> bool {
        let mut sorted = self.lengths.clone();
        sorted.sort_unstable_by(|x, y| y.cmp(x));
        sorted[0] + sorted[1] < self.k
    }

    pub fn sum_binom2(&self) -> usize {
        self.lengths.iter().map(|&p| binomial(p, 2)).sum()
    }
}

pub fn circle_partition(a: Subset) -> Result<CirclePartition> {
    let n = a.n();
    if !n.is_multiple_of(2) {
        return Err(Error::Precondition(format!("ground set [{n}] has odd size")));
    }
    let k = n / 2;
    if a.len() != k {
        return Err(Error::Cardinality { expected: k, found: a.len() });
    }
    if a.is_empty() || a.len() == n {
        return Err(Error::TrivialSet);
    }
    let offset = (0..n).find(|&r| {
        let b = a.rotate(r as i64);
        b.contains(1) && !b.contains(n)
    });
    let offset = offset.expect("a proper subset has a run boundary");
    let rotated = a.rotate(offset as i64);
    let mut intervals = Vec::new();
    let mut start = 1;
    for x in 2..=n + 1 {
        if x == n + 1 || rotated.contains(x) != rotated.contains(start) {
            intervals.push(cyclic_interval(start, x - 1, n)?);
            start = x;
        }
    }
    let lengths: Vec<usize> = intervals.iter().map(|p| p.len()).collect();
    Ok(CirclePartition { k, u: intervals.len() / 2, offset, intervals, lengths })
}

pub fn is_balanced(a: Subset) -> Result<bool> {
    Ok(circle_partition(a)?.is_balanced())
}

/// A pair `I, J` of equal size with the common part stripped away.
#[derive(Clone, Debug, Serialize)]
pub struct PairContext {
    pub i: Subset,
    pub j: Subset,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    /// `proj_map[t]` is the element of `[n]` sent to `t + 1`.
    pub proj_map: Vec<usize>,
    pub reduced_i: Option<Subset>,
    pub reduced_j: Option<Subset>,
    pub partition: Option<CirclePartition>,
    pub balanced: bool,
    pub weakly_separated: bool,
}

impl PairContext {
    /// `proj` of an element of `I △ J`.
    pub fn proj(&self, x: usize) -> Option<usize> {
        self.proj_map.iter().position(|&y| y == x).map(|t| t + 1)
    }

    pub fn is_degenerate(&self) -> bool {
        self.k == 0
    }

    fn require_balanced(&self) -> Result<&CirclePartition> {
        match &self.partition {
            Some(p) if self.balanced => Ok(p),
            _ => Err(Error::Unbalanced),
        }
    }
}

pub fn reduce_pair(i: Subset, j: Subset) -> Result<PairContext> {
    same_ground(i, j)?;
    if i.len() != j.len() {
        return Err(Error::Cardinality { expected: i.len(), found: j.len() });
    }
    let n = i.n();
    let sym = (i - j) | (j - i);
    let proj_map: Vec<usize> = sym.elements().collect();
    let k = proj_map.len() / 2;
    let weakly_separated = weakly_separated_unchecked(i, j);
    if k == 0 {
        return Ok(PairContext {
            i,
            j,
            n,
            m: i.len(),
            k,
            proj_map,
            reduced_i: None,
            reduced_j: None,
            partition: None,
            balanced: false,
            weakly_separated,
        });
    }
    let reduced_i = Subset::from_elements(
        proj_map.iter().enumerate().filter(|(_, &x)| i.contains(x)).map(|(t, _)| t + 1),
        2 * k,
    )?;
    let partition = circle_partition(reduced_i)?;
    Ok(PairContext {
        i,
        j,
        n,
        m: i.len(),
        k,
        balanced: partition.is_balanced(),
        proj_map,
        reduced_j: Some(reduced_i.complement()),
        reduced_i: Some(reduced_i),
        partition: Some(partition),
        weakly_separated,
    })
}

/// The `n` cyclic intervals of length `k`.
pub fn boundary_intervals(k: usize, n: usize) -> Result<Collection> {
    if k == 0 || k > n {
        return Err(Error::Precondition(format!("boundary intervals need 1 <= k <= n, got k={k}, n={n}")));
    }
    let sets: Result<Vec<Subset>> = (1..=n).map(|a| cyclic_interval(a, (a + k - 2) % n + 1, n)).collect();
    Collection::new(sets?)
}

const DOMAIN_SCAN_LIMIT: usize = 20_000_000;

/// All `m`-subsets weakly separated from both `I` and `J`.
#[allow(non_snake_case)]
pub fn build_domain_AIJ(i: Subset, j: Subset) -> Result<Collection> {
    same_ground(i, j)?;
    if i.len() != j.len() {
        return Err(Error::Cardinality { expected: i.len(), found: j.len() });
    }
    let (n, m) = (i.n(), i.len());
    if binomial(n, m) > DOMAIN_SCAN_LIMIT {
        return Err(Error::Precondition(format!("[{n}] choose {m} is too large to scan")));
    }
    let items: Vec<Subset> = k_subsets(n, m)?
        .into_par_iter()
        .filter(|&r| weakly_separated_unchecked(r, i) && weakly_separated_unchecked(r, j))
        .collect();
    Ok(Collection::from_sorted(items))
}

/// `m(n-m) - k^2 + 2k + Σ C(p_i, 2)` for a balanced pair.
pub fn rank_formula(ctx: &PairContext) -> Result<i64> {
    let p = ctx.require_balanced()?;
    let (n, m, k) = (ctx.n as i64, ctx.m as i64, ctx.k as i64);
    Ok(m * (n - m) - k * k + 2 * k + p.sum_binom2() as i64)
}

/// `1 + k^2 - 2k - Σ C(p_i, 2)` on the reduced pair, or 0 when the pair is
/// weakly separated (one or no intervals each side).
pub fn distance_expression(ctx: &PairContext) -> i64 {
    match &ctx.partition {
        Some(p) if p.u >= 2 => {
            let k = ctx.k as i64;
            1 + k * k - 2 * k - p.sum_binom2() as i64
        }
        _ => 0,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistanceMethod {
    Exact,
    Formula,
}

impl std::str::FromStr for DistanceMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(DistanceMethod::Exact),
            "formula" => Ok(DistanceMethod::Formula),
            other => Err(Error::Parse { input: other.to_string(), reason: "expected exact or formula".into() }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ClusterDistance {
    pub d: i64,
    /// Set when the formula was applied to an unbalanced pair and `d` is
    /// only an upper bound.
    pub upper_bound: bool,
}

pub fn cluster_distance(i: Subset, j: Subset, method: DistanceMethod) -> Result<ClusterDistance> {
    let ctx = reduce_pair(i, j)?;
    match method {
        DistanceMethod::Exact => {
            let domain = build_domain_AIJ(i, j)?;
            let best = build_compat_graph(&domain, Relation::Weak)?.max_clique_size() as i64;
            let (n, m) = (ctx.n as i64, ctx.m as i64);
            Ok(ClusterDistance { d: m * (n - m) + 1 - best, upper_bound: false })
        }
        DistanceMethod::Formula => Ok(ClusterDistance {
            d: distance_expression(&ctx),
            upper_bound: !ctx.weakly_separated && !ctx.balanced,
        }),
    }
}

/// `LR(n)`: subsets of `[0, n]` holding exactly one of `0` and `n`, stored over
/// `[n + 1]` with every label shifted up by one.
pub fn lr_domain(n: usize) -> Result<Collection> {
    if n == 0 || n + 1 > 24 {
        return Err(Error::GroundSize(n));
    }
    let ground = n + 1;
    let (first, last) = (1u64, 1u64 << n);
    let items: Vec<Subset> = all_subsets(ground)?
        .into_iter()
        .filter(|s| (s.mask() & first != 0) != (s.mask() & last != 0))
        .collect();
    Ok(Collection::from_sorted(items))
}

/// The 0-based labels of an `LR(n)` member.
pub fn lr_labels(s: Subset) -> Vec<usize> {
    s.elements().map(|x| x - 1).collect()
}

pub fn lr_subset(labels: &[usize], n: usize) -> Result<Subset> {
    if let Some(&bad) = labels.iter().find(|&&x| x > n) {
        return Err(Error::ElementOutOfRange { element: bad as i64, n });
    }
    Subset::from_elements(labels.iter().map(|&x| x + 1), n + 1)
}

/// `∅ = S_0 ⊂ S_1 ⊂ ... ⊂ S_{n-1} = [n-1]`, stored over `[n + 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LrChain {
    pub sets: Vec<Subset>,
}

impl LrChain {
    pub fn labels(&self) -> Vec<Vec<usize>> {
        self.sets.iter().map(|&s| lr_labels(s)).collect()
    }
}

impl Serialize for LrChain {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.labels())
    }
}

pub fn lr_chain(w: &Collection, n: usize) -> Result<LrChain> {
    let domain = lr_domain(n)?;
    if let Some(&x) = w.iter().find(|&&x| !domain.contains(x)) {
        return Err(Error::Precondition(format!("{:?} is not in LR({n})", lr_labels(x))));
    }
    if let Some((a, b)) = w.first_conflict(Relation::Weak) {
        return Err(Error::NotSeparated(format!("{:?}", lr_labels(a)), format!("{:?}", lr_labels(b))));
    }
    if let Some(x) = w.first_extension(&domain, Relation::Weak) {
        return Err(Error::NotMaximal(format!("{:?}", lr_labels(x))));
    }
    let zero = Subset::from_elements([1], n + 1)?;
    let top = Subset::from_elements([n + 1], n + 1)?;
    let mut sets = Vec::with_capacity(n);
    for m in 0..n {
        let found: Vec<Subset> = w
            .iter()
            .filter(|x| x.contains(1) && x.len() == m + 1)
            .map(|&x| x - zero)
            .filter(|&s| w.contains(s | top))
            .collect();
        match found.as_slice() {
            [s] => sets.push(*s),
            [] => return Err(Error::ChainAbsent(format!("no S_{m}"))),
            _ => return Err(Error::Falsified(format!("S_{m} is not unique ({} candidates)", found.len()))),
        }
    }
    if sets.windows(2).any(|p| !p[0].is_subset_of(p[1])) {
        return Err(Error::Falsified("chain is not nested".into()));
    }
    Ok(LrChain { sets })
}

/// Lower bound construction for unbalanced sets.
#[derive(Clone, Debug, Serialize)]
pub struct UnbalancedBound {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub chi: Vec<Vec<u8>>,
    pub bound: usize,
    pub witness: Collection,
}

/// `χ_{i,j}` is zero when `P_{2j}` touches `P_{2i-1}` on the circle (so
/// `j = i` or `j = i - 1` cyclically) or when `a_i + b_j < k`.
pub fn chi_matrix(a: &[usize], b: &[usize], k: usize) -> Vec<Vec<u8>> {
    let u = a.len();
    (0..u)
        .map(|i| {
            (0..u)
                .map(|j| {
                    let touching = j == i || j == (i + u - 1) % u;
                    u8::from(!touching && a[i] + b[j] >= k)
                })
                .collect()
        })
        .collect()
}

pub fn unbalanced_witness(a_set: Subset) -> Result<UnbalancedBound> {
    let part = circle_partition(a_set)?;
    if part.u < 2 {
        return Err(Error::Precondition("A and its complement are already weakly separated".into()));
    }
    let (k, n) = (part.k, 2 * part.k);
    let (a, b) = (part.a(), part.b());
    let chi = chi_matrix(&a, &b, k);
    let mut bound = 2 * k + part.sum_binom2();
    let wrap = |x: i64| ((x - 1).rem_euclid(n as i64) + 1) as usize;
    let iv = |from: i64, to: i64| cyclic_interval(wrap(from), wrap(to), n);
    let mut sets: Vec<Subset> = Vec::new();

    // T_i: two pieces ending at the right end of one run.
    for run in &part.intervals {
        let (s, e) = (run.min_element().unwrap() as i64, run.max_element().unwrap() as i64);
        for x in s..=e {
            for y in x + 1..=e {
                let right = iv(y, e)?;
                let left_len = k as i64 - (e - y + 1);
                let piece = if left_len > 0 { right | iv(x - left_len, x - 1)? } else { right };
                sets.push(piece);
            }
        }
    }
    // M_ij: right-aligned pieces of an A-run and a non-touching complement run.
    for i in 0..part.u {
        for j in 0..part.u {
            if chi[i][j] == 0 {
                continue;
            }
            bound += a[i] + b[j] + 1 - k;
            let (pa, pb) = (part.intervals[2 * i], part.intervals[2 * j + 1]);
            let (ea, eb) = (pa.max_element().unwrap() as i64, pb.max_element().unwrap() as i64);
            for x in pa.elements() {
                for y in pb.elements() {
                    let len = (ea - x as i64 + 1) + (eb - y as i64 + 1);
                    if len == k as i64 {
                        sets.push(iv(x as i64, ea)? | iv(y as i64, eb)?);
                    }
                }
            }
        }
    }
    for start in 1..=n {
        sets.push(iv(start as i64, (start + k - 1) as i64)?);
    }
    let raw = sets.len();
    let back = -(part.offset as i64);
    let witness = Collection::new(sets.into_iter().map(|s| s.rotate(back)))?;
    if witness.len() != raw || witness.len() != bound {
        return Err(Error::Falsified(format!(
            "witness for {{{a_set}}} has {} distinct of {raw} sets, bound {bound}",
            witness.len()
        )));
    }
    Ok(UnbalancedBound { a, b, chi, bound, witness })
}

/// A four-tuple `α < β ≤ γ < δ ≤ α` describing how an element of `A_{I,J}`
/// sits against a balanced pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ElementProfile {
    pub alpha: usize,
    pub beta: usize,
    pub gamma: usize,
    pub delta: usize,
    /// 1-based interval index holding `proj (γ, δ)`; `None` if that region
    /// misses `I △ J`.
    pub left_endpoint: Option<usize>,
    /// 1-based interval index holding `proj (α, β)`.
    pub right_endpoint: Option<usize>,
    /// Other intervals contained in `proj R`, 1-based.
    pub internal: Vec<usize>,
}

/// Open-region count, `(α, β, γ, δ)` and the intervals filling `(γ, δ)` and `(α, β)`.
type Candidate = (usize, [usize; 4], Option<usize>, Option<usize>);

/// Finds the profile of `R` with the fewest elements in the two open
/// regions, then the lexicographically least `(α, β, γ, δ)`.
pub fn characterize_element(ctx: &PairContext, r: Subset) -> Result<ElementProfile> {
    let part = ctx.require_balanced()?;
    same_ground(ctx.i, r)?;
    let n = ctx.n;
    let (i, j) = (ctx.i.mask(), ctx.j.mask());
    let rm = r.mask();
    let inter = i & j;
    let union = i | j;
    // Canonical-coordinate interval of every element of I △ J.
    let mut interval_of = vec![usize::MAX; n + 1];
    for (t, &x) in ctx.proj_map.iter().enumerate() {
        interval_of[x] = part.interval_of(part.to_canonical(t + 1));
    }
    let nested = |region: u64| {
        let (ir, rr, jr) = (i & region, rm & region, j & region);
        (ir & !rr == 0 && rr & !jr == 0) || (jr & !rr == 0 && rr & !ir == 0)
    };
    let single_interval = |region: u64| -> Option<Option<usize>> {
        let mut seen: Option<usize> = None;
        for x in (Subset::new(region, n).ok()?).elements() {
            let iv = interval_of[x];
            if iv == usize::MAX {
                continue;
            }
            match seen {
                Some(s) if s != iv => return None,
                _ => seen = Some(iv),
            }
        }
        Some(seen)
    };
    // Offsets from α: region masks by offset range.
    let span = |alpha: usize, from: usize, to: usize| -> u64 {
        if from > to {
            return 0;
        }
        let a = (alpha - 1 + from) % n + 1;
        let b = (alpha - 1 + to) % n + 1;
        cyclic_interval(a, b, n).map(|s| s.mask()).unwrap_or(0)
    };
    let mut best: Option<Candidate> = None;
    for alpha in 1..=n {
        for ob in 1..n {
            let r1 = span(alpha, 1, ob - 1);
            if !nested(r1) {
                continue;
            }
            let Some(right) = single_interval(r1) else { continue };
            for og in ob..n {
                let r2 = span(alpha, ob, og);
                if rm & r2 & !inter != 0 {
                    continue;
                }
                for od in og + 1..=n {
                    let r3 = span(alpha, og + 1, od - 1);
                    let r4 = span(alpha, od, n);
                    if union & r4 & !rm != 0 || !nested(r3) {
                        continue;
                    }
                    let Some(left) = single_interval(r3) else { continue };
                    let open = (r1 | r3).count_ones() as usize;
                    let at = |o: usize| (alpha - 1 + o) % n + 1;
                    let tuple = [alpha, at(ob), at(og), at(od)];
                    let better = match &best {
                        None => true,
                        Some((bo, bt, ..)) => (open, tuple) < (*bo, *bt),
                    };
                    if better {
                        best = Some((open, tuple, left, right));
                    }
                }
            }
        }
    }
    let Some((_, [alpha, beta, gamma, delta], left, right)) = best else {
        return Err(Error::NoProfile(format!("{{{r}}}")));
    };
    let proj_r: Vec<usize> = ctx
        .proj_map
        .iter()
        .enumerate()
        .filter(|(_, &x)| r.contains(x))
        .map(|(t, _)| part.to_canonical(t + 1))
        .collect();
    let proj_r = Subset::from_elements(proj_r, 2 * ctx.k)?;
    let internal = (0..part.intervals.len())
        .filter(|&t| Some(t) != left && Some(t) != right && part.intervals[t].is_subset_of(proj_r))
        .map(|t| t + 1)
        .collect();
    Ok(ElementProfile {
        alpha,
        beta,
        gamma,
        delta,
        left_endpoint: left.map(|t| t + 1),
        right_endpoint: right.map(|t| t + 1),
        internal,
    })
}

/// Finds `U = S_u ⊂ ... ⊂ S_v = V` with `S, 1∪S, S∪n, 1∪S∪n` all in `W` for
/// every link, trying extensions in ascending element order.
pub fn chord_chain(w: &Collection, u: Subset, v: Subset) -> Result<Vec<Subset>> {
    same_ground(u, v)?;
    let n = u.n();
    if n < 3 {
        return Err(Error::Precondition("chains need n >= 3".into()));
    }
    if w.n() != Some(n) {
        return Err(Error::Precondition("collection and sets live on different ground sets".into()));
    }
    if !u.is_subset_of(v) || v.contains(1) || v.contains(n) {
        return Err(Error::Precondition("need U ⊆ V ⊆ [2, n-1]".into()));
    }
    if let Some((a, b)) = w.first_conflict(Relation::Chord) {
        return Err(Error::NotSeparated(a.to_string(), b.to_string()));
    }
    let full = Collection::from_sorted(all_subsets(n)?);
    if let Some(x) = w.first_extension(&full, Relation::Chord) {
        return Err(Error::NotMaximal(x.to_string()));
    }
    let first = Subset::from_elements([1], n)?;
    let last = Subset::from_elements([n], n)?;
    let qualifies = |s: Subset| [s, s | first, s | last, s | first | last].iter().all(|&x| w.contains(x));
    for end in [u, v] {
        if !qualifies(end) {
            return Err(Error::Precondition(format!("the four sets around {{{end}}} are not all in W")));
        }
    }
    let mut chain = vec![u];
    if extend_chain(&mut chain, v, &qualifies) {
        Ok(chain)
    } else {
        Err(Error::ChainAbsent(format!("from {{{u}}} to {{{v}}}")))
    }
}

fn extend_chain(chain: &mut Vec<Subset>, v: Subset, qualifies: &impl Fn(Subset) -> bool) -> bool {
    let last = *chain.last().unwrap();
    if last == v {
        return true;
    }
    for x in (v - last).elements() {
        let next = last.with(x);
        if qualifies(next) {
            chain.push(next);
            if extend_chain(chain, v, qualifies) {
                return true;
            }
            chain.pop();
        }
    }
    false
}
