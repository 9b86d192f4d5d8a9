//! Filtered permutation groups, their saturation, and classification.
//!
//! A *filtered group* is a family `G = (G_k)` with each `G_k` a subgroup of
//! the symmetric group on `k` strings, compatible with the diagrammatic
//! operations: concatenation of permutations, removal of an outer vertical
//! string, and removal of a pair of neighboring strings mapped to neighboring
//! positions. This module computes truncations `(G_k)_{k ≤ k_max}` of the
//! filtered group generated by a set of permutations, by a deterministic
//! worklist saturation, and classifies the result against the three reference
//! families:
//!
//! * **trivial** — only identities,
//! * **star** — the balanced permutations (every string joins positions of
//!   opposite parity),
//! * **full** — all permutations.
//!
//! Two further computations live here because they share the permutation
//! machinery: the sign predicates that cut groups out of coarsening signatures
//! (recovering the trivial and star families by a second, independent route),
//! the 3×3 sphere parametrization table assembled from those predicates, and
//! the correspondence between affine and projective categories of pairings.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::partitions::{
    enumerate_pairings_shape, enumerate_set_partitions, PairingFamily, Partition,
};

/// Default saturation horizon. The classification dichotomy is verified on
/// truncations only; pushing the horizon past 7 makes full levels (`7! =
/// 5040` elements and up) dominate the worklist for no extra discriminating
/// power, so larger requests are rejected rather than silently truncated.
pub const DEFAULT_K_MAX: usize = 7;

const MAX_STRINGS: usize = DEFAULT_K_MAX;

// ---------------------------------------------------------------------------
// permutations
// ---------------------------------------------------------------------------

/// A permutation of `{1, …, k}`, stored as 0-based images.
///
/// `images[t]` is the 0-based image of the 0-based point `t`. All public
/// constructors and accessors speak 1-based, matching the text form
/// `(3,2,1)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    /// The identity on `k` strings.
    pub fn identity(k: usize) -> Permutation {
        Permutation {
            images: (0..k as u8).collect(),
        }
    }

    /// The order-reversing permutation `t ↦ k + 1 - t`.
    pub fn reversal(k: usize) -> Permutation {
        Permutation {
            images: (0..k as u8).rev().collect(),
        }
    }

    /// Builds a permutation from its 1-based image list.
    pub fn from_images(one_based: &[usize]) -> Result<Permutation> {
        let k = one_based.len();
        if k == 0 {
            return Err(Error::Invalid("empty permutation".into()));
        }
        if k > u8::MAX as usize {
            return Err(Error::KBound {
                k,
                bound: u8::MAX as usize,
            });
        }
        let mut seen = vec![false; k];
        let mut images = Vec::with_capacity(k);
        for &v in one_based {
            if v == 0 || v > k || seen[v - 1] {
                return Err(Error::Invalid(format!(
                    "images {one_based:?} are not a permutation of 1..={k}"
                )));
            }
            seen[v - 1] = true;
            images.push((v - 1) as u8);
        }
        Ok(Permutation { images })
    }

    /// Number of strings.
    pub fn size(&self) -> usize {
        self.images.len()
    }

    /// 1-based image of the 1-based point `t`.
    pub fn image(&self, t: usize) -> usize {
        self.images[t - 1] as usize + 1
    }

    /// 1-based image list.
    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&v| v as usize + 1).collect()
    }

    /// Composition `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.size() != other.size() {
            return Err(Error::LengthMismatch {
                want: self.size(),
                got: other.size(),
            });
        }
        Ok(self.product(other))
    }

    fn product(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.size(), other.size());
        Permutation {
            images: other.images.iter().map(|&v| self.images[v as usize]).collect(),
        }
    }

    /// Group inverse.
    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u8; self.images.len()];
        for (t, &v) in self.images.iter().enumerate() {
            images[v as usize] = t as u8;
        }
        Permutation { images }
    }

    /// Block concatenation: `self` acts on the first `self.size()` strings,
    /// `other` on the rest.
    pub fn concat(&self, other: &Permutation) -> Permutation {
        let k = self.images.len() as u8;
        let mut images = self.images.clone();
        images.extend(other.images.iter().map(|&v| v + k));
        Permutation { images }
    }

    /// Sign of the permutation: parity of the inversion count.
    pub fn sign(&self) -> i32 {
        let mut inversions = 0usize;
        for i in 0..self.images.len() {
            for j in i + 1..self.images.len() {
                if self.images[i] > self.images[j] {
                    inversions += 1;
                }
            }
        }
        if inversions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Whether every point is mapped to a point of the same parity, i.e.
    /// every string of the diagram joins positions of opposite parity once
    /// the two rows are read around the boundary.
    pub fn is_balanced(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(t, &v)| t % 2 == v as usize % 2)
    }

    /// The two-row pairing diagram of the permutation (upper point `t` joined
    /// to lower point `σ(t)`).
    pub fn diagram(&self) -> Partition {
        let images: Vec<usize> = self.images.iter().map(|&v| v as usize).collect();
        Partition::from_permutation(&images).expect("valid by construction")
    }

    /// All permutations of `{1, …, k}` in lexicographic image order.
    pub fn all(k: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut images = Vec::with_capacity(k);
        let mut used = vec![false; k];
        fn rec(k: usize, images: &mut Vec<u8>, used: &mut [bool], out: &mut Vec<Permutation>) {
            if images.len() == k {
                out.push(Permutation {
                    images: images.clone(),
                });
                return;
            }
            for v in 0..k {
                if !used[v] {
                    used[v] = true;
                    images.push(v as u8);
                    rec(k, images, used, out);
                    images.pop();
                    used[v] = false;
                }
            }
        }
        rec(k, &mut images, &mut used, &mut out);
        out
    }

}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (t, &v) in self.images.iter().enumerate() {
            if t > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", v as usize + 1)?;
        }
        write!(f, ")")
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Parses `(3,2,1)` or `3,2,1`.
    fn from_str(s: &str) -> Result<Permutation> {
        let body = s
            .trim()
            .trim_start_matches('(')
            .trim_end_matches(')')
            .trim();
        if body.is_empty() {
            return Err(Error::Invalid("empty permutation".into()));
        }
        let images = body
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Invalid(format!("bad image `{tok}` in `{s}`")))
            })
            .collect::<Result<Vec<usize>>>()?;
        Permutation::from_images(&images)
    }
}

/// Parses a generator list in the compact text form
/// `"3:(3,2,1);5:(2,1,3,4,5)"`; the numeric prefix states the number of
/// strings and must match the image list.
pub fn parse_generators(spec: &str) -> Result<Vec<Permutation>> {
    let mut out = Vec::new();
    for entry in spec.split(';') {
        let entry = entry.trim();
        if entry.is_empty() {
            continue;
        }
        let perm = match entry.split_once(':') {
            Some((prefix, body)) => {
                let k: usize = prefix.trim().parse().map_err(|_| {
                    Error::Invalid(format!("bad string count `{prefix}` in `{entry}`"))
                })?;
                let perm: Permutation = body.parse()?;
                if perm.size() != k {
                    return Err(Error::Invalid(format!(
                        "`{entry}` declares {k} strings but lists {}",
                        perm.size()
                    )));
                }
                perm
            }
            None => entry.parse()?,
        };
        out.push(perm);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// saturation
// ---------------------------------------------------------------------------

/// How many new elements each closure rule contributed during saturation.
///
/// A rule is credited only when its output was not already present, so the
/// totals sum to the number of non-seed elements discovered.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct RuleStats {
    /// Group inverses within one level.
    pub inverses: u64,
    /// Products of two same-level elements (both orders).
    pub products: u64,
    /// Block concatenations (both orders); concatenating with a seeded
    /// identity realizes padding by vertical strings.
    pub concatenations: u64,
    /// Removals of an outer vertical string (`σ(1) = 1` or `σ(k) = k`).
    pub outer_removals: u64,
    /// Removals of a neighboring pair of strings mapped to neighboring
    /// positions, in either orientation.
    pub neighbor_removals: u64,
}

impl RuleStats {
    /// Total number of elements discovered by closure rules.
    pub fn total(&self) -> u64 {
        self.inverses + self.products + self.concatenations + self.outer_removals
            + self.neighbor_removals
    }
}

/// A truncation `(G_k)_{1 ≤ k ≤ k_max}` of a filtered permutation group.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FilteredTruncation {
    levels: Vec<BTreeSet<Permutation>>,
}

impl FilteredTruncation {
    fn from_levels(levels: Vec<BTreeSet<Permutation>>) -> FilteredTruncation {
        FilteredTruncation { levels }
    }

    /// Truncation horizon.
    pub fn k_max(&self) -> usize {
        self.levels.len()
    }

    /// The level group on `k` strings, `1 ≤ k ≤ k_max`.
    pub fn level(&self, k: usize) -> &BTreeSet<Permutation> {
        &self.levels[k - 1]
    }

    /// Order of the level group on `k` strings.
    pub fn order(&self, k: usize) -> usize {
        self.levels[k - 1].len()
    }

    /// Whether the permutation belongs to its level (false above the
    /// horizon).
    pub fn contains(&self, p: &Permutation) -> bool {
        p.size() >= 1
            && p.size() <= self.levels.len()
            && self.levels[p.size() - 1].contains(p)
    }
}

/// Result of a saturation run: the closed truncation plus rule statistics.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Saturation {
    pub truncation: FilteredTruncation,
    pub stats: RuleStats,
}

/// Computes the least filtered-group truncation containing the generators.
///
/// The closure rules are: products and inverses within each level,
/// concatenation across levels (which, against the seeded identities,
/// includes padding by vertical strings), removal of an outer vertical
/// string, and removal of a neighboring pair of strings mapped to neighboring
/// positions in either orientation. Identities are seeded at every level, so
/// each level is a genuine subgroup.
///
/// The worklist is FIFO, partners are drawn in insertion order, and nothing
/// depends on hash iteration, so the run is deterministic: equal inputs give
/// equal truncations *and* equal rule statistics. After the queue drains, one
/// idle sweep re-applies every rule to every element and errors if anything
/// new appears, so the returned truncation is verifiably closed.
pub fn saturate(generators: &[Permutation], k_max: usize) -> Result<Saturation> {
    if k_max == 0 || k_max > MAX_STRINGS {
        return Err(Error::KBound {
            k: k_max,
            bound: MAX_STRINGS,
        });
    }
    for g in generators {
        if g.size() == 0 {
            return Err(Error::Invalid("empty permutation".into()));
        }
        if g.size() > k_max {
            return Err(Error::KBound {
                k: g.size(),
                bound: k_max,
            });
        }
    }

    let mut state = Saturator::new(k_max);
    for k in 1..=k_max {
        state.seed(Word::identity(k));
    }
    for g in generators {
        state.seed(Word::from_perm(g));
    }
    while let Some(p) = state.queue.pop_front() {
        state.expand(p);
    }

    // Idle sweep: the fixed point must survive one full re-application of
    // every rule to every element. `expand` inserts anything genuinely new,
    // so closure holds exactly when the level sizes stay put.
    let sizes: Vec<usize> = state.lists.iter().map(Vec::len).collect();
    for level in 0..k_max {
        for i in 0..state.lists[level].len() {
            let p = state.lists[level][i];
            state.expand(p);
        }
    }
    if sizes != state.lists.iter().map(Vec::len).collect::<Vec<_>>() {
        return Err(Error::Invalid(
            "saturation sweep found an element outside the fixed point".into(),
        ));
    }

    let levels = state
        .lists
        .iter()
        .map(|list| list.iter().map(Word::to_perm).collect())
        .collect();
    Ok(Saturation {
        truncation: FilteredTruncation::from_levels(levels),
        stats: state.stats,
    })
}

/// A permutation word small enough for the saturation horizon, packed into a
/// fixed byte array so the worklist runs allocation-free. The trailing bytes
/// are always zero, so the array doubles as an exact hash key.
#[derive(Clone, Copy)]
struct Word {
    len: u8,
    buf: [u8; 8],
}

impl Word {
    fn identity(k: usize) -> Word {
        let mut buf = [0u8; 8];
        for (t, slot) in buf.iter_mut().enumerate().take(k) {
            *slot = t as u8;
        }
        Word { len: k as u8, buf }
    }

    fn from_perm(p: &Permutation) -> Word {
        debug_assert!(p.size() <= MAX_STRINGS);
        let mut buf = [0u8; 8];
        buf[..p.size()].copy_from_slice(&p.images);
        Word {
            len: p.size() as u8,
            buf,
        }
    }

    fn to_perm(&self) -> Permutation {
        Permutation {
            images: self.buf[..self.len as usize].to_vec(),
        }
    }

    fn key(self) -> u64 {
        u64::from_le_bytes(self.buf)
    }

    /// `self ∘ other` (apply `other` first).
    fn product(self, other: Word) -> Word {
        debug_assert_eq!(self.len, other.len);
        let mut buf = [0u8; 8];
        for t in 0..self.len as usize {
            buf[t] = self.buf[other.buf[t] as usize];
        }
        Word { len: self.len, buf }
    }

    fn inverse(self) -> Word {
        let mut buf = [0u8; 8];
        for t in 0..self.len as usize {
            buf[self.buf[t] as usize] = t as u8;
        }
        Word { len: self.len, buf }
    }

    fn concat(self, other: Word) -> Word {
        debug_assert!((self.len + other.len) as usize <= MAX_STRINGS);
        let mut buf = self.buf;
        for t in 0..other.len as usize {
            buf[self.len as usize + t] = other.buf[t] + self.len;
        }
        Word {
            len: self.len + other.len,
            buf,
        }
    }

    fn strip_first(self) -> Word {
        debug_assert_eq!(self.buf[0], 0);
        let mut buf = [0u8; 8];
        for t in 1..self.len as usize {
            buf[t - 1] = self.buf[t] - 1;
        }
        Word {
            len: self.len - 1,
            buf,
        }
    }

    fn strip_last(self) -> Word {
        debug_assert_eq!(self.buf[self.len as usize - 1] + 1, self.len);
        let mut buf = self.buf;
        buf[self.len as usize - 1] = 0;
        Word {
            len: self.len - 1,
            buf,
        }
    }

    fn remove_neighbor_pair(self, t: usize) -> Word {
        let a = self.buf[t];
        let b = self.buf[t + 1];
        debug_assert_eq!(a.abs_diff(b), 1);
        let lo = a.min(b);
        let mut buf = [0u8; 8];
        let mut out = 0usize;
        for s in 0..self.len as usize {
            if s == t || s == t + 1 {
                continue;
            }
            let v = self.buf[s];
            buf[out] = if v > lo { v - 2 } else { v };
            out += 1;
        }
        Word {
            len: self.len - 2,
            buf,
        }
    }
}

#[derive(Clone, Copy)]
enum Rule {
    Inverse,
    Product,
    Concatenation,
    OuterRemoval,
    NeighborRemoval,
}

impl Rule {
    fn slot(self, stats: &mut RuleStats) -> &mut u64 {
        match self {
            Rule::Inverse => &mut stats.inverses,
            Rule::Product => &mut stats.products,
            Rule::Concatenation => &mut stats.concatenations,
            Rule::OuterRemoval => &mut stats.outer_removals,
            Rule::NeighborRemoval => &mut stats.neighbor_removals,
        }
    }
}

/// Worklist state: per-level membership sets keyed by the packed word, plus
/// insertion-ordered lists that drive all pairing iteration (hash order never
/// leaks into the result).
struct Saturator {
    k_max: usize,
    sets: Vec<std::collections::HashSet<u64>>,
    lists: Vec<Vec<Word>>,
    queue: VecDeque<Word>,
    stats: RuleStats,
}

impl Saturator {
    fn new(k_max: usize) -> Saturator {
        Saturator {
            k_max,
            sets: vec![std::collections::HashSet::new(); k_max],
            lists: vec![Vec::new(); k_max],
            queue: VecDeque::new(),
            stats: RuleStats::default(),
        }
    }

    fn seed(&mut self, w: Word) {
        if self.sets[w.len as usize - 1].insert(w.key()) {
            self.lists[w.len as usize - 1].push(w);
            self.queue.push_back(w);
        }
    }

    fn add(&mut self, w: Word, rule: Rule) {
        if self.sets[w.len as usize - 1].insert(w.key()) {
            self.lists[w.len as usize - 1].push(w);
            self.queue.push_back(w);
            *rule.slot(&mut self.stats) += 1;
        }
    }

    /// Applies every closure rule to `p` against the current levels. Pairing
    /// `p` with everything already present covers every pair eventually: when
    /// the later of two elements is popped, the earlier one is already listed.
    fn expand(&mut self, p: Word) {
        let k = p.len as usize;
        self.add(p.inverse(), Rule::Inverse);
        let n = self.lists[k - 1].len();
        for qi in 0..n {
            let q = self.lists[k - 1][qi];
            self.add(p.product(q), Rule::Product);
            self.add(q.product(p), Rule::Product);
        }
        for l in 1..=self.k_max - k {
            let n = self.lists[l - 1].len();
            for qi in 0..n {
                let q = self.lists[l - 1][qi];
                self.add(p.concat(q), Rule::Concatenation);
                self.add(q.concat(p), Rule::Concatenation);
            }
        }
        if k >= 2 {
            if p.buf[0] == 0 {
                self.add(p.strip_first(), Rule::OuterRemoval);
            }
            if p.buf[k - 1] as usize == k - 1 {
                self.add(p.strip_last(), Rule::OuterRemoval);
            }
        }
        if k >= 3 {
            for t in 0..k - 1 {
                if p.buf[t].abs_diff(p.buf[t + 1]) == 1 {
                    self.add(p.remove_neighbor_pair(t), Rule::NeighborRemoval);
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// classification
// ---------------------------------------------------------------------------

/// The label of a filtered-group truncation relative to the three reference
/// families. `Unknown` is returned whenever the levels match none of them
/// uniformly; the classification never extrapolates past the horizon.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GroupLabel {
    Trivial,
    Star,
    Full,
    Unknown,
}

impl GroupLabel {
    pub fn name(self) -> &'static str {
        match self {
            GroupLabel::Trivial => "trivial",
            GroupLabel::Star => "star",
            GroupLabel::Full => "full",
            GroupLabel::Unknown => "unknown",
        }
    }
}

impl fmt::Display for GroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The balanced permutations of `{1, …, k}`.
pub fn star_set(k: usize) -> BTreeSet<Permutation> {
    Permutation::all(k)
        .into_iter()
        .filter(Permutation::is_balanced)
        .collect()
}

/// Order of the balanced subgroup: `⌊k/2⌋! · ⌈k/2⌉!` (odd points permute
/// among odd points, even among even).
pub fn star_group_order(k: usize) -> u64 {
    let fact = |n: usize| (1..=n as u64).product::<u64>();
    fact(k / 2) * fact(k - k / 2)
}

/// Compares the truncation levelwise against the three reference families.
/// Matching is required at every level `2 ≤ k ≤ k_max` (level 1 is always
/// trivial); the trivial label is tested first since at `k = 2` the balanced
/// subgroup is itself trivial.
pub fn classify(t: &FilteredTruncation) -> GroupLabel {
    if t.k_max() < 2 {
        return GroupLabel::Unknown;
    }
    let matches = |expected: &dyn Fn(usize) -> BTreeSet<Permutation>| {
        (2..=t.k_max()).all(|k| *t.level(k) == expected(k))
    };
    if matches(&|k| BTreeSet::from([Permutation::identity(k)])) {
        GroupLabel::Trivial
    } else if matches(&star_set) {
        GroupLabel::Star
    } else if matches(&|k| Permutation::all(k).into_iter().collect()) {
        GroupLabel::Full
    } else {
        GroupLabel::Unknown
    }
}

// ---------------------------------------------------------------------------
// sign predicates
// ---------------------------------------------------------------------------

/// The sign a permutation forces between a word and its reordering: the
/// crossing signature of the kernel of the two-row array with `i_1 … i_k`
/// on top and `i_{σ(1)} … i_{σ(k)}` below.
pub fn twisted_relation_sign(sigma: &Permutation, indices: &[u32]) -> Result<i32> {
    let k = sigma.size();
    if indices.len() != k {
        return Err(Error::LengthMismatch {
            want: k,
            got: indices.len(),
        });
    }
    let mut values = Vec::with_capacity(2 * k);
    values.extend_from_slice(indices);
    values.extend(sigma.images.iter().map(|&v| indices[v as usize]));
    Partition::kernel(k, k, &values)?.signature()
}

/// Which coarsenings of a permutation diagram a sign predicate ranges over.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CoarseningMode {
    /// Every merge of the strings (including the diagram itself).
    AllCoarsenings,
    /// Only merges into exactly two blocks of strings.
    PairCoarsenings,
}

/// The permutations whose diagram has crossing signature `+1` on every
/// admissible coarsening of its strings.
///
/// With all coarsenings admitted only the identity survives; restricted to
/// two-block coarsenings exactly the balanced permutations survive. These are
/// the index-kernel computations behind [`twisted_relation_sign`] folded over
/// all index tuples: tuples with the same kernel give the same sign, and
/// kernels of tuples are exactly string coarsenings.
pub fn group_from_sign_predicate(
    mode: CoarseningMode,
    k: usize,
) -> Result<BTreeSet<Permutation>> {
    if k == 0 || k > MAX_STRINGS {
        return Err(Error::KBound {
            k,
            bound: MAX_STRINGS,
        });
    }
    let groupings = enumerate_set_partitions(k);
    let mut out = BTreeSet::new();
    'sigma: for sigma in Permutation::all(k) {
        let diagram = sigma.diagram();
        for grouping in &groupings {
            if mode == CoarseningMode::PairCoarsenings
                && grouping.iter().max().copied() != Some(1)
            {
                continue;
            }
            let labels: Vec<usize> = (0..2 * k)
                .map(|leg| grouping[diagram.block_index_of_leg(leg)])
                .collect();
            let merged = Partition::from_raw_labels(k, k, &labels);
            if merged.signature()? != 1 {
                continue 'sigma;
            }
        }
        out.insert(sigma);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// the nine-sphere table
// ---------------------------------------------------------------------------

/// One cell of the 3×3 sphere parametrization table.
///
/// Each sphere is parametrized by a pair of filtered groups: the reorderings
/// its coordinates satisfy plainly (`G`, constant along columns) and the
/// reorderings they satisfy up to the crossing sign (`H`, constant along
/// rows). `expected` is the reference grid; `computed` is assembled from
/// saturations and sign predicates.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SphereTableEntry {
    pub name: &'static str,
    /// (row, column) in the table, both 0-based; columns run full → star →
    /// trivial in `G`, rows trivial → star → full in `H`.
    pub grid: (usize, usize),
    /// (G-label, H-label) from the reference grid.
    pub expected: (GroupLabel, GroupLabel),
    /// (G-label, H-label) recomputed from saturations and sign predicates.
    pub computed: (GroupLabel, GroupLabel),
}

const SPHERE_NAMES: [[&str; 3]; 3] = [
    ["classical", "half-liberated", "free"],
    [
        "two-coordinate classical",
        "two-coordinate half-liberated",
        "twisted half-liberated",
    ],
    [
        "one-coordinate classical",
        "two-coordinate twisted classical",
        "twisted classical",
    ],
];

/// Builds the 3×3 sphere table at the given horizon (3 ≤ k_max ≤ 5) and
/// recomputes every `(G, H)` pair.
///
/// Each column's `G` is computed twice — for the top sphere by saturating its
/// defining reversal relation, for the bottom sphere by the matching sign
/// predicate — and the two routes must agree (the middle cell is then pinned
/// by the inclusions between the spheres). Rows are handled symmetrically for
/// `H`, with the saturations on the twisted side. The one-coordinate sphere
/// is degenerate: every monomial touching two distinct indices vanishes on
/// it, so both of its groups are full with nothing to compute.
pub fn nine_sphere_table(k_max: usize) -> Result<Vec<SphereTableEntry>> {
    if !(3..=5).contains(&k_max) {
        return Err(Error::KBound { k: k_max, bound: 5 });
    }

    let closure_label = |generators: &[Permutation]| -> Result<GroupLabel> {
        Ok(classify(&saturate(generators, k_max)?.truncation))
    };
    let predicate_label = |mode: CoarseningMode| -> Result<GroupLabel> {
        let levels = (1..=k_max)
            .map(|k| group_from_sign_predicate(mode, k))
            .collect::<Result<Vec<_>>>()?;
        Ok(classify(&FilteredTruncation::from_levels(levels)))
    };

    let full = closure_label(&[Permutation::reversal(2)])?;
    let star = closure_label(&[Permutation::reversal(3)])?;
    let trivial = closure_label(&[])?;
    let pred_all = predicate_label(CoarseningMode::AllCoarsenings)?;
    let pred_pair = predicate_label(CoarseningMode::PairCoarsenings)?;

    let agree = |a: GroupLabel, b: GroupLabel| if a == b { a } else { GroupLabel::Unknown };

    // G per column: top sphere by saturation, bottom sphere by predicate
    // (left column's bottom sphere is the degenerate one).
    let g_cols = [
        agree(full, GroupLabel::Full),
        agree(star, pred_pair),
        agree(trivial, pred_all),
    ];
    // H per row: left sphere by predicate, right sphere by saturation.
    let h_rows = [
        agree(pred_all, trivial),
        agree(pred_pair, star),
        agree(GroupLabel::Full, full),
    ];

    let expected_g = [GroupLabel::Full, GroupLabel::Star, GroupLabel::Trivial];
    let expected_h = [GroupLabel::Trivial, GroupLabel::Star, GroupLabel::Full];

    let mut table = Vec::with_capacity(9);
    for row in 0..3 {
        for col in 0..3 {
            table.push(SphereTableEntry {
                name: SPHERE_NAMES[row][col],
                grid: (row, col),
                expected: (expected_g[col], expected_h[row]),
                computed: (g_cols[col], h_rows[row]),
            });
        }
    }
    Ok(table)
}

// ---------------------------------------------------------------------------
// affine ↔ projective correspondence
// ---------------------------------------------------------------------------

/// A category of pairings truncated by shape: for each `(upper, lower)` key
/// the sorted list of member diagrams. On the projective side the key `(k,
/// l)` holds diagrams with `2k` upper and `2l` lower legs.
pub type CategoryTruncation = BTreeMap<(usize, usize), Vec<Partition>>;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CorrespondenceDirection {
    AffineToProjective,
    ProjectiveToAffine,
}

/// Translates between affine and projective categories of pairings.
///
/// Affine → projective reads the even-even shapes: the projective level
/// `(k, l)` is the affine level `(2k, 2l)`. Projective → affine restores the
/// even shapes directly and reconstructs each odd shape `(k, l)` as the set
/// of pairings `σ` such that `id₁ ⊗ σ` belongs to the projective level of
/// shape `(k+1, l+1)`. Shapes whose source level is missing from the
/// truncation are skipped; `max_points` bounds the total legs of the emitted
/// diagrams.
pub fn projective_correspondence(
    direction: CorrespondenceDirection,
    t: &CategoryTruncation,
    max_points: usize,
) -> CategoryTruncation {
    let mut out = CategoryTruncation::new();
    match direction {
        CorrespondenceDirection::AffineToProjective => {
            for (&(k, l), members) in t {
                if k % 2 == 0 && l % 2 == 0 && k + l <= max_points {
                    let mut sorted = members.clone();
                    sorted.sort();
                    out.insert((k / 2, l / 2), sorted);
                }
            }
        }
        CorrespondenceDirection::ProjectiveToAffine => {
            for k in 0..=max_points {
                for l in 0..=max_points.saturating_sub(k) {
                    if (k + l) % 2 != 0 {
                        continue;
                    }
                    if k % 2 == 0 {
                        if let Some(members) = t.get(&(k / 2, l / 2)) {
                            let mut sorted = members.clone();
                            sorted.sort();
                            out.insert((k, l), sorted);
                        }
                    } else if let Some(up) = t.get(&((k + 1) / 2, (l + 1) / 2)) {
                        let up: BTreeSet<&Partition> = up.iter().collect();
                        let bar = Partition::identity(1);
                        let mut members: Vec<Partition> =
                            enumerate_pairings_shape(k, l, PairingFamily::Classical)
                                .into_iter()
                                .filter(|sigma| up.contains(&bar.tensor(sigma)))
                                .collect();
                        members.sort();
                        out.insert((k, l), members);
                    }
                }
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
