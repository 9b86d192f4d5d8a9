//! Two-row partitions and pairings.
//!
//! A `Partition` has `k` upper legs and `l` lower legs, partitioned into
//! blocks. Legs carry global indices in *diagram order*: upper row left to
//! right (`0..k`), then lower row left to right (`k..k+l`). The printable
//! form uses the same order, 1-based: `k,l:[b1|b2|...]`.
//!
//! Many operations depend on the *linearization* of the diagram: legs read
//! counterclockwise starting from the bottom-left corner, i.e. the lower row
//! left to right followed by the upper row right to left. Crossings, the
//! signature, cyclic colourings and cap positions are all taken in this
//! order. Blocks are numbered canonically by first occurrence along the
//! linearization, which makes structural equality of the `block_of` table
//! equality of partitions.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Which row a leg sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Row {
    Upper,
    Lower,
}

/// A leg identified by row and 1-based position within that row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Leg {
    pub row: Row,
    pub position: usize,
}

/// The three pairing families: all pairings, balanced pairings (each string
/// joins legs of opposite colour in the alternating cyclic colouring), and
/// noncrossing pairings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PairingFamily {
    Classical,
    Half,
    Free,
}

impl PairingFamily {
    pub const ALL: [PairingFamily; 3] = [
        PairingFamily::Classical,
        PairingFamily::Half,
        PairingFamily::Free,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PairingFamily::Classical => "classical",
            PairingFamily::Half => "half",
            PairingFamily::Free => "free",
        }
    }

    /// Family membership for an arbitrary two-row partition: it must be a
    /// pairing, and satisfy the family's balance / planarity constraint.
    pub fn contains(self, p: &Partition) -> bool {
        if !p.is_pairing() {
            return false;
        }
        match self {
            PairingFamily::Classical => true,
            PairingFamily::Half => p.is_balanced(),
            PairingFamily::Free => p.is_noncrossing(),
        }
    }
}

impl fmt::Display for PairingFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PairingFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classical" => Ok(PairingFamily::Classical),
            "half" => Ok(PairingFamily::Half),
            "free" => Ok(PairingFamily::Free),
            other => Err(Error::Invalid(format!(
                "unknown family `{other}` (expected classical, half or free)"
            ))),
        }
    }
}

/// A partition of `k` upper and `l` lower legs.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Partition {
    upper: usize,
    lower: usize,
    /// Block index per leg (diagram order); block indices are canonical:
    /// numbered by first occurrence along the linearization.
    block_of: Vec<u8>,
}

impl Partition {
    // ----- constructors ---------------------------------------------------

    /// Builds a partition from raw block labels in diagram order; labels may
    /// be arbitrary, they are renumbered canonically.
    pub(crate) fn from_raw_labels(upper: usize, lower: usize, labels: &[usize]) -> Partition {
        debug_assert_eq!(labels.len(), upper + lower);
        let mut canon: HashMap<usize, u8> = HashMap::new();
        let mut block_of = vec![0u8; labels.len()];
        for &leg in linearization_order(upper, lower).iter() {
            let next = canon.len() as u8;
            let id = *canon.entry(labels[leg]).or_insert(next);
            block_of[leg] = id;
        }
        Partition {
            upper,
            lower,
            block_of,
        }
    }

    /// Builds a partition from explicit blocks of 1-based global leg numbers
    /// (upper row `1..=k`, then lower row `k+1..=k+l`). The blocks must
    /// partition `1..=k+l` exactly.
    pub fn from_blocks(upper: usize, lower: usize, blocks: &[Vec<usize>]) -> Result<Partition> {
        let n = upper + lower;
        let mut labels = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::Invalid("empty block".into()));
            }
            for &leg in block {
                if leg == 0 || leg > n {
                    return Err(Error::LegOutOfRange(leg));
                }
                if labels[leg - 1] != usize::MAX {
                    return Err(Error::Invalid(format!("leg {leg} listed twice")));
                }
                labels[leg - 1] = b;
            }
        }
        if labels.iter().any(|&x| x == usize::MAX) {
            return Err(Error::Invalid("blocks do not cover all legs".into()));
        }
        Ok(Partition::from_raw_labels(upper, lower, &labels))
    }

    /// The empty partition (no legs at all).
    pub fn empty() -> Partition {
        Partition {
            upper: 0,
            lower: 0,
            block_of: Vec::new(),
        }
    }

    /// The semicircle `∩`: no upper legs, two lower legs joined.
    pub fn semicircle() -> Partition {
        Partition {
            upper: 0,
            lower: 2,
            block_of: vec![0, 0],
        }
    }

    /// `n` vertical strings: the identity diagram in `P(n, n)`.
    pub fn identity(n: usize) -> Partition {
        let labels: Vec<usize> = (0..n).chain(0..n).collect();
        Partition::from_raw_labels(n, n, &labels)
    }

    /// The diagram of a permutation acting downwards: upper leg `t` is joined
    /// to lower leg `images[t]` (0-based images).
    pub fn from_permutation(images: &[usize]) -> Result<Partition> {
        let k = images.len();
        let mut seen = vec![false; k];
        for &im in images {
            if im >= k || seen[im] {
                return Err(Error::Invalid("images are not a permutation".into()));
            }
            seen[im] = true;
        }
        let mut labels = vec![0usize; 2 * k];
        for (t, &im) in images.iter().enumerate() {
            labels[t] = t;
            labels[k + im] = t;
        }
        Ok(Partition::from_raw_labels(k, k, &labels))
    }

    /// One-row pairing from a partner array (`partner[i]` = 0-based index
    /// paired with `i`); all legs on the lower row.
    pub fn from_partner_array(partner: &[usize]) -> Result<Partition> {
        let n = partner.len();
        for (i, &p) in partner.iter().enumerate() {
            if p >= n || p == i || partner[p] != i {
                return Err(Error::Invalid("not a valid partner array".into()));
            }
        }
        let mut labels = vec![usize::MAX; n];
        let mut next = 0;
        for i in 0..n {
            if labels[i] == usize::MAX {
                labels[i] = next;
                labels[partner[i]] = next;
                next += 1;
            }
        }
        Ok(Partition::from_raw_labels(0, n, &labels))
    }

    /// The kernel of an index tuple on a `(k, l)` diagram: legs carrying
    /// equal values are joined. Values are read in diagram order.
    pub fn kernel(upper: usize, lower: usize, values: &[u32]) -> Result<Partition> {
        if values.len() != upper + lower {
            return Err(Error::LengthMismatch {
                want: upper + lower,
                got: values.len(),
            });
        }
        let mut first: HashMap<u32, usize> = HashMap::new();
        let mut labels = vec![0usize; values.len()];
        for (i, &v) in values.iter().enumerate() {
            let next = first.len();
            labels[i] = *first.entry(v).or_insert(next);
        }
        Ok(Partition::from_raw_labels(upper, lower, &labels))
    }

    // ----- basic accessors ------------------------------------------------

    pub fn upper_count(&self) -> usize {
        self.upper
    }

    pub fn lower_count(&self) -> usize {
        self.lower
    }

    pub fn total_legs(&self) -> usize {
        self.upper + self.lower
    }

    pub fn block_count(&self) -> usize {
        self.block_of.iter().map(|&b| b as usize + 1).max().unwrap_or(0)
    }

    pub(crate) fn block_index_of_leg(&self, leg: usize) -> usize {
        self.block_of[leg] as usize
    }

    /// Blocks in canonical order; each block lists 0-based global leg ids in
    /// increasing order.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.block_count()];
        for (leg, &b) in self.block_of.iter().enumerate() {
            out[b as usize].push(leg);
        }
        out
    }

    /// Blocks as [`Leg`] values (row + 1-based position).
    pub fn leg_blocks(&self) -> Vec<Vec<Leg>> {
        self.blocks()
            .into_iter()
            .map(|block| block.into_iter().map(|g| self.leg_of(g)).collect())
            .collect()
    }

    fn leg_of(&self, global: usize) -> Leg {
        if global < self.upper {
            Leg {
                row: Row::Upper,
                position: global + 1,
            }
        } else {
            Leg {
                row: Row::Lower,
                position: global - self.upper + 1,
            }
        }
    }

    /// Global leg ids in linearization order (lower row left to right, then
    /// upper row right to left).
    pub fn linearization(&self) -> Vec<usize> {
        linearization_order(self.upper, self.lower)
    }

    // ----- predicates -------------------------------------------------------

    pub fn is_pairing(&self) -> bool {
        let mut sizes = vec![0usize; self.block_count()];
        for &b in &self.block_of {
            sizes[b as usize] += 1;
        }
        sizes.iter().all(|&s| s == 2)
    }

    pub fn is_even(&self) -> bool {
        let mut sizes = vec![0usize; self.block_count()];
        for &b in &self.block_of {
            sizes[b as usize] += 1;
        }
        sizes.iter().all(|&s| s % 2 == 0)
    }

    /// Noncrossing in the linearization: no two blocks interleave.
    pub fn is_noncrossing(&self) -> bool {
        let mut stack: Vec<u8> = Vec::new();
        let mut remaining = vec![0usize; self.block_count()];
        for &b in &self.block_of {
            remaining[b as usize] += 1;
        }
        let mut open = vec![false; self.block_count()];
        for leg in self.linearization() {
            let b = self.block_of[leg];
            remaining[b as usize] -= 1;
            if open[b as usize] {
                if stack.last() != Some(&b) {
                    return false;
                }
            } else {
                open[b as usize] = true;
                stack.push(b);
            }
            if remaining[b as usize] == 0 {
                // Block complete; it must be on top of the stack.
                if stack.last() != Some(&b) {
                    return false;
                }
                stack.pop();
            }
        }
        true
    }

    /// Balanced pairing: colour the linearization alternately black/white;
    /// every string must join a black leg to a white leg. Only meaningful for
    /// pairings (returns false otherwise).
    pub fn is_balanced(&self) -> bool {
        if !self.is_pairing() {
            return false;
        }
        let mut pos = vec![0usize; self.total_legs()];
        for (p, leg) in self.linearization().into_iter().enumerate() {
            pos[leg] = p;
        }
        for block in self.blocks() {
            if (pos[block[0]] + pos[block[1]]) % 2 == 0 {
                return false;
            }
        }
        true
    }

    // ----- lattice operations ----------------------------------------------

    /// Join of two partitions on the same shape: the finest partition with
    /// both as refinements. Returns the join and its number of blocks.
    pub fn join(&self, other: &Partition) -> Result<(Partition, usize)> {
        if self.upper != other.upper || self.lower != other.lower {
            return Err(Error::ShapeMismatch(format!(
                "join of ({},{}) with ({},{})",
                self.upper, self.lower, other.upper, other.lower
            )));
        }
        let n = self.total_legs();
        let mut uf = UnionFind::new(n);
        for part in [self, other] {
            for block in part.blocks() {
                for w in block.windows(2) {
                    uf.union(w[0], w[1]);
                }
            }
        }
        let labels: Vec<usize> = (0..n).map(|i| uf.find(i)).collect();
        let joined = Partition::from_raw_labels(self.upper, self.lower, &labels);
        let blocks = joined.block_count();
        Ok((joined, blocks))
    }

    /// `self.coarsens(finer)` is true when every block of `finer` is contained
    /// in a block of `self`, i.e. `self` is obtained from `finer` by merging
    /// blocks.
    pub fn coarsens(&self, finer: &Partition) -> Result<bool> {
        if self.upper != finer.upper || self.lower != finer.lower {
            return Err(Error::ShapeMismatch(format!(
                "coarsens of ({},{}) against ({},{})",
                self.upper, self.lower, finer.upper, finer.lower
            )));
        }
        for block in finer.blocks() {
            let target = self.block_of[block[0]];
            if block.iter().any(|&leg| self.block_of[leg] != target) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    // ----- delta symbols and signature --------------------------------------

    /// `δ_π(values) ∈ {0, 1}`: 1 exactly when every block of `π` carries a
    /// constant value, i.e. the kernel of the tuple coarsens `π`.
    pub fn delta(&self, values: &[u32]) -> Result<i32> {
        if values.len() != self.total_legs() {
            return Err(Error::LengthMismatch {
                want: self.total_legs(),
                got: values.len(),
            });
        }
        Ok(if self.delta_holds(values) { 1 } else { 0 })
    }

    #[inline]
    pub(crate) fn delta_holds(&self, values: &[u32]) -> bool {
        // Constant-per-block check without allocating the kernel.
        let mut rep = [u32::MAX; 64];
        debug_assert!(self.block_count() <= 64);
        for (leg, &b) in self.block_of.iter().enumerate() {
            let r = &mut rep[b as usize];
            if *r == u32::MAX {
                *r = values[leg];
            } else if *r != values[leg] {
                return false;
            }
        }
        true
    }

    /// Crossing signature `ε(π) = (−1)^c` of an even partition, computed as
    /// the inversion parity of canonical block indices along the
    /// linearization. On pairings this is the parity of the crossing number;
    /// on permutation diagrams it is the permutation sign.
    pub fn signature(&self) -> Result<i32> {
        if !self.is_even() {
            return Err(Error::OddBlock);
        }
        let lin = self.linearization();
        let seq: Vec<u8> = lin.iter().map(|&leg| self.block_of[leg]).collect();
        let mut inversions = 0usize;
        for i in 0..seq.len() {
            for j in i + 1..seq.len() {
                if seq[i] > seq[j] {
                    inversions += 1;
                }
            }
        }
        Ok(if inversions % 2 == 0 { 1 } else { -1 })
    }

    /// Signed delta symbol `δ̄_π(values) ∈ {−1, 0, +1}`: the signature of the
    /// tuple's kernel when that kernel coarsens `π`, and 0 otherwise.
    pub fn delta_bar(&self, values: &[u32]) -> Result<i32> {
        if values.len() != self.total_legs() {
            return Err(Error::LengthMismatch {
                want: self.total_legs(),
                got: values.len(),
            });
        }
        if !self.is_even() {
            return Err(Error::OddBlock);
        }
        if !self.delta_holds(values) {
            return Ok(0);
        }
        // The kernel coarsens an even partition, so its blocks are unions of
        // even blocks and the signature is defined.
        let ker = Partition::kernel(self.upper, self.lower, values)?;
        ker.signature()
    }

    /// Number of chord crossings of a pairing in the linearization.
    pub fn crossing_count(&self) -> Result<usize> {
        if !self.is_pairing() {
            return Err(Error::Invalid(
                "crossing count is defined for pairings".into(),
            ));
        }
        let mut pos = vec![0usize; self.total_legs()];
        for (p, leg) in self.linearization().into_iter().enumerate() {
            pos[leg] = p;
        }
        let chords: Vec<(usize, usize)> = self
            .blocks()
            .into_iter()
            .map(|b| {
                let (x, y) = (pos[b[0]], pos[b[1]]);
                (x.min(y), x.max(y))
            })
            .collect();
        let mut count = 0;
        for i in 0..chords.len() {
            for j in i + 1..chords.len() {
                let (a1, a2) = chords[i];
                let (b1, b2) = chords[j];
                if (a1 < b1 && b1 < a2 && a2 < b2) || (b1 < a1 && a1 < b2 && b2 < a2) {
                    count += 1;
                }
            }
        }
        Ok(count)
    }

    // ----- categorical operations -------------------------------------------

    /// Horizontal concatenation `[π σ]`.
    pub fn tensor(&self, other: &Partition) -> Partition {
        let upper = self.upper + other.upper;
        let lower = self.lower + other.lower;
        let shift = self.block_count();
        let mut labels = vec![0usize; upper + lower];
        for leg in 0..self.upper {
            labels[leg] = self.block_of[leg] as usize;
        }
        for leg in 0..other.upper {
            labels[self.upper + leg] = shift + other.block_of[leg] as usize;
        }
        for leg in 0..self.lower {
            labels[upper + leg] = self.block_of[self.upper + leg] as usize;
        }
        for leg in 0..other.lower {
            labels[upper + self.lower + leg] = shift + other.block_of[other.upper + leg] as usize;
        }
        Partition::from_raw_labels(upper, lower, &labels)
    }

    /// Vertical composition `self ∘ inner`: `inner : m → k` is stacked above
    /// `self : k → l`; the shared middle row is contracted. Returns the
    /// resulting `m → l` partition together with the number of closed loops
    /// (components living entirely in the middle row).
    pub fn compose(&self, inner: &Partition) -> Result<(Partition, usize)> {
        if inner.lower != self.upper {
            return Err(Error::ShapeMismatch(format!(
                "compose ({},{}) below ({},{})",
                self.upper, self.lower, inner.upper, inner.lower
            )));
        }
        let m = inner.upper;
        let k = self.upper;
        let l = self.lower;
        let total = m + k + l;
        let mut uf = UnionFind::new(total);
        // inner occupies [0, m) (its upper row) and the middle [m, m+k); its
        // own leg ids already match the global ones.
        for block in inner.blocks() {
            for w in block.windows(2) {
                uf.union(w[0], w[1]);
            }
        }
        // self occupies the middle [m, m+k) (its upper row) and [m+k, total):
        // every leg id shifts by m.
        for block in self.blocks() {
            for w in block.windows(2) {
                uf.union(m + w[0], m + w[1]);
            }
        }
        let mut outer_label: Vec<usize> = Vec::with_capacity(m + l);
        for leg in 0..m {
            outer_label.push(uf.find(leg));
        }
        for leg in 0..l {
            outer_label.push(uf.find(m + k + leg));
        }
        // Loops: middle-row classes that touch no outer leg.
        let outer_roots: HashSet<usize> = outer_label.iter().copied().collect();
        let mut middle_roots: HashSet<usize> = HashSet::new();
        for mid in m..m + k {
            middle_roots.insert(uf.find(mid));
        }
        let loops = middle_roots
            .iter()
            .filter(|r| !outer_roots.contains(r))
            .count();
        Ok((Partition::from_raw_labels(m, l, &outer_label), loops))
    }

    /// Upside-down reflection `π*`: rows are exchanged, left-right order kept.
    pub fn involution(&self) -> Partition {
        let mut labels = vec![0usize; self.total_legs()];
        for leg in 0..self.lower {
            labels[leg] = self.block_of[self.upper + leg] as usize;
        }
        for leg in 0..self.upper {
            labels[self.lower + leg] = self.block_of[leg] as usize;
        }
        Partition::from_raw_labels(self.lower, self.upper, &labels)
    }

    /// Moves the rightmost lower leg to the right end of the upper row,
    /// keeping the cyclic (linearization) order of legs intact.
    pub fn rotate(&self) -> Result<Partition> {
        if self.lower == 0 {
            return Err(Error::Invalid("rotate needs a lower leg".into()));
        }
        let k = self.upper;
        let l = self.lower;
        let moved = k + l - 1; // rightmost lower leg
        let mut labels = vec![0usize; k + l];
        for leg in 0..k {
            labels[leg] = self.block_of[leg] as usize;
        }
        labels[k] = self.block_of[moved] as usize; // new rightmost upper leg
        for leg in 0..l - 1 {
            labels[k + 1 + leg] = self.block_of[k + leg] as usize;
        }
        Ok(Partition::from_raw_labels(k + 1, l - 1, &labels))
    }

    /// Inverse of [`Partition::rotate`]: the rightmost upper leg moves to the
    /// right end of the lower row.
    pub fn rotate_back(&self) -> Result<Partition> {
        if self.upper == 0 {
            return Err(Error::Invalid("rotate_back needs an upper leg".into()));
        }
        let k = self.upper;
        let l = self.lower;
        let moved = k - 1; // rightmost upper leg
        let mut labels = vec![0usize; k + l];
        for leg in 0..k - 1 {
            labels[leg] = self.block_of[leg] as usize;
        }
        for leg in 0..l {
            labels[k - 1 + leg] = self.block_of[k + leg] as usize;
        }
        labels[k + l - 1] = self.block_of[moved] as usize;
        Ok(Partition::from_raw_labels(k - 1, l + 1, &labels))
    }

    /// Caps the diagram at cyclic position `i` (1-based along the
    /// linearization): legs at positions `i` and `i+1` (wrapping) are joined
    /// by a semicircle and removed.
    pub fn cap(&self, i: usize) -> Result<Partition> {
        let n = self.total_legs();
        if n < 2 {
            return Err(Error::Invalid("cap needs at least two legs".into()));
        }
        if i == 0 || i > n {
            return Err(Error::LegOutOfRange(i));
        }
        let lin = self.linearization();
        let a = lin[i - 1];
        let b = lin[i % n];
        // Merge the two blocks, then delete both legs.
        let keep_label = self.block_of[a] as usize;
        let drop_label = self.block_of[b] as usize;
        let mut labels: Vec<usize> = Vec::with_capacity(n - 2);
        let mut new_upper = self.upper;
        let mut new_lower = self.lower;
        for leg in 0..n {
            if leg == a || leg == b {
                if leg < self.upper {
                    new_upper -= 1;
                } else {
                    new_lower -= 1;
                }
                continue;
            }
            let mut lab = self.block_of[leg] as usize;
            if lab == drop_label {
                lab = keep_label;
            }
            labels.push(lab);
        }
        Ok(Partition::from_raw_labels(new_upper, new_lower, &labels))
    }
}

fn linearization_order(upper: usize, lower: usize) -> Vec<usize> {
    let mut order = Vec::with_capacity(upper + lower);
    for leg in 0..lower {
        order.push(upper + leg);
    }
    for leg in (0..upper).rev() {
        order.push(leg);
    }
    order
}

// ----- text form -------------------------------------------------------------

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}:[", self.upper, self.lower)?;
        let blocks = self.blocks();
        for (i, block) in blocks.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            for (j, leg) in block.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", leg + 1)?;
            }
        }
        f.write_str("]")
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Partition> {
        let bad = |m: &str| Error::Invalid(format!("partition text `{s}`: {m}"));
        let (shape, rest) = s.split_once(':').ok_or_else(|| bad("missing `:`"))?;
        let (k, l) = shape.split_once(',').ok_or_else(|| bad("missing `,`"))?;
        let upper: usize = k.trim().parse().map_err(|_| bad("bad upper count"))?;
        let lower: usize = l.trim().parse().map_err(|_| bad("bad lower count"))?;
        let body = rest
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| bad("missing brackets"))?;
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        if !body.is_empty() {
            for chunk in body.split('|') {
                let mut block = Vec::new();
                for item in chunk.split(',') {
                    block.push(
                        item.trim()
                            .parse::<usize>()
                            .map_err(|_| bad("bad leg number"))?,
                    );
                }
                blocks.push(block);
            }
        }
        Partition::from_blocks(upper, lower, &blocks)
    }
}

// ----- enumeration -------------------------------------------------------------

/// All one-row pairings of `k` points in the given family, in lexicographic
/// order of their partner arrays. Odd `k` yields the empty list; `k = 0`
/// yields the empty partition.
pub fn enumerate_pairings(k: usize, family: PairingFamily) -> Vec<Partition> {
    enumerate_pairings_shape(0, k, family)
}

/// All pairings of a `(k, l)` diagram in the given family, ordered
/// lexicographically by partner array over diagram-order leg ids.
pub fn enumerate_pairings_shape(k: usize, l: usize, family: PairingFamily) -> Vec<Partition> {
    let n = k + l;
    if n % 2 == 1 {
        return Vec::new();
    }
    if n == 0 {
        return vec![Partition::empty()];
    }
    let mut partner = vec![usize::MAX; n];
    let mut out = Vec::new();
    fill_pairings(&mut partner, &mut out, k, l, family);
    out
}

fn fill_pairings(
    partner: &mut Vec<usize>,
    out: &mut Vec<Partition>,
    k: usize,
    l: usize,
    family: PairingFamily,
) {
    let first = match partner.iter().position(|&p| p == usize::MAX) {
        Some(i) => i,
        None => {
            let labels = partner_labels(partner);
            let p = Partition::from_raw_labels(k, l, &labels);
            if family.contains(&p) {
                out.push(p);
            }
            return;
        }
    };
    for mate in first + 1..partner.len() {
        if partner[mate] == usize::MAX {
            partner[first] = mate;
            partner[mate] = first;
            fill_pairings(partner, out, k, l, family);
            partner[first] = usize::MAX;
            partner[mate] = usize::MAX;
        }
    }
}

fn partner_labels(partner: &[usize]) -> Vec<usize> {
    let mut labels = vec![usize::MAX; partner.len()];
    let mut next = 0;
    for i in 0..partner.len() {
        if labels[i] == usize::MAX {
            labels[i] = next;
            labels[partner[i]] = next;
            next += 1;
        }
    }
    labels
}

/// Noncrossing one-row pairings generated directly by the Catalan recursion:
/// the first point of a segment pairs at odd distance, and the enclosed and
/// remaining points recurse as independent segments. Used as a cross-check of
/// the filter-based enumeration.
pub fn enumerate_noncrossing_direct(k: usize) -> Vec<Partition> {
    fn rec(segments: &mut Vec<Vec<usize>>, partner: &mut [usize], out: &mut Vec<Vec<usize>>) {
        let seg = loop {
            match segments.pop() {
                Some(s) if s.is_empty() => continue,
                Some(s) => break s,
                None => {
                    out.push(partner.to_vec());
                    return;
                }
            }
        };
        let first = seg[0];
        for m in (1..seg.len()).step_by(2) {
            let mate = seg[m];
            partner[first] = mate;
            partner[mate] = first;
            segments.push(seg[1..m].to_vec());
            segments.push(seg[m + 1..].to_vec());
            rec(segments, partner, out);
            segments.pop();
            segments.pop();
        }
        segments.push(seg);
    }
    if k % 2 == 1 {
        return Vec::new();
    }
    if k == 0 {
        return vec![Partition::empty()];
    }
    let mut segments = vec![(0..k).collect::<Vec<usize>>()];
    let mut partner = vec![usize::MAX; k];
    let mut arrays = Vec::new();
    rec(&mut segments, &mut partner, &mut arrays);
    let mut parts: Vec<Partition> = arrays
        .into_iter()
        .map(|arr| Partition::from_partner_array(&arr).expect("valid partner array"))
        .collect();
    parts.sort();
    parts.dedup();
    parts
}

/// All set partitions of `n` points as restricted-growth label strings.
pub fn enumerate_set_partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut labels = vec![0usize; n];
    fn rec(labels: &mut Vec<usize>, i: usize, max: usize, out: &mut Vec<Vec<usize>>) {
        if i == labels.len() {
            out.push(labels.clone());
            return;
        }
        for v in 0..=max + 1 {
            labels[i] = v;
            rec(labels, i + 1, max.max(v), out);
        }
    }
    if n == 0 {
        return vec![Vec::new()];
    }
    labels[0] = 0;
    rec(&mut labels, 1, 0, &mut out);
    if out.is_empty() {
        out.push(labels);
    }
    out
}

// ----- category closure ---------------------------------------------------------

/// Closure of a set of generator pairings (plus the semicircle) under
/// tensor, composition, involution and rotation, truncated to diagrams with
/// at most `max_points` legs. Returns the per-shape sets in sorted order.
pub fn category_closure(
    generators: &[Partition],
    max_points: usize,
) -> Result<BTreeMap<(usize, usize), Vec<Partition>>> {
    for g in generators {
        if !g.is_pairing() {
            return Err(Error::Invalid(format!("generator {g} is not a pairing")));
        }
        if g.total_legs() > max_points {
            return Err(Error::KBound {
                k: g.total_legs(),
                bound: max_points,
            });
        }
    }
    let mut seen: HashSet<Partition> = HashSet::new();
    let mut queue: Vec<Partition> = Vec::new();
    let push = |p: Partition, seen: &mut HashSet<Partition>, queue: &mut Vec<Partition>| {
        if p.total_legs() <= max_points && seen.insert(p.clone()) {
            queue.push(p);
        }
    };
    push(Partition::semicircle(), &mut seen, &mut queue);
    for g in generators {
        push(g.clone(), &mut seen, &mut queue);
    }
    let mut head = 0;
    while head < queue.len() {
        let p = queue[head].clone();
        head += 1;
        push(p.involution(), &mut seen, &mut queue);
        if let Ok(r) = p.rotate() {
            push(r, &mut seen, &mut queue);
        }
        if let Ok(r) = p.rotate_back() {
            push(r, &mut seen, &mut queue);
        }
        // Snapshot to avoid re-borrow while extending.
        let existing: Vec<Partition> = queue[..].to_vec();
        for q in &existing {
            if p.total_legs() + q.total_legs() <= max_points {
                push(p.tensor(q), &mut seen, &mut queue);
                push(q.tensor(&p), &mut seen, &mut queue);
            }
            if q.lower_count() == p.upper_count() {
                let (c, _) = p.compose(q)?;
                push(c, &mut seen, &mut queue);
            }
            if p.lower_count() == q.upper_count() {
                let (c, _) = q.compose(&p)?;
                push(c, &mut seen, &mut queue);
            }
        }
    }
    let mut map: BTreeMap<(usize, usize), Vec<Partition>> = BTreeMap::new();
    for p in seen {
        map.entry((p.upper_count(), p.lower_count()))
            .or_default()
            .push(p);
    }
    for v in map.values_mut() {
        v.sort();
    }
    Ok(map)
}

// ----- small union-find ------------------------------------------------------

pub(crate) struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
    }
}
