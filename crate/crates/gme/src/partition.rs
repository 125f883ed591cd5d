//! Set partitions of a party set and their refinement lattice.
//!
//! Parties are the tensor factors of a multipartite system, identified by
//! short string labels (`"A"`, `"B1"`, ...). A [`Partition`] groups the
//! parties into disjoint nonempty blocks; the set of all partitions of a fixed
//! party set forms a lattice under the *refinement* order: `kappa <= pi` when
//! every block of `kappa` is contained in a block of `pi`. The meet is the
//! common refinement, the join glues blocks that overlap transitively, the
//! bottom element is the partition into singletons and the top is the single
//! full block.
//!
//! Blocks are stored as bitmasks over party indices and kept in canonical
//! order (ascending least member), so structural equality is canonical
//! equality. Enumeration follows restricted-growth-string (RGS) order, and the
//! Möbius function of the lattice is computed in closed form per block.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Default cap on the number of parties for whole-lattice enumeration.
///
/// The lattice of an 8-party set already has 4140 elements; operations that
/// enumerate it stay desk-scale up to this size. Use
/// [`enumerate_partitions_capped`] to raise the cap deliberately.
pub const DEFAULT_MAX_PARTIES: usize = 8;

/// Hard representation limit: blocks are 32-bit masks.
const ABSOLUTE_MAX_PARTIES: usize = 16;

/// An ordered set of distinct party labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartySet {
    labels: Vec<String>,
}

impl PartySet {
    /// Build a party set from distinct, nonempty labels.
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::InvalidArgument("party set must be nonempty".into()));
        }
        if labels.len() > ABSOLUTE_MAX_PARTIES {
            return Err(Error::InvalidArgument(format!(
                "at most {ABSOLUTE_MAX_PARTIES} parties are supported, got {}",
                labels.len()
            )));
        }
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty() {
                return Err(Error::InvalidArgument("empty party label".into()));
            }
            if l.contains('|') || l.contains(',') || l.chars().any(char::is_whitespace) {
                return Err(Error::InvalidArgument(format!(
                    "party label {l:?} contains a separator character"
                )));
            }
            if labels[..i].contains(l) {
                return Err(Error::InvalidArgument(format!("duplicate party label {l:?}")));
            }
        }
        Ok(PartySet { labels })
    }

    /// Party set `A, B, C, ...` with `q` single-letter labels (q <= 26).
    pub fn with_default_labels(q: usize) -> Result<Self> {
        if q == 0 || q > ABSOLUTE_MAX_PARTIES {
            return Err(Error::InvalidArgument(format!(
                "party count must be in 1..={ABSOLUTE_MAX_PARTIES}, got {q}"
            )));
        }
        PartySet::new((0..q).map(|i| ((b'A' + i as u8) as char).to_string()))
    }

    /// Number of parties.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// True when the set is empty (never, by construction).
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// The labels, in party order.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Index of a label, if present.
    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Render a subset mask as text: labels in party order, juxtaposed when
    /// every label in the set is a single character, comma-separated otherwise.
    pub fn format_subset(&self, mask: u32) -> String {
        let sep = if self.labels.iter().all(|l| l.chars().count() == 1) {
            ""
        } else {
            ","
        };
        let mut parts = Vec::new();
        for (i, l) in self.labels.iter().enumerate() {
            if mask & (1 << i) != 0 {
                parts.push(l.as_str());
            }
        }
        parts.join(sep)
    }

    /// Parse a subset of parties. Accepts comma-separated labels or, when no
    /// comma is present, greedy longest-match juxtaposition (`"AB"`).
    pub fn parse_subset(&self, text: &str) -> Result<u32> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::Parse("empty party subset".into()));
        }
        let mut mask = 0u32;
        let mut push = |label: &str| -> Result<()> {
            let idx = self
                .index_of(label)
                .ok_or_else(|| Error::Parse(format!("unknown party label {label:?}")))?;
            if mask & (1 << idx) != 0 {
                return Err(Error::Parse(format!("party {label:?} listed twice")));
            }
            mask |= 1 << idx;
            Ok(())
        };
        if text.contains(',') {
            for piece in text.split(',') {
                push(piece.trim())?;
            }
        } else {
            // Greedy longest-match tokenization against the known labels.
            let mut rest = text;
            let mut by_len: Vec<&String> = self.labels.iter().collect();
            by_len.sort_by_key(|l| std::cmp::Reverse(l.len()));
            'outer: while !rest.is_empty() {
                for l in &by_len {
                    if let Some(tail) = rest.strip_prefix(l.as_str()) {
                        push(l)?;
                        rest = tail;
                        continue 'outer;
                    }
                }
                return Err(Error::Parse(format!(
                    "cannot match {rest:?} against party labels"
                )));
            }
        }
        Ok(mask)
    }

    /// Mask covering every party.
    pub fn full_mask(&self) -> u32 {
        full_mask(self.len())
    }
}

fn full_mask(q: usize) -> u32 {
    if q == 32 {
        u32::MAX
    } else {
        (1u32 << q) - 1
    }
}

/// A set partition of parties `0..q` into disjoint nonempty blocks.
///
/// Blocks are bitmasks in canonical order (ascending least member). The
/// derived `Ord` is this canonical block-list order — a convenience total
/// order for containers, *not* the refinement order (see [`Partition::leq`]).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    q: u8,
    blocks: Vec<u32>,
}

impl Partition {
    /// Build a partition from blocks, validating disjointness and coverage.
    pub fn from_blocks(q: usize, blocks: impl IntoIterator<Item = u32>) -> Result<Self> {
        check_q(q)?;
        let mut blocks: Vec<u32> = blocks.into_iter().collect();
        let full = full_mask(q);
        let mut seen = 0u32;
        for &b in &blocks {
            if b == 0 {
                return Err(Error::InvalidArgument("empty block in partition".into()));
            }
            if b & !full != 0 {
                return Err(Error::InvalidArgument(
                    "block references a party outside the set".into(),
                ));
            }
            if b & seen != 0 {
                return Err(Error::InvalidArgument("blocks overlap".into()));
            }
            seen |= b;
        }
        if seen != full {
            return Err(Error::InvalidArgument(
                "blocks do not cover every party".into(),
            ));
        }
        blocks.sort_by_key(|b| b.trailing_zeros());
        Ok(Partition {
            q: q as u8,
            blocks,
        })
    }

    /// The finest partition: every party in its own block.
    pub fn finest(q: usize) -> Self {
        Partition {
            q: q as u8,
            blocks: (0..q).map(|i| 1u32 << i).collect(),
        }
    }

    /// The coarsest partition: one block containing every party.
    pub fn coarsest(q: usize) -> Self {
        Partition {
            q: q as u8,
            blocks: vec![full_mask(q)],
        }
    }

    /// Number of parties.
    pub fn q(&self) -> usize {
        self.q as usize
    }

    /// Blocks in canonical order.
    pub fn blocks(&self) -> &[u32] {
        &self.blocks
    }

    /// Number of blocks.
    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Index (in canonical block order) of the block containing `party`.
    pub fn block_of(&self, party: usize) -> usize {
        let bit = 1u32 << party;
        self.blocks
            .iter()
            .position(|&b| b & bit != 0)
            .expect("party within range")
    }

    /// Is this the coarsest (single-block) partition?
    pub fn is_coarsest(&self) -> bool {
        self.blocks.len() == 1
    }

    /// Is this the finest (all-singletons) partition?
    pub fn is_finest(&self) -> bool {
        self.blocks.len() == self.q()
    }

    /// Does any block consist of a single party?
    pub fn has_singleton_block(&self) -> bool {
        self.blocks.iter().any(|b| b.count_ones() == 1)
    }

    /// Refinement order: is every block of `self` contained in a block of
    /// `other`?
    pub fn leq(&self, other: &Partition) -> bool {
        debug_assert_eq!(self.q, other.q);
        self.blocks.iter().all(|&b| {
            let host = other.blocks[other.block_of(b.trailing_zeros() as usize)];
            b & !host == 0
        })
    }

    /// Greatest lower bound: the common refinement (pairwise block
    /// intersections).
    pub fn meet(&self, other: &Partition) -> Partition {
        debug_assert_eq!(self.q, other.q);
        let mut blocks = Vec::new();
        for &a in &self.blocks {
            for &b in &other.blocks {
                let m = a & b;
                if m != 0 {
                    blocks.push(m);
                }
            }
        }
        blocks.sort_by_key(|b| b.trailing_zeros());
        Partition {
            q: self.q,
            blocks,
        }
    }

    /// Least upper bound: transitive closure of block overlap.
    pub fn join(&self, other: &Partition) -> Partition {
        debug_assert_eq!(self.q, other.q);
        let q = self.q();
        let mut parent: Vec<usize> = (0..q).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut root = x;
            while parent[root] != root {
                root = parent[root];
            }
            let mut cur = x;
            while parent[cur] != root {
                let next = parent[cur];
                parent[cur] = root;
                cur = next;
            }
            root
        }
        for blocks in [&self.blocks, &other.blocks] {
            for &b in blocks {
                let lead = b.trailing_zeros() as usize;
                for i in 0..q {
                    if b & (1 << i) != 0 {
                        let (ra, rb) = (find(&mut parent, lead), find(&mut parent, i));
                        parent[ra.max(rb)] = ra.min(rb);
                    }
                }
            }
        }
        let mut masks = vec![0u32; q];
        for i in 0..q {
            let r = find(&mut parent, i);
            masks[r] |= 1 << i;
        }
        let mut blocks: Vec<u32> = masks.into_iter().filter(|&m| m != 0).collect();
        blocks.sort_by_key(|b| b.trailing_zeros());
        Partition {
            q: self.q,
            blocks,
        }
    }

    /// Partition type: the multiset of block sizes, sorted ascending.
    pub fn partition_type(&self) -> Vec<usize> {
        let mut sizes: Vec<usize> = self.blocks.iter().map(|b| b.count_ones() as usize).collect();
        sizes.sort_unstable();
        sizes
    }

    /// The restricted growth string: entry `i` is the canonical block index of
    /// party `i`.
    pub fn rgs(&self) -> Vec<u8> {
        (0..self.q()).map(|i| self.block_of(i) as u8).collect()
    }

    /// Rebuild a partition from a restricted growth string.
    pub fn from_rgs(rgs: &[u8]) -> Result<Self> {
        check_q(rgs.len())?;
        let mut max_next = 0u8;
        let mut blocks: Vec<u32> = Vec::new();
        for (i, &v) in rgs.iter().enumerate() {
            if v > max_next {
                return Err(Error::InvalidArgument(format!(
                    "not a restricted growth string: entry {i} is {v}, expected <= {max_next}"
                )));
            }
            if v == max_next {
                blocks.push(0);
                max_next += 1;
            }
            blocks[v as usize] |= 1 << i;
        }
        Partition::from_blocks(rgs.len(), blocks)
    }

    /// Quotient of `self` by a finer partition `finer` (`finer <= self`): the
    /// induced partition on `finer`'s blocks, viewed as parties in canonical
    /// order.
    pub fn quotient_by(&self, finer: &Partition) -> Result<Partition> {
        if !finer.leq(self) {
            return Err(Error::InvalidArgument(
                "quotient requires the argument to refine the receiver".into(),
            ));
        }
        let m = finer.num_blocks();
        let mut blocks = vec![0u32; self.num_blocks()];
        for (i, &b) in finer.blocks.iter().enumerate() {
            let host = self.block_of(b.trailing_zeros() as usize);
            blocks[host] |= 1 << i;
        }
        Partition::from_blocks(m, blocks.into_iter().filter(|&b| b != 0))
    }

    /// Parse text such as `"AB|C"` or `"A,B|C"` into a partition of `ps`.
    pub fn parse(text: &str, ps: &PartySet) -> Result<Self> {
        let mut blocks = Vec::new();
        for piece in text.split('|') {
            blocks.push(ps.parse_subset(piece)?);
        }
        Partition::from_blocks(ps.len(), blocks)
    }

    /// Canonical text form: blocks sorted by least member, `|`-separated.
    pub fn format(&self, ps: &PartySet) -> String {
        debug_assert_eq!(ps.len(), self.q());
        self.blocks
            .iter()
            .map(|&b| ps.format_subset(b))
            .collect::<Vec<_>>()
            .join("|")
    }
}

impl fmt::Display for Partition {
    /// Label-free display using party indices (`"01|2"`); prefer
    /// [`Partition::format`] when a [`PartySet`] is at hand.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rendered: Vec<String> = self
            .blocks
            .iter()
            .map(|&b| {
                (0..self.q())
                    .filter(|i| b & (1 << i) != 0)
                    .map(|i| format!("{i:x}"))
                    .collect::<String>()
            })
            .collect();
        write!(f, "{}", rendered.join("|"))
    }
}

fn check_q(q: usize) -> Result<()> {
    if q == 0 || q > ABSOLUTE_MAX_PARTIES {
        return Err(Error::InvalidArgument(format!(
            "party count must be in 1..={ABSOLUTE_MAX_PARTIES}, got {q}"
        )));
    }
    Ok(())
}

fn check_enumeration_q(q: usize, cap: usize) -> Result<()> {
    check_q(q)?;
    if q > cap {
        return Err(Error::InvalidArgument(format!(
            "enumeration over {q} parties exceeds the cap of {cap}"
        )));
    }
    Ok(())
}

/// All partitions of `q` parties in restricted-growth-string (lexicographic)
/// order. The coarsest partition comes first, the finest last; the order is a
/// linear extension of reverse refinement.
pub fn enumerate_partitions(q: usize) -> Result<Vec<Partition>> {
    enumerate_partitions_capped(q, DEFAULT_MAX_PARTIES)
}

/// [`enumerate_partitions`] with an explicit party-count cap.
pub fn enumerate_partitions_capped(q: usize, cap: usize) -> Result<Vec<Partition>> {
    check_enumeration_q(q, cap)?;
    let mut out = Vec::with_capacity(bell_number(q)? as usize);
    let mut rgs = vec![0u8; q];
    fn recurse(rgs: &mut Vec<u8>, pos: usize, max_next: u8, out: &mut Vec<Partition>) {
        if pos == rgs.len() {
            out.push(Partition::from_rgs(rgs).expect("generated string is valid"));
            return;
        }
        for v in 0..=max_next {
            rgs[pos] = v;
            recurse(rgs, pos + 1, max_next.max(v + 1), out);
        }
    }
    recurse(&mut rgs, 1, 1, &mut out);
    Ok(out)
}

/// Bell number `B_q`: how many partitions a `q`-party set has.
pub fn bell_number(q: usize) -> Result<u64> {
    check_q(q)?;
    // Bell triangle.
    let mut row = vec![1u64];
    for _ in 1..q {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(*row.last().expect("nonempty row"));
        for &x in &row {
            let last = *next.last().expect("nonempty");
            next.push(last + x);
        }
        row = next;
    }
    Ok(*row.last().expect("nonempty row"))
}

/// Möbius function of the refinement lattice, `mu(kappa, pi)` for
/// `kappa <= pi`.
///
/// Per block `B` of `pi`, with `k` blocks of `kappa` inside `B`, the factor is
/// `(-1)^(k-1) * (k-1)!`; the value is the product over blocks. Errors when
/// the arguments are not comparable.
pub fn mobius(kappa: &Partition, pi: &Partition) -> Result<i64> {
    if kappa.q != pi.q {
        return Err(Error::DimensionMismatch(
            "mobius arguments live on different party sets".into(),
        ));
    }
    if !kappa.leq(pi) {
        return Err(Error::InvalidArgument(
            "mobius(kappa, pi) requires kappa <= pi in refinement order".into(),
        ));
    }
    let mut value: i64 = 1;
    for &host in &pi.blocks {
        let k = kappa.blocks.iter().filter(|&&b| b & host != 0).count() as i64;
        let mut factor: i64 = if k % 2 == 0 { -1 } else { 1 };
        for j in 1..k {
            factor = factor
                .checked_mul(j)
                .ok_or_else(|| Error::Overflow("mobius factorial".into()))?;
        }
        value = value
            .checked_mul(factor)
            .ok_or_else(|| Error::Overflow("mobius product".into()))?;
    }
    Ok(value)
}

/// The closed interval `[kappa, pi]` in refinement order, in enumeration
/// order. Empty when the endpoints are not comparable.
pub fn interval(kappa: &Partition, pi: &Partition) -> Result<Vec<Partition>> {
    if kappa.q != pi.q {
        return Err(Error::DimensionMismatch(
            "interval endpoints live on different party sets".into(),
        ));
    }
    Ok(enumerate_partitions(kappa.q())?
        .into_iter()
        .filter(|tau| kappa.leq(tau) && tau.leq(pi))
        .collect())
}

/// Downward closure of a set of partitions under refinement, in enumeration
/// order and duplicate-free.
pub fn downset(q: usize, generators: &[Partition]) -> Result<Vec<Partition>> {
    debug_assert!(generators.iter().all(|p| p.q() == q));
    Ok(enumerate_partitions(q)?
        .into_iter()
        .filter(|tau| generators.iter().any(|g| tau.leq(g)))
        .collect())
}

/// The partitions with exactly one singleton block and one block of the
/// remaining `q-1` parties — the standard constraint set whose complement
/// (upward) is the singleton-free zone.
pub fn one_vs_rest_cuts(q: usize) -> Vec<Partition> {
    let full = full_mask(q);
    (0..q)
        .map(|i| {
            let single = 1u32 << i;
            if q == 1 {
                Partition::coarsest(1)
            } else {
                Partition::from_blocks(q, [single, full & !single]).expect("valid cut")
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(q: usize) -> PartySet {
        PartySet::with_default_labels(q).unwrap()
    }

    fn p(text: &str, q: usize) -> Partition {
        Partition::parse(text, &ps(q)).unwrap()
    }

    #[test]
    fn bell_numbers_match_frozen_values() {
        let expected = [1u64, 2, 5, 15, 52, 203, 877, 4140];
        for (i, &b) in expected.iter().enumerate() {
            assert_eq!(bell_number(i + 1).unwrap(), b);
        }
    }

    #[test]
    fn enumeration_counts_and_extremes() {
        for q in 1..=6 {
            let all = enumerate_partitions(q).unwrap();
            assert_eq!(all.len() as u64, bell_number(q).unwrap());
            assert_eq!(all.first().unwrap(), &Partition::coarsest(q));
            assert_eq!(all.last().unwrap(), &Partition::finest(q));
            // No duplicates: canonical forms are unique.
            let mut sorted = all.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted.len(), all.len());
        }
    }

    #[test]
    fn enumeration_respects_cap() {
        assert!(enumerate_partitions_capped(4, 3).is_err());
        assert!(enumerate_partitions_capped(4, 4).is_ok());
    }

    #[test]
    fn parse_and_format_roundtrip() {
        let set = ps(4);
        for text in ["ABCD", "AB|CD", "A|B|C|D", "AD|BC", "A|BCD"] {
            let part = Partition::parse(text, &set).unwrap();
            assert_eq!(part.format(&set), text);
        }
        // Comma form and non-canonical block order normalize.
        assert_eq!(Partition::parse("A,B|C,D", &set).unwrap(), p("AB|CD", 4));
        assert_eq!(Partition::parse("CD|AB", &set).unwrap(), p("AB|CD", 4));
    }

    #[test]
    fn parse_rejects_bad_input() {
        let set = ps(3);
        assert!(Partition::parse("AB", &set).is_err()); // C missing
        assert!(Partition::parse("AB|BC", &set).is_err()); // overlap
        assert!(Partition::parse("AB|C|", &set).is_err()); // empty block
        assert!(Partition::parse("AX|BC", &set).is_err()); // unknown label
    }

    #[test]
    fn multichar_labels_parse_with_commas() {
        let set = PartySet::new(["A", "A*", "B", "B*"]).unwrap();
        let part = Partition::parse("A,A*|B,B*", &set).unwrap();
        assert_eq!(part.num_blocks(), 2);
        assert_eq!(part.format(&set), "A,A*|B,B*");
        // Greedy longest-match resolves juxtaposition too.
        assert_eq!(Partition::parse("AA*|BB*", &set).unwrap(), part);
    }

    #[test]
    fn meet_and_join_worked_example() {
        // pi = AB|C, kappa = AC|B: join is ABC, meet is A|B|C.
        let pi = p("AB|C", 3);
        let kappa = p("AC|B", 3);
        assert_eq!(pi.join(&kappa), Partition::coarsest(3));
        assert_eq!(pi.meet(&kappa), Partition::finest(3));
    }

    #[test]
    fn refinement_examples() {
        assert!(p("A|B|CD", 4).leq(&p("AB|CD", 4)));
        assert!(!p("AB|CD", 4).leq(&p("A|B|CD", 4)));
        assert!(!p("AB|CD", 4).leq(&p("AC|BD", 4)));
        assert!(Partition::finest(4).leq(&p("AB|CD", 4)));
        assert!(p("AB|CD", 4).leq(&Partition::coarsest(4)));
    }

    #[test]
    fn mobius_closed_form_examples() {
        // mu(finest, coarsest) = (-1)^(q-1) (q-1)!
        for q in 1..=6 {
            let expect = {
                let sign = if (q - 1) % 2 == 0 { 1 } else { -1 };
                sign * (1..q as i64).product::<i64>()
            };
            assert_eq!(
                mobius(&Partition::finest(q), &Partition::coarsest(q)).unwrap(),
                expect
            );
        }
        // q = 3: mu(finest, coarsest) = 2.
        assert_eq!(mobius(&Partition::finest(3), &Partition::coarsest(3)).unwrap(), 2);
        // Per-block product: kappa = A|B|C|D under AB|CD gives (-1)*(-1) = 1.
        assert_eq!(mobius(&Partition::finest(4), &p("AB|CD", 4)).unwrap(), 1);
        assert_eq!(mobius(&p("AB|C|D", 4), &p("AB|CD", 4)).unwrap(), -1);
    }

    #[test]
    fn mobius_requires_comparability() {
        assert!(mobius(&p("AB|C", 3), &p("AC|B", 3)).is_err());
    }

    #[test]
    fn interval_worked_example() {
        // [finest, AB|CD] = {A|B|C|D, AB|C|D, A|B|CD, AB|CD}.
        let got = interval(&Partition::finest(4), &p("AB|CD", 4)).unwrap();
        assert_eq!(got.len(), 4);
        let set = ps(4);
        let names: Vec<String> = got.iter().map(|t| t.format(&set)).collect();
        for want in ["A|B|C|D", "AB|C|D", "A|B|CD", "AB|CD"] {
            assert!(names.iter().any(|n| n == want), "missing {want}");
        }
    }

    #[test]
    fn downset_of_one_vs_rest_cuts_is_singleton_zone() {
        // Everything below a one-vs-rest cut keeps at least one singleton.
        let cuts = one_vs_rest_cuts(4);
        assert_eq!(cuts.len(), 4);
        let down = downset(4, &cuts).unwrap();
        for tau in enumerate_partitions(4).unwrap() {
            let in_down = down.contains(&tau);
            assert_eq!(in_down, tau.has_singleton_block(), "{tau}");
        }
    }

    #[test]
    fn partition_type_sorted() {
        assert_eq!(p("AB|C|D", 4).partition_type(), vec![1, 1, 2]);
        assert_eq!(p("ABC|D", 4).partition_type(), vec![1, 3]);
        assert_eq!(Partition::coarsest(5).partition_type(), vec![5]);
    }

    #[test]
    fn rgs_roundtrip_and_order() {
        let all = enumerate_partitions(5).unwrap();
        let mut prev: Option<Vec<u8>> = None;
        for part in &all {
            let rgs = part.rgs();
            assert_eq!(&Partition::from_rgs(&rgs).unwrap(), part);
            if let Some(p) = prev {
                assert!(p < rgs, "enumeration must ascend in RGS order");
            }
            prev = Some(rgs);
        }
    }

    #[test]
    fn enumeration_is_linear_extension_of_reverse_refinement() {
        let all = enumerate_partitions(5).unwrap();
        for (i, a) in all.iter().enumerate() {
            for b in &all[i + 1..] {
                // A later partition is never strictly coarser than an earlier one.
                assert!(!(a.leq(b) && a != b), "{a} before {b}");
            }
        }
    }

    #[test]
    fn quotient_collapses_blocks() {
        let coarse = p("ABC|D", 4);
        let fine = p("AB|C|D", 4);
        let quot = coarse.quotient_by(&fine).unwrap();
        // Blocks of `fine`, as parties 0=AB, 1=C, 2=D: quotient is 01|2.
        assert_eq!(quot, Partition::from_blocks(3, [0b011, 0b100]).unwrap());
        assert!(coarse.quotient_by(&p("AD|B|C", 4)).is_err());
    }
}
