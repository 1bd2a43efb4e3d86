//! Multiset sequences over a group and their k-term subsum sets.
//!
//! A sequence is an element of the free abelian monoid over `G`: order is
//! irrelevant, repetition counts. Subsum sets `Σ_k(S)` are realised as one
//! bit-indicator set per layer `k`, filled by a dynamic program that feeds
//! terms in one at a time.

use std::collections::BTreeMap;
use std::fmt;

use crate::group::{AutMap, ElementSet, GroupElement, GroupSpec};
use crate::{Error, Result};

/// Cap on `|S|` for subsum-table construction; far above every desk-scale
/// search length.
pub const SEQUENCE_LENGTH_CAP: usize = 512;

/// A finite multiset over `G`, stored as multiplicities keyed by the dense
/// element index so that every iteration order is deterministic.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sequence {
    spec: GroupSpec,
    counts: BTreeMap<usize, u32>,
}

impl Sequence {
    /// The empty sequence (the monoid unit).
    pub fn empty(spec: GroupSpec) -> Self {
        Sequence {
            spec,
            counts: BTreeMap::new(),
        }
    }

    pub fn from_terms(spec: GroupSpec, terms: impl IntoIterator<Item = GroupElement>) -> Self {
        let mut s = Sequence::empty(spec);
        for g in terms {
            s.push(g, 1);
        }
        s
    }

    pub fn spec(&self) -> GroupSpec {
        self.spec
    }

    /// Adds `mult` copies of `g`.
    pub fn push(&mut self, g: GroupElement, mult: u32) {
        if mult == 0 {
            return;
        }
        *self.counts.entry(self.spec.index(g)).or_insert(0) += mult;
    }

    /// Removes `mult` copies of `g`; errors if `v_g(S) < mult`.
    pub fn remove(&mut self, g: GroupElement, mult: u32) -> Result<()> {
        if mult == 0 {
            return Ok(());
        }
        let idx = self.spec.index(g);
        match self.counts.get_mut(&idx) {
            Some(c) if *c > mult => {
                *c -= mult;
                Ok(())
            }
            Some(c) if *c == mult => {
                self.counts.remove(&idx);
                Ok(())
            }
            _ => Err(Error::Domain(format!(
                "cannot remove {mult} copies of {g} from {self}"
            ))),
        }
    }

    /// `v_g(S)`.
    pub fn multiplicity(&self, g: GroupElement) -> u32 {
        self.counts.get(&self.spec.index(g)).copied().unwrap_or(0)
    }

    /// `|S| = Σ_g v_g(S)`.
    pub fn len(&self) -> usize {
        self.counts.values().map(|&c| c as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// `h(S)`, the maximum multiplicity (0 for the empty sequence).
    pub fn height(&self) -> u32 {
        self.counts.values().copied().max().unwrap_or(0)
    }

    /// `supp(S)` as an indicator set.
    pub fn support(&self) -> ElementSet {
        ElementSet::from_elements(self.spec, self.distinct())
    }

    /// Number of distinct terms.
    pub fn support_size(&self) -> usize {
        self.counts.len()
    }

    /// `σ(S) = Σ_g v_g(S)·g`.
    pub fn sum(&self) -> GroupElement {
        self.counts.iter().fold(self.spec.zero(), |acc, (&i, &c)| {
            self.spec
                .add(acc, self.spec.smul(c as i64, self.spec.element_at(i)))
        })
    }

    /// Distinct elements in index order.
    pub fn distinct(&self) -> impl Iterator<Item = GroupElement> + '_ {
        self.counts.keys().map(move |&i| self.spec.element_at(i))
    }

    /// `(g, v_g)` pairs in index order.
    pub fn counts(&self) -> impl Iterator<Item = (GroupElement, u32)> + '_ {
        self.counts
            .iter()
            .map(move |(&i, &c)| (self.spec.element_at(i), c))
    }

    /// Terms with repetition, in index order.
    pub fn terms(&self) -> impl Iterator<Item = GroupElement> + '_ {
        self.counts
            .iter()
            .flat_map(move |(&i, &c)| std::iter::repeat(self.spec.element_at(i)).take(c as usize))
    }

    /// Sorted dense indices with repetition — the canonical word used for
    /// lexicographic comparison of sequences.
    pub fn sorted_indices(&self) -> Vec<usize> {
        self.counts
            .iter()
            .flat_map(|(&i, &c)| std::iter::repeat(i).take(c as usize))
            .collect()
    }

    /// True iff `v_g(S1) ≤ v_g(S)` for every `g`.
    pub fn divides(&self, other: &Sequence) -> Result<bool> {
        self.check_spec(other)?;
        Ok(self
            .counts
            .iter()
            .all(|(i, c)| other.counts.get(i).copied().unwrap_or(0) >= *c))
    }

    /// Pointwise minimum of multiplicities: the longest common subsequence.
    pub fn gcd(&self, other: &Sequence) -> Result<Sequence> {
        self.check_spec(other)?;
        let mut out = Sequence::empty(self.spec);
        for (&i, &c) in &self.counts {
            let m = c.min(other.counts.get(&i).copied().unwrap_or(0));
            if m > 0 {
                out.counts.insert(i, m);
            }
        }
        Ok(out)
    }

    /// Concatenation `S · T` (multiplicities add).
    pub fn product(&self, other: &Sequence) -> Result<Sequence> {
        self.check_spec(other)?;
        let mut out = self.clone();
        for (g, c) in other.counts() {
            out.push(g, c);
        }
        Ok(out)
    }

    /// Quotient `T^{-1} · S`; errors unless `T | S`.
    pub fn quotient(&self, other: &Sequence) -> Result<Sequence> {
        self.check_spec(other)?;
        let mut out = self.clone();
        for (g, c) in other.counts() {
            out.remove(g, c)?;
        }
        Ok(out)
    }

    /// Image multiset under a homomorphism into `target`.
    pub fn map(
        &self,
        target: GroupSpec,
        f: impl Fn(GroupElement) -> GroupElement,
    ) -> Sequence {
        let mut out = Sequence::empty(target);
        for (g, c) in self.counts() {
            out.push(f(g), c);
        }
        out
    }

    /// Image under an automorphism of the same group.
    pub fn apply_aut(&self, alpha: &AutMap) -> Sequence {
        let spec = self.spec;
        self.map(spec, |g| alpha.apply(&spec, g))
    }

    /// Builds the full subsum table; see [`SubsumTable`].
    pub fn subsums(&self) -> Result<SubsumTable> {
        SubsumTable::build(self)
    }

    fn check_spec(&self, other: &Sequence) -> Result<()> {
        if self.spec != other.spec {
            return Err(Error::GroupMismatch(format!(
                "sequence over {} combined with sequence over {}",
                self.spec, other.spec
            )));
        }
        Ok(())
    }

    /// Parses the grammar `term := "(" int "," int ")" ["^" int]`,
    /// whitespace-separated. Residues must already be in canonical range.
    pub fn parse(spec: GroupSpec, text: &str) -> Result<Sequence> {
        let mut s = Sequence::empty(spec);
        let bytes = text.as_bytes();
        let mut pos = 0usize;
        let err = |pos: usize, msg: &str| Error::Parse {
            pos,
            msg: msg.to_string(),
        };
        let read_int = |pos: &mut usize| -> Result<u32> {
            let start = *pos;
            while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
                *pos += 1;
            }
            text[start..*pos]
                .parse()
                .map_err(|_| err(start, "expected integer"))
        };
        loop {
            while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if pos == bytes.len() {
                return Ok(s);
            }
            if bytes[pos] != b'(' {
                return Err(err(pos, "expected '('"));
            }
            pos += 1;
            let a = read_int(&mut pos)?;
            if pos >= bytes.len() || bytes[pos] != b',' {
                return Err(err(pos, "expected ','"));
            }
            pos += 1;
            let b = read_int(&mut pos)?;
            if pos >= bytes.len() || bytes[pos] != b')' {
                return Err(err(pos, "expected ')'"));
            }
            pos += 1;
            if a >= spec.n1() || b >= spec.n2() {
                return Err(err(pos, &format!("residue ({a},{b}) out of range for {spec}")));
            }
            let mut mult = 1;
            if pos < bytes.len() && bytes[pos] == b'^' {
                pos += 1;
                mult = read_int(&mut pos)?;
                if mult == 0 {
                    return Err(err(pos, "exponent must be positive"));
                }
            }
            s.push(spec.element(a, b), mult);
        }
    }
}

impl fmt::Display for Sequence {
    /// Formats in the sequence grammar; `parse(format(S)) = S`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (g, c) in self.counts() {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if c == 1 {
                write!(f, "{g}")?;
            } else {
                write!(f, "{g}^{c}")?;
            }
        }
        Ok(())
    }
}

/// Derived statistics of a sequence, bundled for reporting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceStats {
    pub length: usize,
    pub height: u32,
    pub support: ElementSet,
    pub sum: GroupElement,
}

impl Sequence {
    pub fn stats(&self) -> SequenceStats {
        SequenceStats {
            length: self.len(),
            height: self.height(),
            support: self.support(),
            sum: self.sum(),
        }
    }
}

/// All k-term subsum sets of a sequence: `layers[k] = Σ_k(S)` for
/// `k = 0..=|S|`, with `layers[0] = {0}` and `layers[|S|] = {σ(S)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsumTable {
    layers: Vec<ElementSet>,
}

impl SubsumTable {
    /// Dynamic program: terms are processed one at a time, each term `g`
    /// updating layers from high `k` to low via
    /// `layer[k] |= (layer[k-1] + g)`.
    pub fn build(s: &Sequence) -> Result<SubsumTable> {
        let n = s.len();
        if n > SEQUENCE_LENGTH_CAP {
            return Err(Error::CapExceeded(format!(
                "|S| = {n} exceeds the subsum-table cap {SEQUENCE_LENGTH_CAP}"
            )));
        }
        let mut layers = vec![ElementSet::empty(s.spec()); n + 1];
        layers[0].insert(s.spec().zero());
        let mut used = 0usize;
        for g in s.terms() {
            used += 1;
            for k in (1..=used).rev() {
                let shifted = layers[k - 1].translate(g);
                layers[k].union_with(&shifted);
            }
        }
        Ok(SubsumTable { layers })
    }

    /// `Σ_k(S)`; panics if `k > |S|`.
    pub fn sigma_k(&self, k: usize) -> &ElementSet {
        &self.layers[k]
    }

    pub fn num_layers(&self) -> usize {
        self.layers.len()
    }

    /// `Σ(S)`: the union of `Σ_k(S)` over `k ∈ [1, |S|]`.
    pub fn sigma_all(&self) -> ElementSet {
        let mut out = ElementSet::empty(self.layers[0].spec());
        for l in &self.layers[1..] {
            out.union_with(l);
        }
        out
    }

    /// True iff `0 ∈ Σ_k(S)` for some `k` in the (inclusive) range.
    pub fn zero_in_lengths(&self, lo: usize, hi: usize) -> bool {
        let zero = self.layers[0].spec().zero();
        let hi = hi.min(self.layers.len() - 1);
        (lo.max(1)..=hi).any(|k| self.layers[k].contains(zero))
    }
}

/// Incremental subsum table for DFS searches: `push` adds a term, `pop`
/// undoes the last push. Snapshots the touched layers so that pop is exact.
#[derive(Debug, Clone)]
pub struct IncrementalSubsums {
    spec: GroupSpec,
    layers: Vec<ElementSet>,
    undo: Vec<Vec<ElementSet>>,
}

impl IncrementalSubsums {
    pub fn new(spec: GroupSpec) -> Self {
        let mut zero_layer = ElementSet::empty(spec);
        zero_layer.insert(spec.zero());
        IncrementalSubsums {
            spec,
            layers: vec![zero_layer],
            undo: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.layers.len() - 1
    }

    pub fn push(&mut self, g: GroupElement) {
        let snapshot = self.layers[1..].to_vec();
        self.undo.push(snapshot);
        self.layers.push(ElementSet::empty(self.spec));
        let n = self.layers.len() - 1;
        for k in (1..=n).rev() {
            let shifted = self.layers[k - 1].translate(g);
            self.layers[k].union_with(&shifted);
        }
    }

    pub fn pop(&mut self) {
        let snapshot = self.undo.pop().expect("pop without matching push");
        self.layers.truncate(1);
        self.layers.extend(snapshot);
    }

    pub fn sigma_k(&self, k: usize) -> &ElementSet {
        &self.layers[k]
    }

    /// True iff `0 ∈ Σ_k` for some `k` in the (inclusive) range.
    pub fn zero_in_lengths(&self, lo: usize, hi: usize) -> bool {
        let zero = self.spec.zero();
        let hi = hi.min(self.layers.len() - 1);
        (lo.max(1)..=hi).any(|k| self.layers[k].contains(zero))
    }
}
