//! Exhaustive enumeration of sequences up to automorphism and the extremal
//! constants computed by search.
//!
//! Enumeration is a DFS over non-decreasing element indices. Constraint
//! pruning is exact for the hereditary constraints (zero-sum free, no short
//! zero-sum) and prefix-based for minimal zero-sum sequences (every proper
//! prefix must be zero-sum free). In `fast` mode, orbit enumeration
//! additionally prunes prefixes that are not minimal among their
//! automorphism images; `audit` mode disables that pruning so the two modes
//! can be cross-checked.

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use crate::group::GroupSpec;
use crate::sequence::{IncrementalSubsums, Sequence};
use crate::{Error, Result};

/// Which sequences an enumeration emits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    /// Members of `A(G)`.
    MinimalZeroSum,
    /// `0 ∉ Σ(S)`.
    ZeroSumFree,
    /// No zero-sum subsequence of length in `[1, bound]`.
    NoShortZeroSum(u32),
    /// No zero-sum subsequence of length `≥ bound`.
    NoLongZeroSum(u32),
    /// Every multiset of the given length.
    All,
}

/// `fast` enables the orbit-prefix pruning heuristic; `audit` disables every
/// pruning step that is not part of the constraint definition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Fast,
    Audit,
}

/// Full description of one enumeration run.
#[derive(Debug, Clone)]
pub struct EnumSpec {
    pub group: GroupSpec,
    pub length: usize,
    pub constraint: Constraint,
    pub up_to_aut: bool,
    /// When set, restricts terms to elements of exactly this order.
    pub order_filter: Option<u32>,
}

/// One automorphism orbit: the lexicographically least member and the orbit
/// cardinality (a divisor of `|Aut(G)|`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitRep {
    pub representative: Sequence,
    pub orbit_size: usize,
}

/// Search knobs shared by every exhaustive routine.
#[derive(Debug, Clone, Copy, Default)]
pub struct SearchOptions {
    pub mode: Mode,
    /// Abort with `CapExceeded` after visiting this many DFS nodes.
    pub node_cap: Option<u64>,
}

/// Per-automorphism permutation of dense element indices, precomputed once
/// per enumeration.
fn perm_tables(spec: GroupSpec) -> Result<Vec<Vec<usize>>> {
    let auts = spec.automorphisms()?;
    Ok(auts
        .iter()
        .map(|alpha| {
            (0..spec.order())
                .map(|i| spec.index(alpha.apply(&spec, spec.element_at(i))))
                .collect()
        })
        .collect())
}

/// The lexicographically least sequence in the `Aut(G)`-orbit of `S`
/// (comparing sorted index words). Idempotent and constant on orbits.
pub fn canonical_form(s: &Sequence) -> Result<Sequence> {
    let spec = s.spec();
    let perms = perm_tables(spec)?;
    let word = s.sorted_indices();
    let mut best = word.clone();
    let mut image = word.clone();
    for perm in &perms {
        image.clear();
        image.extend(word.iter().map(|&i| perm[i]));
        image.sort_unstable();
        if image < best {
            std::mem::swap(&mut best, &mut image);
        }
    }
    Ok(Sequence::from_terms(
        spec,
        best.iter().map(|&i| spec.element_at(i)),
    ))
}

/// Number of distinct automorphism images of `S`.
pub fn orbit_size(s: &Sequence) -> Result<usize> {
    let spec = s.spec();
    let perms = perm_tables(spec)?;
    let word = s.sorted_indices();
    let mut images: Vec<Vec<usize>> = perms
        .iter()
        .map(|perm| {
            let mut w: Vec<usize> = word.iter().map(|&i| perm[i]).collect();
            w.sort_unstable();
            w
        })
        .collect();
    images.sort_unstable();
    images.dedup();
    Ok(images.len())
}

struct Dfs<'a> {
    spec: GroupSpec,
    target: usize,
    constraint: Constraint,
    up_to_aut: bool,
    fast: bool,
    perms: &'a [Vec<usize>],
    allowed: &'a [usize],
    nodes: &'a AtomicU64,
    node_cap: Option<u64>,
    capped: bool,
    out: Vec<Vec<usize>>,
    prefix: Vec<usize>,
    inc: IncrementalSubsums,
}

impl<'a> Dfs<'a> {
    /// Constraint check after a push at depth `d`; false means prune.
    fn prefix_ok(&self, d: usize) -> bool {
        match self.constraint {
            Constraint::All => true,
            Constraint::ZeroSumFree => !self.inc.zero_in_lengths(1, d),
            Constraint::NoShortZeroSum(b) => !self.inc.zero_in_lengths(1, (b as usize).min(d)),
            Constraint::NoLongZeroSum(b) => !self.inc.zero_in_lengths(b as usize, d),
            Constraint::MinimalZeroSum => {
                if d < self.target {
                    // every proper prefix of a minimal zero-sum sequence is
                    // zero-sum free
                    !self.inc.zero_in_lengths(1, d)
                } else {
                    !self.inc.zero_in_lengths(1, d - 1)
                        && self.inc.sigma_k(d).contains(self.spec.zero())
                }
            }
        }
    }

    /// Fast-mode orbit pruning: a prefix whose sorted word exceeds one of
    /// its automorphism images cannot extend to a canonical representative
    /// (the image's smallest terms would sort below it).
    fn aut_minimal_prefix(&self) -> bool {
        let mut image = Vec::with_capacity(self.prefix.len());
        for perm in self.perms {
            image.clear();
            image.extend(self.prefix.iter().map(|&i| perm[i]));
            image.sort_unstable();
            if image[..] < self.prefix[..] {
                return false;
            }
        }
        true
    }

    fn leaf_canonical(&self) -> bool {
        let mut image = Vec::with_capacity(self.prefix.len());
        for perm in self.perms {
            image.clear();
            image.extend(self.prefix.iter().map(|&i| perm[i]));
            image.sort_unstable();
            if image[..] < self.prefix[..] {
                return false;
            }
        }
        true
    }

    fn go(&mut self, min_allowed_pos: usize) {
        if self.capped {
            return;
        }
        let d = self.prefix.len();
        if d == self.target {
            if !self.up_to_aut || self.leaf_canonical() {
                self.out.push(self.prefix.clone());
            }
            return;
        }
        for pos in min_allowed_pos..self.allowed.len() {
            let idx = self.allowed[pos];
            let visited = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
            if let Some(cap) = self.node_cap {
                if visited > cap {
                    self.capped = true;
                    return;
                }
            }
            self.prefix.push(idx);
            self.inc.push(self.spec.element_at(idx));
            let keep = self.prefix_ok(d + 1)
                && !(self.fast
                    && self.up_to_aut
                    && d + 1 < self.target
                    && !self.aut_minimal_prefix());
            if keep {
                self.go(pos);
            }
            self.inc.pop();
            self.prefix.pop();
            if self.capped {
                return;
            }
        }
    }
}

/// Runs one enumeration. Output is deterministic: sequences sorted by index
/// word; each orbit appears once (via its least member) when `up_to_aut`.
/// `orbit_size` is 1 for every entry when `up_to_aut` is false.
pub fn enumerate(spec: &EnumSpec, opts: SearchOptions) -> Result<Vec<OrbitRep>> {
    let g = spec.group;
    let perms = if spec.up_to_aut {
        perm_tables(g)?
    } else {
        Vec::new()
    };
    let allowed: Vec<usize> = (0..g.order())
        .filter(|&i| match spec.order_filter {
            Some(o) => g.order_of(g.element_at(i)) == o,
            None => true,
        })
        .collect();
    let nodes = AtomicU64::new(0);
    let fast = opts.mode == Mode::Fast;

    let make_dfs = || Dfs {
        spec: g,
        target: spec.length,
        constraint: spec.constraint,
        up_to_aut: spec.up_to_aut,
        fast,
        perms: &perms,
        allowed: &allowed,
        nodes: &nodes,
        node_cap: opts.node_cap,
        capped: false,
        out: Vec::new(),
        prefix: Vec::new(),
        inc: IncrementalSubsums::new(g),
    };

    let mut words: Vec<Vec<usize>>;
    let mut capped = false;
    if spec.length < 2 {
        let mut dfs = make_dfs();
        dfs.go(0);
        capped = dfs.capped;
        words = dfs.out;
    } else {
        // shard on the first two chosen elements for parallel workers
        let mut roots: Vec<(usize, usize)> = Vec::new();
        for i in 0..allowed.len() {
            for j in i..allowed.len() {
                roots.push((i, j));
            }
        }
        let results: Vec<(Vec<Vec<usize>>, bool)> = roots
            .into_par_iter()
            .map(|(i, j)| {
                let mut dfs = make_dfs();
                let (idx_i, idx_j) = (allowed[i], allowed[j]);
                dfs.prefix.push(idx_i);
                dfs.inc.push(g.element_at(idx_i));
                if dfs.prefix_ok(1) {
                    dfs.prefix.push(idx_j);
                    dfs.inc.push(g.element_at(idx_j));
                    let keep = dfs.prefix_ok(2)
                        && !(fast
                            && spec.up_to_aut
                            && 2 < spec.length
                            && !dfs.aut_minimal_prefix());
                    if keep {
                        dfs.go(j);
                    }
                }
                (dfs.out, dfs.capped)
            })
            .collect();
        words = Vec::new();
        for (mut w, c) in results {
            words.append(&mut w);
            capped |= c;
        }
    }
    words.sort_unstable();
    words.dedup();
    if capped {
        return Err(Error::CapExceeded(format!(
            "enumeration over {} at length {} hit the node cap after {} nodes ({} sequences emitted)",
            g,
            spec.length,
            nodes.load(Ordering::Relaxed),
            words.len()
        )));
    }
    words
        .into_iter()
        .map(|w| {
            let s = Sequence::from_terms(g, w.iter().map(|&i| g.element_at(i)));
            let orbit = if spec.up_to_aut { orbit_size(&s)? } else { 1 };
            Ok(OrbitRep {
                representative: s,
                orbit_size: orbit,
            })
        })
        .collect()
}

/// Result of the Davenport-constant search.
#[derive(Debug, Clone)]
pub struct DavenportResult {
    pub value: usize,
    /// All orbits of minimal zero-sum sequences at the maximal length.
    pub witnesses: Vec<OrbitRep>,
    /// The closed form `n1 + n2 − 1`, reported alongside the search value.
    pub closed_form: usize,
}

/// `D(G)` by increasing-length search. Stop rule: once no zero-sum-free
/// sequence of length `L` exists, no minimal zero-sum sequence of length
/// `> L` can exist (it would contain one as a proper prefix), so the search
/// ends without closed-form assumptions.
pub fn davenport(g: GroupSpec, opts: SearchOptions) -> Result<DavenportResult> {
    let mut value = 0;
    let mut witnesses = Vec::new();
    let mut len = 1usize;
    loop {
        let mzs = enumerate(
            &EnumSpec {
                group: g,
                length: len,
                constraint: Constraint::MinimalZeroSum,
                up_to_aut: true,
                order_filter: None,
            },
            opts,
        )?;
        if !mzs.is_empty() {
            value = len;
            witnesses = mzs;
        }
        let zsf = enumerate(
            &EnumSpec {
                group: g,
                length: len,
                constraint: Constraint::ZeroSumFree,
                up_to_aut: true,
                order_filter: None,
            },
            opts,
        )?;
        if zsf.is_empty() {
            break;
        }
        len += 1;
    }
    Ok(DavenportResult {
        value,
        witnesses,
        closed_form: (g.n1() + g.n2() - 1) as usize,
    })
}

/// Result of the eta-constant search.
#[derive(Debug, Clone)]
pub struct EtaResult {
    pub value: usize,
    /// Orbits of length `value − 1` with no zero-sum of length `≤ exp(G)`.
    pub extremal_witnesses: Vec<OrbitRep>,
    /// The closed form `2·n1 + n2 − 2`.
    pub closed_form: usize,
}

/// `η(G)`: the least `l` such that every sequence of length `l` has a
/// zero-sum subsequence of length in `[1, exp(G)]`. The defining property of
/// the extremal sequences is hereditary, so the first empty length is `η`.
pub fn eta(g: GroupSpec, opts: SearchOptions) -> Result<EtaResult> {
    let exp = g.exponent();
    let mut prev = Vec::new();
    let mut len = 1usize;
    loop {
        let found = enumerate(
            &EnumSpec {
                group: g,
                length: len,
                constraint: Constraint::NoShortZeroSum(exp),
                up_to_aut: true,
                order_filter: None,
            },
            opts,
        )?;
        if found.is_empty() {
            return Ok(EtaResult {
                value: len,
                extremal_witnesses: prev,
                closed_form: (2 * g.n1() + g.n2() - 2) as usize,
            });
        }
        prev = found;
        len += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g22() -> GroupSpec {
        GroupSpec::new(2, 2).unwrap()
    }

    #[test]
    fn canonical_form_is_idempotent_and_orbit_constant() {
        let g = g22();
        let s = Sequence::parse(g, "(1,0) (0,1) (1,1)").unwrap();
        let c = canonical_form(&s).unwrap();
        assert_eq!(c, s); // orbit is fixed setwise
        assert_eq!(canonical_form(&c).unwrap(), c);
        for alpha in g.automorphisms().unwrap().iter() {
            assert_eq!(canonical_form(&s.apply_aut(alpha)).unwrap(), c);
        }
    }

    #[test]
    fn enumerate_minimal_zero_sum_c2c2() {
        let g = g22();
        let orbits = enumerate(
            &EnumSpec {
                group: g,
                length: 3,
                constraint: Constraint::MinimalZeroSum,
                up_to_aut: true,
                order_filter: None,
            },
            SearchOptions::default(),
        )
        .unwrap();
        assert_eq!(orbits.len(), 1);
        assert_eq!(
            orbits[0].representative,
            Sequence::parse(g, "(0,1) (1,0) (1,1)").unwrap()
        );
        assert_eq!(orbits[0].orbit_size, 1);
    }

    #[test]
    fn enumerate_length_zero() {
        let g = g22();
        let all = enumerate(
            &EnumSpec {
                group: g,
                length: 0,
                constraint: Constraint::All,
                up_to_aut: false,
                order_filter: None,
            },
            SearchOptions::default(),
        )
        .unwrap();
        assert_eq!(all.len(), 1);
        assert!(all[0].representative.is_empty());
    }

    /// Cross-check against a naive filter of all multisets.
    #[test]
    fn enumeration_count_matches_naive_filter() {
        let g = GroupSpec::new(3, 3).unwrap();
        let fast = enumerate(
            &EnumSpec {
                group: g,
                length: 5,
                constraint: Constraint::MinimalZeroSum,
                up_to_aut: false,
                order_filter: None,
            },
            SearchOptions::default(),
        )
        .unwrap();
        // naive: filter all non-decreasing index words of length 5
        use itertools::Itertools;
        let naive = (0..g.order())
            .combinations_with_replacement(5)
            .filter(|word| {
                let s = Sequence::from_terms(g, word.iter().map(|&i| g.element_at(i)));
                crate::zerosum::is_minimal_zero_sum(&s).unwrap()
            })
            .count();
        assert_eq!(fast.len(), naive);
    }

    #[test]
    fn orbit_sizes_partition_the_full_count() {
        let g = GroupSpec::new(3, 3).unwrap();
        let spec = |up| EnumSpec {
            group: g,
            length: 5,
            constraint: Constraint::MinimalZeroSum,
            up_to_aut: up,
            order_filter: None,
        };
        let orbits = enumerate(&spec(true), SearchOptions::default()).unwrap();
        let all = enumerate(&spec(false), SearchOptions::default()).unwrap();
        let total: usize = orbits.iter().map(|o| o.orbit_size).sum();
        assert_eq!(total, all.len());
    }

    #[test]
    fn fast_and_audit_agree() {
        let g = GroupSpec::new(2, 4).unwrap();
        for constraint in [Constraint::MinimalZeroSum, Constraint::ZeroSumFree] {
            for len in 1..=5 {
                let spec = EnumSpec {
                    group: g,
                    length: len,
                    constraint,
                    up_to_aut: true,
                    order_filter: None,
                };
                let fast = enumerate(
                    &spec,
                    SearchOptions {
                        mode: Mode::Fast,
                        node_cap: None,
                    },
                )
                .unwrap();
                let audit = enumerate(
                    &spec,
                    SearchOptions {
                        mode: Mode::Audit,
                        node_cap: None,
                    },
                )
                .unwrap();
                assert_eq!(fast, audit, "length {len}");
            }
        }
    }

    #[test]
    fn davenport_small_groups() {
        for (n1, n2, expect) in [(2, 2, 3), (3, 3, 5), (2, 4, 5)] {
            let g = GroupSpec::new(n1, n2).unwrap();
            let r = davenport(g, SearchOptions::default()).unwrap();
            assert_eq!(r.value, expect, "C{n1}xC{n2}");
            assert_eq!(r.value, r.closed_form);
            assert!(!r.witnesses.is_empty());
        }
    }

    #[test]
    fn eta_small_groups() {
        for (n1, n2, expect) in [(2, 2, 4), (3, 3, 7)] {
            let g = GroupSpec::new(n1, n2).unwrap();
            let r = eta(g, SearchOptions::default()).unwrap();
            assert_eq!(r.value, expect, "C{n1}xC{n2}");
            assert_eq!(r.value, r.closed_form);
        }
    }

    #[test]
    fn eta_witness_has_no_short_zero_sum() {
        let g = g22();
        let r = eta(g, SearchOptions::default()).unwrap();
        let w = &r.extremal_witnesses[0].representative;
        assert_eq!(w.len(), r.value - 1);
        assert!(crate::zerosum::find_zero_sum_subsequence(w, 1, g.exponent() as usize)
            .unwrap()
            .is_none());
    }

    #[test]
    fn node_cap_aborts() {
        let g = GroupSpec::new(3, 3).unwrap();
        let err = enumerate(
            &EnumSpec {
                group: g,
                length: 5,
                constraint: Constraint::All,
                up_to_aut: false,
                order_filter: None,
            },
            SearchOptions {
                mode: Mode::Audit,
                node_cap: Some(10),
            },
        )
        .unwrap_err();
        assert!(matches!(err, Error::CapExceeded(_)));
    }

    #[test]
    fn order_filter_restricts_terms() {
        let g = GroupSpec::new(2, 4).unwrap();
        let orbits = enumerate(
            &EnumSpec {
                group: g,
                length: 2,
                constraint: Constraint::All,
                up_to_aut: false,
                order_filter: Some(4),
            },
            SearchOptions::default(),
        )
        .unwrap();
        for o in &orbits {
            for t in o.representative.distinct() {
                assert_eq!(g.order_of(t), 4);
            }
        }
    }
}
