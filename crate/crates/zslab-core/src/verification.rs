//! Brute-force checks of the supporting theorems and lemmas: the
//! Erdős–Ginzburg–Ziv theorem, the sumset lower bound for sequences with no
//! zero-sum of full-order length, the Υ-perturbation lemmas over
//! `C_m ⊕ C_m`, the support/partial-sum exchange lemmas, and the
//! decomposition properties of maximal minimal zero-sum sequences under the
//! multiplication-by-m map. Every check enumerates its hypothesis domain
//! exhaustively.

use itertools::Itertools;
use rayon::prelude::*;
use serde_json::json;

use crate::decomposition::{find_decompositions, mult_by_m, DecompFilter};
use crate::group::{GroupElement, GroupSpec};
use crate::report::{CheckReport, ReportBuilder};
use crate::search::{enumerate, Constraint, EnumSpec, SearchOptions};
use crate::sequence::{Sequence, SubsumTable};
use crate::structure::{upsilon_sequence, UpsilonClass, UpsilonTable};
use crate::{Error, Result};

/// All multisets of the given length over the group, as non-decreasing
/// index words.
fn multiset_words(spec: GroupSpec, len: usize) -> Vec<Vec<usize>> {
    (0..spec.order())
        .combinations_with_replacement(len)
        .collect()
}

fn word_sequence(spec: GroupSpec, word: &[usize]) -> Sequence {
    Sequence::from_terms(spec, word.iter().map(|&i| spec.element_at(i)))
}

/// Cyclic groups are embedded as `C_1 ⊕ C_n`.
fn cyclic(n: u32) -> Result<GroupSpec> {
    GroupSpec::new(1, n)
}

fn merge(
    mut a: (u64, Vec<String>),
    b: (u64, Vec<String>),
) -> (u64, Vec<String>) {
    a.0 += b.0;
    a.1.extend(b.1);
    a
}

/// Part 1: every sequence of length `2n−1` over `C_n` has a zero-sum
/// subsequence of length exactly `n`. Part 2: if a sequence of length
/// `2n−2` has none, it is `g^{n−1}·h^{n−1}` with `ord(g−h) = n`.
pub fn check_egz(n: u32, part: u8) -> Result<CheckReport> {
    let spec = cyclic(n)?;
    let mut b = ReportBuilder::new("egz");
    b.set_param("n", n);
    b.set_param("part", part);
    let len = match part {
        1 => 2 * n as usize - 1,
        2 => 2 * n as usize - 2,
        _ => return Err(Error::Precondition(format!("part must be 1 or 2, got {part}"))),
    };
    let words = multiset_words(spec, len);
    let (cases, cex) = words
        .par_iter()
        .map(|word| {
            let s = word_sequence(spec, word);
            let table = SubsumTable::build(&s).unwrap();
            let zero_in_n = table.sigma_k(n as usize).contains(spec.zero());
            let bad = match part {
                1 => !zero_in_n,
                _ => {
                    if zero_in_n {
                        false // hypothesis vacuous
                    } else {
                        let supp: Vec<GroupElement> = s.distinct().collect();
                        let extremal = supp.len() == 2
                            && supp.iter().all(|&g| s.multiplicity(g) == n - 1)
                            && spec.order_of(spec.sub(supp[0], supp[1])) == n;
                        !extremal
                    }
                }
            };
            let cex = if bad { vec![s.to_string()] } else { Vec::new() };
            (1u64, cex)
        })
        .reduce(|| (0, Vec::new()), merge);
    b.count_cases(cases);
    for c in cex {
        b.counterexample(c);
    }
    Ok(b.finish())
}

/// For every sequence with `|G|+1 ≤ |S| ≤ size_cap`, no zero-sum
/// subsequence of length `|G|`, and every `k ≤ |supp(S)|` with
/// `h(S) ≤ |G|−k+2`: the partial-sum set of length `|G|` has at least
/// `|S|−|G|+k−1` elements.
pub fn check_hamidoune(g: GroupSpec, size_cap: usize) -> Result<CheckReport> {
    let order = g.order() as usize;
    let mut b = ReportBuilder::new("hamidoune");
    b.set_param("group", g.to_string());
    b.set_param("size_cap", json!(size_cap as u64));
    let mut sequences: u64 = 0;
    for len in (order + 1)..=size_cap {
        let words = multiset_words(g, len);
        sequences += words.len() as u64;
        let (cases, cex) = words
            .par_iter()
            .map(|word| {
                let s = word_sequence(g, word);
                let table = SubsumTable::build(&s).unwrap();
                let sums = table.sigma_k(order);
                if sums.contains(g.zero()) {
                    return (0u64, Vec::new());
                }
                let supp = s.support_size();
                let height = s.height() as usize;
                let mut cases = 0u64;
                let mut cex = Vec::new();
                for k in 1..=supp {
                    if height > order - k + 2 {
                        continue;
                    }
                    cases += 1;
                    let bound = s.len() as i64 - order as i64 + k as i64 - 1;
                    if (sums.len() as i64) < bound {
                        cex.push(format!("{s} with k = {k}"));
                    }
                }
                (cases, cex)
            })
            .reduce(|| (0, Vec::new()), merge);
        b.count_cases(cases);
        for c in cex {
            b.counterexample(c);
        }
    }
    b.set_param("sequences", json!(sequences));
    Ok(b.finish())
}

/// Precomputed per-sequence data for the exchange checks.
struct ExchangeEntry {
    seq: Sequence,
    supp: Vec<GroupElement>,
    sigma1: Vec<GroupElement>,
    sigma2: Vec<GroupElement>,
    table: SubsumTable,
}

/// Scans a difference set `A − B` and reports its nonzero content:
/// `Ok(None)` if empty, `Ok(Some(d))` if `{d}`, `Err(())` if larger.
fn nonzero_difference(
    g: GroupSpec,
    a: &[GroupElement],
    b: &[GroupElement],
) -> std::result::Result<Option<GroupElement>, ()> {
    let mut found: Option<GroupElement> = None;
    for &x in a {
        for &y in b {
            let d = g.sub(x, y);
            if d == g.zero() {
                continue;
            }
            match found {
                None => found = Some(d),
                Some(f) if f == d => {}
                Some(_) => return Err(()),
            }
        }
    }
    Ok(found)
}

/// Verifies the support-difference conclusions (for every `a` of order
/// greater than 2) and the small-partial-sum-set conclusions over all
/// sequence pairs up to the length cap.
pub fn check_exchange_lemmas(g: GroupSpec, len_cap: usize) -> Result<CheckReport> {
    let mut b = ReportBuilder::new("exchange");
    b.set_param("group", g.to_string());
    b.set_param("len_cap", json!(len_cap as u64));
    let mut entries: Vec<ExchangeEntry> = Vec::new();
    for len in 1..=len_cap {
        for word in multiset_words(g, len) {
            let seq = word_sequence(g, &word);
            let table = SubsumTable::build(&seq).unwrap();
            entries.push(ExchangeEntry {
                supp: seq.distinct().collect(),
                sigma1: table.sigma_k(1).iter().collect(),
                sigma2: if seq.len() >= 2 {
                    table.sigma_k(2).iter().collect()
                } else {
                    Vec::new()
                },
                table,
                seq,
            });
        }
    }
    let long_order: Vec<GroupElement> = g.elements().filter(|&a| g.order_of(a) > 2).collect();

    // support-difference lemma, over ordered pairs with |supp S| >= |supp T|
    let (pair_cases, pair_cex) = entries
        .par_iter()
        .map(|es| {
            let mut cases = 0u64;
            let mut cex = Vec::new();
            for et in &entries {
                if es.supp.len() < et.supp.len() {
                    continue;
                }
                cases += 1;
                let s = &es.seq;
                let t = &et.seq;
                let d = nonzero_difference(g, &es.supp, &et.supp);

                // clause 1: supp(S) - supp(T) = {0}
                if d == Ok(None) {
                    let ok = es.supp.len() == 1 && et.supp == es.supp;
                    if !ok {
                        cex.push(format!("clause 3.4.1: S = {s}, T = {t}"));
                    }
                }
                // clause 2: supp(S) - supp(T) in {0, a}
                if let Ok(d) = d {
                    let candidates: Vec<GroupElement> = match d {
                        None => long_order.clone(),
                        Some(v) if g.order_of(v) > 2 => vec![v],
                        Some(_) => Vec::new(),
                    };
                    for a in candidates {
                        let ok = et.supp.len() == 1 && {
                            let base = et.supp[0];
                            es.supp
                                .iter()
                                .all(|&x| x == base || x == g.add(base, a))
                        };
                        if !ok {
                            cex.push(format!("clause 3.4.2: S = {s}, T = {t}, a = {a}"));
                        }
                    }
                }
                // clause 3: (Sigma_1 union Sigma_2) differences in {0, a}
                if s.len() >= 2 && t.len() >= 2 {
                    let e = nonzero_difference(g, &es.sigma1, &et.sigma1).and_then(|d1| {
                        match (d1, nonzero_difference(g, &es.sigma2, &et.sigma2)?) {
                            (x, None) => Ok(x),
                            (None, y) => Ok(y),
                            (Some(x), Some(y)) if x == y => Ok(Some(x)),
                            _ => Err(()),
                        }
                    });
                    if let Ok(e) = e {
                        let candidates: Vec<GroupElement> = match e {
                            None => long_order.clone(),
                            Some(v) if g.order_of(v) > 2 => vec![v],
                            Some(_) => Vec::new(),
                        };
                        for a in candidates {
                            let ok = et.supp.len() == 1 && {
                                let base = et.supp[0];
                                let shifted = g.add(base, a);
                                s.multiplicity(base) == s.len() as u32
                                    || (s.multiplicity(base) == s.len() as u32 - 1
                                        && s.multiplicity(shifted) == 1)
                            };
                            if !ok {
                                cex.push(format!("clause 3.4.3: S = {s}, T = {t}, a = {a}"));
                            }
                        }
                    }
                }
            }
            (cases, cex)
        })
        .reduce(|| (0, Vec::new()), merge);
    b.count_cases(pair_cases);
    for c in pair_cex {
        b.counterexample(c);
    }

    // small-partial-sum-set lemma, over (S, k)
    for es in &entries {
        let s = &es.seq;
        let len = s.len();
        for k in 1..len {
            b.count_case();
            let sums: Vec<GroupElement> = es.table.sigma_k(k).iter().collect();
            if sums.len() <= 2 && s.support_size() > 2 {
                b.counterexample(format!("clause 3.5.1: S = {s}, k = {k}"));
            }
            if (2..=len.saturating_sub(2)).contains(&k) && sums.len() <= 2 {
                let coset_of_two = sums.len() == 2 && {
                    let d = g.sub(sums[0], sums[1]);
                    g.order_of(d) == 2
                };
                if !coset_of_two {
                    let ok = s.support_size() == 1
                        || (s.support_size() == 2 && s.height() as usize == len - 1);
                    if !ok {
                        b.counterexample(format!("clause 3.5.2: S = {s}, k = {k}"));
                    }
                }
            }
            if sums.len() <= 1 && s.support_size() > 1 {
                b.counterexample(format!("clause 3.5.3: S = {s}, k = {k}"));
            }
        }
    }
    Ok(b.finish())
}

/// Which perturbation lemma family to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PerturbationLemma {
    /// Perturbations of arbitrary unique-peak members (three clauses).
    L31,
    /// Perturbations of `f1^{m−1} f2^{m−1} (f1+f2)` landing in Υ
    /// (five clauses).
    L32,
    /// The same perturbations landing in the non-unique-peak class
    /// (five clauses).
    L33,
}

impl PerturbationLemma {
    pub fn parse(text: &str) -> Result<PerturbationLemma> {
        match text {
            "3.1" => Ok(PerturbationLemma::L31),
            "3.2" => Ok(PerturbationLemma::L32),
            "3.3" => Ok(PerturbationLemma::L33),
            other => Err(Error::Precondition(format!(
                "unknown perturbation lemma {other:?}; expected 3.1, 3.2 or 3.3"
            ))),
        }
    }

    fn label(self) -> &'static str {
        match self {
            PerturbationLemma::L31 => "3.1",
            PerturbationLemma::L32 => "3.2",
            PerturbationLemma::L33 => "3.3",
        }
    }
}

/// Sorted index word with two indices removed and two inserted; `word` must
/// contain the removed indices.
fn perturbed_word(word: &[usize], remove: [usize; 2], insert: [usize; 2]) -> Vec<usize> {
    let mut out = Vec::with_capacity(word.len());
    let mut skip = remove;
    'outer: for &w in word {
        for s in skip.iter_mut() {
            if *s == w {
                *s = usize::MAX;
                continue 'outer;
            }
        }
        out.push(w);
    }
    debug_assert_eq!(out.len(), word.len() - 2);
    for ins in insert {
        let pos = out.partition_point(|&v| v < ins);
        out.insert(pos, ins);
    }
    out
}

/// Exhaustive check of one perturbation lemma over `C_m ⊕ C_m`, `m ≥ 4`:
/// every basis, every admissible sequence, every perturbation offset `g`,
/// every clause. Hypothesis (the perturbed sequence lies in the asserted
/// class) is decided by the membership table, not by the lemma's syntax.
pub fn check_perturbation_lemmas(m: u32, which: PerturbationLemma) -> Result<CheckReport> {
    if m < 4 {
        return Err(Error::Precondition(format!(
            "perturbation lemmas require m >= 4, got {m}"
        )));
    }
    let spec = GroupSpec::new(m, m)?;
    let table = UpsilonTable::build(spec)?;
    let mut b = ReportBuilder::new("perturbation");
    b.set_param("m", m);
    b.set_param("lemma", which.label());
    let bases: Vec<(GroupElement, GroupElement)> = spec
        .elements()
        .flat_map(|f1| spec.elements().map(move |f2| (f1, f2)))
        .filter(|&(f1, f2)| spec.is_basis(f1, f2))
        .collect();
    b.set_param("bases", json!(bases.len() as u64));
    let all_g: Vec<GroupElement> = spec.elements().collect();
    let in_span = |h: GroupElement, f: GroupElement| -> bool {
        (0..m as i64).any(|i| spec.smul(i, f) == h)
    };

    let (cases, cex) = bases
        .par_iter()
        .map(|&(f1, f2)| {
            let mut cases = 0u64;
            let mut cex: Vec<String> = Vec::new();
            let mut check = |word: &[usize],
                             remove: [GroupElement; 2],
                             insert: [GroupElement; 2],
                             want_nu_only: bool,
                             conclusion: bool,
                             describe: &dyn Fn() -> String| {
                cases += 1;
                let w = perturbed_word(
                    word,
                    [spec.index(remove[0]), spec.index(remove[1])],
                    [spec.index(insert[0]), spec.index(insert[1])],
                );
                let class = table.class_word(&w);
                let in_class = if want_nu_only {
                    class == UpsilonClass::Nu
                } else {
                    class != UpsilonClass::NotIn
                };
                if in_class && !conclusion {
                    cex.push(describe());
                }
            };
            match which {
                PerturbationLemma::L31 => {
                    // all coefficient vectors with the defining congruence
                    let mut x = vec![0u32; m as usize];
                    loop {
                        let partial: u32 =
                            x[..m as usize - 1].iter().sum::<u32>() % m;
                        x[m as usize - 1] = (1 + m - partial % m) % m;
                        let s = upsilon_sequence(spec, f1, f2, &x);
                        let word = s.sorted_indices();
                        if table.class_word(&word) == UpsilonClass::U {
                            let term =
                                |xv: u32| spec.add(spec.smul(xv as i64, f1), f2);
                            for &g in &all_g {
                                let neg = spec.neg(g);
                                // clause 1
                                check(
                                    &word,
                                    [f1, f1],
                                    [spec.add(f1, g), spec.add(f1, neg)],
                                    false,
                                    g == spec.zero(),
                                    &|| format!("clause 3.1.1: S = {s}, g = {g}"),
                                );
                                // clause 2, per product term
                                for j in 0..m as usize {
                                    let tj = term(x[j]);
                                    let alt = spec.add(
                                        spec.smul(x[j] as i64 - 1, f1),
                                        f2,
                                    );
                                    check(
                                        &word,
                                        [f1, tj],
                                        [spec.add(f1, g), spec.sub(tj, g)],
                                        false,
                                        g == spec.zero() || g == alt,
                                        &|| {
                                            format!(
                                                "clause 3.1.2: S = {s}, g = {g}, j = {j}"
                                            )
                                        },
                                    );
                                }
                                // clause 3, per unordered pair (g and -g
                                // cover both orders)
                                for j in 0..m as usize {
                                    for k in (j + 1)..m as usize {
                                        let tj = term(x[j]);
                                        let tk = term(x[k]);
                                        check(
                                            &word,
                                            [tj, tk],
                                            [spec.add(tj, g), spec.sub(tk, g)],
                                            false,
                                            in_span(g, f1),
                                            &|| {
                                                format!(
                                                "clause 3.1.3: S = {s}, g = {g}, j = {j}, k = {k}"
                                            )
                                            },
                                        );
                                    }
                                }
                            }
                        }
                        // advance the free digits
                        let mut i = 0;
                        loop {
                            if i == m as usize - 1 {
                                break;
                            }
                            x[i] += 1;
                            if x[i] < m {
                                break;
                            }
                            x[i] = 0;
                            i += 1;
                        }
                        if i == m as usize - 1 {
                            break;
                        }
                    }
                }
                PerturbationLemma::L32 | PerturbationLemma::L33 => {
                    let nu_only = which == PerturbationLemma::L33;
                    let f12 = spec.add(f1, f2);
                    let mut s = Sequence::empty(spec);
                    s.push(f1, m - 1);
                    s.push(f2, m - 1);
                    s.push(f12, 1);
                    let word = s.sorted_indices();
                    debug_assert_eq!(table.class_word(&word), UpsilonClass::Nu);
                    let alt = spec.add(spec.neg(f1), f2);
                    for &g in &all_g {
                        let neg = spec.neg(g);
                        let rows: [( [GroupElement; 2], [GroupElement; 2], bool, &str); 5] = [
                            (
                                [f1, f1],
                                [spec.add(f1, g), spec.add(f1, neg)],
                                if nu_only { g == spec.zero() } else { in_span(g, f2) },
                                "1",
                            ),
                            (
                                [f2, f2],
                                [spec.add(f2, g), spec.add(f2, neg)],
                                if nu_only { g == spec.zero() } else { in_span(g, f1) },
                                "2",
                            ),
                            (
                                [f1, f2],
                                [spec.add(f1, g), spec.sub(f2, g)],
                                g == spec.zero() || g == alt,
                                "3",
                            ),
                            (
                                [f1, f12],
                                [spec.add(f1, g), spec.sub(f12, g)],
                                if nu_only {
                                    g == spec.zero() || g == f2
                                } else {
                                    in_span(g, f2)
                                },
                                "4",
                            ),
                            (
                                [f2, f12],
                                [spec.add(f2, g), spec.sub(f12, g)],
                                if nu_only {
                                    g == spec.zero() || g == f1
                                } else {
                                    in_span(g, f1)
                                },
                                "5",
                            ),
                        ];
                        for (remove, insert, conclusion, clause) in rows {
                            check(&word, remove, insert, nu_only, conclusion, &|| {
                                format!(
                                    "clause {}.{clause}: S = {s}, g = {g}",
                                    which.label()
                                )
                            });
                        }
                    }
                }
            }
            (cases, cex)
        })
        .reduce(|| (0, Vec::new()), merge);
    b.count_cases(cases);
    for c in cex {
        b.counterexample(c);
    }
    Ok(b.finish())
}

/// Can `s` be written as a product of exactly `k` nonempty zero-sum
/// subsequences? Exhaustive backtracking; the first block always contains
/// the smallest remaining term so each set partition is tried once.
fn is_product_of_zero_sums(s: &Sequence, k: usize) -> bool {
    if s.is_empty() {
        return k == 0;
    }
    if k == 0 {
        return false;
    }
    let g = s.spec();
    let counts: Vec<(GroupElement, u32)> = s.counts().collect();
    // sub-multisets containing the first term, with zero sum
    let mut choice: Vec<u32> = vec![0; counts.len()];
    choice[0] = 1;
    loop {
        let sum = counts
            .iter()
            .zip(&choice)
            .fold(g.zero(), |acc, (&(e, _), &c)| g.add(acc, g.smul(c as i64, e)));
        if sum == g.zero() {
            let mut block = Sequence::empty(g);
            for (&(e, _), &c) in counts.iter().zip(&choice) {
                block.push(e, c);
            }
            let rest = s.quotient(&block).unwrap();
            if is_product_of_zero_sums(&rest, k - 1) {
                return true;
            }
        }
        // odometer over counts, first entry locked at >= 1
        let mut i = 0;
        loop {
            choice[i] += 1;
            if choice[i] <= counts[i].1 {
                break;
            }
            choice[i] = if i == 0 { 1 } else { 0 };
            i += 1;
            if i == counts.len() {
                return false;
            }
        }
    }
}

/// For every maximal-length minimal zero-sum sequence over
/// `C_{mn} ⊕ C_{mn}` (up to automorphism, which every property respects):
/// a fixed-block-length decomposition exists, the image under
/// multiplication by `m` is not a product of `2m` zero-sum subsequences,
/// its short zero-sum subsequences all have length exactly `n`, and no
/// term maps to zero.
pub fn check_lemma_2_5(m: u32, n: u32, opts: SearchOptions) -> Result<CheckReport> {
    let spec = GroupSpec::new(m * n, m * n)?;
    let phi = mult_by_m(spec, m)?;
    let mut b = ReportBuilder::new("lemma_2_5");
    b.set_param("m", m);
    b.set_param("n", n);
    let orbits = enumerate(
        &EnumSpec {
            group: spec,
            length: 2 * (m * n) as usize - 1,
            constraint: Constraint::MinimalZeroSum,
            up_to_aut: true,
            order_filter: None,
        },
        opts,
    )?;
    b.set_param("orbits", json!(orbits.len() as u64));
    let (cases, cex) = orbits
        .par_iter()
        .map(|o| {
            let s = &o.representative;
            let mut cex = Vec::new();
            let img = s.map(spec, |x| phi.apply(x));
            if find_decompositions(s, m, DecompFilter::Omega).unwrap().is_empty() {
                cex.push(format!("no fixed-length decomposition: S = {s}"));
            }
            if is_product_of_zero_sums(&img, 2 * m as usize) {
                cex.push(format!("image splits into 2m zero-sum parts: S = {s}"));
            }
            if n >= 2 {
                let table = SubsumTable::build(&img).unwrap();
                if table.zero_in_lengths(1, n as usize - 1) {
                    cex.push(format!("image has a zero-sum shorter than n: S = {s}"));
                }
            }
            if img.multiplicity(spec.zero()) > 0 {
                cex.push(format!("a term of S lies in the kernel: S = {s}"));
            }
            (1u64, cex)
        })
        .reduce(|| (0, Vec::new()), merge);
    b.count_cases(cases);
    for c in cex {
        b.counterexample(c);
    }
    Ok(b.finish())
}
