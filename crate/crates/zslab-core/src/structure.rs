//! Structural taxonomy of minimal zero-sum sequences: the basis-form family
//! Υ with its `u`/`nu` split, Properties B and C, the four equivalent
//! statements about extremal sequences over `C_n ⊕ C_n`, and the two-form
//! classification at the maximal length `D(G) = n1 + n2 − 1`.

use std::collections::HashMap;

use serde_json::json;

use crate::group::{GroupElement, GroupSpec};
use crate::report::{CheckReport, ReportBuilder, Verdict};
use crate::search::{enumerate, Constraint, EnumSpec, SearchOptions};
use crate::sequence::Sequence;
use crate::zerosum::is_minimal_zero_sum;
use crate::{Error, Result};

/// Exhibits `S = e1^{n−1} · ∏_ν (x_ν·e1 + e2)` with `Σ x_ν ≡ 1 (mod n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpsilonWitness {
    pub basis: (GroupElement, GroupElement),
    pub x: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpsilonClass {
    NotIn,
    /// In Υ with a unique term of multiplicity `n−1`.
    U,
    /// In Υ with at least two terms of multiplicity `n−1`.
    Nu,
}

/// Builds `e1^{n−1} · ∏ (x_ν·e1 + e2)`.
pub fn upsilon_sequence(
    spec: GroupSpec,
    e1: GroupElement,
    e2: GroupElement,
    x: &[u32],
) -> Sequence {
    let n = spec.n2() as usize;
    let mut s = Sequence::empty(spec);
    s.push(e1, (n - 1) as u32);
    for &xv in x {
        s.push(spec.add(spec.smul(xv as i64, e1), e2), 1);
    }
    s
}

fn require_square(spec: GroupSpec) -> Result<u32> {
    if spec.n1() != spec.n2() {
        return Err(Error::Shape(format!(
            "{spec} is not of the form C_n x C_n"
        )));
    }
    Ok(spec.n1())
}

/// Searches for a basis presentation of `S` in Υ: candidates `e1` are the
/// terms of multiplicity `≥ n−1`, completed to a basis in element-index
/// order; the first witness found is returned. `None` iff `S ∉ Υ(G)`.
pub fn upsilon_membership(s: &Sequence) -> Result<Option<UpsilonWitness>> {
    let spec = s.spec();
    let n = require_square(spec)?;
    if n < 2 || s.len() != 2 * n as usize - 1 || !is_minimal_zero_sum(s)? {
        return Ok(None);
    }
    for e1 in s.distinct() {
        if s.multiplicity(e1) < n - 1 {
            continue;
        }
        for e2 in spec.elements() {
            if !spec.is_basis(e1, e2) {
                continue;
            }
            let mut rest = s.clone();
            rest.remove(e1, n - 1).unwrap();
            if let Some(x) = product_coefficients(spec, &rest, e1, e2, n) {
                let total: u64 = x.iter().map(|&v| v as u64).sum();
                if total % n as u64 == 1 % n as u64 {
                    return Ok(Some(UpsilonWitness { basis: (e1, e2), x }));
                }
            }
        }
    }
    Ok(None)
}

/// Writes every term of `rest` as `x·e1 + offset·e2` with `offset = 1`,
/// i.e. finds `x_ν ∈ [0, limit−1]` with `term = x_ν·e1 + e2`; `None` if any
/// term is not of that shape. Coefficients are listed in term index order.
fn product_coefficients(
    spec: GroupSpec,
    rest: &Sequence,
    e1: GroupElement,
    e2: GroupElement,
    limit: u32,
) -> Option<Vec<u32>> {
    let mut xs = Vec::with_capacity(rest.len());
    for (t, mult) in rest.counts() {
        let diff = spec.sub(t, e2);
        let x = (0..limit).find(|&x| spec.smul(x as i64, e1) == diff)?;
        for _ in 0..mult {
            xs.push(x);
        }
    }
    Some(xs)
}

/// Υ-membership refined by uniqueness of the maximal-multiplicity term.
pub fn upsilon_class(s: &Sequence) -> Result<UpsilonClass> {
    if upsilon_membership(s)?.is_none() {
        return Ok(UpsilonClass::NotIn);
    }
    let n = s.spec().n1();
    let peak = s.counts().filter(|&(_, c)| c == n - 1).count();
    Ok(if peak == 1 {
        UpsilonClass::U
    } else {
        UpsilonClass::Nu
    })
}

/// Precomputed table of all of Υ(C_n ⊕ C_n) keyed by sorted index word,
/// for hot membership tests (the perturbation checks).
pub struct UpsilonTable {
    spec: GroupSpec,
    map: HashMap<Vec<usize>, UpsilonClass>,
}

impl UpsilonTable {
    /// Generates Υ by running over every ordered basis and every coefficient
    /// vector with `Σ x_ν ≡ 1 (mod n)`.
    pub fn build(spec: GroupSpec) -> Result<UpsilonTable> {
        let n = require_square(spec)?;
        let mut map = HashMap::new();
        let auts = spec.automorphisms()?;
        for alpha in auts.iter() {
            let (e1, e2) = (alpha.image_e1, alpha.image_e2);
            if !spec.is_basis(e1, e2) {
                continue;
            }
            let mut x = vec![0u32; n as usize];
            // free choice of x_1..x_{n-1}; x_n fixed by the congruence
            let mut counter = vec![0u32; (n - 1) as usize];
            loop {
                let partial: u64 = counter.iter().map(|&v| v as u64).sum();
                let last = (1i64 - partial as i64).rem_euclid(n as i64) as u32;
                x[..(n - 1) as usize].copy_from_slice(&counter);
                x[(n - 1) as usize] = last;
                let s = upsilon_sequence(spec, e1, e2, &x);
                let word = s.sorted_indices();
                map.entry(word).or_insert_with(|| {
                    let peak = s.counts().filter(|&(_, c)| c == n - 1).count();
                    if peak == 1 {
                        UpsilonClass::U
                    } else {
                        UpsilonClass::Nu
                    }
                });
                if !advance(&mut counter, n) {
                    break;
                }
            }
        }
        Ok(UpsilonTable { spec, map })
    }

    pub fn class(&self, s: &Sequence) -> UpsilonClass {
        debug_assert_eq!(s.spec(), self.spec);
        self.class_word(&s.sorted_indices())
    }

    /// Lookup by sorted index word, avoiding sequence construction in hot
    /// loops.
    pub fn class_word(&self, word: &[usize]) -> UpsilonClass {
        self.map.get(word).copied().unwrap_or(UpsilonClass::NotIn)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// All members, sorted by index word.
    pub fn members(&self) -> Vec<Sequence> {
        let mut words: Vec<_> = self.map.keys().cloned().collect();
        words.sort_unstable();
        words
            .into_iter()
            .map(|w| Sequence::from_terms(self.spec, w.iter().map(|&i| self.spec.element_at(i))))
            .collect()
    }
}

/// Every minimal zero-sum sequence of length `2n−1` over `C_n ⊕ C_n` has a
/// term of multiplicity `n−1` — checked jointly with the equivalent set
/// identity "extremal minimal zero-sum sequences = Υ".
pub fn check_property_b(n: u32, opts: SearchOptions) -> Result<CheckReport> {
    let spec = GroupSpec::new(n, n)?;
    let mut b = ReportBuilder::new("property_b").param("n", n);
    let orbits = enumerate(
        &EnumSpec {
            group: spec,
            length: 2 * n as usize - 1,
            constraint: Constraint::MinimalZeroSum,
            up_to_aut: true,
            order_filter: None,
        },
        opts,
    )?;
    for o in &orbits {
        b.count_case();
        let s = &o.representative;
        let has_peak = s.counts().any(|(_, c)| c == n - 1);
        let in_upsilon = upsilon_membership(s)?.is_some();
        if !has_peak || !in_upsilon {
            b.counterexample(s.to_string());
        }
    }
    b.set_param("orbits", orbits.len() as u64);
    Ok(b.finish())
}

/// True iff `S = T^{n−1}` for some `T` (necessarily of length
/// `|S| / (n−1)`): every multiplicity divisible by `n−1`.
fn is_power_of_short(s: &Sequence, n: u32) -> bool {
    n >= 2 && s.counts().all(|(_, c)| c % (n - 1) == 0)
}

/// Every sequence of length `η(G)−1 = 3n−3` over `C_n ⊕ C_n` with no
/// zero-sum subsequence of length in `[1, n]` has the shape `T^{n−1}` with
/// `|T| = 3`.
pub fn check_property_c(n: u32, opts: SearchOptions) -> Result<CheckReport> {
    let spec = GroupSpec::new(n, n)?;
    let mut b = ReportBuilder::new("property_c").param("n", n);
    let orbits = enumerate(
        &EnumSpec {
            group: spec,
            length: 3 * (n as usize - 1),
            constraint: Constraint::NoShortZeroSum(n),
            up_to_aut: true,
            order_filter: None,
        },
        opts,
    )?;
    for o in &orbits {
        b.count_case();
        let s = &o.representative;
        if !is_power_of_short(s, n) || s.len() != 3 * (n as usize - 1) {
            b.counterexample(s.to_string());
        }
    }
    Ok(b.finish())
}

/// Evaluates the four equivalent statements about `C_n ⊕ C_n` as
/// independent exhaustive checks:
///
/// * (a) `|S| = 3n−3` with no zero-sum subsequence of length `≥ n` forces
///   `0^{n−1}·a^{n−2} | S` for some `a`;
/// * (b) zero-sum free with `|S| = 2n−2` forces `a^{n−2} | S`;
/// * (c) minimal zero-sum with `|S| = 2n−1` forces `a^{n−1} | S`;
/// * (d) minimal zero-sum with `|S| = 2n−1` lies in Υ.
///
/// The verdict is `holds` iff all four are true; the individual booleans are
/// reported in the params.
pub fn check_lemma_2_3_equivalence(n: u32, opts: SearchOptions) -> Result<CheckReport> {
    let spec = GroupSpec::new(n, n)?;
    let nn = n as usize;
    let mut b = ReportBuilder::new("lemma_2_3_equivalence").param("n", n);

    // (a)
    let mut stmt_a = true;
    let orbits = enumerate(
        &EnumSpec {
            group: spec,
            length: 3 * nn - 3,
            constraint: Constraint::NoLongZeroSum(n),
            up_to_aut: true,
            order_filter: None,
        },
        opts,
    )?;
    for o in &orbits {
        b.count_case();
        let s = &o.representative;
        let v0 = s.multiplicity(spec.zero());
        let ok = v0 >= n - 1
            && (n <= 2
                || v0 >= 2 * n - 3
                || s.counts().any(|(g, c)| g != spec.zero() && c >= n - 2));
        if !ok {
            stmt_a = false;
            b.counterexample(s.to_string());
        }
    }

    // (b)
    let mut stmt_b = true;
    let orbits = enumerate(
        &EnumSpec {
            group: spec,
            length: 2 * nn - 2,
            constraint: Constraint::ZeroSumFree,
            up_to_aut: true,
            order_filter: None,
        },
        opts,
    )?;
    for o in &orbits {
        b.count_case();
        let s = &o.representative;
        let ok = n <= 2 || s.counts().any(|(_, c)| c >= n - 2);
        if !ok {
            stmt_b = false;
            b.counterexample(s.to_string());
        }
    }

    // (c) and (d) share a domain
    let (mut stmt_c, mut stmt_d) = (true, true);
    let orbits = enumerate(
        &EnumSpec {
            group: spec,
            length: 2 * nn - 1,
            constraint: Constraint::MinimalZeroSum,
            up_to_aut: true,
            order_filter: None,
        },
        opts,
    )?;
    for o in &orbits {
        b.count_case();
        let s = &o.representative;
        if !s.counts().any(|(_, c)| c >= n - 1) {
            stmt_c = false;
            b.counterexample(s.to_string());
        }
        if upsilon_membership(s)?.is_none() {
            stmt_d = false;
            b.counterexample(s.to_string());
        }
    }

    b.set_param(
        "statements",
        json!({"a": stmt_a, "b": stmt_b, "c": stmt_c, "d": stmt_d}),
    );
    let mut report = b.finish();
    report.verdict = if stmt_a && stmt_b && stmt_c && stmt_d {
        Verdict::Holds
    } else {
        Verdict::Fails
    };
    Ok(report)
}

/// Which of the two explicit shapes a parameterization instantiates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Form {
    /// `e_j^{ord(e_j)−1} · ∏ (x_ν·e_j + e_k)` over a basis with
    /// `ord(e_i) = n_i`.
    I,
    /// `g1^{s·n1−1} · ∏ (−x_ν·g1 + g2)` over a generating set with
    /// `ord(g2) = n2`.
    II,
}

/// One parameterization matching a sequence of length `D(G)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormMatch {
    pub form: Form,
    /// The basis `(e1, e2)` for form I, the generating pair `(g1, g2)` for
    /// form II.
    pub pair: (GroupElement, GroupElement),
    /// Form I: which basis element plays the repeated role (1 or 2).
    pub j: u8,
    /// Form II block count; always 1 for form I.
    pub s: u32,
    pub x: Vec<u32>,
}

/// Result of classifying a maximal-length sequence. `flagged` carries
/// parameterizations that reproduce `S` yet are not zero-sum (possible only
/// for form II with `s > 1`, where the stated constraints leave the
/// residual sum `(s−1)·n1·(g1 − g2)`).
#[derive(Debug, Clone, Default)]
pub struct Classification {
    pub matches: Vec<FormMatch>,
    pub flagged: Vec<FormMatch>,
}

/// Builds the form-I sequence for explicit parameters.
pub fn form_i_sequence(
    spec: GroupSpec,
    ej: GroupElement,
    ek: GroupElement,
    x: &[u32],
) -> Sequence {
    let mut s = Sequence::empty(spec);
    s.push(ej, spec.order_of(ej) - 1);
    for &xv in x {
        s.push(spec.add(spec.smul(xv as i64, ej), ek), 1);
    }
    s
}

/// Builds the form-II sequence for explicit parameters.
pub fn form_ii_sequence(
    spec: GroupSpec,
    g1: GroupElement,
    g2: GroupElement,
    s_blocks: u32,
    x: &[u32],
) -> Sequence {
    let mut s = Sequence::empty(spec);
    s.push(g1, s_blocks * spec.n1() - 1);
    for &xv in x {
        s.push(spec.add(spec.smul(-(xv as i64), g1), g2), 1);
    }
    s
}

/// True iff `{g, h}` generates `G`.
fn is_generating_pair(spec: GroupSpec, g: GroupElement, h: GroupElement) -> bool {
    let mut seen = vec![false; spec.order()];
    let mut count = 0usize;
    for a in 0..spec.order_of(g) {
        for bb in 0..spec.order_of(h) {
            let e = spec.add(spec.smul(a as i64, g), spec.smul(bb as i64, h));
            let i = spec.index(e);
            if !seen[i] {
                seen[i] = true;
                count += 1;
            }
        }
    }
    count == spec.order()
}

/// All form-I and form-II parameterizations matching `S` (which must have
/// length `D(G)`). Matching is by exhaustive parameter search with
/// reconstruction equality, never by pattern heuristics.
pub fn classify_maximal(s: &Sequence) -> Result<Classification> {
    let spec = s.spec();
    let d = (spec.n1() + spec.n2() - 1) as usize;
    if s.len() != d {
        return Err(Error::Length {
            expected: d,
            got: s.len(),
        });
    }
    let mut out = Classification::default();
    let (n1, n2) = (spec.n1(), spec.n2());

    // form I
    for e1 in spec.elements() {
        if spec.order_of(e1) != n1 {
            continue;
        }
        for e2 in spec.elements() {
            if spec.order_of(e2) != n2 || !spec.is_basis(e1, e2) {
                continue;
            }
            for j in [1u8, 2u8] {
                let (ej, ek) = if j == 1 { (e1, e2) } else { (e2, e1) };
                let oj = spec.order_of(ej);
                if s.multiplicity(ej) < oj - 1 {
                    continue;
                }
                let mut rest = s.clone();
                rest.remove(ej, oj - 1).unwrap();
                if let Some(x) = product_coefficients(spec, &rest, ej, ek, oj) {
                    let total: u64 = x.iter().map(|&v| v as u64).sum();
                    if total % oj as u64 == 1 % oj as u64
                        && form_i_sequence(spec, ej, ek, &x) == *s
                    {
                        out.matches.push(FormMatch {
                            form: Form::I,
                            pair: (e1, e2),
                            j,
                            s: 1,
                            x,
                        });
                    }
                }
            }
        }
    }

    // form II
    for g1 in spec.elements() {
        for g2 in spec.elements() {
            if spec.order_of(g2) != n2 || !is_generating_pair(spec, g1, g2) {
                continue;
            }
            for s_blocks in 1..=(n2 / n1) {
                if s_blocks > 1 && spec.smul(n1 as i64, g1) != spec.smul(n2 as i64, g2) {
                    continue;
                }
                let head = s_blocks * n1 - 1;
                if s.multiplicity(g1) < head {
                    continue;
                }
                let mut rest = s.clone();
                rest.remove(g1, head).unwrap();
                // terms are −x·g1 + g2, so match coefficients against −g1
                if let Some(x) = product_coefficients(spec, &rest, spec.neg(g1), g2, n1) {
                    let total: u64 = x.iter().map(|&v| v as u64).sum();
                    if total == (n1 - 1) as u64 {
                        let rebuilt = form_ii_sequence(spec, g1, g2, s_blocks, &x);
                        if rebuilt == *s {
                            let m = FormMatch {
                                form: Form::II,
                                pair: (g1, g2),
                                j: 0,
                                s: s_blocks,
                                x,
                            };
                            if crate::zerosum::is_zero_sum(&rebuilt) {
                                out.matches.push(m);
                            } else {
                                out.flagged.push(m);
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Visits every form-I and form-II parameterization of `G`, calling `f`
/// with the match and its reconstructed sequence. Used by the corollary
/// check's completeness direction.
fn for_each_parameterization(
    spec: GroupSpec,
    mut f: impl FnMut(&FormMatch, &Sequence),
) {
    let (n1, n2) = (spec.n1(), spec.n2());

    // form I: x free in [0, ord(e_j)-1]^{ord(e_k)-1}, last fixed mod ord(e_j)
    for e1 in spec.elements() {
        if spec.order_of(e1) != n1 {
            continue;
        }
        for e2 in spec.elements() {
            if spec.order_of(e2) != n2 || !spec.is_basis(e1, e2) {
                continue;
            }
            for j in [1u8, 2u8] {
                let (ej, ek) = if j == 1 { (e1, e2) } else { (e2, e1) };
                let (oj, ok) = (spec.order_of(ej), spec.order_of(ek));
                let mut counter = vec![0u32; ok as usize - 1];
                loop {
                    let partial: u64 = counter.iter().map(|&v| v as u64).sum();
                    let last = (1i64 - partial as i64).rem_euclid(oj as i64) as u32;
                    let mut x = counter.clone();
                    x.push(last);
                    let s = form_i_sequence(spec, ej, ek, &x);
                    f(
                        &FormMatch {
                            form: Form::I,
                            pair: (e1, e2),
                            j,
                            s: 1,
                            x,
                        },
                        &s,
                    );
                    if !advance(&mut counter, oj) {
                        break;
                    }
                }
            }
        }
    }

    // form II: x in [0, n1-1]^len with exact sum n1-1
    for g1 in spec.elements() {
        for g2 in spec.elements() {
            if spec.order_of(g2) != n2 || !is_generating_pair(spec, g1, g2) {
                continue;
            }
            for s_blocks in 1..=(n2 / n1) {
                if s_blocks > 1 && spec.smul(n1 as i64, g1) != spec.smul(n2 as i64, g2) {
                    continue;
                }
                let len = (n2 + n1 - s_blocks * n1) as usize;
                let mut x = vec![0u32; len];
                loop {
                    let total: u64 = x.iter().map(|&v| v as u64).sum();
                    if total == (n1 - 1) as u64 {
                        let s = form_ii_sequence(spec, g1, g2, s_blocks, &x);
                        f(
                            &FormMatch {
                                form: Form::II,
                                pair: (g1, g2),
                                j: 0,
                                s: s_blocks,
                                x: x.clone(),
                            },
                            &s,
                        );
                    }
                    if !advance(&mut x, n1) {
                        break;
                    }
                }
            }
        }
    }
}

/// Odometer step over `[0, radix-1]^len`; false once exhausted.
fn advance(digits: &mut [u32], radix: u32) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}

/// The two-form characterization at length `D(G)`, both directions:
/// every minimal zero-sum sequence of that length matches some form, and
/// every form parameterization reconstructs to a minimal zero-sum sequence.
/// Form-II parameterizations with `s > 1` whose reconstruction is not
/// zero-sum are flagged rather than counted as counterexamples.
pub fn check_corollary(g: GroupSpec, opts: SearchOptions) -> Result<CheckReport> {
    if g.n1() <= 1 {
        return Err(Error::Shape(format!("{g} has n1 = 1; the two-form classification needs rank two")));
    }
    let mut b = ReportBuilder::new("corollary").param("group", g.to_string());
    let d = (g.n1() + g.n2() - 1) as usize;

    // completeness of the forms: every extremal minimal zero-sum sequence
    // matches at least one parameterization
    let orbits = enumerate(
        &EnumSpec {
            group: g,
            length: d,
            constraint: Constraint::MinimalZeroSum,
            up_to_aut: true,
            order_filter: None,
        },
        opts,
    )?;
    for o in &orbits {
        b.count_case();
        let cl = classify_maximal(&o.representative)?;
        if cl.matches.is_empty() {
            b.counterexample(o.representative.to_string());
        }
    }

    // soundness of the forms: every parameterization reconstructs a minimal
    // zero-sum sequence (s > 1 non-zero-sum reconstructions are flagged)
    let mut err = None;
    let mut soundness_cases = 0u64;
    let mut bad: Vec<String> = Vec::new();
    let mut flagged: Vec<String> = Vec::new();
    for_each_parameterization(g, |m, s| {
        soundness_cases += 1;
        match is_minimal_zero_sum(s) {
            Ok(true) => {}
            Ok(false) => {
                if m.form == Form::II && m.s > 1 && !crate::zerosum::is_zero_sum(s) {
                    flagged.push(format!(
                        "form II s={} g1={} g2={} rebuilt={} sum={}",
                        m.s, m.pair.0, m.pair.1, s, s.sum()
                    ));
                } else {
                    bad.push(s.to_string());
                }
            }
            Err(e) => err = Some(e),
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    b.count_cases(soundness_cases);
    for c in bad {
        b.counterexample(c);
    }
    for fl in flagged {
        b.flag(fl);
    }
    b.set_param("length", d as u64);
    Ok(b.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::Mode;

    fn opts() -> SearchOptions {
        SearchOptions {
            mode: Mode::Fast,
            node_cap: None,
        }
    }

    #[test]
    fn upsilon_membership_examples() {
        let g = GroupSpec::new(3, 3).unwrap();
        let s = Sequence::parse(g, "(1,0)^2 (0,1)^2 (1,1)").unwrap();
        let w = upsilon_membership(&s).unwrap().unwrap();
        let (e1, e2) = w.basis;
        assert_eq!(upsilon_sequence(g, e1, e2, &w.x), s);
        let sum: u32 = w.x.iter().sum();
        assert_eq!(sum % 3, 1);

        let short = Sequence::parse(g, "(1,0)^2 (0,1)^2").unwrap();
        assert!(upsilon_membership(&short).unwrap().is_none());
    }

    #[test]
    fn upsilon_members_are_minimal_zero_sum() {
        let g = GroupSpec::new(3, 3).unwrap();
        let table = UpsilonTable::build(g).unwrap();
        for s in table.members() {
            assert!(is_minimal_zero_sum(&s).unwrap());
            assert_eq!(s.len(), 5);
        }
    }

    #[test]
    fn upsilon_class_examples() {
        let g = GroupSpec::new(3, 3).unwrap();
        let s = Sequence::parse(g, "(1,0)^2 (0,1)^2 (1,1)").unwrap();
        assert_eq!(upsilon_class(&s).unwrap(), UpsilonClass::Nu);

        let g4 = GroupSpec::new(4, 4).unwrap();
        // e1^3 e2 (e1+e2) (2e1+e2)^2: x = (0,1,2,2), sum 5 ≡ 1 mod 4
        let s = Sequence::parse(g4, "(1,0)^3 (0,1) (1,1) (2,1)^2").unwrap();
        assert_eq!(upsilon_class(&s).unwrap(), UpsilonClass::U);

        let nonzero = Sequence::parse(g, "(1,0)^5").unwrap();
        assert_eq!(upsilon_class(&nonzero).unwrap(), UpsilonClass::NotIn);
    }

    #[test]
    fn upsilon_table_agrees_with_direct_search() {
        let g = GroupSpec::new(3, 3).unwrap();
        let table = UpsilonTable::build(g).unwrap();
        let orbits = enumerate(
            &EnumSpec {
                group: g,
                length: 5,
                constraint: Constraint::MinimalZeroSum,
                up_to_aut: false,
                order_filter: None,
            },
            opts(),
        )
        .unwrap();
        for o in &orbits {
            assert_eq!(
                table.class(&o.representative),
                upsilon_class(&o.representative).unwrap()
            );
        }
    }

    #[test]
    fn upsilon_class_is_aut_invariant() {
        let g = GroupSpec::new(3, 3).unwrap();
        let s = Sequence::parse(g, "(1,0)^2 (0,1)^2 (1,1)").unwrap();
        for alpha in g.automorphisms().unwrap().iter() {
            assert_eq!(
                upsilon_class(&s.apply_aut(alpha)).unwrap(),
                upsilon_class(&s).unwrap()
            );
        }
    }

    #[test]
    fn property_b_small() {
        for n in [2, 3] {
            let r = check_property_b(n, opts()).unwrap();
            assert!(r.holds(), "n = {n}: {:?}", r.counterexamples);
        }
    }

    #[test]
    fn property_c_small() {
        for n in [2, 3] {
            let r = check_property_c(n, opts()).unwrap();
            assert!(r.holds(), "n = {n}");
        }
    }

    #[test]
    fn equivalence_small() {
        let r = check_lemma_2_3_equivalence(2, opts()).unwrap();
        assert!(r.holds());
        assert_eq!(
            r.params["statements"],
            json!({"a": true, "b": true, "c": true, "d": true})
        );
    }

    #[test]
    fn classify_c2c4_example() {
        let g = GroupSpec::new(2, 4).unwrap();
        let s = Sequence::parse(g, "(1,0) (1,1) (0,1)^3").unwrap();
        let cl = classify_maximal(&s).unwrap();
        assert!(cl
            .matches
            .iter()
            .any(|m| m.form == Form::I && m.pair == (g.e1(), g.e2()) && m.j == 1));
        assert!(cl
            .matches
            .iter()
            .any(|m| m.form == Form::II && m.s == 1 && m.pair == (g.e1(), g.e2())));
        // every match reconstructs S
        for m in &cl.matches {
            let rebuilt = match m.form {
                Form::I => {
                    let (ej, ek) = if m.j == 1 {
                        (m.pair.0, m.pair.1)
                    } else {
                        (m.pair.1, m.pair.0)
                    };
                    form_i_sequence(g, ej, ek, &m.x)
                }
                Form::II => form_ii_sequence(g, m.pair.0, m.pair.1, m.s, &m.x),
            };
            assert_eq!(rebuilt, s);
        }
    }

    #[test]
    fn classify_rejects_wrong_length() {
        let g = GroupSpec::new(2, 4).unwrap();
        let s = Sequence::parse(g, "(1,0)").unwrap();
        assert!(matches!(classify_maximal(&s), Err(Error::Length { .. })));
    }

    #[test]
    fn classify_non_zero_sum_is_empty() {
        let g = GroupSpec::new(2, 2).unwrap();
        let s = Sequence::parse(g, "(1,0)^2 (0,1)").unwrap();
        let cl = classify_maximal(&s).unwrap();
        assert!(cl.matches.is_empty());
    }

    #[test]
    fn corollary_c2c2() {
        let r = check_corollary(GroupSpec::new(2, 2).unwrap(), opts()).unwrap();
        assert!(r.holds(), "{:?}", r.counterexamples);
        assert!(r.flagged.is_empty()); // n1 = n2 leaves no s > 1 room
    }

    #[test]
    fn corollary_c2c4_flags_s2() {
        let r = check_corollary(GroupSpec::new(2, 4).unwrap(), opts()).unwrap();
        assert!(r.holds(), "{:?}", r.counterexamples);
        // every s = 2 parameterization carries the residual sum (s−1)·n1·(g1−g2)
        assert!(!r.flagged.is_empty());
    }
}
