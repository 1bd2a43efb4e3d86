//! Shared randomized suites used by both the property and acceptance test
//! targets. All randomness is seeded; a fixed seed reproduces the exact
//! case list.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;

use zslab_core::decomposition::{
    apply_swap, default_context, epsilon, find_decompositions, DecompFilter,
    DecompositionContext, ProductDecomposition, SwapKind, SwapRequest,
};
use zslab_core::group::{GroupElement, GroupSpec};
use zslab_core::search::{enumerate, Constraint, EnumSpec, SearchOptions};
use zslab_core::sequence::{Sequence, SubsumTable};
use zslab_core::zerosum::{is_minimal_zero_sum, is_zero_sum, is_zero_sum_free};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_sequence(spec: GroupSpec, len: usize, rng: &mut ChaCha8Rng) -> Sequence {
    Sequence::from_terms(
        spec,
        (0..len).map(|_| spec.element_at(rng.gen_range(0..spec.order()))),
    )
}

/// Per-cardinality subsequence sums by explicit multiplicity odometer — the
/// independent oracle the layered table is checked against.
pub fn brute_force_sigma(s: &Sequence) -> Vec<HashSet<GroupElement>> {
    let spec = s.spec();
    let counts: Vec<(GroupElement, u32)> = s.counts().collect();
    let mut layers: Vec<HashSet<GroupElement>> = vec![HashSet::new(); s.len() + 1];
    let mut choice = vec![0u32; counts.len()];
    loop {
        let k: usize = choice.iter().map(|&c| c as usize).sum();
        let sum = counts
            .iter()
            .zip(&choice)
            .fold(spec.zero(), |acc, (&(g, _), &c)| {
                spec.add(acc, spec.smul(c as i64, g))
            });
        layers[k].insert(sum);
        let mut i = 0;
        loop {
            if i == counts.len() {
                return layers;
            }
            choice[i] += 1;
            if choice[i] <= counts[i].1 {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// Layered-table vs subset-enumeration equivalence over every group of
/// order at most 16 in the list, lengths up to 12. Returns (cases,
/// failures).
pub fn subsum_oracle_suite(seed: u64, per_group: usize) -> (u64, Vec<String>) {
    let groups = ["C2xC2", "C3xC3", "C4xC4", "C2xC8", "C16", "C7", "C2xC6"];
    let mut rng = rng(seed);
    let mut cases = 0u64;
    let mut failures = Vec::new();
    for name in groups {
        let spec = GroupSpec::parse(name).unwrap();
        assert!(spec.order() <= 16);
        for _ in 0..per_group {
            let len = rng.gen_range(1..=12);
            let s = random_sequence(spec, len, &mut rng);
            let table = SubsumTable::build(&s).unwrap();
            let oracle = brute_force_sigma(&s);
            cases += 1;
            for k in 0..=len {
                let fast: HashSet<GroupElement> = table.sigma_k(k).iter().collect();
                if fast != oracle[k] {
                    failures.push(format!("{name}: S = {s}, k = {k}"));
                }
            }
        }
    }
    (cases, failures)
}

/// `Σ_{|S|−k}(S) = σ(S) − Σ_k(S)` for every k on random sequences.
pub fn complement_duality_suite(seed: u64, total: usize) -> (u64, Vec<String>) {
    let groups = ["C2xC4", "C3xC3", "C4xC4", "C9", "C2xC6", "C12"];
    let mut rng = rng(seed);
    let mut cases = 0u64;
    let mut failures = Vec::new();
    for i in 0..total {
        let spec = GroupSpec::parse(groups[i % groups.len()]).unwrap();
        let len = rng.gen_range(1..=10);
        let s = random_sequence(spec, len, &mut rng);
        let table = SubsumTable::build(&s).unwrap();
        let total_sum = s.sum();
        cases += 1;
        for k in 0..=len {
            let direct: HashSet<GroupElement> = table.sigma_k(len - k).iter().collect();
            let reflected: HashSet<GroupElement> = table
                .sigma_k(k)
                .iter()
                .map(|g| spec.sub(total_sum, g))
                .collect();
            if direct != reflected {
                failures.push(format!("S = {s}, k = {k}"));
            }
        }
    }
    (cases, failures)
}

/// Every predicate commutes with automorphisms on random (S, α) pairs.
pub fn aut_invariance_suite(seed: u64, total: usize) -> (u64, Vec<String>) {
    let groups = ["C2xC2", "C3xC3", "C4xC4", "C2xC4", "C2xC6", "C8"];
    let mut rng = rng(seed);
    let mut cases = 0u64;
    let mut failures = Vec::new();
    for i in 0..total {
        let spec = GroupSpec::parse(groups[i % groups.len()]).unwrap();
        let auts = spec.automorphisms().unwrap();
        let alpha = &auts[rng.gen_range(0..auts.len())];
        let len = rng.gen_range(1..=8);
        let s = random_sequence(spec, len, &mut rng);
        let t = s.apply_aut(alpha);
        cases += 1;
        let same = is_zero_sum(&s) == is_zero_sum(&t)
            && is_zero_sum_free(&s).unwrap() == is_zero_sum_free(&t).unwrap()
            && is_minimal_zero_sum(&s).unwrap() == is_minimal_zero_sum(&t).unwrap()
            && s.height() == t.height()
            && s.support_size() == t.support_size()
            && s.subsums().unwrap().zero_in_lengths(1, len)
                == t.subsums().unwrap().zero_in_lengths(1, len);
        if !same {
            failures.push(format!("S = {s}, alpha = {alpha:?}"));
        }
    }
    (cases, failures)
}

fn random_sub(s: &Sequence, size: usize, rng: &mut ChaCha8Rng) -> Sequence {
    let terms: Vec<GroupElement> = s.terms().collect();
    let picked = terms.choose_multiple(rng, size).copied();
    Sequence::from_terms(s.spec(), picked)
}

/// Pools of normalized decompositions with contexts to draw swaps from.
fn swap_pool(group: GroupSpec, m: u32) -> Vec<(ProductDecomposition, DecompositionContext)> {
    let mut pool = Vec::new();
    if group.n1() == 4 {
        // small enough to take every orbit of extremal sequences
        let orbits = enumerate(
            &EnumSpec {
                group,
                length: 2 * group.n1() as usize - 1,
                constraint: Constraint::MinimalZeroSum,
                up_to_aut: true,
                order_filter: None,
            },
            SearchOptions::default(),
        )
        .unwrap();
        for o in &orbits {
            for d in find_decompositions(&o.representative, m, DecompFilter::Omega0).unwrap() {
                let ctx = default_context(&d).unwrap();
                pool.push((d, ctx));
            }
        }
    } else {
        // basis-form extremal sequences with pseudorandom coefficients
        let n = group.n1();
        let mut rng = rng(0x5eed_0000 + m as u64);
        while pool.len() < 8 {
            let mut s = Sequence::empty(group);
            s.push(group.e1(), n - 1);
            let mut total: i64 = 0;
            for i in 0..n {
                let x = if i + 1 == n {
                    (1 - total).rem_euclid(n as i64)
                } else {
                    rng.gen_range(0..n as i64)
                };
                total += x;
                s.push(group.add(group.smul(x, group.e1()), group.e2()), 1);
            }
            assert!(is_minimal_zero_sum(&s).unwrap());
            let decomps = find_decompositions(&s, m, DecompFilter::Omega0).unwrap();
            if let Some(d) = decomps.into_iter().next() {
                let ctx = default_context(&d).unwrap();
                pool.push((d, ctx));
            }
        }
    }
    pool
}

/// Draws random valid swap requests until `target` of them apply, and
/// re-checks the block-sum delta equation for each application. Returns
/// (applied swaps, failures).
pub fn swap_delta_suite(
    group: GroupSpec,
    m: u32,
    seed: u64,
    target: usize,
) -> (u64, Vec<String>) {
    let pool = swap_pool(group, m);
    assert!(!pool.is_empty());
    let mut rng = rng(seed);
    let mut applied = 0u64;
    let mut failures = Vec::new();
    let mut attempts = 0u64;
    let g = group;
    while (applied as usize) < target {
        attempts += 1;
        assert!(
            attempts < 2_000_000,
            "unable to generate enough valid swaps"
        );
        let (d, ctx) = &pool[rng.gen_range(0..pool.len())];
        let kind = *[SwapKind::I, SwapKind::II, SwapKind::III]
            .choose(&mut rng)
            .unwrap();
        let req = match kind {
            SwapKind::I | SwapKind::III => {
                let class = if kind == SwapKind::I { &ctx.a1 } else { &ctx.a2 };
                if class.len() < 2 {
                    continue;
                }
                let mut picks = class.clone();
                picks.shuffle(&mut rng);
                let (src, tgt) = (picks[0], picks[1]);
                let part0 = if kind == SwapKind::I { &ctx.w0_1 } else { &ctx.w0_2 };
                let x_dom = if src == 0 { part0 } else { &d.blocks[src] };
                let y_dom = if tgt == 0 { part0 } else { &d.blocks[tgt] };
                let cap = x_dom.len().min(y_dom.len());
                if cap == 0 {
                    continue;
                }
                let size = rng.gen_range(1..=cap);
                SwapRequest {
                    kind,
                    source: src,
                    target: tgt,
                    x: random_sub(x_dom, size, &mut rng),
                    y: random_sub(y_dom, size, &mut rng),
                    r: None,
                }
            }
            SwapKind::II => {
                if ctx.a2_star.is_empty() || ctx.w0_2.is_empty() {
                    continue;
                }
                let tgt = *ctx.a2_star.choose(&mut rng).unwrap();
                let cap = ctx.w0_2.len().min(d.blocks[tgt].len());
                let size = rng.gen_range(1..=cap);
                let x = random_sub(&ctx.w0_2, size, &mut rng);
                let y = random_sub(&d.blocks[tgt], size, &mut rng);
                let (ep, _) = epsilon(&x, &y, ctx).unwrap();
                let r_len = (ctx.phi.n as i64 - ep) as usize;
                if r_len > ctx.w0_1.len() {
                    continue;
                }
                SwapRequest {
                    kind,
                    source: 0,
                    target: tgt,
                    x,
                    y,
                    r: Some(random_sub(&ctx.w0_1, r_len, &mut rng)),
                }
            }
        };
        let sigma_v_before = d.blocks[req.target].sum();
        match apply_swap(d, &req, ctx) {
            Ok(out) => {
                applied += 1;
                // re-derive the displayed delta equation independently
                let psi_x = ctx.sigma_psi(&req.x).unwrap();
                let psi_y = ctx.sigma_psi(&req.y).unwrap();
                let expected = match req.kind {
                    SwapKind::I | SwapKind::III => {
                        g.add(sigma_v_before, g.sub(psi_x, psi_y))
                    }
                    SwapKind::II => {
                        let (_, e) = epsilon(&req.x, &req.y, ctx).unwrap();
                        let r = req.r.as_ref().unwrap();
                        g.add(
                            sigma_v_before,
                            g.add(
                                g.smul(e * ctx.phi.n as i64, ctx.e1),
                                g.add(g.sub(psi_x, psi_y), ctx.sigma_psi(r).unwrap()),
                            ),
                        )
                    }
                };
                if out.blocks[req.target].sum() != expected {
                    failures.push(format!(
                        "kind {:?} on {}: got {}, expected {expected}",
                        req.kind,
                        d.parent,
                        out.blocks[req.target].sum()
                    ));
                }
            }
            Err(_) => continue, // invalid draw; not counted
        }
    }
    (applied, failures)
}
