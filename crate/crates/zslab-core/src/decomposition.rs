//! Product decompositions under the multiplication-by-m map.
//!
//! For `G = C_{mn} ⊕ C_{mn}` and `φ: g ↦ m·g`, a minimal zero-sum sequence
//! of length `2mn−1` factors into `2m−1` blocks whose sums lie in `Ker(φ)`.
//! This module finds such decompositions (with the unrestricted, fixed-block
//! -length, and normalized-image variants), classifies blocks, computes the
//! per-term coordinates `ψ` and `ι`, and implements the three swap moves and
//! the pull-up refactoring, asserting their block-sum delta equations.

use serde_json::json;

use crate::group::{ElementSet, GroupElement, GroupSpec};
use crate::report::{CheckReport, ReportBuilder};
use crate::search::{enumerate, Constraint, EnumSpec, SearchOptions};
use crate::sequence::Sequence;
use crate::zerosum::is_minimal_zero_sum;
use crate::{Error, Result};

/// The multiplication-by-m homomorphism on `G = C_{mn} ⊕ C_{mn}`, with its
/// kernel `nG ≅ C_m ⊕ C_m` and image `mG ≅ C_n ⊕ C_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MultByM {
    pub group: GroupSpec,
    pub m: u32,
    pub n: u32,
}

/// Builds the handle; the group must be `C_{mn} ⊕ C_{mn}` with `m, n ≥ 2`.
pub fn mult_by_m(group: GroupSpec, m: u32) -> Result<MultByM> {
    if group.n1() != group.n2() {
        return Err(Error::Shape(format!("{group} is not square")));
    }
    if m < 2 || group.n1() % m != 0 || group.n1() / m < 2 {
        return Err(Error::Shape(format!(
            "{group} is not of the form C_mn x C_mn with m = {m} and n >= 2"
        )));
    }
    Ok(MultByM {
        group,
        m,
        n: group.n1() / m,
    })
}

impl MultByM {
    pub fn apply(&self, g: GroupElement) -> GroupElement {
        self.group.smul(self.m as i64, g)
    }

    /// `Ker(φ) = {g : m·g = 0}`, the elements with both residues divisible
    /// by `n`.
    pub fn kernel(&self) -> ElementSet {
        ElementSet::from_elements(
            self.group,
            self.group
                .elements()
                .filter(|&g| self.apply(g) == self.group.zero()),
        )
    }

    pub fn in_kernel(&self, g: GroupElement) -> bool {
        self.apply(g) == self.group.zero()
    }

    /// `φ(G) = mG` as a subset of `G`.
    pub fn image(&self) -> ElementSet {
        ElementSet::from_elements(self.group, self.group.elements().map(|g| self.apply(g)))
    }

    /// `C_m ⊕ C_m`, the abstract kernel.
    pub fn ker_spec(&self) -> GroupSpec {
        GroupSpec::new(self.m, self.m).expect("m | m")
    }

    /// Coordinates of a kernel element in `C_m ⊕ C_m`.
    pub fn ker_coords(&self, g: GroupElement) -> Result<GroupElement> {
        if !self.in_kernel(g) {
            return Err(Error::Domain(format!("{g} is not in Ker(x{})", self.m)));
        }
        Ok(self.ker_spec().element(g.a / self.n, g.b / self.n))
    }

    /// Inverse of [`MultByM::ker_coords`].
    pub fn ker_embed(&self, h: GroupElement) -> GroupElement {
        self.group.element(h.a * self.n, h.b * self.n)
    }

    /// All ordered pairs `(E1, E2)` of image elements forming a basis of
    /// `φ(G)`, in index order.
    pub fn image_basis_pairs(&self) -> Vec<(GroupElement, GroupElement)> {
        let image: Vec<GroupElement> = self.image().iter().collect();
        let target = (self.n as usize) * (self.n as usize);
        let mut out = Vec::new();
        for &a in &image {
            for &b in &image {
                if (self.group.order_of(a) as usize) * (self.group.order_of(b) as usize) == target
                    && self.group.is_independent(&[a, b])
                {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

/// A factorization `S = W_0 · … · W_{2m−2}` with every block sum in
/// `Ker(φ)` and every block nonempty. `in_omega` marks
/// `|W_1| = … = |W_{2m−2}| = n`; `omega0_basis` holds a witnessing image
/// basis when additionally the normalized image shapes hold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductDecomposition {
    pub phi: MultByM,
    pub blocks: Vec<Sequence>,
    pub parent: Sequence,
    pub in_omega: bool,
    pub omega0_basis: Option<(GroupElement, GroupElement)>,
}

/// Checks `φ(W) = E1^{n−1}·∏(x_ν E1 + E2)` with `Σ x_ν ≡ 1 (mod n)` (for
/// `want = 1`) or the block shapes `E1^n` / `∏(y_ν E1 + E2)` with
/// `Σ y_ν ≡ 0 (mod n)` (for `want = 0`).
fn image_block_shape(
    phi: &MultByM,
    w: &Sequence,
    e1m: GroupElement,
    e2m: GroupElement,
    want: u32,
) -> bool {
    let g = phi.group;
    let n = phi.n;
    let img = w.map(g, |x| phi.apply(x));
    if want == 0 && img.multiplicity(e1m) == img.len() as u32 {
        return true; // the (me1)^n shape
    }
    let head = if want == 1 { n - 1 } else { 0 };
    if img.multiplicity(e1m) < head {
        return false;
    }
    let mut rest = img.clone();
    if head > 0 {
        rest.remove(e1m, head).unwrap();
    }
    let mut total: u64 = 0;
    for (t, mult) in rest.counts() {
        let diff = g.sub(t, e2m);
        match (0..n).find(|&x| g.smul(x as i64, e1m) == diff) {
            Some(x) => total += (x as u64) * mult as u64,
            None => return false,
        }
    }
    total % n as u64 == (want % n) as u64
}

impl ProductDecomposition {
    /// Validates the defining conditions and computes the membership flags.
    pub fn new(phi: MultByM, blocks: Vec<Sequence>) -> Result<ProductDecomposition> {
        let g = phi.group;
        if blocks.len() != 2 * phi.m as usize - 1 {
            return Err(Error::Precondition(format!(
                "expected {} blocks, got {}",
                2 * phi.m - 1,
                blocks.len()
            )));
        }
        let mut parent = Sequence::empty(g);
        for (i, w) in blocks.iter().enumerate() {
            if w.is_empty() {
                return Err(Error::Precondition(format!("block {i} is empty")));
            }
            if !phi.in_kernel(w.sum()) {
                return Err(Error::Precondition(format!(
                    "sigma(W_{i}) = {} is not in Ker",
                    w.sum()
                )));
            }
            parent = parent.product(w)?;
        }
        let n = phi.n as usize;
        let in_omega = blocks[1..].iter().all(|w| w.len() == n);
        let omega0_basis = if in_omega {
            phi.image_basis_pairs()
                .into_iter()
                .find(|&(e1m, e2m)| {
                    image_block_shape(&phi, &blocks[0], e1m, e2m, 1)
                        && blocks[1..]
                            .iter()
                            .all(|w| image_block_shape(&phi, w, e1m, e2m, 0))
                })
        } else {
            None
        };
        Ok(ProductDecomposition {
            phi,
            blocks,
            parent,
            in_omega,
            omega0_basis,
        })
    }

    pub fn in_omega0(&self) -> bool {
        self.omega0_basis.is_some()
    }

    /// `σ̃(W)`: the length-(2m−1) sequence of block sums, over `Ker(φ)`
    /// embedded in `G`.
    pub fn sigma_tilde(&self) -> Sequence {
        Sequence::from_terms(self.phi.group, self.blocks.iter().map(|w| w.sum()))
    }

    /// `σ̃(W)` in `C_m ⊕ C_m` coordinates.
    pub fn sigma_tilde_ker(&self) -> Sequence {
        Sequence::from_terms(
            self.phi.ker_spec(),
            self.blocks
                .iter()
                .map(|w| self.phi.ker_coords(w.sum()).expect("block sums lie in Ker")),
        )
    }
}

/// Which decomposition family to stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecompFilter {
    /// Unrestricted block lengths.
    OmegaPrime,
    /// `|W_1| = … = |W_{2m−2}| = n`.
    Omega,
    /// `Omega` plus the normalized image shapes.
    Omega0,
}

/// Enumerates sub-multisets of `remaining` with the given size (or any
/// positive size when `size` is `None`) whose sum lies in `Ker`, as count
/// vectors parallel to `remaining`; emitted in lexicographic word order.
fn kernel_submultisets(
    phi: &MultByM,
    remaining: &[(GroupElement, u32)],
    size: Option<usize>,
) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut choice = vec![0u32; remaining.len()];
    loop {
        let len: usize = choice.iter().map(|&c| c as usize).sum();
        let size_ok = match size {
            Some(k) => len == k,
            None => len > 0,
        };
        if size_ok {
            let sum = remaining
                .iter()
                .zip(&choice)
                .fold(phi.group.zero(), |acc, (&(g, _), &c)| {
                    phi.group.add(acc, phi.group.smul(c as i64, g))
                });
            if phi.in_kernel(sum) {
                out.push(choice.clone());
            }
        }
        let mut i = 0;
        loop {
            if i == remaining.len() {
                out.sort_unstable_by_key(|c| word_of(remaining, c));
                return out;
            }
            choice[i] += 1;
            if choice[i] <= remaining[i].1 {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

fn word_of(remaining: &[(GroupElement, u32)], choice: &[u32]) -> Vec<GroupElement> {
    remaining
        .iter()
        .zip(choice)
        .flat_map(|(&(g, _), &c)| std::iter::repeat(g).take(c as usize))
        .collect()
}

/// Exhaustive backtracking over block assignments. The non-distinguished
/// blocks `W_1..W_{2m−2}` are emitted in non-decreasing word order (ordered
/// tuples that differ only by permuting those blocks are represented once),
/// and `W_0` is the remainder. Deterministic output order.
pub fn find_decompositions(
    s: &Sequence,
    m: u32,
    filter: DecompFilter,
) -> Result<Vec<ProductDecomposition>> {
    let phi = mult_by_m(s.spec(), m)?;
    let expected = 2 * (phi.m as usize) * (phi.n as usize) - 1;
    if s.len() != expected {
        return Err(Error::Length {
            expected,
            got: s.len(),
        });
    }
    if !is_minimal_zero_sum(s)? {
        return Err(Error::Precondition(format!(
            "{s} is not a minimal zero-sum sequence"
        )));
    }
    let block_size = match filter {
        DecompFilter::OmegaPrime => None,
        DecompFilter::Omega | DecompFilter::Omega0 => Some(phi.n as usize),
    };
    let num_tail = 2 * phi.m as usize - 2;
    let mut out = Vec::new();
    let mut tail: Vec<Sequence> = Vec::new();

    fn recurse(
        phi: &MultByM,
        remaining: &Sequence,
        block_size: Option<usize>,
        num_tail: usize,
        min_word: &[GroupElement],
        tail: &mut Vec<Sequence>,
        out: &mut Vec<ProductDecomposition>,
        filter: DecompFilter,
    ) {
        if tail.len() == num_tail {
            // remainder is W_0; must be nonempty with sum in Ker
            if remaining.is_empty() || !phi.in_kernel(remaining.sum()) {
                return;
            }
            let mut blocks = vec![remaining.clone()];
            blocks.extend(tail.iter().cloned());
            let d = ProductDecomposition::new(*phi, blocks).expect("validated by construction");
            let keep = match filter {
                DecompFilter::OmegaPrime => true,
                DecompFilter::Omega => d.in_omega,
                DecompFilter::Omega0 => d.in_omega0(),
            };
            if keep {
                out.push(d);
            }
            return;
        }
        let counts: Vec<(GroupElement, u32)> = remaining.counts().collect();
        // leave at least one term for W_0 and any remaining tail blocks
        let reserve = 1 + (num_tail - tail.len() - 1) * block_size.unwrap_or(1);
        for choice in kernel_submultisets(phi, &counts, block_size) {
            let word = word_of(&counts, &choice);
            if word.as_slice() < min_word {
                continue;
            }
            let picked: usize = choice.iter().map(|&c| c as usize).sum();
            if remaining.len() - picked < reserve {
                continue;
            }
            let mut block = Sequence::empty(phi.group);
            for (&(g, _), &c) in counts.iter().zip(&choice) {
                block.push(g, c);
            }
            let next = remaining.quotient(&block).unwrap();
            tail.push(block);
            recurse(phi, &next, block_size, num_tail, &word, tail, out, filter);
            tail.pop();
        }
    }

    recurse(
        &phi,
        s,
        block_size,
        num_tail,
        &[],
        &mut tail,
        &mut out,
        filter,
    );
    out.sort_by_key(|d| {
        d.blocks
            .iter()
            .map(|b| b.sorted_indices())
            .collect::<Vec<_>>()
    });
    Ok(out)
}

/// The §-style coordinate context for a normalized decomposition: the chosen
/// preimage basis `(e1, e2)` (so that `(m·e1, m·e2)` is the witnessing image
/// basis), a kernel basis `(f1, f2)` presenting `σ̃(W)` in basis form, the
/// integer interval `I`, the block classes, and the splitting of `W_0`.
#[derive(Debug, Clone)]
pub struct DecompositionContext {
    pub phi: MultByM,
    pub e1: GroupElement,
    pub e2: GroupElement,
    pub f1: GroupElement,
    pub f2: GroupElement,
    /// `I = [interval_lo, interval_lo + n − 1]`.
    pub interval_lo: i64,
    pub a1: Vec<usize>,
    pub a2: Vec<usize>,
    pub a1_star: Vec<usize>,
    pub a2_star: Vec<usize>,
    pub c0: Vec<usize>,
    pub c1: Vec<usize>,
    pub c2: Vec<usize>,
    /// Terms of the parent mapping to `m·e1` under `φ`.
    pub s1: Sequence,
    /// The remaining terms (mapping to `a·m·e1 + m·e2`).
    pub s2: Sequence,
    pub w0_1: Sequence,
    pub w0_2: Sequence,
}

impl DecompositionContext {
    /// `ψ(x)`: the kernel offset in the unique representation `x = e1 + ψ`
    /// (terms over `S_1`) or `x = ι·e1 + e2 + ψ` (terms over `S_2`).
    pub fn psi(&self, x: GroupElement) -> Result<GroupElement> {
        let g = self.phi.group;
        let img = self.phi.apply(x);
        if img == self.phi.apply(self.e1) {
            return Ok(g.sub(x, self.e1));
        }
        let a = self.iota(x)?;
        Ok(g.sub(x, g.add(g.smul(a, self.e1), self.e2)))
    }

    /// `ι(x) ∈ I` for terms of `S_2`; errors elsewhere.
    pub fn iota(&self, x: GroupElement) -> Result<i64> {
        let g = self.phi.group;
        let (e1m, e2m) = (self.phi.apply(self.e1), self.phi.apply(self.e2));
        let img = self.phi.apply(x);
        let n = self.phi.n as i64;
        for a0 in 0..n {
            if g.add(g.smul(a0, e1m), e2m) == img {
                // shift the residue into I
                return Ok(self.interval_lo + (a0 - self.interval_lo).rem_euclid(n));
            }
        }
        Err(Error::Domain(format!("{x} is not a term over S_2")))
    }

    /// The `⟨f1⟩` component of a kernel element (coordinates along the
    /// kernel basis).
    pub fn psi_component(&self, y: GroupElement, which: u8) -> Result<GroupElement> {
        let g = self.phi.group;
        if !self.phi.in_kernel(y) {
            return Err(Error::Domain(format!("{y} is not in Ker")));
        }
        let m = self.phi.m as i64;
        for y1 in 0..m {
            for y2 in 0..m {
                if g.add(g.smul(y1, self.f1), g.smul(y2, self.f2)) == y {
                    return Ok(if which == 1 {
                        g.smul(y1, self.f1)
                    } else {
                        g.smul(y2, self.f2)
                    });
                }
            }
        }
        unreachable!("(f1, f2) is a validated kernel basis")
    }

    /// `Σ ψ(x)` over the terms of a subsequence.
    pub fn sigma_psi(&self, x: &Sequence) -> Result<GroupElement> {
        let g = self.phi.group;
        let mut acc = g.zero();
        for t in x.terms() {
            acc = g.add(acc, self.psi(t)?);
        }
        Ok(acc)
    }

    /// `σ(ι(X))`: the integer sum of `ι` over the terms of `X`.
    pub fn sigma_iota(&self, x: &Sequence) -> Result<i64> {
        let mut acc = 0i64;
        for t in x.terms() {
            acc += self.iota(t)?;
        }
        Ok(acc)
    }
}

/// `(ε′, ε)` for subsequences of `S_2` terms: `ε′ ∈ [1, n]` is congruent to
/// `σ(ι(X)) − σ(ι(Y))` modulo `n`, and
/// `n − ε′ + σ(ι(X)) − σ(ι(Y)) = ε·n`.
pub fn epsilon(x: &Sequence, y: &Sequence, ctx: &DecompositionContext) -> Result<(i64, i64)> {
    let n = ctx.phi.n as i64;
    let diff = ctx.sigma_iota(x)? - ctx.sigma_iota(y)?;
    let mut ep = diff.rem_euclid(n);
    if ep == 0 {
        ep = n;
    }
    let e = (n - ep + diff) / n;
    debug_assert_eq!(n - ep + diff, e * n);
    Ok((ep, e))
}

/// Builds the context for `W ∈ Ω_0` from explicit basis choices,
/// validating every normalization they must satisfy.
pub fn classify_blocks(
    w: &ProductDecomposition,
    e1: GroupElement,
    e2: GroupElement,
    f1: GroupElement,
    f2: GroupElement,
    interval_lo: i64,
) -> Result<DecompositionContext> {
    let phi = w.phi;
    let g = phi.group;
    if !w.in_omega {
        return Err(Error::Normalization(
            "decomposition is not in the fixed-block-length family".into(),
        ));
    }
    let (e1m, e2m) = (phi.apply(e1), phi.apply(e2));
    // (m·e1, m·e2) must be a basis of the image witnessing the normalized
    // shapes for this decomposition
    let img_ok = (g.order_of(e1m) as usize) * (g.order_of(e2m) as usize)
        == (phi.n as usize) * (phi.n as usize)
        && g.is_independent(&[e1m, e2m])
        && image_block_shape(&phi, &w.blocks[0], e1m, e2m, 1)
        && w.blocks[1..]
            .iter()
            .all(|b| image_block_shape(&phi, b, e1m, e2m, 0));
    if !img_ok {
        return Err(Error::Normalization(format!(
            "(m*{e1}, m*{e2}) does not witness the normalized image shapes"
        )));
    }
    // (f1, f2) must be a kernel basis presenting sigma-tilde in basis form
    let st = w.sigma_tilde();
    let m = phi.m;
    let ker_ok = phi.in_kernel(f1)
        && phi.in_kernel(f2)
        && (g.order_of(f1) as usize) * (g.order_of(f2) as usize)
            == (m as usize) * (m as usize)
        && g.is_independent(&[f1, f2]);
    let presented = ker_ok && {
        st.multiplicity(f1) >= m - 1 && {
            let mut rest = st.clone();
            rest.remove(f1, m - 1).unwrap();
            let mut total: i64 = 0;
            let mut all = true;
            for (t, mult) in rest.counts() {
                let diff = g.sub(t, f2);
                match (0..m).find(|&x| g.smul(x as i64, f1) == diff) {
                    Some(x) => total += x as i64 * mult as i64,
                    None => all = false,
                }
            }
            all && total.rem_euclid(m as i64) == 1 % m as i64
        }
    };
    if !presented {
        return Err(Error::Normalization(format!(
            "({f1}, {f2}) does not present the block-sum sequence in basis form"
        )));
    }

    // split the parent into S_1 and S_2
    let mut s1 = Sequence::empty(g);
    let mut s2 = Sequence::empty(g);
    for (t, c) in w.parent.counts() {
        if phi.apply(t) == e1m {
            s1.push(t, c);
        } else {
            s2.push(t, c);
        }
    }

    // block classes from the image shapes
    let mut a1 = vec![0usize];
    let mut a2 = vec![0usize];
    for (i, b) in w.blocks.iter().enumerate().skip(1) {
        let img = b.map(g, |x| phi.apply(x));
        if img.multiplicity(e1m) == img.len() as u32 {
            a1.push(i);
        } else {
            a2.push(i);
        }
    }
    let a1_star = a1[1..].to_vec();
    let a2_star = a2[1..].to_vec();

    // C-classes from block-sum multiplicities in sigma-tilde
    let peaks: Vec<GroupElement> = {
        let mut v: Vec<GroupElement> = st
            .counts()
            .filter(|&(_, c)| c == m - 1)
            .map(|(t, _)| t)
            .collect();
        // list f1 first so that C_1 is the f1-valued class
        v.sort_by_key(|&t| (t != f1, g.index(t)));
        v
    };
    let (mut c0, mut c1, mut c2) = (Vec::new(), Vec::new(), Vec::new());
    for (i, b) in w.blocks.iter().enumerate() {
        let sum = b.sum();
        if st.multiplicity(sum) < m - 1 {
            c0.push(i);
        } else if peaks.len() >= 2 && sum == peaks[1] {
            c2.push(i);
        } else {
            c1.push(i);
        }
    }

    let w0_1 = w.blocks[0].gcd(&s1)?;
    let w0_2 = w.blocks[0].gcd(&s2)?;
    Ok(DecompositionContext {
        phi,
        e1,
        e2,
        f1,
        f2,
        interval_lo,
        a1,
        a2,
        a1_star,
        a2_star,
        c0,
        c1,
        c2,
        s1,
        s2,
        w0_1,
        w0_2,
    })
}

/// Picks the lexicographically least admissible `(e1, e2)` and `(f1, f2)`
/// with `I = [0, n−1]`.
pub fn default_context(w: &ProductDecomposition) -> Result<DecompositionContext> {
    let g = w.phi.group;
    for e1 in g.elements() {
        for e2 in g.elements() {
            for f1 in g.elements() {
                if !w.phi.in_kernel(f1) {
                    continue;
                }
                for f2 in g.elements() {
                    if !w.phi.in_kernel(f2) {
                        continue;
                    }
                    if let Ok(ctx) = classify_blocks(w, e1, e2, f1, f2, 0) {
                        return Ok(ctx);
                    }
                }
            }
        }
    }
    Err(Error::Normalization(
        "no admissible basis choices for this decomposition".into(),
    ))
}

/// The three term-exchange moves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwapKind {
    I,
    II,
    III,
}

/// A requested exchange between `blocks[source]` and `blocks[target]`:
/// `X` leaves the source, `Y` leaves the target, and for kind II the filler
/// `R | W_0^{(1)}` restores the block length.
#[derive(Debug, Clone)]
pub struct SwapRequest {
    pub kind: SwapKind,
    pub source: usize,
    pub target: usize,
    pub x: Sequence,
    pub y: Sequence,
    pub r: Option<Sequence>,
}

fn require(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Precondition(msg.to_string()))
    }
}

/// Applies a swap, returning the new decomposition. Every kind preserves
/// the block product and kernel sums; kinds I and III preserve membership
/// in the normalized family. The block-sum delta equations are asserted.
pub fn apply_swap(
    w: &ProductDecomposition,
    req: &SwapRequest,
    ctx: &DecompositionContext,
) -> Result<ProductDecomposition> {
    let g = w.phi.group;
    let (src, tgt) = (req.source, req.target);
    require(src < w.blocks.len() && tgt < w.blocks.len(), "block index out of range")?;
    require(req.x.len() == req.y.len(), "|X| must equal |Y|")?;
    let u = &w.blocks[src];
    let v = &w.blocks[tgt];
    let sigma_v = v.sum();

    let (new_u, new_v, delta);
    match req.kind {
        SwapKind::I => {
            require(src != tgt, "type I swap needs distinct blocks")?;
            require(
                ctx.a1.contains(&src) && ctx.a1.contains(&tgt),
                "type I swap blocks must both lie in the first class",
            )?;
            let x_dom = if src == 0 { &ctx.w0_1 } else { u };
            let y_dom = if tgt == 0 { &ctx.w0_1 } else { v };
            require(req.x.divides(x_dom)?, "X must divide the source block (within W_0^(1) when source is W_0)")?;
            require(req.y.divides(y_dom)?, "Y must divide the target block (within W_0^(1) when target is W_0)")?;
            new_u = u.quotient(&req.x)?.product(&req.y)?;
            new_v = v.quotient(&req.y)?.product(&req.x)?;
            delta = g.sub(ctx.sigma_psi(&req.x)?, ctx.sigma_psi(&req.y)?);
        }
        SwapKind::III => {
            require(src != tgt, "type III swap needs distinct blocks")?;
            require(
                ctx.a2.contains(&src) && ctx.a2.contains(&tgt),
                "type III swap blocks must both lie in the second class",
            )?;
            let x_dom = if src == 0 { &ctx.w0_2 } else { u };
            let y_dom = if tgt == 0 { &ctx.w0_2 } else { v };
            require(req.x.divides(x_dom)?, "X must divide the source block (within W_0^(2) when source is W_0)")?;
            require(req.y.divides(y_dom)?, "Y must divide the target block (within W_0^(2) when target is W_0)")?;
            require(
                ctx.sigma_iota(&req.x)? == ctx.sigma_iota(&req.y)?,
                "type III swap needs equal iota sums",
            )?;
            new_u = u.quotient(&req.x)?.product(&req.y)?;
            new_v = v.quotient(&req.y)?.product(&req.x)?;
            delta = g.sub(ctx.sigma_psi(&req.x)?, ctx.sigma_psi(&req.y)?);
        }
        SwapKind::II => {
            require(src == 0, "type II swap always exchanges with W_0")?;
            require(
                ctx.a2_star.contains(&tgt),
                "type II swap target must be a non-distinguished second-class block",
            )?;
            require(req.x.divides(&ctx.w0_2)?, "X must divide W_0^(2)")?;
            require(req.y.divides(v)?, "Y must divide the target block")?;
            let r = req
                .r
                .as_ref()
                .ok_or_else(|| Error::Precondition("type II swap needs R".into()))?;
            let (ep, e) = epsilon(&req.x, &req.y, ctx)?;
            require(r.divides(&ctx.w0_1)?, "R must divide W_0^(1)")?;
            require(
                r.len() as i64 == ctx.phi.n as i64 - ep,
                "|R| must equal n - epsilon'(X, Y)",
            )?;
            new_u = u.quotient(r)?.quotient(&req.x)?.product(&req.y)?;
            new_v = v
                .quotient(&req.y)?
                .product(&req.x)?
                .product(r)?;
            delta = g.add(
                g.smul(e * ctx.phi.n as i64, ctx.e1),
                g.add(
                    g.sub(ctx.sigma_psi(&req.x)?, ctx.sigma_psi(&req.y)?),
                    ctx.sigma_psi(r)?,
                ),
            );
        }
    }

    let mut blocks = w.blocks.clone();
    blocks[src] = new_u;
    blocks[tgt] = new_v.clone();
    let out = ProductDecomposition::new(w.phi, blocks)?;
    // the displayed delta equations, exactly
    assert_eq!(out.blocks[tgt].sum(), g.add(sigma_v, delta));
    assert_eq!(out.parent, w.parent);
    if matches!(req.kind, SwapKind::I | SwapKind::III) {
        assert!(out.in_omega0(), "type I/III swaps preserve the normalized family");
    }
    Ok(out)
}

/// Pulls the term `x` (dividing `blocks[u_index] · W_0^{(2)}`) up into the
/// distinguished block: searches for an n-term subsequence `U′` of
/// `x^{-1}·U·W_0^{(2)}` with kernel sum, and refactors `W_0·U = W′_0·U′` so
/// that `x | W′_0^{(2)}`. `None` when no such `U′` exists (which cannot
/// happen for a single term, by the Erdős–Ginzburg–Ziv theorem).
pub fn pull_up(
    w: &ProductDecomposition,
    x: GroupElement,
    u_index: usize,
    ctx: &DecompositionContext,
) -> Result<Option<ProductDecomposition>> {
    require(
        ctx.a2_star.contains(&u_index),
        "pull-up block must be a non-distinguished second-class block",
    )?;
    let u = &w.blocks[u_index];
    let pool = u.product(&ctx.w0_2)?;
    require(
        pool.multiplicity(x) > 0,
        "the pulled term must divide U * W_0^(2)",
    )?;
    let mut rest = pool.clone();
    rest.remove(x, 1)?;
    let counts: Vec<(GroupElement, u32)> = rest.counts().collect();
    let choices = kernel_submultisets(&w.phi, &counts, Some(w.phi.n as usize));
    let Some(choice) = choices.first() else {
        return Ok(None);
    };
    let mut new_u = Sequence::empty(w.phi.group);
    for (&(g, _), &c) in counts.iter().zip(choice) {
        new_u.push(g, c);
    }
    let w0u = w.blocks[0].product(u)?;
    let new_w0 = w0u.quotient(&new_u)?;
    let mut blocks = w.blocks.clone();
    blocks[0] = new_w0;
    blocks[u_index] = new_u;
    let out = ProductDecomposition::new(w.phi, blocks)?;
    // x now lies in the second-class part of the new distinguished block
    let new_w0_2 = out.blocks[0].gcd(&ctx.s2)?;
    assert!(new_w0_2.multiplicity(x) > 0);
    Ok(Some(out))
}

/// For every minimal zero-sum sequence of maximal length over
/// `C_{mn} ⊕ C_{mn}` (up to automorphism), a normalized decomposition
/// exists and the image sequence collapses to
/// `E1^{ℓn−1}·∏(x_ν E1 + E2)` with `ℓ ∈ [1, 2m−1]`.
pub fn check_proposition_4_2(m: u32, n: u32, opts: SearchOptions) -> Result<CheckReport> {
    let spec = GroupSpec::new(m * n, m * n)?;
    let phi = mult_by_m(spec, m)?;
    let mut b = ReportBuilder::new("proposition_4_2");
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
    for o in &orbits {
        b.count_case();
        let s = &o.representative;
        let decomps = find_decompositions(s, m, DecompFilter::Omega0)?;
        let Some(d) = decomps.first() else {
            b.counterexample(s.to_string());
            continue;
        };
        let (e1m, e2m) = d.omega0_basis.unwrap();
        // the collapsed image shape with head multiplicity ℓn−1
        let img = s.map(spec, |x| phi.apply(x));
        let head = img.multiplicity(e1m) as usize;
        let ell_ok = (head + 1) % n as usize == 0
            && (1..=(2 * m as usize - 1)).contains(&((head + 1) / n as usize));
        let mut rest = img.clone();
        rest.remove(e1m, head as u32).ok();
        let shape_ok = ell_ok
            && rest.counts().all(|(t, _)| {
                let diff = spec.sub(t, e2m);
                (0..n).any(|x| spec.smul(x as i64, e1m) == diff)
            });
        if !shape_ok {
            b.counterexample(s.to_string());
        }
    }
    b.set_param("orbits", json!(orbits.len() as u64));
    Ok(b.finish())
}
