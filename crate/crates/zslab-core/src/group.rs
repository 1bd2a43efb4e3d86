//! The ambient group `C_{n1} ⊕ C_{n2}` (with `n1 | n2`), its elements as
//! residue pairs, automorphisms, and bit-indicator subsets.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::{Error, Result};

/// Largest group order for which indicator sets and automorphism tables are
/// built; all desk-scale instances are far below this.
pub const GROUP_ORDER_CAP: usize = 1 << 16;

/// Largest group order for which the full automorphism list is enumerated.
pub const AUT_CAP: usize = 10_000;

/// The group `C_{n1} ⊕ C_{n2}` with `1 ≤ n1` and `n1 | n2`.
///
/// All element arithmetic goes through this spec so that residues stay in
/// canonical range. Copyable and cheap; two specs are the same group iff they
/// compare equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupSpec {
    n1: u32,
    n2: u32,
}

/// An element `a·e1 + b·e2` stored as the canonical residue pair
/// `(a mod n1, b mod n2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    pub a: u32,
    pub b: u32,
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

impl GroupSpec {
    /// Builds `C_{n1} ⊕ C_{n2}`, rejecting parameters that violate `n1 | n2`
    /// or the global order cap.
    pub fn new(n1: u32, n2: u32) -> Result<Self> {
        if n1 < 1 || n2 < 1 || n2 % n1 != 0 {
            return Err(Error::Divisibility {
                n1: n1 as u64,
                n2: n2 as u64,
            });
        }
        let order = (n1 as usize) * (n2 as usize);
        if order > GROUP_ORDER_CAP {
            return Err(Error::CapExceeded(format!(
                "|G| = {order} exceeds the indicator-set cap {GROUP_ORDER_CAP}"
            )));
        }
        Ok(GroupSpec { n1, n2 })
    }

    /// Parses the literal form `C{n1}xC{n2}`, e.g. `"C3xC3"`.
    pub fn parse(text: &str) -> Result<Self> {
        let err = |pos: usize, msg: &str| Error::Parse {
            pos,
            msg: msg.to_string(),
        };
        let rest = text
            .strip_prefix('C')
            .ok_or_else(|| err(0, "expected 'C'"))?;
        // cyclic shorthand: "C7" is the rank-1 group C_1 x C_7
        let Some(x) = rest.find('x') else {
            let n: u32 = rest.parse().map_err(|_| err(1, "expected integer n"))?;
            return GroupSpec::new(1, n);
        };
        let n1: u32 = rest[..x]
            .parse()
            .map_err(|_| err(1, "expected integer n1"))?;
        let tail = rest[x + 1..]
            .strip_prefix('C')
            .ok_or_else(|| err(x + 2, "expected 'C'"))?;
        let n2: u32 = tail
            .parse()
            .map_err(|_| err(x + 3, "expected integer n2"))?;
        GroupSpec::new(n1, n2)
    }

    pub fn n1(&self) -> u32 {
        self.n1
    }

    pub fn n2(&self) -> u32 {
        self.n2
    }

    /// `|G| = n1 · n2`.
    pub fn order(&self) -> usize {
        (self.n1 as usize) * (self.n2 as usize)
    }

    /// `exp(G) = n2`.
    pub fn exponent(&self) -> u32 {
        self.n2
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement { a: 0, b: 0 }
    }

    /// First standard basis element `e1 = (1,0)` (zero when `n1 = 1`).
    pub fn e1(&self) -> GroupElement {
        self.element(1, 0)
    }

    /// Second standard basis element `e2 = (0,1)`.
    pub fn e2(&self) -> GroupElement {
        self.element(0, 1)
    }

    /// Builds the element `(a mod n1, b mod n2)`.
    pub fn element(&self, a: u32, b: u32) -> GroupElement {
        GroupElement {
            a: a % self.n1,
            b: b % self.n2,
        }
    }

    /// Builds an element from possibly-negative integer coefficients.
    pub fn element_i(&self, a: i64, b: i64) -> GroupElement {
        GroupElement {
            a: a.rem_euclid(self.n1 as i64) as u32,
            b: b.rem_euclid(self.n2 as i64) as u32,
        }
    }

    /// Dense index `a · n2 + b`; inverse of [`GroupSpec::element_at`].
    pub fn index(&self, g: GroupElement) -> usize {
        (g.a as usize) * (self.n2 as usize) + g.b as usize
    }

    pub fn element_at(&self, index: usize) -> GroupElement {
        GroupElement {
            a: (index / self.n2 as usize) as u32,
            b: (index % self.n2 as usize) as u32,
        }
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order()).map(|i| self.element_at(i))
    }

    pub fn add(&self, g: GroupElement, h: GroupElement) -> GroupElement {
        GroupElement {
            a: (g.a + h.a) % self.n1,
            b: (g.b + h.b) % self.n2,
        }
    }

    pub fn neg(&self, g: GroupElement) -> GroupElement {
        GroupElement {
            a: (self.n1 - g.a) % self.n1,
            b: (self.n2 - g.b) % self.n2,
        }
    }

    pub fn sub(&self, g: GroupElement, h: GroupElement) -> GroupElement {
        self.add(g, self.neg(h))
    }

    /// Scalar multiple `k·g` for any integer `k`.
    pub fn smul(&self, k: i64, g: GroupElement) -> GroupElement {
        let a = (k * g.a as i64).rem_euclid(self.n1 as i64) as u32;
        let b = (k * g.b as i64).rem_euclid(self.n2 as i64) as u32;
        GroupElement { a, b }
    }

    /// Order of `g`: the least `k ≥ 1` with `k·g = 0`, i.e. the lcm of the
    /// component orders `n1/gcd(a,n1)` and `n2/gcd(b,n2)`.
    pub fn order_of(&self, g: GroupElement) -> u32 {
        let oa = self.n1 / gcd(g.a, self.n1);
        let ob = self.n2 / gcd(g.b, self.n2);
        lcm(oa, ob)
    }

    /// Independence per the defining relation condition: all members nonzero
    /// and every integer relation `Σ m_i g_i = 0` forces each `m_i g_i = 0`.
    /// Checked by exhaustive scan over `m_i` modulo `ord(g_i)`.
    pub fn is_independent(&self, tuple: &[GroupElement]) -> bool {
        if tuple.is_empty() || tuple.iter().any(|&g| g == self.zero()) {
            return false;
        }
        let orders: Vec<u32> = tuple.iter().map(|&g| self.order_of(g)).collect();
        let mut coeffs = vec![0u32; tuple.len()];
        loop {
            let sum = tuple
                .iter()
                .zip(&coeffs)
                .fold(self.zero(), |acc, (&g, &m)| {
                    self.add(acc, self.smul(m as i64, g))
                });
            if sum == self.zero()
                && tuple
                    .iter()
                    .zip(&coeffs)
                    .any(|(&g, &m)| self.smul(m as i64, g) != self.zero())
            {
                return false;
            }
            // odometer over the coefficient box
            let mut i = 0;
            loop {
                if i == tuple.len() {
                    return true;
                }
                coeffs[i] += 1;
                if coeffs[i] < orders[i] {
                    break;
                }
                coeffs[i] = 0;
                i += 1;
            }
        }
    }

    /// True iff `(g, h)` is independent and `⟨g⟩ ⊕ ⟨h⟩ = G`
    /// (i.e. `ord(g)·ord(h) = |G|`).
    pub fn is_basis(&self, g: GroupElement, h: GroupElement) -> bool {
        (self.order_of(g) as usize) * (self.order_of(h) as usize) == self.order()
            && self.is_independent(&[g, h])
    }

    /// The full automorphism list, cached per spec. Brute force: candidate
    /// images of `(e1, e2)` are filtered for well-definedness
    /// (`n1 · image_e1 = 0`) and bijectivity by direct image marking.
    pub fn automorphisms(&self) -> Result<Arc<Vec<AutMap>>> {
        if self.order() > AUT_CAP {
            return Err(Error::CapExceeded(format!(
                "|G| = {} exceeds the automorphism cap {AUT_CAP}",
                self.order()
            )));
        }
        static CACHE: OnceLock<Mutex<HashMap<GroupSpec, Arc<Vec<AutMap>>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(v) = cache.lock().unwrap().get(self) {
            return Ok(v.clone());
        }
        let mut maps = Vec::new();
        let mut seen = vec![false; self.order()];
        for img1 in self.elements() {
            if self.smul(self.n1 as i64, img1) != self.zero() {
                continue; // not well-defined on the first coordinate
            }
            for img2 in self.elements() {
                let cand = AutMap {
                    image_e1: img1,
                    image_e2: img2,
                };
                seen.iter_mut().for_each(|s| *s = false);
                let mut bijective = true;
                for g in self.elements() {
                    let idx = self.index(cand.apply(self, g));
                    if seen[idx] {
                        bijective = false;
                        break;
                    }
                    seen[idx] = true;
                }
                if bijective {
                    maps.push(cand);
                }
            }
        }
        let arc = Arc::new(maps);
        // idempotent insert: concurrent populators compute the same list
        cache
            .lock()
            .unwrap()
            .entry(*self)
            .or_insert_with(|| arc.clone());
        Ok(arc)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C{}xC{}", self.n1, self.n2)
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u32, b: u32) -> u32 {
    a / gcd(a, b) * b
}

/// A group automorphism, determined by the images of the standard basis:
/// `(a,b) ↦ a·image_e1 + b·image_e2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AutMap {
    pub image_e1: GroupElement,
    pub image_e2: GroupElement,
}

impl AutMap {
    pub fn identity(spec: &GroupSpec) -> Self {
        AutMap {
            image_e1: spec.e1(),
            image_e2: spec.e2(),
        }
    }

    pub fn apply(&self, spec: &GroupSpec, g: GroupElement) -> GroupElement {
        spec.add(
            spec.smul(g.a as i64, self.image_e1),
            spec.smul(g.b as i64, self.image_e2),
        )
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, spec: &GroupSpec, other: &AutMap) -> AutMap {
        AutMap {
            image_e1: self.apply(spec, other.image_e1),
            image_e2: self.apply(spec, other.image_e2),
        }
    }
}

/// A subset of `G` as a fixed-width bit indicator over the dense element
/// index; cardinality is the popcount.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ElementSet {
    spec: GroupSpec,
    words: Vec<u64>,
}

impl ElementSet {
    pub fn empty(spec: GroupSpec) -> Self {
        let words = vec![0u64; spec.order().div_ceil(64)];
        ElementSet { spec, words }
    }

    pub fn full(spec: GroupSpec) -> Self {
        let mut s = Self::empty(spec);
        for i in 0..spec.order() {
            s.words[i / 64] |= 1 << (i % 64);
        }
        s
    }

    pub fn singleton(spec: GroupSpec, g: GroupElement) -> Self {
        let mut s = Self::empty(spec);
        s.insert(g);
        s
    }

    pub fn from_elements(spec: GroupSpec, elems: impl IntoIterator<Item = GroupElement>) -> Self {
        let mut s = Self::empty(spec);
        for g in elems {
            s.insert(g);
        }
        s
    }

    pub fn spec(&self) -> GroupSpec {
        self.spec
    }

    pub fn insert(&mut self, g: GroupElement) {
        let i = self.spec.index(g);
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, g: GroupElement) -> bool {
        let i = self.spec.index(g);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn union_with(&mut self, other: &ElementSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn is_subset_of(&self, other: &ElementSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// Elements in index order.
    pub fn iter(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.spec.order())
            .filter(move |&i| self.words[i / 64] >> (i % 64) & 1 == 1)
            .map(move |i| self.spec.element_at(i))
    }

    /// The translate `g + A`.
    pub fn translate(&self, g: GroupElement) -> ElementSet {
        let mut out = ElementSet::empty(self.spec);
        for x in self.iter() {
            out.insert(self.spec.add(g, x));
        }
        out
    }

    /// Sumset `A + B = {a + b}`.
    pub fn sumset(&self, other: &ElementSet) -> Result<ElementSet> {
        self.require_nonempty("sumset", other)?;
        let mut out = ElementSet::empty(self.spec);
        for b in other.iter() {
            out.union_with(&self.translate(b));
        }
        Ok(out)
    }

    /// Difference set `A − B = {a − b}`.
    pub fn difference(&self, other: &ElementSet) -> Result<ElementSet> {
        self.require_nonempty("difference", other)?;
        let mut out = ElementSet::empty(self.spec);
        for a in self.iter() {
            for b in other.iter() {
                out.insert(self.spec.sub(a, b));
            }
        }
        Ok(out)
    }

    /// `Stab(A) = {g ∈ G | g + A = A}`; a subgroup of `G`.
    pub fn stabilizer(&self) -> Result<ElementSet> {
        if self.is_empty() {
            return Err(Error::EmptySet("stabilizer"));
        }
        let mut out = ElementSet::empty(self.spec);
        for g in self.spec.elements() {
            if &self.translate(g) == self {
                out.insert(g);
            }
        }
        Ok(out)
    }

    /// True iff `Stab(A) ≠ {0}`.
    pub fn is_periodic(&self) -> Result<bool> {
        Ok(self.stabilizer()?.len() > 1)
    }

    fn require_nonempty(&self, op: &'static str, other: &ElementSet) -> Result<()> {
        if self.is_empty() || other.is_empty() {
            return Err(Error::EmptySet(op));
        }
        if self.spec != other.spec {
            return Err(Error::GroupMismatch(format!(
                "{} between {} and {}",
                op, self.spec, other.spec
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn make_group_enforces_divisibility() {
        assert!(GroupSpec::new(3, 3).is_ok());
        assert!(GroupSpec::new(2, 4).is_ok());
        assert!(matches!(
            GroupSpec::new(3, 4),
            Err(Error::Divisibility { .. })
        ));
        assert!(matches!(
            GroupSpec::new(0, 4),
            Err(Error::Divisibility { .. })
        ));
    }

    #[test]
    fn parse_round_trip() {
        let g = GroupSpec::parse("C3xC6").unwrap();
        assert_eq!((g.n1(), g.n2()), (3, 6));
        assert_eq!(g.to_string(), "C3xC6");
        assert!(GroupSpec::parse("3x6").is_err());
        assert!(GroupSpec::parse("C3x6").is_err());
        let c7 = GroupSpec::parse("C7").unwrap();
        assert_eq!((c7.n1(), c7.n2()), (1, 7));
    }

    #[test]
    fn element_arithmetic() {
        let g22 = GroupSpec::new(2, 2).unwrap();
        assert_eq!(
            g22.add(g22.element(1, 0), g22.element(1, 1)),
            g22.element(0, 1)
        );
        let g33 = GroupSpec::new(3, 3).unwrap();
        assert_eq!(g33.neg(g33.element(1, 2)), g33.element(2, 1));
        let g24 = GroupSpec::new(2, 4).unwrap();
        assert_eq!(g24.smul(3, g24.element(0, 1)), g24.element(0, 3));
    }

    #[test]
    fn orders() {
        let g24 = GroupSpec::new(2, 4).unwrap();
        assert_eq!(g24.order_of(g24.zero()), 1);
        assert_eq!(g24.order_of(g24.element(1, 2)), 2);
        let g33 = GroupSpec::new(3, 3).unwrap();
        assert_eq!(g33.order_of(g33.element(1, 1)), 3);
        for g in g33.elements() {
            let k = g33.order_of(g);
            assert_eq!(g33.smul(k as i64, g), g33.zero());
            assert_eq!(g33.n2() % k, 0);
        }
    }

    #[test]
    fn independence_and_bases() {
        let g33 = GroupSpec::new(3, 3).unwrap();
        assert!(g33.is_independent(&[g33.element(1, 0), g33.element(0, 1)]));
        assert!(!g33.is_independent(&[g33.element(1, 0), g33.element(2, 0)]));
        assert!(g33.is_independent(&[g33.element(1, 1), g33.element(1, 2)]));
        assert!(g33.is_basis(g33.element(1, 1), g33.element(1, 2)));
        assert!(!g33.is_basis(g33.element(0, 1), g33.element(0, 2)));
        let g24 = GroupSpec::new(2, 4).unwrap();
        assert!(g24.is_basis(g24.e1(), g24.e2()));
    }

    #[test]
    fn basis_gives_unique_representation() {
        let g24 = GroupSpec::new(2, 4).unwrap();
        for g in g24.elements() {
            for h in g24.elements() {
                if !g24.is_basis(g, h) {
                    continue;
                }
                let (og, oh) = (g24.order_of(g), g24.order_of(h));
                let mut seen = std::collections::HashSet::new();
                for x in 0..og {
                    for y in 0..oh {
                        seen.insert(g24.add(g24.smul(x as i64, g), g24.smul(y as i64, h)));
                    }
                }
                assert_eq!(seen.len(), g24.order());
            }
        }
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(GroupSpec::new(2, 2).unwrap().automorphisms().unwrap().len(), 6);
        assert_eq!(GroupSpec::new(1, 1).unwrap().automorphisms().unwrap().len(), 1);
        assert_eq!(
            GroupSpec::new(3, 3).unwrap().automorphisms().unwrap().len(),
            48
        );
    }

    #[test]
    fn automorphisms_form_a_group_and_preserve_order() {
        let g = GroupSpec::new(2, 4).unwrap();
        let auts = g.automorphisms().unwrap();
        assert!(auts.contains(&AutMap::identity(&g)));
        for a in auts.iter() {
            for b in auts.iter() {
                assert!(auts.contains(&a.compose(&g, b)));
            }
            for x in g.elements() {
                assert_eq!(g.order_of(a.apply(&g, x)), g.order_of(x));
            }
        }
    }

    #[test]
    fn set_algebra() {
        let g = GroupSpec::new(2, 2).unwrap();
        let b = ElementSet::from_elements(g, [g.element(1, 0), g.element(0, 1)]);
        let zero = ElementSet::singleton(g, g.zero());
        assert_eq!(zero.sumset(&b).unwrap(), b);
        let full = ElementSet::full(g);
        assert_eq!(full.stabilizer().unwrap(), full);
        let s = b.sumset(&ElementSet::singleton(g, g.element(1, 0))).unwrap();
        assert_eq!(
            s,
            ElementSet::from_elements(g, [g.element(0, 0), g.element(1, 1)])
        );
        assert!(ElementSet::empty(g).sumset(&b).is_err());
    }

    #[test]
    fn sumset_lower_bound_and_commutativity() {
        let g = GroupSpec::new(2, 4).unwrap();
        let a = ElementSet::from_elements(g, [g.element(0, 1), g.element(1, 2)]);
        let b = ElementSet::from_elements(g, [g.element(1, 0), g.element(0, 3), g.element(1, 1)]);
        let ab = a.sumset(&b).unwrap();
        assert!(ab.len() >= a.len().max(b.len()));
        assert_eq!(ab, b.sumset(&a).unwrap());
    }
}
