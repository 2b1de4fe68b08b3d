//! Elements of PSL(2, p): unit-determinant 2x2 matrices over F_p modulo ±I,
//! together with element orders, enumeration, conjugacy classification and
//! subgroup closure.

use std::collections::HashSet;
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::ffield::{is_prime, FieldError, PrimeField, QuadExtElement};

/// Default cap on the number of elements materialised by enumeration,
/// closure and breadth-first search.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("modulus mismatch: p={0} vs p={1}")]
    ModulusMismatch(u32, u32),
    #[error("matrix does not have determinant 1 mod {0}")]
    NotUnimodular(u32),
    #[error("resource budget exceeded: {needed} elements > {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },
    #[error("unsupported congruence: p={0} is not 3 mod 4")]
    UnsupportedCongruence(u32),
    #[error("cannot parse element: {0}")]
    Parse(String),
}

/// |PSL(2, p)| = p(p² − 1)/2.
pub fn group_order(p: u64) -> u64 {
    p * (p * p - 1) / 2
}

/// Canonical representative of ±m in PSL(2, p): the first nonzero entry in
/// scan order (a, b, c, d) lies in [1, (p − 1)/2].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PSL2Elem {
    a: u32,
    b: u32,
    c: u32,
    d: u32,
    p: u32,
}

#[inline]
fn canonical(p: u32, mut e: [u32; 4]) -> [u32; 4] {
    let half = (p - 1) / 2;
    if let Some(&first) = e.iter().find(|&&x| x != 0) {
        if first > half {
            for x in e.iter_mut() {
                if *x != 0 {
                    *x = p - *x;
                }
            }
        }
    }
    e
}

impl PSL2Elem {
    /// Builds the class of the matrix (a b; c d) mod p, which must have
    /// determinant 1.
    pub fn new(a: i64, b: i64, c: i64, d: i64, p: u32) -> Result<Self, GroupError> {
        if p < 3 || !is_prime(p as u64) {
            return Err(FieldError::InvalidModulus(p as u64).into());
        }
        let r = |x: i64| x.rem_euclid(p as i64) as u32;
        let (a, b, c, d) = (r(a), r(b), r(c), r(d));
        let pm = p as u64;
        let det = (a as u64 * d as u64 + pm * pm - b as u64 * c as u64 % pm) % pm;
        if det != 1 {
            return Err(GroupError::NotUnimodular(p));
        }
        Ok(Self::from_reduced(p, [a, b, c, d]))
    }

    #[inline]
    fn from_reduced(p: u32, e: [u32; 4]) -> Self {
        let [a, b, c, d] = canonical(p, e);
        PSL2Elem { a, b, c, d, p }
    }

    pub fn identity(p: u32) -> Self {
        PSL2Elem { a: 1, b: 0, c: 0, d: 1, p }
    }

    /// (0 −1; 1 0), of order 2.
    pub fn involution(p: u32) -> Self {
        Self::from_reduced(p, [0, p - 1, 1, 0])
    }

    /// (1 1; 0 1), of order p.
    pub fn translation(p: u32) -> Self {
        PSL2Elem { a: 1, b: 1, c: 0, d: 1, p }
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    /// Entries (a, b, c, d) of the canonical representative.
    #[inline]
    pub fn entries(&self) -> [u32; 4] {
        [self.a, self.b, self.c, self.d]
    }

    #[inline]
    pub fn is_identity(&self) -> bool {
        self.a == 1 && self.b == 0 && self.c == 0 && self.d == 1
    }

    /// Dense key, unique for p <= 65535.
    #[inline]
    pub fn key(&self) -> u64 {
        let p = self.p as u64;
        ((self.a as u64 * p + self.b as u64) * p + self.c as u64) * p + self.d as u64
    }

    /// Trace of the canonical representative; the group element only
    /// determines it up to sign.
    #[inline]
    pub fn trace(&self) -> u32 {
        ((self.a as u64 + self.d as u64) % self.p as u64) as u32
    }

    pub fn group_op(&self, other: &Self) -> Result<Self, GroupError> {
        if self.p != other.p {
            return Err(GroupError::ModulusMismatch(self.p, other.p));
        }
        Ok(self.mul_unchecked(other))
    }

    #[inline]
    pub(crate) fn mul_unchecked(&self, o: &Self) -> Self {
        let p = self.p as u64;
        let (a, b, c, d) = (self.a as u64, self.b as u64, self.c as u64, self.d as u64);
        let (e, f, g, h) = (o.a as u64, o.b as u64, o.c as u64, o.d as u64);
        Self::from_reduced(
            self.p,
            [
                ((a * e + b * g) % p) as u32,
                ((a * f + b * h) % p) as u32,
                ((c * e + d * g) % p) as u32,
                ((c * f + d * h) % p) as u32,
            ],
        )
    }

    pub fn inverse(&self) -> Self {
        let p = self.p;
        let neg = |x: u32| if x == 0 { 0 } else { p - x };
        Self::from_reduced(p, [self.d, neg(self.b), neg(self.c), self.a])
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut result = Self::identity(self.p);
        let mut base = *self;
        while exp > 0 {
            if exp & 1 == 1 {
                result = result.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            exp >>= 1;
        }
        result
    }

    /// h · self · h⁻¹
    pub fn conjugate_by(&self, h: &Self) -> Self {
        h.mul_unchecked(self).mul_unchecked(&h.inverse())
    }

    /// Least k >= 1 with self^k = ±I.
    pub fn element_order(&self) -> u64 {
        let field = PrimeField::new(self.p as u64).expect("element modulus is a valid prime");
        self.element_order_in(&field)
    }

    /// Element order computed from the eigenvalues of the canonical
    /// representative; `field` must be F_p for this element's p.
    pub fn element_order_in(&self, field: &PrimeField) -> u64 {
        debug_assert_eq!(field.p(), self.p);
        if self.is_identity() {
            return 1;
        }
        let t = self.trace();
        let disc = field.sub(field.mul(t, t), 4);
        let half = field.inv(2).unwrap();
        let ord = if disc == 0 {
            return self.p as u64;
        } else if let Some(r) = field.sqrt(disc) {
            let lambda = field.mul(field.add(t, r), half);
            field.mult_order(lambda).unwrap()
        } else {
            let lambda = split_free_eigenvalue(field, t);
            field.ext_mult_order(&lambda).unwrap()
        };
        if ord % 2 == 0 {
            ord / 2
        } else {
            ord
        }
    }
}

/// Eigenvalue (t + √(t² − 4))/2 in F_p(√ε) when t² − 4 is a non-residue.
fn split_free_eigenvalue(field: &PrimeField, t: u32) -> QuadExtElement {
    let disc = field.sub(field.mul(t, t), 4);
    let ratio = field.mul(disc, field.inv(field.epsilon()).unwrap());
    let s = field.sqrt(ratio).expect("disc/ε is a square when disc is not");
    let half = field.inv(2).unwrap();
    field.ext(field.mul(t, half) as i64, field.mul(s, half) as i64)
}

impl Mul for PSL2Elem {
    type Output = PSL2Elem;

    /// Panics on modulus mismatch; use [`PSL2Elem::group_op`] for a checked product.
    fn mul(self, rhs: Self) -> Self {
        assert_eq!(self.p, rhs.p, "PSL2Elem modulus mismatch");
        self.mul_unchecked(&rhs)
    }
}

impl fmt::Display for PSL2Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{},{}],[{},{}]] mod {}",
            self.a, self.b, self.c, self.d, self.p
        )
    }
}

impl fmt::Debug for PSL2Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for PSL2Elem {
    type Err = GroupError;

    /// Parses `[[a,b],[c,d]] mod p`. Non-canonical input is accepted and
    /// canonicalised.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || GroupError::Parse(s.to_string());
        let (matrix, modulus) = s.split_once("mod").ok_or_else(err)?;
        let p: u32 = modulus.trim().parse().map_err(|_| err())?;
        let nums: Vec<i64> = matrix
            .split(|ch: char| ch == '[' || ch == ']' || ch == ',' || ch.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<i64>().map_err(|_| err()))
            .collect::<Result<_, _>>()?;
        if nums.len() != 4 {
            return Err(err());
        }
        PSL2Elem::new(nums[0], nums[1], nums[2], nums[3], p)
    }
}

impl Serialize for PSL2Elem {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PSL2Elem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// All canonical elements of PSL(2, p), sorted by entries.
pub fn enumerate_group(p: u32, budget: u64) -> Result<Vec<PSL2Elem>, GroupError> {
    let field = PrimeField::new(p as u64)?;
    let needed = group_order(p as u64);
    if needed > budget {
        return Err(GroupError::BudgetExceeded { needed, budget });
    }
    let half = (p - 1) / 2;
    let mut out = Vec::with_capacity(needed as usize);
    // a != 0: d = (1 + bc)/a; canonical iff a <= (p-1)/2.
    for a in 1..=half {
        let a_inv = field.inv(a)?;
        for b in 0..p {
            for c in 0..p {
                let d = field.mul(field.add(1, field.mul(b, c)), a_inv);
                out.push(PSL2Elem { a, b, c, d, p });
            }
        }
    }
    // a == 0: bc = −1, so b != 0; canonical iff b <= (p-1)/2.
    for b in 1..=half {
        let c = field.neg(field.inv(b)?);
        for d in 0..p {
            out.push(PSL2Elem { a: 0, b, c, d, p });
        }
    }
    out.sort_unstable();
    debug_assert_eq!(out.len() as u64, needed);
    Ok(out)
}

/// Subgroup generated by `gens`, by breadth-first closure under right
/// multiplication. Errors if more than `cap` elements are reached.
pub fn closure(p: u32, gens: &[PSL2Elem], cap: u64) -> Result<HashSet<PSL2Elem>, GroupError> {
    if let Some(g) = gens.iter().find(|g| g.p != p) {
        return Err(GroupError::ModulusMismatch(p, g.p));
    }
    let mut seen = HashSet::new();
    let id = PSL2Elem::identity(p);
    seen.insert(id);
    let mut frontier = vec![id];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for x in &frontier {
            for g in gens {
                let y = x.mul_unchecked(g);
                if seen.insert(y) {
                    if seen.len() as u64 > cap {
                        return Err(GroupError::BudgetExceeded {
                            needed: seen.len() as u64,
                            budget: cap,
                        });
                    }
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    Ok(seen)
}

/// Whether `gens` generate all of PSL(2, p). Stops as soon as the closure
/// reaches the full group order.
pub fn generates_group(p: u32, gens: &[PSL2Elem]) -> bool {
    let target = group_order(p as u64) as usize;
    let mut seen = HashSet::with_capacity(target);
    let id = PSL2Elem::identity(p);
    seen.insert(id);
    let mut frontier = vec![id];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for x in &frontier {
            for g in gens {
                let y = x.mul_unchecked(g);
                if seen.insert(y) {
                    if seen.len() == target {
                        return true;
                    }
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    seen.len() == target
}

/// Conjugacy class kinds of PSL(2, p), p ≡ 3 (mod 4), in column order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassKind {
    Identity,
    /// Class of (1 1; 0 1).
    UnipotentOne,
    /// Class of (1 ε; 0 1).
    UnipotentEps,
    /// Diagonalisable over F_p with eigenvalues {x, x⁻¹}; parameter is the
    /// smallest of x, x⁻¹, −x, −x⁻¹.
    Split(u32),
    /// Eigenvalues ζ, ζ^p in the norm-one group C; parameter is canonical up
    /// to conjugation and sign, with trace nonzero.
    Nonsplit(QuadExtElement),
    /// The trace-zero class of (0 −1; 1 0).
    OrderTwo,
}

impl ClassKind {
    pub fn name(&self) -> &'static str {
        match self {
            ClassKind::Identity => "identity",
            ClassKind::UnipotentOne => "unipotent-1",
            ClassKind::UnipotentEps => "unipotent-eps",
            ClassKind::Split(_) => "split",
            ClassKind::Nonsplit(_) => "nonsplit",
            ClassKind::OrderTwo => "order-two",
        }
    }
}

impl fmt::Display for ClassKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassKind::Split(x) => write!(f, "split({x})"),
            ClassKind::Nonsplit(z) => write!(f, "nonsplit({z})"),
            other => f.write_str(other.name()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConjClassLabel {
    pub kind: ClassKind,
    pub size: u64,
}

impl ConjClassLabel {
    pub fn new(kind: ClassKind, p: u32) -> Self {
        let p = p as u64;
        let size = match kind {
            ClassKind::Identity => 1,
            ClassKind::UnipotentOne | ClassKind::UnipotentEps => (p * p - 1) / 2,
            ClassKind::Split(_) => p * (p + 1),
            ClassKind::Nonsplit(_) => p * (p - 1),
            ClassKind::OrderTwo => p * (p - 1) / 2,
        };
        ConjClassLabel { kind, size }
    }

    /// A fixed element of the class.
    pub fn representative(&self, field: &PrimeField) -> PSL2Elem {
        let p = field.p();
        match self.kind {
            ClassKind::Identity => PSL2Elem::identity(p),
            ClassKind::UnipotentOne => PSL2Elem::translation(p),
            ClassKind::UnipotentEps => PSL2Elem::from_reduced(p, [1, field.epsilon(), 0, 1]),
            ClassKind::Split(x) => {
                PSL2Elem::from_reduced(p, [x, 0, 0, field.inv(x).expect("split parameter is a unit")])
            }
            ClassKind::Nonsplit(z) => {
                PSL2Elem::from_reduced(p, [z.x, field.mul(field.epsilon(), z.y), z.y, z.x])
            }
            ClassKind::OrderTwo => PSL2Elem::involution(p),
        }
    }
}

fn require_three_mod_four(p: u32) -> Result<(), GroupError> {
    if p % 4 != 3 {
        return Err(GroupError::UnsupportedCongruence(p));
    }
    Ok(())
}

fn canonical_split_param(field: &PrimeField, x: u32) -> u32 {
    let xi = field.inv(x).expect("nonzero eigenvalue");
    [x, xi, field.neg(x), field.neg(xi)].into_iter().min().unwrap()
}

fn canonical_nonsplit_param(field: &PrimeField, z: QuadExtElement) -> QuadExtElement {
    let p = field.p();
    QuadExtElement {
        x: z.x.min(p - z.x),
        y: z.y.min(p - z.y),
        p,
    }
}

/// Classifies `g` by trace, residuosity and eigenvalues.
pub fn classify_conjugacy(g: &PSL2Elem, field: &PrimeField) -> Result<ConjClassLabel, GroupError> {
    let p = g.p;
    if field.p() != p {
        return Err(GroupError::ModulusMismatch(field.p(), p));
    }
    require_three_mod_four(p)?;
    let kind = if g.is_identity() {
        ClassKind::Identity
    } else {
        let t = g.trace();
        let disc = field.sub(field.mul(t, t), 4);
        if disc == 0 {
            // Representative with trace 2; N = M − I is nonzero nilpotent and
            // conjugate to b·(0 1; 0 0) with b ≡ n12 or −n21 mod squares.
            let e = if t == 2 {
                g.entries()
            } else {
                g.entries().map(|x| field.neg(x))
            };
            let b = if e[1] != 0 { e[1] } else { field.neg(e[2]) };
            if field.is_square(b) {
                ClassKind::UnipotentOne
            } else {
                ClassKind::UnipotentEps
            }
        } else if let Some(r) = field.sqrt(disc) {
            let half = field.inv(2).unwrap();
            let lambda = field.mul(field.add(t, r), half);
            ClassKind::Split(canonical_split_param(field, lambda))
        } else if t == 0 {
            ClassKind::OrderTwo
        } else {
            ClassKind::Nonsplit(canonical_nonsplit_param(field, split_free_eigenvalue(field, t)))
        }
    };
    Ok(ConjClassLabel::new(kind, p))
}

/// Every conjugacy class of PSL(2, p), p ≡ 3 (mod 4), in column order:
/// identity, the two unipotent classes, split classes by ascending
/// parameter, nonsplit classes ascending, then the order-two class.
pub fn all_classes(field: &PrimeField) -> Result<Vec<ConjClassLabel>, GroupError> {
    let p = field.p();
    require_three_mod_four(p)?;
    let mut kinds = vec![ClassKind::Identity, ClassKind::UnipotentOne, ClassKind::UnipotentEps];
    for x in 2..p - 1 {
        if canonical_split_param(field, x) == x {
            kinds.push(ClassKind::Split(x));
        }
    }
    let half = (p - 1) / 2;
    for x in 1..=half {
        for y in 1..=half {
            let z = QuadExtElement { x, y, p };
            if field.in_circle(&z) {
                kinds.push(ClassKind::Nonsplit(z));
            }
        }
    }
    kinds.push(ClassKind::OrderTwo);
    Ok(kinds.into_iter().map(|k| ConjClassLabel::new(k, p)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashMap;

    fn el(a: i64, b: i64, c: i64, d: i64, p: u32) -> PSL2Elem {
        PSL2Elem::new(a, b, c, d, p).unwrap()
    }

    #[test]
    fn group_op_examples() {
        let t = PSL2Elem::translation(7);
        assert_eq!(t * t, el(1, 2, 0, 1, 7));
        assert!((t * t.inverse()).is_identity());
        let s = el(0, -1, 1, 0, 7);
        let st = s * t;
        assert_eq!(st, el(0, -1, 1, 1, 7));
        // first nonzero entry of (0 −1; 1 1) is 6 > 3, so the sign flips
        assert_eq!(st.entries(), [0, 1, 6, 6]);
    }

    #[test]
    fn group_op_rejects_mixed_moduli() {
        let e = PSL2Elem::identity(7).group_op(&PSL2Elem::identity(11));
        assert_eq!(e, Err(GroupError::ModulusMismatch(7, 11)));
    }

    #[test]
    fn new_rejects_bad_determinant() {
        assert_eq!(PSL2Elem::new(1, 1, 1, 1, 7), Err(GroupError::NotUnimodular(7)));
        assert!(PSL2Elem::new(1, 0, 0, 1, 9).is_err());
    }

    #[test]
    fn element_order_examples() {
        assert_eq!(PSL2Elem::identity(7).element_order(), 1);
        assert_eq!(PSL2Elem::translation(7).element_order(), 7);
        assert_eq!(PSL2Elem::involution(7).element_order(), 2);
    }

    fn brute_order(g: &PSL2Elem) -> u64 {
        let mut x = *g;
        let mut k = 1;
        while !x.is_identity() {
            x = x * *g;
            k += 1;
        }
        k
    }

    #[test]
    fn element_order_matches_brute_force() {
        for p in [3u32, 5, 7, 11, 13, 19, 23] {
            let field = PrimeField::new(p as u64).unwrap();
            let pp = p as u64;
            for g in enumerate_group(p, DEFAULT_BUDGET).unwrap() {
                let k = g.element_order_in(&field);
                assert_eq!(k, brute_order(&g), "{g}");
                let menu = [pp, (pp - 1) / 2, (pp + 1) / 2];
                assert!(menu.iter().any(|m| m % k == 0) || k == 2, "{g} order {k}");
            }
        }
    }

    #[test]
    fn enumerate_sizes() {
        assert_eq!(enumerate_group(3, DEFAULT_BUDGET).unwrap().len(), 12);
        assert_eq!(enumerate_group(7, DEFAULT_BUDGET).unwrap().len(), 168);
        assert_eq!(enumerate_group(11, DEFAULT_BUDGET).unwrap().len(), 660);
        assert_eq!(
            enumerate_group(11, 100),
            Err(GroupError::BudgetExceeded { needed: 660, budget: 100 })
        );
    }

    #[test]
    fn enumeration_is_distinct_and_canonical() {
        let g = enumerate_group(13, DEFAULT_BUDGET).unwrap();
        let set: HashSet<_> = g.iter().copied().collect();
        assert_eq!(set.len(), g.len());
        for x in &g {
            let [a, b, c, d] = x.entries();
            assert_eq!(PSL2Elem::new(a as i64, b as i64, c as i64, d as i64, 13).unwrap(), *x);
        }
    }

    #[test]
    fn classify_examples() {
        let f = PrimeField::new(7).unwrap();
        let id = classify_conjugacy(&PSL2Elem::identity(7), &f).unwrap();
        assert_eq!(id, ConjClassLabel { kind: ClassKind::Identity, size: 1 });
        let u = classify_conjugacy(&PSL2Elem::translation(7), &f).unwrap();
        assert_eq!(u, ConjClassLabel { kind: ClassKind::UnipotentOne, size: 24 });
        let s = classify_conjugacy(&el(2, 0, 0, 4, 7), &f).unwrap();
        assert_eq!(s, ConjClassLabel { kind: ClassKind::Split(2), size: 56 });
        let o = classify_conjugacy(&PSL2Elem::involution(7), &f).unwrap();
        assert_eq!(o.kind, ClassKind::OrderTwo);
    }

    #[test]
    fn classify_rejects_one_mod_four() {
        let f = PrimeField::new(13).unwrap();
        assert_eq!(
            classify_conjugacy(&PSL2Elem::identity(13), &f),
            Err(GroupError::UnsupportedCongruence(13))
        );
    }

    #[test]
    fn class_equation_and_representatives() {
        for p in [7u32, 11, 19, 23, 31] {
            let f = PrimeField::new(p as u64).unwrap();
            let classes = all_classes(&f).unwrap();
            assert_eq!(classes.len() as u32, (p + 5) / 2);
            let total: u64 = classes.iter().map(|c| c.size).sum();
            assert_eq!(total, group_order(p as u64));
            let mut counts: HashMap<ConjClassLabel, u64> = HashMap::new();
            for g in enumerate_group(p, DEFAULT_BUDGET).unwrap() {
                *counts.entry(classify_conjugacy(&g, &f).unwrap()).or_default() += 1;
            }
            assert_eq!(counts.len(), classes.len());
            for c in &classes {
                assert_eq!(counts[c], c.size, "p={p} class {}", c.kind);
                assert_eq!(classify_conjugacy(&c.representative(&f), &f).unwrap(), *c);
            }
        }
    }

    #[test]
    fn closure_examples() {
        let p = 7;
        let id = PSL2Elem::identity(p);
        assert_eq!(closure(p, &[id], 100).unwrap().len(), 1);
        assert_eq!(closure(p, &[], 100).unwrap().len(), 1);
        assert_eq!(closure(p, &[PSL2Elem::translation(p)], 100).unwrap().len(), 7);
        let full = closure(p, &[PSL2Elem::involution(p), PSL2Elem::translation(p)], 1000).unwrap();
        assert_eq!(full.len(), 168);
        assert!(generates_group(p, &[PSL2Elem::involution(p), PSL2Elem::translation(p)]));
        assert!(!generates_group(p, &[PSL2Elem::translation(p)]));
        assert!(matches!(
            closure(p, &[PSL2Elem::involution(p), PSL2Elem::translation(p)], 50),
            Err(GroupError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn text_format_roundtrip() {
        let g = el(0, -1, 1, 1, 7);
        let s = g.to_string();
        assert_eq!(s, "[[0,1],[6,6]] mod 7");
        assert_eq!(s.parse::<PSL2Elem>().unwrap(), g);
        assert_eq!("[[0,-1],[1,1]] mod 7".parse::<PSL2Elem>().unwrap(), g);
        assert!("[[0,1],[6]] mod 7".parse::<PSL2Elem>().is_err());
    }

    fn arb_elem(p: u32) -> impl Strategy<Value = PSL2Elem> {
        let g = enumerate_group(p, DEFAULT_BUDGET).unwrap();
        (0..g.len()).prop_map(move |i| g[i])
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn classification_is_conjugation_invariant(g in arb_elem(19), h in arb_elem(19)) {
            let f = PrimeField::new(19).unwrap();
            prop_assert_eq!(
                classify_conjugacy(&g.conjugate_by(&h), &f).unwrap(),
                classify_conjugacy(&g, &f).unwrap()
            );
        }

        #[test]
        fn canonicalisation_picks_exactly_one_sign(v in proptest::array::uniform3(0i64..23)) {
            let p = 23u32;
            let f = PrimeField::new(p as u64).unwrap();
            let (a, b, c) = (v[0] as u32, v[1] as u32, v[2] as u32);
            prop_assume!(a != 0);
            let d = f.mul(f.add(1, f.mul(b, c)), f.inv(a).unwrap());
            let m = [a, b, c, d];
            let neg = m.map(|x| f.neg(x));
            let is_canon = |e: [u32; 4]| canonical(p, e) == e;
            prop_assert!(is_canon(m) ^ is_canon(neg));
            prop_assert_eq!(canonical(p, canonical(p, m)), canonical(p, m));
        }
    }
}
