//! Signatures (h; m₁, …, m_r) of PSL(2, p)-actions on surfaces, p ≡ 3 (mod 4).
//!
//! Admissibility is decided by the three orbit-genus case rules (h = 0,
//! h = 1, h >= 2). The unified two-inequality criterion is evaluated
//! separately by [`key_lemma_check`] and only compared against the case
//! rules in [`consistency_report`]; it never decides admissibility.
//!
//! Surface-kernel epimorphisms Γ(σ) → PSL(2, p) are found by seeded
//! rejection sampling. Verification is exact: the long relation
//! Π[Aᵢ, Bᵢ]·ΠCⱼ = 1 must hold and the images must generate the group.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::chartab::CharacterTable;
use crate::ffield::{is_prime, FieldError, PrimeField};
use crate::psl2::{
    enumerate_group, generates_group, group_order, ConjClassLabel, GroupError, PSL2Elem, DEFAULT_BUDGET,
};

/// Default number of sampled tuples before an epimorphism search gives up.
pub const DEFAULT_SEARCH_BUDGET: u64 = 1_000_000;

/// Nonvanishing threshold for character sums.
pub const NONVANISHING_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SignatureError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("unsupported congruence: p={0} is not 3 mod 4")]
    UnsupportedCongruence(u32),
    #[error("period {period} is not in the period alphabet for p={p}")]
    UnsupportedPeriod { period: u32, p: u32 },
    #[error("invalid period {0}: periods must be >= 2")]
    InvalidPeriod(u32),
    #[error("cannot parse signature {0:?} (expected \"h:m1,m2,...\" or \"h:-\")")]
    Parse(String),
    #[error("period {0} does not occur in the signature")]
    MissingPeriod(u32),
    #[error("extension condition violated: {0} is neither 2 nor an odd prime dividing |G|")]
    ConditionViolated(u32),
    #[error("extended signature has non-integral genus {0}")]
    NonIntegralGenus(Rational64),
    #[error("numeric instability: class-product count residue {0:e} exceeds 1e-4")]
    NumericInstability(f64),
    #[error("class {0} is not a class of the table")]
    UnknownClass(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EpimorphismError {
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error("no Fuchsian group: Riemann-Hurwitz genus {0} is negative")]
    NoFuchsianGroup(Rational64),
    #[error("signature not admissible: {0}")]
    NotAdmissible(String),
    #[error("PSL(2,{p}) has no element of order {order}")]
    NoElementsOfOrder { order: u32, p: u32 },
    #[error("search failed after {0} samples (inconclusive)")]
    SearchExhausted(u64),
}

/// Orbit genus and sorted periods.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    pub h: u32,
    periods: Vec<u32>,
}

impl Signature {
    pub fn new(h: u32, mut periods: Vec<u32>) -> Result<Self, SignatureError> {
        if let Some(&m) = periods.iter().find(|&&m| m < 2) {
            return Err(SignatureError::InvalidPeriod(m));
        }
        periods.sort_unstable();
        Ok(Signature { h, periods })
    }

    pub fn periods(&self) -> &[u32] {
        &self.periods
    }

    pub fn r(&self) -> usize {
        self.periods.len()
    }

    /// Number of generators 2h + r of Γ(σ).
    pub fn generator_count(&self) -> usize {
        2 * self.h as usize + self.periods.len()
    }

    /// 2h − 2 + Σ(1 − 1/mᵢ), the normalised hyperbolic area.
    pub fn area(&self) -> Rational64 {
        let mut s = Rational64::from_integer(2 * self.h as i64 - 2);
        for &m in &self.periods {
            s += Rational64::new(m as i64 - 1, m as i64);
        }
        s
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.periods.is_empty() {
            write!(f, "{}:-", self.h)
        } else {
            let ps: Vec<String> = self.periods.iter().map(|m| m.to_string()).collect();
            write!(f, "{}:{}", self.h, ps.join(","))
        }
    }
}

impl FromStr for Signature {
    type Err = SignatureError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || SignatureError::Parse(s.to_string());
        let (h, rest) = s.trim().split_once(':').ok_or_else(err)?;
        let h: u32 = h.trim().parse().map_err(|_| err())?;
        let rest = rest.trim();
        let periods = if rest == "-" {
            Vec::new()
        } else {
            rest.split(',')
                .map(|t| t.trim().parse::<u32>().map_err(|_| err()))
                .collect::<Result<Vec<_>, _>>()?
        };
        Signature::new(h, periods)
    }
}

impl Serialize for Signature {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Signature {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Smallest e >= 7 dividing (p − 1)/2 or (p + 1)/2.
pub fn d_value(p: u32) -> Option<u32> {
    let (lo, hi) = ((p.saturating_sub(1)) / 2, (p + 1) / 2);
    (7..=hi.max(7)).find(|&e| (lo > 0 && lo % e == 0) || hi % e == 0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PeriodRole {
    Two,
    Three,
    Four,
    Five,
    D,
    HalfPMinus,
    HalfPPlus,
    P,
}

/// The admissible period values {2, 3, 4, 5, d, (p−1)/2, (p+1)/2, p} for a
/// prime p, deduplicated by integer value with every matching role kept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodAlphabet {
    pub p: u32,
    pub d: Option<u32>,
    entries: BTreeMap<u32, Vec<PeriodRole>>,
}

impl PeriodAlphabet {
    pub fn new(p: u32) -> Self {
        let d = d_value(p);
        let mut roles = vec![
            (2, PeriodRole::Two),
            (3, PeriodRole::Three),
            (4, PeriodRole::Four),
            (5, PeriodRole::Five),
        ];
        if let Some(d) = d {
            roles.push((d, PeriodRole::D));
        }
        roles.push(((p - 1) / 2, PeriodRole::HalfPMinus));
        roles.push(((p + 1) / 2, PeriodRole::HalfPPlus));
        roles.push((p, PeriodRole::P));
        let mut entries: BTreeMap<u32, Vec<PeriodRole>> = BTreeMap::new();
        for (v, role) in roles {
            if v >= 2 {
                entries.entry(v).or_default().push(role);
            }
        }
        PeriodAlphabet { p, d, entries }
    }

    pub fn values(&self) -> Vec<u32> {
        self.entries.keys().copied().collect()
    }

    pub fn contains(&self, m: u32) -> bool {
        self.entries.contains_key(&m)
    }

    pub fn roles(&self, m: u32) -> &[PeriodRole] {
        self.entries.get(&m).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Multiplicities a_role; each period counts towards its first role.
    pub fn multiplicities(&self, sig: &Signature) -> Result<BTreeMap<PeriodRole, i64>, SignatureError> {
        let mut out = BTreeMap::new();
        for &m in sig.periods() {
            let role = *self
                .roles(m)
                .first()
                .ok_or(SignatureError::UnsupportedPeriod { period: m, p: self.p })?;
            *out.entry(role).or_insert(0) += 1;
        }
        Ok(out)
    }
}

/// g = 1 + |G|(h − 1) + (|G|/2)·Σ(1 − 1/mᵢ), exactly.
pub fn rh_genus(sig: &Signature, p: u32) -> Rational64 {
    let order = group_order(p as u64) as i64;
    let mut g = Rational64::from_integer(1 + order * (sig.h as i64 - 1));
    let half = Rational64::new(order, 2);
    for &m in sig.periods() {
        g += half * Rational64::new(m as i64 - 1, m as i64);
    }
    g
}

fn check_prime_three_mod_four(p: u32) -> Result<(), SignatureError> {
    if p < 3 || !is_prime(p as u64) {
        return Err(FieldError::InvalidModulus(p as u64).into());
    }
    if p % 4 != 3 {
        return Err(SignatureError::UnsupportedCongruence(p));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Admissibility {
    pub admissible: bool,
    pub rule: &'static str,
    pub reason: String,
    pub rh_genus: String,
    pub genus_integral: bool,
}

/// Decides admissibility of `sig` for PSL(2, p) by the orbit-genus rules:
/// h >= 2 always; h = 1 iff at least one period; h = 0 iff Σ(1 − 1/m) >= 2.
/// Integrality of the Riemann–Hurwitz genus is reported, not enforced.
pub fn admissible(sig: &Signature, p: u32) -> Result<Admissibility, SignatureError> {
    check_prime_three_mod_four(p)?;
    let alphabet = PeriodAlphabet::new(p);
    for &m in sig.periods() {
        if !alphabet.contains(m) {
            return Err(SignatureError::UnsupportedPeriod { period: m, p });
        }
    }
    let (ok, rule, why) = match sig.h {
        0 => {
            let s: Rational64 = sig
                .periods()
                .iter()
                .map(|&m| Rational64::new(m as i64 - 1, m as i64))
                .sum();
            let ok = s >= Rational64::from_integer(2);
            (ok, "h=0", format!("sum (1-1/m) = {s} {} 2", if ok { ">=" } else { "<" }))
        }
        1 => {
            let ok = sig.r() >= 1;
            (ok, "h=1", format!("{} period(s) present", sig.r()))
        }
        _ => (true, "h>=2", "every multiplicity vector is admissible".to_string()),
    };
    let g = rh_genus(sig, p);
    let integral = g.is_integer() && !g.is_negative();
    Ok(Admissibility {
        admissible: ok,
        rule,
        reason: format!(
            "{rule}: {why}; rh genus {g} ({})",
            if integral { "nonnegative integer" } else { "not a nonnegative integer" }
        ),
        rh_genus: g.to_string(),
        genus_integral: integral,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KeyLemmaCheck {
    pub ineq1: bool,
    pub ineq2: bool,
    pub applicable: bool,
    pub lhs1: String,
    pub lhs2: String,
    pub lhs1_approx: f64,
    pub lhs2_approx: f64,
}

impl KeyLemmaCheck {
    pub fn verdict(&self) -> bool {
        self.ineq1 || self.ineq2
    }
}

/// Side conditions p >= 13, p ≡ ±1 (mod 5), p ≢ ±1 (mod 8), d >= 15.
pub fn key_lemma_applicable(p: u32) -> bool {
    p >= 13
        && matches!(p % 5, 1 | 4)
        && !matches!(p % 8, 1 | 7)
        && d_value(p).is_some_and(|d| d >= 15)
}

/// Evaluates both unified inequalities verbatim, constant offsets included.
pub fn key_lemma_check(sig: &Signature, p: u32) -> Result<KeyLemmaCheck, SignatureError> {
    check_prime_three_mod_four(p)?;
    let alphabet = PeriodAlphabet::new(p);
    let a = alphabet.multiplicities(sig)?;
    let get = |r: PeriodRole| *a.get(&r).unwrap_or(&0);
    let q = |n: i64, d: i64| Rational64::new(n, d);
    let pi = p as i64;
    let h = sig.h as i64;

    let mut first = Rational64::from_integer(2 * (h - 1))
        + q(get(PeriodRole::Two) - 1, 2)
        + q(2 * get(PeriodRole::Three) - 1, 3)
        + q(3 * get(PeriodRole::Four), 4)
        + q(4 * get(PeriodRole::Five), 5)
        + q(get(PeriodRole::HalfPMinus) * (pi - 3), pi - 1)
        + q(get(PeriodRole::HalfPPlus) * (pi - 1), pi + 1)
        + q((pi - 1) * get(PeriodRole::P), pi);
    let mut bracket = q(get(PeriodRole::Two), 2)
        + q(2 * get(PeriodRole::Three), 3)
        + q(3 * get(PeriodRole::Four), 4)
        + q(4 * get(PeriodRole::Five), 5)
        + q((pi - 3) * get(PeriodRole::HalfPMinus), pi - 1)
        + q((pi - 1) * get(PeriodRole::HalfPPlus), pi + 1)
        + q((pi - 1) * get(PeriodRole::P), pi);
    // Without d no period can take the d role, so a_d = 0 and its terms drop.
    if let Some(d) = alphabet.d {
        let d = d as i64;
        first += q((d - 1) * get(PeriodRole::D) + 1, d);
        bracket += q((d - 1) * get(PeriodRole::D), d);
    }
    let second = Rational64::from_integer(20 * (h - 1)) + Rational64::from_integer(10) * bracket;

    Ok(KeyLemmaCheck {
        ineq1: first >= Rational64::zero(),
        ineq2: second >= Rational64::one(),
        applicable: key_lemma_applicable(p),
        lhs1: first.to_string(),
        lhs2: second.to_string(),
        lhs1_approx: first.to_f64().unwrap_or(f64::NAN),
        lhs2_approx: second.to_f64().unwrap_or(f64::NAN),
    })
}

/// Adds one more copy of the period `m`, which must already occur and be
/// 2 or an odd prime dividing |PSL(2, p)|.
pub fn extend_signature(sig: &Signature, m: u32, p: u32) -> Result<Signature, SignatureError> {
    if !sig.periods().contains(&m) {
        return Err(SignatureError::MissingPeriod(m));
    }
    let order = group_order(p as u64);
    let prime_ok = m == 2 || (m % 2 == 1 && is_prime(m as u64) && order % m as u64 == 0);
    if !prime_ok {
        return Err(SignatureError::ConditionViolated(m));
    }
    let mut periods = sig.periods().to_vec();
    periods.push(m);
    let out = Signature::new(sig.h, periods)?;
    let g = rh_genus(&out, p);
    if !g.is_integer() {
        return Err(SignatureError::NonIntegralGenus(g));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassProduct {
    pub count: u64,
    pub char_sum: Complex64,
}

/// Number of pairs (u, v) with u ∈ Cl(X), v ∈ Cl(X)⁻¹ and uv = g, from the
/// character sum Σ_χ |χ(X)|²·conj(χ(g))/χ(1).
pub fn class_product_count(
    table: &CharacterTable,
    class_x: &ConjClassLabel,
    g: &PSL2Elem,
) -> Result<ClassProduct, SignatureError> {
    let pos = table
        .class_position(&class_x.kind)
        .ok_or_else(|| SignatureError::UnknownClass(class_x.kind.to_string()))?;
    let size = table.classes[pos].size as f64;
    let order = table.group_order() as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    for (i, ch) in table.chars.iter().enumerate() {
        let x = ch.values[pos];
        let vg = table
            .char_value(i, g)
            .map_err(|e| SignatureError::UnknownClass(e.to_string()))?;
        sum += x.norm_sqr() * vg.conj() / ch.degree as f64;
    }
    let raw = size * size / order * sum;
    let rounded = raw.re.round();
    let residue = (raw.re - rounded).abs().max(raw.im.abs());
    if residue > 1e-4 || rounded < 0.0 {
        return Err(SignatureError::NumericInstability(residue));
    }
    Ok(ClassProduct { count: rounded as u64, char_sum: sum })
}

/// A tuple (A₁, B₁, …, A_h, B_h, C₁, …, C_r) in PSL(2, p).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpimorphismWitness {
    pub signature: Signature,
    pub p: u32,
    pub seed: u64,
    pub images: Vec<PSL2Elem>,
}

impl EpimorphismWitness {
    /// (Aᵢ, Bᵢ) pairs, the images of the hyperbolic generators.
    pub fn hyperbolic_images(&self) -> &[PSL2Elem] {
        &self.images[..2 * self.signature.h as usize]
    }

    pub fn elliptic_images(&self) -> &[PSL2Elem] {
        &self.images[2 * self.signature.h as usize..]
    }
}

/// [a, b] = a·b·a⁻¹·b⁻¹
pub fn commutator(a: &PSL2Elem, b: &PSL2Elem) -> PSL2Elem {
    *a * *b * a.inverse() * b.inverse()
}

/// Π[Aᵢ, Bᵢ]·ΠCⱼ for a full image tuple of a genus-h signature.
pub fn long_relation(h: usize, images: &[PSL2Elem], p: u32) -> PSL2Elem {
    let mut acc = PSL2Elem::identity(p);
    for pair in images[..2 * h].chunks(2) {
        acc = acc * commutator(&pair[0], &pair[1]);
    }
    for c in &images[2 * h..] {
        acc = acc * *c;
    }
    acc
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub ok: bool,
    pub reason: String,
}

impl Verdict {
    fn fail(reason: impl Into<String>) -> Self {
        Verdict { ok: false, reason: reason.into() }
    }
}

/// Exact check of a witness: shape, torsion orders, long relation, then
/// generation. The reason names the first failed check.
pub fn verify_epimorphism(w: &EpimorphismWitness, p: u32) -> Verdict {
    if w.p != p || w.images.iter().any(|g| g.p() != p) {
        return Verdict::fail("modulus mismatch");
    }
    if w.images.len() != w.signature.generator_count() {
        return Verdict::fail("shape mismatch");
    }
    let Ok(field) = PrimeField::new(p as u64) else {
        return Verdict::fail("invalid modulus");
    };
    for (j, (c, &m)) in w.elliptic_images().iter().zip(w.signature.periods()).enumerate() {
        let ord = c.element_order_in(&field);
        if ord != m as u64 {
            return Verdict::fail(format!("order mismatch: C{} has order {ord}, expected {m}", j + 1));
        }
    }
    if !long_relation(w.signature.h as usize, &w.images, p).is_identity() {
        return Verdict::fail("product relation fails");
    }
    if !generates_group(p, &w.images) {
        return Verdict::fail("proper subgroup");
    }
    Verdict { ok: true, reason: "ok".to_string() }
}

/// Elements of PSL(2, p) bucketed by order.
pub struct OrderPools {
    pub p: u32,
    pub field: PrimeField,
    pub elements: Vec<PSL2Elem>,
    pub by_order: HashMap<u64, Vec<PSL2Elem>>,
}

impl OrderPools {
    pub fn new(p: u32) -> Result<Self, SignatureError> {
        let field = PrimeField::new(p as u64)?;
        let elements = enumerate_group(p, DEFAULT_BUDGET)?;
        let mut by_order: HashMap<u64, Vec<PSL2Elem>> = HashMap::new();
        for g in &elements {
            by_order.entry(g.element_order_in(&field)).or_default().push(*g);
        }
        Ok(OrderPools { p, field, elements, by_order })
    }
}

/// Seeded search for a surface-kernel epimorphism Γ(σ) → PSL(2, p).
pub fn find_epimorphism(
    sig: &Signature,
    p: u32,
    budget: u64,
    seed: u64,
) -> Result<EpimorphismWitness, EpimorphismError> {
    find_epimorphism_with(sig, p, budget, seed, |_| true)
}

/// As [`find_epimorphism`], additionally requiring `accept(images)`.
pub fn find_epimorphism_with(
    sig: &Signature,
    p: u32,
    budget: u64,
    seed: u64,
    accept: impl Fn(&[PSL2Elem]) -> bool,
) -> Result<EpimorphismWitness, EpimorphismError> {
    check_prime_three_mod_four(p)?;
    let g = rh_genus(sig, p);
    if g.is_negative() {
        return Err(EpimorphismError::NoFuchsianGroup(g));
    }
    let adm = admissible(sig, p)?;
    if !adm.admissible {
        return Err(EpimorphismError::NotAdmissible(adm.reason));
    }
    let pools = OrderPools::new(p)?;
    let empty = Vec::new();
    let elliptic: Vec<&Vec<PSL2Elem>> = sig
        .periods()
        .iter()
        .map(|&m| pools.by_order.get(&(m as u64)).unwrap_or(&empty))
        .collect();
    if let Some((&m, _)) = sig.periods().iter().zip(&elliptic).find(|(_, pool)| pool.is_empty()) {
        return Err(EpimorphismError::NoElementsOfOrder { order: m, p });
    }

    let h = sig.h as usize;
    let r = sig.r();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut images = Vec::with_capacity(sig.generator_count());
    for _ in 0..budget {
        images.clear();
        let mut acc = PSL2Elem::identity(p);
        for _ in 0..h {
            let a = pools.elements[rng.gen_range(0..pools.elements.len())];
            let b = pools.elements[rng.gen_range(0..pools.elements.len())];
            acc = acc * commutator(&a, &b);
            images.push(a);
            images.push(b);
        }
        for pool in elliptic.iter().take(r.saturating_sub(1)) {
            let c = pool[rng.gen_range(0..pool.len())];
            acc = acc * c;
            images.push(c);
        }
        if r >= 1 {
            let last = acc.inverse();
            if last.element_order_in(&pools.field) != sig.periods()[r - 1] as u64 {
                continue;
            }
            images.push(last);
        } else if !acc.is_identity() {
            continue;
        }
        if !generates_group(p, &images) || !accept(&images) {
            continue;
        }
        return Ok(EpimorphismWitness {
            signature: sig.clone(),
            p,
            seed,
            images: images.clone(),
        });
    }
    Err(EpimorphismError::SearchExhausted(budget))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Disagreement {
    pub signature: Signature,
    pub case_rules: bool,
    pub key_lemma: bool,
    pub lhs1: String,
    pub lhs2: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenusRow {
    pub h: u32,
    pub total: u64,
    pub agree: u64,
}

/// Agreement between the case rules and the unified key-lemma inequalities
/// over seeded random signatures.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConsistencyReport {
    pub p: u32,
    pub samples: u64,
    pub seed: u64,
    pub key_lemma_applicable: bool,
    /// Counts indexed [case rule verdict][key-lemma verdict], false = 0.
    pub table: [[u64; 2]; 2],
    pub agreement: u64,
    pub by_genus: Vec<GenusRow>,
    pub examples: Vec<Disagreement>,
}

pub fn consistency_report(p: u32, samples: u64, seed: u64) -> Result<ConsistencyReport, SignatureError> {
    check_prime_three_mod_four(p)?;
    let alphabet = PeriodAlphabet::new(p).values();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut table = [[0u64; 2]; 2];
    let mut genus: BTreeMap<u32, (u64, u64)> = BTreeMap::new();
    let mut examples = Vec::new();
    for _ in 0..samples {
        let h = rng.gen_range(0..=3u32);
        let r = rng.gen_range(0..=5usize);
        let periods = (0..r).map(|_| alphabet[rng.gen_range(0..alphabet.len())]).collect();
        let sig = Signature::new(h, periods)?;
        let case = admissible(&sig, p)?.admissible;
        let key = key_lemma_check(&sig, p)?;
        let kv = key.verdict();
        table[case as usize][kv as usize] += 1;
        let e = genus.entry(h).or_default();
        e.0 += 1;
        if case == kv {
            e.1 += 1;
        } else if examples.len() < 10 {
            examples.push(Disagreement {
                signature: sig,
                case_rules: case,
                key_lemma: kv,
                lhs1: key.lhs1,
                lhs2: key.lhs2,
            });
        }
    }
    Ok(ConsistencyReport {
        p,
        samples,
        seed,
        key_lemma_applicable: key_lemma_applicable(p),
        table,
        agreement: table[0][0] + table[1][1],
        by_genus: genus
            .into_iter()
            .map(|(h, (total, agree))| GenusRow { h, total, agree })
            .collect(),
        examples,
    })
}
