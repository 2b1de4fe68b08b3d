//! Complex character table of PSL(2, p) for p ≡ 3 (mod 4).
//!
//! Characters of F_p* and of the norm-one group C ⊂ F_{p²}* are realised as
//! roots of unity through discrete logarithms to the fixed generators from
//! [`crate::ffield`]. Values are floating point; exactness is replaced by an
//! explicit orthogonality defect.
//!
//! Some tabulated entries admit two readings, for instance the split-class
//! entry of the principal series. The builder records the defect of every
//! combination of readings and keeps the first that satisfies orthogonality.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ffield::{FieldError, PrimeField, QuadExtElement};
use crate::psl2::{all_classes, classify_conjugacy, ClassKind, ConjClassLabel, GroupError, PSL2Elem};

/// Orthogonality tolerance used when selecting entry conventions.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CharTableError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("unsupported congruence: p={0} is not 3 mod 4")]
    UnsupportedCongruence(u32),
    #[error("degenerate table: p={0} < 7")]
    Degenerate(u32),
    #[error("character index {index} out of range (table has {len})")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("no entry convention satisfies orthogonality (best defect {0:e})")]
    NoConsistentConvention(f64),
    #[error("malformed table: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CharacterFamily {
    /// U, degree 1.
    Trivial,
    /// V, degree p.
    Steinberg,
    /// W_α, degree p + 1, α(x) = exp(2πi·k·log x/(p − 1)).
    PrincipalSeries { k: u32 },
    /// χ_φ, degree p − 1, φ(ζ) = exp(2πi·l·log ζ/(p + 1)).
    DiscreteSeries { l: u32 },
    /// χ′_ψ, degree (p − 1)/2.
    HalfDiscretePlus,
    /// χ″_ψ, degree (p − 1)/2.
    HalfDiscreteMinus,
}

impl CharacterFamily {
    pub fn name(&self) -> &'static str {
        match self {
            CharacterFamily::Trivial => "U",
            CharacterFamily::Steinberg => "V",
            CharacterFamily::PrincipalSeries { .. } => "W_alpha",
            CharacterFamily::DiscreteSeries { .. } => "chi_phi",
            CharacterFamily::HalfDiscretePlus => "chi_psi_prime",
            CharacterFamily::HalfDiscreteMinus => "chi_psi_double_prime",
        }
    }

    pub fn index(&self) -> Option<u32> {
        match *self {
            CharacterFamily::PrincipalSeries { k } => Some(k),
            CharacterFamily::DiscreteSeries { l } => Some(l),
            _ => None,
        }
    }

    pub fn degree(&self, p: u32) -> u64 {
        let p = p as u64;
        match self {
            CharacterFamily::Trivial => 1,
            CharacterFamily::Steinberg => p,
            CharacterFamily::PrincipalSeries { .. } => p + 1,
            CharacterFamily::DiscreteSeries { .. } => p - 1,
            CharacterFamily::HalfDiscretePlus | CharacterFamily::HalfDiscreteMinus => (p - 1) / 2,
        }
    }
}

impl fmt::Display for CharacterFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index() {
            Some(i) => write!(f, "{}[{i}]", self.name()),
            None => f.write_str(self.name()),
        }
    }
}

/// Principal-series value on a split class {x, x⁻¹}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SplitEntry {
    /// (α(x) + α(x⁻¹))/2
    HalfSum,
    /// α(x) + α(x⁻¹)
    Sum,
}

/// Half discrete series values on the unipotent classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum UnipotentEntry {
    /// (−1 ± i·p)/2
    PlusMinusP,
    /// (−1 ± i·√p)/2
    PlusMinusSqrtP,
}

/// Values on the class of (0 −1; 1 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrderTwoEntry {
    /// V ↦ 1, χ_φ ↦ −(φ(−1) + φ(−1)^p), χ′, χ″ ↦ −(ψ(−1) + ψ(−1)^p)/2.
    AtMinusOne,
    /// The nonsplit column evaluated at the eigenvalue ζ = √−1 ∈ C.
    AtSqrtMinusOne,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Conventions {
    pub split: SplitEntry,
    pub unipotent: UnipotentEntry,
    pub order_two: OrderTwoEntry,
}

impl Conventions {
    /// All combinations, tabulated readings first.
    pub fn candidates() -> Vec<Conventions> {
        let mut out = Vec::new();
        for split in [SplitEntry::HalfSum, SplitEntry::Sum] {
            for unipotent in [UnipotentEntry::PlusMinusP, UnipotentEntry::PlusMinusSqrtP] {
                for order_two in [OrderTwoEntry::AtMinusOne, OrderTwoEntry::AtSqrtMinusOne] {
                    out.push(Conventions { split, unipotent, order_two });
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConventionTrial {
    pub conventions: Conventions,
    pub defect: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Character {
    pub family: CharacterFamily,
    pub degree: u64,
    pub values: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CharacterTable {
    pub p: u32,
    pub classes: Vec<ConjClassLabel>,
    pub chars: Vec<Character>,
    pub tolerance: f64,
    /// Conventions in force, and the defect of every candidate tried.
    pub conventions: Conventions,
    pub trials: Vec<ConventionTrial>,
    class_index: HashMap<ClassKind, usize>,
}

/// Discrete logarithms in F_p* and C used to evaluate characters.
struct LogTables {
    p: u32,
    base: Vec<u64>,
    circle: HashMap<(u32, u32), u64>,
}

impl LogTables {
    fn new(field: &PrimeField) -> Self {
        let p = field.p();
        let mut base = vec![0u64; p as usize];
        let mut acc = 1u32;
        for k in 0..p as u64 - 1 {
            base[acc as usize] = k;
            acc = field.mul(acc, field.primitive_root());
        }
        let w = field.circle_generator();
        let mut circle = HashMap::new();
        let mut z = field.ext_one();
        for k in 0..p as u64 + 1 {
            circle.insert((z.x, z.y), k);
            z = field.ext_mul(&z, &w).unwrap();
        }
        LogTables { p, base, circle }
    }

    fn base_log(&self, x: u32) -> u64 {
        self.base[x as usize]
    }

    fn circle_log(&self, z: &QuadExtElement) -> u64 {
        self.circle[&(z.x, z.y)]
    }

    /// Exponent of √−1 = w^((p+1)/4) in C.
    fn sqrt_minus_one_log(&self) -> u64 {
        (self.p as u64 + 1) / 4
    }
}

fn root_of_unity(num: u64, den: u64) -> Complex64 {
    let r = (num % den) as f64 / den as f64;
    Complex64::from_polar(1.0, 2.0 * PI * r)
}

fn eval(
    family: CharacterFamily,
    kind: ClassKind,
    p: u32,
    logs: &LogTables,
    conv: Conventions,
) -> Complex64 {
    let pf = p as f64;
    let (pm, pp) = (p as u64 - 1, p as u64 + 1);
    let re = |x: f64| Complex64::new(x, 0.0);
    // Nonsplit-column value for the discrete series at circle exponent m.
    let discrete = |l: u32, m: u64| -(root_of_unity(l as u64 * m, pp) + root_of_unity(pp - (l as u64 * m) % pp, pp));
    let half_discrete = |m: u64| re(if m % 2 == 0 { -1.0 } else { 1.0 });
    let (u, v) = match conv.unipotent {
        UnipotentEntry::PlusMinusP => (Complex64::new(-0.5, pf / 2.0), Complex64::new(-0.5, -pf / 2.0)),
        UnipotentEntry::PlusMinusSqrtP => (
            Complex64::new(-0.5, pf.sqrt() / 2.0),
            Complex64::new(-0.5, -pf.sqrt() / 2.0),
        ),
    };
    let i_log = logs.sqrt_minus_one_log();
    match family {
        CharacterFamily::Trivial => re(1.0),
        CharacterFamily::Steinberg => match kind {
            ClassKind::Identity => re(pf),
            ClassKind::UnipotentOne | ClassKind::UnipotentEps => re(0.0),
            ClassKind::Split(_) => re(1.0),
            ClassKind::Nonsplit(_) => re(-1.0),
            ClassKind::OrderTwo => match conv.order_two {
                OrderTwoEntry::AtMinusOne => re(1.0),
                OrderTwoEntry::AtSqrtMinusOne => re(-1.0),
            },
        },
        CharacterFamily::PrincipalSeries { k } => match kind {
            ClassKind::Identity => re(pf + 1.0),
            ClassKind::UnipotentOne | ClassKind::UnipotentEps => re(1.0),
            ClassKind::Split(x) => {
                let e = k as u64 * logs.base_log(x);
                let s = root_of_unity(e, pm) + root_of_unity(pm - e % pm, pm);
                match conv.split {
                    SplitEntry::HalfSum => s / 2.0,
                    SplitEntry::Sum => s,
                }
            }
            ClassKind::Nonsplit(_) | ClassKind::OrderTwo => re(0.0),
        },
        CharacterFamily::DiscreteSeries { l } => match kind {
            ClassKind::Identity => re(pf - 1.0),
            ClassKind::UnipotentOne | ClassKind::UnipotentEps => re(-1.0),
            ClassKind::Split(_) => re(0.0),
            ClassKind::Nonsplit(z) => discrete(l, logs.circle_log(&z)),
            ClassKind::OrderTwo => match conv.order_two {
                // −1 = w^((p+1)/2)
                OrderTwoEntry::AtMinusOne => discrete(l, pp / 2),
                OrderTwoEntry::AtSqrtMinusOne => discrete(l, i_log),
            },
        },
        CharacterFamily::HalfDiscretePlus | CharacterFamily::HalfDiscreteMinus => {
            let plus = family == CharacterFamily::HalfDiscretePlus;
            match kind {
                ClassKind::Identity => re((pf - 1.0) / 2.0),
                ClassKind::UnipotentOne => if plus { u } else { v },
                ClassKind::UnipotentEps => if plus { v } else { u },
                ClassKind::Split(_) => re(0.0),
                ClassKind::Nonsplit(z) => half_discrete(logs.circle_log(&z)),
                ClassKind::OrderTwo => match conv.order_two {
                    OrderTwoEntry::AtMinusOne => half_discrete(pp / 2),
                    OrderTwoEntry::AtSqrtMinusOne => half_discrete(i_log),
                },
            }
        }
    }
}

fn families(p: u32) -> Vec<CharacterFamily> {
    let mut out = vec![CharacterFamily::Trivial, CharacterFamily::Steinberg];
    // α(−1) = 1 forces k even; α ~ α⁻¹ keeps k < (p − 1)/2.
    out.extend((2..(p - 1) / 2).step_by(2).map(|k| CharacterFamily::PrincipalSeries { k }));
    // φ(−1) = 1 forces l even; φ ~ φ⁻¹ keeps l < (p + 1)/2.
    out.extend((2..(p + 1) / 2).step_by(2).map(|l| CharacterFamily::DiscreteSeries { l }));
    out.push(CharacterFamily::HalfDiscretePlus);
    out.push(CharacterFamily::HalfDiscreteMinus);
    out
}

/// Largest deviation from the row and column orthogonality relations of a
/// table with the given class sizes and character values.
pub fn orthogonality_defect_raw(class_sizes: &[u64], values: &[Vec<Complex64>]) -> f64 {
    let order: u64 = class_sizes.iter().sum();
    let g = order as f64;
    let mut defect: f64 = 0.0;
    for (i, ci) in values.iter().enumerate() {
        for (j, cj) in values.iter().enumerate().skip(i) {
            let s: Complex64 = class_sizes
                .iter()
                .zip(ci.iter().zip(cj))
                .map(|(&n, (a, b))| a * b.conj() * n as f64)
                .sum::<Complex64>()
                / g;
            let target = if i == j { 1.0 } else { 0.0 };
            defect = defect.max((s - target).norm());
        }
    }
    for a in 0..class_sizes.len() {
        for b in a..class_sizes.len() {
            let s: Complex64 = values.iter().map(|row| row[a] * row[b].conj()).sum::<Complex64>()
                * class_sizes[a] as f64
                / g;
            let target = if a == b { 1.0 } else { 0.0 };
            defect = defect.max((s - target).norm());
        }
    }
    defect
}

/// Builds the character table of PSL(2, p), p ≡ 3 (mod 4), p >= 7.
pub fn build_character_table(p: u32) -> Result<CharacterTable, CharTableError> {
    let field = PrimeField::new(p as u64)?;
    if p % 4 != 3 {
        return Err(CharTableError::UnsupportedCongruence(p));
    }
    if p < 7 {
        return Err(CharTableError::Degenerate(p));
    }
    let classes = all_classes(&field)?;
    let sizes: Vec<u64> = classes.iter().map(|c| c.size).collect();
    let logs = LogTables::new(&field);
    let fams = families(p);

    let build = |conv: Conventions| -> Vec<Character> {
        fams.iter()
            .map(|&family| Character {
                family,
                degree: family.degree(p),
                values: classes.iter().map(|c| eval(family, c.kind, p, &logs, conv)).collect(),
            })
            .collect()
    };

    let mut trials = Vec::new();
    let mut chosen = None;
    for conv in Conventions::candidates() {
        let chars = build(conv);
        let values: Vec<_> = chars.iter().map(|c| c.values.clone()).collect();
        let defect = orthogonality_defect_raw(&sizes, &values);
        trials.push(ConventionTrial { conventions: conv, defect });
        if chosen.is_none() && defect < DEFAULT_TOLERANCE {
            chosen = Some((conv, chars));
        }
    }
    let Some((conventions, chars)) = chosen else {
        let best = trials.iter().map(|t| t.defect).fold(f64::INFINITY, f64::min);
        return Err(CharTableError::NoConsistentConvention(best));
    };
    Ok(CharacterTable::assemble(p, classes, chars, DEFAULT_TOLERANCE, conventions, trials))
}

impl CharacterTable {
    fn assemble(
        p: u32,
        classes: Vec<ConjClassLabel>,
        chars: Vec<Character>,
        tolerance: f64,
        conventions: Conventions,
        trials: Vec<ConventionTrial>,
    ) -> Self {
        let class_index = classes.iter().enumerate().map(|(i, c)| (c.kind, i)).collect();
        CharacterTable { p, classes, chars, tolerance, conventions, trials, class_index }
    }

    pub fn group_order(&self) -> u64 {
        self.classes.iter().map(|c| c.size).sum()
    }

    pub fn class_position(&self, kind: &ClassKind) -> Option<usize> {
        self.class_index.get(kind).copied()
    }

    /// Value of character `index` on the class of `g`.
    pub fn char_value(&self, index: usize, g: &PSL2Elem) -> Result<Complex64, CharTableError> {
        let ch = self.chars.get(index).ok_or(CharTableError::IndexOutOfRange {
            index,
            len: self.chars.len(),
        })?;
        let field = PrimeField::new(self.p as u64)?;
        let label = classify_conjugacy(g, &field)?;
        let pos = self
            .class_position(&label.kind)
            .ok_or_else(|| CharTableError::Malformed(format!("class {} missing", label.kind)))?;
        Ok(ch.values[pos])
    }

    pub fn orthogonality_defect(&self) -> f64 {
        let sizes: Vec<u64> = self.classes.iter().map(|c| c.size).collect();
        let values: Vec<_> = self.chars.iter().map(|c| c.values.clone()).collect();
        orthogonality_defect_raw(&sizes, &values)
    }

    pub fn to_json(&self) -> TableJson {
        TableJson {
            p: self.p,
            classes: self
                .classes
                .iter()
                .map(|c| ClassJson {
                    kind: c.kind.name().to_string(),
                    param: match c.kind {
                        ClassKind::Split(x) => serde_json::json!(x),
                        ClassKind::Nonsplit(z) => serde_json::json!([z.x, z.y]),
                        _ => serde_json::Value::Null,
                    },
                    size: c.size,
                })
                .collect(),
            characters: self
                .chars
                .iter()
                .map(|ch| CharacterJson {
                    family: ch.family.name().to_string(),
                    index: ch.family.index(),
                    degree: ch.degree,
                    values: ch.values.iter().map(|z| [z.re, z.im]).collect(),
                })
                .collect(),
            conventions: Some(self.conventions),
            trials: Some(self.trials.clone()),
        }
    }

    pub fn from_json(t: &TableJson) -> Result<Self, CharTableError> {
        let p = t.p;
        let bad = |m: &str| CharTableError::Malformed(m.to_string());
        let classes = t
            .classes
            .iter()
            .map(|c| {
                let kind = match c.kind.as_str() {
                    "identity" => ClassKind::Identity,
                    "unipotent-1" => ClassKind::UnipotentOne,
                    "unipotent-eps" => ClassKind::UnipotentEps,
                    "order-two" => ClassKind::OrderTwo,
                    "split" => ClassKind::Split(
                        c.param.as_u64().ok_or_else(|| bad("split parameter"))? as u32,
                    ),
                    "nonsplit" => {
                        let xy: [u32; 2] = serde_json::from_value(c.param.clone())
                            .map_err(|_| bad("nonsplit parameter"))?;
                        ClassKind::Nonsplit(QuadExtElement { x: xy[0], y: xy[1], p })
                    }
                    other => return Err(bad(&format!("unknown class kind {other}"))),
                };
                Ok(ConjClassLabel { kind, size: c.size })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let chars = t
            .characters
            .iter()
            .map(|c| {
                let family = match (c.family.as_str(), c.index) {
                    ("U", _) => CharacterFamily::Trivial,
                    ("V", _) => CharacterFamily::Steinberg,
                    ("W_alpha", Some(k)) => CharacterFamily::PrincipalSeries { k },
                    ("chi_phi", Some(l)) => CharacterFamily::DiscreteSeries { l },
                    ("chi_psi_prime", _) => CharacterFamily::HalfDiscretePlus,
                    ("chi_psi_double_prime", _) => CharacterFamily::HalfDiscreteMinus,
                    (other, _) => return Err(bad(&format!("unknown family {other}"))),
                };
                if c.values.len() != classes.len() {
                    return Err(bad("row length differs from class count"));
                }
                Ok(Character {
                    family,
                    degree: c.degree,
                    values: c.values.iter().map(|v| Complex64::new(v[0], v[1])).collect(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let conventions = t.conventions.ok_or_else(|| bad("missing conventions"))?;
        let trials = t.trials.clone().unwrap_or_default();
        Ok(Self::assemble(p, classes, chars, DEFAULT_TOLERANCE, conventions, trials))
    }

    /// One row per character: family, index, degree, then `re;im` per class.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("family,index,degree");
        for c in &self.classes {
            out.push(',');
            out.push_str(&c.kind.to_string());
        }
        out.push('\n');
        for ch in &self.chars {
            out.push_str(&format!(
                "{},{},{}",
                ch.family.name(),
                ch.family.index().map(|i| i.to_string()).unwrap_or_default(),
                ch.degree
            ));
            for z in &ch.values {
                out.push_str(&format!(",{:.12};{:.12}", clean(z.re), clean(z.im)));
            }
            out.push('\n');
        }
        out
    }
}

/// Maps −0.0 and sub-tolerance noise to 0 so output is stable.
fn clean(x: f64) -> f64 {
    if x.abs() < 1e-12 {
        0.0
    } else {
        x
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassJson {
    pub kind: String,
    pub param: serde_json::Value,
    pub size: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacterJson {
    pub family: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub index: Option<u32>,
    pub degree: u64,
    pub values: Vec<[f64; 2]>,
}

/// JSON export shape: `{p, classes, characters}` plus the convention record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableJson {
    pub p: u32,
    pub classes: Vec<ClassJson>,
    pub characters: Vec<CharacterJson>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub conventions: Option<Conventions>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub trials: Option<Vec<ConventionTrial>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::psl2::{enumerate_group, group_order, DEFAULT_BUDGET};
    use proptest::prelude::*;

    #[test]
    fn p7_degrees_and_trivial_row() {
        let t = build_character_table(7).unwrap();
        let degrees: Vec<u64> = t.chars.iter().map(|c| c.degree).collect();
        assert_eq!(degrees, vec![1, 7, 8, 6, 3, 3]);
        assert_eq!(degrees.iter().map(|d| d * d).sum::<u64>(), 168);
        for v in &t.chars[0].values {
            assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
        for ch in &t.chars {
            assert!((ch.values[0] - Complex64::new(ch.degree as f64, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn p11_size() {
        let t = build_character_table(11).unwrap();
        assert_eq!(t.chars.len(), 8);
        assert_eq!(t.classes.len(), 8);
    }

    #[test]
    fn tabulated_entries() {
        let t = build_character_table(7).unwrap();
        let u = PSL2Elem::translation(7);
        let v_idx = 1;
        assert!(t.char_value(v_idx, &u).unwrap().norm() < 1e-12);
        let phi = t
            .chars
            .iter()
            .position(|c| matches!(c.family, CharacterFamily::DiscreteSeries { .. }))
            .unwrap();
        assert!((t.char_value(phi, &PSL2Elem::identity(7)).unwrap().re - 6.0).abs() < 1e-12);
        assert!((t.char_value(phi, &u).unwrap().re + 1.0).abs() < 1e-12);
        assert!(matches!(
            t.char_value(99, &u),
            Err(CharTableError::IndexOutOfRange { index: 99, len: 6 })
        ));
    }

    #[test]
    fn printed_readings_fail_and_are_recorded() {
        let t = build_character_table(7).unwrap();
        assert_eq!(
            t.conventions,
            Conventions {
                split: SplitEntry::Sum,
                unipotent: UnipotentEntry::PlusMinusSqrtP,
                order_two: OrderTwoEntry::AtSqrtMinusOne,
            }
        );
        assert_eq!(t.trials.len(), 8);
        let passing: Vec<_> = t.trials.iter().filter(|tr| tr.defect < 1e-9).collect();
        assert_eq!(passing.len(), 1);
    }

    #[test]
    fn errors() {
        assert_eq!(build_character_table(13), Err(CharTableError::UnsupportedCongruence(13)));
        assert_eq!(build_character_table(3), Err(CharTableError::Degenerate(3)));
        assert!(matches!(build_character_table(15), Err(CharTableError::Field(_))));
    }

    #[test]
    fn trivial_group_defect_is_zero() {
        let d = orthogonality_defect_raw(&[1], &[vec![Complex64::new(1.0, 0.0)]]);
        assert_eq!(d, 0.0);
    }

    #[test]
    fn defect_small_for_several_primes() {
        for p in [7u32, 11, 19, 23, 31, 43, 47, 59, 67, 71, 79, 83] {
            let t = build_character_table(p).unwrap();
            assert_eq!(t.chars.len() as u32, (p + 5) / 2);
            assert!(t.orthogonality_defect() < 1e-9, "p={p}");
            let sq: u64 = t.chars.iter().map(|c| c.degree * c.degree).sum();
            assert_eq!(sq, group_order(p as u64));
        }
    }

    #[test]
    fn json_roundtrip() {
        let t = build_character_table(11).unwrap();
        let s = serde_json::to_string(&t.to_json()).unwrap();
        let back: TableJson = serde_json::from_str(&s).unwrap();
        assert_eq!(CharacterTable::from_json(&back).unwrap(), t);
    }

    #[test]
    fn csv_has_one_row_per_character() {
        let t = build_character_table(7).unwrap();
        let csv = t.to_csv();
        assert_eq!(csv.lines().count(), 7);
        assert!(csv.starts_with("family,index,degree,identity,unipotent-1"));
    }

    fn elems(p: u32) -> Vec<PSL2Elem> {
        enumerate_group(p, DEFAULT_BUDGET).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn class_function_and_inverse_conjugation(i in 0usize..6072, j in 0usize..6072) {
            let p = 23;
            let t = build_character_table(p).unwrap();
            let g = elems(p);
            let (x, h) = (g[i], g[j]);
            for k in 0..t.chars.len() {
                let v = t.char_value(k, &x).unwrap();
                prop_assert!((t.char_value(k, &x.conjugate_by(&h)).unwrap() - v).norm() < 1e-9);
                prop_assert!((t.char_value(k, &x.inverse()).unwrap() - v.conj()).norm() < 1e-9);
            }
        }
    }
}
