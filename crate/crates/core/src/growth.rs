//! Word growth of finite groups by Cayley-graph BFS, and of the cocompact
//! polygon groups through their rational growth series.

use std::collections::HashSet;
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::psl2::PSL2Elem;
use crate::signatures::{find_epimorphism_with, Signature, DEFAULT_SEARCH_BUDGET};

/// Largest number of group elements a BFS may visit.
pub const NODE_BUDGET: usize = 10_000_000;

/// Default number of series terms for ratio estimates.
pub const DEFAULT_TERMS: usize = 200;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GrowthError {
    #[error("empty generator list")]
    EmptyGenerators,
    #[error("generators do not lie in one group")]
    MixedGroups,
    #[error("BFS node budget {0} exceeded")]
    NodeBudget(usize),
    #[error("inconsistent nmax: expected {expected}, found {found}")]
    InconsistentNmax { expected: usize, found: usize },
    #[error("empty family")]
    EmptyFamily,
    #[error("pair ({0}, {1}) is not coprime")]
    NotCoprime(u64, u64),
    #[error("invalid pair ({0}, {1}): both entries must be >= 1")]
    InvalidPair(u64, u64),
    #[error("polygon n={n} is not supported for variant {variant} (cone3 needs n >= 1, smooth n >= 2)")]
    InvalidPolygon { n: usize, variant: PolygonVariant },
    #[error("series denominator must have constant term 1")]
    InvalidSeries,
    #[error("unknown polygon variant {0:?} (expected cone3 or smooth)")]
    UnknownVariant(String),
    #[error("window too small for an exponent fit")]
    FitWindow,
}

/// Finite group element usable by the Cayley BFS.
pub trait WordGroup: Clone + Eq + Hash {
    fn op(&self, other: &Self) -> Self;
    fn inv(&self) -> Self;
    fn identity_of(&self) -> Self;
    fn same_group(&self, other: &Self) -> bool;
}

impl WordGroup for PSL2Elem {
    fn op(&self, other: &Self) -> Self {
        self.mul_unchecked(other)
    }
    fn inv(&self) -> Self {
        self.inverse()
    }
    fn identity_of(&self) -> Self {
        PSL2Elem::identity(self.p())
    }
    fn same_group(&self, other: &Self) -> bool {
        self.p() == other.p()
    }
}

/// Residue class in the additive group Z/nZ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CyclicElem {
    pub value: u64,
    pub modulus: u64,
}

impl CyclicElem {
    pub fn new(value: u64, modulus: u64) -> Self {
        assert!(modulus >= 1, "modulus must be positive");
        CyclicElem { value: value % modulus, modulus }
    }
}

impl WordGroup for CyclicElem {
    fn op(&self, other: &Self) -> Self {
        CyclicElem::new(self.value + other.value, self.modulus)
    }
    fn inv(&self) -> Self {
        CyclicElem::new(self.modulus - self.value, self.modulus)
    }
    fn identity_of(&self) -> Self {
        CyclicElem::new(0, self.modulus)
    }
    fn same_group(&self, other: &Self) -> bool {
        self.modulus == other.modulus
    }
}

/// Sphere sizes a_k and ball sizes γ(k) for k = 0..=nmax.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GrowthTable {
    pub spheres: Vec<u64>,
    pub balls: Vec<u64>,
    /// Smallest n with γ(n) equal to the group order, if reached.
    pub saturated_at: Option<usize>,
}

impl GrowthTable {
    fn from_balls(balls: Vec<u64>, saturated_at: Option<usize>) -> Self {
        let spheres = balls
            .iter()
            .enumerate()
            .map(|(k, &b)| if k == 0 { b } else { b - balls[k - 1] })
            .collect();
        GrowthTable { spheres, balls, saturated_at }
    }

    pub fn nmax(&self) -> usize {
        self.balls.len() - 1
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,sphere,ball\n");
        for (k, (s, b)) in self.spheres.iter().zip(&self.balls).enumerate() {
            out.push_str(&format!("{k},{s},{b}\n"));
        }
        out
    }

    /// Radii 1..n over which the table has not yet saturated.
    pub fn unsaturated_window(&self) -> std::ops::RangeInclusive<usize> {
        let end = match self.saturated_at {
            Some(s) => s.saturating_sub(1),
            None => self.nmax(),
        };
        1..=end
    }
}

/// Ball sizes of the Cayley graph of ⟨gens⟩ with respect to gens ∪ gens⁻¹,
/// padded with the group order past saturation.
pub fn cayley_growth<G: WordGroup>(gens: &[G], nmax: usize) -> Result<GrowthTable, GrowthError> {
    let first = gens.first().ok_or(GrowthError::EmptyGenerators)?;
    if gens.iter().any(|g| !g.same_group(first)) {
        return Err(GrowthError::MixedGroups);
    }
    let mut steps: Vec<G> = Vec::with_capacity(2 * gens.len());
    for g in gens {
        for s in [g.clone(), g.inv()] {
            if !steps.contains(&s) {
                steps.push(s);
            }
        }
    }
    let id = first.identity_of();
    let mut seen: HashSet<G> = HashSet::from([id.clone()]);
    let mut frontier = vec![id];
    let mut balls = vec![1u64];
    let mut saturated_at = None;
    while balls.len() <= nmax {
        let mut next = Vec::new();
        for g in &frontier {
            for s in &steps {
                let h = g.op(s);
                if seen.insert(h.clone()) {
                    next.push(h);
                }
            }
        }
        if seen.len() > NODE_BUDGET {
            return Err(GrowthError::NodeBudget(NODE_BUDGET));
        }
        if next.is_empty() {
            saturated_at = Some(balls.len() - 1);
            break;
        }
        balls.push(seen.len() as u64);
        frontier = next;
    }
    if saturated_at.is_none() && balls.len() > nmax {
        // one more expansion tells whether nmax is exactly the diameter
        let grows = frontier
            .iter()
            .any(|g| steps.iter().any(|s| !seen.contains(&g.op(s))));
        if !grows {
            saturated_at = Some(nmax);
        }
    }
    let last = *balls.last().unwrap();
    balls.resize(nmax + 1, last);
    Ok(GrowthTable::from_balls(balls, saturated_at))
}

/// Pointwise maximum of the balls; spheres are recomputed by differencing.
pub fn family_growth(tables: &[GrowthTable], nmax: usize) -> Result<GrowthTable, GrowthError> {
    if tables.is_empty() {
        return Err(GrowthError::EmptyFamily);
    }
    for t in tables {
        if t.nmax() != nmax {
            return Err(GrowthError::InconsistentNmax { expected: nmax, found: t.nmax() });
        }
    }
    let balls: Vec<u64> = (0..=nmax)
        .map(|k| tables.iter().map(|t| t.balls[k]).max().unwrap())
        .collect();
    let saturated_at = tables
        .iter()
        .map(|t| t.saturated_at)
        .collect::<Option<Vec<_>>>()
        .map(|v| v.into_iter().max().unwrap());
    Ok(GrowthTable::from_balls(balls, saturated_at))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CyclicVariant {
    OneGen,
    TwoGen,
}

/// Family of cyclic groups Z_{pq}: either one generator 1, or x = q of
/// order p together with y = p of order q.
pub fn cyclic_family_growth(
    pairs: &[(u64, u64)],
    variant: CyclicVariant,
    nmax: usize,
) -> Result<GrowthTable, GrowthError> {
    let mut tables = Vec::with_capacity(pairs.len());
    for &(p, q) in pairs {
        if p == 0 || q == 0 {
            return Err(GrowthError::InvalidPair(p, q));
        }
        if p.gcd(&q) != 1 {
            return Err(GrowthError::NotCoprime(p, q));
        }
        let n = p * q;
        let gens = match variant {
            CyclicVariant::OneGen => vec![CyclicElem::new(1, n)],
            CyclicVariant::TwoGen => vec![CyclicElem::new(q, n), CyclicElem::new(p, n)],
        };
        tables.push(cayley_growth(&gens, nmax)?);
    }
    family_growth(&tables, nmax)
}

/// Least-squares slope of ln γ(n) against ln n over the given radii.
pub fn fit_exponent(table: &GrowthTable, window: std::ops::RangeInclusive<usize>) -> Result<f64, GrowthError> {
    let pts: Vec<(f64, f64)> = window
        .filter(|&n| n >= 1 && n <= table.nmax())
        .map(|n| ((n as f64).ln(), (table.balls[n] as f64).ln()))
        .collect();
    if pts.len() < 2 {
        return Err(GrowthError::FitWindow);
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PolygonVariant {
    Cone3,
    Smooth,
}

impl fmt::Display for PolygonVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PolygonVariant::Cone3 => "cone3",
            PolygonVariant::Smooth => "smooth",
        })
    }
}

impl FromStr for PolygonVariant {
    type Err = GrowthError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cone3" => Ok(PolygonVariant::Cone3),
            "smooth" => Ok(PolygonVariant::Smooth),
            _ => Err(GrowthError::UnknownVariant(s.to_string())),
        }
    }
}

/// numerator / denominator as integer polynomials in z.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RationalSeries {
    pub numerator: Vec<i64>,
    pub denominator: Vec<i64>,
}

impl RationalSeries {
    pub fn new(numerator: Vec<i64>, denominator: Vec<i64>) -> Result<Self, GrowthError> {
        if denominator.first() != Some(&1) {
            return Err(GrowthError::InvalidSeries);
        }
        Ok(RationalSeries { numerator, denominator })
    }
}

/// Growth series of the 4n-gon groups: (1 + 2z + … + 2z^{m−1} + z^m) over
/// (1 + (2−4n)z + … + (2−4n)z^{m−1} + z^m), with m = 6n for the cone-3
/// polygon and m = 2n for the smooth one.
pub fn polygon_series(n: usize, variant: PolygonVariant) -> Result<RationalSeries, GrowthError> {
    let m = match variant {
        PolygonVariant::Cone3 if n >= 1 => 6 * n,
        PolygonVariant::Smooth if n >= 2 => 2 * n,
        _ => return Err(GrowthError::InvalidPolygon { n, variant }),
    };
    let band = |mid: i64| {
        let mut v = vec![mid; m + 1];
        v[0] = 1;
        v[m] = 1;
        v
    };
    RationalSeries::new(band(2), band(2 - 4 * n as i64))
}

/// a₀..a_N of the power-series expansion.
pub fn series_coeffs(s: &RationalSeries, n: usize) -> Vec<BigInt> {
    let mut a: Vec<BigInt> = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let mut v = BigInt::from(*s.numerator.get(k).unwrap_or(&0));
        for (j, &d) in s.denominator.iter().enumerate().skip(1).take(k) {
            v -= BigInt::from(d) * &a[k - j];
        }
        a.push(v);
    }
    a
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthRate {
    /// a_N / a_{N−1}
    pub lambda: f64,
    /// Largest real root of the reversed denominator, by bisection.
    pub dominant_root_check: f64,
    pub relative_gap: f64,
    pub exponential: bool,
}

fn ratio(num: &BigInt, den: &BigInt) -> f64 {
    if den.is_zero() {
        return f64::NAN;
    }
    let scale = BigInt::from(10u32).pow(30);
    let q = (num * &scale) / den;
    q.to_f64().unwrap_or(f64::NAN) / 1e30
}

fn horner(coeffs: &[i64], x: f64) -> f64 {
    coeffs.iter().fold(0.0, |acc, &c| acc * x + c as f64)
}

/// Largest real root of x^m·D(1/x) on (0, 1 + max|d_j|], or None.
pub fn dominant_root(denominator: &[i64]) -> Option<f64> {
    // reversed denominator in descending powers of x is the coefficient list itself
    let coeffs = denominator;
    let bound = 1.0 + coeffs.iter().skip(1).map(|c| c.abs() as f64).fold(0.0, f64::max);
    let steps = 4096;
    let h = bound / steps as f64;
    let mut hi = bound;
    let mut f_hi = horner(coeffs, hi);
    for i in (0..steps).rev() {
        let lo = i as f64 * h;
        let f_lo = horner(coeffs, lo);
        if f_lo == 0.0 {
            return Some(lo);
        }
        if f_lo.signum() != f_hi.signum() {
            let (mut a, mut b, mut fa) = (lo, hi, f_lo);
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                let fm = horner(coeffs, mid);
                if fm == 0.0 {
                    return Some(mid);
                }
                if fm.signum() == fa.signum() {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            return Some(0.5 * (a + b));
        }
        hi = lo;
        f_hi = f_lo;
    }
    None
}

/// Ratio estimate of the exponential growth rate, cross-checked against the
/// dominant root of the denominator.
pub fn growth_rate(s: &RationalSeries, n: usize) -> GrowthRate {
    let n = n.max(2);
    let a = series_coeffs(s, n);
    let lambda = ratio(&a[n], &a[n - 1]);
    let root = dominant_root(&s.denominator).unwrap_or(f64::NAN);
    GrowthRate {
        lambda,
        dominant_root_check: root,
        relative_gap: ((lambda - root) / root).abs(),
        exponential: lambda > 1.0,
    }
}

/// Cumulative sums of series coefficients, γ(k) = a₀ + … + a_k.
pub fn series_balls(s: &RationalSeries, n: usize) -> Vec<BigInt> {
    let mut acc = BigInt::zero();
    series_coeffs(s, n)
        .into_iter()
        .map(|a| {
            acc += a;
            acc.clone()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComparisonRow {
    pub k: usize,
    pub gamma_p: u64,
    pub gamma_gamma: String,
    pub equal: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub p: u32,
    pub signature: Signature,
    pub status: String,
    pub rows: Vec<ComparisonRow>,
    pub inequality_holds: bool,
    /// Largest k with γ_p(j) = γ_Γ(j) for every j ≤ k.
    pub equality_depth: Option<usize>,
    pub seed: u64,
    pub generators: Vec<PSL2Elem>,
}

/// BFS growth of PSL(2, p) with respect to the hyperbolic images {A, B} of a
/// witness for (1; 3), against the cone-3 polygon series with n = 1.
pub fn compare_quotient_vs_fuchsian(p: u32, nmax: usize, seed: u64) -> Result<ComparisonReport, GrowthError> {
    let sig = Signature::new(1, vec![3]).expect("valid signature");
    let distinct_generators = |imgs: &[PSL2Elem]| {
        let (a, b) = (imgs[0], imgs[1]);
        let order_ok = |g: &PSL2Elem| !g.is_identity() && !g.mul_unchecked(g).is_identity();
        order_ok(&a) && order_ok(&b) && a != b && a != b.inverse()
    };
    let witness = match find_epimorphism_with(&sig, p, DEFAULT_SEARCH_BUDGET, seed, distinct_generators) {
        Ok(w) => w,
        Err(e) => {
            return Ok(ComparisonReport {
                p,
                signature: sig,
                status: format!("inconclusive: {e}"),
                rows: Vec::new(),
                inequality_holds: false,
                equality_depth: None,
                seed,
                generators: Vec::new(),
            })
        }
    };
    let gens = witness.hyperbolic_images().to_vec();
    let quotient = cayley_growth(&gens, nmax)?;
    let series = polygon_series(1, PolygonVariant::Cone3)?;
    let fuchsian = series_balls(&series, nmax);
    let rows: Vec<ComparisonRow> = (0..=nmax)
        .map(|k| ComparisonRow {
            k,
            gamma_p: quotient.balls[k],
            gamma_gamma: fuchsian[k].to_string(),
            equal: BigInt::from(quotient.balls[k]) == fuchsian[k],
        })
        .collect();
    let inequality_holds = (0..=nmax).all(|k| BigInt::from(quotient.balls[k]) <= fuchsian[k]);
    let equality_depth = rows.iter().take_while(|r| r.equal).last().map(|r| r.k);
    Ok(ComparisonReport {
        p,
        signature: sig,
        status: "ok".to_string(),
        rows,
        inequality_holds,
        equality_depth,
        seed,
        generators: gens,
    })
}

/// True when every coefficient is a nonnegative integer.
pub fn all_nonnegative(coeffs: &[BigInt]) -> bool {
    coeffs.iter().all(|c| !c.is_negative())
}

/// a_k / a_{k-1} for k = 1..len, for reporting convergence.
pub fn ratios(coeffs: &[BigInt]) -> Vec<f64> {
    coeffs.windows(2).map(|w| ratio(&w[1], &w[0])).collect()
}

/// Checks the degree-m palindrome property of a coefficient list.
pub fn is_palindromic(c: &[i64]) -> bool {
    c.iter().eq(c.iter().rev())
}
