//! Acceptance criteria. Each criterion runs in isolation and prints one
//! `PASS` or `FAIL` line; the process exits nonzero if any criterion fails.

use std::collections::{HashMap, HashSet};
use std::panic;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::Rational64;

use psl2growth::chartab::build_character_table;
use psl2growth::ffield::PrimeField;
use psl2growth::growth::{
    compare_quotient_vs_fuchsian, cyclic_family_growth, fit_exponent, growth_rate, polygon_series,
    series_coeffs, CyclicVariant, GrowthError, PolygonVariant, DEFAULT_TERMS,
};
use psl2growth::psl2::{
    all_classes, classify_conjugacy, closure, enumerate_group, group_order, PSL2Elem, DEFAULT_BUDGET,
};
use psl2growth::signatures::{
    admissible, consistency_report, extend_signature, find_epimorphism, rh_genus, verify_epimorphism,
    EpimorphismWitness, PeriodAlphabet, Signature,
};

const PRIMES: [u32; 4] = [7, 11, 19, 23];
const ORDER_TIME_LIMIT: Duration = Duration::from_secs(5);
const CLASS_PRODUCT_TIME_LIMIT: Duration = Duration::from_secs(60);
const ORTHOGONALITY_TOLERANCE: f64 = 1e-9;
const RATE_RELATIVE_TOLERANCE: f64 = 1e-6;
const EXPONENT_TOLERANCE: f64 = 0.2;
const SEARCH_SAMPLES: u64 = 1_000_000;
const SEARCH_SEED: u64 = 2024;
const COMPARE_NMAX: usize = 12;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn sig(s: &str) -> Signature {
    s.parse().expect("valid signature literal")
}

fn order_formula() -> Outcome {
    let start = Instant::now();
    let gens = [PSL2Elem::involution(7), PSL2Elem::translation(7)];
    let ball = closure(7, &gens, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    check(ball.len() == 168, format!("closure of S, T at p=7 has {} elements", ball.len()))?;
    let mut sizes = Vec::new();
    for p in PRIMES {
        let n = enumerate_group(p, DEFAULT_BUDGET).map_err(|e| e.to_string())?.len() as u64;
        let formula = p as u64 * (p as u64 * p as u64 - 1) / 2;
        check(n == formula, format!("p={p}: enumerated {n}, formula {formula}"))?;
        sizes.push(format!("{p}:{n}"));
    }
    let elapsed = start.elapsed();
    check(elapsed < ORDER_TIME_LIMIT, format!("took {elapsed:?}"))?;
    Ok(format!("closure 168; sizes {}; {elapsed:.2?}", sizes.join(" ")))
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct Sl2([u32; 4], u32);

impl Sl2 {
    fn mul(&self, o: &Sl2) -> Sl2 {
        let q = self.1 as u64;
        let [a, b, c, d] = self.0.map(|x| x as u64);
        let [e, f, g, h] = o.0.map(|x| x as u64);
        Sl2(
            [
                ((a * e + b * g) % q) as u32,
                ((a * f + b * h) % q) as u32,
                ((c * e + d * g) % q) as u32,
                ((c * f + d * h) % q) as u32,
            ],
            self.1,
        )
    }

    fn inv(&self) -> Sl2 {
        let q = self.1;
        let [a, b, c, d] = self.0;
        Sl2([d, (q - b) % q, (q - c) % q, a], q)
    }
}

fn orbit_count<T: Copy + Eq + std::hash::Hash>(elems: &[T], act: impl Fn(&T) -> Vec<T>) -> usize {
    let mut seen: HashSet<T> = HashSet::new();
    let mut orbits = 0;
    for &x in elems {
        if !seen.insert(x) {
            continue;
        }
        orbits += 1;
        let mut stack = vec![x];
        while let Some(y) = stack.pop() {
            for z in act(&y) {
                if seen.insert(z) {
                    stack.push(z);
                }
            }
        }
    }
    orbits
}

fn sl2_class_count(q: u32) -> usize {
    let mut elems = Vec::new();
    for a in 0..q {
        for b in 0..q {
            for c in 0..q {
                for d in 0..q {
                    if (a as u64 * d as u64 + q as u64 * q as u64 - b as u64 * c as u64) % q as u64 == 1 {
                        elems.push(Sl2([a, b, c, d], q));
                    }
                }
            }
        }
    }
    assert_eq!(elems.len() as u64, q as u64 * (q as u64 * q as u64 - 1));
    let gens = [Sl2([0, q - 1, 1, 0], q), Sl2([1, 1, 0, 1], q)];
    orbit_count(&elems, |x| gens.iter().map(|g| g.mul(x).mul(&g.inv())).collect())
}

fn psl2_class_count(p: u32) -> Result<usize, String> {
    let elems = enumerate_group(p, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    let gens = [PSL2Elem::involution(p), PSL2Elem::translation(p)];
    Ok(orbit_count(&elems, |x| gens.iter().map(|g| x.conjugate_by(g)).collect()))
}

fn conjugacy_classes() -> Outcome {
    let mut notes = Vec::new();
    for q in [7u32, 11] {
        let n = sl2_class_count(q);
        check(n == q as usize + 4, format!("SL2({q}) has {n} classes, expected {}", q + 4))?;
        notes.push(format!("SL2({q}):{n}"));
    }
    for p in PRIMES {
        let n = psl2_class_count(p)?;
        check(n == (p as usize + 5) / 2, format!("PSL2({p}) has {n} classes"))?;
        let field = PrimeField::new(p as u64).map_err(|e| e.to_string())?;
        let labels = all_classes(&field).map_err(|e| e.to_string())?;
        check(labels.len() == n, format!("p={p}: {} labelled classes vs {n} orbits", labels.len()))?;
        notes.push(format!("PSL2({p}):{n}"));
    }
    Ok(notes.join(" "))
}

fn character_table() -> Outcome {
    let mut notes = Vec::new();
    for p in PRIMES {
        let t = build_character_table(p).map_err(|e| e.to_string())?;
        let k = (p as usize + 5) / 2;
        check(t.chars.len() == k, format!("p={p}: {} characters, expected {k}", t.chars.len()))?;
        let sq: u64 = t.chars.iter().map(|c| c.degree * c.degree).sum();
        check(sq == group_order(p as u64), format!("p={p}: sum of squared degrees {sq}"))?;
        let defect = t.orthogonality_defect();
        check(defect < ORTHOGONALITY_TOLERANCE, format!("p={p}: defect {defect:e}"))?;
        notes.push(format!("p={p} defect {defect:.1e}"));
    }
    Ok(notes.join("; "))
}

fn class_product_oracle() -> Outcome {
    use psl2growth::signatures::class_product_count;
    let start = Instant::now();
    let p = 7;
    let field = PrimeField::new(7).map_err(|e| e.to_string())?;
    let table = build_character_table(p).map_err(|e| e.to_string())?;
    let elems = enumerate_group(p, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    let classes = all_classes(&field).map_err(|e| e.to_string())?;
    let mut compared = 0;
    for class in &classes {
        let members: Vec<PSL2Elem> = elems
            .iter()
            .filter(|g| classify_conjugacy(g, &field).map(|l| l.kind == class.kind).unwrap_or(false))
            .copied()
            .collect();
        check(members.len() as u64 == class.size, format!("class {} size mismatch", class.kind))?;
        let mut products: HashMap<PSL2Elem, u64> = HashMap::new();
        for u in &members {
            for v in &members {
                *products.entry(*u * v.inverse()).or_insert(0) += 1;
            }
        }
        for g in &elems {
            let formula = class_product_count(&table, class, g).map_err(|e| e.to_string())?.count;
            let brute = *products.get(g).unwrap_or(&0);
            check(formula == brute, format!("class {}, g={g}: formula {formula}, brute {brute}", class.kind))?;
            compared += 1;
        }
    }
    let elapsed = start.elapsed();
    check(elapsed < CLASS_PRODUCT_TIME_LIMIT, format!("took {elapsed:?}"))?;
    Ok(format!("{compared} (class, g) pairs agree exactly; {elapsed:.2?}"))
}

fn signatures() -> Outcome {
    let s = sig("0:2,3,7");
    check(admissible(&s, 7).map_err(|e| e.to_string())?.admissible, "(0;2,3,7) not admissible")?;
    check(rh_genus(&s, 7) == Rational64::from_integer(3), format!("rh_genus {}", rh_genus(&s, 7)))?;
    let alphabet = PeriodAlphabet::new(23).values();
    for &m in &alphabet {
        let a = admissible(&Signature::new(1, vec![m]).unwrap(), 23).map_err(|e| e.to_string())?;
        check(a.admissible, format!("(1;{m}) not admissible at p=23: {}", a.reason))?;
    }
    for h in 2..6 {
        let a = admissible(&Signature::new(h, vec![]).unwrap(), 23).map_err(|e| e.to_string())?;
        check(a.admissible, format!("({h};-) not admissible"))?;
    }
    for h in 0..2 {
        let a = admissible(&Signature::new(h, vec![]).unwrap(), 23).map_err(|e| e.to_string())?;
        check(!a.admissible, format!("({h};-) admissible"))?;
    }
    let ext = extend_signature(&sig("1:3"), 3, 7).map_err(|e| e.to_string())?;
    check(ext == sig("1:3,3"), format!("extension gave {ext}"))?;
    let g = rh_genus(&ext, 7);
    check(g.is_integer(), format!("extended genus {g}"))?;
    Ok(format!("rh(0;2,3,7)=3; (1;m) ok for m in {alphabet:?}; (1;3,3) genus {g}"))
}

fn epimorphism_search() -> Outcome {
    let mut notes = Vec::new();
    let mut failures = Vec::new();
    let mut witness = None;
    for s in ["0:2,3,7", "1:2"] {
        match find_epimorphism(&sig(s), 7, SEARCH_SAMPLES, SEARCH_SEED) {
            Ok(w) => {
                let v = verify_epimorphism(&w, 7);
                if v.ok {
                    notes.push(format!("({s}) verified"));
                } else {
                    failures.push(format!("({s}) witness rejected: {}", v.reason));
                }
                if s == "0:2,3,7" {
                    witness = Some(w);
                }
            }
            Err(e) => failures.push(format!("({s}) {e}")),
        }
    }
    let w = witness.ok_or("no (0;2,3,7) witness to mutate")?;

    let mut order = w.clone();
    order.images[0] = PSL2Elem::identity(7);
    let r = verify_epimorphism(&order, 7);
    check(!r.ok && r.reason.starts_with("order mismatch"), format!("order mutation: {}", r.reason))?;

    let mut product = w.clone();
    product.images[0] = w.images[0].conjugate_by(&PSL2Elem::translation(7));
    let r = verify_epimorphism(&product, 7);
    check(!r.ok && r.reason == "product relation fails", format!("product mutation: {}", r.reason))?;

    let t = PSL2Elem::translation(7);
    let cyclic = EpimorphismWitness { signature: sig("0:7,7,7"), p: 7, seed: 0, images: vec![t, t, t.pow(5)] };
    let r = verify_epimorphism(&cyclic, 7);
    check(!r.ok && r.reason == "proper subgroup", format!("generation mutation: {}", r.reason))?;
    notes.push("order, product and generation mutations rejected".into());

    if failures.is_empty() {
        Ok(notes.join("; "))
    } else {
        Err(format!("{}; {}", failures.join("; "), notes.join("; ")))
    }
}

fn growth_series() -> Outcome {
    let mut notes = Vec::new();
    check(
        matches!(polygon_series(1, PolygonVariant::Smooth), Err(GrowthError::InvalidPolygon { .. })),
        "smooth n=1 accepted",
    )?;
    notes.push("smooth n=1 rejected as non-hyperbolic".to_string());
    for variant in [PolygonVariant::Cone3, PolygonVariant::Smooth] {
        for n in 1..=3usize {
            if variant == PolygonVariant::Smooth && n == 1 {
                continue;
            }
            let s = polygon_series(n, variant).map_err(|e| e.to_string())?;
            let a = series_coeffs(&s, 2);
            check(a[0] == BigInt::from(1), format!("{variant} n={n}: a0={}", a[0]))?;
            check(a[1] == BigInt::from(4 * n), format!("{variant} n={n}: a1={}", a[1]))?;
            if variant == PolygonVariant::Smooth && n == 2 {
                check(a[2] == BigInt::from(56), format!("smooth n=2: a2={}", a[2]))?;
            }
            let r = growth_rate(&s, DEFAULT_TERMS);
            check(
                r.relative_gap < RATE_RELATIVE_TOLERANCE,
                format!("{variant} n={n}: ratio {} vs root {}", r.lambda, r.dominant_root_check),
            )?;
            check(r.lambda > 1.0, format!("{variant} n={n}: lambda {}", r.lambda))?;
            if n >= 2 {
                let (lo, hi) = ((4 * n - 3) as f64, (4 * n) as f64);
                check(r.lambda >= lo && r.lambda <= hi, format!("{variant} n={n}: lambda {}", r.lambda))?;
            }
            notes.push(format!("{variant} n={n} lambda {:.6}", r.lambda));
        }
    }
    Ok(notes.join("; "))
}

fn quotient_comparison() -> Outcome {
    let mut notes = Vec::new();
    for p in PRIMES {
        let r = compare_quotient_vs_fuchsian(p, COMPARE_NMAX, SEARCH_SEED).map_err(|e| e.to_string())?;
        check(r.status == "ok", format!("p={p}: {}", r.status))?;
        check(r.inequality_holds, format!("p={p}: quotient ball exceeds Fuchsian ball"))?;
        check(r.rows[0].equal && r.rows[1].equal, format!("p={p}: inequality strict at k<=1"))?;
        let json = serde_json::to_string(&r).map_err(|e| e.to_string())?;
        println!("    report p={p}: {json}");
        notes.push(format!("p={p} equal through k={}", r.equality_depth.unwrap_or(0)));
    }
    Ok(notes.join("; "))
}

fn cyclic_family_contrast() -> Outcome {
    let pairs = [(2, 3), (4, 5), (6, 7)];
    let nmax = 60;
    let one = cyclic_family_growth(&pairs, CyclicVariant::OneGen, nmax).map_err(|e| e.to_string())?;
    let two = cyclic_family_growth(&pairs, CyclicVariant::TwoGen, nmax).map_err(|e| e.to_string())?;
    let (w1, w2) = (one.unsaturated_window(), two.unsaturated_window());
    let e1 = fit_exponent(&one, w1.clone()).map_err(|e| e.to_string())?;
    let e2 = fit_exponent(&two, w2.clone()).map_err(|e| e.to_string())?;
    let msg = format!(
        "one-gen exponent {e1:.3} over n in {w1:?}; two-gen exponent {e2:.3} over n in {w2:?} (balls {:?})",
        &two.balls[..=*w2.end() + 1]
    );
    check((e1 - 1.0).abs() <= EXPONENT_TOLERANCE && (e2 - 2.0).abs() <= EXPONENT_TOLERANCE, msg.clone())?;
    Ok(msg)
}

fn consistency() -> Outcome {
    let r = consistency_report(23, 1000, SEARCH_SEED).map_err(|e| e.to_string())?;
    let total: u64 = r.table.iter().flatten().sum();
    check(total == 1000, format!("table sums to {total}"))?;
    Ok(format!(
        "agreement {}/1000; [case/key] ff={} ft={} tf={} tt={}",
        r.agreement, r.table[0][0], r.table[0][1], r.table[1][0], r.table[1][1]
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("order formula", order_formula),
        ("conjugacy classes", conjugacy_classes),
        ("character table", character_table),
        ("class-product oracle", class_product_oracle),
        ("signatures", signatures),
        ("epimorphism search", epimorphism_search),
        ("growth series", growth_series),
        ("quotient comparison", quotient_comparison),
        ("cyclic family contrast", cyclic_family_contrast),
        ("key-lemma consistency", consistency),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(run).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
