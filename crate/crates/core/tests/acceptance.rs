//! Acceptance criteria, one line of output each. Runs without the libtest
//! harness so the PASS/FAIL lines are always shown; the process fails if any
//! criterion fails.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use minext::catalog::{all_entries, catalog_get, CatalogEntry};
use minext::center_components::ring_characters;
use minext::cli;
use minext::cyclotomic::CycNum;
use minext::io::Datum;
use minext::klein::{eta_at, kappa_lagrangian};
use minext::metric_groups::{
    enumerate_pointed_extensions, isometry_rel_point, random_slightly_degenerate, ExtensionOptions, MetricGroup,
};
use minext::premodular::{cyc_matmul, DegeneracyKind, PremodularData};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::SeedableRng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn within(start: Instant, limit: Duration) -> Outcome {
    let t = start.elapsed();
    if t < limit {
        Ok(format!("{:.3}s < {:.0?}", t.as_secs_f64(), limit))
    } else {
        Err(format!("took {:.3}s, limit {:?}", t.as_secs_f64(), limit))
    }
}

fn premodular(e: &CatalogEntry) -> PremodularData {
    e.payload.to_premodular()
}

fn half(n: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(2))
}

/// Self-dual and e-twisted counts read directly off the fusion table.
fn brute_counts(d: &PremodularData, e: usize) -> (usize, usize) {
    let ring = d.ring();
    let r = ring.rank();
    let unit = ring.unit();
    let star = |a: usize| (0..r).find(|&b| ring.mult(a, b, unit) == 1).expect("dual exists");
    let self_dual = (0..r).filter(|&a| star(a) == a).count();
    let twisted = (0..r)
        .filter(|&a| (0..r).all(|c| ring.mult(e, a, c) == u32::from(c == star(a))))
        .count();
    (self_dual, twisted)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let out = cli::run(["minext", "analyze", "catalog:svec", "--format", "json"]);
    ensure!(out.code == 0, "exit code {} ({})", out.code, out.stderr);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).map_err(|e| e.to_string())?;
    ensure!(v["classification"] == "slightly_degenerate", "classification {}", v["classification"]);
    ensure!(v["components"]["component_count"] == 2, "component_count {}", v["components"]["component_count"]);
    ensure!(v["kappa"]["n_self_dual"] == 2, "n_self_dual {}", v["kappa"]["n_self_dual"]);
    ensure!(v["kappa"]["kappa_plus"] == "1/1", "kappa_plus {}", v["kappa"]["kappa_plus"]);
    ensure!(v["kappa"]["kappa_minus"] == "1/1", "kappa_minus {}", v["kappa"]["kappa_minus"]);
    ensure!(v["verdict"] == "extension_exists_S", "verdict {}", v["verdict"]);
    within(start, Duration::from_secs(1))
}

fn check_kappa(name: &str, d: &PremodularData) -> Result<(), String> {
    let e = d
        .classify_degeneracy()
        .fermion
        .ok_or_else(|| format!("{name}: not slightly degenerate"))?;
    let k = kappa_lagrangian(d).map_err(|err| format!("{name}: {err}"))?;
    let (n_sd, n_tw) = brute_counts(d, e);
    ensure!((k.n_self_dual, k.n_e_twisted) == (n_sd, n_tw), "{name}: counts differ from the table");
    let plus = half(n_sd as i64 + n_tw as i64);
    let minus = half(n_sd as i64 - n_tw as i64);
    ensure!(k.matrix_kappa_plus == plus, "{name}: matrix kappa+ {}", k.matrix_kappa_plus);
    ensure!(k.matrix_kappa_minus == minus, "{name}: matrix kappa- {}", k.matrix_kappa_minus);
    ensure!(n_tw == 0, "{name}: {n_tw} e-twisted self-dual simples");
    Ok(())
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut catalog_count = 0;
    for e in all_entries() {
        let d = premodular(&e);
        if d.classify_degeneracy().kind == DegeneracyKind::SlightlyDegenerate {
            check_kappa(&e.name, &d)?;
            catalog_count += 1;
        }
    }
    ensure!(catalog_count >= 1, "no slightly degenerate catalog entries");
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(20_240_601);
    let mut orders = BTreeSet::new();
    for i in 0..100 {
        let g = random_slightly_degenerate(&mut rng, 64);
        ensure!(g.size() <= 64, "random group {i} has order {}", g.size());
        orders.insert(g.size());
        check_kappa(&format!("random #{i} {:?}", g.orders()), &g.to_premodular())?;
    }
    let t = within(start, Duration::from_secs(30))?;
    Ok(format!("{catalog_count} catalog + 100 random (orders {orders:?}); {t}"))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let entries = all_entries();
    for e in &entries {
        let d = premodular(e);
        let transparent = d.transparent_labels();
        let a = ring_characters(&d, 0).map_err(|err| format!("{}: {err}", e.name))?;
        ensure!(
            a.count == transparent.len() && a.characters.len() == transparent.len(),
            "{}: {} transparent, {} characters",
            e.name,
            transparent.len(),
            a.characters.len()
        );
        let n = minext::component_count(&d).map_err(|err| format!("{}: {err}", e.name))?;
        ensure!(n == transparent.len(), "{}: component_count {n}", e.name);
        let fp = d.ring().restrict(&transparent).and_then(|r| r.fpdim()).map_err(|x| x.to_string())?;
        let dim = &a.characters[a.dim_index];
        ensure!(
            dim.iter().zip(&fp.per_label).all(|(z, f)| (z.re - f).abs() < 1e-8 && z.im.abs() < 1e-8),
            "{}: dim character {dim:?} vs FPdim {:?}",
            e.name,
            fp.per_label
        );
        if a.exact {
            // Group characters take root-of-unity values: |χ(a)| = 1 and χ(1) = 1 exactly.
            for ch in &a.characters {
                ensure!(ch.iter().all(|z| (z.norm() - 1.0).abs() < 1e-12), "{}: not unimodular", e.name);
            }
        }
    }
    let t = within(start, Duration::from_secs(10))?;
    Ok(format!("{} entries; {t}", entries.len()))
}

/// Addition table of Z4 (0) or Z2 x Z2 (1) on indices 0..4; for Z2 x Z2 the
/// index 2·c1 + c2 matches the library's mixed-radix order.
fn add_table(kind: usize) -> [[usize; 4]; 4] {
    let mut t = [[0; 4]; 4];
    for (x, row) in t.iter_mut().enumerate() {
        for (y, v) in row.iter_mut().enumerate() {
            *v = if kind == 0 { (x + y) % 4 } else { x ^ y };
        }
    }
    t
}

/// One class found by the oracle: group kind, q in eighths, fermion index.
#[derive(Clone, Debug)]
struct OracleClass {
    kind: usize,
    q: [u64; 4],
    e: usize,
}

fn oracle_isomorphic(a: &OracleClass, b: &OracleClass) -> bool {
    if a.kind != b.kind {
        return false;
    }
    let add = add_table(a.kind);
    let mut perm = [0usize, 1, 2, 3];
    // Heap's algorithm over the 24 bijections.
    let check = |p: &[usize; 4]| {
        (0..4).all(|x| (0..4).all(|y| p[add[x][y]] == add[p[x]][p[y]]))
            && (0..4).all(|x| b.q[p[x]] == a.q[x])
            && p[a.e] == b.e
    };
    let mut c = [0usize; 4];
    if check(&perm) {
        return true;
    }
    let mut i = 0;
    while i < 4 {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            if check(&perm) {
                return true;
            }
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    false
}

/// Exhaustive search: every table q: A' → (1/8)Z/Z on both groups of order 4
/// (exponent at most 4, so every quadratic form takes values in (1/8)Z), with
/// a point e of order 2 and q(e) = 1/2, nondegenerate, deduplicated over all
/// bijections.
fn oracle_classes() -> Vec<OracleClass> {
    let mut classes: Vec<OracleClass> = Vec::new();
    for kind in 0..2 {
        let add = add_table(kind);
        let mul = |n: usize, x: usize| (0..n).fold(0, |acc, _| add[acc][x]);
        for code in 0..8u64.pow(4) {
            let q = [code % 8, (code / 8) % 8, (code / 64) % 8, code / 512];
            let quad = (0..4).all(|x| (0..=4).all(|n| q[mul(n, x)] == (n as u64 * n as u64 * q[x]) % 8));
            let b = |x: usize, y: usize| (q[add[x][y]] + 16 - q[x] - q[y]) % 8;
            let biadd = (0..4).all(|x| (0..4).all(|y| (0..4).all(|z| b(add[x][y], z) == (b(x, z) + b(y, z)) % 8)));
            if !quad || !biadd {
                continue;
            }
            let nondeg = (1..4).all(|x| (0..4).any(|y| b(x, y) != 0));
            if !nondeg {
                continue;
            }
            for e in 1..4 {
                if add[e][e] != 0 || q[e] != 4 {
                    continue;
                }
                // Centralizer of the image of Z2 must be {0, e}.
                let cent: Vec<usize> = (0..4).filter(|&y| b(e, y) == 0).collect();
                if cent != [0, e] {
                    continue;
                }
                let cand = OracleClass { kind, q, e };
                if !classes.iter().any(|c| oracle_isomorphic(c, &cand)) {
                    classes.push(cand);
                }
            }
        }
    }
    classes
}

fn to_oracle(g: &MetricGroup, e: usize) -> Option<OracleClass> {
    let kind = match g.orders() {
        [4] => 0,
        [2, 2] => 1,
        _ => return None,
    };
    let mut q = [0u64; 4];
    for (x, v) in q.iter_mut().enumerate() {
        let (p, d) = g.q(x);
        if 8 % d != 0 {
            return None;
        }
        *v = p * (8 / d);
    }
    Some(OracleClass { kind, q, e })
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let oracle = oracle_classes();
    ensure!(oracle.len() == 8, "oracle found {} classes", oracle.len());
    let oracle_roots: BTreeSet<u64> = oracle
        .iter()
        .map(|c| {
            let sum = c.q.iter().fold(CycNum::zero(8), |acc, &k| &acc + &CycNum::zeta(8, k as i64));
            let half_sum = sum.scale(&half(1));
            (0..8).find(|&k| half_sum == CycNum::zeta(8, k as i64)).unwrap_or(99)
        })
        .collect();
    ensure!(oracle_roots == (0..8).collect(), "oracle Gauss sums {oracle_roots:?}");

    let svec = match catalog_get("svec").map_err(|e| e.to_string())?.payload {
        Datum::MetricGroup(g) => g,
        Datum::Premodular(_) => return Err("svec is not a metric group".into()),
    };
    let out = cli::run(["minext", "extend", "catalog:svec", "--format", "json"]);
    ensure!(out.code == 0, "extend exit {} {}", out.code, out.stderr);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).map_err(|e| e.to_string())?;
    ensure!(v["count"] == 8, "extend reported {} classes", v["count"]);

    let exts = enumerate_pointed_extensions(&svec, ExtensionOptions::default()).map_err(|e| e.to_string())?;
    ensure!(exts.len() == 8, "{} classes", exts.len());
    for (i, a) in exts.iter().enumerate() {
        for b in &exts[i + 1..] {
            let iso = isometry_rel_point(&a.group, &b.group, a.fermion, b.fermion).map_err(|e| e.to_string())?;
            ensure!(!iso, "two classes are isometric rel fermion");
        }
    }
    let mut matched = vec![false; oracle.len()];
    for ext in &exts {
        let o = to_oracle(&ext.group, ext.fermion).ok_or("extension outside the oracle's groups")?;
        let hits: Vec<usize> = (0..oracle.len()).filter(|&j| oracle_isomorphic(&oracle[j], &o)).collect();
        ensure!(hits.len() == 1, "extension matches {} oracle classes", hits.len());
        ensure!(!matched[hits[0]], "two extensions match one oracle class");
        matched[hits[0]] = true;
    }
    let mut roots = BTreeSet::new();
    for ext in &exts {
        let normalized = ext.gauss_sum.scale(&half(1));
        let k = (0..8)
            .find(|&k| normalized == CycNum::zeta(8, k))
            .ok_or_else(|| format!("normalized Gauss sum {normalized} is not an 8th root of unity"))?;
        ensure!(k as u8 == ext.signature, "signature {} vs root {k}", ext.signature);
        roots.insert(k);
    }
    ensure!(roots == (0..8).collect(), "normalized Gauss sums {roots:?}");
    let t = within(start, Duration::from_secs(10))?;
    Ok(format!("8 classes, oracle agrees, roots 0..7; {t}"))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let svec_total = premodular(&catalog_get("svec").map_err(|e| e.to_string())?)
        .ring()
        .fpdim()
        .map_err(|e| e.to_string())?
        .total;
    let mut normalized: Vec<CycNum> = Vec::new();
    for nu in (1..16).step_by(2) {
        let name = format!("ising:{nu}");
        let d = premodular(&catalog_get(&name).map_err(|e| e.to_string())?);
        ensure!(d.validate().is_empty(), "{name} does not validate");
        ensure!(
            d.classify_degeneracy().kind == DegeneracyKind::Nondegenerate,
            "{name} is degenerate"
        );
        let cent = d.relative_centralizer_of(&["1", "psi"]).map_err(|e| e.to_string())?;
        ensure!(cent == ["1", "psi"], "{name}: centralizer {cent:?}");
        let expected = CycNum::zeta(16, nu).scale(&BigRational::from_integer(2.into()));
        ensure!(d.gauss_sum() == expected, "{name}: Gauss sum {}", d.gauss_sum());
        let total = d.ring().fpdim().map_err(|e| e.to_string())?.total;
        ensure!((total - 4.0).abs() < 1e-12, "{name}: FPdim {total}");
        ensure!((total - 2.0 * svec_total).abs() < 1e-12, "{name}: FPdim {total} vs 2 x {svec_total}");
        normalized.push(d.gauss_sum().scale(&half(1)));
    }
    // Together with the pointed half: 16 distinct normalized Gauss sums.
    for k in 0..8 {
        normalized.push(CycNum::zeta(8, k));
    }
    for i in 0..normalized.len() {
        for j in (i + 1)..normalized.len() {
            ensure!(normalized[i] != normalized[j], "central charges {i} and {j} coincide");
        }
    }
    let t = within(start, Duration::from_secs(2))?;
    Ok(format!("8 Ising entries, 16 distinct central charges; {t}"))
}

fn criterion_6() -> Outcome {
    let mut labels = 0;
    let mut fermions = 0;
    for e in all_entries() {
        let d = premodular(&e);
        for a in 0..d.rank() {
            let dual = d.ring().dual(a);
            ensure!(eta_at(&d, a) == eta_at(&d, dual), "{}: eta({}) != eta(dual)", e.name, d.label(a));
            labels += 1;
        }
        if let Some(f) = d.classify_degeneracy().fermion {
            ensure!(eta_at(&d, f) == CycNum::from_integer(-1, 1), "{}: eta(e) = {}", e.name, eta_at(&d, f));
            fermions += 1;
        }
    }
    Ok(format!("{labels} labels symmetric, {fermions} fermions with eta = -1"))
}

fn cyclotomic_suite() -> Result<usize, String> {
    let mut checks = 0;
    for n in 1..=64u32 {
        let z = CycNum::zeta(n, 1);
        let mut p = CycNum::one(n);
        for k in 1..=n {
            p = &p * &z;
            ensure!(p.is_one() == (k == n), "zeta_{n}^{k}");
            checks += 1;
        }
        ensure!(&z * &z.conj() == CycNum::one(1), "zeta_{n} conj");
        ensure!(z.conj().conj() == z, "conj involution at {n}");
        for m in [2u32, 3, 4] {
            let big = n * m;
            ensure!(z.lift(big) == CycNum::zeta(big, i64::from(m)), "lift zeta_{n} to {big}");
            let w = &z + &CycNum::from_integer(2, n);
            let lifted = w.lift(big);
            ensure!(lifted == w, "lift preserves value at {n}");
            ensure!((&w * &w).lift(big) == &lifted * &lifted, "lift multiplicative at {n}");
            ensure!(w.conj().lift(big) == lifted.conj(), "lift commutes with conj at {n}");
            checks += 4;
        }
        let w = &z + &CycNum::from_integer(3, n);
        ensure!((&w * &w.inv().map_err(|e| e.to_string())?).is_one(), "inverse at {n}");
    }
    Ok(checks)
}

fn criterion_7() -> Outcome {
    let checks = cyclotomic_suite()?;
    let mut modular = 0;
    let mut failures = Vec::new();
    for e in all_entries() {
        let d = premodular(&e);
        if d.classify_degeneracy().kind != DegeneracyKind::Nondegenerate {
            continue;
        }
        modular += 1;
        let r = d.rank();
        let s = d.s_matrix();
        let conj: Vec<Vec<CycNum>> = s.iter().map(|row| row.iter().map(CycNum::conj).collect()).collect();
        let lhs = cyc_matmul(s, &conj);
        let dim = d.global_dimension();
        let zero = CycNum::zero(1);
        let c = |a: usize, b: usize| if d.ring().dual(a) == b { dim.clone() } else { zero.clone() };
        let holds = (0..r).all(|a| (0..r).all(|b| lhs[a][b] == c(a, b)));
        if !holds {
            failures.push(e.name.clone());
        }
    }
    ensure!(
        failures.is_empty(),
        "s*conj(s) != (sum d^2) C on {} of {modular} modular entries: {failures:?}",
        failures.len()
    );
    Ok(format!("{checks} cyclotomic checks, {modular} modular entries"))
}

fn criterion_8() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_minext");
    let start = Instant::now();
    let entries = all_entries();
    for e in &entries {
        let input = format!("catalog:{}", e.name);
        let run = |threads: Option<&str>| -> Result<Vec<u8>, String> {
            let mut cmd = Command::new(bin);
            cmd.args(["analyze", &input, "--format", "json"]);
            if let Some(t) = threads {
                cmd.args(["--threads", t]);
            }
            let out = cmd.output().map_err(|err| err.to_string())?;
            ensure!(out.status.success(), "{input}: exit {:?}", out.status.code());
            Ok(out.stdout)
        };
        let reference = run(None)?;
        for _ in 0..4 {
            ensure!(run(None)? == reference, "{input}: output differs between runs");
        }
        for t in ["1", "4", "8"] {
            ensure!(run(Some(t))? == reference, "{input}: output differs with {t} threads");
        }
        let in_process = cli::run(["minext", "analyze", &input, "--format", "json", "--threads", "4"]);
        ensure!(in_process.stdout.as_bytes() == reference, "{input}: library run differs from binary");
    }
    Ok(format!("{} entries x 8 runs; {:.2}s", entries.len(), start.elapsed().as_secs_f64()))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 sVec pipeline", criterion_1),
        ("2 Klein cross-check", criterion_2),
        ("3 components vs characters", criterion_3),
        ("4 pointed half of the 16-fold way", criterion_4),
        ("5 Ising family", criterion_5),
        ("6 eta symmetry and fermion sign", criterion_6),
        ("7 exact arithmetic and s-matrix identity", criterion_7),
        ("8 determinism", criterion_8),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
