//! Structured reports and their fixed-width table renderings.

use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;

use crate::center_components::{ring_characters, ComponentAnalysis};
use crate::cyclotomic::CycNum;
use crate::error::{Error, Result};
use crate::io::Datum;
use crate::klein::{main_theorem_verdict, KappaReport, VerdictKind};
use crate::metric_groups::{MetricGroup, MetricGroupJson, PointedExtension};
use crate::premodular::PremodularData;
use crate::violation::Violation;

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub input_name: String,
    pub input_type: String,
    pub rank: usize,
    pub validation: String,
    pub classification: String,
    pub transparent: Vec<String>,
    pub fermion: Option<String>,
    pub components: ComponentAnalysis,
    pub kappa: Option<KappaReport>,
    pub verdict: String,
    pub verdict_detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<Vec<(String, f64)>>,
}

/// Run the full pipeline: classify, count components, κ when applicable, verdict.
/// Returns `CrossCheckMismatch` (or the eigenproblem error) when an internal
/// consistency check fails.
pub fn analyze(input_name: &str, datum: &Datum, seed: u64, timings: bool) -> Result<AnalysisReport> {
    let mut stages = Vec::new();
    let mut clock = Instant::now();
    let mut lap = |name: &str, stages: &mut Vec<(String, f64)>| {
        let ms = clock.elapsed().as_secs_f64() * 1e3;
        stages.push((name.to_string(), (ms * 1e3).round() / 1e3));
        clock = Instant::now();
    };
    let data = datum.to_premodular();
    lap("convert", &mut stages);
    let cls = data.classify_degeneracy();
    lap("classify", &mut stages);
    let components = ring_characters(&data, seed)?;
    lap("components", &mut stages);
    let verdict = main_theorem_verdict(&data);
    lap("kappa_and_verdict", &mut stages);
    if verdict.kind == VerdictKind::Inconsistent {
        return Err(Error::CrossCheckMismatch(verdict.message));
    }
    let label = |a: usize| data.label(a).to_string();
    Ok(AnalysisReport {
        input_name: input_name.to_string(),
        input_type: datum.type_name().to_string(),
        rank: data.rank(),
        validation: "ok".into(),
        classification: cls.kind.to_string(),
        transparent: cls.transparent.iter().map(|&a| label(a)).collect(),
        fermion: cls.fermion.map(label),
        components,
        kappa: verdict.kappa,
        verdict: verdict.kind.as_str().to_string(),
        verdict_detail: verdict.message,
        timings_ms: timings.then_some(stages),
    })
}

fn row(out: &mut String, key: &str, value: impl std::fmt::Display) {
    let _ = writeln!(out, "{key:<22}{value}");
}

fn fmt_complex(re: f64, im: f64) -> String {
    format!("{re:>+.9}{im:>+.9}i")
}

pub fn components_table(c: &ComponentAnalysis) -> String {
    let mut out = String::new();
    row(&mut out, "component_count", c.count);
    row(&mut out, "exact", c.exact);
    row(&mut out, "seed", c.seed);
    row(&mut out, "dim_index", c.dim_index);
    row(
        &mut out,
        "magnetic_index",
        c.magnetic_index.map_or("-".to_string(), |m| m.to_string()),
    );
    let _ = write!(out, "{:<6}", "chi");
    for l in &c.labels {
        let _ = write!(out, "{l:>28}");
    }
    out.push('\n');
    for (i, ch) in c.characters.iter().enumerate() {
        let _ = write!(out, "{i:<6}");
        for z in ch {
            let _ = write!(out, "{:>28}", fmt_complex(z.re, z.im));
        }
        out.push('\n');
    }
    out
}

pub fn kappa_table(k: &KappaReport) -> String {
    let s = serde_json::to_value(k).expect("kappa serializes");
    let mut out = String::new();
    for (key, v) in s.as_object().expect("object") {
        row(&mut out, key, v.as_str().map_or(v.to_string(), str::to_string));
    }
    out
}

pub fn analysis_table(r: &AnalysisReport) -> String {
    let mut out = String::new();
    row(&mut out, "input", &r.input_name);
    row(&mut out, "type", &r.input_type);
    row(&mut out, "rank", r.rank);
    row(&mut out, "validation", &r.validation);
    row(&mut out, "classification", &r.classification);
    row(&mut out, "transparent", r.transparent.join(" "));
    row(&mut out, "fermion", r.fermion.as_deref().unwrap_or("-"));
    out.push_str("-- components\n");
    out.push_str(&components_table(&r.components));
    if let Some(k) = &r.kappa {
        out.push_str("-- kappa\n");
        out.push_str(&kappa_table(k));
    }
    out.push_str("-- verdict\n");
    row(&mut out, "verdict", &r.verdict);
    row(&mut out, "detail", &r.verdict_detail);
    if let Some(t) = &r.timings_ms {
        out.push_str("-- timings (ms)\n");
        for (k, v) in t {
            row(&mut out, k, format!("{v:.3}"));
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub input_name: String,
    pub input_type: String,
    pub valid: bool,
    pub violations: Vec<Violation>,
}

pub fn validation_table(r: &ValidationReport) -> String {
    let mut out = String::new();
    row(&mut out, "input", &r.input_name);
    row(&mut out, "type", &r.input_type);
    row(&mut out, "valid", r.valid);
    for v in &r.violations {
        row(&mut out, v.name(), v);
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtensionJson {
    pub orders: Vec<u32>,
    pub q: serde_json::Map<String, serde_json::Value>,
    pub fermion: String,
    /// Images of the generators of the input group.
    pub embedding: Vec<String>,
    pub gauss_sum: CycNum,
    pub gauss_sum_display: String,
    pub signature: u8,
}

impl From<&PointedExtension> for ExtensionJson {
    fn from(e: &PointedExtension) -> Self {
        let MetricGroupJson { orders, q } = MetricGroupJson::from(&e.group);
        ExtensionJson {
            orders,
            q,
            fermion: e.group.element_name(e.fermion),
            embedding: e.embedding.iter().map(|&x| e.group.element_name(x)).collect(),
            gauss_sum: e.gauss_sum.clone(),
            gauss_sum_display: e.gauss_sum.to_string(),
            signature: e.signature,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtensionReport {
    pub input_name: String,
    pub fermion: String,
    pub fix_fermion: bool,
    pub max_order: usize,
    pub count: usize,
    pub note: String,
    pub classes: Vec<ExtensionJson>,
}

pub fn extension_report(
    input_name: &str,
    mg: &MetricGroup,
    exts: &[PointedExtension],
    fix_fermion: bool,
    max_order: usize,
) -> ExtensionReport {
    let fermion = mg.slight_fermion().map(|e| mg.element_name(e)).unwrap_or_default();
    ExtensionReport {
        input_name: input_name.to_string(),
        fermion,
        fix_fermion,
        max_order,
        count: exts.len(),
        note: format!(
            "pointed classes found: {} (non-pointed extensions, if any, not enumerated)",
            exts.len()
        ),
        classes: exts.iter().map(ExtensionJson::from).collect(),
    }
}

pub fn extension_table(r: &ExtensionReport) -> String {
    let mut out = String::new();
    row(&mut out, "input", &r.input_name);
    row(&mut out, "fermion", &r.fermion);
    row(&mut out, "fix_fermion", r.fix_fermion);
    row(&mut out, "note", &r.note);
    let _ = writeln!(out, "{:<4}{:<12}{:<10}{:<12}{:<28}q", "#", "orders", "fermion", "signature", "gauss_sum");
    for (i, c) in r.classes.iter().enumerate() {
        let orders: Vec<String> = c.orders.iter().map(u32::to_string).collect();
        let q: Vec<String> = c
            .q
            .iter()
            .map(|(k, v)| format!("{k}={}", v.as_str().unwrap_or_default()))
            .collect();
        let _ = writeln!(
            out,
            "{:<4}{:<12}{:<10}{:<12}{:<28}{}",
            i,
            orders.join("x"),
            c.fermion,
            c.signature,
            c.gauss_sum_display,
            q.join(" ")
        );
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct GaussReport {
    pub input_name: String,
    pub input_type: String,
    /// Σ_a d_a² θ_a.
    pub gauss_sum: CycNum,
    pub gauss_sum_display: String,
    pub gauss_sum_complex: [f64; 2],
    /// Σ_a d_a².
    pub global_dimension: CycNum,
    pub global_dimension_display: String,
    /// Metric groups only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radical: Option<Vec<String>>,
    /// Metric groups with trivial radical only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub signature_mod8: Option<u8>,
}

pub fn gauss_report(input_name: &str, datum: &Datum) -> GaussReport {
    let round = |x: f64| {
        let r = (x * 1e12).round() / 1e12;
        if r == 0.0 {
            0.0
        } else {
            r
        }
    };
    let (gauss_sum, global, radical, signature) = match datum {
        Datum::MetricGroup(g) => (
            g.gauss_sum(),
            CycNum::from_integer(g.size() as i64, 1),
            Some(g.radical().iter().map(|&x| g.element_name(x)).collect()),
            g.signature_mod8(),
        ),
        Datum::Premodular(d) => (d.gauss_sum(), d.global_dimension(), None, None),
    };
    let z = gauss_sum.to_complex();
    GaussReport {
        input_name: input_name.to_string(),
        input_type: datum.type_name().to_string(),
        gauss_sum_display: gauss_sum.to_string(),
        gauss_sum_complex: [round(z.re), round(z.im)],
        gauss_sum,
        global_dimension_display: global.to_string(),
        global_dimension: global,
        radical,
        signature_mod8: signature,
    }
}

pub fn gauss_table(r: &GaussReport) -> String {
    let mut out = String::new();
    row(&mut out, "input", &r.input_name);
    row(&mut out, "type", &r.input_type);
    row(&mut out, "gauss_sum", &r.gauss_sum_display);
    row(
        &mut out,
        "gauss_sum_complex",
        fmt_complex(r.gauss_sum_complex[0], r.gauss_sum_complex[1]),
    );
    row(&mut out, "global_dimension", &r.global_dimension_display);
    if let Some(rad) = &r.radical {
        row(&mut out, "radical", rad.join(" "));
    }
    if r.radical.is_some() {
        row(
            &mut out,
            "signature_mod8",
            r.signature_mod8.map_or("-".to_string(), |s| s.to_string()),
        );
    }
    out
}

/// Short human summary of a premodular datum, used by `catalog show`.
pub fn datum_summary(d: &PremodularData) -> String {
    let mut out = String::new();
    row(&mut out, "rank", d.rank());
    row(&mut out, "conductor", d.conductor());
    let _ = writeln!(out, "{:<12}{:<24}{:<24}", "label", "dim", "twist");
    for a in 0..d.rank() {
        let _ = writeln!(out, "{:<12}{:<24}{:<24}", d.label(a), d.dim(a).to_string(), d.twist(a).to_string());
    }
    out
}
