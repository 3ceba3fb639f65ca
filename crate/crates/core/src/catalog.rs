//! Built-in premodular data and metric groups.
//!
//! Pointed entries are stored as metric groups; analysis converts them with
//! [`MetricGroup::to_premodular`]. The Ising family is generated from closed
//! formulas.

use num_rational::BigRational;

use crate::cyclotomic::{self, CycNum};
use crate::error::{Error, Result};
use crate::fusion_ring::FusionRing;
use crate::io::Datum;
use crate::metric_groups::MetricGroup;
use crate::premodular::PremodularData;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryKind {
    Premodular,
    MetricGroup,
}

impl EntryKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            EntryKind::Premodular => "premodular",
            EntryKind::MetricGroup => "metric_group",
        }
    }
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub kind: EntryKind,
    pub payload: Datum,
    pub doc: String,
}

const Z4_KEYS: [u32; 5] = [1, 2, 3, 5, 7];

/// The fixed (non-parametric) keys.
fn fixed_keys() -> Vec<String> {
    let mut keys: Vec<String> = ["svec", "rep-z2", "semion", "semion-bar", "toric", "three-fermion", "svec-x-semion"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    keys.extend(Z4_KEYS.iter().map(|k| format!("z4-q:{k}")));
    keys.extend((1..16).step_by(2).map(|nu| format!("ising:{nu}")));
    keys.sort();
    keys
}

/// Fusion ring of the Ising category: 1, psi, sigma.
pub fn ising_ring() -> FusionRing {
    let labels = ["1", "psi", "sigma"].map(String::from).to_vec();
    let (one, psi, sigma) = (0, 1, 2);
    let entries = vec![
        (one, one, one, 1),
        (one, psi, psi, 1),
        (one, sigma, sigma, 1),
        (psi, one, psi, 1),
        (psi, psi, one, 1),
        (psi, sigma, sigma, 1),
        (sigma, one, sigma, 1),
        (sigma, psi, sigma, 1),
        (sigma, sigma, one, 1),
        (sigma, sigma, psi, 1),
    ];
    FusionRing::new(labels, one, vec![one, psi, sigma], entries).expect("Ising ring is well formed")
}

/// Ising datum with θ_σ = e^{2πi ν/16}, d_σ = ζ₈ + ζ₈⁻¹, for odd ν.
pub fn ising(nu: u32) -> Result<PremodularData> {
    if nu.is_multiple_of(2) || nu >= 16 {
        return Err(Error::Parse(format!("Ising parameter must be odd in 1..15, got {nu}")));
    }
    let d_sigma = &CycNum::zeta(8, 1) + &CycNum::zeta(8, -1);
    let dims = vec![CycNum::one(16), CycNum::one(16), d_sigma];
    let twists = vec![CycNum::one(16), CycNum::from_integer(-1, 16), CycNum::zeta(16, i64::from(nu))];
    PremodularData::validated(ising_ring(), 16, dims, twists, None)
}

fn cyclic(n: u32, q: impl Fn(u64) -> (i64, u64)) -> MetricGroup {
    let values: Vec<(i64, u64)> = (0..u64::from(n)).map(q).collect();
    MetricGroup::from_fractions(&[n], &values).expect("catalog form")
}

fn klein_four(q: [(i64, u64); 4]) -> MetricGroup {
    MetricGroup::from_fractions(&[2, 2], &q).expect("catalog form")
}

fn fixed_entry(name: &str) -> Option<(Datum, String)> {
    let mg = |g: MetricGroup| Datum::MetricGroup(g);
    let entry = match name {
        "svec" => (mg(cyclic(2, |x| (x as i64, 2))), "super vector spaces: Z2 with q(1) = 1/2"),
        "rep-z2" => (mg(cyclic(2, |_| (0, 1))), "Rep(Z2): Z2 with q = 0"),
        "semion" => (mg(cyclic(2, |x| (x as i64, 4))), "semion: Z2 with q(1) = 1/4"),
        "semion-bar" => (mg(cyclic(2, |x| (3 * x as i64, 4))), "anti-semion: Z2 with q(1) = 3/4"),
        "toric" => (
            mg(klein_four([(0, 1), (0, 1), (0, 1), (1, 2)])),
            "toric code: Z2 x Z2 with q(e) = q(m) = 0, q(em) = 1/2",
        ),
        "three-fermion" => (
            mg(klein_four([(0, 1), (1, 2), (1, 2), (1, 2)])),
            "three-fermion: Z2 x Z2 with q = 1/2 off zero",
        ),
        "svec-x-semion" => (
            mg(klein_four([(0, 1), (1, 4), (1, 2), (3, 4)])),
            "sVec x semion: Z2 x Z2 with q(f) = 1/2, q(s) = 1/4, q(fs) = 3/4",
        ),
        _ => {
            let entry = if let Some(k) = name.strip_prefix("z4-q:") {
                let k: u32 = k.parse().ok().filter(|k| Z4_KEYS.contains(k))?;
                (
                    mg(cyclic(4, move |x| (i64::from(k) * (x * x) as i64, 8))),
                    match k {
                        2 => "Z4 with q(x) = x^2/4 (transparent boson)".to_string(),
                        _ => format!("Z4 with q(x) = {k} x^2/8"),
                    },
                )
            } else {
                let nu = name.strip_prefix("ising:")?;
                let nu: u32 = nu.parse().ok()?;
                (
                    Datum::Premodular(ising(nu).ok()?),
                    format!("Ising category with theta_sigma = e({nu}/16)"),
                )
            };
            return Some(entry);
        }
    };
    Some((entry.0, entry.1.to_string()))
}

/// `pointed:<n1>x<n2>x…:<q1>,<q2>,…[;<b12>,<b13>,…]`: q(e_i) = q_i and
/// b(e_i, e_j) = b_ij.
fn pointed_entry(spec: &str) -> Result<MetricGroup> {
    let bad = || Error::Parse(format!("invalid pointed spec `{spec}`"));
    let (orders, forms) = spec.split_once(':').ok_or_else(bad)?;
    let orders: Vec<u32> = orders
        .split('x')
        .map(|n| n.trim().parse().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    let (diag, off) = match forms.split_once(';') {
        Some((d, o)) => (d, o),
        None => (forms, ""),
    };
    let parse_list = |s: &str| -> Result<Vec<BigRational>> {
        s.split(',')
            .filter(|t| !t.trim().is_empty())
            .map(cyclotomic::parse_rational)
            .collect()
    };
    let g = MetricGroup::from_generators(&orders, &parse_list(diag)?, &parse_list(off)?)?;
    let violations = g.validate();
    if violations.is_empty() {
        Ok(g)
    } else {
        Err(Error::Validation(violations))
    }
}

pub fn catalog_get(name: &str) -> Result<CatalogEntry> {
    let (payload, doc) = if let Some(spec) = name.strip_prefix("pointed:") {
        (
            Datum::MetricGroup(pointed_entry(spec)?),
            "pointed metric group from generator data".to_string(),
        )
    } else {
        let (payload, doc) = fixed_entry(name).ok_or_else(|| Error::UnknownCatalogKey {
            key: name.to_string(),
            valid: {
                let mut v = fixed_keys();
                v.push("pointed:<n1>x<n2>:<q1>,<q2>[;<b12>]".into());
                v
            },
        })?;
        (payload, doc)
    };
    let kind = match payload {
        Datum::Premodular(_) => EntryKind::Premodular,
        Datum::MetricGroup(_) => EntryKind::MetricGroup,
    };
    Ok(CatalogEntry {
        name: name.to_string(),
        kind,
        payload,
        doc,
    })
}

/// (name, kind, doc) for every fixed key, sorted by name.
pub fn catalog_list() -> Vec<(String, EntryKind, String)> {
    fixed_keys()
        .into_iter()
        .map(|k| {
            let e = catalog_get(&k).expect("listed key resolves");
            (e.name, e.kind, e.doc)
        })
        .collect()
}

/// Every listed entry, built.
pub fn all_entries() -> Vec<CatalogEntry> {
    fixed_keys()
        .iter()
        .map(|k| catalog_get(k).expect("listed key resolves"))
        .collect()
}
