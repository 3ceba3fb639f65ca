//! Components of the centre of ΣB, counted by the transparent simples and
//! matched with the characters K₀(Z₂(B)) → C.
//!
//! When every transparent simple is invertible the Müger centre is a finite
//! abelian group and its characters are enumerated exactly as maps to roots of
//! unity. Otherwise the characters are the joint eigenvalues of the transparent
//! fusion matrices, found by diagonalizing a random Hermitian combination.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::fusion_ring::FusionRing;
use crate::premodular::PremodularData;

/// Eigenvalues closer than this are one cluster.
pub const CLUSTER_TOL: f64 = 1e-9;
/// Distinct characters must differ by at least this much somewhere.
pub const DISTINCT_TOL: f64 = 1e-6;
/// Tolerance for recognizing the dimension character.
pub const DIM_TOL: f64 = 1e-8;
pub const MAX_RETRIES: usize = 8;
pub const DEFAULT_SEED: u64 = 0;

#[derive(Clone, Debug, PartialEq)]
pub struct ComponentAnalysis {
    pub count: usize,
    /// Transparent labels, in input order.
    pub labels: Vec<String>,
    /// `characters[i][j]` is the value of character i on `labels[j]`.
    pub characters: Vec<Vec<Complex64>>,
    pub dim_index: usize,
    pub magnetic_index: Option<usize>,
    pub seed: u64,
    /// Whether the exact group-character path was used.
    pub exact: bool,
}

struct CharacterRow<'a>(&'a [String], &'a [Complex64]);

impl Serialize for CharacterRow<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (label, z) in self.0.iter().zip(self.1) {
            map.serialize_entry(label, &[z.re, z.im])?;
        }
        map.end()
    }
}

impl Serialize for ComponentAnalysis {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<CharacterRow> = self
            .characters
            .iter()
            .map(|c| CharacterRow(&self.labels, c))
            .collect();
        let mut s = serializer.serialize_struct("ComponentAnalysis", 6)?;
        s.serialize_field("component_count", &self.count)?;
        s.serialize_field("characters", &rows)?;
        s.serialize_field("dim_index", &self.dim_index)?;
        s.serialize_field("magnetic_index", &self.magnetic_index)?;
        s.serialize_field("seed", &self.seed)?;
        s.serialize_field("exact", &self.exact)?;
        s.end()
    }
}

/// Round to 1e-12 and normalize negative zero.
fn clean(x: f64) -> f64 {
    let r = (x * 1e12).round() / 1e12;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn sup_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Characters of a group-like ring (every simple invertible), exactly.
/// Values are returned as exponents k/m of e^{2πi k/m}, with m the exponent.
fn group_characters(ring: &FusionRing) -> Vec<Vec<(u64, u64)>> {
    let n = ring.rank();
    let unit = ring.unit();
    let mul = |a: usize, b: usize| ring.product(a, b)[0].0;
    let order = |a: usize| {
        let mut x = a;
        let mut k = 1u64;
        while x != unit {
            x = mul(x, a);
            k += 1;
        }
        k
    };
    let orders: Vec<u64> = (0..n).map(order).collect();
    let m = orders.iter().fold(1u64, |acc, &o| num_integer::lcm(acc, o));

    // Greedy generators of maximal order, and the expression of every element.
    let mut gens: Vec<usize> = Vec::new();
    let mut span: Vec<Option<Vec<u64>>> = vec![None; n];
    span[unit] = Some(Vec::new());
    loop {
        let next = (0..n)
            .filter(|&a| span[a].is_none())
            .max_by_key(|&a| (orders[a], std::cmp::Reverse(a)));
        let Some(g) = next else { break };
        gens.push(g);
        // Re-span with the new generator list.
        let mut fresh: Vec<Option<Vec<u64>>> = vec![None; n];
        fresh[unit] = Some(vec![0; gens.len()]);
        let mut frontier = vec![unit];
        while let Some(x) = frontier.pop() {
            for (i, &gi) in gens.iter().enumerate() {
                let y = mul(x, gi);
                if fresh[y].is_none() {
                    let mut c = fresh[x].clone().unwrap();
                    c[i] += 1;
                    fresh[y] = Some(c);
                    frontier.push(y);
                }
            }
        }
        span = fresh;
    }
    let coords: Vec<Vec<u64>> = span.into_iter().map(Option::unwrap).collect();

    // Assignments χ(g_i) = e(k_i/m) with ord(g_i) k_i ≡ 0 mod m, kept when
    // consistent with the group law.
    let mut out = Vec::new();
    let steps: Vec<u64> = gens.iter().map(|&g| m / orders[g]).collect();
    let mut ks = vec![0u64; gens.len()];
    loop {
        let value = |a: usize| coords[a].iter().zip(&ks).map(|(c, k)| c * k).sum::<u64>() % m;
        let consistent = (0..n).all(|a| (0..n).all(|b| value(mul(a, b)) == (value(a) + value(b)) % m));
        if consistent {
            out.push((0..n).map(|a| (value(a), m)).collect());
        }
        let mut pos = 0;
        loop {
            if pos == gens.len() {
                return out;
            }
            ks[pos] += steps[pos];
            if ks[pos] < m {
                break;
            }
            ks[pos] = 0;
            pos += 1;
        }
    }
}

fn root_to_complex((k, m): (u64, u64)) -> Complex64 {
    match (4 * k).checked_rem(m) {
        // Quarter turns are exact.
        Some(0) => [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(-1.0, 0.0), Complex64::new(0.0, -1.0)]
            [(4 * k / m) as usize % 4],
        _ => Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / m as f64),
    }
}

/// Joint eigenvalues of the fusion matrices of a commutative ring.
fn numeric_characters(ring: &FusionRing, seed: u64) -> Result<Vec<Vec<Complex64>>> {
    let r = ring.rank();
    let mats: Vec<DMatrix<Complex64>> = (0..r)
        .map(|a| {
            let m = ring.fusion_matrix(a);
            DMatrix::from_fn(r, r, |i, j| Complex64::new(m[i][j] as f64, 0.0))
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_RETRIES {
        let mut h = DMatrix::<Complex64>::zeros(r, r);
        for m in &mats {
            let c = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            h += m * c + m.transpose() * c.conj();
        }
        let eig = h.symmetric_eigen();
        let mut evals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        evals.sort_by(f64::total_cmp);
        if evals.windows(2).any(|w| w[1] - w[0] < CLUSTER_TOL) {
            continue;
        }
        let chars: Vec<Vec<Complex64>> = (0..r)
            .map(|k| {
                let v = eig.eigenvectors.column(k);
                let norm = v.dotc(&v);
                mats.iter().map(|m| v.dotc(&(m * v)) / norm).collect()
            })
            .collect();
        let distinct = (0..r).all(|i| ((i + 1)..r).all(|j| sup_distance(&chars[i], &chars[j]) >= DISTINCT_TOL));
        if distinct {
            return Ok(chars);
        }
    }
    Err(Error::DegenerateEigenproblem {
        retries: MAX_RETRIES,
        seed,
    })
}

/// Characters of the transparent subring, with the dimension character and
/// (for slightly degenerate data) the magnetic character e ↦ -1 identified.
pub fn ring_characters(data: &PremodularData, seed: u64) -> Result<ComponentAnalysis> {
    let classification = data.classify_degeneracy();
    let transparent = classification.transparent.clone();
    let ring = data.ring().restrict(&transparent)?;
    let labels: Vec<String> = ring.labels().to_vec();
    let exact = (0..ring.rank()).all(|a| ring.is_invertible(a));
    let mut characters: Vec<Vec<Complex64>> = if exact {
        let mut exact_chars = group_characters(&ring);
        exact_chars.sort();
        exact_chars
            .into_iter()
            .map(|c| c.into_iter().map(root_to_complex).collect())
            .collect()
    } else {
        numeric_characters(&ring, seed)?
    };
    for c in characters.iter_mut() {
        for z in c.iter_mut() {
            *z = Complex64::new(clean(z.re), clean(z.im));
        }
    }
    let key = |c: &Vec<Complex64>| -> Vec<(i64, i64)> {
        c.iter()
            .map(|z| ((z.re * 1e9).round() as i64, (z.im * 1e9).round() as i64))
            .collect()
    };
    characters.sort_by_key(key);

    if characters.len() != transparent.len() {
        return Err(Error::CrossCheckMismatch(format!(
            "{} transparent simples but {} characters",
            transparent.len(),
            characters.len()
        )));
    }
    let fp = ring.fpdim()?;
    let dim_index = characters
        .iter()
        .position(|c| c.iter().zip(&fp.per_label).all(|(z, d)| (z - Complex64::new(*d, 0.0)).norm() < DIM_TOL))
        .ok_or_else(|| Error::CrossCheckMismatch("no dimension character".into()))?;
    let magnetic_index = match classification.fermion {
        Some(e) => {
            let pos = transparent.iter().position(|&a| a == e).expect("fermion is transparent");
            let idx = characters
                .iter()
                .position(|c| (c[pos] + 1.0).norm() < DIM_TOL)
                .ok_or_else(|| Error::CrossCheckMismatch("no character with e -> -1".into()))?;
            Some(idx)
        }
        None => None,
    };
    Ok(ComponentAnalysis {
        count: characters.len(),
        labels,
        characters,
        dim_index,
        magnetic_index,
        seed,
        exact,
    })
}

/// Number of transparent simples, cross-checked against the character count.
pub fn component_count(data: &PremodularData) -> Result<usize> {
    let n = data.transparent_labels().len();
    let analysis = ring_characters(data, DEFAULT_SEED)?;
    if analysis.count != n {
        return Err(Error::CrossCheckMismatch(format!(
            "{n} transparent simples but {} characters",
            analysis.count
        )));
    }
    Ok(n)
}

/// Characters of any commutative fusion ring by the numeric path (exposed for
/// cross-checks against the exact path).
pub fn numeric_ring_characters(ring: &FusionRing, seed: u64) -> Result<Vec<Vec<Complex64>>> {
    numeric_characters(ring, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::catalog_get;
    use crate::cyclotomic::CycNum;

    fn data(name: &str) -> PremodularData {
        catalog_get(name).unwrap().payload.to_premodular()
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn semion_has_one_component() {
        let a = ring_characters(&data("semion"), 0).unwrap();
        assert_eq!(a.count, 1);
        assert_eq!(a.characters, vec![vec![c(1.0)]]);
        assert_eq!(a.magnetic_index, None);
    }

    #[test]
    fn svec_has_two_components() {
        let a = ring_characters(&data("svec"), 0).unwrap();
        assert_eq!(a.count, 2);
        assert_eq!(a.labels, vec!["(0)", "(1)"]);
        assert!(a.exact);
        assert_eq!(a.characters[a.dim_index], vec![c(1.0), c(1.0)]);
        assert_eq!(a.characters[a.magnetic_index.unwrap()], vec![c(1.0), c(-1.0)]);
    }

    #[test]
    fn transparent_boson() {
        let a = ring_characters(&data("z4-q:2"), 0).unwrap();
        assert_eq!(a.count, 2);
        assert_eq!(a.labels, vec!["(0)", "(2)"]);
        assert_eq!(a.magnetic_index, None);
        let mut values: Vec<f64> = a.characters.iter().map(|ch| ch[1].re).collect();
        values.sort_by(f64::total_cmp);
        assert_eq!(values, vec![-1.0, 1.0]);
    }

    #[test]
    fn component_counts() {
        assert_eq!(component_count(&data("ising:3")).unwrap(), 1);
        assert_eq!(component_count(&data("svec")).unwrap(), 2);
        assert_eq!(component_count(&data("svec-x-semion")).unwrap(), 2);
        assert_eq!(component_count(&data("rep-z2")).unwrap(), 2);
    }

    #[test]
    fn exact_and_numeric_paths_agree_on_groups() {
        for name in ["svec", "rep-z2", "toric", "z4-q:1", "pointed:2x4:0,0"] {
            let d = data(name);
            let ring = d.ring().restrict(&d.transparent_labels()).unwrap();
            let exact = ring_characters(&d, 0).unwrap().characters;
            let numeric = numeric_ring_characters(&ring, 3).unwrap();
            assert_eq!(exact.len(), numeric.len());
            for e in &exact {
                assert!(numeric.iter().any(|n| sup_distance(e, n) < 1e-10), "{name}");
            }
        }
    }

    /// Rep(S3) as a symmetric (Tannakian) datum: the numeric path is forced.
    fn rep_s3() -> PremodularData {
        let labels = ["1", "sgn", "rho"].map(String::from).to_vec();
        let entries = vec![
            (0, 0, 0, 1),
            (0, 1, 1, 1),
            (0, 2, 2, 1),
            (1, 0, 1, 1),
            (1, 1, 0, 1),
            (1, 2, 2, 1),
            (2, 0, 2, 1),
            (2, 1, 2, 1),
            (2, 2, 0, 1),
            (2, 2, 1, 1),
            (2, 2, 2, 1),
        ];
        let ring = FusionRing::new(labels, 0, vec![0, 1, 2], entries).unwrap();
        let dims = vec![CycNum::one(1), CycNum::one(1), CycNum::from_integer(2, 1)];
        PremodularData::validated(ring, 1, dims, vec![CycNum::one(1); 3], None).unwrap()
    }

    #[test]
    fn numeric_path_on_rep_s3() {
        let a = ring_characters(&rep_s3(), 11).unwrap();
        assert!(!a.exact);
        assert_eq!(a.count, 3);
        let expected = [[1.0, -1.0, 0.0], [1.0, 1.0, -1.0], [1.0, 1.0, 2.0]];
        for (ch, e) in a.characters.iter().zip(expected) {
            assert!(sup_distance(ch, &e.map(c)) < 1e-12, "{ch:?}");
        }
        assert_eq!(a.characters[a.dim_index], vec![c(1.0), c(1.0), c(2.0)]);
        // Same output for any seed.
        assert_eq!(ring_characters(&rep_s3(), 99).unwrap().characters, a.characters);
    }

    #[test]
    fn serialization_shape() {
        let a = ring_characters(&data("svec"), 5).unwrap();
        let v = serde_json::to_value(&a).unwrap();
        assert_eq!(v["component_count"], 2);
        assert_eq!(v["seed"], 5);
        assert_eq!(v["characters"][0]["(1)"], serde_json::json!([-1.0, 0.0]));
    }
}
