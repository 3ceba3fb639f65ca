//! Commutative fusion rings: labels, multiplicities N^c_{a,b}, duality and
//! unit, with Frobenius–Perron dimensions.
//!
//! Matrices are indexed in the input label order; the unit need not come
//! first.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::violation::Violation;

pub type IntMatrix = Vec<Vec<i64>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FusionRing {
    labels: Vec<String>,
    unit: usize,
    dual: Vec<usize>,
    /// `products[a * rank + b]` lists (c, N^c_{a,b}) with N > 0, sorted by c.
    products: Vec<Vec<(usize, u32)>>,
}

/// Frobenius–Perron dimensions of a fusion ring.
#[derive(Clone, Debug, PartialEq)]
pub struct FpDims {
    pub per_label: Vec<f64>,
    pub total: f64,
}

impl FusionRing {
    /// Build from sparse `(a, b, c, N)` entries. Only structural problems
    /// (index ranges, duplicates) are rejected here; the ring axioms are
    /// checked by [`FusionRing::validate`].
    pub fn new(
        labels: Vec<String>,
        unit: usize,
        dual: Vec<usize>,
        entries: impl IntoIterator<Item = (usize, usize, usize, u32)>,
    ) -> Result<Self> {
        let r = labels.len();
        let shape = |detail: String| Error::Validation(vec![Violation::ShapeMismatch { detail }]);
        if r == 0 {
            return Err(shape("no labels".into()));
        }
        if unit >= r {
            return Err(shape(format!("unit index {unit} out of range")));
        }
        if dual.len() != r {
            return Err(shape(format!("dual has length {}, expected {r}", dual.len())));
        }
        if let Some(&d) = dual.iter().find(|&&d| d >= r) {
            return Err(shape(format!("dual index {d} out of range")));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(shape(format!("duplicate label `{l}`")));
            }
        }
        let mut products = vec![Vec::new(); r * r];
        for (a, b, c, n) in entries {
            if a >= r || b >= r || c >= r {
                return Err(shape(format!("fusion entry ({a}, {b}, {c}) out of range")));
            }
            if n == 0 {
                continue;
            }
            let slot: &mut Vec<(usize, u32)> = &mut products[a * r + b];
            if slot.iter().any(|&(cc, _)| cc == c) {
                return Err(shape(format!("duplicate fusion entry ({a}, {b}, {c})")));
            }
            slot.push((c, n));
        }
        for slot in &mut products {
            slot.sort_unstable();
        }
        Ok(FusionRing {
            labels,
            unit,
            dual,
            products,
        })
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == name)
            .ok_or_else(|| Error::UnknownLabel(name.to_string()))
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn dual(&self, a: usize) -> usize {
        self.dual[a]
    }

    pub fn duals(&self) -> &[usize] {
        &self.dual
    }

    /// Nonzero terms (c, N^c_{a,b}) of a ⊗ b.
    pub fn product(&self, a: usize, b: usize) -> &[(usize, u32)] {
        &self.products[a * self.rank() + b]
    }

    pub fn mult(&self, a: usize, b: usize, c: usize) -> u32 {
        self.product(a, b)
            .iter()
            .find(|&&(cc, _)| cc == c)
            .map_or(0, |&(_, n)| n)
    }

    /// All nonzero entries as `(a, b, c, N)`, sorted.
    pub fn entries(&self) -> Vec<(usize, usize, usize, u32)> {
        let r = self.rank();
        let mut out = Vec::new();
        for a in 0..r {
            for b in 0..r {
                for &(c, n) in self.product(a, b) {
                    out.push((a, b, c, n));
                }
            }
        }
        out
    }

    /// True when a ⊗ a* = I, i.e. `a` is invertible.
    pub fn is_invertible(&self, a: usize) -> bool {
        self.product(a, self.dual[a]) == [(self.unit, 1)]
    }

    /// Check the fusion-ring axioms, returning every violation found.
    pub fn validate(&self) -> Vec<Violation> {
        let r = self.rank();
        let name = |i: usize| self.labels[i].clone();
        let mut out = Vec::new();

        for b in 0..r {
            let expected = [(b, 1)];
            if self.product(self.unit, b) != expected {
                out.push(Violation::UnitLaw {
                    a: name(self.unit),
                    b: name(b),
                });
            }
            if b != self.unit && self.product(b, self.unit) != expected {
                out.push(Violation::UnitLaw {
                    a: name(b),
                    b: name(self.unit),
                });
            }
        }

        if self.dual[self.unit] != self.unit {
            out.push(Violation::UnitNotSelfDual);
        }
        for a in 0..r {
            if self.dual[self.dual[a]] != a {
                out.push(Violation::DualNotInvolutive { a: name(a) });
            }
        }
        for a in 0..r {
            for b in 0..r {
                let want = u32::from(b == self.dual[a]);
                if self.mult(a, b, self.unit) != want {
                    out.push(Violation::DualityViolation { a: name(a), b: name(b) });
                }
            }
        }

        for a in 0..r {
            for b in (a + 1)..r {
                if self.product(a, b) != self.product(b, a) {
                    for c in 0..r {
                        if self.mult(a, b, c) != self.mult(b, a, c) {
                            out.push(Violation::NonCommutative {
                                a: name(a),
                                b: name(b),
                                c: name(c),
                            });
                        }
                    }
                }
            }
        }

        let mut left = vec![0u64; r];
        let mut right = vec![0u64; r];
        for a in 0..r {
            for b in 0..r {
                for c in 0..r {
                    left.iter_mut().for_each(|x| *x = 0);
                    right.iter_mut().for_each(|x| *x = 0);
                    // (a b) c
                    for &(e, n1) in self.product(a, b) {
                        for &(d, n2) in self.product(e, c) {
                            left[d] += u64::from(n1) * u64::from(n2);
                        }
                    }
                    // a (b c)
                    for &(f, n1) in self.product(b, c) {
                        for &(d, n2) in self.product(a, f) {
                            right[d] += u64::from(n1) * u64::from(n2);
                        }
                    }
                    for d in 0..r {
                        if left[d] != right[d] {
                            out.push(Violation::Associativity {
                                a: name(a),
                                b: name(b),
                                c: name(c),
                                d: name(d),
                            });
                        }
                    }
                }
            }
        }
        out
    }

    /// (N_a)_{c,b} = N^c_{a,b}: left multiplication by `a` on the label basis.
    pub fn fusion_matrix(&self, a: usize) -> IntMatrix {
        let r = self.rank();
        let mut m = vec![vec![0i64; r]; r];
        for (b, column) in (0..r).map(|b| (b, self.product(a, b))) {
            for &(c, n) in column {
                m[c][b] = i64::from(n);
            }
        }
        m
    }

    pub fn fusion_matrix_of(&self, label: &str) -> Result<IntMatrix> {
        Ok(self.fusion_matrix(self.index_of(label)?))
    }

    /// Permutation matrix of a ↦ a*: column a has its 1 in row a*.
    pub fn dual_permutation_matrix(&self) -> IntMatrix {
        let r = self.rank();
        let mut m = vec![vec![0i64; r]; r];
        for a in 0..r {
            m[self.dual[a]][a] = 1;
        }
        m
    }

    /// Frobenius–Perron dimensions by power iteration on the regular element
    /// Σ_a N_a, which is entrywise positive for a fusion ring. The result is
    /// checked to be a character to 1e-9.
    pub fn fpdim(&self) -> Result<FpDims> {
        const MAX_STEPS: usize = 100_000;
        let r = self.rank();
        let mut regular = vec![vec![0f64; r]; r];
        for a in 0..r {
            for b in 0..r {
                for &(c, n) in self.product(a, b) {
                    regular[c][b] += f64::from(n);
                }
            }
        }
        let step = |v: &[f64]| -> (Vec<f64>, f64) {
            let mut w: Vec<f64> = regular
                .iter()
                .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
                .collect();
            let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            w.iter_mut().for_each(|x| *x /= norm);
            let delta = w.iter().zip(v).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            (w, delta)
        };
        let mut v = vec![1.0 / (r as f64).sqrt(); r];
        let mut converged = false;
        for _ in 0..MAX_STEPS {
            let (w, delta) = step(&v);
            v = w;
            if delta < 1e-12 {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NonConvergent(MAX_STEPS));
        }
        // A few more steps take the error down to rounding level.
        for _ in 0..64 {
            v = step(&v).0;
        }
        let scale = v[self.unit];
        let per_label: Vec<f64> = v.iter().map(|x| x / scale).collect();
        for a in 0..r {
            for b in 0..r {
                let rhs: f64 = self
                    .product(a, b)
                    .iter()
                    .map(|&(c, n)| f64::from(n) * per_label[c])
                    .sum();
                let lhs = per_label[a] * per_label[b];
                if (lhs - rhs).abs() > 1e-9 * lhs.max(1.0) {
                    return Err(Error::CrossCheckMismatch(format!(
                        "FPdim is not a character at ({}, {})",
                        self.labels[a], self.labels[b]
                    )));
                }
            }
        }
        let total = per_label.iter().map(|x| x * x).sum();
        Ok(FpDims { per_label, total })
    }

    /// The subring on `subset` (in the given order), which must be closed
    /// under fusion and duals.
    pub fn restrict(&self, subset: &[usize]) -> Result<FusionRing> {
        let mut position = vec![None; self.rank()];
        for (i, &a) in subset.iter().enumerate() {
            position[a] = Some(i);
        }
        let unit = position[self.unit]
            .ok_or_else(|| Error::NotASubcategory("unit missing".into()))?;
        let mut dual = Vec::with_capacity(subset.len());
        for &a in subset {
            dual.push(position[self.dual[a]].ok_or_else(|| {
                Error::NotASubcategory(format!("dual of {} missing", self.labels[a]))
            })?);
        }
        let mut entries = Vec::new();
        for &a in subset {
            for &b in subset {
                for &(c, n) in self.product(a, b) {
                    let ci = position[c].ok_or_else(|| {
                        Error::NotASubcategory(format!(
                            "{} appears in {} x {}",
                            self.labels[c], self.labels[a], self.labels[b]
                        ))
                    })?;
                    entries.push((position[a].unwrap(), position[b].unwrap(), ci, n));
                }
            }
        }
        let labels = subset.iter().map(|&a| self.labels[a].clone()).collect();
        FusionRing::new(labels, unit, dual, entries)
    }

    /// Whether `subset` is closed under fusion and duals and contains the unit.
    pub fn is_closed(&self, subset: &[usize]) -> bool {
        let mut member = vec![false; self.rank()];
        subset.iter().for_each(|&a| member[a] = true);
        member[self.unit]
            && subset.iter().all(|&a| member[self.dual[a]])
            && subset.iter().all(|&a| {
                subset
                    .iter()
                    .all(|&b| self.product(a, b).iter().all(|&(c, _)| member[c]))
            })
    }
}

/// Wire form: `{"labels":[…], "unit": idx, "dual":[…], "fusion":[[a,b,c,N],…]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FusionRingJson {
    pub labels: Vec<String>,
    pub unit: usize,
    pub dual: Vec<usize>,
    pub fusion: Vec<[u64; 4]>,
}

impl From<&FusionRing> for FusionRingJson {
    fn from(ring: &FusionRing) -> Self {
        FusionRingJson {
            labels: ring.labels.clone(),
            unit: ring.unit,
            dual: ring.dual.clone(),
            fusion: ring
                .entries()
                .into_iter()
                .map(|(a, b, c, n)| [a as u64, b as u64, c as u64, u64::from(n)])
                .collect(),
        }
    }
}

impl TryFrom<FusionRingJson> for FusionRing {
    type Error = Error;

    fn try_from(raw: FusionRingJson) -> Result<Self> {
        let mut entries = Vec::with_capacity(raw.fusion.len());
        for [a, b, c, n] in raw.fusion {
            let n = u32::try_from(n).map_err(|_| Error::Parse(format!("multiplicity {n} too large")))?;
            entries.push((a as usize, b as usize, c as usize, n));
        }
        FusionRing::new(raw.labels, raw.unit, raw.dual, entries)
    }
}

impl Serialize for FusionRing {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        FusionRingJson::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FusionRing {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        FusionRing::try_from(FusionRingJson::deserialize(deserializer)?).map_err(D::Error::custom)
    }
}

/// Group ring of Z_{n_1} × … × Z_{n_k}, labels given by coordinate tuples.
pub fn group_ring(orders: &[u32]) -> FusionRing {
    let shape = crate::metric_groups::Shape::new(orders);
    let n = shape.size();
    let labels = (0..n).map(|x| shape.name(x)).collect();
    let dual = (0..n).map(|x| shape.neg(x)).collect();
    let entries = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).map(|(a, b)| (a, b, shape.add(a, b), 1));
    FusionRing::new(labels, 0, dual, entries.collect::<Vec<_>>()).expect("group ring is well formed")
}
