//! Premodular data (fusion ring, dimensions, twists, S-matrix), the framed
//! S-matrix, transparency, centralizers and the Müger centre.
//!
//! All data is taken in the ribbon gauge: the two pivotal dimensions agree
//! and equal `d_a`. The braiding orientation is fixed by the balancing
//! convention
//!
//! ```text
//! s_{a,b} = θ_a^{-1} θ_b^{-1} Σ_c N^c_{a,b} θ_c d_c
//! ```
//!
//! which is what [`balanced_s_matrix`] computes and what validation enforces.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cyclotomic::CycNum;
use crate::error::{Error, Result};
use crate::fusion_ring::FusionRing;
use crate::violation::Violation;

pub type CycMatrix = Vec<Vec<CycNum>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PremodularData {
    ring: FusionRing,
    conductor: u32,
    dims: Vec<CycNum>,
    twists: Vec<CycNum>,
    s: CycMatrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DegeneracyKind {
    Nondegenerate,
    SlightlyDegenerate,
    OtherDegenerate,
}

impl DegeneracyKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            DegeneracyKind::Nondegenerate => "nondegenerate",
            DegeneracyKind::SlightlyDegenerate => "slightly_degenerate",
            DegeneracyKind::OtherDegenerate => "other_degenerate",
        }
    }
}

impl fmt::Display for DegeneracyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Classification of the Müger centre.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentreClassification {
    pub kind: DegeneracyKind,
    /// Transparent labels in input order.
    pub transparent: Vec<usize>,
    /// The transparent fermion, present iff the kind is `SlightlyDegenerate`.
    pub fermion: Option<usize>,
    /// Transparent simples with θ = 1.
    pub bosons: usize,
    /// Transparent simples with θ = -1.
    pub fermions: usize,
}

/// s-matrix synthesized from the balancing formula.
pub fn balanced_s_matrix(ring: &FusionRing, dims: &[CycNum], twists: &[CycNum]) -> Result<CycMatrix> {
    let r = ring.rank();
    let inv: Vec<CycNum> = twists.iter().map(CycNum::inv).collect::<Result<_>>()?;
    let weighted: Vec<CycNum> = (0..r).map(|c| &twists[c] * &dims[c]).collect();
    let mut s = vec![Vec::<CycNum>::with_capacity(r); r];
    for a in 0..r {
        for b in 0..r {
            let entry = if b < a {
                s[b][a].clone()
            } else {
                balanced_entry(ring, &weighted, &inv, a, b)
            };
            s[a].push(entry);
        }
    }
    Ok(s)
}

fn balanced_entry(ring: &FusionRing, weighted: &[CycNum], inv_twists: &[CycNum], a: usize, b: usize) -> CycNum {
    let conductor = weighted[0].conductor();
    let mut sum = CycNum::zero(conductor);
    for &(c, n) in ring.product(a, b) {
        let term = if n == 1 {
            weighted[c].clone()
        } else {
            &weighted[c] * &CycNum::from_integer(i64::from(n), conductor)
        };
        sum = &sum + &term;
    }
    &(&inv_twists[a] * &inv_twists[b]) * &sum
}

fn lift_all(values: Vec<CycNum>, conductor: u32, what: &str) -> Result<Vec<CycNum>> {
    values
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            if !conductor.is_multiple_of(v.conductor()) {
                Err(Error::Validation(vec![Violation::ConductorMismatch {
                    detail: format!(
                        "{what}[{i}] has conductor {}, which does not divide {conductor}",
                        v.conductor()
                    ),
                }]))
            } else {
                Ok(v.lift(conductor))
            }
        })
        .collect()
}

impl PremodularData {
    /// Assemble a datum, lifting every value to `conductor`. When `s` is
    /// `None` it is synthesized from the balancing formula. No axioms are
    /// checked beyond shapes; see [`PremodularData::validate`].
    pub fn from_parts(
        ring: FusionRing,
        conductor: u32,
        dims: Vec<CycNum>,
        twists: Vec<CycNum>,
        s: Option<CycMatrix>,
    ) -> Result<Self> {
        let r = ring.rank();
        let shape = |detail: String| Error::Validation(vec![Violation::ShapeMismatch { detail }]);
        if conductor == 0 || conductor > crate::cyclotomic::MAX_CONDUCTOR {
            return Err(shape(format!("conductor {conductor} out of range")));
        }
        if dims.len() != r || twists.len() != r {
            return Err(shape(format!(
                "expected {r} dims and twists, got {} and {}",
                dims.len(),
                twists.len()
            )));
        }
        let dims = lift_all(dims, conductor, "dims")?;
        let twists = lift_all(twists, conductor, "twists")?;
        let s = match s {
            Some(s) => {
                if s.len() != r || s.iter().any(|row| row.len() != r) {
                    return Err(shape(format!("s must be {r}x{r}")));
                }
                s.into_iter()
                    .map(|row| lift_all(row, conductor, "s"))
                    .collect::<Result<_>>()?
            }
            None => {
                let zero: Vec<Violation> = twists
                    .iter()
                    .enumerate()
                    .filter(|(_, t)| t.is_zero())
                    .map(|(a, _)| Violation::ZeroTwist {
                        a: ring.label(a).to_string(),
                    })
                    .collect();
                if !zero.is_empty() {
                    return Err(Error::Validation(zero));
                }
                balanced_s_matrix(&ring, &dims, &twists)?
            }
        };
        Ok(PremodularData {
            ring,
            conductor,
            dims,
            twists,
            s,
        })
    }

    /// [`PremodularData::from_parts`] followed by validation.
    pub fn validated(
        ring: FusionRing,
        conductor: u32,
        dims: Vec<CycNum>,
        twists: Vec<CycNum>,
        s: Option<CycMatrix>,
    ) -> Result<Self> {
        let data = Self::from_parts(ring, conductor, dims, twists, s)?;
        let violations = data.validate();
        if violations.is_empty() {
            Ok(data)
        } else {
            Err(Error::Validation(violations))
        }
    }

    pub fn ring(&self) -> &FusionRing {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.ring.rank()
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn dims(&self) -> &[CycNum] {
        &self.dims
    }

    pub fn twists(&self) -> &[CycNum] {
        &self.twists
    }

    pub fn s_matrix(&self) -> &CycMatrix {
        &self.s
    }

    pub fn dim(&self, a: usize) -> &CycNum {
        &self.dims[a]
    }

    pub fn twist(&self, a: usize) -> &CycNum {
        &self.twists[a]
    }

    pub fn s(&self, a: usize, b: usize) -> &CycNum {
        &self.s[a][b]
    }

    pub fn label(&self, a: usize) -> &str {
        self.ring.label(a)
    }

    /// Check every premodular invariant; the ring axioms come first and, if
    /// any fail, nothing else is checked.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = self.ring.validate();
        if !out.is_empty() {
            return out;
        }
        let r = self.rank();
        let ring = &self.ring;
        let name = |i: usize| ring.label(i).to_string();
        let unit = ring.unit();

        if !self.dims[unit].is_one() {
            out.push(Violation::UnitDimension);
        }
        if !self.twists[unit].is_one() {
            out.push(Violation::UnitTwist);
        }
        for a in 0..r {
            if self.dims[a].is_zero() {
                out.push(Violation::ZeroDimension { a: name(a) });
            }
            if self.twists[a].is_zero() {
                out.push(Violation::ZeroTwist { a: name(a) });
            }
            let ad = ring.dual(a);
            if a < ad {
                if self.dims[a] != self.dims[ad] {
                    out.push(Violation::DualDimension { a: name(a) });
                }
                if self.twists[a] != self.twists[ad] {
                    out.push(Violation::DualTwist { a: name(a) });
                }
            }
        }

        for a in 0..r {
            for b in a..r {
                let lhs = &self.dims[a] * &self.dims[b];
                let mut rhs = CycNum::zero(self.conductor);
                for &(c, n) in ring.product(a, b) {
                    rhs = &rhs + &self.dims[c].scale(&num_rational::BigRational::from_integer(n.into()));
                }
                if lhs != rhs {
                    out.push(Violation::DimensionCharacterViolation { a: name(a), b: name(b) });
                }
            }
        }

        let twists_ok = self.twists.iter().all(|t| !t.is_zero());
        if twists_ok {
            let inv: Vec<CycNum> = self.twists.iter().map(|t| t.inv().expect("nonzero")).collect();
            let weighted: Vec<CycNum> = (0..r).map(|c| &self.twists[c] * &self.dims[c]).collect();
            for a in 0..r {
                for b in a..r {
                    if balanced_entry(ring, &weighted, &inv, a, b) != self.s[a][b] {
                        out.push(Violation::BalancingViolation { a: name(a), b: name(b) });
                    }
                }
            }
        }

        for a in 0..r {
            for b in (a + 1)..r {
                if self.s[a][b] != self.s[b][a] {
                    out.push(Violation::SMatrixAsymmetric { a: name(a), b: name(b) });
                }
            }
        }
        for a in 0..r {
            if self.s[unit][a] != self.dims[a] {
                out.push(Violation::SUnitRow { a: name(a) });
            }
        }
        for a in 0..r {
            for b in 0..r {
                if self.s[a][b].conj() != self.s[ring.dual(a)][b] {
                    out.push(Violation::SConjugation { a: name(a), b: name(b) });
                }
            }
        }
        out
    }

    /// Framed S-matrix entry S̃_{a,b} = s_{a,b} / (d_a d_b).
    pub fn framed_s_at(&self, a: usize, b: usize) -> Result<CycNum> {
        self.s[a][b].checked_div(&(&self.dims[a] * &self.dims[b]))
    }

    pub fn framed_s_entry(&self, a: &str, b: &str) -> Result<CycNum> {
        self.framed_s_at(self.ring.index_of(a)?, self.ring.index_of(b)?)
    }

    /// Whether the double braiding of `a` and `b` is trivial, i.e. S̃_{a,b} = 1.
    /// Tested as s_{a,b} = d_a d_b, which is equivalent since dimensions are
    /// nonzero.
    pub fn centralizes(&self, a: usize, b: usize) -> bool {
        self.s[a][b] == &self.dims[a] * &self.dims[b]
    }

    /// Labels transparent to every label of `sub`. `sub` must be closed under
    /// fusion and duals; the result always is.
    pub fn relative_centralizer(&self, sub: &[usize]) -> Result<Vec<usize>> {
        if sub.iter().any(|&x| x >= self.rank()) {
            return Err(Error::NotASubcategory("label index out of range".into()));
        }
        if !self.ring.is_closed(sub) {
            return Err(Error::NotASubcategory(format!(
                "{{{}}} is not closed under fusion and duals",
                sub.iter().map(|&x| self.label(x)).collect::<Vec<_>>().join(", ")
            )));
        }
        let out: Vec<usize> = (0..self.rank())
            .filter(|&b| sub.iter().all(|&x| self.centralizes(b, x)))
            .collect();
        if !self.ring.is_closed(&out) {
            return Err(Error::CrossCheckMismatch(
                "centralizer is not closed under fusion".into(),
            ));
        }
        Ok(out)
    }

    /// [`PremodularData::relative_centralizer`] by label names.
    pub fn relative_centralizer_of(&self, sub: &[&str]) -> Result<Vec<String>> {
        let idx = sub
            .iter()
            .map(|s| self.ring.index_of(s))
            .collect::<Result<Vec<_>>>()?;
        let mut idx = idx;
        idx.sort_unstable();
        idx.dedup();
        Ok(self
            .relative_centralizer(&idx)?
            .into_iter()
            .map(|b| self.label(b).to_string())
            .collect())
    }

    /// Labels of the Müger centre.
    pub fn transparent_labels(&self) -> Vec<usize> {
        let all: Vec<usize> = (0..self.rank()).collect();
        self.relative_centralizer(&all)
            .expect("the full label set is a subcategory")
    }

    /// The sub-datum on `subset`, which must be a fusion subcategory.
    pub fn restrict(&self, subset: &[usize]) -> Result<PremodularData> {
        let ring = self.ring.restrict(subset)?;
        let pick = |v: &[CycNum]| subset.iter().map(|&a| v[a].clone()).collect::<Vec<_>>();
        let s = subset.iter().map(|&a| pick(&self.s[a])).collect();
        PremodularData::validated(ring, self.conductor, pick(&self.dims), pick(&self.twists), Some(s))
    }

    /// The Müger centre as a (symmetric) premodular datum.
    pub fn mueger_centre(&self) -> Result<PremodularData> {
        self.restrict(&self.transparent_labels())
    }

    pub fn classify_degeneracy(&self) -> CentreClassification {
        let transparent = self.transparent_labels();
        let one = CycNum::one(self.conductor);
        let minus_one = CycNum::from_integer(-1, self.conductor);
        let bosons = transparent.iter().filter(|&&a| self.twists[a] == one).count();
        let fermions = transparent.iter().filter(|&&a| self.twists[a] == minus_one).count();
        let unit = self.ring.unit();
        let (kind, fermion) = if transparent.len() == 1 {
            (DegeneracyKind::Nondegenerate, None)
        } else if transparent.len() == 2 {
            let e = transparent.iter().copied().find(|&a| a != unit).unwrap();
            if self.ring.product(e, e) == [(unit, 1)] && self.twists[e] == minus_one {
                (DegeneracyKind::SlightlyDegenerate, Some(e))
            } else {
                (DegeneracyKind::OtherDegenerate, None)
            }
        } else {
            (DegeneracyKind::OtherDegenerate, None)
        };
        CentreClassification {
            kind,
            transparent,
            fermion,
            bosons,
            fermions,
        }
    }

    /// Σ_a d_a².
    pub fn global_dimension(&self) -> CycNum {
        self.dims
            .iter()
            .fold(CycNum::zero(self.conductor), |acc, d| &acc + &(d * d))
    }

    /// Σ_a d_a² θ_a.
    pub fn gauss_sum(&self) -> CycNum {
        self.dims
            .iter()
            .zip(&self.twists)
            .fold(CycNum::zero(self.conductor), |acc, (d, t)| &acc + &(&(d * d) * t))
    }
}

impl fmt::Display for CentreClassification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)
    }
}

/// Matrix product over CycNum (test and report helper).
pub fn cyc_matmul(a: &CycMatrix, b: &CycMatrix) -> CycMatrix {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    let conductor = a[0][0].conductor();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    (0..b.len()).fold(CycNum::zero(conductor), |acc, k| {
                        if a[i][k].is_zero() || b[k][j].is_zero() {
                            acc
                        } else {
                            &acc + &(&a[i][k] * &b[k][j])
                        }
                    })
                })
                .collect()
        })
        .collect()
}
