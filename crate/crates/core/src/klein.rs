//! η-dimensions and the Klein invariant of the two Lagrangian summands L±,
//! decategorified to the Grothendieck ring.
//!
//! κ(L±) is computed twice: from the closed form
//! ½(#{a = a*} ± #{a* = e⊗a}) and as trace(P± D), where P± = ½(1 ± M_e) are
//! the fermion idempotents and D the duality permutation. Only the
//! decategorified value is modelled; the categorified trace is out of reach of
//! this data.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::cyclotomic::{rational_to_string, CycNum};
use crate::error::{Error, Result};
use crate::premodular::{DegeneracyKind, PremodularData};

/// η(a) = θ_a d_a.
pub fn eta_at(data: &PremodularData, a: usize) -> CycNum {
    data.twist(a) * data.dim(a)
}

pub fn eta_scalar(data: &PremodularData, label: &str) -> Result<CycNum> {
    Ok(eta_at(data, data.ring().index_of(label)?))
}

fn ser_rational<S: Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational_to_string(r))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum KappaVerdict {
    #[serde(rename = "extension_exists_S")]
    ExtensionExistsSClass,
    #[serde(rename = "inconsistent")]
    Inconsistent,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KappaReport {
    pub fermion: String,
    pub n_self_dual: usize,
    pub n_e_twisted: usize,
    #[serde(serialize_with = "ser_rational")]
    pub kappa_plus: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub kappa_minus: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub matrix_kappa_plus: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub matrix_kappa_minus: BigRational,
    pub verdict: KappaVerdict,
}

/// trace(½(1 + sign·M_e) · D) over exact rationals.
fn matrix_trace(data: &PremodularData, e: usize, sign: i64) -> BigRational {
    let ring = data.ring();
    let r = ring.rank();
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let m_e = ring.fusion_matrix(e);
    let p: Vec<Vec<BigRational>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    let id = if i == j { BigRational::one() } else { BigRational::zero() };
                    (id + BigRational::from_integer(BigInt::from(sign * m_e[i][j]))) * &half
                })
                .collect()
        })
        .collect();
    let d = ring.dual_permutation_matrix();
    // Only the diagonal of the product is needed.
    (0..r).fold(BigRational::zero(), |acc, i| {
        (0..r)
            .filter(|&k| d[k][i] != 0)
            .fold(acc, |acc, k| acc + &p[i][k] * BigRational::from_integer(d[k][i].into()))
    })
}

/// κ(L±) for slightly degenerate data.
pub fn kappa_lagrangian(data: &PremodularData) -> Result<KappaReport> {
    let cls = data.classify_degeneracy();
    let e = cls
        .fermion
        .ok_or_else(|| Error::NotSlightlyDegenerate(cls.kind.to_string()))?;
    let ring = data.ring();
    let r = ring.rank();
    let n_self_dual = (0..r).filter(|&a| ring.dual(a) == a).count();
    let n_e_twisted = (0..r)
        .filter(|&a| ring.product(e, a) == [(ring.dual(a), 1)])
        .count();
    let half = |n: i64| BigRational::new(BigInt::from(n), BigInt::from(2));
    let kappa_plus = half(n_self_dual as i64 + n_e_twisted as i64);
    let kappa_minus = half(n_self_dual as i64 - n_e_twisted as i64);
    let matrix_kappa_plus = matrix_trace(data, e, 1);
    let matrix_kappa_minus = matrix_trace(data, e, -1);
    if matrix_kappa_plus != kappa_plus || matrix_kappa_minus != kappa_minus {
        return Err(Error::CrossCheckMismatch(format!(
            "closed form ({}, {}) != matrix trace ({}, {})",
            rational_to_string(&kappa_plus),
            rational_to_string(&kappa_minus),
            rational_to_string(&matrix_kappa_plus),
            rational_to_string(&matrix_kappa_minus),
        )));
    }
    let verdict = if kappa_minus > BigRational::zero() && n_e_twisted == 0 {
        KappaVerdict::ExtensionExistsSClass
    } else {
        KappaVerdict::Inconsistent
    };
    Ok(KappaReport {
        fermion: ring.label(e).to_string(),
        n_self_dual,
        n_e_twisted,
        kappa_plus,
        kappa_minus,
        matrix_kappa_plus,
        matrix_kappa_minus,
        verdict,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum VerdictKind {
    #[serde(rename = "already_nondegenerate")]
    AlreadyNondegenerate,
    #[serde(rename = "extension_exists_S")]
    ExtensionExistsS,
    #[serde(rename = "outside_scope")]
    OutsideScope,
    #[serde(rename = "inconsistent")]
    Inconsistent,
}

impl VerdictKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            VerdictKind::AlreadyNondegenerate => "already_nondegenerate",
            VerdictKind::ExtensionExistsS => "extension_exists_S",
            VerdictKind::OutsideScope => "outside_scope",
            VerdictKind::Inconsistent => "inconsistent",
        }
    }
}

/// Reference values of κ on the two possible centres, for context.
pub const KAPPA_REFERENCE: [(&str, i64); 2] = [("S", 1), ("T", -1)];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub message: String,
    pub kappa: Option<KappaReport>,
}

pub fn main_theorem_verdict(data: &PremodularData) -> Verdict {
    let cls = data.classify_degeneracy();
    match cls.kind {
        DegeneracyKind::Nondegenerate => Verdict {
            kind: VerdictKind::AlreadyNondegenerate,
            message: "already nondegenerate (M = B)".into(),
            kappa: None,
        },
        DegeneracyKind::OtherDegenerate => Verdict {
            kind: VerdictKind::OutsideScope,
            message: "outside scope: Tannakian component present in the Muger centre".into(),
            kappa: None,
        },
        DegeneracyKind::SlightlyDegenerate => match kappa_lagrangian(data) {
            Ok(k) if k.verdict == KappaVerdict::ExtensionExistsSClass => Verdict {
                kind: VerdictKind::ExtensionExistsS,
                message: format!(
                    "Z(Sigma B) is of class S (kappa(S) = 1, kappa(T) = -1); kappa(L-) = {} > 0; \
                     a minimal nondegenerate extension exists",
                    rational_to_string(&k.kappa_minus)
                ),
                kappa: Some(k),
            },
            Ok(k) => Verdict {
                kind: VerdictKind::Inconsistent,
                message: format!(
                    "inconsistent Klein data: kappa(L-) = {}, {} e-twisted self-dual simples",
                    rational_to_string(&k.kappa_minus),
                    k.n_e_twisted
                ),
                kappa: Some(k),
            },
            Err(err) => Verdict {
                kind: VerdictKind::Inconsistent,
                message: err.to_string(),
                kappa: None,
            },
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::catalog_get;
    use crate::metric_groups::MetricGroup;

    fn data(name: &str) -> PremodularData {
        catalog_get(name).unwrap().payload.to_premodular()
    }

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    /// Independent count: build a* and e⊗a by looking at the full fusion table.
    fn brute_counts(d: &PremodularData, e: usize) -> (usize, usize) {
        let ring = d.ring();
        let r = ring.rank();
        let unit = ring.unit();
        let star = |a: usize| (0..r).find(|&b| ring.mult(a, b, unit) == 1).unwrap();
        let self_dual = (0..r).filter(|&a| star(a) == a).count();
        let twisted = (0..r)
            .filter(|&a| (0..r).all(|c| ring.mult(e, a, c) == u32::from(c == star(a))))
            .count();
        (self_dual, twisted)
    }

    #[test]
    fn eta_examples() {
        let svec = data("svec");
        assert!(eta_scalar(&svec, "(0)").unwrap().is_one());
        assert_eq!(eta_scalar(&svec, "(1)").unwrap(), CycNum::from_integer(-1, 1));
        let ising = data("ising:1");
        let expected = &CycNum::zeta(16, 1) * &(&CycNum::zeta(8, 1) + &CycNum::zeta(8, -1));
        assert_eq!(eta_scalar(&ising, "sigma").unwrap(), expected);
        assert!(matches!(eta_scalar(&ising, "tau"), Err(Error::UnknownLabel(_))));
    }

    #[test]
    fn svec_kappa() {
        let k = kappa_lagrangian(&data("svec")).unwrap();
        assert_eq!((k.n_self_dual, k.n_e_twisted), (2, 0));
        assert_eq!((k.kappa_plus.clone(), k.kappa_minus.clone()), (q(1), q(1)));
        assert_eq!(k.verdict, KappaVerdict::ExtensionExistsSClass);
        let v = serde_json::to_value(&k).unwrap();
        assert_eq!(v["kappa_minus"], "1/1");
        assert_eq!(v["verdict"], "extension_exists_S");
    }

    #[test]
    fn pointed_kappa_examples() {
        for name in ["svec-x-semion", "pointed:2x4:1/2,1/8"] {
            let d = data(name);
            let e = d.classify_degeneracy().fermion.unwrap();
            let k = kappa_lagrangian(&d).unwrap();
            assert_eq!((k.n_self_dual, k.n_e_twisted), brute_counts(&d, e));
            assert_eq!(k.n_self_dual, 4);
            assert_eq!((k.kappa_plus, k.kappa_minus), (q(2), q(2)));
        }
    }

    #[test]
    fn kappa_requires_slight_degeneracy() {
        assert!(matches!(kappa_lagrangian(&data("semion")), Err(Error::NotSlightlyDegenerate(_))));
    }

    #[test]
    fn verdicts() {
        assert_eq!(main_theorem_verdict(&data("svec")).kind, VerdictKind::ExtensionExistsS);
        assert_eq!(main_theorem_verdict(&data("semion")).kind, VerdictKind::AlreadyNondegenerate);
        assert_eq!(main_theorem_verdict(&data("z4-q:2")).kind, VerdictKind::OutsideScope);
        assert_eq!(main_theorem_verdict(&data("rep-z2")).kind, VerdictKind::OutsideScope);
    }

    #[test]
    fn random_pointed_cross_check() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..30 {
            let g: MetricGroup = crate::metric_groups::random_slightly_degenerate(&mut rng, 32);
            let d = g.to_premodular();
            let k = kappa_lagrangian(&d).unwrap();
            let e = d.classify_degeneracy().fermion.unwrap();
            assert_eq!((k.n_self_dual, k.n_e_twisted), brute_counts(&d, e));
            assert_eq!(k.n_e_twisted, 0);
            assert!(k.kappa_minus >= BigRational::new(1.into(), 2.into()));
            assert_eq!(eta_at(&d, e), CycNum::from_integer(-1, 1));
        }
    }
}
