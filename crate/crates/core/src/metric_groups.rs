//! Finite metric groups (A, q): pointed braided fusion categories given by a
//! finite abelian group and a Q/Z-valued quadratic form.
//!
//! A = Z_{n_1} × … × Z_{n_k} is stored in mixed radix (last coordinate
//! fastest) and q as a full table of numerators over one common denominator.
//! Every law is checked by brute force, which is fine under the order cap of
//! [`MAX_GROUP_ORDER`].
//!
//! Pointed minimal nondegenerate extensions of a slightly degenerate (A, q)
//! are enumerated coset by coset: an overgroup A' ⊃ A of index two is
//! generated by A and one element t with 2t = a₀ ∈ A, and only the class of
//! a₀ in A/2A matters. On A' the form is fixed by q, by the value q'(t) (one
//! of four solutions of 4·q'(t) = q(a₀)) and by the character
//! f = b'(t, ·)|_A, which must satisfy 2f = b(a₀, ·) and f(a₀) = q(a₀).
//! The overgroup is then put into invariant-factor form via Smith normal
//! form and the candidates are deduplicated up to isometries fixing the
//! fermion.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use rayon::prelude::*;

use crate::cyclotomic::{self, CycNum};
use crate::error::{Error, Result};
use crate::fusion_ring::group_ring;
use crate::premodular::PremodularData;
use crate::violation::Violation;

/// Largest group order handled anywhere in this module.
pub const MAX_GROUP_ORDER: usize = 4096;

/// Largest common denominator accepted for q.
const MAX_DENOMINATOR: u64 = 1 << 20;

/// Mixed-radix arithmetic on Z_{n_1} × … × Z_{n_k}.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Shape {
    orders: Vec<u32>,
    strides: Vec<usize>,
    size: usize,
}

impl Shape {
    pub fn new(orders: &[u32]) -> Self {
        let mut strides = vec![0; orders.len()];
        let mut size = 1usize;
        for i in (0..orders.len()).rev() {
            strides[i] = size;
            size *= orders[i] as usize;
        }
        Shape {
            orders: orders.to_vec(),
            strides,
            size,
        }
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn coords(&self, x: usize) -> Vec<u32> {
        self.orders
            .iter()
            .zip(&self.strides)
            .map(|(&n, &s)| ((x / s) % n as usize) as u32)
            .collect()
    }

    pub fn index(&self, coords: &[u32]) -> usize {
        coords
            .iter()
            .zip(&self.orders)
            .zip(&self.strides)
            .map(|((&c, &n), &s)| (c % n) as usize * s)
            .sum()
    }

    /// Element with coordinates `coords` reduced mod the orders (any sign).
    pub fn index_signed(&self, coords: &[i64]) -> usize {
        coords
            .iter()
            .zip(&self.orders)
            .zip(&self.strides)
            .map(|((&c, &n), &s)| c.rem_euclid(i64::from(n)) as usize * s)
            .sum()
    }

    /// The i-th standard generator.
    pub fn generator(&self, i: usize) -> usize {
        if self.orders[i] == 1 {
            0
        } else {
            self.strides[i]
        }
    }

    pub fn add(&self, x: usize, y: usize) -> usize {
        let mut out = 0;
        for ((&n, &s), _) in self.orders.iter().zip(&self.strides).zip(0..) {
            let n = n as usize;
            let cx = (x / s) % n;
            let cy = (y / s) % n;
            out += ((cx + cy) % n) * s;
        }
        out
    }

    pub fn neg(&self, x: usize) -> usize {
        let mut out = 0;
        for (&n, &s) in self.orders.iter().zip(&self.strides) {
            let n = n as usize;
            let c = (x / s) % n;
            out += ((n - c) % n) * s;
        }
        out
    }

    pub fn scale(&self, k: u64, x: usize) -> usize {
        let mut out = 0;
        for (&n, &s) in self.orders.iter().zip(&self.strides) {
            let n = n as u64;
            let c = ((x / s) as u64) % n;
            out += ((c * (k % n)) % n) as usize * s;
        }
        out
    }

    pub fn element_order(&self, x: usize) -> u64 {
        self.coords(x)
            .iter()
            .zip(&self.orders)
            .map(|(&c, &n)| u64::from(n) / u64::from(c).gcd(&u64::from(n)))
            .fold(1, |acc, o| acc.lcm(&o))
    }

    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1u64, |acc, &n| acc.lcm(&u64::from(n)))
    }

    /// `(c_1,…,c_k)`.
    pub fn name(&self, x: usize) -> String {
        let c: Vec<String> = self.coords(x).iter().map(u32::to_string).collect();
        format!("({})", c.join(","))
    }

    pub fn parse_name(&self, key: &str) -> Option<usize> {
        let inner = key.trim().strip_prefix('(')?.strip_suffix(')')?;
        let coords: Vec<u32> = if inner.trim().is_empty() {
            Vec::new()
        } else {
            inner
                .split(',')
                .map(|c| c.trim().parse().ok())
                .collect::<Option<_>>()?
        };
        if coords.len() != self.rank() || coords.iter().zip(&self.orders).any(|(&c, &n)| c >= n) {
            return None;
        }
        Some(self.index(&coords))
    }
}

/// A finite abelian group with a quadratic form q: A → Q/Z.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricGroup {
    shape: Shape,
    /// Smallest common denominator of the q values.
    den: u64,
    /// q(x) = num[x] / den with 0 ≤ num[x] < den.
    num: Vec<u64>,
}

fn reduce_fraction(p: i128, q: i128) -> (u64, u64) {
    let p = p.rem_euclid(q);
    let g = p.gcd(&q);
    ((p / g) as u64, (q / g) as u64)
}

impl MetricGroup {
    fn check_orders(orders: &[u32]) -> Result<()> {
        if let Some(&n) = orders.iter().find(|&&n| n == 0) {
            return Err(Error::Validation(vec![Violation::InvalidOrder { order: u64::from(n) }]));
        }
        let size = orders
            .iter()
            .try_fold(1usize, |acc, &n| acc.checked_mul(n as usize))
            .unwrap_or(usize::MAX);
        if size > MAX_GROUP_ORDER {
            return Err(Error::Validation(vec![Violation::GroupTooLarge { order: size }]));
        }
        Ok(())
    }

    /// Build from q values given as fractions `(p, q)` in element order. The
    /// values are reduced into [0, 1); the quadratic laws are not checked
    /// here (see [`MetricGroup::validate`]).
    pub fn from_fractions(orders: &[u32], values: &[(i64, u64)]) -> Result<Self> {
        Self::check_orders(orders)?;
        let shape = Shape::new(orders);
        if values.len() != shape.size() {
            return Err(Error::Validation(vec![Violation::ShapeMismatch {
                detail: format!("expected {} q values, got {}", shape.size(), values.len()),
            }]));
        }
        let reduced: Vec<(u64, u64)> = values
            .iter()
            .map(|&(p, q)| {
                if q == 0 {
                    Err(Error::Parse("zero denominator in q".into()))
                } else {
                    Ok(reduce_fraction(i128::from(p), i128::from(q)))
                }
            })
            .collect::<Result<_>>()?;
        let mut den = 1u64;
        for &(_, q) in &reduced {
            den = den.lcm(&q);
            if den > MAX_DENOMINATOR {
                return Err(Error::Parse(format!("q denominators exceed {MAX_DENOMINATOR}")));
            }
        }
        let num = reduced.iter().map(|&(p, q)| p * (den / q)).collect();
        Ok(MetricGroup { shape, den, num })
    }

    /// Build from numerators over a common denominator, canonicalizing it.
    pub fn from_numerators(orders: &[u32], den: u64, nums: &[u64]) -> Result<Self> {
        let values: Vec<(i64, u64)> = nums.iter().map(|&p| ((p % den) as i64, den)).collect();
        Self::from_fractions(orders, &values)
    }

    pub fn from_rationals(orders: &[u32], values: &[BigRational]) -> Result<Self> {
        let fr = values
            .iter()
            .map(|r| {
                let p = r.numer().to_i64();
                let q = r.denom().to_u64();
                p.zip(q)
                    .ok_or_else(|| Error::Parse(format!("q value {r} too large")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_fractions(orders, &fr)
    }

    /// q(x) = Σ_i q_i x_i² + Σ_{i<j} b_ij x_i x_j, with `offdiag` listing b_ij
    /// in the order (0,1), (0,2), …, (1,2), …. Missing off-diagonal values
    /// are zero.
    pub fn from_generators(orders: &[u32], diag: &[BigRational], offdiag: &[BigRational]) -> Result<Self> {
        Self::check_orders(orders)?;
        let k = orders.len();
        if diag.len() != k || offdiag.len() > k * (k.saturating_sub(1)) / 2 {
            return Err(Error::Parse(format!(
                "{k} generators need {k} diagonal and at most {} off-diagonal values",
                k * k.saturating_sub(1) / 2
            )));
        }
        let shape = Shape::new(orders);
        let mut pairs = Vec::new();
        for i in 0..k {
            for j in (i + 1)..k {
                pairs.push((i, j));
            }
        }
        let values: Vec<BigRational> = (0..shape.size())
            .map(|x| {
                let c = shape.coords(x);
                let mut v = BigRational::zero();
                for i in 0..k {
                    let ci = BigRational::from_integer((u64::from(c[i]) * u64::from(c[i])).into());
                    v += &diag[i] * ci;
                }
                for (b, &(i, j)) in offdiag.iter().zip(&pairs) {
                    let cij = BigRational::from_integer((u64::from(c[i]) * u64::from(c[j])).into());
                    v += b * cij;
                }
                v
            })
            .collect();
        Self::from_rationals(orders, &values)
    }

    /// Orthogonal direct sum.
    pub fn orthogonal_sum(&self, other: &MetricGroup) -> Result<MetricGroup> {
        let mut orders = self.shape.orders.clone();
        orders.extend_from_slice(other.shape.orders());
        Self::check_orders(&orders)?;
        let den = self.den.lcm(&other.den);
        let (sa, sb) = (den / self.den, den / other.den);
        let m = other.size();
        let nums: Vec<u64> = (0..self.size() * m)
            .map(|x| (self.num[x / m] * sa + other.num[x % m] * sb) % den)
            .collect();
        Self::from_numerators(&orders, den, &nums)
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn orders(&self) -> &[u32] {
        self.shape.orders()
    }

    pub fn size(&self) -> usize {
        self.shape.size()
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    pub fn numerators(&self) -> &[u64] {
        &self.num
    }

    /// q(x) as a reduced fraction in [0, 1).
    pub fn q(&self, x: usize) -> (u64, u64) {
        let g = self.num[x].gcd(&self.den);
        (self.num[x] / g, self.den / g)
    }

    pub fn q_rational(&self, x: usize) -> BigRational {
        BigRational::new(self.num[x].into(), self.den.into())
    }

    /// Numerator over `den` of b(x, y) = q(x+y) - q(x) - q(y).
    pub fn bilinear_num(&self, x: usize, y: usize) -> u64 {
        let d = self.den;
        (self.num[self.shape.add(x, y)] + 2 * d - self.num[x] - self.num[y]) % d
    }

    pub fn element_name(&self, x: usize) -> String {
        self.shape.name(x)
    }

    /// Check the quadratic law q(nx) = n² q(x) and bi-additivity of b by
    /// brute force. At most 1000 witnesses are returned.
    pub fn validate(&self) -> Vec<Violation> {
        const MAX_WITNESSES: usize = 1000;
        let mut out = Vec::new();
        let size = self.size();
        if size > MAX_GROUP_ORDER {
            out.push(Violation::GroupTooLarge { order: size });
            return out;
        }
        let exp = self.shape.exponent();
        let d = u128::from(self.den);
        'quad: for x in 0..size {
            for n in 0..=exp {
                let lhs = u128::from(self.num[self.shape.scale(n, x)]);
                let rhs = (u128::from(n) * u128::from(n) * u128::from(self.num[x])) % d;
                if lhs != rhs {
                    out.push(Violation::QuadraticLawViolation {
                        x: self.shape.name(x),
                        n,
                    });
                    if out.len() >= MAX_WITNESSES {
                        break 'quad;
                    }
                }
            }
        }
        // Additivity in the first slot for each generator implies it for all
        // elements by induction; symmetry is built into the definition of b.
        let den = self.den;
        'bil: for i in 0..self.shape.rank() {
            let g = self.shape.generator(i);
            for y in 0..size {
                let gy = self.shape.add(g, y);
                for z in 0..size {
                    let lhs = self.bilinear_num(gy, z);
                    let rhs = (self.bilinear_num(g, z) + self.bilinear_num(y, z)) % den;
                    if lhs != rhs {
                        out.push(Violation::BilinearityViolation {
                            x: self.shape.name(g),
                            y: self.shape.name(y),
                            z: self.shape.name(z),
                        });
                        if out.len() >= MAX_WITNESSES {
                            break 'bil;
                        }
                    }
                }
            }
        }
        out
    }

    /// {x : b(x, y) = 0 for all y}.
    pub fn radical(&self) -> Vec<usize> {
        let gens: Vec<usize> = (0..self.shape.rank()).map(|i| self.shape.generator(i)).collect();
        (0..self.size())
            .filter(|&x| gens.iter().all(|&g| self.bilinear_num(x, g) == 0))
            .collect()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.radical().len() == 1
    }

    /// The transparent fermion when the radical is {0, e} with q(e) = 1/2.
    pub fn slight_fermion(&self) -> Option<usize> {
        match self.radical().as_slice() {
            [0, e] if self.q(*e) == (1, 2) => Some(*e),
            _ => None,
        }
    }

    /// Σ_x e^{2πi q(x)} at conductor `den`.
    pub fn gauss_sum(&self) -> CycNum {
        let mut counts = vec![0i64; self.den as usize];
        for &n in &self.num {
            counts[n as usize] += 1;
        }
        let conductor = u32::try_from(self.den).expect("denominator fits in u32");
        counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .fold(CycNum::zero(conductor), |acc, (k, &c)| {
                &acc + &CycNum::zeta(conductor, k as i64).scale(&BigRational::from_integer(c.into()))
            })
    }

    /// s with σ = √|A|·e^{2πi s/8}, defined iff the radical is trivial.
    pub fn signature_mod8(&self) -> Option<u8> {
        if !self.is_nondegenerate() {
            return None;
        }
        let z = self.gauss_sum().to_complex() / (self.size() as f64).sqrt();
        (0..8u8).find(|&s| {
            let w = num_complex::Complex64::from_polar(1.0, std::f64::consts::PI * f64::from(s) / 4.0);
            (z - w).norm() < 1e-9
        })
    }

    /// The premodular datum of the pointed category: fusion by the group law,
    /// d ≡ 1, θ_x = e^{2πi q(x)}, s_{x,y} = e^{2πi b(x,y)}.
    pub fn to_premodular(&self) -> PremodularData {
        let ring = group_ring(self.orders());
        let n = self.size();
        let conductor = u32::try_from(self.den).expect("denominator fits in u32");
        let twists = self.num.iter().map(|&k| CycNum::zeta(conductor, k as i64)).collect();
        let s = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| CycNum::zeta(conductor, self.bilinear_num(x, y) as i64))
                    .collect()
            })
            .collect();
        PremodularData::from_parts(ring, conductor, vec![CycNum::one(1); n], twists, Some(s))
            .expect("pointed datum is well formed")
    }

    /// q values scaled to denominator `l` (a multiple of `den`).
    fn scaled(&self, l: u64) -> Vec<u64> {
        let f = l / self.den;
        self.num.iter().map(|&n| n * f).collect()
    }
}

fn cap_check(a: &MetricGroup, b: &MetricGroup) -> Result<()> {
    for g in [a, b] {
        if g.size() > MAX_GROUP_ORDER {
            return Err(Error::GroupsTooLarge {
                order: g.size(),
                cap: MAX_GROUP_ORDER,
            });
        }
    }
    Ok(())
}

/// Search for an isometry φ: A → B (q_B ∘ φ = q_A), optionally with
/// φ(point.0) = point.1. Returns the element map.
pub fn find_isometry(a: &MetricGroup, b: &MetricGroup, point: Option<(usize, usize)>) -> Result<Option<Vec<usize>>> {
    cap_check(a, b)?;
    if a.size() != b.size() {
        return Ok(None);
    }
    let l = a.den.lcm(&b.den);
    let (qa, qb) = (a.scaled(l), b.scaled(l));
    let (sa, sb) = (&a.shape, &b.shape);
    let n = a.size();

    let mut ma: Vec<(u64, u64)> = (0..n).map(|x| (sa.element_order(x), qa[x])).collect();
    let mut mb: Vec<(u64, u64)> = (0..n).map(|y| (sb.element_order(y), qb[y])).collect();
    if let Some((pa, pb)) = point {
        if ma[pa] != mb[pb] {
            return Ok(None);
        }
    }
    ma.sort_unstable();
    mb.sort_unstable();
    if ma != mb {
        return Ok(None);
    }

    let bil = |q: &[u64], s: &Shape, x: usize, y: usize| (q[s.add(x, y)] + 2 * l - q[x] - q[y]) % l;
    let gens: Vec<usize> = (0..sa.rank()).map(|i| sa.generator(i)).collect();
    let gen_orders: Vec<u64> = gens.iter().map(|&g| sa.element_order(g)).collect();
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .zip(&gen_orders)
        .map(|(&g, &o)| {
            (0..n)
                .filter(|&y| sb.element_order(y) == o && qb[y] == qa[g])
                .collect()
        })
        .collect();

    let mut images = vec![0usize; gens.len()];
    let found = search(0, &gens, &candidates, &mut images, &|i, y, images: &[usize]| {
        (0..i).all(|j| bil(&qb, sb, y, images[j]) == bil(&qa, sa, gens[i], gens[j]))
    }, &mut |images: &[usize]| {
        let map = extend_hom(sa, sb, images);
        let mut seen = vec![false; n];
        for &y in &map {
            if seen[y] {
                return None;
            }
            seen[y] = true;
        }
        if let Some((pa, pb)) = point {
            if map[pa] != pb {
                return None;
            }
        }
        debug_assert!((0..n).all(|x| qb[map[x]] == qa[x]));
        Some(map)
    });
    Ok(found)
}

fn search<F, G>(
    i: usize,
    gens: &[usize],
    candidates: &[Vec<usize>],
    images: &mut Vec<usize>,
    compatible: &F,
    finish: &mut G,
) -> Option<Vec<usize>>
where
    F: Fn(usize, usize, &[usize]) -> bool,
    G: FnMut(&[usize]) -> Option<Vec<usize>>,
{
    if i == gens.len() {
        return finish(images);
    }
    for &y in &candidates[i] {
        if compatible(i, y, images) {
            images[i] = y;
            if let Some(found) = search(i + 1, gens, candidates, images, compatible, finish) {
                return Some(found);
            }
        }
    }
    None
}

/// The homomorphism from `sa` to `sb` sending the standard generators to `images`.
fn extend_hom(sa: &Shape, sb: &Shape, images: &[usize]) -> Vec<usize> {
    (0..sa.size())
        .map(|x| {
            sa.coords(x)
                .iter()
                .zip(images)
                .fold(0, |acc, (&c, &y)| sb.add(acc, sb.scale(u64::from(c), y)))
        })
        .collect()
}

/// Whether an isometry A → B exists that maps `pt_a` to `pt_b`.
pub fn isometry_rel_point(a: &MetricGroup, b: &MetricGroup, pt_a: usize, pt_b: usize) -> Result<bool> {
    Ok(find_isometry(a, b, Some((pt_a, pt_b)))?.is_some())
}

/// Whether (A, q_A) and (B, q_B) are isometric.
pub fn isometric(a: &MetricGroup, b: &MetricGroup) -> Result<bool> {
    Ok(find_isometry(a, b, None)?.is_some())
}

/// Smith normal form of a square integer matrix. Returns the diagonal and
/// the unimodular V with U·M·V = diag for some unimodular U.
pub(crate) fn smith_normal_form(mut m: Vec<Vec<i64>>) -> (Vec<i64>, Vec<Vec<i64>>) {
    let n = m.len();
    let mut v: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    let swap_cols = |m: &mut Vec<Vec<i64>>, a: usize, b: usize| {
        for row in m.iter_mut() {
            row.swap(a, b);
        }
    };
    for t in 0..n {
        loop {
            let pivot = (t..n)
                .flat_map(|i| (t..n).map(move |j| (i, j)))
                .filter(|&(i, j)| m[i][j] != 0)
                .min_by_key(|&(i, j)| m[i][j].abs());
            let Some((pi, pj)) = pivot else {
                return (
                    (0..n).map(|i| m[i][i].abs()).collect(),
                    v,
                );
            };
            m.swap(t, pi);
            swap_cols(&mut m, t, pj);
            swap_cols(&mut v, t, pj);
            let p = m[t][t];
            let mut clean = true;
            for i in (t + 1)..n {
                let q = m[i][t] / p;
                if q != 0 {
                    for j in 0..n {
                        m[i][j] -= q * m[t][j];
                    }
                }
                clean &= m[i][t] == 0;
            }
            for j in (t + 1)..n {
                let q = m[t][j] / p;
                if q != 0 {
                    for i in 0..n {
                        m[i][j] -= q * m[i][t];
                    }
                    for row in v.iter_mut() {
                        row[j] -= q * row[t];
                    }
                }
                clean &= m[t][j] == 0;
            }
            if !clean {
                continue;
            }
            let bad = ((t + 1)..n).find(|&i| ((t + 1)..n).any(|j| m[i][j] % p != 0));
            match bad {
                Some(i) => {
                    for j in 0..n {
                        m[t][j] += m[i][j];
                    }
                }
                None => break,
            }
        }
    }
    ((0..n).map(|i| m[i][i].abs()).collect(), v)
}

/// One pointed minimal nondegenerate extension (A', q') of (A, q).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedExtension {
    pub group: MetricGroup,
    /// Image of the transparent fermion of A.
    pub fermion: usize,
    /// Images of the standard generators of A.
    pub embedding: Vec<usize>,
    pub gauss_sum: CycNum,
    pub signature: u8,
}

#[derive(Clone, Copy, Debug)]
pub struct ExtensionOptions {
    /// Upper bound on |A'|.
    pub max_order: usize,
    /// Deduplicate by isometries fixing the fermion (otherwise by any isometry).
    pub fix_fermion: bool,
}

impl Default for ExtensionOptions {
    fn default() -> Self {
        ExtensionOptions {
            max_order: 64,
            fix_fermion: true,
        }
    }
}

/// Enumerate the pointed minimal nondegenerate extensions of a slightly
/// degenerate metric group, up to isometry (fixing the fermion by default).
pub fn enumerate_pointed_extensions(mg: &MetricGroup, opts: ExtensionOptions) -> Result<Vec<PointedExtension>> {
    let fermion = mg.slight_fermion().ok_or_else(|| {
        let kind = mg.to_premodular().classify_degeneracy().kind;
        Error::NotSlightlyDegenerate(kind.to_string())
    })?;
    let order = 2 * mg.size();
    let cap = opts.max_order.min(MAX_GROUP_ORDER);
    if order > cap {
        return Err(Error::GroupsTooLarge { order, cap });
    }

    let shape = &mg.shape;
    let doubled: Vec<bool> = {
        let mut v = vec![false; mg.size()];
        (0..mg.size()).for_each(|a| v[shape.scale(2, a)] = true);
        v
    };
    let mut reps: Vec<usize> = Vec::new();
    for a in 0..mg.size() {
        if !reps.iter().any(|&r| doubled[shape.add(a, shape.neg(r))]) {
            reps.push(a);
        }
    }

    let batches: Vec<Result<Vec<PointedExtension>>> = reps
        .par_iter()
        .map(|&a0| extensions_for_coset(mg, fermion, a0))
        .collect();
    let mut candidates = Vec::new();
    for batch in batches {
        candidates.extend(batch?);
    }

    let mut kept: Vec<PointedExtension> = Vec::new();
    for cand in candidates {
        let mut duplicate = false;
        for k in &kept {
            if k.group.orders() != cand.group.orders() || k.signature != cand.signature {
                continue;
            }
            let point = opts.fix_fermion.then_some((cand.fermion, k.fermion));
            if find_isometry(&cand.group, &k.group, point)?.is_some() {
                duplicate = true;
                break;
            }
        }
        if !duplicate {
            kept.push(cand);
        }
    }
    kept.sort_by(compare_extensions);
    Ok(kept)
}

fn sorted_q(g: &MetricGroup) -> Vec<(u64, u64)> {
    let mut v: Vec<(u64, u64)> = (0..g.size()).map(|x| g.q(x)).collect();
    v.sort_unstable_by(|a, b| (u128::from(a.0) * u128::from(b.1)).cmp(&(u128::from(b.0) * u128::from(a.1))));
    v
}

fn compare_extensions(a: &PointedExtension, b: &PointedExtension) -> Ordering {
    a.group
        .orders()
        .len()
        .cmp(&b.group.orders().len())
        .then_with(|| a.group.orders().cmp(b.group.orders()))
        .then_with(|| a.signature.cmp(&b.signature))
        .then_with(|| sorted_q(&a.group).cmp(&sorted_q(&b.group)))
        .then_with(|| a.group.q(a.fermion).cmp(&b.group.q(b.fermion)))
        .then_with(|| a.group.num.cmp(&b.group.num))
        .then_with(|| a.fermion.cmp(&b.fermion))
}

/// Candidates on the overgroup generated by A and t with 2t = a0.
fn extensions_for_coset(mg: &MetricGroup, fermion: usize, a0: usize) -> Result<Vec<PointedExtension>> {
    let shape = &mg.shape;
    let k = shape.rank();
    let n = mg.size();

    // Relations: n_i e_i = 0 and 2t - a0 = 0.
    let a0c = shape.coords(a0);
    let mut rel = vec![vec![0i64; k + 1]; k + 1];
    for i in 0..k {
        rel[i][i] = i64::from(shape.orders[i]);
        rel[k][i] = -i64::from(a0c[i]);
    }
    rel[k][k] = 2;
    let (diag, v) = smith_normal_form(rel);
    let cols: Vec<usize> = (0..=k).filter(|&c| diag[c] > 1).collect();
    let mut order_cols: Vec<(i64, usize)> = cols.iter().map(|&c| (diag[c], c)).collect();
    order_cols.sort();
    let new_orders: Vec<u32> = order_cols.iter().map(|&(d, _)| d as u32).collect();
    let new_shape = Shape::new(&new_orders);
    debug_assert_eq!(new_shape.size(), 2 * n);

    // Coordinates of the old generators (e_0..e_{k-1}, t) in the new basis.
    let gen_images: Vec<usize> = (0..=k)
        .map(|j| {
            let coords: Vec<i64> = order_cols.iter().map(|&(_, c)| v[j][c]).collect();
            new_shape.index_signed(&coords)
        })
        .collect();
    let embed = |a: usize| -> usize {
        shape
            .coords(a)
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &c)| new_shape.add(acc, new_shape.scale(u64::from(c), gen_images[i])))
    };
    let image_of_pair = |a: usize, eps: bool| -> usize {
        let base = embed(a);
        if eps {
            new_shape.add(base, gen_images[k])
        } else {
            base
        }
    };
    let mut pair_to_new = vec![0usize; 2 * n];
    let mut seen = vec![false; 2 * n];
    for eps in [false, true] {
        for a in 0..n {
            let y = image_of_pair(a, eps);
            if seen[y] {
                return Err(Error::CrossCheckMismatch(
                    "overgroup coordinates are not a bijection".into(),
                ));
            }
            seen[y] = true;
            pair_to_new[usize::from(eps) * n + a] = y;
        }
    }

    // Everything over a common denominator L.
    let l = (4 * mg.den).lcm(&shape.exponent());
    let qs = mg.scaled(l);
    let bil = |x: usize, y: usize| (qs[shape.add(x, y)] + 2 * l - qs[x] - qs[y]) % l;

    // Values f(e_i) = m/n_i with 2 f(e_i) = b(a0, e_i).
    let mut choices: Vec<Vec<u64>> = Vec::with_capacity(k);
    for i in 0..k {
        let ni = u64::from(shape.orders[i]);
        let target = bil(a0, shape.generator(i));
        let opts: Vec<u64> = (0..ni).map(|m| m * (l / ni)).filter(|&f| (2 * f) % l == target).collect();
        if opts.is_empty() {
            return Ok(Vec::new());
        }
        choices.push(opts);
    }

    let mut out = Vec::new();
    let mut idx = vec![0usize; k];
    loop {
        let fgen: Vec<u64> = (0..k).map(|i| choices[i][idx[i]]).collect();
        let f: Vec<u64> = (0..n)
            .map(|a| {
                shape
                    .coords(a)
                    .iter()
                    .zip(&fgen)
                    .fold(0u64, |acc, (&c, &fi)| (acc + u64::from(c) * fi) % l)
            })
            .collect();
        if f[a0] == qs[a0] {
            for j in 0..4u64 {
                // 4 q'(t) = q(a0) mod 1
                let qt = (qs[a0] + j * l) / 4;
                let mut table = vec![0u64; 2 * n];
                for a in 0..n {
                    table[pair_to_new[a]] = qs[a];
                    table[pair_to_new[n + a]] = (qt + qs[a] + f[a]) % l;
                }
                let group = MetricGroup::from_numerators(&new_orders, l, &table)?;
                if !group.validate().is_empty() || !group.is_nondegenerate() {
                    continue;
                }
                let embedding: Vec<usize> = (0..k).map(|i| embed(shape.generator(i))).collect();
                let image_fermion = embed(fermion);
                // The centralizer of the image of A must be exactly {0, e}.
                let centralizer: Vec<usize> = (0..group.size())
                    .filter(|&y| embedding.iter().all(|&g| group.bilinear_num(g, y) == 0))
                    .collect();
                if centralizer != [0, image_fermion] && centralizer != [image_fermion, 0] {
                    continue;
                }
                let gauss_sum = group.gauss_sum();
                let signature = group
                    .signature_mod8()
                    .ok_or_else(|| Error::CrossCheckMismatch("nondegenerate form without signature".into()))?;
                out.push(PointedExtension {
                    group,
                    fermion: image_fermion,
                    embedding,
                    gauss_sum,
                    signature,
                });
            }
        }
        // next index tuple
        let mut pos = 0;
        loop {
            if pos == k {
                return Ok(out);
            }
            idx[pos] += 1;
            if idx[pos] < choices[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Allowed values for q(e_i) on a cyclic factor of order n, as numerators
/// over `2n` (n even) or `n` (n odd).
fn diag_denominator(n: u32) -> u32 {
    if n.is_multiple_of(2) {
        2 * n
    } else {
        n
    }
}

/// A uniformly random quadratic form on Z_{n_1} × … × Z_{n_k}.
pub fn random_form<R: Rng + ?Sized>(rng: &mut R, orders: &[u32]) -> Result<MetricGroup> {
    let k = orders.len();
    let diag: Vec<BigRational> = orders
        .iter()
        .map(|&n| {
            let d = diag_denominator(n);
            BigRational::new(rng.random_range(0..d).into(), d.into())
        })
        .collect();
    let mut off = Vec::new();
    for i in 0..k {
        for j in (i + 1)..k {
            let g = orders[i].gcd(&orders[j]);
            off.push(BigRational::new(rng.random_range(0..g).into(), g.into()));
        }
    }
    MetricGroup::from_generators(orders, &diag, &off)
}

fn random_orders<R: Rng + ?Sized>(rng: &mut R, max_order: usize, even: bool) -> Vec<u32> {
    const CHOICES: [u32; 7] = [2, 3, 4, 5, 6, 7, 8];
    loop {
        let k = rng.random_range(1..=3);
        let orders: Vec<u32> = (0..k).map(|_| CHOICES[rng.random_range(0..CHOICES.len())]).collect();
        let size: usize = orders.iter().map(|&n| n as usize).product();
        if size <= max_order && (!even || size.is_multiple_of(2)) {
            return orders;
        }
    }
}

/// A random slightly degenerate metric group with |A| ≤ `max_order`
/// (at least 2). Half of the draws are rejection-sampled from random forms,
/// the other half are sVec ⊕ (random nondegenerate form).
pub fn random_slightly_degenerate<R: Rng + ?Sized>(rng: &mut R, max_order: usize) -> MetricGroup {
    let svec = MetricGroup::from_fractions(&[2], &[(0, 1), (1, 2)]).expect("sVec");
    let max_order = max_order.max(2);
    if rng.random_bool(0.5) {
        for _ in 0..500 {
            let orders = random_orders(rng, max_order, true);
            if let Ok(g) = random_form(rng, &orders) {
                if g.slight_fermion().is_some() {
                    return g;
                }
            }
        }
    }
    if max_order >= 4 {
        for _ in 0..500 {
            let orders = random_orders(rng, max_order / 2, false);
            if let Ok(g) = random_form(rng, &orders) {
                if g.is_nondegenerate() {
                    return svec.orthogonal_sum(&g).expect("within cap");
                }
            }
        }
    }
    svec
}

/// Wire form of a metric group: `{"orders":[…], "q":{"(c1,…)":"p/q",…}}`.
#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub struct MetricGroupJson {
    pub orders: Vec<u32>,
    pub q: serde_json::Map<String, serde_json::Value>,
}

impl From<&MetricGroup> for MetricGroupJson {
    fn from(g: &MetricGroup) -> Self {
        let q = (0..g.size())
            .map(|x| {
                let (p, d) = g.q(x);
                (g.element_name(x), serde_json::Value::String(format!("{p}/{d}")))
            })
            .collect();
        MetricGroupJson {
            orders: g.orders().to_vec(),
            q,
        }
    }
}

impl TryFrom<MetricGroupJson> for MetricGroup {
    type Error = Error;

    /// Coverage problems (missing or unknown elements) are reported as a
    /// validation error; the quadratic laws are checked separately.
    fn try_from(raw: MetricGroupJson) -> Result<Self> {
        MetricGroup::check_orders(&raw.orders)?;
        let shape = Shape::new(&raw.orders);
        let mut values: Vec<Option<BigRational>> = vec![None; shape.size()];
        let mut violations = Vec::new();
        for (key, value) in &raw.q {
            let text = match value {
                serde_json::Value::String(s) => s.clone(),
                serde_json::Value::Number(n) => n.to_string(),
                other => return Err(Error::Parse(format!("q value for {key} is not a rational: {other}"))),
            };
            match shape.parse_name(key) {
                Some(x) => values[x] = Some(cyclotomic::parse_rational(&text)?),
                None => violations.push(Violation::UnknownElement { key: key.clone() }),
            }
        }
        for (x, v) in values.iter().enumerate() {
            if v.is_none() {
                violations.push(Violation::MissingElement {
                    element: shape.name(x),
                });
            }
        }
        if !violations.is_empty() {
            return Err(Error::Validation(violations));
        }
        let values: Vec<BigRational> = values.into_iter().map(Option::unwrap).collect();
        MetricGroup::from_rationals(&raw.orders, &values)
    }
}

/// Group elements as coordinate tuples, keyed for reports.
pub fn element_coords(g: &MetricGroup, x: usize) -> Vec<u32> {
    g.shape.coords(x)
}

/// Histogram of q values, used by reports.
pub fn q_histogram(g: &MetricGroup) -> BTreeMap<(u64, u64), usize> {
    let mut h = BTreeMap::new();
    for x in 0..g.size() {
        *h.entry(g.q(x)).or_insert(0) += 1;
    }
    h
}
