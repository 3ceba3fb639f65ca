//! Exact arithmetic in the cyclotomic field Q(ζ_N).
//!
//! An element is stored in the power basis 1, ζ, …, ζ^{φ(N)-1} of
//! Q[x]/Φ_N(x) with arbitrary-precision rational coordinates. The conductor
//! is not required to be minimal: operations on elements of different
//! conductors lift both sides to the least common multiple via
//! ζ_N ↦ ζ_M^{M/N}, and equality is decided after lifting.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest conductor accepted by the constructors.
pub const MAX_CONDUCTOR: u32 = 1 << 14;

/// Euler's totient.
pub fn totient(n: u32) -> u32 {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn mobius(n: u32) -> i32 {
    let mut n = n;
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Coefficients (lowest degree first) of the cyclotomic polynomial Φ_n,
/// via Φ_n = Π_{d | n} (x^d - 1)^{μ(n/d)}.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    assert!(n >= 1, "conductor must be positive");
    let divisors: Vec<u32> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
    let mut poly: Vec<i128> = vec![1];
    // Multiply first, divide afterwards; every division is exact.
    for &d in &divisors {
        if mobius(n / d) == 1 {
            let d = d as usize;
            let mut next = vec![0i128; poly.len() + d];
            for (k, &c) in poly.iter().enumerate() {
                next[k + d] += c;
                next[k] -= c;
            }
            poly = next;
        }
    }
    for &d in &divisors {
        if mobius(n / d) == -1 {
            // p = q (x^d - 1)  =>  q_k = q_{k-d} - p_k
            let d = d as usize;
            let qlen = poly.len() - d;
            let mut q = vec![0i128; qlen];
            for k in 0..qlen {
                let prev = if k >= d { q[k - d] } else { 0 };
                q[k] = prev - poly[k];
            }
            poly = q;
        }
    }
    // Φ_1 = x - 1 comes out of the product directly; normalize sign for safety.
    if poly.last().copied() == Some(-1) {
        poly.iter_mut().for_each(|c| *c = -*c);
    }
    poly.into_iter()
        .map(|c| i64::try_from(c).expect("cyclotomic coefficient overflow"))
        .collect()
}

/// An exact element of Q(ζ_N).
#[derive(Clone, Debug)]
pub struct CycNum {
    conductor: u32,
    coeffs: Vec<BigRational>,
}

fn check_conductor(n: u32) {
    assert!(
        (1..=MAX_CONDUCTOR).contains(&n),
        "conductor {n} outside 1..={MAX_CONDUCTOR}"
    );
}

/// Reduce a vector indexed by exponents of ζ_n modulo Φ_n.
fn reduce(n: u32, mut acc: Vec<BigRational>) -> Vec<BigRational> {
    let phi = cyclotomic_polynomial(n);
    let deg = phi.len() - 1;
    for k in (deg..acc.len()).rev() {
        if acc[k].is_zero() {
            continue;
        }
        let c = std::mem::replace(&mut acc[k], BigRational::zero());
        for (j, &p) in phi.iter().enumerate().take(deg) {
            if p != 0 {
                let idx = k - deg + j;
                acc[idx] -= &c * BigRational::from_integer(BigInt::from(p));
            }
        }
    }
    acc.truncate(deg);
    acc.resize(deg, BigRational::zero());
    acc
}

impl CycNum {
    pub fn zero(conductor: u32) -> Self {
        check_conductor(conductor);
        CycNum {
            conductor,
            coeffs: vec![BigRational::zero(); totient(conductor) as usize],
        }
    }

    pub fn one(conductor: u32) -> Self {
        Self::from_rational(BigRational::one(), conductor)
    }

    pub fn from_integer(value: i64, conductor: u32) -> Self {
        Self::from_rational(BigRational::from_integer(value.into()), conductor)
    }

    pub fn from_rational(value: BigRational, conductor: u32) -> Self {
        let mut x = Self::zero(conductor);
        x.coeffs[0] = value;
        x
    }

    /// Build from power-basis coordinates; the length must be φ(conductor).
    pub fn from_coeffs(conductor: u32, coeffs: Vec<BigRational>) -> Result<Self> {
        if !(1..=MAX_CONDUCTOR).contains(&conductor) {
            return Err(Error::Parse(format!("conductor {conductor} out of range")));
        }
        let phi = totient(conductor) as usize;
        if coeffs.len() != phi {
            return Err(Error::Parse(format!(
                "conductor {conductor} needs {phi} coefficients, got {}",
                coeffs.len()
            )));
        }
        Ok(CycNum { conductor, coeffs })
    }

    /// ζ_n^k at conductor n exactly (no reduction of the conductor).
    pub fn zeta(conductor: u32, k: i64) -> Self {
        check_conductor(conductor);
        let n = conductor as usize;
        let e = k.rem_euclid(conductor as i64) as usize;
        let mut acc = vec![BigRational::zero(); n];
        acc[e] = BigRational::one();
        CycNum {
            conductor,
            coeffs: reduce(conductor, acc),
        }
    }

    /// e^{2πi p/q}, normalized to conductor q / gcd(p, q).
    pub fn root(numerator: i64, denominator: u32) -> Self {
        assert!(denominator >= 1, "denominator must be positive");
        let q = denominator as i64;
        let p = numerator.rem_euclid(q);
        let g = p.gcd(&q);
        let g = if g == 0 { q } else { g };
        Self::zeta((q / g) as u32, p / g)
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|r| r.is_one())
    }

    /// The rational value if the element lies in Q.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    /// Re-express at conductor `m`, which must be a multiple of the current one.
    pub fn lift(&self, m: u32) -> Self {
        assert!(
            m.is_multiple_of(self.conductor),
            "cannot lift conductor {} to {m}",
            self.conductor
        );
        if m == self.conductor {
            return self.clone();
        }
        check_conductor(m);
        let step = (m / self.conductor) as usize;
        let mut acc = vec![BigRational::zero(); m as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc[(k * step) % m as usize] += c;
            }
        }
        CycNum {
            conductor: m,
            coeffs: reduce(m, acc),
        }
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        if self.conductor == other.conductor {
            return (self.clone(), other.clone());
        }
        let m = self.conductor.lcm(&other.conductor);
        (self.lift(m), other.lift(m))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&BigRational, &BigRational) -> BigRational) -> Self {
        if self.conductor == other.conductor {
            let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f(a, b)).collect();
            return CycNum {
                conductor: self.conductor,
                coeffs,
            };
        }
        let (a, b) = self.common(other);
        a.zip_with(&b, f)
    }

    fn mul_same(&self, other: &Self) -> Self {
        let n = self.conductor as usize;
        let mut acc = vec![BigRational::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    acc[(i + j) % n] += a * b;
                }
            }
        }
        CycNum {
            conductor: self.conductor,
            coeffs: reduce(self.conductor, acc),
        }
    }

    /// Complex conjugation, the Galois automorphism ζ ↦ ζ^{-1}.
    pub fn conj(&self) -> Self {
        let n = self.conductor as usize;
        let mut acc = vec![BigRational::zero(); n];
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc[(n - k) % n] += c;
            }
        }
        CycNum {
            conductor: self.conductor,
            coeffs: reduce(self.conductor, acc),
        }
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        CycNum {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(Self::from_rational(r.recip(), self.conductor));
        }
        // x^{-1} = conj(x) / (x conj(x)) whenever the norm to the real
        // subfield is rational; this covers roots of unity and most catalog
        // values.
        let bar = self.conj();
        let norm = self.mul_same(&bar);
        if let Some(r) = norm.as_rational() {
            return Ok(bar.scale(&r.recip()));
        }
        let phi: Vec<BigRational> = cyclotomic_polynomial(self.conductor)
            .into_iter()
            .map(|c| BigRational::from_integer(c.into()))
            .collect();
        let u = poly::inverse_mod(&self.coeffs, &phi).ok_or(Error::DivisionByZero)?;
        let mut coeffs = u;
        coeffs.resize(self.coeffs.len(), BigRational::zero());
        Ok(CycNum {
            conductor: self.conductor,
            coeffs,
        })
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, exp: i64) -> Result<Self> {
        let mut base = if exp < 0 { self.inv()? } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = Self::one(self.conductor);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Evaluate at ζ_N = e^{2πi/N} in double precision.
    pub fn to_complex(&self) -> Complex64 {
        let n = self.conductor as f64;
        let mut z = Complex64::new(0.0, 0.0);
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let v = c.to_f64().unwrap_or(f64::NAN);
            z += Complex64::from_polar(v, 2.0 * std::f64::consts::PI * k as f64 / n);
        }
        z
    }

    /// If the element is a root of unity e^{2πi p/q}, return (p, q) in lowest terms.
    pub fn as_root_of_unity(&self) -> Option<(i64, u32)> {
        let n = if self.conductor % 2 == 1 {
            2 * self.conductor
        } else {
            self.conductor
        };
        let x = self.lift(n);
        let nonzero = x.coeffs.iter().filter(|c| !c.is_zero()).count();
        if nonzero == 0 || nonzero > 8 {
            return None;
        }
        (0..n as i64).find_map(|k| {
            if Self::zeta(n, k) == x {
                let g = (k as u32).gcd(&n).max(1);
                let g = if k == 0 { n } else { g };
                Some((k / g as i64, n / g))
            } else {
                None
            }
        })
    }
}

impl PartialEq for CycNum {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = self.common(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CycNum {}

impl Add for &CycNum {
    type Output = CycNum;
    fn add(self, rhs: &CycNum) -> CycNum {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &CycNum {
    type Output = CycNum;
    fn sub(self, rhs: &CycNum) -> CycNum {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul for &CycNum {
    type Output = CycNum;
    fn mul(self, rhs: &CycNum) -> CycNum {
        if self.conductor == rhs.conductor {
            return self.mul_same(rhs);
        }
        let (a, b) = self.common(rhs);
        a.mul_same(&b)
    }
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for CycNum {
            type Output = CycNum;
            fn $method(self, rhs: CycNum) -> CycNum {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}

pub(crate) fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `p/q` with an explicit denominator, as used in report JSON.
pub fn rational_to_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational `{s}`"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{}", fmt_rational(r));
        }
        if let Some((p, q)) = self.as_root_of_unity() {
            return write!(f, "e({p}/{q})");
        }
        let n = self.conductor;
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let term = match k {
                0 => fmt_rational(&mag),
                _ => {
                    let z = if k == 1 {
                        format!("z{n}")
                    } else {
                        format!("z{n}^{k}")
                    };
                    if mag.is_one() {
                        z
                    } else {
                        format!("{}*{z}", fmt_rational(&mag))
                    }
                }
            };
            write!(f, "{term}")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct CycJson {
    n: u32,
    c: Vec<[String; 2]>,
}

impl Serialize for CycNum {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        CycJson {
            n: self.conductor,
            c: self
                .coeffs
                .iter()
                .map(|r| [r.numer().to_string(), r.denom().to_string()])
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CycNum {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = CycJson::deserialize(deserializer)?;
        let coeffs = raw
            .c
            .iter()
            .map(|[p, q]| parse_rational(&format!("{p}/{q}")))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        CycNum::from_coeffs(raw.n, coeffs).map_err(D::Error::custom)
    }
}

mod poly {
    //! Dense polynomials over Q, lowest degree first.

    use num_rational::BigRational;
    use num_traits::{One, Zero};

    fn trim(p: &mut Vec<BigRational>) {
        while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
            p.pop();
        }
        if p.is_empty() {
            p.push(BigRational::zero());
        }
    }

    fn is_zero(p: &[BigRational]) -> bool {
        p.iter().all(Zero::is_zero)
    }

    fn divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
        let mut r = a.to_vec();
        trim(&mut r);
        let mut b = b.to_vec();
        trim(&mut b);
        let db = b.len() - 1;
        let lead = b[db].clone();
        if r.len() < b.len() {
            return (vec![BigRational::zero()], r);
        }
        let mut q = vec![BigRational::zero(); r.len() - db];
        for k in (db..r.len()).rev() {
            if r[k].is_zero() {
                continue;
            }
            let c = &r[k] / &lead;
            for (j, bj) in b.iter().enumerate() {
                r[k - db + j] -= &c * bj;
            }
            q[k - db] = c;
        }
        r.truncate(db.max(1));
        trim(&mut r);
        trim(&mut q);
        (q, r)
    }

    fn mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        trim(&mut out);
        out
    }

    fn sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let n = a.len().max(b.len());
        let mut out = vec![BigRational::zero(); n];
        for (i, x) in a.iter().enumerate() {
            out[i] += x;
        }
        for (i, y) in b.iter().enumerate() {
            out[i] -= y;
        }
        trim(&mut out);
        out
    }

    /// u with u·a ≡ 1 (mod m), if gcd(a, m) = 1.
    pub fn inverse_mod(a: &[BigRational], m: &[BigRational]) -> Option<Vec<BigRational>> {
        let (mut r0, mut r1) = (m.to_vec(), a.to_vec());
        trim(&mut r0);
        trim(&mut r1);
        let (mut s0, mut s1) = (vec![BigRational::zero()], vec![BigRational::one()]);
        while !is_zero(&r1) {
            let (q, r) = divrem(&r0, &r1);
            let s = sub(&s0, &mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        // r0 = gcd, s0·a ≡ r0 (mod m)
        if r0.len() != 1 || r0[0].is_zero() {
            return None;
        }
        let c = r0[0].recip();
        let (_, u) = divrem(&s0.iter().map(|x| x * &c).collect::<Vec<_>>(), m);
        Some(u)
    }
}
