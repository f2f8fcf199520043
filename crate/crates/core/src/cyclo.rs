//! Exact arithmetic in cyclotomic fields `Q(z)`, `z` a primitive `n`-th root
//! of unity.
//!
//! Elements are coefficient vectors in the power basis `1, z, ..., z^(phi(n)-1)`.
//! Mixed-order operands are embedded into the field of the lcm order first.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycloError {
    #[error("root order must be positive")]
    ZeroOrder,
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot embed Q(z_{from}) into Q(z_{to}): {to} is not a multiple of {from}")]
    NotAMultiple { from: u32, to: u32 },
    #[error("expected {expected} coefficients for order {n}, got {got}")]
    CoefficientCount { n: u32, expected: usize, got: usize },
    #[error("bad rational {0:?}")]
    BadRational(String),
}

/// Precomputed data for one cyclotomic field.
#[derive(Debug)]
struct Field {
    degree: usize,
    /// Monic `Phi_n`, low degree first, leading coefficient dropped.
    modulus: Vec<BigInt>,
    /// `z^k` reduced, for `k` in `0..n`.
    powers: Vec<Vec<BigInt>>,
}

fn field_cache() -> &'static RwLock<HashMap<u32, Arc<Field>>> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<Field>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn field(n: u32) -> Arc<Field> {
    if let Some(f) = field_cache().read().expect("cache lock").get(&n) {
        return f.clone();
    }
    let phi = cyclotomic_polynomial(n);
    let degree = phi.len() - 1;
    let modulus = phi[..degree].to_vec();
    let mut powers = Vec::with_capacity(n as usize);
    let mut cur = vec![BigInt::zero(); degree];
    cur[0] = BigInt::one();
    for _ in 0..n {
        powers.push(cur.clone());
        // multiply by z and reduce
        let top = cur[degree - 1].clone();
        for i in (1..degree).rev() {
            cur[i] = cur[i - 1].clone();
        }
        cur[0] = BigInt::zero();
        if !top.is_zero() {
            for i in 0..degree {
                cur[i] -= &top * &modulus[i];
            }
        }
    }
    let f = Arc::new(Field {
        degree,
        modulus,
        powers,
    });
    field_cache()
        .write()
        .expect("cache lock")
        .insert(n, f.clone());
    f
}

/// Integer coefficients of `Phi_n`, low degree first.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    assert!(n > 0, "cyclotomic polynomial of order 0");
    // x^n - 1 divided by Phi_d for every proper divisor d
    let mut p: Vec<BigInt> = vec![BigInt::zero(); n as usize + 1];
    p[0] = -BigInt::one();
    p[n as usize] = BigInt::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            p = divide_monic(&p, &cyclotomic_polynomial(d));
        }
    }
    p
}

fn divide_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qlen = num.len() - dd;
    let mut quot = vec![BigInt::zero(); qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (i, d) in den.iter().enumerate() {
            rem[k + i] -= &c * d;
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

/// Euler's totient, the degree of `Q(z_n)`.
pub fn totient(n: u32) -> usize {
    (1..=n).filter(|k| k.gcd(&n) == 1).count()
}

/// An element of `Q(z_n)`.
#[derive(Clone, Debug)]
pub struct CycloScalar {
    n: u32,
    coeffs: Vec<BigRational>,
}

impl CycloScalar {
    pub fn zero(n: u32) -> Self {
        let d = field(n.max(1)).degree;
        CycloScalar {
            n: n.max(1),
            coeffs: vec![BigRational::zero(); d],
        }
    }

    pub fn one(n: u32) -> Self {
        Self::from_rational(n, BigRational::one())
    }

    pub fn from_rational(n: u32, q: BigRational) -> Self {
        let mut s = Self::zero(n);
        s.coeffs[0] = q;
        s
    }

    pub fn from_int(n: u32, k: i64) -> Self {
        Self::from_rational(n, BigRational::from_integer(k.into()))
    }

    /// `z_n^k`.
    pub fn root_of_unity(k: i64, n: u32) -> Self {
        let n = n.max(1);
        let f = field(n);
        let k = k.rem_euclid(n as i64) as usize;
        CycloScalar {
            n,
            coeffs: f.powers[k]
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        }
    }

    /// `sum_k counts[k] z_n^k`.
    pub fn from_root_counts(n: u32, counts: &[i64]) -> Self {
        let f = field(n);
        let mut acc = vec![BigInt::zero(); f.degree];
        for (k, &c) in counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let c = BigInt::from(c);
            for (a, p) in acc.iter_mut().zip(&f.powers[k % n as usize]) {
                if !p.is_zero() {
                    *a += &c * p;
                }
            }
        }
        CycloScalar {
            n,
            coeffs: acc.into_iter().map(BigRational::from_integer).collect(),
        }
    }

    pub fn from_coeffs(n: u32, coeffs: Vec<BigRational>) -> Result<Self, CycloError> {
        if n == 0 {
            return Err(CycloError::ZeroOrder);
        }
        let expected = field(n).degree;
        if coeffs.len() != expected {
            return Err(CycloError::CoefficientCount {
                n,
                expected,
                got: coeffs.len(),
            });
        }
        Ok(CycloScalar { n, coeffs })
    }

    pub fn root_order(&self) -> u32 {
        self.n
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, if this element lies in `Q`.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| &self.coeffs[0])
    }

    /// Image under the inclusion `Q(z_n) -> Q(z_m)`, `z_n -> z_m^(m/n)`.
    pub fn embed(&self, m: u32) -> Result<Self, CycloError> {
        if m == 0 {
            return Err(CycloError::ZeroOrder);
        }
        if !m.is_multiple_of(self.n) {
            return Err(CycloError::NotAMultiple {
                from: self.n,
                to: m,
            });
        }
        if m == self.n {
            return Ok(self.clone());
        }
        let f = field(m);
        let step = (m / self.n) as usize;
        let mut out = vec![BigRational::zero(); f.degree];
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, p) in out.iter_mut().zip(&f.powers[(k * step) % m as usize]) {
                if !p.is_zero() {
                    *o += c * BigRational::from_integer(p.clone());
                }
            }
        }
        Ok(CycloScalar { n: m, coeffs: out })
    }

    /// Embed both operands into the field of order `lcm(n_a, n_b)`.
    pub fn lift_pair(a: &Self, b: &Self) -> (Self, Self) {
        let m = a.n.lcm(&b.n);
        (
            a.embed(m).expect("lcm is a multiple"),
            b.embed(m).expect("lcm is a multiple"),
        )
    }

    pub fn inverse(&self) -> Result<Self, CycloError> {
        if self.is_zero() {
            return Err(CycloError::DivisionByZero);
        }
        let f = field(self.n);
        let mut modulus: Vec<BigRational> = f
            .modulus
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        modulus.push(BigRational::one());
        let a = trim(self.coeffs.clone());
        // extended Euclid: s * a + t * m = g, g constant
        let (g, s) = ext_gcd(a, modulus);
        debug_assert_eq!(g.len(), 1);
        let g0 = g[0].clone();
        let mut coeffs: Vec<BigRational> = s.into_iter().map(|c| c / &g0).collect();
        coeffs.resize(f.degree, BigRational::zero());
        Ok(CycloScalar { n: self.n, coeffs })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, CycloError> {
        Ok(self * &other.inverse()?)
    }

    fn mul_same(&self, other: &Self) -> Self {
        let f = field(self.n);
        let d = f.degree;
        let mut prod = vec![BigRational::zero(); 2 * d - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        for k in (d..prod.len()).rev() {
            let c = std::mem::take(&mut prod[k]);
            if c.is_zero() {
                continue;
            }
            for (i, m) in f.modulus.iter().enumerate() {
                if !m.is_zero() {
                    prod[k - d + i] -= &c * BigRational::from_integer(m.clone());
                }
            }
        }
        prod.truncate(d);
        CycloScalar {
            n: self.n,
            coeffs: prod,
        }
    }

    /// Multiply by `z_n^k` for the element's own order.
    pub fn mul_root(&self, k: i64) -> Self {
        self * &Self::root_of_unity(k, self.n)
    }

    /// Smallest order `m` dividing the current one whose field contains this
    /// element, together with its image there.
    pub fn normalized(&self) -> Self {
        let mut best = self.clone();
        for m in 1..=self.n {
            if !self.n.is_multiple_of(m) || m >= best.n {
                continue;
            }
            if let Some(c) = self.restrict(m) {
                best = c;
                break;
            }
        }
        best
    }

    fn restrict(&self, m: u32) -> Option<Self> {
        // solve embed(x) == self by comparing against embedded basis vectors
        let f = field(m);
        let images: Vec<Self> = (0..f.degree)
            .map(|k| {
                Self::root_of_unity(k as i64, m)
                    .embed(self.n)
                    .expect("divides")
            })
            .collect();
        let coeffs = solve_linear(&images, self)?;
        Some(CycloScalar { n: m, coeffs })
    }
}

/// Solve `sum x_k images[k] = target` over `Q` (columns are linearly
/// independent), returning `None` when unsolvable.
fn solve_linear(images: &[CycloScalar], target: &CycloScalar) -> Option<Vec<BigRational>> {
    let rows = target.coeffs.len();
    let cols = images.len();
    let mut m: Vec<Vec<BigRational>> = (0..rows)
        .map(|r| {
            let mut row: Vec<BigRational> = images.iter().map(|c| c.coeffs[r].clone()).collect();
            row.push(target.coeffs[r].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let factor = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x -= &factor * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][cols].clone();
    }
    Some(x)
}

fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = a.to_vec();
    if a.len() < b.len() {
        return (vec![BigRational::zero()], trim(rem));
    }
    let lead = b.last().expect("nonempty").clone();
    let mut quot = vec![BigRational::zero(); a.len() - b.len() + 1];
    for k in (0..quot.len()).rev() {
        let c = &rem[k + b.len() - 1] / &lead;
        if c.is_zero() {
            continue;
        }
        for (i, d) in b.iter().enumerate() {
            rem[k + i] -= &c * d;
        }
        quot[k] = c;
    }
    (trim(quot), trim(rem))
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(out)
}

fn is_zero_poly(p: &[BigRational]) -> bool {
    p.iter().all(Zero::is_zero)
}

/// Returns `(g, s)` with `s * a = g (mod m)` and `g = gcd(a, m)`.
fn ext_gcd(a: Vec<BigRational>, m: Vec<BigRational>) -> (Vec<BigRational>, Vec<BigRational>) {
    let (mut r0, mut r1) = (a, m);
    let (mut s0, mut s1) = (vec![BigRational::one()], vec![BigRational::zero()]);
    while !is_zero_poly(&r1) {
        let (q, r) = poly_divrem(&r0, &r1);
        let s = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    (r0, s0)
}

impl PartialEq for CycloScalar {
    fn eq(&self, other: &Self) -> bool {
        if self.n == other.n {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = Self::lift_pair(self, other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CycloScalar {}

macro_rules! binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&CycloScalar> for &CycloScalar {
            type Output = CycloScalar;
            fn $method(self, rhs: &CycloScalar) -> CycloScalar {
                let f: fn(&CycloScalar, &CycloScalar) -> CycloScalar = $body;
                if self.n == rhs.n {
                    f(self, rhs)
                } else {
                    let (a, b) = CycloScalar::lift_pair(self, rhs);
                    f(&a, &b)
                }
            }
        }
        impl $trait<CycloScalar> for CycloScalar {
            type Output = CycloScalar;
            fn $method(self, rhs: CycloScalar) -> CycloScalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&CycloScalar> for CycloScalar {
            type Output = CycloScalar;
            fn $method(self, rhs: &CycloScalar) -> CycloScalar {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| CycloScalar {
    n: a.n,
    coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect(),
});
binop!(Sub, sub, |a, b| CycloScalar {
    n: a.n,
    coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect(),
});
binop!(Mul, mul, |a, b| a.mul_same(b));

impl Neg for &CycloScalar {
    type Output = CycloScalar;
    fn neg(self) -> CycloScalar {
        CycloScalar {
            n: self.n,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CycloScalar {
    type Output = CycloScalar;
    fn neg(self) -> CycloScalar {
        -&self
    }
}

impl std::ops::AddAssign<&CycloScalar> for CycloScalar {
    fn add_assign(&mut self, rhs: &CycloScalar) {
        if self.n == rhs.n {
            for (x, y) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                *x += y;
            }
        } else {
            *self = &*self + rhs;
        }
    }
}

/// Field operation selector for [`field_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn field_arith(
    a: &CycloScalar,
    b: &CycloScalar,
    op: FieldOp,
) -> Result<CycloScalar, CycloError> {
    Ok(match op {
        FieldOp::Add => a + b,
        FieldOp::Sub => a - b,
        FieldOp::Mul => a * b,
        FieldOp::Div => a.checked_div(b)?,
    })
}

fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational, CycloError> {
    let bad = || CycloError::BadRational(s.to_string());
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

impl fmt::Display for CycloScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => fmt_rational(c),
                1 => format!("{}*z", fmt_rational(c)),
                _ => format!("{}*z^{k}", fmt_rational(c)),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ScalarFile {
    n: u32,
    coeffs: Vec<String>,
}

impl Serialize for CycloScalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ScalarFile {
            n: self.n,
            coeffs: self.coeffs.iter().map(fmt_rational).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycloScalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let file = ScalarFile::deserialize(d)?;
        let coeffs = file
            .coeffs
            .iter()
            .map(|c| parse_rational(c))
            .collect::<Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)?;
        CycloScalar::from_coeffs(file.n, coeffs).map_err(serde::de::Error::custom)
    }
}
