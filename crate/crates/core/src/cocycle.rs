//! 2-cocycles with values in roots of unity, stored as exponent tables.
//!
//! A cocycle of order `n` on a group `H` maps `(x, y)` to `z_n^exps[x][y]`.
//! Its group is a standalone table; for a subgroup of an ambient group use
//! [`Subgroup::induced_group`], so that index `k` is the `k`-th element of
//! the subgroup.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclo::CycloScalar;
use crate::finite_group::{Elem, Group, Subgroup};
use crate::snf::{smith_normal_form, IntMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CocycleError {
    #[error("root order must be positive")]
    ZeroOrder,
    #[error("exponent table has shape mismatch: expected {expected}x{expected}")]
    Shape { expected: usize },
    #[error("exponent {value} at ({x}, {y}) is not below the root order {n}")]
    ExponentOutOfRange {
        x: Elem,
        y: Elem,
        value: u32,
        n: u32,
    },
    #[error("cocycle condition fails at ({0}, {1}, {2})")]
    NotACocycle(Elem, Elem, Elem),
    #[error("cocycle is not normalized at element {0}")]
    NotNormalized(Elem),
    #[error("witness value at the identity must be 0")]
    WitnessNotNormalized,
    #[error("cocycles live on different groups")]
    GroupMismatch,
    #[error("cocycle group does not match the subgroup it is attached to")]
    EmbeddingMismatch,
    #[error("{0} is not a multiple of both root orders")]
    BadCommonOrder(u32),
    #[error("witness has {got} values, expected {expected}")]
    WitnessLength { expected: usize, got: usize },
    #[error("subgroup is not contained in the cocycle's subgroup")]
    NotASubgroup,
}

/// A function `H x H -> mu_n`, written additively as exponents mod `n`.
#[derive(Clone, Debug)]
pub struct Cocycle {
    group: Group,
    n: u32,
    exps: Vec<u32>,
}

/// Result of checking the cocycle identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CocycleCheck {
    Valid,
    Violation(Elem, Elem, Elem),
    NotNormalized(Elem),
}

impl CocycleCheck {
    pub fn is_valid(&self) -> bool {
        *self == CocycleCheck::Valid
    }
}

/// A normalized 1-cochain `rho: H -> mu_n`, as exponents; `values[e] = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CochainWitness {
    pub n: u32,
    pub values: Vec<u32>,
}

impl Cocycle {
    /// Build from an exponent table without checking the cocycle identity.
    pub fn from_exps(group: Group, n: u32, exps: Vec<Vec<u32>>) -> Result<Self, CocycleError> {
        if n == 0 {
            return Err(CocycleError::ZeroOrder);
        }
        let m = group.order();
        if exps.len() != m || exps.iter().any(|r| r.len() != m) {
            return Err(CocycleError::Shape { expected: m });
        }
        let mut flat = Vec::with_capacity(m * m);
        for (x, row) in exps.iter().enumerate() {
            for (y, &value) in row.iter().enumerate() {
                if value >= n {
                    return Err(CocycleError::ExponentOutOfRange { x, y, value, n });
                }
                flat.push(value);
            }
        }
        Ok(Cocycle {
            group,
            n,
            exps: flat,
        })
    }

    /// Build and validate: the cocycle identity and normalization.
    pub fn new(group: Group, n: u32, exps: Vec<Vec<u32>>) -> Result<Self, CocycleError> {
        let c = Self::from_exps(group, n, exps)?;
        match c.check() {
            CocycleCheck::Valid => Ok(c),
            CocycleCheck::Violation(x, y, z) => Err(CocycleError::NotACocycle(x, y, z)),
            CocycleCheck::NotNormalized(x) => Err(CocycleError::NotNormalized(x)),
        }
    }

    fn from_flat(group: Group, n: u32, exps: Vec<u32>) -> Self {
        Cocycle { group, n, exps }
    }

    pub fn trivial(group: Group, n: u32) -> Self {
        let m = group.order();
        Cocycle {
            group,
            n: n.max(1),
            exps: vec![0; m * m],
        }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn root_order(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn exp(&self, x: Elem, y: Elem) -> u32 {
        self.exps[x * self.group.order() + y]
    }

    pub fn value(&self, x: Elem, y: Elem) -> CycloScalar {
        CycloScalar::root_of_unity(self.exp(x, y) as i64, self.n)
    }

    pub fn exps(&self) -> Vec<Vec<u32>> {
        self.exps
            .chunks(self.group.order())
            .map(<[u32]>::to_vec)
            .collect()
    }

    /// Check normalization and the cocycle identity, reporting the first
    /// failure.
    pub fn check(&self) -> CocycleCheck {
        let g = &self.group;
        let e = g.identity();
        if let Some(x) = g
            .elements()
            .find(|&x| self.exp(e, x) != 0 || self.exp(x, e) != 0)
        {
            return CocycleCheck::NotNormalized(x);
        }
        let n = self.n as u64;
        for x in g.elements() {
            for y in g.elements() {
                let xy = g.mul(x, y);
                for z in g.elements() {
                    let lhs = self.exp(x, y) as u64 + self.exp(xy, z) as u64;
                    let rhs = self.exp(x, g.mul(y, z)) as u64 + self.exp(y, z) as u64;
                    if lhs % n != rhs % n {
                        return CocycleCheck::Violation(x, y, z);
                    }
                }
            }
        }
        CocycleCheck::Valid
    }

    /// Same values, root order `m` (a multiple of the current one).
    pub fn lift(&self, m: u32) -> Result<Self, CocycleError> {
        if m == 0 || !m.is_multiple_of(self.n) {
            return Err(CocycleError::BadCommonOrder(m));
        }
        let k = m / self.n;
        Ok(Cocycle {
            group: self.group.clone(),
            n: m,
            exps: self.exps.iter().map(|&e| e * k).collect(),
        })
    }

    /// Same values at the least possible root order.
    pub fn normalized(&self) -> Self {
        let g = self.exps.iter().fold(self.n, |acc, &e| acc.gcd(&e));
        Cocycle {
            group: self.group.clone(),
            n: self.n / g,
            exps: self.exps.iter().map(|&e| e / g).collect(),
        }
    }

    /// Pointwise product, at the lcm order.
    pub fn product(&self, other: &Self) -> Result<Self, CocycleError> {
        if self.group != other.group {
            return Err(CocycleError::GroupMismatch);
        }
        let m = self.n.lcm(&other.n);
        let (a, b) = (self.lift(m)?, other.lift(m)?);
        Ok(Cocycle {
            group: self.group.clone(),
            n: m,
            exps: a
                .exps
                .iter()
                .zip(&b.exps)
                .map(|(x, y)| (x + y) % m)
                .collect(),
        })
    }

    /// Pointwise inverse.
    pub fn inverse(&self) -> Self {
        Cocycle {
            group: self.group.clone(),
            n: self.n,
            exps: self.exps.iter().map(|&e| (self.n - e) % self.n).collect(),
        }
    }

    /// Coboundary of a cochain: `rho(x) rho(y) / rho(xy)`.
    pub fn coboundary(group: &Group, witness: &CochainWitness) -> Result<Self, CocycleError> {
        let m = group.order();
        if witness.values.len() != m {
            return Err(CocycleError::WitnessLength {
                expected: m,
                got: witness.values.len(),
            });
        }
        if witness.n == 0 {
            return Err(CocycleError::ZeroOrder);
        }
        if !witness.values[group.identity()].is_multiple_of(witness.n) {
            return Err(CocycleError::WitnessNotNormalized);
        }
        let n = witness.n as u64;
        let r = |x: Elem| witness.values[x] as u64 % n;
        let mut exps = Vec::with_capacity(m * m);
        for x in 0..m {
            for y in 0..m {
                exps.push(((r(x) + r(y) + n - r(group.mul(x, y))) % n) as u32);
            }
        }
        Ok(Cocycle::from_flat(group.clone(), witness.n, exps))
    }

    /// `self * coboundary(witness)`.
    pub fn twist(&self, witness: &CochainWitness) -> Result<Self, CocycleError> {
        self.product(&Self::coboundary(&self.group, witness)?)
    }
}

impl PartialEq for Cocycle {
    /// Equality of values, regardless of the root order used to store them.
    fn eq(&self, other: &Self) -> bool {
        if self.group != other.group {
            return false;
        }
        let (a, b) = (self.n as u64, other.n as u64);
        self.exps
            .iter()
            .zip(&other.exps)
            .all(|(&x, &y)| x as u64 * b == y as u64 * a)
    }
}

impl Eq for Cocycle {}

/// The coboundary map on normalized cochains, one column per non-identity
/// element, one row per pair.
fn delta_matrix(group: &Group) -> (IntMatrix, Vec<Elem>) {
    let m = group.order();
    let others: Vec<Elem> = group
        .elements()
        .filter(|&x| x != group.identity())
        .collect();
    let col = |x: Elem| others.iter().position(|&a| a == x);
    let mut rows = Vec::with_capacity(m * m);
    for x in 0..m {
        for y in 0..m {
            let mut row = vec![BigInt::from(0); others.len()];
            for (z, s) in [(x, 1), (y, 1), (group.mul(x, y), -1)] {
                if let Some(c) = col(z) {
                    row[c] += s;
                }
            }
            rows.push(row);
        }
    }
    (rows, others)
}

/// Decide whether `b / a` is the coboundary of a cochain with values in
/// `mu_n`, where `n` is the lcm of the two root orders.
///
/// The witness `rho` satisfies `b = a * coboundary(rho)`.
pub fn cohomologous(a: &Cocycle, b: &Cocycle) -> Result<Option<CochainWitness>, CocycleError> {
    cohomologous_at(a, b, a.n.lcm(&b.n))
}

/// As [`cohomologous`], with witnesses in `mu_n` for an explicit `n`.
pub fn cohomologous_at(
    a: &Cocycle,
    b: &Cocycle,
    n: u32,
) -> Result<Option<CochainWitness>, CocycleError> {
    if a.group != b.group {
        return Err(CocycleError::GroupMismatch);
    }
    if n == 0 || !n.is_multiple_of(a.n) || !n.is_multiple_of(b.n) {
        return Err(CocycleError::BadCommonOrder(n));
    }
    let (la, lb) = (a.lift(n)?, b.lift(n)?);
    let m = a.group.order();
    let rhs: Vec<BigInt> = la
        .exps
        .iter()
        .zip(&lb.exps)
        .map(|(&x, &y)| BigInt::from(y as i64 - x as i64))
        .collect();
    let (delta, others) = delta_matrix(&a.group);
    let d = smith_normal_form(&delta, others.len());
    let nn = BigInt::from(n);
    Ok(d.solve_mod(&rhs, &nn).map(|s| {
        let mut values = vec![0u32; m];
        for (&x, v) in others.iter().zip(&s) {
            values[x] = v.to_u32().expect("reduced mod n");
        }
        CochainWitness { n, values }
    }))
}

/// Decide whether `a` and `b` are cohomologous with cochains valued in the
/// full multiplicative group of an algebraically closed field.
///
/// If `a / b = coboundary(rho)` with both cocycles in `mu_n`, then `rho^n`
/// is a homomorphism, so `rho` takes values in `mu_(n * exp(H))`.
pub fn cohomologous_over_field(
    a: &Cocycle,
    b: &Cocycle,
) -> Result<Option<CochainWitness>, CocycleError> {
    if a.group != b.group {
        return Err(CocycleError::GroupMismatch);
    }
    let n = a.n.lcm(&b.n) * a.group.exponent() as u32;
    cohomologous_at(a, b, n)
}

/// `alpha^g` on `g H g^-1`: `(x, y) -> alpha(g^-1 x g, g^-1 y g)`.
pub fn conjugate_cocycle(
    c: &Cocycle,
    ambient: &Group,
    h: &Subgroup,
    g: Elem,
) -> Result<(Subgroup, Cocycle), CocycleError> {
    if c.group != h.induced_group(ambient) {
        return Err(CocycleError::EmbeddingMismatch);
    }
    let conj = ambient.conjugate_subgroup(h, g);
    let gi = ambient.inv(g);
    let back: Vec<usize> = conj
        .elements()
        .iter()
        .map(|&x| {
            h.position(ambient.conj(gi, x))
                .expect("conjugate lies in H")
        })
        .collect();
    let k = conj.order();
    let mut exps = Vec::with_capacity(k * k);
    for &x in &back {
        for &y in &back {
            exps.push(c.exp(x, y));
        }
    }
    let group = conj.induced_group(ambient);
    Ok((conj, Cocycle::from_flat(group, c.n, exps)))
}

/// Restriction of a cocycle on `h` to a subgroup `k` of `h`.
pub fn restrict(
    c: &Cocycle,
    ambient: &Group,
    h: &Subgroup,
    k: &Subgroup,
) -> Result<Cocycle, CocycleError> {
    if c.group != h.induced_group(ambient) {
        return Err(CocycleError::EmbeddingMismatch);
    }
    if !k.is_subgroup_of(h) {
        return Err(CocycleError::NotASubgroup);
    }
    let pos: Vec<usize> = k
        .elements()
        .iter()
        .map(|&x| h.position(x).expect("in H"))
        .collect();
    let mut exps = Vec::with_capacity(pos.len() * pos.len());
    for &x in &pos {
        for &y in &pos {
            exps.push(c.exp(x, y));
        }
    }
    Ok(Cocycle::from_flat(k.induced_group(ambient), c.n, exps))
}

/// Representatives of the classes of `H^2(H, F*)` for an algebraically
/// closed `F` of characteristic zero, the trivial class first.
///
/// Every class has a normalized representative with values in `mu_|H|`;
/// these are enumerated from generators of that group of cocycles.
pub fn cohomology_classes(group: &Group) -> Vec<Cocycle> {
    let m = group.order();
    let n = m as u32;
    let e = group.identity();
    let others: Vec<Elem> = group.elements().filter(|&x| x != e).collect();
    let k = others.len();
    let trivial = Cocycle::trivial(group.clone(), n);
    if k <= 1 {
        return vec![trivial];
    }
    let col = |x: Elem, y: Elem| -> Option<usize> {
        let i = others.iter().position(|&a| a == x)?;
        let j = others.iter().position(|&a| a == y)?;
        Some(i * k + j)
    };
    let mut rows: IntMatrix = Vec::new();
    for &x in &others {
        for &y in &others {
            for &z in &others {
                let mut row = vec![BigInt::from(0); k * k];
                let xy = group.mul(x, y);
                let yz = group.mul(y, z);
                for (p, q, s) in [(x, y, 1), (xy, z, 1), (x, yz, -1), (y, z, -1)] {
                    if let Some(c) = col(p, q) {
                        row[c] += s;
                    }
                }
                rows.push(row);
            }
        }
    }
    let gens: Vec<Cocycle> = smith_normal_form(&rows, k * k)
        .kernel_mod(&BigInt::from(n))
        .into_iter()
        .map(|v| {
            let mut exps = vec![0u32; m * m];
            for &x in &others {
                for &y in &others {
                    exps[x * m + y] = v[col(x, y).expect("non-identity")]
                        .to_u32()
                        .expect("reduced");
                }
            }
            Cocycle::from_flat(group.clone(), n, exps)
        })
        .collect();
    let mut reps = vec![trivial];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for g in &gens {
            let c = reps[i].product(g).expect("same group");
            let known = reps.iter().any(|r| {
                cohomologous_over_field(r, &c)
                    .expect("same group")
                    .is_some()
            });
            if !known {
                reps.push(c);
                queue.push_back(reps.len() - 1);
            }
        }
    }
    reps
}

/// Index of the class of `c` among `classes`, if any.
pub fn class_index(classes: &[Cocycle], c: &Cocycle) -> Option<usize> {
    classes
        .iter()
        .position(|r| matches!(cohomologous_over_field(r, c), Ok(Some(_))))
}

/// JSON form of a cocycle; `group` may be omitted when implied by context.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CocycleFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<crate::finite_group::GroupSpec>,
    pub n: u32,
    pub exps: Vec<Vec<u32>>,
}

impl CocycleFile {
    pub fn from_cocycle(c: &Cocycle, with_group: bool) -> Self {
        CocycleFile {
            group: with_group.then(|| crate::finite_group::GroupSpec::Table((&c.group).into())),
            n: c.n,
            exps: c.exps(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v4() -> Group {
        Group::klein_four()
    }

    /// `alpha(x, y) = (-1)^(x_2 y_1)` on C2 x C2, where `x = 2 x_1 + x_2`.
    pub(crate) fn bilinear_v4() -> Cocycle {
        let exps = (0..4)
            .map(|x| (0..4).map(|y| (x & (y >> 1) & 1) as u32).collect())
            .collect();
        Cocycle::new(v4(), 2, exps).unwrap()
    }

    #[test]
    fn rejects_bad_tables() {
        let g = Group::cyclic(2);
        assert_eq!(
            Cocycle::new(g.clone(), 2, vec![vec![0, 0], vec![0]]),
            Err(CocycleError::Shape { expected: 2 })
        );
        assert!(matches!(
            Cocycle::new(g.clone(), 2, vec![vec![0, 0], vec![0, 2]]),
            Err(CocycleError::ExponentOutOfRange { .. })
        ));
        assert!(matches!(
            Cocycle::new(g.clone(), 2, vec![vec![0, 1], vec![0, 0]]),
            Err(CocycleError::NotNormalized(..))
        ));
        // a perturbed bilinear form breaks the identity
        let mut exps = bilinear_v4().exps();
        exps[1][2] = 0;
        let bad = Cocycle::from_exps(v4(), 2, exps).unwrap();
        assert!(matches!(bad.check(), CocycleCheck::Violation(..)));
        assert!(Cocycle::coboundary(
            &g,
            &CochainWitness {
                n: 2,
                values: vec![1, 0]
            }
        )
        .is_err());
    }

    #[test]
    fn minus_one_on_c2_is_not_a_mu2_coboundary() {
        let g = Group::cyclic(2);
        let a = Cocycle::new(g.clone(), 2, vec![vec![0, 0], vec![0, 1]]).unwrap();
        let t = Cocycle::trivial(g, 2);
        assert_eq!(cohomologous(&a, &t).unwrap(), None);
        // but rho(g) = i does it
        let w = cohomologous_over_field(&t, &a).unwrap().unwrap();
        assert_eq!(w.n, 4);
        assert_eq!(t.twist(&w).unwrap(), a);
        // a witness for g -> 1 only gives the trivial cocycle
        let c = Cocycle::coboundary(
            &Group::cyclic(2),
            &CochainWitness {
                n: 2,
                values: vec![0, 1],
            },
        )
        .unwrap();
        assert_eq!(c, Cocycle::trivial(Group::cyclic(2), 1));
    }

    #[test]
    fn bilinear_v4_is_nontrivial() {
        let b = bilinear_v4();
        let t = Cocycle::trivial(v4(), 2);
        assert_eq!(cohomologous_over_field(&b, &t).unwrap(), None);
        let classes = cohomology_classes(&v4());
        assert_eq!(classes.len(), 2);
        assert_eq!(class_index(&classes, &b), Some(1));
        assert_eq!(class_index(&classes, &t), Some(0));
    }

    #[test]
    fn multiplier_orders() {
        // Schur multipliers: C4, S3, Q8 trivial; C2xC2, D4, C2xC4 of order 2
        let cases = [
            (Group::cyclic(4), 1),
            (Group::symmetric(3), 1),
            (Group::quaternion(), 1),
            (Group::klein_four(), 2),
            (Group::dihedral(4), 2),
            (
                Group::direct_product(&Group::cyclic(2), &Group::cyclic(4)),
                2,
            ),
        ];
        for (g, k) in cases {
            assert_eq!(cohomology_classes(&g).len(), k, "order {}", g.order());
        }
    }

    #[test]
    fn coboundaries_are_trivial_and_witnesses_verify() {
        let g = Group::symmetric(3);
        let w = CochainWitness {
            n: 6,
            values: vec![0, 1, 2, 3, 4, 5],
        };
        let c = Cocycle::coboundary(&g, &w).unwrap();
        assert_eq!(c.check(), CocycleCheck::Valid);
        let t = Cocycle::trivial(g.clone(), 1);
        let found = cohomologous(&t, &c).unwrap().unwrap();
        assert_eq!(t.twist(&found).unwrap(), c);
        assert_eq!(cohomologous(&c, &c).unwrap().unwrap().values, vec![0; 6]);
    }

    #[test]
    fn conjugation_and_restriction() {
        let d4 = Group::dihedral(4);
        let whole = d4.whole();
        let alpha = cohomology_classes(&d4).pop().unwrap();
        let (h, beta) = conjugate_cocycle(&alpha, &d4, &whole, 5).unwrap();
        assert_eq!(h, whole);
        assert_eq!(beta.check(), CocycleCheck::Valid);
        // inner conjugation preserves the class
        assert!(cohomologous_over_field(&alpha, &beta).unwrap().is_some());
        let k = d4.subgroup_closure(&[2, 4]).unwrap();
        let r = restrict(&alpha, &d4, &whole, &k).unwrap();
        assert_eq!(r.group().order(), 4);
        assert_eq!(r.check(), CocycleCheck::Valid);
        let bad = Cocycle::trivial(Group::cyclic(8), 1);
        assert_eq!(
            conjugate_cocycle(&bad, &d4, &whole, 1).unwrap_err(),
            CocycleError::EmbeddingMismatch
        );
    }

    #[test]
    fn value_equality_ignores_root_order() {
        let b = bilinear_v4();
        assert_eq!(b.lift(4).unwrap(), b);
        assert_eq!(b.lift(4).unwrap().normalized().root_order(), 2);
    }

    fn brute_force(a: &Cocycle, b: &Cocycle, n: u32) -> bool {
        let g = a.group();
        let e = g.identity();
        let others: Vec<Elem> = g.elements().filter(|&x| x != e).collect();
        let total = (n as usize).pow(others.len() as u32);
        (0..total).any(|mut code| {
            let mut values = vec![0u32; g.order()];
            for &x in &others {
                values[x] = (code % n as usize) as u32;
                code /= n as usize;
            }
            let w = CochainWitness { n, values };
            a.twist(&w).unwrap() == *b
        })
    }

    fn normalized_cocycle(g: Group, n: u32) -> impl Strategy<Value = Cocycle> {
        let classes = cohomology_classes(&g);
        let m = g.order();
        (0..classes.len(), proptest::collection::vec(0..n, m)).prop_map(move |(k, mut vals)| {
            vals[g.identity()] = 0;
            let w = CochainWitness { n, values: vals };
            let c = classes[k].lift(classes[k].root_order().lcm(&n)).unwrap();
            c.twist(&w).unwrap()
        })
    }

    proptest! {
        #[test]
        fn solver_matches_brute_force(a in normalized_cocycle(Group::klein_four(), 2), b in normalized_cocycle(Group::klein_four(), 2)) {
            let n = a.root_order().lcm(&b.root_order());
            let fast = cohomologous_at(&a, &b, n).unwrap();
            prop_assert_eq!(fast.is_some(), brute_force(&a, &b, n));
            if let Some(w) = fast {
                prop_assert_eq!(a.twist(&w).unwrap(), b);
            }
        }

        #[test]
        fn twisting_preserves_cocycle_identity(c in normalized_cocycle(Group::dihedral(4), 4), mut vals in proptest::collection::vec(0u32..4, 8)) {
            vals[0] = 0;
            let t = c.twist(&CochainWitness { n: 4, values: vals }).unwrap();
            prop_assert_eq!(t.check(), CocycleCheck::Valid);
            prop_assert!(cohomologous_over_field(&t, &c).unwrap().is_some());
        }
    }
}
