//! Brute-force comparison of multilinear graded identities of bounded
//! degree, by linear algebra on evaluation matrices.

use std::collections::{BTreeSet, HashSet};

use super::{IsomorphismError, Side};
use crate::cyclo::CycloScalar;
use crate::finite_group::Elem;
use crate::graded_poly::{
    permutations_with_parity, GradedMonomial, GradedPolynomial, GradedVariable, VarId, VarTag,
};
use crate::presentation::{support, Presentation};

/// Reduced row echelon form over a cyclotomic field, built row by row.
#[derive(Clone, Debug, Default)]
struct Echelon {
    /// `(pivot column, row)` with the pivot entry 1, pivots increasing.
    rows: Vec<(usize, Vec<CycloScalar>)>,
}

impl Echelon {
    fn reduce(&self, mut v: Vec<CycloScalar>) -> Vec<CycloScalar> {
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let c = v[*p].clone();
            for (x, y) in v.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x = &*x - &(&c * y);
                }
            }
        }
        v
    }

    fn insert(&mut self, v: Vec<CycloScalar>) {
        let v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return;
        };
        let inv = v[p].inverse().expect("nonzero");
        let v: Vec<CycloScalar> = v.iter().map(|x| x * &inv).collect();
        for (_, row) in &mut self.rows {
            if row[p].is_zero() {
                continue;
            }
            let c = row[p].clone();
            for (x, y) in row.iter_mut().zip(&v) {
                if !y.is_zero() {
                    *x = &*x - &(&c * y);
                }
            }
        }
        let at = self.rows.partition_point(|(q, _)| *q < p);
        self.rows.insert(at, (p, v));
    }

    fn same_span(&self, other: &Self) -> bool {
        self.rows.len() == other.rows.len()
            && self
                .rows
                .iter()
                .zip(&other.rows)
                .all(|((p, a), (q, b))| p == q && a == b)
    }

    fn annihilates(&self, v: &[CycloScalar]) -> bool {
        self.rows.iter().all(|(_, row)| {
            row.iter()
                .zip(v)
                .fold(CycloScalar::zero(1), |acc, (x, y)| acc + x * y)
                .is_zero()
        })
    }

    /// A basis of the vectors annihilated by every row.
    fn kernel(&self, cols: usize, n: u32) -> Vec<Vec<CycloScalar>> {
        let pivots: Vec<usize> = self.rows.iter().map(|(p, _)| *p).collect();
        (0..cols)
            .filter(|c| !pivots.contains(c))
            .map(|f| {
                let mut v = vec![CycloScalar::zero(n); cols];
                v[f] = CycloScalar::one(n);
                for (p, row) in &self.rows {
                    v[*p] = -&row[f];
                }
                v
            })
            .collect()
    }
}

/// Degree multisets of size `1..=max_degree` drawn from `degrees`.
fn shapes(degrees: &[Elem], max_degree: usize) -> Vec<Vec<Elem>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(d: &[Elem], from: usize, left: usize, cur: &mut Vec<Elem>, out: &mut Vec<Vec<Elem>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if left == 0 {
            return;
        }
        for k in from..d.len() {
            cur.push(d[k]);
            rec(d, k, left - 1, cur, out);
            cur.pop();
        }
    }
    rec(degrees, 0, max_degree, &mut cur, &mut out);
    out
}

fn assignment_count(p: &Presentation, shape: &[Elem]) -> u128 {
    shape
        .iter()
        .map(|&g| p.tables().basis_of_degree(g).len() as u128)
        .product()
}

/// Row space of the evaluation matrix of all words in the shape's variables:
/// one column per word, one row per assignment of basis values and output
/// basis element.
fn evaluation_span(p: &Presentation, shape: &[Elem], words: &[Vec<usize>]) -> Echelon {
    let t = p.tables();
    let n = t.root_order;
    let pools: Vec<&[u32]> = shape.iter().map(|&g| t.basis_of_degree(g)).collect();
    let mut seen: HashSet<Vec<Option<u32>>> = HashSet::new();
    let mut ech = Echelon::default();
    if pools.iter().any(|q| q.is_empty()) {
        return ech;
    }
    let mut idx = vec![0usize; shape.len()];
    loop {
        let vals: Vec<u32> = idx.iter().zip(&pools).map(|(&k, q)| q[k]).collect();
        let mut rows: Vec<(u32, Vec<Option<u32>>)> = Vec::new();
        for (c, w) in words.iter().enumerate() {
            let mut acc = Some((0u32, vals[w[0]]));
            for &v in &w[1..] {
                acc =
                    acc.and_then(|(e, b)| t.mul_basis(b, vals[v]).map(|(f, b2)| ((e + f) % n, b2)));
            }
            if let Some((e, out)) = acc {
                let k = match rows.iter().position(|(o, _)| *o == out) {
                    Some(k) => k,
                    None => {
                        rows.push((out, vec![None; words.len()]));
                        rows.len() - 1
                    }
                };
                rows[k].1[c] = Some(e);
            }
        }
        for (_, mut row) in rows {
            // rows differing by a root of unity span the same line
            let lead = row.iter().flatten().next().copied().unwrap_or(0);
            for x in row.iter_mut().flatten() {
                *x = (*x + n - lead) % n;
            }
            if seen.insert(row.clone()) {
                ech.insert(
                    row.iter()
                        .map(|x| match x {
                            Some(e) => CycloScalar::root_of_unity(*e as i64, n),
                            None => CycloScalar::zero(n),
                        })
                        .collect(),
                );
            }
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                return ech;
            }
            idx[k] += 1;
            if idx[k] < pools[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Multilinear identities of degree at most `max_degree` found by
/// exhaustive linear algebra: either the two algebras have the same ones,
/// or a polynomial that is an identity of one side only.
#[derive(Clone, Debug)]
pub enum BruteForceOutcome {
    Same,
    Differ {
        polynomial: GradedPolynomial,
        /// The side the polynomial is an identity of.
        identity_side: Side,
    },
}

fn check_ambient(a: &Presentation, b: &Presentation) -> Result<(), IsomorphismError> {
    if a.ambient() != b.ambient() {
        return Err(IsomorphismError::AmbientMismatch);
    }
    Ok(())
}

/// Number of basis assignments [`compare_identities`] evaluates.
pub fn bruteforce_cost(a: &Presentation, b: &Presentation, max_degree: usize) -> u128 {
    let degrees: Vec<Elem> = support(a).union(&support(b)).copied().collect();
    shapes(&degrees, max_degree)
        .iter()
        .map(|s| assignment_count(a, s) + assignment_count(b, s))
        .sum()
}

pub fn compare_identities(
    a: &Presentation,
    b: &Presentation,
    max_degree: usize,
    budget: u128,
) -> Result<BruteForceOutcome, IsomorphismError> {
    check_ambient(a, b)?;
    let needed = bruteforce_cost(a, b, max_degree);
    if needed > budget {
        return Err(IsomorphismError::BudgetExceeded { needed, budget });
    }
    let degrees: BTreeSet<Elem> = support(a).union(&support(b)).copied().collect();
    let degrees: Vec<Elem> = degrees.into_iter().collect();
    let n = a.cocycle().root_order().max(1) * b.cocycle().root_order().max(1);
    for shape in shapes(&degrees, max_degree) {
        let words: Vec<Vec<usize>> = permutations_with_parity(shape.len())
            .into_iter()
            .map(|(w, _)| w)
            .collect();
        let ea = evaluation_span(a, &shape, &words);
        let eb = evaluation_span(b, &shape, &words);
        if ea.same_span(&eb) {
            continue;
        }
        for (side, id, other) in [(Side::B, &eb, &ea), (Side::A, &ea, &eb)] {
            let Some(v) = id
                .kernel(words.len(), n)
                .into_iter()
                .find(|v| !other.annihilates(v))
            else {
                continue;
            };
            return Ok(BruteForceOutcome::Differ {
                polynomial: word_polynomial(&shape, &words, &v),
                identity_side: side,
            });
        }
        unreachable!("distinct row spaces have distinct kernels");
    }
    Ok(BruteForceOutcome::Same)
}

fn word_polynomial(
    shape: &[Elem],
    words: &[Vec<usize>],
    coefs: &[CycloScalar],
) -> GradedPolynomial {
    let vars: Vec<GradedVariable> = shape
        .iter()
        .enumerate()
        .map(|(k, &g)| GradedVariable {
            id: VarId(k as u32),
            degree: g,
            tag: VarTag::Plain,
        })
        .collect();
    let monomials = words
        .iter()
        .zip(coefs)
        .filter(|(_, c)| !c.is_zero())
        .map(|(w, c)| GradedMonomial {
            coefficient: c.clone(),
            factors: w.iter().map(|&k| VarId(k as u32)).collect(),
        })
        .collect();
    GradedPolynomial::new(vars, monomials).expect("multilinear words")
}

/// Whether the two algebras satisfy the same multilinear graded identities
/// of degree at most `max_degree`. `budget` caps the number of basis
/// assignments evaluated.
pub fn same_identities_bruteforce(
    a: &Presentation,
    b: &Presentation,
    max_degree: usize,
    budget: u128,
) -> Result<bool, IsomorphismError> {
    Ok(matches!(
        compare_identities(a, b, max_degree, budget)?,
        BruteForceOutcome::Same
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes_are_multisets() {
        let s = shapes(&[0, 1], 2);
        assert_eq!(
            s,
            vec![vec![0], vec![0, 0], vec![0, 1], vec![1], vec![1, 1]]
        );
    }

    #[test]
    fn echelon_spans_and_kernels() {
        let z = |k: i64| CycloScalar::root_of_unity(k, 4);
        let o = || CycloScalar::zero(4);
        let mut a = Echelon::default();
        a.insert(vec![z(0), z(1), o()]);
        a.insert(vec![z(2), z(3), o()]);
        assert_eq!(a.rows.len(), 1);
        let mut b = Echelon::default();
        b.insert(vec![z(1), z(2), o()]);
        assert!(a.same_span(&b));
        let k = a.kernel(3, 4);
        assert_eq!(k.len(), 2);
        assert!(k.iter().all(|v| a.annihilates(v)));
    }
}
