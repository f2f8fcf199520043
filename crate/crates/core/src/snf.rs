//! Smith normal form over the integers and linear congruence solving.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;

/// `U A V = S` with `U`, `V` unimodular and `S` diagonal, each nonzero
/// diagonal entry positive and dividing the next.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub v: IntMatrix,
    /// Nonzero diagonal entries of `S`, in order; their count is the rank.
    pub diag: Vec<BigInt>,
    pub rows: usize,
    pub cols: usize,
}

fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| BigInt::from((i == j) as i32)).collect())
        .collect()
}

fn row_op(m: &mut IntMatrix, target: usize, source: usize, factor: &BigInt) {
    // row[target] -= factor * row[source]
    let src = m[source].clone();
    for (t, s) in m[target].iter_mut().zip(&src) {
        if !s.is_zero() {
            *t -= factor * s;
        }
    }
}

fn col_op(m: &mut IntMatrix, target: usize, source: usize, factor: &BigInt) {
    for row in m.iter_mut() {
        if !row[source].is_zero() {
            let s = row[source].clone();
            row[target] -= factor * s;
        }
    }
}

fn swap_cols(m: &mut IntMatrix, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// Smith normal form of a `rows x cols` matrix (`cols` is needed when
/// there are no rows).
pub fn smith_normal_form(a: &IntMatrix, cols: usize) -> SnfResult {
    let rows = a.len();
    let mut m = a.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        // pivot of least absolute value in the remaining block
        let mut pivot: Option<(usize, usize)> = None;
        for (i, row) in m.iter().enumerate().skip(t) {
            for (j, x) in row.iter().enumerate().skip(t) {
                if !x.is_zero() && pivot.is_none_or(|(pi, pj)| x.abs() < m[pi][pj].abs()) {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        m.swap(t, pi);
        u.swap(t, pi);
        swap_cols(&mut m, t, pj);
        swap_cols(&mut v, t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if m[i][t].is_zero() {
                    continue;
                }
                let q = m[i][t].div_floor(&m[t][t]);
                row_op(&mut m, i, t, &q);
                row_op(&mut u, i, t, &q);
                if !m[i][t].is_zero() {
                    clean = false;
                    m.swap(t, i);
                    u.swap(t, i);
                }
            }
            for j in t + 1..cols {
                if m[t][j].is_zero() {
                    continue;
                }
                let q = m[t][j].div_floor(&m[t][t]);
                col_op(&mut m, j, t, &q);
                col_op(&mut v, j, t, &q);
                if !m[t][j].is_zero() {
                    clean = false;
                    swap_cols(&mut m, t, j);
                    swap_cols(&mut v, t, j);
                }
            }
            if clean {
                break;
            }
        }
        if m[t][t].is_negative() {
            for x in m[t].iter_mut() {
                *x = -&*x;
            }
            for x in u[t].iter_mut() {
                *x = -&*x;
            }
        }
        diag.push(m[t][t].clone());
    }
    // enforce the divisibility chain with 2x2 unimodular steps
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            if diag[j].is_multiple_of(&diag[i]) {
                continue;
            }
            let (a, b) = (diag[i].clone(), diag[j].clone());
            let e = a.extended_gcd(&b);
            let g = e.gcd;
            let (s, t) = (e.x, e.y);
            let (ag, bg) = (&a / &g, &b / &g);
            // rows: [s, t; -b/g, a/g]; columns: [1, -t b/g; 1, s a/g]
            let (ri, rj) = (u[i].clone(), u[j].clone());
            for k in 0..rows {
                u[i][k] = &s * &ri[k] + &t * &rj[k];
                u[j][k] = &ag * &rj[k] - &bg * &ri[k];
            }
            for row in v.iter_mut() {
                let (ci, cj) = (row[i].clone(), row[j].clone());
                row[i] = &ci + &cj;
                row[j] = &s * &ag * &cj - &t * &bg * &ci;
            }
            diag[i] = g.clone();
            diag[j] = &a * &bg;
        }
    }
    SnfResult {
        u,
        v,
        diag,
        rows,
        cols,
    }
}

fn mod_inverse(a: &BigInt, n: &BigInt) -> BigInt {
    let e = a.extended_gcd(n);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(n)
}

impl SnfResult {
    /// The diagonal matrix `S`.
    pub fn s(&self) -> IntMatrix {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| {
                        if i == j && i < self.diag.len() {
                            self.diag[i].clone()
                        } else {
                            BigInt::zero()
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Solve `A x = b (mod n)`, returning `x` reduced mod `n`.
    pub fn solve_mod(&self, b: &[BigInt], n: &BigInt) -> Option<Vec<BigInt>> {
        let ub: Vec<BigInt> = self
            .u
            .iter()
            .map(|row| {
                row.iter()
                    .zip(b)
                    .map(|(x, y)| x * y)
                    .sum::<BigInt>()
                    .mod_floor(n)
            })
            .collect();
        let mut y = vec![BigInt::zero(); self.cols];
        for (i, d) in self.diag.iter().enumerate() {
            let g = d.gcd(n);
            if !ub[i].is_multiple_of(&g) {
                return None;
            }
            let m = n / &g;
            if m.is_one() {
                continue;
            }
            let dm = (d / &g).mod_floor(&m);
            y[i] = ((&ub[i] / &g) * mod_inverse(&dm, &m)).mod_floor(&m);
        }
        if ub[self.diag.len()..].iter().any(|x| !x.is_zero()) {
            return None;
        }
        Some(
            self.v
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(&y)
                        .map(|(a, b)| a * b)
                        .sum::<BigInt>()
                        .mod_floor(n)
                })
                .collect(),
        )
    }

    /// Generators of `{x : A x = 0 (mod n)}`, reduced mod `n`.
    pub fn kernel_mod(&self, n: &BigInt) -> Vec<Vec<BigInt>> {
        let column = |k: usize, scale: &BigInt| -> Vec<BigInt> {
            self.v
                .iter()
                .map(|row| (&row[k] * scale).mod_floor(n))
                .collect()
        };
        let mut gens = Vec::new();
        for (i, d) in self.diag.iter().enumerate() {
            let step = n / d.gcd(n);
            if &step != n {
                gens.push(column(i, &step));
            }
        }
        for k in self.diag.len()..self.cols {
            gens.push(column(k, &BigInt::one()));
        }
        gens.retain(|g| g.iter().any(|x| !x.is_zero()));
        gens
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mat(v: &[&[i64]]) -> IntMatrix {
        v.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    fn mul(a: &IntMatrix, b: &IntMatrix, inner: usize) -> IntMatrix {
        let cols = b.first().map_or(0, Vec::len);
        a.iter()
            .map(|r| {
                (0..cols)
                    .map(|j| (0..inner).map(|k| &r[k] * &b[k][j]).sum())
                    .collect()
            })
            .collect()
    }

    fn check(a: &IntMatrix, cols: usize) -> SnfResult {
        let d = smith_normal_form(a, cols);
        assert_eq!(mul(&mul(&d.u, a, a.len()), &d.v, cols), d.s());
        for w in d.diag.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        assert!(d.diag.iter().all(|x| x.is_positive()));
        d
    }

    #[test]
    fn known_forms() {
        let d = check(&mat(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]), 3);
        assert_eq!(
            d.diag,
            vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]
        );
        let d = check(&mat(&[&[2, 0], &[0, 3]]), 2);
        assert_eq!(d.diag, vec![BigInt::from(1), BigInt::from(6)]);
        let d = check(&mat(&[&[0, 0], &[0, 0]]), 2);
        assert!(d.diag.is_empty());
        assert_eq!(d.u, mat(&[&[1, 0], &[0, 1]]));
        let d = check(&mat(&[&[1, 0], &[0, 1]]), 2);
        assert_eq!(d.diag, vec![BigInt::from(1), BigInt::from(1)]);
    }

    #[test]
    fn congruence() {
        // 2x = 1 mod 4 has no solution, 2x = 2 mod 4 does
        let d = smith_normal_form(&mat(&[&[2]]), 1);
        let four = BigInt::from(4);
        assert!(d.solve_mod(&[BigInt::from(1)], &four).is_none());
        let x = d.solve_mod(&[BigInt::from(2)], &four).unwrap();
        assert_eq!((BigInt::from(2) * &x[0]).mod_floor(&four), BigInt::from(2));
        assert_eq!(d.kernel_mod(&four), vec![vec![BigInt::from(2)]]);
    }

    proptest! {
        #[test]
        fn solutions_check(entries in proptest::collection::vec(-4i64..5, 12), x0 in proptest::collection::vec(0i64..6, 3), n in 2i64..9) {
            let a: IntMatrix = entries.chunks(3).map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
            let nn = BigInt::from(n);
            let b: Vec<BigInt> = a.iter().map(|r| r.iter().zip(&x0).map(|(p, q)| p * q).sum::<BigInt>()).collect();
            let d = smith_normal_form(&a, 3);
            prop_assert_eq!(mul(&mul(&d.u, &a, 4), &d.v, 3), d.s());
            let x = d.solve_mod(&b, &nn).expect("constructed solvable");
            for (r, bi) in a.iter().zip(&b) {
                let lhs: BigInt = r.iter().zip(&x).map(|(p, q)| p * q).sum();
                prop_assert!((lhs - bi).mod_floor(&nn).is_zero());
            }
            for k in d.kernel_mod(&nn) {
                for r in &a {
                    let lhs: BigInt = r.iter().zip(&k).map(|(p, q)| p * q).sum();
                    prop_assert!(lhs.mod_floor(&nn).is_zero());
                }
            }
        }
    }
}
