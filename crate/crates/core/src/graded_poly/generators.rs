//! Polynomial families: binomial identities of twisted group algebras,
//! graded central polynomials, cocycle separators and allocating probes.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use super::{
    BasisAssignment, GradedMonomial, GradedPolynomial, GradedVariable, PolyError, VarId, VarTag,
};
use crate::cocycle::{cohomologous_over_field, cohomology_classes, Cocycle};
use crate::cyclo::CycloScalar;
use crate::euler::{eulerian_circuit, Edge};
use crate::finite_group::{Elem, Subgroup};
use crate::presentation::{Presentation, StdBasisElement};

/// Default cap on [`GradedPolynomial::size`] for global probes.
pub const DEFAULT_SIZE_CAP: u128 = 1_000_000;

fn check_perm(pi: &[usize]) -> Result<(), PolyError> {
    let mut seen = vec![false; pi.len()];
    for &x in pi {
        if x >= pi.len() || std::mem::replace(&mut seen[x], true) {
            return Err(PolyError::InvalidPermutation(pi.to_vec()));
        }
    }
    Ok(())
}

/// Exponent of the cocycle scalar of `u_{d_0} u_{d_1} ... u_{d_k}`.
fn product_exp(c: &Cocycle, seq: &[Elem]) -> (Elem, u64) {
    let g = c.group();
    let n = c.root_order() as u64;
    let mut h = g.identity();
    let mut e = 0u64;
    for &x in seq {
        e = (e + c.exp(h, x) as u64) % n;
        h = g.mul(h, x);
    }
    (h, e)
}

/// `lambda` with `x_1 ... x_s - lambda x_pi(1) ... x_pi(s)` an identity of
/// `F^c H`; `degrees` are elements of the cocycle's group.
pub fn binomial_lambda(
    c: &Cocycle,
    degrees: &[Elem],
    pi: &[usize],
) -> Result<CycloScalar, PolyError> {
    if pi.len() != degrees.len() {
        return Err(PolyError::InvalidPermutation(pi.to_vec()));
    }
    check_perm(pi)?;
    if let Some(&d) = degrees.iter().find(|&&d| d >= c.group().order()) {
        return Err(PolyError::BadDegree(d));
    }
    let permuted: Vec<Elem> = pi.iter().map(|&k| degrees[k]).collect();
    let (h1, e1) = product_exp(c, degrees);
    let (h2, e2) = product_exp(c, &permuted);
    if h1 != h2 {
        return Err(PolyError::ProductsDisagree);
    }
    let n = c.root_order();
    Ok(CycloScalar::root_of_unity(e1 as i64 - e2 as i64, n).normalized())
}

/// The binomial identity of `F^c H` for `(degrees, pi)`, variables graded
/// by the cocycle's own group.
pub fn build_binomial(
    c: &Cocycle,
    degrees: &[Elem],
    pi: &[usize],
) -> Result<GradedPolynomial, PolyError> {
    let embed: Vec<Elem> = c.group().elements().collect();
    build_binomial_embedded(c, &embed, degrees, pi)
}

/// As [`build_binomial`], with variable degrees `embed[d]` in an ambient
/// group.
pub fn build_binomial_embedded(
    c: &Cocycle,
    embed: &[Elem],
    degrees: &[Elem],
    pi: &[usize],
) -> Result<GradedPolynomial, PolyError> {
    let lambda = binomial_lambda(c, degrees, pi)?;
    Ok(binomial_polynomial(embed, degrees, pi, &lambda))
}

fn binomial_polynomial(
    embed: &[Elem],
    degrees: &[Elem],
    pi: &[usize],
    lambda: &CycloScalar,
) -> GradedPolynomial {
    let variables: Vec<GradedVariable> = degrees
        .iter()
        .enumerate()
        .map(|(k, &d)| GradedVariable {
            id: VarId(k as u32),
            degree: embed[d],
            tag: VarTag::Plain,
        })
        .collect();
    let ids: Vec<VarId> = variables.iter().map(|v| v.id).collect();
    let mut monomials = vec![GradedMonomial {
        coefficient: CycloScalar::one(1),
        factors: ids.clone(),
    }];
    if pi.iter().enumerate().all(|(k, &x)| k == x) {
        monomials[0].coefficient = &CycloScalar::one(1) - lambda;
        if monomials[0].coefficient.is_zero() {
            monomials.clear();
        }
    } else {
        monomials.push(GradedMonomial {
            coefficient: -lambda,
            factors: pi.iter().map(|&k| ids[k]).collect(),
        });
    }
    GradedPolynomial::new(variables, monomials).expect("binomials are multilinear")
}

/// A binomial `(degrees, pi)` whose scalar differs between `alpha` and
/// `beta`, searching lengths 2, 3, 4 in lexicographic order.
pub fn find_separating_binomial(
    alpha: &Cocycle,
    beta: &Cocycle,
) -> Option<(Vec<Elem>, Vec<usize>)> {
    let g = alpha.group();
    let order = g.order();
    for s in 2..=4usize {
        let perms: Vec<Vec<usize>> = super::permutations_with_parity(s)
            .into_iter()
            .map(|(p, _)| p)
            .filter(|p| p.iter().enumerate().any(|(k, &x)| k != x))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        for code in 0..order.pow(s as u32) {
            let mut degrees = vec![0; s];
            let mut rest = code;
            for d in degrees.iter_mut().rev() {
                *d = rest % order;
                rest /= order;
            }
            for pi in &perms {
                let la = binomial_lambda(alpha, &degrees, pi);
                let lb = binomial_lambda(beta, &degrees, pi);
                if let (Ok(la), Ok(lb)) = (la, lb) {
                    if la != lb {
                        return Some((degrees, pi.clone()));
                    }
                }
            }
        }
    }
    None
}

/// Regev's central polynomial on `2 r^2` variables,
/// `sum_{sigma, tau} sgn(sigma) sgn(tau) w(x_sigma, y_tau)`, where the word
/// `w` runs through staircase blocks `x^1 y^3 x^3 y^5 x^5 ... y^(2r-1)
/// x^(2r-1) y^1` (for `r = 1` simply `x y`). `x_1` has degree `h`, all
/// others degree `e`.
pub fn regev(r: usize, h: Elem, e: Elem) -> GradedPolynomial {
    let m = r * r;
    let x: Vec<GradedVariable> = (0..m)
        .map(|k| GradedVariable {
            id: VarId(k as u32),
            degree: if k == 0 { h } else { e },
            tag: VarTag::Plain,
        })
        .collect();
    let y: Vec<GradedVariable> = (0..m)
        .map(|k| GradedVariable {
            id: VarId((m + k) as u32),
            degree: e,
            tag: VarTag::Plain,
        })
        .collect();
    let mut blocks = vec![(true, 1)];
    for k in 1..r {
        blocks.push((false, 2 * k + 1));
        blocks.push((true, 2 * k + 1));
    }
    blocks.push((false, 1));
    let (mut nx, mut ny) = (0, 0);
    let mut factors = Vec::with_capacity(2 * m);
    for (is_x, len) in blocks {
        for _ in 0..len {
            if is_x {
                factors.push(x[nx].id);
                nx += 1;
            } else {
                factors.push(y[ny].id);
                ny += 1;
            }
        }
    }
    debug_assert_eq!((nx, ny), (m, m));
    let sets = vec![
        x.iter().map(|v| v.id).collect(),
        y.iter().map(|v| v.id).collect(),
    ];
    let mut variables = x;
    variables.extend(y);
    GradedPolynomial::new(
        variables,
        vec![GradedMonomial {
            coefficient: CycloScalar::one(1),
            factors,
        }],
    )
    .and_then(|p| p.alternate_mixed(&sets))
    .expect("well-formed")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinomialSpec {
    /// Degrees as elements of the cocycles' group.
    pub degrees: Vec<Elem>,
    pub pi: Vec<usize>,
    /// Scalar of the cocycle the binomial vanishes on.
    pub lambda: CycloScalar,
    /// Scalar of the separated cocycle.
    pub lambda_separated: CycloScalar,
}

#[derive(Clone, Debug)]
pub struct CocycleSeparator {
    pub polynomial: GradedPolynomial,
    /// Empty list of cocycles: the polynomial is a single variable of
    /// degree `e`.
    pub degenerate: bool,
    pub binomials: Vec<BinomialSpec>,
    pub matrix_size: usize,
}

/// A polynomial that is a nonidentity of `(H, alpha, (e,...,e))` with `r`
/// entries and an identity of `(H, beta, (e,...,e))` for every listed
/// `beta`: a product of separating binomials, each variable replaced by a
/// graded central polynomial when `r > 1`.
pub fn build_cocycle_separator(
    alpha: &Cocycle,
    betas: &[Cocycle],
    r: usize,
) -> Result<CocycleSeparator, PolyError> {
    let embed: Vec<Elem> = alpha.group().elements().collect();
    build_cocycle_separator_embedded(alpha, betas, r, &embed, alpha.group().identity())
}

/// As [`build_cocycle_separator`], with variable degrees `embed[d]` in an
/// ambient group with identity `e`.
pub fn build_cocycle_separator_embedded(
    alpha: &Cocycle,
    betas: &[Cocycle],
    r: usize,
    embed: &[Elem],
    e: Elem,
) -> Result<CocycleSeparator, PolyError> {
    if betas.is_empty() {
        let x = GradedVariable {
            id: VarId(0),
            degree: e,
            tag: VarTag::Plain,
        };
        return Ok(CocycleSeparator {
            polynomial: GradedPolynomial::monomial(vec![x]),
            degenerate: true,
            binomials: Vec::new(),
            matrix_size: r,
        });
    }
    let mut factors: Vec<GradedPolynomial> = Vec::new();
    let mut specs = Vec::new();
    let mut next = 0u32;
    for (k, beta) in betas.iter().enumerate() {
        if cohomologous_over_field(alpha, beta)?.is_some() {
            return Err(PolyError::CocyclesCohomologous(k));
        }
        let (degrees, pi) =
            find_separating_binomial(alpha, beta).ok_or(PolyError::NoSeparatingBinomial)?;
        let lambda = binomial_lambda(beta, &degrees, &pi)?;
        let lambda_separated = binomial_lambda(alpha, &degrees, &pi)?;
        let (b, _) = binomial_polynomial(embed, &degrees, &pi, &lambda).reindexed(next);
        next = b.next_id();
        factors.push(b);
        specs.push(BinomialSpec {
            degrees,
            pi,
            lambda,
            lambda_separated,
        });
    }
    let mut polynomial = GradedPolynomial::concat_disjoint(&factors);
    if r > 1 {
        let zs: Vec<GradedVariable> = polynomial.variables().to_vec();
        for z in zs {
            let (q, _) = regev(r, z.degree, e).reindexed(next);
            next = q.next_id();
            polynomial = polynomial.compose(z.id, q)?;
        }
    }
    Ok(CocycleSeparator {
        polynomial,
        degenerate: false,
        binomials: specs,
        matrix_size: r,
    })
}

/// Leaf values making a separator nonzero on the diagonal block `rows` of
/// `pres`, whose group part at row `rows[0]` is `p^-1 H p`.
fn separator_witness(
    sep: &GradedPolynomial,
    pres: &Presentation,
    rows: &[usize],
) -> BasisAssignment {
    let g = pres.ambient();
    let tuple = pres.tuple();
    let a0 = rows[0];
    let unit = |i: usize, j: usize| StdBasisElement {
        h: g.mul(tuple[i], g.inv(tuple[j])),
        i,
        j,
    };
    let diagonal = |t: Elem| StdBasisElement {
        h: g.mul(g.mul(tuple[a0], t), g.inv(tuple[a0])),
        i: a0,
        j: a0,
    };
    let mut out = BasisAssignment::new();
    for z in sep.variables() {
        match sep.composition().get(&z.id) {
            None => {
                out.insert(z.id, diagonal(z.degree));
            }
            Some(q) => {
                let vars = q.variables();
                let m = vars.len() / 2;
                let others: Vec<(usize, usize)> = rows
                    .iter()
                    .flat_map(|&i| rows.iter().map(move |&j| (i, j)))
                    .filter(|&p| p != (a0, a0))
                    .collect();
                out.insert(vars[0].id, diagonal(vars[0].degree));
                for (v, &(i, j)) in vars[1..m].iter().zip(&others) {
                    out.insert(v.id, unit(i, j));
                }
                let all = rows.iter().flat_map(|&i| rows.iter().map(move |&j| (i, j)));
                for (v, (i, j)) in vars[m..].iter().zip(all) {
                    out.insert(v.id, unit(i, j));
                }
            }
        }
    }
    out
}

/// How designated variables are grouped into alternation sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlternationScope {
    /// One set per block and degree.
    PerBlock,
    /// One set per degree across all blocks of a segment.
    PerSegment,
}

/// An allocating probe with its defining evaluation.
#[derive(Clone, Debug)]
pub struct Probe {
    pub polynomial: GradedPolynomial,
    /// Basis values of all leaf variables; the evaluation there is nonzero.
    pub witness: BasisAssignment,
    /// The underlying monomial before alternation.
    pub word: Vec<VarId>,
    /// Designated variables grouped by alternation set (including
    /// singletons, which are not alternated).
    pub designated: Vec<Vec<VarId>>,
}

struct Builder<'a> {
    pres: &'a Presentation,
    vars: Vec<GradedVariable>,
    witness: BasisAssignment,
    groups: BTreeMap<(usize, Elem), Vec<VarId>>,
    seen: HashSet<u32>,
    next: u32,
    last_frame: Option<u32>,
    /// Polynomials to splice in after the given number of word letters.
    inserts: Vec<(usize, GradedPolynomial)>,
}

impl<'a> Builder<'a> {
    fn new(pres: &'a Presentation) -> Self {
        Builder {
            pres,
            vars: Vec::new(),
            witness: BTreeMap::new(),
            groups: BTreeMap::new(),
            seen: HashSet::new(),
            next: 0,
            last_frame: None,
            inserts: Vec::new(),
        }
    }

    fn push(&mut self, b: u32, tag: VarTag) -> VarId {
        let id = VarId(self.next);
        self.next += 1;
        self.vars.push(GradedVariable {
            id,
            degree: self.pres.tables().degree(b),
            tag,
        });
        self.witness.insert(id, self.pres.basis_element(b));
        id
    }

    fn unit_index(&self, i: usize, j: usize) -> u32 {
        let g = self.pres.ambient();
        let t = self.pres.tuple();
        let h = g.mul(t[i], g.inv(t[j]));
        let pos = self.pres.subgroup().position(h).expect("same H-coset");
        self.pres.tables().index(pos, i, j)
    }

    fn frame(&mut self, i: usize) {
        let b = self.unit_index(i, i);
        if self.last_frame == Some(b) {
            return;
        }
        self.push(b, VarTag::Frame);
        self.last_frame = Some(b);
    }

    fn bridge(&mut self, i: usize, j: usize) {
        let g = self.pres.ambient();
        let e = g.identity();
        let pos = self.pres.subgroup().position(e).expect("identity in H");
        let b = self.pres.tables().index(pos, i, j);
        self.push(b, VarTag::Bridge);
        self.last_frame = None;
    }

    fn visit(&mut self, b: u32, group: usize) {
        if !self.seen.insert(b) {
            self.push(b, VarTag::Frame);
            self.last_frame = None;
            return;
        }
        let t = self.pres.tables();
        let (i, j, d) = (t.row(b), t.col(b), t.degree(b));
        self.frame(i);
        let id = self.push(b, VarTag::Designated);
        self.last_frame = None;
        self.groups.entry((group, d)).or_default().push(id);
        self.frame(j);
    }

    /// Walk every basis element of the `T`-part of the block on `rows`,
    /// degree-`e` elements first; returns the first and last row.
    fn walk_block(&mut self, t_sub: &Subgroup, rows: &[usize], group: usize) -> (usize, usize) {
        let pres = self.pres;
        let g = pres.ambient();
        let h = pres.subgroup();
        let tuple = pres.tuple();
        let tables = pres.tables();
        let e = g.identity();
        // same-H-coset components of the degree-e part
        let mut comps: Vec<(Elem, Vec<usize>)> = Vec::new();
        for &i in rows {
            let key = g.right_coset_key(h, tuple[i]);
            match comps.iter_mut().find(|(k, _)| *k == key) {
                Some((_, v)) => v.push(i),
                None => comps.push((key, vec![i])),
            }
        }
        let local = |i: usize| rows.iter().position(|&x| x == i).expect("row of the block");
        let start = comps[0].1[0];
        let mut at = start;
        for (c, (_, comp)) in comps.iter().enumerate() {
            if c > 0 {
                // a connector of nontrivial degree between components
                let b = h
                    .elements()
                    .iter()
                    .enumerate()
                    .filter(|&(_, &x)| {
                        t_sub.contains(g.mul(g.mul(g.inv(tuple[at]), x), tuple[comp[0]]))
                    })
                    .map(|(pos, _)| tables.index(pos, at, comp[0]))
                    .min()
                    .expect("rows of a block are related");
                self.visit(b, group);
                at = comp[0];
            }
            let mut edges = Vec::new();
            for &i in comp {
                for &j in comp {
                    edges.push(Edge {
                        from: local(i),
                        to: local(j),
                        label: self.unit_index(i, j),
                    });
                }
            }
            let circuit =
                eulerian_circuit(rows.len(), &edges, local(at)).expect("complete digraph");
            for k in circuit {
                self.visit(edges[k].label, group);
            }
        }
        let mut edges = Vec::new();
        for &i in rows {
            for &j in rows {
                for (pos, &x) in h.elements().iter().enumerate() {
                    let d = g.mul(g.mul(g.inv(tuple[i]), x), tuple[j]);
                    if d != e && t_sub.contains(d) {
                        edges.push(Edge {
                            from: local(i),
                            to: local(j),
                            label: tables.index(pos, i, j),
                        });
                    }
                }
            }
        }
        let circuit =
            eulerian_circuit(rows.len(), &edges, local(at)).expect("balanced connected multigraph");
        for k in circuit {
            self.visit(edges[k].label, group);
        }
        (start, at)
    }

    fn finish(self) -> Probe {
        let word: Vec<VarId> = self.vars.iter().map(|v| v.id).collect();
        let designated: Vec<Vec<VarId>> = self.groups.into_values().collect();
        let sets: Vec<Vec<VarId>> = designated.iter().filter(|s| s.len() > 1).cloned().collect();
        let witness = self.witness;
        let polynomial = if self.inserts.is_empty() {
            GradedPolynomial::monomial(self.vars)
        } else {
            let mut parts = Vec::new();
            let mut from = 0;
            for (at, q) in self.inserts {
                if at > from {
                    parts.push(GradedPolynomial::monomial(self.vars[from..at].to_vec()));
                }
                parts.push(q);
                from = at;
            }
            if from < self.vars.len() {
                parts.push(GradedPolynomial::monomial(self.vars[from..].to_vec()));
            }
            GradedPolynomial::concat_disjoint(&parts)
        };
        let polynomial = polynomial
            .alternate(&sets)
            .expect("designated sets are single-degree and disjoint");
        Probe {
            polynomial,
            witness,
            word,
            designated,
        }
    }
}

fn ordered_blocks(
    pres: &Presentation,
    t_sub: &Subgroup,
) -> Result<Vec<crate::presentation::Block>, PolyError> {
    let dec = pres.block_decomposition(t_sub)?;
    let mut blocks = dec.blocks;
    blocks.sort_by_key(|b| {
        (
            std::cmp::Reverse(b.pages * b.matrix_size * b.matrix_size),
            b.indices[0],
        )
    });
    Ok(blocks)
}

/// The probe `f_{T,A}`: a nonzero product through every standard basis
/// element of each block of `A_T`, framed and bridged, alternated per block
/// and degree.
pub fn build_block_probe(pres: &Presentation, t_sub: &Subgroup) -> Result<Probe, PolyError> {
    build_block_probe_scoped(pres, t_sub, AlternationScope::PerBlock)
}

pub fn build_block_probe_scoped(
    pres: &Presentation,
    t_sub: &Subgroup,
    scope: AlternationScope,
) -> Result<Probe, PolyError> {
    let blocks = ordered_blocks(pres, t_sub)?;
    let mut b = Builder::new(pres);
    let mut prev_end = None;
    for (k, block) in blocks.iter().enumerate() {
        if let Some(end) = prev_end {
            b.bridge(end, block.indices[0]);
        }
        let group = match scope {
            AlternationScope::PerBlock => k,
            AlternationScope::PerSegment => 0,
        };
        let (_, end) = b.walk_block(t_sub, &block.indices, group);
        prev_end = Some(end);
    }
    Ok(b.finish())
}

/// The probe `f_A`: block probes for the conjugates `g^-1 H g`, one per
/// right `N(H)`-coset met by the tuple, bridged together. With
/// `with_regev`, a cocycle separator follows every block whose group part
/// is the whole conjugate.
pub fn build_global_probe(
    pres: &Presentation,
    with_regev: bool,
    cap: u128,
) -> Result<Probe, PolyError> {
    let g = pres.ambient();
    let h = pres.subgroup();
    let normalizer = g.normalizer(h);
    let mut reps: Vec<(Elem, Elem)> = Vec::new();
    for &p in pres.tuple() {
        let key = g.right_coset_key(&normalizer, p);
        if !reps.iter().any(|&(k, _)| k == key) {
            reps.push((key, p));
        }
    }
    let mut b = Builder::new(pres);
    let mut prev_end: Option<usize> = None;
    for (segment, &(_, rep)) in reps.iter().enumerate() {
        let t_sub = g.conjugate_subgroup(h, g.inv(rep));
        for block in ordered_blocks(pres, &t_sub)? {
            if let Some(end) = prev_end {
                b.bridge(end, block.indices[0]);
            }
            let (_, end) = b.walk_block(&t_sub, &block.indices, segment);
            prev_end = Some(end);
            if with_regev && block.omega == t_sub {
                let alpha = block.presentation.cocycle();
                let others: Vec<Cocycle> = cohomology_classes(alpha.group())
                    .into_iter()
                    .filter(|c| !matches!(cohomologous_over_field(alpha, c), Ok(Some(_))))
                    .collect();
                if others.is_empty() {
                    continue;
                }
                let sep = build_cocycle_separator_embedded(
                    alpha,
                    &others,
                    block.matrix_size,
                    block.omega.elements(),
                    g.identity(),
                )?;
                let (q, _) = sep.polynomial.reindexed(b.next);
                b.next = q.next_id();
                b.witness
                    .extend(separator_witness(&q, pres, &block.indices));
                b.inserts.push((b.vars.len(), q));
                b.last_frame = None;
            }
        }
    }
    let probe = b.finish();
    let size = probe.polynomial.size();
    if size > cap {
        return Err(PolyError::BudgetExceeded { size, cap });
    }
    Ok(probe)
}

/// Standalone cocycle separators, one per block of `pres` whose group part
/// is a whole conjugate of `H` and whose cocycle class is not the only one,
/// each with leaf values on which it is nonzero.
pub fn build_block_separators(
    pres: &Presentation,
) -> Result<Vec<(GradedPolynomial, BasisAssignment)>, PolyError> {
    let g = pres.ambient();
    let h = pres.subgroup();
    let normalizer = g.normalizer(h);
    let mut seen: Vec<Elem> = Vec::new();
    let mut out = Vec::new();
    for &p in pres.tuple() {
        let key = g.right_coset_key(&normalizer, p);
        if seen.contains(&key) {
            continue;
        }
        seen.push(key);
        let t_sub = g.conjugate_subgroup(h, g.inv(p));
        for block in ordered_blocks(pres, &t_sub)? {
            if block.omega != t_sub {
                continue;
            }
            let alpha = block.presentation.cocycle();
            let others: Vec<Cocycle> = cohomology_classes(alpha.group())
                .into_iter()
                .filter(|c| !matches!(cohomologous_over_field(alpha, c), Ok(Some(_))))
                .collect();
            if others.is_empty() {
                continue;
            }
            let sep = build_cocycle_separator_embedded(
                alpha,
                &others,
                block.matrix_size,
                block.omega.elements(),
                g.identity(),
            )?;
            let witness = separator_witness(&sep.polynomial, pres, &block.indices);
            out.push((sep.polynomial, witness));
        }
    }
    Ok(out)
}
