//! Presentations `(H, alpha, (p_1, ..., p_r))` of G-simple algebras
//! `F^alpha H (x) M_r(F)`, with the grading `deg(u_h (x) e_ij) = p_i^-1 h p_j`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cocycle::{
    cohomologous_over_field, conjugate_cocycle, restrict, CochainWitness, Cocycle, CocycleError,
    CocycleFile,
};
use crate::cyclo::CycloScalar;
use crate::finite_group::{Elem, Group, GroupError, GroupSpec, Subgroup};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error("tuple must be nonempty")]
    EmptyTuple,
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Cocycle(#[from] CocycleError),
    #[error("cocycle group does not match the subgroup H")]
    CocycleGroupMismatch,
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("invalid move parameter: {0}")]
    InvalidMoveParameter(String),
    #[error("ambient groups differ")]
    AmbientMismatch,
}

/// The standard basis element `u_h (x) e_{i,j}`; `h` is an element of the
/// ambient group lying in `H`, and `i`, `j` are 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct StdBasisElement {
    pub h: Elem,
    pub i: usize,
    pub j: usize,
}

/// Flat structure tables of a presented algebra.
///
/// Basis index `b = (k * r + i) * r + j` for `h` the `k`-th element of `H`.
#[derive(Debug)]
pub struct AlgebraTables {
    pub r: usize,
    pub h_order: usize,
    pub root_order: u32,
    h_mul: Vec<usize>,
    exps: Vec<u32>,
    degrees: Vec<Elem>,
    by_degree: Vec<Vec<u32>>,
}

impl AlgebraTables {
    fn new(ambient: &Group, h: &Subgroup, cocycle: &Cocycle, tuple: &[Elem]) -> Self {
        let r = tuple.len();
        let k = h.order();
        let mut h_mul = Vec::with_capacity(k * k);
        let mut exps = Vec::with_capacity(k * k);
        for x in 0..k {
            for y in 0..k {
                h_mul.push(cocycle.group().mul(x, y));
                exps.push(cocycle.exp(x, y));
            }
        }
        let mut degrees = Vec::with_capacity(k * r * r);
        let mut by_degree = vec![Vec::new(); ambient.order()];
        for &hh in h.elements() {
            for &pi in tuple {
                for &pj in tuple {
                    let d = ambient.mul(ambient.mul(ambient.inv(pi), hh), pj);
                    by_degree[d].push(degrees.len() as u32);
                    degrees.push(d);
                }
            }
        }
        AlgebraTables {
            r,
            h_order: k,
            root_order: cocycle.root_order(),
            h_mul,
            exps,
            degrees,
            by_degree,
        }
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    /// Order of the ambient group.
    pub fn degree_count(&self) -> usize {
        self.by_degree.len()
    }

    #[inline]
    pub fn degree(&self, b: u32) -> Elem {
        self.degrees[b as usize]
    }

    /// Basis indices of degree `g`, increasing.
    pub fn basis_of_degree(&self, g: Elem) -> &[u32] {
        &self.by_degree[g]
    }

    #[inline]
    pub fn split(&self, b: u32) -> (usize, usize, usize) {
        let b = b as usize;
        let r = self.r;
        (b / (r * r), (b / r) % r, b % r)
    }

    #[inline]
    pub fn index(&self, hpos: usize, i: usize, j: usize) -> u32 {
        ((hpos * self.r + i) * self.r + j) as u32
    }

    #[inline]
    pub fn row(&self, b: u32) -> usize {
        (b as usize / self.r) % self.r
    }

    #[inline]
    pub fn col(&self, b: u32) -> usize {
        b as usize % self.r
    }

    /// Product of two basis elements: `(exponent of z_n, basis index)`, or
    /// `None` when the matrix units do not chain.
    #[inline]
    pub fn mul_basis(&self, a: u32, b: u32) -> Option<(u32, u32)> {
        let (ha, ia, ja) = self.split(a);
        let (hb, ib, jb) = self.split(b);
        if ja != ib {
            return None;
        }
        let k = self.h_order;
        Some((
            self.exps[ha * k + hb],
            self.index(self.h_mul[ha * k + hb], ia, jb),
        ))
    }
}

/// A presentation together with its ambient group.
#[derive(Clone, Debug)]
pub struct Presentation {
    ambient: Group,
    subgroup: Subgroup,
    cocycle: Cocycle,
    tuple: Vec<Elem>,
    tables: Arc<AlgebraTables>,
}

impl PartialEq for Presentation {
    /// Literal equality: same ambient table, same `H`, same tuple and equal
    /// cocycle values.
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient
            && self.subgroup == other.subgroup
            && self.tuple == other.tuple
            && self.cocycle == other.cocycle
    }
}

impl Eq for Presentation {}

/// An element of the algebra, as a sparse combination of basis elements.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AlgebraElement {
    terms: BTreeMap<StdBasisElement, CycloScalar>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(b: StdBasisElement) -> Self {
        Self::term(b, CycloScalar::one(1))
    }

    pub fn term(b: StdBasisElement, c: CycloScalar) -> Self {
        let mut e = Self::zero();
        e.add_term(b, c);
        e
    }

    pub fn add_term(&mut self, b: StdBasisElement, c: CycloScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&b) {
            Some(x) => {
                *x += &c;
                if x.is_zero() {
                    self.terms.remove(&b);
                }
            }
            None => {
                self.terms.insert(b, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.add_term(*b, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &CycloScalar) -> Self {
        let mut out = Self::zero();
        for (b, x) in &self.terms {
            out.add_term(*b, x * c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<StdBasisElement, CycloScalar> {
        &self.terms
    }

    /// The common degree of all terms, if the element is nonzero and
    /// homogeneous.
    pub fn homogeneous_degree(&self, p: &Presentation) -> Option<Elem> {
        let mut degs = self.terms.keys().map(|b| p.degree_of(b).ok());
        let first = degs.next()??;
        degs.all(|d| d == Some(first)).then_some(first)
    }

    pub fn render(&self, p: &Presentation) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(b, c)| {
                if c.is_one() {
                    p.render_basis(b)
                } else {
                    format!("({}) {}", c, p.render_basis(b))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

#[derive(Serialize, Deserialize)]
struct TermFile {
    basis: StdBasisElement,
    coefficient: CycloScalar,
}

impl Serialize for AlgebraElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<TermFile> = self
            .terms
            .iter()
            .map(|(b, c)| TermFile {
                basis: *b,
                coefficient: c.clone(),
            })
            .collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for AlgebraElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let mut out = AlgebraElement::zero();
        for t in Vec::<TermFile>::deserialize(d)? {
            out.add_term(t.basis, t.coefficient);
        }
        Ok(out)
    }
}

/// One of the basic moves between presentations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Move {
    /// New tuple entry `j` is old entry `perm[j]`.
    Permute { perm: Vec<usize> },
    /// `p_index -> h0 p_index`, `h0` in `H`.
    CosetShift { index: usize, h0: Elem },
    /// `H -> g H g^-1`, `alpha -> alpha^g`, `p_i -> g p_i`.
    Conjugate { g: Elem },
    /// `alpha -> alpha * coboundary(rho)`; `rho` indexed by positions in `H`.
    CocycleReplace { witness: CochainWitness },
}

impl Move {
    pub fn render(&self, p: &Presentation) -> String {
        let g = p.ambient();
        match self {
            Move::Permute { perm } => format!(
                "permute ({})",
                perm.iter()
                    .map(|x| (x + 1).to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            ),
            Move::CosetShift { index, h0 } => {
                format!("shift p_{} by {} on the left", index + 1, g.label(*h0))
            }
            Move::Conjugate { g: x } => format!("conjugate by {}", g.label(*x)),
            Move::CocycleReplace { witness } => format!(
                "replace cocycle by coboundary of rho = [{}] (order {})",
                witness
                    .values
                    .iter()
                    .map(u32::to_string)
                    .collect::<Vec<_>>()
                    .join(", "),
                witness.n
            ),
        }
    }
}

impl Presentation {
    pub fn new(
        ambient: Group,
        subgroup: Subgroup,
        cocycle: Cocycle,
        tuple: Vec<Elem>,
    ) -> Result<Self, PresentationError> {
        if tuple.is_empty() {
            return Err(PresentationError::EmptyTuple);
        }
        for &p in &tuple {
            ambient.check_elem(p)?;
        }
        let subgroup = Subgroup::new(&ambient, subgroup.elements().to_vec())?;
        if *cocycle.group() != subgroup.induced_group(&ambient) {
            return Err(PresentationError::CocycleGroupMismatch);
        }
        if !cocycle.check().is_valid() {
            return Err(PresentationError::Cocycle(match cocycle.check() {
                crate::cocycle::CocycleCheck::Violation(x, y, z) => {
                    CocycleError::NotACocycle(x, y, z)
                }
                crate::cocycle::CocycleCheck::NotNormalized(x) => CocycleError::NotNormalized(x),
                crate::cocycle::CocycleCheck::Valid => unreachable!(),
            }));
        }
        let tables = Arc::new(AlgebraTables::new(&ambient, &subgroup, &cocycle, &tuple));
        Ok(Presentation {
            ambient,
            subgroup,
            cocycle,
            tuple,
            tables,
        })
    }

    /// `(H, trivial cocycle, tuple)`.
    pub fn with_trivial_cocycle(
        ambient: Group,
        subgroup: Subgroup,
        tuple: Vec<Elem>,
    ) -> Result<Self, PresentationError> {
        let c = Cocycle::trivial(subgroup.induced_group(&ambient), 1);
        Self::new(ambient, subgroup, c, tuple)
    }

    pub fn ambient(&self) -> &Group {
        &self.ambient
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn cocycle(&self) -> &Cocycle {
        &self.cocycle
    }

    pub fn tuple(&self) -> &[Elem] {
        &self.tuple
    }

    pub fn matrix_size(&self) -> usize {
        self.tuple.len()
    }

    pub fn dim(&self) -> usize {
        self.subgroup.order() * self.tuple.len() * self.tuple.len()
    }

    pub fn tables(&self) -> &AlgebraTables {
        &self.tables
    }

    pub fn basis_index(&self, b: &StdBasisElement) -> Result<u32, PresentationError> {
        let r = self.tuple.len();
        let pos = self.subgroup.position(b.h).ok_or_else(|| {
            PresentationError::IndexOutOfRange(format!("element {} is not in H", b.h))
        })?;
        if b.i >= r || b.j >= r {
            return Err(PresentationError::IndexOutOfRange(format!(
                "matrix position ({}, {}) outside size {r}",
                b.i + 1,
                b.j + 1
            )));
        }
        Ok(self.tables.index(pos, b.i, b.j))
    }

    pub fn basis_element(&self, index: u32) -> StdBasisElement {
        let (k, i, j) = self.tables.split(index);
        StdBasisElement {
            h: self.subgroup.elements()[k],
            i,
            j,
        }
    }

    /// All basis elements, in index order.
    pub fn basis(&self) -> Vec<StdBasisElement> {
        (0..self.dim() as u32)
            .map(|b| self.basis_element(b))
            .collect()
    }

    /// `p_i^-1 h p_j`.
    pub fn degree_of(&self, b: &StdBasisElement) -> Result<Elem, PresentationError> {
        Ok(self.tables.degree(self.basis_index(b)?))
    }

    /// Bilinear extension of
    /// `(u_h e_ij)(u_h' e_kl) = [j = k] alpha(h, h') u_hh' e_il`.
    pub fn multiply(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        let n = self.tables.root_order;
        for (a, ca) in &x.terms {
            let ia = self.basis_index(a).expect("element of this algebra");
            for (b, cb) in &y.terms {
                let ib = self.basis_index(b).expect("element of this algebra");
                if let Some((e, c)) = self.tables.mul_basis(ia, ib) {
                    let coeff = &(ca * cb) * &CycloScalar::root_of_unity(e as i64, n);
                    out.add_term(self.basis_element(c), coeff);
                }
            }
        }
        out
    }

    /// `dims[g] = dim A_g`, indexed by ambient elements.
    pub fn component_dimensions(&self) -> Vec<usize> {
        self.ambient
            .elements()
            .map(|g| self.tables.basis_of_degree(g).len())
            .collect()
    }

    /// First basis triple violating associativity, if any.
    pub fn associativity_violation(&self) -> Option<(u32, u32, u32)> {
        let t = &self.tables;
        let n = t.root_order;
        let d = t.dim() as u32;
        for a in 0..d {
            for b in 0..d {
                let Some((e1, ab)) = t.mul_basis(a, b) else {
                    continue;
                };
                for c in 0..d {
                    let left = t.mul_basis(ab, c).map(|(e2, x)| ((e1 + e2) % n, x));
                    let right = t
                        .mul_basis(b, c)
                        .and_then(|(e2, bc)| t.mul_basis(a, bc).map(|(e3, x)| ((e2 + e3) % n, x)));
                    if left != right {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    pub fn apply_move(&self, m: &Move) -> Result<Presentation, PresentationError> {
        let bad = |s: String| PresentationError::InvalidMoveParameter(s);
        let r = self.tuple.len();
        match m {
            Move::Permute { perm } => {
                let mut seen = vec![false; r];
                if perm.len() != r
                    || perm
                        .iter()
                        .any(|&x| x >= r || std::mem::replace(&mut seen[x], true))
                {
                    return Err(bad(format!("{perm:?} is not a permutation of {r} entries")));
                }
                let tuple = perm.iter().map(|&x| self.tuple[x]).collect();
                Self::new(
                    self.ambient.clone(),
                    self.subgroup.clone(),
                    self.cocycle.clone(),
                    tuple,
                )
            }
            Move::CosetShift { index, h0 } => {
                if *index >= r {
                    return Err(bad(format!("tuple index {} out of range", index + 1)));
                }
                if !self.subgroup.contains(*h0) {
                    return Err(bad(format!("{h0} is not in H")));
                }
                let mut tuple = self.tuple.clone();
                tuple[*index] = self.ambient.mul(*h0, tuple[*index]);
                Self::new(
                    self.ambient.clone(),
                    self.subgroup.clone(),
                    self.cocycle.clone(),
                    tuple,
                )
            }
            Move::Conjugate { g } => {
                if *g >= self.ambient.order() {
                    return Err(bad(format!("{g} is not a group element")));
                }
                let (h, c) = conjugate_cocycle(&self.cocycle, &self.ambient, &self.subgroup, *g)?;
                let tuple = self
                    .tuple
                    .iter()
                    .map(|&p| self.ambient.mul(*g, p))
                    .collect();
                Self::new(self.ambient.clone(), h, c, tuple)
            }
            Move::CocycleReplace { witness } => {
                let c = self
                    .cocycle
                    .twist(witness)
                    .map_err(|e| bad(e.to_string()))?;
                Self::new(
                    self.ambient.clone(),
                    self.subgroup.clone(),
                    c,
                    self.tuple.clone(),
                )
            }
        }
    }

    pub fn apply_moves(&self, moves: &[Move]) -> Result<Presentation, PresentationError> {
        moves.iter().try_fold(self.clone(), |p, m| p.apply_move(m))
    }

    /// Decompose the `N`-graded part `A_N` into blocks.
    pub fn block_decomposition(
        &self,
        n: &Subgroup,
    ) -> Result<BlockDecomposition, PresentationError> {
        let g = &self.ambient;
        let n = Subgroup::new(g, n.elements().to_vec())?;
        let r = self.tuple.len();
        let related = |i: usize, j: usize| {
            let (pi, pj) = (self.tuple[i], self.tuple[j]);
            self.subgroup
                .elements()
                .iter()
                .any(|&h| n.contains(g.mul(g.mul(g.inv(pi), h), pj)))
        };
        let mut class_of = vec![usize::MAX; r];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for i in 0..r {
            if class_of[i] != usize::MAX {
                continue;
            }
            let members: Vec<usize> = (i..r)
                .filter(|&j| class_of[j] == usize::MAX && related(i, j))
                .collect();
            for &j in &members {
                class_of[j] = classes.len();
            }
            classes.push(members);
        }
        let mut blocks = Vec::new();
        for indices in classes {
            let g1 = self.tuple[indices[0]];
            let g1i = g.inv(g1);
            let conj = g.conjugate_subgroup(&self.subgroup, g1i);
            let omega = g.intersect(&conj, &n);
            let coset_tuple: Vec<Elem> = indices
                .iter()
                .map(|&j| {
                    let pj = self.tuple[j];
                    self.subgroup
                        .elements()
                        .iter()
                        .map(|&h| g.mul(g.mul(g1i, h), pj))
                        .filter(|&x| n.contains(x))
                        .min()
                        .expect("related indices meet N")
                })
                .collect();
            let (conj_h, conj_c) = conjugate_cocycle(&self.cocycle, g, &self.subgroup, g1i)?;
            let block_cocycle = restrict(&conj_c, g, &conj_h, &omega)?;
            let presentation =
                Presentation::new(g.clone(), omega.clone(), block_cocycle, coset_tuple.clone())?;
            blocks.push(Block {
                pages: omega.order(),
                matrix_size: indices.len(),
                indices,
                omega,
                coset_tuple,
                presentation,
            });
        }
        Ok(BlockDecomposition {
            subgroup: n,
            blocks,
        })
    }

    /// Basis indices spanning the `N`-part of a block.
    pub fn block_span(&self, n: &Subgroup, indices: &[usize]) -> Vec<u32> {
        let t = &self.tables;
        (0..t.dim() as u32)
            .filter(|&b| {
                indices.contains(&t.row(b))
                    && indices.contains(&t.col(b))
                    && n.contains(t.degree(b))
            })
            .collect()
    }

    pub fn invariant_report(&self) -> InvariantReport {
        InvariantReport::new(self)
    }

    pub fn render_basis(&self, b: &StdBasisElement) -> String {
        format!(
            "u_{} ⊗ e_{{{},{}}}",
            self.ambient.label(b.h),
            b.i + 1,
            b.j + 1
        )
    }

    pub fn labels_of(&self, elems: &[Elem]) -> String {
        elems
            .iter()
            .map(|&x| self.ambient.label(x))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.cocycle.normalized();
        let coc = if c.root_order() == 1 {
            "trivial".to_string()
        } else {
            format!("order {}", c.root_order())
        };
        write!(
            f,
            "H = {{{}}}, cocycle {}, tuple ({})",
            self.labels_of(self.subgroup.elements()),
            coc,
            self.labels_of(&self.tuple)
        )
    }
}

/// One block of an `N`-decomposition.
#[derive(Clone, Debug)]
pub struct Block {
    /// Tuple positions in the block, increasing.
    pub indices: Vec<usize>,
    /// `g_1^-1 H g_1 ∩ N` for the first index.
    pub omega: Subgroup,
    pub pages: usize,
    pub matrix_size: usize,
    /// `n_j ∈ N ∩ g_1^-1 H g_j`.
    pub coset_tuple: Vec<Elem>,
    /// `(Omega, restricted conjugated cocycle, coset_tuple)`.
    pub presentation: Presentation,
}

#[derive(Clone, Debug)]
pub struct BlockDecomposition {
    pub subgroup: Subgroup,
    pub blocks: Vec<Block>,
}

/// A big block: tuple entries whose canonical shift lies in one right coset
/// of the normalizer `N(H_0)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BigBlock {
    /// Least element of the `N(H_0)`-coset.
    pub coset_key: Elem,
    /// Multiplicities of the `H_0`-cosets met inside, decreasing.
    pub multiplicities: Vec<usize>,
}

/// Cohomology classes met in a big block, with multiplicities.
#[derive(Clone, Debug)]
pub struct BlockClasses {
    pub coset_key: Elem,
    /// `t^-1 H_0 t` for any shifted entry `t` of the block.
    pub subgroup: Subgroup,
    /// Class representative and how many tuple entries fall in it.
    pub classes: Vec<(Cocycle, usize)>,
}

/// Invariants of a presentation, unchanged by every basic move.
///
/// `H_0` is the least conjugate of `H`, reached by the least `g`; every
/// tuple entry `p` is shifted to `t = g p`.
#[derive(Clone, Debug)]
pub struct InvariantReport {
    pub dims: Vec<usize>,
    /// Multiplicities of right `H`-cosets in the tuple, decreasing.
    pub coset_multiplicities: Vec<usize>,
    pub h_order: usize,
    pub h_conjugacy_key: Vec<Elem>,
    pub big_blocks: Vec<BigBlock>,
    /// Least, over `n ∈ N(H_0)`, sorted list of the `H_0`-coset keys of `n t`.
    pub tuple_key: Vec<Elem>,
    pub cocycle_classes: Vec<BlockClasses>,
}

impl InvariantReport {
    fn new(p: &Presentation) -> Self {
        let g = p.ambient();
        let h = p.subgroup();
        let dims = p.component_dimensions();
        let mut counts: BTreeMap<Elem, usize> = BTreeMap::new();
        for &x in p.tuple() {
            *counts.entry(g.right_coset_key(h, x)).or_default() += 1;
        }
        let mut coset_multiplicities: Vec<usize> = counts.into_values().collect();
        coset_multiplicities.sort_unstable_by(|a, b| b.cmp(a));

        let (h0, c) = g.canonical_conjugate(h);
        let norm = g.normalizer(&h0);
        let shifted: Vec<Elem> = p.tuple().iter().map(|&x| g.mul(c, x)).collect();
        let (_, alpha0) = conjugate_cocycle(p.cocycle(), g, h, c).expect("cocycle matches H");

        let mut by_block: BTreeMap<Elem, Vec<Elem>> = BTreeMap::new();
        for &t in &shifted {
            by_block
                .entry(g.right_coset_key(&norm, t))
                .or_default()
                .push(t);
        }
        let mut big_blocks = Vec::new();
        let mut cocycle_classes = Vec::new();
        for (&coset_key, members) in &by_block {
            let mut inner: BTreeMap<Elem, usize> = BTreeMap::new();
            for &t in members {
                *inner.entry(g.right_coset_key(&h0, t)).or_default() += 1;
            }
            let mut multiplicities: Vec<usize> = inner.into_values().collect();
            multiplicities.sort_unstable_by(|a, b| b.cmp(a));
            big_blocks.push(BigBlock {
                coset_key,
                multiplicities,
            });
            let mut classes: Vec<(Cocycle, usize)> = Vec::new();
            let mut subgroup = None;
            for &t in members {
                let (k, beta) =
                    conjugate_cocycle(&alpha0, g, &h0, g.inv(t)).expect("cocycle matches H_0");
                subgroup.get_or_insert(k);
                match classes
                    .iter_mut()
                    .find(|(rep, _)| matches!(cohomologous_over_field(rep, &beta), Ok(Some(_))))
                {
                    Some((_, count)) => *count += 1,
                    None => classes.push((beta, 1)),
                }
            }
            cocycle_classes.push(BlockClasses {
                coset_key,
                subgroup: subgroup.expect("nonempty block"),
                classes,
            });
        }
        let tuple_key = norm
            .elements()
            .iter()
            .map(|&n| {
                let mut keys: Vec<Elem> = shifted
                    .iter()
                    .map(|&t| g.right_coset_key(&h0, g.mul(n, t)))
                    .collect();
                keys.sort_unstable();
                keys
            })
            .min()
            .expect("normalizer is nonempty");
        InvariantReport {
            dims,
            coset_multiplicities,
            h_order: h.order(),
            h_conjugacy_key: h0.elements().to_vec(),
            big_blocks,
            tuple_key,
            cocycle_classes,
        }
    }

    /// Human-readable differences from `other`; empty iff the reports agree.
    pub fn differences(&self, other: &Self) -> Vec<String> {
        let mut out = Vec::new();
        if self.dims != other.dims {
            out.push(format!(
                "dimensions differ: {:?} vs {:?}",
                self.dims, other.dims
            ));
        }
        if self.coset_multiplicities != other.coset_multiplicities {
            out.push(format!(
                "coset multiplicities differ: {:?} vs {:?}",
                self.coset_multiplicities, other.coset_multiplicities
            ));
        }
        if self.h_order != other.h_order {
            out.push(format!(
                "|H| differs: {} vs {}",
                self.h_order, other.h_order
            ));
        }
        if self.h_conjugacy_key != other.h_conjugacy_key {
            out.push(format!(
                "H is not conjugate: {:?} vs {:?}",
                self.h_conjugacy_key, other.h_conjugacy_key
            ));
        }
        if self.big_blocks != other.big_blocks {
            out.push(format!(
                "normalizer blocks differ: {:?} vs {:?}",
                self.big_blocks, other.big_blocks
            ));
        }
        if self.tuple_key != other.tuple_key {
            out.push(format!(
                "tuple cosets differ: {:?} vs {:?}",
                self.tuple_key, other.tuple_key
            ));
        }
        if out.is_empty() && !self.same_classes(other) {
            out.push("cocycle classes differ".to_string());
        }
        out
    }

    fn same_classes(&self, other: &Self) -> bool {
        if self.cocycle_classes.len() != other.cocycle_classes.len() {
            return false;
        }
        self.cocycle_classes
            .iter()
            .zip(&other.cocycle_classes)
            .all(|(a, b)| {
                if a.coset_key != b.coset_key
                    || a.subgroup != b.subgroup
                    || a.classes.len() != b.classes.len()
                {
                    return false;
                }
                // joint registry: match each class of `b` to one of `a`
                let mut used = vec![false; a.classes.len()];
                b.classes.iter().all(|(rep, count)| {
                    let hit = a.classes.iter().enumerate().find(|(k, (r, c))| {
                        !used[*k]
                            && c == count
                            && matches!(cohomologous_over_field(r, rep), Ok(Some(_)))
                    });
                    match hit {
                        Some((k, _)) => {
                            used[k] = true;
                            true
                        }
                        None => false,
                    }
                })
            })
    }

    /// Fingerprints of the cocycle classes per big block: indices into a
    /// list of representatives shared with `others`.
    pub fn class_fingerprints(reports: &[&InvariantReport]) -> Vec<Vec<Vec<(usize, usize)>>> {
        let mut registry: Vec<Cocycle> = Vec::new();
        reports
            .iter()
            .map(|rep| {
                rep.cocycle_classes
                    .iter()
                    .map(|bc| {
                        let mut fp: Vec<(usize, usize)> = bc
                            .classes
                            .iter()
                            .map(|(c, count)| {
                                let idx = registry.iter().position(|r| {
                                    matches!(cohomologous_over_field(r, c), Ok(Some(_)))
                                });
                                let idx = idx.unwrap_or_else(|| {
                                    registry.push(c.clone());
                                    registry.len() - 1
                                });
                                (idx, *count)
                            })
                            .collect();
                        fp.sort_unstable();
                        fp
                    })
                    .collect()
            })
            .collect()
    }
}

impl PartialEq for InvariantReport {
    fn eq(&self, other: &Self) -> bool {
        self.differences(other).is_empty()
    }
}

/// JSON form of a presentation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PresentationFile {
    pub group: GroupSpec,
    #[serde(rename = "H")]
    pub h: Vec<Elem>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cocycle: Option<CocycleFile>,
    pub tuple: Vec<Elem>,
}

impl PresentationFile {
    pub fn build(&self) -> Result<Presentation, PresentationError> {
        let g = self.group.build()?;
        let h = Subgroup::new(&g, self.h.clone())?;
        let hg = h.induced_group(&g);
        let c = match &self.cocycle {
            None => Cocycle::trivial(hg, 1),
            Some(file) => {
                if let Some(spec) = &file.group {
                    if spec.build()? != hg {
                        return Err(PresentationError::CocycleGroupMismatch);
                    }
                }
                Cocycle::new(hg, file.n, file.exps.clone())?
            }
        };
        Presentation::new(g, h, c, self.tuple.clone())
    }
}

impl From<&Presentation> for PresentationFile {
    fn from(p: &Presentation) -> Self {
        PresentationFile {
            group: GroupSpec::Table(p.ambient().into()),
            h: p.subgroup().elements().to_vec(),
            cocycle: Some(CocycleFile::from_cocycle(p.cocycle(), false)),
            tuple: p.tuple().to_vec(),
        }
    }
}

impl Serialize for Presentation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PresentationFile::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Presentation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        PresentationFile::deserialize(d)?
            .build()
            .map_err(serde::de::Error::custom)
    }
}

/// Tuple entries grouped by right `H`-coset key.
pub fn coset_classes(p: &Presentation) -> BTreeMap<Elem, Vec<usize>> {
    let mut out: BTreeMap<Elem, Vec<usize>> = BTreeMap::new();
    for (i, &x) in p.tuple().iter().enumerate() {
        out.entry(p.ambient().right_coset_key(p.subgroup(), x))
            .or_default()
            .push(i);
    }
    out
}

/// Degrees with nonzero component, as a set.
pub fn support(p: &Presentation) -> BTreeSet<Elem> {
    p.component_dimensions()
        .iter()
        .enumerate()
        .filter(|(_, &d)| d > 0)
        .map(|(g, _)| g)
        .collect()
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::cocycle::cohomology_classes;
    use proptest::prelude::*;

    pub(crate) fn bilinear_v4() -> Cocycle {
        let exps = (0..4)
            .map(|x| (0..4).map(|y| (x & (y >> 1) & 1) as u32).collect())
            .collect();
        Cocycle::new(Group::klein_four(), 2, exps).unwrap()
    }

    pub(crate) fn elementary(g: Group, tuple: Vec<Elem>) -> Presentation {
        let e = g.trivial_subgroup();
        Presentation::with_trivial_cocycle(g, e, tuple).unwrap()
    }

    pub(crate) fn fine(c: Cocycle) -> Presentation {
        let g = c.group().clone();
        let e = g.identity();
        Presentation::new(g.clone(), g.whole(), c, vec![e]).unwrap()
    }

    fn b(h: Elem, i: usize, j: usize) -> StdBasisElement {
        StdBasisElement { h, i, j }
    }

    #[test]
    fn degrees() {
        let p = elementary(Group::cyclic(2), vec![0, 1]);
        assert_eq!(p.degree_of(&b(0, 0, 1)).unwrap(), 1);
        assert_eq!(p.degree_of(&b(0, 1, 0)).unwrap(), 1);
        assert_eq!(p.degree_of(&b(0, 1, 1)).unwrap(), 0);
        assert!(matches!(
            p.degree_of(&b(1, 0, 0)),
            Err(PresentationError::IndexOutOfRange(_))
        ));
        assert_eq!(p.component_dimensions(), vec![2, 2]);
        assert_eq!(
            elementary(Group::cyclic(2), vec![0, 0]).component_dimensions(),
            vec![4, 0]
        );
        assert_eq!(fine(bilinear_v4()).component_dimensions(), vec![1; 4]);
    }

    #[test]
    fn twisted_products() {
        let p = fine(bilinear_v4());
        let (a, bb, ab) = (2, 1, 3);
        let x = AlgebraElement::basis(b(a, 0, 0));
        let y = AlgebraElement::basis(b(bb, 0, 0));
        assert_eq!(p.multiply(&x, &y), AlgebraElement::basis(b(ab, 0, 0)));
        assert_eq!(
            p.multiply(&y, &x),
            AlgebraElement::term(b(ab, 0, 0), CycloScalar::from_int(1, -1))
        );
        let q = elementary(Group::cyclic(2), vec![0, 1]);
        let e01 = AlgebraElement::basis(b(0, 0, 1));
        assert!(q.multiply(&e01, &e01).is_zero());
        assert_eq!(q.multiply(&e01, &AlgebraElement::basis(b(0, 1, 1))), e01);
    }

    #[test]
    fn moves() {
        let p = elementary(Group::cyclic(2), vec![0, 1]);
        let q = p.apply_move(&Move::Conjugate { g: 1 }).unwrap();
        assert_eq!(q.tuple(), &[1, 0]);
        assert_eq!(
            p.apply_move(&Move::Permute { perm: vec![0, 1] }).unwrap(),
            p
        );
        assert!(p.apply_move(&Move::Permute { perm: vec![0, 0] }).is_err());
        assert!(p.apply_move(&Move::CosetShift { index: 0, h0: 1 }).is_err());
        let d4 = Group::dihedral(4);
        let h = d4.subgroup_closure(&[4]).unwrap();
        let c = Cocycle::trivial(h.induced_group(&d4), 1);
        let p = Presentation::new(d4.clone(), h, c, vec![0, 1, 5]).unwrap();
        let back = p
            .apply_move(&Move::Conjugate { g: 1 })
            .unwrap()
            .apply_move(&Move::Conjugate { g: d4.inv(1) })
            .unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn block_examples() {
        let p = elementary(Group::cyclic(2), vec![0, 1]);
        let g = p.ambient().clone();
        let d = p.block_decomposition(&g.whole()).unwrap();
        assert_eq!(d.blocks.len(), 1);
        let d = p.block_decomposition(&g.trivial_subgroup()).unwrap();
        assert_eq!(
            d.blocks
                .iter()
                .map(|b| b.indices.clone())
                .collect::<Vec<_>>(),
            vec![vec![0], vec![1]]
        );
        let v4 = Group::klein_four();
        let h = v4.subgroup_closure(&[2]).unwrap();
        let p = Presentation::with_trivial_cocycle(v4.clone(), h.clone(), vec![0, 1]).unwrap();
        let d = p.block_decomposition(&h).unwrap();
        assert_eq!(d.blocks.len(), 2);
        assert!(d.blocks.iter().all(|b| b.pages == 2 && b.matrix_size == 1));
    }

    #[test]
    fn report_examples() {
        let f = fine(bilinear_v4()).invariant_report();
        assert_eq!(f.dims, vec![1; 4]);
        assert_eq!(f.coset_multiplicities, vec![1]);
        assert_eq!(f.big_blocks.len(), 1);
        let e = elementary(Group::klein_four(), vec![0, 2]).invariant_report();
        assert_eq!(e.dims, vec![2, 0, 2, 0]);
        let diff = f.differences(&e);
        assert!(diff.iter().any(|d| d.contains("dimensions")));
        assert!(diff.iter().any(|d| d.contains("|H|")));
        let t = fine(Cocycle::trivial(Group::klein_four(), 1)).invariant_report();
        assert_eq!(
            f.differences(&t),
            vec!["cocycle classes differ".to_string()]
        );
    }

    #[test]
    fn json_roundtrip() {
        let p = fine(bilinear_v4());
        let s = serde_json::to_string(&p).unwrap();
        let q: Presentation = serde_json::from_str(&s).unwrap();
        assert_eq!(p, q);
        let r: Presentation =
            serde_json::from_str(r#"{"group":"C2","H":[0],"tuple":[0,1]}"#).unwrap();
        assert_eq!(r.component_dimensions(), vec![2, 2]);
    }

    /// Ideal generated by a basis element, by closure under two-sided
    /// multiplication with basis elements.
    fn ideal_is_everything(p: &Presentation, start: u32) -> bool {
        let t = p.tables();
        let mut seen = vec![false; t.dim()];
        seen[start as usize] = true;
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for y in 0..t.dim() as u32 {
                for z in [t.mul_basis(x, y), t.mul_basis(y, x)].into_iter().flatten() {
                    if !std::mem::replace(&mut seen[z.1 as usize], true) {
                        stack.push(z.1);
                    }
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    pub(crate) fn groups() -> Vec<Group> {
        vec![
            Group::cyclic(2),
            Group::cyclic(4),
            Group::klein_four(),
            Group::symmetric(3),
            Group::dihedral(4),
        ]
    }

    prop_compose! {
        pub(crate) fn arb_presentation()(gi in 0usize..5, hi in 0usize..100, ci in 0usize..4,
                              rho in proptest::collection::vec(0u32..4, 8),
                              tuple in proptest::collection::vec(0usize..8, 1..4)) -> Presentation {
            let g = groups().swap_remove(gi);
            let subs: Vec<Subgroup> = g.subgroups().into_iter().filter(|s| s.order() <= 4).collect();
            let h = subs[hi % subs.len()].clone();
            let hg = h.induced_group(&g);
            let classes = cohomology_classes(&hg);
            let mut vals: Vec<u32> = rho.into_iter().take(h.order()).collect();
            vals[hg.identity()] = 0;
            let c = classes[ci % classes.len()]
                .twist(&CochainWitness { n: 4, values: vals })
                .unwrap();
            let tuple = tuple.into_iter().map(|x| x % g.order()).collect();
            Presentation::new(g, h, c, tuple).unwrap()
        }
    }

    prop_compose! {
        pub(crate) fn arb_move(p: Presentation)(kind in 0usize..4, a in 0usize..64, b in 0usize..64,
                                     rho in proptest::collection::vec(0u32..4, 8)) -> Move {
            let r = p.matrix_size();
            let h = p.subgroup().elements();
            match kind {
                0 => {
                    let mut perm: Vec<usize> = (0..r).collect();
                    perm.rotate_left(a % r);
                    if r > 1 {
                        perm.swap(0, b % r);
                    }
                    Move::Permute { perm }
                }
                1 => Move::CosetShift { index: a % r, h0: h[b % h.len()] },
                2 => Move::Conjugate { g: a % p.ambient().order() },
                _ => {
                    let mut values: Vec<u32> = rho.into_iter().take(h.len()).collect();
                    values[p.cocycle().group().identity()] = 0;
                    Move::CocycleReplace { witness: CochainWitness { n: 4, values } }
                }
            }
        }
    }

    fn with_move() -> impl Strategy<Value = (Presentation, Move)> {
        arb_presentation().prop_flat_map(|p| (Just(p.clone()), arb_move(p)))
    }

    proptest! {
        #[test]
        fn structure(p in arb_presentation()) {
            prop_assert_eq!(p.dim(), p.subgroup().order() * p.matrix_size().pow(2));
            prop_assert_eq!(p.component_dimensions().iter().sum::<usize>(), p.dim());
            if p.dim() <= 64 {
                prop_assert_eq!(p.associativity_violation(), None);
            }
            let t = p.tables();
            for a in 0..t.dim() as u32 {
                for b in 0..t.dim() as u32 {
                    if let Some((_, c)) = t.mul_basis(a, b) {
                        prop_assert_eq!(t.degree(c), p.ambient().mul(t.degree(a), t.degree(b)));
                    }
                }
            }
            if p.dim() <= 36 {
                for s in 0..t.dim() as u32 {
                    prop_assert!(ideal_is_everything(&p, s));
                }
            }
        }

        #[test]
        fn blocks(p in arb_presentation(), ni in 0usize..100) {
            let g = p.ambient();
            let subs = g.subgroups();
            let n = &subs[ni % subs.len()];
            let d = p.block_decomposition(n).unwrap();
            let mut all: Vec<usize> = d.blocks.iter().flat_map(|b| b.indices.clone()).collect();
            all.sort_unstable();
            prop_assert_eq!(all, (0..p.matrix_size()).collect::<Vec<_>>());
            let mut total = 0;
            for blk in &d.blocks {
                let span = p.block_span(n, &blk.indices);
                prop_assert_eq!(blk.pages * blk.matrix_size.pow(2), span.len());
                total += span.len();
                // every pair of related indices meets N in |Omega| elements
                for &i in &blk.indices {
                    for &j in &blk.indices {
                        let (pi, pj) = (p.tuple()[i], p.tuple()[j]);
                        let meet = p.subgroup().elements().iter()
                            .filter(|&&h| n.contains(g.mul(g.mul(g.inv(pi), h), pj)))
                            .count();
                        prop_assert_eq!(meet, blk.pages);
                    }
                }
                // the block presentation has the same graded dimensions
                let mut dims = vec![0usize; g.order()];
                for &b in &span {
                    dims[p.tables().degree(b)] += 1;
                }
                prop_assert_eq!(blk.presentation.component_dimensions(), dims);
                // shifting the sub-tuple into N by basic moves reproduces the
                // block presentation as the N-part
                let sub: Vec<Elem> = blk.indices.iter().map(|&i| p.tuple()[i]).collect();
                let g1 = sub[0];
                let mut q = Presentation::new(g.clone(), p.subgroup().clone(), p.cocycle().clone(), sub.clone()).unwrap();
                for (a, (&na, &pa)) in blk.coset_tuple.iter().zip(&sub).enumerate() {
                    let c = g.mul(g.mul(g1, na), g.inv(pa));
                    q = q.apply_move(&Move::CosetShift { index: a, h0: c }).unwrap();
                }
                q = q.apply_move(&Move::Conjugate { g: g.inv(g1) }).unwrap();
                prop_assert_eq!(q.tuple(), &blk.coset_tuple[..]);
                prop_assert_eq!(&g.intersect(q.subgroup(), n), &blk.omega);
                let restricted = restrict(q.cocycle(), g, q.subgroup(), &blk.omega).unwrap();
                prop_assert_eq!(&restricted, blk.presentation.cocycle());
            }
            let in_n: usize = n.elements().iter().map(|&x| p.component_dimensions()[x]).sum();
            prop_assert_eq!(total, in_n);
        }

        #[test]
        fn report_is_move_invariant((p, m) in with_move()) {
            let q = p.apply_move(&m).unwrap();
            prop_assert_eq!(q.invariant_report().differences(&p.invariant_report()), Vec::<String>::new());
        }
    }
}
