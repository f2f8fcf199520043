//! Multilinear graded polynomials: monomials, alternation, composition,
//! evaluation on presented algebras and exhaustive identity checking.
//!
//! A polynomial is stored lazily as `Alt_{S_1} ... Alt_{S_k} (sum_t c_t w_t)`
//! together with optional substitutions `z -> q_z`, so alternations and
//! substitutions are never expanded unless asked for.

mod engine;
mod generators;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cocycle::CocycleError;
use crate::cyclo::CycloScalar;
use crate::finite_group::{Elem, Group};
use crate::presentation::{PresentationError, StdBasisElement};

pub use engine::{
    evaluate, evaluate_basis, is_identity, is_identity_with, IdentityProof, IdentityVerdict,
    DEFAULT_BUDGET,
};
pub use generators::{
    binomial_lambda, build_binomial, build_binomial_embedded, build_block_probe,
    build_block_probe_scoped, build_block_separators, build_cocycle_separator,
    build_cocycle_separator_embedded, build_global_probe, find_separating_binomial, regev,
    AlternationScope, BinomialSpec, CocycleSeparator, Probe, DEFAULT_SIZE_CAP,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VarId(pub u32);

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VarTag {
    Designated,
    Frame,
    Bridge,
    Plain,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedVariable {
    pub id: VarId,
    pub degree: Elem,
    pub tag: VarTag,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedMonomial {
    pub coefficient: CycloScalar,
    pub factors: Vec<VarId>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("variable {0} declared twice")]
    DuplicateVariable(VarId),
    #[error("unknown variable {0}")]
    UnknownVariable(VarId),
    #[error("monomial {0} does not use every variable exactly once")]
    NotMultilinear(usize),
    #[error("polynomial with monomials must have variables")]
    NoVariables,
    #[error("alternation sets are not disjoint")]
    SetsNotDisjoint,
    #[error("alternation set mixes degrees")]
    MixedDegreesInSet,
    #[error("variable {0} is substituted and cannot be alternated")]
    ComposedAlternation(VarId),
    #[error("no value assigned to variable {0}")]
    MissingAssignment(VarId),
    #[error("value of {var} is not homogeneous of degree {expected}")]
    DegreeMismatch { var: VarId, expected: Elem },
    #[error("products of the degrees disagree")]
    ProductsDisagree,
    #[error("invalid permutation {0:?}")]
    InvalidPermutation(Vec<usize>),
    #[error("cocycle {0} of the list is cohomologous to the separated cocycle")]
    CocyclesCohomologous(usize),
    #[error("no separating binomial of length at most 4")]
    NoSeparatingBinomial,
    #[error("size {size} exceeds the cap {cap}")]
    BudgetExceeded { size: u128, cap: u128 },
    #[error("degree {0} is not an element of the group")]
    BadDegree(Elem),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Cocycle(#[from] CocycleError),
}

/// `Alt_{S_1} ... Alt_{S_k} (sum_t c_t w_t)` with substitutions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPolynomial {
    variables: Vec<GradedVariable>,
    monomials: Vec<GradedMonomial>,
    alternation: Vec<Vec<VarId>>,
    composition: BTreeMap<VarId, GradedPolynomial>,
}

impl GradedPolynomial {
    /// A polynomial with the given variables and monomials; every monomial
    /// must use every variable exactly once.
    pub fn new(
        variables: Vec<GradedVariable>,
        monomials: Vec<GradedMonomial>,
    ) -> Result<Self, PolyError> {
        let p = GradedPolynomial {
            variables,
            monomials,
            alternation: Vec::new(),
            composition: BTreeMap::new(),
        };
        p.validate()?;
        Ok(p)
    }

    /// The single monomial `coefficient * x_1 ... x_k` in the given order.
    pub fn monomial(variables: Vec<GradedVariable>) -> Self {
        let factors = variables.iter().map(|v| v.id).collect();
        GradedPolynomial::new(
            variables,
            vec![GradedMonomial {
                coefficient: CycloScalar::one(1),
                factors,
            }],
        )
        .expect("a single monomial over distinct variables is multilinear")
    }

    /// The zero polynomial over the given variables.
    pub fn zero(variables: Vec<GradedVariable>) -> Self {
        GradedPolynomial {
            variables,
            monomials: Vec::new(),
            alternation: Vec::new(),
            composition: BTreeMap::new(),
        }
    }

    fn validate(&self) -> Result<(), PolyError> {
        let mut ids = HashMap::new();
        for (k, v) in self.variables.iter().enumerate() {
            if ids.insert(v.id, k).is_some() {
                return Err(PolyError::DuplicateVariable(v.id));
            }
        }
        if self.variables.is_empty() && !self.monomials.is_empty() {
            return Err(PolyError::NoVariables);
        }
        for (t, m) in self.monomials.iter().enumerate() {
            let mut seen = vec![false; self.variables.len()];
            for f in &m.factors {
                let &k = ids.get(f).ok_or(PolyError::UnknownVariable(*f))?;
                if std::mem::replace(&mut seen[k], true) {
                    return Err(PolyError::NotMultilinear(t));
                }
            }
            if seen.iter().any(|s| !s) {
                return Err(PolyError::NotMultilinear(t));
            }
        }
        let mut in_set = BTreeSet::new();
        for s in &self.alternation {
            for v in s {
                if !ids.contains_key(v) {
                    return Err(PolyError::UnknownVariable(*v));
                }
                if !in_set.insert(*v) {
                    return Err(PolyError::SetsNotDisjoint);
                }
                if self.composition.contains_key(v) {
                    return Err(PolyError::ComposedAlternation(*v));
                }
            }
        }
        for z in self.composition.keys() {
            if !ids.contains_key(z) {
                return Err(PolyError::UnknownVariable(*z));
            }
        }
        // substituted polynomials share no ids with this level or each other
        let mut all: BTreeSet<VarId> = ids.keys().copied().collect();
        for q in self.composition.values() {
            for id in q.all_ids() {
                if !all.insert(id) {
                    return Err(PolyError::DuplicateVariable(id));
                }
            }
        }
        Ok(())
    }

    /// Alternate over each of the given disjoint sets; every set must have
    /// a single degree.
    pub fn alternate(self, sets: &[Vec<VarId>]) -> Result<Self, PolyError> {
        for s in sets {
            let degs: BTreeSet<Elem> = s
                .iter()
                .map(|v| {
                    self.variable(*v)
                        .map(|x| x.degree)
                        .ok_or(PolyError::UnknownVariable(*v))
                })
                .collect::<Result<_, _>>()?;
            if degs.len() > 1 {
                return Err(PolyError::MixedDegreesInSet);
            }
        }
        self.alternate_mixed(sets)
    }

    /// Alternation without the single-degree requirement (used for the
    /// graded central polynomials, whose `X` set carries one variable of a
    /// different degree).
    pub(crate) fn alternate_mixed(mut self, sets: &[Vec<VarId>]) -> Result<Self, PolyError> {
        self.alternation
            .extend(sets.iter().filter(|s| !s.is_empty()).cloned());
        self.validate()?;
        Ok(self)
    }

    /// Substitute `sub` for the variable `z` (ids of `sub` must be fresh).
    pub fn compose(mut self, z: VarId, sub: GradedPolynomial) -> Result<Self, PolyError> {
        if self.variable(z).is_none() {
            return Err(PolyError::UnknownVariable(z));
        }
        self.composition.insert(z, sub);
        self.validate()?;
        Ok(self)
    }

    pub fn variables(&self) -> &[GradedVariable] {
        &self.variables
    }

    pub fn variable(&self, id: VarId) -> Option<&GradedVariable> {
        self.variables.iter().find(|v| v.id == id)
    }

    pub fn monomials(&self) -> &[GradedMonomial] {
        &self.monomials
    }

    pub fn alternation(&self) -> &[Vec<VarId>] {
        &self.alternation
    }

    pub fn composition(&self) -> &BTreeMap<VarId, GradedPolynomial> {
        &self.composition
    }

    pub fn is_composed(&self, id: VarId) -> bool {
        self.composition.contains_key(&id)
    }

    /// Every id used at any level.
    pub fn all_ids(&self) -> Vec<VarId> {
        let mut out: Vec<VarId> = self.variables.iter().map(|v| v.id).collect();
        for q in self.composition.values() {
            out.extend(q.all_ids());
        }
        out
    }

    /// Largest id at any level plus one.
    pub fn next_id(&self) -> u32 {
        self.all_ids().iter().map(|v| v.0 + 1).max().unwrap_or(0)
    }

    /// The variables that receive values: top-level variables that are not
    /// substituted, and recursively the leaves of substituted polynomials,
    /// in declaration order.
    pub fn leaf_variables(&self) -> Vec<GradedVariable> {
        let mut out = Vec::new();
        for v in &self.variables {
            match self.composition.get(&v.id) {
                Some(q) => out.extend(q.leaf_variables()),
                None => out.push(v.clone()),
            }
        }
        out
    }

    /// Renumber every id to `start, start + 1, ...` in leaf-traversal
    /// order of declaration; returns the old-to-new map.
    pub fn reindexed(&self, start: u32) -> (Self, BTreeMap<VarId, VarId>) {
        let mut map = BTreeMap::new();
        let mut next = start;
        let p = self.reindex_into(&mut next, &mut map);
        (p, map)
    }

    fn reindex_into(&self, next: &mut u32, map: &mut BTreeMap<VarId, VarId>) -> Self {
        for v in &self.variables {
            map.insert(v.id, VarId(*next));
            *next += 1;
        }
        let composition = self
            .composition
            .iter()
            .map(|(z, q)| (map[z], q.reindex_into(next, map)))
            .collect();
        let m = |v: &VarId| map[v];
        GradedPolynomial {
            variables: self
                .variables
                .iter()
                .map(|v| GradedVariable {
                    id: m(&v.id),
                    ..v.clone()
                })
                .collect(),
            monomials: self
                .monomials
                .iter()
                .map(|t| GradedMonomial {
                    coefficient: t.coefficient.clone(),
                    factors: t.factors.iter().map(m).collect(),
                })
                .collect(),
            alternation: self
                .alternation
                .iter()
                .map(|s| s.iter().map(m).collect())
                .collect(),
            composition,
        }
    }

    /// Product of two polynomials in different variables (ids of `other`
    /// are shifted past those of `self` first). Returns the product and the
    /// id map applied to `other`.
    pub fn product(&self, other: &GradedPolynomial) -> (Self, BTreeMap<VarId, VarId>) {
        let (other, map) = other.reindexed(self.next_id());
        (Self::concat_disjoint(&[self.clone(), other]), map)
    }

    /// Product of polynomials whose ids are already pairwise disjoint.
    pub(crate) fn concat_disjoint(parts: &[GradedPolynomial]) -> Self {
        let mut variables = Vec::new();
        let mut alternation = Vec::new();
        let mut composition = BTreeMap::new();
        let mut monomials = vec![GradedMonomial {
            coefficient: CycloScalar::one(1),
            factors: Vec::new(),
        }];
        for p in parts {
            variables.extend(p.variables.iter().cloned());
            alternation.extend(p.alternation.iter().cloned());
            composition.extend(p.composition.iter().map(|(k, v)| (*k, v.clone())));
            let mut next = Vec::with_capacity(monomials.len() * p.monomials.len());
            for a in &monomials {
                for b in &p.monomials {
                    let mut factors = a.factors.clone();
                    factors.extend(&b.factors);
                    next.push(GradedMonomial {
                        coefficient: &a.coefficient * &b.coefficient,
                        factors,
                    });
                }
            }
            monomials = next;
        }
        let p = GradedPolynomial {
            variables,
            monomials,
            alternation,
            composition,
        };
        debug_assert_eq!(p.validate(), Ok(()));
        p
    }

    /// Number of monomials after expanding alternations (substitutions are
    /// counted as single variables), saturating.
    pub fn expanded_len(&self) -> u128 {
        let mut n = self.monomials.len() as u128;
        for s in &self.alternation {
            for k in 2..=s.len() as u128 {
                n = n.saturating_mul(k);
            }
        }
        n
    }

    /// Number of leaf variables plus top-level monomials, at every level.
    pub fn size(&self) -> u128 {
        self.variables.len() as u128
            + self.monomials.len() as u128
            + self.composition.values().map(|q| q.size()).sum::<u128>()
    }

    /// The explicit sum of monomials with alternations expanded and equal
    /// words merged (substituted variables stay as variables).
    pub fn expanded(&self, cap: u128) -> Result<Vec<GradedMonomial>, PolyError> {
        let size = self.expanded_len();
        if size > cap {
            return Err(PolyError::BudgetExceeded { size, cap });
        }
        let mut acc: BTreeMap<Vec<VarId>, CycloScalar> = BTreeMap::new();
        let perms: Vec<Vec<(Vec<usize>, bool)>> = self
            .alternation
            .iter()
            .map(|s| permutations_with_parity(s.len()))
            .collect();
        let mut choice = vec![0usize; perms.len()];
        loop {
            let mut rename: HashMap<VarId, VarId> = HashMap::new();
            let mut odd = false;
            for (k, s) in self.alternation.iter().enumerate() {
                let (perm, parity) = &perms[k][choice[k]];
                odd ^= parity;
                for (a, &b) in perm.iter().enumerate() {
                    rename.insert(s[a], s[b]);
                }
            }
            for m in &self.monomials {
                let word: Vec<VarId> = m
                    .factors
                    .iter()
                    .map(|v| *rename.get(v).unwrap_or(v))
                    .collect();
                let c = if odd {
                    -&m.coefficient
                } else {
                    m.coefficient.clone()
                };
                match acc.get_mut(&word) {
                    Some(x) => *x += &c,
                    None => {
                        acc.insert(word, c);
                    }
                }
            }
            // odometer over permutation tuples
            let mut k = 0;
            loop {
                if k == choice.len() {
                    return Ok(acc
                        .into_iter()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(factors, coefficient)| GradedMonomial {
                            coefficient: coefficient.normalized(),
                            factors,
                        })
                        .collect());
                }
                choice[k] += 1;
                if choice[k] < perms[k].len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
        }
    }

    /// The degree shared by every monomial, if homogeneous. Substituted
    /// variables count with their declared degree.
    pub fn homogeneous_degree(&self, group: &Group) -> Option<Elem> {
        let deg: HashMap<VarId, Elem> = self.variables.iter().map(|v| (v.id, v.degree)).collect();
        if deg.values().any(|&d| d >= group.order()) {
            return None;
        }
        let word_degree = |w: &[VarId]| {
            w.iter()
                .fold(group.identity(), |acc, v| group.mul(acc, deg[v]))
        };
        let mut result = None;
        // within a set, only positions of non-identity degrees matter
        let mixed = self.alternation.iter().any(|s| {
            s.iter().filter(|v| deg[v] != group.identity()).count() > 1
                && s.iter().map(|v| deg[v]).collect::<BTreeSet<_>>().len() > 1
        });
        let words: Vec<Vec<VarId>> = if mixed {
            self.expanded(1 << 20)
                .ok()?
                .into_iter()
                .map(|m| m.factors)
                .collect()
        } else {
            self.monomials.iter().map(|m| m.factors.clone()).collect()
        };
        for w in &words {
            let d = word_degree(w);
            if *result.get_or_insert(d) != d {
                return None;
            }
        }
        for (z, q) in &self.composition {
            if q.homogeneous_degree(group)? != deg[z] && !q.monomials.is_empty() {
                return None;
            }
        }
        result.or(Some(group.identity()))
    }

    /// Human-readable form using `x_{k,g}` (designated and plain), `y_{k,g}`
    /// (frames), `w_{k,g}` (bridges) and `z_{k,g}` (substituted).
    pub fn render(&self, group: &Group) -> String {
        let name = |id: VarId| -> String {
            let v = self.variable(id).expect("declared");
            let letter = if self.is_composed(id) {
                "z"
            } else {
                match v.tag {
                    VarTag::Designated | VarTag::Plain => "x",
                    VarTag::Frame => "y",
                    VarTag::Bridge => "w",
                }
            };
            format!("{letter}_{{{},{}}}", id.0, group.label(v.degree))
        };
        let body = if self.monomials.is_empty() {
            "0".to_string()
        } else {
            self.monomials
                .iter()
                .map(|m| {
                    let word = m
                        .factors
                        .iter()
                        .map(|v| name(*v))
                        .collect::<Vec<_>>()
                        .join(" ");
                    if m.coefficient.is_one() {
                        word
                    } else {
                        format!("({}) {}", m.coefficient, word)
                    }
                })
                .collect::<Vec<_>>()
                .join(" + ")
        };
        let mut out = String::new();
        for s in &self.alternation {
            let names: Vec<String> = s.iter().map(|v| name(*v)).collect();
            out.push_str(&format!("Alt{{{}}} ", names.join(", ")));
        }
        if self.alternation.is_empty() {
            out.push_str(&body);
        } else {
            out.push_str(&format!("[{body}]"));
        }
        for (z, q) in &self.composition {
            out.push_str(&format!(
                "\n  where {} = {}",
                name(*z),
                q.render(group).replace('\n', "\n  ")
            ));
        }
        out
    }
}

/// All permutations of `0..n` with their parity (`true` = odd).
pub(crate) fn permutations_with_parity(n: usize) -> Vec<(Vec<usize>, bool)> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    heap_permute(n, &mut p, &mut out);
    out.into_iter()
        .map(|p| {
            let odd = parity(&p);
            (p, odd)
        })
        .collect()
}

fn heap_permute(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(p.clone());
        return;
    }
    for i in 0..k - 1 {
        heap_permute(k - 1, p, out);
        if k.is_multiple_of(2) {
            p.swap(i, k - 1);
        } else {
            p.swap(0, k - 1);
        }
    }
    heap_permute(k - 1, p, out);
}

/// Parity of a permutation given as an image array (`true` = odd).
pub(crate) fn parity(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    let mut odd = false;
    for s in 0..perm.len() {
        let mut len = 0;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            len += 1;
        }
        if len > 0 && len % 2 == 0 {
            odd = !odd;
        }
    }
    odd
}

#[derive(Serialize, Deserialize)]
struct PolynomialFile {
    variables: Vec<GradedVariable>,
    monomials: Vec<GradedMonomial>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    alternation: Vec<Vec<VarId>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    composition: BTreeMap<VarId, GradedPolynomial>,
}

impl Serialize for GradedPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolynomialFile {
            variables: self.variables.clone(),
            monomials: self.monomials.clone(),
            alternation: self.alternation.clone(),
            composition: self.composition.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GradedPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let f = PolynomialFile::deserialize(d)?;
        let p = GradedPolynomial {
            variables: f.variables,
            monomials: f.monomials,
            alternation: f.alternation,
            composition: f.composition,
        };
        p.validate().map_err(serde::de::Error::custom)?;
        Ok(p)
    }
}

/// Leaf assignment of basis elements, keyed by variable.
pub type BasisAssignment = BTreeMap<VarId, StdBasisElement>;

/// JSON form of a [`BasisAssignment`]: a list of `{var, basis}` entries.
pub mod assignment_serde {
    use super::{BasisAssignment, StdBasisElement, VarId};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Entry {
        var: VarId,
        basis: StdBasisElement,
    }

    pub fn serialize<S: Serializer>(a: &BasisAssignment, s: S) -> Result<S::Ok, S::Error> {
        a.iter()
            .map(|(&var, &basis)| Entry { var, basis })
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BasisAssignment, D::Error> {
        Ok(Vec::<Entry>::deserialize(d)?
            .into_iter()
            .map(|e| (e.var, e.basis))
            .collect())
    }
}

#[cfg(test)]
mod tests;
