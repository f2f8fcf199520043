//! Evaluation and exhaustive identity checking.
//!
//! Identity checking walks each monomial left to right, choosing at every
//! position a standard basis value (for alternated variables: a value for
//! the variable the alternation maps there). Partial products that vanish
//! are pruned. Each complete path contributes to one canonical assignment,
//! in which the values of a same-degree class of an alternation set are
//! increasing; the sum per canonical assignment is its evaluation.

use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{parity, BasisAssignment, GradedPolynomial, GradedVariable, PolyError, VarId};
use crate::cyclo::CycloScalar;
use crate::presentation::{AlgebraElement, AlgebraTables, Presentation};

/// Default cap on search nodes for [`is_identity`].
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityProof {
    /// Search nodes visited.
    pub nodes: u64,
    /// Settled without search: some alternation class has more variables
    /// than basis elements of its degree.
    pub pigeonhole: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IdentityVerdict {
    Identity {
        proof: IdentityProof,
    },
    NonIdentity {
        #[serde(with = "super::assignment_serde")]
        witness: BasisAssignment,
        value: AlgebraElement,
    },
    Inconclusive {
        spent: u64,
    },
}

impl IdentityVerdict {
    pub fn is_identity(&self) -> bool {
        matches!(self, IdentityVerdict::Identity { .. })
    }

    pub fn is_non_identity(&self) -> bool {
        matches!(self, IdentityVerdict::NonIdentity { .. })
    }
}

/// Sparse algebra element indexed by basis position.
pub(crate) type Elt = BTreeMap<u32, CycloScalar>;

fn elt_add(acc: &mut Elt, b: u32, c: CycloScalar) {
    if c.is_zero() {
        return;
    }
    match acc.get_mut(&b) {
        Some(x) => {
            *x += &c;
            if x.is_zero() {
                acc.remove(&b);
            }
        }
        None => {
            acc.insert(b, c);
        }
    }
}

fn elt_mul(t: &AlgebraTables, a: &Elt, b: &Elt) -> Elt {
    let mut out = Elt::new();
    for (&x, cx) in a {
        for (&y, cy) in b {
            if let Some((e, z)) = t.mul_basis(x, y) {
                let c = &(cx * cy) * &CycloScalar::root_of_unity(e as i64, t.root_order);
                elt_add(&mut out, z, c);
            }
        }
    }
    out
}

fn to_algebra(p: &Presentation, e: &Elt) -> AlgebraElement {
    let mut out = AlgebraElement::zero();
    for (&b, c) in e {
        out.add_term(p.basis_element(b), c.normalized());
    }
    out
}

/// Top-level structure of a polynomial in index form.
struct Layout {
    vars: Vec<GradedVariable>,
    composed: Vec<bool>,
    words: Vec<(usize, Vec<usize>)>,
    coefs: Vec<CycloScalar>,
    sets: Vec<Vec<usize>>,
    /// `(set, position in set)` per variable.
    set_of: Vec<Option<(usize, usize)>>,
}

impl Layout {
    fn new(p: &GradedPolynomial) -> Self {
        let vars = p.variables().to_vec();
        let index: HashMap<VarId, usize> =
            vars.iter().enumerate().map(|(k, v)| (v.id, k)).collect();
        let mut coefs: Vec<CycloScalar> = Vec::new();
        let mut words = Vec::new();
        for m in p.monomials() {
            let cid = match coefs.iter().position(|c| *c == m.coefficient) {
                Some(k) => k,
                None => {
                    coefs.push(m.coefficient.clone());
                    coefs.len() - 1
                }
            };
            words.push((cid, m.factors.iter().map(|v| index[v]).collect()));
        }
        let sets: Vec<Vec<usize>> = p
            .alternation()
            .iter()
            .map(|s| s.iter().map(|v| index[v]).collect())
            .collect();
        let mut set_of = vec![None; vars.len()];
        for (s, set) in sets.iter().enumerate() {
            for (k, &v) in set.iter().enumerate() {
                set_of[v] = Some((s, k));
            }
        }
        let composed = vars.iter().map(|v| p.is_composed(v.id)).collect();
        Layout {
            vars,
            composed,
            words,
            coefs,
            sets,
            set_of,
        }
    }
}

/// Evaluate at arbitrary homogeneous values of the leaf variables.
pub fn evaluate(
    p: &GradedPolynomial,
    pres: &Presentation,
    assignment: &BTreeMap<VarId, AlgebraElement>,
) -> Result<AlgebraElement, PolyError> {
    Ok(to_algebra(pres, &evaluate_elt(p, pres, assignment)?))
}

/// Evaluate at standard basis values of the leaf variables.
pub fn evaluate_basis(
    p: &GradedPolynomial,
    pres: &Presentation,
    assignment: &BasisAssignment,
) -> Result<AlgebraElement, PolyError> {
    let a = assignment
        .iter()
        .map(|(k, b)| (*k, AlgebraElement::basis(*b)))
        .collect();
    evaluate(p, pres, &a)
}

fn evaluate_elt(
    p: &GradedPolynomial,
    pres: &Presentation,
    assignment: &BTreeMap<VarId, AlgebraElement>,
) -> Result<Elt, PolyError> {
    let t = pres.tables();
    let layout = Layout::new(p);
    let mut values = Vec::with_capacity(layout.vars.len());
    for v in &layout.vars {
        if let Some(q) = p.composition().get(&v.id) {
            values.push(evaluate_elt(q, pres, assignment)?);
            continue;
        }
        let a = assignment
            .get(&v.id)
            .ok_or(PolyError::MissingAssignment(v.id))?;
        let mut e = Elt::new();
        for (b, c) in a.terms() {
            let idx = pres.basis_index(b)?;
            if t.degree(idx) != v.degree {
                return Err(PolyError::DegreeMismatch {
                    var: v.id,
                    expected: v.degree,
                });
            }
            elt_add(&mut e, idx, c.clone());
        }
        values.push(e);
    }
    if values.iter().any(|v| v.is_empty()) {
        return Ok(Elt::new());
    }
    if values.iter().all(|v| v.len() == 1) {
        Ok(eval_fast(&layout, t, &values))
    } else {
        Ok(eval_general(&layout, t, &values))
    }
}

/// Explicit alternation sum when every value is a multiple of one basis
/// element: the scalar factor is common to all paths.
fn eval_fast(l: &Layout, t: &AlgebraTables, values: &[Elt]) -> Elt {
    let n = t.root_order as usize;
    let basis: Vec<u32> = values
        .iter()
        .map(|v| *v.keys().next().expect("one term"))
        .collect();
    let scale = values
        .iter()
        .map(|v| v.values().next().expect("one term").clone())
        .fold(CycloScalar::one(1), |a, b| &a * &b);
    let mut counts: HashMap<(usize, u32), Vec<i64>> = HashMap::new();
    let mut perm: Vec<Vec<usize>> = l.sets.iter().map(|s| vec![0; s.len()]).collect();
    let mut used: Vec<Vec<bool>> = l.sets.iter().map(|s| vec![false; s.len()]).collect();
    struct Ctx<'a> {
        l: &'a Layout,
        t: &'a AlgebraTables,
        basis: &'a [u32],
        n: usize,
    }
    fn go(
        c: &Ctx,
        word: &[usize],
        k: usize,
        run: Option<(u32, u32)>,
        perm: &mut Vec<Vec<usize>>,
        used: &mut Vec<Vec<bool>>,
        out: &mut Vec<(i64, u32, u32)>,
    ) {
        if k == word.len() {
            let (e, b) = run.expect("nonempty word");
            let odd = perm.iter().fold(false, |a, p| a ^ parity(p));
            out.push((if odd { -1 } else { 1 }, e, b));
            return;
        }
        let v = word[k];
        let mut step = |u: usize, perm: &mut Vec<Vec<usize>>, used: &mut Vec<Vec<bool>>| {
            let b = c.basis[u];
            let next = match run {
                None => Some((0, b)),
                Some((e, x)) => {
                    c.t.mul_basis(x, b)
                        .map(|(e2, y)| ((e + e2) % c.n as u32, y))
                }
            };
            if let Some(r) = next {
                go(c, word, k + 1, Some(r), perm, used, out);
            }
        };
        match c.l.set_of[v] {
            None => step(v, perm, used),
            Some((s, local)) => {
                for u_local in 0..c.l.sets[s].len() {
                    if used[s][u_local] {
                        continue;
                    }
                    used[s][u_local] = true;
                    perm[s][local] = u_local;
                    step(c.l.sets[s][u_local], perm, used);
                    used[s][u_local] = false;
                }
            }
        }
    }
    let ctx = Ctx {
        l,
        t,
        basis: &basis,
        n,
    };
    for (cid, word) in &l.words {
        let mut out = Vec::new();
        go(&ctx, word, 0, None, &mut perm, &mut used, &mut out);
        for (sign, e, b) in out {
            counts.entry((*cid, b)).or_insert_with(|| vec![0; n])[e as usize] += sign;
        }
    }
    let mut acc = Elt::new();
    let mut keys: Vec<_> = counts.keys().copied().collect();
    keys.sort_unstable();
    for key in keys {
        let s = CycloScalar::from_root_counts(t.root_order, &counts[&key]);
        if !s.is_zero() {
            elt_add(&mut acc, key.1, &(&l.coefs[key.0] * &s) * &scale);
        }
    }
    acc
}

fn eval_general(l: &Layout, t: &AlgebraTables, values: &[Elt]) -> Elt {
    let mut acc = Elt::new();
    let mut perm: Vec<Vec<usize>> = l.sets.iter().map(|s| vec![0; s.len()]).collect();
    let mut used: Vec<Vec<bool>> = l.sets.iter().map(|s| vec![false; s.len()]).collect();
    #[allow(clippy::too_many_arguments)]
    fn go(
        l: &Layout,
        t: &AlgebraTables,
        values: &[Elt],
        word: &[usize],
        k: usize,
        run: Option<&Elt>,
        perm: &mut Vec<Vec<usize>>,
        used: &mut Vec<Vec<bool>>,
        coef: &CycloScalar,
        acc: &mut Elt,
    ) {
        if k == word.len() {
            let odd = perm.iter().fold(false, |a, p| a ^ parity(p));
            let c = if odd { -coef } else { coef.clone() };
            for (b, x) in run.expect("nonempty word") {
                elt_add(acc, *b, x * &c);
            }
            return;
        }
        let v = word[k];
        let mut step = |u: usize, perm: &mut Vec<Vec<usize>>, used: &mut Vec<Vec<bool>>| {
            let next = match run {
                None => values[u].clone(),
                Some(r) => elt_mul(t, r, &values[u]),
            };
            if !next.is_empty() {
                go(
                    l,
                    t,
                    values,
                    word,
                    k + 1,
                    Some(&next),
                    perm,
                    used,
                    coef,
                    acc,
                );
            }
        };
        match l.set_of[v] {
            None => step(v, perm, used),
            Some((s, local)) => {
                for u_local in 0..l.sets[s].len() {
                    if used[s][u_local] {
                        continue;
                    }
                    used[s][u_local] = true;
                    perm[s][local] = u_local;
                    step(l.sets[s][u_local], perm, used);
                    used[s][u_local] = false;
                }
            }
        }
    }
    for (cid, word) in &l.words {
        go(
            l,
            t,
            values,
            word,
            0,
            None,
            &mut perm,
            &mut used,
            &l.coefs[*cid],
            &mut acc,
        );
    }
    acc
}

/// Decide whether `p` vanishes on every graded evaluation, visiting at most
/// `budget` search nodes.
pub fn is_identity(p: &GradedPolynomial, pres: &Presentation, budget: u64) -> IdentityVerdict {
    is_identity_with(p, pres, budget, 1)
}

/// As [`is_identity`], splitting the top-level search over `threads`
/// workers. The verdict does not depend on the thread count.
pub fn is_identity_with(
    p: &GradedPolynomial,
    pres: &Presentation,
    budget: u64,
    threads: usize,
) -> IdentityVerdict {
    let mut engine = Engine {
        t: pres.tables(),
        budget,
        nodes: Arc::new(AtomicU64::new(0)),
        cache: HashMap::new(),
        threads: threads.max(1),
    };
    let spent = |e: &Engine| e.nodes.load(Ordering::Relaxed).min(budget);
    match engine.table(p) {
        Err(Exhausted) => IdentityVerdict::Inconclusive {
            spent: spent(&engine),
        },
        Ok(Table {
            entries,
            pigeonhole,
        }) => match entries.into_iter().next() {
            None => IdentityVerdict::Identity {
                proof: IdentityProof {
                    nodes: spent(&engine),
                    pigeonhole,
                },
            },
            Some((key, value)) => {
                let leaves = engine.leaves(p, &key);
                let witness = p
                    .leaf_variables()
                    .iter()
                    .zip(leaves)
                    .map(|(v, b)| (v.id, pres.basis_element(b)))
                    .collect();
                IdentityVerdict::NonIdentity {
                    witness,
                    value: to_algebra(pres, &value),
                }
            }
        },
    }
}

#[derive(Debug)]
struct Exhausted;

struct Table {
    /// Nonzero evaluations keyed by canonical top-level choice, sorted.
    entries: BTreeMap<Vec<u32>, Elt>,
    pigeonhole: bool,
}

struct Candidate {
    leaves: Vec<u32>,
    value: Elt,
}

struct Engine<'a> {
    t: &'a AlgebraTables,
    budget: u64,
    nodes: Arc<AtomicU64>,
    cache: HashMap<String, Arc<Vec<Candidate>>>,
    threads: usize,
}

/// Search context for one polynomial level.
struct Search<'a> {
    t: &'a AlgebraTables,
    l: &'a Layout,
    /// Class per alternated variable.
    class_of: Vec<Option<usize>>,
    class_vars: Vec<Vec<usize>>,
    class_set: Vec<usize>,
    /// `pools[var][row]` for free leaf variables and `class_pools[c][row]`.
    pools: Vec<Vec<Vec<u32>>>,
    class_pools: Vec<Vec<Vec<u32>>>,
    candidates: Vec<Option<Arc<Vec<Candidate>>>>,
    fast: bool,
    budget: u64,
    nodes: &'a AtomicU64,
}

#[derive(Clone)]
enum Run {
    Start,
    Fast(u32, u32),
    Gen(Elt),
}

type FastTable = HashMap<(usize, u32), Vec<i64>>;

#[derive(Default)]
struct Acc {
    fast: HashMap<Vec<u32>, FastTable>,
    general: HashMap<Vec<u32>, Elt>,
}

impl Acc {
    fn merge(&mut self, other: Acc, n: usize) {
        for (k, m) in other.fast {
            let mine = self.fast.entry(k).or_default();
            for (key, counts) in m {
                let slot = mine.entry(key).or_insert_with(|| vec![0; n]);
                for (a, b) in slot.iter_mut().zip(counts) {
                    *a += b;
                }
            }
        }
        for (k, e) in other.general {
            let mine = self.general.entry(k).or_default();
            for (b, c) in e {
                elt_add(mine, b, c);
            }
        }
    }
}

impl<'a> Engine<'a> {
    fn table(&mut self, p: &GradedPolynomial) -> Result<Table, Exhausted> {
        let l = Layout::new(p);
        let t = self.t;
        let mut candidates = Vec::with_capacity(l.vars.len());
        for (k, v) in l.vars.iter().enumerate() {
            if l.composed[k] {
                let q = &p.composition()[&v.id];
                candidates.push(Some(self.candidates(q)?));
            } else {
                candidates.push(None);
            }
        }
        // classes: the same-degree parts of each alternation set
        let mut class_of = vec![None; l.vars.len()];
        let mut class_vars: Vec<Vec<usize>> = Vec::new();
        let mut class_set = Vec::new();
        for (s, set) in l.sets.iter().enumerate() {
            let mut by_degree: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for &v in set {
                by_degree.entry(l.vars[v].degree).or_default().push(v);
            }
            for (_, mut vs) in by_degree {
                vs.sort_unstable();
                for &v in &vs {
                    class_of[v] = Some(class_vars.len());
                }
                class_vars.push(vs);
                class_set.push(s);
            }
        }
        let by_row = |g: usize| -> Vec<Vec<u32>> {
            let mut rows = vec![Vec::new(); t.r];
            if g < t.degree_count() {
                for &b in t.basis_of_degree(g) {
                    rows[t.row(b)].push(b);
                }
            }
            rows
        };
        let pools: Vec<Vec<Vec<u32>>> = l
            .vars
            .iter()
            .enumerate()
            .map(|(k, v)| {
                if l.composed[k] || class_of[k].is_some() {
                    Vec::new()
                } else {
                    by_row(v.degree)
                }
            })
            .collect();
        let class_pools: Vec<Vec<Vec<u32>>> = class_vars
            .iter()
            .map(|c| by_row(l.vars[c[0]].degree))
            .collect();
        let empty = Table {
            entries: BTreeMap::new(),
            pigeonhole: false,
        };
        if l.words.is_empty() {
            return Ok(empty);
        }
        for (c, vars) in class_vars.iter().enumerate() {
            if class_pools[c].iter().map(Vec::len).sum::<usize>() < vars.len() {
                return Ok(Table {
                    entries: BTreeMap::new(),
                    pigeonhole: true,
                });
            }
        }
        for (k, pool) in pools.iter().enumerate() {
            if !l.composed[k] && class_of[k].is_none() && pool.iter().all(Vec::is_empty) {
                return Ok(empty);
            }
        }
        if candidates.iter().flatten().any(|c| c.is_empty()) {
            return Ok(empty);
        }
        let fast = !l.composed.iter().any(|&c| c);
        let search = Search {
            t,
            l: &l,
            class_of,
            class_vars,
            class_set,
            pools,
            class_pools,
            candidates,
            fast,
            budget: self.budget,
            nodes: &self.nodes,
        };
        let acc = search.run(self.threads)?;
        Ok(Table {
            entries: search.finish(acc),
            pigeonhole: false,
        })
    }

    fn candidates(&mut self, q: &GradedPolynomial) -> Result<Arc<Vec<Candidate>>, Exhausted> {
        let signature = serde_json::to_string(&q.reindexed(0).0).expect("polynomials serialize");
        if let Some(c) = self.cache.get(&signature) {
            return Ok(c.clone());
        }
        let table = self.table(q)?;
        let list: Vec<Candidate> = table
            .entries
            .into_iter()
            .map(|(key, value)| Candidate {
                leaves: self.leaves(q, &key),
                value,
            })
            .collect();
        let list = Arc::new(list);
        self.cache.insert(signature, list.clone());
        Ok(list)
    }

    /// Leaf values (in [`GradedPolynomial::leaf_variables`] order) for a
    /// top-level key.
    fn leaves(&mut self, p: &GradedPolynomial, key: &[u32]) -> Vec<u32> {
        let mut out = Vec::new();
        for (k, v) in p.variables().iter().enumerate() {
            match p.composition().get(&v.id) {
                Some(q) => {
                    let c = self.candidates(q).expect("cached before use");
                    out.extend(&c[key[k] as usize].leaves);
                }
                None => out.push(key[k]),
            }
        }
        out
    }
}

/// One unit of top-level work: a word and a value for its first position.
struct Task {
    word: usize,
    first: Option<u32>,
}

impl<'a> Search<'a> {
    fn first_choices(&self, word: &[usize]) -> Vec<Option<u32>> {
        let v = word[0];
        if let Some(c) = &self.candidates[v] {
            return (0..c.len() as u32).map(Some).collect();
        }
        let pool = match self.class_of[v] {
            Some(_) => self.l.set_of[v].map(|(s, _)| s),
            None => None,
        };
        let mut out: Vec<Option<u32>> = match pool {
            Some(s) => {
                let classes: Vec<usize> = (0..self.class_vars.len())
                    .filter(|&c| self.class_set[c] == s)
                    .collect();
                classes
                    .iter()
                    .flat_map(|&c| self.class_pools[c].iter().flatten().copied())
                    .map(Some)
                    .collect()
            }
            None => self.pools[v].iter().flatten().copied().map(Some).collect(),
        };
        out.sort_unstable();
        out
    }

    fn run(&self, threads: usize) -> Result<Acc, Exhausted> {
        let mut tasks = Vec::new();
        for (w, (_, word)) in self.l.words.iter().enumerate() {
            if threads > 1 {
                tasks.extend(
                    self.first_choices(word)
                        .into_iter()
                        .map(|first| Task { word: w, first }),
                );
            } else {
                tasks.push(Task {
                    word: w,
                    first: None,
                });
            }
        }
        let n = self.t.root_order as usize;
        if threads <= 1 || tasks.len() < 2 {
            let mut acc = Acc::default();
            for task in &tasks {
                self.run_task(task, &mut acc)?;
            }
            return Ok(acc);
        }
        let next = AtomicU64::new(0);
        let results: Vec<Result<Acc, Exhausted>> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..threads.min(tasks.len()))
                .map(|_| {
                    scope.spawn(|| {
                        let mut acc = Acc::default();
                        loop {
                            let k = next.fetch_add(1, Ordering::Relaxed) as usize;
                            let Some(task) = tasks.get(k) else { break };
                            self.run_task(task, &mut acc)?;
                        }
                        Ok(acc)
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("worker panicked"))
                .collect()
        });
        let mut acc = Acc::default();
        for r in results {
            acc.merge(r?, n);
        }
        Ok(acc)
    }

    fn run_task(&self, task: &Task, acc: &mut Acc) -> Result<(), Exhausted> {
        let (cid, word) = &self.l.words[task.word];
        let mut st = State {
            pick: vec![0; word.len()],
            used: vec![Vec::new(); self.class_vars.len()],
            perm: self.l.sets.iter().map(|s| vec![0; s.len()]).collect(),
            key: vec![0; self.l.vars.len()],
        };
        self.go(word, *cid, 0, &Run::Start, task.first, &mut st, acc)
    }

    fn tick(&self) -> Result<(), Exhausted> {
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.budget {
            Err(Exhausted)
        } else {
            Ok(())
        }
    }

    fn extend(&self, run: &Run, value: ValueRef) -> Option<Run> {
        match (run, value) {
            (Run::Start, ValueRef::Basis(b)) if self.fast => Some(Run::Fast(0, b)),
            (Run::Start, ValueRef::Basis(b)) => {
                let mut e = Elt::new();
                e.insert(b, CycloScalar::one(1));
                Some(Run::Gen(e))
            }
            (Run::Start, ValueRef::Elt(e)) => Some(Run::Gen(e.clone())),
            (Run::Fast(e, x), ValueRef::Basis(b)) => self
                .t
                .mul_basis(*x, b)
                .map(|(e2, y)| Run::Fast((e + e2) % self.t.root_order, y)),
            (Run::Fast(..), ValueRef::Elt(_)) => unreachable!("fast mode has no substitutions"),
            (Run::Gen(r), ValueRef::Basis(b)) => {
                let mut out = Elt::new();
                for (&x, c) in r {
                    if let Some((e, y)) = self.t.mul_basis(x, b) {
                        elt_add(
                            &mut out,
                            y,
                            c * &CycloScalar::root_of_unity(e as i64, self.t.root_order),
                        );
                    }
                }
                (!out.is_empty()).then_some(Run::Gen(out))
            }
            (Run::Gen(r), ValueRef::Elt(v)) => {
                let out = elt_mul(self.t, r, v);
                (!out.is_empty()).then_some(Run::Gen(out))
            }
        }
    }

    /// Rows the next basis value may start in.
    fn rows(&self, run: &Run) -> Vec<usize> {
        match run {
            Run::Start => (0..self.t.r).collect(),
            Run::Fast(_, x) => vec![self.t.col(*x)],
            Run::Gen(e) => {
                let mut cols: Vec<usize> = e.keys().map(|&b| self.t.col(b)).collect();
                cols.sort_unstable();
                cols.dedup();
                cols
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn go(
        &self,
        word: &[usize],
        cid: usize,
        k: usize,
        run: &Run,
        first: Option<u32>,
        st: &mut State,
        acc: &mut Acc,
    ) -> Result<(), Exhausted> {
        if k == word.len() {
            self.leaf(word, cid, run, st, acc);
            return Ok(());
        }
        let v = word[k];
        let only = if k == 0 { first } else { None };
        if let Some(c) = &self.candidates[v] {
            for (idx, cand) in c.iter().enumerate() {
                if only.is_some_and(|f| f as usize != idx) {
                    continue;
                }
                if let Some(next) = self.extend(run, ValueRef::Elt(&cand.value)) {
                    self.tick()?;
                    st.pick[k] = idx as u32;
                    self.go(word, cid, k + 1, &next, None, st, acc)?;
                }
            }
            return Ok(());
        }
        let rows = self.rows(run);
        match self.class_of[v] {
            None => {
                for &row in &rows {
                    for &b in &self.pools[v][row] {
                        if only.is_some_and(|f| f != b) {
                            continue;
                        }
                        if let Some(next) = self.extend(run, ValueRef::Basis(b)) {
                            self.tick()?;
                            st.pick[k] = b;
                            self.go(word, cid, k + 1, &next, None, st, acc)?;
                        }
                    }
                }
            }
            Some(_) => {
                let (s, _) = self.l.set_of[v].expect("alternated");
                for c in (0..self.class_vars.len()).filter(|&c| self.class_set[c] == s) {
                    if st.used[c].len() == self.class_vars[c].len() {
                        continue;
                    }
                    for &row in &rows {
                        for &b in &self.class_pools[c][row] {
                            if only.is_some_and(|f| f != b) || st.used[c].contains(&b) {
                                continue;
                            }
                            if let Some(next) = self.extend(run, ValueRef::Basis(b)) {
                                self.tick()?;
                                st.pick[k] = b;
                                st.used[c].push(b);
                                let r = self.go(word, cid, k + 1, &next, None, st, acc);
                                st.used[c].pop();
                                r?;
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn leaf(&self, word: &[usize], cid: usize, run: &Run, st: &mut State, acc: &mut Acc) {
        let mut sorted = st.used.clone();
        for s in &mut sorted {
            s.sort_unstable();
        }
        for (c, vals) in sorted.iter().enumerate() {
            for (rank, &b) in vals.iter().enumerate() {
                st.key[self.class_vars[c][rank]] = b;
            }
        }
        for (k, &v) in word.iter().enumerate() {
            match self.class_of[v] {
                None => st.key[v] = st.pick[k],
                Some(c) => {
                    let (s, local) = self.l.set_of[v].expect("alternated");
                    let b = st.pick[k];
                    // the class holding b, which may differ from v's own
                    let cb = (0..self.class_vars.len())
                        .find(|&c2| self.class_set[c2] == s && sorted[c2].binary_search(&b).is_ok())
                        .unwrap_or(c);
                    let rank = sorted[cb].binary_search(&b).expect("chosen value");
                    let u = self.class_vars[cb][rank];
                    st.perm[s][local] = self.l.set_of[u].expect("alternated").1;
                }
            }
        }
        let odd = st.perm.iter().fold(false, |a, p| a ^ parity(p));
        let key = st.key.clone();
        match run {
            Run::Fast(e, b) => {
                let n = self.t.root_order as usize;
                let counts = acc
                    .fast
                    .entry(key)
                    .or_default()
                    .entry((cid, *b))
                    .or_insert_with(|| vec![0; n]);
                counts[*e as usize] += if odd { -1 } else { 1 };
            }
            Run::Gen(e) => {
                let c = if odd {
                    -&self.l.coefs[cid]
                } else {
                    self.l.coefs[cid].clone()
                };
                let slot = acc.general.entry(key).or_default();
                for (&b, x) in e {
                    elt_add(slot, b, x * &c);
                }
            }
            Run::Start => unreachable!("words are nonempty"),
        }
    }

    fn finish(&self, acc: Acc) -> BTreeMap<Vec<u32>, Elt> {
        let mut out = BTreeMap::new();
        for (key, m) in acc.fast {
            let mut e = Elt::new();
            let mut parts: Vec<_> = m.into_iter().collect();
            parts.sort_unstable_by_key(|(k, _)| *k);
            for ((cid, b), counts) in parts {
                let s = CycloScalar::from_root_counts(self.t.root_order, &counts);
                if !s.is_zero() {
                    elt_add(&mut e, b, &self.l.coefs[cid] * &s);
                }
            }
            if !e.is_empty() {
                out.insert(key, e);
            }
        }
        for (key, e) in acc.general {
            if !e.is_empty() {
                out.insert(key, e);
            }
        }
        out
    }
}

#[derive(Clone, Copy)]
enum ValueRef<'e> {
    Basis(u32),
    Elt(&'e Elt),
}

struct State {
    pick: Vec<u32>,
    used: Vec<Vec<u32>>,
    perm: Vec<Vec<usize>>,
    key: Vec<u32>,
}
