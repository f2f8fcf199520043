//! Finite groups given by multiplication tables, and their subgroups.
//!
//! Elements are indices `0..order`. The identity need not be index 0.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Group element, an index into the multiplication table.
pub type Elem = usize;

/// Largest order for which associativity is checked by default.
pub const DEFAULT_ASSOCIATIVITY_BOUND: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("multiplication table is empty")]
    Empty,
    #[error("table row {row} has length {len}, expected {order}")]
    Ragged {
        row: usize,
        len: usize,
        order: usize,
    },
    #[error("table entry {value} at ({row}, {col}) is out of range 0..{order}")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        value: usize,
        order: usize,
    },
    #[error("table is not a Latin square: {line} {index} repeats element {value}")]
    NotLatinSquare {
        line: &'static str,
        index: usize,
        value: usize,
    },
    #[error("table has no two-sided identity")]
    NoIdentity,
    #[error("table is not associative: ({0}*{1})*{2} != {0}*({1}*{2})")]
    NotAssociative(Elem, Elem, Elem),
    #[error("element {0} out of range for a group of order {1}")]
    ElementOutOfRange(Elem, usize),
    #[error("{0:?} is not closed under multiplication")]
    NotClosed(Vec<Elem>),
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("unknown group name {0:?}")]
    UnknownName(String),
}

/// A finite group stored as a validated multiplication table.
#[derive(Clone, Debug)]
pub struct Group {
    order: usize,
    table: Vec<Elem>,
    identity: Elem,
    inverses: Vec<Elem>,
    labels: Option<Vec<String>>,
}

impl PartialEq for Group {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.table == other.table
    }
}

impl Eq for Group {}

/// Validate a multiplication table and build a group.
///
/// Associativity is checked exhaustively for orders up to
/// [`DEFAULT_ASSOCIATIVITY_BOUND`].
pub fn validate_group(table: Vec<Vec<usize>>) -> Result<Group, GroupError> {
    Group::from_table_with(table, DEFAULT_ASSOCIATIVITY_BOUND)
}

impl Group {
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        validate_group(table)
    }

    /// Like [`Group::from_table`], but only checks associativity when the
    /// order is at most `associativity_bound`.
    pub fn from_table_with(
        table: Vec<Vec<usize>>,
        associativity_bound: usize,
    ) -> Result<Self, GroupError> {
        let order = table.len();
        if order == 0 {
            return Err(GroupError::Empty);
        }
        let mut flat = Vec::with_capacity(order * order);
        for (row, entries) in table.iter().enumerate() {
            if entries.len() != order {
                return Err(GroupError::Ragged {
                    row,
                    len: entries.len(),
                    order,
                });
            }
            for (col, &value) in entries.iter().enumerate() {
                if value >= order {
                    return Err(GroupError::EntryOutOfRange {
                        row,
                        col,
                        value,
                        order,
                    });
                }
                flat.push(value);
            }
        }
        for a in 0..order {
            let mut seen_row = vec![false; order];
            let mut seen_col = vec![false; order];
            for b in 0..order {
                let v = flat[a * order + b];
                if std::mem::replace(&mut seen_row[v], true) {
                    return Err(GroupError::NotLatinSquare {
                        line: "row",
                        index: a,
                        value: v,
                    });
                }
                let w = flat[b * order + a];
                if std::mem::replace(&mut seen_col[w], true) {
                    return Err(GroupError::NotLatinSquare {
                        line: "column",
                        index: a,
                        value: w,
                    });
                }
            }
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| flat[e * order + x] == x && flat[x * order + e] == x))
            .ok_or(GroupError::NoIdentity)?;
        if order <= associativity_bound {
            for a in 0..order {
                for b in 0..order {
                    let ab = flat[a * order + b];
                    for c in 0..order {
                        let bc = flat[b * order + c];
                        if flat[ab * order + c] != flat[a * order + bc] {
                            return Err(GroupError::NotAssociative(a, b, c));
                        }
                    }
                }
            }
        }
        let inverses = (0..order)
            .map(|a| {
                (0..order)
                    .find(|&b| flat[a * order + b] == identity)
                    .expect("Latin square has inverses")
            })
            .collect();
        Ok(Group {
            order,
            table: flat,
            identity,
            inverses,
            labels: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, GroupError> {
        if labels.len() != self.order {
            return Err(GroupError::LabelCount {
                expected: self.order,
                got: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Cyclic group of order `n`, element `k` standing for `g^k`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0, "cyclic group needs positive order");
        let table = (0..n)
            .map(|a| (0..n).map(|b| (a + b) % n).collect())
            .collect();
        let labels = (0..n)
            .map(|k| match k {
                0 => "e".to_string(),
                1 => "g".to_string(),
                _ => format!("g{k}"),
            })
            .collect();
        Self::from_table(table)
            .expect("cyclic table")
            .with_labels(labels)
            .expect("label count")
    }

    /// Direct product; the pair `(a, b)` has index `a * |B| + b`.
    pub fn direct_product(a: &Group, b: &Group) -> Self {
        let (m, n) = (a.order, b.order);
        let table = (0..m * n)
            .map(|x| {
                (0..m * n)
                    .map(|y| a.mul(x / n, y / n) * n + b.mul(x % n, y % n))
                    .collect()
            })
            .collect();
        let labels = (0..m * n)
            .map(|x| format!("({},{})", a.label(x / n), b.label(x % n)))
            .collect();
        Self::from_table(table)
            .expect("product table")
            .with_labels(labels)
            .expect("label count")
    }

    /// `C2 x C2` with labels `e, a, b, ab`.
    pub fn klein_four() -> Self {
        let g = Self::direct_product(&Self::cyclic(2), &Self::cyclic(2));
        let labels = ["e", "b", "a", "ab"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        g.with_labels(labels).expect("label count")
    }

    /// Closure of a set of permutations of `0..degree`, sorted with the
    /// identity first and then lexicographically.
    pub fn permutation_group(
        generators: &[Vec<usize>],
    ) -> Result<(Self, Vec<Vec<usize>>), GroupError> {
        let degree = generators.first().map_or(0, Vec::len);
        for g in generators {
            let mut seen = vec![false; degree];
            if g.len() != degree
                || g.iter()
                    .any(|&x| x >= degree || std::mem::replace(&mut seen[x], true))
            {
                return Err(GroupError::NotClosed(g.clone()));
            }
        }
        let id: Vec<usize> = (0..degree).collect();
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        found.insert(id.clone());
        let mut queue = VecDeque::from([id.clone()]);
        while let Some(p) = queue.pop_front() {
            for g in generators {
                let q: Vec<usize> = (0..degree).map(|x| g[p[x]]).collect();
                if found.insert(q.clone()) {
                    queue.push_back(q);
                }
            }
        }
        let mut elems: Vec<Vec<usize>> = found.into_iter().filter(|p| *p != id).collect();
        elems.insert(0, id);
        let index = |p: &Vec<usize>| elems.iter().position(|q| q == p).expect("closed");
        let table = elems
            .iter()
            .map(|a| {
                elems
                    .iter()
                    .map(|b| index(&(0..degree).map(|x| a[b[x]]).collect()))
                    .collect()
            })
            .collect();
        let labels = elems.iter().map(|p| cycle_notation(p)).collect();
        let group = Self::from_table(table)?.with_labels(labels)?;
        Ok((group, elems))
    }

    pub fn symmetric(n: usize) -> Self {
        let mut gens = Vec::new();
        if n > 1 {
            let mut t: Vec<usize> = (0..n).collect();
            t.swap(0, 1);
            gens.push(t);
            gens.push((0..n).map(|x| (x + 1) % n).collect());
        } else {
            gens.push((0..n).collect());
        }
        Self::permutation_group(&gens).expect("symmetric group").0
    }

    /// Dihedral group of order `2n`; `r^k` has index `k`, `s r^k` index `n + k`.
    pub fn dihedral(n: usize) -> Self {
        assert!(n > 0);
        let idx = |refl: bool, k: usize| if refl { n + k % n } else { k % n };
        let table = (0..2 * n)
            .map(|x| {
                (0..2 * n)
                    .map(|y| {
                        let (sx, kx) = (x >= n, x % n);
                        let (sy, ky) = (y >= n, y % n);
                        // s^a r^i s^b r^j = s^(a+b) r^((-1)^b i + j)
                        let k = if sy { n - kx + ky } else { kx + ky };
                        idx(sx ^ sy, k)
                    })
                    .collect()
            })
            .collect();
        let labels = (0..2 * n)
            .map(|x| {
                let k = x % n;
                let r = match k {
                    0 => String::new(),
                    1 => "r".to_string(),
                    _ => format!("r{k}"),
                };
                match (x >= n, k) {
                    (false, 0) => "e".to_string(),
                    (false, _) => r,
                    (true, _) => format!("s{r}"),
                }
            })
            .collect();
        Self::from_table(table)
            .expect("dihedral table")
            .with_labels(labels)
            .expect("label count")
    }

    /// Quaternion group `{±1, ±i, ±j, ±k}`.
    pub fn quaternion() -> Self {
        // index = 2 * unit + sign, unit in 1,i,j,k
        let unit_mul = |a: usize, b: usize| -> (usize, bool) {
            match (a, b) {
                (0, x) | (x, 0) => (x, false),
                (x, y) if x == y => (0, true),
                (1, 2) => (3, false),
                (2, 1) => (3, true),
                (2, 3) => (1, false),
                (3, 2) => (1, true),
                (3, 1) => (2, false),
                (1, 3) => (2, true),
                _ => unreachable!(),
            }
        };
        let table = (0..8)
            .map(|x| {
                (0..8)
                    .map(|y| {
                        let (u, neg) = unit_mul(x / 2, y / 2);
                        2 * u + ((x % 2 + y % 2 + neg as usize) % 2)
                    })
                    .collect()
            })
            .collect();
        let labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        Self::from_table(table)
            .expect("quaternion table")
            .with_labels(labels)
            .expect("label count")
    }

    /// Look up a built-in group by name: `C<n>`, `C2xC2`, `V4`, `S<n>`,
    /// `D<n>` (order `2n`), `Q8`.
    pub fn named(name: &str) -> Result<Self, GroupError> {
        let unknown = || GroupError::UnknownName(name.to_string());
        let upper = name.trim().to_ascii_uppercase().replace(['×', '*'], "X");
        if upper == "V4" || upper == "K4" {
            return Ok(Self::klein_four());
        }
        if upper == "Q8" {
            return Ok(Self::quaternion());
        }
        if upper.contains('X') {
            let mut parts = upper.split('X');
            let mut g = Self::named(parts.next().ok_or_else(unknown)?)?;
            for p in parts {
                g = Self::direct_product(&g, &Self::named(p)?);
            }
            if upper == "C2XC2" {
                return Ok(Self::klein_four());
            }
            return Ok(g);
        }
        let (head, tail) = upper.split_at(1.min(upper.len()));
        let n: usize = tail.parse().map_err(|_| unknown())?;
        if n == 0 {
            return Err(unknown());
        }
        match head {
            "C" => Ok(Self::cyclic(n)),
            "S" if n <= 6 => Ok(Self::symmetric(n)),
            "D" => Ok(Self::dihedral(n)),
            _ => Err(unknown()),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> Elem {
        self.identity
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.order
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inverses[a]
    }

    /// `g h g^-1`.
    pub fn conj(&self, g: Elem, h: Elem) -> Elem {
        self.mul(self.mul(g, h), self.inv(g))
    }

    pub fn mul_all(&self, elems: &[Elem]) -> Elem {
        elems.iter().fold(self.identity, |acc, &x| self.mul(acc, x))
    }

    pub fn pow(&self, a: Elem, k: usize) -> Elem {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: Elem) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Least common multiple of element orders.
    pub fn exponent(&self) -> usize {
        self.elements()
            .map(|a| self.element_order(a))
            .fold(1, num_integer::lcm)
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.table
            .chunks(self.order)
            .map(<[usize]>::to_vec)
            .collect()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, a: Elem) -> String {
        match &self.labels {
            Some(l) => l[a].clone(),
            None if a == self.identity => "e".to_string(),
            None => format!("g{a}"),
        }
    }

    pub fn check_elem(&self, a: Elem) -> Result<Elem, GroupError> {
        if a < self.order {
            Ok(a)
        } else {
            Err(GroupError::ElementOutOfRange(a, self.order))
        }
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup {
            elements: vec![self.identity],
        }
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup {
            elements: self.elements().collect(),
        }
    }

    /// Smallest subgroup containing `seed`.
    pub fn subgroup_closure(&self, seed: &[Elem]) -> Result<Subgroup, GroupError> {
        for &s in seed {
            self.check_elem(s)?;
        }
        let mut inside = vec![false; self.order];
        inside[self.identity] = true;
        let mut elems = vec![self.identity];
        let mut queue: VecDeque<Elem> = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &s in seed {
                let y = self.mul(x, s);
                if !std::mem::replace(&mut inside[y], true) {
                    elems.push(y);
                    queue.push_back(y);
                }
            }
        }
        elems.sort_unstable();
        Ok(Subgroup { elements: elems })
    }

    /// Normalizer of `h` in this group.
    pub fn normalizer(&self, h: &Subgroup) -> Subgroup {
        let elements = self
            .elements()
            .filter(|&g| h.elements.iter().all(|&x| h.contains(self.conj(g, x))))
            .collect();
        Subgroup { elements }
    }

    /// `g H g^-1`.
    pub fn conjugate_subgroup(&self, h: &Subgroup, g: Elem) -> Subgroup {
        let mut elements: Vec<Elem> = h.elements.iter().map(|&x| self.conj(g, x)).collect();
        elements.sort_unstable();
        Subgroup { elements }
    }

    pub fn intersect(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        Subgroup {
            elements: a
                .elements
                .iter()
                .copied()
                .filter(|&x| b.contains(x))
                .collect(),
        }
    }

    /// Right cosets `H g`, ordered by their least element.
    pub fn right_cosets(&self, h: &Subgroup) -> Cosets {
        let mut coset_of = vec![usize::MAX; self.order];
        let mut cosets = Vec::new();
        for g in self.elements() {
            if coset_of[g] != usize::MAX {
                continue;
            }
            let mut c: Vec<Elem> = h.elements.iter().map(|&x| self.mul(x, g)).collect();
            c.sort_unstable();
            for &y in &c {
                coset_of[y] = cosets.len();
            }
            cosets.push(c);
        }
        Cosets { cosets, coset_of }
    }

    /// Least element of the right coset `H g`.
    pub fn right_coset_key(&self, h: &Subgroup, g: Elem) -> Elem {
        h.elements
            .iter()
            .map(|&x| self.mul(x, g))
            .min()
            .expect("subgroups are nonempty")
    }

    /// Conjugates `g H g^-1`, deduplicated, ordered by element list.
    pub fn conjugates(&self, h: &Subgroup) -> Vec<Subgroup> {
        let set: BTreeSet<Vec<Elem>> = self
            .elements()
            .map(|g| self.conjugate_subgroup(h, g).elements)
            .collect();
        set.into_iter()
            .map(|elements| Subgroup { elements })
            .collect()
    }

    /// Lexicographically least conjugate of `h`, with the least conjugating
    /// element reaching it.
    pub fn canonical_conjugate(&self, h: &Subgroup) -> (Subgroup, Elem) {
        let mut best: Option<(Subgroup, Elem)> = None;
        for g in self.elements() {
            let c = self.conjugate_subgroup(h, g);
            if best.as_ref().is_none_or(|(b, _)| c.elements < b.elements) {
                best = Some((c, g));
            }
        }
        best.expect("nonempty group")
    }

    /// All subgroups, ordered by size and then by element list.
    pub fn subgroups(&self) -> Vec<Subgroup> {
        let mut found: BTreeSet<Vec<Elem>> = BTreeSet::new();
        let mut frontier: Vec<Vec<Elem>> = Vec::new();
        for g in self.elements() {
            let s = self.subgroup_closure(&[g]).expect("in range").elements;
            if found.insert(s.clone()) {
                frontier.push(s);
            }
        }
        let cyclic: Vec<Vec<Elem>> = found.iter().cloned().collect();
        while let Some(s) = frontier.pop() {
            for c in &cyclic {
                if c.iter().all(|x| s.binary_search(x).is_ok()) {
                    continue;
                }
                let mut seed = s.clone();
                seed.extend_from_slice(c);
                let t = self.subgroup_closure(&seed).expect("in range").elements;
                if found.insert(t.clone()) {
                    frontier.push(t);
                }
            }
        }
        let mut all: Vec<Subgroup> = found
            .into_iter()
            .map(|elements| Subgroup { elements })
            .collect();
        all.sort_by(|a, b| (a.order(), &a.elements).cmp(&(b.order(), &b.elements)));
        all
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "group of order {}", self.order)
    }
}

fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        out.push('(');
        let mut x = start;
        let mut first = true;
        while !seen[x] {
            seen[x] = true;
            if !first {
                out.push(' ');
            }
            out.push_str(&(x + 1).to_string());
            first = false;
            x = p[x];
        }
        out.push(')');
    }
    if out.is_empty() {
        "e".to_string()
    } else {
        out
    }
}

/// A subgroup, stored as the sorted list of its elements in the ambient group.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Subgroup {
    elements: Vec<Elem>,
}

impl Subgroup {
    /// Validate that `elements` is a subgroup of `group`.
    pub fn new(group: &Group, elements: Vec<Elem>) -> Result<Self, GroupError> {
        let mut elements = elements;
        for &x in &elements {
            group.check_elem(x)?;
        }
        elements.sort_unstable();
        elements.dedup();
        let closed = !elements.is_empty()
            && elements.iter().all(|&a| {
                elements
                    .iter()
                    .all(|&b| elements.binary_search(&group.mul(a, b)).is_ok())
            });
        if !closed {
            return Err(GroupError::NotClosed(elements));
        }
        Ok(Subgroup { elements })
    }

    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    /// Position of `x` in the sorted element list.
    pub fn position(&self, x: Elem) -> Option<usize> {
        self.elements.binary_search(&x).ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }

    /// The subgroup as a standalone group; element `k` is `self.elements()[k]`.
    pub fn induced_group(&self, ambient: &Group) -> Group {
        let table = self
            .elements
            .iter()
            .map(|&a| {
                self.elements
                    .iter()
                    .map(|&b| self.position(ambient.mul(a, b)).expect("closed"))
                    .collect()
            })
            .collect();
        let labels = self.elements.iter().map(|&a| ambient.label(a)).collect();
        Group::from_table_with(table, 0)
            .expect("subgroup table")
            .with_labels(labels)
            .expect("label count")
    }
}

/// Right cosets of a subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cosets {
    pub cosets: Vec<Vec<Elem>>,
    pub coset_of: Vec<usize>,
}

impl Cosets {
    pub fn len(&self) -> usize {
        self.cosets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cosets.is_empty()
    }

    /// Least element of the coset containing `g`.
    pub fn key(&self, g: Elem) -> Elem {
        self.cosets[self.coset_of[g]][0]
    }
}

/// JSON form of a group.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupFile {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

/// A group in JSON: either a full table or a built-in name.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Named(String),
    Table(GroupFile),
}

impl GroupSpec {
    pub fn build(&self) -> Result<Group, GroupError> {
        match self {
            GroupSpec::Named(name) => Group::named(name),
            GroupSpec::Table(file) => Group::try_from(file.clone()),
        }
    }
}

impl TryFrom<GroupFile> for Group {
    type Error = GroupError;

    fn try_from(file: GroupFile) -> Result<Self, GroupError> {
        if file.order != file.table.len() {
            return Err(GroupError::Ragged {
                row: file.table.len(),
                len: file.table.len(),
                order: file.order,
            });
        }
        let g = validate_group(file.table)?;
        match file.labels {
            Some(l) => g.with_labels(l),
            None => Ok(g),
        }
    }
}

impl From<&Group> for GroupFile {
    fn from(g: &Group) -> Self {
        GroupFile {
            order: g.order,
            table: g.table(),
            labels: g.labels.clone(),
        }
    }
}

impl Serialize for Group {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GroupFile::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Group {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        GroupSpec::deserialize(d)?
            .build()
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_bad_tables() {
        assert_eq!(validate_group(vec![]), Err(GroupError::Empty));
        assert!(matches!(
            validate_group(vec![vec![0, 1], vec![1]]),
            Err(GroupError::Ragged { .. })
        ));
        assert!(matches!(
            validate_group(vec![vec![0, 1], vec![0, 1]]),
            Err(GroupError::NotLatinSquare { .. })
        ));
        assert!(matches!(
            validate_group(vec![vec![0, 2], vec![1, 0]]),
            Err(GroupError::EntryOutOfRange { .. })
        ));
        // a Latin square without identity
        assert_eq!(
            validate_group(vec![vec![1, 0], vec![0, 1]]).map(|g| g.identity()),
            Ok(1)
        );
        let quasi = vec![vec![0, 2, 1], vec![2, 1, 0], vec![1, 0, 2]];
        assert_eq!(validate_group(quasi), Err(GroupError::NoIdentity));
    }

    #[test]
    fn rejects_nonassociative_loop() {
        // the smallest loop that is not a group, order 5
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(
            validate_group(t.clone()),
            Err(GroupError::NotAssociative(..))
        ));
        assert!(Group::from_table_with(t, 4).is_ok());
    }

    #[test]
    fn identity_not_at_zero() {
        let g = validate_group(vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(g.identity(), 1);
        assert_eq!(g.inv(0), 0);
        assert_eq!(g.trivial_subgroup().elements(), &[1]);
    }

    #[test]
    fn standard_groups() {
        assert_eq!(Group::symmetric(3).order(), 6);
        assert!(!Group::symmetric(3).is_abelian());
        assert_eq!(Group::dihedral(4).order(), 8);
        assert!(!Group::dihedral(4).is_abelian());
        assert!(Group::klein_four().is_abelian());
        assert_eq!(Group::klein_four().exponent(), 2);
        assert_eq!(Group::quaternion().exponent(), 4);
        assert_eq!(Group::named("c2xc2").unwrap(), Group::klein_four());
        assert_eq!(Group::named("D4").unwrap(), Group::dihedral(4));
        assert!(Group::named("X9").is_err());
    }

    #[test]
    fn s3_subgroups() {
        let s3 = Group::symmetric(3);
        let subs = s3.subgroups();
        assert_eq!(subs.len(), 6);
        let order2: Vec<_> = subs.iter().filter(|s| s.order() == 2).collect();
        assert_eq!(order2.len(), 3);
        assert_eq!(s3.conjugates(order2[0]).len(), 3);
        assert_eq!(s3.normalizer(order2[0]), *order2[0]);
        assert_eq!(s3.right_cosets(order2[0]).len(), 3);
    }

    #[test]
    fn d4_subgroups_count() {
        // D4 has 10 subgroups
        assert_eq!(Group::dihedral(4).subgroups().len(), 10);
        assert_eq!(Group::quaternion().subgroups().len(), 6);
    }

    #[test]
    fn json_roundtrip() {
        let g = Group::dihedral(4);
        let s = serde_json::to_string(&g).unwrap();
        let h: Group = serde_json::from_str(&s).unwrap();
        assert_eq!(g, h);
        assert_eq!(h.label(5), "sr");
        let n: Group = serde_json::from_str("\"S3\"").unwrap();
        assert_eq!(n.order(), 6);
    }

    fn small_group() -> impl Strategy<Value = Group> {
        prop_oneof![
            (1usize..9).prop_map(Group::cyclic),
            Just(Group::klein_four()),
            Just(Group::symmetric(3)),
            Just(Group::dihedral(4)),
            Just(Group::quaternion()),
        ]
    }

    proptest! {
        #[test]
        fn cosets_partition(g in small_group(), pick in 0usize..100) {
            let subs = g.subgroups();
            let h = &subs[pick % subs.len()];
            let cosets = g.right_cosets(h);
            prop_assert_eq!(cosets.len() * h.order(), g.order());
            for x in g.elements() {
                prop_assert_eq!(cosets.key(x), g.right_coset_key(h, x));
            }
            let n = g.normalizer(h);
            prop_assert!(h.is_subgroup_of(&n));
            for &x in n.elements() {
                prop_assert_eq!(g.conjugate_subgroup(h, x), h.clone());
            }
        }

        #[test]
        fn closure_is_subgroup(g in small_group(), seed in proptest::collection::vec(0usize..8, 0..3)) {
            let seed: Vec<_> = seed.into_iter().map(|x| x % g.order()).collect();
            let s = g.subgroup_closure(&seed).unwrap();
            prop_assert!(Subgroup::new(&g, s.elements().to_vec()).is_ok());
            prop_assert_eq!(g.order() % s.order(), 0);
            let induced = s.induced_group(&g);
            prop_assert_eq!(induced.order(), s.order());
        }
    }
}
