//! Finite sets, finite functions and the set-level colimit machinery
//! (coproducts and coequalizers) that every presheaf colimit is built from.

use std::cell::Cell;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Opaque element identifier. Ordering is the allocation order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElemId(pub u64);

impl fmt::Display for ElemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Allocator of fresh element ids.
///
/// A workspace is owned by a single thread (it is deliberately `!Sync`); every
/// construction that needs fresh elements borrows it. Two fresh workspaces fed
/// the same sequence of operations produce identical ids.
#[derive(Debug, Default)]
pub struct Workspace {
    next: Cell<u64>,
}

impl Workspace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn fresh(&self) -> ElemId {
        let id = self.next.get();
        self.next.set(id + 1);
        ElemId(id)
    }

    /// Number of ids handed out so far.
    pub fn allocated(&self) -> u64 {
        self.next.get()
    }
}

/// A duplicate-free set of element ids, iterated in id order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinSet {
    elems: Arc<[ElemId]>,
}

impl FinSet {
    pub fn empty() -> Self {
        FinSet { elems: Arc::from(Vec::new()) }
    }

    /// Builds a set from arbitrary ids; duplicates are dropped.
    pub fn from_ids(ids: impl IntoIterator<Item = ElemId>) -> Self {
        let mut elems: Vec<ElemId> = ids.into_iter().collect();
        elems.sort_unstable();
        elems.dedup();
        FinSet { elems: elems.into() }
    }

    /// `n` fresh elements.
    pub fn fresh(ws: &Workspace, n: usize) -> Self {
        FinSet { elems: (0..n).map(|_| ws.fresh()).collect::<Vec<_>>().into() }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, x: ElemId) -> bool {
        self.elems.binary_search(&x).is_ok()
    }

    /// Position of `x` in the canonical order.
    pub fn rank(&self, x: ElemId) -> Option<usize> {
        self.elems.binary_search(&x).ok()
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = ElemId> + '_ {
        self.elems.iter().copied()
    }

    pub fn as_slice(&self) -> &[ElemId] {
        &self.elems
    }

    pub fn get(&self, rank: usize) -> Option<ElemId> {
        self.elems.get(rank).copied()
    }
}

impl FromIterator<ElemId> for FinSet {
    fn from_iter<T: IntoIterator<Item = ElemId>>(iter: T) -> Self {
        FinSet::from_ids(iter)
    }
}

/// A total function between two finite sets, stored as its graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinFun {
    domain: FinSet,
    codomain: FinSet,
    graph: BTreeMap<ElemId, ElemId>,
}

impl FinFun {
    /// Checks totality on the domain and that every image lies in the codomain.
    pub fn new(domain: FinSet, codomain: FinSet, graph: BTreeMap<ElemId, ElemId>) -> Result<Self> {
        if graph.len() != domain.len() || !domain.iter().all(|x| graph.contains_key(&x)) {
            return Err(Error::NotTotal);
        }
        if let Some((x, y)) = graph.iter().find(|(_, y)| !codomain.contains(**y)) {
            return Err(Error::OutOfCodomain { arg: *x, image: *y });
        }
        Ok(FinFun { domain, codomain, graph })
    }

    pub(crate) fn new_unchecked(domain: FinSet, codomain: FinSet, graph: BTreeMap<ElemId, ElemId>) -> Self {
        debug_assert_eq!(graph.len(), domain.len());
        FinFun { domain, codomain, graph }
    }

    /// Builds a function by evaluating `f` on every domain element.
    pub fn from_fn(domain: FinSet, codomain: FinSet, mut f: impl FnMut(ElemId) -> ElemId) -> Result<Self> {
        let graph = domain.iter().map(|x| (x, f(x))).collect();
        FinFun::new(domain, codomain, graph)
    }

    pub fn domain(&self) -> &FinSet {
        &self.domain
    }

    pub fn codomain(&self) -> &FinSet {
        &self.codomain
    }

    pub fn graph(&self) -> &BTreeMap<ElemId, ElemId> {
        &self.graph
    }

    pub fn apply(&self, x: ElemId) -> Option<ElemId> {
        self.graph.get(&x).copied()
    }

    /// Evaluation for arguments known to be in the domain.
    pub fn at(&self, x: ElemId) -> ElemId {
        self.graph[&x]
    }

    pub fn is_injective(&self) -> bool {
        let mut seen: Vec<ElemId> = self.graph.values().copied().collect();
        seen.sort_unstable();
        seen.windows(2).all(|w| w[0] != w[1])
    }

    pub fn is_surjective(&self) -> bool {
        let image = FinSet::from_ids(self.graph.values().copied());
        image.len() == self.codomain.len()
    }

    pub fn is_bijection(&self) -> bool {
        self.domain.len() == self.codomain.len() && self.is_injective() && self.is_surjective()
    }

    /// Inverse of a bijection.
    pub fn inverse(&self) -> Option<FinFun> {
        if !self.is_bijection() {
            return None;
        }
        let graph = self.graph.iter().map(|(x, y)| (*y, *x)).collect();
        Some(FinFun::new_unchecked(self.codomain.clone(), self.domain.clone(), graph))
    }
}

pub fn identity(s: &FinSet) -> FinFun {
    FinFun::new_unchecked(s.clone(), s.clone(), s.iter().map(|x| (x, x)).collect())
}

/// `f` then `g`.
pub fn compose(f: &FinFun, g: &FinFun) -> Result<FinFun> {
    if f.codomain != g.domain {
        return Err(Error::BoundaryMismatch);
    }
    let graph = f.graph.iter().map(|(x, y)| (*x, g.at(*y))).collect();
    Ok(FinFun::new_unchecked(f.domain.clone(), g.codomain.clone(), graph))
}

/// A coproduct together with its coprojections.
#[derive(Clone, Debug)]
pub struct Coproduct {
    pub set: FinSet,
    pub injections: Vec<FinFun>,
}

impl Coproduct {
    /// The unique map out of the coproduct restricting to `legs[i]` on part `i`.
    pub fn copair(&self, target: &FinSet, legs: &[FinFun]) -> Result<FinFun> {
        if legs.len() != self.injections.len() {
            return Err(Error::BoundaryMismatch);
        }
        let mut graph = BTreeMap::new();
        for (inj, leg) in self.injections.iter().zip(legs) {
            if inj.domain != leg.domain || &leg.codomain != target {
                return Err(Error::BoundaryMismatch);
            }
            for (x, y) in &inj.graph {
                graph.insert(*y, leg.at(*x));
            }
        }
        Ok(FinFun::new_unchecked(self.set.clone(), target.clone(), graph))
    }
}

/// Disjoint union; fresh ids are allocated part by part, in element order.
pub fn coproduct(ws: &Workspace, parts: &[FinSet]) -> Coproduct {
    let mut all = Vec::new();
    let mut graphs = Vec::with_capacity(parts.len());
    for part in parts {
        let mut graph = BTreeMap::new();
        for x in part.iter() {
            let y = ws.fresh();
            all.push(y);
            graph.insert(x, y);
        }
        graphs.push(graph);
    }
    let set = FinSet { elems: all.into() };
    let injections = parts.iter().zip(graphs).map(|(p, g)| FinFun::new_unchecked(p.clone(), set.clone(), g)).collect();
    Coproduct { set, injections }
}

/// Disjoint-set forest over dense indices.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn push(&mut self) -> usize {
        let i = self.parent.len();
        self.parent.push(i);
        self.size.push(1);
        i
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns true if the classes were distinct.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (big, small) = if self.size[ra] >= self.size[rb] { (ra, rb) } else { (rb, ra) };
        self.parent[small] = big;
        self.size[big] += self.size[small];
        true
    }
}

/// Quotient of `t` by the equivalence relation generated by `pairs`.
///
/// Each class is represented by its least id, so the quotient set is a subset
/// of `t` and the projection fixes representatives.
pub fn quotient_by_pairs(t: &FinSet, pairs: impl IntoIterator<Item = (ElemId, ElemId)>) -> Result<(FinSet, FinFun)> {
    let mut uf = UnionFind::new(t.len());
    for (a, b) in pairs {
        let ra = t.rank(a).ok_or(Error::BoundaryMismatch)?;
        let rb = t.rank(b).ok_or(Error::BoundaryMismatch)?;
        uf.union(ra, rb);
    }
    // elements are visited in increasing order, so the first one seen per
    // root is the least member of its class
    let mut rep_of_root: BTreeMap<usize, ElemId> = BTreeMap::new();
    let mut graph = BTreeMap::new();
    let mut reps = Vec::new();
    for (i, x) in t.iter().enumerate() {
        let root = uf.find(i);
        let rep = *rep_of_root.entry(root).or_insert_with(|| {
            reps.push(x);
            x
        });
        graph.insert(x, rep);
    }
    let q = FinSet { elems: reps.into() };
    let proj = FinFun::new_unchecked(t.clone(), q.clone(), graph);
    Ok((q, proj))
}

/// Coequalizer of a parallel pair `f, g: S -> T`.
pub fn coequalizer(f: &FinFun, g: &FinFun) -> Result<(FinSet, FinFun)> {
    if f.domain != g.domain || f.codomain != g.codomain {
        return Err(Error::BoundaryMismatch);
    }
    quotient_by_pairs(&f.codomain, f.domain.iter().map(|s| (f.at(s), g.at(s))))
}

/// Lazy stream of all functions `s -> t`, in lexicographic order of the
/// image tuple (first domain element varies slowest).
pub struct AllFunctions {
    domain: FinSet,
    codomain: FinSet,
    counter: Vec<usize>,
    done: bool,
}

pub fn all_functions(s: &FinSet, t: &FinSet) -> AllFunctions {
    AllFunctions {
        domain: s.clone(),
        codomain: t.clone(),
        counter: vec![0; s.len()],
        done: t.is_empty() && !s.is_empty(),
    }
}

impl Iterator for AllFunctions {
    type Item = FinFun;

    fn next(&mut self) -> Option<FinFun> {
        if self.done {
            return None;
        }
        let graph = self.domain.iter().zip(&self.counter).map(|(x, &k)| (x, self.codomain.elems[k])).collect();
        let out = FinFun::new_unchecked(self.domain.clone(), self.codomain.clone(), graph);
        // odometer increment, last position fastest
        let n = self.codomain.len();
        let mut i = self.counter.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.counter[i] += 1;
            if self.counter[i] < n {
                break;
            }
            self.counter[i] = 0;
        }
        Some(out)
    }
}
