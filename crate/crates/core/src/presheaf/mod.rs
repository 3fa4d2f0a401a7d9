//! Finite presheaves over a [`FinCat`], their morphisms, and the constructions
//! built from them.
//!
//! A presheaf `X` assigns a finite set to each object and, to each morphism
//! `f: c -> c'`, a function `X(f): X(c') -> X(c)`.

mod colimit;
mod nat;
mod presented;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

pub use colimit::{coequalizer_ps, coproduct_ps, pushout, tensor, Colimit, Diagram, Pushout};
pub use nat::{enumerate_nat_trans, liftings, NatIter};
pub use presented::{eval, ElemExpr, Presented, PresheafPresentation};

use crate::error::{check, Error, Result, Violation};
use crate::finbase::{compose, identity, ElemId, FinFun, FinSet, Workspace};
use crate::fincat::FinCat;

#[derive(Clone, Debug)]
struct PsData {
    base: Arc<FinCat>,
    sets: BTreeMap<ElemId, FinSet>,
    actions: BTreeMap<ElemId, FinFun>,
    labels: BTreeMap<ElemId, String>,
    dense: OnceLock<Arc<Dense>>,
}

#[derive(Clone)]
pub struct Presheaf(Arc<PsData>);

/// Rank-indexed copy of a presheaf for the search engines.
#[derive(Debug)]
pub(crate) struct Dense {
    pub sets: Vec<FinSet>,
    /// `act[f][i]` is the rank in `X(src f)` of `X(f)` applied to the
    /// element of rank `i` in `X(tgt f)`.
    pub act: Vec<Vec<usize>>,
}

impl fmt::Debug for Presheaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (c, s) in &self.0.sets {
            let elems: Vec<String> = s.iter().map(|x| self.label(x)).collect();
            m.entry(&self.0.base.name(*c), &elems);
        }
        m.finish()
    }
}

impl PartialEq for Presheaf {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.base == other.0.base && self.0.sets == other.0.sets && self.0.actions == other.0.actions)
    }
}

impl Eq for Presheaf {}

impl Presheaf {
    /// Builds a presheaf from a set per object and an action per morphism.
    /// Only the shapes are checked here; functoriality is checked by
    /// [`validate_presheaf`].
    pub fn from_parts(
        base: Arc<FinCat>,
        sets: BTreeMap<ElemId, FinSet>,
        actions: BTreeMap<ElemId, FinFun>,
    ) -> Result<Presheaf> {
        let mut v = Vec::new();
        for c in base.objects().iter() {
            if !sets.contains_key(&c) {
                v.push(Violation::new("missing set", vec![c], base.name(c)));
            }
        }
        if sets.len() != base.objects().len() {
            v.push(Violation::new("sets indexed by unknown objects", vec![], ""));
        }
        if !v.is_empty() {
            return Err(Error::Invalid(v));
        }
        for f in base.morphisms().iter() {
            match actions.get(&f) {
                None => v.push(Violation::new("missing action", vec![f], base.name(f))),
                Some(a) => {
                    if a.domain() != &sets[&base.tgt(f)] || a.codomain() != &sets[&base.src(f)] {
                        v.push(Violation::new("action boundary", vec![f], base.name(f)));
                    }
                }
            }
        }
        if actions.len() != base.morphisms().len() {
            v.push(Violation::new("actions indexed by unknown morphisms", vec![], ""));
        }
        check(v)?;
        Ok(Presheaf(Arc::new(PsData { base, sets, actions, labels: BTreeMap::new(), dense: OnceLock::new() })))
    }

    /// Builds a presheaf from the actions of generating morphisms only;
    /// identities act trivially and composites are derived.
    pub fn from_generators(
        base: Arc<FinCat>,
        sets: BTreeMap<ElemId, FinSet>,
        generator_actions: &BTreeMap<ElemId, FinFun>,
    ) -> Result<Presheaf> {
        let mut actions = BTreeMap::new();
        for f in base.morphisms().iter() {
            let Some(top) = sets.get(&base.tgt(f)) else {
                return Err(Error::UnknownObject(base.name(base.tgt(f))));
            };
            let mut act = identity(top);
            for g in base.decomposition(f).iter().rev() {
                let ga = generator_actions
                    .get(g)
                    .ok_or_else(|| Error::UnknownMorphism(format!("no action for {}", base.name(*g))))?;
                act = compose(&act, ga)?;
            }
            actions.insert(f, act);
        }
        Presheaf::from_parts(base, sets, actions)
    }

    /// Builds a presheaf from named element lists per object and named
    /// element maps for each generating morphism. Element names become labels.
    pub fn from_named_tables(
        ws: &Workspace,
        base: Arc<FinCat>,
        sets: &[(&str, Vec<&str>)],
        actions: &[(&str, Vec<(&str, &str)>)],
    ) -> Result<Presheaf> {
        let mut by_obj: BTreeMap<ElemId, BTreeMap<String, ElemId>> = BTreeMap::new();
        let mut set_map = BTreeMap::new();
        let mut labels = BTreeMap::new();
        for (obj, elems) in sets {
            let c = base.object_named(obj)?;
            let mut names = BTreeMap::new();
            for e in elems {
                let id = ws.fresh();
                if names.insert(e.to_string(), id).is_some() {
                    return Err(Error::Invalid(vec![Violation::new("duplicate element", vec![], *e)]));
                }
                labels.insert(id, e.to_string());
            }
            set_map.insert(c, FinSet::from_ids(names.values().copied()));
            by_obj.insert(c, names);
        }
        for c in base.objects().iter() {
            set_map.entry(c).or_insert_with(FinSet::empty);
            by_obj.entry(c).or_default();
        }
        let elem = |c: ElemId, n: &str| {
            by_obj[&c].get(n).copied().ok_or_else(|| {
                Error::Invalid(vec![Violation::new("unknown element", vec![c], format!("{n} over {}", base.name(c)))])
            })
        };
        let mut gen_actions = BTreeMap::new();
        for (arrow, table) in actions {
            let f = base.morphism_named(arrow)?;
            let (s, t) = (base.src(f), base.tgt(f));
            let graph =
                table.iter().map(|(a, b)| Ok((elem(t, a)?, elem(s, b)?))).collect::<Result<BTreeMap<_, _>>>()?;
            gen_actions.insert(f, FinFun::new(set_map[&t].clone(), set_map[&s].clone(), graph)?);
        }
        for g in base.generators() {
            let (s, t) = (base.src(g), base.tgt(g));
            if set_map[&t].is_empty() {
                gen_actions
                    .entry(g)
                    .or_insert_with(|| FinFun::new_unchecked(FinSet::empty(), set_map[&s].clone(), BTreeMap::new()));
            }
        }
        Ok(Presheaf::from_generators(base, set_map, &gen_actions)?.with_labels(labels))
    }

    /// The element of `X(c)` labelled `name`.
    pub fn element_named(&self, c: ElemId, name: &str) -> Option<ElemId> {
        self.set(c).iter().find(|x| self.0.labels.get(x).is_some_and(|l| l == name))
    }

    pub fn empty(base: Arc<FinCat>) -> Presheaf {
        let sets = base.objects().iter().map(|c| (c, FinSet::empty())).collect();
        let actions = base.morphisms().iter().map(|f| (f, identity(&FinSet::empty()))).collect();
        Presheaf::from_parts(base, sets, actions).expect("empty presheaf is well-formed")
    }

    /// The presheaf with a single element everywhere.
    pub fn terminal(ws: &Workspace, base: Arc<FinCat>) -> Presheaf {
        let sets: BTreeMap<ElemId, FinSet> = base.objects().iter().map(|c| (c, FinSet::fresh(ws, 1))).collect();
        let actions = base
            .morphisms()
            .iter()
            .map(|f| {
                let (s, t) = (&sets[&base.src(f)], &sets[&base.tgt(f)]);
                (f, FinFun::from_fn(t.clone(), s.clone(), |_| s.as_slice()[0]).unwrap())
            })
            .collect();
        let labels = sets.values().flat_map(|s| s.iter()).map(|x| (x, "*".to_string())).collect();
        Presheaf::from_parts(base, sets, actions).unwrap().with_labels(labels)
    }

    pub fn with_labels(self, labels: BTreeMap<ElemId, String>) -> Presheaf {
        let mut data = Arc::unwrap_or_clone(self.0);
        data.labels = labels;
        Presheaf(Arc::new(data))
    }

    pub fn base(&self) -> &Arc<FinCat> {
        &self.0.base
    }

    pub fn set(&self, c: ElemId) -> &FinSet {
        &self.0.sets[&c]
    }

    pub fn sets(&self) -> &BTreeMap<ElemId, FinSet> {
        &self.0.sets
    }

    /// `X(f)` for `f: c -> c'`, a function `X(c') -> X(c)`.
    pub fn action(&self, f: ElemId) -> &FinFun {
        &self.0.actions[&f]
    }

    pub fn actions(&self) -> &BTreeMap<ElemId, FinFun> {
        &self.0.actions
    }

    pub fn act(&self, f: ElemId, x: ElemId) -> ElemId {
        self.0.actions[&f].at(x)
    }

    pub fn labels(&self) -> &BTreeMap<ElemId, String> {
        &self.0.labels
    }

    pub fn label(&self, x: ElemId) -> String {
        self.0.labels.get(&x).cloned().unwrap_or_else(|| x.to_string())
    }

    /// Which object an element lives over, if any.
    pub fn object_of(&self, x: ElemId) -> Option<ElemId> {
        self.0.sets.iter().find(|(_, s)| s.contains(x)).map(|(c, _)| *c)
    }

    /// Cardinalities in object order.
    pub fn sizes(&self) -> Vec<usize> {
        self.0.sets.values().map(FinSet::len).collect()
    }

    pub fn total_size(&self) -> usize {
        self.0.sets.values().map(FinSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.total_size() == 0
    }

    pub(crate) fn dense(&self) -> Arc<Dense> {
        self.0
            .dense
            .get_or_init(|| {
                let idx = self.0.base.index();
                let sets: Vec<FinSet> = idx.objects.iter().map(|c| self.0.sets[c].clone()).collect();
                let act = idx
                    .morphisms
                    .iter()
                    .enumerate()
                    .map(|(i, f)| {
                        let a = &self.0.actions[f];
                        let (src, tgt) = (&sets[idx.src[i]], &sets[idx.tgt[i]]);
                        tgt.iter().map(|x| src.rank(a.at(x)).expect("action lands in set")).collect()
                    })
                    .collect();
                Arc::new(Dense { sets, act })
            })
            .clone()
    }
}

pub fn same_base(a: &Presheaf, b: &Presheaf) -> Result<()> {
    if Arc::ptr_eq(a.base(), b.base()) || a.base() == b.base() {
        Ok(())
    } else {
        Err(Error::BaseMismatch)
    }
}

/// Checks functoriality of the actions exhaustively.
pub fn validate_presheaf(x: &Presheaf) -> Vec<Violation> {
    let c = x.base();
    let mut out = Vec::new();
    for o in c.objects().iter() {
        let idf = c.identity(o);
        if x.action(idf) != &identity(x.set(o)) {
            out.push(Violation::new("identity action", vec![idf], c.name(idf)));
        }
    }
    for (&(f, g), &h) in c.composition_table() {
        if c.is_identity(f) || c.is_identity(g) {
            continue;
        }
        let (xf, xg, xh) = (x.action(f), x.action(g), x.action(h));
        if let Some(y) = x.set(c.tgt(g)).iter().find(|&y| xh.at(y) != xf.at(xg.at(y))) {
            out.push(Violation::new(
                "functoriality",
                vec![f, g, y],
                format!("action of {} differs from composite of actions", c.name(h)),
            ));
        }
    }
    out
}

#[derive(Clone, Debug)]
struct MorData {
    source: Presheaf,
    target: Presheaf,
    components: BTreeMap<ElemId, FinFun>,
}

/// A natural family of functions `X(c) -> Y(c)`.
#[derive(Clone, Debug)]
pub struct PsMorphism(Arc<MorData>);

impl PartialEq for PsMorphism {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.components == other.0.components
                && self.0.source == other.0.source
                && self.0.target == other.0.target)
    }
}

impl Eq for PsMorphism {}

impl PsMorphism {
    /// Assembles a morphism, checking component boundaries. Naturality is
    /// checked by [`validate_morphism`].
    pub fn new(source: Presheaf, target: Presheaf, components: BTreeMap<ElemId, FinFun>) -> Result<PsMorphism> {
        same_base(&source, &target)?;
        let mut v = Vec::new();
        for c in source.base().objects().iter() {
            match components.get(&c) {
                Some(a) if a.domain() == source.set(c) && a.codomain() == target.set(c) => {}
                Some(_) => v.push(Violation::new("component boundary", vec![c], "")),
                None => v.push(Violation::new("missing component", vec![c], "")),
            }
        }
        if components.len() != source.base().objects().len() {
            v.push(Violation::new("components indexed by unknown objects", vec![], ""));
        }
        check(v)?;
        Ok(PsMorphism(Arc::new(MorData { source, target, components })))
    }

    pub(crate) fn from_ranks(source: Presheaf, target: Presheaf, ranks: &[Vec<usize>]) -> PsMorphism {
        let idx = source.base().index();
        let components = idx
            .objects
            .iter()
            .zip(ranks)
            .map(|(c, r)| {
                let (xs, ys) = (source.set(*c), target.set(*c));
                let graph = xs.iter().zip(r).map(|(x, &j)| (x, ys.as_slice()[j])).collect();
                (*c, FinFun::new_unchecked(xs.clone(), ys.clone(), graph))
            })
            .collect();
        PsMorphism(Arc::new(MorData { source, target, components }))
    }

    pub fn identity(x: &Presheaf) -> PsMorphism {
        let components = x.sets().iter().map(|(c, s)| (*c, identity(s))).collect();
        PsMorphism(Arc::new(MorData { source: x.clone(), target: x.clone(), components }))
    }

    pub fn source(&self) -> &Presheaf {
        &self.0.source
    }

    pub fn target(&self) -> &Presheaf {
        &self.0.target
    }

    pub fn component(&self, c: ElemId) -> &FinFun {
        &self.0.components[&c]
    }

    pub fn components(&self) -> &BTreeMap<ElemId, FinFun> {
        &self.0.components
    }

    pub fn apply(&self, c: ElemId, x: ElemId) -> ElemId {
        self.0.components[&c].at(x)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &PsMorphism) -> Result<PsMorphism> {
        if self.target() != other.source() {
            return Err(Error::BoundaryMismatch);
        }
        let components =
            self.components().iter().map(|(c, f)| Ok((*c, compose(f, other.component(*c))?))).collect::<Result<_>>()?;
        Ok(PsMorphism(Arc::new(MorData { source: self.source().clone(), target: other.target().clone(), components })))
    }

    pub fn is_iso(&self) -> bool {
        self.components().values().all(FinFun::is_bijection)
    }

    pub fn inverse(&self) -> Option<PsMorphism> {
        let components = self.components().iter().map(|(c, f)| f.inverse().map(|g| (*c, g))).collect::<Option<_>>()?;
        Some(PsMorphism(Arc::new(MorData { source: self.target().clone(), target: self.source().clone(), components })))
    }

    /// Rank of each component value, in object order.
    pub(crate) fn ranks(&self) -> Vec<Vec<usize>> {
        let idx = self.source().base().index();
        idx.objects
            .iter()
            .map(|c| {
                let ys = self.target().set(*c);
                self.source().set(*c).iter().map(|x| ys.rank(self.apply(*c, x)).unwrap()).collect()
            })
            .collect()
    }

    /// Cardinalities `(|X(c)|, |Y(c)|)` in object order.
    pub fn sizes(&self) -> Vec<(usize, usize)> {
        self.source().sizes().into_iter().zip(self.target().sizes()).collect()
    }
}

pub fn is_iso(m: &PsMorphism) -> bool {
    m.is_iso()
}

/// Checks every naturality square.
pub fn validate_morphism(m: &PsMorphism) -> Vec<Violation> {
    let (x, y) = (m.source(), m.target());
    if same_base(x, y).is_err() {
        return vec![Violation::new("base mismatch", vec![], "")];
    }
    let c = x.base();
    let mut out = Vec::new();
    for f in c.morphisms().iter().filter(|&f| !c.is_identity(f)) {
        let (s, t) = (c.src(f), c.tgt(f));
        if let Some(e) = x.set(t).iter().find(|&e| y.act(f, m.apply(t, e)) != m.apply(s, x.act(f, e))) {
            out.push(Violation::new("naturality", vec![f, e], format!("square for {} does not commute", c.name(f))));
        }
    }
    out
}

/// A named orthogonality condition `g: A -> B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condition {
    pub name: String,
    pub morphism: PsMorphism,
}

/// A base category with orthogonality conditions.
#[derive(Clone, Debug)]
pub struct PresheafModel {
    pub base: Arc<FinCat>,
    pub conditions: Vec<Condition>,
}

impl PresheafModel {
    pub fn new(base: Arc<FinCat>, conditions: Vec<Condition>) -> Result<PresheafModel> {
        let model = PresheafModel { base, conditions };
        check(model.validate())?;
        Ok(model)
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for cond in &self.conditions {
            let g = &cond.morphism;
            if g.source().base() != &self.base || g.target().base() != &self.base {
                out.push(Violation::new("condition over foreign base", vec![], cond.name.clone()));
                continue;
            }
            out.extend(validate_presheaf(g.source()));
            out.extend(validate_presheaf(g.target()));
            out.extend(validate_morphism(g));
        }
        out
    }

    pub fn condition_named(&self, name: &str) -> Option<usize> {
        self.conditions.iter().position(|c| c.name == name)
    }
}

/// Outcome of an orthogonality check `X ⊥ g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Orthogonality {
    Orthogonal,
    /// `f: A -> X` with no lifting along `g`.
    NoLifting {
        f: PsMorphism,
    },
    /// `f: A -> X` with two distinct liftings.
    ManyLiftings {
        f: PsMorphism,
        h1: PsMorphism,
        h2: PsMorphism,
    },
}

impl Orthogonality {
    pub fn is_orthogonal(&self) -> bool {
        matches!(self, Orthogonality::Orthogonal)
    }

    /// Number of liftings of the witness, capped at 2.
    pub fn witness_liftings(&self) -> Option<usize> {
        match self {
            Orthogonality::Orthogonal => None,
            Orthogonality::NoLifting { .. } => Some(0),
            Orthogonality::ManyLiftings { .. } => Some(2),
        }
    }
}

/// Decides whether every `f: A -> X` lifts uniquely along `g: A -> B`.
pub fn check_orthogonal(x: &Presheaf, g: &PsMorphism) -> Result<Orthogonality> {
    same_base(x, g.source())?;
    for f in enumerate_nat_trans(g.source(), x)? {
        let mut lifts = liftings(g, &f)?;
        match (lifts.next(), lifts.next()) {
            (None, _) => return Ok(Orthogonality::NoLifting { f }),
            (Some(h1), Some(h2)) => return Ok(Orthogonality::ManyLiftings { f, h1, h2 }),
            _ => {}
        }
    }
    Ok(Orthogonality::Orthogonal)
}

/// Pointwise product with its two projections.
pub fn product(ws: &Workspace, x: &Presheaf, y: &Presheaf) -> Result<(Presheaf, PsMorphism, PsMorphism)> {
    same_base(x, y)?;
    let base = x.base().clone();
    let mut sets = BTreeMap::new();
    let mut pairs: BTreeMap<ElemId, BTreeMap<(ElemId, ElemId), ElemId>> = BTreeMap::new();
    let mut labels = BTreeMap::new();
    let mut p1 = BTreeMap::new();
    let mut p2 = BTreeMap::new();
    for c in base.objects().iter() {
        let mut table = BTreeMap::new();
        let mut ids = Vec::new();
        let (mut g1, mut g2) = (BTreeMap::new(), BTreeMap::new());
        for a in x.set(c).iter() {
            for b in y.set(c).iter() {
                let z = ws.fresh();
                table.insert((a, b), z);
                ids.push(z);
                g1.insert(z, a);
                g2.insert(z, b);
                labels.insert(z, format!("({},{})", x.label(a), y.label(b)));
            }
        }
        let set = FinSet::from_ids(ids);
        p1.insert(c, FinFun::new_unchecked(set.clone(), x.set(c).clone(), g1));
        p2.insert(c, FinFun::new_unchecked(set.clone(), y.set(c).clone(), g2));
        sets.insert(c, set);
        pairs.insert(c, table);
    }
    let mut actions = BTreeMap::new();
    for f in base.morphisms().iter() {
        let (s, t) = (base.src(f), base.tgt(f));
        let graph = pairs[&t].iter().map(|(&(a, b), &z)| (z, pairs[&s][&(x.act(f, a), y.act(f, b))])).collect();
        actions.insert(f, FinFun::new_unchecked(sets[&t].clone(), sets[&s].clone(), graph));
    }
    let prod = Presheaf::from_parts(base, sets, actions)?.with_labels(labels);
    let pi1 = PsMorphism::new(prod.clone(), x.clone(), p1)?;
    let pi2 = PsMorphism::new(prod.clone(), y.clone(), p2)?;
    Ok((prod, pi1, pi2))
}

/// The morphism `X × Y -> X' × Y'` induced by `a: X -> X'` and `b: Y -> Y'`,
/// given both products as returned by [`product`].
pub fn product_map(
    from: &(Presheaf, PsMorphism, PsMorphism),
    to: &(Presheaf, PsMorphism, PsMorphism),
    a: &PsMorphism,
    b: &PsMorphism,
) -> Result<PsMorphism> {
    let base = from.0.base();
    let mut components = BTreeMap::new();
    for c in base.objects().iter() {
        let lookup: BTreeMap<(ElemId, ElemId), ElemId> =
            to.0.set(c).iter().map(|z| ((to.1.apply(c, z), to.2.apply(c, z)), z)).collect();
        let f = FinFun::from_fn(from.0.set(c).clone(), to.0.set(c).clone(), |z| {
            lookup[&(a.apply(c, from.1.apply(c, z)), b.apply(c, from.2.apply(c, z)))]
        })?;
        components.insert(c, f);
    }
    PsMorphism::new(from.0.clone(), to.0.clone(), components)
}

#[cfg(test)]
mod tests;
