//! Finite colimits of presheaves, computed pointwise as a quotient of the
//! coproduct of the node values.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::{same_base, validate_morphism, Presheaf, PsMorphism};
use crate::error::{check, Error, Result, Violation};
use crate::finbase::{coproduct, quotient_by_pairs, ElemId, FinFun, Workspace};
use crate::fincat::{FinCat, GenArrow};

/// A diagram of presheaves indexed by a finite shape category.
#[derive(Clone, Debug)]
pub struct Diagram {
    pub base: Arc<FinCat>,
    pub shape: Arc<FinCat>,
    pub nodes: BTreeMap<ElemId, Presheaf>,
    /// One morphism per shape morphism, identities included.
    pub edges: BTreeMap<ElemId, PsMorphism>,
}

impl Diagram {
    pub fn new(
        base: Arc<FinCat>,
        shape: Arc<FinCat>,
        nodes: BTreeMap<ElemId, Presheaf>,
        mut edges: BTreeMap<ElemId, PsMorphism>,
    ) -> Result<Diagram> {
        for i in shape.objects().iter() {
            let node = nodes.get(&i).ok_or_else(|| Error::UnknownObject(shape.name(i)))?;
            if node.base() != &base {
                return Err(Error::BaseMismatch);
            }
            edges.entry(shape.identity(i)).or_insert_with(|| PsMorphism::identity(node));
        }
        let d = Diagram { base, shape, nodes, edges };
        check(d.validate())?;
        Ok(d)
    }

    /// Diagram over the free category on a finite acyclic graph: `nodes[i]`
    /// is the value at node `i`, each edge `(i, j, m)` has `m: nodes[i] -> nodes[j]`.
    pub fn from_graph(
        ws: &Workspace,
        base: Arc<FinCat>,
        nodes: Vec<Presheaf>,
        edges: Vec<(usize, usize, PsMorphism)>,
    ) -> Result<Diagram> {
        let names: Vec<String> = (0..nodes.len()).map(|i| format!("n{i}")).collect();
        let arrows: Vec<GenArrow> = edges
            .iter()
            .enumerate()
            .map(|(k, (i, j, _))| GenArrow {
                name: format!("e{k}"),
                source: names[*i].clone(),
                target: names[*j].clone(),
            })
            .collect();
        let shape = Arc::new(FinCat::free(ws, &names, &arrows)?);
        let node_map: BTreeMap<ElemId, Presheaf> =
            names.iter().zip(nodes).map(|(n, p)| Ok((shape.object_named(n)?, p))).collect::<Result<_>>()?;
        let arrow_edge: BTreeMap<ElemId, PsMorphism> = arrows
            .iter()
            .zip(edges)
            .map(|(a, (_, _, m))| Ok((shape.morphism_named(&a.name)?, m)))
            .collect::<Result<_>>()?;
        let mut edge_map = BTreeMap::new();
        for u in shape.morphisms().iter() {
            let mut m = PsMorphism::identity(&node_map[&shape.src(u)]);
            for g in shape.decomposition(u) {
                m = m.then(&arrow_edge[g])?;
            }
            edge_map.insert(u, m);
        }
        Diagram::new(base, shape, node_map, edge_map)
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let s = &self.shape;
        for u in s.morphisms().iter() {
            let Some(e) = self.edges.get(&u) else {
                out.push(Violation::new("missing edge", vec![u], s.name(u)));
                continue;
            };
            if e.source() != &self.nodes[&s.src(u)] || e.target() != &self.nodes[&s.tgt(u)] {
                out.push(Violation::new("edge boundary", vec![u], s.name(u)));
                continue;
            }
            if s.is_identity(u) && e != &PsMorphism::identity(e.source()) {
                out.push(Violation::new("identity edge", vec![u], s.name(u)));
            }
            out.extend(validate_morphism(e));
        }
        if !out.is_empty() {
            return out;
        }
        for (&(u, v), &w) in s.composition_table() {
            if self.edges[&u].then(&self.edges[&v]).ok().as_ref() != Some(&self.edges[&w]) {
                out.push(Violation::new("edge composite", vec![u, v], s.name(w)));
            }
        }
        out
    }
}

/// A colimit with its coprojections and, for each apex element, the first
/// node element it came from.
#[derive(Clone, Debug)]
pub struct Colimit {
    pub diagram: Diagram,
    pub apex: Presheaf,
    pub coprojections: BTreeMap<ElemId, PsMorphism>,
    pub preimage: BTreeMap<ElemId, (ElemId, ElemId)>,
}

impl Colimit {
    /// Computes the colimit of `d` object by object.
    pub fn compute(ws: &Workspace, d: &Diagram) -> Result<Colimit> {
        let base = d.base.clone();
        let node_ids: Vec<ElemId> = d.nodes.keys().copied().collect();
        let edge_ids: Vec<ElemId> = d.shape.generators();
        let mut sets = BTreeMap::new();
        let mut legs: BTreeMap<ElemId, BTreeMap<ElemId, FinFun>> = BTreeMap::new();
        let mut preimage = BTreeMap::new();
        let mut labels = BTreeMap::new();
        for c in base.objects().iter() {
            let parts: Vec<_> = node_ids.iter().map(|i| d.nodes[i].set(c).clone()).collect();
            let cp = coproduct(ws, &parts);
            let pos = |i: ElemId| node_ids.binary_search(&i).unwrap();
            let mut pairs = Vec::new();
            for u in &edge_ids {
                let (i, j) = (d.shape.src(*u), d.shape.tgt(*u));
                let e = &d.edges[u];
                for x in parts[pos(i)].iter() {
                    pairs.push((cp.injections[pos(i)].at(x), cp.injections[pos(j)].at(e.apply(c, x))));
                }
            }
            let (q, proj) = quotient_by_pairs(&cp.set, pairs)?;
            for (k, i) in node_ids.iter().enumerate() {
                let leg = crate::finbase::compose(&cp.injections[k], &proj)?;
                for x in parts[k].iter() {
                    let z = leg.at(x);
                    if let std::collections::btree_map::Entry::Vacant(e) = preimage.entry(z) {
                        e.insert((*i, x));
                        if let Some(l) = d.nodes[i].labels().get(&x) {
                            labels.insert(z, l.clone());
                        }
                    }
                }
                legs.entry(*i).or_default().insert(c, leg);
            }
            sets.insert(c, q);
        }
        let mut actions = BTreeMap::new();
        for f in base.morphisms().iter() {
            let (s, t) = (base.src(f), base.tgt(f));
            let graph = sets[&t]
                .iter()
                .map(|z| {
                    let (i, x) = preimage[&z];
                    (z, legs[&i][&s].at(d.nodes[&i].act(f, x)))
                })
                .collect();
            actions.insert(f, FinFun::new_unchecked(sets[&t].clone(), sets[&s].clone(), graph));
        }
        let apex = Presheaf::from_parts(base, sets, actions)?.with_labels(labels);
        let coprojections = legs
            .into_iter()
            .map(|(i, comps)| Ok((i, PsMorphism::new(d.nodes[&i].clone(), apex.clone(), comps)?)))
            .collect::<Result<_>>()?;
        Ok(Colimit { diagram: d.clone(), apex, coprojections, preimage })
    }

    /// The unique `u: apex -> W` with `u ∘ coprojection_i = legs[i]`.
    pub fn factor_cocone(&self, legs: &BTreeMap<ElemId, PsMorphism>) -> Result<PsMorphism> {
        let d = &self.diagram;
        let Some(w) = legs.values().next().map(|l| l.target().clone()) else {
            return self.factor_empty();
        };
        for (i, node) in &d.nodes {
            let leg = legs.get(i).ok_or(Error::NotACocone)?;
            if leg.source() != node || leg.target() != &w {
                return Err(Error::BoundaryMismatch);
            }
        }
        let mut components = BTreeMap::new();
        for c in d.base.objects().iter() {
            let mut graph: BTreeMap<ElemId, ElemId> = BTreeMap::new();
            for (i, node) in &d.nodes {
                let cp = &self.coprojections[i];
                for x in node.set(c).iter() {
                    let z = cp.apply(c, x);
                    let v = legs[i].apply(c, x);
                    if *graph.entry(z).or_insert(v) != v {
                        return Err(Error::NotACocone);
                    }
                }
            }
            components.insert(c, FinFun::new(self.apex.set(c).clone(), w.set(c).clone(), graph)?);
        }
        PsMorphism::new(self.apex.clone(), w, components)
    }

    fn factor_empty(&self) -> Result<PsMorphism> {
        if self.diagram.nodes.is_empty() {
            // no legs name the target; the mediator out of the initial
            // presheaf is the identity
            Ok(PsMorphism::identity(&self.apex))
        } else {
            Err(Error::NotACocone)
        }
    }
}

impl Diagram {
    pub fn colimit(&self, ws: &Workspace) -> Result<Colimit> {
        Colimit::compute(ws, self)
    }
}

/// A pushout square over the span `X <-f- A -g-> B`.
#[derive(Clone, Debug)]
pub struct Pushout {
    pub apex: Presheaf,
    /// `X -> apex`.
    pub left: PsMorphism,
    /// `B -> apex`.
    pub right: PsMorphism,
    pub colimit: Colimit,
    f: PsMorphism,
}

impl Pushout {
    /// The mediator determined by `x_leg: X -> W` and `b_leg: B -> W`.
    pub fn factor(&self, x_leg: &PsMorphism, b_leg: &PsMorphism) -> Result<PsMorphism> {
        let nodes: Vec<ElemId> = self.colimit.diagram.nodes.keys().copied().collect();
        let legs =
            BTreeMap::from([(nodes[0], self.f.then(x_leg)?), (nodes[1], x_leg.clone()), (nodes[2], b_leg.clone())]);
        self.colimit.factor_cocone(&legs)
    }
}

/// Pushout of `f: A -> X` along `g: A -> B`.
pub fn pushout(ws: &Workspace, f: &PsMorphism, g: &PsMorphism) -> Result<Pushout> {
    same_base(f.source(), g.source())?;
    if f.source() != g.source() {
        return Err(Error::BoundaryMismatch);
    }
    let d = Diagram::from_graph(
        ws,
        f.source().base().clone(),
        vec![f.source().clone(), f.target().clone(), g.target().clone()],
        vec![(0, 1, f.clone()), (0, 2, g.clone())],
    )?;
    let colimit = d.colimit(ws)?;
    let nodes: Vec<ElemId> = d.nodes.keys().copied().collect();
    Ok(Pushout {
        apex: colimit.apex.clone(),
        left: colimit.coprojections[&nodes[1]].clone(),
        right: colimit.coprojections[&nodes[2]].clone(),
        colimit,
        f: f.clone(),
    })
}

/// Coequalizer of a parallel pair `h, h2: B -> X`, with the quotient map.
pub fn coequalizer_ps(ws: &Workspace, h: &PsMorphism, h2: &PsMorphism) -> Result<(Presheaf, PsMorphism)> {
    same_base(h.source(), h2.source())?;
    if h.source() != h2.source() || h.target() != h2.target() {
        return Err(Error::BoundaryMismatch);
    }
    let d = Diagram::from_graph(
        ws,
        h.source().base().clone(),
        vec![h.source().clone(), h.target().clone()],
        vec![(0, 1, h.clone()), (0, 1, h2.clone())],
    )?;
    let colimit = d.colimit(ws)?;
    let x_node = *d.nodes.keys().nth(1).unwrap();
    Ok((colimit.apex.clone(), colimit.coprojections[&x_node].clone()))
}

/// Coproduct of presheaves over a common base, with coprojections in order.
pub fn coproduct_ps(ws: &Workspace, base: &Arc<FinCat>, parts: &[Presheaf]) -> Result<(Presheaf, Vec<PsMorphism>)> {
    let d = Diagram::from_graph(ws, base.clone(), parts.to_vec(), vec![])?;
    let colimit = d.colimit(ws)?;
    let legs = colimit.coprojections.values().cloned().collect();
    Ok((colimit.apex, legs))
}

/// `n` disjoint copies of `x`.
pub fn tensor(ws: &Workspace, x: &Presheaf, n: usize) -> Result<(Presheaf, Vec<PsMorphism>)> {
    coproduct_ps(ws, x.base(), &vec![x.clone(); n])
}
