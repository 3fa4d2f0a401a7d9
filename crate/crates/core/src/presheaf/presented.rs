//! Presheaves given by generating elements and equations between them,
//! computed as a colimit of representables.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::{Colimit, Diagram, Presheaf, PsMorphism};
use crate::error::{Error, Result};
use crate::finbase::{ElemId, FinFun, Workspace};
use crate::fincat::{yoneda, FinCat};

/// An element term such as `src(l(p))`: the arrow names are listed outermost
/// first, so `["src", "l"]` applied to `p` reads `src(l(p))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElemExpr {
    pub generator: String,
    pub arrows: Vec<String>,
}

impl ElemExpr {
    pub fn gen(name: &str) -> ElemExpr {
        ElemExpr { generator: name.into(), arrows: vec![] }
    }

    pub fn app(arrows: &[&str], name: &str) -> ElemExpr {
        ElemExpr { generator: name.into(), arrows: arrows.iter().map(|s| s.to_string()).collect() }
    }
}

/// Generators `(name, object)` and equations between element terms.
#[derive(Clone, Debug, Default)]
pub struct PresheafPresentation {
    pub generators: Vec<(String, String)>,
    pub relations: Vec<(ElemExpr, ElemExpr)>,
}

/// The presheaf freely generated by a presentation.
#[derive(Clone, Debug)]
pub struct Presented {
    pub presheaf: Presheaf,
    /// `(name, object, element)` for each generator.
    pub generators: Vec<(String, ElemId, ElemId)>,
    colimit: Colimit,
    gen_nodes: Vec<ElemId>,
}

fn term_morphism(c: &FinCat, at: ElemId, arrows: &[String]) -> Result<ElemId> {
    // the innermost arrow acts first on the generator, so it is the last
    // morphism of the diagrammatic composite
    let mut m = c.identity(at);
    for name in arrows.iter().rev() {
        let f = c.morphism_named(name)?;
        m = c.comp(f, m).ok_or_else(|| {
            Error::IllFormedRelation(format!("`{name}` cannot act on an element over {}", c.name(c.src(m))))
        })?;
    }
    Ok(m)
}

fn term_label(c: &FinCat, phi: ElemId, gen: &str) -> String {
    c.decomposition(phi).iter().rev().fold(gen.to_string(), |acc, g| format!("{}({acc})", c.name(*g)))
}

impl Presented {
    pub fn new(ws: &Workspace, base: &Arc<FinCat>, p: &PresheafPresentation) -> Result<Presented> {
        let mut nodes = Vec::new();
        let mut gen_obj = BTreeMap::new();
        for (name, obj) in &p.generators {
            let c = base.object_named(obj)?;
            gen_obj.insert(name.clone(), (nodes.len(), c));
            let y = yoneda(base, c)?;
            let labels =
                y.sets().values().flat_map(|s| s.iter()).map(|phi| (phi, term_label(base, phi, name))).collect();
            nodes.push(y.with_labels(labels));
        }
        let mut edges = Vec::new();
        for (lhs, rhs) in &p.relations {
            let mut ends = Vec::new();
            for e in [lhs, rhs] {
                let &(node, c) = gen_obj
                    .get(&e.generator)
                    .ok_or_else(|| Error::IllFormedRelation(format!("unknown generator `{}`", e.generator)))?;
                ends.push((node, term_morphism(base, c, &e.arrows)?));
            }
            let d = base.src(ends[0].1);
            if base.src(ends[1].1) != d {
                return Err(Error::IllFormedRelation("sides live over different objects".into()));
            }
            let rel = nodes.len();
            let y = yoneda(base, d)?;
            for (node, phi) in ends {
                let target = nodes[node].clone();
                let comps = y
                    .sets()
                    .iter()
                    .map(|(e, s)| {
                        let f = FinFun::from_fn(s.clone(), target.set(*e).clone(), |psi| {
                            base.comp(psi, phi).expect("composable")
                        })?;
                        Ok((*e, f))
                    })
                    .collect::<Result<_>>()?;
                edges.push((rel, node, PsMorphism::new(y.clone(), target, comps)?));
            }
            nodes.push(y);
        }
        let n_gens = p.generators.len();
        let d = Diagram::from_graph(ws, base.clone(), nodes, edges)?;
        let colimit = d.colimit(ws)?;
        let gen_nodes: Vec<ElemId> = d.nodes.keys().copied().take(n_gens).collect();
        let generators = p
            .generators
            .iter()
            .zip(&gen_nodes)
            .map(|((name, _), node)| {
                let c = gen_obj[name].1;
                (name.clone(), c, colimit.coprojections[node].apply(c, base.identity(c)))
            })
            .collect();
        Ok(Presented { presheaf: colimit.apex.clone(), generators, colimit, gen_nodes })
    }

    pub fn generator(&self, name: &str) -> Option<ElemId> {
        self.generators.iter().find(|g| g.0 == name).map(|g| g.2)
    }

    /// Evaluates an element term in the presented presheaf.
    pub fn element(&self, e: &ElemExpr) -> Result<ElemId> {
        let (_, c, x) = self
            .generators
            .iter()
            .find(|g| g.0 == e.generator)
            .ok_or_else(|| Error::IllFormedRelation(format!("unknown generator `{}`", e.generator)))?;
        eval(&self.presheaf, *c, *x, &e.arrows)
    }

    /// The morphism to `target` sending each generator to the given element.
    /// Fails with `NotACocone` if the images violate a relation.
    pub fn morphism_to(&self, target: &Presheaf, images: &BTreeMap<String, ElemId>) -> Result<PsMorphism> {
        let mut legs = BTreeMap::new();
        for ((name, c, _), node) in self.generators.iter().zip(&self.gen_nodes) {
            let img = *images.get(name).ok_or_else(|| Error::IllFormedRelation(format!("no image for `{name}`")))?;
            if !target.set(*c).contains(img) {
                return Err(Error::OutOfCodomain { arg: *c, image: img });
            }
            legs.insert(*node, yoneda_map(&self.colimit.diagram.nodes[node], target, img)?);
        }
        for (node, y) in &self.colimit.diagram.nodes {
            if legs.contains_key(node) {
                continue;
            }
            // relation node: its outgoing edges all lead to generator nodes
            let (edge, m) = self
                .colimit
                .diagram
                .edges
                .iter()
                .find(|(u, _)| {
                    self.colimit.diagram.shape.src(**u) == *node && !self.colimit.diagram.shape.is_identity(**u)
                })
                .expect("relation node has an edge");
            let to = self.colimit.diagram.shape.tgt(*edge);
            debug_assert!(m.source() == y);
            let leg = m.then(&legs[&to])?;
            legs.insert(*node, leg);
        }
        self.colimit.factor_cocone(&legs)
    }
}

/// The morphism `y(c) -> X` picking out `x ∈ X(c)`.
pub(crate) fn yoneda_map(y: &Presheaf, target: &Presheaf, x: ElemId) -> Result<PsMorphism> {
    let comps = y
        .sets()
        .iter()
        .map(|(e, s)| Ok((*e, FinFun::from_fn(s.clone(), target.set(*e).clone(), |phi| target.act(phi, x))?)))
        .collect::<Result<_>>()?;
    PsMorphism::new(y.clone(), target.clone(), comps)
}

/// Applies arrows (outermost first) to an element over `c`.
pub fn eval(x: &Presheaf, c: ElemId, elem: ElemId, arrows: &[String]) -> Result<ElemId> {
    let base = x.base();
    let phi = term_morphism(base, c, arrows)?;
    Ok(x.act(phi, elem))
}
