//! Kan models `F: C -> psh(D)` and left Kan extensions along the Yoneda
//! embedding, computed as coends `∫^c F(c) ⊗ X(c)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{check, Error, Result, Violation};
use crate::finbase::{quotient_by_pairs, ElemId, FinFun, FinSet, Workspace};
use crate::fincat::{yoneda, FinCat};
use crate::presheaf::{
    product, product_map, same_base, tensor, validate_morphism, validate_presheaf, Presheaf, PsMorphism,
};

/// A functor from a finite category `C` into presheaves on `D`.
#[derive(Clone, Debug)]
pub struct KanModel {
    pub source: Arc<FinCat>,
    pub target: Arc<FinCat>,
    pub objects: BTreeMap<ElemId, Presheaf>,
    /// `F(f): F(c) -> F(c')` for every `f: c -> c'`.
    pub morphisms: BTreeMap<ElemId, PsMorphism>,
}

impl KanModel {
    /// Builds a model from the images of objects and of generating morphisms;
    /// images of composites are derived and the result is validated.
    pub fn from_generators(
        source: Arc<FinCat>,
        target: Arc<FinCat>,
        objects: BTreeMap<ElemId, Presheaf>,
        generators: &BTreeMap<ElemId, PsMorphism>,
    ) -> Result<KanModel> {
        let mut morphisms = BTreeMap::new();
        for f in source.morphisms().iter() {
            let start = objects.get(&source.src(f)).ok_or_else(|| Error::UnknownObject(source.name(source.src(f))))?;
            let mut m = PsMorphism::identity(start);
            for g in source.decomposition(f) {
                let step = generators
                    .get(g)
                    .ok_or_else(|| Error::UnknownMorphism(format!("no image for {}", source.name(*g))))?;
                m = m.then(step)?;
            }
            morphisms.insert(f, m);
        }
        let model = KanModel { source, target, objects, morphisms };
        check(validate_kan_model(&model))?;
        Ok(model)
    }

    /// `F(c) = y(c)`, with `C = D`.
    pub fn yoneda(c: &Arc<FinCat>) -> Result<KanModel> {
        let objects: BTreeMap<ElemId, Presheaf> =
            c.objects().iter().map(|o| Ok((o, yoneda(c, o)?))).collect::<Result<_>>()?;
        let mut morphisms = BTreeMap::new();
        for f in c.morphisms().iter() {
            let (a, b) = (&objects[&c.src(f)], &objects[&c.tgt(f)]);
            morphisms.insert(f, postcompose(c, a, b, f)?);
        }
        let model = KanModel { source: c.clone(), target: c.clone(), objects, morphisms };
        check(validate_kan_model(&model))?;
        Ok(model)
    }

    pub fn object(&self, c: ElemId) -> &Presheaf {
        &self.objects[&c]
    }

    pub fn morphism(&self, f: ElemId) -> &PsMorphism {
        &self.morphisms[&f]
    }
}

/// `y(f): y(c) -> y(c')`, postcomposition with `f: c -> c'`.
fn postcompose(c: &FinCat, a: &Presheaf, b: &Presheaf, f: ElemId) -> Result<PsMorphism> {
    let comps = a
        .sets()
        .iter()
        .map(|(d, s)| Ok((*d, FinFun::from_fn(s.clone(), b.set(*d).clone(), |phi| c.comp(phi, f).unwrap())?)))
        .collect::<Result<_>>()?;
    PsMorphism::new(a.clone(), b.clone(), comps)
}

pub fn validate_kan_model(f: &KanModel) -> Vec<Violation> {
    let mut out = Vec::new();
    let c = &f.source;
    for o in c.objects().iter() {
        match f.objects.get(&o) {
            None => out.push(Violation::new("missing object image", vec![o], c.name(o))),
            Some(x) if x.base() != &f.target => {
                out.push(Violation::new("object image over foreign base", vec![o], c.name(o)))
            }
            Some(x) => out.extend(validate_presheaf(x)),
        }
    }
    if !out.is_empty() {
        return out;
    }
    for m in c.morphisms().iter() {
        let Some(img) = f.morphisms.get(&m) else {
            out.push(Violation::new("missing morphism image", vec![m], c.name(m)));
            continue;
        };
        if img.source() != &f.objects[&c.src(m)] || img.target() != &f.objects[&c.tgt(m)] {
            out.push(Violation::new("morphism image boundary", vec![m], c.name(m)));
            continue;
        }
        out.extend(validate_morphism(img));
        if c.is_identity(m) && img != &PsMorphism::identity(img.source()) {
            out.push(Violation::new("identity image", vec![m], c.name(m)));
        }
    }
    if !out.is_empty() {
        return out;
    }
    for (&(g, h), &k) in c.composition_table() {
        if f.morphisms[&g].then(&f.morphisms[&h]).ok().as_ref() != Some(&f.morphisms[&k]) {
            out.push(Violation::new("functoriality", vec![g, h], c.name(k)));
        }
    }
    out
}

/// A computed `Lan F(X)` with the provenance of its elements.
#[derive(Clone, Debug)]
pub struct LanResult {
    pub presheaf: Presheaf,
    pub input: Presheaf,
    /// Class of each generating triple `(c, x ∈ X(c), e ∈ F(c)(d))`.
    pub inject: BTreeMap<(ElemId, ElemId, ElemId), ElemId>,
    /// A generating triple for each element of the result.
    pub provenance: BTreeMap<ElemId, (ElemId, ElemId, ElemId)>,
}

impl LanResult {
    /// The coprojection `F(c) ⊗ X(c) -> Lan F(X)`, copies indexed by the
    /// elements of `X(c)` in order.
    pub fn coprojection(&self, ws: &Workspace, f: &KanModel, c: ElemId) -> Result<(Presheaf, PsMorphism)> {
        let fc = f.object(c);
        let xs = self.input.set(c);
        let (t, legs) = tensor(ws, fc, xs.len())?;
        let mut comps = BTreeMap::new();
        for d in f.target.objects().iter() {
            let mut graph = BTreeMap::new();
            for (x, leg) in xs.iter().zip(&legs) {
                for e in fc.set(d).iter() {
                    graph.insert(leg.apply(d, e), self.inject[&(c, x, e)]);
                }
            }
            comps.insert(d, FinFun::new(t.set(d).clone(), self.presheaf.set(d).clone(), graph)?);
        }
        let p = PsMorphism::new(t.clone(), self.presheaf.clone(), comps)?;
        Ok((t, p))
    }
}

/// `Lan F(X)`, one coequalizer per object of `D`.
pub fn lan_apply(ws: &Workspace, f: &KanModel, x: &Presheaf) -> Result<LanResult> {
    if x.base() != &f.source {
        return Err(Error::BaseMismatch);
    }
    let (c, d_cat) = (&f.source, &f.target);
    let gens = c.generators();
    let mut sets = BTreeMap::new();
    let mut inject = BTreeMap::new();
    let mut provenance = BTreeMap::new();
    let mut labels = BTreeMap::new();
    for d in d_cat.objects().iter() {
        let mut triples = Vec::new();
        for o in c.objects().iter() {
            for xe in x.set(o).iter() {
                for e in f.object(o).set(d).iter() {
                    triples.push((o, xe, e));
                }
            }
        }
        let all = FinSet::fresh(ws, triples.len());
        let slot = all.as_slice();
        let index: BTreeMap<(ElemId, ElemId, ElemId), usize> =
            triples.iter().enumerate().map(|(i, t)| (*t, i)).collect();
        let mut pairs = Vec::new();
        for &g in &gens {
            let (a, b) = (c.src(g), c.tgt(g));
            let fg = f.morphism(g);
            for xb in x.set(b).iter() {
                let xa = x.act(g, xb);
                for e in f.object(a).set(d).iter() {
                    let lhs = index[&(b, xb, fg.apply(d, e))];
                    let rhs = index[&(a, xa, e)];
                    pairs.push((slot[lhs], slot[rhs]));
                }
            }
        }
        let (q, proj) = quotient_by_pairs(&all, pairs)?;
        for (i, t) in triples.iter().enumerate() {
            let z = proj.at(slot[i]);
            inject.insert(*t, z);
            provenance.entry(z).or_insert_with(|| {
                labels.insert(z, format!("{}⊗{}", x.label(t.1), f.object(t.0).label(t.2)));
                *t
            });
        }
        sets.insert(d, q);
    }
    let mut actions = BTreeMap::new();
    for u in d_cat.morphisms().iter() {
        let (s, t) = (d_cat.src(u), d_cat.tgt(u));
        let graph = sets[&t]
            .iter()
            .map(|z| {
                let (o, xe, e) = provenance[&z];
                (z, inject[&(o, xe, f.object(o).act(u, e))])
            })
            .collect();
        actions.insert(u, FinFun::new(sets[&t].clone(), sets[&s].clone(), graph)?);
    }
    let presheaf = Presheaf::from_parts(d_cat.clone(), sets, actions)?.with_labels(labels);
    Ok(LanResult { presheaf, input: x.clone(), inject, provenance })
}

/// `Lan F(m)` between two already computed extensions.
pub fn lan_map(f: &KanModel, m: &PsMorphism, from: &LanResult, to: &LanResult) -> Result<PsMorphism> {
    if m.source() != &from.input || m.target() != &to.input {
        return Err(Error::BoundaryMismatch);
    }
    let mut comps = BTreeMap::new();
    for d in f.target.objects().iter() {
        let fun = FinFun::from_fn(from.presheaf.set(d).clone(), to.presheaf.set(d).clone(), |z| {
            let (o, xe, e) = from.provenance[&z];
            to.inject[&(o, m.apply(o, xe), e)]
        })?;
        comps.insert(d, fun);
    }
    PsMorphism::new(from.presheaf.clone(), to.presheaf.clone(), comps)
}

/// Extends both endpoints of `m` and maps between them.
pub fn lan_morphism(ws: &Workspace, f: &KanModel, m: &PsMorphism) -> Result<(LanResult, LanResult, PsMorphism)> {
    let from = lan_apply(ws, f, m.source())?;
    let to = lan_apply(ws, f, m.target())?;
    let image = lan_map(f, m, &from, &to)?;
    Ok((from, to, image))
}

/// `F(d) = y(d) × B`, where `B` defaults to `y(c)`.
pub fn product_kan_model(ws: &Workspace, base: &Arc<FinCat>, c: ElemId, b: Option<&Presheaf>) -> Result<KanModel> {
    if !base.objects().contains(c) {
        return Err(Error::UnknownObject(c.to_string()));
    }
    let factor = match b {
        Some(b) => {
            if b.base() != base {
                return Err(Error::BaseMismatch);
            }
            b.clone()
        }
        None => yoneda(base, c)?,
    };
    let y = KanModel::yoneda(base)?;
    let mut prods = BTreeMap::new();
    for d in base.objects().iter() {
        let p = product(ws, y.object(d), &factor)?;
        same_base(&p.0, &factor)?;
        prods.insert(d, p);
    }
    let id = PsMorphism::identity(&factor);
    let mut generators = BTreeMap::new();
    for g in base.generators() {
        let (s, t) = (base.src(g), base.tgt(g));
        generators.insert(g, product_map(&prods[&s], &prods[&t], y.morphism(g), &id)?);
    }
    let objects = prods.into_iter().map(|(d, p)| (d, p.0)).collect();
    KanModel::from_generators(base.clone(), base.clone(), objects, &generators)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::presheaf::enumerate_nat_trans;

    fn comparison(x: &Presheaf, lan: &LanResult) -> PsMorphism {
        // y(c) ⊗ X(c) ∋ (x, φ) ↦ X(φ)(x)
        let comps = lan
            .presheaf
            .sets()
            .iter()
            .map(|(d, s)| {
                let f = FinFun::from_fn(s.clone(), x.set(*d).clone(), |z| {
                    let (_, xe, phi) = lan.provenance[&z];
                    x.act(phi, xe)
                })
                .unwrap();
                (*d, f)
            })
            .collect();
        PsMorphism::new(lan.presheaf.clone(), x.clone(), comps).unwrap()
    }

    #[test]
    fn density_on_the_category_two() {
        let ws = Workspace::new();
        let base = catalog::cat_base(&ws);
        let y2 = catalog::two(&ws, &base);
        let f = KanModel::yoneda(&base).unwrap();
        let lan = lan_apply(&ws, &f, &y2).unwrap();
        assert!(validate_presheaf(&lan.presheaf).is_empty());
        let cmp = comparison(&y2, &lan);
        assert!(validate_morphism(&cmp).is_empty());
        assert!(cmp.is_iso());
    }

    #[test]
    fn counit_on_representables() {
        let ws = Workspace::new();
        let base = catalog::cat_base(&ws);
        let y2 = catalog::two(&ws, &base);
        let f = product_kan_model(&ws, &base, base.object_named("o").unwrap(), Some(&y2)).unwrap();
        for c in base.objects().iter() {
            let lan = lan_apply(&ws, &f, &yoneda(&base, c).unwrap()).unwrap();
            assert_eq!(lan.presheaf.sizes(), f.object(c).sizes());
        }
    }

    #[test]
    fn lan_map_is_functorial_on_identities() {
        let ws = Workspace::new();
        let base = catalog::cat_base(&ws);
        let y2 = catalog::two(&ws, &base);
        let f = KanModel::yoneda(&base).unwrap();
        let (from, to, m) = lan_morphism(&ws, &f, &PsMorphism::identity(&y2)).unwrap();
        assert_eq!(from.presheaf.sizes(), to.presheaf.sizes());
        assert!(m.is_iso());
        let lan = lan_apply(&ws, &f, &y2).unwrap();
        let id = lan_map(&f, &PsMorphism::identity(&y2), &lan, &lan).unwrap();
        assert_eq!(id, PsMorphism::identity(&lan.presheaf));
    }

    #[test]
    fn lan_map_preserves_composites() {
        let ws = Workspace::new();
        let base = catalog::cat_base(&ws);
        let y2 = catalog::two(&ws, &base);
        let f = product_kan_model(&ws, &base, base.object_named("m").unwrap(), None).unwrap();
        let lan = lan_apply(&ws, &f, &y2).unwrap();
        let endos: Vec<_> = enumerate_nat_trans(&y2, &y2).unwrap().collect();
        for a in &endos {
            for b in &endos {
                let ab = a.then(b).unwrap();
                let la = lan_map(&f, a, &lan, &lan).unwrap();
                let lb = lan_map(&f, b, &lan, &lan).unwrap();
                assert_eq!(lan_map(&f, &ab, &lan, &lan).unwrap(), la.then(&lb).unwrap());
            }
        }
    }

    #[test]
    fn product_model_with_terminal_factor_is_yoneda() {
        let ws = Workspace::new();
        let base = catalog::setset_base(&ws);
        let t = Presheaf::terminal(&ws, base.clone());
        let f = product_kan_model(&ws, &base, base.object_named("p").unwrap(), Some(&t)).unwrap();
        let y = KanModel::yoneda(&base).unwrap();
        for c in base.objects().iter() {
            assert_eq!(f.object(c).sizes(), y.object(c).sizes());
        }
    }

    #[test]
    fn closure_form_sizes() {
        let ws = Workspace::new();
        let base = catalog::setset_base(&ws);
        let p = base.object_named("p").unwrap();
        let f = product_kan_model(&ws, &base, p, None).unwrap();
        let yp = yoneda(&base, p).unwrap();
        for d in base.objects().iter() {
            let yd = yoneda(&base, d).unwrap();
            for e in base.objects().iter() {
                assert_eq!(f.object(d).set(e).len(), yp.set(e).len() * yd.set(e).len());
            }
        }
    }

    #[test]
    fn broken_morphism_image_is_reported() {
        let ws = Workspace::new();
        let base = catalog::cat_base(&ws);
        let mut f = KanModel::yoneda(&base).unwrap();
        let src = base.morphism_named("src").unwrap();
        let m = base.object_named("m").unwrap();
        let img = f.morphism(src).clone();
        let mut comps = img.components().clone();
        let one_m = base.identity(m);
        let dom = img.source().set(m).clone();
        comps.insert(m, FinFun::from_fn(dom, img.target().set(m).clone(), |_| one_m).unwrap());
        f.morphisms.insert(src, PsMorphism::new(img.source().clone(), img.target().clone(), comps).unwrap());
        let v = validate_kan_model(&f);
        assert!(!v.is_empty());
        assert!(v.iter().all(|v| v.law == "naturality"), "{v:?}");
    }
}
