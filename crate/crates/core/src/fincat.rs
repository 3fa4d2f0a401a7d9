//! Finite categories with explicit composition tables.
//!
//! A [`FinCat`] stores every morphism and the full table of composites. It can
//! be given directly as a table or completed from a finite presentation by
//! bounded path enumeration plus congruence closure.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result, Violation};
use crate::finbase::{ElemId, FinFun, FinSet, UnionFind, Workspace};
use crate::presheaf::Presheaf;

#[derive(Debug)]
pub struct FinCat {
    objects: FinSet,
    morphisms: FinSet,
    src: FinFun,
    tgt: FinFun,
    id: FinFun,
    /// `(f, g) -> g ∘ f`, defined when `tgt(f) = src(g)`.
    comp: BTreeMap<(ElemId, ElemId), ElemId>,
    names: BTreeMap<ElemId, String>,
    object_by_name: BTreeMap<String, ElemId>,
    morphism_by_name: BTreeMap<String, ElemId>,
    /// Each morphism as a sequence of generating morphisms, first applied first.
    decomposition: BTreeMap<ElemId, Vec<ElemId>>,
    index: OnceLock<Arc<BaseIndex>>,
}

impl PartialEq for FinCat {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self, other)
            || (self.objects == other.objects
                && self.morphisms == other.morphisms
                && self.src == other.src
                && self.tgt == other.tgt
                && self.id == other.id
                && self.comp == other.comp)
    }
}

impl Eq for FinCat {}

/// Dense positional view of a category, used by the enumeration engines.
#[derive(Debug)]
pub(crate) struct BaseIndex {
    pub objects: Vec<ElemId>,
    pub morphisms: Vec<ElemId>,
    pub src: Vec<usize>,
    pub tgt: Vec<usize>,
    /// Non-identity morphisms into each object.
    pub incoming: Vec<Vec<usize>>,
}

/// Full-table description of a category by names. Identities are implicit
/// (named `1_<object>` unless overridden) and composites involving them are
/// filled in automatically.
#[derive(Clone, Debug, Default)]
pub struct CategoryTable {
    pub objects: Vec<String>,
    /// `(name, source, target)` of every non-identity morphism.
    pub morphisms: Vec<(String, String, String)>,
    /// `(f, g, g∘f)` for every composable pair of non-identities.
    pub composition: Vec<(String, String, String)>,
    pub identity_names: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenArrow {
    pub name: String,
    pub source: String,
    pub target: String,
}

/// A path in a presentation: an identity or a nonempty list of arrow names
/// written in applicative order (`["g", "f"]` is `g ∘ f`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PathExpr {
    Identity(String),
    Arrows(Vec<String>),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CatPresentation {
    pub objects: Vec<String>,
    pub arrows: Vec<GenArrow>,
    pub relations: Vec<(PathExpr, PathExpr)>,
}

pub fn identity_name(object: &str) -> String {
    format!("1_{object}")
}

impl FinCat {
    /// Assembles a category from raw data without checking the axioms;
    /// see [`validate_category`].
    #[allow(clippy::too_many_arguments)]
    pub fn from_raw(
        objects: FinSet,
        morphisms: FinSet,
        src: FinFun,
        tgt: FinFun,
        id: FinFun,
        comp: BTreeMap<(ElemId, ElemId), ElemId>,
        names: BTreeMap<ElemId, String>,
    ) -> Self {
        let object_by_name = objects.iter().filter_map(|o| names.get(&o).map(|n| (n.clone(), o))).collect();
        let morphism_by_name = morphisms.iter().filter_map(|m| names.get(&m).map(|n| (n.clone(), m))).collect();
        let identities: Vec<ElemId> = id.graph().values().copied().collect();
        let decomposition =
            morphisms.iter().map(|m| (m, if identities.contains(&m) { vec![] } else { vec![m] })).collect();
        FinCat {
            objects,
            morphisms,
            src,
            tgt,
            id,
            comp,
            names,
            object_by_name,
            morphism_by_name,
            decomposition,
            index: OnceLock::new(),
        }
    }

    /// The category with one object `*` and only its identity.
    pub fn terminal(ws: &Workspace) -> FinCat {
        let table = CategoryTable { objects: vec!["*".into()], ..Default::default() };
        FinCat::from_table(ws, &table).expect("terminal category is valid")
    }

    pub fn from_table(ws: &Workspace, table: &CategoryTable) -> Result<FinCat> {
        let mut names = BTreeMap::new();
        let mut obj_ids = BTreeMap::new();
        for o in &table.objects {
            if obj_ids.contains_key(o) {
                return Err(Error::Invalid(vec![Violation::new("duplicate object", vec![], o.clone())]));
            }
            let id = ws.fresh();
            obj_ids.insert(o.clone(), id);
            names.insert(id, o.clone());
        }
        let lookup_obj = |n: &str| obj_ids.get(n).copied().ok_or_else(|| Error::UnknownObject(n.to_string()));
        let mut src = BTreeMap::new();
        let mut tgt = BTreeMap::new();
        let mut idmap = BTreeMap::new();
        let mut mor_ids: BTreeMap<String, ElemId> = BTreeMap::new();
        for o in &table.objects {
            let name = table.identity_names.get(o).cloned().unwrap_or_else(|| identity_name(o));
            let m = ws.fresh();
            let oid = obj_ids[o];
            src.insert(m, oid);
            tgt.insert(m, oid);
            idmap.insert(oid, m);
            names.insert(m, name.clone());
            mor_ids.insert(name, m);
        }
        for (name, s, t) in &table.morphisms {
            if mor_ids.contains_key(name) {
                return Err(Error::Invalid(vec![Violation::new("duplicate morphism", vec![], name.clone())]));
            }
            let m = ws.fresh();
            src.insert(m, lookup_obj(s)?);
            tgt.insert(m, lookup_obj(t)?);
            names.insert(m, name.clone());
            mor_ids.insert(name.clone(), m);
        }
        let lookup_mor = |n: &str| mor_ids.get(n).copied().ok_or_else(|| Error::UnknownMorphism(n.to_string()));
        let mut comp = BTreeMap::new();
        for (&f, &s) in &src {
            comp.insert((idmap[&s], f), f);
            comp.insert((f, idmap[&tgt[&f]]), f);
        }
        for (f, g, h) in &table.composition {
            comp.insert((lookup_mor(f)?, lookup_mor(g)?), lookup_mor(h)?);
        }
        let objects = FinSet::from_ids(obj_ids.values().copied());
        let morphisms = FinSet::from_ids(mor_ids.values().copied());
        let cat = FinCat::from_raw(
            objects.clone(),
            morphisms.clone(),
            FinFun::new(morphisms.clone(), objects.clone(), src)?,
            FinFun::new(morphisms.clone(), objects.clone(), tgt)?,
            FinFun::new(objects, morphisms, idmap)?,
            comp,
            names,
        );
        crate::error::check(validate_category(&cat))?;
        Ok(cat)
    }

    /// Free category on a finite acyclic graph.
    pub fn free(ws: &Workspace, objects: &[String], arrows: &[GenArrow]) -> Result<FinCat> {
        let p = CatPresentation { objects: objects.to_vec(), arrows: arrows.to_vec(), relations: vec![] };
        from_presentation(ws, &p, objects.len().max(1))
    }

    pub fn objects(&self) -> &FinSet {
        &self.objects
    }

    pub fn morphisms(&self) -> &FinSet {
        &self.morphisms
    }

    pub fn src(&self, f: ElemId) -> ElemId {
        self.src.at(f)
    }

    pub fn tgt(&self, f: ElemId) -> ElemId {
        self.tgt.at(f)
    }

    pub fn identity(&self, obj: ElemId) -> ElemId {
        self.id.at(obj)
    }

    pub fn is_identity(&self, f: ElemId) -> bool {
        self.id.apply(self.src(f)) == Some(f)
    }

    /// `g ∘ f`, i.e. `f` first.
    pub fn comp(&self, f: ElemId, g: ElemId) -> Option<ElemId> {
        self.comp.get(&(f, g)).copied()
    }

    pub fn composition_table(&self) -> &BTreeMap<(ElemId, ElemId), ElemId> {
        &self.comp
    }

    pub fn name(&self, id: ElemId) -> String {
        self.names.get(&id).cloned().unwrap_or_else(|| id.to_string())
    }

    pub fn object_named(&self, name: &str) -> Result<ElemId> {
        self.object_by_name.get(name).copied().ok_or_else(|| Error::UnknownObject(name.into()))
    }

    /// Looks up a morphism by its name or by the name of a generating arrow
    /// it is the class of.
    pub fn morphism_named(&self, name: &str) -> Result<ElemId> {
        self.morphism_by_name.get(name).copied().ok_or_else(|| Error::UnknownMorphism(name.into()))
    }

    /// Non-identity morphisms every other morphism decomposes into.
    pub fn generators(&self) -> Vec<ElemId> {
        let mut gens: Vec<ElemId> = self.decomposition.values().flatten().copied().collect();
        gens.sort_unstable();
        gens.dedup();
        gens
    }

    /// `f` as a sequence of generators, first applied first.
    pub fn decomposition(&self, f: ElemId) -> &[ElemId] {
        &self.decomposition[&f]
    }

    pub fn hom_set(&self, a: ElemId, b: ElemId) -> Result<FinSet> {
        for o in [a, b] {
            if !self.objects.contains(o) {
                return Err(Error::UnknownObject(o.to_string()));
            }
        }
        Ok(self.morphisms.iter().filter(|&f| self.src(f) == a && self.tgt(f) == b).collect())
    }

    pub(crate) fn index(&self) -> Arc<BaseIndex> {
        self.index
            .get_or_init(|| {
                let objects: Vec<ElemId> = self.objects.iter().collect();
                let obj_pos: HashMap<ElemId, usize> = objects.iter().enumerate().map(|(i, o)| (*o, i)).collect();
                let morphisms: Vec<ElemId> = self.morphisms.iter().collect();
                let src: Vec<usize> = morphisms.iter().map(|f| obj_pos[&self.src(*f)]).collect();
                let tgt: Vec<usize> = morphisms.iter().map(|f| obj_pos[&self.tgt(*f)]).collect();
                let is_identity: Vec<bool> = morphisms.iter().map(|f| self.is_identity(*f)).collect();
                let mut incoming = vec![Vec::new(); objects.len()];
                for (i, _) in morphisms.iter().enumerate() {
                    if !is_identity[i] {
                        incoming[tgt[i]].push(i);
                    }
                }
                Arc::new(BaseIndex { objects, morphisms, src, tgt, incoming })
            })
            .clone()
    }
}

/// Checks the category axioms exhaustively.
pub fn validate_category(c: &FinCat) -> Vec<Violation> {
    let mut out = Vec::new();
    for o in c.objects.iter() {
        match c.id.apply(o) {
            Some(i) if c.src.apply(i) == Some(o) && c.tgt.apply(i) == Some(o) => {}
            Some(i) => out.push(Violation::new("identity boundary", vec![o, i], "")),
            None => out.push(Violation::new("identity missing", vec![o], "")),
        }
    }
    if !out.is_empty() {
        return out;
    }
    for (&(f, g), &h) in &c.comp {
        if c.tgt(f) != c.src(g) {
            out.push(Violation::new("composite of non-composable pair", vec![f, g], ""));
        } else if !c.morphisms.contains(h) || c.src(h) != c.src(f) || c.tgt(h) != c.tgt(g) {
            out.push(Violation::new("composite boundary", vec![f, g, h], ""));
        }
    }
    let mors: Vec<ElemId> = c.morphisms.iter().collect();
    for &f in &mors {
        for &g in &mors {
            if c.tgt(f) == c.src(g) && c.comp(f, g).is_none() {
                out.push(Violation::new("composite missing", vec![f, g], ""));
            }
        }
    }
    if !out.is_empty() {
        return out;
    }
    for &f in &mors {
        let (s, t) = (c.src(f), c.tgt(f));
        if c.comp(c.identity(s), f) != Some(f) {
            out.push(Violation::new("left unit", vec![c.identity(s), f], ""));
        }
        if c.comp(f, c.identity(t)) != Some(f) {
            out.push(Violation::new("right unit", vec![f, c.identity(t)], ""));
        }
    }
    for &f in &mors {
        for &g in mors.iter().filter(|&&g| c.src(g) == c.tgt(f)) {
            let fg = c.comp(f, g).expect("checked above");
            for &h in mors.iter().filter(|&&h| c.src(h) == c.tgt(g)) {
                let gh = c.comp(g, h).expect("checked above");
                if c.comp(fg, h) != c.comp(f, gh) {
                    out.push(Violation::new("associativity", vec![f, g, h], ""));
                }
            }
        }
    }
    out
}

type PathKey = (usize, Vec<usize>);

struct Path {
    src: usize,
    tgt: usize,
    arrows: Vec<usize>,
}

/// Completes a presentation into a finite category.
///
/// Morphisms are classes of generator paths of length at most
/// `max_path_len`. The congruence is computed on paths of length up to
/// `max_path_len + 1`, and every such longer path must fall into a class with
/// a short member, otherwise the bound is reported as exceeded.
pub fn from_presentation(ws: &Workspace, p: &CatPresentation, max_path_len: usize) -> Result<FinCat> {
    if max_path_len == 0 {
        return Err(Error::BoundExceeded(0));
    }
    let bound = max_path_len;
    let limit = bound + 1;
    let obj_pos: BTreeMap<&str, usize> = p.objects.iter().enumerate().map(|(i, o)| (o.as_str(), i)).collect();
    if obj_pos.len() != p.objects.len() {
        return Err(Error::IllFormedRelation("duplicate object name".into()));
    }
    let obj = |n: &str| obj_pos.get(n).copied().ok_or_else(|| Error::UnknownObject(n.into()));
    let mut arrow_ends = Vec::with_capacity(p.arrows.len());
    let mut arrow_pos = BTreeMap::new();
    for (i, a) in p.arrows.iter().enumerate() {
        arrow_ends.push((obj(&a.source)?, obj(&a.target)?));
        if arrow_pos.insert(a.name.as_str(), i).is_some() {
            return Err(Error::IllFormedRelation(format!("duplicate arrow `{}`", a.name)));
        }
    }

    // all paths up to `limit`, level by level in lexicographic order
    let mut paths: Vec<Path> = Vec::new();
    let mut lookup: HashMap<PathKey, usize> = HashMap::new();
    for o in 0..p.objects.len() {
        lookup.insert((o, vec![]), paths.len());
        paths.push(Path { src: o, tgt: o, arrows: vec![] });
    }
    let mut level_start = 0;
    for _ in 0..limit {
        let level_end = paths.len();
        for i in level_start..level_end {
            for (a, &(s, t)) in arrow_ends.iter().enumerate() {
                if s != paths[i].tgt {
                    continue;
                }
                let mut arrows = paths[i].arrows.clone();
                arrows.push(a);
                let src = paths[i].src;
                lookup.insert((src, arrows.clone()), paths.len());
                paths.push(Path { src, tgt: t, arrows });
            }
        }
        level_start = level_end;
    }

    let parse_path = |e: &PathExpr| -> Result<(usize, usize, Vec<usize>)> {
        match e {
            PathExpr::Identity(o) => {
                let o = obj(o)?;
                Ok((o, o, vec![]))
            }
            PathExpr::Arrows(names) if names.is_empty() => Err(Error::IllFormedRelation("empty path".into())),
            PathExpr::Arrows(names) => {
                let mut seq = Vec::with_capacity(names.len());
                for n in names.iter().rev() {
                    let a = arrow_pos
                        .get(n.as_str())
                        .copied()
                        .ok_or_else(|| Error::IllFormedRelation(format!("unknown arrow `{n}`")))?;
                    if let Some(&prev) = seq.last() {
                        let (_, prev_t): (usize, usize) = arrow_ends[prev];
                        if prev_t != arrow_ends[a].0 {
                            return Err(Error::IllFormedRelation(format!(
                                "path {} is not composable",
                                names.join(".")
                            )));
                        }
                    }
                    seq.push(a);
                }
                Ok((arrow_ends[seq[0]].0, arrow_ends[*seq.last().unwrap()].1, seq))
            }
        }
    };

    let mut relations = Vec::new();
    for (l, r) in &p.relations {
        let (ls, lt, lseq) = parse_path(l)?;
        let (rs, rt, rseq) = parse_path(r)?;
        if ls != rs || lt != rt {
            return Err(Error::IllFormedRelation(format!("{} and {} are not parallel", show_path(l), show_path(r))));
        }
        if lseq.len().max(rseq.len()) > limit {
            return Err(Error::BoundExceeded(bound));
        }
        relations.push((ls, lt, lseq, rseq));
    }

    let mut by_tgt = vec![Vec::new(); p.objects.len()];
    let mut by_src = vec![Vec::new(); p.objects.len()];
    for (i, path) in paths.iter().enumerate() {
        by_tgt[path.tgt].push(i);
        by_src[path.src].push(i);
    }
    let mut uf = UnionFind::new(paths.len());
    for (s, t, l, r) in &relations {
        let width = l.len().max(r.len());
        for &a in &by_tgt[*s] {
            let pre = &paths[a];
            if pre.arrows.len() + width > limit {
                continue;
            }
            for &b in &by_src[*t] {
                let post = &paths[b];
                if pre.arrows.len() + width + post.arrows.len() > limit {
                    continue;
                }
                let glue = |mid: &[usize]| {
                    let mut v = pre.arrows.clone();
                    v.extend_from_slice(mid);
                    v.extend_from_slice(&post.arrows);
                    lookup[&(pre.src, v)]
                };
                uf.union(glue(l), glue(r));
            }
        }
    }

    let mut min_len: HashMap<usize, usize> = HashMap::new();
    for (i, path) in paths.iter().enumerate() {
        let root = uf.find(i);
        let e = min_len.entry(root).or_insert(usize::MAX);
        *e = (*e).min(path.arrows.len());
    }
    if paths.iter().enumerate().any(|(i, path)| path.arrows.len() == limit && min_len[&uf.find(i)] > bound) {
        return Err(Error::BoundExceeded(bound));
    }

    // representatives: first short path of each class in enumeration order
    let mut rep_of_root: BTreeMap<usize, usize> = BTreeMap::new();
    let mut class_order = Vec::new();
    for (i, path) in paths.iter().enumerate() {
        if path.arrows.len() > bound {
            break;
        }
        let root = uf.find(i);
        if let std::collections::btree_map::Entry::Vacant(e) = rep_of_root.entry(root) {
            e.insert(i);
            class_order.push(root);
        }
    }

    let mut names = BTreeMap::new();
    let obj_ids: Vec<ElemId> = p.objects.iter().map(|_| ws.fresh()).collect();
    for (o, id) in p.objects.iter().zip(&obj_ids) {
        names.insert(*id, o.clone());
    }
    let mut mor_of_root = BTreeMap::new();
    for root in &class_order {
        mor_of_root.insert(*root, ws.fresh());
    }

    let reduce = |uf: &mut UnionFind, src: usize, seq: Vec<usize>| -> ElemId {
        let mut cur = seq;
        while cur.len() > bound {
            let head = lookup[&(src, cur[..limit].to_vec())];
            let rep = &paths[rep_of_root[&uf.find(head)]];
            let mut next = rep.arrows.clone();
            next.extend_from_slice(&cur[limit..]);
            cur = next;
        }
        mor_of_root[&uf.find(lookup[&(src, cur)])]
    };

    let mut src = BTreeMap::new();
    let mut tgt = BTreeMap::new();
    let mut rep_arrows = BTreeMap::new();
    for root in &class_order {
        let path = &paths[rep_of_root[root]];
        let m = mor_of_root[root];
        src.insert(m, obj_ids[path.src]);
        tgt.insert(m, obj_ids[path.tgt]);
        rep_arrows.insert(m, (path.src, path.arrows.clone()));
        let name = if path.arrows.is_empty() {
            identity_name(&p.objects[path.src])
        } else {
            path.arrows.iter().rev().map(|&a| p.arrows[a].name.as_str()).collect::<Vec<_>>().join(".")
        };
        names.insert(m, name);
    }
    let idmap: BTreeMap<ElemId, ElemId> =
        (0..p.objects.len()).map(|o| (obj_ids[o], mor_of_root[&uf.find(lookup[&(o, vec![])])])).collect();

    let mors: Vec<ElemId> = rep_arrows.keys().copied().collect();
    let mut comp = BTreeMap::new();
    for &f in &mors {
        for &g in &mors {
            if tgt[&f] != src[&g] {
                continue;
            }
            let (s, fa) = &rep_arrows[&f];
            let mut seq = fa.clone();
            seq.extend_from_slice(&rep_arrows[&g].1);
            comp.insert((f, g), reduce(&mut uf, *s, seq));
        }
    }
    for (s, _, l, r) in &relations {
        if reduce(&mut uf, *s, l.clone()) != reduce(&mut uf, *s, r.clone()) {
            return Err(Error::BoundExceeded(bound));
        }
    }

    let arrow_mor: Vec<ElemId> =
        (0..p.arrows.len()).map(|a| mor_of_root[&uf.find(lookup[&(arrow_ends[a].0, vec![a])])]).collect();
    let objects = FinSet::from_ids(obj_ids.iter().copied());
    let morphisms = FinSet::from_ids(mors.iter().copied());
    let mut cat = FinCat::from_raw(
        objects.clone(),
        morphisms.clone(),
        FinFun::new(morphisms.clone(), objects.clone(), src)?,
        FinFun::new(morphisms.clone(), objects.clone(), tgt)?,
        FinFun::new(objects, morphisms, idmap)?,
        comp,
        names,
    );
    for (a, m) in p.arrows.iter().zip(&arrow_mor) {
        cat.morphism_by_name.entry(a.name.clone()).or_insert(*m);
    }
    cat.decomposition =
        rep_arrows.iter().map(|(m, (_, arrows))| (*m, arrows.iter().map(|&a| arrow_mor[a]).collect())).collect();
    if !validate_category(&cat).is_empty() {
        return Err(Error::BoundExceeded(bound));
    }
    Ok(cat)
}

fn show_path(e: &PathExpr) -> String {
    match e {
        PathExpr::Identity(o) => identity_name(o),
        PathExpr::Arrows(a) => a.join("."),
    }
}

/// The representable presheaf `C(-, obj)`; its elements are the morphisms
/// into `obj` themselves.
pub fn yoneda(c: &Arc<FinCat>, obj: ElemId) -> Result<Presheaf> {
    if !c.objects.contains(obj) {
        return Err(Error::UnknownObject(obj.to_string()));
    }
    let mut sets = BTreeMap::new();
    for d in c.objects.iter() {
        sets.insert(d, c.hom_set(d, obj)?);
    }
    let mut actions = BTreeMap::new();
    for f in c.morphisms.iter() {
        let (d, d2) = (c.src(f), c.tgt(f));
        let action = FinFun::from_fn(sets[&d2].clone(), sets[&d].clone(), |phi| c.comp(f, phi).expect("composable"))?;
        actions.insert(f, action);
    }
    let labels = c.morphisms.iter().map(|m| (m, c.name(m))).collect();
    Ok(Presheaf::from_parts(c.clone(), sets, actions)?.with_labels(labels))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arrow(name: &str, s: &str, t: &str) -> GenArrow {
        GenArrow { name: name.into(), source: s.into(), target: t.into() }
    }

    fn path(names: &[&str]) -> PathExpr {
        PathExpr::Arrows(names.iter().map(|s| s.to_string()).collect())
    }

    pub(crate) fn setset() -> CatPresentation {
        CatPresentation {
            objects: vec!["s_l".into(), "s_r".into(), "p".into()],
            arrows: vec![arrow("l", "s_l", "p"), arrow("r", "s_r", "p")],
            relations: vec![],
        }
    }

    pub(crate) fn cat_model_base() -> CatPresentation {
        CatPresentation {
            objects: vec!["o".into(), "m".into(), "p".into()],
            arrows: vec![
                arrow("src", "o", "m"),
                arrow("tgt", "o", "m"),
                arrow("id", "m", "o"),
                arrow("l", "m", "p"),
                arrow("r", "m", "p"),
                arrow("comp", "m", "p"),
            ],
            relations: vec![
                (path(&["id", "src"]), PathExpr::Identity("o".into())),
                (path(&["id", "tgt"]), PathExpr::Identity("o".into())),
                (path(&["comp", "src"]), path(&["l", "src"])),
                (path(&["comp", "tgt"]), path(&["r", "tgt"])),
                (path(&["l", "tgt"]), path(&["r", "src"])),
            ],
        }
    }

    #[test]
    fn terminal_is_valid() {
        let ws = Workspace::new();
        let t = FinCat::terminal(&ws);
        assert!(validate_category(&t).is_empty());
        assert_eq!(t.objects().len(), 1);
        assert_eq!(t.morphisms().len(), 1);
        let o = t.objects().get(0).unwrap();
        assert_eq!(t.hom_set(o, o).unwrap().len(), 1);
    }

    #[test]
    fn broken_left_unit_is_reported_once() {
        let ws = Workspace::new();
        let table = CategoryTable {
            objects: vec!["x".into(), "y".into()],
            morphisms: vec![("f".into(), "x".into(), "y".into()), ("g".into(), "x".into(), "y".into())],
            ..Default::default()
        };
        let good = FinCat::from_table(&ws, &table).unwrap();
        let (f, g) = (good.morphism_named("f").unwrap(), good.morphism_named("g").unwrap());
        let x = good.object_named("x").unwrap();
        let mut comp = good.composition_table().clone();
        comp.insert((good.identity(x), f), g);
        let bad = FinCat::from_raw(
            good.objects.clone(),
            good.morphisms.clone(),
            good.src.clone(),
            good.tgt.clone(),
            good.id.clone(),
            comp,
            good.names.clone(),
        );
        let v = validate_category(&bad);
        assert_eq!(v.len(), 1, "{v:?}");
        assert_eq!(v[0].law, "left unit");
    }

    #[test]
    fn setset_has_five_morphisms() {
        let ws = Workspace::new();
        let c = from_presentation(&ws, &setset(), 2).unwrap();
        assert_eq!(c.objects().len(), 3);
        assert_eq!(c.morphisms().len(), 5);
        assert!(validate_category(&c).is_empty());
        let p = c.object_named("p").unwrap();
        let sl = c.object_named("s_l").unwrap();
        assert!(c.hom_set(p, sl).unwrap().is_empty());
    }

    #[test]
    fn cat_base_hom_set_sizes() {
        let ws = Workspace::new();
        let c = from_presentation(&ws, &cat_model_base(), 3).unwrap();
        let [o, m, p] = ["o", "m", "p"].map(|n| c.object_named(n).unwrap());
        assert_eq!(c.hom_set(o, o).unwrap().len(), 1);
        assert_eq!(c.hom_set(o, m).unwrap().len(), 2);
        assert_eq!(c.hom_set(o, p).unwrap().len(), 3);
        assert_eq!(c.hom_set(m, m).unwrap().len(), 3);
        assert_eq!(c.hom_set(m, p).unwrap().len(), 6);
        assert_eq!(c.hom_set(m, o).unwrap().len(), 1);
        assert_eq!(c.hom_set(p, p).unwrap().len(), 1);
        assert_eq!(c.morphisms().len(), 17);
    }

    #[test]
    fn relations_hold_in_the_completion() {
        let ws = Workspace::new();
        let pres = cat_model_base();
        let c = from_presentation(&ws, &pres, 3).unwrap();
        let eval = |e: &PathExpr| match e {
            PathExpr::Identity(o) => c.identity(c.object_named(o).unwrap()),
            PathExpr::Arrows(names) => {
                names.iter().rev().map(|n| c.morphism_named(n).unwrap()).reduce(|f, g| c.comp(f, g).unwrap()).unwrap()
            }
        };
        for (l, r) in &pres.relations {
            assert_eq!(eval(l), eval(r));
        }
    }

    #[test]
    fn idempotent_monoid() {
        let ws = Workspace::new();
        let pres = CatPresentation {
            objects: vec!["x".into()],
            arrows: vec![arrow("e", "x", "x")],
            relations: vec![(path(&["e", "e"]), path(&["e"]))],
        };
        let c = from_presentation(&ws, &pres, 1).unwrap();
        assert_eq!(c.objects().len(), 1);
        assert_eq!(c.morphisms().len(), 2);
    }

    #[test]
    fn free_loop_exceeds_any_bound() {
        let ws = Workspace::new();
        let pres = CatPresentation { objects: vec!["x".into()], arrows: vec![arrow("e", "x", "x")], relations: vec![] };
        assert_eq!(from_presentation(&ws, &pres, 4).unwrap_err(), Error::BoundExceeded(4));
    }

    #[test]
    fn non_parallel_relation_is_rejected() {
        let ws = Workspace::new();
        let mut pres = setset();
        pres.relations.push((path(&["l"]), path(&["r"])));
        assert!(matches!(from_presentation(&ws, &pres, 2), Err(Error::IllFormedRelation(_))));
    }

    #[test]
    fn yoneda_is_functorial() {
        let ws = Workspace::new();
        let c = Arc::new(from_presentation(&ws, &cat_model_base(), 3).unwrap());
        for obj in c.objects().iter() {
            let y = yoneda(&c, obj).unwrap();
            assert!(crate::presheaf::validate_presheaf(&y).is_empty());
        }
        let o = c.object_named("o").unwrap();
        let y = yoneda(&c, o).unwrap();
        let sizes: Vec<usize> = ["o", "m", "p"].iter().map(|n| y.set(c.object_named(n).unwrap()).len()).collect();
        assert_eq!(sizes, vec![1, 1, 0]);
    }

    #[test]
    fn yoneda_on_setset_apex() {
        let ws = Workspace::new();
        let c = Arc::new(from_presentation(&ws, &setset(), 2).unwrap());
        let y = yoneda(&c, c.object_named("p").unwrap()).unwrap();
        let sizes: Vec<usize> = ["p", "s_l", "s_r"].iter().map(|n| y.set(c.object_named(n).unwrap()).len()).collect();
        assert_eq!(sizes, vec![1, 1, 1]);
    }
}
