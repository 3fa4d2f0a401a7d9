//! Turning documents into validated core values.
//!
//! Bases are interned by their resolved content, so every document loaded
//! through one [`Loader`] that names the same base gets the same category,
//! and values built from different files can be combined.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use kanbench_core::fincat::{from_presentation, CatPresentation, CategoryTable, GenArrow, PathExpr};
use kanbench_core::kan::KanModel;
use kanbench_core::presheaf::{validate_morphism, validate_presheaf, Condition};
use kanbench_core::reflection::{GameConfig, MoveKind, MoveRecord, Trace, TraceAction, TraceStep};
use kanbench_core::{ElemId, FinCat, FinFun, Presheaf, PresheafModel, PsMorphism, Workspace};

use crate::doc::{
    ActionDoc, BaseDoc, CategoryDoc, Document, KanModelDoc, Kind, ModelDoc, MorphismBody, PresentationDoc,
    PresheafBody, Table, TraceDoc,
};
use crate::error::{Result, WorkbenchError};

fn invalid(msg: impl Into<String>) -> WorkbenchError {
    WorkbenchError::Validation(vec![msg.into()])
}

fn violations(vs: Vec<kanbench_core::Violation>) -> Result<()> {
    if vs.is_empty() {
        Ok(())
    } else {
        Err(WorkbenchError::Validation(vs.iter().map(|v| v.to_string()).collect()))
    }
}

/// Reads and parses a document file.
pub fn read_document(path: &Path) -> Result<Document> {
    let text =
        std::fs::read_to_string(path).map_err(|source| WorkbenchError::Io { path: path.to_path_buf(), source })?;
    Document::parse(&path.display().to_string(), &text)
}

/// Directory against which references inside `path` are resolved.
pub fn dir_of(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

pub struct Loader<'w> {
    ws: &'w Workspace,
    bases: BTreeMap<String, Arc<FinCat>>,
}

impl<'w> Loader<'w> {
    pub fn new(ws: &'w Workspace) -> Self {
        Loader { ws, bases: BTreeMap::new() }
    }

    pub fn workspace(&self) -> &'w Workspace {
        self.ws
    }

    /// Replaces a reference by the presentation or category it names.
    pub fn resolve_base(&self, doc: &BaseDoc, dir: &Path) -> Result<BaseDoc> {
        match doc {
            BaseDoc::Ref(rel) => {
                let path = dir.join(rel);
                match read_document(&path)? {
                    Document::Presentation(p) => Ok(BaseDoc::Presentation(p)),
                    Document::Category(c) => Ok(BaseDoc::Category(c)),
                    other => Err(WorkbenchError::KindMismatch { expected: Kind::Presentation, found: other.kind() }),
                }
            }
            inline => Ok(inline.clone()),
        }
    }

    pub fn base(&mut self, doc: &BaseDoc, dir: &Path) -> Result<Arc<FinCat>> {
        let resolved = self.resolve_base(doc, dir)?;
        let key = serde_json::to_string(&resolved).expect("base documents serialize");
        if let Some(b) = self.bases.get(&key) {
            return Ok(b.clone());
        }
        let base = Arc::new(match &resolved {
            BaseDoc::Presentation(p) => build_presentation(self.ws, p)?,
            BaseDoc::Category(c) => build_category(self.ws, c)?,
            BaseDoc::Ref(_) => unreachable!("resolved above"),
        });
        self.bases.insert(key, base.clone());
        Ok(base)
    }

    pub fn presheaf(&self, base: &Arc<FinCat>, body: &PresheafBody) -> Result<Presheaf> {
        let generators = base.generators();
        for name in body.actions.keys() {
            let f = base.morphism_named(name)?;
            if !generators.contains(&f) {
                return Err(invalid(format!(
                    "`{name}` is not a generating morphism; give its action through generators"
                )));
            }
        }
        let sets: Vec<(&str, Vec<&str>)> =
            body.sets.iter().map(|(o, es)| (o.as_str(), es.iter().map(String::as_str).collect())).collect();
        let actions: Vec<(&str, Vec<(&str, &str)>)> = body
            .actions
            .iter()
            .map(|(f, t)| (f.as_str(), t.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect()))
            .collect();
        let x = Presheaf::from_named_tables(self.ws, base.clone(), &sets, &actions)?;
        violations(validate_presheaf(&x))?;
        Ok(x)
    }

    pub fn morphism(&self, base: &Arc<FinCat>, body: &MorphismBody) -> Result<PsMorphism> {
        let x = self.presheaf(base, &body.source)?;
        let y = self.presheaf(base, &body.target)?;
        components_between(&x, &y, &body.components)
    }

    pub fn model(&mut self, doc: &ModelDoc, dir: &Path) -> Result<PresheafModel> {
        let base = self.base(&doc.base, dir)?;
        let mut conditions = Vec::new();
        for c in &doc.conditions {
            if conditions.iter().any(|k: &Condition| k.name == c.name) {
                return Err(invalid(format!("duplicate condition `{}`", c.name)));
            }
            let morphism = self.morphism(&base, &c.body())?;
            conditions.push(Condition { name: c.name.clone(), morphism });
        }
        Ok(PresheafModel::new(base, conditions)?)
    }

    /// The model document with its base inlined.
    pub fn resolve_model(&self, doc: &ModelDoc, dir: &Path) -> Result<ModelDoc> {
        Ok(ModelDoc { base: self.resolve_base(&doc.base, dir)?, conditions: doc.conditions.clone() })
    }

    pub fn kan_model(&mut self, doc: &KanModelDoc, dir: &Path) -> Result<KanModel> {
        let source = self.base(&doc.source, dir)?;
        let target = self.base(&doc.target, dir)?;
        let mut objects = BTreeMap::new();
        for (name, body) in &doc.objects {
            let c = source.object_named(name)?;
            objects.insert(c, self.presheaf(&target, body)?);
        }
        for c in source.objects().iter() {
            objects.entry(c).or_insert_with(|| Presheaf::empty(target.clone()));
        }
        let gens = source.generators();
        let mut generators = BTreeMap::new();
        for (name, comps) in &doc.generators {
            let g = source.morphism_named(name)?;
            if !gens.contains(&g) {
                return Err(invalid(format!("`{name}` is not a generating morphism of the source")));
            }
            let m = components_between(&objects[&source.src(g)], &objects[&source.tgt(g)], comps)?;
            generators.insert(g, m);
        }
        for g in gens {
            let a = &objects[&source.src(g)];
            if a.is_empty() && !generators.contains_key(&g) {
                let m = components_between(a, &objects[&source.tgt(g)], &BTreeMap::new())?;
                generators.insert(g, m);
            }
        }
        Ok(KanModel::from_generators(source, target, objects, &generators)?)
    }

    /// A trace document as a core trace; the recorded initial digest must
    /// match the loaded configuration.
    pub fn trace(&mut self, doc: &TraceDoc, dir: &Path) -> Result<Trace> {
        let model = Arc::new(self.model(&doc.model, dir)?);
        let m = self.morphism(&model.base, &doc.initial)?;
        let initial = GameConfig::new(model, m)?;
        if initial.digest() != doc.initial_digest {
            return Err(invalid(format!(
                "initial configuration has digest {}, the trace records {}",
                initial.digest(),
                doc.initial_digest
            )));
        }
        let mut trace = Trace::new(initial);
        for (i, step) in doc.steps.iter().enumerate() {
            let action = match &step.action {
                ActionDoc::Move { kind, condition, witnesses } => {
                    let kind = MoveKind::parse(kind)
                        .ok_or_else(|| invalid(format!("step {i}: unknown move kind `{kind}`")))?;
                    TraceAction::Move(MoveRecord { kind, condition: *condition, witnesses: witnesses.clone() })
                }
                ActionDoc::SaturateDomain => TraceAction::SaturateDomain,
                ActionDoc::SaturateCodomain => TraceAction::SaturateCodomain,
            };
            trace.steps.push(TraceStep { action, digest: step.digest.clone() });
        }
        Ok(trace)
    }
}

fn path_expr(objects: &[String], path: &[String]) -> PathExpr {
    if let [single] = path {
        if let Some(o) = single.strip_prefix("1_") {
            if objects.iter().any(|x| x == o) {
                return PathExpr::Identity(o.to_string());
            }
        }
    }
    PathExpr::Arrows(path.to_vec())
}

fn build_presentation(ws: &Workspace, p: &PresentationDoc) -> Result<FinCat> {
    let pres = CatPresentation {
        objects: p.objects.clone(),
        arrows: p
            .arrows
            .iter()
            .map(|a| GenArrow { name: a.name.clone(), source: a.source.clone(), target: a.target.clone() })
            .collect(),
        relations: p.relations.iter().map(|[l, r]| (path_expr(&p.objects, l), path_expr(&p.objects, r))).collect(),
    };
    Ok(from_presentation(ws, &pres, p.path_bound)?)
}

fn build_category(ws: &Workspace, c: &CategoryDoc) -> Result<FinCat> {
    let table = CategoryTable {
        objects: c.objects.clone(),
        morphisms: c.morphisms.iter().map(|a| (a.name.clone(), a.source.clone(), a.target.clone())).collect(),
        composition: c.composition.iter().map(|[f, g, h]| (f.clone(), g.clone(), h.clone())).collect(),
        identity_names: BTreeMap::new(),
    };
    Ok(FinCat::from_table(ws, &table)?)
}

/// Element ids of `x(c)` by name.
fn names_at(x: &Presheaf, c: ElemId) -> BTreeMap<String, ElemId> {
    x.set(c).iter().map(|e| (x.label(e), e)).collect()
}

fn components_between(x: &Presheaf, y: &Presheaf, tables: &BTreeMap<String, Table>) -> Result<PsMorphism> {
    let base = x.base();
    for name in tables.keys() {
        base.object_named(name)?;
    }
    let mut comps = BTreeMap::new();
    for c in base.objects().iter() {
        let (xs, ys) = (names_at(x, c), names_at(y, c));
        let empty = Table::new();
        let table = tables.get(&base.name(c)).unwrap_or(&empty);
        let mut graph = BTreeMap::new();
        for (a, b) in table {
            let xa = xs.get(a).ok_or_else(|| invalid(format!("unknown source element `{a}` over {}", base.name(c))))?;
            let yb = ys.get(b).ok_or_else(|| invalid(format!("unknown target element `{b}` over {}", base.name(c))))?;
            graph.insert(*xa, *yb);
        }
        let f = FinFun::new(x.set(c).clone(), y.set(c).clone(), graph)
            .map_err(|e| invalid(format!("component at {}: {e}", base.name(c))))?;
        comps.insert(c, f);
    }
    let m = PsMorphism::new(x.clone(), y.clone(), comps)?;
    violations(validate_morphism(&m))?;
    Ok(m)
}
