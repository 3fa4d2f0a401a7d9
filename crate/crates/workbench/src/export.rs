//! Core values back to documents. Element names come from labels; an element
//! whose label is missing or shared within its set is named by its rank.

use std::collections::{BTreeMap, BTreeSet};

use kanbench_core::kan::KanModel;
use kanbench_core::reflection::{Trace, TraceAction};
use kanbench_core::{ElemId, FinCat, Presheaf, PresheafModel, PsMorphism};

use crate::doc::{
    ActionDoc, ArrowDoc, BaseDoc, CategoryDoc, ConditionDoc, KanModelDoc, ModelDoc, MorphismBody, PresheafBody,
    StepDoc, Table, TraceDoc,
};

/// Names of all elements of `x`.
pub fn element_names(x: &Presheaf) -> BTreeMap<ElemId, String> {
    let mut out = BTreeMap::new();
    for set in x.sets().values() {
        let labels: Vec<Option<&String>> = set.iter().map(|e| x.labels().get(&e)).collect();
        let mut counts: BTreeMap<&String, usize> = BTreeMap::new();
        for l in labels.iter().flatten() {
            *counts.entry(l).or_default() += 1;
        }
        let mut names: Vec<String> = set
            .iter()
            .zip(&labels)
            .enumerate()
            .map(|(rank, (_, l))| match l {
                Some(l) if counts[l] == 1 => (*l).clone(),
                Some(l) => format!("{l}#{rank}"),
                None => format!("#{rank}"),
            })
            .collect();
        if names.iter().collect::<BTreeSet<_>>().len() != names.len() {
            names = (0..set.len()).map(|rank| format!("#{rank}")).collect();
        }
        out.extend(set.iter().zip(names));
    }
    out
}

pub fn presheaf_body(x: &Presheaf) -> PresheafBody {
    presheaf_body_named(x, &element_names(x))
}

fn presheaf_body_named(x: &Presheaf, names: &BTreeMap<ElemId, String>) -> PresheafBody {
    let base = x.base();
    let sets =
        base.objects().iter().map(|c| (base.name(c), x.set(c).iter().map(|e| names[&e].clone()).collect())).collect();
    let actions = base
        .generators()
        .into_iter()
        .map(|g| {
            let table: Table = x.action(g).graph().iter().map(|(a, b)| (names[a].clone(), names[b].clone())).collect();
            (base.name(g), table)
        })
        .collect();
    PresheafBody { sets, actions }
}

fn component_tables(
    m: &PsMorphism,
    xs: &BTreeMap<ElemId, String>,
    ys: &BTreeMap<ElemId, String>,
) -> BTreeMap<String, Table> {
    let base = m.source().base();
    base.objects()
        .iter()
        .map(|c| {
            let table = m.component(c).graph().iter().map(|(a, b)| (xs[a].clone(), ys[b].clone())).collect();
            (base.name(c), table)
        })
        .collect()
}

pub fn morphism_body(m: &PsMorphism) -> MorphismBody {
    let xs = element_names(m.source());
    let ys = element_names(m.target());
    MorphismBody {
        source: presheaf_body_named(m.source(), &xs),
        target: presheaf_body_named(m.target(), &ys),
        components: component_tables(m, &xs, &ys),
    }
}

/// The full table of a category. Identities must carry their default names.
pub fn category_doc(c: &FinCat) -> CategoryDoc {
    let non_identity: Vec<ElemId> = c.morphisms().iter().filter(|f| !c.is_identity(*f)).collect();
    let morphisms = non_identity
        .iter()
        .map(|&f| ArrowDoc { name: c.name(f), source: c.name(c.src(f)), target: c.name(c.tgt(f)) })
        .collect();
    let composition = c
        .composition_table()
        .iter()
        .filter(|((f, g), _)| !c.is_identity(*f) && !c.is_identity(*g))
        .map(|((f, g), h)| [c.name(*f), c.name(*g), c.name(*h)])
        .collect();
    CategoryDoc { objects: c.objects().iter().map(|o| c.name(o)).collect(), morphisms, composition }
}

/// A model document; the base is passed in because a category does not
/// remember the presentation it came from.
pub fn model_doc(model: &PresheafModel, base: BaseDoc) -> ModelDoc {
    let conditions = model
        .conditions
        .iter()
        .map(|c| {
            let body = morphism_body(&c.morphism);
            ConditionDoc { name: c.name.clone(), source: body.source, target: body.target, components: body.components }
        })
        .collect();
    ModelDoc { base, conditions }
}

pub fn kan_model_doc(f: &KanModel, source: BaseDoc, target: BaseDoc) -> KanModelDoc {
    let s = &f.source;
    let names: BTreeMap<ElemId, BTreeMap<ElemId, String>> =
        s.objects().iter().map(|c| (c, element_names(f.object(c)))).collect();
    let objects = s.objects().iter().map(|c| (s.name(c), presheaf_body_named(f.object(c), &names[&c]))).collect();
    let generators = s
        .generators()
        .into_iter()
        .map(|g| (s.name(g), component_tables(f.morphism(g), &names[&s.src(g)], &names[&s.tgt(g)])))
        .collect();
    KanModelDoc { source, target, objects, generators }
}

pub fn action_doc(a: &TraceAction) -> ActionDoc {
    match a {
        TraceAction::Move(r) => {
            ActionDoc::Move { kind: r.kind.name().to_string(), condition: r.condition, witnesses: r.witnesses.clone() }
        }
        TraceAction::SaturateDomain => ActionDoc::SaturateDomain,
        TraceAction::SaturateCodomain => ActionDoc::SaturateCodomain,
    }
}

/// A trace document; `model` must describe the trace's model with its base
/// inlined, so that the trace is self-contained.
pub fn trace_doc(trace: &Trace, model: ModelDoc) -> TraceDoc {
    TraceDoc {
        model,
        initial: morphism_body(&trace.initial.m),
        initial_digest: trace.initial.digest(),
        steps: trace
            .steps
            .iter()
            .map(|s| StepDoc { action: action_doc(&s.action), digest: s.digest.clone() })
            .collect(),
    }
}
