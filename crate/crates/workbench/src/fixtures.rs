//! The bundled fixture corpus. Every file under `fixtures/` is the canonical
//! export of a value built by the core catalog; [`catalog_documents`]
//! rebuilds them so the two can be compared.

use std::path::PathBuf;
use std::sync::Arc;

use kanbench_core::catalog;
use kanbench_core::fincat::{CatPresentation, FinCat, PathExpr};
use kanbench_core::kan::lan_morphism;
use kanbench_core::reflection::{auto_play, Budget, GameConfig, GreedyOptions, MoveKind, Strategy};
use kanbench_core::{Presheaf, Workspace};

use crate::doc::{ArrowDoc, BaseDoc, Document, MorphismDoc, PresentationDoc, PresheafDoc};
use crate::export::{category_doc, kan_model_doc, model_doc, morphism_body, presheaf_body, trace_doc};

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn fixture_path(name: &str) -> PathBuf {
    fixture_dir().join(name)
}

pub const CAT_PRESENTATION: &str = "cat.presentation.json";
pub const SETSET_PRESENTATION: &str = "setset.presentation.json";
pub const SET_CATEGORY: &str = "set.category.json";
pub const SET_MODEL: &str = "set.model.json";
pub const SETSET_MODEL: &str = "setset.model.json";
pub const CAT_MODEL: &str = "cat.model.json";
pub const OB_KAN: &str = "ob.kan.json";
pub const PROD_KAN: &str = "prod.kan.json";
pub const TIMES_TWO_KAN: &str = "times_two.kan.json";
pub const TWO_PRESHEAF: &str = "two.presheaf.json";
pub const SORTS_PRESHEAF: &str = "sorts.presheaf.json";
pub const TIMES_TWO_LU_TRACE: &str = "times_two_lu.trace.json";

/// Configuration file for the ×2 image of the Cat condition `name`.
pub fn times_two_config(name: &str) -> String {
    format!("times_two_{}.config.json", name.trim_start_matches("g_"))
}

pub fn presentation_doc(p: &CatPresentation, path_bound: usize) -> PresentationDoc {
    let path = |e: &PathExpr| match e {
        PathExpr::Identity(o) => vec![format!("1_{o}")],
        PathExpr::Arrows(a) => a.clone(),
    };
    PresentationDoc {
        objects: p.objects.clone(),
        arrows: p
            .arrows
            .iter()
            .map(|a| ArrowDoc { name: a.name.clone(), source: a.source.clone(), target: a.target.clone() })
            .collect(),
        relations: p.relations.iter().map(|(l, r)| [path(l), path(r)]).collect(),
        path_bound,
    }
}

fn reference(name: &str) -> BaseDoc {
    BaseDoc::Ref(name.to_string())
}

/// Every bundled fixture, rebuilt from the catalog, by file name.
pub fn catalog_documents() -> Vec<(String, Document)> {
    let ws = Workspace::new();
    let set = catalog::set_model(&ws);
    let setset = catalog::setset_model(&ws);
    let cat = Arc::new(catalog::cat_model(&ws));
    let cat_pres = presentation_doc(&catalog::cat_presentation(), catalog::CAT_PATH_BOUND);
    let setset_pres = presentation_doc(&catalog::setset_presentation(), 2);
    let terminal = category_doc(&FinCat::terminal(&ws));

    let mut out = vec![
        (CAT_PRESENTATION.to_string(), Document::Presentation(cat_pres.clone())),
        (SETSET_PRESENTATION.to_string(), Document::Presentation(setset_pres)),
        (SET_CATEGORY.to_string(), Document::Category(terminal)),
        (SET_MODEL.to_string(), Document::Model(model_doc(&set, reference(SET_CATEGORY)))),
        (SETSET_MODEL.to_string(), Document::Model(model_doc(&setset, reference(SETSET_PRESENTATION)))),
        (CAT_MODEL.to_string(), Document::Model(model_doc(&cat, reference(CAT_PRESENTATION)))),
        (
            OB_KAN.to_string(),
            Document::KanModel(kan_model_doc(
                &catalog::ob_functor(&ws, &cat, &set),
                reference(CAT_PRESENTATION),
                reference(SET_CATEGORY),
            )),
        ),
        (
            PROD_KAN.to_string(),
            Document::KanModel(kan_model_doc(
                &catalog::product_functor(&ws, &setset, &set),
                reference(SETSET_PRESENTATION),
                reference(SET_CATEGORY),
            )),
        ),
    ];
    let times_two = catalog::times_two(&ws, &cat);
    out.push((
        TIMES_TWO_KAN.to_string(),
        Document::KanModel(kan_model_doc(&times_two, reference(CAT_PRESENTATION), reference(CAT_PRESENTATION))),
    ));
    out.push((
        TWO_PRESHEAF.to_string(),
        Document::Presheaf(PresheafDoc::new(reference(CAT_PRESENTATION), presheaf_body(&catalog::two(&ws, &cat.base)))),
    ));
    let sorts = Presheaf::from_named_tables(
        &ws,
        setset.base.clone(),
        &[("s_l", vec!["a", "b"]), ("s_r", vec!["x", "y", "z"]), ("p", vec![])],
        &[],
    )
    .expect("sorts presheaf");
    out.push((
        SORTS_PRESHEAF.to_string(),
        Document::Presheaf(PresheafDoc::new(reference(SETSET_PRESENTATION), presheaf_body(&sorts))),
    ));
    let mut lu_config = None;
    for (k, cond) in cat.conditions.iter().enumerate() {
        let (_, _, image) = lan_morphism(&ws, &times_two, &cond.morphism).expect("Lan of a condition");
        out.push((
            times_two_config(&cond.name),
            Document::Morphism(MorphismDoc::new(reference(CAT_PRESENTATION), morphism_body(&image))),
        ));
        if k == 1 {
            lu_config = Some(GameConfig::new(cat.clone(), image).expect("valid configuration"));
        }
    }
    let lu_config = lu_config.expect("g_lu is the second condition");
    let play =
        auto_play(&ws, &lu_config, &Strategy::Greedy(GreedyOptions::only(MoveKind::DomE, 1)), &Budget::default())
            .expect("play succeeds");
    let inline_model = model_doc(&cat, BaseDoc::Presentation(cat_pres));
    out.push((TIMES_TWO_LU_TRACE.to_string(), Document::Trace(trace_doc(play.trace(), inline_model))));
    out
}
