//! The standard presheaf models: sets, pairs of sets, and small categories,
//! together with the category `2` seen as a presheaf on the latter.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::finbase::{ElemId, FinFun, FinSet, Workspace};
use crate::fincat::{from_presentation, CatPresentation, FinCat, GenArrow, PathExpr};
use crate::kan::{product_kan_model, KanModel};
use crate::presheaf::{Condition, ElemExpr, Presented, Presheaf, PresheafModel, PresheafPresentation, PsMorphism};

fn arrow(name: &str, s: &str, t: &str) -> GenArrow {
    GenArrow { name: name.into(), source: s.into(), target: t.into() }
}

fn path(names: &[&str]) -> PathExpr {
    PathExpr::Arrows(names.iter().map(|s| s.to_string()).collect())
}

/// Base for pairs of sets: `l: s_l -> p`, `r: s_r -> p`.
pub fn setset_presentation() -> CatPresentation {
    CatPresentation {
        objects: vec!["s_l".into(), "s_r".into(), "p".into()],
        arrows: vec![arrow("l", "s_l", "p"), arrow("r", "s_r", "p")],
        relations: vec![],
    }
}

/// Base for small categories: objects, morphisms and composable pairs.
pub fn cat_presentation() -> CatPresentation {
    let o = || PathExpr::Identity("o".into());
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
            (path(&["id", "src"]), o()),
            (path(&["id", "tgt"]), o()),
            (path(&["comp", "src"]), path(&["l", "src"])),
            (path(&["comp", "tgt"]), path(&["r", "tgt"])),
            (path(&["l", "tgt"]), path(&["r", "src"])),
        ],
    }
}

pub const CAT_PATH_BOUND: usize = 3;

pub fn setset_base(ws: &Workspace) -> Arc<FinCat> {
    Arc::new(from_presentation(ws, &setset_presentation(), 2).expect("closes at length 2"))
}

pub fn cat_base(ws: &Workspace) -> Arc<FinCat> {
    Arc::new(from_presentation(ws, &cat_presentation(), CAT_PATH_BOUND).expect("closes at length 3"))
}

/// Sets: the terminal base and no conditions.
pub fn set_model(ws: &Workspace) -> PresheafModel {
    PresheafModel { base: Arc::new(FinCat::terminal(ws)), conditions: vec![] }
}

fn gens(list: &[(&str, &str)]) -> Vec<(String, String)> {
    list.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
}

fn eq(l: ElemExpr, r: ElemExpr) -> (ElemExpr, ElemExpr) {
    (l, r)
}

/// Builds `g: A -> B` from presentations and images of the generators of `A`.
pub fn presented_condition(
    ws: &Workspace,
    base: &Arc<FinCat>,
    name: &str,
    a: &PresheafPresentation,
    b: &PresheafPresentation,
    images: &[(&str, ElemExpr)],
) -> Result<Condition> {
    let pa = Presented::new(ws, base, a)?;
    let pb = Presented::new(ws, base, b)?;
    let imgs = images.iter().map(|(g, e)| Ok((g.to_string(), pb.element(e)?))).collect::<Result<BTreeMap<_, _>>>()?;
    let morphism = pa.morphism_to(&pb.presheaf, &imgs)?;
    Ok(Condition { name: name.into(), morphism })
}

/// Pairs of sets with the condition forcing `X(p) ≅ X(s_l) × X(s_r)`.
pub fn setset_model(ws: &Workspace) -> PresheafModel {
    let base = setset_base(ws);
    let a = PresheafPresentation { generators: gens(&[("*_l", "s_l"), ("*_r", "s_r")]), relations: vec![] };
    let b = PresheafPresentation { generators: gens(&[("p", "p")]), relations: vec![] };
    let g = presented_condition(
        ws,
        &base,
        "g_p",
        &a,
        &b,
        &[("*_l", ElemExpr::app(&["l"], "p")), ("*_r", ElemExpr::app(&["r"], "p"))],
    )
    .expect("valid condition");
    PresheafModel::new(base, vec![g]).expect("valid model")
}

/// The four conditions carving small categories out of presheaves on the
/// base of [`cat_presentation`]: existence of composites, both unit laws,
/// and associativity.
pub fn cat_conditions(ws: &Workspace, base: &Arc<FinCat>) -> Vec<Condition> {
    use ElemExpr as E;
    let a_p = PresheafPresentation {
        generators: gens(&[("u", "m"), ("v", "m"), ("y", "o")]),
        relations: vec![eq(E::app(&["tgt"], "u"), E::gen("y")), eq(E::app(&["src"], "v"), E::gen("y"))],
    };
    let b_p = PresheafPresentation { generators: gens(&[("q", "p")]), relations: vec![] };
    let g_p = presented_condition(
        ws,
        base,
        "g_p",
        &a_p,
        &b_p,
        &[("u", E::app(&["l"], "q")), ("v", E::app(&["r"], "q")), ("y", E::app(&["tgt", "l"], "q"))],
    );

    let unit = |name: &str, side: &str, other: &str| {
        let a = PresheafPresentation {
            generators: gens(&[("q", "p"), ("x", "o")]),
            relations: vec![eq(E::app(&[side], "q"), E::app(&["id"], "x"))],
        };
        let mut b = a.clone();
        b.relations.push(eq(E::app(&["comp"], "q"), E::app(&[other], "q")));
        presented_condition(ws, base, name, &a, &b, &[("q", E::gen("q")), ("x", E::gen("x"))])
    };
    let g_lu = unit("g_lu", "l", "r");
    let g_ru = unit("g_ru", "r", "l");

    let a_ass = PresheafPresentation {
        generators: gens(&[("q1", "p"), ("q2", "p"), ("t1", "p"), ("t2", "p")]),
        relations: vec![
            eq(E::app(&["r"], "q1"), E::app(&["l"], "q2")),
            eq(E::app(&["l"], "t1"), E::app(&["comp"], "q1")),
            eq(E::app(&["r"], "t1"), E::app(&["r"], "q2")),
            eq(E::app(&["l"], "t2"), E::app(&["l"], "q1")),
            eq(E::app(&["r"], "t2"), E::app(&["comp"], "q2")),
        ],
    };
    let mut b_ass = a_ass.clone();
    b_ass.relations.push(eq(E::app(&["comp"], "t1"), E::app(&["comp"], "t2")));
    let ids: Vec<(&str, E)> = ["q1", "q2", "t1", "t2"].iter().map(|g| (*g, E::gen(g))).collect();
    let g_ass = presented_condition(ws, base, "g_ass", &a_ass, &b_ass, &ids);

    [g_p, g_lu, g_ru, g_ass].into_iter().map(|g| g.expect("valid condition")).collect()
}

/// Small categories as a presheaf model.
pub fn cat_model(ws: &Workspace) -> PresheafModel {
    let base = cat_base(ws);
    let conditions = cat_conditions(ws, &base);
    PresheafModel::new(base, conditions).expect("valid model")
}

/// The category `2` (two objects, one non-identity arrow) as a presheaf on
/// the base of [`cat_presentation`].
pub fn two(ws: &Workspace, base: &Arc<FinCat>) -> Presheaf {
    Presheaf::from_named_tables(
        ws,
        base.clone(),
        &[
            ("o", vec!["0", "1"]),
            ("m", vec!["id0", "a", "id1"]),
            ("p", vec!["(id0,id0)", "(id0,a)", "(a,id1)", "(id1,id1)"]),
        ],
        &[
            ("src", vec![("id0", "0"), ("a", "0"), ("id1", "1")]),
            ("tgt", vec![("id0", "0"), ("a", "1"), ("id1", "1")]),
            ("id", vec![("0", "id0"), ("1", "id1")]),
            ("l", vec![("(id0,id0)", "id0"), ("(id0,a)", "id0"), ("(a,id1)", "a"), ("(id1,id1)", "id1")]),
            ("r", vec![("(id0,id0)", "id0"), ("(id0,a)", "a"), ("(a,id1)", "id1"), ("(id1,id1)", "id1")]),
            ("comp", vec![("(id0,id0)", "id0"), ("(id0,a)", "a"), ("(a,id1)", "a"), ("(id1,id1)", "id1")]),
        ],
    )
    .expect("2 is a category")
}

/// A finite category `k` as a presheaf on the base of [`cat_presentation`]:
/// objects, morphisms and composable pairs `(f, g)` with `tgt f = src g`.
pub fn nerve(ws: &Workspace, base: &Arc<FinCat>, k: &FinCat) -> Result<Presheaf> {
    let objs: Vec<String> = k.objects().iter().map(|o| k.name(o)).collect();
    let arrows: Vec<_> = k.morphisms().iter().collect();
    let names: Vec<String> = arrows.iter().map(|f| k.name(*f)).collect();
    let mut pairs = Vec::new();
    for &f in &arrows {
        for &g in &arrows {
            if let Some(gf) = k.comp(f, g) {
                pairs.push((format!("({},{})", k.name(f), k.name(g)), k.name(f), k.name(g), k.name(gf)));
            }
        }
    }
    let on = |pick: &dyn Fn(ElemId) -> ElemId| -> Vec<(String, String)> {
        arrows.iter().map(|&f| (k.name(f), k.name(pick(f)))).collect()
    };
    let src = on(&|f| k.src(f));
    let tgt = on(&|f| k.tgt(f));
    let id: Vec<(String, String)> = k.objects().iter().map(|o| (k.name(o), k.name(k.identity(o)))).collect();
    let l: Vec<(String, String)> = pairs.iter().map(|p| (p.0.clone(), p.1.clone())).collect();
    let r: Vec<(String, String)> = pairs.iter().map(|p| (p.0.clone(), p.2.clone())).collect();
    let c: Vec<(String, String)> = pairs.iter().map(|p| (p.0.clone(), p.3.clone())).collect();
    Presheaf::from_named_tables(
        ws,
        base.clone(),
        &[
            ("o", objs.iter().map(String::as_str).collect()),
            ("m", names.iter().map(String::as_str).collect()),
            ("p", pairs.iter().map(|p| p.0.as_str()).collect()),
        ],
        &[
            ("src", refs(&src)),
            ("tgt", refs(&tgt)),
            ("id", refs(&id)),
            ("l", refs(&l)),
            ("r", refs(&r)),
            ("comp", refs(&c)),
        ],
    )
}

fn refs(v: &[(String, String)]) -> Vec<(&str, &str)> {
    v.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect()
}

/// A Kan model into sets (presheaves on the terminal category) given by
/// named element lists and maps for the generating morphisms.
pub fn set_valued_model(
    ws: &Workspace,
    source: &Arc<FinCat>,
    target: &Arc<FinCat>,
    sets: &[(&str, Vec<&str>)],
    maps: &[(&str, Vec<(&str, &str)>)],
) -> Result<KanModel> {
    let star = target.objects().get(0).expect("terminal category has an object");
    let star_name = target.name(star);
    let mut objects = BTreeMap::new();
    for (obj, elems) in sets {
        let c = source.object_named(obj)?;
        let x = Presheaf::from_named_tables(ws, target.clone(), &[(star_name.as_str(), elems.clone())], &[])?;
        objects.insert(c, x);
    }
    for c in source.objects().iter() {
        objects.entry(c).or_insert_with(|| Presheaf::empty(target.clone()));
    }
    let mut generators = BTreeMap::new();
    for (arrow, table) in maps {
        let f = source.morphism_named(arrow)?;
        let (a, b) = (&objects[&source.src(f)], &objects[&source.tgt(f)]);
        let graph = table
            .iter()
            .map(|(x, y)| {
                let xe = a.element_named(star, x).ok_or_else(|| Error::UnknownObject(x.to_string()))?;
                let ye = b.element_named(star, y).ok_or_else(|| Error::UnknownObject(y.to_string()))?;
                Ok((xe, ye))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        let comp = FinFun::new(a.set(star).clone(), b.set(star).clone(), graph)?;
        generators.insert(f, PsMorphism::new(a.clone(), b.clone(), BTreeMap::from([(star, comp)]))?);
    }
    for g in source.generators() {
        let (a, b) = (&objects[&source.src(g)], &objects[&source.tgt(g)]);
        if a.is_empty() {
            generators.entry(g).or_insert_with(|| {
                let comp = FinFun::new(FinSet::empty(), b.set(star).clone(), BTreeMap::new()).unwrap();
                PsMorphism::new(a.clone(), b.clone(), BTreeMap::from([(star, comp)])).unwrap()
            });
        }
    }
    KanModel::from_generators(source.clone(), target.clone(), objects, &generators)
}

/// The object functor from small categories to sets: `F(c) = C(o, c)`.
pub fn ob_functor(ws: &Workspace, cat: &PresheafModel, set: &PresheafModel) -> KanModel {
    set_valued_model(
        ws,
        &cat.base,
        &set.base,
        &[("o", vec!["o"]), ("m", vec!["s", "t"]), ("p", vec!["ls", "lt", "rt"])],
        &[
            ("src", vec![("o", "s")]),
            ("tgt", vec![("o", "t")]),
            ("id", vec![("s", "o"), ("t", "o")]),
            ("l", vec![("s", "ls"), ("t", "lt")]),
            ("r", vec![("s", "lt"), ("t", "rt")]),
            ("comp", vec![("s", "ls"), ("t", "rt")]),
        ],
    )
    .expect("object functor is a Kan model")
}

/// The product functor from pairs of sets to sets: `F(p) = 1`, nothing else.
pub fn product_functor(ws: &Workspace, setset: &PresheafModel, set: &PresheafModel) -> KanModel {
    set_valued_model(ws, &setset.base, &set.base, &[("p", vec!["*"])], &[]).expect("product functor is a Kan model")
}

/// `X ↦ X × 2` on small categories, through `F(c) = y(c) × 2`.
pub fn times_two(ws: &Workspace, cat: &PresheafModel) -> KanModel {
    let y2 = two(ws, &cat.base);
    let o = cat.base.objects().get(0).unwrap();
    product_kan_model(ws, &cat.base, o, Some(&y2)).expect("product model is a Kan model")
}
