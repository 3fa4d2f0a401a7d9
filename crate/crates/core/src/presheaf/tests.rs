use std::collections::BTreeMap;
use std::sync::Arc;

use super::*;
use crate::catalog;
use crate::fincat::{yoneda, CategoryTable};

fn chain(ws: &Workspace) -> Arc<FinCat> {
    let table = CategoryTable {
        objects: vec!["x".into(), "y".into(), "z".into()],
        morphisms: vec![
            ("f".into(), "x".into(), "y".into()),
            ("g".into(), "y".into(), "z".into()),
            ("h".into(), "x".into(), "z".into()),
        ],
        composition: vec![("f".into(), "g".into(), "h".into())],
        ..Default::default()
    };
    Arc::new(FinCat::from_table(ws, &table).unwrap())
}

fn sizes_by_name(x: &Presheaf, names: &[&str]) -> Vec<usize> {
    names.iter().map(|n| x.set(x.base().object_named(n).unwrap()).len()).collect()
}

fn two_point_chain(ws: &Workspace, base: &Arc<FinCat>, broken: bool) -> Presheaf {
    let elems = vec!["a", "b"];
    let sets = vec![("x", elems.clone()), ("y", elems.clone()), ("z", elems)];
    let swap = vec![("a", "b"), ("b", "a")];
    let id = vec![("a", "a"), ("b", "b")];
    let x = Presheaf::from_named_tables(
        ws,
        base.clone(),
        &sets,
        &[("f", swap.clone()), ("g", swap.clone()), ("h", id.clone())],
    )
    .unwrap();
    if !broken {
        return x;
    }
    let h = base.morphism_named("h").unwrap();
    let mut actions = x.actions().clone();
    let (zs, xs) = (x.set(base.tgt(h)).clone(), x.set(base.src(h)).clone());
    let a = xs.as_slice()[0];
    actions.insert(h, FinFun::from_fn(zs, xs, |_| a).unwrap());
    Presheaf::from_parts(base.clone(), x.sets().clone(), actions).unwrap()
}

#[test]
fn representables_are_presheaves() {
    let ws = Workspace::new();
    let base = chain(&ws);
    for c in base.objects().iter() {
        assert!(validate_presheaf(&yoneda(&base, c).unwrap()).is_empty());
    }
}

#[test]
fn generator_tables_derive_composites() {
    let ws = Workspace::new();
    let base = chain(&ws);
    let x = two_point_chain(&ws, &base, false);
    assert!(validate_presheaf(&x).is_empty());
    let broken = two_point_chain(&ws, &base, true);
    let v = validate_presheaf(&broken);
    assert_eq!(v.len(), 1, "{v:?}");
    assert_eq!(v[0].law, "functoriality");
}

#[test]
fn naturality_squares() {
    let ws = Workspace::new();
    let base = chain(&ws);
    let x = two_point_chain(&ws, &base, false);
    assert!(validate_morphism(&PsMorphism::identity(&x)).is_empty());
    // swapping only at z breaks the square for g and h
    let mut comps = PsMorphism::identity(&x).components().clone();
    let z = base.object_named("z").unwrap();
    let zs = x.set(z).clone();
    let (a, b) = (zs.as_slice()[0], zs.as_slice()[1]);
    comps.insert(z, FinFun::from_fn(zs.clone(), zs, |e| if e == a { b } else { a }).unwrap());
    let m = PsMorphism::new(x.clone(), x, comps).unwrap();
    let v = validate_morphism(&m);
    let names: Vec<String> = v.iter().map(|v| base.name(v.ids[0])).collect();
    assert_eq!(names, vec!["g", "h"]);
}

#[test]
fn nat_trans_out_of_empty_presheaf() {
    let ws = Workspace::new();
    let model = catalog::cat_model(&ws);
    let y = catalog::two(&ws, &model.base);
    let empty = Presheaf::empty(model.base.clone());
    assert_eq!(enumerate_nat_trans(&empty, &y).unwrap().count(), 1);
    assert_eq!(enumerate_nat_trans(&y, &empty).unwrap().count(), 0);
}

#[test]
fn apex_representable_has_only_identity() {
    let ws = Workspace::new();
    let base = catalog::setset_base(&ws);
    let y = yoneda(&base, base.object_named("p").unwrap()).unwrap();
    let all: Vec<_> = enumerate_nat_trans(&y, &y).unwrap().collect();
    assert_eq!(all.len(), 1);
    assert_eq!(all[0], PsMorphism::identity(&y));
}

#[test]
fn yoneda_counts_on_cat_base() {
    let ws = Workspace::new();
    let base = catalog::cat_base(&ws);
    let y2 = catalog::two(&ws, &base);
    for c in base.objects().iter() {
        let y = yoneda(&base, c).unwrap();
        let maps: Vec<_> = enumerate_nat_trans(&y, &y2).unwrap().collect();
        assert_eq!(maps.len(), y2.set(c).len());
        for m in &maps {
            assert!(validate_morphism(m).is_empty());
        }
    }
}

#[test]
fn nat_trans_are_distinct_and_deterministic() {
    let ws = Workspace::new();
    let base = catalog::cat_base(&ws);
    let y2 = catalog::two(&ws, &base);
    let first: Vec<_> = enumerate_nat_trans(&y2, &y2).unwrap().collect();
    let second: Vec<_> = enumerate_nat_trans(&y2, &y2).unwrap().collect();
    assert_eq!(first, second);
    for (i, a) in first.iter().enumerate() {
        assert!(validate_morphism(a).is_empty());
        for b in &first[i + 1..] {
            assert_ne!(a, b);
        }
    }
    // endofunctors of the category 2: identity and the two constant maps
    assert_eq!(first.len(), 3);
}

#[test]
fn iso_detection() {
    let ws = Workspace::new();
    let base = chain(&ws);
    let x = two_point_chain(&ws, &base, false);
    assert!(is_iso(&PsMorphism::identity(&x)));
    let t = Presheaf::terminal(&ws, base.clone());
    let collapse = enumerate_nat_trans(&x, &t).unwrap().next().unwrap();
    assert!(!is_iso(&collapse));
}

#[test]
fn colimit_of_empty_and_single_diagrams() {
    let ws = Workspace::new();
    let base = catalog::cat_base(&ws);
    let d = Diagram::from_graph(&ws, base.clone(), vec![], vec![]).unwrap();
    let c = d.colimit(&ws).unwrap();
    assert!(c.apex.is_empty());

    let y2 = catalog::two(&ws, &base);
    let d = Diagram::from_graph(&ws, base.clone(), vec![y2.clone()], vec![]).unwrap();
    let c = d.colimit(&ws).unwrap();
    assert_eq!(c.apex.sizes(), y2.sizes());
    let leg = c.coprojections.values().next().unwrap();
    assert!(leg.is_iso());
    assert!(validate_presheaf(&c.apex).is_empty());
    let back = c
        .factor_cocone(&BTreeMap::from([(*c.coprojections.keys().next().unwrap(), PsMorphism::identity(&y2))]))
        .unwrap();
    assert!(back.is_iso());
    assert_eq!(leg.then(&back).unwrap(), PsMorphism::identity(&y2));
}

#[test]
fn pushout_adds_the_missing_pair() {
    let ws = Workspace::new();
    let model = catalog::setset_model(&ws);
    let g = &model.conditions[0].morphism;
    let base = model.base.clone();
    let x = Presheaf::from_named_tables(&ws, base.clone(), &[("s_l", vec!["a"]), ("s_r", vec!["b"])], &[]).unwrap();
    let f = enumerate_nat_trans(g.source(), &x).unwrap().next().unwrap();
    let po = pushout(&ws, &f, g).unwrap();
    assert_eq!(sizes_by_name(&po.apex, &["s_l", "s_r", "p"]), vec![1, 1, 1]);
    assert!(validate_morphism(&po.left).is_empty());
    assert!(validate_morphism(&po.right).is_empty());
    assert_eq!(f.then(&po.left).unwrap(), g.then(&po.right).unwrap());
}

#[test]
fn pushout_along_identity_and_iso() {
    let ws = Workspace::new();
    let model = catalog::setset_model(&ws);
    let g = &model.conditions[0].morphism;
    let id = PsMorphism::identity(g.source());
    let po = pushout(&ws, &id, g).unwrap();
    assert_eq!(po.apex.sizes(), g.target().sizes());
    assert!(po.right.is_iso());
    // pushing g along the identity: the leg opposite the iso is an iso
    let po2 = pushout(&ws, g, &id).unwrap();
    assert!(po2.left.is_iso());
}

#[test]
fn coequalizer_of_equal_pair_is_iso() {
    let ws = Workspace::new();
    let model = catalog::setset_model(&ws);
    let g = &model.conditions[0].morphism;
    let (q, proj) = coequalizer_ps(&ws, g, g).unwrap();
    assert_eq!(q.sizes(), g.target().sizes());
    assert!(proj.is_iso());
}

#[test]
fn coequalizer_identifies_two_points() {
    let ws = Workspace::new();
    let model = catalog::setset_model(&ws);
    let base = model.base.clone();
    let x = Presheaf::from_named_tables(&ws, base.clone(), &[("s_l", vec!["a", "b", "c"])], &[]).unwrap();
    let sl = base.object_named("s_l").unwrap();
    let y = yoneda(&base, sl).unwrap();
    let pick = |n: &str| presented::yoneda_map(&y, &x, x.element_named(sl, n).unwrap()).unwrap();
    let (q, _) = coequalizer_ps(&ws, &pick("a"), &pick("c")).unwrap();
    assert_eq!(q.set(sl).len(), 2);
}

#[test]
fn coequalizer_in_unit_law_domain() {
    let ws = Workspace::new();
    let model = catalog::cat_model(&ws);
    let g_lu = &model.conditions[1].morphism;
    let a = g_lu.source();
    let base = &model.base;
    let m = base.object_named("m").unwrap();
    assert_eq!(a.set(m).len(), 4);
    let y = yoneda(base, m).unwrap();
    let pick = |label: &str| presented::yoneda_map(&y, a, a.element_named(m, label).unwrap()).unwrap();
    let (q, proj) = coequalizer_ps(&ws, &pick("r(q)"), &pick("comp(q)")).unwrap();
    assert_eq!(q.set(m).len(), 3);
    assert!(validate_morphism(&proj).is_empty());
}

#[test]
fn products() {
    let ws = Workspace::new();
    let base = catalog::cat_base(&ws);
    let y2 = catalog::two(&ws, &base);
    assert_eq!(sizes_by_name(&y2, &["o", "m", "p"]), vec![2, 3, 4]);
    assert!(validate_presheaf(&y2).is_empty());
    let t = Presheaf::terminal(&ws, base.clone());
    let (p, pi1, pi2) = product(&ws, &y2, &t).unwrap();
    assert!(validate_presheaf(&p).is_empty());
    assert!(pi1.is_iso());
    assert!(validate_morphism(&pi2).is_empty());
    let (pp, _, _) = product(&ws, &y2, &y2).unwrap();
    assert_eq!(sizes_by_name(&pp, &["o", "m", "p"]), vec![4, 9, 16]);
    assert!(validate_presheaf(&pp).is_empty());
}

#[test]
fn tensors() {
    let ws = Workspace::new();
    let base = catalog::cat_base(&ws);
    let y2 = catalog::two(&ws, &base);
    let (t0, legs0) = tensor(&ws, &y2, 0).unwrap();
    assert!(t0.is_empty() && legs0.is_empty());
    let (t1, legs1) = tensor(&ws, &y2, 1).unwrap();
    assert!(legs1[0].is_iso());
    assert_eq!(t1.sizes(), y2.sizes());
    let (t3, _) = tensor(&ws, &y2, 3).unwrap();
    assert_eq!(sizes_by_name(&t3, &["o", "m", "p"]), vec![6, 9, 12]);
    assert!(validate_presheaf(&t3).is_empty());
}

#[test]
fn cat_condition_shapes() {
    let ws = Workspace::new();
    let model = catalog::cat_model(&ws);
    assert!(model.validate().is_empty());
    let o = model.base.object_named("o").unwrap();
    let m = model.base.object_named("m").unwrap();
    let sizes: Vec<usize> = model.conditions.iter().map(|c| c.morphism.source().set(o).len()).collect();
    assert_eq!(sizes, vec![3, 2, 2, 4]);
    let lu = &model.conditions[1].morphism;
    assert_eq!((lu.source().set(m).len(), lu.target().set(m).len()), (4, 3));
    let gp = &model.conditions[0].morphism;
    assert_eq!(sizes_by_name(gp.target(), &["o", "m", "p"]), vec![3, 6, 1]);
}

#[test]
fn orthogonality_against_isos_and_products() {
    let ws = Workspace::new();
    let model = catalog::setset_model(&ws);
    let base = model.base.clone();
    let g = &model.conditions[0].morphism;
    let x =
        Presheaf::from_named_tables(&ws, base.clone(), &[("s_l", vec!["a", "b"]), ("s_r", vec!["c"])], &[]).unwrap();
    assert!(check_orthogonal(&x, &PsMorphism::identity(g.source())).unwrap().is_orthogonal());
    let verdict = check_orthogonal(&x, g).unwrap();
    assert_eq!(verdict.witness_liftings(), Some(0));

    let pairs = Presheaf::from_named_tables(
        &ws,
        base.clone(),
        &[("s_l", vec!["a", "b"]), ("s_r", vec!["c"]), ("p", vec!["ac", "bc"])],
        &[("l", vec![("ac", "a"), ("bc", "b")]), ("r", vec![("ac", "c"), ("bc", "c")])],
    )
    .unwrap();
    assert!(check_orthogonal(&pairs, g).unwrap().is_orthogonal());

    let doubled = Presheaf::from_named_tables(
        &ws,
        base,
        &[("s_l", vec!["a"]), ("s_r", vec!["c"]), ("p", vec!["x", "y"])],
        &[("l", vec![("x", "a"), ("y", "a")]), ("r", vec![("x", "c"), ("y", "c")])],
    )
    .unwrap();
    assert_eq!(check_orthogonal(&doubled, g).unwrap().witness_liftings(), Some(2));
}

#[test]
fn base_mismatch_is_reported() {
    let ws = Workspace::new();
    let a = catalog::setset_base(&ws);
    let b = catalog::cat_base(&ws);
    let x = Presheaf::terminal(&ws, a);
    let y = Presheaf::terminal(&ws, b);
    assert_eq!(enumerate_nat_trans(&x, &y).err(), Some(Error::BaseMismatch));
    assert_eq!(product(&ws, &x, &y).err(), Some(Error::BaseMismatch));
}
