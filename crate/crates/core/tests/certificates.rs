//! Lan images over the small-categories model that the reflection does not
//! invert, certified by local objects built as nerves of finite categories:
//! if `m` were inverted, every local `Z` would see `Nat(m, Z)` as a bijection.

use std::sync::Arc;

use kanbench_core::fincat::{yoneda, GenArrow};
use kanbench_core::kan::lan_morphism;
use kanbench_core::presheaf::{check_orthogonal, enumerate_nat_trans, product};
use kanbench_core::{catalog, FinCat, Presheaf, PresheafModel, Workspace};

fn arrow(n: &str, s: &str, t: &str) -> GenArrow {
    GenArrow { name: n.into(), source: s.into(), target: t.into() }
}

fn free_square(ws: &Workspace) -> FinCat {
    let objs: Vec<String> = ["00", "01", "10", "11"].iter().map(|s| s.to_string()).collect();
    let edges = [arrow("h0", "00", "10"), arrow("v1", "10", "11"), arrow("v0", "00", "01"), arrow("h1", "01", "11")];
    FinCat::free(ws, &objs, &edges).unwrap()
}

fn assert_local(z: &Presheaf, model: &PresheafModel) {
    for c in &model.conditions {
        assert!(check_orthogonal(z, &c.morphism).unwrap().is_orthogonal(), "{} fails on the nerve", c.name);
    }
}

#[test]
fn nerve_of_two_matches_the_bundled_presheaf() {
    let ws = Workspace::new();
    let model = catalog::cat_model(&ws);
    let objs = vec!["0".to_string(), "1".to_string()];
    let two = FinCat::free(&ws, &objs, &[arrow("a", "0", "1")]).unwrap();
    let n = catalog::nerve(&ws, &model.base, &two).unwrap();
    assert_eq!(n.sizes(), catalog::two(&ws, &model.base).sizes());
    assert_local(&n, &model);
}

#[test]
fn nerve_of_free_square_is_local() {
    let ws = Workspace::new();
    let model = catalog::cat_model(&ws);
    let z = catalog::nerve(&ws, &model.base, &free_square(&ws)).unwrap();
    // 4 identities, 4 edges, 2 composites; 18 composable pairs.
    assert_eq!(z.sizes(), vec![4, 10, 18]);
    assert_local(&z, &model);
}

/// `A^p × 2` has no composable pairs, so a map out of it may send the two
/// paths around a square of `2 × 2` to different composites; a map out of
/// `y(p) × 2` may not. A local object telling them apart shows the image of
/// the composite condition is not inverted by the reflection.
#[test]
fn composite_condition_image_is_not_inverted() {
    let ws = Workspace::new();
    let model = Arc::new(catalog::cat_model(&ws));
    let z = catalog::nerve(&ws, &model.base, &free_square(&ws)).unwrap();
    let y2 = catalog::two(&ws, &model.base);
    let g = &model.conditions[0].morphism;
    let (fa, _, _) = product(&ws, g.source(), &y2).unwrap();
    let (fb, _, _) = product(&ws, g.target(), &y2).unwrap();

    let f = catalog::times_two(&ws, &model);
    let (_, _, image) = lan_morphism(&ws, &f, g).unwrap();
    assert_eq!(image.source().sizes(), fa.sizes());
    assert_eq!(image.target().sizes(), fb.sizes());

    let from_a = enumerate_nat_trans(&fa, &z).unwrap().count();
    let from_b = enumerate_nat_trans(&fb, &z).unwrap().count();
    assert_eq!((from_a, from_b), (476, 260));
    assert_eq!(enumerate_nat_trans(image.source(), &z).unwrap().count(), from_a);
    assert_eq!(enumerate_nat_trans(image.target(), &z).unwrap().count(), from_b);
}

/// For the closure model at `o`, `y(o)` has no composable pairs, so the
/// images of all four conditions only see underlying graphs; two parallel
/// arrows separate them.
#[test]
fn closure_images_at_the_object_sort_are_not_inverted() {
    let ws = Workspace::new();
    let model = catalog::cat_model(&ws);
    let objs = vec!["0".to_string(), "1".to_string()];
    let pair = FinCat::free(&ws, &objs, &[arrow("a", "0", "1"), arrow("b", "0", "1")]).unwrap();
    let z = catalog::nerve(&ws, &model.base, &pair).unwrap();
    assert_local(&z, &model);
    let yo = yoneda(&model.base, model.base.object_named("o").unwrap()).unwrap();
    let mut counts = Vec::new();
    for c in &model.conditions {
        let (fa, _, _) = product(&ws, c.morphism.source(), &yo).unwrap();
        let (fb, _, _) = product(&ws, c.morphism.target(), &yo).unwrap();
        counts.push((enumerate_nat_trans(&fa, &z).unwrap().count(), enumerate_nat_trans(&fb, &z).unwrap().count()));
    }
    assert_eq!(counts, vec![(6, 10), (6, 4), (6, 4), (66, 34)]);
}
