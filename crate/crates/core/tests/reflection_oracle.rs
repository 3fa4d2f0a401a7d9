//! Reflection into pairs of sets, checked against the explicit description
//! `L(X) = (X(s_l), X(s_r), X(s_l) × X(s_r))`.

use std::collections::BTreeMap;
use std::sync::Arc;

use kanbench_core::catalog;
use kanbench_core::presheaf::check_orthogonal;
use kanbench_core::reflection::{
    apply_move, auto_play, enumerate_moves, reflect, replay, Budget, GameConfig, MoveFilter, ReflectStatus, Strategy,
};
use kanbench_core::sample::{free_presheaf, nat_trans};
use kanbench_core::{ElemId, Presheaf, PresheafModel, PsMorphism, Workspace};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

struct Sorts {
    sl: ElemId,
    sr: ElemId,
    p: ElemId,
    l: ElemId,
    r: ElemId,
}

fn sorts(model: &PresheafModel) -> Sorts {
    let b = &model.base;
    Sorts {
        sl: b.object_named("s_l").unwrap(),
        sr: b.object_named("s_r").unwrap(),
        p: b.object_named("p").unwrap(),
        l: b.morphism_named("l").unwrap(),
        r: b.morphism_named("r").unwrap(),
    }
}

/// How many pair elements sit over each `(a, b)`.
fn pair_counts(x: &Presheaf, s: &Sorts) -> BTreeMap<(ElemId, ElemId), usize> {
    let mut counts: BTreeMap<_, usize> = BTreeMap::new();
    for a in x.set(s.sl).iter() {
        for b in x.set(s.sr).iter() {
            counts.insert((a, b), 0);
        }
    }
    for q in x.set(s.p).iter() {
        *counts.get_mut(&(x.act(s.l, q), x.act(s.r, q))).unwrap() += 1;
    }
    counts
}

/// Brute force: `X` is local iff every pair has exactly one element over it.
fn locally_a_product(x: &Presheaf, s: &Sorts) -> bool {
    pair_counts(x, s).values().all(|&n| n == 1)
}

/// `L(m)` is iso iff `m` is bijective on both sorts.
fn inverted(m: &PsMorphism, s: &Sorts) -> bool {
    m.component(s.sl).is_bijection() && m.component(s.sr).is_bijection()
}

#[test]
fn oracle_detects_non_local_objects() {
    let ws = Workspace::new();
    let model = catalog::setset_model(&ws);
    let s = sorts(&model);
    let mut rng = StdRng::seed_from_u64(3);
    let mut disagreements = 0;
    let mut non_local = 0;
    for _ in 0..60 {
        let x = free_presheaf(&ws, &model.base, 3, &mut rng).unwrap();
        let local = check_orthogonal(&x, &model.conditions[0].morphism).unwrap().is_orthogonal();
        if local != locally_a_product(&x, &s) {
            disagreements += 1;
        }
        non_local += usize::from(!local);
    }
    assert_eq!(disagreements, 0);
    assert!(non_local > 20);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn reflect_builds_the_product(seed in any::<u64>()) {
        let ws = Workspace::new();
        let model = catalog::setset_model(&ws);
        let s = sorts(&model);
        let mut rng = StdRng::seed_from_u64(seed);
        let x = free_presheaf(&ws, &model.base, 3, &mut rng).unwrap();
        let out = reflect(&ws, &x, &model, 10, None).unwrap();
        prop_assert_eq!(out.status, ReflectStatus::Converged);
        let y = &out.result;
        prop_assert_eq!(y.set(s.p).len(), x.set(s.sl).len() * x.set(s.sr).len());
        prop_assert!(check_orthogonal(y, &model.conditions[0].morphism).unwrap().is_orthogonal());
        prop_assert!(locally_a_product(y, &s));
        prop_assert!(inverted(&out.unit, &s));
        let cfg = GameConfig::new(Arc::new(model), out.unit.clone()).unwrap();
        prop_assert!(auto_play(&ws, &cfg, &Strategy::default(), &Budget::default()).unwrap().is_won());
    }

    #[test]
    fn moves_preserve_inversion(seed in any::<u64>()) {
        let ws = Workspace::new();
        let model = Arc::new(catalog::setset_model(&ws));
        let s = sorts(&model);
        let mut rng = StdRng::seed_from_u64(seed);
        let x = free_presheaf(&ws, &model.base, 2, &mut rng).unwrap();
        let y = free_presheaf(&ws, &model.base, 2, &mut rng).unwrap();
        let Some(m) = nat_trans(&x, &y, &mut rng).unwrap() else { return Ok(()) };
        let mut cfg = GameConfig::new(model.clone(), m).unwrap();
        let expected = inverted(&cfg.m, &s);
        for _ in 0..6 {
            let moves: Vec<_> = enumerate_moves(&cfg, &MoveFilter::default()).collect::<Result<_, _>>().unwrap();
            for mv in &moves {
                let after = apply_move(&ws, &cfg, mv).unwrap();
                prop_assert_eq!(inverted(&after.config.m, &s), expected, "{:?}", mv.kind());
            }
            let Some(mv) = moves.choose(&mut rng) else { break };
            cfg = apply_move(&ws, &cfg, mv).unwrap().config;
        }
    }

    #[test]
    fn plays_replay_to_the_same_digest(seed in any::<u64>()) {
        let ws = Workspace::new();
        let model = Arc::new(catalog::setset_model(&ws));
        let s = sorts(&model);
        let mut rng = StdRng::seed_from_u64(seed);
        let x = free_presheaf(&ws, &model.base, 2, &mut rng).unwrap();
        let y = free_presheaf(&ws, &model.base, 2, &mut rng).unwrap();
        let Some(m) = nat_trans(&x, &y, &mut rng).unwrap() else { return Ok(()) };
        let cfg = GameConfig::new(model, m).unwrap();
        let play = auto_play(&ws, &cfg, &Strategy::default(), &Budget::default()).unwrap();
        prop_assert_eq!(play.is_won(), inverted(&cfg.m, &s));
        let first = replay(&Workspace::new(), play.trace()).unwrap();
        let second = replay(&Workspace::new(), play.trace()).unwrap();
        prop_assert_eq!(first.digest(), play.trace().final_digest());
        prop_assert_eq!(second.digest(), first.digest());
    }
}

#[test]
fn sampled_games_cover_both_outcomes() {
    let ws = Workspace::new();
    let model = Arc::new(catalog::setset_model(&ws));
    let mut rng = StdRng::seed_from_u64(11);
    let (mut won, mut lost, mut moves) = (0, 0, 0);
    for _ in 0..40 {
        let x = free_presheaf(&ws, &model.base, 2, &mut rng).unwrap();
        let y = free_presheaf(&ws, &model.base, 2, &mut rng).unwrap();
        let Some(m) = nat_trans(&x, &y, &mut rng).unwrap() else { continue };
        let cfg = GameConfig::new(model.clone(), m).unwrap();
        let play = auto_play(&ws, &cfg, &Strategy::default(), &Budget::default()).unwrap();
        moves += play.trace().moves();
        if play.is_won() {
            won += 1
        } else {
            lost += 1
        }
    }
    assert!(won >= 2 && lost >= 5 && moves >= 10, "{won} {lost} {moves}");
}
