//! Random small presheaves and morphisms over the bundled bases, for
//! property tests and benchmarks.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::Result;
use crate::finbase::Workspace;
use crate::fincat::FinCat;
use crate::presheaf::{enumerate_nat_trans, validate_presheaf, Presheaf, PsMorphism};

fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

fn tables(
    ws: &Workspace,
    base: &Arc<FinCat>,
    sets: &[(&str, Vec<String>)],
    actions: &[(&str, Vec<(String, String)>)],
) -> Result<Presheaf> {
    let sets: Vec<(&str, Vec<&str>)> = sets.iter().map(|(o, v)| (*o, v.iter().map(String::as_str).collect())).collect();
    let actions: Vec<(&str, Vec<(&str, &str)>)> =
        actions.iter().map(|(f, v)| (*f, v.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect())).collect();
    Presheaf::from_named_tables(ws, base.clone(), &sets, &actions)
}

/// A presheaf on a base whose generating morphisms satisfy no relations
/// (such as the terminal category or the base of pairs of sets): arbitrary
/// sets of size at most `max` and arbitrary generator actions.
pub fn free_presheaf<R: Rng>(ws: &Workspace, base: &Arc<FinCat>, max: usize, rng: &mut R) -> Result<Presheaf> {
    let objs: Vec<String> = base.objects().iter().map(|c| base.name(c)).collect();
    let mut sets: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for (i, o) in objs.iter().enumerate() {
        sets.insert(o.clone(), names(&format!("e{i}_"), rng.gen_range(0..=max)));
    }
    // X(g): X(tgt g) -> X(src g) needs X(src g) inhabited unless X(tgt g) is empty.
    let gens = base.generators();
    loop {
        let stuck = gens
            .iter()
            .find(|&&g| sets[&base.name(base.src(g))].is_empty() && !sets[&base.name(base.tgt(g))].is_empty());
        match stuck {
            Some(&g) => {
                sets.insert(base.name(base.tgt(g)), vec![]);
            }
            None => break,
        }
    }
    let gen_names: Vec<String> = gens.iter().map(|g| base.name(*g)).collect();
    let mut actions = Vec::new();
    for (&g, name) in gens.iter().zip(&gen_names) {
        let from = &sets[&base.name(base.tgt(g))];
        let to = &sets[&base.name(base.src(g))];
        let table = from.iter().map(|a| (a.clone(), to.choose(rng).unwrap().clone())).collect();
        actions.push((name.as_str(), table));
    }
    let sets: Vec<(&str, Vec<String>)> = objs.iter().map(|o| (o.as_str(), sets[o].clone())).collect();
    tables(ws, base, &sets, &actions)
}

/// A presheaf on the base of small categories with at most `max` objects,
/// arrows and composable pairs: identities are a section of both `src` and
/// `tgt`, and each pair has a composite with the right boundary.
pub fn category_presheaf<R: Rng>(ws: &Workspace, base: &Arc<FinCat>, max: usize, rng: &mut R) -> Result<Presheaf> {
    let n_o = rng.gen_range(0..=max);
    let n_m = if n_o == 0 { 0 } else { rng.gen_range(n_o..=max.max(n_o)) };
    let os = names("x", n_o);
    let ms = names("f", n_m);
    let mut perm: Vec<usize> = (0..n_m).collect();
    perm.shuffle(rng);
    let id: Vec<usize> = perm[..n_o].to_vec();
    let mut src = vec![0; n_m];
    let mut tgt = vec![0; n_m];
    for a in 0..n_m {
        if let Some(x) = id.iter().position(|&i| i == a) {
            src[a] = x;
            tgt[a] = x;
        } else {
            src[a] = rng.gen_range(0..n_o);
            tgt[a] = rng.gen_range(0..n_o);
        }
    }
    let mut pairs: Vec<(usize, usize, usize)> = Vec::new();
    for _ in 0..rng.gen_range(0..=max) {
        let composable: Vec<(usize, usize)> =
            (0..n_m).flat_map(|l| (0..n_m).map(move |r| (l, r))).filter(|&(l, r)| tgt[l] == src[r]).collect();
        let Some(&(l, r)) = composable.choose(rng) else { break };
        let comps: Vec<usize> = (0..n_m).filter(|&c| src[c] == src[l] && tgt[c] == tgt[r]).collect();
        if let Some(&c) = comps.choose(rng) {
            pairs.push((l, r, c));
        }
    }
    let ps = names("q", pairs.len());
    let arrow_map = |f: &dyn Fn(usize) -> usize| -> Vec<(String, String)> {
        (0..n_m).map(|a| (ms[a].clone(), os[f(a)].clone())).collect()
    };
    let pair_map = |f: &dyn Fn(&(usize, usize, usize)) -> usize| -> Vec<(String, String)> {
        pairs.iter().enumerate().map(|(i, p)| (ps[i].clone(), ms[f(p)].clone())).collect()
    };
    let x = tables(
        ws,
        base,
        &[("o", os.clone()), ("m", ms.clone()), ("p", ps.clone())],
        &[
            ("src", arrow_map(&|a| src[a])),
            ("tgt", arrow_map(&|a| tgt[a])),
            ("id", (0..n_o).map(|x| (os[x].clone(), ms[id[x]].clone())).collect()),
            ("l", pair_map(&|p| p.0)),
            ("r", pair_map(&|p| p.1)),
            ("comp", pair_map(&|p| p.2)),
        ],
    )?;
    debug_assert!(validate_presheaf(&x).is_empty());
    Ok(x)
}

/// A uniformly chosen natural transformation `x -> y`, if there is one.
pub fn nat_trans<R: Rng>(x: &Presheaf, y: &Presheaf, rng: &mut R) -> Result<Option<PsMorphism>> {
    let all: Vec<PsMorphism> = enumerate_nat_trans(x, y)?.collect();
    Ok(all.choose(rng).cloned())
}
