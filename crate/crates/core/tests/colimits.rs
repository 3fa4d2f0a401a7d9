//! Pointwise colimits against a naive equivalence-closure oracle.

mod common;

use std::collections::{BTreeMap, BTreeSet};

use kanbench_core::presheaf::{coequalizer_ps, enumerate_nat_trans, validate_morphism, validate_presheaf, Diagram};
use kanbench_core::sample::nat_trans;
use kanbench_core::{ElemId, Presheaf, PsMorphism, Workspace};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Number of classes of the smallest equivalence on `(node, element)`
/// containing `x ~ e(x)` for every edge `e`, found by repeated relabeling.
fn closure_classes(nodes: &[Presheaf], edges: &[(usize, usize, PsMorphism)], c: ElemId) -> usize {
    let mut label: BTreeMap<(usize, ElemId), (usize, ElemId)> = BTreeMap::new();
    for (i, n) in nodes.iter().enumerate() {
        for x in n.set(c).iter() {
            label.insert((i, x), (i, x));
        }
    }
    loop {
        let mut changed = false;
        for (i, j, e) in edges {
            for x in nodes[*i].set(c).iter() {
                let (a, b) = ((*i, x), (*j, e.apply(c, x)));
                let low = label[&a].min(label[&b]);
                for k in [a, b] {
                    if label[&k] != low {
                        label.insert(k, low);
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    label.values().collect::<BTreeSet<_>>().len()
}

/// Up to three nodes; each later node is resampled a few times so that the
/// chosen earlier nodes map into it.
fn random_diagram(
    ws: &Workspace,
    b: &common::Base,
    rng: &mut StdRng,
) -> (Vec<Presheaf>, Vec<(usize, usize, PsMorphism)>) {
    let n = rng.gen_range(1..=3);
    let mut nodes: Vec<Presheaf> = Vec::new();
    let mut edges = Vec::new();
    for j in 0..n {
        let sources: Vec<usize> = (0..j).filter(|_| rng.gen_bool(0.7)).collect();
        let mut attempt = 0;
        let (node, incoming) = loop {
            let y = b.sample(ws, rng);
            let maps: Option<Vec<PsMorphism>> =
                sources.iter().map(|&i| nat_trans(&nodes[i], &y, rng).unwrap()).collect();
            attempt += 1;
            match maps {
                Some(ms) => break (y, sources.iter().copied().zip(ms).collect::<Vec<_>>()),
                None if attempt >= 20 => break (y, vec![]),
                None => {}
            }
        };
        nodes.push(node);
        edges.extend(incoming.into_iter().map(|(i, e)| (i, j, e)));
    }
    (nodes, edges)
}

fn counted_diagrams(seed: u64) -> usize {
    let ws = Workspace::new();
    let mut rng = StdRng::seed_from_u64(seed);
    let mut edges_seen = 0;
    for b in common::bases(&ws) {
        let (nodes, edges) = random_diagram(&ws, &b, &mut rng);
        edges_seen += edges.len();
        let d = Diagram::from_graph(&ws, b.base.clone(), nodes.clone(), edges.clone()).unwrap();
        let colim = d.colimit(&ws).unwrap();
        assert!(validate_presheaf(&colim.apex).is_empty());
        for c in b.base.objects().iter() {
            assert_eq!(colim.apex.set(c).len(), closure_classes(&nodes, &edges, c), "{} at {}", b.name, b.base.name(c));
        }
        for cp in colim.coprojections.values() {
            assert!(validate_morphism(cp).is_empty());
        }

        // Mediators: any h out of the apex is recovered from its legs, and
        // it is the only morphism with those legs.
        let z = b.sample(&ws, &mut rng);
        let Some(h) = nat_trans(&colim.apex, &z, &mut rng).unwrap() else { continue };
        let legs: BTreeMap<ElemId, PsMorphism> =
            colim.coprojections.iter().map(|(i, cp)| (*i, cp.then(&h).unwrap())).collect();
        assert_eq!(colim.factor_cocone(&legs).unwrap(), h);
        let agreeing = enumerate_nat_trans(&colim.apex, &z)
            .unwrap()
            .filter(|u| colim.coprojections.iter().all(|(i, cp)| cp.then(u).unwrap() == legs[i]))
            .count();
        assert_eq!(agreeing, 1);
    }
    edges_seen
}

#[test]
fn diagrams_have_edges() {
    let edges: usize = (0..20).map(counted_diagrams).sum();
    assert!(edges >= 20, "{edges}");
}

#[test]
fn coequalizers_match_the_oracle() {
    let ws = Workspace::new();
    let mut rng = StdRng::seed_from_u64(5);
    let mut nontrivial = 0;
    for _ in 0..30 {
        for b in common::bases(&ws) {
            let x = b.sample(&ws, &mut rng);
            let y = b.sample(&ws, &mut rng);
            let (Some(h1), Some(h2)) = (nat_trans(&x, &y, &mut rng).unwrap(), nat_trans(&x, &y, &mut rng).unwrap())
            else {
                continue;
            };
            let (q, proj) = coequalizer_ps(&ws, &h1, &h2).unwrap();
            assert_eq!(h1.then(&proj).unwrap(), h2.then(&proj).unwrap());
            // every x-element is glued to both of its images
            let edges = vec![(0, 1, h1.clone()), (0, 1, h2.clone())];
            for c in b.base.objects().iter() {
                let classes = closure_classes(&[x.clone(), y.clone()], &edges, c);
                assert_eq!(q.set(c).len(), classes, "{}", b.name);
            }
            nontrivial += usize::from(!proj.is_iso());
        }
    }
    assert!(nontrivial > 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn colimits_match_the_oracle(seed in any::<u64>()) {
        counted_diagrams(seed);
    }
}
