//! One-step saturation: every missing lifting is adjoined and every pair of
//! distinct liftings is merged at once, by a single colimit.

use std::collections::BTreeMap;

use super::{equal_key_pairs, GameConfig};
use crate::error::Result;
use crate::finbase::{ElemId, Workspace};
use crate::presheaf::{enumerate_nat_trans, liftings, Diagram, Presheaf, PresheafModel, PsMorphism};

/// An existence instance `(g, f: A -> X)` or a uniqueness instance
/// `(g, h1, h2: B -> X)`, with the legs into the cocone vertex when one is
/// being factored through.
enum Instance {
    Exists { g: PsMorphism, f: PsMorphism, h: Option<PsMorphism> },
    Unique { h1: PsMorphism, h2: PsMorphism },
}

fn existence_instances(x: &Presheaf, model: &PresheafModel) -> Result<Vec<(PsMorphism, PsMorphism)>> {
    let mut out = Vec::new();
    for cond in &model.conditions {
        let g = &cond.morphism;
        for f in enumerate_nat_trans(g.source(), x)? {
            if liftings(g, &f)?.next().is_none() {
                out.push((g.clone(), f));
            }
        }
    }
    Ok(out)
}

fn uniqueness_instances(x: &Presheaf, model: &PresheafModel) -> Result<Vec<(PsMorphism, PsMorphism)>> {
    let mut out = Vec::new();
    for cond in &model.conditions {
        let g = &cond.morphism;
        let items =
            enumerate_nat_trans(g.target(), x)?.map(|h| Ok((g.then(&h)?.ranks(), h))).collect::<Result<Vec<_>>>()?;
        out.extend(equal_key_pairs(items));
    }
    Ok(out)
}

/// The diagram gluing every instance onto `x` (node 0).
fn instance_diagram(ws: &Workspace, x: &Presheaf, instances: &[Instance]) -> Result<Diagram> {
    let mut nodes = vec![x.clone()];
    let mut edges = Vec::new();
    for inst in instances {
        match inst {
            Instance::Exists { g, f, .. } => {
                let (a, b) = (nodes.len(), nodes.len() + 1);
                nodes.push(g.source().clone());
                nodes.push(g.target().clone());
                edges.push((a, 0, f.clone()));
                edges.push((a, b, g.clone()));
            }
            Instance::Unique { h1, h2 } => {
                let b = nodes.len();
                nodes.push(h1.source().clone());
                edges.push((b, 0, h1.clone()));
                edges.push((b, 0, h2.clone()));
            }
        }
    }
    Diagram::from_graph(ws, x.base().clone(), nodes, edges)
}

/// `X_{i+1}` and `ε_i: X_i -> X_{i+1}`; `ε_i` is an identity exactly when
/// `x` is orthogonal to every condition.
pub fn saturation_step(ws: &Workspace, x: &Presheaf, model: &PresheafModel) -> Result<(Presheaf, PsMorphism)> {
    let mut instances: Vec<Instance> =
        existence_instances(x, model)?.into_iter().map(|(g, f)| Instance::Exists { g, f, h: None }).collect();
    instances.extend(uniqueness_instances(x, model)?.into_iter().map(|(h1, h2)| Instance::Unique { h1, h2 }));
    if instances.is_empty() {
        return Ok((x.clone(), PsMorphism::identity(x)));
    }
    let d = instance_diagram(ws, x, &instances)?;
    let colim = d.colimit(ws)?;
    let node0 = *d.nodes.keys().next().unwrap();
    Ok((colim.apex.clone(), colim.coprojections[&node0].clone()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReflectStatus {
    Converged,
    BudgetExhausted,
}

#[derive(Clone, Debug)]
pub struct ReflectOutcome {
    pub status: ReflectStatus,
    pub result: Presheaf,
    /// Composite of the step morphisms, `X -> result`.
    pub unit: PsMorphism,
    pub steps_used: usize,
}

/// Iterates [`saturation_step`] until it stops changing the presheaf, for at
/// most `max_steps` productive steps; stops early once the presheaf grows
/// past `max_elements`.
pub fn reflect(
    ws: &Workspace,
    x: &Presheaf,
    model: &PresheafModel,
    max_steps: usize,
    max_elements: Option<usize>,
) -> Result<ReflectOutcome> {
    let mut cur = x.clone();
    let mut unit = PsMorphism::identity(x);
    let mut steps_used = 0;
    loop {
        if max_elements.is_some_and(|cap| cur.total_size() > cap) {
            break;
        }
        let (next, eps) = saturation_step(ws, &cur, model)?;
        if eps == PsMorphism::identity(&cur) {
            return Ok(ReflectOutcome { status: ReflectStatus::Converged, result: cur, unit, steps_used });
        }
        if steps_used == max_steps {
            break;
        }
        unit = unit.then(&eps)?;
        cur = next;
        steps_used += 1;
    }
    Ok(ReflectOutcome { status: ReflectStatus::BudgetExhausted, result: cur, unit, steps_used })
}

/// Outcome of saturating one side of a configuration.
#[derive(Clone, Debug)]
pub enum SideStep {
    /// That side is already orthogonal to every condition.
    Converged,
    /// Instances exist but none can be played yet (domain side only: the
    /// codomain lacks the liftings needed to factor).
    Blocked,
    Stepped {
        config: GameConfig,
        map: PsMorphism,
    },
}

/// Saturates `Y` and postcomposes `m` with `ε: Y -> Y'`.
pub fn saturate_codomain(ws: &Workspace, cfg: &GameConfig) -> Result<SideStep> {
    let y = cfg.m.target();
    let (_, eps) = saturation_step(ws, y, &cfg.model)?;
    if eps == PsMorphism::identity(y) {
        return Ok(SideStep::Converged);
    }
    let m = cfg.m.then(&eps)?;
    Ok(SideStep::Stepped { config: GameConfig { model: cfg.model.clone(), m }, map: eps })
}

/// Saturates `X` with every instance the codomain can accommodate: missing
/// liftings `f` for which `m ∘ f` lifts in `Y`, and pairs `h1 ≠ h2` with
/// `m ∘ h1 = m ∘ h2`; `m` is factored through the resulting colimit.
pub fn saturate_domain(ws: &Workspace, cfg: &GameConfig) -> Result<SideStep> {
    let (x, m) = (cfg.m.source(), &cfg.m);
    let exists = existence_instances(x, &cfg.model)?;
    let unique = uniqueness_instances(x, &cfg.model)?;
    if exists.is_empty() && unique.is_empty() {
        return Ok(SideStep::Converged);
    }
    let mut instances = Vec::new();
    for (g, f) in exists {
        if let Some(h) = liftings(&g, &f.then(m)?)?.next() {
            instances.push(Instance::Exists { g, f, h: Some(h) });
        }
    }
    for (h1, h2) in unique {
        if h1.then(m)? == h2.then(m)? {
            instances.push(Instance::Unique { h1, h2 });
        }
    }
    if instances.is_empty() {
        return Ok(SideStep::Blocked);
    }
    let d = instance_diagram(ws, x, &instances)?;
    let colim = d.colimit(ws)?;
    let ids: Vec<ElemId> = d.nodes.keys().copied().collect();
    let mut legs = BTreeMap::from([(ids[0], m.clone())]);
    let mut k = 1;
    for inst in &instances {
        match inst {
            Instance::Exists { f, h, .. } => {
                legs.insert(ids[k], f.then(m)?);
                legs.insert(ids[k + 1], h.clone().expect("factored instance"));
                k += 2;
            }
            Instance::Unique { h1, .. } => {
                legs.insert(ids[k], h1.then(m)?);
                k += 1;
            }
        }
    }
    let m2 = colim.factor_cocone(&legs)?;
    let eps = colim.coprojections[&ids[0]].clone();
    Ok(SideStep::Stepped { config: GameConfig { model: cfg.model.clone(), m: m2 }, map: eps })
}
