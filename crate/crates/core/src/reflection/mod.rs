//! The game of reflection on a morphism `m: X -> Y` of presheaves, and the
//! saturation chain computing reflections into the orthogonal subcategory.

mod saturation;
mod strategy;
mod trace;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

pub use saturation::{
    reflect, saturate_codomain, saturate_domain, saturation_step, ReflectOutcome, ReflectStatus, SideStep,
};
pub use strategy::{auto_play, Budget, GreedyOptions, Play, PlayOutcome, Schedule, Strategy};
pub use trace::{replay, replay_step, MoveRecord, Trace, TraceAction, TraceStep};

use crate::digest::Hasher;
use crate::error::{Error, Result};
use crate::finbase::{ElemId, Workspace};
use crate::presheaf::{enumerate_nat_trans, liftings, pushout, validate_morphism, Diagram, PresheafModel, PsMorphism};

/// A position of the game: a morphism over the base of the target model.
#[derive(Clone, Debug)]
pub struct GameConfig {
    pub model: Arc<PresheafModel>,
    pub m: PsMorphism,
}

impl GameConfig {
    pub fn new(model: Arc<PresheafModel>, m: PsMorphism) -> Result<GameConfig> {
        if m.source().base() != &model.base {
            return Err(Error::BaseMismatch);
        }
        crate::error::check(validate_morphism(&m))?;
        Ok(GameConfig { model, m })
    }

    pub fn is_won(&self) -> bool {
        self.m.is_iso()
    }

    /// Digest of `m` with both endpoints, up to order-preserving relabeling.
    pub fn digest(&self) -> String {
        let mut h = Hasher::new("config");
        h.morphism(&self.m);
        h.finish()
    }

    fn condition(&self, k: usize) -> Result<&PsMorphism> {
        self.model
            .conditions
            .get(k)
            .map(|c| &c.morphism)
            .ok_or_else(|| Error::StaleMove(format!("no condition with index {k}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MoveKind {
    DomE,
    DomU,
    CodE,
    CodU,
}

impl MoveKind {
    pub const ALL: [MoveKind; 4] = [MoveKind::DomE, MoveKind::DomU, MoveKind::CodE, MoveKind::CodU];

    pub fn name(self) -> &'static str {
        match self {
            MoveKind::DomE => "DomE",
            MoveKind::DomU => "DomU",
            MoveKind::CodE => "CodE",
            MoveKind::CodU => "CodU",
        }
    }

    pub fn parse(s: &str) -> Option<MoveKind> {
        MoveKind::ALL.into_iter().find(|k| k.name().eq_ignore_ascii_case(s))
    }
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A move together with its witnesses, for the condition `g: A -> B` at
/// index `condition`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Move {
    /// `f: A -> X`, `h: B -> Y` with `h ∘ g = m ∘ f`.
    DomE { condition: usize, f: PsMorphism, h: PsMorphism },
    /// `h1 ≠ h2: B -> X` with `h1 ∘ g = h2 ∘ g` and `m ∘ h1 = m ∘ h2`.
    DomU { condition: usize, h1: PsMorphism, h2: PsMorphism },
    /// `f: A -> Y`.
    CodE { condition: usize, f: PsMorphism },
    /// `h1 ≠ h2: B -> Y` with `h1 ∘ g = h2 ∘ g`.
    CodU { condition: usize, h1: PsMorphism, h2: PsMorphism },
}

impl Move {
    pub fn kind(&self) -> MoveKind {
        match self {
            Move::DomE { .. } => MoveKind::DomE,
            Move::DomU { .. } => MoveKind::DomU,
            Move::CodE { .. } => MoveKind::CodE,
            Move::CodU { .. } => MoveKind::CodU,
        }
    }

    pub fn condition(&self) -> usize {
        match self {
            Move::DomE { condition, .. }
            | Move::DomU { condition, .. }
            | Move::CodE { condition, .. }
            | Move::CodU { condition, .. } => *condition,
        }
    }

    pub fn witnesses(&self) -> Vec<&PsMorphism> {
        match self {
            Move::DomE { f, h, .. } => vec![f, h],
            Move::DomU { h1, h2, .. } | Move::CodU { h1, h2, .. } => vec![h1, h2],
            Move::CodE { f, .. } => vec![f],
        }
    }

    /// Identifier of this move in this configuration; changes whenever the
    /// configuration does.
    pub fn id(&self, cfg: &GameConfig) -> String {
        let mut h = Hasher::new("move");
        h.bytes(cfg.digest().as_bytes());
        h.bytes(self.kind().name().as_bytes());
        h.num(self.condition());
        for w in self.witnesses() {
            h.ranks(&w.ranks());
        }
        h.finish()
    }

    /// Pushes the witnesses forward along `dom: X -> X'` and `cod: Y -> Y'`.
    pub fn transport(&self, dom: &PsMorphism, cod: &PsMorphism) -> Result<Move> {
        Ok(match self {
            Move::DomE { condition, f, h } => Move::DomE { condition: *condition, f: f.then(dom)?, h: h.then(cod)? },
            Move::DomU { condition, h1, h2 } => {
                Move::DomU { condition: *condition, h1: h1.then(dom)?, h2: h2.then(dom)? }
            }
            Move::CodE { condition, f } => Move::CodE { condition: *condition, f: f.then(cod)? },
            Move::CodU { condition, h1, h2 } => {
                Move::CodU { condition: *condition, h1: h1.then(cod)?, h2: h2.then(cod)? }
            }
        })
    }

    /// Human-readable rendering of the witnesses as element maps.
    pub fn describe(&self, cfg: &GameConfig) -> String {
        let g = &cfg.model.conditions[self.condition()];
        let mut parts = vec![format!("{} with {}", self.kind(), g.name)];
        let names = match self {
            Move::DomE { .. } => ["f", "h"],
            Move::CodE { .. } => ["f", ""],
            _ => ["h1", "h2"],
        };
        for (w, n) in self.witnesses().into_iter().zip(names) {
            parts.push(format!("{n} = {}", describe_morphism(w)));
        }
        parts.join("; ")
    }
}

/// `{a ↦ b, ...}` over all objects, by labels.
pub fn describe_morphism(w: &PsMorphism) -> String {
    let base = w.source().base();
    let mut items = Vec::new();
    for (c, f) in w.components() {
        for (x, y) in f.graph() {
            items.push(format!("{}:{} ↦ {}", base.name(*c), w.source().label(*x), w.target().label(*y)));
        }
    }
    format!("{{{}}}", items.join(", "))
}

/// Checks a move's side conditions against a configuration.
pub fn check_move(cfg: &GameConfig, mv: &Move) -> Result<()> {
    let g = cfg.condition(mv.condition())?;
    let (x, y) = (cfg.m.source(), cfg.m.target());
    let stale = |why: &str| Err(Error::StaleMove(format!("{} with condition {}: {why}", mv.kind(), mv.condition())));
    let ends = |w: &PsMorphism, s: &crate::presheaf::Presheaf, t: &crate::presheaf::Presheaf| {
        w.source() == s && w.target() == t
    };
    match mv {
        Move::DomE { f, h, .. } => {
            if !ends(f, g.source(), x) || !ends(h, g.target(), y) {
                return stale("witness boundaries do not match");
            }
            if g.then(h)? != f.then(&cfg.m)? {
                return stale("h ∘ g ≠ m ∘ f");
            }
        }
        Move::DomU { h1, h2, .. } => {
            if !ends(h1, g.target(), x) || !ends(h2, g.target(), x) {
                return stale("witness boundaries do not match");
            }
            if h1 == h2 {
                return stale("h1 = h2");
            }
            if g.then(h1)? != g.then(h2)? || h1.then(&cfg.m)? != h2.then(&cfg.m)? {
                return stale("witnesses do not agree");
            }
        }
        Move::CodE { f, .. } => {
            if !ends(f, g.source(), y) {
                return stale("witness boundaries do not match");
            }
        }
        Move::CodU { h1, h2, .. } => {
            if !ends(h1, g.target(), y) || !ends(h2, g.target(), y) {
                return stale("witness boundaries do not match");
            }
            if h1 == h2 {
                return stale("h1 = h2");
            }
            if g.then(h1)? != g.then(h2)? {
                return stale("h1 ∘ g ≠ h2 ∘ g");
            }
        }
    }
    Ok(())
}

/// Whether an existence move would add a missing lifting (as opposed to a
/// redundant copy of an existing one). Uniqueness moves always make progress.
pub fn is_productive(cfg: &GameConfig, mv: &Move) -> Result<bool> {
    let g = cfg.condition(mv.condition())?;
    Ok(match mv {
        Move::DomE { f, .. } | Move::CodE { f, .. } => liftings(g, f)?.next().is_none(),
        Move::DomU { h1, h2, .. } | Move::CodU { h1, h2, .. } => h1 != h2,
    })
}

/// Restricts move enumeration.
#[derive(Clone, Debug, Default)]
pub struct MoveFilter {
    pub kinds: Option<Vec<MoveKind>>,
    pub conditions: Option<Vec<usize>>,
    /// Only existence moves whose `f` has no lifting along `g`.
    pub productive_only: bool,
}

impl MoveFilter {
    pub fn kind(kind: MoveKind) -> MoveFilter {
        MoveFilter { kinds: Some(vec![kind]), ..Default::default() }
    }
}

/// Pairs `i < j` of morphisms with equal keys, in enumeration order.
fn equal_key_pairs<K: Ord>(items: Vec<(K, PsMorphism)>) -> Vec<(PsMorphism, PsMorphism)> {
    let mut groups: BTreeMap<K, Vec<(usize, PsMorphism)>> = BTreeMap::new();
    for (i, (k, h)) in items.into_iter().enumerate() {
        groups.entry(k).or_default().push((i, h));
    }
    let mut pairs: Vec<(usize, usize, PsMorphism, PsMorphism)> = Vec::new();
    for group in groups.into_values() {
        for a in 0..group.len() {
            for b in a + 1..group.len() {
                pairs.push((group[a].0, group[b].0, group[a].1.clone(), group[b].1.clone()));
            }
        }
    }
    pairs.sort_by_key(|p| (p.0, p.1));
    pairs.into_iter().map(|p| (p.2, p.3)).collect()
}

fn component_key(m: &PsMorphism) -> Vec<Vec<usize>> {
    m.ranks()
}

/// Moves of one kind for one condition.
pub fn moves_for(cfg: &GameConfig, kind: MoveKind, condition: usize, productive_only: bool) -> Result<Vec<Move>> {
    let g = cfg.condition(condition)?;
    let (a, b) = (g.source(), g.target());
    let (x, y, m) = (cfg.m.source(), cfg.m.target(), &cfg.m);
    let mut out = Vec::new();
    match kind {
        MoveKind::DomE => {
            for f in enumerate_nat_trans(a, x)? {
                if productive_only && liftings(g, &f)?.next().is_some() {
                    continue;
                }
                let fm = f.then(m)?;
                if productive_only {
                    if let Some(h) = liftings(g, &fm)?.next() {
                        out.push(Move::DomE { condition, f, h });
                    }
                } else {
                    for h in liftings(g, &fm)? {
                        out.push(Move::DomE { condition, f: f.clone(), h });
                    }
                }
            }
        }
        MoveKind::DomU => {
            let items = enumerate_nat_trans(b, x)?
                .map(|h| Ok(((component_key(&g.then(&h)?), component_key(&h.then(m)?)), h)))
                .collect::<Result<Vec<_>>>()?;
            for (h1, h2) in equal_key_pairs(items) {
                out.push(Move::DomU { condition, h1, h2 });
            }
        }
        MoveKind::CodE => {
            for f in enumerate_nat_trans(a, y)? {
                if productive_only && liftings(g, &f)?.next().is_some() {
                    continue;
                }
                out.push(Move::CodE { condition, f });
            }
        }
        MoveKind::CodU => {
            let items =
                enumerate_nat_trans(b, y)?.map(|h| Ok((component_key(&g.then(&h)?), h))).collect::<Result<Vec<_>>>()?;
            for (h1, h2) in equal_key_pairs(items) {
                out.push(Move::CodU { condition, h1, h2 });
            }
        }
    }
    Ok(out)
}

/// All moves passing the filter, grouped by kind, then condition.
pub fn enumerate_moves<'a>(cfg: &'a GameConfig, filter: &MoveFilter) -> impl Iterator<Item = Result<Move>> + 'a {
    let kinds = filter.kinds.clone().unwrap_or_else(|| MoveKind::ALL.to_vec());
    let conds = filter.conditions.clone().unwrap_or_else(|| (0..cfg.model.conditions.len()).collect());
    let productive = filter.productive_only;
    kinds.into_iter().flat_map(move |k| conds.clone().into_iter().map(move |c| (k, c))).flat_map(move |(k, c)| {
        match moves_for(cfg, k, c, productive) {
            Ok(v) => v.into_iter().map(Ok).collect::<Vec<_>>(),
            Err(e) => vec![Err(e)],
        }
    })
}

/// Result of applying a move: the new configuration and the maps from the
/// old endpoints to the new ones.
#[derive(Clone, Debug)]
pub struct Applied {
    pub config: GameConfig,
    pub dom: PsMorphism,
    pub cod: PsMorphism,
}

/// Coequalizes `h1, h2: B -> Z`, returning the quotient map and the colimit
/// for factoring.
fn coequalize(
    ws: &Workspace,
    h1: &PsMorphism,
    h2: &PsMorphism,
) -> Result<(PsMorphism, crate::presheaf::Colimit, [ElemId; 2])> {
    let d = Diagram::from_graph(
        ws,
        h1.source().base().clone(),
        vec![h1.source().clone(), h1.target().clone()],
        vec![(0, 1, h1.clone()), (0, 1, h2.clone())],
    )?;
    let colim = d.colimit(ws)?;
    let nodes: Vec<ElemId> = d.nodes.keys().copied().collect();
    let q = colim.coprojections[&nodes[1]].clone();
    Ok((q, colim, [nodes[0], nodes[1]]))
}

/// Applies a move, after checking its side conditions.
pub fn apply_move(ws: &Workspace, cfg: &GameConfig, mv: &Move) -> Result<Applied> {
    check_move(cfg, mv)?;
    let g = cfg.condition(mv.condition())?;
    let (x, y, m) = (cfg.m.source(), cfg.m.target(), &cfg.m);
    let (new_m, dom, cod) = match mv {
        Move::DomE { f, h, .. } => {
            let po = pushout(ws, f, g)?;
            let m2 = po.factor(m, h)?;
            (m2, po.left.clone(), PsMorphism::identity(y))
        }
        Move::DomU { h1, h2, .. } => {
            let (q, colim, [b, xn]) = coequalize(ws, h1, h2)?;
            let legs = BTreeMap::from([(b, h1.then(m)?), (xn, m.clone())]);
            (colim.factor_cocone(&legs)?, q, PsMorphism::identity(y))
        }
        Move::CodE { f, .. } => {
            let po = pushout(ws, f, g)?;
            (m.then(&po.left)?, PsMorphism::identity(x), po.left.clone())
        }
        Move::CodU { h1, h2, .. } => {
            let (q, _, _) = coequalize(ws, h1, h2)?;
            (m.then(&q)?, PsMorphism::identity(x), q)
        }
    };
    Ok(Applied { config: GameConfig { model: cfg.model.clone(), m: new_m }, dom, cod })
}
