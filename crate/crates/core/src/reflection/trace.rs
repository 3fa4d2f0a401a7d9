//! Replayable records of play. Witnesses are stored as rank tables relative
//! to the configuration they were played in, so a trace can be replayed in a
//! fresh workspace.

use super::{apply_move, check_move, saturate_codomain, saturate_domain, GameConfig, Move, MoveKind, SideStep};
use crate::error::{Error, Result};
use crate::finbase::Workspace;
use crate::presheaf::{validate_morphism, Presheaf, PsMorphism};

/// A move with witnesses given as per-object rank tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveRecord {
    pub kind: MoveKind,
    pub condition: usize,
    pub witnesses: Vec<Vec<Vec<usize>>>,
}

impl MoveRecord {
    pub fn of(mv: &Move) -> MoveRecord {
        MoveRecord {
            kind: mv.kind(),
            condition: mv.condition(),
            witnesses: mv.witnesses().into_iter().map(PsMorphism::ranks).collect(),
        }
    }

    /// Rebuilds the move in `cfg`, checking every side condition.
    pub fn resolve(&self, cfg: &GameConfig) -> Result<Move> {
        let g = &cfg
            .model
            .conditions
            .get(self.condition)
            .ok_or_else(|| Error::StaleMove(format!("no condition with index {}", self.condition)))?
            .morphism;
        let (a, b) = (g.source(), g.target());
        let (x, y) = (cfg.m.source(), cfg.m.target());
        let shapes: Vec<(&Presheaf, &Presheaf)> = match self.kind {
            MoveKind::DomE => vec![(a, x), (b, y)],
            MoveKind::DomU => vec![(b, x), (b, x)],
            MoveKind::CodE => vec![(a, y)],
            MoveKind::CodU => vec![(b, y), (b, y)],
        };
        if shapes.len() != self.witnesses.len() {
            return Err(Error::StaleMove(format!("{} takes {} witnesses", self.kind, shapes.len())));
        }
        let mut ws = Vec::new();
        for ((s, t), ranks) in shapes.into_iter().zip(&self.witnesses) {
            ws.push(morphism_from_ranks(s, t, ranks)?);
        }
        let condition = self.condition;
        let mut it = ws.into_iter();
        let mut next = || it.next().unwrap();
        let mv = match self.kind {
            MoveKind::DomE => Move::DomE { condition, f: next(), h: next() },
            MoveKind::DomU => Move::DomU { condition, h1: next(), h2: next() },
            MoveKind::CodE => Move::CodE { condition, f: next() },
            MoveKind::CodU => Move::CodU { condition, h1: next(), h2: next() },
        };
        check_move(cfg, &mv)?;
        Ok(mv)
    }
}

fn morphism_from_ranks(s: &Presheaf, t: &Presheaf, ranks: &[Vec<usize>]) -> Result<PsMorphism> {
    let d_s = s.dense();
    let d_t = t.dense();
    let fits = ranks.len() == d_s.sets.len()
        && ranks
            .iter()
            .zip(d_s.sets.iter().zip(&d_t.sets))
            .all(|(row, (xs, ys))| row.len() == xs.len() && row.iter().all(|&r| r < ys.len()));
    if !fits {
        return Err(Error::StaleMove("witness table does not fit the configuration".into()));
    }
    let m = PsMorphism::from_ranks(s.clone(), t.clone(), ranks);
    if !validate_morphism(&m).is_empty() {
        return Err(Error::StaleMove("witness is not natural".into()));
    }
    Ok(m)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceAction {
    Move(MoveRecord),
    SaturateDomain,
    SaturateCodomain,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub action: TraceAction,
    /// Digest of the configuration after the step.
    pub digest: String,
}

#[derive(Clone, Debug)]
pub struct Trace {
    pub initial: GameConfig,
    pub steps: Vec<TraceStep>,
}

impl Trace {
    pub fn new(initial: GameConfig) -> Trace {
        Trace { initial, steps: Vec::new() }
    }

    pub fn push(&mut self, action: TraceAction, after: &GameConfig) {
        self.steps.push(TraceStep { action, digest: after.digest() });
    }

    pub fn moves(&self) -> usize {
        self.steps.iter().filter(|s| matches!(s.action, TraceAction::Move(_))).count()
    }

    pub fn final_digest(&self) -> String {
        self.steps.last().map(|s| s.digest.clone()).unwrap_or_else(|| self.initial.digest())
    }
}

/// Performs one recorded step.
pub fn replay_step(ws: &Workspace, cfg: &GameConfig, action: &TraceAction) -> Result<GameConfig> {
    Ok(match action {
        TraceAction::Move(rec) => apply_move(ws, cfg, &rec.resolve(cfg)?)?.config,
        TraceAction::SaturateDomain => match saturate_domain(ws, cfg)? {
            SideStep::Stepped { config, .. } => config,
            _ => cfg.clone(),
        },
        TraceAction::SaturateCodomain => match saturate_codomain(ws, cfg)? {
            SideStep::Stepped { config, .. } => config,
            _ => cfg.clone(),
        },
    })
}

/// Replays every step from the initial configuration, checking digests.
pub fn replay(ws: &Workspace, trace: &Trace) -> Result<GameConfig> {
    let mut cur = trace.initial.clone();
    for (i, step) in trace.steps.iter().enumerate() {
        cur = replay_step(ws, &cur, &step.action)?;
        let actual = cur.digest();
        if actual != step.digest {
            return Err(Error::ReplayMismatch { step: i, expected: step.digest.clone(), actual });
        }
    }
    Ok(cur)
}
