//! Interactive game sessions: a configuration, the moves that led to it, and
//! undo. The HTTP service and the CLI drive the same type.

use std::path::Path;
use std::sync::Arc;

use kanbench_core::reflection::{
    apply_move, enumerate_moves, GameConfig, Move, MoveFilter, MoveKind, MoveRecord, Trace, TraceAction,
};
use kanbench_core::Workspace;
use serde::Serialize;

use crate::doc::{ModelDoc, MorphismBody, MorphismDoc, TraceDoc};
use crate::error::{Result, WorkbenchError};
use crate::export::{morphism_body, trace_doc};
use crate::load::Loader;

pub const PAGE_SIZE: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    Open,
    Won,
}

pub struct Session {
    pub id: String,
    ws: Workspace,
    model_doc: ModelDoc,
    current: GameConfig,
    history: Vec<GameConfig>,
    trace: Trace,
    /// Moves of the current configuration with their ids, once enumerated.
    listed: Option<Vec<(String, Move)>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SizeRow {
    pub object: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct StateView {
    pub session_id: String,
    pub status: Status,
    pub won: bool,
    pub digest: String,
    pub moves_played: usize,
    pub can_undo: bool,
    pub conditions: Vec<String>,
    pub sizes: Vec<SizeRow>,
    pub configuration: MorphismBody,
}

#[derive(Clone, Debug, Serialize)]
pub struct MoveView {
    pub id: String,
    pub kind: String,
    pub condition: usize,
    pub condition_name: String,
    pub description: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct MovePage {
    pub page: usize,
    pub page_size: usize,
    pub total: usize,
    pub moves: Vec<MoveView>,
}

/// Which moves to list.
#[derive(Clone, Debug, Default)]
pub struct MoveQuery {
    pub kind: Option<MoveKind>,
    pub condition: Option<usize>,
    pub page: usize,
    /// Also list existence moves whose map already lifts.
    pub include_unproductive: bool,
}

impl Session {
    /// Loads a model and a configuration morphism over the same base; base
    /// references resolve against the directory of each document.
    pub fn new(
        id: String,
        model: &ModelDoc,
        model_dir: &Path,
        config: &MorphismDoc,
        config_dir: &Path,
    ) -> Result<Session> {
        let ws = Workspace::new();
        let (model_doc, current) = {
            let mut loader = Loader::new(&ws);
            let model_doc = loader.resolve_model(model, model_dir)?;
            if loader.resolve_base(&config.base, config_dir)? != model_doc.base {
                return Err(WorkbenchError::Validation(vec![
                    "the configuration lives over a different base than the model".into(),
                ]));
            }
            let model = Arc::new(loader.model(&model_doc, model_dir)?);
            let m = loader.morphism(&model.base, &config.body())?;
            (model_doc, GameConfig::new(model, m)?)
        };
        let trace = Trace::new(current.clone());
        Ok(Session { id, ws, model_doc, current, history: Vec::new(), trace, listed: None })
    }

    pub fn current(&self) -> &GameConfig {
        &self.current
    }

    pub fn state(&self) -> StateView {
        let m = &self.current.m;
        let base = m.source().base();
        let won = self.current.is_won();
        StateView {
            session_id: self.id.clone(),
            status: if won { Status::Won } else { Status::Open },
            won,
            digest: self.current.digest(),
            moves_played: self.history.len(),
            can_undo: !self.history.is_empty(),
            conditions: self.current.model.conditions.iter().map(|c| c.name.clone()).collect(),
            sizes: base
                .objects()
                .iter()
                .map(|c| SizeRow {
                    object: base.name(c),
                    source: m.source().set(c).len(),
                    target: m.target().set(c).len(),
                })
                .collect(),
            configuration: morphism_body(m),
        }
    }

    fn listed(&mut self) -> Result<&[(String, Move)]> {
        if self.listed.is_none() {
            let moves: Vec<Move> =
                enumerate_moves(&self.current, &MoveFilter::default()).collect::<kanbench_core::Result<_>>()?;
            let cfg = &self.current;
            self.listed = Some(moves.into_iter().map(|mv| (mv.id(cfg), mv)).collect());
        }
        Ok(self.listed.as_deref().unwrap())
    }

    pub fn moves(&mut self, q: &MoveQuery) -> Result<MovePage> {
        if let Some(c) = q.condition {
            if c >= self.current.model.conditions.len() {
                return Err(WorkbenchError::BadRequest(format!("no condition with index {c}")));
            }
        }
        let cfg = self.current.clone();
        let all = self.listed()?;
        let mut matching = Vec::new();
        for (id, mv) in all {
            if q.kind.is_some_and(|k| k != mv.kind()) || q.condition.is_some_and(|c| c != mv.condition()) {
                continue;
            }
            if !q.include_unproductive && !kanbench_core::reflection::is_productive(&cfg, mv)? {
                continue;
            }
            matching.push((id, mv));
        }
        let total = matching.len();
        let moves = matching
            .into_iter()
            .skip(q.page * PAGE_SIZE)
            .take(PAGE_SIZE)
            .map(|(id, mv)| MoveView {
                id: id.clone(),
                kind: mv.kind().name().to_string(),
                condition: mv.condition(),
                condition_name: cfg.model.conditions[mv.condition()].name.clone(),
                description: mv.describe(&cfg),
            })
            .collect();
        Ok(MovePage { page: q.page, page_size: PAGE_SIZE, total, moves })
    }

    /// Applies the move with the given id in the current configuration.
    pub fn apply(&mut self, move_id: &str) -> Result<StateView> {
        let mv =
            self.listed()?.iter().find(|(id, _)| id == move_id).map(|(_, mv)| mv.clone()).ok_or_else(|| {
                WorkbenchError::StaleMove(format!("no move `{move_id}` in the current configuration"))
            })?;
        let applied = apply_move(&self.ws, &self.current, &mv)?;
        let next = applied.config;
        self.trace.push(TraceAction::Move(MoveRecord::of(&mv)), &next);
        self.history.push(std::mem::replace(&mut self.current, next));
        self.listed = None;
        Ok(self.state())
    }

    pub fn undo(&mut self) -> Result<StateView> {
        let prev = self.history.pop().ok_or(WorkbenchError::NothingToUndo)?;
        self.current = prev;
        self.trace.steps.pop();
        self.listed = None;
        Ok(self.state())
    }

    pub fn trace(&self) -> &Trace {
        &self.trace
    }

    pub fn trace_doc(&self) -> TraceDoc {
        trace_doc(&self.trace, self.model_doc.clone())
    }
}
