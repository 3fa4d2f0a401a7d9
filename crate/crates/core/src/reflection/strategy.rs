//! Automated play.

use std::collections::BTreeSet;

use super::saturation::SideStep;
use super::trace::{MoveRecord, Trace, TraceAction};
use super::{
    apply_move, check_move, is_productive, moves_for, saturate_codomain, saturate_domain, GameConfig, MoveKind,
};
use crate::error::{Error, Result};
use crate::finbase::Workspace;
use crate::presheaf::PsMorphism;

/// Order of the two sides in exhaustive play.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Schedule {
    /// Saturate the codomain until it converges, then the domain.
    #[default]
    CodomainFirst,
    /// Alternate one codomain step with one domain step.
    Interleaved,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreedyOptions {
    /// Kinds played each round, in this order.
    pub kinds: Vec<MoveKind>,
    /// Conditions to play with; all when `None`.
    pub conditions: Option<Vec<usize>>,
    /// Skip existence moves whose `f` already lifts along `g`.
    pub productive_only: bool,
}

impl GreedyOptions {
    pub const DEFAULT_ORDER: [MoveKind; 4] = [MoveKind::DomU, MoveKind::CodU, MoveKind::DomE, MoveKind::CodE];

    pub fn only(kind: MoveKind, condition: usize) -> GreedyOptions {
        GreedyOptions { kinds: vec![kind], conditions: Some(vec![condition]), productive_only: true }
    }

    fn unrestricted(&self) -> bool {
        self.conditions.is_none() && MoveKind::ALL.iter().all(|k| self.kinds.contains(k))
    }
}

impl Default for GreedyOptions {
    fn default() -> Self {
        GreedyOptions { kinds: Self::DEFAULT_ORDER.to_vec(), conditions: None, productive_only: true }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Strategy {
    Exhaustive(Schedule),
    Greedy(GreedyOptions),
}

impl Default for Strategy {
    fn default() -> Self {
        Strategy::Greedy(GreedyOptions::default())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Greedy rounds or saturation steps.
    pub rounds: usize,
    /// Give up once `|X| + |Y|` exceeds this.
    pub max_elements: Option<usize>,
}

impl Budget {
    pub fn rounds(rounds: usize) -> Budget {
        Budget { rounds, max_elements: None }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget { rounds: 100, max_elements: None }
    }
}

#[derive(Clone, Debug)]
pub enum PlayOutcome {
    /// A configuration with `m` iso was reached.
    Won(Trace),
    /// Budget exhausted, or the strategy cannot make further progress.
    Inconclusive(Trace),
    /// Both sides are orthogonal to every condition and `m` is not iso, so
    /// no sequence of moves wins.
    Refuted(Trace),
}

/// The outcome together with the configuration play stopped at.
#[derive(Clone, Debug)]
pub struct Play {
    pub outcome: PlayOutcome,
    pub last: GameConfig,
}

impl Play {
    pub fn trace(&self) -> &Trace {
        self.outcome.trace()
    }

    pub fn is_won(&self) -> bool {
        self.outcome.is_won()
    }
}

impl PlayOutcome {
    pub fn trace(&self) -> &Trace {
        match self {
            PlayOutcome::Won(t) | PlayOutcome::Inconclusive(t) | PlayOutcome::Refuted(t) => t,
        }
    }

    pub fn is_won(&self) -> bool {
        matches!(self, PlayOutcome::Won(_))
    }
}

fn too_big(cfg: &GameConfig, budget: &Budget) -> bool {
    budget.max_elements.is_some_and(|cap| cfg.m.source().total_size() + cfg.m.target().total_size() > cap)
}

/// Plays from `cfg` until won, refuted or out of budget.
pub fn auto_play(ws: &Workspace, cfg: &GameConfig, strategy: &Strategy, budget: &Budget) -> Result<Play> {
    match strategy {
        Strategy::Greedy(opts) => greedy(ws, cfg, opts, budget),
        Strategy::Exhaustive(schedule) => exhaustive(ws, cfg, *schedule, budget),
    }
}

enum Round {
    Won,
    Idle,
    Played,
    TooBig,
}

fn greedy(ws: &Workspace, cfg: &GameConfig, opts: &GreedyOptions, budget: &Budget) -> Result<Play> {
    let mut trace = Trace::new(cfg.clone());
    let mut cur = cfg.clone();
    if cur.is_won() {
        return Ok(Play { outcome: PlayOutcome::Won(trace), last: cur });
    }
    let conditions: Vec<usize> = match &opts.conditions {
        Some(cs) => cs.clone(),
        None => (0..cur.model.conditions.len()).collect(),
    };
    let mut seen = BTreeSet::from([cur.digest()]);
    for _ in 0..budget.rounds {
        match greedy_round(ws, &mut cur, &mut trace, opts, &conditions, budget)? {
            Round::Won => return Ok(Play { outcome: PlayOutcome::Won(trace), last: cur }),
            Round::TooBig => return Ok(Play { outcome: PlayOutcome::Inconclusive(trace), last: cur }),
            Round::Idle if opts.unrestricted() => return Ok(Play { outcome: PlayOutcome::Refuted(trace), last: cur }),
            Round::Idle => return Ok(Play { outcome: PlayOutcome::Inconclusive(trace), last: cur }),
            Round::Played => {
                if !seen.insert(cur.digest()) {
                    return Ok(Play { outcome: PlayOutcome::Inconclusive(trace), last: cur });
                }
            }
        }
    }
    Ok(Play { outcome: PlayOutcome::Inconclusive(trace), last: cur })
}

/// One round: for each kind, the moves enumerable at the start of its phase
/// are transported along the maps produced so far and applied when still
/// valid and productive.
fn greedy_round(
    ws: &Workspace,
    cur: &mut GameConfig,
    trace: &mut Trace,
    opts: &GreedyOptions,
    conditions: &[usize],
    budget: &Budget,
) -> Result<Round> {
    let mut played = false;
    for &kind in &opts.kinds {
        let mut moves = Vec::new();
        for &c in conditions {
            moves.extend(moves_for(cur, kind, c, opts.productive_only)?);
        }
        let mut dom = PsMorphism::identity(cur.m.source());
        let mut cod = PsMorphism::identity(cur.m.target());
        for mv in moves {
            let mv = mv.transport(&dom, &cod)?;
            match check_move(cur, &mv) {
                Ok(()) => {}
                Err(Error::StaleMove(_)) => continue,
                Err(e) => return Err(e),
            }
            if opts.productive_only && !is_productive(cur, &mv)? {
                continue;
            }
            let applied = apply_move(ws, cur, &mv)?;
            dom = dom.then(&applied.dom)?;
            cod = cod.then(&applied.cod)?;
            trace.push(TraceAction::Move(MoveRecord::of(&mv)), &applied.config);
            *cur = applied.config;
            played = true;
            if cur.is_won() {
                return Ok(Round::Won);
            }
            if too_big(cur, budget) {
                return Ok(Round::TooBig);
            }
        }
    }
    Ok(if played { Round::Played } else { Round::Idle })
}

fn exhaustive(ws: &Workspace, cfg: &GameConfig, schedule: Schedule, budget: &Budget) -> Result<Play> {
    let mut trace = Trace::new(cfg.clone());
    let mut cur = cfg.clone();
    if cur.is_won() {
        return Ok(Play { outcome: PlayOutcome::Won(trace), last: cur });
    }
    let mut cod_done = false;
    let mut dom_turn = false;
    let mut rounds = 0;
    while rounds < budget.rounds {
        if too_big(&cur, budget) {
            return Ok(Play { outcome: PlayOutcome::Inconclusive(trace), last: cur });
        }
        let play_domain = match schedule {
            Schedule::CodomainFirst => cod_done,
            Schedule::Interleaved => dom_turn || cod_done,
        };
        if play_domain {
            match saturate_domain(ws, &cur)? {
                SideStep::Converged if cod_done => {
                    let outcome = if cur.is_won() { PlayOutcome::Won(trace) } else { PlayOutcome::Refuted(trace) };
                    return Ok(Play { outcome, last: cur });
                }
                SideStep::Converged | SideStep::Blocked => {
                    if cod_done {
                        return Ok(Play { outcome: PlayOutcome::Inconclusive(trace), last: cur });
                    }
                }
                SideStep::Stepped { config, .. } => {
                    trace.push(TraceAction::SaturateDomain, &config);
                    cur = config;
                    rounds += 1;
                }
            }
            dom_turn = false;
        } else {
            match saturate_codomain(ws, &cur)? {
                SideStep::Stepped { config, .. } => {
                    trace.push(TraceAction::SaturateCodomain, &config);
                    cur = config;
                    rounds += 1;
                }
                _ => cod_done = true,
            }
            dom_turn = true;
        }
        if cur.is_won() {
            return Ok(Play { outcome: PlayOutcome::Won(trace), last: cur });
        }
    }
    Ok(Play { outcome: PlayOutcome::Inconclusive(trace), last: cur })
}
