//! Sufficient criteria for left adjointness and cartesian closure.
//!
//! A Kan model `F: C -> psh(D)` induces `F': psh(C) -> psh(D)`. If the
//! reflection into the target model sends `F'(g)` to an isomorphism for every
//! source condition `g`, the induced functor between models is a left adjoint.
//! The converse does not hold, so a failed criterion says nothing about
//! whether a right adjoint exists.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::finbase::Workspace;
use crate::kan::{lan_morphism, product_kan_model, KanModel};
use crate::presheaf::{check_orthogonal, PresheafModel, PsMorphism};
use crate::reflection::{auto_play, Budget, GameConfig, PlayOutcome, Strategy, Trace};

#[derive(Clone, Debug)]
pub enum VerdictStatus {
    IsoAlready,
    WonByGame(Trace),
    /// The reflected image is not iso: either the target has no conditions,
    /// or play reached a configuration with both endpoints local.
    DecidedNotIso,
    Inconclusive(Trace),
}

impl VerdictStatus {
    pub fn name(&self) -> &'static str {
        match self {
            VerdictStatus::IsoAlready => "IsoAlready",
            VerdictStatus::WonByGame(_) => "WonByGame",
            VerdictStatus::DecidedNotIso => "DecidedNotIso",
            VerdictStatus::Inconclusive(_) => "Inconclusive",
        }
    }

    pub fn trace(&self) -> Option<&Trace> {
        match self {
            VerdictStatus::WonByGame(t) | VerdictStatus::Inconclusive(t) => Some(t),
            _ => None,
        }
    }
}

/// Sizes of both sides of `F'(g)` at one object of the target base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cardinality {
    pub object: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug)]
pub struct ConditionVerdict {
    pub condition_index: usize,
    pub condition_name: String,
    pub lan_image: PsMorphism,
    pub status: VerdictStatus,
    pub cardinalities: Vec<Cardinality>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Summary {
    CriterionHolds,
    CriterionFails,
    Inconclusive,
}

impl Summary {
    pub fn name(self) -> &'static str {
        match self {
            Summary::CriterionHolds => "CriterionHolds",
            Summary::CriterionFails => "CriterionFails",
            Summary::Inconclusive => "Inconclusive",
        }
    }

    /// Plain-language reading of the summary.
    pub fn meaning(self) -> &'static str {
        match self {
            Summary::CriterionHolds => "every condition is sent to an isomorphism: the functor is a left adjoint",
            Summary::CriterionFails => {
                "some condition is not sent to an isomorphism: the sufficient criterion does not apply, \
                 which does not mean the functor fails to be a left adjoint"
            }
            Summary::Inconclusive => "some condition could not be decided within the budget",
        }
    }

    fn of(verdicts: &[ConditionVerdict]) -> Summary {
        let statuses = || verdicts.iter().map(|v| &v.status);
        if statuses().any(|s| matches!(s, VerdictStatus::DecidedNotIso)) {
            Summary::CriterionFails
        } else if statuses().all(|s| matches!(s, VerdictStatus::IsoAlready | VerdictStatus::WonByGame(_))) {
            Summary::CriterionHolds
        } else {
            Summary::Inconclusive
        }
    }

    fn combine(parts: impl IntoIterator<Item = Summary>) -> Summary {
        let parts: Vec<_> = parts.into_iter().collect();
        if parts.contains(&Summary::CriterionFails) {
            Summary::CriterionFails
        } else if parts.iter().all(|s| *s == Summary::CriterionHolds) {
            Summary::CriterionHolds
        } else {
            Summary::Inconclusive
        }
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub verdicts: Vec<ConditionVerdict>,
    pub summary: Summary,
}

fn cardinalities(m: &PsMorphism) -> Vec<Cardinality> {
    let base = m.source().base();
    base.objects()
        .iter()
        .map(|c| Cardinality { object: base.name(c), source: m.source().set(c).len(), target: m.target().set(c).len() })
        .collect()
}

/// Both endpoints of `cfg` are orthogonal to every condition.
fn both_local(cfg: &GameConfig) -> Result<bool> {
    for c in &cfg.model.conditions {
        for z in [cfg.m.source(), cfg.m.target()] {
            if !check_orthogonal(z, &c.morphism)?.is_orthogonal() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Decides the status of one Lan image.
fn judge(
    ws: &Workspace,
    target: &Arc<PresheafModel>,
    image: &PsMorphism,
    strategy: &Strategy,
    budget: &Budget,
) -> Result<VerdictStatus> {
    if image.is_iso() {
        return Ok(VerdictStatus::IsoAlready);
    }
    if target.conditions.is_empty() {
        return Ok(VerdictStatus::DecidedNotIso);
    }
    let cfg = GameConfig::new(target.clone(), image.clone())?;
    let play = auto_play(ws, &cfg, strategy, budget)?;
    Ok(match play.outcome {
        PlayOutcome::Won(t) => VerdictStatus::WonByGame(t),
        PlayOutcome::Inconclusive(t) => VerdictStatus::Inconclusive(t),
        // Re-audited here rather than trusted from the strategy.
        PlayOutcome::Refuted(t) => {
            if both_local(&play.last)? && !play.last.is_won() {
                VerdictStatus::DecidedNotIso
            } else {
                VerdictStatus::Inconclusive(t)
            }
        }
    })
}

/// Checks the left-adjointness criterion for `f` between two models.
pub fn check_left_adjoint(
    ws: &Workspace,
    f: &KanModel,
    source: &PresheafModel,
    target: &Arc<PresheafModel>,
    strategy: &Strategy,
    budget: &Budget,
) -> Result<CriterionReport> {
    if f.source != source.base || f.target != target.base {
        return Err(Error::BaseMismatch);
    }
    let mut verdicts = Vec::new();
    for (k, cond) in source.conditions.iter().enumerate() {
        let (_, _, image) = lan_morphism(ws, f, &cond.morphism)?;
        let status = judge(ws, target, &image, strategy, budget)?;
        verdicts.push(ConditionVerdict {
            condition_index: k,
            condition_name: cond.name.clone(),
            cardinalities: cardinalities(&image),
            lan_image: image,
            status,
        });
    }
    let summary = Summary::of(&verdicts);
    Ok(CriterionReport { verdicts, summary })
}

#[derive(Clone, Debug)]
pub struct ClosureReport {
    /// One report per object `c`, for the functor `y(c) × −`.
    pub objects: Vec<(String, CriterionReport)>,
    pub summary: Summary,
}

/// Checks the cartesian-closure criterion: for every object `c`, the Kan
/// model `d ↦ y(c) × y(d)` passes [`check_left_adjoint`] with the model as
/// both source and target.
pub fn check_cartesian_closed(
    ws: &Workspace,
    model: &Arc<PresheafModel>,
    strategy: &Strategy,
    budget: &Budget,
) -> Result<ClosureReport> {
    let mut objects = Vec::new();
    for c in model.base.objects().iter() {
        let f = product_kan_model(ws, &model.base, c, None)?;
        let report = check_left_adjoint(ws, &f, model, model, strategy, budget)?;
        objects.push((model.base.name(c), report));
    }
    let summary = Summary::combine(objects.iter().map(|(_, r)| r.summary));
    Ok(ClosureReport { objects, summary })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn sizes(v: &ConditionVerdict, obj: &str) -> (usize, usize) {
        let c = v.cardinalities.iter().find(|c| c.object == obj).unwrap();
        (c.source, c.target)
    }

    #[test]
    fn ob_functor_holds_with_expected_bijections() {
        let ws = Workspace::new();
        let cat = catalog::cat_model(&ws);
        let set = Arc::new(catalog::set_model(&ws));
        let f = catalog::ob_functor(&ws, &cat, &set);
        let r = check_left_adjoint(&ws, &f, &cat, &set, &Strategy::default(), &Budget::default()).unwrap();
        assert_eq!(r.summary, Summary::CriterionHolds);
        let star = set.base.name(set.base.objects().get(0).unwrap());
        let got: Vec<_> = r.verdicts.iter().map(|v| sizes(v, &star)).collect();
        assert_eq!(got, vec![(3, 3), (2, 2), (2, 2), (4, 4)]);
        assert!(r.verdicts.iter().all(|v| matches!(v.status, VerdictStatus::IsoAlready)));
    }

    #[test]
    fn product_functor_fails_between_empty_and_singleton() {
        let ws = Workspace::new();
        let setset = catalog::setset_model(&ws);
        let set = Arc::new(catalog::set_model(&ws));
        let f = catalog::product_functor(&ws, &setset, &set);
        let r = check_left_adjoint(&ws, &f, &setset, &set, &Strategy::default(), &Budget::default()).unwrap();
        assert_eq!(r.summary, Summary::CriterionFails);
        assert!(matches!(r.verdicts[0].status, VerdictStatus::DecidedNotIso));
        let star = set.base.name(set.base.objects().get(0).unwrap());
        assert_eq!(sizes(&r.verdicts[0], &star), (0, 1));
        assert!(Summary::CriterionFails.meaning().contains("does not mean"));
    }

    #[test]
    fn mismatched_models_are_rejected() {
        let ws = Workspace::new();
        let setset = catalog::setset_model(&ws);
        let set = Arc::new(catalog::set_model(&ws));
        let f = catalog::product_functor(&ws, &setset, &set);
        let other = catalog::setset_model(&ws);
        let res = check_left_adjoint(&ws, &f, &other, &set, &Strategy::default(), &Budget::default());
        assert!(matches!(res, Err(Error::BaseMismatch)));
    }

    #[test]
    fn sets_are_cartesian_closed() {
        let ws = Workspace::new();
        let set = Arc::new(catalog::set_model(&ws));
        let r = check_cartesian_closed(&ws, &set, &Strategy::default(), &Budget::default()).unwrap();
        assert_eq!(r.summary, Summary::CriterionHolds);
        assert_eq!(r.objects.len(), 1);
        assert!(r.objects[0].1.verdicts.is_empty());
    }

    #[test]
    fn pairs_of_sets_are_cartesian_closed() {
        let ws = Workspace::new();
        let setset = Arc::new(catalog::setset_model(&ws));
        let r = check_cartesian_closed(&ws, &setset, &Strategy::default(), &Budget::default()).unwrap();
        for (obj, rep) in &r.objects {
            assert_eq!(rep.summary, Summary::CriterionHolds, "{obj}");
        }
        assert_eq!(r.summary, Summary::CriterionHolds);
    }

    #[test]
    fn summary_trichotomy() {
        assert_eq!(Summary::combine([Summary::CriterionHolds, Summary::Inconclusive]), Summary::Inconclusive);
        assert_eq!(Summary::combine([Summary::Inconclusive, Summary::CriterionFails]), Summary::CriterionFails);
        assert_eq!(Summary::combine([]), Summary::CriterionHolds);
    }
}
