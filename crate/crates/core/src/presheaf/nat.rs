//! Enumeration of natural transformations by element-level backtracking.
//!
//! Components are chosen one element at a time. Assigning `α_c(x) = y`
//! immediately forces `α_{c0}(X(f)(x)) = Y(f)(y)` for every morphism
//! `f: c0 -> c`; since the base is closed under composition, one hop over the
//! morphisms into `c` is enough to keep every naturality square consistent.

use std::sync::Arc;

use super::{same_base, Dense, Presheaf, PsMorphism};
use crate::error::Result;
use crate::fincat::BaseIndex;

/// Lazy stream of natural transformations `X -> Y` in a fixed order.
pub struct NatIter {
    x: Presheaf,
    y: Presheaf,
    base: Arc<BaseIndex>,
    dx: Arc<Dense>,
    dy: Arc<Dense>,
    /// Branching order over `(object position, element rank)`.
    order: Vec<(usize, usize)>,
    assign: Vec<Vec<Option<usize>>>,
    trail: Vec<(usize, usize)>,
    frames: Vec<Frame>,
    started: bool,
    feasible: bool,
}

struct Frame {
    var: usize,
    next_val: usize,
    trail_mark: usize,
}

/// Every natural transformation `x -> y`, each exactly once.
pub fn enumerate_nat_trans(x: &Presheaf, y: &Presheaf) -> Result<NatIter> {
    same_base(x, y)?;
    Ok(NatIter::new(x, y, &[]))
}

/// Every `h: B -> X` with `h ∘ g = f`, for `g: A -> B` and `f: A -> X`.
pub fn liftings(g: &PsMorphism, f: &PsMorphism) -> Result<NatIter> {
    same_base(g.source(), f.source())?;
    if g.source() != f.source() {
        return Err(crate::error::Error::BoundaryMismatch);
    }
    let (b, x) = (g.target(), f.target());
    let idx = b.base().index();
    let mut constraints = Vec::new();
    for (pos, c) in idx.objects.iter().enumerate() {
        let (bs, xs) = (b.set(*c), x.set(*c));
        for a in g.source().set(*c).iter() {
            let i = bs.rank(g.apply(*c, a)).expect("component lands in target");
            let v = xs.rank(f.apply(*c, a)).expect("component lands in target");
            constraints.push((pos, i, v));
        }
    }
    Ok(NatIter::new(b, x, &constraints))
}

impl NatIter {
    /// Enumerates transformations extending the partial assignment
    /// `(object position, rank in X, rank in Y)`.
    pub(crate) fn new(x: &Presheaf, y: &Presheaf, constraints: &[(usize, usize, usize)]) -> NatIter {
        let base = x.base().index();
        let (dx, dy) = (x.dense(), y.dense());
        let mut objs: Vec<usize> = (0..base.objects.len()).collect();
        objs.sort_by_key(|&c| std::cmp::Reverse(base.incoming[c].len()));
        let order = objs.iter().flat_map(|&c| (0..dx.sets[c].len()).map(move |i| (c, i))).collect();
        let assign = dx.sets.iter().map(|s| vec![None; s.len()]).collect();
        let mut it = NatIter {
            x: x.clone(),
            y: y.clone(),
            base,
            dx,
            dy,
            order,
            assign,
            trail: Vec::new(),
            frames: Vec::new(),
            started: false,
            feasible: true,
        };
        for &(c, i, v) in constraints {
            match it.assign[c][i] {
                Some(w) if w != v => it.feasible = false,
                Some(_) => {}
                None => {
                    if !it.try_assign(c, i, v) {
                        it.feasible = false;
                    }
                }
            }
            if !it.feasible {
                break;
            }
        }
        it.trail.clear();
        it
    }

    fn try_assign(&mut self, c: usize, i: usize, v: usize) -> bool {
        self.assign[c][i] = Some(v);
        self.trail.push((c, i));
        for &f in &self.base.incoming[c] {
            let c0 = self.base.src[f];
            let x0 = self.dx.act[f][i];
            let y0 = self.dy.act[f][v];
            match self.assign[c0][x0] {
                Some(w) if w != y0 => return false,
                Some(_) => {}
                None => {
                    self.assign[c0][x0] = Some(y0);
                    self.trail.push((c0, x0));
                }
            }
        }
        true
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (c, i) = self.trail.pop().unwrap();
            self.assign[c][i] = None;
        }
    }

    /// Pushes a frame for the next unassigned element, or returns a complete
    /// solution.
    fn descend(&mut self) -> Option<PsMorphism> {
        let start = self.frames.last().map_or(0, |f| f.var + 1);
        match (start..self.order.len()).find(|&k| {
            let (c, i) = self.order[k];
            self.assign[c][i].is_none()
        }) {
            Some(var) => {
                self.frames.push(Frame { var, next_val: 0, trail_mark: self.trail.len() });
                None
            }
            None => {
                let ranks: Vec<Vec<usize>> = self
                    .assign
                    .iter()
                    .map(|row| row.iter().map(|v| v.expect("complete assignment")).collect())
                    .collect();
                Some(PsMorphism::from_ranks(self.x.clone(), self.y.clone(), &ranks))
            }
        }
    }
}

impl Iterator for NatIter {
    type Item = PsMorphism;

    fn next(&mut self) -> Option<PsMorphism> {
        if !self.started {
            self.started = true;
            if !self.feasible {
                return None;
            }
            if let Some(sol) = self.descend() {
                return Some(sol);
            }
        }
        loop {
            let frame = self.frames.last_mut()?;
            let (var, v, mark) = (frame.var, frame.next_val, frame.trail_mark);
            let (c, i) = self.order[var];
            self.undo_to(mark);
            if v >= self.dy.sets[c].len() {
                self.frames.pop();
                continue;
            }
            self.frames.last_mut().unwrap().next_val += 1;
            if self.try_assign(c, i, v) {
                if let Some(sol) = self.descend() {
                    return Some(sol);
                }
            }
        }
    }
}
