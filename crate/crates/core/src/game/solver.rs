//! Backward induction over the bounded discrete game.
//!
//! Player I chooses from a fixed finite menu of moves; player II chooses
//! among the net vectors in the span of the chosen move that come strictly
//! after the last vector played. A node is won by II when the family decides
//! `In`, lost when it decides `Out` or the horizon is reached undecided, and
//! otherwise won iff every menu move has a reply leading to a won node.

use std::collections::HashMap;

use super::engine::check_move_i;
use super::family::{Determination, Family};
use super::span::enumerate_net_in_span;
use super::strategy::{GameMode, Position, StrategyII};
use crate::error::{Error, Result};
use crate::net::NetConfig;
use crate::vector::{BlockVector, FiniteBlockSequence};

/// Player II's replies on every node of a won subtree, keyed by the picks so
/// far and the index of player I's menu move.
#[derive(Clone, Debug, Default)]
pub struct WinningStrategy {
    menu: Vec<FiniteBlockSequence>,
    table: HashMap<(Vec<BlockVector>, usize), BlockVector>,
}

impl WinningStrategy {
    pub fn lookup(&self, picks: &[BlockVector], menu_index: usize) -> Option<&BlockVector> {
        self.table.get(&(picks.to_vec(), menu_index))
    }

    /// Every `(picks, menu index, reply)`, shortest positions first and in
    /// canonical order within a length.
    pub fn entries(&self) -> Vec<(&[BlockVector], usize, &BlockVector)> {
        let mut out: Vec<_> = self
            .table
            .iter()
            .map(|((p, i), o)| (p.as_slice(), *i, o))
            .collect();
        out.sort_by(|a, b| {
            a.0.len()
                .cmp(&b.0.len())
                .then_with(|| {
                    a.0.iter()
                        .zip(b.0)
                        .map(|(x, y)| x.canonical_cmp(y))
                        .find(|o| o.is_ne())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .then(a.1.cmp(&b.1))
        });
        out
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }
}

impl StrategyII for WinningStrategy {
    fn respond(&mut self, pos: &Position<'_>, offer: &FiniteBlockSequence) -> Result<BlockVector> {
        let idx =
            self.menu.iter().position(|m| m == offer).ok_or_else(|| {
                Error::Precondition("offered move is not on the solved menu".into())
            })?;
        self.lookup(pos.picks, idx)
            .cloned()
            .ok_or_else(|| Error::Precondition("position lies outside the solved tree".into()))
    }
}

#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub accepts: bool,
    /// Present when the prefix is accepted.
    pub strategy: Option<WinningStrategy>,
    /// A menu index none of whose replies wins, when the prefix is rejected
    /// at a node where play continues.
    pub refutation: Option<usize>,
    /// Distinct positions evaluated.
    pub positions: usize,
}

struct Solver<'a> {
    prefix: &'a FiniteBlockSequence,
    horizon: usize,
    menu: &'a [FiniteBlockSequence],
    family: &'a dyn Family,
    cfg: &'a NetConfig,
    memo: HashMap<Vec<BlockVector>, bool>,
    options: HashMap<(usize, Option<BlockVector>), Vec<BlockVector>>,
    table: HashMap<(Vec<BlockVector>, usize), BlockVector>,
    refutations: HashMap<Vec<BlockVector>, usize>,
}

impl Solver<'_> {
    fn outcome(&self, picks: &[BlockVector]) -> Result<FiniteBlockSequence> {
        let mut seq = self.prefix.clone();
        for x in picks {
            seq.push(x.clone())?;
        }
        Ok(seq)
    }

    fn last<'b>(&'b self, picks: &'b [BlockVector]) -> Option<&'b BlockVector> {
        picks.last().or_else(|| self.prefix.last())
    }

    fn replies(&mut self, idx: usize, after: Option<&BlockVector>) -> Result<Vec<BlockVector>> {
        let key = (idx, after.cloned());
        if let Some(v) = self.options.get(&key) {
            return Ok(v.clone());
        }
        let v = enumerate_net_in_span(&self.menu[idx], after, self.cfg)?;
        self.options.insert(key, v.clone());
        Ok(v)
    }

    fn value(&mut self, picks: &mut Vec<BlockVector>) -> Result<bool> {
        match self.family.decide(&self.outcome(picks)?) {
            Determination::In => return Ok(true),
            Determination::Out => return Ok(false),
            Determination::Undetermined => {}
        }
        if picks.len() == self.horizon {
            return Ok(false);
        }
        if let Some(&v) = self.memo.get(picks.as_slice()) {
            return Ok(v);
        }
        let mut won = true;
        for idx in 0..self.menu.len() {
            let after = self.last(picks).cloned();
            let replies = self.replies(idx, after.as_ref())?;
            let mut answer = None;
            for o in replies {
                picks.push(o);
                let v = self.value(picks)?;
                let o = picks.pop().expect("pushed above");
                if v {
                    answer = Some(o);
                    break;
                }
            }
            match answer {
                Some(o) => {
                    self.table.insert((picks.clone(), idx), o);
                }
                None => {
                    self.refutations.insert(picks.clone(), idx);
                    won = false;
                    break;
                }
            }
        }
        self.memo.insert(picks.clone(), won);
        Ok(won)
    }
}

fn check_menu(
    board: &FiniteBlockSequence,
    menu: &[FiniteBlockSequence],
    cfg: &NetConfig,
) -> Result<()> {
    if menu.is_empty() {
        return Err(Error::EmptyMenu);
    }
    for (i, m) in menu.iter().enumerate() {
        if let Some(reason) = check_move_i(GameMode::Discrete, board, m, cfg)? {
            return Err(Error::Precondition(format!("menu move {i}: {reason}")));
        }
    }
    Ok(())
}

/// Decides whether player II wins the discrete game from `prefix` within
/// `horizon` rounds against every sequence of menu moves, and returns a
/// winning strategy when one exists.
pub fn solve_bounded(
    board: &FiniteBlockSequence,
    prefix: &FiniteBlockSequence,
    horizon: usize,
    menu: &[FiniteBlockSequence],
    family: &dyn Family,
    cfg: &NetConfig,
) -> Result<SolveOutcome> {
    check_menu(board, menu, cfg)?;
    let mut solver = Solver {
        prefix,
        horizon,
        menu,
        family,
        cfg,
        memo: HashMap::new(),
        options: HashMap::new(),
        table: HashMap::new(),
        refutations: HashMap::new(),
    };
    let accepts = solver.value(&mut Vec::new())?;
    let positions = solver.memo.len();
    if accepts {
        // keep only the replies on won nodes
        let memo = &solver.memo;
        solver
            .table
            .retain(|(picks, _), _| memo.get(picks).copied().unwrap_or(false));
        Ok(SolveOutcome {
            accepts,
            strategy: Some(WinningStrategy {
                menu: menu.to_vec(),
                table: solver.table,
            }),
            refutation: None,
            positions,
        })
    } else {
        Ok(SolveOutcome {
            accepts,
            strategy: None,
            refutation: solver.refutations.get(&Vec::new()).copied(),
            positions,
        })
    }
}

/// Number of nodes of the full game tree (positions reached by any sequence
/// of menu moves and replies, stopping where the family decides or the
/// horizon is reached), or `None` once it exceeds `limit`.
pub fn game_tree_size(
    board: &FiniteBlockSequence,
    prefix: &FiniteBlockSequence,
    horizon: usize,
    menu: &[FiniteBlockSequence],
    family: &dyn Family,
    cfg: &NetConfig,
    limit: usize,
) -> Result<Option<usize>> {
    check_menu(board, menu, cfg)?;
    fn walk(
        seq: &mut FiniteBlockSequence,
        rem: usize,
        menu: &[FiniteBlockSequence],
        family: &dyn Family,
        cfg: &NetConfig,
        count: &mut usize,
        limit: usize,
    ) -> Result<bool> {
        *count += 1;
        if *count > limit {
            return Ok(false);
        }
        if rem == 0 || family.decide(seq) != Determination::Undetermined {
            return Ok(true);
        }
        for m in menu {
            for o in enumerate_net_in_span(m, seq.last(), cfg)? {
                let mut next = seq.clone();
                next.push(o)?;
                if !walk(&mut next, rem - 1, menu, family, cfg, count, limit)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
    let mut count = 0;
    let mut seq = prefix.clone();
    if walk(&mut seq, horizon, menu, family, cfg, &mut count, limit)? {
        Ok(Some(count))
    } else {
        Ok(None)
    }
}
