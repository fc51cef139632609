//! Checks claimed winning and losing closures using only the game rules
//! and the board order.
//!
//! A winning closure is valid when every member either has a chip at the
//! threshold or has a Pusher move all of whose Remover answers land on a
//! board that dominates a member (or has a chip at the threshold). A losing
//! closure is valid when every member is empty or answers every Pusher move
//! with a removal landing below a member (or on the empty board).

use dashmap::DashMap;
use rayon::prelude::*;
use rustc_hash::FxBuildHasher;
use thiserror::Error;

use crate::closure::{ClosureFile, ClosureKind};
use crate::game::{board_terminal, state_line, Board, BoardKey, Column, GameError, GameState, PusherMove, Row, Terminal};
use crate::moves::legal_pusher_moves;
use crate::order::board_geq;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("expected a {expected} closure, found a {found} closure")]
    WrongKind { expected: ClosureKind, found: ClosureKind },
    #[error(transparent)]
    Game(#[from] GameError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BadReason {
    /// Winning closure: no Pusher move forces every answer back into the set.
    NoWinningMove,
    /// Losing closure: a member already has a chip at the threshold.
    ChipAtThreshold,
    /// Losing closure: some Pusher move has no answer landing below the set.
    UnansweredPush,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Counterexample {
    /// Index of the state in the closure.
    pub index: usize,
    /// Canonical state line.
    pub state: String,
    pub reason: BadReason,
    /// The unanswerable push, in move text form.
    pub pusher_move: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    Invalid(Counterexample),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Keep checking after the first bad state.
    pub scan_all: bool,
    pub threads: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { scan_all: false, threads: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct VerifyReport {
    pub kind: ClosureKind,
    pub states: usize,
    /// Bad states in closure order; at most one unless scanning all.
    pub bad: Vec<Counterexample>,
}

impl VerifyReport {
    pub fn verdict(&self) -> Verdict {
        match self.bad.first() {
            None => Verdict::Valid,
            Some(c) => Verdict::Invalid(c.clone()),
        }
    }
}

pub fn verify_winning(closure: &ClosureFile) -> Result<Verdict, VerifyError> {
    expect_kind(closure, ClosureKind::Winning)?;
    Ok(verify_with(closure, &VerifyOptions::default())?.verdict())
}

pub fn verify_losing(closure: &ClosureFile) -> Result<Verdict, VerifyError> {
    expect_kind(closure, ClosureKind::Losing)?;
    Ok(verify_with(closure, &VerifyOptions::default())?.verdict())
}

/// Verifies a closure of either kind.
pub fn verify(closure: &ClosureFile) -> Result<Verdict, VerifyError> {
    Ok(verify_with(closure, &VerifyOptions::default())?.verdict())
}

pub fn verify_with(closure: &ClosureFile, options: &VerifyOptions) -> Result<VerifyReport, VerifyError> {
    for b in &closure.states {
        closure.spec.check_board(b)?;
    }
    let checker = Checker::new(closure);
    let check = |i: usize| checker.check(i);
    let bad: Vec<Counterexample> = if options.threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(options.threads)
            .build()
            .map_err(|e| GameError::InvalidSpec(format!("thread pool: {e}")))?;
        pool.install(|| {
            let indices = (0..closure.states.len()).into_par_iter();
            if options.scan_all {
                indices.map(check).collect::<Result<Vec<_>, _>>().map(|v| v.into_iter().flatten().collect())
            } else {
                let first = indices
                    .map(check)
                    .find_first(|r| !matches!(r, Ok(None)))
                    .transpose()
                    .map(Option::flatten);
                first.map(|c| c.into_iter().collect())
            }
        })?
    } else {
        let mut out = Vec::new();
        for i in 0..closure.states.len() {
            if let Some(c) = check(i)? {
                out.push(c);
                if !options.scan_all {
                    break;
                }
            }
        }
        out
    };
    Ok(VerifyReport { kind: closure.kind, states: closure.states.len(), bad })
}

fn expect_kind(closure: &ClosureFile, expected: ClosureKind) -> Result<(), VerifyError> {
    if closure.kind != expected {
        return Err(VerifyError::WrongKind { expected, found: closure.kind });
    }
    Ok(())
}

/// A member with its cumulative row profile: `profile[t]` chips at rows ≥ t.
struct Member {
    board: Board,
    profile: Vec<u32>,
}

fn profile(board: &Board, rows: usize) -> Vec<u32> {
    let mut p = vec![0u32; rows + 1];
    for c in board.columns() {
        for &r in c.rows() {
            p[(r as usize).min(rows)] += 1;
        }
    }
    for t in (0..rows).rev() {
        p[t] += p[t + 1];
    }
    p
}

struct Checker<'a> {
    closure: &'a ClosureFile,
    members: Vec<Member>,
    exact: rustc_hash::FxHashSet<BoardKey>,
    covered: DashMap<BoardKey, bool, FxBuildHasher>,
    rows: usize,
}

impl<'a> Checker<'a> {
    fn new(closure: &'a ClosureFile) -> Self {
        let rows = closure.spec.threshold() as usize + 1;
        let members: Vec<Member> = closure
            .states
            .iter()
            .map(|b| {
                let board = b.clone().canonical();
                let profile = profile(&board, rows);
                Member { board, profile }
            })
            .collect();
        let exact = members.iter().map(|m| m.board.key()).collect();
        Self { closure, members, exact, covered: DashMap::with_hasher(FxBuildHasher), rows }
    }

    fn winning(&self) -> bool {
        self.closure.kind == ClosureKind::Winning
    }

    /// Whether a child (Pusher to move) lands back in the claimed set, when
    /// that follows from its terminal status or an exact lookup.
    fn lands_known(&self, child: &Board) -> Option<bool> {
        match board_terminal(child, self.closure.spec.threshold()) {
            Terminal::PusherWin => return Some(self.winning()),
            Terminal::PusherLoss => return Some(!self.winning()),
            Terminal::Ongoing => {}
        }
        let key = child.key();
        if self.exact.contains(&key) {
            return Some(true);
        }
        self.covered.get(&key).map(|v| *v)
    }

    /// Whether a child not settled by [`Self::lands_known`] lands: a member
    /// one step away, else a scan over all members.
    fn lands_search(&self, child: &Board) -> bool {
        if self.neighbors(child).any(|b| self.exact.contains(&b.key())) {
            self.covered.insert(child.key(), true);
            return true;
        }
        self.lands_scan(child)
    }

    /// Scans the members for one on the far side of `child`.
    fn lands_scan(&self, child: &Board) -> bool {
        let p = profile(child, self.rows);
        let winning = self.winning();
        let found = self.members.iter().any(|m| {
            let fits = if winning {
                p.iter().zip(&m.profile).all(|(c, s)| c >= s)
            } else {
                p.iter().zip(&m.profile).all(|(c, s)| c <= s)
            };
            fits && if winning {
                board_geq(child, &m.board).unwrap_or(false)
            } else {
                board_geq(&m.board, child).unwrap_or(false)
            }
        });
        self.covered.insert(child.key(), found);
        found
    }

    /// Boards one chip-step on the far side of `child`: ≥ `child` for a
    /// losing set (one chip raised a row, or one chip added at row 0), ≤ it
    /// for a winning set (one chip lowered a row, or one chip dropped).
    fn neighbors<'b>(&self, child: &'b Board) -> impl Iterator<Item = Board> + 'b {
        let winning = self.winning();
        let threshold = self.closure.spec.threshold();
        let cols = child.columns();
        (0..cols.len()).flat_map(move |c| {
            let col = &cols[c];
            let mut variants: Vec<Vec<Row>> = Vec::new();
            let rows = col.rows();
            for (i, &r) in rows.iter().enumerate() {
                // one chip per run of equal rows: the last one of the run
                if rows.get(i + 1) == Some(&r) {
                    continue;
                }
                let mut v = rows.to_vec();
                if winning {
                    if r > 0 {
                        v[i] = r - 1;
                    } else {
                        v.remove(i);
                    }
                    variants.push(v);
                } else if r + 1 < threshold {
                    // the first chip of the run, so the rows stay sorted
                    let first = rows.iter().position(|&x| x == r).unwrap_or(i);
                    v[first] = r + 1;
                    variants.push(v);
                }
            }
            if !winning {
                let mut v = rows.to_vec();
                v.push(0);
                variants.push(v);
            }
            variants.into_iter().map(move |v| {
                let mut columns = cols.to_vec();
                columns[c] = Column::new(v);
                Board::new(columns).canonical()
            })
        })
    }

    fn check(&self, index: usize) -> Result<Option<Counterexample>, GameError> {
        let board = &self.members[index].board;
        let spec = &self.closure.spec;
        let bad = |reason, mv: Option<&PusherMove>| {
            Ok(Some(Counterexample {
                index,
                state: state_line(spec, board),
                reason,
                pusher_move: mv.map(PusherMove::to_text),
            }))
        };
        match board_terminal(board, spec.threshold()) {
            Terminal::PusherWin if self.winning() => return Ok(None),
            Terminal::PusherWin => return bad(BadReason::ChipAtThreshold, None),
            Terminal::PusherLoss if !self.winning() => return Ok(None),
            Terminal::PusherLoss => return bad(BadReason::NoWinningMove, None),
            Terminal::Ongoing => {}
        }
        let state = GameState::pusher_to_move(spec, board.clone())?;
        let width = board.columns().len();
        for mv in legal_pusher_moves(&state, false)? {
            let pushed = state.apply_pusher(&mv)?;
            let children = (0..width)
                .map(|c| pushed.apply_remover(c).map(|s| s.board().clone()))
                .collect::<Result<Vec<_>, _>>()?;
            let known: Vec<Option<bool>> = children.iter().map(|b| self.lands_known(b)).collect();
            // a winning move needs every answer in the set, a losing set
            // needs one answer per push
            let want = self.winning();
            let mut unsure = children.iter().zip(&known).filter(|(_, k)| k.is_none()).map(|(b, _)| b);
            let settled = if want {
                !known.contains(&Some(false)) && unsure.all(|b| self.lands_search(b))
            } else {
                known.contains(&Some(true)) || unsure.any(|b| self.lands_search(b))
            };
            if want && settled {
                return Ok(None);
            }
            if !want && !settled {
                return bad(BadReason::UnansweredPush, Some(&mv));
            }
        }
        if self.winning() {
            bad(BadReason::NoWinningMove, None)
        } else {
            Ok(None)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::GameSpec;

    fn closure(kind: ClosureKind, threshold: u32, sizes: &[usize], boards: Vec<Board>) -> ClosureFile {
        ClosureFile::new(kind, GameSpec::new(threshold, sizes).unwrap(), boards)
    }

    #[test]
    fn terminal_members() {
        let w = closure(ClosureKind::Winning, 3, &[2, 2], vec![Board::from_rows(&[&[3], &[0]])]);
        assert!(verify_winning(&w).unwrap().is_valid());
        let l = closure(ClosureKind::Losing, 3, &[2, 2], vec![Board::from_rows(&[&[], &[]])]);
        assert!(verify_losing(&l).unwrap().is_valid());
        let bad = closure(ClosureKind::Losing, 3, &[2, 2], vec![Board::from_rows(&[&[3], &[0]])]);
        match verify_losing(&bad).unwrap() {
            Verdict::Invalid(c) => assert_eq!(c.reason, BadReason::ChipAtThreshold),
            Verdict::Valid => panic!("accepted a chip at the threshold"),
        }
    }

    #[test]
    fn wrong_kind_is_an_error() {
        let w = closure(ClosureKind::Winning, 3, &[2, 2], vec![]);
        assert!(matches!(verify_losing(&w), Err(VerifyError::WrongKind { .. })));
    }

    #[test]
    fn edge_game() {
        // K_{1,1} at Γ = 1: push both chips, one survives at row 1.
        let w = closure(ClosureKind::Winning, 1, &[1, 1], vec![Board::from_rows(&[&[0], &[0]])]);
        assert!(verify_winning(&w).unwrap().is_valid());
        // At Γ = 2 that state is lost for Pusher.
        let w2 = closure(ClosureKind::Winning, 2, &[1, 1], vec![Board::from_rows(&[&[0], &[0]])]);
        assert!(!verify_winning(&w2).unwrap().is_valid());
        let l2 = closure(
            ClosureKind::Losing,
            2,
            &[1, 1],
            vec![Board::from_rows(&[&[0], &[0]]), Board::from_rows(&[&[1], &[]])],
        );
        assert!(verify_losing(&l2).unwrap().is_valid());
        // Without the follow-up state the losing set is not closed.
        let l2_short = closure(ClosureKind::Losing, 2, &[1, 1], vec![Board::from_rows(&[&[0], &[0]])]);
        match verify_losing(&l2_short).unwrap() {
            Verdict::Invalid(c) => {
                assert_eq!(c.reason, BadReason::UnansweredPush);
                assert!(c.pusher_move.is_some());
            }
            Verdict::Valid => panic!("accepted an open losing set"),
        }
    }

    #[test]
    fn scan_all_reports_every_bad_state() {
        // one chip survives each round, so neither state can win at Γ = 3
        let l = closure(
            ClosureKind::Winning,
            3,
            &[1, 1],
            vec![Board::from_rows(&[&[1], &[0]]), Board::from_rows(&[&[0], &[0]])],
        );
        let one = verify_with(&l, &VerifyOptions::default()).unwrap();
        assert_eq!(one.bad.len(), 1);
        let all = verify_with(&l, &VerifyOptions { scan_all: true, threads: 2 }).unwrap();
        assert_eq!(all.bad.len(), 2);
        assert_eq!(all.bad[0], one.bad[0]);
    }
}
