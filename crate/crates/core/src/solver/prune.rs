//! Move pruning by domination.
//!
//! Pusher: if two identical columns end up with comparable but different
//! columns after a move, the move that copies the higher result onto both is
//! at least as good. Remover: a removal whose resulting board dominates
//! another removal's board is at least as bad for Remover.

use crate::game::{Board, GameError, GameState, Player, PusherMove};
use crate::order::geq_unchecked;

/// Drops Pusher moves that give two identical columns comparable, unequal
/// results.
pub fn prune_pusher_moves(state: &GameState, moves: Vec<PusherMove>) -> Result<Vec<PusherMove>, GameError> {
    if state.to_move() != Player::Pusher {
        return Err(GameError::WrongTurn { expected: Player::Pusher, found: state.to_move() });
    }
    let board = state.board();
    let runs = board.identical_runs();
    Ok(moves
        .into_iter()
        .filter(|mv| {
            runs.iter().all(|&(start, len)| {
                let base = board.column(start);
                let results: Vec<_> = (start..start + len).map(|c| base.pushed(mv.column(c))).collect();
                results.iter().enumerate().all(|(i, a)| {
                    results[i + 1..].iter().all(|b| a == b || !(a.dominates(b) || b.dominates(a)))
                })
            })
        })
        .collect())
}

/// Keeps the Remover moves whose results are ≤-minimal among all results,
/// one representative per distinct result. Columns are 0-based.
pub fn prune_remover_moves(state: &GameState, moves: Vec<usize>) -> Result<Vec<usize>, GameError> {
    if state.to_move() != Player::Remover {
        return Err(GameError::WrongTurn { expected: Player::Remover, found: state.to_move() });
    }
    let children = moves
        .into_iter()
        .map(|c| Ok((c, state.apply_remover(c)?.board().clone())))
        .collect::<Result<Vec<_>, GameError>>()?;
    Ok(minimal_children(children).into_iter().map(|(c, _)| c).collect())
}

/// Keeps child `i` unless some other child `j` satisfies `child_i ≥ child_j`
/// with either different boards or `j < i`. At least one child survives.
pub(crate) fn minimal_children<T>(children: Vec<(T, Board)>) -> Vec<(T, Board)> {
    let n = children.len();
    let keep: Vec<bool> = (0..n)
        .map(|i| {
            !(0..n).any(|j| {
                j != i && {
                    let (a, b) = (&children[i].1, &children[j].1);
                    if a == b {
                        j < i
                    } else {
                        geq_unchecked(a, b)
                    }
                }
            })
        })
        .collect();
    children.into_iter().zip(keep).filter_map(|(c, k)| k.then_some(c)).collect()
}
