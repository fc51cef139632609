//! Pusher move enumeration up to symmetry.
//!
//! Every column gets a push pattern: how many chips leave each of its
//! occupied rows. Identical columns are interchangeable, so a run of `g`
//! identical columns receives a multiset of `g` patterns (a nondecreasing
//! sequence of pattern indices). With pruning enabled, a run never mixes two
//! patterns whose pushed columns are comparable: copying the dominating
//! pattern onto the other column is at least as good for Pusher.

use std::sync::Arc;

use smallvec::SmallVec;

use crate::game::{Board, Column, ColumnPush, GameError, GameState, Player, PusherMove, Row};

/// Pattern index per column of the board the generator was built for.
pub(crate) type MoveIdx = SmallVec<[u16; 8]>;

/// All push patterns of one column and their effects.
#[derive(Debug)]
pub(crate) struct ColumnChoices {
    pub patterns: Vec<ColumnPush>,
    /// Column after the push.
    pub pushed: Vec<Column>,
    /// Column after the push when Remover then clears this column.
    pub remainder: Vec<Column>,
    pub totals: Vec<u32>,
    width: usize,
    comparable: Vec<bool>,
}

impl ColumnChoices {
    pub fn new(col: &Column, threshold: Row) -> Self {
        let groups: SmallVec<[(Row, u32); 4]> =
            col.groups().into_iter().filter(|&(r, _)| r < threshold).collect();
        let mut patterns = vec![ColumnPush::default()];
        let mut digits: SmallVec<[u32; 4]> = SmallVec::from_elem(0, groups.len());
        // Mixed-radix counter, last group varying fastest.
        'outer: loop {
            let mut i = groups.len();
            loop {
                if i == 0 {
                    break 'outer;
                }
                i -= 1;
                if digits[i] < groups[i].1 {
                    digits[i] += 1;
                    for d in digits.iter_mut().skip(i + 1) {
                        *d = 0;
                    }
                    break;
                }
            }
            patterns.push(ColumnPush::new(groups.iter().zip(&digits).map(|(&(r, _), &n)| (r, n))));
        }
        let pushed: Vec<Column> = patterns.iter().map(|p| col.pushed(p)).collect();
        let remainder = patterns.iter().map(|p| col.without(p)).collect();
        let totals = patterns.iter().map(ColumnPush::total).collect();
        let width = patterns.len();
        let mut comparable = vec![false; width * width];
        for a in 0..width {
            for b in 0..width {
                comparable[a * width + b] =
                    pushed[a].dominates(&pushed[b]) || pushed[b].dominates(&pushed[a]);
            }
        }
        Self { patterns, pushed, remainder, totals, width, comparable }
    }

    pub fn len(&self) -> usize {
        self.width
    }

    fn comparable(&self, a: u16, b: u16) -> bool {
        self.comparable[a as usize * self.width + b as usize]
    }
}

/// Move generator for one canonical Pusher-to-move board.
#[derive(Debug)]
pub(crate) struct MoveGen {
    board: Board,
    runs: Vec<(usize, usize)>,
    choices: Vec<Arc<ColumnChoices>>,
}

impl MoveGen {
    pub fn new(board: &Board, threshold: Row) -> Self {
        let board = board.clone().canonical();
        let runs = board.identical_runs();
        let mut choices = Vec::with_capacity(board.columns().len());
        for &(start, len) in &runs {
            let c = Arc::new(ColumnChoices::new(board.column(start), threshold));
            for _ in 0..len {
                choices.push(Arc::clone(&c));
            }
        }
        Self { board, runs, choices }
    }

    pub fn board(&self) -> &Board {
        &self.board
    }

    pub fn choices(&self, col: usize) -> &ColumnChoices {
        &self.choices[col]
    }

    /// Nonempty moves in canonical order: runs in column order, each run's
    /// pattern multisets in lexicographic order.
    pub fn moves(&self, prune: bool) -> Vec<MoveIdx> {
        let per_run: Vec<Vec<SmallVec<[u16; 8]>>> = self
            .runs
            .iter()
            .map(|&(start, len)| run_assignments(&self.choices[start], len, prune))
            .collect();
        let mut out = Vec::new();
        let mut cur: MoveIdx = SmallVec::new();
        product(&per_run, 0, &mut cur, &mut out);
        out.retain(|m| m.iter().any(|&p| p != 0));
        out
    }

    pub fn total_pushed(&self, mv: &MoveIdx) -> u32 {
        mv.iter().enumerate().map(|(c, &p)| self.choices[c].totals[p as usize]).sum()
    }

    pub fn to_pusher_move(&self, mv: &MoveIdx) -> PusherMove {
        PusherMove::new(
            mv.iter()
                .enumerate()
                .map(|(c, &p)| self.choices[c].patterns[p as usize].clone())
                .collect(),
        )
    }

    /// Board after the push when Remover clears column `removed`,
    /// canonicalized.
    pub fn child(&self, mv: &MoveIdx, removed: usize) -> Board {
        let columns = mv
            .iter()
            .enumerate()
            .map(|(c, &p)| {
                let ch = &self.choices[c];
                if c == removed {
                    ch.remainder[p as usize].clone()
                } else {
                    ch.pushed[p as usize].clone()
                }
            })
            .collect();
        Board::new(columns).canonical()
    }

    /// Remover's options after `mv`, one per inequivalent column: identical
    /// columns that received the same pattern yield the same child.
    /// Returns `(column, chips removed, child)`.
    pub fn children(&self, mv: &MoveIdx) -> Vec<(usize, u32, Board)> {
        let mut out = Vec::with_capacity(mv.len());
        for &(start, len) in &self.runs {
            for c in start..start + len {
                if c > start && mv[c] == mv[c - 1] {
                    continue;
                }
                let removed = self.choices[c].totals[mv[c] as usize];
                out.push((c, removed, self.child(mv, c)));
            }
        }
        out
    }
}

fn run_assignments(ch: &ColumnChoices, len: usize, prune: bool) -> Vec<SmallVec<[u16; 8]>> {
    let mut out = Vec::new();
    let mut cur = SmallVec::new();
    fn rec(
        ch: &ColumnChoices,
        len: usize,
        prune: bool,
        min: u16,
        cur: &mut SmallVec<[u16; 8]>,
        out: &mut Vec<SmallVec<[u16; 8]>>,
    ) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for p in min..ch.len() as u16 {
            if prune && cur.iter().any(|&q| q != p && ch.comparable(q, p)) {
                continue;
            }
            cur.push(p);
            rec(ch, len, prune, p, cur, out);
            cur.pop();
        }
    }
    rec(ch, len, prune, 0, &mut cur, &mut out);
    out
}

fn product(per_run: &[Vec<SmallVec<[u16; 8]>>], i: usize, cur: &mut MoveIdx, out: &mut Vec<MoveIdx>) {
    if i == per_run.len() {
        out.push(cur.clone());
        return;
    }
    for a in &per_run[i] {
        let n = cur.len();
        cur.extend_from_slice(a);
        product(per_run, i + 1, cur, out);
        cur.truncate(n);
    }
}

/// Legal Pusher moves of a Pusher-to-move state, up to permutations of
/// identical columns. With `prune`, moves that give two identical columns
/// comparable but different results are left out.
///
/// Moves are generated on the canonical board and returned in the column
/// order of the state's board.
pub fn legal_pusher_moves(state: &GameState, prune: bool) -> Result<Vec<PusherMove>, GameError> {
    if state.to_move() != Player::Pusher {
        return Err(GameError::WrongTurn { expected: Player::Pusher, found: state.to_move() });
    }
    let gen = MoveGen::new(state.board(), state.spec().threshold());
    let order = canonical_order(state.board());
    Ok(gen.moves(prune).iter().map(|m| in_board_order(&gen.to_pusher_move(m), &order)).collect())
}

/// `order[i]` is the column of `board` that lands in position `i` of its
/// canonical form.
pub(crate) fn canonical_order(board: &Board) -> Vec<usize> {
    let sorted: Vec<Column> = board.columns().iter().map(|c| Column::new(c.rows().iter().copied())).collect();
    let mut order: Vec<usize> = (0..sorted.len()).collect();
    order.sort_by(|&a, &b| sorted[a].cmp(&sorted[b]));
    order
}

/// Moves a push on the canonical board back onto the original columns.
pub(crate) fn in_board_order(mv: &PusherMove, order: &[usize]) -> PusherMove {
    let mut columns = vec![ColumnPush::default(); order.len()];
    for (i, &c) in order.iter().enumerate() {
        columns[c] = mv.column(i).clone();
    }
    PusherMove::new(columns)
}

/// Number of moves without symmetry reduction: `∏ (c_r + 1) − 1` over every
/// column and occupied row below the threshold.
pub fn unreduced_move_count(board: &Board, threshold: Row) -> u128 {
    board
        .columns()
        .iter()
        .flat_map(|c| c.groups())
        .filter(|&(r, _)| r < threshold)
        .map(|(_, n)| n as u128 + 1)
        .product::<u128>()
        - 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::GameSpec;

    fn state(g: u32, sizes: &[usize], rows: &[&[u8]]) -> GameState {
        GameState::pusher_to_move(&GameSpec::new(g, sizes).unwrap(), Board::from_rows(rows)).unwrap()
    }

    #[test]
    fn single_column_two_chips() {
        let s = state(3, &[2], &[&[0, 0]]);
        let moves = legal_pusher_moves(&s, false).unwrap();
        assert_eq!(moves.len(), 2);
        assert_eq!(unreduced_move_count(s.board(), 3), 2);
    }

    #[test]
    fn identical_columns_quotient() {
        let s = state(3, &[1, 1], &[&[0], &[0]]);
        let moves = legal_pusher_moves(&s, false).unwrap();
        assert_eq!(moves.len(), 2);
        assert_eq!(unreduced_move_count(s.board(), 3), 3);
    }

    #[test]
    fn split_rows() {
        let s = state(3, &[2], &[&[1, 0]]);
        assert_eq!(legal_pusher_moves(&s, false).unwrap().len(), 3);
        assert_eq!(unreduced_move_count(s.board(), 3), 3);
    }

    #[test]
    fn pruning_identical_columns() {
        // {0,0},{0,0}: patterns push 0/1/2, pushed columns totally ordered,
        // so only "same pattern on both" survives.
        let s = state(4, &[2, 2], &[&[0, 0], &[0, 0]]);
        let all = legal_pusher_moves(&s, false).unwrap();
        let pruned = legal_pusher_moves(&s, true).unwrap();
        assert_eq!(all.len(), 5);
        assert_eq!(pruned.len(), 2);
        for m in &pruned {
            assert_eq!(m.column(0), m.column(1));
        }
    }

    #[test]
    fn moves_never_push_from_threshold() {
        let s = state(2, &[2], &[&[1, 0]]);
        for m in legal_pusher_moves(&s, false).unwrap() {
            assert!(s.check_pusher_move(&m).is_ok());
        }
    }

    #[test]
    fn children_dedupe_identical_columns() {
        let b = Board::from_rows(&[&[0], &[0]]);
        let gen = MoveGen::new(&b, 3);
        let both: MoveIdx = SmallVec::from_slice(&[1, 1]);
        assert_eq!(gen.children(&both).len(), 1);
        let one: MoveIdx = SmallVec::from_slice(&[0, 1]);
        assert_eq!(gen.children(&one).len(), 2);
    }
}
