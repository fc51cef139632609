use std::sync::Mutex;

use dashmap::DashMap;
use rustc_hash::FxBuildHasher;

use crate::closure::{ClosureFile, ClosureKind};
use crate::game::{board_terminal, Board, BoardKey, Column, GameSpec, Terminal};
use crate::order::geq_unchecked;

/// Result of looking a state up in a store.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    Winning,
    Losing,
    Unknown,
}

/// How the solver looks for a stored state comparable to a query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DominationMode {
    /// Exact matches only.
    Off,
    /// Exact lookups of the boards one chip-step below (for winning) or
    /// above (for losing) the query.
    #[default]
    Neighbors,
    /// Neighbor probes, then a scan over every stored state.
    Scan,
}

/// Classified Pusher-to-move states of one game, keyed by canonical board.
///
/// Safe for concurrent use: reads are lock-free per shard and inserts of
/// the same key always carry the same value.
#[derive(Debug)]
pub struct ClosureStore {
    spec: GameSpec,
    entries: DashMap<BoardKey, bool, FxBuildHasher>,
    compact: bool,
    pinned: Mutex<Vec<BoardKey>>,
}

impl ClosureStore {
    pub fn new(spec: GameSpec) -> Self {
        Self::with_compaction(spec, false)
    }

    /// With compaction, only ≥-minimal winning and ≤-maximal losing states
    /// are retained; lookups must then use [`DominationMode::Scan`].
    pub fn with_compaction(spec: GameSpec, compact: bool) -> Self {
        Self {
            spec,
            entries: DashMap::with_hasher(FxBuildHasher),
            compact,
            pinned: Mutex::new(Vec::new()),
        }
    }

    pub fn spec(&self) -> &GameSpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: &BoardKey) -> Option<bool> {
        self.entries.get(key).map(|v| *v)
    }

    /// Keeps `key` through compaction.
    pub fn pin(&self, key: BoardKey) {
        self.pinned.lock().unwrap().push(key);
    }

    /// Records a classification for a canonical board.
    pub fn insert(&self, board: &Board, winning: bool) {
        let key = board.key();
        if !self.compact {
            self.entries.insert(key, winning);
            return;
        }
        let pinned = self.pinned.lock().unwrap().contains(&key);
        // A stored state on the dominated side already covers `board`.
        let covered = self.entries.iter().any(|e| {
            *e.value() == winning && *e.key() != key && {
                let other = e.key().decode();
                if winning {
                    geq_unchecked(board, &other)
                } else {
                    geq_unchecked(&other, board)
                }
            }
        });
        if covered && !pinned {
            return;
        }
        let keep = self.pinned.lock().unwrap().clone();
        self.entries.retain(|k, v| {
            if *v != winning || *k == key || keep.contains(k) {
                return true;
            }
            let other = k.decode();
            let redundant =
                if winning { geq_unchecked(&other, board) } else { geq_unchecked(board, &other) };
            !redundant
        });
        self.entries.insert(key, winning);
    }

    /// Exact lookup followed by a scan for a dominated winning state or a
    /// dominating losing state.
    pub fn classify(&self, board: &Board) -> Classification {
        self.classify_with(board, DominationMode::Scan)
    }

    pub fn classify_with(&self, board: &Board, mode: DominationMode) -> Classification {
        let board = board.clone().canonical();
        if let Some(v) = self.get(&board.key()) {
            return to_class(v);
        }
        if mode == DominationMode::Off || self.is_empty() {
            return Classification::Unknown;
        }
        if let Some(v) = self.probe_neighbors(&board) {
            return to_class(v);
        }
        if mode == DominationMode::Scan {
            if let Some(v) = self.scan(&board) {
                return to_class(v);
            }
        }
        Classification::Unknown
    }

    fn probe_neighbors(&self, board: &Board) -> Option<bool> {
        let threshold = self.spec.threshold();
        let cols = board.columns();
        for (i, col) in cols.iter().enumerate() {
            if i > 0 && cols[i - 1] == *col {
                continue;
            }
            for (row, _) in col.groups() {
                // One chip one step lower (or gone): a winning answer there
                // carries over upward.
                let lowered = replace_one(col, row, row.checked_sub(1));
                if self.get(&with_column(board, i, lowered).key()) == Some(true) {
                    return Some(true);
                }
                if row + 1 < threshold {
                    let raised = replace_one(col, row, Some(row + 1));
                    if self.get(&with_column(board, i, raised).key()) == Some(false) {
                        return Some(false);
                    }
                }
            }
            let mut added: Vec<u8> = col.rows().to_vec();
            added.push(0);
            if self.get(&with_column(board, i, Column::new(added)).key()) == Some(false) {
                return Some(false);
            }
        }
        None
    }

    fn scan(&self, board: &Board) -> Option<bool> {
        let chips = board.chip_count();
        for e in self.entries.iter() {
            let other = e.key().decode();
            if *e.value() {
                if chips >= other.chip_count() && geq_unchecked(board, &other) {
                    return Some(true);
                }
            } else if other.chip_count() >= chips && geq_unchecked(&other, board) {
                return Some(false);
            }
        }
        None
    }

    /// Stored boards of one kind, canonical and sorted by key bytes.
    pub fn boards(&self, kind: ClosureKind) -> Vec<Board> {
        let want = kind == ClosureKind::Winning;
        let mut keys: Vec<BoardKey> =
            self.entries.iter().filter(|e| *e.value() == want).map(|e| e.key().clone()).collect();
        keys.sort_unstable();
        keys.iter().map(BoardKey::decode).collect()
    }

    pub fn count(&self, kind: ClosureKind) -> usize {
        let want = kind == ClosureKind::Winning;
        self.entries.iter().filter(|e| *e.value() == want).count()
    }

    pub fn export(&self, kind: ClosureKind) -> ClosureFile {
        ClosureFile::new(kind, self.spec.clone(), self.boards(kind))
    }
}

/// Classifies `board` (Pusher to move) against `store`: terminal positions
/// first, then stored states and domination.
pub fn classify_by_closure(board: &Board, store: &ClosureStore) -> Classification {
    match board_terminal(board, store.spec().threshold()) {
        Terminal::PusherWin => Classification::Winning,
        Terminal::PusherLoss => Classification::Losing,
        Terminal::Ongoing => store.classify(board),
    }
}

fn to_class(winning: bool) -> Classification {
    if winning {
        Classification::Winning
    } else {
        Classification::Losing
    }
}

fn replace_one(col: &Column, from: u8, to: Option<u8>) -> Column {
    let mut rows: Vec<u8> = col.rows().to_vec();
    let pos = rows.iter().position(|&r| r == from).expect("row present");
    match to {
        Some(r) => rows[pos] = r,
        None => {
            rows.remove(pos);
        }
    }
    Column::new(rows)
}

fn with_column(board: &Board, i: usize, col: Column) -> Board {
    let mut cols = board.columns().to_vec();
    cols[i] = col;
    Board::new(cols).canonical()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> GameSpec {
        GameSpec::new(4, &[2, 2]).unwrap()
    }

    #[test]
    fn empty_store_is_unknown() {
        let s = ClosureStore::new(spec());
        assert_eq!(s.classify(&Board::from_rows(&[&[1], &[0]])), Classification::Unknown);
    }

    #[test]
    fn exact_and_dominated_lookups() {
        let s = ClosureStore::new(spec());
        let w = Board::from_rows(&[&[1, 0], &[0]]).canonical();
        s.insert(&w, true);
        assert_eq!(s.classify(&w), Classification::Winning);
        let higher = Board::from_rows(&[&[2, 1], &[1]]);
        assert_eq!(s.classify(&higher), Classification::Winning);
        assert_eq!(s.classify_with(&higher, DominationMode::Off), Classification::Unknown);
        // one step above: found by the neighbor probe
        let step = Board::from_rows(&[&[1, 1], &[0]]);
        assert_eq!(s.classify_with(&step, DominationMode::Neighbors), Classification::Winning);
        // two steps above needs the scan
        assert_eq!(s.classify_with(&higher, DominationMode::Neighbors), Classification::Unknown);

        let l = Board::from_rows(&[&[1, 1], &[1, 1]]).canonical();
        s.insert(&l, false);
        assert_eq!(s.classify(&Board::from_rows(&[&[1], &[0, 0]])), Classification::Losing);
        assert_eq!(
            s.classify_with(&Board::from_rows(&[&[1, 1], &[1, 0]]), DominationMode::Neighbors),
            Classification::Losing
        );
    }

    #[test]
    fn terminal_states_classified_directly() {
        let s = ClosureStore::new(spec());
        assert_eq!(classify_by_closure(&Board::from_rows(&[&[4], &[]]), &s), Classification::Winning);
        assert_eq!(classify_by_closure(&Board::from_rows(&[&[], &[]]), &s), Classification::Losing);
    }

    #[test]
    fn compaction_keeps_antichains() {
        let s = ClosureStore::with_compaction(spec(), true);
        s.insert(&Board::from_rows(&[&[2, 1], &[0]]).canonical(), true);
        s.insert(&Board::from_rows(&[&[1, 0], &[0]]).canonical(), true);
        assert_eq!(s.count(ClosureKind::Winning), 1);
        s.insert(&Board::from_rows(&[&[3, 3], &[3]]).canonical(), true);
        assert_eq!(s.count(ClosureKind::Winning), 1);
        s.insert(&Board::from_rows(&[&[0], &[]]).canonical(), false);
        s.insert(&Board::from_rows(&[&[1], &[0]]).canonical(), false);
        assert_eq!(s.count(ClosureKind::Losing), 1);
        assert_eq!(s.classify(&Board::from_rows(&[&[0], &[]])), Classification::Losing);
    }

    #[test]
    fn pinned_state_survives_compaction() {
        let s = ClosureStore::with_compaction(spec(), true);
        let root = Board::from_rows(&[&[0, 0], &[0, 0]]).canonical();
        s.pin(root.key());
        s.insert(&Board::from_rows(&[&[0], &[0]]).canonical(), true);
        s.insert(&root, true);
        assert_eq!(s.count(ClosureKind::Winning), 2);
    }
}
