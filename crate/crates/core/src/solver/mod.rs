//! Exact minimax evaluation of chip game states.
//!
//! Depth-first search over Pusher-to-move states with a shared store of
//! classified states. Before a state is expanded the store is consulted for
//! the state itself and, depending on [`DominationMode`], for comparable
//! states: anything above a winning state wins, anything below a losing
//! state loses. Pusher moves come from the symmetry-reduced generator with
//! identical-column pruning; Remover replies are reduced to ≤-minimal
//! children.
//!
//! Every state the search resolves ends up in the store, which is exported
//! as a winning and a losing closure.

mod paint;
mod prune;
mod store;

use std::cmp::Reverse;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use crate::closure::{ClosureFile, ClosureKind};
use crate::game::{board_terminal, Board, GameError, GameSpec, GameState, Player, PusherMove, Terminal};
use crate::moves::{canonical_order, in_board_order, MoveGen, MoveIdx};

pub use paint::{default_bounds, paintability, paintability_with, PaintReport};
pub use prune::{prune_pusher_moves, prune_remover_moves};
pub use store::{classify_by_closure, Classification, ClosureStore, DominationMode};

use prune::minimal_children;

/// Game value from Pusher's point of view.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Value {
    PusherWins,
    RemoverWins,
}

impl Value {
    pub fn from_pusher_wins(w: bool) -> Self {
        if w {
            Value::PusherWins
        } else {
            Value::RemoverWins
        }
    }

    pub fn pusher_wins(self) -> bool {
        self == Value::PusherWins
    }
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("inconclusive: {reason} after {nodes} expanded nodes and {entries} stored states")]
    Inconclusive { reason: String, nodes: u64, entries: usize },
    #[error("no threshold in {low}..={high} is won by Remover (evaluated: {evaluated:?})")]
    RangeExhausted { low: u32, high: u32, evaluated: Vec<(u32, Value)> },
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct SolverConfig {
    /// Identical-column pruning of Pusher moves.
    pub prune_pusher: bool,
    /// Keep only ≤-minimal Remover replies.
    pub prune_remover: bool,
    pub domination: DominationMode,
    /// Keep the store as antichains (forces scan lookups).
    pub compact: bool,
    pub node_budget: Option<u64>,
    pub max_entries: Option<usize>,
    /// Wall-clock limit, measured from solver creation.
    #[serde(skip)]
    pub time_limit: Option<Duration>,
    /// 1 runs the deterministic single-threaded search.
    pub threads: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            prune_pusher: true,
            prune_remover: true,
            domination: DominationMode::Neighbors,
            compact: false,
            node_budget: None,
            max_entries: None,
            time_limit: None,
            threads: 1,
        }
    }
}

impl SolverConfig {
    /// Plain minimax over symmetry-reduced moves: no pruning, no domination.
    pub fn unpruned() -> Self {
        Self {
            prune_pusher: false,
            prune_remover: false,
            domination: DominationMode::Off,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, serde::Serialize)]
pub struct SolveStats {
    /// Pusher-to-move states expanded.
    pub nodes: u64,
    pub exact_hits: u64,
    pub domination_hits: u64,
    pub pusher_moves: u64,
    pub pusher_pruned: u64,
    pub remover_children: u64,
    pub remover_pruned: u64,
    pub winning_states: usize,
    pub losing_states: usize,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Debug, Default)]
struct Counters {
    nodes: AtomicU64,
    exact_hits: AtomicU64,
    domination_hits: AtomicU64,
    pusher_moves: AtomicU64,
    pusher_pruned: AtomicU64,
    remover_children: AtomicU64,
    remover_pruned: AtomicU64,
}

fn bump(c: &AtomicU64, by: u64) {
    c.fetch_add(by, Ordering::Relaxed);
}

/// Outcome of [`evaluate`].
#[derive(Debug)]
pub struct SolveResult {
    pub spec: GameSpec,
    pub value: Value,
    pub closures: ClosureStore,
    pub stats: SolveStats,
}

impl SolveResult {
    pub fn closure(&self, kind: ClosureKind) -> ClosureFile {
        self.closures.export(kind)
    }
}

/// Search engine for one game. Reusable across queries; the store grows
/// with every solved state.
pub struct Solver {
    spec: GameSpec,
    config: SolverConfig,
    store: ClosureStore,
    counters: Counters,
    aborted: AtomicBool,
    started: Instant,
}

/// Levels of the tree (in Pusher moves) searched in parallel when
/// `threads > 1`.
const PARALLEL_DEPTH: usize = 2;

impl Solver {
    pub fn new(spec: &GameSpec, config: SolverConfig) -> Self {
        let mut config = config;
        if config.compact {
            config.domination = DominationMode::Scan;
        }
        let store = ClosureStore::with_compaction(spec.clone(), config.compact);
        Self {
            spec: spec.clone(),
            config,
            store,
            counters: Counters::default(),
            aborted: AtomicBool::new(false),
            started: Instant::now(),
        }
    }

    pub fn spec(&self) -> &GameSpec {
        &self.spec
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn store(&self) -> &ClosureStore {
        &self.store
    }

    pub fn into_store(self) -> ClosureStore {
        self.store
    }

    pub fn stats(&self) -> SolveStats {
        let c = &self.counters;
        let load = |a: &AtomicU64| a.load(Ordering::Relaxed);
        SolveStats {
            nodes: load(&c.nodes),
            exact_hits: load(&c.exact_hits),
            domination_hits: load(&c.domination_hits),
            pusher_moves: load(&c.pusher_moves),
            pusher_pruned: load(&c.pusher_pruned),
            remover_children: load(&c.remover_children),
            remover_pruned: load(&c.remover_pruned),
            winning_states: self.store.count(ClosureKind::Winning),
            losing_states: self.store.count(ClosureKind::Losing),
            elapsed: self.started.elapsed(),
        }
    }

    /// Whether Pusher wins from `board` with Pusher to move.
    pub fn solve_board(&self, board: &Board) -> Result<bool, SolveError> {
        self.spec.check_board(board)?;
        let board = board.clone().canonical();
        if self.config.compact {
            self.store.pin(board.key());
        }
        if self.config.threads > 1 {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(self.config.threads)
                .build()
                .map_err(|e| SolveError::Inconclusive {
                    reason: format!("thread pool: {e}"),
                    nodes: 0,
                    entries: 0,
                })?;
            pool.install(|| self.solve_rec(&board, 0))
        } else {
            self.solve_rec(&board, usize::MAX)
        }
    }

    pub fn solve_state(&self, state: &GameState) -> Result<bool, SolveError> {
        if state.to_move() != Player::Pusher {
            return Err(GameError::WrongTurn { expected: Player::Pusher, found: state.to_move() }.into());
        }
        self.solve_board(state.board())
    }

    /// A Pusher move from a Pusher-won state after which every Remover reply
    /// stays won, or `None` if the state is lost. Columns are those of
    /// `state`, canonical or not.
    pub fn winning_move(&self, state: &GameState) -> Result<Option<PusherMove>, SolveError> {
        if !self.solve_state(state)? {
            return Ok(None);
        }
        let gen = MoveGen::new(state.board(), self.spec.threshold());
        let order = canonical_order(state.board());
        for mv in self.ordered_moves(&gen) {
            if self.move_wins(&gen, &mv, usize::MAX)? {
                return Ok(Some(in_board_order(&gen.to_pusher_move(&mv), &order)));
            }
        }
        unreachable!("a won state has a winning move")
    }

    /// Remover's best reply on a Remover-to-move state: a column whose
    /// removal leaves a Pusher-lost position if one exists, else the column
    /// with the most pending chips.
    pub fn best_removal(&self, state: &GameState) -> Result<usize, SolveError> {
        let pending = state.pending().ok_or(GameError::WrongTurn {
            expected: Player::Remover,
            found: state.to_move(),
        })?;
        let mut fallback = (0, 0);
        for c in 0..state.board().columns().len() {
            let next = state.apply_remover(c)?;
            if !self.solve_state(&next)? {
                return Ok(c);
            }
            let n = pending.column(c).total();
            if n > fallback.1 {
                fallback = (c, n);
            }
        }
        Ok(fallback.0)
    }

    fn check_budget(&self) -> Result<(), SolveError> {
        let nodes = self.counters.nodes.load(Ordering::Relaxed);
        let over_nodes = self.config.node_budget.is_some_and(|b| nodes > b);
        let over_entries = self.config.max_entries.is_some_and(|m| self.store.len() > m);
        let over_time = self.config.time_limit.is_some_and(|t| self.started.elapsed() > t);
        if over_nodes || over_entries || over_time || self.aborted.load(Ordering::Relaxed) {
            self.aborted.store(true, Ordering::Relaxed);
            let reason = if over_nodes {
                "node budget exhausted"
            } else if over_entries {
                "store size limit reached"
            } else if over_time {
                "time limit reached"
            } else {
                "search aborted"
            };
            return Err(SolveError::Inconclusive {
                reason: reason.into(),
                nodes,
                entries: self.store.len(),
            });
        }
        Ok(())
    }

    fn ordered_moves(&self, gen: &MoveGen) -> Vec<MoveIdx> {
        let mut moves = gen.moves(self.config.prune_pusher);
        moves.sort_by_key(|m| Reverse(gen.total_pushed(m)));
        moves
    }

    fn solve_rec(&self, board: &Board, depth: usize) -> Result<bool, SolveError> {
        match board_terminal(board, self.spec.threshold()) {
            Terminal::PusherWin => return Ok(true),
            Terminal::PusherLoss => return Ok(false),
            Terminal::Ongoing => {}
        }
        let key = board.key();
        if let Some(v) = self.store.get(&key) {
            bump(&self.counters.exact_hits, 1);
            return Ok(v);
        }
        if self.config.domination != DominationMode::Off {
            match self.store.classify_with(board, self.config.domination) {
                Classification::Winning => return self.record_dominated(board, true),
                Classification::Losing => return self.record_dominated(board, false),
                Classification::Unknown => {}
            }
        }
        bump(&self.counters.nodes, 1);
        self.check_budget()?;

        let gen = MoveGen::new(board, self.spec.threshold());
        let moves = self.ordered_moves(&gen);
        bump(&self.counters.pusher_moves, moves.len() as u64);
        if self.config.prune_pusher {
            let full = symmetric_move_count(&gen);
            bump(&self.counters.pusher_pruned, full.saturating_sub(moves.len() as u64));
        }

        let wins = if depth < PARALLEL_DEPTH {
            let found = moves
                .par_iter()
                .map(|mv| self.move_wins(&gen, mv, depth + 1))
                .find_any(|r| !matches!(r, Ok(false)));
            match found {
                Some(Err(e)) => return Err(e),
                Some(Ok(w)) => w,
                None => false,
            }
        } else {
            let mut won = false;
            for mv in &moves {
                if self.move_wins(&gen, mv, depth.saturating_add(1))? {
                    won = true;
                    break;
                }
            }
            won
        };
        self.store.insert(board, wins);
        Ok(wins)
    }

    fn record_dominated(&self, board: &Board, winning: bool) -> Result<bool, SolveError> {
        bump(&self.counters.domination_hits, 1);
        if !self.config.compact {
            self.store.insert(board, winning);
        }
        Ok(winning)
    }

    /// Whether every Remover reply to `mv` leaves a Pusher-won state.
    fn move_wins(&self, gen: &MoveGen, mv: &MoveIdx, depth: usize) -> Result<bool, SolveError> {
        let children = gen.children(mv);
        // Cheap refutation pass: an already-lost child settles the move.
        for (_, _, child) in &children {
            if child.is_empty() || self.store.get(&child.key()) == Some(false) {
                return Ok(false);
            }
        }
        bump(&self.counters.remover_children, children.len() as u64);
        let mut children: Vec<((usize, u32), Board)> =
            children.into_iter().map(|(c, n, b)| ((c, n), b)).collect();
        if self.config.prune_remover && children.len() > 1 {
            let before = children.len();
            children = minimal_children(children);
            bump(&self.counters.remover_pruned, (before - children.len()) as u64);
        }
        children.sort_by_key(|((_, n), _)| Reverse(*n));
        for (_, child) in &children {
            if !self.solve_rec(child, depth)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Number of symmetry-reduced moves before pruning: per run of `g`
/// identical columns with `p` patterns, `C(p + g − 1, g)` multisets.
fn symmetric_move_count(gen: &MoveGen) -> u64 {
    let runs = gen.board().identical_runs();
    let mut total: u128 = 1;
    for (start, len) in runs {
        let p = gen.choices(start).len() as u128;
        let mut c: u128 = 1;
        for i in 0..len as u128 {
            c = c * (p + i) / (i + 1);
        }
        total = total.saturating_mul(c);
    }
    (total - 1).min(u64::MAX as u128) as u64
}

/// Solves the initial state of `spec` with the default configuration.
pub fn evaluate(spec: &GameSpec) -> Result<SolveResult, SolveError> {
    evaluate_with(spec, &SolverConfig::default())
}

pub fn evaluate_with(spec: &GameSpec, config: &SolverConfig) -> Result<SolveResult, SolveError> {
    let solver = Solver::new(spec, config.clone());
    let root = GameState::initial(spec);
    let wins = solver.solve_board(root.board())?;
    let stats = solver.stats();
    Ok(SolveResult { spec: spec.clone(), value: Value::from_pusher_wins(wins), closures: solver.into_store(), stats })
}
