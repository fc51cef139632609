//! The symmetric chip game and tools around it.
//!
//! Every column holds chips labelled `1..n` and Pusher picks a set of labels,
//! pushing the chip with each chosen label in every column where it is still
//! on the board. All chips of a label therefore share a row, and a label is
//! described by that row and the set of columns where its chip survives.

mod bounds;
mod brick;
mod pancolor;

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::game::Terminal;
use crate::solver::Value;

pub use bounds::{pol_bounds, PolBounds};
pub use brick::{
    brick_pusher_move, brick_tables, exhaustive_brick_game, growth_bounds, simulate_brick_game,
    simulate_with_chips, BrickBoard, BrickConfig, BrickError, BrickOutcome, BrickPush, Cell, ExhaustiveReport,
    GreedyRemover, RandomRemover, RemoverPolicy, RoundRobinRemover, StrategyFailure,
};
pub use pancolor::{pancolor_adapter, Colorer, Hypergraph, PancolorOutcome, Phase, Presenter, Round, Transcript};

/// Most columns a symmetric game may have.
pub const MAX_COLUMNS: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymError {
    #[error("invalid symmetric game: {0}")]
    Invalid(String),
    #[error("illegal move: {0}")]
    IllegalMove(String),
    #[error("inconclusive after {nodes} nodes")]
    Inconclusive { nodes: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label {
    pub row: u8,
    /// Bit `i` set while the chip in column `i` is on the board.
    pub live: u8,
}

impl Label {
    pub fn is_live(&self) -> bool {
        self.live != 0
    }
}

/// A Pusher-to-move position of the symmetric game.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymState {
    k: u8,
    columns: usize,
    labels: Vec<Label>,
}

impl SymState {
    pub fn initial(k: u32, n: usize, columns: usize) -> Result<Self, SymError> {
        if k == 0 || k > 254 {
            return Err(SymError::Invalid(format!("threshold {k} outside 1..=254")));
        }
        if n == 0 {
            return Err(SymError::Invalid("no labels".into()));
        }
        if columns == 0 || columns > MAX_COLUMNS {
            return Err(SymError::Invalid(format!("{columns} columns, expected 1..={MAX_COLUMNS}")));
        }
        let all = ((1u16 << columns) - 1) as u8;
        Ok(Self { k: k as u8, columns, labels: vec![Label { row: 0, live: all }; n] })
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn columns(&self) -> usize {
        self.columns
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn terminal(&self) -> Terminal {
        if self.labels.iter().any(|l| l.is_live() && l.row >= self.k) {
            Terminal::PusherWin
        } else if self.labels.iter().all(|l| !l.is_live()) {
            Terminal::PusherLoss
        } else {
            Terminal::Ongoing
        }
    }

    /// A push is a nonempty set of distinct labels still on the board.
    pub fn check_push(&self, set: &[usize]) -> Result<(), SymError> {
        if set.is_empty() {
            return Err(SymError::IllegalMove("empty push".into()));
        }
        let mut seen = 0u128;
        for &j in set {
            if j >= self.labels.len() {
                return Err(SymError::IllegalMove(format!("label {} out of range", j + 1)));
            }
            if seen >> j & 1 == 1 {
                return Err(SymError::IllegalMove(format!("label {} pushed twice", j + 1)));
            }
            seen |= 1 << j;
            if !self.labels[j].is_live() {
                return Err(SymError::IllegalMove(format!("label {} has been removed", j + 1)));
            }
        }
        Ok(())
    }

    /// Pushes `set`, then removes the pushed chips of `column`.
    pub fn after(&self, set: &[usize], column: usize) -> Result<SymState, SymError> {
        self.check_push(set)?;
        if column >= self.columns {
            return Err(SymError::IllegalMove(format!("column {} out of range", column + 1)));
        }
        let mut next = self.clone();
        for &j in set {
            let l = &mut next.labels[j];
            l.row += 1;
            l.live &= !(1u8 << column);
        }
        Ok(next)
    }

    /// Pushes up to interchanging labels with equal row and live columns:
    /// for each such class, the first few labels of the class.
    pub fn pushes(&self) -> Vec<Vec<usize>> {
        let mut classes: Vec<(Label, Vec<usize>)> = Vec::new();
        for (j, l) in self.labels.iter().enumerate() {
            if !l.is_live() {
                continue;
            }
            match classes.iter_mut().find(|(c, _)| c == l) {
                Some((_, members)) => members.push(j),
                None => classes.push((*l, vec![j])),
            }
        }
        let mut out = Vec::new();
        let mut pick = vec![0usize; classes.len()];
        loop {
            let mut i = 0;
            loop {
                if i == classes.len() {
                    return out;
                }
                if pick[i] < classes[i].1.len() {
                    pick[i] += 1;
                    break;
                }
                pick[i] = 0;
                i += 1;
            }
            out.push(classes.iter().zip(&pick).flat_map(|((_, m), &p)| m[..p].iter().copied()).collect());
        }
    }

    /// Live labels, sorted, minimized over column permutations.
    fn key(&self, perms: &[Vec<usize>]) -> Vec<Label> {
        perms
            .iter()
            .map(|p| {
                let mut v: Vec<Label> = self
                    .labels
                    .iter()
                    .filter(|l| l.is_live())
                    .map(|l| {
                        let live = (0..self.columns).filter(|&c| l.live >> c & 1 == 1).fold(0u8, |m, c| m | 1 << p[c]);
                        Label { row: l.row, live }
                    })
                    .collect();
                v.sort_unstable();
                v
            })
            .min()
            .unwrap_or_default()
    }
}

impl fmt::Display for SymState {
    /// `k=3; r=2; labels=[1:{1,2},0:{},…]` with 1-based columns.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k={}; r={}; labels=[", self.k, self.columns)?;
        for (j, l) in self.labels.iter().enumerate() {
            if j > 0 {
                f.write_str(",")?;
            }
            let cols: Vec<String> =
                (0..self.columns).filter(|&c| l.live >> c & 1 == 1).map(|c| (c + 1).to_string()).collect();
            write!(f, "{}:{{{}}}", l.row, cols.join(","))?;
        }
        f.write_str("]")
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Exact search of one symmetric game with a memo over states up to label
/// and column symmetry.
pub struct SymSolver {
    root: SymState,
    perms: Vec<Vec<usize>>,
    memo: HashMap<Vec<Label>, bool>,
    nodes: u64,
    budget: Option<u64>,
}

impl SymSolver {
    pub fn new(k: u32, n: usize, columns: usize) -> Result<Self, SymError> {
        let root = SymState::initial(k, n, columns)?;
        Ok(Self { perms: permutations(columns), root, memo: HashMap::new(), nodes: 0, budget: None })
    }

    /// Stop with [`SymError::Inconclusive`] after this many expanded states.
    pub fn with_budget(mut self, budget: Option<u64>) -> Self {
        self.budget = budget;
        self
    }

    pub fn root(&self) -> &SymState {
        &self.root
    }

    pub fn nodes(&self) -> u64 {
        self.nodes
    }

    pub fn evaluate(&mut self) -> Result<Value, SymError> {
        let root = self.root.clone();
        self.pusher_wins(&root).map(Value::from_pusher_wins)
    }

    pub fn pusher_wins(&mut self, state: &SymState) -> Result<bool, SymError> {
        match state.terminal() {
            Terminal::PusherWin => return Ok(true),
            Terminal::PusherLoss => return Ok(false),
            Terminal::Ongoing => {}
        }
        let key = state.key(&self.perms);
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        self.nodes += 1;
        if self.budget.is_some_and(|b| self.nodes > b) {
            return Err(SymError::Inconclusive { nodes: self.nodes });
        }
        let mut wins = false;
        for set in state.pushes() {
            if self.push_wins(state, &set)? {
                wins = true;
                break;
            }
        }
        self.memo.insert(key, wins);
        Ok(wins)
    }

    fn push_wins(&mut self, state: &SymState, set: &[usize]) -> Result<bool, SymError> {
        for c in 0..state.columns {
            if !self.pusher_wins(&state.after(set, c)?)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// A push that wins from `state`, if there is one.
    pub fn winning_push(&mut self, state: &SymState) -> Result<Option<Vec<usize>>, SymError> {
        for set in state.pushes() {
            if self.push_wins(state, &set)? {
                return Ok(Some(set));
            }
        }
        Ok(None)
    }

    /// A column whose removal leaves Pusher lost, or the first column if
    /// every removal loses for Remover.
    pub fn saving_removal(&mut self, state: &SymState, set: &[usize]) -> Result<usize, SymError> {
        for c in 0..state.columns {
            if !self.pusher_wins(&state.after(set, c)?)? {
                return Ok(c);
            }
        }
        Ok(0)
    }
}

pub fn symmetric_evaluate(k: u32, n: usize, columns: usize) -> Result<Value, SymError> {
    SymSolver::new(k, n, columns)?.evaluate()
}
