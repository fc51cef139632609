//! The brick strategy for Pusher on `m` columns.
//!
//! Rows are numbered as in the strategy: chips start at row `k` and Pusher
//! wins by getting a chip to row 0. A brick at row `r` is `f(r)` chips and a
//! fraction is `g(r) = ⌈f(r)/(m−1)⌉` chips. Pushing a brick from row `r`
//! gives a brick plus a fraction at row `r − 1`; `m − 1` fractions in one
//! cell merge into a brick and the leftover chips become loose chips that
//! are never pushed again.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::game::{GameSpec, GameState, PusherMove, Terminal};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BrickError {
    #[error("brick strategy needs m ≥ 2 columns, got {0}")]
    TooFewColumns(usize),
    #[error("threshold {0} is too large")]
    ThresholdTooLarge(usize),
    #[error("brick table check failed at row {row}: {msg}")]
    Table { row: usize, msg: String },
    #[error("column {column} has no full brick")]
    NoFullBrick { column: usize },
}

/// Brick and fraction sizes for `m` columns and start row `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BrickConfig {
    pub m: usize,
    pub k: usize,
    /// `f[r]` chips per brick at row `r`.
    pub f: Vec<u64>,
    /// `g[r]` chips per fraction at row `r`.
    pub g: Vec<u64>,
}

impl BrickConfig {
    /// Chips per column in the game the strategy wins: `m(k+1)f(k)`.
    pub fn column_chips(&self) -> u64 {
        (self.m * (self.k + 1)) as u64 * self.f[self.k]
    }

    /// Chips spilled when `m − 1` fractions at row `r` merge.
    pub fn spill(&self, r: usize) -> u64 {
        (self.m as u64 - 1) * self.g[r] - self.f[r]
    }
}

pub fn brick_tables(m: usize, k: usize) -> Result<BrickConfig, BrickError> {
    if m < 2 {
        return Err(BrickError::TooFewColumns(m));
    }
    let d = m as u64 - 1;
    let mut f = vec![1u64];
    let mut g = vec![1u64];
    for r in 1..=k {
        let next = f[r - 1]
            .checked_add(g[r - 1])
            .ok_or(BrickError::ThresholdTooLarge(k))?;
        f.push(next);
        g.push(next.div_ceil(d));
    }
    let cfg = BrickConfig { m, k, f, g };
    for r in 0..=k {
        check_row(&cfg, r)?;
    }
    Ok(cfg)
}

/// `f(r) ≤ Σ_{j≤r} (m/(m−1))^j < m (m/(m−1))^r` and `(m−1)g(r) ≥ f(r)`.
fn check_row(cfg: &BrickConfig, r: usize) -> Result<(), BrickError> {
    let (sum, cap) = growth_bounds(cfg.m, r);
    let f = BigRational::from_integer(BigInt::from(cfg.f[r]));
    let fail = |msg: String| Err(BrickError::Table { row: r, msg });
    if f > sum {
        return fail(format!("f = {} exceeds the geometric sum {sum}", cfg.f[r]));
    }
    if sum >= cap {
        return fail(format!("geometric sum {sum} is not below {cap}"));
    }
    if (cfg.m as u64 - 1) * cfg.g[r] < cfg.f[r] {
        return fail("fractions cannot merge into a brick".into());
    }
    Ok(())
}

/// `(Σ_{j=0}^{r} q^j, m q^r)` with `q = m/(m−1)`, exactly.
pub fn growth_bounds(m: usize, r: usize) -> (BigRational, BigRational) {
    let q = BigRational::new(BigInt::from(m), BigInt::from(m - 1));
    let mut power = BigRational::one();
    let mut sum = BigRational::zero();
    for _ in 0..r {
        sum += &power;
        power *= &q;
    }
    sum += &power;
    (sum, power * BigInt::from(m))
}

/// Contents of one row of one column.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Cell {
    pub full: u32,
    pub frac: u32,
    pub loose: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BrickBoard {
    /// `columns[c][r]` for rows `0..=k`.
    columns: Vec<Vec<Cell>>,
}

impl BrickBoard {
    /// `chips` per column at row `k`, cut into as many bricks as fit.
    pub fn initial(cfg: &BrickConfig, chips: u64) -> Self {
        let mut col = vec![Cell::default(); cfg.k + 1];
        col[cfg.k].full = (chips / cfg.f[cfg.k]) as u32;
        col[cfg.k].loose = chips % cfg.f[cfg.k];
        Self { columns: vec![col; cfg.m] }
    }

    pub fn columns(&self) -> &[Vec<Cell>] {
        &self.columns
    }

    pub fn cell(&self, column: usize, row: usize) -> Cell {
        self.columns[column][row]
    }

    /// Chips in one cell.
    pub fn chips(&self, cfg: &BrickConfig, column: usize, row: usize) -> u64 {
        let c = self.columns[column][row];
        c.full as u64 * cfg.f[row] + c.frac as u64 * cfg.g[row] + c.loose
    }

    /// Bricks in one cell, counting a fraction as `1/(m−1)`.
    pub fn mass(&self, cfg: &BrickConfig, column: usize, row: usize) -> BigRational {
        let c = self.columns[column][row];
        BigRational::new(BigInt::from(c.full as u64 * (cfg.m as u64 - 1) + c.frac as u64), BigInt::from(cfg.m - 1))
    }

    pub fn total_mass(&self, cfg: &BrickConfig) -> BigRational {
        let mut total = BigRational::zero();
        for c in 0..self.columns.len() {
            for r in 0..=cfg.k {
                total += self.mass(cfg, c, r);
            }
        }
        total
    }

    pub fn spilled(&self) -> u64 {
        self.columns.iter().flatten().map(|c| c.loose).sum()
    }

    /// Some chip has reached row 0.
    pub fn pusher_won(&self) -> bool {
        self.columns.iter().any(|col| {
            let c = col[0];
            c.full > 0 || c.frac > 0 || c.loose > 0
        })
    }

    /// Lowest row holding a full brick in `column`.
    pub fn lowest_full(&self, column: usize) -> Option<usize> {
        self.columns[column].iter().position(|c| c.full > 0)
    }

    /// Pushes the bricks of `push` and removes the one in `removed`, then
    /// merges fractions.
    pub fn apply(&mut self, cfg: &BrickConfig, push: &BrickPush, removed: usize) {
        let d = cfg.m as u32 - 1;
        for (c, &r) in push.rows.iter().enumerate() {
            let col = &mut self.columns[c];
            col[r].full -= 1;
            if c == removed {
                continue;
            }
            let cell = &mut col[r - 1];
            cell.full += 1;
            cell.frac += 1;
            if cell.frac >= d {
                cell.frac -= d;
                cell.full += 1;
                cell.loose += cfg.spill(r - 1);
            }
        }
    }

    /// The shape of every column: with `r_C` the lowest row holding a full
    /// brick, at most 2 bricks at `r_C` (unless `r_C = k`) and at most 1
    /// brick in each row strictly between `r_C` and `k`.
    pub fn check_shape(&self, cfg: &BrickConfig) -> Result<(), String> {
        let one = BigRational::one();
        let two = &one + &one;
        for c in 0..self.columns.len() {
            let Some(rc) = self.lowest_full(c) else { continue };
            if rc != cfg.k && self.mass(cfg, c, rc) > two {
                return Err(format!("column {c}: {} bricks at row {rc}", self.mass(cfg, c, rc)));
            }
            for r in rc + 1..cfg.k {
                if self.mass(cfg, c, r) > one {
                    return Err(format!("column {c}: {} bricks at row {r}", self.mass(cfg, c, r)));
                }
            }
        }
        Ok(())
    }
}

/// One brick-strategy move: the row of the brick pushed in each column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BrickPush {
    pub rows: Vec<usize>,
    pub chips: Vec<u64>,
}

impl BrickPush {
    /// The same push on a chip board in the game's own orientation, where
    /// row `r` here is row `k − r` there.
    pub fn to_pusher_move(&self, k: usize) -> PusherMove {
        let mut mv = PusherMove::empty(self.rows.len());
        for (c, (&r, &n)) in self.rows.iter().zip(&self.chips).enumerate() {
            mv.add(c, (k - r) as u8, n as u32);
        }
        mv
    }
}

/// Pushes the lowest full brick of every column.
pub fn brick_pusher_move(board: &BrickBoard, cfg: &BrickConfig) -> Result<BrickPush, BrickError> {
    let rows = (0..board.columns.len())
        .map(|c| board.lowest_full(c).ok_or(BrickError::NoFullBrick { column: c }))
        .collect::<Result<Vec<_>, _>>()?;
    let chips = rows.iter().map(|&r| cfg.f[r]).collect();
    Ok(BrickPush { rows, chips })
}

/// Chooses which column's pushed brick to delete.
pub trait RemoverPolicy {
    fn choose(&mut self, board: &BrickBoard, push: &BrickPush, round: usize) -> usize;
}

pub struct RandomRemover(ChaCha8Rng);

impl RandomRemover {
    pub fn new(seed: u64) -> Self {
        Self(ChaCha8Rng::seed_from_u64(seed))
    }
}

impl RemoverPolicy for RandomRemover {
    fn choose(&mut self, board: &BrickBoard, _: &BrickPush, _: usize) -> usize {
        self.0.gen_range(0..board.columns.len())
    }
}

/// Deletes the push that gets closest to row 0, first column on ties.
pub struct GreedyRemover;

impl RemoverPolicy for GreedyRemover {
    fn choose(&mut self, _: &BrickBoard, push: &BrickPush, _: usize) -> usize {
        (0..push.rows.len()).min_by_key(|&c| push.rows[c]).unwrap_or(0)
    }
}

pub struct RoundRobinRemover;

impl RemoverPolicy for RoundRobinRemover {
    fn choose(&mut self, board: &BrickBoard, _: &BrickPush, round: usize) -> usize {
        round % board.columns.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct StrategyFailure {
    pub round: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct BrickOutcome {
    pub rounds: usize,
    /// Loose chips left on the board by merges.
    pub spilled: u64,
    /// Brick mass (`(m−1)` fractions make one brick), constant over the game.
    pub bricks: String,
    /// One line per round.
    #[serde(skip)]
    pub log: Vec<String>,
}

/// Tracks a brick game next to the real chip game it describes.
#[derive(Clone)]
struct Tracker<'a> {
    cfg: &'a BrickConfig,
    board: BrickBoard,
    state: Option<GameState>,
    mass: BigRational,
}

impl<'a> Tracker<'a> {
    fn new(cfg: &'a BrickConfig, chips: u64) -> Result<Self, StrategyFailure> {
        let board = BrickBoard::initial(cfg, chips);
        let fail = |reason: String| StrategyFailure { round: 0, reason };
        // With k = 0 the chips start on the target row.
        let state = if cfg.k == 0 {
            None
        } else {
            let spec = GameSpec::new(cfg.k as u32, &vec![chips as usize; cfg.m]).map_err(|e| fail(e.to_string()))?;
            Some(GameState::initial(&spec))
        };
        let mass = board.total_mass(cfg);
        Ok(Self { cfg, board, state, mass })
    }

    fn won(&self) -> bool {
        self.board.pusher_won()
    }

    fn push(&self, round: usize) -> Result<BrickPush, StrategyFailure> {
        brick_pusher_move(&self.board, self.cfg).map_err(|e| StrategyFailure { round, reason: e.to_string() })
    }

    fn play(&mut self, push: &BrickPush, removed: usize, round: usize) -> Result<(), StrategyFailure> {
        let fail = |reason: String| StrategyFailure { round, reason };
        self.board.apply(self.cfg, push, removed);
        if let Some(state) = &self.state {
            let mv = push.to_pusher_move(self.cfg.k);
            let next = state
                .apply_pusher(&mv)
                .and_then(|s| s.apply_remover_keep_order(removed))
                .map_err(|e| fail(format!("chip game rejected the round: {e}")))?;
            self.state = Some(next);
        }
        self.check(round)
    }

    fn check(&self, round: usize) -> Result<(), StrategyFailure> {
        let fail = |reason: String| Err(StrategyFailure { round, reason });
        let mass = self.board.total_mass(self.cfg);
        if mass < self.mass {
            return fail(format!("brick mass fell from {} to {mass}", self.mass));
        }
        if let Err(e) = self.board.check_shape(self.cfg) {
            return fail(e);
        }
        if let Some(state) = &self.state {
            let k = self.cfg.k;
            for (c, col) in state.board().columns().iter().enumerate() {
                for r in 0..=k {
                    let real = col.count_at((k - r) as u8) as u64;
                    let tracked = self.board.chips(self.cfg, c, r);
                    if real != tracked {
                        return fail(format!("column {c} row {r}: {real} chips on the board, {tracked} tracked"));
                    }
                }
            }
            let real_win = state.terminal().map(|t| t == Terminal::PusherWin).unwrap_or(false);
            if real_win != self.won() {
                return fail("chip game and brick board disagree on the winner".into());
            }
        }
        Ok(())
    }

    fn outcome(&self, rounds: usize, log: Vec<String>) -> BrickOutcome {
        BrickOutcome { rounds, spilled: self.board.spilled(), bricks: self.mass.to_string(), log }
    }
}

/// Plays the brick strategy against `remover` until Pusher wins. Every
/// round checks the brick shape, brick mass and the real chip board.
pub fn simulate_brick_game(
    m: usize,
    k: usize,
    remover: &mut dyn RemoverPolicy,
) -> Result<BrickOutcome, StrategyFailure> {
    let cfg = brick_tables(m, k).map_err(|e| StrategyFailure { round: 0, reason: e.to_string() })?;
    simulate_with_chips(&cfg, cfg.column_chips(), remover)
}

/// As [`simulate_brick_game`] with a chosen number of chips per column.
pub fn simulate_with_chips(
    cfg: &BrickConfig,
    chips: u64,
    remover: &mut dyn RemoverPolicy,
) -> Result<BrickOutcome, StrategyFailure> {
    let mut t = Tracker::new(cfg, chips)?;
    let mut round = 0;
    let mut log = Vec::new();
    while !t.won() {
        round += 1;
        let push = t.push(round)?;
        let removed = remover.choose(&t.board, &push, round - 1);
        if removed >= cfg.m {
            return Err(StrategyFailure { round, reason: format!("policy chose column {removed}") });
        }
        t.play(&push, removed, round)?;
        let lowest: Vec<String> = (0..cfg.m)
            .map(|c| t.board.lowest_full(c).map_or("-".into(), |r| r.to_string()))
            .collect();
        log.push(format!(
            "round {round}: push {}; removed column {}; lowest full bricks [{}]; spilled {}",
            push.to_pusher_move(cfg.k).to_text(),
            removed + 1,
            lowest.join(","),
            t.board.spilled()
        ));
    }
    Ok(t.outcome(round, log))
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct ExhaustiveReport {
    /// Distinct brick boards reached.
    pub states: usize,
    /// Longest game over all Remover choices.
    pub max_rounds: usize,
}

/// Plays the brick strategy against every Remover choice sequence.
pub fn exhaustive_brick_game(m: usize, k: usize) -> Result<ExhaustiveReport, StrategyFailure> {
    let cfg = brick_tables(m, k).map_err(|e| StrategyFailure { round: 0, reason: e.to_string() })?;
    let t = Tracker::new(&cfg, cfg.column_chips())?;
    let mut seen = HashMap::new();
    let max_rounds = explore(t, 0, &mut seen)?;
    Ok(ExhaustiveReport { states: seen.len(), max_rounds })
}

/// Longest remaining game from `t`, memoized on the brick board.
fn explore(t: Tracker<'_>, round: usize, seen: &mut HashMap<BrickBoard, usize>) -> Result<usize, StrategyFailure> {
    if t.won() {
        return Ok(0);
    }
    if let Some(&d) = seen.get(&t.board) {
        return Ok(d);
    }
    let push = t.push(round + 1)?;
    let mut longest = 0;
    for removed in 0..t.cfg.m {
        let mut next = t.clone();
        next.play(&push, removed, round + 1)?;
        longest = longest.max(1 + explore(next, round + 1, seen)?);
    }
    seen.insert(t.board.clone(), longest);
    Ok(longest)
}
