//! Exact solver, certificate verifier and strategy toolkit for the
//! Pusher/Remover chip game, whose outcome decides the paintability of
//! complete multipartite graphs.

pub mod closure;
pub mod game;
pub mod matching;
pub mod moves;
pub mod oracle;
pub mod order;
pub mod solver;
pub mod symmetric;
pub mod table;
pub mod verifier;

pub use closure::{ClosureError, ClosureFile, ClosureKind};
pub use game::{Board, Column, ColumnPush, GameError, GameSpec, GameState, Player, PusherMove, Row, Terminal};
pub use moves::legal_pusher_moves;
pub use order::{board_geq, column_geq};
pub use solver::{evaluate, evaluate_with, paintability, SolveError, SolveResult, Solver, SolverConfig, Value};
pub use verifier::{verify, verify_losing, verify_winning, Verdict};
