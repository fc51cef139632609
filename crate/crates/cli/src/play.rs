//! Interactive play against the solver.
//!
//! Columns are numbered from 1 and keep their positions for the whole game.
//! Pusher moves are written as `column.row` or `column.row*count`, e.g.
//! `1.0*2 3.1`; Remover answers with a column number.

use std::io::{BufRead, Write};

use serde_json::json;

use chipgame::{legal_pusher_moves, GameSpec, GameState, Player, PusherMove, Solver, SolverConfig, Terminal};

use crate::{Failure, Report, OK, USAGE};

fn show(out: &mut dyn Write, state: &GameState) -> std::io::Result<()> {
    let cols: Vec<String> =
        state.board().columns().iter().enumerate().map(|(i, c)| format!("{}:{c}", i + 1)).collect();
    writeln!(out, "board {}", cols.join(" "))
}

/// Next nonblank line, or `None` at end of input.
fn prompt(input: &mut dyn BufRead, out: &mut dyn Write, text: &str) -> std::io::Result<Option<String>> {
    loop {
        write!(out, "{text}> ")?;
        out.flush()?;
        let mut line = String::new();
        if input.read_line(&mut line)? == 0 {
            writeln!(out)?;
            return Ok(None);
        }
        let line = line.trim();
        if !line.is_empty() {
            return Ok(Some(line.to_string()));
        }
    }
}

pub fn play(
    input: &mut dyn BufRead,
    out: &mut dyn Write,
    gamma: u32,
    sizes: &[usize],
    human_pushes: bool,
    config: SolverConfig,
) -> Result<Report, Failure> {
    let spec = GameSpec::new(gamma, sizes).map_err(Failure::usage)?;
    let solver = Solver::new(&spec, config);
    let mut state = GameState::initial(&spec);
    let width = spec.columns();
    let engine_wins = solver.solve_state(&state)? != human_pushes;
    writeln!(out, "Γ={gamma}, sizes={}; you play {}", spec.sizes_text(), if human_pushes { "Pusher" } else { "Remover" })?;
    writeln!(out, "the engine {} this game", if engine_wins { "wins" } else { "loses" })?;

    let mut moves = Vec::new();
    let mut rounds = 0;
    let abandoned = |moves: Vec<String>, rounds| Report {
        status: USAGE,
        summary: json!({ "gamma": gamma, "sizes": spec.sizes(), "winner": null, "rounds": rounds, "moves": moves }),
    };
    loop {
        show(out, &state)?;
        if state.terminal().map_err(Failure::usage)? != Terminal::Ongoing {
            break;
        }
        rounds += 1;

        let pushed = if human_pushes {
            loop {
                let Some(line) = prompt(input, out, "push")? else {
                    return Ok(abandoned(moves, rounds));
                };
                match PusherMove::parse(&line, width).and_then(|mv| state.apply_pusher(&mv)) {
                    Ok(next) => break next,
                    Err(e) => writeln!(out, "{e}")?,
                }
            }
        } else {
            let mv = match solver.winning_move(&state)? {
                Some(mv) => mv,
                None => legal_pusher_moves(&state, true).map_err(Failure::usage)?.swap_remove(0),
            };
            writeln!(out, "Pusher pushes {}", mv.to_text())?;
            state.apply_pusher(&mv).map_err(Failure::usage)?
        };
        let push = pushed.pending().map(PusherMove::to_text).unwrap_or_default();

        let (next, column) = if human_pushes {
            let c = solver.best_removal(&pushed)?;
            writeln!(out, "Remover clears column {}", c + 1)?;
            (pushed.apply_remover_keep_order(c).map_err(Failure::usage)?, c)
        } else {
            show(out, &pushed)?;
            loop {
                let Some(line) = prompt(input, out, "remove column")? else {
                    return Ok(abandoned(moves, rounds));
                };
                let chosen = line.parse::<usize>().ok().filter(|c| (1..=width).contains(c));
                let Some(c) = chosen else {
                    writeln!(out, "Remover must name one column from 1 to {width}")?;
                    continue;
                };
                match pushed.apply_remover_keep_order(c - 1) {
                    Ok(next) => break (next, c - 1),
                    Err(e) => writeln!(out, "{e}")?,
                }
            }
        };
        moves.push(format!("{push} / {}", column + 1));
        state = next;
    }

    let winner = match state.terminal().map_err(Failure::usage)? {
        Terminal::PusherWin => Player::Pusher,
        _ => Player::Remover,
    };
    writeln!(out, "{winner} wins after {rounds} rounds")?;
    Ok(Report {
        status: OK,
        summary: json!({ "gamma": gamma, "sizes": spec.sizes(), "winner": winner, "rounds": rounds, "moves": moves }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(input: &str, gamma: u32, sizes: &[usize], human_pushes: bool) -> (Report, String) {
        let mut out = Vec::new();
        let report = play(&mut input.as_bytes(), &mut out, gamma, sizes, human_pushes, SolverConfig::default())
            .unwrap_or_else(|f| panic!("{}", f.message));
        (report, String::from_utf8(out).unwrap())
    }

    #[test]
    fn illegal_pushes_are_refused() {
        // two one-chip columns, Γ = 1: pushing both chips wins
        let (report, text) = run("2.0*2\n3.0\n1.1\n1.0 2.0\n", 1, &[1, 1], true);
        assert!(text.contains("column 2 has 1 chip(s) at row 0, cannot push 2"), "{text}");
        assert!(text.contains("column 3 out of range"), "{text}");
        assert!(text.contains("column 1 has 0 chip(s) at row 1, cannot push 1"), "{text}");
        assert_eq!(report.summary["winner"], "Pusher");
    }

    #[test]
    fn remover_is_reprompted() {
        let (report, text) = run("0\nx\n1\n", 1, &[1], false);
        assert_eq!(text.matches("Remover must name one column").count(), 2);
        assert_eq!(report.summary["winner"], "Remover");
    }

    #[test]
    fn end_of_input_abandons() {
        let (report, _) = run("", 2, &[2, 2], true);
        assert_eq!(report.status, USAGE);
    }
}
