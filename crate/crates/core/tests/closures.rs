mod common;

use chipgame::verifier::{verify_with, VerifyOptions};
use chipgame::{evaluate_with, Board, ClosureFile, ClosureKind, Column, GameSpec, SolverConfig, Value};
use common::{small_specs, Reference};

fn columns_of(b: &Board) -> Vec<Vec<u8>> {
    b.columns().iter().map(|c| c.rows().to_vec()).collect()
}

fn all_members(closure: &ClosureFile, want_pusher_win: bool) -> bool {
    let mut reference = Reference::new(closure.spec.threshold() as u32, closure.spec.columns());
    closure.states.iter().all(|b| reference.pusher_wins(&columns_of(b)) == want_pusher_win)
}

#[test]
fn exported_closures_verify_and_round_trip() {
    for (g, sizes) in small_specs(6, 4) {
        let spec = GameSpec::new(g, &sizes).unwrap();
        let result = evaluate_with(&spec, &SolverConfig::default()).unwrap();
        for kind in [ClosureKind::Winning, ClosureKind::Losing] {
            let closure = result.closure(kind);
            let text = closure.to_text();
            let parsed = ClosureFile::parse(&text).unwrap();
            assert_eq!(parsed, closure);
            assert_eq!(parsed.to_text(), text);
            let report = verify_with(&parsed, &VerifyOptions::default()).unwrap();
            assert!(report.bad.is_empty(), "Γ={g} {sizes:?} {kind}: {:?}", report.bad);
            assert!(all_members(&closure, kind == ClosureKind::Winning), "Γ={g} {sizes:?} {kind}");
        }
        // the root is certified by the closure of the winning side
        let root = Board::new(sizes.iter().map(|&n| Column::filled(n, 0)).collect()).canonical();
        let side = if result.value == Value::PusherWins { ClosureKind::Winning } else { ClosureKind::Losing };
        assert!(result.closure(side).contains(&root), "Γ={g} {sizes:?}");
    }
}

/// Boards with one chip of `b` moved up a row (staying within Γ).
fn raised(b: &Board, threshold: u8) -> Vec<Board> {
    let mut out = Vec::new();
    for (i, col) in b.columns().iter().enumerate() {
        for (j, &r) in col.rows().iter().enumerate() {
            if r >= threshold {
                continue;
            }
            let mut rows = col.rows().to_vec();
            rows[j] = r + 1;
            let mut cols = b.columns().to_vec();
            cols[i] = Column::new(rows);
            out.push(Board::new(cols).canonical());
        }
    }
    out
}

#[test]
fn mutations_are_caught_or_harmless() {
    let mut detected = 0;
    let mut tried = 0;
    for (g, sizes) in small_specs(5, 4) {
        let spec = GameSpec::new(g, &sizes).unwrap();
        let cfg = SolverConfig { domination: chipgame::solver::DominationMode::Off, ..SolverConfig::default() };
        let result = evaluate_with(&spec, &cfg).unwrap();

        let losing = result.closure(ClosureKind::Losing);
        for (i, b) in losing.states.iter().enumerate() {
            for up in raised(b, spec.threshold()) {
                let mut states = losing.states.clone();
                states[i] = up;
                let mutated = ClosureFile::new(ClosureKind::Losing, spec.clone(), states);
                tried += 1;
                let report = verify_with(&mutated, &VerifyOptions::default()).unwrap();
                if report.bad.is_empty() {
                    assert!(all_members(&mutated, false), "accepted a wrong losing set for Γ={g} {sizes:?}");
                } else {
                    detected += 1;
                }
            }
        }

        let winning = result.closure(ClosureKind::Winning);
        for i in 0..winning.states.len() {
            let mut states = winning.states.clone();
            states.remove(i);
            let mutated = ClosureFile::new(ClosureKind::Winning, spec.clone(), states);
            tried += 1;
            let report = verify_with(&mutated, &VerifyOptions::default()).unwrap();
            if report.bad.is_empty() {
                assert!(all_members(&mutated, true));
            } else {
                detected += 1;
            }
        }
    }
    assert!(tried > 100, "only {tried} mutations");
    assert!(detected > 0);
}

#[test]
fn lone_initial_state_is_not_a_winning_closure() {
    let spec = GameSpec::new(5, &[3, 3, 3, 3]).unwrap();
    let root = Board::new(vec![Column::filled(3, 0); 4]);
    let closure = ClosureFile::new(ClosureKind::Winning, spec, vec![root]);
    let report = verify_with(&closure, &VerifyOptions::default()).unwrap();
    assert_eq!(report.bad.len(), 1);
}

#[test]
fn parse_errors_point_at_lines() {
    let text = "chip-closure v1; kind=winning; Γ=3; sizes=2,2\nΓ=3; sizes=2,2; board=[[0,0],[0,0]]\nΓ=3; sizes=2,2; board=[[0,0]\n";
    let err = ClosureFile::parse(text).unwrap_err().to_string();
    assert!(err.starts_with("line 3"), "{err}");
}
