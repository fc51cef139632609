use chipgame::symmetric::{simulate_brick_game, RandomRemover};
use chipgame::{evaluate_with, paintability, ClosureKind, GameSpec, SolverConfig};

fn run(g: u32, sizes: &[usize]) -> (String, String, String) {
    let r = evaluate_with(&GameSpec::new(g, sizes).unwrap(), &SolverConfig::default()).unwrap();
    (
        r.closure(ClosureKind::Winning).to_text(),
        r.closure(ClosureKind::Losing).to_text(),
        serde_json::to_string(&r.stats).unwrap(),
    )
}

#[test]
fn single_threaded_runs_are_identical() {
    for (g, sizes) in [(4, vec![3, 3, 3, 3]), (5, vec![3, 3, 3, 3]), (4, vec![2, 2, 2, 3])] {
        assert_eq!(run(g, &sizes), run(g, &sizes));
    }
    let a = serde_json::to_string(&paintability(&[2, 2, 3]).unwrap()).unwrap();
    let b = serde_json::to_string(&paintability(&[2, 2, 3]).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn parallel_runs_agree_on_value() {
    let spec = GameSpec::new(5, &[3, 3, 3, 3]).unwrap();
    let one = evaluate_with(&spec, &SolverConfig::default()).unwrap();
    let four = evaluate_with(&spec, &SolverConfig { threads: 4, ..SolverConfig::default() }).unwrap();
    assert_eq!(one.value, four.value);
}

#[test]
fn seeded_brick_games_repeat() {
    let a = simulate_brick_game(3, 3, &mut RandomRemover::new(11)).unwrap();
    let b = simulate_brick_game(3, 3, &mut RandomRemover::new(11)).unwrap();
    assert_eq!(a, b);
}
