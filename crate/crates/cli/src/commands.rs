use std::fs;
use std::io::Write;
use std::path::Path;

use serde_json::json;

use chipgame::oracle::{painter_wins, painter_wins_unreduced, MultipartiteGraph, UNREDUCED_VERTEX_LIMIT};
use chipgame::solver::{default_bounds, paintability_with};
use chipgame::symmetric::{
    exhaustive_brick_game, pancolor_adapter, pol_bounds, simulate_brick_game, Colorer, GreedyRemover, Presenter,
    RandomRemover, RemoverPolicy, RoundRobinRemover, SymError, SymSolver,
};
use chipgame::table;
use chipgame::verifier::{verify_with, VerifyOptions};
use chipgame::{evaluate_with, ClosureFile, ClosureKind, GameSpec, SolverConfig, Value};

use crate::{Failure, RemoverKind, Report, OK, REJECTED};

fn spoken(v: Value) -> &'static str {
    match v {
        Value::PusherWins => "Pusher wins",
        Value::RemoverWins => "Remover wins",
    }
}

fn sizes_text(sizes: &[usize]) -> String {
    sizes.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

pub fn solve(
    out: &mut dyn Write,
    gamma: u32,
    sizes: &[usize],
    winning_out: Option<&Path>,
    losing_out: Option<&Path>,
    config: &SolverConfig,
) -> Result<Report, Failure> {
    let spec = GameSpec::new(gamma, sizes).map_err(Failure::usage)?;
    let result = evaluate_with(&spec, config)?;
    let s = &result.stats;
    writeln!(out, "Γ={gamma} sizes={}: {}", spec.sizes_text(), spoken(result.value))?;
    writeln!(
        out,
        "expanded {} states; stored {} winning and {} losing",
        s.nodes, s.winning_states, s.losing_states
    )?;
    let mut written = serde_json::Map::new();
    for (kind, path) in [(ClosureKind::Winning, winning_out), (ClosureKind::Losing, losing_out)] {
        if let Some(path) = path {
            let closure = result.closure(kind);
            fs::write(path, closure.to_text())?;
            writeln!(out, "wrote {kind} closure ({} states) to {}", closure.states.len(), path.display())?;
            written.insert(kind.to_string(), json!({ "path": path.display().to_string(), "states": closure.states.len() }));
        }
    }
    Ok(Report {
        status: OK,
        summary: json!({
            "gamma": gamma,
            "sizes": spec.sizes(),
            "value": result.value,
            "stats": result.stats,
            "closures": written,
        }),
    })
}

pub fn paint(
    out: &mut dyn Write,
    sizes: &[usize],
    low: Option<u32>,
    high: Option<u32>,
    config: &SolverConfig,
) -> Result<Report, Failure> {
    let (dlow, dhigh) = default_bounds(sizes);
    let (low, high) = (low.unwrap_or(dlow), high.unwrap_or(dhigh));
    let report = paintability_with(sizes, low, high, config)?;
    for (g, v, stats) in &report.evaluations {
        writeln!(out, "Γ={g}: {} ({} states expanded)", spoken(*v), stats.nodes)?;
    }
    let known = table::lookup(sizes);
    let cell = |v: Option<u32>| v.map_or("-".to_string(), |v| v.to_string());
    writeln!(out, "{:<16} {:>11} {:>9} {:>11}", "graph", "known lower", "computed", "known upper")?;
    writeln!(
        out,
        "{:<16} {:>11} {:>9} {:>11}",
        table::profile_name(sizes),
        cell(known.map(|r| r.lower)),
        report.value,
        cell(known.map(|r| r.upper))
    )?;
    if let Some(row) = known {
        if row.value != report.value {
            writeln!(out, "note: the published value is {}", row.value)?;
        }
    }
    let evaluations: Vec<_> = report
        .evaluations
        .iter()
        .map(|(g, v, s)| json!({ "gamma": g, "value": v, "nodes": s.nodes }))
        .collect();
    Ok(Report {
        status: OK,
        summary: json!({
            "sizes": report.sizes,
            "low": low,
            "high": high,
            "value": report.value,
            "known": known,
            "evaluations": evaluations,
        }),
    })
}

pub fn verify(out: &mut dyn Write, file: &Path, scan_all: bool, threads: usize) -> Result<Report, Failure> {
    let text = fs::read_to_string(file).map_err(|e| Failure::usage(format!("{}: {e}", file.display())))?;
    let closure = ClosureFile::parse(&text).map_err(|e| Failure::usage(format!("{}: {e}", file.display())))?;
    let report =
        verify_with(&closure, &VerifyOptions { scan_all, threads }).map_err(|e| Failure::usage(e.to_string()))?;
    let header = format!("{} closure, Γ={}, sizes={}", closure.kind, closure.spec.threshold(), closure.spec.sizes_text());
    if report.bad.is_empty() {
        writeln!(out, "valid {header}: {} states", report.states)?;
    } else {
        writeln!(out, "invalid {header}: {} of {} states checked bad", report.bad.len(), report.states)?;
        for bad in &report.bad {
            let reason = serde_json::to_value(bad.reason).unwrap_or_default();
            write!(out, "bad state {}: {} ({})", bad.index + 1, bad.state, reason.as_str().unwrap_or(""))?;
            if let Some(mv) = &bad.pusher_move {
                write!(out, " push {mv}")?;
            }
            writeln!(out)?;
        }
    }
    Ok(Report {
        status: if report.bad.is_empty() { OK } else { REJECTED },
        summary: json!({
            "file": file.display().to_string(),
            "kind": closure.kind,
            "states": report.states,
            "valid": report.bad.is_empty(),
            "bad": report.bad,
        }),
    })
}

pub fn brick_sim(
    out: &mut dyn Write,
    m: usize,
    k: usize,
    remover: RemoverKind,
    trials: u64,
    seed: u64,
    transcript: Option<&Path>,
) -> Result<Report, Failure> {
    let cfg = chipgame::symmetric::brick_tables(m, k).map_err(Failure::usage)?;
    writeln!(out, "m={m} k={k}: {} chips per column, f={:?}", cfg.column_chips(), cfg.f)?;
    if remover == RemoverKind::Exhaustive {
        return match exhaustive_brick_game(m, k) {
            Ok(r) => {
                writeln!(out, "Pusher wins against every Remover: {} boards, longest game {} rounds", r.states, r.max_rounds)?;
                Ok(Report { status: OK, summary: json!({ "m": m, "k": k, "remover": "exhaustive", "report": r, "failures": 0 }) })
            }
            Err(f) => {
                writeln!(out, "strategy failed in round {}: {}", f.round, f.reason)?;
                Ok(Report {
                    status: REJECTED,
                    summary: json!({ "m": m, "k": k, "remover": "exhaustive", "failure": f, "failures": 1 }),
                })
            }
        };
    }

    let mut log = String::new();
    let mut failures = Vec::new();
    let (mut shortest, mut longest) = (usize::MAX, 0);
    let mut bricks = String::new();
    for trial in 0..trials {
        let mut policy: Box<dyn RemoverPolicy> = match remover {
            RemoverKind::Random => Box::new(RandomRemover::new(seed.wrapping_add(trial))),
            RemoverKind::Greedy => Box::new(GreedyRemover),
            _ => Box::new(RoundRobinRemover),
        };
        log.push_str(&format!("trial {}\n", trial + 1));
        match simulate_brick_game(m, k, policy.as_mut()) {
            Ok(o) => {
                writeln!(out, "trial {}: Pusher wins in {} rounds, {} chips spilled", trial + 1, o.rounds, o.spilled)?;
                for line in &o.log {
                    log.push_str(line);
                    log.push('\n');
                }
                shortest = shortest.min(o.rounds);
                longest = longest.max(o.rounds);
                bricks = o.bricks;
            }
            Err(f) => {
                writeln!(out, "trial {}: strategy failed in round {}: {}", trial + 1, f.round, f.reason)?;
                log.push_str(&format!("failed in round {}: {}\n", f.round, f.reason));
                failures.push(json!({ "trial": trial + 1, "round": f.round, "reason": f.reason }));
            }
        }
    }
    if let Some(path) = transcript {
        fs::write(path, &log)?;
    }
    let rounds = if longest > 0 { json!({ "min": shortest, "max": longest }) } else { json!(null) };
    Ok(Report {
        status: if failures.is_empty() { OK } else { REJECTED },
        summary: json!({
            "m": m,
            "k": k,
            "remover": remover_name(remover),
            "trials": trials,
            "seed": seed,
            "rounds": rounds,
            "bricks": bricks,
            "failures": failures.len(),
            "failed": failures,
        }),
    })
}

fn remover_name(r: RemoverKind) -> &'static str {
    match r {
        RemoverKind::Exhaustive => "exhaustive",
        RemoverKind::Random => "random",
        RemoverKind::Greedy => "greedy",
        RemoverKind::RoundRobin => "round-robin",
    }
}

pub fn bounds(out: &mut dyn Write, k: u32, r: u32) -> Result<Report, Failure> {
    let b = pol_bounds(k, r).map_err(Failure::usage)?;
    writeln!(out, "lower {}", b.lower)?;
    writeln!(out, "upper {}", b.upper)?;
    Ok(Report {
        status: OK,
        summary: json!({ "k": k, "r": r, "lower": b.lower.to_string(), "upper": b.upper.to_string() }),
    })
}

fn sym_failure(e: SymError) -> Failure {
    match e {
        SymError::Inconclusive { .. } => Failure::inconclusive(e),
        other => Failure::usage(other),
    }
}

pub fn sym_solve(
    out: &mut dyn Write,
    k: u32,
    n: usize,
    r: usize,
    nodes: Option<u64>,
    transcript: Option<&Path>,
) -> Result<Report, Failure> {
    let mut solver = SymSolver::new(k, n, r).map_err(sym_failure)?.with_budget(nodes);
    let value = solver.evaluate().map_err(sym_failure)?;
    writeln!(out, "symmetric game k={k} n={n} r={r}: {} ({} states expanded)", spoken(value), solver.nodes())?;
    let mut outcome = None;
    if let Some(path) = transcript {
        let mut colorer = SymSolver::new(k, n, r).map_err(sym_failure)?.with_budget(nodes);
        let t = pancolor_adapter(k, n, r, Presenter::Chip(&mut solver), Colorer::Chip(&mut colorer))
            .map_err(sym_failure)?;
        fs::write(path, t.to_text())?;
        if let Some(e) = &t.error {
            writeln!(out, "coloring game stopped: {e}")?;
            return Ok(Report { status: REJECTED, summary: json!({ "k": k, "n": n, "r": r, "value": value, "error": e }) });
        }
        writeln!(out, "coloring game: {} rounds, won by the {}", t.rounds.len(), t.outcome.map_or("-".into(), |o| o.to_string()))?;
        outcome = t.outcome;
    }
    Ok(Report {
        status: OK,
        summary: json!({ "k": k, "n": n, "r": r, "value": value, "nodes": solver.nodes(), "coloring": outcome }),
    })
}

/// Part-size profiles, largest part first, of at most `max` vertices.
fn profiles(max: usize) -> Vec<Vec<usize>> {
    fn rec(left: usize, cap: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        for p in (1..=cap.min(left)).rev() {
            cur.push(p);
            rec(left - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(max, max, &mut Vec::new(), &mut out);
    out.sort_by_key(|p| (p.iter().sum::<usize>(), p.len()));
    out
}

pub fn oracle_check(out: &mut dyn Write, max_vertices: usize, max_r: u32, unreduced: bool) -> Result<Report, Failure> {
    if max_r == 0 {
        return Err(Failure::usage("--max-r must be positive"));
    }
    writeln!(out, "{:<14} {:>2} {:>8} {:>8} {:>10} {:>3}", "sizes", "r", "painter", "solver", "unreduced", "ok")?;
    let (mut cases, mut mismatches) = (0, Vec::new());
    for parts in profiles(max_vertices) {
        let graph = MultipartiteGraph::new(&parts).map_err(Failure::usage)?;
        for r in 1..=max_r {
            let painter = painter_wins(&graph, r).map_err(Failure::usage)?;
            let spec = GameSpec::new(r, &parts).map_err(Failure::usage)?;
            let remover = evaluate_with(&spec, &SolverConfig::default())?.value == Value::RemoverWins;
            let plain = if unreduced && graph.vertices() <= UNREDUCED_VERTEX_LIMIT {
                Some(painter_wins_unreduced(&graph, r).map_err(Failure::usage)?)
            } else {
                None
            };
            let ok = painter == remover && plain.is_none_or(|p| p == painter);
            let word = |w: bool| if w { "wins" } else { "loses" };
            writeln!(
                out,
                "{:<14} {:>2} {:>8} {:>8} {:>10} {:>3}",
                sizes_text(&parts),
                r,
                word(painter),
                if remover { "Remover" } else { "Pusher" },
                plain.map_or("-", word),
                if ok { "yes" } else { "NO" }
            )?;
            cases += 1;
            if !ok {
                mismatches.push(json!({ "sizes": parts, "r": r }));
            }
        }
    }
    writeln!(out, "{cases} cases, {} mismatches", mismatches.len())?;
    Ok(Report {
        status: if mismatches.is_empty() { OK } else { REJECTED },
        summary: json!({
            "max_vertices": max_vertices,
            "max_r": max_r,
            "cases": cases,
            "mismatches": mismatches,
        }),
    })
}
