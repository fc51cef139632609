//! The online panchromatic coloring game played through the symmetric chip
//! game.
//!
//! Hyperedge `e_j` corresponds to label `j` and color `i` to column `i`. A
//! vertex placed on the edges `J` is a push of the labels in `J` whose
//! chips are still on the board, and coloring it `i` removes the pushed
//! chips of column `i`. Throughout, the chip of label `j` survives in
//! column `i` exactly when `e_j` has no vertex of color `i`, and a surviving
//! label sits in the row equal to the size of its edge.

use std::fmt;

use super::{SymError, SymSolver, SymState};
use crate::game::Terminal;

/// A `k`-uniform hypergraph under construction with colored vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    pub k: usize,
    pub colors: usize,
    /// Colors of the vertices of each edge.
    pub edges: Vec<Vec<usize>>,
}

impl Hypergraph {
    pub fn new(k: usize, n: usize, colors: usize) -> Self {
        Self { k, colors, edges: vec![Vec::new(); n] }
    }

    pub fn missing_colors(&self, edge: usize) -> Vec<usize> {
        (0..self.colors).filter(|c| !self.edges[edge].contains(c)).collect()
    }

    pub fn open_edges(&self) -> Vec<usize> {
        (0..self.edges.len()).filter(|&j| self.edges[j].len() < self.k).collect()
    }

    pub fn is_complete(&self) -> bool {
        self.edges.iter().all(|e| e.len() == self.k)
    }

    /// Every edge sees every color.
    pub fn is_panchromatic(&self) -> bool {
        (0..self.edges.len()).all(|j| self.missing_colors(j).is_empty())
    }
}

type PresenterFn<'a> = Box<dyn FnMut(&Hypergraph) -> Vec<usize> + 'a>;
type ColorerFn<'a> = Box<dyn FnMut(&Hypergraph, &[usize]) -> usize + 'a>;

/// Presenter is either a chip-game Pusher strategy read as vertex placements
/// or a function of the hypergraph.
pub enum Presenter<'a> {
    Chip(&'a mut SymSolver),
    Native(PresenterFn<'a>),
}

/// Colorer is either a chip-game Remover strategy or a function of the
/// hypergraph and the new vertex's edges.
pub enum Colorer<'a> {
    Chip(&'a mut SymSolver),
    Native(ColorerFn<'a>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    /// The chip game is still running.
    Chip,
    /// The chip game is over and the remaining edges are being filled.
    Fill,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Round {
    pub phase: Phase,
    /// Edges of the new vertex, 0-based.
    pub edges: Vec<usize>,
    /// Labels pushed in the chip game.
    pub pushed: Vec<usize>,
    pub color: usize,
    /// Chip game position after the round.
    pub state: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PancolorOutcome {
    Presenter,
    Colorer,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Transcript {
    pub rounds: Vec<Round>,
    /// `None` when the game was cut short.
    pub outcome: Option<PancolorOutcome>,
    pub error: Option<String>,
}

impl Transcript {
    /// One line per round, then the result.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, r) in self.rounds.iter().enumerate() {
            let edges: Vec<String> = r.edges.iter().map(|e| (e + 1).to_string()).collect();
            out.push_str(&format!(
                "round {}: {} vertex on edges {{{}}} colored {}; {}\n",
                i + 1,
                match r.phase {
                    Phase::Chip => "chip",
                    Phase::Fill => "fill",
                },
                edges.join(","),
                r.color + 1,
                r.state
            ));
        }
        match (&self.outcome, &self.error) {
            (_, Some(e)) => out.push_str(&format!("stopped: {e}\n")),
            (Some(o), None) => out.push_str(&format!("winner: {o}\n")),
            (None, None) => {}
        }
        out
    }
}

impl fmt::Display for PancolorOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PancolorOutcome::Presenter => "presenter",
            PancolorOutcome::Colorer => "colorer",
        })
    }
}

/// Plays the pancoloring game on `n` edges of size `k` with `r` colors,
/// mirrored move by move in the symmetric chip game.
pub fn pancolor_adapter(
    k: u32,
    n: usize,
    r: usize,
    mut presenter: Presenter<'_>,
    mut colorer: Colorer<'_>,
) -> Result<Transcript, SymError> {
    let mut chips = SymState::initial(k, n, r)?;
    let mut graph = Hypergraph::new(k as usize, n, r);
    let mut rounds = Vec::new();
    let stop = |rounds: Vec<Round>, msg: String| Ok(Transcript { rounds, outcome: None, error: Some(msg) });

    while chips.terminal() == Terminal::Ongoing {
        let edges = match &mut presenter {
            Presenter::Chip(s) => match s.winning_push(&chips)? {
                Some(set) => set,
                // a lost Pusher still has to move: push every live label
                None => (0..n).filter(|&j| chips.labels()[j].is_live()).collect(),
            },
            Presenter::Native(f) => f(&graph),
        };
        if let Err(e) = check_vertex(&graph, &edges) {
            return stop(rounds, e);
        }
        let pushed: Vec<usize> = edges.iter().copied().filter(|&j| chips.labels()[j].is_live()).collect();
        let color = match &mut colorer {
            Colorer::Chip(s) if !pushed.is_empty() => s.saving_removal(&chips, &pushed)?,
            Colorer::Chip(_) => 0,
            Colorer::Native(f) => f(&graph, &edges),
        };
        if color >= r {
            return stop(rounds, format!("color {} out of range", color + 1));
        }
        for &j in &edges {
            graph.edges[j].push(color);
        }
        if !pushed.is_empty() {
            chips = chips.after(&pushed, color)?;
        }
        rounds.push(Round { phase: Phase::Chip, edges, pushed, color, state: chips.to_string() });
        if let Err(e) = check_correspondence(&chips, &graph) {
            return stop(rounds, e);
        }
    }

    // The chip game has decided the winner; complete the remaining edges.
    while !graph.is_complete() {
        let edges = graph.open_edges();
        let color = match &mut colorer {
            Colorer::Chip(_) => 0,
            Colorer::Native(f) => f(&graph, &edges),
        };
        if color >= r {
            return stop(rounds, format!("color {} out of range", color + 1));
        }
        for &j in &edges {
            graph.edges[j].push(color);
        }
        rounds.push(Round { phase: Phase::Fill, edges, pushed: Vec::new(), color, state: chips.to_string() });
    }

    let outcome = if graph.is_panchromatic() { PancolorOutcome::Colorer } else { PancolorOutcome::Presenter };
    let expected = match chips.terminal() {
        Terminal::PusherWin => PancolorOutcome::Presenter,
        _ => PancolorOutcome::Colorer,
    };
    if outcome != expected {
        return stop(rounds, format!("hypergraph winner {outcome} differs from the chip game"));
    }
    Ok(Transcript { rounds, outcome: Some(outcome), error: None })
}

fn check_vertex(graph: &Hypergraph, edges: &[usize]) -> Result<(), String> {
    if edges.is_empty() {
        return Err("vertex on no edges".into());
    }
    for (i, &j) in edges.iter().enumerate() {
        if j >= graph.edges.len() {
            return Err(format!("edge {} does not exist", j + 1));
        }
        if edges[..i].contains(&j) {
            return Err(format!("edge {} listed twice", j + 1));
        }
        if graph.edges[j].len() >= graph.k {
            return Err(format!("edge {} is already full", j + 1));
        }
    }
    Ok(())
}

fn check_correspondence(chips: &SymState, graph: &Hypergraph) -> Result<(), String> {
    for (j, l) in chips.labels().iter().enumerate() {
        let live: Vec<usize> = (0..graph.colors).filter(|&c| l.live >> c & 1 == 1).collect();
        if live != graph.missing_colors(j) {
            return Err(format!("label {} survives in columns {live:?} but edge misses {:?}", j + 1, graph.missing_colors(j)));
        }
        if l.is_live() && l.row as usize != graph.edges[j].len() {
            return Err(format!("label {} is in row {} but its edge has {} vertices", j + 1, l.row, graph.edges[j].len()));
        }
    }
    Ok(())
}
