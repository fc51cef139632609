//! Closure files: a header naming the kind and game, then one canonical
//! state line per member, sorted byte-wise.
//!
//! ```text
//! chip-closure v1; kind=losing; Γ=2; sizes=2,2
//! Γ=2; sizes=2,2; board=[[0,0],[0,0]]
//! ```

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::game::{parse_sizes, parse_state_line, state_line, Board, GameError, GameSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClosureKind {
    Winning,
    Losing,
}

impl fmt::Display for ClosureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClosureKind::Winning => "winning",
            ClosureKind::Losing => "losing",
        })
    }
}

impl FromStr for ClosureKind {
    type Err = ClosureError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "winning" => Ok(ClosureKind::Winning),
            "losing" => Ok(ClosureKind::Losing),
            other => Err(ClosureError::Malformed { line: 1, msg: format!("unknown kind `{other}`") }),
        }
    }
}

#[derive(Debug, Error)]
pub enum ClosureError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("line {line}: state does not match the header ({msg})")]
    SpecMismatch { line: usize, msg: String },
    #[error(transparent)]
    Game(#[from] GameError),
}

const MAGIC: &str = "chip-closure v1";

/// A claimed winning or losing closure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureFile {
    pub kind: ClosureKind,
    pub spec: GameSpec,
    /// Canonical Pusher-to-move boards.
    pub states: Vec<Board>,
}

impl ClosureFile {
    /// Builds a closure, canonicalizing and sorting the states by their
    /// line encoding and dropping duplicates.
    pub fn new(kind: ClosureKind, spec: GameSpec, states: impl IntoIterator<Item = Board>) -> Self {
        let mut lines: Vec<(String, Board)> = states
            .into_iter()
            .map(|b| {
                let b = b.canonical();
                (state_line(&spec, &b), b)
            })
            .collect();
        lines.sort_unstable_by(|a, b| a.0.as_bytes().cmp(b.0.as_bytes()));
        lines.dedup_by(|a, b| a.0 == b.0);
        Self { kind, spec, states: lines.into_iter().map(|(_, b)| b).collect() }
    }

    pub fn header(&self) -> String {
        format!(
            "{MAGIC}; kind={}; Γ={}; sizes={}",
            self.kind,
            self.spec.threshold(),
            self.spec.sizes_text()
        )
    }

    pub fn to_text(&self) -> String {
        let mut out = self.header();
        out.push('\n');
        for b in &self.states {
            out.push_str(&state_line(&self.spec, b));
            out.push('\n');
        }
        out
    }

    pub fn contains(&self, board: &Board) -> bool {
        let b = board.clone().canonical();
        self.states.contains(&b)
    }

    pub fn parse(text: &str) -> Result<Self, ClosureError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines
            .next()
            .ok_or(ClosureError::Malformed { line: 1, msg: "empty file".into() })?;
        let malformed = |msg: &str| ClosureError::Malformed { line: 1, msg: msg.to_string() };
        let mut fields = header.trim_end().split("; ");
        if fields.next() != Some(MAGIC) {
            return Err(malformed("expected `chip-closure v1` header"));
        }
        let kind: ClosureKind = fields
            .next()
            .and_then(|f| f.strip_prefix("kind="))
            .ok_or_else(|| malformed("expected `kind=`"))?
            .parse()?;
        let threshold: u32 = fields
            .next()
            .and_then(|f| f.strip_prefix("Γ="))
            .ok_or_else(|| malformed("expected `Γ=`"))?
            .parse()
            .map_err(|_| malformed("threshold is not an integer"))?;
        let sizes = fields
            .next()
            .and_then(|f| f.strip_prefix("sizes="))
            .ok_or_else(|| malformed("expected `sizes=`"))?;
        if fields.next().is_some() {
            return Err(malformed("unexpected trailing header fields"));
        }
        let spec = GameSpec::new(threshold, &parse_sizes(sizes)?)?;

        let mut states = Vec::new();
        for (i, line) in lines {
            let lineno = i + 1;
            let (s, board) = parse_state_line(line.trim_end())
                .map_err(|e| ClosureError::Malformed { line: lineno, msg: e.to_string() })?;
            if s != spec {
                return Err(ClosureError::SpecMismatch {
                    line: lineno,
                    msg: format!(
                        "Γ={} sizes={} vs header Γ={} sizes={}",
                        s.threshold(),
                        s.sizes_text(),
                        spec.threshold(),
                        spec.sizes_text()
                    ),
                });
            }
            spec.check_board(&board)
                .map_err(|e| ClosureError::SpecMismatch { line: lineno, msg: e.to_string() })?;
            states.push(board);
        }
        Ok(Self { kind, spec, states })
    }
}
