//! Chip game states: columns, boards, Pusher/Remover moves and their
//! application.
//!
//! A column stores only its live chips, as rows sorted in descending order.
//! Removed chips are not represented; comparisons treat them as sitting in
//! row `-1`.

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;
use thiserror::Error;

/// Row index of a chip. Row 0 is the starting row.
pub type Row = u8;

/// Largest supported threshold. Row `0xFF` is reserved as a key separator.
pub const MAX_THRESHOLD: u32 = 254;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error("invalid game spec: {0}")]
    InvalidSpec(String),
    #[error("illegal move: {0}")]
    IllegalMove(String),
    #[error("wrong player to move: expected {expected}, found {found}")]
    WrongTurn { expected: Player, found: Player },
    #[error("board does not fit the spec: {0}")]
    BoardMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Player {
    Pusher,
    Remover,
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Player::Pusher => f.write_str("Pusher"),
            Player::Remover => f.write_str("Remover"),
        }
    }
}

/// Parameters of a `(Γ, n₁, …, n_m)` chip game.
///
/// Column sizes are kept in descending order; the game does not depend on
/// the order in which the parts are listed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GameSpec {
    threshold: Row,
    sizes: Vec<usize>,
}

impl GameSpec {
    pub fn new(threshold: u32, sizes: &[usize]) -> Result<Self, GameError> {
        if threshold == 0 {
            return Err(GameError::InvalidSpec("threshold must be at least 1".into()));
        }
        if threshold > MAX_THRESHOLD {
            return Err(GameError::InvalidSpec(format!(
                "threshold {threshold} exceeds the supported maximum {MAX_THRESHOLD}"
            )));
        }
        if sizes.is_empty() {
            return Err(GameError::InvalidSpec("at least one column is required".into()));
        }
        if sizes.contains(&0) {
            return Err(GameError::InvalidSpec("every column needs at least one chip".into()));
        }
        let mut sizes = sizes.to_vec();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self { threshold: threshold as Row, sizes })
    }

    pub fn threshold(&self) -> Row {
        self.threshold
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn columns(&self) -> usize {
        self.sizes.len()
    }

    pub fn total_chips(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn with_threshold(&self, threshold: u32) -> Result<Self, GameError> {
        Self::new(threshold, &self.sizes)
    }

    /// Comma separated sizes, as used in the text formats.
    pub fn sizes_text(&self) -> String {
        join(self.sizes.iter())
    }

    /// Checks that `board` could occur in this game: same number of columns,
    /// rows within `0..=Γ`, and column lengths that can be assigned to the
    /// initial sizes.
    pub fn check_board(&self, board: &Board) -> Result<(), GameError> {
        if board.columns().len() != self.columns() {
            return Err(GameError::BoardMismatch(format!(
                "{} columns, spec has {}",
                board.columns().len(),
                self.columns()
            )));
        }
        if let Some(r) = board.max_row() {
            if r > self.threshold {
                return Err(GameError::BoardMismatch(format!(
                    "chip at row {r} above threshold {}",
                    self.threshold
                )));
            }
        }
        // Columns and sizes both sorted descending; greedy pairing is exact
        // for this "length ≤ capacity" assignment.
        let mut lens: Vec<usize> = board.columns().iter().map(Column::len).collect();
        lens.sort_unstable_by(|a, b| b.cmp(a));
        if lens.iter().zip(&self.sizes).any(|(l, s)| l > s) {
            return Err(GameError::BoardMismatch(format!(
                "column lengths {lens:?} do not fit sizes {:?}",
                self.sizes
            )));
        }
        Ok(())
    }
}

/// Live chips of one column, rows sorted descending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Column {
    rows: SmallVec<[Row; 6]>,
}

impl Column {
    pub fn new(rows: impl IntoIterator<Item = Row>) -> Self {
        let mut rows: SmallVec<[Row; 6]> = rows.into_iter().collect();
        rows.sort_unstable_by(|a, b| b.cmp(a));
        Self { rows }
    }

    pub fn filled(chips: usize, row: Row) -> Self {
        Self { rows: SmallVec::from_elem(row, chips) }
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn top(&self) -> Option<Row> {
        self.rows.first().copied()
    }

    pub fn count_at(&self, row: Row) -> usize {
        self.rows.iter().filter(|&&r| r == row).count()
    }

    /// Distinct rows with their chip counts, highest row first.
    pub fn groups(&self) -> SmallVec<[(Row, u32); 4]> {
        let mut out: SmallVec<[(Row, u32); 4]> = SmallVec::new();
        for &r in &self.rows {
            match out.last_mut() {
                Some((row, n)) if *row == r => *n += 1,
                _ => out.push((r, 1)),
            }
        }
        out
    }

    /// The column after pushing the chips described by `push` one row up.
    pub fn pushed(&self, push: &ColumnPush) -> Column {
        let mut rows = self.rows.clone();
        for &(row, n) in push.entries() {
            let mut left = n;
            for r in rows.iter_mut() {
                if left == 0 {
                    break;
                }
                if *r == row {
                    *r = row + 1;
                    left -= 1;
                }
            }
        }
        rows.sort_unstable_by(|a, b| b.cmp(a));
        Column { rows }
    }

    /// The column with the chips described by `push` deleted.
    pub fn without(&self, push: &ColumnPush) -> Column {
        let mut rows = self.rows.clone();
        for &(row, n) in push.entries() {
            for _ in 0..n {
                if let Some(pos) = rows.iter().position(|&r| r == row) {
                    rows.remove(pos);
                }
            }
        }
        Column { rows }
    }

    /// Padded componentwise dominance: `self ≥ other` when, after padding
    /// both with removed chips (row −1), every position of `self` is at
    /// least the matching position of `other`.
    pub fn dominates(&self, other: &Column) -> bool {
        self.rows.len() >= other.rows.len()
            && self.rows.iter().zip(other.rows.iter()).all(|(a, b)| a >= b)
    }
}

impl Ord for Column {
    /// Descending lexicographic order on row sequences, longer first on ties.
    fn cmp(&self, other: &Self) -> Ordering {
        other.rows.as_slice().cmp(self.rows.as_slice())
    }
}

impl PartialOrd for Column {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Column {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", join(self.rows.iter()))
    }
}

/// An arrangement of columns. Only canonical boards are used as keys.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Board {
    columns: Vec<Column>,
}

impl Board {
    pub fn new(columns: Vec<Column>) -> Self {
        Self { columns }
    }

    pub fn from_rows(columns: &[&[Row]]) -> Self {
        Self::new(columns.iter().map(|c| Column::new(c.iter().copied())).collect())
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn column(&self, i: usize) -> &Column {
        &self.columns[i]
    }

    pub fn chip_count(&self) -> usize {
        self.columns.iter().map(Column::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.iter().all(Column::is_empty)
    }

    pub fn max_row(&self) -> Option<Row> {
        self.columns.iter().filter_map(Column::top).max()
    }

    pub fn canonical(mut self) -> Self {
        self.canonicalize_in_place();
        self
    }

    pub fn canonicalize_in_place(&mut self) {
        for c in &mut self.columns {
            c.rows.sort_unstable_by(|a, b| b.cmp(a));
        }
        self.columns.sort_unstable();
    }

    pub fn is_canonical(&self) -> bool {
        self.columns.windows(2).all(|w| w[0] <= w[1])
            && self.columns.iter().all(|c| c.rows.windows(2).all(|w| w[0] >= w[1]))
    }

    /// Hashable key of the canonical form of this board.
    pub fn key(&self) -> BoardKey {
        if self.is_canonical() {
            BoardKey::encode(self)
        } else {
            BoardKey::encode(&self.clone().canonical())
        }
    }

    /// Runs of identical adjacent columns as `(start, len)`. Identical
    /// columns are adjacent on canonical boards.
    pub fn identical_runs(&self) -> Vec<(usize, usize)> {
        let mut runs: Vec<(usize, usize)> = Vec::new();
        for (i, c) in self.columns.iter().enumerate() {
            match runs.last_mut() {
                Some((s, n)) if self.columns[*s] == *c => *n += 1,
                _ => runs.push((i, 1)),
            }
        }
        runs
    }

    /// Parses the `[[r,…],[…]]` encoding.
    pub fn parse(text: &str) -> Result<Board, GameError> {
        let bad = |why: &str| GameError::Parse(format!("board `{text}`: {why}"));
        let t = text.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| bad("expected outer brackets"))?;
        let mut columns = Vec::new();
        let mut rest = inner.trim();
        while !rest.is_empty() {
            let body = rest.strip_prefix('[').ok_or_else(|| bad("expected `[`"))?;
            let end = body.find(']').ok_or_else(|| bad("unterminated column"))?;
            let mut rows: SmallVec<[Row; 6]> = SmallVec::new();
            for tok in body[..end].split(',').map(str::trim).filter(|s| !s.is_empty()) {
                rows.push(tok.parse().map_err(|_| bad("row is not a small integer"))?);
            }
            columns.push(Column::new(rows));
            rest = body[end + 1..].trim_start();
            if let Some(r) = rest.strip_prefix(',') {
                rest = r.trim_start();
                if rest.is_empty() {
                    return Err(bad("trailing comma"));
                }
            } else if !rest.is_empty() {
                return Err(bad("expected `,` between columns"));
            }
        }
        Ok(Board::new(columns))
    }
}

impl fmt::Display for Board {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, c) in self.columns.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

/// Compact byte encoding of a canonical board.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoardKey(Box<[u8]>);

impl BoardKey {
    const SEP: u8 = 0xFF;

    fn encode(board: &Board) -> Self {
        let mut bytes = Vec::with_capacity(board.chip_count() + board.columns.len());
        for c in &board.columns {
            bytes.extend_from_slice(&c.rows);
            bytes.push(Self::SEP);
        }
        BoardKey(bytes.into_boxed_slice())
    }

    pub fn decode(&self) -> Board {
        let mut columns = Vec::new();
        let mut cur: SmallVec<[Row; 6]> = SmallVec::new();
        for &b in self.0.iter() {
            if b == Self::SEP {
                columns.push(Column { rows: std::mem::take(&mut cur) });
            } else {
                cur.push(b);
            }
        }
        Board { columns }
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

/// Key of a Pusher-to-move state: the game parameters plus the canonical
/// board.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StateKey {
    pub threshold: Row,
    pub sizes: Vec<usize>,
    pub board: BoardKey,
}

/// Chips pushed from one column: `(row, count)` pairs, highest row first,
/// counts nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ColumnPush(SmallVec<[(Row, u32); 4]>);

impl ColumnPush {
    pub fn new(entries: impl IntoIterator<Item = (Row, u32)>) -> Self {
        let mut out: SmallVec<[(Row, u32); 4]> = SmallVec::new();
        for (row, n) in entries {
            if n == 0 {
                continue;
            }
            match out.iter_mut().find(|(r, _)| *r == row) {
                Some((_, m)) => *m += n,
                None => out.push((row, n)),
            }
        }
        out.sort_unstable_by_key(|e| std::cmp::Reverse(e.0));
        Self(out)
    }

    pub fn entries(&self) -> &[(Row, u32)] {
        &self.0
    }

    pub fn total(&self) -> u32 {
        self.0.iter().map(|e| e.1).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn count(&self, row: Row) -> u32 {
        self.0.iter().find(|e| e.0 == row).map_or(0, |e| e.1)
    }
}

/// A Pusher move: for every column, how many chips are pushed from each
/// row. Chips in the same column and row are interchangeable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PusherMove {
    columns: Vec<ColumnPush>,
}

impl PusherMove {
    pub fn new(columns: Vec<ColumnPush>) -> Self {
        Self { columns }
    }

    pub fn empty(width: usize) -> Self {
        Self { columns: vec![ColumnPush::default(); width] }
    }

    /// Adds `count` chips pushed from `row` of column `col`.
    pub fn add(&mut self, col: usize, row: Row, count: u32) {
        let cur = &self.columns[col];
        self.columns[col] = ColumnPush::new(cur.entries().iter().copied().chain([(row, count)]));
    }

    pub fn columns(&self) -> &[ColumnPush] {
        &self.columns
    }

    pub fn column(&self, i: usize) -> &ColumnPush {
        &self.columns[i]
    }

    pub fn total(&self) -> u32 {
        self.columns.iter().map(ColumnPush::total).sum()
    }

    /// Text form: space separated `column.row` or `column.row*count`
    /// entries, columns 1-based.
    pub fn to_text(&self) -> String {
        let mut parts = Vec::new();
        for (i, c) in self.columns.iter().enumerate() {
            for &(row, n) in c.entries() {
                if n == 1 {
                    parts.push(format!("{}.{}", i + 1, row));
                } else {
                    parts.push(format!("{}.{}*{}", i + 1, row, n));
                }
            }
        }
        parts.join(" ")
    }

    pub fn parse(text: &str, width: usize) -> Result<PusherMove, GameError> {
        let mut mv = PusherMove::empty(width);
        for tok in text.split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty()) {
            let bad = || GameError::Parse(format!("push `{tok}`: expected column.row or column.row*count"));
            let (chip, count) = match tok.split_once('*') {
                Some((a, b)) => (a, b.parse::<u32>().map_err(|_| bad())?),
                None => (tok, 1),
            };
            let (col, row) = chip.split_once('.').ok_or_else(bad)?;
            let col: usize = col.parse().map_err(|_| bad())?;
            let row: Row = row.parse().map_err(|_| bad())?;
            if col == 0 || col > width {
                return Err(GameError::IllegalMove(format!(
                    "column {col} out of range 1..={width}"
                )));
            }
            mv.add(col - 1, row, count);
        }
        Ok(mv)
    }
}

/// Classification of a Pusher-to-move state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Terminal {
    PusherWin,
    PusherLoss,
    Ongoing,
}

/// A position: board, parameters, player to move and, on Remover's turn,
/// the chips just pushed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameState {
    spec: GameSpec,
    board: Board,
    to_move: Player,
    pending: Option<PusherMove>,
}

impl GameState {
    /// Every column `i` holds `nᵢ` chips at row 0; Pusher moves first.
    pub fn initial(spec: &GameSpec) -> Self {
        let board = Board::new(spec.sizes().iter().map(|&n| Column::filled(n, 0)).collect());
        Self { spec: spec.clone(), board: board.canonical(), to_move: Player::Pusher, pending: None }
    }

    /// A Pusher-to-move state on an arbitrary board, validated against the
    /// spec and canonicalized.
    pub fn pusher_to_move(spec: &GameSpec, board: Board) -> Result<Self, GameError> {
        spec.check_board(&board)?;
        Ok(Self { spec: spec.clone(), board: board.canonical(), to_move: Player::Pusher, pending: None })
    }

    pub fn spec(&self) -> &GameSpec {
        &self.spec
    }

    pub fn board(&self) -> &Board {
        &self.board
    }

    pub fn to_move(&self) -> Player {
        self.to_move
    }

    pub fn pending(&self) -> Option<&PusherMove> {
        self.pending.as_ref()
    }

    fn expect(&self, who: Player) -> Result<(), GameError> {
        if self.to_move == who {
            Ok(())
        } else {
            Err(GameError::WrongTurn { expected: who, found: self.to_move })
        }
    }

    /// Checks that `mv` is a legal Pusher move here.
    pub fn check_pusher_move(&self, mv: &PusherMove) -> Result<(), GameError> {
        self.expect(Player::Pusher)?;
        if mv.columns().len() != self.board.columns().len() {
            return Err(GameError::IllegalMove(format!(
                "move covers {} columns, board has {}",
                mv.columns().len(),
                self.board.columns().len()
            )));
        }
        if mv.total() == 0 {
            return Err(GameError::IllegalMove("Pusher must push at least one chip".into()));
        }
        let threshold = self.spec.threshold();
        for (i, (push, col)) in mv.columns().iter().zip(self.board.columns()).enumerate() {
            for &(row, n) in push.entries() {
                let have = col.count_at(row);
                if n as usize > have {
                    return Err(GameError::IllegalMove(format!(
                        "column {} has {have} chip(s) at row {row}, cannot push {n}",
                        i + 1
                    )));
                }
                if row >= threshold {
                    return Err(GameError::IllegalMove(format!(
                        "chips at row {row} have already reached the threshold"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Pushes the chips of `mv`. Column positions are kept so that the
    /// pending move stays aligned with the board.
    pub fn apply_pusher(&self, mv: &PusherMove) -> Result<GameState, GameError> {
        self.check_pusher_move(mv)?;
        let columns = self
            .board
            .columns()
            .iter()
            .zip(mv.columns())
            .map(|(c, p)| c.pushed(p))
            .collect();
        Ok(GameState {
            spec: self.spec.clone(),
            board: Board::new(columns),
            to_move: Player::Remover,
            pending: Some(mv.clone()),
        })
    }

    /// Removes the just-pushed chips of column `col` (0-based) without
    /// reordering columns.
    pub fn apply_remover_keep_order(&self, col: usize) -> Result<GameState, GameError> {
        self.expect(Player::Remover)?;
        let pending = self.pending.as_ref().expect("Remover-to-move state carries its pending push");
        if col >= self.board.columns().len() {
            return Err(GameError::IllegalMove(format!(
                "column {} out of range 1..={}",
                col + 1,
                self.board.columns().len()
            )));
        }
        let lifted = ColumnPush::new(pending.column(col).entries().iter().map(|&(r, n)| (r + 1, n)));
        let mut columns = self.board.columns().to_vec();
        columns[col] = columns[col].without(&lifted);
        Ok(GameState {
            spec: self.spec.clone(),
            board: Board::new(columns),
            to_move: Player::Pusher,
            pending: None,
        })
    }

    /// Removes the just-pushed chips of column `col` (0-based) and
    /// canonicalizes the board.
    pub fn apply_remover(&self, col: usize) -> Result<GameState, GameError> {
        let mut next = self.apply_remover_keep_order(col)?;
        next.board.canonicalize_in_place();
        Ok(next)
    }

    pub fn terminal(&self) -> Result<Terminal, GameError> {
        self.expect(Player::Pusher)?;
        Ok(board_terminal(&self.board, self.spec.threshold()))
    }

    pub fn key(&self) -> Result<StateKey, GameError> {
        self.expect(Player::Pusher)?;
        Ok(StateKey {
            threshold: self.spec.threshold(),
            sizes: self.spec.sizes().to_vec(),
            board: self.board.key(),
        })
    }

    /// `Γ=<int>; sizes=<n1,...>; board=<encoding>` with the board in
    /// canonical form.
    pub fn to_line(&self) -> String {
        state_line(&self.spec, &self.board.clone().canonical())
    }
}

/// Terminal classification of a board with Pusher to move: a chip at or
/// above the threshold wins for Pusher, an empty board loses.
pub fn board_terminal(board: &Board, threshold: Row) -> Terminal {
    match board.max_row() {
        Some(r) if r >= threshold => Terminal::PusherWin,
        Some(_) => Terminal::Ongoing,
        None => Terminal::PusherLoss,
    }
}

pub fn state_line(spec: &GameSpec, board: &Board) -> String {
    format!("Γ={}; sizes={}; board={}", spec.threshold(), spec.sizes_text(), board)
}

/// Parses a state line into its spec and (canonicalized) board.
pub fn parse_state_line(line: &str) -> Result<(GameSpec, Board), GameError> {
    let bad = |why: &str| GameError::Parse(format!("state line `{line}`: {why}"));
    let mut parts = line.splitn(3, "; ");
    let gamma = parts
        .next()
        .and_then(|p| p.strip_prefix("Γ="))
        .ok_or_else(|| bad("expected `Γ=`"))?;
    let sizes = parts
        .next()
        .and_then(|p| p.strip_prefix("sizes="))
        .ok_or_else(|| bad("expected `sizes=`"))?;
    let board = parts
        .next()
        .and_then(|p| p.strip_prefix("board="))
        .ok_or_else(|| bad("expected `board=`"))?;
    let threshold: u32 = gamma.parse().map_err(|_| bad("threshold is not an integer"))?;
    let spec = GameSpec::new(threshold, &parse_sizes(sizes)?)?;
    let board = Board::parse(board)?;
    Ok((spec, board.canonical()))
}

pub fn parse_sizes(text: &str) -> Result<Vec<usize>, GameError> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| GameError::Parse(format!("sizes `{text}`: `{s}` is not an integer")))
        })
        .collect()
}

pub(crate) fn join<T: fmt::Display>(items: impl Iterator<Item = T>) -> String {
    items.map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}
