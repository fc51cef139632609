//! Direct Lister/Painter search on small complete multipartite graphs.
//!
//! Independent of the chip-game code: vertices carry their own presented
//! counts, and Painter answers a presented set by painting all of its
//! vertices inside one part.

use std::collections::HashMap;

use thiserror::Error;

pub const DEFAULT_VERTEX_LIMIT: usize = 7;
/// Largest instance the unreduced search accepts.
pub const UNREDUCED_VERTEX_LIMIT: usize = 5;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph has {vertices} vertices, the oracle accepts at most {limit}")]
    TooLarge { vertices: usize, limit: usize },
    #[error("invalid graph: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultipartiteGraph {
    parts: Vec<usize>,
}

impl MultipartiteGraph {
    pub fn new(parts: &[usize]) -> Result<Self, OracleError> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(OracleError::Invalid(format!("parts {parts:?}")));
        }
        Ok(Self { parts: parts.to_vec() })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn vertices(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Part index of every vertex, in order.
    fn part_of(&self) -> Vec<usize> {
        self.parts.iter().enumerate().flat_map(|(p, &n)| std::iter::repeat_n(p, n)).collect()
    }
}

const PAINTED: u8 = u8::MAX;

/// Per-vertex presented counts, `PAINTED` for painted vertices.
type Counts = Vec<u8>;

pub fn painter_wins(graph: &MultipartiteGraph, r: u32) -> Result<bool, OracleError> {
    painter_wins_limited(graph, r, DEFAULT_VERTEX_LIMIT)
}

pub fn painter_wins_limited(graph: &MultipartiteGraph, r: u32, limit: usize) -> Result<bool, OracleError> {
    check_size(graph, limit)?;
    if r == 0 {
        return Ok(false);
    }
    let mut search = Reduced { part_of: graph.part_of(), parts: graph.parts.len(), r, memo: HashMap::new() };
    let start = vec![0u8; graph.vertices()];
    Ok(search.painter_wins(start))
}

/// Smallest `r` for which Painter wins, searching upward from the number
/// of parts.
pub fn paintability_direct(graph: &MultipartiteGraph) -> Result<u32, OracleError> {
    check_size(graph, DEFAULT_VERTEX_LIMIT)?;
    let mut r = graph.parts.len() as u32;
    while !painter_wins(graph, r)? {
        r += 1;
    }
    Ok(r)
}

fn check_size(graph: &MultipartiteGraph, limit: usize) -> Result<(), OracleError> {
    let vertices = graph.vertices();
    if vertices > limit {
        return Err(OracleError::TooLarge { vertices, limit });
    }
    Ok(())
}

struct Reduced {
    part_of: Vec<usize>,
    parts: usize,
    r: u32,
    memo: HashMap<Counts, bool>,
}

impl Reduced {
    /// Vertices of one part are interchangeable, so counts are kept sorted
    /// within each part.
    fn normalize(&self, counts: &mut Counts) {
        let mut start = 0;
        while start < counts.len() {
            let p = self.part_of[start];
            let end = start + self.part_of[start..].iter().take_while(|&&q| q == p).count();
            counts[start..end].sort_unstable();
            start = end;
        }
    }

    fn painter_wins(&mut self, mut counts: Counts) -> bool {
        if counts.iter().all(|&c| c == PAINTED) {
            return true;
        }
        self.normalize(&mut counts);
        if let Some(&v) = self.memo.get(&counts) {
            return v;
        }
        let result = self.lister_sets(&counts).into_iter().all(|set| self.answer(&counts, &set));
        self.memo.insert(counts, result);
        result
    }

    /// Presented sets up to swapping equal-count vertices of one part: for
    /// each run of equal unpainted entries, choose how many to present.
    fn lister_sets(&self, counts: &Counts) -> Vec<Vec<bool>> {
        let mut runs: Vec<(usize, usize)> = Vec::new();
        for i in 0..counts.len() {
            if counts[i] == PAINTED {
                continue;
            }
            match runs.last_mut() {
                Some((s, len))
                    if *s + *len == i && self.part_of[*s] == self.part_of[i] && counts[*s] == counts[i] =>
                {
                    *len += 1
                }
                _ => runs.push((i, 1)),
            }
        }
        let mut out = Vec::new();
        let mut pick = vec![0usize; runs.len()];
        loop {
            if pick.iter().any(|&k| k > 0) {
                let mut set = vec![false; counts.len()];
                for (&(s, _), &k) in runs.iter().zip(&pick) {
                    set[s..s + k].iter_mut().for_each(|x| *x = true);
                }
                out.push(set);
            }
            let mut i = 0;
            loop {
                if i == runs.len() {
                    return out;
                }
                if pick[i] < runs[i].1 {
                    pick[i] += 1;
                    break;
                }
                pick[i] = 0;
                i += 1;
            }
        }
    }

    /// Painter wins against `set` if painting its intersection with some
    /// part leaves a Painter win.
    fn answer(&mut self, counts: &Counts, set: &[bool]) -> bool {
        (0..self.parts).any(|p| {
            if !set.iter().zip(&self.part_of).any(|(&s, &q)| s && q == p) {
                return false;
            }
            let mut next = counts.clone();
            let mut lost = false;
            for v in 0..next.len() {
                if !set[v] {
                    continue;
                }
                if self.part_of[v] == p {
                    next[v] = PAINTED;
                } else {
                    next[v] += 1;
                    lost |= u32::from(next[v]) >= self.r;
                }
            }
            !lost && self.painter_wins(next)
        })
    }
}

/// Search with no reductions: Lister presents any nonempty set of unpainted
/// vertices and Painter paints any independent subset of it.
pub fn painter_wins_unreduced(graph: &MultipartiteGraph, r: u32) -> Result<bool, OracleError> {
    check_size(graph, UNREDUCED_VERTEX_LIMIT)?;
    if r == 0 {
        return Ok(false);
    }
    let part_of = graph.part_of();
    let n = part_of.len();
    let mut memo = HashMap::new();
    Ok(unreduced(&part_of, r, vec![0u8; n], &mut memo))
}

fn unreduced(part_of: &[usize], r: u32, counts: Counts, memo: &mut HashMap<Counts, bool>) -> bool {
    let n = counts.len();
    let unpainted: u32 = (0..n).filter(|&v| counts[v] != PAINTED).map(|v| 1 << v).sum();
    if unpainted == 0 {
        return true;
    }
    if let Some(&v) = memo.get(&counts) {
        return v;
    }
    let independent = |mask: u32| {
        let mut part = None;
        (0..n).filter(|&v| mask >> v & 1 == 1).all(|v| *part.get_or_insert(part_of[v]) == part_of[v])
    };
    let mut result = true;
    let mut set = unpainted;
    while set != 0 {
        // every subset of `set`, including the empty one
        let mut painted = set;
        let mut answered = false;
        loop {
            if independent(painted) {
                let mut next = counts.clone();
                let mut lost = false;
                for v in 0..n {
                    if painted >> v & 1 == 1 {
                        next[v] = PAINTED;
                    } else if set >> v & 1 == 1 {
                        next[v] += 1;
                        lost |= u32::from(next[v]) >= r;
                    }
                }
                if !lost && unreduced(part_of, r, next, memo) {
                    answered = true;
                    break;
                }
            }
            if painted == 0 {
                break;
            }
            painted = (painted - 1) & set;
        }
        if !answered {
            result = false;
            break;
        }
        set = (set - 1) & unpainted;
    }
    memo.insert(counts, result);
    result
}
