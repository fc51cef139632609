//! Plain minimax over individual chips, sharing nothing with the library's
//! search beyond the rules.

#![allow(dead_code)]

use std::collections::HashMap;

/// Chips as `(column, row)`; Pusher picks any nonempty subset by bitmask.
pub struct Reference {
    threshold: u8,
    width: usize,
    memo: HashMap<Vec<Vec<u8>>, bool>,
}

impl Reference {
    pub fn new(threshold: u32, width: usize) -> Self {
        Self { threshold: threshold as u8, width, memo: HashMap::new() }
    }

    /// Whether Pusher wins from the given columns of chip rows.
    pub fn pusher_wins(&mut self, columns: &[Vec<u8>]) -> bool {
        let chips: Vec<(usize, u8)> =
            columns.iter().enumerate().flat_map(|(c, rows)| rows.iter().map(move |&r| (c, r))).collect();
        self.solve(chips)
    }

    fn key(&self, chips: &[(usize, u8)]) -> Vec<Vec<u8>> {
        let mut cols = vec![Vec::new(); self.width];
        for &(c, r) in chips {
            cols[c].push(r);
        }
        for c in &mut cols {
            c.sort_unstable();
        }
        cols.sort();
        cols
    }

    fn solve(&mut self, chips: Vec<(usize, u8)>) -> bool {
        if chips.iter().any(|&(_, r)| r >= self.threshold) {
            return true;
        }
        if chips.is_empty() {
            return false;
        }
        let key = self.key(&chips);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let n = chips.len();
        let mut result = false;
        for mask in 1u32..(1 << n) {
            let all_answers_lose = (0..self.width).all(|removed| {
                let next: Vec<(usize, u8)> = (0..n)
                    .filter_map(|i| {
                        let (c, r) = chips[i];
                        if mask >> i & 1 == 0 {
                            Some((c, r))
                        } else if c == removed {
                            None
                        } else {
                            Some((c, r + 1))
                        }
                    })
                    .collect();
                self.solve(next)
            });
            if all_answers_lose {
                result = true;
                break;
            }
        }
        self.memo.insert(key, result);
        result
    }
}

/// Pusher wins the initial position with `sizes` chips per column.
pub fn reference_value(threshold: u32, sizes: &[usize]) -> bool {
    let columns: Vec<Vec<u8>> = sizes.iter().map(|&n| vec![0; n]).collect();
    Reference::new(threshold, sizes.len()).pusher_wins(&columns)
}

/// Every parts profile (sizes descending) with total at most `max_total`.
pub fn profiles(max_total: usize) -> Vec<Vec<usize>> {
    fn rec(left: usize, cap: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        for s in (1..=cap.min(left)).rev() {
            cur.push(s);
            rec(left - s, s, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(max_total, max_total, &mut Vec::new(), &mut out);
    out
}

/// All `(Γ, sizes)` pairs with total chips at most `max_total` and
/// `1 ≤ Γ ≤ max_threshold`.
pub fn small_specs(max_total: usize, max_threshold: u32) -> Vec<(u32, Vec<usize>)> {
    let mut out = Vec::new();
    for sizes in profiles(max_total) {
        for g in 1..=max_threshold {
            out.push((g, sizes.clone()));
        }
    }
    out
}
