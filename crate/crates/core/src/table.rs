//! Published paintability values for complete multipartite graphs with
//! parts of sizes 2 and 3, with the bounds known before they were computed.

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct KnownRow {
    pub name: &'static str,
    /// Part sizes, largest first.
    pub sizes: &'static [usize],
    pub lower: u32,
    pub value: u32,
    pub upper: u32,
}

const fn row(name: &'static str, sizes: &'static [usize], lower: u32, value: u32, upper: u32) -> KnownRow {
    KnownRow { name, sizes, lower, value, upper }
}

pub const KNOWN: [KnownRow; 9] = [
    row("K_{3*4}", &[3, 3, 3, 3], 5, 5, 6),
    row("K_{3*5}", &[3, 3, 3, 3, 3], 7, 7, 7),
    row("K_{2*3,3*3}", &[3, 3, 3, 2, 2, 2], 7, 7, 9),
    row("K_{2*2,3*4}", &[3, 3, 3, 3, 2, 2], 7, 7, 9),
    row("K_{2*1,3*5}", &[3, 3, 3, 3, 3, 2], 7, 8, 9),
    row("K_{3*6}", &[3, 3, 3, 3, 3, 3], 8, 8, 9),
    row("K_{2*4,3*3}", &[3, 3, 3, 2, 2, 2, 2], 8, 8, 10),
    row("K_{2*3,3*4}", &[3, 3, 3, 3, 2, 2, 2], 8, 8, 10),
    row("K_{2*2,3*5}", &[3, 3, 3, 3, 3, 2, 2], 8, 9, 10),
];

/// The row for a parts profile, in any order.
pub fn lookup(sizes: &[usize]) -> Option<&'static KnownRow> {
    let mut sorted = sizes.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    KNOWN.iter().find(|r| r.sizes == sorted.as_slice())
}

/// `K_{a*x,b*y}` notation with part sizes ascending.
pub fn profile_name(sizes: &[usize]) -> String {
    let mut sorted = sizes.to_vec();
    sorted.sort_unstable();
    let mut groups: Vec<(usize, usize)> = Vec::new();
    for s in sorted {
        match groups.last_mut() {
            Some((size, count)) if *size == s => *count += 1,
            _ => groups.push((s, 1)),
        }
    }
    let parts: Vec<String> = groups.iter().map(|(s, c)| format!("{s}*{c}")).collect();
    format!("K_{{{}}}", parts.join(","))
}
