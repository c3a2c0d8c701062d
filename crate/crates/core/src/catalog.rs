//! Named example groups.
//!
//! Conventions are pinned so that element indices are reproducible:
//!
//! * `z<n>`: `Z_n`, element `a` at index `a`.
//! * `q8`: indices `0..8` are `1, -1, i, -i, j, -j, k, -k` with `ij = k`.
//! * `d<n>`: dihedral of order `2n`; `f^e r^a` at index `n·e + a`, with
//!   `f r f = r⁻¹`.
//! * `s<n>`, `a<n>`: permutations of `1..=n` in lexicographic order of
//!   their one-line notation, `(gh)(i) = g(h(i))`.
//! * `heis<n>`: unitriangular 3×3 matrices over `Z_n`, `(a, b, c)` at
//!   index `a·n² + b·n + c`, `(a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab')`.
//! * `<g>x<h>`: direct product, `(a, b)` at index `a·|h| + b`.

use crate::group::FiniteGroup;
use crate::{Error, Result};

pub fn cyclic(n: usize) -> FiniteGroup {
    let names = (0..n).map(|a| a.to_string()).collect();
    FiniteGroup::from_fn(format!("z{n}"), n, Some(names), |a, b| (a + b) % n)
        .expect("cyclic group table")
}

/// `Q8` as `±1, ±i, ±j, ±k`.
pub fn quaternion() -> FiniteGroup {
    // unit u in {1, i, j, k} with sign s: index 2u + s
    const UNIT_MUL: [[(usize, bool); 4]; 4] = [
        [(0, false), (1, false), (2, false), (3, false)],
        [(1, false), (0, true), (3, false), (2, true)],
        [(2, false), (3, true), (0, true), (1, false)],
        [(3, false), (2, false), (1, true), (0, true)],
    ];
    let names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    FiniteGroup::from_fn("q8", 8, Some(names), |a, b| {
        let (u, neg) = UNIT_MUL[a / 2][b / 2];
        let sign = (a % 2) ^ (b % 2) ^ usize::from(neg);
        2 * u + sign
    })
    .expect("quaternion table")
}

/// Dihedral group of order `2n`.
pub fn dihedral(n: usize) -> FiniteGroup {
    let rot = |a: usize| match a {
        0 => String::new(),
        1 => "r".to_string(),
        _ => format!("r{a}"),
    };
    let names = (0..2 * n)
        .map(|x| match (x / n, x % n) {
            (0, 0) => "1".to_string(),
            (0, a) => rot(a),
            (_, a) => format!("f{}", rot(a)),
        })
        .collect();
    FiniteGroup::from_fn(format!("d{n}"), 2 * n, Some(names), |x, y| {
        let (e1, a1) = (x / n, x % n);
        let (e2, a2) = (y / n, y % n);
        // f^e1 r^a1 f^e2 r^a2 = f^(e1+e2) r^(±a1 + a2)
        let a1 = if e2 == 1 { (n - a1) % n } else { a1 };
        ((e1 + e2) % 2) * n + (a1 + a2) % n
    })
    .expect("dihedral table")
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

fn is_even(p: &[usize]) -> bool {
    let inversions = (0..p.len())
        .flat_map(|i| (i + 1..p.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| p[i] > p[j])
        .count();
    inversions % 2 == 0
}

fn cycle_name(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        out.push('(');
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            out.push_str(&(i + 1).to_string());
            i = p[i];
        }
        out.push(')');
    }
    if out.is_empty() {
        "1".into()
    } else {
        out
    }
}

fn permutation_group(label: String, perms: Vec<Vec<usize>>) -> FiniteGroup {
    let index: std::collections::HashMap<Vec<usize>, usize> =
        perms.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let names = perms.iter().map(|p| cycle_name(p)).collect();
    FiniteGroup::from_fn(label, perms.len(), Some(names), |a, b| {
        let composed: Vec<usize> = (0..perms[a].len()).map(|i| perms[a][perms[b][i]]).collect();
        index[&composed]
    })
    .expect("permutation group table")
}

pub fn symmetric(n: usize) -> FiniteGroup {
    permutation_group(format!("s{n}"), permutations(n))
}

pub fn alternating(n: usize) -> FiniteGroup {
    let perms = permutations(n).into_iter().filter(|p| is_even(p)).collect();
    permutation_group(format!("a{n}"), perms)
}

/// `UT_3(Z_n)`.
pub fn heisenberg(n: usize) -> FiniteGroup {
    let split = |x: usize| (x / (n * n), (x / n) % n, x % n);
    let names = (0..n * n * n)
        .map(|x| {
            let (a, b, c) = split(x);
            if x == 0 {
                "1".to_string()
            } else {
                format!("[{a},{b},{c}]")
            }
        })
        .collect();
    FiniteGroup::from_fn(format!("heis{n}"), n * n * n, Some(names), |x, y| {
        let (a, b, c) = split(x);
        let (a2, b2, c2) = split(y);
        ((a + a2) % n) * n * n + ((b + b2) % n) * n + (c + c2 + a * b2) % n
    })
    .expect("heisenberg table")
}

fn parse_factor(name: &str) -> Result<FiniteGroup> {
    let bad = || Error::Precondition(format!("unknown catalog group '{name}'"));
    let num = |prefix: &str| -> Option<usize> { name.strip_prefix(prefix)?.parse().ok() };
    let g = match name {
        "q8" => quaternion(),
        "klein" => cyclic(2).direct_product(&cyclic(2)).with_label("klein"),
        _ => {
            if let Some(n) = num("heis").filter(|&n| (2..=6).contains(&n)) {
                heisenberg(n)
            } else if let Some(n) = num("z").or_else(|| num("c")).filter(|&n| (1..=256).contains(&n)) {
                cyclic(n)
            } else if let Some(n) = num("d").filter(|&n| (2..=64).contains(&n)) {
                dihedral(n)
            } else if let Some(n) = num("s").filter(|&n| (1..=5).contains(&n)) {
                symmetric(n)
            } else if let Some(n) = num("a").filter(|&n| (1..=5).contains(&n)) {
                alternating(n)
            } else {
                return Err(bad());
            }
        }
    };
    Ok(g)
}

/// Looks up a catalog name such as `q8`, `d4`, `s3xz2` or `heis3`.
pub fn by_name(name: &str) -> Result<FiniteGroup> {
    let name = name.trim().to_ascii_lowercase();
    let mut parts = name.split('x');
    let first = parts.next().unwrap_or_default();
    let mut g = parse_factor(first)?;
    for part in parts {
        g = g.direct_product(&parse_factor(part)?);
    }
    Ok(g.with_label(name))
}

/// Every catalog group of order at most 16, plus a few larger specimens.
pub fn small_groups() -> Vec<&'static str> {
    vec![
        "z1", "z2", "z3", "z4", "z5", "z6", "z7", "z8", "z9", "z10", "z11", "z12", "z13", "z14",
        "z15", "z16", "klein", "z2xz4", "z2xz2xz2", "z3xz3", "z2xz6", "z4xz4", "z2xz8",
        "z2xz2xz4", "z2xz2xz2xz2", "d2", "d3", "d4", "d5", "d6", "d7", "d8", "q8", "s3", "a4",
        "s3xz2", "d4xz2", "q8xz2", "heis2", "z3xs3",
    ]
}

/// Catalog groups between order 17 and 64 used by the exhaustive invariants.
pub fn medium_groups() -> Vec<&'static str> {
    vec!["s4", "heis3", "d12", "q8xz3", "d4xz4", "q8xz2xz2", "s3xs3", "a4xz2", "heis4", "q8xz4"]
}
