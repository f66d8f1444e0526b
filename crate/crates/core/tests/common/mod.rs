#![allow(dead_code)]

use std::io::Write;

use kinetic_opinion::{Boundary, OpinionGrid};

/// Sizes of 4-connected components of cells selected by `member`, by
/// iterative flood fill. Independent of the library's disjoint-set labeling.
pub fn flood_fill_sizes(grid: &OpinionGrid, member: impl Fn(f64) -> bool) -> Vec<usize> {
    let n = grid.n() as isize;
    let ops = grid.opinions();
    let periodic = grid.boundary() == Boundary::Periodic;
    let mut seen = vec![false; ops.len()];
    let mut sizes = Vec::new();
    for start in 0..ops.len() {
        if seen[start] || !member(ops[start]) {
            continue;
        }
        seen[start] = true;
        let mut stack = vec![start];
        let mut size = 0;
        while let Some(k) = stack.pop() {
            size += 1;
            let (i, j) = ((k as isize) / n, (k as isize) % n);
            for (di, dj) in [(-1, 0), (1, 0), (0, -1), (0, 1)] {
                let (mut a, mut b) = (i + di, j + dj);
                if periodic {
                    a = a.rem_euclid(n);
                    b = b.rem_euclid(n);
                } else if a < 0 || b < 0 || a >= n || b >= n {
                    continue;
                }
                let kk = (a * n + b) as usize;
                if !seen[kk] && member(ops[kk]) {
                    seen[kk] = true;
                    stack.push(kk);
                }
            }
        }
        sizes.push(size);
    }
    sizes
}

/// Print a result line straight to stdout so it shows up even when the test
/// harness captures `println!` output.
pub fn report(line: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "\n{line}");
    let _ = out.flush();
}
