//! The square opinion lattice and its range-limited neighborhoods.

use rand::distr::{Distribution, Uniform};
use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64Mcg;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::sig9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    /// Cells beyond the edge do not exist.
    #[default]
    Open,
    /// Coordinates wrap modulo `n`.
    Periodic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellIndex {
    pub i: usize,
    pub j: usize,
}

impl CellIndex {
    pub fn new(i: usize, j: usize) -> Self {
        CellIndex { i, j }
    }
}

/// Chebyshev interaction radius `r` together with the `rho` it came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InteractionRange {
    pub r: usize,
    pub rho: f64,
}

impl InteractionRange {
    pub fn is_full(&self, n: usize) -> bool {
        self.r >= n
    }
}

/// Map the localization parameter to a cell radius: `max(1, round(rho * n))`.
pub fn rho_to_range(rho: f64, n: usize) -> Result<InteractionRange> {
    if !rho.is_finite() {
        return Err(Error::NonFinite(rho));
    }
    if rho <= 0.0 {
        return Err(Error::invalid("rho", format!("{rho} must be positive")));
    }
    let r = ((rho * n as f64).round() as usize).max(1);
    Ok(InteractionRange { r, rho })
}

#[derive(Debug, Clone, PartialEq)]
pub struct OpinionGrid {
    n: usize,
    opinions: Vec<f64>,
    boundary: Boundary,
}

impl OpinionGrid {
    /// Build a grid from row-major opinions.
    pub fn new(n: usize, opinions: Vec<f64>, boundary: Boundary) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid("n", format!("side length {n} is below 2")));
        }
        if opinions.len() != n * n {
            return Err(Error::invalid(
                "opinions",
                format!("expected {} values, got {}", n * n, opinions.len()),
            ));
        }
        for &o in &opinions {
            if !o.is_finite() {
                return Err(Error::NonFinite(o));
            }
            if !(-1.0..=1.0).contains(&o) {
                return Err(Error::invalid("opinions", format!("{o} outside [-1, 1]")));
            }
        }
        Ok(OpinionGrid { n, opinions, boundary })
    }

    pub fn filled(n: usize, value: f64, boundary: Boundary) -> Result<Self> {
        Self::new(n, vec![value; n * n], boundary)
    }

    /// I.i.d. uniform opinions on `[low, high]`, reproducible from `seed`.
    pub fn init_random(n: usize, seed: u64, low: f64, high: f64) -> Result<Self> {
        if !low.is_finite() || !high.is_finite() {
            return Err(Error::NonFinite(if low.is_finite() { high } else { low }));
        }
        if low < -1.0 {
            return Err(Error::invalid("init_low", format!("{low} below -1")));
        }
        if high > 1.0 {
            return Err(Error::invalid("init_high", format!("{high} above 1")));
        }
        if low >= high {
            return Err(Error::invalid("init_low", format!("{low} is not below init_high {high}")));
        }
        if n < 2 {
            return Err(Error::invalid("n", format!("side length {n} is below 2")));
        }
        let mut rng = Pcg64Mcg::seed_from_u64(seed);
        let dist = Uniform::new_inclusive(low, high).expect("checked bounds");
        let opinions = (0..n * n).map(|_| dist.sample(&mut rng)).collect();
        Ok(OpinionGrid {
            n,
            opinions,
            boundary: Boundary::Open,
        })
    }

    pub fn with_boundary(mut self, boundary: Boundary) -> Self {
        self.boundary = boundary;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn len(&self) -> usize {
        self.opinions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.opinions.is_empty()
    }

    /// Row-major opinions.
    pub fn opinions(&self) -> &[f64] {
        &self.opinions
    }

    pub fn get(&self, c: CellIndex) -> f64 {
        self.opinions[self.linear(c)]
    }

    /// Panics if `value` is outside `[-1, 1]`.
    pub fn set(&mut self, c: CellIndex, value: f64) {
        assert!((-1.0..=1.0).contains(&value), "opinion {value} outside [-1, 1]");
        let k = self.linear(c);
        self.opinions[k] = value;
    }

    #[inline]
    pub fn linear(&self, c: CellIndex) -> usize {
        debug_assert!(c.i < self.n && c.j < self.n);
        c.i * self.n + c.j
    }

    #[inline]
    pub fn cell(&self, k: usize) -> CellIndex {
        CellIndex::new(k / self.n, k % self.n)
    }

    pub(crate) fn opinions_mut(&mut self) -> &mut [f64] {
        &mut self.opinions
    }

    /// The grid with every opinion negated.
    pub fn negated(&self) -> Self {
        OpinionGrid {
            n: self.n,
            opinions: self.opinions.iter().map(|o| -o).collect(),
            boundary: self.boundary,
        }
    }

    pub fn mean(&self) -> f64 {
        self.opinions.iter().sum::<f64>() / self.opinions.len() as f64
    }

    /// Distance between two coordinates along one axis under this grid's boundary.
    pub fn axis_distance(&self, a: usize, b: usize) -> usize {
        let d = a.abs_diff(b);
        match self.boundary {
            Boundary::Open => d,
            Boundary::Periodic => d.min(self.n - d),
        }
    }

    pub fn chebyshev(&self, a: CellIndex, b: CellIndex) -> usize {
        self.axis_distance(a.i, b.i).max(self.axis_distance(a.j, b.j))
    }

    fn span(&self, x: usize, r: usize) -> AxisSpan {
        let n = self.n;
        match self.boundary {
            Boundary::Open => {
                let lo = x.saturating_sub(r);
                let hi = (x.saturating_add(r)).min(n - 1);
                AxisSpan {
                    start: lo,
                    len: hi - lo + 1,
                    self_pos: x - lo,
                }
            }
            Boundary::Periodic if r.saturating_mul(2).saturating_add(1) >= n => AxisSpan {
                start: 0,
                len: n,
                self_pos: x,
            },
            Boundary::Periodic => AxisSpan {
                start: (x + n - r) % n,
                len: 2 * r + 1,
                self_pos: r,
            },
        }
    }

    /// All cells other than `c` within Chebyshev distance `range.r`, row-major.
    pub fn neighborhood(&self, c: CellIndex, range: InteractionRange) -> Vec<CellIndex> {
        let rows = self.span(c.i, range.r);
        let cols = self.span(c.j, range.r);
        let mut out = Vec::with_capacity(rows.len * cols.len - 1);
        for a in 0..rows.len {
            for b in 0..cols.len {
                if a == rows.self_pos && b == cols.self_pos {
                    continue;
                }
                out.push(CellIndex::new(rows.coord(a, self.n), cols.coord(b, self.n)));
            }
        }
        out.sort_unstable();
        out
    }

    /// Uniform draw from the neighborhood of `c`; never returns `c`.
    pub fn sample_partner<R: Rng + ?Sized>(
        &self,
        c: CellIndex,
        range: InteractionRange,
        rng: &mut R,
    ) -> Result<CellIndex> {
        let rows = self.span(c.i, range.r);
        let cols = self.span(c.j, range.r);
        if rows.len * cols.len < 2 {
            return Err(Error::EmptyNeighborhood(c.i, c.j));
        }
        let k = self.sample_in(rows, cols, rng);
        Ok(self.cell(k))
    }

    /// Hot-path variant of [`sample_partner`](Self::sample_partner) on linear indices.
    #[inline]
    pub(crate) fn sample_partner_linear<R: Rng + ?Sized>(&self, c: usize, r: usize, rng: &mut R) -> usize {
        let (i, j) = (c / self.n, c % self.n);
        let rows = self.span(i, r);
        let cols = self.span(j, r);
        self.sample_in(rows, cols, rng)
    }

    #[inline]
    fn sample_in<R: Rng + ?Sized>(&self, rows: AxisSpan, cols: AxisSpan, rng: &mut R) -> usize {
        let own = rows.self_pos * cols.len + cols.self_pos;
        let mut k = rng.random_range(0..rows.len * cols.len - 1);
        if k >= own {
            k += 1;
        }
        let i = rows.coord(k / cols.len, self.n);
        let j = cols.coord(k % cols.len, self.n);
        i * self.n + j
    }

    /// `n` lines of `n` comma-separated opinions, nine significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.len() * 12);
        for row in self.opinions.chunks(self.n) {
            let line: Vec<String> = row.iter().map(|&o| sig9(o)).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    /// Parse the format written by [`to_csv`](Self::to_csv). Blank lines are skipped.
    pub fn from_csv(text: &str, boundary: Boundary) -> Result<Self> {
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let row = line
                .split(',')
                .map(|field| {
                    field.trim().parse::<f64>().map_err(|e| Error::GridParse {
                        line: lineno + 1,
                        reason: format!("`{}`: {e}", field.trim()),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        let n = rows.len();
        if let Some((k, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::GridParse {
                line: k + 1,
                reason: format!("row has {} fields, grid has {n} rows", row.len()),
            });
        }
        Self::new(n, rows.concat(), boundary)
    }
}

#[derive(Debug, Clone, Copy)]
struct AxisSpan {
    start: usize,
    len: usize,
    self_pos: usize,
}

impl AxisSpan {
    #[inline]
    fn coord(&self, k: usize, n: usize) -> usize {
        let x = self.start + k;
        if x >= n {
            x - n
        } else {
            x
        }
    }
}
