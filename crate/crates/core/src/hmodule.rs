//! The metric space of paravector tuples, finite point sets and the
//! Hausdorff-Pompeiu distance between them.
//!
//! Every tuple `ξ = (ξ_1, …, ξ_k)` has a flat real view of dimension
//! `D = (n + 1)·k`, ordered component-major: flat index `i·(n+1) + j` holds
//! coefficient `j` of entry `i`. Point sets store points in that flat form.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::OnceLock;

use rayon::prelude::*;

use crate::clifford::{AlgebraKind, CliffordNumber, Paravector};
use crate::error::{Error, Result};

/// A column vector of `k` paravectors.
#[derive(Clone, Debug, PartialEq)]
pub struct HVector {
    algebra: AlgebraKind,
    k: usize,
    flat: Vec<f64>,
}

impl HVector {
    pub fn zero(algebra: AlgebraKind, k: usize) -> Self {
        HVector {
            algebra,
            k,
            flat: vec![0.0; algebra.paravector_len() * k],
        }
    }

    pub fn from_flat(algebra: AlgebraKind, k: usize, flat: Vec<f64>) -> Result<Self> {
        if flat.len() != algebra.paravector_len() * k {
            return Err(Error::Shape(format!(
                "expected {} flat coordinates for k = {k} over {algebra}, got {}",
                algebra.paravector_len() * k,
                flat.len()
            )));
        }
        Ok(HVector { algebra, k, flat })
    }

    pub fn from_entries(entries: &[Paravector]) -> Result<Self> {
        let first = entries
            .first()
            .ok_or_else(|| Error::Shape("an HVector needs at least one entry".into()))?;
        let algebra = first.algebra();
        let mut flat = Vec::with_capacity(algebra.paravector_len() * entries.len());
        for e in entries {
            if e.algebra() != algebra {
                return Err(Error::AlgebraMismatch(
                    algebra.to_string(),
                    e.algebra().to_string(),
                ));
            }
            flat.extend_from_slice(e.coeffs());
        }
        Ok(HVector {
            algebra,
            k: entries.len(),
            flat,
        })
    }

    pub fn algebra(&self) -> AlgebraKind {
        self.algebra
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.flat.len()
    }

    pub fn flat(&self) -> &[f64] {
        &self.flat
    }

    pub fn into_flat(self) -> Vec<f64> {
        self.flat
    }

    pub fn entry(&self, i: usize) -> Paravector {
        let w = self.algebra.paravector_len();
        Paravector::new(self.algebra, self.flat[i * w..(i + 1) * w].to_vec())
            .expect("slice width matches the algebra")
    }

    pub fn entries(&self) -> Vec<Paravector> {
        (0..self.k).map(|i| self.entry(i)).collect()
    }

    fn check_shape(&self, other: &HVector) -> Result<()> {
        if self.algebra != other.algebra || self.k != other.k {
            return Err(Error::Shape(format!(
                "{} with k = {} vs {} with k = {}",
                self.algebra, self.k, other.algebra, other.k
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &HVector) -> Result<HVector> {
        self.check_shape(other)?;
        Ok(HVector {
            flat: self.flat.iter().zip(&other.flat).map(|(a, b)| a + b).collect(),
            ..self.shape_only()
        })
    }

    pub fn sub(&self, other: &HVector) -> Result<HVector> {
        self.check_shape(other)?;
        Ok(HVector {
            flat: self.flat.iter().zip(&other.flat).map(|(a, b)| a - b).collect(),
            ..self.shape_only()
        })
    }

    fn shape_only(&self) -> HVector {
        HVector {
            algebra: self.algebra,
            k: self.k,
            flat: Vec::new(),
        }
    }

    /// `ξ* η = Σ_i conj(ξ_i) η_i`.
    pub fn adjoint_dot(&self, other: &HVector) -> Result<CliffordNumber> {
        self.check_shape(other)?;
        let mut acc = CliffordNumber::zero(self.algebra);
        for i in 0..self.k {
            let term = self.entry(i).conj().mul(&other.entry(i))?;
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// `‖ξ‖ = √(Σ |ξ_i|²)`.
    pub fn hnorm(&self) -> f64 {
        norm(&self.flat)
    }

    /// `d(ξ, η) = ‖ξ − η‖`.
    pub fn metric(&self, other: &HVector) -> Result<f64> {
        self.check_shape(other)?;
        Ok(dist_sq(&self.flat, &other.flat).sqrt())
    }
}

/// A `k × k` matrix over the paravectors, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct HMatrix {
    algebra: AlgebraKind,
    k: usize,
    entries: Vec<Paravector>,
}

impl HMatrix {
    pub fn new(k: usize, entries: Vec<Paravector>) -> Result<Self> {
        if k == 0 || entries.len() != k * k {
            return Err(Error::Shape(format!(
                "a {k}x{k} matrix needs {} entries, got {}",
                k * k,
                entries.len()
            )));
        }
        let algebra = entries[0].algebra();
        if let Some(bad) = entries.iter().find(|e| e.algebra() != algebra) {
            return Err(Error::AlgebraMismatch(
                algebra.to_string(),
                bad.algebra().to_string(),
            ));
        }
        Ok(HMatrix {
            algebra,
            k,
            entries,
        })
    }

    /// `diag(d, …, d)`.
    pub fn diagonal(k: usize, d: &Paravector) -> Self {
        let zero = Paravector::zero(d.algebra());
        let entries = (0..k * k)
            .map(|idx| {
                if idx / k == idx % k {
                    d.clone()
                } else {
                    zero.clone()
                }
            })
            .collect();
        HMatrix {
            algebra: d.algebra(),
            k,
            entries,
        }
    }

    pub fn algebra(&self) -> AlgebraKind {
        self.algebra
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, i: usize, j: usize) -> &Paravector {
        &self.entries[i * self.k + j]
    }

    /// `(H*)_ij = conj(H_ji)`.
    pub fn adjoint(&self) -> HMatrix {
        let k = self.k;
        let entries = (0..k * k)
            .map(|idx| self.get(idx % k, idx / k).conj())
            .collect();
        HMatrix {
            algebra: self.algebra,
            k,
            entries,
        }
    }

    /// The right-linear map `L(ξ)_i = Σ_j H_ij ξ_j`, valued in `Cl(n)^k`.
    pub fn apply(&self, xi: &HVector) -> Result<Vec<CliffordNumber>> {
        if xi.algebra() != self.algebra || xi.k() != self.k {
            return Err(Error::Shape(format!(
                "{}x{} matrix over {} applied to k = {} over {}",
                self.k,
                self.k,
                self.algebra,
                xi.k(),
                xi.algebra()
            )));
        }
        (0..self.k)
            .map(|i| {
                let mut acc = CliffordNumber::zero(self.algebra);
                for j in 0..self.k {
                    acc = acc.add(&self.get(i, j).mul(&xi.entry(j))?)?;
                }
                Ok(acc)
            })
            .collect()
    }
}

pub(crate) fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn cell_key(x: &[f64], cell: f64) -> Vec<i64> {
    x.iter().map(|v| (v / cell).floor() as i64).collect()
}

/// Lexicographic order on flat coordinates.
pub fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// Uniform grid over the members of a [`PointSet`].
#[derive(Clone, Debug)]
pub struct Grid {
    cell: f64,
    index: HashMap<Vec<i64>, usize>,
    cells: Vec<(Vec<i64>, Vec<u32>)>,
    lo: Vec<i64>,
    hi: Vec<i64>,
    /// Coarser level for far queries, built on first use.
    blocks: OnceLock<Blocks>,
}

/// Occupied cells grouped into blocks of `factor^dim` cells.
#[derive(Clone, Debug)]
struct Blocks {
    factor: i64,
    members: Vec<(Vec<i64>, Vec<usize>)>,
    index: HashMap<Vec<i64>, usize>,
}

impl Blocks {
    /// Doubles the factor until at most about `sqrt(cells)` blocks remain.
    fn build(cells: &[(Vec<i64>, Vec<u32>)]) -> Blocks {
        let target = ((cells.len() as f64).sqrt().ceil() as usize).max(1);
        let mut factor = 1i64;
        loop {
            factor *= 2;
            let mut map: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
            for (slot, (key, _)) in cells.iter().enumerate() {
                let coarse = key.iter().map(|k| k.div_euclid(factor)).collect();
                map.entry(coarse).or_default().push(slot);
            }
            if map.len() <= target || factor >= 1 << 40 {
                let mut members: Vec<_> = map.into_iter().collect();
                members.sort_unstable();
                let index = members
                    .iter()
                    .enumerate()
                    .map(|(b, (key, _))| (key.clone(), b))
                    .collect();
                return Blocks {
                    factor,
                    members,
                    index,
                };
            }
        }
    }
}

/// Lower bound on the distance from `x` (in cell `key`) to any point of the
/// cell at `key + offset` along one axis, for cells of side `cell`.
fn gap(x: f64, key: i64, offset: i64, cell: f64) -> f64 {
    let slack = cell * 1e-9;
    let g = match offset.cmp(&0) {
        Ordering::Equal => return 0.0,
        Ordering::Greater => (key + offset) as f64 * cell - x,
        Ordering::Less => x - (key + offset + 1) as f64 * cell,
    };
    (g - slack).max(0.0)
}

impl Grid {
    fn build(set: &PointSet, cell: f64) -> Grid {
        let mut index: HashMap<Vec<i64>, usize> = HashMap::new();
        let mut cells: Vec<(Vec<i64>, Vec<u32>)> = Vec::new();
        let mut lo = vec![i64::MAX; set.dim];
        let mut hi = vec![i64::MIN; set.dim];
        for (i, p) in set.iter().enumerate() {
            let key = cell_key(p, cell);
            for (d, &c) in key.iter().enumerate() {
                lo[d] = lo[d].min(c);
                hi[d] = hi[d].max(c);
            }
            match index.get(&key) {
                Some(&slot) => cells[slot].1.push(i as u32),
                None => {
                    index.insert(key.clone(), cells.len());
                    cells.push((key, vec![i as u32]));
                }
            }
        }
        Grid {
            cell,
            index,
            cells,
            lo,
            hi,
            blocks: OnceLock::new(),
        }
    }

    pub fn cell_size(&self) -> f64 {
        self.cell
    }

    pub fn occupied_cells(&self) -> usize {
        self.cells.len()
    }

    /// Number of members per cell, summed; equals the set size.
    pub fn indexed_points(&self) -> usize {
        self.cells.iter().map(|(_, m)| m.len()).sum()
    }

    /// Lower bound on the distance from `x` to any point of the cell at
    /// `key + offset` along one axis.
    fn axis_gap(&self, x: f64, key: i64, offset: i64) -> f64 {
        gap(x, key, offset, self.cell)
    }

    /// Squared distance from `x` to its nearest member of `set`, or any
    /// value `<= cutoff` once a member that close has been found.
    ///
    /// Cells are visited ring by ring in Chebyshev distance from the cell of
    /// `x`. Within a ring, offsets are explored axis by axis, nearest side
    /// first, and a branch is cut once its partial lower bound reaches the
    /// best distance so far. The search ends when no unvisited ring can hold
    /// a closer point, so with a negative cutoff the result is exact.
    fn blocks(&self) -> &Blocks {
        self.blocks.get_or_init(|| Blocks::build(&self.cells))
    }

    fn nearest_sq(&self, set: &PointSet, x: &[f64], cutoff: f64) -> f64 {
        let dim = x.len();
        let key = cell_key(x, self.cell);
        let max_ring = (0..dim)
            .map(|d| (key[d] - self.lo[d]).max(self.hi[d] - key[d]).max(0))
            .max()
            .unwrap_or(0);
        let mut q = Query {
            grid: self,
            set,
            x,
            probe: key.clone(),
            key,
            best: f64::INFINITY,
            cutoff,
        };
        // once blocks exist, a query in an empty block skips the rings
        if let Some(blocks) = self.blocks.get() {
            let coarse: Vec<i64> = q.key.iter().map(|k| k.div_euclid(blocks.factor)).collect();
            if !blocks.index.contains_key(&coarse) {
                q.scan_from_ring(0);
                return q.best;
            }
        }
        for ring in 0..=max_ring {
            if q.done() {
                break;
            }
            if ring > 0 {
                let lb = (0..dim)
                    .map(|d| {
                        self.axis_gap(x[d], q.key[d], ring)
                            .min(self.axis_gap(x[d], q.key[d], -ring))
                    })
                    .fold(f64::INFINITY, f64::min);
                if lb * lb >= q.best {
                    break;
                }
            }
            let ring_cells = (2.0 * ring as f64 + 1.0).powi(dim as i32)
                - (2.0 * ring as f64 - 1.0).max(0.0).powi(dim as i32);
            // past this size a ring costs more than the block scan
            if ring_cells > (self.cells.len() as f64).sqrt() * 2f64.powi(dim as i32) {
                q.scan_from_ring(ring);
                break;
            }
            q.visit_ring(ring, 0, 0.0, false);
        }
        q.best
    }
}

/// State of one nearest-neighbour search.
struct Query<'a> {
    grid: &'a Grid,
    set: &'a PointSet,
    x: &'a [f64],
    key: Vec<i64>,
    probe: Vec<i64>,
    best: f64,
    cutoff: f64,
}

impl Query<'_> {
    fn done(&self) -> bool {
        self.best <= self.cutoff
    }

    fn scan_cell(&mut self, slot: usize) {
        for &m in &self.grid.cells[slot].1 {
            let d = dist_sq(self.x, self.set.point(m as usize));
            if d < self.best {
                self.best = d;
            }
        }
    }

    fn visit_ring(&mut self, ring: i64, axis: usize, partial: f64, on_ring: bool) {
        if axis == self.x.len() {
            if on_ring || ring == 0 {
                if let Some(&slot) = self.grid.index.get(self.probe.as_slice()) {
                    self.scan_cell(slot);
                }
            }
            return;
        }
        let (x, key) = (self.x[axis], self.key[axis]);
        for step in 0..=ring {
            let (up, down) = (
                self.grid.axis_gap(x, key, step),
                self.grid.axis_gap(x, key, -step),
            );
            let sides = if step == 0 {
                [Some(0), None]
            } else if up <= down {
                [Some(step), Some(-step)]
            } else {
                [Some(-step), Some(step)]
            };
            for offset in sides.into_iter().flatten() {
                if self.done() {
                    return;
                }
                let gap = if offset > 0 { up } else { down };
                let lb = partial + gap * gap;
                if lb >= self.best {
                    continue;
                }
                self.probe[axis] = key + offset;
                self.visit_ring(ring, axis + 1, lb, on_ring || offset.abs() == ring);
            }
        }
        self.probe[axis] = key;
    }

    /// Fallback for sparse grids: scan every occupied cell at Chebyshev
    /// ring `>= ring`, visiting blocks in order of their lower bounds.
    fn scan_from_ring(&mut self, ring: i64) {
        let grid = self.grid;
        let blocks = grid.blocks();
        let block_cell = grid.cell * blocks.factor as f64;
        let dim = self.x.len();
        let coarse: Vec<i64> = self.key.iter().map(|k| k.div_euclid(blocks.factor)).collect();
        let mut order: Vec<(f64, usize)> = blocks
            .members
            .iter()
            .enumerate()
            .filter_map(|(b, (bkey, _))| {
                let lb: f64 = (0..dim)
                    .map(|d| gap(self.x[d], coarse[d], bkey[d] - coarse[d], block_cell).powi(2))
                    .sum();
                (lb < self.best).then_some((lb, b))
            })
            .collect();
        order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        for (lb, b) in order {
            if lb >= self.best || self.done() {
                break;
            }
            for &slot in &blocks.members[b].1 {
                let cell_key = &grid.cells[slot].0;
                let mut cheb = 0;
                let mut lb = 0.0;
                for d in 0..dim {
                    let off = cell_key[d] - self.key[d];
                    cheb = cheb.max(off.abs());
                    lb += grid.axis_gap(self.x[d], self.key[d], off).powi(2);
                }
                if cheb >= ring && lb < self.best {
                    self.scan_cell(slot);
                    if self.done() {
                        return;
                    }
                }
            }
        }
    }
}

/// A finite set of points of `A_{n+1}^k` in flat coordinates.
#[derive(Clone, Debug)]
pub struct PointSet {
    dim: usize,
    data: Vec<f64>,
    grid: Option<Grid>,
}

impl PartialEq for PointSet {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.data == other.data
    }
}

impl PointSet {
    pub fn new(dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 || data.len() % dim != 0 {
            return Err(Error::Shape(format!(
                "{} coordinates do not form points of dimension {dim}",
                data.len()
            )));
        }
        Ok(PointSet {
            dim,
            data,
            grid: None,
        })
    }

    pub fn empty(dim: usize) -> Self {
        PointSet {
            dim,
            data: Vec::new(),
            grid: None,
        }
    }

    pub fn singleton(point: &[f64]) -> Self {
        PointSet {
            dim: point.len(),
            data: point.to_vec(),
            grid: None,
        }
    }

    pub fn from_points<I, P>(dim: usize, points: I) -> Result<Self>
    where
        I: IntoIterator<Item = P>,
        P: AsRef<[f64]>,
    {
        let mut data = Vec::new();
        for p in points {
            let p = p.as_ref();
            if p.len() != dim {
                return Err(Error::Shape(format!(
                    "point of dimension {} in a set of dimension {dim}",
                    p.len()
                )));
            }
            data.extend_from_slice(p);
        }
        PointSet::new(dim, data)
    }

    pub fn from_hvectors(points: &[HVector]) -> Result<Self> {
        let dim = points.first().ok_or(Error::EmptySet)?.dim();
        Self::from_points(dim, points.iter().map(HVector::flat))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> std::slice::ChunksExact<'_, f64> {
        self.data.chunks_exact(self.dim)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }

    pub fn grid(&self) -> Option<&Grid> {
        self.grid.as_ref()
    }

    /// Attaches a spatial grid with the given cell size.
    pub fn with_grid(mut self, cell: f64) -> Result<Self> {
        if !(cell > 0.0 && cell.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "grid cell must be positive, got {cell}"
            )));
        }
        self.grid = Some(Grid::build(&self, cell));
        Ok(self)
    }

    /// Points sorted lexicographically with exact duplicates removed.
    pub fn canonical(&self) -> PointSet {
        let mut rows: Vec<&[f64]> = self.iter().collect();
        rows.sort_by(|a, b| lex_cmp(a, b));
        rows.dedup_by(|a, b| lex_cmp(a, b).is_eq());
        PointSet {
            dim: self.dim,
            data: rows.concat(),
            grid: None,
        }
    }

    /// Largest norm over the members, 0 for an empty set.
    pub fn max_norm(&self) -> f64 {
        self.iter().map(norm).fold(0.0, f64::max)
    }

    /// Keeps only the listed flat coordinates of every point.
    pub fn project(&self, axes: &[usize]) -> Result<PointSet> {
        if axes.is_empty() {
            return Err(Error::InvalidArgument("projection needs at least one axis".into()));
        }
        if let Some(&bad) = axes.iter().find(|&&a| a >= self.dim) {
            return Err(Error::InvalidArgument(format!(
                "axis {bad} out of range for dimension {}",
                self.dim
            )));
        }
        let data = self
            .iter()
            .flat_map(|p| axes.iter().map(move |&a| p[a]))
            .collect();
        PointSet::new(axes.len(), data)
    }

    /// Shortest distance from `x` to the set, using the grid when present.
    pub fn distance_to(&self, x: &[f64]) -> f64 {
        match &self.grid {
            Some(g) => g.nearest_sq(self, x, -1.0).sqrt(),
            None => self
                .iter()
                .map(|p| dist_sq(x, p))
                .fold(f64::INFINITY, f64::min)
                .sqrt(),
        }
    }
}

fn check_pair(a: &PointSet, b: &PointSet) -> Result<()> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    if a.dim != b.dim {
        return Err(Error::Shape(format!(
            "point sets of dimension {} and {}",
            a.dim, b.dim
        )));
    }
    Ok(())
}

/// `sup_{x∈A} inf_{y∈B} d(x, y)` by exhaustive search.
pub fn directed_bruteforce(a: &PointSet, b: &PointSet) -> f64 {
    (0..a.len())
        .into_par_iter()
        .map(|i| {
            let x = a.point(i);
            b.iter().map(|y| dist_sq(x, y)).fold(f64::INFINITY, f64::min)
        })
        .reduce(|| 0.0, f64::max)
        .sqrt()
}

/// Exact Hausdorff-Pompeiu distance by the double loop.
pub fn hausdorff_bruteforce(a: &PointSet, b: &PointSet) -> Result<f64> {
    check_pair(a, b)?;
    Ok(directed_bruteforce(a, b).max(directed_bruteforce(b, a)))
}

/// `sup_{x∈A} d(x, B)` using the grid of `B`.
///
/// A query stops as soon as it finds a member within the running maximum,
/// since it can no longer raise it. Only exact minima are ever recorded, so
/// the result is exact and independent of evaluation order.
pub fn directed_grid(a: &PointSet, b: &PointSet) -> Result<f64> {
    check_pair(a, b)?;
    let grid = b.grid.as_ref().ok_or(Error::GridMismatch)?;
    // nonnegative floats order like their bit patterns
    let running = AtomicU64::new(0f64.to_bits());
    (0..a.len()).into_par_iter().for_each(|i| {
        let cutoff = f64::from_bits(running.load(AtomicOrdering::Relaxed));
        let d = grid.nearest_sq(b, a.point(i), cutoff);
        if d > cutoff {
            running.fetch_max(d.to_bits(), AtomicOrdering::Relaxed);
        }
    });
    Ok(f64::from_bits(running.into_inner()).sqrt())
}

/// Hausdorff-Pompeiu distance using the grids both sets carry.
pub fn hausdorff_grid(a: &PointSet, b: &PointSet) -> Result<f64> {
    check_pair(a, b)?;
    match (&a.grid, &b.grid) {
        (Some(ga), Some(gb)) if ga.cell == gb.cell => {}
        _ => return Err(Error::GridMismatch),
    }
    Ok(directed_grid(a, b)?.max(directed_grid(b, a)?))
}

/// Hausdorff distance, indexing both sets on a grid of cell `cell` first.
pub fn hausdorff(a: &PointSet, b: &PointSet, cell: f64) -> Result<f64> {
    check_pair(a, b)?;
    if a == b {
        return Ok(0.0);
    }
    let a = a.clone().with_grid(cell)?;
    let b = b.clone().with_grid(cell)?;
    hausdorff_grid(&a, &b)
}

/// Displacement bound of [`decimate`]: half the diagonal of a cell.
pub fn decimation_slack(cell: f64, dim: usize) -> f64 {
    cell * (dim as f64).sqrt() / 2.0
}

/// Replaces the points of every occupied grid cell by the cell's center.
///
/// The output is sorted lexicographically and does not depend on the order
/// of the input.
pub fn decimate(a: &PointSet, cell: f64) -> Result<PointSet> {
    if !(cell > 0.0 && cell.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "decimation cell must be positive, got {cell}"
        )));
    }
    let dim = a.dim;
    let mut keys: Vec<i64> = Vec::with_capacity(a.data.len());
    keys.par_extend(a.data.par_iter().map(|v| (v / cell).floor() as i64));
    let row = |i: usize| &keys[i * dim..(i + 1) * dim];
    let mut order: Vec<usize> = (0..a.len()).collect();
    order.par_sort_unstable_by(|&i, &j| row(i).cmp(row(j)));
    order.dedup_by(|i, j| row(*i) == row(*j));
    let data = order
        .iter()
        .flat_map(|&i| row(i).iter().map(|&c| (c as f64 + 0.5) * cell))
        .collect();
    PointSet::new(a.dim, data)
}
