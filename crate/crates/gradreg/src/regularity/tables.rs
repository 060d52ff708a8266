//! Graded Ext and Tor tables computed from a minimal resolution, with a
//! per-cell exactness flag and certified bounds on the unseen region.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gmod::{Ext, ExtendedDegree, GradedModule, Interval};
use crate::resolve::Resolution;
use crate::scalar::{sparse_rank, Field, SparseVec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Cell {
    Known(usize),
    Unknown,
}

impl Cell {
    pub fn known(self) -> Option<usize> {
        match self {
            Cell::Known(v) => Some(v),
            Cell::Unknown => None,
        }
    }
}

/// Which functor a table holds; fixes the total degree of a cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableKind {
    /// `Ext^m(X, Y)_j`, total degree `m + j`.
    Ext,
    /// `Tor_m(Y, X)_j`, total degree `j - m`.
    Tor,
}

/// Cells `(m, j)` for `m ≤ H` and `j` in a window, plus bounds on the rest.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedTable {
    pub kind: TableKind,
    pub j_lo: i64,
    pub j_hi: i64,
    /// `cells[m][j - j_lo]`.
    pub cells: Vec<Vec<Cell>>,
    /// Per row: whether the row may be nonzero above the window (`trusted_top` aside).
    pub above_open: Vec<bool>,
    /// Per row: whether the row may be nonzero below the window.
    pub below_open: Vec<bool>,
    /// Per row: cells above this column are taken as zero (top-band trust).
    pub trusted_top: Vec<Option<i64>>,
    /// Bounds on the total degree of nonzero cells in rows beyond `H`; `None` if those rows vanish.
    pub beyond: Option<(Ext, Ext)>,
    /// Extra bounds on possibly nonzero totals outside the window within rows `≤ H`.
    pub outside: Option<(Ext, Ext)>,
}

impl GradedTable {
    pub fn rows(&self) -> usize {
        self.cells.len()
    }

    pub fn total(&self, m: usize, j: i64) -> i64 {
        match self.kind {
            TableKind::Ext => m as i64 + j,
            TableKind::Tor => j - m as i64,
        }
    }

    pub fn get(&self, m: usize, j: i64) -> Cell {
        if m >= self.cells.len() || j < self.j_lo || j > self.j_hi {
            return Cell::Unknown;
        }
        self.cells[m][(j - self.j_lo) as usize]
    }

    fn cell_open(&self, m: usize, j: i64) -> bool {
        self.get(m, j) == Cell::Unknown && self.trusted_top[m].is_none_or(|t| j <= t)
    }

    fn bounds(&self) -> (Ext, Ext, Ext, Ext, Option<(usize, i64)>, Option<(usize, i64)>) {
        let mut certain_min = Ext::PosInf;
        let mut certain_max = Ext::NegInf;
        let mut possible_min = Ext::PosInf;
        let mut possible_max = Ext::NegInf;
        let (mut wmin, mut wmax) = (None, None);
        for m in 0..self.rows() {
            for j in self.j_lo..=self.j_hi {
                let t = Ext::Fin(self.total(m, j));
                match self.get(m, j) {
                    Cell::Known(v) if v > 0 => {
                        if t < certain_min {
                            certain_min = t;
                            wmin = Some((m, j));
                        }
                        if t > certain_max {
                            certain_max = t;
                            wmax = Some((m, j));
                        }
                    }
                    Cell::Unknown if self.cell_open(m, j) => {
                        possible_min = possible_min.min(t);
                        possible_max = possible_max.max(t);
                    }
                    _ => {}
                }
            }
        }
        for (lo, hi) in self.beyond.iter().chain(self.outside.iter()) {
            possible_min = possible_min.min(*lo);
            possible_max = possible_max.max(*hi);
        }
        (certain_min, certain_max, possible_min, possible_max, wmin, wmax)
    }

    /// `ideg` of the total complex, as an interval.
    pub fn ideg(&self) -> Interval {
        let (cmin, _, pmin, _, _, _) = self.bounds();
        Interval { lo: cmin.min(pmin), hi: cmin }
    }

    /// `sdeg` of the total complex, as an interval.
    pub fn sdeg(&self) -> Interval {
        let (_, cmax, _, pmax, _, _) = self.bounds();
        Interval { lo: cmax, hi: cmax.max(pmax) }
    }

    /// Cells attaining the observed `ideg` and `sdeg`.
    pub fn witnesses(&self) -> (Option<(usize, i64)>, Option<(usize, i64)>) {
        let (_, _, _, _, a, b) = self.bounds();
        (a, b)
    }

    /// Whether row `m` is certified to vanish entirely.
    pub fn row_zero(&self, m: usize) -> bool {
        if m >= self.rows() {
            return self.beyond.is_none();
        }
        !self.above_open[m]
            && !self.below_open[m]
            && (self.j_lo..=self.j_hi).all(|j| self.get(m, j) == Cell::Known(0) || !self.cell_open(m, j))
    }

    /// Whether row `m` has a certified nonzero cell.
    pub fn row_nonzero(&self, m: usize) -> bool {
        m < self.rows() && (self.j_lo..=self.j_hi).any(|j| matches!(self.get(m, j), Cell::Known(v) if v > 0))
    }

    /// Smallest `m` with a nonzero row: the depth when `X = S`.
    pub fn first_nonzero_row(&self) -> Interval {
        for m in 0..self.rows() {
            if self.row_nonzero(m) {
                return Interval::int(m as i64);
            }
            if !self.row_zero(m) {
                return Interval::at_least(Ext::Fin(m as i64));
            }
        }
        if self.beyond.is_none() {
            Interval::exact(Ext::PosInf)
        } else {
            Interval::at_least(Ext::Fin(self.rows() as i64))
        }
    }

    /// Some row other than `skip` has a certified nonzero cell.
    pub fn nonzero_outside_row(&self, skip: usize) -> bool {
        (0..self.rows()).any(|m| m != skip && self.row_nonzero(m))
    }

    /// Certified-nonzero cells as `(m, j, dim)`.
    pub fn nonzero_cells(&self) -> Vec<(usize, i64, usize)> {
        let mut out = Vec::new();
        for m in 0..self.rows() {
            for j in self.j_lo..=self.j_hi {
                if let Cell::Known(v) = self.get(m, j) {
                    if v > 0 {
                        out.push((m, j, v));
                    }
                }
            }
        }
        out
    }

    /// Restriction to rows `≤ rows - 1` and columns in `[lo, hi]`.
    pub fn window(&self, rows: usize, lo: i64, hi: i64) -> Vec<Vec<Cell>> {
        (0..rows).map(|m| (lo..=hi).map(|j| if m < self.rows() { self.get(m, j) } else { Cell::Unknown }).collect()).collect()
    }

    pub fn to_json(&self) -> Value {
        let cells: Vec<Value> = (0..self.rows())
            .flat_map(|m| {
                (self.j_lo..=self.j_hi).filter_map(move |j| match self.get(m, j) {
                    Cell::Known(0) => None,
                    Cell::Known(v) => Some(json!({"m": m, "j": j, "dim": v})),
                    Cell::Unknown => Some(json!({"m": m, "j": j, "dim": null})),
                })
            })
            .collect();
        json!({
            "kind": match self.kind { TableKind::Ext => "ext", TableKind::Tor => "tor" },
            "rows": self.rows(),
            "window": [self.j_lo, self.j_hi],
            "cells": cells,
            "ideg": ExtendedDegree::from_interval(self.ideg()).to_json(),
            "sdeg": ExtendedDegree::from_interval(self.sdeg()).to_json(),
        })
    }
}

/// Options for [`ext_table`].
#[derive(Clone, Debug, Default)]
pub struct ExtOptions {
    /// Certified injective dimension of `Y`: rows above it vanish.
    pub injdim: Option<usize>,
    /// Restrict the columns to this window instead of the automatic one.
    pub columns: Option<(i64, i64)>,
    /// Number of top zero cells required before a row of an infinite `Y` is trusted to stay zero.
    pub margin: i64,
}

/// Position of each basis vector of `Y_d` within its `e_v`-block.
struct LabelIndex {
    cache: HashMap<i64, Arc<(Vec<usize>, Vec<usize>)>>,
}

impl LabelIndex {
    fn new() -> Self {
        LabelIndex { cache: HashMap::new() }
    }

    /// `(rank within block, block size per vertex)` for degree `d`.
    fn get<F: Field>(&mut self, y: &GradedModule<F>, d: i64, nv: usize) -> Arc<(Vec<usize>, Vec<usize>)> {
        self.cache
            .entry(d)
            .or_insert_with(|| {
                let mut counts = vec![0; nv];
                let ranks = y
                    .labels(d)
                    .iter()
                    .map(|&l| {
                        counts[l] += 1;
                        counts[l] - 1
                    })
                    .collect();
                Arc::new((ranks, counts))
            })
            .clone()
    }
}

fn sorted_sparse<F: Field>(f: &F, acc: BTreeMap<usize, F::Elem>) -> SparseVec<F> {
    acc.into_iter().filter(|(_, v)| !f.is_zero(v)).collect()
}

fn check_same_algebra<F: Field>(res: &Resolution<F>, y: &GradedModule<F>, opposite: bool) -> Result<()> {
    let (a, b) = (res.algebra(), y.algebra());
    let same = (0..=a.top().min(b.top())).all(|d| a.dim(d) == b.dim(d)) && a.num_vertices() == b.num_vertices();
    let sides = if opposite { "opposite algebra" } else { "same algebra" };
    if !same {
        return Err(Error::BadInput(format!("the coefficient module must be over the {sides}")));
    }
    Ok(())
}

/// `gExt^m(X, Y)_j` for `m ≤ H` from a minimal resolution of `X`.
pub fn ext_table<F: Field>(res: &Resolution<F>, y: &GradedModule<F>, opts: &ExtOptions) -> Result<GradedTable> {
    check_same_algebra(res, y, false)?;
    let alg = res.algebra();
    let f = alg.field();
    let nv = alg.num_vertices();
    let h = res.h();
    let nsteps = res.len();
    let n_res = res.n();
    let yt = y.certified_top();
    let y_top = yt.unwrap_or(y.hi());
    let all_degrees: Vec<i64> = (0..nsteps).flat_map(|m| res.generators(m).iter().map(|g| g.degree)).collect();
    let empty_x = res.terminated_at() == Some(0);
    if empty_x || y.is_zero() || all_degrees.is_empty() {
        let rows = h + 1;
        let zero_everywhere = empty_x || y.is_zero();
        return Ok(GradedTable {
            kind: TableKind::Ext,
            j_lo: 0,
            j_hi: -1,
            cells: vec![Vec::new(); rows],
            above_open: vec![!zero_everywhere; rows],
            below_open: vec![!zero_everywhere; rows],
            trusted_top: vec![None; rows],
            beyond: (!zero_everywhere).then_some((Ext::NegInf, Ext::PosInf)),
            outside: None,
        });
    }
    let umax = *all_degrees.iter().max().unwrap();
    let lmin = *all_degrees.iter().min().unwrap();
    let (j_lo, j_hi) = opts.columns.unwrap_or((y.lo() - umax, y_top - lmin));

    // Reverse index: for generator k of P_m, the terms of d(g') mentioning k.
    let mut rev: Vec<Vec<Vec<(usize, usize)>>> = Vec::with_capacity(nsteps);
    for m in 0..nsteps {
        let mut r = vec![Vec::new(); res.generators(m).len()];
        if m + 1 < nsteps {
            for gp in 0..res.generators(m + 1).len() {
                for (ti, t) in res.terms(m + 1, gp).iter().enumerate() {
                    r[t.gen].push((gp, ti));
                }
            }
        }
        rev.push(r);
    }
    let complete: Vec<bool> = (0..nsteps).map(|m| res.complete(m)).collect();
    let mut index = LabelIndex::new();

    let chain_known = |m: usize, j: i64| -> bool {
        let gens_ok = complete[m] || yt.is_some_and(|t| n_res + 1 + j > t);
        gens_ok && res.generators(m).iter().all(|g| y.known(g.degree + j))
    };

    let mut cells = vec![Vec::with_capacity((j_hi - j_lo + 1).max(0) as usize); h + 1];
    for j in j_lo..=j_hi {
        let ck: Vec<bool> = (0..nsteps).map(|m| chain_known(m, j)).collect();
        let mut offsets: Vec<Vec<usize>> = Vec::with_capacity(nsteps);
        let mut dims = Vec::with_capacity(nsteps);
        for m in 0..nsteps {
            let mut off = Vec::with_capacity(res.generators(m).len());
            let mut total = 0;
            if ck[m] {
                for g in res.generators(m) {
                    off.push(total);
                    total += index.get(y, g.degree + j, nv).1[g.vertex];
                }
            }
            offsets.push(off);
            dims.push(total);
        }
        // rank[m] = rank of δ^m: C^m → C^{m+1}.
        let mut rank = vec![0usize; nsteps];
        for m in 0..nsteps - 1 {
            if !(ck[m] && ck[m + 1]) || dims[m] == 0 || dims[m + 1] == 0 {
                continue;
            }
            let mut rows = Vec::with_capacity(dims[m]);
            for (k, g) in res.generators(m).iter().enumerate() {
                let d = g.degree + j;
                let idx = index.get(y, d, nv);
                let labels = y.labels(d).to_vec();
                for (yi, &l) in labels.iter().enumerate() {
                    if l != g.vertex {
                        continue;
                    }
                    let _ = idx.0[yi];
                    let mut acc: BTreeMap<usize, F::Elem> = BTreeMap::new();
                    for &(gp, ti) in &rev[m][k] {
                        let t = &res.terms(m + 1, gp)[ti];
                        let gpd = res.generators(m + 1)[gp].degree + j;
                        let block = y.action(t.p, d);
                        let tidx = index.get(y, gpd, nv);
                        for (z, c) in &block[t.a][yi] {
                            let col = offsets[m + 1][gp] + tidx.0[*z];
                            let v = f.mul(&t.coef, c);
                            let e = acc.entry(col).or_insert_with(|| f.zero());
                            *e = f.add(e, &v);
                        }
                    }
                    rows.push(sorted_sparse(f, acc));
                }
            }
            rank[m] = sparse_rank(f, dims[m + 1], rows);
        }
        for (m, row) in cells.iter_mut().enumerate() {
            let exact = ck[m] && (dims[m] == 0 || ((m == 0 || ck[m - 1]) && ck[m + 1]));
            row.push(if exact {
                Cell::Known(dims[m] - rank[m] - if m > 0 { rank[m - 1] } else { 0 })
            } else {
                Cell::Unknown
            });
        }
    }

    let mut table = GradedTable {
        kind: TableKind::Ext,
        j_lo,
        j_hi,
        cells,
        above_open: vec![false; h + 1],
        below_open: vec![false; h + 1],
        trusted_top: vec![None; h + 1],
        beyond: None,
        outside: None,
    };
    let zero_rows_from = match (res.terminated_at(), opts.injdim) {
        (Some(t), Some(d)) => Some(t.min(d + 1)),
        (Some(t), None) => Some(t),
        (None, Some(d)) => Some(d + 1),
        (None, None) => None,
    };
    let mut out_lo = Ext::PosInf;
    let mut out_hi = Ext::NegInf;
    for m in 0..=h {
        if zero_rows_from.is_some_and(|z| m >= z) {
            table.trusted_top[m] = Some(j_lo - 1);
            continue;
        }
        let gens = res.generators(m);
        if !complete[m] {
            // Unseen generators above N may meet Y in arbitrarily low degrees.
            table.below_open[m] = true;
            out_lo = Ext::NegInf;
        } else if let Some(u) = gens.iter().map(|g| g.degree).max() {
            if j_lo > y.lo() - u {
                table.below_open[m] = true;
                out_lo = out_lo.min(Ext::NegInf);
            }
        }
        let row_top = match gens.iter().map(|g| g.degree).min() {
            Some(l) => y_top - l,
            None => j_lo - 1,
        };
        if yt.is_some() && row_top <= j_hi {
            continue;
        }
        if yt.is_some() {
            // Window cut below the finite top of Y.
            table.above_open[m] = true;
            out_lo = out_lo.min(Ext::Fin(m as i64 + j_hi + 1));
            out_hi = out_hi.max(Ext::Fin(m as i64 + row_top));
            continue;
        }
        let last_known = (j_lo..=j_hi).rev().find(|&j| table.get(m, j) != Cell::Unknown);
        let trusted = last_known.is_some_and(|top| {
            opts.margin > 0
                && top - opts.margin + 1 >= j_lo
                && (top - opts.margin + 1..=top).all(|j| table.get(m, j) == Cell::Known(0))
        });
        if trusted {
            table.trusted_top[m] = last_known;
        } else {
            table.above_open[m] = true;
            out_lo = out_lo.min(Ext::Fin(m as i64 + j_hi + 1));
            out_hi = Ext::PosInf;
        }
    }
    if out_lo != Ext::PosInf || out_hi != Ext::NegInf {
        table.outside = Some((out_lo, out_hi.max(out_lo)));
    }
    let rows_beyond_zero = zero_rows_from.is_some_and(|z| z <= h + 1);
    if !rows_beyond_zero {
        let ss = alg.a0_structure().map(|a| a.semisimple).unwrap_or(false);
        let hi = match (ss, yt) {
            (true, Some(t)) => {
                // Lowest generator degrees grow at least linearly beyond step H+1.
                let l = res.generators(h + 1).iter().map(|g| g.degree).min().unwrap_or(n_res + 1);
                Ext::Fin(t - l + h as i64 + 1)
            }
            _ => Ext::PosInf,
        };
        table.beyond = Some((Ext::NegInf, hi));
    }
    Ok(table)
}

/// `Tor_m(Y, X)_j` for `m ≤ H`; `Y` is a left module over the opposite algebra.
pub fn tor_table<F: Field>(res: &Resolution<F>, y: &GradedModule<F>) -> Result<GradedTable> {
    check_same_algebra(res, y, true)?;
    let alg = res.algebra();
    let f = alg.field();
    let nv = alg.num_vertices();
    let h = res.h();
    let nsteps = res.len();
    let n_res = res.n();
    let yt = y.certified_top();
    let y_top = yt.unwrap_or(y.hi());
    let all_degrees: Vec<i64> = (0..nsteps).flat_map(|m| res.generators(m).iter().map(|g| g.degree)).collect();
    if res.terminated_at() == Some(0) || y.is_zero() {
        return Ok(GradedTable {
            kind: TableKind::Tor,
            j_lo: 0,
            j_hi: -1,
            cells: vec![Vec::new(); h + 1],
            above_open: vec![false; h + 1],
            below_open: vec![false; h + 1],
            trusted_top: vec![Some(-1); h + 1],
            beyond: None,
            outside: None,
        });
    }
    let lmin = all_degrees.iter().copied().min().unwrap_or(n_res + 1);
    let umax = all_degrees.iter().copied().max().unwrap_or(n_res + 1);
    let j_lo = lmin + y.lo();
    let j_hi = (umax + y_top).min(n_res + y.lo().max(y_top));

    let complete: Vec<bool> = (0..nsteps).map(|m| res.complete(m)).collect();
    let mut index = LabelIndex::new();
    let chain_known = |m: usize, j: i64| -> bool {
        let gens_ok = complete[m] || j - y.lo() <= n_res;
        gens_ok && res.generators(m).iter().all(|g| y.known(j - g.degree))
    };
    let mut cells = vec![Vec::new(); h + 1];
    for j in j_lo..=j_hi {
        let ck: Vec<bool> = (0..nsteps).map(|m| chain_known(m, j)).collect();
        let mut offsets: Vec<Vec<usize>> = Vec::with_capacity(nsteps);
        let mut dims = Vec::with_capacity(nsteps);
        for m in 0..nsteps {
            let mut off = Vec::new();
            let mut total = 0;
            if ck[m] {
                for g in res.generators(m) {
                    off.push(total);
                    total += index.get(y, j - g.degree, nv).1[g.vertex];
                }
            }
            offsets.push(off);
            dims.push(total);
        }
        // rank[m] = rank of ∂_m: C_m → C_{m-1}, m ≥ 1.
        let mut rank = vec![0usize; nsteps];
        for m in 1..nsteps {
            if !(ck[m] && ck[m - 1]) || dims[m] == 0 || dims[m - 1] == 0 {
                continue;
            }
            let mut rows = Vec::with_capacity(dims[m]);
            for (gp, g) in res.generators(m).iter().enumerate() {
                let d = j - g.degree;
                let labels = y.labels(d).to_vec();
                for (yi, &l) in labels.iter().enumerate() {
                    if l != g.vertex {
                        continue;
                    }
                    let mut acc: BTreeMap<usize, F::Elem> = BTreeMap::new();
                    for t in res.terms(m, gp) {
                        let k = t.gen;
                        let dk = j - res.generators(m - 1)[k].degree;
                        let block = y.action(t.p, d);
                        let tidx = index.get(y, dk, nv);
                        for (z, c) in &block[t.a][yi] {
                            let col = offsets[m - 1][k] + tidx.0[*z];
                            let v = f.mul(&t.coef, c);
                            let e = acc.entry(col).or_insert_with(|| f.zero());
                            *e = f.add(e, &v);
                        }
                    }
                    rows.push(sorted_sparse(f, acc));
                }
            }
            rank[m] = sparse_rank(f, dims[m - 1], rows);
        }
        for (m, row) in cells.iter_mut().enumerate() {
            let exact = ck[m] && (dims[m] == 0 || (ck[m + 1] && (m == 0 || ck[m - 1])));
            row.push(if exact { Cell::Known(dims[m] - rank[m] - rank[m + 1]) } else { Cell::Unknown });
        }
    }
    let mut table = GradedTable {
        kind: TableKind::Tor,
        j_lo,
        j_hi,
        cells,
        above_open: vec![false; h + 1],
        below_open: vec![false; h + 1],
        trusted_top: vec![None; h + 1],
        beyond: None,
        outside: None,
    };
    let term = res.terminated_at();
    let mut out_lo = Ext::PosInf;
    let mut out_hi = Ext::NegInf;
    for m in 0..=h {
        if term.is_some_and(|t| m >= t) {
            table.trusted_top[m] = Some(j_lo - 1);
            continue;
        }
        let bounded = complete[m] && yt.is_some();
        if !bounded {
            table.above_open[m] = true;
            let first = if complete[m] { j_hi + 1 } else { (j_hi + 1).min(n_res + 1 + y.lo()) };
            out_lo = out_lo.min(Ext::Fin(first - m as i64));
            out_hi = Ext::PosInf;
        }
    }
    if out_lo != Ext::PosInf {
        table.outside = Some((out_lo, out_hi));
    }
    if !term.is_some_and(|t| t <= h + 1) {
        let ss = alg.a0_structure().map(|a| a.semisimple).unwrap_or(false);
        let lo = if ss {
            let l = res.generators(h + 1).iter().map(|g| g.degree).min().unwrap_or(n_res + 1);
            Ext::Fin(l - (h as i64 + 1) + y.lo())
        } else {
            Ext::NegInf
        };
        table.beyond = Some((lo, Ext::PosInf));
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgebraRef, TruncatedAlgebra};
    use crate::catalog;
    use crate::gmod::{FreeModule, Summand};
    use crate::resolve::minimal_resolution;
    use crate::scalar::{FieldSpec, Fp};

    fn alg(name: &str, top: usize) -> AlgebraRef<Fp> {
        let pres = catalog::presentation(name, FieldSpec::DEFAULT).unwrap();
        Arc::new(TruncatedAlgebra::build(&Fp::new(32003).unwrap(), &pres, top, 100_000).unwrap())
    }

    fn opts() -> ExtOptions {
        ExtOptions { margin: 3, ..Default::default() }
    }

    #[test]
    fn hom_from_k_into_dual_numbers() {
        let a = alg("dualnum", 10);
        let k = Arc::new(GradedModule::simple(&a, None).unwrap());
        let res = minimal_resolution(&k, 6, 10).unwrap();
        let y = GradedModule::regular(&a, 10).unwrap();
        let t = ext_table(&res, &y, &ExtOptions { injdim: Some(0), ..opts() }).unwrap();
        assert_eq!(t.nonzero_cells(), vec![(0, 1, 1)]);
        // gExt^0(k, A) = k(-1), so -ideg = -1.
        assert_eq!(t.ideg(), Interval::int(1));
        assert_eq!(t.sdeg(), Interval::int(1));
        let bare = ext_table(&res, &y, &opts()).unwrap();
        assert!(!bare.ideg().is_exact());
    }

    #[test]
    fn ext_from_k_into_polynomial_ring() {
        let a = alg("poly1", 10);
        let k = Arc::new(GradedModule::simple(&a, None).unwrap());
        let res = minimal_resolution(&k, 4, 10).unwrap();
        let y = GradedModule::regular(&a, 10).unwrap();
        let t = ext_table(&res, &y, &opts()).unwrap();
        assert_eq!(t.nonzero_cells(), vec![(1, -1, 1)]);
        assert_eq!(t.ideg(), Interval::int(0));
        assert_eq!(t.sdeg(), Interval::int(0));
        assert_eq!(t.first_nonzero_row(), Interval::int(1));
    }

    #[test]
    fn ext_from_free_module_is_hom() {
        let a = alg("poly2", 8);
        let x = Arc::new(GradedModule::regular(&a, 8).unwrap());
        let res = minimal_resolution(&x, 3, 8).unwrap();
        let y = GradedModule::simple(&a, None).unwrap().shift(-2);
        let t = ext_table(&res, &y, &opts()).unwrap();
        assert_eq!(t.nonzero_cells(), vec![(0, 2, 1)]);
        assert_eq!((t.ideg(), t.sdeg()), (Interval::int(2), Interval::int(2)));
    }

    #[test]
    fn ext_into_simple_matches_betti() {
        let a = alg("dualnum", 12);
        let k = Arc::new(GradedModule::simple(&a, None).unwrap());
        let res = minimal_resolution(&k, 8, 12).unwrap();
        let t = ext_table(&res, &k, &opts()).unwrap();
        for m in 0..=8 {
            assert_eq!(t.get(m, -(m as i64)), Cell::Known(1));
        }
        // sdeg = extreg is certified through the semisimple tail bound, ideg is not.
        assert_eq!(t.sdeg(), Interval::int(0));
        assert_eq!(t.ideg(), Interval { lo: Ext::NegInf, hi: Ext::Fin(0) });
    }

    #[test]
    fn tor_tables() {
        let a = alg("poly1", 10);
        let opp = Arc::new(a.opposite());
        let k = Arc::new(GradedModule::simple(&a, None).unwrap());
        let res = minimal_resolution(&k, 4, 10).unwrap();
        let ko = GradedModule::simple(&opp, None).unwrap();
        let t = tor_table(&res, &ko).unwrap();
        assert_eq!(t.nonzero_cells(), vec![(0, 0, 1), (1, 1, 1)]);
        assert_eq!(t.ideg(), Interval::int(0));
        let ao = GradedModule::regular(&opp, 10).unwrap();
        let t2 = tor_table(&res, &ao).unwrap();
        assert_eq!(t2.nonzero_cells(), vec![(0, 0, 1)]);

        let d = alg("dualnum", 12);
        let dopp = Arc::new(d.opposite());
        let kd = Arc::new(GradedModule::simple(&d, None).unwrap());
        let rd = minimal_resolution(&kd, 6, 12).unwrap();
        let td = tor_table(&rd, &GradedModule::simple(&dopp, None).unwrap()).unwrap();
        for m in 0..=6 {
            assert_eq!(td.get(m, m as i64), Cell::Known(1));
        }
        assert_eq!(td.ideg(), Interval::int(0));
    }

    #[test]
    fn tor_of_free_right_module_is_the_module() {
        let a = alg("qplane", 8);
        let opp = Arc::new(a.opposite());
        let f = FreeModule::new(vec![Summand { vertex: 0, shift: 0 }]);
        let x = Arc::new(GradedModule::free(&a, f, 8).unwrap().truncate_below(2));
        let res = minimal_resolution(&x, 3, 8).unwrap();
        let t = tor_table(&res, &GradedModule::regular(&opp, 8).unwrap()).unwrap();
        for j in 2..=6 {
            assert_eq!(t.get(0, j), Cell::Known(j as usize + 1));
        }
        assert!((1..=3).all(|m| t.row_zero(m) || (t.j_lo..=t.j_hi).all(|j| t.get(m, j) != Cell::Known(1))));
    }
}
