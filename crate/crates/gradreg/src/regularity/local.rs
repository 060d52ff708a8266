//! `CMreg` and `cmreg` from local cohomology, either as a limit of
//! `gExt(A/A_{≥n}, M)` or through local duality with AS-Gorenstein data.

use std::sync::Arc;

use serde_json::{json, Value};

use super::tables::{ext_table, Cell, ExtOptions, GradedTable};
use super::{RegContext, RegValue, Status};
use crate::error::{Error, Result};
use crate::gmod::{Ext, GradedModule, Interval};
use crate::resolve::{minimal_resolution_with_margin, Resolution};
use crate::scalar::Field;

/// Result of a local-cohomology computation.
#[derive(Clone, Debug, PartialEq)]
pub struct CmOutcome {
    pub big: RegValue,
    pub small: RegValue,
    /// `n` with `T_n = T_{n+1}` for the limit strategy.
    pub stabilized_at: Option<usize>,
    /// Nonzero `(i, j, dim H^i(M)_j)` inside the window, when known.
    pub cells: Option<Vec<(usize, i64, usize)>>,
    /// How the reported values were certified.
    pub basis: Vec<String>,
}

impl CmOutcome {
    fn degenerate() -> Self {
        CmOutcome {
            big: RegValue::degenerate(Ext::NegInf),
            small: RegValue::degenerate(Ext::NegInf),
            stabilized_at: None,
            cells: Some(Vec::new()),
            basis: vec!["zero module".into()],
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "stabilizedAt": self.stabilized_at,
            "cells": self.cells.as_ref().map(|c| c.iter().map(|(i, j, d)| json!([i, j, d])).collect::<Vec<_>>()),
            "basis": self.basis,
        })
    }

    /// Replaces inconclusive values by `sdeg M` and `-ideg M` when `M` is finite-dimensional.
    fn torsion_fallback<F: Field>(&mut self, m: &GradedModule<F>) {
        if !m.is_finite_dimensional() || (self.big.is_exact() && self.small.is_exact()) {
            return;
        }
        let (ideg, sdeg) = m.degree_bounds();
        if !self.big.is_exact() && sdeg.is_exact() {
            self.big = RegValue::exact(sdeg, None);
            self.basis.push("CMreg = sdeg M for finite-dimensional M".into());
        }
        if !self.small.is_exact() && ideg.is_exact() {
            self.small = RegValue::exact(ideg.neg(), None);
            self.basis.push("cmreg = -ideg M for finite-dimensional M".into());
        }
    }
}

/// `CMreg` and `cmreg` from `lim_n gExt^i(A/A_{≥n}, M)` on the configured window.
pub fn cm_limit<F: Field>(ctx: &RegContext<F>, m: &Arc<GradedModule<F>>) -> Result<CmOutcome> {
    if m.is_zero() {
        return Ok(CmOutcome::degenerate());
    }
    let b = ctx.bounds();
    let (wlo, whi) = b.window;
    let i_max = ctx.i_max();
    let a = ctx.regular()?;
    let mut prev: Option<Vec<Vec<Cell>>> = None;
    let mut found = None;
    for n in 1..=b.n_max {
        let q = Arc::new(a.truncate_above(n as i64 - 1)?);
        let res = minimal_resolution_with_margin(&q, i_max, n as i64 + i_max as i64 + 2 + b.margin, b.margin)?;
        let t = ext_table(&res, m, &ExtOptions { columns: Some((wlo, whi)), margin: b.margin, injdim: None })?;
        let w = t.window(i_max + 1, wlo, whi);
        let complete = w.iter().flatten().all(|c| *c != Cell::Unknown);
        if complete && prev.as_ref() == Some(&w) {
            found = Some((n - 1, w));
            break;
        }
        prev = complete.then_some(w);
    }
    let mut out = match found {
        Some((n, w)) => read_limit(ctx, &w, n),
        None => CmOutcome {
            big: RegValue::censored(Interval::unknown(), None),
            small: RegValue::censored(Interval::unknown(), None),
            stabilized_at: None,
            cells: None,
            basis: vec![format!("no stabilization for n ≤ {}", b.n_max)],
        },
    };
    out.torsion_fallback(m);
    Ok(out)
}

fn read_limit<F: Field>(ctx: &RegContext<F>, w: &[Vec<Cell>], n: usize) -> CmOutcome {
    let b = ctx.bounds();
    let (wlo, whi) = b.window;
    let margin = b.margin.max(1);
    let cells: Vec<(usize, i64, usize)> = w
        .iter()
        .enumerate()
        .flat_map(|(i, row)| {
            row.iter().enumerate().filter_map(move |(k, c)| match c {
                Cell::Known(v) if *v > 0 => Some((i, wlo + k as i64, *v)),
                _ => None,
            })
        })
        .collect();
    let mut basis = vec![format!("stabilized at n = {n}")];
    let column_zero = |j: i64| w.iter().all(|row| row[(j - wlo) as usize] == Cell::Known(0));
    let wide = whi - wlo + 1 > 2 * margin;
    let top_clear = wide && (whi - margin + 1..=whi).all(column_zero);
    let bottom_clear = wide && (wlo..wlo + margin).all(column_zero);
    let rows_bounded = ctx.cohomological_dimension().is_some();
    let totals = cells.iter().map(|&(i, j, _)| i as i64 + j);
    let (lo, hi) = (totals.clone().min(), totals.max());
    let pick = |t: i64| cells.iter().find(|&&(i, j, _)| i as i64 + j == t).map(|&(i, j, _)| (i as i64, j));
    let (big, small) = match (lo, hi) {
        (Some(lo), Some(hi)) => {
            let big = if top_clear && rows_bounded {
                basis.push(format!("top {margin} columns vanish and rows above {} vanish", ctx.i_max()));
                RegValue::exact(Interval::int(hi), pick(hi))
            } else {
                RegValue::censored(Interval::at_least(Ext::Fin(hi)), pick(hi))
            };
            let small = if bottom_clear && rows_bounded {
                basis.push(format!("bottom {margin} columns vanish"));
                RegValue::exact(Interval::int(-lo), pick(lo))
            } else if ctx.infinite_dim_certifies_cmreg() && cells.iter().any(|&(i, _, _)| i >= 1) {
                basis.push("higher local cohomology is nonzero, so M is infinite-dimensional and cmreg = +inf".into());
                RegValue::exact(Interval::exact(Ext::PosInf), None)
            } else {
                RegValue::censored(Interval::at_least(Ext::Fin(-lo)), pick(lo))
            };
            (big, small)
        }
        _ => (RegValue::censored(Interval::unknown(), None), RegValue::censored(Interval::unknown(), None)),
    };
    CmOutcome { big, small, stabilized_at: Some(n), cells: Some(cells), basis }
}

/// `CMreg` and `cmreg` via `D(RΓ(M)) ≅ RgHom(M, R)` with `R = ⊕ Ae_{σ(i)}(-ℓ_i)[d]`.
pub fn cm_duality<F: Field>(ctx: &RegContext<F>, res: &Resolution<F>) -> Result<CmOutcome> {
    let m = res.module();
    if m.is_zero() {
        return Ok(CmOutcome::degenerate());
    }
    let g = ctx
        .gorenstein()
        .ok_or_else(|| Error::MissingGorensteinData("the duality strategy needs AS-Gorenstein data".into()))?;
    let d = g.dim as i64;
    let injdim = g.is_verified().then_some(g.dim);
    let margin = ctx.bounds().margin;
    let mut big = Interval::exact(Ext::NegInf);
    let mut small = Interval::exact(Ext::NegInf);
    let mut big_w = None;
    let mut small_w = None;
    let mut off_row = false;
    let mut cells = Vec::new();
    for i in 0..g.sigma.len() {
        let y = ctx.projective(g.sigma[i])?;
        let t: GradedTable = ext_table(res, &y, &ExtOptions { injdim, margin, columns: None })?;
        let (wi, ws) = t.witnesses();
        let local = |(m, j): (usize, i64)| (d - m as i64, -j - g.ell[i]);
        let bi = t.ideg().neg().add_int(d - g.ell[i]);
        if bi.lo > big.lo || big_w.is_none() {
            big_w = wi.map(local);
        }
        big = big.max(bi);
        let si = t.sdeg().add_int(g.ell[i] - d);
        if si.lo > small.lo || small_w.is_none() {
            small_w = ws.map(local);
        }
        small = small.max(si);
        off_row |= t.nonzero_outside_row(g.dim);
        for (mm, j, v) in t.nonzero_cells() {
            let (a, b) = local((mm, j));
            if a >= 0 {
                cells.push((a as usize, b, v));
            }
        }
    }
    cells.sort();
    let mut basis = vec![format!("local duality with d = {d}, status {}", g.status.name())];
    let small_v = if !small.is_exact() && off_row && g.is_verified() && ctx.infinite_dim_certifies_cmreg() {
        basis.push("gExt^i(M, A) ≠ 0 for some i ≠ d, so M is infinite-dimensional and cmreg = +inf".into());
        RegValue::exact(Interval::exact(Ext::PosInf), None)
    } else {
        RegValue::from_interval(small, small_w)
    };
    let mut out = CmOutcome {
        big: RegValue::from_interval(big, big_w),
        small: small_v,
        stabilized_at: None,
        cells: Some(cells),
        basis,
    };
    out.torsion_fallback(m);
    Ok(out)
}

impl RegValue {
    fn censored(value: Interval, witness: Option<(i64, i64)>) -> Self {
        RegValue { value, status: Status::Censored, witness }
    }
}
