//! Minimal graded free resolutions, Betti tables, minimality and linearity.
//!
//! Generators are chosen degree by degree: at internal degree `t`, step `m`
//! adds a canonical complement of `A_{≥1}·(older generators) + J_0·Z` inside the
//! syzygy `Z = ker(d_{m-1})_t`, split by idempotent blocks.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::algebra::{AlgebraRef, TruncatedAlgebra};
use crate::error::{Error, Result};
use crate::gmod::{Ext, FreeModule, GradedModule, Interval, Summand};
use crate::scalar::{rref_rows, Field, Subspace};

/// Number of top internal degrees that must be free of new generators before a
/// step's generator list is trusted to be complete.
pub const DEFAULT_MARGIN: i64 = 3;

/// One free generator `A e_vertex(-degree)` and its image under the differential.
#[derive(Clone, Debug)]
pub struct Generator<F: Field> {
    pub vertex: usize,
    pub degree: i64,
    /// Dense image: in `M_degree` for step 0, else in `(P_{m-1})_degree`.
    pub image: Vec<F::Elem>,
}

/// A term `coef · a · g_k` of a differential, `a` a basis element of `A_p`.
#[derive(Clone, Debug)]
pub struct Term<F: Field> {
    pub gen: usize,
    pub p: usize,
    pub a: usize,
    pub coef: F::Elem,
}

/// A minimal free resolution truncated at homological step `H + 1` and internal degree `N`.
#[derive(Clone, Debug)]
pub struct Resolution<F: Field> {
    alg: AlgebraRef<F>,
    module: Arc<GradedModule<F>>,
    h: usize,
    n: i64,
    margin: i64,
    /// `steps[m]` for `m = 0..=H+1`.
    steps: Vec<Vec<Generator<F>>>,
    free: Vec<FreeModule>,
    /// `terms[m][g]`: `d(g)` for generator `g` of `P_m`, `m ≥ 1`.
    terms: Vec<Vec<Vec<Term<F>>>>,
}

/// `β(m, s, i)` with derived `u_m`, `ℓ_m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiTable {
    pub entries: BTreeMap<(usize, i64, usize), usize>,
    pub h: usize,
    /// `u[m]`: largest generator degree of `P_m` seen, `None` if `P_m` has none.
    pub u: Vec<Option<i64>>,
    pub l: Vec<Option<i64>>,
    pub terminated: bool,
}

/// Result of a linearity test: `exact` is false when the pattern only holds so far.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Linearity {
    pub linear: bool,
    pub exact: bool,
}

impl<F: Field> Resolution<F> {
    pub fn algebra(&self) -> &AlgebraRef<F> {
        &self.alg
    }

    pub fn module(&self) -> &Arc<GradedModule<F>> {
        &self.module
    }

    pub fn h(&self) -> usize {
        self.h
    }

    /// Internal degree through which every step is computed.
    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn margin(&self) -> i64 {
        self.margin
    }

    /// Number of computed steps (`H + 2`).
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.iter().all(Vec::is_empty)
    }

    pub fn generators(&self, m: usize) -> &[Generator<F>] {
        &self.steps[m]
    }

    pub fn free(&self, m: usize) -> &FreeModule {
        &self.free[m]
    }

    /// Terms of `d(g)` for generator `g` of `P_m`, `m ≥ 1`.
    pub fn terms(&self, m: usize, g: usize) -> &[Term<F>] {
        &self.terms[m][g]
    }

    /// Whether the generator list of `P_m` is trusted to be complete beyond the window.
    pub fn complete(&self, m: usize) -> bool {
        if m >= self.steps.len() {
            return false;
        }
        let band_free = self.steps[m].iter().all(|g| g.degree <= self.n - self.margin);
        let here = if m == 0 {
            self.module.gen_top().is_some_and(|g| g <= self.n) || band_free
        } else {
            band_free
        };
        here && (m == 0 || self.complete(m - 1))
    }

    /// First step `m` with `P_m = 0` (certified), i.e. `pdim + 1`.
    pub fn terminated_at(&self) -> Option<usize> {
        (0..self.steps.len()).find(|&m| self.steps[m].is_empty() && self.complete(m))
    }

    pub fn terminated(&self) -> bool {
        self.terminated_at().is_some()
    }

    /// Projective dimension: exact when terminated, else a lower bound.
    pub fn pdim(&self) -> Interval {
        match self.terminated_at() {
            Some(0) => Interval::exact(Ext::NegInf),
            Some(m) => Interval::int(m as i64 - 1),
            None => {
                let last = (0..self.steps.len()).rev().find(|&m| !self.steps[m].is_empty()).unwrap_or(0);
                Interval::at_least(Ext::Fin(last as i64))
            }
        }
    }

    pub fn betti(&self) -> BettiTable {
        let mut entries = BTreeMap::new();
        let mut u = Vec::new();
        let mut l = Vec::new();
        for (m, gens) in self.steps.iter().enumerate().take(self.h + 1) {
            for g in gens {
                *entries.entry((m, g.degree, g.vertex)).or_insert(0) += 1;
            }
            u.push(gens.iter().map(|g| g.degree).max());
            l.push(gens.iter().map(|g| g.degree).min());
        }
        BettiTable { entries, h: self.h, u, l, terminated: self.terminated_at().is_some_and(|m| m <= self.h + 1) }
    }

    /// `(Torreg, torreg)` as intervals.
    pub fn torreg(&self) -> (Interval, Interval) {
        let term = self.terminated_at();
        let steps = term.unwrap_or(self.steps.len());
        let mut sup = Ext::NegInf;
        let mut inf = Ext::PosInf;
        for m in 0..steps {
            for g in &self.steps[m] {
                sup = sup.max(Ext::Fin(g.degree - m as i64));
                inf = inf.min(Ext::Fin(g.degree - m as i64));
            }
        }
        if term.is_some() {
            return (Interval::exact(sup), Interval::exact(inf.neg()));
        }
        let upper = match self.linear_tail_from() {
            Some(t) if self.complete(t) => Interval::exact(sup),
            _ => Interval::at_least(sup),
        };
        // With semisimple A_0 every generator of P_{m+1} lies strictly above the lowest of P_m,
        // so ℓ_m − m never decreases and the infimum is reached at step 0.
        let ss = self.alg.a0_structure().map(|a| a.semisimple).unwrap_or(false);
        let lower = if ss && self.complete(0) && !self.steps[0].is_empty() {
            Interval::exact(inf.neg())
        } else {
            Interval::at_least(inf.neg())
        };
        (upper, lower)
    }

    /// A step `t` such that every later step only repeats values of `deg - m`
    /// already seen: with `A_0` semisimple, `A` generated in degree 1 and
    /// `A_2 = 0`, each syzygy past `P_0` is semisimple, so the generators of
    /// `P_{m+1}` sit exactly one degree above those of `P_m` for `m ≥ 1`.
    pub fn linear_tail_from(&self) -> Option<usize> {
        let a = &self.alg;
        let ss = a.a0_structure().is_ok_and(|x| x.semisimple);
        (ss && a.gen_degree_bound() == 1 && a.top() >= 2 && a.dim(2) == 0).then_some(1)
    }

    /// Every differential lands in `J·P`.
    pub fn check_minimality(&self) -> bool {
        let alg = &self.alg;
        let f = alg.field();
        let radical = match alg.a0_structure() {
            Ok(a0) => Subspace::span(f, alg.dim(0), a0.radical.clone()),
            Err(_) => return false,
        };
        for m in 1..self.steps.len() {
            let target = &self.free[m - 1];
            for g in &self.steps[m] {
                let lay = target.layout(alg, g.degree);
                for (k, s) in target.summands.iter().enumerate() {
                    if s.shift != g.degree {
                        continue;
                    }
                    let mut a0 = vec![f.zero(); alg.dim(0)];
                    for (r, &a) in alg.with_target(0, s.vertex).iter().enumerate() {
                        a0[a] = g.image[lay.offsets[k] + r].clone();
                    }
                    if !radical.contains(f, &a0) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Matrix rows of `d_m` in degree `t`: images of the basis of `(P_m)_t`.
    pub fn differential_rows(&self, m: usize, t: i64) -> Vec<Vec<F::Elem>> {
        rows_of(&self.alg, &self.module, &self.free, &self.steps, m, t)
    }

    /// Checks `d_{m-1} ∘ d_m = 0` in every degree through `N` (with `d_{-1}` the augmentation).
    pub fn check_complex(&self) -> bool {
        let f = self.alg.field();
        for m in 1..self.steps.len() {
            for t in self.module.lo()..=self.n {
                let upper = self.differential_rows(m, t);
                let lower = self.differential_rows(m - 1, t);
                for row in &upper {
                    let width = if m == 1 { self.module.dim(t) } else { self.free[m - 2].dim(&self.alg, t) };
                    let mut acc = vec![f.zero(); width];
                    for (c, r) in row.iter().zip(&lower) {
                        if !f.is_zero(c) {
                            f.axpy(&mut acc, c, r);
                        }
                    }
                    if acc.iter().any(|x| !f.is_zero(x)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Checks exactness `ker d_{m-1} = im d_m` (and surjectivity onto `M`) through degree `N`.
    pub fn check_exact(&self) -> bool {
        let f = self.alg.field();
        for t in self.module.lo()..=self.n {
            let aug = self.differential_rows(0, t);
            if rref_rows(f, self.module.dim(t), aug).rank != self.module.dim(t) {
                return false;
            }
            for m in 1..self.steps.len() {
                let lower = self.differential_rows(m - 1, t);
                let dim_lower = lower.len();
                let width = if m == 1 { self.module.dim(t) } else { self.free[m - 2].dim(&self.alg, t) };
                let ker = left_kernel(f, &lower, width).len();
                let im = rref_rows(f, dim_lower, self.differential_rows(m, t)).rank;
                if ker != im {
                    return false;
                }
            }
        }
        true
    }

    /// Appends a split pair `A e_v(-s) → A e_v(-s)` between steps `m` and `m-1`.
    /// The result is a non-minimal resolution of the same module.
    pub fn with_trivial_pair(&self, m: usize, vertex: usize, degree: i64) -> Result<Self> {
        if m == 0 || m >= self.steps.len() {
            return Err(Error::BadInput("the pair must sit between two resolution steps".into()));
        }
        let alg = &self.alg;
        let f = alg.field();
        let mut out = self.clone();
        let summand = Summand { vertex, shift: degree };
        out.free[m - 1].summands.push(summand);
        let new_k = out.free[m - 1].rank() - 1;
        let zero_target = if m == 1 { self.module.dim(degree) } else { self.free[m - 2].dim(alg, degree) };
        out.steps[m - 1].push(Generator { vertex, degree, image: vec![f.zero(); zero_target] });
        // Images into P_{m-1} grow by the new summand's coordinates.
        for g in out.steps[m].iter_mut() {
            g.image.resize(out.free[m - 1].dim(alg, g.degree), f.zero());
        }
        let lay = out.free[m - 1].layout(alg, degree);
        let mut image = vec![f.zero(); lay.total];
        image[out.free[m - 1].position(alg, &lay, new_k, alg.idempotent(vertex))] = f.one();
        out.free[m].summands.push(summand);
        out.steps[m].push(Generator { vertex, degree, image });
        if m + 1 < out.steps.len() {
            for g in out.steps[m + 1].iter_mut() {
                g.image.resize(out.free[m].dim(alg, g.degree), f.zero());
            }
        }
        out.terms = build_terms(alg, &out.free, &out.steps);
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        let b = self.betti();
        let entries: Vec<Value> =
            b.entries.iter().map(|(&(m, s, i), &c)| json!({"step": m, "degree": s, "vertex": i, "count": c})).collect();
        json!({
            "H": self.h,
            "N": self.n,
            "terminated": self.terminated(),
            "pdim": crate::gmod::ExtendedDegree::from_interval(self.pdim()).to_json(),
            "minimal": self.check_minimality(),
            "betti": entries,
            "linear": { "value": b.is_linear().linear, "exact": b.is_linear().exact },
        })
    }
}

impl BettiTable {
    pub fn beta(&self, m: usize, s: i64) -> usize {
        self.entries.range((m, s, 0)..=(m, s, usize::MAX)).map(|(_, c)| c).sum()
    }

    /// `β(m, s, ·) = 0` whenever `s ≠ m`.
    pub fn is_linear(&self) -> Linearity {
        let linear = self.entries.keys().all(|&(m, s, _)| s == m as i64);
        Linearity { linear, exact: self.terminated || !linear }
    }
}

/// Solves `c · rows = 0`: a basis of the left kernel of a dense matrix.
pub fn left_kernel<F: Field>(f: &F, rows: &[Vec<F::Elem>], width: usize) -> Vec<Vec<F::Elem>> {
    let n = rows.len();
    if n == 0 {
        return Vec::new();
    }
    let transposed: Vec<Vec<F::Elem>> = (0..width).map(|c| rows.iter().map(|r| r[c].clone()).collect()).collect();
    rref_rows(f, n, transposed).kernel
}

fn rows_of<F: Field>(
    alg: &TruncatedAlgebra<F>,
    module: &GradedModule<F>,
    free: &[FreeModule],
    steps: &[Vec<Generator<F>>],
    m: usize,
    t: i64,
) -> Vec<Vec<F::Elem>> {
    let mut rows = Vec::new();
    let to = (m > 0).then(|| free[m - 1].layout(alg, t));
    for g in &steps[m] {
        let e = t - g.degree;
        if e < 0 || e as usize > alg.top() {
            continue;
        }
        let p = e as usize;
        let from = (m > 0).then(|| free[m - 1].layout(alg, g.degree));
        for &a in alg.with_target(p, g.vertex) {
            rows.push(match (&from, &to) {
                (Some(fl), Some(tl)) => free[m - 1].act_dense(alg, p, a, fl, tl, &g.image),
                _ => module.act(p, a, g.degree, &g.image),
            });
        }
    }
    rows
}

fn build_terms<F: Field>(alg: &TruncatedAlgebra<F>, free: &[FreeModule], steps: &[Vec<Generator<F>>]) -> Vec<Vec<Vec<Term<F>>>> {
    let f = alg.field();
    let mut out = vec![Vec::new()];
    for m in 1..steps.len() {
        let target = &free[m - 1];
        let mut per = Vec::with_capacity(steps[m].len());
        for g in &steps[m] {
            let lay = target.layout(alg, g.degree);
            let mut terms = Vec::new();
            for (pos, c) in g.image.iter().enumerate() {
                if f.is_zero(c) {
                    continue;
                }
                let (k, a) = target.locate(alg, &lay, pos);
                let p = (g.degree - target.summands[k].shift) as usize;
                terms.push(Term { gen: k, p, a, coef: c.clone() });
            }
            per.push(terms);
        }
        out.push(per);
    }
    out
}

/// Computes a minimal free resolution of `M` through step `H + 1` and internal degree
/// `min(N, M.hi, M.lo + top)`.
pub fn minimal_resolution<F: Field>(module: &Arc<GradedModule<F>>, h: usize, n: i64) -> Result<Resolution<F>> {
    minimal_resolution_with_margin(module, h, n, DEFAULT_MARGIN)
}

pub fn minimal_resolution_with_margin<F: Field>(
    module: &Arc<GradedModule<F>>,
    h: usize,
    n: i64,
    margin: i64,
) -> Result<Resolution<F>> {
    let alg = module.algebra().clone();
    let f = alg.field().clone();
    let a0 = alg.a0_structure()?;
    if !a0.basic {
        return Err(Error::NotBasic("minimal resolutions require a basic algebra".into()));
    }
    let lo = module.lo();
    let known_top = if module.certified_top().is_some() { i64::MAX } else { module.hi() };
    let n_res = n.min(known_top).min(lo + alg.top() as i64);
    if let Some(g) = module.gen_top() {
        if g > n && !module.is_zero() {
            return Err(Error::WindowTooSmall(format!("generator degree {g} exceeds the window top {n}")));
        }
    }
    let nsteps = h + 2;
    let mut steps: Vec<Vec<Generator<F>>> = vec![Vec::new(); nsteps];
    let mut free: Vec<FreeModule> = vec![FreeModule::default(); nsteps];
    for t in lo..=n_res {
        // Z_{m-1,t}: syzygy inside the target of step m.
        let mut z: Subspace<F> = Subspace::full(&f, module.dim(t));
        for m in 0..nsteps {
            let width = z.ambient();
            let labels: Vec<usize> = if m == 0 { module.labels(t).to_vec() } else { free[m - 1].labels(&alg, t) };
            let old = rows_of(&alg, module, &free, &steps, m, t);
            if z.dim() > 0 {
                let mut w = old.clone();
                for x in z.basis() {
                    for r in &a0.radical {
                        let mut acc = vec![f.zero(); width];
                        for (a, c) in r.iter().enumerate() {
                            if f.is_zero(c) {
                                continue;
                            }
                            let y = if m == 0 {
                                module.act(0, a, t, x)
                            } else {
                                let lay = free[m - 1].layout(&alg, t);
                                free[m - 1].act_dense(&alg, 0, a, &lay, &lay, x)
                            };
                            f.axpy(&mut acc, c, &y);
                        }
                        w.push(acc);
                    }
                }
                for v in 0..alg.num_vertices() {
                    let project = |x: &Vec<F::Elem>| -> Vec<F::Elem> {
                        x.iter().zip(&labels).map(|(c, &l)| if l == v { c.clone() } else { f.zero() }).collect()
                    };
                    let zv = Subspace::span(&f, width, z.basis().iter().map(project).collect());
                    if zv.dim() == 0 {
                        continue;
                    }
                    let wv = Subspace::span(&f, width, w.iter().map(project).collect());
                    let cv = wv.complement_in(&f, &zv);
                    for row in cv.basis() {
                        steps[m].push(Generator { vertex: v, degree: t, image: row.clone() });
                        free[m].summands.push(Summand { vertex: v, shift: t });
                    }
                }
            }
            if m + 1 == nsteps {
                break;
            }
            let rows = rows_of(&alg, module, &free, &steps, m, t);
            let ker = left_kernel(&f, &rows, width);
            z = Subspace::span(&f, rows.len(), ker);
        }
    }
    let terms = build_terms(&alg, &free, &steps);
    Ok(Resolution { alg, module: module.clone(), h, n: n_res, margin, steps, free, terms })
}
