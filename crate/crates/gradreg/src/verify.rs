//! Property checks of the regularity identities on seeded random modules.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::algebra::{AlgebraRef, TruncatedAlgebra};
use crate::error::Result;
use crate::gmod::{random_component, Ext, ExtendedDegree, FreeMap, FreeModule, GradedModule, Interval, Summand};
use crate::regularity::{
    asreg, cm_of_algebra, ext_regs, ext_table, regs_from_resolution, simple_torreg, torreg_from_betti, tor_table, AsregReport, Bounds,
    CmStrategy, ExtOptions, Reg, RegContext, RegularityReport,
};
use crate::resolve::Resolution;
use crate::scalar::Field;

/// Shape of a random presentation `F_1 → F_0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModuleParams {
    pub gens: (usize, usize),
    pub gen_degrees: (i64, i64),
    pub rels: (usize, usize),
    pub rel_degrees: (i64, i64),
}

impl Default for ModuleParams {
    fn default() -> Self {
        ModuleParams { gens: (1, 2), gen_degrees: (0, 1), rels: (0, 3), rel_degrees: (1, 3) }
    }
}

impl ModuleParams {
    pub fn to_json(&self) -> Value {
        json!({
            "gens": [self.gens.0, self.gens.1],
            "genDegrees": [self.gen_degrees.0, self.gen_degrees.1],
            "rels": [self.rels.0, self.rels.1],
            "relDegrees": [self.rel_degrees.0, self.rel_degrees.1],
        })
    }
}

/// A seeded random degree-0 map between free modules.
pub fn random_presentation<F: Field>(alg: &AlgebraRef<F>, seed: u64, params: &ModuleParams) -> Result<FreeMap<F>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nv = alg.num_vertices();
    let summand = |rng: &mut ChaCha8Rng, (lo, hi): (i64, i64)| Summand { vertex: rng.gen_range(0..nv), shift: rng.gen_range(lo..=hi) };
    let g = rng.gen_range(params.gens.0..=params.gens.1);
    let target = FreeModule::new((0..g).map(|_| summand(&mut rng, params.gen_degrees)).collect());
    let r = if g == 0 { 0 } else { rng.gen_range(params.rels.0..=params.rels.1) };
    let source = FreeModule::new((0..r).map(|_| summand(&mut rng, params.rel_degrees)).collect());
    let images = source
        .summands
        .iter()
        .map(|s| random_component(alg, &target, s.shift, s.vertex, &mut rng as &mut dyn RngCore))
        .collect();
    FreeMap::new(alg, source, target, images)
}

/// Cokernel of [`random_presentation`], known through degree `hi`.
pub fn random_module<F: Field>(alg: &AlgebraRef<F>, seed: u64, params: &ModuleParams, hi: i64) -> Result<GradedModule<F>> {
    GradedModule::cokernel(alg, &random_presentation(alg, seed, params)?, hi)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
    Skipped,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Inconclusive => "inconclusive-censored",
            Verdict::Skipped => "skipped-degenerate",
        }
    }
}

/// `a ≤ b` on enclosures: fails only when both sides are exact.
pub fn verdict_le(a: Interval, b: Interval) -> Verdict {
    if a.hi <= b.lo {
        Verdict::Holds
    } else if a.is_exact() && b.is_exact() {
        Verdict::Fails
    } else {
        Verdict::Inconclusive
    }
}

/// `a = b` on enclosures: decided only when both sides are exact.
pub fn verdict_eq(a: Interval, b: Interval) -> Verdict {
    match (a.is_exact(), b.is_exact()) {
        (true, true) if a == b => Verdict::Holds,
        (true, true) => Verdict::Fails,
        _ => Verdict::Inconclusive,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub check: u8,
    pub relation: String,
    pub algebra: String,
    /// Module seed; `None` for algebra-level relations.
    pub seed: Option<u64>,
    pub left: ExtendedDegree,
    pub right: ExtendedDegree,
    pub verdict: Verdict,
    pub witness: Value,
}

impl CheckOutcome {
    pub fn to_json(&self) -> Value {
        json!({
            "check": format!("C{}", self.check),
            "relation": self.relation,
            "instance": {"algebra": self.algebra, "seed": self.seed},
            "left": self.left.to_json(),
            "right": self.right.to_json(),
            "verdict": self.verdict.name(),
            "witness": self.witness,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub instances: usize,
    pub bounds: Bounds,
    pub strategy: CmStrategy,
    pub params: ModuleParams,
    /// Check ids to run (`1..=13`).
    pub checks: Vec<u8>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 42,
            instances: 25,
            bounds: Bounds::default(),
            strategy: CmStrategy::Duality,
            params: ModuleParams::default(),
            checks: (1..=13).collect(),
        }
    }
}

impl SuiteConfig {
    pub fn to_json(&self) -> Value {
        json!({
            "seed": self.seed,
            "instances": self.instances,
            "bounds": self.bounds.to_json(),
            "cmStrategy": self.strategy.name(),
            "params": self.params.to_json(),
            "checks": self.checks.iter().map(|c| format!("C{c}")).collect::<Vec<_>>(),
        })
    }

    /// Seeds of the sampled modules.
    pub fn instance_seeds(&self) -> Vec<u64> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        (0..self.instances).map(|_| rng.next_u64()).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub algebra: String,
    pub config: SuiteConfig,
    pub outcomes: Vec<CheckOutcome>,
    /// Checks not run, with the missing hypothesis.
    pub gated: Vec<(u8, String)>,
}

impl SuiteReport {
    pub fn count(&self, check: u8, verdict: Verdict) -> usize {
        self.outcomes.iter().filter(|o| o.check == check && o.verdict == verdict).count()
    }

    pub fn fails(&self) -> usize {
        self.outcomes.iter().filter(|o| o.verdict == Verdict::Fails).count()
    }

    pub fn to_json(&self) -> Value {
        let mut summary = BTreeMap::new();
        for o in &self.outcomes {
            let e = summary.entry(o.check).or_insert([0usize; 4]);
            e[o.verdict as usize] += 1;
        }
        let summary: Vec<Value> = summary
            .iter()
            .map(|(c, n)| json!({"check": format!("C{c}"), "holds": n[0], "fails": n[1], "inconclusive": n[2], "skipped": n[3]}))
            .collect();
        json!({
            "algebra": self.algebra,
            "config": self.config.to_json(),
            "summary": summary,
            "gated": self.gated.iter().map(|(c, r)| json!({"check": format!("C{c}"), "reason": r})).collect::<Vec<_>>(),
            "outcomes": self.outcomes.iter().map(CheckOutcome::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Data shared by every instance of a suite run.
struct AlgebraData {
    cm_a: (Interval, Interval),
    tor_s: (Interval, Interval),
    extreg_s: Interval,
    asreg: AsregReport,
    depth_a: Interval,
}

struct Runner<'a, F: Field> {
    ctx: &'a RegContext<F>,
    name: &'a str,
    cfg: &'a SuiteConfig,
    ss: bool,
    noetherian: bool,
    bdc: bool,
    connected: bool,
    data: AlgebraData,
}

struct Sink<'a> {
    name: &'a str,
    seed: Option<u64>,
    out: Vec<CheckOutcome>,
}

impl Sink<'_> {
    fn push(&mut self, check: u8, relation: &str, left: Interval, right: Interval, verdict: Verdict, witness: Value) {
        self.out.push(CheckOutcome {
            check,
            relation: relation.to_owned(),
            algebra: self.name.to_owned(),
            seed: self.seed,
            left: ExtendedDegree::from_interval(left),
            right: ExtendedDegree::from_interval(right),
            verdict,
            witness,
        });
    }

    fn le(&mut self, check: u8, relation: &str, left: Interval, right: Interval) {
        self.push(check, relation, left, right, verdict_le(left, right), Value::Null);
    }

    fn eq(&mut self, check: u8, relation: &str, left: Interval, right: Interval) {
        self.push(check, relation, left, right, verdict_eq(left, right), Value::Null);
    }

    fn skip(&mut self, check: u8, relation: &str) {
        let u = Interval::unknown();
        self.push(check, relation, u, u, Verdict::Skipped, Value::Null);
    }
}

/// Shift of a regularity under `X ↦ X[1]`.
fn suspension_shift(r: Reg) -> i64 {
    match r {
        Reg::CMreg | Reg::Torreg | Reg::Extreg | Reg::Exreg => -1,
        Reg::cmreg | Reg::torreg | Reg::extreg | Reg::exreg => 1,
    }
}

impl<'a, F: Field> Runner<'a, F> {
    fn wants(&self, c: u8) -> bool {
        self.cfg.checks.contains(&c)
    }

    fn report(&self, res: &Resolution<F>) -> Result<RegularityReport> {
        regs_from_resolution(self.ctx, res, self.cfg.strategy)
    }

    fn algebra_level(&self) -> Vec<CheckOutcome> {
        let mut s = Sink { name: self.name, seed: None, out: Vec::new() };
        let sides = std::iter::once(("left", &self.data.asreg.left)).chain(self.data.asreg.right.as_ref().map(|r| ("right", r)));
        for (side, a) in sides {
            if self.wants(5) && self.bdc && self.noetherian {
                s.le(5, &format!("ASreg(A) >= 0 ({side})"), Interval::int(0), a.asreg.value);
            }
            if self.wants(12) && self.bdc && self.noetherian {
                s.le(12, &format!("asreg(A) >= 0 ({side})"), Interval::int(0), a.asreg_small.value);
            }
        }
        s.out
    }

    fn instance(&self, seed: u64) -> Result<Vec<CheckOutcome>> {
        let ctx = self.ctx;
        let alg = ctx.algebra();
        let top = ctx.module_top();
        let mut s = Sink { name: self.name, seed: Some(seed), out: Vec::new() };
        let pres = random_presentation(alg, seed, &self.cfg.params)?;
        let m = Arc::new(GradedModule::cokernel(alg, &pres, top)?);
        if m.is_zero() {
            for &c in &self.cfg.checks {
                s.skip(c, "zero module");
            }
            return Ok(s.out);
        }
        let res = ctx.resolve(&m)?;
        let r = self.report(&res)?;
        let (ideg, _) = m.degree_bounds();
        let d = &self.data;
        if self.wants(1) && self.ss {
            s.eq(1, "extreg(M) = -ideg(M)", r.iv(Reg::extreg), ideg.neg());
        }
        if self.wants(2) {
            s.le(2, "extreg(M) >= -ideg(M)", ideg.neg(), r.iv(Reg::extreg));
        }
        if self.wants(3) {
            let a = ctx.regular()?;
            let injdim = ctx.gorenstein().filter(|g| g.is_verified()).map(|g| g.dim);
            let t = ext_table(&res, &a, &ExtOptions { injdim, margin: ctx.bounds().margin, columns: None })?;
            let v = t.ideg().neg();
            let finite_pdim = r.pdim.value.is_exact();
            if finite_pdim && self.ss {
                s.eq(3, "Extreg(M) = -ideg RgHom(M, A)", r.iv(Reg::Extreg), v);
            } else {
                s.le(3, "Extreg(M) >= -ideg RgHom(M, A)", v, r.iv(Reg::Extreg));
            }
        }
        if self.wants(4) && self.noetherian {
            if self.bdc && self.ss {
                s.eq(4, "CMreg(M) = Exreg(M)", r.iv(Reg::CMreg), r.iv(Reg::Exreg));
            } else {
                s.le(4, "CMreg(M) <= Exreg(M)", r.iv(Reg::CMreg), r.iv(Reg::Exreg));
            }
        }
        if self.wants(5) && self.bdc && self.noetherian {
            s.le(5, "CMreg(M) <= Torreg(M) + CMreg(A)", r.iv(Reg::CMreg), r.iv(Reg::Torreg).add(d.cm_a.0));
            s.le(5, "Torreg(M) <= CMreg(M) + Torreg(S)", r.iv(Reg::Torreg), r.iv(Reg::CMreg).add(d.tor_s.0));
        }
        if self.wants(6) && self.bdc && self.noetherian {
            self.check_linear_truncation(&mut s, &m, &r)?;
        }
        if self.wants(7) {
            self.check_exact_sequence(&mut s, &pres, &r)?;
        }
        if self.wants(8) || self.wants(9) {
            self.check_pairs(&mut s, seed, &m, &res, &r)?;
        }
        if self.wants(10) {
            check_cocycle_witness(&mut s, &res, ideg);
        }
        if self.wants(11) && self.bdc && self.noetherian && d.asreg.left.asreg.value == Interval::int(0) {
            s.eq(11, "CMreg(M) = Torreg(M) + CMreg(A)", r.iv(Reg::CMreg), r.iv(Reg::Torreg).add(d.cm_a.0));
        }
        if self.wants(12) && self.bdc && self.noetherian {
            s.le(12, "extreg(M) <= cmreg(M) + extreg(S)", r.iv(Reg::extreg), r.iv(Reg::cmreg).add(d.extreg_s));
            s.le(12, "cmreg(M) <= extreg(M) + cmreg(A)", r.iv(Reg::cmreg), r.iv(Reg::extreg).add(d.cm_a.1));
        }
        if self.wants(13) && self.noetherian && ctx.gorenstein().is_some_and(|g| g.is_verified()) {
            if let Some(p) = r.pdim.value.value().and_then(Ext::finite) {
                s.eq(13, "pdim(M) + depth(M) = depth(A)", r.depth.value.add_int(p), d.depth_a);
            }
        }
        Ok(s.out)
    }

    /// `Torreg(M_{≥r}(r + p)) ≤ 0` for `r = CMreg(M)`, `p = Torreg(S)`, and linearity when `A_0` is semisimple.
    fn check_linear_truncation(&self, s: &mut Sink, m: &GradedModule<F>, r: &RegularityReport) -> Result<()> {
        let (Some(reg), Some(p)) = (
            r.iv(Reg::CMreg).value().and_then(Ext::finite),
            self.data.tor_s.0.value().and_then(Ext::finite),
        ) else {
            let u = Interval::unknown();
            s.push(6, "Torreg(M_{>=r}(r+p)) <= 0", u, Interval::int(0), Verdict::Inconclusive, json!("CMreg(M) or Torreg(S) censored"));
            return Ok(());
        };
        let t = Arc::new(m.truncate_below(reg).shift(reg + p));
        let rt = self.ctx.resolve(&t)?;
        let (tb, _) = torreg_from_betti(&rt);
        s.push(6, "Torreg(M_{>=r}(r+p)) <= 0", tb.value, Interval::int(0), verdict_le(tb.value, Interval::int(0)), json!({"r": reg, "p": p}));
        if self.ss {
            let lin = rt.betti().is_linear();
            let verdict = match (lin.linear, lin.exact) {
                (true, _) => Verdict::Holds,
                (false, true) => Verdict::Fails,
                (false, false) => Verdict::Inconclusive,
            };
            let one = |b: bool| Interval::int(b as i64);
            s.push(6, "M_{>=r}(r+p) has a linear resolution", one(lin.linear), Interval::int(1), verdict, json!({"r": reg, "p": p, "exact": lin.exact}));
        }
        Ok(())
    }

    /// Three triangle inequalities per regularity for `0 → K → F_0 → M → 0`.
    fn check_exact_sequence(&self, s: &mut Sink, pres: &FreeMap<F>, rm: &RegularityReport) -> Result<()> {
        let ctx = self.ctx;
        let alg = ctx.algebra();
        let top = ctx.module_top();
        let k = Arc::new(GradedModule::image(alg, pres, top)?);
        let f0 = Arc::new(GradedModule::free(alg, pres.target.clone(), top)?);
        let rk = self.report(&ctx.resolve(&k)?)?;
        let rf = self.report(&ctx.resolve(&f0)?)?;
        for reg in Reg::ALL {
            let (x, y, z) = (rk.iv(reg), rf.iv(reg), rm.iv(reg));
            let sh = suspension_shift(reg);
            s.le(7, &format!("{reg}(F) <= max({reg}(K), {reg}(M))"), y, x.max(z));
            s.le(7, &format!("{reg}(M) <= max({reg}(F), {reg}(K) {sh:+})"), z, y.max(x.add_int(sh)));
            s.le(7, &format!("{reg}(K) <= max({reg}(F), {reg}(M) {:+})", -sh), x, y.max(z.add_int(-sh)));
        }
        Ok(())
    }

    fn check_pairs(&self, s: &mut Sink, seed: u64, x: &GradedModule<F>, res: &Resolution<F>, r: &RegularityReport) -> Result<()> {
        let ctx = self.ctx;
        let ideg_x = x.degree_bounds().0;
        if self.wants(8) && self.ss {
            let opp = ctx.opposite()?;
            let y = random_module(opp.algebra(), seed ^ 0x5bd1_e995, &self.cfg.params, opp.module_top())?;
            if !y.is_zero() {
                let ideg_y = y.degree_bounds().0;
                let t = tor_table(res, &y)?;
                if self.connected {
                    s.eq(8, "ideg(Y (x) X) = ideg(X) + ideg(Y)", t.ideg(), ideg_x.add(ideg_y));
                }
                s.le(8, "-ideg(Y (x) X) <= extreg(X) - ideg(Y)", t.ideg().neg(), r.iv(Reg::extreg).add(ideg_y.neg()));
            }
        }
        if self.wants(9) {
            let y = random_module(ctx.algebra(), seed ^ 0x9e37_79b9, &self.cfg.params, ctx.module_top())?;
            if !y.is_zero() {
                let ideg_y = y.degree_bounds().0;
                let t = ext_table(res, &y, &ExtOptions { margin: ctx.bounds().margin, ..Default::default() })?;
                s.le(9, "-ideg RgHom(X, Y) <= Extreg(X) - ideg(Y)", t.ideg().neg(), r.iv(Reg::Extreg).add(ideg_y.neg()));
            }
        }
        Ok(())
    }
}

/// Some `P_α` has a generator of degree `α + ideg(M)` whose dual cochain is a cocycle.
fn check_cocycle_witness<F: Field>(s: &mut Sink, res: &Resolution<F>, ideg: Interval) {
    let rel = "generator of degree alpha - p in ker d^{-alpha}";
    let Some(lo) = ideg.value().and_then(Ext::finite) else {
        s.push(10, rel, ideg, ideg, Verdict::Inconclusive, Value::Null);
        return;
    };
    let p = Interval::int(-lo);
    let minimal = res.check_minimality();
    for alpha in 0..res.len() {
        if let Some(k) = res.generators(alpha).iter().position(|g| g.degree == alpha as i64 + lo) {
            let verdict = if minimal { Verdict::Holds } else { Verdict::Fails };
            s.push(10, rel, p, p, verdict, json!({"alpha": alpha, "generator": k, "degree": alpha as i64 + lo}));
            return;
        }
    }
    let verdict = if res.complete(0) { Verdict::Fails } else { Verdict::Inconclusive };
    s.push(10, rel, p, Interval::unknown(), verdict, Value::Null);
}

/// Runs the selected checks on `cfg.instances` random modules over the context algebra.
pub fn run_theorem_suite<F: Field>(ctx: &RegContext<F>, name: &str, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let alg = ctx.algebra();
    let flags = ctx.flags();
    let ss = ctx.a0_semisimple();
    let noetherian = flags.noetherian == Some(true);
    let bdc = flags.bdc == Some(true);
    let connected = alg.num_vertices() == 1 && ss;
    let cm = cm_of_algebra(ctx, cfg.strategy)?;
    let (tb, ts) = simple_torreg(ctx)?;
    let (_, extreg_s) = ext_regs(ctx, &*ctx.simple_resolution()?)?;
    let a = Arc::new(ctx.regular()?);
    let ra = regs_from_resolution(ctx, &ctx.resolve(&a)?, cfg.strategy)?;
    let data = AlgebraData {
        cm_a: (cm.big.value, cm.small.value),
        tor_s: (tb.value, ts.value),
        extreg_s: extreg_s.value,
        asreg: asreg(ctx, cfg.strategy)?,
        depth_a: ra.depth.value,
    };
    let runner = Runner { ctx, name, cfg, ss, noetherian, bdc, connected, data };
    let mut gated = Vec::new();
    for &c in &cfg.checks {
        let need = match c {
            1 | 8 if !ss => Some("A_0 semisimple"),
            4 | 13 if !noetherian => Some("noetherian"),
            5 | 6 | 11 | 12 if !(bdc && noetherian) => Some("balanced dualizing complex and noetherian"),
            13 if !ctx.gorenstein().is_some_and(|g| g.is_verified()) => Some("verified AS-Gorenstein data"),
            11 if runner.data.asreg.left.asreg.value != Interval::int(0) => Some("ASreg(A) = 0"),
            _ => None,
        };
        if let Some(n) = need {
            gated.push((c, n.to_owned()));
        }
    }
    let seeds = cfg.instance_seeds();
    let per: Vec<Result<Vec<CheckOutcome>>> = seeds.par_iter().map(|&sd| runner.instance(sd)).collect();
    let mut outcomes = runner.algebra_level();
    for (sd, r) in seeds.iter().zip(per) {
        match r {
            Ok(o) => outcomes.extend(o),
            Err(e) => {
                for &c in &cfg.checks {
                    outcomes.push(CheckOutcome {
                        check: c,
                        relation: format!("instance error: {e}"),
                        algebra: name.to_owned(),
                        seed: Some(*sd),
                        left: ExtendedDegree::AtLeast(i64::MIN),
                        right: ExtendedDegree::AtLeast(i64::MIN),
                        verdict: Verdict::Skipped,
                        witness: json!({"error": e.kind()}),
                    });
                }
            }
        }
    }
    outcomes.sort_by_key(|o| (o.check, o.seed));
    Ok(SuiteReport { algebra: name.to_owned(), config: cfg.clone(), outcomes, gated })
}

/// Hilbert data of the twisted algebra equals that of `A` at zero shifts.
pub fn twist_reproduces<F: Field>(alg: &TruncatedAlgebra<F>) -> Result<bool> {
    let zero = vec![0; alg.num_vertices()];
    let b = alg.endo_twist(&zero)?;
    Ok(b.hilbert() == alg.hilbert())
}
