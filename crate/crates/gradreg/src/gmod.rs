//! Finitely generated graded modules over a truncated algebra, degree-0 maps,
//! and the extended degree type used for every reported invariant.
//!
//! A module is known on a window `[lo, hi]`: it vanishes below `lo`, and
//! above `hi` it is either certified zero (`certified_top`) or unknown.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use rand::RngCore;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::{AlgebraRef, TruncatedAlgebra};
use crate::error::{Error, Result};
use crate::scalar::{rref_rows, Field, SparseVec, Subspace};

/// A value in `ℤ ∪ {±∞}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ext {
    NegInf,
    Fin(i64),
    PosInf,
}

impl Ext {
    pub fn neg(self) -> Ext {
        match self {
            Ext::NegInf => Ext::PosInf,
            Ext::PosInf => Ext::NegInf,
            Ext::Fin(v) => Ext::Fin(-v),
        }
    }

    /// Sum with the convention that an infinite summand dominates; `+∞ + −∞` is not used.
    pub fn add(self, other: Ext) -> Ext {
        match (self, other) {
            (Ext::Fin(a), Ext::Fin(b)) => Ext::Fin(a + b),
            (Ext::PosInf, _) | (_, Ext::PosInf) => Ext::PosInf,
            _ => Ext::NegInf,
        }
    }

    pub fn add_int(self, k: i64) -> Ext {
        self.add(Ext::Fin(k))
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            Ext::Fin(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ext::NegInf => write!(f, "-inf"),
            Ext::PosInf => write!(f, "+inf"),
            Ext::Fin(v) => write!(f, "{v}"),
        }
    }
}

/// A closed interval of possible values for an invariant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Ext,
    pub hi: Ext,
}

impl Interval {
    pub fn exact(v: Ext) -> Self {
        Interval { lo: v, hi: v }
    }

    pub fn int(v: i64) -> Self {
        Self::exact(Ext::Fin(v))
    }

    pub fn unknown() -> Self {
        Interval { lo: Ext::NegInf, hi: Ext::PosInf }
    }

    pub fn at_least(v: Ext) -> Self {
        Interval { lo: v, hi: Ext::PosInf }
    }

    pub fn at_most(v: Ext) -> Self {
        Interval { lo: Ext::NegInf, hi: v }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn value(&self) -> Option<Ext> {
        self.is_exact().then_some(self.lo)
    }

    pub fn neg(self) -> Self {
        Interval { lo: self.hi.neg(), hi: self.lo.neg() }
    }

    pub fn add(self, o: Self) -> Self {
        Interval { lo: self.lo.add(o.lo), hi: self.hi.add(o.hi) }
    }

    pub fn add_int(self, k: i64) -> Self {
        Interval { lo: self.lo.add_int(k), hi: self.hi.add_int(k) }
    }

    pub fn max(self, o: Self) -> Self {
        Interval { lo: self.lo.max(o.lo), hi: self.hi.max(o.hi) }
    }

    pub fn min(self, o: Self) -> Self {
        Interval { lo: self.lo.min(o.lo), hi: self.hi.min(o.hi) }
    }

    /// Intersection, used to combine two valid enclosures of the same value.
    pub fn meet(self, o: Self) -> Self {
        Interval { lo: self.lo.max(o.lo), hi: self.hi.min(o.hi) }
    }
}

/// Reported value of an invariant: exact, or censored at the truncation bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExtendedDegree {
    Int(i64),
    PlusInfinity,
    MinusInfinity,
    /// At least the bound; `i64::MIN` encodes "no known lower bound".
    AtLeast(i64),
    AtMost(i64),
}

impl ExtendedDegree {
    pub fn from_interval(iv: Interval) -> Self {
        match (iv.lo, iv.hi) {
            (a, b) if a == b => match a {
                Ext::Fin(v) => ExtendedDegree::Int(v),
                Ext::PosInf => ExtendedDegree::PlusInfinity,
                Ext::NegInf => ExtendedDegree::MinusInfinity,
            },
            (Ext::Fin(v), _) => ExtendedDegree::AtLeast(v),
            (Ext::NegInf, Ext::Fin(v)) => ExtendedDegree::AtMost(v),
            _ => ExtendedDegree::AtLeast(i64::MIN),
        }
    }

    pub fn to_interval(self) -> Interval {
        match self {
            ExtendedDegree::Int(v) => Interval::int(v),
            ExtendedDegree::PlusInfinity => Interval::exact(Ext::PosInf),
            ExtendedDegree::MinusInfinity => Interval::exact(Ext::NegInf),
            ExtendedDegree::AtLeast(i64::MIN) => Interval::unknown(),
            ExtendedDegree::AtLeast(v) => Interval::at_least(Ext::Fin(v)),
            ExtendedDegree::AtMost(v) => Interval::at_most(Ext::Fin(v)),
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(self, ExtendedDegree::Int(_) | ExtendedDegree::PlusInfinity | ExtendedDegree::MinusInfinity)
    }

    pub fn to_json(self) -> Value {
        match self {
            ExtendedDegree::Int(v) => json!({"kind": "int", "value": v}),
            ExtendedDegree::PlusInfinity => json!({"kind": "+inf"}),
            ExtendedDegree::MinusInfinity => json!({"kind": "-inf"}),
            ExtendedDegree::AtLeast(i64::MIN) => json!({"kind": "atLeast", "value": null}),
            ExtendedDegree::AtLeast(v) => json!({"kind": "atLeast", "value": v}),
            ExtendedDegree::AtMost(v) => json!({"kind": "atMost", "value": v}),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = || Error::Syntax(format!("bad extended degree {v}"));
        let kind = v.get("kind").and_then(Value::as_str).ok_or_else(bad)?;
        let val = v.get("value");
        Ok(match kind {
            "int" => ExtendedDegree::Int(val.and_then(Value::as_i64).ok_or_else(bad)?),
            "+inf" => ExtendedDegree::PlusInfinity,
            "-inf" => ExtendedDegree::MinusInfinity,
            "atLeast" => match val {
                Some(Value::Null) | None => ExtendedDegree::AtLeast(i64::MIN),
                Some(x) => ExtendedDegree::AtLeast(x.as_i64().ok_or_else(bad)?),
            },
            "atMost" => ExtendedDegree::AtMost(val.and_then(Value::as_i64).ok_or_else(bad)?),
            _ => return Err(bad()),
        })
    }
}

impl fmt::Display for ExtendedDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedDegree::Int(v) => write!(f, "{v}"),
            ExtendedDegree::PlusInfinity => write!(f, "+inf"),
            ExtendedDegree::MinusInfinity => write!(f, "-inf"),
            ExtendedDegree::AtLeast(i64::MIN) => write!(f, "unknown"),
            ExtendedDegree::AtLeast(v) => write!(f, ">={v}"),
            ExtendedDegree::AtMost(v) => write!(f, "<={v}"),
        }
    }
}

/// One summand `A e_vertex (-shift)` of a free module.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Summand {
    pub vertex: usize,
    pub shift: i64,
}

/// `⊕ A e_v (-s)` over the listed summands.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FreeModule {
    pub summands: Vec<Summand>,
}

/// Positions of the degree-`d` basis of a free module.
#[derive(Clone, Debug)]
pub struct FreeLayout {
    pub degree: i64,
    /// Start of each summand's block of coordinates.
    pub offsets: Vec<usize>,
    pub total: usize,
}

impl FreeModule {
    pub fn new(summands: Vec<Summand>) -> Self {
        FreeModule { summands }
    }

    pub fn rank(&self) -> usize {
        self.summands.len()
    }

    pub fn min_shift(&self) -> Option<i64> {
        self.summands.iter().map(|s| s.shift).min()
    }

    pub fn max_shift(&self) -> Option<i64> {
        self.summands.iter().map(|s| s.shift).max()
    }

    /// Highest degree whose piece is fully determined by the algebra's truncation.
    pub fn complete_top<F: Field>(&self, alg: &TruncatedAlgebra<F>) -> i64 {
        self.min_shift().map_or(i64::MAX, |s| s + alg.top() as i64)
    }

    pub fn layout<F: Field>(&self, alg: &TruncatedAlgebra<F>, d: i64) -> FreeLayout {
        let mut offsets = Vec::with_capacity(self.summands.len());
        let mut total = 0;
        for s in &self.summands {
            offsets.push(total);
            let e = d - s.shift;
            if e >= 0 && e as usize <= alg.top() {
                total += alg.with_target(e as usize, s.vertex).len();
            }
        }
        FreeLayout { degree: d, offsets, total }
    }

    pub fn dim<F: Field>(&self, alg: &TruncatedAlgebra<F>, d: i64) -> usize {
        self.layout(alg, d).total
    }

    /// `(summand, algebra basis index)` of a coordinate.
    pub fn locate<F: Field>(&self, alg: &TruncatedAlgebra<F>, lay: &FreeLayout, pos: usize) -> (usize, usize) {
        let k = lay.offsets.partition_point(|&o| o <= pos) - 1;
        // Skip empty summands sharing the same offset.
        let mut k = k;
        while k + 1 < lay.offsets.len() && lay.offsets[k + 1] == lay.offsets[k] && lay.offsets[k] <= pos {
            let e = lay.degree - self.summands[k].shift;
            let len = if e >= 0 && (e as usize) <= alg.top() { alg.with_target(e as usize, self.summands[k].vertex).len() } else { 0 };
            if pos < lay.offsets[k] + len {
                break;
            }
            k += 1;
        }
        let s = self.summands[k];
        let e = (lay.degree - s.shift) as usize;
        (k, alg.with_target(e, s.vertex)[pos - lay.offsets[k]])
    }

    /// Coordinate of `(summand k, algebra element a)` of degree `lay.degree`.
    pub fn position<F: Field>(&self, alg: &TruncatedAlgebra<F>, lay: &FreeLayout, k: usize, a: usize) -> usize {
        let e = (lay.degree - self.summands[k].shift) as usize;
        lay.offsets[k] + alg.target_rank(e, a)
    }

    /// Block labels (`e_i`-components) of the degree-`d` basis.
    pub fn labels<F: Field>(&self, alg: &TruncatedAlgebra<F>, d: i64) -> Vec<usize> {
        let mut out = Vec::new();
        for s in &self.summands {
            let e = d - s.shift;
            if e >= 0 && e as usize <= alg.top() {
                out.extend(alg.with_target(e as usize, s.vertex).iter().map(|&a| alg.basis(e as usize)[a].source));
            }
        }
        out
    }

    /// `b * x` for a basis element `b` of `A_p` and a sparse vector `x` of degree `d`.
    pub fn act_sparse<F: Field>(
        &self,
        alg: &TruncatedAlgebra<F>,
        p: usize,
        b: usize,
        from: &FreeLayout,
        to: &FreeLayout,
        x: &SparseVec<F>,
    ) -> SparseVec<F> {
        let f = alg.field();
        let mut acc: HashMap<usize, F::Elem> = HashMap::new();
        for (pos, c) in x {
            let (k, a) = self.locate(alg, from, *pos);
            let e = (from.degree - self.summands[k].shift) as usize;
            for (a2, z) in alg.mul_basis(p, b, e, a) {
                let q = self.position(alg, to, k, *a2);
                let v = f.mul(c, z);
                let slot = acc.entry(q).or_insert_with(|| f.zero());
                *slot = f.add(slot, &v);
            }
        }
        let mut out: SparseVec<F> = acc.into_iter().filter(|(_, v)| !f.is_zero(v)).collect();
        out.sort_by_key(|e| e.0);
        out
    }

    /// Dense version of [`Self::act_sparse`].
    pub fn act_dense<F: Field>(
        &self,
        alg: &TruncatedAlgebra<F>,
        p: usize,
        b: usize,
        from: &FreeLayout,
        to: &FreeLayout,
        x: &[F::Elem],
    ) -> Vec<F::Elem> {
        let f = alg.field();
        let mut out = vec![f.zero(); to.total];
        for (k, s) in self.summands.iter().enumerate() {
            let e = from.degree - s.shift;
            if e < 0 || e as usize > alg.top() {
                continue;
            }
            let e = e as usize;
            for (r, &a) in alg.with_target(e, s.vertex).iter().enumerate() {
                let c = &x[from.offsets[k] + r];
                if f.is_zero(c) {
                    continue;
                }
                for (a2, z) in alg.mul_basis(p, b, e, a) {
                    let q = to.offsets[k] + alg.target_rank(e + p, *a2);
                    out[q] = f.add(&out[q], &f.mul(c, z));
                }
            }
        }
        out
    }
}

/// A degree-0 map between free modules, given by the images of the source generators.
#[derive(Clone, Debug)]
pub struct FreeMap<F: Field> {
    pub source: FreeModule,
    pub target: FreeModule,
    /// Image of generator `k`, as a dense vector of `target` in degree `source.summands[k].shift`.
    pub images: Vec<Vec<F::Elem>>,
}

impl<F: Field> FreeMap<F> {
    pub fn new(alg: &TruncatedAlgebra<F>, source: FreeModule, target: FreeModule, images: Vec<Vec<F::Elem>>) -> Result<Self> {
        if images.len() != source.rank() {
            return Err(Error::BadInput("one image per source generator is required".into()));
        }
        for (k, (s, img)) in source.summands.iter().zip(&images).enumerate() {
            let lay = target.layout(alg, s.shift);
            if img.len() != lay.total {
                return Err(Error::BadInput(format!("image {k} has length {}, expected {}", img.len(), lay.total)));
            }
            let labels = target.labels(alg, s.shift);
            if img.iter().zip(&labels).any(|(c, &l)| !alg.field().is_zero(c) && l != s.vertex) {
                return Err(Error::BadInput(format!("image {k} does not lie in the e_{} component", s.vertex)));
            }
        }
        Ok(FreeMap { source, target, images })
    }

    /// Images of the degree-`d` basis of the source.
    pub fn matrix_rows(&self, alg: &TruncatedAlgebra<F>, d: i64) -> Vec<Vec<F::Elem>> {
        let to = self.target.layout(alg, d);
        let mut rows = Vec::new();
        for (k, s) in self.source.summands.iter().enumerate() {
            let e = d - s.shift;
            if e < 0 || e as usize > alg.top() {
                continue;
            }
            let from = self.target.layout(alg, s.shift);
            for &b in alg.with_target(e as usize, s.vertex) {
                rows.push(self.target.act_dense(alg, e as usize, b, &from, &to, &self.images[k]));
            }
        }
        rows
    }
}

/// How a module was constructed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Origin {
    Free,
    Cokernel,
    Kernel,
    Dual,
    Truncation,
    Simple,
    Zero,
    Shifted(Box<Origin>),
}

#[derive(Clone, Debug)]
struct Subquotient<F: Field> {
    free: FreeModule,
    /// Per degree: the submodule `V` being divided out.
    v: Vec<Subspace<F>>,
    /// Per degree: rows completing `V` to `U`, reduced against `V`.
    c: Vec<Subspace<F>>,
}

/// `[a][j]`: image of basis vector `j` of `M_d` under basis element `a` of `A_p`.
type ActionBlock<F> = Vec<Vec<SparseVec<F>>>;

#[derive(Clone, Debug)]
enum Repr<F: Field> {
    Subquotient(Subquotient<F>),
    Explicit(HashMap<(usize, i64), Arc<ActionBlock<F>>>),
}

/// A graded module known on the window `[lo, hi]`.
#[derive(Debug)]
pub struct GradedModule<F: Field> {
    alg: AlgebraRef<F>,
    lo: i64,
    hi: i64,
    labels: Vec<Vec<usize>>,
    repr: Repr<F>,
    gen_top: Option<i64>,
    certified_top: Option<i64>,
    origin: Origin,
    cache: RwLock<HashMap<(usize, i64), Arc<ActionBlock<F>>>>,
}

impl<F: Field> Clone for GradedModule<F> {
    fn clone(&self) -> Self {
        GradedModule {
            alg: self.alg.clone(),
            lo: self.lo,
            hi: self.hi,
            labels: self.labels.clone(),
            repr: self.repr.clone(),
            gen_top: self.gen_top,
            certified_top: self.certified_top,
            origin: self.origin.clone(),
            cache: RwLock::new(self.cache.read().unwrap().clone()),
        }
    }
}

/// A degree-0 map between modules, one matrix per degree (`rows = dim target`).
#[derive(Clone, Debug)]
pub struct GradedMap<F: Field> {
    pub source: Arc<GradedModule<F>>,
    pub target: Arc<GradedModule<F>>,
    /// `matrices[d - source.lo()]`, stored as images of source basis vectors.
    pub images: Vec<Vec<Vec<F::Elem>>>,
}

impl<F: Field> GradedModule<F> {
    fn finish(mut self) -> Self {
        self.certified_top = self.certified_top.or_else(|| self.zero_run_certificate());
        self
    }

    /// If the module is generated in degrees `<= gen_top` and vanishes on a run of
    /// `gen_degree_bound` consecutive degrees above it, it vanishes from there on.
    fn zero_run_certificate(&self) -> Option<i64> {
        let g = self.gen_top?;
        let delta = self.alg.gen_degree_bound() as i64;
        let mut run = 0;
        let mut last_nonzero = None;
        for d in self.lo..=self.hi {
            if self.dim(d) == 0 {
                if d > g {
                    run += 1;
                    if run >= delta {
                        return Some(last_nonzero.unwrap_or(self.lo - 1));
                    }
                }
            } else {
                run = 0;
                last_nonzero = Some(d);
            }
        }
        if self.lo > self.hi && g < self.lo {
            return Some(self.lo - 1);
        }
        None
    }

    pub fn algebra(&self) -> &AlgebraRef<F> {
        &self.alg
    }

    pub fn field(&self) -> &F {
        self.alg.field()
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn origin(&self) -> &Origin {
        &self.origin
    }

    /// Upper bound on generator degrees, when known.
    pub fn gen_top(&self) -> Option<i64> {
        self.gen_top
    }

    /// `Some(t)`: the module vanishes in every degree above `t`.
    pub fn certified_top(&self) -> Option<i64> {
        self.certified_top
    }

    pub fn is_finite_dimensional(&self) -> bool {
        self.certified_top.is_some()
    }

    /// Whether `M_d` is determined by the stored data.
    pub fn known(&self, d: i64) -> bool {
        d < self.lo || d <= self.hi || self.certified_top.is_some_and(|t| d > t)
    }

    pub fn dim(&self, d: i64) -> usize {
        if d < self.lo || d > self.hi {
            return 0;
        }
        self.labels[(d - self.lo) as usize].len()
    }

    pub fn labels(&self, d: i64) -> &[usize] {
        if d < self.lo || d > self.hi {
            return &[];
        }
        &self.labels[(d - self.lo) as usize]
    }

    pub fn dims(&self) -> Vec<usize> {
        (self.lo..=self.hi).map(|d| self.dim(d)).collect()
    }

    /// Certified zero module.
    pub fn is_zero(&self) -> bool {
        self.certified_top.is_some_and(|t| (self.lo..=t.min(self.hi)).all(|d| self.dim(d) == 0))
    }

    pub fn zero(alg: &AlgebraRef<F>) -> Self {
        GradedModule {
            alg: alg.clone(),
            lo: 0,
            hi: -1,
            labels: Vec::new(),
            repr: Repr::Explicit(HashMap::new()),
            gen_top: None,
            certified_top: Some(-1),
            origin: Origin::Zero,
            cache: RwLock::new(HashMap::new()),
        }
    }

    fn from_subquotient(alg: &AlgebraRef<F>, lo: i64, hi: i64, sq: Subquotient<F>, gen_top: Option<i64>, origin: Origin) -> Self {
        let labels = (lo..=hi)
            .map(|d| {
                let fl = sq.free.labels(alg, d);
                sq.c[(d - lo) as usize].pivots().iter().map(|&p| fl[p]).collect()
            })
            .collect();
        GradedModule {
            alg: alg.clone(),
            lo,
            hi,
            labels,
            repr: Repr::Subquotient(sq),
            gen_top,
            certified_top: None,
            origin,
            cache: RwLock::new(HashMap::new()),
        }
        .finish()
    }

    /// The free module itself, known through degree `hi`.
    pub fn free(alg: &AlgebraRef<F>, free: FreeModule, hi: i64) -> Result<Self> {
        let Some(lo) = free.min_shift() else {
            return Ok(Self::zero(alg));
        };
        let hi = hi.min(free.complete_top(alg));
        let f = alg.field();
        let sq = Subquotient {
            v: (lo..=hi).map(|d| Subspace::zero(free.dim(alg, d))).collect(),
            c: (lo..=hi).map(|d| Subspace::full(f, free.dim(alg, d))).collect(),
            free: free.clone(),
        };
        let gen_top = free.max_shift();
        Ok(Self::from_subquotient(alg, lo, hi, sq, gen_top, Origin::Free))
    }

    /// `A` as a left module over itself, `⊕_v A e_v`.
    pub fn regular(alg: &AlgebraRef<F>, hi: i64) -> Result<Self> {
        let summands = (0..alg.num_vertices()).map(|v| Summand { vertex: v, shift: 0 }).collect();
        Self::free(alg, FreeModule::new(summands), hi)
    }

    /// Cokernel of a map between free modules, known through degree `hi`.
    pub fn cokernel(alg: &AlgebraRef<F>, map: &FreeMap<F>, hi: i64) -> Result<Self> {
        let Some(lo) = map.target.min_shift() else {
            return Ok(Self::zero(alg));
        };
        if let Some(ms) = map.target.max_shift() {
            if hi < ms {
                return Err(Error::WindowTooSmall(format!("window top {hi} is below the generator degree {ms}")));
            }
        }
        let hi = hi.min(map.target.complete_top(alg));
        let f = alg.field();
        let mut v = Vec::new();
        let mut c = Vec::new();
        for d in lo..=hi {
            let n = map.target.dim(alg, d);
            let sub = Subspace::span(f, n, map.matrix_rows(alg, d));
            c.push(sub.complement_in(f, &Subspace::full(f, n)));
            v.push(sub);
        }
        let sq = Subquotient { free: map.target.clone(), v, c };
        Ok(Self::from_subquotient(alg, lo, hi, sq, map.target.max_shift(), Origin::Cokernel))
    }

    /// Image of a map between free modules, as a submodule of the target.
    pub fn image(alg: &AlgebraRef<F>, map: &FreeMap<F>, hi: i64) -> Result<Self> {
        let (Some(lo), Some(ms)) = (map.target.min_shift(), map.source.max_shift()) else {
            return Ok(Self::zero(alg));
        };
        if hi < ms {
            return Err(Error::WindowTooSmall(format!("window top {hi} is below the generator degree {ms}")));
        }
        let hi = hi.min(map.target.complete_top(alg));
        let f = alg.field();
        let mut v = Vec::new();
        let mut c = Vec::new();
        for d in lo..=hi {
            let n = map.target.dim(alg, d);
            v.push(Subspace::zero(n));
            c.push(Subspace::span(f, n, map.matrix_rows(alg, d)));
        }
        let sq = Subquotient { free: map.target.clone(), v, c };
        Ok(Self::from_subquotient(alg, lo, hi, sq, Some(ms), Origin::Kernel).trim_below())
    }

    /// Module given by explicit action matrices (used for simples and duals).
    fn explicit(
        alg: &AlgebraRef<F>,
        lo: i64,
        labels: Vec<Vec<usize>>,
        actions: HashMap<(usize, i64), Arc<ActionBlock<F>>>,
        origin: Origin,
    ) -> Self {
        let hi = lo + labels.len() as i64 - 1;
        GradedModule {
            alg: alg.clone(),
            lo,
            hi,
            labels,
            repr: Repr::Explicit(actions),
            gen_top: None,
            certified_top: Some(hi),
            origin,
            cache: RwLock::new(HashMap::new()),
        }
    }

    /// `S = A/J` (all simple modules `S_i` in degree 0), or only the listed vertices.
    pub fn simple(alg: &AlgebraRef<F>, vertices: Option<&[usize]>) -> Result<Self> {
        let a0 = alg.a0_structure()?;
        if !a0.basic {
            return Err(Error::NotBasic("simple modules require a basic algebra".into()));
        }
        let f = alg.field();
        let verts: Vec<usize> = vertices.map_or_else(|| (0..alg.num_vertices()).collect(), <[usize]>::to_vec);
        let n0 = alg.dim(0);
        // Coefficients of each degree-0 basis element on the idempotents modulo the radical.
        let mut cols: Vec<Vec<F::Elem>> = a0.radical.clone();
        for &e in alg.idempotents() {
            let mut u = vec![f.zero(); n0];
            u[e] = f.one();
            cols.push(u);
        }
        let nr = a0.radical.len();
        let mut coeffs = Vec::with_capacity(n0);
        for b in 0..n0 {
            // Solve Σ x_k cols_k = unit(b) via the kernel of [cols | -unit(b)].
            let mut rows: Vec<Vec<F::Elem>> = Vec::new();
            for i in 0..n0 {
                let mut r: Vec<F::Elem> = cols.iter().map(|c| c[i].clone()).collect();
                r.push(if i == b { f.neg(&f.one()) } else { f.zero() });
                rows.push(r);
            }
            let red = rref_rows(f, cols.len() + 1, rows);
            let sol = red
                .kernel
                .iter()
                .find(|k| !f.is_zero(&k[cols.len()]))
                .ok_or_else(|| Error::NotBasic("A_0 is not spanned by idempotents and radical".into()))?;
            let scale = f.inv(&sol[cols.len()]);
            coeffs.push((0..alg.num_vertices()).map(|v| f.mul(&sol[nr + v], &scale)).collect::<Vec<_>>());
        }
        let mut block: ActionBlock<F> = Vec::with_capacity(n0);
        for cb in coeffs.iter() {
            block.push(
                verts
                    .iter()
                    .enumerate()
                    .map(|(j, &v)| if f.is_zero(&cb[v]) { Vec::new() } else { vec![(j, cb[v].clone())] })
                    .collect(),
            );
        }
        let mut actions = HashMap::new();
        actions.insert((0, 0), Arc::new(block));
        Ok(Self::explicit(alg, 0, vec![verts], actions, Origin::Simple))
    }

    /// Action block of `A_p` on `M_d`; requires `d + p` inside the known window.
    pub fn action(&self, p: usize, d: i64) -> Arc<ActionBlock<F>> {
        let f = self.field();
        let dim_a = self.alg.dim(p);
        let empty = || Arc::new(vec![vec![Vec::new(); self.dim(d)]; dim_a]);
        if self.dim(d) == 0 || self.dim(d + p as i64) == 0 {
            return empty();
        }
        assert!(d + p as i64 <= self.hi, "action leaves the known window");
        if let Some(b) = self.cache.read().unwrap().get(&(p, d)) {
            return b.clone();
        }
        let block = match &self.repr {
            Repr::Explicit(map) => map.get(&(p, d)).cloned().unwrap_or_else(empty),
            Repr::Subquotient(sq) => {
                let from = sq.free.layout(&self.alg, d);
                let to = sq.free.layout(&self.alg, d + p as i64);
                let ci = (d - self.lo) as usize;
                let co = (d + p as i64 - self.lo) as usize;
                let (vsp, csp) = (&sq.v[co], &sq.c[co]);
                let mut out = Vec::with_capacity(dim_a);
                for a in 0..dim_a {
                    let mut cols = Vec::with_capacity(self.dim(d));
                    for row in sq.c[ci].basis() {
                        let mut w = sq.free.act_dense(&self.alg, p, a, &from, &to, row);
                        vsp.reduce(f, &mut w);
                        let coords = csp.coords(&w);
                        cols.push(crate::scalar::to_sparse(f, &coords));
                    }
                    out.push(cols);
                }
                Arc::new(out)
            }
        };
        self.cache.write().unwrap().insert((p, d), block.clone());
        block
    }

    /// `a * x` for basis element `a` of `A_p` and a dense vector `x` of degree `d`.
    pub fn act(&self, p: usize, a: usize, d: i64, x: &[F::Elem]) -> Vec<F::Elem> {
        let f = self.field();
        let n = self.dim(d + p as i64);
        let mut out = vec![f.zero(); n];
        if n == 0 {
            return out;
        }
        let block = self.action(p, d);
        for (j, c) in x.iter().enumerate() {
            if f.is_zero(c) {
                continue;
            }
            for (k, z) in &block[a][j] {
                out[*k] = f.add(&out[*k], &f.mul(c, z));
            }
        }
        out
    }

    /// Vectors spanning `J_0 · M_d`, where `J_0` is the radical of `A_0`.
    pub fn radical_image(&self, d: i64, basis: &[Vec<F::Elem>]) -> Result<Vec<Vec<F::Elem>>> {
        let a0 = self.alg.a0_structure()?;
        let f = self.field();
        let mut out = Vec::new();
        for r in &a0.radical {
            for x in basis {
                let mut acc = vec![f.zero(); self.dim(d)];
                for (a, c) in r.iter().enumerate() {
                    if !f.is_zero(c) {
                        let y = self.act(0, a, d, x);
                        f.axpy(&mut acc, c, &y);
                    }
                }
                out.push(acc);
            }
        }
        Ok(out)
    }

    /// `M(ℓ)`, with `M(ℓ)_m = M_{m+ℓ}`.
    pub fn shift(&self, l: i64) -> Self {
        let repr = match &self.repr {
            Repr::Subquotient(sq) => {
                let free = FreeModule::new(
                    sq.free.summands.iter().map(|s| Summand { vertex: s.vertex, shift: s.shift - l }).collect(),
                );
                Repr::Subquotient(Subquotient { free, v: sq.v.clone(), c: sq.c.clone() })
            }
            Repr::Explicit(map) => Repr::Explicit(map.iter().map(|(&(p, d), b)| ((p, d - l), b.clone())).collect()),
        };
        let cache = self.cache.read().unwrap().iter().map(|(&(p, d), b)| ((p, d - l), b.clone())).collect();
        let origin = if l == 0 { self.origin.clone() } else { Origin::Shifted(Box::new(self.origin.clone())) };
        GradedModule {
            alg: self.alg.clone(),
            lo: self.lo - l,
            hi: self.hi - l,
            labels: self.labels.clone(),
            repr,
            gen_top: self.gen_top.map(|g| g - l),
            certified_top: self.certified_top.map(|t| t - l),
            origin,
            cache: RwLock::new(cache),
        }
    }

    /// `M_{≥r}`: pieces below `r` replaced by zero.
    pub fn truncate_below(&self, r: i64) -> Self {
        if r <= self.lo {
            return self.clone();
        }
        let cut = ((r - self.lo) as usize).min(self.labels.len());
        let mut labels = self.labels.clone();
        for l in labels.iter_mut().take(cut) {
            l.clear();
        }
        let repr = match &self.repr {
            Repr::Subquotient(sq) => {
                let mut c = sq.c.clone();
                for (k, sub) in c.iter_mut().enumerate().take(cut) {
                    *sub = Subspace::zero(sq.v[k].ambient());
                }
                Repr::Subquotient(Subquotient { free: sq.free.clone(), v: sq.v.clone(), c })
            }
            Repr::Explicit(map) => Repr::Explicit(map.iter().filter(|(&(_, d), _)| d >= r).map(|(k, b)| (*k, b.clone())).collect()),
        };
        // A truncation of a module generated in degrees <= g is generated in degrees <= max(g, r + δ - 1).
        let gen_top = self.gen_top.map(|g| g.max(r + self.alg.gen_degree_bound() as i64 - 1));
        let cache = self.cache.read().unwrap().iter().filter(|(&(_, d), _)| d >= r).map(|(k, b)| (*k, b.clone())).collect();
        GradedModule {
            alg: self.alg.clone(),
            lo: self.lo,
            hi: self.hi,
            labels,
            repr,
            gen_top,
            certified_top: self.certified_top,
            origin: Origin::Truncation,
            cache: RwLock::new(cache),
        }
        .trim_below()
        .finish()
    }

    /// The quotient `M / M_{>t}`, finite-dimensional with top at most `t`.
    pub fn truncate_above(&self, t: i64) -> Result<Self> {
        if t > self.hi && self.certified_top.is_none_or(|c| c > self.hi) {
            return Err(Error::WindowTooSmall(format!("truncation degree {t} exceeds the known window {}", self.hi)));
        }
        let hi = t.min(self.hi);
        let keep = (hi - self.lo + 1).max(0) as usize;
        let mut labels = self.labels.clone();
        labels.truncate(keep);
        let repr = match &self.repr {
            Repr::Subquotient(sq) => {
                let (mut v, mut c) = (sq.v.clone(), sq.c.clone());
                v.truncate(keep);
                c.truncate(keep);
                Repr::Subquotient(Subquotient { free: sq.free.clone(), v, c })
            }
            Repr::Explicit(map) => {
                Repr::Explicit(map.iter().filter(|(&(p, d), _)| d + p as i64 <= hi).map(|(k, b)| (*k, b.clone())).collect())
            }
        };
        let cache = self.cache.read().unwrap().iter().filter(|(&(p, d), _)| d + p as i64 <= hi).map(|(k, b)| (*k, b.clone())).collect();
        Ok(GradedModule {
            alg: self.alg.clone(),
            lo: self.lo,
            hi,
            labels,
            repr,
            gen_top: self.gen_top.map(|g| g.min(hi)),
            certified_top: Some(self.certified_top.map_or(hi, |c| c.min(hi))),
            origin: Origin::Truncation,
            cache: RwLock::new(cache),
        })
    }

    /// Drops leading zero pieces so that `lo` is the initial degree (when nonzero).
    fn trim_below(mut self) -> Self {
        let Some(first) = (self.lo..=self.hi).find(|&d| self.dim(d) > 0) else {
            return self;
        };
        let k = (first - self.lo) as usize;
        if k == 0 {
            return self;
        }
        self.labels.drain(..k);
        if let Repr::Subquotient(sq) = &mut self.repr {
            sq.v.drain(..k);
            sq.c.drain(..k);
        }
        self.lo = first;
        self
    }

    /// Matlis dual `D(M)`, a left module over the opposite algebra `opp`.
    pub fn matlis_dual(&self, opp: &AlgebraRef<F>) -> Result<Self> {
        let top = self
            .certified_top
            .ok_or_else(|| Error::NotFiniteDimensional("the module has no certified top degree".into()))?;
        if top > self.hi {
            return Err(Error::NotFiniteDimensional("support exceeds the known window".into()));
        }
        if opp.top() != self.alg.top() || (0..=opp.top()).any(|d| opp.dim(d) != self.alg.dim(d)) {
            return Err(Error::BadInput("the dual must be taken over the opposite algebra".into()));
        }
        if self.is_zero() || top < self.lo {
            return Ok(Self::zero(opp));
        }
        let (dlo, dhi) = (-top, -self.lo);
        let labels: Vec<Vec<usize>> = (dlo..=dhi).map(|d| self.labels(-d).to_vec()).collect();
        let mut actions = HashMap::new();
        for d in dlo..=dhi {
            for p in 0..=(dhi - d).min(self.alg.top() as i64) as usize {
                let src = -d - p as i64;
                if self.dim(-d) == 0 || self.dim(src) == 0 {
                    continue;
                }
                let block = self.action(p, src);
                let mut out: ActionBlock<F> = Vec::with_capacity(block.len());
                for cols in block.iter() {
                    // Transpose: φ_j ↦ Σ_k [a m_k]_j φ'_k.
                    let mut t: Vec<SparseVec<F>> = vec![Vec::new(); self.dim(-d)];
                    for (k, col) in cols.iter().enumerate() {
                        for (j, c) in col {
                            t[*j].push((k, c.clone()));
                        }
                    }
                    out.push(t);
                }
                actions.insert((p, d), Arc::new(out));
            }
        }
        Ok(Self::explicit(opp, dlo, labels, actions, Origin::Dual))
    }

    /// Kernel of a map out of this module; same representation as the source.
    pub fn kernel(map: &GradedMap<F>) -> Result<Self> {
        let src = &map.source;
        let f = src.field();
        let mut kernels: Vec<Vec<Vec<F::Elem>>> = Vec::new();
        for d in src.lo..=src.hi {
            let n = src.dim(d);
            let m = map.target.dim(d);
            let imgs = &map.images[(d - src.lo) as usize];
            // Right kernel of the matrix whose columns are the images.
            let rows: Vec<Vec<F::Elem>> = (0..m).map(|r| imgs.iter().map(|col| col[r].clone()).collect()).collect();
            let red = rref_rows(f, n, rows);
            kernels.push(red.kernel);
        }
        match &src.repr {
            Repr::Subquotient(sq) => {
                let mut c = Vec::new();
                for (k, base) in sq.c.iter().enumerate() {
                    let lifts: Vec<Vec<F::Elem>> = kernels[k].iter().map(|x| base.combine(f, x)).collect();
                    c.push(Subspace::span(f, base.ambient(), lifts));
                }
                let sq2 = Subquotient { free: sq.free.clone(), v: sq.v.clone(), c };
                let mut m = Self::from_subquotient(&src.alg, src.lo, src.hi, sq2, None, Origin::Kernel);
                m.certified_top = src.certified_top;
                Ok(m.trim_below())
            }
            Repr::Explicit(_) => {
                // Coordinates of the action restricted to the kernel.
                let spaces: Vec<Subspace<F>> = (src.lo..=src.hi)
                    .enumerate()
                    .map(|(k, d)| Subspace::span(f, src.dim(d), kernels[k].clone()))
                    .collect();
                let labels: Vec<Vec<usize>> = (src.lo..=src.hi)
                    .enumerate()
                    .map(|(k, d)| spaces[k].pivots().iter().map(|&p| src.labels(d)[p]).collect())
                    .collect();
                let mut actions = HashMap::new();
                for (k, d) in (src.lo..=src.hi).enumerate() {
                    for p in 0..=((src.hi - d) as usize).min(src.alg.top()) {
                        let ko = k + p;
                        if spaces[k].dim() == 0 || spaces[ko].dim() == 0 {
                            continue;
                        }
                        let mut block = Vec::new();
                        for a in 0..src.alg.dim(p) {
                            let cols = spaces[k]
                                .basis()
                                .iter()
                                .map(|x| crate::scalar::to_sparse(f, &spaces[ko].coords(&src.act(p, a, d, x))))
                                .collect();
                            block.push(cols);
                        }
                        actions.insert((p, d), Arc::new(block));
                    }
                }
                let mut m = Self::explicit(&src.alg, src.lo, labels, actions, Origin::Kernel);
                m.hi = src.hi;
                m.certified_top = src.certified_top;
                Ok(m)
            }
        }
    }

    /// `(ideg, sdeg)` as intervals, censored where the window is insufficient.
    pub fn degree_bounds(&self) -> (Interval, Interval) {
        let nonzero: Vec<i64> = (self.lo..=self.hi).filter(|&d| self.dim(d) > 0).collect();
        let ideg = match nonzero.first() {
            Some(&d) => Interval::int(d),
            None if self.certified_top.is_some() => Interval::exact(Ext::PosInf),
            None => Interval::at_least(Ext::Fin(self.hi + 1)),
        };
        let observed = nonzero.last().map_or(Ext::NegInf, |&d| Ext::Fin(d));
        let sdeg = if self.certified_top.is_some_and(|t| t <= self.hi) {
            Interval::exact(observed)
        } else {
            Interval { lo: observed, hi: Ext::PosInf }
        };
        (ideg, sdeg)
    }

    /// `(sdeg, ideg)` in the reported form.
    pub fn sdeg_ideg(&self) -> (ExtendedDegree, ExtendedDegree) {
        let (i, s) = self.degree_bounds();
        (ExtendedDegree::from_interval(s), ExtendedDegree::from_interval(i))
    }

    /// Checks `a(bm) = (ab)m` on all basis triples with total degree inside the window.
    pub fn check_associativity(&self) -> bool {
        let f = self.field();
        let alg = &self.alg;
        for d in self.lo..=self.hi {
            for p in 0..=alg.top() {
                for q in 0..=alg.top() - p {
                    if d + (p + q) as i64 > self.hi {
                        continue;
                    }
                    for j in 0..self.dim(d) {
                        let mut x = vec![f.zero(); self.dim(d)];
                        x[j] = f.one();
                        for b in 0..alg.dim(q) {
                            let bm = self.act(q, b, d, &x);
                            for a in 0..alg.dim(p) {
                                let left = self.act(p, a, d + q as i64, &bm);
                                let mut right = vec![f.zero(); self.dim(d + (p + q) as i64)];
                                for (k, c) in alg.mul_basis(p, a, q, b) {
                                    let y = self.act(p + q, *k, d, &x);
                                    f.axpy(&mut right, c, &y);
                                }
                                if left != right {
                                    return false;
                                }
                            }
                        }
                    }
                }
            }
        }
        true
    }

    /// Checks that `e_i` acts as the projection onto the `i`-labelled basis vectors.
    pub fn check_blocks(&self) -> bool {
        let f = self.field();
        for d in self.lo..=self.hi {
            let labels = self.labels(d);
            for v in 0..self.alg.num_vertices() {
                let e = self.alg.idempotent(v);
                for j in 0..self.dim(d) {
                    let mut x = vec![f.zero(); self.dim(d)];
                    x[j] = f.one();
                    let y = self.act(0, e, d, &x);
                    let want = if labels[j] == v { x.clone() } else { vec![f.zero(); x.len()] };
                    if y != want {
                        return false;
                    }
                }
            }
        }
        true
    }
}

impl<F: Field> GradedMap<F> {
    /// Builds a map from dense images of every source basis vector.
    pub fn new(source: Arc<GradedModule<F>>, target: Arc<GradedModule<F>>, images: Vec<Vec<Vec<F::Elem>>>) -> Result<Self> {
        if images.len() != (source.hi - source.lo + 1).max(0) as usize {
            return Err(Error::BadInput("one image list per source degree is required".into()));
        }
        for (k, d) in (source.lo..=source.hi).enumerate() {
            if images[k].len() != source.dim(d) || images[k].iter().any(|v| v.len() != target.dim(d)) {
                return Err(Error::BadInput(format!("image shape mismatch in degree {d}")));
            }
        }
        Ok(GradedMap { source, target, images })
    }

    pub fn identity(m: Arc<GradedModule<F>>) -> Self {
        let f = m.field().clone();
        let images = (m.lo..=m.hi)
            .map(|d| {
                (0..m.dim(d))
                    .map(|j| {
                        let mut v = vec![f.zero(); m.dim(d)];
                        v[j] = f.one();
                        v
                    })
                    .collect()
            })
            .collect();
        GradedMap { source: m.clone(), target: m, images }
    }

    /// Rank of the degree-`d` component.
    pub fn rank(&self, d: i64) -> usize {
        if d < self.source.lo || d > self.source.hi {
            return 0;
        }
        let f = self.source.field();
        rref_rows(f, self.target.dim(d), self.images[(d - self.source.lo) as usize].clone()).rank
    }

    /// Checks `f(a m) = a f(m)` on every basis pair inside both windows.
    pub fn check_linear(&self) -> bool {
        let (s, t) = (&self.source, &self.target);
        let f = s.field();
        let alg = s.algebra();
        let hi = s.hi.min(t.hi);
        for d in s.lo..=hi {
            for p in 0..=alg.top() {
                if d + p as i64 > hi {
                    break;
                }
                for j in 0..s.dim(d) {
                    let mut x = vec![f.zero(); s.dim(d)];
                    x[j] = f.one();
                    let fx = &self.images[(d - s.lo) as usize][j];
                    for a in 0..alg.dim(p) {
                        let ax = s.act(p, a, d, &x);
                        let mut lhs = vec![f.zero(); t.dim(d + p as i64)];
                        for (k, c) in ax.iter().enumerate() {
                            if !f.is_zero(c) {
                                f.axpy(&mut lhs, c, &self.images[(d + p as i64 - s.lo) as usize][k]);
                            }
                        }
                        if lhs != t.act(p, a, d, fx) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

/// Random element of `F_d` inside the `e_v` component.
pub fn random_component<F: Field>(alg: &TruncatedAlgebra<F>, free: &FreeModule, d: i64, v: usize, rng: &mut dyn RngCore) -> Vec<F::Elem> {
    let f = alg.field();
    free.labels(alg, d).iter().map(|&l| if l == v { f.random(rng) } else { f.zero() }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::scalar::{FieldSpec, Fp};
    use proptest::prelude::*;

    fn alg(name: &str, top: usize) -> AlgebraRef<Fp> {
        let pres = catalog::presentation(name, FieldSpec::DEFAULT).unwrap();
        Arc::new(TruncatedAlgebra::build(&Fp::new(32003).unwrap(), &pres, top, 10_000).unwrap())
    }

    fn elem(a: &TruncatedAlgebra<Fp>, d: usize, word: &[usize]) -> Vec<u32> {
        let mut v = vec![0; a.dim(d)];
        v[a.basis(d).iter().position(|b| b.word.as_deref() == Some(word)).unwrap()] = 1;
        v
    }

    /// `A(-s) → A` given by a single element of degree `s`.
    fn principal(a: &AlgebraRef<Fp>, s: i64, img: Vec<u32>) -> FreeMap<Fp> {
        FreeMap::new(
            a,
            FreeModule::new(vec![Summand { vertex: 0, shift: s }]),
            FreeModule::new(vec![Summand { vertex: 0, shift: 0 }]),
            vec![img],
        )
        .unwrap()
    }

    #[test]
    fn cokernel_of_x_over_k_x_is_k() {
        let a = alg("poly1", 6);
        let m = GradedModule::cokernel(&a, &principal(&a, 1, elem(&a, 1, &[0])), 6).unwrap();
        assert_eq!(m.dims(), vec![1, 0, 0, 0, 0, 0, 0]);
        assert!(m.is_finite_dimensional());
        assert_eq!(m.sdeg_ideg(), (ExtendedDegree::Int(0), ExtendedDegree::Int(0)));
    }

    #[test]
    fn cokernel_of_x_squared_over_k_x_y() {
        let a = alg("poly2", 6);
        let m = GradedModule::cokernel(&a, &principal(&a, 2, elem(&a, 2, &[0, 0])), 6).unwrap();
        assert_eq!(m.dims(), vec![1, 2, 2, 2, 2, 2, 2]);
        assert!(m.check_associativity());
        assert!(m.check_blocks());
    }

    #[test]
    fn cokernel_of_zero_map_is_target() {
        let a = alg("poly2", 4);
        let m = GradedModule::cokernel(&a, &principal(&a, 1, vec![0, 0]), 4).unwrap();
        assert_eq!(m.dims(), vec![1, 2, 3, 4, 5]);
        assert!(matches!(GradedModule::cokernel(&a, &principal(&a, 1, vec![0, 0]), -1), Err(Error::WindowTooSmall(_))));
    }

    fn free_map_as_graded(a: &AlgebraRef<Fp>, fm: &FreeMap<Fp>, hi: i64) -> GradedMap<Fp> {
        let src = Arc::new(GradedModule::free(a, fm.source.clone(), hi).unwrap());
        let tgt = Arc::new(GradedModule::free(a, fm.target.clone(), hi).unwrap());
        let images = (src.lo()..=src.hi()).map(|d| fm.matrix_rows(a, d)).collect();
        GradedMap::new(src, tgt, images).unwrap()
    }

    #[test]
    fn kernel_of_x_on_k_x_is_zero() {
        let a = alg("poly1", 5);
        let g = free_map_as_graded(&a, &principal(&a, 1, elem(&a, 1, &[0])), 5);
        assert!(g.check_linear());
        let k = GradedModule::kernel(&g).unwrap();
        assert!(k.dims().iter().all(|&d| d == 0));
    }

    #[test]
    fn kernel_of_x_on_dual_numbers_is_socle() {
        let a = alg("dualnum", 5);
        let g = free_map_as_graded(&a, &principal(&a, 1, elem(&a, 1, &[0])), 5);
        let k = GradedModule::kernel(&g).unwrap();
        let nonzero: Vec<(i64, usize)> = (k.lo()..=k.hi()).map(|d| (d, k.dim(d))).filter(|x| x.1 > 0).collect();
        assert_eq!(nonzero, vec![(2, 1)]);
        assert!(k.check_associativity());
        for d in g.source.lo()..=g.source.hi() {
            assert_eq!(g.source.dim(d), k.dim(d) + g.rank(d));
        }
    }

    #[test]
    fn kernel_of_identity_is_zero() {
        let a = alg("poly2", 4);
        let m = Arc::new(GradedModule::regular(&a, 4).unwrap());
        let k = GradedModule::kernel(&GradedMap::identity(m)).unwrap();
        assert!(k.dims().iter().all(|&d| d == 0));
    }

    #[test]
    fn truncation_and_shift() {
        let a = alg("poly1", 6);
        let m = GradedModule::regular(&a, 6).unwrap();
        assert_eq!(m.sdeg_ideg(), (ExtendedDegree::AtLeast(6), ExtendedDegree::Int(0)));
        let t = m.truncate_below(2);
        assert_eq!(t.degree_bounds().0, Interval::int(2));
        assert_eq!((2..=6).map(|d| t.dim(d)).collect::<Vec<_>>(), vec![1; 5]);
        assert_eq!(t.dim(1), 0);
        assert!(t.check_associativity());
        let same = m.truncate_below(0);
        assert_eq!(same.dims(), m.dims());
        let s = GradedModule::simple(&a, None).unwrap();
        assert!(s.truncate_below(1).is_zero());
        let s3 = s.shift(3);
        assert_eq!(s3.sdeg_ideg(), (ExtendedDegree::Int(-3), ExtendedDegree::Int(-3)));
        let back = s3.shift(-3);
        assert_eq!(back.dims(), s.dims());
        assert_eq!(back.lo(), s.lo());
        assert_eq!(s.shift(0).dims(), s.dims());
        let k2 = s.shift(-2);
        assert_eq!(k2.sdeg_ideg(), (ExtendedDegree::Int(2), ExtendedDegree::Int(2)));
    }

    #[test]
    fn quotient_by_high_degrees() {
        let a = alg("poly2", 6);
        let m = GradedModule::regular(&a, 6).unwrap();
        let q = m.truncate_above(2).unwrap();
        assert_eq!(q.dims(), vec![1, 2, 3]);
        assert_eq!(q.certified_top(), Some(2));
        assert!(q.known(9) && q.check_associativity());
        assert_eq!(q.sdeg_ideg(), (ExtendedDegree::Int(2), ExtendedDegree::Int(0)));
        assert!(matches!(m.truncate_above(7), Err(Error::WindowTooSmall(_))));
    }

    #[test]
    fn simple_module_degrees() {
        let a = alg("kron2", 4);
        let s = GradedModule::simple(&a, None).unwrap();
        assert_eq!(s.sdeg_ideg(), (ExtendedDegree::Int(0), ExtendedDegree::Int(0)));
        assert_eq!(s.labels(0), &[0, 1]);
        assert!(s.check_associativity() && s.check_blocks());
        let l = alg("a0loop", 2);
        let sl = GradedModule::simple(&l, None).unwrap();
        assert!(sl.check_associativity());
    }

    #[test]
    fn matlis_dual_of_simple_and_dual_numbers() {
        let a = alg("dualnum", 4);
        let opp = Arc::new(a.opposite());
        let s = GradedModule::simple(&a, None).unwrap();
        let ds = s.matlis_dual(&opp).unwrap();
        assert_eq!(ds.dims(), s.dims());
        let k3 = s.shift(-3);
        assert_eq!(k3.matlis_dual(&opp).unwrap().sdeg_ideg(), (ExtendedDegree::Int(-3), ExtendedDegree::Int(-3)));
        let reg = GradedModule::regular(&a, 4).unwrap();
        let d = reg.matlis_dual(&opp).unwrap();
        // D(A) ≅ A(1): pieces in degrees -1 and 0, x maps degree -1 onto degree 0.
        assert_eq!((d.lo(), d.hi()), (-1, 0));
        assert_eq!(d.dim(-1), 1);
        assert_eq!(d.act(1, 0, -1, &[1]), vec![1]);
        assert!(d.check_associativity());
        let dd = d.matlis_dual(&Arc::new(opp.opposite())).unwrap();
        assert_eq!(dd.dims(), reg.dims()[..2].to_vec());
        assert_eq!(dd.act(1, 0, 0, &[1]), reg.act(1, 0, 0, &[1]));
        assert!(matches!(GradedModule::regular(&alg("poly1", 3), 3).unwrap().matlis_dual(&opp), Err(Error::NotFiniteDimensional(_))));
    }

    #[test]
    fn zero_module_conventions() {
        let a = alg("poly2", 3);
        let z = GradedModule::zero(&a);
        assert!(z.is_zero());
        assert_eq!(z.sdeg_ideg(), (ExtendedDegree::MinusInfinity, ExtendedDegree::PlusInfinity));
    }

    #[test]
    fn extended_degree_json_round_trip() {
        for e in [
            ExtendedDegree::Int(-3),
            ExtendedDegree::PlusInfinity,
            ExtendedDegree::MinusInfinity,
            ExtendedDegree::AtLeast(4),
            ExtendedDegree::AtMost(-1),
            ExtendedDegree::AtLeast(i64::MIN),
        ] {
            assert_eq!(ExtendedDegree::from_json(&e.to_json()).unwrap(), e);
        }
    }

    proptest! {
        #[test]
        fn random_cokernels_are_modules(seed in 0u64..1000, s in 1i64..3) {
            use rand::SeedableRng;
            let a = alg("qplane", 6);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let target = FreeModule::new(vec![Summand { vertex: 0, shift: 0 }, Summand { vertex: 0, shift: 1 }]);
            let img = random_component(&a, &target, s, 0, &mut rng);
            let fm = FreeMap::new(&a, FreeModule::new(vec![Summand { vertex: 0, shift: s }]), target, vec![img]).unwrap();
            let m = GradedModule::cokernel(&a, &fm, 6).unwrap();
            prop_assert!(m.check_associativity());
            let (i, _) = m.degree_bounds();
            let mm = m.shift(2);
            let (i2, _) = mm.degree_bounds();
            prop_assert_eq!(i2, i.add_int(-2));
        }

        #[test]
        fn dual_dimensions_mirror(seed in 0u64..500) {
            use rand::SeedableRng;
            let a = alg("ext2", 4);
            let opp = Arc::new(a.opposite());
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let target = FreeModule::new(vec![Summand { vertex: 0, shift: 0 }]);
            let img = random_component(&a, &target, 1, 0, &mut rng);
            let fm = FreeMap::new(&a, FreeModule::new(vec![Summand { vertex: 0, shift: 1 }]), target, vec![img]).unwrap();
            let m = GradedModule::cokernel(&a, &fm, 4).unwrap();
            let d = m.matlis_dual(&opp).unwrap();
            for k in -4..=4 {
                prop_assert_eq!(d.dim(k), m.dim(-k));
            }
            prop_assert!(d.check_associativity());
        }
    }
}
