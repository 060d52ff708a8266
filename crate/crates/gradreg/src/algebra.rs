//! Degree-truncated multiplication tables of graded quiver algebras.
//!
//! A basis element of `A_d` is a path (or, for table-given algebras, an
//! abstract element) with a source and a target vertex; it lies in the block
//! `e_source A_d e_target`, and a product `a*b` can be nonzero only when
//! `target(a) = source(b)`.

use std::cmp::Ordering;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::presentation::QuiverPresentation;
use crate::scalar::{rref_rows, sparse_merge, Field, FieldSpec, SparseVec, Subspace};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElem {
    pub source: usize,
    pub target: usize,
    /// Arrow word for presentation-derived algebras.
    pub word: Option<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Presentation,
    Table,
}

/// Structure of the degree-0 subalgebra.
#[derive(Clone, Debug, PartialEq)]
pub struct A0Data<F: Field> {
    /// Index in the degree-0 basis of the idempotent of each vertex.
    pub idempotents: Vec<usize>,
    /// Row-reduced basis of the Jacobson radical of `A_0`, in degree-0 coordinates.
    pub radical: Vec<Vec<F::Elem>>,
    pub semisimple: bool,
    pub basic: bool,
    /// Size of the matrix block of `A_0/J` containing each vertex.
    pub block_sizes: Vec<usize>,
}

/// Per-degree dimensions, total and per block `(source, target)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hilbert {
    pub total: Vec<usize>,
    /// `blocks[d][i][j] = dim e_i A_d e_j`.
    pub blocks: Vec<Vec<Vec<usize>>>,
}

#[derive(Debug)]
pub struct TruncatedAlgebra<F: Field> {
    field: F,
    vertex_names: Vec<String>,
    arrow_names: Vec<String>,
    top: usize,
    basis: Vec<Vec<BasisElem>>,
    /// `products[p][q][i * dim_q + j]` is `basis[p][i] * basis[q][j]`, for `p + q <= top`.
    products: Vec<Vec<Vec<SparseVec<F>>>>,
    idempotents: Vec<usize>,
    gen_degree_bound: usize,
    provenance: Provenance,
    /// Presented by degree-1 arrows and relations that are combinations of paths of length 2.
    quadratic: bool,
    /// Whether the radical of `A_0` is known to be spanned by the non-idempotent degree-0 basis elements.
    nilpotent_degree0_basis: bool,
    a0: OnceLock<std::result::Result<A0Data<F>, Error>>,
    index: OnceLock<TargetIndex>,
}

/// Basis elements grouped by target vertex, for free-module layouts.
#[derive(Debug)]
struct TargetIndex {
    /// `by_target[d][v]`: indices of basis elements of `A_d` with target `v`, ascending.
    by_target: Vec<Vec<Vec<usize>>>,
    /// `rank[d][i]`: position of element `i` in its target list.
    rank: Vec<Vec<usize>>,
}

fn path_cmp(a: &[usize], b: &[usize]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// Layer of the construction: normal monomials of one degree (and one
/// length, when degree-0 arrows force the length grading).
struct Layer {
    degree: usize,
    start: usize,
    len: usize,
}

struct Builder<'a, F: Field> {
    field: &'a F,
    pres: &'a QuiverPresentation,
    coefs: Vec<Vec<F::Elem>>,
    top: usize,
    cap: usize,
    by_length: bool,
    basis: Vec<Vec<BasisElem>>,
    /// `rmul[d][i][a]`: normal form of `basis[d][i] * arrow a`.
    rmul: Vec<Vec<Vec<Option<SparseVec<F>>>>>,
    /// Layer ranges per degree, indexed by length when `by_length`.
    layers: Vec<Vec<Layer>>,
}

impl<'a, F: Field> Builder<'a, F> {
    fn layer(&self, d: usize, len: usize) -> Option<&Layer> {
        if self.by_length {
            self.layers.get(d).and_then(|ls| ls.get(len))
        } else {
            self.layers.get(d).and_then(|ls| ls.first())
        }
    }

    /// `v * arrow` for a vector of degree `d`.
    fn times_arrow(&self, d: usize, v: &SparseVec<F>, a: usize) -> SparseVec<F> {
        let mut out: SparseVec<F> = Vec::new();
        for (i, c) in v {
            if let Some(w) = &self.rmul[d][*i][a] {
                out = sparse_merge(self.field, &out, c, w);
            }
        }
        out
    }

    /// Builds the layer of degree `d` (and length `len` when length-graded).
    fn build_layer(&mut self, d: usize, len: usize) -> Result<()> {
        let f = self.field;
        let arrows = &self.pres.arrows;
        // Candidates n*a with n normal in the predecessor layer.
        let mut cands: Vec<(usize, usize, usize, Vec<usize>)> = Vec::new(); // (pred degree, pred index, arrow, word)
        if len == 0 && self.by_length || (!self.by_length && d == 0) {
            // handled by caller
            unreachable!("vertex layer is built separately");
        }
        for (ai, a) in arrows.iter().enumerate() {
            if a.degree > d {
                continue;
            }
            let pd = d - a.degree;
            let pred = if self.by_length { self.layer(pd, len - 1) } else { self.layer(pd, 0) };
            let Some(pred) = pred else { continue };
            for i in pred.start..pred.start + pred.len {
                let b = &self.basis[pd][i];
                if b.target == a.source {
                    let mut w = b.word.clone().unwrap_or_default();
                    w.push(ai);
                    cands.push((pd, i, ai, w));
                }
            }
        }
        // Columns in descending path order: leading monomials become pivots.
        let mut order: Vec<usize> = (0..cands.len()).collect();
        order.sort_by(|&x, &y| path_cmp(&cands[y].3, &cands[x].3));
        let mut col_of = vec![0usize; cands.len()];
        for (c, &k) in order.iter().enumerate() {
            col_of[k] = c;
        }
        let mut cand_index = std::collections::HashMap::new();
        for (k, c) in cands.iter().enumerate() {
            cand_index.insert((c.0, c.1, c.2), col_of[k]);
        }
        // Kernel: images of u*r for normal u.
        let mut rows: Vec<Vec<F::Elem>> = Vec::new();
        for (ri, rel) in self.pres.relations.iter().enumerate() {
            let (rs, _rt, rdeg) = rel.shape(arrows);
            if rdeg > d {
                continue;
            }
            let rlen = rel.terms[0].path.len();
            if self.by_length && rlen > len {
                continue;
            }
            let ud = d - rdeg;
            let ul = if self.by_length { self.layer(ud, len - rlen) } else { self.layer(ud, 0) };
            let Some(ul) = ul else { continue };
            let (ustart, ulen) = (ul.start, ul.len);
            for u in ustart..ustart + ulen {
                if self.basis[ud][u].target != rs {
                    continue;
                }
                let mut row = vec![f.zero(); cands.len()];
                for (ti, term) in rel.terms.iter().enumerate() {
                    let c = &self.coefs[ri][ti];
                    let mut v: SparseVec<F> = vec![(u, f.one())];
                    let mut vd = ud;
                    for &b in &term.path[..term.path.len() - 1] {
                        v = self.times_arrow(vd, &v, b);
                        vd += arrows[b].degree;
                    }
                    let last = *term.path.last().unwrap();
                    for (i, x) in v {
                        let col = cand_index[&(vd, i, last)];
                        row[col] = f.add(&row[col], &f.mul(c, &x));
                    }
                }
                rows.push(row);
            }
        }
        let red = rref_rows(f, cands.len(), rows);
        let mut is_pivot = vec![false; cands.len()];
        for &p in &red.pivots {
            is_pivot[p] = true;
        }
        // Normal monomials, stored in ascending path order.
        let mut normal_cols: Vec<usize> = (0..cands.len()).filter(|&c| !is_pivot[c]).collect();
        normal_cols.reverse();
        let start = self.basis[d].len();
        let mut new_index = vec![usize::MAX; cands.len()];
        for (k, &c) in normal_cols.iter().enumerate() {
            new_index[c] = start + k;
        }
        if start + normal_cols.len() > self.cap {
            return Err(Error::CapExceeded { degree: d, dim: start + normal_cols.len(), cap: self.cap });
        }
        for &c in &normal_cols {
            let (_, _, _, w) = &cands[order[c]];
            let src = arrows[w[0]].source;
            let tgt = arrows[*w.last().unwrap()].target;
            self.basis[d].push(BasisElem { source: src, target: tgt, word: Some(w.clone()) });
            self.rmul[d].push(vec![None; arrows.len()]);
        }
        let mut pivot_row = vec![usize::MAX; cands.len()];
        for (r, &p) in red.pivots.iter().enumerate() {
            pivot_row[p] = r;
        }
        for (k, cand) in cands.iter().enumerate() {
            let c = col_of[k];
            let nf: SparseVec<F> = if !is_pivot[c] {
                vec![(new_index[c], f.one())]
            } else {
                let row = &red.echelon[pivot_row[c]];
                let mut v: SparseVec<F> = normal_cols
                    .iter()
                    .filter(|&&nc| !f.is_zero(&row[nc]))
                    .map(|&nc| (new_index[nc], f.neg(&row[nc])))
                    .collect();
                v.sort_by_key(|e| e.0);
                v
            };
            self.rmul[cand.0][cand.1][cand.2] = Some(nf);
        }
        self.layers[d].push(Layer { degree: d, start, len: normal_cols.len() });
        Ok(())
    }
}

impl<F: Field> TruncatedAlgebra<F> {
    /// Builds `A_0, ..., A_top` from a presentation.
    pub fn build(field: &F, pres: &QuiverPresentation, top: usize, cap: usize) -> Result<Self> {
        if cap == 0 {
            return Err(Error::BadInput("dimension cap must be positive".into()));
        }
        if field.spec() != pres.field {
            return Err(Error::BadInput(format!("field mismatch: {:?} vs {:?}", field.spec(), pres.field)));
        }
        let by_length = pres.has_degree0_arrows();
        if by_length {
            if let Some((ri, _)) = pres.relations.iter().enumerate().find(|(_, r)| !r.is_length_homogeneous()) {
                return Err(Error::Degree0Blowup(format!(
                    "relation {ri} mixes path lengths; with degree-0 arrows present only length-homogeneous relations are supported"
                )));
            }
        }
        let mut coefs = Vec::new();
        for rel in &pres.relations {
            let mut cs = Vec::new();
            for t in &rel.terms {
                cs.push(field.from_ratio(t.coef.numer(), t.coef.denom()).ok_or_else(|| {
                    Error::BadInput(format!("coefficient {} is undefined in the base field", t.coef))
                })?);
            }
            coefs.push(cs);
        }
        let nv = pres.vertices.len();
        let na = pres.arrows.len();
        let mut b = Builder {
            field,
            pres,
            coefs,
            top,
            cap,
            by_length,
            basis: vec![Vec::new(); top + 1],
            rmul: vec![Vec::new(); top + 1],
            layers: (0..=top).map(|_| Vec::new()).collect(),
        };
        for v in 0..nv {
            b.basis[0].push(BasisElem { source: v, target: v, word: Some(Vec::new()) });
            b.rmul[0].push(vec![None; na]);
        }
        if nv > cap {
            return Err(Error::CapExceeded { degree: 0, dim: nv, cap });
        }
        b.layers[0].push(Layer { degree: 0, start: 0, len: nv });
        let mut l0 = 1;
        if by_length {
            loop {
                let before = b.basis[0].len();
                b.build_layer(0, l0).map_err(|e| match e {
                    Error::CapExceeded { .. } => {
                        Error::Degree0Blowup(format!("degree-0 part exceeds {cap} basis elements at path length {l0}"))
                    }
                    other => other,
                })?;
                if b.basis[0].len() == before {
                    break;
                }
                l0 += 1;
                if l0 > cap + 1 {
                    return Err(Error::Degree0Blowup(format!("degree-0 paths of length {l0} remain nonzero")));
                }
            }
        }
        for d in 1..=b.top {
            if by_length {
                let lmax = d + (d + 1) * (l0 - 1);
                // Lengths below the first arrow layer are empty; keep indices aligned.
                b.layers[d].push(Layer { degree: d, start: 0, len: 0 });
                for len in 1..=lmax {
                    b.build_layer(d, len)?;
                }
            } else {
                b.build_layer(d, 1)?;
            }
        }
        debug_assert!(b.layers.iter().flatten().all(|l| l.degree <= b.top));
        let basis = b.basis;
        let rmul = b.rmul;
        let arrows = &pres.arrows;
        // Products from iterated right multiplication along the right factor's word.
        let mut products: Vec<Vec<Vec<SparseVec<F>>>> = Vec::with_capacity(top + 1);
        for p in 0..=top {
            let mut row = Vec::with_capacity(top + 1 - p);
            for q in 0..=top - p {
                let mut tab = Vec::with_capacity(basis[p].len() * basis[q].len());
                for (i, bi) in basis[p].iter().enumerate() {
                    for bj in &basis[q] {
                        if bi.target != bj.source {
                            tab.push(Vec::new());
                            continue;
                        }
                        let mut v: SparseVec<F> = vec![(i, field.one())];
                        let mut vd = p;
                        for &a in bj.word.as_ref().unwrap() {
                            let mut out: SparseVec<F> = Vec::new();
                            for (k, c) in &v {
                                if let Some(w) = &rmul[vd][*k][a] {
                                    out = sparse_merge(field, &out, c, w);
                                }
                            }
                            v = out;
                            vd += arrows[a].degree;
                        }
                        tab.push(v);
                    }
                }
                row.push(tab);
            }
            products.push(row);
        }
        let gen_degree_bound = pres.arrows.iter().map(|a| a.degree).max().unwrap_or(1).max(1);
        Ok(TruncatedAlgebra {
            field: field.clone(),
            vertex_names: pres.vertices.clone(),
            arrow_names: pres.arrows.iter().map(|a| a.name.clone()).collect(),
            top,
            basis,
            products,
            idempotents: (0..nv).collect(),
            gen_degree_bound,
            provenance: Provenance::Presentation,
            quadratic: pres.arrows.iter().all(|a| a.degree == 1) && pres.relations.iter().all(|r| r.terms.iter().all(|t| t.path.len() == 2)),
            nilpotent_degree0_basis: true,
            a0: OnceLock::new(),
            index: OnceLock::new(),
        })
    }

    /// Builds an algebra directly from structure constants.
    #[allow(clippy::too_many_arguments)]
    pub fn from_tables(
        field: &F,
        vertex_names: Vec<String>,
        basis: Vec<Vec<BasisElem>>,
        products: Vec<Vec<Vec<SparseVec<F>>>>,
        idempotents: Vec<usize>,
        gen_degree_bound: usize,
        nilpotent_degree0_basis: bool,
    ) -> Result<Self> {
        let top = basis.len().checked_sub(1).ok_or_else(|| Error::BadInput("empty basis table".into()))?;
        if products.len() != top + 1 || products.iter().enumerate().any(|(p, r)| r.len() != top + 1 - p) {
            return Err(Error::BadInput("product table shape does not match the basis".into()));
        }
        for p in 0..=top {
            for q in 0..=top - p {
                if products[p][q].len() != basis[p].len() * basis[q].len() {
                    return Err(Error::BadInput(format!("product table ({p},{q}) has the wrong size")));
                }
            }
        }
        if idempotents.len() != vertex_names.len() || idempotents.iter().any(|&i| i >= basis[0].len()) {
            return Err(Error::BadInput("idempotent list does not match the vertices".into()));
        }
        Ok(TruncatedAlgebra {
            field: field.clone(),
            vertex_names,
            arrow_names: Vec::new(),
            top,
            basis,
            products,
            idempotents,
            gen_degree_bound: gen_degree_bound.max(1),
            provenance: Provenance::Table,
            quadratic: false,
            nilpotent_degree0_basis,
            a0: OnceLock::new(),
            index: OnceLock::new(),
        })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn field_spec(&self) -> FieldSpec {
        self.field.spec()
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// Every algebra generator lies in degree at most this bound.
    pub fn gen_degree_bound(&self) -> usize {
        self.gen_degree_bound
    }

    pub fn dim(&self, d: usize) -> usize {
        self.basis.get(d).map_or(0, Vec::len)
    }

    pub fn basis(&self, d: usize) -> &[BasisElem] {
        &self.basis[d]
    }

    fn target_index(&self) -> &TargetIndex {
        self.index.get_or_init(|| {
            let nv = self.num_vertices();
            let mut by_target = Vec::with_capacity(self.top + 1);
            let mut rank = Vec::with_capacity(self.top + 1);
            for row in &self.basis {
                let mut lists = vec![Vec::new(); nv];
                let mut r = Vec::with_capacity(row.len());
                for (i, b) in row.iter().enumerate() {
                    r.push(lists[b.target].len());
                    lists[b.target].push(i);
                }
                by_target.push(lists);
                rank.push(r);
            }
            TargetIndex { by_target, rank }
        })
    }

    /// Indices of the basis elements of `A_d` with target `v`, i.e. a basis of `A_d e_v`.
    pub fn with_target(&self, d: usize, v: usize) -> &[usize] {
        &self.target_index().by_target[d][v]
    }

    /// Position of basis element `i` of `A_d` within [`Self::with_target`].
    pub fn target_rank(&self, d: usize, i: usize) -> usize {
        self.target_index().rank[d][i]
    }

    pub fn idempotent(&self, v: usize) -> usize {
        self.idempotents[v]
    }

    pub fn idempotents(&self) -> &[usize] {
        &self.idempotents
    }

    /// Product of two basis elements; `p + q <= top`.
    pub fn mul_basis(&self, p: usize, i: usize, q: usize, j: usize) -> &SparseVec<F> {
        &self.products[p][q][i * self.basis[q].len() + j]
    }

    /// Product of two vectors of degrees `p` and `q`.
    pub fn mul(&self, p: usize, a: &[F::Elem], q: usize, b: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        let mut out = vec![f.zero(); self.dim(p + q)];
        for (i, x) in a.iter().enumerate() {
            if f.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if f.is_zero(y) {
                    continue;
                }
                let c = f.mul(x, y);
                for (k, z) in self.mul_basis(p, i, q, j) {
                    out[*k] = f.add(&out[*k], &f.mul(&c, z));
                }
            }
        }
        out
    }

    /// Human-readable name of a basis element.
    pub fn elem_name(&self, d: usize, i: usize) -> String {
        let b = &self.basis[d][i];
        match &b.word {
            Some(w) if w.is_empty() => format!("e_{}", self.vertex_names[b.source]),
            Some(w) if !self.arrow_names.is_empty() => {
                w.iter().map(|&a| self.arrow_names[a].as_str()).collect::<Vec<_>>().join("*")
            }
            _ => format!("b{d}_{i}[{}->{}]", self.vertex_names[b.source], self.vertex_names[b.target]),
        }
    }

    pub fn hilbert(&self) -> Hilbert {
        let n = self.num_vertices();
        let mut blocks = Vec::with_capacity(self.top + 1);
        for d in 0..=self.top {
            let mut m = vec![vec![0; n]; n];
            for b in &self.basis[d] {
                m[b.source][b.target] += 1;
            }
            blocks.push(m);
        }
        Hilbert { total: (0..=self.top).map(|d| self.dim(d)).collect(), blocks }
    }

    /// The same algebra truncated at a lower degree.
    pub fn truncate(&self, top: usize) -> Self {
        let top = top.min(self.top);
        TruncatedAlgebra {
            field: self.field.clone(),
            vertex_names: self.vertex_names.clone(),
            arrow_names: self.arrow_names.clone(),
            top,
            basis: self.basis[..=top].to_vec(),
            products: (0..=top).map(|p| self.products[p][..=top - p].to_vec()).collect(),
            idempotents: self.idempotents.clone(),
            gen_degree_bound: self.gen_degree_bound,
            provenance: self.provenance,
            quadratic: self.quadratic,
            nilpotent_degree0_basis: self.nilpotent_degree0_basis,
            a0: OnceLock::new(),
            index: OnceLock::new(),
        }
    }

    /// The opposite algebra: same basis, blocks swapped, products transposed.
    pub fn opposite(&self) -> Self {
        let basis: Vec<Vec<BasisElem>> = self
            .basis
            .iter()
            .map(|row| {
                row.iter()
                    .map(|b| BasisElem {
                        source: b.target,
                        target: b.source,
                        word: b.word.as_ref().map(|w| w.iter().rev().copied().collect()),
                    })
                    .collect()
            })
            .collect();
        let mut products = Vec::with_capacity(self.top + 1);
        for p in 0..=self.top {
            let mut row = Vec::with_capacity(self.top + 1 - p);
            for q in 0..=self.top - p {
                let (dp, dq) = (self.dim(p), self.dim(q));
                let mut tab = Vec::with_capacity(dp * dq);
                for i in 0..dp {
                    for j in 0..dq {
                        tab.push(self.products[q][p][j * dp + i].clone());
                    }
                }
                row.push(tab);
            }
            products.push(row);
        }
        TruncatedAlgebra {
            field: self.field.clone(),
            vertex_names: self.vertex_names.clone(),
            arrow_names: self.arrow_names.clone(),
            top: self.top,
            basis,
            products,
            idempotents: self.idempotents.clone(),
            gen_degree_bound: self.gen_degree_bound,
            provenance: self.provenance,
            quadratic: self.quadratic,
            nilpotent_degree0_basis: self.nilpotent_degree0_basis,
            a0: OnceLock::new(),
            index: OnceLock::new(),
        }
    }

    /// Whether two algebras have identical bases and structure constants.
    pub fn same_tables(&self, other: &Self) -> bool {
        self.top == other.top
            && self.idempotents == other.idempotents
            && self.basis.iter().zip(&other.basis).all(|(a, b)| {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.source == y.source && x.target == y.target)
            })
            && self.products == other.products
    }

    /// Whether the quadratic relations form a Gröbner basis for the deglex order
    /// on arrows, which makes the algebra Koszul.
    ///
    /// For quadratic relations every ambiguity has length 3, so it suffices
    /// that the words of length 3 avoiding leading words span `A_3` freely.
    pub fn koszul_certificate(&self) -> bool {
        if !self.quadratic || self.top < 3 {
            return false;
        }
        let arrows = &self.basis[1];
        if arrows.iter().any(|b| b.word.as_ref().is_none_or(|w| w.len() != 1)) {
            return false;
        }
        let f = &self.field;
        let na = arrows.len();
        // Composable pairs in decreasing order, so that each pivot is a leading word.
        let mut pairs: Vec<(usize, usize)> =
            (0..na).flat_map(|i| (0..na).map(move |j| (i, j))).filter(|&(i, j)| arrows[i].target == arrows[j].source).collect();
        pairs.reverse();
        let d2 = self.dim(2);
        let cols: Vec<Vec<F::Elem>> = (0..d2)
            .map(|k| {
                pairs
                    .iter()
                    .map(|&(i, j)| {
                        self.products[1][1][i * na + j].iter().find(|(c, _)| *c == k).map_or_else(|| f.zero(), |(_, v)| v.clone())
                    })
                    .collect()
            })
            .collect();
        let relations = rref_rows(f, pairs.len(), cols).kernel;
        let leading = rref_rows(f, pairs.len(), relations).pivots;
        let is_leading = |i: usize, j: usize| leading.iter().any(|&p| pairs[p] == (i, j));
        let mut normal = 0;
        for &(i, j) in &pairs {
            if is_leading(i, j) {
                continue;
            }
            normal += (0..na).filter(|&k| arrows[j].target == arrows[k].source && !is_leading(j, k)).count();
        }
        normal == self.dim(3)
    }

    /// Structure of `A_0`: idempotents, radical, semisimplicity and basicness.
    pub fn a0_structure(&self) -> Result<&A0Data<F>> {
        self.a0.get_or_init(|| self.compute_a0()).as_ref().map_err(Clone::clone)
    }

    fn compute_a0(&self) -> Result<A0Data<F>> {
        let f = &self.field;
        let n0 = self.dim(0);
        let nv = self.num_vertices();
        let unit = |i: usize| {
            let mut v = vec![f.zero(); n0];
            v[i] = f.one();
            v
        };
        let non_idem: Vec<usize> = (0..n0).filter(|i| !self.idempotents.contains(i)).collect();
        let char_ok = match f.spec() {
            FieldSpec::Rationals => true,
            FieldSpec::PrimeField(p) => (p as usize) > n0,
        };
        let radical: Vec<Vec<F::Elem>> = if non_idem.is_empty() {
            Vec::new()
        } else if char_ok {
            // Kernel of the trace form (x, y) -> tr(L_{xy}).
            let lmul = |x: usize| -> Vec<Vec<F::Elem>> {
                (0..n0)
                    .map(|j| {
                        let mut col = vec![f.zero(); n0];
                        for (k, c) in self.mul_basis(0, x, 0, j) {
                            col[*k] = c.clone();
                        }
                        col
                    })
                    .collect()
            };
            let trace_of = |v: &[F::Elem]| -> F::Elem {
                let mut t = f.zero();
                for (k, c) in v.iter().enumerate() {
                    if f.is_zero(c) {
                        continue;
                    }
                    let m = lmul(k);
                    let mut tr = f.zero();
                    for (j, col) in m.iter().enumerate() {
                        tr = f.add(&tr, &col[j]);
                    }
                    t = f.add(&t, &f.mul(c, &tr));
                }
                t
            };
            let mut gram = Vec::with_capacity(n0);
            for x in 0..n0 {
                let mut row = Vec::with_capacity(n0);
                for y in 0..n0 {
                    row.push(trace_of(&self.mul(0, &unit(x), 0, &unit(y))));
                }
                gram.push(row);
            }
            let r = rref_rows(f, n0, gram);
            Subspace::span(f, n0, r.kernel).basis().to_vec()
        } else if self.nilpotent_degree0_basis {
            non_idem.iter().map(|&i| unit(i)).collect()
        } else {
            return Err(Error::RadicalUnsupported(format!(
                "characteristic {} does not exceed dim A_0 = {n0}",
                f.spec().characteristic()
            )));
        };
        // dim e_i (A_0/J) e_j = dim e_i A_0 e_j - dim e_i J e_j.
        let mut quot = vec![vec![0usize; nv]; nv];
        for b in &self.basis[0] {
            quot[b.source][b.target] += 1;
        }
        for i in 0..nv {
            for j in 0..nv {
                let proj: Vec<Vec<F::Elem>> = radical
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .map(|(k, x)| {
                                let b = &self.basis[0][k];
                                if b.source == i && b.target == j {
                                    x.clone()
                                } else {
                                    f.zero()
                                }
                            })
                            .collect()
                    })
                    .collect();
                quot[i][j] -= rref_rows(f, n0, proj).rank;
            }
        }
        let mut basic = true;
        let mut block_sizes = vec![1; nv];
        for i in 0..nv {
            if quot[i][i] != 1 {
                basic = false;
            }
            let linked = (0..nv).filter(|&j| j == i || quot[i][j] != 0 || quot[j][i] != 0).count();
            block_sizes[i] = linked;
            if linked > 1 {
                basic = false;
            }
        }
        Ok(A0Data { idempotents: self.idempotents.clone(), semisimple: radical.is_empty(), radical, basic, block_sizes })
    }

    /// Algebra of degree-0 graded endomorphisms of `⊕ A e_i(p_i)`, written on
    /// the right so that the zero shift gives back `A` itself.
    ///
    /// Block `(i, j)` of `B_d` is `e_i A_{d + p_j - p_i} e_j`.
    pub fn endo_twist(&self, shifts: &[i64]) -> Result<Self> {
        let nv = self.num_vertices();
        if shifts.len() != nv {
            return Err(Error::BadInput(format!("expected {nv} shifts, got {}", shifts.len())));
        }
        let a0 = self.a0_structure()?;
        if !a0.basic {
            return Err(Error::NotBasic("endo_twist requires a basic algebra".into()));
        }
        let lo = *shifts.iter().min().unwrap();
        let hi = *shifts.iter().max().unwrap();
        let spread = (hi - lo) as usize;
        if spread > self.top {
            return Err(Error::WindowTooSmall(format!("shift spread {spread} exceeds the truncation degree {}", self.top)));
        }
        let top_b = self.top - spread;
        let bdeg = |a_deg: usize, i: usize, j: usize| a_deg as i64 - shifts[j] + shifts[i];
        for d in 0..=self.top {
            for b in &self.basis[d] {
                let e = bdeg(d, b.source, b.target);
                if e < 0 {
                    return Err(Error::NotNNGraded(format!(
                        "block ({}, {}) of degree {d} in A lands in degree {e}",
                        self.vertex_names[b.source], self.vertex_names[b.target]
                    )));
                }
            }
        }
        // loc[e] lists (A degree, A index) of the basis of B_e.
        let mut loc: Vec<Vec<(usize, usize)>> = vec![Vec::new(); top_b + 1];
        let mut index_of = std::collections::HashMap::new();
        for d in 0..=self.top {
            for (k, b) in self.basis[d].iter().enumerate() {
                let e = bdeg(d, b.source, b.target) as usize;
                if e <= top_b {
                    index_of.insert((d, k), (e, loc[e].len()));
                    loc[e].push((d, k));
                }
            }
        }
        let basis: Vec<Vec<BasisElem>> = loc
            .iter()
            .map(|row| row.iter().map(|&(d, k)| BasisElem { word: None, ..self.basis[d][k].clone() }).collect())
            .collect();
        let mut products = Vec::with_capacity(top_b + 1);
        for p in 0..=top_b {
            let mut row = Vec::with_capacity(top_b + 1 - p);
            for q in 0..=top_b - p {
                let mut tab = Vec::with_capacity(loc[p].len() * loc[q].len());
                for &(da, ka) in &loc[p] {
                    for &(db, kb) in &loc[q] {
                        let prod = self.mul_basis(da, ka, db, kb);
                        let mut v: SparseVec<F> = prod
                            .iter()
                            .map(|(k, c)| {
                                let (e, idx) = index_of[&(da + db, *k)];
                                debug_assert_eq!(e, p + q);
                                (idx, c.clone())
                            })
                            .collect();
                        v.sort_by_key(|x| x.0);
                        tab.push(v);
                    }
                }
                row.push(tab);
            }
            products.push(row);
        }
        let idempotents = (0..nv).map(|v| index_of[&(0, self.idempotents[v])].1).collect();
        let mut b = Self::from_tables(
            &self.field,
            self.vertex_names.clone(),
            basis,
            products,
            idempotents,
            self.gen_degree_bound + spread,
            self.nilpotent_degree0_basis,
        )?;
        b.arrow_names = self.arrow_names.clone();
        Ok(b)
    }

    /// Checks `(ab)c = a(bc)` on all basis triples within the window.
    pub fn check_associativity(&self) -> bool {
        let f = &self.field;
        for p in 0..=self.top {
            for q in 0..=self.top - p {
                for r in 0..=self.top - p - q {
                    for i in 0..self.dim(p) {
                        for j in 0..self.dim(q) {
                            let ab = self.mul_basis(p, i, q, j);
                            for k in 0..self.dim(r) {
                                let mut left: SparseVec<F> = Vec::new();
                                for (x, c) in ab {
                                    left = sparse_merge(f, &left, c, self.mul_basis(p + q, *x, r, k));
                                }
                                let mut right: SparseVec<F> = Vec::new();
                                for (y, c) in self.mul_basis(q, j, r, k) {
                                    let mut t: SparseVec<F> = Vec::new();
                                    t = sparse_merge(f, &t, c, self.mul_basis(p, i, q + r, *y));
                                    right = sparse_merge(f, &right, &f.one(), &t);
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

    /// Checks the unit and block laws on every basis element.
    pub fn check_unit_and_blocks(&self) -> bool {
        let f = &self.field;
        for d in 0..=self.top {
            for (i, b) in self.basis[d].iter().enumerate() {
                for v in 0..self.num_vertices() {
                    let e = self.idempotents[v];
                    let left = self.mul_basis(0, e, d, i);
                    let right = self.mul_basis(d, i, 0, e);
                    let want = |hit: bool| if hit { vec![(i, f.one())] } else { Vec::new() };
                    if *left != want(b.source == v) || *right != want(b.target == v) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Shared handle to an algebra.
pub type AlgebraRef<F> = Arc<TruncatedAlgebra<F>>;

/// Default bound on `dim A_d` when building truncations.
pub const DEFAULT_CAP: usize = 100_000;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::scalar::{Fp, Rationals};

    fn fp() -> Fp {
        Fp::new(32003).unwrap()
    }

    fn build(name: &str, top: usize) -> TruncatedAlgebra<Fp> {
        let pres = catalog::presentation(name, FieldSpec::DEFAULT).unwrap();
        TruncatedAlgebra::build(&fp(), &pres, top, 10_000).unwrap()
    }

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn polynomial_ring_dimensions_match_monomial_count() {
        let a = build("poly2", 4);
        let oracle: Vec<usize> = (0..=4).map(|d| (0..=d).count()).collect();
        assert_eq!(a.hilbert().total, oracle);
        let a3 = build("poly3", 5);
        let oracle3: Vec<usize> = (0..=5).map(|d| binom(d + 2, 2)).collect();
        assert_eq!(a3.hilbert().total, oracle3);
    }

    #[test]
    fn quantum_plane_over_f5_has_pbw_dimensions() {
        let f5 = Fp::new(5).unwrap();
        let pres = catalog::presentation("qplane", FieldSpec::PrimeField(5)).unwrap();
        let a = TruncatedAlgebra::build(&f5, &pres, 3, 100).unwrap();
        assert_eq!(a.hilbert().total, vec![1, 2, 3, 4]);
        assert!(a.check_associativity());
    }

    #[test]
    fn koszul_certificate_on_quadratic_gbs() {
        for name in ["poly2", "poly3", "qplane", "jordan", "ext2", "dualnum", "kron2"] {
            assert!(build(name, 4).koszul_certificate(), "{name}");
        }
        assert!(!build("poly2", 2).koszul_certificate());
        assert!(!build("a0loop", 4).koszul_certificate());
        let cubic = QuiverPresentation::parse(
            r#"{"field": {"Fp": 32003}, "vertices": ["1"], "arrows": [{"name": "x", "from": "1", "to": "1", "deg": 1}],
                "relations": [[{"coef": "1", "path": ["x", "x", "x"]}]]}"#,
        )
        .unwrap();
        assert!(!TruncatedAlgebra::build(&fp(), &cubic, 5, 100).unwrap().koszul_certificate());
    }

    #[test]
    fn dual_numbers_and_exterior_algebra() {
        assert_eq!(build("dualnum", 5).hilbert().total, vec![1, 1, 0, 0, 0, 0]);
        assert_eq!(build("ext2", 4).hilbert().total, vec![1, 2, 1, 0, 0]);
    }

    #[test]
    fn opposite_of_quantum_plane_inverts_q() {
        let f5 = Fp::new(5).unwrap();
        let pres = catalog::presentation("qplane", FieldSpec::PrimeField(5)).unwrap();
        let a = TruncatedAlgebra::build(&f5, &pres, 3, 100).unwrap();
        let o = a.opposite();
        // Locate x and y in degree 1 of the opposite algebra.
        let x = a.basis(1).iter().position(|b| b.word.as_deref() == Some(&[0][..])).unwrap();
        let y = a.basis(1).iter().position(|b| b.word.as_deref() == Some(&[1][..])).unwrap();
        let e = |i: usize| {
            let mut v = vec![0u32; 2];
            v[i] = 1;
            v
        };
        let yx = o.mul(1, &e(y), 1, &e(x));
        let xy = o.mul(1, &e(x), 1, &e(y));
        let diff: Vec<u32> = yx.iter().zip(&xy).map(|(a, b)| f5.sub(a, &f5.mul(&3, b))).collect();
        assert!(diff.iter().all(|&c| c == 0));
        assert!(o.opposite().same_tables(&a));
    }

    #[test]
    fn commutative_opposite_is_identical() {
        let a = build("poly2", 4);
        assert!(a.opposite().same_tables(&a));
    }

    #[test]
    fn a0_of_arrow_quiver_is_semisimple_basic() {
        let a = build("kron2", 3);
        let d = a.a0_structure().unwrap();
        assert_eq!(d.idempotents.len(), 2);
        assert!(d.semisimple && d.basic);
        let dn = build("dualnum", 3);
        assert!(dn.a0_structure().unwrap().semisimple);
    }

    #[test]
    fn degree0_loop_has_radical() {
        let a = build("a0loop", 3);
        let d = a.a0_structure().unwrap();
        assert_eq!(d.radical.len(), 1);
        assert!(!d.semisimple);
        assert!(d.basic);
        assert_eq!(a.dim(0), 2);
    }

    #[test]
    fn trace_form_radical_needs_large_characteristic() {
        let f2 = Fp::new(2).unwrap();
        let pres = catalog::presentation("a0loop", FieldSpec::PrimeField(2)).unwrap();
        let a = TruncatedAlgebra::build(&f2, &pres, 2, 100).unwrap();
        // Presentation-derived: the nilpotent path basis gives the radical in any characteristic.
        assert_eq!(a.a0_structure().unwrap().radical.len(), 1);
        let t = TruncatedAlgebra::from_tables(
            &f2,
            a.vertex_names().to_vec(),
            a.basis.clone(),
            a.products.clone(),
            a.idempotents.clone(),
            1,
            false,
        )
        .unwrap();
        assert!(matches!(t.a0_structure(), Err(Error::RadicalUnsupported(_))));
    }

    #[test]
    fn mixed_length_degree0_relation_is_rejected() {
        let doc = r#"{"field":{"Fp":32003},"vertices":["1"],"arrows":[{"name":"e","from":"1","to":"1","deg":0}],
            "relations":[[{"coef":"1","path":["e","e"]},{"coef":"-1","path":["e"]}]]}"#;
        let pres = QuiverPresentation::parse(doc).unwrap();
        assert!(matches!(TruncatedAlgebra::build(&fp(), &pres, 2, 100), Err(Error::Degree0Blowup(_))));
    }

    #[test]
    fn free_degree0_loop_blows_up() {
        let doc = r#"{"field":{"Fp":32003},"vertices":["1"],"arrows":[{"name":"e","from":"1","to":"1","deg":0}],"relations":[]}"#;
        let pres = QuiverPresentation::parse(doc).unwrap();
        assert!(matches!(TruncatedAlgebra::build(&fp(), &pres, 2, 50), Err(Error::Degree0Blowup(_))));
    }

    #[test]
    fn cap_is_enforced() {
        let pres = catalog::presentation("poly2", FieldSpec::DEFAULT).unwrap();
        assert!(matches!(
            TruncatedAlgebra::build(&fp(), &pres, 6, 5),
            Err(Error::CapExceeded { degree: 5, dim: 6, cap: 5 })
        ));
    }

    #[test]
    fn twist_by_zero_is_identity_on_tables() {
        for name in catalog::NAMES {
            let a = build(name, 4);
            let zero = vec![0; a.num_vertices()];
            let b = a.endo_twist(&zero).unwrap();
            assert_eq!(b.hilbert(), a.hilbert(), "{name}");
            assert_eq!(b.products, a.products, "{name}");
        }
    }

    #[test]
    fn twist_of_kronecker_adds_arrows_to_degree_zero() {
        let a = build("kron2", 4);
        let b = a.endo_twist(&[0, 1]).unwrap();
        assert_eq!(b.dim(0), a.dim(0) + 2);
        assert!(b.check_associativity());
        let d = b.a0_structure().unwrap();
        assert_eq!(d.radical.len(), 2);
        assert!(d.basic);
        assert!(matches!(a.endo_twist(&[0, 2]), Err(Error::NotNNGraded(_))));
        assert_eq!(a.endo_twist(&[1, 0]).unwrap().dim(2), a.dim(2) + 2);
    }

    #[test]
    fn single_vertex_twist_is_trivial() {
        let a = build("qplane", 4);
        let b = a.endo_twist(&[5]).unwrap();
        assert_eq!(b.products, a.products);
    }

    #[test]
    fn rationals_agree_with_prime_field_dimensions() {
        for name in ["poly2", "jordan", "tri2", "ext2"] {
            let pq = catalog::presentation(name, FieldSpec::Rationals).unwrap();
            let aq = TruncatedAlgebra::build(&Rationals, &pq, 4, 1000).unwrap();
            assert_eq!(aq.hilbert(), build(name, 4).hilbert(), "{name}");
            assert!(aq.check_associativity());
        }
    }

    #[test]
    fn catalog_algebras_satisfy_axioms() {
        for name in catalog::NAMES {
            let a = build(name, 4);
            assert!(a.check_associativity(), "{name}");
            assert!(a.check_unit_and_blocks(), "{name}");
            let h = a.hilbert();
            let ho = a.opposite().hilbert();
            for d in 0..=4 {
                for i in 0..a.num_vertices() {
                    for j in 0..a.num_vertices() {
                        assert_eq!(h.blocks[d][i][j], ho.blocks[d][j][i]);
                    }
                }
            }
        }
    }

    #[test]
    fn jordan_plane_has_pbw_dimensions() {
        assert_eq!(build("jordan", 5).hilbert().total, vec![1, 2, 3, 4, 5, 6]);
    }

    #[test]
    fn triangular_algebra_dimensions() {
        // e1 A e1 = k[x], e2 A e2 = k[y], e1 A_d e2 spanned by x^i a y^j with xa = ay: one per degree.
        let h = build("tri2", 4).hilbert();
        for d in 0..=4 {
            assert_eq!(h.blocks[d][0][0], 1);
            assert_eq!(h.blocks[d][1][1], 1);
            assert_eq!(h.blocks[d][0][1], usize::from(d >= 1));
            assert_eq!(h.blocks[d][1][0], 0);
        }
    }
}
