//! Right modules over split basic algebras.
//!
//! A module is stored vertex by vertex: `M = ⊕_v M e_v`, and each radical
//! basis element `b` from `s` to `t` acts by a block `M_s -> M_t`
//! (`dims[t] x dims[s]`, acting on column vectors: `act(b) m = m·b`).
//! Idempotents act as identities on their own vertex and are not stored.

use std::borrow::Cow;
use std::fmt;
use std::sync::{Arc, OnceLock};

use rand::Rng;
use thiserror::Error;

use crate::algebra::Algebra;
use crate::linalg::{Fp, Matrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuleError {
    #[error("modules live over different algebras")]
    AlgebraMismatch,
    #[error("no vertex {0}")]
    BadVertex(usize),
    #[error("action data has the wrong shape: {0}")]
    Shape(String),
    #[error("action does not respect the multiplication: {0}")]
    NotAModule(String),
    #[error("map does not intertwine the actions")]
    NotAHomomorphism,
    #[error("algebra has no quiver presentation")]
    NoQuiver,
}

struct ModuleData {
    alg: Algebra,
    dims: Vec<usize>,
    offsets: Vec<usize>,
    acts: Vec<Matrix>,
    cover: OnceLock<Arc<Cover>>,
}

#[derive(Clone)]
pub struct Module {
    inner: Arc<ModuleData>,
}

impl PartialEq for Module {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.dims == other.inner.dims
                && self.inner.acts == other.inner.acts
                && self.inner.alg == other.inner.alg)
    }
}

impl Eq for Module {}

impl fmt::Debug for Module {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Module{:?}", self.inner.dims)
    }
}

/// Summand layout of a direct sum of indecomposable projectives.
#[derive(Clone, Debug)]
pub struct ProjLayout {
    pub tops: Vec<usize>,
    /// `offset[t][i]`: start of summand `i` inside vertex `t`
    pub offset: Vec<Vec<usize>>,
}

impl ProjLayout {
    /// Coordinates of summand `i` at vertex `t` as an algebra element.
    pub fn element_at(&self, alg: &Algebra, v: &[u32], i: usize, t: usize) -> Vec<u32> {
        let mut x = vec![0u32; alg.dim()];
        let off = self.offset[t][i];
        for (k, &b) in alg.basis_between(self.tops[i], t).iter().enumerate() {
            x[b] = v[off + k];
        }
        x
    }
}

/// Projective cover `P -> M` together with the syzygy `ΩM ⊆ P`.
pub struct Cover {
    pub layout: ProjLayout,
    /// lift in `M_{tops[i]}` of the `i`-th top basis vector
    pub lifts: Vec<Vec<u32>>,
    pub proj: Module,
    pub epi: ModuleMap,
    pub kernel: Module,
    pub incl: ModuleMap,
    /// right inverses of the epi blocks
    sections: Vec<Matrix>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMap {
    pub source: Module,
    pub target: Module,
    /// `blocks[v]`: `target.dims[v] x source.dims[v]`
    pub blocks: Vec<Matrix>,
}

fn unit_column(f: Fp, n: usize, i: usize) -> Matrix {
    let mut m = Matrix::zeros(f, n, 1);
    m.set(i, 0, 1);
    m
}

fn offsets_of(dims: &[usize]) -> Vec<usize> {
    let mut off = Vec::with_capacity(dims.len() + 1);
    let mut acc = 0;
    for &d in dims {
        off.push(acc);
        acc += d;
    }
    off.push(acc);
    off
}

impl Module {
    /// Validated constructor; `acts` is indexed by radical position.
    pub fn new(alg: &Algebra, dims: Vec<usize>, acts: Vec<Matrix>) -> Result<Module, ModuleError> {
        if dims.len() != alg.num_vertices() {
            return Err(ModuleError::Shape(format!("expected {} vertex dims", alg.num_vertices())));
        }
        if acts.len() != alg.radical().len() {
            return Err(ModuleError::Shape(format!("expected {} action blocks", alg.radical().len())));
        }
        for (pos, &b) in alg.radical().iter().enumerate() {
            let (s, t) = (alg.source(b), alg.target(b));
            let m = &acts[pos];
            if m.rows() != dims[t] || m.cols() != dims[s] || m.field() != alg.field() {
                return Err(ModuleError::Shape(format!(
                    "block for {} must be {}x{}",
                    alg.label(b),
                    dims[t],
                    dims[s]
                )));
            }
        }
        let m = Module::new_unchecked(alg, dims, acts);
        m.check_relations()?;
        Ok(m)
    }

    pub(crate) fn new_unchecked(alg: &Algebra, dims: Vec<usize>, acts: Vec<Matrix>) -> Module {
        let offsets = offsets_of(&dims);
        Module {
            inner: Arc::new(ModuleData { alg: alg.clone(), dims, offsets, acts, cover: OnceLock::new() }),
        }
    }

    fn check_relations(&self) -> Result<(), ModuleError> {
        let alg = self.algebra();
        let f = alg.field();
        for &i in alg.radical() {
            for &j in alg.radical() {
                if alg.target(i) != alg.source(j) {
                    continue;
                }
                let lhs = &*self.act(j) * &*self.act(i);
                let (s, t) = (alg.source(i), alg.target(j));
                let mut rhs = Matrix::zeros(f, self.dims()[t], self.dims()[s]);
                for &(k, c) in alg.mul_basis(i, j) {
                    rhs.add_scaled(&self.act(k), c);
                }
                if lhs != rhs {
                    return Err(ModuleError::NotAModule(format!("{} * {}", alg.label(i), alg.label(j))));
                }
            }
        }
        Ok(())
    }

    /// Module over a quiver algebra from one matrix per arrow.
    pub fn from_arrows(alg: &Algebra, dims: Vec<usize>, arrows: &[Matrix]) -> Result<Module, ModuleError> {
        let arrow_list = alg.arrows().ok_or(ModuleError::NoQuiver)?;
        if arrows.len() != arrow_list.len() {
            return Err(ModuleError::Shape(format!("expected {} arrow matrices", arrow_list.len())));
        }
        if dims.len() != alg.num_vertices() {
            return Err(ModuleError::Shape(format!("expected {} vertex dims", alg.num_vertices())));
        }
        for (a, m) in arrow_list.iter().zip(arrows) {
            if m.rows() != dims[a.target] || m.cols() != dims[a.source] {
                return Err(ModuleError::Shape(format!("arrow {} must be {}x{}", a.name, dims[a.target], dims[a.source])));
            }
        }
        let f = alg.field();
        let acts = alg
            .radical()
            .iter()
            .map(|&b| {
                let path = alg.basis_path(b).expect("quiver algebra");
                let first = arrow_list[path[0]].source;
                let mut m = Matrix::identity(f, dims[first]);
                for &a in &path {
                    m = &arrows[a] * &m;
                }
                m
            })
            .collect();
        Module::new(alg, dims, acts)
    }

    pub fn zero(alg: &Algebra) -> Module {
        let dims = vec![0; alg.num_vertices()];
        let f = alg.field();
        let acts = alg.radical().iter().map(|_| Matrix::zeros(f, 0, 0)).collect();
        Module::new_unchecked(alg, dims, acts)
    }

    /// Semisimple module with the given multiplicities.
    pub fn semisimple(alg: &Algebra, dims: Vec<usize>) -> Module {
        let f = alg.field();
        let acts = alg
            .radical()
            .iter()
            .map(|&b| Matrix::zeros(f, dims[alg.target(b)], dims[alg.source(b)]))
            .collect();
        Module::new_unchecked(alg, dims, acts)
    }

    pub fn simple(alg: &Algebra, v: usize) -> Result<Module, ModuleError> {
        if v >= alg.num_vertices() {
            return Err(ModuleError::BadVertex(v));
        }
        let mut dims = vec![0; alg.num_vertices()];
        dims[v] = 1;
        Ok(Module::semisimple(alg, dims))
    }

    /// `e_v A`.
    pub fn proj(alg: &Algebra, v: usize) -> Result<Module, ModuleError> {
        if v >= alg.num_vertices() {
            return Err(ModuleError::BadVertex(v));
        }
        Ok(proj_sum(alg, &[v]).0)
    }

    /// `D(A e_v)`.
    pub fn inj(alg: &Algebra, v: usize) -> Result<Module, ModuleError> {
        Ok(Module::proj(&alg.opposite(), v)?.dual())
    }

    pub fn regular(alg: &Algebra) -> Module {
        let tops: Vec<usize> = (0..alg.num_vertices()).collect();
        proj_sum(alg, &tops).0
    }

    pub fn algebra(&self) -> &Algebra {
        &self.inner.alg
    }

    pub fn field(&self) -> Fp {
        self.inner.alg.field()
    }

    pub fn dims(&self) -> &[usize] {
        &self.inner.dims
    }

    pub fn dim(&self) -> usize {
        *self.inner.offsets.last().unwrap()
    }

    pub fn offset(&self, v: usize) -> usize {
        self.inner.offsets[v]
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// Stored blocks, indexed by radical position.
    pub fn acts(&self) -> &[Matrix] {
        &self.inner.acts
    }

    /// Block of basis element `b`; identity for idempotents.
    pub fn act(&self, b: usize) -> Cow<'_, Matrix> {
        let alg = self.algebra();
        match alg.rad_position(b) {
            Some(pos) => Cow::Borrowed(&self.inner.acts[pos]),
            None => {
                let v = alg.vertex_of(b).unwrap();
                Cow::Owned(Matrix::identity(self.field(), self.dims()[v]))
            }
        }
    }

    /// `dim x dim` matrix of `b` on the whole module.
    pub fn full_action(&self, b: usize) -> Matrix {
        let alg = self.algebra();
        let (s, t) = (alg.source(b), alg.target(b));
        let mut m = Matrix::zeros(self.field(), self.dim(), self.dim());
        m.set_block(self.offset(t), self.offset(s), &self.act(b));
        m
    }

    /// `x · b` for `x` in `M_s`, `b` a basis element leaving `s`.
    pub fn apply_vec(&self, b: usize, x: &[u32]) -> Vec<u32> {
        let Some(pos) = self.algebra().rad_position(b) else {
            return x.to_vec();
        };
        let a = &self.inner.acts[pos];
        let p = self.field().modulus() as u64;
        (0..a.rows())
            .map(|i| (a.row(i).iter().zip(x).map(|(&u, &v)| u as u64 * v as u64 % p).sum::<u64>() % p) as u32)
            .collect()
    }

    /// `m · x` for an algebra element `x` and `m ∈ M_s`, landing in `M_t`.
    pub fn apply_element(&self, x: &[u32], s: usize, t: usize, m: &[u32]) -> Vec<u32> {
        let f = self.field();
        let mut out = vec![0u32; self.dims()[t]];
        for &b in self.algebra().basis_between(s, t) {
            if x[b] == 0 {
                continue;
            }
            let y = self.apply_vec(b, m);
            for (o, v) in out.iter_mut().zip(y) {
                *o = f.add(*o, f.mul(x[b], v));
            }
        }
        out
    }

    pub fn dual(&self) -> Module {
        let acts = self.acts().iter().map(|m| m.transpose()).collect();
        Module::new_unchecked(&self.algebra().opposite(), self.dims().to_vec(), acts)
    }

    pub fn direct_sum(mods: &[Module]) -> Module {
        Module::direct_sum_with_offsets(mods).0
    }

    /// Direct sum plus `offsets[k][v]`, the start of summand `k` in vertex `v`.
    pub fn direct_sum_with_offsets(mods: &[Module]) -> (Module, Vec<Vec<usize>>) {
        assert!(!mods.is_empty(), "direct sum of no modules; use Module::zero");
        let alg = mods[0].algebra().clone();
        let n = alg.num_vertices();
        let f = alg.field();
        let mut dims = vec![0; n];
        let mut offs = Vec::with_capacity(mods.len());
        for m in mods {
            assert!(m.algebra() == &alg, "direct sum over different algebras");
            offs.push(dims.clone());
            for v in 0..n {
                dims[v] += m.dims()[v];
            }
        }
        let acts = (0..alg.radical().len())
            .map(|pos| {
                let blocks: Vec<Matrix> = mods.iter().map(|m| m.acts()[pos].clone()).collect();
                Matrix::block_diagonal(f, &blocks)
            })
            .collect();
        (Module::new_unchecked(&alg, dims, acts), offs)
    }

    pub fn cover(&self) -> Arc<Cover> {
        self.inner.cover.get_or_init(|| Arc::new(compute_cover(self))).clone()
    }

    fn cached_cover(&self) -> Option<&Arc<Cover>> {
        self.inner.cover.get()
    }

    pub fn syzygy(&self, n: usize) -> Module {
        let mut m = self.clone();
        for _ in 0..n {
            m = m.cover().kernel.clone();
        }
        m
    }

    pub fn is_projective(&self) -> bool {
        self.cover().kernel.is_zero()
    }

    pub fn is_injective(&self) -> bool {
        self.dual().is_projective()
    }

    pub fn cosyzygy(&self, n: usize) -> Module {
        self.dual().syzygy(n).dual()
    }

    /// `M -> I(M)`.
    pub fn injective_envelope(&self) -> ModuleMap {
        let c = self.dual().cover();
        c.epi.dual()
    }

    /// Radical `M·rad A`, per vertex, as column bases.
    pub fn radical_subspace(&self) -> Vec<Matrix> {
        let alg = self.algebra();
        let f = self.field();
        (0..alg.num_vertices())
            .map(|t| {
                let mut acc = Matrix::zeros(f, self.dims()[t], 0);
                for &g in alg.generators() {
                    if alg.target(g) == t {
                        acc = acc.hstack(&self.act(g)).unwrap();
                    }
                }
                acc.column_space()
            })
            .collect()
    }

    /// Socle (vectors killed by the radical), per vertex.
    pub fn socle_subspace(&self) -> Vec<Matrix> {
        let alg = self.algebra();
        let f = self.field();
        (0..alg.num_vertices())
            .map(|s| {
                let mut acc = Matrix::zeros(f, 0, self.dims()[s]);
                for &g in alg.generators() {
                    if alg.source(g) == s {
                        acc = acc.vstack(&self.act(g)).unwrap();
                    }
                }
                acc.kernel_basis()
            })
            .collect()
    }

    pub fn rad(&self) -> Module {
        self.restrict(&self.radical_subspace()).0
    }

    pub fn top(&self) -> Module {
        self.quotient(&self.radical_subspace()).0
    }

    pub fn socle(&self) -> Module {
        self.restrict(&self.socle_subspace()).0
    }

    pub fn top_dims(&self) -> Vec<usize> {
        self.radical_subspace().iter().zip(self.dims()).map(|(r, &d)| d - r.cols()).collect()
    }

    pub fn socle_dims(&self) -> Vec<usize> {
        self.socle_subspace().iter().map(|s| s.cols()).collect()
    }

    /// Dimension vectors of the radical layers `M J^i / M J^{i+1}`.
    pub fn loewy_layers(&self) -> Vec<Vec<usize>> {
        let alg = self.algebra();
        let f = self.field();
        let n = alg.num_vertices();
        let mut current: Vec<Matrix> = (0..n).map(|v| Matrix::identity(f, self.dims()[v])).collect();
        let mut layers = Vec::new();
        while current.iter().any(|m| m.cols() > 0) {
            let next: Vec<Matrix> = (0..n)
                .map(|t| {
                    let mut acc = Matrix::zeros(f, self.dims()[t], 0);
                    for &g in alg.generators() {
                        if alg.target(g) == t {
                            let img = &*self.act(g) * &current[alg.source(g)];
                            acc = acc.hstack(&img).unwrap();
                        }
                    }
                    acc.column_space()
                })
                .collect();
            layers.push((0..n).map(|v| current[v].cols() - next[v].cols()).collect());
            current = next;
        }
        layers
    }

    pub fn loewy_length(&self) -> usize {
        self.loewy_layers().len()
    }

    /// Smallest submodule containing the given columns at each vertex.
    pub fn generated_submodule(&self, gens: &[Matrix]) -> Vec<Matrix> {
        let alg = self.algebra();
        let mut span: Vec<Matrix> = gens.iter().map(|g| g.column_space()).collect();
        loop {
            let mut changed = false;
            for &g in alg.generators() {
                let (s, t) = (alg.source(g), alg.target(g));
                if span[s].cols() == 0 {
                    continue;
                }
                let img = &*self.act(g) * &span[s];
                let merged = span[t].hstack(&img).unwrap().column_space();
                if merged.cols() > span[t].cols() {
                    span[t] = merged;
                    changed = true;
                }
            }
            if !changed {
                return span;
            }
        }
    }

    /// The submodule spanned by `basis[v]` (assumed closed) with its inclusion.
    pub fn restrict(&self, basis: &[Matrix]) -> (Module, ModuleMap) {
        let alg = self.algebra();
        let f = self.field();
        let left_inv: Vec<Matrix> = basis
            .iter()
            .map(|u| {
                if u.cols() == 0 {
                    Matrix::zeros(f, 0, u.rows())
                } else {
                    u.transpose()
                        .solve_right(&Matrix::identity(f, u.cols()))
                        .unwrap()
                        .expect("basis columns are independent")
                        .transpose()
                }
            })
            .collect();
        let dims: Vec<usize> = basis.iter().map(|u| u.cols()).collect();
        let acts = alg
            .radical()
            .iter()
            .enumerate()
            .map(|(pos, &b)| {
                let (s, t) = (alg.source(b), alg.target(b));
                &(&left_inv[t] * &self.acts()[pos]) * &basis[s]
            })
            .collect();
        let sub = Module::new_unchecked(alg, dims, acts);
        let incl = ModuleMap { source: sub.clone(), target: self.clone(), blocks: basis.to_vec() };
        debug_assert!(incl.is_homomorphism(), "restriction to a non-submodule");
        (sub, incl)
    }

    /// `M / U` for a submodule `U` (given per vertex) with the projection.
    pub fn quotient(&self, basis: &[Matrix]) -> (Module, ModuleMap) {
        let alg = self.algebra();
        let f = self.field();
        let n = alg.num_vertices();
        let mut comp = Vec::with_capacity(n);
        let mut projs = Vec::with_capacity(n);
        for v in 0..n {
            let u = &basis[v];
            let c = u.complement_coordinates();
            let d = self.dims()[v];
            let mut full = u.clone();
            for &i in &c {
                full = full.hstack(&unit_column(f, d, i)).unwrap();
            }
            let inv = full.inverse().expect("submodule basis plus complement is a basis");
            projs.push(inv.submatrix(u.cols()..d, 0..d));
            comp.push(c);
        }
        let dims: Vec<usize> = comp.iter().map(|c| c.len()).collect();
        let acts = alg
            .radical()
            .iter()
            .enumerate()
            .map(|(pos, &b)| {
                let (s, t) = (alg.source(b), alg.target(b));
                &projs[t] * &self.acts()[pos].select_columns(&comp[s])
            })
            .collect();
        let q = Module::new_unchecked(alg, dims, acts);
        let proj = ModuleMap { source: self.clone(), target: q.clone(), blocks: projs };
        debug_assert!(proj.is_homomorphism(), "quotient by a non-submodule");
        (q, proj)
    }

    /// `M ⊗_A (A / rad A)`, a module over the top quotient.
    pub fn tensor_top(&self) -> Module {
        let top = self.algebra().top_quotient();
        Module::semisimple(&top, self.top_dims())
    }

    /// Basis of `Hom_A(self, other)`.
    pub fn hom_basis(&self, other: &Module) -> Result<Vec<ModuleMap>, ModuleError> {
        if self.algebra() != other.algebra() {
            return Err(ModuleError::AlgebraMismatch);
        }
        Ok(hom_basis_impl(self, other))
    }

    pub fn hom_dim(&self, other: &Module) -> usize {
        hom_solution_space(self, other).cols()
    }

    /// The stable part: direct sum of the non-projective summands.
    pub fn transpose(&self) -> Module {
        transpose_impl(self)
    }

    /// `∇ = Tr Ω Tr`, applied `k` times.
    pub fn nabla(&self, k: usize) -> Module {
        let mut m = self.clone();
        for _ in 0..k {
            m = m.transpose().syzygy(1).transpose();
        }
        m
    }

    /// `dim Hom(M, N)` modulo maps factoring through a projective.
    pub fn stable_hom_dim(&self, other: &Module) -> Result<usize, ModuleError> {
        if self.algebra() != other.algebra() {
            return Err(ModuleError::AlgebraMismatch);
        }
        let total = self.hom_dim(other);
        if total == 0 {
            return Ok(0);
        }
        let cover = other.cover();
        let through: Vec<Vec<u32>> =
            hom_basis_impl(self, &cover.proj).iter().map(|g| cover.epi.compose(g).flatten()).collect();
        Ok(total - rank_of_vectors(self.field(), &through))
    }
}

pub(crate) fn rank_of_vectors(f: Fp, vecs: &[Vec<u32>]) -> usize {
    if vecs.is_empty() || vecs[0].is_empty() {
        return 0;
    }
    let cols = vecs[0].len();
    Matrix::from_vec(f, vecs.len(), cols, vecs.iter().flatten().copied().collect()).rank()
}

/// `⊕ e_{v} A` for `v` in `tops`.
pub fn proj_sum(alg: &Algebra, tops: &[usize]) -> (Module, ProjLayout) {
    let n = alg.num_vertices();
    let f = alg.field();
    let mut dims = vec![0; n];
    let mut offset = vec![Vec::with_capacity(tops.len()); n];
    for &v in tops {
        for t in 0..n {
            offset[t].push(dims[t]);
            dims[t] += alg.basis_between(v, t).len();
        }
    }
    let pos_in = |s: usize, t: usize, k: usize| alg.basis_between(s, t).binary_search(&k).unwrap();
    let acts = alg
        .radical()
        .iter()
        .map(|&c| {
            let (s, t) = (alg.source(c), alg.target(c));
            let mut m = Matrix::zeros(f, dims[t], dims[s]);
            for (i, &v) in tops.iter().enumerate() {
                for (jb, &b) in alg.basis_between(v, s).iter().enumerate() {
                    for &(k, coef) in alg.mul_basis(b, c) {
                        m.set(offset[t][i] + pos_in(v, t, k), offset[s][i] + jb, coef);
                    }
                }
            }
            m
        })
        .collect();
    (Module::new_unchecked(alg, dims, acts), ProjLayout { tops: tops.to_vec(), offset })
}

/// The map `⊕_j e_{src_j} A -> ⊕_i e_{tgt_i} A` sending the generator of
/// summand `j` to `Σ_i elems[i][j]` (with `elems[i][j] ∈ e_{tgt_i} A e_{src_j}`).
pub fn proj_map(
    alg: &Algebra,
    src: &(Module, ProjLayout),
    tgt: &(Module, ProjLayout),
    elems: &[Vec<Vec<u32>>],
) -> ModuleMap {
    let n = alg.num_vertices();
    let f = alg.field();
    let (sm, sl) = src;
    let (tm, tl) = tgt;
    let blocks = (0..n)
        .map(|t| {
            let mut m = Matrix::zeros(f, tm.dims()[t], sm.dims()[t]);
            for (j, &w) in sl.tops.iter().enumerate() {
                for (jb, &b) in alg.basis_between(w, t).iter().enumerate() {
                    let mut bvec = vec![0u32; alg.dim()];
                    bvec[b] = 1;
                    for (i, &v) in tl.tops.iter().enumerate() {
                        let x = &elems[i][j];
                        if x.iter().all(|&c| c == 0) {
                            continue;
                        }
                        let prod = alg.mul(x, &bvec);
                        for (kb, &k) in alg.basis_between(v, t).iter().enumerate() {
                            if prod[k] != 0 {
                                m.set(tl.offset[t][i] + kb, sl.offset[t][j] + jb, prod[k]);
                            }
                        }
                    }
                }
            }
            m
        })
        .collect();
    ModuleMap { source: sm.clone(), target: tm.clone(), blocks }
}

/// Vertices and representatives of a basis of `top M`.
fn top_lifts(m: &Module) -> (Vec<usize>, Vec<Vec<u32>>) {
    if let Some(c) = m.cached_cover() {
        return (c.layout.tops.clone(), c.lifts.clone());
    }
    let rad = m.radical_subspace();
    let mut tops = Vec::new();
    let mut lifts = Vec::new();
    for (v, r) in rad.iter().enumerate() {
        for i in r.complement_coordinates() {
            let mut x = vec![0u32; m.dims()[v]];
            x[i] = 1;
            tops.push(v);
            lifts.push(x);
        }
    }
    (tops, lifts)
}

fn compute_cover(m: &Module) -> Cover {
    let alg = m.algebra();
    let f = m.field();
    let n = alg.num_vertices();
    let (tops, lifts) = top_lifts(m);
    let (proj, layout) = proj_sum(alg, &tops);
    let blocks: Vec<Matrix> = (0..n)
        .map(|t| {
            let mut cols: Vec<Vec<u32>> = Vec::with_capacity(proj.dims()[t]);
            for (i, &v) in tops.iter().enumerate() {
                for &b in alg.basis_between(v, t) {
                    cols.push(m.apply_vec(b, &lifts[i]));
                }
            }
            Matrix::from_columns(f, m.dims()[t], &cols)
        })
        .collect();
    let sections = blocks
        .iter()
        .map(|e| {
            e.solve_right(&Matrix::identity(f, e.rows()))
                .unwrap()
                .expect("cover map is surjective")
        })
        .collect();
    let kernel_basis: Vec<Matrix> = blocks.iter().map(|e| e.kernel_basis()).collect();
    let epi = ModuleMap { source: proj.clone(), target: m.clone(), blocks };
    debug_assert!(epi.is_homomorphism());
    let (kernel, incl) = proj.restrict(&kernel_basis);
    Cover { layout, lifts, proj, epi, kernel, incl, sections }
}

impl Cover {
    /// Presentation data: for each top generator `k_j` of `ΩM` (at vertex
    /// `w_j`), its components `x_ij ∈ e_{v_i} A e_{w_j}` in `P`.
    pub fn relations(&self, alg: &Algebra) -> (Vec<usize>, Vec<Vec<Vec<u32>>>) {
        let (ws, lifts) = top_lifts(&self.kernel);
        let mut x = vec![Vec::with_capacity(ws.len()); self.layout.tops.len()];
        for (j, &w) in ws.iter().enumerate() {
            let k_in_p = self.incl.apply_at(w, &lifts[j]);
            for (i, row) in x.iter_mut().enumerate() {
                row.push(self.layout.element_at(alg, &k_in_p, i, w));
            }
        }
        (ws, x)
    }
}

/// Columns: coordinates `(y_i)` of homs `M -> N`, `y_i ∈ N_{v_i}`.
fn hom_solution_space(m: &Module, n: &Module) -> Matrix {
    let alg = m.algebra();
    let f = m.field();
    let cover = m.cover();
    let tops = &cover.layout.tops;
    let (ws, x) = cover.relations(alg);
    let col_off = offsets_of(&tops.iter().map(|&v| n.dims()[v]).collect::<Vec<_>>());
    let row_off = offsets_of(&ws.iter().map(|&w| n.dims()[w]).collect::<Vec<_>>());
    let mut eq = Matrix::zeros(f, *row_off.last().unwrap(), *col_off.last().unwrap());
    for (j, &w) in ws.iter().enumerate() {
        for (i, &v) in tops.iter().enumerate() {
            let mut block = Matrix::zeros(f, n.dims()[w], n.dims()[v]);
            for &b in alg.basis_between(v, w) {
                let c = x[i][j][b];
                if c != 0 {
                    block.add_scaled(&n.act(b), c);
                }
            }
            eq.set_block(row_off[j], col_off[i], &block);
        }
    }
    eq.kernel_basis()
}

fn hom_basis_impl(m: &Module, n: &Module) -> Vec<ModuleMap> {
    let sols = hom_solution_space(m, n);
    let cover = m.cover();
    (0..sols.cols()).map(|c| map_from_top_images(m, n, &cover, &sols.column(c))).collect()
}

/// The map `M -> N` sending the `i`-th top lift to `y_i` (concatenated).
fn map_from_top_images(m: &Module, n: &Module, cover: &Cover, y: &[u32]) -> ModuleMap {
    let alg = m.algebra();
    let f = m.field();
    let tops = &cover.layout.tops;
    let mut ys = Vec::with_capacity(tops.len());
    let mut off = 0;
    for &v in tops {
        ys.push(&y[off..off + n.dims()[v]]);
        off += n.dims()[v];
    }
    let blocks = (0..alg.num_vertices())
        .map(|t| {
            let mut cols: Vec<Vec<u32>> = Vec::with_capacity(cover.proj.dims()[t]);
            for (i, &v) in tops.iter().enumerate() {
                for &b in alg.basis_between(v, t) {
                    cols.push(n.apply_vec(b, ys[i]));
                }
            }
            let phi = Matrix::from_columns(f, n.dims()[t], &cols);
            &phi * &cover.sections[t]
        })
        .collect();
    ModuleMap { source: m.clone(), target: n.clone(), blocks }
}

fn transpose_impl(m: &Module) -> Module {
    let alg = m.algebra();
    let op = alg.opposite();
    let cover = m.cover();
    let (ws, x) = cover.relations(alg);
    let vs = &cover.layout.tops;
    let p0 = proj_sum(&op, vs);
    let p1 = proj_sum(&op, &ws);
    // elems[j][i] = x_ij, read in the opposite algebra
    let elems: Vec<Vec<Vec<u32>>> =
        (0..ws.len()).map(|j| (0..vs.len()).map(|i| x[i][j].clone()).collect()).collect();
    let d = proj_map(&op, &p0, &p1, &elems);
    debug_assert!(d.is_homomorphism());
    let image: Vec<Matrix> = d.blocks.iter().map(|b| b.column_space()).collect();
    p1.0.quotient(&image).0
}

impl ModuleMap {
    pub fn new(source: &Module, target: &Module, blocks: Vec<Matrix>) -> Result<ModuleMap, ModuleError> {
        if source.algebra() != target.algebra() {
            return Err(ModuleError::AlgebraMismatch);
        }
        let n = source.algebra().num_vertices();
        if blocks.len() != n
            || (0..n).any(|v| blocks[v].rows() != target.dims()[v] || blocks[v].cols() != source.dims()[v])
        {
            return Err(ModuleError::Shape("map blocks do not match the vertex dims".into()));
        }
        let map = ModuleMap { source: source.clone(), target: target.clone(), blocks };
        if !map.is_homomorphism() {
            return Err(ModuleError::NotAHomomorphism);
        }
        Ok(map)
    }

    pub fn identity(m: &Module) -> ModuleMap {
        let f = m.field();
        let blocks = m.dims().iter().map(|&d| Matrix::identity(f, d)).collect();
        ModuleMap { source: m.clone(), target: m.clone(), blocks }
    }

    pub fn zero(source: &Module, target: &Module) -> ModuleMap {
        let f = source.field();
        let blocks = (0..source.dims().len())
            .map(|v| Matrix::zeros(f, target.dims()[v], source.dims()[v]))
            .collect();
        ModuleMap { source: source.clone(), target: target.clone(), blocks }
    }

    /// Intertwining with the radical generators (enough, since they and the
    /// idempotents generate the algebra).
    pub fn is_homomorphism(&self) -> bool {
        let alg = self.source.algebra();
        alg.generators().iter().all(|&g| {
            let (s, t) = (alg.source(g), alg.target(g));
            &*self.target.act(g) * &self.blocks[s] == &self.blocks[t] * &*self.source.act(g)
        })
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ModuleMap) -> ModuleMap {
        let blocks = self.blocks.iter().zip(&other.blocks).map(|(a, b)| a * b).collect();
        ModuleMap { source: other.source.clone(), target: self.target.clone(), blocks }
    }

    pub fn add(&self, other: &ModuleMap) -> ModuleMap {
        let blocks = self.blocks.iter().zip(&other.blocks).map(|(a, b)| a + b).collect();
        ModuleMap { source: self.source.clone(), target: self.target.clone(), blocks }
    }

    pub fn scale(&self, c: u32) -> ModuleMap {
        let blocks = self.blocks.iter().map(|a| a.scale(c)).collect();
        ModuleMap { source: self.source.clone(), target: self.target.clone(), blocks }
    }

    /// Linear combination `Σ c_i maps_i` (all with the same source and target).
    pub fn combination(source: &Module, target: &Module, maps: &[ModuleMap], coeffs: &[u32]) -> ModuleMap {
        let mut acc = ModuleMap::zero(source, target);
        for (m, &c) in maps.iter().zip(coeffs) {
            if c == 0 {
                continue;
            }
            for (a, b) in acc.blocks.iter_mut().zip(&m.blocks) {
                a.add_scaled(b, c);
            }
        }
        acc
    }

    pub fn flatten(&self) -> Vec<u32> {
        self.blocks.iter().flat_map(|b| b.data().iter().copied()).collect()
    }

    pub fn rank(&self) -> usize {
        self.blocks.iter().map(|b| b.rank()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(|b| b.is_zero())
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.source.dim()
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.target.dim()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.source.dims() == self.target.dims() && self.blocks.iter().all(|b| b.is_invertible())
    }

    /// Image of a vector of the source at vertex `v`.
    pub fn apply_at(&self, v: usize, x: &[u32]) -> Vec<u32> {
        let b = &self.blocks[v];
        let f = b.field();
        (0..b.rows()).map(|i| (0..b.cols()).fold(0, |acc, j| f.add(acc, f.mul(b.get(i, j), x[j])))).collect()
    }

    pub fn kernel(&self) -> (Module, ModuleMap) {
        let basis: Vec<Matrix> = self.blocks.iter().map(|b| b.kernel_basis()).collect();
        self.source.restrict(&basis)
    }

    pub fn image(&self) -> (Module, ModuleMap) {
        let basis: Vec<Matrix> = self.blocks.iter().map(|b| b.column_space()).collect();
        self.target.restrict(&basis)
    }

    pub fn cokernel(&self) -> (Module, ModuleMap) {
        let basis: Vec<Matrix> = self.blocks.iter().map(|b| b.column_space()).collect();
        self.target.quotient(&basis)
    }

    /// `D f : D N -> D M`.
    pub fn dual(&self) -> ModuleMap {
        ModuleMap {
            source: self.target.dual(),
            target: self.source.dual(),
            blocks: self.blocks.iter().map(|b| b.transpose()).collect(),
        }
    }

    pub fn inverse(&self) -> Option<ModuleMap> {
        let blocks = self.blocks.iter().map(|b| b.inverse()).collect::<Option<Vec<_>>>()?;
        Some(ModuleMap { source: self.target.clone(), target: self.source.clone(), blocks })
    }
}

/// A random module: a quotient of a small sum of projectives by a random
/// submodule inside its radical, or the dual of such a module.
pub fn random_module<R: Rng + ?Sized>(alg: &Algebra, rng: &mut R, max_tops: usize) -> Module {
    let dualize = rng.gen_bool(0.3);
    let a = if dualize { alg.opposite() } else { alg.clone() };
    let n = a.num_vertices();
    let f = a.field();
    let k = rng.gen_range(1..=max_tops.max(1));
    let tops: Vec<usize> = (0..k).map(|_| rng.gen_range(0..n)).collect();
    let (p, _) = proj_sum(&a, &tops);
    let rad = p.radical_subspace();
    let gens: Vec<Matrix> = rad
        .iter()
        .map(|r| {
            let count = if r.cols() == 0 { 0 } else { rng.gen_range(0..=2usize) };
            let mut g = Matrix::zeros(f, r.rows(), count);
            for c in 0..count {
                let coeffs = Matrix::from_vec(f, r.cols(), 1, (0..r.cols()).map(|_| rng.gen_range(0..f.modulus())).collect());
                let col = r * &coeffs;
                for i in 0..r.rows() {
                    g.set(i, c, col.get(i, 0));
                }
            }
            g
        })
        .collect();
    let sub = p.generated_submodule(&gens);
    let q = p.quotient(&sub).0;
    if dualize { q.dual() } else { q }
}
