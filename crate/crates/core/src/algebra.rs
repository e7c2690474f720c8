//! Split basic algebras over F_p given by structure constants.
//!
//! Products are written left to right: for paths, `x * y` is "x then y",
//! so `e_s x e_t = x` for a path from `s` to `t` and the right projective
//! `e_v A` is spanned by the basis elements leaving `v`.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::linalg::{Fp, LinalgError, Matrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("empty quiver")]
    EmptyQuiver,
    #[error("ideal is not admissible at truncation {bound}: path {path} survives")]
    NonAdmissible { bound: usize, path: String },
    #[error("invalid relation: {0}")]
    InvalidRelation(String),
    #[error("invalid algebra data: {0}")]
    Invalid(String),
    #[error("algebra is not semisimple")]
    NotSemisimple,
    #[error("mismatched bimodule: {0}")]
    BimoduleMismatch(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A sparse algebra element: `(basis index, coefficient)` pairs.
pub type Sparse = Vec<(usize, u32)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

/// A linear combination of parallel paths; each path is a list of arrow
/// indices read left to right ("first arrow first").
pub type Relation = Vec<(i64, Vec<usize>)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverPresentation {
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
    pub relations: Vec<Relation>,
    pub truncation: usize,
}

impl QuiverPresentation {
    pub fn new(vertices: Vec<String>, truncation: usize) -> Self {
        QuiverPresentation { vertices, arrows: Vec::new(), relations: Vec::new(), truncation }
    }

    pub fn add_arrow(&mut self, name: &str, source: usize, target: usize) -> usize {
        self.arrows.push(Arrow { name: name.to_string(), source, target });
        self.arrows.len() - 1
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    /// Adds every path of length `len` as a monomial relation.
    pub fn add_all_paths_of_length(&mut self, len: usize) {
        for p in enumerate_paths(self, len) {
            self.relations.push(vec![(1, p)]);
        }
    }

    /// Reversed arrows, with every relation path read backwards.
    pub fn opposite(&self) -> QuiverPresentation {
        QuiverPresentation {
            vertices: self.vertices.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| Arrow { name: a.name.clone(), source: a.target, target: a.source })
                .collect(),
            relations: self
                .relations
                .iter()
                .map(|r| r.iter().map(|(c, p)| (*c, p.iter().rev().copied().collect())).collect())
                .collect(),
            truncation: self.truncation,
        }
    }

    /// Text form `b*a` of a path: the rightmost arrow is traversed first.
    pub fn path_label(&self, path: &[usize]) -> String {
        path.iter().rev().map(|&a| self.arrows[a].name.as_str()).collect::<Vec<_>>().join("*")
    }
}

fn enumerate_paths(qp: &QuiverPresentation, len: usize) -> Vec<Vec<usize>> {
    let mut layer: Vec<Vec<usize>> = (0..qp.arrows.len()).map(|a| vec![a]).collect();
    if len == 0 {
        return Vec::new();
    }
    for _ in 1..len {
        let mut next = Vec::new();
        for p in &layer {
            let t = qp.arrows[*p.last().unwrap()].target;
            for (a, arr) in qp.arrows.iter().enumerate() {
                if arr.source == t {
                    let mut q = p.clone();
                    q.push(a);
                    next.push(q);
                }
            }
        }
        layer = next;
    }
    layer
}

#[derive(Debug, PartialEq, Eq)]
struct QuiverData {
    arrows: Vec<Arrow>,
    /// arrow path of each basis element (empty for idempotents)
    paths: Vec<Vec<usize>>,
}

#[derive(Debug, PartialEq, Eq)]
struct AlgebraData {
    field: Fp,
    labels: Vec<String>,
    table: Vec<Vec<Sparse>>,
    vertices: Vec<usize>,
    vertex_names: Vec<String>,
    radical: Vec<usize>,
    rad_pos: Vec<Option<usize>>,
    vertex_of: Vec<Option<usize>>,
    source: Vec<usize>,
    target: Vec<usize>,
    between: Vec<Vec<Vec<usize>>>,
    generators: Vec<usize>,
    commutative: bool,
    quiver: Option<QuiverData>,
}

/// Cheap handle to an immutable algebra; the opposite algebra shares the
/// table and only flips the reading order.
#[derive(Clone, Debug)]
pub struct Algebra {
    inner: Arc<AlgebraData>,
    op: bool,
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        let same_data = Arc::ptr_eq(&self.inner, &other.inner) || self.inner == other.inner;
        same_data && (self.op == other.op || self.inner.commutative)
    }
}

impl Eq for Algebra {}

impl Algebra {
    /// Builds and validates an algebra from a product table.
    ///
    /// `vertices[v]` is the basis index of the idempotent `e_v`; every other
    /// basis element is taken as a radical basis element and must lie in a
    /// single `e_s A e_t`.
    pub fn from_table(
        field: Fp,
        labels: Vec<String>,
        table: Vec<Vec<Sparse>>,
        vertices: Vec<usize>,
        vertex_names: Vec<String>,
    ) -> Result<Algebra, AlgebraError> {
        Self::build(field, labels, table, vertices, vertex_names, None)
    }

    fn build(
        field: Fp,
        labels: Vec<String>,
        mut table: Vec<Vec<Sparse>>,
        vertices: Vec<usize>,
        vertex_names: Vec<String>,
        quiver: Option<QuiverData>,
    ) -> Result<Algebra, AlgebraError> {
        let d = labels.len();
        let invalid = |s: String| Err(AlgebraError::Invalid(s));
        if d == 0 || vertices.is_empty() {
            return Err(AlgebraError::EmptyQuiver);
        }
        if table.len() != d || table.iter().any(|row| row.len() != d) {
            return invalid(format!("product table must be {d}x{d}"));
        }
        if vertex_names.len() != vertices.len() {
            return invalid("one name per idempotent required".into());
        }
        let p = field.modulus();
        for row in table.iter_mut() {
            for entry in row.iter_mut() {
                normalize_sparse(entry, p);
                if entry.iter().any(|&(k, _)| k >= d) {
                    return invalid("product refers to a basis index out of range".into());
                }
            }
        }
        let mut vertex_of = vec![None; d];
        for (v, &b) in vertices.iter().enumerate() {
            if b >= d || vertex_of[b].is_some() {
                return invalid(format!("bad idempotent index {b}"));
            }
            vertex_of[b] = Some(v);
        }
        let radical: Vec<usize> = (0..d).filter(|&b| vertex_of[b].is_none()).collect();
        let mut rad_pos = vec![None; d];
        for (i, &b) in radical.iter().enumerate() {
            rad_pos[b] = Some(i);
        }

        // orthogonal idempotents
        for (v, &ev) in vertices.iter().enumerate() {
            for (w, &ew) in vertices.iter().enumerate() {
                let expect: Sparse = if v == w { vec![(ev, 1)] } else { vec![] };
                if table[ev][ew] != expect {
                    return invalid(format!("e_{v} e_{w} has the wrong value"));
                }
            }
        }
        // homogeneity and the unit
        let mut source = vec![0; d];
        let mut target = vec![0; d];
        for b in 0..d {
            let unit = vec![(b, 1)];
            let lefts: Vec<usize> = vertices
                .iter()
                .enumerate()
                .filter_map(|(v, &ev)| {
                    let prod = &table[ev][b];
                    if prod.is_empty() { None } else { Some((v, prod)) }
                })
                .map(|(v, prod)| if *prod == unit { Ok(v) } else { Err(()) })
                .collect::<Result<_, _>>()
                .map_err(|_| AlgebraError::Invalid(format!("{} is not homogeneous", labels[b])))?;
            let rights: Vec<usize> = vertices
                .iter()
                .enumerate()
                .filter_map(|(v, &ev)| {
                    let prod = &table[b][ev];
                    if prod.is_empty() { None } else { Some((v, prod)) }
                })
                .map(|(v, prod)| if *prod == unit { Ok(v) } else { Err(()) })
                .collect::<Result<_, _>>()
                .map_err(|_| AlgebraError::Invalid(format!("{} is not homogeneous", labels[b])))?;
            if lefts.len() != 1 || rights.len() != 1 {
                return invalid(format!("the idempotents do not sum to a unit on {}", labels[b]));
            }
            source[b] = lefts[0];
            target[b] = rights[0];
        }
        let n = vertices.len();
        let mut between = vec![vec![Vec::new(); n]; n];
        for b in 0..d {
            between[source[b]][target[b]].push(b);
        }
        // products must respect the grading
        for i in 0..d {
            for j in 0..d {
                let prod = &table[i][j];
                if target[i] != source[j] {
                    if !prod.is_empty() {
                        return invalid(format!("{} * {} must vanish", labels[i], labels[j]));
                    }
                    continue;
                }
                if prod.iter().any(|&(k, _)| source[k] != source[i] || target[k] != target[j]) {
                    return invalid(format!("{} * {} is not homogeneous", labels[i], labels[j]));
                }
                if (rad_pos[i].is_some() || rad_pos[j].is_some())
                    && prod.iter().any(|&(k, _)| rad_pos[k].is_none()) {
                        return invalid("radical basis does not span an ideal".into());
                    }
            }
        }
        // associativity on composable triples
        for i in 0..d {
            for j in between_from(&between, target[i]) {
                let ij = &table[i][j];
                for k in between_from(&between, target[j]) {
                    let left = sparse_mul_right(&table, ij, k, field);
                    let right = sparse_mul_left(&table, i, &table[j][k], field);
                    if left != right {
                        return invalid(format!(
                            "multiplication is not associative on ({}, {}, {})",
                            labels[i], labels[j], labels[k]
                        ));
                    }
                }
            }
        }
        let commutative = (0..d).all(|i| (0..d).all(|j| table[i][j] == table[j][i]));
        let mut data = AlgebraData {
            field,
            labels,
            table,
            vertices,
            vertex_names,
            radical,
            rad_pos,
            vertex_of,
            source,
            target,
            between,
            generators: Vec::new(),
            commutative,
            quiver,
        };
        data.check_nilpotent()?;
        data.generators = data.compute_generators();
        Ok(Algebra { inner: Arc::new(data), op: false })
    }

    /// The semisimple algebra F_p^r with the given vertex names.
    pub fn semisimple(field: Fp, names: &[&str]) -> Algebra {
        let r = names.len();
        let mut table = vec![vec![Vec::new(); r]; r];
        for (i, row) in table.iter_mut().enumerate() {
            row[i] = vec![(i, 1)];
        }
        let labels = names.iter().map(|n| format!("e_{n}")).collect();
        Self::from_table(field, labels, table, (0..r).collect(), names.iter().map(|s| s.to_string()).collect())
            .expect("semisimple table is valid")
    }

    /// The bound quiver algebra `kQ/(I + J^L)`, with basis the path
    /// monomials that survive degreewise elimination.
    pub fn from_quiver(qp: &QuiverPresentation, field: Fp) -> Result<Algebra, AlgebraError> {
        build_from_quiver(qp, field)
    }

    pub fn field(&self) -> Fp {
        self.inner.field
    }

    pub fn dim(&self) -> usize {
        self.inner.labels.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.inner.vertices.len()
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.inner.vertex_names[v]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.inner.vertex_names
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.inner.vertex_names.iter().position(|n| n == name)
    }

    /// Basis index of the idempotent `e_v`.
    pub fn idempotent(&self, v: usize) -> usize {
        self.inner.vertices[v]
    }

    pub fn idempotents(&self) -> &[usize] {
        &self.inner.vertices
    }

    /// Vertex of a basis element when it is an idempotent.
    pub fn vertex_of(&self, b: usize) -> Option<usize> {
        self.inner.vertex_of[b]
    }

    pub fn label(&self, b: usize) -> &str {
        &self.inner.labels[b]
    }

    pub fn labels(&self) -> &[String] {
        &self.inner.labels
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.inner.labels.iter().position(|l| l == label)
    }

    pub fn radical(&self) -> &[usize] {
        &self.inner.radical
    }

    pub fn rad_position(&self, b: usize) -> Option<usize> {
        self.inner.rad_pos[b]
    }

    /// Radical basis elements whose classes form a basis of rad/rad².
    pub fn generators(&self) -> &[usize] {
        &self.inner.generators
    }

    pub fn is_opposite(&self) -> bool {
        self.op
    }

    pub fn is_commutative(&self) -> bool {
        self.inner.commutative
    }

    pub fn is_semisimple(&self) -> bool {
        self.inner.radical.is_empty()
    }

    pub fn opposite(&self) -> Algebra {
        Algebra { inner: self.inner.clone(), op: !self.op }
    }

    /// Same underlying table (ignoring the opposite flag).
    pub fn same_table(&self, other: &Algebra) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner == other.inner
    }

    /// `b_i * b_j` in this algebra.
    #[inline]
    pub fn mul_basis(&self, i: usize, j: usize) -> &[(usize, u32)] {
        if self.op {
            &self.inner.table[j][i]
        } else {
            &self.inner.table[i][j]
        }
    }

    #[inline]
    pub fn source(&self, b: usize) -> usize {
        if self.op { self.inner.target[b] } else { self.inner.source[b] }
    }

    #[inline]
    pub fn target(&self, b: usize) -> usize {
        if self.op { self.inner.source[b] } else { self.inner.target[b] }
    }

    /// Basis elements of `e_s A e_t`.
    pub fn basis_between(&self, s: usize, t: usize) -> &[usize] {
        if self.op { &self.inner.between[t][s] } else { &self.inner.between[s][t] }
    }

    /// Basis elements of `e_v A` (those with source `v`), in basis order.
    pub fn basis_from(&self, v: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&b| self.source(b) == v).collect()
    }

    /// Product of dense elements.
    pub fn mul(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        let f = self.field();
        let mut out = vec![0u32; self.dim()];
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let c = f.mul(a, b);
                for &(k, t) in self.mul_basis(i, j) {
                    out[k] = f.add(out[k], f.mul(c, t));
                }
            }
        }
        out
    }

    pub fn unit(&self) -> Vec<u32> {
        let mut u = vec![0; self.dim()];
        for &e in self.idempotents() {
            u[e] = 1;
        }
        u
    }

    /// `dim e_i A e_j`.
    pub fn cartan_matrix(&self) -> Vec<Vec<usize>> {
        let n = self.num_vertices();
        (0..n).map(|i| (0..n).map(|j| self.basis_between(i, j).len()).collect()).collect()
    }

    /// `A / rad A`, which is `F_p^r` for a split basic algebra.
    pub fn top_quotient(&self) -> Algebra {
        let names: Vec<&str> = self.vertex_names().iter().map(|s| s.as_str()).collect();
        Algebra::semisimple(self.field(), &names)
    }

    /// Arrows of the defining quiver (reversed for the opposite algebra).
    pub fn arrows(&self) -> Option<Vec<Arrow>> {
        let q = self.inner.quiver.as_ref()?;
        Some(
            q.arrows
                .iter()
                .map(|a| {
                    if self.op {
                        Arrow { name: a.name.clone(), source: a.target, target: a.source }
                    } else {
                        a.clone()
                    }
                })
                .collect(),
        )
    }

    /// Arrow path of a basis element, in traversal order.
    pub fn basis_path(&self, b: usize) -> Option<Vec<usize>> {
        let q = self.inner.quiver.as_ref()?;
        let mut p = q.paths[b].clone();
        if self.op {
            p.reverse();
        }
        Some(p)
    }

    /// Basis index of a given arrow.
    pub fn arrow_basis_index(&self, arrow: usize) -> Option<usize> {
        let q = self.inner.quiver.as_ref()?;
        q.paths.iter().position(|p| p.len() == 1 && p[0] == arrow)
    }

    /// Materialized product table with the opposite flag applied.
    pub fn table(&self) -> Vec<Vec<Sparse>> {
        let d = self.dim();
        (0..d).map(|i| (0..d).map(|j| self.mul_basis(i, j).to_vec()).collect()).collect()
    }

    /// A fresh algebra with the same table but no sharing and no opposite flag.
    pub fn materialize(&self) -> Algebra {
        Algebra::from_table(
            self.field(),
            self.labels().to_vec(),
            self.table(),
            self.idempotents().to_vec(),
            self.vertex_names().to_vec(),
        )
        .expect("a valid algebra stays valid")
    }

    /// Least `N` with `rad^N = 0`.
    pub fn radical_nilpotency(&self) -> usize {
        let d = self.dim();
        let f = self.field();
        let mut layer: Vec<Vec<u32>> = self
            .radical()
            .iter()
            .map(|&b| {
                let mut v = vec![0; d];
                v[b] = 1;
                v
            })
            .collect();
        let mut n = 1;
        while !layer.is_empty() {
            let mut next = Vec::new();
            for x in &layer {
                for &g in self.radical() {
                    let mut y = vec![0; d];
                    y[g] = 1;
                    next.push(self.mul(x, &y));
                }
            }
            layer = span_basis(f, d, next);
            n += 1;
        }
        n
    }
}

fn between_from(between: &[Vec<Vec<usize>>], s: usize) -> impl Iterator<Item = usize> + '_ {
    between[s].iter().flat_map(|v| v.iter().copied())
}

fn normalize_sparse(v: &mut Sparse, p: u32) {
    let mut acc: HashMap<usize, u64> = HashMap::new();
    for &(k, c) in v.iter() {
        *acc.entry(k).or_default() += c as u64 % p as u64;
    }
    let mut out: Sparse = acc.into_iter().map(|(k, c)| (k, (c % p as u64) as u32)).filter(|&(_, c)| c != 0).collect();
    out.sort_unstable();
    *v = out;
}

fn sparse_mul_right(table: &[Vec<Sparse>], x: &Sparse, k: usize, f: Fp) -> Sparse {
    let p = f.modulus();
    let mut out: Sparse = Vec::new();
    for &(i, a) in x {
        for &(m, c) in &table[i][k] {
            out.push((m, f.mul(a, c)));
        }
    }
    normalize_sparse(&mut out, p);
    out
}

fn sparse_mul_left(table: &[Vec<Sparse>], i: usize, x: &Sparse, f: Fp) -> Sparse {
    let p = f.modulus();
    let mut out: Sparse = Vec::new();
    for &(j, a) in x {
        for &(m, c) in &table[i][j] {
            out.push((m, f.mul(a, c)));
        }
    }
    normalize_sparse(&mut out, p);
    out
}

/// Row-reduced basis of the span of some vectors.
fn span_basis(f: Fp, d: usize, vecs: Vec<Vec<u32>>) -> Vec<Vec<u32>> {
    if vecs.is_empty() {
        return vecs;
    }
    let n = vecs.len();
    let m = Matrix::from_vec(f, n, d, vecs.into_iter().flatten().collect());
    let r = m.rref();
    (0..r.rank).map(|i| r.reduced.row(i).to_vec()).collect()
}

impl AlgebraData {
    fn check_nilpotent(&self) -> Result<(), AlgebraError> {
        let d = self.labels.len();
        let f = self.field;
        let unit_vec = |b: usize| {
            let mut v = vec![0u32; d];
            v[b] = 1;
            v
        };
        let mul = |x: &[u32], y: usize| {
            let mut out = vec![0u32; d];
            for (i, &a) in x.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for &(k, c) in &self.table[i][y] {
                    out[k] = f.add(out[k], f.mul(a, c));
                }
            }
            out
        };
        let mut layer = span_basis(f, d, self.radical.iter().map(|&b| unit_vec(b)).collect());
        let mut prev = layer.len() + 1;
        while !layer.is_empty() {
            if layer.len() >= prev {
                return Err(AlgebraError::Invalid("radical is not nilpotent".into()));
            }
            prev = layer.len();
            let next: Vec<Vec<u32>> =
                layer.iter().flat_map(|x| self.radical.iter().map(move |&g| (x, g))).map(|(x, g)| mul(x, g)).collect();
            layer = span_basis(f, d, next);
        }
        Ok(())
    }

    fn compute_generators(&self) -> Vec<usize> {
        let d = self.labels.len();
        let f = self.field;
        let mut rows: Vec<Vec<u32>> = Vec::new();
        for &i in &self.radical {
            for &j in &self.radical {
                let prod = &self.table[i][j];
                if !prod.is_empty() {
                    let mut v = vec![0u32; d];
                    for &(k, c) in prod {
                        v[k] = c;
                    }
                    rows.push(v);
                }
            }
        }
        let mut basis = span_basis(f, d, rows);
        let mut rank = basis.len();
        let mut gens = Vec::new();
        for &b in &self.radical {
            let mut v = vec![0u32; d];
            v[b] = 1;
            let mut trial = basis.clone();
            trial.push(v);
            let reduced = span_basis(f, d, trial);
            if reduced.len() > rank {
                gens.push(b);
                basis = reduced;
                rank = basis.len();
            }
        }
        gens
    }
}

fn build_from_quiver(qp: &QuiverPresentation, field: Fp) -> Result<Algebra, AlgebraError> {
    let n = qp.vertices.len();
    if n == 0 {
        return Err(AlgebraError::EmptyQuiver);
    }
    let big_l = qp.truncation;
    if big_l < 2 {
        return Err(AlgebraError::Invalid("truncation bound must be at least 2".into()));
    }
    for a in &qp.arrows {
        if a.source >= n || a.target >= n {
            return Err(AlgebraError::Invalid(format!("arrow {} has a bad endpoint", a.name)));
        }
    }
    // paths by length, then lexicographic
    let mut paths: Vec<Vec<usize>> = Vec::new();
    for len in 1..=big_l {
        let mut layer = enumerate_paths(qp, len);
        layer.sort();
        paths.extend(layer);
    }
    let src = |p: &[usize]| qp.arrows[p[0]].source;
    let tgt = |p: &[usize]| qp.arrows[*p.last().unwrap()].target;
    // column order: longest first, lexicographically larger first
    let mut order: Vec<usize> = (0..paths.len()).collect();
    order.sort_by(|&a, &b| paths[b].len().cmp(&paths[a].len()).then_with(|| paths[b].cmp(&paths[a])));
    let mut col_of: HashMap<Vec<usize>, usize> = HashMap::new();
    for (c, &pi) in order.iter().enumerate() {
        col_of.insert(paths[pi].clone(), c);
    }

    // validate relations
    let mut rels: Vec<(usize, usize, usize, Vec<(u32, Vec<usize>)>)> = Vec::new();
    for (ri, rel) in qp.relations.iter().enumerate() {
        let mut terms: Vec<(u32, Vec<usize>)> = Vec::new();
        for (c, path) in rel {
            let c = field.from_i64(*c);
            if c == 0 {
                continue;
            }
            if path.len() < 2 {
                return Err(AlgebraError::InvalidRelation(format!("relation {ri} has a term of length < 2")));
            }
            if path.iter().any(|&a| a >= qp.arrows.len()) {
                return Err(AlgebraError::InvalidRelation(format!("relation {ri} names an unknown arrow")));
            }
            if path.windows(2).any(|w| qp.arrows[w[0]].target != qp.arrows[w[1]].source) {
                return Err(AlgebraError::InvalidRelation(format!(
                    "relation {ri}: {} is not a path",
                    qp.path_label(path)
                )));
            }
            terms.push((c, path.clone()));
        }
        if terms.is_empty() {
            continue;
        }
        let (s, t) = (src(&terms[0].1), tgt(&terms[0].1));
        if terms.iter().any(|(_, p)| src(p) != s || tgt(p) != t) {
            return Err(AlgebraError::InvalidRelation(format!("relation {ri} mixes non-parallel paths")));
        }
        let min_len = terms.iter().map(|(_, p)| p.len()).min().unwrap();
        rels.push((s, t, min_len, terms));
    }

    // paths ending / starting at each vertex, including trivial ones
    let mut ending: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new()]; n];
    let mut starting: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new()]; n];
    for p in &paths {
        ending[tgt(p)].push(p.clone());
        starting[src(p)].push(p.clone());
    }
    let ncols = paths.len();
    let mut rows: Vec<u32> = Vec::new();
    let mut nrows = 0;
    for (s, t, min_len, terms) in &rels {
        for u in &ending[*s] {
            if u.len() + min_len > big_l {
                continue;
            }
            for w in &starting[*t] {
                if u.len() + min_len + w.len() > big_l {
                    continue;
                }
                let mut row = vec![0u32; ncols];
                let mut any = false;
                for (c, p) in terms {
                    if u.len() + p.len() + w.len() > big_l {
                        continue;
                    }
                    let mut full = u.clone();
                    full.extend_from_slice(p);
                    full.extend_from_slice(w);
                    let col = col_of[&full];
                    row[col] = field.add(row[col], *c);
                    any = true;
                }
                if any {
                    rows.extend(row);
                    nrows += 1;
                }
            }
        }
    }
    let ideal = Matrix::from_vec(field, nrows, ncols, rows);
    let rref = ideal.rref();
    let mut pivot_row = vec![None; ncols];
    for (r, &c) in rref.pivot_cols.iter().enumerate() {
        pivot_row[c] = Some(r);
    }
    for p in paths.iter().filter(|p| p.len() == big_l) {
        if pivot_row[col_of[p]].is_none() {
            return Err(AlgebraError::NonAdmissible { bound: big_l, path: qp.path_label(p) });
        }
    }

    // basis: trivial paths, then surviving paths in (length, lex) order
    let mut labels: Vec<String> = qp.vertices.iter().map(|v| format!("e_{v}")).collect();
    let mut basis_paths: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut index_of: HashMap<Vec<usize>, usize> = HashMap::new();
    for p in &paths {
        if p.len() < big_l && pivot_row[col_of[p]].is_none() {
            index_of.insert(p.clone(), labels.len());
            labels.push(qp.path_label(p));
            basis_paths.push(p.clone());
        }
    }
    let d = labels.len();
    // normal form of any path of length < L
    let normal_form = |p: &[usize]| -> Sparse {
        if p.len() >= big_l {
            return Vec::new();
        }
        if let Some(&b) = index_of.get(p) {
            return vec![(b, 1)];
        }
        let r = pivot_row[col_of[p]].expect("a non-basis path is a pivot");
        let mut out = Vec::new();
        for c in 0..ncols {
            let x = rref.reduced.get(r, c);
            if x != 0 && pivot_row[c].is_none() {
                let q = &paths[order[c]];
                if let Some(&b) = index_of.get(q) {
                    out.push((b, field.neg(x)));
                }
            }
        }
        out
    };
    let endpoints = |b: usize| -> (usize, usize) {
        if b < n {
            (b, b)
        } else {
            (src(&basis_paths[b]), tgt(&basis_paths[b]))
        }
    };
    let mut table = vec![vec![Vec::new(); d]; d];
    for i in 0..d {
        for j in 0..d {
            let (_, ti) = endpoints(i);
            let (sj, _) = endpoints(j);
            if ti != sj {
                continue;
            }
            table[i][j] = if i < n {
                vec![(j, 1)]
            } else if j < n {
                vec![(i, 1)]
            } else {
                let mut full = basis_paths[i].clone();
                full.extend_from_slice(&basis_paths[j]);
                normal_form(&full)
            };
        }
    }
    let quiver = QuiverData { arrows: qp.arrows.clone(), paths: basis_paths };
    Algebra::build(field, labels, table, (0..n).collect(), qp.vertices.clone(), Some(quiver))
}

/// An `L`-`R` bimodule. `left[a]` acts on column vectors as `v -> a v`,
/// `right[b]` as `v -> v b`.
#[derive(Clone, Debug)]
pub struct Bimodule {
    pub left_alg: Algebra,
    pub right_alg: Algebra,
    pub dim: usize,
    pub left: Vec<Matrix>,
    pub right: Vec<Matrix>,
}

impl Bimodule {
    pub fn new(
        left_alg: Algebra,
        right_alg: Algebra,
        dim: usize,
        left: Vec<Matrix>,
        right: Vec<Matrix>,
    ) -> Result<Bimodule, AlgebraError> {
        let bad = |s: &str| Err(AlgebraError::BimoduleMismatch(s.to_string()));
        if left_alg.field() != right_alg.field() {
            return bad("algebras over different fields");
        }
        if left.len() != left_alg.dim() || right.len() != right_alg.dim() {
            return bad("one action matrix per basis element required");
        }
        if left.iter().chain(&right).any(|m| m.rows() != dim || m.cols() != dim) {
            return bad("action matrices have the wrong size");
        }
        let f = left_alg.field();
        let combo = |acts: &[Matrix], prod: &[(usize, u32)]| {
            let mut m = Matrix::zeros(f, dim, dim);
            for &(k, c) in prod {
                m.add_scaled(&acts[k], c);
            }
            m
        };
        for i in 0..left_alg.dim() {
            for j in 0..left_alg.dim() {
                if &left[i] * &left[j] != combo(&left, left_alg.mul_basis(i, j)) {
                    return bad("left action is not multiplicative");
                }
            }
        }
        for i in 0..right_alg.dim() {
            for j in 0..right_alg.dim() {
                if &right[j] * &right[i] != combo(&right, right_alg.mul_basis(i, j)) {
                    return bad("right action is not multiplicative");
                }
            }
        }
        let id = Matrix::identity(f, dim);
        let sum = |alg: &Algebra, acts: &[Matrix]| {
            let mut m = Matrix::zeros(f, dim, dim);
            for &e in alg.idempotents() {
                m.add_scaled(&acts[e], 1);
            }
            m
        };
        if sum(&left_alg, &left) != id || sum(&right_alg, &right) != id {
            return bad("actions are not unital");
        }
        for l in &left {
            for r in &right {
                if l * r != r * l {
                    return bad("left and right actions do not commute");
                }
            }
        }
        Ok(Bimodule { left_alg, right_alg, dim, left, right })
    }

    /// `A` as an `A`-`A` bimodule.
    pub fn regular(alg: &Algebra) -> Bimodule {
        let d = alg.dim();
        let f = alg.field();
        let mut left = Vec::with_capacity(d);
        let mut right = Vec::with_capacity(d);
        for a in 0..d {
            let mut l = Matrix::zeros(f, d, d);
            let mut r = Matrix::zeros(f, d, d);
            for b in 0..d {
                for &(k, c) in alg.mul_basis(a, b) {
                    l.set(k, b, c);
                }
                for &(k, c) in alg.mul_basis(b, a) {
                    r.set(k, b, c);
                }
            }
            left.push(l);
            right.push(r);
        }
        Bimodule::new(alg.clone(), alg.clone(), d, left, right).expect("regular bimodule")
    }

    /// `(left vertex, right vertex)` of each basis vector, when homogeneous.
    pub fn grading(&self) -> Result<Vec<(usize, usize)>, AlgebraError> {
        let mut out = Vec::with_capacity(self.dim);
        for x in 0..self.dim {
            let find = |alg: &Algebra, acts: &[Matrix]| {
                let hits: Vec<usize> = (0..alg.num_vertices())
                    .filter(|&v| {
                        let col = acts[alg.idempotent(v)].column(x);
                        col.iter().any(|&c| c != 0)
                    })
                    .collect();
                if hits.len() == 1 { Some(hits[0]) } else { None }
            };
            match (find(&self.left_alg, &self.left), find(&self.right_alg, &self.right)) {
                (Some(s), Some(t)) => out.push((s, t)),
                _ => return Err(AlgebraError::BimoduleMismatch(format!("basis vector {x} is not homogeneous"))),
            }
        }
        Ok(out)
    }
}
