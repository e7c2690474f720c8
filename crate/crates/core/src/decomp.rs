//! Krull-Schmidt decompositions, isomorphism and direct-summand tests.
//!
//! Splitting is Fitting's lemma applied to random endomorphisms: if the
//! characteristic polynomial of `φ` has two coprime factors `f g`, then
//! `M = ker f(φ)^N ⊕ im f(φ)^N` with both parts nonzero.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::poly::{charpoly, irreducible_factors, Poly};
use crate::linalg::{Fp, Matrix};
use crate::modrep::{rank_of_vectors, Module, ModuleMap};

/// Fitting trials without a split before a module counts as indecomposable.
pub const INDECOMPOSABLE_TRIALS: usize = 64;

/// Target failure probability of one randomized verdict is `2^-SECURITY_BITS`.
pub const SECURITY_BITS: f64 = 40.0;

#[derive(Clone, Debug)]
pub struct Summand {
    pub module: Module,
    pub multiplicity: usize,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub summands: Vec<Summand>,
    /// every indecomposable piece with its inclusion into the input
    pub pieces: Vec<ModuleMap>,
}

impl Decomposition {
    pub fn count(&self) -> usize {
        self.summands.iter().map(|s| s.multiplicity).sum()
    }

    pub fn indecomposables(&self) -> impl Iterator<Item = &Module> {
        self.summands.iter().flat_map(|s| std::iter::repeat_n(&s.module, s.multiplicity))
    }

    pub fn reassemble(&self) -> Option<Module> {
        let mods: Vec<Module> = self.indecomposables().cloned().collect();
        if mods.is_empty() {
            None
        } else {
            Some(Module::direct_sum(&mods))
        }
    }
}

#[derive(Clone, Debug)]
pub enum IsoVerdict {
    Yes(ModuleMap),
    No(String),
    Unknown(String),
}

impl IsoVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, IsoVerdict::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, IsoVerdict::No(_))
    }
}

/// `End(M)` on its hom basis; `table[i][j]` holds the coordinates of
/// `basis[i] ∘ basis[j]`.
pub struct EndAlgebra {
    pub basis: Vec<ModuleMap>,
    pub table: Vec<Vec<Vec<u32>>>,
}

pub fn end_algebra(m: &Module) -> EndAlgebra {
    let basis = m.hom_basis(m).expect("same algebra");
    let f = m.field();
    let flat: Vec<Vec<u32>> = basis.iter().map(|b| b.flatten()).collect();
    let table = if basis.is_empty() {
        Vec::new()
    } else {
        let coords = Matrix::from_columns(f, flat[0].len(), &flat);
        basis
            .iter()
            .map(|bi| {
                basis
                    .iter()
                    .map(|bj| {
                        let prod = bi.compose(bj).flatten();
                        let rhs = Matrix::from_columns(f, prod.len(), &[prod]);
                        coords.solve_right(&rhs).unwrap().expect("End is closed under composition").column(0)
                    })
                    .collect()
            })
            .collect()
    };
    EndAlgebra { basis, table }
}

fn random_combination<R: Rng + ?Sized>(
    source: &Module,
    target: &Module,
    basis: &[ModuleMap],
    rng: &mut R,
) -> ModuleMap {
    let p = source.field().modulus();
    let coeffs: Vec<u32> = basis.iter().map(|_| rng.gen_range(0..p)).collect();
    ModuleMap::combination(source, target, basis, &coeffs)
}

fn charpoly_of(map: &ModuleMap, f: Fp) -> Poly {
    map.blocks.iter().fold(Poly::one(f), |acc, b| acc.mul(&charpoly(b)))
}

fn eval_map(p: &Poly, map: &ModuleMap) -> ModuleMap {
    ModuleMap {
        source: map.source.clone(),
        target: map.target.clone(),
        blocks: map.blocks.iter().map(|b| p.eval_matrix(b)).collect(),
    }
}

/// Cheap sufficient conditions for indecomposability.
fn obviously_indecomposable(m: &Module) -> bool {
    m.top_dims().iter().sum::<usize>() == 1 || m.socle_dims().iter().sum::<usize>() == 1
}

/// Whether monic `c` equals `(x - a)^n` for some `a`, the usual charpoly of a
/// random endomorphism of an indecomposable module.
fn is_power_of_linear(c: &Poly) -> bool {
    let f = c.field();
    let n = c.degree().unwrap_or(0);
    if n <= 1 {
        return true;
    }
    if (n as u64).is_multiple_of(f.modulus() as u64) {
        return false;
    }
    // the root is minus the mean of the roots
    let a = f.neg(f.mul(c.coeffs()[n - 1], f.inv(f.from_i64(n as i64)).unwrap()));
    let lin = Poly::new(f, vec![f.neg(a), 1]);
    let mut acc = Poly::one(f);
    for _ in 0..n {
        acc = acc.mul(&lin);
    }
    acc == *c
}

/// Tries to split `M` into two nonzero summands, returning their inclusions.
fn try_split<R: Rng + ?Sized>(m: &Module, rng: &mut R) -> Option<(ModuleMap, ModuleMap)> {
    if m.dim() <= 1 || obviously_indecomposable(m) {
        return None;
    }
    let basis = m.hom_basis(m).unwrap();
    if basis.len() <= 1 {
        return None;
    }
    let f = m.field();
    let big = m.dims().iter().copied().max().unwrap_or(0) as u64;
    for _ in 0..INDECOMPOSABLE_TRIALS {
        let phi = random_combination(m, m, &basis, rng);
        let cp = charpoly_of(&phi, f);
        if is_power_of_linear(&cp) {
            continue;
        }
        let factors = irreducible_factors(&cp, rng);
        if factors.len() < 2 {
            continue;
        }
        let g = eval_map(&factors[0], &phi);
        let blocks: Vec<Matrix> = g.blocks.iter().map(|b| b.pow(big)).collect();
        let ker: Vec<Matrix> = blocks.iter().map(|b| b.kernel_basis()).collect();
        let img: Vec<Matrix> = blocks.iter().map(|b| b.column_space()).collect();
        let (_, ki) = m.restrict(&ker);
        let (_, ii) = m.restrict(&img);
        debug_assert_eq!(ki.source.dim() + ii.source.dim(), m.dim());
        if ki.source.dim() > 0 && ii.source.dim() > 0 {
            return Some((ki, ii));
        }
    }
    None
}

fn split_fully<R: Rng + ?Sized>(incl: ModuleMap, rng: &mut R, out: &mut Vec<ModuleMap>) {
    match try_split(&incl.source, rng) {
        None => out.push(incl),
        Some((a, b)) => {
            split_fully(incl.compose(&a), rng, out);
            split_fully(incl.compose(&b), rng, out);
        }
    }
}

/// Cheap isomorphism invariants used to bucket summands.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IsoKey {
    pub dims: Vec<usize>,
    pub top: Vec<usize>,
    pub socle: Vec<usize>,
    pub layers: Vec<Vec<usize>>,
}

pub fn iso_key(m: &Module) -> IsoKey {
    IsoKey { dims: m.dims().to_vec(), top: m.top_dims(), socle: m.socle_dims(), layers: m.loewy_layers() }
}

/// Splits off the simple summands: socle vectors independent of `rad M`
/// each span one, and `rad M` plus the remaining top directions is a
/// complement. Returns the simple inclusions and the complement's.
fn split_simples(m: &Module) -> (Vec<ModuleMap>, ModuleMap) {
    let f = m.field();
    let rad = m.radical_subspace();
    let soc = m.socle_subspace();
    let n = m.dims().len();
    let mut simples = Vec::new();
    let mut rest = Vec::with_capacity(n);
    for v in 0..n {
        let r = &rad[v];
        let pivots = r.hstack(&soc[v]).unwrap().rref().pivot_cols;
        let extra: Vec<usize> = pivots.iter().filter(|&&c| c >= r.cols()).map(|&c| c - r.cols()).collect();
        let c = soc[v].select_columns(&extra);
        for j in 0..c.cols() {
            let basis: Vec<Matrix> = (0..n)
                .map(|u| if u == v { c.select_columns(&[j]) } else { Matrix::zeros(f, m.dims()[u], 0) })
                .collect();
            simples.push(m.restrict(&basis).1);
        }
        let mut w = r.clone();
        for i in r.hstack(&c).unwrap().complement_coordinates() {
            let mut e = Matrix::zeros(f, m.dims()[v], 1);
            e.set(i, 0, 1);
            w = w.hstack(&e).unwrap();
        }
        rest.push(w);
    }
    (simples, m.restrict(&rest).1)
}

pub fn decompose(m: &Module, seed: u64) -> Decomposition {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pieces = Vec::new();
    if m.dim() > 0 {
        let (simples, rest) = split_simples(m);
        pieces.extend(simples);
        if rest.source.dim() > 0 {
            split_fully(rest, &mut rng, &mut pieces);
        }
    }
    let mut keyed: Vec<(IsoKey, ModuleMap)> = pieces.into_iter().map(|p| (iso_key(&p.source), p)).collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    let pieces: Vec<ModuleMap> = keyed.iter().map(|(_, p)| p.clone()).collect();
    let mut summands: Vec<(IsoKey, Summand)> = Vec::new();
    for (key, p) in keyed {
        let found = summands.iter_mut().find(|(k, s)| {
            *k == key && iso_indecomposable(&s.module, &p.source, &mut rng).is_yes()
        });
        match found {
            Some((_, s)) => s.multiplicity += 1,
            None => summands.push((key, Summand { module: p.source.clone(), multiplicity: 1 })),
        }
    }
    Decomposition { summands: summands.into_iter().map(|(_, s)| s).collect(), pieces }
}

/// `ψ(p) = Π_{j≥1} (1 - p^{-j})`, a lower bound for the density of
/// invertible matrices of any size over `F_p`.
pub fn psi(p: u32) -> f64 {
    let q = p as f64;
    let mut acc = 1.0;
    let mut term = 1.0 / q;
    while term > 1e-18 {
        acc *= 1.0 - term;
        term /= q;
    }
    acc
}

/// Trials needed so that `t` independent draws, each succeeding with
/// probability at least `rho`, all fail with probability below `2^-40`.
pub fn trials_for(rho: f64) -> usize {
    if rho >= 1.0 {
        return 1;
    }
    (SECURITY_BITS * std::f64::consts::LN_2 / -(1.0 - rho).ln()).ceil() as usize
}

fn quick_refutation(m: &Module, n: &Module) -> Option<String> {
    if m.algebra() != n.algebra() {
        return Some("different algebras".into());
    }
    if m.dims() != n.dims() {
        return Some(format!("dimension vectors {:?} and {:?}", m.dims(), n.dims()));
    }
    if m.top_dims() != n.top_dims() {
        return Some("top dimension vectors differ".into());
    }
    if m.socle_dims() != n.socle_dims() {
        return Some("socle dimension vectors differ".into());
    }
    None
}

/// Random search for an invertible map with success probability at least
/// `rho` per draw when `M ≅ N`.
fn random_iso<R: Rng + ?Sized>(m: &Module, n: &Module, rho: f64, budget: usize, rng: &mut R) -> IsoVerdict {
    if let Some(why) = quick_refutation(m, n) {
        return IsoVerdict::No(why);
    }
    if m.dim() == 0 {
        return IsoVerdict::Yes(ModuleMap::zero(m, n));
    }
    let hom = m.hom_basis(n).unwrap();
    let end_m = m.hom_dim(m);
    if hom.len() != end_m || n.hom_dim(m) != end_m || n.hom_dim(n) != end_m {
        return IsoVerdict::No("hom dimension profile differs".into());
    }
    let t = trials_for(rho);
    for _ in 0..t.min(budget) {
        let f = random_combination(m, n, &hom, rng);
        if f.is_isomorphism() {
            return IsoVerdict::Yes(f);
        }
    }
    if budget < t {
        IsoVerdict::Unknown(format!("{budget} trials, {t} needed"))
    } else {
        IsoVerdict::No(format!("no invertible map in {t} random draws"))
    }
}

/// Both modules known indecomposable: End has a residue field of size ≥ p.
fn iso_indecomposable<R: Rng + ?Sized>(m: &Module, n: &Module, rng: &mut R) -> IsoVerdict {
    let p = m.field().modulus() as f64;
    random_iso(m, n, 1.0 - 1.0 / p, usize::MAX, rng)
}

/// Direct random search needs at most this many draws; beyond it we compare
/// decompositions instead.
const DIRECT_TRIAL_LIMIT: usize = 64;

pub fn is_isomorphic(m: &Module, n: &Module, seed: u64) -> IsoVerdict {
    if let Some(why) = quick_refutation(m, n) {
        return IsoVerdict::No(why);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = m.top_dims().iter().sum::<usize>().max(1) as i32;
    let rho = psi(m.field().modulus()).powi(c);
    if trials_for(rho) <= DIRECT_TRIAL_LIMIT {
        return random_iso(m, n, rho, usize::MAX, &mut rng);
    }
    if let v @ IsoVerdict::Yes(_) = random_iso(m, n, rho, DIRECT_TRIAL_LIMIT, &mut rng) {
        return v;
    }
    let dm = decompose(m, rng.gen());
    let dn = decompose(n, rng.gen());
    if !same_multiset(&dm, &dn, &mut rng) {
        return IsoVerdict::No("indecomposable summands differ".into());
    }
    match assemble_iso(m, n, &dm, &dn, &mut rng) {
        Some(f) => IsoVerdict::Yes(f),
        None => IsoVerdict::Unknown("matched summands but could not assemble a map".into()),
    }
}

fn same_multiset<R: Rng + ?Sized>(a: &Decomposition, b: &Decomposition, rng: &mut R) -> bool {
    a.count() == b.count() && contains_multiset(a, b, rng)
}

/// The indecomposables of `small` embed, with multiplicity, into those of `big`.
pub fn contains_multiset<R: Rng + ?Sized>(small: &Decomposition, big: &Decomposition, rng: &mut R) -> bool {
    small.summands.iter().all(|s| {
        big.summands
            .iter()
            .find(|b| iso_key(&b.module) == iso_key(&s.module) && iso_indecomposable(&s.module, &b.module, rng).is_yes())
            .is_some_and(|b| b.multiplicity >= s.multiplicity)
    })
}

/// Given matching decompositions, glue piecewise isomorphisms into `M -> N`.
fn assemble_iso<R: Rng + ?Sized>(
    m: &Module,
    n: &Module,
    dm: &Decomposition,
    dn: &Decomposition,
    rng: &mut R,
) -> Option<ModuleMap> {
    let mut used = vec![false; dn.pieces.len()];
    let mut total = ModuleMap::zero(m, n);
    // M = ⊕ pieces; the projection onto each piece comes from inverting
    // the block matrix of all inclusions
    let f = m.field();
    let stacked: Vec<Matrix> = (0..m.dims().len())
        .map(|v| {
            let mut acc = Matrix::zeros(f, m.dims()[v], 0);
            for p in &dm.pieces {
                acc = acc.hstack(&p.blocks[v]).unwrap();
            }
            acc.inverse().expect("pieces span M")
        })
        .collect();
    let mut row_off = vec![0usize; m.dims().len()];
    for p in &dm.pieces {
        let j = (0..dn.pieces.len()).find(|&j| {
            !used[j]
                && iso_key(&dn.pieces[j].source) == iso_key(&p.source)
                && iso_indecomposable(&p.source, &dn.pieces[j].source, rng).is_yes()
        })?;
        used[j] = true;
        let IsoVerdict::Yes(phi) = iso_indecomposable(&p.source, &dn.pieces[j].source, rng) else {
            return None;
        };
        let blocks = (0..m.dims().len())
            .map(|v| {
                let d = p.source.dims()[v];
                let proj = stacked[v].submatrix(row_off[v]..row_off[v] + d, 0..m.dims()[v]);
                &(&dn.pieces[j].blocks[v] * &phi.blocks[v]) * &proj
            })
            .collect();
        for v in 0..m.dims().len() {
            row_off[v] += p.source.dims()[v];
        }
        total = total.add(&ModuleMap { source: m.clone(), target: n.clone(), blocks });
    }
    total.is_isomorphism().then_some(total)
}

/// `X ↪⊕ Y`.
pub fn is_direct_summand(x: &Module, y: &Module, seed: u64) -> bool {
    if x.dim() == 0 {
        return true;
    }
    if x.algebra() != y.algebra() || (0..x.dims().len()).any(|v| x.dims()[v] > y.dims()[v]) {
        return false;
    }
    let tx = x.top_dims();
    let ty = y.top_dims();
    let sx = x.socle_dims();
    let sy = y.socle_dims();
    if (0..tx.len()).any(|v| tx[v] > ty[v] || sx[v] > sy[v]) {
        return false;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fwd = x.hom_basis(y).unwrap();
    let back = y.hom_basis(x).unwrap();
    if fwd.is_empty() || back.is_empty() {
        return false;
    }
    // if X is a summand, a random pair (f, g) has g∘f invertible with
    // probability at least ρ², ρ the unit density of End X
    let c = tx.iter().sum::<usize>().max(1) as i32;
    let rho = psi(x.field().modulus()).powi(c);
    let t = trials_for(rho * rho);
    for _ in 0..t.min(DIRECT_TRIAL_LIMIT) {
        let f = random_combination(x, y, &fwd, &mut rng);
        let g = random_combination(y, x, &back, &mut rng);
        if g.compose(&f).is_isomorphism() {
            return true;
        }
    }
    if t <= DIRECT_TRIAL_LIMIT {
        return false;
    }
    let dx = decompose(x, rng.gen());
    let dy = decompose(y, rng.gen());
    contains_multiset(&dx, &dy, &mut rng)
}

/// Summand test by decomposing both sides and comparing multisets.
pub fn is_direct_summand_by_decomposition(x: &Module, y: &Module, seed: u64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dx = decompose(x, rng.gen());
    let dy = decompose(y, rng.gen());
    contains_multiset(&dx, &dy, &mut rng)
}

/// Number of copies of each `P_v` among the summands of `M`, and a
/// complement of the projective part.
///
/// The multiplicity of `P_v` is the rank of the pairing
/// `Hom(P_v, M) x Hom(M, P_v) -> top(e_v A e_v) = k`, `(y, g) ↦` the `e_v`
/// coefficient of `g(y)`. Maps `g` realizing that rank jointly split off the
/// projective part, and their common kernel is a complement.
pub fn projective_part(m: &Module) -> (Vec<usize>, Vec<Matrix>) {
    let alg = m.algebra();
    let f = m.field();
    let n = alg.num_vertices();
    let mut mults = vec![0; n];
    let mut chosen: Vec<Vec<Matrix>> = vec![Vec::new(); n];
    for v in 0..n {
        if m.dims()[v] == 0 {
            continue;
        }
        let p = Module::proj(alg, v).unwrap();
        let ev = alg.basis_between(v, v).binary_search(&alg.idempotent(v)).unwrap();
        let maps = m.hom_basis(&p).unwrap();
        if maps.is_empty() {
            continue;
        }
        let rows: Vec<Vec<u32>> = maps.iter().map(|g| g.blocks[v].row(ev).to_vec()).collect();
        // independent rows are the pivot columns of the transpose
        let pivots = Matrix::from_columns(f, m.dims()[v], &rows).rref().pivot_cols;
        for &i in &pivots {
            for (u, b) in maps[i].blocks.iter().enumerate() {
                chosen[u].push(b.clone());
            }
        }
        mults[v] = pivots.len();
    }
    let complement = (0..n)
        .map(|u| {
            let mut stack = Matrix::zeros(f, 0, m.dims()[u]);
            for b in &chosen[u] {
                stack = stack.vstack(b).unwrap();
            }
            stack.kernel_basis()
        })
        .collect();
    (mults, complement)
}

/// Sum of the non-projective indecomposable summands.
pub fn strip_projectives(m: &Module) -> Module {
    let (mults, complement) = projective_part(m);
    if mults.iter().all(|&k| k == 0) {
        return m.clone();
    }
    m.restrict(&complement).0
}

/// Every indecomposable summand of `M` is a summand of some generator.
pub fn in_add(m: &Module, generators: &[Module], seed: u64) -> bool {
    if m.dim() == 0 {
        return true;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gens: Vec<Decomposition> = generators.iter().map(|g| decompose(g, rng.gen())).collect();
    let dm = decompose(m, rng.gen());
    dm.summands.iter().all(|s| {
        let key = iso_key(&s.module);
        gens.iter().any(|g| {
            g.summands
                .iter()
                .any(|b| iso_key(&b.module) == key && iso_indecomposable(&s.module, &b.module, &mut rng).is_yes())
        })
    })
}

/// Rank of a family of maps as vectors.
pub fn span_dim(maps: &[ModuleMap]) -> usize {
    if maps.is_empty() {
        return 0;
    }
    let f = maps[0].source.field();
    rank_of_vectors(f, &maps.iter().map(|m| m.flatten()).collect::<Vec<_>>())
}
