//! Right modules over a based algebra, given by one matrix per generator,
//! and their homomorphisms.
//!
//! A generator in `e_s A e_t` acts as a `dims[t] x dims[s]` matrix on column
//! vectors, so a word `g h` acts as `act(h) * act(g)`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::algebra::BasedAlgebra;
use crate::error::{Error, Result};
use crate::exactla::{Matrix, PrimeField, Subspace};

#[derive(Clone, Debug)]
pub struct Module {
    pub algebra: Arc<BasedAlgebra>,
    pub dims: Vec<usize>,
    pub action: Vec<Matrix>,
}

impl PartialEq for Module {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.algebra, &other.algebra)
            && self.dims == other.dims
            && self.action == other.action
    }
}

impl Module {
    /// Builds a module and checks that it respects the relations.
    pub fn new(algebra: Arc<BasedAlgebra>, dims: Vec<usize>, action: Vec<Matrix>) -> Result<Self> {
        let m = Module::new_unchecked(algebra, dims, action)?;
        m.validate()?;
        Ok(m)
    }

    /// Checks only matrix shapes.
    pub fn new_unchecked(
        algebra: Arc<BasedAlgebra>,
        dims: Vec<usize>,
        action: Vec<Matrix>,
    ) -> Result<Self> {
        if dims.len() != algebra.num_vertices() || action.len() != algebra.generators.len() {
            return Err(Error::InvalidModule("wrong number of vertices or generators".into()));
        }
        for (g, m) in algebra.generators.iter().zip(&action) {
            if m.rows() != dims[g.target] || m.cols() != dims[g.source] {
                return Err(Error::InvalidModule(format!(
                    "matrix for {} has shape {}x{}, expected {}x{}",
                    g.name,
                    m.rows(),
                    m.cols(),
                    dims[g.target],
                    dims[g.source]
                )));
            }
        }
        Ok(Module {
            algebra,
            dims,
            action,
        })
    }

    pub fn field(&self) -> PrimeField {
        self.algebra.field
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn offsets(&self) -> Vec<usize> {
        let mut o = Vec::with_capacity(self.dims.len());
        let mut acc = 0;
        for &d in &self.dims {
            o.push(acc);
            acc += d;
        }
        o
    }

    pub fn act_word(&self, start: usize, word: &[usize]) -> Matrix {
        let f = self.field();
        let mut m = Matrix::identity(f, self.dims[start]);
        for &g in word {
            m = self.action[g].mul(&m);
        }
        m
    }

    /// Action of basis element `i` as a map `M_source -> M_target`.
    pub fn act_basis(&self, i: usize) -> Matrix {
        let b = &self.algebra.basis[i];
        self.act_word(b.source, &b.word)
    }

    /// Action of an element supported in the block `e_s A e_t`.
    pub fn act_element(&self, s: usize, t: usize, x: &[u32]) -> Matrix {
        let f = self.field();
        let mut m = Matrix::zero(f, self.dims[t], self.dims[s]);
        for &i in self.algebra.block(s, t) {
            if x[i] != 0 {
                m.axpy(x[i], &self.act_basis(i));
            }
        }
        m
    }

    pub fn validate(&self) -> Result<()> {
        let alg = &self.algebra;
        let acts: Vec<Matrix> = (0..alg.dim()).map(|i| self.act_basis(i)).collect();
        for (gi, g) in alg.generators.iter().enumerate() {
            if self.act_element(g.source, g.target, &g.element) != self.action[gi] {
                return Err(Error::InvalidModule(format!(
                    "generator {} does not act as its algebra element",
                    g.name
                )));
            }
            for (bi, b) in alg.basis.iter().enumerate() {
                if b.target != g.source {
                    continue;
                }
                let lhs = self.action[gi].mul(&acts[bi]);
                let prod = alg.mul(&alg.unit_vector(bi), &g.element);
                let rhs = self.act_element(b.source, g.target, &prod);
                if lhs != rhs {
                    return Err(Error::InvalidModule(format!(
                        "relation violated for {} * {}",
                        b.label, g.name
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn zero(algebra: Arc<BasedAlgebra>) -> Self {
        let f = algebra.field;
        let action = algebra
            .generators
            .iter()
            .map(|_| Matrix::zero(f, 0, 0))
            .collect();
        Module {
            dims: vec![0; algebra.num_vertices()],
            algebra,
            action,
        }
    }

    pub fn simple(algebra: Arc<BasedAlgebra>, v: usize) -> Self {
        let f = algebra.field;
        let mut dims = vec![0; algebra.num_vertices()];
        dims[v] = 1;
        let action = algebra
            .generators
            .iter()
            .map(|g| Matrix::zero(f, dims[g.target], dims[g.source]))
            .collect();
        Module {
            algebra,
            dims,
            action,
        }
    }

    /// The indecomposable projective `e_v A`, with basis the basis elements
    /// starting at `v`.
    pub fn projective(algebra: Arc<BasedAlgebra>, v: usize) -> Self {
        let f = algebra.field;
        let nv = algebra.num_vertices();
        let dims: Vec<usize> = (0..nv).map(|w| algebra.block(v, w).len()).collect();
        let action = algebra
            .generators
            .iter()
            .map(|g| {
                let src = algebra.block(v, g.source);
                let tgt = algebra.block(v, g.target);
                let mut m = Matrix::zero(f, tgt.len(), src.len());
                for (c, &x) in src.iter().enumerate() {
                    let prod = algebra.mul(&algebra.unit_vector(x), &g.element);
                    for (r, &y) in tgt.iter().enumerate() {
                        m.set(r, c, prod[y]);
                    }
                }
                m
            })
            .collect();
        Module {
            algebra,
            dims,
            action,
        }
    }

    /// The indecomposable injective `D(A e_v)`: at `w` the dual of
    /// `e_w A e_v`, with `(phi . g)(y) = phi(g y)`.
    pub fn injective(algebra: Arc<BasedAlgebra>, v: usize) -> Self {
        let f = algebra.field;
        let nv = algebra.num_vertices();
        let dims: Vec<usize> = (0..nv).map(|w| algebra.block(w, v).len()).collect();
        let action = algebra
            .generators
            .iter()
            .map(|g| {
                let src = algebra.block(g.source, v);
                let tgt = algebra.block(g.target, v);
                let mut m = Matrix::zero(f, tgt.len(), src.len());
                for (r, &y) in tgt.iter().enumerate() {
                    let prod = algebra.mul(&g.element, &algebra.unit_vector(y));
                    for (c, &x) in src.iter().enumerate() {
                        m.set(r, c, prod[x]);
                    }
                }
                m
            })
            .collect();
        Module {
            algebra,
            dims,
            action,
        }
    }

    /// Direct sum with the canonical inclusions and projections.
    pub fn direct_sum(algebra: &Arc<BasedAlgebra>, parts: &[Module]) -> DirectSum {
        let f = algebra.field;
        let nv = algebra.num_vertices();
        let mut dims = vec![0; nv];
        for p in parts {
            for v in 0..nv {
                dims[v] += p.dims[v];
            }
        }
        let action = (0..algebra.generators.len())
            .map(|g| {
                let gen = &algebra.generators[g];
                let mut m = Matrix::zero(f, dims[gen.target], dims[gen.source]);
                let (mut r0, mut c0) = (0, 0);
                for p in parts {
                    m.set_block(r0, c0, &p.action[g]);
                    r0 += p.dims[gen.target];
                    c0 += p.dims[gen.source];
                }
                m
            })
            .collect();
        let sum = Module {
            algebra: algebra.clone(),
            dims: dims.clone(),
            action,
        };
        let mut inclusions = Vec::new();
        let mut projections = Vec::new();
        let mut offs = vec![0; nv];
        for p in parts {
            let inc: Vec<Matrix> = (0..nv)
                .map(|v| {
                    let mut m = Matrix::zero(f, dims[v], p.dims[v]);
                    m.set_block(offs[v], 0, &Matrix::identity(f, p.dims[v]));
                    m
                })
                .collect();
            let proj: Vec<Matrix> = inc.iter().map(|m| m.transpose()).collect();
            inclusions.push(ModuleMap::from_blocks(p.clone(), sum.clone(), inc));
            projections.push(ModuleMap::from_blocks(sum.clone(), p.clone(), proj));
            for v in 0..nv {
                offs[v] += p.dims[v];
            }
        }
        DirectSum {
            module: sum,
            inclusions,
            projections,
        }
    }

    /// Module whose underlying spaces are the column spans of `basis[v]`,
    /// which must be closed under the action.
    pub fn submodule(&self, basis: Vec<Matrix>) -> Result<(Module, ModuleMap)> {
        let dims: Vec<usize> = basis.iter().map(|b| b.cols()).collect();
        let mut action = Vec::new();
        for (gi, g) in self.algebra.generators.iter().enumerate() {
            if dims[g.source] == 0 || dims[g.target] == 0 {
                action.push(Matrix::zero(self.field(), dims[g.target], dims[g.source]));
                continue;
            }
            let img = self.action[gi].mul(&basis[g.source]);
            let sol = basis[g.target].solve(&img)?;
            action.push(sol.particular.ok_or_else(|| {
                Error::InvalidModule("subspace is not closed under the action".into())
            })?);
        }
        let sub = Module {
            algebra: self.algebra.clone(),
            dims,
            action,
        };
        let inc = ModuleMap::from_blocks(sub.clone(), self.clone(), basis);
        Ok((sub, inc))
    }

    /// The submodule generated by vectors `(vertex, coordinates)`.
    pub fn generated_by(&self, gens: &[(usize, Vec<u32>)]) -> (Module, ModuleMap) {
        let f = self.field();
        let nv = self.dims.len();
        let mut spans: Vec<Subspace> = (0..nv).map(|v| Subspace::new(f, self.dims[v])).collect();
        let mut queue: Vec<(usize, Vec<u32>)> = gens.to_vec();
        while let Some((v, x)) = queue.pop() {
            if !spans[v].insert(&x) {
                continue;
            }
            for (gi, g) in self.algebra.generators.iter().enumerate() {
                if g.source == v {
                    queue.push((g.target, self.action[gi].mul_vec(&x)));
                }
            }
        }
        let basis = spans
            .iter()
            .zip(&self.dims)
            .map(|(s, &d)| Matrix::from_columns(f, d, s.basis()))
            .collect();
        self.submodule(basis).expect("closed under the action")
    }

    /// Quotient by the submodule spanned per vertex by `span[v]` (columns).
    pub fn quotient(&self, span: &[Matrix]) -> (Module, ModuleMap) {
        let (q, map, _) = self.quotient_with_section(span);
        (q, map)
    }

    /// Quotient together with a linear (not necessarily module) section of
    /// the projection, given per vertex.
    pub fn quotient_with_section(&self, span: &[Matrix]) -> (Module, ModuleMap, Vec<Matrix>) {
        let f = self.field();
        let nv = self.dims.len();
        let subs: Vec<Subspace> = (0..nv)
            .map(|v| {
                let mut s = Subspace::new(f, self.dims[v]);
                for c in 0..span[v].cols() {
                    s.insert(&span[v].col(c));
                }
                s
            })
            .collect();
        let comp: Vec<Vec<usize>> = subs.iter().map(|s| s.complement_positions()).collect();
        let dims: Vec<usize> = comp.iter().map(|c| c.len()).collect();
        let proj: Vec<Matrix> = (0..nv)
            .map(|v| {
                let cols: Vec<Vec<u32>> = (0..self.dims[v])
                    .map(|j| {
                        let mut e = vec![0; self.dims[v]];
                        e[j] = 1;
                        subs[v].quotient_coords(&e)
                    })
                    .collect();
                Matrix::from_columns(f, dims[v], &cols)
            })
            .collect();
        let action = self
            .algebra
            .generators
            .iter()
            .enumerate()
            .map(|(gi, g)| {
                let lift = Matrix::identity(f, self.dims[g.source]).select_columns(&comp[g.source]);
                proj[g.target].mul(&self.action[gi]).mul(&lift)
            })
            .collect();
        let q = Module {
            algebra: self.algebra.clone(),
            dims,
            action,
        };
        let map = ModuleMap::from_blocks(self.clone(), q.clone(), proj);
        let section = (0..nv)
            .map(|v| Matrix::identity(f, self.dims[v]).select_columns(&comp[v]))
            .collect();
        (q, map, section)
    }

    /// Twist along an automorphism: `(sigma M)_{perm(v)} = M_v`, and a
    /// generator `g` acts as `sigma^{-1}(g)` did on `M`.
    pub fn twist(&self, aut: &Automorphism) -> Module {
        let alg = &self.algebra;
        let nv = alg.num_vertices();
        let mut dims = vec![0; nv];
        for v in 0..nv {
            dims[aut.perm[v]] = self.dims[v];
        }
        let inv_perm = aut.inverse_perm();
        let action = alg
            .generators
            .iter()
            .map(|g| {
                let pre = aut.apply_inverse(&g.element);
                self.act_element(inv_perm[g.source], inv_perm[g.target], &pre)
            })
            .collect();
        Module {
            algebra: alg.clone(),
            dims,
            action,
        }
    }

    /// Socle at each vertex: common kernel of all generators leaving it.
    pub fn socle_basis(&self) -> Vec<Matrix> {
        let f = self.field();
        (0..self.dims.len())
            .map(|v| {
                let mut stack = Matrix::zero(f, 0, self.dims[v]);
                for (gi, g) in self.algebra.generators.iter().enumerate() {
                    if g.source == v {
                        stack = stack.vstack(&self.action[gi]);
                    }
                }
                stack.kernel_basis()
            })
            .collect()
    }

    /// Radical at each vertex: span of the images of generators arriving there.
    pub fn radical_span(&self) -> Vec<Matrix> {
        let f = self.field();
        (0..self.dims.len())
            .map(|v| {
                let mut span = Matrix::zero(f, self.dims[v], 0);
                for (gi, g) in self.algebra.generators.iter().enumerate() {
                    if g.target == v {
                        span = span.hstack(&self.action[gi]);
                    }
                }
                span
            })
            .collect()
    }

    pub fn top_dims(&self) -> Vec<usize> {
        self.radical_span()
            .iter()
            .zip(&self.dims)
            .map(|(r, &d)| d - r.rank())
            .collect()
    }

    pub fn socle_dims(&self) -> Vec<usize> {
        self.socle_basis().iter().map(|s| s.cols()).collect()
    }

    pub fn to_spec(&self) -> ModuleSpec {
        ModuleSpec {
            dims: self.dims.clone(),
            matrices: self
                .algebra
                .generators
                .iter()
                .zip(&self.action)
                .map(|(g, m)| (g.name.clone(), matrix_rows(m)))
                .collect(),
        }
    }

    pub fn from_spec(algebra: Arc<BasedAlgebra>, spec: &ModuleSpec) -> Result<Self> {
        let f = algebra.field;
        let mut action = Vec::new();
        for g in &algebra.generators {
            let (r, c) = (
                *spec.dims.get(g.target).unwrap_or(&0),
                *spec.dims.get(g.source).unwrap_or(&0),
            );
            let m = match spec.matrices.get(&g.name) {
                None => Matrix::zero(f, r, c),
                Some(rows) => {
                    if rows.len() != r || rows.iter().any(|row| row.len() != c) {
                        return Err(Error::InvalidModule(format!(
                            "matrix for {} must be {r}x{c}",
                            g.name
                        )));
                    }
                    let data = rows.iter().flatten().map(|&x| f.reduce(x)).collect();
                    Matrix::from_vec(f, r, c, data)?
                }
            };
            action.push(m);
        }
        Module::new(algebra, spec.dims.clone(), action)
    }
}

fn matrix_rows(m: &Matrix) -> Vec<Vec<i64>> {
    (0..m.rows())
        .map(|r| m.row(r).iter().map(|&x| x as i64).collect())
        .collect()
}

/// Serializable module description: dimensions and one matrix per named
/// generator (rows indexed by the target vertex). Missing matrices are zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleSpec {
    pub dims: Vec<usize>,
    #[serde(default)]
    pub matrices: std::collections::BTreeMap<String, Vec<Vec<i64>>>,
}

pub struct DirectSum {
    pub module: Module,
    pub inclusions: Vec<ModuleMap>,
    pub projections: Vec<ModuleMap>,
}

/// Algebra automorphism: a vertex permutation and the images of basis
/// elements (column `i` of `matrix` is the image of basis element `i`).
#[derive(Clone, Debug)]
pub struct Automorphism {
    pub perm: Vec<usize>,
    pub matrix: Matrix,
    pub inverse: Matrix,
}

impl Automorphism {
    pub fn new(perm: Vec<usize>, matrix: Matrix) -> Result<Self> {
        let inverse = matrix
            .invert()?
            .ok_or_else(|| Error::InvalidModule("automorphism matrix is singular".into()))?;
        Ok(Automorphism {
            perm,
            matrix,
            inverse,
        })
    }

    pub fn identity(alg: &BasedAlgebra) -> Self {
        let m = Matrix::identity(alg.field, alg.dim());
        Automorphism {
            perm: (0..alg.num_vertices()).collect(),
            inverse: m.clone(),
            matrix: m,
        }
    }

    pub fn apply(&self, x: &[u32]) -> Vec<u32> {
        self.matrix.mul_vec(x)
    }

    pub fn apply_inverse(&self, x: &[u32]) -> Vec<u32> {
        self.inverse.mul_vec(x)
    }

    pub fn inverse_perm(&self) -> Vec<usize> {
        let mut inv = vec![0; self.perm.len()];
        for (v, &w) in self.perm.iter().enumerate() {
            inv[w] = v;
        }
        inv
    }

    /// Checks multiplicativity on basis pairs and compatibility with vertices.
    pub fn check(&self, alg: &BasedAlgebra) -> Result<()> {
        for (v, &e) in alg.idempotents.iter().enumerate() {
            if self.apply(&alg.unit_vector(e)) != alg.unit_vector(alg.idempotents[self.perm[v]]) {
                return Err(Error::InvalidModule("automorphism moves idempotents".into()));
            }
        }
        for i in 0..alg.dim() {
            for j in 0..alg.dim() {
                let lhs = self.apply(&alg.mul(&alg.unit_vector(i), &alg.unit_vector(j)));
                let rhs = alg.mul(
                    &self.apply(&alg.unit_vector(i)),
                    &self.apply(&alg.unit_vector(j)),
                );
                if lhs != rhs {
                    return Err(Error::InvalidModule(format!(
                        "automorphism is not multiplicative on ({i}, {j})"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Homomorphism of modules, one matrix per vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleMap {
    pub source: Module,
    pub target: Module,
    pub blocks: Vec<Matrix>,
}

impl ModuleMap {
    pub fn from_blocks(source: Module, target: Module, blocks: Vec<Matrix>) -> Self {
        ModuleMap {
            source,
            target,
            blocks,
        }
    }

    pub fn zero(source: &Module, target: &Module) -> Self {
        let f = source.field();
        let blocks = (0..source.dims.len())
            .map(|v| Matrix::zero(f, target.dims[v], source.dims[v]))
            .collect();
        ModuleMap::from_blocks(source.clone(), target.clone(), blocks)
    }

    pub fn identity(m: &Module) -> Self {
        let f = m.field();
        let blocks = m.dims.iter().map(|&d| Matrix::identity(f, d)).collect();
        ModuleMap::from_blocks(m.clone(), m.clone(), blocks)
    }

    pub fn field(&self) -> PrimeField {
        self.source.field()
    }

    /// `self` after `first`.
    pub fn compose(&self, first: &ModuleMap) -> ModuleMap {
        let blocks = self
            .blocks
            .iter()
            .zip(&first.blocks)
            .map(|(a, b)| a.mul(b))
            .collect();
        ModuleMap::from_blocks(first.source.clone(), self.target.clone(), blocks)
    }

    pub fn add(&self, other: &ModuleMap) -> ModuleMap {
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a.add(b))
            .collect();
        ModuleMap::from_blocks(self.source.clone(), self.target.clone(), blocks)
    }

    pub fn sub(&self, other: &ModuleMap) -> ModuleMap {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ModuleMap {
        self.scale(self.field().neg(1))
    }

    pub fn scale(&self, c: u32) -> ModuleMap {
        let blocks = self.blocks.iter().map(|a| a.scale(c)).collect();
        ModuleMap::from_blocks(self.source.clone(), self.target.clone(), blocks)
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(|b| b.is_zero())
    }

    pub fn is_iso(&self) -> bool {
        self.blocks.iter().all(|b| b.is_invertible())
    }

    pub fn is_mono(&self) -> bool {
        self.blocks.iter().all(|b| b.rank() == b.cols())
    }

    pub fn is_epi(&self) -> bool {
        self.blocks.iter().all(|b| b.rank() == b.rows())
    }

    /// Inverse of an isomorphism.
    pub fn inverse(&self) -> Option<ModuleMap> {
        let mut blocks = Vec::new();
        for b in &self.blocks {
            blocks.push(b.invert().ok()??);
        }
        Some(ModuleMap::from_blocks(
            self.target.clone(),
            self.source.clone(),
            blocks,
        ))
    }

    /// Commutes with every generator.
    pub fn is_homomorphism(&self) -> bool {
        self.source
            .algebra
            .generators
            .iter()
            .enumerate()
            .all(|(gi, g)| {
                self.target.action[gi].mul(&self.blocks[g.source])
                    == self.blocks[g.target].mul(&self.source.action[gi])
            })
    }

    pub fn flatten(&self) -> Vec<u32> {
        self.blocks
            .iter()
            .flat_map(|b| b.data().iter().copied())
            .collect()
    }

    pub fn kernel(&self) -> (Module, ModuleMap) {
        let basis = self.blocks.iter().map(|b| b.kernel_basis()).collect();
        self.source
            .submodule(basis)
            .expect("kernel is a submodule")
    }

    pub fn cokernel(&self) -> (Module, ModuleMap) {
        self.target.quotient(&self.blocks)
    }

    /// Image with the factorization `self = mono * epi`.
    pub fn image(&self) -> (Module, ModuleMap, ModuleMap) {
        let basis: Vec<Matrix> = self
            .blocks
            .iter()
            .map(|b| b.transpose().row_space().transpose())
            .collect();
        let (im, mono) = self.target.submodule(basis.clone()).expect("image is a submodule");
        let epi_blocks = self
            .blocks
            .iter()
            .zip(&basis)
            .map(|(b, bs)| {
                if bs.cols() == 0 {
                    Matrix::zero(b.field(), 0, b.cols())
                } else {
                    bs.solve(b)
                        .expect("shapes agree")
                        .particular
                        .expect("columns lie in the image")
                }
            })
            .collect();
        let epi = ModuleMap::from_blocks(self.source.clone(), im.clone(), epi_blocks);
        (im, epi, mono)
    }
}

/// Basis of `Hom_A(M, N)` with a coordinate solver.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub source: Module,
    pub target: Module,
    pub basis: Vec<ModuleMap>,
    pivot_rows: Vec<usize>,
    pivot_inverse: Matrix,
}

impl HomSpace {
    pub fn new(m: &Module, n: &Module) -> Self {
        let f = m.field();
        let alg = &m.algebra;
        let nv = m.dims.len();
        let mut offs = Vec::with_capacity(nv);
        let mut unknowns = 0;
        for v in 0..nv {
            offs.push(unknowns);
            unknowns += n.dims[v] * m.dims[v];
        }
        let mut rows: Vec<Vec<u32>> = Vec::new();
        for (gi, g) in alg.generators.iter().enumerate() {
            let (s, t) = (g.source, g.target);
            let ng = &n.action[gi];
            let mg = &m.action[gi];
            // (N(g) f_s - f_t M(g))[r, c] = 0
            for r in 0..n.dims[t] {
                for c in 0..m.dims[s] {
                    let mut row = vec![0u32; unknowns];
                    for k in 0..n.dims[s] {
                        let x = ng.get(r, k);
                        if x != 0 {
                            let idx = offs[s] + k * m.dims[s] + c;
                            row[idx] = f.add(row[idx], x);
                        }
                    }
                    for k in 0..m.dims[t] {
                        let x = mg.get(k, c);
                        if x != 0 {
                            let idx = offs[t] + r * m.dims[t] + k;
                            row[idx] = f.sub(row[idx], x);
                        }
                    }
                    if row.iter().any(|&x| x != 0) {
                        rows.push(row);
                    }
                }
            }
        }
        let kernel = if rows.is_empty() {
            Matrix::identity(f, unknowns)
        } else {
            let data: Vec<u32> = rows.iter().flatten().copied().collect();
            Matrix::from_vec(f, rows.len(), unknowns, data)
                .expect("shape")
                .kernel_basis()
        };
        let basis: Vec<ModuleMap> = (0..kernel.cols())
            .map(|j| {
                let col = kernel.col(j);
                let blocks = (0..nv)
                    .map(|v| {
                        let data = col[offs[v]..offs[v] + n.dims[v] * m.dims[v]].to_vec();
                        Matrix::from_vec(f, n.dims[v], m.dims[v], data).expect("shape")
                    })
                    .collect();
                ModuleMap::from_blocks(m.clone(), n.clone(), blocks)
            })
            .collect();
        let r = kernel.independent_rows();
        let pivot_inverse = kernel
            .select_rows(&r)
            .invert()
            .expect("square")
            .expect("pivot rows are independent");
        HomSpace {
            source: m.clone(),
            target: n.clone(),
            basis,
            pivot_rows: r,
            pivot_inverse,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of a homomorphism in the basis.
    pub fn coords(&self, h: &ModuleMap) -> Vec<u32> {
        let flat = h.flatten();
        let picked: Vec<u32> = self.pivot_rows.iter().map(|&r| flat[r]).collect();
        self.pivot_inverse.mul_vec(&picked)
    }

    pub fn combine(&self, coords: &[u32]) -> ModuleMap {
        let mut out = ModuleMap::zero(&self.source, &self.target);
        for (c, b) in coords.iter().zip(&self.basis) {
            if *c != 0 {
                out = out.add(&b.scale(*c));
            }
        }
        out
    }
}

/// Some `h: A -> B` with `g * h = f`, for `f: A -> C` and `g: B -> C`.
pub fn factor_through(f: &ModuleMap, g: &ModuleMap) -> Option<ModuleMap> {
    let hs = HomSpace::new(&f.source, &g.source);
    solve_combination(&hs.basis, |h| g.compose(h), f).map(|c| hs.combine(&c))
}

/// Some `h: B -> C` with `h * i = f`, for `f: A -> C` and `i: A -> B`.
pub fn extend_along(f: &ModuleMap, i: &ModuleMap) -> Option<ModuleMap> {
    let hs = HomSpace::new(&i.target, &f.target);
    solve_combination(&hs.basis, |h| h.compose(i), f).map(|c| hs.combine(&c))
}

/// Coefficients `c` with `sum c_k op(basis_k) = want`.
pub fn solve_combination(
    basis: &[ModuleMap],
    op: impl Fn(&ModuleMap) -> ModuleMap,
    want: &ModuleMap,
) -> Option<Vec<u32>> {
    let f = want.field();
    let target = want.flatten();
    if basis.is_empty() {
        return target.iter().all(|&x| x == 0).then(Vec::new);
    }
    let cols: Vec<Vec<u32>> = basis.iter().map(|b| op(b).flatten()).collect();
    let m = Matrix::from_columns(f, target.len(), &cols);
    m.solve_vec(&target)
}
