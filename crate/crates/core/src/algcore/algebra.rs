//! Finite-dimensional based algebras and the builders that produce them from
//! quiver presentations.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::quiver::{AlgebraPresentation, Path, PathExpr, Quiver};
use crate::error::{Error, Result};
use crate::exactla::{PrimeField, Subspace};

/// A basis element lying in `e_source A e_target`, written as a word in the
/// generators (the empty word is the idempotent at `source`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisElem {
    pub source: usize,
    pub target: usize,
    pub word: Vec<usize>,
    pub label: String,
}

/// A generator of the radical; `element` holds its coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub source: usize,
    pub target: usize,
    pub element: Vec<u32>,
}

/// Basic algebra with a basis adapted to the vertex idempotents, given by
/// structure constants. Products follow path order: `x * y` is nonzero only
/// if `x` ends where `y` starts.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BasedAlgebra {
    pub field: PrimeField,
    pub vertex_labels: Vec<String>,
    pub basis: Vec<BasisElem>,
    pub idempotents: Vec<usize>,
    pub generators: Vec<Generator>,
    /// Sparse products of basis elements, indexed `i * dim + j`.
    mult: Vec<Vec<(usize, u32)>>,
    blocks: Vec<Vec<usize>>,
    pub presentation: Option<AlgebraPresentation>,
}

impl BasedAlgebra {
    pub fn from_parts(
        field: PrimeField,
        vertex_labels: Vec<String>,
        basis: Vec<BasisElem>,
        generators: Vec<Generator>,
        mult: Vec<Vec<(usize, u32)>>,
        presentation: Option<AlgebraPresentation>,
    ) -> Result<Self> {
        let nv = vertex_labels.len();
        let dim = basis.len();
        if mult.len() != dim * dim {
            return Err(Error::Dimension("structure constant table size".into()));
        }
        let mut idempotents = vec![usize::MAX; nv];
        for (i, b) in basis.iter().enumerate() {
            if b.word.is_empty() {
                if b.source != b.target || idempotents[b.source] != usize::MAX {
                    return Err(Error::InvalidModule(
                        "basis must contain exactly one idempotent per vertex".into(),
                    ));
                }
                idempotents[b.source] = i;
            }
        }
        if idempotents.contains(&usize::MAX) {
            return Err(Error::InvalidModule("missing vertex idempotent".into()));
        }
        let mut blocks = vec![Vec::new(); nv * nv];
        for (i, b) in basis.iter().enumerate() {
            blocks[b.source * nv + b.target].push(i);
        }
        Ok(BasedAlgebra {
            field,
            vertex_labels,
            basis,
            idempotents,
            generators,
            mult,
            blocks,
            presentation,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_labels.len()
    }

    /// Basis indices of `e_s A e_t`.
    pub fn block(&self, s: usize, t: usize) -> &[usize] {
        &self.blocks[s * self.num_vertices() + t]
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> &[(usize, u32)] {
        &self.mult[i * self.dim() + j]
    }

    pub fn mul(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        let f = self.field;
        let mut out = vec![0; self.dim()];
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let ab = f.mul(a, b);
                for &(k, c) in self.mul_basis(i, j) {
                    out[k] = f.add(out[k], f.mul(ab, c));
                }
            }
        }
        out
    }

    pub fn unit_vector(&self, i: usize) -> Vec<u32> {
        let mut v = vec![0; self.dim()];
        v[i] = 1;
        v
    }

    /// Dimension of `e_s A e_t` for all pairs, row `s`.
    /// Arrow multiplicities `[source][target]` of the Gabriel quiver:
    /// radical basis elements modulo products of two of them.
    pub fn gabriel_quiver(&self) -> Vec<Vec<usize>> {
        let nv = self.num_vertices();
        let radical = |s: usize, t: usize| -> Vec<usize> {
            self.block(s, t)
                .iter()
                .copied()
                .filter(|&b| !self.basis[b].word.is_empty())
                .collect()
        };
        let mut out = vec![vec![0; nv]; nv];
        for s in 0..nv {
            for t in 0..nv {
                let block = self.block(s, t);
                let mut squares = Subspace::new(self.field, block.len());
                for u in 0..nv {
                    for x in radical(s, u) {
                        for y in radical(u, t) {
                            let mut v = vec![0u32; block.len()];
                            for &(b, c) in self.mul_basis(x, y) {
                                let pos = block.iter().position(|&z| z == b).expect("block");
                                v[pos] = c;
                            }
                            squares.insert(&v);
                        }
                    }
                }
                out[s][t] = radical(s, t).len() - squares.dim();
            }
        }
        out
    }

    pub fn cartan_matrix(&self) -> Vec<Vec<usize>> {
        let nv = self.num_vertices();
        (0..nv)
            .map(|s| (0..nv).map(|t| self.block(s, t).len()).collect())
            .collect()
    }

    /// Verifies associativity on basis triples and the unit laws.
    pub fn check_axioms(&self) -> Result<()> {
        let n = self.dim();
        let f = self.field;
        for (v, &e) in self.idempotents.iter().enumerate() {
            for (i, b) in self.basis.iter().enumerate() {
                let left = self.mul(&self.unit_vector(e), &self.unit_vector(i));
                let right = self.mul(&self.unit_vector(i), &self.unit_vector(e));
                let want_l = if b.source == v { self.unit_vector(i) } else { vec![0; n] };
                let want_r = if b.target == v { self.unit_vector(i) } else { vec![0; n] };
                if left != want_l || right != want_r {
                    return Err(Error::InvalidModule(format!(
                        "idempotent {v} does not act as a unit on basis element {i}"
                    )));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let ij = self.mul_basis(i, j);
                if ij.is_empty() {
                    continue;
                }
                for k in 0..n {
                    let mut lhs = vec![0u32; n];
                    for &(m, c) in ij {
                        for &(r, d) in self.mul_basis(m, k) {
                            lhs[r] = f.add(lhs[r], f.mul(c, d));
                        }
                    }
                    let mut rhs = vec![0u32; n];
                    for &(m, c) in self.mul_basis(j, k) {
                        for &(r, d) in self.mul_basis(i, m) {
                            rhs[r] = f.add(rhs[r], f.mul(c, d));
                        }
                    }
                    if lhs != rhs {
                        return Err(Error::InvalidModule(format!(
                            "associativity fails on basis triple ({i}, {j}, {k})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Coordinates of the product of generator words, evaluated in the algebra.
    pub fn word_element(&self, start: usize, word: &[usize]) -> Vec<u32> {
        let mut x = self.unit_vector(self.idempotents[start]);
        for &g in word {
            x = self.mul(&x, &self.generators[g].element);
        }
        x
    }
}

/// Builds the algebra of a presentation. Homogeneous relations use a
/// degree-by-degree normal form; otherwise the quotient of the truncated path
/// algebra `kQ / J^N` is formed, which requires every path of length `N - 1`
/// to vanish modulo the relations.
pub fn build_algebra(pres: &AlgebraPresentation) -> Result<BasedAlgebra> {
    let rels = pres.all_relations()?;
    let graded = rels
        .iter()
        .all(|r| r.is_homogeneous() && r.terms.iter().all(|(_, p)| !p.is_empty()));
    if graded {
        GradedBuilder::run(pres, &rels)
    } else {
        build_truncated(pres, &rels)
    }
}

struct DegreeData {
    /// Path of each basis element of this degree.
    paths: Vec<Path>,
    ends: Vec<usize>,
    pair_index: HashMap<(usize, usize), usize>,
    relations: Subspace,
}

struct GradedBuilder<'a> {
    quiver: &'a Quiver,
    field: PrimeField,
    degrees: Vec<DegreeData>,
}

impl<'a> GradedBuilder<'a> {
    fn run(pres: &'a AlgebraPresentation, rels: &[PathExpr]) -> Result<BasedAlgebra> {
        let q = &pres.quiver;
        let nv = q.num_vertices();
        let f = pres.field;
        let mut b = GradedBuilder {
            quiver: q,
            field: f,
            degrees: vec![DegreeData {
                paths: (0..nv).map(Path::lazy).collect(),
                ends: (0..nv).collect(),
                pair_index: HashMap::new(),
                relations: Subspace::new(f, nv),
            }],
        };
        let mut stabilized = false;
        for len in 1..pres.degree_bound {
            let prev = &b.degrees[len - 1];
            let mut pairs = Vec::new();
            let mut pair_index = HashMap::new();
            for (j, &end) in prev.ends.iter().enumerate() {
                for (a, arr) in q.arrows.iter().enumerate() {
                    if arr.source == end {
                        pair_index.insert((j, a), pairs.len());
                        pairs.push((j, a));
                    }
                }
            }
            let mut sub = Subspace::new(f, pairs.len());
            for r in rels {
                let d = r.terms[0].1.len();
                if d > len {
                    continue;
                }
                let src = r.terms[0].1.start;
                let lower = &b.degrees[len - d];
                for u in 0..lower.paths.len() {
                    if lower.ends[u] != src {
                        continue;
                    }
                    let mut v = vec![0u32; pairs.len()];
                    for (c, p) in &r.terms {
                        let (last, head) = p.arrows.split_last().expect("positive degree");
                        let mut coords = vec![0u32; lower.paths.len()];
                        coords[u] = 1;
                        let coords = b.extend(len - d, coords, head);
                        for (k, &x) in coords.iter().enumerate() {
                            if x != 0 {
                                let pos = pair_index[&(k, *last)];
                                v[pos] = f.add(v[pos], f.mul(*c, x));
                            }
                        }
                    }
                    sub.insert(&v);
                }
            }
            let comp = sub.complement_positions();
            let paths: Vec<Path> = comp
                .iter()
                .map(|&pos| {
                    let (j, a) = pairs[pos];
                    let mut p = prev.paths[j].clone();
                    p.arrows.push(a);
                    p
                })
                .collect();
            let ends = comp.iter().map(|&pos| q.arrows[pairs[pos].1].target).collect();
            let empty = comp.is_empty();
            b.degrees.push(DegreeData {
                paths,
                ends,
                pair_index,
                relations: sub,
            });
            if empty {
                stabilized = true;
                break;
            }
        }
        if !stabilized {
            return Err(Error::NotStabilized(pres.degree_bound));
        }
        b.finish(pres)
    }

    /// Multiplies degree-`deg` coordinates by a sequence of arrows.
    fn extend(&self, mut deg: usize, mut coords: Vec<u32>, arrows: &[usize]) -> Vec<u32> {
        let f = self.field;
        for &a in arrows {
            if deg + 1 >= self.degrees.len() {
                return Vec::new();
            }
            let next = &self.degrees[deg + 1];
            let mut v = vec![0u32; next.relations.ambient()];
            for (k, &x) in coords.iter().enumerate() {
                if x != 0 {
                    if let Some(&pos) = next.pair_index.get(&(k, a)) {
                        v[pos] = f.add(v[pos], x);
                    }
                }
            }
            coords = next.relations.quotient_coords(&v);
            deg += 1;
            if coords.iter().all(|&x| x == 0) {
                return Vec::new();
            }
        }
        coords
    }

    fn finish(self, pres: &AlgebraPresentation) -> Result<BasedAlgebra> {
        let q = self.quiver;
        let mut offsets = Vec::new();
        let mut basis = Vec::new();
        for d in &self.degrees {
            offsets.push(basis.len());
            for (p, &end) in d.paths.iter().zip(&d.ends) {
                basis.push(BasisElem {
                    source: p.start,
                    target: end,
                    word: p.arrows.clone(),
                    label: q.path_name(p),
                });
            }
        }
        let dim = basis.len();
        let global = |deg: usize, coords: &[u32]| -> Vec<(usize, u32)> {
            coords
                .iter()
                .enumerate()
                .filter(|(_, &x)| x != 0)
                .map(|(k, &x)| (offsets[deg] + k, x))
                .collect()
        };
        let degree_of: Vec<usize> = basis.iter().map(|b| b.word.len()).collect();
        let local: Vec<usize> = (0..dim).map(|i| i - offsets[degree_of[i]]).collect();
        let mut mult = vec![Vec::new(); dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                if basis[i].target != basis[j].source {
                    continue;
                }
                let di = degree_of[i];
                let mut coords = vec![0u32; self.degrees[di].paths.len()];
                coords[local[i]] = 1;
                let out = self.extend(di, coords, &basis[j].word);
                if !out.is_empty() {
                    mult[i * dim + j] = global(di + basis[j].word.len(), &out);
                }
            }
        }
        let generators = q
            .arrows
            .iter()
            .enumerate()
            .map(|(a, arr)| {
                let mut el = vec![0u32; dim];
                let coords = self.extend(0, {
                    let mut c = vec![0u32; q.num_vertices()];
                    c[arr.source] = 1;
                    c
                }, &[a]);
                for (k, x) in global(1, &coords) {
                    el[k] = x;
                }
                Generator {
                    name: arr.name.clone(),
                    source: arr.source,
                    target: arr.target,
                    element: el,
                }
            })
            .collect();
        BasedAlgebra::from_parts(
            pres.field,
            q.vertices.clone(),
            basis,
            generators,
            mult,
            Some(pres.clone()),
        )
    }
}

/// Quotient of `kQ / J^N` by the image of the relations, for presentations
/// whose relations are not homogeneous.
fn build_truncated(pres: &AlgebraPresentation, rels: &[PathExpr]) -> Result<BasedAlgebra> {
    let q = &pres.quiver;
    let f = pres.field;
    let nv = q.num_vertices();
    let n = pres.degree_bound;
    // Paths of length < n grouped by endpoints, longest first so that normal
    // forms prefer short paths.
    let mut by_len: Vec<Vec<Path>> = vec![(0..nv).map(Path::lazy).collect()];
    for len in 1..n {
        let mut next = Vec::new();
        for p in &by_len[len - 1] {
            let end = q.path_end(p)?;
            for (a, arr) in q.arrows.iter().enumerate() {
                if arr.source == end {
                    let mut np = p.clone();
                    np.arrows.push(a);
                    next.push(np);
                }
            }
        }
        by_len.push(next);
    }
    let mut block_paths: Vec<Vec<Path>> = vec![Vec::new(); nv * nv];
    for len in (0..n).rev() {
        for p in &by_len[len] {
            let e = q.path_end(p)?;
            block_paths[p.start * nv + e].push(p.clone());
        }
    }
    let index: Vec<HashMap<Path, usize>> = block_paths
        .iter()
        .map(|ps| ps.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect())
        .collect();
    let mut ideals: Vec<Subspace> = block_paths
        .iter()
        .map(|ps| Subspace::new(f, ps.len()))
        .collect();

    let mut queue: Vec<(usize, Vec<u32>)> = Vec::new();
    for r in rels {
        let Some((s, t)) = r.endpoints(q)? else { continue };
        let blk = s * nv + t;
        let mut v = vec![0u32; block_paths[blk].len()];
        for (c, p) in &r.terms {
            if p.len() < n {
                let k = index[blk][p];
                v[k] = f.add(v[k], *c);
            }
        }
        queue.push((blk, v));
    }
    while let Some((blk, v)) = queue.pop() {
        if !ideals[blk].insert(&v) {
            continue;
        }
        let (s, t) = (blk / nv, blk % nv);
        for (a, arr) in q.arrows.iter().enumerate() {
            if arr.source == t {
                let nb = s * nv + arr.target;
                let mut w = vec![0u32; block_paths[nb].len()];
                for (k, &c) in v.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    let mut p = block_paths[blk][k].clone();
                    p.arrows.push(a);
                    if let Some(&m) = index[nb].get(&p) {
                        w[m] = f.add(w[m], c);
                    }
                }
                if w.iter().any(|&x| x != 0) {
                    queue.push((nb, w));
                }
            }
            if arr.target == s {
                let nb = arr.source * nv + t;
                let mut w = vec![0u32; block_paths[nb].len()];
                for (k, &c) in v.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    let old = &block_paths[blk][k];
                    let mut arrows = vec![a];
                    arrows.extend_from_slice(&old.arrows);
                    let p = Path {
                        start: arr.source,
                        arrows,
                    };
                    if let Some(&m) = index[nb].get(&p) {
                        w[m] = f.add(w[m], c);
                    }
                }
                if w.iter().any(|&x| x != 0) {
                    queue.push((nb, w));
                }
            }
        }
    }
    // Stabilization: paths of length n - 1 must vanish in the quotient.
    for p in by_len.last().expect("n >= 1") {
        let blk = p.start * nv + q.path_end(p)?;
        let mut v = vec![0u32; block_paths[blk].len()];
        v[index[blk][p]] = 1;
        if !ideals[blk].contains(&v) {
            return Err(Error::NotStabilized(n));
        }
    }

    let mut basis = Vec::new();
    let mut block_basis: Vec<Vec<usize>> = vec![Vec::new(); nv * nv];
    // Idempotents first so that vertex order is preserved.
    let mut order: Vec<(usize, usize)> = Vec::new();
    for blk in 0..nv * nv {
        for pos in ideals[blk].complement_positions() {
            order.push((blk, pos));
        }
    }
    order.sort_by_key(|&(blk, pos)| (block_paths[blk][pos].len(), blk, pos));
    for (blk, pos) in order {
        let p = &block_paths[blk][pos];
        block_basis[blk].push(basis.len());
        basis.push(BasisElem {
            source: blk / nv,
            target: blk % nv,
            word: p.arrows.clone(),
            label: q.path_name(p),
        });
    }
    // quotient_coords enumerates complement positions in increasing order;
    // map them to global indices.
    let comp_global: Vec<Vec<usize>> = (0..nv * nv)
        .map(|blk| {
            ideals[blk]
                .complement_positions()
                .iter()
                .map(|&pos| {
                    let p = &block_paths[blk][pos];
                    *block_basis[blk]
                        .iter()
                        .find(|&&g| basis[g].word == p.arrows)
                        .expect("basis element present")
                })
                .collect()
        })
        .collect();
    let reduce = |p: &Path| -> Result<Vec<(usize, u32)>> {
        if p.len() >= n {
            return Ok(Vec::new());
        }
        let blk = p.start * nv + q.path_end(p)?;
        let mut v = vec![0u32; block_paths[blk].len()];
        v[index[blk][p]] = 1;
        Ok(ideals[blk]
            .quotient_coords(&v)
            .into_iter()
            .zip(&comp_global[blk])
            .filter(|(c, _)| *c != 0)
            .map(|(c, &g)| (g, c))
            .collect())
    };
    let dim = basis.len();
    let mut mult = vec![Vec::new(); dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            if basis[i].target != basis[j].source {
                continue;
            }
            let mut arrows = basis[i].word.clone();
            arrows.extend_from_slice(&basis[j].word);
            mult[i * dim + j] = reduce(&Path {
                start: basis[i].source,
                arrows,
            })?;
        }
    }
    let mut generators = Vec::new();
    for (a, arr) in q.arrows.iter().enumerate() {
        let mut el = vec![0u32; dim];
        for (g, c) in reduce(&Path {
            start: arr.source,
            arrows: vec![a],
        })? {
            el[g] = c;
        }
        generators.push(Generator {
            name: arr.name.clone(),
            source: arr.source,
            target: arr.target,
            element: el,
        });
    }
    BasedAlgebra::from_parts(
        f,
        q.vertices.clone(),
        basis,
        generators,
        mult,
        Some(pres.clone()),
    )
}

#[cfg(test)]
mod tests {
    use super::super::quiver::parse_presentation;
    use super::*;

    #[test]
    fn path_algebra_of_a2() {
        let p = parse_presentation(
            r#"{"field": 2, "vertices": [1, 2],
                "arrows": [{"name": "a", "source": 1, "target": 2}]}"#,
        )
        .unwrap();
        let a = build_algebra(&p).unwrap();
        assert_eq!(a.dim(), 3);
        a.check_axioms().unwrap();
    }

    #[test]
    fn free_loop_does_not_stabilize() {
        let p = parse_presentation(
            r#"{"field": 3, "vertices": [1], "degree_bound": 5,
                "arrows": [{"name": "x", "source": 1, "target": 1}]}"#,
        )
        .unwrap();
        assert!(matches!(build_algebra(&p), Err(Error::NotStabilized(5))));
    }

    #[test]
    fn truncated_route_matches_graded_route() {
        // x^2 = 0 written with a lazy-free but non-homogeneous relation x^2 + x^3.
        let p = parse_presentation(
            r#"{"field": 3, "vertices": [1], "degree_bound": 6,
                "arrows": [{"name": "x", "source": 1, "target": 1}],
                "relations": [[{"coeff": 1, "path": ["x","x"]}, {"coeff": 1, "path": ["x","x","x"]}]]}"#,
        )
        .unwrap();
        let a = build_algebra(&p).unwrap();
        assert_eq!(a.dim(), 2);
        a.check_axioms().unwrap();
    }
}
