//! Finitely presented functors on a based category, modelled as modules over
//! `E = End(T_1 + ... + T_m)`.

use std::sync::Arc;

use super::category::{BasedCategory, Mor};
use crate::algcore::{Automorphism, BasedAlgebra, BasisElem, Generator, Module, ModuleMap};
use crate::error::{Error, Result};
use crate::exactla::{Matrix, PrimeField};
use crate::frobstab::Frobenius;

/// `E` together with the dictionary between `F(T_j, T_i)` and `e_i E e_j`,
/// the induced automorphism `Sigma_E` and the stable category of `mod E`.
pub struct FunctorCategory {
    pub cat: Arc<BasedCategory>,
    pub algebra: Arc<BasedAlgebra>,
    pub sigma: Automorphism,
    pub frob: Frobenius,
    /// `to_f[i * m + j]` sends `E` coordinates of `e_i E e_j` (in block
    /// order) to coordinates of `F(T_j, T_i)`.
    to_f: Vec<Matrix>,
    from_f: Vec<Matrix>,
}

impl FunctorCategory {
    pub fn new(cat: Arc<BasedCategory>) -> Result<Self> {
        let m = cat.num_objects();
        if m == 0 {
            return Err(Error::EmptyGenerator);
        }
        let f = cat.field;
        // New bases: the identity and a radical basis on the diagonal.
        let mut to_f = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                to_f.push(if i == j {
                    local_basis(&cat, i)?
                } else {
                    Matrix::identity(f, cat.dim(j, i))
                });
            }
        }
        let from_f: Vec<Matrix> = to_f
            .iter()
            .map(|b| b.invert().map(|x| x.expect("basis change")))
            .collect::<Result<_>>()?;

        // Basis: idempotents first, then everything else block by block.
        let mut basis = Vec::new();
        let mut index = vec![Vec::new(); m * m];
        for i in 0..m {
            index[i * m + i].push(basis.len());
            basis.push(BasisElem {
                source: i,
                target: i,
                word: vec![],
                label: format!("e{}", cat.labels[i]),
            });
        }
        let mut generators = Vec::new();
        for i in 0..m {
            for j in 0..m {
                let start = usize::from(i == j);
                for k in start..cat.dim(j, i) {
                    let g = generators.len();
                    index[i * m + j].push(basis.len());
                    basis.push(BasisElem {
                        source: i,
                        target: j,
                        word: vec![g],
                        label: format!("r{}_{}_{}", cat.labels[i], cat.labels[j], k),
                    });
                    generators.push(Generator {
                        name: format!("r{}_{}_{}", cat.labels[i], cat.labels[j], k),
                        source: i,
                        target: j,
                        element: vec![],
                    });
                }
            }
        }
        let dim = basis.len();
        for g in generators.iter_mut() {
            let pos = basis
                .iter()
                .position(|b| b.label == g.name)
                .expect("generator is a basis element");
            g.element = vec![0; dim];
            g.element[pos] = 1;
        }
        let mut mult = vec![Vec::new(); dim * dim];
        for (x, bx) in basis.iter().enumerate() {
            for (y, by) in basis.iter().enumerate() {
                if bx.target != by.source {
                    continue;
                }
                let (i, j, l) = (bx.source, bx.target, by.target);
                let px = index[i * m + j].iter().position(|&b| b == x).expect("indexed");
                let py = index[j * m + l].iter().position(|&b| b == y).expect("indexed");
                let fx = to_f[i * m + j].col(px);
                let fy = to_f[j * m + l].col(py);
                // x * y is x after y: F(T_l, T_j) then F(T_j, T_i).
                let prod = cat.compose(l, j, i, &fy, &fx);
                let coords = from_f[i * m + l].mul_vec(&prod);
                mult[x * dim + y] = coords
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(k, &c)| (index[i * m + l][k], c))
                    .collect();
            }
        }
        let algebra = Arc::new(BasedAlgebra::from_parts(
            f,
            cat.labels.clone(),
            basis,
            generators,
            mult,
            None,
        )?);
        for i in 0..m {
            for j in 0..m {
                debug_assert_eq!(algebra.block(i, j), index[i * m + j].as_slice());
            }
        }

        let mut sig = Matrix::zero(f, dim, dim);
        for i in 0..m {
            for j in 0..m {
                let (si, sj) = (cat.sigma_obj(i), cat.sigma_obj(j));
                for (k, &b) in algebra.block(i, j).iter().enumerate() {
                    let fx = to_f[i * m + j].col(k);
                    let img = from_f[si * m + sj].mul_vec(&cat.sigma_coords(j, i, &fx));
                    for (r, &c) in img.iter().enumerate() {
                        sig.set(algebra.block(si, sj)[r], b, c);
                    }
                }
            }
        }
        let sigma = Automorphism::new(cat.sigma_perm.clone(), sig)?;
        sigma.check(&algebra)?;
        let frob = Frobenius::new(algebra.clone()).map_err(|e| match e {
            Error::NotSelfInjective => Error::EndNotSelfInjective,
            other => other,
        })?;
        Ok(FunctorCategory {
            cat,
            algebra,
            sigma,
            frob,
            to_f,
            from_f,
        })
    }

    pub fn field(&self) -> PrimeField {
        self.cat.field
    }

    /// `E` coordinates of a morphism `T_a -> T_b`, inside `e_b E e_a`.
    pub fn element_of(&self, a: usize, b: usize, coords: &[u32]) -> Vec<u32> {
        let m = self.cat.num_objects();
        let local = self.from_f[b * m + a].mul_vec(coords);
        let mut v = vec![0; self.algebra.dim()];
        for (k, &idx) in self.algebra.block(b, a).iter().enumerate() {
            v[idx] = local[k];
        }
        v
    }

    fn coords_of(&self, a: usize, b: usize, local: &[u32]) -> Vec<u32> {
        let m = self.cat.num_objects();
        self.to_f[b * m + a].mul_vec(local)
    }

    /// The representable `F(-, X)`.
    pub fn representable(&self, x: &[usize]) -> Module {
        let parts: Vec<Module> = x
            .iter()
            .map(|&v| self.frob.projectives[v].clone())
            .collect();
        Module::direct_sum(&self.algebra, &parts).module
    }

    /// `F(-, f)` as a map of representables.
    pub fn yoneda(&self, f: &Mor) -> ModuleMap {
        let alg = &self.algebra;
        let fld = self.field();
        let nv = alg.num_vertices();
        let src = self.representable(&f.source);
        let tgt = self.representable(&f.target);
        let mut blocks: Vec<Matrix> = (0..nv).map(|w| Matrix::zero(fld, tgt.dims[w], src.dims[w])).collect();
        for w in 0..nv {
            let mut c0 = 0;
            for (k, &x) in f.source.iter().enumerate() {
                let qs = alg.block(x, w);
                let mut r0 = 0;
                for (l, &y) in f.target.iter().enumerate() {
                    let ys = alg.block(y, w);
                    let e = self.element_of(x, y, &f.blocks[l][k]);
                    if e.iter().any(|&c| c != 0) {
                        for (ci, &q) in qs.iter().enumerate() {
                            let prod = alg.mul(&e, &alg.unit_vector(q));
                            for (ri, &yb) in ys.iter().enumerate() {
                                if prod[yb] != 0 {
                                    blocks[w].set(r0 + ri, c0 + ci, prod[yb]);
                                }
                            }
                        }
                    }
                    r0 += ys.len();
                }
                c0 += qs.len();
            }
        }
        ModuleMap::from_blocks(src, tgt, blocks)
    }

    /// Inverse of `yoneda` on homomorphisms between representables.
    pub fn unyoneda(&self, h: &ModuleMap, source: &[usize], target: &[usize]) -> Mor {
        let alg = &self.algebra;
        let mut out = Mor::zero(&self.cat, source, target);
        // Position of e_x inside P_X at vertex x.
        for (k, &x) in source.iter().enumerate() {
            let before: usize = source[..k].iter().map(|&s| alg.block(s, x).len()).sum();
            let e = alg.idempotents[x];
            let pos = before + alg.block(x, x).iter().position(|&b| b == e).expect("idempotent");
            let image = h.blocks[x].col(pos);
            let mut r0 = 0;
            for (l, &y) in target.iter().enumerate() {
                let d = alg.block(y, x).len();
                out.blocks[l][k] = self.coords_of(x, y, &image[r0..r0 + d]);
                r0 += d;
            }
        }
        out
    }

    pub fn twist(&self, m: &Module) -> Module {
        m.twist(&self.sigma)
    }

    pub fn twist_map(&self, h: &ModuleMap) -> ModuleMap {
        twist_map(h, &self.sigma)
    }

    /// The isomorphism `Sigma_E(P_X) -> P_{Sigma X}`.
    pub fn twisted_representable_iso(&self, x: &[usize]) -> ModuleMap {
        let alg = &self.algebra;
        let fld = self.field();
        let nv = alg.num_vertices();
        let src = self.twist(&self.representable(x));
        let sx: Vec<usize> = x.iter().map(|&a| self.cat.sigma_obj(a)).collect();
        let tgt = self.representable(&sx);
        let blocks = (0..nv)
            .map(|pw| {
                let w = self.sigma.inverse_perm()[pw];
                let mut b = Matrix::zero(fld, tgt.dims[pw], src.dims[pw]);
                let (mut r0, mut c0) = (0, 0);
                for &v in x {
                    let pv = self.sigma.perm[v];
                    let cols = alg.block(v, w);
                    let rows = alg.block(pv, pw);
                    for (ci, &q) in cols.iter().enumerate() {
                        let img = self.sigma.apply(&alg.unit_vector(q));
                        for (ri, &r) in rows.iter().enumerate() {
                            b.set(r0 + ri, c0 + ci, img[r]);
                        }
                    }
                    r0 += rows.len();
                    c0 += cols.len();
                }
                b
            })
            .collect();
        ModuleMap::from_blocks(src, tgt, blocks)
    }
}

/// `(sigma h)_{perm(v)} = h_v`.
pub fn twist_map(h: &ModuleMap, aut: &Automorphism) -> ModuleMap {
    let inv = aut.inverse_perm();
    let blocks = (0..h.blocks.len()).map(|pv| h.blocks[inv[pv]].clone()).collect();
    ModuleMap::from_blocks(h.source.twist(aut), h.target.twist(aut), blocks)
}

/// Basis of `F(T_i, T_i)` with the identity first and a radical basis after,
/// as columns in the original coordinates.
fn local_basis(cat: &BasedCategory, i: usize) -> Result<Matrix> {
    let f = cat.field;
    let d = cat.dim(i, i);
    let id = &cat.identities[i];
    let unit = |k: usize| {
        let mut v = vec![0u32; d];
        v[k] = 1;
        v
    };
    // Left multiplication by x on End(T_i).
    let left = |x: &[u32]| {
        let cols: Vec<Vec<u32>> = (0..d).map(|k| cat.compose(i, i, i, &unit(k), x)).collect();
        Matrix::from_columns(f, d, &cols)
    };
    let mut cols = vec![id.clone()];
    for k in 0..d {
        let x = unit(k);
        let shifted = f.units().chain(std::iter::once(0)).find_map(|lambda| {
            let y: Vec<u32> = x.iter().zip(id).map(|(&a, &b)| f.sub(a, f.mul(lambda, b))).collect();
            left(&y).is_nilpotent().then_some(y)
        });
        let y = shifted.ok_or_else(|| {
            Error::FieldTooSmall(format!("End({}) is not split local", cat.labels[i]))
        })?;
        cols.push(y);
    }
    let all = Matrix::from_columns(f, d, &cols);
    let rref = all.rref();
    if rref.rank != d || rref.pivots[0] != 0 {
        return Err(Error::Scenario(format!("{} is not indecomposable", cat.labels[i])));
    }
    Ok(all.select_columns(&rref.pivots))
}

#[cfg(test)]
mod tests {
    use super::super::category::tests::dual_numbers;
    use super::*;

    #[test]
    fn dual_numbers_give_selfinjective_end() {
        let cat = Arc::new(dual_numbers(3, -1));
        let fc = FunctorCategory::new(cat.clone()).unwrap();
        assert_eq!(fc.algebra.dim(), 2);
        fc.algebra.check_axioms().unwrap();
        let x = Mor {
            source: vec![0],
            target: vec![0, 0],
            blocks: vec![vec![vec![0, 1]], vec![vec![1, 2]]],
        };
        let y = fc.yoneda(&x);
        assert!(y.is_homomorphism());
        assert_eq!(fc.unyoneda(&y, &x.source, &x.target), x);
        let iso = fc.twisted_representable_iso(&[0, 0]);
        assert!(iso.is_homomorphism() && iso.is_iso());
    }
}
