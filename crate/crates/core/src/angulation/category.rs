//! Additive categories given by finitely many indecomposables, Hom bases and
//! composition tensors, with an automorphism `Sigma`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::{Matrix, PrimeField};

/// Hom-finite Krull-Schmidt category: objects are lists of indecomposables.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BasedCategory {
    pub field: PrimeField,
    pub labels: Vec<String>,
    /// `hom_dims[a][b] = dim F(a, b)`, maps from `a` to `b`.
    pub hom_dims: Vec<Vec<usize>>,
    /// For each triple `(a, b, c)`: coordinates of `y * x` for basis
    /// elements `x` of `F(a, b)` and `y` of `F(b, c)`, laid out as
    /// `[(i * dim(b, c) + j) * dim(a, c) + k]`.
    comp: Vec<Vec<u32>>,
    pub identities: Vec<Vec<u32>>,
    pub sigma_perm: Vec<usize>,
    /// `sigma_mats[a * n + b]` maps `F(a, b)` to `F(sigma a, sigma b)`.
    sigma_mats: Vec<Matrix>,
    sigma_inv_mats: Vec<Matrix>,
}

impl BasedCategory {
    /// `compose(a, b, c)` returns the coordinates of `y * x`.
    pub fn new(
        field: PrimeField,
        labels: Vec<String>,
        hom_dims: Vec<Vec<usize>>,
        compose: impl Fn(usize, usize, usize, usize, usize) -> Vec<u32>,
        identities: Vec<Vec<u32>>,
        sigma_perm: Vec<usize>,
        sigma_mats: Vec<Matrix>,
    ) -> Result<Self> {
        let n = labels.len();
        let mut comp = Vec::with_capacity(n * n * n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let (dab, dbc, dac) = (hom_dims[a][b], hom_dims[b][c], hom_dims[a][c]);
                    let mut t = vec![0u32; dab * dbc * dac];
                    for i in 0..dab {
                        for j in 0..dbc {
                            let v = compose(a, b, c, i, j);
                            t[(i * dbc + j) * dac..(i * dbc + j + 1) * dac].copy_from_slice(&v);
                        }
                    }
                    comp.push(t);
                }
            }
        }
        let mut sigma_inv_mats = Vec::with_capacity(n * n);
        for m in &sigma_mats {
            sigma_inv_mats.push(
                m.invert()?
                    .ok_or_else(|| Error::Scenario("Sigma is not invertible on a Hom space".into()))?,
            );
        }
        // Inverse matrices are indexed by the image pair.
        let mut inv_by_target = vec![Matrix::zero(field, 0, 0); n * n];
        for a in 0..n {
            for b in 0..n {
                inv_by_target[sigma_perm[a] * n + sigma_perm[b]] = sigma_inv_mats[a * n + b].clone();
            }
        }
        let cat = BasedCategory {
            field,
            labels,
            hom_dims,
            comp,
            identities,
            sigma_perm,
            sigma_mats,
            sigma_inv_mats: inv_by_target,
        };
        cat.check()?;
        Ok(cat)
    }

    pub fn num_objects(&self) -> usize {
        self.labels.len()
    }

    pub fn dim(&self, a: usize, b: usize) -> usize {
        self.hom_dims[a][b]
    }

    /// `y * x` for `x` in `F(a, b)` and `y` in `F(b, c)`.
    pub fn compose(&self, a: usize, b: usize, c: usize, x: &[u32], y: &[u32]) -> Vec<u32> {
        let f = self.field;
        let n = self.num_objects();
        let (dbc, dac) = (self.hom_dims[b][c], self.hom_dims[a][c]);
        let t = &self.comp[(a * n + b) * n + c];
        let mut out = vec![0u32; dac];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0 {
                    continue;
                }
                let s = f.mul(xi, yj);
                let base = (i * dbc + j) * dac;
                for k in 0..dac {
                    let v = t[base + k];
                    if v != 0 {
                        out[k] = f.add(out[k], f.mul(s, v));
                    }
                }
            }
        }
        out
    }

    pub fn sigma_obj(&self, a: usize) -> usize {
        self.sigma_perm[a]
    }

    pub fn sigma_inv_obj(&self, a: usize) -> usize {
        self.sigma_perm.iter().position(|&x| x == a).expect("permutation")
    }

    pub fn sigma_coords(&self, a: usize, b: usize, x: &[u32]) -> Vec<u32> {
        self.sigma_mats[a * self.num_objects() + b].mul_vec(x)
    }

    /// `Sigma^{-1}` on `F(a, b)`, landing in `F(sigma^{-1} a, sigma^{-1} b)`.
    pub fn sigma_inv_coords(&self, a: usize, b: usize, x: &[u32]) -> Vec<u32> {
        self.sigma_inv_mats[a * self.num_objects() + b].mul_vec(x)
    }

    fn check(&self) -> Result<()> {
        let n = self.num_objects();
        let mut seen = vec![false; n];
        for &p in &self.sigma_perm {
            if p >= n || seen[p] {
                return Err(Error::Scenario("Sigma is not a permutation".into()));
            }
            seen[p] = true;
        }
        let unit = |d: usize, i: usize| {
            let mut v = vec![0u32; d];
            v[i] = 1;
            v
        };
        for a in 0..n {
            for b in 0..n {
                let m = &self.sigma_mats[a * n + b];
                let (sa, sb) = (self.sigma_perm[a], self.sigma_perm[b]);
                if m.rows() != self.dim(sa, sb) || m.cols() != self.dim(a, b) {
                    return Err(Error::Scenario("Sigma transport has the wrong shape".into()));
                }
                for i in 0..self.dim(a, b) {
                    let x = unit(self.dim(a, b), i);
                    if self.compose(a, a, b, &self.identities[a], &x) != x
                        || self.compose(a, b, b, &x, &self.identities[b]) != x
                    {
                        return Err(Error::Scenario("identity law fails".into()));
                    }
                }
            }
            if self.sigma_coords(a, a, &self.identities[a]) != self.identities[self.sigma_perm[a]] {
                return Err(Error::Scenario("Sigma does not preserve identities".into()));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for i in 0..self.dim(a, b) {
                        for j in 0..self.dim(b, c) {
                            let x = unit(self.dim(a, b), i);
                            let y = unit(self.dim(b, c), j);
                            let lhs = self.sigma_coords(a, c, &self.compose(a, b, c, &x, &y));
                            let (sa, sb, sc) =
                                (self.sigma_perm[a], self.sigma_perm[b], self.sigma_perm[c]);
                            let rhs = self.compose(
                                sa,
                                sb,
                                sc,
                                &self.sigma_coords(a, b, &x),
                                &self.sigma_coords(b, c, &y),
                            );
                            if lhs != rhs {
                                return Err(Error::Scenario(format!(
                                    "Sigma is not functorial on ({a}, {b}, {c})"
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Object of the additive closure: a list of indecomposables.
pub type Obj = Vec<usize>;

/// Morphism `X -> Y` of the additive closure; `blocks[l][k]` holds the
/// coordinates of the component `X_k -> Y_l`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mor {
    pub source: Obj,
    pub target: Obj,
    pub blocks: Vec<Vec<Vec<u32>>>,
}

impl Mor {
    pub fn zero(cat: &BasedCategory, source: &[usize], target: &[usize]) -> Self {
        let blocks = target
            .iter()
            .map(|&y| source.iter().map(|&x| vec![0; cat.dim(x, y)]).collect())
            .collect();
        Mor {
            source: source.to_vec(),
            target: target.to_vec(),
            blocks,
        }
    }

    pub fn identity(cat: &BasedCategory, x: &[usize]) -> Self {
        let mut m = Mor::zero(cat, x, x);
        for (k, &a) in x.iter().enumerate() {
            m.blocks[k][k] = cat.identities[a].clone();
        }
        m
    }

    /// Number of coordinates, the dimension of the Hom space it lives in.
    pub fn num_coords(&self) -> usize {
        self.blocks.iter().flatten().map(|b| b.len()).sum()
    }

    pub fn flatten(&self) -> Vec<u32> {
        self.blocks.iter().flatten().flatten().copied().collect()
    }

    /// Inverse of `flatten`.
    pub fn from_flat(cat: &BasedCategory, source: &[usize], target: &[usize], flat: &[u32]) -> Self {
        let mut m = Mor::zero(cat, source, target);
        let mut pos = 0;
        for row in m.blocks.iter_mut() {
            for b in row.iter_mut() {
                let d = b.len();
                b.copy_from_slice(&flat[pos..pos + d]);
                pos += d;
            }
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().flatten().flatten().all(|&x| x == 0)
    }

    /// `self` after `first`.
    pub fn compose(&self, cat: &BasedCategory, first: &Mor) -> Mor {
        let f = cat.field;
        let mut out = Mor::zero(cat, &first.source, &self.target);
        for (l, &z) in self.target.iter().enumerate() {
            for (k, &x) in first.source.iter().enumerate() {
                let acc = &mut out.blocks[l][k];
                for (m, &y) in first.target.iter().enumerate() {
                    let c = cat.compose(x, y, z, &first.blocks[m][k], &self.blocks[l][m]);
                    for (a, b) in acc.iter_mut().zip(c) {
                        *a = f.add(*a, b);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, cat: &BasedCategory, other: &Mor) -> Mor {
        let f = cat.field;
        let mut out = self.clone();
        for (ro, ri) in out.blocks.iter_mut().zip(&other.blocks) {
            for (bo, bi) in ro.iter_mut().zip(ri) {
                for (a, b) in bo.iter_mut().zip(bi) {
                    *a = f.add(*a, *b);
                }
            }
        }
        out
    }

    pub fn scale(&self, cat: &BasedCategory, c: u32) -> Mor {
        let f = cat.field;
        let mut out = self.clone();
        out.blocks
            .iter_mut()
            .flatten()
            .flatten()
            .for_each(|x| *x = f.mul(*x, c));
        out
    }

    pub fn neg(&self, cat: &BasedCategory) -> Mor {
        self.scale(cat, cat.field.neg(1))
    }

    pub fn sub(&self, cat: &BasedCategory, other: &Mor) -> Mor {
        self.add(cat, &other.neg(cat))
    }

    pub fn sigma(&self, cat: &BasedCategory) -> Mor {
        Mor {
            source: sigma_obj(cat, &self.source),
            target: sigma_obj(cat, &self.target),
            blocks: self
                .target
                .iter()
                .zip(&self.blocks)
                .map(|(&y, row)| {
                    self.source
                        .iter()
                        .zip(row)
                        .map(|(&x, b)| cat.sigma_coords(x, y, b))
                        .collect()
                })
                .collect(),
        }
    }

    pub fn sigma_inv(&self, cat: &BasedCategory) -> Mor {
        Mor {
            source: sigma_inv_obj(cat, &self.source),
            target: sigma_inv_obj(cat, &self.target),
            blocks: self
                .target
                .iter()
                .zip(&self.blocks)
                .map(|(&y, row)| {
                    self.source
                        .iter()
                        .zip(row)
                        .map(|(&x, b)| cat.sigma_inv_coords(x, y, b))
                        .collect()
                })
                .collect(),
        }
    }

    /// Block-diagonal sum.
    pub fn direct_sum(cat: &BasedCategory, a: &Mor, b: &Mor) -> Mor {
        let mut source = a.source.clone();
        source.extend_from_slice(&b.source);
        let mut target = a.target.clone();
        target.extend_from_slice(&b.target);
        let mut out = Mor::zero(cat, &source, &target);
        out.set_block(0, 0, a);
        out.set_block(a.target.len(), a.source.len(), b);
        out
    }

    /// Writes `m` into the rows starting at `r0` and columns starting at `c0`.
    pub fn set_block(&mut self, r0: usize, c0: usize, m: &Mor) {
        for (l, row) in m.blocks.iter().enumerate() {
            for (k, b) in row.iter().enumerate() {
                self.blocks[r0 + l][c0 + k] = b.clone();
            }
        }
    }

    /// Matrix of post-composition `F(t, X) -> F(t, Y)`.
    pub fn represent(&self, cat: &BasedCategory, t: usize) -> Matrix {
        let f = cat.field;
        let src_dims: Vec<usize> = self.source.iter().map(|&x| cat.dim(t, x)).collect();
        let tgt_dims: Vec<usize> = self.target.iter().map(|&y| cat.dim(t, y)).collect();
        let rows: usize = tgt_dims.iter().sum();
        let cols: usize = src_dims.iter().sum();
        let mut m = Matrix::zero(f, rows, cols);
        let mut c0 = 0;
        for (k, &x) in self.source.iter().enumerate() {
            for i in 0..src_dims[k] {
                let mut u = vec![0u32; src_dims[k]];
                u[i] = 1;
                let mut r0 = 0;
                for (l, &y) in self.target.iter().enumerate() {
                    let v = cat.compose(t, x, y, &u, &self.blocks[l][k]);
                    for (j, &val) in v.iter().enumerate() {
                        m.set(r0 + j, c0 + i, val);
                    }
                    r0 += tgt_dims[l];
                }
            }
            c0 += src_dims[k];
        }
        m
    }

    /// Inverse morphism, if this is an isomorphism.
    pub fn inverse(&self, cat: &BasedCategory) -> Option<Mor> {
        let n_unknowns = hom_dim(cat, &self.target, &self.source);
        if n_unknowns == 0 {
            return (self.source.is_empty() && self.target.is_empty())
                .then(|| Mor::zero(cat, &self.target, &self.source));
        }
        // g * self = id and self * g = id, linear in g.
        let f = cat.field;
        let mut cols = Vec::with_capacity(n_unknowns);
        for i in 0..n_unknowns {
            let mut flat = vec![0u32; n_unknowns];
            flat[i] = 1;
            let g = Mor::from_flat(cat, &self.target, &self.source, &flat);
            let mut col = g.compose(cat, self).flatten();
            col.extend(self.compose(cat, &g).flatten());
            cols.push(col);
        }
        let mut rhs = Mor::identity(cat, &self.source).flatten();
        rhs.extend(Mor::identity(cat, &self.target).flatten());
        let m = Matrix::from_columns(f, rhs.len(), &cols);
        m.solve_vec(&rhs)
            .map(|x| Mor::from_flat(cat, &self.target, &self.source, &x))
    }
}

pub fn sigma_obj(cat: &BasedCategory, x: &[usize]) -> Obj {
    x.iter().map(|&a| cat.sigma_obj(a)).collect()
}

pub fn sigma_inv_obj(cat: &BasedCategory, x: &[usize]) -> Obj {
    x.iter().map(|&a| cat.sigma_inv_obj(a)).collect()
}

pub fn hom_dim(cat: &BasedCategory, x: &[usize], y: &[usize]) -> usize {
    x.iter()
        .map(|&a| y.iter().map(|&b| cat.dim(a, b)).sum::<usize>())
        .sum()
}

/// `F(t, X)` dimension.
pub fn rep_dim(cat: &BasedCategory, t: usize, x: &[usize]) -> usize {
    x.iter().map(|&a| cat.dim(t, a)).sum()
}

/// Affine solution set `particular + span(kernel)`.
#[derive(Clone, Debug)]
pub struct AffineSolution {
    pub particular: Vec<u32>,
    pub kernel: Vec<Vec<u32>>,
}

impl AffineSolution {
    pub fn point(&self, field: PrimeField, coeffs: &[u32]) -> Vec<u32> {
        let mut x = self.particular.clone();
        for (k, &c) in self.kernel.iter().zip(coeffs) {
            if c != 0 {
                for (a, &b) in x.iter_mut().zip(k) {
                    *a = field.add(*a, field.mul(c, b));
                }
            }
        }
        x
    }
}

/// Solves `eval(x) = 0` for an affine map `eval` on `n` unknowns.
pub fn solve_affine(
    field: PrimeField,
    n: usize,
    eval: impl Fn(&[u32]) -> Vec<u32>,
) -> Option<AffineSolution> {
    let zero = vec![0u32; n];
    let b0 = eval(&zero);
    if n == 0 {
        return b0.iter().all(|&x| x == 0).then(|| AffineSolution {
            particular: vec![],
            kernel: vec![],
        });
    }
    let cols: Vec<Vec<u32>> = (0..n)
        .map(|i| {
            let mut e = zero.clone();
            e[i] = 1;
            eval(&e)
                .iter()
                .zip(&b0)
                .map(|(&a, &b)| field.sub(a, b))
                .collect()
        })
        .collect();
    let a = Matrix::from_columns(field, b0.len(), &cols);
    let rhs: Vec<u32> = b0.iter().map(|&x| field.neg(x)).collect();
    let sol = a.solve(&Matrix::column(field, &rhs)).expect("shapes agree");
    let particular = sol.particular?.col(0);
    Some(AffineSolution {
        particular,
        kernel: sol.kernel.columns(),
    })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    pub use crate::angulation::heller::dual_numbers;

    #[test]
    fn dual_numbers_category_is_valid() {
        let cat = dual_numbers(3, -1);
        let x = Mor {
            source: vec![0],
            target: vec![0],
            blocks: vec![vec![vec![0, 1]]],
        };
        assert!(x.compose(&cat, &x).is_zero());
        assert_eq!(x.sigma(&cat).blocks[0][0], vec![0, 2]);
        assert_eq!(x.sigma(&cat).sigma_inv(&cat), x);
        assert!(x.inverse(&cat).is_none());
        let u = Mor::identity(&cat, &[0]).add(&cat, &x);
        let inv = u.inverse(&cat).unwrap();
        assert_eq!(inv.compose(&cat, &u), Mor::identity(&cat, &[0]));
    }

    #[test]
    fn non_functorial_sigma_is_rejected() {
        let f = PrimeField::new(3).unwrap();
        // Sigma fixes x but doubles the identity.
        let sigma = Matrix::from_rows(f, &[vec![2, 0], vec![0, 1]]);
        let r = BasedCategory::new(
            f,
            vec!["L".into()],
            vec![vec![2]],
            |_, _, _, i, j| match (i, j) {
                (0, 0) => vec![1, 0],
                (0, 1) | (1, 0) => vec![0, 1],
                _ => vec![0, 0],
            },
            vec![vec![1, 0]],
            vec![0],
            vec![sigma],
        );
        assert!(r.is_err());
    }

    #[test]
    fn representable_of_identity_is_identity() {
        let cat = dual_numbers(3, 1);
        let id = Mor::identity(&cat, &[0, 0]);
        assert_eq!(id.represent(&cat, 0), Matrix::identity(cat.field, 4));
    }
}
