//! Krull-Schmidt decomposition, isomorphism tests and projective summands.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::module::{HomSpace, Module, ModuleMap};
use crate::error::{Error, Result};
use crate::exactla::{Matrix, PrimeField};

/// An indecomposable summand with its split inclusion and projection.
#[derive(Clone, Debug)]
pub struct Summand {
    pub module: Module,
    pub inclusion: ModuleMap,
    pub projection: ModuleMap,
}

fn is_nilpotent_map(h: &ModuleMap) -> bool {
    h.blocks.iter().all(|b| b.is_nilpotent())
}

fn scalar_candidates(f: PrimeField) -> Vec<u32> {
    (0..f.p().min(256)).collect()
}

/// The scalar `l` with `h - l` nilpotent, if there is one.
pub(crate) fn nilpotent_shift(h: &ModuleMap) -> Option<u32> {
    let f = h.field();
    let v = h.blocks.iter().position(|b| b.rows() > 0)?;
    let block = &h.blocks[v];
    let d = block.rows();
    let candidates = if d as u32 % f.p() != 0 {
        let tr = (0..d).fold(0, |acc, i| f.add(acc, block.get(i, i)));
        vec![f.mul(tr, f.inv(d as u32 % f.p()))]
    } else {
        scalar_candidates(f)
    };
    candidates
        .into_iter()
        .find(|&l| is_nilpotent_map(&h.sub(&ModuleMap::identity(&h.source).scale(l))))
}

/// Whether `End(M)` is local with residue field `F_p`: the shifted basis
/// elements `x - l(x)` must span a nilpotent ideal of codimension one.
fn is_split_local(m: &Module, end: &HomSpace) -> bool {
    let f = m.field();
    let id = ModuleMap::identity(m);
    let mut ideal = crate::exactla::Subspace::new(f, end.dim());
    let mut elems = Vec::new();
    for x in &end.basis {
        let Some(l) = nilpotent_shift(x) else {
            return false;
        };
        let n = x.sub(&id.scale(l));
        if ideal.insert(&end.coords(&n)) {
            elems.push(n);
        }
    }
    if ideal.dim() + 1 != end.dim() {
        return false;
    }
    // Two-sided ideal, then nilpotent.
    for n in &elems {
        for x in &end.basis {
            if !ideal.contains(&end.coords(&n.compose(x)))
                || !ideal.contains(&end.coords(&x.compose(n)))
            {
                return false;
            }
        }
    }
    let mut power = elems.clone();
    for _ in 0..=m.total_dim() {
        if power.iter().all(|p| p.is_zero()) {
            return true;
        }
        let mut next_space = crate::exactla::Subspace::new(f, end.dim());
        let mut next = Vec::new();
        for p in &power {
            for n in &elems {
                let q = p.compose(n);
                if next_space.insert(&end.coords(&q)) {
                    next.push(q);
                }
            }
        }
        power = next;
    }
    power.iter().all(|p| p.is_zero())
}

pub fn is_indecomposable(m: &Module) -> Result<bool> {
    if m.is_zero() {
        return Ok(false);
    }
    let end = HomSpace::new(m, m);
    if is_split_local(m, &end) {
        return Ok(true);
    }
    Ok(fitting_split(m, &end)?.is_none())
}

/// Searches `End(M)` for an element that is neither nilpotent nor
/// invertible and returns the two Fitting summands.
fn fitting_split(m: &Module, end: &HomSpace) -> Result<Option<(Summand, Summand)>> {
    let f = m.field();
    let id = ModuleMap::identity(m);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let tries = end.dim() + 64;
    for t in 0..tries {
        let y = if t < end.dim() {
            end.basis[t].clone()
        } else {
            let c: Vec<u32> = (0..end.dim()).map(|_| rng.gen_range(0..f.p())).collect();
            end.combine(&c)
        };
        for l in scalar_candidates(f) {
            let z = y.sub(&id.scale(l));
            if let Some(split) = split_by(m, &z)? {
                return Ok(Some(split));
            }
        }
    }
    Ok(None)
}

fn split_by(m: &Module, z: &ModuleMap) -> Result<Option<(Summand, Summand)>> {
    let f = m.field();
    let big = m.total_dim().max(1);
    let powered: Vec<Matrix> = z
        .blocks
        .iter()
        .map(|b| {
            let mut p = Matrix::identity(f, b.rows());
            let mut base = b.clone();
            let mut e = big;
            while e > 0 {
                if e & 1 == 1 {
                    p = p.mul(&base);
                }
                base = base.mul(&base);
                e >>= 1;
            }
            p
        })
        .collect();
    let nil = powered.iter().all(|p| p.is_zero());
    let inv = powered.iter().all(|p| p.rank() == p.rows());
    if nil || inv {
        return Ok(None);
    }
    let image: Vec<Matrix> = powered
        .iter()
        .map(|p| p.transpose().row_space().transpose())
        .collect();
    let kernel: Vec<Matrix> = powered.iter().map(|p| p.kernel_basis()).collect();
    let (u, u_inc) = m.submodule(image.clone())?;
    let (w, w_inc) = m.submodule(kernel.clone())?;
    let mut u_proj = Vec::new();
    let mut w_proj = Vec::new();
    for v in 0..m.dims.len() {
        let both = image[v].hstack(&kernel[v]);
        let inv = both
            .invert()?
            .ok_or_else(|| Error::InvalidModule("Fitting summands do not span".into()))?;
        let ku = image[v].cols();
        u_proj.push(inv.block(0, 0, ku, m.dims[v]));
        w_proj.push(inv.block(ku, 0, m.dims[v] - ku, m.dims[v]));
    }
    Ok(Some((
        Summand {
            projection: ModuleMap::from_blocks(m.clone(), u.clone(), u_proj),
            module: u,
            inclusion: u_inc,
        },
        Summand {
            projection: ModuleMap::from_blocks(m.clone(), w.clone(), w_proj),
            module: w,
            inclusion: w_inc,
        },
    )))
}

/// Splits `M` into indecomposable summands. Fails with `FieldTooSmall` when
/// an endomorphism ring is local but not split over `F_p`.
pub fn decompose(m: &Module) -> Result<Vec<Summand>> {
    if m.is_zero() {
        return Ok(Vec::new());
    }
    let end = HomSpace::new(m, m);
    if is_split_local(m, &end) {
        return Ok(vec![Summand {
            module: m.clone(),
            inclusion: ModuleMap::identity(m),
            projection: ModuleMap::identity(m),
        }]);
    }
    let Some((a, b)) = fitting_split(m, &end)? else {
        return Err(Error::FieldTooSmall(format!(
            "module of dimension vector {:?} has a non-split endomorphism ring",
            m.dims
        )));
    };
    let mut out = Vec::new();
    for part in [a, b] {
        for s in decompose(&part.module)? {
            out.push(Summand {
                module: s.module,
                inclusion: part.inclusion.compose(&s.inclusion),
                projection: s.projection.compose(&part.projection),
            });
        }
    }
    Ok(out)
}

/// Isomorphism between indecomposables: some basis element of `Hom(A, B)`
/// is invertible whenever `A` and `B` are isomorphic.
pub fn iso_indecomposable(a: &Module, b: &Module) -> Option<ModuleMap> {
    if a.dims != b.dims {
        return None;
    }
    HomSpace::new(a, b).basis.into_iter().find(|h| h.is_iso())
}

/// Groups summands into isomorphism classes; each class lists the indices
/// of its members, the first being the representative.
pub fn isoclasses(summands: &[Summand]) -> Vec<Vec<usize>> {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    'outer: for (i, s) in summands.iter().enumerate() {
        for class in classes.iter_mut() {
            if iso_indecomposable(&summands[class[0]].module, &s.module).is_some() {
                class.push(i);
                continue 'outer;
            }
        }
        classes.push(vec![i]);
    }
    classes
}

/// An isomorphism `M -> N`, if one exists.
pub fn find_iso(m: &Module, n: &Module) -> Result<Option<ModuleMap>> {
    if m.dims != n.dims {
        return Ok(None);
    }
    if m.is_zero() {
        return Ok(Some(ModuleMap::zero(m, n)));
    }
    if let Some(h) = iso_indecomposable(m, n) {
        return Ok(Some(h));
    }
    let dm = decompose(m)?;
    let dn = decompose(n)?;
    if dm.len() != dn.len() {
        return Ok(None);
    }
    let mut used = vec![false; dn.len()];
    let mut total = ModuleMap::zero(m, n);
    for s in &dm {
        let mut found = false;
        for (j, t) in dn.iter().enumerate() {
            if used[j] {
                continue;
            }
            if let Some(h) = iso_indecomposable(&s.module, &t.module) {
                used[j] = true;
                total = total.add(&t.inclusion.compose(&h).compose(&s.projection));
                found = true;
                break;
            }
        }
        if !found {
            return Ok(None);
        }
    }
    Ok(Some(total))
}

/// Whether an indecomposable module is projective: it has simple top at
/// some vertex and the dimension of the projective there.
pub fn is_projective_indecomposable(m: &Module) -> bool {
    let top = m.top_dims();
    if top.iter().sum::<usize>() != 1 {
        return false;
    }
    let v = top.iter().position(|&t| t == 1).expect("simple top");
    let alg = &m.algebra;
    (0..alg.num_vertices()).all(|w| alg.block(v, w).len() == m.dims[w])
}

/// `M = M' + P` with `P` projective; returns `M'` with its split inclusion
/// into `M` and projection from `M`.
pub fn strip_projectives(m: &Module) -> Result<Summand> {
    let parts = decompose(m)?;
    let keep: Vec<Summand> = parts
        .into_iter()
        .filter(|s| !is_projective_indecomposable(&s.module))
        .collect();
    let sum = Module::direct_sum(&m.algebra, &keep.iter().map(|s| s.module.clone()).collect::<Vec<_>>());
    let mut inc = ModuleMap::zero(&sum.module, m);
    let mut proj = ModuleMap::zero(m, &sum.module);
    for (k, s) in keep.iter().enumerate() {
        inc = inc.add(&s.inclusion.compose(&sum.projections[k]));
        proj = proj.add(&sum.inclusions[k].compose(&s.projection));
    }
    Ok(Summand {
        module: sum.module,
        inclusion: inc,
        projection: proj,
    })
}

/// Nakayama permutation: `P_v` is isomorphic to `I_{nu(v)}`.
pub fn nakayama_permutation(alg: &std::sync::Arc<super::BasedAlgebra>) -> Result<Vec<usize>> {
    let nv = alg.num_vertices();
    let mut perm = Vec::with_capacity(nv);
    for v in 0..nv {
        let p = Module::projective(alg.clone(), v);
        let soc = p.socle_dims();
        if soc.iter().sum::<usize>() != 1 {
            return Err(Error::NotSelfInjective);
        }
        let w = soc.iter().position(|&d| d == 1).expect("simple socle");
        let i = Module::injective(alg.clone(), w);
        if iso_indecomposable(&p, &i).is_none() {
            return Err(Error::NotSelfInjective);
        }
        perm.push(w);
    }
    Ok(perm)
}

pub fn is_selfinjective(alg: &std::sync::Arc<super::BasedAlgebra>) -> bool {
    nakayama_permutation(alg).is_ok()
}

#[cfg(test)]
mod tests {
    use super::super::algebra::build_algebra;
    use super::super::quiver::parse_presentation;
    use super::*;
    use std::sync::Arc;

    fn alg(text: &str) -> Arc<super::super::BasedAlgebra> {
        Arc::new(build_algebra(&parse_presentation(text).unwrap()).unwrap())
    }

    const A2: &str = r#"{"field": 2, "vertices": [1, 2],
        "arrows": [{"name": "a", "source": 1, "target": 2}]}"#;

    #[test]
    fn projective_of_a2_is_indecomposable_and_sum_splits() {
        let a = alg(A2);
        let p = Module::projective(a.clone(), 0);
        assert_eq!(p.dims, vec![1, 1]);
        assert!(is_indecomposable(&p).unwrap());
        let s1 = Module::simple(a.clone(), 0);
        let s2 = Module::simple(a.clone(), 1);
        let sum = Module::direct_sum(&a, &[s1.clone(), s2.clone(), s1.clone()]);
        let parts = decompose(&sum.module).unwrap();
        assert_eq!(parts.len(), 3);
        let classes = isoclasses(&parts);
        let mut sizes: Vec<usize> = classes.iter().map(|c| c.len()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 2]);
        for s in &parts {
            assert!(s.projection.compose(&s.inclusion).is_iso());
        }
    }

    #[test]
    fn path_algebra_is_not_selfinjective() {
        let a = alg(A2);
        assert!(!is_selfinjective(&a));
    }

    #[test]
    fn non_split_endomorphism_ring_is_reported() {
        // Kronecker module (I, C) with C the companion matrix of x^2 + 1 over
        // F_3: its endomorphism ring is F_9.
        let a = alg(
            r#"{"field": 3, "vertices": [1, 2],
                "arrows": [{"name": "a", "source": 1, "target": 2},
                           {"name": "b", "source": 1, "target": 2}]}"#,
        );
        let f = a.field;
        let m = Module::new(
            a.clone(),
            vec![2, 2],
            vec![
                Matrix::identity(f, 2),
                Matrix::from_rows(f, &[vec![0, -1], vec![1, 0]]),
            ],
        )
        .unwrap();
        assert!(matches!(decompose(&m), Err(Error::FieldTooSmall(_))));
    }

    #[test]
    fn find_iso_matches_permuted_sums() {
        let a = alg(A2);
        let s1 = Module::simple(a.clone(), 0);
        let p = Module::projective(a.clone(), 0);
        let x = Module::direct_sum(&a, &[s1.clone(), p.clone()]).module;
        let y = Module::direct_sum(&a, &[p.clone(), s1.clone()]).module;
        let h = find_iso(&x, &y).unwrap().unwrap();
        assert!(h.is_iso() && h.is_homomorphism());
        let z = Module::direct_sum(&a, &[s1.clone(), s1.clone()]).module;
        assert!(find_iso(&x, &z).unwrap().is_none());
    }
}
