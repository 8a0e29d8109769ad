//! The invariant `delta: Sigma K -> Omega^{-n} K` of an exact sequence, with
//! `K = Ker F(-, alpha_1)`, obtained by comparing `F(-, X)` with the standard
//! injective resolution of `K` in `mod E`.

use super::category::Mor;
use super::modf::FunctorCategory;
use super::sequence::NSigmaSequence;
use crate::algcore::{Module, ModuleMap};
use crate::error::{Error, Result};
use crate::exactla::Matrix;

#[derive(Clone, Debug)]
pub struct Delta {
    pub kernel: Module,
    /// `K -> F(-, X_1)`.
    pub inclusion: ModuleMap,
    /// `Sigma K -> Omega^{-n} K`.
    pub map: ModuleMap,
}

/// Right inverses of an epimorphism, vertex by vertex.
pub(crate) fn sections(epi: &ModuleMap) -> Vec<Matrix> {
    epi.blocks
        .iter()
        .map(|b| {
            if b.rows() == 0 {
                Matrix::zero(b.field(), b.cols(), 0)
            } else {
                b.solve(&Matrix::identity(b.field(), b.rows()))
                    .expect("shapes agree")
                    .particular
                    .expect("epimorphism")
            }
        })
        .collect()
}

/// `h` with `mono * h = f`, assuming `f` lands in the image.
pub(crate) fn through_mono(f: &ModuleMap, mono: &ModuleMap) -> Option<ModuleMap> {
    let mut blocks = Vec::with_capacity(f.blocks.len());
    for (fb, mb) in f.blocks.iter().zip(&mono.blocks) {
        if mb.cols() == 0 {
            if !fb.is_zero() {
                return None;
            }
            blocks.push(Matrix::zero(fb.field(), 0, fb.cols()));
            continue;
        }
        blocks.push(mb.solve(fb).ok()?.particular?);
    }
    Some(ModuleMap::from_blocks(f.source.clone(), mono.source.clone(), blocks))
}

/// The map induced on the image of `epi`: `h * epi = g`.
pub(crate) fn descend(g: &ModuleMap, epi: &ModuleMap) -> ModuleMap {
    let blocks = g
        .blocks
        .iter()
        .zip(sections(epi))
        .map(|(a, s)| a.mul(&s))
        .collect();
    ModuleMap::from_blocks(epi.target.clone(), g.target.clone(), blocks)
}

/// `delta` of an exact sequence.
pub fn delta_of(fc: &FunctorCategory, x: &NSigmaSequence) -> Result<Delta> {
    let cat = &fc.cat;
    if !x.is_exact(cat) {
        return Err(Error::NotExact);
    }
    let frob = &fc.frob;
    let maps: Vec<ModuleMap> = x.maps.iter().map(|m| fc.yoneda(m)).collect();
    let (kernel, inclusion) = maps[0].kernel();

    // h: Z_i -> Omega^{-(i-1)} K with Z_i inside F(-, X_i) via `mono`.
    let mut h = ModuleMap::identity(&kernel);
    let mut mono = inclusion.clone();
    for a in &maps {
        let cz = frob.cosyzygy(&h.target);
        let into = cz.embedding.compose(&h);
        let g = frob.extend_to_injective(&into, &cz.copies, &mono)?;
        let (_, epi, next_mono) = a.image();
        h = descend(&cz.projection.compose(&g), &epi);
        mono = next_mono;
    }
    // Z_{n+1} is the image of Sigma K in F(-, Sigma X_1).
    let tau = fc.twisted_representable_iso(&x.objects[0]);
    let sigma_k = tau.compose(&fc.twist_map(&inclusion));
    let j = through_mono(&sigma_k, &mono).ok_or(Error::NotExact)?;
    let map = h.compose(&j);
    Ok(Delta {
        kernel,
        inclusion,
        map,
    })
}

/// The comparison `sigma_M: Sigma Omega^{-1} M -> Omega^{-1} Sigma M`
/// induced by the standard envelopes.
pub fn sigma_comparison(fc: &FunctorCategory, m: &Module) -> Result<ModuleMap> {
    let frob = &fc.frob;
    let cm = frob.cosyzygy(m);
    let sm = fc.twist(m);
    let csm = frob.cosyzygy(&sm);
    let twisted_embedding = fc.twist_map(&cm.embedding);
    let g = frob.extend_to_injective(&csm.embedding, &csm.copies, &twisted_embedding)?;
    let twisted_projection = fc.twist_map(&cm.projection);
    Ok(descend(&csm.projection.compose(&g), &twisted_projection))
}

/// `alpha_1` whose kernel is isomorphic to `m`, from the injective
/// copresentation `M -> I_M -> I_{Omega^{-1} M}`, with the isomorphism
/// `m -> Ker F(-, alpha_1)`.
pub fn copresentation(fc: &FunctorCategory, m: &Module) -> Result<(Mor, ModuleMap)> {
    let frob = &fc.frob;
    let c0 = frob.cosyzygy(m);
    let c1 = frob.cosyzygy(&c0.module);
    let d = c1.embedding.compose(&c0.projection);
    let (x1, to1) = as_representable(fc, &c0.envelope)?;
    let (x2, to2) = as_representable(fc, &c1.envelope)?;
    let from1 = to1.inverse().expect("isomorphism");
    let a = to2.compose(&d).compose(&from1);
    let alpha = fc.unyoneda(&a, &x1, &x2);
    // Ker a = to1(M).
    let (_, inc) = fc.yoneda(&alpha).kernel();
    let emb = to1.compose(&c0.embedding);
    let iso = through_mono(&emb, &inc).ok_or_else(|| Error::Scenario("copresentation kernel".into()))?;
    Ok((alpha, iso))
}

/// An isomorphism from a sum of indecomposable injectives onto a
/// representable `F(-, X)`.
fn as_representable(fc: &FunctorCategory, inj: &Module) -> Result<(Vec<usize>, ModuleMap)> {
    let pieces = crate::algcore::decompose(inj)?;
    let mut objs = Vec::new();
    let mut isos = Vec::new();
    for piece in &pieces {
        let v = piece
            .module
            .top_dims()
            .iter()
            .position(|&d| d > 0)
            .ok_or_else(|| Error::Scenario("zero summand".into()))?;
        let iso = crate::algcore::find_iso(&piece.module, &fc.frob.projectives[v])?
            .ok_or(Error::EndNotSelfInjective)?;
        objs.push(v);
        isos.push((piece.projection.clone(), iso));
    }
    let target = fc.representable(&objs);
    let parts: Vec<Module> = objs.iter().map(|&v| fc.frob.projectives[v].clone()).collect();
    let sum = Module::direct_sum(&fc.algebra, &parts);
    let mut total = ModuleMap::zero(inj, &target);
    for (k, (proj, iso)) in isos.iter().enumerate() {
        total = total.add(&sum.inclusions[k].compose(iso).compose(proj));
    }
    Ok((objs, total))
}

#[cfg(test)]
mod tests {
    use super::super::category::tests::dual_numbers;
    use super::super::category::BasedCategory;
    use super::*;
    use std::sync::Arc;

    fn x_sequence(cat: &BasedCategory) -> NSigmaSequence {
        let x = Mor {
            source: vec![0],
            target: vec![0],
            blocks: vec![vec![vec![0, 1]]],
        };
        NSigmaSequence::new(cat, vec![vec![0]; 3], vec![x.clone(), x.clone(), x]).unwrap()
    }

    #[test]
    fn delta_of_x_sequence_is_stable_iso() {
        let cat = Arc::new(dual_numbers(3, -1));
        let fc = FunctorCategory::new(cat.clone()).unwrap();
        let d = delta_of(&fc, &x_sequence(&cat)).unwrap();
        assert_eq!(d.kernel.total_dim(), 1);
        assert!(!fc.frob.stably_zero(&d.map));
        let t = NSigmaSequence::trivial(&cat, 3, &[0], 2).unwrap();
        let dt = delta_of(&fc, &t).unwrap();
        assert!(dt.kernel.is_zero());
    }

    #[test]
    fn sigma_comparison_sign_depends_on_twist() {
        for (s, expected) in [(1, 1), (-1, 2)] {
            let cat = Arc::new(dual_numbers(3, s));
            let fc = FunctorCategory::new(cat).unwrap();
            let simple = Module::simple(fc.algebra.clone(), 0);
            let sigma = sigma_comparison(&fc, &simple).unwrap();
            assert_eq!(sigma.blocks[0].data(), &[expected]);
        }
    }

    #[test]
    fn copresentation_recovers_module() {
        let cat = Arc::new(dual_numbers(3, -1));
        let fc = FunctorCategory::new(cat).unwrap();
        let simple = Module::simple(fc.algebra.clone(), 0);
        let (alpha, iso) = copresentation(&fc, &simple).unwrap();
        assert_eq!(alpha.source.len(), 1);
        assert!(iso.is_iso());
    }
}
