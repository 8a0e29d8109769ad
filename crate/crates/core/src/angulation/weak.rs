//! Weak isomorphisms: search for zigzags, and generators of weak
//! isomorphisms between exact sequences for property tests.

use rand::Rng;

use super::category::{hom_dim, solve_affine, BasedCategory, Mor};
use super::sequence::{is_iso, NSigmaSequence, SequenceMorphism};
use super::verify::random_mor;
use crate::exactla::PrimeField;

/// All points of `F_p^d`, or `None` when there are more than `cap`.
fn all_points(field: PrimeField, d: usize, cap: usize) -> Option<Vec<Vec<u32>>> {
    let p = field.p() as usize;
    let total = (0..d).try_fold(1usize, |acc, _| acc.checked_mul(p).filter(|&s| s <= cap))?;
    let mut out = Vec::with_capacity(total);
    let mut v = vec![0u32; d];
    for _ in 0..total {
        out.push(v.clone());
        for c in v.iter_mut() {
            *c += 1;
            if (*c as usize) < p {
                break;
            }
            *c = 0;
        }
    }
    Some(out)
}

/// Completes prescribed components to a morphism `x -> y`, solving all
/// squares jointly for the remaining ones.
pub fn complete_from(
    cat: &BasedCategory,
    x: &NSigmaSequence,
    y: &NSigmaSequence,
    fixed: &[(usize, Mor)],
) -> Option<SequenceMorphism> {
    let n = x.arity();
    let free: Vec<usize> = (0..n).filter(|i| fixed.iter().all(|(j, _)| j != i)).collect();
    let sizes: Vec<usize> = free
        .iter()
        .map(|&i| hom_dim(cat, &x.objects[i], &y.objects[i]))
        .collect();
    let unpack = |v: &[u32]| -> Vec<Mor> {
        let mut comps: Vec<Option<Mor>> = vec![None; n];
        for (i, m) in fixed {
            comps[*i] = Some(m.clone());
        }
        let mut pos = 0;
        for (&i, &d) in free.iter().zip(&sizes) {
            comps[i] = Some(Mor::from_flat(cat, &x.objects[i], &y.objects[i], &v[pos..pos + d]));
            pos += d;
        }
        comps.into_iter().map(|c| c.expect("every slot set")).collect()
    };
    let eval = |v: &[u32]| -> Vec<u32> {
        let comps = unpack(v);
        let mut out = Vec::new();
        for i in 0..n {
            let next = if i + 1 < n { comps[i + 1].clone() } else { comps[0].sigma(cat) };
            let d = y.maps[i]
                .compose(cat, &comps[i])
                .sub(cat, &next.compose(cat, &x.maps[i]));
            out.extend(d.flatten());
        }
        out
    };
    let sol = solve_affine(cat.field, sizes.iter().sum(), eval)?;
    Some(SequenceMorphism {
        source: x.clone(),
        target: y.clone(),
        components: unpack(&sol.particular),
    })
}

/// A weak isomorphism `x -> y`, found by trying isomorphisms in two
/// consecutive slots and completing the rest. At most `cap` candidates are
/// examined per slot.
pub fn find_weak_iso(
    cat: &BasedCategory,
    x: &NSigmaSequence,
    y: &NSigmaSequence,
    cap: usize,
) -> Option<SequenceMorphism> {
    let n = x.arity();
    if y.arity() != n {
        return None;
    }
    for i in 0..n {
        let j = (i + 1) % n;
        let (xi, yi) = (&x.objects[i], &y.objects[i]);
        let (xj, yj) = (&x.objects[j], &y.objects[j]);
        let Some(points) = all_points(cat.field, hom_dim(cat, xi, yi), cap) else {
            continue;
        };
        for v in points {
            let phi_i = Mor::from_flat(cat, xi, yi, &v);
            if !is_iso(cat, &phi_i) {
                continue;
            }
            // phi_j with beta_i phi_i = phi_{i+1} alpha_i; for the wrap slot
            // the constraint is on Sigma phi_1, i.e. phi_1 itself.
            let target = y.maps[i].compose(cat, &phi_i);
            let sol = solve_affine(cat.field, hom_dim(cat, xj, yj), |w| {
                let phi_j = Mor::from_flat(cat, xj, yj, w);
                let next = if i + 1 < n { phi_j } else { phi_j.sigma(cat) };
                next.compose(cat, &x.maps[i]).sub(cat, &target).flatten()
            });
            let Some(sol) = sol else { continue };
            let Some(coeffs) = all_points(cat.field, sol.kernel.len(), cap) else {
                continue;
            };
            for c in coeffs {
                let phi_j = Mor::from_flat(cat, xj, yj, &sol.point(cat.field, &c));
                if !is_iso(cat, &phi_j) {
                    continue;
                }
                if let Some(phi) = complete_from(cat, x, y, &[(i, phi_i.clone()), (j, phi_j)]) {
                    return Some(phi);
                }
            }
        }
    }
    None
}

/// A zigzag of at most `depth` weak isomorphisms linking `x` and `y`.
/// Depth one tries both directions; depth two goes through `x` plus a
/// trivial sequence on an indecomposable, which receives weak isomorphisms
/// once `n >= 4`.
pub fn weakly_isomorphic(
    cat: &BasedCategory,
    x: &NSigmaSequence,
    y: &NSigmaSequence,
    depth: usize,
    cap: usize,
) -> Option<Vec<SequenceMorphism>> {
    if depth == 0 {
        return None;
    }
    if let Some(phi) = find_weak_iso(cat, x, y, cap).or_else(|| find_weak_iso(cat, y, x, cap)) {
        return Some(vec![phi]);
    }
    if depth < 2 {
        return None;
    }
    let n = x.arity();
    for a in 0..cat.num_objects() {
        for l in 1..=n {
            let t = NSigmaSequence::trivial(cat, n, &[a], l).ok()?;
            let z = NSigmaSequence::direct_sum(cat, x, &t);
            let inc = inclusion_of_first(cat, x, &t);
            if !inc.is_weak_iso(cat) {
                continue;
            }
            if let Some(phi) = find_weak_iso(cat, y, &z, cap) {
                return Some(vec![inc, phi]);
            }
        }
    }
    None
}

/// `x -> x + t` on the first summand.
pub fn inclusion_of_first(cat: &BasedCategory, x: &NSigmaSequence, t: &NSigmaSequence) -> SequenceMorphism {
    let target = NSigmaSequence::direct_sum(cat, x, t);
    let components = x
        .objects
        .iter()
        .zip(&t.objects)
        .map(|(a, b)| {
            let mut m = Mor::zero(cat, a, &[a.as_slice(), b.as_slice()].concat());
            m.set_block(0, 0, &Mor::identity(cat, a));
            m
        })
        .collect();
    SequenceMorphism {
        source: x.clone(),
        target,
        components,
    }
}

/// `x + t -> x` onto the first summand.
pub fn projection_to_first(cat: &BasedCategory, x: &NSigmaSequence, t: &NSigmaSequence) -> SequenceMorphism {
    let source = NSigmaSequence::direct_sum(cat, x, t);
    let components = x
        .objects
        .iter()
        .zip(&t.objects)
        .map(|(a, b)| {
            let mut m = Mor::zero(cat, &[a.as_slice(), b.as_slice()].concat(), a);
            m.set_block(0, 0, &Mor::identity(cat, a));
            m
        })
        .collect();
    SequenceMorphism {
        source,
        target: x.clone(),
        components,
    }
}

pub fn random_automorphism(cat: &BasedCategory, rng: &mut impl Rng, x: &[usize]) -> Mor {
    for _ in 0..64 {
        let m = random_mor(cat, rng, x, x);
        if is_iso(cat, &m) {
            return m;
        }
    }
    Mor::identity(cat, x)
}

/// `y` with `beta_i = u_{i+1} alpha_i u_i^{-1}` and the isomorphism
/// `u: x -> y`.
pub fn conjugate(cat: &BasedCategory, rng: &mut impl Rng, x: &NSigmaSequence) -> SequenceMorphism {
    let n = x.arity();
    let u: Vec<Mor> = x.objects.iter().map(|o| random_automorphism(cat, rng, o)).collect();
    let inv: Vec<Mor> = u.iter().map(|m| m.inverse(cat).expect("automorphism")).collect();
    let maps = (0..n)
        .map(|i| {
            let next = if i + 1 < n { u[i + 1].clone() } else { u[0].sigma(cat) };
            next.compose(cat, &x.maps[i].compose(cat, &inv[i]))
        })
        .collect();
    let y = NSigmaSequence {
        objects: x.objects.clone(),
        maps,
    };
    SequenceMorphism {
        source: x.clone(),
        target: y,
        components: u,
    }
}

/// Weak isomorphisms out of or into `x`: a random conjugation, and for
/// `n >= 4` the inclusion into and projection from a sum with a trivial
/// sequence, followed by a conjugation of the sum.
pub fn weak_isos_around(cat: &BasedCategory, rng: &mut impl Rng, x: &NSigmaSequence) -> Vec<SequenceMorphism> {
    let n = x.arity();
    let mut out = vec![conjugate(cat, rng, x)];
    if n >= 4 && cat.num_objects() > 0 {
        let a = rng.gen_range(0..cat.num_objects());
        let l = rng.gen_range(1..=n);
        if let Ok(t) = NSigmaSequence::trivial(cat, n, &[a], l) {
            let inc = inclusion_of_first(cat, x, &t);
            let c = conjugate(cat, rng, &inc.target);
            let composite = SequenceMorphism {
                source: x.clone(),
                target: c.target.clone(),
                components: c
                    .components
                    .iter()
                    .zip(&inc.components)
                    .map(|(u, i)| u.compose(cat, i))
                    .collect(),
            };
            out.push(composite);
            out.push(projection_to_first(cat, x, &t));
        }
    }
    out
}
