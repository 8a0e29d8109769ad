//! Exhaustive checks of the parametrization of pre-angulations by `Theta`
//! families on small categories.

use std::collections::HashMap;

use serde::Serialize;

use super::category::{hom_dim, rep_dim, sigma_obj, solve_affine, BasedCategory, Mor, Obj};
use super::delta::delta_of;
use super::modf::FunctorCategory;
use super::sequence::NSigmaSequence;
use super::theta::{stable_iso, theta_membership, ThetaIso};
use crate::algcore::{Module, ModuleMap};
use crate::error::Result;
use crate::exactla::PrimeField;

/// `proj k[x]/x^2` over `F_p`, one object with basis `{1, x}`, and
/// `Sigma(x) = twist * x`.
pub fn dual_numbers(p: u32, twist: i64) -> BasedCategory {
    let f = PrimeField::new(p).expect("prime");
    let sigma = crate::exactla::Matrix::from_rows(f, &[vec![1, 0], vec![0, twist]]);
    BasedCategory::new(
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
    )
    .expect("valid category")
}

/// All sorted lists of indecomposables of length at most `max_rank`.
pub fn objects_up_to(cat: &BasedCategory, max_rank: usize) -> Vec<Obj> {
    let m = cat.num_objects();
    let mut out = vec![vec![]];
    let mut frontier = vec![vec![]];
    for _ in 0..max_rank {
        let mut next = Vec::new();
        for o in &frontier {
            let start = o.last().copied().unwrap_or(0);
            for a in start..m {
                let mut p: Vec<usize> = o.clone();
                p.push(a);
                next.push(p);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// All vectors of `span(basis)` over the field.
fn span_points(field: PrimeField, basis: &[Vec<u32>], len: usize) -> Vec<Vec<u32>> {
    let p = field.p();
    let mut out = vec![vec![0u32; len]];
    for b in basis {
        let mut next = Vec::with_capacity(out.len() * p as usize);
        for v in &out {
            for c in 0..p {
                next.push(
                    v.iter()
                        .zip(b)
                        .map(|(&x, &y)| field.add(x, field.mul(c, y)))
                        .collect(),
                );
            }
        }
        out = next;
    }
    out
}

/// Maps `X -> Y` with `after * f = 0` and `f * before = 0` (when given).
fn constrained_maps(
    cat: &BasedCategory,
    x: &[usize],
    y: &[usize],
    before: Option<&Mor>,
    after: Option<&Mor>,
) -> Vec<Mor> {
    let d = hom_dim(cat, x, y);
    let eval = |v: &[u32]| {
        let f = Mor::from_flat(cat, x, y, v);
        let mut out = Vec::new();
        if let Some(b) = before {
            out.extend(f.compose(cat, b).flatten());
        }
        if let Some(a) = after {
            out.extend(a.compose(cat, &f).flatten());
        }
        out
    };
    let sol = solve_affine(cat.field, d, eval).expect("homogeneous system");
    span_points(cat.field, &sol.kernel, d)
        .into_iter()
        .map(|v| Mor::from_flat(cat, x, y, &v))
        .collect()
}

/// Exactness of `a` then `b` at their common object, for every `T`.
fn exact_at(cat: &BasedCategory, a: &Mor, b: &Mor) -> bool {
    (0..cat.num_objects()).all(|t| {
        let ra = a.represent(cat, t);
        let rb = b.represent(cat, t);
        ra.rank() + rb.rank() == rep_dim(cat, t, &a.target)
    })
}

/// Calls `visit` on every exact `n`-Sigma-sequence whose objects have at
/// most `max_rank` indecomposable summands (objects as sorted lists).
/// Stops early once `visit` returns `false`.
pub fn enumerate_exact(
    cat: &BasedCategory,
    n: usize,
    max_rank: usize,
    mut visit: impl FnMut(NSigmaSequence) -> bool,
) {
    let objs = objects_up_to(cat, max_rank);
    for_each_tuple(objs.len(), n, |choice| {
        let objects: Vec<Obj> = choice.iter().map(|&i| objs[i].clone()).collect();
        extend(cat, &objects, &mut Vec::new(), &mut visit)
    });
}

/// As `enumerate_exact`, for sequences whose first map is `alpha`; only
/// `X_3, ..., X_n` range over objects of rank at most `max_rank`.
pub fn enumerate_exact_from(
    cat: &BasedCategory,
    alpha: &Mor,
    n: usize,
    max_rank: usize,
    mut visit: impl FnMut(NSigmaSequence) -> bool,
) {
    let objs = objects_up_to(cat, max_rank);
    for_each_tuple(objs.len(), n - 2, |choice| {
        let mut objects = vec![alpha.source.clone(), alpha.target.clone()];
        objects.extend(choice.iter().map(|&i| objs[i].clone()));
        extend(cat, &objects, &mut vec![alpha.clone()], &mut visit)
    });
}

/// Runs `f` on every tuple in `0..m` of length `len` until it returns `false`.
fn for_each_tuple(m: usize, len: usize, mut f: impl FnMut(&[usize]) -> bool) {
    let mut choice = vec![0usize; len];
    loop {
        if !f(&choice) {
            return;
        }
        let mut k = 0;
        while k < len {
            choice[k] += 1;
            if choice[k] < m {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
        if k == len {
            return;
        }
    }
}

fn extend(
    cat: &BasedCategory,
    objects: &[Obj],
    maps: &mut Vec<Mor>,
    visit: &mut impl FnMut(NSigmaSequence) -> bool,
) -> bool {
    let n = objects.len();
    let i = maps.len();
    if i == n {
        let s = NSigmaSequence {
            objects: objects.to_vec(),
            maps: maps.clone(),
        };
        return !s.is_exact(cat) || visit(s);
    }
    let src = &objects[i];
    let tgt = if i + 1 < n {
        objects[i + 1].clone()
    } else {
        sigma_obj(cat, &objects[0])
    };
    let wrap = (i + 1 == n).then(|| maps[0].sigma(cat));
    for f in constrained_maps(cat, src, &tgt, maps.last(), wrap.as_ref()) {
        if let Some(prev) = maps.last() {
            if !exact_at(cat, prev, &f) {
                continue;
            }
        }
        maps.push(f);
        let go_on = extend(cat, objects, maps, visit);
        maps.pop();
        if !go_on {
            return false;
        }
    }
    true
}

/// All families of stable isomorphisms `Sigma M -> Omega^{-n} M` on the
/// representatives, before validation.
pub fn theta_candidates(fc: &FunctorCategory, reps: &[Module], n: usize) -> Vec<ThetaIso> {
    let frob = &fc.frob;
    let f = fc.field();
    let mut per_rep = Vec::new();
    for m in reps {
        let sh = frob.stable_hom(&fc.twist(m), &frob.cosyzygy_power(m, n));
        let basis: Vec<Vec<u32>> = (0..sh.dim())
            .map(|k| {
                let mut v = vec![0u32; sh.dim()];
                v[k] = 1;
                v
            })
            .collect();
        let isos: Vec<_> = span_points(f, &basis, sh.dim())
            .into_iter()
            .map(|c| sh.combine(&c))
            .filter(|g| stable_iso(frob, g))
            .collect();
        per_rep.push(isos);
    }
    let mut out = vec![Vec::new()];
    for isos in per_rep {
        let mut next = Vec::new();
        for partial in &out {
            for g in &isos {
                let mut p: Vec<_> = partial.clone();
                p.push(g.clone());
                next.push(p);
            }
        }
        out = next;
    }
    out.into_iter()
        .map(|values| ThetaIso::new(n, reps.to_vec(), values))
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct HellerReport {
    pub sequences: usize,
    pub candidates: usize,
    pub valid_thetas: usize,
    /// Number of sequences in the class of each valid `Theta`.
    pub class_sizes: Vec<usize>,
    /// Sequences whose kernel is projective belong to every class.
    pub common: usize,
    /// Sequences whose `delta` matches no valid `Theta`.
    pub unclassified: usize,
    pub consistent_partition: bool,
    pub action_free: bool,
    pub action_transitive: bool,
    pub failures: Vec<String>,
}

impl HellerReport {
    pub fn passed(&self) -> bool {
        self.valid_thetas > 0 && self.consistent_partition && self.action_free && self.action_transitive
    }
}

/// Enumerates exact sequences, partitions them by `delta`, and checks that
/// unit families act freely and transitively on the valid `Theta`s.
pub fn heller_orbit_check(
    fc: &FunctorCategory,
    reps: &[Module],
    n: usize,
    max_rank: usize,
) -> Result<HellerReport> {
    let frob = &fc.frob;
    let candidates = theta_candidates(fc, reps, n);
    let valid: Vec<ThetaIso> = candidates
        .iter()
        .filter(|t| t.validate(fc).is_ok())
        .cloned()
        .collect();
    let mut failures = Vec::new();

    let mut sequences = 0;
    let mut common = 0;
    let mut unclassified = 0;
    let mut class_sizes = vec![0usize; valid.len()];
    let mut consistent = true;
    let mut err = None;
    let mut kernel_projective: HashMap<Mor, bool> = HashMap::new();
    enumerate_exact(&fc.cat, n, max_rank, |s| {
        if err.is_some() {
            return false;
        }
        sequences += 1;
        let projective_kernel = *kernel_projective.entry(s.maps[0].clone()).or_insert_with(|| {
            let (k, _) = fc.yoneda(&s.maps[0]).kernel();
            frob.stably_zero(&ModuleMap::identity(&k))
        });
        if projective_kernel {
            // Both delta and every Theta vanish on projective kernels.
            common += 1;
            class_sizes.iter_mut().for_each(|c| *c += 1);
            return true;
        }
        let d = match delta_of(fc, &s) {
            Ok(d) => d,
            Err(e) => {
                err = Some(e);
                return false;
            }
        };
        let mut members = Vec::with_capacity(valid.len());
        for t in &valid {
            let by_delta = match t.at(fc, &d.kernel) {
                Ok(v) => frob.stably_equal(&d.map, &v),
                Err(e) => {
                    err = Some(e);
                    return false;
                }
            };
            let by_oracle = theta_membership(fc, t, &s).unwrap_or(false);
            if by_delta != by_oracle {
                consistent = false;
                failures.push(format!("delta and membership disagree on {s:?}"));
            }
            members.push(by_delta);
        }
        match members.iter().filter(|&&b| b).count() {
            0 => unclassified += 1,
            1 => {}
            hits => {
                consistent = false;
                failures.push(format!("sequence in {hits} classes: {s:?}"));
            }
        }
        for (c, &b) in members.iter().enumerate() {
            if b {
                class_sizes[c] += 1;
            }
        }
        true
    });
    if let Some(e) = err {
        return Err(e);
    }

    // Free: u * Theta = Theta forces u = 1. Transitive: Theta' / Theta works.
    let mut action_free = true;
    let mut action_transitive = true;
    for (a, ta) in valid.iter().enumerate() {
        for (b, tb) in valid.iter().enumerate() {
            let u = ta.quotient(fc, tb)?;
            if u.validate(fc, reps, n).is_err() {
                action_transitive = false;
                failures.push(format!("quotient of Theta {b} by Theta {a} is not a unit family"));
            }
            if !ta.act(&u).stably_equal(fc, tb) {
                action_transitive = false;
                failures.push(format!("quotient does not carry Theta {a} to Theta {b}"));
            }
            if (a == b) != u.is_identity(fc) {
                action_free = false;
                failures.push(format!("unit family between {a} and {b} has the wrong stabilizer"));
            }
        }
    }
    Ok(HellerReport {
        sequences,
        candidates: candidates.len(),
        valid_thetas: valid.len(),
        class_sizes,
        common,
        unclassified,
        consistent_partition: consistent,
        action_free,
        action_transitive,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn object_lists_by_rank() {
        let cat = dual_numbers(3, 1);
        assert_eq!(objects_up_to(&cat, 2), vec![vec![], vec![0], vec![0, 0]]);
    }

    #[test]
    fn rank_one_exact_triangles() {
        let cat = dual_numbers(3, -1);
        let mut count = 0;
        enumerate_exact(&cat, 3, 1, |s| {
            assert!(s.is_exact(&cat));
            count += 1;
            true
        });
        assert!(count > 0);
    }
}
