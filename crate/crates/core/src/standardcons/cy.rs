use std::sync::Arc;

use serde::Serialize;

use super::ClusterTiltingData;
use crate::angulation::FunctorCategory;
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct CalabiYauReport {
    pub n: usize,
    /// Least `d` with `Sigma_n^d` agreeing with the Serre functor on the
    /// summands.
    pub serre_power: Option<usize>,
    /// `n d - 1`.
    pub cy_dimension: Option<usize>,
    /// `mod E` has no non-projective modules, so the check is empty.
    pub degenerate: bool,
    pub modules_checked: usize,
    pub closure_complete: bool,
    /// Indices of representatives where `Omega nu M` and
    /// `Omega^{1 - nd} M` are not stably isomorphic.
    pub mismatches: Vec<usize>,
    pub passed: bool,
}

/// Finds the power of the suspension matching the Serre functor on `add T`
/// and checks the resulting Calabi-Yau property of `mod E` on the
/// non-projective indecomposables reachable within `cap`.
pub fn calabi_yau_report(ctd: &ClusterTiltingData, cap: usize) -> Result<CalabiYauReport> {
    let Some(perm) = ctd.perm.as_ref() else {
        // Report why E fails if it does; otherwise the summands are the problem.
        FunctorCategory::new(Arc::new(ctd.category_without_suspension()?))?;
        return Err(Error::Scenario("summands are not closed under the suspension".into()));
    };
    let fc = FunctorCategory::new(ctd.category()?)?;
    let frob = &ctd.frob;
    let k = ctd.num_summands();
    let mut serre_target = Vec::with_capacity(k);
    for t in &ctd.summands {
        let s = frob.serre(t);
        let mut hit = None;
        for (b, u) in ctd.summands.iter().enumerate() {
            if frob.stably_isomorphic(&s, u)?.is_some() {
                hit = Some(b);
                break;
            }
        }
        serre_target.push(hit);
    }
    let order = ctd.suspension_order().expect("stable");
    let serre_power = (1..=order).find(|&d| {
        (0..k).all(|a| {
            let moved = (0..d).fold(a, |x, _| perm[x]);
            serre_target[a] == Some(moved)
        })
    });
    let n = ctd.n();
    let cy_dimension = serre_power.map(|d| n * d - 1);
    let (reps, closure_complete) = fc.frob.nonprojective_closure(cap)?;
    let mut mismatches = Vec::new();
    if let Some(m) = cy_dimension {
        for (i, rep) in reps.iter().enumerate() {
            let lhs = fc.frob.serre(rep);
            let rhs = fc.frob.cosyzygy_power(rep, m);
            if fc.frob.stably_isomorphic(&lhs, &rhs)?.is_none() {
                mismatches.push(i);
            }
        }
    }
    let degenerate = reps.is_empty();
    Ok(CalabiYauReport {
        n,
        serre_power,
        cy_dimension,
        degenerate,
        modules_checked: reps.len(),
        closure_complete,
        passed: cy_dimension.is_some() && mismatches.is_empty(),
        mismatches,
    })
}
