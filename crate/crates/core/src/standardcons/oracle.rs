use std::sync::Arc;

use super::ClusterTiltingData;
use crate::algcore::{Module, ModuleMap};
use crate::angulation::delta::{copresentation, delta_of};
use crate::angulation::oracle::AngleBuilder;
use crate::angulation::{AngleClassOracle, FunctorCategory, ThetaIso};
use crate::error::Result;

/// The oracle of the standard construction together with what it was
/// built from.
pub struct StandardAngulation {
    pub ctd: Arc<ClusterTiltingData>,
    pub fc: Arc<FunctorCategory>,
    pub reps: Vec<Module>,
    /// Whether `reps` exhausts the closure it was drawn from.
    pub reps_complete: bool,
    pub theta: ThetaIso,
    /// Outcome of validating `theta` as a natural isomorphism compatible
    /// with the triangle structures.
    pub theta_check: std::result::Result<(), String>,
    pub oracle: AngleClassOracle,
}

/// `Theta_M` read off the constructed angle on the injective
/// copresentation of `M`, one per representative and on demand for other
/// indecomposables, and the oracle whose members are the exact sequences
/// with `delta = Theta`.
pub fn angulation_oracle(ctd: Arc<ClusterTiltingData>, reps_cap: usize) -> Result<StandardAngulation> {
    let fc = Arc::new(FunctorCategory::new(ctd.category()?)?);
    let (reps, reps_complete) = fc.frob.nonprojective_closure(reps_cap)?;
    let n = ctd.n();
    let theta_at = {
        let (fc, ctd) = (fc.clone(), ctd.clone());
        move |m: &Module| -> Result<ModuleMap> {
            let (alpha, iso) = copresentation(&fc, m)?;
            let angle = ctd.construct_angle(&alpha)?;
            let delta = delta_of(&fc, &angle.sequence)?;
            let back = iso.inverse().expect("isomorphism onto the kernel");
            Ok(fc
                .frob
                .cosyzygy_map_power(&back, n)
                .compose(&delta.map)
                .compose(&fc.twist_map(&iso)))
        }
    };
    let values = crate::parallel_map(&reps, crate::thread_count(), &theta_at)
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let theta = ThetaIso::new(n, reps.clone(), values).with_extension(Arc::new(theta_at));
    let theta_check = theta.validate(&fc).map_err(|e| e.to_string());
    let builder_ctd = ctd.clone();
    let builder: AngleBuilder = Arc::new(move |alpha| builder_ctd.construct_angle(alpha).map(|c| c.sequence));
    let oracle = AngleClassOracle::standard(fc.clone(), theta.clone(), builder);
    Ok(StandardAngulation {
        ctd,
        fc,
        reps,
        reps_complete,
        theta,
        theta_check,
        oracle,
    })
}
