//! Membership oracles for classes of `n`-Sigma-sequences.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::category::{BasedCategory, Mor};
use super::heller::enumerate_exact_from;
use super::modf::FunctorCategory;
use super::sequence::NSigmaSequence;
use super::theta::{theta_membership, ThetaIso};
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleKind {
    ThetaClass,
    StandardConstruction,
    ExplicitList,
}

/// Builds a member whose first map is the given one.
pub type AngleBuilder = Arc<dyn Fn(&Mor) -> Result<NSigmaSequence> + Send + Sync>;

#[derive(Clone)]
pub struct AngleClassOracle {
    pub kind: OracleKind,
    pub n: usize,
    pub fc: Arc<FunctorCategory>,
    theta: Option<ThetaIso>,
    list: Vec<NSigmaSequence>,
    builder: Option<AngleBuilder>,
}

impl fmt::Debug for AngleClassOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AngleClassOracle")
            .field("kind", &self.kind)
            .field("n", &self.n)
            .field("theta", &self.theta)
            .field("list", &self.list.len())
            .finish()
    }
}

impl AngleClassOracle {
    /// Exact sequences with `delta = Theta` at the kernel of `alpha_1`.
    pub fn theta_class(fc: Arc<FunctorCategory>, theta: ThetaIso) -> Self {
        AngleClassOracle {
            kind: OracleKind::ThetaClass,
            n: theta.n,
            fc,
            theta: Some(theta),
            list: Vec::new(),
            builder: None,
        }
    }

    /// A `Theta` class whose `Theta` was read off constructed angles, with
    /// the construction available for (F1)(c).
    pub fn standard(fc: Arc<FunctorCategory>, theta: ThetaIso, builder: AngleBuilder) -> Self {
        AngleClassOracle {
            kind: OracleKind::StandardConstruction,
            n: theta.n,
            fc,
            theta: Some(theta),
            list: Vec::new(),
            builder: Some(builder),
        }
    }

    pub fn explicit(fc: Arc<FunctorCategory>, n: usize, list: Vec<NSigmaSequence>) -> Self {
        AngleClassOracle {
            kind: OracleKind::ExplicitList,
            n,
            fc,
            theta: None,
            list,
            builder: None,
        }
    }

    pub fn cat(&self) -> &BasedCategory {
        &self.fc.cat
    }

    pub fn theta(&self) -> Option<&ThetaIso> {
        self.theta.as_ref()
    }

    /// The same oracle with another `Theta`.
    pub fn with_theta(&self, theta: ThetaIso) -> Self {
        AngleClassOracle {
            theta: Some(theta),
            ..self.clone()
        }
    }

    pub fn is_member(&self, x: &NSigmaSequence) -> Result<bool> {
        if x.arity() != self.n {
            return Ok(false);
        }
        match &self.theta {
            Some(t) if self.kind != OracleKind::ExplicitList => theta_membership(&self.fc, t, x),
            _ => Ok(self.list.contains(x)),
        }
    }

    /// A member starting with `alpha`. Uses the construction when there is
    /// one; otherwise searches sequences whose later objects have rank at
    /// most `max_rank`, so `None` only means nothing was found there.
    pub fn member_starting_with(&self, alpha: &Mor, max_rank: usize) -> Result<Option<NSigmaSequence>> {
        if let Some(build) = &self.builder {
            let x = build(alpha)?;
            return Ok(self.is_member(&x)?.then_some(x));
        }
        if self.kind == OracleKind::ExplicitList {
            return Ok(self.list.iter().find(|x| x.maps[0] == *alpha).cloned());
        }
        let mut found = None;
        let mut err = None;
        enumerate_exact_from(self.cat(), alpha, self.n, max_rank, |x| match self.is_member(&x) {
            Ok(true) => {
                found = Some(x);
                false
            }
            Ok(false) => true,
            Err(e) => {
                err = Some(e);
                false
            }
        });
        match err {
            Some(e) => Err(e),
            None => Ok(found),
        }
    }
}
