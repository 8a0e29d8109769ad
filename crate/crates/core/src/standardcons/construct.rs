use serde::Serialize;

use super::ClusterTiltingData;
use crate::algcore::{Module, ModuleMap};
use crate::angulation::{Mor, NSigmaSequence};
use crate::error::{Error, Result};
use crate::frobstab::TriangleData;

/// The diagram behind a constructed angle. `halves[m]` is `X_{m+1.5}`,
/// starting with `X_1` itself and ending with `X_{n-0.5}`; triangle `m`
/// has `halves[m]` as its first and `halves[m + 1]` as its third vertex.
#[derive(Clone, Debug)]
pub struct Tower {
    pub halves: Vec<Module>,
    pub triangles: Vec<TriangleData>,
    /// Left approximations `X_{k+0.5} -> X_{k+1}` for `k = 2..n-2`.
    pub approximations: Vec<ModuleMap>,
    /// Stable isomorphism from `X_{n-0.5}` onto the realized `X_n`.
    pub closing: ModuleMap,
}

#[derive(Clone, Debug)]
pub struct ConstructedAngle {
    pub sequence: NSigmaSequence,
    pub tower: Tower,
}

/// `(i, j, k)` with `stable_hom(X_{i+1.5}, Omega^{-j} T_k) != 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VanishingFailure {
    pub i: usize,
    pub j: usize,
    pub k: usize,
}

impl ClusterTiltingData {
    /// Completes `alpha` to an `n`-angle: cone, then alternating minimal
    /// left approximations and cones until the cone lies in `add T`;
    /// `alpha_n` is the lower edge of the tower.
    pub fn construct_angle(&self, alpha: &Mor) -> Result<ConstructedAngle> {
        let frob = &self.frob;
        let cat = self.category()?;
        let n = self.n();
        let first = self.to_module_map(alpha);
        let tri = frob.triangle_of(&first)?;
        let mut halves = vec![first.source.clone(), tri.cone.clone()];
        let mut objects = vec![alpha.source.clone(), alpha.target.clone()];
        let mut maps = vec![alpha.clone()];
        let mut approximations = Vec::new();
        let mut prev_to_cone = tri.to_cone.clone();
        let mut triangles = vec![tri];

        for _ in 2..n - 1 {
            let half = halves.last().expect("nonempty").clone();
            let (obj, f) = self.left_approximation(&half)?;
            let step = f.compose(&prev_to_cone);
            maps.push(self.to_mor(&step, objects.last().expect("nonempty"), &obj));
            objects.push(obj);
            let tri = frob.triangle_of(&f)?;
            halves.push(tri.cone.clone());
            prev_to_cone = tri.to_cone.clone();
            approximations.push(f);
            triangles.push(tri);
        }

        let last = halves.last().expect("nonempty");
        let (xn, closing, closing_inv) = self
            .match_in_add_t(last)?
            .ok_or(Error::CoresolutionTooLong(n - 2))?;
        let step = closing.compose(&prev_to_cone);
        maps.push(self.to_mor(&step, objects.last().expect("nonempty"), &xn));

        // Lower edge: X_{n-0.5} -> Omega^{-1} X_{n-1.5} -> ... -> Omega^{-d} X_1.
        let top = triangles.len() - 1;
        let mut edge = triangles[top].from_cone.clone();
        for m in (0..top).rev() {
            edge = frob
                .cosyzygy_map_power(&triangles[m].from_cone, top - m)
                .compose(&edge);
        }
        let edge = edge.compose(&closing_inv);
        maps.push(self.transport_to_suspension(&edge, &xn, &alpha.source));
        objects.push(xn);

        let sequence = NSigmaSequence::new(&cat, objects, maps)?;
        Ok(ConstructedAngle {
            sequence,
            tower: Tower {
                halves,
                triangles,
                approximations,
                closing,
            },
        })
    }

    /// The morphism `x -> Sigma y` represented by `g: T_x -> Omega^{-d} T_y`.
    fn transport_to_suspension(&self, g: &ModuleMap, x: &[usize], y: &[usize]) -> Mor {
        let perm = self.perm.as_ref().expect("stable");
        let src = self.realize(x);
        let ys = self.realize(y);
        let blocks = y
            .iter()
            .enumerate()
            .map(|(l, &b)| {
                let onto = self.sigma_isos[b]
                    .compose(&self.frob.cosyzygy_map_power(&ys.projections[l], self.d))
                    .compose(g);
                x.iter()
                    .enumerate()
                    .map(|(k, &a)| {
                        self.frob
                            .stable_hom(&self.summands[a], &self.summands[perm[b]])
                            .coords(&onto.compose(&src.inclusions[k]))
                    })
                    .collect()
            })
            .collect();
        Mor {
            source: x.to_vec(),
            target: y.iter().map(|&b| perm[b]).collect(),
            blocks,
        }
    }

    /// Vanishing of `stable_hom(X_{i+1.5}, Omega^{-j} T_k)` for
    /// `0 < j < i < n - 2`; returns the violations.
    pub fn check_tower_vanishing(&self, tower: &Tower) -> Vec<VanishingFailure> {
        let n = self.n();
        let mut out = Vec::new();
        for i in 2..n.saturating_sub(2) {
            for j in 1..i {
                for (k, t) in self.summands.iter().enumerate() {
                    let shifted = self.frob.cosyzygy_power(t, j);
                    if self.frob.stable_hom(&tower.halves[i], &shifted).dim() != 0 {
                        out.push(VanishingFailure { i, j, k });
                    }
                }
            }
        }
        out
    }
}
