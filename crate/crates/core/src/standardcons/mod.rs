//! `n`-angulated categories from an `Omega^{-d}`-stable `d`-cluster tilting
//! subcategory `add T` of a stable module category, with `n = d + 2`.
//!
//! The suspension of the ambient triangulated category is `Omega^{-1}`; the
//! suspension of `add T` is `Omega^{-d}`, transported onto the summand list
//! by fixed isomorphisms.

mod construct;
mod cy;
mod oracle;
pub mod scenario;

use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::algcore::decompose::{is_indecomposable, is_projective_indecomposable, nilpotent_shift};
use crate::algcore::{decompose, find_iso, DirectSum, Module, ModuleMap};
use crate::angulation::{BasedCategory, Mor};
use crate::error::{Error, Result};
use crate::exactla::{Matrix, Subspace};
use crate::frobstab::Frobenius;

pub use construct::{ConstructedAngle, Tower};
pub use cy::{calabi_yau_report, CalabiYauReport};
pub use oracle::{angulation_oracle, StandardAngulation};
pub use scenario::{load_scenario, Scenario, ScenarioFile};

pub struct ClusterTiltingData {
    pub frob: Arc<Frobenius>,
    pub summands: Vec<Module>,
    pub labels: Vec<String>,
    pub d: usize,
    /// `Omega^{-d} T_a` is isomorphic to `T_{perm[a]}`; `None` when the
    /// summands are not closed under `Omega^{-d}`.
    pub perm: Option<Vec<usize>>,
    /// `tau_a: Omega^{-d} T_a -> T_{perm[a]}`.
    sigma_isos: Vec<ModuleMap>,
    category: OnceLock<Arc<BasedCategory>>,
    radicals: OnceLock<Vec<Vec<ModuleMap>>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessReport {
    pub index: usize,
    pub in_add_t: bool,
    pub left_orthogonal: bool,
    pub right_orthogonal: bool,
    /// Membership in `add T` agrees with both orthogonality tests.
    pub consistent: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClusterTiltingReport {
    pub d: usize,
    /// `d = 1`: the orthogonality conditions are empty.
    pub degenerate: bool,
    pub rigid: bool,
    /// `(a, b, j)` with `stable_hom(T_a, Omega^{-j} T_b) != 0`.
    pub rigidity_failures: Vec<(usize, usize, usize)>,
    pub stable: bool,
    pub permutation: Option<Vec<usize>>,
    pub witnesses: Vec<WitnessReport>,
    pub passed: bool,
}

fn permutation_order(perm: &[usize]) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    let mut order = 1;
    for start in 0..perm.len() {
        let mut len = 1;
        let mut x = perm[start];
        while x != start {
            x = perm[x];
            len += 1;
        }
        order = order / gcd(order, len) * len;
    }
    order
}

impl ClusterTiltingData {
    /// Checks that the summands are indecomposable, non-projective and
    /// pairwise non-isomorphic, and records how `Omega^{-d}` permutes them.
    pub fn new(frob: Arc<Frobenius>, summands: Vec<Module>, labels: Vec<String>, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Scenario("d must be positive".into()));
        }
        if labels.len() != summands.len() {
            return Err(Error::Scenario("one label per summand".into()));
        }
        for (t, label) in summands.iter().zip(&labels) {
            if !is_indecomposable(t)? || is_projective_indecomposable(t) {
                return Err(Error::Scenario(format!(
                    "summand {label} is not indecomposable non-projective"
                )));
            }
        }
        for a in 0..summands.len() {
            for b in 0..a {
                if find_iso(&summands[a], &summands[b])?.is_some() {
                    return Err(Error::Scenario(format!(
                        "summands {} and {} are isomorphic",
                        labels[b], labels[a]
                    )));
                }
            }
        }
        let mut perm = Some(Vec::new());
        let mut sigma_isos = Vec::new();
        for t in &summands {
            let shifted = frob.cosyzygy_power(t, d);
            let mut hit = None;
            for (b, u) in summands.iter().enumerate() {
                if let Some(h) = find_iso(&shifted, u)? {
                    hit = Some((b, h));
                    break;
                }
            }
            match hit {
                Some((b, h)) => {
                    if let Some(p) = perm.as_mut() {
                        p.push(b);
                    }
                    sigma_isos.push(h);
                }
                None => perm = None,
            }
        }
        if perm.is_none() {
            sigma_isos.clear();
        }
        Ok(ClusterTiltingData {
            frob,
            summands,
            labels,
            d,
            perm,
            sigma_isos,
            category: OnceLock::new(),
            radicals: OnceLock::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.d + 2
    }

    pub fn num_summands(&self) -> usize {
        self.summands.len()
    }

    /// Order of the permutation induced by `Omega^{-d}` on the summands.
    pub fn suspension_order(&self) -> Option<usize> {
        self.perm.as_deref().map(permutation_order)
    }

    /// `add T` with composition read off stable Hom bases and suspension
    /// `x -> tau_b * Omega^{-d}(x) * tau_a^{-1}`.
    pub fn category(&self) -> Result<Arc<BasedCategory>> {
        if let Some(c) = self.category.get() {
            return Ok(c.clone());
        }
        let perm = self
            .perm
            .clone()
            .ok_or_else(|| Error::Scenario("summands are not closed under the suspension".into()))?;
        let inverses: Vec<ModuleMap> = self
            .sigma_isos
            .iter()
            .map(|h| h.inverse().expect("isomorphism"))
            .collect();
        let cat = self.build_category(perm, |a, b, x| {
            let moved = self.frob.cosyzygy_map_power(x, self.d);
            self.sigma_isos[b].compose(&moved).compose(&inverses[a])
        })?;
        Ok(self.category.get_or_init(|| Arc::new(cat)).clone())
    }

    /// `add T` with the identity in place of the suspension. Only used to
    /// inspect the endomorphism algebra when the summands are not stable.
    pub fn category_without_suspension(&self) -> Result<BasedCategory> {
        let ids = (0..self.num_summands()).collect();
        self.build_category(ids, |_, _, x| x.clone())
    }

    fn build_category(
        &self,
        perm: Vec<usize>,
        sigma: impl Fn(usize, usize, &ModuleMap) -> ModuleMap,
    ) -> Result<BasedCategory> {
        let k = self.num_summands();
        let sh = |a: usize, b: usize| self.frob.stable_hom(&self.summands[a], &self.summands[b]);
        let bases: Vec<Vec<Vec<ModuleMap>>> = (0..k)
            .map(|a| (0..k).map(|b| sh(a, b).basis()).collect())
            .collect();
        let hom_dims = bases
            .iter()
            .map(|row| row.iter().map(|b| b.len()).collect())
            .collect();
        let identities = (0..k)
            .map(|a| sh(a, a).coords(&ModuleMap::identity(&self.summands[a])))
            .collect();
        let field = self.frob.algebra.field;
        let mut sigma_mats = Vec::with_capacity(k * k);
        for a in 0..k {
            for b in 0..k {
                let target = sh(perm[a], perm[b]);
                let cols: Vec<Vec<u32>> = bases[a][b]
                    .iter()
                    .map(|x| target.coords(&sigma(a, b, x)))
                    .collect();
                sigma_mats.push(Matrix::from_columns(field, target.dim(), &cols));
            }
        }
        BasedCategory::new(
            field,
            self.labels.clone(),
            hom_dims,
            |a, b, c, i, j| sh(a, c).coords(&bases[b][c][j].compose(&bases[a][b][i])),
            identities,
            perm,
            sigma_mats,
        )
    }

    /// The module `T_{x_1} + ... + T_{x_r}` with its structure maps.
    pub fn realize(&self, x: &[usize]) -> DirectSum {
        let parts: Vec<Module> = x.iter().map(|&a| self.summands[a].clone()).collect();
        Module::direct_sum(&self.frob.algebra, &parts)
    }

    /// A homomorphism representing `f` between the realized objects.
    pub fn to_module_map(&self, f: &Mor) -> ModuleMap {
        let src = self.realize(&f.source);
        let tgt = self.realize(&f.target);
        let mut total = ModuleMap::zero(&src.module, &tgt.module);
        for (l, &y) in f.target.iter().enumerate() {
            for (k, &x) in f.source.iter().enumerate() {
                let c = &f.blocks[l][k];
                if c.iter().all(|&v| v == 0) {
                    continue;
                }
                let g = self.frob.stable_hom(&self.summands[x], &self.summands[y]).combine(c);
                total = total.add(&tgt.inclusions[l].compose(&g).compose(&src.projections[k]));
            }
        }
        total
    }

    /// The stable class of `g` between realized objects as a morphism.
    pub fn to_mor(&self, g: &ModuleMap, source: &[usize], target: &[usize]) -> Mor {
        let src = self.realize(source);
        let tgt = self.realize(target);
        let blocks = target
            .iter()
            .enumerate()
            .map(|(l, &y)| {
                source
                    .iter()
                    .enumerate()
                    .map(|(k, &x)| {
                        let piece = tgt.projections[l].compose(g).compose(&src.inclusions[k]);
                        self.frob
                            .stable_hom(&self.summands[x], &self.summands[y])
                            .coords(&piece)
                    })
                    .collect()
            })
            .collect();
        Mor {
            source: source.to_vec(),
            target: target.to_vec(),
            blocks,
        }
    }

    /// Bases of the radical of the stable category between summands: all
    /// of `F(T_j, T_i)` off the diagonal, `x - l(x) id` on it.
    fn radical(&self, j: usize, i: usize) -> Result<&[ModuleMap]> {
        if self.radicals.get().is_none() {
            let k = self.num_summands();
            let mut all = Vec::with_capacity(k * k);
            for a in 0..k {
                for b in 0..k {
                    let basis = self.frob.stable_hom(&self.summands[a], &self.summands[b]).basis();
                    if a != b {
                        all.push(basis);
                        continue;
                    }
                    let id = ModuleMap::identity(&self.summands[a]);
                    let mut rad = Vec::new();
                    for x in basis {
                        let l = nilpotent_shift(&x).ok_or_else(|| {
                            Error::FieldTooSmall(format!("endomorphism ring of {}", self.labels[a]))
                        })?;
                        rad.push(x.sub(&id.scale(l)));
                    }
                    all.push(rad);
                }
            }
            let _ = self.radicals.set(all);
        }
        let k = self.num_summands();
        Ok(&self.radicals.get().expect("set")[j * k + i])
    }

    /// Minimal left `add T`-approximation `f: m -> T'`. Components into
    /// `T_i` are the standard basis vectors of `stable_hom(m, T_i)` not
    /// reached by maps factoring through the radical, lowest first.
    pub fn left_approximation(&self, m: &Module) -> Result<(Vec<usize>, ModuleMap)> {
        let k = self.num_summands();
        let mut obj = Vec::new();
        let mut comps = Vec::new();
        for i in 0..k {
            let sh = self.frob.stable_hom(m, &self.summands[i]);
            let mut reached = Subspace::new(self.frob.algebra.field, sh.dim());
            for j in 0..k {
                let from = self.frob.stable_hom(m, &self.summands[j]).basis();
                for h in self.radical(j, i)? {
                    for g in &from {
                        reached.insert(&sh.coords(&h.compose(g)));
                    }
                }
            }
            for c in reached.complement_positions() {
                let mut e = vec![0u32; sh.dim()];
                e[c] = 1;
                obj.push(i);
                comps.push(sh.combine(&e));
            }
        }
        let tgt = self.realize(&obj);
        let mut f = ModuleMap::zero(m, &tgt.module);
        for (slot, g) in comps.iter().enumerate() {
            f = f.add(&tgt.inclusions[slot].compose(g));
        }
        Ok((obj, f))
    }

    /// Whether every stable map `m -> T_i` factors through `f: m -> T'`.
    pub fn is_left_approximation(&self, f: &ModuleMap, obj: &[usize]) -> bool {
        let tgt = self.realize(obj);
        (0..self.num_summands()).all(|i| {
            let sh = self.frob.stable_hom(&f.source, &self.summands[i]);
            let mut span = Subspace::new(self.frob.algebra.field, sh.dim());
            for (l, &y) in obj.iter().enumerate() {
                let through = tgt.projections[l].compose(f);
                for b in self.frob.stable_hom(&self.summands[y], &self.summands[i]).basis() {
                    span.insert(&sh.coords(&b.compose(&through)));
                }
            }
            span.dim() == sh.dim()
        })
    }

    /// Matches `m` with an object of `add T` up to projective summands:
    /// the object, a stable isomorphism `m -> T'` and its stable inverse.
    pub fn match_in_add_t(&self, m: &Module) -> Result<Option<(Vec<usize>, ModuleMap, ModuleMap)>> {
        let mut obj = Vec::new();
        let mut pieces = Vec::new();
        for piece in decompose(m)? {
            if is_projective_indecomposable(&piece.module) {
                continue;
            }
            let mut hit = None;
            for (a, t) in self.summands.iter().enumerate() {
                if let Some(phi) = find_iso(t, &piece.module)? {
                    hit = Some((a, phi));
                    break;
                }
            }
            let Some((a, phi)) = hit else {
                return Ok(None);
            };
            obj.push(a);
            pieces.push((piece, phi));
        }
        let tgt = self.realize(&obj);
        let mut to = ModuleMap::zero(m, &tgt.module);
        let mut from = ModuleMap::zero(&tgt.module, m);
        for (slot, (piece, phi)) in pieces.iter().enumerate() {
            let phi_inv = phi.inverse().expect("isomorphism");
            to = to.add(&tgt.inclusions[slot].compose(&phi_inv).compose(&piece.projection));
            from = from.add(&piece.inclusion.compose(phi).compose(&tgt.projections[slot]));
        }
        Ok(Some((obj, to, from)))
    }

    /// Rigidity, stability and the orthogonality tests on the witnesses.
    pub fn check_cluster_tilting(&self, witnesses: &[Module]) -> Result<ClusterTiltingReport> {
        let frob = &self.frob;
        let k = self.num_summands();
        let shifted: Vec<Vec<Module>> = self
            .summands
            .iter()
            .map(|t| (1..self.d).map(|j| frob.cosyzygy_power(t, j)).collect())
            .collect();
        let mut rigidity_failures = Vec::new();
        for a in 0..k {
            for b in 0..k {
                for j in 1..self.d {
                    if frob.stable_hom(&self.summands[a], &shifted[b][j - 1]).dim() != 0 {
                        rigidity_failures.push((a, b, j));
                    }
                }
            }
        }
        let mut reports = Vec::new();
        for (index, w) in witnesses.iter().enumerate() {
            let in_add_t = self.match_in_add_t(w)?.is_some();
            let left_orthogonal =
                (0..k).all(|b| (1..self.d).all(|j| frob.stable_hom(w, &shifted[b][j - 1]).dim() == 0));
            let right_orthogonal = (1..self.d).all(|j| {
                let wj = frob.cosyzygy_power(w, j);
                self.summands.iter().all(|t| frob.stable_hom(t, &wj).dim() == 0)
            });
            reports.push(WitnessReport {
                index,
                in_add_t,
                left_orthogonal,
                right_orthogonal,
                consistent: in_add_t == left_orthogonal && in_add_t == right_orthogonal,
            });
        }
        let rigid = rigidity_failures.is_empty();
        let stable = self.perm.is_some();
        let passed = rigid && stable && reports.iter().all(|w| w.consistent);
        Ok(ClusterTiltingReport {
            d: self.d,
            degenerate: self.d == 1,
            rigid,
            rigidity_failures,
            stable,
            permutation: self.perm.clone(),
            witnesses: reports,
            passed,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::permutation_order;

    #[test]
    fn order_of_permutations() {
        assert_eq!(permutation_order(&[]), 1);
        assert_eq!(permutation_order(&[0, 1, 2]), 1);
        assert_eq!(permutation_order(&[1, 2, 0, 4, 3]), 6);
    }
}
