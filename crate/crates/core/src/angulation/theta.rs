//! Natural isomorphisms `Theta: Sigma -> Omega^{-n}` on `mod E`, the classes
//! of exact sequences they cut out, and the action of unit families.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use super::delta::{delta_of, sigma_comparison};
use super::modf::FunctorCategory;
use super::sequence::NSigmaSequence;
use crate::algcore::decompose::{decompose, is_projective_indecomposable};
use crate::algcore::{find_iso, Module, ModuleMap};
use crate::error::{Error, Result};
use crate::exactla::Matrix;
use crate::frobstab::Frobenius;

/// Computes `Theta_M` for an indecomposable missing from the representatives.
pub type ThetaExtension = Arc<dyn Fn(&Module) -> Result<ModuleMap> + Send + Sync>;

/// `Theta_M: Sigma M -> Omega^{-n} M` on representatives of the
/// indecomposable non-projective `E`-modules, optionally extended on demand.
#[derive(Clone)]
pub struct ThetaIso {
    pub n: usize,
    pub reps: Vec<Module>,
    pub values: Vec<ModuleMap>,
    memo: Arc<Mutex<HashMap<ModuleKey, ModuleMap>>>,
    extension: Option<ThetaExtension>,
    extra: Arc<Mutex<Vec<(Module, ModuleMap)>>>,
}

impl fmt::Debug for ThetaIso {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ThetaIso")
            .field("n", &self.n)
            .field("reps", &self.reps.len())
            .field("extensible", &self.extension.is_some())
            .finish()
    }
}

type ModuleKey = (Vec<usize>, Vec<Matrix>);

/// Natural endomorphisms `u_M` of `Omega^{-n}` on the same representatives.
#[derive(Clone, Debug)]
pub struct UnitFamily {
    pub values: Vec<ModuleMap>,
}

/// An isomorphism `phi: rep -> piece` and the value at `rep`.
type Lookup<'a> = dyn Fn(&Module) -> Result<(ModuleMap, ModuleMap)> + 'a;

fn lookup_in(reps: &[Module], values: &[ModuleMap], piece: &Module) -> Result<Option<(ModuleMap, ModuleMap)>> {
    for (rep, value) in reps.iter().zip(values) {
        if let Some(phi) = find_iso(rep, piece)? {
            return Ok(Some((phi, value.clone())));
        }
    }
    Ok(None)
}

fn missing(piece: &Module) -> Error {
    Error::InvalidTheta(format!(
        "no representative for a summand of dimension {:?}",
        piece.dims
    ))
}

/// Sums `T(inc * phi) * value * S(phi^{-1} * proj)` over the non-projective
/// summands of `k`.
fn assemble(
    k: &Module,
    source: &Module,
    target: &Module,
    src_map: &dyn Fn(&ModuleMap) -> ModuleMap,
    tgt_map: &dyn Fn(&ModuleMap) -> ModuleMap,
    lookup: &Lookup,
) -> Result<ModuleMap> {
    let mut total = ModuleMap::zero(source, target);
    if k.is_zero() {
        return Ok(total);
    }
    for piece in decompose(k)? {
        if is_projective_indecomposable(&piece.module) {
            continue;
        }
        let (phi, value) = lookup(&piece.module)?;
        let phi_inv = phi.inverse().expect("isomorphism");
        let out = tgt_map(&piece.inclusion.compose(&phi));
        let inn = src_map(&phi_inv.compose(&piece.projection));
        total = total.add(&out.compose(&value).compose(&inn));
    }
    Ok(total)
}

/// Whether `f` is invertible in the stable category. A left inverse of an
/// isomorphism is its inverse, so one candidate suffices.
pub fn stable_iso(frob: &Frobenius, f: &ModuleMap) -> bool {
    stable_inverse(frob, f).is_some_and(|g| {
        frob.stably_equal(&f.compose(&g), &ModuleMap::identity(&f.target))
    })
}

impl ThetaIso {
    pub fn new(n: usize, reps: Vec<Module>, values: Vec<ModuleMap>) -> Self {
        ThetaIso {
            n,
            reps,
            values,
            memo: Arc::default(),
            extension: None,
            extra: Arc::default(),
        }
    }

    /// Values at indecomposables outside `reps` come from `extension`.
    pub fn with_extension(mut self, extension: ThetaExtension) -> Self {
        self.extension = Some(extension);
        self
    }

    /// The same family with other values on the representatives; the
    /// extension, if any, is kept.
    pub fn with_values(&self, values: Vec<ModuleMap>) -> Self {
        ThetaIso {
            values,
            memo: Arc::default(),
            extra: Arc::default(),
            ..self.clone()
        }
    }

    /// Number of indecomposables added through the extension so far.
    pub fn extended_count(&self) -> usize {
        self.extra.lock().expect("extra").len()
    }

    fn lookup(&self, piece: &Module) -> Result<(ModuleMap, ModuleMap)> {
        if let Some(hit) = lookup_in(&self.reps, &self.values, piece)? {
            return Ok(hit);
        }
        {
            let extra = self.extra.lock().expect("extra");
            for (rep, value) in extra.iter() {
                if let Some(phi) = find_iso(rep, piece)? {
                    return Ok((phi, value.clone()));
                }
            }
        }
        let ext = self.extension.as_ref().ok_or_else(|| missing(piece))?;
        let value = ext(piece)?;
        self.extra
            .lock()
            .expect("extra")
            .push((piece.clone(), value.clone()));
        Ok((ModuleMap::identity(piece), value))
    }

    /// `Theta_K` for an arbitrary module, memoized by module data.
    pub fn at(&self, fc: &FunctorCategory, k: &Module) -> Result<ModuleMap> {
        let key = (k.dims.clone(), k.action.clone());
        if let Some(v) = self.memo.lock().expect("memo").get(&key) {
            return Ok(v.clone());
        }
        let v = self.compute_at(fc, k)?;
        self.memo.lock().expect("memo").insert(key, v.clone());
        Ok(v)
    }

    fn compute_at(&self, fc: &FunctorCategory, k: &Module) -> Result<ModuleMap> {
        let frob = &fc.frob;
        let source = fc.twist(k);
        let target = frob.cosyzygy_power(k, self.n);
        assemble(
            k,
            &source,
            &target,
            &|h| fc.twist_map(h),
            &|h| frob.cosyzygy_map_power(h, self.n),
            &|piece| self.lookup(piece),
        )
    }

    /// Checks stable invertibility, naturality on stable Hom bases between
    /// representatives, and `(-1)^n Theta_{Omega^{-1} M} = Omega^{-1}(Theta_M) sigma_M`.
    pub fn validate(&self, fc: &FunctorCategory) -> Result<()> {
        let frob = &fc.frob;
        let n = self.n;
        for (m, theta) in self.reps.iter().zip(&self.values) {
            if theta.source != fc.twist(m) || theta.target != frob.cosyzygy_power(m, n) {
                return Err(Error::InvalidTheta("value has the wrong endpoints".into()));
            }
            if !stable_iso(frob, theta) {
                return Err(Error::InvalidTheta("value is not a stable isomorphism".into()));
            }
        }
        for (a, ma) in self.reps.iter().enumerate() {
            for (b, mb) in self.reps.iter().enumerate() {
                for f in frob.stable_hom(ma, mb).basis() {
                    let lhs = self.values[b].compose(&fc.twist_map(&f));
                    let rhs = frob.cosyzygy_map_power(&f, n).compose(&self.values[a]);
                    if !frob.stably_equal(&lhs, &rhs) {
                        return Err(Error::InvalidTheta(format!("not natural on a map {a} -> {b}")));
                    }
                }
            }
        }
        let sign = fc.field().sign(n);
        for (m, theta) in self.reps.iter().zip(&self.values) {
            let cm = frob.cosyzygy(m).module.clone();
            let lhs = self.at(fc, &cm)?.scale(sign);
            let rhs = frob
                .cosyzygy_map(theta)
                .compose(&sigma_comparison(fc, m)?);
            if !frob.stably_equal(&lhs, &rhs) {
                return Err(Error::InvalidTheta(
                    "incompatible with the triangle structures".into(),
                ));
            }
        }
        Ok(())
    }

    /// `u * Theta`.
    pub fn act(&self, u: &UnitFamily) -> ThetaIso {
        ThetaIso::new(
            self.n,
            self.reps.clone(),
            self.values
                .iter()
                .zip(&u.values)
                .map(|(t, v)| v.compose(t))
                .collect(),
        )
    }

    /// The unit family carrying `self` to `other`: `Theta' * Theta^{-1}`.
    pub fn quotient(&self, fc: &FunctorCategory, other: &ThetaIso) -> Result<UnitFamily> {
        let frob = &fc.frob;
        let mut values = Vec::with_capacity(self.values.len());
        for (t, t2) in self.values.iter().zip(&other.values) {
            let inv = stable_inverse(frob, t)
                .ok_or_else(|| Error::InvalidTheta("value is not a stable isomorphism".into()))?;
            values.push(t2.compose(&inv));
        }
        Ok(UnitFamily { values })
    }

    /// Whether the two families agree stably on every representative.
    pub fn stably_equal(&self, fc: &FunctorCategory, other: &ThetaIso) -> bool {
        self.values
            .iter()
            .zip(&other.values)
            .all(|(a, b)| fc.frob.stably_equal(a, b))
    }
}

/// Some `g` with `g * f = 1` stably.
pub fn stable_inverse(frob: &Frobenius, f: &ModuleMap) -> Option<ModuleMap> {
    let back = frob.stable_hom(&f.target, &f.source);
    let ends = frob.stable_hom(&f.source, &f.source);
    let id = ends.coords(&ModuleMap::identity(&f.source));
    let basis = back.basis();
    if basis.is_empty() {
        return id.iter().all(|&x| x == 0).then(|| ModuleMap::zero(&f.target, &f.source));
    }
    let cols: Vec<Vec<u32>> = basis.iter().map(|g| ends.coords(&g.compose(f))).collect();
    let c = Matrix::from_columns(f.field(), id.len(), &cols).solve_vec(&id)?;
    Some(back.combine(&c))
}

impl UnitFamily {
    pub fn identity(fc: &FunctorCategory, theta: &ThetaIso) -> Self {
        UnitFamily {
            values: theta
                .reps
                .iter()
                .map(|m| ModuleMap::identity(&fc.frob.cosyzygy_power(m, theta.n)))
                .collect(),
        }
    }

    pub fn at(&self, fc: &FunctorCategory, reps: &[Module], n: usize, k: &Module) -> Result<ModuleMap> {
        let frob = &fc.frob;
        let m = frob.cosyzygy_power(k, n);
        assemble(
            k,
            &m,
            &m,
            &|h| frob.cosyzygy_map_power(h, n),
            &|h| frob.cosyzygy_map_power(h, n),
            &|piece| lookup_in(reps, &self.values, piece)?.ok_or_else(|| missing(piece)),
        )
    }

    /// Naturality and `Omega^{-1}(u_M) = u_{Omega^{-1} M}`.
    pub fn validate(&self, fc: &FunctorCategory, reps: &[Module], n: usize) -> Result<()> {
        let frob = &fc.frob;
        for (a, ma) in reps.iter().enumerate() {
            if !stable_iso(frob, &self.values[a]) {
                return Err(Error::InvalidTheta("unit is not invertible".into()));
            }
            for (b, mb) in reps.iter().enumerate() {
                for f in frob.stable_hom(ma, mb).basis() {
                    let fm = frob.cosyzygy_map_power(&f, n);
                    let lhs = self.values[b].compose(&fm);
                    let rhs = fm.compose(&self.values[a]);
                    if !frob.stably_equal(&lhs, &rhs) {
                        return Err(Error::InvalidTheta(format!("unit not natural on {a} -> {b}")));
                    }
                }
            }
            let cm = frob.cosyzygy(ma).module.clone();
            let lhs = self.at(fc, reps, n, &cm)?;
            let rhs = frob.cosyzygy_map(&self.values[a]);
            if !frob.stably_equal(&lhs, &rhs) {
                return Err(Error::InvalidTheta("unit not compatible with Omega^{-1}".into()));
            }
        }
        Ok(())
    }

    pub fn is_identity(&self, fc: &FunctorCategory) -> bool {
        self.values
            .iter()
            .all(|u| fc.frob.stably_equal(u, &ModuleMap::identity(&u.source)))
    }
}

/// Exactness plus `delta = Theta` at the kernel of `alpha_1`.
pub fn theta_membership(fc: &FunctorCategory, theta: &ThetaIso, x: &NSigmaSequence) -> Result<bool> {
    if !x.is_exact(&fc.cat) {
        return Ok(false);
    }
    let d = delta_of(fc, x)?;
    let t = theta.at(fc, &d.kernel)?;
    Ok(fc.frob.stably_equal(&d.map, &t))
}
