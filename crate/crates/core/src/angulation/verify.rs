//! Sampled verification of (F1)-(F4) for a membership oracle, with optional
//! fault injection.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::category::{hom_dim, solve_affine, BasedCategory, Mor, Obj};
use super::heller::objects_up_to;
use super::oracle::{AngleClassOracle, OracleKind};
use super::sequence::{completion_at, completion_space, complete_morphism, NSigmaSequence, SequenceMorphism};
use super::theta::{stable_iso, ThetaIso};
use crate::algcore::ModuleMap;
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Budget,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub axiom: String,
    pub status: Status,
    pub counterexample: Option<Value>,
    pub samples: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct VerifyBudget {
    /// Rank bound for sampled objects.
    pub max_rank: usize,
    /// Number of random first maps, and of sums for (F1)(a).
    pub members: usize,
    /// Number of commuting squares for (F3) and (F4).
    pub squares: usize,
    /// Points examined per (F4) sweep; sweeps above it are sampled.
    pub sweep_cap: usize,
    /// Rank bound for the later objects when searching for a member.
    pub search_rank: usize,
    pub seed: u64,
}

impl Default for VerifyBudget {
    fn default() -> Self {
        VerifyBudget {
            max_rank: 2,
            members: 12,
            squares: 12,
            sweep_cap: 1 << 16,
            search_rank: 2,
            seed: 1,
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct Faults {
    /// Wrong sign `(-1)^{n+1}` on the wrapped map of rotations.
    pub rotation_sign: bool,
    /// `+alpha_{i+1}` instead of `-alpha_{i+1}` in cones.
    pub cone_entry: bool,
    /// Replaces this `Theta` value by zero.
    pub theta_value: Option<usize>,
}

impl Faults {
    pub fn any(&self) -> bool {
        self.rotation_sign || self.cone_entry || self.theta_value.is_some()
    }
}

pub const AXIOMS: [&str; 7] = ["F1a", "F1b", "F1c", "F2", "F3", "F4", "exactness"];

pub fn random_mor(cat: &BasedCategory, rng: &mut impl Rng, x: &[usize], y: &[usize]) -> Mor {
    let p = cat.field.p();
    let flat: Vec<u32> = (0..hom_dim(cat, x, y)).map(|_| rng.gen_range(0..p)).collect();
    Mor::from_flat(cat, x, y, &flat)
}

/// A random `phi_2` with `beta_1 phi_1 = phi_2 alpha_1`, if `phi_1` admits one.
pub fn random_partner(
    cat: &BasedCategory,
    rng: &mut impl Rng,
    x: &NSigmaSequence,
    y: &NSigmaSequence,
    phi1: &Mor,
) -> Option<Mor> {
    let (x2, y2) = (&x.objects[1], &y.objects[1]);
    let target = y.maps[0].compose(cat, phi1);
    let sol = solve_affine(cat.field, hom_dim(cat, x2, y2), |v| {
        let phi2 = Mor::from_flat(cat, x2, y2, v);
        phi2.compose(cat, &x.maps[0]).sub(cat, &target).flatten()
    })?;
    let p = cat.field.p();
    let coeffs: Vec<u32> = sol.kernel.iter().map(|_| rng.gen_range(0..p)).collect();
    Some(Mor::from_flat(cat, x2, y2, &sol.point(cat.field, &coeffs)))
}

/// Outcome of the (F4) search.
#[derive(Clone, Debug)]
pub enum ConeSearch {
    Found(SequenceMorphism),
    /// No completion with a member cone; `exhaustive` tells whether every
    /// completion was examined.
    NotFound { exhaustive: bool, examined: usize },
}

/// (F4): a completion of `(phi_1, phi_2)` whose cone is a member. Sweeps
/// the whole affine space of completions when it has at most `cap` points,
/// and samples `cap` of them otherwise.
pub fn complete_with_exact_cone(
    oracle: &AngleClassOracle,
    x: &NSigmaSequence,
    y: &NSigmaSequence,
    phi1: &Mor,
    phi2: &Mor,
    cap: usize,
    flip_cone: bool,
    rng: &mut impl Rng,
) -> Result<ConeSearch> {
    let cat = oracle.cat();
    let Some((sol, shapes)) = completion_space(cat, x, y, phi1, phi2)? else {
        return Ok(ConeSearch::NotFound {
            exhaustive: true,
            examined: 0,
        });
    };
    let p = cat.field.p() as usize;
    let k = sol.kernel.len();
    let size = (0..k).try_fold(1usize, |acc, _| acc.checked_mul(p).filter(|&s| s <= cap));
    let try_point = |coeffs: &[u32]| -> Result<Option<SequenceMorphism>> {
        let phi = completion_at(cat, x, y, phi1, phi2, &shapes, &sol.point(cat.field, coeffs));
        Ok(oracle.is_member(&phi.cone_signed(cat, flip_cone))?.then_some(phi))
    };
    match size {
        Some(total) => {
            let mut coeffs = vec![0u32; k];
            for examined in 0..total {
                if let Some(phi) = try_point(&coeffs)? {
                    return Ok(ConeSearch::Found(phi));
                }
                for c in coeffs.iter_mut() {
                    *c += 1;
                    if (*c as usize) < p {
                        break;
                    }
                    *c = 0;
                }
                if examined + 1 == total {
                    return Ok(ConeSearch::NotFound {
                        exhaustive: true,
                        examined: total,
                    });
                }
            }
            unreachable!("total is at least one")
        }
        None => {
            let zero = vec![0u32; k];
            if let Some(phi) = try_point(&zero)? {
                return Ok(ConeSearch::Found(phi));
            }
            for _ in 1..cap {
                let coeffs: Vec<u32> = (0..k).map(|_| rng.gen_range(0..p as u32)).collect();
                if let Some(phi) = try_point(&coeffs)? {
                    return Ok(ConeSearch::Found(phi));
                }
            }
            Ok(ConeSearch::NotFound {
                exhaustive: false,
                examined: cap,
            })
        }
    }
}

/// Tally for one axiom: first failure wins over a budget shortfall.
struct Check {
    axiom: &'static str,
    samples: usize,
    fail: Option<Value>,
    budget: Option<Value>,
}

impl Check {
    fn new(axiom: &'static str) -> Self {
        Check {
            axiom,
            samples: 0,
            fail: None,
            budget: None,
        }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> Value) {
        self.samples += 1;
        if !ok && self.fail.is_none() {
            self.fail = Some(witness());
        }
    }

    fn short(&mut self, witness: impl FnOnce() -> Value) {
        self.samples += 1;
        if self.budget.is_none() {
            self.budget = Some(witness());
        }
    }

    fn report(self) -> AxiomReport {
        let (status, counterexample) = match (self.fail, self.budget) {
            (Some(c), _) => (Status::Fail, Some(c)),
            (None, Some(c)) => (Status::Budget, Some(c)),
            (None, None) => (Status::Pass, None),
        };
        AxiomReport {
            axiom: self.axiom.to_string(),
            status,
            counterexample,
            samples: self.samples,
        }
    }
}

fn corrupt(theta: &ThetaIso, i: usize) -> ThetaIso {
    let mut values = theta.values.clone();
    if let Some(v) = values.get_mut(i) {
        *v = ModuleMap::zero(&v.source, &v.target);
    }
    theta.with_values(values)
}

/// Whether no member can start with `alpha` at all: `delta` is a stable
/// isomorphism, so a non-invertible `Theta` at a non-projective kernel
/// rules out every candidate.
fn theta_blocks(oracle: &AngleClassOracle, alpha: &Mor) -> Result<bool> {
    let Some(theta) = oracle.theta() else {
        return Ok(false);
    };
    let fc = &oracle.fc;
    let (k, _) = fc.yoneda(alpha).kernel();
    if fc.frob.stably_zero(&ModuleMap::identity(&k)) {
        return Ok(false);
    }
    Ok(!stable_iso(&fc.frob, &theta.at(fc, &k)?))
}

/// Checks (F1)-(F4) and exactness on sampled members. Reports come back
/// sorted by axiom name; `only` restricts the checks that run.
pub fn verify_axioms(
    oracle: &AngleClassOracle,
    budget: &VerifyBudget,
    faults: &Faults,
    only: Option<&[String]>,
) -> Result<Vec<AxiomReport>> {
    let corrupted;
    let oracle = match (faults.theta_value, oracle.theta()) {
        (Some(i), Some(t)) => {
            corrupted = oracle.with_theta(corrupt(t, i));
            &corrupted
        }
        _ => oracle,
    };
    let wanted = |a: &str| only.is_none_or(|list| list.iter().any(|x| x == a));
    let cat = oracle.cat();
    let n = oracle.n;
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let objs: Vec<Obj> = objects_up_to(cat, budget.max_rank)
        .into_iter()
        .filter(|o| !o.is_empty())
        .collect();

    // First maps: identities, maps to zero, then random ones.
    let mut alphas: Vec<Mor> = Vec::new();
    for a in 0..cat.num_objects() {
        alphas.push(Mor::identity(cat, &[a]));
        alphas.push(Mor::zero(cat, &[a], &[]));
    }
    for _ in 0..budget.members {
        let x = &objs[rng.gen_range(0..objs.len())];
        let y = &objs[rng.gen_range(0..objs.len())];
        alphas.push(random_mor(cat, &mut rng, x, y));
    }

    let mut f1c = Check::new("F1c");
    let mut members: Vec<NSigmaSequence> = Vec::new();
    for alpha in &alphas {
        match oracle.member_starting_with(alpha, budget.search_rank) {
            Ok(Some(x)) => {
                f1c.record(true, || Value::Null);
                members.push(x);
            }
            Ok(None) if oracle.kind == OracleKind::StandardConstruction => {
                f1c.record(false, || json!({ "alpha": alpha, "reason": "constructed angle is not a member" }));
            }
            Ok(None) if theta_blocks(oracle, alpha)? => f1c.record(false, || {
                json!({ "alpha": alpha, "reason": "Theta is not invertible at the kernel, while delta always is" })
            }),
            Ok(None) => f1c.short(|| json!({ "alpha": alpha, "reason": "no member within the search rank" })),
            Err(e) => f1c.record(false, || json!({ "alpha": alpha, "reason": e.to_string() })),
        }
    }

    let mut f1b = Check::new("F1b");
    let mut trivials = Vec::new();
    for a in 0..cat.num_objects() {
        for l in 1..=n {
            let t = NSigmaSequence::trivial(cat, n, &[a], l)?;
            f1b.record(oracle.is_member(&t)?, || json!({ "sequence": t }));
            trivials.push(t);
        }
    }

    let mut f1a = Check::new("F1a");
    let mut sums = Vec::new();
    if wanted("F1a") && !members.is_empty() {
        let pool: Vec<&NSigmaSequence> = members.iter().chain(&trivials).collect();
        for k in 0..budget.members.min(pool.len()) {
            let (a, b) = (pool[k], pool[(k + 1 + k * 7) % pool.len()]);
            let s = NSigmaSequence::direct_sum(cat, a, b);
            f1a.record(oracle.is_member(&s)?, || json!({ "sum_of": [a, b] }));
            let e = SequenceMorphism {
                source: s.clone(),
                target: s.clone(),
                components: a
                    .objects
                    .iter()
                    .zip(&b.objects)
                    .map(|(x, y)| Mor::direct_sum(cat, &Mor::identity(cat, x), &Mor::zero(cat, y, y)))
                    .collect(),
            };
            let part = s.split_summand(&oracle.fc, &e)?;
            f1a.record(oracle.is_member(&part)?, || json!({ "summand_of": s }));
            sums.push(s);
        }
    }

    let mut f2 = Check::new("F2");
    if wanted("F2") {
        for x in members.iter().chain(&trivials) {
            let left = x.rotate_left_signed(cat, faults.rotation_sign);
            f2.record(oracle.is_member(&left)?, || json!({ "member": x, "left_rotation": left }));
            let right = x.rotate_right_signed(cat, faults.rotation_sign);
            f2.record(oracle.is_member(&right)?, || json!({ "member": x, "right_rotation": right }));
            // Converse on an exact non-member obtained by rescaling alpha_n.
            for c in cat.field.units().filter(|&c| c != 1) {
                let mut z = x.clone();
                z.maps[n - 1] = z.maps[n - 1].scale(cat, c);
                if oracle.is_member(&z)? {
                    continue;
                }
                let left = z.rotate_left_signed(cat, faults.rotation_sign);
                f2.record(!oracle.is_member(&left)?, || json!({ "non_member": z, "left_rotation": left }));
                break;
            }
        }
    }

    let mut f3 = Check::new("F3");
    let mut f4 = Check::new("F4");
    if (wanted("F3") || wanted("F4")) && !members.is_empty() {
        let pool: Vec<&NSigmaSequence> = members.iter().chain(&trivials).collect();
        let mut squares: Vec<(NSigmaSequence, NSigmaSequence, Mor, Mor)> = members
            .iter()
            .take(2)
            .map(|x| {
                let id1 = Mor::identity(cat, &x.objects[0]);
                let id2 = Mor::identity(cat, &x.objects[1]);
                (x.clone(), x.clone(), id1, id2)
            })
            .collect();
        while squares.len() < budget.squares {
            let x = pool[rng.gen_range(0..pool.len())];
            let y = pool[rng.gen_range(0..pool.len())];
            let mut square = None;
            for _ in 0..8 {
                let phi1 = random_mor(cat, &mut rng, &x.objects[0], &y.objects[0]);
                if let Some(phi2) = random_partner(cat, &mut rng, x, y, &phi1) {
                    square = Some((phi1, phi2));
                    break;
                }
            }
            let (phi1, phi2) = match square {
                Some(s) => s,
                None => {
                    let zero = Mor::zero(cat, &x.objects[0], &y.objects[0]);
                    let phi2 = random_partner(cat, &mut rng, x, y, &zero).expect("zero square");
                    (zero, phi2)
                }
            };
            squares.push((x.clone(), y.clone(), phi1, phi2));
        }
        for (x, y, phi1, phi2) in &squares {
            let witness = || json!({ "source": x, "target": y, "phi1": phi1, "phi2": phi2 });
            if wanted("F3") {
                let ok = complete_morphism(cat, x, y, phi1, phi2)?.is_some();
                f3.record(ok, witness);
            }
            if wanted("F4") {
                match complete_with_exact_cone(oracle, x, y, phi1, phi2, budget.sweep_cap, faults.cone_entry, &mut rng)? {
                    ConeSearch::Found(_) => f4.record(true, || Value::Null),
                    ConeSearch::NotFound { exhaustive: true, .. } => f4.record(false, witness),
                    ConeSearch::NotFound { exhaustive: false, .. } => f4.short(witness),
                }
            }
        }
    }

    let mut exactness = Check::new("exactness");
    for x in members.iter().chain(&trivials).chain(&sums) {
        exactness.record(x.is_exact(cat), || json!({ "sequence": x }));
    }

    let mut out: Vec<AxiomReport> = [f1a, f1b, f1c, f2, f3, f4, exactness]
        .into_iter()
        .filter(|c| wanted(c.axiom))
        .map(Check::report)
        .collect();
    out.sort_by(|a, b| a.axiom.cmp(&b.axiom));
    Ok(out)
}
