//! The stable module category of a self-injective algebra: envelopes and
//! covers, syzygies, stable Hom spaces, standard triangles and the Serre
//! functor `Omega * nu`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::algcore::decompose::{
    decompose, find_iso, is_projective_indecomposable, nakayama_permutation, strip_projectives,
};
use crate::algcore::{BasedAlgebra, HomSpace, Module, ModuleMap};
use crate::error::{Error, Result};
use crate::exactla::{Matrix, Subspace};

type ModuleKey = (Vec<usize>, Vec<Matrix>);

fn key(m: &Module) -> ModuleKey {
    (m.dims.clone(), m.action.clone())
}

/// `0 -> M -> I_M -> Omega^{-1} M -> 0` with a minimal injective envelope.
#[derive(Clone, Debug)]
pub struct Cosyzygy {
    pub module: Module,
    pub envelope: Module,
    /// Vertex of each indecomposable injective summand of the envelope.
    pub copies: Vec<usize>,
    pub embedding: ModuleMap,
    pub projection: ModuleMap,
    pub section: Vec<Matrix>,
}

/// `0 -> Omega M -> P_M -> M -> 0` with a projective cover.
#[derive(Clone, Debug)]
pub struct Syzygy {
    pub module: Module,
    pub cover: Module,
    pub copies: Vec<usize>,
    pub epi: ModuleMap,
    pub inclusion: ModuleMap,
}

/// Standard triangle `X -> Y -> C -> Omega^{-1} X` from the pushout of the
/// injective envelope of `X` along `f`.
#[derive(Clone, Debug)]
pub struct TriangleData {
    pub f: ModuleMap,
    pub cone: Module,
    pub to_cone: ModuleMap,
    pub from_cone: ModuleMap,
}

/// Stable Hom space: `Hom(M, N)` modulo maps factoring through projectives,
/// with normal forms in a fixed complement.
#[derive(Clone, Debug)]
pub struct StableHom {
    pub hom: HomSpace,
    factoring: Subspace,
    complement: Vec<usize>,
}

impl StableHom {
    pub fn dim(&self) -> usize {
        self.complement.len()
    }

    /// Representatives of the stable basis.
    pub fn basis(&self) -> Vec<ModuleMap> {
        self.complement
            .iter()
            .map(|&c| self.hom.basis[c].clone())
            .collect()
    }

    /// Normal form of a homomorphism.
    pub fn coords(&self, f: &ModuleMap) -> Vec<u32> {
        self.factoring.quotient_coords(&self.hom.coords(f))
    }

    pub fn combine(&self, coords: &[u32]) -> ModuleMap {
        let mut full = vec![0; self.hom.dim()];
        for (c, &pos) in coords.iter().zip(&self.complement) {
            full[pos] = *c;
        }
        self.hom.combine(&full)
    }

    pub fn is_zero(&self, f: &ModuleMap) -> bool {
        self.coords(f).iter().all(|&x| x == 0)
    }
}

/// Data attached to one self-injective algebra, with memoized envelopes.
pub struct Frobenius {
    pub algebra: Arc<BasedAlgebra>,
    pub projectives: Vec<Module>,
    pub injectives: Vec<Module>,
    pub nakayama: Vec<usize>,
    cosyzygies: Mutex<HashMap<ModuleKey, Arc<Cosyzygy>>>,
    syzygies: Mutex<HashMap<ModuleKey, Arc<Syzygy>>>,
    stable_homs: Mutex<HashMap<(ModuleKey, ModuleKey), Arc<StableHom>>>,
}

impl Frobenius {
    pub fn new(algebra: Arc<BasedAlgebra>) -> Result<Self> {
        let nakayama = nakayama_permutation(&algebra)?;
        let nv = algebra.num_vertices();
        Ok(Frobenius {
            projectives: (0..nv).map(|v| Module::projective(algebra.clone(), v)).collect(),
            injectives: (0..nv).map(|v| Module::injective(algebra.clone(), v)).collect(),
            nakayama,
            algebra,
            cosyzygies: Mutex::new(HashMap::new()),
            syzygies: Mutex::new(HashMap::new()),
            stable_homs: Mutex::new(HashMap::new()),
        })
    }

    fn injective_sum(&self, copies: &[usize]) -> Module {
        let parts: Vec<Module> = copies.iter().map(|&v| self.injectives[v].clone()).collect();
        Module::direct_sum(&self.algebra, &parts).module
    }

    fn projective_sum(&self, copies: &[usize]) -> Module {
        let parts: Vec<Module> = copies.iter().map(|&v| self.projectives[v].clone()).collect();
        Module::direct_sum(&self.algebra, &parts).module
    }

    /// Rows of the map `X -> I_v` determined by a functional `phi` on `X_v`:
    /// `x` goes to `y -> phi(x y)`. Returned per vertex.
    fn into_injective_blocks(&self, x: &Module, acts: &[Matrix], v: usize, phi: &[u32]) -> Vec<Matrix> {
        let alg = &self.algebra;
        let f = alg.field;
        let phi_row = Matrix::from_vec(f, 1, phi.len(), phi.to_vec()).expect("row");
        (0..alg.num_vertices())
            .map(|w| {
                let ys = alg.block(w, v);
                let mut m = Matrix::zero(f, ys.len(), x.dims[w]);
                for (r, &y) in ys.iter().enumerate() {
                    let row = phi_row.mul(&acts[y]);
                    m.set_block(r, 0, &row);
                }
                m
            })
            .collect()
    }

    /// Columns of the map `P_v -> X` sending `e_v` to `elem`, per vertex.
    fn from_projective_blocks(&self, x: &Module, acts: &[Matrix], v: usize, elem: &[u32]) -> Vec<Matrix> {
        let alg = &self.algebra;
        let f = alg.field;
        (0..alg.num_vertices())
            .map(|w| {
                let bs = alg.block(v, w);
                let cols: Vec<Vec<u32>> = bs.iter().map(|&b| acts[b].mul_vec(elem)).collect();
                Matrix::from_columns(f, x.dims[w], &cols)
            })
            .collect()
    }

    fn basis_actions(&self, x: &Module) -> Vec<Matrix> {
        (0..self.algebra.dim()).map(|i| x.act_basis(i)).collect()
    }

    /// Map `X -> I` into a sum of injectives given by one functional per copy.
    fn map_into_injectives(&self, x: &Module, target: &Module, copies: &[usize], functionals: &[Vec<u32>]) -> ModuleMap {
        let acts = self.basis_actions(x);
        let nv = self.algebra.num_vertices();
        let f = self.algebra.field;
        let mut blocks: Vec<Matrix> = (0..nv).map(|w| Matrix::zero(f, 0, x.dims[w])).collect();
        for (&v, phi) in copies.iter().zip(functionals) {
            let part = self.into_injective_blocks(x, &acts, v, phi);
            for w in 0..nv {
                blocks[w] = blocks[w].vstack(&part[w]);
            }
        }
        ModuleMap::from_blocks(x.clone(), target.clone(), blocks)
    }

    fn map_from_projectives(&self, source: &Module, x: &Module, copies: &[usize], elems: &[Vec<u32>]) -> ModuleMap {
        let acts = self.basis_actions(x);
        let nv = self.algebra.num_vertices();
        let f = self.algebra.field;
        let mut blocks: Vec<Matrix> = (0..nv).map(|w| Matrix::zero(f, x.dims[w], 0)).collect();
        for (&v, e) in copies.iter().zip(elems) {
            let part = self.from_projective_blocks(x, &acts, v, e);
            for w in 0..nv {
                blocks[w] = blocks[w].hstack(&part[w]);
            }
        }
        ModuleMap::from_blocks(source.clone(), x.clone(), blocks)
    }

    /// Position of `e_v^*` (resp. `e_v`) inside the vertex-`v` space of each
    /// copy of an injective (resp. projective) sum.
    fn idempotent_rows(&self, copies: &[usize], injective: bool) -> Vec<usize> {
        let alg = &self.algebra;
        copies
            .iter()
            .enumerate()
            .map(|(k, &v)| {
                let before: usize = copies[..k]
                    .iter()
                    .map(|&c| {
                        if injective {
                            alg.block(v, c).len()
                        } else {
                            alg.block(c, v).len()
                        }
                    })
                    .sum();
                let e = alg.idempotents[v];
                before + alg.block(v, v).iter().position(|&b| b == e).expect("idempotent")
            })
            .collect()
    }

    pub fn injective_envelope(&self, m: &Module) -> (Module, ModuleMap, Vec<usize>) {
        let soc = m.socle_basis();
        let mut copies = Vec::new();
        let mut functionals = Vec::new();
        for (v, s) in soc.iter().enumerate() {
            if s.cols() == 0 {
                continue;
            }
            // Functionals dual to the socle basis.
            let rows = s.independent_rows();
            let inv = s
                .select_rows(&rows)
                .invert()
                .expect("square")
                .expect("independent rows");
            for k in 0..s.cols() {
                let mut phi = vec![0u32; m.dims[v]];
                for (j, &r) in rows.iter().enumerate() {
                    phi[r] = inv.get(k, j);
                }
                copies.push(v);
                functionals.push(phi);
            }
        }
        let env = self.injective_sum(&copies);
        let emb = self.map_into_injectives(m, &env, &copies, &functionals);
        (env, emb, copies)
    }

    pub fn projective_cover(&self, m: &Module) -> (Module, ModuleMap, Vec<usize>) {
        let f = self.algebra.field;
        let rad = m.radical_span();
        let mut copies = Vec::new();
        let mut elems = Vec::new();
        for (v, r) in rad.iter().enumerate() {
            let mut sub = Subspace::new(f, m.dims[v]);
            for c in 0..r.cols() {
                sub.insert(&r.col(c));
            }
            for pos in sub.complement_positions() {
                let mut e = vec![0u32; m.dims[v]];
                e[pos] = 1;
                copies.push(v);
                elems.push(e);
            }
        }
        let cover = self.projective_sum(&copies);
        let epi = self.map_from_projectives(&cover, m, &copies, &elems);
        (cover, epi, copies)
    }

    pub fn cosyzygy(&self, m: &Module) -> Arc<Cosyzygy> {
        let k = key(m);
        if let Some(c) = self.cosyzygies.lock().expect("cache").get(&k) {
            return c.clone();
        }
        let (env, emb, copies) = self.injective_envelope(m);
        let (q, proj, section) = env.quotient_with_section(&emb.blocks);
        let c = Arc::new(Cosyzygy {
            module: q,
            envelope: env,
            copies,
            embedding: emb,
            projection: proj,
            section,
        });
        self.cosyzygies.lock().expect("cache").insert(k, c.clone());
        c
    }

    pub fn syzygy(&self, m: &Module) -> Arc<Syzygy> {
        let k = key(m);
        if let Some(c) = self.syzygies.lock().expect("cache").get(&k) {
            return c.clone();
        }
        let (cover, epi, copies) = self.projective_cover(m);
        let (kmod, inc) = epi.kernel();
        let s = Arc::new(Syzygy {
            module: kmod,
            cover,
            copies,
            epi,
            inclusion: inc,
        });
        self.syzygies.lock().expect("cache").insert(k, s.clone());
        s
    }

    pub fn cosyzygy_power(&self, m: &Module, k: usize) -> Module {
        let mut x = m.clone();
        for _ in 0..k {
            x = self.cosyzygy(&x).module.clone();
        }
        x
    }

    pub fn syzygy_power(&self, m: &Module, k: usize) -> Module {
        let mut x = m.clone();
        for _ in 0..k {
            x = self.syzygy(&x).module.clone();
        }
        x
    }

    /// Extends `f: A -> I` (I a sum of injectives with the given copies)
    /// along a monomorphism `i: A -> B`.
    pub fn extend_to_injective(&self, f: &ModuleMap, copies: &[usize], i: &ModuleMap) -> Result<ModuleMap> {
        let rows = self.idempotent_rows(copies, true);
        let mut functionals = Vec::new();
        for (&v, &r) in copies.iter().zip(&rows) {
            let psi = f.blocks[v].row(r).to_vec();
            let chi = i.blocks[v]
                .transpose()
                .solve_vec(&psi)
                .ok_or_else(|| Error::InvalidModule("map does not extend along the monomorphism".into()))?;
            functionals.push(chi);
        }
        Ok(self.map_into_injectives(&i.target, &f.target, copies, &functionals))
    }

    /// Lifts `g: P -> C` (P a sum of projectives with the given copies)
    /// through an epimorphism `p: B -> C`.
    pub fn lift_from_projective(&self, g: &ModuleMap, copies: &[usize], p: &ModuleMap) -> Result<ModuleMap> {
        let rows = self.idempotent_rows(copies, false);
        let mut elems = Vec::new();
        for (&v, &r) in copies.iter().zip(&rows) {
            let target = g.blocks[v].col(r);
            let pre = p.blocks[v]
                .solve_vec(&target)
                .ok_or_else(|| Error::InvalidModule("map does not lift through the epimorphism".into()))?;
            elems.push(pre);
        }
        Ok(self.map_from_projectives(&g.source, &p.source, copies, &elems))
    }

    /// `Omega^{-1}` on a homomorphism, via the standard envelopes.
    pub fn cosyzygy_map(&self, f: &ModuleMap) -> ModuleMap {
        let ca = self.cosyzygy(&f.source);
        let cb = self.cosyzygy(&f.target);
        let into = cb.embedding.compose(f);
        let g = self
            .extend_to_injective(&into, &cb.copies, &ca.embedding)
            .expect("injective modules extend maps along monomorphisms");
        let pg = cb.projection.compose(&g);
        let blocks = pg
            .blocks
            .iter()
            .zip(&ca.section)
            .map(|(a, s)| a.mul(s))
            .collect();
        ModuleMap::from_blocks(ca.module.clone(), cb.module.clone(), blocks)
    }

    pub fn cosyzygy_map_power(&self, f: &ModuleMap, k: usize) -> ModuleMap {
        let mut g = f.clone();
        for _ in 0..k {
            g = self.cosyzygy_map(&g);
        }
        g
    }

    /// `Omega` on a homomorphism, via the projective covers.
    pub fn syzygy_map(&self, f: &ModuleMap) -> ModuleMap {
        let sa = self.syzygy(&f.source);
        let sb = self.syzygy(&f.target);
        let g = self
            .lift_from_projective(&f.compose(&sa.epi), &sa.copies, &sb.epi)
            .expect("projective modules lift along epimorphisms");
        let restricted = g.compose(&sa.inclusion);
        let blocks = restricted
            .blocks
            .iter()
            .zip(&sb.inclusion.blocks)
            .map(|(r, inc)| {
                if inc.cols() == 0 {
                    Matrix::zero(r.field(), 0, r.cols())
                } else {
                    inc.solve(r).expect("shape").particular.expect("lands in the kernel")
                }
            })
            .collect();
        ModuleMap::from_blocks(sa.module.clone(), sb.module.clone(), blocks)
    }

    /// Memoized by the module data of both arguments.
    pub fn stable_hom(&self, m: &Module, n: &Module) -> Arc<StableHom> {
        let k = (key(m), key(n));
        if let Some(s) = self.stable_homs.lock().expect("cache").get(&k) {
            return s.clone();
        }
        let s = Arc::new(self.compute_stable_hom(m, n));
        self.stable_homs.lock().expect("cache").insert(k, s.clone());
        s
    }

    fn compute_stable_hom(&self, m: &Module, n: &Module) -> StableHom {
        let f = self.algebra.field;
        let hom = HomSpace::new(m, n);
        let mut factoring = Subspace::new(f, hom.dim());
        if hom.dim() > 0 {
            let (cover, epi, _) = self.projective_cover(n);
            for h in HomSpace::new(m, &cover).basis {
                factoring.insert(&hom.coords(&epi.compose(&h)));
                if factoring.dim() == hom.dim() {
                    break;
                }
            }
        }
        let complement = factoring.complement_positions();
        StableHom {
            hom,
            factoring,
            complement,
        }
    }

    pub fn stably_zero(&self, f: &ModuleMap) -> bool {
        if f.is_zero() {
            return true;
        }
        self.stable_hom(&f.source, &f.target).is_zero(f)
    }

    pub fn stably_equal(&self, f: &ModuleMap, g: &ModuleMap) -> bool {
        self.stably_zero(&f.sub(g))
    }

    /// Whether `M` and `N` are isomorphic after removing projective summands.
    pub fn stably_isomorphic(&self, m: &Module, n: &Module) -> Result<Option<ModuleMap>> {
        let a = strip_projectives(m)?;
        let b = strip_projectives(n)?;
        Ok(crate::algcore::find_iso(&a.module, &b.module)?
            .map(|h| b.inclusion.compose(&h).compose(&a.projection)))
    }

    /// The standard triangle of `f: X -> Y`; the cone is the pushout
    /// `(Y + I_X) / {(f x, -i x)}` with projective summands removed.
    pub fn triangle_of(&self, f: &ModuleMap) -> Result<TriangleData> {
        let cx = self.cosyzygy(&f.source);
        let sum = Module::direct_sum(&self.algebra, &[f.target.clone(), cx.envelope.clone()]);
        let d = sum.inclusions[0]
            .compose(f)
            .sub(&sum.inclusions[1].compose(&cx.embedding));
        let (c, q, section) = sum.module.quotient_with_section(&d.blocks);
        let to_cone = q.compose(&sum.inclusions[0]);
        let w = cx.projection.compose(&sum.projections[1]);
        let from_blocks = w
            .blocks
            .iter()
            .zip(&section)
            .map(|(a, s)| a.mul(s))
            .collect();
        let from_cone = ModuleMap::from_blocks(c.clone(), cx.module.clone(), from_blocks);
        let stripped = strip_projectives(&c)?;
        Ok(TriangleData {
            f: f.clone(),
            to_cone: stripped.projection.compose(&to_cone),
            from_cone: from_cone.compose(&stripped.inclusion),
            cone: stripped.module,
        })
    }

    /// `nu` applied to a map between sums of projectives, as a map between
    /// the corresponding sums of injectives.
    fn nu_projective_map(&self, g: &ModuleMap, src: &[usize], tgt: &[usize]) -> ModuleMap {
        let alg = &self.algebra;
        let f = alg.field;
        let nv = alg.num_vertices();
        let src_inj = self.injective_sum(src);
        let tgt_inj = self.injective_sum(tgt);
        let src_rows = self.idempotent_rows(src, false);
        // Offsets of each copy inside the vertex spaces of the projective sums.
        let copy_offsets = |copies: &[usize], of: &dyn Fn(usize, usize) -> usize| -> Vec<Vec<usize>> {
            let mut acc = vec![0usize; nv];
            copies
                .iter()
                .map(|&v| {
                    let o = acc.clone();
                    for u in 0..nv {
                        acc[u] += of(v, u);
                    }
                    o
                })
                .collect()
        };
        let p_tgt_offs = copy_offsets(tgt, &|v, u| alg.block(v, u).len());
        let i_src_offs = copy_offsets(src, &|v, u| alg.block(u, v).len());
        let i_tgt_offs = copy_offsets(tgt, &|v, u| alg.block(u, v).len());
        let mut blocks: Vec<Matrix> = (0..nv)
            .map(|u| Matrix::zero(f, tgt_inj.dims[u], src_inj.dims[u]))
            .collect();
        for (l, &vl) in src.iter().enumerate() {
            // g(e_{v_l}) lives at vertex v_l of the target projective sum.
            let image = g.blocks[vl].col(src_rows[l]);
            for (k, &wk) in tgt.iter().enumerate() {
                // c in e_{w_k} A e_{v_l}
                let mut c = vec![0u32; alg.dim()];
                for (j, &b) in alg.block(wk, vl).iter().enumerate() {
                    c[b] = image[p_tgt_offs[k][vl] + j];
                }
                if c.iter().all(|&x| x == 0) {
                    continue;
                }
                for u in 0..nv {
                    let xs = alg.block(u, vl);
                    let ys = alg.block(u, wk);
                    for (j, &y) in ys.iter().enumerate() {
                        let prod = alg.mul(&alg.unit_vector(y), &c);
                        for (i, &x) in xs.iter().enumerate() {
                            if prod[x] != 0 {
                                blocks[u].set(i_tgt_offs[k][u] + j, i_src_offs[l][u] + i, prod[x]);
                            }
                        }
                    }
                }
            }
        }
        ModuleMap::from_blocks(src_inj, tgt_inj, blocks)
    }

    /// Projective presentation `P1 -> P0 -> M -> 0` with copy lists.
    fn presentation(&self, m: &Module) -> (ModuleMap, Vec<usize>, Vec<usize>, ModuleMap) {
        let s0 = self.syzygy(m);
        let (_, epi1, copies1) = self.projective_cover(&s0.module);
        let d = s0.inclusion.compose(&epi1);
        (d, copies1, s0.copies.clone(), s0.epi.clone())
    }

    /// Nakayama functor `nu = - (x) DA` as the cokernel of `nu` on a
    /// projective presentation.
    pub fn nakayama_module(&self, m: &Module) -> (Module, ModuleMap, Vec<Matrix>) {
        let (d, c1, c0, _) = self.presentation(m);
        let nd = self.nu_projective_map(&d, &c1, &c0);
        nd.target.quotient_with_section(&nd.blocks)
    }

    pub fn nakayama_map(&self, f: &ModuleMap) -> ModuleMap {
        let (_, _, c0m, epi_m) = self.presentation(&f.source);
        let (_, _, c0n, epi_n) = self.presentation(&f.target);
        let g0 = self
            .lift_from_projective(&f.compose(&epi_m), &c0m, &epi_n)
            .expect("projective lifting");
        let ng = self.nu_projective_map(&g0, &c0m, &c0n);
        let (num, _, sec_m) = self.nakayama_module(&f.source);
        let (nun, qn, _) = self.nakayama_module(&f.target);
        let through = qn.compose(&ng);
        let blocks = through
            .blocks
            .iter()
            .zip(&sec_m)
            .map(|(a, s)| a.mul(s))
            .collect();
        ModuleMap::from_blocks(num, nun, blocks)
    }

    /// Serre functor of the stable category, `S = Omega * nu`.
    pub fn serre(&self, m: &Module) -> Module {
        let (nu, _, _) = self.nakayama_module(m);
        self.syzygy(&nu).module.clone()
    }

    pub fn serre_map(&self, f: &ModuleMap) -> ModuleMap {
        self.syzygy_map(&self.nakayama_map(f))
    }

    /// Serre duality on `(M, N)`: equal dimensions of `Hom(M, N)` and
    /// `Hom(N, SM)` in the stable category, and the composition pairing into
    /// `Hom(M, SM)` has trivial left and right kernels.
    pub fn serre_duality_check(&self, m: &Module, n: &Module) -> bool {
        let sm = self.serre(m);
        let h1 = self.stable_hom(m, n);
        let h2 = self.stable_hom(n, &sm);
        if h1.dim() != h2.dim() {
            return false;
        }
        if h1.dim() == 0 {
            return true;
        }
        let f = self.algebra.field;
        let target = self.stable_hom(m, &sm);
        let b1 = h1.basis();
        let b2 = h2.basis();
        let pairing = |i: usize, j: usize| target.coords(&b2[j].compose(&b1[i]));
        // Left kernel: f with g * f = 0 for all g.
        let mut left = Vec::new();
        for i in 0..b1.len() {
            left.push((0..b2.len()).flat_map(|j| pairing(i, j)).collect::<Vec<u32>>());
        }
        let mut right = Vec::new();
        for j in 0..b2.len() {
            right.push((0..b1.len()).flat_map(|i| pairing(i, j)).collect::<Vec<u32>>());
        }
        let rank = |rows: &[Vec<u32>]| -> usize {
            let cols = rows[0].len();
            if cols == 0 {
                return 0;
            }
            let data = rows.iter().flatten().copied().collect();
            Matrix::from_vec(f, rows.len(), cols, data).expect("shape").rank()
        };
        rank(&left) == b1.len() && rank(&right) == b2.len()
    }

    /// Indecomposable non-projective modules reachable from the simples,
    /// radicals of projectives and projectives modulo socle under `Omega`
    /// and `Omega^{-1}`, one per isoclass. Stops after `cap` classes and
    /// reports whether the closure was complete.
    pub fn nonprojective_closure(&self, cap: usize) -> Result<(Vec<Module>, bool)> {
        let alg = &self.algebra;
        let mut queue = Vec::new();
        for v in 0..alg.num_vertices() {
            queue.push(Module::simple(alg.clone(), v));
            let p = &self.projectives[v];
            let (rad, _) = p.submodule(p.radical_span())?;
            queue.push(rad);
            queue.push(p.quotient(&p.socle_basis()).0);
        }
        let mut found: Vec<Module> = Vec::new();
        let mut next = 0;
        while next < queue.len() {
            let m = queue[next].clone();
            next += 1;
            for piece in decompose(&m)? {
                let piece = piece.module;
                if is_projective_indecomposable(&piece) {
                    continue;
                }
                let mut seen = false;
                for f in &found {
                    if find_iso(f, &piece)?.is_some() {
                        seen = true;
                        break;
                    }
                }
                if seen {
                    continue;
                }
                if found.len() == cap {
                    return Ok((found, false));
                }
                queue.push(self.cosyzygy(&piece).module.clone());
                queue.push(self.syzygy(&piece).module.clone());
                found.push(piece);
            }
        }
        Ok((found, true))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algcore::{build_algebra, parse_presentation};

    fn preproj_a2() -> Arc<BasedAlgebra> {
        let text = r#"{"field": 2, "vertices": [1, 2],
            "arrows": [{"name": "a", "source": 1, "target": 2},
                       {"name": "b", "source": 2, "target": 1}],
            "relations": [[{"coeff": 1, "path": ["a","b"]}], [{"coeff": 1, "path": ["b","a"]}]]}"#;
        Arc::new(build_algebra(&parse_presentation(text).unwrap()).unwrap())
    }

    fn dual_numbers() -> Arc<BasedAlgebra> {
        let text = r#"{"field": 3, "vertices": [1],
            "arrows": [{"name": "x", "source": 1, "target": 1}],
            "relations": [[{"coeff": 1, "path": ["x","x"]}]]}"#;
        Arc::new(build_algebra(&parse_presentation(text).unwrap()).unwrap())
    }

    #[test]
    fn cosyzygies_over_preprojective_a2() {
        let a = preproj_a2();
        let fr = Frobenius::new(a.clone()).unwrap();
        assert_eq!(fr.nakayama, vec![1, 0]);
        let s1 = Module::simple(a.clone(), 0);
        let c = fr.cosyzygy(&s1);
        assert_eq!(c.envelope.dims, vec![1, 1]);
        assert_eq!(c.module.dims, vec![0, 1]);
        assert!(fr.cosyzygy(&fr.projectives[0]).module.is_zero());
        let back = fr.syzygy(&c.module);
        assert!(crate::algcore::find_iso(&back.module, &s1).unwrap().is_some());
    }

    #[test]
    fn stable_endomorphisms_of_the_simple_dual_numbers_module() {
        let a = dual_numbers();
        let fr = Frobenius::new(a.clone()).unwrap();
        let s = Module::simple(a.clone(), 0);
        assert_eq!(fr.stable_hom(&s, &s).dim(), 1);
        let p = fr.projectives[0].clone();
        assert_eq!(fr.stable_hom(&p, &s).dim(), 0);
        assert_eq!(fr.serre(&s).dims, vec![1]);
        assert!(fr.serre_duality_check(&s, &s));
    }

    #[test]
    fn identity_triangle_has_zero_cone() {
        let a = preproj_a2();
        let fr = Frobenius::new(a.clone()).unwrap();
        let s1 = Module::simple(a.clone(), 0);
        let t = fr.triangle_of(&ModuleMap::identity(&s1)).unwrap();
        assert!(t.cone.is_zero());
        let z = ModuleMap::zero(&s1, &s1);
        let t0 = fr.triangle_of(&z).unwrap();
        assert_eq!(t0.cone.dims, vec![1, 1]);
    }

    #[test]
    fn nakayama_on_projectives_gives_injectives() {
        let a = preproj_a2();
        let fr = Frobenius::new(a.clone()).unwrap();
        for v in 0..2 {
            let (nu, _, _) = fr.nakayama_module(&fr.projectives[v]);
            assert!(crate::algcore::find_iso(&nu, &fr.injectives[v]).unwrap().is_some());
        }
        let s1 = Module::simple(a.clone(), 0);
        let serre = fr.serre(&s1);
        assert!(fr.stably_isomorphic(&serre, &s1).unwrap().is_some());
        let id = fr.nakayama_map(&ModuleMap::identity(&s1));
        assert!(id.is_iso());
    }
}
