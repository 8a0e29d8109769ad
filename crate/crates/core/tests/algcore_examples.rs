mod common;

use std::sync::Arc;

use nangle_core::algcore::{
    build_algebra, decompose, find_iso, jacobi_relations, nakayama_permutation, parse_presentation, BasedAlgebra,
    HomSpace, Module, ModuleMap,
};
use nangle_core::exactla::{Matrix, PrimeField, Subspace};
use nangle_core::frobstab::Frobenius;
use proptest::prelude::*;

use common::{load_algebra, sample_modules};

fn dual_numbers() -> Arc<BasedAlgebra> {
    let text = r#"{"field": 3, "vertices": [1], "arrows": [{"name": "x", "source": 1, "target": 1}],
        "relations": [[{"coeff": 1, "path": ["x", "x"]}]]}"#;
    Arc::new(build_algebra(&parse_presentation(text).unwrap()).unwrap())
}

/// Dimension of each graded piece of the preprojective algebra of `A_n`,
/// by spanning `p * rho_v * q` inside the paths of each length. Arrows
/// `2i` go up from `i`, arrows `2i + 1` come back down.
fn preprojective_graded_dims(n: usize, field: PrimeField) -> Vec<usize> {
    let arrows: Vec<(usize, usize)> = (0..n - 1).flat_map(|i| [(i, i + 1), (i + 1, i)]).collect();
    let mut by_len: Vec<Vec<(usize, Vec<usize>, usize)>> = vec![(0..n).map(|v| (v, vec![], v)).collect()];
    for len in 1..=n {
        let next = by_len[len - 1]
            .iter()
            .flat_map(|(s, w, t)| {
                arrows.iter().enumerate().filter(|(_, a)| a.0 == *t).map(move |(i, a)| {
                    let mut w = w.clone();
                    w.push(i);
                    (*s, w, a.1)
                })
            })
            .collect();
        by_len.push(next);
    }
    // rho_v = sum over arrows out of v of (arrow, reverse) with the sign of
    // the direction.
    let rho = |v: usize| -> Vec<(u32, Vec<usize>)> {
        let mut out = Vec::new();
        if v + 1 < n {
            out.push((1, vec![2 * v, 2 * v + 1]));
        }
        if v > 0 {
            out.push((field.neg(1), vec![2 * (v - 1) + 1, 2 * (v - 1)]));
        }
        out
    };
    let mut dims = Vec::new();
    for len in 0..=n {
        let paths = &by_len[len];
        let index = |w: &[usize]| paths.iter().position(|(_, p, _)| p == w).unwrap();
        let mut ideal = Subspace::new(field, paths.len());
        if len >= 2 {
            for lp in 0..=len - 2 {
                for (_, p, v) in &by_len[lp] {
                    for (_, q, _) in by_len[len - 2 - lp].iter().filter(|(qs, _, _)| qs == v) {
                        let mut vec = vec![0u32; paths.len()];
                        for (c, r) in rho(*v) {
                            let w: Vec<usize> = p.iter().chain(&r).chain(q).copied().collect();
                            let i = index(&w);
                            vec[i] = field.add(vec[i], c);
                        }
                        ideal.insert(&vec);
                    }
                }
            }
        }
        dims.push(paths.len() - ideal.dim());
    }
    dims
}

#[test]
fn preprojective_dimensions_match_closure_oracle() {
    for (n, expected) in [(2usize, 4usize), (3, 10), (4, 20), (5, 35)] {
        let alg = load_algebra(&format!("preproj_a{n}.json"));
        let graded = preprojective_graded_dims(n, alg.field);
        assert_eq!(*graded.last().unwrap(), 0, "A_{n} has no paths of length {n}");
        assert_eq!(graded.iter().sum::<usize>(), expected);
        assert_eq!(alg.dim(), expected);
        let mut built = vec![0; n + 1];
        for b in &alg.basis {
            built[b.word.len()] += 1;
        }
        assert_eq!(built, graded, "A_{n}");
    }
}

#[test]
fn path_algebra_of_a2_projectives() {
    let alg = load_algebra("path_a2.json");
    assert_eq!(alg.dim(), 3);
    assert_eq!(Module::projective(alg.clone(), 0).dims, vec![1, 1]);
    assert_eq!(Module::projective(alg.clone(), 1).dims, vec![0, 1]);
    let s1 = Module::simple(alg.clone(), 0);
    let s2 = Module::simple(alg.clone(), 1);
    assert_eq!(HomSpace::new(&s1, &s2).dim(), 0);
    assert_eq!(HomSpace::new(&s1, &s1).dim(), 1);
    assert!(find_iso(&s1, &s2).unwrap().is_none());
    assert!(nakayama_permutation(&alg).is_err());
}

#[test]
fn regular_module_of_a2_splits_into_projectives() {
    let alg = load_algebra("path_a2.json");
    let p1 = Module::projective(alg.clone(), 0);
    let p2 = Module::projective(alg.clone(), 1);
    let regular = Module::direct_sum(&alg, &[p1.clone(), p2.clone()]).module;
    let mut pieces: Vec<Vec<usize>> = decompose(&regular).unwrap().into_iter().map(|s| s.module.dims).collect();
    pieces.sort();
    assert_eq!(pieces, vec![vec![0, 1], vec![1, 1]]);

    let doubled = Module::direct_sum(&alg, &[p1.clone(), p1.clone()]).module;
    let parts = decompose(&doubled).unwrap();
    assert_eq!(parts.len(), 2);
    assert!(parts.iter().all(|s| find_iso(&s.module, &p1).unwrap().is_some()));
}

#[test]
fn preprojective_a2_examples() {
    let alg = load_algebra("preproj_a2.json");
    let p1 = Module::projective(alg.clone(), 0);
    assert_eq!(p1.dims, vec![1, 1]);
    assert_eq!(HomSpace::new(&p1, &p1).dim(), 1);
    let nu = nakayama_permutation(&alg).unwrap();
    assert_eq!(nu, vec![1, 0]);
    for v in 0..2 {
        let i = Module::injective(alg.clone(), v);
        let p = Module::projective(alg.clone(), nu[v]);
        assert!(find_iso(&i, &p).unwrap().is_some());
    }
    let fr = Frobenius::new(alg.clone()).unwrap();
    let (nu_p1, _, _) = fr.nakayama_module(&p1);
    assert!(find_iso(&nu_p1, &Module::injective(alg.clone(), 0)).unwrap().is_some());
    let id = fr.nakayama_map(&ModuleMap::identity(&p1));
    assert!(id.is_iso());
    assert_eq!(id, ModuleMap::identity(&id.source));
}

#[test]
fn dual_numbers_examples() {
    let alg = dual_numbers();
    assert_eq!(alg.dim(), 2);
    assert_eq!(nakayama_permutation(&alg).unwrap(), vec![0]);
    let regular = Module::projective(alg.clone(), 0);
    let parts = decompose(&regular).unwrap();
    assert_eq!(parts.len(), 1);
    assert_eq!(parts[0].module.total_dim(), 2);
    assert_eq!(HomSpace::new(&regular, &regular).dim(), 2);
}

#[test]
fn symmetric_sums_are_isomorphic() {
    let alg = load_algebra("path_a2.json");
    let p1 = Module::projective(alg.clone(), 0);
    let s1 = Module::simple(alg.clone(), 0);
    let a = Module::direct_sum(&alg, &[p1.clone(), s1.clone()]).module;
    let b = Module::direct_sum(&alg, &[s1, p1]).module;
    let iso = find_iso(&a, &b).unwrap().expect("isomorphic");
    assert!(iso.is_iso() && iso.is_homomorphism());
    let id = find_iso(&a, &a).unwrap().unwrap();
    assert!(id.is_iso());
}

#[test]
fn figure_one_q2_presentation() {
    let text = std::fs::read_to_string(common::data_dir().join("presentations/quasi_tilted_q2.json")).unwrap();
    let pres = parse_presentation(&text).unwrap();
    assert_eq!(pres.field.p(), 5);
    assert_eq!(pres.quiver.arrows.len(), 8);
    assert_eq!(pres.potential.as_ref().unwrap().terms.len(), 4);
    let rels = jacobi_relations(&pres).unwrap();
    assert_eq!(rels.len(), 8);
    for r in &rels {
        assert_eq!(r.terms.len(), 2);
        assert!(r.terms.iter().all(|(_, p)| p.len() == 3));
    }
    let arrow = |s: &str| pres.quiver.arrow_index(s).unwrap();
    let d_a0 = &rels[arrow("a0")];
    let mut terms: Vec<(u32, Vec<usize>)> = d_a0.terms.iter().map(|(c, p)| (*c, p.arrows.clone())).collect();
    terms.sort();
    let mut expected = vec![
        (2, vec![arrow("d0"), arrow("c0"), arrow("b0")]),
        (4, vec![arrow("d0"), arrow("c1"), arrow("b1")]),
    ];
    expected.sort();
    assert_eq!(terms, expected);
}

#[test]
fn built_algebras_are_associative_and_unital() {
    for name in ["path_a3.json", "preproj_a3.json", "quasi_tilted_q1.json", "triangle10.json"] {
        let alg = load_algebra(name);
        alg.check_axioms().unwrap_or_else(|e| panic!("{name}: {e}"));
        let projectives: usize = (0..alg.num_vertices())
            .map(|v| Module::projective(alg.clone(), v).total_dim())
            .sum();
        assert_eq!(projectives, alg.dim(), "{name}");
    }
}

#[test]
fn nakayama_permutation_matches_socles_and_tops() {
    for name in ["preproj_a3.json", "preproj_a4.json", "quasi_tilted_q3.json"] {
        let alg = load_algebra(name);
        let nu = nakayama_permutation(&alg).unwrap();
        let mut seen = vec![false; nu.len()];
        for &v in &nu {
            assert!(!seen[v], "{name}: not a permutation");
            seen[v] = true;
        }
        for (v, &w) in nu.iter().enumerate() {
            let p = Module::projective(alg.clone(), w);
            let mut top = vec![0; nu.len()];
            top[w] = 1;
            assert_eq!(p.top_dims(), top);
            let mut soc = vec![0; nu.len()];
            soc[v] = 1;
            assert_eq!(Module::injective(alg.clone(), v).socle_dims(), soc);
            assert_eq!(p.socle_dims(), soc, "{name}: soc P_nu(v) = S_v");
        }
    }
}

/// Counts homomorphisms by trying every tuple of vertex matrices.
fn brute_force_hom_count(m: &Module, n: &Module) -> usize {
    let f = m.field();
    let sizes: Vec<usize> = m.dims.iter().zip(&n.dims).map(|(a, b)| a * b).collect();
    let total: usize = sizes.iter().sum();
    let mut count = 0;
    for code in 0..(1usize << total) {
        let mut bit = 0;
        let blocks = m
            .dims
            .iter()
            .zip(&n.dims)
            .map(|(&c, &r)| {
                let data = (0..r * c).map(|k| ((code >> (bit + k)) & 1) as u32).collect();
                bit += r * c;
                Matrix::from_vec(f, r, c, data).unwrap()
            })
            .collect();
        count += usize::from(ModuleMap::from_blocks(m.clone(), n.clone(), blocks).is_homomorphism());
    }
    count
}

#[test]
fn hom_dimensions_agree_with_enumeration_over_f2() {
    let alg = load_algebra("preproj_a3.json");
    assert_eq!(alg.field.p(), 2);
    let fr = Frobenius::new(alg.clone()).unwrap();
    let mut mods: Vec<Module> = (0..3).map(|v| Module::simple(alg.clone(), v)).collect();
    mods.extend(sample_modules(&fr, 12, 4).into_iter().filter(|m| m.total_dim() <= 4));
    for a in &mods {
        for b in &mods {
            let sizes: usize = a.dims.iter().zip(&b.dims).map(|(x, y)| x * y).sum();
            if sizes > 14 {
                continue;
            }
            let hom = HomSpace::new(a, b).dim();
            assert_eq!(brute_force_hom_count(a, b), 1 << hom, "{:?} -> {:?}", a.dims, b.dims);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn decomposition_reassembles(seed in 0u64..1000) {
        let alg = load_algebra("preproj_a3.json");
        let fr = Frobenius::new(alg.clone()).unwrap();
        let m = sample_modules(&fr, 1, seed).pop().unwrap();
        let parts = decompose(&m).unwrap();
        let mut dims = vec![0; m.dims.len()];
        for p in &parts {
            for (d, x) in dims.iter_mut().zip(&p.module.dims) {
                *d += x;
            }
            prop_assert!(HomSpace::new(&p.module, &p.module).dim() >= 1);
        }
        prop_assert_eq!(&dims, &m.dims);
        let modules: Vec<Module> = parts.into_iter().map(|p| p.module).collect();
        let sum = Module::direct_sum(&alg, &modules).module;
        prop_assert!(find_iso(&sum, &m).unwrap().is_some());
    }
}
