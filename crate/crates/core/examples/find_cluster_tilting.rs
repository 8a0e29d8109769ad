//! Searches a stable module category for a rigid object closed under
//! `Omega^{-2}` with a given number of summands and prints a scenario.
//!
//! Usage: find_cluster_tilting <presentation> <field> <summands> <name>

use std::path::Path;

use nangle_core::algcore::decompose::{is_projective_indecomposable, decompose};
use nangle_core::algcore::{find_iso, Module};
use nangle_core::frobstab::Frobenius;
use nangle_core::standardcons::scenario::load_algebra;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let field: u32 = args[2].parse().expect("field");
    let size: usize = args[3].parse().expect("summands");
    let alg = load_algebra(Path::new(&args[1]), Some(field)).expect("algebra");
    let frob = Frobenius::new(alg.clone()).expect("self-injective");

    let mut seeds = Vec::new();
    for v in 0..alg.num_vertices() {
        for big in [frob.projectives[v].clone(), frob.injectives[v].clone()] {
            for w in 0..alg.num_vertices() {
                for i in 0..big.dims[w] {
                    let mut x = vec![0u32; big.dims[w]];
                    x[i] = 1;
                    let (sub, inc) = big.generated_by(&[(w, x)]);
                    seeds.push(sub);
                    seeds.push(big.quotient(&inc.blocks).0);
                }
            }
        }
    }
    let mut pool: Vec<Module> = Vec::new();
    let mut queue = seeds;
    while let Some(m) = queue.pop() {
        for piece in decompose(&m).expect("decompose") {
            let p = piece.module;
            if is_projective_indecomposable(&p) || pool.iter().any(|q| find_iso(q, &p).unwrap().is_some()) {
                continue;
            }
            queue.push(frob.cosyzygy(&p).module.clone());
            queue.push(frob.syzygy(&p).module.clone());
            pool.push(p);
            if pool.len() > 2000 {
                panic!("pool too large");
            }
        }
    }
    eprintln!("pool: {} modules", pool.len());

    let shifted: Vec<Module> = pool.iter().map(|m| frob.cosyzygy(m).module.clone()).collect();
    let rigid_pair = |a: usize, b: usize| frob.stable_hom(&pool[a], &shifted[b]).dim() == 0;
    let self_rigid: Vec<usize> = (0..pool.len()).filter(|&a| rigid_pair(a, a)).collect();
    eprintln!("self-rigid: {}", self_rigid.len());
    let index_of = |m: &Module| pool.iter().position(|q| find_iso(q, m).unwrap().is_some());
    // Orbits under Omega^{-2}.
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    let mut seen = vec![false; pool.len()];
    for &a in &self_rigid {
        if seen[a] {
            continue;
        }
        let mut orbit = vec![a];
        seen[a] = true;
        let mut x = frob.cosyzygy_power(&pool[a], 2);
        let mut ok = true;
        loop {
            match index_of(&x) {
                Some(b) if b == a => break,
                Some(b) => {
                    if orbit.contains(&b) {
                        ok = false;
                        break;
                    }
                    orbit.push(b);
                    seen[b] = true;
                    x = frob.cosyzygy_power(&x, 2);
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok && orbit.iter().all(|&p| orbit.iter().all(|&q| rigid_pair(p, q))) {
            orbits.push(orbit);
        }
    }
    eprintln!("stable rigid orbits: {:?}", orbits.iter().map(Vec::len).collect::<Vec<_>>());
    let compatible = |o: &[usize], p: &[usize]| o.iter().all(|&a| p.iter().all(|&b| rigid_pair(a, b) && rigid_pair(b, a)));
    let m = orbits.len();
    let compat: Vec<Vec<bool>> = (0..m)
        .map(|i| (0..m).map(|j| compatible(&orbits[i], &orbits[j])).collect())
        .collect();

    fn search(
        chosen: &mut Vec<usize>,
        start: usize,
        total: usize,
        size: usize,
        orbits: &[Vec<usize>],
        compat: &[Vec<bool>],
    ) -> bool {
        if total == size {
            return true;
        }
        for i in start..orbits.len() {
            if total + orbits[i].len() > size || !chosen.iter().all(|&c| compat[c][i]) {
                continue;
            }
            chosen.push(i);
            if search(chosen, i + 1, total + orbits[i].len(), size, orbits, compat) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let mut chosen = Vec::new();
    if !search(&mut chosen, 0, 0, size, &orbits, &compat) {
        eprintln!("no rigid object with {size} summands");
        std::process::exit(1);
    }
    let members: Vec<usize> = chosen.iter().flat_map(|&i| orbits[i].clone()).collect();
    let specs: Vec<_> = members.iter().map(|&a| pool[a].to_spec()).collect();
    let others: Vec<_> = (0..pool.len())
        .filter(|a| !members.contains(a))
        .take(6)
        .map(|a| pool[a].to_spec())
        .collect();
    let scenario = serde_json::json!({
        "kind": "standard",
        "name": args[4],
        "algebra": format!("../presentations/{}", Path::new(&args[1]).file_name().unwrap().to_string_lossy()),
        "field": field,
        "n": 4,
        "summands": specs,
        "maximality_witnesses": others,
    });
    println!("{}", serde_json::to_string_pretty(&scenario).unwrap());
}
