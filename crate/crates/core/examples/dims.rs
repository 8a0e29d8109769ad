//! Prints dimension, Cartan matrix and self-injectivity of presentations.

use std::sync::Arc;

use nangle_core::algcore::{build_algebra, is_selfinjective, nakayama_permutation, parse_presentation};

fn main() {
    for name in std::env::args().skip(1) {
        let t = std::time::Instant::now();
        let p = parse_presentation(&std::fs::read_to_string(&name).unwrap()).unwrap();
        match build_algebra(&p) {
            Ok(a) => {
                a.check_axioms().unwrap();
                let a = Arc::new(a);
                println!(
                    "{name}: dim {} cartan {:?} selfinjective {} nu {:?} {:?}",
                    a.dim(),
                    a.cartan_matrix(),
                    is_selfinjective(&a),
                    nakayama_permutation(&a).ok(),
                    t.elapsed()
                );
            }
            Err(e) => println!("{name}: {e}"),
        }
    }
}
