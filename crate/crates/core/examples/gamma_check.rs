use qlevy::algebra::{FreePolynomial, FreeWord};
use qlevy::scalar::Scalar;
use qlevy::schurmann::{build_catalog_triple, moments_from_triple, CatalogParams, classify_marginal, law_moments};

fn main() {
    // acceptance 2 route: SWN-triple marginal moments at t = m0 vs Jacobi law oracle
    let tri = build_catalog_triple(&CatalogParams::Sl2Swn { gamma: Scalar::one() }, 14, 10).unwrap();
    let mut worst = 0.0f64;
    for (bn, bd) in [(0i64,1i64),(1,2),(-1,2),(1,1),(-1,1),(2,1),(-2,1)] {
        for (mn, md) in [(1i64,2i64),(1,1),(2,1)] {
            let beta = Scalar::rational(bn, bd);
            let m0 = Scalar::rational(mn, md);
            let yb = FreePolynomial::word(FreeWord::gen(0))
                .add(&FreePolynomial::word(FreeWord::gen(1)))
                .add(&FreePolynomial::word(FreeWord::gen(2)).scale(&beta));
            let moments = moments_from_triple(&tri, &yb, 8, &m0).unwrap();
            let law = classify_marginal(&beta, &m0).unwrap();
            let lm = law_moments(&law, 8);
            for k in 1..=8usize {
                let a = moments[k-1].to_c64().re;
                let b = lm[k].to_c64().re;
                let rel = (a - b).abs() / b.abs().max(1.0);
                worst = worst.max(rel);
                if rel > 1e-8 { println!("MISMATCH beta={bn}/{bd} m0={mn}/{md} k={k}: {a} vs {b}"); }
            }
        }
    }
    println!("worst rel error = {worst:.3e}");
}
