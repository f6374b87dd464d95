use degenab::delaunay::{delaunay_complex, delaunay_oracle, Form, Sublattice};

#[test]
fn sweep_bench() {
    let t0 = std::time::Instant::now();
    let mut count = 0;
    // rank 3 sweep
    for d0 in [2i64, 4] {
        for d1 in [2i64, 4] {
            for d2 in [2i64, 4] {
                for a in -2..=4i64 {
                    for b in -2..=4i64 {
                        for c in -2..=4i64 {
                            let gram = vec![vec![d0, a, b], vec![a, d1, c], vec![b, c, d2]];
                            let Ok(form) = Form::new(gram) else { continue };
                            count += 1;
                            let complex = delaunay_complex(&form, &Sublattice::full(3)).unwrap();
                            let mut radius = 2;
                            let oracle = loop {
                                match delaunay_oracle(&form, radius) {
                                    Ok(o) => break o,
                                    Err(_) => { radius += 1; assert!(radius <= 5); }
                                }
                            };
                            assert_eq!(oracle.canonical_signature(), complex.canonical_signature());
                        }
                    }
                }
            }
        }
    }
    eprintln!("forms: {}, elapsed: {:?}", count, t0.elapsed());
}
