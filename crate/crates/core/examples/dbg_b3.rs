use gfm_core::catalog::find_case;
use gfm_core::geometry::*;
use gfm_core::report::run_case;
use std::time::Instant;

fn main() {
    let case = find_case("b3-w1-k1").unwrap();
    let t0 = Instant::now();
    let runs = run_case(&case).unwrap();
    println!("pipeline: {:.2?}", t0.elapsed());
    let run = &runs[0];
    let l = 3;
    for (name, m) in [("g", &run.set.g), ("eta", &run.set.eta)] {
        let t = Instant::now();
        let ok = curvature_is_zero(m, l).unwrap();
        println!("curvature({name}) = {ok}: {:.2?}", t.elapsed());
        let t = Instant::now();
        let frac = m.to_frac();
        let pack = christoffel_pack(&frac, l).unwrap();
        let ok = christoffel_consistency(&frac, &pack);
        println!("consistency({name}) = {ok}: {:.2?}", t.elapsed());
    }
    let t = Instant::now();
    let ok = check_linearity(&run.set.g, &run.set.eta).unwrap();
    println!("linearity = {ok}: {:.2?}", t.elapsed());
}
