// scratch debug: A2 jets
use gfm_core::*;
use gfm_core::arith::*;
use gfm_core::rootsys::*;
use gfm_core::weylgroup::*;
use gfm_core::invariants::*;
use gfm_core::geometry::*;
fn main() {
    let rs = build_root_system(Family::A, 2).unwrap();
    let wc = make_weight(&rs, &[0, 1]).unwrap();
    let group = generate_group(&rs).unwrap();
    let gens = basic_generators(&rs, &wc, &group);
    let g_lam = pushforward_metric(&gens.y, &rs, &wc, &group).unwrap();
    let (_g, eta) = split_pencil(&g_lam).unwrap();
    let spec = flatcoords::degree_spectrum(&eta, &wc).unwrap();
    println!("spec {:?}", spec.d);
    let pack = christoffel_pack(&eta.to_frac(), 2).unwrap();
    let a = flatcoords::a_matrix(&pack, &wc, 2);
    let z0 = flatcoords::base_point(0, 2);
    println!("z0 {:?}", z0);
    let av = a.eval(&z0).unwrap();
    println!("A(z0) = {:?}", av);
    match flatcoords::solve_chart(&eta, &spec, &wc) {
        Ok(c) => println!("chart {:?}", c.p),
        Err(e) => println!("ERR {e}"),
    }
}
