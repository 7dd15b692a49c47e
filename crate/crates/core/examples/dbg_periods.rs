use rp2::boutroux::*;
use rp2::path::*;
use rp2::C64;
fn main() {
    let cfg = zero_config();
    let plane = cfg.cut_plane();
    // segment C->D left-boundary anchor
    let roots = [cfg.a, cfg.b, cfg.c, cfg.d];
    let anchor = left_boundary_anchor(&plane, cfg.c, cfg.d).unwrap();
    println!("R+ at mid of C->D: {anchor}");
    // planar at midpoints of A-D and B-D
    let mid_ad = 0.5*(cfg.a + cfg.d);
    println!("R_pl(mid AD) = {}", plane.radical(mid_ad).unwrap());
    let rad = Radicand::new(roots.to_vec());
    let one = |_: C64| C64::new(1.0, 0.0);
    // I_CD with left anchor
    let mid = 0.5*(cfg.c + cfg.d);
    let la = LegAnchor{ t: 1.0, value: anchor };
    let (vi, _) = integrate_leg(&rad, &Leg::FromRoot{ idx: 2, dir: mid - cfg.c }, &Integrand::OverR(&one), &la, 1e-12).unwrap();
    let (vj, _) = integrate_leg(&rad, &Leg::FromRoot{ idx: 3, dir: mid - cfg.d }, &Integrand::OverR(&one), &la, 1e-12).unwrap();
    let icd = vi - vj;
    println!("I_CD = {icd}");
    println!("Omega_a (orient +1) = {}", 2.0*icd);
    println!("c1 = {}", C64::new(0.0, 2.0*std::f64::consts::PI)/(2.0*icd));
    // I_AD planar
    let am = LegAnchor{ t: 1.0, value: plane.radical(mid_ad).unwrap() };
    let (vi, _) = integrate_leg(&rad, &Leg::FromRoot{ idx: 0, dir: mid_ad - cfg.a }, &Integrand::OverR(&one), &am, 1e-12).unwrap();
    let (vj, _) = integrate_leg(&rad, &Leg::FromRoot{ idx: 3, dir: mid_ad - cfg.d }, &Integrand::OverR(&one), &am, 1e-12).unwrap();
    println!("I_AD = {}", vi - vj);
}
