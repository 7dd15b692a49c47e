use rp2::genus_zero::*;
use rp2::levels::*;
use rp2::C64;
fn main() {
    let r = 3.2;
    for base in [180.0f64, 60.0, -60.0] {
        println!("--- around {base} deg:");
        for k in -8..=8 {
            let ang = (base + 0.25*k as f64).to_radians();
            let x = C64::from_polar(r, ang);
            match genus_zero_data(x) {
                Ok(d) => {
                    let (r1, r2) = other_cubic_roots(x, d.s);
                    let p1 = phantom_residual(&d, r1);
                    let p2 = phantom_residual(&d, r2);
                    println!("  {:+7.2} deg: res1 {:+.5e} res2 {:+.5e}", (base + 0.25*k as f64), p1, p2);
                }
                Err(e) => println!("  {:+7.2} deg: err {e}", base + 0.25*k as f64),
            }
        }
    }
}
