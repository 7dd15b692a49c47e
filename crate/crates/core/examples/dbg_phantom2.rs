use rp2::genus_zero::*;
use rp2::levels::*;
use rp2::C64;
use std::f64::consts::PI;
fn main() {
    let r = 3.2;
    let mut prev = f64::NAN;
    for k in 0..360 {
        let ang = -PI + 2.0*PI*k as f64/360.0;
        let x = C64::from_polar(r, ang);
        match genus_zero_data(x) {
            Ok(d) => {
                let (r1, r2) = other_cubic_roots(x, d.s);
                let p = phantom_residual(&d, r1) * phantom_residual(&d, r2);
                if prev.is_finite() && prev*p < 0.0 {
                    println!("crossing near angle {:.2} deg", ang.to_degrees());
                }
                prev = p;
            }
            Err(e) => { println!("err at {:.1} deg: {e}", ang.to_degrees()); prev = f64::NAN; }
        }
    }
}
