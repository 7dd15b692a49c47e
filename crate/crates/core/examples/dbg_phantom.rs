use rp2::genus_zero::*;
use rp2::levels::*;
use rp2::C64;
use std::f64::consts::PI;
fn main() {
    let corner = corners()[0];
    println!("corner {corner}");
    for alt in 0..2 {
        let f = phantom_residual_fn(alt);
        print!("alt {alt}: ");
        for k in 0..16 {
            let ang = 2.0*PI*k as f64/16.0;
            let z = corner + C64::from_polar(0.12, ang);
            match f(z) {
                Ok(v) => print!("{:+.3} ", v),
                Err(e) => print!("[{e:.10}] "),
            }
        }
        println!();
    }
}
