use rp2::genus_zero::*;
use rp2::levels::*;
use rp2::C64;
fn main() {
    let corner = corners()[0];
    for ang_deg in [7.93f64, -7.93, 33.92, -33.92, 157.5, -157.5] {
        let dir = C64::from_polar(1.0, ang_deg.to_radians());
        let seed = corner + dir * 0.12;
        let f = match phantom_seeded_residual(seed) { Ok(f) => f, Err(e) => { println!("{ang_deg}: seed err {e}"); continue; } };
        match trace_level(&f, seed, dir, 0.02, 3000, |x, _| x.norm() > 6.0) {
            Ok(arc) => {
                let end = arc.last().unwrap();
                println!("seed {ang_deg:+.2} deg: {} pts, end = {:.3}{:+.3}i (|end|={:.2}, arg={:.1} deg)",
                    arc.len(), end.re, end.im, end.norm(), end.arg().to_degrees());
            }
            Err(e) => println!("seed {ang_deg:+.2} deg: trace err {e}"),
        }
    }
}
