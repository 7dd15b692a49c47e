use rp2::genus_zero::*;
use rp2::levels::*;
use rp2::C64;
fn main() {
    let corner = corners()[0];
    for ang_deg in [7.93f64, 33.92, 157.5] {
        let dir = C64::from_polar(1.0, ang_deg.to_radians());
        let seed = corner + dir * 0.12;
        let f = phantom_seeded_residual(seed).unwrap();
        // backward trace
        match trace_level(&f, seed, -dir, 0.02, 3000, |x, _| x.norm() > 6.0 || (x-corner).norm() < 0.03) {
            Ok(arc) => {
                let end = arc.last().unwrap();
                println!("seed {ang_deg:+.2} backward: {} pts, end = {:.4}{:+.4}i (dist to corner {:.3})",
                    arc.len(), end.re, end.im, (end-corner).norm());
            }
            Err(e) => println!("seed {ang_deg:+.2} backward: err {e}"),
        }
    }
    // where does the 7.93 whisker sit at radius 1.0 from corner? sample circle r=1.0
    let product = |x: C64| -> rp2::Result<f64> {
        let data = genus_zero_data(x)?;
        let (r1, r2) = other_cubic_roots(x, data.s);
        Ok(phantom_residual(&data, r1) * phantom_residual(&data, r2))
    };
    for r in [0.4, 1.0] {
        let dirs = level_directions(&product, corner, r, 0).unwrap();
        let angs: Vec<f64> = dirs.iter().map(|d| (d.arg().to_degrees()*100.0).round()/100.0).collect();
        println!("crossings at radius {r}: {:?}", angs);
    }
}
