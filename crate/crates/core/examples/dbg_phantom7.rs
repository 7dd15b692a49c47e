use rp2::genus_zero::*;
use rp2::levels::*;
use rp2::C64;
fn main() {
    // scan res_alt along vertical lines x = -r + iy above R_-
    for r in [2.75f64, 2.8, 2.9, 3.0, 3.2] {
        print!("r={r}: ");
        let mut prev_sign = 0.0;
        let mut zeros = vec![];
        for k in 0..=400 {
            let y = 0.3 * k as f64 / 400.0;
            let x = C64::new(-r, y.max(1e-6));
            let d = genus_zero_data(x).unwrap();
            let (r1, r2) = other_cubic_roots(x, d.s);
            // pick the alt root with smaller |residual| trajectory... print both products
            let p = phantom_residual(&d, r1).min(phantom_residual(&d, r2));
            if prev_sign != 0.0 && p.signum() != prev_sign { zeros.push(y); }
            prev_sign = p.signum();
        }
        println!("min-res sign changes at y = {:?}", zeros);
    }
}
