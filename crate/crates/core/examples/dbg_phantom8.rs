use rp2::genus_zero::*;
use rp2::levels::*;
use rp2::C64;
fn main() {
    for r in [2.9f64, 3.5, 4.5] {
        println!("--- r = {r}");
        for k in 0..=15 {
            let y = 1.5 * k as f64 / 15.0;
            let x = C64::new(-r, y.max(1e-6));
            let d = genus_zero_data(x).unwrap();
            let (r1, r2) = other_cubic_roots(x, d.s);
            println!("  y={y:.2}: res(alt1)={:+.4e} res(alt2)={:+.4e}  [alts {:.2}{:+.2}i, {:.2}{:+.2}i]",
                phantom_residual(&d, r1), phantom_residual(&d, r2), r1.re, r1.im, r2.re, r2.im);
        }
    }
}
