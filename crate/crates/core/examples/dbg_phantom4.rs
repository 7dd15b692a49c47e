use rp2::genus_zero::*;
use rp2::levels::*;
use rp2::C64;
fn main() {
    let corner = corners()[0];
    let product = |x: C64| -> rp2::Result<f64> {
        let data = genus_zero_data(x)?;
        let (r1, r2) = other_cubic_roots(x, data.s);
        Ok(phantom_residual(&data, r1) * phantom_residual(&data, r2))
    };
    let dirs = level_directions(&product, corner, 0.12, 0).unwrap();
    for d in &dirs {
        let dot = d.re * (-1.0);
        println!("dir angle {:.2} deg, dot with corner_dir = {:.3}", d.arg().to_degrees(), dot);
    }
}
