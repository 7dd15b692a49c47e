use rp2::rational::*;
fn main() {
    // Largest real rescaled zero of U_m -> x_e, largest negative -> x_c = -2.7257
    for m in [6i64, 9, 12, 16] {
        let p = RationalPair::build(m).unwrap();
        let zeros = p.roots(RootKind::ZerosOfU);
        let scale = (m as f64 - 0.5).powf(-2.0/3.0);
        let mut reals: Vec<f64> = zeros.roots.iter()
            .filter(|r| r.z[1].abs() < 1e-9)
            .map(|r| r.z[0]*scale).collect();
        reals.sort_by(f64::total_cmp);
        println!("m={m:2}: min real zero x = {:.5}, max = {:.5}", reals.first().unwrap(), reals.last().unwrap());
    }
    println!("x_c = {:.5}", rp2::genus_zero::corner_x());
}
