use rp2::rational::*;
fn main() {
    for m in [6i64, 8, 9, 10, 12, 14, 16] {
        let p = RationalPair::build(m).unwrap();
        let scale = (m as f64 - 0.5).powf(-2.0/3.0);
        let mut all: Vec<f64> = vec![];
        for kind in [RootKind::ZerosOfU, RootKind::PolesOfU] {
            let rl = p.roots(kind);
            all.extend(rl.roots.iter().filter(|r| r.z[1].abs() < 1e-7*r.z[0].abs().max(1.0)).map(|r| r.z[0]*scale));
        }
        all.sort_by(f64::total_cmp);
        let max = all.last().unwrap();
        let gap = 1.443032 - max;
        println!("m={m:2}: max real singular x = {:.5}  gap to 1.4430 = {:.4}  gap*m^(2/3) = {:.4}", max, gap, gap*(m as f64).powf(2.0/3.0));
    }
}
