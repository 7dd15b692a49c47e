use rp2::genus_zero::*;
use rp2::levels::*;
use rp2::C64;
fn main() {
    // boundary landmark check
    let b = trace_boundary(200).unwrap();
    println!("x_e = {}", b.x_e);
    let rot = C64::from_polar(1.0, -2.0*std::f64::consts::PI/3.0);
    let mut worst = 0.0f64; let mut at = 0;
    for (k,(p, q)) in b.arcs[0].iter().zip(b.arcs[1].iter()).enumerate() {
        let d = (p * rot - q).norm();
        if d > worst { worst = d; at = k; }
    }
    println!("arc sym worst {worst:.2e} at {at}, arc0 ends {} {}, arc1 ends {} {}", b.arcs[0][0], b.arcs[0].last().unwrap(), b.arcs[1][0], b.arcs[1].last().unwrap());

    // f-level directions at a for x=-3
    let data = genus_zero_data(C64::new(-3.0,0.0)).unwrap();
    println!("a = {} b = {}", data.a, data.b);
    let f = |z: C64| -> rp2::Result<f64> { Ok(f_value(&data, z)) };
    match level_directions(&f, data.a, 0.05, 3) {
        Ok(d) => println!("dirs at a: {:?}", d.iter().map(|x| x.arg()).collect::<Vec<_>>()),
        Err(e) => println!("err {e}"),
    }
    // scan values
    for k in 0..12 {
        let ang = 2.0*std::f64::consts::PI*k as f64/12.0;
        let z = data.a + C64::from_polar(0.05, ang);
        println!("  F(a + 0.05 e^{{i{:.2}}}) = {:.6}", ang, f_value(&data, z));
    }
}
