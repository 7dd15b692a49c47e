use rp2::boutroux::*;
use rp2::C64;
fn main() {
    let t0 = std::time::Instant::now();
    let cfg = solve_from_zero(C64::new(1.0, 0.0)).unwrap();
    println!("solve_from_zero(1.0): {:?}", t0.elapsed());
    let t0 = std::time::Instant::now();
    let cfg2 = continue_to(C64::new(1.02, 0.0), &cfg).unwrap();
    println!("one continuation step: {:?}", t0.elapsed());
    let t0 = std::time::Instant::now();
    let _ = solve_config(C64::new(1.021, 0.0), &cfg2).unwrap();
    println!("one solve from near seed: {:?}", t0.elapsed());
}
