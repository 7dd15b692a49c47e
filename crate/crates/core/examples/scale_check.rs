use rp2::rational::{RationalPair, Which, pii_residual};
use rp2::C64;
fn main() {
    let t0 = std::time::Instant::now();
    let p = RationalPair::build(10).unwrap();
    println!("build(10): {:?}, deg u_num = {:?}", t0.elapsed(), p.u_num.degree());
    let (r, s) = pii_residual(&p, Which::P, C64::new(0.7, 0.3)).unwrap();
    println!("m=10 residual rel = {:.3e}", r.norm() / s);
    let t0 = std::time::Instant::now();
    let p = RationalPair::build(16).unwrap();
    println!("build(16): {:?}, deg u_num = {:?}", t0.elapsed(), p.u_num.degree());
    let (r, s) = pii_residual(&p, Which::P, C64::new(0.7, 0.3)).unwrap();
    println!("m=16 residual rel = {:.3e}", r.norm() / s);
    // root-finding cost at m=9
    let p9 = RationalPair::build(9).unwrap();
    let t0 = std::time::Instant::now();
    let roots = p9.roots(rp2::rational::RootKind::ZerosOfU);
    println!("roots(U9 zeros): {:?} found {} (deg {})", t0.elapsed(), roots.roots.len(), p9.u_num.degree().unwrap());
    let t0 = std::time::Instant::now();
    let p12 = RationalPair::build(12).unwrap();
    let roots = p12.roots(rp2::rational::RootKind::ZerosOfU);
    println!("roots(U12 zeros): {:?} found {} refined {}", t0.elapsed(), roots.roots.len(), roots.roots.iter().filter(|r| r.refined).count());
}
