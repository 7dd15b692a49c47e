use rp2::genus_zero::*;
use rp2::path::*;
use rp2::C64;
fn main() {
    for &xr in &[1.440, 1.4430318723302662, 1.445, 1.447] {
        let x = C64::new(xr, 0.0);
        let d = genus_zero_data(x).unwrap();
        // c(x) = int_a^{-S/2} (3/2)(z+S/2) r(z) dz, straight path, planar branch r ~ z at inf, cut [a,b]
        let zc = -d.s/2.0;
        let rad = Radicand::new(vec![d.a, d.b]);
        // path: from a to zc. a is a root of r^2: FromRoot leg.
        let leg = Leg::FromRoot { idx: 0, dir: zc - d.a };
        // anchor: reduced radical at t=1 (z=zc): tau = r(zc)/1... R(z)=t*tau: at t=1 tau = r(zc).
        // r(zc) from planar closed form:
        let r_zc = quad_radical(zc, d.a, d.b);
        let f = |z: C64| 1.5*(z + d.s/2.0);
        let (v, _) = integrate_leg(&rad, &leg, &Integrand::TimesR(&f), &LegAnchor{ t: 1.0, value: r_zc }, 1e-12).unwrap();
        let formula = edge_residual(x).unwrap();
        println!("x = {xr:.6}: Re c (quadrature) = {:+.6e}   edge formula = {:+.6e}   2*Rec-formula-ratio {:.3}", v.re, formula, v.re*2.0/formula);
    }
}
