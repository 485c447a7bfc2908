//! The Selberg transform k → h and back on k(t) = (1+t)^{-2}.

use std::sync::Arc;

use pinchlab::transform::{transform_chain, transform_roundtrip, ChainInput, ChainSpec, RealFn};
use pinchlab::Complex64;

fn main() -> pinchlab::Result<()> {
    let k: RealFn = Arc::new(|t: f64| Ok(Complex64::new((1.0 + t).powi(-2), 0.0)));
    let triple = transform_chain(ChainInput::K { k: k.clone(), rho: 1.0, strip: 1.0 }, ChainSpec::default())?;
    for w in [0.0f64, 1.0, 4.0] {
        let exact = std::f64::consts::FRAC_PI_2 * (1.0 + w).powf(-1.5);
        println!("Q({w}) = {:.14} (closed form {exact:.14})", triple.q(w)?.re);
    }
    for xi in [0.0, 1.0, 3.0] {
        println!("h({xi}) = {:.14}", triple.h(xi)?.re);
    }
    let ts: Vec<f64> = (0..=8).map(|i| 2.5 * i as f64).collect();
    let r = transform_roundtrip(k, 1.0, 1.0, &ts, ChainSpec::default())?;
    println!("round trip sup residual {:.3e}", r.sup_residual);
    Ok(())
}
