//! Generators of a pants group and the relation γ1γ2γ3 = 1.

use pinchlab::surface::build_pants;

fn main() -> pinchlab::Result<()> {
    let p = build_pants(1.0, 1.5, 2.0)?;
    for (i, g) in p.gamma.iter().enumerate() {
        println!("γ{} = {:?}, trace {:.12}, translation length {:.12}", i + 1, g.to_rows(), g.trace(), g.translation_length()?);
    }
    println!("relation residual {:.3e}", p.relation_residual());
    Ok(())
}
