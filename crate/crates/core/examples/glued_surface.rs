//! A four-holed sphere read from graph JSON, glued from two pants.

use pinchlab::surface::{assemble, length_spectrum, AugmentedGraph};

fn main() -> pinchlab::Result<()> {
    let text = include_str!("../data/four_holed_sphere.json");
    let (g, l) = AugmentedGraph::from_json(text)?;
    println!("type (genus, ends) = {:?}", g.signature()?);
    let surface = assemble(&g, &l)?;
    for gen in &surface.components[0].basis {
        println!("{}: {:?}", gen.name, gen.matrix.to_rows());
    }
    let sp = length_spectrum(&surface, 2.5, 1e-9)?;
    let primitive: Vec<f64> = sp.entries.iter().filter(|e| e.primitive).map(|e| e.length).collect();
    println!("primitive lengths below 2.5: {primitive:.6?}");
    Ok(())
}
