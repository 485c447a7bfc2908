//! Closed geodesics of a once-punctured torus up to length 4.

use pinchlab::surface::{assemble, length_spectrum, AugmentedGraph};

fn main() -> pinchlab::Result<()> {
    let (g, l) = AugmentedGraph::once_punctured_torus(1.0, 0.25, 0.0)?;
    let surface = assemble(&g, &l)?;
    let sp = length_spectrum(&surface, 4.0, 1e-9)?;
    for e in &sp.entries {
        let kind = if e.primitive { "primitive" } else { "power" };
        println!("{:.10} ×{} {kind} {}", e.length, e.multiplicity, e.words.join(" "));
    }
    println!("{} lengths, words up to {} letters", sp.entries.len(), sp.max_word_length);
    Ok(())
}
