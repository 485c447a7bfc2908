use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use super::graph::{AugmentedGraph, FNLabel};
use super::pants::{build_pants, PantsGroup};
use super::words::{self, Letter, Word};
use crate::error::{Error, Result};
use crate::hyperbolic::MobiusMatrix;

/// Tolerance on numerically evaluated group relations.
pub const RELATION_TOL: f64 = 1e-8;

/// Where a free generator of a component group comes from.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorOrigin {
    /// γ_{slot+1} of the pants at `vertex`.
    Boundary { vertex: usize, slot: usize },
    /// Stable letter of a glued edge outside the spanning tree.
    Stable { edge: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Generator {
    pub name: String,
    pub origin: GeneratorOrigin,
    pub matrix: MobiusMatrix,
}

/// One connected piece of the surface (components are separated by cusps on
/// proper edges). All matrices live in the frame of the root vertex.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Component {
    pub vertices: Vec<usize>,
    pub root: usize,
    /// Maps the plane of each vertex to the root plane.
    pub frames: BTreeMap<usize, MobiusMatrix>,
    /// Free basis of the group, when the group is free.
    pub basis: Vec<Generator>,
    /// γ_{q,k} for each vertex q, as a word in the basis.
    pub boundary_words: BTreeMap<usize, [Word; 3]>,
    /// False for closed components, whose group is not free.
    pub free: bool,
    /// Largest relation residual.
    pub relation_residual: f64,
}

/// A glued surface: the pants groups and their combination into the groups
/// of the connected components.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssembledSurface {
    pub graph: AugmentedGraph,
    pub label: FNLabel,
    pub pants: Vec<PantsGroup>,
    pub components: Vec<Component>,
    pub hash: String,
}

/// The isometry g from the plane of the pants at `edge`'s pair to the plane
/// of the pants at `edge`: g(S'_j) = S_i, g γ'_j g^{-1} = γ_i^{-1}, and
/// γ_i^τ maps T_{i+1} to g(T'_{j+1}).
pub fn gluing_map(here: &PantsGroup, i: usize, there: &PantsGroup, j: usize, tau: f64) -> Result<MobiusMatrix> {
    let ell = here.gamma[i].translation_length()?;
    let phi = here.gamma[i].axis_frame()?;
    let phi2 = there.gamma[j].axis_frame()?;
    let foot = |p: &PantsGroup, k: usize, frame: &MobiusMatrix| -> Result<f64> {
        let c = p.hexagon.t[(k + 1) % 3].image(&frame.inverse())?;
        let (x0, x1) = c.endpoints()?;
        if x1.is_infinite() || (x0 + x1).abs() > 1e-8 * (x1 - x0).abs() {
            return Err(Error::Degenerate("seam is not perpendicular to the glued boundary".into()));
        }
        Ok(0.5 * (x1 - x0))
    };
    let y = foot(here, i, &phi)?;
    let y2 = foot(there, j, &phi2)?;
    let t = -(y * y2).ln() - tau * ell;
    Ok(phi
        .mul(&MobiusMatrix::half_turn())
        .mul(&MobiusMatrix::axis_translation(t))
        .mul(&phi2.inverse()))
}

fn fnv_hash(text: &str) -> String {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in text.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    format!("{h:016x}")
}

/// Symbols before elimination: x_{q,0}, x_{q,1} for each vertex, then one
/// stable letter per non-tree glued edge.
struct Presentation {
    symbol_origin: Vec<GeneratorOrigin>,
    symbol_matrix: Vec<MobiusMatrix>,
    relations: Vec<Word>,
}

fn boundary_symbol_word(vertex_pos: usize, slot: usize) -> Word {
    let x0 = words::letter(2 * vertex_pos, false);
    let x1 = words::letter(2 * vertex_pos + 1, false);
    match slot {
        0 => vec![x0],
        1 => vec![x1],
        _ => vec![-x0, -x1],
    }
}

fn substitute(w: &[Letter], defs: &[Word]) -> Word {
    let mut out = Vec::new();
    for &l in w {
        let d = &defs[words::generator_of(l)];
        if l > 0 {
            out.extend_from_slice(d);
        } else {
            out.extend(words::inverse(d));
        }
    }
    words::free_reduce(&out)
}

fn evaluate(w: &[Letter], mats: &[MobiusMatrix]) -> MobiusMatrix {
    w.iter().fold(MobiusMatrix::IDENTITY, |acc, &l| {
        let m = mats[words::generator_of(l)];
        acc.mul(&if l > 0 { m } else { m.inverse() })
    })
}

/// Eliminates one generator per relation. Returns the definitions of all
/// symbols in terms of the surviving ones, the survivors, and whether every
/// relation could be used.
fn eliminate(n_symbols: usize, relations: &[Word]) -> (Vec<Word>, Vec<usize>, bool) {
    let mut defs: Vec<Word> = (0..n_symbols).map(|s| vec![words::letter(s, false)]).collect();
    let mut alive = vec![true; n_symbols];
    let mut free = true;
    for rel in relations {
        let r = words::cyclic_reduce(&substitute(rel, &defs));
        if r.is_empty() {
            continue;
        }
        let mut counts = vec![0usize; n_symbols];
        for &l in &r {
            counts[words::generator_of(l)] += 1;
        }
        let Some(y) = (0..n_symbols).find(|&s| counts[s] == 1) else {
            free = false;
            continue;
        };
        let pos = r.iter().position(|&l| words::generator_of(l) == y).unwrap();
        let n = r.len();
        let rotated: Word = (1..=n).map(|k| r[(pos + k) % n]).collect();
        // rotated = C y^e with C the first n-1 letters.
        let c = &rotated[..n - 1];
        let e = rotated[n - 1];
        let value = if e > 0 { words::inverse(c) } else { c.to_vec() };
        let mut point = defs.clone();
        point[y] = value;
        for d in defs.iter_mut() {
            *d = substitute(d, &point);
        }
        alive[y] = false;
    }
    let survivors = (0..n_symbols).filter(|&s| alive[s]).collect();
    (defs, survivors, free)
}

impl AssembledSurface {
    pub fn new(graph: &AugmentedGraph, label: &FNLabel) -> Result<AssembledSurface> {
        let pants = graph
            .slots
            .iter()
            .map(|s| build_pants(label.ell[s[0]], label.ell[s[1]], label.ell[s[2]]))
            .collect::<Result<Vec<_>>>()?;
        let glued = |e: usize| graph.edges[e].pair.is_some() && label.ell[e] > 0.0;

        let mut component_of = vec![usize::MAX; graph.vertices.len()];
        let mut components = Vec::new();
        for root in 0..graph.vertices.len() {
            if component_of[root] != usize::MAX {
                continue;
            }
            let id = components.len();
            let mut frames = BTreeMap::new();
            frames.insert(root, MobiusMatrix::IDENTITY);
            component_of[root] = id;
            let mut order = vec![root];
            let mut tree_edges = Vec::new();
            let mut queue = VecDeque::from([root]);
            while let Some(q) = queue.pop_front() {
                for slot in 0..3 {
                    let e = graph.slots[q][slot];
                    if !glued(e) {
                        continue;
                    }
                    let f = graph.edges[e].pair.unwrap();
                    let q2 = graph.edges[f].vertex;
                    if component_of[q2] == usize::MAX {
                        let g = gluing_map(&pants[q], slot, &pants[q2], graph.edges[f].slot, label.tau[e])?;
                        frames.insert(q2, frames[&q].mul(&g));
                        component_of[q2] = id;
                        order.push(q2);
                        tree_edges.push((e, f));
                        queue.push_back(q2);
                    }
                }
            }
            components.push(assemble_component(graph, label, &pants, order, frames, &tree_edges)?);
        }
        let text = serde_json::to_string(&graph.to_file(label)).map_err(|e| Error::Input(e.to_string()))?;
        Ok(AssembledSurface {
            graph: graph.clone(),
            label: label.clone(),
            pants,
            components,
            hash: fnv_hash(&text),
        })
    }

    pub fn component_of(&self, vertex: usize) -> &Component {
        self.components.iter().find(|c| c.vertices.contains(&vertex)).expect("every vertex has a component")
    }

    /// Generators of the vertex group in the plane of `vertex`.
    pub fn vertex_generators(&self, vertex: usize) -> Vec<MobiusMatrix> {
        let c = self.component_of(vertex);
        let back = c.frames[&vertex].inverse();
        c.basis.iter().map(|g| g.matrix.conjugate_by(&back)).collect()
    }
}

fn assemble_component(
    graph: &AugmentedGraph,
    label: &FNLabel,
    pants: &[PantsGroup],
    vertices: Vec<usize>,
    frames: BTreeMap<usize, MobiusMatrix>,
    tree_edges: &[(usize, usize)],
) -> Result<Component> {
    let pos: BTreeMap<usize, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut p = Presentation {
        symbol_origin: Vec::new(),
        symbol_matrix: Vec::new(),
        relations: Vec::new(),
    };
    for &q in &vertices {
        for slot in 0..2 {
            p.symbol_origin.push(GeneratorOrigin::Boundary { vertex: q, slot });
            p.symbol_matrix.push(pants[q].gamma[slot].conjugate_by(&frames[&q]));
        }
    }
    let in_tree = |e: usize, f: usize| tree_edges.iter().any(|&(a, b)| (a, b) == (e, f) || (a, b) == (f, e));
    let root = vertices[0];
    for &q in &vertices {
        for slot in 0..3 {
            let e = graph.slots[q][slot];
            let Some(f) = graph.edges[e].pair else { continue };
            if label.ell[e] == 0.0 || f < e {
                continue;
            }
            let q2 = graph.edges[f].vertex;
            let slot2 = graph.edges[f].slot;
            let here = boundary_symbol_word(pos[&q], slot);
            let there = boundary_symbol_word(pos[&q2], slot2);
            if in_tree(e, f) {
                // γ'_j γ_i = 1 in the root plane.
                let mut rel = there;
                rel.extend(here);
                p.relations.push(rel);
            } else {
                let g = gluing_map(&pants[q], slot, &pants[q2], slot2, label.tau[e])?;
                let t = frames[&q].mul(&g).mul(&frames[&q2].inverse());
                let s = p.symbol_origin.len();
                p.symbol_origin.push(GeneratorOrigin::Stable { edge: e });
                p.symbol_matrix.push(t);
                // t γ'_j t^{-1} γ_i = 1.
                let tl = words::letter(s, false);
                let mut rel = vec![tl];
                rel.extend(there);
                rel.push(-tl);
                rel.extend(here);
                p.relations.push(rel);
            }
        }
    }
    let mut residual: f64 = 0.0;
    for q in &vertices {
        let i = pos[q];
        let g3 = pants[*q].gamma[2].conjugate_by(&frames[q]);
        let w = evaluate(&boundary_symbol_word(i, 2), &p.symbol_matrix);
        residual = residual.max(w.mul(&g3.inverse()).distance_to_identity());
    }
    for rel in &p.relations {
        residual = residual.max(evaluate(rel, &p.symbol_matrix).distance_to_identity());
    }
    if residual > RELATION_TOL {
        return Err(Error::Degenerate(format!("group relation residual {residual:e} after gluing")));
    }

    let n = p.symbol_origin.len();
    let (defs, survivors, free) = eliminate(n, &p.relations);
    let relabel: BTreeMap<usize, usize> = survivors.iter().enumerate().map(|(k, &s)| (s, k)).collect();
    let rename = |w: &Word| -> Word {
        w.iter()
            .map(|&l| words::letter(relabel[&words::generator_of(l)], l < 0))
            .collect()
    };
    let basis: Vec<Generator> = survivors
        .iter()
        .enumerate()
        .map(|(k, &s)| Generator {
            name: words::format_word(&[words::letter(k, false)]),
            origin: p.symbol_origin[s].clone(),
            matrix: p.symbol_matrix[s],
        })
        .collect();
    let mut boundary_words = BTreeMap::new();
    for &q in &vertices {
        let i = pos[&q];
        let ws = [0, 1, 2].map(|slot| rename(&substitute(&boundary_symbol_word(i, slot), &defs)));
        boundary_words.insert(q, ws);
    }
    if free {
        let mats: Vec<MobiusMatrix> = basis.iter().map(|g| g.matrix).collect();
        for &q in &vertices {
            for slot in 0..3 {
                let m = evaluate(&boundary_words[&q][slot], &mats);
                let target = pants[q].gamma[slot].conjugate_by(&frames[&q]);
                residual = residual.max(m.mul(&target.inverse()).distance_to_identity());
            }
        }
        if residual > RELATION_TOL {
            return Err(Error::Degenerate(format!("free basis residual {residual:e}")));
        }
    }
    Ok(Component {
        vertices,
        root,
        frames,
        basis,
        boundary_words,
        free,
        relation_residual: residual,
    })
}

/// Builds the pants groups of a labelled graph and combines them along the
/// glued edges.
pub fn assemble(graph: &AugmentedGraph, label: &FNLabel) -> Result<AssembledSurface> {
    AssembledSurface::new(graph, label)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gluing_conditions() {
        let a = build_pants(1.0, 2.0, 3.0).unwrap();
        let b = build_pants(1.5, 1.0, 0.5).unwrap();
        let tau = 0.3;
        let g = gluing_map(&a, 0, &b, 1, tau).unwrap();
        let lhs = b.gamma[1].conjugate_by(&g);
        assert!(lhs.mul(&a.gamma[0]).distance_to_identity() < 1e-10);
        let twisted = a.hexagon.t[1].image(&a.gamma[0].power(tau).unwrap()).unwrap();
        let glued = b.hexagon.t[2].image(&g).unwrap();
        let (p, q) = twisted.endpoints().unwrap();
        let (r, s) = glued.endpoints().unwrap();
        assert!((p - r).abs() < 1e-9 && (q - s).abs() < 1e-9, "{p} {q} {r} {s}");
    }

    #[test]
    fn pants_is_its_own_group() {
        let (g, l) = AugmentedGraph::pants([1.0, 2.0, 3.0]);
        let s = assemble(&g, &l).unwrap();
        assert_eq!(s.components.len(), 1);
        let c = &s.components[0];
        assert!(c.free);
        assert_eq!(c.basis.len(), 2);
        assert_eq!(c.basis[0].matrix, s.pants[0].gamma[0]);
        assert_eq!(c.basis[1].matrix, s.pants[0].gamma[1]);
    }

    #[test]
    fn torus_boundary_word() {
        for end in [0.0, 0.6] {
            let (g, l) = AugmentedGraph::once_punctured_torus(1.0, 0.0, end).unwrap();
            let s = assemble(&g, &l).unwrap();
            let c = &s.components[0];
            assert!(c.free);
            assert_eq!(c.basis.len(), 2);
            let w = &c.boundary_words[&0][2];
            let mats: Vec<_> = c.basis.iter().map(|g| g.matrix).collect();
            let m = evaluate(w, &mats);
            if end == 0.0 {
                assert!((m.trace().abs() - 2.0).abs() < 1e-9);
            } else {
                assert!((m.translation_length().unwrap() - end).abs() < 1e-6);
            }
            assert_eq!(words::cyclic_reduce(w).len(), 4);
        }
    }

    #[test]
    fn cusped_edge_is_not_glued() {
        let (g, l) = AugmentedGraph::once_punctured_torus(0.0, 0.0, 1.0).unwrap();
        let s = assemble(&g, &l).unwrap();
        assert_eq!(s.components.len(), 1);
        assert_eq!(s.components[0].basis.len(), 2);
    }
}
