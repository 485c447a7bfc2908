use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::assemble::{AssembledSurface, Component};
use super::words::{self, Word};
use crate::error::{Error, Result};
use crate::hyperbolic::{halfplane_sigma, Classification, MobiusMatrix};

/// Spacing of the base points along seams and boundary axes.
const SAMPLE_SPACING: f64 = 1.0;

/// Limits of the word search. Prefixes whose displacement exceeds the target
/// radius by more than `slack` are pruned.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnumerationBudget {
    pub slack: f64,
    pub max_nodes_per_base: usize,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget {
            slack: 6.0,
            max_nodes_per_base: 4_000_000,
        }
    }
}

impl EnumerationBudget {
    pub fn doubled(&self) -> Self {
        EnumerationBudget {
            slack: 2.0 * self.slack,
            max_nodes_per_base: 2 * self.max_nodes_per_base,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub length: f64,
    pub multiplicity: usize,
    pub primitive: bool,
    /// One cyclically reduced word per unoriented class.
    pub words: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LengthSpectrum {
    pub entries: Vec<SpectrumEntry>,
    pub cutoff: f64,
    pub hash: String,
    /// Longest cyclically reduced word among the classes found.
    pub max_word_length: usize,
}

#[derive(Debug, Clone, Copy)]
struct ClassRecord {
    length: f64,
    primitive: bool,
}

type ClassMap = BTreeMap<(usize, Word), ClassRecord>;

fn base_points(surface: &AssembledSurface, comp: &Component) -> Result<Vec<Complex64>> {
    let mut out = Vec::new();
    for &q in &comp.vertices {
        let frame = comp.frames[&q];
        for z in surface.pants[q].thick_boundary_samples(SAMPLE_SPACING)? {
            out.push(frame.apply(z));
        }
    }
    Ok(out)
}

/// Boundary geodesics and their powers up to length r_max.
fn core_classes(surface: &AssembledSurface, ci: usize, r_max: f64, found: &mut ClassMap) -> Result<()> {
    let comp = &surface.components[ci];
    for &q in &comp.vertices {
        let p = &surface.pants[q];
        for k in 0..3 {
            if p.is_cusp(k) {
                continue;
            }
            let ell = p.gamma[k].translation_length()?;
            let w = &comp.boundary_words[&q][k];
            let mut power = w.clone();
            let mut m = 1;
            while m as f64 * ell <= r_max {
                found.entry((ci, words::unoriented_key(&power))).or_insert(ClassRecord {
                    length: m as f64 * ell,
                    primitive: m == 1,
                });
                power.extend_from_slice(w);
                m += 1;
            }
        }
    }
    Ok(())
}

fn sigma_of(distance: f64) -> f64 {
    let s = (0.5 * distance).sinh();
    4.0 * s * s
}

struct Search<'a> {
    gens: &'a [MobiusMatrix],
    base: Complex64,
    hit_sigma: f64,
    prune_sigma: f64,
    r_max: f64,
    nodes: usize,
    max_nodes: usize,
}

impl Search<'_> {
    fn run(&mut self, component: usize, found: &mut ClassMap) -> Result<()> {
        let n = 2 * self.gens.len();
        let mut path: Word = Vec::new();
        // (matrix at this depth, index of the next step to try)
        let mut stack: Vec<(MobiusMatrix, usize)> = vec![(MobiusMatrix::IDENTITY, 0)];
        while let Some(top) = stack.last_mut() {
            let (m, next) = *top;
            if next == n {
                stack.pop();
                path.pop();
                continue;
            }
            top.1 += 1;
            let l = words::letter(next / 2, next % 2 == 1);
            if path.last() == Some(&-l) {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.max_nodes {
                return Err(Error::BudgetExceeded { certified_r: 0.0 });
            }
            let step = self.gens[next / 2];
            let g = m.mul(&if l > 0 { step } else { step.inverse() });
            let s = halfplane_sigma(self.base, g.apply(self.base));
            if s > self.prune_sigma {
                continue;
            }
            path.push(l);
            if s <= self.hit_sigma && g.classify() == Classification::Hyperbolic {
                let length = g.translation_length()?;
                if length <= self.r_max {
                    let key = words::unoriented_key(&path);
                    found.entry((component, key)).or_insert(ClassRecord {
                        length,
                        primitive: words::is_primitive(&path),
                    });
                }
            }
            stack.push((g, 0));
        }
        Ok(())
    }
}

fn enumerate(surface: &AssembledSurface, r_max: f64, budget: &EnumerationBudget) -> Result<ClassMap> {
    let mut tasks = Vec::new();
    for (ci, comp) in surface.components.iter().enumerate() {
        if !comp.free {
            return Err(Error::Domain(
                "length spectra of closed components are not supported (their groups are not free)".into(),
            ));
        }
        for b in base_points(surface, comp)? {
            tasks.push((ci, b));
        }
    }
    let radius = r_max + SAMPLE_SPACING;
    let results: Vec<Result<ClassMap>> = tasks
        .par_iter()
        .map(|&(ci, base)| {
            let gens: Vec<MobiusMatrix> = surface.components[ci].basis.iter().map(|g| g.matrix).collect();
            let mut search = Search {
                gens: &gens,
                base,
                hit_sigma: sigma_of(radius) * (1.0 + 1e-12),
                prune_sigma: sigma_of(radius + budget.slack),
                r_max: r_max * (1.0 + 1e-12),
                nodes: 0,
                max_nodes: budget.max_nodes_per_base,
            };
            let mut found = ClassMap::new();
            search.run(ci, &mut found)?;
            Ok(found)
        })
        .collect();
    let mut all = ClassMap::new();
    for ci in 0..surface.components.len() {
        core_classes(surface, ci, r_max, &mut all)?;
    }
    for r in results {
        for (k, v) in r? {
            if let Some(old) = all.get(&k) {
                if (old.length - v.length).abs() > 1e-8 * (1.0 + v.length) {
                    return Err(Error::Degenerate(format!(
                        "class {} has inconsistent lengths {} and {}",
                        words::format_word(&k.1),
                        old.length,
                        v.length
                    )));
                }
            } else {
                all.insert(k, v);
            }
        }
    }
    Ok(all)
}

fn group_entries(classes: &ClassMap, dedup_tol: f64, components: usize) -> Vec<SpectrumEntry> {
    let mut sorted: Vec<(&(usize, Word), &ClassRecord)> = classes.iter().collect();
    sorted.sort_by(|a, b| {
        a.1.length
            .total_cmp(&b.1.length)
            .then(b.1.primitive.cmp(&a.1.primitive))
            .then(a.0.cmp(b.0))
    });
    let name = |(ci, w): &(usize, Word)| {
        if components > 1 {
            format!("{ci}:{}", words::format_word(w))
        } else {
            words::format_word(w)
        }
    };
    let mut entries: Vec<SpectrumEntry> = Vec::new();
    for primitive in [true, false] {
        let mut current: Option<SpectrumEntry> = None;
        for (k, rec) in sorted.iter().filter(|(_, r)| r.primitive == primitive) {
            match current.as_mut() {
                Some(e) if rec.length - e.length <= dedup_tol => {
                    e.multiplicity += 1;
                    e.words.push(name(k));
                }
                _ => {
                    if let Some(e) = current.take() {
                        entries.push(e);
                    }
                    current = Some(SpectrumEntry {
                        length: rec.length,
                        multiplicity: 1,
                        primitive,
                        words: vec![name(k)],
                    });
                }
            }
        }
        entries.extend(current);
    }
    entries.sort_by(|a, b| a.length.total_cmp(&b.length).then(b.primitive.cmp(&a.primitive)));
    entries
}

/// All closed geodesics of length at most `r_max`, grouped by length within
/// `dedup_tol` and by primitivity, using the default search budget.
pub fn length_spectrum(surface: &AssembledSurface, r_max: f64, dedup_tol: f64) -> Result<LengthSpectrum> {
    length_spectrum_with(surface, r_max, dedup_tol, &EnumerationBudget::default())
}

pub fn length_spectrum_with(
    surface: &AssembledSurface,
    r_max: f64,
    dedup_tol: f64,
    budget: &EnumerationBudget,
) -> Result<LengthSpectrum> {
    if !(r_max > 0.0) || !r_max.is_finite() {
        return Err(Error::Domain(format!("spectrum cutoff must be positive, got {r_max}")));
    }
    if !(dedup_tol >= 0.0) {
        return Err(Error::Domain(format!("dedup tolerance must be non-negative, got {dedup_tol}")));
    }
    let classes = match enumerate(surface, r_max, budget) {
        Ok(c) => c,
        Err(Error::BudgetExceeded { .. }) => {
            let mut r = 0.5 * r_max;
            let mut certified = 0.0;
            while r >= 0.25 {
                if enumerate(surface, r, budget).is_ok() {
                    certified = r;
                    break;
                }
                r *= 0.5;
            }
            return Err(Error::BudgetExceeded { certified_r: certified });
        }
        Err(e) => return Err(e),
    };
    let max_word_length = classes.keys().map(|(_, w)| w.len()).max().unwrap_or(0);
    Ok(LengthSpectrum {
        entries: group_entries(&classes, dedup_tol, surface.components.len()),
        cutoff: r_max,
        hash: surface.hash.clone(),
        max_word_length,
    })
}

impl LengthSpectrum {
    pub fn empty(cutoff: f64) -> Self {
        LengthSpectrum {
            entries: Vec::new(),
            cutoff,
            hash: String::new(),
            max_word_length: 0,
        }
    }

    /// Unoriented primitive closed geodesics of length at most r.
    pub fn counting(&self, r: f64) -> usize {
        self.entries
            .iter()
            .filter(|e| e.primitive && e.length <= r)
            .map(|e| e.multiplicity)
            .sum()
    }

    /// Smallest C with N(r') <= C e^{r'} for all r' <= r_fit.
    pub fn fit_growth_constant(&self, r_fit: f64) -> f64 {
        let mut n = 0usize;
        let mut c: f64 = 0.0;
        for e in self.entries.iter().filter(|e| e.primitive && e.length <= r_fit) {
            n += e.multiplicity;
            c = c.max(n as f64 * (-e.length).exp());
        }
        c
    }

    /// max over r' <= r of N(r') e^{-r'} - C; non-positive when the bound holds.
    pub fn growth_bound_excess(&self, c: f64, r: f64) -> f64 {
        self.fit_growth_constant(r) - c
    }

    /// Every non-primitive length is a multiple (at least two) of a primitive one.
    pub fn powers_consistent(&self, tol: f64) -> bool {
        let prim: Vec<f64> = self.entries.iter().filter(|e| e.primitive).map(|e| e.length).collect();
        self.entries.iter().filter(|e| !e.primitive).all(|e| {
            prim.iter().any(|&p| {
                let k = (e.length / p).round();
                k >= 2.0 && (e.length - k * p).abs() <= tol * k
            })
        })
    }

    /// (length, multiplicity, primitive) triples, for comparisons.
    pub fn signature(&self) -> Vec<(f64, usize, bool)> {
        self.entries.iter().map(|e| (e.length, e.multiplicity, e.primitive)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{assemble, AugmentedGraph};

    fn pants_spectrum(r: f64) -> LengthSpectrum {
        let (g, l) = AugmentedGraph::pants([1.0, 2.0, 3.0]);
        let s = assemble(&g, &l).unwrap();
        length_spectrum(&s, r, 1e-9).unwrap()
    }

    #[test]
    fn pants_primitive_start() {
        let sp = pants_spectrum(3.5);
        let prim: Vec<f64> = sp.entries.iter().filter(|e| e.primitive).map(|e| e.length).collect();
        assert!(prim.len() >= 3);
        for (a, b) in prim.iter().zip([1.0, 2.0, 3.0]) {
            assert!((a - b).abs() < 1e-9, "{prim:?}");
        }
    }

    #[test]
    fn pants_square_of_generator() {
        let sp = pants_spectrum(2.5);
        assert!(sp
            .entries
            .iter()
            .any(|e| !e.primitive && (e.length - 2.0).abs() < 1e-9 && e.words == vec!["aa".to_string()]));
        assert!(sp.powers_consistent(1e-9));
    }

    #[test]
    fn cusps_add_no_geodesics() {
        let (g, l) = AugmentedGraph::pants([0.0, 0.0, 1.0]);
        let s = assemble(&g, &l).unwrap();
        let sp = length_spectrum(&s, 2.5, 1e-9).unwrap();
        assert!((sp.entries[0].length - 1.0).abs() < 1e-9);
        assert!(sp.entries.iter().all(|e| e.length > 0.5));
    }
}
