//! Pairs of pants, glued surfaces and their closed-geodesic length spectra.

pub mod assemble;
pub mod graph;
pub mod pants;
pub mod spectrum;
pub mod words;

pub use assemble::{assemble, gluing_map, AssembledSurface, Component, Generator, GeneratorOrigin};
pub use graph::{AugmentedGraph, EdgeLabel, EdgeRecord, FNLabel, GraphFile, Id, OrientedEdge};
pub use pants::{build_pants, PantsGroup};
pub use spectrum::{length_spectrum, length_spectrum_with, EnumerationBudget, LengthSpectrum, SpectrumEntry};
