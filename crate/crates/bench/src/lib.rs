//! Fixed inputs shared by the benchmarks.

use gmml_core::models::{build_figure_config, FigureModel, FigureName};
use gmml_core::phasetype::PhaseTypeRep;
use gmml_core::SquareMatrix;

/// A dense sub-intensity matrix of dimension `p` with a single slow direction.
pub fn subintensity(p: usize) -> SquareMatrix {
    SquareMatrix::from_fn(p, p, |i, j| match (i, j) {
        _ if i == j => -1.0 - i as f64,
        _ if j == i + 1 => 0.5 + 0.1 * i as f64,
        _ => 0.0,
    })
}

pub fn phase_type(p: usize) -> PhaseTypeRep {
    let mut pi = vec![0.0; p];
    pi[0] = 1.0;
    PhaseTypeRep::from_parts(&pi, subintensity(p)).expect("fixture is a valid representation")
}

pub fn figure(name: FigureName) -> FigureModel {
    build_figure_config(name).expect("figure configurations build")
}
