//! Finite measures on the marked window `W × [F_min, F_max]`: weighted atom
//! lists for empirical configurations, gridded cell masses for a-priori
//! measures and minimizer densities. Both representations evaluate the same
//! way (cell midpoints act as atoms), the variant records provenance.

use crate::model::Point;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub pos: Point,
    pub fading: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MarkedMeasure {
    Atoms(Vec<Atom>),
    Grid(Vec<Atom>),
}

impl MarkedMeasure {
    pub fn zero() -> Self {
        MarkedMeasure::Atoms(Vec::new())
    }

    pub fn entries(&self) -> &[Atom] {
        match self {
            MarkedMeasure::Atoms(v) | MarkedMeasure::Grid(v) => v,
        }
    }

    pub fn total_mass(&self) -> f64 {
        self.entries().iter().map(|a| a.weight).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.entries().iter().all(|a| a.weight == 0.0)
    }

    pub fn len(&self) -> usize {
        self.entries().len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries().is_empty()
    }

    /// Same representation with all weights multiplied by `a`.
    pub fn scaled(&self, a: f64) -> Self {
        let scale = |v: &Vec<Atom>| {
            v.iter()
                .map(|at| Atom { weight: at.weight * a, ..*at })
                .collect()
        };
        match self {
            MarkedMeasure::Atoms(v) => MarkedMeasure::Atoms(scale(v)),
            MarkedMeasure::Grid(v) => MarkedMeasure::Grid(scale(v)),
        }
    }

    /// Restriction to the entries selected by `keep`, preserving the variant.
    pub fn restrict(&self, keep: impl Fn(usize, &Atom) -> bool) -> Self {
        let filter = |v: &Vec<Atom>| {
            v.iter()
                .enumerate()
                .filter(|(i, a)| keep(*i, a))
                .map(|(_, a)| *a)
                .collect()
        };
        match self {
            MarkedMeasure::Atoms(v) => MarkedMeasure::Atoms(filter(v)),
            MarkedMeasure::Grid(v) => MarkedMeasure::Grid(filter(v)),
        }
    }
}
