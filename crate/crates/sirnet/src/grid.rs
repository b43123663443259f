//! Triadic discretization of the marked window: δ-indexed cell grids
//! anchored so that `(o, F_o)` is always a cell center, nearest-center
//! rounding with lexicographic tie-breaks, measure pushforwards, and the
//! minimal positive cell mass `κ_δ`.
//!
//! Spatial centers live on `δ·2r·ℤ^d ∩ W` (pitch `2rδ`), fading centers on
//! `(F_o + 2δ(F_max−F_min)ℤ) ∩ [F_min, F_max]`. Box windows discretize
//! exactly (clamping to the valid index range commutes with refinement);
//! disk windows reassign boundary overhang to the nearest in-window center,
//! which is only approximately nested.

use crate::measure::{Atom, MarkedMeasure};
use crate::model::{NetworkModel, Point, Window};
use crate::{Error, Result};
use std::collections::BTreeMap;

/// Nearest-integer rounding; exact halves go to the lower index (the
/// lexicographically smaller center).
fn round_tie_down(t: f64) -> i64 {
    (t - 0.5).ceil() as i64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellId {
    /// Spatial index: center at `(2rδ)·k` per axis (unused axes zero).
    pub k: [i64; 3],
    /// Fading index: center at `F_o + 2δ(F_max−F_min)·kf`.
    pub kf: i64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TriadicGrid {
    pub m: u32,
    pub delta: f64,
    pub window: Window,
    pub f_min: f64,
    pub f_max: f64,
    pub f_o: f64,
}

impl TriadicGrid {
    /// Grid at `δ = 3^{-m}` for the model's window and fading range, anchored
    /// at the model's base fading (midpoint when the base is random).
    pub fn new(model: &NetworkModel, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::Parameter("triadic level m must be at least 1".into()));
        }
        let f_min = model.fading.f_min();
        let f_max = model.fading.f_max();
        let f_o = model.base_fading_value();
        if f_o < f_min || f_o > f_max {
            return Err(Error::Model(format!(
                "fading anchor {f_o} outside [{f_min}, {f_max}]"
            )));
        }
        Ok(TriadicGrid {
            m,
            delta: 3f64.powi(-(m as i32)),
            window: model.window,
            f_min,
            f_max,
            f_o,
        })
    }

    /// One level finer (`δ/3`).
    pub fn refined(&self) -> Self {
        TriadicGrid {
            m: self.m + 1,
            delta: self.delta / 3.0,
            ..self.clone()
        }
    }

    pub fn spatial_pitch(&self) -> f64 {
        2.0 * self.window.half_width() * self.delta
    }

    pub fn fading_pitch(&self) -> f64 {
        2.0 * self.delta * (self.f_max - self.f_min)
    }

    /// Largest spatial index with its center still inside `[-r, r]` per axis.
    fn k_max(&self) -> i64 {
        // pitch = 2rδ, center k·pitch ≤ r ⇔ k ≤ 1/(2δ) = 3^m / 2
        (3i64.pow(self.m) - 1) / 2
    }

    fn kf_range(&self) -> (i64, i64) {
        let pitch = self.fading_pitch();
        if pitch == 0.0 {
            return (0, 0);
        }
        let lo = ((self.f_min - self.f_o) / pitch - 1e-12).ceil() as i64;
        let hi = ((self.f_max - self.f_o) / pitch + 1e-12).floor() as i64;
        (lo, hi)
    }

    /// Cell-center coordinates of `id`.
    pub fn center(&self, id: &CellId) -> (Point, f64) {
        let pitch = self.spatial_pitch();
        let mut p = Point::ORIGIN;
        for axis in 0..self.window.dim() {
            p.0[axis] = id.k[axis] as f64 * pitch;
        }
        (p, self.f_o + id.kf as f64 * self.fading_pitch())
    }

    fn spatial_index_box(&self, p: &Point) -> [i64; 3] {
        let pitch = self.spatial_pitch();
        let kmax = self.k_max();
        let mut k = [0i64; 3];
        for (axis, ki) in k.iter_mut().enumerate().take(self.window.dim()) {
            *ki = round_tie_down(p.0[axis] / pitch).clamp(-kmax, kmax);
        }
        k
    }

    /// Nearest cell center for a marked point, ties resolved to the
    /// lexicographically smallest center.
    pub fn discretize_point(&self, p: &Point, u: f64) -> Result<CellId> {
        if !self.window.contains(p) {
            return Err(Error::Domain(format!("point {p:?} outside the window")));
        }
        if u < self.f_min - 1e-12 || u > self.f_max + 1e-12 {
            return Err(Error::Domain(format!(
                "fading {u} outside [{}, {}]",
                self.f_min, self.f_max
            )));
        }
        let mut k = self.spatial_index_box(p);
        if let Window::Disk2D { r } = self.window {
            let pitch = self.spatial_pitch();
            let inside = |k: &[i64; 3]| {
                let x = k[0] as f64 * pitch;
                let y = k[1] as f64 * pitch;
                x * x + y * y <= r * r * (1.0 + 1e-12)
            };
            if !inside(&k) {
                // walk outward over index offsets for the nearest in-window
                // center; lexicographic order of candidates breaks ties
                let mut best: Option<([i64; 3], f64)> = None;
                let kmax = self.k_max();
                for radius in 1..=(kmax.min(4) + 1) {
                    for dx in -radius..=radius {
                        for dy in -radius..=radius {
                            if dx.abs().max(dy.abs()) != radius {
                                continue;
                            }
                            let cand = [k[0] + dx, k[1] + dy, 0];
                            if cand[0].abs() > kmax || cand[1].abs() > kmax || !inside(&cand) {
                                continue;
                            }
                            let cx = cand[0] as f64 * pitch;
                            let cy = cand[1] as f64 * pitch;
                            let d2 = (p.0[0] - cx).powi(2) + (p.0[1] - cy).powi(2);
                            let better = match &best {
                                None => true,
                                Some((bk, bd)) => {
                                    d2 < bd - 1e-15 || (d2 <= bd + 1e-15 && cand < *bk)
                                }
                            };
                            if better {
                                best = Some((cand, d2));
                            }
                        }
                    }
                    if best.is_some() && radius >= 2 {
                        break;
                    }
                }
                k = best
                    .map(|(bk, _)| bk)
                    .ok_or_else(|| Error::Domain("no grid center inside the disk".into()))?;
            }
        }
        let (lo, hi) = self.kf_range();
        let kf = if self.fading_pitch() == 0.0 {
            0
        } else {
            round_tie_down((u - self.f_o) / self.fading_pitch()).clamp(lo, hi)
        };
        Ok(CellId { k, kf })
    }

    /// All spatial center indices (used by tests and the sandwich harness).
    pub fn spatial_indices(&self) -> Vec<[i64; 3]> {
        let kmax = self.k_max();
        let pitch = self.spatial_pitch();
        let mut out = Vec::new();
        match self.window {
            Window::Box { d, .. } => {
                let mut idx = vec![-kmax; d];
                loop {
                    let mut k = [0i64; 3];
                    k[..d].copy_from_slice(&idx);
                    out.push(k);
                    let mut axis = 0;
                    loop {
                        if axis == d {
                            return out;
                        }
                        idx[axis] += 1;
                        if idx[axis] <= kmax {
                            break;
                        }
                        idx[axis] = -kmax;
                        axis += 1;
                    }
                }
            }
            Window::Disk2D { r } => {
                for kx in -kmax..=kmax {
                    for ky in -kmax..=kmax {
                        let x = kx as f64 * pitch;
                        let y = ky as f64 * pitch;
                        if x * x + y * y <= r * r * (1.0 + 1e-12) {
                            out.push([kx, ky, 0]);
                        }
                    }
                }
                out
            }
        }
    }
}

/// A measure carried on the cell centers of one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretizedMeasure {
    pub grid: TriadicGrid,
    pub masses: BTreeMap<CellId, f64>,
}

impl DiscretizedMeasure {
    pub fn total_mass(&self) -> f64 {
        self.masses.values().sum()
    }

    /// Gridded [`MarkedMeasure`] on the cell centers.
    pub fn to_measure(&self) -> MarkedMeasure {
        MarkedMeasure::Grid(
            self.masses
                .iter()
                .filter(|(_, &m)| m > 0.0)
                .map(|(id, &m)| {
                    let (pos, fading) = self.grid.center(id);
                    Atom { pos, fading, weight: m }
                })
                .collect(),
        )
    }
}

/// Image measure `ν^{ρ′}`: every entry's weight moves to its cell center.
/// Exact mass bookkeeping for both atom lists and grids.
pub fn pushforward(grid: &TriadicGrid, nu: &MarkedMeasure) -> Result<DiscretizedMeasure> {
    let mut masses: BTreeMap<CellId, f64> = BTreeMap::new();
    for a in nu.entries() {
        let id = grid.discretize_point(&a.pos, a.fading)?;
        *masses.entry(id).or_insert(0.0) += a.weight;
    }
    Ok(DiscretizedMeasure { grid: grid.clone(), masses })
}

/// `κ_δ`: smallest positive cell mass of the discretized a-priori measure.
pub fn kappa_delta(mu_prime: &DiscretizedMeasure) -> Result<f64> {
    mu_prime
        .masses
        .values()
        .filter(|&&m| m > 0.0)
        .cloned()
        .fold(None, |acc: Option<f64>, m| Some(acc.map_or(m, |a| a.min(m))))
        .ok_or_else(|| Error::Solver("κ_δ undefined: no positive cell mass".into()))
}
