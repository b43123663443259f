//! Static model ingredients: window, path-loss, fading law, QoS map, spatial
//! intensity and the assembled network model. All lengths and powers are
//! dimensionless multipliers.

use crate::measure::{Atom, MarkedMeasure};
use crate::numerics::PiecewiseLinear;
use crate::{Error, Result};

/// A point of the window, padded to three coordinates (unused axes are zero).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point(pub [f64; 3]);

/// Linear interpolation over sorted `(x, y)` knots, clamped at the ends.
fn interp(pts: &[(f64, f64)], x: f64) -> f64 {
    if x <= pts[0].0 {
        return pts[0].1;
    }
    if x >= pts[pts.len() - 1].0 {
        return pts[pts.len() - 1].1;
    }
    let i = pts.partition_point(|p| p.0 <= x) - 1;
    let (x0, y0) = pts[i];
    let (x1, y1) = pts[i + 1];
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}

impl Point {
    pub const ORIGIN: Point = Point([0.0; 3]);

    pub fn new1(x: f64) -> Self {
        Point([x, 0.0, 0.0])
    }

    pub fn new2(x: f64, y: f64) -> Self {
        Point([x, y, 0.0])
    }

    pub fn dist(&self, other: &Point) -> f64 {
        let dx = self.0[0] - other.0[0];
        let dy = self.0[1] - other.0[1];
        let dz = self.0[2] - other.0[2];
        (dx * dx + dy * dy + dz * dz).sqrt()
    }

    pub fn norm(&self) -> f64 {
        self.dist(&Point::ORIGIN)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Window {
    /// `[-r, r]^d`, `d ≤ 3`.
    Box { d: usize, r: f64 },
    /// Closed disk of radius `r` around the origin in the plane.
    Disk2D { r: f64 },
}

impl Window {
    pub fn dim(&self) -> usize {
        match *self {
            Window::Box { d, .. } => d,
            Window::Disk2D { .. } => 2,
        }
    }

    /// Half-width (box) or radius (disk); the triadic lattice pitch is `2rδ`.
    pub fn half_width(&self) -> f64 {
        match *self {
            Window::Box { r, .. } | Window::Disk2D { r } => r,
        }
    }

    pub fn diam(&self) -> f64 {
        match *self {
            Window::Box { d, r } => 2.0 * r * (d as f64).sqrt(),
            Window::Disk2D { r } => 2.0 * r,
        }
    }

    /// Largest distance from the origin to a point of the window.
    pub fn max_norm(&self) -> f64 {
        self.diam() / 2.0
    }

    pub fn volume(&self) -> f64 {
        match *self {
            Window::Box { d, r } => (2.0 * r).powi(d as i32),
            Window::Disk2D { r } => std::f64::consts::PI * r * r,
        }
    }

    pub fn contains(&self, p: &Point) -> bool {
        let eps = 1e-12 * self.half_width().max(1.0);
        match *self {
            Window::Box { d, r } => (0..d).all(|i| p.0[i].abs() <= r + eps)
                && (d..3).all(|i| p.0[i] == 0.0),
            Window::Disk2D { r } => p.0[2] == 0.0 && p.norm() <= r + eps,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Window::Box { d, r } => {
                if !(r > 0.0) {
                    return Err(Error::Model(format!("box half-width must be positive, got {r}")));
                }
                if d == 0 || d > 3 {
                    return Err(Error::Model(format!("box dimension must be 1..=3, got {d}")));
                }
            }
            Window::Disk2D { r } => {
                if !(r > 0.0) {
                    return Err(Error::Model(format!("disk radius must be positive, got {r}")));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PathLoss {
    /// `ℓ(s) = min{cap, s^{-exponent}}`, `ℓ(0) = cap`.
    TruncatedPower { cap: f64, exponent: f64 },
    Constant(f64),
    /// Monotone samples with linear interpolation; `j2` is the Lipschitz bound.
    Tabulated { samples: Vec<(f64, f64)>, j2: f64 },
}

impl PathLoss {
    /// Evaluates `ℓ(s)`; `s` is assumed nonnegative (checked in [`eval_path_loss`]).
    pub fn at(&self, s: f64) -> f64 {
        debug_assert!(s >= 0.0);
        match self {
            PathLoss::TruncatedPower { cap, exponent } => {
                if s == 0.0 {
                    *cap
                } else {
                    s.powf(-exponent).min(*cap)
                }
            }
            PathLoss::Constant(k) => *k,
            PathLoss::Tabulated { samples, .. } => interp(samples, s),
        }
    }

    /// Lipschitz constant of `ℓ` on `[0, ∞)`.
    pub fn j2(&self) -> f64 {
        match self {
            PathLoss::TruncatedPower { cap, exponent } => {
                // steepest slope sits at the truncation radius cap^{-1/β}
                exponent * cap.powf((exponent + 1.0) / exponent)
            }
            PathLoss::Constant(_) => 0.0,
            PathLoss::Tabulated { j2, .. } => *j2,
        }
    }

    /// Radius where the power law reaches the cap, if this is a truncated
    /// power-law form.
    pub fn truncation_radius(&self) -> Option<f64> {
        match self {
            PathLoss::TruncatedPower { cap, exponent } => Some(cap.powf(-1.0 / exponent)),
            _ => None,
        }
    }

    pub fn validate(&self, w: &Window) -> Result<()> {
        let (lmin, lmax) = extremal_path_loss(self, w);
        if !(lmin > 0.0 && lmax.is_finite()) {
            return Err(Error::Model(format!(
                "path loss must be positive and finite over the window, got range [{lmin}, {lmax}]"
            )));
        }
        if let PathLoss::Tabulated { samples, .. } = self {
            if samples.len() < 2 || !samples.windows(2).all(|p| p[0].0 < p[1].0) {
                return Err(Error::Model("tabulated path loss needs increasing sample abscissae".into()));
            }
        }
        Ok(())
    }
}

pub fn eval_path_loss(pl: &PathLoss, s: f64) -> Result<f64> {
    if s < 0.0 {
        return Err(Error::Domain(format!("distance must be nonnegative, got {s}")));
    }
    Ok(pl.at(s))
}

/// `(ℓ_min, ℓ_max)` over distances `[0, diam(W)]`.
pub fn extremal_path_loss(pl: &PathLoss, w: &Window) -> (f64, f64) {
    let diam = w.diam();
    match pl {
        PathLoss::TruncatedPower { cap, .. } => (pl.at(diam), *cap), // decreasing
        PathLoss::Constant(k) => (*k, *k),
        PathLoss::Tabulated { samples, .. } => {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            let mut probe = |s: f64| {
                let v = pl.at(s);
                lo = lo.min(v);
                hi = hi.max(v);
            };
            probe(0.0);
            probe(diam);
            for &(s, _) in samples.iter().filter(|&&(s, _)| s > 0.0 && s < diam) {
                probe(s);
            }
            (lo, hi)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FadingLaw {
    Uniform { a: f64, b: f64 },
    DiscreteAtoms { values: Vec<f64>, weights: Vec<f64> },
    /// Piecewise-linear density on `[F_min, F_max]` (knots `(u, f(u))`).
    TruncatedDensity { grid: Vec<(f64, f64)> },
}

impl FadingLaw {
    pub fn f_min(&self) -> f64 {
        match self {
            FadingLaw::Uniform { a, .. } => *a,
            FadingLaw::DiscreteAtoms { values, .. } => {
                values.iter().cloned().fold(f64::INFINITY, f64::min)
            }
            FadingLaw::TruncatedDensity { grid } => grid[0].0,
        }
    }

    pub fn f_max(&self) -> f64 {
        match self {
            FadingLaw::Uniform { b, .. } => *b,
            FadingLaw::DiscreteAtoms { values, .. } => {
                values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            }
            FadingLaw::TruncatedDensity { grid } => grid[grid.len() - 1].0,
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            FadingLaw::Uniform { a, b } => 0.5 * (a + b),
            FadingLaw::DiscreteAtoms { values, weights } => values
                .iter()
                .zip(weights)
                .map(|(v, w)| v * w)
                .sum::<f64>(),
            FadingLaw::TruncatedDensity { grid } => {
                let pw = PiecewiseLinear { pts: grid.clone() };
                pw.moment1(pw.lo(), pw.hi()) / pw.total()
            }
        }
    }

    /// CDF of the law (atoms: right-continuous step function).
    pub fn cdf(&self, u: f64) -> f64 {
        match self {
            FadingLaw::Uniform { a, b } => ((u - a) / (b - a)).clamp(0.0, 1.0),
            FadingLaw::DiscreteAtoms { values, weights } => values
                .iter()
                .zip(weights)
                .filter(|(v, _)| **v <= u)
                .map(|(_, w)| w)
                .sum(),
            FadingLaw::TruncatedDensity { grid } => {
                let pw = PiecewiseLinear { pts: grid.clone() };
                pw.cdf(u)
            }
        }
    }

    pub fn quantile(&self, p: f64) -> f64 {
        match self {
            FadingLaw::Uniform { a, b } => a + p.clamp(0.0, 1.0) * (b - a),
            FadingLaw::DiscreteAtoms { values, weights } => {
                let mut acc = 0.0;
                for (v, w) in values.iter().zip(weights) {
                    acc += w;
                    if acc >= p {
                        return *v;
                    }
                }
                *values.last().unwrap()
            }
            FadingLaw::TruncatedDensity { grid } => {
                let pw = PiecewiseLinear { pts: grid.clone() };
                pw.quantile(p)
            }
        }
    }

    pub fn sample<R: rand::Rng>(&self, rng: &mut R) -> f64 {
        self.quantile(rng.gen::<f64>())
    }

    /// Cell representation `(value, weight)` at resolution `n` (atoms are
    /// returned as-is).
    pub fn discretize(&self, n: usize) -> Vec<(f64, f64)> {
        match self {
            FadingLaw::Uniform { a, b } => {
                let w = 1.0 / n as f64;
                (0..n)
                    .map(|i| (a + (i as f64 + 0.5) * (b - a) / n as f64, w))
                    .collect()
            }
            FadingLaw::DiscreteAtoms { values, weights } => {
                values.iter().cloned().zip(weights.iter().cloned()).collect()
            }
            FadingLaw::TruncatedDensity { grid } => {
                let pw = PiecewiseLinear { pts: grid.clone() };
                let (lo, hi) = (pw.lo(), pw.hi());
                let total = pw.total();
                let mut cells = Vec::with_capacity(n);
                for i in 0..n {
                    let a = lo + i as f64 * (hi - lo) / n as f64;
                    let b = lo + (i + 1) as f64 * (hi - lo) / n as f64;
                    cells.push((0.5 * (a + b), pw.integral(a, b) / total));
                }
                cells
            }
        }
    }

    /// Density as a piecewise-linear function, when the law has one.
    pub fn density(&self) -> Option<PiecewiseLinear> {
        match self {
            FadingLaw::Uniform { a, b } => {
                Some(PiecewiseLinear::constant(*a, *b, 1.0 / (b - a)))
            }
            FadingLaw::TruncatedDensity { grid } => {
                let pw = PiecewiseLinear { pts: grid.clone() };
                let total = pw.total();
                Some(PiecewiseLinear {
                    pts: grid.iter().map(|&(u, f)| (u, f / total)).collect(),
                })
            }
            FadingLaw::DiscreteAtoms { .. } => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = (self.f_min(), self.f_max());
        if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
            return Err(Error::Model(format!(
                "fading bounds must satisfy 0 < F_min <= F_max < inf, got [{lo}, {hi}]"
            )));
        }
        match self {
            FadingLaw::Uniform { a, b } => {
                if !(a < b) {
                    return Err(Error::Model("uniform fading needs a < b".into()));
                }
            }
            FadingLaw::DiscreteAtoms { values, weights } => {
                if values.len() != weights.len() || values.is_empty() {
                    return Err(Error::Model("fading atoms and weights must match and be nonempty".into()));
                }
                if weights.iter().any(|&w| w < 0.0) {
                    return Err(Error::Model("fading weights must be nonnegative".into()));
                }
                let total: f64 = weights.iter().sum();
                if (total - 1.0).abs() > 1e-10 {
                    return Err(Error::Model(format!("fading weights must sum to 1, got {total}")));
                }
            }
            FadingLaw::TruncatedDensity { grid } => {
                if grid.len() < 2 || !grid.windows(2).all(|p| p[0].0 < p[1].0) {
                    return Err(Error::Model("fading density needs increasing knots".into()));
                }
                if grid.iter().any(|&(_, f)| f < 0.0) {
                    return Err(Error::Model("fading density must be nonnegative".into()));
                }
                let pw = PiecewiseLinear { pts: grid.clone() };
                if (pw.total() - 1.0).abs() > 1e-10 {
                    return Err(Error::Model(format!(
                        "fading density must normalize to 1, got {}",
                        pw.total()
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum QosFunction {
    /// `g(x) = min{x, k}`: identity below the plateau `c̃₊ = k`.
    TruncatedIdentity { k: f64 },
    /// Monotone samples on `[0, ρ̃₊]`, constant `c_plus` above.
    General {
        samples: Vec<(f64, f64)>,
        rho_plus: f64,
        c_plus: f64,
    },
}

impl QosFunction {
    pub fn g(&self, x: f64) -> f64 {
        match self {
            QosFunction::TruncatedIdentity { k } => x.min(*k),
            QosFunction::General { samples, rho_plus, c_plus } => {
                if x >= *rho_plus {
                    *c_plus
                } else {
                    interp(samples, x)
                }
            }
        }
    }

    /// Plateau value `c̃₊`.
    pub fn c_plus(&self) -> f64 {
        match self {
            QosFunction::TruncatedIdentity { k } => *k,
            QosFunction::General { c_plus, .. } => *c_plus,
        }
    }

    pub fn rho_plus(&self) -> f64 {
        match self {
            QosFunction::TruncatedIdentity { k } => *k,
            QosFunction::General { rho_plus, .. } => *rho_plus,
        }
    }

    /// Inverse on the strictly increasing branch (`y < c̃₊`).
    pub fn g_inv(&self, y: f64) -> Result<f64> {
        if y >= self.c_plus() {
            return Err(Error::Domain(format!(
                "QoS inverse only defined below the plateau {}, got {y}",
                self.c_plus()
            )));
        }
        match self {
            QosFunction::TruncatedIdentity { .. } => Ok(y),
            QosFunction::General { samples, .. } => {
                // monotone piecewise-linear inversion
                let pts = samples;
                for w in pts.windows(2) {
                    let (x0, y0) = w[0];
                    let (x1, y1) = w[1];
                    if y >= y0 && y <= y1 {
                        let t = if y1 > y0 { (y - y0) / (y1 - y0) } else { 0.0 };
                        return Ok(x0 + t * (x1 - x0));
                    }
                }
                Err(Error::Domain(format!("QoS value {y} outside tabulated range")))
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            QosFunction::TruncatedIdentity { k } => {
                if !(k > &0.0) {
                    return Err(Error::Model("QoS plateau must be positive".into()));
                }
            }
            QosFunction::General { samples, rho_plus, c_plus } => {
                if samples.len() < 2
                    || !samples.windows(2).all(|p| p[0].0 < p[1].0 && p[0].1 < p[1].1)
                {
                    return Err(Error::Model("QoS samples must be strictly increasing".into()));
                }
                if !(rho_plus > &0.0 && c_plus > &0.0) {
                    return Err(Error::Model("QoS thresholds must be positive".into()));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpatialIntensity {
    UniformOnWindow { mass: f64 },
    /// Radial density `q(s)` on `[0, r]`, piecewise linear; disk windows only.
    Radial2D { q: PiecewiseLinear },
}

impl SpatialIntensity {
    /// `μ(W)`.
    pub fn mass(&self) -> f64 {
        match self {
            SpatialIntensity::UniformOnWindow { mass } => *mass,
            SpatialIntensity::Radial2D { q } => q.total(),
        }
    }

    /// The restriction of the Lebesgue measure to a disk of radius `r`,
    /// rescaled to `total`, as a radial density.
    pub fn lebesgue_disk(r: f64, total: f64) -> SpatialIntensity {
        let scale = total / (std::f64::consts::PI * r * r);
        SpatialIntensity::Radial2D {
            q: PiecewiseLinear::new(vec![(0.0, 0.0), (r, 2.0 * std::f64::consts::PI * r * scale)]),
        }
    }

    /// Normalized radial density `q(s)/μ(W)` for disk-compatible intensities.
    pub fn radial_density(&self, w: &Window) -> Option<PiecewiseLinear> {
        match (self, w) {
            (SpatialIntensity::Radial2D { q }, Window::Disk2D { .. }) => Some(q.clone()),
            (SpatialIntensity::UniformOnWindow { mass }, Window::Disk2D { r }) => {
                let scale = mass / (std::f64::consts::PI * r * r);
                Some(PiecewiseLinear::new(vec![
                    (0.0, 0.0),
                    (*r, 2.0 * std::f64::consts::PI * r * scale),
                ]))
            }
            _ => None,
        }
    }

    pub fn validate(&self, w: &Window) -> Result<()> {
        if self.mass() < 0.0 {
            return Err(Error::Model("intensity mass must be nonnegative".into()));
        }
        if let SpatialIntensity::Radial2D { q } = self {
            if !matches!(w, Window::Disk2D { .. }) {
                return Err(Error::Model("radial intensity requires a disk window".into()));
            }
            let r = w.half_width();
            if (q.lo() - 0.0).abs() > 1e-12 || (q.hi() - r).abs() > 1e-9 {
                return Err(Error::Model(format!(
                    "radial density must span [0, {r}], got [{}, {}]",
                    q.lo(),
                    q.hi()
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BaseFading {
    Fixed(f64),
    Random(FadingLaw),
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkModel {
    pub window: Window,
    pub path_loss: PathLoss,
    pub fading: FadingLaw,
    pub qos: QosFunction,
    pub intensity: SpatialIntensity,
    pub base: BaseFading,
}

impl NetworkModel {
    /// Base-station fading used for deterministic evaluation; the random
    /// variant anchors at the midpoint of the fading range.
    pub fn base_fading_value(&self) -> f64 {
        match &self.base {
            BaseFading::Fixed(v) => *v,
            BaseFading::Random(_) => 0.5 * (self.fading.f_min() + self.fading.f_max()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.window.validate()?;
        self.path_loss.validate(&self.window)?;
        self.fading.validate()?;
        self.qos.validate()?;
        self.intensity.validate(&self.window)?;
        if let BaseFading::Fixed(v) = self.base {
            if v < self.fading.f_min() - 1e-12 || v > self.fading.f_max() + 1e-12 {
                return Err(Error::Model(format!(
                    "base fading {v} outside [{}, {}]",
                    self.fading.f_min(),
                    self.fading.f_max()
                )));
            }
        }
        if let BaseFading::Random(law) = &self.base {
            law.validate()?;
        }
        Ok(())
    }
}

/// Builds `μ′ = μ ⊗ ζ` as a gridded measure: `n_space` cells per spatial axis
/// (or radial cells for radial intensities) and `n_fading` fading cells.
/// Total mass equals `μ(W)` up to normalization of the spatial quadrature.
pub fn product_intensity(
    model: &NetworkModel,
    n_space: usize,
    n_fading: usize,
) -> Result<MarkedMeasure> {
    if n_space == 0 || n_fading == 0 {
        return Err(Error::Parameter("grid resolution must be positive".into()));
    }
    let fading_cells = {
        let mut cells = model.fading.discretize(n_fading);
        let total: f64 = cells.iter().map(|c| c.1).sum();
        for c in &mut cells {
            c.1 /= total;
        }
        cells
    };
    let mass = model.intensity.mass();
    let mut spatial: Vec<(Point, f64)> = Vec::new();
    match (&model.intensity, &model.window) {
        (SpatialIntensity::UniformOnWindow { .. }, Window::Box { d, r }) => {
            let n = n_space;
            let cell_mass = mass / (n.pow(*d as u32) as f64);
            let coord = |i: usize| -r + (2.0 * r) * (i as f64 + 0.5) / n as f64;
            let mut idx = vec![0usize; *d];
            loop {
                let mut p = Point::ORIGIN;
                for (axis, &i) in idx.iter().enumerate() {
                    p.0[axis] = coord(i);
                }
                spatial.push((p, cell_mass));
                // odometer increment
                let mut axis = 0;
                loop {
                    if axis == *d {
                        break;
                    }
                    idx[axis] += 1;
                    if idx[axis] < n {
                        break;
                    }
                    idx[axis] = 0;
                    axis += 1;
                }
                if axis == *d {
                    break;
                }
            }
        }
        (SpatialIntensity::UniformOnWindow { .. }, Window::Disk2D { r }) => {
            let n = n_space;
            let mut raw = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    let x = -r + (2.0 * r) * (i as f64 + 0.5) / n as f64;
                    let y = -r + (2.0 * r) * (j as f64 + 0.5) / n as f64;
                    if x * x + y * y <= r * r {
                        raw.push(Point::new2(x, y));
                    }
                }
            }
            if raw.is_empty() {
                return Err(Error::Parameter("grid too coarse: no cell center in disk".into()));
            }
            let cell_mass = mass / raw.len() as f64;
            spatial.extend(raw.into_iter().map(|p| (p, cell_mass)));
        }
        (SpatialIntensity::Radial2D { q }, Window::Disk2D { r }) => {
            let n_ang = n_space.max(8);
            for i in 0..n_space {
                let s0 = r * i as f64 / n_space as f64;
                let s1 = r * (i + 1) as f64 / n_space as f64;
                let ring_mass = q.integral(s0, s1);
                let s = 0.5 * (s0 + s1);
                for j in 0..n_ang {
                    let th = 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / n_ang as f64;
                    spatial.push((Point::new2(s * th.cos(), s * th.sin()), ring_mass / n_ang as f64));
                }
            }
            // exact ring masses already sum to μ(W); nothing to renormalize
        }
        _ => {
            return Err(Error::Model("unsupported window/intensity combination".into()));
        }
    }
    let mut cells = Vec::with_capacity(spatial.len() * fading_cells.len());
    for &(p, wm) in &spatial {
        for &(u, wu) in &fading_cells {
            let m = wm * wu;
            if m > 0.0 {
                cells.push(Atom { pos: p, fading: u, weight: m });
            }
        }
    }
    Ok(MarkedMeasure::Grid(cells))
}
