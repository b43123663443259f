//! Draws of the marked Poisson point process: user counts, positions,
//! fadings (i.i.d. or space-dependent kernels) and the base-station fading.
//!
//! Reproducibility contract: all randomness comes from `ChaCha12` seeded from
//! a `u64`, so a `(model, kernel, lambda, seed)` tuple maps to a bit-identical
//! [`Sample`]. Parallel replications use distinct stream indices of the same
//! generator (see the harness).

use crate::measure::{Atom, MarkedMeasure};
use crate::model::{BaseFading, FadingLaw, NetworkModel, Point, SpatialIntensity, Window};
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Poisson};
use std::io::Write;

/// The RNG algorithm recorded in output metadata.
pub const RNG_ALGORITHM: &str = "chacha12";

/// Space-dependent fading assignment. Regions and kernel columns are keyed by
/// the distance to the origin, which covers the rotation-invariant models the
/// rest of the crate works with.
#[derive(Debug, Clone)]
pub enum FadingKernel {
    Iid(FadingLaw),
    /// Concentric annuli `[r_{i-1}, r_i)` (with `r_0 = 0`, last radius
    /// covering the window), one law per annulus.
    CountableAreas { radii: Vec<f64>, laws: Vec<FadingLaw> },
    /// Tabulated columns `(radius, law)`; a point uses the nearest column.
    ContinuousKernel { columns: Vec<(f64, FadingLaw)> },
}

impl FadingKernel {
    /// The law governing a point at `x`.
    pub fn law_at(&self, x: &Point) -> &FadingLaw {
        match self {
            FadingKernel::Iid(law) => law,
            FadingKernel::CountableAreas { radii, laws } => {
                let s = x.norm();
                let i = radii.partition_point(|&r| r < s).min(laws.len() - 1);
                &laws[i]
            }
            FadingKernel::ContinuousKernel { columns } => {
                let s = x.norm();
                columns
                    .iter()
                    .min_by(|a, b| {
                        (a.0 - s).abs().partial_cmp(&(b.0 - s).abs()).unwrap()
                    })
                    .map(|(_, law)| law)
                    .unwrap()
            }
        }
    }

    fn laws(&self) -> Vec<&FadingLaw> {
        match self {
            FadingKernel::Iid(law) => vec![law],
            FadingKernel::CountableAreas { laws, .. } => laws.iter().collect(),
            FadingKernel::ContinuousKernel { columns } => {
                columns.iter().map(|(_, l)| l).collect()
            }
        }
    }

    /// Checks every per-position law against the model's fading bounds.
    pub fn validate(&self, model: &NetworkModel) -> Result<()> {
        let laws = self.laws();
        if laws.is_empty() {
            return Err(Error::Model("fading kernel has no laws".into()));
        }
        if let FadingKernel::CountableAreas { radii, laws } = self {
            if radii.len() != laws.len() || !radii.windows(2).all(|w| w[0] < w[1]) {
                return Err(Error::Model(
                    "annulus radii must be increasing and match the number of laws".into(),
                ));
            }
            if *radii.last().unwrap() < model.window.max_norm() - 1e-12 {
                return Err(Error::Model("annuli do not cover the window".into()));
            }
        }
        let (fmin, fmax) = (model.fading.f_min(), model.fading.f_max());
        for law in laws {
            law.validate()?;
            if law.f_min() < fmin - 1e-12 || law.f_max() > fmax + 1e-12 {
                return Err(Error::Model(format!(
                    "kernel law supported on [{}, {}] outside the model range [{fmin}, {fmax}]",
                    law.f_min(),
                    law.f_max()
                )));
            }
        }
        Ok(())
    }
}

/// One realization of the marked process.
#[derive(Debug, Clone)]
pub struct Sample {
    /// Users with unit weights (divide by λ for the empirical measure).
    pub users: MarkedMeasure,
    pub lambda: f64,
    pub base_fading_draw: f64,
    pub seed: u64,
}

/// Draws a position with law `μ/μ(W)`.
pub fn sample_position<R: Rng>(model: &NetworkModel, rng: &mut R) -> Point {
    match (&model.intensity, &model.window) {
        (SpatialIntensity::UniformOnWindow { .. }, Window::Box { d, r }) => {
            let mut p = Point::ORIGIN;
            for axis in 0..*d {
                p.0[axis] = rng.gen_range(-r..=*r);
            }
            p
        }
        (SpatialIntensity::UniformOnWindow { .. }, Window::Disk2D { r }) => {
            // area-uniform: radius via square root, angle uniform
            let s = r * rng.gen::<f64>().sqrt();
            let th = rng.gen::<f64>() * 2.0 * std::f64::consts::PI;
            Point::new2(s * th.cos(), s * th.sin())
        }
        (SpatialIntensity::Radial2D { q }, _) => {
            let s = q.quantile(rng.gen::<f64>());
            let th = rng.gen::<f64>() * 2.0 * std::f64::consts::PI;
            Point::new2(s * th.cos(), s * th.sin())
        }
    }
}

/// Draws `N ~ Poisson(λ μ(W))` users with i.i.d. positions `∝ μ` and fadings
/// from the kernel, plus the base-station fading.
pub fn sample_ppp(
    model: &NetworkModel,
    kernel: &FadingKernel,
    lambda: f64,
    seed: u64,
) -> Result<Sample> {
    if !(lambda > 0.0) {
        return Err(Error::Parameter(format!("lambda must be positive, got {lambda}")));
    }
    kernel.validate(model)?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    sample_ppp_with(model, kernel, lambda, seed, &mut rng)
}

/// Same as [`sample_ppp`] but drawing from a caller-provided generator (used
/// by the harness to run many replications per stream).
pub fn sample_ppp_with<R: Rng>(
    model: &NetworkModel,
    kernel: &FadingKernel,
    lambda: f64,
    seed: u64,
    rng: &mut R,
) -> Result<Sample> {
    let mean = lambda * model.intensity.mass();
    let n = if mean == 0.0 {
        0
    } else {
        let pois = Poisson::new(mean)
            .map_err(|e| Error::Parameter(format!("invalid Poisson mean {mean}: {e}")))?;
        pois.sample(rng) as u64
    };
    let mut users = Vec::with_capacity(n as usize);
    for _ in 0..n {
        let pos = sample_position(model, rng);
        let fading = kernel.law_at(&pos).sample(rng);
        users.push(Atom { pos, fading, weight: 1.0 });
    }
    let base_fading_draw = match &model.base {
        BaseFading::Fixed(v) => *v,
        BaseFading::Random(law) => law.sample(rng),
    };
    Ok(Sample { users: MarkedMeasure::Atoms(users), lambda, base_fading_draw, seed })
}

/// `𝐋_λ = (1/λ) Σ δ_{(x_i, u_i)}`.
pub fn empirical_measure(s: &Sample) -> MarkedMeasure {
    s.users.scaled(1.0 / s.lambda)
}

/// CSV dump: header `x0,...,x{d-1},fading`, one row per user, after a
/// metadata comment line.
pub fn dump_users_csv(sample: &Sample, dim: usize, mut out: impl Write) -> std::io::Result<()> {
    writeln!(
        out,
        "# lambda={}, seed={}, base_fading={}, rng={}",
        sample.lambda, sample.seed, sample.base_fading_draw, RNG_ALGORITHM
    )?;
    let header: Vec<String> = (0..dim).map(|i| format!("x{i}")).collect();
    writeln!(out, "{},fading", header.join(","))?;
    for a in sample.users.entries() {
        let coords: Vec<String> = (0..dim).map(|i| format!("{}", a.pos.0[i])).collect();
        writeln!(out, "{},{}", coords.join(","), a.fading)?;
    }
    Ok(())
}
