//! Reproducible experiments: the a-priori frustration curve `p(c)`, the
//! rare-event Monte Carlo study with its conditioned variant, and report
//! emission.
//!
//! The Monte Carlo runs are sharded over a fixed number of independent
//! ChaCha streams and merged in shard order, so a fixed seed yields a
//! bit-identical report no matter how rayon schedules the work.

use std::io::Write;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use crate::model::{product_intensity, NetworkModel, PathLoss, Point, Window};
use crate::numerics::{gauss_legendre, map_rule};
use crate::sampler::{sample_ppp_with, FadingKernel, RNG_ALGORITHM};
use crate::sir::{mode_qos_all, Mode};
use crate::{Error, Result};

/// Shard count for every Monte Carlo run. Fixed so that the shard → stream
/// assignment, and with it the report, never depends on the thread pool.
pub const MC_SHARDS: u64 = 64;

/// 95% Wilson score interval for `hits` successes out of `n` trials.
pub fn wilson_ci(hits: u64, n: u64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959963984540054_f64;
    let n = n as f64;
    let p = hits as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// `P(Poisson(mean) > threshold)` by stable tail summation: the leading term
/// is built in log space, the rest by term ratios.
pub fn poisson_tail(mean: f64, threshold: f64) -> Result<f64> {
    if !(mean > 0.0) {
        return Err(Error::Parameter(format!("Poisson mean must be positive, got {mean}")));
    }
    if threshold < 0.0 {
        return Ok(1.0);
    }
    let k0 = threshold.floor() as u64 + 1;
    // decide which side of the distribution is cheaper to sum
    if (k0 as f64) <= mean {
        // sum the head P(N < k0), terms relative to exp(scale), complement
        let mut scale = -mean;
        let mut head = 0.0f64;
        let mut term = 1.0f64;
        for k in 0..k0 {
            head += term;
            term *= mean / (k + 1) as f64;
            if term > 1e250 {
                scale += term.ln();
                head /= term;
                term = 1.0;
            }
        }
        return Ok((1.0 - head * scale.exp()).max(0.0));
    }
    // log k0! by direct summation (k0 is moderate in every use here)
    let mut log_fact = 0.0f64;
    for j in 1..=k0 {
        log_fact += (j as f64).ln();
    }
    let log_lead = k0 as f64 * mean.ln() - mean - log_fact;
    let mut sum = 1.0f64;
    let mut term = 1.0f64;
    let mut k = k0;
    loop {
        term *= mean / (k + 1) as f64;
        sum += term;
        k += 1;
        if term < sum * 1e-18 && k as f64 > mean {
            break;
        }
    }
    Ok(log_lead.exp() * sum)
}

/// A-priori frustration curve `p(c) = G(μ′, τ_c, mode)(𝗪) / μ′(𝗪)` on a
/// threshold grid.
///
/// For the direct uplink over a radially symmetric disk model with a fading
/// density, the curve is computed by exact radial quadrature of
/// `F(g⁻¹(c)·I₀/ℓ(s))`; the node set is fixed across the grid, so the
/// returned values are nondecreasing without numerical exceptions. Other
/// configurations fall back to a product-grid representation of `μ′`, which
/// is monotone by construction as well.
pub fn frustration_curve(
    model: &NetworkModel,
    mode: Mode,
    c_grid: &[f64],
) -> Result<Vec<(f64, f64)>> {
    let c_plus = model.qos.c_plus();
    for &c in c_grid {
        if !(c > 0.0 && c <= c_plus) {
            return Err(Error::Domain(format!("threshold {c} outside (0, {c_plus}]")));
        }
    }
    if mode == Mode::UpDir {
        if let Ok(p) = crate::minimizer::RadialProblem::from_model(model, 0.5 * c_plus, 0.0) {
            return Ok(curve_radial(model, &p, c_grid));
        }
    }
    curve_grid(model, mode, c_grid)
}

fn curve_radial(
    model: &NetworkModel,
    p: &crate::minimizer::RadialProblem,
    c_grid: &[f64],
) -> Vec<(f64, f64)> {
    let r = match model.window {
        Window::Disk2D { r } => r,
        Window::Box { r, .. } => r,
    };
    // fixed node layout: q knots and the truncation radius as hard cuts,
    // refined uniformly so the moving kink of s ↦ F(αc/ℓ(s)) is resolved
    let mut cuts: Vec<f64> = vec![0.0, r];
    cuts.extend(p.q.knots().filter(|&s| s > 0.0 && s < r));
    if let PathLoss::TruncatedPower { .. } = model.path_loss {
        if let Some(rt) = model.path_loss.truncation_radius() {
            if rt > 0.0 && rt < r {
                cuts.push(rt);
            }
        }
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
    let (gn, gw) = gauss_legendre::<f64>(8);
    let mut nodes = Vec::new();
    for seg in cuts.windows(2) {
        let pieces = ((seg[1] - seg[0]) / r * 256.0).ceil().max(1.0) as usize;
        for j in 0..pieces {
            let a = seg[0] + (seg[1] - seg[0]) * j as f64 / pieces as f64;
            let b = seg[0] + (seg[1] - seg[0]) * (j + 1) as f64 / pieces as f64;
            let (xs, ws) = map_rule(&gn, &gw, a, b);
            for (x, w) in xs.into_iter().zip(ws) {
                nodes.push((x, w * p.q.eval(x)));
            }
        }
    }
    let i0 = crate::minimizer::prior_interference(p);
    let mu_w = p.mu_w();
    let c_plus = model.qos.c_plus();
    c_grid
        .iter()
        .map(|&c| {
            // {g(SIR) < c} = {raw SIR < g⁻¹(c)}, with g⁻¹(c̃₊) read as ρ₊
            let raw = if c >= c_plus {
                model.qos.rho_plus()
            } else {
                model.qos.g_inv(c).expect("c below the plateau")
            };
            let alpha = raw * i0;
            let mass: f64 = nodes
                .iter()
                .map(|&(s, w)| w * model.fading.cdf(alpha / model.path_loss.at(s)))
                .sum();
            (c, (mass / mu_w).clamp(0.0, 1.0))
        })
        .collect()
}

fn curve_grid(model: &NetworkModel, mode: Mode, c_grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    let grid = product_intensity(model, 28, 14)?;
    let base = (Point::ORIGIN, model.base_fading_value());
    let qos = mode_qos_all(model, &grid, mode, base);
    let mut cells: Vec<(f64, f64)> = qos
        .into_iter()
        .zip(grid.entries().iter().map(|a| a.weight))
        .collect();
    cells.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let total = grid.total_mass();
    let mut prefix = Vec::with_capacity(cells.len() + 1);
    prefix.push(0.0);
    for &(_, w) in &cells {
        prefix.push(prefix.last().unwrap() + w);
    }
    Ok(c_grid
        .iter()
        .map(|&c| {
            let idx = cells.partition_point(|&(q, _)| q < c);
            (c, prefix[idx] / total)
        })
        .collect())
}

/// Statistics of one hit (one sample whose frustrated-user fraction exceeded
/// the target).
#[derive(Debug, Clone, PartialEq)]
pub struct HitRecord {
    /// Global sample index within the run.
    pub id: u64,
    pub n_users: u64,
    pub mean_fading: f64,
}

/// Outcome of a Monte Carlo run. `stats` carries the named aggregate values
/// that also form the `stat,value` block of the CSV.
#[derive(Debug, Clone)]
pub struct ExperimentReport {
    /// Hash of the scenario file the model came from; "-" when the model was
    /// built in memory.
    pub scenario_hash: String,
    pub seed: u64,
    pub rng: String,
    pub shards: u64,
    pub lambda: f64,
    pub n_samples: u64,
    pub hits: Vec<HitRecord>,
    pub stats: Vec<(String, f64)>,
    pub wall_clock_secs: f64,
}

impl ExperimentReport {
    pub fn hit_count(&self) -> u64 {
        self.hits.len() as u64
    }

    pub fn hit_frequency(&self) -> f64 {
        if self.n_samples == 0 {
            0.0
        } else {
            self.hit_count() as f64 / self.n_samples as f64
        }
    }

    pub fn stat(&self, name: &str) -> Option<f64> {
        self.stats.iter().find(|(n, _)| n == name).map(|&(_, v)| v)
    }

    /// `#`-comment metadata, a `stat,value` block, then the per-hit block.
    pub fn write_csv(&self, mut out: impl Write) -> std::io::Result<()> {
        writeln!(
            out,
            "# scenario={}, seed={}, rng={}, shards={}, lambda={}, samples={}",
            self.scenario_hash, self.seed, self.rng, self.shards, self.lambda, self.n_samples
        )?;
        writeln!(out, "stat,value")?;
        writeln!(out, "samples,{}", self.n_samples)?;
        writeln!(out, "hits,{}", self.hit_count())?;
        writeln!(out, "hit_frequency,{:.10e}", self.hit_frequency())?;
        let (lo, hi) = wilson_ci(self.hit_count(), self.n_samples);
        writeln!(out, "hit_frequency_wilson_lo,{lo:.10e}")?;
        writeln!(out, "hit_frequency_wilson_hi,{hi:.10e}")?;
        for (name, value) in &self.stats {
            writeln!(out, "{name},{value:.10e}")?;
        }
        writeln!(out, "wall_clock_secs,{:.3}", self.wall_clock_secs)?;
        writeln!(out, "hit_id,n_users,mean_fading")?;
        for h in &self.hits {
            writeln!(out, "{},{},{:.10e}", h.id, h.n_users, h.mean_fading)?;
        }
        Ok(())
    }
}

fn shard_counts(n_samples: u64) -> Vec<(u64, u64)> {
    // (first global index, count) per shard; contiguous blocks
    let base = n_samples / MC_SHARDS;
    let extra = n_samples % MC_SHARDS;
    let mut out = Vec::with_capacity(MC_SHARDS as usize);
    let mut start = 0;
    for s in 0..MC_SHARDS {
        let count = base + u64::from(s < extra);
        out.push((start, count));
        start += count;
    }
    out
}

fn shard_rng(seed: u64, shard: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(shard + 1);
    rng
}

struct SampleOutcome {
    n_users: u64,
    frustrated: u64,
    mean_fading: f64,
}

/// One realization evaluated in the given mode. The direct uplink needs only
/// the single interference value at the origin, so it runs in O(N); the
/// remaining modes go through the full mode QoS vector.
fn run_sample<R: rand::Rng>(
    model: &NetworkModel,
    kernel: &FadingKernel,
    lambda: f64,
    c: f64,
    mode: Mode,
    rng: &mut R,
) -> Result<SampleOutcome> {
    if mode == Mode::UpDir {
        let mean = lambda * model.intensity.mass();
        let n = if mean == 0.0 {
            0u64
        } else {
            use rand_distr::Distribution;
            rand_distr::Poisson::new(mean)
                .map_err(|e| Error::Parameter(format!("invalid Poisson mean {mean}: {e}")))?
                .sample(rng) as u64
        };
        let mut signals = Vec::with_capacity(n as usize);
        let mut interference = 0.0;
        let mut fading_sum = 0.0;
        for _ in 0..n {
            let pos = crate::sampler::sample_position(model, rng);
            let u = kernel.law_at(&pos).sample(rng);
            let p = model.path_loss.at(pos.norm()) * u;
            interference += p;
            fading_sum += u;
            signals.push(p);
        }
        // the event lives on 𝐋_λ = (1/λ)Σδ, so the self-inclusive
        // interference carries the 1/λ normalization
        interference /= lambda;
        let frustrated = signals
            .iter()
            .filter(|&&p| model.qos.g(p / interference) < c)
            .count() as u64;
        return Ok(SampleOutcome {
            n_users: n,
            frustrated,
            mean_fading: if n > 0 { fading_sum / n as f64 } else { 0.0 },
        });
    }
    let sample = sample_ppp_with(model, kernel, lambda, 0, rng)?;
    let users = crate::sampler::empirical_measure(&sample);
    let n = users.entries().len() as u64;
    let base = (Point::ORIGIN, sample.base_fading_draw);
    let qos = mode_qos_all(model, &users, mode, base);
    let frustrated = qos.iter().filter(|&&q| q < c).count() as u64;
    let fading_sum: f64 = users.entries().iter().map(|a| a.fading).sum();
    Ok(SampleOutcome {
        n_users: n,
        frustrated,
        mean_fading: if n > 0 { fading_sum / n as f64 } else { 0.0 },
    })
}

/// Rare-event study: frequency of samples whose frustrated-user fraction
/// strictly exceeds `b_fraction`, with per-hit user counts and mean fadings.
pub fn rare_event_mc(
    model: &NetworkModel,
    lambda: f64,
    n_samples: u64,
    c: f64,
    b_fraction: f64,
    mode: Mode,
    seed: u64,
) -> Result<ExperimentReport> {
    if n_samples == 0 {
        return Err(Error::Parameter("n_samples must be at least 1".into()));
    }
    if !(lambda > 0.0) {
        return Err(Error::Parameter(format!("lambda must be positive, got {lambda}")));
    }
    let kernel = FadingKernel::Iid(model.fading.clone());
    kernel.validate(model)?;
    let start = Instant::now();
    let shards = shard_counts(n_samples);
    let results: Result<Vec<Vec<HitRecord>>> = shards
        .par_iter()
        .enumerate()
        .map(|(s, &(first, count))| {
            let mut rng = shard_rng(seed, s as u64);
            let mut hits = Vec::new();
            for j in 0..count {
                let o = run_sample(model, &kernel, lambda, c, mode, &mut rng)?;
                if o.n_users > 0 && o.frustrated as f64 > b_fraction * o.n_users as f64 {
                    hits.push(HitRecord {
                        id: first + j,
                        n_users: o.n_users,
                        mean_fading: o.mean_fading,
                    });
                }
            }
            Ok(hits)
        })
        .collect();
    let hits: Vec<HitRecord> = results?.into_iter().flatten().collect();
    let mut stats = vec![
        ("threshold_c".to_string(), c),
        ("b_fraction".to_string(), b_fraction),
    ];
    if !hits.is_empty() {
        let grand = hits.iter().map(|h| h.mean_fading).sum::<f64>() / hits.len() as f64;
        let min_n = hits.iter().map(|h| h.n_users).min().unwrap();
        let max_n = hits.iter().map(|h| h.n_users).max().unwrap();
        stats.push(("mean_of_hit_mean_fadings".to_string(), grand));
        stats.push(("min_hit_users".to_string(), min_n as f64));
        stats.push(("max_hit_users".to_string(), max_n as f64));
    }
    Ok(ExperimentReport {
        scenario_hash: "-".into(),
        seed,
        rng: RNG_ALGORITHM.into(),
        shards: MC_SHARDS,
        lambda,
        n_samples,
        hits,
        stats,
        wall_clock_secs: start.elapsed().as_secs_f64(),
    })
}

/// Statistics over the high-count population `{N > count_threshold}` and the
/// frustrated sub-population, direct uplink. Reports the containment
/// frequency of hits inside the high-count set.
pub fn conditioned_stats(
    model: &NetworkModel,
    lambda: f64,
    n_samples: u64,
    count_threshold: u64,
    c: f64,
    b_fraction: f64,
    seed: u64,
) -> Result<ExperimentReport> {
    if n_samples == 0 {
        return Err(Error::Parameter("n_samples must be at least 1".into()));
    }
    let kernel = FadingKernel::Iid(model.fading.clone());
    kernel.validate(model)?;
    let start = Instant::now();
    let shards = shard_counts(n_samples);
    #[derive(Default)]
    struct Acc {
        high: u64,
        fading_high: f64,
        hits: Vec<HitRecord>,
        hits_high: u64,
    }
    let results: Result<Vec<Acc>> = shards
        .par_iter()
        .enumerate()
        .map(|(s, &(first, count))| {
            let mut rng = shard_rng(seed, s as u64);
            let mut acc = Acc::default();
            for j in 0..count {
                let o = run_sample(model, &kernel, lambda, c, Mode::UpDir, &mut rng)?;
                let high = o.n_users > count_threshold;
                if high {
                    acc.high += 1;
                    acc.fading_high += o.mean_fading;
                }
                if o.n_users > 0 && o.frustrated as f64 > b_fraction * o.n_users as f64 {
                    if high {
                        acc.hits_high += 1;
                    }
                    acc.hits.push(HitRecord {
                        id: first + j,
                        n_users: o.n_users,
                        mean_fading: o.mean_fading,
                    });
                }
            }
            Ok(acc)
        })
        .collect();
    let results = results?;
    let high: u64 = results.iter().map(|a| a.high).sum();
    let fading_high: f64 = results.iter().map(|a| a.fading_high).sum();
    let hits_high: u64 = results.iter().map(|a| a.hits_high).sum();
    let hits: Vec<HitRecord> = results.into_iter().flat_map(|a| a.hits).collect();
    let containment = if hits.is_empty() {
        1.0
    } else {
        hits_high as f64 / hits.len() as f64
    };
    let stats = vec![
        ("threshold_c".to_string(), c),
        ("b_fraction".to_string(), b_fraction),
        ("count_threshold".to_string(), count_threshold as f64),
        ("high_count_samples".to_string(), high as f64),
        ("high_count_frequency".to_string(), high as f64 / n_samples as f64),
        (
            "mean_fading_high_count".to_string(),
            if high > 0 { fading_high / high as f64 } else { 0.0 },
        ),
        ("hit_containment_in_high_count".to_string(), containment),
    ];
    Ok(ExperimentReport {
        scenario_hash: "-".into(),
        seed,
        rng: RNG_ALGORITHM.into(),
        shards: MC_SHARDS,
        lambda,
        n_samples,
        hits,
        stats,
        wall_clock_secs: start.elapsed().as_secs_f64(),
    })
}

/// CSV dump of a frustration curve, header `c,p`.
pub fn dump_curve_csv(curve: &[(f64, f64)], mut out: impl Write) -> std::io::Result<()> {
    writeln!(out, "c,p")?;
    for &(c, p) in curve {
        writeln!(out, "{c:.10e},{p:.10e}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{BaseFading, FadingLaw, QosFunction, SpatialIntensity};
    use approx::assert_abs_diff_eq;

    fn hertzian_model() -> NetworkModel {
        NetworkModel {
            window: Window::Disk2D { r: 1.0 },
            path_loss: PathLoss::TruncatedPower { cap: 5.0, exponent: 4.0 },
            fading: FadingLaw::Uniform { a: 1.0, b: 2.0 },
            qos: QosFunction::TruncatedIdentity { k: 1.9200948616462483 },
            intensity: SpatialIntensity::lebesgue_disk(1.0, 1.0),
            base: BaseFading::Fixed(1.5),
        }
    }

    #[test]
    fn poisson_tail_known_values() {
        assert_eq!(poisson_tail(3.0, -1.0).unwrap(), 1.0);
        assert_abs_diff_eq!(poisson_tail(1.0, 0.0).unwrap(), 1.0 - (-1.0f64).exp(), epsilon = 1e-15);
        // direct sum oracle at a moderate mean
        let m = 4.5f64;
        let mut cdf = 0.0;
        let mut term = (-m).exp();
        for k in 0..=7 {
            cdf += term;
            term *= m / (k + 1) as f64;
        }
        assert_abs_diff_eq!(poisson_tail(m, 7.0).unwrap(), 1.0 - cdf, epsilon = 1e-14);
    }

    #[test]
    fn poisson_tail_paper_value() {
        let p = poisson_tail(50.0, 80.0).unwrap();
        assert_abs_diff_eq!(p, 3.436e-5, epsilon = 1e-8);
    }

    #[test]
    fn curve_endpoints_and_monotone() {
        let m = hertzian_model();
        let c_plus = m.qos.c_plus();
        let grid: Vec<f64> = (1..=60).map(|j| c_plus * j as f64 / 60.0).collect();
        let curve = frustration_curve(&m, Mode::UpDir, &grid).unwrap();
        for w in curve.windows(2) {
            assert!(w[1].1 >= w[0].1 - 1e-15);
        }
        assert_abs_diff_eq!(curve.last().unwrap().1, 1.0, epsilon = 1e-3);
        // below the minimal SIR the curve is flat zero
        let p = crate::minimizer::RadialProblem::from_model(&m, 0.5 * c_plus, 0.0).unwrap();
        let k_updir = crate::minimizer::k_updir(&p);
        let low = frustration_curve(&m, Mode::UpDir, &[0.5 * k_updir, k_updir]).unwrap();
        assert_eq!(low[0].1, 0.0);
        assert_eq!(low[1].1, 0.0);
    }

    #[test]
    fn curve_paper_figure_bound() {
        let m = hertzian_model();
        let curve = frustration_curve(&m, Mode::UpDir, &[1.1]).unwrap();
        assert!(curve[0].1 <= 0.6, "p(1.1) = {}", curve[0].1);
        assert!(curve[0].1 > 0.0);
    }

    #[test]
    fn curve_grid_path_matches_radial() {
        let m = hertzian_model();
        let grid: Vec<f64> = vec![0.8, 1.1, 1.5];
        let radial = frustration_curve(&m, Mode::UpDir, &grid).unwrap();
        let gridded = curve_grid(&m, Mode::UpDir, &grid).unwrap();
        for (a, b) in radial.iter().zip(&gridded) {
            assert_abs_diff_eq!(a.1, b.1, epsilon = 0.05);
        }
    }

    #[test]
    fn mc_deterministic_and_consistent() {
        let m = hertzian_model();
        let r1 = rare_event_mc(&m, 5.0, 2000, 1.1, 0.5, Mode::UpDir, 7).unwrap();
        let r2 = rare_event_mc(&m, 5.0, 2000, 1.1, 0.5, Mode::UpDir, 7).unwrap();
        assert_eq!(r1.hits, r2.hits);
        assert!(r1.hit_count() <= r1.n_samples);
        for h in &r1.hits {
            assert!(h.id < r1.n_samples);
            assert!(h.n_users > 0);
        }
    }

    #[test]
    fn mc_hits_everything_when_threshold_is_plateau() {
        let m = hertzian_model();
        // every user is strictly below c̃₊ (self-inclusive SIR < max), so with
        // b_fraction = 0 every nonempty sample is a hit
        let r = rare_event_mc(&m, 40.0, 500, m.qos.c_plus(), 0.0, Mode::UpDir, 3).unwrap();
        let empty = 500 - r.hit_count();
        // P(N = 0) at mean 40 is astronomically small
        assert_eq!(empty, 0, "unexpected empty samples: {empty}");
    }

    #[test]
    fn conditioned_containment_fields() {
        let m = hertzian_model();
        let r = conditioned_stats(&m, 5.0, 2000, 10, 1.1, 0.9, 11).unwrap();
        let high = r.stat("high_count_samples").unwrap();
        assert!(high > 0.0 && high <= 2000.0);
        let containment = r.stat("hit_containment_in_high_count").unwrap();
        assert!((0.0..=1.0).contains(&containment));
        let mf = r.stat("mean_fading_high_count").unwrap();
        assert!((1.0..=2.0).contains(&mf));
    }

    #[test]
    fn wilson_interval_sane() {
        let (lo, hi) = wilson_ci(0, 100);
        assert!(lo.abs() < 1e-12);
        assert!(hi > 0.0 && hi < 0.05);
        let (lo, hi) = wilson_ci(50, 100);
        assert!(lo < 0.5 && 0.5 < hi);
        assert_abs_diff_eq!(hi - 0.5, 0.5 - lo, epsilon = 1e-12);
    }

    #[test]
    fn report_csv_layout() {
        let m = hertzian_model();
        let r = rare_event_mc(&m, 5.0, 200, 1.5, 0.2, Mode::UpDir, 1).unwrap();
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert!(lines.next().unwrap().starts_with("# scenario="));
        assert_eq!(lines.next().unwrap(), "stat,value");
        assert!(text.contains("hit_frequency_wilson_lo"));
        assert!(text.contains("hit_id,n_users,mean_fading"));
        let hit_rows = text
            .lines()
            .skip_while(|l| !l.starts_with("hit_id"))
            .skip(1)
            .count();
        assert_eq!(hit_rows as u64, r.hit_count());
    }

    #[test]
    fn relayed_mode_mc_runs() {
        let m = hertzian_model();
        let r = rare_event_mc(&m, 3.0, 50, 1.9, 0.1, Mode::Up, 5).unwrap();
        assert!(r.hit_count() <= 50);
    }
}
