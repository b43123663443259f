//! Acceptance gate: ten end-to-end criteria, each printing one PASS/FAIL
//! line. Every criterion is checked against an independent oracle or an
//! exactly known value; stochastic checks use fixed seeds and tolerances
//! wide enough for binomial noise.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use sirnet::classifier::{classify_fixed, classify_random_base, Decay};
use sirnet::entropy::{h_cell, poisson_rate, rel_entropy_discrete};
use sirnet::grid::{pushforward, DiscretizedMeasure, TriadicGrid};
use sirnet::harness::{frustration_curve, poisson_tail, rare_event_mc};
use sirnet::measure::{Atom, MarkedMeasure};
use sirnet::minimizer::{
    dual_ascent, k_updir, minimize_b0, minimize_direct_uplink, minimize_pathloss_free_downlink,
    oracle_cartesian_updir, oracle_minimize_updir, prior_frustrated_mass, RadialProblem, Tilt,
};
use sirnet::model::{
    product_intensity, BaseFading, FadingLaw, NetworkModel, PathLoss, Point, QosFunction,
    SpatialIntensity, Window,
};
use sirnet::numerics::golden_min;
use sirnet::sampler::{sample_ppp, sample_position, FadingKernel};
use sirnet::sir::{frustration_measure, minimal_sir_vector, mode_qos_all, qos_direct, Mode};

fn report(id: u32, name: &str, failures: Vec<String>) {
    if failures.is_empty() {
        println!("criterion {id:02} ({name}): PASS");
    } else {
        println!("criterion {id:02} ({name}): FAIL — {}", failures.join("; "));
        panic!("criterion {id:02} failed");
    }
}

fn hertzian_model() -> NetworkModel {
    NetworkModel {
        window: Window::Disk2D { r: 1.0 },
        path_loss: PathLoss::TruncatedPower { cap: 5.0, exponent: 4.0 },
        fading: FadingLaw::Uniform { a: 1.0, b: 2.0 },
        qos: QosFunction::TruncatedIdentity { k: 1.9200477035086243 },
        intensity: SpatialIntensity::lebesgue_disk(1.0, 1.0),
        base: BaseFading::Fixed(1.5),
    }
}

fn box_model() -> NetworkModel {
    NetworkModel {
        window: Window::Box { d: 2, r: 1.0 },
        path_loss: PathLoss::TruncatedPower { cap: 5.0, exponent: 4.0 },
        fading: FadingLaw::Uniform { a: 1.0, b: 2.0 },
        qos: QosFunction::TruncatedIdentity { k: 2.0 },
        intensity: SpatialIntensity::UniformOnWindow { mass: 1.0 },
        base: BaseFading::Fixed(1.5),
    }
}

fn random_discrete(
    mu: &DiscretizedMeasure,
    rng: &mut impl Rng,
    scale: impl Fn(&mut dyn FnMut() -> f64, f64) -> f64,
) -> DiscretizedMeasure {
    let mut draw = || rng.gen::<f64>();
    DiscretizedMeasure {
        grid: mu.grid.clone(),
        masses: mu.masses.iter().map(|(k, v)| (*k, scale(&mut draw, *v))).collect(),
    }
}

#[test]
fn criterion_01_entropy_identities() {
    let start = Instant::now();
    let model = box_model();
    let grid = TriadicGrid::new(&model, 2).unwrap();
    let mu = pushforward(&grid, &product_intensity(&model, 9, 6).unwrap()).unwrap();
    let mu_w = mu.total_mass();
    let mut rng = ChaCha12Rng::seed_from_u64(101);
    let mut failures = Vec::new();
    for trial in 0..1000 {
        let nu = random_discrete(&mu, &mut rng, |d, v| v * (0.05 + 2.45 * d()));
        let a: f64 = rng.gen_range(0.01..3.0);
        let eps: f64 = rng.gen_range(0.01..0.49);
        let h = rel_entropy_discrete(&nu, &mu).unwrap().value;
        let at = |factor: f64| {
            let scaled = DiscretizedMeasure {
                grid: nu.grid.clone(),
                masses: nu.masses.iter().map(|(k, v)| (*k, factor * v)).collect(),
            };
            rel_entropy_discrete(&scaled, &mu).unwrap().value
        };
        // linear perturbation identity
        let lhs = at(a);
        let rhs = a * h + a * a.ln() * nu.total_mass() + (1.0 - a) * mu_w;
        if (lhs - rhs).abs() > 1e-12 * (1.0 + lhs.abs()) {
            failures.push(format!("identity off by {:.2e} at trial {trial}", (lhs - rhs).abs()));
            break;
        }
        // two-sided perturbation bounds
        let up = at(1.0 + eps);
        let down = at(1.0 - eps);
        if up > (1.0 + 3.0 * eps) * h + 3.0 * eps * mu_w + 1e-12 {
            failures.push(format!("upper bound violated at trial {trial}"));
            break;
        }
        if down < (1.0 - 3.0 * eps) * h - 3.0 * eps * mu_w - 1e-12 {
            failures.push(format!("lower bound violated at trial {trial}"));
            break;
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    if elapsed >= 5.0 {
        failures.push(format!("runtime {elapsed:.1}s ≥ 5s"));
    }
    report(1, "entropy identities", failures);
}

#[test]
fn criterion_02_poisson_rate() {
    let start = Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(102);
    let mut failures = Vec::new();
    for _ in 0..100 {
        let y: f64 = rng.gen_range(0.0..10.0);
        let m: f64 = rng.gen_range(0.1..10.0);
        let alpha = golden_min(|a| -(a * y + m * (1.0 - a.exp())), -30.0, 10.0, 200);
        let legendre = alpha * y + m * (1.0 - alpha.exp());
        let rate = poisson_rate(y, m).unwrap();
        if (rate - legendre).abs() > 1e-8 {
            failures.push(format!(
                "rate {rate} vs Legendre {legendre} at (y={y:.3}, m={m:.3})"
            ));
            break;
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    if elapsed >= 1.0 {
        failures.push(format!("runtime {elapsed:.2}s ≥ 1s"));
    }
    report(2, "poisson rate", failures);
}

#[test]
fn criterion_03_sir_invariants() {
    let model = hertzian_model();
    let kernel = FadingKernel::Iid(model.fading.clone());
    let mut failures = Vec::new();
    // normalized self-inclusive SIR in (0, 1] on sampled configurations
    'configs: for seed in 0..10_000u64 {
        let s = sample_ppp(&model, &kernel, 5.0, seed).unwrap();
        let signals: Vec<f64> = s
            .users
            .entries()
            .iter()
            .map(|a| model.path_loss.at(a.pos.norm()) * a.fading)
            .collect();
        let total: f64 = signals.iter().sum();
        for &p in &signals {
            let sir = p / total;
            if !(sir > 0.0 && sir <= 1.0) {
                failures.push(format!("normalized SIR {sir} outside (0,1] at seed {seed}"));
                break 'configs;
            }
        }
    }
    // monotonicity: growing the measure can only lower the direct QoS
    let base_mu = product_intensity(&model, 10, 5).unwrap();
    let mut rng = ChaCha12Rng::seed_from_u64(103);
    for trial in 0..1000 {
        let scale: Vec<f64> =
            (0..base_mu.len()).map(|_| rng.gen_range(0.1..1.0)).collect();
        let grow: Vec<f64> = scale.iter().map(|s| s * rng.gen_range(1.0..3.0)).collect();
        let with = |w: &[f64]| {
            MarkedMeasure::Grid(
                base_mu
                    .entries()
                    .iter()
                    .zip(w)
                    .map(|(a, s)| Atom { weight: a.weight * s, ..*a })
                    .collect(),
            )
        };
        let nu = with(&scale);
        let nu_big = with(&grow);
        let tx = (sample_position(&model, &mut rng), rng.gen_range(1.0..2.0));
        let rx = sample_position(&model, &mut rng);
        let d_small = qos_direct(&model, tx, rx, &nu);
        let d_big = qos_direct(&model, tx, rx, &nu_big);
        if d_big > d_small + 1e-12 {
            failures.push(format!("QoS rose under a larger measure at trial {trial}"));
            break;
        }
    }
    report(3, "sir invariants", failures);
}

#[test]
fn criterion_04_discretization() {
    let model = box_model();
    let mut rng = ChaCha12Rng::seed_from_u64(104);
    let mut failures = Vec::new();
    let random_atoms = |rng: &mut ChaCha12Rng, n: usize| -> MarkedMeasure {
        MarkedMeasure::Atoms(
            (0..n)
                .map(|_| Atom {
                    pos: Point::new2(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                    fading: rng.gen_range(1.0..2.0),
                    weight: rng.gen_range(0.01..0.1),
                })
                .collect(),
        )
    };

    // mass conservation and the nesting identity, atom by atom
    let coarse = TriadicGrid::new(&model, 2).unwrap();
    let fine = coarse.refined();
    let nu = random_atoms(&mut rng, 1000);
    let direct = pushforward(&coarse, &nu).unwrap();
    // "exact" up to summation-order roundoff: the pushforward adds the same
    // weights, just grouped by cell, so only 1e-12 bookkeeping noise remains
    if (direct.total_mass() - nu.total_mass()).abs() > 1e-12 {
        failures.push("mass not conserved".into());
    }
    let via_fine = pushforward(&coarse, &pushforward(&fine, &nu).unwrap().to_measure()).unwrap();
    if via_fine.masses.keys().ne(direct.masses.keys()) {
        failures.push("nesting identity: cell sets differ".into());
    } else if direct
        .masses
        .iter()
        .any(|(k, v)| (via_fine.masses[k] - v).abs() > 1e-12)
    {
        failures.push("nesting identity: cell masses differ".into());
    }

    // two-sided frustration sandwich at the smallest ladder level
    let ladder: Vec<u32> = vec![2, 3, 4, 5];
    let m_small = *ladder.last().unwrap();
    let grid = TriadicGrid::new(&model, m_small).unwrap();
    let base = (Point::ORIGIN, model.base_fading_value());
    let c = 1.0;
    'measures: for trial in 0..100 {
        let nu = random_atoms(&mut rng, 15);
        let disc = pushforward(&grid, &nu).unwrap();
        for mode in Mode::ALL {
            let mid = pushforward(
                &grid,
                &frustration_measure(&model, &nu, c, mode, base).unwrap(),
            )
            .unwrap();
            let scaled_masses = |eps: f64| -> BTreeMap<_, f64> {
                let scaled = disc.to_measure().scaled(1.0 + eps);
                pushforward(&grid, &frustration_measure(&model, &scaled, c, mode, base).unwrap())
                    .unwrap()
                    .masses
            };
            for eps in [0.1, 0.2] {
                let upper = scaled_masses(eps);
                let lower = scaled_masses(-eps);
                for (id, &m) in &mid.masses {
                    let up = upper.get(id).copied().unwrap_or(0.0);
                    let lo = lower.get(id).copied().unwrap_or(0.0);
                    if !(lo <= m + 1e-12 && m <= up + 1e-12) {
                        failures.push(format!(
                            "sandwich broken: {lo:.4} ≤ {m:.4} ≤ {up:.4} fails \
                             (trial {trial}, mode {mode}, eps {eps})"
                        ));
                        break 'measures;
                    }
                }
                // cells frustrated only under the deflated measure would also
                // break the ordering
                for (id, &lo) in &lower {
                    let m = mid.masses.get(id).copied().unwrap_or(0.0);
                    if lo > m + 1e-12 {
                        failures.push(format!(
                            "deflated frustration exceeds the pushforward \
                             (trial {trial}, mode {mode}, eps {eps})"
                        ));
                        break 'measures;
                    }
                }
            }
        }
    }
    report(4, "discretization", failures);
}

#[test]
fn criterion_05_minimizer_cross_validation() {
    let start = Instant::now();
    let model = hertzian_model();
    let mut rng = ChaCha12Rng::seed_from_u64(105);
    let mut failures = Vec::new();
    for trial in 0..10 {
        let c: f64 = rng.gen_range(0.95..1.35);
        let probe = RadialProblem::from_model(&model, c, 0.0).unwrap();
        let b = prior_frustrated_mass(&probe) + rng.gen_range(0.05..0.3);
        let p = RadialProblem::from_model(&model, c, b).unwrap();
        let sol = match minimize_direct_uplink(&p) {
            Ok(s) => s,
            Err(e) => {
                failures.push(format!("solver failed at (c={c:.3}, b={b:.3}): {e}"));
                break;
            }
        };
        if !sol.unlikely {
            failures.push(format!("(c={c:.3}, b={b:.3}) not in the unlikely regime"));
            break;
        }
        if sol.residuals.iter().any(|r| r.abs() > 1e-8) {
            failures.push(format!("residuals {:?} exceed 1e-8 at trial {trial}", sol.residuals));
            break;
        }
        if let Tilt::DirectUplink { beta, delta } = sol.tilt {
            if beta.max(delta) < -1e-10 {
                failures.push(format!("sign condition violated: beta={beta}, delta={delta}"));
                break;
            }
        }
        let (_, oracle) = match oracle_minimize_updir(&p, 40, 20) {
            Ok(o) => o,
            Err(e) => {
                failures.push(format!("oracle failed at (c={c:.3}, b={b:.3}): {e}"));
                break;
            }
        };
        let rel = (sol.entropy - oracle.entropy).abs() / oracle.entropy.max(1e-12);
        if rel > 0.01 {
            failures.push(format!(
                "entropy {:.6} vs oracle {:.6} ({:.2}% off) at (c={c:.3}, b={b:.3})",
                sol.entropy,
                oracle.entropy,
                100.0 * rel
            ));
            break;
        }
    }
    // rotational symmetry of the 2-D oracle at one representative optimum
    let p = RadialProblem::from_model(&model, 1.1, 0.9).unwrap();
    let sol = minimize_direct_uplink(&p).unwrap();
    let cart = oracle_cartesian_updir(&p, sol.alpha_min, 24, 10).unwrap();
    let mut groups: BTreeMap<(i64, i64), Vec<f64>> = BTreeMap::new();
    for &(x, y, u, ratio) in &cart.ratios {
        let key = (((x * x + y * y) * 1e12).round() as i64, (u * 1e9).round() as i64);
        groups.entry(key).or_default().push(ratio);
    }
    let mut max_rel = 0.0f64;
    for (_, g) in groups {
        let lo = g.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = g.iter().cloned().fold(0.0f64, f64::max);
        if hi > 0.0 {
            max_rel = max_rel.max((hi - lo) / hi);
        }
    }
    if max_rel >= 1e-4 {
        failures.push(format!("angular variation {max_rel:.2e} ≥ 1e-4"));
    }
    let elapsed = start.elapsed().as_secs_f64();
    if elapsed >= 120.0 {
        failures.push(format!("runtime {elapsed:.0}s ≥ 120s"));
    }
    report(5, "minimizer cross-validation", failures);
}

#[test]
fn criterion_06_b_to_zero() {
    let model = hertzian_model();
    let mut failures = Vec::new();
    let probe = RadialProblem::from_model(&model, 1.0, 0.0).unwrap();
    let c = 0.8 * k_updir(&probe);
    let p0 = RadialProblem::from_model(&model, c, 0.0).unwrap();
    let h0 = minimize_b0(&p0).unwrap();
    let gamma0 = match h0.tilt {
        Tilt::BoundaryZero { gamma0 } => gamma0,
        _ => {
            failures.push("b=0 solver did not return a boundary tilt".into());
            report(6, "b↓0 convergence", failures);
            return;
        }
    };
    // sup-norm gap of the tilted densities on a fixed (s, u) probe grid
    let mut prev = f64::INFINITY;
    for b in [1e-1, 1e-2, 1e-3] {
        let pb = RadialProblem::from_model(&model, c, b).unwrap();
        let hb = minimize_direct_uplink(&pb).unwrap();
        let mut gap = 0.0f64;
        for i in 0..40 {
            let s = 1.0 * (i as f64 + 0.5) / 40.0;
            for j in 0..20 {
                let u = 1.0 + (j as f64 + 0.5) / 20.0;
                let ell = model.path_loss.at(s);
                let d = (hb.density_factor(ell, u) - (gamma0 * ell * u).exp()).abs();
                gap = gap.max(d);
            }
        }
        if gap >= prev {
            failures.push(format!("gap {gap:.3e} did not decrease at b={b}"));
            break;
        }
        prev = gap;
    }
    // the boundary multiplier vanishes exactly at the minimal-SIR threshold
    let ck = k_updir(&probe);
    let pk = RadialProblem::from_model(&model, ck, 0.0).unwrap();
    let hk = minimize_b0(&pk).unwrap();
    if let Tilt::BoundaryZero { gamma0 } = hk.tilt {
        if gamma0.abs() > 1e-6 {
            failures.push(format!("gamma0 = {gamma0:.2e} at c = K_updir"));
        }
    } else if !matches!(hk.tilt, Tilt::Prior) {
        failures.push("unexpected tilt at c = K_updir".into());
    }
    report(6, "b↓0 convergence", failures);
}

#[test]
fn criterion_07_pathloss_free_downlink() {
    let model = NetworkModel {
        window: Window::Disk2D { r: 1.0 },
        path_loss: PathLoss::Constant(2.0),
        fading: FadingLaw::Uniform { a: 1.0, b: 2.0 },
        qos: QosFunction::TruncatedIdentity { k: 3.0 },
        intensity: SpatialIntensity::UniformOnWindow { mass: 1.0 },
        base: BaseFading::Fixed(1.5),
    };
    let kernel = FadingKernel::Iid(model.fading.clone());
    let base = (Point::ORIGIN, model.base_fading_value());
    let mut rng = ChaCha12Rng::seed_from_u64(107);
    let mut failures = Vec::new();
    // all-or-none: with a constant path loss every user sees the same
    // downlink SIR, so the frustrated count is 0 or N exactly
    for seed in 0..10_000u64 {
        let s = sample_ppp(&model, &kernel, 8.0, seed).unwrap();
        if s.users.is_zero() {
            continue;
        }
        let emp = s.users.scaled(1.0 / s.lambda);
        let c: f64 = rng.gen_range(0.05..model.qos.c_plus());
        let qos = mode_qos_all(&model, &emp, Mode::DoDir, base);
        let frustrated = qos.iter().filter(|&&q| q < c).count();
        if frustrated != 0 && frustrated != qos.len() {
            failures.push(format!(
                "partial frustration {frustrated}/{} at seed {seed}",
                qos.len()
            ));
            break;
        }
    }
    // minimizer residuals and an independent discrete oracle
    let (c, b) = (0.3, 2.0);
    let sol = minimize_pathloss_free_downlink(&model, c, b).unwrap();
    if sol.residuals.iter().any(|r| r.abs() > 1e-8) {
        failures.push(format!("residuals {:?} exceed 1e-8", sol.residuals));
    }
    let cells = model.fading.discretize(2000);
    let total: f64 = cells.iter().map(|c| c.1).sum();
    let masses: Vec<f64> = cells.iter().map(|c| c.1 / total).collect();
    let us: Vec<f64> = cells.iter().map(|c| c.0).collect();
    let target = model.base_fading_value() / (c * 2.0);
    let (_, nu, _) = dual_ascent(&masses, &[us.clone(), vec![1.0; us.len()]], &[target, b]).unwrap();
    let oracle: f64 = masses.iter().zip(&nu).map(|(&m, &v)| h_cell(v, m)).sum();
    let rel = (sol.entropy - oracle).abs() / oracle.max(1e-12);
    if rel > 0.01 {
        failures.push(format!(
            "entropy {:.6} vs oracle {oracle:.6} ({:.2}% off)",
            sol.entropy,
            100.0 * rel
        ));
    }
    report(7, "path-loss-free downlink", failures);
}

#[test]
fn criterion_08_rare_event_study() {
    let start = Instant::now();
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../scenarios/hertzian-disk.scn");
    let model = sirnet::scenario::load_scenario(path).unwrap();
    let mut failures = Vec::new();
    let report_mc =
        rare_event_mc(&model, 50.0, 1_000_000, 1.1, 0.9875, Mode::UpDir, 2026).unwrap();
    let freq = report_mc.hit_frequency();
    if !(2e-6..=5e-5).contains(&freq) {
        failures.push(format!("hit frequency {freq:.3e} outside [2e-6, 5e-5]"));
    }
    let tail = poisson_tail(50.0, 80.0).unwrap();
    if (tail - 3.436e-5).abs() > 1e-8 {
        failures.push(format!("poisson_tail(50,80) = {tail:.6e}"));
    }
    let hits = &report_mc.hits;
    if hits.is_empty() {
        failures.push("no hits recorded".into());
    } else {
        let big = hits.iter().filter(|h| h.n_users >= 80).count();
        if (big as f64) < 0.9 * hits.len() as f64 {
            failures.push(format!("only {big}/{} hits with N ≥ 80", hits.len()));
        }
        let grand = hits.iter().map(|h| h.mean_fading).sum::<f64>() / hits.len() as f64;
        if !(1.40..=1.55).contains(&grand) {
            failures.push(format!("grand mean fading {grand:.4} outside [1.40, 1.55]"));
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    if elapsed > 600.0 {
        failures.push(format!("runtime {elapsed:.0}s > 600s"));
    }
    report(8, "rare-event study", failures);
}

#[test]
fn criterion_09_curve_properties() {
    let start = Instant::now();
    let model = hertzian_model();
    let c_plus = model.qos.c_plus();
    let mut failures = Vec::new();
    let grid: Vec<f64> = (1..=200).map(|j| c_plus * j as f64 / 200.0).collect();
    let curve = frustration_curve(&model, Mode::UpDir, &grid).unwrap();
    if curve.windows(2).any(|w| w[1].1 < w[0].1 - 1e-15) {
        failures.push("curve not nondecreasing".into());
    }
    let probe = RadialProblem::from_model(&model, 0.5 * c_plus, 0.0).unwrap();
    let ku = k_updir(&probe);
    let low = frustration_curve(&model, Mode::UpDir, &[0.5 * ku, ku]).unwrap();
    if low.iter().any(|&(_, p)| p != 0.0) {
        failures.push("p not zero at or below K_updir".into());
    }
    if (curve.last().unwrap().1 - 1.0).abs() > 1e-3 {
        failures.push(format!("p(c̃₊) = {:.6}", curve.last().unwrap().1));
    }
    let p11 = frustration_curve(&model, Mode::UpDir, &[1.1]).unwrap()[0].1;
    if p11 > 0.6 {
        failures.push(format!("p(1.1) = {p11:.4} > 0.6"));
    }
    // slope break at half the maximal SIR, against a smooth interior point
    let secant_jump = |x0: f64, h: f64| -> f64 {
        let v = frustration_curve(&model, Mode::UpDir, &[x0 - h, x0, x0 + h]).unwrap();
        ((v[2].1 - v[1].1) - (v[1].1 - v[0].1)).abs() / h
    };
    let at_kink = secant_jump(0.5 * c_plus, 0.01);
    let at_smooth = secant_jump(0.6, 0.01);
    if at_kink <= 10.0 * at_smooth {
        failures.push(format!(
            "slope jump {at_kink:.4} at c̃₊/2 not 10× the smooth-point jump {at_smooth:.4}"
        ));
    }
    let elapsed = start.elapsed().as_secs_f64();
    if elapsed >= 30.0 {
        failures.push(format!("runtime {elapsed:.0}s ≥ 30s"));
    }
    report(9, "curve properties", failures);
}

#[test]
fn criterion_10_classifier() {
    let model = hertzian_model();
    let grid = product_intensity(&model, 20, 8).unwrap();
    let base = (Point::ORIGIN, model.base_fading_value());
    let mut failures = Vec::new();

    // example 1: a-priori mass above b in every mode → sub-exponential case 2;
    // the thresholds sit strictly between every minimal SIR and the plateau
    let k = minimal_sir_vector(&model, &grid).unwrap();
    let k_top = k.iter().cloned().fold(0.0f64, f64::max);
    let c_mid = 0.5 * (k_top + model.qos.c_plus());
    let v = classify_fixed(&model, &grid, &[1e-6; 4], &[c_mid; 4]).unwrap();
    if v.verdict != Decay::Subexponential || v.case != 2 {
        failures.push(format!("case-2 example returned {v}"));
    }
    // example 2: b = 0, thresholds strictly below K, zero mass → exponential
    let below: [f64; 4] = std::array::from_fn(|i| 0.5 * k[i]);
    let v = classify_fixed(&model, &grid, &[0.0; 4], &below).unwrap();
    if v.verdict != Decay::Exponential {
        failures.push(format!("condition-(ii) example returned {v}"));
    }
    // example 3: b = 0 at the exact essential infima → sub-exponential case 5
    let at_k: [f64; 4] = std::array::from_fn(|i| {
        mode_qos_all(&model, &grid, Mode::ALL[i], base)
            .into_iter()
            .fold(f64::INFINITY, f64::min)
    });
    let v = classify_fixed(&model, &grid, &[0.0; 4], &at_k).unwrap();
    if v.verdict != Decay::Subexponential || v.case != 5 {
        failures.push(format!("case-5 example returned {v}"));
    }

    // verdict monotone in b on randomized ladders (coarser grid: the ladder
    // needs many classifier runs and each is quadratic in the cell count)
    let small = product_intensity(&model, 10, 5).unwrap();
    let mut rng = ChaCha12Rng::seed_from_u64(110);
    'ladders: for trial in 0..20 {
        let c: [f64; 4] = std::array::from_fn(|_| rng.gen_range(0.8..1.5));
        let mut seen_exponential = false;
        for step in 0..8 {
            let b = [0.3 * step as f64; 4];
            let v = classify_fixed(&model, &small, &b, &c).unwrap();
            let exp = v.verdict == Decay::Exponential;
            if seen_exponential && !exp {
                failures.push(format!("verdict flipped back at trial {trial}, step {step}"));
                break 'ladders;
            }
            seen_exponential = exp;
        }
    }

    // point-mass base fading reduces exactly to the fixed classifier
    let mut random_model = model.clone();
    random_model.base = BaseFading::Random(FadingLaw::DiscreteAtoms {
        values: vec![1.5],
        weights: vec![1.0],
    });
    let rv = classify_random_base(&random_model, &grid, &[0.5; 4], &[1.1; 4], 8).unwrap();
    let fv = classify_fixed(&model, &grid, &[0.5; 4], &[1.1; 4]).unwrap();
    if rv.per_base.len() != 1
        || rv.verdict != fv.verdict
        || rv.per_base[0].1.case != fv.case
        || rv.per_base[0].1.epsilon != fv.epsilon
    {
        failures.push("point-mass reduction differs from the fixed classifier".into());
    }
    report(10, "classifier", failures);
}
