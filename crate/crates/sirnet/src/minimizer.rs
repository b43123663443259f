//! Constrained relative-entropy minimizers for frustration events: the
//! radial direct-uplink family, its b↓0 boundary limit, the path-loss-free
//! direct-downlink family, and an independent brute-force grid oracle used to
//! cross-validate all of them.
//!
//! The direct-uplink minimizer has the exponential-tilt form
//! `h(s,u) = q(s) f(u) exp(β ℓ(s)u + δ·1{ℓ(s)u < α})` with multipliers
//! `(β, δ)` solving the interference constraint `∬ uℓ h = α/c` and the
//! frustrated-mass constraint `∬_{ℓu<α} h = b`; the outer optimization runs
//! over the interference level `α`.

use crate::model::{
    NetworkModel, PathLoss, QosFunction, Window,
};
use crate::numerics::{bisect, expand_bracket, gauss_legendre, golden_min, map_rule, PiecewiseLinear};
use crate::{Error, Result};
use std::io::Write;

/// Radial form of the direct-uplink problem: everything depends on the
/// distance `s` to the base station and the fading `u` only.
#[derive(Debug, Clone)]
pub struct RadialProblem {
    /// Radial intensity density `q(s)` on `[0, r]` (integrates to `μ(W)`).
    pub q: PiecewiseLinear,
    /// Normalized fading density on `[F_min, F_max]`.
    pub f: PiecewiseLinear,
    pub path_loss: PathLoss,
    /// SIR threshold, in `(0, c̃₊)`.
    pub c: f64,
    /// Frustrated-mass target `b ≥ 0`.
    pub b: f64,
    pub r: f64,
}

impl RadialProblem {
    pub fn from_model(model: &NetworkModel, c: f64, b: f64) -> Result<Self> {
        let r = match model.window {
            Window::Disk2D { r } => r,
            _ => {
                return Err(Error::Model(
                    "the radial minimizer needs a disk window".into(),
                ))
            }
        };
        if !matches!(model.qos, QosFunction::TruncatedIdentity { .. }) {
            return Err(Error::Model(
                "the radial minimizer is derived for the truncated-identity QoS map".into(),
            ));
        }
        if !(c > 0.0 && c < model.qos.c_plus()) {
            return Err(Error::Domain(format!(
                "threshold {c} outside (0, {})",
                model.qos.c_plus()
            )));
        }
        if b < 0.0 {
            return Err(Error::Domain(format!("mass target must be nonnegative, got {b}")));
        }
        let q = model
            .intensity
            .radial_density(&model.window)
            .ok_or_else(|| Error::Model("the radial minimizer needs a radial intensity".into()))?;
        let f = model
            .fading
            .density()
            .ok_or_else(|| Error::Model("the radial minimizer needs a fading density".into()))?;
        if matches!(model.path_loss, PathLoss::Constant(_)) {
            // allowed (ℓ decreasing holds weakly), but the α interval collapses
        }
        Ok(RadialProblem { q, f, path_loss: model.path_loss.clone(), c, b, r })
    }

    pub fn f_min(&self) -> f64 {
        self.f.lo()
    }

    pub fn f_max(&self) -> f64 {
        self.f.hi()
    }

    pub fn mu_w(&self) -> f64 {
        self.q.total()
    }

    /// Admissible interference levels `(ℓ(r)F_min, ℓ(0)F_max]`.
    pub fn alpha_interval(&self) -> (f64, f64) {
        (
            self.path_loss.at(self.r) * self.f_min(),
            self.path_loss.at(0.0) * self.f_max(),
        )
    }

    /// Distance at which the (decreasing) path loss reaches `level`, if it
    /// does so inside `(0, r)`.
    fn ell_inverse(&self, level: f64) -> Option<f64> {
        let at_r = self.path_loss.at(self.r);
        let at_0 = self.path_loss.at(0.0);
        if !(level > at_r && level < at_0) {
            return None;
        }
        Some(bisect(|s| level - self.path_loss.at(s), 0.0, self.r, 100))
    }

    /// Radial quadrature nodes `(s, w·q(s))`, split at the path-loss
    /// truncation radius, the density knots, and — when an interference level
    /// `α` is given — at the radii where the frustration boundary
    /// `u*(s) = α/ℓ(s)` hits `F_min`/`F_max` (the clamp kinks).
    fn s_nodes(&self, alpha: Option<f64>) -> Vec<(f64, f64)> {
        let mut cuts: Vec<f64> = vec![0.0, self.r];
        if let Some(s0) = self.path_loss.truncation_radius() {
            if s0 > 0.0 && s0 < self.r {
                cuts.push(s0);
            }
        }
        for k in self.q.knots() {
            if k > 0.0 && k < self.r {
                cuts.push(k);
            }
        }
        if let Some(alpha) = alpha {
            for bound in [self.f_min(), self.f_max()] {
                if let Some(s) = self.ell_inverse(alpha / bound) {
                    cuts.push(s);
                }
            }
        }
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-13);
        let (t, w) = gauss_legendre::<f64>(24);
        let mut out = Vec::new();
        for seg in cuts.windows(2) {
            let (xs, ws) = map_rule(&t, &w, seg[0], seg[1]);
            for (x, wx) in xs.into_iter().zip(ws) {
                out.push((x, wx * self.q.eval(x)));
            }
        }
        out
    }
}

fn safe_exp(x: f64) -> f64 {
    x.clamp(-700.0, 700.0).exp()
}

/// Region moments of the tilt `e^{βℓ(s)u}` against `q(s)f(u)`, split by the
/// frustration region `D = {ℓ(s)u < α}`:
/// `M = ∬ qf e^{βℓu}`, `A = ∬ uℓ qf e^{βℓu}`, `B2 = ∬ (uℓ)² qf e^{βℓu}`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Moments {
    pub m_d: f64,
    pub m_c: f64,
    pub a_d: f64,
    pub a_c: f64,
    pub b2_d: f64,
    pub b2_c: f64,
}

pub fn moments(p: &RadialProblem, alpha: f64, beta: f64) -> Moments {
    let (tu, wu) = gauss_legendre::<f64>(16);
    let mut mom = Moments::default();
    let fmin = p.f_min();
    let fmax = p.f_max();
    let u_knots: Vec<f64> = p.f.knots().collect();
    for &(s, wq) in &p.s_nodes(Some(alpha)) {
        let l = p.path_loss.at(s);
        let u_star = if l > 0.0 { (alpha / l).clamp(fmin, fmax) } else { fmax };
        let mut cuts = vec![fmin, u_star, fmax];
        for &k in &u_knots {
            if k > fmin && k < fmax {
                cuts.push(k);
            }
        }
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-13);
        for seg in cuts.windows(2) {
            if seg[1] <= seg[0] {
                continue;
            }
            let mid = 0.5 * (seg[0] + seg[1]);
            let in_d = l * mid < alpha;
            let (xs, ws) = map_rule(&tu, &wu, seg[0], seg[1]);
            let mut m = 0.0;
            let mut a = 0.0;
            let mut b2 = 0.0;
            for (u, wu) in xs.into_iter().zip(ws) {
                let lu = l * u;
                let v = wq * wu * p.f.eval(u) * safe_exp(beta * lu);
                m += v;
                a += v * lu;
                b2 += v * lu * lu;
            }
            if in_d {
                mom.m_d += m;
                mom.a_d += a;
                mom.b2_d += b2;
            } else {
                mom.m_c += m;
                mom.a_c += a;
                mom.b2_c += b2;
            }
        }
    }
    mom
}

/// A-priori interference `I₀ = ∬ uℓ(s) q f ds du` (interference of `μ′` at
/// the origin).
pub fn prior_interference(p: &RadialProblem) -> f64 {
    let m = moments(p, p.alpha_interval().0, 0.0);
    m.a_d + m.a_c
}

/// A-priori frustrated mass `G(μ′, τ_c, up-dir)(𝗪)`: mass where
/// `ℓ(s)u / I₀ < c`.
pub fn prior_frustrated_mass(p: &RadialProblem) -> f64 {
    let i0 = prior_interference(p);
    moments(p, p.c * i0, 0.0).m_d
}

/// Constraint residuals of the multiplier pair at `(α, β, δ)`:
/// `(t·A_D + A_C − α/c, t·M_D − b)` with `t = e^δ`.
fn constraint_values(p: &RadialProblem, alpha: f64, beta: f64, delta: f64) -> (f64, f64, Moments) {
    let mom = moments(p, alpha, beta);
    let t = safe_exp(delta);
    (
        t * mom.a_d + mom.a_c - alpha / p.c,
        t * mom.m_d - p.b,
        mom,
    )
}

/// Solves the two integral constraints for `(β, δ)` at a fixed `α` by damped
/// Newton with the analytic Jacobian, falling back to nested bisection.
pub fn solve_multipliers(p: &RadialProblem, alpha: f64) -> Result<(f64, f64)> {
    let (lo, hi) = p.alpha_interval();
    if !(alpha > lo && alpha <= hi) {
        return Err(Error::Domain(format!(
            "alpha {alpha} outside ({lo}, {hi}]"
        )));
    }
    let scale1 = (alpha / p.c).abs().max(1.0);
    let scale2 = p.b.max(1e-3);
    let tol1 = 1e-11 * scale1;
    let tol2 = 1e-11 * scale2;
    let mut beta = 0.0f64;
    let mut delta = 0.0f64;
    let (mut f1, mut f2, _) = constraint_values(p, alpha, beta, delta);
    let mut norm = (f1 / scale1).hypot(f2 / scale2);
    let mut converged = false;
    for _ in 0..80 {
        if f1.abs() <= tol1 && f2.abs() <= tol2 {
            converged = true;
            break;
        }
        let mom = moments(p, alpha, beta);
        let t = safe_exp(delta);
        let j11 = t * mom.b2_d + mom.b2_c;
        let j12 = t * mom.a_d;
        let j21 = t * mom.a_d;
        let j22 = t * mom.m_d;
        let det = j11 * j22 - j12 * j21;
        if det.abs() < 1e-300 {
            break;
        }
        let db = (-f1 * j22 + f2 * j12) / det;
        let dd = (f1 * j21 - f2 * j11) / det;
        // step halving until the scaled residual norm decreases
        let mut step = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let nb = beta + step * db;
            let nd = (delta + step * dd).clamp(-60.0, 60.0);
            let (g1, g2, _) = constraint_values(p, alpha, nb, nd);
            let n2 = (g1 / scale1).hypot(g2 / scale2);
            if n2 < norm {
                beta = nb;
                delta = nd;
                f1 = g1;
                f2 = g2;
                norm = n2;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    if converged || (f1.abs() <= 1e-9 * scale1 && f2.abs() <= 1e-9 * scale2) {
        return Ok((beta, delta));
    }
    solve_multipliers_bisection(p, alpha)
}

/// Independent nested-bisection path: the interference constraint is
/// strictly increasing in `β` for fixed `δ`, and the profiled frustrated
/// mass is increasing in `δ`.
pub fn solve_multipliers_bisection(p: &RadialProblem, alpha: f64) -> Result<(f64, f64)> {
    let inner_beta = |delta: f64| -> Option<f64> {
        let f = |beta: f64| constraint_values(p, alpha, beta, delta).0;
        let (lo, hi) = expand_bracket(f, -1.0, 1.0, 60)?;
        Some(bisect(f, lo, hi, 200))
    };
    let outer = |delta: f64| -> f64 {
        match inner_beta(delta) {
            Some(beta) => constraint_values(p, alpha, beta, delta).1,
            None => f64::NAN,
        }
    };
    let (lo, hi) = expand_bracket(outer, -1.0, 1.0, 60)
        .ok_or_else(|| Error::Infeasible(format!("no multiplier bracket at alpha {alpha}")))?;
    let delta = bisect(outer, lo, hi, 200);
    let beta = inner_beta(delta)
        .ok_or_else(|| Error::Solver(format!("inner bisection failed at alpha {alpha}")))?;
    let (f1, f2, _) = constraint_values(p, alpha, beta, delta);
    let ok1 = f1.abs() <= 1e-8 * (alpha / p.c).abs().max(1.0);
    let ok2 = f2.abs() <= 1e-8 * p.b.max(1e-3);
    if ok1 && ok2 {
        Ok((beta, delta))
    } else {
        Err(Error::Solver(format!(
            "bisection stalled at alpha {alpha}: residuals ({f1:.3e}, {f2:.3e})"
        )))
    }
}

/// Entropic cost `γ_int(α)` of the tilted density at `(α, β, δ)`:
/// `β(tA_D + A_C) + δ·tM_D − ν(𝗪) + μ(𝗪)`.
pub fn entropic_cost(p: &RadialProblem, alpha: f64, beta: f64, delta: f64) -> f64 {
    let mom = moments(p, alpha, beta);
    let t = safe_exp(delta);
    let nu_mass = t * mom.m_d + mom.m_c;
    (beta * (t * mom.a_d + mom.a_c) + delta * t * mom.m_d - nu_mass + p.mu_w()).max(0.0)
}

/// Which exponential-tilt family a solution belongs to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tilt {
    /// The a-priori measure `μ′` itself (likely regime).
    Prior,
    /// `exp(β ℓ(s)u + δ·1{ℓ(s)u < α})`.
    DirectUplink { beta: f64, delta: f64 },
    /// b = 0 boundary family `exp(γ₀ ℓ(s)u)`.
    BoundaryZero { gamma0: f64 },
    /// Path-loss-free downlink family `exp(γ u + δ)`.
    PathLossFree { gamma: f64, delta: f64 },
}

#[derive(Debug, Clone)]
pub struct MinimizerSolution {
    /// Optimal interference level (where applicable).
    pub alpha_min: f64,
    pub tilt: Tilt,
    /// Achieved relative entropy (the rate-function value).
    pub entropy: f64,
    /// Absolute residuals of the active constraints.
    pub residuals: Vec<f64>,
    /// Whether the target event is unlikely under `μ′` (tilting needed).
    pub unlikely: bool,
}

impl MinimizerSolution {
    /// The density ratio `h(s,u) / (q(s) f(u))`.
    pub fn density_factor(&self, ell: f64, u: f64) -> f64 {
        match self.tilt {
            Tilt::Prior => 1.0,
            Tilt::DirectUplink { beta, delta } => {
                let lu = ell * u;
                safe_exp(beta * lu + if lu < self.alpha_min { delta } else { 0.0 })
            }
            Tilt::BoundaryZero { gamma0 } => safe_exp(gamma0 * ell * u),
            Tilt::PathLossFree { gamma, delta } => safe_exp(gamma * u + delta),
        }
    }

    /// Minimizing density `h(s, u)` for a radial problem.
    pub fn density(&self, p: &RadialProblem, s: f64, u: f64) -> f64 {
        p.q.eval(s) * p.f.eval(u) * self.density_factor(p.path_loss.at(s), u)
    }

    /// CSV dump on an `ns × nu` grid: `s,u,density` after metadata comments.
    pub fn dump_csv(
        &self,
        p: &RadialProblem,
        ns: usize,
        nu: usize,
        mut out: impl Write,
    ) -> std::io::Result<()> {
        let (beta, delta) = match self.tilt {
            Tilt::DirectUplink { beta, delta } => (beta, delta),
            Tilt::BoundaryZero { gamma0 } => (gamma0, 0.0),
            Tilt::PathLossFree { gamma, delta } => (gamma, delta),
            Tilt::Prior => (0.0, 0.0),
        };
        writeln!(
            out,
            "# alpha_min={}, beta={}, delta={}, entropy={}",
            self.alpha_min, beta, delta, self.entropy
        )?;
        writeln!(out, "s,u,density")?;
        for i in 0..ns {
            let s = p.r * (i as f64 + 0.5) / ns as f64;
            for j in 0..nu {
                let u = p.f_min() + (p.f_max() - p.f_min()) * (j as f64 + 0.5) / nu as f64;
                writeln!(out, "{s},{u},{}", self.density(p, s, u))?;
            }
        }
        Ok(())
    }
}

/// Minimizes the rate function for the direct-uplink frustration event
/// `{G(𝐋_λ, τ_c, up-dir)(𝗪) ≥ b}`: α-scan (64-point coarse grid, golden
/// refinement on the best bracket) over the multiplier solver.
pub fn minimize_direct_uplink(p: &RadialProblem) -> Result<MinimizerSolution> {
    if p.b <= 0.0 {
        return Err(Error::Parameter(
            "minimize_direct_uplink needs b > 0 (use the b = 0 boundary solver)".into(),
        ));
    }
    let i0 = prior_interference(p);
    let b_star = prior_frustrated_mass(p);
    if p.b <= b_star + 1e-12 {
        // the event is a-priori likely: the minimizer is μ′ itself
        return Ok(MinimizerSolution {
            alpha_min: p.c * i0,
            tilt: Tilt::Prior,
            entropy: 0.0,
            residuals: vec![0.0, 0.0],
            unlikely: false,
        });
    }
    let (lo, hi) = p.alpha_interval();
    let n = 64;
    let mut best: Option<(f64, f64)> = None; // (cost, alpha)
    let mut costs = vec![f64::INFINITY; n + 1];
    for j in 1..=n {
        let alpha = lo + (hi - lo) * j as f64 / n as f64;
        if let Ok((beta, delta)) = solve_multipliers(p, alpha) {
            let cost = entropic_cost(p, alpha, beta, delta);
            costs[j] = cost;
            if best.map_or(true, |(bc, _)| cost < bc) {
                best = Some((cost, alpha));
            }
        }
    }
    let (_, alpha_best) = best.ok_or_else(|| {
        Error::Infeasible("no admissible interference level solved the constraints".into())
    })?;
    let width = (hi - lo) / n as f64;
    let bracket_lo = (alpha_best - width).max(lo + 1e-9 * (hi - lo));
    let bracket_hi = (alpha_best + width).min(hi);
    let cost_of = |alpha: f64| -> f64 {
        match solve_multipliers(p, alpha) {
            Ok((beta, delta)) => entropic_cost(p, alpha, beta, delta),
            Err(_) => f64::INFINITY,
        }
    };
    let alpha_min = golden_min(cost_of, bracket_lo, bracket_hi, 80);
    let alpha_min = if cost_of(alpha_min) <= cost_of(alpha_best) { alpha_min } else { alpha_best };
    let (beta, delta) = solve_multipliers(p, alpha_min)?;
    let (f1, f2, _) = constraint_values(p, alpha_min, beta, delta);
    Ok(MinimizerSolution {
        alpha_min,
        tilt: Tilt::DirectUplink { beta, delta },
        entropy: entropic_cost(p, alpha_min, beta, delta),
        residuals: vec![f1.abs(), f2.abs()],
        unlikely: true,
    })
}

/// The minimal SIR threshold of the direct uplink, computed with the same
/// quadrature as the solvers so boundary identities hold to solver tolerance:
/// `K_updir = ℓ(r) F_min / I₀` (truncated-identity QoS).
pub fn k_updir(p: &RadialProblem) -> f64 {
    p.alpha_interval().0 / prior_interference(p)
}

/// Boundary family at `b = 0`: pins the frustration region to the outer
/// boundary (`α₀ = ℓ(r) F_min`) and solves the single interference
/// constraint `∬ uℓ q f e^{γ₀ ℓu} = α₀ / c` for `γ₀`.
pub fn minimize_b0(p: &RadialProblem) -> Result<MinimizerSolution> {
    let alpha0 = p.alpha_interval().0;
    let target = alpha0 / p.c;
    let i0 = prior_interference(p);
    if target < i0 - 1e-12 {
        // c above K_updir: the a-priori frustrated mass is already positive,
        // the zero-mass event needs no tilt
        return Ok(MinimizerSolution {
            alpha_min: alpha0,
            tilt: Tilt::Prior,
            entropy: 0.0,
            residuals: vec![0.0],
            unlikely: false,
        });
    }
    let g = |gamma: f64| {
        let m = moments(p, alpha0, gamma);
        m.a_d + m.a_c - target
    };
    let gamma0 = if g(0.0).abs() <= 1e-12 * target.max(1.0) {
        0.0
    } else {
        let (lo, hi) = expand_bracket(g, 0.0, 1.0, 60)
            .ok_or_else(|| Error::Infeasible("interference target unreachable".into()))?;
        bisect(g, lo, hi, 200)
    };
    let mom = moments(p, alpha0, gamma0);
    let nu_mass = mom.m_d + mom.m_c;
    Ok(MinimizerSolution {
        alpha_min: alpha0,
        tilt: Tilt::BoundaryZero { gamma0 },
        entropy: (gamma0 * (mom.a_d + mom.a_c) - nu_mass + p.mu_w()).max(0.0),
        residuals: vec![g(gamma0).abs()],
        unlikely: gamma0 > 0.0,
    })
}

/// Exponential-moment integrals of the fading density: `Z = ∫ f e^{γu}`,
/// `U = ∫ u f e^{γu}`.
fn fading_exp_moments(f: &PiecewiseLinear, gamma: f64) -> (f64, f64) {
    let (t, w) = gauss_legendre::<f64>(32);
    let knots: Vec<f64> = f.knots().collect();
    let mut z = 0.0;
    let mut u1 = 0.0;
    for seg in knots.windows(2) {
        let (xs, ws) = map_rule(&t, &w, seg[0], seg[1]);
        for (u, wu) in xs.into_iter().zip(ws) {
            let v = wu * f.eval(u) * safe_exp(gamma * u);
            z += v;
            u1 += v * u;
        }
    }
    (z, u1)
}

/// Path-loss-free direct-downlink minimizer for `ℓ ≡ K`: every user shares
/// one SIR, frustration is all-or-none, and the minimizing density is the
/// spatially flat tilt `q f e^{γu + δ}` meeting the interference level
/// `∬ u h ≥ F_o/(cK)` and the mass level `∬ h ≥ b`.
pub fn minimize_pathloss_free_downlink(
    model: &NetworkModel,
    c: f64,
    b: f64,
) -> Result<MinimizerSolution> {
    let k = match model.path_loss {
        PathLoss::Constant(k) => k,
        _ => {
            return Err(Error::Model(
                "the path-loss-free solver needs a constant path loss".into(),
            ))
        }
    };
    if !matches!(model.qos, QosFunction::TruncatedIdentity { .. }) {
        return Err(Error::Model(
            "the path-loss-free solver is derived for the truncated-identity QoS map".into(),
        ));
    }
    if !(c > 0.0 && c < model.qos.c_plus()) {
        return Err(Error::Domain(format!(
            "threshold {c} outside (0, {})",
            model.qos.c_plus()
        )));
    }
    if b < 0.0 {
        return Err(Error::Domain(format!("mass target must be nonnegative, got {b}")));
    }
    let f = model
        .fading
        .density()
        .ok_or_else(|| Error::Model("the path-loss-free solver needs a fading density".into()))?;
    let mu_w = model.intensity.mass();
    if mu_w <= 0.0 {
        return Err(Error::Model("μ(W) must be positive".into()));
    }
    let f_o = model.base_fading_value();
    let target = f_o / (c * k);
    let (fmin, fmax) = (f.lo(), f.hi());
    let mean = model.fading.mean();
    let entropy_of = |gamma: f64, delta: f64| -> f64 {
        let (z, u1) = fading_exp_moments(&f, gamma);
        let t = safe_exp(delta);
        let nu_mass = t * mu_w * z;
        (gamma * t * mu_w * u1 + delta * nu_mass - nu_mass + mu_w).max(0.0)
    };
    // likely regime: μ′ itself satisfies both constraint levels
    if mu_w * mean >= target - 1e-12 && mu_w >= b - 1e-12 {
        return Ok(MinimizerSolution {
            alpha_min: target,
            tilt: Tilt::Prior,
            entropy: 0.0,
            residuals: vec![0.0, 0.0],
            unlikely: false,
        });
    }
    // single-constraint branch: interference at equality, mass slack
    let interference_eq = |gamma: f64| mu_w * fading_exp_moments(&f, gamma).1 - target;
    let (lo, hi) = expand_bracket(interference_eq, -1.0, 1.0, 80)
        .ok_or_else(|| Error::Infeasible("interference level unreachable".into()))?;
    let gamma = bisect(interference_eq, lo, hi, 200);
    let z = mu_w * fading_exp_moments(&f, gamma).0;
    if z >= b - 1e-12 {
        return Ok(MinimizerSolution {
            alpha_min: target,
            tilt: Tilt::PathLossFree { gamma, delta: 0.0 },
            entropy: entropy_of(gamma, 0.0),
            residuals: vec![interference_eq(gamma).abs(), 0.0],
            unlikely: !(gamma == 0.0 && mu_w >= b),
        });
    }
    // both constraints active: the mean fading must equal target/b
    let ratio = target / b;
    if ratio <= fmin + 1e-14 {
        // mass dominates; interference follows automatically from u ≥ F_min
        let delta = (b / mu_w).ln();
        return Ok(MinimizerSolution {
            alpha_min: target,
            tilt: Tilt::PathLossFree { gamma: 0.0, delta },
            entropy: entropy_of(0.0, delta),
            residuals: vec![0.0, (safe_exp(delta) * mu_w - b).abs()],
            unlikely: true,
        });
    }
    if ratio >= fmax - 1e-14 {
        return Err(Error::Infeasible(format!(
            "required mean fading {ratio} at or above F_max = {fmax}"
        )));
    }
    let mean_eq = |gamma: f64| {
        let (z, u1) = fading_exp_moments(&f, gamma);
        u1 / z - ratio
    };
    let (lo, hi) = expand_bracket(mean_eq, -1.0, 1.0, 80)
        .ok_or_else(|| Error::Infeasible("mean-fading equation has no bracket".into()))?;
    let gamma = bisect(mean_eq, lo, hi, 200);
    let z = fading_exp_moments(&f, gamma).0;
    let delta = (b / (mu_w * z)).ln();
    let t = safe_exp(delta);
    let res_mass = (t * mu_w * z - b).abs();
    let res_intf = (t * mu_w * fading_exp_moments(&f, gamma).1 - target).abs();
    Ok(MinimizerSolution {
        alpha_min: target,
        tilt: Tilt::PathLossFree { gamma, delta },
        entropy: entropy_of(gamma, delta),
        residuals: vec![res_intf, res_mass],
        unlikely: true,
    })
}

// ---------------------------------------------------------------------------
// Brute-force grid oracle
// ---------------------------------------------------------------------------

/// One dual coordinate of the oracle: a μ′ grid cell (or frustration-split
/// sub-cell) with its exact prior mass and cell-averaged interference
/// coefficient.
#[derive(Debug, Clone)]
pub struct OracleCell {
    pub s: f64,
    pub u: f64,
    pub mass: f64,
    /// Cell average of `uℓ(s)` under μ′.
    pub a: f64,
    pub frustrated: bool,
}

#[derive(Debug, Clone)]
pub struct OracleSolution {
    pub entropy: f64,
    /// Multipliers of (interference, frustrated-mass).
    pub lambda: [f64; 2],
    pub cells: Vec<OracleCell>,
    /// Optimal cell masses.
    pub nu: Vec<f64>,
    pub residuals: Vec<f64>,
}

/// Builds the split-cell representation of μ′ at level `α`: each radial ×
/// fading cell is cut along `ℓ(s)u = α`, with exact `u`-integrals of the
/// piecewise-linear fading density and a 12-point radial sub-rule, so the
/// frustration indicator is exact per sub-cell.
pub fn build_oracle_cells(p: &RadialProblem, alpha: f64, ns: usize, nu: usize) -> Vec<OracleCell> {
    let (tg, wg) = gauss_legendre::<f64>(12);
    let fmin = p.f_min();
    let fmax = p.f_max();
    let mut cells = Vec::new();
    for i in 0..ns {
        let s0 = p.r * i as f64 / ns as f64;
        let s1 = p.r * (i + 1) as f64 / ns as f64;
        let (xs, ws) = map_rule(&tg, &wg, s0, s1);
        for j in 0..nu {
            let u0 = fmin + (fmax - fmin) * j as f64 / nu as f64;
            let u1 = fmin + (fmax - fmin) * (j + 1) as f64 / nu as f64;
            // accumulate (mass, ∬ uℓ) on the frustrated and clear parts
            let mut acc = [(0.0f64, 0.0f64); 2]; // [clear, frustrated]
            for (s, wq) in xs.iter().zip(&ws) {
                let l = p.path_loss.at(*s);
                let w = wq * p.q.eval(*s);
                let u_star = if l > 0.0 { (alpha / l).clamp(u0, u1) } else { u1 };
                // frustrated: u < u_star
                let m_f = p.f.integral(u0, u_star);
                let a_f = l * p.f.moment1(u0, u_star);
                let m_c = p.f.integral(u_star, u1);
                let a_c = l * p.f.moment1(u_star, u1);
                acc[1].0 += w * m_f;
                acc[1].1 += w * a_f;
                acc[0].0 += w * m_c;
                acc[0].1 += w * a_c;
            }
            for (part, &(m, a)) in acc.iter().enumerate() {
                if m > 1e-300 {
                    cells.push(OracleCell {
                        s: 0.5 * (s0 + s1),
                        u: 0.5 * (u0 + u1),
                        mass: m,
                        a: a / m,
                        frustrated: part == 1,
                    });
                }
            }
        }
    }
    cells
}

/// Maximizes the dual `d(λ) = Σ λ_k t_k − Σ m_i (e^{⟨λ, a_i⟩} − 1)` of the
/// equality-constrained entropy minimization by Barzilai–Borwein gradient
/// ascent with backtracking; the primal solution is
/// `ν_i = m_i e^{⟨λ, a_i⟩}`.
pub fn dual_ascent(
    masses: &[f64],
    coeffs: &[Vec<f64>],
    targets: &[f64],
) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let kdim = targets.len();
    let n = masses.len();
    assert!(coeffs.len() == kdim && coeffs.iter().all(|c| c.len() == n));
    let value = |lam: &[f64]| -> f64 {
        let mut v = 0.0;
        for k in 0..kdim {
            v += lam[k] * targets[k];
        }
        for i in 0..n {
            let mut e = 0.0;
            for k in 0..kdim {
                e += lam[k] * coeffs[k][i];
            }
            v -= masses[i] * (safe_exp(e) - 1.0);
        }
        v
    };
    let grad = |lam: &[f64]| -> Vec<f64> {
        let mut g = targets.to_vec();
        for i in 0..n {
            let mut e = 0.0;
            for k in 0..kdim {
                e += lam[k] * coeffs[k][i];
            }
            let nu = masses[i] * safe_exp(e);
            for k in 0..kdim {
                g[k] -= coeffs[k][i] * nu;
            }
        }
        g
    };
    let scale: Vec<f64> = targets.iter().map(|t| t.abs().max(1e-3)).collect();
    let mut lam = vec![0.0; kdim];
    let mut g = grad(&lam);
    let mut val = value(&lam);
    let mut step = 1e-2;
    let mut prev_lam = lam.clone();
    let mut prev_g = g.clone();
    for iter in 0..20_000 {
        let rel: f64 = g
            .iter()
            .zip(&scale)
            .map(|(gi, s)| (gi / s).abs())
            .fold(0.0, f64::max);
        if rel < 1e-10 {
            break;
        }
        if iter > 0 {
            // Barzilai–Borwein step from the last secant pair
            let mut sy = 0.0;
            let mut ss = 0.0;
            for k in 0..kdim {
                let ds = lam[k] - prev_lam[k];
                let dy = g[k] - prev_g[k];
                sy += ds * dy;
                ss += ds * ds;
            }
            if sy.abs() > 1e-300 {
                step = (ss / sy.abs()).clamp(1e-12, 1e6);
            }
        }
        prev_lam.clone_from(&lam);
        prev_g.clone_from(&g);
        // backtracking ascent
        let mut t = step;
        let mut moved = false;
        for _ in 0..60 {
            let cand: Vec<f64> = lam.iter().zip(&g).map(|(l, gi)| l + t * gi).collect();
            let v = value(&cand);
            if v > val {
                lam = cand;
                val = v;
                moved = true;
                break;
            }
            t *= 0.5;
        }
        if !moved {
            break;
        }
        g = grad(&lam);
    }
    let nu: Vec<f64> = (0..n)
        .map(|i| {
            let mut e = 0.0;
            for k in 0..kdim {
                e += lam[k] * coeffs[k][i];
            }
            masses[i] * safe_exp(e)
        })
        .collect();
    let residuals: Vec<f64> = (0..kdim)
        .map(|k| {
            (targets[k] - coeffs[k].iter().zip(&nu).map(|(c, v)| c * v).sum::<f64>()).abs()
        })
        .collect();
    let ok = residuals
        .iter()
        .zip(&scale)
        .all(|(r, s)| r / s < 1e-6);
    if !ok {
        return Err(Error::Solver(format!(
            "dual ascent stalled: residuals {residuals:?}"
        )));
    }
    Ok((lam, nu, residuals))
}

fn oracle_entropy(masses: &[f64], nu: &[f64]) -> f64 {
    masses
        .iter()
        .zip(nu)
        .map(|(&m, &v)| crate::entropy::h_cell(v, m))
        .sum()
}

/// Entropy minimization on the split-cell grid at a fixed `α`.
pub fn oracle_at_alpha(
    p: &RadialProblem,
    alpha: f64,
    ns: usize,
    nu_cells: usize,
) -> Result<OracleSolution> {
    let cells = build_oracle_cells(p, alpha, ns, nu_cells);
    let masses: Vec<f64> = cells.iter().map(|c| c.mass).collect();
    let a: Vec<f64> = cells.iter().map(|c| c.a).collect();
    let ind: Vec<f64> = cells.iter().map(|c| if c.frustrated { 1.0 } else { 0.0 }).collect();
    let targets = [alpha / p.c, p.b];
    let (lam, nu, residuals) = dual_ascent(&masses, &[a, ind], &targets)?;
    Ok(OracleSolution {
        entropy: oracle_entropy(&masses, &nu),
        lambda: [lam[0], lam[1]],
        cells,
        nu,
        residuals,
    })
}

/// Full brute-force direct-uplink minimization: α scan (96 points plus a
/// golden refinement) entirely on the discrete grid. Independent of the
/// quadrature/Newton machinery above.
pub fn oracle_minimize_updir(
    p: &RadialProblem,
    ns: usize,
    nu_cells: usize,
) -> Result<(f64, OracleSolution)> {
    let (lo, hi) = p.alpha_interval();
    let n = 96;
    let mut best: Option<(f64, f64)> = None;
    for j in 1..=n {
        let alpha = lo + (hi - lo) * j as f64 / n as f64;
        if let Ok(sol) = oracle_at_alpha(p, alpha, ns, nu_cells) {
            if best.map_or(true, |(e, _)| sol.entropy < e) {
                best = Some((sol.entropy, alpha));
            }
        }
    }
    let (_, alpha_best) =
        best.ok_or_else(|| Error::Infeasible("oracle: no admissible alpha".into()))?;
    let width = (hi - lo) / n as f64;
    let cost = |alpha: f64| -> f64 {
        oracle_at_alpha(p, alpha, ns, nu_cells)
            .map(|s| s.entropy)
            .unwrap_or(f64::INFINITY)
    };
    let refined = golden_min(
        cost,
        (alpha_best - width).max(lo + 1e-9 * (hi - lo)),
        (alpha_best + width).min(hi),
        60,
    );
    let alpha_min = if cost(refined) <= cost(alpha_best) { refined } else { alpha_best };
    Ok((alpha_min, oracle_at_alpha(p, alpha_min, ns, nu_cells)?))
}

/// 2-D Cartesian `(x, y, u)` variant of the oracle at a fixed `α`: same
/// constraints on a square spatial grid restricted to the disk. Returns the
/// solved multipliers and per-cell density ratios `ν/μ′` keyed by position,
/// for rotational-symmetry checks.
pub struct CartesianOracle {
    pub lambda: [f64; 2],
    /// `(x, y, u, ν/μ′-ratio)` per cell.
    pub ratios: Vec<(f64, f64, f64, f64)>,
    pub entropy: f64,
}

pub fn oracle_cartesian_updir(
    p: &RadialProblem,
    alpha: f64,
    nxy: usize,
    nu_cells: usize,
) -> Result<CartesianOracle> {
    let r = p.r;
    let fmin = p.f_min();
    let fmax = p.f_max();
    // planar density: q(s) / (2πs)
    let planar = |s: f64| {
        if s < 1e-9 {
            p.q.eval(1e-9) / (2.0 * std::f64::consts::PI * 1e-9)
        } else {
            p.q.eval(s) / (2.0 * std::f64::consts::PI * s)
        }
    };
    let cell_area = (2.0 * r / nxy as f64).powi(2);
    let mut masses = Vec::new();
    let mut a = Vec::new();
    let mut ind = Vec::new();
    let mut pos = Vec::new();
    for i in 0..nxy {
        for j in 0..nxy {
            let x = -r + 2.0 * r * (i as f64 + 0.5) / nxy as f64;
            let y = -r + 2.0 * r * (j as f64 + 0.5) / nxy as f64;
            let s = (x * x + y * y).sqrt();
            if s > r {
                continue;
            }
            let l = p.path_loss.at(s);
            let w_xy = planar(s) * cell_area;
            let u_star = if l > 0.0 { (alpha / l).clamp(fmin, fmax) } else { fmax };
            for k in 0..nu_cells {
                let u0 = fmin + (fmax - fmin) * k as f64 / nu_cells as f64;
                let u1 = fmin + (fmax - fmin) * (k + 1) as f64 / nu_cells as f64;
                let cut = u_star.clamp(u0, u1);
                for (lo_u, hi_u, fr) in [(u0, cut, true), (cut, u1, false)] {
                    let m = w_xy * p.f.integral(lo_u, hi_u);
                    if m > 1e-300 {
                        let am = l * p.f.moment1(lo_u, hi_u) / p.f.integral(lo_u, hi_u);
                        masses.push(m);
                        a.push(am);
                        ind.push(if fr { 1.0 } else { 0.0 });
                        pos.push((x, y, 0.5 * (lo_u + hi_u)));
                    }
                }
            }
        }
    }
    // rescale targets to the Cartesian grid's own prior interference so the
    // discretization bias of the square grid does not shift the constraint
    let targets = [alpha / p.c, p.b];
    let (lam, nu, _res) = dual_ascent(&masses, &[a, ind], &targets)?;
    let ratios = pos
        .iter()
        .zip(nu.iter().zip(&masses))
        .map(|(&(x, y, u), (&v, &m))| (x, y, u, v / m))
        .collect();
    Ok(CartesianOracle {
        lambda: [lam[0], lam[1]],
        ratios,
        entropy: oracle_entropy(&masses, &nu),
    })
}
