//! SIR and QoS evaluation for the four communication modes, frustration
//! measures, and the minimal SIR vector.
//!
//! Conventions: the SIR of a transmission is self-inclusive (the measure may
//! contain the transmitter itself), the receiver's fading never enters, and a
//! query against the zero measure yields the QoS plateau `c̃₊`.

use crate::measure::MarkedMeasure;
use crate::model::{NetworkModel, Point, Window};
use crate::numerics::{gauss_legendre, map_rule};
use crate::{Error, Result};

/// Communication modes in the canonical order `m₁..m₄` used for the vectors
/// `b`, `c` and `K`: relayed uplink, direct uplink, relayed downlink, direct
/// downlink.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Up,
    UpDir,
    Do,
    DoDir,
}

impl Mode {
    pub const ALL: [Mode; 4] = [Mode::Up, Mode::UpDir, Mode::Do, Mode::DoDir];

    pub fn index(self) -> usize {
        match self {
            Mode::Up => 0,
            Mode::UpDir => 1,
            Mode::Do => 2,
            Mode::DoDir => 3,
        }
    }

    pub fn is_relayed(self) -> bool {
        matches!(self, Mode::Up | Mode::Do)
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "up" => Ok(Mode::Up),
            "up-dir" | "updir" => Ok(Mode::UpDir),
            "do" => Ok(Mode::Do),
            "do-dir" | "dodir" => Ok(Mode::DoDir),
            other => Err(Error::Parameter(format!("unknown mode `{other}`"))),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Up => "up",
            Mode::UpDir => "up-dir",
            Mode::Do => "do",
            Mode::DoDir => "do-dir",
        })
    }
}

/// `∫ ℓ(|x − rx|) u ν(dx, du)` — exact weighted sum over atoms, midpoint
/// quadrature over grid cells.
pub fn interference(model: &NetworkModel, nu: &MarkedMeasure, rx: Point) -> f64 {
    nu.entries()
        .iter()
        .map(|a| a.weight * model.path_loss.at(a.pos.dist(&rx)) * a.fading)
        .sum()
}

/// SIR of a transmission `tx = (position, fading)` to `rx`, measured against
/// `ν`. `None` signals `ν(𝗪) = 0` (the QoS layer substitutes the plateau).
pub fn sir(model: &NetworkModel, tx: (Point, f64), rx: Point, nu: &MarkedMeasure) -> Option<f64> {
    let denom = interference(model, nu, rx);
    if denom == 0.0 {
        return None;
    }
    if !denom.is_finite() {
        return Some(0.0);
    }
    Some(model.path_loss.at(tx.0.dist(&rx)) * tx.1 / denom)
}

/// Direct-link QoS `D = g(SIR)`; the zero measure yields `c̃₊`.
pub fn qos_direct(model: &NetworkModel, tx: (Point, f64), rx: Point, nu: &MarkedMeasure) -> f64 {
    match sir(model, tx, rx, nu) {
        Some(s) => model.qos.g(s),
        None => model.qos.c_plus(),
    }
}

/// Two-hop QoS `Γ = min{D(tx → relay), D(relay → rx)}`; the second hop
/// transmits with the relay's fading.
pub fn qos_relay(
    model: &NetworkModel,
    tx: (Point, f64),
    relay: (Point, f64),
    rx: Point,
    nu: &MarkedMeasure,
) -> f64 {
    let hop1 = qos_direct(model, tx, relay.0, nu);
    let hop2 = qos_direct(model, relay, rx, nu);
    hop1.min(hop2)
}

/// Best-effort QoS `R = max{D, ess-sup over relays Γ}`, the essential
/// supremum taken as the max over positive-mass entries of `ν`.
pub fn qos_best(model: &NetworkModel, tx: (Point, f64), rx: Point, nu: &MarkedMeasure) -> f64 {
    let direct = qos_direct(model, tx, rx, nu);
    nu.entries()
        .iter()
        .filter(|a| a.weight > 0.0)
        .map(|a| qos_relay(model, tx, (a.pos, a.fading), rx, nu))
        .fold(direct, f64::max)
}

/// The user-side QoS of one marked point for a given mode, against the base
/// station `base = (o, F_o)`.
pub fn mode_qos(
    model: &NetworkModel,
    user: (Point, f64),
    nu: &MarkedMeasure,
    mode: Mode,
    base: (Point, f64),
) -> f64 {
    match mode {
        Mode::UpDir => qos_direct(model, user, base.0, nu),
        Mode::Up => qos_best(model, user, base.0, nu),
        Mode::DoDir => qos_direct(model, base, user.0, nu),
        Mode::Do => qos_best(model, base, user.0, nu),
    }
}

/// Raw (pre-QoS-map) mode SIR of every entry of `ν`: the max/min relay
/// combination applied to bare SIR values. Because `g` is nondecreasing it
/// commutes with max and min, so `mode_qos_all` is exactly `g` of this
/// vector — and the vector of the scaled measure `aν` is this one divided by
/// `a`, which the classifier exploits to sweep the ε ladder cheaply.
/// The zero measure yields `∞` (mapped to the plateau by `g`).
pub fn mode_raw_sir_all(
    model: &NetworkModel,
    nu: &MarkedMeasure,
    mode: Mode,
    base: (Point, f64),
) -> Vec<f64> {
    let entries = nu.entries();
    let n = entries.len();
    if nu.is_zero() {
        return vec![f64::INFINITY; n];
    }
    let l = |s: f64| model.path_loss.at(s);
    let i_base = interference(model, nu, base.0);
    match mode {
        Mode::UpDir => entries
            .iter()
            .map(|a| l(a.pos.dist(&base.0)) * a.fading / i_base)
            .collect(),
        Mode::DoDir => entries
            .iter()
            .map(|a| {
                let i_rx = interference(model, nu, a.pos);
                l(a.pos.dist(&base.0)) * base.1 / i_rx
            })
            .collect(),
        Mode::Up => {
            // hop to base, per candidate relay
            let d_up: Vec<f64> = entries
                .iter()
                .map(|a| l(a.pos.dist(&base.0)) * a.fading / i_base)
                .collect();
            let i_at: Vec<f64> = entries
                .iter()
                .map(|a| interference(model, nu, a.pos))
                .collect();
            (0..n)
                .map(|i| {
                    let a = &entries[i];
                    let mut best = d_up[i];
                    for j in 0..n {
                        if entries[j].weight <= 0.0 {
                            continue;
                        }
                        let hop1 = l(a.pos.dist(&entries[j].pos)) * a.fading / i_at[j];
                        best = best.max(hop1.min(d_up[j]));
                    }
                    best
                })
                .collect()
        }
        Mode::Do => {
            let i_at: Vec<f64> = entries
                .iter()
                .map(|a| interference(model, nu, a.pos))
                .collect();
            // base-to-relay hop
            let d_bs: Vec<f64> = entries
                .iter()
                .enumerate()
                .map(|(j, a)| l(a.pos.dist(&base.0)) * base.1 / i_at[j])
                .collect();
            (0..n)
                .map(|i| {
                    let a = &entries[i];
                    let mut best = l(a.pos.dist(&base.0)) * base.1 / i_at[i];
                    for j in 0..n {
                        if entries[j].weight <= 0.0 {
                            continue;
                        }
                        let hop2 = l(entries[j].pos.dist(&a.pos)) * entries[j].fading / i_at[i];
                        best = best.max(d_bs[j].min(hop2));
                    }
                    best
                })
                .collect()
        }
    }
}

/// Mode QoS of every entry of `ν` at once: `g` applied to the raw mode SIR.
/// Shares the per-receiver interference sums, so direct modes cost `O(n)`
/// (uplink) or `O(n²)` (downlink receivers) and relayed modes `O(n²)`
/// instead of `O(n³)`.
pub fn mode_qos_all(
    model: &NetworkModel,
    nu: &MarkedMeasure,
    mode: Mode,
    base: (Point, f64),
) -> Vec<f64> {
    mode_raw_sir_all(model, nu, mode, base)
        .into_iter()
        .map(|x| model.qos.g(x))
        .collect()
}

/// Restriction of `ν` to the points whose mode-QoS against `base` is strictly
/// below `c` (`τ_c(γ) = 1{γ < c}`).
pub fn frustration_measure(
    model: &NetworkModel,
    nu: &MarkedMeasure,
    c: f64,
    mode: Mode,
    base: (Point, f64),
) -> Result<MarkedMeasure> {
    let c_plus = model.qos.c_plus();
    if !(0.0..=c_plus).contains(&c) {
        return Err(Error::Domain(format!(
            "frustration threshold {c} outside [0, {c_plus}]"
        )));
    }
    let qos = mode_qos_all(model, nu, mode, base);
    Ok(nu.restrict(|i, _| qos[i] < c))
}

/// Accurate interference of `μ′` at the origin for radial models (splits the
/// Gauss–Legendre rule at the path-loss truncation radius); falls back to the
/// grid sum otherwise.
pub(crate) fn apriori_interference_at_origin(model: &NetworkModel, grid: &MarkedMeasure) -> f64 {
    if let (Some(q), Window::Disk2D { r }) =
        (model.intensity.radial_density(&model.window), model.window)
    {
        let mut cuts: Vec<f64> = vec![0.0, r];
        if let Some(s0) = model.path_loss.truncation_radius() {
            if s0 > 0.0 && s0 < r {
                cuts.push(s0);
            }
        }
        for k in q.knots() {
            if k > 0.0 && k < r {
                cuts.push(k);
            }
        }
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
        let (t, w) = gauss_legendre::<f64>(48);
        let mut acc = 0.0;
        for seg in cuts.windows(2) {
            let (xs, ws) = map_rule(&t, &w, seg[0], seg[1]);
            for (x, wx) in xs.iter().zip(&ws) {
                acc += wx * q.eval(*x) * model.path_loss.at(*x);
            }
        }
        acc * model.fading.mean()
    } else {
        interference(model, grid, Point::ORIGIN)
    }
}

/// Minimal SIR vector `K = (K_up, K_updir, K_do, K_dodir)`: per-mode
/// essential infima of the a-priori QoS against `μ′`, evaluated on the grid
/// representation (the direct-uplink component uses the analytic extremes so
/// boundary identities are exact).
pub fn minimal_sir_vector(
    model: &NetworkModel,
    grid: &MarkedMeasure,
) -> Result<[f64; 4]> {
    if model.intensity.mass() <= 0.0 || grid.is_zero() {
        return Err(Error::Model("degenerate model: μ(W) = 0, all QoS equal the plateau".into()));
    }
    let base = (Point::ORIGIN, model.base_fading_value());
    let g = |x: f64| model.qos.g(x);
    let l_min_tx = model.path_loss.at(model.window.max_norm());
    let f_min = model.fading.f_min();

    let i_origin = apriori_interference_at_origin(model, grid);
    let k_updir = g(l_min_tx * f_min / i_origin);

    let entries = grid.entries();
    let i_at: Vec<f64> = entries
        .iter()
        .map(|a| interference(model, grid, a.pos))
        .collect();
    let i_max = i_at.iter().cloned().fold(0.0, f64::max);
    let k_dodir = g(l_min_tx * base.1 / i_max);

    let min_over = |vals: &[f64]| -> f64 {
        vals.iter()
            .zip(entries)
            .filter(|(_, a)| a.weight > 0.0)
            .map(|(v, _)| *v)
            .fold(f64::INFINITY, f64::min)
    };
    let k_up = min_over(&mode_qos_all(model, grid, Mode::Up, base));
    let k_do = min_over(&mode_qos_all(model, grid, Mode::Do, base));
    Ok([k_up, k_updir, k_do, k_dodir])
}

/// The shortcut bound `β′₀ = min{1, ℓ_min F_min / (ρ̃₊ ℓ_max F_max)}`: a
/// direct link against `ν` with `ν(W) ≤ β′₀` is already at the plateau.
pub fn beta_prime_zero(model: &NetworkModel) -> f64 {
    let (lmin, lmax) = crate::model::extremal_path_loss(&model.path_loss, &model.window);
    let v = lmin * model.fading.f_min() / (model.qos.rho_plus() * lmax * model.fading.f_max());
    v.min(1.0)
}

#[allow(unused)]
fn _assert_send_sync(m: &NetworkModel) {
    fn check<T: Send + Sync>(_: &T) {}
    check(m);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::Atom;
    use crate::model::{BaseFading, FadingLaw, PathLoss, QosFunction, SpatialIntensity};
    use approx::assert_abs_diff_eq;

    fn model_const(k: f64) -> NetworkModel {
        NetworkModel {
            window: Window::Disk2D { r: 1.0 },
            path_loss: PathLoss::Constant(k),
            fading: FadingLaw::Uniform { a: 1.0, b: 2.0 },
            qos: QosFunction::TruncatedIdentity { k: 10.0 },
            intensity: SpatialIntensity::UniformOnWindow { mass: 1.0 },
            base: BaseFading::Fixed(1.5),
        }
    }

    fn atom(x: f64, y: f64, u: f64, w: f64) -> Atom {
        Atom { pos: Point::new2(x, y), fading: u, weight: w }
    }

    #[test]
    fn interference_single_atom() {
        let m = model_const(1.0);
        let nu = MarkedMeasure::Atoms(vec![atom(0.3, 0.0, 2.0, 0.5)]);
        assert_abs_diff_eq!(interference(&m, &nu, Point::ORIGIN), 1.0);
        assert_abs_diff_eq!(interference(&m, &MarkedMeasure::zero(), Point::ORIGIN), 0.0);
    }

    #[test]
    fn self_inclusive_sir() {
        let m = model_const(1.0);
        let lambda = 4.0;
        let nu = MarkedMeasure::Atoms(vec![atom(0.2, 0.1, 1.3, 1.0 / lambda)]);
        let s = sir(&m, (Point::new2(0.2, 0.1), 1.3), Point::ORIGIN, &nu).unwrap();
        // single self-included user: SIR = λ, the λ-normalized share is 1
        assert_abs_diff_eq!(s, lambda, epsilon = 1e-12);
        assert_abs_diff_eq!(s / lambda, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn symmetric_pair_shares_equally() {
        let m = model_const(1.0);
        let lambda = 2.0;
        let nu = MarkedMeasure::Atoms(vec![
            atom(0.4, 0.0, 1.0, 1.0 / lambda),
            atom(-0.4, 0.0, 1.0, 1.0 / lambda),
        ]);
        let s = sir(&m, (Point::new2(0.4, 0.0), 1.0), Point::ORIGIN, &nu).unwrap();
        assert_abs_diff_eq!(s / lambda, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn sir_linear_in_transmitter_fading() {
        let m = model_const(1.0);
        let nu = MarkedMeasure::Atoms(vec![atom(0.1, 0.0, 1.0, 1.0), atom(0.5, 0.2, 2.0, 0.3)]);
        let s1 = sir(&m, (Point::new2(0.1, 0.0), 1.0), Point::ORIGIN, &nu).unwrap();
        let s2 = sir(&m, (Point::new2(0.1, 0.0), 2.0), Point::ORIGIN, &nu).unwrap();
        assert_abs_diff_eq!(s2, 2.0 * s1, epsilon = 1e-12);
    }

    #[test]
    fn zero_measure_hits_plateau() {
        let m = model_const(1.0);
        let nu = MarkedMeasure::zero();
        assert_abs_diff_eq!(qos_direct(&m, (Point::new2(0.1, 0.0), 1.0), Point::ORIGIN, &nu), 10.0);
        assert_abs_diff_eq!(qos_best(&m, (Point::new2(0.1, 0.0), 1.0), Point::ORIGIN, &nu), 10.0);
    }

    #[test]
    fn relay_takes_min_of_hops() {
        let m = model_const(1.0);
        let nu = MarkedMeasure::Atoms(vec![atom(0.1, 0.0, 1.0, 2.0)]);
        let tx = (Point::new2(0.8, 0.0), 1.0);
        let relay = (Point::new2(0.4, 0.0), 2.0);
        let d1 = qos_direct(&m, tx, relay.0, &nu);
        let d2 = qos_direct(&m, relay, Point::ORIGIN, &nu);
        assert_abs_diff_eq!(qos_relay(&m, tx, relay, Point::ORIGIN, &nu), d1.min(d2));
    }

    #[test]
    fn best_qos_dominates_direct() {
        let m = NetworkModel {
            path_loss: PathLoss::TruncatedPower { cap: 5.0, exponent: 4.0 },
            ..model_const(1.0)
        };
        // relay halfway between a far transmitter and the origin is strictly
        // better on both hops than the direct link
        let nu = MarkedMeasure::Atoms(vec![
            atom(0.9, 0.0, 1.0, 0.4),
            atom(0.45, 0.0, 2.0, 0.4),
            atom(-0.3, 0.2, 1.5, 0.4),
        ]);
        let tx = (Point::new2(0.9, 0.0), 1.0);
        let direct = qos_direct(&m, tx, Point::ORIGIN, &nu);
        let best = qos_best(&m, tx, Point::ORIGIN, &nu);
        assert!(best > direct);
        // brute-force over relays agrees
        let brute = nu
            .entries()
            .iter()
            .map(|a| qos_relay(&m, tx, (a.pos, a.fading), Point::ORIGIN, &nu))
            .fold(direct, f64::max);
        assert_abs_diff_eq!(best, brute);
    }

    #[test]
    fn mode_qos_all_matches_pointwise() {
        let m = NetworkModel {
            path_loss: PathLoss::TruncatedPower { cap: 5.0, exponent: 2.0 },
            ..model_const(1.0)
        };
        let nu = MarkedMeasure::Atoms(vec![
            atom(0.9, 0.0, 1.0, 0.4),
            atom(0.45, -0.2, 2.0, 0.4),
            atom(-0.3, 0.2, 1.5, 0.4),
            atom(0.05, 0.6, 1.2, 0.1),
        ]);
        let base = (Point::ORIGIN, 1.5);
        for mode in Mode::ALL {
            let all = mode_qos_all(&m, &nu, mode, base);
            for (i, a) in nu.entries().iter().enumerate() {
                let one = mode_qos(&m, (a.pos, a.fading), &nu, mode, base);
                assert_abs_diff_eq!(all[i], one, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn frustration_monotone_in_threshold() {
        let m = model_const(1.0);
        let nu = MarkedMeasure::Atoms(vec![
            atom(0.9, 0.0, 1.0, 0.4),
            atom(0.45, -0.2, 2.0, 0.4),
            atom(-0.3, 0.2, 1.5, 0.4),
        ]);
        let base = (Point::ORIGIN, 1.5);
        let g0 = frustration_measure(&m, &nu, 0.0, Mode::UpDir, base).unwrap();
        assert!(g0.is_zero());
        let mut prev = 0.0;
        for c in [0.2, 0.5, 0.9, 1.4] {
            let mass = frustration_measure(&m, &nu, c, Mode::UpDir, base)
                .unwrap()
                .total_mass();
            assert!(mass >= prev);
            prev = mass;
        }
        assert!(frustration_measure(&m, &nu, 11.0, Mode::UpDir, base).is_err());
    }

    #[test]
    fn constant_pathloss_interference_oracle() {
        // μ(W) = 1, E[F] = 1.5 ⇒ interference K · 1.5 at any receiver
        let m = model_const(3.0);
        let grid = crate::model::product_intensity(&m, 40, 16).unwrap();
        let i = interference(&m, &grid, Point::new2(0.2, -0.1));
        assert_abs_diff_eq!(i, 4.5, epsilon = 1e-8);
    }

    #[test]
    fn minimal_sir_constant_pathloss() {
        let m = model_const(1.0);
        let grid = crate::model::product_intensity(&m, 24, 12).unwrap();
        let k = minimal_sir_vector(&m, &grid).unwrap();
        // K_updir = 1·F_min / (1·1·1.5) = 2/3, independent of F_o
        assert_abs_diff_eq!(k[1], 2.0 / 3.0, epsilon = 1e-9);
        let m2 = NetworkModel { base: BaseFading::Fixed(1.9), ..model_const(1.0) };
        let k2 = minimal_sir_vector(&m2, &grid).unwrap();
        assert_abs_diff_eq!(k[1], k2[1], epsilon = 1e-15);
    }

    #[test]
    fn degenerate_fading_reduces_to_fading_free() {
        let m = NetworkModel {
            fading: FadingLaw::DiscreteAtoms { values: vec![1.0], weights: vec![1.0] },
            base: BaseFading::Fixed(1.0),
            ..model_const(1.0)
        };
        let grid = crate::model::product_intensity(&m, 24, 1).unwrap();
        let k = minimal_sir_vector(&m, &grid).unwrap();
        // constant ℓ and F ≡ 1: SIR ≡ 1/μ(W) = 1 for every link
        assert_abs_diff_eq!(k[1], 1.0, epsilon = 1e-9);
    }
}
