//! Relative entropy of finite measures (discrete cellwise form and the
//! density form) and the Poisson Cramér rate. These are the executable faces
//! of the linear-perturbation identities the rate-function machinery rests
//! on, so the identities must hold to near machine precision.

use crate::grid::DiscretizedMeasure;
use crate::measure::MarkedMeasure;
use crate::{Error, Result};
use num_traits::Float;

/// A value in `[0, ∞]`; infinity is explicit, never a sentinel float.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyValue {
    pub value: f64,
}

impl EntropyValue {
    pub fn finite(value: f64) -> Self {
        debug_assert!(value.is_finite());
        EntropyValue { value }
    }

    pub fn infinite() -> Self {
        EntropyValue { value: f64::INFINITY }
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite()
    }
}

/// `h(a|b) = a log(a/b) − a + b` with `0 log 0 = 0` and `h(a|0) = ∞` for
/// `a > 0`.
pub fn h_cell<F: Float>(a: F, b: F) -> F {
    if a == F::zero() {
        return b;
    }
    if b == F::zero() {
        return F::infinity();
    }
    a * (a / b).ln() - a + b
}

/// Cellwise relative entropy `Σ h(ν_cell | μ_cell)` over a shared grid.
pub fn rel_entropy_discrete(
    nu: &DiscretizedMeasure,
    mu: &DiscretizedMeasure,
) -> Result<EntropyValue> {
    if nu.grid != mu.grid {
        return Err(Error::Parameter(
            "relative entropy needs both measures on the same grid".into(),
        ));
    }
    let mut acc = 0.0;
    for (id, &a) in &nu.masses {
        let b = mu.masses.get(id).copied().unwrap_or(0.0);
        if a > 0.0 && b == 0.0 {
            return Ok(EntropyValue::infinite());
        }
        acc += h_cell(a, b) - b; // μ-mass of shared cells added back below
    }
    for (_, &b) in &mu.masses {
        acc += b;
    }
    Ok(EntropyValue::finite(acc.max(0.0)))
}

/// Density form `∫ f log f dμ′ − ν(𝗪) + μ′(𝗪)` for `f = dν/dμ′` tabulated
/// on the cells of a gridded `μ′` (one value per entry, in order).
pub fn rel_entropy_density(f: &[f64], mu_prime: &MarkedMeasure) -> Result<EntropyValue> {
    let entries = mu_prime.entries();
    if f.len() != entries.len() {
        return Err(Error::Parameter(format!(
            "density has {} values for {} cells",
            f.len(),
            entries.len()
        )));
    }
    if let Some(bad) = f.iter().find(|&&v| v < 0.0 || !v.is_finite()) {
        return Err(Error::Domain(format!("density value {bad} out of range")));
    }
    let mut flogf = 0.0;
    let mut nu_mass = 0.0;
    let mut mu_mass = 0.0;
    for (v, a) in f.iter().zip(entries) {
        mu_mass += a.weight;
        nu_mass += v * a.weight;
        if *v > 0.0 {
            flogf += v * v.ln() * a.weight;
        }
    }
    Ok(EntropyValue::finite((flogf - nu_mass + mu_mass).max(0.0)))
}

/// Poisson Cramér rate `y log(y/m) − y + m` (`y = 0 ↦ m`), the Legendre
/// transform of `α ↦ m(e^α − 1)`.
pub fn poisson_rate<F: Float>(y: F, m: F) -> Result<F> {
    if !(m > F::zero()) {
        return Err(Error::Domain("poisson_rate needs a positive mean".into()));
    }
    if y < F::zero() {
        return Err(Error::Domain("poisson_rate needs a nonnegative argument".into()));
    }
    Ok(h_cell(y, m))
}
