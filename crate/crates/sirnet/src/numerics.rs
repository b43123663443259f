//! Small generic numeric kernels: Gauss–Legendre rules, root bracketing and
//! bisection, golden-section minimization, piecewise-linear densities.

use num_traits::Float;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`,
/// computed by Newton iteration on the Legendre recurrence.
pub fn gauss_legendre<F: Float>(n: usize) -> (Vec<F>, Vec<F>) {
    assert!(n >= 1);
    let one = F::one();
    let two = one + one;
    let nf = F::from(n).unwrap();
    let mut nodes = vec![F::zero(); n];
    let mut weights = vec![F::zero(); n];
    let m = (n + 1) / 2;
    for i in 0..m {
        // Chebyshev-like initial guess
        let theta = (F::from(i).unwrap() + F::from(0.75).unwrap())
            / (nf + F::from(0.5).unwrap())
            * F::from(std::f64::consts::PI).unwrap();
        let mut x = theta.cos();
        let mut pp = F::zero();
        for _ in 0..100 {
            // Legendre P_n(x) and derivative by recurrence
            let mut p0 = one;
            let mut p1 = x;
            for k in 2..=n {
                let kf = F::from(k).unwrap();
                let p2 = ((two * kf - one) * x * p1 - (kf - one) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            // n == 1: p1 = x, p0 = 1
            pp = nf * (x * p1 - p0) / (x * x - one);
            let dx = p1 / pp;
            x = x - dx;
            if dx.abs() < F::from(1e-15).unwrap() {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = two / ((one - x * x) * pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Maps a `[-1,1]` rule onto `[a, b]`.
pub fn map_rule<F: Float>(nodes: &[F], weights: &[F], a: F, b: F) -> (Vec<F>, Vec<F>) {
    let half = (b - a) / (F::one() + F::one());
    let mid = (b + a) / (F::one() + F::one());
    let xs = nodes.iter().map(|&t| mid + half * t).collect();
    let ws = weights.iter().map(|&w| w * half).collect();
    (xs, ws)
}

/// Bisection on a bracketing interval; `f(lo)` and `f(hi)` must have opposite
/// signs (zero endpoints accepted).
pub fn bisect<F: Float>(mut f: impl FnMut(F) -> F, mut lo: F, mut hi: F, iters: usize) -> F {
    let mut flo = f(lo);
    let fhi = f(hi);
    debug_assert!(flo * fhi <= F::zero(), "bisect: no sign change in bracket");
    if flo == F::zero() {
        return lo;
    }
    if fhi == F::zero() {
        return hi;
    }
    let two = F::one() + F::one();
    for _ in 0..iters {
        let mid = (lo + hi) / two;
        let fm = f(mid);
        if fm == F::zero() {
            return mid;
        }
        if (fm > F::zero()) == (flo > F::zero()) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    (lo + hi) / two
}

/// Expands a bracket for an increasing-trend function until the sign changes.
/// Returns `None` if no sign change is found within the expansion budget.
pub fn expand_bracket<F: Float>(
    mut f: impl FnMut(F) -> F,
    mut lo: F,
    mut hi: F,
    max_doublings: usize,
) -> Option<(F, F)> {
    let mut flo = f(lo);
    let mut fhi = f(hi);
    let two = F::one() + F::one();
    for _ in 0..max_doublings {
        if flo * fhi <= F::zero() {
            return Some((lo, hi));
        }
        let width = hi - lo;
        if flo > F::zero() {
            lo = lo - width * two;
            flo = f(lo);
        } else {
            hi = hi + width * two;
            fhi = f(hi);
        }
    }
    if flo * fhi <= F::zero() {
        Some((lo, hi))
    } else {
        None
    }
}

/// Golden-section search for the minimum of a unimodal function on `[a, b]`.
pub fn golden_min(mut f: impl FnMut(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> f64 {
    let inv_phi = 0.618_033_988_749_894_9_f64;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..iters {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    0.5 * (a + b)
}

/// A nonnegative piecewise-linear function given by sorted knots `(x, y)`.
/// Doubles as a density: integrals, CDF and quantiles are exact closed forms.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear {
    pub pts: Vec<(f64, f64)>,
}

impl PiecewiseLinear {
    pub fn new(pts: Vec<(f64, f64)>) -> Self {
        assert!(pts.len() >= 2, "piecewise-linear needs at least two knots");
        assert!(
            pts.windows(2).all(|w| w[0].0 < w[1].0),
            "knots must be strictly increasing"
        );
        PiecewiseLinear { pts }
    }

    pub fn constant(a: f64, b: f64, y: f64) -> Self {
        Self::new(vec![(a, y), (b, y)])
    }

    pub fn lo(&self) -> f64 {
        self.pts[0].0
    }

    pub fn hi(&self) -> f64 {
        self.pts[self.pts.len() - 1].0
    }

    pub fn eval(&self, x: f64) -> f64 {
        let pts = &self.pts;
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

    /// Exact integral over `[a, b] ∩ [lo, hi]`.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        let a = a.max(self.lo());
        let b = b.min(self.hi());
        if b <= a {
            return 0.0;
        }
        let mut acc = 0.0;
        for w in self.pts.windows(2) {
            let (x0, _) = w[0];
            let (x1, _) = w[1];
            let s = a.max(x0);
            let t = b.min(x1);
            if t > s {
                acc += 0.5 * (self.eval(s) + self.eval(t)) * (t - s);
            }
        }
        acc
    }

    /// Exact first moment `∫ x f(x) dx` over `[a, b]`.
    pub fn moment1(&self, a: f64, b: f64) -> f64 {
        let a = a.max(self.lo());
        let b = b.min(self.hi());
        if b <= a {
            return 0.0;
        }
        let mut acc = 0.0;
        for w in self.pts.windows(2) {
            let (x0, _) = w[0];
            let (x1, _) = w[1];
            let s = a.max(x0);
            let t = b.min(x1);
            if t > s {
                // linear y(x) = y0 + m (x - s) on [s, t]
                let y0 = self.eval(s);
                let y1 = self.eval(t);
                let d = t - s;
                let m = (y1 - y0) / d;
                // ∫ x (y0 + m (x - s)) dx
                acc += y0 * 0.5 * (t * t - s * s)
                    + m * ((t * t * t - s * s * s) / 3.0 - s * 0.5 * (t * t - s * s));
            }
        }
        acc
    }

    pub fn total(&self) -> f64 {
        self.integral(self.lo(), self.hi())
    }

    /// Quantile of the normalized density: smallest `x` with `∫_{lo}^{x} ∝ p`.
    pub fn quantile(&self, p: f64) -> f64 {
        let total = self.total();
        debug_assert!(total > 0.0);
        let target = p.clamp(0.0, 1.0) * total;
        let nseg = self.pts.len() - 1;
        let mut acc = 0.0;
        for (i, w) in self.pts.windows(2).enumerate() {
            let (x0, y0) = w[0];
            let (x1, y1) = w[1];
            let d = x1 - x0;
            let seg = 0.5 * (y0 + y1) * d;
            if acc + seg >= target || i == nseg - 1 {
                let rest = target - acc;
                // solve y0 t + (y1-y0) t^2 / (2d) = rest for t in [0, d]
                let m = (y1 - y0) / d;
                let t = if m.abs() < 1e-14 * (y0.abs() + 1.0) {
                    if y0 > 0.0 {
                        rest / y0
                    } else {
                        d
                    }
                } else {
                    let disc = (y0 * y0 + 2.0 * m * rest).max(0.0);
                    (disc.sqrt() - y0) / m
                };
                return (x0 + t.clamp(0.0, d)).min(x1);
            }
            acc += seg;
        }
        self.hi()
    }

    /// CDF of the normalized density.
    pub fn cdf(&self, x: f64) -> f64 {
        (self.integral(self.lo(), x) / self.total()).clamp(0.0, 1.0)
    }

    /// Knot abscissae (integration breakpoints).
    pub fn knots(&self) -> impl Iterator<Item = f64> + '_ {
        self.pts.iter().map(|p| p.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn gl_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre::<f64>(8);
        // degree 15 polynomial x^14 over [-1,1]: 2/15
        let val: f64 = x.iter().zip(&w).map(|(&x, &w)| w * x.powi(14)).sum();
        assert_abs_diff_eq!(val, 2.0 / 15.0, epsilon = 1e-13);
        let (x, w) = map_rule(&x, &w, 0.0, 2.0);
        let val: f64 = x.iter().zip(&w).map(|(&x, &w)| w * x * x).sum();
        assert_abs_diff_eq!(val, 8.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn gl_generic_f32() {
        let (x, w) = gauss_legendre::<f32>(4);
        let val: f32 = x.iter().zip(&w).map(|(&x, &w)| w * x * x).sum();
        assert!((val - 2.0 / 3.0).abs() < 1e-5);
    }

    #[test]
    fn bisect_finds_root() {
        let r = bisect(|x: f64| x * x - 2.0, 0.0, 2.0, 80);
        assert_abs_diff_eq!(r, 2f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn piecewise_linear_quantiles_invert_cdf() {
        let f = PiecewiseLinear::new(vec![(0.0, 0.0), (1.0, 2.0)]); // triangular
        assert_abs_diff_eq!(f.total(), 1.0, epsilon = 1e-15);
        for &p in &[0.0, 0.1, 0.25, 0.5, 0.9, 1.0] {
            let x = f.quantile(p);
            assert_abs_diff_eq!(f.cdf(x), p, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(f.moment1(0.0, 1.0), 2.0 / 3.0, epsilon = 1e-14);
    }

    #[test]
    fn golden_min_quadratic() {
        let x = golden_min(|x| (x - 0.3).powi(2), -1.0, 1.0, 60);
        assert_abs_diff_eq!(x, 0.3, epsilon = 1e-9);
    }
}
