//! Gauss-Legendre quadrature with convergence by node doubling.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

use crate::{Error, Result};

/// Hard cap on refinement steps before reporting non-convergence.
pub const MAX_DOUBLINGS: u32 = 6;

/// Node counts, radial cutoff and target accuracy for the integrals behind
/// the matrix elements.
///
/// `radial_nodes` is also the starting rule size of the one-dimensional
/// [`integrate`]; both node counts are doubled together by the convergence
/// loops until the estimate moves by less than `rel_tol`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub radial_nodes: usize,
    pub angular_nodes: usize,
    /// Upper limit of the radial integration, in `a_0`.
    pub radial_cutoff: f64,
    /// Target relative accuracy for the doubling loop.
    pub rel_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            radial_nodes: 256,
            angular_nodes: 128,
            radial_cutoff: 60.0,
            rel_tol: 1e-9,
        }
    }
}

impl QuadratureSpec {
    /// Defaults with the radial cutoff scaled to the final principal
    /// quantum number: the integrands decay as `e^{-r (1 + 1/n_f)}`, so
    /// `60 n_f` Bohr radii truncate below 1e-15.
    pub fn for_level(n_f: u32) -> Self {
        QuadratureSpec {
            radial_cutoff: 60.0 * f64::from(n_f.max(1)),
            ..QuadratureSpec::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.radial_nodes < 16 || self.angular_nodes < 16 {
            return Err(Error::domain(format!(
                "quadrature spec requires at least 16 nodes per axis, got {} x {}",
                self.radial_nodes, self.angular_nodes
            )));
        }
        if !(self.radial_cutoff > 0.0 && self.radial_cutoff.is_finite()) {
            return Err(Error::domain(format!(
                "radial cutoff must be positive and finite, got {}",
                self.radial_cutoff
            )));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(Error::domain(format!(
                "rel_tol must lie in (0, 1), got {}",
                self.rel_tol
            )));
        }
        Ok(())
    }
}

/// Scalar types the quadrature can accumulate: real and complex integrands.
pub trait QuadratureValue: Copy {
    fn zero() -> Self;
    fn add(self, other: Self) -> Self;
    fn sub(self, other: Self) -> Self;
    fn scale(self, w: f64) -> Self;
    fn norm(self) -> f64;
    fn to_complex(self) -> Complex64;
}

impl QuadratureValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn sub(self, other: Self) -> Self {
        self - other
    }
    fn scale(self, w: f64) -> Self {
        self * w
    }
    fn norm(self) -> f64 {
        self.abs()
    }
    fn to_complex(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
}

impl QuadratureValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn sub(self, other: Self) -> Self {
        self - other
    }
    fn scale(self, w: f64) -> Self {
        self * w
    }
    fn norm(self) -> f64 {
        Complex64::norm(self)
    }
    fn to_complex(self) -> Complex64 {
        self
    }
}

/// A converged estimate together with the effort it took.
#[derive(Debug, Clone, Copy)]
pub struct Quadrature<T> {
    pub value: T,
    /// Node count of the accepted rule (per axis product for grids).
    pub nodes: usize,
    /// Relative change between the last two refinements.
    pub rel_change: f64,
}

/// Refine an estimate by doubling until two successive levels agree to
/// `rel_tol` relatively, or fail after [`MAX_DOUBLINGS`].
///
/// `eval(level)` must evaluate the quantity with all node counts scaled by
/// `2^level` and return `(estimate, l1_scale, nodes)`. The L1 scale (the
/// same sum with every term taken in absolute value) sets the rounding
/// noise floor, so integrals that vanish through cancellation still
/// converge instead of chasing relative accuracy of pure noise.
pub fn converge_by_doubling<T, F>(rel_tol: f64, mut eval: F) -> Result<Quadrature<T>>
where
    T: QuadratureValue,
    F: FnMut(u32) -> (T, f64, usize),
{
    let mut prev = eval(0);
    for level in 1..=MAX_DOUBLINGS {
        let (value, l1, nodes) = eval(level);
        let diff = value.sub(prev.0).norm();
        let noise_floor = f64::EPSILON * l1 * (64.0 + (nodes as f64).sqrt());
        let tol_abs = (rel_tol * value.norm()).max(noise_floor);
        if diff <= tol_abs {
            let magnitude = value.norm();
            let rel_change = if magnitude > 0.0 { diff / magnitude } else { 0.0 };
            return Ok(Quadrature {
                value,
                nodes,
                rel_change,
            });
        }
        if level == MAX_DOUBLINGS {
            return Err(Error::Convergence {
                doublings: MAX_DOUBLINGS,
                nodes,
                previous: prev.0.to_complex(),
                latest: value.to_complex(),
                rel_change: diff / value.norm().max(f64::MIN_POSITIVE),
            });
        }
        prev = (value, l1, nodes);
    }
    unreachable!("doubling loop exits by return")
}

/// Gauss-Legendre integral of `f` over `[a, b]`, starting from
/// `spec.radial_nodes` nodes and refining per [`converge_by_doubling`].
pub fn integrate<T, F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Quadrature<T>>
where
    T: QuadratureValue,
    F: Fn(f64) -> T,
{
    spec.validate()?;
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::domain(format!(
            "integration interval must satisfy a < b with finite endpoints, got [{a}, {b}]"
        )));
    }
    converge_by_doubling(spec.rel_tol, |level| {
        let n = spec.radial_nodes << level;
        let rule = gauss_legendre_rule(n);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut sum = T::zero();
        let mut l1 = 0.0;
        for &(x, w) in rule.iter() {
            let v = f(mid + half * x).scale(w * half);
            l1 += v.norm();
            sum = sum.add(v);
        }
        (sum, l1, n)
    })
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`,
/// memoized process-wide (rules for the scan workloads are reused heavily).
pub fn gauss_legendre_rule(n: usize) -> Arc<Vec<(f64, f64)>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<(f64, f64)>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(rule) = cache.lock().unwrap().get(&n) {
        return Arc::clone(rule);
    }
    let rule = Arc::new(compute_rule(n));
    cache
        .lock()
        .unwrap()
        .entry(n)
        .or_insert_with(|| Arc::clone(&rule));
    rule
}

/// The `n`-point rule mapped onto `[a, b]`.
pub fn scaled_rule(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    gauss_legendre_rule(n)
        .iter()
        .map(|&(x, w)| (mid + half * x, w * half))
        .collect()
}

/// Newton iteration on `P_n` from the asymptotic root guess.
fn compute_rule(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 1, "empty quadrature rule");
    let mut pairs = vec![(0.0, 0.0); n];
    let half = n.div_ceil(2);
    for i in 0..half {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut deriv = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            deriv = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * deriv * deriv);
        pairs[n - 1 - i] = (x, w);
        pairs[i] = (-x, w);
    }
    pairs
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let fk = k as f64;
        let p2 = ((2.0 * fk - 1.0) * x * p1 - (fk - 1.0) * p0) / fk;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
