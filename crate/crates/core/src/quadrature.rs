//! Gauss–Legendre rules and the substitutions used by the measure checks.

use alloc::vec::Vec;
use core::f64::consts::PI;

/// How one integration axis is discretized.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AxisScheme {
    /// Gauss–Legendre on a finite interval.
    Finite,
    /// `x = t / (1 - t)` onto `(0, 1)`, Jacobian `(1 - t)^-2`, then
    /// Gauss–Legendre.
    SemiInfinite,
}

/// Nodes per axis and the tolerance for the node-doubling convergence test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureSpec {
    pub nodes: usize,
    pub tolerance: f64,
}

impl QuadratureSpec {
    pub fn new(nodes: usize, tolerance: f64) -> crate::Result<Self> {
        if nodes < 2 || !(tolerance > 0.0) {
            return Err(crate::Error::InvalidInput(alloc::format!(
                "quadrature needs at least 2 nodes and a positive tolerance (got {nodes}, {tolerance})"
            )));
        }
        Ok(QuadratureSpec { nodes, tolerance })
    }

    pub fn doubled(self) -> Self {
        QuadratureSpec {
            nodes: 2 * self.nodes,
            ..self
        }
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            nodes: 96,
            tolerance: 1e-8,
        }
    }
}

/// Nodes and weights of a one-dimensional rule.
#[derive(Clone, Debug, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Affine image on `[a, b]`.
    pub fn on_interval(&self, a: f64, b: f64) -> Rule {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        Rule {
            nodes: self.nodes.iter().map(|&x| mid + half * x).collect(),
            weights: self.weights.iter().map(|&w| half * w).collect(),
        }
    }

    /// Rule on `(0, inf)` through `x = t / (1 - t)`.
    pub fn semi_infinite(&self) -> Rule {
        let unit = self.on_interval(0.0, 1.0);
        let nodes = unit.nodes.iter().map(|&t| t / (1.0 - t)).collect();
        let weights = unit
            .nodes
            .iter()
            .zip(&unit.weights)
            .map(|(&t, &w)| w / ((1.0 - t) * (1.0 - t)))
            .collect();
        Rule { nodes, weights }
    }
}

/// `n`-point Gauss–Legendre rule on `[-1, 1]`, nodes ascending.
///
/// Newton iteration on the three-term recurrence from the Tricomi initial
/// guesses; nodes are symmetric by construction.
pub fn gauss_legendre(n: usize) -> Rule {
    assert!(n >= 1, "Gauss–Legendre needs at least one node");
    let mut nodes = alloc::vec![0.0; n];
    let mut weights = alloc::vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = libm::cos(PI * (i as f64 + 0.75) / (nf + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                let (_, d) = legendre_with_derivative(n, x);
                dp = d;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Rule { nodes, weights }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Periodic trapezoid rule on `[0, 2 pi)` with `m` points; exact for
/// trigonometric polynomials of degree below `m`.
pub fn periodic_trapezoid(m: usize) -> Rule {
    let h = 2.0 * PI / m as f64;
    Rule {
        nodes: (0..m).map(|j| j as f64 * h).collect(),
        weights: alloc::vec![h; m],
    }
}
