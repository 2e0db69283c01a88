//! Quadrature certificates for the inner-product measures.
//!
//! Each realization comes with a rotation-invariant weight whose radial
//! moments must reproduce `1 / C_n^2`:
//!
//! * bessel (realization I): `(2 pi)^r int K(k;R) prod rho_i^{2n_i+1} = n! (k-1+n)! / (k-1)!`
//!   with `K(k;R) = 2 R^{k-r} K_{k-r}(2R) / (pi^r (k-1)!)`,
//! * ball (realization II): `int Sigma prod rho_i^{2n_i+1} = n! (k-1)! / ((2 pi)^r (k-1+n)!)`
//!   over the positive section of the unit ball,
//! * projective (fermionic): `int mu prod x_i^{n_i} = n! (k-1-n)! / (k-1)!` over `x_i > 0`,
//!
//! where `n!` is `n_1! ... n_r!` and `n` in a factorial is the total.
//! Every integral is evaluated at `N` and `2N` nodes per axis; disagreement
//! beyond the tolerance is reported as [`Error::NonConvergence`].

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_bigint::BigUint;
use num_complex::Complex64;

use crate::bargmann::{basis_coefficient, RealizationKind};
use crate::bessel::bessel_k;
use crate::exact::{factorial, factorial_product, ratio_to_f64, rising};
use crate::quadrature::{gauss_legendre, periodic_trapezoid, QuadratureSpec, Rule};
use crate::{Error, OccupationVector, Result, Sector, SectorParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MeasureFamily {
    BesselI,
    BallII,
    ProjectiveF,
}

impl MeasureFamily {
    pub const ALL: [MeasureFamily; 3] = [
        MeasureFamily::BesselI,
        MeasureFamily::BallII,
        MeasureFamily::ProjectiveF,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MeasureFamily::BesselI => "bessel",
            MeasureFamily::BallII => "ball",
            MeasureFamily::ProjectiveF => "projective",
        }
    }

    pub fn realization(self) -> RealizationKind {
        match self {
            MeasureFamily::BesselI => RealizationKind::BosonicI,
            MeasureFamily::BallII => RealizationKind::BosonicII,
            MeasureFamily::ProjectiveF => RealizationKind::Fermionic,
        }
    }

    pub fn sector(self) -> Sector {
        self.realization().sector()
    }

    fn check_sector(self, params: &SectorParams) -> Result<()> {
        if params.sector() != self.sector() {
            return Err(Error::IncompatibleSector(format!(
                "the {} measure belongs to the {} sector, got {}",
                self.name(),
                self.sector(),
                params.sector()
            )));
        }
        Ok(())
    }
}

/// A moment equation to certify.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentCase {
    family: MeasureFamily,
    params: SectorParams,
    n: OccupationVector,
}

impl MomentCase {
    /// Rejects cases outside the measure's integrability domain: the
    /// projective moment needs `total(n) <= k - 1`, the Bessel kernel needs
    /// `k >= r` and the ball weight needs `k >= r + 1`.
    pub fn new(family: MeasureFamily, params: SectorParams, n: OccupationVector) -> Result<Self> {
        family.check_sector(&params)?;
        params.check_state(&n)?;
        let (r, k) = (params.modes(), params.k() as usize);
        match family {
            MeasureFamily::BesselI if k < r => {
                return Err(Error::InvalidParams(format!(
                    "the Bessel kernel needs k >= r (k = {k}, r = {r})"
                )))
            }
            MeasureFamily::BesselI if r > 2 => {
                return Err(Error::InvalidParams(format!(
                    "Bessel moments are implemented for r <= 2 (r = {r})"
                )))
            }
            MeasureFamily::BallII if k <= r => {
                return Err(Error::InvalidParams(format!(
                    "the ball weight needs k >= r + 1 (k = {k}, r = {r})"
                )))
            }
            _ => {}
        }
        Ok(MomentCase { family, params, n })
    }

    pub fn family(&self) -> MeasureFamily {
        self.family
    }

    pub fn params(&self) -> &SectorParams {
        &self.params
    }

    pub fn n(&self) -> &OccupationVector {
        &self.n
    }
}

/// Outcome of one quadrature comparison.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentResult {
    pub lhs: f64,
    pub rhs: f64,
    /// `|lhs - rhs| / max(1, |rhs|)`.
    pub residual: f64,
    /// `lhs / rhs`, kept so a constant-factor mismatch is visible.
    pub ratio: f64,
    /// Nodes per axis of the accepted (finer) rule.
    pub nodes: usize,
}

impl MomentResult {
    fn new(lhs: f64, rhs: f64, nodes: usize) -> Self {
        MomentResult {
            lhs,
            rhs,
            residual: relative_residual(lhs, rhs),
            ratio: lhs / rhs,
            nodes,
        }
    }
}

fn relative_residual(value: f64, reference: f64) -> f64 {
    (value - reference).abs() / reference.abs().max(1.0)
}

/// Exact right-hand side of the moment equation.
pub fn moment_rhs(
    family: MeasureFamily,
    params: &SectorParams,
    n: &OccupationVector,
) -> Result<f64> {
    family.check_sector(params)?;
    params.check_state(n)?;
    let k = u64::from(params.k());
    let total = n.total() as u64;
    let occ = factorial_product(n.as_slice());
    Ok(match family {
        MeasureFamily::BesselI => ratio_to_f64(occ * factorial(k - 1 + total), factorial(k - 1)),
        MeasureFamily::BallII => {
            ratio_to_f64(occ * factorial(k - 1), factorial(k - 1 + total))
                / libm::pow(2.0 * PI, params.modes() as f64)
        }
        MeasureFamily::ProjectiveF => {
            ratio_to_f64(occ * factorial(k - 1 - total), factorial(k - 1))
        }
    })
}

/// Integrates over the nested region `0 < x_j < upper(x_0..x_{j-1})` with a
/// Gauss rule on each axis.
fn nested<U, F>(rule: &Rule, dims: usize, upper: &U, integrand: &F) -> f64
where
    U: Fn(&[f64]) -> f64,
    F: Fn(&[f64]) -> f64,
{
    fn go<U, F>(rule: &Rule, dims: usize, prefix: &mut Vec<f64>, upper: &U, integrand: &F) -> f64
    where
        U: Fn(&[f64]) -> f64,
        F: Fn(&[f64]) -> f64,
    {
        if prefix.len() == dims {
            return integrand(prefix);
        }
        let top = upper(prefix);
        if !(top > 0.0) {
            return 0.0;
        }
        let mut sum = 0.0;
        for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
            prefix.push(top * t);
            sum += top * w * go(rule, dims, prefix, upper, integrand);
            prefix.pop();
        }
        sum
    }
    let unit = rule.on_interval(0.0, 1.0);
    go(&unit, dims, &mut Vec::with_capacity(dims), upper, integrand)
}

/// Projective integral over `(0, inf)^r`. Axis `j` is mapped by
/// `x_j = S_j t / (1 - t)` with `S_j = 1 + x_0 + ... + x_{j-1}`, so the
/// weight `(1 + sum x)^{-(k+r)}` factorizes into polynomials in each `t`.
fn projective_lhs(params: &SectorParams, n: &OccupationVector, nodes: usize) -> f64 {
    let r = params.modes();
    let k = f64::from(params.k());
    let prefactor = ratio_to_f64(
        factorial(u64::from(params.k()) - 1 + r as u64),
        factorial(u64::from(params.k()) - 1),
    );
    let unit = gauss_legendre(nodes).on_interval(0.0, 1.0);
    fn go(unit: &Rule, n: &[u32], depth: usize, scale: f64, acc: f64, k: f64, r: usize) -> f64 {
        if depth == n.len() {
            return acc * libm::pow(scale, -(k + r as f64));
        }
        let mut sum = 0.0;
        for (&t, &w) in unit.nodes.iter().zip(&unit.weights) {
            let x = scale * t / (1.0 - t);
            let jac = scale / ((1.0 - t) * (1.0 - t));
            let term = acc * libm::pow(x, f64::from(n[depth])) * jac;
            sum += w * go(unit, n, depth + 1, scale + x, term, k, r);
        }
        sum
    }
    prefactor * go(&unit, n.as_slice(), 0, 1.0, 1.0, k, r)
}

fn ball_lhs(params: &SectorParams, n: &OccupationVector, nodes: usize) -> f64 {
    let r = params.modes();
    let k = u64::from(params.k());
    let exponent = (k - r as u64 - 1) as f64;
    let prefactor =
        ratio_to_f64(rising(k - r as u64, k - 1), BigUint::from(1u8)) / libm::pow(PI, r as f64);
    let rule = gauss_legendre(nodes);
    let upper = |prefix: &[f64]| libm::sqrt(1.0 - prefix.iter().map(|x| x * x).sum::<f64>());
    let integrand = |rho: &[f64]| {
        let rest = 1.0 - rho.iter().map(|x| x * x).sum::<f64>();
        let mono: f64 = rho
            .iter()
            .zip(n.as_slice())
            .map(|(&x, &e)| libm::pow(x, f64::from(2 * e + 1)))
            .product();
        mono * libm::pow(rest.max(0.0), exponent)
    };
    prefactor * nested(&rule, r, &upper, &integrand)
}

/// Bessel integral for `r <= 2`; `r = 2` uses polar coordinates in the
/// positive quadrant, which keeps the kernel a function of one variable.
fn bessel_lhs(params: &SectorParams, n: &OccupationVector, nodes: usize) -> Result<f64> {
    let r = params.modes();
    let k = u64::from(params.k());
    let order = (k - r as u64) as u32;
    let constant =
        2.0 / (libm::pow(PI, r as f64) * ratio_to_f64(factorial(k - 1), BigUint::from(1u8)));
    let radial_power = f64::from(order) + (2 * n.total() + 2 * r - 1) as f64;
    let radial_rule = gauss_legendre(nodes).semi_infinite();
    let mut radial = 0.0;
    for (&rho, &w) in radial_rule.nodes.iter().zip(&radial_rule.weights) {
        let kv = bessel_k(order, 2.0 * rho)?;
        if kv == 0.0 {
            continue;
        }
        radial += w * libm::pow(rho, radial_power) * kv;
    }
    let angular = if r == 1 {
        1.0
    } else {
        let (a, b) = (f64::from(2 * n.get(0) + 1), f64::from(2 * n.get(1) + 1));
        gauss_legendre(nodes)
            .on_interval(0.0, 0.5 * PI)
            .integrate(|theta| libm::pow(libm::cos(theta), a) * libm::pow(libm::sin(theta), b))
    };
    Ok(libm::pow(2.0 * PI, r as f64) * constant * radial * angular)
}

fn raw_lhs(
    family: MeasureFamily,
    params: &SectorParams,
    n: &OccupationVector,
    nodes: usize,
) -> Result<f64> {
    Ok(match family {
        MeasureFamily::BesselI => bessel_lhs(params, n, nodes)?,
        MeasureFamily::BallII => ball_lhs(params, n, nodes),
        MeasureFamily::ProjectiveF => projective_lhs(params, n, nodes),
    })
}

/// Runs `eval` at `quad.nodes` and twice as many; returns the finer value.
fn converged<F>(quad: QuadratureSpec, mut eval: F) -> Result<(f64, usize)>
where
    F: FnMut(usize) -> Result<f64>,
{
    let coarse = eval(quad.nodes)?;
    let fine_spec = quad.doubled();
    let fine = eval(fine_spec.nodes)?;
    if !(relative_residual(coarse, fine) <= quad.tolerance) {
        return Err(Error::NonConvergence {
            coarse,
            fine,
            tolerance: quad.tolerance,
        });
    }
    Ok((fine, fine_spec.nodes))
}

/// Left-hand side by quadrature, without the domain checks of
/// [`MomentCase::new`]: a divergent moment surfaces as non-convergence.
pub fn integrate_moment(
    family: MeasureFamily,
    params: &SectorParams,
    n: &OccupationVector,
    quad: QuadratureSpec,
) -> Result<f64> {
    family.check_sector(params)?;
    if n.modes() != params.modes() {
        return Err(Error::InvalidState(format!(
            "moment index has {} entries, expected {}",
            n.modes(),
            params.modes()
        )));
    }
    let (r, k) = (params.modes(), params.k() as usize);
    if (family == MeasureFamily::BesselI && (k < r || r > 2))
        || (family == MeasureFamily::BallII && k <= r)
    {
        return Err(Error::InvalidParams(format!(
            "no {} weight for k = {k}, r = {r}",
            family.name()
        )));
    }
    converged(quad, |nodes| raw_lhs(family, params, n, nodes)).map(|(v, _)| v)
}

pub fn moment_residual(case: &MomentCase, quad: QuadratureSpec) -> Result<MomentResult> {
    let (lhs, nodes) = converged(quad, |nodes| {
        raw_lhs(case.family, &case.params, &case.n, nodes)
    })?;
    let rhs = moment_rhs(case.family, &case.params, &case.n)?;
    Ok(MomentResult::new(lhs, rhs, nodes))
}

/// `n! (k-1)! / ((k-1+n)! (k-r) ... (k-1))`, the Dirichlet integral
/// `int_simplex prod x_i^{n_i} (1 - sum x)^{k-r-1}`.
pub fn simplex_rhs(params: &SectorParams, n: &OccupationVector) -> Result<f64> {
    check_simplex(params, n)?;
    let k = u64::from(params.k());
    let r = params.modes() as u64;
    let total = n.total() as u64;
    Ok(ratio_to_f64(
        factorial_product(n.as_slice()) * factorial(k - 1),
        factorial(k - 1 + total) * rising(k - r, k - 1),
    ))
}

fn check_simplex(params: &SectorParams, n: &OccupationVector) -> Result<()> {
    if n.modes() != params.modes() {
        return Err(Error::InvalidState(format!(
            "index has {} entries, expected {}",
            n.modes(),
            params.modes()
        )));
    }
    if params.k() as usize <= params.modes() {
        return Err(Error::InvalidParams(format!(
            "the simplex integral needs k > r (k = {}, r = {})",
            params.k(),
            params.modes()
        )));
    }
    Ok(())
}

/// Iterated quadrature over the simplex `x_i > 0, sum x_i < 1`.
pub fn verify_simplex_identity(
    params: &SectorParams,
    n: &OccupationVector,
    quad: QuadratureSpec,
) -> Result<MomentResult> {
    let rhs = simplex_rhs(params, n)?;
    let exponent = f64::from(params.k()) - params.modes() as f64 - 1.0;
    let (lhs, nodes) = converged(quad, |nodes| {
        let rule = gauss_legendre(nodes);
        let upper = |prefix: &[f64]| 1.0 - prefix.iter().sum::<f64>();
        let integrand = |x: &[f64]| {
            let mono: f64 = x
                .iter()
                .zip(n.as_slice())
                .map(|(&v, &e)| libm::pow(v, f64::from(e)))
                .product();
            mono * libm::pow((1.0 - x.iter().sum::<f64>()).max(0.0), exponent)
        };
        Ok(nested(&rule, params.modes(), &upper, &integrand))
    })?;
    Ok(MomentResult::new(lhs, rhs, nodes))
}

/// `<C_n x^n, C_m x^m>` for one mode, integrating over the whole complex
/// plane (disk for the ball weight) in polar form. Should equal `delta_nm`.
pub fn gram_entry_r1(
    family: MeasureFamily,
    params: &SectorParams,
    n: u32,
    m: u32,
    quad: QuadratureSpec,
) -> Result<Complex64> {
    if params.modes() != 1 {
        return Err(Error::InvalidParams(
            "Gram entries are computed for r = 1 only".into(),
        ));
    }
    let nv = OccupationVector::new(alloc::vec![n]);
    let mv = OccupationVector::new(alloc::vec![m]);
    let case_n = MomentCase::new(family, params.clone(), nv.clone())?;
    MomentCase::new(family, params.clone(), mv.clone())?;
    let kind = family.realization();
    let scale = basis_coefficient(kind, params, &nv)? * basis_coefficient(kind, params, &mv)?;
    let k = params.k();
    let power = f64::from(n + m + 1);
    let radial_at = |nodes: usize| -> Result<f64> {
        let base = gauss_legendre(nodes);
        Ok(match family {
            MeasureFamily::BesselI => {
                let c = 2.0 / (PI * ratio_to_f64(factorial(u64::from(k) - 1), BigUint::from(1u8)));
                let rule = base.semi_infinite();
                let mut sum = 0.0;
                for (&rho, &w) in rule.nodes.iter().zip(&rule.weights) {
                    let kv = bessel_k(k - 1, 2.0 * rho)?;
                    if kv != 0.0 {
                        sum += w * c * libm::pow(rho, power + f64::from(k - 1)) * kv;
                    }
                }
                sum
            }
            MeasureFamily::BallII => {
                let c = f64::from(k - 1) / PI;
                base.on_interval(0.0, 1.0).integrate(|rho| {
                    c * libm::pow(rho, power) * libm::pow(1.0 - rho * rho, f64::from(k - 2))
                })
            }
            MeasureFamily::ProjectiveF => {
                let c = f64::from(k) / PI;
                base.semi_infinite().integrate(|rho| {
                    c * libm::pow(rho, power) * libm::pow(1.0 + rho * rho, -f64::from(k + 1))
                })
            }
        })
    };
    let (radial, _) = converged(quad, radial_at)?;
    let angular_points = 2 * (n + m) as usize + 4;
    let diff = f64::from(m) - f64::from(n);
    let angular = periodic_trapezoid(angular_points)
        .nodes
        .iter()
        .fold(Complex64::new(0.0, 0.0), |acc, &theta| {
            acc + Complex64::from_polar(1.0, diff * theta)
        })
        * (2.0 * PI / angular_points as f64);
    let _ = case_n;
    Ok(angular * (radial * scale))
}
