//! Modified Bessel functions of the second kind, integer order.
//!
//! `K_0` and `K_1` come from their power series for `x <= 2` and from
//! Steed's continued fraction (Temme's form) above; higher orders use the
//! upward recurrence `K_{v+1} = K_{v-1} + (2v/x) K_v`, which is stable for `K`.

use crate::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const SERIES_LIMIT: f64 = 2.0;
const MAX_ITER: usize = 10_000;

/// `K_order(x)` for `x > 0`.
pub fn bessel_k(order: u32, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::OutOfDomain(alloc::format!(
            "K_v(x) needs a finite x > 0 (got {x})"
        )));
    }
    let (k0, k1) = if x <= SERIES_LIMIT {
        k01_series(x)
    } else {
        k01_continued_fraction(x)
    };
    if order == 0 {
        return Ok(k0);
    }
    let (mut prev, mut cur) = (k0, k1);
    for v in 1..order {
        let next = prev + 2.0 * f64::from(v) / x * cur;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

fn k01_series(x: f64) -> (f64, f64) {
    let q = 0.25 * x * x;
    let log_half = libm::log(0.5 * x);

    // I0, I1 and the digamma-weighted sums, term by term
    let mut t0 = 1.0; // q^j / (j!)^2
    let mut t1 = 1.0; // q^j / (j! (j+1)!)
    let mut harmonic = 0.0; // H_j
    let mut i0 = 0.0;
    let mut i1 = 0.0;
    let mut s0 = 0.0; // sum H_j t0
    let mut s1 = 0.0; // sum (psi(j+1) + psi(j+2)) t1
    for j in 0..MAX_ITER {
        let jf = j as f64;
        let psi1 = harmonic - EULER_GAMMA;
        let psi2 = psi1 + 1.0 / (jf + 1.0);
        i0 += t0;
        i1 += t1;
        s0 += harmonic * t0;
        s1 += (psi1 + psi2) * t1;
        if t0 < 1e-18 * i0 && t1 < 1e-18 * i1 {
            break;
        }
        harmonic += 1.0 / (jf + 1.0);
        t0 *= q / ((jf + 1.0) * (jf + 1.0));
        t1 *= q / ((jf + 1.0) * (jf + 2.0));
    }
    let i1 = 0.5 * x * i1;
    let k0 = -(log_half + EULER_GAMMA) * i0 + s0;
    let k1 = 1.0 / x + log_half * i1 - 0.25 * x * s1;
    (k0, k1)
}

fn k01_continued_fraction(x: f64) -> (f64, f64) {
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..MAX_ITER {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 1e-17 {
            break;
        }
    }
    h *= a1;
    let k0 = libm::sqrt(core::f64::consts::PI / (2.0 * x)) * libm::exp(-x) / s;
    let k1 = k0 * (x + 0.5 - h) / x;
    (k0, k1)
}
