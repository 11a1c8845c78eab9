//! Bessel functions used throughout the crate.
//!
//! Integer-order `J_l` comes from Miller's downward recurrence normalised with
//! `J_0² + 2 Σ J_k² = 1` (sign fixed by `J_0 + 2 Σ J_2k = 1`), or from the
//! power series when `|x| < 1`. `I_0`, `I_1` use the ascending series up to
//! `x = 30` and the Hankel asymptotic expansion beyond. `K_0`, `K_1` use the
//! logarithmic series for `x ≤ 2` and Temme's continued fraction above.

use crate::error::{Error, Result};
use crate::scalar::Real;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const MAX_ITER: usize = 100_000;

/// Order-0 and order-1 values of a Bessel family at one argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselPair<T> {
    pub order0: T,
    pub order1: T,
}

#[inline]
fn parity_sign<T: Real>(l: i64) -> T {
    if l % 2 == 0 {
        T::one()
    } else {
        -T::one()
    }
}

/// Integer-order Bessel function of the first kind `J_l(x)`.
pub fn bessel_j<T: Real>(l: i64, x: T) -> T {
    let order = l.unsigned_abs() as usize;
    let values = bessel_j_upto(order, x.abs());
    let mut v = values[order];
    if l < 0 {
        v = v * parity_sign::<T>(l);
    }
    if x < T::zero() {
        v = v * parity_sign::<T>(l);
    }
    v
}

/// `J_0(x) ..= J_lmax(x)` from a single recurrence pass.
///
/// Negative `x` is handled with `J_l(-x) = (-1)^l J_l(x)`.
pub fn bessel_j_upto<T: Real>(l_max: usize, x: T) -> Vec<T> {
    if x < T::zero() {
        let mut v = bessel_j_upto(l_max, -x);
        for (l, item) in v.iter_mut().enumerate() {
            if l % 2 == 1 {
                *item = -*item;
            }
        }
        return v;
    }
    if x == T::zero() {
        let mut v = vec![T::zero(); l_max + 1];
        v[0] = T::one();
        return v;
    }
    if x < T::one() {
        return series_j_upto(l_max, x);
    }
    miller_j_upto(l_max, x)
}

/// Ascending series, valid and well conditioned for `0 < x < 1`.
fn series_j_upto<T: Real>(l_max: usize, x: T) -> Vec<T> {
    let half = x * T::lit(0.5);
    let q = -half * half;
    let mut out = vec![T::zero(); l_max + 1];
    // leading = (x/2)^l / l!
    let mut leading = T::one();
    for (l, slot) in out.iter_mut().enumerate() {
        if l > 0 {
            leading = leading * half / T::from_count(l);
        }
        if leading == T::zero() {
            break;
        }
        let mut term = leading;
        let mut sum = term;
        for m in 1..MAX_ITER {
            term = term * q / (T::from_count(m) * T::from_count(m + l));
            sum = sum + term;
            if term.abs() <= T::epsilon() * sum.abs() {
                break;
            }
        }
        *slot = sum;
    }
    out
}

fn miller_j_upto<T: Real>(l_max: usize, x: T) -> Vec<T> {
    let reach = (l_max as f64).max(x.to_f64().unwrap_or(0.0).ceil());
    let mut start = (reach + 20.0 + (160.0 * reach).sqrt()).ceil() as usize;
    if start % 2 == 1 {
        start += 1;
    }
    let rescale_at = T::max_value().powf(T::lit(0.4));
    let two_over_x = T::lit(2.0) / x;

    let mut out = vec![T::zero(); l_max + 1];
    let mut f_next = T::zero(); // f_{k+1}
    let mut f_cur = T::min_positive_value().sqrt(); // f_k, k = start
    let mut sum_sq = T::zero(); // sum over k >= 1 of f_k^2
    let mut sum_even = T::zero(); // sum over even k >= 2 of f_k

    let mut k = start;
    loop {
        if k <= l_max {
            out[k] = f_cur;
        }
        if k == 0 {
            break;
        }
        sum_sq = sum_sq + f_cur * f_cur;
        if k.is_multiple_of(2) {
            sum_even = sum_even + f_cur;
        }
        let f_prev = two_over_x * T::from_count(k) * f_cur - f_next;
        f_next = f_cur;
        f_cur = f_prev;
        k -= 1;
        if f_cur.abs() > rescale_at {
            let s = T::one() / f_cur.abs();
            f_cur = f_cur * s;
            f_next = f_next * s;
            sum_sq = sum_sq * s * s;
            sum_even = sum_even * s;
            for v in out.iter_mut().skip(k + 1) {
                *v = *v * s;
            }
        }
    }
    let f0 = out[0];
    let norm = (f0 * f0 + T::lit(2.0) * sum_sq).sqrt();
    let sign = if f0 + T::lit(2.0) * sum_even < T::zero() {
        -T::one()
    } else {
        T::one()
    };
    let scale = sign / norm;
    for v in out.iter_mut() {
        *v = *v * scale;
    }
    out
}

/// Modified Bessel functions of the first kind, `(I_0(x), I_1(x))`, `x ≥ 0`.
pub fn modified_bessel_i<T: Real>(x: T) -> Result<BesselPair<T>> {
    if !(x >= T::zero()) || !x.is_finite() {
        return Err(Error::domain("modified Bessel I requires finite x >= 0"));
    }
    if x <= T::lit(30.0) {
        Ok(series_i(x))
    } else {
        let s = asymptotic_i_scaled(x);
        let e = x.exp();
        Ok(BesselPair { order0: s.order0 * e, order1: s.order1 * e })
    }
}

/// `e^{-x} I_m(x)` for `m = 0, 1`.
pub fn modified_bessel_i_scaled<T: Real>(x: T) -> Result<BesselPair<T>> {
    if !(x >= T::zero()) || !x.is_finite() {
        return Err(Error::domain("modified Bessel I requires finite x >= 0"));
    }
    if x <= T::lit(30.0) {
        let p = series_i(x);
        let e = (-x).exp();
        Ok(BesselPair { order0: p.order0 * e, order1: p.order1 * e })
    } else {
        Ok(asymptotic_i_scaled(x))
    }
}

fn series_i<T: Real>(x: T) -> BesselPair<T> {
    let q = x * x * T::lit(0.25);
    let mut t0 = T::one();
    let mut s0 = T::one();
    let mut t1 = T::one();
    let mut s1 = T::one();
    for k in 1..MAX_ITER {
        let kf = T::from_count(k);
        t0 = t0 * q / (kf * kf);
        t1 = t1 * q / (kf * (kf + T::one()));
        s0 = s0 + t0;
        s1 = s1 + t1;
        if t0 <= T::epsilon() * s0 && t1 <= T::epsilon() * s1 {
            break;
        }
    }
    BesselPair { order0: s0, order1: s1 * x * T::lit(0.5) }
}

fn asymptotic_i_scaled<T: Real>(x: T) -> BesselPair<T> {
    let series = |mu: T| {
        let mut term = T::one();
        let mut sum = T::one();
        for k in 1..200 {
            let odd = T::from_count(2 * k - 1);
            let next = -term * (mu - odd * odd) / (T::lit(8.0) * T::from_count(k) * x);
            if next.abs() >= term.abs() {
                break;
            }
            term = next;
            sum = sum + term;
            if term.abs() <= T::epsilon() * sum.abs() {
                break;
            }
        }
        sum
    };
    let pre = T::one() / (T::lit(2.0) * T::PI() * x).sqrt();
    BesselPair { order0: pre * series(T::zero()), order1: pre * series(T::lit(4.0)) }
}

/// Modified Bessel functions of the second kind, `(K_0(x), K_1(x))`, `x > 0`.
pub fn modified_bessel_k<T: Real>(x: T) -> Result<BesselPair<T>> {
    if !(x > T::zero()) || !x.is_finite() {
        return Err(Error::domain("modified Bessel K requires finite x > 0"));
    }
    if x <= T::lit(2.0) {
        Ok(series_k(x))
    } else {
        let s = temme_k_scaled(x);
        let e = (-x).exp();
        Ok(BesselPair { order0: s.order0 * e, order1: s.order1 * e })
    }
}

/// `e^{x} K_m(x)` for `m = 0, 1`; finite for arguments where `K` underflows.
pub fn modified_bessel_k_scaled<T: Real>(x: T) -> Result<BesselPair<T>> {
    if !(x > T::zero()) || !x.is_finite() {
        return Err(Error::domain("modified Bessel K requires finite x > 0"));
    }
    if x <= T::lit(2.0) {
        let p = series_k(x);
        let e = x.exp();
        Ok(BesselPair { order0: p.order0 * e, order1: p.order1 * e })
    } else {
        Ok(temme_k_scaled(x))
    }
}

fn series_k<T: Real>(x: T) -> BesselPair<T> {
    let i = series_i(x);
    let log_half = (x * T::lit(0.5)).ln();
    let q = x * x * T::lit(0.25);
    let gamma = T::lit(EULER_GAMMA);

    // K_0 = -ln(x/2) I_0 + sum psi(k+1) q^k / (k!)^2
    // K_1 = 1/x + ln(x/2) I_1 - (x/4) sum [psi(k+1) + psi(k+2)] q^k / (k! (k+1)!)
    let mut psi_k1 = -gamma; // psi(k+1)
    let mut w0 = T::one(); // q^k / (k!)^2
    let mut w1 = T::one(); // q^k / (k! (k+1)!)
    let mut s0 = psi_k1;
    let mut s1 = psi_k1 + (psi_k1 + T::one());
    for k in 1..MAX_ITER {
        let kf = T::from_count(k);
        psi_k1 = psi_k1 + T::one() / kf;
        w0 = w0 * q / (kf * kf);
        w1 = w1 * q / (kf * (kf + T::one()));
        let psi_k2 = psi_k1 + T::one() / (kf + T::one());
        let d0 = psi_k1 * w0;
        let d1 = (psi_k1 + psi_k2) * w1;
        s0 = s0 + d0;
        s1 = s1 + d1;
        if d0.abs() <= T::epsilon() * s0.abs() && d1.abs() <= T::epsilon() * s1.abs() {
            break;
        }
    }
    BesselPair {
        order0: -log_half * i.order0 + s0,
        order1: T::one() / x + log_half * i.order1 - x * T::lit(0.25) * s1,
    }
}

/// Temme's continued fraction (Steed's algorithm) for order `ν = 0`, `x ≥ 2`.
fn temme_k_scaled<T: Real>(x: T) -> BesselPair<T> {
    let two = T::lit(2.0);
    let mut b = two * (T::one() + x);
    let mut d = T::one() / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = T::zero();
    let mut q2 = T::one();
    let a1 = T::lit(0.25);
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = T::one() + q * delh;
    for i in 2..MAX_ITER {
        let fi = T::from_count(i);
        a = a - two * (fi - T::one());
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q = q + c * qnew;
        b = b + two;
        d = T::one() / (b + a * d);
        delh = (b * d - T::one()) * delh;
        h = h + delh;
        let dels = q * delh;
        s = s + dels;
        if (dels / s).abs() < T::epsilon() {
            break;
        }
    }
    h = a1 * h;
    let k0 = (T::PI() / (two * x)).sqrt() / s;
    let k1 = k0 * (x + T::lit(0.5) - h) / x;
    BesselPair { order0: k0, order1: k1 }
}
