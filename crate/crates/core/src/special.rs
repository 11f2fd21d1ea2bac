//! Modified Bessel functions of the second kind and the combinatorial helpers
//! the closed-form outage expressions lean on.

use crate::error::{Error, Result};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Largest order accepted by [`bessel_k`].
pub const BESSEL_MAX_ORDER: usize = 16;
pub const BESSEL_MIN_ARG: f64 = 1e-8;
pub const BESSEL_MAX_ARG: f64 = 700.0;

/// `K_n(x)` for integer `n <= 16` and `x` in `[1e-8, 700]`.
///
/// `K_0` and `K_1` come from their power series for `x <= 2` and from
/// Steed's continued fraction (Temme's CF2) above; higher orders use the
/// upward recurrence `K_{k+1} = K_{k-1} + (2k/x) K_k`, which is stable for K.
pub fn bessel_k(n: usize, x: f64) -> Result<f64> {
    if n > BESSEL_MAX_ORDER {
        return Err(Error::domain("bessel_k", format!("order {n} exceeds {BESSEL_MAX_ORDER}")));
    }
    if !(BESSEL_MIN_ARG..=BESSEL_MAX_ARG).contains(&x) {
        return Err(Error::domain(
            "bessel_k",
            format!("argument {x} outside [{BESSEL_MIN_ARG}, {BESSEL_MAX_ARG}]"),
        ));
    }
    Ok(bessel_k_unchecked(n, x))
}

fn bessel_k_unchecked(n: usize, x: f64) -> f64 {
    let (k0, k1) = if x <= 2.0 { k01_series(x) } else { k01_continued_fraction(x) };
    if n == 0 {
        return k0;
    }
    let (mut prev, mut cur) = (k0, k1);
    for k in 1..n {
        let next = prev + (2.0 * k as f64 / x) * cur;
        prev = cur;
        cur = next;
    }
    cur
}

fn k01_series(x: f64) -> (f64, f64) {
    let q = 0.25 * x * x;
    let log_half = (0.5 * x).ln();
    // K0 = -(ln(x/2) + gamma) I0 + sum_{k>=1} H_k q^k / (k!)^2
    // K1 = 1/x + ln(x/2) I1 - (x/4) sum_{k>=0} (psi(k+1) + psi(k+2)) q^k / (k! (k+1)!)
    let mut i0 = 0.0;
    let mut i1_over = 0.0; // I1 / (x/2)
    let mut s0 = 0.0;
    let mut s1 = 0.0;
    let mut t0 = 1.0; // q^k / (k!)^2
    let mut t1 = 1.0; // q^k / (k! (k+1)!)
    let mut harmonic = 0.0; // H_k
    for k in 0..60 {
        let kf = k as f64;
        if k > 0 {
            harmonic += 1.0 / kf;
            t0 *= q / (kf * kf);
            t1 *= q / (kf * (kf + 1.0));
        }
        i0 += t0;
        i1_over += t1;
        s0 += harmonic * t0;
        // psi(k+1) + psi(k+2) = 2 H_k + 1/(k+1) - 2 gamma
        s1 += (2.0 * harmonic + 1.0 / (kf + 1.0) - 2.0 * EULER_GAMMA) * t1;
        if t0 < 1e-18 * i0 && t1 < 1e-18 * i1_over {
            break;
        }
    }
    let k0 = -(log_half + EULER_GAMMA) * i0 + s0;
    let i1 = 0.5 * x * i1_over;
    let k1 = 1.0 / x + log_half * i1 - 0.25 * x * s1;
    (k0, k1)
}

fn k01_continued_fraction(x: f64) -> (f64, f64) {
    const EPS: f64 = 1e-17;
    let a1 = 0.25;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut h = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 1..10_000 {
        let fi = i as f64;
        a -= 2.0 * fi;
        c = -a * c / (fi + 1.0);
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
        if (dels / s).abs() < EPS {
            break;
        }
    }
    h *= a1;
    let k0 = (std::f64::consts::PI / (2.0 * x)).sqrt() * (-x).exp() / s;
    let k1 = k0 * (x + 0.5 - h) / x;
    (k0, k1)
}

/// `2 a^{nu/2} K_nu(2 sqrt(a)) / (nu-1)!`, the value of
/// `E[exp(-a / X)]` for `X ~ Gamma(nu, 1)`. Equals 1 at `a = 0`.
pub fn scaled_bessel_k(nu: usize, a: f64) -> Result<f64> {
    Ok(1.0 - one_minus_scaled_bessel_k(nu, a)?)
}

/// `1 - 2 a^{nu/2} K_nu(2 sqrt(a)) / (nu-1)!` for `nu >= 1`, `a >= 0`.
///
/// For `a <= 1` the difference is summed directly from the series of `K_nu`
/// so that no digits are lost when the product is close to 1.
pub fn one_minus_scaled_bessel_k(nu: usize, a: f64) -> Result<f64> {
    if nu == 0 || nu > BESSEL_MAX_ORDER {
        return Err(Error::domain(
            "scaled_bessel_k",
            format!("order {nu} outside [1, {BESSEL_MAX_ORDER}]"),
        ));
    }
    if !(a >= 0.0) || !a.is_finite() {
        return Err(Error::domain("scaled_bessel_k", format!("argument {a} must be finite and >= 0")));
    }
    if a == 0.0 {
        return Ok(0.0);
    }
    if a <= 1.0 {
        return Ok(one_minus_scaled_series(nu, a));
    }
    let x = 2.0 * a.sqrt();
    if x > BESSEL_MAX_ARG {
        return Ok(1.0);
    }
    let log_val = std::f64::consts::LN_2 + 0.5 * nu as f64 * a.ln() + bessel_k_unchecked(nu, x).ln()
        - ln_factorial(nu - 1);
    Ok(1.0 - log_val.exp())
}

/// Series form, valid for small `a`:
/// `1 - S = -sum_{k=1}^{nu-1} (nu-k-1)! / ((nu-1)! k!) (-a)^k
///          + (-1)^nu a^nu / (nu-1)! sum_{k>=0} a^k / (k! (nu+k)!) [ln a - psi(k+1) - psi(nu+k+1)]`.
fn one_minus_scaled_series(nu: usize, a: f64) -> f64 {
    let fact_nu1 = factorial(nu - 1);
    let mut finite = 0.0;
    let mut power = 1.0;
    for k in 1..nu {
        power *= -a;
        finite -= factorial(nu - k - 1) / (fact_nu1 * factorial(k)) * power;
    }
    let ln_a = a.ln();
    let mut tail = 0.0;
    let mut term = 1.0 / factorial(nu); // a^k / (k! (nu+k)!)
    let mut psi_k = -EULER_GAMMA; // psi(k+1)
    let mut psi_nk = -EULER_GAMMA + harmonic(nu); // psi(nu+k+1)
    for k in 0..200 {
        if k > 0 {
            let kf = k as f64;
            term *= a / (kf * (nu as f64 + kf));
            psi_k += 1.0 / kf;
            psi_nk += 1.0 / (nu as f64 + kf);
        }
        let contrib = term * (ln_a - psi_k - psi_nk);
        tail += contrib;
        if contrib.abs() < 1e-18 * tail.abs() {
            break;
        }
    }
    let sign = if nu.is_multiple_of(2) { 1.0 } else { -1.0 };
    finite + sign * a.powi(nu as i32) / fact_nu1 * tail
}

fn harmonic(n: usize) -> f64 {
    (1..=n).map(|k| 1.0 / k as f64).sum()
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

pub fn ln_factorial(n: usize) -> f64 {
    (1..=n).map(|k| (k as f64).ln()).sum()
}

/// `C(n, k)` as a float; exact for the sizes used here (`n <= 60`).
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round()
}

/// Neumaier's compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl std::iter::FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}
