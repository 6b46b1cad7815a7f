//! Independent reference computations for the integration tests.
//!
//! Nothing here calls into the library's numerics: Bessel and erf values
//! come from power series evaluated in double-double arithmetic, integrals
//! from adaptive Gauss–Kronrod quadrature or the periodic trapezoidal rule.

#![allow(dead_code)]

use std::f64::consts::{PI, TAU};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

/// Unevaluated sum `hi + lo` with `|lo| ≤ ulp(hi)/2`, about 32 digits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DD {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DD {
    pub const ZERO: DD = DD { hi: 0.0, lo: 0.0 };
    pub const ONE: DD = DD { hi: 1.0, lo: 0.0 };

    pub fn new(x: f64) -> DD {
        DD { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> DD {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }
}

impl Add for DD {
    type Output = DD;
    fn add(self, o: DD) -> DD {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = two_sum(s, e + t);
        let (hi, lo) = two_sum(s, e + f);
        DD { hi, lo }
    }
}

impl Neg for DD {
    type Output = DD;
    fn neg(self) -> DD {
        DD {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for DD {
    type Output = DD;
    fn sub(self, o: DD) -> DD {
        self + (-o)
    }
}

impl Mul for DD {
    type Output = DD;
    fn mul(self, o: DD) -> DD {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = two_sum(p, e);
        DD { hi, lo }
    }
}

impl Div for DD {
    type Output = DD;
    fn div(self, o: DD) -> DD {
        let q1 = self.hi / o.hi;
        let r = self - o * DD::new(q1);
        let q2 = r.hi / o.hi;
        let r = r - o * DD::new(q2);
        let q3 = r.hi / o.hi;
        let (hi, lo) = two_sum(q1, q2);
        DD { hi, lo } + DD::new(q3)
    }
}

/// π to double-double precision.
pub const PI_DD: DD = DD {
    hi: 3.141592653589793,
    lo: 1.2246467991473532e-16,
};

/// One Newton step on top of the f64 root doubles the digits.
pub fn sqrt_dd(x: DD) -> DD {
    let s = DD::new(x.hi.sqrt());
    s + (x - s * s) / (DD::new(2.0) * s)
}

/// Complex double-double.
#[derive(Debug, Clone, Copy)]
pub struct CDD {
    pub re: DD,
    pub im: DD,
}

impl CDD {
    pub fn new(z: Complex64) -> CDD {
        CDD {
            re: DD::new(z.re),
            im: DD::new(z.im),
        }
    }

    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    fn add(self, o: CDD) -> CDD {
        CDD {
            re: self.re + o.re,
            im: self.im + o.im,
        }
    }

    fn mul(self, o: CDD) -> CDD {
        CDD {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }

    fn scale(self, s: DD) -> CDD {
        CDD {
            re: self.re * s,
            im: self.im * s,
        }
    }

    fn norm_hi(self) -> f64 {
        self.re.hi.hypot(self.im.hi)
    }
}

/// `I_n(x)` from the ascending series `Σ (x/2)^{2k+n} / (k!(k+n)!)`
/// summed in double-double until terms stop contributing.
pub fn bessel_i_dd(n: u32, x: f64) -> f64 {
    let half = DD::new(x) / DD::new(2.0);
    let mut term = DD::ONE;
    for j in 1..=n {
        term = term * half / DD::new(f64::from(j));
    }
    let q = half * half;
    let mut sum = term;
    for k in 1..100_000u32 {
        term = term * q / DD::new(f64::from(k) * f64::from(k + n));
        sum = sum + term;
        if term.hi.abs() < 1e-34 * sum.hi.abs() {
            break;
        }
    }
    sum.to_f64()
}

/// `erf(z)` from the Maclaurin series
/// `2/√π Σ (-1)^k z^{2k+1} / (k!(2k+1))` in complex double-double.
///
/// Intended for `|z| ≲ 6`, where the cancellation stays far below the
/// 32-digit working precision.
pub fn erf_dd(z: Complex64) -> Complex64 {
    let zz = CDD::new(z);
    let z2 = zz.mul(zz);
    let neg_z2 = CDD {
        re: -z2.re,
        im: -z2.im,
    };
    // power = (-1)^k z^{2k+1} / k!
    let mut power = zz;
    let mut sum = zz;
    for k in 1..2000u32 {
        power = power.mul(neg_z2).scale(DD::ONE / DD::new(f64::from(k)));
        let term = power.scale(DD::ONE / DD::new(f64::from(2 * k + 1)));
        sum = sum.add(term);
        if term.norm_hi() < 1e-34 * sum.norm_hi().max(1e-300) && k > 4 {
            break;
        }
    }
    let two_over_sqrt_pi = DD::new(2.0) / sqrt_dd(PI_DD);
    sum.scale(two_over_sqrt_pi).to_c64()
}

/// `A(x) = I1(x)/I0(x)` from the double-double series.
pub fn bessel_ratio_dd(x: f64) -> f64 {
    let half = DD::new(x) / DD::new(2.0);
    let q = half * half;
    let (mut t0, mut t1) = (DD::ONE, half);
    let (mut s0, mut s1) = (t0, t1);
    for k in 1..100_000u32 {
        let kf = f64::from(k);
        t0 = t0 * q / DD::new(kf * kf);
        t1 = t1 * q / DD::new(kf * (kf + 1.0));
        s0 = s0 + t0;
        s1 = s1 + t1;
        if t0.hi < 1e-34 * s0.hi {
            break;
        }
    }
    (s1 / s0).to_f64()
}

const GK_NODES: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const GK_WEIGHTS: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const G_WEIGHTS: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * GK_WEIGHTS[7];
    let mut gauss = fc * G_WEIGHTS[3];
    for i in 0..7 {
        let x = h * GK_NODES[i];
        let s = f(c - x) + f(c + x);
        kron += s * GK_WEIGHTS[i];
        if i % 2 == 1 {
            gauss += s * G_WEIGHTS[i / 2];
        }
    }
    (kron * h, ((kron - gauss) * h).norm())
}

/// Adaptive Gauss–Kronrod (7/15) quadrature of a complex integrand.
pub fn integrate_c<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, tol: f64) -> Complex64 {
    fn recurse<F: Fn(f64) -> Complex64>(
        f: &F,
        a: f64,
        b: f64,
        tol: f64,
        whole: Complex64,
        err: f64,
        depth: u32,
    ) -> Complex64 {
        if err <= tol || depth > 50 || (b - a).abs() < 1e-13 {
            return whole;
        }
        let m = 0.5 * (a + b);
        let (l, el) = gk15(f, a, m);
        let (r, er) = gk15(f, m, b);
        recurse(f, a, m, 0.5 * tol, l, el, depth + 1) + recurse(f, m, b, 0.5 * tol, r, er, depth + 1)
    }
    // start from a few panels so narrow peaks are not missed
    let panels = 64;
    let w = (b - a) / f64::from(panels);
    (0..panels)
        .map(|i| {
            let lo = a + w * f64::from(i);
            let hi = lo + w;
            let (v, e) = gk15(&f, lo, hi);
            recurse(&f, lo, hi, tol / f64::from(panels), v, e, 0)
        })
        .sum()
}

pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    integrate_c(|x| Complex64::new(f(x), 0.0), a, b, tol).re
}

/// Periodic trapezoidal rule on `n` points over `[0, 2π)`; spectrally
/// accurate for smooth periodic integrands.
pub fn periodic<F: Fn(f64) -> Complex64>(f: F, n: usize) -> Complex64 {
    let h = TAU / n as f64;
    (0..n).map(|i| f(h * i as f64)).sum::<Complex64>() * h
}

/// Unnormalized WN density from a wide wrapping sum.
pub fn wn_pdf_ref(mu: f64, sigma: f64, x: f64) -> f64 {
    (-60..=60)
        .map(|k| {
            let t = x - mu + TAU * f64::from(k);
            (-t * t / (2.0 * sigma * sigma)).exp()
        })
        .sum::<f64>()
        / ((2.0 * PI).sqrt() * sigma)
}

/// VM density with the normalizer from the double-double series.
pub fn vm_pdf_ref(mu: f64, kappa: f64, x: f64) -> f64 {
    (kappa * (x - mu).cos()).exp() / (TAU * bessel_i_dd(0, kappa))
}

/// First moment of the normalized density proportional to `f`.
pub fn posterior_m1<F: Fn(f64) -> f64>(f: F, n: usize) -> Complex64 {
    let z = periodic(|x| Complex64::new(f(x), 0.0), n).re;
    periodic(|x| Complex64::from_polar(f(x), x), n) / z
}

/// Real `erf` by the double-double series; valid for `|x| ≲ 6`.
pub fn erf_real_dd(x: f64) -> f64 {
    erf_dd(Complex64::new(x, 0.0)).re
}
