//! Reference implementations for tests, independent of the library's own code paths.

use std::ops::{Add, Mul, Neg};

/// Double-double number `hi + lo`.
#[derive(Clone, Copy, Debug)]
pub struct Dd {
    hi: f64,
    lo: f64,
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

impl Add for Dd {
    type Output = Dd;

    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let e = e + self.lo + o.lo;
        let (hi, lo) = two_sum(s, e);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;

    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Mul for Dd {
    type Output = Dd;

    fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + self.hi * o.lo + self.lo * o.hi;
        let (hi, lo) = two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Dd {
    pub fn from(v: f64) -> Self {
        Self { hi: v, lo: 0.0 }
    }

    pub fn div_f64(self, d: f64) -> Dd {
        let q1 = self.hi / d;
        let (p, e) = two_prod(q1, d);
        let r = (self.hi - p - e + self.lo) / d;
        let (hi, lo) = two_sum(q1, r);
        Dd { hi, lo }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

/// `2/sqrt(pi)` as a double-double.
const TWO_OVER_SQRT_PI: Dd = Dd { hi: std::f64::consts::FRAC_2_SQRT_PI, lo: 1.533545961316588e-17 };

/// erf by its Maclaurin series summed in double-double until terms fall below 1e-34.
///
/// At `|x| = 6` the largest term is ~3e14, so ~1e-32 relative working precision keeps
/// the absolute error well under 1e-17.
pub fn erf_series_oracle(x: f64) -> f64 {
    let x2 = Dd::from(x) * Dd::from(x);
    let mut power = Dd::from(x); // x^(2n+1) / n!
    let mut sum = Dd::from(x);
    let mut n = 0u32;
    loop {
        n += 1;
        power = (power * x2).div_f64(f64::from(n));
        let term = power.div_f64(f64::from(2 * n + 1));
        sum = if n % 2 == 1 { sum + -term } else { sum + term };
        if f64::from(n) > 2.0 * x * x && term.hi.abs() < 1e-34 {
            break;
        }
        assert!(n < 1000, "series did not converge at {x}");
    }
    (TWO_OVER_SQRT_PI * sum).to_f64()
}

/// `sup_{t >= 0} t erfc(t)` by golden-section search on the oracle.
pub fn sup_t_erfc() -> f64 {
    let f = |t: f64| t * (1.0 - erf_series_oracle(t));
    let (mut a, mut b) = (0.0f64, 2.0f64);
    let r = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let c = b - r * (b - a);
        let d = a + r * (b - a);
        if f(c) > f(d) {
            b = d;
        } else {
            a = c;
        }
    }
    f(0.5 * (a + b))
}
