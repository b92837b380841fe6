//! Infinitely differentiable scalar building blocks.
//!
//! Everything is assembled from the transition function
//! `sigma(u) = e(u) / (e(u) + e(1 - u))`, `e(u) = exp(-1/u)`, which is `0`
//! for `u <= 0`, `1` for `u >= 1` and smooth everywhere. Plateaus are
//! branches, so they hold exactly in floating point.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// A real map with a closed-form derivative.
pub trait ScalarMap {
    fn value(&self, x: f64) -> f64;
    fn derivative(&self, x: f64) -> f64;
}

pub fn sigma(u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else if u >= 1.0 {
        1.0
    } else {
        // logistic form of e(u) / (e(u) + e(1-u))
        1.0 / (1.0 + (1.0 / u - 1.0 / (1.0 - u)).exp())
    }
}

pub fn sigma_deriv(u: f64) -> f64 {
    if u <= 0.0 || u >= 1.0 {
        return 0.0;
    }
    let s = sigma(u);
    if s == 0.0 || s == 1.0 {
        return 0.0;
    }
    s * (1.0 - s) * (1.0 / (u * u) + 1.0 / ((1.0 - u) * (1.0 - u)))
}

/// Symmetric cutoff: `0` on `|x| <= a`, `1` on `|x| >= b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothStep {
    a: f64,
    b: f64,
}

impl SmoothStep {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a >= 0.0 && a < b && b.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "smooth step needs 0 <= a < b, got a = {a}, b = {b}"
            )));
        }
        Ok(SmoothStep { a, b })
    }

    pub fn lower(&self) -> f64 {
        self.a
    }

    pub fn upper(&self) -> f64 {
        self.b
    }
}

impl ScalarMap for SmoothStep {
    fn value(&self, x: f64) -> f64 {
        let r = x.abs();
        if r <= self.a {
            0.0
        } else if r >= self.b {
            1.0
        } else {
            sigma((r - self.a) / (self.b - self.a))
        }
    }

    fn derivative(&self, x: f64) -> f64 {
        let r = x.abs();
        if r <= self.a || r >= self.b {
            return 0.0;
        }
        let w = self.b - self.a;
        sigma_deriv((r - self.a) / w) * x.signum() / w
    }
}

/// The transition function itself as a [`ScalarMap`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sigma;

impl ScalarMap for Sigma {
    fn value(&self, x: f64) -> f64 {
        sigma(x)
    }
    fn derivative(&self, x: f64) -> f64 {
        sigma_deriv(x)
    }
}

/// Adaptive Simpson quadrature with absolute tolerance `tol`.
pub fn adaptive_simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    #[allow(clippy::too_many_arguments)]
    fn step(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> Result<f64> {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if delta.abs() <= 15.0 * tol || (b - a) <= f64::EPSILON * a.abs().max(b.abs()) * 8.0 {
            return Ok(left + right + delta / 15.0);
        }
        if depth == 0 {
            return Err(Error::Numeric(format!(
                "adaptive Simpson did not reach tolerance {tol:e} on [{a}, {b}]"
            )));
        }
        Ok(step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?
            + step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?)
    }
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(&f, a, b, fa, fm, fb, whole, tol, 50)
}

const TABLE_CELLS: usize = 64;

/// Cumulative `int_0^{j/64} sigma` for `j = 0..=64`.
fn sigma_integral_table() -> &'static [f64; TABLE_CELLS + 1] {
    static TABLE: OnceLock<[f64; TABLE_CELLS + 1]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [0.0; TABLE_CELLS + 1];
        let h = 1.0 / TABLE_CELLS as f64;
        for j in 0..TABLE_CELLS {
            let a = j as f64 * h;
            let piece = adaptive_simpson(sigma, a, a + h, 1e-16).expect("sigma is smooth");
            t[j + 1] = t[j] + piece;
        }
        t
    })
}

/// `int_0^s sigma(u) du` for `s` in `[0, 1]`, to absolute tolerance `tol`.
pub fn sigma_integral(s: f64, tol: f64) -> Result<f64> {
    if s <= 0.0 {
        return Ok(0.0);
    }
    if s >= 1.0 {
        return Ok(0.5 + (s - 1.0));
    }
    let table = sigma_integral_table();
    let j = ((s * TABLE_CELLS as f64).floor() as usize).min(TABLE_CELLS - 1);
    let a = j as f64 / TABLE_CELLS as f64;
    // sigma(s) * (s - a) bounds the piece, so this is also a relative bound
    // where sigma is tiny.
    let local = tol.min(1e-10 * sigma(s) * (s - a)).max(f64::MIN_POSITIVE);
    Ok(table[j] + adaptive_simpson(sigma, a, s, local)?)
}

/// Absolute quadrature tolerance on Orlicz function values.
pub const PHI_TOL: f64 = 1e-12;

/// Convex smooth Orlicz function, zero on `[0, alpha]` and equal to
/// `1 + margin` at `beta`:
/// `phi(x) = c * int_alpha^x sigma((u - alpha)/(beta - alpha)) du` with
/// `c = 2 (1 + margin) / (beta - alpha)`, linear beyond `beta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrliczFunction {
    alpha: f64,
    beta: f64,
    margin: f64,
}

impl OrliczFunction {
    pub fn new(alpha: f64, beta: f64, margin: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < beta && beta <= 1.0 && margin > 0.0 && margin.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "Orlicz function needs 0 < alpha < beta <= 1 and margin > 0, \
                 got alpha = {alpha}, beta = {beta}, margin = {margin}"
            )));
        }
        Ok(OrliczFunction { alpha, beta, margin })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn margin(&self) -> f64 {
        self.margin
    }

    /// Slope on `[beta, inf)`.
    pub fn normalizer(&self) -> f64 {
        2.0 * (1.0 + self.margin) / (self.beta - self.alpha)
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if x <= self.alpha {
            return Ok(0.0);
        }
        let top = 1.0 + self.margin;
        if x >= self.beta {
            return Ok(top + self.normalizer() * (x - self.beta));
        }
        let s = (x - self.alpha) / (self.beta - self.alpha);
        Ok(2.0 * top * sigma_integral(s, PHI_TOL / (2.0 * top))?)
    }

    pub fn deriv(&self, x: f64) -> f64 {
        if x <= self.alpha {
            return 0.0;
        }
        self.normalizer() * sigma((x - self.alpha) / (self.beta - self.alpha))
    }
}

impl ScalarMap for OrliczFunction {
    fn value(&self, x: f64) -> f64 {
        self.eval(x.abs()).expect("sigma quadrature converges")
    }
    fn derivative(&self, x: f64) -> f64 {
        self.deriv(x.abs()) * x.signum()
    }
}

/// The smooth maps used to exercise composition with a step function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Template {
    Square,
    /// `exp(k x)`
    Exp(f64),
    Tanh,
    Step(SmoothStep),
    Orlicz(OrliczFunction),
}

impl ScalarMap for Template {
    fn value(&self, x: f64) -> f64 {
        match self {
            Template::Square => x * x,
            Template::Exp(k) => (k * x).exp(),
            Template::Tanh => x.tanh(),
            Template::Step(s) => s.value(x),
            Template::Orlicz(p) => p.value(x),
        }
    }

    fn derivative(&self, x: f64) -> f64 {
        match self {
            Template::Square => 2.0 * x,
            Template::Exp(k) => k * (k * x).exp(),
            Template::Tanh => 1.0 - x.tanh().powi(2),
            Template::Step(s) => s.derivative(x),
            Template::Orlicz(p) => p.derivative(x),
        }
    }
}

impl std::fmt::Display for Template {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Template::Square => write!(f, "square"),
            Template::Exp(k) => write!(f, "exp({k} x)"),
            Template::Tanh => write!(f, "tanh"),
            Template::Step(s) => write!(f, "step({}, {})", s.lower(), s.upper()),
            Template::Orlicz(p) => write!(f, "orlicz({}, {}, {})", p.alpha(), p.beta(), p.margin()),
        }
    }
}
