#![allow(dead_code)]

pub mod mc {
    //! Rejection-sampling estimates of section and shadow volumes.

    use rand::Rng;
    use revolv_core::BodyOfRevolution;

    /// `F(x₁) = λ·f(x₁/λ)`, the body's radius over the axis point `x₁`.
    fn radius(body: &BodyOfRevolution, x1: f64) -> f64 {
        let lam = body.scale();
        lam * body.profile().value(x1 / lam)
    }

    fn peak(body: &BodyOfRevolution) -> f64 {
        body.scale() * body.profile().peak()
    }

    /// `v_n` from `v_0 = 1`, `v_1 = 2`, `v_n = 2π/n · v_{n−2}`.
    pub fn ball_volume(n: usize) -> f64 {
        match n {
            0 => 1.0,
            1 => 2.0,
            _ => 2.0 * std::f64::consts::PI / n as f64 * ball_volume(n - 2),
        }
    }

    /// `|z|²` for `z` uniform in the `n`-ball of radius `r`. Only the norm
    /// matters for a body of revolution.
    fn radius_squared<R: Rng>(rng: &mut R, n: usize, r: f64) -> f64 {
        let u: f64 = rng.gen();
        let rho = r * u.powf(1.0 / n as f64);
        rho * rho
    }

    /// Section by `x₂ = s·x₁ + h`, parametrized by `(x₁, z)`.
    pub fn section_volume<R: Rng>(body: &BodyOfRevolution, s: f64, h: f64, samples: usize, rng: &mut R) -> f64 {
        let d = body.dim();
        let lam = body.scale();
        let top = peak(body);
        // |s·x₁ + h| ≤ peak confines x₁ further when the slope is steep.
        let (mut lo, mut hi) = (-lam, lam);
        if s != 0.0 {
            let (a, b) = ((-top - h) / s, (top - h) / s);
            lo = lo.max(a.min(b));
            hi = hi.min(a.max(b));
        }
        if hi <= lo {
            return 0.0;
        }
        let mut hits = 0usize;
        for _ in 0..samples {
            let x1 = rng.gen_range(lo..hi);
            let r2 = radius_squared(rng, d - 2, top);
            let l = s * x1 + h;
            let f = radius(body, x1);
            if r2 + l * l <= f * f {
                hits += 1;
            }
        }
        let bx = (hi - lo) * ball_volume(d - 2) * top.powi(d as i32 - 2);
        bx * hits as f64 / samples as f64 * (1.0 + s * s).sqrt()
    }

    /// Minimizes a convex function on `[a, b]` by golden section, stopping as
    /// soon as a non-positive value shows up.
    fn reaches_zero<F: Fn(f64) -> f64>(g: F, mut a: f64, mut b: f64) -> bool {
        let k = 0.5 * (5f64.sqrt() - 1.0);
        let mut c = b - k * (b - a);
        let mut e = a + k * (b - a);
        let (mut gc, mut ge) = (g(c), g(e));
        while b - a > 1e-9 {
            if gc <= 0.0 || ge <= 0.0 {
                return true;
            }
            if gc < ge {
                b = e;
                e = c;
                ge = gc;
                c = b - k * (b - a);
                gc = g(c);
            } else {
                a = c;
                c = e;
                gc = ge;
                e = a + k * (b - a);
                ge = g(e);
            }
        }
        gc <= 0.0 || ge <= 0.0
    }

    /// Shadow on `u(s)^⊥`: the point `a·w + z` (with `w = (1, s)/√(1+s²)`)
    /// belongs to it when the line through it along `u(s)` meets the body.
    pub fn projection<R: Rng>(body: &BodyOfRevolution, s: f64, samples: usize, rng: &mut R) -> f64 {
        let d = body.dim();
        let lam = body.scale();
        let top = peak(body);
        let norm = (1.0 + s * s).sqrt();
        let reach = (lam * lam + top * top).sqrt() * 1.01;
        let mut hits = 0usize;
        for _ in 0..samples {
            let a = rng.gen_range(-reach..reach);
            let r2 = radius_squared(rng, d - 2, top);
            // Line: x₁ = (a − t·s)/√, x₂ = (a·s + t)/√.
            let point = |t: f64| ((a - t * s) / norm, (a * s + t) / norm);
            let g = |t: f64| {
                let (x1, x2) = point(t);
                if x1.abs() > lam {
                    return f64::INFINITY;
                }
                (x2 * x2 + r2).sqrt() - radius(body, x1)
            };
            // t = −a·s puts the line point on the axis plane x₂ = 0.
            let inside = g(-a * s) <= 0.0 || {
                let (lo, hi) = if s > 0.0 {
                    ((a - lam * norm) / s, (a + lam * norm) / s)
                } else {
                    (-3.0 * reach, 3.0 * reach)
                };
                reaches_zero(g, lo, hi)
            };
            if inside {
                hits += 1;
            }
        }
        let bx = 2.0 * reach * ball_volume(d - 2) * top.powi(d as i32 - 2);
        bx * hits as f64 / samples as f64
    }
}
