//! Floating-point frequency side: `f̂(ω) = ∫ f(x) e^{−iωx} dx` in closed
//! form, the kernels `F_n` and `H_n`, and certified quadrature of
//! `(1/2π) ∫ ω^k |f̂(ω)|² dω`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::moments::AtomParams;
use crate::pwpoly::PiecewisePoly;
use crate::ratpoly::{int, to_f64, Rational};

/// Below this `|ω|·h` a piece integral is summed as a power series.
const SERIES_LIMIT: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumSample {
    pub omega: f64,
    pub re: f64,
    pub im: f64,
}

impl SpectrumSample {
    pub fn abs2(&self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub truncation_radius: f64,
}

fn gauss_legendre(n: usize) -> GaussLegendre {
    GaussLegendre::new(NonZeroUsize::new(n).expect("positive rule size"))
}

/// A piece re-expanded about its midpoint: `P(x) = Σ q_j (x − center)^j`
/// on `[center − half, center + half]`.
#[derive(Debug, Clone)]
struct LocalPiece {
    center: f64,
    half: f64,
    coeffs: Vec<f64>,
}

/// Precomputed transform of a fixed piecewise polynomial.
#[derive(Debug, Clone)]
pub struct Transform {
    pieces: Vec<LocalPiece>,
    degree: usize,
    rule: Option<GaussLegendre>,
}

impl Transform {
    pub fn new(f: &PiecewisePoly) -> Self {
        let two = int(2);
        let pieces: Vec<LocalPiece> = f
            .intervals()
            .map(|(a, b, p)| {
                let mid = (a + b) / &two;
                LocalPiece {
                    center: to_f64(&mid),
                    half: to_f64(&((b - a) / &two)),
                    coeffs: p.compose_affine(&Rational::one(), &mid).coeffs_f64(),
                }
            })
            .collect();
        let degree = f.max_degree();
        // the window SERIES_LIMIT < |t| < degree needs a quadrature rule
        let rule = (degree as f64 > SERIES_LIMIT).then(|| gauss_legendre(2 * degree + 24));
        Transform {
            pieces,
            degree,
            rule,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn eval(&self, omega: f64) -> Complex64 {
        let mut total = Complex64::zero();
        for piece in &self.pieces {
            let d = piece.coeffs.len().saturating_sub(1);
            let t = omega * piece.half;
            let moments = self.scaled_moments(d, t);
            // Σ_j q_j h^{j+1} J_j(ωh)
            let mut acc = Complex64::zero();
            let mut h_pow = piece.half;
            for (q, m) in piece.coeffs.iter().zip(&moments) {
                acc += m * (q * h_pow);
                h_pow *= piece.half;
            }
            total += acc * Complex64::from_polar(1.0, -omega * piece.center);
        }
        total
    }

    /// `J_j(t) = ∫_{−1}^{1} s^j e^{−its} ds` for `j = 0..=d`.
    fn scaled_moments(&self, d: usize, t: f64) -> Vec<Complex64> {
        let at = t.abs();
        if at <= SERIES_LIMIT {
            series_moments(d, t)
        } else if at >= d as f64 {
            recurrence_moments(d, t)
        } else {
            let rule = self.rule.as_ref().expect("rule built for degree > 2");
            let mut out = vec![Complex64::zero(); d + 1];
            for &(s, w) in rule.as_node_weight_pairs() {
                let e = Complex64::from_polar(w, -t * s);
                let mut s_pow = 1.0;
                for slot in out.iter_mut() {
                    *slot += e * s_pow;
                    s_pow *= s;
                }
            }
            out
        }
    }
}

fn series_moments(d: usize, t: f64) -> Vec<Complex64> {
    let mut out = vec![Complex64::zero(); d + 1];
    let step = Complex64::new(0.0, -t);
    let mut term = Complex64::one(); // (−it)^m / m!
    let mut m = 0usize;
    loop {
        for (j, slot) in out.iter_mut().enumerate() {
            if (j + m).is_multiple_of(2) {
                *slot += term * (2.0 / (j + m + 1) as f64);
            }
        }
        m += 1;
        term = term * step / m as f64;
        if m > d + 1 && term.norm() < 1e-20 {
            break;
        }
    }
    out
}

fn recurrence_moments(d: usize, t: f64) -> Vec<Complex64> {
    let i = Complex64::i();
    let (ep, em) = (
        Complex64::from_polar(1.0, -t),
        Complex64::from_polar(1.0, t),
    );
    let mut out = Vec::with_capacity(d + 1);
    out.push(Complex64::new(2.0 * t.sin() / t, 0.0));
    for j in 1..=d {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let boundary = i * (ep - em * sign) / t;
        let next = boundary - i * out[j - 1] * (j as f64 / t);
        out.push(next);
    }
    out
}

pub fn fourier_eval(f: &PiecewisePoly, omega: f64) -> SpectrumSample {
    let z = Transform::new(f).eval(omega);
    SpectrumSample {
        omega,
        re: z.re,
        im: z.im,
    }
}

fn check_index(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::Precondition("F_n and H_n need n >= 1".into()));
    }
    Ok(())
}

/// `∫₀¹ g(y) cos(ηy) dy` by a Gauss rule sized for degree `n` and `|η| < n + 2`.
fn cos_quadrature(n: u32, eta: f64, g: impl Fn(f64) -> f64) -> f64 {
    gauss_legendre(2 * n as usize + 30).integrate(0.0, 1.0, |y| g(y) * (eta * y).cos())
}

/// `F_n(η) = ∫₀¹ (1 − y)ⁿ cos(ηy) dy`.
pub fn f_n_eval(n: u32, eta: f64) -> Result<f64> {
    check_index(n)?;
    let eta = eta.abs();
    let nf = n as f64;
    if eta <= 4.0 {
        // Σ_m (−1)^m η^{2m} n! / (n + 2m + 1)!
        let mut term = 1.0 / (nf + 1.0);
        let mut sum = term;
        let mut m = 0.0;
        while term.abs() > 1e-20 * sum.abs() {
            m += 1.0;
            term *= -eta * eta / ((nf + 2.0 * m) * (nf + 2.0 * m + 1.0));
            sum += term;
        }
        Ok(sum)
    } else if eta >= nf + 2.0 {
        // F_m = (m/η) S_{m−1},  S_m = (1 − δ_{m0} cos η)/η − (m/η) F_{m−1}
        let mut f_prev = eta.sin() / eta;
        let mut s_prev = (1.0 - eta.cos()) / eta;
        for m in 1..=n {
            let mf = m as f64;
            let f_m = mf / eta * s_prev;
            let s_m = 1.0 / eta - mf / eta * f_prev;
            f_prev = f_m;
            s_prev = s_m;
        }
        Ok(f_prev)
    } else {
        Ok(cos_quadrature(n, eta, |y| (1.0 - y).powi(n as i32)))
    }
}

/// `H_n(η) = ∫₀¹ (1 − yⁿ) cos(ηy) dy`.
pub fn h_n_eval(n: u32, eta: f64) -> Result<f64> {
    check_index(n)?;
    let eta = eta.abs();
    let nf = n as f64;
    if eta <= 4.0 {
        // Σ_m (−1)^m η^{2m}/(2m)! · n / ((2m + 1)(2m + n + 1))
        let mut power = 1.0;
        let mut sum = nf / (nf + 1.0);
        let mut m = 0.0;
        loop {
            m += 1.0;
            power *= -eta * eta / ((2.0 * m - 1.0) * (2.0 * m));
            let term = power * nf / ((2.0 * m + 1.0) * (2.0 * m + nf + 1.0));
            sum += term;
            if term.abs() <= 1e-20 * sum.abs() {
                break;
            }
        }
        Ok(sum)
    } else if eta >= nf {
        // C_m = ∫ y^m cos,  D_m = ∫ y^m sin
        let (s, c) = eta.sin_cos();
        let mut c_prev = s / eta;
        let mut d_prev = (1.0 - c) / eta;
        for m in 1..=n {
            let mf = m as f64;
            let c_m = s / eta - mf / eta * d_prev;
            let d_m = -c / eta + mf / eta * c_prev;
            c_prev = c_m;
            d_prev = d_m;
        }
        Ok(s / eta - c_prev)
    } else {
        Ok(cos_quadrature(n, eta, |y| 1.0 - y.powi(n as i32)))
    }
}

// Gauss-Kronrod 7/15 on [−1, 1].
const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728,
];
const GAUSS_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl Panel {
    fn new(a: f64, b: f64, g: &impl Fn(f64) -> f64) -> Self {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mid = g(c);
        let mut kronrod = GK_WEIGHTS[7] * mid;
        let mut gauss = GAUSS_WEIGHTS[3] * mid;
        for i in 0..7 {
            let pair = g(c - h * GK_NODES[i]) + g(c + h * GK_NODES[i]);
            kronrod += GK_WEIGHTS[i] * pair;
            if i % 2 == 1 {
                gauss += GAUSS_WEIGHTS[i / 2] * pair;
            }
        }
        Panel {
            a,
            b,
            value: kronrod * h,
            error: ((kronrod - gauss) * h).abs(),
        }
    }
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

/// Globally adaptive panel integration. Panels are summed in order of
/// their left endpoint so the result does not depend on refinement order.
struct Integrator {
    panels: BinaryHeap<Panel>,
    budget: usize,
}

impl Integrator {
    fn new(budget: usize) -> Self {
        Integrator {
            panels: BinaryHeap::new(),
            budget,
        }
    }

    fn cover(&mut self, a: f64, b: f64, width: f64, g: &impl Fn(f64) -> f64) -> Result<()> {
        let count = ((b - a) / width).ceil().max(1.0) as usize;
        if self.panels.len() + count > self.budget {
            return Err(self.exhausted());
        }
        let step = (b - a) / count as f64;
        for i in 0..count {
            let lo = a + step * i as f64;
            let hi = if i + 1 == count { b } else { lo + step };
            self.panels.push(Panel::new(lo, hi, g));
        }
        Ok(())
    }

    fn totals(&self) -> (f64, f64) {
        let mut sorted: Vec<&Panel> = self.panels.iter().collect();
        sorted.sort_by(|p, q| p.a.total_cmp(&q.a));
        sorted
            .iter()
            .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error))
    }

    /// Splits the worst panel until the summed error estimate is below
    /// `target(value)`.
    fn refine(
        &mut self,
        g: &impl Fn(f64) -> f64,
        target: impl Fn(f64) -> f64,
    ) -> Result<(f64, f64)> {
        loop {
            let (value, error) = self.totals();
            if error <= target(value) {
                return Ok((value, error));
            }
            if self.panels.len() >= self.budget {
                return Err(self.exhausted());
            }
            let worst = self.panels.pop().expect("nonempty");
            let mid = 0.5 * (worst.a + worst.b);
            self.panels.push(Panel::new(worst.a, mid, g));
            self.panels.push(Panel::new(mid, worst.b, g));
        }
    }

    fn exhausted(&self) -> Error {
        let (value, _) = self.totals();
        Error::NoConvergence {
            rel_tol: f64::NAN,
            panels: self.budget,
            estimate: value,
        }
    }
}

const PANEL_BUDGET: usize = 400_000;

/// Large-`ω` model of `|f̂|²`. With `s` the first derivative order that
/// jumps, `f̂(ω) = (iω)^{−s−1} [Σ_j J_j e^{−iωx_j} + r(ω)]` with
/// `|r(ω)| ≤ C/ω`, where `J_j` are the jumps of `f^{(s)}` and
/// `C = Σ|jumps of f^{(s+1)}| + ‖f^{(s+2)}‖_{L¹}`.
#[derive(Debug, Clone)]
struct TailModel {
    s: usize,
    jumps: Vec<(f64, f64)>,
    next: f64,
}

impl TailModel {
    fn new(f: &PiecewisePoly, jump_tol: f64) -> Result<Self> {
        let mut level = f.clone();
        let mut s = 0usize;
        let lead = loop {
            if level.is_zero() {
                return Err(Error::ZeroFunction);
            }
            let jumps: Vec<(f64, f64)> = level
                .jumps()
                .iter()
                .map(|(x, j)| (to_f64(x), to_f64(j)))
                .filter(|&(_, j)| j != 0.0 && !(s == 0 && j.abs() <= jump_tol))
                .collect();
            if !jumps.is_empty() {
                break jumps;
            }
            level = level.formal_derivative();
            s += 1;
        };
        let after = level.formal_derivative();
        let jump_mass: f64 = after.jumps().iter().map(|(_, j)| to_f64(j).abs()).sum();
        let l1_bound: f64 = after
            .formal_derivative()
            .intervals()
            .map(|(a, b, p)| p.sup_bound(a, b) * to_f64(&(b - a)))
            .sum();
        Ok(TailModel {
            s,
            jumps: lead,
            next: jump_mass + l1_bound,
        })
    }

    /// `(estimate, error bound)` for `∫_R^∞ ω^k |f̂|² dω`.
    fn tail(&self, k: u32, r: f64) -> (f64, f64) {
        let q = (2 * self.s + 2) as f64 - k as f64;
        let sq: f64 = self.jumps.iter().map(|(_, j)| j * j).sum();
        let lead_mass: f64 = self.jumps.iter().map(|(_, j)| j.abs()).sum();
        let estimate = sq / ((q - 1.0) * r.powf(q - 1.0));
        let mut cross = 0.0;
        for (i, (xi, ji)) in self.jumps.iter().enumerate() {
            for (xl, jl) in &self.jumps[i + 1..] {
                cross += 4.0 * (ji * jl).abs() / (xi - xl).abs();
            }
        }
        let bound = cross / r.powf(q)
            + 2.0 * lead_mass * self.next / (q * r.powf(q))
            + self.next * self.next / ((q + 1.0) * r.powf(q + 1.0));
        (estimate, bound)
    }
}

/// `(1/2π) ∫_ℝ ω^k |f̂(ω)|² dω` for `k ∈ {0, 2}`, exact jump data only.
pub fn quad_freq_moment(f: &PiecewisePoly, k: u32, rel_tol: f64) -> Result<QuadratureResult> {
    quad_freq_moment_tol(f, k, rel_tol, 0.0)
}

/// As [`quad_freq_moment`], treating value jumps of magnitude at most
/// `jump_tol` as zero.
pub fn quad_freq_moment_tol(
    f: &PiecewisePoly,
    k: u32,
    rel_tol: f64,
    jump_tol: f64,
) -> Result<QuadratureResult> {
    if k != 0 && k != 2 {
        return Err(Error::Precondition(format!(
            "frequency moment order must be 0 or 2, got {k}"
        )));
    }
    if rel_tol.is_nan() || rel_tol <= 0.0 {
        return Err(Error::Precondition(format!(
            "rel_tol must be positive, got {rel_tol}"
        )));
    }
    let model = TailModel::new(f, jump_tol)?;
    if k == 2 && model.s == 0 {
        return Err(Error::Divergent {
            k,
            reason: "f jumps or does not vanish at the support edges".into(),
        });
    }
    let transform = Transform::new(f);
    let g = |w: f64| w.powi(k as i32) * transform.eval(w).norm_sqr();
    let (lo, hi) = f.support().expect("nonzero");
    let span = to_f64(&(hi - lo));
    let width = PI / span;
    let shortest = f
        .intervals()
        .map(|(a, b, _)| to_f64(&(b - a)))
        .fold(f64::INFINITY, f64::min);
    let mut integrator = Integrator::new(PANEL_BUDGET);
    let mut covered = 0.0;
    let mut radius = (8.0 * PI * (model.s + 1) as f64 / shortest).max(16.0 * width);
    let guard = |e: Error| match e {
        Error::NoConvergence {
            panels, estimate, ..
        } => Error::NoConvergence {
            rel_tol,
            panels,
            estimate: estimate / PI,
        },
        other => other,
    };
    loop {
        integrator
            .cover(covered, radius, width, &g)
            .map_err(guard)?;
        covered = radius;
        let (body, _) = integrator.totals();
        let (tail, bound) = model.tail(k, radius);
        let target = 0.25 * rel_tol * (body + tail).abs();
        if bound <= target {
            break;
        }
        let q = (2 * model.s + 2) as f64 - k as f64;
        let factor = (bound / target).powf(1.0 / q).clamp(1.5, 64.0);
        radius *= factor;
    }
    let (tail, bound) = model.tail(k, radius);
    let (body, quad_error) = integrator
        .refine(&g, |v| 0.5 * rel_tol * (v + tail).abs())
        .map_err(guard)?;
    Ok(QuadratureResult {
        value: (body + tail) / PI,
        abs_error_estimate: (quad_error + bound) / PI,
        truncation_radius: radius,
    })
}

/// Frequency mean `∫ ω |Ĝ|² / ∫ |Ĝ|²` of the atom built from `envelope`,
/// where `Ĝ(ω) = ĝ_{u,t}(ω − 2πξ)` and `g_{u,t}(x) = g((x − u)/t)`.
/// Both integrals are taken over the window `2πξ ± R` with `R` the
/// truncation radius of the envelope's `k = 0` quadrature; the tails
/// outside the window enter through the estimated `k = 0` tail mass.
pub fn atom_frequency_mean(
    envelope: &PiecewisePoly,
    atom: &AtomParams,
    rel_tol: f64,
) -> Result<QuadratureResult> {
    let t = atom.t();
    let g = envelope.affine(&Rational::one(), &(Rational::one() / t), &(atom.u() / t))?;
    let norm = quad_freq_moment(&g, 0, rel_tol)?;
    let radius = norm.truncation_radius;
    let shift = 2.0 * PI * to_f64(atom.xi());
    let transform = Transform::new(&g);
    let (lo, hi) = g.support().expect("nonzero");
    let width = PI / to_f64(&(hi - lo));
    let weight = |w: f64| transform.eval(w - shift).norm_sqr();
    let first = |w: f64| w * weight(w);
    let mut mass = Integrator::new(PANEL_BUDGET);
    let mut moment = Integrator::new(PANEL_BUDGET);
    mass.cover(shift - radius, shift + radius, width, &weight)?;
    moment.cover(shift - radius, shift + radius, width, &first)?;
    let (m0, e0) = mass.refine(&weight, |v| 0.25 * rel_tol * v.abs())?;
    let (m1, e1) = moment.refine(&first, |v| 0.25 * rel_tol * (shift * m0).abs().max(v.abs()))?;
    // outside the window: mass 2π‖g‖² − m0, centred on 2πξ
    let outside = (2.0 * PI * norm.value - m0).max(0.0);
    let total0 = m0 + outside;
    let total1 = m1 + shift * outside;
    let mean = total1 / total0;
    let spread = 2.0 * PI * norm.abs_error_estimate;
    Ok(QuadratureResult {
        value: mean,
        abs_error_estimate: (e1 + shift.abs() * (e0 + spread)) / total0
            + mean.abs() * (e0 + spread) / total0,
        truncation_radius: radius,
    })
}

/// `∫_ℝ F_n(η)² dη` by panel quadrature on `[0, R]`, doubled. For
/// `η > n + 2`, `|F_n(η)| ≤ 2n/η²`, so the neglected tail is at most
/// `8n²/(3R³)`; `R` is chosen to make that a quarter of `rel_tol`.
pub fn f_n_energy(n: u32, rel_tol: f64) -> Result<QuadratureResult> {
    check_index(n)?;
    if rel_tol.is_nan() || rel_tol <= 0.0 {
        return Err(Error::Precondition(format!(
            "rel_tol must be positive, got {rel_tol}"
        )));
    }
    let nf = n as f64;
    // half the exact value, as a floor for the relative target
    let floor = PI / (4.0 * nf + 2.0);
    let radius = ((32.0 * nf * nf) / (3.0 * rel_tol * floor))
        .cbrt()
        .max(nf + 2.0);
    let g = |eta: f64| {
        let v = f_n_eval(n, eta).expect("n >= 1");
        v * v
    };
    let mut integrator = Integrator::new(PANEL_BUDGET);
    integrator.cover(0.0, radius, 1.0, &g)?;
    let (value, error) = integrator.refine(&g, |v| 0.25 * rel_tol * v.abs())?;
    let tail = 8.0 * nf * nf / (3.0 * radius.powi(3));
    Ok(QuadratureResult {
        value: 2.0 * value,
        abs_error_estimate: 2.0 * error + tail,
        truncation_radius: radius,
    })
}
