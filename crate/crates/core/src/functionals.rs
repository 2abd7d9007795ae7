//! Luxemburg, Orlicz–Lorentz and Torchinsky functionals with certified
//! brackets, and the Hardy operators `f**`, `f_**`.
//!
//! Every modular is evaluated as `ln ∫ exp(E(u)) du` where `E` is
//! piecewise linear in `u = ln x`, so each piece integrates in closed form.
//! The scale is bisected in `s = ln c`.

use serde::{Deserialize, Serialize};

use crate::error::{End, Error, Result};
use crate::phi::{Decision, Extent, PhiFunction};
use crate::quadrature;
use crate::step::{log_sub, LogStep, StepFunction};

pub const DEFAULT_TOL: f64 = 1e-12;
pub const MAX_BISECTION_STEPS: usize = 200;
const MAX_ENVELOPE_CELLS: usize = 1 << 18;

/// Bracket `[lo, hi]` around a norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormResult {
    pub lo: f64,
    pub hi: f64,
    /// Achieved relative width `1 - lo/hi`.
    pub tol: f64,
    pub bisection_steps: usize,
    /// Modular at the geometric midpoint of the bracket.
    pub modular_at_mid: f64,
    pub ln_lo: f64,
    pub ln_hi: f64,
    pub converged: bool,
}

impl NormResult {
    pub fn zero() -> Self {
        NormResult {
            lo: 0.0,
            hi: 0.0,
            tol: 0.0,
            bisection_steps: 0,
            modular_at_mid: 0.0,
            ln_lo: f64::NEG_INFINITY,
            ln_hi: f64::NEG_INFINITY,
            converged: true,
        }
    }

    /// Geometric midpoint of the bracket.
    pub fn value(&self) -> f64 {
        self.ln_value().exp()
    }

    pub fn ln_value(&self) -> f64 {
        if self.ln_hi == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            0.5 * (self.ln_lo + self.ln_hi)
        }
    }

    pub fn contains(&self, x: f64, rel_slack: f64) -> bool {
        x >= self.lo * (1.0 - rel_slack) && x <= self.hi * (1.0 + rel_slack)
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::InvalidParameter(format!("tol must be finite and > 0, got {tol}")));
    }
    Ok(())
}

pub fn log_sum_exp<I: IntoIterator<Item = f64>>(xs: I) -> f64 {
    let v: Vec<f64> = xs.into_iter().filter(|x| *x > f64::NEG_INFINITY).collect();
    let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY || m == f64::INFINITY {
        return m;
    }
    m + v.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// `ln((e^z - 1)/z)`.
fn ln_expm1_over(z: f64) -> f64 {
    if z == 0.0 {
        0.0
    } else if z > 0.0 {
        z + (-(-z).exp_m1()).ln() - z.ln()
    } else {
        (-z.exp_m1()).ln() - (-z).ln()
    }
}

/// `ln ∫_a^b exp(h)` for `h` linear from `ha` to `hb`.
fn log_int_linear(a: f64, b: f64, ha: f64, hb: f64) -> f64 {
    let d = b - a;
    if !(d > 0.0) {
        return f64::NEG_INFINITY;
    }
    ha + d.ln() + ln_expm1_over(hb - ha)
}

/// Bisection on `s = ln c` for the root of a decreasing log-modular.
/// Requires `lm(s_lo) >= 0 >= lm(s_hi)`.
fn solve<M: Fn(f64) -> Result<f64>>(lm: M, mut s_lo: f64, mut s_hi: f64, tol: f64) -> Result<NormResult> {
    if s_lo > s_hi {
        std::mem::swap(&mut s_lo, &mut s_hi);
    }
    let mut steps = 0;
    let mut mid_mod;
    loop {
        let mid = 0.5 * (s_lo + s_hi);
        let m = lm(mid)?;
        mid_mod = m;
        let width = -(s_lo - s_hi).exp_m1();
        if width <= tol && m.exp_m1().abs() <= tol {
            break;
        }
        if steps >= MAX_BISECTION_STEPS || mid <= s_lo || mid >= s_hi {
            break;
        }
        steps += 1;
        if m > 0.0 {
            s_lo = mid;
        } else if m < 0.0 {
            s_hi = mid;
        } else {
            s_lo = mid;
            s_hi = mid;
        }
    }
    let width = -(s_lo - s_hi).exp_m1();
    Ok(NormResult {
        lo: s_lo.exp(),
        hi: s_hi.exp(),
        tol: width,
        bisection_steps: steps,
        modular_at_mid: mid_mod.exp(),
        ln_lo: s_lo,
        ln_hi: s_hi,
        converged: width <= tol,
    })
}

/// Grow a bracket around `s0` until `lm(s_lo) >= 0 >= lm(s_hi)`.
fn expand<M: Fn(f64) -> Result<f64>>(lm: &M, s0: f64) -> Result<(f64, f64)> {
    let mut step = 1.0;
    let mut lo = s0;
    let mut k = 0;
    while lm(lo)? < 0.0 {
        lo -= step;
        step *= 2.0;
        k += 1;
        if k > 64 {
            return Err(Error::NoRoot("modular stays below 1".into()));
        }
    }
    let mut hi = s0;
    step = 1.0;
    k = 0;
    while lm(hi)? > 0.0 {
        hi += step;
        step *= 2.0;
        k += 1;
        if k > 64 {
            return Err(Error::NoRoot("modular stays above 1".into()));
        }
    }
    Ok((lo, hi))
}

fn nonzero_cells(f: &LogStep) -> Vec<(f64, f64)> {
    f.cells()
        .iter()
        .copied()
        .filter(|c| c.1 > f64::NEG_INFINITY)
        .collect()
}

/// `ln Σ len_i F(v_i / c)` at `s = ln c`.
fn luxemburg_log_modular(phi: &PhiFunction, cells: &[(f64, f64)], s: f64) -> f64 {
    log_sum_exp(cells.iter().map(|&(ll, lv)| ll + phi.log_eval(lv - s)))
}

/// `inf{c : Σ len_i F(v_i/c) <= 1}` for a log-domain step function.
pub fn luxemburg_norm_log(phi: &PhiFunction, f: &LogStep, tol: f64) -> Result<NormResult> {
    check_tol(tol)?;
    let cells = nonzero_cells(f);
    if cells.is_empty() {
        return Ok(NormResult::zero());
    }
    let total = log_sum_exp(cells.iter().map(|c| c.0));
    let vmax = cells.iter().map(|c| c.1).fold(f64::NEG_INFINITY, f64::max);
    // every term <= F(v_max/c) len_i, summing to <= 1
    let s_hi = vmax - phi.log_inverse_eval(-total);
    // one term alone reaches 1
    let s_lo = cells
        .iter()
        .map(|&(ll, lv)| lv - phi.log_inverse_eval(-ll))
        .fold(f64::NEG_INFINITY, f64::max);
    solve(|s| Ok(luxemburg_log_modular(phi, &cells, s)), s_lo, s_hi, tol)
}

pub fn luxemburg_norm(phi: &PhiFunction, f: &StepFunction, tol: f64) -> Result<NormResult> {
    luxemburg_norm_log(phi, &f.to_log(), tol)
}

/// Log graph of `x -> G̃(F̃^{-1}(x))`, the map carrying the breakpoints of
/// `f*` to those of `f* ∘ F̃ ∘ G̃^{-1}`.
pub fn transplant_map(f_phi: &PhiFunction, g_phi: &PhiFunction) -> PhiFunction {
    g_phi.tilde().compose(&f_phi.tilde().inverse())
}

/// `L_{F,G}` with its transplant map cached.
#[derive(Debug, Clone)]
pub struct OrliczLorentz {
    f_phi: PhiFunction,
    g_phi: PhiFunction,
    psi: PhiFunction,
}

impl OrliczLorentz {
    pub fn new(f_phi: &PhiFunction, g_phi: &PhiFunction) -> Self {
        OrliczLorentz {
            f_phi: f_phi.clone(),
            g_phi: g_phi.clone(),
            psi: transplant_map(f_phi, g_phi),
        }
    }

    pub fn f_phi(&self) -> &PhiFunction {
        &self.f_phi
    }

    pub fn g_phi(&self) -> &PhiFunction {
        &self.g_phi
    }

    /// `f* ∘ F̃ ∘ G̃^{-1}` as a log-domain step function.
    pub fn transplant(&self, f: &LogStep) -> LogStep {
        let fs = f.rearrange();
        let xs = fs.log_breakpoints();
        let mut prev = f64::NEG_INFINITY;
        let mut cells = Vec::with_capacity(xs.len());
        for (&(_, lv), &x) in fs.cells().iter().zip(&xs) {
            let y = self.psi.log_eval(x);
            if y > prev {
                cells.push((log_sub(y, prev), lv));
                prev = y;
            }
        }
        LogStep::new(cells).expect("transplanted cells are finite")
    }

    /// `ln ∫ G(f*(F̃(G̃^{-1}(y)))/c) dy` at `c = e^s`.
    pub fn log_modular(&self, f: &LogStep, s: f64) -> f64 {
        luxemburg_log_modular(&self.g_phi, self.transplant(f).cells(), s)
    }

    pub fn norm_log(&self, f: &LogStep, tol: f64) -> Result<NormResult> {
        check_tol(tol)?;
        luxemburg_norm_log(&self.g_phi, &self.transplant(f), tol)
    }

    pub fn norm(&self, f: &StepFunction, tol: f64) -> Result<NormResult> {
        self.norm_log(&f.to_log(), tol)
    }
}

pub fn orlicz_lorentz_norm_log(
    f_phi: &PhiFunction,
    g_phi: &PhiFunction,
    f: &LogStep,
    tol: f64,
) -> Result<NormResult> {
    OrliczLorentz::new(f_phi, g_phi).norm_log(f, tol)
}

/// `‖f‖_{F,G} = ‖f* ∘ F̃ ∘ G̃^{-1}‖_G`.
pub fn orlicz_lorentz_norm(
    f_phi: &PhiFunction,
    g_phi: &PhiFunction,
    f: &StepFunction,
    tol: f64,
) -> Result<NormResult> {
    orlicz_lorentz_norm_log(f_phi, g_phi, &f.to_log(), tol)
}

/// `‖f‖_{F,1} = ∫ F̃^{-1}(μ(f >= t)) dt`, a finite layer-cake sum.
pub fn lorentz_one_norm(f_phi: &PhiFunction, f: &StepFunction) -> f64 {
    let fs = f.rearrange();
    let xs = fs.breakpoints();
    let ft = f_phi.tilde();
    let vals: Vec<f64> = fs.cells().iter().map(|c| c.1).collect();
    (0..vals.len())
        .map(|i| {
            let next = vals.get(i + 1).copied().unwrap_or(0.0);
            (vals[i] - next) * ft.eval_inverse(xs[i])
        })
        .sum()
}

/// `inf{c : ∫ G(F̃^{-1}(x) f*(x)/c) dx/x <= 1}`.
pub fn torchinsky_norm(
    f_phi: &PhiFunction,
    g_phi: &PhiFunction,
    f: &StepFunction,
    tol: f64,
) -> Result<NormResult> {
    torchinsky_norm_log(f_phi, g_phi, &f.to_log(), tol)
}

pub fn torchinsky_norm_log(
    f_phi: &PhiFunction,
    g_phi: &PhiFunction,
    f: &LogStep,
    tol: f64,
) -> Result<NormResult> {
    check_tol(tol)?;
    let fs = f.rearrange();
    if fs.cells().is_empty() {
        return Ok(NormResult::zero());
    }
    let w = f_phi.tilde().inverse();
    let xs = fs.log_breakpoints();
    let levels: Vec<f64> = fs.cells().iter().map(|c| c.1).collect();
    let lm = |s: f64| -> Result<f64> {
        let mut terms = Vec::new();
        for (i, &lv) in levels.iter().enumerate() {
            let u0 = if i == 0 { f64::NEG_INFINITY } else { xs[i - 1] };
            let u1 = xs[i];
            let e = |u: f64| g_phi.log_eval(w.log_eval(u) + lv - s);
            let mut pts: Vec<f64> = w
                .knots()
                .iter()
                .map(|k| k.0)
                .chain(g_phi.knots().iter().map(|k| w.log_inverse_eval(k.0 - lv + s)))
                .filter(|&u| u > u0 && u < u1)
                .collect();
            pts.push(u1);
            if u0.is_finite() {
                pts.push(u0);
            }
            pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
            pts.dedup();
            if u0 == f64::NEG_INFINITY {
                let p0 = pts[0];
                let slope = g_phi.tail_lo() / f_phi.tail_hi();
                terms.push(e(p0) - slope.ln());
            }
            for ab in pts.windows(2) {
                terms.push(log_int_linear(ab[0], ab[1], e(ab[0]), e(ab[1])));
            }
        }
        Ok(log_sum_exp(terms))
    };
    let vmax = levels[0];
    let s0 = vmax + w.log_eval(xs[xs.len() - 1]);
    let (lo, hi) = expand(&lm, s0)?;
    solve(lm, lo, hi, tol)
}

/// `b + a/x` on `[x0, x1)`; `x1` may be `+inf`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RationalPiece {
    pub x0: f64,
    pub x1: f64,
    pub b: f64,
    pub a: f64,
}

impl RationalPiece {
    pub fn value(&self, x: f64) -> f64 {
        self.b + self.a / x
    }

    fn is_zero(&self) -> bool {
        self.a == 0.0 && self.b == 0.0
    }

    /// `ln h(e^u)`.
    fn log_value(&self, u: f64) -> f64 {
        if self.a == 0.0 {
            self.b.ln()
        } else if self.b == 0.0 {
            self.a.ln() - u
        } else {
            (self.b + self.a * (-u).exp()).ln()
        }
    }

    fn is_log_linear(&self) -> bool {
        self.a == 0.0 || self.b == 0.0
    }
}

/// Evaluate a piecewise rational function.
pub fn eval_pieces(pieces: &[RationalPiece], x: f64) -> f64 {
    pieces
        .iter()
        .find(|p| x >= p.x0 && x < p.x1)
        .map_or(0.0, |p| p.value(x))
}

/// Orlicz–Lorentz modular of a nonincreasing piecewise rational function.
struct RationalModular<'a> {
    g: &'a PhiFunction,
    psi: PhiFunction,
    pieces: Vec<RationalPiece>,
}

impl<'a> RationalModular<'a> {
    fn new(f_phi: &PhiFunction, g_phi: &'a PhiFunction, pieces: &[RationalPiece]) -> Self {
        RationalModular {
            g: g_phi,
            psi: transplant_map(f_phi, g_phi),
            pieces: pieces.iter().copied().filter(|p| !p.is_zero()).collect(),
        }
    }

    /// `ln ∫ G(h(x)/c) dψ(x)` over one piece.
    fn log_piece(&self, p: &RationalPiece, s: f64) -> Result<f64> {
        let u0 = if p.x0 <= 0.0 { f64::NEG_INFINITY } else { p.x0.ln() };
        let u1 = if p.x1.is_infinite() { f64::INFINITY } else { p.x1.ln() };
        if !p.is_log_linear() && !(u0.is_finite() && u1.is_finite()) {
            return Err(Error::InvalidParameter(
                "mixed rational piece on an unbounded interval".into(),
            ));
        }
        let mut pts: Vec<f64> = self.psi.knots().iter().map(|k| k.0).collect();
        for k in self.g.knots() {
            let target = k.0 + s;
            if p.a == 0.0 {
                continue;
            } else if p.b == 0.0 {
                pts.push(p.a.ln() - target);
            } else {
                let y = target.exp() - p.b;
                if y > 0.0 {
                    pts.push(p.a.ln() - y.ln());
                }
            }
        }
        pts.retain(|&u| u > u0 && u < u1);
        if u0.is_finite() {
            pts.push(u0);
        }
        if u1.is_finite() {
            pts.push(u1);
        }
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        pts.dedup();
        let e = |u: f64, ln_sigma: f64| {
            self.g.log_eval(p.log_value(u) - s) + self.psi.log_eval(u) + ln_sigma
        };
        let mut terms = Vec::with_capacity(pts.len() + 1);
        if u0 == f64::NEG_INFINITY {
            let p0 = pts[0];
            let ls = self.psi.tail_lo().ln();
            let slope = e(p0, ls) - e(p0 - 1.0, ls);
            if !(slope > 0.0) {
                return Err(Error::Divergent { end: End::Zero });
            }
            terms.push(e(p0, ls) - slope.ln());
        }
        if u1 == f64::INFINITY {
            let pl = pts[pts.len() - 1];
            let ls = self.psi.tail_hi().ln();
            let slope = e(pl + 1.0, ls) - e(pl, ls);
            if !(slope < 0.0) {
                return Err(Error::Divergent { end: End::Infinity });
            }
            terms.push(e(pl, ls) - (-slope).ln());
        }
        for ab in pts.windows(2) {
            let (a, b) = (ab[0], ab[1]);
            let ls = self.psi.slope_at(0.5 * (a + b)).ln();
            if p.is_log_linear() {
                terms.push(log_int_linear(a, b, e(a, ls), e(b, ls)));
            } else {
                let m = e(a, ls).max(e(b, ls)).max(e(0.5 * (a + b), ls));
                let (v, _) =
                    quadrature::integrate(|u| (e(u, ls) - m).exp(), a, b, 1e-14, 0.0, 200);
                terms.push(m + v.ln());
            }
        }
        Ok(log_sum_exp(terms))
    }

    fn log_modular(&self, s: f64) -> Result<f64> {
        let mut terms = Vec::with_capacity(self.pieces.len());
        for p in &self.pieces {
            terms.push(self.log_piece(p, s)?);
        }
        Ok(log_sum_exp(terms))
    }

    fn norm(&self, tol: f64) -> Result<NormResult> {
        if self.pieces.is_empty() {
            return Ok(NormResult::zero());
        }
        let top = &self.pieces[0];
        let x = if top.x1.is_finite() { top.x1 } else { top.x0.max(1.0) };
        let s0 = top.value(x).ln();
        // divergence does not depend on the scale, so surface it first
        self.log_modular(s0)?;
        let (lo, hi) = expand(&|s| self.log_modular(s), s0)?;
        solve(|s| self.log_modular(s), lo, hi, tol)
    }
}

/// `‖h‖_{F,G}` for a nonincreasing piecewise rational `h`.
pub fn orlicz_lorentz_norm_rational(
    f_phi: &PhiFunction,
    g_phi: &PhiFunction,
    pieces: &[RationalPiece],
    tol: f64,
) -> Result<NormResult> {
    check_tol(tol)?;
    RationalModular::new(f_phi, g_phi, pieces).norm(tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HardyKind {
    /// `f**(x) = (1/x) ∫_0^x f*`.
    Star,
    /// `f_**(x) = f*(x) + (1/x) ∫_x^∞ f*`.
    LowerStar,
}

/// Exact piecewise form of `f**`.
pub fn hardy_star_exact(f: &StepFunction) -> Vec<RationalPiece> {
    let fs = f.rearrange();
    let mut out = Vec::with_capacity(fs.cells().len() + 1);
    let (mut x, mut c) = (0.0, 0.0);
    for &(len, v) in fs.cells() {
        let x1 = x + len;
        out.push(RationalPiece {
            x0: x,
            x1,
            b: v,
            a: (c - v * x).max(0.0),
        });
        c += v * len;
        x = x1;
    }
    if c > 0.0 {
        out.push(RationalPiece {
            x0: x,
            x1: f64::INFINITY,
            b: 0.0,
            a: c,
        });
    }
    out
}

/// Exact piecewise form of `f_**`; each piece is a pure `a/x`.
pub fn hardy_lowerstar_exact(f: &StepFunction) -> Vec<RationalPiece> {
    let fs = f.rearrange();
    let cells = fs.cells();
    let mut tails = vec![0.0; cells.len()];
    let mut r = 0.0;
    for i in (0..cells.len()).rev() {
        tails[i] = r;
        r += cells[i].0 * cells[i].1;
    }
    let mut x = 0.0;
    cells
        .iter()
        .zip(&tails)
        .map(|(&(len, v), &r)| {
            let x1 = x + len;
            let p = RationalPiece {
                x0: x,
                x1,
                b: 0.0,
                a: v * x1 + r,
            };
            x = x1;
            p
        })
        .collect()
}

/// Step sandwich of a Hardy operator output.
///
/// The graph is split into an exact head on `(0, body_start]` (present
/// only when the operator is unbounded at 0), step envelopes `lower` and
/// `upper` whose cells start at `body_start`, and an exact tail beyond the
/// body.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardyEnvelope {
    pub kind: HardyKind,
    pub exact: Vec<RationalPiece>,
    pub head: Option<RationalPiece>,
    pub body_start: f64,
    pub lower: StepFunction,
    pub upper: StepFunction,
    pub tail: Option<RationalPiece>,
    pub refinement_depth: u32,
}

impl HardyEnvelope {
    fn build(kind: HardyKind, exact: Vec<RationalPiece>, depth: u32) -> Self {
        let mut body: Vec<RationalPiece> = exact.clone();
        let tail = match body.last() {
            Some(p) if p.x1.is_infinite() => body.pop(),
            _ => None,
        };
        let mut head = None;
        let mut body_start = 0.0;
        if let Some(first) = body.first_mut() {
            if first.x0 == 0.0 && first.a > 0.0 {
                let h = first.x1 / 2f64.powi(depth as i32);
                head = Some(RationalPiece { x1: h, ..*first });
                body_start = h;
                first.x0 = h;
                if h >= first.x1 {
                    body.remove(0);
                }
            }
        }
        let n = 1usize << depth;
        let (mut lower, mut upper) = (Vec::new(), Vec::new());
        for p in &body {
            if p.a == 0.0 {
                lower.push((p.x1 - p.x0, p.b));
                upper.push((p.x1 - p.x0, p.b));
                continue;
            }
            let r = (p.x1 / p.x0).ln();
            let mut left = p.x0;
            for k in 1..=n {
                let right = if k == n { p.x1 } else { p.x0 * (r * k as f64 / n as f64).exp() };
                if right > left {
                    lower.push((right - left, p.value(right)));
                    upper.push((right - left, p.value(left)));
                }
                left = right;
            }
        }
        HardyEnvelope {
            kind,
            exact,
            head,
            body_start,
            lower: StepFunction::new(lower).expect("envelope cells are valid"),
            upper: StepFunction::new(upper).expect("envelope cells are valid"),
            tail,
            refinement_depth: depth,
        }
    }

    pub fn refined(&self) -> Self {
        Self::build(self.kind, self.exact.clone(), self.refinement_depth + 1)
    }

    fn as_pieces(&self, steps: &StepFunction) -> Vec<RationalPiece> {
        let mut out: Vec<RationalPiece> = self.head.iter().copied().collect();
        let mut x = self.body_start;
        for &(len, v) in steps.cells() {
            out.push(RationalPiece {
                x0: x,
                x1: x + len,
                b: v,
                a: 0.0,
            });
            x += len;
        }
        out.extend(self.tail);
        out
    }

    pub fn lower_pieces(&self) -> Vec<RationalPiece> {
        self.as_pieces(&self.lower)
    }

    pub fn upper_pieces(&self) -> Vec<RationalPiece> {
        self.as_pieces(&self.upper)
    }

    /// `(lower, upper)` at `x`.
    pub fn bounds_at(&self, x: f64) -> (f64, f64) {
        (
            eval_pieces(&self.lower_pieces(), x),
            eval_pieces(&self.upper_pieces(), x),
        )
    }

    pub fn exact_at(&self, x: f64) -> f64 {
        eval_pieces(&self.exact, x)
    }
}

/// `f**` with its step envelope at `depth`.
pub fn hardy_star(f: &StepFunction, depth: u32) -> HardyEnvelope {
    HardyEnvelope::build(HardyKind::Star, hardy_star_exact(f), depth)
}

/// `f_**` with its step envelope at `depth`.
pub fn hardy_lowerstar(f: &StepFunction, depth: u32) -> HardyEnvelope {
    HardyEnvelope::build(HardyKind::LowerStar, hardy_lowerstar_exact(f), depth)
}

/// `[‖lower‖_{F,G}, ‖upper‖_{F,G}]`, refining until the relative width is
/// at most `tol`. `converged` is false when the cell budget ran out first.
pub fn norm_of_envelope(
    f_phi: &PhiFunction,
    g_phi: &PhiFunction,
    env: &HardyEnvelope,
    tol: f64,
) -> Result<NormResult> {
    check_tol(tol)?;
    let mut env = env.clone();
    loop {
        let lo = orlicz_lorentz_norm_rational(f_phi, g_phi, &env.lower_pieces(), tol)?;
        let hi = orlicz_lorentz_norm_rational(f_phi, g_phi, &env.upper_pieces(), tol)?;
        if hi.hi == 0.0 {
            return Ok(NormResult::zero());
        }
        let width = -(lo.ln_lo - hi.ln_hi).exp_m1();
        let cells = env.upper.cells().len();
        if width <= tol || 2 * cells > MAX_ENVELOPE_CELLS || cells == 0 {
            return Ok(NormResult {
                lo: lo.lo,
                hi: hi.hi,
                tol: width,
                bisection_steps: lo.bisection_steps + hi.bisection_steps,
                modular_at_mid: hi.modular_at_mid,
                ln_lo: lo.ln_lo,
                ln_hi: hi.ln_hi,
                converged: width <= tol,
            });
        }
        env = env.refined();
    }
}

/// `‖f**‖_{F,G}` or `‖f_**‖_{F,G}` from the exact piecewise form.
pub fn hardy_norm(
    f_phi: &PhiFunction,
    g_phi: &PhiFunction,
    f: &StepFunction,
    kind: HardyKind,
    tol: f64,
) -> Result<NormResult> {
    let pieces = match kind {
        HardyKind::Star => hardy_star_exact(f),
        HardyKind::LowerStar => hardy_lowerstar_exact(f),
    };
    orlicz_lorentz_norm_rational(f_phi, g_phi, &pieces, tol)
}

/// Outcome of the condition (J) functional `‖1/H̃*^{-1}‖_{H*}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionJ {
    /// Norm of the restriction to `domain_cut`.
    pub cut_norm: NormResult,
    pub domain_cut: (f64, f64),
    /// Slope in `u = ln x` of `ln(x H*(h(x)/c))` at each end, at the cut
    /// norm. Integrable ends have a positive slope at 0 and a negative one
    /// at infinity.
    pub exponent_at_zero: f64,
    pub exponent_at_infinity: f64,
    /// `Yes` when the full norm is finite.
    pub finite: Decision,
    pub divergent_ends: Vec<End>,
}

/// Condition (J) for an N-function `H`.
///
/// Complete representations are decided from their tails, where the
/// integrand exponent is exactly 0 and both ends diverge. Window or
/// declared representations are judged by the exponent on the outermost
/// represented pieces inside the cut (a ratio test on the window), with
/// `Indeterminate` when it does not decay.
pub fn condition_j_norm(h: &PhiFunction, domain_cut: (f64, f64), tol: f64) -> Result<ConditionJ> {
    check_tol(tol)?;
    let (x_lo, x_hi) = domain_cut;
    if !(x_lo > 0.0) || !(x_hi > x_lo) || !x_hi.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "domain cut must satisfy 0 < lo < hi < inf, got ({x_lo}, {x_hi})"
        )));
    }
    let hs = h.complementary()?;
    let w = hs.tilde().inverse();
    let (u_lo, u_hi) = (x_lo.ln(), x_hi.ln());
    let mut base: Vec<f64> = w.knots().iter().map(|k| k.0).filter(|&u| u > u_lo && u < u_hi).collect();
    base.push(u_lo);
    base.push(u_hi);
    let e = |u: f64, s: f64| hs.log_eval(-w.log_eval(u) - s) + u;
    let lm = |s: f64| -> Result<f64> {
        let mut pts = base.clone();
        pts.extend(
            hs.knots()
                .iter()
                .map(|k| w.log_inverse_eval(-k.0 - s))
                .filter(|&u| u > u_lo && u < u_hi),
        );
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        pts.dedup();
        Ok(log_sum_exp(
            pts.windows(2)
                .map(|ab| log_int_linear(ab[0], ab[1], e(ab[0], s), e(ab[1], s))),
        ))
    };
    let s0 = -w.log_eval(u_lo);
    let (lo, hi) = expand(&lm, s0)?;
    let cut_norm = solve(lm, lo, hi, tol)?;
    let s = cut_norm.ln_value();

    let (exp0, exp_inf, tails_exact) = match h.extent() {
        Extent::Complete => {
            // beyond every knot the exponent is constant; probe it far out
            let (a, b) = w.span();
            let c = hs.span();
            let far = 1.0 + (a.abs() + b.abs() + c.0.abs() + c.1.abs() + s.abs()) * 4.0;
            let z = e(-far, s) - e(-far - 1.0, s);
            let i = e(far + 1.0, s) - e(far, s);
            (z, i, true)
        }
        _ => {
            let d = ((u_hi - u_lo) / 64.0).min(1.0);
            let z = (e(u_lo + d, s) - e(u_lo, s)) / d;
            let i = (e(u_hi, s) - e(u_hi - d, s)) / d;
            (z, i, false)
        }
    };
    let eps = 1e-9;
    let mut divergent_ends = Vec::new();
    if exp0 <= eps {
        divergent_ends.push(End::Zero);
    }
    if exp_inf >= -eps {
        divergent_ends.push(End::Infinity);
    }
    let finite = if divergent_ends.is_empty() {
        Decision::Yes
    } else if tails_exact {
        Decision::No
    } else {
        Decision::Indeterminate {
            lo: cut_norm.lo,
            hi: f64::INFINITY,
        }
    };
    Ok(ConditionJ {
        cut_norm,
        domain_cut,
        exponent_at_zero: exp0,
        exponent_at_infinity: exp_inf,
        finite,
        divergent_ends,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pw(p: f64) -> PhiFunction {
        PhiFunction::power(p).unwrap()
    }

    fn close(a: f64, b: f64, rtol: f64) -> bool {
        (a - b).abs() <= rtol * b.abs().max(1e-300)
    }

    fn mixed() -> PhiFunction {
        PhiFunction::from_loglog(vec![(-1.0, -2.0), (0.5, 0.25), (2.0, 4.0)], vec![1.5, 2.5], 2.0, 1.2)
            .unwrap()
    }

    #[test]
    fn luxemburg_examples() {
        let f = StepFunction::new(vec![(4.0, 3.0)]).unwrap();
        let r = luxemburg_norm(&pw(2.0), &f, 1e-12).unwrap();
        assert!(r.lo <= 6.0 && 6.0 <= r.hi && r.converged, "{r:?}");
        assert!((r.modular_at_mid - 1.0).abs() <= 1e-12);
        let g = StepFunction::new(vec![(1.0, 2.0), (2.0, 1.0)]).unwrap();
        assert!(close(luxemburg_norm(&pw(1.0), &g, 1e-12).unwrap().value(), 4.0, 1e-12));
        assert_eq!(luxemburg_norm(&pw(2.0), &StepFunction::zero(), 1e-12).unwrap().hi, 0.0);
        assert!(luxemburg_norm(&pw(2.0), &f, 0.0).is_err());
    }

    #[test]
    fn orlicz_lorentz_examples() {
        let chi = StepFunction::indicator(4.0).unwrap();
        let r = orlicz_lorentz_norm(&pw(2.0), &pw(1.0), &chi, 1e-13).unwrap();
        assert!(close(r.value(), 2.0, 1e-12), "{r:?}");
        let f = StepFunction::new(vec![(4.0, 3.0)]).unwrap();
        let r = orlicz_lorentz_norm(&pw(2.0), &pw(2.0), &f, 1e-13).unwrap();
        assert!(close(r.value(), 6.0, 1e-12));
    }

    #[test]
    fn torchinsky_examples() {
        for (p, q) in [(1.0, 1.0), (2.0, 1.0), (1.0, 2.0), (3.0, 1.5)] {
            for s in [1e-3, 0.7, 5.0, 1e4] {
                let chi = StepFunction::indicator(s).unwrap();
                let r = torchinsky_norm(&pw(p), &pw(q), &chi, 1e-13).unwrap();
                let want = (p / q).powf(1.0 / q) * s.powf(1.0 / p);
                assert!(close(r.value(), want, 1e-11), "{p} {q} {s} {r:?} {want}");
            }
        }
    }

    #[test]
    fn hardy_exact_forms() {
        let chi = StepFunction::indicator(1.0).unwrap();
        let st = hardy_star_exact(&chi);
        assert_eq!(eval_pieces(&st, 0.5), 1.0);
        assert_eq!(eval_pieces(&st, 4.0), 0.25);
        let ls = hardy_lowerstar_exact(&chi);
        assert_eq!(eval_pieces(&ls, 0.5), 2.0);
        assert_eq!(eval_pieces(&ls, 2.0), 0.0);
        let f = StepFunction::new(vec![(1.0, 2.0), (1.0, 1.0)]).unwrap();
        let ls = hardy_lowerstar_exact(&f);
        assert!(close(eval_pieces(&ls, 0.25), 12.0, 1e-15));
        assert!(close(eval_pieces(&ls, 1.5), 2.0 / 1.5, 1e-15));
        assert_eq!(eval_pieces(&ls, 2.5), 0.0);
    }

    #[test]
    fn envelope_sandwich() {
        let f = StepFunction::new(vec![(0.5, 3.0), (1.0, 1.0), (2.0, 2.5)]).unwrap();
        for env in [hardy_star(&f, 3), hardy_lowerstar(&f, 3)] {
            for k in 1..400 {
                let x = k as f64 * 0.01;
                let (lo, hi) = env.bounds_at(x);
                let t = env.exact_at(x);
                assert!(lo <= t * (1.0 + 1e-14) && t <= hi * (1.0 + 1e-14), "{x} {lo} {t} {hi}");
            }
            assert!(env.lower.cells().windows(2).all(|w| w[0].1 >= w[1].1));
            assert!(env.upper.cells().windows(2).all(|w| w[0].1 >= w[1].1));
        }
    }

    #[test]
    fn envelope_norm_of_indicator_in_l2() {
        let chi = StepFunction::indicator(1.0).unwrap();
        let r = norm_of_envelope(&pw(2.0), &pw(2.0), &hardy_star(&chi, 0), 1e-12).unwrap();
        assert!(close(r.value(), 2f64.sqrt(), 1e-12), "{r:?}");
        let z = norm_of_envelope(&pw(2.0), &pw(2.0), &hardy_star(&StepFunction::zero(), 2), 1e-12).unwrap();
        assert_eq!(z.hi, 0.0);
    }

    #[test]
    fn envelope_bracket_shrinks_and_holds_exact() {
        let f = StepFunction::new(vec![(0.5, 3.0), (1.0, 2.0), (2.0, 0.5)]).unwrap();
        let (fp, gp) = (mixed(), pw(1.7));
        let exact = hardy_norm(&fp, &gp, &f, HardyKind::Star, 1e-12).unwrap();
        let mut prev = f64::INFINITY;
        for depth in 0..6 {
            let env = hardy_star(&f, depth);
            let lo = orlicz_lorentz_norm_rational(&fp, &gp, &env.lower_pieces(), 1e-13).unwrap();
            let hi = orlicz_lorentz_norm_rational(&fp, &gp, &env.upper_pieces(), 1e-13).unwrap();
            assert!(lo.lo <= exact.hi && exact.lo <= hi.hi);
            assert!(hi.hi - lo.lo <= prev);
            prev = hi.hi - lo.lo;
        }
    }

    #[test]
    fn rational_path_agrees_with_transplant() {
        let f = StepFunction::new(vec![(0.3, 2.0), (1.1, 5.0), (2.0, 0.4), (0.2, 0.0)]).unwrap();
        let fs = f.rearrange();
        let mut x = 0.0;
        let pieces: Vec<RationalPiece> = fs
            .cells()
            .iter()
            .map(|&(l, v)| {
                x += l;
                RationalPiece { x0: x - l, x1: x, b: v, a: 0.0 }
            })
            .collect();
        for (fp, gp) in [(mixed(), pw(1.3)), (pw(2.0), mixed()), (mixed(), mixed().tilde())] {
            let a = orlicz_lorentz_norm(&fp, &gp, &f, 1e-13).unwrap();
            let b = orlicz_lorentz_norm_rational(&fp, &gp, &pieces, 1e-13).unwrap();
            assert!(close(a.value(), b.value(), 1e-11), "{a:?} {b:?}");
        }
    }

    #[test]
    fn hardy_norm_diverges_for_l1_lower_tail() {
        let chi = StepFunction::indicator(1.0).unwrap();
        let err = hardy_norm(&pw(1.0), &pw(2.0), &chi, HardyKind::Star, 1e-12).unwrap_err();
        assert_eq!(err, Error::Divergent { end: End::Infinity });
        // f_** is 1/x near 0
        let err = hardy_norm(&pw(1.0), &pw(2.0), &chi, HardyKind::LowerStar, 1e-12).unwrap_err();
        assert_eq!(err, Error::Divergent { end: End::Zero });
        // ∫_0^1 x^{-1/2} = 2, so ‖1/x on (0,1)‖_{1/2} = 4
        let r = hardy_norm(&pw(0.5), &pw(0.5), &chi, HardyKind::LowerStar, 1e-12).unwrap();
        assert!(close(r.value(), 4.0, 1e-11), "{r:?}");
    }

    #[test]
    fn layer_cake_matches_lorentz_one() {
        let f = StepFunction::new(vec![(0.3, 2.0), (1.1, 5.0), (2.0, 0.4)]).unwrap();
        for fp in [pw(2.0), mixed()] {
            let direct = orlicz_lorentz_norm(&fp, &pw(1.0), &f, 1e-13).unwrap().value();
            assert!(close(lorentz_one_norm(&fp, &f), direct, 1e-11));
        }
    }

    #[test]
    fn condition_j_powers_diverge() {
        let r = condition_j_norm(&pw(2.0), (1e-3, 1e3), 1e-12).unwrap();
        assert_eq!(r.finite, Decision::No);
        assert_eq!(r.divergent_ends, vec![End::Zero, End::Infinity]);
        assert!(r.cut_norm.hi > 0.0);
        assert!(condition_j_norm(&pw(0.5), (1e-3, 1e3), 1e-12).is_err());
    }
}
