//! φ-functions whose Orlicz–Lorentz spaces separate the Boyd and Zippin
//! indices, built from blocks of alternating power pieces, together with
//! the step-function witnesses that pin down the dilation norms.
//!
//! All breakpoints live in log coordinates: the block anchors grow
//! super-geometrically and leave the range of `f64` after a few blocks.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functionals::{NormResult, OrliczLorentz};
use crate::phi::{Asymptotics, EndRange, Extent, PhiFunction, Provenance};
use crate::step::LogStep;

const NORM_TOL: f64 = 1e-13;

/// `M a^{-p}(1 - a^{-(p+q)}) + a^{-2p-q} - 1` at `a = e^x`.
pub fn block_residual(p: f64, q: f64, m: u64, x: f64) -> f64 {
    m as f64 * (-p * x).exp() * (-(-(p + q) * x).exp_m1()) + (-(2.0 * p + q) * x).exp() - 1.0
}

fn check_exponents(p: f64, q: f64) -> Result<()> {
    if !(p > 0.0 && q > 0.0) || !p.is_finite() || !q.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "exponents must be finite and > 0, got p={p}, q={q}"
        )));
    }
    Ok(())
}

/// `ln a` for the root `a > 1` of `M a^{-p}(1 - a^{-(p+q)}) + a^{-2p-q} = 1`.
pub fn solve_block_scale_log(p: f64, q: f64, m: u64) -> Result<f64> {
    check_exponents(p, q)?;
    let mf = m as f64;
    if !(mf * (p + q) > 2.0 * p + q) {
        return Err(Error::NoRoot(format!(
            "M(p+q) = {} must exceed 2p+q = {} for a root a > 1",
            mf * (p + q),
            2.0 * p + q
        )));
    }
    // the left side rises from 1 at a = 1 to a single peak, then decays
    let mut lo = ((2.0 * p + q) * (mf - 1.0) / (mf * p)).ln() / (p + q);
    let mut hi = (mf + 1.0).ln() / p;
    while block_residual(p, q, m, hi) >= 0.0 {
        hi *= 2.0;
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if block_residual(p, q, m, mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(if block_residual(p, q, m, lo).abs() <= block_residual(p, q, m, hi).abs() {
        lo
    } else {
        hi
    })
}

/// The root `a > 1`; see [`solve_block_scale_log`].
pub fn solve_block_scale(p: f64, q: f64, m: u64) -> Result<f64> {
    Ok(solve_block_scale_log(p, q, m)?.exp())
}

/// One block in the shape required by the witness construction:
/// `G̃(M a^{2n} t) = L a^{(p+q)n} t^p` and
/// `G̃(M a^{2n+1} t) = L a^{(p+q)n+p} t^q` for `1 <= t <= a`,
/// `n0 <= n <= n1 + 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaBlock {
    pub label: String,
    pub p: f64,
    pub q: f64,
    pub ln_a: f64,
    /// Number of full periods `n1 - n0 + 1` entering the normalisation.
    pub terms: u64,
    pub ln_anchor_m: f64,
    pub ln_anchor_l: f64,
    pub n0: u64,
    pub n1: u64,
}

impl LemmaBlock {
    /// Block with anchors `M`, `L` and `terms` periods starting at `n0 = 0`.
    pub fn new(label: &str, p: f64, q: f64, terms: u64, ln_anchor_m: f64, ln_anchor_l: f64) -> Result<Self> {
        let ln_a = solve_block_scale_log(p, q, terms)?;
        Ok(LemmaBlock {
            label: label.to_string(),
            p,
            q,
            ln_a,
            terms,
            ln_anchor_m,
            ln_anchor_l,
            n0: 0,
            n1: terms - 1,
        })
    }

    pub fn a(&self) -> f64 {
        self.ln_a.exp()
    }

    pub fn theta_max(&self) -> f64 {
        (self.q / self.p).min(1.0)
    }

    /// The telescoped modular `terms a^{-p}(1 - a^{-(p+q)}) + a^{-2p-q}`.
    pub fn closed_form_modular(&self) -> f64 {
        block_residual(self.p, self.q, self.terms, self.ln_a) + 1.0
    }

    /// The block's pieces of `G̃` as `(u, v)` knots from `M a^{2 n0}` to
    /// `M a^{2 n1 + 4}`.
    pub fn knots(&self) -> Vec<(f64, f64)> {
        let la = self.ln_a;
        let (p, q) = (self.p, self.q);
        (2 * self.n0..=2 * self.n1 + 4)
            .map(|j| {
                let n = (j / 2) as f64;
                let extra = if j % 2 == 1 { p * la } else { 0.0 };
                (
                    self.ln_anchor_m + j as f64 * la,
                    self.ln_anchor_l + (p + q) * n * la + extra,
                )
            })
            .collect()
    }
}

/// The witness pair `(f, g)` with `g = a^{-(p/q)θ} d_{a^{-θ}} f`.
///
/// `f(Mx) = M^{-1} a^{-2n0-3}` on `[0, a^{2n0})` and `M^{-1} a^{-2n-3}` on
/// `[a^{2n}, a^{2n+2})` for `n0 <= n <= n1`; the first two cells share a
/// value, so there are `n1 - n0 + 2` cells.
pub fn lemma43_witnesses(block: &LemmaBlock, theta: f64) -> Result<(LogStep, LogStep)> {
    if !(theta >= 0.0 && theta <= block.theta_max()) {
        return Err(Error::InvalidParameter(format!(
            "theta must lie in [0, {}], got {theta}",
            block.theta_max()
        )));
    }
    let la = block.ln_a;
    let lm = block.ln_anchor_m;
    // ln(a^2 - 1)
    let ln_gap = 2.0 * la + (-(-2.0 * la).exp_m1()).ln();
    let mut f = Vec::with_capacity((block.n1 - block.n0 + 2) as usize);
    let n0 = block.n0 as f64;
    f.push((lm + 2.0 * n0 * la, -lm - (2.0 * n0 + 3.0) * la));
    for n in block.n0..=block.n1 {
        let n = n as f64;
        f.push((lm + 2.0 * n * la + ln_gap, -lm - (2.0 * n + 3.0) * la));
    }
    let shift = block.p / block.q * theta * la;
    let g = f.iter().map(|&(l, v)| (l + theta * la, v - shift)).collect();
    Ok((LogStep::new(f)?, LogStep::new(g)?))
}

/// Block counts `(M_k, N_k)` per block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Schedule {
    /// `M_k = N_k = 2^{k+1}`.
    Pow2,
    Explicit(Vec<(u64, u64)>),
}

impl Schedule {
    fn counts(&self, k: usize) -> Result<(u64, u64)> {
        match self {
            Schedule::Pow2 => {
                if k >= 62 {
                    return Err(Error::Infeasible(format!("block {k} overflows the pow2 schedule")));
                }
                Ok((1u64 << (k + 1), 1u64 << (k + 1)))
            }
            Schedule::Explicit(v) => v.get(k).copied().ok_or_else(|| {
                Error::Infeasible(format!("explicit schedule has no entry for block {k}"))
            }),
        }
    }
}

/// One period of the construction: an `a`-block from `A_k` to `B_k` and a
/// `b`-block from `B_k` to `A_{k+1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockPlan {
    pub k: usize,
    pub m: u64,
    pub n: u64,
    pub ln_a: f64,
    pub ln_b: f64,
    pub ln_big_a: f64,
    pub ln_big_b: f64,
    /// `ln G(A_k)` and `ln G(B_k)`.
    pub ln_g_big_a: f64,
    pub ln_g_big_b: f64,
}

/// Parameters of the Boyd/Zippin separating construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleSpec {
    pub p: f64,
    pub q: f64,
    pub blocks: Vec<BlockPlan>,
}

impl CounterexampleSpec {
    pub fn new(p: f64, q: f64, blocks: usize, schedule: &Schedule) -> Result<Self> {
        check_exponents(p, q)?;
        if !(p < q) {
            return Err(Error::InvalidParameter(format!("need p < q, got p={p}, q={q}")));
        }
        if blocks == 0 {
            return Err(Error::InvalidParameter("at least one block is required".into()));
        }
        let (mut ln_big_a, mut ln_g) = (0.0, 0.0);
        let mut plans: Vec<BlockPlan> = Vec::with_capacity(blocks);
        for k in 0..blocks {
            let (m, n) = schedule.counts(k)?;
            let ln_a = solve_block_scale_log(p, q, m).map_err(|e| Error::Infeasible(format!("a_{k}: {e}")))?;
            let ln_b = solve_block_scale_log(q, p, n).map_err(|e| Error::Infeasible(format!("b_{k}: {e}")))?;
            if let Some(prev) = plans.last() {
                if !(ln_a > prev.ln_a && ln_b > prev.ln_b) {
                    return Err(Error::Infeasible(format!(
                        "scales must increase strictly: block {k} has a={}, b={} after a={}, b={}",
                        ln_a.exp(),
                        ln_b.exp(),
                        prev.ln_a.exp(),
                        prev.ln_b.exp()
                    )));
                }
            }
            let ln_big_b = ln_big_a + (2 * m + 2) as f64 * ln_a;
            let ln_g_big_b = ln_g + (m + 1) as f64 * (p + q) * ln_a;
            plans.push(BlockPlan {
                k,
                m,
                n,
                ln_a,
                ln_b,
                ln_big_a,
                ln_big_b,
                ln_g_big_a: ln_g,
                ln_g_big_b,
            });
            ln_big_a = ln_big_b + (2 * n + 2) as f64 * ln_b;
            ln_g = ln_g_big_b + (n + 1) as f64 * (p + q) * ln_b;
        }
        Ok(CounterexampleSpec { p, q, blocks: plans })
    }

    /// Normalisation residuals `(a_k, b_k)` per block.
    pub fn residuals(&self) -> Vec<(f64, f64)> {
        self.blocks
            .iter()
            .map(|b| {
                (
                    block_residual(self.p, self.q, b.m, b.ln_a),
                    block_residual(self.q, self.p, b.n, b.ln_b),
                )
            })
            .collect()
    }

    /// Witness blocks: `a_k` with exponents `(p, q)`, `b_k` with `(q, p)`.
    pub fn lemma_blocks(&self) -> Vec<LemmaBlock> {
        let mut out = Vec::with_capacity(2 * self.blocks.len());
        for b in &self.blocks {
            out.push(LemmaBlock {
                label: format!("a{}", b.k),
                p: self.p,
                q: self.q,
                ln_a: b.ln_a,
                terms: b.m,
                ln_anchor_m: b.ln_big_a,
                ln_anchor_l: b.ln_g_big_a,
                n0: 0,
                n1: b.m - 1,
            });
            out.push(LemmaBlock {
                label: format!("b{}", b.k),
                p: self.q,
                q: self.p,
                ln_a: b.ln_b,
                terms: b.n,
                ln_anchor_m: b.ln_big_b,
                ln_anchor_l: b.ln_g_big_b,
                n0: 0,
                n1: b.n - 1,
            });
        }
        out
    }
}

/// Assemble `t >= 1` knots from blocks, mirror them through the origin and
/// attach the declared asymptotics.
fn assemble(upper: Vec<(f64, f64)>, upper_slopes: Vec<f64>, tail: f64, asym: Asymptotics) -> PhiFunction {
    let mut knots: Vec<(f64, f64)> = upper.iter().rev().map(|&(u, v)| (-u, -v)).collect();
    let mut slopes: Vec<f64> = upper_slopes.iter().rev().copied().collect();
    knots.extend_from_slice(&upper[1..]);
    slopes.extend_from_slice(&upper_slopes);
    PhiFunction::from_parts(knots, slopes, tail, tail, Provenance::Counterexample, Extent::Declared(asym))
}

/// Knots and slopes of one block of `2 periods + 2` pieces starting at
/// `(ln_start, ln_value)` with even pieces of slope `s_even`.
fn block_pieces(
    ln_start: f64,
    ln_value: f64,
    ln_a: f64,
    periods: u64,
    s_even: f64,
    s_odd: f64,
    knots: &mut Vec<(f64, f64)>,
    slopes: &mut Vec<f64>,
) {
    for j in 1..=2 * periods + 2 {
        let n = (j / 2) as f64;
        let extra = if j % 2 == 1 { s_even * ln_a } else { 0.0 };
        knots.push((ln_start + j as f64 * ln_a, ln_value + (s_even + s_odd) * n * ln_a + extra));
        slopes.push(if j % 2 == 1 { s_even } else { s_odd });
    }
}

fn near(x: (f64, f64), y: (f64, f64)) -> bool {
    let tol = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0);
    tol(x.0, y.0) && tol(x.1, y.1)
}

/// `G` with `G(1) = 1`, the `a`-blocks `G(A_k a^{2n} t) = G(A_k) a^{(p+q)n} t^p`,
/// `G(A_k a^{2n+1} t) = G(A_k) a^{(p+q)n+p} t^q`, the `b`-blocks with `p`
/// and `q` exchanged, and `G = G̃` below 1.
pub fn build_theorem41_phi(spec: &CounterexampleSpec) -> Result<PhiFunction> {
    let (p, q) = (spec.p, spec.q);
    let mut knots = vec![(0.0, 0.0)];
    let mut slopes = Vec::new();
    for b in &spec.blocks {
        let last = *knots.last().unwrap();
        if !near(last, (b.ln_big_a, b.ln_g_big_a)) {
            return Err(Error::Inconsistent(format!("block {} does not start at A_{}", b.k, b.k)));
        }
        let n = knots.len();
        knots[n - 1] = (b.ln_big_a, b.ln_g_big_a);
        block_pieces(b.ln_big_a, b.ln_g_big_a, b.ln_a, b.m, p, q, &mut knots, &mut slopes);
        let last = *knots.last().unwrap();
        if !near(last, (b.ln_big_b, b.ln_g_big_b)) {
            return Err(Error::Inconsistent(format!("block {} does not end at B_{}", b.k, b.k)));
        }
        let n = knots.len();
        knots[n - 1] = (b.ln_big_b, b.ln_g_big_b);
        block_pieces(b.ln_big_b, b.ln_g_big_b, b.ln_b, b.n, q, p, &mut knots, &mut slopes);
    }
    let range = EndRange { min: p, max: q };
    Ok(assemble(
        knots,
        slopes,
        p,
        Asymptotics {
            lo: range,
            hi: range,
            exact: true,
        },
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem42Block {
    pub k: usize,
    pub p_k: f64,
    pub n: u64,
    pub ln_a: f64,
    pub ln_big_a: f64,
    pub ln_g_big_a: f64,
}

/// Parameters of the dilatory construction with `q = 1` and growing `p_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem42Spec {
    pub blocks: Vec<Theorem42Block>,
    /// How the construction's text was read where it is ambiguous.
    pub reading: String,
}

pub const THEOREM42_READING: &str = "periods run over 0 <= n <= N_k; even pieces grow like t^{p_k}; \
the region t < 1 is filled by the reflection G = G~";

/// Smallest count `N >= 2` whose scale satisfies `a^{1/p} >= floor` and
/// `a^{1/p} > prev_root`.
fn smallest_count(p: f64, floor: f64, prev_root: f64, prev_ln_a: f64) -> Result<(u64, f64)> {
    let ok = |n: u64| -> Result<Option<f64>> {
        match solve_block_scale_log(p, 1.0, n) {
            Ok(la) if la / p >= floor && la / p > prev_root && la > prev_ln_a => Ok(Some(la)),
            Ok(_) | Err(Error::NoRoot(_)) => Ok(None),
            Err(e) => Err(e),
        }
    };
    let cap: u64 = 1 << 24;
    let mut hi = 2u64;
    while ok(hi)?.is_none() {
        hi *= 2;
        if hi > cap {
            return Err(Error::Infeasible(format!(
                "no period count below {cap} lifts a^(1/p) above {} for p = {p}",
                floor.max(prev_root).exp()
            )));
        }
    }
    let mut lo = hi / 2;
    if lo < 2 || ok(lo)?.is_some() {
        lo = 1;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid)?.is_some() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((hi, ok(hi)?.unwrap()))
}

impl Theorem42Spec {
    /// Exponents `p_k = k + 2`; `N_k` is the smallest count with
    /// `a_k^{1/p_k} >= 2^{1/4}` and `a_k`, `a_k^{1/p_k}` strictly increasing.
    pub fn new(blocks: usize) -> Result<Self> {
        Self::with_exponents(&(0..blocks).map(|k| k as f64 + 2.0).collect::<Vec<_>>())
    }

    pub fn with_exponents(exponents: &[f64]) -> Result<Self> {
        if exponents.is_empty() {
            return Err(Error::InvalidParameter("at least one block is required".into()));
        }
        let floor = 2f64.ln() / 4.0;
        let (mut ln_big_a, mut ln_g) = (0.0, 0.0);
        let (mut prev_root, mut prev_ln_a) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        let mut out = Vec::with_capacity(exponents.len());
        for (k, &p) in exponents.iter().enumerate() {
            check_exponents(p, 1.0)?;
            if let Some(prev) = out.last() {
                let prev: &Theorem42Block = prev;
                if !(p > prev.p_k) {
                    return Err(Error::Infeasible("exponents p_k must increase".into()));
                }
            }
            let (n, ln_a) = smallest_count(p, floor, prev_root, prev_ln_a)?;
            out.push(Theorem42Block {
                k,
                p_k: p,
                n,
                ln_a,
                ln_big_a,
                ln_g_big_a: ln_g,
            });
            prev_root = ln_a / p;
            prev_ln_a = ln_a;
            ln_big_a += (2 * n + 2) as f64 * ln_a;
            ln_g += (n + 1) as f64 * (p + 1.0) * ln_a;
        }
        Ok(Theorem42Spec {
            blocks: out,
            reading: THEOREM42_READING.to_string(),
        })
    }

    pub fn lemma_blocks(&self) -> Vec<LemmaBlock> {
        self.blocks
            .iter()
            .map(|b| LemmaBlock {
                label: format!("a{}", b.k),
                p: b.p_k,
                q: 1.0,
                ln_a: b.ln_a,
                terms: b.n,
                ln_anchor_m: b.ln_big_a,
                ln_anchor_l: b.ln_g_big_a,
                n0: 0,
                n1: b.n - 1,
            })
            .collect()
    }
}

pub fn build_theorem42_phi(spec: &Theorem42Spec) -> Result<PhiFunction> {
    let mut knots = vec![(0.0, 0.0)];
    let mut slopes = Vec::new();
    for b in &spec.blocks {
        let n = knots.len();
        knots[n - 1] = (b.ln_big_a, b.ln_g_big_a);
        block_pieces(b.ln_big_a, b.ln_g_big_a, b.ln_a, b.n, b.p_k, 1.0, &mut knots, &mut slopes);
    }
    let range = EndRange {
        min: 1.0,
        max: f64::INFINITY,
    };
    Ok(assemble(
        knots,
        slopes,
        1.0,
        Asymptotics {
            lo: range,
            hi: range,
            exact: true,
        },
    ))
}

/// Checks of the witness identities on one block at one `θ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma43Report {
    pub label: String,
    pub theta: f64,
    pub a: f64,
    pub norm_f: NormResult,
    pub norm_g: NormResult,
    /// Modulars of `f`, `g` at `c = 1`, computed from the functional.
    pub modular_f: f64,
    pub modular_g: f64,
    pub closed_form_modular: f64,
    /// Largest relative deviation of `g` from `a^{-(p/q)θ} d_{a^{-θ}} f`.
    pub witness_identity_error: f64,
    /// `‖d_{a^{-θ}} f‖ / ‖f‖`.
    pub dilation_ratio: f64,
    /// `a^{(p/q)θ}`, the value forced by `‖f‖ = ‖g‖ = 1`.
    pub forced_ratio: f64,
    /// `a^{(q/p)θ}`, the exponent as printed in the lemma's statement.
    pub stated_ratio: f64,
    pub norms_ok: bool,
    pub modular_ok: bool,
    pub witness_identity_ok: bool,
    pub dilation_ok: bool,
    pub stated_dilation_ok: bool,
}

impl Lemma43Report {
    /// Every identity that follows from the construction.
    pub fn ok(&self) -> bool {
        self.norms_ok && self.modular_ok && self.witness_identity_ok && self.dilation_ok
    }

    /// Largest deviation among the checks in [`Lemma43Report::ok`].
    pub fn worst_error(&self) -> f64 {
        [
            (self.norm_f.value() - 1.0).abs(),
            (self.norm_g.value() - 1.0).abs(),
            (self.modular_f - 1.0).abs(),
            (self.modular_g - 1.0).abs(),
            self.witness_identity_error,
            (self.dilation_ratio / self.forced_ratio - 1.0).abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Verify the witness identities for `block` inside `L_{1,G}`.
pub fn verify_lemma43(space: &OrliczLorentz, block: &LemmaBlock, theta: f64, tol: f64) -> Result<Lemma43Report> {
    let (f, g) = lemma43_witnesses(block, theta)?;
    let la = block.ln_a;
    let norm_f = space.norm_log(&f, NORM_TOL)?;
    let norm_g = space.norm_log(&g, NORM_TOL)?;
    let modular_f = space.log_modular(&f, 0.0).exp();
    let modular_g = space.log_modular(&g, 0.0).exp();
    let expected = f.dilate_log(-theta * la).scale_log(-block.p / block.q * theta * la);
    let witness_identity_error = expected
        .cells()
        .iter()
        .zip(g.cells())
        .map(|(x, y)| ((x.0 - y.0).abs() + (x.1 - y.1).abs()).exp_m1())
        .fold(0.0, f64::max);
    let dilated = space.norm_log(&f.dilate_log(-theta * la), NORM_TOL)?;
    let dilation_ratio = (dilated.ln_value() - norm_f.ln_value()).exp();
    let forced_ratio = (block.p / block.q * theta * la).exp();
    let stated_ratio = (block.q / block.p * theta * la).exp();
    let closed = block.closed_form_modular();
    Ok(Lemma43Report {
        label: block.label.clone(),
        theta,
        a: block.a(),
        norms_ok: (norm_f.value() - 1.0).abs() <= tol && (norm_g.value() - 1.0).abs() <= tol,
        modular_ok: (modular_f - 1.0).abs() <= tol && (modular_g - 1.0).abs() <= tol,
        witness_identity_ok: witness_identity_error <= tol,
        dilation_ok: (dilation_ratio / forced_ratio - 1.0).abs() <= tol,
        stated_dilation_ok: (dilation_ratio / stated_ratio - 1.0).abs() <= tol,
        norm_f,
        norm_g,
        modular_f,
        modular_g,
        closed_form_modular: closed,
        witness_identity_error,
        dilation_ratio,
        forced_ratio,
        stated_ratio,
    })
}

/// Witness checks over every block of a construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub tol: f64,
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub checks: Vec<Lemma43Report>,
    pub all_ok: bool,
    /// Label, `θ` and error of the worst check.
    pub worst: Option<(String, f64, f64)>,
}

/// Run [`verify_lemma43`] on `blocks` at `θ ∈ {0, θ_max/2, θ_max}`.
pub fn verify_blocks(g_phi: &PhiFunction, blocks: &[LemmaBlock], residuals: Vec<f64>, tol: f64) -> Result<CounterexampleReport> {
    use rayon::prelude::*;
    let space = OrliczLorentz::new(&PhiFunction::power(1.0)?, g_phi);
    let jobs: Vec<(&LemmaBlock, f64)> = blocks
        .iter()
        .flat_map(|b| [0.0, 0.5, 1.0].map(|s| (b, s * b.theta_max())))
        .collect();
    let checks = jobs
        .par_iter()
        .map(|&(b, t)| verify_lemma43(&space, b, t, tol))
        .collect::<Result<Vec<_>>>()?;
    let worst = checks
        .iter()
        .map(|c| (c.label.clone(), c.theta, c.worst_error()))
        .max_by(|x, y| x.2.partial_cmp(&y.2).unwrap());
    let max_residual = residuals.iter().fold(0.0, |m: f64, r| m.max(r.abs()));
    let all_ok = checks.iter().all(|c| c.ok()) && max_residual <= tol;
    Ok(CounterexampleReport {
        tol,
        residuals,
        max_residual,
        checks,
        all_ok,
        worst,
    })
}

pub fn verify_counterexample(spec: &CounterexampleSpec, tol: f64) -> Result<CounterexampleReport> {
    let g = build_theorem41_phi(spec)?;
    let residuals = spec.residuals().into_iter().flat_map(|(a, b)| [a, b]).collect();
    verify_blocks(&g, &spec.lemma_blocks(), residuals, tol)
}

pub fn verify_theorem42(spec: &Theorem42Spec, tol: f64) -> Result<CounterexampleReport> {
    let g = build_theorem42_phi(spec)?;
    let residuals = spec
        .blocks
        .iter()
        .map(|b| block_residual(b.p_k, 1.0, b.n, b.ln_a))
        .collect();
    verify_blocks(&g, &spec.lemma_blocks(), residuals, tol)
}
