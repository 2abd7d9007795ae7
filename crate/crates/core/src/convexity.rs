//! Probes for p-convexity, q-concavity and the Hardy operator bounds.
//!
//! Probes evaluate the lattice inequalities on finite families; a large
//! ratio certifies a lower bound on the best constant, nothing more.

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functionals::{hardy_norm, lorentz_one_norm, HardyKind, NormResult, OrliczLorentz};
use crate::indices::boyd_analytic_bracket;
use crate::phi::PhiFunction;
use crate::sampling::{rng, StepSampler};
use crate::step::{pointwise_power_sum, DilationFactor, StepFunction};

/// Default bound on the equivalence constant in "equivalent to a convex function".
pub const DEFAULT_C_MAX: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    /// Random heights on consecutive unit intervals.
    DisjointTranslates,
    /// `h_i χ_[0, 2^i)`.
    NestedStaircases,
    /// `f_i(j) = 1/(1 + (j + σ(i)) mod n)` on unit cells, `σ` a seeded permutation.
    HarmonicComb,
    /// Independent draws from the default step sampler.
    Uniform,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 4] = [
        FamilyKind::DisjointTranslates,
        FamilyKind::NestedStaircases,
        FamilyKind::HarmonicComb,
        FamilyKind::Uniform,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::DisjointTranslates => "disjoint_translates",
            FamilyKind::NestedStaircases => "nested_staircases",
            FamilyKind::HarmonicComb => "harmonic_comb",
            FamilyKind::Uniform => "uniform",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown family '{s}'")))
    }

    pub fn generate(self, n: usize, seed: u64) -> Vec<StepFunction> {
        let mut r = rng(seed);
        match self {
            FamilyKind::DisjointTranslates => (0..n)
                .map(|i| {
                    let h = r.gen_range(-1.0f64..1.0).exp();
                    let mut cells = Vec::with_capacity(2);
                    if i > 0 {
                        cells.push((i as f64, 0.0));
                    }
                    cells.push((1.0, h));
                    StepFunction::new(cells).unwrap()
                })
                .collect(),
            FamilyKind::NestedStaircases => (0..n)
                .map(|i| {
                    let h = r.gen_range(-1.0f64..1.0).exp() / 2f64.powf(i as f64 / 2.0);
                    StepFunction::new(vec![(2f64.powi(i as i32), h)]).unwrap()
                })
                .collect(),
            FamilyKind::HarmonicComb => {
                let mut sigma: Vec<usize> = (0..n).collect();
                sigma.shuffle(&mut r);
                sigma
                    .iter()
                    .map(|&s| {
                        let cells = (0..n).map(|j| (1.0, 1.0 / (1 + (j + s) % n) as f64)).collect();
                        StepFunction::new(cells).unwrap()
                    })
                    .collect()
            }
            FamilyKind::Uniform => {
                let s = StepSampler::default();
                (0..n).map(|_| s.step(&mut r)).collect()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyConfig {
    pub kinds: Vec<FamilyKind>,
    pub sizes: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
}

impl FamilyConfig {
    pub fn new(kinds: Vec<FamilyKind>, sizes: Vec<usize>, trials: usize, seed: u64) -> Self {
        FamilyConfig { kinds, sizes, trials, seed }
    }

    fn validate(&self) -> Result<()> {
        if self.kinds.is_empty() || self.sizes.is_empty() || self.trials == 0 {
            return Err(Error::Empty("family config needs kinds, sizes and trials".into()));
        }
        if self.sizes.contains(&0) {
            return Err(Error::InvalidParameter("family size must be >= 1".into()));
        }
        Ok(())
    }

    /// Seed for one `(kind, n, trial)` cell, stable under reordering.
    pub fn family_seed(&self, kind: FamilyKind, n: usize, trial: usize) -> u64 {
        let k = FamilyKind::ALL.iter().position(|x| *x == kind).unwrap() as u64;
        self.seed
            .wrapping_mul(0x9E37_79B9_7F4A_7C15)
            .wrapping_add(k << 48)
            .wrapping_add((n as u64) << 16)
            .wrapping_add(trial as u64)
    }
}

/// A replayable family: regenerate with `kind.generate(n, seed)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyWitness {
    pub kind: FamilyKind,
    pub n: usize,
    pub seed: u64,
    pub ratio: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeKind {
    Convexity,
    Concavity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verdict {
    Consistent,
    Violated { bound: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexityReport {
    pub kind: ProbeKind,
    pub exponent: f64,
    pub families: usize,
    /// Max ratio for convexity, min ratio for concavity.
    pub extreme_ratio: f64,
    pub witness: FamilyWitness,
    /// `(kind, n, extreme ratio over trials)`.
    pub curve: Vec<(FamilyKind, usize, f64)>,
    pub verdict: Verdict,
}

impl ConvexityReport {
    pub fn curve_for(&self, kind: FamilyKind) -> Vec<(usize, f64)> {
        self.curve.iter().filter(|c| c.0 == kind).map(|c| (c.1, c.2)).collect()
    }
}

/// `‖(Σ|f_i|^p)^{1/p}‖ / (Σ‖f_i‖^p)^{1/p}`.
pub fn family_ratio(space: &OrliczLorentz, fs: &[StepFunction], p: f64, tol: f64) -> Result<f64> {
    let lhs = space.norm(&pointwise_power_sum(fs, p)?, tol)?.ln_value();
    let ln_terms = fs
        .iter()
        .map(|f| space.norm(f, tol).map(|n| p * n.ln_value()))
        .collect::<Result<Vec<_>>>()?;
    let rhs = crate::functionals::log_sum_exp(ln_terms) / p;
    Ok((lhs - rhs).exp())
}

fn probe(
    space: &OrliczLorentz,
    exponent: f64,
    families: &FamilyConfig,
    kind: ProbeKind,
    bound: Option<f64>,
    tol: f64,
) -> Result<ConvexityReport> {
    if !(exponent > 0.0) || !exponent.is_finite() {
        return Err(Error::InvalidParameter(format!("exponent must be > 0, got {exponent}")));
    }
    families.validate()?;
    let jobs: Vec<(FamilyKind, usize, usize)> = families
        .kinds
        .iter()
        .flat_map(|&k| {
            families
                .sizes
                .iter()
                .flat_map(move |&n| (0..families.trials).map(move |t| (k, n, t)))
        })
        .collect();
    let results = jobs
        .par_iter()
        .map(|&(k, n, t)| {
            let seed = families.family_seed(k, n, t);
            let fs = k.generate(n, seed);
            family_ratio(space, &fs, exponent, tol).map(|ratio| FamilyWitness { kind: k, n, seed, ratio })
        })
        .collect::<Result<Vec<_>>>()?;
    let better = |a: f64, b: f64| match kind {
        ProbeKind::Convexity => a > b,
        ProbeKind::Concavity => a < b,
    };
    let mut curve: Vec<(FamilyKind, usize, f64)> = Vec::new();
    for w in &results {
        match curve.iter_mut().find(|c| c.0 == w.kind && c.1 == w.n) {
            Some(c) if better(w.ratio, c.2) => c.2 = w.ratio,
            Some(_) => {}
            None => curve.push((w.kind, w.n, w.ratio)),
        }
    }
    // first extreme in job order, so the witness does not depend on scheduling
    let mut witness = results[0].clone();
    for w in &results[1..] {
        if better(w.ratio, witness.ratio) {
            witness = w.clone();
        }
    }
    let verdict = match bound {
        Some(b) if better(witness.ratio, b) => Verdict::Violated { bound: b },
        _ => Verdict::Consistent,
    };
    Ok(ConvexityReport {
        kind,
        exponent,
        families: results.len(),
        extreme_ratio: witness.ratio,
        witness,
        curve,
        verdict,
    })
}

/// Max ratio over the families. `bound`, when given, is a constant the
/// space is known to satisfy; exceeding it yields a `Violated` verdict.
pub fn convexity_probe(
    space: &OrliczLorentz,
    p: f64,
    families: &FamilyConfig,
    bound: Option<f64>,
    tol: f64,
) -> Result<ConvexityReport> {
    probe(space, p, families, ProbeKind::Convexity, bound, tol)
}

/// Min ratio over the families; `bound` is a known lower bound for `C^{-1}`.
pub fn concavity_probe(
    space: &OrliczLorentz,
    q: f64,
    families: &FamilyConfig,
    bound: Option<f64>,
    tol: f64,
) -> Result<ConvexityReport> {
    probe(space, q, families, ProbeKind::Concavity, bound, tol)
}

/// Outcome of testing `H(t)/t` for quasi-monotonicity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShapeCheck {
    /// `H` itself is convex (resp. concave).
    pub exact: bool,
    /// Smallest `c` with `H` equivalent to a convex (resp. concave) function
    /// via `H(t)/t` monotone up to `c`; infinite when a tail goes the wrong way.
    pub constant: f64,
    pub holds: bool,
    /// `(u1, u2)` in log coordinates where `H(t)/t` moves most against the
    /// required direction.
    pub offending_window: Option<(f64, f64)>,
}

/// Is `h` equivalent to a convex (`convex = true`) or concave function?
///
/// A φ-function is equivalent to a convex function iff `H(t)/t` is
/// equivalent to a nondecreasing function, and dually for concave.
pub fn shape_check(h: &PhiFunction, convex: bool, c_max: f64) -> ShapeCheck {
    let sign = if convex { 1.0 } else { -1.0 };
    let right_way = |s: f64| sign * (s - 1.0) >= 0.0;
    let slopes_ok = h.slopes().iter().all(|&s| right_way(s)) && right_way(h.tail_lo()) && right_way(h.tail_hi());
    let monotone = h.slopes().windows(2).all(|w| sign * (w[1] - w[0]) >= 0.0)
        && h.slopes().first().map_or(sign * (h.tail_hi() - h.tail_lo()) >= 0.0, |&s0| {
            sign * (s0 - h.tail_lo()) >= 0.0 && sign * (h.tail_hi() - h.slopes().last().unwrap()) >= 0.0
        });
    let exact = slopes_ok && monotone;
    let knots = h.knots();
    let (u_first, u_last) = (knots[0].0, knots[knots.len() - 1].0);
    if !right_way(h.tail_lo()) {
        return ShapeCheck {
            exact,
            constant: f64::INFINITY,
            holds: false,
            offending_window: Some((f64::NEG_INFINITY, u_first)),
        };
    }
    if !right_way(h.tail_hi()) {
        return ShapeCheck {
            exact,
            constant: f64::INFINITY,
            holds: false,
            offending_window: Some((u_last, f64::INFINITY)),
        };
    }
    // w = sign * ln(H(t)/t) should be nondecreasing up to ln c
    let mut best_drop = 0.0;
    let mut window = None;
    let (mut run_max, mut run_u) = (f64::NEG_INFINITY, u_first);
    for &(u, v) in knots {
        let w = sign * (v - u);
        if w > run_max {
            run_max = w;
            run_u = u;
        }
        if run_max - w > best_drop {
            best_drop = run_max - w;
            window = Some((run_u, u));
        }
    }
    let constant = best_drop.exp();
    ShapeCheck {
        exact,
        constant,
        holds: constant <= c_max,
        offending_window: window,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem51Report {
    pub p: f64,
    pub q: f64,
    /// `G∘T^{1/p}` equivalent to a convex function.
    pub g_power_p_convex: ShapeCheck,
    /// `G̃∘F̃^{-1}` concave.
    pub transplant_concave: ShapeCheck,
    /// `G∘T^{1/q}` equivalent to a concave function.
    pub g_power_q_concave: ShapeCheck,
    /// `G̃∘F̃^{-1}` convex.
    pub transplant_convex: ShapeCheck,
    /// Hypotheses of the p-convexity clause.
    pub convex_clause: bool,
    /// Hypotheses of the q-concavity clause.
    pub concave_clause: bool,
}

/// Checks the hypotheses guaranteeing p-convexity and q-concavity of `L_{F,G}`.
pub fn theorem51_hypotheses(f_phi: &PhiFunction, g_phi: &PhiFunction, p: f64, q: f64, c_max: f64) -> Result<Theorem51Report> {
    let root = |e: f64| PhiFunction::power(1.0 / e);
    let transplant = g_phi.tilde().compose(&f_phi.tilde().inverse());
    let gp = shape_check(&g_phi.compose(&root(p)?), true, c_max);
    let tc = shape_check(&transplant, false, c_max);
    let gq = shape_check(&g_phi.compose(&root(q)?), false, c_max);
    let tv = shape_check(&transplant, true, c_max);
    Ok(Theorem51Report {
        p,
        q,
        convex_clause: gp.holds && tc.holds,
        concave_clause: gq.holds && tv.holds,
        g_power_p_convex: gp,
        transplant_concave: tc,
        g_power_q_concave: gq,
        transplant_convex: tv,
    })
}

/// A convexity constant the space provably satisfies: 1 for an Orlicz
/// space `L_{G,G}` whose `G∘T^{1/p}` is itself convex.
pub fn guaranteed_convexity_bound(f_phi: &PhiFunction, g_phi: &PhiFunction, p: f64) -> Option<f64> {
    if f_phi != g_phi {
        return None;
    }
    let gp = g_phi.compose(&PhiFunction::power(1.0 / p).ok()?);
    shape_check(&gp, true, 1.0).exact.then_some(1.0 + 1e-9)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardySample {
    pub norm_f: NormResult,
    pub norm_fss: NormResult,
    pub ratio: f64,
    /// `‖f‖ <= ‖f**‖`, certified from the brackets.
    pub left_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardyReport {
    pub p_bracket: (f64, f64),
    pub samples: Vec<HardySample>,
    pub max_ratio: f64,
    pub max_index: usize,
    pub all_left_ok: bool,
}

/// `‖f**‖ / ‖f‖` over samples; refuses unless the analytic lower Boyd
/// bound exceeds 1.
pub fn hardy_inequality_probe(
    f_phi: &PhiFunction,
    g_phi: &PhiFunction,
    samples: &[StepFunction],
    tol: f64,
) -> Result<HardyReport> {
    let b = boyd_analytic_bracket(f_phi, g_phi);
    if !(b.p.lo > 1.0) {
        return Err(Error::Infeasible(format!(
            "Hardy probe needs p(L_F,G) > 1 but the analytic p-bracket is [{}, {}]",
            b.p.lo, b.p.hi
        )));
    }
    if samples.is_empty() {
        return Err(Error::Empty("no samples".into()));
    }
    let space = OrliczLorentz::new(f_phi, g_phi);
    let out = samples
        .par_iter()
        .map(|f| {
            let nf = space.norm(f, tol)?;
            let ns = hardy_norm(f_phi, g_phi, f, HardyKind::Star, tol)?;
            Ok(HardySample {
                ratio: (ns.ln_value() - nf.ln_value()).exp(),
                left_ok: ns.hi >= nf.lo,
                norm_f: nf,
                norm_fss: ns,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let (max_index, max_ratio) = out
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, s)| if s.ratio > acc.1 { (i, s.ratio) } else { acc });
    Ok(HardyReport {
        p_bracket: (b.p.lo, b.p.hi),
        all_left_ok: out.iter().all(|s| s.left_ok),
        samples: out,
        max_ratio,
        max_index,
    })
}

/// `m` disjoint copies of `f`, laid end to end.
pub fn disjoint_copies(f: &StepFunction, m: usize) -> Vec<StepFunction> {
    let span: f64 = f.cells().iter().map(|c| c.0).sum();
    (0..m)
        .map(|i| {
            let mut cells = Vec::with_capacity(f.cells().len() + 1);
            if i > 0 {
                cells.push((i as f64 * span, 0.0));
            }
            cells.extend_from_slice(f.cells());
            StepFunction::new(cells).unwrap()
        })
        .collect()
}

fn same_cells(a: &StepFunction, b: &StepFunction) -> bool {
    a.cells().len() == b.cells().len()
        && a.cells().iter().zip(b.cells()).all(|(x, y)| {
            x.1 == y.1 && (x.0 - y.0).abs() <= 1e-14 * x.0.max(y.0)
        })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NecessitySample {
    /// `(m, (Σ g_i)* == (d_{1/m} f)*)`.
    pub copies_identity: Vec<(usize, bool)>,
    pub norm_fg: f64,
    pub norm_f1: f64,
    /// `‖f‖_{F,G} / ‖f‖_{F,1}`.
    pub ratio: f64,
    /// Relative gap between the layer-cake sum and the `L_{F,1}` norm.
    pub layer_cake_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NecessityReport {
    pub samples: Vec<NecessitySample>,
    pub identities_ok: bool,
    pub max_layer_cake_error: f64,
    pub max_ratio: f64,
}

/// Disjoint-copy identity for `a = 1/m` and the `‖f‖_{F,G}` vs `‖f‖_{F,1}` curve.
pub fn theorem53_necessity_probe(
    f_phi: &PhiFunction,
    g_phi: &PhiFunction,
    samples: &[StepFunction],
    copies: &[usize],
    tol: f64,
) -> Result<NecessityReport> {
    if samples.is_empty() {
        return Err(Error::Empty("no samples".into()));
    }
    let space = OrliczLorentz::new(f_phi, g_phi);
    let one = OrliczLorentz::new(f_phi, &PhiFunction::power(1.0)?);
    let out = samples
        .par_iter()
        .map(|f| {
            let mut ids = Vec::new();
            for &m in copies {
                let sum = pointwise_power_sum(&disjoint_copies(f, m), 1.0)?.rearrange();
                let target = f.dilate(DilationFactor::new(1.0 / m as f64)?).rearrange();
                ids.push((m, same_cells(&sum, &target)));
            }
            let nfg = space.norm(f, tol)?.value();
            let nf1 = one.norm(f, tol)?.value();
            let cake = lorentz_one_norm(f_phi, f);
            Ok(NecessitySample {
                copies_identity: ids,
                norm_fg: nfg,
                norm_f1: nf1,
                ratio: nfg / nf1,
                layer_cake_error: (cake - nf1).abs() / nf1,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(NecessityReport {
        identities_ok: out.iter().all(|s| s.copies_identity.iter().all(|c| c.1)),
        max_layer_cake_error: out.iter().map(|s| s.layer_cake_error).fold(0.0, f64::max),
        max_ratio: out.iter().map(|s| s.ratio).fold(0.0, f64::max),
        samples: out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pw(p: f64) -> PhiFunction {
        PhiFunction::power(p).unwrap()
    }

    #[test]
    fn single_member_ratio_is_one() {
        let space = OrliczLorentz::new(&pw(1.0), &pw(2.0));
        for k in FamilyKind::ALL {
            let fs = k.generate(1, 5);
            let r = family_ratio(&space, &fs, 1.0, 1e-13).unwrap();
            assert!((r - 1.0).abs() < 1e-12, "{k:?} {r}");
        }
    }

    #[test]
    fn disjoint_equal_norm_in_lpp() {
        let space = OrliczLorentz::new(&pw(2.0), &pw(2.0));
        let fs: Vec<StepFunction> = (0..5)
            .map(|i| {
                let mut c = vec![];
                if i > 0 {
                    c.push((i as f64, 0.0));
                }
                c.push((1.0, 3.0));
                StepFunction::new(c).unwrap()
            })
            .collect();
        let r = family_ratio(&space, &fs, 2.0, 1e-14).unwrap();
        assert!((r - 1.0).abs() < 1e-12, "{r}");
    }

    #[test]
    fn harmonic_comb_grows_in_l12() {
        let space = OrliczLorentz::new(&pw(1.0), &pw(2.0));
        let cfg = FamilyConfig::new(vec![FamilyKind::HarmonicComb], vec![4, 16, 64], 1, 9);
        let rep = convexity_probe(&space, 1.0, &cfg, None, 1e-12).unwrap();
        let c = rep.curve_for(FamilyKind::HarmonicComb);
        assert!(c[0].1 < c[1].1 && c[1].1 < c[2].1, "{c:?}");
        // closed form at n = 4: H_4 / sqrt(Σ (2j+1)/(j+1)^2)
        let h4 = 1.0 + 0.5 + 1.0 / 3.0 + 0.25;
        let s = 1.0 + 3.0 / 4.0 + 5.0 / 9.0 + 7.0 / 16.0;
        assert!((c[0].1 - h4 / f64::sqrt(s)).abs() < 1e-10, "{}", c[0].1);
    }

    #[test]
    fn hypotheses_for_lorentz() {
        // p >= q: q-convex
        let r = theorem51_hypotheses(&pw(3.0), &pw(2.0), 2.0, 2.0, DEFAULT_C_MAX).unwrap();
        assert!(r.convex_clause && !r.concave_clause);
        // p <= q: the q-concavity clause holds with exponent q, not p
        let r = theorem51_hypotheses(&pw(1.0), &pw(2.0), 1.0, 2.0, DEFAULT_C_MAX).unwrap();
        assert!(r.concave_clause && !r.convex_clause);
        let r = theorem51_hypotheses(&pw(1.0), &pw(2.0), 1.0, 1.0, DEFAULT_C_MAX).unwrap();
        assert!(!r.concave_clause);
        assert_eq!(r.g_power_q_concave.constant, f64::INFINITY);
        assert!(r.g_power_q_concave.offending_window.is_some());
    }

    #[test]
    fn mixed_slope_window() {
        // slope 3 then 1 then 3: H(t)/t dips by e^{-2} over [0, 1]
        let g = PhiFunction::from_knots(vec![(-1.0, -3.0), (0.0, 0.0), (1.0, 1.0), (2.0, 4.0)], 3.0, 3.0).unwrap();
        let c = shape_check(&g, true, DEFAULT_C_MAX);
        assert!(!c.exact && c.holds);
        assert!((c.constant - 1.0).abs() < 1e-12);
        let g = PhiFunction::from_knots(vec![(0.0, 0.0), (6.0, 3.0), (7.0, 6.0)], 3.0, 3.0).unwrap();
        let c = shape_check(&g, true, DEFAULT_C_MAX);
        assert!(!c.holds);
        assert_eq!(c.offending_window, Some((0.0, 6.0)));
        assert!((c.constant - 3f64.exp()).abs() < 1e-11);
    }

    #[test]
    fn hardy_in_l2() {
        let f = StepFunction::indicator(1.0).unwrap();
        let rep = hardy_inequality_probe(&pw(2.0), &pw(2.0), &[f], 1e-13).unwrap();
        assert!((rep.max_ratio - 2f64.sqrt()).abs() < 1e-10, "{}", rep.max_ratio);
        assert!(rep.all_left_ok);
        assert!(hardy_inequality_probe(&pw(1.0), &pw(2.0), &[], 1e-12).is_err());
    }

    #[test]
    fn disjoint_copies_identity() {
        let chi = StepFunction::indicator(1.0).unwrap();
        let stair = StepFunction::new(vec![(1.0, 3.0), (2.0, 2.0), (4.0, 1.0)]).unwrap();
        let rep = theorem53_necessity_probe(&pw(2.0), &pw(1.5), &[chi.clone(), stair], &[2, 3], 1e-13).unwrap();
        assert!(rep.identities_ok);
        assert!(rep.max_layer_cake_error < 1e-12, "{}", rep.max_layer_cake_error);
        let two = pointwise_power_sum(&disjoint_copies(&chi, 2), 1.0).unwrap().rearrange();
        assert_eq!(two.cells(), &[(2.0, 1.0)]);
    }
}
