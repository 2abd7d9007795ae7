//! Boyd and Zippin index brackets for `L_{F,G}`.
//!
//! Analytic brackets come from the Matuszewska–Orlicz indices of `F`, `G`
//! and `F∘G^{-1}`. Empirical bounds come from dilation ratios of explicit
//! witness functions, which are lower bounds on `‖d_a‖`.

use std::io::Write;

use log::warn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::counterexample::{lemma43_witnesses, LemmaBlock};
use crate::error::{Error, Result};
use crate::functionals::{NormResult, OrliczLorentz};
use crate::phi::PhiFunction;
use crate::step::LogStep;

/// Slack allowed between empirical and analytic bounds.
pub const CONSISTENCY_SLACK: f64 = 1e-9;
const PROFILE_TOL: f64 = 1e-13;
/// Ratios within this of 1 (in log) carry no index information.
const FLAT_RATIO: f64 = 1e-10;

/// A dilation witness: `f` and the scale `a` at which it attains a bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub id: String,
    pub a: f64,
    pub f: LogStep,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexBracket {
    pub lo: f64,
    pub hi: f64,
    pub lo_provenance: String,
    pub hi_provenance: String,
    pub witness: Option<Witness>,
}

impl IndexBracket {
    fn analytic(lo: f64, hi: f64, lo_provenance: &str, hi_provenance: &str) -> Self {
        IndexBracket {
            lo,
            hi,
            lo_provenance: lo_provenance.into(),
            hi_provenance: hi_provenance.into(),
            witness: None,
        }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64, slack: f64) -> bool {
        x >= self.lo - slack && x <= self.hi + slack
    }
}

/// `p_z = p_m(F)`, `q_z = q_m(F)`, with the brackets of `mo_indices`.
pub fn zippin_indices(f_phi: &PhiFunction, _g_phi: &PhiFunction) -> (IndexBracket, IndexBracket) {
    let m = f_phi.mo_indices();
    (
        IndexBracket::analytic(m.p_bracket.0, m.p_bracket.1, "p_m(F)", "p_m(F)"),
        IndexBracket::analytic(m.q_bracket.0, m.q_bracket.1, "q_m(F)", "q_m(F)"),
    )
}

/// Boyd index brackets from the Matuszewska–Orlicz indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoydAnalytic {
    /// `[p_m(F∘G^{-1}) p_m(G), p_m(F)]`.
    pub p: IndexBracket,
    /// `[q_m(F), q_m(F∘G^{-1}) q_m(G)]`.
    pub q: IndexBracket,
    /// `p_m(F) p_m(G) / q_m(G)`, a weaker lower bound for `p`.
    pub p_weak_lo: f64,
    /// `q_m(F) q_m(G) / p_m(G)`, a weaker upper bound for `q`.
    pub q_weak_hi: f64,
}

fn product(x: f64, y: f64) -> f64 {
    if x == 0.0 || y == 0.0 {
        0.0
    } else {
        x * y
    }
}

pub fn boyd_analytic_bracket(f_phi: &PhiFunction, g_phi: &PhiFunction) -> BoydAnalytic {
    let mf = f_phi.mo_indices();
    let mg = g_phi.mo_indices();
    let mh = f_phi.compose(&g_phi.inverse()).mo_indices();
    let p_lo = product(mh.p_bracket.0, mg.p_bracket.0);
    let q_hi = product(mh.q_bracket.1, mg.q_bracket.1);
    BoydAnalytic {
        p: IndexBracket::analytic(p_lo, mf.p_bracket.1, "p_m(F∘G⁻¹)·p_m(G)", "p_m(F)"),
        q: IndexBracket::analytic(mf.q_bracket.0, q_hi, "q_m(F)", "q_m(F∘G⁻¹)·q_m(G)"),
        p_weak_lo: mf.p_bracket.0 * mg.p_bracket.0 / mg.q_bracket.1,
        q_weak_hi: mf.q_bracket.1 * mg.q_bracket.1 / mg.p_bracket.0,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DictionaryEntry {
    pub id: String,
    pub f: LogStep,
}

impl DictionaryEntry {
    pub fn new(id: impl Into<String>, f: LogStep) -> Self {
        DictionaryEntry { id: id.into(), f }
    }
}

/// `a = 2^{k/4}` for `k = -40..=40`.
pub fn default_a_grid() -> Vec<f64> {
    (-40..=40).map(|k| 2f64.powf(k as f64 / 4.0)).collect()
}

/// `χ_[0,s)` for `s = 10^j`, `j = -12..=12`.
pub fn indicator_dictionary() -> Vec<DictionaryEntry> {
    (-12..=12)
        .map(|j| {
            let ls = j as f64 * 10f64.ln();
            DictionaryEntry::new(format!("chi:1e{j}"), LogStep::new(vec![(ls, 0.0)]).unwrap())
        })
        .collect()
}

/// Staircases with cell lengths growing by `rho` and values falling by `r`.
pub fn staircase_dictionary() -> Vec<DictionaryEntry> {
    let mut out = Vec::new();
    for &(rho, r) in &[(2.0f64, 2.0f64), (4.0, 2.0), (2.0, 4.0), (10.0, 10.0), (16.0, 2.0)] {
        for &start in &[-6.0f64, 0.0, 6.0] {
            let cells = (0..12)
                .map(|k| (start + k as f64 * rho.ln(), -(k as f64) * r.ln()))
                .collect();
            out.push(DictionaryEntry::new(
                format!("stair:rho={rho}:r={r}:start=e{start}"),
                LogStep::new(cells).unwrap(),
            ));
        }
    }
    out
}

/// Block witnesses: `f` for every block, and for every grid scale `β > 1`
/// within reach (`ln β <= θ_max ln a`) the shifted `g` with `a^θ = β`.
pub fn witness_dictionary(blocks: &[LemmaBlock], a_grid: &[f64]) -> Vec<DictionaryEntry> {
    let mut out = Vec::new();
    for b in blocks {
        if let Ok((f, _)) = lemma43_witnesses(b, 0.0) {
            out.push(DictionaryEntry::new(format!("lemma:{}:f", b.label), f));
        }
        for &beta in a_grid.iter().filter(|&&x| x > 1.0) {
            let theta = beta.ln() / b.ln_a;
            if theta <= b.theta_max() {
                if let Ok((_, g)) = lemma43_witnesses(b, theta) {
                    out.push(DictionaryEntry::new(format!("lemma:{}:g:theta={theta:.6}", b.label), g));
                }
            }
        }
    }
    out
}

/// Indicators, staircases and, when given, block witnesses.
pub fn default_dictionary(blocks: &[LemmaBlock], a_grid: &[f64]) -> Vec<DictionaryEntry> {
    let mut d = indicator_dictionary();
    d.extend(staircase_dictionary());
    d.extend(witness_dictionary(blocks, a_grid));
    d
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileSample {
    pub a: f64,
    /// Certified lower bound on `max_f ‖d_a f‖ / ‖f‖`.
    pub ratio: f64,
    pub ln_ratio: f64,
    pub witness_id: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DilationProfile {
    pub samples: Vec<ProfileSample>,
    /// Dictionary entries whose norm failed, with the reason.
    pub skipped: Vec<(String, String)>,
}

impl DilationProfile {
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        let err = |e: csv::Error| Error::Parse(format!("csv write: {e}"));
        wr.write_record(["a", "ratio", "witness_id"]).map_err(err)?;
        for s in &self.samples {
            wr.write_record([format!("{:e}", s.a), format!("{:e}", s.ratio), s.witness_id.clone()])
                .map_err(err)?;
        }
        wr.flush().map_err(|e| Error::Parse(format!("csv write: {e}")))?;
        Ok(())
    }
}

/// Certified lower bound on `ln(‖d_a f‖ / ‖f‖)` given `‖f‖`.
fn ln_ratio_lower(space: &OrliczLorentz, f: &LogStep, norm_f: &NormResult, ln_a: f64) -> Result<f64> {
    if ln_a == 0.0 {
        return Ok(0.0);
    }
    let d = space.norm_log(&f.dilate_log(ln_a), PROFILE_TOL)?;
    Ok(d.ln_lo - norm_f.ln_hi)
}

/// `‖d_a f‖ / ‖f‖` at the bracket midpoints.
pub fn dilation_ratio(space: &OrliczLorentz, f: &LogStep, a: f64, tol: f64) -> Result<f64> {
    let n = space.norm_log(f, tol)?;
    let d = space.norm_log(&f.dilate_log(a.ln()), tol)?;
    Ok((d.ln_value() - n.ln_value()).exp())
}

/// For each `a`, the largest certified ratio over the dictionary.
pub fn dilation_profile(
    space: &OrliczLorentz,
    dictionary: &[DictionaryEntry],
    a_grid: &[f64],
) -> Result<DilationProfile> {
    if dictionary.is_empty() {
        return Err(Error::Empty("dilation dictionary".into()));
    }
    if let Some(a) = a_grid.iter().find(|a| !(**a > 0.0) || !a.is_finite()) {
        return Err(Error::InvalidParameter(format!("grid point {a} is not in (0, inf)")));
    }
    let norms: Vec<Result<NormResult>> = dictionary
        .par_iter()
        .map(|e| space.norm_log(&e.f, PROFILE_TOL))
        .collect();
    let mut skipped = Vec::new();
    let mut live = Vec::new();
    for (e, n) in dictionary.iter().zip(norms) {
        match n {
            Ok(n) if n.hi > 0.0 => live.push((e, n)),
            Ok(_) => skipped.push((e.id.clone(), "zero function".to_string())),
            Err(err) => {
                warn!("skipping witness {}: {err}", e.id);
                skipped.push((e.id.clone(), err.to_string()));
            }
        }
    }
    if live.is_empty() {
        return Err(Error::Empty("every dictionary entry failed".into()));
    }
    let samples = a_grid
        .par_iter()
        .map(|&a| {
            let ln_a = a.ln();
            let mut best: Option<(f64, &str)> = None;
            for (e, n) in &live {
                match ln_ratio_lower(space, &e.f, n, ln_a) {
                    Ok(r) => {
                        // ties go to the earlier entry, keeping the result schedule-free
                        if best.map_or(true, |b| r > b.0) {
                            best = Some((r, e.id.as_str()));
                        }
                    }
                    Err(err) => warn!("witness {} at a={a}: {err}", e.id),
                }
            }
            let (r, id) = best.unwrap_or((f64::NEG_INFINITY, ""));
            ProfileSample {
                a,
                ratio: r.exp(),
                ln_ratio: r,
                witness_id: id.to_string(),
            }
        })
        .collect();
    Ok(DilationProfile { samples, skipped })
}

/// Empirical Boyd bounds, raw and intersected with the analytic brackets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoydEmpirical {
    pub p: IndexBracket,
    pub q: IndexBracket,
    /// `min_{a<1} -ln a / ln ratio(a)`.
    pub p_upper_raw: f64,
    /// `max_{a>1} -ln a / ln ratio(a)`.
    pub q_lower_raw: f64,
}

/// Turn ratios into index bounds: `ratio(a) = a^{-1/r}` at `a < 1` gives
/// `p <= r`, at `a > 1` gives `q >= r`.
pub fn boyd_empirical_bounds(
    profile: &DilationProfile,
    analytic: &BoydAnalytic,
    dictionary: &[DictionaryEntry],
) -> Result<BoydEmpirical> {
    let below: Vec<&ProfileSample> = profile.samples.iter().filter(|s| s.a < 1.0).collect();
    let above: Vec<&ProfileSample> = profile.samples.iter().filter(|s| s.a > 1.0).collect();
    if below.is_empty() || above.is_empty() {
        return Err(Error::Empty("profile needs grid points on both sides of a = 1".into()));
    }
    let exponent = |s: &ProfileSample| -s.a.ln() / s.ln_ratio;
    let p_best = below
        .iter()
        .filter(|s| s.ln_ratio > FLAT_RATIO)
        .map(|s| (exponent(s), *s))
        .min_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    let q_best = above
        .iter()
        .filter(|s| s.ln_ratio < -FLAT_RATIO && s.ln_ratio.is_finite())
        .map(|s| (exponent(s), *s))
        .max_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    let witness = |s: &ProfileSample| {
        dictionary.iter().find(|e| e.id == s.witness_id).map(|e| Witness {
            id: e.id.clone(),
            a: s.a,
            f: e.f.clone(),
        })
    };
    let p_upper_raw = p_best.map_or(f64::INFINITY, |b| b.0);
    let q_lower_raw = q_best.map_or(0.0, |b| b.0);
    if p_upper_raw < analytic.p.lo - CONSISTENCY_SLACK {
        return Err(Error::Inconsistent(format!(
            "empirical p-upper {p_upper_raw} is below the analytic p-lower {}",
            analytic.p.lo
        )));
    }
    if q_lower_raw > analytic.q.hi + CONSISTENCY_SLACK {
        return Err(Error::Inconsistent(format!(
            "empirical q-lower {q_lower_raw} is above the analytic q-upper {}",
            analytic.q.hi
        )));
    }
    let mut p = analytic.p.clone();
    if p_upper_raw < p.hi {
        p.hi = p_upper_raw.max(p.lo);
        let s = p_best.unwrap().1;
        p.hi_provenance = format!("witness {} at a={:e}", s.witness_id, s.a);
        p.witness = witness(s);
    }
    let mut q = analytic.q.clone();
    if q_lower_raw > q.lo {
        q.lo = q_lower_raw.min(q.hi);
        let s = q_best.unwrap().1;
        q.lo_provenance = format!("witness {} at a={:e}", s.witness_id, s.a);
        q.witness = witness(s);
    }
    Ok(BoydEmpirical {
        p,
        q,
        p_upper_raw,
        q_lower_raw,
    })
}

/// Least-squares slope of `ys` against `xs`.
pub fn regression_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Slope of `ln ‖χ_[0,s)‖` against `ln s`: `1/p_z` for a power-like `F`.
pub fn indicator_profile_slope<N: Fn(f64) -> Result<NormResult>>(norm: N, s_grid: &[f64]) -> Result<f64> {
    let xs: Vec<f64> = s_grid.iter().map(|s| s.ln()).collect();
    let ys = s_grid.iter().map(|&s| norm(s).map(|r| r.ln_value())).collect::<Result<Vec<_>>>()?;
    Ok(regression_slope(&xs, &ys))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counterexample::{build_theorem41_phi, CounterexampleSpec, Schedule};

    fn pw(p: f64) -> PhiFunction {
        PhiFunction::power(p).unwrap()
    }

    #[test]
    fn power_pairs_collapse() {
        let (p, q) = (pw(3.0), pw(1.5));
        let (pz, qz) = zippin_indices(&p, &q);
        assert_eq!((pz.lo, pz.hi, qz.lo, qz.hi), (3.0, 3.0, 3.0, 3.0));
        let b = boyd_analytic_bracket(&p, &q);
        assert!((b.p.lo - 3.0).abs() < 1e-12 && b.p.hi == 3.0);
        assert!(b.q.lo == 3.0 && (b.q.hi - 3.0).abs() < 1e-12);
    }

    #[test]
    fn counterexample_bracket() {
        let spec = CounterexampleSpec::new(1.0, 2.0, 2, &Schedule::Pow2).unwrap();
        let g = build_theorem41_phi(&spec).unwrap();
        let b = boyd_analytic_bracket(&pw(1.0), &g);
        assert!((b.p.lo - 0.5).abs() < 1e-12 && b.p.hi == 1.0, "{b:?}");
        assert!(b.q.lo == 1.0 && (b.q.hi - 2.0).abs() < 1e-12, "{b:?}");
    }

    #[test]
    fn lpp_indicator_profile() {
        let space = OrliczLorentz::new(&pw(2.0), &pw(2.0));
        let grid = default_a_grid();
        let prof = dilation_profile(&space, &indicator_dictionary(), &grid).unwrap();
        for s in &prof.samples {
            let want = -s.a.ln() / 2.0;
            assert!((s.ln_ratio - want).abs() < 1e-11, "{s:?}");
        }
        let one = prof.samples.iter().find(|s| s.a == 1.0).unwrap();
        assert_eq!(one.ratio, 1.0);
        let analytic = boyd_analytic_bracket(&pw(2.0), &pw(2.0));
        let e = boyd_empirical_bounds(&prof, &analytic, &indicator_dictionary()).unwrap();
        assert!((e.p_upper_raw - 2.0).abs() < 1e-9 && (e.q_lower_raw - 2.0).abs() < 1e-9);
        let mut out = Vec::new();
        prof.write_csv(&mut out).unwrap();
        assert!(String::from_utf8(out).unwrap().starts_with("a,ratio,witness_id\n"));
    }

    #[test]
    fn empty_inputs_rejected() {
        let space = OrliczLorentz::new(&pw(2.0), &pw(2.0));
        assert!(dilation_profile(&space, &[], &[1.0]).is_err());
        let prof = dilation_profile(&space, &indicator_dictionary(), &[0.5, 1.0]).unwrap();
        let analytic = boyd_analytic_bracket(&pw(2.0), &pw(2.0));
        assert!(boyd_empirical_bounds(&prof, &analytic, &[]).is_err());
    }
}
