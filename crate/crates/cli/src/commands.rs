use clap::{Args, ValueEnum};
use orliczlab::convexity::{
    concavity_probe, convexity_probe, guaranteed_convexity_bound, hardy_inequality_probe, theorem51_hypotheses,
    FamilyConfig, FamilyKind, Verdict, DEFAULT_C_MAX,
};
use orliczlab::counterexample::{
    build_theorem42_phi, solve_block_scale, verify_counterexample, verify_theorem42, CounterexampleSpec, LemmaBlock,
    Schedule, Theorem42Spec,
};
use orliczlab::functionals::{hardy_norm, luxemburg_norm, torchinsky_norm, HardyKind, OrliczLorentz};
use orliczlab::indices::{
    boyd_analytic_bracket, boyd_empirical_bounds, default_dictionary, dilation_profile, zippin_indices,
    BoydEmpirical, DilationProfile, IndexBracket,
};
use orliczlab::sampling::{rng, StepSampler};
use orliczlab::{Error, PhiSpec, Result, StepFunction};
use serde::Serialize;
use serde_json::{json, Value};

use crate::parse::{phi_spec, step_function};
use crate::{Global, Outcome, EXIT_CONTRADICTION, EXIT_OK};

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serialisable result")
}

fn outcome(command: &'static str, inputs: Value, result: Value, csv: String, code: u8) -> Outcome {
    Outcome { command, inputs, result, csv, code }
}

fn a_grid(k_max: u32) -> Vec<f64> {
    let k = k_max as i64;
    (-k..=k).map(|j| 2f64.powf(j as f64 / 4.0)).collect()
}

/// Lemma blocks of a counterexample spec, for the witness dictionary.
fn witness_blocks(spec: &PhiSpec) -> Result<Vec<LemmaBlock>> {
    Ok(match spec {
        PhiSpec::Counterexample { p, q, blocks, schedule } => {
            CounterexampleSpec::new(*p, *q, *blocks, schedule)?.lemma_blocks()
        }
        PhiSpec::Theorem42 { blocks } => Theorem42Spec::new(*blocks)?.lemma_blocks(),
        _ => Vec::new(),
    })
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormKind {
    /// Luxemburg norm when no G is given, Orlicz-Lorentz otherwise.
    Auto,
    Luxemburg,
    OrliczLorentz,
    Torchinsky,
}

#[derive(Args, Debug)]
pub struct NormArgs {
    #[arg(long = "F")]
    pub f_phi: String,
    #[arg(long = "G")]
    pub g_phi: Option<String>,
    #[arg(long = "f")]
    pub f: String,
    #[arg(long, value_enum, default_value_t = NormKind::Auto)]
    pub kind: NormKind,
}

fn g_or_f(f_spec: &PhiSpec, g: &Option<String>) -> Result<PhiSpec> {
    match g {
        Some(s) => phi_spec(s),
        None => Ok(f_spec.clone()),
    }
}

pub fn norm(g: &Global, a: &NormArgs) -> Result<Outcome> {
    let fs = phi_spec(&a.f_phi)?;
    let f = step_function(&a.f)?;
    let kind = match (a.kind, &a.g_phi) {
        (NormKind::Auto, None) => NormKind::Luxemburg,
        (NormKind::Auto, Some(_)) => NormKind::OrliczLorentz,
        (k, _) => k,
    };
    if kind == NormKind::Luxemburg && a.g_phi.is_some() {
        return Err(Error::InvalidParameter("--kind luxemburg takes no --G".into()));
    }
    let gs = g_or_f(&fs, &a.g_phi)?;
    let (fp, gp) = (fs.build()?, gs.build()?);
    let r = match kind {
        NormKind::Luxemburg => luxemburg_norm(&fp, &f, g.tol)?,
        NormKind::OrliczLorentz => OrliczLorentz::new(&fp, &gp).norm(&f, g.tol)?,
        NormKind::Torchinsky => torchinsky_norm(&fp, &gp, &f, g.tol)?,
        NormKind::Auto => unreachable!(),
    };
    let inputs = json!({ "F": fs, "G": gs, "f": f, "kind": kind });
    let csv = format!("lo,value,hi\n{:e},{:e},{:e}\n", r.lo, r.value(), r.hi);
    let result = json!({ "kind": kind, "value": r.value(), "bracket": r });
    Ok(outcome("norm", inputs, result, csv, EXIT_OK))
}

#[derive(Args, Debug)]
pub struct IndicesArgs {
    #[arg(long = "F")]
    pub f_phi: String,
    /// Defaults to F.
    #[arg(long = "G")]
    pub g_phi: Option<String>,
    /// Dilation grid a = 2^{±k/4}, k = 0..=K.
    #[arg(long, default_value_t = 40)]
    pub grid: u32,
    /// Also write the profile CSV here.
    #[arg(long)]
    pub profile_out: Option<std::path::PathBuf>,
}

#[derive(Serialize)]
struct IndexTable {
    zippin_p: IndexBracket,
    zippin_q: IndexBracket,
    boyd_analytic: orliczlab::BoydAnalytic,
    boyd_empirical: Option<BoydEmpirical>,
    empirical_error: Option<String>,
    status: &'static str,
}

fn index_table(
    fs: &PhiSpec,
    gs: &PhiSpec,
    grid: &[f64],
) -> Result<(IndexTable, DilationProfile, u8)> {
    let (fp, gp) = (fs.build()?, gs.build()?);
    let (zp, zq) = zippin_indices(&fp, &gp);
    let analytic = boyd_analytic_bracket(&fp, &gp);
    let mut blocks = witness_blocks(gs)?;
    blocks.extend(witness_blocks(fs)?);
    let dict = default_dictionary(&blocks, grid);
    let profile = dilation_profile(&OrliczLorentz::new(&fp, &gp), &dict, grid)?;
    let (empirical, err, code) = match boyd_empirical_bounds(&profile, &analytic, &dict) {
        Ok(e) => (Some(e), None, EXIT_OK),
        Err(e @ Error::Inconsistent(_)) => (None, Some(e.to_string()), EXIT_CONTRADICTION),
        Err(e) => (None, Some(e.to_string()), EXIT_OK),
    };
    let exact = zp.width() == 0.0 && zq.width() == 0.0 && analytic.p.width() == 0.0 && analytic.q.width() == 0.0;
    Ok((
        IndexTable {
            zippin_p: zp,
            zippin_q: zq,
            boyd_analytic: analytic,
            boyd_empirical: empirical,
            empirical_error: err,
            status: if exact { "exact" } else { "bracket" },
        },
        profile,
        code,
    ))
}

fn profile_csv(p: &DilationProfile) -> Result<String> {
    let mut buf = Vec::new();
    p.write_csv(&mut buf)?;
    Ok(String::from_utf8(buf).expect("csv is utf-8"))
}

pub fn indices(g: &Global, a: &IndicesArgs) -> Result<Outcome> {
    let fs = phi_spec(&a.f_phi)?;
    let gs = g_or_f(&fs, &a.g_phi)?;
    let grid = a_grid(a.grid);
    let (table, profile, code) = index_table(&fs, &gs, &grid)?;
    let csv = profile_csv(&profile)?;
    if let Some(path) = &a.profile_out {
        std::fs::write(path, &csv).map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display())))?;
    }
    let inputs = json!({ "F": fs, "G": gs, "grid": a.grid, "tol": g.tol });
    let result = json!({ "indices": table, "profile": profile });
    Ok(outcome("indices", inputs, result, csv, code))
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Two-exponent construction with p(L_{1,G}) = p/q.
    Thm41,
    /// Dilatory construction with q = 1 and growing exponents.
    Thm42,
    /// A single block scale `a` for (p, q, M).
    Block,
}

#[derive(Args, Debug)]
pub struct CounterexampleArgs {
    #[arg(long, value_enum, default_value_t = Mode::Thm41)]
    pub mode: Mode,
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
    #[arg(long, default_value_t = 2.0)]
    pub q: f64,
    #[arg(long, default_value_t = 6)]
    pub blocks: usize,
    /// `pow2` or explicit counts `M0:N0,M1:N1,...`.
    #[arg(long, default_value = "pow2")]
    pub schedule: String,
    /// Term count for `--mode block`.
    #[arg(long, default_value_t = 2)]
    pub m: u64,
    /// Tolerance for the witness identities.
    #[arg(long, default_value_t = 1e-9)]
    pub identity_tol: f64,
    #[arg(long, default_value_t = 40)]
    pub grid: u32,
    /// Skip the index table (no dilation profile).
    #[arg(long)]
    pub skip_indices: bool,
}

fn schedule(s: &str) -> Result<Schedule> {
    if s == "pow2" {
        return Ok(Schedule::Pow2);
    }
    let pairs = s
        .split(',')
        .map(|t| {
            let (m, n) = t
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("schedule entry '{t}' must read M:N")))?;
            let parse = |x: &str| x.trim().parse::<u64>().map_err(|_| Error::Parse(format!("'{x}' is not a count")));
            Ok((parse(m)?, parse(n)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Schedule::Explicit(pairs))
}

pub fn counterexample(_g: &Global, a: &CounterexampleArgs) -> Result<Outcome> {
    let one = PhiSpec::Power { p: 1.0 };
    let grid = a_grid(a.grid);
    match a.mode {
        Mode::Block => {
            let x = solve_block_scale(a.p, a.q, a.m)?;
            let inputs = json!({ "mode": a.mode, "p": a.p, "q": a.q, "m": a.m });
            let csv = format!("p,q,m,a\n{},{},{},{:e}\n", a.p, a.q, a.m, x);
            Ok(outcome("counterexample", inputs, json!({ "a": x }), csv, EXIT_OK))
        }
        Mode::Thm41 => {
            let sched = schedule(&a.schedule)?;
            let spec = CounterexampleSpec::new(a.p, a.q, a.blocks, &sched)?;
            let report = verify_counterexample(&spec, a.identity_tol)?;
            let gs = PhiSpec::Counterexample { p: a.p, q: a.q, blocks: a.blocks, schedule: sched };
            let table = if a.skip_indices { None } else { Some(index_table(&one, &gs, &grid)?) };
            let mut code = if report.all_ok { EXIT_OK } else { EXIT_CONTRADICTION };
            if let Some(t) = &table {
                code = code.max(t.2);
            }
            let mut csv = String::from("block,theta,norm_f,norm_g,dilation_ratio,forced_ratio,stated_ratio,ok\n");
            for c in &report.checks {
                csv += &format!(
                    "{},{},{:e},{:e},{:e},{:e},{:e},{}\n",
                    c.label,
                    c.theta,
                    c.norm_f.value(),
                    c.norm_g.value(),
                    c.dilation_ratio,
                    c.forced_ratio,
                    c.stated_ratio,
                    c.ok()
                );
            }
            let inputs = json!({ "mode": a.mode, "G": gs, "identity_tol": a.identity_tol, "grid": a.grid, "skip_indices": a.skip_indices });
            let result = json!({
                "blocks": spec.blocks,
                "verification": report,
                "indices": table.map(|t| t.0),
            });
            Ok(outcome("counterexample", inputs, result, csv, code))
        }
        Mode::Thm42 => {
            let spec = Theorem42Spec::new(a.blocks)?;
            let gphi = build_theorem42_phi(&spec)?;
            let report = verify_theorem42(&spec, a.identity_tol)?;
            let mut rows = Vec::new();
            if !a.skip_indices {
                for k in 1..=a.blocks {
                    let gs = PhiSpec::Theorem42 { blocks: k };
                    let (t, _, _) = index_table(&one, &gs, &grid)?;
                    let p_upper = t.boyd_empirical.as_ref().map(|e| e.p_upper_raw);
                    rows.push(json!({ "blocks": k, "p_last": spec.blocks[k - 1].p_k, "p_upper": p_upper }));
                }
            }
            let uppers: Vec<f64> = rows.iter().filter_map(|r| r["p_upper"].as_f64()).collect();
            let decreasing = uppers.len() == rows.len() && uppers.windows(2).all(|w| w[1] < w[0]);
            let mut csv = String::from("blocks,p_last,p_upper\n");
            for r in &rows {
                csv += &format!("{},{},{}\n", r["blocks"], r["p_last"], r["p_upper"]);
            }
            let code = if report.all_ok { EXIT_OK } else { EXIT_CONTRADICTION };
            let inputs = json!({ "mode": a.mode, "blocks": a.blocks, "identity_tol": a.identity_tol, "grid": a.grid, "skip_indices": a.skip_indices });
            let result = json!({
                "reading": spec.reading,
                "blocks": spec.blocks,
                "dilatory": gphi.is_dilatory(),
                "delta2": gphi.satisfies_delta2(),
                "verification": report,
                "p_upper_table": rows,
                "p_upper_strictly_decreasing": decreasing,
            });
            Ok(outcome("counterexample", inputs, result, csv, code))
        }
    }
}

#[derive(Args, Debug)]
pub struct ConvexityArgs {
    #[arg(long = "F")]
    pub f_phi: String,
    /// Defaults to F.
    #[arg(long = "G")]
    pub g_phi: Option<String>,
    /// The exponent p (convexity) or q (concavity).
    #[arg(long)]
    pub exponent: f64,
    /// Probe q-concavity instead of p-convexity.
    #[arg(long)]
    pub concave: bool,
    #[arg(long, value_delimiter = ',', default_value = "harmonic_comb,disjoint_translates,nested_staircases,uniform")]
    pub families: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "1,2,4,8,16,32,64")]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 2)]
    pub trials: usize,
}

pub fn convexity(g: &Global, a: &ConvexityArgs) -> Result<Outcome> {
    let fs = phi_spec(&a.f_phi)?;
    let gs = g_or_f(&fs, &a.g_phi)?;
    let (fp, gp) = (fs.build()?, gs.build()?);
    let kinds = a.families.iter().map(|s| FamilyKind::parse(s)).collect::<Result<Vec<_>>>()?;
    let cfg = FamilyConfig::new(kinds, a.sizes.clone(), a.trials, g.seed);
    let space = OrliczLorentz::new(&fp, &gp);
    let hyp = theorem51_hypotheses(&fp, &gp, a.exponent, a.exponent, DEFAULT_C_MAX)?;
    let report = if a.concave {
        concavity_probe(&space, a.exponent, &cfg, None, g.tol)?
    } else {
        convexity_probe(&space, a.exponent, &cfg, guaranteed_convexity_bound(&fp, &gp, a.exponent), g.tol)?
    };
    let code = match report.verdict {
        Verdict::Consistent => EXIT_OK,
        Verdict::Violated { .. } => EXIT_CONTRADICTION,
    };
    let mut csv = String::from("family,n,ratio\n");
    for (k, n, r) in &report.curve {
        csv += &format!("{},{},{:e}\n", k.name(), n, r);
    }
    let inputs = json!({ "F": fs, "G": gs, "exponent": a.exponent, "concave": a.concave, "families": cfg });
    let result = json!({ "report": report, "hypotheses": hyp });
    Ok(outcome("convexity", inputs, result, csv, code))
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Operator {
    /// f**(x) = (1/x) ∫_0^x f*.
    Star,
    /// f_**(x) = f*(x) + (1/x) ∫_x^∞ f*.
    Lowerstar,
}

#[derive(Args, Debug)]
pub struct HardyArgs {
    #[arg(long = "F")]
    pub f_phi: String,
    /// Defaults to F.
    #[arg(long = "G")]
    pub g_phi: Option<String>,
    /// Norm of the operator applied to this function.
    #[arg(long = "f", conflicts_with = "samples")]
    pub f: Option<String>,
    #[arg(long, value_enum, default_value_t = Operator::Star)]
    pub operator: Operator,
    /// Run the Hardy inequality probe on this many seeded samples.
    #[arg(long)]
    pub samples: Option<usize>,
}

pub fn hardy(g: &Global, a: &HardyArgs) -> Result<Outcome> {
    let fs = phi_spec(&a.f_phi)?;
    let gs = g_or_f(&fs, &a.g_phi)?;
    let (fp, gp) = (fs.build()?, gs.build()?);
    if let Some(n) = a.samples {
        let sampler = StepSampler::default();
        let mut r = rng(g.seed);
        let samples: Vec<StepFunction> = (0..n).map(|_| sampler.step(&mut r)).collect();
        let rep = hardy_inequality_probe(&fp, &gp, &samples, g.tol)?;
        let mut csv = String::from("sample,ratio,left_ok\n");
        for (i, s) in rep.samples.iter().enumerate() {
            csv += &format!("{i},{:e},{}\n", s.ratio, s.left_ok);
        }
        let code = if rep.all_left_ok { EXIT_OK } else { EXIT_CONTRADICTION };
        let inputs = json!({ "F": fs, "G": gs, "samples": n });
        return Ok(outcome("hardy", inputs, to_value(&rep), csv, code));
    }
    let f = step_function(a.f.as_deref().ok_or_else(|| Error::InvalidParameter("hardy needs --f or --samples".into()))?)?;
    let kind = match a.operator {
        Operator::Star => HardyKind::Star,
        Operator::Lowerstar => HardyKind::LowerStar,
    };
    let r = hardy_norm(&fp, &gp, &f, kind, g.tol)?;
    let nf = OrliczLorentz::new(&fp, &gp).norm(&f, g.tol)?;
    let ratio = (r.ln_value() - nf.ln_value()).exp();
    let inputs = json!({ "F": fs, "G": gs, "f": f, "operator": a.operator });
    let csv = format!("lo,value,hi,ratio\n{:e},{:e},{:e},{:e}\n", r.lo, r.value(), r.hi, ratio);
    let result = json!({ "operator": a.operator, "value": r.value(), "bracket": r, "norm_f": nf, "ratio": ratio });
    Ok(outcome("hardy", inputs, result, csv, EXIT_OK))
}
