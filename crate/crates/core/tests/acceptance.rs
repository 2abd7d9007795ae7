use std::time::Instant;

use orliczlab::convexity::{convexity_probe, hardy_inequality_probe, FamilyConfig, FamilyKind};
use orliczlab::counterexample::{
    build_theorem41_phi, solve_block_scale, verify_lemma43, CounterexampleSpec, Schedule,
};
use orliczlab::functionals::{luxemburg_norm, torchinsky_norm, OrliczLorentz};
use orliczlab::indices::{
    boyd_analytic_bracket, boyd_empirical_bounds, default_a_grid, default_dictionary, dilation_profile,
    indicator_dictionary, indicator_profile_slope, staircase_dictionary, zippin_indices, DictionaryEntry,
};
use orliczlab::quadrature::integrate;
use orliczlab::sampling::{regular_pair, rng, PhiSampler, StepSampler};
use orliczlab::{DilationFactor, PhiFunction, StepFunction};

/// Criteria whose literal statement cannot hold, with the reason.
const KNOWN_FAILURES: &[(u32, &str)] = &[
    (2, "the stated dilation exponent (q/p)θ contradicts ‖f‖ = ‖g‖ = 1; the forced exponent is (p/q)θ"),
    (3, "q_z(L_{1,G}) = q_m(T^1) = 1, so a q_z bracket containing 2 is impossible"),
];

struct Line {
    id: u32,
    pass: bool,
    detail: String,
}

fn pw(p: f64) -> PhiFunction {
    PhiFunction::power(p).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn criterion1() -> Line {
    let t = Instant::now();
    let a = solve_block_scale(1.0, 1.0, 2).unwrap();
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let el = t.elapsed().as_secs_f64();
    Line {
        id: 1,
        pass: (a - phi).abs() <= 1e-12 && el < 1.0,
        detail: format!("a = {a:.16}, |a - φ| = {:.2e}, {el:.3}s", (a - phi).abs()),
    }
}

fn criterion2() -> Vec<Line> {
    let t = Instant::now();
    let spec = CounterexampleSpec::new(1.0, 2.0, 1, &Schedule::Explicit(vec![(5, 5)])).unwrap();
    let g = build_theorem41_phi(&spec).unwrap();
    let space = OrliczLorentz::new(&pw(1.0), &g);
    let block = spec.lemma_blocks().into_iter().next().unwrap();
    let (mut norms, mut modular, mut stated, mut forced) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for theta in [0.0, 0.25, 0.5] {
        let r = verify_lemma43(&space, &block, theta, 1e-9).unwrap();
        norms = norms.max((r.norm_f.value() - 1.0).abs()).max((r.norm_g.value() - 1.0).abs());
        modular = modular
            .max((r.modular_f - 1.0).abs())
            .max((r.closed_form_modular - 1.0).abs());
        stated = stated.max(rel(r.dilation_ratio, r.stated_ratio));
        forced = forced.max(rel(r.dilation_ratio, r.forced_ratio));
    }
    let el = t.elapsed().as_secs_f64();
    let base = norms <= 1e-10 && modular <= 1e-12 && el < 10.0;
    vec![
        Line {
            id: 2,
            pass: base && stated <= 1e-9,
            detail: format!(
                "norms err {norms:.1e}, modular err {modular:.1e}, stated a^((q/p)θ) err {stated:.2e}, {el:.2}s"
            ),
        },
        Line {
            id: 102,
            pass: base && forced <= 1e-9,
            detail: format!("proof exponent a^((p/q)θ) err {forced:.1e}"),
        },
    ]
}

fn boyd_run(k: usize) -> (f64, f64, orliczlab::IndexBracket, orliczlab::IndexBracket) {
    let spec = CounterexampleSpec::new(1.0, 2.0, k, &Schedule::Pow2).unwrap();
    let g = build_theorem41_phi(&spec).unwrap();
    let f = pw(1.0);
    let grid = default_a_grid();
    let dict = default_dictionary(&spec.lemma_blocks(), &grid);
    let prof = dilation_profile(&OrliczLorentz::new(&f, &g), &dict, &grid).unwrap();
    let e = boyd_empirical_bounds(&prof, &boyd_analytic_bracket(&f, &g), &dict).unwrap();
    let (pz, qz) = zippin_indices(&f, &g);
    (e.p_upper_raw, e.q_lower_raw, pz, qz)
}

fn criterion3() -> Vec<Line> {
    let t = Instant::now();
    let runs: Vec<_> = [2, 4, 6].into_iter().map(boyd_run).collect();
    let el = t.elapsed().as_secs_f64();
    let (p_up, q_lo, pz, qz) = &runs[2];
    let slack = 1e-9;
    let trend = runs.windows(2).all(|w| w[1].0 <= w[0].0 + slack && w[1].1 >= w[0].1 - slack);
    let pz_ok = pz.contains(1.0, 0.0) && pz.width() <= 0.05;
    let gap = 1.0 - p_up >= 0.4 && q_lo - 1.0 >= 0.4;
    let common = pz_ok && *p_up <= 0.55 && *q_lo >= 1.8 && gap && trend && el < 300.0;
    let trend_s: Vec<String> = runs.iter().map(|r| format!("({:.6}, {:.6})", r.0, r.1)).collect();
    vec![
        Line {
            id: 3,
            pass: common && qz.contains(2.0, 0.0),
            detail: format!(
                "p_z [{}, {}], q_z [{}, {}] (literal: contains 2), p-upper {p_up:.6}, q-lower {q_lo:.6}, K=2,4,6 {}, {el:.1}s",
                pz.lo, pz.hi, qz.lo, qz.hi, trend_s.join(" ")
            ),
        },
        Line {
            id: 103,
            pass: common && qz.contains(1.0, 0.0) && qz.width() <= 0.05,
            detail: format!("q_z [{}, {}] contains q_m(T^1) = 1; gap p {:.3}, q {:.3}", qz.lo, qz.hi, 1.0 - p_up, q_lo - 1.0),
        },
    ]
}

fn criterion4() -> Line {
    let t = Instant::now();
    let (ps, ss) = (PhiSampler::default(), StepSampler::default());
    let mut r = rng(4);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let f_phi = ps.phi(&mut r);
        let f = ss.step(&mut r);
        let ol = OrliczLorentz::new(&f_phi, &f_phi).norm(&f, 1e-13).unwrap().value();
        let lux = luxemburg_norm(&f_phi, &f, 1e-13).unwrap().value();
        worst = worst.max(rel(ol, lux));
    }
    let el = t.elapsed().as_secs_f64();
    Line {
        id: 4,
        pass: worst <= 1e-10 && el < 30.0,
        detail: format!("max rel diff {worst:.2e} over 100 pairs, {el:.2}s"),
    }
}

fn decade_grid() -> Vec<f64> {
    (-6..=6).map(|j| 10f64.powi(j)).collect()
}

fn criterion5() -> Line {
    let t = Instant::now();
    let ps = PhiSampler::default();
    let mut r = rng(5);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let (f_phi, g_phi) = (ps.phi(&mut r), ps.phi(&mut r));
        let space = OrliczLorentz::new(&f_phi, &g_phi);
        let ft = f_phi.tilde();
        for s in decade_grid() {
            let n = space.norm(&StepFunction::indicator(s).unwrap(), 1e-14).unwrap().value();
            worst = worst.max(rel(n, ft.eval_inverse(s)));
        }
    }
    let el = t.elapsed().as_secs_f64();
    Line {
        id: 5,
        pass: worst <= 1e-12 && el < 10.0,
        detail: format!("max rel err {worst:.2e} over 20 pairs x 13 decades, {el:.2}s"),
    }
}

/// `(q/p ∫ f*(y)^q y^{q/p} dy/y)^{1/q}` by adaptive quadrature per cell.
fn lorentz_oracle(f: &StepFunction, p: f64, q: f64) -> f64 {
    let fs = f.rearrange();
    let mut left = 0.0;
    let mut total = 0.0;
    for &(len, v) in fs.cells() {
        let right = left + len;
        let (i, _) = integrate(|y| y.powf(q / p - 1.0), left, right, 1e-14, 0.0, 4000);
        total += v.powf(q) * i;
        left = right;
    }
    (q / p * total).powf(1.0 / q)
}

fn criterion6() -> Line {
    let ss = StepSampler::default();
    let mut r = rng(6);
    let mut worst = 0.0f64;
    for (p, q) in [(2.0, 1.0), (1.0, 2.0), (3.0, 1.5)] {
        let space = OrliczLorentz::new(&pw(p), &pw(q));
        for _ in 0..50 {
            let f = ss.step(&mut r);
            let n = space.norm(&f, 1e-13).unwrap().value();
            worst = worst.max(rel(n, lorentz_oracle(&f, p, q)));
        }
    }
    Line {
        id: 6,
        pass: worst <= 1e-8,
        detail: format!("max rel err {worst:.2e} over 150 cases"),
    }
}

fn criterion7() -> Line {
    let t = Instant::now();
    let ps = PhiSampler::default();
    let ss = StepSampler::default();
    let mut r = rng(7);
    let grid: Vec<f64> = (-20..=20).map(|k| 2f64.powf(k as f64 / 2.0)).collect();
    let mut violations = 0;
    let mut min_margin = f64::INFINITY;
    for _ in 0..50 {
        let (f_phi, g_phi) = regular_pair(&ps, &mut r);
        let mut dict: Vec<DictionaryEntry> = indicator_dictionary().into_iter().step_by(3).collect();
        dict.extend(staircase_dictionary());
        for i in 0..6 {
            dict.push(DictionaryEntry::new(format!("random:{i}"), ss.step(&mut r).to_log()));
        }
        let analytic = boyd_analytic_bracket(&f_phi, &g_phi);
        let prof = dilation_profile(&OrliczLorentz::new(&f_phi, &g_phi), &dict, &grid).unwrap();
        match boyd_empirical_bounds(&prof, &analytic, &dict) {
            Ok(e) => {
                let m = (e.p_upper_raw - analytic.p.lo).min(analytic.q.hi - e.q_lower_raw);
                min_margin = min_margin.min(m);
                if !analytic.p.contains(e.p.hi, 1e-9) || !analytic.q.contains(e.q.lo, 1e-9) {
                    violations += 1;
                }
            }
            Err(_) => violations += 1,
        }
    }
    let el = t.elapsed().as_secs_f64();
    Line {
        id: 7,
        pass: violations == 0,
        detail: format!("{violations} violations over 50 regular pairs, min margin {min_margin:.2e}, {el:.1}s"),
    }
}

fn criterion8() -> Line {
    let ss = StepSampler::default();
    let mut r = rng(8);
    let samples: Vec<StepFunction> = (0..200).map(|_| ss.step(&mut r)).collect();
    let rep = hardy_inequality_probe(&pw(2.0), &pw(2.0), &samples, 1e-12).unwrap();
    let chi = hardy_inequality_probe(&pw(2.0), &pw(2.0), &[StepFunction::indicator(1.0).unwrap()], 1e-13).unwrap();
    let err = (chi.max_ratio - 2f64.sqrt()).abs();
    Line {
        id: 8,
        pass: rep.max_ratio <= 2.0 + 1e-6 && rep.all_left_ok && err <= 1e-10,
        detail: format!("max ratio {:.6} over 200 samples, χ ratio err {err:.1e}", rep.max_ratio),
    }
}

fn criterion9() -> Line {
    let mut worst = 0.0f64;
    for (p, q) in [(1.0, 1.0), (2.0, 1.0), (1.0, 2.0)] {
        for s in decade_grid() {
            let n = torchinsky_norm(&pw(p), &pw(q), &StepFunction::indicator(s).unwrap(), 1e-13)
                .unwrap()
                .value();
            worst = worst.max(rel(n, (p / q).powf(1.0 / q) * s.powf(1.0 / p)));
        }
    }
    let slope_err = |f_phi: &PhiFunction, g_phi: &PhiFunction| {
        let slope = indicator_profile_slope(
            |s| torchinsky_norm(f_phi, g_phi, &StepFunction::indicator(s).unwrap(), 1e-12),
            &decade_grid(),
        )
        .unwrap();
        (slope - 1.0 / f_phi.mo_indices().p_m).abs()
    };
    let power_err = [(1.0, 1.0), (2.0, 1.0), (1.0, 2.0)]
        .into_iter()
        .map(|(p, q)| slope_err(&pw(p), &pw(q)))
        .fold(0.0f64, f64::max);
    // informational: a finite window sees the interior kink of a non-power F
    let kinked = PhiFunction::from_knots(vec![(-1.0, -2.0), (0.0, 0.0), (0.5, 2.0), (1.0, 3.0)], 2.0, 2.0).unwrap();
    let kinked_err = slope_err(&kinked, &pw(1.5));
    Line {
        id: 9,
        pass: worst <= 1e-10 && power_err <= 0.02,
        detail: format!(
            "max rel err {worst:.2e}, regression slope err {power_err:.2e} (kinked F, not gated: {kinked_err:.2e})"
        ),
    }
}

fn criterion10() -> Line {
    let space = OrliczLorentz::new(&pw(1.0), &pw(2.0));
    let cfg = FamilyConfig::new(vec![FamilyKind::HarmonicComb], vec![4, 256], 1, 10);
    let rep = convexity_probe(&space, 1.0, &cfg, None, 1e-12).unwrap();
    let c = rep.curve_for(FamilyKind::HarmonicComb);
    let factor = c[1].1 / c[0].1;
    Line {
        id: 10,
        pass: factor >= 1.3,
        detail: format!("ratio n=4 {:.4}, n=256 {:.4}, factor {factor:.3}", c[0].1, c[1].1),
    }
}

fn criterion11() -> Line {
    let t = Instant::now();
    let (ps, ss) = (PhiSampler::default(), StepSampler::default());
    let mut r = rng(11);
    let mut fails: Vec<&str> = Vec::new();
    for case in 0..1000 {
        let (f_phi, g_phi) = (ps.phi(&mut r), ps.phi(&mut r));
        let space = OrliczLorentz::new(&f_phi, &g_phi);
        let f = ss.step(&mut r);
        let nf = space.norm(&f, 1e-13).unwrap().value();

        let alpha = (r.gen_range(-5.0..5.0) as f64).exp();
        let na = space.norm(&f.scale(alpha), 1e-13).unwrap().value();
        if rel(na, alpha * nf) > 1e-10 {
            fails.push("homogeneity");
        }

        let bumped: Vec<(f64, f64)> = f
            .cells()
            .iter()
            .enumerate()
            .map(|(i, &(l, v))| (l, if (i + case) % 2 == 0 { v * 1.5 } else { v }))
            .collect();
        let nb = space.norm(&StepFunction::new(bumped).unwrap(), 1e-13).unwrap();
        if nb.hi < nf * (1.0 - 1e-12) {
            fails.push("monotonicity");
        }

        let mut perm = f.cells().to_vec();
        let shift = case % perm.len();
        perm.rotate_left(shift);
        perm.reverse();
        let np = space.norm(&StepFunction::new(perm).unwrap(), 1e-13).unwrap().value();
        if rel(np, nf) > 1e-14 {
            fails.push("rearrangement invariance");
        }

        if f_phi.tilde().tilde() != f_phi || f_phi.inverse().inverse() != f_phi {
            fails.push("involutions");
        }

        let a = DilationFactor::new((r.gen_range(-3.0..3.0) as f64).exp()).unwrap();
        if f.dilate(a).rearrange() != f.rearrange().dilate(a) {
            fails.push("dilation commutes with rearrangement");
        }

        // dilatory: F(e t) >= e^{s_min} F(t); Δ2: F(2t) <= 2^{s_max} F(t), on a grid
        let us: Vec<f64> = (-40..=40).map(|k| k as f64 * 0.25).collect();
        let up = us.iter().map(|&u| f_phi.log_eval(u + 1.0) - f_phi.log_eval(u)).fold(f64::INFINITY, f64::min);
        let dn = us
            .iter()
            .map(|&u| f_phi.log_eval(u + 2f64.ln()) - f_phi.log_eval(u))
            .fold(f64::NEG_INFINITY, f64::max);
        let dil = f_phi.is_dilatory().is_yes();
        let d2 = f_phi.satisfies_delta2().is_yes();
        if dil != (up > 0.0) || d2 != dn.is_finite() {
            fails.push("index-condition predicates on grid");
        }
    }
    fails.sort();
    fails.dedup();
    let el = t.elapsed().as_secs_f64();
    Line {
        id: 11,
        pass: fails.is_empty() && el < 120.0,
        detail: format!("1000 cases per property, failing: {fails:?}, {el:.1}s"),
    }
}

use rand::Rng;

#[test]
fn acceptance() {
    let mut lines = vec![criterion1()];
    lines.extend(criterion2());
    lines.extend(criterion3());
    lines.extend([criterion4(), criterion5(), criterion6(), criterion7(), criterion8(), criterion9(), criterion10(), criterion11()]);
    let mut unexpected = Vec::new();
    for l in &lines {
        let label = if l.id > 100 {
            format!("criterion {} (supplementary)", l.id - 100)
        } else {
            format!("criterion {}", l.id)
        };
        let known = KNOWN_FAILURES.iter().find(|k| k.0 == l.id);
        let status = if l.pass { "PASS" } else { "FAIL" };
        match (l.pass, known) {
            (false, Some(k)) => println!("{label}: {status} (known: {}) {}", k.1, l.detail),
            _ => println!("{label}: {status} {}", l.detail),
        }
        if !l.pass && known.is_none() {
            unexpected.push(l.id);
        }
    }
    assert!(unexpected.is_empty(), "unexpected failures: {unexpected:?}");
}
