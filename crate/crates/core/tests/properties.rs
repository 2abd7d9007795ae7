use orliczlab::convexity::{family_ratio, FamilyKind};
use orliczlab::functionals::OrliczLorentz;
use orliczlab::indices::{boyd_analytic_bracket, zippin_indices};
use orliczlab::sampling::{rng, PhiSampler, StepSampler};
use orliczlab::{DilationFactor, PhiFunction, PhiSpec, StepFunction};
use proptest::prelude::*;

fn phi(seed: u64) -> PhiFunction {
    PhiSampler::default().phi(&mut rng(seed))
}

fn step(seed: u64) -> StepFunction {
    StepSampler::default().step(&mut rng(seed))
}

fn ratio(space: &OrliczLorentz, f: &StepFunction, a: f64) -> f64 {
    let n = space.norm(f, 1e-13).unwrap();
    let d = space.norm(&f.dilate(DilationFactor::new(a).unwrap()), 1e-13).unwrap();
    d.value() / n.value()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn involutions_are_exact(seed in any::<u64>()) {
        let f = phi(seed);
        prop_assert_eq!(f.tilde().tilde(), f.clone());
        prop_assert_eq!(f.inverse().inverse(), f);
    }

    #[test]
    fn inverse_round_trip(seed in any::<u64>(), lt in -20.0f64..20.0) {
        let f = phi(seed);
        let t = lt.exp();
        let back = f.inverse().eval(f.eval(t));
        prop_assert!((back - t).abs() <= 1e-12 * t, "{} vs {}", back, t);
    }

    #[test]
    fn composition_index_laws(s1 in any::<u64>(), s2 in any::<u64>()) {
        let (f, g) = (phi(s1), phi(s2));
        let (mf, mg) = (f.mo_indices(), g.mo_indices());
        let eps = 1e-12;
        prop_assert!(f.compose(&g).mo_indices().p_m >= mf.p_m * mg.p_m - eps);
        prop_assert!(f.compose(&g.inverse()).mo_indices().p_m >= mf.p_m / mg.q_m - eps);
        prop_assert!(mf.p_m <= mf.q_m);
    }

    #[test]
    fn spec_json_round_trip_is_exact(seed in any::<u64>()) {
        let f = phi(seed);
        let spec = PhiSpec::of(&f);
        let back = PhiSpec::from_json(&spec.to_json()).unwrap();
        prop_assert_eq!(&back, &spec);
        prop_assert_eq!(back.build().unwrap(), f);
    }

    #[test]
    fn norm_is_homogeneous(s1 in any::<u64>(), s2 in any::<u64>(), la in -6.0f64..6.0) {
        let space = OrliczLorentz::new(&phi(s1), &phi(s1 ^ 0x5555));
        let f = step(s2);
        let a = la.exp();
        let n = space.norm(&f, 1e-13).unwrap().value();
        let m = space.norm(&f.scale(a), 1e-13).unwrap().value();
        prop_assert!((m / (a * n) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn rearrangement_commutes_with_dilation(seed in any::<u64>(), la in -4.0f64..4.0) {
        let f = step(seed);
        let a = DilationFactor::new(la.exp()).unwrap();
        prop_assert_eq!(f.dilate(a).rearrange(), f.rearrange().dilate(a));
    }

    #[test]
    fn dilation_ratio_is_submultiplicative_per_witness(s1 in any::<u64>(), s2 in any::<u64>(), la in -2.0f64..2.0, lb in -2.0f64..2.0) {
        // ‖d_{ab} f‖/‖f‖ = (‖d_a(d_b f)‖/‖d_b f‖)(‖d_b f‖/‖f‖)
        let space = OrliczLorentz::new(&phi(s1), &phi(s1.wrapping_add(1)));
        let f = step(s2);
        let (a, b) = (la.exp(), lb.exp());
        let fb = f.dilate(DilationFactor::new(b).unwrap());
        let lhs = ratio(&space, &f, a * b);
        let rhs = ratio(&space, &fb, a) * ratio(&space, &f, b);
        prop_assert!(lhs <= rhs * (1.0 + 1e-9), "{} > {}", lhs, rhs);
    }

    #[test]
    fn analytic_boyd_bracket_is_ordered(s1 in any::<u64>(), s2 in any::<u64>()) {
        let (f, g) = (phi(s1), phi(s2));
        let b = boyd_analytic_bracket(&f, &g);
        prop_assert!(b.p.lo <= b.p.hi + 1e-12 && b.q.lo <= b.q.hi + 1e-12);
        prop_assert!(b.p_weak_lo <= b.p.lo + 1e-12 && b.q_weak_hi >= b.q.hi - 1e-12);
        let (pz, qz) = zippin_indices(&f, &g);
        // p(X) <= p_z(X) and q(X) >= q_z(X)
        prop_assert!(b.p.lo <= pz.hi + 1e-12 && b.q.hi >= qz.lo - 1e-12);
    }

    #[test]
    fn probe_ratio_is_scale_invariant(seed in any::<u64>(), la in -5.0f64..5.0, kind in 0usize..4) {
        let space = OrliczLorentz::new(&PhiFunction::power(1.5).unwrap(), &PhiFunction::power(2.5).unwrap());
        let fs = FamilyKind::ALL[kind].generate(5, seed);
        let scaled: Vec<StepFunction> = fs.iter().map(|f| f.scale(la.exp())).collect();
        let r = family_ratio(&space, &fs, 1.5, 1e-14).unwrap();
        let s = family_ratio(&space, &scaled, 1.5, 1e-14).unwrap();
        prop_assert!((r - s).abs() < 1e-12, "{} vs {}", r, s);
    }
}

#[test]
fn equivalence_of_shifted_power() {
    let t2 = PhiFunction::power(2.0).unwrap();
    let four = t2.shift_v(4f64.ln());
    assert!(t2.equivalent(&t2, 1.0));
    assert!(t2.equivalent(&four, 2.0 + 1e-12));
    assert!(!t2.equivalent(&PhiFunction::power(1.0).unwrap(), 1e6));
}
