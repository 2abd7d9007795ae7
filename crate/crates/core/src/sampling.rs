//! Seeded generators for φ-functions, step functions and space pairs.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::phi::PhiFunction;
use crate::step::StepFunction;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiSampler {
    pub max_knots: usize,
    pub slope_range: (f64, f64),
    pub u_range: (f64, f64),
}

impl Default for PhiSampler {
    fn default() -> Self {
        PhiSampler {
            max_knots: 5,
            slope_range: (0.5, 4.0),
            u_range: (-6.0, 6.0),
        }
    }
}

impl PhiSampler {
    fn slope<R: Rng>(&self, rng: &mut R) -> f64 {
        rng.gen_range(self.slope_range.0..=self.slope_range.1)
    }

    fn knots<R: Rng>(&self, rng: &mut R, slopes: &[f64]) -> Vec<(f64, f64)> {
        let mut us: Vec<f64> = (0..=slopes.len())
            .map(|_| rng.gen_range(self.u_range.0..self.u_range.1))
            .collect();
        us.sort_by(|a, b| a.partial_cmp(b).unwrap());
        us.dedup();
        let mut v = rng.gen_range(-2.0..2.0);
        let mut out = vec![(us[0], v)];
        for (w, s) in us.windows(2).zip(slopes) {
            v += s * (w[1] - w[0]);
            out.push((w[1], v));
        }
        out
    }

    /// Arbitrary slopes and tails.
    pub fn phi<R: Rng>(&self, rng: &mut R) -> PhiFunction {
        loop {
            let n = rng.gen_range(0..self.max_knots);
            let slopes: Vec<f64> = (0..n).map(|_| self.slope(rng)).collect();
            let knots = self.knots(rng, &slopes);
            let slopes = knots.windows(2).map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0)).collect();
            if let Ok(f) = PhiFunction::from_loglog(knots, slopes, self.slope(rng), self.slope(rng)) {
                return f;
            }
        }
    }

    /// Every interior slope lies between the two tail slopes, so the
    /// extreme slopes are the indices.
    pub fn uniform_regular_phi<R: Rng>(&self, rng: &mut R) -> PhiFunction {
        loop {
            let (a, b) = (self.slope(rng), self.slope(rng));
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let n = rng.gen_range(0..self.max_knots);
            let slopes: Vec<f64> = (0..n).map(|_| rng.gen_range(lo..=hi)).collect();
            let knots = self.knots(rng, &slopes);
            let slopes = knots.windows(2).map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0)).collect();
            let (tl, th) = if rng.gen_bool(0.5) { (lo, hi) } else { (hi, lo) };
            if let Ok(f) = PhiFunction::from_loglog(knots, slopes, tl, th) {
                return f;
            }
        }
    }
}

pub fn is_uniform_regular(f: &PhiFunction) -> bool {
    let m = f.mo_indices();
    let eps = 1e-12;
    f.min_slope() >= m.p_m - eps && f.max_slope() <= m.q_m + eps
}

/// A pair `(F, G)` with `F`, `G` and `F∘G^{-1}` all uniform regular.
pub fn regular_pair<R: Rng>(sampler: &PhiSampler, rng: &mut R) -> (PhiFunction, PhiFunction) {
    loop {
        let f = sampler.uniform_regular_phi(rng);
        let g = sampler.uniform_regular_phi(rng);
        if is_uniform_regular(&f.compose(&g.inverse())) {
            return (f, g);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepSampler {
    pub max_cells: usize,
    pub ln_len_range: (f64, f64),
    pub ln_val_range: (f64, f64),
}

impl Default for StepSampler {
    fn default() -> Self {
        StepSampler {
            max_cells: 8,
            ln_len_range: (-4.0, 4.0),
            ln_val_range: (-3.0, 3.0),
        }
    }
}

impl StepSampler {
    /// Nonzero step function with cells in arbitrary order.
    pub fn step<R: Rng>(&self, rng: &mut R) -> StepFunction {
        let n = rng.gen_range(1..=self.max_cells);
        let cells = (0..n)
            .map(|_| {
                (
                    rng.gen_range(self.ln_len_range.0..self.ln_len_range.1).exp(),
                    rng.gen_range(self.ln_val_range.0..self.ln_val_range.1).exp(),
                )
            })
            .collect();
        StepFunction::new(cells).expect("sampled cells are positive")
    }
}
