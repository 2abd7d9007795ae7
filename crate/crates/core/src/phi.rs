//! φ-functions stored as piecewise-linear graphs in log-log coordinates.
//!
//! A [`PhiFunction`] is described by its knots `(u, v) = (ln t, ln F(t))`,
//! the slope of every interior segment, and the two tail slopes used to
//! extrapolate below the first and above the last knot. With every slope
//! strictly positive the function is continuous, strictly increasing,
//! vanishes at 0 and is unbounded, so every value of this type is a
//! φ-function.
//!
//! All evaluation happens on the log scale. Linear values are only
//! materialised by [`PhiFunction::eval`] and friends.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance used when merging adjacent segments of equal slope.
const SLOPE_MERGE_RTOL: f64 = 1e-12;
/// Knots closer than this (relative to `max(1, |u|)`) are treated as one.
const KNOT_MERGE_RTOL: f64 = 1e-12;
/// Tolerance for the continuity check `v[i+1] - v[i] = s[i] (u[i+1] - u[i])`.
const CONTINUITY_RTOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Power,
    Loglog,
    Compose,
    Inverse,
    Tilde,
    Complementary,
    Counterexample,
}

/// Range of slopes a function keeps revisiting near one end, on runs of
/// unbounded length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EndRange {
    pub min: f64,
    pub max: f64,
}

impl EndRange {
    pub fn point(s: f64) -> Self {
        EndRange { min: s, max: s }
    }

    fn is_point(&self) -> bool {
        self.min == self.max
    }

    fn reciprocal(&self) -> Self {
        EndRange {
            min: recip(self.max),
            max: recip(self.min),
        }
    }
}

fn recip(s: f64) -> f64 {
    if s == 0.0 {
        f64::INFINITY
    } else if s.is_infinite() {
        0.0
    } else {
        1.0 / s
    }
}

/// Asymptotic slope behaviour declared by a constructor whose knot span is a
/// finite window onto an infinite object (the block constructions).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Asymptotics {
    pub lo: EndRange,
    pub hi: EndRange,
    /// `true` when the ranges are attained, `false` when they only bound the
    /// asymptotic slopes (products of two non-degenerate ranges).
    pub exact: bool,
}

/// How the represented knot span relates to the function it stands for.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "extent", rename_all = "snake_case")]
pub enum Extent {
    /// The representation *is* the function: tails extend forever.
    Complete,
    /// The knot span is a window; tails are placeholders and indices come
    /// from a window scan of the represented slopes.
    Window,
    /// The knot span is a window and the constructor declared the
    /// asymptotic slope ranges.
    Declared(Asymptotics),
}

#[derive(Debug, Clone)]
pub struct PhiFunction {
    knots: Vec<(f64, f64)>,
    slopes: Vec<f64>,
    tail_lo: f64,
    tail_hi: f64,
    // reciprocals of the slopes, carried so that inverse is an exact involution
    inv_slopes: Vec<f64>,
    inv_tail_lo: f64,
    inv_tail_hi: f64,
    provenance: Provenance,
    extent: Extent,
}

/// Graph equality: provenance is bookkeeping and is ignored.
impl PartialEq for PhiFunction {
    fn eq(&self, other: &Self) -> bool {
        self.knots == other.knots
            && self.slopes == other.slopes
            && self.tail_lo == other.tail_lo
            && self.tail_hi == other.tail_hi
            && self.extent == other.extent
    }
}

/// Three-valued answer for predicates that depend on index brackets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "decision", rename_all = "snake_case")]
pub enum Decision {
    Yes,
    No,
    Indeterminate { lo: f64, hi: f64 },
}

impl Decision {
    pub fn is_yes(&self) -> bool {
        matches!(self, Decision::Yes)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndexMethod {
    ExactFromSlopes,
    Declared,
    WindowScan,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowSample {
    /// Window length in `ln t`.
    pub h: f64,
    pub inf_mean_slope: f64,
    pub sup_mean_slope: f64,
}

/// Lower and upper Matuszewska–Orlicz indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatuszewskaIndices {
    pub p_m: f64,
    pub q_m: f64,
    pub p_bracket: (f64, f64),
    pub q_bracket: (f64, f64),
    pub method: IndexMethod,
    pub window_curve: Option<Vec<WindowSample>>,
}

/// One linear piece of the log-log graph; `u0` may be `-inf`, `u1` may be `+inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub u0: f64,
    pub u1: f64,
    pub slope: f64,
    /// A point on the line: `v(anchor_u) = anchor_v`.
    pub anchor_u: f64,
    pub anchor_v: f64,
}

impl Segment {
    pub fn value(&self, u: f64) -> f64 {
        self.anchor_v + self.slope * (u - self.anchor_u)
    }
}

fn close(a: f64, b: f64, rtol: f64) -> bool {
    (a - b).abs() <= rtol * a.abs().max(b.abs())
}

fn check_slope(s: f64, what: &str) -> Result<()> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::InvalidPhi(format!(
            "{what} slope must be finite and > 0, got {s}"
        )));
    }
    Ok(())
}

impl PhiFunction {
    /// `T^p(t) = t^p`.
    pub fn power(p: f64) -> Result<Self> {
        if !(p > 0.0) || !p.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "power exponent must be finite and > 0, got {p}"
            )));
        }
        Ok(PhiFunction {
            knots: vec![(0.0, 0.0)],
            slopes: vec![],
            tail_lo: p,
            tail_hi: p,
            inv_slopes: vec![],
            inv_tail_lo: 1.0 / p,
            inv_tail_hi: 1.0 / p,
            provenance: Provenance::Power,
            extent: Extent::Complete,
        })
    }

    /// Build from explicit knots and segment slopes, validating continuity.
    pub fn from_loglog(
        knots: Vec<(f64, f64)>,
        slopes: Vec<f64>,
        tail_lo: f64,
        tail_hi: f64,
    ) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::InvalidPhi("at least one knot is required".into()));
        }
        if slopes.len() + 1 != knots.len() {
            return Err(Error::InvalidPhi(format!(
                "{} knots need {} slopes, got {}",
                knots.len(),
                knots.len() - 1,
                slopes.len()
            )));
        }
        check_slope(tail_lo, "lower tail")?;
        check_slope(tail_hi, "upper tail")?;
        for (i, &(u, v)) in knots.iter().enumerate() {
            if !u.is_finite() || !v.is_finite() {
                return Err(Error::InvalidPhi(format!("knot {i} is not finite")));
            }
        }
        for (i, w) in knots.windows(2).enumerate() {
            let s = slopes[i];
            check_slope(s, &format!("segment {i}"))?;
            let du = w[1].0 - w[0].0;
            if !(du > 0.0) {
                return Err(Error::InvalidPhi(format!(
                    "knot abscissae must be strictly increasing at segment {i}"
                )));
            }
            let dv = w[1].1 - w[0].1;
            let scale = dv.abs().max(s * du).max(1e-300);
            if (dv - s * du).abs() > CONTINUITY_RTOL * scale.max(1.0) {
                return Err(Error::InvalidPhi(format!(
                    "segment {i}: knot values rise by {dv} but slope*width is {}",
                    s * du
                )));
            }
        }
        let mut f = PhiFunction {
            knots,
            inv_slopes: slopes.iter().map(|s| 1.0 / s).collect(),
            slopes,
            tail_lo,
            tail_hi,
            inv_tail_lo: 1.0 / tail_lo,
            inv_tail_hi: 1.0 / tail_hi,
            provenance: Provenance::Loglog,
            extent: Extent::Complete,
        };
        f.canonicalize();
        Ok(f)
    }

    /// Build from knots alone; segment slopes are the chord slopes.
    pub fn from_knots(knots: Vec<(f64, f64)>, tail_lo: f64, tail_hi: f64) -> Result<Self> {
        let slopes = knots
            .windows(2)
            .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0))
            .collect();
        Self::from_loglog(knots, slopes, tail_lo, tail_hi)
    }

    pub(crate) fn from_parts(
        knots: Vec<(f64, f64)>,
        slopes: Vec<f64>,
        tail_lo: f64,
        tail_hi: f64,
        provenance: Provenance,
        extent: Extent,
    ) -> Self {
        debug_assert_eq!(knots.len(), slopes.len() + 1);
        let mut f = PhiFunction {
            knots,
            inv_slopes: slopes.iter().map(|s| 1.0 / s).collect(),
            slopes,
            tail_lo,
            tail_hi,
            inv_tail_lo: 1.0 / tail_lo,
            inv_tail_hi: 1.0 / tail_hi,
            provenance,
            extent,
        };
        f.canonicalize();
        f
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn with_extent(mut self, extent: Extent) -> Self {
        self.extent = extent;
        self
    }

    /// Merge adjacent segments with equal slopes, including tails.
    fn canonicalize(&mut self) {
        // (knot, outgoing slope); the last knot's outgoing slope is the upper tail
        let mut entries: Vec<((f64, f64), (f64, f64))> = Vec::with_capacity(self.knots.len());
        for (i, &k) in self.knots.iter().enumerate() {
            let out = match self.slopes.get(i) {
                Some(&s) => (s, self.inv_slopes[i]),
                None => (self.tail_hi, self.inv_tail_hi),
            };
            if let Some(last) = entries.last_mut() {
                let pu = last.0 .0;
                if (k.0 - pu).abs() <= KNOT_MERGE_RTOL * pu.abs().max(k.0.abs()).max(1.0) {
                    last.1 = out;
                    continue;
                }
            }
            entries.push((k, out));
        }
        let mut knots = Vec::with_capacity(entries.len());
        let mut outs = Vec::with_capacity(entries.len());
        let mut incoming = self.tail_lo;
        for &(k, out) in &entries {
            if !close(incoming, out.0, SLOPE_MERGE_RTOL) {
                knots.push(k);
                outs.push(out);
            }
            incoming = out.0;
        }
        if knots.is_empty() {
            knots.push(entries[0].0);
            outs.push((self.tail_hi, self.inv_tail_hi));
        }
        outs.pop();
        self.knots = knots;
        self.slopes = outs.iter().map(|o| o.0).collect();
        self.inv_slopes = outs.iter().map(|o| o.1).collect();
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    pub fn slopes(&self) -> &[f64] {
        &self.slopes
    }

    pub fn tail_lo(&self) -> f64 {
        self.tail_lo
    }

    pub fn tail_hi(&self) -> f64 {
        self.tail_hi
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn extent(&self) -> Extent {
        self.extent
    }

    /// Knot span `[u_first, u_last]`.
    pub fn span(&self) -> (f64, f64) {
        (self.knots[0].0, self.knots[self.knots.len() - 1].0)
    }

    /// All pieces of the graph from `u = -inf` to `u = +inf`.
    pub fn segments(&self) -> Vec<Segment> {
        let n = self.knots.len();
        let mut out = Vec::with_capacity(n + 1);
        let (u0, v0) = self.knots[0];
        out.push(Segment {
            u0: f64::NEG_INFINITY,
            u1: u0,
            slope: self.tail_lo,
            anchor_u: u0,
            anchor_v: v0,
        });
        for i in 0..n - 1 {
            let (ua, va) = self.knots[i];
            out.push(Segment {
                u0: ua,
                u1: self.knots[i + 1].0,
                slope: self.slopes[i],
                anchor_u: ua,
                anchor_v: va,
            });
        }
        let (un, vn) = self.knots[n - 1];
        out.push(Segment {
            u0: un,
            u1: f64::INFINITY,
            slope: self.tail_hi,
            anchor_u: un,
            anchor_v: vn,
        });
        out
    }

    /// Index of the piece containing `u`; 0 is the lower tail, `n` the upper.
    fn piece(&self, u: f64) -> usize {
        // number of knots with knot.u <= u
        self.knots.partition_point(|k| k.0 <= u)
    }

    /// `ln F(e^u)`.
    pub fn log_eval(&self, u: f64) -> f64 {
        if u == f64::NEG_INFINITY {
            return f64::NEG_INFINITY;
        }
        if u == f64::INFINITY {
            return f64::INFINITY;
        }
        let i = self.piece(u);
        if i == 0 {
            let (u0, v0) = self.knots[0];
            v0 + self.tail_lo * (u - u0)
        } else if i == self.knots.len() {
            let (un, vn) = self.knots[i - 1];
            vn + self.tail_hi * (u - un)
        } else {
            let (ua, va) = self.knots[i - 1];
            va + self.slopes[i - 1] * (u - ua)
        }
    }

    /// `ln F^{-1}(e^v)`.
    pub fn log_inverse_eval(&self, v: f64) -> f64 {
        if v.is_infinite() {
            return v;
        }
        let i = self.knots.partition_point(|k| k.1 <= v);
        if i == 0 {
            let (u0, v0) = self.knots[0];
            u0 + (v - v0) / self.tail_lo
        } else if i == self.knots.len() {
            let (un, vn) = self.knots[i - 1];
            un + (v - vn) / self.tail_hi
        } else {
            let (ua, va) = self.knots[i - 1];
            ua + (v - va) / self.slopes[i - 1]
        }
    }

    /// Log-log slope at `u` (right-continuous at knots).
    pub fn slope_at(&self, u: f64) -> f64 {
        let i = self.piece(u);
        if i == 0 {
            self.tail_lo
        } else if i == self.knots.len() {
            self.tail_hi
        } else {
            self.slopes[i - 1]
        }
    }

    /// `F(t)`, with `F(0) = 0`.
    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        self.log_eval(t.ln()).exp()
    }

    /// `F^{-1}(y)`.
    pub fn eval_inverse(&self, y: f64) -> f64 {
        if y <= 0.0 {
            return 0.0;
        }
        self.log_inverse_eval(y.ln()).exp()
    }

    /// `F̃(t) = 1/F(1/t)`.
    pub fn eval_tilde(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        (-self.log_eval(-t.ln())).exp()
    }

    /// Smallest slope anywhere on the graph, tails included.
    pub fn min_slope(&self) -> f64 {
        self.slopes
            .iter()
            .copied()
            .fold(self.tail_lo.min(self.tail_hi), f64::min)
    }

    pub fn max_slope(&self) -> f64 {
        self.slopes
            .iter()
            .copied()
            .fold(self.tail_lo.max(self.tail_hi), f64::max)
    }

    /// Reflection of the graph across `v = u`.
    pub fn inverse(&self) -> PhiFunction {
        let extent = match self.extent {
            Extent::Declared(a) => Extent::Declared(Asymptotics {
                lo: a.lo.reciprocal(),
                hi: a.hi.reciprocal(),
                exact: a.exact,
            }),
            e => e,
        };
        PhiFunction {
            knots: self.knots.iter().map(|&(u, v)| (v, u)).collect(),
            slopes: self.inv_slopes.clone(),
            tail_lo: self.inv_tail_lo,
            tail_hi: self.inv_tail_hi,
            inv_slopes: self.slopes.clone(),
            inv_tail_lo: self.tail_lo,
            inv_tail_hi: self.tail_hi,
            provenance: Provenance::Inverse,
            extent,
        }
    }

    /// `F̃`: the point map `(u, v) -> (-u, -v)`.
    pub fn tilde(&self) -> PhiFunction {
        let extent = match self.extent {
            Extent::Declared(a) => Extent::Declared(Asymptotics {
                lo: a.hi,
                hi: a.lo,
                exact: a.exact,
            }),
            e => e,
        };
        PhiFunction {
            knots: self.knots.iter().rev().map(|&(u, v)| (-u, -v)).collect(),
            slopes: self.slopes.iter().rev().copied().collect(),
            tail_lo: self.tail_hi,
            tail_hi: self.tail_lo,
            inv_slopes: self.inv_slopes.iter().rev().copied().collect(),
            inv_tail_lo: self.inv_tail_hi,
            inv_tail_hi: self.inv_tail_lo,
            provenance: Provenance::Tilde,
            extent,
        }
    }

    /// `self ∘ inner`, exact in log-log coordinates.
    pub fn compose(&self, inner: &PhiFunction) -> PhiFunction {
        let mut us: Vec<f64> = inner.knots.iter().map(|k| k.0).collect();
        us.extend(self.knots.iter().map(|k| inner.log_inverse_eval(k.0)));
        us.sort_by(|a, b| a.partial_cmp(b).unwrap());
        us.dedup_by(|a, b| (*a - *b).abs() <= KNOT_MERGE_RTOL * a.abs().max(b.abs()).max(1.0));
        let knots: Vec<(f64, f64)> = us
            .iter()
            .map(|&u| (u, self.log_eval(inner.log_eval(u))))
            .collect();
        let slopes = us
            .windows(2)
            .map(|w| {
                let m = 0.5 * (w[0] + w[1]);
                self.slope_at(inner.log_eval(m)) * inner.slope_at(m)
            })
            .collect();
        let extent = compose_extent(self, inner);
        PhiFunction::from_parts(
            knots,
            slopes,
            self.tail_lo * inner.tail_lo,
            self.tail_hi * inner.tail_hi,
            Provenance::Compose,
            extent,
        )
    }

    /// `G(t) = e^dv F(t)`.
    pub fn shift_v(&self, dv: f64) -> PhiFunction {
        let mut g = self.clone();
        for k in &mut g.knots {
            k.1 += dv;
        }
        g
    }

    /// `G(t) = F(e^du t)`.
    pub fn shift_u(&self, du: f64) -> PhiFunction {
        let mut g = self.clone();
        for k in &mut g.knots {
            k.0 -= du;
        }
        g
    }

    /// Matuszewska–Orlicz indices.
    ///
    /// For a complete representation the indices are the extreme tail
    /// slopes: interior deviations are finite and are absorbed by the
    /// constant in the definition.
    pub fn mo_indices(&self) -> MatuszewskaIndices {
        match self.extent {
            Extent::Complete => {
                let p = self.tail_lo.min(self.tail_hi);
                let q = self.tail_lo.max(self.tail_hi);
                MatuszewskaIndices {
                    p_m: p,
                    q_m: q,
                    p_bracket: (p, p),
                    q_bracket: (q, q),
                    method: IndexMethod::ExactFromSlopes,
                    window_curve: None,
                }
            }
            Extent::Declared(a) => {
                let p_lo = a.lo.min.min(a.hi.min);
                let q_hi = a.lo.max.max(a.hi.max);
                let (p_bracket, q_bracket) = if a.exact {
                    ((p_lo, p_lo), (q_hi, q_hi))
                } else {
                    // only product bounds are known
                    ((p_lo, q_hi), (p_lo, q_hi))
                };
                MatuszewskaIndices {
                    p_m: p_bracket.0,
                    q_m: q_bracket.1,
                    p_bracket,
                    q_bracket,
                    method: IndexMethod::Declared,
                    window_curve: Some(self.window_curve()),
                }
            }
            Extent::Window => {
                let curve = self.window_curve();
                let h_star = self.longest_segment();
                let (inf_h, sup_h) = if h_star > 0.0 {
                    self.window_extremes(h_star)
                } else {
                    (self.tail_lo.min(self.tail_hi), self.tail_lo.max(self.tail_hi))
                };
                let smin = self.slopes.iter().copied().fold(f64::INFINITY, f64::min);
                let smax = self.slopes.iter().copied().fold(0.0, f64::max);
                let smin = if smin.is_finite() { smin } else { inf_h };
                let smax = if smax > 0.0 { smax } else { sup_h };
                MatuszewskaIndices {
                    p_m: inf_h,
                    q_m: sup_h,
                    p_bracket: (smin.min(inf_h), inf_h),
                    q_bracket: (sup_h, smax.max(sup_h)),
                    method: IndexMethod::WindowScan,
                    window_curve: Some(curve),
                }
            }
        }
    }

    fn longest_segment(&self) -> f64 {
        self.knots
            .windows(2)
            .map(|w| w[1].0 - w[0].0)
            .fold(0.0, f64::max)
    }

    /// Infimum and supremum of the mean slope over windows of length `h`
    /// lying inside the knot span. Falls back to the tails when the span is
    /// shorter than `h`.
    pub fn window_extremes(&self, h: f64) -> (f64, f64) {
        let (a, b) = self.span();
        if b - a < h {
            let lo = self.tail_lo.min(self.tail_hi);
            let hi = self.tail_lo.max(self.tail_hi);
            return (lo, hi);
        }
        let mut inf = f64::INFINITY;
        let mut sup = f64::NEG_INFINITY;
        let mut visit = |u: f64| {
            if u < a || u + h > b {
                return;
            }
            let m = (self.log_eval(u + h) - self.log_eval(u)) / h;
            inf = inf.min(m);
            sup = sup.max(m);
        };
        // the chord increment is piecewise linear in u with breaks at knots
        // and knots shifted by -h, so extremes occur there
        for &(u, _) in &self.knots {
            visit(u);
            visit(u - h);
        }
        visit(b - h);
        (inf, sup)
    }

    /// Window curve over a geometric grid of lengths up to the knot span.
    pub fn window_curve(&self) -> Vec<WindowSample> {
        let (a, b) = self.span();
        let span = b - a;
        if span <= 0.0 {
            return vec![];
        }
        let shortest = self
            .knots
            .windows(2)
            .map(|w| w[1].0 - w[0].0)
            .fold(f64::INFINITY, f64::min);
        let mut h = shortest.max(span * 1e-6);
        let mut out = Vec::new();
        while h <= span * (1.0 + 1e-12) {
            let (inf, sup) = self.window_extremes(h);
            out.push(WindowSample {
                h,
                inf_mean_slope: inf,
                sup_mean_slope: sup,
            });
            h *= 2.0;
        }
        out
    }

    /// Dilatory iff `p_m > 0`.
    pub fn is_dilatory(&self) -> Decision {
        let idx = self.mo_indices();
        let (lo, hi) = idx.p_bracket;
        if lo > 0.0 {
            Decision::Yes
        } else if hi <= 0.0 {
            Decision::No
        } else {
            Decision::Indeterminate { lo, hi }
        }
    }

    /// Δ₂ iff `q_m < ∞`.
    pub fn satisfies_delta2(&self) -> Decision {
        let idx = self.mo_indices();
        let (lo, hi) = idx.q_bracket;
        if hi.is_finite() {
            Decision::Yes
        } else if lo.is_infinite() {
            Decision::No
        } else {
            Decision::Indeterminate { lo, hi }
        }
    }

    /// Smallest `c >= 1` with `F(t/c) <= G(t) <= F(ct)` for all `t`, or
    /// `None` when no finite constant exists.
    pub fn equivalence_constant(&self, other: &PhiFunction) -> Option<f64> {
        // D(u) = ln F^{-1}(G(e^u)) - u must be bounded; ln c = sup |D|
        let h = self.inverse().compose(other);
        if !close(h.tail_lo, 1.0, 1e-12) || !close(h.tail_hi, 1.0, 1e-12) {
            return None;
        }
        let worst = h
            .knots
            .iter()
            .map(|&(u, v)| (v - u).abs())
            .fold(0.0, f64::max);
        Some(worst.exp())
    }

    pub fn equivalent(&self, other: &PhiFunction, c_max: f64) -> bool {
        matches!(self.equivalence_constant(other), Some(c) if c <= c_max * (1.0 + 1e-12))
    }

    /// Complementary function normalised so that `F^{-1}(t) F*^{-1}(t) = t`.
    pub fn complementary(&self) -> Result<PhiFunction> {
        let pieces = std::iter::once(self.tail_lo)
            .chain(self.slopes.iter().copied())
            .chain(std::iter::once(self.tail_hi));
        for (i, s) in pieces.enumerate() {
            if s <= 1.0 {
                return Err(Error::NotNFunction {
                    segment: i,
                    slope: s,
                });
            }
        }
        let inv = self.inverse();
        let conj = |s: f64| 1.0 - s;
        let knots = inv.knots.iter().map(|&(u, v)| (u, u - v)).collect();
        let slopes = inv.slopes.iter().map(|&s| conj(s)).collect();
        let extent = match self.extent {
            Extent::Declared(a) => {
                let dual = |r: EndRange| EndRange {
                    min: holder(r.max),
                    max: holder(r.min),
                };
                Extent::Declared(Asymptotics {
                    lo: dual(a.lo),
                    hi: dual(a.hi),
                    exact: a.exact,
                })
            }
            e => e,
        };
        let star_inv = PhiFunction::from_parts(
            knots,
            slopes,
            conj(inv.tail_lo),
            conj(inv.tail_hi),
            Provenance::Complementary,
            Extent::Complete,
        );
        Ok(star_inv
            .inverse()
            .with_provenance(Provenance::Complementary)
            .with_extent(extent))
    }
}

/// Hölder conjugate `s/(s-1)`, with `1 -> inf` and `inf -> 1`.
fn holder(s: f64) -> f64 {
    if s.is_infinite() {
        1.0
    } else if s <= 1.0 {
        f64::INFINITY
    } else {
        s / (s - 1.0)
    }
}

fn end_ranges(f: &PhiFunction) -> (EndRange, EndRange, bool) {
    match f.extent {
        Extent::Declared(a) => (a.lo, a.hi, a.exact),
        _ => (EndRange::point(f.tail_lo), EndRange::point(f.tail_hi), true),
    }
}

fn compose_extent(outer: &PhiFunction, inner: &PhiFunction) -> Extent {
    match (outer.extent, inner.extent) {
        (Extent::Complete, Extent::Complete) => Extent::Complete,
        (Extent::Window, _) | (_, Extent::Window) => Extent::Window,
        _ => {
            let (olo, ohi, oex) = end_ranges(outer);
            let (ilo, ihi, iex) = end_ranges(inner);
            let mul = |a: EndRange, b: EndRange| EndRange {
                min: a.min * b.min,
                max: a.max * b.max,
            };
            let exact = oex
                && iex
                && (olo.is_point() || ilo.is_point())
                && (ohi.is_point() || ihi.is_point());
            Extent::Declared(Asymptotics {
                lo: mul(olo, ilo),
                hi: mul(ohi, ihi),
                exact,
            })
        }
    }
}
