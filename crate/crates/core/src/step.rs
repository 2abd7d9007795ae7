//! Nonnegative simple functions on `[0, ∞)`, their non-increasing
//! rearrangements and the dilation operators `d_a f(x) = f(ax)`.

use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Finitely many constant cells laid end to end from 0, then zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StepJson", into = "StepJson")]
pub struct StepFunction {
    cells: Vec<(f64, f64)>,
}

#[derive(Serialize, Deserialize)]
struct StepJson {
    cells: Vec<(f64, f64)>,
}

impl TryFrom<StepJson> for StepFunction {
    type Error = Error;
    fn try_from(j: StepJson) -> Result<Self> {
        StepFunction::new(j.cells)
    }
}

impl From<StepFunction> for StepJson {
    fn from(f: StepFunction) -> Self {
        StepJson { cells: f.cells }
    }
}

/// Scale of a dilation, `a > 0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct DilationFactor(f64);

impl DilationFactor {
    pub fn new(a: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "dilation factor must be finite and > 0, got {a}"
            )));
        }
        Ok(DilationFactor(a))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl StepFunction {
    /// `cells` are `(length, value)` pairs starting at 0.
    pub fn new(cells: Vec<(f64, f64)>) -> Result<Self> {
        for (i, &(len, val)) in cells.iter().enumerate() {
            if !(len > 0.0) || !len.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "cell {i}: length must be finite and > 0, got {len}"
                )));
            }
            if !(val >= 0.0) || !val.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "cell {i}: value must be finite and >= 0, got {val}"
                )));
            }
        }
        Ok(StepFunction { cells })
    }

    pub fn zero() -> Self {
        StepFunction { cells: vec![] }
    }

    /// `χ_[0,s)`.
    pub fn indicator(s: f64) -> Result<Self> {
        Self::new(vec![(s, 1.0)])
    }

    /// Build from `(start, end, value)` intervals; gaps are zero and
    /// overlaps add.
    pub fn from_intervals(intervals: &[(f64, f64, f64)]) -> Result<Self> {
        let mut parts = Vec::with_capacity(intervals.len());
        for &(a, b, v) in intervals {
            if !(a >= 0.0) || !(b > a) || !b.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "interval [{a}, {b}) is not a valid subset of [0, inf)"
                )));
            }
            let mut cells = Vec::new();
            if a > 0.0 {
                cells.push((a, 0.0));
            }
            cells.push((b - a, v));
            parts.push(Self::new(cells)?);
        }
        if parts.is_empty() {
            return Ok(Self::zero());
        }
        pointwise_power_sum(&parts, 1.0)
    }

    /// Two-column CSV (`length,value`); a non-numeric first row is a header.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut cells = Vec::new();
        for (row, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| Error::Parse(format!("csv row {}: {e}", row + 1)))?;
            if rec.len() != 2 {
                return Err(Error::Parse(format!(
                    "csv row {}: expected 2 columns, got {}",
                    row + 1,
                    rec.len()
                )));
            }
            let parsed = (rec[0].parse::<f64>(), rec[1].parse::<f64>());
            match parsed {
                (Ok(l), Ok(v)) => cells.push((l, v)),
                _ if row == 0 => continue,
                _ => {
                    return Err(Error::Parse(format!(
                        "csv row {}: non-numeric field",
                        row + 1
                    )))
                }
            }
        }
        Self::new(cells)
    }

    pub fn cells(&self) -> &[(f64, f64)] {
        &self.cells
    }

    pub fn is_zero(&self) -> bool {
        self.cells.iter().all(|c| c.1 == 0.0)
    }

    pub fn support_measure(&self) -> f64 {
        self.cells.iter().map(|c| c.0).sum()
    }

    /// Right endpoints of the cells.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut x = 0.0;
        self.cells
            .iter()
            .map(|c| {
                x += c.0;
                x
            })
            .collect()
    }

    pub fn value_at(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        let mut end = 0.0;
        for &(len, v) in &self.cells {
            end += len;
            if x < end {
                return v;
            }
        }
        0.0
    }

    /// Strictly decreasing positive values.
    pub fn is_sorted(&self) -> bool {
        self.cells.iter().all(|c| c.1 > 0.0) && self.cells.windows(2).all(|w| w[0].1 > w[1].1)
    }

    /// Non-increasing rearrangement `f*`: zero cells dropped, values sorted
    /// downwards, equal values merged.
    pub fn rearrange(&self) -> StepFunction {
        let mut cells: Vec<(f64, f64)> = self.cells.iter().copied().filter(|c| c.1 > 0.0).collect();
        cells.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
        let mut out: Vec<(f64, f64)> = Vec::with_capacity(cells.len());
        for (len, v) in cells {
            match out.last_mut() {
                Some(last) if last.1 == v => last.0 += len,
                _ => out.push((len, v)),
            }
        }
        StepFunction { cells: out }
    }

    /// `d_a f(x) = f(ax)`: every cell length divided by `a`.
    pub fn dilate(&self, a: DilationFactor) -> StepFunction {
        StepFunction {
            cells: self.cells.iter().map(|&(l, v)| (l / a.0, v)).collect(),
        }
    }

    pub fn scale(&self, alpha: f64) -> StepFunction {
        let alpha = alpha.abs();
        StepFunction {
            cells: self.cells.iter().map(|&(l, v)| (l, v * alpha)).collect(),
        }
    }

    /// `μ(f >= t)`.
    pub fn distribution(&self, t: f64) -> f64 {
        self.cells.iter().filter(|c| c.1 >= t).map(|c| c.0).sum()
    }

    pub fn to_log(&self) -> LogStep {
        LogStep {
            cells: self.cells.iter().map(|&(l, v)| (l.ln(), v.ln())).collect(),
        }
    }
}

/// `(Σ |f_i|^p)^{1/p}` on the common refinement of the cell partitions.
pub fn pointwise_power_sum(fs: &[StepFunction], p: f64) -> Result<StepFunction> {
    if fs.is_empty() {
        return Err(Error::Empty("pointwise_power_sum needs at least one function".into()));
    }
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::InvalidParameter(format!("exponent must be > 0, got {p}")));
    }
    if fs.len() == 1 {
        return Ok(fs[0].clone());
    }
    let bps: Vec<Vec<f64>> = fs.iter().map(|f| f.breakpoints()).collect();
    let mut grid: Vec<f64> = bps.iter().flatten().copied().collect();
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    grid.dedup();
    let mut cursors = vec![0usize; fs.len()];
    let mut cells = Vec::with_capacity(grid.len());
    let mut left = 0.0;
    for &right in &grid {
        let mut acc = 0.0;
        for (k, f) in fs.iter().enumerate() {
            while cursors[k] < bps[k].len() && bps[k][cursors[k]] <= left {
                cursors[k] += 1;
            }
            if cursors[k] < bps[k].len() {
                let v = f.cells[cursors[k]].1;
                acc += if p == 1.0 { v } else { v.powf(p) };
            }
        }
        let val = if p == 1.0 { acc } else { acc.powf(1.0 / p) };
        cells.push((right - left, val));
        left = right;
    }
    StepFunction::new(cells)
}

/// Step function stored as `(ln length, ln value)` pairs.
///
/// Used wherever lengths or values leave the range of `f64`, e.g. the
/// block witnesses whose breakpoints grow super-geometrically. A zero value
/// is `-inf`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogStep {
    cells: Vec<(f64, f64)>,
}

pub(crate) fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// `ln(e^hi - e^lo)` for `hi > lo`.
pub(crate) fn log_sub(hi: f64, lo: f64) -> f64 {
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (-(lo - hi).exp_m1()).ln()
}

impl LogStep {
    pub fn new(cells: Vec<(f64, f64)>) -> Result<Self> {
        for (i, &(ll, lv)) in cells.iter().enumerate() {
            if !ll.is_finite() || lv.is_nan() || lv == f64::INFINITY {
                return Err(Error::InvalidParameter(format!(
                    "log cell {i} ({ll}, {lv}) is not admissible"
                )));
            }
        }
        Ok(LogStep { cells })
    }

    pub fn cells(&self) -> &[(f64, f64)] {
        &self.cells
    }

    pub fn is_zero(&self) -> bool {
        self.cells.iter().all(|c| c.1 == f64::NEG_INFINITY)
    }

    pub fn rearrange(&self) -> LogStep {
        let mut cells: Vec<(f64, f64)> = self
            .cells
            .iter()
            .copied()
            .filter(|c| c.1 > f64::NEG_INFINITY)
            .collect();
        cells.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
        let mut out: Vec<(f64, f64)> = Vec::with_capacity(cells.len());
        for (ll, lv) in cells {
            match out.last_mut() {
                Some(last) if last.1 == lv => last.0 = log_add(last.0, ll),
                _ => out.push((ll, lv)),
            }
        }
        LogStep { cells: out }
    }

    pub fn dilate_log(&self, ln_a: f64) -> LogStep {
        LogStep {
            cells: self.cells.iter().map(|&(l, v)| (l - ln_a, v)).collect(),
        }
    }

    pub fn dilate(&self, a: DilationFactor) -> LogStep {
        self.dilate_log(a.0.ln())
    }

    pub fn scale_log(&self, ln_alpha: f64) -> LogStep {
        LogStep {
            cells: self.cells.iter().map(|&(l, v)| (l, v + ln_alpha)).collect(),
        }
    }

    /// `ln` of the right endpoints.
    pub fn log_breakpoints(&self) -> Vec<f64> {
        let mut x = f64::NEG_INFINITY;
        self.cells
            .iter()
            .map(|c| {
                x = log_add(x, c.0);
                x
            })
            .collect()
    }

    /// Linear form, if every length and value fits in `f64`.
    pub fn to_linear(&self) -> Option<StepFunction> {
        let cells: Vec<(f64, f64)> = self.cells.iter().map(|&(l, v)| (l.exp(), v.exp())).collect();
        if cells.iter().all(|c| c.0 > 0.0 && c.0.is_finite() && c.1.is_finite()) {
            StepFunction::new(cells).ok()
        } else {
            None
        }
    }
}

impl From<&StepFunction> for LogStep {
    fn from(f: &StepFunction) -> Self {
        f.to_log()
    }
}
