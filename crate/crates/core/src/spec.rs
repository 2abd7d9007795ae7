//! JSON φ-spec format.

use serde::{Deserialize, Serialize};

use crate::counterexample::{build_theorem41_phi, build_theorem42_phi, CounterexampleSpec, Schedule, Theorem42Spec};
use crate::error::{Error, Result};
use crate::phi::{Extent, PhiFunction};

fn default_schedule() -> Schedule {
    Schedule::Pow2
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PhiSpec {
    Power {
        p: f64,
    },
    Loglog {
        knots: Vec<(f64, f64)>,
        slopes: Vec<f64>,
        tail_lo: f64,
        tail_hi: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        extent: Option<Extent>,
    },
    Compose {
        outer: Box<PhiSpec>,
        inner: Box<PhiSpec>,
    },
    Inverse {
        of: Box<PhiSpec>,
    },
    Tilde {
        of: Box<PhiSpec>,
    },
    Counterexample {
        p: f64,
        q: f64,
        blocks: usize,
        #[serde(default = "default_schedule")]
        schedule: Schedule,
    },
    Theorem42 {
        blocks: usize,
    },
}

impl PhiSpec {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| {
            Error::Parse(format!("phi-spec at line {} column {}: {e}", e.line(), e.column()))
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("phi-spec serialises")
    }

    pub fn build(&self) -> Result<PhiFunction> {
        match self {
            PhiSpec::Power { p } => PhiFunction::power(*p),
            PhiSpec::Loglog { knots, slopes, tail_lo, tail_hi, extent } => {
                let f = PhiFunction::from_loglog(knots.clone(), slopes.clone(), *tail_lo, *tail_hi)?;
                Ok(match extent {
                    Some(e) => f.with_extent(*e),
                    None => f,
                })
            }
            PhiSpec::Compose { outer, inner } => Ok(outer.build()?.compose(&inner.build()?)),
            PhiSpec::Inverse { of } => Ok(of.build()?.inverse()),
            PhiSpec::Tilde { of } => Ok(of.build()?.tilde()),
            PhiSpec::Counterexample { p, q, blocks, schedule } => {
                build_theorem41_phi(&CounterexampleSpec::new(*p, *q, *blocks, schedule)?)
            }
            PhiSpec::Theorem42 { blocks } => build_theorem42_phi(&Theorem42Spec::new(*blocks)?),
        }
    }

    /// The loglog spec of a built function. Provenance is not recorded.
    pub fn of(f: &PhiFunction) -> Self {
        PhiSpec::Loglog {
            knots: f.knots().to_vec(),
            slopes: f.slopes().to_vec(),
            tail_lo: f.tail_lo(),
            tail_hi: f.tail_hi(),
            extent: match f.extent() {
                Extent::Complete => None,
                e => Some(e),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        let s = PhiSpec::from_json(r#"{"kind":"compose","outer":{"kind":"power","p":2},"inner":{"kind":"tilde","of":{"kind":"power","p":3}}}"#).unwrap();
        let f = s.build().unwrap();
        assert_eq!((f.tail_lo(), f.tail_hi()), (6.0, 6.0));
        let c = PhiSpec::from_json(r#"{"kind":"counterexample","p":1,"q":2,"blocks":2,"schedule":"pow2"}"#).unwrap();
        let g = c.build().unwrap();
        let back = PhiSpec::from_json(&PhiSpec::of(&g).to_json()).unwrap().build().unwrap();
        assert_eq!(back.knots(), g.knots());
        assert_eq!(back.mo_indices().p_m, 1.0);
        let err = PhiSpec::from_json("{\"kind\":\"power\",\n\"p\":}").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }
}
