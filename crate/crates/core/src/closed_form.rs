//! Analytic values of the Hadamard operators on a catalog of operands.
//!
//! With `u = log(t/a)`:
//!
//! * `D^α u^{β-1} = Γ(β)/Γ(β-α) u^{β-α-1}` (zero when `β = α`),
//! * `I^α u^{β-1} = Γ(β)/Γ(β+α) u^{β+α-1}`,
//! * `D^α f = f(a) u^{-α}/Γ(1-α) + D_*^α f`.
//!
//! Trigonometric-in-log operands have no elementary fractional derivative;
//! their reference values come from adaptive quadrature of the defining
//! integral after a substitution that removes the kernel singularity, and
//! are memoised in a process-wide cache.

use crate::error::{Error, Result};
use crate::gamma::{gamma_unchecked, recip_gamma};
use crate::grid::{FracOrder, GridFunction, LogGrid};
use crate::quadrature;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

/// `amp · sin(freq · u + phase)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrigTerm {
    pub freq: f64,
    pub amp: f64,
    pub phase: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClosedFormTag {
    /// `u^{β-1}`
    LogPower { beta: f64 },
    Constant { c: f64 },
    /// `Σ c_k u^k`
    LogPolynomial { coeffs: Vec<f64> },
    /// `Σ amp_m sin(freq_m u + phase_m)`
    LogTrig { terms: Vec<TrigTerm> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Operator {
    /// Riemann–Hadamard derivative `D^α`.
    Hadamard,
    /// Caputo–Hadamard derivative `D_*^α`.
    CaputoHadamard,
    /// Hadamard integral `I^α`.
    Integral,
}

const TRIG_TOL: f64 = 1e-10;

impl ClosedFormTag {
    pub fn validate(&self) -> Result<()> {
        fn finite(mut xs: impl Iterator<Item = f64>) -> bool {
            xs.all(f64::is_finite)
        }
        match self {
            ClosedFormTag::LogPower { beta } if !(*beta > 0.0 && beta.is_finite()) => {
                Err(Error::Unsupported(format!("log_power needs beta > 0, got {beta}")))
            }
            ClosedFormTag::Constant { c } if !c.is_finite() => {
                Err(Error::Unsupported("constant must be finite".into()))
            }
            ClosedFormTag::LogPolynomial { coeffs } if coeffs.is_empty() || !finite(coeffs.iter().copied()) => {
                Err(Error::Unsupported("log_polynomial needs finite, non-empty coefficients".into()))
            }
            ClosedFormTag::LogTrig { terms }
                if terms.is_empty() || !finite(terms.iter().flat_map(|t| [t.freq, t.amp, t.phase])) =>
            {
                Err(Error::Unsupported("log_trig needs finite, non-empty terms".into()))
            }
            _ => Ok(()),
        }
    }

    /// Value at log coordinate `u`.
    pub fn eval_log(&self, u: f64) -> f64 {
        match self {
            ClosedFormTag::LogPower { beta } => u.powf(beta - 1.0),
            ClosedFormTag::Constant { c } => *c,
            ClosedFormTag::LogPolynomial { coeffs } => coeffs.iter().rev().fold(0.0, |acc, c| acc * u + c),
            ClosedFormTag::LogTrig { terms } => terms.iter().map(|t| t.amp * (t.freq * u + t.phase).sin()).sum(),
        }
    }

    fn trig_slope(terms: &[TrigTerm], u: f64) -> f64 {
        terms.iter().map(|t| t.amp * t.freq * (t.freq * u + t.phase).cos()).sum()
    }

    /// Sample on a grid; `log_power` with `β < 1` is flagged singular.
    pub fn sample(&self, grid: Arc<LogGrid>) -> Result<GridFunction> {
        self.validate()?;
        match self {
            ClosedFormTag::LogPower { beta } => GridFunction::log_power(grid, 1.0, beta - 1.0),
            _ => GridFunction::from_log_fn(grid, |u| self.eval_log(u)),
        }
    }
}

/// Analytic value of `which` applied to `tag`, at `t ∈ (a, ∞)`.
pub fn closed_form_deriv(tag: &ClosedFormTag, alpha: FracOrder, a: f64, t: f64, which: Operator) -> Result<f64> {
    tag.validate()?;
    if !(t > a && a > 0.0) {
        return Err(Error::Domain {
            function: "closed_form_deriv",
            value: t,
        });
    }
    let al = alpha.value();
    let u = (t / a).ln();
    match tag {
        ClosedFormTag::LogPower { beta } => {
            let beta = *beta;
            match which {
                Operator::Integral => Ok(gamma_unchecked(beta) * recip_gamma(beta + al) * u.powf(beta + al - 1.0)),
                Operator::Hadamard => {
                    if (beta - al).abs() <= 1e-14 {
                        Ok(0.0)
                    } else if beta < al {
                        Err(Error::Unsupported(format!(
                            "D^alpha of log_power requires beta >= alpha (beta = {beta}, alpha = {al})"
                        )))
                    } else {
                        Ok(gamma_unchecked(beta) * recip_gamma(beta - al) * u.powf(beta - al - 1.0))
                    }
                }
                Operator::CaputoHadamard => {
                    if beta == 1.0 {
                        Ok(0.0)
                    } else if beta < 1.0 {
                        Err(Error::Unsupported("Caputo–Hadamard of a function singular at t = a".into()))
                    } else {
                        Ok(gamma_unchecked(beta) * recip_gamma(beta - al) * u.powf(beta - al - 1.0))
                    }
                }
            }
        }
        ClosedFormTag::Constant { c } => Ok(match which {
            Operator::Integral => c * u.powf(al) / gamma_unchecked(1.0 + al),
            Operator::Hadamard => c * u.powf(-al) / gamma_unchecked(1.0 - al),
            Operator::CaputoHadamard => 0.0,
        }),
        ClosedFormTag::LogPolynomial { coeffs } => {
            // ratio_k = Γ(k+1)/Γ(k+1∓α) by recurrence
            let shift = if which == Operator::Integral { al } else { -al };
            let mut ratio = recip_gamma(1.0 + shift);
            let mut total = 0.0;
            for (k, &c) in coeffs.iter().enumerate() {
                if k > 0 {
                    ratio *= k as f64 / (k as f64 + shift);
                }
                if k == 0 && which == Operator::CaputoHadamard {
                    continue;
                }
                total += c * ratio * u.powf(k as f64 + shift);
            }
            Ok(total)
        }
        ClosedFormTag::LogTrig { terms } => trig_reference(terms, al, u, which),
    }
}

type CacheKey = Vec<u64>;

fn cache() -> &'static RwLock<HashMap<CacheKey, f64>> {
    static CACHE: OnceLock<RwLock<HashMap<CacheKey, f64>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

fn trig_reference(terms: &[TrigTerm], al: f64, u: f64, which: Operator) -> Result<f64> {
    let mut key: CacheKey = vec![which as u64, al.to_bits(), u.to_bits()];
    key.extend(terms.iter().flat_map(|t| [t.freq.to_bits(), t.amp.to_bits(), t.phase.to_bits()]));
    if let Some(v) = cache().read().expect("oracle cache poisoned").get(&key) {
        return Ok(*v);
    }
    let g = |s: f64| terms.iter().map(|t| t.amp * (t.freq * s + t.phase).sin()).sum::<f64>();
    let value = match which {
        // σ = w^{1/α}: (1/Γ(α)) ∫ σ^{α-1} g(u-σ) dσ = (1/Γ(α+1)) ∫_0^{u^α} g(u - w^{1/α}) dw
        Operator::Integral => {
            let p = 1.0 / al;
            quadrature::integrate(|w| g(u - w.powf(p)), 0.0, u.powf(al), TRIG_TOL, TRIG_TOL)? / gamma_unchecked(1.0 + al)
        }
        Operator::CaputoHadamard | Operator::Hadamard => {
            let p = 1.0 / (1.0 - al);
            let caputo = quadrature::integrate(
                |w| ClosedFormTag::trig_slope(terms, u - w.powf(p)),
                0.0,
                u.powf(1.0 - al),
                TRIG_TOL,
                TRIG_TOL,
            )? / gamma_unchecked(2.0 - al);
            if which == Operator::Hadamard {
                caputo + g(0.0) * u.powf(-al) / gamma_unchecked(1.0 - al)
            } else {
                caputo
            }
        }
    };
    cache().write().expect("oracle cache poisoned").insert(key, value);
    Ok(value)
}
