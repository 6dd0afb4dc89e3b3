//! String forms accepted on the command line.

use crate::error::{config, CliError};
use hadamard_core::closed_form::{ClosedFormTag, TrigTerm};
use hadamard_core::{FracOrder, LogGrid};

fn number(s: &str, what: &str) -> Result<f64, CliError> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| CliError::Config(format!("{what}: cannot parse '{s}' as a number")))
}

/// `a:T` with `0 < a < T`.
pub fn interval(s: &str) -> Result<(f64, f64), CliError> {
    let (a, t) = s
        .split_once(':')
        .ok_or_else(|| CliError::Config(format!("grid must look like a:T, got '{s}'")))?;
    let (a, t) = (number(a, "grid")?, number(t, "grid")?);
    if !(a > 0.0 && t > a && t.is_finite()) {
        return Err(CliError::Config(format!("grid needs 0 < a < T, got {a}:{t}")));
    }
    Ok((a, t))
}

pub fn order(alpha: f64) -> Result<FracOrder, CliError> {
    FracOrder::new(alpha).map_err(config)
}

/// Uniform in `u` when `grading == 1`, graded otherwise.
pub fn log_grid(a: f64, t_end: f64, n: usize, grading: f64) -> Result<LogGrid, CliError> {
    if grading == 1.0 {
        LogGrid::uniform(a, t_end, n)
    } else {
        LogGrid::graded(a, t_end, n, grading)
    }
    .map_err(config)
}

const INPUT_FORMS: &str = "log_power:B, constant:C, log_poly:c0,c1,..., log_trig:freq,amp,phase;...";

/// Closed-form operand from its short form.
pub fn input(s: &str) -> Result<ClosedFormTag, CliError> {
    let bad = || CliError::Config(format!("unknown input '{s}'; expected one of {INPUT_FORMS}"));
    let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
    let list = |r: &str| r.split(',').map(|x| number(x, "input")).collect::<Result<Vec<_>, _>>();
    let tag = match kind.trim() {
        "log_power" => ClosedFormTag::LogPower { beta: number(rest, "input")? },
        "constant" => ClosedFormTag::Constant { c: number(rest, "input")? },
        "log_poly" => ClosedFormTag::LogPolynomial { coeffs: list(rest)? },
        "log_trig" => ClosedFormTag::LogTrig {
            terms: rest
                .split(';')
                .map(|term| match list(term)?.as_slice() {
                    &[freq, amp, phase] => Ok(TrigTerm { freq, amp, phase }),
                    _ => Err(CliError::Config(format!("log_trig term '{term}' needs freq,amp,phase"))),
                })
                .collect::<Result<_, _>>()?,
        },
        _ => return Err(bad()),
    };
    tag.validate().map_err(config)?;
    Ok(tag)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_inputs() {
        assert_eq!(input("log_power:2").unwrap(), ClosedFormTag::LogPower { beta: 2.0 });
        assert_eq!(input("log_poly:1,0,-1").unwrap(), ClosedFormTag::LogPolynomial { coeffs: vec![1.0, 0.0, -1.0] });
        let ClosedFormTag::LogTrig { terms } = input("log_trig:1,2,0;3,0.5,1").unwrap() else { panic!() };
        assert_eq!(terms.len(), 2);
        assert_eq!(terms[1].amp, 0.5);
        for bad in ["power:2", "log_power", "log_power:x", "log_trig:1,2", "log_power:-1"] {
            assert!(input(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn parses_intervals() {
        assert_eq!(interval("1:2.5").unwrap(), (1.0, 2.5));
        assert!(interval("2:1").is_err());
        assert!(interval("0:1").is_err());
        assert!(interval("1-2").is_err());
    }
}
