//! Distribution presets and the expression grammar that names them.
//!
//! ```text
//! dist := "point(" rat ")" | "bernoulli(" rat ")" | "binomial(" int "," rat ")"
//!       | "uniform{" rat ("," rat)* "}" | "uniform[" rat "," rat "]"
//!       | "poisson(" rat ")" | "geometric(" rat ")" | "moments[" rat ("," rat)* "]"
//! rat  := integer | integer "/" positive-integer
//! ```

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::kernel::binomial;
use crate::scalar::{format_rational, pow, Cursor, ExactScalar};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Distribution {
    Point(ExactScalar),
    Bernoulli(ExactScalar),
    Binomial { trials: usize, p: ExactScalar },
    /// Equal mass on each listed value (repeats count with multiplicity).
    UniformDiscrete(Vec<ExactScalar>),
    UniformContinuous { low: ExactScalar, high: ExactScalar },
    Poisson(ExactScalar),
    /// Number of trials up to and including the first success, on {1, 2, ...}.
    Geometric(ExactScalar),
    /// Raw moments `E[Y^0], E[Y^1], ...` supplied directly.
    Moments(Vec<ExactScalar>),
}

fn in_unit_interval(p: &ExactScalar) -> bool {
    !p.is_negative() && *p <= ExactScalar::one()
}

impl Distribution {
    /// Checks preset parameter domains.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidDistribution(msg));
        match self {
            Self::Point(_) => Ok(()),
            Self::Bernoulli(p) | Self::Binomial { p, .. } if !in_unit_interval(p) => {
                bad(format!("probability {} outside [0,1]", format_rational(p)))
            }
            Self::Bernoulli(_) | Self::Binomial { .. } => Ok(()),
            Self::UniformDiscrete(values) if values.is_empty() => bad("empty support".into()),
            Self::UniformDiscrete(_) => Ok(()),
            Self::UniformContinuous { low, high } if low >= high => bad(format!(
                "interval [{}, {}] has no positive width",
                format_rational(low),
                format_rational(high)
            )),
            Self::UniformContinuous { .. } => Ok(()),
            Self::Poisson(mean) if mean.is_negative() => {
                bad(format!("negative Poisson mean {}", format_rational(mean)))
            }
            Self::Poisson(_) => Ok(()),
            Self::Geometric(p) if !p.is_positive() || *p > ExactScalar::one() => {
                bad(format!("geometric success probability {} outside (0,1]", format_rational(p)))
            }
            Self::Geometric(_) => Ok(()),
            Self::Moments(values) if values.is_empty() => bad("empty moment sequence".into()),
            Self::Moments(values) if !values[0].is_one() => bad(format!(
                "moment sequence must start with E[Y^0] = 1, got {}",
                format_rational(&values[0])
            )),
            Self::Moments(_) => Ok(()),
        }
    }

    /// True for user-supplied moment sequences, whose existence as the moments
    /// of a real random variable (with a moment generating function) is not
    /// checked. Results computed from them are formal.
    pub fn is_formal(&self) -> bool {
        matches!(self, Self::Moments(_))
    }

    /// Highest moment order available, when finite.
    pub fn max_order(&self) -> Option<usize> {
        match self {
            Self::Moments(values) => Some(values.len() - 1),
            _ => None,
        }
    }

    /// Atoms and their masses, for presets with finite support.
    pub fn finite_support(&self) -> Option<Vec<(ExactScalar, ExactScalar)>> {
        match self {
            Self::Point(c) => Some(vec![(c.clone(), ExactScalar::one())]),
            Self::Bernoulli(p) => Some(vec![
                (ExactScalar::zero(), ExactScalar::one() - p),
                (ExactScalar::one(), p.clone()),
            ]),
            Self::Binomial { trials, p } => {
                let q = ExactScalar::one() - p;
                Some(
                    (0..=*trials)
                        .map(|k| {
                            let mass = binomial(*trials, k) * pow(p, k) * pow(&q, trials - k);
                            (ExactScalar::from_integer(k.into()), mass)
                        })
                        .collect(),
                )
            }
            Self::UniformDiscrete(values) => {
                let mass = ExactScalar::new(1.into(), values.len().into());
                Some(values.iter().map(|v| (v.clone(), mass.clone())).collect())
            }
            _ => None,
        }
    }

    pub fn parse(expr: &str) -> Result<Self> {
        let mut cursor = Cursor::new(expr);
        cursor.skip_ws();
        let dist = parse_dist(&mut cursor)?;
        cursor.skip_ws();
        cursor.expect_end()?;
        dist.validate()?;
        Ok(dist)
    }
}

impl std::str::FromStr for Distribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

fn rational_list(cursor: &mut Cursor<'_>, close: &str) -> Result<Vec<ExactScalar>> {
    let mut values = vec![cursor.rational()?];
    loop {
        cursor.skip_ws();
        if cursor.eat(",") {
            values.push(cursor.rational()?);
        } else {
            cursor.expect(close)?;
            return Ok(values);
        }
    }
}

fn single(cursor: &mut Cursor<'_>) -> Result<ExactScalar> {
    let value = cursor.rational()?;
    cursor.expect(")")?;
    Ok(value)
}

fn parse_dist(cursor: &mut Cursor<'_>) -> Result<Distribution> {
    let start = cursor.pos();
    if cursor.eat("point(") {
        Ok(Distribution::Point(single(cursor)?))
    } else if cursor.eat("bernoulli(") {
        Ok(Distribution::Bernoulli(single(cursor)?))
    } else if cursor.eat("binomial(") {
        let trials = cursor.natural()?;
        cursor.expect(",")?;
        let p = single(cursor)?;
        Ok(Distribution::Binomial { trials, p })
    } else if cursor.eat("uniform{") {
        Ok(Distribution::UniformDiscrete(rational_list(cursor, "}")?))
    } else if cursor.eat("uniform[") {
        let low = cursor.rational()?;
        cursor.expect(",")?;
        let high = cursor.rational()?;
        cursor.expect("]")?;
        Ok(Distribution::UniformContinuous { low, high })
    } else if cursor.eat("poisson(") {
        Ok(Distribution::Poisson(single(cursor)?))
    } else if cursor.eat("geometric(") {
        Ok(Distribution::Geometric(single(cursor)?))
    } else if cursor.eat("moments[") {
        Ok(Distribution::Moments(rational_list(cursor, "]")?))
    } else {
        debug_assert_eq!(start, cursor.pos());
        cursor.error(
            "expected one of point(, bernoulli(, binomial(, uniform{, uniform[, poisson(, geometric(, moments[",
        )
    }
}

fn join(values: &[ExactScalar]) -> String {
    values.iter().map(format_rational).collect::<Vec<_>>().join(",")
}

/// Canonical expression; parses back to an equal value.
impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Point(c) => write!(f, "point({})", format_rational(c)),
            Self::Bernoulli(p) => write!(f, "bernoulli({})", format_rational(p)),
            Self::Binomial { trials, p } => write!(f, "binomial({trials},{})", format_rational(p)),
            Self::UniformDiscrete(values) => write!(f, "uniform{{{}}}", join(values)),
            Self::UniformContinuous { low, high } => {
                write!(f, "uniform[{},{}]", format_rational(low), format_rational(high))
            }
            Self::Poisson(mean) => write!(f, "poisson({})", format_rational(mean)),
            Self::Geometric(p) => write!(f, "geometric({})", format_rational(p)),
            Self::Moments(values) => write!(f, "moments[{}]", join(values)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    #[test]
    fn parses_each_preset() {
        assert_eq!(Distribution::parse("bernoulli(1/2)").unwrap(), Distribution::Bernoulli(ratio(1, 2)));
        assert_eq!(
            Distribution::parse("moments[1,1,2,5]").unwrap(),
            Distribution::Moments(vec![int(1), int(1), int(2), int(5)])
        );
        assert_eq!(
            Distribution::parse("binomial(3, 1/4)").unwrap(),
            Distribution::Binomial { trials: 3, p: ratio(1, 4) }
        );
        assert_eq!(
            Distribution::parse("uniform{0,1,2}").unwrap(),
            Distribution::UniformDiscrete(vec![int(0), int(1), int(2)])
        );
        assert_eq!(
            Distribution::parse("uniform[-1/2,3]").unwrap(),
            Distribution::UniformContinuous { low: ratio(-1, 2), high: int(3) }
        );
        assert_eq!(Distribution::parse("poisson(1)").unwrap(), Distribution::Poisson(int(1)));
        assert_eq!(Distribution::parse("geometric(1/3)").unwrap(), Distribution::Geometric(ratio(1, 3)));
        assert_eq!(Distribution::parse(" point(-2) ").unwrap(), Distribution::Point(int(-2)));
    }

    #[test]
    fn semantic_errors() {
        for expr in [
            "bernoulli(3/2)",
            "bernoulli(-1/2)",
            "binomial(4,2)",
            "uniform[1,1]",
            "uniform[2,1]",
            "poisson(-1)",
            "geometric(0)",
            "moments[2,1]",
        ] {
            assert!(
                matches!(Distribution::parse(expr), Err(Error::InvalidDistribution(_))),
                "{expr}"
            );
        }
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = Distribution::parse("bernoulli(1/2").unwrap_err();
        assert_eq!(err, Error::Syntax { position: 13, message: "expected `)`".into() });
        assert!(matches!(Distribution::parse("normal(0,1)"), Err(Error::Syntax { position: 0, .. })));
        assert!(matches!(Distribution::parse("uniform{}"), Err(Error::Syntax { position: 8, .. })));
        assert!(matches!(Distribution::parse("point(1)x"), Err(Error::Syntax { position: 8, .. })));
        assert!(matches!(Distribution::parse("binomial(-2,1/2)"), Err(Error::Syntax { .. })));
        assert!(matches!(Distribution::parse(""), Err(Error::Syntax { position: 0, .. })));
    }

    #[test]
    fn display_round_trips() {
        for expr in [
            "point(1)",
            "bernoulli(1/2)",
            "binomial(5,2/7)",
            "uniform{0,1,2}",
            "uniform[-1,1/2]",
            "poisson(3/2)",
            "geometric(1)",
            "moments[1,0,1,0,3]",
        ] {
            let dist = Distribution::parse(expr).unwrap();
            assert_eq!(dist.to_string(), expr);
        }
        // Non-canonical spellings normalize.
        assert_eq!(Distribution::parse("bernoulli( 2/4 )").unwrap().to_string(), "bernoulli(1/2)");
    }

    #[test]
    fn finite_support_masses_sum_to_one() {
        for expr in ["point(3)", "bernoulli(1/3)", "binomial(4,2/5)", "uniform{1,1,2}"] {
            let support = Distribution::parse(expr).unwrap().finite_support().unwrap();
            let total = support.iter().fold(int(0), |acc, (_, m)| acc + m);
            assert_eq!(total, int(1), "{expr}");
        }
        assert!(Distribution::Poisson(int(1)).finite_support().is_none());
    }
}
