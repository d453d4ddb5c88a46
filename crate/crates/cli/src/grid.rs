//! Evaluation grids: one axis per coordinate, combined row-major.

use crate::error::{usage, CliResult};
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

/// `min:max:count[:lin|log]`, or an explicit comma-separated list of points.
#[derive(Debug, Clone, PartialEq)]
pub enum GridSpec {
    Range { min: f64, max: f64, count: usize, spacing: Spacing },
    Points(Vec<f64>),
}

fn number(s: &str) -> CliResult<f64> {
    match s.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => usage(format!("not a finite number: '{s}'")),
    }
}

impl FromStr for GridSpec {
    type Err = crate::error::CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        if !s.contains(':') {
            let points = s.split(',').map(number).collect::<CliResult<Vec<_>>>()?;
            return Ok(Self::Points(points));
        }
        let parts: Vec<&str> = s.split(':').collect();
        if !(3..=4).contains(&parts.len()) {
            return usage(format!("grid '{s}' is not min:max:count[:lin|log]"));
        }
        let (min, max) = (number(parts[0])?, number(parts[1])?);
        let count: usize = parts[2].trim().parse().or_else(|_| usage(format!("bad grid count '{}'", parts[2])))?;
        let spacing = match parts.get(3).map(|p| p.trim()) {
            None | Some("lin") | Some("linear") => Spacing::Linear,
            Some("log") => Spacing::Log,
            Some(other) => return usage(format!("unknown grid spacing '{other}'")),
        };
        let spec = Self::Range { min, max, count, spacing };
        spec.points()?;
        Ok(spec)
    }
}

impl GridSpec {
    pub fn points(&self) -> CliResult<Vec<f64>> {
        match *self {
            Self::Points(ref p) => {
                if p.is_empty() {
                    return usage("empty point list");
                }
                Ok(p.clone())
            }
            Self::Range { min, max, count, spacing } => {
                if !(min < max) {
                    return usage(format!("grid needs min < max, got {min} and {max}"));
                }
                if count < 2 {
                    return usage("grid needs at least two points");
                }
                if spacing == Spacing::Log && min <= 0.0 {
                    return usage("log grid needs min > 0");
                }
                let step = |i: usize| i as f64 / (count - 1) as f64;
                Ok((0..count)
                    .map(|i| match (i, spacing) {
                        (0, _) => min,
                        (i, _) if i == count - 1 => max,
                        (i, Spacing::Linear) => min + (max - min) * step(i),
                        (i, Spacing::Log) => (min.ln() + (max.ln() - min.ln()) * step(i)).exp(),
                    })
                    .collect())
            }
        }
    }
}

/// Cartesian product of the axes with the last coordinate varying fastest.
/// A single axis is reused for every coordinate.
pub fn product(specs: &[GridSpec], dim: usize) -> CliResult<Vec<Vec<f64>>> {
    let axes: Vec<Vec<f64>> = match specs.len() {
        0 => return usage("missing --grid"),
        1 => vec![specs[0].points()?; dim],
        n if n == dim => specs.iter().map(|s| s.points()).collect::<CliResult<_>>()?,
        n => return usage(format!("{n} grids given for a {dim}-dimensional model")),
    };
    let mut rows = vec![Vec::with_capacity(dim)];
    for axis in &axes {
        rows = rows
            .into_iter()
            .flat_map(|r| {
                axis.iter().map(move |&v| {
                    let mut r = r.clone();
                    r.push(v);
                    r
                })
            })
            .collect();
    }
    Ok(rows)
}

pub fn require_positive(rows: &[Vec<f64>]) -> CliResult<()> {
    if rows.iter().flatten().any(|&v| v <= 0.0) {
        return usage("grid points must be > 0");
    }
    Ok(())
}

pub fn require_nonnegative(rows: &[Vec<f64>]) -> CliResult<()> {
    if rows.iter().flatten().any(|&v| v < 0.0) {
        return usage("grid points must be >= 0");
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_ranges_and_lists() {
        let g: GridSpec = "1:3:3".parse().unwrap();
        assert_eq!(g.points().unwrap(), vec![1.0, 2.0, 3.0]);
        let g: GridSpec = "0.1:10:3:log".parse().unwrap();
        let p = g.points().unwrap();
        assert!((p[1] - 1.0).abs() < 1e-15);
        let g: GridSpec = "-1,0,1".parse().unwrap();
        assert_eq!(g.points().unwrap(), vec![-1.0, 0.0, 1.0]);
        assert!("3:1:5".parse::<GridSpec>().is_err());
        assert!("1:2:1".parse::<GridSpec>().is_err());
        assert!("0:2:4:log".parse::<GridSpec>().is_err());
    }

    #[test]
    fn row_major_product() {
        let g = vec!["1,2".parse().unwrap(), "3,4,5".parse().unwrap()];
        let rows = product(&g, 2).unwrap();
        assert_eq!(rows.len(), 6);
        assert_eq!(rows[0], vec![1.0, 3.0]);
        assert_eq!(rows[1], vec![1.0, 4.0]);
        assert_eq!(rows[3], vec![2.0, 3.0]);
    }
}
