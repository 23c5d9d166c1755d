//! Text formats accepted on the command line and in policy files.

use crate::error::{Error, Result};

/// Largest number of points a grid may expand to.
pub const MAX_GRID_POINTS: usize = 100_000;

/// Parses a grid: a single number, a comma-separated list, or an inclusive
/// range `start:step:stop`. The result is finite, non-empty and strictly
/// increasing.
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let text = text.trim();
    if text.is_empty() {
        return Err(grid_err("empty grid"));
    }
    let values = if text.contains(':') {
        parse_range(text)?
    } else {
        text.split(',')
            .map(|t| parse_number(t.trim()))
            .collect::<Result<Vec<f64>>>()?
    };
    check_grid(&values)?;
    Ok(values)
}

fn parse_range(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').map(str::trim).collect();
    let [start, step, stop] = parts[..] else {
        return Err(grid_err(format!("range `{text}` must read start:step:stop")));
    };
    let (start, step, stop) = (parse_number(start)?, parse_number(step)?, parse_number(stop)?);
    if !(step > 0.0) {
        return Err(grid_err("range step must be positive"));
    }
    if stop < start {
        return Err(grid_err("range stop lies below its start"));
    }
    let span = (stop - start) / step;
    if !(span < MAX_GRID_POINTS as f64) {
        return Err(grid_err(format!("range expands past {MAX_GRID_POINTS} points")));
    }
    // A little slack so that e.g. 0:0.1:1 keeps its endpoint.
    let count = (span + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| start + i as f64 * step).collect())
}

fn parse_number(token: &str) -> Result<f64> {
    let x: f64 = token
        .parse()
        .map_err(|_| grid_err(format!("`{token}` is not a number")))?;
    if !x.is_finite() {
        return Err(grid_err(format!("`{token}` is not finite")));
    }
    Ok(x)
}

/// Finite, non-empty, strictly increasing, bounded in size.
pub fn check_grid(values: &[f64]) -> Result<()> {
    if values.is_empty() {
        return Err(grid_err("empty grid"));
    }
    if values.len() > MAX_GRID_POINTS {
        return Err(grid_err(format!("grid has more than {MAX_GRID_POINTS} points")));
    }
    if values.iter().any(|x| !x.is_finite()) {
        return Err(grid_err("grid values must be finite"));
    }
    if values.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(grid_err("grid must be strictly increasing"));
    }
    Ok(())
}

/// Parses an integer grid (same syntax, every point a non-negative integer).
pub fn parse_int_grid(text: &str) -> Result<Vec<usize>> {
    parse_grid(text)?
        .into_iter()
        .map(|x| {
            if x >= 0.0 && x.fract() == 0.0 && x <= u32::MAX as f64 {
                Ok(x as usize)
            } else {
                Err(grid_err(format!("{x} is not a non-negative integer")))
            }
        })
        .collect()
}

/// Reads an explicit caching vector: numbers separated by commas, whitespace
/// or newlines; `#` starts a comment that runs to the end of the line.
pub fn parse_policy(text: &str) -> Result<Vec<f64>> {
    let mut probs = Vec::new();
    for line in text.lines() {
        let content = line.split('#').next().unwrap_or("");
        for token in content.split(|c: char| c == ',' || c.is_whitespace()) {
            if token.is_empty() {
                continue;
            }
            let q: f64 = token
                .parse()
                .map_err(|_| Error::config("policy", format!("`{token}` is not a number")))?;
            if !q.is_finite() {
                return Err(Error::config("policy", format!("`{token}` is not finite")));
            }
            probs.push(q);
        }
    }
    if probs.is_empty() {
        return Err(Error::config("policy", "no caching probabilities found"));
    }
    Ok(probs)
}

fn grid_err(msg: impl Into<String>) -> Error {
    Error::config("grid", msg)
}
