use std::io::Write;

use crate::error::{Error, Result};

/// Formats a value for emission: finite numbers use the shortest round-trip
/// representation, `+inf` becomes the literal `inf`. NaN never leaves the
/// program.
pub fn fmt_num(x: f64) -> Result<String> {
    if x.is_nan() {
        return Err(Error::Numerical("refusing to emit NaN".into()));
    }
    if x == f64::INFINITY {
        return Ok("inf".into());
    }
    if x == f64::NEG_INFINITY {
        return Err(Error::Numerical("refusing to emit -inf".into()));
    }
    Ok(format!("{x}"))
}

/// Writes a header and rows to `path`, or to standard output when no path is given.
pub fn write_csv(path: Option<&str>, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let sink: Box<dyn Write> = match path {
        Some(p) => Box::new(std::fs::File::create(p)?),
        None => Box::new(std::io::stdout().lock()),
    };
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}
