//! Plain-text area tables: a header line `r,A` followed by `r,A` rows.

use super::RadialProfile;
use crate::error::{Error, Result};

/// Minimum samples required in the first and last decade of the table.
const SAMPLES_PER_DECADE: usize = 8;

pub fn parse_tabulated(text: &str) -> Result<RadialProfile> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, header)) if header.trim().replace(' ', "") == "r,A" => {}
        Some((i, _)) => {
            return Err(Error::Parse {
                line: i + 1,
                msg: "expected header `r,A`".into(),
            })
        }
        None => {
            return Err(Error::Parse {
                line: 1,
                msg: "empty table".into(),
            })
        }
    }
    let (mut rs, mut areas) = (Vec::new(), Vec::new());
    for (i, line) in lines {
        let line_no = i + 1;
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 2 {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("expected 2 fields, found {}", fields.len()),
            });
        }
        let parse = |s: &str| -> Result<f64> {
            let v: f64 = s.parse().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("not a number: `{s}`"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("non-finite value `{s}`"),
                });
            }
            Ok(v)
        };
        let (r, a) = (parse(fields[0])?, parse(fields[1])?);
        if r < 0.0 || a < 0.0 {
            return Err(Error::Parse {
                line: line_no,
                msg: "r and A must be non-negative".into(),
            });
        }
        if let Some(&prev) = rs.last() {
            if r <= prev {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("r must increase strictly ({r} after {prev})"),
                });
            }
        }
        rs.push(r);
        areas.push(a);
    }
    check_density(&rs)?;
    RadialProfile::tabulated(rs, areas)
}

fn check_density(r: &[f64]) -> Result<()> {
    if r.len() < SAMPLES_PER_DECADE {
        return Err(Error::Domain(format!(
            "table needs at least {SAMPLES_PER_DECADE} rows, got {}",
            r.len()
        )));
    }
    let (first, last) = (r[0], r[r.len() - 1]);
    let first_decade = if first > 0.0 { first * 10.0 } else { r[1] * 10.0 };
    let head = r.iter().take_while(|&&x| x <= first_decade).count();
    let tail = r.iter().rev().take_while(|&&x| x >= last / 10.0).count();
    if head < SAMPLES_PER_DECADE || tail < SAMPLES_PER_DECADE {
        return Err(Error::Domain(format!(
            "table needs at least {SAMPLES_PER_DECADE} samples per decade at each end"
        )));
    }
    Ok(())
}
