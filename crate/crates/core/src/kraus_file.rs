//! Plain-text Kraus operator files.
//!
//! Each operator is three lines of three comma-separated complex entries such
//! as `0.5+0.25j` or `-1i`. Operators are separated by blank lines and `#`
//! starts a comment. Without a `weights:` line the operators are the noise
//! set of `(1-p) rho + (p/n) sum K rho K^dag`; with one, they form the
//! complete weighted set `sum w K rho K^dag` and `p` is ignored.

use crate::channels::KrausChannel;
use crate::error::{Error, Result};
use crate::tensor_core::{CMatrix, C64};
use std::path::Path;

#[derive(Clone, Debug, PartialEq)]
pub struct KrausSpec {
    pub ops: Vec<CMatrix>,
    pub weights: Option<Vec<f64>>,
}

impl KrausSpec {
    pub fn into_channel(self, label: &str, p: f64) -> Result<KrausChannel> {
        match self.weights {
            Some(w) => KrausChannel::from_kraus(label, self.ops, w),
            None => KrausChannel::new(label, p, self.ops),
        }
    }
}

fn parse_entry(s: &str, line: usize) -> Result<C64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    t.parse::<C64>().map_err(|_| Error::Parse {
        line,
        msg: format!("bad complex literal '{}'", s.trim()),
    })
}

pub fn parse_kraus(text: &str) -> Result<KrausSpec> {
    let mut ops = Vec::new();
    let mut rows: Vec<(usize, Vec<C64>)> = Vec::new();
    let mut weights = None;
    let flush = |rows: &mut Vec<(usize, Vec<C64>)>, ops: &mut Vec<CMatrix>| -> Result<()> {
        if rows.is_empty() {
            return Ok(());
        }
        if rows.len() != 3 {
            return Err(Error::Parse {
                line: rows[0].0,
                msg: format!("operator has {} rows, expected 3", rows.len()),
            });
        }
        let entries: Vec<C64> = rows.iter().flat_map(|(_, r)| r.iter().copied()).collect();
        ops.push(CMatrix::from_row_slice(3, 3, &entries));
        rows.clear();
        Ok(())
    };
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            flush(&mut rows, &mut ops)?;
            continue;
        }
        if let Some(rest) = line.strip_prefix("weights:") {
            flush(&mut rows, &mut ops)?;
            if weights.is_some() {
                return Err(Error::Parse {
                    line: line_no,
                    msg: "duplicate weights line".into(),
                });
            }
            let w = rest
                .split(',')
                .map(|v| {
                    v.trim().parse::<f64>().map_err(|_| Error::Parse {
                        line: line_no,
                        msg: format!("bad weight '{}'", v.trim()),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            weights = Some(w);
            continue;
        }
        let row = line
            .split(',')
            .map(|e| parse_entry(e, line_no))
            .collect::<Result<Vec<_>>>()?;
        if row.len() != 3 {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("row has {} entries, expected 3", row.len()),
            });
        }
        rows.push((line_no, row));
    }
    flush(&mut rows, &mut ops)?;
    if ops.is_empty() {
        return Err(Error::Parse {
            line: 0,
            msg: "no operators found".into(),
        });
    }
    if let Some(w) = &weights {
        if w.len() != ops.len() {
            return Err(Error::Parse {
                line: 0,
                msg: format!("{} weights for {} operators", w.len(), ops.len()),
            });
        }
    }
    Ok(KrausSpec { ops, weights })
}

pub fn load_kraus_file(path: &Path) -> Result<KrausSpec> {
    parse_kraus(&std::fs::read_to_string(path)?)
}

/// Text form accepted by [`parse_kraus`].
pub fn format_kraus(spec: &KrausSpec) -> String {
    let mut out = String::new();
    for (i, k) in spec.ops.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        for r in 0..3 {
            let row: Vec<String> = (0..3)
                .map(|c| {
                    let z = k[(r, c)];
                    format!("{:e}{:+e}j", z.re, z.im)
                })
                .collect();
            out.push_str(&row.join(", "));
            out.push('\n');
        }
    }
    if let Some(w) = &spec.weights {
        let ws: Vec<String> = w.iter().map(|v| format!("{v:e}")).collect();
        out.push_str(&format!("\nweights: {}\n", ws.join(", ")));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::catalog_noise;
    use crate::tensor_core::{c, cr, max_abs_diff};

    #[test]
    fn complex_literals() {
        assert_eq!(parse_entry("0.5+0.25j", 1).unwrap(), c(0.5, 0.25));
        assert_eq!(parse_entry("-1i", 1).unwrap(), c(0.0, -1.0));
        assert_eq!(parse_entry(" 2 ", 1).unwrap(), cr(2.0));
        assert_eq!(parse_entry("1 - 2j", 1).unwrap(), c(1.0, -2.0));
        assert!(parse_entry("abc", 1).is_err());
    }

    #[test]
    fn noise4_round_trip() {
        let text = "# identity\n1, 0, 0\n0, 1, 0\n0, 0, 1\n\n-1, 0, 0\n0, 1, 0\n0, 0, -1\n";
        let ch = parse_kraus(text).unwrap().into_channel("file", 0.25).unwrap();
        let reference = catalog_noise(4, 0.25).unwrap();
        for ((wa, ka), (wb, kb)) in ch.branches().iter().zip(reference.branches()) {
            assert!((wa - wb).abs() < 1e-15);
            assert!(max_abs_diff(ka, kb) < 1e-12);
        }
        let spec = KrausSpec {
            ops: reference.ops().to_vec(),
            weights: Some(vec![0.5, 0.5]),
        };
        assert_eq!(parse_kraus(&format_kraus(&spec)).unwrap(), spec);
    }

    #[test]
    fn weighted_set() {
        let text = "1,0,0\n0,1,0\n0,0,1\n\n-1,0,0\n0,1,0\n0,0,-1\nweights: 0.9, 0.1\n";
        let spec = parse_kraus(text).unwrap();
        assert_eq!(spec.weights, Some(vec![0.9, 0.1]));
        let ch = spec.into_channel("w", 0.5).unwrap();
        assert!(!ch.tp_renormalize());
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(parse_kraus(""), Err(Error::Parse { .. })));
        assert!(matches!(parse_kraus("1,0\n0,1\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_kraus("1,0,0\n0,1,0\n"), Err(Error::Parse { .. })));
        let bad_w = "1,0,0\n0,1,0\n0,0,1\nweights: 0.5, 0.5\n";
        assert!(matches!(parse_kraus(bad_w), Err(Error::Parse { .. })));
        assert!(matches!(parse_kraus("1,0,0\n0,x,0\n0,0,1\n"), Err(Error::Parse { line: 2, .. })));
    }
}
