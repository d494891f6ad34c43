//! Value parsers shared by the subcommands.

use std::str::FromStr;

use fig8::saddle::kappa;
use fig8::ModularMatrix;

/// u in (0, kappa), rejected at parse time.
pub fn parse_u(s: &str) -> Result<f64, String> {
    let u: f64 = s.parse().map_err(|e| format!("{e}"))?;
    let k: f64 = kappa();
    if u > 0.0 && u < k {
        Ok(u)
    } else {
        Err(format!("u must lie in (0, {k:.6})"))
    }
}

/// `N` or `lo..hi` (inclusive).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NRange {
    pub lo: u32,
    pub hi: u32,
}

impl FromStr for NRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let positive = |t: &str| -> Result<u32, String> {
            match t.trim().parse::<u32>() {
                Ok(n) if n > 0 => Ok(n),
                _ => Err(format!("'{t}' is not a positive integer")),
            }
        };
        match s.split_once("..") {
            Some((a, b)) => {
                let (lo, hi) = (positive(a)?, positive(b)?);
                if lo > hi {
                    return Err(format!("empty range {s}"));
                }
                Ok(NRange { lo, hi })
            }
            None => {
                let n = positive(s)?;
                Ok(NRange { lo: n, hi: n })
            }
        }
    }
}

impl NRange {
    pub fn values(&self, step: u32) -> Vec<u32> {
        (self.lo..=self.hi).step_by(step.max(1) as usize).collect()
    }
}

pub fn parse_eta(s: &str) -> Result<ModularMatrix, String> {
    let v: Vec<i64> = s
        .split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|e| format!("'{t}': {e}")))
        .collect::<Result<_, _>>()?;
    let [a, b, c, d] = v[..] else {
        return Err("eta needs four integers a,b,c,d".into());
    };
    ModularMatrix::new(a, b, c, d).map_err(|e| e.to_string())
}

/// `400` for a square grid or `COLSxROWS`.
pub fn parse_resolution(s: &str) -> Result<(usize, usize), String> {
    let one = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("'{t}': {e}"));
    let (c, r) = match s.split_once(['x', 'X']) {
        Some((a, b)) => (one(a)?, one(b)?),
        None => {
            let n = one(s)?;
            (n, n)
        }
    };
    if c < 50 || r < 50 {
        return Err("resolution must be at least 50 x 50".into());
    }
    Ok((c, r))
}
