//! Sweep grammar: `key=start:stop:step`, inclusive of `stop`.

use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Key {
    P,
    Q,
    SigmaR,
    SigmaT,
}

impl Key {
    pub const ALL: [Key; 4] = [Key::P, Key::Q, Key::SigmaR, Key::SigmaT];

    pub fn as_str(self) -> &'static str {
        match self {
            Key::P => "p",
            Key::Q => "q",
            Key::SigmaR => "sigma-r",
            Key::SigmaT => "sigma-t",
        }
    }
}

impl FromStr for Key {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Key::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown sweep key `{s}`; expected p, q, sigma-r or sigma-t"))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sweep {
    pub key: Key,
    pub values: Vec<f64>,
}

impl fmt::Display for Sweep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}=<{} values>", self.key.as_str(), self.values.len())
    }
}

/// Digits after the decimal point of a plain decimal literal.
fn decimals(s: &str) -> Result<u32, String> {
    if s.contains(['e', 'E']) {
        return Err(format!("`{s}`: use plain decimals in sweep ranges"));
    }
    Ok(s.split_once('.').map_or(0, |(_, frac)| frac.len() as u32))
}

const MAX_POINTS: i64 = 1_000_000;

impl FromStr for Sweep {
    type Err = String;

    /// Values are `(a + k·b) / 10^d` over integers, where `d` is the largest
    /// number of decimals among the three fields, so `0.1:0.3:0.1` gives
    /// exactly the literals `0.1, 0.2, 0.3`.
    fn from_str(s: &str) -> Result<Self, String> {
        let (key, range) = s.split_once('=').ok_or_else(|| format!("`{s}`: expected key=start:stop:step"))?;
        let key: Key = key.trim().parse()?;
        let parts: Vec<&str> = range.split(':').map(str::trim).collect();
        let [start, stop, step] = parts[..] else {
            return Err(format!("`{range}`: expected start:stop:step"));
        };
        let d = [start, stop, step].iter().map(|t| decimals(t)).collect::<Result<Vec<_>, _>>()?;
        let d = *d.iter().max().expect("three fields");
        if d > 12 {
            return Err(format!("`{range}`: at most 12 decimals"));
        }
        let scale = 10f64.powi(d as i32);
        let int = |t: &str| -> Result<i64, String> {
            let v: f64 = t.parse().map_err(|_| format!("`{t}` is not a number"))?;
            if !v.is_finite() {
                return Err(format!("`{t}` is not finite"));
            }
            Ok((v * scale).round() as i64)
        };
        let (a, z, b) = (int(start)?, int(stop)?, int(step)?);
        if b <= 0 {
            return Err(format!("`{range}`: step must be positive"));
        }
        if z < a {
            return Err(format!("`{range}`: stop is below start"));
        }
        let count = (z - a) / b + 1;
        if count > MAX_POINTS {
            return Err(format!("`{range}`: more than {MAX_POINTS} points"));
        }
        let values = (0..count).map(|k| (a + k * b) as f64 / scale).collect();
        Ok(Sweep { key, values })
    }
}
