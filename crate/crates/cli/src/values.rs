//! Flag value types. Each parses from and prints back to the same text, so an
//! emitted config replays to identical arguments.

use std::fmt;
use std::str::FromStr;

use freebeam::Complex64;
use serde::{Serialize, Serializer};

macro_rules! serialize_as_string {
    ($t:ty) => {
        impl Serialize for $t {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }
    };
}

/// `value`, `start:stop:count` or `start:stop:count:log`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub log: bool,
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                let t = i as f64 / last;
                if self.log {
                    (self.start.ln() + t * (self.stop.ln() - self.start.ln())).exp()
                } else {
                    self.start + t * (self.stop - self.start)
                }
            })
            .collect()
    }
}

fn number(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("{s:?} is not a number"))?;
    if !v.is_finite() {
        return Err(format!("{s:?} is not finite"));
    }
    Ok(v)
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [v] => Ok(Grid { start: number(v)?, stop: number(v)?, count: 1, log: false }),
            [a, b, n] | [a, b, n, _] => {
                let log = match parts.get(3) {
                    None | Some(&"lin") => false,
                    Some(&"log") => true,
                    Some(other) => return Err(format!("grid scale {other:?} is not lin or log")),
                };
                let count: usize = n.trim().parse().map_err(|_| format!("{n:?} is not a count"))?;
                let g = Grid { start: number(a)?, stop: number(b)?, count, log };
                if count < 2 {
                    return Err("grid count must be at least 2".into());
                }
                if log && (g.start <= 0.0 || g.stop <= 0.0) {
                    return Err("log grid needs positive endpoints".into());
                }
                Ok(g)
            }
            _ => Err(format!("{s:?} is not value or start:stop:count[:log]")),
        }
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.count == 1 {
            write!(f, "{:?}", self.start)
        } else {
            write!(f, "{:?}:{:?}:{}", self.start, self.stop, self.count)?;
            if self.log {
                f.write_str(":log")?;
            }
            Ok(())
        }
    }
}

serialize_as_string!(Grid);

/// `lo:hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl FromStr for Interval {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s.split_once(':').ok_or_else(|| format!("{s:?} is not lo:hi"))?;
        Ok(Interval { lo: number(a)?, hi: number(b)? })
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}:{:?}", self.lo, self.hi)
    }
}

serialize_as_string!(Interval);

/// `re` or `re,im`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cplx(pub Complex64);

impl FromStr for Cplx {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.split_once(',') {
            None => Ok(Cplx(Complex64::new(number(s)?, 0.0))),
            Some((a, b)) => Ok(Cplx(Complex64::new(number(a)?, number(b)?))),
        }
    }
}

impl fmt::Display for Cplx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?},{:?}", self.0.re, self.0.im)
    }
}

serialize_as_string!(Cplx);

/// One multicolor factor, `re[,im]@harmonic`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ColorSpec {
    pub beta: Complex64,
    pub harmonic: u32,
}

impl FromStr for ColorSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (b, k) = s.split_once('@').ok_or_else(|| format!("{s:?} is not re[,im]@harmonic"))?;
        let harmonic = k.trim().parse().map_err(|_| format!("{k:?} is not a harmonic order"))?;
        Ok(ColorSpec { beta: b.parse::<Cplx>()?.0, harmonic })
    }
}

impl fmt::Display for ColorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", Cplx(self.beta), self.harmonic)
    }
}

serialize_as_string!(ColorSpec);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    #[allow(clippy::approx_constant)]
    fn grids_round_trip() {
        for text in ["100000.0", "0.0:6.2832:256", "1.0:1000.0:4:log"] {
            let g: Grid = text.parse().unwrap();
            assert_eq!(g.to_string(), text);
        }
        let g: Grid = "0:6.2832:256".parse().unwrap();
        assert_eq!(g.values().len(), 256);
        assert_eq!(g.values()[255], 6.2832);
        let g: Grid = "1:100:3:log".parse().unwrap();
        assert!((g.values()[1] - 10.0).abs() < 1e-12);
        assert!("0:1:1".parse::<Grid>().is_err());
        assert!("0:1:3:log".parse::<Grid>().is_err());
        assert!("a".parse::<Grid>().is_err());
    }

    #[test]
    fn complex_and_colors() {
        let c: Cplx = "1.5,-0.25".parse().unwrap();
        assert_eq!(c.0, Complex64::new(1.5, -0.25));
        assert_eq!(c.to_string().parse::<Cplx>().unwrap(), c);
        let k: ColorSpec = "0.7@2".parse().unwrap();
        assert_eq!(k.harmonic, 2);
        assert_eq!(k.to_string().parse::<ColorSpec>().unwrap(), k);
        assert!("0.7".parse::<ColorSpec>().is_err());
    }
}
