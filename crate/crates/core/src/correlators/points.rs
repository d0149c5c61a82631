use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::rat::{display, parse_rat};
use crate::series::Rat;

/// Sewing points `(w_1, z_1, ..., w_g, z_g)` with `|w_1| > |z_1| > ... > |z_g| > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointConfig {
    points: Vec<Rat>,
}

impl PointConfig {
    pub fn new(points: Vec<Rat>) -> Result<Self> {
        if !points.len().is_multiple_of(2) {
            return Err(Error::Invalid(format!("expected an even number of points, got {}", points.len())));
        }
        check_ordered(&points)?;
        Ok(PointConfig { points })
    }

    /// `g1a = (3, 1)` and `g2a = (13, 7, 3, 1)`.
    pub fn builtin(name: &str) -> Result<Self> {
        let ints: &[i64] = match name {
            "g1a" => &[3, 1],
            "g1b" => &[5, 2],
            "g2a" => &[13, 7, 3, 1],
            "g2b" => &[17, 11, 5, 2],
            "g3a" => &[29, 23, 13, 7, 3, 1],
            _ => return Err(Error::Invalid(format!("unknown built-in point set {name:?}"))),
        };
        Self::new(ints.iter().map(|&x| crate::series::rat::int(x)).collect())
    }

    pub fn genus(&self) -> usize {
        self.points.len() / 2
    }

    pub fn points(&self) -> &[Rat] {
        &self.points
    }

    pub fn w(&self, i: usize) -> &Rat {
        &self.points[2 * i]
    }

    pub fn z(&self, i: usize) -> &Rat {
        &self.points[2 * i + 1]
    }

    /// The first `g` handles.
    pub fn prefix(&self, g: usize) -> Self {
        PointConfig { points: self.points[..2 * g].to_vec() }
    }

    /// Handles `from..to`.
    pub fn handles(&self, from: usize, to: usize) -> Self {
        PointConfig { points: self.points[2 * from..2 * to].to_vec() }
    }

    pub fn scaled(&self, k: &Rat) -> Result<Self> {
        Self::new(self.points.iter().map(|p| p * k).collect())
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.points.iter().map(display).collect()
    }

    pub fn parse(items: &[String]) -> Result<Self> {
        Self::new(items.iter().map(|s| parse_rat(s)).collect::<Result<_>>()?)
    }
}

impl fmt::Display for PointConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_strings().join(", "))
    }
}

/// JSON form: a list of exact rationals as strings.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PointConfigJson {
    pub points: Vec<String>,
}

/// Strictly decreasing moduli, all nonzero.
pub fn check_ordered(points: &[Rat]) -> Result<()> {
    for (i, p) in points.iter().enumerate() {
        if p.is_zero() {
            return Err(Error::Domain(format!("point {i} is zero")));
        }
        if i > 0 && points[i - 1].abs() <= p.abs() {
            return Err(Error::Domain(format!(
                "points must have strictly decreasing modulus: |{}| <= |{}|",
                display(&points[i - 1]),
                display(p)
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rat::{int, rat};

    #[test]
    fn builtins_are_ordered() {
        for name in ["g1a", "g1b", "g2a", "g2b", "g3a"] {
            PointConfig::builtin(name).unwrap();
        }
        assert_eq!(PointConfig::builtin("g2a").unwrap().genus(), 2);
    }

    #[test]
    fn rejects_bad_order() {
        assert!(PointConfig::new(vec![int(1), int(3)]).is_err());
        assert!(PointConfig::new(vec![int(3), int(-3)]).is_err());
        assert!(PointConfig::new(vec![int(3), int(0)]).is_err());
        assert!(PointConfig::new(vec![int(3), rat(-5, 2)]).is_ok());
        assert!(PointConfig::new(vec![int(3)]).is_err());
    }
}
