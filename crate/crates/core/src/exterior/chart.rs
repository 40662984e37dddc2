use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use super::ExteriorError;

pub type ChartRef = Arc<Chart>;

/// A coordinate domain. Equality compares coordinate lists only.
#[derive(Clone, Debug)]
pub struct Chart {
    name: String,
    coords: Vec<Arc<str>>,
    periodic: Vec<bool>,
}

pub(crate) fn valid_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.')
        && !matches!(s, "sin" | "cos" | "exp" | "sqrt")
}

impl Chart {
    pub fn new<S: AsRef<str>>(name: &str, coords: &[S]) -> Result<ChartRef, ExteriorError> {
        Chart::with_periodic(name, coords, &[] as &[&str])
    }

    /// Periodic flags are annotations only; no identification is performed.
    pub fn with_periodic<S: AsRef<str>, P: AsRef<str>>(
        name: &str,
        coords: &[S],
        periodic: &[P],
    ) -> Result<ChartRef, ExteriorError> {
        let mut seen = BTreeSet::new();
        for c in coords {
            let c = c.as_ref();
            if !valid_identifier(c) {
                return Err(ExteriorError::InvalidName(c.to_string()));
            }
            if !seen.insert(c) {
                return Err(ExteriorError::DuplicateCoordinate {
                    chart: name.to_string(),
                    coord: c.to_string(),
                });
            }
        }
        for p in periodic {
            if !seen.contains(p.as_ref()) {
                return Err(ExteriorError::UnknownCoordinate {
                    chart: name.to_string(),
                    coord: p.as_ref().to_string(),
                });
            }
        }
        let periodic_set: BTreeSet<&str> = periodic.iter().map(|p| p.as_ref()).collect();
        Ok(Arc::new(Chart {
            name: name.to_string(),
            coords: coords.iter().map(|c| Arc::from(c.as_ref())).collect(),
            periodic: coords
                .iter()
                .map(|c| periodic_set.contains(c.as_ref()))
                .collect(),
        }))
    }

    /// Concatenation of prefixed copies of the factors.
    pub fn product(name: &str, factors: &[(&str, &Chart)]) -> Result<ChartRef, ExteriorError> {
        let mut coords = Vec::new();
        let mut periodic = Vec::new();
        for (prefix, chart) in factors {
            for (c, p) in chart.coords.iter().zip(&chart.periodic) {
                let full = format!("{prefix}{c}");
                if *p {
                    periodic.push(full.clone());
                }
                coords.push(full);
            }
        }
        Chart::with_periodic(name, &coords, &periodic)
    }

    /// One-dimensional chart with a single coordinate.
    pub fn line(name: &str, coord: &str) -> Result<ChartRef, ExteriorError> {
        Chart::new(name, &[coord])
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Arc<str>] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &str {
        &self.coords[i]
    }

    pub fn is_periodic(&self, i: usize) -> bool {
        self.periodic[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.coords.iter().position(|c| &**c == name)
    }

    pub fn require_index(&self, name: &str) -> Result<usize, ExteriorError> {
        self.index_of(name)
            .ok_or_else(|| ExteriorError::UnknownCoordinate {
                chart: self.name.clone(),
                coord: name.to_string(),
            })
    }

    pub fn require_same(&self, other: &Chart) -> Result<(), ExteriorError> {
        if self == other {
            Ok(())
        } else {
            Err(ExteriorError::ChartMismatch {
                expected: self.name.clone(),
                found: other.name.clone(),
            })
        }
    }
}

impl PartialEq for Chart {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords
    }
}

impl Eq for Chart {}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.name)?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(c)?;
        }
        f.write_str(")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_bad_names() {
        assert!(Chart::new("M", &["x", "x"]).is_err());
        assert!(Chart::new("M", &["1x"]).is_err());
        assert!(Chart::new("M", &["sin"]).is_err());
        assert!(Chart::with_periodic("M", &["x"], &["y"]).is_err());
    }

    #[test]
    fn product_prefixes_and_keeps_periodicity() {
        let s = Chart::with_periodic("S", &["th", "r"], &["th"]).unwrap();
        let t = Chart::line("R", "t").unwrap();
        let p = Chart::product("P", &[("a.", &s), ("b.", &s), ("", &t)]).unwrap();
        let names: Vec<&str> = p.coords().iter().map(|c| &**c).collect();
        assert_eq!(names, ["a.th", "a.r", "b.th", "b.r", "t"]);
        assert!(p.is_periodic(2));
        assert!(!p.is_periodic(4));
    }
}
