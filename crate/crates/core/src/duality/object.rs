use crate::algebra::SemiPrimal;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashSet};

/// A finite set with every point marked by a subuniverse of `D`.
///
/// Finite Stone spaces are discrete, so this also stands for the finite topological objects.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetDObject {
    points: Vec<String>,
    marking: Vec<usize>,
}

#[derive(Deserialize, Serialize)]
struct ObjectJson {
    points: Vec<String>,
    #[serde(default)]
    marking: BTreeMap<String, usize>,
}

impl SetDObject {
    /// Builds an object, rejecting duplicate point names and unknown subuniverse ids.
    pub fn new(d: &SemiPrimal, points: Vec<String>, marking: Vec<usize>) -> Result<Self> {
        if points.len() != marking.len() {
            return Err(Error::InvalidObject {
                path: "marking".into(),
                message: format!("{} points but {} marks", points.len(), marking.len()),
            });
        }
        let mut seen = HashSet::new();
        for (i, p) in points.iter().enumerate() {
            if !seen.insert(p.as_str()) {
                return Err(Error::InvalidObject { path: format!("points[{i}]"), message: format!("duplicate point {p:?}") });
            }
        }
        let subs = d.subalgebras().len();
        for (p, &s) in points.iter().zip(&marking) {
            if s >= subs {
                return Err(Error::InvalidObject {
                    path: format!("marking.{p}"),
                    message: format!("subuniverse id {s} out of range (D has {subs})"),
                });
            }
        }
        Ok(SetDObject { points, marking })
    }

    /// Points `x0, x1, ...` with the given marks.
    pub fn with_marks(d: &SemiPrimal, marking: Vec<usize>) -> Result<Self> {
        let points = (0..marking.len()).map(|i| format!("x{i}")).collect();
        Self::new(d, points, marking)
    }

    pub fn empty() -> Self {
        SetDObject { points: Vec::new(), marking: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &str {
        &self.points[i]
    }

    pub fn marking(&self) -> &[usize] {
        &self.marking
    }

    pub fn mark(&self, i: usize) -> usize {
        self.marking[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.points.iter().position(|p| p == name)
    }

    /// Parses `{"points": [...], "marking": {point: id}}`. Unmarked points get the full `D`.
    pub fn from_json_str(d: &SemiPrimal, text: &str) -> Result<Self> {
        let raw: ObjectJson = serde_json::from_str(text)?;
        Self::from_parts(d, raw)
    }

    pub fn from_json_value(d: &SemiPrimal, value: &serde_json::Value) -> Result<Self> {
        let raw: ObjectJson = serde_json::from_value(value.clone())?;
        Self::from_parts(d, raw)
    }

    fn from_parts(d: &SemiPrimal, raw: ObjectJson) -> Result<Self> {
        for key in raw.marking.keys() {
            if !raw.points.contains(key) {
                return Err(Error::InvalidObject {
                    path: format!("marking.{key}"),
                    message: "marks a point that is not listed".into(),
                });
            }
        }
        let full = d.subalgebras().full();
        let marking = raw.points.iter().map(|p| raw.marking.get(p).copied().unwrap_or(full)).collect();
        Self::new(d, raw.points, marking)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let raw = ObjectJson {
            points: self.points.clone(),
            marking: self.points.iter().cloned().zip(self.marking.iter().copied()).collect(),
        };
        serde_json::to_value(raw).expect("plain data serializes")
    }

    /// The sub-object on the listed point indices, in the given order.
    pub fn restrict(&self, idx: &[usize]) -> SetDObject {
        SetDObject {
            points: idx.iter().map(|&i| self.points[i].clone()).collect(),
            marking: idx.iter().map(|&i| self.marking[i]).collect(),
        }
    }

    pub(crate) fn from_raw(points: Vec<String>, marking: Vec<usize>) -> Self {
        debug_assert_eq!(points.len(), marking.len());
        SetDObject { points, marking }
    }
}

/// A marking-respecting map between marked sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetDMorphism {
    pub source: SetDObject,
    pub target: SetDObject,
    pub map: Vec<usize>,
}

impl SetDMorphism {
    /// Validates that `mark(f(x))` is contained in `mark(x)` for every `x`.
    pub fn new(d: &SemiPrimal, source: SetDObject, target: SetDObject, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.len() {
            return Err(Error::InvalidObject {
                path: "map".into(),
                message: format!("map has {} entries for {} points", map.len(), source.len()),
            });
        }
        let subs = d.subalgebras();
        for (x, &y) in map.iter().enumerate() {
            if y >= target.len() {
                return Err(Error::InvalidObject {
                    path: format!("map[{x}]"),
                    message: format!("target index {y} out of range"),
                });
            }
            if !subs.leq(target.mark(y), source.mark(x)) {
                return Err(Error::InvalidObject {
                    path: format!("map[{x}]"),
                    message: format!(
                        "mark {} of {} is not contained in mark {} of {}",
                        d.render_sub(target.mark(y)),
                        target.point(y),
                        d.render_sub(source.mark(x)),
                        source.point(x)
                    ),
                });
            }
        }
        Ok(SetDMorphism { source, target, map })
    }

    pub fn compose(&self, after: &SetDMorphism) -> SetDMorphism {
        SetDMorphism {
            source: self.source.clone(),
            target: after.target.clone(),
            map: self.map.iter().map(|&y| after.map[y]).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_lukasiewicz;

    fn l2() -> SemiPrimal {
        SemiPrimal::new(make_lukasiewicz(2)).unwrap()
    }

    #[test]
    fn json_round_trip_and_default_mark() {
        let d = l2();
        let o = SetDObject::from_json_str(&d, r#"{"points":["x","y"],"marking":{"x":0}}"#).unwrap();
        assert_eq!(o.marking(), &[0, 1]);
        let back = SetDObject::from_json_value(&d, &o.to_json()).unwrap();
        assert_eq!(back, o);
    }

    #[test]
    fn rejects_bad_ids_and_duplicates() {
        let d = l2();
        let e = SetDObject::from_json_str(&d, r#"{"points":["x"],"marking":{"x":7}}"#).unwrap_err();
        assert!(matches!(e, Error::InvalidObject { ref path, .. } if path == "marking.x"));
        let e = SetDObject::from_json_str(&d, r#"{"points":["x","x"]}"#).unwrap_err();
        assert!(matches!(e, Error::InvalidObject { .. }));
    }

    #[test]
    fn morphism_marking_condition() {
        let d = l2();
        let small = SetDObject::with_marks(&d, vec![0]).unwrap();
        let big = SetDObject::with_marks(&d, vec![1]).unwrap();
        assert!(SetDMorphism::new(&d, big.clone(), small.clone(), vec![0]).is_ok());
        assert!(SetDMorphism::new(&d, small, big, vec![0]).is_err());
    }
}
