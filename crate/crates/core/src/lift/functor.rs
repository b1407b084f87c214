use crate::error::{Error, Result};
use std::fmt;
use std::str::FromStr;

/// The finite set functors that can be lifted.
///
/// Elements of `T(X)` for `|X| = n` are `u64` codes: a subset is a bit mask over the points,
/// and a neighborhood or filter is a bit mask over the `2^n` subsets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SetFunctor {
    Powerset,
    Neighborhood,
    /// Collections closed under binary intersection and supersets, the empty one included.
    Filter,
}

impl SetFunctor {
    pub const ALL: [SetFunctor; 3] = [SetFunctor::Powerset, SetFunctor::Neighborhood, SetFunctor::Filter];

    pub fn name(self) -> &'static str {
        match self {
            SetFunctor::Powerset => "powerset",
            SetFunctor::Neighborhood => "neighborhood",
            SetFunctor::Filter => "filter",
        }
    }
}

impl fmt::Display for SetFunctor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SetFunctor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "powerset" | "P" => Ok(SetFunctor::Powerset),
            "neighborhood" | "N" => Ok(SetFunctor::Neighborhood),
            "filter" | "M" => Ok(SetFunctor::Filter),
            other => Err(Error::InvalidObject {
                path: "functor".into(),
                message: format!("unknown functor {other:?} (expected powerset, neighborhood or filter)"),
            }),
        }
    }
}

/// Largest base sets accepted per functor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeCaps {
    pub powerset: usize,
    pub filter: usize,
    pub neighborhood: usize,
}

impl Default for SizeCaps {
    fn default() -> Self {
        SizeCaps { powerset: 4, filter: 4, neighborhood: 3 }
    }
}

impl SizeCaps {
    /// The largest sizes the `u64` encoding supports.
    pub fn relaxed() -> Self {
        SizeCaps { powerset: 6, filter: 6, neighborhood: 4 }
    }

    pub fn check(&self, f: SetFunctor, n: usize) -> Result<()> {
        let limit = match f {
            SetFunctor::Powerset => self.powerset,
            SetFunctor::Filter => self.filter,
            SetFunctor::Neighborhood => self.neighborhood,
        };
        if n > limit {
            return Err(Error::SizeBound {
                what: format!("{f} of a {n}-point set"),
                needed: n as u128,
                limit: limit as u128,
            });
        }
        Ok(())
    }
}

fn full_points(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// The collection of all supersets of `a` among subsets of an `n`-point set.
fn principal(a: u64, n: usize) -> u64 {
    (0..1u64 << n).filter(|&y| y & a == a).fold(0, |m, y| m | 1 << y)
}

/// The canonical sorted list of `T(X)` for `|X| = n`.
pub fn apply_functor(f: SetFunctor, n: usize, caps: &SizeCaps) -> Result<Vec<u64>> {
    caps.check(f, n)?;
    Ok(match f {
        SetFunctor::Powerset => (0..1u64 << n).collect(),
        SetFunctor::Neighborhood => (0..1u64 << (1u64 << n)).collect(),
        SetFunctor::Filter => {
            let mut out: Vec<u64> = (0..1u64 << n).map(|a| principal(a, n)).collect();
            out.push(0);
            out.sort_unstable();
            out
        }
    })
}

/// Whether a collection of subsets is closed under intersection and supersets.
pub fn is_filter(z: u64, n: usize) -> bool {
    let subsets = 1u64 << n;
    (0..subsets).filter(|&y| z >> y & 1 == 1).all(|y| {
        (0..subsets).all(|w| {
            let up = if w & y == y { z >> w & 1 == 1 } else { true };
            let cap = if z >> w & 1 == 1 { z >> (w & y) & 1 == 1 } else { true };
            up && cap
        })
    })
}

/// `T(map)` applied to one element, where `map` sends the `n = map.len()` source points into
/// a `target`-point set.
pub fn map_element(f: SetFunctor, map: &[usize], target: usize, z: u64) -> u64 {
    match f {
        SetFunctor::Powerset => (0..map.len()).filter(|&x| z >> x & 1 == 1).fold(0, |m, x| m | 1 << map[x]),
        SetFunctor::Neighborhood | SetFunctor::Filter => {
            // Y belongs to the image iff its preimage belongs to z
            (0..1u64 << target)
                .filter(|&y| {
                    let pre = (0..map.len()).filter(|&x| y >> map[x] & 1 == 1).fold(0u64, |m, x| m | 1 << x);
                    z >> pre & 1 == 1
                })
                .fold(0, |m, y| m | 1 << y)
        }
    }
}

/// `T(map)` as a table over the canonical list of `T(source)`.
pub fn apply_on_map(f: SetFunctor, map: &[usize], target: usize, caps: &SizeCaps) -> Result<Vec<u64>> {
    caps.check(f, target)?;
    Ok(apply_functor(f, map.len(), caps)?.into_iter().map(|z| map_element(f, map, target, z)).collect())
}

/// The image of `T(X0)` in `T(X)` for the inclusion of the listed points, sorted.
pub fn image_under_inclusion(f: SetFunctor, sub: &[usize], n: usize, caps: &SizeCaps) -> Result<Vec<u64>> {
    let mut out = apply_on_map(f, sub, n, caps)?;
    out.sort_unstable();
    Ok(out)
}

/// Membership in the inclusion image without enumerating it.
///
/// For subsets this is containment in `X0`. For collections it says that membership of `Y`
/// depends only on the trace `Y ∩ X0`.
pub fn in_inclusion_image(f: SetFunctor, sub_mask: u64, n: usize, z: u64) -> bool {
    match f {
        SetFunctor::Powerset => z & !sub_mask & full_points(n) == 0,
        SetFunctor::Neighborhood | SetFunctor::Filter => {
            (0..1u64 << n).all(|y| (z >> y & 1) == (z >> (y & sub_mask) & 1))
        }
    }
}

/// Renders an element using point names, e.g. `{x,y}` or `{{},{x}}`.
pub fn render_element(f: SetFunctor, names: &[String], z: u64) -> String {
    let subset = |m: u64| {
        let parts: Vec<&str> = (0..names.len()).filter(|&x| m >> x & 1 == 1).map(|x| names[x].as_str()).collect();
        format!("{{{}}}", parts.join(","))
    };
    match f {
        SetFunctor::Powerset => subset(z),
        SetFunctor::Neighborhood | SetFunctor::Filter => {
            let parts: Vec<String> = (0..1u64 << names.len()).filter(|&y| z >> y & 1 == 1).map(subset).collect();
            format!("{{{}}}", parts.join(","))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        let caps = SizeCaps::default();
        assert_eq!(apply_functor(SetFunctor::Powerset, 3, &caps).unwrap().len(), 8);
        assert_eq!(apply_functor(SetFunctor::Neighborhood, 1, &caps).unwrap().len(), 4);
        assert_eq!(apply_functor(SetFunctor::Filter, 1, &caps).unwrap(), vec![0, 0b10, 0b11]);
        assert!(matches!(
            apply_functor(SetFunctor::Neighborhood, 4, &caps),
            Err(Error::SizeBound { .. })
        ));
    }

    #[test]
    fn filters_match_closure_test() {
        let caps = SizeCaps::default();
        for n in 0..=3 {
            let by_closure: Vec<u64> = (0..1u64 << (1u64 << n)).filter(|&z| is_filter(z, n)).collect();
            assert_eq!(apply_functor(SetFunctor::Filter, n, &caps).unwrap(), by_closure, "n = {n}");
        }
    }

    #[test]
    fn inclusion_membership_matches_image() {
        let caps = SizeCaps::default();
        for f in SetFunctor::ALL {
            let sub = [0usize, 2];
            let image = image_under_inclusion(f, &sub, 3, &caps).unwrap();
            for z in apply_functor(f, 3, &caps).unwrap() {
                assert_eq!(in_inclusion_image(f, 0b101, 3, z), image.binary_search(&z).is_ok(), "{f} {z:#b}");
            }
        }
    }

    #[test]
    fn functor_laws() {
        let caps = SizeCaps::default();
        let g = [1usize, 1, 0];
        let h = [1usize, 0];
        let gh: Vec<usize> = g.iter().map(|&y| h[y]).collect();
        for f in SetFunctor::ALL {
            for z in apply_functor(f, 3, &caps).unwrap() {
                let step = map_element(f, &h, 2, map_element(f, &g, 2, z));
                assert_eq!(step, map_element(f, &gh, 2, z));
                assert_eq!(map_element(f, &[0, 1, 2], 3, z), z);
            }
        }
    }

    #[test]
    fn render() {
        let names = vec!["x".to_string()];
        assert_eq!(render_element(SetFunctor::Neighborhood, &names, 0b11), "{{},{x}}");
        assert_eq!(render_element(SetFunctor::Powerset, &names, 0), "{}");
    }
}
