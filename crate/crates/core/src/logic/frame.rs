use crate::algebra::SemiPrimal;
use crate::duality::{c_s, SetDMorphism, SetDObject};
use crate::error::{Error, Result};
use crate::lift::{lift_object, map_element, SetFunctor, SizeCaps};
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;

/// Largest point set a neighborhood frame may have, since a collection is one `u64` mask over subsets.
pub const NEIGHBORHOOD_POINT_LIMIT: usize = 6;

/// A relational frame whose successors never carry a larger mark than their source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeFrame {
    obj: SetDObject,
    succ: Vec<Vec<usize>>,
}

impl KripkeFrame {
    pub fn new(d: &SemiPrimal, obj: SetDObject, relation: &[(usize, usize)]) -> Result<Self> {
        let n = obj.len();
        let mut succ = vec![Vec::new(); n];
        for &(x, y) in relation {
            if x >= n || y >= n {
                return Err(Error::InvalidObject { path: "relation".into(), message: format!("pair ({x}, {y}) out of range") });
            }
            if !d.subalgebras().leq(obj.mark(y), obj.mark(x)) {
                return Err(Error::CompatibilityViolation(format!(
                    "{} -> {} but {} is not below {}",
                    obj.point(x),
                    obj.point(y),
                    d.render_sub(obj.mark(y)),
                    d.render_sub(obj.mark(x))
                )));
            }
            succ[x].push(y);
        }
        for s in &mut succ {
            s.sort_unstable();
            s.dedup();
        }
        Ok(KripkeFrame { obj, succ })
    }

    pub fn obj(&self) -> &SetDObject {
        &self.obj
    }

    pub fn successors(&self, x: usize) -> &[usize] {
        &self.succ[x]
    }

    pub fn relation(&self) -> Vec<(usize, usize)> {
        self.succ.iter().enumerate().flat_map(|(x, ys)| ys.iter().map(move |&y| (x, y))).collect()
    }
}

/// A neighborhood frame: each point carries a collection of subsets (bit masks).
///
/// Compatibility asks that membership only depends on the trace on the points whose mark
/// lies below the mark of the carrier point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborhoodFrame {
    obj: SetDObject,
    nbhd: Vec<Vec<u64>>,
    filter: bool,
}

impl NeighborhoodFrame {
    pub fn new(d: &SemiPrimal, obj: SetDObject, nbhd: Vec<Vec<u64>>, filter: bool) -> Result<Self> {
        let n = obj.len();
        if n > NEIGHBORHOOD_POINT_LIMIT {
            return Err(Error::SizeBound {
                what: "neighborhood frame points".into(),
                needed: n as u128,
                limit: NEIGHBORHOOD_POINT_LIMIT as u128,
            });
        }
        if nbhd.len() != n {
            return Err(Error::InvalidObject { path: "nbhd".into(), message: format!("{} collections for {n} points", nbhd.len()) });
        }
        let full = (1u64 << n) - 1;
        let mut sorted = Vec::with_capacity(n);
        for (x, mut coll) in nbhd.into_iter().enumerate() {
            if coll.iter().any(|&y| y & !full != 0) {
                return Err(Error::InvalidObject { path: format!("nbhd.{}", obj.point(x)), message: "subset out of range".into() });
            }
            coll.sort_unstable();
            coll.dedup();
            sorted.push(coll);
        }
        let frame = NeighborhoodFrame { obj, nbhd: sorted, filter };
        for x in 0..n {
            let name = frame.obj.point(x).to_string();
            if filter {
                for &a in &frame.nbhd[x] {
                    for &b in &frame.nbhd[x] {
                        if !frame.contains(x, a & b) {
                            return Err(Error::InvalidObject {
                                path: format!("nbhd.{name}"),
                                message: "not closed under intersection".into(),
                            });
                        }
                    }
                    if (0..=full).any(|y| y & a == a && !frame.contains(x, y)) {
                        return Err(Error::InvalidObject {
                            path: format!("nbhd.{name}"),
                            message: "not closed under supersets".into(),
                        });
                    }
                }
            }
            let below = c_s(d, frame.obj.mark(x), &frame.obj).iter().fold(0u64, |m, &y| m | 1 << y);
            if let Some(y) = (0..=full).find(|&y| frame.contains(x, y) != frame.contains(x, y & below)) {
                return Err(Error::CompatibilityViolation(format!(
                    "at {name}, membership of {} differs from that of its trace {}",
                    render_subset(&frame.obj, y),
                    render_subset(&frame.obj, y & below)
                )));
            }
        }
        Ok(frame)
    }

    pub fn obj(&self) -> &SetDObject {
        &self.obj
    }

    pub fn is_filter_frame(&self) -> bool {
        self.filter
    }

    pub fn neighborhoods(&self, x: usize) -> &[u64] {
        &self.nbhd[x]
    }

    pub fn contains(&self, x: usize, y: u64) -> bool {
        self.nbhd[x].binary_search(&y).is_ok()
    }

    /// The collection at `x` as one mask over all subsets.
    pub fn code(&self, x: usize) -> u64 {
        self.nbhd[x].iter().fold(0, |m, &y| m | 1 << y)
    }
}

fn render_subset(obj: &SetDObject, y: u64) -> String {
    let parts: Vec<&str> = (0..obj.len()).filter(|&i| y >> i & 1 == 1).map(|i| obj.point(i)).collect();
    format!("{{{}}}", parts.join(","))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Frame {
    Kripke(KripkeFrame),
    Neighborhood(NeighborhoodFrame),
}

impl Frame {
    pub fn obj(&self) -> &SetDObject {
        match self {
            Frame::Kripke(k) => k.obj(),
            Frame::Neighborhood(nf) => nf.obj(),
        }
    }

    pub fn len(&self) -> usize {
        self.obj().len()
    }

    pub fn is_empty(&self) -> bool {
        self.obj().is_empty()
    }
}

/// A frame with a valuation of propositions satisfying `val(x, p)` in the mark of `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    frame: Frame,
    props: Vec<String>,
    val: Vec<Vec<usize>>,
}

impl Model {
    /// `props` lists names with one value per point. Names are kept sorted.
    pub fn new(d: &SemiPrimal, frame: Frame, props: Vec<(String, Vec<usize>)>) -> Result<Self> {
        let obj = frame.obj().clone();
        let mut sorted: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for (name, vals) in props {
            if vals.len() != obj.len() {
                return Err(Error::InvalidObject { path: format!("props.{name}"), message: "one value per point expected".into() });
            }
            for (x, &v) in vals.iter().enumerate() {
                if v >= d.size() || !d.subalgebras().contains(obj.mark(x), v) {
                    return Err(Error::OutsideMarking {
                        point: obj.point(x).to_string(),
                        detail: format!("{name} = {} is not in {}", d.label(v.min(d.size() - 1)), d.render_sub(obj.mark(x))),
                    });
                }
            }
            if sorted.insert(name.clone(), vals).is_some() {
                return Err(Error::InvalidObject { path: format!("props.{name}"), message: "duplicate proposition".into() });
            }
        }
        let (props, val) = sorted.into_iter().unzip();
        Ok(Model { frame, props, val })
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn obj(&self) -> &SetDObject {
        self.frame.obj()
    }

    pub fn len(&self) -> usize {
        self.frame.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frame.is_empty()
    }

    pub fn props(&self) -> &[String] {
        &self.props
    }

    pub fn prop_index(&self, name: &str) -> Option<usize> {
        self.props.binary_search_by(|p| p.as_str().cmp(name)).ok()
    }

    /// Values of proposition `p` (by index) at every point.
    pub fn values(&self, p: usize) -> &[usize] {
        &self.val[p]
    }

    /// Parses the model format. Missing valuation entries are the bottom element.
    pub fn from_json_str(d: &SemiPrimal, text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text)?;
        Self::from_json_value(d, &v)
    }

    pub fn from_json_value(d: &SemiPrimal, v: &Value) -> Result<Self> {
        let bad = |path: &str, message: &str| Error::InvalidObject { path: path.into(), message: message.into() };
        let frame_v = v.get("frame").ok_or_else(|| bad("frame", "missing"))?;
        let obj = SetDObject::from_json_value(d, &json!({
            "points": frame_v.get("points").cloned().unwrap_or(Value::Null),
            "marking": frame_v.get("marking").cloned().unwrap_or_else(|| json!({})),
        }))?;
        let point = |path: String, p: &Value| -> Result<usize> {
            p.as_str().and_then(|s| obj.index_of(s)).ok_or_else(|| Error::InvalidObject {
                path,
                message: format!("unknown point {p}"),
            })
        };
        let frame = match (frame_v.get("relation"), frame_v.get("nbhd")) {
            (Some(_), Some(_)) => return Err(bad("frame", "give either relation or nbhd, not both")),
            (Some(rel), None) => {
                let pairs = rel.as_array().ok_or_else(|| bad("frame.relation", "expected a list of pairs"))?;
                let mut relation = Vec::new();
                for (i, pair) in pairs.iter().enumerate() {
                    let path = format!("frame.relation[{i}]");
                    let ends = pair.as_array().filter(|a| a.len() == 2).ok_or_else(|| bad(&path, "expected [from, to]"))?;
                    relation.push((point(path.clone(), &ends[0])?, point(path, &ends[1])?));
                }
                Frame::Kripke(KripkeFrame::new(d, obj.clone(), &relation)?)
            }
            (None, Some(nb)) => {
                let table = nb.as_object().ok_or_else(|| bad("frame.nbhd", "expected an object"))?;
                let mut nbhd = vec![Vec::new(); obj.len()];
                for (key, sets) in table {
                    let x = point(format!("frame.nbhd.{key}"), &Value::String(key.clone()))?;
                    let sets = sets.as_array().ok_or_else(|| bad(&format!("frame.nbhd.{key}"), "expected a list of subsets"))?;
                    for (i, s) in sets.iter().enumerate() {
                        let path = format!("frame.nbhd.{key}[{i}]");
                        let members = s.as_array().ok_or_else(|| bad(&path, "expected a list of points"))?;
                        let mut mask = 0u64;
                        for m in members {
                            mask |= 1 << point(path.clone(), m)?;
                        }
                        nbhd[x].push(mask);
                    }
                }
                let filter = frame_v.get("filter").and_then(Value::as_bool).unwrap_or(false);
                Frame::Neighborhood(NeighborhoodFrame::new(d, obj.clone(), nbhd, filter)?)
            }
            (None, None) => Frame::Kripke(KripkeFrame::new(d, obj.clone(), &[])?),
        };
        let mut props = Vec::new();
        if let Some(pv) = v.get("props") {
            let table = pv.as_object().ok_or_else(|| bad("props", "expected an object"))?;
            for (name, vals) in table {
                let vals = vals.as_object().ok_or_else(|| bad(&format!("props.{name}"), "expected an object"))?;
                let mut row = vec![d.bottom(); obj.len()];
                for (pt, label) in vals {
                    let path = format!("props.{name}.{pt}");
                    let x = point(path.clone(), &Value::String(pt.clone()))?;
                    let text = match label {
                        Value::String(s) => s.clone(),
                        Value::Number(n) => n.to_string(),
                        _ => return Err(bad(&path, "expected an element label")),
                    };
                    row[x] = d
                        .algebra()
                        .element_by_label(&text)
                        .ok_or_else(|| bad(&path, &format!("unknown element {text:?}")))?;
                }
                props.push((name.clone(), row));
            }
        }
        Model::new(d, frame, props)
    }

    pub fn to_json(&self, d: &SemiPrimal) -> Value {
        let obj = self.obj();
        let o = obj.to_json();
        let mut frame = Map::new();
        frame.insert("points".into(), o["points"].clone());
        frame.insert("marking".into(), o["marking"].clone());
        match &self.frame {
            Frame::Kripke(k) => {
                let rel: Vec<Value> = k.relation().iter().map(|&(x, y)| json!([obj.point(x), obj.point(y)])).collect();
                frame.insert("relation".into(), Value::Array(rel));
            }
            Frame::Neighborhood(nf) => {
                let mut nb = Map::new();
                for x in 0..obj.len() {
                    let sets: Vec<Value> = nf
                        .neighborhoods(x)
                        .iter()
                        .map(|&y| Value::Array((0..obj.len()).filter(|&i| y >> i & 1 == 1).map(|i| json!(obj.point(i))).collect()))
                        .collect();
                    nb.insert(obj.point(x).to_string(), Value::Array(sets));
                }
                frame.insert("nbhd".into(), Value::Object(nb));
                frame.insert("filter".into(), json!(nf.is_filter_frame()));
            }
        }
        let mut props = Map::new();
        for (p, name) in self.props.iter().enumerate() {
            let row: Map<String, Value> =
                (0..obj.len()).map(|x| (obj.point(x).to_string(), json!(d.label(self.val[p][x])))).collect();
            props.insert(name.clone(), Value::Object(row));
        }
        json!({ "frame": Value::Object(frame), "props": Value::Object(props) })
    }

    /// Side-by-side union. Points become `1.x` and `2.x`; both models need the same propositions.
    pub fn disjoint_union(&self, d: &SemiPrimal, other: &Model) -> Result<Model> {
        if self.props != other.props {
            return Err(Error::InvalidObject {
                path: "props".into(),
                message: format!("propositions differ: {:?} versus {:?}", self.props, other.props),
            });
        }
        let (a, b) = (self.obj(), other.obj());
        let n1 = a.len();
        let points = a.points().iter().map(|p| format!("1.{p}")).chain(b.points().iter().map(|p| format!("2.{p}"))).collect();
        let marking = a.marking().iter().chain(b.marking()).copied().collect();
        let obj = SetDObject::new(d, points, marking)?;
        let frame = match (&self.frame, &other.frame) {
            (Frame::Kripke(k1), Frame::Kripke(k2)) => {
                let rel: Vec<(usize, usize)> =
                    k1.relation().into_iter().chain(k2.relation().into_iter().map(|(x, y)| (x + n1, y + n1))).collect();
                Frame::Kripke(KripkeFrame::new(d, obj, &rel)?)
            }
            (Frame::Neighborhood(f1), Frame::Neighborhood(f2)) if f1.filter == f2.filter => {
                let nbhd = f1
                    .nbhd
                    .iter()
                    .cloned()
                    .chain(f2.nbhd.iter().map(|c| c.iter().map(|&y| y << n1).collect()))
                    .collect();
                Frame::Neighborhood(NeighborhoodFrame::new(d, obj, nbhd, f1.filter)?)
            }
            _ => return Err(Error::ModalityMismatch("the models have different frame kinds".into())),
        };
        let props = self
            .props
            .iter()
            .enumerate()
            .map(|(p, name)| (name.clone(), self.val[p].iter().chain(&other.val[p]).copied().collect()))
            .collect();
        Model::new(d, frame, props)
    }
}

/// The structure map `x -> R[x]` as a morphism into the lifted powerset.
pub fn frame_to_coalgebra(d: &SemiPrimal, frame: &KripkeFrame, caps: &SizeCaps) -> Result<SetDMorphism> {
    let lifted = lift_object(d, SetFunctor::Powerset, &frame.obj, caps)?;
    let map = (0..frame.obj.len())
        .map(|x| {
            let code = frame.succ[x].iter().fold(0u64, |m, &y| m | 1 << y);
            lifted.position(code).expect("every subset is an element")
        })
        .collect();
    SetDMorphism::new(d, frame.obj.clone(), lifted.object, map)
        .map_err(|e| Error::CompatibilityViolation(e.to_string()))
}

/// Reads a relation back from a powerset coalgebra.
pub fn coalgebra_to_frame(d: &SemiPrimal, gamma: &SetDMorphism, caps: &SizeCaps) -> Result<KripkeFrame> {
    let lifted = lift_object(d, SetFunctor::Powerset, &gamma.source, caps)?;
    if lifted.object != gamma.target {
        return Err(Error::InvalidObject { path: "target".into(), message: "not the lifted powerset of the source".into() });
    }
    let mut relation = Vec::new();
    for (x, &i) in gamma.map.iter().enumerate() {
        let code = lifted.elements[i];
        relation.extend((0..gamma.source.len()).filter(|&y| code >> y & 1 == 1).map(|y| (x, y)));
    }
    KripkeFrame::new(d, gamma.source.clone(), &relation)
}

fn collection_functor(frame: &NeighborhoodFrame) -> SetFunctor {
    if frame.filter {
        SetFunctor::Filter
    } else {
        SetFunctor::Neighborhood
    }
}

/// The structure map into the lifted neighborhood (or filter) functor.
pub fn nbhd_frame_to_coalgebra(d: &SemiPrimal, frame: &NeighborhoodFrame, caps: &SizeCaps) -> Result<SetDMorphism> {
    let lifted = lift_object(d, collection_functor(frame), &frame.obj, caps)?;
    let map = (0..frame.obj.len())
        .map(|x| lifted.position(frame.code(x)).expect("filters are elements of the filter functor"))
        .collect();
    SetDMorphism::new(d, frame.obj.clone(), lifted.object, map)
        .map_err(|e| Error::CompatibilityViolation(e.to_string()))
}

/// Reads neighborhoods back from a neighborhood or filter coalgebra.
pub fn coalgebra_to_nbhd_frame(
    d: &SemiPrimal,
    f: SetFunctor,
    gamma: &SetDMorphism,
    caps: &SizeCaps,
) -> Result<NeighborhoodFrame> {
    if f == SetFunctor::Powerset {
        return Err(Error::ModalityMismatch("powerset coalgebras are Kripke frames".into()));
    }
    let lifted = lift_object(d, f, &gamma.source, caps)?;
    if lifted.object != gamma.target {
        return Err(Error::InvalidObject { path: "target".into(), message: format!("not the lifted {f} of the source") });
    }
    let n = gamma.source.len();
    let nbhd = gamma
        .map
        .iter()
        .map(|&i| {
            let code = lifted.elements[i];
            (0..1u64 << n).filter(|&y| code >> y & 1 == 1).collect()
        })
        .collect();
    NeighborhoodFrame::new(d, gamma.source.clone(), nbhd, f == SetFunctor::Filter)
}

/// Whether `f` commutes with the structure maps and never raises marks.
pub fn is_coalgebra_morphism(d: &SemiPrimal, f: &[usize], src: &Frame, dst: &Frame) -> bool {
    let (a, b) = (src.obj(), dst.obj());
    if f.len() != a.len() || f.iter().any(|&y| y >= b.len()) {
        return false;
    }
    let subs = d.subalgebras();
    if (0..a.len()).any(|x| !subs.leq(b.mark(f[x]), a.mark(x))) {
        return false;
    }
    match (src, dst) {
        (Frame::Kripke(k1), Frame::Kripke(k2)) => (0..a.len()).all(|x| {
            let mut image: Vec<usize> = k1.successors(x).iter().map(|&y| f[y]).collect();
            image.sort_unstable();
            image.dedup();
            image == k2.successors(f[x])
        }),
        (Frame::Neighborhood(n1), Frame::Neighborhood(n2)) => (0..a.len()).all(|x| {
            let pushed = map_element(SetFunctor::Neighborhood, f, b.len(), n1.code(x));
            pushed == n2.code(f[x])
        }),
        _ => false,
    }
}

/// A coalgebra morphism that also preserves every proposition.
pub fn is_model_morphism(d: &SemiPrimal, f: &[usize], src: &Model, dst: &Model) -> bool {
    src.props == dst.props
        && is_coalgebra_morphism(d, f, &src.frame, &dst.frame)
        && (0..src.props.len()).all(|p| (0..src.len()).all(|x| src.val[p][x] == dst.val[p][f[x]]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_lukasiewicz;

    fn l2() -> SemiPrimal {
        SemiPrimal::new(make_lukasiewicz(2)).unwrap()
    }

    #[test]
    fn compatibility_enforced() {
        let d = l2();
        let obj = SetDObject::with_marks(&d, vec![0, 1]).unwrap();
        assert!(KripkeFrame::new(&d, obj.clone(), &[(1, 0)]).is_ok());
        assert!(matches!(KripkeFrame::new(&d, obj, &[(0, 1)]), Err(Error::CompatibilityViolation(_))));
    }

    #[test]
    fn coalgebra_round_trip() {
        let d = l2();
        let caps = SizeCaps::default();
        let obj = SetDObject::with_marks(&d, vec![1, 1, 0, 1]).unwrap();
        let k = KripkeFrame::new(&d, obj, &[(0, 1), (1, 2), (3, 3), (3, 0), (2, 2)]).unwrap();
        let gamma = frame_to_coalgebra(&d, &k, &caps).unwrap();
        assert_eq!(coalgebra_to_frame(&d, &gamma, &caps).unwrap(), k);
        let empty = KripkeFrame::new(&d, k.obj().clone(), &[]).unwrap();
        let g = frame_to_coalgebra(&d, &empty, &caps).unwrap();
        assert!(g.map.iter().all(|&i| i == 0));
    }

    #[test]
    fn unfolding_is_a_morphism() {
        let d = l2();
        let four = SetDObject::with_marks(&d, vec![1; 4]).unwrap();
        let two = SetDObject::with_marks(&d, vec![1; 2]).unwrap();
        let c4 = Frame::Kripke(KripkeFrame::new(&d, four, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap());
        let c2 = Frame::Kripke(KripkeFrame::new(&d, two, &[(0, 1), (1, 0)]).unwrap());
        assert!(is_coalgebra_morphism(&d, &[0, 1, 0, 1], &c4, &c2));
        assert!(!is_coalgebra_morphism(&d, &[0, 0, 1, 1], &c4, &c2));
        assert!(is_coalgebra_morphism(&d, &[0, 1, 2, 3], &c4, &c4));
    }

    #[test]
    fn model_json_round_trip() {
        let d = l2();
        let text = r#"{"frame":{"points":["x","y"],"marking":{"y":0},"relation":[["x","y"]]},
                       "props":{"p":{"x":"1/2"}}}"#;
        let m = Model::from_json_str(&d, text).unwrap();
        assert_eq!(m.values(0), &[1, 0]);
        assert_eq!(Model::from_json_value(&d, &m.to_json(&d)).unwrap(), m);
    }

    #[test]
    fn valuation_outside_marking() {
        let d = l2();
        let text = r#"{"frame":{"points":["x"],"marking":{"x":0}},"props":{"p":{"x":"1/2"}}}"#;
        assert!(matches!(Model::from_json_str(&d, text), Err(Error::OutsideMarking { .. })));
    }

    #[test]
    fn neighborhood_frames() {
        let d = l2();
        let obj = SetDObject::with_marks(&d, vec![1, 1]).unwrap();
        // supersets of {y}
        let up_y = vec![0b10, 0b11];
        let f = NeighborhoodFrame::new(&d, obj.clone(), vec![up_y.clone(), vec![]], true).unwrap();
        let caps = SizeCaps::default();
        let gamma = nbhd_frame_to_coalgebra(&d, &f, &caps).unwrap();
        assert_eq!(coalgebra_to_nbhd_frame(&d, SetFunctor::Filter, &gamma, &caps).unwrap(), f);
        assert!(NeighborhoodFrame::new(&d, obj, vec![vec![0b10], vec![]], true).is_err());
    }

    #[test]
    fn neighborhood_trace_compatibility() {
        let d = l2();
        let obj = SetDObject::with_marks(&d, vec![0, 1]).unwrap();
        // {y} is a neighborhood of the low point x, but its trace on {x} is empty
        let e = NeighborhoodFrame::new(&d, obj, vec![vec![0b10], vec![]], false).unwrap_err();
        assert!(matches!(e, Error::CompatibilityViolation(_)));
    }
}
