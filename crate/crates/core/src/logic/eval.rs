use super::formula::Formula;
use super::frame::{Frame, Model};
use crate::algebra::{Algebra, SemiPrimal};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Modality {
    Box,
    Diamond,
    Nabla,
}

impl Modality {
    pub fn name(self) -> &'static str {
        match self {
            Modality::Box => "box",
            Modality::Diamond => "diamond",
            Modality::Nabla => "nabla",
        }
    }
}

/// The modalities a frame interprets.
pub fn modalities_for(frame: &Frame) -> &'static [Modality] {
    match frame {
        Frame::Kripke(_) => &[Modality::Box, Modality::Diamond],
        Frame::Neighborhood(nf) if nf.is_filter_frame() => &[Modality::Box, Modality::Nabla],
        Frame::Neighborhood(_) => &[Modality::Nabla],
    }
}

/// One modal step applied to a vector of values (one per point).
///
/// Kripke box and diamond take the meet and join over successors, with the empty meet at the
/// top and the empty join at the bottom. On neighborhood frames the value at `x` is the join of
/// all `d` above the bottom whose cut `{y : phi(y) >= d}` is a neighborhood of `x`.
pub fn modal_step(d: &SemiPrimal, frame: &Frame, m: Modality, vals: &[usize]) -> Result<Vec<usize>> {
    let out: Vec<usize> = match (frame, m) {
        (Frame::Kripke(k), Modality::Box) => {
            (0..k.obj().len()).map(|x| d.algebra().meet_all(k.successors(x).iter().map(|&y| vals[y]))).collect()
        }
        (Frame::Kripke(k), Modality::Diamond) => {
            (0..k.obj().len()).map(|x| d.algebra().join_all(k.successors(x).iter().map(|&y| vals[y]))).collect()
        }
        (Frame::Neighborhood(nf), Modality::Box) if nf.is_filter_frame() => threshold_join(d, nf, vals),
        (Frame::Neighborhood(nf), Modality::Nabla) => threshold_join(d, nf, vals),
        (Frame::Kripke(_), Modality::Nabla) => {
            return Err(Error::ModalityMismatch("nabla needs a neighborhood frame".into()));
        }
        (Frame::Neighborhood(_), Modality::Box) => {
            return Err(Error::ModalityMismatch("box on a neighborhood frame needs a filter frame".into()));
        }
        (Frame::Neighborhood(_), Modality::Diamond) => {
            return Err(Error::ModalityMismatch("diamond needs a Kripke frame".into()));
        }
    };
    let obj = frame.obj();
    for (x, &v) in out.iter().enumerate() {
        if !d.subalgebras().contains(obj.mark(x), v) {
            return Err(Error::check(
                "evaluate",
                format!("{} gives {} at {}, outside {}", m.name(), d.label(v), obj.point(x), d.render_sub(obj.mark(x))),
            ));
        }
    }
    Ok(out)
}

fn threshold_join(d: &SemiPrimal, nf: &super::frame::NeighborhoodFrame, vals: &[usize]) -> Vec<usize> {
    let cuts: Vec<(usize, u64)> = d
        .d_plus()
        .iter()
        .map(|&e| (e, (0..vals.len()).filter(|&y| d.leq(e, vals[y])).fold(0u64, |m, y| m | 1 << y)))
        .collect();
    (0..vals.len())
        .map(|x| d.algebra().join_all(cuts.iter().filter(|(_, cut)| nf.contains(x, *cut)).map(|&(e, _)| e)))
        .collect()
}

/// Truth values of a formula at every point.
pub fn evaluate(d: &SemiPrimal, model: &Model, f: &Formula) -> Result<Vec<usize>> {
    let n = model.len();
    let alg = d.algebra();
    Ok(match f {
        Formula::Var(v) => {
            let p = model.prop_index(v).ok_or_else(|| Error::InvalidObject {
                path: format!("props.{v}"),
                message: "proposition not in the model".into(),
            })?;
            model.values(p).to_vec()
        }
        Formula::Const(c) => {
            let obj = model.obj();
            if let Some(x) = (0..n).find(|&x| !d.subalgebras().contains(obj.mark(x), *c)) {
                return Err(Error::OutsideMarking {
                    point: obj.point(x).to_string(),
                    detail: format!("constant {} is not in {}", d.label(*c), d.render_sub(obj.mark(x))),
                });
            }
            vec![*c; n]
        }
        Formula::Op(op, args) => {
            let vals: Vec<Vec<usize>> = args.iter().map(|a| evaluate(d, model, a)).collect::<Result<_>>()?;
            let mut buf = vec![0; args.len()];
            (0..n)
                .map(|x| {
                    for (b, v) in buf.iter_mut().zip(&vals) {
                        *b = v[x];
                    }
                    alg.apply(*op, &buf)
                })
                .collect()
        }
        Formula::Tau(e, g) => evaluate(d, model, g)?.into_iter().map(|v| d.tau(*e, v)).collect(),
        Formula::Tcap(e, g) => evaluate(d, model, g)?.into_iter().map(|v| d.big_t(*e, v)).collect(),
        Formula::Kappa(e, g) => evaluate(d, model, g)?.into_iter().map(|v| d.kappa(*e, v)).collect(),
        Formula::Box(g) => modal_step(d, model.frame(), Modality::Box, &evaluate(d, model, g)?)?,
        Formula::Diamond(g) => modal_step(d, model.frame(), Modality::Diamond, &evaluate(d, model, g)?)?,
        Formula::Nabla(g) => modal_step(d, model.frame(), Modality::Nabla, &evaluate(d, model, g)?)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_lukasiewicz;
    use crate::logic::parse_formula;

    fn l2() -> SemiPrimal {
        SemiPrimal::new(make_lukasiewicz(2)).unwrap()
    }

    fn eval(d: &SemiPrimal, model: &str, f: &str) -> Vec<usize> {
        let m = Model::from_json_str(d, model).unwrap();
        evaluate(d, &m, &parse_formula(f, d.algebra()).unwrap()).unwrap()
    }

    #[test]
    fn deadlock() {
        let d = l2();
        let m = r#"{"frame":{"points":["x"],"relation":[]},"props":{"p":{"x":"1/2"}}}"#;
        assert_eq!(eval(&d, m, "(box p)"), vec![2]);
        assert_eq!(eval(&d, m, "(diamond p)"), vec![0]);
    }

    #[test]
    fn box_over_one_successor() {
        let d = l2();
        let m = r#"{"frame":{"points":["x","y"],"relation":[["x","y"]]},"props":{"p":{"y":"1/2"}}}"#;
        assert_eq!(eval(&d, m, "(box p)")[0], 1);
    }

    #[test]
    fn filter_box() {
        let d = l2();
        let m = r#"{"frame":{"points":["x","y"],"nbhd":{"x":[["y"],["x","y"]]},"filter":true},
                    "props":{"p":{"x":"0","y":"1/2"}}}"#;
        assert_eq!(eval(&d, m, "(box p)")[0], 1);
        assert_eq!(eval(&d, m, "(nabla p)")[0], 1);
    }

    #[test]
    fn mismatches() {
        let d = l2();
        let k = Model::from_json_str(&d, r#"{"frame":{"points":["x"]}}"#).unwrap();
        let nab = parse_formula("(nabla (top))", d.algebra()).unwrap();
        assert!(matches!(evaluate(&d, &k, &nab), Err(Error::ModalityMismatch(_))));
        let nb = Model::from_json_str(&d, r#"{"frame":{"points":["x"],"nbhd":{}}}"#).unwrap();
        let bx = parse_formula("(box (top))", d.algebra()).unwrap();
        assert!(matches!(evaluate(&d, &nb, &bx), Err(Error::ModalityMismatch(_))));
    }

    #[test]
    fn constant_outside_marking() {
        let d = l2();
        let m = Model::from_json_str(&d, r#"{"frame":{"points":["x"],"marking":{"x":0}}}"#).unwrap();
        let f = parse_formula("#1/2", d.algebra()).unwrap();
        assert!(matches!(evaluate(&d, &m, &f), Err(Error::OutsideMarking { .. })));
    }
}
