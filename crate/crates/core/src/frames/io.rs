use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::relcalc::{FiniteDomain, FiniteRelation, RelError};
use crate::semantics::Valuation;

use super::{Concept, ConceptLattice, Frame, FrameError, GraphFrame, KripkeFrame, PolarityFrame};

#[derive(Debug, Error)]
pub enum FrameIoError {
    #[error("invalid frame JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("frame of type `{0}` needs field `{1}`")]
    MissingField(String, &'static str),
    #[error("unknown frame type `{0}`")]
    UnknownType(String),
    #[error(transparent)]
    Relation(#[from] RelError),
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error("valuation of `{0}` does not fit a {1} frame")]
    Valuation(String, &'static str),
    #[error("valuation of `{0}` is not a formal concept")]
    NotConcept(String),
}

/// A concept given by labels, or a plain subset for Kripke frames.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ValuationDocument {
    Concept { extent: Vec<String>, intent: Vec<String> },
    Subset(Vec<String>),
}

/// On-disk frame format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameDocument {
    #[serde(rename = "type")]
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<Vec<String>>,
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<String>>,
    #[serde(rename = "X", default, skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<String>>,
    #[serde(rename = "E", default, skip_serializing_if = "Option::is_none")]
    pub e: Option<Vec<[String; 2]>>,
    #[serde(rename = "I", default, skip_serializing_if = "Option::is_none")]
    pub i: Option<Vec<[String; 2]>>,
    #[serde(rename = "R_box")]
    pub r_box: Vec<[String; 2]>,
    #[serde(rename = "R_dia")]
    pub r_dia: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub valuation: Option<BTreeMap<String, ValuationDocument>>,
}

fn pairs_of(src: &FiniteDomain, tgt: &FiniteDomain, r: &FiniteRelation) -> Vec<[String; 2]> {
    r.pairs().map(|(u, v)| [src.label(u).to_string(), tgt.label(v).to_string()]).collect()
}

fn relation_of(
    src: &FiniteDomain,
    tgt: &FiniteDomain,
    pairs: &[[String; 2]],
) -> Result<FiniteRelation, RelError> {
    let mut r = FiniteRelation::empty(src.len(), tgt.len());
    for [u, v] in pairs {
        r.insert(src.index(u)?, tgt.index(v)?);
    }
    Ok(r)
}

fn carriers(f: &Frame) -> (&FiniteDomain, &FiniteDomain) {
    match f {
        Frame::Kripke(k) => (k.domain(), k.domain()),
        Frame::Graph(g) => (g.domain(), g.domain()),
        Frame::Polarity(p) => (p.a(), p.x()),
    }
}

impl FrameDocument {
    pub fn from_frame(f: &Frame) -> Self {
        let blank = |kind: &str| FrameDocument {
            kind: kind.to_string(),
            domain: None,
            a: None,
            x: None,
            e: None,
            i: None,
            r_box: Vec::new(),
            r_dia: Vec::new(),
            valuation: None,
        };
        match f {
            Frame::Kripke(k) => {
                let d = k.domain();
                FrameDocument {
                    domain: Some(d.labels().to_vec()),
                    r_box: pairs_of(d, d, k.r_box()),
                    r_dia: pairs_of(d, d, k.r_dia()),
                    ..blank("kripke")
                }
            }
            Frame::Graph(g) => {
                let d = g.domain();
                FrameDocument {
                    domain: Some(d.labels().to_vec()),
                    e: Some(pairs_of(d, d, g.e())),
                    r_box: pairs_of(d, d, g.r_box()),
                    r_dia: pairs_of(d, d, g.r_dia()),
                    ..blank("graph")
                }
            }
            Frame::Polarity(p) => FrameDocument {
                a: Some(p.a().labels().to_vec()),
                x: Some(p.x().labels().to_vec()),
                i: Some(pairs_of(p.a(), p.x(), p.i())),
                r_box: pairs_of(p.a(), p.x(), p.r_box()),
                r_dia: pairs_of(p.x(), p.a(), p.r_dia()),
                ..blank("polarity")
            },
        }
    }

    pub fn to_frame(&self) -> Result<Frame, FrameIoError> {
        let need = |field: &Option<Vec<String>>, name: &'static str| {
            field
                .as_ref()
                .ok_or_else(|| FrameIoError::MissingField(self.kind.clone(), name))
                .and_then(|l| Ok(FiniteDomain::new(l.iter().cloned())?))
        };
        let need_pairs = |field: &Option<Vec<[String; 2]>>, name: &'static str| {
            field.clone().ok_or_else(|| FrameIoError::MissingField(self.kind.clone(), name))
        };
        match self.kind.as_str() {
            "kripke" => {
                let d = need(&self.domain, "domain")?;
                let rb = relation_of(&d, &d, &self.r_box)?;
                let rd = relation_of(&d, &d, &self.r_dia)?;
                Ok(Frame::Kripke(KripkeFrame::new(d, rb, rd)?))
            }
            "graph" => {
                let d = need(&self.domain, "domain")?;
                let e = relation_of(&d, &d, &need_pairs(&self.e, "E")?)?;
                let rb = relation_of(&d, &d, &self.r_box)?;
                let rd = relation_of(&d, &d, &self.r_dia)?;
                Ok(Frame::Graph(GraphFrame::new(d, e, rb, rd)?))
            }
            "polarity" => {
                let a = need(&self.a, "A")?;
                let x = need(&self.x, "X")?;
                let i = relation_of(&a, &x, &need_pairs(&self.i, "I")?)?;
                let rb = relation_of(&a, &x, &self.r_box)?;
                let rd = relation_of(&x, &a, &self.r_dia)?;
                Ok(Frame::Polarity(PolarityFrame::new(a, x, i, rb, rd)?))
            }
            other => Err(FrameIoError::UnknownType(other.to_string())),
        }
    }

    /// Label form of a valuation on `f`.
    pub fn valuation_document(f: &Frame, v: &Valuation) -> BTreeMap<String, ValuationDocument> {
        let (objects, attributes) = carriers(f);
        match v {
            Valuation::Concepts(m) => m
                .iter()
                .map(|(k, c)| {
                    let doc = ValuationDocument::Concept {
                        extent: objects.labels_of(c.extent),
                        intent: attributes.labels_of(c.intent),
                    };
                    (k.clone(), doc)
                })
                .collect(),
            Valuation::Sets(m) => {
                m.iter().map(|(k, s)| (k.clone(), ValuationDocument::Subset(objects.labels_of(*s)))).collect()
            }
        }
    }

    /// The valuation stored in the document, resolved against `f`.
    pub fn valuation(&self, f: &Frame) -> Result<Option<Valuation>, FrameIoError> {
        let Some(docs) = &self.valuation else { return Ok(None) };
        let (objects, attributes) = carriers(f);
        let kind = f.kind();
        let mismatch = |name: &str| FrameIoError::Valuation(name.to_string(), kind);
        let set = |d: &FiniteDomain, labels: &[String]| d.set_of(labels.iter().map(String::as_str));
        if let Frame::Kripke(_) = f {
            let mut out = BTreeMap::new();
            for (name, doc) in docs {
                let ValuationDocument::Subset(labels) = doc else { return Err(mismatch(name)) };
                out.insert(name.clone(), set(objects, labels)?);
            }
            return Ok(Some(Valuation::Sets(out)));
        }
        let lattice = match f {
            Frame::Graph(g) => ConceptLattice::of_graph(g),
            Frame::Polarity(p) => ConceptLattice::of_polarity(p),
            Frame::Kripke(_) => unreachable!(),
        };
        let mut out = BTreeMap::new();
        for (name, doc) in docs {
            let ValuationDocument::Concept { extent, intent } = doc else { return Err(mismatch(name)) };
            let c = Concept { extent: set(objects, extent)?, intent: set(attributes, intent)? };
            if !lattice.is_concept(&c) {
                return Err(FrameIoError::NotConcept(name.clone()));
            }
            out.insert(name.clone(), c);
        }
        Ok(Some(Valuation::Concepts(out)))
    }

    pub fn parse(text: &str) -> Result<Self, FrameIoError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::{lift, tests::path_graph};

    #[test]
    fn round_trips() {
        let g = path_graph();
        for f in [Frame::Graph(g.clone()), Frame::Polarity(lift(&g))] {
            let doc = FrameDocument::from_frame(&f);
            let back = FrameDocument::parse(&doc.to_json()).unwrap().to_frame().unwrap();
            assert_eq!(back, f);
        }
    }

    #[test]
    fn valuations_round_trip() {
        let f = Frame::Graph(path_graph());
        let l = ConceptLattice::of_graph(&path_graph());
        let v = Valuation::Concepts([("p".to_string(), l.get(2))].into_iter().collect());
        let mut doc = FrameDocument::from_frame(&f);
        doc.valuation = Some(FrameDocument::valuation_document(&f, &v));
        let back = FrameDocument::parse(&doc.to_json()).unwrap();
        assert_eq!(back.valuation(&f).unwrap(), Some(v));
        let bad = r#"{"type":"graph","domain":["u"],"E":[["u","u"]],"R_box":[],"R_dia":[],
            "valuation":{"p":{"extent":["u"],"intent":["u"]}}}"#;
        let doc = FrameDocument::parse(bad).unwrap();
        let f = doc.to_frame().unwrap();
        assert!(matches!(doc.valuation(&f), Err(FrameIoError::NotConcept(_))));
    }

    #[test]
    fn reads_hand_written_kripke() {
        let text = r#"{"type":"kripke","domain":["1","2"],"R_box":[["1","2"]],"R_dia":[["1","2"]]}"#;
        let f = FrameDocument::parse(text).unwrap().to_frame().unwrap();
        assert!(matches!(f, Frame::Kripke(ref k) if k.r_box().contains(0, 1)));
        let bad = r#"{"type":"graph","domain":["1"],"R_box":[],"R_dia":[]}"#;
        assert!(matches!(
            FrameDocument::parse(bad).unwrap().to_frame(),
            Err(FrameIoError::MissingField(_, "E"))
        ));
    }
}
