use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Frame, Relation};

/// Atom name to the (≤-closed) set of worlds where it holds.
pub type Valuation = BTreeMap<String, BTreeSet<usize>>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("MODEL_BAD_REF: unknown world `{0}`")]
    BadRef(String),
    #[error(
        "MODEL_VAL_NOT_CLOSED: val({atom}) contains {from} but not {to} although {from} <= {to}"
    )]
    ValNotClosed {
        atom: String,
        from: String,
        to: String,
    },
    #[error("MODEL_EMPTY: a model needs at least one world")]
    Empty,
    #[error("MODEL_DUPLICATE_WORLD: world `{0}` is declared twice")]
    DuplicateWorld(String),
    #[error("MODEL_PARSE: {0}")]
    Parse(String),
}

impl ModelError {
    pub fn code(&self) -> &'static str {
        match self {
            ModelError::BadRef(_) => "MODEL_BAD_REF",
            ModelError::ValNotClosed { .. } => "MODEL_VAL_NOT_CLOSED",
            ModelError::Empty => "MODEL_EMPTY",
            ModelError::DuplicateWorld(_) => "MODEL_DUPLICATE_WORLD",
            ModelError::Parse(_) => "MODEL_PARSE",
        }
    }
}

/// Where a world of a saturated model came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TipProvenance {
    pub name: usize,
    pub world: String,
    pub rank: usize,
    pub height: usize,
}

/// A frame together with a valuation whose every set is `≤`-closed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ModelFile", into = "ModelFile")]
pub struct Model {
    frame: Frame,
    val: Valuation,
    provenance: BTreeMap<usize, TipProvenance>,
}

impl Model {
    pub fn new(frame: Frame, val: Valuation) -> Result<Model, ModelError> {
        for (atom, set) in &val {
            if let Some(&w) = set.iter().find(|&&w| w >= frame.len()) {
                return Err(ModelError::BadRef(format!("#{w} in val({atom})")));
            }
            if let Some((a, b)) = frame
                .le()
                .pairs()
                .find(|&(a, b)| set.contains(&a) && !set.contains(&b))
            {
                return Err(ModelError::ValNotClosed {
                    atom: atom.clone(),
                    from: frame.name(a).to_string(),
                    to: frame.name(b).to_string(),
                });
            }
        }
        Ok(Model {
            frame,
            val,
            provenance: BTreeMap::new(),
        })
    }

    /// Closes every valuation set upward instead of rejecting it.
    pub fn with_upward_closure(frame: Frame, mut val: Valuation) -> Model {
        for set in val.values_mut() {
            let closed: BTreeSet<usize> = frame
                .worlds()
                .filter(|&t| set.iter().any(|&s| frame.leq(s, t)))
                .collect();
            *set = closed;
        }
        Model::new(frame, val).expect("upward closure yields a valid model")
    }

    pub fn with_provenance(mut self, provenance: BTreeMap<usize, TipProvenance>) -> Model {
        self.provenance = provenance;
        self
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn val(&self) -> &Valuation {
        &self.val
    }

    pub fn provenance(&self) -> &BTreeMap<usize, TipProvenance> {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.frame.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frame.is_empty()
    }

    pub fn world(&self, name: &str) -> Option<usize> {
        self.frame.world(name)
    }

    #[inline]
    pub fn holds_atom(&self, atom: &str, w: usize) -> bool {
        self.val.get(atom).is_some_and(|s| s.contains(&w))
    }

    pub fn is_val_closed(&self) -> bool {
        self.val.values().all(|set| {
            set.iter().all(|&w| w < self.len()) && self.frame.is_up_set(|w| set.contains(&w))
        })
    }

    /// Collapses each `≤`-cluster to one world.
    ///
    /// `R` is lifted (`[s] R [u]` iff some members are `R`-related); satisfaction,
    /// forward and downward confluence are preserved. Returns the quotient and
    /// the world-to-class map. Singleton clusters keep their names.
    pub fn cluster_quotient(&self) -> (Model, Vec<usize>) {
        let clusters = self.frame.clusters();
        let mut class_of = vec![0; self.len()];
        for (c, members) in clusters.iter().enumerate() {
            for &w in members {
                class_of[w] = c;
            }
        }
        let k = clusters.len();
        let names: Vec<String> = clusters
            .iter()
            .map(|m| {
                m.iter()
                    .map(|&w| self.frame.name(w))
                    .collect::<Vec<_>>()
                    .join("+")
            })
            .collect();
        let le = Relation::from_pairs(
            k,
            self.frame
                .le()
                .pairs()
                .map(|(a, b)| (class_of[a], class_of[b])),
        );
        let r = Relation::from_pairs(
            k,
            self.frame
                .r()
                .pairs()
                .map(|(a, b)| (class_of[a], class_of[b])),
        );
        let val = self
            .val
            .iter()
            .map(|(p, set)| (p.clone(), set.iter().map(|&w| class_of[w]).collect()))
            .collect();
        let model =
            Model::new(Frame::new(names, &le, r), val).expect("quotient of a model is a model");
        (model, class_of)
    }

    pub fn has_trivial_clusters(&self) -> bool {
        self.frame.clusters().iter().all(|c| c.len() == 1)
    }

    pub fn from_json(text: &str) -> Result<Model, ModelError> {
        let file: ModelFile =
            serde_json::from_str(text).map_err(|e| ModelError::Parse(e.to_string()))?;
        Model::try_from(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("models serialize")
    }

    /// Graphviz rendering: dashed edges for the transitive reduction of `≤`,
    /// solid edges for `R`, atoms in node labels.
    pub fn to_dot(&self) -> String {
        let f = &self.frame;
        let mut out = String::from("digraph model {\n  node [shape=circle];\n");
        for w in f.worlds() {
            let atoms: Vec<&str> = self
                .val
                .iter()
                .filter(|(_, s)| s.contains(&w))
                .map(|(p, _)| p.as_str())
                .collect();
            let label = if atoms.is_empty() {
                f.name(w).to_string()
            } else {
                format!("{}\\n{}", f.name(w), atoms.join(","))
            };
            let _ = writeln!(out, "  \"{}\" [label=\"{}\"];", f.name(w), label);
        }
        for (a, b) in f.le().pairs() {
            if a == b || f.worlds().any(|c| f.lt(a, c) && f.lt(c, b)) {
                continue;
            }
            let _ = writeln!(
                out,
                "  \"{}\" -> \"{}\" [style=dashed];",
                f.name(a),
                f.name(b)
            );
        }
        for (a, b) in f.r().pairs() {
            let _ = writeln!(out, "  \"{}\" -> \"{}\";", f.name(a), f.name(b));
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub(crate) struct ProvenanceEntry {
    pub tip: TipProvenance,
}

/// On-disk model format. `le` holds generators; the loader closes them.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct ModelFile {
    pub worlds: Vec<String>,
    #[serde(default)]
    pub le: Vec<(String, String)>,
    #[serde(default)]
    pub r: Vec<(String, String)>,
    #[serde(default)]
    pub val: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub provenance: BTreeMap<String, ProvenanceEntry>,
}

impl ModelFile {
    pub(crate) fn frame(&self) -> Result<Frame, ModelError> {
        if self.worlds.is_empty() {
            return Err(ModelError::Empty);
        }
        let mut seen = BTreeSet::new();
        for w in &self.worlds {
            if !seen.insert(w) {
                return Err(ModelError::DuplicateWorld(w.clone()));
            }
        }
        let n = self.worlds.len();
        let idx = |w: &String| {
            self.worlds
                .iter()
                .position(|x| x == w)
                .ok_or_else(|| ModelError::BadRef(w.clone()))
        };
        let mut le = Relation::empty(n);
        for (a, b) in &self.le {
            le.insert(idx(a)?, idx(b)?);
        }
        let mut r = Relation::empty(n);
        for (a, b) in &self.r {
            r.insert(idx(a)?, idx(b)?);
        }
        Ok(Frame::new(self.worlds.clone(), &le, r))
    }

    pub(crate) fn from_frame(frame: &Frame) -> ModelFile {
        let name = |w: usize| frame.name(w).to_string();
        ModelFile {
            worlds: frame.names().to_vec(),
            le: frame
                .le()
                .pairs()
                .filter(|(a, b)| a != b)
                .map(|(a, b)| (name(a), name(b)))
                .collect(),
            r: frame.r().pairs().map(|(a, b)| (name(a), name(b))).collect(),
            val: BTreeMap::new(),
            provenance: BTreeMap::new(),
        }
    }
}

impl TryFrom<ModelFile> for Model {
    type Error = ModelError;

    fn try_from(file: ModelFile) -> Result<Self, Self::Error> {
        let frame = file.frame()?;
        let mut val = Valuation::new();
        for (atom, worlds) in &file.val {
            let mut set = BTreeSet::new();
            for w in worlds {
                set.insert(
                    frame
                        .world(w)
                        .ok_or_else(|| ModelError::BadRef(w.clone()))?,
                );
            }
            val.insert(atom.clone(), set);
        }
        let mut provenance = BTreeMap::new();
        for (w, entry) in file.provenance {
            let idx = frame
                .world(&w)
                .ok_or_else(|| ModelError::BadRef(w.clone()))?;
            provenance.insert(idx, entry.tip);
        }
        Ok(Model::new(frame, val)?.with_provenance(provenance))
    }
}

impl From<Model> for ModelFile {
    fn from(m: Model) -> Self {
        let mut file = ModelFile::from_frame(&m.frame);
        file.val = m
            .val
            .iter()
            .map(|(p, set)| {
                (
                    p.clone(),
                    set.iter().map(|&w| m.frame.name(w).to_string()).collect(),
                )
            })
            .collect();
        file.provenance = m
            .provenance
            .into_iter()
            .map(|(w, tip)| (m.frame.name(w).to_string(), ProvenanceEntry { tip }))
            .collect();
        file
    }
}

impl Serialize for Frame {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ModelFile::from_frame(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Frame {
    /// Reads a model file and ignores its valuation.
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let file = ModelFile::deserialize(d)?;
        file.frame().map_err(serde::de::Error::custom)
    }
}

/// Loads a frame from a model file, ignoring `val`.
pub fn frame_from_json(text: &str) -> Result<Frame, ModelError> {
    let file: ModelFile =
        serde_json::from_str(text).map_err(|e| ModelError::Parse(e.to_string()))?;
    file.frame()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_documented_example() {
        let m = Model::from_json(
            r#"{"worlds":["w0","w1"],"le":[["w0","w1"]],"r":[["w0","w1"]],"val":{"p":["w1"]}}"#,
        )
        .unwrap();
        assert_eq!(m.len(), 2);
        assert!(m.frame().leq(0, 1) && m.frame().leq(0, 0) && !m.frame().leq(1, 0));
        assert!(m.frame().acc(0, 1));
        assert!(m.holds_atom("p", 1) && !m.holds_atom("p", 0));
    }

    #[test]
    fn rejects_bad_references_and_open_valuations() {
        let e = Model::from_json(r#"{"worlds":["w0"],"le":[["w0","w9"]],"r":[],"val":{}}"#)
            .unwrap_err();
        assert_eq!(e.code(), "MODEL_BAD_REF");
        let e = Model::from_json(r#"{"worlds":["w0"],"r":[],"val":{"p":["nope"]}}"#).unwrap_err();
        assert_eq!(e.code(), "MODEL_BAD_REF");
        let e = Model::from_json(r#"{"worlds":["w0","w1"],"le":[["w0","w1"]],"val":{"p":["w0"]}}"#)
            .unwrap_err();
        assert_eq!(e.code(), "MODEL_VAL_NOT_CLOSED");
        // closure of generators makes this transitive violation visible
        let e = Model::from_json(
            r#"{"worlds":["a","b","c"],"le":[["a","b"],["b","c"]],"val":{"p":["a","b"]}}"#,
        )
        .unwrap_err();
        assert_eq!(e.code(), "MODEL_VAL_NOT_CLOSED");
        assert_eq!(
            Model::from_json(r#"{"worlds":[]}"#).unwrap_err(),
            ModelError::Empty
        );
        assert_eq!(Model::from_json("{").unwrap_err().code(), "MODEL_PARSE");
    }

    #[test]
    fn json_round_trip_keeps_provenance() {
        let frame = Frame::with_default_names(
            &Relation::from_pairs(2, [(0, 1)]),
            Relation::from_pairs(2, [(1, 1)]),
        );
        let mut val = Valuation::new();
        val.insert("p".into(), BTreeSet::from([1]));
        let mut prov = BTreeMap::new();
        prov.insert(
            1,
            TipProvenance {
                name: 1,
                world: "x".into(),
                rank: 0,
                height: 1,
            },
        );
        let m = Model::new(frame, val).unwrap().with_provenance(prov);
        let text = m.to_json();
        assert!(text.contains("\"tip\""));
        assert_eq!(Model::from_json(&text).unwrap(), m);
    }

    #[test]
    fn dot_uses_transitive_reduction() {
        let frame = Frame::with_default_names(
            &Relation::from_pairs(3, [(0, 1), (1, 2)]),
            Relation::from_pairs(3, [(0, 2)]),
        );
        let dot = Model::new(frame, Valuation::new()).unwrap().to_dot();
        assert!(dot.contains("\"w0\" -> \"w1\" [style=dashed]"));
        assert!(dot.contains("\"w1\" -> \"w2\" [style=dashed]"));
        assert!(!dot.contains("\"w0\" -> \"w2\" [style=dashed]"));
        assert!(dot.contains("\"w0\" -> \"w2\";"));
    }

    #[test]
    fn quotient_merges_clusters() {
        let frame = Frame::with_default_names(
            &Relation::from_pairs(3, [(0, 1), (1, 0), (1, 2)]),
            Relation::from_pairs(3, [(1, 2)]),
        );
        let mut val = Valuation::new();
        val.insert("p".into(), BTreeSet::from([2]));
        let m = Model::new(frame, val).unwrap();
        assert!(!m.has_trivial_clusters());
        let (q, map) = m.cluster_quotient();
        assert_eq!(q.len(), 2);
        assert_eq!(map, vec![0, 0, 1]);
        assert_eq!(q.frame().name(0), "w0+w1");
        assert!(q.frame().acc(0, 1));
        assert!(q.has_trivial_clusters());
    }
}
