//! JSON documents for problems and games.
//!
//! All indices are 0-based. A problem document looks like
//!
//! ```json
//! {
//!   "version": "tvi-problem/1",
//!   "order": 4,
//!   "dim": 2,
//!   "tensor": { "sparse": [ { "idx": [0, 0, 0, 0], "val": 1.0 },
//!                           { "idx": [1, 1, 1, 1], "val": 1.0 } ] },
//!   "q": [-1.0, -1.0],
//!   "set": { "type": "box", "lower": [0, 0], "upper": ["inf", "inf"] }
//! }
//! ```
//!
//! Tensors are either `{"sparse": [...]}` (duplicate indices rejected) or
//! `{"dense": nested arrays}` with the last index innermost. Set objects are
//! tagged by `type`: `whole_space`, `box`, `ball`, `simplex`, `polyhedron`
//! (halfspaces `a^T x <= b`) and `product`. Infinite box bounds are written
//! as the strings `"inf"` and `"-inf"`.
//!
//! A game document lists one payoff tensor and strategy set per player:
//!
//! ```json
//! { "version": "tvi-game/1", "dims": [2, 2],
//!   "players": [ { "payoff": {"dense": [[1, -1], [-1, 1]]}, "set": {"type": "simplex", "dim": 2} },
//!                { "payoff": {"dense": [[-1, 1], [1, -1]]}, "set": {"type": "simplex", "dim": 2} } ] }
//! ```

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::game::GameSpec;
use crate::problem::TviProblem;
use crate::sets::{DykstraConfig, FeasibleSet, Halfspace};
use crate::tensor::{DenseTensor, SquareTensor};

pub const PROBLEM_VERSION: &str = "tvi-problem/1";
pub const GAME_VERSION: &str = "tvi-game/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDocument {
    pub version: String,
    pub order: usize,
    pub dim: usize,
    pub tensor: TensorDocument,
    pub q: Vec<f64>,
    pub set: SetDocument,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameDocument {
    pub version: String,
    pub dims: Vec<usize>,
    pub players: Vec<PlayerDocument>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlayerDocument {
    pub payoff: TensorDocument,
    pub set: SetDocument,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TensorDocument {
    Sparse(Vec<SparseEntry>),
    Dense(Value),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SparseEntry {
    pub idx: Vec<usize>,
    pub val: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum SetDocument {
    WholeSpace {
        dim: usize,
    },
    Box {
        lower: Vec<Bound>,
        upper: Vec<Bound>,
    },
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
    Simplex {
        dim: usize,
    },
    Polyhedron {
        dim: usize,
        halfspaces: Vec<HalfspaceDocument>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        max_iters: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tol: Option<f64>,
    },
    Product {
        factors: Vec<SetDocument>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HalfspaceDocument {
    pub a: Vec<f64>,
    pub b: f64,
}

/// An extended-real bound: a number or one of `"inf"`, `"+inf"`, `"-inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bound(pub f64);

impl Serialize for Bound {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0 == f64::INFINITY {
            s.serialize_str("inf")
        } else if self.0 == f64::NEG_INFINITY {
            s.serialize_str("-inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Bound {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(Bound(v)),
            Repr::Text(t) => match t.as_str() {
                "inf" | "+inf" | "infinity" | "+infinity" => Ok(Bound(f64::INFINITY)),
                "-inf" | "-infinity" => Ok(Bound(f64::NEG_INFINITY)),
                other => Err(serde::de::Error::custom(format!(
                    "expected a number, \"inf\" or \"-inf\", got {other:?}"
                ))),
            },
        }
    }
}

fn parse_err(pointer: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse {
        pointer: pointer.into(),
        message: message.into(),
    }
}

fn pointer_of(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        match seg {
            Segment::Seq { index } => out.push_str(&format!("/{index}")),
            Segment::Map { key } => out.push_str(&format!("/{}", key.replace('~', "~0").replace('/', "~1"))),
            Segment::Enum { variant } => out.push_str(&format!("/{variant}")),
            Segment::Unknown => out.push_str("/?"),
        }
    }
    if out.is_empty() {
        out.push('/');
    }
    out
}

fn deserialize<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let pointer = pointer_of(e.path());
        let message = e.into_inner().to_string();
        // Tagged set objects are buffered by serde, which hides the failing
        // field; re-read that object to recover the precise location.
        let refined = serde_json::from_str::<Value>(text)
            .ok()
            .and_then(|v| v.pointer(&pointer).cloned())
            .and_then(|v| locate_set_error(&v, &pointer));
        match refined {
            Some((p, m)) => parse_err(p, m),
            None => parse_err(pointer, message),
        }
    })
}

/// Externally tagged mirror of [`SetDocument`], used only to locate errors.
#[derive(Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
#[allow(dead_code)]
enum SetShape {
    WholeSpace {
        dim: usize,
    },
    Box {
        lower: Vec<Bound>,
        upper: Vec<Bound>,
    },
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
    Simplex {
        dim: usize,
    },
    Polyhedron {
        dim: usize,
        halfspaces: Vec<HalfspaceDocument>,
        #[serde(default)]
        max_iters: Option<usize>,
        #[serde(default)]
        tol: Option<f64>,
    },
    Product {
        factors: Vec<Value>,
    },
}

fn locate_set_error(v: &Value, pointer: &str) -> Option<(String, String)> {
    let obj = v.as_object()?;
    let Some(Value::String(tag)) = obj.get("type") else {
        return Some((format!("{pointer}/type"), "missing or non-string set type".into()));
    };
    let mut body = obj.clone();
    body.remove("type");
    let wrapped = Value::Object([(tag.clone(), Value::Object(body))].into_iter().collect());
    match serde_path_to_error::deserialize::<_, SetShape>(wrapped) {
        Err(e) => {
            // Drop the leading variant segment added by the external tag.
            let inner = pointer_of(e.path());
            let rest = inner.splitn(3, '/').nth(2).map(|r| format!("/{r}")).unwrap_or_default();
            let at = if e.path().iter().count() == 0 { format!("{pointer}/type") } else { format!("{pointer}{rest}") };
            Some((at, e.into_inner().to_string()))
        }
        Ok(SetShape::Product { factors }) => factors
            .iter()
            .enumerate()
            .find_map(|(i, f)| locate_set_error(f, &format!("{pointer}/factors/{i}"))),
        Ok(_) => None,
    }
}

fn check_finite(values: &[f64], pointer: &str) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(parse_err(format!("{pointer}/{i}"), "value must be finite")),
        None => Ok(()),
    }
}

/// Builds a dense tensor of shape `dims` from either representation.
pub fn tensor_from_document(doc: &TensorDocument, dims: &[usize], pointer: &str) -> Result<DenseTensor> {
    match doc {
        TensorDocument::Sparse(entries) => {
            let mut t = DenseTensor::zeros(dims.to_vec())
                .map_err(|e| parse_err(pointer, e.to_string()))?;
            let mut seen = HashSet::new();
            for (e_no, entry) in entries.iter().enumerate() {
                let here = format!("{pointer}/sparse/{e_no}");
                if entry.idx.len() != dims.len() {
                    return Err(parse_err(
                        format!("{here}/idx"),
                        format!(
                            "entry {e_no} has {} indices, expected {}",
                            entry.idx.len(),
                            dims.len()
                        ),
                    ));
                }
                if let Some(k) = entry.idx.iter().zip(dims).position(|(i, d)| i >= d) {
                    return Err(parse_err(
                        format!("{here}/idx/{k}"),
                        format!(
                            "entry {e_no}: index {} out of range for mode {k} of size {}",
                            entry.idx[k], dims[k]
                        ),
                    ));
                }
                if !entry.val.is_finite() {
                    return Err(parse_err(format!("{here}/val"), "value must be finite"));
                }
                if !seen.insert(entry.idx.clone()) {
                    return Err(parse_err(
                        format!("{here}/idx"),
                        format!("entry {e_no} repeats index {:?}", entry.idx),
                    ));
                }
                t.set(&entry.idx, entry.val)
                    .map_err(|e| parse_err(&here, e.to_string()))?;
            }
            Ok(t)
        }
        TensorDocument::Dense(value) => {
            let mut entries = Vec::with_capacity(dims.iter().product());
            flatten_dense(value, dims, &format!("{pointer}/dense"), &mut entries)?;
            DenseTensor::new(dims.to_vec(), entries).map_err(|e| parse_err(pointer, e.to_string()))
        }
    }
}

fn flatten_dense(value: &Value, dims: &[usize], pointer: &str, out: &mut Vec<f64>) -> Result<()> {
    match dims.split_first() {
        None => match value.as_f64() {
            Some(v) if v.is_finite() => {
                out.push(v);
                Ok(())
            }
            _ => Err(parse_err(pointer, format!("expected a finite number, got {value}"))),
        },
        Some((&d, rest)) => {
            let arr = value
                .as_array()
                .ok_or_else(|| parse_err(pointer, format!("expected an array of length {d}")))?;
            if arr.len() != d {
                return Err(parse_err(
                    pointer,
                    format!("expected an array of length {d}, found {}", arr.len()),
                ));
            }
            for (i, v) in arr.iter().enumerate() {
                flatten_dense(v, rest, &format!("{pointer}/{i}"), out)?;
            }
            Ok(())
        }
    }
}

pub fn set_from_document(doc: &SetDocument, pointer: &str) -> Result<FeasibleSet> {
    let wrap = |e: Error| parse_err(pointer, e.to_string());
    let set = match doc {
        SetDocument::WholeSpace { dim } => FeasibleSet::whole_space(*dim),
        SetDocument::Box { lower, upper } => FeasibleSet::Box {
            lower: lower.iter().map(|b| b.0).collect(),
            upper: upper.iter().map(|b| b.0).collect(),
        },
        SetDocument::Ball { center, radius } => {
            check_finite(center, &format!("{pointer}/center"))?;
            FeasibleSet::Ball {
                center: center.clone(),
                radius: *radius,
            }
        }
        SetDocument::Simplex { dim } => FeasibleSet::simplex(*dim),
        SetDocument::Polyhedron {
            dim,
            halfspaces,
            max_iters,
            tol,
        } => {
            let defaults = DykstraConfig::default();
            FeasibleSet::Polyhedron {
                dim: *dim,
                halfspaces: halfspaces
                    .iter()
                    .map(|h| Halfspace::new(h.a.clone(), h.b))
                    .collect(),
                dykstra: DykstraConfig {
                    max_iters: max_iters.unwrap_or(defaults.max_iters),
                    tol: tol.unwrap_or(defaults.tol),
                },
            }
        }
        SetDocument::Product { factors } => FeasibleSet::Product(
            factors
                .iter()
                .enumerate()
                .map(|(i, f)| set_from_document(f, &format!("{pointer}/factors/{i}")))
                .collect::<Result<_>>()?,
        ),
    };
    set.validate().map_err(wrap)?;
    Ok(set)
}

pub fn set_to_document(set: &FeasibleSet) -> SetDocument {
    match set {
        FeasibleSet::WholeSpace { dim } => SetDocument::WholeSpace { dim: *dim },
        FeasibleSet::Box { lower, upper } => SetDocument::Box {
            lower: lower.iter().map(|&v| Bound(v)).collect(),
            upper: upper.iter().map(|&v| Bound(v)).collect(),
        },
        FeasibleSet::Ball { center, radius } => SetDocument::Ball {
            center: center.clone(),
            radius: *radius,
        },
        FeasibleSet::Simplex { dim } => SetDocument::Simplex { dim: *dim },
        FeasibleSet::Polyhedron {
            dim,
            halfspaces,
            dykstra,
        } => {
            let defaults = DykstraConfig::default();
            SetDocument::Polyhedron {
                dim: *dim,
                halfspaces: halfspaces
                    .iter()
                    .map(|h| HalfspaceDocument {
                        a: h.normal.clone(),
                        b: h.offset,
                    })
                    .collect(),
                max_iters: (dykstra.max_iters != defaults.max_iters).then_some(dykstra.max_iters),
                tol: (dykstra.tol != defaults.tol).then_some(dykstra.tol),
            }
        }
        FeasibleSet::Product(factors) => SetDocument::Product {
            factors: factors.iter().map(set_to_document).collect(),
        },
    }
}

/// Nonzero entries in storage order.
pub fn tensor_to_sparse(t: &DenseTensor) -> TensorDocument {
    TensorDocument::Sparse(
        t.indexed_entries()
            .filter(|(_, v)| *v != 0.0)
            .map(|(idx, val)| SparseEntry { idx, val })
            .collect(),
    )
}

impl ProblemDocument {
    pub fn from_problem(p: &TviProblem) -> Self {
        Self {
            version: PROBLEM_VERSION.to_string(),
            order: p.order(),
            dim: p.dim(),
            tensor: tensor_to_sparse(p.tensor().as_dense()),
            q: p.q().to_vec(),
            set: set_to_document(p.set()),
        }
    }

    pub fn to_problem(&self) -> Result<TviProblem> {
        if self.version != PROBLEM_VERSION {
            return Err(parse_err(
                "/version",
                format!("unsupported version {:?}, expected {PROBLEM_VERSION:?}", self.version),
            ));
        }
        if self.order < 2 {
            return Err(parse_err("/order", format!("order must be at least 2, got {}", self.order)));
        }
        if self.dim == 0 {
            return Err(parse_err("/dim", "dim must be positive"));
        }
        let tensor = tensor_from_document(&self.tensor, &vec![self.dim; self.order], "/tensor")?;
        let tensor = SquareTensor::new(tensor).map_err(|e| parse_err("/tensor", e.to_string()))?;
        if self.q.len() != self.dim {
            return Err(parse_err(
                "/q",
                format!("expected {} entries, found {}", self.dim, self.q.len()),
            ));
        }
        check_finite(&self.q, "/q")?;
        let set = set_from_document(&self.set, "/set")?;
        if set.dim() != self.dim {
            return Err(parse_err(
                "/set",
                format!("set has dimension {}, expected {}", set.dim(), self.dim),
            ));
        }
        TviProblem::new(tensor, self.q.clone(), set).map_err(|e| parse_err("/", e.to_string()))
    }
}

impl GameDocument {
    pub fn from_game(g: &GameSpec) -> Self {
        Self {
            version: GAME_VERSION.to_string(),
            dims: g.dims().to_vec(),
            players: g
                .payoffs()
                .iter()
                .zip(g.strategy_sets())
                .map(|(t, s)| PlayerDocument {
                    payoff: tensor_to_sparse(t),
                    set: set_to_document(s),
                })
                .collect(),
        }
    }

    pub fn to_game(&self) -> Result<GameSpec> {
        if self.version != GAME_VERSION {
            return Err(parse_err(
                "/version",
                format!("unsupported version {:?}, expected {GAME_VERSION:?}", self.version),
            ));
        }
        if self.dims.len() < 2 {
            return Err(parse_err("/dims", "a game needs at least 2 players"));
        }
        if let Some(k) = self.dims.iter().position(|&d| d == 0) {
            return Err(parse_err(format!("/dims/{k}"), "dimensions must be positive"));
        }
        if self.players.len() != self.dims.len() {
            return Err(parse_err(
                "/players",
                format!("expected {} players, found {}", self.dims.len(), self.players.len()),
            ));
        }
        let mut payoffs = Vec::with_capacity(self.players.len());
        let mut sets = Vec::with_capacity(self.players.len());
        for (k, pl) in self.players.iter().enumerate() {
            payoffs.push(tensor_from_document(&pl.payoff, &self.dims, &format!("/players/{k}/payoff"))?);
            let here = format!("/players/{k}/set");
            let set = set_from_document(&pl.set, &here)?;
            if set.dim() != self.dims[k] {
                return Err(parse_err(
                    here,
                    format!("set has dimension {}, expected {}", set.dim(), self.dims[k]),
                ));
            }
            sets.push(set);
        }
        GameSpec::new(payoffs, sets).map_err(|e| parse_err("/", e.to_string()))
    }
}

pub fn parse_problem(text: &str) -> Result<TviProblem> {
    deserialize::<ProblemDocument>(text)?.to_problem()
}

pub fn parse_game(text: &str) -> Result<GameSpec> {
    deserialize::<GameDocument>(text)?.to_game()
}

pub fn problem_to_json(p: &TviProblem) -> String {
    serde_json::to_string_pretty(&ProblemDocument::from_problem(p)).expect("document serializes")
}

pub fn game_to_json(g: &GameSpec) -> String {
    serde_json::to_string_pretty(&GameDocument::from_game(g)).expect("document serializes")
}

/// Parses a comma-separated vector such as `"0,0"` or `"1.5, -2"`.
pub fn parse_vector(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .enumerate()
        .map(|(i, s)| {
            let s = s.trim();
            match s.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(parse_err(format!("/{i}"), format!("not a finite number: {s:?}"))),
            }
        })
        .collect()
}

/// Dense nested-array rendering of a tensor, last index innermost.
pub fn tensor_to_dense(t: &DenseTensor) -> TensorDocument {
    fn build(entries: &mut std::slice::Iter<'_, f64>, dims: &[usize]) -> Value {
        match dims.split_first() {
            None => Value::from(*entries.next().expect("entry count matches dims")),
            Some((&d, rest)) => Value::Array((0..d).map(|_| build(entries, rest)).collect()),
        }
    }
    TensorDocument::Dense(build(&mut t.entries().iter(), t.dims()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const EX41: &str = r#"{
        "version": "tvi-problem/1", "order": 4, "dim": 2,
        "tensor": {"sparse": [{"idx": [0,0,0,0], "val": 1.0}, {"idx": [1,1,1,1], "val": 1.0}]},
        "q": [-1, -1],
        "set": {"type": "box", "lower": [0, 0], "upper": ["inf", "inf"]}
    }"#;

    #[test]
    fn parses_sparse_fixture() {
        let p = parse_problem(EX41).unwrap();
        assert!(p.tensor().is_symmetric(0.0));
        assert_eq!(p.tensor().get(&[1, 1, 1, 1]).unwrap(), 1.0);
        assert_eq!(p.set(), &FeasibleSet::nonnegative_orthant(2));
    }

    #[test]
    fn empty_sparse_list_is_zero_tensor() {
        let text = EX41.replace(
            r#"[{"idx": [0,0,0,0], "val": 1.0}, {"idx": [1,1,1,1], "val": 1.0}]"#,
            "[]",
        );
        let p = parse_problem(&text).unwrap();
        assert!(p.tensor().as_dense().entries().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn wrong_index_length_names_the_entry() {
        let text = EX41.replace(r#"{"idx": [1,1,1,1]"#, r#"{"idx": [1,1,1]"#);
        match parse_problem(&text) {
            Err(Error::Parse { pointer, message }) => {
                assert_eq!(pointer, "/tensor/sparse/1/idx");
                assert!(message.contains("entry 1"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn duplicate_index_rejected() {
        let text = EX41.replace(r#"{"idx": [1,1,1,1]"#, r#"{"idx": [0,0,0,0]"#);
        assert!(matches!(
            parse_problem(&text),
            Err(Error::Parse { pointer, .. }) if pointer == "/tensor/sparse/1/idx"
        ));
    }

    #[test]
    fn structural_errors_carry_pointer() {
        let text = EX41.replace(r#""q": [-1, -1]"#, r#""q": [-1, "x"]"#);
        match parse_problem(&text) {
            Err(Error::Parse { pointer, .. }) => assert_eq!(pointer, "/q/1"),
            other => panic!("{other:?}"),
        }
        let text = EX41.replace(r#""q": [-1, -1]"#, r#""q": [-1]"#);
        assert!(matches!(parse_problem(&text), Err(Error::Parse { pointer, .. }) if pointer == "/q"));
        assert!(matches!(parse_problem("not json"), Err(Error::Parse { .. })));
    }

    #[test]
    fn dense_tensor_and_bounds() {
        let text = r#"{
            "version": "tvi-problem/1", "order": 2, "dim": 2,
            "tensor": {"dense": [[1, 2], [3, 4]]},
            "q": [0, 0],
            "set": {"type": "box", "lower": [1, "-inf"], "upper": ["+inf", 1]}
        }"#;
        let p = parse_problem(text).unwrap();
        assert_eq!(p.as_affine().unwrap().0, vec![vec![1.0, 2.0], vec![3.0, 4.0]]);
        let bad = text.replace("[[1, 2], [3, 4]]", "[[1, 2], [3]]");
        assert!(matches!(parse_problem(&bad), Err(Error::Parse { pointer, .. }) if pointer == "/tensor/dense/1"));
    }

    #[test]
    fn invalid_set_rejected() {
        let text = EX41.replace(r#""lower": [0, 0]"#, r#""lower": [0, 5]"#).replace(
            r#""upper": ["inf", "inf"]"#,
            r#""upper": ["inf", 1]"#,
        );
        assert!(matches!(parse_problem(&text), Err(Error::Parse { pointer, .. }) if pointer == "/set"));
    }

    #[test]
    fn round_trip_is_entry_exact() {
        let p = parse_problem(EX41).unwrap();
        let again = parse_problem(&problem_to_json(&p)).unwrap();
        assert_eq!(p, again);
    }

    #[test]
    fn game_document() {
        let text = r#"{ "version": "tvi-game/1", "dims": [2, 2],
          "players": [ { "payoff": {"dense": [[1, -1], [-1, 1]]}, "set": {"type": "simplex", "dim": 2} },
                       { "payoff": {"dense": [[-1, 1], [1, -1]]}, "set": {"type": "simplex", "dim": 2} } ] }"#;
        let g = parse_game(text).unwrap();
        assert_eq!(g.players(), 2);
        assert_eq!(parse_game(&game_to_json(&g)).unwrap(), g);
        let bad = text.replace(r#""dims": [2, 2]"#, r#""dims": [2, 3]"#);
        assert!(matches!(parse_game(&bad), Err(Error::Parse { pointer, .. }) if pointer.starts_with("/players/0/payoff")));
    }

    #[test]
    fn vectors() {
        assert_eq!(parse_vector("0,0").unwrap(), vec![0.0, 0.0]);
        assert_eq!(parse_vector(" 1.5, -2 ").unwrap(), vec![1.5, -2.0]);
        assert!(parse_vector("1,,2").is_err());
        assert!(parse_vector("nan").is_err());
    }
}
