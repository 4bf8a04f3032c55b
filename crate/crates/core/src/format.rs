//! File formats: JSON serialization for all core structures and DOT
//! export of 1-skeleta.
//!
//! Serialization is canonical: emitting a parsed document reproduces it
//! byte for byte, which the tests rely on. Expressions in system
//! description files are stored in their infix string form.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hda::{Hda, HdaError, Label};
use crate::lts::{LtsError, LtsSystem, Relation};
use crate::pcs::{CellId, PcsBuilder, PcsError, PrecubicalSet};
use crate::progg::{
    parse_expr, Action, ProgramGraph, ProggError, SharedVariableSystem, Transition, Value, VarDecl,
};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("inconsistent document: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Pcs(#[from] PcsError),
    #[error(transparent)]
    Hda(#[from] HdaError),
    #[error(transparent)]
    Lts(#[from] LtsError),
    #[error(transparent)]
    Progg(#[from] ProggError),
}

// ---------------------------------------------------------------------------
// precubical sets

#[derive(Debug, Serialize, Deserialize)]
struct FaceRecord {
    cell: usize,
    front: Vec<usize>,
    back: Vec<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
struct PcsDoc {
    dims: Vec<usize>,
    faces: Vec<Vec<FaceRecord>>,
}

fn pcs_to_doc(p: &PrecubicalSet) -> PcsDoc {
    PcsDoc {
        dims: (0..p.dims()).map(|n| p.count(n)).collect(),
        faces: (1..p.dims())
            .map(|n| {
                p.cells(n)
                    .map(|x| {
                        let f = p.cell_faces(x);
                        FaceRecord {
                            cell: x.idx,
                            front: f.front.iter().map(|c| c.idx).collect(),
                            back: f.back.iter().map(|c| c.idx).collect(),
                        }
                    })
                    .collect()
            })
            .collect(),
    }
}

fn pcs_from_doc(doc: &PcsDoc) -> Result<PrecubicalSet, FormatError> {
    if doc.dims.is_empty() {
        return Ok(PcsBuilder::new().build());
    }
    if doc.faces.len() + 1 != doc.dims.len() {
        return Err(FormatError::Inconsistent(
            "faces must cover every dimension above 0".into(),
        ));
    }
    let mut b = PcsBuilder::new();
    b.add_vertices(doc.dims[0]);
    for (level, records) in doc.faces.iter().enumerate() {
        let n = level + 1;
        if records.len() != doc.dims[n] {
            return Err(FormatError::Inconsistent(format!(
                "dimension {n} declares {} cells but lists {} face records",
                doc.dims[n],
                records.len()
            )));
        }
        for (i, r) in records.iter().enumerate() {
            if r.cell != i {
                return Err(FormatError::Inconsistent(format!(
                    "face records of dimension {n} must be listed in cell order"
                )));
            }
            let to_ids = |v: &[usize]| v.iter().map(|&idx| CellId::new(n - 1, idx)).collect();
            b.add_cell(to_ids(&r.front), to_ids(&r.back))?;
        }
    }
    Ok(b.build())
}

pub fn pcs_to_json(p: &PrecubicalSet) -> String {
    serde_json::to_string_pretty(&pcs_to_doc(p)).expect("serializable")
}

pub fn pcs_from_json(s: &str) -> Result<PrecubicalSet, FormatError> {
    pcs_from_doc(&serde_json::from_str(s)?)
}

// ---------------------------------------------------------------------------
// automata and systems

#[derive(Debug, Serialize, Deserialize)]
struct HdaDoc {
    #[serde(flatten)]
    cells: PcsDoc,
    initial: usize,
    finals: Vec<usize>,
    alphabet: Vec<Label>,
    labels: Vec<Label>,
}

fn hda_to_doc(a: &Hda) -> HdaDoc {
    HdaDoc {
        cells: pcs_to_doc(&a.cells),
        initial: a.initial.idx,
        finals: a.finals.iter().map(|f| f.idx).collect(),
        alphabet: a.alphabet.iter().cloned().collect(),
        labels: a.labels.clone(),
    }
}

fn hda_from_doc(doc: HdaDoc) -> Result<Hda, FormatError> {
    let cells = pcs_from_doc(&doc.cells)?;
    Ok(Hda::new(
        cells,
        CellId::new(0, doc.initial),
        doc.finals.into_iter().map(|i| CellId::new(0, i)).collect(),
        doc.alphabet.into_iter().collect(),
        doc.labels,
    )?)
}

pub fn hda_to_json(a: &Hda) -> String {
    serde_json::to_string_pretty(&hda_to_doc(a)).expect("serializable")
}

pub fn hda_from_json(s: &str) -> Result<Hda, FormatError> {
    hda_from_doc(serde_json::from_str(s)?)
}

#[derive(Debug, Serialize, Deserialize)]
struct LtsDoc {
    #[serde(flatten)]
    hda: HdaDoc,
    relation: Vec<(Label, Label)>,
}

pub fn lts_to_json(t: &LtsSystem) -> String {
    let doc = LtsDoc {
        hda: hda_to_doc(&t.hda),
        relation: t.relation.iter().cloned().collect(),
    };
    serde_json::to_string_pretty(&doc).expect("serializable")
}

pub fn lts_from_json(s: &str) -> Result<LtsSystem, FormatError> {
    let doc: LtsDoc = serde_json::from_str(s)?;
    let hda = hda_from_doc(doc.hda)?;
    let relation: Relation = doc.relation.into_iter().collect();
    Ok(LtsSystem::new(hda, relation)?)
}

// ---------------------------------------------------------------------------
// system descriptions

#[derive(Debug, Serialize, Deserialize)]
struct VarDoc {
    name: String,
    domain: Vec<Value>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ActionDoc {
    name: String,
    assigns: Vec<(String, String)>,
}

#[derive(Debug, Serialize, Deserialize)]
struct TransitionDoc {
    from: String,
    action: String,
    to: String,
    guard: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct GraphDoc {
    declared: Vec<String>,
    locations: Vec<String>,
    initial: String,
    actions: Vec<ActionDoc>,
    transitions: Vec<TransitionDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
struct SystemDoc {
    variables: Vec<VarDoc>,
    initial: BTreeMap<String, Value>,
    graphs: Vec<GraphDoc>,
}

pub fn system_to_json(sys: &SharedVariableSystem) -> String {
    let doc = SystemDoc {
        variables: sys
            .variables
            .iter()
            .map(|v| VarDoc { name: v.name.clone(), domain: v.domain.clone() })
            .collect(),
        initial: sys.initial.clone(),
        graphs: sys
            .graphs
            .iter()
            .map(|g| GraphDoc {
                declared: g.declared.iter().cloned().collect(),
                locations: g.locations.clone(),
                initial: g.initial.clone(),
                actions: g
                    .actions
                    .iter()
                    .map(|a| ActionDoc {
                        name: a.name.clone(),
                        assigns: a
                            .assigns
                            .iter()
                            .map(|(t, e)| (t.clone(), e.to_string()))
                            .collect(),
                    })
                    .collect(),
                transitions: g
                    .transitions
                    .iter()
                    .map(|t| TransitionDoc {
                        from: t.from.clone(),
                        action: t.action.clone(),
                        to: t.to.clone(),
                        guard: t.guard.to_string(),
                    })
                    .collect(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("serializable")
}

pub fn system_from_json(s: &str) -> Result<SharedVariableSystem, FormatError> {
    let doc: SystemDoc = serde_json::from_str(s)?;
    let sys = SharedVariableSystem {
        variables: doc
            .variables
            .into_iter()
            .map(|v| VarDecl { name: v.name, domain: v.domain })
            .collect(),
        initial: doc.initial,
        graphs: doc
            .graphs
            .into_iter()
            .map(|g| {
                Ok(ProgramGraph {
                    declared: g.declared.into_iter().collect(),
                    locations: g.locations,
                    initial: g.initial,
                    actions: g
                        .actions
                        .into_iter()
                        .map(|a| {
                            Ok(Action {
                                name: a.name,
                                assigns: a
                                    .assigns
                                    .into_iter()
                                    .map(|(t, e)| Ok((t, parse_expr(&e)?)))
                                    .collect::<Result<_, ProggError>>()?,
                            })
                        })
                        .collect::<Result<_, ProggError>>()?,
                    transitions: g
                        .transitions
                        .into_iter()
                        .map(|t| {
                            Ok(Transition {
                                from: t.from,
                                action: t.action,
                                to: t.to,
                                guard: parse_expr(&t.guard)?,
                            })
                        })
                        .collect::<Result<_, ProggError>>()?,
                })
            })
            .collect::<Result<_, ProggError>>()?,
    };
    sys.validate()?;
    Ok(sys)
}

// ---------------------------------------------------------------------------
// DOT export

/// The 1-skeleton as a DOT digraph, edges carrying their labels. Cells of
/// dimension 2 are recorded as comment lines naming their four faces.
pub fn hda_to_dot(a: &Hda) -> String {
    let mut out = String::from("digraph hda {\n");
    for v in a.cells.cells(0) {
        let mut attrs = Vec::new();
        if v == a.initial {
            attrs.push("shape=doublecircle".to_string());
        }
        if a.finals.contains(&v) {
            attrs.push("peripheries=3".to_string());
        }
        let attrs = if attrs.is_empty() {
            String::new()
        } else {
            format!(" [{}]", attrs.join(", "))
        };
        out.push_str(&format!("  v{}{};\n", v.idx, attrs));
    }
    for e in a.cells.cells(1) {
        out.push_str(&format!(
            "  v{} -> v{} [label=\"{}\"];\n",
            a.cells.edge_src(e).idx,
            a.cells.edge_dst(e).idx,
            a.label(e)
        ));
    }
    for x in a.cells.cells(2) {
        let f = a.cells.cell_faces(x);
        out.push_str(&format!(
            "  // square {}: front = e{}, e{}; back = e{}, e{}\n",
            x.idx, f.front[0].idx, f.front[1].idx, f.back[0].idx, f.back[1].idx
        ));
    }
    out.push_str("}\n");
    out
}
