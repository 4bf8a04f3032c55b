//! Shared fixtures for the integration suites: loaders for the shipped
//! system files and seeded random generators for small systems.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use rand::Rng;

use hdamodel::format;
use hdamodel::hda::{Hda, Label};
use hdamodel::lts::{LtsSystem, Relation};
use hdamodel::pcs::PcsBuilder;
use hdamodel::progg::SharedVariableSystem;

pub fn systems_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../systems")
}

pub fn load_system(name: &str) -> SharedVariableSystem {
    let path = systems_dir().join(name);
    let text = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("cannot read {}: {e}", path.display()));
    format::system_from_json(&text).unwrap_or_else(|e| panic!("cannot parse {name}: {e}"))
}

pub fn all_system_files() -> Vec<&'static str> {
    vec![
        "incdec1.json",
        "incdec1_guarded.json",
        "incdec1_y.json",
        "incdec2.json",
        "incdec2_guarded.json",
        "incdec2_disjoint.json",
        "incdec3_disjoint.json",
    ]
}

/// A random extensional transition system with at most 5 states, at most
/// 8 edges over a 4-letter alphabet, and a random asymmetric relation over
/// the labels present.
pub fn random_lts(rng: &mut impl Rng) -> LtsSystem {
    let letters = ["a", "b", "c", "d"];
    let n_states = rng.gen_range(1..=5);
    let n_edges = rng.gen_range(0..=8);
    let mut b = PcsBuilder::new();
    let vs = b.add_vertices(n_states);
    let mut seen = BTreeSet::new();
    let mut labels = Vec::new();
    for _ in 0..n_edges {
        let src = rng.gen_range(0..n_states);
        let dst = rng.gen_range(0..n_states);
        let l = Label::atom(letters[rng.gen_range(0..letters.len())]);
        if seen.insert((src, dst, l.clone())) {
            b.add_edge(vs[src], vs[dst]).unwrap();
            labels.push(l);
        }
    }
    let alphabet: BTreeSet<Label> = labels.iter().cloned().collect();
    let hda = Hda::new(b.build(), vs[0], BTreeSet::new(), alphabet.clone(), labels).unwrap();
    let present: Vec<&Label> = alphabet.iter().collect();
    let mut relation: Relation = BTreeSet::new();
    for i in 0..present.len() {
        for j in i + 1..present.len() {
            match rng.gen_range(0..3) {
                0 => {}
                1 => {
                    relation.insert((present[i].clone(), present[j].clone()));
                }
                _ => {
                    relation.insert((present[j].clone(), present[i].clone()));
                }
            }
        }
    }
    LtsSystem::new(hda, relation).unwrap()
}
