//! The SL(2,Z) orbit graph of an origami and its cusp data: widths,
//! conjugating words, cusp-relative surfaces, parabolic generators.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::origami::{HolonomyOracle, Origami};
use crate::words::{Letter, Mat2, Word};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OrbitError {
    #[error("orbit exceeds the configured cap of {0} vertices")]
    OrbitTooLarge(usize),
    #[error("Veech group does not contain -I; this pipeline requires it")]
    UnsupportedSurface,
}

pub const DEFAULT_ORBIT_CAP: usize = 1_000_000;

/// Directed orbit graph under the S and T actions, vertices in BFS
/// discovery order, deduplicated by canonical form.
#[derive(Debug)]
pub struct OrbitGraph {
    vertices: Vec<Origami>,
    index_of: HashMap<Origami, usize>,
    s_next: Vec<usize>,
    t_next: Vec<usize>,
    parent: Vec<Option<(usize, Letter)>>,
}

impl OrbitGraph {
    pub fn build(o: &Origami, cap: usize) -> Result<OrbitGraph, OrbitError> {
        let base = o.canonical_form();
        let mut vertices = vec![base.clone()];
        let mut index_of = HashMap::new();
        index_of.insert(base, 0usize);
        let mut s_next: Vec<usize> = Vec::new();
        let mut t_next: Vec<usize> = Vec::new();
        let mut parent: Vec<Option<(usize, Letter)>> = vec![None];
        let mut head = 0;
        while head < vertices.len() {
            let current = vertices[head].clone();
            let mut targets = [0usize; 2];
            for (slot, letter) in [Letter::S, Letter::T].into_iter().enumerate() {
                let image = current.act_letter(letter).canonical_form();
                let idx = match index_of.get(&image) {
                    Some(&i) => i,
                    None => {
                        let i = vertices.len();
                        if i >= cap {
                            return Err(OrbitError::OrbitTooLarge(cap));
                        }
                        vertices.push(image.clone());
                        index_of.insert(image, i);
                        parent.push(Some((head, letter)));
                        i
                    }
                };
                targets[slot] = idx;
            }
            s_next.push(targets[0]);
            t_next.push(targets[1]);
            head += 1;
        }
        Ok(OrbitGraph {
            vertices,
            index_of,
            s_next,
            t_next,
            parent,
        })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn base(&self) -> usize {
        0
    }

    pub fn vertex(&self, i: usize) -> &Origami {
        &self.vertices[i]
    }

    pub fn s_next(&self, i: usize) -> usize {
        self.s_next[i]
    }

    pub fn t_next(&self, i: usize) -> usize {
        self.t_next[i]
    }

    pub fn find(&self, o: &Origami) -> Option<usize> {
        self.index_of.get(&o.canonical_form()).copied()
    }

    /// T-cycles in discovery order of their earliest vertex; each cycle
    /// starts at that vertex and follows T-edges.
    pub fn t_cycles(&self) -> Vec<Vec<usize>> {
        let mut assigned = vec![false; self.len()];
        let mut cycles = Vec::new();
        for start in 0..self.len() {
            if assigned[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut v = start;
            loop {
                assigned[v] = true;
                cycle.push(v);
                v = self.t_next[v];
                if v == start {
                    break;
                }
                debug_assert!(!assigned[v], "T-edges must permute the vertices");
            }
            cycles.push(cycle);
        }
        cycles
    }

    /// Word w with act_word(base, w) isomorphic to vertex v, read off the
    /// BFS tree (leftmost letter acts last).
    pub fn word_to_vertex(&self, v: usize) -> Word {
        let mut letters = Vec::new();
        let mut cur = v;
        while let Some((p, l)) = self.parent[cur] {
            letters.push(l);
            cur = p;
        }
        Word(letters)
    }

    /// Graph description in DOT format with S/T edge labels.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph orbit {\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let _ = writeln!(out, "  v{} [label=\"{}\"];", i, v.to_text());
        }
        for i in 0..self.len() {
            let _ = writeln!(out, "  v{} -> v{} [label=\"S\"];", i, self.s_next[i]);
            let _ = writeln!(out, "  v{} -> v{} [label=\"T\"];", i, self.t_next[i]);
        }
        out.push_str("}\n");
        out
    }
}

/// True iff -I = S^2 stabilizes the surface.
pub fn contains_minus_identity(o: &Origami) -> bool {
    o.act_s().act_s().is_isomorphic(o)
}

/// One cusp of the Veech group: conjugating word C (so the parabolic
/// generator is C T^width C^-1), the cusp width, the cusp-relative
/// surface C^-1(base), and its horizontal scaling factor.
#[derive(Clone, Debug)]
pub struct CuspDatum {
    pub word: Word,
    pub width: usize,
    pub scaling_d: i64,
    pub cusp_relative: Origami,
    /// orbit graph vertex realizing the cusp-relative
    pub vertex: usize,
}

#[derive(Serialize)]
pub struct CuspExport {
    pub word: String,
    pub width: usize,
    pub scaling_d: String,
    pub cusp_relative: String,
}

impl CuspDatum {
    pub fn parabolic_word(&self) -> Word {
        let mut w = self.word.clone();
        for _ in 0..self.width {
            w.0.push(Letter::T);
        }
        w.0.extend(self.word.inverse().0);
        w
    }

    /// The parabolic generator C T^width C^-1 as an integer matrix.
    pub fn parabolic_matrix(&self) -> Mat2 {
        self.parabolic_word().matrix()
    }

    pub fn export(&self) -> CuspExport {
        CuspExport {
            word: self.word.to_string(),
            width: self.width,
            scaling_d: self.scaling_d.to_string(),
            cusp_relative: self.cusp_relative.to_text(),
        }
    }
}

/// Cusp datum for a chosen T-cycle vertex: the conjugating word comes
/// from the BFS tree path, so cusp_relative = word^-1(base) is the vertex
/// surface itself.
pub fn cusp_datum_for_vertex(graph: &OrbitGraph, rep: usize, width: usize) -> CuspDatum {
    let path = graph.word_to_vertex(rep);
    // cusp_relative = C^-1(base) with C = path^-1; spelled over
    // {S, T, T^-1} using S = S^-1 in PSL (valid since -I is present).
    let word = path.inverse().psl_normalized();
    let cusp_relative = graph.vertex(rep).clone();
    let oracle = HolonomyOracle::new(cusp_relative.clone());
    let scaling_d = oracle.min_horizontal_spacing();
    CuspDatum {
        word,
        width,
        scaling_d,
        cusp_relative,
        vertex: rep,
    }
}

/// Build cusp data choosing, in each T-cycle, the representative returned
/// by `select` (given the cycle's vertices in T-order). The BFS-first rule
/// is `|cycle, _| cycle[0]`.
pub fn cusp_data_with<F>(graph: &OrbitGraph, mut select: F) -> Result<Vec<CuspDatum>, OrbitError>
where
    F: FnMut(&[usize], &OrbitGraph) -> usize,
{
    if !contains_minus_identity(graph.vertex(graph.base())) {
        return Err(OrbitError::UnsupportedSurface);
    }
    let mut cusps = Vec::new();
    for cycle in graph.t_cycles() {
        let rep = select(&cycle, graph);
        debug_assert!(cycle.contains(&rep));
        cusps.push(cusp_datum_for_vertex(graph, rep, cycle.len()));
    }
    Ok(cusps)
}

/// Cusp data with BFS-first representatives.
pub fn cusp_data(graph: &OrbitGraph) -> Result<Vec<CuspDatum>, OrbitError> {
    cusp_data_with(graph, |cycle, _| cycle[0])
}
