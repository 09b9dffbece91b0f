//! Breadth-first construction of a neighbourhood in a stable AR component.

use std::collections::{BTreeMap, VecDeque};

use rayon::prelude::*;
use serde::Serialize;

use super::{ar_sequence_with, tau_inverse, AlmostSplitSequence, ArOptions};
use crate::decomp::{is_iso_with, Certificate, IsoKey, IsoOutcome};
use crate::modcat::Module;
use crate::Result;

/// One iso-class in the component.
#[derive(Clone, Debug)]
pub struct Vertex {
    pub id: usize,
    pub module: Module,
    pub key: IsoKey,
    pub certificate: Certificate,
    /// Undirected distance from the root in the explored graph.
    pub distance: usize,
    /// Valence: nonprojective summands of the AR middle term, once computed.
    pub alpha: Option<usize>,
    pub ar: Option<AlmostSplitSequence>,
}

impl Vertex {
    /// `v<id>`, followed by the module name when it says more.
    pub fn name(&self) -> String {
        match self.module.name() {
            Some(n) if n != format!("v{}", self.id) => format!("v{}={n}", self.id),
            _ => format!("v{}", self.id),
        }
    }

    pub fn expanded(&self) -> bool {
        self.ar.is_some()
    }
}

/// An arrow `from -> to` (an irreducible map) with its multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub multiplicity: usize,
    /// Read off the AR sequence ending in `to` (rather than inferred from
    /// the mesh at `τ to`).
    pub from_ar: bool,
}

/// A radius-bounded piece of a stable AR component.
#[derive(Clone, Debug)]
pub struct ComponentGraph {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    pub radius: usize,
    /// Discovered vertices whose AR sequence was not computed.
    pub frontier: Vec<usize>,
    pub budget_exhausted: bool,
    /// Modules left out because they were only probably indecomposable.
    pub rejected: Vec<String>,
    /// Pairs where the isomorphism test was inconclusive; kept distinct.
    pub unresolved: usize,
    /// `(Y, τ⁻¹Y)` vertex pairs met while applying the mesh.
    pub tau_pairs: Vec<(usize, usize)>,
}

#[derive(Serialize)]
struct VertexJson {
    id: usize,
    key: String,
    name: String,
    dim: usize,
    alpha: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ql: Option<usize>,
    certified: bool,
}

#[derive(Serialize)]
struct ComponentJson {
    vertices: Vec<VertexJson>,
    edges: Vec<[usize; 2]>,
    radius: usize,
    frontier: Vec<usize>,
    budget_exhausted: bool,
}

impl ComponentGraph {
    pub fn root(&self) -> &Vertex {
        &self.vertices[0]
    }

    pub fn vertex(&self, id: usize) -> &Vertex {
        &self.vertices[id]
    }

    /// Vertex ids with arrows into `id`, with multiplicity.
    pub fn predecessors(&self, id: usize) -> Vec<(usize, usize)> {
        self.edges.iter().filter(|e| e.to == id).map(|e| (e.from, e.multiplicity)).collect()
    }

    pub fn successors(&self, id: usize) -> Vec<usize> {
        self.edges.iter().filter(|e| e.from == id).map(|e| e.to).collect()
    }

    fn neighbours(&self, id: usize) -> Vec<usize> {
        let mut out: Vec<usize> =
            self.edges.iter().filter_map(|e| if e.from == id { Some(e.to) } else if e.to == id { Some(e.from) } else { None }).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Whether the vertex has all its neighbours recorded: its own AR
    /// sequence gives the predecessors and the mesh gives the successors.
    fn complete(&self, id: usize) -> bool {
        self.vertices[id].expanded()
    }

    /// Quasi-lengths propagated through meshes: a vertex of valence 1 has
    /// quasi-length 0, the predecessor of a boundary vertex has 1, and when
    /// the AR sequence ending in `Y` (quasi-length `k`) has summands `Z, X`
    /// with `ql(Z) = k - 1`, then `ql(X) = k + 1`; `τ` preserves it. Vertices that would get
    /// two different values are left without one.
    pub fn quasi_lengths(&self) -> Vec<Option<usize>> {
        let n = self.vertices.len();
        let mut ql: Vec<Option<usize>> = vec![None; n];
        let mut poisoned = vec![false; n];
        let preds: Vec<Vec<usize>> = (0..n)
            .map(|id| {
                let mut p = Vec::new();
                for e in self.edges.iter().filter(|e| e.to == id && e.from_ar) {
                    p.extend(std::iter::repeat_n(e.from, e.multiplicity));
                }
                p
            })
            .collect();
        let mut assign = |ql: &mut Vec<Option<usize>>, v: usize, value: usize| -> bool {
            match ql[v] {
                None if !poisoned[v] => {
                    ql[v] = Some(value);
                    true
                }
                Some(old) if old != value => {
                    ql[v] = None;
                    poisoned[v] = true;
                    true
                }
                _ => false,
            }
        };
        for v in &self.vertices {
            if v.alpha == Some(1) {
                assign(&mut ql, v.id, 0);
            }
        }
        let mut changed = true;
        while changed {
            changed = false;
            for &(y, z) in &self.tau_pairs {
                if let Some(k) = ql[y] {
                    changed |= assign(&mut ql, z, k);
                }
                if let Some(k) = ql[z] {
                    changed |= assign(&mut ql, y, k);
                }
            }
            for y in 0..n {
                let (Some(k), Some(alpha)) = (ql[y], self.vertices[y].alpha) else { continue };
                let p = &preds[y];
                if alpha == 1 && k == 0 && p.len() == 1 {
                    changed |= assign(&mut ql, p[0], 1);
                } else if alpha == 2 && k >= 1 && p.len() == 2 {
                    for (a, b) in [(p[0], p[1]), (p[1], p[0])] {
                        if ql[a] == Some(k - 1) && ql[b] != Some(k - 1) {
                            changed |= assign(&mut ql, b, k + 1);
                        }
                    }
                }
            }
        }
        ql
    }

    pub fn quasi_length(&self, id: usize) -> Option<usize> {
        self.quasi_lengths()[id]
    }

    /// Undirected distance to the nearest valence-1 vertex, when every
    /// vertex closer than that is expanded (so none of them is a boundary
    /// vertex in disguise).
    pub fn quasi_length_by_distance(&self, id: usize) -> Option<usize> {
        let mut dist = vec![usize::MAX; self.vertices.len()];
        dist[id] = 0;
        let mut queue = VecDeque::from([id]);
        while let Some(v) = queue.pop_front() {
            match self.vertices[v].alpha {
                Some(1) => return Some(dist[v]),
                None => return None,
                Some(_) => {}
            }
            if !self.complete(v) {
                return None;
            }
            for w in self.neighbours(v) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        None
    }

    /// Every arrow inferred from the mesh at an expanded target is also
    /// read off that target's AR sequence.
    pub fn mesh_consistent(&self) -> bool {
        self.edges.iter().filter(|e| !e.from_ar && self.vertices[e.to].expanded()).all(|e| {
            self.edges.iter().any(|o| o.from_ar && o.from == e.from && o.to == e.to && o.multiplicity == e.multiplicity)
        })
    }

    pub fn max_alpha(&self) -> Option<usize> {
        self.vertices.iter().filter_map(|v| v.alpha).max()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut edges: Vec<[usize; 2]> = self.edges.iter().map(|e| [e.from, e.to]).collect();
        edges.sort_unstable();
        edges.dedup();
        let qls = self.quasi_lengths();
        let doc = ComponentJson {
            vertices: self
                .vertices
                .iter()
                .map(|v| VertexJson {
                    id: v.id,
                    key: v.key.to_string(),
                    name: v.name(),
                    dim: v.module.dim(),
                    alpha: v.alpha,
                    ql: qls[v.id],
                    certified: v.certificate == Certificate::Certified,
                })
                .collect(),
            edges,
            radius: self.radius,
            frontier: self.frontier.clone(),
            budget_exhausted: self.budget_exhausted,
        };
        serde_json::to_value(doc).expect("component serializes")
    }

    /// One `from to` pair of vertex names per line.
    pub fn edge_list(&self) -> String {
        let mut out = String::new();
        for e in &self.edges {
            if e.from_ar || !self.vertices[e.to].expanded() {
                out.push_str(&format!("{} {}\n", self.vertices[e.from].name(), self.vertices[e.to].name()));
            }
        }
        out
    }
}

struct Builder {
    graph: ComponentGraph,
    opts: ArOptions,
}

impl Builder {
    /// Id of the vertex isomorphic to `m`, inserting it if new.
    fn intern(&mut self, m: &Module, cert: Certificate, distance: usize) -> Option<usize> {
        if cert == Certificate::Probable && !self.opts.accept_probable {
            self.graph.rejected.push(m.iso_key().to_string());
            return None;
        }
        let key = m.iso_key().clone();
        for v in &self.graph.vertices {
            if v.key != key {
                continue;
            }
            match is_iso_with(&v.module, m, self.opts.seed, self.opts.budget) {
                IsoOutcome::Iso(_) => return Some(v.id),
                IsoOutcome::NotIso => {}
                IsoOutcome::Unknown(_) => self.graph.unresolved += 1,
            }
        }
        let id = self.graph.vertices.len();
        let module = match m.name() {
            Some(_) => m.clone(),
            None => m.clone().with_name(format!("v{id}")),
        };
        self.graph.vertices.push(Vertex { id, module, key, certificate: cert, distance, alpha: None, ar: None });
        Some(id)
    }

    fn add_edge(&mut self, from: usize, to: usize, multiplicity: usize, from_ar: bool) {
        if let Some(e) = self.graph.edges.iter_mut().find(|e| e.from == from && e.to == to && e.from_ar == from_ar) {
            e.multiplicity = e.multiplicity.max(multiplicity);
            return;
        }
        self.graph.edges.push(Edge { from, to, multiplicity, from_ar });
    }
}

/// Explores the component of `M` breadth-first up to `radius`, computing at
/// most `budget` AR sequences. Predecessors of `X` are the nonprojective
/// summands `Y` of its AR middle term; successors are the `τ⁻¹ Y`.
pub fn build_component(m: &Module, radius: usize, budget: usize, opts: ArOptions) -> Result<ComponentGraph> {
    let cert = crate::decomp::indecomposable(m, opts.seed)
        .ok_or_else(|| crate::Error::InvalidInput("component root must be indecomposable".into()))?;
    if m.is_projective() {
        return Err(crate::Error::InvalidInput("component root must be nonprojective".into()));
    }
    if cert == Certificate::Probable && !opts.accept_probable {
        return Err(crate::Error::InvalidInput("component root is only probably indecomposable".into()));
    }
    let graph = ComponentGraph {
        vertices: Vec::new(),
        edges: Vec::new(),
        radius,
        frontier: Vec::new(),
        budget_exhausted: false,
        rejected: Vec::new(),
        unresolved: 0,
        tau_pairs: Vec::new(),
    };
    let mut b = Builder { graph, opts };
    b.intern(m, cert, 0);
    let mut layer = vec![0usize];
    let mut computed = 0usize;
    for depth in 0..radius {
        if layer.is_empty() {
            break;
        }
        let room = budget.saturating_sub(computed);
        if room < layer.len() {
            b.graph.budget_exhausted = true;
            layer.truncate(room);
        }
        computed += layer.len();
        let modules: Vec<Module> = layer.iter().map(|&id| b.graph.vertices[id].module.clone()).collect();
        let results: Vec<Result<(AlmostSplitSequence, Vec<(Module, Module, usize, Certificate)>)>> = modules
            .par_iter()
            .map(|x| {
                let ar = ar_sequence_with(x, opts)?;
                let mut preds = Vec::new();
                for s in ar.decomposition.nonprojective() {
                    preds.push((s.module.clone(), tau_inverse(&s.module)?, s.multiplicity, s.certificate));
                }
                Ok((ar, preds))
            })
            .collect();
        let mut next = Vec::new();
        for (&x, res) in layer.iter().zip(results) {
            let (ar, preds) = res?;
            b.graph.vertices[x].alpha = Some(ar.alpha());
            b.graph.vertices[x].ar = Some(ar);
            for (y, ty, mult, c) in preds {
                let known = b.graph.vertices.len();
                let yi = b.intern(&y, c, depth + 1);
                if let Some(yi) = yi {
                    b.add_edge(yi, x, mult, true);
                    if yi >= known {
                        next.push(yi);
                    }
                }
                // Mesh: Y -> X gives X -> τ⁻¹Y.
                let known = b.graph.vertices.len();
                if let Some(zi) = b.intern(&ty, c, depth + 1) {
                    b.add_edge(x, zi, mult, false);
                    if let Some(yi) = yi {
                        if !b.graph.tau_pairs.contains(&(yi, zi)) {
                            b.graph.tau_pairs.push((yi, zi));
                        }
                    }
                    if zi >= known {
                        next.push(zi);
                    }
                }
            }
        }
        layer = next;
    }
    b.graph.frontier = b.graph.vertices.iter().filter(|v| !v.expanded()).map(|v| v.id).collect();
    Ok(b.graph)
}

/// Multiplicity-free view of the predecessor relation, for cones.
pub(crate) fn predecessor_map(g: &ComponentGraph) -> BTreeMap<usize, Vec<usize>> {
    let mut out: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for e in &g.edges {
        let list = out.entry(e.to).or_default();
        if !list.contains(&e.from) {
            list.push(e.from);
        }
    }
    for v in out.values_mut() {
        v.sort_unstable();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::workbench::fixtures;

    #[test]
    fn truncated_tube() {
        let a = fixtures::truncated_polynomial(3, 3);
        let g = build_component(&fixtures::truncated_module(&a, 1), 3, 64, ArOptions::default()).unwrap();
        assert_eq!(g.vertices.len(), 2);
        assert!(g.frontier.is_empty());
        assert!(g.mesh_consistent());
        let b = fixtures::truncated_polynomial(2, 2);
        let g = build_component(&b.simple(0), 3, 64, ArOptions::default()).unwrap();
        assert_eq!(g.vertices.len(), 1);
        assert!(g.edges.iter().all(|e| e.from == 0 && e.to == 0));
    }

    #[test]
    fn liu_schulz_fragment() {
        let r = fixtures::liu_schulz_algebra(2);
        let m = fixtures::liu_schulz_module(&r);
        let g = build_component(&m, 3, 64, ArOptions::default()).unwrap();
        assert_eq!(g.root().alpha, Some(1));
        assert_eq!(g.quasi_length(0), Some(0));
        let qls = g.quasi_lengths();
        for v in &g.vertices {
            if let Some(d) = g.quasi_length_by_distance(v.id) {
                assert_eq!(qls[v.id], Some(d));
            }
        }
        assert!(qls.contains(&Some(3)));
        assert!(g.max_alpha().unwrap() <= 2);
        assert!(g.mesh_consistent());
        let json = g.to_json();
        assert_eq!(json["radius"], 3);
        assert!(!g.edge_list().is_empty());
    }
}
