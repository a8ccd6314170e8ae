//! Cayley graphs, circuits on them, and the pulse sequences they define.
//!
//! Walking an edge `g → γ g` applies the pulse `γ`. A sequence
//! `τ − P₁ − τ − P₂ − ⋯ − τ − P_N` therefore visits, during its `k`-th
//! waiting interval, the vertex `U_k = P_{k−1} ⋯ P₁`, and the first-order
//! average Hamiltonian is the mean of `π(U_k)† H π(U_k)`.

use std::collections::VecDeque;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::group::{FiniteGroup, Generator, OrientationRecord, QuotientGroup, Representation};
use crate::mat::{from_pairs, identity, is_hermitian, is_unitary, to_pairs, ComplexMatrix};
use crate::{Error, Result};

/// Default node-expansion budget for the Hamiltonian search.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Directed colored graph with one out-edge per color at every vertex.
#[derive(Debug, Clone)]
pub struct CayleyGraph {
    /// Pulse for each color.
    pub colors: Vec<Generator>,
    /// Matrix representative of each vertex; vertex 0 is the identity.
    pub vertices: Vec<ComplexMatrix>,
    /// `next[v][c]`: vertex reached from `v` along color `c`.
    pub next: Vec<Vec<usize>>,
    pub group_name: String,
}

/// Edge `from → to` of color `color`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub color: usize,
}

impl CayleyGraph {
    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_colors(&self) -> usize {
        self.colors.len()
    }

    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::with_capacity(self.n_vertices() * self.n_colors());
        for (v, row) in self.next.iter().enumerate() {
            for (c, &w) in row.iter().enumerate() {
                out.push(Edge { from: v, to: w, color: c });
            }
        }
        out
    }

    fn check_reachable(&self) -> Result<()> {
        let mut seen = vec![false; self.n_vertices()];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &w in &self.next[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        if count == self.n_vertices() {
            Ok(())
        } else {
            Err(Error::NotGenerating)
        }
    }

    /// Cayley graph of `g` colored by arbitrary elements of `g`.
    pub fn from_elements(g: &FiniteGroup, colors: Vec<Generator>) -> Result<Self> {
        let idx: Vec<usize> = colors
            .iter()
            .map(|c| g.find(&c.matrix).ok_or_else(|| Error::InvalidInput(format!("pulse {} is not in {}", c.label, g.name()))))
            .collect::<Result<_>>()?;
        let next = (0..g.order()).map(|v| idx.iter().map(|&c| g.mul(c, v)).collect()).collect();
        let graph = CayleyGraph { colors, vertices: g.elements().to_vec(), next, group_name: g.name().to_string() };
        graph.check_reachable()?;
        Ok(graph)
    }

    /// Cayley graph of `G/K`; each color acts through its coset.
    pub fn from_quotient(parent: &FiniteGroup, q: &QuotientGroup, colors: Vec<Generator>, name: impl Into<String>) -> Result<Self> {
        let cosets: Vec<usize> = colors
            .iter()
            .map(|c| {
                q.coset_of_matrix(parent, &c.matrix)
                    .ok_or_else(|| Error::InvalidInput(format!("pulse {} is not in {}", c.label, parent.name())))
            })
            .collect::<Result<_>>()?;
        let next = (0..q.order()).map(|v| cosets.iter().map(|&c| q.mul(c, v)).collect()).collect();
        let graph = CayleyGraph { colors, vertices: q.representatives.clone(), next, group_name: name.into() };
        graph.check_reachable()?;
        Ok(graph)
    }
}

/// Cayley graph of `g` colored by a subset of its own generators.
pub fn build_cayley(g: &FiniteGroup, generator_indices: &[usize]) -> Result<CayleyGraph> {
    let colors = generator_indices
        .iter()
        .map(|&i| g.generators().get(i).cloned().ok_or_else(|| Error::InvalidInput(format!("no generator {i}"))))
        .collect::<Result<Vec<_>>>()?;
    if colors.is_empty() && g.order() > 1 {
        return Err(Error::NotGenerating);
    }
    CayleyGraph::from_elements(g, colors)
}

/// Hierholzer's algorithm with out-edges visited in a seeded random order.
pub fn eulerian_circuit(graph: &CayleyGraph, start: usize, seed: u64) -> Result<Vec<Edge>> {
    if start >= graph.n_vertices() {
        return Err(Error::InvalidInput(format!("start vertex {start} out of range")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pending: Vec<Vec<usize>> = (0..graph.n_vertices())
        .map(|_| {
            let mut colors: Vec<usize> = (0..graph.n_colors()).collect();
            colors.shuffle(&mut rng);
            colors
        })
        .collect();
    // Stack of (vertex, color of the edge used to reach it).
    let mut stack: Vec<(usize, Option<usize>)> = vec![(start, None)];
    let mut circuit: Vec<Edge> = Vec::with_capacity(graph.n_vertices() * graph.n_colors());
    while let Some(&(v, _)) = stack.last() {
        if let Some(c) = pending[v].pop() {
            stack.push((graph.next[v][c], Some(c)));
        } else {
            let (w, c) = stack.pop().expect("stack is non-empty");
            if let (Some(c), Some(&(u, _))) = (c, stack.last()) {
                circuit.push(Edge { from: u, to: w, color: c });
            }
        }
    }
    circuit.reverse();
    Ok(circuit)
}

/// Backtracking search for a directed Hamiltonian cycle through `start`,
/// trying successors with the fewest unvisited onward moves first.
///
/// Returns the vertices in visiting order (the closing edge back to `start`
/// is implied), `Ok(None)` when the search space is exhausted, or
/// `BudgetExhausted` when `budget` expansions did not settle the question.
pub fn hamiltonian_circuit(graph: &CayleyGraph, start: usize, budget: u64) -> Result<Option<Vec<usize>>> {
    let n = graph.n_vertices();
    if start >= n {
        return Err(Error::InvalidInput(format!("start vertex {start} out of range")));
    }
    if n == 1 {
        return Ok(Some(vec![start]));
    }
    let mut visited = vec![false; n];
    visited[start] = true;
    let mut path = vec![start];
    // Candidate lists per depth, consumed from the back.
    let mut frames: Vec<Vec<usize>> = vec![ordered_successors(graph, start, &visited)];
    let mut expansions: u64 = 0;
    while let Some(frame) = frames.last_mut() {
        let Some(w) = frame.pop() else {
            frames.pop();
            let v = path.pop().expect("path tracks frames");
            visited[v] = false;
            if path.is_empty() {
                break;
            }
            continue;
        };
        expansions += 1;
        if expansions > budget {
            return Err(Error::BudgetExhausted(budget));
        }
        visited[w] = true;
        path.push(w);
        if path.len() == n {
            if graph.next[w].contains(&start) {
                return Ok(Some(path));
            }
            visited[w] = false;
            path.pop();
            continue;
        }
        let succ = ordered_successors(graph, w, &visited);
        frames.push(succ);
    }
    Ok(None)
}

fn ordered_successors(graph: &CayleyGraph, v: usize, visited: &[bool]) -> Vec<usize> {
    let mut succ: Vec<usize> = Vec::new();
    for &w in &graph.next[v] {
        if !visited[w] && !succ.contains(&w) {
            succ.push(w);
        }
    }
    let onward = |w: usize| graph.next[w].iter().filter(|&&x| !visited[x] && x != w).count();
    // Popped from the back: most constrained last in the vector.
    succ.sort_by_key(|&w| std::cmp::Reverse(onward(w)));
    succ
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SequenceKind {
    Eulerian,
    Hamiltonian,
    Literal,
    Nested,
}

#[derive(Debug, Clone)]
pub struct Pulse {
    pub label: String,
    pub unitary: ComplexMatrix,
}

/// `τ − P₁ − τ − P₂ − ⋯ − τ − P_N` with ideal instantaneous pulses.
#[derive(Debug, Clone)]
pub struct PulseSequence {
    pub kind: SequenceKind,
    pub tau: f64,
    pub dim: usize,
    pub group: Option<String>,
    pub orientation: Option<OrientationRecord>,
    pub pulses: Vec<Pulse>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct PulseRecord {
    label: String,
    unitary: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct GroupRef {
    name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    orientation: Option<OrientationRecord>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct SequenceFile {
    kind: SequenceKind,
    tau: f64,
    dim: usize,
    group: GroupRef,
    pulses: Vec<PulseRecord>,
}

impl PulseSequence {
    /// Sequence from explicit pulses, checking sizes and unitarity.
    pub fn literal(pulses: Vec<Pulse>, dim: usize, tau: f64) -> Result<Self> {
        for p in &pulses {
            if p.unitary.shape() != (dim, dim) {
                return Err(Error::DimensionMismatch(format!("pulse {} is not {dim}x{dim}", p.label)));
            }
            if !is_unitary(&p.unitary) {
                return Err(Error::NonUnitary(crate::mat::frobenius(&(p.unitary.adjoint() * &p.unitary - identity(dim)))));
            }
        }
        Ok(PulseSequence { kind: SequenceKind::Literal, tau, dim, group: None, orientation: None, pulses })
    }

    /// Sequence spelled by generator labels, e.g. `["X", "V", "X", "V"]`.
    pub fn from_labels(labels: &[&str], alphabet: &[Generator], tau: f64) -> Result<Self> {
        let dim = alphabet.first().map(|g| g.matrix.nrows()).unwrap_or(1);
        let pulses = labels
            .iter()
            .map(|l| {
                alphabet
                    .iter()
                    .find(|g| g.label == *l)
                    .map(|g| Pulse { label: g.label.clone(), unitary: g.matrix.clone() })
                    .ok_or_else(|| Error::InvalidInput(format!("unknown pulse label {l}")))
            })
            .collect::<Result<Vec<_>>>()?;
        PulseSequence::literal(pulses, dim, tau)
    }

    pub fn len(&self) -> usize {
        self.pulses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pulses.is_empty()
    }

    /// Waiting intervals; an empty sequence is a single wait.
    pub fn intervals(&self) -> usize {
        self.pulses.len().max(1)
    }

    /// `P_N ⋯ P₁`.
    pub fn net_unitary(&self) -> ComplexMatrix {
        self.pulses.iter().fold(identity(self.dim), |acc, p| &p.unitary * acc)
    }

    pub fn with_tau(mut self, tau: f64) -> Self {
        self.tau = tau;
        self
    }

    pub fn to_json(&self) -> Result<String> {
        let file = SequenceFile {
            kind: self.kind,
            tau: self.tau,
            dim: self.dim,
            group: GroupRef { name: self.group.clone(), orientation: self.orientation.clone() },
            pulses: self.pulses.iter().map(|p| PulseRecord { label: p.label.clone(), unitary: to_pairs(&p.unitary) }).collect(),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SequenceFile = serde_json::from_str(text)?;
        let pulses = file
            .pulses
            .into_iter()
            .map(|p| Ok(Pulse { label: p.label, unitary: from_pairs(&p.unitary)? }))
            .collect::<Result<Vec<_>>>()?;
        let mut seq = PulseSequence::literal(pulses, file.dim, file.tau)?;
        seq.kind = file.kind;
        seq.group = file.group.name;
        seq.orientation = file.group.orientation;
        Ok(seq)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        PulseSequence::from_json(&std::fs::read_to_string(path)?)
    }
}

/// A closed walk on a Cayley graph, as edges or as vertices.
#[derive(Debug, Clone)]
pub enum Walk {
    Edges(Vec<Edge>),
    /// Hamiltonian cycle; the edge back to the first vertex is implied.
    Cycle(Vec<usize>),
}

/// Pulses along a walk: the color of each edge, in order.
pub fn emit_sequence(walk: &Walk, graph: &CayleyGraph, tau: f64) -> Result<PulseSequence> {
    let dim = graph.colors.first().map(|c| c.matrix.nrows()).unwrap_or_else(|| graph.vertices[0].nrows());
    let (kind, colors) = match walk {
        Walk::Edges(edges) => {
            for pair in edges.windows(2) {
                if pair[0].to != pair[1].from {
                    return Err(Error::InvalidInput("edges do not form a walk".into()));
                }
            }
            (SequenceKind::Eulerian, edges.iter().map(|e| e.color).collect::<Vec<_>>())
        }
        Walk::Cycle(vs) => {
            let mut colors = Vec::new();
            if vs.len() > 1 {
                for k in 0..vs.len() {
                    let (v, w) = (vs[k], vs[(k + 1) % vs.len()]);
                    let c = graph.next[v]
                        .iter()
                        .position(|&x| x == w)
                        .ok_or_else(|| Error::InvalidInput(format!("no edge {v} → {w}")))?;
                    colors.push(c);
                }
            }
            (SequenceKind::Hamiltonian, colors)
        }
    };
    let pulses = colors
        .into_iter()
        .map(|c| Pulse { label: graph.colors[c].label.clone(), unitary: graph.colors[c].matrix.clone() })
        .collect();
    Ok(PulseSequence { kind, tau, dim, group: Some(graph.group_name.clone()), orientation: None, pulses })
}

/// Circuit over the Cayley graph of `g` colored by all its generators.
///
/// Eulerian circuits start at the identity and shuffle with `seed`; the
/// Hamiltonian search stops after `budget` expansions.
pub fn synthesize(g: &FiniteGroup, kind: SequenceKind, seed: u64, budget: u64, tau: f64) -> Result<PulseSequence> {
    let colors: Vec<usize> = (0..g.generators().len()).collect();
    let graph = build_cayley(g, &colors)?;
    let walk = match kind {
        SequenceKind::Eulerian => Walk::Edges(eulerian_circuit(&graph, 0, seed)?),
        SequenceKind::Hamiltonian => Walk::Cycle(
            hamiltonian_circuit(&graph, 0, budget)?
                .ok_or_else(|| Error::InvalidInput(format!("the Cayley graph of {} has no Hamiltonian cycle", g.name())))?,
        ),
        other => return Err(Error::InvalidInput(format!("{other:?} sequences are not synthesized from a graph"))),
    };
    emit_sequence(&walk, &graph, tau)
}

/// Each waiting interval of `outer` becomes one cycle of `inner`; the last
/// inner pulse and the following outer pulse are merged into one.
pub fn nest_sequences(outer: &PulseSequence, inner: &PulseSequence) -> Result<PulseSequence> {
    if outer.dim != inner.dim {
        return Err(Error::DimensionMismatch(format!("outer {} vs inner {}", outer.dim, inner.dim)));
    }
    if inner.is_empty() {
        return Ok(outer.clone());
    }
    let cycles = if outer.is_empty() { 1 } else { outer.len() };
    let mut pulses = Vec::with_capacity(cycles * inner.len());
    for k in 0..cycles {
        let (body, last) = inner.pulses.split_at(inner.len() - 1);
        pulses.extend(body.iter().cloned());
        match outer.pulses.get(k) {
            Some(o) => pulses.push(Pulse { label: format!("{}·{}", o.label, last[0].label), unitary: &o.unitary * &last[0].unitary }),
            None => pulses.push(last[0].clone()),
        }
    }
    let group = match (&outer.group, &inner.group) {
        (Some(a), Some(b)) => Some(format!("{a}[{b}]")),
        _ => None,
    };
    Ok(PulseSequence { kind: SequenceKind::Nested, tau: inner.tau, dim: outer.dim, group, orientation: None, pulses })
}

/// `U₁ = 1, U_k = P_{k−1} ⋯ P₁`, one per waiting interval.
pub fn toggling_propagators(seq: &PulseSequence) -> Vec<ComplexMatrix> {
    let mut out = Vec::with_capacity(seq.intervals());
    let mut u = identity(seq.dim);
    out.push(u.clone());
    for p in seq.pulses.iter().take(seq.intervals().saturating_sub(1)) {
        u = &p.unitary * u;
        out.push(u.clone());
    }
    out
}

/// `(1/N) Σ_k π(U_k)† H π(U_k)`.
pub fn first_order_average(seq: &PulseSequence, h: &ComplexMatrix, rep: &Representation) -> Result<ComplexMatrix> {
    let props = toggling_propagators(seq);
    let images = rep.images(&props)?;
    let n = h.nrows();
    if images[0].shape() != (n, n) || h.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "operator {}x{} vs representation {}",
            h.nrows(),
            h.ncols(),
            images[0].nrows()
        )));
    }
    let mut acc = ComplexMatrix::zeros(n, n);
    for u in &images {
        acc += u.adjoint() * h * u;
    }
    Ok(acc / crate::mat::c64(images.len() as f64, 0.0))
}

/// Midpoint-rule value of `(1/τ_p) ∫₀^{τ_p} P(t)† H P(t) dt` with
/// `P(t) = exp(−i (t/τ_p) G)`, so that `P(τ_p)` is the full pulse.
pub fn finite_duration_error(h: &ComplexMatrix, pulse_generator: &ComplexMatrix, tau_p: f64, steps: usize) -> Result<ComplexMatrix> {
    if steps < 8 {
        return Err(Error::InvalidInput(format!("{steps} quadrature steps; need at least 8")));
    }
    if tau_p.is_nan() || tau_p <= 0.0 {
        return Err(Error::InvalidInput("pulse duration must be positive".into()));
    }
    if h.shape() != pulse_generator.shape() {
        return Err(Error::DimensionMismatch("Hamiltonian and pulse generator sizes differ".into()));
    }
    if !is_hermitian(pulse_generator, 1e-10 * crate::mat::frobenius(pulse_generator).max(1.0)) {
        return Err(Error::NonHermitianInput(crate::mat::frobenius(&(pulse_generator - pulse_generator.adjoint()))));
    }
    let eig = crate::mat::eigh(pulse_generator)?;
    let n = h.nrows();
    let mut acc = ComplexMatrix::zeros(n, n);
    let dt = tau_p / steps as f64;
    for k in 0..steps {
        let s = (k as f64 + 0.5) / steps as f64;
        let p = eig.apply(|lam| crate::C64::from_polar(1.0, -s * lam));
        acc += p.adjoint() * h * &p;
    }
    Ok(acc * crate::mat::c64(dt / tau_p, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::catalog::{mat_b, mat_c, mat_e, mat_v, mat_x};
    use crate::group::{quotient_group, symmetrize, GroupKind, Mode};
    use crate::mat::{c64, equal_up_to_phase, frobenius, kron, max_abs};
    use crate::C64;
    use proptest::prelude::*;
    use std::collections::HashSet;
    use std::f64::consts::PI;

    fn projective(name: &str, gens: Vec<Generator>) -> FiniteGroup {
        FiniteGroup::close(name, gens, Mode::Projective, GroupKind::Unitary, 5000).unwrap()
    }

    fn delta27_mod_center() -> FiniteGroup {
        projective("Delta27/Z3", vec![Generator::new("C", mat_c()), Generator::new("E", mat_e())])
    }

    fn k4_graph() -> (FiniteGroup, CayleyGraph) {
        let g = FiniteGroup::builtin("Sigma72x3", None).unwrap();
        let d54 = g
            .subgroup("Delta54", vec![Generator::new("C", mat_c()), Generator::new("E", mat_e()), Generator::new("B", mat_b())])
            .unwrap();
        let q = quotient_group(&g, &d54).unwrap();
        let graph =
            CayleyGraph::from_quotient(&g, &q, vec![Generator::new("X", mat_x()), Generator::new("V", mat_v())], "K4").unwrap();
        (g, graph)
    }

    fn random_hermitian(n: usize, entries: &[f64]) -> ComplexMatrix {
        let m = ComplexMatrix::from_fn(n, n, |i, j| c64(entries[(i * n + j) % entries.len()], entries[(j * n + i + 7) % entries.len()]));
        (&m + m.adjoint()) * c64(0.5, 0.0)
    }

    #[test]
    fn graph_sizes_and_regularity() {
        let g = delta27_mod_center();
        assert_eq!(g.order(), 9);
        let graph = build_cayley(&g, &[0, 1]).unwrap();
        assert_eq!(graph.n_vertices(), 9);
        assert_eq!(graph.edges().len(), 18);
        let mut indeg = [0; 9];
        for e in graph.edges() {
            indeg[e.to] += 1;
        }
        assert!(indeg.iter().all(|&d| d == 2));
        let (_, k4) = k4_graph();
        assert_eq!((k4.n_vertices(), k4.edges().len()), (4, 8));
        assert!(matches!(build_cayley(&g, &[0]), Err(Error::NotGenerating)));
    }

    #[test]
    fn eulerian_circuits_cover_each_edge_once() {
        let g = projective("Sigma36x3/Z3", vec![Generator::new("C", mat_c()), Generator::new("V", mat_v())]);
        assert_eq!(g.order(), 36);
        let graph = build_cayley(&g, &[0, 1]).unwrap();
        let a = eulerian_circuit(&graph, 0, 1).unwrap();
        let b = eulerian_circuit(&graph, 0, 2).unwrap();
        for c in [&a, &b] {
            assert_eq!(c.len(), 72);
            assert_eq!(c[0].from, 0);
            assert_eq!(c.last().unwrap().to, 0);
            let set: HashSet<Edge> = c.iter().copied().collect();
            assert_eq!(set, graph.edges().into_iter().collect());
        }
        assert_ne!(a, b);
        let seq = emit_sequence(&Walk::Edges(a), &graph, 1.0).unwrap();
        assert!(equal_up_to_phase(&identity(3), &seq.net_unitary(), 1e-10));
    }

    #[test]
    fn hamiltonian_cycles() {
        let g = delta27_mod_center();
        let graph = build_cayley(&g, &[0, 1]).unwrap();
        let cyc = hamiltonian_circuit(&graph, 0, DEFAULT_BUDGET).unwrap().unwrap();
        assert_eq!(cyc.len(), 9);
        assert_eq!(cyc.iter().copied().collect::<HashSet<_>>().len(), 9);
        let seq = emit_sequence(&Walk::Cycle(cyc), &graph, 1.0).unwrap();
        assert_eq!(seq.len(), 9);
        let props = toggling_propagators(&seq);
        for e in g.elements() {
            assert_eq!(props.iter().filter(|p| equal_up_to_phase(e, p, 1e-9)).count(), 1);
        }

        let (_, k4) = k4_graph();
        let cyc = hamiltonian_circuit(&k4, 0, DEFAULT_BUDGET).unwrap().unwrap();
        let seq = emit_sequence(&Walk::Cycle(cyc), &k4, 1.0).unwrap();
        let labels: Vec<_> = seq.pulses.iter().map(|p| p.label.as_str()).collect();
        assert!(labels == ["X", "V", "X", "V"] || labels == ["V", "X", "V", "X"]);

        let trivial = FiniteGroup::close("1", vec![Generator::new("1", identity(3))], Mode::Exact, GroupKind::Unitary, 10).unwrap();
        let graph = build_cayley(&trivial, &[0]).unwrap();
        let cyc = hamiltonian_circuit(&graph, 0, 10).unwrap().unwrap();
        assert_eq!(cyc, vec![0]);
        let seq = emit_sequence(&Walk::Cycle(cyc), &graph, 1.0).unwrap();
        assert!(seq.is_empty());
        assert_eq!(toggling_propagators(&seq).len(), 1);
    }

    #[test]
    fn budget_is_reported() {
        let g = projective("Sigma36x3/Z3", vec![Generator::new("C", mat_c()), Generator::new("V", mat_v())]);
        let graph = build_cayley(&g, &[0, 1]).unwrap();
        assert!(matches!(hamiltonian_circuit(&graph, 0, 3), Err(Error::BudgetExhausted(3))));
    }

    #[test]
    fn eulerian_average_matches_group_average() {
        let g = projective("Sigma72x3/Z3", vec![Generator::new("V", mat_v()), Generator::new("X", mat_x())]);
        assert_eq!(g.order(), 72);
        let graph = build_cayley(&g, &[0, 1]).unwrap();
        let seq = emit_sequence(&Walk::Edges(eulerian_circuit(&graph, 0, 7).unwrap()), &graph, 1.0).unwrap();
        assert_eq!(seq.len(), 144);
        let props = toggling_propagators(&seq);
        for e in g.elements() {
            assert_eq!(props.iter().filter(|p| equal_up_to_phase(e, p, 1e-9)).count(), 2);
        }
        let vals: Vec<f64> = (0..200).map(|k| ((k * 37 % 101) as f64 / 50.0) - 1.0).collect();
        let h = random_hermitian(9, &vals);
        let avg = first_order_average(&seq, &h, &Representation::Tensor(2)).unwrap();
        let sym = symmetrize(&h, &g, &Representation::Tensor(2)).unwrap();
        assert!(max_abs(&(avg - sym)) < 1e-10);
    }

    #[test]
    fn phase_identities_of_outer_sequences() {
        let x = mat_x();
        let v = mat_v();
        let w = C64::from_polar(1.0, 2.0 * PI / 3.0);
        let xv = &x * &v;
        let xv4 = &xv * &xv * &xv * &xv;
        let x3v = &x * &x * &x * &v;
        let x3v4 = &x3v * &x3v * &x3v * &x3v;
        assert!(max_abs(&(xv4 - identity(3) * w)) < 1e-10);
        assert!(max_abs(&(x3v4 - identity(3))) < 1e-10);
    }

    #[test]
    fn nesting_counts_intervals() {
        let alphabet = [Generator::new("X", mat_x()), Generator::new("V", mat_v()), Generator::new("E", mat_e())];
        let inner = PulseSequence::from_labels(&["E", "E", "E"], &alphabet, 1.0).unwrap();
        let k4 = PulseSequence::from_labels(&["X", "V", "X", "V"], &alphabet, 1.0).unwrap();
        let q8 = PulseSequence::from_labels(&["X", "X", "X", "V", "X", "X", "X", "V"], &alphabet, 1.0).unwrap();
        let a = nest_sequences(&k4, &inner).unwrap();
        assert_eq!(a.intervals(), 12);
        assert_eq!(nest_sequences(&q8, &inner).unwrap().intervals(), 24);
        assert_eq!(a.pulses[2].label, "X·E");
        // Merging preserves the net unitary.
        let unmerged = (0..4).fold(identity(3), |acc, k| &k4.pulses[k].unitary * inner.net_unitary() * acc);
        assert!(max_abs(&(a.net_unitary() - unmerged)) < 1e-12);
        let empty = PulseSequence::literal(vec![], 3, 1.0).unwrap();
        assert_eq!(nest_sequences(&k4, &empty).unwrap().len(), 4);
        let ab = nest_sequences(&k4, &nest_sequences(&q8, &inner).unwrap()).unwrap();
        assert_eq!(ab.intervals(), 4 * 8 * 3);
        assert!(nest_sequences(&k4, &PulseSequence::literal(vec![], 2, 1.0).unwrap()).is_err());
    }

    #[test]
    fn nested_sequence_averages_dipolar_coupling() {
        // Inner cycle of E followed by the K4 outer layer averages a
        // B-symmetric diagonal-invariant two-qutrit coupling to zero.
        let alphabet = [Generator::new("X", mat_x()), Generator::new("V", mat_v()), Generator::new("E", mat_e())];
        let inner = PulseSequence::from_labels(&["E", "E", "E"], &alphabet, 1.0).unwrap();
        let outer = PulseSequence::from_labels(&["X", "V", "X", "V"], &alphabet, 1.0).unwrap();
        let nested = nest_sequences(&outer, &inner).unwrap();
        let l = crate::lie::gell_mann_basis();
        let mut h = ComplexMatrix::zeros(9, 9);
        for k in [0, 1, 5, 6] {
            h += kron(&l[k], &l[k]);
        }
        let d = &l[2] + &l[7] * c64(3f64.sqrt(), 0.0);
        h -= kron(&d, &d);
        let avg = first_order_average(&nested, &h, &Representation::Tensor(2)).unwrap();
        assert!(frobenius(&avg) < 1e-10 * frobenius(&h));
        let dis = kron(&l[2], &identity(3));
        assert!(frobenius(&first_order_average(&inner, &dis, &Representation::Tensor(2)).unwrap()) < 1e-12);
    }

    #[test]
    fn sequence_json_round_trip() {
        let alphabet = [Generator::new("X", mat_x()), Generator::new("V", mat_v())];
        let seq = PulseSequence::from_labels(&["X", "V"], &alphabet, 0.25).unwrap();
        let back = PulseSequence::from_json(&seq.to_json().unwrap()).unwrap();
        assert_eq!(back.len(), 2);
        assert_eq!(back.tau, 0.25);
        assert!(max_abs(&(back.net_unitary() - seq.net_unitary())) < 1e-15);
        assert!(PulseSequence::from_json("{\"kind\":\"literal\"}").is_err());
    }

    #[test]
    fn finite_duration_quadrature() {
        let g = crate::mat::diag(&[c64(1.0, 0.0), c64(-0.5, 0.0), c64(0.2, 0.0)]);
        let h = crate::mat::diag(&[c64(0.3, 0.0), c64(0.1, 0.0), c64(-0.4, 0.0)]);
        assert!(max_abs(&(finite_duration_error(&h, &g, 1.0, 8).unwrap() - &h)) < 1e-14);
        let hv = crate::orientation::generator_hamiltonians()[1].1.clone();
        let reference = finite_duration_error(&h, &hv, 1.0, 10_000).unwrap();
        let e1 = frobenius(&(finite_duration_error(&h, &hv, 1.0, 16).unwrap() - &reference));
        let e2 = frobenius(&(finite_duration_error(&h, &hv, 1.0, 32).unwrap() - &reference));
        let ratio = e1 / e2;
        assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
        assert!(finite_duration_error(&h, &hv, 1.0, 4).is_err());
    }

    #[test]
    fn finite_duration_disorder_errors_cancel() {
        // Every pulse error of a single-qutrit Hamiltonian stays traceless,
        // so the Σ(36×3) average removes it.
        let g = projective("Sigma36x3/Z3", vec![Generator::new("C", mat_c()), Generator::new("V", mat_v())]);
        let dis = crate::mat::diag(&[c64(0.7, 0.0), c64(0.0, 0.0), c64(-0.7, 0.0)]);
        let mut total = ComplexMatrix::zeros(3, 3);
        for gen in g.generators() {
            let gen_h = crate::mat::principal_generator(&gen.matrix).unwrap();
            let err = finite_duration_error(&dis, &gen_h, 1.0, 64).unwrap();
            total += symmetrize(&err, &g, &Representation::Defining).unwrap();
        }
        assert!(max_abs(&total) < 1e-8);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn eulerian_product_closes(seed in any::<u64>()) {
            let g = delta27_mod_center();
            let graph = build_cayley(&g, &[0, 1]).unwrap();
            let c = eulerian_circuit(&graph, 0, seed).unwrap();
            prop_assert_eq!(c.len(), 18);
            let seq = emit_sequence(&Walk::Edges(c), &graph, 1.0).unwrap();
            prop_assert!(equal_up_to_phase(&identity(3), &seq.net_unitary(), 1e-9));
        }
    }
}
