//! Finite undirected multigraphs.
//!
//! Loops and parallel edges are allowed. The adjacency operator counts
//! edges between two vertices, and a loop contributes 2 to both the diagonal
//! entry of the adjacency operator and the degree of its vertex. With that
//! convention the one-vertex one-loop graph is 2-regular and its zeta
//! function is `(1 - u)^2`, exactly what the quotient of the bi-infinite
//! line requires.

use std::collections::VecDeque;
use std::path::Path;
use std::sync::OnceLock;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Result, ZetaError};

/// A finite multigraph on vertices `0..vertex_count`.
#[derive(Debug, Clone)]
pub struct MultiGraph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    name: Option<String>,
    spectrum: OnceLock<SpectrumData>,
}

/// Degree data of a graph. `q` is only meaningful when `is_regular`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularityInfo {
    pub is_regular: bool,
    pub q: Option<i64>,
    pub degree_sequence: Vec<usize>,
    pub chi: i64,
}

impl RegularityInfo {
    /// `q` for a regular graph, or an `Unsupported` error naming `what`.
    pub fn require_q(&self, what: &str) -> Result<i64> {
        match self.q {
            Some(q) if self.is_regular => Ok(q),
            _ => Err(ZetaError::Unsupported(format!(
                "{what} requires a regular graph"
            ))),
        }
    }
}

/// Eigenvalues of the adjacency operator, ascending, with multiplicity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumData {
    pub eigenvalues: Vec<f64>,
    /// Maximum degree; every eigenvalue lies in `[-k, k]`.
    pub spectral_bound: f64,
}

/// On-disk JSON form: `{"vertices": 4, "edges": [[0,1], ...], "name": "C4"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphFile {
    pub vertices: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl MultiGraph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if vertex_count == 0 {
            return Err(ZetaError::input("a graph needs at least one vertex"));
        }
        if let Some(&(a, b)) = edges
            .iter()
            .find(|&&(a, b)| a >= vertex_count || b >= vertex_count)
        {
            return Err(ZetaError::input(format!(
                "edge ({a}, {b}) has an endpoint outside 0..{vertex_count}"
            )));
        }
        Ok(MultiGraph {
            vertex_count,
            edges,
            name: None,
            spectrum: OnceLock::new(),
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// `v - e`.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count as i64 - self.edges.len() as i64
    }

    pub fn loop_count(&self) -> usize {
        self.edges.iter().filter(|(a, b)| a == b).count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// Integer adjacency counts, row-major; loops count 2 on the diagonal.
    pub fn adjacency_counts(&self) -> Vec<Vec<i64>> {
        let n = self.vertex_count;
        let mut adj = vec![vec![0i64; n]; n];
        for &(a, b) in &self.edges {
            if a == b {
                adj[a][a] += 2;
            } else {
                adj[a][b] += 1;
                adj[b][a] += 1;
            }
        }
        adj
    }

    pub fn adjacency_matrix(&self) -> DMatrix<f64> {
        let n = self.vertex_count;
        let mut m = DMatrix::zeros(n, n);
        for &(a, b) in &self.edges {
            if a == b {
                m[(a, a)] += 2.0;
            } else {
                m[(a, b)] += 1.0;
                m[(b, a)] += 1.0;
            }
        }
        m
    }

    /// Trace of the squared adjacency operator, computed combinatorially.
    pub fn trace_adjacency_squared(&self) -> i64 {
        self.adjacency_counts()
            .iter()
            .flat_map(|row| row.iter())
            .map(|&x| x * x)
            .sum()
    }

    pub fn regularity(&self) -> RegularityInfo {
        let degree_sequence = self.degrees();
        let first = degree_sequence[0];
        let is_regular = degree_sequence.iter().all(|&d| d == first);
        RegularityInfo {
            is_regular,
            q: is_regular.then(|| first as i64 - 1),
            degree_sequence,
            chi: self.euler_characteristic(),
        }
    }

    /// Neighbour lists with multiplicity (a loop appears twice).
    pub fn neighbours(&self) -> Vec<Vec<usize>> {
        let mut nb = vec![Vec::new(); self.vertex_count];
        for &(a, b) in &self.edges {
            nb[a].push(b);
            nb[b].push(a);
        }
        nb
    }

    /// Connected component label of every vertex, numbered in order of
    /// first appearance.
    pub fn component_labels(&self) -> Vec<usize> {
        let nb = self.neighbours();
        let mut label = vec![usize::MAX; self.vertex_count];
        let mut next = 0;
        for start in 0..self.vertex_count {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = next;
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                for &y in &nb[x] {
                    if label[y] == usize::MAX {
                        label[y] = next;
                        queue.push_back(y);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn component_count(&self) -> usize {
        self.component_labels().into_iter().max().map_or(0, |m| m + 1)
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    /// Two-colourability. Any loop makes a graph non-bipartite.
    pub fn is_bipartite(&self) -> bool {
        let nb = self.neighbours();
        let mut colour: Vec<Option<bool>> = vec![None; self.vertex_count];
        for start in 0..self.vertex_count {
            if colour[start].is_some() {
                continue;
            }
            colour[start] = Some(false);
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                let cx = colour[x].unwrap();
                for &y in &nb[x] {
                    match colour[y] {
                        None => {
                            colour[y] = Some(!cx);
                            queue.push_back(y);
                        }
                        Some(cy) if cy == cx => return false,
                        Some(_) => {}
                    }
                }
            }
        }
        true
    }

    /// The same graph with vertex `x` renamed to `perm[x]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<MultiGraph> {
        let n = self.vertex_count;
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true))
        {
            return Err(ZetaError::input("relabelling is not a permutation"));
        }
        let edges = self.edges.iter().map(|&(a, b)| (perm[a], perm[b])).collect();
        let mut g = MultiGraph::new(n, edges)?;
        g.name = self.name.clone();
        Ok(g)
    }

    /// Adjacency spectrum, computed once and cached.
    pub fn spectrum(&self) -> Result<&SpectrumData> {
        if let Some(s) = self.spectrum.get() {
            return Ok(s);
        }
        let s = compute_spectrum(self)?;
        Ok(self.spectrum.get_or_init(|| s))
    }

    pub fn to_file(&self) -> GraphFile {
        GraphFile {
            vertices: self.vertex_count,
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
            name: self.name.clone(),
        }
    }

    pub fn from_file(file: &GraphFile) -> Result<Self> {
        let g = MultiGraph::new(
            file.vertices,
            file.edges.iter().map(|e| (e[0], e[1])).collect(),
        )?;
        Ok(match &file.name {
            Some(n) => g.with_name(n.clone()),
            None => g,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: GraphFile = serde_json::from_str(text)
            .map_err(|e| ZetaError::input(format!("bad graph JSON: {e}")))?;
        Self::from_file(&file)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| ZetaError::input(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

impl PartialEq for MultiGraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_count == other.vertex_count && self.edges == other.edges
    }
}

/// Convenience wrapper around [`MultiGraph::new`].
pub fn build_graph(vertex_count: usize, edges: &[(usize, usize)]) -> Result<MultiGraph> {
    MultiGraph::new(vertex_count, edges.to_vec())
}

fn compute_spectrum(g: &MultiGraph) -> Result<SpectrumData> {
    let n = g.vertex_count();
    let max_iter = 1000 * n.max(10);
    let eig = SymmetricEigen::try_new(g.adjacency_matrix(), f64::EPSILON, max_iter)
        .ok_or_else(|| {
            ZetaError::numeric(format!(
                "symmetric eigensolver did not converge on a {n}-vertex graph"
            ))
        })?;
    let mut eigenvalues: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    if eigenvalues.iter().any(|x| !x.is_finite()) {
        return Err(ZetaError::numeric("eigensolver produced a non-finite value"));
    }
    eigenvalues.sort_by(f64::total_cmp);
    Ok(SpectrumData {
        eigenvalues,
        spectral_bound: g.max_degree() as f64,
    })
}
