use std::collections::HashMap;

use super::vars::{VarIndex, VarSet};
use crate::error::{Error, Result};
use crate::exact_linalg::Rational;
use num_traits::{One, Signed};

/// Simple undirected vertex-weighted graph on vertices `1..=n`.
///
/// Edges are kept in lexicographic order; together with the vertices this
/// fixes the variable order `x_1..x_n, x_e...` used everywhere else. Variable
/// ids are `i - 1` for vertex `i` and `n + k` for the `k`-th edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: u32,
    edges: Vec<(u32, u32)>,
    weights: Vec<Rational>,
    edge_ids: HashMap<(u32, u32), usize>,
}

impl Graph {
    /// Unit-weight graph. Endpoints may be given in either order.
    pub fn new(n: u32, edges: impl IntoIterator<Item = (u32, u32)>) -> Result<Self> {
        let mut normalized = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {a}")));
            }
            let (i, j) = if a < b { (a, b) } else { (b, a) };
            if i < 1 || j > n {
                return Err(Error::InvalidGraph(format!(
                    "edge {{{i},{j}}} outside vertex range 1..={n}"
                )));
            }
            normalized.push((i, j));
        }
        normalized.sort_unstable();
        if let Some(w) = normalized.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!(
                "duplicate edge {{{},{}}}",
                w[0].0, w[0].1
            )));
        }
        let edge_ids = normalized
            .iter()
            .enumerate()
            .map(|(k, &e)| (e, k))
            .collect();
        Ok(Self {
            n,
            edges: normalized,
            weights: vec![Rational::one(); n as usize],
            edge_ids,
        })
    }

    /// Replaces vertex weights; `weights[i - 1]` belongs to vertex `i`.
    pub fn with_weights(mut self, weights: Vec<Rational>) -> Result<Self> {
        if weights.len() != self.n as usize {
            return Err(Error::InvalidGraph(format!(
                "{} weights for {} vertices",
                weights.len(),
                self.n
            )));
        }
        if let Some(w) = weights.iter().find(|w| w.is_negative()) {
            return Err(Error::InvalidGraph(format!("negative weight {w}")));
        }
        self.weights = weights;
        Ok(self)
    }

    pub fn set_weight(&mut self, vertex: u32, weight: Rational) -> Result<()> {
        if vertex < 1 || vertex > self.n {
            return Err(Error::InvalidGraph(format!("no vertex {vertex}")));
        }
        if weight.is_negative() {
            return Err(Error::InvalidGraph(format!("negative weight {weight}")));
        }
        self.weights[(vertex - 1) as usize] = weight;
        Ok(())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn num_vertices(&self) -> usize {
        self.n as usize
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn weight(&self, vertex: u32) -> &Rational {
        &self.weights[(vertex - 1) as usize]
    }

    pub fn is_unweighted(&self) -> bool {
        self.weights.iter().all(One::is_one)
    }

    /// `|V| + |E|`.
    pub fn num_vars(&self) -> usize {
        self.n as usize + self.edges.len()
    }

    pub fn edge_id(&self, i: u32, j: u32) -> Option<usize> {
        let key = if i < j { (i, j) } else { (j, i) };
        self.edge_ids.get(&key).copied()
    }

    pub fn var_id(&self, v: &VarIndex) -> Option<usize> {
        match *v {
            VarIndex::Vertex(i) if i >= 1 && i <= self.n => Some((i - 1) as usize),
            VarIndex::Vertex(_) => None,
            VarIndex::Edge(i, j) => self.edge_id(i, j).map(|k| self.n as usize + k),
        }
    }

    pub fn var_at(&self, id: usize) -> VarIndex {
        let n = self.n as usize;
        if id < n {
            VarIndex::Vertex(id as u32 + 1)
        } else {
            let (i, j) = self.edges[id - n];
            VarIndex::Edge(i, j)
        }
    }

    pub fn var_name(&self, id: usize) -> String {
        self.var_at(id).to_string()
    }

    /// Sorted ids of a variable set; errors on variables foreign to this graph.
    pub fn ids_of(&self, set: &VarSet) -> Result<Vec<usize>> {
        set.iter()
            .map(|v| {
                self.var_id(v)
                    .ok_or_else(|| Error::UnknownVariable(v.to_string()))
            })
            .collect()
    }

    pub fn set_of(&self, ids: &[usize]) -> VarSet {
        VarSet::new(ids.iter().map(|&id| self.var_at(id)))
    }
}

/// Complete unweighted graph on `n` vertices.
pub fn make_clique(n: u32) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidGraph(
            "clique needs at least one vertex".into(),
        ));
    }
    let edges = (1..=n).flat_map(|i| ((i + 1)..=n).map(move |j| (i, j)));
    Graph::new(n, edges)
}

/// Star with leaves `1..=n` and center `n + 1`.
pub fn make_star(n: u32) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidGraph("star needs at least one leaf".into()));
    }
    Graph::new(n + 1, (1..=n).map(|i| (i, n + 1)))
}
