use std::fmt;

use serde::{Deserialize, Serialize};

/// A polytope variable: a vertex `x_i` or an edge `x_{i,j}` with `i < j`.
///
/// The derived order puts every vertex before every edge, vertices by label
/// and edges lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum VarIndex {
    Vertex(u32),
    Edge(u32, u32),
}

impl VarIndex {
    pub fn edge(a: u32, b: u32) -> Self {
        if a < b {
            VarIndex::Edge(a, b)
        } else {
            VarIndex::Edge(b, a)
        }
    }
}

impl fmt::Display for VarIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarIndex::Vertex(i) => write!(f, "x_{i}"),
            VarIndex::Edge(i, j) => write!(f, "x_{{{i},{j}}}"),
        }
    }
}

/// Canonical (sorted, duplicate-free) set of variables.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VarSet(Vec<VarIndex>);

impl VarSet {
    pub fn new(items: impl IntoIterator<Item = VarIndex>) -> Self {
        let mut v: Vec<VarIndex> = items.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        VarSet(v)
    }

    pub fn empty() -> Self {
        VarSet(Vec::new())
    }

    pub fn singleton(v: VarIndex) -> Self {
        VarSet(vec![v])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &VarIndex> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[VarIndex] {
        &self.0
    }

    pub fn contains(&self, v: &VarIndex) -> bool {
        self.0.binary_search(v).is_ok()
    }

    pub fn union(&self, other: &VarSet) -> VarSet {
        VarSet::new(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn with(&self, v: VarIndex) -> VarSet {
        let mut out = self.clone();
        if let Err(pos) = out.0.binary_search(&v) {
            out.0.insert(pos, v);
        }
        out
    }

    pub fn is_disjoint(&self, other: &VarSet) -> bool {
        self.0.iter().all(|v| !other.contains(v))
    }

    /// Stable text encoding, e.g. `{x_1,x_{1,2}}`.
    pub fn encode(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl FromIterator<VarIndex> for VarSet {
    fn from_iter<T: IntoIterator<Item = VarIndex>>(iter: T) -> Self {
        VarSet::new(iter)
    }
}
