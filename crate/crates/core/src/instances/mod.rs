//! Graphs, polytope variables, the partial vertex cover LP and its integral oracle.

mod graph;
mod io;
mod pvc;
mod vars;

pub use graph::{make_clique, make_star, Graph};
pub use io::{format_graph, parse_graph};
pub use pvc::{
    brute_force_opt, build_pvc_lp, integral_point, BruteForceOpt, BRUTE_FORCE_MAX_VERTICES,
};
pub use vars::{VarIndex, VarSet};
