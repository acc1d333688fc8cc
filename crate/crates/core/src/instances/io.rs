//! Plain-text graph format.
//!
//! ```text
//! # comment lines and blank lines are ignored
//! n m            header: vertex count, edge count
//! i j            exactly m edge lines, 1-based endpoints
//! w i weight     optional vertex-weight lines after the edges
//! ```
//!
//! Weights are nonnegative rationals written as `a`, `a/b` or a finite
//! decimal; unlisted vertices keep weight 1.

use crate::error::{Error, Result};
use crate::exact_linalg::rational::{parse_rational, to_fraction_string};

use super::graph::Graph;

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let perr = |line: usize, message: String| Error::Parse { line, message };
    let (hline, header) = lines
        .next()
        .ok_or_else(|| perr(0, "empty graph file".into()))?;
    let head: Vec<&str> = header.split_whitespace().collect();
    if head.len() != 2 {
        return Err(perr(hline, format!("expected \"n m\", found {header:?}")));
    }
    let n: u32 = head[0]
        .parse()
        .map_err(|_| perr(hline, format!("bad vertex count {:?}", head[0])))?;
    let m: usize = head[1]
        .parse()
        .map_err(|_| perr(hline, format!("bad edge count {:?}", head[1])))?;

    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let (ln, l) = lines
            .next()
            .ok_or_else(|| perr(hline, format!("expected {m} edge lines")))?;
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(perr(ln, format!("expected \"i j\", found {l:?}")));
        }
        let i: u32 = toks[0]
            .parse()
            .map_err(|_| perr(ln, format!("bad vertex {:?}", toks[0])))?;
        let j: u32 = toks[1]
            .parse()
            .map_err(|_| perr(ln, format!("bad vertex {:?}", toks[1])))?;
        edges.push((i, j));
    }
    let mut g = Graph::new(n, edges)?;

    for (ln, l) in lines {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 3 || toks[0] != "w" {
            return Err(perr(ln, format!("expected \"w i weight\", found {l:?}")));
        }
        let v: u32 = toks[1]
            .parse()
            .map_err(|_| perr(ln, format!("bad vertex {:?}", toks[1])))?;
        let w =
            parse_rational(toks[2]).ok_or_else(|| perr(ln, format!("bad weight {:?}", toks[2])))?;
        g.set_weight(v, w).map_err(|e| perr(ln, e.to_string()))?;
    }
    Ok(g)
}

pub fn format_graph(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.num_edges());
    for &(i, j) in g.edges() {
        out.push_str(&format!("{i} {j}\n"));
    }
    if !g.is_unweighted() {
        for v in 1..=g.n() {
            out.push_str(&format!("w {v} {}\n", to_fraction_string(g.weight(v))));
        }
    }
    out
}
