use super::Graph;
use crate::error::{Error, Result};

/// Canonical labelled instances of the named graphs.
///
/// * `edge`, `triangle`, `petersen`
/// * `H`: `K_4` minus the edge `{2,3}`
/// * `H_tilde`: `H` plus a pendant vertex 4 hanging off vertex 0 (degree 3 in `H`)
/// * `path_k`, `cycle_k`, `complete_k`: on `k` vertices
/// * `matching_k`: `k` disjoint edges on `2k` vertices
pub fn builtin_graph(name: &str) -> Result<Graph> {
    let g = match name {
        "edge" => Graph::complete(2),
        "triangle" => Graph::complete(3),
        "H" => h(),
        "H_tilde" => {
            let mut edges = h().edges().to_vec();
            edges.push((0, 4));
            Graph::from_edges(5, edges)?
        }
        "petersen" => {
            let outer = (0..5).map(|i| (i, (i + 1) % 5));
            let spokes = (0..5).map(|i| (i, i + 5));
            let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
            Graph::from_edges(10, outer.chain(spokes).chain(inner))?
        }
        _ => return parametrised(name),
    };
    Ok(g)
}

fn h() -> Graph {
    Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).expect("H is a valid graph")
}

fn parametrised(name: &str) -> Result<Graph> {
    let unknown = || Error::Usage(format!("unknown builtin graph `{name}`"));
    let (family, k) = name.rsplit_once('_').ok_or_else(unknown)?;
    let k: usize = k.parse().map_err(|_| unknown())?;
    match family {
        "path" if k >= 1 => Graph::from_edges(k, (1..k).map(|i| (i - 1, i))),
        "cycle" if k >= 3 => Graph::from_edges(k, (0..k).map(|i| (i, (i + 1) % k))),
        "complete" => Ok(Graph::complete(k)),
        "matching" => Graph::from_edges(2 * k, (0..k).map(|i| (2 * i, 2 * i + 1))),
        "path" | "cycle" => Err(Error::Usage(format!("`{name}` is too small"))),
        _ => Err(unknown()),
    }
}
