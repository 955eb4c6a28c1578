//! Glue: graph file (or built graph) to a frozen `World`, running
//! subdivision, tree selection and the vertex order in the right sequence.

use thiserror::Error;

use crate::complex::World;
use crate::graph::{
    apply_forced_deleted, choose_maximal_tree, fix_deleted_endpoints, order_vertices,
    subdivide_for, EmbeddedGraph, GraphError, Vertex,
};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("graph is not sufficiently subdivided for {n} strands and subdivision is off")]
    NotSubdivided { n: usize },
}

/// Prepares a graph for `n` strands. With `forced_deleted`, the maximal tree
/// is the complement of the given edges (validated); otherwise one is chosen
/// automatically. Returns the prepared graph alongside the world so callers
/// can inspect or reserialize it.
pub fn prepare_graph(
    input: &EmbeddedGraph,
    n: usize,
    forced_deleted: Option<&[(Vertex, Vertex)]>,
    subdivide: bool,
) -> Result<(World, EmbeddedGraph), PipelineError> {
    let g = match forced_deleted {
        Some(pairs) => {
            let mut g = input.clone();
            apply_forced_deleted(&mut g, pairs)?;
            let mut g = if subdivide {
                subdivide_for(&g, n)?
            } else {
                if !g.is_sufficiently_subdivided(n) {
                    return Err(PipelineError::NotSubdivided { n });
                }
                g
            };
            fix_deleted_endpoints(&mut g);
            g
        }
        None => {
            let g = if subdivide {
                subdivide_for(input, n)?
            } else {
                if !input.is_sufficiently_subdivided(n) {
                    return Err(PipelineError::NotSubdivided { n });
                }
                input.clone()
            };
            choose_maximal_tree(&g, None)?
        }
    };
    let ord = order_vertices(&g)?;
    let world = World::build(&g, &ord, n);
    Ok((world, g))
}

/// Same pipeline but with an already-subdivided graph whose tree is chosen;
/// only ordering and freezing remain. Used by the subdivision-stability
/// tests.
pub fn freeze(g: &EmbeddedGraph, n: usize) -> Result<World, PipelineError> {
    let ord = order_vertices(g)?;
    Ok(World::build(g, &ord, n))
}

/// Variant that re-roots at the smallest tree leaf when the requested root
/// does not have tree degree one (cycles have no degree-one vertices at all,
/// so some accommodation is needed there).
pub fn prepare_graph_auto_root(
    input: &EmbeddedGraph,
    n: usize,
    forced_deleted: Option<&[(Vertex, Vertex)]>,
    subdivide: bool,
) -> Result<(World, EmbeddedGraph), PipelineError> {
    let g = match forced_deleted {
        Some(pairs) => {
            let mut g = input.clone();
            apply_forced_deleted(&mut g, pairs)?;
            let mut g = if subdivide {
                subdivide_for(&g, n)?
            } else {
                if !g.is_sufficiently_subdivided(n) {
                    return Err(PipelineError::NotSubdivided { n });
                }
                g
            };
            fix_deleted_endpoints(&mut g);
            g
        }
        None => {
            let g = if subdivide {
                subdivide_for(input, n)?
            } else {
                if !input.is_sufficiently_subdivided(n) {
                    return Err(PipelineError::NotSubdivided { n });
                }
                input.clone()
            };
            choose_maximal_tree(&g, None)?
        }
    };
    let mut g = g;
    if g.tree_degree_of(g.root) != 1 {
        let new_root = (0..g.n_vertices())
            .find(|&v| g.tree_degree_of(v) == 1)
            .expect("a tree has a leaf");
        g.root = new_root;
    }
    let ord = order_vertices(&g)?;
    let world = World::build(&g, &ord, n);
    Ok((world, g))
}
