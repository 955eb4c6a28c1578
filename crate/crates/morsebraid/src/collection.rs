//! Ready-made graphs used by the CLI examples and the test suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{choose_maximal_tree, order_vertices, EmbeddedGraph, Vertex, VertexOrder};

fn build(names: &[&str], rotation: &[&[usize]], root: usize) -> EmbeddedGraph {
    EmbeddedGraph::new(
        names.iter().map(|s| s.to_string()).collect(),
        rotation.iter().map(|r| r.to_vec()).collect(),
        root,
    )
    .expect("valid built-in graph")
}

/// Star with three arms of one edge each; root at a leaf.
pub fn y_graph() -> EmbeddedGraph {
    // 0 = root leaf, 1 = center, 2, 3 = other leaves
    build(
        &["r", "c", "x", "y"],
        &[&[1], &[0, 2, 3], &[1], &[1]],
        0,
    )
}

/// Radial tree: one central vertex of the given degree, arms of one edge.
pub fn radial(d: usize) -> EmbeddedGraph {
    assert!(d >= 3);
    let mut names = vec!["c".to_string()];
    let mut rotation: Vec<Vec<Vertex>> = vec![(1..=d).collect()];
    for i in 1..=d {
        names.push(format!("l{}", i));
        rotation.push(vec![0]);
    }
    EmbeddedGraph::new(names, rotation, 1).unwrap()
}

/// Path on `k` vertices, rooted at one end.
pub fn path(k: usize) -> EmbeddedGraph {
    assert!(k >= 2);
    let names: Vec<String> = (0..k).map(|i| format!("p{}", i)).collect();
    let rotation: Vec<Vec<Vertex>> = (0..k)
        .map(|i| {
            if i == 0 {
                vec![1]
            } else if i == k - 1 {
                vec![k - 2]
            } else {
                vec![i - 1, i + 1]
            }
        })
        .collect();
    EmbeddedGraph::new(names, rotation, 0).unwrap()
}

/// Cycle on `k` vertices. No root is meaningful until a tree is chosen.
pub fn cycle(k: usize) -> EmbeddedGraph {
    assert!(k >= 3);
    let names: Vec<String> = (0..k).map(|i| format!("c{}", i)).collect();
    let rotation: Vec<Vec<Vertex>> = (0..k)
        .map(|i| vec![(i + k - 1) % k, (i + 1) % k])
        .collect();
    EmbeddedGraph::new(names, rotation, 0).unwrap()
}

/// The 28-vertex tree of the worked four-strand example: a spine through four
/// essential vertices, every segment three edges long, already sufficiently
/// subdivided for four strands. Vertex `vi` gets rank `i` in the induced
/// order.
pub fn fig1_tree() -> EmbeddedGraph {
    let names: Vec<String> = (0..28).map(|i| format!("v{}", i)).collect();
    let mut rot: Vec<Vec<Vertex>> = vec![Vec::new(); 28];
    let links = [
        // spine * = v0 .. v3 = A
        (0, 1),
        (1, 2),
        (2, 3),
        // A's arm (direction 1): v4 v5 v6
        (3, 4),
        (4, 5),
        (5, 6),
        // A -> B (direction 2): v7 v8 v9
        (3, 7),
        (7, 8),
        (8, 9),
        // B -> C (direction 1): v10 v11 v12
        (9, 10),
        (10, 11),
        (11, 12),
        // C's arms: v13 v14 v15 and v16 v17 v18
        (12, 13),
        (13, 14),
        (14, 15),
        (12, 16),
        (16, 17),
        (17, 18),
        // B -> D (direction 2): v19 v20 v21
        (9, 19),
        (19, 20),
        (20, 21),
        // D's arms: v22 v23 v24 and v25 v26 v27
        (21, 22),
        (22, 23),
        (23, 24),
        (21, 25),
        (25, 26),
        (26, 27),
    ];
    for (a, b) in links {
        rot[a].push(b);
        rot[b].push(a);
    }
    // insertion order produces clockwise lists [parent, dir1, dir2]
    EmbeddedGraph::new(names, rot, 0).unwrap()
}

pub fn fig1_ordered() -> (EmbeddedGraph, VertexOrder) {
    let g = choose_maximal_tree(&fig1_tree(), None).unwrap();
    let ord = order_vertices(&g).unwrap();
    (g, ord)
}

/// H-shaped tree: two essential vertices joined by a bar, root at the bottom
/// left leaf. Unsubdivided; run `subdivide_for` for the strand count you need.
pub fn h_tree() -> EmbeddedGraph {
    // 0 = root (bottom left), 1 = A, 2 = top left, 3 = B, 4 = top right,
    // 5 = bottom right. At A the clockwise order after the parent is
    // (top-left, bar), so g(A, B) = 2.
    build(
        &["s", "A", "tl", "B", "tr", "br"],
        &[&[1], &[0, 2, 3], &[1], &[1, 4, 5], &[3], &[3]],
        0,
    )
}

/// K4 with its radial (star) maximal tree forced: the three outer edges are
/// deleted. The root is an outer vertex, which has tree degree 1.
pub fn k4_star() -> (EmbeddedGraph, Vec<(Vertex, Vertex)>) {
    // 0 = x (hub), 1 = a (root), 2 = b, 3 = c
    let g = build(
        &["x", "a", "b", "c"],
        &[&[1, 2, 3], &[0, 2, 3], &[0, 3, 1], &[0, 1, 2]],
        1,
    );
    let forced = vec![(1, 2), (2, 3), (3, 1)];
    (g, forced)
}

/// Random tree on `size` vertices with a random rotation system, rooted at a
/// leaf. Deterministic for a fixed seed.
pub fn random_tree(seed: u64, size: usize) -> EmbeddedGraph {
    assert!(size >= 2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rotation: Vec<Vec<Vertex>> = vec![Vec::new(); size];
    for v in 1..size {
        let p = rng.gen_range(0..v);
        rotation[p].push(v);
        rotation[v].push(p);
    }
    for r in rotation.iter_mut() {
        // random cyclic order
        for i in (1..r.len()).rev() {
            let j = rng.gen_range(0..=i);
            r.swap(i, j);
        }
    }
    let root = (0..size).find(|&v| rotation[v].len() == 1).expect("a tree has a leaf");
    let names: Vec<String> = (0..size).map(|i| format!("t{}", i)).collect();
    EmbeddedGraph::new(names, rotation, root).unwrap()
}
