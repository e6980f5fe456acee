//! Named graphs used throughout the tests, the book and the CLI.

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use crate::graph::MultiGraph;

/// The `n`-cycle. `cycle(1)` is a single loop and `cycle(2)` is a pair of
/// parallel edges, the quotients of the line by `nZ` for small `n`.
pub fn cycle(n: usize) -> MultiGraph {
    assert!(n >= 1);
    let edges = (0..n).map(|i| (i, (i + 1) % n)).collect();
    MultiGraph::new(n, edges).unwrap().with_name(format!("C{n}"))
}

pub fn complete(n: usize) -> MultiGraph {
    assert!(n >= 1);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            edges.push((a, b));
        }
    }
    MultiGraph::new(n, edges).unwrap().with_name(format!("K{n}"))
}

pub fn path(n: usize) -> MultiGraph {
    assert!(n >= 1);
    let edges = (1..n).map(|i| (i - 1, i)).collect();
    MultiGraph::new(n, edges).unwrap().with_name(format!("P{n}"))
}

/// One vertex carrying `loops` loops; `2 * loops`-regular.
pub fn bouquet(loops: usize) -> MultiGraph {
    MultiGraph::new(1, vec![(0, 0); loops])
        .unwrap()
        .with_name(format!("bouquet-{loops}"))
}

pub fn petersen() -> MultiGraph {
    let mut edges = Vec::with_capacity(15);
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    MultiGraph::new(10, edges).unwrap().with_name("Petersen")
}

/// A uniformly paired configuration-model graph, resampled until it is
/// simple and connected. `n * degree` must be even.
pub fn random_regular<R: Rng>(n: usize, degree: usize, rng: &mut R) -> MultiGraph {
    assert!((n * degree).is_multiple_of(2) && degree < n);
    loop {
        let mut stubs: Vec<usize> = (0..n).flat_map(|x| std::iter::repeat_n(x, degree)).collect();
        stubs.shuffle(rng);
        let mut edges: Vec<(usize, usize)> = stubs
            .chunks(2)
            .map(|p| (p[0].min(p[1]), p[0].max(p[1])))
            .collect();
        if edges.iter().any(|(a, b)| a == b) {
            continue;
        }
        edges.sort_unstable();
        if edges.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        let g = MultiGraph::new(n, edges).unwrap();
        if g.is_connected() {
            return g.with_name(format!("random-{degree}-regular-{n}"));
        }
    }
}

/// Three reproducible random cubic graphs on at most 12 vertices.
pub fn random_cubic_graphs() -> Vec<MultiGraph> {
    let mut rng = StdRng::seed_from_u64(0x1ba7a);
    [8, 10, 12]
        .into_iter()
        .map(|n| random_regular(n, 3, &mut rng))
        .collect()
}

/// C3..C8, K4, Petersen, the two-loop bouquet and three random cubic graphs.
pub fn standard_corpus() -> Vec<MultiGraph> {
    let mut out: Vec<MultiGraph> = (3..=8).map(cycle).collect();
    out.push(complete(4));
    out.push(petersen());
    out.push(bouquet(2));
    out.extend(random_cubic_graphs());
    out
}
