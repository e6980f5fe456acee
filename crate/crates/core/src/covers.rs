//! Covering graphs from abelian voltage assignments, and towers of them.
//!
//! A voltage assignment labels every base edge, in its stored orientation
//! `a -> b`, with an element of an abelian group; the reversed orientation
//! carries the negative. The derived graph has vertex set `V x G` and an
//! edge `(a, g) -- (b, g + s)` for every base edge `a -> b` of voltage `s`
//! and every `g`. The projection `(x, g) -> x` is a covering map with
//! deck group `G`.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Result, ZetaError};
use crate::graph::MultiGraph;

/// Vertex cap used by [`homology_tower`] when the caller gives none.
pub const DEFAULT_SIZE_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VoltageGroup {
    /// `Z/n_1 x ... x Z/n_k`.
    Finite(Vec<u64>),
    /// `Z^k`, used symbolically for infinite covers.
    Free(usize),
}

impl VoltageGroup {
    pub fn rank(&self) -> usize {
        match self {
            VoltageGroup::Finite(orders) => orders.len(),
            VoltageGroup::Free(k) => *k,
        }
    }

    /// Group order, `None` for `Z^k` with `k > 0` or on overflow.
    pub fn order(&self) -> Option<u64> {
        match self {
            VoltageGroup::Finite(orders) => orders.iter().try_fold(1u64, |a, &n| a.checked_mul(n)),
            VoltageGroup::Free(0) => Some(1),
            VoltageGroup::Free(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VoltageAssignment {
    pub group: VoltageGroup,
    /// One group element per base edge, in the edge's stored orientation.
    pub voltages: Vec<Vec<i64>>,
}

impl VoltageAssignment {
    pub fn new(group: VoltageGroup, voltages: Vec<Vec<i64>>) -> Result<Self> {
        if let VoltageGroup::Finite(orders) = &group {
            if orders.contains(&0) {
                return Err(ZetaError::input("cyclic factor of order 0"));
            }
        }
        let k = group.rank();
        if let Some(bad) = voltages.iter().position(|s| s.len() != k) {
            return Err(ZetaError::input(format!(
                "voltage of edge {bad} has {} components, group has rank {k}",
                voltages[bad].len()
            )));
        }
        Ok(VoltageAssignment { group, voltages })
    }

    /// Every edge labelled with the identity.
    pub fn trivial(base: &MultiGraph, group: VoltageGroup) -> Self {
        let k = group.rank();
        VoltageAssignment {
            group,
            voltages: vec![vec![0; k]; base.edge_count()],
        }
    }

    pub fn cyclic(order: u64, voltages: &[i64]) -> Result<Self> {
        Self::new(
            VoltageGroup::Finite(vec![order]),
            voltages.iter().map(|&s| vec![s]).collect(),
        )
    }

    /// The same labels read in `(Z/n)^k`.
    pub fn reduce(&self, n: u64) -> Result<Self> {
        Self::new(VoltageGroup::Finite(vec![n; self.group.rank()]), self.voltages.clone())
    }

    fn check_base(&self, base: &MultiGraph) -> Result<()> {
        if self.voltages.len() != base.edge_count() {
            return Err(ZetaError::input(format!(
                "{} voltages for a base with {} edges",
                self.voltages.len(),
                base.edge_count()
            )));
        }
        Ok(())
    }
}

/// A derived graph together with its projection onto the base.
#[derive(Debug, Clone)]
pub struct DerivedCover {
    pub graph: MultiGraph,
    /// Cover vertex to base vertex.
    pub projection: Vec<usize>,
    pub fiber_size: u64,
    pub components: usize,
}

/// Mixed-radix index of a group element reduced into `Z/n_1 x ... x Z/n_k`.
fn element_index(orders: &[u64], g: &[i64]) -> usize {
    orders.iter().zip(g).fold(0usize, |acc, (&n, &x)| {
        acc * n as usize + x.rem_euclid(n as i64) as usize
    })
}

fn element_coords(orders: &[u64], mut idx: usize) -> Vec<i64> {
    let mut out = vec![0; orders.len()];
    for (slot, &n) in out.iter_mut().zip(orders).rev() {
        *slot = (idx % n as usize) as i64;
        idx /= n as usize;
    }
    out
}

pub fn derived_cover(base: &MultiGraph, volt: &VoltageAssignment) -> Result<DerivedCover> {
    volt.check_base(base)?;
    let VoltageGroup::Finite(orders) = &volt.group else {
        return Err(ZetaError::input("derived graphs need a finite voltage group"));
    };
    let order = volt
        .group
        .order()
        .filter(|&n| n <= usize::MAX as u64 / base.vertex_count().max(1) as u64)
        .ok_or_else(|| ZetaError::Resource("voltage group too large".into()))?
        as usize;
    let mut edges = Vec::with_capacity(base.edge_count() * order);
    for (&(a, b), s) in base.edges().iter().zip(&volt.voltages) {
        for gi in 0..order {
            let g = element_coords(orders, gi);
            let h: Vec<i64> = g.iter().zip(s).map(|(x, y)| x + y).collect();
            edges.push((a * order + gi, b * order + element_index(orders, &h)));
        }
    }
    let graph = MultiGraph::new(base.vertex_count() * order, edges)?;
    let projection = (0..graph.vertex_count()).map(|x| x / order).collect();
    let components = graph.component_count();
    Ok(DerivedCover {
        graph,
        projection,
        fiber_size: order as u64,
        components,
    })
}

pub fn derived_graph(base: &MultiGraph, volt: &VoltageAssignment) -> Result<MultiGraph> {
    Ok(derived_cover(base, volt)?.graph)
}

/// True iff `projection` is a covering map from `cover` onto `base`:
/// surjective, with fibres of constant size, and a local isomorphism in the
/// sense that every cover vertex sees, over each base vertex, exactly as
/// many edge-ends as its image does.
pub fn validate_cover(cover: &MultiGraph, base: &MultiGraph, projection: &[usize]) -> bool {
    let (nc, nb) = (cover.vertex_count(), base.vertex_count());
    if projection.len() != nc || projection.iter().any(|&x| x >= nb) || nc % nb != 0 {
        return false;
    }
    let mut fibre = vec![0usize; nb];
    for &x in projection {
        fibre[x] += 1;
    }
    if fibre.iter().any(|&f| f != nc / nb) {
        return false;
    }
    let profile = |nb_lists: &[Vec<usize>], x: usize, map: &dyn Fn(usize) -> usize| {
        let mut p: Vec<usize> = nb_lists[x].iter().map(|&y| map(y)).collect();
        p.sort_unstable();
        p
    };
    let base_nb = base.neighbours();
    let cover_nb = cover.neighbours();
    let base_profiles: Vec<Vec<usize>> = (0..nb).map(|x| profile(&base_nb, x, &|y| y)).collect();
    (0..nc).all(|x| profile(&cover_nb, x, &|y| projection[y]) == base_profiles[projection[x]])
}

/// What the tower converges to, when known from its construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitCover {
    /// The `Z^k`-cover of the base given by these integer voltages.
    Abelian { voltages: Vec<Vec<i64>> },
    /// The universal cover, a regular tree when the base is regular.
    UniversalTree,
    /// Levels supplied directly; the subgroup chain is not known.
    Unverified,
}

#[derive(Debug, Clone)]
pub struct TowerLevel {
    pub graph: MultiGraph,
    /// `N_i`, the number of sheets over the base.
    pub index: u64,
    pub projection_to_base: Vec<usize>,
    /// Projection onto the previous level; `None` for the first level.
    pub projection_to_previous: Option<Vec<usize>>,
    pub components: usize,
}

#[derive(Debug, Clone)]
pub struct Tower {
    pub base: MultiGraph,
    pub levels: Vec<TowerLevel>,
    pub provenance: String,
    pub limit: LimitCover,
}

impl Tower {
    /// A tower from explicitly supplied levels and base projections. The
    /// limit is marked unverified.
    pub fn from_levels(base: MultiGraph, levels: Vec<(MultiGraph, Vec<usize>)>) -> Result<Self> {
        let nb = base.vertex_count() as u64;
        let levels = levels
            .into_iter()
            .map(|(graph, projection_to_base)| {
                let components = graph.component_count();
                TowerLevel {
                    index: graph.vertex_count() as u64 / nb,
                    graph,
                    projection_to_base,
                    projection_to_previous: None,
                    components,
                }
            })
            .collect();
        let tower = Tower {
            base,
            levels,
            provenance: "user-supplied levels".into(),
            limit: LimitCover::Unverified,
        };
        tower.validate()?;
        Ok(tower)
    }

    pub fn indices(&self) -> Vec<u64> {
        self.levels.iter().map(|l| l.index).collect()
    }

    pub fn vertex_counts(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.graph.vertex_count()).collect()
    }

    /// Checks every structural invariant of a tower.
    pub fn validate(&self) -> Result<()> {
        let fail = |i: usize, what: &str| Err(ZetaError::input(format!("tower level {}: {what}", i + 1)));
        let Some(first) = self.levels.first() else {
            return Err(ZetaError::input("tower has no levels"));
        };
        if first.index != 1 || first.graph != self.base {
            return fail(0, "first level must be the base itself");
        }
        let chi = self.base.euler_characteristic();
        for (i, level) in self.levels.iter().enumerate() {
            let g = &level.graph;
            if g.vertex_count() as u64 != level.index * self.base.vertex_count() as u64 {
                return fail(i, "vertex count is not N_i |V(base)|");
            }
            if g.euler_characteristic() != level.index as i64 * chi {
                return fail(i, "chi is not N_i chi(base)");
            }
            if !validate_cover(g, &self.base, &level.projection_to_base) {
                return fail(i, "not a cover of the base");
            }
            if i > 0 {
                let prev = &self.levels[i - 1];
                if level.index % prev.index != 0 {
                    return fail(i, "index not divisible by the previous index");
                }
                if let Some(p) = &level.projection_to_previous {
                    if !validate_cover(g, &prev.graph, p) {
                        return fail(i, "not a cover of the previous level");
                    }
                }
            }
        }
        Ok(())
    }
}

/// Cyclic tower: level `i` is the derived graph of the integer voltages
/// reduced mod `orders[i]`.
pub fn cyclic_tower(base: &MultiGraph, voltages: &[i64], orders: &[u64]) -> Result<Tower> {
    let lifted: Vec<Vec<i64>> = voltages.iter().map(|&s| vec![s]).collect();
    abelian_tower(base, &lifted, orders)
}

/// Tower of `(Z/n_i)^k` covers from `Z^k` voltages, for a divisibility
/// chain `n_1 = 1 | n_2 | ...`. Its limit is the `Z^k`-cover.
pub fn abelian_tower(base: &MultiGraph, voltages: &[Vec<i64>], orders: &[u64]) -> Result<Tower> {
    let k = voltages.first().map_or(0, Vec::len);
    let symbolic = VoltageAssignment::new(VoltageGroup::Free(k), voltages.to_vec())?;
    symbolic.check_base(base)?;
    match orders.first() {
        Some(1) => {}
        _ => return Err(ZetaError::input("a tower starts at order 1 (the base)")),
    }
    if let Some(w) = orders.windows(2).find(|w| w[1] % w[0] != 0) {
        return Err(ZetaError::input(format!(
            "orders {} and {} do not divide; subgroups would not be nested",
            w[0], w[1]
        )));
    }
    let mut levels: Vec<TowerLevel> = Vec::with_capacity(orders.len());
    for (i, &n) in orders.iter().enumerate() {
        let cover = derived_cover(base, &symbolic.reduce(n)?)?;
        let projection_to_previous = levels.last().map(|prev| {
            let prev_orders = vec![orders[i - 1]; k];
            let this_orders = vec![n; k];
            let fibre = cover.fiber_size as usize;
            let prev_fibre = prev.index as usize;
            (0..cover.graph.vertex_count())
                .map(|x| {
                    let g = element_coords(&this_orders, x % fibre);
                    (x / fibre) * prev_fibre + element_index(&prev_orders, &g)
                })
                .collect()
        });
        let level = TowerLevel {
            index: cover.fiber_size,
            components: cover.components,
            projection_to_base: cover.projection,
            projection_to_previous,
            graph: if n == 1 { base.clone() } else { cover.graph },
        };
        levels.push(level);
    }
    let tower = Tower {
        base: base.clone(),
        levels,
        provenance: format!("(Z/n)^{k} covers for n in {orders:?}"),
        limit: LimitCover::Abelian {
            voltages: voltages.to_vec(),
        },
    };
    tower.validate()?;
    Ok(tower)
}

/// Spanning-tree voltages generating the mod-`p` homology cover: a
/// breadth-first tree from vertex 0 gets the identity, and the `j`-th
/// non-tree edge in edge order gets the `j`-th generator of `(Z/p)^r`.
pub fn homology_voltages(g: &MultiGraph, p: u64) -> Result<VoltageAssignment> {
    if !g.is_connected() {
        return Err(ZetaError::input("homology covers need a connected graph"));
    }
    let mut incident: Vec<Vec<(usize, usize)>> = vec![Vec::new(); g.vertex_count()];
    for (i, &(a, b)) in g.edges().iter().enumerate() {
        incident[a].push((i, b));
        if a != b {
            incident[b].push((i, a));
        }
    }
    let mut seen = vec![false; g.vertex_count()];
    let mut tree = vec![false; g.edge_count()];
    seen[0] = true;
    let mut queue = VecDeque::from([0]);
    while let Some(x) = queue.pop_front() {
        for &(e, y) in &incident[x] {
            if !seen[y] {
                seen[y] = true;
                tree[e] = true;
                queue.push_back(y);
            }
        }
    }
    let rank = (1 - g.euler_characteristic()) as usize;
    let mut next = 0;
    let voltages = tree
        .iter()
        .map(|&in_tree| {
            let mut s = vec![0; rank];
            if !in_tree {
                s[next] = 1;
                next += 1;
            }
            s
        })
        .collect();
    VoltageAssignment::new(VoltageGroup::Finite(vec![p; rank]), voltages)
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Iterated mod-`p` homology covers. Each subgroup is characteristic in
/// the previous one, and the chain intersects trivially, so the limit is
/// the universal cover.
pub fn homology_tower(base: &MultiGraph, p: u64, depth: usize, size_cap: usize) -> Result<Tower> {
    if !is_prime(p) {
        return Err(ZetaError::input(format!("{p} is not prime")));
    }
    if !base.is_connected() {
        return Err(ZetaError::input("homology towers need a connected base"));
    }
    let mut levels = vec![TowerLevel {
        graph: base.clone(),
        index: 1,
        projection_to_base: (0..base.vertex_count()).collect(),
        projection_to_previous: None,
        components: 1,
    }];
    for step in 1..=depth {
        let prev = levels.last().unwrap();
        let volt = homology_voltages(&prev.graph, p)?;
        let order = volt.group.order();
        let too_big = order
            .and_then(|o| o.checked_mul(prev.graph.vertex_count() as u64))
            .is_none_or(|n| n > size_cap as u64);
        if too_big {
            return Err(ZetaError::Resource(format!(
                "tower level {} would exceed the size cap of {size_cap} vertices \
                 ({} vertices times |G| = {p}^{})",
                step + 1,
                prev.graph.vertex_count(),
                volt.group.rank()
            )));
        }
        let cover = derived_cover(&prev.graph, &volt)?;
        let fibre = cover.fiber_size as usize;
        let projection_to_base = (0..cover.graph.vertex_count())
            .map(|x| prev.projection_to_base[x / fibre])
            .collect();
        let level = TowerLevel {
            index: prev.index * cover.fiber_size,
            components: cover.components,
            projection_to_base,
            projection_to_previous: Some(cover.projection),
            graph: cover.graph,
        };
        levels.push(level);
    }
    let tower = Tower {
        base: base.clone(),
        levels,
        provenance: format!("iterated mod-{p} homology covers, depth {depth}"),
        limit: LimitCover::UniversalTree,
    };
    tower.validate()?;
    Ok(tower)
}
