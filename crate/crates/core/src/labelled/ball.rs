//! Rooted balls of the n-regular tree carrying an arc labelling.
//!
//! A ball is an arena of materialized vertices. Each non-root vertex stores
//! both labels of the edge to its parent: `down` (at the parent) and `up`
//! (at the vertex itself). Vertices are named by their reduced label path
//! from the root. Balls lifted from a [`LabelledGraph`] additionally carry
//! the covering projection, which survives relabelling.

use std::collections::VecDeque;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::labelled::graph::{GraphArc, LabelledGraph};
use crate::labelled::orbits::OrbitStructure;
use crate::perm::{Label, Permutation};

pub const DEFAULT_VERTEX_CEILING: usize = 2_000_000;

pub(crate) const NONE: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex(pub u32);

impl Vertex {
    #[inline]
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

/// An oriented edge of a ball, identified by its endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BallArc {
    pub from: Vertex,
    pub to: Vertex,
}

impl BallArc {
    pub fn new(from: Vertex, to: Vertex) -> Self {
        BallArc { from, to }
    }

    pub fn bar(self) -> BallArc {
        BallArc {
            from: self.to,
            to: self.from,
        }
    }
}

#[derive(Clone, Debug)]
struct Node {
    parent: u32,
    depth: u32,
    down: Label,
    up: Label,
    children: Vec<u32>,
    by_label: Option<Box<[u32]>>,
    proj: u32,
    arc_in: u32,
    key: u64,
}

#[derive(Clone, Debug)]
enum Source {
    Frozen,
    Lift,
    Random { os: Arc<OrbitStructure>, seed: u64 },
}

#[derive(Clone, Debug)]
pub struct TreeBall {
    n: usize,
    nodes: Vec<Node>,
    source: Source,
    graph: Option<Arc<LabelledGraph>>,
    ceiling: usize,
    root_name: String,
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

impl TreeBall {
    fn with_root(n: usize, source: Source, graph: Option<Arc<LabelledGraph>>, proj: u32, name: String) -> Self {
        TreeBall {
            n,
            nodes: vec![Node {
                parent: NONE,
                depth: 0,
                down: Label(0),
                up: Label(0),
                children: Vec::new(),
                by_label: None,
                proj,
                arc_in: NONE,
                key: 0,
            }],
            source,
            graph,
            ceiling: DEFAULT_VERTEX_CEILING,
            root_name: name,
        }
    }

    /// The universal-cover ball of `graph` at `base`. Only local
    /// bijectivity is required of the graph.
    pub fn lift(graph: Arc<LabelledGraph>, base: usize, radius: usize) -> Result<Self> {
        let n = graph.degree();
        graph.check_bijective(n)?;
        if base >= graph.num_vertices() {
            return Err(Error::InvalidGraph(format!("no base vertex {base}")));
        }
        let name = graph.vertex_name(base).to_string();
        let mut ball = Self::with_root(n, Source::Lift, Some(graph), base as u32, name);
        ball.ensure_radius(radius)?;
        Ok(ball)
    }

    /// Lazily expandable lift: only the root is materialized.
    pub fn lift_lazy(graph: Arc<LabelledGraph>, base: usize) -> Result<Self> {
        Self::lift(graph, base, 0)
    }

    /// A random tau-legal ball: every child picks the label of its parent
    /// arc uniformly from the block paired by tau with the parent's label.
    /// Choices are keyed by vertex, so lazy expansion order does not matter.
    pub fn random_tau_legal(os: &OrbitStructure, radius: usize, seed: u64) -> Result<Self> {
        let source = Source::Random {
            os: Arc::new(os.clone()),
            seed,
        };
        let mut ball = Self::with_root(os.n(), source, None, NONE, "r".into());
        ball.ensure_radius(radius)?;
        Ok(ball)
    }

    /// An empty frozen ball, to be filled with [`TreeBall::push_child`].
    pub fn frozen(n: usize, root_name: impl Into<String>) -> Self {
        Self::with_root(n, Source::Frozen, None, NONE, root_name.into())
    }

    pub fn with_ceiling(mut self, ceiling: usize) -> Self {
        self.ceiling = ceiling;
        self
    }

    pub fn set_ceiling(&mut self, ceiling: usize) {
        self.ceiling = ceiling;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> Vertex {
        Vertex(0)
    }

    pub fn root_name(&self) -> &str {
        &self.root_name
    }

    pub fn graph(&self) -> Option<&Arc<LabelledGraph>> {
        self.graph.as_ref()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        (0..self.nodes.len() as u32).map(Vertex)
    }

    pub fn depth(&self, v: Vertex) -> usize {
        self.nodes[v.idx()].depth as usize
    }

    pub fn parent(&self, v: Vertex) -> Option<Vertex> {
        let p = self.nodes[v.idx()].parent;
        (p != NONE).then_some(Vertex(p))
    }

    pub fn children(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.nodes[v.idx()].children.iter().map(|&c| Vertex(c))
    }

    /// Whether the full star of `v` is materialized.
    #[inline]
    pub fn is_internal(&self, v: Vertex) -> bool {
        self.nodes[v.idx()].by_label.is_some()
    }

    /// Parent first (if any), then children in creation order.
    pub fn neighbors(&self, v: Vertex) -> Vec<Vertex> {
        let node = &self.nodes[v.idx()];
        let mut out = Vec::with_capacity(node.children.len() + 1);
        if node.parent != NONE {
            out.push(Vertex(node.parent));
        }
        out.extend(node.children.iter().map(|&c| Vertex(c)));
        out
    }

    /// Materialized arcs with origin `v`.
    pub fn star(&self, v: Vertex) -> Vec<BallArc> {
        self.neighbors(v)
            .into_iter()
            .map(|w| BallArc::new(v, w))
            .collect()
    }

    pub fn are_adjacent(&self, a: Vertex, b: Vertex) -> bool {
        self.nodes[a.idx()].parent == b.0 || self.nodes[b.idx()].parent == a.0
    }

    /// Label of the arc `from → to`, if the two vertices are adjacent.
    #[inline]
    pub fn label(&self, arc: BallArc) -> Option<Label> {
        let (f, t) = (&self.nodes[arc.from.idx()], &self.nodes[arc.to.idx()]);
        if f.parent == arc.to.0 {
            Some(f.up)
        } else if t.parent == arc.from.0 {
            Some(t.down)
        } else {
            None
        }
    }

    /// Label at `v` of the arc toward the parent.
    pub fn up_label(&self, v: Vertex) -> Option<Label> {
        self.parent(v).map(|_| self.nodes[v.idx()].up)
    }

    /// Label at the parent of the arc toward `v`.
    pub fn down_label(&self, v: Vertex) -> Option<Label> {
        self.parent(v).map(|_| self.nodes[v.idx()].down)
    }

    /// The neighbor of `v` across the arc labelled `label` (needs `v`
    /// internal).
    #[inline]
    pub fn neighbor_by_label(&self, v: Vertex, label: Label) -> Option<Vertex> {
        let table = self.nodes[v.idx()].by_label.as_ref()?;
        let w = *table.get(label.index())?;
        (w != NONE).then_some(Vertex(w))
    }

    pub fn arc_by_label(&self, v: Vertex, label: Label) -> Option<BallArc> {
        self.neighbor_by_label(v, label).map(|w| BallArc::new(v, w))
    }

    /// The labelling at an internal vertex as a permutation `slot → label`
    /// is not canonical; this returns the map `label ↦ label'` of another
    /// labelling on the same star instead (used for `(f_x)` recovery).
    pub fn star_labels(&self, v: Vertex) -> Vec<(BallArc, Label)> {
        self.star(v)
            .into_iter()
            .map(|a| (a, self.label(a).expect("star arcs are adjacent")))
            .collect()
    }

    /// Reduced label path from the root.
    pub fn path(&self, v: Vertex) -> Vec<Label> {
        let mut out = Vec::with_capacity(self.depth(v));
        let mut cur = v.0;
        while self.nodes[cur as usize].parent != NONE {
            out.push(self.nodes[cur as usize].down);
            cur = self.nodes[cur as usize].parent;
        }
        out.reverse();
        out
    }

    /// `/l1/l2/...`, or `/` for the root.
    pub fn path_string(&self, v: Vertex) -> String {
        let path = self.path(v);
        if path.is_empty() {
            return "/".into();
        }
        path.iter().map(|l| format!("/{l}")).collect()
    }

    pub fn find_path(&self, labels: &[Label]) -> Option<Vertex> {
        let mut cur = self.root();
        for &l in labels {
            let next = self.neighbor_by_label(cur, l)?;
            if self.parent(cur) == Some(next) {
                return None;
            }
            cur = next;
        }
        Some(cur)
    }

    /// Parses `/l1/l2/...` (one-based labels).
    pub fn find_path_str(&self, path: &str) -> Option<Vertex> {
        let labels = parse_path(path)?;
        self.find_path(&labels)
    }

    /// Largest `r` such that every vertex of depth `< r` is internal.
    pub fn materialized_radius(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| n.by_label.is_none())
            .map(|n| n.depth as usize)
            .min()
            .unwrap_or(usize::MAX)
    }

    pub fn is_frozen(&self) -> bool {
        matches!(self.source, Source::Frozen)
    }

    /// Graph vertex under the covering projection.
    pub fn projection(&self, v: Vertex) -> Option<usize> {
        let p = self.nodes[v.idx()].proj;
        (p != NONE).then_some(p as usize)
    }

    /// Graph arc that a ball arc projects to.
    pub fn project_arc(&self, arc: BallArc) -> Option<GraphArc> {
        let graph = self.graph.as_ref()?;
        let (f, t) = (&self.nodes[arc.from.idx()], &self.nodes[arc.to.idx()]);
        if t.parent == arc.from.0 && t.arc_in != NONE {
            Some(t.arc_in as usize)
        } else if f.parent == arc.to.0 && f.arc_in != NONE {
            Some(graph.bar(f.arc_in as usize))
        } else {
            None
        }
    }

    /// Reduced path of graph arcs from the base vertex to `v`.
    pub fn arc_path(&self, v: Vertex) -> Option<Vec<GraphArc>> {
        self.graph.as_ref()?;
        let mut out = Vec::with_capacity(self.depth(v));
        let mut cur = v.0;
        while self.nodes[cur as usize].parent != NONE {
            out.push(self.nodes[cur as usize].arc_in as usize);
            cur = self.nodes[cur as usize].parent;
        }
        out.reverse();
        Some(out)
    }

    /// The neighbor of `v` across the lift of graph arc `a` (no expansion).
    pub fn neighbor_via_arc(&self, v: Vertex, a: GraphArc) -> Option<Vertex> {
        let graph = self.graph.as_ref()?;
        let node = &self.nodes[v.idx()];
        if node.proj as usize != graph.origin(a) {
            return None;
        }
        if node.parent != NONE && graph.bar(node.arc_in as usize) == a {
            return Some(Vertex(node.parent));
        }
        node.by_label.as_ref()?;
        let mut pos = graph.position(a);
        if node.parent != NONE {
            let skipped = graph.position(graph.bar(node.arc_in as usize));
            if pos > skipped {
                pos -= 1;
            }
        }
        let c = *node.children.get(pos)?;
        debug_assert_eq!(self.nodes[c as usize].arc_in as usize, a);
        Some(Vertex(c))
    }

    /// Follows a path of graph arcs from `start`, expanding lazily.
    pub fn walk_arcs(&mut self, start: Vertex, arcs: &[GraphArc]) -> Result<Vertex> {
        let mut cur = start;
        for &a in arcs {
            if !self.is_internal(cur) {
                self.expand(cur)?;
            }
            cur = self
                .neighbor_via_arc(cur, a)
                .ok_or(Error::NoProjection)?;
        }
        Ok(cur)
    }

    /// Follows a path of graph arcs from `start` without expanding.
    pub fn find_arcs(&self, start: Vertex, arcs: &[GraphArc]) -> Option<Vertex> {
        let mut cur = start;
        for &a in arcs {
            cur = self.neighbor_via_arc(cur, a)?;
        }
        Some(cur)
    }

    /// Materializes the star of `v`.
    pub fn expand(&mut self, v: Vertex) -> Result<()> {
        if self.is_internal(v) {
            return Ok(());
        }
        let specs = self.child_specs(v)?;
        if self.nodes.len() + specs.len() > self.ceiling {
            return Err(Error::VertexCeiling(self.ceiling));
        }
        let depth = self.nodes[v.idx()].depth + 1;
        let key = self.nodes[v.idx()].key;
        for (down, up, proj, arc_in) in specs {
            let id = self.nodes.len() as u32;
            self.nodes.push(Node {
                parent: v.0,
                depth,
                down,
                up,
                children: Vec::new(),
                by_label: None,
                proj,
                arc_in,
                key: splitmix(key ^ splitmix(down.0 as u64 + 1)),
            });
            self.nodes[v.idx()].children.push(id);
        }
        self.rebuild_index(v);
        Ok(())
    }

    fn child_specs(&self, v: Vertex) -> Result<Vec<(Label, Label, u32, u32)>> {
        let node = &self.nodes[v.idx()];
        match &self.source {
            Source::Frozen => Err(Error::NotMaterialized(format!(
                "vertex {} of a frozen ball",
                self.path_string(v)
            ))),
            Source::Lift => {
                let graph = self.graph.as_ref().expect("lift balls carry their graph");
                let q = node.proj as usize;
                let skip = (node.parent != NONE).then(|| graph.bar(node.arc_in as usize));
                Ok(graph
                    .out_arcs(q)
                    .iter()
                    .copied()
                    .filter(|&a| Some(a) != skip)
                    .map(|a| {
                        (
                            graph.label(a),
                            graph.label(graph.bar(a)),
                            graph.terminus(a) as u32,
                            a as u32,
                        )
                    })
                    .collect())
            }
            Source::Random { os, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(splitmix(seed ^ node.key));
                let mut specs = Vec::with_capacity(self.n);
                for a in (0..self.n).map(Label::from_index) {
                    if node.parent != NONE && a == node.up {
                        continue;
                    }
                    let partner = os.block(os.tau(os.block_of(a)));
                    let up = partner[rng.gen_range(0..partner.len())];
                    specs.push((a, up, NONE, NONE));
                }
                Ok(specs)
            }
        }
    }

    fn rebuild_index(&mut self, v: Vertex) {
        let mut table = vec![NONE; self.n].into_boxed_slice();
        let node = &self.nodes[v.idx()];
        for &c in &node.children {
            let l = self.nodes[c as usize].down.index();
            if l < self.n && table[l] == NONE {
                table[l] = c;
            }
        }
        if node.parent != NONE {
            let l = node.up.index();
            if l < self.n && table[l] == NONE {
                table[l] = node.parent;
            }
        }
        self.nodes[v.idx()].by_label = Some(table);
    }

    /// Expands every vertex of depth `< radius`.
    pub fn ensure_radius(&mut self, radius: usize) -> Result<()> {
        let mut i = 0;
        while i < self.nodes.len() {
            if (self.nodes[i].depth as usize) < radius {
                self.expand(Vertex(i as u32))?;
            }
            i += 1;
        }
        Ok(())
    }

    /// Expands every vertex within distance `< radius` of `center`.
    pub fn ensure_ball_around(&mut self, center: Vertex, radius: usize) -> Result<()> {
        let mut dist = vec![usize::MAX; self.nodes.len()];
        dist[center.idx()] = 0;
        let mut queue = VecDeque::from([center]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v.idx()];
            if d >= radius {
                continue;
            }
            self.expand(v)?;
            if dist.len() < self.nodes.len() {
                dist.resize(self.nodes.len(), usize::MAX);
            }
            for w in self.neighbors(v) {
                if dist[w.idx()] == usize::MAX {
                    dist[w.idx()] = d + 1;
                    queue.push_back(w);
                }
            }
        }
        Ok(())
    }

    /// Vertices within distance `radius` of `center` (materialized only),
    /// in breadth-first order, with their distances.
    pub fn ball_around(&self, center: Vertex, radius: usize) -> Vec<(Vertex, usize)> {
        let mut dist = vec![usize::MAX; self.nodes.len()];
        dist[center.idx()] = 0;
        let mut out = vec![(center, 0)];
        let mut head = 0;
        while head < out.len() {
            let (v, d) = out[head];
            head += 1;
            if d == radius {
                continue;
            }
            for w in self.neighbors(v) {
                if dist[w.idx()] == usize::MAX {
                    dist[w.idx()] = d + 1;
                    out.push((w, d + 1));
                }
            }
        }
        out
    }

    /// Tree distance between two materialized vertices.
    pub fn distance(&self, a: Vertex, b: Vertex) -> usize {
        let (mut x, mut y) = (a.0, b.0);
        let mut d = 0;
        while self.nodes[x as usize].depth > self.nodes[y as usize].depth {
            x = self.nodes[x as usize].parent;
            d += 1;
        }
        while self.nodes[y as usize].depth > self.nodes[x as usize].depth {
            y = self.nodes[y as usize].parent;
            d += 1;
        }
        while x != y {
            x = self.nodes[x as usize].parent;
            y = self.nodes[y as usize].parent;
            d += 2;
        }
        d
    }

    /// The neighbor of `v` one step closer to `target` (`None` if equal).
    pub fn step_toward(&self, v: Vertex, target: Vertex) -> Option<Vertex> {
        if v == target {
            return None;
        }
        // target lies below v iff v is an ancestor of target
        let mut t = target.0;
        while self.nodes[t as usize].depth > self.nodes[v.idx()].depth + 1 {
            t = self.nodes[t as usize].parent;
        }
        if self.nodes[t as usize].parent == v.0 {
            Some(Vertex(t))
        } else {
            self.parent(v)
        }
    }

    /// A copy with the same vertices and a new labelling given arcwise.
    /// The result is frozen; the covering projection is kept.
    pub fn relabelled(&self, mut label: impl FnMut(BallArc) -> Label) -> TreeBall {
        let mut out = self.clone();
        out.source = Source::Frozen;
        for i in 1..out.nodes.len() {
            let v = Vertex(i as u32);
            let p = Vertex(out.nodes[i].parent);
            out.nodes[i].down = label(BallArc::new(p, v));
            out.nodes[i].up = label(BallArc::new(v, p));
        }
        for i in 0..out.nodes.len() {
            if out.nodes[i].by_label.is_some() {
                out.rebuild_index(Vertex(i as u32));
            }
        }
        out
    }

    /// A frozen copy (same labels, no further expansion).
    pub fn freeze(&self) -> TreeBall {
        let mut out = self.clone();
        out.source = Source::Frozen;
        out
    }

    /// Overwrites one arc label in place (used to build corrupted fixtures).
    pub fn set_label(&mut self, arc: BallArc, label: Label) -> Result<()> {
        let (f, t) = (arc.from, arc.to);
        if self.nodes[f.idx()].parent == t.0 {
            self.nodes[f.idx()].up = label;
        } else if self.nodes[t.idx()].parent == f.0 {
            self.nodes[t.idx()].down = label;
        } else {
            return Err(Error::InvalidMap("arc endpoints are not adjacent".into()));
        }
        for v in [f, t] {
            if self.is_internal(v) {
                self.rebuild_index(v);
            }
        }
        Ok(())
    }

    /// Adds a child of `parent` in a frozen ball; `parent` becomes internal
    /// once [`TreeBall::seal`] runs.
    pub fn push_child(&mut self, parent: Vertex, down: Label, up: Label) -> Vertex {
        let id = self.nodes.len() as u32;
        let depth = self.nodes[parent.idx()].depth + 1;
        self.nodes.push(Node {
            parent: parent.0,
            depth,
            down,
            up,
            children: Vec::new(),
            by_label: None,
            proj: NONE,
            arc_in: NONE,
            key: 0,
        });
        self.nodes[parent.idx()].children.push(id);
        Vertex(id)
    }

    /// Marks every vertex with children as internal and builds label
    /// indices.
    pub fn seal(&mut self) {
        for i in 0..self.nodes.len() {
            if !self.nodes[i].children.is_empty() {
                self.rebuild_index(Vertex(i as u32));
            }
        }
    }

    /// `l_x` composed with another labelling's `l'_x^{-1}` on the star of an
    /// internal vertex: the permutation `i ↦ other(arc with self-label i)`.
    pub fn star_transition(&self, other: &TreeBall, v: Vertex) -> Result<Permutation> {
        let mut images = vec![0u32; self.n];
        for arc in self.star(v) {
            let a = self.label(arc).expect("adjacent");
            let b = other.label(arc).ok_or_else(|| {
                Error::InvalidMap("balls do not share the vertex arena".into())
            })?;
            images[a.index()] = b.0;
        }
        Permutation::from_images(images)
    }
}

/// Parses `/l1/l2/...` into one-based labels; `/` is the empty path.
pub fn parse_path(path: &str) -> Option<Vec<Label>> {
    let rest = path.strip_prefix('/')?;
    if rest.is_empty() {
        return Some(Vec::new());
    }
    rest.split('/')
        .map(|t| t.parse::<usize>().ok().filter(|&v| v >= 1).map(Label::new))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy_rose() -> Arc<LabelledGraph> {
        let mut g = LabelledGraph::new();
        let x = g.add_vertex("x");
        g.add_edge("a", x, x, Label::new(1), Label::new(3));
        g.add_edge("b", x, x, Label::new(2), Label::new(4));
        Arc::new(g)
    }

    #[test]
    fn lift_counts_follow_regular_tree() {
        let ball = TreeBall::lift(toy_rose(), 0, 2).unwrap();
        assert_eq!(ball.len(), 1 + 4 + 4 * 3);
        assert_eq!(ball.materialized_radius(), 2);
    }

    #[test]
    fn paths_round_trip() {
        let ball = TreeBall::lift(toy_rose(), 0, 3).unwrap();
        for v in ball.vertices() {
            let s = ball.path_string(v);
            assert_eq!(ball.find_path_str(&s), Some(v));
        }
        assert_eq!(ball.find_path_str("/"), Some(ball.root()));
    }

    #[test]
    fn labels_follow_the_graph() {
        let ball = TreeBall::lift(toy_rose(), 0, 1).unwrap();
        let child = ball.find_path_str("/1").unwrap();
        assert_eq!(ball.up_label(child), Some(Label::new(3)));
        assert_eq!(ball.label(BallArc::new(child, ball.root())), Some(Label::new(3)));
    }

    #[test]
    fn lazy_walk_expands_on_demand() {
        let g = toy_rose();
        let mut ball = TreeBall::lift_lazy(g.clone(), 0).unwrap();
        assert_eq!(ball.len(), 1);
        let a = g.arc_by_name("a").unwrap();
        let v = ball.walk_arcs(ball.root(), &[a, a, a]).unwrap();
        assert_eq!(ball.depth(v), 3);
        assert_eq!(ball.path_string(v), "/1/1/1");
        assert_eq!(ball.arc_path(v).unwrap(), vec![a, a, a]);
    }

    #[test]
    fn ceiling_is_enforced() {
        let mut ball = TreeBall::lift_lazy(toy_rose(), 0).unwrap().with_ceiling(10);
        assert_eq!(ball.ensure_radius(2), Err(Error::VertexCeiling(10)));
    }

    #[test]
    fn random_balls_are_order_independent() {
        let os = OrbitStructure::single_block(4);
        let full = TreeBall::random_tau_legal(&os, 3, 7).unwrap();
        let mut lazy = TreeBall::random_tau_legal(&os, 0, 7).unwrap();
        let deep = full.vertices().last().unwrap();
        let labels = full.path(deep);
        let mut cur = lazy.root();
        for l in labels {
            lazy.expand(cur).unwrap();
            cur = lazy.neighbor_by_label(cur, l).unwrap();
        }
        assert_eq!(lazy.up_label(cur), full.up_label(deep));
    }

    #[test]
    fn distance_and_steps() {
        let ball = TreeBall::lift(toy_rose(), 0, 3).unwrap();
        let a = ball.find_path_str("/1/1").unwrap();
        let b = ball.find_path_str("/2/2/1").unwrap();
        assert_eq!(ball.distance(a, b), 5);
        assert_eq!(ball.step_toward(a, b), ball.find_path_str("/1"));
        assert_eq!(ball.step_toward(ball.root(), b), ball.find_path_str("/2"));
    }
}
