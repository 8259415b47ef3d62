//! The subdivided tree with fins encoding a universal group: every edge is
//! cut into `n` unit edges and every internal vertex `x` carries one fin
//! `Y_{x,f}` per `f ∈ F`, made of paths of lengths `1..n` glued along the
//! arcs labelled `f(1), …, f(n)`.
//!
//! Fins are stored by their key `(x, f)` and attachment arcs; the explicit
//! cell structure is produced only on request (toy sizes).

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::labelled::{BallArc, BallMap, TreeBall, Vertex};
use crate::perm::{Label, Permutation};
use crate::universal::{enumerate_ball_stabilizer, recover_family, EquivariantFamily};

pub const DEFAULT_FIN_CEILING: usize = 10_000;

#[derive(Clone, Debug)]
pub struct FinComplexBall {
    base: TreeBall,
    group: PermGroup,
    radius: usize,
    /// Internal vertices in id order.
    internal: Vec<Vertex>,
    slot: HashMap<Vertex, usize>,
    /// Per internal vertex: for fin `k` (index into the sorted elements of F)
    /// and path `i`, the neighbor reached by the arc carrying `P_i`.
    attach: Vec<Vec<u32>>,
}

impl FinComplexBall {
    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn base(&self) -> &TreeBall {
        &self.base
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn internal(&self) -> &[Vertex] {
        &self.internal
    }

    pub fn fins_per_vertex(&self) -> usize {
        self.attach.first().map(|a| a.len() / self.n()).unwrap_or(0)
    }

    pub fn has_fins(&self, x: Vertex) -> bool {
        self.slot.contains_key(&x)
    }

    /// Arc carrying path `P_i` (one-based `i`) of fin `k` at `x`.
    pub fn attachment(&self, x: Vertex, k: usize, i: usize) -> Option<BallArc> {
        let s = *self.slot.get(&x)?;
        let w = *self.attach[s].get(k * self.n() + i - 1)?;
        Some(BallArc::new(x, Vertex(w)))
    }

    /// `i ↦ l(arc carrying P_i)` for fin `k` at `x`.
    pub fn attachment_labels(&self, x: Vertex, k: usize) -> Option<Vec<Label>> {
        (1..=self.n())
            .map(|i| self.attachment(x, k, i).and_then(|a| self.base.label(a)))
            .collect()
    }

    pub fn fin_element(&self, k: usize) -> Result<&Permutation> {
        Ok(&self.group.elements()?[k])
    }

    /// Unit edges of the subdivided tree and of the fins (no cylinder edges).
    pub fn unit_edge_count(&self) -> usize {
        let n = self.n();
        let chains = self.base.len().saturating_sub(1) * n;
        chains + self.internal.len() * self.fins_per_vertex() * n * (n + 1) / 2
    }

    /// `.fx` dump ordered by vertex path, then by `f`.
    pub fn to_fx(&self) -> Result<String> {
        let mut verts: Vec<(Vec<Label>, Vertex)> = self.base.vertices().map(|v| (self.base.path(v), v)).collect();
        verts.sort();
        let mut out = format!("basevertex {}\n", self.base.path_string(self.base.root()));
        let n = self.n();
        let elements = self.group.elements()?;
        for (_, v) in verts {
            let p = self.base.path_string(v);
            let mut kids: Vec<Label> = self.base.children(v).map(|c| self.base.down_label(c).unwrap()).collect();
            kids.sort();
            for l in kids {
                writeln!(out, "chain {p} {l} {n}").unwrap();
            }
            if self.has_fins(v) {
                for (k, f) in elements.iter().enumerate() {
                    let labels = self.attachment_labels(v, k).expect("fins at internal vertex");
                    let labels: Vec<String> = labels.iter().map(|l| l.to_string()).collect();
                    writeln!(out, "fin {p} {} : {}", f.one_line(), labels.join(" ")).unwrap();
                }
            }
        }
        Ok(out)
    }
}

/// Builds the fin complex over the vertices of depth `< radius` and checks
/// the attachment invariants.
pub fn build_fins(l: &TreeBall, group: &PermGroup, radius: usize) -> Result<FinComplexBall> {
    build_fins_with_ceiling(l, group, radius, DEFAULT_FIN_CEILING)
}

pub fn build_fins_with_ceiling(l: &TreeBall, group: &PermGroup, radius: usize, ceiling: usize) -> Result<FinComplexBall> {
    let order = group.order()?;
    if order > ceiling {
        return Err(Error::FinCeiling { fins: order, ceiling });
    }
    if group.degree() != l.n() {
        return Err(Error::DegreeMismatch(group.degree(), l.n()));
    }
    let n = l.n();
    let elements = group.elements()?;
    let mut internal = Vec::new();
    let mut attach = Vec::new();
    for v in l.vertices() {
        if l.depth(v) >= radius {
            continue;
        }
        if !l.is_internal(v) {
            return Err(Error::NotMaterialized(l.path_string(v)));
        }
        let mut table = Vec::with_capacity(order * n);
        for f in elements {
            for i in 0..n {
                let w = l
                    .neighbor_by_label(v, f.apply(Label::from_index(i)))
                    .ok_or_else(|| Error::NotMaterialized(l.path_string(v)))?;
                table.push(w.0);
            }
        }
        internal.push(v);
        attach.push(table);
    }
    let slot = internal.iter().enumerate().map(|(s, &v)| (v, s)).collect();
    let fc = FinComplexBall {
        base: l.clone(),
        group: group.clone(),
        radius,
        internal,
        slot,
        attach,
    };
    for &x in &fc.internal {
        for (k, f) in elements.iter().enumerate() {
            let labels = fc.attachment_labels(x, k).expect("built above");
            if labels.iter().enumerate().any(|(i, &lab)| lab != f.apply(Label::from_index(i))) {
                return Err(Error::VerificationFailed(format!(
                    "fin {} at {} is attached along wrong labels",
                    f,
                    l.path_string(x)
                )));
            }
        }
    }
    Ok(fc)
}

/// Re-derives each fin's permutation from the labels of the arcs its paths
/// are glued to. An automorphism fixing `x` and every chain at `x` fixes
/// those arcs, so it can only send a fin to the fin with the same derived
/// permutation; rigidity holds when that is the fin itself.
pub fn fin_rigidity_check(fc: &FinComplexBall, x: Vertex) -> Result<bool> {
    if !fc.has_fins(x) {
        return Err(Error::NotInternal(fc.base.path_string(x)));
    }
    let elements = fc.group.elements()?;
    let mut seen = HashSet::with_capacity(elements.len());
    for (k, f) in elements.iter().enumerate() {
        let derived = fc.attachment_labels(x, k).expect("internal");
        let derived = Permutation::from_images(derived.iter().map(|l| l.0).collect())?;
        if derived != *f || !seen.insert(derived) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A map of fin complexes: the base map together with `(x, f) ↦ (gx, f_x∘f)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinMap {
    pub base: BallMap,
    /// `(x, k) ↦ (gx, k')` with `k, k'` indices into the sorted elements.
    pub assignment: Vec<((Vertex, usize), (Vertex, usize))>,
}

impl FinMap {
    pub fn fin_image(&self, x: Vertex, k: usize) -> Option<(Vertex, usize)> {
        self.assignment.iter().find(|(a, _)| *a == (x, k)).map(|&(_, b)| b)
    }

    pub fn is_identity(&self) -> bool {
        self.base.is_identity() && self.assignment.iter().all(|(a, b)| a == b)
    }
}

/// Extends `(g, (f_x))` to the fins and checks, path by path, that the
/// gluing maps commute with the extension.
pub fn extend_to_fins(
    dom: &FinComplexBall,
    cod: &FinComplexBall,
    g: &BallMap,
    family: &EquivariantFamily,
) -> Result<FinMap> {
    let en = dom.group.enumerate()?;
    let n = dom.n();
    let mut assignment = Vec::new();
    for &x in &dom.internal {
        let Some(fx) = family.get(x) else { continue };
        let fx_idx = en
            .index_of(fx)
            .ok_or_else(|| Error::DiagramFailure(format!("f_x = {fx} is not in F")))?;
        let gx = g
            .get(x)
            .ok_or_else(|| Error::DiagramFailure(format!("{} is unmapped", dom.base.path_string(x))))?;
        if !cod.has_fins(gx) {
            return Err(Error::DiagramFailure(format!("{} carries no fins", cod.base.path_string(gx))));
        }
        let mut images = vec![false; en.len()];
        for k in 0..en.len() {
            let k2 = en.mul(fx_idx, k);
            images[k2] = true;
            for i in 1..=n {
                let a = dom.attachment(x, k, i).expect("internal");
                let b = cod.attachment(gx, k2, i).expect("internal");
                if g.arc(a) != Some(b) {
                    return Err(Error::DiagramFailure(format!(
                        "path {i} of fin {} at {}",
                        en.elements()[k],
                        dom.base.path_string(x)
                    )));
                }
            }
            assignment.push(((x, k), (gx, k2)));
        }
        if images.iter().any(|&hit| !hit) {
            return Err(Error::DiagramFailure("fin assignment is not a bijection".into()));
        }
    }
    Ok(FinMap {
        base: g.clone(),
        assignment,
    })
}

/// A point of the subdivided tree with fins.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Tree(Vertex),
    /// On the edge from `parent(child)` to `child`, `k` unit steps from the
    /// parent (`0 < k < n`).
    Sub { child: Vertex, k: u32 },
    /// Fin `(x, f)`: `i = t = 0` is the fin's base vertex, otherwise the
    /// point at distance `t` along path `P_i`.
    Fin { x: Vertex, f: u32, i: u32, t: u32 },
}

type Edge = (Point, Point);

/// Explicit cells of a fin complex: unit edges of the subdivided tree and
/// fins, cylinder edges joining fin points to their images, and squares.
#[derive(Clone, Debug, Default)]
pub struct Cells {
    pub tree_edges: Vec<(Point, Point)>,
    pub fin_edges: Vec<(Point, Point)>,
    pub cylinder_edges: Vec<(Point, Point)>,
    /// `(a, b, γb, γa)` for each fin edge `(a, b)`.
    pub squares: Vec<[Point; 4]>,
}

impl Cells {
    pub fn unit_edges(&self) -> usize {
        self.tree_edges.len() + self.fin_edges.len()
    }

    pub fn all_edges(&self) -> impl Iterator<Item = &(Point, Point)> {
        self.tree_edges
            .iter()
            .chain(&self.fin_edges)
            .chain(&self.cylinder_edges)
    }

    /// Breadth-first distances in the 1-skeleton, up to `limit`.
    pub fn distances_from(&self, start: Point, limit: usize) -> HashMap<Point, usize> {
        let mut adj: HashMap<Point, Vec<Point>> = HashMap::new();
        for &(a, b) in self.all_edges() {
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
        let mut dist = HashMap::from([(start, 0)]);
        let mut queue = VecDeque::from([start]);
        while let Some(p) = queue.pop_front() {
            let d = dist[&p];
            if d == limit {
                continue;
            }
            for &q in adj.get(&p).map(Vec::as_slice).unwrap_or(&[]) {
                if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(q) {
                    e.insert(d + 1);
                    queue.push_back(q);
                }
            }
        }
        dist
    }

    /// No two squares share two edges, and every vertex link is a simple
    /// graph without triangles.
    pub fn local_cat0_checks(&self) -> bool {
        let key = |a: Point, b: Point| if a <= b { (a, b) } else { (b, a) };
        let mut edge_owner: HashMap<(Point, Point), Vec<usize>> = HashMap::new();
        for (s, sq) in self.squares.iter().enumerate() {
            for j in 0..4 {
                edge_owner.entry(key(sq[j], sq[(j + 1) % 4])).or_default().push(s);
            }
        }
        let mut shared: HashMap<(usize, usize), usize> = HashMap::new();
        for owners in edge_owner.values() {
            for (a, &s) in owners.iter().enumerate() {
                for &t in &owners[a + 1..] {
                    *shared.entry((s.min(t), s.max(t))).or_default() += 1;
                }
            }
        }
        if shared.values().any(|&c| c >= 2) {
            return false;
        }
        // link of p: vertices are edges at p, one link edge per square corner
        let mut links: HashMap<Point, Vec<(Edge, Edge)>> = HashMap::new();
        for sq in &self.squares {
            for j in 0..4 {
                let p = sq[j];
                let e1 = key(p, sq[(j + 1) % 4]);
                let e2 = key(p, sq[(j + 3) % 4]);
                links.entry(p).or_default().push((e1.min(e2), e1.max(e2)));
            }
        }
        for edges in links.values() {
            let mut set = HashSet::new();
            let mut adj: HashMap<(Point, Point), HashSet<(Point, Point)>> = HashMap::new();
            for &(a, b) in edges {
                if a == b || !set.insert((a, b)) {
                    return false;
                }
                adj.entry(a).or_default().insert(b);
                adj.entry(b).or_default().insert(a);
            }
            for &(a, b) in edges {
                if adj[&a].intersection(&adj[&b]).next().is_some() {
                    return false;
                }
            }
        }
        true
    }
}

impl FinComplexBall {
    /// The point at distance `t` from `a.from` along the chain of `a`.
    pub fn chain_point(&self, a: BallArc, t: usize) -> Point {
        let n = self.n();
        if t == 0 {
            return Point::Tree(a.from);
        }
        if t == n {
            return Point::Tree(a.to);
        }
        if self.base.parent(a.to) == Some(a.from) {
            Point::Sub { child: a.to, k: t as u32 }
        } else {
            Point::Sub {
                child: a.from,
                k: (n - t) as u32,
            }
        }
    }

    /// Image of a fin point under the gluing map.
    pub fn glue(&self, p: Point) -> Point {
        match p {
            Point::Fin { x, i: 0, .. } => Point::Tree(x),
            Point::Fin { x, f, i, t } => {
                let a = self.attachment(x, f as usize, i as usize).expect("fin exists");
                self.chain_point(a, t as usize)
            }
            other => other,
        }
    }

    /// Enumerates every cell. Intended for small `n` and `|F|`.
    pub fn cells(&self) -> Cells {
        let n = self.n();
        let mut cells = Cells::default();
        for v in self.base.vertices() {
            if let Some(p) = self.base.parent(v) {
                let a = BallArc::new(p, v);
                for t in 0..n {
                    cells.tree_edges.push((self.chain_point(a, t), self.chain_point(a, t + 1)));
                }
            }
        }
        for &x in &self.internal {
            for k in 0..self.fins_per_vertex() {
                let base = Point::Fin { x, f: k as u32, i: 0, t: 0 };
                cells.cylinder_edges.push((base, self.glue(base)));
                for i in 1..=n as u32 {
                    let mut prev = base;
                    for t in 1..=i {
                        let q = Point::Fin { x, f: k as u32, i, t };
                        cells.fin_edges.push((prev, q));
                        cells.cylinder_edges.push((q, self.glue(q)));
                        cells.squares.push([prev, q, self.glue(q), self.glue(prev)]);
                        prev = q;
                    }
                }
            }
        }
        cells
    }
}

impl FinMap {
    /// Image of a point of the domain complex, when defined.
    pub fn point_image(&self, dom: &FinComplexBall, cod: &FinComplexBall, p: Point) -> Option<Point> {
        match p {
            Point::Tree(v) => Some(Point::Tree(self.base.get(v)?)),
            Point::Sub { child, k } => {
                let parent = dom.base.parent(child)?;
                let a = BallArc::new(parent, child);
                let ga = self.base.arc(a)?;
                Some(cod.chain_point(ga, k as usize))
            }
            Point::Fin { x, f, i, t } => {
                let (gx, k) = self.fin_image(x, f as usize)?;
                Some(Point::Fin { x: gx, f: k as u32, i, t })
            }
        }
    }

    /// Whether every cell of `dom` maps onto a cell of `cod` of the same
    /// type, wherever the image is defined. Returns the number of cells
    /// checked.
    pub fn check_cells(&self, dom: &FinComplexBall, cod: &FinComplexBall) -> Result<usize> {
        let (dc, cc) = (dom.cells(), cod.cells());
        let key = |a: Point, b: Point| if a <= b { (a, b) } else { (b, a) };
        let cod_edges: HashSet<(Point, Point)> = cc.all_edges().map(|&(a, b)| key(a, b)).collect();
        let square_key = |sq: [Point; 4]| {
            let mut s = sq.to_vec();
            s.sort();
            s
        };
        let cod_squares: HashSet<Vec<Point>> = cc.squares.iter().map(|&s| square_key(s)).collect();
        let mut checked = 0;
        for &(a, b) in dc.all_edges() {
            if let (Some(ga), Some(gb)) = (self.point_image(dom, cod, a), self.point_image(dom, cod, b)) {
                checked += 1;
                if !cod_edges.contains(&key(ga, gb)) {
                    return Err(Error::DiagramFailure(format!("edge {a:?}-{b:?} is not sent to an edge")));
                }
            }
        }
        for sq in &dc.squares {
            let img: Option<Vec<Point>> = sq.iter().map(|&p| self.point_image(dom, cod, p)).collect();
            if let Some(img) = img {
                checked += 1;
                if !cod_squares.contains(&square_key([img[0], img[1], img[2], img[3]])) {
                    return Err(Error::DiagramFailure(format!("square at {:?} is not sent to a square", sq[0])));
                }
            }
        }
        Ok(checked)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrespondenceCount {
    pub base_members: usize,
    pub fin_maps: usize,
    /// `(k, maps fixing the nk-ball in the fin complex, of which fix the
    /// k-ball in the base)`.
    pub contraction: Vec<(usize, usize, usize)>,
}

impl CorrespondenceCount {
    pub fn pair(&self) -> (usize, usize) {
        (self.base_members, self.fin_maps)
    }

    pub fn contraction_holds(&self) -> bool {
        self.contraction.iter().all(|&(_, a, b)| a == b)
    }
}

/// Counts base-ball stabilizer members and the distinct fin maps extending
/// them, and spot-checks that fin maps fixing the `nk`-ball about the root
/// fix the `k`-ball of the base.
pub fn fins_correspondence_count(l: &TreeBall, group: &PermGroup, radius: usize, cap: usize) -> Result<CorrespondenceCount> {
    let root = l.root();
    let members = enumerate_ball_stabilizer(l, root, group, radius, cap)?;
    let fc = build_fins(l, group, radius)?;
    let mut maps = HashSet::new();
    let mut fin_maps = Vec::new();
    for g in &members {
        let family = recover_family(g, l, l)?;
        let fm = extend_to_fins(&fc, &fc, g, &family)?;
        if maps.insert(fm.clone()) {
            fin_maps.push(fm);
        }
    }
    let cells = fc.cells();
    let n = l.n();
    let mut contraction = Vec::new();
    for k in 1..radius {
        let near: Vec<Point> = cells
            .distances_from(Point::Tree(root), n * k)
            .into_keys()
            .collect();
        let mut fixing = 0;
        let mut base_fixing = 0;
        for fm in &fin_maps {
            if near.iter().all(|&p| fm.point_image(&fc, &fc, p) == Some(p)) {
                fixing += 1;
                if l.ball_around(root, k).iter().all(|&(v, _)| fm.base.get(v) == Some(v)) {
                    base_fixing += 1;
                }
            }
        }
        contraction.push((k, fixing, base_fixing));
    }
    Ok(CorrespondenceCount {
        base_members: members.len(),
        fin_maps: fin_maps.len(),
        contraction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labelled::LabelledGraph;
    use crate::universal::extend;
    use std::sync::Arc;

    fn toy(radius: usize) -> TreeBall {
        let mut g = LabelledGraph::new();
        let a = g.add_vertex("a");
        let b = g.add_vertex("b");
        for i in 1..=3 {
            g.add_edge(format!("e{i}"), a, b, Label::new(i), Label::new(i));
        }
        TreeBall::lift(Arc::new(g), 0, radius).unwrap()
    }

    #[test]
    fn toy_counts() {
        let l = toy(1);
        let fc = build_fins(&l, &PermGroup::symmetric(3), 1).unwrap();
        assert_eq!(fc.fins_per_vertex(), 6);
        assert_eq!(fc.unit_edge_count(), 45);
        let cells = fc.cells();
        assert_eq!(cells.unit_edges(), 45);
        assert!(cells.local_cat0_checks());
        assert!(fin_rigidity_check(&fc, l.root()).unwrap());
    }

    #[test]
    fn transposition_swaps_fins_in_pairs() {
        let l = toy(3);
        let s3 = PermGroup::symmetric(3);
        let fc = build_fins(&l, &s3, 2).unwrap();
        let f0 = Permutation::parse("2 1 3").unwrap();
        let ext = extend(&l, l.root(), &l, l.root(), &f0, &s3, 1).unwrap();
        let fm = extend_to_fins(&fc, &fc, &ext.map, &ext.family).unwrap();
        for k in 0..6 {
            let (v, k2) = fm.fin_image(l.root(), k).unwrap();
            assert_eq!(v, l.root());
            assert_ne!(k2, k);
            assert_eq!(fm.fin_image(l.root(), k2).unwrap().1, k);
        }
        assert!(fm.check_cells(&fc, &fc).unwrap() > 0);
    }

    #[test]
    fn correspondence_on_toy() {
        let s3 = PermGroup::symmetric(3);
        let c = fins_correspondence_count(&toy(1), &s3, 1, 1000).unwrap();
        assert_eq!(c.pair(), (6, 6));
        let c = fins_correspondence_count(&toy(2), &s3, 2, 1000).unwrap();
        assert_eq!(c.pair(), (48, 48));
        assert!(c.contraction_holds());
        let c = fins_correspondence_count(&toy(2), &PermGroup::trivial(3), 2, 1000).unwrap();
        assert_eq!(c.pair(), (1, 1));
    }
}
