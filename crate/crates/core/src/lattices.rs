//! Deck groups of labelled graphs, the A_5 × C_60 fixtures, the lattice
//! `Λ^l(F)` with its map `Ψ`, and relabelling along a homomorphism
//! `θ: Γ → F`.

use std::collections::VecDeque;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::labelled::{
    first_illegal_edge, BallArc, BallMap, GraphArc, LabelledGraph, OrbitStructure, TreeBall, Vertex,
};
use crate::perm::{Label, Permutation};
use crate::universal::{extend, internal_domain, local_action, random_member, EquivariantFamily};

/// Even permutations of five points in lexicographic one-line order.
pub fn a5_elements() -> Vec<Permutation> {
    let mut out = Vec::with_capacity(60);
    let mut p: Vec<usize> = (0..5).collect();
    loop {
        let inversions = (0..5)
            .flat_map(|i| (i + 1..5).map(move |j| (i, j)))
            .filter(|&(i, j)| p[i] > p[j])
            .count();
        if inversions % 2 == 0 {
            out.push(Permutation::from_images(p.iter().map(|&v| v as u32).collect()).unwrap());
        }
        if !next_permutation(&mut p) {
            break;
        }
    }
    out
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn blocks_of(n: usize, sizes: usize) -> Vec<Vec<Label>> {
    (0..n / sizes)
        .map(|b| (b * sizes..(b + 1) * sizes).map(Label::from_index).collect())
        .collect()
}

/// Generators of `A_5 × C_60` acting on `{1..60·k}`: A_5 by left
/// translation `a_j ↦ s·a_j` on every block listed in `a5_blocks`, C_60 by
/// the shift `j ↦ j+1 mod 60` on `c60_block`.
fn product_generators(k: usize, a5_blocks: &[usize], c60_block: usize) -> Vec<Permutation> {
    let a5 = a5_elements();
    let index = |p: &Permutation| a5.iter().position(|q| q == p).unwrap();
    let s1 = Permutation::from_one_line(&[2, 3, 1, 4, 5]).unwrap();
    let s2 = Permutation::from_one_line(&[2, 3, 4, 5, 1]).unwrap();
    let n = 60 * k;
    let mut gens = Vec::new();
    for s in [s1, s2] {
        let mut images: Vec<u32> = (0..n as u32).collect();
        for &b in a5_blocks {
            for (j, a) in a5.iter().enumerate() {
                images[60 * b + j] = (60 * b + index(&s.after(a))) as u32;
            }
        }
        gens.push(Permutation::from_images(images).unwrap());
    }
    let mut images: Vec<u32> = (0..n as u32).collect();
    for j in 0..60 {
        images[60 * c60_block + j] = (60 * c60_block + (j + 1) % 60) as u32;
    }
    gens.push(Permutation::from_images(images).unwrap());
    gens
}

/// `A_5 × C_60` on 240 labels with blocks `Ω_1..Ω_4` of size 60 and
/// `τ = (12)(34)`. A_5 acts regularly and identically on `Ω_1, Ω_3, Ω_4`,
/// so `λ ↦ λ+60` maps `Ω_3` to `Ω_4` equivariantly.
pub fn canonical_f240() -> (PermGroup, OrbitStructure) {
    let group = PermGroup::new(240, product_generators(4, &[0, 2, 3], 1)).unwrap();
    let os = OrbitStructure::new(240, blocks_of(240, 60), vec![1, 0, 3, 2]).unwrap();
    (group, os)
}

/// `A_5 × C_60` on 120 labels: A_5 regular on `Ω_1`, C_60 on `Ω_2`,
/// `τ = (12)`.
pub fn canonical_f120() -> (PermGroup, OrbitStructure) {
    let group = PermGroup::new(120, product_generators(2, &[0], 1)).unwrap();
    let os = OrbitStructure::new(120, blocks_of(120, 60), vec![1, 0]).unwrap();
    (group, os)
}

/// Whether `i ↦ i + shift` (on the given labels) commutes with every
/// generator of `group`.
pub fn shift_is_equivariant(group: &PermGroup, from: &[Label], shift: usize) -> bool {
    let n = group.degree();
    group.generators().iter().all(|g| {
        from.iter().all(|&l| {
            let i = l.index();
            i + shift < n && g.image(i) + shift < n && g.image(i + shift) == g.image(i) + shift
        })
    })
}

fn rose(second_half: impl Fn(usize) -> usize) -> LabelledGraph {
    let mut g = LabelledGraph::new();
    let x = g.add_vertex("x");
    for k in 1..=60 {
        g.add_edge(format!("a{k}"), x, x, Label::new(k), Label::new(60 + k));
    }
    for j in 1..=60 {
        g.add_edge(format!("a{}", 60 + j), x, x, Label::new(120 + j), Label::new(second_half(j)));
    }
    g
}

/// One vertex with 120 loops: loop `k` labelled `(k, 60+k)`, loop `60+j`
/// labelled `(120+j, 180+j)`.
pub fn build_x() -> LabelledGraph {
    rose(|j| 180 + j)
}

/// As [`build_x`] with the labels `181..240` cyclically shifted: loop `60+j`
/// is labelled `(120+j, 180+(j mod 60)+1)`.
pub fn build_xprime() -> LabelledGraph {
    rose(|j| 180 + j % 60 + 1)
}

/// Free reduction of an arc word (no arc followed by its bar).
pub fn reduce(graph: &LabelledGraph, word: &[GraphArc]) -> Vec<GraphArc> {
    let mut out: Vec<GraphArc> = Vec::with_capacity(word.len());
    for &a in word {
        if out.last() == Some(&graph.bar(a)) {
            out.pop();
        } else {
            out.push(a);
        }
    }
    out
}

pub fn invert_word(graph: &LabelledGraph, word: &[GraphArc]) -> Vec<GraphArc> {
    word.iter().rev().map(|&a| graph.bar(a)).collect()
}

/// A deck transformation of the universal cover of a graph, given by a
/// reduced closed arc path at the base vertex. It sends the vertex with
/// reduced path `p` to the one with path `word · p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DeckElement {
    word: Vec<GraphArc>,
}

impl DeckElement {
    pub fn identity() -> Self {
        DeckElement { word: Vec::new() }
    }

    pub fn new(graph: &LabelledGraph, base: usize, word: &[GraphArc]) -> Result<Self> {
        let word = reduce(graph, word);
        let mut at = base;
        for &a in &word {
            if graph.origin(a) != at {
                return Err(Error::InvalidMap("arc word is not a path".into()));
            }
            at = graph.terminus(a);
        }
        if at != base {
            return Err(Error::InvalidMap("arc word is not closed at the base vertex".into()));
        }
        Ok(DeckElement { word })
    }

    pub fn word(&self) -> &[GraphArc] {
        &self.word
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    pub fn inverse(&self, graph: &LabelledGraph) -> Self {
        DeckElement {
            word: invert_word(graph, &self.word),
        }
    }

    /// `self ∘ other`.
    pub fn after(&self, graph: &LabelledGraph, other: &DeckElement) -> Self {
        let mut w = self.word.clone();
        w.extend_from_slice(&other.word);
        DeckElement {
            word: reduce(graph, &w),
        }
    }

    pub fn names(&self, graph: &LabelledGraph) -> String {
        if self.word.is_empty() {
            return "1".into();
        }
        self.word
            .iter()
            .map(|&a| graph.arc(a).name.as_str())
            .collect::<Vec<_>>()
            .join(".")
    }

    /// Image of a materialized vertex, if materialized.
    pub fn apply(&self, ball: &TreeBall, v: Vertex) -> Option<Vertex> {
        let start = ball.find_arcs(ball.root(), &self.word)?;
        ball.find_arcs(start, &ball.arc_path(v)?)
    }

    /// Image of a vertex, expanding the ball as needed.
    pub fn apply_lazy(&self, ball: &mut TreeBall, v: Vertex) -> Result<Vertex> {
        let path = ball.arc_path(v).ok_or(Error::NoProjection)?;
        let start = ball.walk_arcs(ball.root(), &self.word)?;
        ball.walk_arcs(start, &path)
    }

    /// The induced partial map on the materialized ball: every vertex whose
    /// image is materialized.
    pub fn ballmap(&self, ball: &TreeBall) -> Result<BallMap> {
        if ball.graph().is_none() {
            return Err(Error::NoProjection);
        }
        let mut map = BallMap::empty(ball.len());
        let Some(r) = ball.find_arcs(ball.root(), &self.word) else {
            return Ok(map);
        };
        map.set(ball.root(), r);
        let mut queue = VecDeque::from([ball.root()]);
        while let Some(v) = queue.pop_front() {
            let gv = map.get(v).expect("queued vertices are mapped");
            for c in ball.children(v).collect::<Vec<_>>() {
                let a = ball.project_arc(BallArc::new(v, c)).expect("lift arcs project");
                if let Some(gc) = ball.neighbor_via_arc(gv, a) {
                    map.set(c, gc);
                    queue.push_back(c);
                }
            }
        }
        Ok(map)
    }
}

/// The deck transformation sending ball arc `a` to ball arc `b`.
pub fn deck_move_arc(ball: &TreeBall, a: BallArc, b: BallArc) -> Result<DeckElement> {
    let graph = ball.graph().ok_or(Error::NoProjection)?;
    let pa = ball.project_arc(a).ok_or(Error::NoProjection)?;
    let pb = ball.project_arc(b).ok_or(Error::NoProjection)?;
    if pa != pb {
        return Err(Error::DifferentProjection);
    }
    let mut word = ball.arc_path(b.from).expect("lift ball");
    word.extend(invert_word(graph, &ball.arc_path(a.from).expect("lift ball")));
    let base = ball.projection(ball.root()).expect("lift ball");
    DeckElement::new(graph, base, &word)
}

fn require_legal(l: &TreeBall) -> Result<()> {
    match first_illegal_edge(l) {
        Some(e) => Err(Error::NotLegal(format!(
            "edge {} - {} has labels {} and {}",
            l.path_string(e.from),
            l.path_string(e.to),
            l.label(e).unwrap(),
            l.label(e.bar()).unwrap()
        ))),
        None => Ok(()),
    }
}

/// `Ψ(g)`: the common local action of `g` at every internal vertex of its
/// domain, with respect to a legal labelling.
pub fn psi(g: &BallMap, l: &TreeBall, group: &PermGroup) -> Result<Permutation> {
    require_legal(l)?;
    let mut common: Option<(Vertex, Permutation)> = None;
    for x in internal_domain(g, l) {
        let f = local_action(g, x, l, l)?;
        match &common {
            None => common = Some((x, f)),
            Some((y, h)) if *h != f => {
                return Err(Error::NotUniform(format!(
                    "{} at {} but {} at {}",
                    h,
                    l.path_string(*y),
                    f,
                    l.path_string(x)
                )))
            }
            _ => {}
        }
    }
    let (_, f) = common.ok_or_else(|| Error::NotInternal("map has no internal vertex".into()))?;
    if !group.contains(&f)? {
        return Err(Error::NotInGroup(f.to_string()));
    }
    Ok(f)
}

/// The element of `Λ^l(F)` fixing `x` with `Ψ = f`, on the `radius`-ball
/// about `x`: at each vertex `y` the star is sent by `l_{gy}^{-1}∘f∘l_y`.
pub fn lambda_element(l: &TreeBall, x: Vertex, f: &Permutation, group: &PermGroup, radius: usize) -> Result<BallMap> {
    require_legal(l)?;
    if !group.contains(f)? {
        return Err(Error::NotInGroup(f.to_string()));
    }
    let mut map = BallMap::empty(l.len());
    map.set(x, x);
    for (y, d) in l.ball_around(x, radius) {
        if d == radius {
            continue;
        }
        if !l.is_internal(y) {
            return Err(Error::NotMaterialized(l.path_string(y)));
        }
        let gy = map.get(y).expect("assigned from the previous level");
        for w in l.neighbors(y) {
            let target = l
                .neighbor_by_label(gy, f.apply(l.label(BallArc::new(y, w)).unwrap()))
                .ok_or_else(|| Error::NotMaterialized(l.path_string(gy)))?;
            if let Some(prev) = map.get(w) {
                if prev != target {
                    return Err(Error::VerificationFailed(format!(
                        "inconsistent image at {}",
                        l.path_string(w)
                    )));
                }
            }
            map.set(w, target);
        }
    }
    Ok(map)
}

/// The labelling `l∘h`: arcs inside the domain of `h` get `l(h e)`, the
/// rest keep `l(e)`.
pub fn pullback(l: &TreeBall, h: &BallMap) -> TreeBall {
    l.relabelled(|a| match h.arc(a) {
        Some(ha) if l.label(ha).is_some() => l.label(ha).unwrap(),
        _ => l.label(a).unwrap(),
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConjugationReport {
    pub checked: usize,
    pub agreed: usize,
    pub uniform: usize,
}

impl ConjugationReport {
    pub fn holds(&self) -> bool {
        self.checked == self.agreed
    }
}

/// For each `g`, compares whether `Ψ` is defined on `g` (w.r.t. `l`, on the
/// region corresponding to the conjugate) and on `h^{-1} g h` (w.r.t. `l∘h`).
pub fn conjugation_check(l: &TreeBall, h: &BallMap, gs: &[BallMap], group: &PermGroup) -> Result<ConjugationReport> {
    let lh = pullback(l, h);
    let h_inv = h.inverse(l.len())?;
    let mut report = ConjugationReport::default();
    for g in gs {
        let conj = h_inv.after(&g.after(h));
        let common = h.after(&conj.after(&h_inv));
        let lhs = psi(&common, l, group);
        let rhs = psi(&conj, &lh, group);
        report.checked += 1;
        if lhs.is_ok() == rhs.is_ok() && (lhs.is_err() || lhs == rhs) {
            report.agreed += 1;
        }
        if lhs.is_ok() {
            report.uniform += 1;
        }
    }
    Ok(report)
}

/// Seeded sample of ball maps for [`conjugation_check`]: lambda elements
/// (uniform) and random members (usually not uniform), all fixing `x`.
pub fn conjugation_samples(
    l: &TreeBall,
    x: Vertex,
    group: &PermGroup,
    radius: usize,
    samples: usize,
    seed: u64,
) -> Result<Vec<BallMap>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let elements = group.elements()?;
    let mut out = Vec::with_capacity(samples);
    for k in 0..samples {
        if k % 2 == 0 {
            let f = &elements[rng.gen_range(0..elements.len())];
            out.push(lambda_element(l, x, f, group, radius)?);
        } else {
            out.push(random_member(l, x, group, radius - 1, rng.gen())?.map);
        }
    }
    Ok(out)
}

/// Input for relabelling along `θ`: a legally labelled quotient graph, a
/// spanning tree, oriented basis arcs, and the labelling `l = l_0∘k` of the
/// cover where `l_0` is the lift and `k` a seeded random member of
/// `U^{(l_0)}(F)` fixing the root (identity when `twist` is `None`).
#[derive(Clone, Debug)]
pub struct ThetaData {
    pub graph: Arc<LabelledGraph>,
    pub base: usize,
    pub group: PermGroup,
    pub tree: Vec<GraphArc>,
    pub basis: Vec<GraphArc>,
    pub expected: Vec<Option<Permutation>>,
    pub twist: Option<u64>,
}

#[derive(Clone, Debug)]
pub struct ThetaOutcome {
    /// The input labelling `l` (on the lift arena).
    pub l: TreeBall,
    /// The relabelled `l'`.
    pub l_prime: TreeBall,
    pub generators: Vec<DeckElement>,
    /// `f_i = θ(γ_i)`, recomputed from `l`.
    pub thetas: Vec<Permutation>,
    /// `(f_x)` with `l' = (f_x)∘l` at every internal vertex.
    pub family: EquivariantFamily,
    pub equivariance_checks: usize,
}

impl ThetaData {
    /// Orients basis arcs, checks that the tree arcs form a spanning tree
    /// and that every other edge appears exactly once as a basis arc.
    pub fn check_basis(&self) -> Result<()> {
        let g = &self.graph;
        let nv = g.num_vertices();
        let mut parent: Vec<usize> = (0..nv).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        let mut edge_used = vec![false; g.num_arcs() / 2];
        for &a in &self.tree {
            let (u, v) = (find(&mut parent, g.origin(a)), find(&mut parent, g.terminus(a)));
            if u == v {
                return Err(Error::BasisInvalid(format!("tree arc {} closes a cycle", g.arc(a).name)));
            }
            parent[u] = v;
            edge_used[a / 2] = true;
        }
        if self.tree.len() + 1 != nv {
            return Err(Error::BasisInvalid("tree arcs do not span the graph".into()));
        }
        for &a in &self.basis {
            if std::mem::replace(&mut edge_used[a / 2], true) {
                return Err(Error::BasisInvalid(format!(
                    "basis arc {} is a tree arc or repeated",
                    g.arc(a).name
                )));
            }
        }
        if let Some(e) = edge_used.iter().position(|&u| !u) {
            return Err(Error::BasisInvalid(format!("edge {} is neither tree nor basis", g.arc(2 * e).name)));
        }
        if self.expected.len() != self.basis.len() {
            return Err(Error::BasisInvalid("one expected value per basis arc".into()));
        }
        Ok(())
    }

    /// Path of tree arcs from the base vertex to every vertex.
    fn tree_paths(&self) -> Vec<Vec<GraphArc>> {
        let g = &self.graph;
        let mut paths: Vec<Option<Vec<GraphArc>>> = vec![None; g.num_vertices()];
        paths[self.base] = Some(Vec::new());
        let mut queue = VecDeque::from([self.base]);
        while let Some(v) = queue.pop_front() {
            for &t in &self.tree {
                for a in [t, g.bar(t)] {
                    if g.origin(a) == v && paths[g.terminus(a)].is_none() {
                        let mut p = paths[v].clone().unwrap();
                        p.push(a);
                        paths[g.terminus(a)] = Some(p);
                        queue.push_back(g.terminus(a));
                    }
                }
            }
        }
        paths.into_iter().map(|p| p.expect("tree spans")).collect()
    }

    /// Basis generator `γ_i`: tree path to the origin of the basis arc, the
    /// arc, tree path back.
    pub fn generators(&self) -> Result<Vec<DeckElement>> {
        let g = &self.graph;
        let paths = self.tree_paths();
        self.basis
            .iter()
            .map(|&a| {
                let mut w = paths[g.origin(a)].clone();
                w.push(a);
                w.extend(invert_word(g, &paths[g.terminus(a)]));
                DeckElement::new(g, self.base, &w)
            })
            .collect()
    }

    /// `θ` of a closed reduced word: each basis arc contributes `f_i`, its
    /// bar `f_i^{-1}`, tree arcs nothing.
    pub fn theta_of(&self, word: &[GraphArc], thetas: &[Permutation]) -> Permutation {
        let mut out = Permutation::identity(self.group.degree());
        for &a in word {
            if let Some(i) = self.basis.iter().position(|&b| b == a) {
                out = out.after(&thetas[i]);
            } else if let Some(i) = self.basis.iter().position(|&b| self.graph.bar(b) == a) {
                out = out.after(&thetas[i].inverse());
            }
        }
        out
    }

    /// The lift `l_0` of the quotient labelling and the input labelling `l`
    /// on the same arena, materialized to `radius`.
    pub fn input_labelling(&self, radius: usize) -> Result<(TreeBall, TreeBall)> {
        let l0 = TreeBall::lift(self.graph.clone(), self.base, radius)?;
        require_legal(&l0)?;
        let l = match self.twist {
            None => l0.freeze(),
            Some(seed) => {
                let k = random_member(&l0, l0.root(), &self.group, radius.saturating_sub(1), seed)?;
                l0.relabelled(|a| l0.label(k.map.arc(a).expect("member covers the ball")).unwrap())
            }
        };
        Ok((l0, l))
    }
}

/// Builds `l'` with `l'_{hy} = θ(h)∘l_y∘h^{-1}` for `h` in the deck group
/// and `y` in the lifted spanning tree, then verifies that `l'` is legal,
/// `θ`-equivariant on every materialized arc, and of the form `(f_x)∘l`.
pub fn theta_relabel(td: &ThetaData, radius: usize) -> Result<ThetaOutcome> {
    td.check_basis()?;
    let g = &td.graph;
    let (_, l) = td.input_labelling(radius)?;
    require_legal(&l)?;
    let paths = td.tree_paths();
    let generators = td.generators()?;

    // f_i: local action of γ_i at x_i, the lift of the basis arc's terminus
    let mut thetas = Vec::with_capacity(generators.len());
    for (i, gamma) in generators.iter().enumerate() {
        let a = td.basis[i];
        let xi = l
            .find_arcs(l.root(), &paths[g.terminus(a)])
            .ok_or_else(|| Error::NotMaterialized("spanning tree lift".into()))?;
        let map = gamma.ballmap(&l)?;
        let f = local_action(&map, xi, &l, &l)?;
        if !td.group.contains(&f)? {
            return Err(Error::NotInGroup(f.to_string()));
        }
        if let Some(exp) = &td.expected[i] {
            if *exp != f {
                return Err(Error::VerificationFailed(format!(
                    "basis value for {} is {} but the labelling gives {}",
                    g.arc(a).name,
                    exp,
                    f
                )));
            }
        }
        thetas.push(f);
    }

    // θ(h) for the deck element h with x = h y, y in the tree lift
    let mut theta_at: Vec<Option<Permutation>> = vec![None; l.len()];
    let mut y_of: Vec<u32> = vec![u32::MAX; l.len()];
    for v in l.vertices() {
        let q = l.projection(v).expect("lift");
        let mut w = l.arc_path(v).unwrap();
        w.extend(invert_word(g, &paths[q]));
        let h = reduce(g, &w);
        theta_at[v.idx()] = Some(td.theta_of(&h, &thetas));
        let y = l
            .find_arcs(l.root(), &paths[q])
            .ok_or_else(|| Error::NotMaterialized("spanning tree lift".into()))?;
        y_of[v.idx()] = y.0;
    }
    let mut missing = None;
    let l_prime = l.relabelled(|a| {
        let x = a.from;
        let alpha = l.project_arc(a).expect("lift");
        let y = Vertex(y_of[x.idx()]);
        match l.neighbor_via_arc(y, alpha) {
            Some(t) => theta_at[x.idx()]
                .as_ref()
                .unwrap()
                .apply(l.label(BallArc::new(y, t)).unwrap()),
            None => {
                missing = Some(x);
                Label(0)
            }
        }
    });
    if let Some(x) = missing {
        return Err(Error::NotMaterialized(format!("tree lift star near {}", l.path_string(x))));
    }

    // (a) legality and bijectivity
    require_legal(&l_prime).map_err(|e| Error::VerificationFailed(e.to_string()))?;
    for v in l_prime.vertices().filter(|&v| l_prime.is_internal(v)) {
        let mut seen = vec![false; l.n()];
        for a in l_prime.star(v) {
            let i = l_prime.label(a).unwrap().index();
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::VerificationFailed(format!(
                    "l' is not bijective at {}",
                    l.path_string(v)
                )));
            }
        }
    }
    // (b) θ-equivariance on every arc whose image is materialized
    let mut equivariance_checks = 0;
    for (gamma, f) in generators.iter().zip(&thetas) {
        let map = gamma.ballmap(&l_prime)?;
        for v in map.domain().collect::<Vec<_>>() {
            for a in l_prime.star(v) {
                if let Some(ga) = map.arc(a) {
                    equivariance_checks += 1;
                    if l_prime.label(ga) != Some(f.apply(l_prime.label(a).unwrap())) {
                        return Err(Error::VerificationFailed(format!(
                            "l'(γ e) != θ(γ) l'(e) for {} at {}",
                            gamma.names(g),
                            l.path_string(v)
                        )));
                    }
                }
            }
        }
    }
    // (c) l' = (f_x)∘l with f_x ∈ F
    let mut family = EquivariantFamily::new();
    for v in l.vertices().filter(|&v| l.is_internal(v)) {
        let f = l.star_transition(&l_prime, v)?;
        if !td.group.contains(&f)? {
            return Err(Error::VerificationFailed(format!(
                "l'_x∘l_x^-1 = {} is not in F at {}",
                f,
                l.path_string(v)
            )));
        }
        family.set(v, f);
    }
    Ok(ThetaOutcome {
        l,
        l_prime,
        generators,
        thetas,
        family,
        equivariance_checks,
    })
}

/// `g` with `l' = l∘g`, built by matching labels outward from the root of
/// two legal labellings on the same arena. Arcs whose target would leave the
/// materialized ball are left unmapped.
pub fn find_color_conjugator(l: &TreeBall, l_prime: &TreeBall) -> Result<BallMap> {
    let legal = |b: &TreeBall| require_legal(b).map_err(|e| Error::VerificationFailed(e.to_string()));
    legal(l)?;
    legal(l_prime)?;
    if l.len() != l_prime.len() || l.n() != l_prime.n() {
        return Err(Error::VerificationFailed("labellings do not share a ball".into()));
    }
    let mut map = BallMap::empty(l.len());
    map.set(l_prime.root(), l.root());
    let mut queue = VecDeque::from([l_prime.root()]);
    while let Some(v) = queue.pop_front() {
        let gv = map.get(v).unwrap();
        if !l_prime.is_internal(v) || !l.is_internal(gv) {
            continue;
        }
        for w in l_prime.neighbors(v) {
            if map.contains(w) {
                continue;
            }
            let i = l_prime.label(BallArc::new(v, w)).unwrap();
            let gw = l.neighbor_by_label(gv, i).expect("internal");
            map.set(w, gw);
            queue.push_back(w);
        }
    }
    for v in map.domain().collect::<Vec<_>>() {
        for a in l_prime.star(v) {
            if let Some(ga) = map.arc(a) {
                if l.label(ga) != l_prime.label(a) {
                    return Err(Error::VerificationFailed(format!(
                        "l'(e) != l(g e) at {}",
                        l.path_string(v)
                    )));
                }
            }
        }
    }
    Ok(map)
}

/// Aligns a second lift with a first one: extends the identity at the roots
/// and returns the pulled-back labelling `l'∘g` on the first arena together
/// with `g` and `(f_x)`.
pub fn align(
    l: &TreeBall,
    l_prime: &TreeBall,
    group: &PermGroup,
    radius: usize,
) -> Result<(TreeBall, crate::universal::Extension)> {
    let id = Permutation::identity(l.n());
    let ext = extend(l, l.root(), l_prime, l_prime.root(), &id, group, radius)?;
    ext.verify(l, l_prime)?;
    let aligned = l.relabelled(|a| match ext.map.arc(a) {
        Some(ga) => l_prime.label(ga).unwrap(),
        None => l.label(a).unwrap(),
    });
    Ok((aligned, ext))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labelled::{build_two_vertex_quotient, validate_graph};

    #[test]
    fn a5_enumeration() {
        let a5 = a5_elements();
        assert_eq!(a5.len(), 60);
        assert!(a5[0].is_identity());
        assert!(a5.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn fixtures_are_tau_legal() {
        let (f, os) = canonical_f240();
        assert_eq!(f.order().unwrap(), 3600);
        assert!(validate_graph(&build_x(), &os).is_clean());
        assert!(validate_graph(&build_xprime(), &os).is_clean());
        let blocks: Vec<Vec<usize>> = os.blocks().iter().map(|b| b.iter().map(|l| l.index()).collect()).collect();
        assert_eq!(f.orbits(), blocks);
        assert!(shift_is_equivariant(&f, os.block(2), 60));
        let (f120, _) = canonical_f120();
        assert_eq!(f120.order().unwrap(), 3600);
    }

    #[test]
    fn xprime_pairs_121_with_182() {
        let g = build_xprime();
        let a = g.arc_with_label(0, Label::new(121)).unwrap();
        assert_eq!(g.label(g.bar(a)), Label::new(182));
    }

    fn toy_theta(twist: Option<u64>) -> ThetaData {
        let os = OrbitStructure::singletons(4);
        let graph = Arc::new(build_two_vertex_quotient(&os).unwrap());
        let arc = |name: &str| graph.arc_by_name(name).unwrap();
        ThetaData {
            tree: vec![arc("e1")],
            basis: vec![arc("e2"), arc("e3"), arc("e4")],
            expected: vec![None; 3],
            graph: graph.clone(),
            base: 0,
            group: PermGroup::symmetric(4),
            twist,
        }
    }

    #[test]
    fn untwisted_theta_is_trivial() {
        let out = theta_relabel(&toy_theta(None), 3).unwrap();
        assert!(out.thetas.iter().all(Permutation::is_identity));
        assert!(out.l.vertices().all(|v| out.l.star(v).into_iter().all(|a| out.l.label(a) == out.l_prime.label(a))));
    }

    #[test]
    fn twisted_theta_verifies() {
        let out = theta_relabel(&toy_theta(Some(5)), 4).unwrap();
        assert!(out.equivariance_checks > 0);
        let g = find_color_conjugator(&out.l, &out.l_prime).unwrap();
        let m = crate::universal::is_member(&g, &PermGroup::symmetric(4), &out.l, &out.l).unwrap();
        assert!(m.is_member());
    }
}
