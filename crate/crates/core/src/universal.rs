//! Local actions, membership in universal groups on balls, and the inductive
//! extension of partial automorphisms.

use std::collections::VecDeque;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::labelled::{BallArc, BallMap, TreeBall, Vertex};
use crate::perm::{Label, Permutation};

/// An assignment of elements of F to ball vertices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EquivariantFamily {
    values: Vec<Option<Permutation>>,
}

impl EquivariantFamily {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn constant(ball: &TreeBall, f: &Permutation) -> Self {
        EquivariantFamily {
            values: vec![Some(f.clone()); ball.len()],
        }
    }

    pub fn set(&mut self, v: Vertex, f: Permutation) {
        if v.idx() >= self.values.len() {
            self.values.resize(v.idx() + 1, None);
        }
        self.values[v.idx()] = Some(f);
    }

    pub fn get(&self, v: Vertex) -> Option<&Permutation> {
        self.values.get(v.idx()).and_then(Option::as_ref)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vertex, &Permutation)> {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(i, f)| f.as_ref().map(|f| (Vertex(i as u32), f)))
    }

    pub fn len(&self) -> usize {
        self.iter().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Whether every assigned value lies in `group`.
    pub fn lies_in(&self, group: &PermGroup) -> Result<bool> {
        for (_, f) in self.iter() {
            if !group.contains(f)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// A uniformly random element of `group` at every vertex of `ball`.
    pub fn random(ball: &TreeBall, group: &PermGroup, seed: u64) -> Result<Self> {
        let elements = group.elements()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok(EquivariantFamily {
            values: (0..ball.len())
                .map(|_| Some(elements[rng.gen_range(0..elements.len())].clone()))
                .collect(),
        })
    }

    /// The labelling `(f_x)∘l`: the arc `e` gets `f_{o(e)}(l(e))`. Every
    /// vertex of the ball needs a value.
    pub fn apply(&self, ball: &TreeBall) -> Result<TreeBall> {
        for v in ball.vertices() {
            if self.get(v).is_none() {
                return Err(Error::NotMaterialized(format!(
                    "family has no value at {}",
                    ball.path_string(v)
                )));
            }
        }
        Ok(ball.relabelled(|a| {
            let l = ball.label(a).expect("adjacent");
            self.get(a.from).expect("checked above").apply(l)
        }))
    }
}

/// The permutation `i ↦ l_cod(g(e))` where `e` is the arc at `x` with
/// `l_dom(e) = i`.
pub fn local_action(g: &BallMap, x: Vertex, dom: &TreeBall, cod: &TreeBall) -> Result<Permutation> {
    if !dom.is_internal(x) {
        return Err(Error::NotInternal(dom.path_string(x)));
    }
    let mut images = vec![u32::MAX; dom.n()];
    for a in dom.star(x) {
        let ga = g
            .arc(a)
            .ok_or_else(|| Error::NotInternal(format!("star of {} is not mapped", dom.path_string(x))))?;
        let l = cod
            .label(ga)
            .ok_or_else(|| Error::InvalidMap(format!("arc at {} is not mapped to an arc", dom.path_string(x))))?;
        images[dom.label(a).expect("star arc").index()] = l.0;
    }
    Permutation::from_images(images)
}

/// Domain vertices whose full star is materialized and mapped.
pub fn internal_domain(g: &BallMap, dom: &TreeBall) -> Vec<Vertex> {
    g.domain()
        .filter(|&x| dom.is_internal(x) && dom.neighbors(x).into_iter().all(|w| g.contains(w)))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    /// First internal vertex (in id order) whose local action is not in F.
    pub violation: Option<(Vertex, Permutation)>,
    pub checked: usize,
}

impl Membership {
    pub fn is_member(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks the local action at every internal vertex of the domain.
pub fn is_member(g: &BallMap, group: &PermGroup, dom: &TreeBall, cod: &TreeBall) -> Result<Membership> {
    let internal = internal_domain(g, dom);
    for &x in &internal {
        let f = local_action(g, x, dom, cod)?;
        if !group.contains(&f)? {
            return Ok(Membership {
                violation: Some((x, f)),
                checked: internal.len(),
            });
        }
    }
    Ok(Membership {
        violation: None,
        checked: internal.len(),
    })
}

/// Local actions at every internal vertex: the family witnessing
/// `l_cod∘g = (f_x)∘l_dom` wherever one exists.
pub fn recover_family(g: &BallMap, dom: &TreeBall, cod: &TreeBall) -> Result<EquivariantFamily> {
    let mut fam = EquivariantFamily::new();
    for x in internal_domain(g, dom) {
        fam.set(x, local_action(g, x, dom, cod)?);
    }
    Ok(fam)
}

#[derive(Clone, Debug)]
pub struct Extension {
    pub map: BallMap,
    pub family: EquivariantFamily,
}

impl Extension {
    /// Arcwise check of `l_cod(g e) = f_x(l_dom(e))` on every arc whose
    /// origin carries a family value.
    pub fn verify(&self, dom: &TreeBall, cod: &TreeBall) -> Result<()> {
        for (x, f) in self.family.iter() {
            for a in dom.star(x) {
                let ga = self
                    .map
                    .arc(a)
                    .ok_or_else(|| Error::VerificationFailed(format!("arc at {} unmapped", dom.path_string(x))))?;
                let lhs = cod.label(ga);
                let rhs = f.apply(dom.label(a).expect("star arc"));
                if lhs != Some(rhs) {
                    return Err(Error::VerificationFailed(format!(
                        "l'(g e) != f_x(l(e)) at {}",
                        dom.path_string(x)
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Builds `g` with `g x0 = y0` and the family `(f_x)` with `f_{x0} = f0`
/// and `l_cod∘g = (f_x)∘l_dom`. The family is defined within distance
/// `radius` of `x0`, so `g` covers the `(radius+1)`-ball, which must be
/// materialized in both balls. At each new vertex `x` reached along the arc
/// `e` pointing back toward `x0`, `f_x` is the least element of F with
/// `f_x(l(e)) = l'(g e)`.
pub fn extend(
    dom: &TreeBall,
    x0: Vertex,
    cod: &TreeBall,
    y0: Vertex,
    f0: &Permutation,
    group: &PermGroup,
    radius: usize,
) -> Result<Extension> {
    extend_by(dom, x0, cod, y0, f0, group, radius, |from, to| {
        Ok(group.least_transporter(from, to)?.cloned())
    })
}

/// A random ball-scale member of the universal group fixing `x`: random
/// root action and uniformly random admissible choices further out.
pub fn random_member(ball: &TreeBall, x: Vertex, group: &PermGroup, radius: usize, seed: u64) -> Result<Extension> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let elements = group.elements()?;
    let f0 = elements[rng.gen_range(0..elements.len())].clone();
    extend_by(ball, x, ball, x, &f0, group, radius, |from, to| {
        let options = group.transporters(from, to)?;
        Ok((!options.is_empty()).then(|| options[rng.gen_range(0..options.len())].clone()))
    })
}

#[allow(clippy::too_many_arguments)]
fn extend_by(
    dom: &TreeBall,
    x0: Vertex,
    cod: &TreeBall,
    y0: Vertex,
    f0: &Permutation,
    group: &PermGroup,
    radius: usize,
    mut pick: impl FnMut(Label, Label) -> Result<Option<Permutation>>,
) -> Result<Extension> {
    if dom.n() != cod.n() {
        return Err(Error::DegreeMismatch(dom.n(), cod.n()));
    }
    if f0.degree() != dom.n() {
        return Err(Error::DegreeMismatch(f0.degree(), dom.n()));
    }
    if !group.contains(f0)? {
        return Err(Error::NotInGroup(f0.to_string()));
    }
    let mut map = BallMap::empty(dom.len());
    let mut family = EquivariantFamily::new();
    let mut came_from = vec![u32::MAX; dom.len()];
    map.set(x0, y0);
    let mut queue = VecDeque::from([(x0, 0usize)]);
    while let Some((x, d)) = queue.pop_front() {
        if d > radius {
            continue;
        }
        let gx = map.get(x).expect("queued vertices are mapped");
        let f = if x == x0 {
            f0.clone()
        } else {
            let p = Vertex(came_from[x.idx()]);
            let from = dom.label(BallArc::new(x, p)).expect("parent arc");
            let to = cod
                .label(BallArc::new(gx, map.get(p).expect("parent mapped")))
                .expect("images of adjacent vertices are adjacent");
            pick(from, to)?.ok_or_else(|| Error::NoCandidate {
                    vertex: dom.path_string(x),
                    from: from.value(),
                    to: to.value(),
                })?
        };
        if !dom.is_internal(x) {
            return Err(Error::NotMaterialized(format!("domain vertex {}", dom.path_string(x))));
        }
        if !cod.is_internal(gx) {
            return Err(Error::NotMaterialized(format!("codomain vertex {}", cod.path_string(gx))));
        }
        for w in dom.neighbors(x) {
            if came_from[x.idx()] == w.0 {
                continue;
            }
            let l = dom.label(BallArc::new(x, w)).expect("neighbor");
            let gw = cod.neighbor_by_label(gx, f.apply(l)).ok_or_else(|| {
                Error::NotMaterialized(format!("label {} at {}", f.apply(l), cod.path_string(gx)))
            })?;
            map.set(w, gw);
            came_from[w.idx()] = x.0;
            queue.push_back((w, d + 1));
        }
        family.set(x, f);
    }
    Ok(Extension { map, family })
}

/// Whether every element of F is the root local action of some extension
/// over the 2-ball around `x`.
pub fn sigma_surjectivity_check(ball: &TreeBall, x: Vertex, group: &PermGroup) -> Result<bool> {
    Ok(sigma_realized(ball, x, group)? == group.order()?)
}

/// Number of elements of F realized as root local actions by `extend`.
pub fn sigma_realized(ball: &TreeBall, x: Vertex, group: &PermGroup) -> Result<usize> {
    let mut realized = 0;
    for f in group.elements()? {
        let ext = extend(ball, x, ball, x, f, group, 1)?;
        if local_action(&ext.map, x, ball, ball)? == *f {
            realized += 1;
        }
    }
    Ok(realized)
}

/// A ball-scale member of the universal group moving `x0` to `y0`.
pub fn transitivity_move(
    ball: &TreeBall,
    x0: Vertex,
    y0: Vertex,
    group: &PermGroup,
    radius: usize,
) -> Result<Extension> {
    extend(ball, x0, ball, y0, &Permutation::identity(ball.n()), group, radius)
}

/// `|F| · ∏ |Stab_F(l(e_v))|` over the vertices `v` with `0 < d(x, v) <
/// radius`, where `e_v` points from `v` back toward `x`.
pub fn predicted_stabilizer_count(ball: &TreeBall, x: Vertex, group: &PermGroup, radius: usize) -> Result<BigUint> {
    let mut stab = vec![0usize; ball.n()];
    for (p, s) in stab.iter_mut().enumerate() {
        *s = group.stabilizer_order(p)?;
    }
    let mut count = BigUint::from(group.order()?);
    for (v, d) in ball.ball_around(x, radius) {
        if d == 0 || d >= radius {
            continue;
        }
        let back = ball.step_toward(v, x).expect("v != x");
        let l = ball.label(BallArc::new(v, back)).expect("adjacent");
        count *= stab[l.index()];
    }
    Ok(count)
}

/// All automorphisms of the `radius`-ball around `x` fixing `x` whose local
/// actions at vertices of distance `< radius` lie in F. Refuses when the
/// predicted count exceeds `cap`.
pub fn enumerate_ball_stabilizer(
    ball: &TreeBall,
    x: Vertex,
    group: &PermGroup,
    radius: usize,
    cap: usize,
) -> Result<Vec<BallMap>> {
    let predicted = predicted_stabilizer_count(ball, x, group, radius)?;
    if predicted > BigUint::from(cap) {
        return Err(Error::CountCapExceeded {
            predicted: predicted.to_string(),
            cap,
        });
    }
    let region = ball.ball_around(x, radius);
    let mut internal = Vec::new();
    let mut back = vec![u32::MAX; ball.len()];
    for &(v, d) in &region {
        if d < radius {
            if !ball.is_internal(v) {
                return Err(Error::NotMaterialized(ball.path_string(v)));
            }
            internal.push(v);
        }
        if d > 0 {
            back[v.idx()] = ball.step_toward(v, x).expect("v != x").0;
        }
    }
    let mut map = BallMap::empty(ball.len());
    map.set(x, x);
    let mut out = Vec::new();
    let mut search = Search {
        ball,
        group,
        internal: &internal,
        back: &back,
        out: &mut out,
    };
    search.run(0, &mut map)?;
    Ok(out)
}

struct Search<'a> {
    ball: &'a TreeBall,
    group: &'a PermGroup,
    internal: &'a [Vertex],
    back: &'a [u32],
    out: &'a mut Vec<BallMap>,
}

impl Search<'_> {
    fn run(&mut self, k: usize, map: &mut BallMap) -> Result<()> {
        let Some(&v) = self.internal.get(k) else {
            self.out.push(map.clone());
            return Ok(());
        };
        let ball = self.ball;
        let gv = map.get(v).expect("assigned by an earlier step");
        let candidates: Vec<&Permutation> = if k == 0 {
            self.group.elements()?.iter().collect()
        } else {
            let p = Vertex(self.back[v.idx()]);
            let from = ball.label(BallArc::new(v, p)).expect("adjacent");
            let to = ball.label(BallArc::new(gv, map.get(p).expect("mapped"))).expect("adjacent");
            self.group.transporters(from, to)?
        };
        if !ball.is_internal(gv) {
            return Err(Error::NotMaterialized(ball.path_string(gv)));
        }
        for f in candidates {
            for w in ball.neighbors(v) {
                if w.0 == self.back[v.idx()] {
                    continue;
                }
                let l = ball.label(BallArc::new(v, w)).expect("adjacent");
                let gw = ball.neighbor_by_label(gv, f.apply(l)).expect("internal");
                map.set(w, gw);
            }
            self.run(k + 1, map)?;
        }
        Ok(())
    }
}
