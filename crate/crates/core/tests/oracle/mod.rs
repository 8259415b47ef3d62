//! Brute-force reference computations shared by integration tests. Nothing
//! here calls into the library's group algorithms; groups are handled as
//! Cayley tables built from raw permutation composition.
#![allow(dead_code)]

use std::collections::HashMap;

use arborlat::labelled::{BallMap, TreeBall, Vertex};
use arborlat::{FactorMultiset, Permutation, SimpleFactorId};

pub struct Cayley {
    n: usize,
    mul: Vec<u16>,
    id: usize,
}

impl Cayley {
    /// Closes `gens` under composition and tabulates the product.
    pub fn generated_by(gens: &[Permutation]) -> Cayley {
        let degree = gens.first().map(|g| g.degree()).unwrap_or(1);
        let mut elems = vec![Permutation::identity(degree)];
        let mut index: HashMap<Permutation, usize> = HashMap::from([(elems[0].clone(), 0)]);
        let mut i = 0;
        while i < elems.len() {
            for g in gens {
                let p = elems[i].after(g);
                if !index.contains_key(&p) {
                    index.insert(p.clone(), elems.len());
                    elems.push(p);
                }
            }
            i += 1;
        }
        let n = elems.len();
        assert!(n <= u16::MAX as usize, "oracle limited to 65535 elements");
        let mut mul = vec![0u16; n * n];
        for a in 0..n {
            for b in 0..n {
                mul[a * n + b] = index[&elems[a].after(&elems[b])] as u16;
            }
        }
        Cayley { n, mul, id: 0 }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    fn m(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b] as usize
    }

    fn inverse(&self, a: usize) -> usize {
        (0..self.n).find(|&b| self.m(a, b) == self.id).unwrap()
    }

    fn is_abelian(&self) -> bool {
        (0..self.n).all(|a| (0..self.n).all(|b| self.m(a, b) == self.m(b, a)))
    }

    /// Smallest normal subgroup containing `g`, as a membership mask.
    fn normal_closure(&self, g: usize, inv: &[usize]) -> Vec<bool> {
        let mut class: Vec<usize> = (0..self.n).map(|x| self.m(self.m(x, g), inv[x])).collect();
        class.sort_unstable();
        class.dedup();
        let mut inside = vec![false; self.n];
        inside[self.id] = true;
        let mut queue = vec![self.id];
        while let Some(a) = queue.pop() {
            for &c in &class {
                let b = self.m(a, c);
                if !inside[b] {
                    inside[b] = true;
                    queue.push(b);
                }
            }
        }
        inside
    }

    fn subgroup(&self, mask: &[bool]) -> Cayley {
        let elems: Vec<usize> = (0..self.n).filter(|&a| mask[a]).collect();
        let pos: HashMap<usize, usize> = elems.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let k = elems.len();
        let mut mul = vec![0u16; k * k];
        for (i, &a) in elems.iter().enumerate() {
            for (j, &b) in elems.iter().enumerate() {
                mul[i * k + j] = pos[&self.m(a, b)] as u16;
            }
        }
        Cayley { n: k, mul, id: pos[&self.id] }
    }

    fn quotient(&self, mask: &[bool]) -> Cayley {
        let mut coset = vec![usize::MAX; self.n];
        let mut reps = Vec::new();
        for g in 0..self.n {
            if coset[g] == usize::MAX {
                for h in (0..self.n).filter(|&h| mask[h]) {
                    coset[self.m(g, h)] = reps.len();
                }
                reps.push(g);
            }
        }
        let k = reps.len();
        let mut mul = vec![0u16; k * k];
        for i in 0..k {
            for j in 0..k {
                mul[i * k + j] = coset[self.m(reps[i], reps[j])] as u16;
            }
        }
        Cayley { n: k, mul, id: coset[self.id] }
    }

    /// Composition factors by splitting along any proper nontrivial normal
    /// closure of a single element.
    pub fn composition_factors(&self) -> FactorMultiset {
        let mut out = Vec::new();
        self.collect_factors(&mut out);
        FactorMultiset::new(out)
    }

    fn collect_factors(&self, out: &mut Vec<SimpleFactorId>) {
        if self.n == 1 {
            return;
        }
        let inv: Vec<usize> = (0..self.n).map(|a| self.inverse(a)).collect();
        for g in (0..self.n).filter(|&g| g != self.id) {
            let mask = self.normal_closure(g, &inv);
            if mask.iter().filter(|&&b| b).count() < self.n {
                self.subgroup(&mask).collect_factors(out);
                self.quotient(&mask).collect_factors(out);
                return;
            }
        }
        out.push(if self.is_abelian() {
            SimpleFactorId::cyclic(self.n)
        } else {
            SimpleFactorId::nonabelian(self.n)
        });
    }
}

/// All root-fixing automorphisms of a finite ball, found by trying every
/// permutation of the non-root vertices.
pub fn ball_automorphisms(ball: &TreeBall) -> Vec<BallMap> {
    let verts: Vec<Vertex> = ball.vertices().filter(|&v| v != ball.root()).collect();
    let mut edges = Vec::new();
    for v in ball.vertices() {
        if let Some(p) = ball.parent(v) {
            edges.push((p, v));
        }
    }
    let mut perm: Vec<usize> = (0..verts.len()).collect();
    let mut out = Vec::new();
    let mut c = vec![0usize; perm.len()];
    let mut check = |perm: &[usize]| {
        let mut map = BallMap::empty(ball.len());
        map.set(ball.root(), ball.root());
        for (i, &j) in perm.iter().enumerate() {
            map.set(verts[i], verts[j]);
        }
        if edges
            .iter()
            .all(|&(a, b)| ball.are_adjacent(map.get(a).unwrap(), map.get(b).unwrap()))
        {
            out.push(map);
        }
    };
    // Heap's algorithm
    check(&perm);
    let mut i = 0;
    while i < perm.len() {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            check(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// A seeded random permutation group of order at most `max_order`: one or
/// two random generators on up to six points, sometimes placed beside a
/// second such group on disjoint points.
pub fn random_group(seed: u64, max_order: usize) -> arborlat::PermGroup {
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    loop {
        let parts = if rng.gen_bool(0.3) { 2 } else { 1 };
        let mut degrees = Vec::new();
        let mut gens: Vec<Vec<u32>> = Vec::new();
        for _ in 0..parts {
            let d = rng.gen_range(2..=6usize);
            let k = rng.gen_range(1..=2);
            for _ in 0..k {
                let mut p: Vec<u32> = (0..d as u32).collect();
                p.shuffle(&mut rng);
                gens.push(p);
            }
            degrees.push((d, k));
        }
        let total: usize = degrees.iter().map(|(d, _)| d).sum();
        let mut padded = Vec::new();
        let mut offset = 0u32;
        let mut g = 0;
        for (d, k) in degrees {
            for _ in 0..k {
                let mut images: Vec<u32> = (0..total as u32).collect();
                for (i, &v) in gens[g].iter().enumerate() {
                    images[offset as usize + i] = offset + v;
                }
                padded.push(Permutation::from_images(images).unwrap());
                g += 1;
            }
            offset += d as u32;
        }
        let group = arborlat::PermGroup::new(total, padded).unwrap().with_order_cap(max_order);
        if group.order().is_ok() {
            return group;
        }
    }
}

/// The normal closure of a seeded random element, built through the
/// library's generator closure.
pub fn random_normal(group: &arborlat::PermGroup, seed: u64) -> arborlat::PermGroup {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let elems = group.elements().unwrap();
    let x = &elems[rng.gen_range(0..elems.len())];
    let conj: Vec<Permutation> = elems.iter().map(|g| g.after(x).after(&g.inverse())).collect();
    arborlat::PermGroup::new(group.degree(), conj).unwrap()
}

/// Overwrites one label on the star of a random internal vertex with a
/// different label. Returns the corrupted ball and whether the new label
/// breaks the pairing with the reverse arc, judged from the raw blocks.
pub fn corrupt(
    ball: &TreeBall,
    os: &arborlat::labelled::OrbitStructure,
    seed: u64,
) -> (TreeBall, bool) {
    use arborlat::labelled::BallArc;
    use arborlat::Label;
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let internal: Vec<Vertex> = ball.vertices().filter(|&v| ball.is_internal(v)).collect();
    let v = internal[rng.gen_range(0..internal.len())];
    let nbrs = ball.neighbors(v);
    let w = nbrs[rng.gen_range(0..nbrs.len())];
    let arc = BallArc::new(v, w);
    let old = ball.label(arc).unwrap();
    let new = loop {
        let l = Label::from_index(rng.gen_range(0..ball.n()));
        if l != old {
            break l;
        }
    };
    let back = ball.label(arc.bar()).unwrap();
    let block = |l: Label| os.blocks().iter().position(|b| b.contains(&l)).unwrap();
    let tau_broken = os.tau(block(new)) != block(back);
    let mut out = ball.freeze();
    out.set_label(arc, new).unwrap();
    (out, tau_broken)
}

/// A seeded local group on `n` points together with its orbit structure;
/// orbits of equal size are paired at random.
pub fn random_local_setting(n: usize, seed: u64) -> (arborlat::PermGroup, arborlat::labelled::OrbitStructure) {
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let k = rng.gen_range(1..=3);
    let gens = (0..k)
        .map(|_| {
            let mut p: Vec<u32> = (0..n as u32).collect();
            p.shuffle(&mut rng);
            Permutation::from_images(p).unwrap()
        })
        .collect();
    let group = arborlat::PermGroup::new(n, gens).unwrap();
    let orbits = group.orbits();
    let mut tau: Vec<usize> = (0..orbits.len()).collect();
    let mut free: Vec<usize> = (0..orbits.len()).collect();
    free.shuffle(&mut rng);
    while let Some(i) = free.pop() {
        if rng.gen_bool(0.5) {
            if let Some(pos) = free.iter().position(|&j| orbits[j].len() == orbits[i].len()) {
                let j = free.remove(pos);
                tau[i] = j;
                tau[j] = i;
            }
        }
    }
    let os = arborlat::labelled::OrbitStructure::from_group(&group, tau).unwrap();
    (group, os)
}
