//! Finite permutation groups given by generators, enumerated by breadth-first
//! closure up to a hard order cap.

use std::collections::VecDeque;
use std::sync::{Arc, OnceLock};

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::perm::{Label, Permutation};

pub const DEFAULT_ORDER_CAP: usize = 100_000;

const NONE: u32 = u32::MAX;

/// The full element list of a group, sorted lexicographically, with a base
/// (points whose images determine an element) used for O(|base|) lookups.
#[derive(Debug)]
pub struct Enumeration {
    elements: Vec<Permutation>,
    base: Vec<u32>,
    index: FxHashMap<Box<[u32]>, u32>,
}

impl Enumeration {
    fn new(degree: usize, mut elements: Vec<Permutation>) -> Self {
        elements.sort_unstable();
        let base = choose_base(degree, &elements);
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (base_key(&base, e), i as u32))
            .collect();
        Enumeration {
            elements,
            base,
            index,
        }
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Position of `p` in the sorted element list, if `p` is in the group.
    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        let key = base_key(&self.base, p);
        let i = *self.index.get(&key)? as usize;
        (self.elements[i] == *p).then_some(i)
    }

    /// Index of `elements[a] ∘ elements[b]`.
    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        let (pa, pb) = (&self.elements[a], &self.elements[b]);
        let key: Vec<u32> = self
            .base
            .iter()
            .map(|&beta| pa.images()[pb.image(beta as usize)])
            .collect();
        self.index[key.as_slice()] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        let pa = &self.elements[a];
        let key: Vec<u32> = self
            .base
            .iter()
            .map(|&beta| pa.images().iter().position(|&x| x == beta).unwrap() as u32)
            .collect();
        self.index[key.as_slice()] as usize
    }

    pub fn identity_index(&self) -> usize {
        // identity is the lexicographically least permutation
        0
    }
}

fn base_key(base: &[u32], p: &Permutation) -> Box<[u32]> {
    base.iter().map(|&b| p.image(b as usize) as u32).collect()
}

/// Greedy base: repeatedly pick the least point moved by the current
/// pointwise stabilizer.
fn choose_base(degree: usize, elements: &[Permutation]) -> Vec<u32> {
    let mut base = Vec::new();
    let mut current: Vec<&Permutation> = elements.iter().collect();
    while current.len() > 1 {
        let point = (0..degree)
            .find(|&pt| current.iter().any(|g| g.image(pt) != pt))
            .expect("non-identity elements move some point");
        base.push(point as u32);
        current.retain(|g| g.image(point) == point);
    }
    base
}

#[derive(Debug, Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    order_cap: usize,
    enumeration: OnceLock<Arc<Enumeration>>,
    transporters: OnceLock<Arc<Vec<u32>>>,
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidGraph("degree must be positive".into()));
        }
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch(degree, g.degree()));
            }
        }
        Ok(PermGroup {
            degree,
            generators,
            order_cap: DEFAULT_ORDER_CAP,
            enumeration: OnceLock::new(),
            transporters: OnceLock::new(),
        })
    }

    pub fn with_order_cap(mut self, cap: usize) -> Self {
        self.order_cap = cap;
        self.enumeration = OnceLock::new();
        self.transporters = OnceLock::new();
        self
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup::new(degree, Vec::new()).expect("positive degree")
    }

    /// Symmetric group on `degree` points.
    pub fn symmetric(degree: usize) -> Self {
        let mut gens = Vec::new();
        if degree >= 2 {
            gens.push(Permutation::from_mapping(degree, [(0, 1), (1, 0)]).unwrap());
            let cycle: Vec<u32> = (0..degree as u32).map(|i| (i + 1) % degree as u32).collect();
            gens.push(Permutation::from_images(cycle).unwrap());
        }
        PermGroup::new(degree.max(1), gens).unwrap()
    }

    /// Cyclic group generated by the shift `i ↦ i+1 mod m` on `m` points.
    pub fn cyclic(m: usize) -> Self {
        let cycle: Vec<u32> = (0..m as u32).map(|i| (i + 1) % m as u32).collect();
        PermGroup::new(m, vec![Permutation::from_images(cycle).unwrap()]).unwrap()
    }

    /// Builds a group from a closed element set. A small generating set is
    /// extracted greedily; the enumeration cache is filled directly.
    pub fn from_elements(degree: usize, elements: Vec<Permutation>) -> Self {
        let enumeration = Enumeration::new(degree, elements);
        let generators = greedy_generators(&enumeration);
        let group = PermGroup {
            degree,
            generators,
            order_cap: DEFAULT_ORDER_CAP.max(enumeration.len()),
            enumeration: OnceLock::new(),
            transporters: OnceLock::new(),
        };
        let _ = group.enumeration.set(Arc::new(enumeration));
        group
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn order_cap(&self) -> usize {
        self.order_cap
    }

    /// Enumerates the group (once; later calls hit the cache).
    pub fn enumerate(&self) -> Result<&Enumeration> {
        if let Some(e) = self.enumeration.get() {
            return Ok(e);
        }
        let elements = closure(self.degree, &self.generators, self.order_cap)?;
        let e = Arc::new(Enumeration::new(self.degree, elements));
        Ok(self.enumeration.get_or_init(|| e))
    }

    pub fn elements(&self) -> Result<&[Permutation]> {
        Ok(self.enumerate()?.elements())
    }

    pub fn order(&self) -> Result<usize> {
        Ok(self.enumerate()?.len())
    }

    pub fn contains(&self, p: &Permutation) -> Result<bool> {
        if p.degree() != self.degree {
            return Ok(false);
        }
        Ok(self.enumerate()?.index_of(p).is_some())
    }

    pub fn is_abelian(&self) -> bool {
        self.generators.iter().enumerate().all(|(i, a)| {
            self.generators[i + 1..]
                .iter()
                .all(|b| a.after(b) == b.after(a))
        })
    }

    /// Orbits on `{0..n}`: each block sorted, blocks ordered by least point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..self.degree).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for g in &self.generators {
            for i in 0..self.degree {
                let (a, b) = (find(&mut parent, i), find(&mut parent, g.image(i)));
                if a != b {
                    let (lo, hi) = (a.min(b), a.max(b));
                    parent[hi] = lo;
                }
            }
        }
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut block_of_root = vec![usize::MAX; self.degree];
        for i in 0..self.degree {
            let r = find(&mut parent, i);
            if block_of_root[r] == usize::MAX {
                block_of_root[r] = blocks.len();
                blocks.push(Vec::new());
            }
            blocks[block_of_root[r]].push(i);
        }
        blocks
    }

    /// Whether the group acts simply transitively on `block`: transitive, and
    /// the restriction to `block` is injective with trivial point stabilizers.
    pub fn is_regular_on(&self, block: &[usize]) -> Result<bool> {
        let mut in_block = vec![false; self.degree];
        for &b in block {
            in_block[b] = true;
        }
        for g in &self.generators {
            if block.iter().any(|&b| !in_block[g.image(b)]) {
                return Err(Error::NotInvariant);
            }
        }
        if block.is_empty() {
            return Ok(false);
        }
        let order = self.order()?;
        if order != block.len() {
            return Ok(false);
        }
        // |G| = |block|, so transitivity forces trivial stabilizers and a
        // faithful restriction.
        let a = block[0];
        let mut hit = vec![false; self.degree];
        for g in self.elements()? {
            hit[g.image(a)] = true;
        }
        Ok(block.iter().all(|&b| hit[b]))
    }

    pub fn point_stabilizer(&self, point: usize) -> Result<PermGroup> {
        let elements: Vec<Permutation> = self
            .elements()?
            .iter()
            .filter(|g| g.image(point) == point)
            .cloned()
            .collect();
        Ok(PermGroup::from_elements(self.degree, elements))
    }

    /// The lexicographically least element mapping `from` to `to`, if any.
    pub fn least_transporter(&self, from: Label, to: Label) -> Result<Option<&Permutation>> {
        let table = self.transporter_table()?;
        let idx = table[from.index() * self.degree + to.index()];
        if idx == NONE {
            return Ok(None);
        }
        Ok(Some(&self.enumerate()?.elements()[idx as usize]))
    }

    fn transporter_table(&self) -> Result<&Arc<Vec<u32>>> {
        if let Some(t) = self.transporters.get() {
            return Ok(t);
        }
        let n = self.degree;
        let mut table = vec![NONE; n * n];
        // elements are sorted, so the first hit is the least one
        for (k, g) in self.elements()?.iter().enumerate() {
            for a in 0..n {
                let slot = &mut table[a * n + g.image(a)];
                if *slot == NONE {
                    *slot = k as u32;
                }
            }
        }
        Ok(self.transporters.get_or_init(|| Arc::new(table)))
    }

    /// All elements mapping `from` to `to`, in lexicographic order.
    pub fn transporters(&self, from: Label, to: Label) -> Result<Vec<&Permutation>> {
        Ok(self
            .elements()?
            .iter()
            .filter(|g| g.apply(from) == to)
            .collect())
    }

    /// Size of the stabilizer of `point`, computed from the orbit length.
    pub fn stabilizer_order(&self, point: usize) -> Result<usize> {
        let orbit = self
            .orbits()
            .into_iter()
            .find(|b| b.contains(&point))
            .expect("orbits partition the points");
        Ok(self.order()? / orbit.len())
    }

    /// The induced action on an invariant block, with the block's points
    /// renumbered `0..|block|` in the given order.
    pub fn action_on(&self, block: &[usize]) -> Result<PermGroup> {
        let mut pos = vec![usize::MAX; self.degree];
        for (i, &b) in block.iter().enumerate() {
            pos[b] = i;
        }
        let mut gens = Vec::new();
        for g in &self.generators {
            let mut images = Vec::with_capacity(block.len());
            for &b in block {
                let p = pos[g.image(b)];
                if p == usize::MAX {
                    return Err(Error::NotInvariant);
                }
                images.push(p as u32);
            }
            let r = Permutation::from_images(images)?;
            if !r.is_identity() && !gens.contains(&r) {
                gens.push(r);
            }
        }
        Ok(PermGroup::new(block.len(), gens)?.with_order_cap(self.order_cap))
    }

    /// Whether every generator of `sub` lies in `self` and is normalized by
    /// every generator of `self`.
    pub fn is_normal_subgroup(&self, sub: &PermGroup) -> Result<bool> {
        if sub.degree != self.degree {
            return Ok(false);
        }
        for k in sub.generators() {
            if !self.contains(k)? {
                return Ok(false);
            }
            for g in &self.generators {
                let conj = g.after(k).after(&g.inverse());
                if !sub.contains(&conj)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Breadth-first closure of `generators`; fails once more than `cap`
/// elements have been found.
fn closure(degree: usize, generators: &[Permutation], cap: usize) -> Result<Vec<Permutation>> {
    let id = Permutation::identity(degree);
    let mut seen: FxHashMap<Permutation, ()> = FxHashMap::default();
    seen.insert(id.clone(), ());
    let mut elements = vec![id];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for s in generators {
            let next = s.after(&elements[i]);
            if !seen.contains_key(&next) {
                if elements.len() >= cap {
                    return Err(Error::CapExceeded { cap });
                }
                seen.insert(next.clone(), ());
                elements.push(next);
                queue.push_back(elements.len() - 1);
            }
        }
    }
    Ok(elements)
}

/// Closure of a set of element indices inside an enumerated group, as a
/// membership bitmap.
pub(crate) fn index_closure(en: &Enumeration, gens: &[usize]) -> Vec<bool> {
    let mut member = vec![false; en.len()];
    let id = en.identity_index();
    member[id] = true;
    let mut list = vec![id];
    let mut head = 0;
    while head < list.len() {
        let x = list[head];
        head += 1;
        for &s in gens {
            let y = en.mul(x, s);
            if !member[y] {
                member[y] = true;
                list.push(y);
            }
        }
    }
    member
}

fn greedy_generators(en: &Enumeration) -> Vec<Permutation> {
    let mut gens: Vec<usize> = Vec::new();
    let mut member = vec![false; en.len()];
    if !en.is_empty() {
        member[en.identity_index()] = true;
    }
    for i in 0..en.len() {
        if !member[i] {
            gens.push(i);
            member = index_closure(en, &gens);
        }
    }
    gens.into_iter().map(|i| en.elements()[i].clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> Permutation {
        Permutation::from_one_line(v).unwrap()
    }

    #[test]
    fn trivial_group_enumerates_identity() {
        let g = PermGroup::trivial(5);
        assert_eq!(g.elements().unwrap(), &[Permutation::identity(5)]);
        assert_eq!(
            g.orbits(),
            vec![vec![0], vec![1], vec![2], vec![3], vec![4]]
        );
    }

    #[test]
    fn symmetric_group_orbits_and_regularity() {
        let s3 = PermGroup::symmetric(3);
        assert_eq!(s3.order().unwrap(), 6);
        assert_eq!(s3.orbits(), vec![vec![0, 1, 2]]);
        assert!(!s3.is_regular_on(&[0, 1, 2]).unwrap());
        let stab = s3.point_stabilizer(2).unwrap();
        assert_eq!(stab.order().unwrap(), 2);
        assert!(stab.contains(&p(&[2, 1, 3])).unwrap());
    }

    #[test]
    fn cap_is_a_hard_error() {
        let s5 = PermGroup::symmetric(5).with_order_cap(100);
        assert_eq!(s5.order(), Err(Error::CapExceeded { cap: 100 }));
    }

    #[test]
    fn regularity_requires_invariant_block() {
        let s3 = PermGroup::symmetric(3);
        assert_eq!(s3.is_regular_on(&[0, 1]), Err(Error::NotInvariant));
        let c3 = PermGroup::new(3, vec![p(&[2, 3, 1])]).unwrap();
        assert!(c3.is_regular_on(&[0, 1, 2]).unwrap());
    }

    #[test]
    fn index_arithmetic_matches_composition() {
        let s4 = PermGroup::symmetric(4);
        let en = s4.enumerate().unwrap();
        for a in 0..en.len() {
            for b in 0..en.len() {
                let prod = en.elements()[a].after(&en.elements()[b]);
                assert_eq!(en.elements()[en.mul(a, b)], prod);
            }
            assert!(en.elements()[en.mul(a, en.inv(a))].is_identity());
        }
    }

    #[test]
    fn least_transporter_is_lexicographically_least() {
        let s3 = PermGroup::symmetric(3);
        let t = s3.least_transporter(Label(0), Label(1)).unwrap().unwrap();
        assert_eq!(*t, p(&[2, 1, 3]));
        let c2 = PermGroup::new(3, vec![p(&[2, 1, 3])]).unwrap();
        assert!(c2.least_transporter(Label(0), Label(2)).unwrap().is_none());
    }

    #[test]
    fn from_elements_recovers_generators() {
        let s4 = PermGroup::symmetric(4);
        let copy = PermGroup::from_elements(4, s4.elements().unwrap().to_vec());
        let regen = PermGroup::new(4, copy.generators().to_vec()).unwrap();
        assert_eq!(regen.order().unwrap(), 24);
    }
}
