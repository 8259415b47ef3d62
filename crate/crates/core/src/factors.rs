//! Normal subgroups, coset quotients and composition-factor multisets.

use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashSet;

use crate::error::{Error, Result};
use crate::group::{index_closure, Enumeration, PermGroup};
use crate::perm::Permutation;

/// Display names for nonabelian simple groups by order. Equal orders never
/// collide below 20160, so `(order, abelian)` identifies a factor in the
/// range the order cap allows.
const SIMPLE_NAMES: &[(usize, &str)] = &[
    (60, "A_5"),
    (168, "PSL(2,7)"),
    (360, "A_6"),
    (504, "PSL(2,8)"),
    (660, "PSL(2,11)"),
    (1092, "PSL(2,13)"),
    (2448, "PSL(2,17)"),
    (2520, "A_7"),
    (3420, "PSL(2,19)"),
    (4080, "PSL(2,16)"),
    (5616, "PSL(3,3)"),
    (6048, "PSU(3,3)"),
    (6072, "PSL(2,23)"),
    (7800, "PSL(2,25)"),
    (7920, "M_11"),
    (9828, "PSL(2,27)"),
];

/// A simple composition factor, identified by order and commutativity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimpleFactorId {
    pub order: usize,
    pub abelian: bool,
    pub name: Option<String>,
}

impl SimpleFactorId {
    pub fn cyclic(p: usize) -> Self {
        SimpleFactorId {
            order: p,
            abelian: true,
            name: Some(format!("C_{p}")),
        }
    }

    pub fn nonabelian(order: usize) -> Self {
        let name = SIMPLE_NAMES
            .iter()
            .find(|(o, _)| *o == order)
            .map(|(_, n)| n.to_string());
        SimpleFactorId {
            order,
            abelian: false,
            name,
        }
    }

    fn key(&self) -> (usize, bool) {
        (self.order, self.abelian)
    }
}

impl fmt::Display for SimpleFactorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.name {
            Some(n) => f.write_str(n),
            None => write!(f, "S_{}?", self.order),
        }
    }
}

/// Multiset of composition factors, kept sorted by `(order, abelian)` with
/// nonabelian factors last.
#[derive(Clone, Debug, Default)]
pub struct FactorMultiset {
    entries: Vec<SimpleFactorId>,
}

impl FactorMultiset {
    pub fn new(mut entries: Vec<SimpleFactorId>) -> Self {
        entries.sort_by_key(|e| (!e.abelian, e.order));
        FactorMultiset { entries }
    }

    pub fn entries(&self) -> &[SimpleFactorId] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Product of the factor orders (the order of the group).
    pub fn order(&self) -> usize {
        self.entries.iter().map(|e| e.order).product()
    }

    /// Multiset union.
    pub fn union(&self, other: &FactorMultiset) -> FactorMultiset {
        let mut all = self.entries.clone();
        all.extend(other.entries.iter().cloned());
        FactorMultiset::new(all)
    }

    /// Whether some nonabelian factor had no entry in the name table.
    pub fn has_unidentified(&self) -> bool {
        self.entries.iter().any(|e| e.name.is_none())
    }
}

impl PartialEq for FactorMultiset {
    fn eq(&self, other: &Self) -> bool {
        factor_multisets_equal(self, other)
    }
}

impl Eq for FactorMultiset {}

impl fmt::Display for FactorMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

/// Multiset equality under `(order, abelian)` identity.
pub fn factor_multisets_equal(a: &FactorMultiset, b: &FactorMultiset) -> bool {
    let mut ka: Vec<_> = a.entries.iter().map(SimpleFactorId::key).collect();
    let mut kb: Vec<_> = b.entries.iter().map(SimpleFactorId::key).collect();
    ka.sort_unstable();
    kb.sort_unstable();
    ka == kb
}

/// How to choose among maximal normal subgroups of least index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TieBreak {
    /// Smallest quotient, then lexicographically least element list.
    Canonical,
    /// Uniformly random among all maximal normal subgroups.
    Seeded(u64),
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        while n.is_multiple_of(p) {
            out.push(p);
            n /= p;
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// A subgroup of an enumerated group, as a sorted list of element indices.
type IndexSet = Vec<u32>;

fn to_index_set(member: &[bool]) -> IndexSet {
    member
        .iter()
        .enumerate()
        .filter(|(_, &m)| m)
        .map(|(i, _)| i as u32)
        .collect()
}

fn conjugacy_classes(group: &PermGroup, en: &Enumeration) -> Vec<Vec<usize>> {
    let gens: Vec<usize> = group
        .generators()
        .iter()
        .map(|g| en.index_of(g).expect("generator is an element"))
        .collect();
    let gen_invs: Vec<usize> = gens.iter().map(|&g| en.inv(g)).collect();
    let mut class_of = vec![usize::MAX; en.len()];
    let mut classes = Vec::new();
    for start in 0..en.len() {
        if class_of[start] != usize::MAX {
            continue;
        }
        let id = classes.len();
        class_of[start] = id;
        let mut class = vec![start];
        let mut head = 0;
        while head < class.len() {
            let x = class[head];
            head += 1;
            for (&g, &gi) in gens.iter().zip(&gen_invs) {
                let y = en.mul(en.mul(g, x), gi);
                if class_of[y] == usize::MAX {
                    class_of[y] = id;
                    class.push(y);
                }
            }
        }
        classes.push(class);
    }
    classes
}

/// Subgroup generated by `seed` (and normal if `seed` is a union of classes),
/// returned with a small generating set.
fn generated(en: &Enumeration, seed: &[usize]) -> (IndexSet, Vec<usize>) {
    let mut gens: Vec<usize> = Vec::new();
    let mut member = vec![false; en.len()];
    member[en.identity_index()] = true;
    for &s in seed {
        if !member[s] {
            gens.push(s);
            member = index_closure(en, &gens);
        }
    }
    (to_index_set(&member), gens)
}

/// All normal subgroups as index sets (each with a generating set), sorted
/// by order then lexicographically.
fn normal_index_sets(group: &PermGroup) -> Result<Vec<(IndexSet, Vec<usize>)>> {
    let en = group.enumerate()?;
    let classes = conjugacy_classes(group, en);
    let mut closures: Vec<(IndexSet, Vec<usize>)> = Vec::new();
    let mut seen_closures: FxHashSet<IndexSet> = FxHashSet::default();
    for class in &classes {
        let (set, gens) = generated(en, class);
        if seen_closures.insert(set.clone()) {
            closures.push((set, gens));
        }
    }
    // every normal subgroup is a join of normal closures of classes
    let trivial = vec![en.identity_index() as u32];
    let mut all: Vec<(IndexSet, Vec<usize>)> = vec![(trivial.clone(), Vec::new())];
    let mut seen: FxHashSet<IndexSet> = FxHashSet::default();
    seen.insert(trivial);
    for (cset, cgens) in &closures {
        let snapshot = all.len();
        for k in 0..snapshot {
            let (aset, agens) = &all[k];
            if is_subset(cset, aset) {
                continue;
            }
            let mut gens = agens.clone();
            gens.extend(cgens.iter().copied());
            let (join, join_gens) = generated(en, &gens);
            if seen.insert(join.clone()) {
                all.push((join, join_gens));
            }
        }
    }
    all.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
    Ok(all)
}

fn is_subset(small: &[u32], big: &[u32]) -> bool {
    if small.len() > big.len() {
        return false;
    }
    let mut j = 0;
    for &x in small {
        while j < big.len() && big[j] < x {
            j += 1;
        }
        if j == big.len() || big[j] != x {
            return false;
        }
    }
    true
}

fn subgroup_from_indices(group: &PermGroup, en: &Enumeration, set: &[u32]) -> PermGroup {
    let elements = set
        .iter()
        .map(|&i| en.elements()[i as usize].clone())
        .collect();
    PermGroup::from_elements(group.degree(), elements)
}

impl PermGroup {
    /// All normal subgroups, including the trivial group and the whole group.
    pub fn normal_subgroups(&self) -> Result<Vec<PermGroup>> {
        let en = self.enumerate()?;
        Ok(normal_index_sets(self)?
            .iter()
            .map(|(set, _)| subgroup_from_indices(self, en, set))
            .collect())
    }

    /// The permutation action of `self` on the left cosets of `normal`.
    pub fn quotient(&self, normal: &PermGroup) -> Result<PermGroup> {
        if !self.is_normal_subgroup(normal)? {
            return Err(Error::NotNormal);
        }
        let en = self.enumerate()?;
        let kernel: Vec<usize> = normal
            .elements()?
            .iter()
            .map(|k| en.index_of(k).expect("normal subgroup elements lie in the group"))
            .collect();
        let mut coset = vec![u32::MAX; en.len()];
        let mut reps = Vec::new();
        for i in 0..en.len() {
            if coset[i] != u32::MAX {
                continue;
            }
            let id = reps.len() as u32;
            reps.push(i);
            for &k in &kernel {
                coset[en.mul(i, k)] = id;
            }
        }
        let index = reps.len();
        let gens = self
            .generators()
            .iter()
            .map(|g| {
                let gi = en.index_of(g).expect("generator is an element");
                let images = reps.iter().map(|&r| coset[en.mul(gi, r)]).collect();
                Permutation::from_images(images)
            })
            .collect::<Result<Vec<_>>>()?;
        PermGroup::new(index, gens)
    }

    pub fn composition_factors(&self) -> Result<FactorMultiset> {
        self.composition_factors_with(TieBreak::Canonical)
    }

    /// Composition factors via a top-down series: repeatedly pass to a
    /// maximal normal subgroup, recording the simple quotient.
    pub fn composition_factors_with(&self, tie_break: TieBreak) -> Result<FactorMultiset> {
        let mut rng = match tie_break {
            TieBreak::Seeded(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
            TieBreak::Canonical => None,
        };
        let mut factors = Vec::new();
        let mut current = self.clone();
        loop {
            let order = current.order()?;
            if order == 1 {
                break;
            }
            if current.is_abelian() {
                factors.extend(prime_factors(order).into_iter().map(SimpleFactorId::cyclic));
                break;
            }
            let en = current.enumerate()?;
            let normals = normal_index_sets(&current)?;
            let proper: Vec<&(IndexSet, Vec<usize>)> =
                normals.iter().filter(|(s, _)| s.len() < order).collect();
            let maximal: Vec<&(IndexSet, Vec<usize>)> = proper
                .iter()
                .filter(|(s, _)| {
                    !proper
                        .iter()
                        .any(|(t, _)| t.len() > s.len() && is_subset(s, t))
                })
                .copied()
                .collect();
            let chosen = match rng.as_mut() {
                None => *maximal
                    .iter()
                    .min_by(|a, b| b.0.len().cmp(&a.0.len()).then_with(|| a.0.cmp(&b.0)))
                    .expect("the trivial subgroup is proper"),
                Some(rng) => *maximal.choose(rng).expect("nonempty"),
            };
            let index = order / chosen.0.len();
            let quotient_abelian = current.generators().iter().all(|a| {
                current.generators().iter().all(|b| {
                    let comm = a.after(b).after(&a.inverse()).after(&b.inverse());
                    let ci = en.index_of(&comm).expect("commutator is an element");
                    chosen.0.binary_search(&(ci as u32)).is_ok()
                })
            });
            if quotient_abelian {
                factors.push(SimpleFactorId::cyclic(index));
            } else {
                factors.push(SimpleFactorId::nonabelian(index));
            }
            current = subgroup_from_indices(&current, en, &chosen.0);
        }
        Ok(FactorMultiset::new(factors))
    }
}
