use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Label;

/// A partition of the labels `{1..n}` into blocks together with an
/// involution `tau` on block indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitStructure {
    n: usize,
    ids: Vec<String>,
    blocks: Vec<Vec<Label>>,
    tau: Vec<usize>,
    block_of: Vec<usize>,
}

impl OrbitStructure {
    /// Blocks are given as label lists; `tau[i]` is the partner of block `i`.
    pub fn new(n: usize, blocks: Vec<Vec<Label>>, tau: Vec<usize>) -> Result<Self> {
        let ids = (1..=blocks.len()).map(|i| i.to_string()).collect();
        Self::with_ids(n, ids, blocks, tau)
    }

    pub fn with_ids(
        n: usize,
        ids: Vec<String>,
        mut blocks: Vec<Vec<Label>>,
        tau: Vec<usize>,
    ) -> Result<Self> {
        let bad = |m: String| Error::InvalidOrbitStructure(m);
        if ids.len() != blocks.len() || tau.len() != blocks.len() {
            return Err(bad("ids, blocks and tau must have equal length".into()));
        }
        let mut block_of = vec![usize::MAX; n];
        for (i, block) in blocks.iter_mut().enumerate() {
            if block.is_empty() {
                return Err(bad(format!("block {} is empty", ids[i])));
            }
            block.sort_unstable();
            for &l in block.iter() {
                if l.index() >= n {
                    return Err(bad(format!("label {l} exceeds n = {n}")));
                }
                if block_of[l.index()] != usize::MAX {
                    return Err(bad(format!("label {l} lies in two blocks")));
                }
                block_of[l.index()] = i;
            }
        }
        if let Some(missing) = block_of.iter().position(|&b| b == usize::MAX) {
            return Err(bad(format!("label {} is in no block", missing + 1)));
        }
        for (i, &t) in tau.iter().enumerate() {
            if t >= tau.len() || tau[t] != i {
                return Err(bad(format!("tau is not an involution at block {}", ids[i])));
            }
        }
        Ok(OrbitStructure {
            n,
            ids,
            blocks,
            tau,
            block_of,
        })
    }

    /// The orbit partition of `group` with the given involution on orbit
    /// indices (orbits ordered by least label).
    pub fn from_group(group: &PermGroup, tau: Vec<usize>) -> Result<Self> {
        let blocks = group
            .orbits()
            .into_iter()
            .map(|b| b.into_iter().map(Label::from_index).collect())
            .collect();
        Self::new(group.degree(), blocks, tau)
    }

    /// Singleton blocks with trivial `tau`: the only compatible labellings
    /// are the legal ones.
    pub fn singletons(n: usize) -> Self {
        let blocks = (0..n).map(|i| vec![Label::from_index(i)]).collect();
        Self::new(n, blocks, (0..n).collect()).unwrap()
    }

    /// One block holding every label, trivial `tau`.
    pub fn single_block(n: usize) -> Self {
        let blocks = vec![(0..n).map(Label::from_index).collect()];
        Self::new(n, blocks, vec![0]).unwrap()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<Label>] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &[Label] {
        &self.blocks[i]
    }

    pub fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn tau(&self, i: usize) -> usize {
        self.tau[i]
    }

    pub fn block_of(&self, l: Label) -> usize {
        self.block_of[l.index()]
    }

    /// Whether a label pair `(l(e), l(ē))` satisfies the tau condition.
    pub fn pair_ok(&self, fwd: Label, bwd: Label) -> bool {
        self.block_of(bwd) == self.tau(self.block_of(fwd))
    }

    pub fn is_tau_trivial(&self) -> bool {
        self.tau.iter().enumerate().all(|(i, &t)| i == t)
    }

    /// `|Ω_i| = |Ω_τ(i)|` for every block; recomputed on every call.
    pub fn is_unimodular(&self) -> bool {
        self.first_non_unimodular().is_none()
    }

    pub(crate) fn first_non_unimodular(&self) -> Option<(usize, usize)> {
        (0..self.blocks.len())
            .map(|i| (i, self.tau[i]))
            .find(|&(i, t)| self.blocks[i].len() != self.blocks[t].len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(v: &[usize]) -> Vec<Label> {
        v.iter().map(|&i| Label::new(i)).collect()
    }

    #[test]
    fn rejects_bad_partitions() {
        assert!(OrbitStructure::new(3, vec![labels(&[1, 2])], vec![0]).is_err());
        assert!(OrbitStructure::new(3, vec![labels(&[1, 2]), labels(&[2, 3])], vec![0, 1]).is_err());
        assert!(OrbitStructure::new(3, vec![labels(&[1, 2]), labels(&[3])], vec![1, 1]).is_err());
    }

    #[test]
    fn unimodularity_is_recomputed() {
        let os = OrbitStructure::new(4, vec![labels(&[1, 2, 3]), labels(&[4])], vec![1, 0]).unwrap();
        assert!(!os.is_unimodular());
        let os = OrbitStructure::new(4, vec![labels(&[1, 2]), labels(&[3, 4])], vec![1, 0]).unwrap();
        assert!(os.is_unimodular());
        assert!(os.pair_ok(Label::new(1), Label::new(3)));
        assert!(!os.pair_ok(Label::new(1), Label::new(2)));
    }
}
