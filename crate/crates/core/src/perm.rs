//! Permutations of `{1, …, n}` in one-line notation.
//!
//! Points are stored zero-based; everything that reaches text (reports, file
//! formats, `Display`) is one-based, matching the labels `1..=n`.

use std::fmt;

use crate::error::{Error, Result};

/// An arc label in `{1, …, n}`, stored zero-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label(pub u32);

impl Label {
    /// Builds a label from its one-based value.
    pub fn new(one_based: usize) -> Self {
        assert!(one_based >= 1, "labels are one-based");
        Label((one_based - 1) as u32)
    }

    pub fn from_index(index: usize) -> Self {
        Label(index as u32)
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn value(self) -> usize {
        self.0 as usize + 1
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// A bijection of `{0, …, n-1}`. The derived ordering is the lexicographic
/// order of one-line notation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Box<[u32]>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    /// Zero-based images; checks bijectivity.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            let i = i as usize;
            if i >= n || seen[i] {
                return Err(Error::NotAPermutation(format!("{images:?} (zero-based)")));
            }
            seen[i] = true;
        }
        Ok(Permutation {
            images: images.into_boxed_slice(),
        })
    }

    /// One-based one-line notation, e.g. `[2, 3, 1]`.
    pub fn from_one_line(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::NotAPermutation(format!("{images:?}")));
        }
        Self::from_images(images.iter().map(|&i| (i - 1) as u32).collect())
            .map_err(|_| Error::NotAPermutation(format!("{images:?}")))
    }

    /// Parses one-line notation separated by spaces and/or commas,
    /// optionally wrapped in parentheses.
    pub fn parse(text: &str) -> Result<Self> {
        let inner = text.trim().trim_start_matches('(').trim_end_matches(')');
        let values = inner
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::NotAPermutation(text.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_one_line(&values)
    }

    /// Builds the permutation sending `points[k]` to `images[k]` and fixing
    /// everything else.
    pub fn from_mapping(degree: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        for (a, b) in pairs {
            images[a] = b as u32;
        }
        Self::from_images(images)
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn image(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    #[inline]
    pub fn apply(&self, label: Label) -> Label {
        Label(self.images[label.index()])
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(self.after(other))
    }

    /// Unchecked `self ∘ other` for callers that already know the degrees agree.
    #[inline]
    pub fn after(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: other.images.iter().map(|&i| self.images[i as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.degree()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Permutation {
            images: inv.into_boxed_slice(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    /// One-based images separated by single spaces.
    pub fn one_line(&self) -> String {
        let mut s = String::with_capacity(self.degree() * 4);
        for (k, &i) in self.images.iter().enumerate() {
            if k > 0 {
                s.push(' ');
            }
            s.push_str(&(i + 1).to_string());
        }
        s
    }

    /// Order of the cyclic subgroup generated by `self`.
    pub fn order(&self) -> usize {
        let mut seen = vec![false; self.degree()];
        let mut order = 1usize;
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.image(i);
                len += 1;
            }
            order = lcm(order, len);
        }
        order
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.one_line())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> Permutation {
        Permutation::from_one_line(v).unwrap()
    }

    #[test]
    fn compose_applies_right_factor_first() {
        assert_eq!(p(&[2, 1, 3]).compose(&p(&[3, 2, 1])).unwrap(), p(&[3, 1, 2]));
        assert_eq!(
            Permutation::identity(3).compose(&p(&[2, 3, 1])).unwrap(),
            p(&[2, 3, 1])
        );
    }

    #[test]
    fn compose_rejects_degree_mismatch() {
        assert_eq!(
            Permutation::identity(3).compose(&Permutation::identity(4)),
            Err(Error::DegreeMismatch(3, 4))
        );
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_one_line(&[1, 1, 2]).is_err());
        assert!(Permutation::from_one_line(&[0, 1, 2]).is_err());
        assert!(Permutation::from_one_line(&[1, 4, 2]).is_err());
    }

    #[test]
    fn parse_accepts_commas_and_parens() {
        assert_eq!(Permutation::parse("(2 3 1)").unwrap(), p(&[2, 3, 1]));
        assert_eq!(Permutation::parse("2,3,1").unwrap(), p(&[2, 3, 1]));
        assert_eq!(p(&[2, 3, 1]).to_string(), "(2 3 1)");
    }

    #[test]
    fn inverse_and_order() {
        let c = p(&[2, 3, 1, 5, 4]);
        assert!(c.after(&c.inverse()).is_identity());
        assert_eq!(c.order(), 6);
        assert_eq!(Permutation::identity(4).order(), 1);
    }
}
