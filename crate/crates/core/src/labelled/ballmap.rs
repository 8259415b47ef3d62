use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::labelled::ball::{parse_path, BallArc, TreeBall, Vertex, NONE};

/// A partial map between the vertex arenas of two balls (possibly the same
/// ball), indexed by domain vertex id.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BallMap {
    image: Vec<u32>,
}

impl BallMap {
    /// The empty map on a domain arena of `len` vertices.
    pub fn empty(len: usize) -> Self {
        BallMap {
            image: vec![NONE; len],
        }
    }

    pub fn identity(ball: &TreeBall) -> Self {
        BallMap {
            image: (0..ball.len() as u32).collect(),
        }
    }

    pub fn from_images(image: Vec<u32>) -> Self {
        BallMap { image }
    }

    pub fn set(&mut self, v: Vertex, w: Vertex) {
        if v.idx() >= self.image.len() {
            self.image.resize(v.idx() + 1, NONE);
        }
        self.image[v.idx()] = w.0;
    }

    pub fn unset(&mut self, v: Vertex) {
        if v.idx() < self.image.len() {
            self.image[v.idx()] = NONE;
        }
    }

    #[inline]
    pub fn get(&self, v: Vertex) -> Option<Vertex> {
        match self.image.get(v.idx()) {
            Some(&w) if w != NONE => Some(Vertex(w)),
            _ => None,
        }
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.get(v).is_some()
    }

    pub fn arc(&self, a: BallArc) -> Option<BallArc> {
        Some(BallArc::new(self.get(a.from)?, self.get(a.to)?))
    }

    /// Domain vertices in id order.
    pub fn domain(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.image
            .iter()
            .enumerate()
            .filter(|(_, &w)| w != NONE)
            .map(|(v, _)| Vertex(v as u32))
    }

    pub fn domain_len(&self) -> usize {
        self.image.iter().filter(|&&w| w != NONE).count()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.domain().map(|v| (v, Vertex(self.image[v.idx()])))
    }

    pub fn is_identity(&self) -> bool {
        self.pairs().all(|(v, w)| v == w)
    }

    /// `self ∘ inner`, defined where `inner` lands in the domain of `self`.
    pub fn after(&self, inner: &BallMap) -> BallMap {
        BallMap {
            image: inner
                .image
                .iter()
                .map(|&w| {
                    if w == NONE {
                        NONE
                    } else {
                        self.image.get(w as usize).copied().unwrap_or(NONE)
                    }
                })
                .collect(),
        }
    }

    /// Inverse on the image; `codomain_len` sizes the result arena.
    pub fn inverse(&self, codomain_len: usize) -> Result<BallMap> {
        let mut out = vec![NONE; codomain_len];
        for (v, w) in self.pairs() {
            let slot = out
                .get_mut(w.idx())
                .ok_or_else(|| Error::InvalidMap("image outside codomain".into()))?;
            if *slot != NONE {
                return Err(Error::InvalidMap("map is not injective".into()));
            }
            *slot = v.0;
        }
        Ok(BallMap { image: out })
    }

    /// Restriction to the connected part of the domain containing `center`
    /// that lies within distance `radius` of it.
    pub fn restrict(&self, dom: &TreeBall, center: Vertex, radius: usize) -> BallMap {
        let mut out = BallMap::empty(self.image.len());
        for (v, _) in dom.ball_around(center, radius) {
            if let Some(w) = self.get(v) {
                out.set(v, w);
            }
        }
        out.connected_part(dom, center)
    }

    /// The component of the domain (as a subforest of `dom`) containing
    /// `center`.
    pub fn connected_part(&self, dom: &TreeBall, center: Vertex) -> BallMap {
        let mut out = BallMap::empty(self.image.len());
        let Some(w) = self.get(center) else {
            return out;
        };
        out.set(center, w);
        let mut stack = vec![center];
        while let Some(v) = stack.pop() {
            for u in dom.neighbors(v) {
                if !out.contains(u) {
                    if let Some(w) = self.get(u) {
                        out.set(u, w);
                        stack.push(u);
                    }
                }
            }
        }
        out
    }

    /// Checks injectivity, adjacency preservation and connectivity of the
    /// domain.
    pub fn validate(&self, dom: &TreeBall, cod: &TreeBall) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidMap(m));
        let mut seen = vec![false; cod.len()];
        let mut first = None;
        for (v, w) in self.pairs() {
            if v.idx() >= dom.len() || w.idx() >= cod.len() {
                return bad("vertex outside its ball".into());
            }
            if std::mem::replace(&mut seen[w.idx()], true) {
                return bad(format!("{} has two preimages", cod.path_string(w)));
            }
            first.get_or_insert(v);
            if let Some(p) = dom.parent(v) {
                if let Some(pw) = self.get(p) {
                    if !cod.are_adjacent(w, pw) {
                        return bad(format!(
                            "edge {} - {} is not mapped to an edge",
                            dom.path_string(p),
                            dom.path_string(v)
                        ));
                    }
                }
            }
        }
        if let Some(c) = first {
            if self.connected_part(dom, c).domain_len() != self.domain_len() {
                return bad("domain is not connected".into());
            }
        }
        Ok(())
    }

    /// `.bm` text: one `v /path -> /path` line per domain vertex, in domain
    /// path order.
    pub fn to_bm(&self, dom: &TreeBall, cod: &TreeBall) -> String {
        let mut lines: Vec<(Vec<_>, String)> = self
            .pairs()
            .map(|(v, w)| {
                (
                    dom.path(v),
                    format!("v {} -> {}\n", dom.path_string(v), cod.path_string(w)),
                )
            })
            .collect();
        lines.sort();
        let mut out = String::new();
        for (_, l) in lines {
            out.push_str(&l);
        }
        out
    }

    /// Parses `.bm` text against materialized balls and re-validates.
    pub fn from_bm(text: &str, dom: &TreeBall, cod: &TreeBall) -> Result<BallMap> {
        let mut map = BallMap::empty(dom.len());
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let [tag, from, arrow, to] = toks[..] else {
                return Err(Error::parse(i + 1, "expected `v /path -> /path`"));
            };
            if tag != "v" || arrow != "->" {
                return Err(Error::parse(i + 1, "expected `v /path -> /path`"));
            }
            let find = |ball: &TreeBall, p: &str| {
                parse_path(p)
                    .and_then(|labels| ball.find_path(&labels))
                    .ok_or_else(|| Error::parse(i + 1, format!("no materialized vertex {p}")))
            };
            let v = find(dom, from)?;
            let w = find(cod, to)?;
            map.set(v, w);
        }
        map.validate(dom, cod)?;
        Ok(map)
    }

    pub fn describe(&self, dom: &TreeBall, cod: &TreeBall) -> String {
        let mut s = String::new();
        for (v, w) in self.pairs().take(8) {
            let _ = write!(s, "{}->{} ", dom.path_string(v), cod.path_string(w));
        }
        s.trim_end().to_string()
    }
}
