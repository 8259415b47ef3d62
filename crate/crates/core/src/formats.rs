//! Line-oriented text formats: `.pg` groups, `.os` orbit structures, `.lg`
//! labelled graphs, `.tb` ball dumps and `.td` relabelling inputs. Blank
//! lines and `#` comments are ignored everywhere.

use std::fmt::Write as _;
use std::sync::Arc;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::labelled::{parse_path, LabelledGraph, OrbitStructure, TreeBall};
use crate::lattices::ThetaData;
use crate::perm::{Label, Permutation};

fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = body.split_whitespace().collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    })
}

fn num<T: std::str::FromStr>(line: usize, tok: &str) -> Result<T> {
    tok.parse().map_err(|_| Error::parse(line, format!("expected a number, got `{tok}`")))
}

fn label(line: usize, tok: &str) -> Result<Label> {
    let v: usize = num(line, tok)?;
    if v == 0 {
        return Err(Error::parse(line, "labels are one-based"));
    }
    Ok(Label::new(v))
}

pub fn parse_pg(text: &str) -> Result<PermGroup> {
    let mut degree = None;
    let mut gens = Vec::new();
    for (ln, toks) in lines(text) {
        match (degree, toks[0]) {
            (None, "degree") if toks.len() == 2 => degree = Some(num::<usize>(ln, toks[1])?),
            (None, _) => return Err(Error::parse(ln, "first line must be `degree <n>`")),
            (Some(n), _) => {
                if toks.len() != n {
                    return Err(Error::parse(ln, format!("expected {n} images, got {}", toks.len())));
                }
                let images = toks.iter().map(|t| num(ln, t)).collect::<Result<Vec<usize>>>()?;
                gens.push(Permutation::from_one_line(&images).map_err(|e| Error::parse(ln, e.to_string()))?);
            }
        }
    }
    let degree = degree.ok_or_else(|| Error::parse(0, "missing `degree` line"))?;
    PermGroup::new(degree, gens)
}

pub fn write_pg(group: &PermGroup) -> String {
    let mut out = format!("degree {}\n", group.degree());
    for g in group.generators() {
        writeln!(out, "{}", g.one_line()).unwrap();
    }
    out
}

pub fn parse_os(text: &str) -> Result<OrbitStructure> {
    let mut n = None;
    let mut ids = Vec::new();
    let mut blocks = Vec::new();
    let mut pairs = Vec::new();
    for (ln, toks) in lines(text) {
        match toks[0] {
            "n" if toks.len() == 2 => n = Some(num::<usize>(ln, toks[1])?),
            "orbit" if toks.len() >= 3 => {
                ids.push(toks[1].to_string());
                blocks.push(toks[2..].iter().map(|t| label(ln, t)).collect::<Result<Vec<_>>>()?);
            }
            "tau" if toks.len() == 3 => pairs.push((ln, toks[1].to_string(), toks[2].to_string())),
            other => return Err(Error::parse(ln, format!("unexpected `{other}`"))),
        }
    }
    let n = n.ok_or_else(|| Error::parse(0, "missing `n` line"))?;
    let index: FxHashMap<&str, usize> = ids.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let mut tau: Vec<usize> = (0..ids.len()).collect();
    for (ln, a, b) in &pairs {
        let find = |s: &str| index.get(s).copied().ok_or_else(|| Error::parse(*ln, format!("unknown orbit `{s}`")));
        let (i, j) = (find(a)?, find(b)?);
        tau[i] = j;
        tau[j] = i;
    }
    OrbitStructure::with_ids(n, ids.clone(), blocks, tau)
}

pub fn write_os(os: &OrbitStructure) -> String {
    let mut out = format!("n {}\n", os.n());
    for (i, block) in os.blocks().iter().enumerate() {
        let labels: Vec<String> = block.iter().map(|l| l.to_string()).collect();
        writeln!(out, "orbit {} {}", os.id(i), labels.join(" ")).unwrap();
    }
    for i in 0..os.num_blocks() {
        if os.tau(i) >= i {
            writeln!(out, "tau {} {}", os.id(i), os.id(os.tau(i))).unwrap();
        }
    }
    out
}

pub fn parse_lg(text: &str) -> Result<LabelledGraph> {
    let mut g = LabelledGraph::new();
    for (ln, toks) in lines(text) {
        match toks[0] {
            "vertex" if toks.len() == 2 => {
                if g.vertex_by_name(toks[1]).is_some() {
                    return Err(Error::parse(ln, format!("duplicate vertex `{}`", toks[1])));
                }
                g.add_vertex(toks[1]);
            }
            "edge" if toks.len() == 6 => {
                let v = |s: &str| g.vertex_by_name(s).ok_or_else(|| Error::parse(ln, format!("unknown vertex `{s}`")));
                let (src, dst) = (v(toks[2])?, v(toks[3])?);
                if g.arc_by_name(toks[1]).is_some() {
                    return Err(Error::parse(ln, format!("duplicate arc `{}`", toks[1])));
                }
                g.add_edge(toks[1], src, dst, label(ln, toks[4])?, label(ln, toks[5])?);
            }
            other => return Err(Error::parse(ln, format!("unexpected `{other}`"))),
        }
    }
    Ok(g)
}

pub fn write_lg(g: &LabelledGraph) -> String {
    let mut out = String::new();
    for v in 0..g.num_vertices() {
        writeln!(out, "vertex {}", g.vertex_name(v)).unwrap();
    }
    for e in (0..g.num_arcs()).step_by(2) {
        let d = g.arc(e);
        writeln!(
            out,
            "edge {} {} {} {} {}",
            d.name,
            g.vertex_name(d.origin),
            g.vertex_name(d.terminus),
            d.label,
            g.label(g.bar(e))
        )
        .unwrap();
    }
    out
}

/// Dumps a ball as its root line followed by one `arc` line per non-root
/// vertex, ordered by label path.
pub fn write_tb(ball: &TreeBall) -> String {
    let mut out = format!("root {} radius {}\n", ball.root_name(), ball.materialized_radius());
    let mut verts: Vec<_> = ball.vertices().filter(|&v| v != ball.root()).map(|v| (ball.path(v), v)).collect();
    verts.sort();
    for (_, v) in verts {
        writeln!(
            out,
            "arc {} {} {}",
            ball.path_string(v),
            ball.down_label(v).unwrap(),
            ball.up_label(v).unwrap()
        )
        .unwrap();
    }
    out
}

/// Reads a `.tb` dump into a frozen ball. The degree is the largest label
/// present.
pub fn parse_tb(text: &str) -> Result<TreeBall> {
    let mut header = None;
    let mut arcs = Vec::new();
    for (ln, toks) in lines(text) {
        match toks[0] {
            "root" if toks.len() == 4 && toks[2] == "radius" => {
                header = Some((toks[1].to_string(), num::<usize>(ln, toks[3])?));
            }
            "arc" if toks.len() == 4 => {
                let path = parse_path(toks[1]).ok_or_else(|| Error::parse(ln, format!("bad path `{}`", toks[1])))?;
                if path.is_empty() {
                    return Err(Error::parse(ln, "the root has no incoming arc"));
                }
                let fwd = label(ln, toks[2])?;
                if *path.last().unwrap() != fwd {
                    return Err(Error::parse(ln, "path must end in the arc's label"));
                }
                arcs.push((ln, path, fwd, label(ln, toks[3])?));
            }
            other => return Err(Error::parse(ln, format!("unexpected `{other}`"))),
        }
    }
    let (name, radius) = header.ok_or_else(|| Error::parse(0, "missing `root` line"))?;
    let n = arcs.iter().map(|(_, _, a, b)| a.index().max(b.index()) + 1).max().unwrap_or(0);
    arcs.sort_by(|a, b| (a.1.len(), &a.1).cmp(&(b.1.len(), &b.1)));
    let mut ball = TreeBall::frozen(n, name);
    let mut placed = FxHashMap::default();
    placed.insert(Vec::new(), ball.root());
    for (ln, path, fwd, bwd) in arcs {
        if path.len() > radius {
            return Err(Error::parse(ln, format!("path deeper than radius {radius}")));
        }
        let parent = *placed
            .get(&path[..path.len() - 1])
            .ok_or_else(|| Error::parse(ln, "parent path is missing"))?;
        if placed.contains_key(&path) {
            return Err(Error::parse(ln, "duplicate arc"));
        }
        let v = ball.push_child(parent, fwd, bwd);
        placed.insert(path, v);
    }
    ball.seal();
    Ok(ball)
}

/// A parsed `.td` file; graph and group are file references resolved by
/// the caller.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaSpec {
    pub graph: String,
    pub group: String,
    pub base: Option<String>,
    pub tree: Vec<String>,
    pub basis: Vec<(String, Option<Permutation>)>,
    pub twist: Option<u64>,
}

pub fn parse_td(text: &str) -> Result<ThetaSpec> {
    let (mut graph, mut group, mut base, mut twist) = (None, None, None, None);
    let mut tree = Vec::new();
    let mut basis = Vec::new();
    for (ln, toks) in lines(text) {
        match toks[0] {
            "graph" if toks.len() == 2 => graph = Some(toks[1].to_string()),
            "group" if toks.len() == 2 => group = Some(toks[1].to_string()),
            "base" if toks.len() == 2 => base = Some(toks[1].to_string()),
            "twist" if toks.len() == 2 => twist = Some(num(ln, toks[1])?),
            "tree" => tree.extend(toks[1..].iter().map(|s| s.to_string())),
            "basis" if toks.len() >= 2 => {
                let f = if toks.len() > 2 {
                    Some(Permutation::parse(&toks[2..].join(" ")).map_err(|e| Error::parse(ln, e.to_string()))?)
                } else {
                    None
                };
                basis.push((toks[1].to_string(), f));
            }
            other => return Err(Error::parse(ln, format!("unexpected `{other}`"))),
        }
    }
    Ok(ThetaSpec {
        graph: graph.ok_or_else(|| Error::parse(0, "missing `graph` line"))?,
        group: group.ok_or_else(|| Error::parse(0, "missing `group` line"))?,
        base,
        tree,
        basis,
        twist,
    })
}

impl ThetaSpec {
    pub fn resolve(&self, graph: LabelledGraph, group: PermGroup) -> Result<ThetaData> {
        let arc = |name: &str| graph.arc_by_name(name).ok_or_else(|| Error::BasisInvalid(format!("unknown arc `{name}`")));
        let tree = self.tree.iter().map(|s| arc(s)).collect::<Result<Vec<_>>>()?;
        let basis = self.basis.iter().map(|(s, _)| arc(s)).collect::<Result<Vec<_>>>()?;
        let base = match &self.base {
            Some(name) => graph
                .vertex_by_name(name)
                .ok_or_else(|| Error::BasisInvalid(format!("unknown vertex `{name}`")))?,
            None => 0,
        };
        Ok(ThetaData {
            graph: Arc::new(graph),
            base,
            group,
            tree,
            basis,
            expected: self.basis.iter().map(|(_, f)| f.clone()).collect(),
            twist: self.twist,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattices::{build_x, canonical_f240};

    #[test]
    fn pg_round_trip() {
        let g = PermGroup::symmetric(4);
        let back = parse_pg(&write_pg(&g)).unwrap();
        assert_eq!(back.order().unwrap(), 24);
    }

    #[test]
    fn pg_rejects_bad_lines() {
        assert!(matches!(parse_pg("degree 3\n1 2\n"), Err(Error::Parse { line: 2, .. })));
        assert!(parse_pg("degree 3\n1 1 2\n").is_err());
        assert!(parse_pg("# only a comment\n").is_err());
    }

    #[test]
    fn os_and_lg_round_trip() {
        let (_, os) = canonical_f240();
        let back = parse_os(&write_os(&os)).unwrap();
        assert_eq!(back, os);
        let x = build_x();
        let text = write_lg(&x);
        assert_eq!(write_lg(&parse_lg(&text).unwrap()), text);
    }

    #[test]
    fn tb_round_trip() {
        let os = OrbitStructure::singletons(3);
        let ball = TreeBall::random_tau_legal(&os, 3, 7).unwrap();
        let text = write_tb(&ball);
        let back = parse_tb(&text).unwrap();
        assert_eq!(write_tb(&back), text);
        assert_eq!(back.len(), ball.len());
    }

    #[test]
    fn td_parses() {
        let spec = parse_td("graph g.lg\ngroup s4.pg\ntree e1\nbasis e2 2 1 3 4\nbasis e3\ntwist 5\n").unwrap();
        assert_eq!(spec.basis.len(), 2);
        assert_eq!(spec.basis[0].1, Some(Permutation::parse("2 1 3 4").unwrap()));
        assert_eq!(spec.twist, Some(5));
    }
}
