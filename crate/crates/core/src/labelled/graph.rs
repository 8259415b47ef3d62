
use crate::error::{Error, Result};
use crate::perm::Label;

/// Index of an arc in a [`LabelledGraph`]. Arcs `2k` and `2k+1` are each
/// other's bar.
pub type GraphArc = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcData {
    pub name: String,
    pub origin: usize,
    pub terminus: usize,
    pub label: Label,
}

/// A finite graph with an arc involution and arc labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelledGraph {
    vertex_names: Vec<String>,
    arcs: Vec<ArcData>,
    out: Vec<Vec<GraphArc>>,
    position: Vec<usize>,
}

/// Name given to the reverse arc of an edge declared as `name`.
pub fn bar_name(name: &str) -> String {
    format!("~{name}")
}

impl LabelledGraph {
    pub fn new() -> Self {
        LabelledGraph {
            vertex_names: Vec::new(),
            arcs: Vec::new(),
            out: Vec::new(),
            position: Vec::new(),
        }
    }

    pub fn add_vertex(&mut self, name: impl Into<String>) -> usize {
        self.vertex_names.push(name.into());
        self.out.push(Vec::new());
        self.vertex_names.len() - 1
    }

    /// Adds the geometric edge `{e, ē}` with `e: src → dst`, `l(e) = fwd`
    /// and `l(ē) = bwd`. Returns the arc id of `e`.
    pub fn add_edge(
        &mut self,
        name: impl Into<String>,
        src: usize,
        dst: usize,
        fwd: Label,
        bwd: Label,
    ) -> GraphArc {
        let name = name.into();
        let e = self.arcs.len();
        self.arcs.push(ArcData {
            name: name.clone(),
            origin: src,
            terminus: dst,
            label: fwd,
        });
        self.arcs.push(ArcData {
            name: bar_name(&name),
            origin: dst,
            terminus: src,
            label: bwd,
        });
        self.position.push(self.out[src].len());
        self.out[src].push(e);
        self.position.push(self.out[dst].len());
        self.out[dst].push(e + 1);
        e
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn num_arcs(&self) -> usize {
        self.arcs.len()
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertex_names[v]
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<usize> {
        self.vertex_names.iter().position(|n| n == name)
    }

    pub fn arc(&self, a: GraphArc) -> &ArcData {
        &self.arcs[a]
    }

    pub fn arc_by_name(&self, name: &str) -> Option<GraphArc> {
        self.arcs.iter().position(|a| a.name == name)
    }

    #[inline]
    pub fn bar(&self, a: GraphArc) -> GraphArc {
        a ^ 1
    }

    #[inline]
    pub fn label(&self, a: GraphArc) -> Label {
        self.arcs[a].label
    }

    pub fn origin(&self, a: GraphArc) -> usize {
        self.arcs[a].origin
    }

    pub fn terminus(&self, a: GraphArc) -> usize {
        self.arcs[a].terminus
    }

    pub fn set_label(&mut self, a: GraphArc, label: Label) {
        self.arcs[a].label = label;
    }

    /// Arcs with origin `v`, in declaration order.
    pub fn out_arcs(&self, v: usize) -> &[GraphArc] {
        &self.out[v]
    }

    /// Position of `a` in `out_arcs(origin(a))`.
    #[inline]
    pub fn position(&self, a: GraphArc) -> usize {
        self.position[a]
    }

    /// The arc at `v` carrying `label`, if exactly determined.
    pub fn arc_with_label(&self, v: usize, label: Label) -> Option<GraphArc> {
        self.out[v].iter().copied().find(|&a| self.arcs[a].label == label)
    }

    /// Largest out-degree; for a valid labelled graph every vertex has it.
    pub fn degree(&self) -> usize {
        self.out.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Only the local bijectivity condition (what lifting needs).
    pub fn check_bijective(&self, n: usize) -> Result<()> {
        for v in 0..self.num_vertices() {
            let mut seen = vec![false; n];
            if self.out[v].len() != n {
                return Err(Error::InvalidGraph(format!(
                    "vertex {} has degree {} (expected {n})",
                    self.vertex_names[v],
                    self.out[v].len()
                )));
            }
            for &a in &self.out[v] {
                let l = self.arcs[a].label.index();
                if l >= n || seen[l] {
                    return Err(Error::InvalidGraph(format!(
                        "labels at vertex {} are not a bijection onto 1..{n}",
                        self.vertex_names[v]
                    )));
                }
                seen[l] = true;
            }
        }
        Ok(())
    }
}

impl Default for LabelledGraph {
    fn default() -> Self {
        Self::new()
    }
}
