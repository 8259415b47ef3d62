//! Orbit structures, labelled graphs and labelled tree balls.

pub mod ball;
pub mod ballmap;
pub mod graph;
pub mod orbits;
pub mod validate;

pub use ball::{parse_path, BallArc, TreeBall, Vertex, DEFAULT_VERTEX_CEILING};
pub use ballmap::BallMap;
pub use graph::{bar_name, ArcData, GraphArc, LabelledGraph};
pub use orbits::OrbitStructure;
pub use validate::{first_illegal_edge, validate_ball, validate_graph, ValidationReport, Violation};

use crate::error::{Error, Result};

/// Two vertices `x1`, `x2` joined by `n` edges. The `x1` side carries labels
/// `1..n`; an edge labelled with the k-th smallest label of a block gets the
/// k-th smallest label of the paired block at `x2`.
pub fn build_two_vertex_quotient(os: &OrbitStructure) -> Result<LabelledGraph> {
    if let Some((i, j)) = os.first_non_unimodular() {
        return Err(Error::NotUnimodular(i + 1, j + 1));
    }
    let mut g = LabelledGraph::new();
    let x1 = g.add_vertex("x1");
    let x2 = g.add_vertex("x2");
    for l in (0..os.n()).map(crate::perm::Label::from_index) {
        let b = os.block_of(l);
        let k = os.block(b).binary_search(&l).expect("label lies in its block");
        let partner = os.block(os.tau(b))[k];
        g.add_edge(format!("e{l}"), x1, x2, l, partner);
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Label;

    fn toy_os() -> OrbitStructure {
        let b = |v: &[usize]| v.iter().map(|&i| Label::new(i)).collect();
        OrbitStructure::new(4, vec![b(&[1, 2]), b(&[3, 4])], vec![1, 0]).unwrap()
    }

    #[test]
    fn two_vertex_quotient_is_tau_legal() {
        let os = toy_os();
        let g = build_two_vertex_quotient(&os).unwrap();
        assert!(validate_graph(&g, &os).is_clean());
        let e1 = g.arc_by_name("e1").unwrap();
        assert_eq!(g.label(g.bar(e1)), Label::new(3));
    }

    #[test]
    fn non_unimodular_is_rejected() {
        let b = |v: &[usize]| v.iter().map(|&i| Label::new(i)).collect();
        let os = OrbitStructure::new(4, vec![b(&[1, 2, 3]), b(&[4])], vec![1, 0]).unwrap();
        assert_eq!(build_two_vertex_quotient(&os), Err(Error::NotUnimodular(1, 2)));
    }

    #[test]
    fn corrupted_rose_reports_duplicate_and_missing() {
        let os = toy_os();
        let mut g = LabelledGraph::new();
        let x = g.add_vertex("x");
        g.add_edge("a", x, x, Label::new(1), Label::new(3));
        g.add_edge("b", x, x, Label::new(2), Label::new(4));
        assert!(validate_graph(&g, &os).is_clean());
        g.set_label(1, Label::new(4));
        let report = validate_graph(&g, &os);
        assert!(report.violations.contains(&Violation::DuplicateLabel {
            vertex: "x".into(),
            label: Label::new(4)
        }));
        assert!(report.violations.contains(&Violation::MissingLabel {
            vertex: "x".into(),
            label: Label::new(3)
        }));
        assert!(!report.has_tau_violation());
    }

    #[test]
    fn random_balls_validate() {
        let os = toy_os();
        for seed in 0..20 {
            let ball = TreeBall::random_tau_legal(&os, 3, seed).unwrap();
            assert!(validate_ball(&ball, &os).is_clean());
        }
    }
}
