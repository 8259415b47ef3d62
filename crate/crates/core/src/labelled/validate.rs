use std::fmt;

use crate::labelled::ball::{BallArc, TreeBall};
use crate::labelled::graph::LabelledGraph;
use crate::labelled::orbits::OrbitStructure;
use crate::perm::Label;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    LabelOutOfRange { arc: String, label: u32 },
    WrongDegree { vertex: String, degree: usize, expected: usize },
    DuplicateLabel { vertex: String, label: Label },
    MissingLabel { vertex: String, label: Label },
    TauViolation { arc: String, fwd: Label, bwd: Label },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::LabelOutOfRange { arc, label } => {
                write!(f, "label-out-of-range arc {arc} label {}", label + 1)
            }
            Violation::WrongDegree { vertex, degree, expected } => {
                write!(f, "wrong-degree vertex {vertex} degree {degree} expected {expected}")
            }
            Violation::DuplicateLabel { vertex, label } => {
                write!(f, "duplicate-label vertex {vertex} label {label}")
            }
            Violation::MissingLabel { vertex, label } => {
                write!(f, "missing-label vertex {vertex} label {label}")
            }
            Violation::TauViolation { arc, fwd, bwd } => {
                write!(f, "tau-violation arc {arc} labels {fwd} {bwd}")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has_duplicate(&self) -> bool {
        self.violations
            .iter()
            .any(|v| matches!(v, Violation::DuplicateLabel { .. }))
    }

    pub fn has_tau_violation(&self) -> bool {
        self.violations
            .iter()
            .any(|v| matches!(v, Violation::TauViolation { .. }))
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

fn check_star(
    vertex: &str,
    labels: impl Iterator<Item = (String, Label)>,
    n: usize,
    out: &mut Vec<Violation>,
) {
    let mut count = vec![0usize; n];
    let mut degree = 0;
    for (arc, l) in labels {
        degree += 1;
        if l.index() >= n {
            out.push(Violation::LabelOutOfRange { arc, label: l.0 });
        } else {
            count[l.index()] += 1;
        }
    }
    if degree != n {
        out.push(Violation::WrongDegree {
            vertex: vertex.to_string(),
            degree,
            expected: n,
        });
    }
    for (i, &c) in count.iter().enumerate() {
        if c > 1 {
            out.push(Violation::DuplicateLabel {
                vertex: vertex.to_string(),
                label: Label::from_index(i),
            });
        }
    }
    for (i, &c) in count.iter().enumerate() {
        if c == 0 {
            out.push(Violation::MissingLabel {
                vertex: vertex.to_string(),
                label: Label::from_index(i),
            });
        }
    }
}

fn check_pair(arc: impl FnOnce() -> String, fwd: Label, bwd: Label, os: &OrbitStructure, out: &mut Vec<Violation>) {
    let n = os.n();
    if fwd.index() < n && bwd.index() < n && !os.pair_ok(fwd, bwd) {
        out.push(Violation::TauViolation { arc: arc(), fwd, bwd });
    }
}

/// Both conditions of a tau-legal labelling on a finite graph: bijective
/// stars and tau-paired blocks across every edge.
pub fn validate_graph(g: &LabelledGraph, os: &OrbitStructure) -> ValidationReport {
    let mut out = Vec::new();
    let n = os.n();
    for v in 0..g.num_vertices() {
        let labels = g
            .out_arcs(v)
            .iter()
            .map(|&a| (g.arc(a).name.clone(), g.label(a)));
        check_star(g.vertex_name(v), labels, n, &mut out);
    }
    for e in (0..g.num_arcs()).step_by(2) {
        check_pair(|| g.arc(e).name.clone(), g.label(e), g.label(e + 1), os, &mut out);
    }
    ValidationReport { violations: out }
}

/// The same conditions on a ball; stars are checked at internal vertices
/// only, pairs on every materialized edge.
pub fn validate_ball(ball: &TreeBall, os: &OrbitStructure) -> ValidationReport {
    let mut out = Vec::new();
    let n = os.n();
    let arc_name = |a: BallArc| format!("{}>{}", ball.path_string(a.from), ball.path_string(a.to));
    for v in ball.vertices() {
        if ball.is_internal(v) {
            let labels = ball
                .star(v)
                .into_iter()
                .map(|a| (arc_name(a), ball.label(a).expect("star arc")));
            check_star(&ball.path_string(v), labels, n, &mut out);
        } else if let Some(p) = ball.parent(v) {
            let a = BallArc::new(v, p);
            let l = ball.label(a).expect("parent arc");
            if l.index() >= n {
                out.push(Violation::LabelOutOfRange {
                    arc: arc_name(a),
                    label: l.0,
                });
            }
        }
        if let Some(p) = ball.parent(v) {
            let e = BallArc::new(p, v);
            let (fwd, bwd) = (ball.label(e).unwrap(), ball.label(e.bar()).unwrap());
            check_pair(|| arc_name(e), fwd, bwd, os, &mut out);
        }
    }
    ValidationReport { violations: out }
}

/// Legal: trivial tau and `l(e) = l(ē)` on every materialized edge.
pub fn first_illegal_edge(ball: &TreeBall) -> Option<BallArc> {
    ball.vertices().find_map(|v| {
        let p = ball.parent(v)?;
        let e = BallArc::new(p, v);
        (ball.label(e) != ball.label(e.bar())).then_some(e)
    })
}
