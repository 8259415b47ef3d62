//! The composition-factor obstruction and a step-by-step check of the
//! finite ingredients of the no-common-overlattice argument for the
//! 240-label fixtures.

use std::fmt;

use crate::error::{Error, Result};
use crate::factors::FactorMultiset;
use crate::group::PermGroup;
use crate::labelled::{build_two_vertex_quotient, validate_ball, validate_graph, BallArc, BallMap, TreeBall};
use crate::lattices::{align, build_x, build_xprime, canonical_f120, canonical_f240, deck_move_arc, shift_is_equivariant};
use crate::perm::{Label, Permutation};
use crate::universal::{is_member, local_action};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Conclusion {
    NoObstruction,
    NoCommonOverlattice(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionVerdict {
    pub f1_factors: FactorMultiset,
    pub f2_factors: FactorMultiset,
    pub equal: bool,
    pub conclusion: Conclusion,
}

impl fmt::Display for ObstructionVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.conclusion {
            Conclusion::NoObstruction => write!(
                f,
                "NoObstruction factors agree: {} vs {}",
                self.f1_factors, self.f2_factors
            ),
            Conclusion::NoCommonOverlattice(why) => write!(f, "NoCommonOverlattice {why}"),
        }
    }
}

/// Compares composition factors. Different multisets rule out a uniform
/// lattice acting transitively on both parts.
pub fn factor_obstruction(f1: &PermGroup, f2: &PermGroup) -> Result<ObstructionVerdict> {
    let a = f1.composition_factors()?;
    let b = f2.composition_factors()?;
    let equal = a == b;
    let conclusion = if equal {
        Conclusion::NoObstruction
    } else {
        Conclusion::NoCommonOverlattice(format!("factors differ: {a} vs {b}"))
    };
    Ok(ObstructionVerdict {
        f1_factors: a,
        f2_factors: b,
        equal,
        conclusion,
    })
}

/// `c(G) = c(K) ⊎ c(G/K)` and `c(G/K) = c(Q)`.
pub fn chain_identity_check(g: &PermGroup, k: &PermGroup, q_expected: &PermGroup) -> Result<bool> {
    let quotient = g.quotient(k)?;
    let cq = quotient.composition_factors()?;
    let lhs = g.composition_factors()?;
    let rhs = k.composition_factors()?.union(&cq);
    Ok(lhs == rhs && cq == q_expected.composition_factors()?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub id: String,
    pub passed: bool,
    pub statement: String,
    pub values: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProofTranscript {
    pub steps: Vec<Step>,
    pub verdict: Option<ObstructionVerdict>,
}

impl ProofTranscript {
    pub fn accepted(&self) -> bool {
        !self.steps.is_empty() && self.steps.iter().all(|s| s.passed)
    }

    pub fn failed_step(&self) -> Option<&Step> {
        self.steps.iter().find(|s| !s.passed)
    }

    fn record(&mut self, id: impl Into<String>, passed: bool, statement: &str, values: String) -> bool {
        self.steps.push(Step {
            id: id.into(),
            passed,
            statement: statement.into(),
            values,
        });
        passed
    }
}

impl fmt::Display for ProofTranscript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "scope finite-steps-and-factor-obstruction-only")?;
        for s in &self.steps {
            writeln!(
                f,
                "step {} {} {} {}",
                s.id,
                if s.passed { "PASS" } else { "FAIL" },
                s.statement,
                s.values
            )?;
        }
        if let Some(v) = &self.verdict {
            writeln!(f, "verdict {v}")?;
        }
        Ok(())
    }
}

/// Default sample of `i` for the `e_i → e_{i+1}` movers.
pub const DEFAULT_SWEEP: [usize; 3] = [181, 200, 239];

struct Setup {
    l: TreeBall,
    l2: TreeBall,
    raw: TreeBall,
    g: BallMap,
    g_inv: BallMap,
    f_prime: Permutation,
    group: PermGroup,
}

impl Setup {
    fn arc(&self, ball: &TreeBall, label: usize) -> BallArc {
        ball.arc_by_label(ball.root(), Label::new(label)).expect("root is internal")
    }

    /// The deck transformation of the aligned X′ cover sending `a` to `b`,
    /// as a map of the X-lift arena.
    fn deck2(&self, a: BallArc, b: BallArc) -> Result<BallMap> {
        let ga = self.g.arc(a).ok_or_else(|| Error::NotMaterialized("alignment".into()))?;
        let gb = self.g.arc(b).ok_or_else(|| Error::NotMaterialized("alignment".into()))?;
        let d = deck_move_arc(&self.raw, ga, gb)?;
        let m = d.ballmap(&self.raw)?;
        Ok(self.g_inv.after(&m.after(&self.g)))
    }

    fn deck1_inverse(&self, a: BallArc, b: BallArc) -> Result<(BallMap, BallMap)> {
        let graph = self.l.graph().expect("lift").clone();
        let d = deck_move_arc(&self.l, a, b)?;
        Ok((d.ballmap(&self.l)?, d.inverse(&graph).ballmap(&self.l)?))
    }
}

fn lbl(ball: &TreeBall, a: BallArc) -> usize {
    ball.label(a).map(|l| l.value()).unwrap_or(0)
}

/// Re-enacts the finite steps of the argument at the given radius. Steps
/// run in order and the first failure ends the transcript.
pub fn overlattice_desk_check(radius: usize, full_sweep: bool) -> Result<ProofTranscript> {
    if radius < 2 {
        return Err(Error::InvalidArgument("radius must be at least 2".into()));
    }
    let mut t = ProofTranscript::default();

    // 1: fixtures
    let (group, os) = canonical_f240();
    let (x, xp) = (build_x(), build_xprime());
    let (rx, rxp) = (validate_graph(&x, &os), validate_graph(&xp, &os));
    let order = group.order()?;
    if !t.record(
        "1",
        rx.is_clean() && rxp.is_clean() && order == 3600,
        "fixtures-tau-legal",
        format!(
            "violations(X)={} violations(X')={} |F|={order}",
            rx.violations.len(),
            rxp.violations.len()
        ),
    ) {
        return Ok(t);
    }

    // 2: lifts at a common basepoint, alignment
    let l = TreeBall::lift(std::sync::Arc::new(x), 0, radius)?;
    let raw = TreeBall::lift(std::sync::Arc::new(xp), 0, radius)?;
    let (vl, vr) = (validate_ball(&l, &os), validate_ball(&raw, &os));
    if !t.record(
        "2a",
        vl.is_clean() && vr.is_clean(),
        "lifts-tau-legal",
        format!("vertices={} violations={}+{}", l.len(), vl.violations.len(), vr.violations.len()),
    ) {
        return Ok(t);
    }
    let (l2, ext) = align(&l, &raw, &group, radius - 1)?;
    let family_in_f = ext.family.lies_in(&group)?;
    let mut related = true;
    for (v, f) in ext.family.iter() {
        related &= l.star_transition(&l2, v)? == *f;
    }
    if !t.record(
        "2b",
        family_in_f && related,
        "alignment-l''=(f_x)l",
        format!("family-size={} in-F={family_in_f} arcwise={related}", ext.family.len()),
    ) {
        return Ok(t);
    }
    let f_root = ext.family.get(l.root()).expect("root carries a value").clone();
    let g_inv = ext.map.inverse(raw.len())?;
    let s = Setup {
        f_prime: f_root.inverse(),
        g: ext.map,
        g_inv,
        l,
        l2,
        raw,
        group,
    };
    let root = s.l.root();

    // 3: labels at the basepoint
    let (e121, e181, e182) = (s.arc(&s.l2, 121), s.arc(&s.l2, 181), s.arc(&s.l2, 182));
    let back = lbl(&s.l2, e121.bar());
    if !t.record("3", back == 182, "l''(~e121)=182", format!("got={back}")) {
        return Ok(t);
    }

    // 4: γ'' in the aligned X' cover
    let gamma2 = s.deck2(e121.bar(), e182)?;
    let ok = gamma2.arc(e121.bar()) == Some(e182);
    if !t.record("4", ok, "gamma''(~e121)=e182", format!("found={ok}")) {
        return Ok(t);
    }

    // 5: three label equalities
    let fp = &s.f_prime;
    let l_back = lbl(&s.l, e121.bar());
    let f121 = fp.apply(Label::new(121)).value();
    let f181 = fp.apply(Label::new(181)).value();
    if !t.record(
        "5a",
        l_back == f121 + 60,
        "l(~e121)=f'_x(121)+60",
        format!("l(~e121)={l_back} f'_x(121)={f121}"),
    ) {
        return Ok(t);
    }
    let equivariant = shift_is_equivariant(&s.group, os.block(2), 60);
    if !t.record(
        "5b",
        equivariant && f121 + 60 == f181,
        "f'_x(121)+60=f'_x(181)",
        format!("shift-equivariant={equivariant} f'_x(121)+60={} f'_x(181)={f181}", f121 + 60),
    ) {
        return Ok(t);
    }
    let l181 = lbl(&s.l, e181);
    if !t.record("5c", f181 == l181, "f'_x(181)=l(e181)", format!("f'_x(181)={f181} l(e181)={l181}")) {
        return Ok(t);
    }

    // 6: γ in the X cover
    let (gamma, gamma_inv) = s.deck1_inverse(e121.bar(), e181)?;
    let ok = gamma.arc(e121.bar()) == Some(e181);
    if !t.record("6", ok, "gamma(~e121)=e181", format!("found={ok}")) {
        return Ok(t);
    }

    // 7: λ = γ''∘γ^{-1}
    let lambda = gamma2.after(&gamma_inv).connected_part(&s.l, root);
    let fixes = lambda.get(root) == Some(root);
    let moves = lambda.arc(e181) == Some(e182);
    if !t.record(
        "7a",
        fixes && moves,
        "lambda(x)=x,lambda(e181)=e182",
        format!("fixes-x={fixes} moves={moves}"),
    ) {
        return Ok(t);
    }
    let m = is_member(&lambda, &s.group, &s.l, &s.l)?;
    if !t.record(
        "7b",
        m.is_member() && m.checked > 0,
        "lambda-member-of-U(l)(F)",
        format!("internal-vertices-checked={}", m.checked),
    ) {
        return Ok(t);
    }

    // 8: movers e_i → e_{i+1}
    let sweep: Vec<usize> = if full_sweep {
        (181..=239).collect()
    } else {
        DEFAULT_SWEEP.to_vec()
    };
    for i in sweep {
        let (ei, ej) = (s.arc(&s.l2, i), s.arc(&s.l2, i + 1));
        let a = s
            .l2
            .star(root)
            .into_iter()
            .find(|&a| lbl(&s.l2, a.bar()) == i + 1)
            .expect("l'' is a bijection at the root");
        let c = lbl(&s.l2, a);
        let (la, fc, fi, li) = (
            lbl(&s.l, a.bar()),
            fp.apply(Label::new(c)).value(),
            fp.apply(Label::new(c + 60)).value(),
            lbl(&s.l, ei),
        );
        let chain = la == fc + 60 && fc + 60 == fi && fi == li;
        let g2 = s.deck2(a.bar(), ej)?;
        let (_, g1_inv) = s.deck1_inverse(a.bar(), ei)?;
        let lam = g2.after(&g1_inv).connected_part(&s.l, root);
        let moved = lam.get(root) == Some(root) && lam.arc(ei) == Some(ej);
        let action = local_action(&lam, root, &s.l2, &s.l2)?;
        let acts = action.apply(Label::new(i)).value() == i + 1;
        if !t.record(
            format!("8.{i}"),
            chain && moved && acts,
            &format!("mover-e{i}->e{}", i + 1),
            format!("via=~e{c} label-chain={chain} fixes-and-moves={moved} local-action={acts}"),
        ) {
            return Ok(t);
        }
    }

    // 9: the factor obstruction on the Ω_1 and Ω_2 parts
    let part = |b: usize| -> Vec<usize> { os.block(b).iter().map(|l| l.index()).collect() };
    let f1 = s.group.action_on(&part(0))?;
    let f2 = s.group.action_on(&part(1))?;
    let verdict = factor_obstruction(&f1, &f2)?;
    let ok = matches!(verdict.conclusion, Conclusion::NoCommonOverlattice(_));
    t.record(
        "9",
        ok,
        "factor-obstruction",
        format!("c(F1)={} c(F2)={}", verdict.f1_factors, verdict.f2_factors),
    );
    t.verdict = Some(verdict);
    Ok(t)
}

#[derive(Clone, Debug)]
pub struct FewerOrbitsReport {
    pub block_sizes: (usize, usize),
    pub quotient_violations: usize,
    pub verdict: ObstructionVerdict,
}

impl FewerOrbitsReport {
    pub fn passed(&self) -> bool {
        self.block_sizes == (60, 60)
            && self.quotient_violations == 0
            && matches!(self.verdict.conclusion, Conclusion::NoCommonOverlattice(_))
    }
}

impl fmt::Display for FewerOrbitsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "block-sizes {} {}", self.block_sizes.0, self.block_sizes.1)?;
        writeln!(f, "two-vertex-quotient-violations {}", self.quotient_violations)?;
        writeln!(f, "verdict {}", self.verdict)
    }
}

/// The 120-label example: equal block sizes give a two-vertex quotient,
/// while the factor mismatch rules out lattices surjecting onto F locally.
pub fn fewerorbits_check() -> Result<FewerOrbitsReport> {
    let (group, os) = canonical_f120();
    let sizes = (os.block(0).len(), os.block(1).len());
    let q = build_two_vertex_quotient(&os)?;
    let violations = validate_graph(&q, &os).violations.len();
    let part = |b: usize| -> Vec<usize> { os.block(b).iter().map(|l: &Label| l.index()).collect() };
    let verdict = factor_obstruction(&group.action_on(&part(0))?, &group.action_on(&part(1))?)?;
    Ok(FewerOrbitsReport {
        block_sizes: sizes,
        quotient_violations: violations,
        verdict,
    })
}
