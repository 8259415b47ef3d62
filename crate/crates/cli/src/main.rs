use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use arborlat::fins::{build_fins, extend_to_fins, fin_rigidity_check, fins_correspondence_count};
use arborlat::formats::{parse_lg, parse_os, parse_pg, parse_tb, parse_td, write_lg, write_os, write_pg, write_tb};
use arborlat::labelled::{build_two_vertex_quotient, validate_ball, OrbitStructure, validate_graph, BallMap, TreeBall, ValidationReport, Vertex};
use arborlat::lattices::{
    build_x, build_xprime, canonical_f120, canonical_f240, find_color_conjugator, lambda_element, psi,
    theta_relabel,
};
use arborlat::obstruction::{factor_obstruction, fewerorbits_check, overlattice_desk_check};
use arborlat::universal::{
    enumerate_ball_stabilizer, extend, is_member, predicted_stabilizer_count, sigma_realized,
};
use arborlat::{Error, PermGroup, Permutation, Result};
use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "arborlat", version, about = "Labelled trees, universal groups and lattice obstructions")]
struct Cli {
    #[arg(long, global = true, env = "ARBORLAT_SEED", default_value_t = 0)]
    seed: u64,
    /// Vertex ceiling for materialized balls.
    #[arg(long, global = true, env = "ARBORLAT_CAP_VERTICES")]
    cap_vertices: Option<usize>,
    /// Order ceiling for group enumeration.
    #[arg(long, global = true, env = "ARBORLAT_CAP_GROUP")]
    cap_group: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct BallInput {
    /// A `.tb` ball dump.
    #[arg(long, conflicts_with = "graph")]
    ball: Option<PathBuf>,
    /// A `.lg` graph to lift instead of a dump.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Base vertex name for `--graph` (default: first vertex).
    #[arg(long)]
    base: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check that a graph or ball is τ-legal for an orbit structure.
    Validate {
        #[command(flatten)]
        input: BallInput,
        #[arg(long, default_value_t = 2)]
        radius: usize,
        #[arg(long)]
        orbits: PathBuf,
    },
    /// Lift a graph (or sample a random τ-legal labelling) to a ball dump.
    Lift {
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        base: Option<String>,
        /// With no `--graph`: sample a seeded random τ-legal ball.
        #[arg(long, conflicts_with = "graph")]
        orbits: Option<PathBuf>,
        #[arg(long)]
        radius: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extend a local permutation at the roots to a member of the universal group.
    Extend {
        #[arg(long)]
        dom: PathBuf,
        #[arg(long)]
        cod: PathBuf,
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        f0: String,
        #[arg(long)]
        radius: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that every element of F is realized as a local action at a vertex.
    SigmaCheck {
        #[command(flatten)]
        input: BallInput,
        #[arg(long, default_value = "/")]
        vertex: String,
        #[arg(long)]
        group: PathBuf,
    },
    /// Enumerate the stabilizer of a vertex on a ball.
    Stabilizer {
        #[command(flatten)]
        input: BallInput,
        #[arg(long, default_value = "/")]
        vertex: String,
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        radius: usize,
        #[arg(long, default_value_t = 100_000)]
        cap: usize,
    },
    /// Build the element acting by a fixed f at every vertex (legal labellings).
    Lambda {
        #[command(flatten)]
        input: BallInput,
        #[arg(long, default_value = "/")]
        vertex: String,
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        f: String,
        #[arg(long)]
        radius: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Common local action of a ball map (legal labellings).
    Psi {
        #[command(flatten)]
        input: BallInput,
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        group: PathBuf,
    },
    /// Relabel a legal cover along θ and find the conjugator.
    Relabel {
        #[arg(long)]
        theta: PathBuf,
        #[arg(long, default_value_t = 4)]
        radius: usize,
    },
    /// Composition factors of a group.
    Factors {
        #[arg(long)]
        group: PathBuf,
    },
    /// Compare composition factors of two local actions.
    Obstruction {
        #[arg(long)]
        f1: PathBuf,
        #[arg(long)]
        f2: PathBuf,
    },
    /// Finite desk check of the 240-label obstruction argument.
    ThmMain {
        #[arg(long, default_value_t = 2)]
        radius: usize,
        #[arg(long)]
        full_sweep: bool,
    },
    /// The 120-label example with two orbits of size 60.
    #[command(name = "example-120")]
    Example120,
    /// Build the tree with fins and dump it.
    FinsBuild {
        #[command(flatten)]
        input: BallInput,
        #[arg(long)]
        group: PathBuf,
        #[arg(long, default_value_t = 1)]
        radius: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extend a root permutation to the fins and check the gluing diagrams.
    FinsExtend {
        #[command(flatten)]
        input: BallInput,
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        f0: String,
        #[arg(long, default_value_t = 1)]
        radius: usize,
    },
    /// Check that fins at a vertex are determined by their attachment arcs.
    FinsRigidity {
        #[command(flatten)]
        input: BallInput,
        #[arg(long)]
        group: PathBuf,
        #[arg(long, default_value = "/")]
        vertex: String,
    },
    /// Count stabilizer members and the fin maps extending them.
    FinsCount {
        #[command(flatten)]
        input: BallInput,
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        radius: usize,
        #[arg(long, default_value_t = 100_000)]
        cap: usize,
    },
    /// Write the built-in graphs, groups and orbit structures.
    Fixtures {
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

const THETA_TD: &str = "graph theta.lg\ngroup s4.pg\nbase x1\ntree e1\nbasis e2\nbasis e3\nbasis e4\ntwist 5\n";

struct Ctx {
    seed: u64,
    cap_vertices: Option<usize>,
    cap_group: Option<usize>,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Error::InvalidArgument(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn perm(text: &str) -> Result<Permutation> {
    Permutation::parse(text)
}

impl Ctx {
    fn group(&self, path: &Path) -> Result<PermGroup> {
        let g = parse_pg(&read(path)?)?;
        Ok(match self.cap_group {
            Some(cap) => g.with_order_cap(cap),
            None => g,
        })
    }

    fn cap(&self, mut ball: TreeBall) -> TreeBall {
        if let Some(c) = self.cap_vertices {
            ball.set_ceiling(c);
        }
        ball
    }

    fn ball(&self, input: &BallInput, radius: usize) -> Result<TreeBall> {
        match (&input.ball, &input.graph) {
            (Some(p), _) => Ok(self.cap(parse_tb(&read(p)?)?)),
            (None, Some(p)) => {
                let g = parse_lg(&read(p)?)?;
                let base = match &input.base {
                    Some(name) => g
                        .vertex_by_name(name)
                        .ok_or_else(|| Error::InvalidArgument(format!("unknown vertex `{name}`")))?,
                    None => 0,
                };
                let mut ball = self.cap(TreeBall::lift_lazy(Arc::new(g), base)?);
                ball.ensure_radius(radius)?;
                Ok(ball)
            }
            (None, None) => Err(Error::InvalidArgument("one of --ball or --graph is required".into())),
        }
    }
}

fn vertex(ball: &TreeBall, path: &str) -> Result<Vertex> {
    ball.find_path_str(path)
        .ok_or_else(|| Error::InvalidArgument(format!("no vertex at `{path}`")))
}

fn report_validation(r: &ValidationReport) -> bool {
    println!("violations {}", r.violations.len());
    for v in &r.violations {
        println!("violation {v}");
    }
    println!("result {}", if r.is_clean() { "pass" } else { "fail" });
    r.is_clean()
}

fn verdict(ok: bool) -> bool {
    println!("result {}", if ok { "pass" } else { "fail" });
    ok
}

fn run(cli: Cli) -> Result<bool> {
    let ctx = Ctx {
        seed: cli.seed,
        cap_vertices: cli.cap_vertices,
        cap_group: cli.cap_group,
    };
    match cli.command {
        Command::Validate { input, radius, orbits } => {
            let os = parse_os(&read(&orbits)?)?;
            if input.ball.is_none() {
                if let Some(p) = &input.graph {
                    let g = parse_lg(&read(p)?)?;
                    println!("vertices {}", g.num_vertices());
                    println!("edges {}", g.num_arcs() / 2);
                    return Ok(report_validation(&validate_graph(&g, &os)));
                }
            }
            let ball = ctx.ball(&input, radius)?;
            println!("vertices {}", ball.len());
            Ok(report_validation(&validate_ball(&ball, &os)))
        }
        Command::Lift { graph, base, orbits, radius, out } => {
            let ball = match (graph, orbits) {
                (Some(g), _) => ctx.ball(&BallInput { ball: None, graph: Some(g), base }, radius)?,
                (None, Some(os)) => TreeBall::random_tau_legal(&parse_os(&read(&os)?)?, radius, ctx.seed)?,
                (None, None) => return Err(Error::InvalidArgument("one of --graph or --orbits is required".into())),
            };
            write_out(out.as_deref(), &write_tb(&ball))?;
            if out.is_some() {
                println!("vertices {}", ball.len());
            }
            Ok(true)
        }
        Command::Extend { dom, cod, group, f0, radius, out } => {
            let (dom, cod) = (parse_tb(&read(&dom)?)?, parse_tb(&read(&cod)?)?);
            let group = ctx.group(&group)?;
            let ext = extend(&dom, dom.root(), &cod, cod.root(), &perm(&f0)?, &group, radius)?;
            let ok = ext.verify(&dom, &cod).is_ok();
            let member = is_member(&ext.map, &group, &dom, &cod)?;
            if let Some(p) = &out {
                write_out(Some(p), &ext.map.to_bm(&dom, &cod))?;
            }
            println!("mapped-vertices {}", ext.map.domain_len());
            println!("family-size {}", ext.family.len());
            println!("root-action {}", ext.family.get(dom.root()).map(|f| f.to_string()).unwrap_or_default());
            println!("arcwise {}", if ok { "ok" } else { "violated" });
            println!("membership-checked {}", member.checked);
            Ok(verdict(ok && member.is_member()))
        }
        Command::SigmaCheck { input, vertex: v, group } => {
            let group = ctx.group(&group)?;
            let ball = ctx.ball(&input, 2)?;
            let x = vertex(&ball, &v)?;
            let realized = sigma_realized(&ball, x, &group)?;
            println!("group-order {}", group.order()?);
            println!("realized {realized}");
            Ok(verdict(realized == group.order()?))
        }
        Command::Stabilizer { input, vertex: v, group, radius, cap } => {
            let group = ctx.group(&group)?;
            let ball = ctx.ball(&input, radius + 1)?;
            let x = vertex(&ball, &v)?;
            let predicted = predicted_stabilizer_count(&ball, x, &group, radius)?;
            let found = enumerate_ball_stabilizer(&ball, x, &group, radius, cap)?;
            println!("predicted {predicted}");
            println!("enumerated {}", found.len());
            Ok(verdict(predicted == found.len().into()))
        }
        Command::Lambda { input, vertex: v, group, f, radius, out } => {
            let group = ctx.group(&group)?;
            let ball = ctx.ball(&input, radius + 1)?;
            let x = vertex(&ball, &v)?;
            let f = perm(&f)?;
            let map = lambda_element(&ball, x, &f, &group, radius)?;
            if let Some(p) = &out {
                write_out(Some(p), &map.to_bm(&ball, &ball))?;
            }
            let back = psi(&map, &ball, &group)?;
            println!("mapped-vertices {}", map.domain_len());
            println!("psi {back}");
            Ok(verdict(back == f))
        }
        Command::Psi { input, map, group } => {
            let group = ctx.group(&group)?;
            let ball = ctx.ball(&input, 2)?;
            let map = BallMap::from_bm(&read(&map)?, &ball, &ball)?;
            match psi(&map, &ball, &group) {
                Ok(f) => {
                    println!("psi {f}");
                    Ok(verdict(true))
                }
                Err(e @ (Error::NotUniform(_) | Error::NotInGroup(_))) => {
                    println!("failure {e}");
                    Ok(verdict(false))
                }
                Err(e) => Err(e),
            }
        }
        Command::Relabel { theta, radius } => {
            let spec = parse_td(&read(&theta)?)?;
            let dir = theta.parent().unwrap_or(Path::new("."));
            let graph = parse_lg(&read(&dir.join(&spec.graph))?)?;
            let group = ctx.group(&dir.join(&spec.group))?;
            let td = spec.resolve(graph, group.clone())?;
            let out = theta_relabel(&td, radius)?;
            for (i, t) in out.thetas.iter().enumerate() {
                println!("theta {} {t}", i + 1);
            }
            println!("equivariance-checks {}", out.equivariance_checks);
            let g = find_color_conjugator(&out.l, &out.l_prime)?;
            let conj_ok = out
                .l_prime
                .vertices()
                .flat_map(|v| out.l_prime.star(v))
                .all(|a| g.arc(a).and_then(|b| out.l.label(b)) == out.l_prime.label(a));
            let member = is_member(&g, &group, &out.l, &out.l)?;
            println!("conjugator-vertices {}", g.domain_len());
            println!("conjugator-arcwise {}", if conj_ok { "ok" } else { "violated" });
            println!("conjugator-member {}", member.is_member());
            Ok(verdict(conj_ok && member.is_member()))
        }
        Command::Factors { group } => {
            let group = ctx.group(&group)?;
            let factors = group.composition_factors()?;
            println!("order {}", group.order()?);
            println!("factors {factors}");
            println!("unidentified {}", factors.has_unidentified());
            Ok(true)
        }
        Command::Obstruction { f1, f2 } => {
            let v = factor_obstruction(&ctx.group(&f1)?, &ctx.group(&f2)?)?;
            println!("f1 {}", v.f1_factors);
            println!("f2 {}", v.f2_factors);
            println!("verdict {v}");
            Ok(true)
        }
        Command::ThmMain { radius, full_sweep } => {
            let t = overlattice_desk_check(radius, full_sweep)?;
            print!("{t}");
            Ok(t.accepted())
        }
        Command::Example120 => {
            let r = fewerorbits_check()?;
            print!("{r}");
            Ok(r.passed())
        }
        Command::FinsBuild { input, group, radius, out } => {
            let group = ctx.group(&group)?;
            let ball = ctx.ball(&input, radius)?;
            let fc = build_fins(&ball, &group, radius)?;
            write_out(out.as_deref(), &fc.to_fx()?)?;
            if out.is_some() {
                println!("fin-vertices {}", fc.internal().len());
                println!("fins-per-vertex {}", fc.fins_per_vertex());
                println!("unit-edges {}", fc.unit_edge_count());
            }
            Ok(true)
        }
        Command::FinsExtend { input, group, f0, radius } => {
            let group = ctx.group(&group)?;
            let ball = ctx.ball(&input, radius + 1)?;
            let fc = build_fins(&ball, &group, radius)?;
            let ext = extend(&ball, ball.root(), &ball, ball.root(), &perm(&f0)?, &group, radius)?;
            let fm = extend_to_fins(&fc, &fc, &ext.map, &ext.family)?;
            let elements = group.elements()?;
            let root = ball.root();
            let mut moved = 0;
            for k in 0..elements.len() {
                let (_, k2) = fm.fin_image(root, k).expect("root carries fins");
                moved += usize::from(k2 != k);
                println!("fin {} -> {}", elements[k], elements[k2]);
            }
            println!("assigned {}", fm.assignment.len());
            println!("moved-at-root {moved}");
            Ok(verdict(true))
        }
        Command::FinsRigidity { input, group, vertex: v } => {
            let group = ctx.group(&group)?;
            let probe = ctx.ball(&input, 1)?;
            let x = vertex(&probe, &v)?;
            let radius = probe.depth(x) + 1;
            let ball = ctx.ball(&input, radius)?;
            let fc = build_fins(&ball, &group, radius)?;
            let ok = fin_rigidity_check(&fc, x)?;
            println!("fins {}", fc.fins_per_vertex());
            Ok(verdict(ok))
        }
        Command::FinsCount { input, group, radius, cap } => {
            let group = ctx.group(&group)?;
            let ball = ctx.ball(&input, radius + 1)?;
            let c = fins_correspondence_count(&ball, &group, radius, cap)?;
            println!("base-members {}", c.base_members);
            println!("fin-maps {}", c.fin_maps);
            for (k, fixing, base) in &c.contraction {
                println!("contraction {k} {fixing} {base}");
            }
            Ok(verdict(c.base_members == c.fin_maps && c.contraction_holds()))
        }
        Command::Fixtures { out_dir } => {
            fs::create_dir_all(&out_dir).map_err(|e| Error::InvalidArgument(e.to_string()))?;
            let (f240, os240) = canonical_f240();
            let (f120, os120) = canonical_f120();
            let a5 = PermGroup::new(5, vec![perm("2 3 1 4 5")?, perm("2 3 4 5 1")?])?;
            let files = [
                ("x.lg", write_lg(&build_x())),
                ("xprime.lg", write_lg(&build_xprime())),
                ("f240.pg", write_pg(&f240)),
                ("f120.pg", write_pg(&f120)),
                ("os240.os", write_os(&os240)),
                ("os120.os", write_os(&os120)),
                ("a5.pg", write_pg(&a5)),
                ("c60.pg", write_pg(&PermGroup::cyclic(60))),
                ("toy3.lg", write_lg(&build_two_vertex_quotient(&OrbitStructure::singletons(3))?)),
                ("os3.os", write_os(&OrbitStructure::singletons(3))),
                ("s3.pg", write_pg(&PermGroup::symmetric(3))),
                ("theta.lg", write_lg(&build_two_vertex_quotient(&OrbitStructure::singletons(4))?)),
                ("s4.pg", write_pg(&PermGroup::symmetric(4))),
                ("theta.td", THETA_TD.to_string()),
            ];
            for (name, text) in files {
                write_out(Some(&out_dir.join(name)), &text)?;
                println!("wrote {name}");
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            println!("error {e}");
            eprintln!("arborlat: {e}");
            ExitCode::from(2)
        }
    }
}
