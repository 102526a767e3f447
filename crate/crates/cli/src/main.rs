mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use isostat::constructgen::{self, CapHeight, Face, Fig2Group, Platonic};
use isostat::laman::{self, Graph};
use isostat::maxwell;
use isostat::numrank::{self, DEFAULT_RANK_TOL};
use isostat::symdetect::{self, SymmetryError, DEFAULT_GEOM_TOL};
use isostat::{Dimension, Framework, FrameworkSymmetry};
use serde::Serialize;

use report::*;

const EXIT_FAIL: u8 = 1;
const EXIT_SCOPE: u8 = 2;
const EXIT_INPUT: u8 = 3;

#[derive(Parser)]
#[command(name = "isostat", version, about = "Symmetry-aware isostaticity analysis of bar-joint frameworks")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Global {
    /// Relative singular-value threshold for numerical rank.
    #[arg(long, global = true, default_value_t = DEFAULT_RANK_TOL)]
    tol_rank: f64,
    /// Symmetry matching tolerance, relative to the framework diameter.
    #[arg(long, global = true, default_value_t = DEFAULT_GEOM_TOL)]
    tol_geom: f64,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomised placements.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest subgraph examined by the 3D count scan.
    #[arg(long, global = true, default_value_t = 8)]
    max_subgraph: usize,
    /// Also write the framework graph in DOT format to this file.
    #[arg(long, global = true)]
    dump_dot: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Full report: symmetry, traces, conditions, rank, combinatorics.
    Analyze { path: PathBuf },
    /// Point group, classes and unshifted counts.
    Detect { path: PathBuf },
    /// Per-element necessary conditions.
    Check {
        path: PathBuf,
        /// Also run the symmetric Laman check (planar frameworks).
        #[arg(long)]
        sufficient: bool,
    },
    /// (2,3) pebble game; accepts framework files or graph-only files.
    Pebble { path: PathBuf },
    /// Write a generated framework.
    Generate(GenerateArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// platonic, cap_face, cap_all_faces_symmetric, twisted_cap_all_faces,
    /// hat_stack, fig2_examples, double_banana or rotor.
    recipe: String,
    /// Seed solid for platonic and the capping recipes.
    #[arg(long, default_value = "icosahedron")]
    solid: Platonic,
    /// Start from this framework instead of a platonic solid.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Face as three joint ids, e.g. 0,1,2 (default: first hull face).
    #[arg(long, value_delimiter = ',', num_args = 3)]
    face: Option<Vec<usize>>,
    /// Cap height: a number, or "stellation".
    #[arg(long)]
    height: Option<String>,
    /// Twist of twisted caps, in degrees.
    #[arg(long, default_value_t = 20.0)]
    twist: f64,
    /// Number of hats.
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Spacing of hats.
    #[arg(long)]
    step: Option<f64>,
    /// Group of the planar example (C1, C2, C3, Cs_perp, Cs_in, C2v, C3v_perp, C3v_in).
    #[arg(long, default_value = "C1")]
    group: Fig2Group,
    /// Spokes of a rotor.
    #[arg(long, default_value_t = 4)]
    n: usize,
    /// Rotor with mirror symmetry.
    #[arg(long)]
    mirrored: bool,
    /// Rotor with the long diagonals of its inner ring.
    #[arg(long)]
    diagonals: bool,
    /// Output file (default: standard output).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl ToString) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.to_string(),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Analyze { path } => analyze(&cli.global, path),
        Command::Detect { path } => detect(&cli.global, path),
        Command::Check { path, sufficient } => check(&cli.global, path, *sufficient),
        Command::Pebble { path } => pebble(&cli.global, path),
        Command::Generate(args) => generate(&cli.global, args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("isostat: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn tolerances(g: &Global) -> Tolerances {
    Tolerances {
        rank: g.tol_rank,
        geom: g.tol_geom,
    }
}

fn load(g: &Global, path: &Path) -> Result<Framework, Failure> {
    let f = Framework::load(path).map_err(Failure::input)?;
    if let Some(dot) = &g.dump_dot {
        std::fs::write(dot, f.to_dot()).map_err(|e| Failure::input(format!("{}: {e}", dot.display())))?;
    }
    Ok(f)
}

fn symmetry(g: &Global, f: &Framework) -> Result<FrameworkSymmetry, Failure> {
    symdetect::analyze_symmetry(f, g.tol_geom).map_err(|e| Failure {
        code: if e == SymmetryError::InfiniteGroup {
            EXIT_SCOPE
        } else {
            EXIT_INPUT
        },
        message: e.to_string(),
    })
}

fn emit<T: Serialize>(g: &Global, value: &T, text: impl FnOnce() -> String) {
    if g.json {
        println!("{}", serde_json::to_string_pretty(value).expect("reports serialise"));
    } else {
        print!("{}", text());
    }
}

fn analyze(g: &Global, path: &Path) -> Outcome {
    let f = load(g, path)?;
    let sym = symmetry(g, &f)?;
    let kin = numrank::mobility(&f, g.tol_rank).map_err(Failure::input)?;
    let gamma_j = maxwell::gamma_joint(&sym);
    let gamma_b = maxwell::gamma_bar(&sym);
    let internal = |e: maxwell::MaxwellError| Failure::input(format!("internal inconsistency: {e}"));
    let trace = maxwell::maxwell_trace(&f, &sym).map_err(internal)?;
    let table = maxwell::character_table(&sym.group).map_err(internal)?;
    let decomposition = maxwell::decompose_irreps(&trace, &table).map_err(internal)?;
    let conditions = maxwell::isostatic_necessary(&f, &sym);

    let (sparsity, symmetric_laman, subgraph_violations) = match f.dimension() {
        Dimension::Two => {
            let sp = (f.joint_count() >= 2)
                .then(|| laman::pebble_game_2_3(&Graph::from_framework(&f)).ok())
                .flatten();
            (sp, laman::symmetric_laman(&f, &sym).ok(), None)
        }
        Dimension::Three => {
            let cap = g.max_subgraph.min(f.joint_count());
            (None, None, laman::subgraph_maxwell_scan_3d(&f, cap).ok())
        }
    };

    let outside_scope = conditions.outside_scope.clone();
    if outside_scope.is_none() && kin.isostatic && !conditions.pass {
        return Err(Failure::input(
            "internal inconsistency: numerically isostatic but a necessary condition fails",
        ));
    }
    let verdict = Verdict {
        necessary_conditions: conditions.pass,
        numerically_isostatic: kin.isostatic,
        sufficiency: symmetric_laman.as_ref().map(|r| Sufficiency {
            pass: r.pass,
            basis: r.basis,
        }),
        outside_scope: outside_scope.clone(),
    };
    let bundle = AnalysisBundle {
        report_version: REPORT_VERSION,
        tolerances: tolerances(g),
        framework: FrameworkDigest::new(&f),
        group: GroupDigest::new(&f, &sym),
        kinematics: KinematicDigest::new(&kin),
        traces: TraceDigest {
            gamma_j,
            gamma_b,
            gamma_m_minus_s: trace,
            decomposition_text: maxwell::format_decomposition(&decomposition),
            decomposition,
        },
        conditions,
        sparsity,
        symmetric_laman,
        subgraph_violations,
        verdict,
    };
    emit(g, &bundle, || render_analysis(&bundle));
    Ok(if outside_scope.is_some() {
        EXIT_SCOPE
    } else if kin.isostatic {
        0
    } else {
        EXIT_FAIL
    })
}

fn detect(g: &Global, path: &Path) -> Outcome {
    let f = load(g, path)?;
    let sym = symmetry(g, &f)?;
    let r = DetectReport {
        report_version: REPORT_VERSION,
        tolerances: tolerances(g),
        framework: FrameworkDigest::new(&f),
        group: GroupDigest::new(&f, &sym),
    };
    emit(g, &r, || {
        let mut out = String::new();
        render_group(&mut out, &r.group);
        out
    });
    Ok(0)
}

fn check(g: &Global, path: &Path, sufficient: bool) -> Outcome {
    let f = load(g, path)?;
    let sym = symmetry(g, &f)?;
    let conditions = maxwell::isostatic_necessary(&f, &sym);
    let (symmetric_laman, sufficiency_error) = if sufficient {
        match laman::symmetric_laman(&f, &sym) {
            Ok(r) => (Some(r), None),
            Err(e) => (None, Some(e.to_string())),
        }
    } else {
        (None, None)
    };
    let pass = conditions.pass
        && (!sufficient || symmetric_laman.as_ref().is_some_and(|r| r.pass));
    let scope = conditions.outside_scope.is_some();
    let r = CheckReport {
        report_version: REPORT_VERSION,
        tolerances: tolerances(g),
        conditions,
        symmetric_laman,
        sufficiency_error,
    };
    emit(g, &r, || {
        let mut out = String::new();
        render_conditions(&mut out, &r.conditions);
        if let Some(s) = &r.symmetric_laman {
            render_symmetric_laman(&mut out, s);
        }
        if let Some(e) = &r.sufficiency_error {
            out.push_str(&format!("sufficiency   fail: {e}\n"));
        }
        out
    });
    Ok(if scope {
        EXIT_SCOPE
    } else if pass {
        0
    } else {
        EXIT_FAIL
    })
}

fn pebble(g: &Global, path: &Path) -> Outcome {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let graph = match Framework::from_json(&text) {
        Ok(f) => {
            if let Some(dot) = &g.dump_dot {
                std::fs::write(dot, f.to_dot()).map_err(Failure::input)?;
            }
            Graph::from_framework(&f)
        }
        Err(_) => Graph::from_json(&text).map_err(Failure::input)?,
    };
    let sparsity = laman::pebble_game_2_3(&graph).map_err(Failure::input)?;
    let trials = 3;
    let rank = laman::generic_rank_2d(&graph, trials, g.seed, g.tol_rank);
    let generic = laman::generically_isostatic_2d(&graph, trials, g.seed, g.tol_rank);
    let tight = sparsity.verdict == laman::SparsityVerdict::Tight;
    let r = PebbleReport {
        report_version: REPORT_VERSION,
        tolerances: tolerances(g),
        generic_check: GenericCheck {
            seed: g.seed,
            trials,
            generic_rank: rank,
            generically_isostatic: generic,
            agrees: generic == tight,
        },
        sparsity,
    };
    emit(g, &r, || {
        let mut out = String::new();
        render_sparsity(&mut out, &r.sparsity);
        out.push_str(&format!(
            "random rank   {} over {} placements (seed {}): {}\n",
            r.generic_check.generic_rank,
            trials,
            g.seed,
            if r.generic_check.agrees { "agrees" } else { "DISAGREES" }
        ));
        out
    });
    Ok(if tight { 0 } else { EXIT_FAIL })
}

fn face_arg(f: &Framework, face: &Option<Vec<usize>>) -> Result<Face, Failure> {
    match face {
        Some(v) => Face::new(f, [v[0], v[1], v[2]]).map_err(Failure::input),
        None => constructgen::hull_faces(f)
            .into_iter()
            .next()
            .ok_or_else(|| Failure::input("framework has no triangular hull face")),
    }
}

fn generate(g: &Global, a: &GenerateArgs) -> Outcome {
    let seed = || -> Result<Framework, Failure> {
        match &a.input {
            Some(p) => Framework::load(p).map_err(Failure::input),
            None => Ok(constructgen::platonic(a.solid)),
        }
    };
    let number = |s: &str| s.parse::<f64>().map_err(|_| Failure::input(format!("bad height {s:?}")));
    let built = match a.recipe.as_str() {
        "platonic" => Ok(constructgen::platonic(a.solid)),
        "cap_face" => {
            let f = seed()?;
            let face = face_arg(&f, &a.face)?;
            let h = match &a.height {
                Some(s) => number(s)?,
                None => 0.5 * face.circumradius(&f),
            };
            constructgen::cap_face(&f, &face, h)
        }
        "cap_all_faces_symmetric" => {
            let f = seed()?;
            let h = match a.height.as_deref() {
                None | Some("stellation") => CapHeight::Stellation,
                Some(s) => CapHeight::Absolute(number(s)?),
            };
            constructgen::cap_all_faces_symmetric(&f, h)
        }
        "twisted_cap_all_faces" => {
            let f = seed()?;
            let h = a.height.as_deref().map(number).transpose()?;
            constructgen::twisted_cap_all_faces(&f, a.twist.to_radians(), h)
        }
        "hat_stack" => {
            let f = seed()?;
            let face = face_arg(&f, &a.face)?;
            constructgen::hat_stack(&f, &face, a.k, a.step)
        }
        "fig2_examples" => Ok(constructgen::fig2_examples(a.group)),
        "double_banana" => Ok(constructgen::double_banana()),
        "rotor" => {
            if a.n < 3 {
                return Err(Failure::input("a rotor needs n >= 3"));
            }
            Ok(constructgen::rotor(a.n, a.mirrored, a.diagonals))
        }
        other => return Err(Failure::input(format!("unknown recipe {other:?}"))),
    }
    .map_err(Failure::input)?;
    let json = built.to_json();
    match &a.output {
        Some(p) => std::fs::write(p, json + "\n").map_err(|e| Failure::input(format!("{}: {e}", p.display())))?,
        None => println!("{json}"),
    }
    if let Some(dot) = &g.dump_dot {
        std::fs::write(dot, built.to_dot()).map_err(Failure::input)?;
    }
    Ok(0)
}
