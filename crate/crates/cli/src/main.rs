//! `hsr`: kinematics queries, workspace export, stiffness map queries,
//! decoupled shape/stiffness solving, perturbation-test replay and the
//! grip study.
//!
//! Exit codes: 0 success, 2 input or domain error, 3 infeasible stiffness,
//! 4 I/O error.

mod svg;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hsr_core::estimation::io::{load_force_trace, load_tracker};
use hsr_core::gripper::{sweep_grip_study, write_study_csv, StudyRow, DEFAULT_OBJECT_SIZE};
use hsr_core::kinematics::write_workspace_csv;
use hsr_core::maps::Dataset;
use hsr_core::{
    arc_from_joints, estimate_stiffness, peak_failure_force, pose_at, pressures_for_shape_and_stiffness,
    sample_workspace, shape_for_pressures, stiffness_at, stiffness_range_increase, ArcParams, Error, GraspObject,
    GridLabel, HsrConfig, JointState, ObjectShape, PerturbationRecord,
};

#[derive(Parser)]
#[command(name = "hsr", version, about = "Hybrid soft robot kinematics, stiffness maps and grasp study")]
struct Cli {
    /// TOML configuration file (geometry, actuator and gripper constants).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory holding the table CSVs; defaults to the bundled copies.
    #[arg(long, global = true, env = "HSR_DATA_DIR")]
    data_dir: Option<PathBuf>,
    /// Where SVG plots (and CSVs without an explicit --out) are written.
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Svg,
    Both,
}

impl Format {
    fn csv(self) -> bool {
        self != Format::Svg
    }

    fn svg(self) -> bool {
        self != Format::Csv
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GridArg {
    With,
    Without,
}

impl From<GridArg> for GridLabel {
    fn from(g: GridArg) -> Self {
        match g {
            GridArg::With => GridLabel::WithBackbone,
            GridArg::Without => GridLabel::WithoutBackbone,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Pose of the backbone frame at arc fraction xi.
    Fk {
        #[arg(long, allow_negative_numbers = true)]
        phi: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        theta: f64,
        #[arg(long, default_value_t = 1.0)]
        xi: f64,
    },
    /// Arc parameters from the three actuator length changes (m).
    Ik {
        #[arg(allow_negative_numbers = true)]
        l1: f64,
        #[arg(allow_negative_numbers = true)]
        l2: f64,
        #[arg(allow_negative_numbers = true)]
        l3: f64,
    },
    /// Tip positions over a (phi, theta) grid.
    Workspace {
        #[arg(long, default_value_t = 19)]
        n_phi: usize,
        #[arg(long, default_value_t = 36)]
        n_theta: usize,
        /// CSV path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pressures (bar) holding bend phi at stiffness k.
    Solve {
        #[arg(long)]
        phi: f64,
        #[arg(long)]
        k: f64,
    },
    /// Bend angle reached at a pressure pair (bar).
    Shape {
        #[arg(long)]
        p1: f64,
        #[arg(long)]
        p2: f64,
    },
    /// Interpolated stiffness of a pressure pair (bar).
    Stiffness {
        #[arg(long, value_enum, default_value_t = GridArg::With)]
        grid: GridArg,
        #[arg(long)]
        p1: f64,
        #[arg(long)]
        p2: f64,
    },
    /// Stiffness increase over the natural stiffness, in percent.
    Range {
        #[arg(long, value_enum)]
        grid: Option<GridArg>,
    },
    /// Stiffness from a baseline and a perturbed tracker recording.
    Estimate {
        #[arg(long)]
        baseline: PathBuf,
        #[arg(long)]
        perturbed: PathBuf,
        /// Applied torque step in Nm.
        #[arg(long, allow_negative_numbers = true)]
        delta_torque: f64,
    },
    /// Failure force of a load-cell trace after moving-average filtering.
    Peak {
        trace: PathBuf,
        #[arg(long, default_value_t = 50)]
        window: usize,
    },
    /// Failure force over every tabulated shape and stiffness operating point.
    GripStudy {
        /// Comma-separated subset of ball, pyramid, box.
        #[arg(long, value_delimiter = ',', default_values_t = vec!["ball".to_string(), "pyramid".to_string(), "box".to_string()])]
        objects: Vec<String>,
        /// Friction coefficient; overrides the configuration file.
        #[arg(long)]
        mu: Option<f64>,
        /// CSV path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Core(Error),
    Input(String),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Core(Error::InfeasibleStiffness { .. }) => 3,
            Failure::Core(e) if e.is_io() => 4,
            Failure::Io(_) => 4,
            _ => 2,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Core(e) => e.to_string(),
            Failure::Input(m) => m.clone(),
            Failure::Io(e) => e.to_string(),
        }
    }
}

type CliResult = Result<(), Failure>;

struct Ctx {
    config: HsrConfig,
    data_dir: Option<PathBuf>,
    out_dir: PathBuf,
    format: Format,
}

impl Ctx {
    fn dataset(&self) -> Result<Dataset, Failure> {
        match &self.data_dir {
            Some(dir) => Ok(Dataset::load_dir(dir)?),
            None => Ok(Dataset::bundled()),
        }
    }

    fn write_svg(&self, name: &str, body: &str) -> CliResult {
        fs::create_dir_all(&self.out_dir)?;
        let path = self.out_dir.join(name);
        fs::write(&path, body).map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", path.display())))?;
        eprintln!("wrote {}", path.display());
        Ok(())
    }
}

fn write_csv(out: Option<&Path>, emit: impl FnOnce(&mut dyn Write) -> hsr_core::Result<()>) -> CliResult {
    match out {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent)?;
            }
            let mut file = io::BufWriter::new(fs::File::create(path)?);
            emit(&mut file)?;
            file.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            emit(&mut lock)?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult {
    let config = match &cli.config {
        Some(path) => HsrConfig::load(path)?,
        None => HsrConfig::default(),
    };
    let ctx = Ctx {
        config,
        data_dir: cli.data_dir,
        out_dir: cli.out_dir,
        format: cli.format,
    };
    let geom = ctx.config.geometry;
    match cli.command {
        Command::Fk { phi, theta, xi } => {
            let pose = pose_at(&ArcParams::new(phi, theta)?, xi, &geom)?;
            let p = pose.position;
            println!("position: {:.9} {:.9} {:.9}", p.x, p.y, p.z);
            println!("rotation:");
            for r in 0..3 {
                let row = pose.rotation.row(r);
                println!("  {:.9} {:.9} {:.9}", row[0], row[1], row[2]);
            }
        }
        Command::Ik { l1, l2, l3 } => {
            let joints = JointState::new(l1, l2, l3);
            let arc = arc_from_joints(&joints, &geom)?;
            println!("phi: {:.9}", arc.phi());
            println!("theta: {:.9}", arc.theta());
            println!("residual: {:e}", joints.residual());
        }
        Command::Workspace { n_phi, n_theta, out } => {
            if n_phi == 0 || n_theta == 0 {
                return Err(Failure::Input("--n-phi and --n-theta must be at least 1".into()));
            }
            let samples = sample_workspace(&geom, n_phi, n_theta);
            if ctx.format.csv() {
                write_csv(out.as_deref(), |w| write_workspace_csv(&samples, w))?;
            }
            if ctx.format.svg() {
                let series = svg::Series {
                    name: "tip".into(),
                    points: samples.iter().map(|s| (s.position.x, s.position.z)).collect(),
                    line: false,
                };
                let body = svg::plot("Workspace, XZ projection", "x [m]", "z [m]", &[series], true);
                ctx.write_svg("workspace.svg", &body)?;
            }
        }
        Command::Solve { phi, k } => {
            let data = ctx.dataset()?;
            let (p1, p2) = pressures_for_shape_and_stiffness(&data.shape, phi, k)?;
            println!("p1_bar: {p1}");
            println!("p2_bar: {p2}");
        }
        Command::Shape { p1, p2 } => {
            let data = ctx.dataset()?;
            println!("phi_rad: {}", shape_for_pressures(&data.shape, p1, p2)?);
        }
        Command::Stiffness { grid, p1, p2 } => {
            let data = ctx.dataset()?;
            println!("k_nm_per_rad: {}", stiffness_at(data.grid(grid.into()), p1, p2)?);
        }
        Command::Range { grid } => {
            let data = ctx.dataset()?;
            let labels = match grid {
                Some(g) => vec![GridLabel::from(g)],
                None => vec![GridLabel::WithoutBackbone, GridLabel::WithBackbone],
            };
            for label in labels {
                println!("{label}: {:.2}%", stiffness_range_increase(data.grid(label))?);
            }
        }
        Command::Estimate {
            baseline,
            perturbed,
            delta_torque,
        } => {
            let record = PerturbationRecord::new(load_tracker(&baseline)?, load_tracker(&perturbed)?, delta_torque)?;
            println!("k_nm_per_rad: {:.9}", estimate_stiffness(&record, &geom)?);
        }
        Command::Peak { trace, window } => {
            let trace = load_force_trace(&trace)?;
            println!("failure_force_n: {:.6}", peak_failure_force(&trace, window)?);
        }
        Command::GripStudy { objects, mu, out } => {
            let shapes = objects
                .iter()
                .map(|s| s.parse::<ObjectShape>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(Failure::Input)?;
            let objects: Vec<GraspObject> = shapes.iter().map(|&s| GraspObject::new(s, DEFAULT_OBJECT_SIZE)).collect();
            let mu = mu.unwrap_or(ctx.config.friction_coefficient);
            let data = ctx.dataset()?;
            let rows = sweep_grip_study(&ctx.config.gripper, &objects, &data.shape, mu)?;
            if ctx.format.csv() {
                write_csv(out.as_deref(), |w| write_study_csv(&rows, w))?;
            }
            if ctx.format.svg() {
                ctx.write_svg("grip_study.svg", &grip_plot(&rows, &shapes))?;
            }
        }
    }
    Ok(())
}

/// Failure force against stiffness, one polyline per (object, phi) block.
fn grip_plot(rows: &[StudyRow], shapes: &[ObjectShape]) -> String {
    let mut series = Vec::new();
    for &shape in shapes {
        let mut phis: Vec<f64> = rows.iter().filter(|r| r.object == shape).map(|r| r.phi).collect();
        phis.dedup();
        for phi in phis {
            let points = rows
                .iter()
                .filter(|r| r.object == shape && r.phi == phi)
                .filter_map(|r| r.failure_force.map(|f| (r.k, f)))
                .collect();
            series.push(svg::Series {
                name: format!("{shape} phi={phi}"),
                points,
                line: true,
            });
        }
    }
    svg::plot("Grip failure force", "K [Nm/rad]", "F [N]", &series, false)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}
