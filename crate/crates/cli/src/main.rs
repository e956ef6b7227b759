//! `relkin` command-line front end.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod cmd;
mod parse;

#[derive(Parser, Debug)]
#[command(name = "relkin", version, about = "Special-relativistic kinematics: reports, figure tables and checks")]
#[command(after_help = "Exit status: 0 when every check passes, 1 when a check fails, 2 on usage or I/O errors.")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Speed of light
    #[arg(long, global = true, default_value_t = 1.0)]
    pub c: f64,
    /// Replace the tolerance of every numeric check; without it each check
    /// uses its own pinned tolerance. The flag wins over RELKIN_TOL.
    #[arg(long, global = true, env = "RELKIN_TOL")]
    pub tol: Option<f64>,
    /// Seed for every sampled check
    #[arg(long, global = true, default_value_t = relkin_verify::DEFAULT_SEED)]
    pub seed: u64,
    /// Write the report into this directory instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Report format; csv is available for plot tables only
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Compose two (boost, rotation) pairs, or two Galilei pairs
    Compose(cmd::ComposeArgs),
    /// Polar decomposition L = B R of a proper orthochronous Lorentz matrix
    Polar(cmd::PolarArgs),
    /// Thomas angle tables and the perpendicular composition table
    Thomas(cmd::ThomasArgs),
    /// Velocity composition, gyration and the two divisions
    Velocity(cmd::VelocityArgs),
    /// Velocity-space distances, charts, cosine law and hodograph holonomy
    Hyperbolic(cmd::HyperbolicArgs),
    /// One-parameter kinematics: regime reports for a list of k
    Rp(cmd::RpArgs),
    /// Structure constants, contractions and exponential checks
    Lie(cmd::LieArgs),
    /// Causal lattice operations, orthomodularity battery and witness
    Lattice(cmd::LatticeArgs),
    /// Kinematic residual report for a velocity field
    Rigid(cmd::RigidArgs),
    /// Rotating-frame report over a radius grid
    Frame(cmd::FrameArgs),
    /// Run the full acceptance suite and write verify-all.json
    VerifyAll(cmd::VerifyArgs),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let g = &cli.global;
    let result = match &cli.cmd {
        Cmd::Compose(a) => cmd::compose(g, a),
        Cmd::Polar(a) => cmd::polar(g, a),
        Cmd::Thomas(a) => cmd::thomas(g, a),
        Cmd::Velocity(a) => cmd::velocity(g, a),
        Cmd::Hyperbolic(a) => cmd::hyperbolic(g, a),
        Cmd::Rp(a) => cmd::rp(g, a),
        Cmd::Lie(a) => cmd::lie(g, a),
        Cmd::Lattice(a) => cmd::lattice(g, a),
        Cmd::Rigid(a) => cmd::rigid(g, a),
        Cmd::Frame(a) => cmd::frame(g, a),
        Cmd::VerifyAll(a) => cmd::verify_all(g, a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("relkin: {msg}");
            ExitCode::from(2)
        }
    }
}
