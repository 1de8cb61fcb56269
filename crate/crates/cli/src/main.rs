//! `nmrqc`: run emulator experiments, reproduce the result tables, design
//! pulses and run the verification suite.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use nmrqc_core::experiment::{canned_spec, check_table, table_tolerance, ProgramKind};
use nmrqc_core::programs::{
    parse_angle, parse_axis, parse_program, BuildOptions, FinalRotationStyle, PropagatorCache,
};
use nmrqc_core::pulse::{spectator_residual, RationalGamma};
use nmrqc_core::reference::TABLE_NAMES;
use nmrqc_core::{
    design_pulse, emit_table, run_experiment, verify_suite, CnotVariant, Error, ExperimentSpec,
    ImplStyle, MachineConfig, OutputFormat, PulseRequest, SfMode,
};

#[derive(Parser, Debug)]
#[command(
    name = "nmrqc",
    version,
    about = "Two-qubit NMR quantum computer emulator"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct GlobalOpts {
    /// Product-formula step delta/2pi for pulses.
    #[arg(long, global = true)]
    delta: Option<f64>,
    /// Output format: csv, markdown or json.
    #[arg(long, global = true)]
    format: Option<OutputFormat>,
    /// How the trailing Y1 of Y1 (CNOT)^5 runs: program or exact.
    #[arg(long, global = true)]
    final_rotation_style: Option<FinalRotationStyle>,
    /// Offset added to tau/2pi of every I'.
    #[arg(long, global = true, allow_negative_numbers = true)]
    tau_offset: Option<f64>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run an experiment described by a JSON file.
    Run { config: PathBuf },
    /// Reproduce a published table (table5..table10, grover-static).
    Tables {
        name: String,
        /// Also compare with the printed values; exit nonzero on mismatch.
        #[arg(long)]
        compare: bool,
    },
    /// Design a single-spin pulse: <spin> <angle> <axis> <mode> <k>.
    Design {
        spin: usize,
        /// Radians, or multiples of pi such as pi/2.
        #[arg(allow_hyphen_values = true)]
        angle: String,
        /// x, y, or the inverse -x / -y.
        #[arg(allow_hyphen_values = true)]
        axis: String,
        /// rotating or static.
        mode: SfMode,
        k: u64,
        /// gamma as N/M (default 1/4).
        #[arg(long, default_value = "1/4")]
        gamma: String,
    },
    /// Run one program over several pulse-duration integers k.
    Sweep {
        #[arg(long, value_delimiter = ',', required = true)]
        k_list: Vec<u64>,
        /// qa, cnot or grover.
        #[arg(long, default_value = "qa")]
        program: ProgramKind,
        /// CNOT variant: 1, 2, 3 or 3-printed.
        #[arg(long, default_value = "1")]
        variant: CnotVariant,
        /// ideal, static_sf or rotating_sf.
        #[arg(long, default_value = "rotating_sf")]
        style: ImplStyle,
        /// Row inputs (00,10,01,11,singlet or Grover items 0..3).
        #[arg(long, value_delimiter = ',')]
        inputs: Vec<String>,
    },
    /// Execute a program text file (one EO per line) and print (a, b).
    Exec {
        file: PathBuf,
        #[arg(long, default_value = "ideal")]
        style: ImplStyle,
        #[arg(long, default_value_t = 1)]
        k: u64,
    },
    /// Run the verification suite.
    Verify,
}

fn parse_gamma(text: &str) -> Result<RationalGamma> {
    let (n, m) = text
        .split_once('/')
        .with_context(|| format!("gamma '{text}' must be N/M"))?;
    Ok(RationalGamma::new(n.trim().parse()?, m.trim().parse()?)?)
}

fn apply_overrides(spec: &mut ExperimentSpec, g: &GlobalOpts) {
    if let Some(d) = g.delta {
        spec.delta = d;
    }
    if let Some(f) = g.final_rotation_style {
        spec.final_rotation_style = f;
    }
    if let Some(o) = g.tau_offset {
        spec.tau_offset = o;
    }
    if let Some(f) = g.format {
        spec.format = f;
    }
}

fn write_output(g: &GlobalOpts, text: &str) -> Result<()> {
    match &g.out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run_spec(mut spec: ExperimentSpec, g: &GlobalOpts) -> Result<()> {
    apply_overrides(&mut spec, g);
    let table = run_experiment(&spec)?;
    write_output(g, &emit_table(&table, spec.format)?)
}

fn design(
    g: &GlobalOpts,
    spin: usize,
    angle: &str,
    axis: &str,
    mode: SfMode,
    k: u64,
    gamma: &str,
) -> Result<()> {
    let (axis, direction) = parse_axis(axis)?;
    let gamma = parse_gamma(gamma)?;
    let machine = MachineConfig {
        gamma: gamma.value(),
        h2z: gamma.value(),
        ..MachineConfig::default()
    };
    let req = PulseRequest {
        target_spin: spin,
        angle: parse_angle(angle)?,
        axis,
        direction,
        gamma,
        k,
        mode,
    };
    let (design, mut eo) = design_pulse(&req, &machine)?;
    eo.delta_over_2pi = g.delta.unwrap_or(eo.delta_over_2pi);
    let residual = spectator_residual(&design, &machine);
    let text = match g.format.unwrap_or(OutputFormat::Markdown) {
        OutputFormat::Json => {
            let v =
                serde_json::json!({ "design": design, "eo": eo, "spectator_residual": residual });
            serde_json::to_string_pretty(&v)? + "\n"
        }
        OutputFormat::Csv => {
            let a = &eo.sf_amplitudes;
            format!(
                "spin,tau_over_2pi,omega,h1x,h2x,phi_x,h1y,h2y,phi_y\n{spin},{},{},{:.7},{:.7},{},{:.7},{:.7},{}\n",
                eo.tau_over_2pi, eo.omega, a[0][0], a[1][0], eo.phi_x, a[0][1], a[1][1], eo.phi_y
            )
        }
        OutputFormat::Markdown => {
            // Adding 0.0 turns -0.0 into +0.0 so zero amplitudes print unsigned.
            let a = eo.sf_amplitudes.map(|r| r.map(|v| v + 0.0));
            let phase = |p: f64| {
                let q = p / std::f64::consts::FRAC_PI_2;
                match q.round() as i64 {
                    _ if (q - q.round()).abs() > 1e-12 => format!("{p:.7}"),
                    0 => "0".into(),
                    1 => "pi/2".into(),
                    -1 => "-pi/2".into(),
                    n => format!("{n}pi/2"),
                }
            };
            let mut s = String::new();
            match mode {
                SfMode::Rotating => {
                    s += "| | tau/2pi | omega | h~1x | h~2x | phi_x | h~1y | h~2y | phi_y |\n|---|---|---|---|---|---|---|---|---|\n";
                    s += &format!(
                        "| spin {spin} | {} | {:.2} | {:.7} | {:.7} | {} | {:.7} | {:.7} | {} |\n",
                        eo.tau_over_2pi,
                        eo.omega,
                        a[0][0],
                        a[1][0],
                        phase(eo.phi_x),
                        a[0][1],
                        a[1][1],
                        phase(eo.phi_y)
                    );
                }
                SfMode::StaticAxis => {
                    s += "| | tau/2pi | omega | h~1x | h~2x | h~1y | h~2y |\n|---|---|---|---|---|---|---|\n";
                    s += &format!(
                        "| spin {spin} | {} | {:.2} | {:.7} | {:.7} | {:.7} | {:.7} |\n",
                        eo.tau_over_2pi, eo.omega, a[0][0], a[1][0], a[0][1], a[1][1]
                    );
                }
            }
            s += &format!(
                "\ns = {}, margin 2kNM(M-N) = {} ({:?}), spectator residual = {:.3e}\n",
                design.s, design.margin.value, design.margin.verdict, residual
            );
            s
        }
    };
    write_output(g, &text)
}

fn exec(g: &GlobalOpts, file: &PathBuf, style: ImplStyle, k: u64) -> Result<()> {
    let text = fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let mut opts = BuildOptions::styled(style, k);
    if let Some(d) = g.delta {
        opts.delta_over_2pi = d;
    }
    if let Some(o) = g.tau_offset {
        opts.iprime_tau_offset = o;
    }
    let program = parse_program(&file.display().to_string(), &text, &opts)?;
    let state = program.run(&PropagatorCache::new())?;
    let (a, b) = state.qubit_pair();
    let out = match g.format.unwrap_or(OutputFormat::Markdown) {
        OutputFormat::Json => {
            let amps: Vec<[f64; 2]> = state.amplitudes().iter().map(|z| [z.re, z.im]).collect();
            serde_json::to_string_pretty(&serde_json::json!({"a": a, "b": b, "amplitudes": amps}))?
                + "\n"
        }
        OutputFormat::Csv => format!("a,b\n{a:.12e},{b:.12e}\n"),
        OutputFormat::Markdown => format!("| a | b |\n|---|---|\n| {a:.2} | {b:.2} |\n"),
    };
    write_output(g, &out)
}

fn run(cli: Cli) -> Result<bool> {
    let g = &cli.global;
    match cli.command {
        Command::Run { config } => {
            let text = fs::read_to_string(&config)
                .with_context(|| format!("reading {}", config.display()))?;
            run_spec(ExperimentSpec::from_json(&text)?, g)?;
        }
        Command::Tables { name, compare } => {
            let Some(mut spec) = canned_spec(&name) else {
                return Err(Error::Config(format!(
                    "unknown table '{name}'; available: {}",
                    TABLE_NAMES.join(", ")
                ))
                .into());
            };
            if compare {
                let (table, cmp) = check_table(&name)?;
                apply_overrides(&mut spec, g);
                write_output(g, &emit_table(&table, spec.format)?)?;
                for line in cmp.failures.iter().chain(&cmp.excluded) {
                    eprintln!("{line}");
                }
                eprintln!(
                    "{name}: {} cells compared at tolerance {}, max deviation {:.4}, {} failed, {} excluded",
                    cmp.compared,
                    table_tolerance(&name),
                    cmp.max_deviation,
                    cmp.failures.len(),
                    cmp.excluded.len()
                );
                return Ok(cmp.failures.is_empty());
            }
            run_spec(spec, g)?;
        }
        Command::Design {
            spin,
            angle,
            axis,
            mode,
            k,
            gamma,
        } => design(g, spin, &angle, &axis, mode, k, &gamma)?,
        Command::Sweep {
            k_list,
            program,
            variant,
            style,
            inputs,
        } => {
            let spec = ExperimentSpec {
                name: "sweep".into(),
                program,
                cnot_variant: variant,
                style,
                k_list,
                inputs,
                ..ExperimentSpec::default()
            };
            run_spec(spec, g)?;
        }
        Command::Exec { file, style, k } => exec(g, &file, style, k)?,
        Command::Verify => {
            let report = verify_suite();
            let text = match g.format {
                Some(OutputFormat::Json) => serde_json::to_string_pretty(&report)? + "\n",
                _ => report.render(),
            };
            write_output(g, &text)?;
            return Ok(report.passed());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            let validation = e
                .downcast_ref::<Error>()
                .is_some_and(|e| matches!(e, Error::Validation(_) | Error::Config(_)));
            ExitCode::from(if validation { 2 } else { 1 })
        }
    }
}
