use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use lincat::error::EXIT_VALIDATION;
use lincat::{execute, Command};

#[derive(Parser)]
#[command(name = "lincat", version, about = "Chern classes of projective modules over finite linear categories")]
struct Cli {
    /// `text` for people, `machine` for JSON.
    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    output: Output,
    #[command(subcommand)]
    command: Sub,
}

#[derive(Clone, Copy, ValueEnum)]
enum Output {
    Text,
    Machine,
}

#[derive(Subcommand)]
enum Sub {
    /// Check category and DG axioms, idempotents and references.
    Validate { file: String },
    /// Dimensions and bases of de Rham cohomology.
    Cohomology {
        file: String,
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// Hattori-Stallings trace of an endomorphism.
    Trace {
        file: String,
        #[arg(long)]
        module: String,
        #[arg(long)]
        endo: String,
    },
    /// Chern character in degree 2q; Levi-Civita when no connection is named.
    Chern {
        file: String,
        #[arg(long)]
        module: String,
        #[arg(long)]
        connection: Option<String>,
        #[arg(long)]
        q: usize,
    },
    /// Transgression form between two connections on one module.
    Invariance {
        file: String,
        #[arg(long)]
        module: String,
        #[arg(long = "connection", num_args = 1, required = true)]
        connections: Vec<String>,
        #[arg(long)]
        q: usize,
    },
    /// Chern character of a formal combination such as "P + Q - S".
    K0 {
        file: String,
        #[arg(long, allow_hyphen_values = true)]
        element: String,
        #[arg(long)]
        q: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_VALIDATION as u8 } else { 0 });
        }
    };
    let (file, command) = match cli.command {
        Sub::Validate { file } => (file, Command::Validate),
        Sub::Cohomology { file, max_degree } => (file, Command::Cohomology { max_degree }),
        Sub::Trace { file, module, endo } => (file, Command::Trace { module, endomorphism: endo }),
        Sub::Chern { file, module, connection, q } => (file, Command::Chern { module, connection, q }),
        Sub::Invariance { file, module, connections, q } => {
            let Ok(pair) = <[String; 2]>::try_from(connections) else {
                eprintln!("error: invariance takes exactly two --connection arguments");
                return ExitCode::from(EXIT_VALIDATION as u8);
            };
            (file, Command::Invariance { module, connections: pair, q })
        }
        Sub::K0 { file, element, q } => (file, Command::K0 { element, q }),
    };
    let report = execute(&file, &command);
    match cli.output {
        Output::Text => print!("{}", report.to_text()),
        Output::Machine => print!("{}", report.to_machine()),
    }
    ExitCode::from(report.exit_code as u8)
}
