use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use godeaux::proof::{Fixtures, ProofTree, Selector};

#[derive(Parser)]
#[command(name = "verify", version, about = "Replay the order-3 automorphism exclusion for numerical Godeaux surfaces")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the proof tree, or the part of it that a node depends on
    Run {
        /// Node id, or one of i, ii, iii
        #[arg(long)]
        node: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Write the report here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Directory with fixtures/ and tables/ (default: the copies built in)
        #[arg(long)]
        data: Option<PathBuf>,
        /// Per-node wall time on stderr
        #[arg(long)]
        timing: bool,
    },
    /// Show one node with its dependencies and full trace
    Explain {
        id: String,
        #[arg(long)]
        data: Option<PathBuf>,
    },
    /// Compare fixture files with freshly computed values
    Fixtures {
        #[command(subcommand)]
        cmd: FixturesCmd,
    },
}

#[derive(Subcommand)]
enum FixturesCmd {
    Check {
        #[arg(long)]
        data: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn load(data: &Option<PathBuf>) -> Result<Fixtures, String> {
    match data {
        Some(d) => Fixtures::from_dir(d),
        None => Fixtures::embedded(),
    }
    .map_err(|e| e.to_string())
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("verify: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match cli.cmd {
        Cmd::Run { node, format, out, jobs, data, timing } => {
            let fx = match load(&data) {
                Ok(f) => f,
                Err(e) => return fail(e),
            };
            let sel = node.as_deref().map_or(Selector::All, Selector::parse);
            let (report, times) = match ProofTree::standard().run(&sel, fx, jobs) {
                Ok(r) => r,
                Err(e) => return fail(e),
            };
            if timing {
                for (id, t) in &times {
                    eprintln!("{:>10.3} ms  {id}", t.as_secs_f64() * 1e3);
                }
            }
            let body = match format {
                Format::Text => report.to_text(),
                Format::Json => report.to_json(),
            };
            match out {
                Some(p) => {
                    if let Err(e) = std::fs::write(&p, body) {
                        return fail(format!("{}: {e}", p.display()));
                    }
                }
                None => {
                    // a closed pipe is not an error worth reporting
                    let _ = std::io::stdout().write_all(body.as_bytes());
                }
            }
            if report.verified() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Cmd::Explain { id, data } => {
            let fx = match load(&data) {
                Ok(f) => f,
                Err(e) => return fail(e),
            };
            let tree = ProofTree::standard();
            let Some(spec) = tree.get(&id) else {
                return fail(format!("unknown node {id}"));
            };
            let (report, _) = match tree.run(&Selector::Node(id.clone()), fx, 1) {
                Ok(r) => r,
                Err(e) => return fail(e),
            };
            let r = report.node(&id).expect("target is in its own closure");
            println!("{} ({:?}): {}", r.id, r.kind, r.title);
            if !r.depends_on.is_empty() {
                println!("depends on: {}", r.depends_on.join(", "));
            }
            if let Some(c) = spec.citation {
                println!("citation: {c}");
            }
            println!("status: {}", r.status.as_str());
            println!("result: {}", r.summary);
            if let Some(why) = &r.reason {
                println!("reason: {why}");
            }
            for line in &r.trace {
                println!("  {line}");
            }
            if r.status == godeaux::proof::Status::Failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Cmd::Fixtures { cmd: FixturesCmd::Check { data } } => {
            let fx = match load(&data) {
                Ok(f) => f,
                Err(e) => return fail(e),
            };
            let checks = fx.check();
            for c in &checks {
                println!("{} {}{}", if c.ok { "ok  " } else { "FAIL" }, c.name, c.detail.as_deref().map(|d| format!(": {d}")).unwrap_or_default());
            }
            if checks.iter().all(|c| c.ok) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
