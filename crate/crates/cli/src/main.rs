mod args;
mod run;

use args::Cli;
use clap::Parser;
use run::Report;
use serde_json::{json, Map, Value};
use std::io::Write;
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

fn init_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("SCC_THREADS") {
        let n: usize = v.parse().ok().filter(|&n| n > 0).ok_or_else(|| anyhow::anyhow!("invalid SCC_THREADS={v:?}"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn emit(cli: &Cli, text: &str) -> anyhow::Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = init_threads().and_then(|_| run::run(&cli.command));
    let outcome = match outcome {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let text = match outcome.report {
        Report::Text(t) => t,
        Report::Json(v) => {
            let mut doc = Map::new();
            doc.insert("schema".into(), json!(1));
            doc.insert("command".into(), json!(outcome.command));
            if let Some(pass) = outcome.pass {
                doc.insert("pass".into(), json!(pass));
            }
            doc.insert("result".into(), v);
            if !cli.no_meta {
                let now = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
                doc.insert(
                    "meta".into(),
                    json!({
                        "version": env!("CARGO_PKG_VERSION"),
                        "timestamp_unix": now,
                        "elapsed_ms": start.elapsed().as_millis() as u64,
                    }),
                );
            }
            let mut t = serde_json::to_string_pretty(&Value::Object(doc)).expect("JSON values serialize");
            t.push('\n');
            t
        }
    };
    if let Err(e) = emit(&cli, &text) {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    match outcome.pass {
        Some(false) => ExitCode::from(1),
        _ => ExitCode::SUCCESS,
    }
}
