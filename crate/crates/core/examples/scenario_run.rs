//! The config-driven pipeline the `hkit` binary uses, called from code.

use hkit::scenario::{example_config, execute, write_outputs, ScenarioKind};

/// Returns the directory the artifacts went to.
pub fn run_example() -> hkit::Result<std::path::PathBuf> {
    let cfg = example_config(ScenarioKind::WilczekZee);
    println!("{}", serde_json::to_string_pretty(&cfg).expect("config serializes"));
    let out = execute(&cfg)?;
    let dir = std::env::temp_dir().join(format!("hkit-scenario-{}", std::process::id()));
    write_outputs(&out, &dir)?;
    print!("{}", hkit::scenario::report_text(&out));
    Ok(dir)
}

fn main() -> hkit::Result<()> {
    let dir = run_example()?;
    println!("artifacts in {}", dir.display());
    Ok(())
}
