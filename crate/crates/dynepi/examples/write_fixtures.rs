//! Regenerates the model files under `fixtures/` at the workspace root.

use std::path::Path;

use dynepi::save_model;
use dynepi_core::puzzles;

fn main() -> std::io::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    std::fs::create_dir_all(&dir)?;
    for (name, model) in [
        ("cheryl", puzzles::build_cheryl()),
        ("blind", puzzles::build_blind()),
        ("abby", puzzles::build_abby()),
    ] {
        let path = dir.join(format!("{name}.model"));
        std::fs::write(&path, save_model(&model))?;
        println!("{}", path.display());
    }
    Ok(())
}
