//! Writes the generated part of the corpus: `algebra.json`,
//! `modules/*.json` and `selection.json` for every fixture entry.
//! The manifest, claims and notes are maintained by hand.
//!
//! Usage: `cargo run --example gen_corpus [-- <corpus dir>]`

use std::path::PathBuf;

use stabext_core::algebra::save_algebra;
use stabext_core::modcat::save_module;
use stabext_core::workbench::{default_corpus_dir, fixtures};

fn main() -> stabext_core::Result<()> {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(default_corpus_dir);
    for e in fixtures::corpus_entries()? {
        let edir = dir.join(&e.name);
        std::fs::create_dir_all(edir.join("modules"))?;
        save_algebra(e.algebra.presentation(), &edir.join("algebra.json"))?;
        for m in &e.modules {
            save_module(m, &edir.join("modules").join(format!("{}.json", m.name().expect("corpus modules are named"))))?;
        }
        if let Some(sel) = &e.selection {
            let text = serde_json::to_string_pretty(sel).expect("selections serialize");
            std::fs::write(edir.join("selection.json"), text + "\n")?;
        }
        println!("{}: {} modules", e.name, e.modules.len());
    }
    Ok(())
}
