//! Writes a state as SFWF, reads it back and prints the manifest.
//!
//! Run with `cargo run --release --example sfwf -- out/state.json`.

use std::path::PathBuf;

use spinor_forge::fields::sfwf::{companion_path, read_sfwf, write_sfwf, SfwfManifest};
use spinor_forge::fields::{convert, make_gaussian_packet, MomentumGrid, StateRep};
use spinor_forge::linalg::C64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args().nth(1).map_or_else(|| std::env::temp_dir().join("spinor-forge-state.json"), PathBuf::from);
    let grid = MomentumGrid::new([16, 12, 8], [10.0, 8.0, 6.0], 1.0)?;
    let w = [1.0, 0.0, 0.5, 0.0].map(|x| C64::new(x, 0.0));
    let st = convert(&make_gaussian_packet(&grid, 4, [0.2, 0.1, 0.0], 0.8, &w)?, StateRep::Dirac)?;
    write_sfwf(&st, &path)?;
    println!("{}", serde_json::to_string_pretty(&SfwfManifest::for_state(&st))?);
    println!("binary: {}", companion_path(&path).display());
    let back = read_sfwf(&path)?;
    println!("read back identical: {}", back == st);
    Ok(())
}
