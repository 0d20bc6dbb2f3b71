//! Writes the deterministic synthetic slide used in tests and benchmarks.
//!
//! `cargo run -p display-aging --example synthetic_slide -- out.png [size] [seed]`

use display_aging::synthetic_slide;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let out = args.next().ok_or("usage: synthetic_slide <out.png> [size] [seed]")?;
    let size: u32 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(512);
    let seed: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1);
    synthetic_slide(size, size, seed).save_png(&out)?;
    Ok(())
}
