//! Regenerates the committed rewrite-script fixtures in `tests/fixtures/`.
//!
//! Each fixture connects the anti-ordered side of an affine identity to its
//! ordered factorization at one truncation degree, using only verified steps.
//! Run from the crate root after changing the script generator:
//!
//! ```text
//! cargo run -p csd-core --example regen_fixtures
//! ```

use std::fmt::Write as _;
use std::path::Path;

use csd_core::{build, format_script, untangle_script, Context, IdentityId, IdentityParams};

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    for id in [IdentityId::A11, IdentityId::A22] {
        for degree in 2..=6u32 {
            let ctx = Context::standard(degree);
            let inst = build(id, &IdentityParams::default(), &ctx).expect("affine instance");
            let lhs = inst.lhs.expand(degree).expect("lhs factors");
            let (steps, final_factors) =
                untangle_script(&ctx, &lhs).expect("affine products sort at this cutoff");

            let mut text = String::new();
            let _ = writeln!(
                text,
                "# {} truncated at degree {degree}: sorts the anti-ordered side",
                id.name()
            );
            let _ = writeln!(
                text,
                "# into the ordered factorization ({} steps, {} final factors)",
                steps.len(),
                final_factors.len()
            );
            text.push_str(&format_script(&steps));

            let path = dir.join(format!("{}-degree-{degree}.steps", id.name()));
            std::fs::write(&path, text).expect("write fixture");
            println!("wrote {}", path.display());
        }
    }
}
