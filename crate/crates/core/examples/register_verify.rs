//! Minimal library walkthrough: register a procedural scene, damage the
//! released asset, verify it, and print the layered report.
//!
//! ```sh
//! cargo run -p imgdrm --example register_verify
//! ```

use imgdrm::attacks::{apply_attack, AttackSpec};
use imgdrm::imaging;
use imgdrm::pipeline::{self, OwnerInfo, PipelineConfig};
use imgdrm::registry::{Cas, Cid, Ledger, SystemClock};
use imgdrm::synth;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = std::env::temp_dir().join("imgdrm-example");
    let _ = std::fs::remove_dir_all(&root);
    let ledger = Ledger::open(root.join("ledger"))?;
    let cas = Cas::open(root.join("cas"))?;
    let config = PipelineConfig::default();

    let scene = synth::test_scene(synth::DEFAULT_SCENE_SEED);
    let owner = OwnerInfo {
        owner: "Harbor Studio".into(),
        creation_name: "Harbor Sunrise".into(),
        creation_author: "A. Painter".into(),
        copyright_owner: "Harbor Studio".into(),
        mail_address: "a.painter@example.org".into(),
    };
    let outcome = pipeline::register(&scene, &owner, &config, &ledger, &cas, &SystemClock, None)?;
    println!("registered block 0x{}", outcome.block_hash);
    println!("image id {}", outcome.image_id);

    // Pull the released watermarked asset back out of the store and put it
    // through a lossy channel.
    let released = imaging::decode_png(&cas.get(&Cid::parse(&outcome.cas_cid)?)?)?;
    let attacked = apply_attack(&released, &AttackSpec::default_jpeg())?;

    let report = pipeline::verify(&attacked, &config, &ledger, &cas)?;
    print!("{}", report.to_text());

    std::fs::remove_dir_all(&root)?;
    Ok(())
}
