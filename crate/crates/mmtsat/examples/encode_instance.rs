//! Build the CNF for one orbit-count combination and inspect it.

use mmtsat::encoder::{encode, EncoderConfig};
use mmtsat::symmetry::{Combo, GroupId};
use mmtsat::tensor::Dims;

fn main() {
    let group = GroupId::CyclicTranspose;
    let dims = Dims::square(3).expect("dims");
    let combo = Combo::parse(group, "id=1,t=2,full=1").expect("combo");
    for xor_width in [3, 4, 6] {
        let cfg = EncoderConfig {
            xor_width,
            ..EncoderConfig::default()
        };
        let (cnf, map) = encode(group, dims, &combo, &cfg).expect("encodable");
        println!(
            "{group} {dims} {combo} (rank {}), xor width {xor_width}: {} vars ({} primary), {} clauses",
            combo.total_rank(),
            cnf.num_vars,
            map.primary.len(),
            cnf.clauses.len()
        );
    }

    let (cnf, _) = encode(group, dims, &combo, &EncoderConfig::default()).expect("encodable");
    let text = cnf.to_dimacs();
    println!("\nDIMACS header and variable legend:");
    for line in text.lines().take(8) {
        println!("  {line}");
    }
    let dir = std::env::temp_dir().join("mmtsat-example");
    std::fs::create_dir_all(&dir).expect("temp dir");
    let path = dir.join("cyc-t-n3.cnf");
    std::fs::write(&path, text).expect("write");
    println!("\nwrote {}", path.display());
}
