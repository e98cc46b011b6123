//! Canonicalization cancels duplicate orbits, merges compatible ones and
//! sorts what is left.

use mmtsat::canonical::{canonicalize, check_canonical, SymmetricDecomposition};
use mmtsat::gf2::Gf2Matrix;
use mmtsat::symmetry::GroupId;
use mmtsat::tensor::{evaluate, Dims};

fn m(rows: [&[u8]; 2]) -> Gf2Matrix {
    Gf2Matrix::from_rows(&rows).expect("rectangular")
}

fn main() {
    let dims = Dims::square(2).expect("dims");
    let x = m([&[1, 0], &[0, 1]]);
    let y = m([&[0, 1], &[1, 1]]);
    let z = m([&[1, 1], &[0, 0]]);
    // (x,y,z) twice cancels; (y,x,z) and (y,x,x) share A and B so they merge.
    let id = vec![vec![y, x, z], vec![x, y, z], vec![x, y, z], vec![y, x, x]];
    let delta = vec![vec![z]];
    let sym = SymmetricDecomposition::new(GroupId::Cyclic, dims, vec![id, delta]).expect("valid reps");

    println!("input:  {} (rank {})", sym.combo(), sym.total_rank());
    for v in check_canonical(&sym) {
        println!("  violation: {v}");
    }
    let canon = canonicalize(&sym);
    println!("output: {} (rank {})", canon.combo(), canon.total_rank());
    println!("  violations: {}", check_canonical(&canon).len());
    println!(
        "  same tensor: {}",
        evaluate(&canon.expand()) == evaluate(&sym.expand())
    );
    println!("  orbits: {}", canon.to_json_value()["orbits"]);
}
