//! Check Strassen's algorithm, reduced mod 2, against the <2,2,2> tensor.

use mmtsat::tensor::{evaluate, mm_tensor, verify, Decomposition};

fn main() {
    let d = Decomposition::from_json(include_str!("data/strassen.json")).expect("well-formed JSON");
    let target = mm_tensor(2, 2, 2).expect("dims");
    println!("target <2,2,2> has {} nonzero entries", target.popcount());
    println!("Strassen: rank {}, valid = {}", d.rank(), verify(&d));

    // Dropping any product breaks it: the residual is one rank-1 term.
    let mut short = d.clone();
    short.triplets.pop();
    let mut residual = evaluate(&short);
    residual.xor_assign(&target);
    println!(
        "without the last product: valid = {}, residual has {} entries",
        verify(&short),
        residual.popcount()
    );
}
