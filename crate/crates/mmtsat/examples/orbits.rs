//! Expand one representative of every orbit kind and confirm the result is
//! invariant under the group.

use mmtsat::gf2::all_square;
use mmtsat::symmetry::{expand_orbit, is_group_symmetric, validate_rep, GroupId};
use mmtsat::tensor::{Decomposition, Dims};

fn main() {
    for group in [GroupId::Cyclic, GroupId::CyclicTranspose, GroupId::CyclicSandwich] {
        let n = group.required_n().unwrap_or(2);
        let dims = Dims::square(n).expect("dims");
        println!("{} on {dims}, generators: {}", group.label(), group.generators().len());
        for &kind in group.kinds() {
            // first nonzero matrix whose repeated use satisfies the side conditions
            let rep = all_square(n)
                .skip(1)
                .map(|m| vec![m; kind.arity()])
                .find(|rep| validate_rep(group, kind, rep).is_ok())
                .expect("some valid representative");
            let orbit = Decomposition::new(dims, expand_orbit(group, kind, &rep).expect("valid")).expect("shapes");
            println!(
                "  {:<6} arity {}  orbit length {}  symmetric = {}",
                kind.name(),
                kind.arity(),
                orbit.rank(),
                is_group_symmetric(&orbit, group)
            );
        }
    }
}
