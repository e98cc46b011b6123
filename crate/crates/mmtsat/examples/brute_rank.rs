//! Exact minimum rank of small matrix multiplication tensors by exhaustive search.

use mmtsat::oracle::{brute_min_rank, MinRank, SearchBudget};
use mmtsat::tensor::verify;

fn main() {
    let budget = SearchBudget::new(7).expect("within limit");
    for (n, k, m) in [(1, 1, 1), (1, 2, 1), (2, 1, 2), (1, 2, 2), (2, 2, 2)] {
        match brute_min_rank(n, k, m, budget).expect("small tensor") {
            MinRank::Rank(d) => {
                assert!(verify(&d));
                println!("<{n},{k},{m}>: rank {}", d.rank());
            }
            other => println!("<{n},{k},{m}>: {other:?}"),
        }
    }
}
