//! Run complete campaigns on <2,2,2> with the bundled solver: rank 6 is
//! ruled out under cyclic symmetry and rank 7 is found.
//!
//! The example re-invokes itself as the solver process, so no external
//! SAT solver is needed.

use std::time::Duration;

use mmtsat::canonical::{check_canonical, SymmetricDecomposition};
use mmtsat::driver::{run_campaign, CampaignConfig, SolverCommand, Verdict};
use mmtsat::encoder::EncoderConfig;
use mmtsat::symmetry::GroupId;
use mmtsat::tensor::verify;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    if args.get(1).map(String::as_str) == Some("dimacs-solve") {
        std::process::exit(mmtsat::cli::run(args));
    }
    let me = std::env::current_exe().expect("own path");
    let solver = SolverCommand::new(&format!("'{}' dimacs-solve {{cnf}}", me.display())).expect("template");
    let work = std::env::temp_dir().join("mmtsat-example-search");
    let _ = std::fs::remove_dir_all(&work);

    for max_rank in [6, 7] {
        let cfg = CampaignConfig {
            group: GroupId::Cyclic,
            n: 2,
            max_rank,
            solver: solver.clone(),
            workers: 1,
            timeout: Some(Duration::from_secs(60)),
            checkpoint: Some(work.join(format!("checkpoint-{max_rank}.json"))),
            work_dir: work.clone(),
            encoder: EncoderConfig::default(),
            schedule: None,
        };
        let report = run_campaign(&cfg, &mut |r| {
            println!("  {:<16} {}", r.combo.to_string(), r.state.name())
        })
        .expect("campaign");
        println!("{}", report.table());
        if let Verdict::Found { combo, path } = &report.verdict {
            let text = std::fs::read_to_string(path).expect("saved decomposition");
            let sym = SymmetricDecomposition::from_json(&text).expect("parse");
            println!(
                "{combo}: valid = {}, canonical = {}\n  orbits: {}",
                verify(&sym.expand()),
                check_canonical(&sym).is_empty(),
                sym.to_json_value()["orbits"]
            );
        }
    }
}
