fn main() {
    std::process::exit(mmtsat::cli::run(std::env::args_os()));
}
