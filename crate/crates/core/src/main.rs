fn main() {
    std::process::exit(lowrank_admm::cli::run(std::env::args_os()));
}
