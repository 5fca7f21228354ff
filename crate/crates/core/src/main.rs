fn main() {
    std::process::exit(mumford_core::cli::run(std::env::args_os()));
}
